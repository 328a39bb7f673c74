//! Phase-tracked Pauli operators and GF(2) symplectic bases.
//!
//! An operator is stored as `i^phase * X^x Z^z` with `Y = iXZ`, so the letter
//! `Y` on one qubit carries one unit of phase. The plain-text form prints the
//! coefficient in front of the letters instead: `+XIZ`, `-iYY`, `+i Z`.
//!
//! Rank, span and centralizer computations all run on the phase-free
//! `(x | z)` vectors; phases only enter through [`PauliOperator::multiply`].

use std::fmt;
use std::str::FromStr;

use crate::bits::{BitMatrix, BitVec, Echelon};
use crate::error::{parse_err, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' | '_' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub const NONTRIVIAL: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];
}

/// An n-qubit Pauli operator `i^phase * X^x Z^z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    pub fn new(x: BitVec, z: BitVec, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        Ok(PauliOperator {
            x,
            z,
            phase: phase % 4,
        })
    }

    /// Hermitian operator with letter coefficient `+1` built from `(x | z)`.
    pub fn from_symplectic(n: usize, v: &BitVec) -> Self {
        debug_assert_eq!(v.len(), 2 * n);
        let x = v.slice(0, n);
        let z = v.slice(n, 2 * n);
        let phase = (x.overlap(&z) % 4) as u8;
        PauliOperator { x, z, phase }
    }

    /// The same letter on every qubit of `support`, coefficient `+1`.
    pub fn on_support(n: usize, support: impl IntoIterator<Item = usize>, letter: Letter) -> Self {
        let mut p = PauliOperator::identity(n);
        for q in support {
            p.set_letter(q, letter);
        }
        p
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        PauliOperator::on_support(n, [qubit], letter)
    }

    /// Sets qubit `q` to `letter`, keeping the printed coefficient unchanged.
    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        let coeff = self.coefficient();
        let (xb, zb) = letter.bits();
        self.x.set(q, xb);
        self.z.set(q, zb);
        self.phase = (coeff + self.y_count()) % 4;
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, q: usize) -> Letter {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn y_count(&self) -> u8 {
        (self.x.overlap(&self.z) % 4) as u8
    }

    /// Exponent `c` of the printed coefficient `i^c` in front of the letters.
    pub fn coefficient(&self) -> u8 {
        (self.phase + 4 - self.y_count()) % 4
    }

    pub fn is_hermitian(&self) -> bool {
        self.coefficient() % 2 == 0
    }

    /// Same letters with coefficient `+1`.
    pub fn hermitian(&self) -> Self {
        PauliOperator {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: self.y_count(),
        }
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.phase = (p.phase + 2) % 4;
        p
    }

    pub fn weight(&self) -> usize {
        let mut s = self.x.clone();
        s.or_assign(&self.z);
        s.count_ones()
    }

    pub fn support_bits(&self) -> BitVec {
        let mut s = self.x.clone();
        s.or_assign(&self.z);
        s
    }

    pub fn support(&self) -> Vec<usize> {
        self.support_bits().iter_ones().collect()
    }

    /// Trivial up to phase.
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// `(x | z)` as one vector of length `2n`.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    fn check_len(&self, other: &PauliOperator) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::LengthMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Group product `self * other` with exact phase.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_len(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliOperator) -> PauliOperator {
        // X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
        let swaps = (self.z.overlap(&other.x) % 2) as u8;
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        PauliOperator {
            x,
            z,
            phase: (self.phase + other.phase + 2 * swaps) % 4,
        }
    }

    pub fn inverse(&self) -> PauliOperator {
        // (X^x Z^z)^{-1} = Z^z X^x = (-1)^{x.z} X^x Z^z
        let sign = (self.x.overlap(&self.z) % 2) as u8;
        PauliOperator {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: (4 - self.phase + 2 * sign) % 4,
        }
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.commutes_with(other))
    }

    #[inline]
    pub(crate) fn commutes_with(&self, other: &PauliOperator) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Restriction to the qubits in `keep` (identity elsewhere), coefficient `+1`.
    pub fn restricted(&self, keep: &BitVec) -> PauliOperator {
        let mut x = self.x.clone();
        x.and_assign(keep);
        let mut z = self.z.clone();
        z.and_assign(keep);
        let phase = (x.overlap(&z) % 4) as u8;
        PauliOperator { x, z, phase }
    }

    /// Relabels qubit `q` to `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> PauliOperator {
        let n = self.num_qubits();
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for q in self.x.iter_ones() {
            x.set(perm[q], true);
        }
        for q in self.z.iter_ones() {
            z.set(perm[q], true);
        }
        PauliOperator {
            x,
            z,
            phase: self.phase,
        }
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.coefficient() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (coeff, letters) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else {
            (0, s)
        };
        let letters: Vec<Letter> = letters
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| Letter::from_char(c).ok_or_else(|| parse_err(None, format!("bad Pauli letter '{c}'"))))
            .collect::<Result<_>>()?;
        let n = letters.len();
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for (q, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            x.set(q, xb);
            z.set(q, zb);
        }
        let y = (x.overlap(&z) % 4) as u8;
        Ok(PauliOperator {
            x,
            z,
            phase: (coeff + y) % 4,
        })
    }
}

/// Symplectic inner product of two `(x | z)` vectors of length `2n`.
pub fn symplectic_product(n: usize, a: &BitVec, b: &BitVec) -> bool {
    let mut acc = false;
    for i in a.iter_ones() {
        let j = if i < n { i + n } else { i - n };
        acc ^= b.get(j);
    }
    acc
}

/// Result of a span-membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanVerdict {
    pub member: bool,
    /// Which basis rows multiply to the operator (phase-free), when a member.
    pub combination: Option<BitVec>,
    /// In phase mode: `r` such that `P = i^r * prod(rows)`.
    pub residual_phase: Option<u8>,
}

/// An ordered list of Pauli generators on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    n: usize,
    rows: Vec<PauliOperator>,
    reduced: bool,
}

impl SymplecticBasis {
    pub fn empty(n: usize) -> Self {
        SymplecticBasis {
            n,
            rows: Vec::new(),
            reduced: true,
        }
    }

    pub fn new(n: usize, rows: Vec<PauliOperator>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.num_qubits() != n) {
            return Err(Error::LengthMismatch {
                left: n,
                right: bad.num_qubits(),
            });
        }
        Ok(SymplecticBasis {
            n,
            rows,
            reduced: false,
        })
    }

    pub(crate) fn from_reduced(n: usize, rows: Vec<PauliOperator>) -> Self {
        SymplecticBasis {
            n,
            rows,
            reduced: true,
        }
    }

    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let ops: Vec<PauliOperator> = rows.iter().map(|s| s.as_ref().parse()).collect::<Result<_>>()?;
        let n = ops.first().map_or(0, |p| p.num_qubits());
        SymplecticBasis::new(n, ops)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[PauliOperator] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Phase-free `(x | z)` generator matrix with `2n` columns.
    pub fn matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::with_cols(2 * self.n);
        for r in &self.rows {
            m.push_row(&r.symplectic());
        }
        m
    }

    /// Rows with `x` and `z` halves swapped, so that `matrix_swapped * v`
    /// gives the symplectic products with `v`.
    pub(crate) fn check_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::with_cols(2 * self.n);
        for r in &self.rows {
            m.push_row(&r.z().concat(r.x()));
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }

    pub fn echelon(&self) -> Echelon {
        self.matrix().rref()
    }

    /// Product of the rows selected by `combo`, multiplied in index order.
    pub fn product(&self, combo: &BitVec) -> PauliOperator {
        let mut acc = PauliOperator::identity(self.n);
        for i in combo.iter_ones() {
            acc = acc.mul_unchecked(&self.rows[i]);
        }
        acc
    }

    /// Echelon basis of the same phase-free span, plus its rank. Each output
    /// row is an actual product of input rows, so its phase is meaningful.
    pub fn row_reduce(&self) -> (SymplecticBasis, usize) {
        let t = self.matrix().rref_tracked();
        let rank = t.rank();
        let rows = (0..rank).map(|i| self.product(&t.transform.row(i))).collect();
        (SymplecticBasis::from_reduced(self.n, rows), rank)
    }

    pub fn in_span(&self, p: &PauliOperator, check_phase: bool) -> Result<SpanVerdict> {
        if p.num_qubits() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: p.num_qubits(),
            });
        }
        let t = self.matrix().rref_tracked();
        let combo = t.solve(&p.symplectic());
        let residual_phase = match (&combo, check_phase) {
            (Some(c), true) => {
                let prod = self.product(c);
                Some((p.phase() + 4 - prod.phase()) % 4)
            }
            _ => None,
        };
        Ok(SpanVerdict {
            member: combo.is_some(),
            combination: combo,
            residual_phase,
        })
    }

    /// All Paulis (mod phase) commuting with every row; dimension `2n - rank`.
    pub fn centralizer(&self) -> SymplecticBasis {
        let kernel = self.check_matrix().kernel();
        let rows = kernel
            .iter()
            .map(|v| PauliOperator::from_symplectic(self.n, v))
            .collect::<Vec<_>>();
        let basis = SymplecticBasis::from_reduced(self.n, rows);
        basis.row_reduce().0.normalized()
    }

    /// Gram matrix of pairwise symplectic products between rows.
    fn gram(&self) -> BitMatrix {
        let r = self.rows.len();
        let mut g = BitMatrix::zeros(r, r);
        for i in 0..r {
            for j in (i + 1)..r {
                if !self.rows[i].commutes_with(&self.rows[j]) {
                    g.set(i, j, true);
                    g.set(j, i, true);
                }
            }
        }
        g
    }

    pub fn is_abelian(&self) -> bool {
        self.gram().is_zero()
    }

    /// Center of the generated group, i.e. `span ∩ centralizer`, with every
    /// generator normalized to the Hermitian `+` sign.
    pub fn center(&self) -> SymplecticBasis {
        let combos = self.gram().kernel();
        let rows: Vec<PauliOperator> = combos
            .iter()
            .map(|c| self.product(c).hermitian())
            .filter(|p| !p.is_identity())
            .collect();
        SymplecticBasis::from_reduced(self.n, rows)
            .row_reduce()
            .0
            .normalized()
    }

    /// Same rows with coefficient `+1`.
    pub fn normalized(mut self) -> Self {
        for r in &mut self.rows {
            *r = r.hermitian();
        }
        self
    }

    pub fn permuted(&self, perm: &[usize]) -> SymplecticBasis {
        SymplecticBasis {
            n: self.n,
            rows: self.rows.iter().map(|r| r.permuted(perm)).collect(),
            reduced: false,
        }
    }
}
