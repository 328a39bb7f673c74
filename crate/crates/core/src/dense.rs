//! Dense state-vector checks for small codes and small gates.
//!
//! Basis state `|b>` has qubit `q` in bit `q` of `b`. Everything here is
//! exponential in the number of qubits and only meant for `n <= 10` (codes)
//! or `n <= 3` (hierarchy definitions).

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::code::SubsystemCode;
use crate::error::{Error, Result};
use crate::hierarchy::{diagonal_level, CliffordLevel, PhasePolynomial};
use crate::pauli::PauliOperator;

pub const MAX_DENSE_QUBITS: usize = 10;
const TOL: f64 = 1e-9;

type Vector = Vec<Complex64>;

fn i_pow(p: u8) -> Complex64 {
    match p % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A gate that can be applied to state vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenseGate {
    Pauli(PauliOperator),
    /// `|x> -> w^f(x) |x>`; the polynomial's variables are the code qubits.
    Diagonal(PhasePolynomial),
}

impl DenseGate {
    pub fn num_qubits(&self) -> usize {
        match self {
            DenseGate::Pauli(p) => p.num_qubits(),
            DenseGate::Diagonal(f) => f.num_qubits(),
        }
    }

    pub fn dagger(&self) -> DenseGate {
        match self {
            DenseGate::Pauli(p) => DenseGate::Pauli(p.inverse()),
            DenseGate::Diagonal(f) => {
                let m = f.modulus();
                let terms = f
                    .terms()
                    .iter()
                    .map(|(&mask, &c)| ((0..64).filter(|j| mask >> j & 1 == 1).collect::<Vec<_>>(), (m - c) % m));
                DenseGate::Diagonal(
                    PhasePolynomial::from_terms(f.num_qubits(), f.kappa(), terms).expect("same shape"),
                )
            }
        }
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vector {
        match self {
            DenseGate::Pauli(p) => apply_pauli(p, psi),
            DenseGate::Diagonal(f) => {
                let step = PI / (1u64 << (f.kappa() - 1)) as f64;
                psi.iter()
                    .enumerate()
                    .map(|(b, a)| a * Complex64::from_polar(1.0, step * f.evaluate(b as u64) as f64))
                    .collect()
            }
        }
    }
}

fn pauli_masks(p: &PauliOperator) -> (usize, usize) {
    let x = p.x().iter_ones().fold(0usize, |m, q| m | 1 << q);
    let z = p.z().iter_ones().fold(0usize, |m, q| m | 1 << q);
    (x, z)
}

/// `i^phase X^x Z^z |b> = i^phase (-1)^(z.b) |b + x>`.
pub fn apply_pauli(p: &PauliOperator, psi: &[Complex64]) -> Vector {
    let (x, z) = pauli_masks(p);
    let scale = i_pow(p.phase());
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (b, a) in psi.iter().enumerate() {
        let sign = if (z & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out[b ^ x] = a * scale * sign;
    }
    out
}

/// A product of gates `F_0 F_1 ... F_m`; the last factor acts first.
#[derive(Clone, Debug)]
pub struct DenseOp {
    pub factors: Vec<DenseGate>,
}

impl DenseOp {
    pub fn single(g: DenseGate) -> Self {
        DenseOp { factors: vec![g] }
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vector {
        let mut v = psi.to_vec();
        for f in self.factors.iter().rev() {
            v = f.apply(&v);
        }
        v
    }

    pub fn dagger(&self) -> DenseOp {
        DenseOp {
            factors: self.factors.iter().rev().map(DenseGate::dagger).collect(),
        }
    }

    /// `self * inner * self^dagger`.
    pub fn conjugate(&self, inner: &DenseOp) -> DenseOp {
        let mut factors = self.factors.clone();
        factors.extend(inner.factors.iter().cloned());
        factors.extend(self.dagger().factors);
        DenseOp { factors }
    }
}

fn sub_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for a in v.iter_mut() {
            *a /= norm;
        }
    }
    norm
}

fn random_vector(dim: usize, rng: &mut impl Rng) -> Vector {
    let mut v: Vector = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut v);
    v
}

/// Stabilizer projector and explicit gauge group of a small code.
pub struct DenseCode<'a> {
    code: &'a SubsystemCode,
    dim: usize,
    gauge_elements: Vec<PauliOperator>,
}

impl<'a> DenseCode<'a> {
    pub fn new(code: &'a SubsystemCode) -> Result<Self> {
        let n = code.num_qubits();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge(format!("dense verification needs n <= {MAX_DENSE_QUBITS}, got {n}")));
        }
        let rows: Vec<PauliOperator> = {
            let e = code.gauge_matrix();
            (0..e.rows()).map(|i| PauliOperator::from_symplectic(n, &e.row(i))).collect()
        };
        let mut elements = Vec::with_capacity(1 << rows.len());
        let mut cur = PauliOperator::identity(n);
        elements.push(cur.clone());
        for step in 1u64..(1u64 << rows.len()) {
            cur = cur.multiply(&rows[step.trailing_zeros() as usize])?.hermitian();
            elements.push(cur.clone());
        }
        Ok(DenseCode {
            code,
            dim: 1 << n,
            gauge_elements: elements,
        })
    }

    pub fn gauge_group_size(&self) -> usize {
        self.gauge_elements.len()
    }

    /// Projector onto the stabilized subspace: `prod_i (I + S_i) / 2`.
    pub fn project(&self, psi: &[Complex64]) -> Vector {
        let mut v = psi.to_vec();
        for s in self.code.stabilizer().rows() {
            let sv = apply_pauli(s, &v);
            for (a, b) in v.iter_mut().zip(sv) {
                *a = (*a + b) * 0.5;
            }
        }
        v
    }

    fn code_state(&self, rng: &mut impl Rng) -> Vector {
        loop {
            let mut v = self.project(&random_vector(self.dim, rng));
            if normalize(&mut v) > 1e-6 {
                return v;
            }
        }
    }

    /// `[U, P] = 0`, probed on random vectors.
    pub fn preserves_codespace(&self, u: &DenseOp, probes: &[Vector]) -> bool {
        probes
            .iter()
            .all(|w| sub_norm(&u.apply(&self.project(w)), &self.project(&u.apply(w))) < TOL)
    }

    /// Bare condition: `[U, P] = 0` and `[U, G] P = 0` for every gauge
    /// generator `G`.
    pub fn is_bare(&self, u: &DenseOp, probes: &[Vector]) -> bool {
        if !self.preserves_codespace(u, probes) {
            return false;
        }
        probes.iter().all(|w| {
            let pw = self.project(w);
            let upw = u.apply(&pw);
            self.code
                .gauge()
                .rows()
                .iter()
                .all(|g| sub_norm(&u.apply(&apply_pauli(g, &pw)), &apply_pauli(g, &upw)) < TOL)
        })
    }

    /// Dressed condition: averaging `G (.) G^dagger` over the whole gauge
    /// group commutes with conjugation by `U`, on rank-one operators
    /// `|psi><phi|` with `psi, phi` in the codespace.
    pub fn is_dressed_average(&self, u: &DenseOp, states: &[(Vector, Vector)], probes: &[Vector]) -> bool {
        for (psi, phi) in states {
            let u_psi = u.apply(psi);
            let u_phi = u.apply(phi);
            for v in probes {
                let mut lhs = vec![Complex64::new(0.0, 0.0); self.dim];
                let mut rhs = vec![Complex64::new(0.0, 0.0); self.dim];
                for g in &self.gauge_elements {
                    let a = apply_pauli(g, &u_psi);
                    let b = apply_pauli(g, &u_phi);
                    let c = inner(&b, v);
                    for (l, x) in lhs.iter_mut().zip(&a) {
                        *l += x * c;
                    }
                    let a = u.apply(&apply_pauli(g, psi));
                    let b = u.apply(&apply_pauli(g, phi));
                    let c = inner(&b, v);
                    for (r, x) in rhs.iter_mut().zip(&a) {
                        *r += x * c;
                    }
                }
                if sub_norm(&lhs, &rhs) > TOL * self.gauge_elements.len() as f64 {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub name: String,
    pub op: DenseOp,
}

impl Candidate {
    pub fn pauli(name: impl Into<String>, p: PauliOperator) -> Self {
        Candidate {
            name: name.into(),
            op: DenseOp::single(DenseGate::Pauli(p)),
        }
    }

    pub fn diagonal(name: impl Into<String>, f: PhasePolynomial) -> Self {
        Candidate {
            name: name.into(),
            op: DenseOp::single(DenseGate::Diagonal(f)),
        }
    }

    fn as_pauli(&self) -> Option<&PauliOperator> {
        match self.op.factors.as_slice() {
            [DenseGate::Pauli(p)] => Some(p),
            _ => None,
        }
    }
}

/// Identity, the bare and dressed logical bases, the gauge generators, a
/// single-qubit `X` and a single-qubit `T`.
pub fn standard_candidates(code: &SubsystemCode) -> Result<Vec<Candidate>> {
    let n = code.num_qubits();
    let mut out = vec![Candidate::pauli("identity", PauliOperator::identity(n))];
    for (label, basis) in [
        ("bare", code.bare_logicals()),
        ("dressed", code.dressed_logicals()),
        ("gauge", code.gauge()),
    ] {
        for (i, p) in basis.rows().iter().enumerate() {
            out.push(Candidate::pauli(format!("{label}[{i}] {p}"), p.clone()));
        }
    }
    out.push(Candidate::pauli(
        "X on qubit 0",
        PauliOperator::single(n, 0, crate::pauli::Letter::X),
    ));
    out.push(Candidate::diagonal("T on qubit 0", PhasePolynomial::linear(n, 3, 0, 1)?));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub name: String,
    pub preserves_codespace: bool,
    /// Passes the bare-logical commutator conditions.
    pub bare: bool,
    /// Passes the gauge-averaged conjugation identity (codespace preservation
    /// is reported separately: every Pauli passes the identity alone).
    pub dressed_identity: bool,
    /// For Pauli candidates: does the dense verdict match the symplectic one
    /// (`bare` iff in `C(G)`, `preserves_codespace` iff in `C(S)`)?
    pub symplectic_agreement: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DenseReport {
    pub n: usize,
    pub gauge_group_size: usize,
    pub candidates: Vec<CandidateReport>,
    /// `U_d U_b U_d^dagger` is bare for sampled dressed `U_d`, bare `U_b`.
    pub closure_pairs: usize,
    pub closure_failures: usize,
    /// Code-state pairs agreeing on every bare candidate also agree after
    /// conjugating the bare candidates by dressed ones.
    pub expectation_pairs: usize,
    pub expectation_premise_failures: usize,
    pub expectation_failures: usize,
}

impl DenseReport {
    pub fn all_consistent(&self) -> bool {
        self.closure_failures == 0
            && self.expectation_failures == 0
            && self.expectation_premise_failures == 0
            && self.candidates.iter().all(|c| c.symplectic_agreement != Some(false))
    }
}

/// Dense checks of the bare and dressed definitions on every candidate, plus
/// closure and expectation-matching on `pairs` sampled pairs.
pub fn dense_verify(
    code: &SubsystemCode,
    candidates: &[Candidate],
    pairs: usize,
    rng: &mut impl Rng,
) -> Result<DenseReport> {
    let dense = DenseCode::new(code)?;
    let n = code.num_qubits();
    if let Some(c) = candidates.iter().find(|c| c.op.factors.iter().any(|f| f.num_qubits() != n)) {
        return Err(Error::InvalidParameter(format!("candidate {} has the wrong qubit count", c.name)));
    }
    let probes: Vec<Vector> = (0..3).map(|_| random_vector(dense.dim, rng)).collect();
    let states: Vec<(Vector, Vector)> = (0..2).map(|_| (dense.code_state(rng), dense.code_state(rng))).collect();

    let mut reports = Vec::new();
    for c in candidates {
        let preserves = dense.preserves_codespace(&c.op, &probes);
        let bare = dense.is_bare(&c.op, &probes);
        let dressed_identity = dense.is_dressed_average(&c.op, &states, &probes[..1]);
        let agreement = c
            .as_pauli()
            .map(|p| bare == code.commutes_with_gauge(p) && preserves == code.commutes_with_stabilizer(p));
        reports.push(CandidateReport {
            name: c.name.clone(),
            preserves_codespace: preserves,
            bare,
            dressed_identity,
            symplectic_agreement: agreement,
        });
    }

    let bare_idx: Vec<usize> = (0..candidates.len()).filter(|&i| reports[i].bare).collect();
    let dressed_idx: Vec<usize> = (0..candidates.len())
        .filter(|&i| reports[i].preserves_codespace && reports[i].dressed_identity)
        .collect();

    let mut closure_pairs = 0;
    let mut closure_failures = 0;
    let mut expectation_pairs = 0;
    let mut premise_failures = 0;
    let mut expectation_failures = 0;
    if !bare_idx.is_empty() && !dressed_idx.is_empty() {
        for _ in 0..pairs {
            let d = &candidates[dressed_idx[rng.gen_range(0..dressed_idx.len())]].op;
            let b = &candidates[bare_idx[rng.gen_range(0..bare_idx.len())]].op;
            let conj = d.conjugate(b);
            closure_pairs += 1;
            if !dense.is_bare(&conj, &probes) {
                closure_failures += 1;
            }

            // psi' = P exp(i theta G) psi for a random gauge element G: every
            // bare operator has the same expectation on psi and psi'.
            let psi = dense.code_state(rng);
            let g = &dense.gauge_elements[rng.gen_range(0..dense.gauge_elements.len())];
            let theta: f64 = rng.gen_range(0.0..PI);
            let gpsi = apply_pauli(g, &psi);
            let mut psi2: Vector = psi
                .iter()
                .zip(&gpsi)
                .map(|(a, b)| a * theta.cos() + b * Complex64::new(0.0, theta.sin()))
                .collect();
            psi2 = dense.project(&psi2);
            normalize(&mut psi2);
            expectation_pairs += 1;
            let expect = |op: &DenseOp, s: &[Complex64]| inner(s, &op.apply(s));
            let premise = bare_idx
                .iter()
                .all(|&i| (expect(&candidates[i].op, &psi) - expect(&candidates[i].op, &psi2)).norm() < 1e-8);
            if !premise {
                premise_failures += 1;
                continue;
            }
            if (expect(&conj, &psi) - expect(&conj, &psi2)).norm() > 1e-8 {
                expectation_failures += 1;
            }
        }
    }

    Ok(DenseReport {
        n,
        gauge_group_size: dense.gauge_group_size(),
        candidates: reports,
        closure_pairs,
        closure_failures,
        expectation_pairs,
        expectation_premise_failures: premise_failures,
        expectation_failures,
    })
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Matrix { dim, data }
    }

    /// Matrix of a gate on `n` qubits, column `b` = gate applied to `|b>`.
    pub fn of_gate(g: &DenseGate) -> Self {
        let dim = 1 << g.num_qubits();
        let mut m = Matrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        };
        for b in 0..dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[b] = Complex64::new(1.0, 0.0);
            for (r, v) in g.apply(&e).into_iter().enumerate() {
                m.data[r * dim + b] = v;
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Matrix { dim: d, data }
    }

    pub fn adjoint(&self) -> Matrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        Matrix { dim: d, data }
    }

    /// `self = c * other` for some unit-modulus `c`.
    fn proportional_to(&self, other: &Matrix) -> bool {
        let Some(k) = other.data.iter().position(|a| a.norm() > 1e-9) else {
            return false;
        };
        let c = self.data[k] / other.data[k];
        if (c.norm() - 1.0).abs() > 1e-9 {
            return false;
        }
        self.data.iter().zip(&other.data).all(|(a, b)| (a - c * b).norm() < 1e-9)
    }

    /// Canonical key up to global phase: divide by the phase of the first
    /// entry of largest modulus, then round.
    fn key(&self) -> Vec<(i64, i64)> {
        let mut best = 0;
        for (i, a) in self.data.iter().enumerate() {
            if a.norm() > self.data[best].norm() + 1e-9 {
                best = i;
            }
        }
        let ph = self.data[best] / self.data[best].norm();
        self.data
            .iter()
            .map(|a| {
                let v = a / ph;
                ((v.re * 1e6).round() as i64, (v.im * 1e6).round() as i64)
            })
            .collect()
    }
}

/// All `4^n` Pauli matrices (coefficient `+1`) on `n` qubits.
pub fn pauli_matrices(n: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(1 << (2 * n));
    for code in 0..(1usize << (2 * n)) {
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            let letter = match (code >> (2 * q)) & 3 {
                0 => crate::pauli::Letter::I,
                1 => crate::pauli::Letter::X,
                2 => crate::pauli::Letter::Y,
                _ => crate::pauli::Letter::Z,
            };
            p.set_letter(q, letter);
        }
        out.push(Matrix::of_gate(&DenseGate::Pauli(p)));
    }
    out
}

struct LevelOracle {
    paulis: Vec<Matrix>,
    commutator: HashMap<(Vec<(i64, i64)>, u32), bool>,
    conjugation: HashMap<(Vec<(i64, i64)>, u32), bool>,
}

impl LevelOracle {
    fn new(n: usize) -> Self {
        LevelOracle {
            paulis: pauli_matrices(n),
            commutator: HashMap::new(),
            conjugation: HashMap::new(),
        }
    }

    fn is_phase_pauli(&self, u: &Matrix) -> bool {
        self.paulis.iter().any(|p| u.proportional_to(p))
    }

    /// `U` in the level-`m` set of the commutator recursion (level 0 =
    /// phases, `U P U^dagger P^dagger` in level `m - 1` for every Pauli).
    fn in_commutator_level(&mut self, u: &Matrix, m: u32) -> bool {
        if m == 0 {
            return u.proportional_to(&self.paulis[0]);
        }
        let key = (u.key(), m);
        if let Some(&v) = self.commutator.get(&key) {
            return v;
        }
        let ud = u.adjoint();
        let mut ok = true;
        for i in 0..self.paulis.len() {
            let p = self.paulis[i].clone();
            let c = u.mul(&p).mul(&ud).mul(&p.adjoint());
            if !self.in_commutator_level(&c, m - 1) {
                ok = false;
                break;
            }
        }
        self.commutator.insert(key, ok);
        ok
    }

    /// `U` in the level-`m` set of the conjugation recursion (level 1 =
    /// phase times Pauli, `U P U^dagger` in level `m - 1` for every Pauli).
    fn in_conjugation_level(&mut self, u: &Matrix, m: u32) -> bool {
        if m <= 1 {
            return m == 1 && self.is_phase_pauli(u);
        }
        let key = (u.key(), m);
        if let Some(&v) = self.conjugation.get(&key) {
            return v;
        }
        let ud = u.adjoint();
        let mut ok = true;
        for i in 0..self.paulis.len() {
            let c = u.mul(&self.paulis[i]).mul(&ud);
            if !self.in_conjugation_level(&c, m - 1) {
                ok = false;
                break;
            }
        }
        self.conjugation.insert(key, ok);
        ok
    }

    fn commutator_level(&mut self, u: &Matrix, cap: u32) -> CliffordLevel {
        (0..=cap)
            .find(|&m| self.in_commutator_level(u, m))
            .map_or(CliffordLevel::ExceedsCap(cap), CliffordLevel::Level)
    }

    fn conjugation_level(&mut self, u: &Matrix, cap: u32) -> CliffordLevel {
        (1..=cap)
            .find(|&m| self.in_conjugation_level(u, m))
            .map_or(CliffordLevel::ExceedsCap(cap), CliffordLevel::Level)
    }
}

/// Level of a gate on at most 3 qubits by both dense recursions.
pub fn dense_levels(g: &DenseGate, cap: u32) -> Result<(CliffordLevel, CliffordLevel)> {
    if g.num_qubits() > 3 {
        return Err(Error::TooLarge("dense level recursion supports at most 3 qubits".into()));
    }
    let mut oracle = LevelOracle::new(g.num_qubits());
    let u = Matrix::of_gate(g);
    Ok((oracle.commutator_level(&u, cap), oracle.conjugation_level(&u, cap)))
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceSample {
    pub description: String,
    pub polynomial_level: Option<CliffordLevel>,
    pub commutator_level: CliffordLevel,
    pub conjugation_level: CliffordLevel,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub samples: usize,
    pub disagreements: usize,
    /// Count of samples per commutator level.
    pub level_histogram: Vec<usize>,
    pub entries: Vec<EquivalenceSample>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.disagreements == 0
    }
}

const EQUIVALENCE_CAP: u32 = 5;

/// A random gate small enough for the dense recursions to stay fast: Pauli
/// products on up to 3 qubits, diagonal gates on up to 2 qubits with
/// `kappa <= 4`, or on 3 qubits with `kappa <= 3` and degree `<= 2`.
fn random_small_gate(rng: &mut impl Rng) -> Result<(String, DenseGate)> {
    let n = rng.gen_range(1..=3usize);
    if rng.gen_bool(0.25) {
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            p.set_letter(q, crate::pauli::Letter::NONTRIVIAL[rng.gen_range(0..3)]);
            if rng.gen_bool(0.3) {
                p.set_letter(q, crate::pauli::Letter::I);
            }
        }
        let p = PauliOperator::new(p.x().clone(), p.z().clone(), rng.gen_range(0..4))?;
        return Ok((format!("pauli {p}"), DenseGate::Pauli(p)));
    }
    let (kappa, max_degree) = if n <= 2 { (rng.gen_range(1..=4), n) } else { (rng.gen_range(1..=3), 2) };
    let mut f = PhasePolynomial::zero(n, kappa)?;
    let modulus = 1u64 << kappa;
    for mask in 1u64..(1 << n) {
        if mask.count_ones() as usize <= max_degree && rng.gen_bool(0.6) {
            let vars: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            f = f.add(&PhasePolynomial::from_terms(n, kappa, [(vars, rng.gen_range(0..modulus))])?)?;
        }
    }
    Ok((format!("diag {f}"), DenseGate::Diagonal(f)))
}

/// Named gates first (T, S, Z, CZ, CCZ, a Pauli product), then random ones.
pub fn hierarchy_definition_equivalence(samples: usize, rng: &mut impl Rng) -> Result<EquivalenceReport> {
    let mut gates: Vec<(String, DenseGate)> = vec![
        ("T".into(), DenseGate::Diagonal(PhasePolynomial::linear(1, 3, 0, 1)?)),
        ("S".into(), DenseGate::Diagonal(PhasePolynomial::linear(1, 3, 0, 2)?)),
        ("Z".into(), DenseGate::Diagonal(PhasePolynomial::linear(1, 3, 0, 4)?)),
        ("CZ".into(), DenseGate::Diagonal(PhasePolynomial::from_terms(2, 3, [(vec![0, 1], 4)])?)),
        ("CCZ".into(), DenseGate::Diagonal(PhasePolynomial::from_terms(3, 3, [(vec![0, 1, 2], 4)])?)),
        ("XYZ".into(), DenseGate::Pauli("XYZ".parse()?)),
    ];
    while gates.len() < samples {
        gates.push(random_small_gate(rng)?);
    }
    gates.truncate(samples.max(6));

    let mut oracles: HashMap<usize, LevelOracle> = HashMap::new();
    let mut entries = Vec::new();
    let mut disagreements = 0;
    let mut histogram = vec![0; EQUIVALENCE_CAP as usize + 2];
    for (description, g) in gates {
        let oracle = oracles.entry(g.num_qubits()).or_insert_with(|| LevelOracle::new(g.num_qubits()));
        let u = Matrix::of_gate(&g);
        let commutator = oracle.commutator_level(&u, EQUIVALENCE_CAP);
        let conjugation = oracle.conjugation_level(&u, EQUIVALENCE_CAP);
        let polynomial = match &g {
            DenseGate::Diagonal(f) => Some(diagonal_level(f, EQUIVALENCE_CAP)),
            DenseGate::Pauli(_) => None,
        };
        // Level-0 gates are phases, which the conjugation recursion places at
        // level 1 together with the Paulis.
        let expected_conjugation = match commutator {
            CliffordLevel::Level(0) => CliffordLevel::Level(1),
            other => other,
        };
        let agrees = conjugation == expected_conjugation && polynomial.is_none_or(|p| p == commutator);
        if !agrees {
            disagreements += 1;
        }
        let idx = commutator.value().map_or(histogram.len() - 1, |v| v as usize);
        histogram[idx] += 1;
        entries.push(EquivalenceSample {
            description,
            polynomial_level: polynomial,
            commutator_level: commutator,
            conjugation_level: conjugation,
            agrees,
        });
    }
    Ok(EquivalenceReport {
        samples: entries.len(),
        disagreements,
        level_histogram: histogram,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pauli_application_matches_convention() {
        // Y |0> = i |1>
        let y: PauliOperator = "Y".parse().unwrap();
        let out = apply_pauli(&y, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!((out[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let xz: PauliOperator = "X".parse::<PauliOperator>().unwrap().multiply(&"Z".parse().unwrap()).unwrap();
        let m1 = Matrix::of_gate(&DenseGate::Pauli(xz));
        let m2 = Matrix::of_gate(&DenseGate::Pauli("X".parse().unwrap()))
            .mul(&Matrix::of_gate(&DenseGate::Pauli("Z".parse().unwrap())));
        assert_eq!(m1, m2);
    }

    #[test]
    fn named_levels_both_ways() {
        let t = DenseGate::Diagonal(PhasePolynomial::linear(1, 3, 0, 1).unwrap());
        assert_eq!(dense_levels(&t, 5).unwrap(), (CliffordLevel::Level(3), CliffordLevel::Level(3)));
        let ccz = DenseGate::Diagonal(PhasePolynomial::from_terms(3, 3, [(vec![0, 1, 2], 4)]).unwrap());
        assert_eq!(dense_levels(&ccz, 5).unwrap(), (CliffordLevel::Level(3), CliffordLevel::Level(3)));
        let p = DenseGate::Pauli("-XZ".parse().unwrap());
        assert_eq!(dense_levels(&p, 5).unwrap(), (CliffordLevel::Level(1), CliffordLevel::Level(1)));
    }

    #[test]
    fn small_equivalence_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = hierarchy_definition_equivalence(20, &mut rng).unwrap();
        assert_eq!(r.samples, 20);
        assert!(r.holds(), "{:#?}", r.entries.iter().filter(|e| !e.agrees).collect::<Vec<_>>());
    }
}
