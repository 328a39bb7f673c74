//! Subsystem codes: gauge group in, stabilizer and logical structure out.
//!
//! Given gauge generators `G`, the stabilizer is the center of `G`, bare
//! logicals are `C(G)` modulo `S`, and dressed logicals are `C(S)` modulo `G`.
//! With `g = rank G` and `s = rank S` the code has `(g - s) / 2` gauge qubits
//! and `k = n - s - (g - s) / 2` logical qubits.

use crate::bits::{BitMatrix, BitVec, Echelon};
use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;
use crate::pauli::{PauliOperator, SymplecticBasis};
use crate::region::Region;

#[derive(Clone, Debug)]
pub struct SubsystemCode {
    name: String,
    n: usize,
    gauge: SymplecticBasis,
    stabilizer: SymplecticBasis,
    bare_logicals: SymplecticBasis,
    dressed_logicals: SymplecticBasis,
    gauge_rank: usize,
    k: usize,
    geometry: Option<LatticeGeometry>,
    gauge_echelon: Echelon,
    stabilizer_echelon: Echelon,
}

impl SubsystemCode {
    /// Derives the full code structure from gauge generators.
    pub fn derive(name: impl Into<String>, gauge: SymplecticBasis, geometry: Option<LatticeGeometry>) -> Result<Self> {
        let n = gauge.num_qubits();
        if let Some(bad) = gauge.rows().iter().position(|r| !r.is_hermitian()) {
            return Err(Error::InvalidParameter(format!(
                "gauge generator {bad} is not Hermitian"
            )));
        }

        let abelian = gauge.is_abelian();
        let stabilizer = if abelian {
            // Stabilizer code: signs are physical, so every dependency among
            // the generators must multiply to +I.
            let t = gauge.matrix().rref_tracked();
            for dep in t.dependencies() {
                if gauge.product(&dep).phase() != 0 {
                    return Err(Error::MinusIdentityInStabilizer);
                }
            }
            gauge.row_reduce().0
        } else {
            gauge.center()
        };

        let gauge_echelon = gauge.echelon();
        let stabilizer_echelon = stabilizer.echelon();
        let g = gauge_echelon.rank();
        let s = stabilizer_echelon.rank();
        if (g - s) % 2 != 0 {
            return Err(Error::Invariant(format!("g - s = {} is odd", g - s)));
        }
        let k = n - s - (g - s) / 2;

        let bare_logicals = quotient(n, &gauge.centralizer(), &stabilizer_echelon);
        let dressed_logicals = quotient(n, &stabilizer.centralizer(), &gauge_echelon);
        if bare_logicals.len() != 2 * k || dressed_logicals.len() != 2 * k {
            return Err(Error::Invariant(format!(
                "logical ranks bare = {}, dressed = {}, expected 2k = {}",
                bare_logicals.len(),
                dressed_logicals.len(),
                2 * k
            )));
        }

        let geometry = match geometry {
            Some(mut geo) => {
                if geo.num_qubits() != n {
                    return Err(Error::InvalidParameter(format!(
                        "geometry has {} qubits, code has {n}",
                        geo.num_qubits()
                    )));
                }
                geo.set_generator_supports(gauge.rows().iter().map(|r| r.support()).collect())?;
                Some(geo)
            }
            None => None,
        };

        Ok(SubsystemCode {
            name: name.into(),
            n,
            gauge,
            stabilizer,
            bare_logicals,
            dressed_logicals,
            gauge_rank: g,
            k,
            geometry,
            gauge_echelon,
            stabilizer_echelon,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gauge(&self) -> &SymplecticBasis {
        &self.gauge
    }

    pub fn stabilizer(&self) -> &SymplecticBasis {
        &self.stabilizer
    }

    pub fn bare_logicals(&self) -> &SymplecticBasis {
        &self.bare_logicals
    }

    pub fn dressed_logicals(&self) -> &SymplecticBasis {
        &self.dressed_logicals
    }

    pub fn gauge_rank(&self) -> usize {
        self.gauge_rank
    }

    /// Echelon form of the gauge generators (`g` rows, `2n` columns).
    pub fn gauge_matrix(&self) -> &BitMatrix {
        &self.gauge_echelon.matrix
    }

    pub fn stabilizer_matrix(&self) -> &BitMatrix {
        &self.stabilizer_echelon.matrix
    }

    pub fn stabilizer_rank(&self) -> usize {
        self.stabilizer_echelon.rank()
    }

    pub fn gauge_qubits(&self) -> usize {
        (self.gauge_rank - self.stabilizer_rank()) / 2
    }

    pub fn is_stabilizer_code(&self) -> bool {
        self.gauge_rank == self.stabilizer_rank()
    }

    pub fn geometry(&self) -> Option<&LatticeGeometry> {
        self.geometry.as_ref()
    }

    pub fn require_geometry(&self) -> Result<&LatticeGeometry> {
        self.geometry.as_ref().ok_or(Error::GeometryMissing)
    }

    /// Membership of `p` (mod phase) in the gauge group.
    pub fn in_gauge_group(&self, p: &PauliOperator) -> bool {
        self.gauge_echelon.contains(&p.symplectic())
    }

    pub fn in_stabilizer_group(&self, p: &PauliOperator) -> bool {
        self.stabilizer_echelon.contains(&p.symplectic())
    }

    pub fn commutes_with_stabilizer(&self, p: &PauliOperator) -> bool {
        self.stabilizer.rows().iter().all(|s| s.commutes_with(p))
    }

    pub fn commutes_with_gauge(&self, p: &PauliOperator) -> bool {
        self.gauge.rows().iter().all(|g| g.commutes_with(p))
    }

    /// In `C(S) \ G`: a dressed logical with nontrivial logical action.
    pub fn is_nontrivial_dressed(&self, p: &PauliOperator) -> bool {
        self.commutes_with_stabilizer(p) && !self.in_gauge_group(p)
    }

    /// In `C(G) \ S`.
    pub fn is_nontrivial_bare(&self, p: &PauliOperator) -> bool {
        self.commutes_with_gauge(p) && !self.in_stabilizer_group(p)
    }

    /// X-type and Z-type stabilizer check matrices when the code is a CSS
    /// stabilizer code.
    pub fn css_checks(&self) -> Option<(BitMatrix, BitMatrix)> {
        if !self.is_stabilizer_code() {
            return None;
        }
        let mut hx = BitMatrix::with_cols(self.n);
        let mut hz = BitMatrix::with_cols(self.n);
        for s in self.stabilizer.rows() {
            match (s.x().is_zero(), s.z().is_zero()) {
                (false, true) => hx.push_row(s.x()),
                (true, false) => hz.push_row(s.z()),
                _ => return None,
            }
        }
        Some((hx, hz))
    }

    /// The same code with qubit `q` renamed `perm[q]`; geometry is dropped.
    pub fn permuted(&self, perm: &[usize]) -> Result<SubsystemCode> {
        SubsystemCode::derive(format!("{}-permuted", self.name), self.gauge.permuted(perm), None)
    }

    pub fn full_region(&self) -> Region {
        Region::full(self.n)
    }
}

/// Representatives of `span(big) / span(small)`, each reduced against the
/// echelon form of `small` so the result is a deterministic normal form.
fn quotient(n: usize, big: &SymplecticBasis, small: &Echelon) -> SymplecticBasis {
    let mut residues = BitMatrix::with_cols(2 * n);
    for r in big.rows() {
        let res = small.reduce(&r.symplectic());
        if !res.is_zero() {
            residues.push_row(&res);
        }
    }
    let e = residues.rref();
    let rows = (0..e.rank())
        .map(|i| PauliOperator::from_symplectic(n, &e.matrix.row(i)))
        .collect();
    SymplecticBasis::from_reduced(n, rows)
}

/// Toric code on an `L x L` torus: qubits on edges, X stars and Z plaquettes.
///
/// Edge `h(x, y)` joins `(x, y)`–`(x+1, y)` and has index `2 (yL + x)`;
/// edge `v(x, y)` joins `(x, y)`–`(x, y+1)` and has index `2 (yL + x) + 1`.
/// Both edges are placed at site `(x, y)`.
pub fn build_toric(l: usize) -> Result<SubsystemCode> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("toric code needs L >= 2, got {l}")));
    }
    let n = 2 * l * l;
    let h = |x: usize, y: usize| 2 * ((y % l) * l + (x % l));
    let v = |x: usize, y: usize| 2 * ((y % l) * l + (x % l)) + 1;
    let mut rows = Vec::with_capacity(2 * l * l);
    for y in 0..l {
        for x in 0..l {
            let star = [h(x, y), h(x + l - 1, y), v(x, y), v(x, y + l - 1)];
            rows.push(toggled(n, &star, crate::pauli::Letter::X));
        }
    }
    for y in 0..l {
        for x in 0..l {
            let plaq = [h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)];
            rows.push(toggled(n, &plaq, crate::pauli::Letter::Z));
        }
    }
    let coords = (0..n).map(|q| vec![(q / 2) % l, (q / 2) / l]).collect();
    let geo = LatticeGeometry::new(2, l, coords, vec![true, true], 2)?;
    SubsystemCode::derive(format!("toric-{l}"), SymplecticBasis::new(n, rows)?, Some(geo))
}

/// Bacon-Shor code on an `L x L` grid, qubit `(row r, column c)` at index
/// `rL + c` and site `(c, r)`.
///
/// Gauge generators are `XX` on vertically adjacent pairs and `ZZ` on
/// horizontally adjacent pairs. Stabilizers are then `X` on two adjacent rows
/// and `Z` on two adjacent columns; a full row of `X` and a full column of `Z`
/// are the bare logicals.
pub fn build_bacon_shor(l: usize) -> Result<SubsystemCode> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("Bacon-Shor code needs L >= 2, got {l}")));
    }
    let n = l * l;
    let q = |r: usize, c: usize| r * l + c;
    let mut rows = Vec::new();
    for r in 0..l - 1 {
        for c in 0..l {
            rows.push(toggled(n, &[q(r, c), q(r + 1, c)], crate::pauli::Letter::X));
        }
    }
    for r in 0..l {
        for c in 0..l - 1 {
            rows.push(toggled(n, &[q(r, c), q(r, c + 1)], crate::pauli::Letter::Z));
        }
    }
    let coords = (0..n).map(|i| vec![i % l, i / l]).collect();
    let geo = LatticeGeometry::new(2, l, coords, vec![false, false], 2)?;
    SubsystemCode::derive(format!("bacon-shor-{l}"), SymplecticBasis::new(n, rows)?, Some(geo))
}

/// Quantum Reed-Muller code `[[2^m - 1, 1, 3]]`.
///
/// Qubit `j` is the nonzero point `u = j + 1` of `GF(2)^m`. X checks are the
/// `m` coordinate functions (the simplex code); Z checks are all monomials of
/// degree `1..=m-2`. `m = 3` gives the Steane code.
pub fn build_reed_muller(m: usize) -> Result<SubsystemCode> {
    if !(3..=12).contains(&m) {
        return Err(Error::InvalidParameter(format!("Reed-Muller code needs 3 <= m <= 12, got {m}")));
    }
    let n = (1usize << m) - 1;
    let mut rows = Vec::new();
    for i in 0..m {
        let support: Vec<usize> = (0..n).filter(|j| (j + 1) >> i & 1 == 1).collect();
        rows.push(toggled(n, &support, crate::pauli::Letter::X));
    }
    for degree in 1..=m - 2 {
        for mask in 0usize..(1 << m) {
            if mask.count_ones() as usize != degree {
                continue;
            }
            let support: Vec<usize> = (0..n).filter(|j| (j + 1) & mask == mask).collect();
            rows.push(toggled(n, &support, crate::pauli::Letter::Z));
        }
    }
    let name = if m == 3 { "steane".to_string() } else { format!("reed-muller-{m}") };
    SubsystemCode::derive(name, SymplecticBasis::new(n, rows)?, None)
}

pub fn build_steane() -> Result<SubsystemCode> {
    build_reed_muller(3)
}

/// Haah's cubic code on an `L x L x L` periodic lattice, two qubits per site.
///
/// Qubit `2 * site + a` is the `a`-th qubit of `site = x + L y + L^2 z`. The
/// generators live on the unit cube with lowest corner at each site; with
/// corner offsets written `xyz`:
///
/// | term | qubit 0                  | qubit 1                  |
/// |------|--------------------------|--------------------------|
/// | X    | 000, 110, 011, 101       | 000, 100, 010, 001       |
/// | Z    | 111, 011, 101, 110       | 111, 001, 100, 010       |
pub fn build_haah_cubic(l: usize) -> Result<SubsystemCode> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("cubic code needs L >= 2, got {l}")));
    }
    const X0: [[usize; 3]; 4] = [[0, 0, 0], [1, 1, 0], [0, 1, 1], [1, 0, 1]];
    const X1: [[usize; 3]; 4] = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
    const Z0: [[usize; 3]; 4] = [[1, 1, 1], [0, 1, 1], [1, 0, 1], [1, 1, 0]];
    const Z1: [[usize; 3]; 4] = [[1, 1, 1], [0, 0, 1], [1, 0, 0], [0, 1, 0]];
    let n = 2 * l * l * l;
    let site = |x: usize, y: usize, z: usize| (x % l) + l * (y % l) + l * l * (z % l);
    let mut rows = Vec::new();
    for (pattern0, pattern1, letter) in [
        (&X0, &X1, crate::pauli::Letter::X),
        (&Z0, &Z1, crate::pauli::Letter::Z),
    ] {
        for z in 0..l {
            for y in 0..l {
                for x in 0..l {
                    let mut qubits = Vec::with_capacity(8);
                    for o in pattern0 {
                        qubits.push(2 * site(x + o[0], y + o[1], z + o[2]));
                    }
                    for o in pattern1 {
                        qubits.push(2 * site(x + o[0], y + o[1], z + o[2]) + 1);
                    }
                    rows.push(toggled(n, &qubits, letter));
                }
            }
        }
    }
    let coords = (0..n)
        .map(|q| {
            let s = q / 2;
            vec![s % l, (s / l) % l, s / (l * l)]
        })
        .collect();
    let geo = LatticeGeometry::new(3, l, coords, vec![true; 3], 2)?;
    SubsystemCode::derive(format!("haah-{l}"), SymplecticBasis::new(n, rows)?, Some(geo))
}

/// Letter on each listed qubit, cancelling repeats (needed on small tori
/// where a pattern can wrap onto itself).
fn toggled(n: usize, qubits: &[usize], letter: crate::pauli::Letter) -> PauliOperator {
    let mut mask = BitVec::zeros(n);
    for &q in qubits {
        mask.flip(q);
    }
    PauliOperator::on_support(n, mask.iter_ones(), letter)
}
