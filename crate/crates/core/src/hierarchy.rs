//! Clifford-hierarchy levels of Pauli and diagonal gates.
//!
//! A diagonal gate is `U|x> = w^f(x) |x>` with `w = exp(i pi / 2^(kappa-1))`
//! and `f` a multilinear polynomial with coefficients mod `2^kappa`. The group
//! commutator of `U` with `X_j` is the diagonal gate of
//! `Delta_j f(x) = f(x + e_j) - f(x)`, and `Z` commutes with `U`, so
//! `level(f) = 0` for constant `f` and `1 + max_j level(Delta_j f)` otherwise.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::bits::BitVec;
use crate::cleaning::{is_bare_cleanable, is_dressed_cleanable, LogicalKind};
use crate::code::SubsystemCode;
use crate::error::{Error, Result};
use crate::geometry::{neighborhood, Partition};
use crate::pauli::PauliOperator;
use crate::region::Region;
use crate::search::find_logical_in_region;

pub const DEFAULT_LEVEL_CAP: u32 = 8;
pub const MAX_KAPPA: u32 = 62;

/// Multilinear polynomial over `n <= 64` bits with coefficients mod `2^kappa`.
/// Monomials are bit masks; the empty mask is the constant term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePolynomial {
    n: usize,
    kappa: u32,
    terms: BTreeMap<u64, u64>,
}

impl PhasePolynomial {
    pub fn zero(n: usize, kappa: u32) -> Result<Self> {
        if n > 64 {
            return Err(Error::TooLarge(format!("phase polynomials support at most 64 qubits, got {n}")));
        }
        if kappa == 0 || kappa > MAX_KAPPA {
            return Err(Error::InvalidParameter(format!("kappa must be in 1..={MAX_KAPPA}, got {kappa}")));
        }
        Ok(PhasePolynomial {
            n,
            kappa,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms(n: usize, kappa: u32, terms: impl IntoIterator<Item = (Vec<usize>, u64)>) -> Result<Self> {
        let mut p = PhasePolynomial::zero(n, kappa)?;
        for (vars, c) in terms {
            let mut mask = 0u64;
            for v in vars {
                if v >= n {
                    return Err(Error::InvalidParameter(format!("variable {v} out of range for n = {n}")));
                }
                mask |= 1 << v;
            }
            p.add_term(mask, c);
        }
        Ok(p)
    }

    /// `c * x_j`.
    pub fn linear(n: usize, kappa: u32, j: usize, c: u64) -> Result<Self> {
        PhasePolynomial::from_terms(n, kappa, [(vec![j], c)])
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn modulus(&self) -> u64 {
        1u64 << self.kappa
    }

    pub fn terms(&self) -> &BTreeMap<u64, u64> {
        &self.terms
    }

    fn add_term(&mut self, mask: u64, c: u64) {
        let m = self.modulus();
        let entry = self.terms.entry(mask).or_insert(0);
        *entry = (*entry + c % m) % m;
        if *entry == 0 {
            self.terms.remove(&mask);
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&m| m == 0)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// `f(x)` where bit `j` of `x` is `x_j`.
    pub fn evaluate(&self, x: u64) -> u64 {
        let m = self.modulus();
        self.terms
            .iter()
            .filter(|(&mask, _)| x & mask == mask)
            .fold(0, |acc, (_, &c)| (acc + c) % m)
    }

    pub fn add(&self, other: &PhasePolynomial) -> Result<PhasePolynomial> {
        if self.kappa != other.kappa {
            return Err(Error::ModulusMismatch(self.kappa, other.kappa));
        }
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = self.clone();
        for (&mask, &c) in &other.terms {
            out.add_term(mask, c);
        }
        Ok(out)
    }

    /// The same gate at modulus `2^kappa` for `kappa >= self.kappa`.
    pub fn embed(&self, kappa: u32) -> Result<PhasePolynomial> {
        if kappa < self.kappa {
            return Err(Error::ModulusMismatch(self.kappa, kappa));
        }
        let shift = kappa - self.kappa;
        let mut out = PhasePolynomial::zero(self.n, kappa)?;
        for (&mask, &c) in &self.terms {
            out.add_term(mask, c << shift);
        }
        Ok(out)
    }

    /// Reinterprets the variables: variable `j` becomes `map[j]` in an
    /// `n`-variable polynomial.
    pub fn relabel(&self, n: usize, map: &[usize]) -> Result<PhasePolynomial> {
        let mut out = PhasePolynomial::zero(n, self.kappa)?;
        for (&mask, &c) in &self.terms {
            let mut m = 0u64;
            for j in 0..self.n {
                if mask >> j & 1 == 1 {
                    let t = *map
                        .get(j)
                        .ok_or_else(|| Error::InvalidParameter(format!("no target for variable {j}")))?;
                    if t >= n {
                        return Err(Error::InvalidParameter(format!("target {t} out of range for n = {n}")));
                    }
                    m |= 1 << t;
                }
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// Multilinear interpolation of a truth table of length `2^n`.
    pub fn from_truth_table(n: usize, kappa: u32, values: &[u64]) -> Result<PhasePolynomial> {
        if values.len() != 1usize << n {
            return Err(Error::InvalidParameter(format!(
                "truth table needs {} entries, got {}",
                1usize << n,
                values.len()
            )));
        }
        let mut p = PhasePolynomial::zero(n, kappa)?;
        let m = p.modulus();
        // Moebius inversion over the subset lattice.
        let mut coeffs: Vec<u64> = values.iter().map(|v| v % m).collect();
        for j in 0..n {
            for mask in 0..coeffs.len() {
                if mask >> j & 1 == 1 {
                    coeffs[mask] = (coeffs[mask] + m - coeffs[mask ^ (1 << j)]) % m;
                }
            }
        }
        for (mask, c) in coeffs.into_iter().enumerate() {
            p.add_term(mask as u64, c);
        }
        Ok(p)
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (mod 2^{})", self.kappa);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&mask, &c)| {
                if mask == 0 {
                    c.to_string()
                } else {
                    let vars: Vec<String> = (0..64).filter(|j| mask >> j & 1 == 1).map(|j| format!("x{j}")).collect();
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{} (mod 2^{})", parts.join(" + "), self.kappa)
    }
}

impl fmt::Debug for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum CliffordLevel {
    Level(u32),
    ExceedsCap(u32),
}

impl CliffordLevel {
    pub fn value(&self) -> Option<u32> {
        match self {
            CliffordLevel::Level(v) => Some(*v),
            CliffordLevel::ExceedsCap(_) => None,
        }
    }
}

impl fmt::Display for CliffordLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliffordLevel::Level(v) => write!(f, "{v}"),
            CliffordLevel::ExceedsCap(c) => write!(f, "> {c}"),
        }
    }
}

/// 0 for a multiple of the identity, 1 otherwise.
pub fn pauli_level(p: &PauliOperator) -> CliffordLevel {
    CliffordLevel::Level(if p.is_identity() { 0 } else { 1 })
}

/// `f(x + e_j) - f(x)`.
pub fn finite_difference(f: &PhasePolynomial, j: usize) -> Result<PhasePolynomial> {
    if j >= f.n {
        return Err(Error::InvalidParameter(format!("variable {j} out of range for n = {}", f.n)));
    }
    let bit = 1u64 << j;
    let m = f.modulus();
    let mut out = PhasePolynomial::zero(f.n, f.kappa)?;
    // c x_j x^M  ->  c (1 - x_j) x^M - c x_j x^M = c x^M - 2c x_j x^M
    for (&mask, &c) in &f.terms {
        if mask & bit != 0 {
            out.add_term(mask & !bit, c);
            out.add_term(mask, (m - (2 * c) % m) % m);
        }
    }
    Ok(out)
}

/// Exact level under the finite-difference recursion, or `ExceedsCap`.
pub fn diagonal_level(f: &PhasePolynomial, cap: u32) -> CliffordLevel {
    let mut memo = HashMap::new();
    let v = level_rec(f, &mut memo);
    if v > cap {
        CliffordLevel::ExceedsCap(cap)
    } else {
        CliffordLevel::Level(v)
    }
}

fn level_rec(f: &PhasePolynomial, memo: &mut HashMap<PhasePolynomial, u32>) -> u32 {
    if f.is_constant() {
        return 0;
    }
    if let Some(&v) = memo.get(f) {
        return v;
    }
    let mut vars = 0u64;
    for &mask in f.terms.keys() {
        vars |= mask;
    }
    let mut best = 0;
    for j in (0..f.n).filter(|j| vars >> j & 1 == 1) {
        let d = finite_difference(f, j).expect("variable in range");
        best = best.max(level_rec(&d, memo));
    }
    memo.insert(f.clone(), best + 1);
    best + 1
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetViolation {
    /// Logical label `a` of the coset, bit `i` for logical qubit `i`.
    pub logical: u64,
    pub first: (Vec<usize>, u64),
    pub second: (Vec<usize>, u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct LogicalAction {
    pub kappa: u32,
    pub k: usize,
    pub preserves_codespace: bool,
    /// `f_L(a)` for every logical basis label `a`, when preserved.
    pub coset_values: Vec<u64>,
    #[serde(serialize_with = "display_opt")]
    pub logical_polynomial: Option<PhasePolynomial>,
    pub level: Option<CliffordLevel>,
    pub violation: Option<CosetViolation>,
    /// X-type logical representatives used for the coset labels.
    pub logical_x: Vec<Vec<usize>>,
}

fn display_opt<S: serde::Serializer, T: fmt::Display>(v: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(t) => s.serialize_some(&t.to_string()),
        None => s.serialize_none(),
    }
}

/// Largest X-stabilizer rank for which cosets are enumerated.
pub const MAX_COSET_RANK: usize = 22;

/// Logical action of the transversal diagonal gate `prod_j U_j` on a CSS
/// stabilizer code, where `U_j` has single-variable polynomial `per_qubit[j]`.
///
/// Logical basis state `a` is the uniform superposition over the coset
/// `L_X^T a + rowspace(H_X)`; the gate is logical iff `f = sum_j f_j(x_j)` is
/// constant on every coset, and then `f_L(a)` is that constant.
pub fn transversal_diagonal_logical_action(
    code: &SubsystemCode,
    per_qubit: &[PhasePolynomial],
) -> Result<LogicalAction> {
    let n = code.num_qubits();
    let (hx, hz) = code.css_checks().ok_or(Error::NotCss)?;
    if per_qubit.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: per_qubit.len(),
        });
    }
    if let Some(bad) = per_qubit.iter().position(|p| p.num_qubits() != 1) {
        return Err(Error::InvalidParameter(format!("per-qubit polynomial {bad} is not single-qubit")));
    }
    let kappa = per_qubit.iter().map(|p| p.kappa()).max().unwrap_or(1);
    let embedded: Vec<PhasePolynomial> = per_qubit.iter().map(|p| p.embed(kappa)).collect::<Result<_>>()?;
    let modulus = 1u64 << kappa;
    // value added when qubit j is 1 (the constant parts sum to a global phase
    // and are folded in separately)
    let constant: u64 = embedded.iter().map(|p| p.evaluate(0)).fold(0, |a, b| (a + b) % modulus);
    let delta: Vec<u64> = embedded
        .iter()
        .map(|p| (p.evaluate(1) + modulus - p.evaluate(0)) % modulus)
        .collect();

    let hx_e = hx.rref();
    let r = hx_e.rank();
    if r > MAX_COSET_RANK {
        return Err(Error::TooLarge(format!("X-stabilizer rank {r} exceeds {MAX_COSET_RANK}")));
    }
    let k = code.k();
    if k > 16 {
        return Err(Error::TooLarge(format!("{k} logical qubits")));
    }
    let logical_x = css_x_logicals(&hx, &hz, k)?;

    let hx_rows: Vec<BitVec> = (0..r).map(|i| hx_e.matrix.row(i)).collect();
    let f_of = |x: &BitVec| -> u64 { x.iter_ones().fold(constant, |a, j| (a + delta[j]) % modulus) };

    let mut coset_values = Vec::with_capacity(1 << k);
    for a in 0..(1u64 << k) {
        let mut base = BitVec::zeros(n);
        for (i, lx) in logical_x.iter().enumerate() {
            if a >> i & 1 == 1 {
                base.xor_assign(lx);
            }
        }
        // Gray-code walk over rowspace(H_X).
        let mut x = base.clone();
        let first = f_of(&x);
        for step in 1u64..(1u64 << r) {
            let flip = step.trailing_zeros() as usize;
            x.xor_assign(&hx_rows[flip]);
            let v = f_of(&x);
            if v != first {
                return Ok(LogicalAction {
                    kappa,
                    k,
                    preserves_codespace: false,
                    coset_values,
                    logical_polynomial: None,
                    level: None,
                    violation: Some(CosetViolation {
                        logical: a,
                        first: (base.iter_ones().collect(), first),
                        second: (x.iter_ones().collect(), v),
                    }),
                    logical_x: logical_x.iter().map(|v| v.iter_ones().collect()).collect(),
                });
            }
        }
        coset_values.push(first);
    }
    let poly = PhasePolynomial::from_truth_table(k, kappa, &coset_values)?;
    for (a, &v) in coset_values.iter().enumerate() {
        if poly.evaluate(a as u64) != v {
            return Err(Error::Invariant("logical polynomial does not reproduce coset values".into()));
        }
    }
    let level = diagonal_level(&poly, DEFAULT_LEVEL_CAP);
    Ok(LogicalAction {
        kappa,
        k,
        preserves_codespace: true,
        coset_values,
        logical_polynomial: Some(poly),
        level: Some(level),
        violation: None,
        logical_x: logical_x.iter().map(|v| v.iter_ones().collect()).collect(),
    })
}

/// `k` independent X-type logicals: vectors in `ker H_Z` outside
/// `rowspace H_X`, reduced against it.
pub fn css_x_logicals(hx: &crate::bits::BitMatrix, hz: &crate::bits::BitMatrix, k: usize) -> Result<Vec<BitVec>> {
    let mut span = hx.clone();
    let mut out = Vec::new();
    let hx_e = hx.rref();
    for v in hz.kernel() {
        let mut with = span.clone();
        with.push_row(&v);
        if with.rank() > span.rank() {
            out.push(hx_e.reduce(&v));
            span = with;
        }
    }
    if out.len() != k {
        return Err(Error::Invariant(format!("found {} X logicals, expected {k}", out.len())));
    }
    Ok(out)
}

/// Which cleanability a region failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Requirement {
    BareCleanable,
    DressedCleanable,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionCheck {
    pub index: usize,
    pub radius: usize,
    pub size: usize,
    pub requirement: Requirement,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PartitionBound {
    /// Every logical gate of spread `s_U` lies in `P_m`.
    Bound { m: usize, checks: Vec<RegionCheck> },
    PreconditionFailure {
        /// 0 for `R_0`, `j` for the `j`-th further region.
        region: usize,
        requirement: Requirement,
        region_size: usize,
        witness: String,
        checks: Vec<RegionCheck>,
    },
}

impl PartitionBound {
    pub fn bound(&self) -> Option<usize> {
        match self {
            PartitionBound::Bound { m, .. } => Some(*m),
            PartitionBound::PreconditionFailure { .. } => None,
        }
    }
}

/// Checks `R_0` bare-cleanable and each `R_j^+ = B(R_j, 2^(j-1) s_U)`
/// dressed-cleanable; on success the bound is the number of regions after
/// `R_0`.
pub fn level_bound_from_partition(code: &SubsystemCode, partition: &Partition, spread: usize) -> Result<PartitionBound> {
    partition.check_covering()?;
    if partition.num_qubits() != code.num_qubits() {
        return Err(Error::LengthMismatch {
            left: code.num_qubits(),
            right: partition.num_qubits(),
        });
    }
    let geo = if spread > 0 { Some(code.require_geometry()?) } else { None };
    let mut checks = Vec::new();

    let r0 = &partition.r0;
    let ok = is_bare_cleanable(code, r0)?;
    checks.push(RegionCheck {
        index: 0,
        radius: 0,
        size: r0.len(),
        requirement: Requirement::BareCleanable,
        passed: ok,
    });
    if !ok {
        let w = find_logical_in_region(code, r0, LogicalKind::Dressed)?
            .ok_or_else(|| Error::Invariant("count and search disagree on R0".into()))?;
        return Ok(PartitionBound::PreconditionFailure {
            region: 0,
            requirement: Requirement::BareCleanable,
            region_size: r0.len(),
            witness: w.to_string(),
            checks,
        });
    }

    for (i, rj) in partition.regions.iter().enumerate() {
        let j = i + 1;
        let radius = spread
            .checked_mul(1usize.checked_shl((j - 1) as u32).unwrap_or(usize::MAX))
            .unwrap_or(usize::MAX);
        let fattened: Region = match geo {
            Some(g) => neighborhood(g, rj, radius.min(g.size())),
            None => rj.clone(),
        };
        let ok = is_dressed_cleanable(code, &fattened)?;
        checks.push(RegionCheck {
            index: j,
            radius,
            size: fattened.len(),
            requirement: Requirement::DressedCleanable,
            passed: ok,
        });
        if !ok {
            let w = find_logical_in_region(code, &fattened, LogicalKind::Bare)?
                .ok_or_else(|| Error::Invariant("count and search disagree".into()))?;
            return Ok(PartitionBound::PreconditionFailure {
                region: j,
                requirement: Requirement::DressedCleanable,
                region_size: fattened.len(),
                witness: w.to_string(),
                checks,
            });
        }
    }
    Ok(PartitionBound::Bound {
        m: partition.regions.len(),
        checks,
    })
}
