//! Region-resolved logical counting and cleanability.
//!
//! For a region `R` with complement `R^c`, and `M|_A` the generator matrix
//! with columns outside `A` zeroed:
//!
//! ```text
//! l_bare(R)    = 2|R| - rank G|_R - s + rank S|_{R^c}
//! l_dressed(R) = 2|R| - rank S|_R - g + rank G|_{R^c}
//! ```
//!
//! The first two terms count operators on `R` commuting with the relevant
//! group; the last two subtract the dimension of the subgroup supported on `R`.

use rand::Rng;
use serde::Serialize;

use crate::bits::{BitMatrix, BitVec};
use crate::code::SubsystemCode;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::region::Region;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogicalKind {
    Bare,
    Dressed,
}

impl std::str::FromStr for LogicalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bare" => Ok(LogicalKind::Bare),
            "dressed" => Ok(LogicalKind::Dressed),
            _ => Err(Error::InvalidParameter(format!("kind must be bare or dressed, got `{s}`"))),
        }
    }
}

fn check_len(code: &SubsystemCode, r: &Region) -> Result<()> {
    if r.num_qubits() != code.num_qubits() {
        return Err(Error::LengthMismatch {
            left: code.num_qubits(),
            right: r.num_qubits(),
        });
    }
    Ok(())
}

fn symplectic_mask(r: &Region) -> BitVec {
    r.mask().concat(r.mask())
}

/// `2|R| - rank(A|_R) - rank(B) + rank(B|_{R^c})`.
fn restricted_count(a: &BitMatrix, b: &BitMatrix, b_rank: usize, r: &Region) -> usize {
    let inside = symplectic_mask(r);
    let outside = symplectic_mask(&r.complement());
    let on_r = 2 * r.len() - a.rank_masked(&inside);
    let sub = b_rank - b.rank_masked(&outside);
    on_r - sub
}

/// `l(R)` for a stabilizer code.
pub fn count_logical(code: &SubsystemCode, r: &Region) -> Result<usize> {
    if !code.is_stabilizer_code() {
        return Err(Error::NotStabilizerCode);
    }
    count_bare(code, r)
}

/// Independent nontrivial bare logical classes supported on `R`.
pub fn count_bare(code: &SubsystemCode, r: &Region) -> Result<usize> {
    check_len(code, r)?;
    Ok(restricted_count(
        code.gauge_matrix(),
        code.stabilizer_matrix(),
        code.stabilizer_rank(),
        r,
    ))
}

/// Independent nontrivial dressed logical classes supported on `R`.
pub fn count_dressed(code: &SubsystemCode, r: &Region) -> Result<usize> {
    check_len(code, r)?;
    Ok(restricted_count(
        code.stabilizer_matrix(),
        code.gauge_matrix(),
        code.gauge_rank(),
        r,
    ))
}

/// `R` supports no nontrivial dressed logical.
pub fn is_bare_cleanable(code: &SubsystemCode, r: &Region) -> Result<bool> {
    Ok(count_dressed(code, r)? == 0)
}

/// `R` supports no nontrivial bare logical.
pub fn is_dressed_cleanable(code: &SubsystemCode, r: &Region) -> Result<bool> {
    Ok(count_bare(code, r)? == 0)
}

/// Erasure of `R` is correctable.
pub fn is_correctable(code: &SubsystemCode, r: &Region) -> Result<bool> {
    is_bare_cleanable(code, r)
}

/// Multiplies `p` by a stabilizer (bare) or gauge (dressed) element so that
/// the result acts trivially on `R`. `Ok(None)` when no multiplier matches
/// `p` on `R`.
pub fn clean_operator(
    code: &SubsystemCode,
    p: &PauliOperator,
    r: &Region,
    kind: LogicalKind,
) -> Result<Option<PauliOperator>> {
    check_len(code, r)?;
    if p.num_qubits() != code.num_qubits() {
        return Err(Error::LengthMismatch {
            left: code.num_qubits(),
            right: p.num_qubits(),
        });
    }
    let group = match kind {
        LogicalKind::Bare => {
            if !code.commutes_with_gauge(p) {
                return Err(Error::NotLogical("bare"));
            }
            code.stabilizer()
        }
        LogicalKind::Dressed => {
            if !code.commutes_with_stabilizer(p) {
                return Err(Error::NotLogical("dressed"));
            }
            code.gauge()
        }
    };
    let mask = symplectic_mask(r);
    let mut restricted = BitMatrix::with_cols(2 * code.num_qubits());
    for g in group.rows() {
        let mut v = g.symplectic();
        v.and_assign(&mask);
        restricted.push_row(&v);
    }
    let mut target = p.symplectic();
    target.and_assign(&mask);
    let Some(combo) = restricted.rref_tracked().solve(&target) else {
        return Ok(None);
    };
    let cleaned = p.mul_unchecked(&group.product(&combo));
    debug_assert_eq!(cleaned.support_bits().overlap(r.mask()), 0);
    Ok(Some(cleaned))
}

/// Every gauge generator touches at most one of the two regions.
pub fn spatially_disjoint(code: &SubsystemCode, r1: &Region, r2: &Region) -> Result<bool> {
    let geo = code.require_geometry()?;
    check_len(code, r1)?;
    check_len(code, r2)?;
    Ok(geo
        .generator_supports()
        .iter()
        .all(|s| !(s.iter().any(|&q| r1.contains(q)) && s.iter().any(|&q| r2.contains(q)))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnionMode {
    /// Pairs of dressed-cleanable regions; the union must be dressed-cleanable.
    DressedCleanable,
    /// Pairs of bare-cleanable regions; the union may fail for subsystem codes.
    BareCleanable,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnionCounterexample {
    pub r1: Vec<usize>,
    pub r2: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnionReport {
    pub mode: UnionMode,
    pub pairs_tested: usize,
    pub attempts: usize,
    pub counterexample_count: usize,
    /// The first few counterexamples in sampling order.
    pub counterexamples: Vec<UnionCounterexample>,
}

impl UnionReport {
    pub fn holds(&self) -> bool {
        self.counterexample_count == 0
    }
}

const KEPT_COUNTEREXAMPLES: usize = 16;

/// Samples `samples` pairs of spatially disjoint cleanable regions (random
/// subsets of small balls) and checks that their union is cleanable too.
pub fn verify_union_lemma(
    code: &SubsystemCode,
    samples: usize,
    mode: UnionMode,
    rng: &mut impl Rng,
) -> Result<UnionReport> {
    let geo = code.require_geometry()?;
    let n = code.num_qubits();
    let cleanable = |r: &Region| -> Result<bool> {
        match mode {
            UnionMode::DressedCleanable => is_dressed_cleanable(code, r),
            UnionMode::BareCleanable => is_bare_cleanable(code, r),
        }
    };
    let max_radius = (geo.size() / 4).max(1);
    let sample_region = |rng: &mut dyn rand::RngCore| -> Result<Region> {
        let centre = rng.gen_range(0..n);
        let radius = rng.gen_range(0..=max_radius);
        let ball = crate::geometry::neighborhood(geo, &Region::new(n, [centre])?, radius);
        let keep = ball.iter().filter(|&q| q == centre || rng.gen_bool(0.5));
        Region::new(n, keep)
    };

    let mut report = UnionReport {
        mode,
        pairs_tested: 0,
        attempts: 0,
        counterexample_count: 0,
        counterexamples: Vec::new(),
    };
    let max_attempts = samples.saturating_mul(200).max(1000);
    while report.pairs_tested < samples && report.attempts < max_attempts {
        report.attempts += 1;
        let r1 = sample_region(rng)?;
        let r2 = sample_region(rng)?;
        if !spatially_disjoint(code, &r1, &r2)? || !cleanable(&r1)? || !cleanable(&r2)? {
            continue;
        }
        report.pairs_tested += 1;
        if !cleanable(&r1.union(&r2))? {
            report.counterexample_count += 1;
            if report.counterexamples.len() < KEPT_COUNTEREXAMPLES {
                report.counterexamples.push(UnionCounterexample {
                    r1: r1.qubits(),
                    r2: r2.qubits(),
                });
            }
        }
    }
    Ok(report)
}
