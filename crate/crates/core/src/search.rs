//! Distance computation, logical search inside regions, string-like logical
//! detection, and the distance-versus-level scaling check.

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{BitMatrix, BitVec, Echelon};
use crate::cleaning::LogicalKind;
use crate::code::SubsystemCode;
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator, SymplecticBasis};
use crate::region::Region;

pub const DEFAULT_W_MAX: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceResult {
    Exact { d: usize, witness: PauliOperator },
    /// No logical of weight `<= w_max`; the distance is at least `w_max + 1`.
    LowerBound { at_least: usize },
}

impl DistanceResult {
    pub fn exact(&self) -> Option<usize> {
        match self {
            DistanceResult::Exact { d, .. } => Some(*d),
            DistanceResult::LowerBound { .. } => None,
        }
    }
}

/// Minimum weight of a dressed logical with nontrivial action.
pub fn distance(code: &SubsystemCode, w_max: usize) -> Result<DistanceResult> {
    distance_of_kind(code, w_max, LogicalKind::Dressed)
}

/// Minimum weight search over operators commuting with `S` (dressed) or `G`
/// (bare) and outside `G` (dressed) or `S` (bare).
///
/// Candidates are visited by weight, then lexicographic support, then letter
/// assignment (`X < Y < Z`, first qubit most significant). The first hit in
/// this order is returned whatever the thread schedule.
pub fn distance_of_kind(code: &SubsystemCode, w_max: usize, kind: LogicalKind) -> Result<DistanceResult> {
    if w_max == 0 {
        return Err(Error::InvalidParameter("w_max must be at least 1".into()));
    }
    let n = code.num_qubits();
    let (checks, trivial): (&SymplecticBasis, Echelon) = match kind {
        LogicalKind::Dressed => (code.stabilizer(), code.gauge().echelon()),
        LogicalKind::Bare => (code.gauge(), code.stabilizer().echelon()),
    };
    let table = SyndromeTable::new(checks);
    for w in 1..=w_max.min(n) {
        let hit = (0..n).into_par_iter().find_map_first(|first| {
            let mut search = WeightSearch {
                n,
                w,
                table: &table,
                trivial: &trivial,
                support: Vec::with_capacity(w),
                prefix: vec![Vec::new(); w + 1],
            };
            search.prefix[0] = vec![0; table.stride];
            search.descend(first)
        });
        if let Some(witness) = hit {
            return Ok(DistanceResult::Exact { d: w, witness });
        }
    }
    Ok(DistanceResult::LowerBound { at_least: w_max + 1 })
}

/// Syndrome of each single-qubit Pauli against a list of checks, bit-packed.
struct SyndromeTable {
    stride: usize,
    /// `data[(3 q + letter) * stride ..]`, letters ordered X, Y, Z.
    data: Vec<u64>,
}

impl SyndromeTable {
    fn new(checks: &SymplecticBasis) -> Self {
        let n = checks.num_qubits();
        let stride = checks.len().div_ceil(64).max(1);
        let mut data = vec![0u64; 3 * n * stride];
        for (i, c) in checks.rows().iter().enumerate() {
            for q in 0..n {
                let (cx, cz) = (c.x().get(q), c.z().get(q));
                // X anticommutes with z-part, Z with x-part, Y with either alone.
                let flips = [cz, cx ^ cz, cx];
                for (letter, &f) in flips.iter().enumerate() {
                    if f {
                        data[(3 * q + letter) * stride + i / 64] |= 1 << (i % 64);
                    }
                }
            }
        }
        SyndromeTable { stride, data }
    }

    fn get(&self, q: usize, letter: usize) -> &[u64] {
        let s = (3 * q + letter) * self.stride;
        &self.data[s..s + self.stride]
    }
}

const LETTERS: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

struct WeightSearch<'a> {
    n: usize,
    w: usize,
    table: &'a SyndromeTable,
    trivial: &'a Echelon,
    support: Vec<usize>,
    /// `prefix[j]` holds the syndromes of all `3^j` letter assignments on the
    /// first `j` support qubits, in assignment order.
    prefix: Vec<Vec<u64>>,
}

impl WeightSearch<'_> {
    fn descend(&mut self, q: usize) -> Option<PauliOperator> {
        let depth = self.support.len();
        if self.n - q < self.w - depth {
            return None;
        }
        self.support.push(q);
        let stride = self.table.stride;
        let (head, tail) = self.prefix.split_at_mut(depth + 1);
        let prev = &head[depth];
        let next = &mut tail[0];
        next.clear();
        for combo in prev.chunks(stride) {
            for letter in 0..3 {
                next.extend(combo.iter().zip(self.table.get(q, letter)).map(|(a, b)| a ^ b));
            }
        }
        let found = if depth + 1 == self.w {
            self.check_leaf()
        } else {
            let mut hit = None;
            for nq in q + 1..self.n {
                hit = self.descend(nq);
                if hit.is_some() {
                    break;
                }
            }
            hit
        };
        self.support.pop();
        found
    }

    fn check_leaf(&self) -> Option<PauliOperator> {
        let stride = self.table.stride;
        for (idx, syn) in self.prefix[self.w].chunks(stride).enumerate() {
            if syn.iter().any(|&v| v != 0) {
                continue;
            }
            let p = self.operator(idx);
            if !self.trivial.contains(&p.symplectic()) {
                return Some(p);
            }
        }
        None
    }

    fn operator(&self, mut idx: usize) -> PauliOperator {
        let mut p = PauliOperator::identity(self.n);
        for &q in self.support.iter().rev() {
            p.set_letter(q, LETTERS[idx % 3]);
            idx /= 3;
        }
        p
    }
}

/// Operators on `R` commuting with every row of `checks`, as full-length
/// symplectic vectors.
fn restricted_centralizer(checks: &SymplecticBasis, r: &Region) -> Vec<BitVec> {
    let n = checks.num_qubits();
    let cols = r.symplectic_columns();
    let mut swapped = BitMatrix::with_cols(2 * n);
    for c in checks.rows() {
        swapped.push_row(&c.z().concat(c.x()));
    }
    let sub = swapped.select_columns(&cols);
    sub.kernel()
        .into_iter()
        .map(|v| BitVec::from_indices(2 * n, v.iter_ones().map(|i| cols[i])))
        .collect()
}

/// A nontrivial bare (in `C(G) \ S`) or dressed (in `C(S) \ G`) logical
/// supported on `R`, if one exists.
pub fn find_logical_in_region(code: &SubsystemCode, r: &Region, kind: LogicalKind) -> Result<Option<PauliOperator>> {
    if r.num_qubits() != code.num_qubits() {
        return Err(Error::LengthMismatch {
            left: code.num_qubits(),
            right: r.num_qubits(),
        });
    }
    let n = code.num_qubits();
    let (checks, trivial) = match kind {
        LogicalKind::Dressed => (code.stabilizer(), code.gauge().echelon()),
        LogicalKind::Bare => (code.gauge(), code.stabilizer().echelon()),
    };
    let found = restricted_centralizer(checks, r)
        .into_iter()
        .find(|v| !trivial.contains(v))
        .map(|v| PauliOperator::from_symplectic(n, &v));
    if let Some(p) = &found {
        let ok = match kind {
            LogicalKind::Dressed => code.is_nontrivial_dressed(p),
            LogicalKind::Bare => code.is_nontrivial_bare(p),
        };
        if !ok || p.support_bits().overlap(r.mask()) != p.weight() {
            return Err(Error::Invariant("region logical failed re-verification".into()));
        }
    }
    Ok(found)
}

#[derive(Clone, Debug, Serialize)]
pub struct StringWitness {
    /// Axis the tube extends along.
    pub axis: usize,
    /// Lowest cross-section coordinates (the extended axis entry is 0).
    pub corner: Vec<usize>,
    pub tube: Vec<usize>,
    pub operator: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StringSearch {
    pub width: usize,
    pub tubes_checked: usize,
    pub witness: Option<StringWitness>,
}

impl StringSearch {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// All tubes `w^(D-1) x L` along every axis, at every cross-section offset.
pub fn enumerate_tubes(code: &SubsystemCode, width: usize) -> Result<Vec<(usize, Vec<usize>, Region)>> {
    let geo = code.require_geometry()?;
    let dim = geo.dim();
    let l = geo.size();
    if width == 0 || width >= l {
        return Err(Error::InvalidParameter(format!("tube width {width} outside 1..{l}")));
    }
    let mut out = Vec::new();
    for axis in 0..dim {
        let cross: Vec<usize> = (0..dim).filter(|&a| a != axis).collect();
        let positions = l.pow(cross.len() as u32);
        for pos in 0..positions {
            let mut corner = vec![0; dim];
            let mut rest = pos;
            for &a in &cross {
                corner[a] = rest % l;
                rest /= l;
            }
            // Skip offsets that would run off a non-periodic boundary.
            if cross.iter().any(|&a| !geo.periodic()[a] && corner[a] + width > l) {
                continue;
            }
            let sites: Vec<usize> = (0..geo.num_sites())
                .filter(|&s| {
                    let c = geo.site_coords(s);
                    cross.iter().all(|&a| (c[a] + l - corner[a]) % l < width)
                })
                .collect();
            out.push((axis, corner, geo.region_of_sites(sites)));
        }
    }
    Ok(out)
}

/// Searches every width-`w` tube for a nontrivial dressed logical.
pub fn has_string_logical(code: &SubsystemCode, width: usize) -> Result<StringSearch> {
    let tubes = enumerate_tubes(code, width)?;
    let mut checked = 0;
    for (axis, corner, tube) in tubes {
        checked += 1;
        if let Some(p) = find_logical_in_region(code, &tube, LogicalKind::Dressed)? {
            return Ok(StringSearch {
                width,
                tubes_checked: checked,
                witness: Some(StringWitness {
                    axis,
                    corner,
                    tube: tube.qubits(),
                    operator: p.to_string(),
                }),
            });
        }
    }
    Ok(StringSearch {
        width,
        tubes_checked: checked,
        witness: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceBoundReport {
    pub exponent: i64,
    pub sizes: Vec<usize>,
    pub distances: Vec<usize>,
    /// `d / L^exponent` per size.
    pub ratios: Vec<f64>,
    /// Log-log slopes between consecutive sizes.
    pub slopes: Vec<f64>,
    /// Smallest constant `c` with `d <= c L^exponent` on all sizes.
    pub fitted_constant: f64,
    /// Every consecutive slope is at most the exponent.
    pub consistent: bool,
    pub violations: Vec<usize>,
}

/// Checks measured `(L, d, m)` triples of one family against `d = O(L^(D+1-m))`.
pub fn distance_bound_check(results: &[(usize, usize, usize)], dim: usize) -> Result<DistanceBoundReport> {
    let mut rows = results.to_vec();
    rows.sort_unstable();
    rows.dedup_by_key(|r| r.0);
    if rows.len() < 2 {
        return Err(Error::InsufficientData("need at least two distinct sizes".into()));
    }
    let m = rows[0].2;
    if rows.iter().any(|r| r.2 != m) {
        return Err(Error::InvalidParameter("all entries of a family must share the level m".into()));
    }
    if rows.iter().any(|r| r.0 < 2 || r.1 == 0) {
        return Err(Error::InvalidParameter("sizes must be >= 2 and distances >= 1".into()));
    }
    let exponent = dim as i64 + 1 - m as i64;
    let ratios: Vec<f64> = rows
        .iter()
        .map(|&(l, d, _)| d as f64 / (l as f64).powi(exponent as i32))
        .collect();
    let slopes: Vec<f64> = rows
        .windows(2)
        .map(|w| ((w[1].1 as f64).ln() - (w[0].1 as f64).ln()) / ((w[1].0 as f64).ln() - (w[0].0 as f64).ln()))
        .collect();
    let violations: Vec<usize> = slopes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > exponent as f64 + 1e-9)
        .map(|(i, _)| rows[i + 1].0)
        .collect();
    Ok(DistanceBoundReport {
        exponent,
        sizes: rows.iter().map(|r| r.0).collect(),
        distances: rows.iter().map(|r| r.1).collect(),
        fitted_constant: ratios.iter().copied().fold(0.0, f64::max),
        ratios,
        slopes,
        consistent: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_bacon_shor, build_steane, build_toric};

    #[test]
    fn small_distances() {
        let steane = build_steane().unwrap();
        let r = distance(&steane, 4).unwrap();
        assert_eq!(r.exact(), Some(3));
        let bs = build_bacon_shor(3).unwrap();
        assert_eq!(distance(&bs, 4).unwrap().exact(), Some(3));
        let toric = build_toric(3).unwrap();
        assert_eq!(
            distance(&toric, 2).unwrap(),
            DistanceResult::LowerBound { at_least: 3 }
        );
    }

    #[test]
    fn witness_is_first_in_order() {
        // For the Steane code the lexicographically first weight-3 logical
        // lies on the support {0, 1, 2} (points 1, 2, 3 form a line).
        let steane = build_steane().unwrap();
        let DistanceResult::Exact { witness, .. } = distance(&steane, 3).unwrap() else {
            panic!()
        };
        assert_eq!(witness.support(), vec![0, 1, 2]);
        assert_eq!(witness.to_string(), "+XXXIIII");
    }

    #[test]
    fn region_logical_examples() {
        let toric = build_toric(3).unwrap();
        let n = toric.num_qubits();
        let cycle = Region::new(n, (0..3).map(|x| 2 * x)).unwrap();
        let p = find_logical_in_region(&toric, &cycle, LogicalKind::Dressed).unwrap().unwrap();
        assert_eq!(p.to_string(), "+ZIZIZIIIIIIIIIIIII");
        let single = Region::new(n, [4]).unwrap();
        assert!(find_logical_in_region(&toric, &single, LogicalKind::Dressed).unwrap().is_none());
    }

    #[test]
    fn bound_check_needs_two_sizes() {
        assert!(distance_bound_check(&[(3, 3, 2)], 2).is_err());
        let r = distance_bound_check(&[(3, 3, 2), (4, 4, 2), (5, 5, 2)], 2).unwrap();
        assert!(r.consistent);
        assert_eq!(r.exponent, 1);
        let bad = distance_bound_check(&[(2, 2, 2), (4, 9, 2)], 2).unwrap();
        assert!(!bad.consistent);
    }
}
