//! Erasure (qubit loss) Monte Carlo.
//!
//! Trial `t` at grid index `i` draws its seed from a ChaCha8 stream selected
//! by `(i, t)` under the master seed, so results never depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cleaning::is_bare_cleanable;
use crate::code::SubsystemCode;
use crate::error::{Error, Result};
use crate::geometry::Partition;
use crate::hierarchy::level_bound_from_partition;
use crate::region::Region;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

fn check_rate(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("loss rate must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Each qubit is lost independently with probability `p`.
pub fn sample_loss(n: usize, p: f64, rng: &mut impl Rng) -> Region {
    Region::new(n, (0..n).filter(|_| rng.gen_bool(p))).expect("indices in range")
}

/// Whether the erasure of a random loss set is correctable.
pub fn erasure_trial(code: &SubsystemCode, p: f64, seed: u64) -> Result<bool> {
    check_rate(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    is_bare_cleanable(code, &sample_loss(code.num_qubits(), p, &mut rng))
}

/// Seed of trial `trial` at grid index `point`.
pub fn trial_seed(master: u64, point: usize, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((point as u64) << 32) | trial as u64);
    rng.next_u64()
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the bounds are exactly 0 and 1 at the extremes; avoid rounding below
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LossPoint {
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl LossPoint {
    fn sigma(&self) -> f64 {
        (self.fraction * (1.0 - self.fraction) / self.trials as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LossCurve {
    pub code: String,
    pub num_qubits: usize,
    pub master_seed: u64,
    pub points: Vec<LossPoint>,
}

impl LossCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,trials,successes,fraction,ci_low,ci_high\n");
        for pt in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{:.6},{:.6},{:.6}",
                pt.p, pt.trials, pt.successes, pt.fraction, pt.ci_low, pt.ci_high
            );
        }
        s
    }

    pub fn fraction_at(&self, p: f64) -> Option<f64> {
        self.points.iter().find(|pt| (pt.p - p).abs() < 1e-9).map(|pt| pt.fraction)
    }

    /// Adjacent grid points (by index of the larger `p`) where the fraction
    /// rises by more than `sigmas` combined standard deviations.
    pub fn monotonicity_violations(&self, sigmas: f64) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| self.points[a].p.total_cmp(&self.points[b].p));
        order
            .windows(2)
            .filter(|w| {
                let (a, b) = (&self.points[w[0]], &self.points[w[1]]);
                let tol = sigmas * (a.sigma().powi(2) + b.sigma().powi(2)).sqrt();
                b.fraction - a.fraction > tol.max(1e-12)
            })
            .map(|w| w[1])
            .collect()
    }
}

/// Correctable fraction at each rate in `grid`.
pub fn loss_curve(code: &SubsystemCode, grid: &[f64], trials: usize, master_seed: u64) -> Result<LossCurve> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for (i, &p) in grid.iter().enumerate() {
        check_rate(p)?;
        let outcomes: Vec<bool> = (0..trials)
            .into_par_iter()
            .map(|t| erasure_trial(code, p, trial_seed(master_seed, i, t)))
            .collect::<Result<_>>()?;
        let successes = outcomes.iter().filter(|&&ok| ok).count();
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        points.push(LossPoint {
            p,
            trials,
            successes,
            fraction: successes as f64 / trials as f64,
            ci_low,
            ci_high,
        });
    }
    Ok(LossCurve {
        code: code.name().to_string(),
        num_qubits: code.num_qubits(),
        master_seed,
        points,
    })
}

/// `a:b:step` style grid, inclusive of `b` up to rounding.
pub fn rate_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step <= 0.0 || stop < start {
        return Err(Error::InvalidParameter(format!("bad grid {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect();
    for &p in &grid {
        check_rate(p)?;
    }
    Ok(grid)
}

#[derive(Clone, Debug, Serialize)]
pub struct Crossing {
    pub smaller: usize,
    pub larger: usize,
    pub p: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdEstimate {
    pub estimate: f64,
    /// Half the range of the pairwise crossings, at least half a grid step.
    pub uncertainty: f64,
    pub crossings: Vec<Crossing>,
}

/// First downward crossing of `large - small` over the shared grid points.
fn pair_crossing(small: &LossCurve, large: &LossCurve) -> Option<(f64, f64)> {
    let mut diffs: Vec<(f64, f64)> = small
        .points
        .iter()
        .filter_map(|a| {
            large
                .points
                .iter()
                .find(|b| (a.p - b.p).abs() < 1e-9)
                .map(|b| (a.p, b.fraction - a.fraction))
        })
        .collect();
    diffs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let step = diffs.windows(2).map(|w| w[1].0 - w[0].0).fold(f64::INFINITY, f64::min);
    let nonzero: Vec<(f64, f64)> = diffs.into_iter().filter(|d| d.1 != 0.0).collect();
    nonzero.windows(2).find(|w| w[0].1 > 0.0 && w[1].1 < 0.0).map(|w| {
        let (p0, d0) = w[0];
        let (p1, d1) = w[1];
        (p0 + (p1 - p0) * d0 / (d0 - d1), step)
    })
}

/// Crossing of correctable-fraction curves between consecutive sizes,
/// aggregated by the median.
pub fn threshold_estimate(curves: &[(usize, LossCurve)]) -> Result<ThresholdEstimate> {
    if curves.len() < 2 {
        return Err(Error::InsufficientData("need curves for at least two sizes".into()));
    }
    let mut sorted: Vec<&(usize, LossCurve)> = curves.iter().collect();
    sorted.sort_by_key(|c| c.0);
    let mut crossings = Vec::new();
    let mut min_step = f64::INFINITY;
    for w in sorted.windows(2) {
        if let Some((p, step)) = pair_crossing(&w[0].1, &w[1].1) {
            min_step = min_step.min(step);
            crossings.push(Crossing {
                smaller: w[0].0,
                larger: w[1].0,
                p,
            });
        }
    }
    if crossings.is_empty() {
        return Err(Error::NoCrossing);
    }
    let mut ps: Vec<f64> = crossings.iter().map(|c| c.p).collect();
    ps.sort_by(f64::total_cmp);
    let mid = ps.len() / 2;
    let estimate = if ps.len() % 2 == 1 { ps[mid] } else { (ps[mid - 1] + ps[mid]) / 2.0 };
    let half_range = (ps[ps.len() - 1] - ps[0]) / 2.0;
    let half_step = if min_step.is_finite() { min_step / 2.0 } else { 0.0 };
    Ok(ThresholdEstimate {
        estimate,
        uncertainty: half_range.max(half_step),
        crossings,
    })
}

/// Loss data backing a consistency check: a multi-size threshold estimate,
/// or a single curve when the family has no usable crossing.
#[derive(Clone, Debug)]
pub enum LossEvidence<'a> {
    Threshold(&'a ThresholdEstimate),
    Curve(&'a LossCurve),
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PartitionStats {
    pub parts: usize,
    pub samples: usize,
    /// Samples in which every part was correctable.
    pub all_correctable: usize,
    /// All-correctable samples whose partition bound exceeded `parts - 1`.
    pub bound_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem3Report {
    pub code: String,
    pub level: u32,
    /// `1 / level`.
    pub bound: f64,
    pub estimate: Option<f64>,
    pub uncertainty: Option<f64>,
    /// Correctable fraction at grid rates above the bound (curve evidence).
    pub fractions_above_bound: BTreeMap<String, f64>,
    pub consistent: bool,
    /// The estimate sits at the bound within its uncertainty plus `0.05`.
    pub saturates: bool,
    /// Random `level + 1`-way partitions.
    pub finer: PartitionStats,
    /// Random `level`-way partitions: a level-`level` gate rules out every
    /// part being correctable.
    pub coarse: PartitionStats,
}

const SATURATION_SLACK: f64 = 0.05;

fn random_partition_stats(
    code: &SubsystemCode,
    parts: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<PartitionStats> {
    let n = code.num_qubits();
    let mut stats = PartitionStats {
        parts,
        ..Default::default()
    };
    for _ in 0..samples {
        let mut members = vec![Vec::new(); parts];
        for q in 0..n {
            members[rng.gen_range(0..parts)].push(q);
        }
        let regions: Vec<Region> = members
            .into_iter()
            .map(|m| Region::new(n, m))
            .collect::<Result<_>>()?;
        stats.samples += 1;
        let mut all = true;
        for r in &regions {
            if !is_bare_cleanable(code, r)? {
                all = false;
                break;
            }
        }
        if !all {
            continue;
        }
        stats.all_correctable += 1;
        let partition = Partition {
            r0: regions[0].clone(),
            regions: regions[1..].to_vec(),
            metadata: BTreeMap::new(),
        };
        let over = match level_bound_from_partition(code, &partition, 0)?.bound() {
            Some(m) => m > parts - 1,
            None => true,
        };
        if over {
            stats.bound_violations += 1;
        }
    }
    Ok(stats)
}

/// Compares the measured loss tolerance with `1 / level` for a code carrying
/// a transversal logical gate of the given level, and replays the proof's
/// random partition construction with `level` and `level + 1` parts.
pub fn theorem3_consistency(
    code: &SubsystemCode,
    level: u32,
    evidence: LossEvidence<'_>,
    partition_samples: usize,
    rng: &mut impl Rng,
) -> Result<Theorem3Report> {
    if level == 0 {
        return Err(Error::InvalidParameter("level must be at least 1".into()));
    }
    let bound = 1.0 / level as f64;
    let mut fractions = BTreeMap::new();
    let (estimate, uncertainty, consistent, saturates) = match evidence {
        LossEvidence::Threshold(t) => {
            let consistent = t.estimate - t.uncertainty <= bound + 1e-12;
            let saturates = (t.estimate - bound).abs() <= t.uncertainty + SATURATION_SLACK;
            (Some(t.estimate), Some(t.uncertainty), consistent, saturates)
        }
        LossEvidence::Curve(c) => {
            if c.points.is_empty() {
                return Err(Error::InsufficientData("loss curve has no points".into()));
            }
            for pt in c.points.iter().filter(|pt| pt.p > bound) {
                fractions.insert(format!("{}", pt.p), pt.fraction);
            }
            (None, None, true, false)
        }
    };
    let coarse = random_partition_stats(code, level as usize, partition_samples, rng)?;
    let finer = random_partition_stats(code, level as usize + 1, partition_samples, rng)?;
    Ok(Theorem3Report {
        code: code.name().to_string(),
        level,
        bound,
        estimate,
        uncertainty,
        fractions_above_bound: fractions,
        consistent: consistent && coarse.all_correctable == 0 && finer.bound_violations == 0,
        saturates,
        finer,
        coarse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_toric;

    #[test]
    fn wilson_matches_closed_form() {
        // 8 of 10: centre (0.8 + z^2/20)/(1 + z^2/10)
        let (lo, hi) = wilson_interval(8, 10);
        assert!((lo - 0.490_16).abs() < 1e-4 && (hi - 0.943_32).abs() < 1e-4, "{lo} {hi}");
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
        let (lo, hi) = wilson_interval(1, 1);
        assert!(lo > 0.0 && hi == 1.0);
    }

    #[test]
    fn extreme_rates() {
        let code = build_toric(3).unwrap();
        for seed in 0..5 {
            assert!(erasure_trial(&code, 0.0, seed).unwrap());
            assert!(!erasure_trial(&code, 1.0, seed).unwrap());
        }
        assert!(erasure_trial(&code, 1.5, 0).is_err());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(rate_grid(0.4, 0.6, 0.1).unwrap(), vec![0.4, 0.5, 0.6]);
        assert!(rate_grid(0.4, 0.3, 0.1).is_err());
        assert!(rate_grid(0.9, 1.2, 0.1).is_err());
    }

    #[test]
    fn identical_curves_do_not_cross() {
        let code = build_toric(3).unwrap();
        let c = loss_curve(&code, &[0.2, 0.5, 0.8], 50, 1).unwrap();
        assert!(matches!(threshold_estimate(&[(3, c.clone()), (4, c)]), Err(Error::NoCrossing)));
    }

    #[test]
    fn single_trial_curve() {
        let code = build_toric(3).unwrap();
        let c = loss_curve(&code, &[0.5], 1, 9).unwrap();
        let pt = &c.points[0];
        assert!(pt.ci_low <= pt.fraction && pt.fraction <= pt.ci_high);
        assert!(pt.ci_high - pt.ci_low > 0.5);
    }
}
