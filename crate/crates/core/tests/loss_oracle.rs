//! Erasure correctability on the toric code checked against percolation:
//! a lost set is uncorrectable iff its lost edges, on the lattice or on the
//! dual lattice, contain a cycle that winds around the torus.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ftgate::cleaning::is_bare_cleanable;
use ftgate::loss::{self, LossEvidence};
use ftgate::{build_reed_muller, build_steane, build_toric};

/// Union-find with the lattice displacement of each node from its parent.
struct Winding {
    parent: Vec<usize>,
    offset: Vec<(i64, i64)>,
}

impl Winding {
    fn new(size: usize) -> Self {
        Winding {
            parent: (0..size).collect(),
            offset: vec![(0, 0); size],
        }
    }

    fn find(&self, mut a: usize) -> (usize, (i64, i64)) {
        let mut off = (0, 0);
        while self.parent[a] != a {
            off.0 += self.offset[a].0;
            off.1 += self.offset[a].1;
            a = self.parent[a];
        }
        (a, off)
    }

    /// Adds an edge from `a` to `b` with `pos(b) = pos(a) + d`; true when it
    /// closes a winding cycle.
    fn join(&mut self, a: usize, b: usize, d: (i64, i64)) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        let rel = (oa.0 + d.0 - ob.0, oa.1 + d.1 - ob.1);
        if ra == rb {
            return rel != (0, 0);
        }
        self.parent[rb] = ra;
        self.offset[rb] = rel;
        false
    }
}

/// Qubit `2(yL + x)` is the edge `(x, y) -> (x + 1, y)`, `2(yL + x) + 1` the
/// edge `(x, y) -> (x, y + 1)`.
fn percolation_correctable(l: usize, lost: &[bool]) -> bool {
    let idx = |x: usize, y: usize| (y % l) * l + (x % l);
    let mut primal = Winding::new(l * l);
    let mut dual = Winding::new(l * l);
    for y in 0..l {
        for x in 0..l {
            if lost[2 * idx(x, y)] {
                if primal.join(idx(x, y), idx(x + 1, y), (1, 0)) {
                    return false;
                }
                // crossed by the dual edge between faces (x, y - 1) and (x, y)
                if dual.join(idx(x, y + l - 1), idx(x, y), (0, 1)) {
                    return false;
                }
            }
            if lost[2 * idx(x, y) + 1] {
                if primal.join(idx(x, y), idx(x, y + 1), (0, 1)) {
                    return false;
                }
                if dual.join(idx(x + l - 1, y), idx(x, y), (1, 0)) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn per_sample_agreement_with_percolation() {
    for l in [4, 6, 8] {
        let code = build_toric(l).unwrap();
        let n = code.num_qubits();
        let mut rng = ChaCha8Rng::seed_from_u64(l as u64);
        for p in [0.2, 0.35, 0.45, 0.5, 0.55, 0.7] {
            for _ in 0..150 {
                let r = loss::sample_loss(n, p, &mut rng);
                let lost: Vec<bool> = (0..n).map(|q| r.contains(q)).collect();
                assert_eq!(
                    is_bare_cleanable(&code, &r).unwrap(),
                    percolation_correctable(l, &lost),
                    "L={l} p={p} lost={:?}",
                    r.qubits()
                );
            }
        }
    }
}

#[test]
fn pinned_trial_matches_oracle() {
    let code = build_toric(8).unwrap();
    for seed in [0u64, 1, 2, 42] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = loss::sample_loss(code.num_qubits(), 0.3, &mut rng);
        let lost: Vec<bool> = (0..code.num_qubits()).map(|q| r.contains(q)).collect();
        assert_eq!(loss::erasure_trial(&code, 0.3, seed).unwrap(), percolation_correctable(8, &lost));
    }
}

#[test]
fn l16_fraction_at_040_from_percolation() {
    // The correctable fraction the toric code itself reaches at L = 16,
    // p = 0.40, measured without any linear algebra.
    let l = 16;
    let n = 2 * l * l;
    let trials = 2000;
    let mut ok = 0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(loss::trial_seed(99, 0, t));
        let r = loss::sample_loss(n, 0.40, &mut rng);
        let lost: Vec<bool> = (0..n).map(|q| r.contains(q)).collect();
        ok += percolation_correctable(l, &lost) as usize;
    }
    let fraction = ok as f64 / trials as f64;
    println!("percolation fraction at L=16, p=0.40: {fraction:.4}");
    assert!((0.90..0.97).contains(&fraction), "{fraction}");
}

#[test]
fn curves_are_deterministic_and_monotone() {
    let code = build_toric(6).unwrap();
    let grid = loss::rate_grid(0.1, 0.7, 0.1).unwrap();
    let a = loss::loss_curve(&code, &grid, 300, 5).unwrap();
    let b = loss::loss_curve(&code, &grid, 300, 5).unwrap();
    assert_eq!(a, b);
    let c = loss::loss_curve(&code, &grid, 300, 6).unwrap();
    assert_ne!(a, c);
    assert!(a.monotonicity_violations(3.0).is_empty());
    for pt in &a.points {
        assert!(pt.ci_low <= pt.fraction && pt.fraction <= pt.ci_high);
        assert!((0.0..=1.0).contains(&pt.fraction));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let threaded = pool.install(|| loss::loss_curve(&code, &grid, 300, 5).unwrap());
    assert_eq!(a, threaded);
}

#[test]
fn reed_muller_fraction_falls_with_m() {
    let grid = [0.1, 0.2, 0.3];
    let steane = loss::loss_curve(&build_steane().unwrap(), &grid, 2000, 3).unwrap();
    let rm15 = loss::loss_curve(&build_reed_muller(4).unwrap(), &grid, 2000, 3).unwrap();
    for (a, b) in steane.points.iter().zip(&rm15.points) {
        assert!(b.fraction < a.fraction, "p={}: {} vs {}", a.p, a.fraction, b.fraction);
    }
}

#[test]
fn theorem3_reports() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let rm15 = build_reed_muller(4).unwrap();
    let curve = loss::loss_curve(&rm15, &loss::rate_grid(0.1, 0.5, 0.1).unwrap(), 500, 1).unwrap();
    let r = loss::theorem3_consistency(&rm15, 3, LossEvidence::Curve(&curve), 300, &mut rng).unwrap();
    // A level-3 transversal gate exists, so no 3-way split has every part correctable.
    assert_eq!(r.coarse.all_correctable, 0);
    assert_eq!(r.finer.bound_violations, 0);
    assert!(r.consistent);
    assert!(r.fractions_above_bound.contains_key("0.4"));

    let steane = build_steane().unwrap();
    let r = loss::theorem3_consistency(&steane, 1, LossEvidence::Curve(&curve), 10, &mut rng).unwrap();
    assert_eq!(r.bound, 1.0);
    assert!(r.consistent);

    let empty = loss::LossCurve {
        code: "x".into(),
        num_qubits: 7,
        master_seed: 0,
        points: vec![],
    };
    assert!(loss::theorem3_consistency(&steane, 2, LossEvidence::Curve(&empty), 1, &mut rng).is_err());
}
