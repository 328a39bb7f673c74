use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ftgate::cleaning::is_bare_cleanable;
use ftgate::geometry::{self, connected_components, Partition, RandomCellOutcome};
use ftgate::hierarchy::{self, CliffordLevel, PhasePolynomial};
use ftgate::search;
use ftgate::*;

#[test]
fn random_cell_region_is_correctable_and_separated() {
    let code = build_toric(24).unwrap();
    let geo = code.geometry().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let RandomCellOutcome::Success(rc) = geometry::random_cell_region(geo, 0.45, 0, 20.0, &mut rng).unwrap() else {
        panic!("construction failed");
    };
    assert!(!rc.balls.is_empty());
    assert!(is_bare_cleanable(&code, &rc.region).unwrap());
    for (i, a) in rc.balls.iter().enumerate() {
        for b in &rc.balls[i + 1..] {
            let d = (0..2).map(|ax| geo.axis_distance(ax, a.centre[ax], b.centre[ax])).max().unwrap();
            assert!(d > geo.xi() + a.radius + b.radius, "{a:?} {b:?}");
        }
    }
    let p = geometry::skewed_tiling_from_balls(geo, &rc.balls, 1).unwrap();
    p.check_covering().unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    match geometry::random_cell_region(geo, 0.0, 0, 20.0, &mut rng).unwrap() {
        RandomCellOutcome::Failure { empty_cells, .. } => assert!(!empty_cells.is_empty()),
        RandomCellOutcome::Success(_) => panic!("nothing is lost at p0 = 0"),
    }
}

#[test]
fn two_dimensional_tubes() {
    let code = build_toric(6).unwrap();
    let geo = code.geometry().unwrap();
    let p = geometry::tube_partition(geo, 1, 1, 3, 0).unwrap();
    assert_eq!(p.regions.len(), 1);
    p.check_covering().unwrap();
    // R0: width-1 strips along axis 0, one per tile of the cross axis
    let comps = connected_components(geo, &p.r0);
    assert_eq!(comps.len(), 2);
    assert!(comps.iter().all(|c| c.len() == 2 * 6));
    assert!(geometry::tube_partition(geo, 3, 1, 3, 0).is_err());
    assert!(geometry::tube_partition(geo, 1, 1, 3, 2).is_err());
}

#[test]
fn haah_tubes_cover_on_every_axis() {
    let code = build_haah_cubic(3).unwrap();
    let geo = code.geometry().unwrap();
    for axis in 0..3 {
        let p = geometry::tube_partition(geo, 1, 1, 3, axis).unwrap();
        assert_eq!(p.regions.len(), 2);
        p.check_covering().unwrap();
        let b = hierarchy::level_bound_from_partition(&code, &p, 0).unwrap();
        assert_eq!(b.bound(), Some(2), "axis {axis}");
    }
}

/// Splits the Steane code's qubits into three correctable parts; the bound
/// must not undercut the level of the verified transversal S.
#[test]
fn steane_bound_is_at_least_transversal_level() {
    let code = build_steane().unwrap();
    let n = code.num_qubits();
    let per: Vec<PhasePolynomial> = (0..n).map(|_| PhasePolynomial::linear(1, 3, 0, 2).unwrap()).collect();
    let action = hierarchy::transversal_diagonal_logical_action(&code, &per).unwrap();
    assert_eq!(action.level, Some(CliffordLevel::Level(2)));

    let mut found = None;
    for labels in 0..3usize.pow(n as u32) {
        let part = |j: usize| {
            Region::new(n, (0..n).filter(|&q| (labels / 3usize.pow(q as u32)) % 3 == j)).unwrap()
        };
        let parts = [part(0), part(1), part(2)];
        if parts.iter().all(|r| is_bare_cleanable(&code, r).unwrap()) {
            found = Some(parts);
            break;
        }
    }
    let [r0, r1, r2] = found.expect("a 3-way correctable split exists");
    let p = Partition {
        r0,
        regions: vec![r1, r2],
        metadata: BTreeMap::new(),
    };
    let b = hierarchy::level_bound_from_partition(&code, &p, 0).unwrap().bound().unwrap();
    assert_eq!(b, 2);
}

#[test]
fn fifteen_qubit_code_has_no_three_way_correctable_split() {
    let code = build_reed_muller(4).unwrap();
    let n = code.num_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    use rand::Rng;
    for _ in 0..500 {
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let all = (0..3).all(|j| {
            let r = Region::new(n, (0..n).filter(|&q| labels[q] == j)).unwrap();
            is_bare_cleanable(&code, &r).unwrap()
        });
        assert!(!all);
    }
}

#[test]
fn toric_distances_fit_linear_bound() {
    let rows: Vec<(usize, usize, usize)> = [3, 4, 5]
        .into_iter()
        .map(|l| (l, search::distance(&build_toric(l).unwrap(), 6).unwrap().exact().unwrap(), 2))
        .collect();
    let r = search::distance_bound_check(&rows, 2).unwrap();
    assert_eq!(r.exponent, 1);
    assert!(r.consistent, "{r:?}");
    assert_eq!(r.distances, vec![3, 4, 5]);
}

#[test]
fn spread_soundness_in_three_dimensions() {
    let code = build_haah_cubic(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let r = geometry::spread_soundness(code.geometry().unwrap(), 40, 3, &mut rng).unwrap();
    assert_eq!(r.violations, 0);
}
