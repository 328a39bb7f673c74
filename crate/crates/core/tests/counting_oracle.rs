//! Region logical counts and code invariants against brute-force
//! enumeration with a separate dense GF(2) routine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ftgate::cleaning::{self, LogicalKind};
use ftgate::search;
use ftgate::*;

type Sym = Vec<bool>;

fn sym(p: &PauliOperator) -> Sym {
    let n = p.num_qubits();
    (0..n).map(|q| p.x().get(q)).chain((0..n).map(|q| p.z().get(q))).collect()
}

fn commute(a: &Sym, b: &Sym) -> bool {
    let n = a.len() / 2;
    (0..n).filter(|&i| (a[i] && b[n + i]) ^ (a[n + i] && b[i])).count() % 2 == 0
}

fn rank(rows: &[Sym]) -> usize {
    let mut m: Vec<Sym> = rows.to_vec();
    let mut r = 0;
    let cols = m.first().map_or(0, |v| v.len());
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c]) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] {
                let pivot = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        r += 1;
    }
    r
}

fn in_span(rows: &[Sym], v: &Sym) -> bool {
    let mut with = rows.to_vec();
    with.push(v.clone());
    rank(&with) == rank(rows)
}

/// `(log2 #operators on R commuting with `comm`) - (log2 #of those in span(triv))`.
fn brute_count(n: usize, region: &[usize], comm: &[Sym], triv: &[Sym]) -> usize {
    let mut commuting = 0usize;
    let mut trivial = 0usize;
    for code in 0..(1u64 << (2 * region.len())) {
        let mut v = vec![false; 2 * n];
        for (i, &q) in region.iter().enumerate() {
            v[q] = code >> (2 * i) & 1 == 1;
            v[n + q] = code >> (2 * i + 1) & 1 == 1;
        }
        if comm.iter().all(|g| commute(g, &v)) {
            commuting += 1;
            if in_span(triv, &v) {
                trivial += 1;
            }
        }
    }
    (commuting.trailing_zeros() - trivial.trailing_zeros()) as usize
}

fn gens(b: &SymplecticBasis) -> Vec<Sym> {
    b.rows().iter().map(sym).collect()
}

#[test]
fn counts_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for code in [build_steane().unwrap(), build_toric(3).unwrap(), build_bacon_shor(3).unwrap()] {
        let n = code.num_qubits();
        let g = gens(code.gauge());
        let s = gens(code.stabilizer());
        for _ in 0..40 {
            let size = rng.gen_range(0..=6.min(n));
            let mut qs: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.gen_range(i..n);
                qs.swap(i, j);
            }
            let mut region: Vec<usize> = qs[..size].to_vec();
            region.sort_unstable();
            let r = Region::new(n, region.iter().copied()).unwrap();
            assert_eq!(cleaning::count_bare(&code, &r).unwrap(), brute_count(n, &region, &g, &s), "{region:?}");
            assert_eq!(cleaning::count_dressed(&code, &r).unwrap(), brute_count(n, &region, &s, &g), "{region:?}");
        }
    }
}

#[test]
fn counts_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let code = build_bacon_shor(4).unwrap();
    let n = code.num_qubits();
    for _ in 0..200 {
        let small = Region::new(n, (0..n).filter(|_| rng.gen_bool(0.3))).unwrap();
        let big = small.union(&Region::new(n, (0..n).filter(|_| rng.gen_bool(0.3))).unwrap());
        assert!(cleaning::count_bare(&code, &small).unwrap() <= cleaning::count_bare(&code, &big).unwrap());
        assert!(cleaning::count_dressed(&code, &small).unwrap() <= cleaning::count_dressed(&code, &big).unwrap());
    }
}

#[test]
fn lemma4_on_toric_and_bacon_shor() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for code in [build_toric(4).unwrap(), build_bacon_shor(5).unwrap()] {
        let n = code.num_qubits();
        for _ in 0..500 {
            let r = Region::new(n, (0..n).filter(|_| rng.gen_bool(0.5))).unwrap();
            assert_eq!(
                cleaning::count_dressed(&code, &r).unwrap() + cleaning::count_bare(&code, &r.complement()).unwrap(),
                2 * code.k()
            );
        }
    }
}

#[test]
fn cleaning_removes_support_and_keeps_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let code = build_toric(4).unwrap();
    let n = code.num_qubits();
    let mut cleaned_any = 0;
    for _ in 0..200 {
        let r = Region::new(n, (0..n).filter(|_| rng.gen_bool(0.2))).unwrap();
        let correctable = cleaning::is_bare_cleanable(&code, &r).unwrap();
        for p in code.dressed_logicals().rows() {
            match cleaning::clean_operator(&code, p, &r, LogicalKind::Dressed).unwrap() {
                Some(c) => {
                    cleaned_any += 1;
                    assert!(c.support().iter().all(|&q| !r.contains(q)));
                    let ratio = c.multiply(&p.inverse()).unwrap();
                    assert!(code.in_gauge_group(&ratio));
                }
                None => assert!(!correctable, "correctable region must clean every logical"),
            }
        }
    }
    assert!(cleaned_any > 0);
    let not_logical = PauliOperator::single(n, 0, Letter::X);
    assert!(cleaning::clean_operator(&code, &not_logical, &Region::empty(n), LogicalKind::Dressed).is_err());
}

#[test]
fn distance_is_permutation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for code in [build_steane().unwrap(), build_toric(3).unwrap(), build_bacon_shor(3).unwrap()] {
        let n = code.num_qubits();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let d = search::distance(&code, 6).unwrap().exact();
        let dp = search::distance(&code.permuted(&perm).unwrap(), 6).unwrap().exact();
        assert_eq!(d, dp, "{}", code.name());
    }
}

#[test]
fn random_gauge_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let mut derived = 0;
    let mut attempts = 0;
    while derived < 100 {
        attempts += 1;
        assert!(attempts < 1000);
        let n = rng.gen_range(2..=6);
        let count = rng.gen_range(1..=n + 2);
        let rows: Vec<PauliOperator> = (0..count)
            .map(|_| {
                let mut p = PauliOperator::identity(n);
                for q in 0..n {
                    p.set_letter(q, [Letter::I, Letter::X, Letter::Y, Letter::Z][rng.gen_range(0..4)]);
                }
                p
            })
            .collect();
        let g_syms: Vec<Sym> = rows.iter().map(sym).collect();
        let basis = SymplecticBasis::new(n, rows).unwrap();
        let code = match SubsystemCode::derive("random", basis, None) {
            Ok(c) => c,
            Err(Error::MinusIdentityInStabilizer) => continue,
            Err(e) => panic!("{e}"),
        };
        derived += 1;

        // center of the gauge group by enumeration of span(G)
        let g_rank = rank(&g_syms);
        let mut center = 0usize;
        for combo in 0..(1u64 << g_syms.len()) {
            let mut v = vec![false; 2 * n];
            for (i, g) in g_syms.iter().enumerate() {
                if combo >> i & 1 == 1 {
                    for (a, b) in v.iter_mut().zip(g) {
                        *a ^= b;
                    }
                }
            }
            if g_syms.iter().all(|g| commute(g, &v)) {
                center += 1;
            }
        }
        let s_rank = (center >> (g_syms.len() - g_rank)).trailing_zeros() as usize;
        assert_eq!(code.gauge_rank(), g_rank);
        assert_eq!(code.stabilizer_rank(), s_rank);
        assert_eq!(code.gauge_rank(), code.stabilizer_rank() + 2 * code.gauge_qubits());
        assert_eq!(n, code.stabilizer_rank() + code.gauge_qubits() + code.k());
        for s in code.stabilizer().rows() {
            assert!(code.in_gauge_group(s));
            assert!(g_syms.iter().all(|g| commute(g, &sym(s))));
        }
        for _ in 0..10 {
            let r = Region::new(n, (0..n).filter(|_| rng.gen_bool(0.5))).unwrap();
            assert_eq!(
                cleaning::count_dressed(&code, &r).unwrap() + cleaning::count_bare(&code, &r.complement()).unwrap(),
                2 * code.k()
            );
        }
    }
}

#[test]
fn bacon_shor_top_row() {
    let code = build_bacon_shor(3).unwrap();
    let top = Region::new(9, [0, 1, 2]).unwrap();
    let g = gens(code.gauge());
    let s = gens(code.stabilizer());
    // X on the row commutes with S and is not in G
    let row_x: Sym = (0..18).map(|i| i < 3).collect();
    assert!(s.iter().all(|v| commute(v, &row_x)));
    assert!(!in_span(&g, &row_x));
    assert!(cleaning::count_dressed(&code, &top).unwrap() >= 1);
    assert_eq!(cleaning::count_dressed(&code, &top).unwrap(), brute_count(9, &[0, 1, 2], &s, &g));
    assert_eq!(cleaning::count_bare(&code, &top).unwrap(), brute_count(9, &[0, 1, 2], &g, &s));
}
