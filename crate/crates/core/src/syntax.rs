//! Region and gate mini-languages used on the command line.
//!
//! ```text
//! region := item ("," item)*
//! item   := INT | "all" | "none" | "box" range ("x" range)*
//! range  := INT ".." INT                 (half-open, per lattice axis)
//!
//! gates  := "" | gate (";" gate)*
//! gate   := name "@" targets
//! name   := "Z" | "S" | "Sdg" | "T" | "Tdg" | "CZ" | "CCZ" | "rot(" INT ")" | "rotdg(" INT ")"
//! targets:= "all" | INT ("," INT)*
//! ```
//!
//! `rot(k)` is `diag(1, exp(2 pi i / 2^k))`, so `Z = rot(1)`, `S = rot(2)` and
//! `T = rot(3)`. Single-qubit gates accept several targets (one copy each);
//! `CZ` takes exactly two distinct targets and `CCZ` three.

use crate::error::{parse_err, Error, Result};
use crate::hierarchy::{PhasePolynomial, MAX_KAPPA};
use crate::lattice::LatticeGeometry;
use crate::region::Region;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegionItem {
    Qubit(usize),
    /// Half-open coordinate ranges, one per lattice axis.
    Box(Vec<(usize, usize)>),
    All,
    None,
}

fn bad(message: impl Into<String>) -> Error {
    parse_err(None, message)
}

fn parse_int(tok: &str, what: &str) -> Result<usize> {
    let t = tok.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(format!("expected {what}, found `{t}`")));
    }
    t.parse().map_err(|_| bad(format!("{what} `{t}` out of range")))
}

fn parse_range(tok: &str) -> Result<(usize, usize)> {
    let Some((a, b)) = tok.split_once("..") else {
        return Err(bad(format!("expected a range `a..b`, found `{}`", tok.trim())));
    };
    let lo = parse_int(a, "range start")?;
    let hi = parse_int(b, "range end")?;
    if lo >= hi {
        return Err(bad(format!("empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

pub fn parse_region_items(s: &str) -> Result<Vec<RegionItem>> {
    if s.trim().is_empty() {
        return Err(bad("empty region (use `none` for the empty set)"));
    }
    s.split(',')
        .map(|item| {
            let item = item.trim();
            match item {
                "" => Err(bad("empty item in region list")),
                "all" => Ok(RegionItem::All),
                "none" => Ok(RegionItem::None),
                _ => {
                    if let Some(rest) = item.strip_prefix("box") {
                        if !rest.starts_with(char::is_whitespace) {
                            return Err(bad(format!("expected whitespace after `box` in `{item}`")));
                        }
                        let ranges = rest.split(" x ").map(parse_range).collect::<Result<Vec<_>>>()?;
                        Ok(RegionItem::Box(ranges))
                    } else {
                        parse_int(item, "qubit index").map(RegionItem::Qubit)
                    }
                }
            }
        })
        .collect()
}

/// Region on `n` qubits; boxes need a geometry.
pub fn parse_region(s: &str, n: usize, geometry: Option<&LatticeGeometry>) -> Result<Region> {
    let mut out = Region::empty(n);
    for item in parse_region_items(s)? {
        let part = match item {
            RegionItem::Qubit(q) => {
                if q >= n {
                    return Err(bad(format!("qubit {q} out of range for {n} qubits")));
                }
                Region::new(n, [q])?
            }
            RegionItem::All => Region::full(n),
            RegionItem::None => Region::empty(n),
            RegionItem::Box(ranges) => {
                let geo = geometry.ok_or(Error::GeometryMissing)?;
                if ranges.len() != geo.dim() {
                    return Err(bad(format!("box has {} ranges, lattice has {} axes", ranges.len(), geo.dim())));
                }
                let lo: Vec<usize> = ranges.iter().map(|r| r.0).collect();
                let hi: Vec<usize> = ranges.iter().map(|r| r.1).collect();
                geo.box_region(&lo, &hi)?
            }
        };
        out = out.union(&part);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    /// `diag(1, exp(+-2 pi i / 2^k))`.
    Rot { k: u32, dagger: bool },
    Cz,
    Ccz,
}

impl GateKind {
    fn arity(self) -> Option<usize> {
        match self {
            GateKind::Rot { .. } => None,
            GateKind::Cz => Some(2),
            GateKind::Ccz => Some(3),
        }
    }

    fn kappa(self) -> u32 {
        match self {
            GateKind::Rot { k, .. } => k,
            GateKind::Cz | GateKind::Ccz => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Targets {
    All,
    Qubits(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateItem {
    pub kind: GateKind,
    pub targets: Targets,
}

fn parse_gate_name(name: &str) -> Result<GateKind> {
    let rot = |k, dagger| Ok(GateKind::Rot { k, dagger });
    match name {
        "Z" => rot(1, false),
        "S" => rot(2, false),
        "Sdg" => rot(2, true),
        "T" => rot(3, false),
        "Tdg" => rot(3, true),
        "CZ" => Ok(GateKind::Cz),
        "CCZ" => Ok(GateKind::Ccz),
        _ => {
            let (inner, dagger) = if let Some(r) = name.strip_prefix("rotdg(") {
                (r, true)
            } else if let Some(r) = name.strip_prefix("rot(") {
                (r, false)
            } else {
                return Err(bad(format!("unknown gate `{name}`")));
            };
            let Some(k) = inner.strip_suffix(')') else {
                return Err(bad(format!("missing `)` in `{name}`")));
            };
            let k = parse_int(k, "rotation order")?;
            if k == 0 || k > MAX_KAPPA as usize {
                return Err(bad(format!("rotation order must be in 1..={MAX_KAPPA}, got {k}")));
            }
            rot(k as u32, dagger)
        }
    }
}

pub fn parse_gates(s: &str) -> Result<Vec<GateItem>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|item| {
            let item = item.trim();
            let Some((name, targets)) = item.split_once('@') else {
                return Err(bad(format!("expected `gate@targets`, found `{item}`")));
            };
            let kind = parse_gate_name(name.trim())?;
            let targets = match targets.trim() {
                "all" => {
                    if kind.arity().is_some() {
                        return Err(bad(format!("`{}` cannot target `all`", name.trim())));
                    }
                    Targets::All
                }
                t => {
                    let qs = t.split(',').map(|q| parse_int(q, "target qubit")).collect::<Result<Vec<_>>>()?;
                    if let Some(a) = kind.arity() {
                        if qs.len() != a {
                            return Err(bad(format!("`{}` takes {a} targets, got {}", name.trim(), qs.len())));
                        }
                        let mut sorted = qs.clone();
                        sorted.sort_unstable();
                        sorted.dedup();
                        if sorted.len() != qs.len() {
                            return Err(bad(format!("repeated target in `{item}`")));
                        }
                    }
                    Targets::Qubits(qs)
                }
            };
            Ok(GateItem { kind, targets })
        })
        .collect()
}

/// Smallest modulus exponent that represents every gate exactly.
pub fn gates_kappa(items: &[GateItem]) -> u32 {
    items.iter().map(|g| g.kind.kappa()).max().unwrap_or(1)
}

/// Qubits needed: one more than the largest explicit target (at least 1).
pub fn gates_min_qubits(items: &[GateItem]) -> usize {
    items
        .iter()
        .filter_map(|g| match &g.targets {
            Targets::Qubits(qs) => qs.iter().max().map(|m| m + 1),
            Targets::All => None,
        })
        .max()
        .unwrap_or(1)
}

fn resolve(targets: &Targets, n: usize) -> Result<Vec<usize>> {
    match targets {
        Targets::All => Ok((0..n).collect()),
        Targets::Qubits(qs) => {
            if let Some(&q) = qs.iter().find(|&&q| q >= n) {
                return Err(bad(format!("target {q} out of range for {n} qubits")));
            }
            Ok(qs.clone())
        }
    }
}

/// Phase polynomial of the whole product on `n` qubits.
pub fn gates_polynomial(items: &[GateItem], n: usize) -> Result<PhasePolynomial> {
    let kappa = gates_kappa(items);
    let modulus = 1u64 << kappa;
    let mut f = PhasePolynomial::zero(n, kappa)?;
    for g in items {
        let qs = resolve(&g.targets, n)?;
        let terms: Vec<(Vec<usize>, u64)> = match g.kind {
            GateKind::Rot { k, dagger } => {
                let c = 1u64 << (kappa - k);
                let c = if dagger { modulus - c } else { c };
                qs.into_iter().map(|q| (vec![q], c)).collect()
            }
            GateKind::Cz | GateKind::Ccz => vec![(qs, modulus / 2)],
        };
        f = f.add(&PhasePolynomial::from_terms(n, kappa, terms)?)?;
    }
    Ok(f)
}

/// Per-qubit single-variable polynomials of a transversal product of
/// single-qubit rotations; multi-qubit gates are rejected.
pub fn gates_per_qubit(items: &[GateItem], n: usize) -> Result<Vec<PhasePolynomial>> {
    if items.iter().any(|g| g.kind.arity().is_some()) {
        return Err(Error::InvalidParameter("transversal gate list may only contain single-qubit rotations".into()));
    }
    let f = gates_polynomial(items, n)?;
    (0..n)
        .map(|q| {
            let c = f.terms().get(&(1u64 << q)).copied().unwrap_or(0);
            PhasePolynomial::from_terms(1, f.kappa(), [(vec![0], c)])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{diagonal_level, CliffordLevel};

    fn parse_fails(s: &str) -> String {
        match parse_region_items(s) {
            Err(Error::Parse { message, .. }) => message,
            other => panic!("`{s}` should fail, got {other:?}"),
        }
    }

    fn gate_fails(s: &str) -> String {
        match parse_gates(s) {
            Err(Error::Parse { message, .. }) => message,
            other => panic!("`{s}` should fail, got {other:?}"),
        }
    }

    #[test]
    fn region_items() {
        assert_eq!(
            parse_region_items("3, all,none , box 0..3 x 1..2").unwrap(),
            vec![
                RegionItem::Qubit(3),
                RegionItem::All,
                RegionItem::None,
                RegionItem::Box(vec![(0, 3), (1, 2)])
            ]
        );
    }

    #[test]
    fn region_errors() {
        assert!(parse_fails("").contains("empty region"));
        assert!(parse_fails("1,,2").contains("empty item"));
        assert!(parse_fails("-1").contains("qubit index"));
        assert!(parse_fails("x").contains("qubit index"));
        assert!(parse_fails("99999999999999999999999").contains("out of range"));
        assert!(parse_fails("box").contains("whitespace"));
        assert!(parse_fails("box0..1").contains("whitespace"));
        assert!(parse_fails("box 0-1").contains("range"));
        assert!(parse_fails("box 2..2").contains("empty range"));
        assert!(parse_fails("box 0..a").contains("range end"));
        assert!(parse_fails("box ..3").contains("range start"));
    }

    #[test]
    fn region_resolution() {
        let code = crate::code::build_toric(3).unwrap();
        let geo = code.geometry();
        let r = parse_region("box 0..1 x 0..1, 17", 18, geo).unwrap();
        assert_eq!(r.qubits(), vec![0, 1, 17]);
        assert_eq!(parse_region("none", 18, geo).unwrap().len(), 0);
        assert_eq!(parse_region("all,3", 18, geo).unwrap().len(), 18);
        assert!(parse_region("18", 18, geo).is_err());
        assert!(parse_region("box 0..1", 18, geo).is_err());
        assert!(matches!(parse_region("box 0..1 x 0..1", 18, None), Err(Error::GeometryMissing)));
    }

    #[test]
    fn gate_items() {
        let g = parse_gates("T@3; CZ@1,2 ;CCZ@0,1,2;rot(5)@all;Sdg@0,1").unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0].kind, GateKind::Rot { k: 3, dagger: false });
        assert_eq!(g[3].targets, Targets::All);
        assert_eq!(g[4].kind, GateKind::Rot { k: 2, dagger: true });
        assert!(parse_gates("  ").unwrap().is_empty());
        assert_eq!(gates_kappa(&g), 5);
        assert_eq!(gates_min_qubits(&g), 4);
    }

    #[test]
    fn gate_errors() {
        assert!(gate_fails("T").contains("gate@targets"));
        assert!(gate_fails("H@0").contains("unknown gate"));
        assert!(gate_fails("rot(3@0").contains("missing `)`"));
        assert!(gate_fails("rot(0)@0").contains("rotation order"));
        assert!(gate_fails("rot(63)@0").contains("rotation order"));
        assert!(gate_fails("rot(x)@0").contains("rotation order"));
        assert!(gate_fails("T@").contains("target qubit"));
        assert!(gate_fails("T@1,,2").contains("target qubit"));
        assert!(gate_fails("CZ@1").contains("takes 2 targets"));
        assert!(gate_fails("CCZ@0,1").contains("takes 3 targets"));
        assert!(gate_fails("CZ@1,1").contains("repeated"));
        assert!(gate_fails("CZ@all").contains("cannot target"));
        assert!(gate_fails("T@0;").contains("gate@targets"));
    }

    #[test]
    fn polynomials_and_levels() {
        let level = |s: &str| {
            let g = parse_gates(s).unwrap();
            diagonal_level(&gates_polynomial(&g, gates_min_qubits(&g)).unwrap(), 10)
        };
        assert_eq!(level(""), CliffordLevel::Level(0));
        assert_eq!(level("Z@0"), CliffordLevel::Level(1));
        assert_eq!(level("S@0"), CliffordLevel::Level(2));
        assert_eq!(level("T@0"), CliffordLevel::Level(3));
        assert_eq!(level("CZ@0,1"), CliffordLevel::Level(2));
        assert_eq!(level("CCZ@0,1,2"), CliffordLevel::Level(3));
        assert_eq!(level("T@0;Tdg@0"), CliffordLevel::Level(0));
        for k in 1..=5 {
            assert_eq!(level(&format!("rot({k})@0")), CliffordLevel::Level(k));
        }
        let g = parse_gates("rot(2)@all").unwrap();
        assert!(gates_polynomial(&g, 3).is_ok());
        assert!(gates_polynomial(&parse_gates("T@5").unwrap(), 3).is_err());
    }

    #[test]
    fn per_qubit_split() {
        let g = parse_gates("S@all;T@1").unwrap();
        let per = gates_per_qubit(&g, 3).unwrap();
        assert_eq!(per.iter().map(|p| p.evaluate(1)).collect::<Vec<_>>(), vec![2, 3, 2]);
        assert!(gates_per_qubit(&parse_gates("CZ@0,1").unwrap(), 3).is_err());
    }
}
