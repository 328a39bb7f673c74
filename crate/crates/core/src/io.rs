//! Line-oriented code interchange format.
//!
//! ```text
//! file     := header line* EOF
//! header   := "ftgate-code 1"
//! line     := "name" WORD
//!           | "n" INT
//!           | "geometry" "dim=" INT "size=" INT "periodic=" FLAGS "xi=" INT
//!           | "gauge" NEWLINE pauli* "end"
//!           | "coords" NEWLINE (INT+ NEWLINE)* "end"
//! pauli    := ("+" | "-") [IXYZ]{n}
//! FLAGS    := ("0" | "1") ("," ("0" | "1"))*
//! ```
//!
//! Blank lines and `#` comments are ignored. A `geometry` line requires a
//! `coords` block with exactly `n` rows of `dim` integers.

use std::fmt::Write as _;
use std::path::Path;

use crate::code::SubsystemCode;
use crate::error::{parse_err, Error, Result};
use crate::lattice::LatticeGeometry;
use crate::pauli::{PauliOperator, SymplecticBasis};

pub const HEADER: &str = "ftgate-code 1";

pub fn write_code(code: &SubsystemCode) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "name {}", code.name());
    let _ = writeln!(out, "n {}", code.num_qubits());
    if let Some(geo) = code.geometry() {
        let flags: Vec<&str> = geo.periodic().iter().map(|&p| if p { "1" } else { "0" }).collect();
        let _ = writeln!(
            out,
            "geometry dim={} size={} periodic={} xi={}",
            geo.dim(),
            geo.size(),
            flags.join(","),
            geo.xi()
        );
    }
    out.push_str("gauge\n");
    for g in code.gauge().rows() {
        let _ = writeln!(out, "{g}");
    }
    out.push_str("end\n");
    if let Some(geo) = code.geometry() {
        out.push_str("coords\n");
        for c in geo.all_coords() {
            let cells: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out.push_str("end\n");
    }
    out
}

pub fn save_code(code: &SubsystemCode, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_code(code))?;
    Ok(())
}

pub fn load_code(path: impl AsRef<Path>) -> Result<SubsystemCode> {
    parse_code(&std::fs::read_to_string(path)?)
}

struct GeometryHeader {
    dim: usize,
    size: usize,
    periodic: Vec<bool>,
    xi: usize,
    line: usize,
}

pub fn parse_code(text: &str) -> Result<SubsystemCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((no, _)) => return Err(parse_err(Some(no), format!("expected header `{HEADER}`"))),
        None => return Err(parse_err(None, "empty file")),
    }

    let mut name = None;
    let mut n: Option<usize> = None;
    let mut geometry: Option<GeometryHeader> = None;
    let mut gauge: Option<Vec<PauliOperator>> = None;
    let mut coords: Option<Vec<Vec<usize>>> = None;

    while let Some((no, line)) = lines.next() {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" => {
                if rest.is_empty() {
                    return Err(parse_err(Some(no), "missing name"));
                }
                name = Some(rest.to_string());
            }
            "n" => n = Some(parse_int(no, rest)?),
            "geometry" => geometry = Some(parse_geometry(no, rest)?),
            "gauge" => {
                let nq = n.ok_or_else(|| parse_err(Some(no), "`n` must precede `gauge`"))?;
                let mut rows = Vec::new();
                loop {
                    let (no, l) = lines.next().ok_or_else(|| parse_err(None, "unterminated gauge block"))?;
                    if l == "end" {
                        break;
                    }
                    if !l.starts_with(['+', '-']) {
                        return Err(parse_err(Some(no), "gauge generator needs an explicit + or - sign"));
                    }
                    let p: PauliOperator = l.parse().map_err(|e: Error| parse_err(Some(no), e.to_string()))?;
                    if p.num_qubits() != nq {
                        return Err(parse_err(
                            Some(no),
                            format!("generator has {} qubits, expected {nq}", p.num_qubits()),
                        ));
                    }
                    rows.push(p);
                }
                gauge = Some(rows);
            }
            "coords" => {
                let mut rows = Vec::new();
                loop {
                    let (no, l) = lines.next().ok_or_else(|| parse_err(None, "unterminated coords block"))?;
                    if l == "end" {
                        break;
                    }
                    let row = l.split_whitespace().map(|t| parse_int(no, t)).collect::<Result<Vec<_>>>()?;
                    rows.push(row);
                }
                coords = Some(rows);
            }
            other => return Err(parse_err(Some(no), format!("unknown directive `{other}`"))),
        }
    }

    let n = n.ok_or_else(|| parse_err(None, "missing `n`"))?;
    let gauge = gauge.ok_or_else(|| parse_err(None, "missing gauge block"))?;
    let geometry = match (geometry, coords) {
        (None, None) => None,
        (Some(g), Some(c)) => {
            if c.len() != n {
                return Err(parse_err(Some(g.line), format!("coords block has {} rows, expected {n}", c.len())));
            }
            Some(LatticeGeometry::new(g.dim, g.size, c, g.periodic, g.xi).map_err(|e| parse_err(Some(g.line), e.to_string()))?)
        }
        (Some(g), None) => return Err(parse_err(Some(g.line), "geometry without coords block")),
        (None, Some(_)) => return Err(parse_err(None, "coords block without geometry line")),
    };
    let basis = if gauge.is_empty() { SymplecticBasis::empty(n) } else { SymplecticBasis::new(n, gauge)? };
    SubsystemCode::derive(name.unwrap_or_else(|| "unnamed".into()), basis, geometry)
}

fn parse_int(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(Some(line), format!("expected non-negative integer, got `{s}`")))
}

fn parse_geometry(line: usize, rest: &str) -> Result<GeometryHeader> {
    let (mut dim, mut size, mut periodic, mut xi) = (None, None, None, None);
    for field in rest.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| parse_err(Some(line), format!("expected key=value, got `{field}`")))?;
        match k {
            "dim" => dim = Some(parse_int(line, v)?),
            "size" => size = Some(parse_int(line, v)?),
            "xi" => xi = Some(parse_int(line, v)?),
            "periodic" => {
                let flags = v
                    .split(',')
                    .map(|f| match f {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        _ => Err(parse_err(Some(line), format!("periodic flag must be 0 or 1, got `{f}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                periodic = Some(flags);
            }
            _ => return Err(parse_err(Some(line), format!("unknown geometry key `{k}`"))),
        }
    }
    let missing = |what: &str| parse_err(Some(line), format!("geometry line lacks `{what}`"));
    Ok(GeometryHeader {
        dim: dim.ok_or_else(|| missing("dim"))?,
        size: size.ok_or_else(|| missing("size"))?,
        periodic: periodic.ok_or_else(|| missing("periodic"))?,
        xi: xi.ok_or_else(|| missing("xi"))?,
        line,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_bacon_shor, build_toric};

    #[test]
    fn toric_round_trip() {
        let code = build_toric(3).unwrap();
        let text = write_code(&code);
        let back = parse_code(&text).unwrap();
        assert_eq!(back.name(), code.name());
        assert_eq!(back.gauge(), code.gauge());
        assert_eq!(back.stabilizer(), code.stabilizer());
        assert_eq!(back.bare_logicals(), code.bare_logicals());
        assert_eq!(back.geometry(), code.geometry());
        assert_eq!(write_code(&back), text);
    }

    #[test]
    fn minus_identity_rejected() {
        let text = "ftgate-code 1\nn 2\ngauge\n+ZZ\n-ZZ\nend\n";
        assert!(matches!(parse_code(text), Err(Error::MinusIdentityInStabilizer)));
    }

    #[test]
    fn geometry_optional() {
        let code = build_bacon_shor(3).unwrap();
        let text: String = write_code(&code)
            .lines()
            .take_while(|l| *l != "coords")
            .filter(|l| !l.starts_with("geometry"))
            .map(|l| format!("{l}\n"))
            .collect();
        let back = parse_code(&text).unwrap();
        assert!(back.geometry().is_none());
        assert!(matches!(back.require_geometry(), Err(Error::GeometryMissing)));
        assert_eq!(back.k(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("nope\n", Some(1)),
            ("ftgate-code 1\nn x\n", Some(2)),
            ("ftgate-code 1\nn 2\n# c\ngauge\n+ZQ\nend\n", Some(5)),
            ("ftgate-code 1\nn 2\ngauge\nZZ\nend\n", Some(4)),
            ("ftgate-code 1\nn 2\ngauge\n+ZZZ\nend\n", Some(4)),
            ("ftgate-code 1\nn 2\nbogus 3\n", Some(3)),
            ("ftgate-code 1\nn 1\ngeometry dim=1 size=2 periodic=2 xi=1\n", Some(3)),
            ("ftgate-code 1\nn 2\ngauge\n+ZZ\n", None),
        ];
        for (text, line) in cases {
            match parse_code(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
