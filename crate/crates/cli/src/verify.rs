//! Named invariant suites for `ftgate verify`.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ftgate::cleaning::{self, UnionMode};
use ftgate::{dense, geometry, Region, SubsystemCode};

use crate::{load_source, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma3,
    Lemma4,
    Union,
    #[value(name = "appendixA", alias = "appendix-a")]
    AppendixA,
    Dense,
    Spread,
    All,
}

const ALL: [Suite; 6] = [
    Suite::Lemma3,
    Suite::Lemma4,
    Suite::Union,
    Suite::AppendixA,
    Suite::Dense,
    Suite::Spread,
];

struct SuiteResult {
    report: Value,
    lines: Vec<String>,
    violation: bool,
}

fn random_region(n: usize, rng: &mut impl Rng) -> Region {
    Region::new(n, (0..n).filter(|_| rng.gen_bool(0.5))).expect("indices in range")
}

/// `lhs(R) + rhs(R^c) = 2k` on random regions of each code.
fn identity_suite(
    name: &str,
    codes: &[&str],
    samples: usize,
    rng: &mut ChaCha8Rng,
    count: impl Fn(&SubsystemCode, &Region) -> ftgate::Result<(usize, usize)>,
) -> anyhow::Result<SuiteResult> {
    let mut per_code = Vec::new();
    let mut lines = Vec::new();
    let mut violation = false;
    for spec in codes {
        let code = load_source(spec)?;
        let mut bad = 0;
        for _ in 0..samples {
            let r = random_region(code.num_qubits(), rng);
            let (a, b) = count(&code, &r)?;
            if a + b != 2 * code.k() {
                bad += 1;
            }
        }
        violation |= bad > 0;
        lines.push(format!("{name} {}: {samples} regions, {bad} violations", code.name()));
        per_code.push(json!({ "code": code.name(), "regions": samples, "violations": bad }));
    }
    Ok(SuiteResult {
        report: json!(per_code),
        lines,
        violation,
    })
}

fn run_one(suite: Suite, samples: Option<usize>, rng: &mut ChaCha8Rng) -> anyhow::Result<SuiteResult> {
    match suite {
        Suite::Lemma3 => identity_suite(
            "lemma3",
            &["toric:3", "toric:4", "toric:5", "steane", "reed-muller:4"],
            samples.unwrap_or(500),
            rng,
            |c, r| Ok((cleaning::count_logical(c, r)?, cleaning::count_logical(c, &r.complement())?)),
        ),
        Suite::Lemma4 => identity_suite(
            "lemma4",
            &["bacon-shor:3", "bacon-shor:4", "toric:3"],
            samples.unwrap_or(500),
            rng,
            |c, r| Ok((cleaning::count_dressed(c, r)?, cleaning::count_bare(c, &r.complement())?)),
        ),
        Suite::Union => {
            let samples = samples.unwrap_or(200);
            let toric = load_source("toric:4")?;
            let dressed = cleaning::verify_union_lemma(&toric, samples, UnionMode::DressedCleanable, rng)?;
            let bs = load_source("bacon-shor:3")?;
            let bare = cleaning::verify_union_lemma(&bs, samples, UnionMode::BareCleanable, rng)?;
            let lines = vec![
                format!(
                    "union toric-4 dressed-cleanable: {} pairs, {} counterexamples",
                    dressed.pairs_tested, dressed.counterexample_count
                ),
                format!(
                    "union bacon-shor-3 bare-cleanable: {} pairs, {} counterexamples (permitted)",
                    bare.pairs_tested, bare.counterexample_count
                ),
            ];
            Ok(SuiteResult {
                violation: !dressed.holds(),
                report: json!({ "toric_dressed": dressed, "bacon_shor_bare": bare }),
                lines,
            })
        }
        Suite::AppendixA => {
            let r = dense::hierarchy_definition_equivalence(samples.unwrap_or(200), rng)?;
            Ok(SuiteResult {
                lines: vec![format!(
                    "appendixA: {} gates, {} disagreements, levels {:?}",
                    r.samples, r.disagreements, r.level_histogram
                )],
                violation: !r.holds(),
                report: serde_json::to_value(&r)?,
            })
        }
        Suite::Dense => {
            let code = load_source("bacon-shor:3")?;
            let candidates = dense::standard_candidates(&code)?;
            let r = dense::dense_verify(&code, &candidates, samples.unwrap_or(50), rng)?;
            Ok(SuiteResult {
                lines: vec![format!(
                    "dense {}: {} candidates, closure {}/{} ok, expectation {}/{} ok",
                    code.name(),
                    r.candidates.len(),
                    r.closure_pairs - r.closure_failures,
                    r.closure_pairs,
                    r.expectation_pairs - r.expectation_failures - r.expectation_premise_failures,
                    r.expectation_pairs
                )],
                violation: !r.all_consistent(),
                report: serde_json::to_value(&r)?,
            })
        }
        Suite::Spread => {
            let code = load_source("toric:8")?;
            let geo = code.require_geometry()?;
            let r = geometry::spread_soundness(geo, samples.unwrap_or(100), 3, rng)?;
            Ok(SuiteResult {
                lines: vec![format!("spread toric-8: {} circuits, {} violations", r.circuits, r.violations)],
                violation: r.violations > 0,
                report: serde_json::to_value(&r)?,
            })
        }
        Suite::All => unreachable!("expanded by the caller"),
    }
}

pub fn run(suite: Suite, samples: Option<usize>, seed: u64) -> anyhow::Result<Outcome> {
    let suites: Vec<Suite> = if suite == Suite::All { ALL.to_vec() } else { vec![suite] };
    let mut report = serde_json::Map::new();
    let mut lines = Vec::new();
    let mut violation = false;
    for s in suites {
        // Each suite gets its own stream so `all` reproduces single runs.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64);
        let r = run_one(s, samples, &mut rng)?;
        let name = s.to_possible_value().expect("named").get_name().to_string();
        violation |= r.violation;
        lines.extend(r.lines);
        report.insert(name, json!({ "violation": r.violation, "details": r.report }));
    }
    lines.push(if violation { "FAILED".into() } else { "ok".into() });
    Ok(Outcome {
        result: Value::Object(report),
        summary: lines.join("\n"),
        seed: Some(seed),
        violation,
    })
}
