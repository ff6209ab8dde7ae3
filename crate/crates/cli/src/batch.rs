use std::collections::BTreeMap;
use std::fmt::Write;

use qhmod_core::moduli::{canonical_fingerprint, decide_equivalence_with, ModuliError};
use qhmod_core::parser::{corpus_lines, format_poly};
use qhmod_core::quasihom::CurveType;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commands::classify;
use crate::{CliError, Outcome, OutputFormat, RunConfig, EXIT_AMBIGUOUS, EXIT_INPUT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSummary {
    pub label: String,
    pub flag_m: u8,
    pub flag_k: u8,
}

/// One equivalence class; members are canonical polynomial texts, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub fingerprint: String,
    pub representative: String,
    pub members: Vec<String>,
    pub stratum: StratumSummary,
}

struct Entry {
    text: String,
    curve: CurveType,
}

type Parsed = Result<(String, Entry), CliError>;

struct Class {
    rep: Entry,
    members: Vec<String>,
}

fn entry(src: &str) -> Parsed {
    let (loaded, curve) = classify(src)?;
    let fingerprint = canonical_fingerprint(&curve);
    Ok((
        fingerprint,
        Entry {
            text: format_poly(&loaded.poly),
            curve,
        },
    ))
}

/// Splits one fingerprint group by comparing each member with the class
/// representatives found so far.
fn split(mut entries: Vec<Entry>, tol: f64, warnings: &mut Vec<String>) -> Vec<Class> {
    entries.sort_by(|a, b| a.text.cmp(&b.text));
    let mut classes: Vec<Class> = Vec::new();
    for e in entries {
        let mut home = None;
        for (k, c) in classes.iter().enumerate() {
            match decide_equivalence_with(&c.rep.curve, &e.curve, tol) {
                Ok(v) if v.equivalent => {
                    home = Some(k);
                    break;
                }
                Ok(_) => {}
                Err(err @ ModuliError::ToleranceAmbiguity { .. }) => {
                    warnings.push(format!("{} vs {}: {err}", c.rep.text, e.text));
                }
                Err(err) => warnings.push(format!("{} vs {}: {err}", c.rep.text, e.text)),
            }
        }
        match home {
            Some(k) => classes[k].members.push(e.text),
            None => classes.push(Class {
                members: vec![e.text.clone()],
                rep: e,
            }),
        }
    }
    classes
}

pub fn classify_batch(text: &str, cfg: &RunConfig) -> Outcome {
    if cfg.format == OutputFormat::Dot {
        return CliError::input("--format dot is only available for resolve").into();
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => return CliError::internal(format!("cannot start workers: {e}")).into(),
    };
    let lines = corpus_lines(text);
    let results: Vec<(usize, Parsed)> = pool.install(|| lines.par_iter().map(|&(no, src)| (no, entry(src))).collect());

    let mut stderr = String::new();
    let mut failed = false;
    let mut groups: BTreeMap<String, Vec<Entry>> = BTreeMap::new();
    for (no, r) in results {
        match r {
            Ok((fp, e)) => groups.entry(fp).or_default().push(e),
            Err(e) => {
                failed = true;
                let _ = writeln!(stderr, "line {no}: {}", e.message);
            }
        }
    }

    let split_groups: Vec<(String, Vec<Class>, Vec<String>)> = pool.install(|| {
        groups
            .into_par_iter()
            .map(|(fp, entries)| {
                let mut warnings = Vec::new();
                let classes = split(entries, cfg.tolerance, &mut warnings);
                (fp, classes, warnings)
            })
            .collect()
    });

    let mut stdout = String::new();
    let mut ambiguous = false;
    for (fp, classes, warnings) in split_groups {
        for w in warnings {
            ambiguous = true;
            let _ = writeln!(stderr, "warning: {w}");
        }
        for c in classes {
            let mut members = c.members;
            members.sort();
            let record = ClassRecord {
                fingerprint: fp.clone(),
                representative: c.rep.text,
                members,
                stratum: StratumSummary {
                    label: c.rep.curve.stratum.to_string(),
                    flag_m: c.rep.curve.flag_m,
                    flag_k: c.rep.curve.flag_k,
                },
            };
            stdout.push_str(&serde_json::to_string(&record).expect("record serializes"));
            stdout.push('\n');
        }
    }
    let code = if failed {
        EXIT_INPUT
    } else if ambiguous {
        EXIT_AMBIGUOUS
    } else {
        0
    };
    Outcome { stdout, stderr, code }
}
