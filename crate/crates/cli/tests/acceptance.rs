//! One line per acceptance criterion. Runs every suite at seed 0 and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;

use ordkit_cli::suites::{self, SuiteReport};

/// Pinned tolerances: minimum item count, wall-clock limit in seconds, and a
/// stat that must reach a minimum (name, at least).
struct Criterion {
    suite: &'static str,
    min_items: usize,
    max_seconds: Option<f64>,
    stat: Option<(&'static str, u64)>,
}

const CRITERIA: [Criterion; 11] = [
    Criterion { suite: "ordinary", min_items: 200, max_seconds: Some(10.0), stat: None },
    Criterion { suite: "exactness", min_items: 100, max_seconds: None, stat: None },
    Criterion { suite: "minimalization", min_items: 200, max_seconds: None, stat: None },
    Criterion { suite: "nilpotence", min_items: 50, max_seconds: None, stat: None },
    // the concentration hypothesis must actually be exercised
    Criterion { suite: "tor", min_items: 100, max_seconds: None, stat: Some(("hypothesis_held", 10)) },
    Criterion { suite: "gluing", min_items: 30, max_seconds: None, stat: None },
    Criterion { suite: "patching", min_items: 3, max_seconds: None, stat: None },
    Criterion { suite: "hecke", min_items: 1, max_seconds: Some(30.0), stat: None },
    Criterion { suite: "enormous", min_items: 60, max_seconds: None, stat: Some(("induced_specs_with_hypotheses", 10)) },
    Criterion { suite: "tw", min_items: 1, max_seconds: None, stat: Some(("instances", 10)) },
    Criterion { suite: "numerology", min_items: 1000, max_seconds: None, stat: None },
];

fn judge(c: &Criterion, r: &SuiteReport) -> Vec<String> {
    let mut problems = Vec::new();
    let failed = r.failures().count();
    if failed > 0 {
        let first = r.failures().next().map(|i| i.failures.join("; ")).unwrap_or_default();
        problems.push(format!("{failed} failing items, first: {first}"));
    }
    if r.items.len() < c.min_items {
        problems.push(format!("{} items, need {}", r.items.len(), c.min_items));
    }
    if let Some(limit) = c.max_seconds {
        if r.seconds >= limit {
            problems.push(format!("{:.2} s over the {limit} s limit", r.seconds));
        }
    }
    if let Some((name, min)) = c.stat {
        let got = r.stats[name].as_u64().unwrap_or(0);
        if got < min {
            problems.push(format!("{name} = {got}, need {min}"));
        }
    }
    problems
}

fn main() -> ExitCode {
    let mut all = true;
    for (i, c) in CRITERIA.iter().enumerate() {
        let r = suites::run(c.suite, 0).expect("known suite");
        assert_eq!(r.criterion, i + 1);
        let problems = judge(c, &r);
        let passed = r.items.iter().filter(|x| x.pass).count();
        let limit = c.max_seconds.map_or(String::new(), |l| format!(", limit {l} s"));
        if problems.is_empty() {
            println!("criterion {} ({}): PASS {passed}/{} items in {:.2} s{limit}", i + 1, c.suite, r.items.len(), r.seconds);
        } else {
            all = false;
            println!("criterion {} ({}): FAIL {}", i + 1, c.suite, problems.join("; "));
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
