//! Acceptance criteria, one PASS/FAIL line each.  Run with
//! `cargo test -p bfc-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bfc::harness::{b24_report, run_suite, verify, LineStatus, SweepConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn suites(names: &[&str]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in names {
        let s = run_suite(name).expect("known suite");
        pass &= s.passed();
        parts.push(format!("{} {}/{}", s.name, s.checks - s.failed, s.checks));
        for line in &s.samples {
            parts.push(format!("  {line}"));
        }
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn sweep(cfg: SweepConfig) -> Outcome {
    match verify(&cfg) {
        Ok(rep) => Outcome {
            pass: rep.ok(),
            detail: format!(
                "{} series, {} coefficients, {} mismatches{}",
                rep.series_built,
                rep.cases,
                rep.mismatches.len(),
                rep.mismatches.first().map(|m| format!(", first: {m}")).unwrap_or_default()
            ),
        },
        Err(e) => Outcome { pass: false, detail: e },
    }
}

/// Lines of the printed table that differ without having been flagged in
/// the transcription; each one is analysed in the README.
const B24_UNFLAGGED: &[(&str, u32, u32)] = &[
    ("schur", 2, 0),
    ("schur", 0, 1),
    ("schur", 1, 2),
    ("schur", 2, 2),
    ("chern", 0, 1),
    ("chern", 1, 2),
    ("chern", 2, 2),
];

fn b24(known: &mut bool) -> Outcome {
    let rep = match b24_report() {
        Ok(r) => r,
        Err(e) => return Outcome { pass: false, detail: e },
    };
    let mut diff: Vec<(&str, u32, u32)> = Vec::new();
    let mut suspects = 0;
    for (tag, lines) in [("schur", &rep.schur_lines), ("chern", &rep.chern_lines)] {
        for l in lines {
            match l.status {
                LineStatus::Differs(_) => diff.push((tag, l.z, l.w)),
                LineStatus::Suspect(_) => suspects += 1,
                _ => {}
            }
        }
    }
    *known = rep.ok() && diff == B24_UNFLAGGED;
    Outcome {
        pass: rep.ok() && diff.is_empty(),
        detail: format!(
            "{} terms, {} oracle mismatches, {} flagged suspect lines, unflagged differing lines {:?}",
            rep.terms.len(),
            rep.oracle_mismatches,
            suspects,
            diff
        ),
    }
}

fn main() -> ExitCode {
    let mut b24_known = false;
    let criteria: Vec<(u32, &str, u64, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        (1, "matrix action E23 on c1^3, c1^4", 1, Box::new(|| suites(&["matrix_action"]))),
        (2, "rank-one series as a rational function", 5, Box::new(|| suites(&["rank_one_series"]))),
        (
            3,
            "series vs direct action, n<=6 r<=3 h,k<=2",
            600,
            Box::new(|| {
                sweep(SweepConfig {
                    suites: false,
                    stability_max_n: 0,
                    ..Default::default()
                })
            }),
        ),
        (4, "Jacobi-Trudi module action", 10, Box::new(|| suites(&["jacobi_trudi_module"]))),
        (5, "generating vectors, t-truncation 6", 10, Box::new(|| suites(&["generating_vectors"]))),
        (6, "U vanishing and truncated H", 5, Box::new(|| suites(&["truncated_h"]))),
        (7, "Cauchy and contraction special cases", 30, Box::new(|| suites(&["cauchy", "contraction"]))),
        (8, "B(2,4) table", 30, Box::new(|| b24(&mut b24_known))),
        (9, "finite and infinite modes", 30, Box::new(|| suites(&["infinite_mode"]))),
        (
            10,
            "structural suites, grading, truncation stability",
            60,
            Box::new(|| {
                let mut o = suites(&[
                    "clifford_relations",
                    "antiderivation",
                    "trace_representation",
                    "series_exp_log",
                    "series_inverse",
                    "pieri",
                    "dimension",
                ]);
                let s = sweep(SweepConfig {
                    max_n: 4,
                    suites: false,
                    stability_max_n: 4,
                    ..Default::default()
                });
                o.pass &= s.pass;
                o.detail = format!("{}; graded+stability sweep n<=4: {}", o.detail, s.detail);
                o
            }),
        ),
    ];
    let mut failed = Vec::new();
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(limit);
        let pass = o.pass && in_time;
        let time_note = if in_time { String::new() } else { format!(" (over the {limit} s budget)") };
        println!(
            "criterion {id:>2} {} [{:.2} s]{time_note} {title}: {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            o.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    // criterion 8 fails on lines of the printed table shown to be wrong;
    // accepted only while the difference is exactly the analysed one
    let unexpected: Vec<u32> = failed.iter().copied().filter(|&id| !(id == 8 && b24_known)).collect();
    if failed.contains(&8) && b24_known {
        println!("criterion  8 failure is the known one: the table differs on the analysed lines only");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
