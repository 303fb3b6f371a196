//! Runs the fourteen acceptance criteria as named verification suites and
//! prints one pass/fail line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qfinv::verify::{run_suite, SUITES};

/// Wall-clock limits, by suite name.
const LIMITS: [(&str, u64); 3] = [("clifford-dims", 30), ("e2-additivity", 60), ("surjectivity", 120)];

fn main() -> ExitCode {
    let seed = 0;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut failed = 0;
    for (i, suite) in SUITES.iter().enumerate() {
        let start = Instant::now();
        let outcome = run_suite(suite.name, seed, threads);
        let elapsed = start.elapsed();
        let limit = LIMITS
            .iter()
            .find(|(name, _)| *name == suite.name)
            .map(|&(_, secs)| Duration::from_secs(secs));
        let (pass, detail) = match &outcome {
            Ok(report) => {
                let in_time = limit.map_or(true, |l| elapsed < l);
                let mut detail = format!("{} cases, {} failures", report.cases, report.failures.len());
                if let Some(l) = limit {
                    detail.push_str(&format!(", limit {}s", l.as_secs()));
                }
                if let Some(first) = report.failures.first() {
                    detail.push_str(&format!(", first failure case {}: {}", first.case, first.witness));
                }
                (report.passed() && in_time, detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<20} {} ({detail}, {:.2}s)",
            i + 1,
            suite.name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", SUITES.len() - failed, SUITES.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
