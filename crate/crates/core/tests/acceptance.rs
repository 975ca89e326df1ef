//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;

use powops::verify::verify_all;

fn main() -> ExitCode {
    let results = verify_all();
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<usize> = results
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.id)
        .collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" ({failed:?})")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
