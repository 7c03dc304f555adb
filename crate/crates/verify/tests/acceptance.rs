//! One line per acceptance criterion; exits nonzero if any fails.
//!
//! Pass criterion ids as arguments to run a subset.

use std::process::ExitCode;

fn main() -> ExitCode {
    // cargo passes libtest-style flags even without the default harness
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let verdicts = misp_verify::run(&only, |v| println!("{v}"));
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    println!("acceptance: {} passed, {failed} failed", verdicts.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
