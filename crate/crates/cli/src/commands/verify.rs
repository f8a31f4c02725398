//! `verify`: seeded acceptance-property suites.

use std::fs;

use anyhow::{Context, Result};

use qnet::verify::{run_all, VerifyConfig};

use super::to_json;
use crate::{Validation, VerifyArgs, EXIT_OK, EXIT_SUITE_FAILURE};

pub fn run(args: &VerifyArgs) -> Result<i32> {
    if let Some(t) = args.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Validation(format!("tolerance must be non-negative, got {t}")).into());
        }
    }
    let report = run_all(&VerifyConfig {
        seed: args.seed,
        tol: args.tol,
    })?;
    let text = to_json(&report)?;
    match &args.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    for s in report.suites.iter().filter(|s| !s.passed) {
        eprintln!(
            "FAIL {}: {} of {} cases (max {:e}, tol {:e})",
            s.name, s.failures, s.cases, s.max, s.tol
        );
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_SUITE_FAILURE })
}
