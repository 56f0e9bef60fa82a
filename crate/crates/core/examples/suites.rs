//! Runs every verification suite at the default window and prints timings.

use taulink::verify::{run_suite, SuiteConfig, SUITES};

fn main() -> taulink::Result<()> {
    let cfg = SuiteConfig::default();
    for name in SUITES {
        let r = run_suite(name, &cfg, true)?;
        let status = if r.passed { "pass" } else { "FAIL" };
        println!("{name:<15} {status} {:>6} checked {:>8.3}s", r.checked, r.seconds.unwrap_or_default());
        for m in r.mismatches.iter().take(5) {
            println!("    {} {}: {} != {}", m.check, m.monomial, m.lhs, m.rhs);
        }
    }
    Ok(())
}
