//! The command-line verification suite driven from code.
//!
//!     cargo run --release --example verify_suite

use susy_fp::cli::{run_suite, RunConfig};

fn main() -> susy_fp::Result<()> {
    let mut cfg = RunConfig::default();
    cfg.set("seed", "sum:(exp:k=1*1+exp:k=-1*1)", "example")?;
    cfg.set("grid", "161,96,-4,4,0.05,1", "example")?;
    let rows = run_suite(&cfg)?;
    for row in &rows {
        println!("{:<4} {:.2e}  {}", if row.pass { "PASS" } else { "FAIL" }, row.report.max_norm, row.report.name);
    }
    println!("{} of {} checks pass", rows.iter().filter(|r| r.pass).count(), rows.len());
    Ok(())
}
