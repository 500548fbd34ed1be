//! Root-node cut loop on an mknap file, with a DP audit of every cut.
//!
//!     cargo run --release --example root_gap -- [instance-file] [max-rounds]

use fwcut::fw::FwConfig;
use fwcut::mkp::{audit_run, parse_mknap, root_cut_loop, LoopConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args.first().map(String::as_str).unwrap_or("data/two_var.txt");
    let rounds = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let instances = parse_mknap(&std::fs::read(path)?)?;
    let config = LoopConfig {
        max_rounds: rounds,
        ..LoopConfig::default()
    };
    for inst in &instances {
        let run = root_cut_loop(inst, &FwConfig::default(), &config)?;
        let r = &run.report;
        println!(
            "{}: d_lp {:.2} -> d_r {:.2} (p {:?}), gap closed {}, {} rounds, {} cuts",
            inst.name,
            r.d_lp,
            r.d_r,
            r.p,
            r.gap_closed.map(|g| format!("{g:.2}%")).unwrap_or_else(|| "n/a".into()),
            r.rounds,
            r.cuts_added
        );
        let audit = audit_run(inst, &run);
        for c in &audit.checks {
            println!("  {:<16} {} checked, {} failed", c.name, c.checked, c.failed);
        }
    }
    Ok(())
}
