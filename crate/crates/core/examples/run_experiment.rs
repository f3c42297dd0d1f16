//! Runs one named experiment on a bundled configuration and prints its
//! summary, as the command-line tool does.

use kleinlab::config::load_preset;
use kleinlab::experiments::{run, Lab, EXPERIMENTS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "estimate-delta".into());
    let preset = args.next().unwrap_or_else(|| "symmetric".into());
    if !EXPERIMENTS.contains(&name.as_str()) {
        return Err(format!("unknown experiment {name}; choose one of {EXPERIMENTS:?}").into());
    }
    let lab = Lab::new(load_preset(&preset)?, Some(1))?;
    let report = run(&name, &lab)?;
    print!("{}", report.summary_json());
    for a in &report.artifacts {
        println!("{}: {} bytes", a.file, a.bytes.len());
    }
    Ok(())
}
