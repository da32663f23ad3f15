//! Sudden-death time of the Werner state over the collective ratio and the
//! thermal occupation.

use collective_decay::harness::config::{RawConfig, RunConfig};
use collective_decay::harness::sweep::{rows_to_csv, sweep, SweepAxis, SweepOptions};

fn main() -> Result<(), collective_decay::harness::HarnessError> {
    let mut raw = RawConfig::default();
    raw.set("state.werner", "0.8")?;
    let cfg = RunConfig::from_raw(&raw, true)?;
    let axes = [
        SweepAxis::parse("a=0,0.25,0.5,0.75,0.9")?,
        SweepAxis::parse("n=0,0.1,0.5")?,
    ];
    let rows = sweep(
        &cfg,
        &axes,
        &SweepOptions {
            probe_t: 0.5,
            horizon: 20.0,
            samples: 2001,
        },
    )?;
    print!("{}", rows_to_csv(&axes, &rows));
    Ok(())
}
