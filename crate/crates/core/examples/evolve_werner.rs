//! Werner state x = 1/2 in a shared zero-temperature bath, for several
//! collective ratios. Prints the three measures at a few times.

use std::f64::consts::FRAC_PI_4;

use collective_decay::measures::{measures_xstate, FisherObservable};
use collective_decay::xstate::{from_werner, propagate};
use collective_decay::{BathSpec, MemorySpec, WernerParam};

fn main() -> collective_decay::Result<()> {
    let bath = BathSpec::new(1.0, 0.0)?;
    let s0 = from_werner(WernerParam::new(0.5)?);
    let obs = FisherObservable::new(FRAC_PI_4);

    println!(
        "{:>5} {:>5} {:>10} {:>10} {:>10}",
        "a", "t", "C_l1", "E_c", "F"
    );
    for a in [0.0, 0.5, 0.75, 1.0] {
        for t in [0.0, 0.5, 1.0, 3.0] {
            let s = propagate(&s0, &bath, a, MemorySpec::Markov, t)?;
            let m = measures_xstate(&s, &obs);
            println!(
                "{a:>5} {t:>5} {:>10.6} {:>10.6} {:>10.6}",
                m.coherence_l1, m.concurrence, m.qfi
            );
        }
    }
    Ok(())
}
