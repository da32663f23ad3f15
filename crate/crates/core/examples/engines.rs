//! The three X-state engines side by side: exact closed form, the published
//! component formulas, and RK4 on the reduced equations.

use collective_decay::lindblad::integrate_reduced;
use collective_decay::xstate::{from_werner, propagate, propagate_printed};
use collective_decay::{BathSpec, MemorySpec, WernerParam};

fn main() -> collective_decay::Result<()> {
    let bath = BathSpec::new(1.0, 0.0)?;
    let a = 1.0;
    let s0 = from_werner(WernerParam::new(0.5)?);
    let times: Vec<f64> = (0..=5).map(|k| k as f64).collect();
    let rk4 = integrate_reduced(&bath, a, MemorySpec::Markov, &s0, &times, 1e-3)?;

    println!("re r23 at a = 1");
    println!(
        "{:>4} {:>14} {:>14} {:>14}",
        "t", "closed form", "printed", "rk4"
    );
    for (k, &t) in times.iter().enumerate() {
        let exact = propagate(&s0, &bath, a, MemorySpec::Markov, t)?;
        let printed = propagate_printed(&s0, &bath, a, MemorySpec::Markov, t)?;
        println!(
            "{t:>4} {:>14.10} {:>14.10} {:>14.10}",
            exact.r23.re, printed.r23.re, rk4[k].r23.re
        );
    }
    // the printed solution drifts towards -5/24 while the other two stay at -1/4
    Ok(())
}
