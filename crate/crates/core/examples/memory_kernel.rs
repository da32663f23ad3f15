//! Finite bath memory slows the decay: the integrated rate picks up the
//! factor Theta = 1 + (exp(-lambda t) - 1) / (lambda t).

use std::f64::consts::FRAC_PI_4;

use collective_decay::measures::werner_series_oracle;
use collective_decay::params::memory_theta;
use collective_decay::{BathSpec, MemorySpec};

fn main() -> collective_decay::Result<()> {
    let bath = BathSpec::new(1.0, 0.0)?;
    let times = [0.5, 1.0, 2.0, 5.0];
    let memories = [
        MemorySpec::Markov,
        MemorySpec::finite(10.0)?,
        MemorySpec::finite(1.0)?,
        MemorySpec::finite(0.1)?,
    ];

    for m in memories {
        let label = match m {
            MemorySpec::Markov => "markov".to_string(),
            MemorySpec::Finite(l) => format!("lambda = {l}"),
        };
        let coh: Vec<String> = werner_series_oracle(0.5, &bath, 0.5, m, FRAC_PI_4, &times)?
            .iter()
            .map(|s| format!("{:.6}", s.coherence_l1))
            .collect();
        let theta: Vec<String> = times
            .iter()
            .map(|&t| memory_theta(m, t).map(|v| format!("{v:.4}")))
            .collect::<Result<_, _>>()?;
        println!(
            "{label:>14}  C_l1 {}  Theta {}",
            coh.join(" "),
            theta.join(" ")
        );
    }
    Ok(())
}
