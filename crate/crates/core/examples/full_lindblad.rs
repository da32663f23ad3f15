//! Full 4x4 master equation with RK4, including the optional exchange
//! Hamiltonian, started from a state outside the symmetric X family.

use std::f64::consts::FRAC_PI_4;

use collective_decay::lindblad::{integrate, ExchangeHamiltonian};
use collective_decay::measures::{measures_general, FisherObservable};
use collective_decay::{BathSpec, DensityMatrix, GeneratorSpec, MemorySpec, Mode, C64};

fn main() -> collective_decay::Result<()> {
    let bath = BathSpec::new(1.0, 0.2)?;
    let spec = GeneratorSpec::new(bath, 0.8, MemorySpec::finite(2.0)?, Mode::Global, false)?
        .with_hamiltonian(ExchangeHamiltonian {
            omega12: 0.5,
            phi: 0.0,
        });

    // |01> with a little |11> admixture
    let amp = [
        C64::new(0.0, 0.0),
        C64::new(0.9f64.sqrt(), 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.1f64.sqrt()),
    ];
    let rho0 = DensityMatrix::pure(&amp)?;

    let run = integrate(&spec, &rho0, 4.0, 1e-3)?;
    println!("step-halving error estimate {:.2e}", run.error_estimate);

    let obs = FisherObservable::new(FRAC_PI_4);
    let traj = &run.trajectory;
    for k in (0..traj.times.len()).step_by(500) {
        let rho = &traj.states[k];
        let m = measures_general(rho, &obs)?;
        println!(
            "t = {:.2}  min eig {:+.3e}  C_l1 {:.6}  C {:.6}  F {:.6}",
            traj.times[k],
            rho.min_eigenvalue()?,
            m.coherence_l1,
            m.concurrence,
            m.qfi
        );
    }
    Ok(())
}
