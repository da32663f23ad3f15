//! Coherence, concurrence and Fisher information on a few two-qubit states,
//! comparing the X-state shortcuts with the general definitions.

use std::f64::consts::FRAC_PI_4;

use collective_decay::measures::{
    concurrence_general, concurrence_xstate, l1_coherence, qfi_spectral, qfi_xstate,
    qfi_xstate_printed, FisherObservable,
};
use collective_decay::xstate::from_werner;
use collective_decay::{SymXState, WernerParam, C64};

fn main() -> collective_decay::Result<()> {
    let obs = FisherObservable::new(FRAC_PI_4);
    let states = [
        ("werner 0.5", from_werner(WernerParam::new(0.5)?)),
        ("werner 1", from_werner(WernerParam::new(1.0)?)),
        (
            "complex r23",
            SymXState::new(0.1, 0.4, C64::new(0.2, 0.25), C64::new(0.05, 0.0))?,
        ),
    ];
    for (name, s) in states {
        let rho = s.to_density()?;
        println!("{name}");
        println!("  l1 coherence        {:.12}", l1_coherence(&rho));
        println!(
            "  concurrence         {:.12} (shortcut {:.12})",
            concurrence_general(&rho)?,
            concurrence_xstate(&s)
        );
        println!(
            "  fisher information  {:.12} (closed form {:.12}, sin^2 phi form {:.12})",
            qfi_spectral(&rho, &obs)?,
            qfi_xstate(&s, &obs)?,
            qfi_xstate_printed(&s, &obs)?
        );
    }
    Ok(())
}
