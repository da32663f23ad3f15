//! Collective ratio from the dipole geometry, and the two equivalent forms
//! of the positivity condition.

use collective_decay::params::{collective_rate_ratio, damping_spectrum, geometry_positivity};
use collective_decay::{BathSpec, GeometrySpec};

fn main() -> collective_decay::Result<()> {
    let bath = BathSpec::new(1.0, 0.5)?;
    println!(
        "{:>6} {:>6} {:>9} {:>9} {:>9} {:>6}",
        "k0r", "cos", "a", "2a/3", "lhs", "holds"
    );
    for k0r in [0.1, 0.5, std::f64::consts::FRAC_PI_2, 3.0, 10.0] {
        for cos in [0.0, (1.0f64 / 3.0).sqrt(), 0.9] {
            let g = GeometrySpec::new(k0r, cos)?;
            let a = collective_rate_ratio(&g);
            let rec = geometry_positivity(&g)?;
            println!(
                "{k0r:>6.3} {cos:>6.3} {a:>9.6} {:>9.6} {:>9.6} {:>6}",
                2.0 * a / 3.0,
                rec.lhs,
                rec.holds
            );
        }
    }

    for a in [0.5, 1.0, 1.2] {
        let spec = damping_spectrum(&bath, a);
        println!(
            "a = {a}: damping eigenvalues {:?}, positive {}",
            spec.values, spec.positive
        );
    }
    Ok(())
}
