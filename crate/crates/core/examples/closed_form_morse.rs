//! Without the exponential wall the spectrum is known in closed form. Compare
//! it with finite differences.

use morsekit::fdm::{fdm_spectrum, FdmConfig};
use morsekit::tra::diag_spectrum;
use morsekit::PotentialParams;

fn main() -> morsekit::Result<()> {
    let configs = [
        PotentialParams::new(2.0, -12.0, 0.0, 0.2),
        PotentialParams::new(4.0, -14.0, 0.0, 0.4),
        PotentialParams::new(5.0, -10.0, 0.0, 0.5).with_lambda(0.7),
    ];
    for p in configs {
        let exact = diag_spectrum(&p)?.energies();
        let fd = fdm_spectrum(&p, &FdmConfig::new(-25.0, 4.0, 8000).with_richardson())?.energies();
        println!("A={} B={} q={} lambda={}", p.a, p.b, p.q, p.lambda);
        for (k, e) in exact.iter().enumerate() {
            match fd.get(k) {
                Some(f) => println!("  {k}: {e:>14.10} fd {f:>14.10} diff {:.1e}", (e - f).abs()),
                None => println!("  {k}: {e:>14.10} (not resolved by the grid)"),
            }
        }
    }
    Ok(())
}
