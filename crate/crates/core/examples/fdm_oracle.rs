//! Finite differences on a truncated interval, with and without Richardson
//! extrapolation.

use morsekit::fdm::{fdm_spectrum, FdmConfig};
use morsekit::nhd::{nhd_spectrum, NhdConfig};
use morsekit::PotentialParams;

fn main() -> morsekit::Result<()> {
    let p = PotentialParams::new(2.0, -12.0, 1.0, 0.2);
    let reference = nhd_spectrum(&p, &NhdConfig::new(200, 2.0))?.energies();
    for n in [1000, 2000, 4000, 8000] {
        let plain = fdm_spectrum(&p, &FdmConfig::new(-30.0, 8.0, n))?.energies();
        let rich = fdm_spectrum(&p, &FdmConfig::new(-30.0, 8.0, n).with_richardson())?.energies();
        let err = |es: &[f64]| {
            es.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        println!(
            "n={n:>5}: {} levels, max error {:.2e}, extrapolated {:.2e}",
            plain.len(),
            err(&plain),
            err(&rich)
        );
    }
    Ok(())
}
