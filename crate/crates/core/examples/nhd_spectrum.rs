//! Laguerre-basis spectra for three wells at growing basis sizes.

use morsekit::nhd::{nhd_spectrum, NhdConfig};
use morsekit::PotentialParams;

fn main() -> morsekit::Result<()> {
    for (b, gamma) in [(-12.0, 2.0), (-14.0, 3.0), (-10.0, 1.0)] {
        let p = PotentialParams::new(2.0, b, 1.0, 0.2);
        println!("B = {b}, gamma = {gamma}");
        for size in [50, 100, 200] {
            let s = nhd_spectrum(&p, &NhdConfig::new(size, gamma))?;
            let shown: Vec<String> = s.energies().iter().map(|e| format!("{e:.9}")).collect();
            println!("  N={size:>3}: {}", shown.join(" "));
        }
    }
    Ok(())
}
