//! The Laguerre parameter is free. Scan it and keep the value where the
//! energies move least.

use morsekit::nhd::{default_gamma_grid, plateau_scan};
use morsekit::PotentialParams;

fn main() -> morsekit::Result<()> {
    for b in [-12.0, -14.0] {
        let p = PotentialParams::new(2.0, b, 1.0, 0.2);
        let scan = plateau_scan(&p, 100, &default_gamma_grid())?;
        println!("B = {b}");
        for row in &scan.rows {
            let mark = if scan.recommended == Some(row.gamma) { " <" } else { "" };
            println!(
                "  gamma={:>5.2} levels={} E0={:.9} score={:.2e}{mark}",
                row.gamma,
                row.spectrum.len(),
                row.spectrum.energies().first().copied().unwrap_or(f64::NAN),
                row.score
            );
        }
        println!("  best gamma: {}", scan.best_gamma());
    }
    Ok(())
}
