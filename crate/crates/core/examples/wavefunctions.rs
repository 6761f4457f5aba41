//! Sampled eigenfunctions from the Laguerre basis and from the
//! parameter-spectrum coefficients, with node counts and overlaps.

use morsekit::nhd::{nhd_states, nhd_wavefunction, NhdConfig};
use morsekit::pps::{pps_spectrum, pps_wavefunction, PpsConfig};
use morsekit::potential::linspace;
use morsekit::tra::{count_nodes, normalize_wavefunction, trapezoid};
use morsekit::PotentialParams;

fn main() -> morsekit::Result<()> {
    let p = PotentialParams::new(2.0, -12.0, 1.0, 0.2);
    let xs = linspace(-25.0, 4.0, 20001);

    let cfg = NhdConfig::new(200, 2.0);
    let (spectrum, vectors) = nhd_states(&p, &cfg)?;
    let (lo, hi) = PpsConfig::default_window(&p)?.expect("bound states");
    let pps = pps_spectrum(&p, &PpsConfig::new(lo, hi))?.energies();

    for (k, level) in spectrum.levels.iter().enumerate().take(4) {
        let coeffs: Vec<f64> = vectors.column(k).iter().copied().collect();
        let mut a = nhd_wavefunction(&p, &cfg, &coeffs, &xs)?;
        normalize_wavefunction(&xs, &mut a)?;
        let mut b = pps_wavefunction(&p, pps[k], &xs)?;
        normalize_wavefunction(&xs, &mut b)?;
        let prod: Vec<f64> = a.iter().zip(&b).map(|(u, v)| u * v).collect();
        let peak = a.iter().zip(&xs).max_by(|l, r| l.0.abs().total_cmp(&r.0.abs())).unwrap();
        println!(
            "level {k}: E={:.8} nodes {} / {}, |overlap| {:.8}, peak at x={:.3}",
            level.energy,
            count_nodes(&a, 1e-4),
            count_nodes(&b, 1e-4),
            trapezoid(&xs, &prod).abs(),
            peak.1
        );
    }
    Ok(())
}
