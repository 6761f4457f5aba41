//! Extrema and spectral class for a handful of configurations.

use morsekit::potential::{classify, classify_morse_branch, find_extrema_report};
use morsekit::PotentialParams;

fn main() -> morsekit::Result<()> {
    let configs = [
        ("deep well", PotentialParams::new(2.0, -12.0, 1.0, 0.2)),
        ("well with barrier", PotentialParams::new(-1.0, 3.5, 1.0, 0.5)),
        ("strong inner wall", PotentialParams::new(3.0, -1.0, 1.0, 0.5)),
        ("barrier above a positive minimum", PotentialParams::new(-0.52, 2.0, 1.0, 0.5)),
        ("repulsive", PotentialParams::new(-0.001, -1.0, 1.0, 0.5)),
        ("pure Morse", PotentialParams::new(2.0, -12.0, 0.0, 0.2)),
    ];
    for (name, p) in configs {
        let report = find_extrema_report(&p)?;
        println!("{name}: A={} B={} C={} q={}", p.a, p.b, p.c, p.q);
        for e in &report.extrema {
            println!("  {:?} at x={:.6} V={:.6}", e.kind, e.x0, e.value);
        }
        if report.merged_root {
            println!("  (merged root)");
        }
        // without the wall the potential does not confine on the right
        let class = if p.c == 0.0 { classify_morse_branch(&p)? } else { classify(&p)? };
        println!("  class: {}", class.as_str());
    }
    Ok(())
}
