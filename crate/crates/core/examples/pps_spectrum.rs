//! Parameter-spectrum scan: for each trial energy, the values of B that make
//! it an exact level, then the fitted levels at the target B.

use morsekit::pps::{pps_scan, pps_spectrum, FitKind, PpsConfig};
use morsekit::PotentialParams;

fn main() -> morsekit::Result<()> {
    let p = PotentialParams::new(2.0, -12.0, 1.0, 0.2);
    let (lo, hi) = PpsConfig::default_window(&p)?.expect("the well has bound states");
    let cfg = PpsConfig::new(lo, hi);

    let table = pps_scan(&p, &cfg)?;
    println!("{} scan rows on [{lo:.4}, {hi:.4}]", table.rows.len());
    for row in table.rows.iter().step_by(50) {
        let bs: Vec<String> = row.b_values.iter().take(4).map(|b| format!("{b:.4}")).collect();
        println!("  E={:>9.4}  B_n: {}", row.energy, bs.join(" "));
    }

    for (name, cfg) in [
        ("cubic, refined", cfg),
        ("cubic, raw fit", PpsConfig { refine: false, ..cfg }),
        ("linear, raw fit", PpsConfig { refine: false, fit_kind: FitKind::Linear, ..cfg }),
    ] {
        let s = pps_spectrum(&p, &cfg)?;
        let shown: Vec<String> = s.energies().iter().map(|e| format!("{e:.9}")).collect();
        println!("{name:>16}: {}", shown.join(" "));
    }
    Ok(())
}
