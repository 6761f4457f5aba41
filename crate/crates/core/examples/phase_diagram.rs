//! Class grids in the (A/C, B/C) plane and the analytic boundaries between
//! the regions, for three values of q.

use std::collections::BTreeMap;

use morsekit::potential::{boundary_blue_green, boundary_min_zero, boundary_red_grey, phase_diagram_grid};

fn main() -> morsekit::Result<()> {
    let c = 1.0;
    for q in [0.2, 0.5, 0.8] {
        let grid = phase_diagram_grid((-4.0, 8.0), (-12.0, 4.0), 120, 160, c, q, 1.0)?;
        let mut counts = BTreeMap::new();
        for class in &grid.classes {
            *counts.entry(class.as_str()).or_insert(0usize) += 1;
        }
        println!("q = {q}");
        for (class, n) in counts {
            println!("  {class:>14}: {n}");
        }
        for b in [-8.0, -2.0, 2.0] {
            let mut line = format!("  B/C={b:>5}: blue/green A={:.4}", boundary_blue_green(b, c, q));
            if b >= 0.0 {
                line += &format!(", min at zero A={:.4}", boundary_min_zero(b, c, q)?);
            }
            println!("{line}");
        }
        // the red/grey curve does not depend on q
        println!("  red/grey at A=2: B={:.6}", boundary_red_grey(2.0, c));
    }
    Ok(())
}
