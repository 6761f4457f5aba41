//! Jacobi and Laguerre polynomials from their recurrences, Gauss nodes from
//! the Jacobi matrix, and the H-bar family.

use morsekit::linalg::eigh_tridiag;
use morsekit::polys::{hbar_eval, jacobi_eval, laguerre_eval, laguerre_y_matrix, HbarParams, JacobiParams};

fn main() -> morsekit::Result<()> {
    let jp = JacobiParams::new(1.5, -13.0, 5)?;
    for y in [1.5, 3.0, 10.0] {
        let vals: Vec<String> = (0..=5).map(|n| jacobi_eval(&jp, n, y).map(|v| format!("{v:.5e}"))).collect::<Result<_, _>>()?;
        println!("J_n({y:>4}) = {}", vals.join(" "));
    }

    let gamma = 0.6;
    for y in [0.5, 2.0] {
        let vals: Vec<String> = (0..=4).map(|n| laguerre_eval(gamma, n, y).map(|v| format!("{v:.6}"))).collect::<Result<_, _>>()?;
        println!("L_n({y}) = {}", vals.join(" "));
    }

    // eigenvalues of the 7x7 y-matrix are the 7-point Gauss-Laguerre nodes
    let nodes = eigh_tridiag(&laguerre_y_matrix(gamma, 6)?, false)?.values;
    println!("nodes: {:?}", nodes.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>());

    let hb = hbar_eval(&HbarParams::new(1.0, -3.5, 0.5, 2.0), 4)?;
    println!("H-bar: {:?}", hb.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>());
    Ok(())
}
