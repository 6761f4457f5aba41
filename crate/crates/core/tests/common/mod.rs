//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use morsekit::PotentialParams;

/// Generalized binomial `binom(a, k)` for real `a`.
pub fn binom(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a - j as f64) / (j + 1) as f64)
}

/// Jacobi polynomial from its explicit finite sum.
pub fn jacobi_explicit(mu: f64, nu: f64, n: usize, y: f64) -> f64 {
    (0..=n)
        .map(|s| {
            binom(n as f64 + mu, n - s)
                * binom(n as f64 + nu, s)
                * ((y - 1.0) / 2.0).powi(s as i32)
                * ((y + 1.0) / 2.0).powi((n - s) as i32)
        })
        .sum()
}

/// Associated Laguerre polynomial from its explicit finite sum.
pub fn laguerre_explicit(gamma: f64, n: usize, y: f64) -> f64 {
    let mut fact = 1.0;
    let mut total = 0.0;
    for k in 0..=n {
        if k > 0 {
            fact *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binom(n as f64 + gamma, n - k) * y.powi(k as i32) / fact;
    }
    total
}

/// `int_1^inf (y-1)^mu (y+1)^nu f(y) dy` by the trapezoid rule after
/// `y = 1 + e^t`, which makes the integrand decay exponentially at both ends.
/// Accurate when `mu + 1` and the decay rate at large `y` are both at least
/// about `0.5`.
pub fn jacobi_weighted_integral(mu: f64, nu: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (t0, t1, dt) = (-120.0, 70.0, 0.005);
    let n = ((t1 - t0) / dt) as usize;
    (0..=n)
        .map(|i| {
            let t = t0 + dt * i as f64;
            let e = t.exp();
            let y = 1.0 + e;
            let ln_w = (mu + 1.0) * t + nu * (2.0 + e).ln();
            let v = ln_w.exp() * f(y);
            if i == 0 || i == n {
                0.5 * v
            } else {
                v
            }
        })
        .sum::<f64>()
        * dt
}

/// Plain trapezoid rule on `[a, b]` with `n` intervals.
pub fn trapezoid_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + h * i as f64)).sum();
    h * (inner + 0.5 * (f(a) + f(b)))
}

/// Fourth-order central second derivative.
pub fn second_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// Real roots of `2A z^3 + B z^2 - C` on `(0, 1/q)`, found by dense sampling
/// and bisection of every sign change.
pub fn cubic_roots_by_scan(p: &PotentialParams) -> Vec<f64> {
    let h = |z: f64| 2.0 * p.a * z * z * z + p.b * z * z - p.c;
    let hi = 1.0 / p.q;
    let n = 200_000;
    let mut roots = Vec::new();
    for i in 0..n {
        let (mut a, mut b) = (hi * i as f64 / n as f64, hi * (i + 1) as f64 / n as f64);
        if a == 0.0 {
            a = 1e-300;
        }
        if h(a) == 0.0 {
            roots.push(a);
            continue;
        }
        if h(a).signum() == h(b).signum() {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if h(a).signum() == h(m).signum() {
                a = m;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

pub fn well(b: f64) -> PotentialParams {
    PotentialParams::new(2.0, b, 1.0, 0.2)
}
