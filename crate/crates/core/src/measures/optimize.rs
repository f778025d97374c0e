//! Derivative-free searches over Bloch angles.

use std::f64::consts::PI;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(c, fc), (d, fd), (x, fx)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Minimizes `f(θ, φ)` over the Bloch sphere.
///
/// A `32 × 64` grid (θ = πi/32, φ = 2πj/64) seeds alternating golden-section
/// line searches of `refine_iters` steps each, over shrinking windows.
pub fn minimize_bloch(f: impl Fn(f64, f64) -> f64, refine_iters: usize) -> (f64, f64, f64) {
    const N_THETA: usize = 32;
    const N_PHI: usize = 64;
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..N_THETA {
        let theta = PI * i as f64 / N_THETA as f64;
        for j in 0..N_PHI {
            let phi = 2.0 * PI * j as f64 / N_PHI as f64;
            let v = f(theta, phi);
            if v < best.2 {
                best = (theta, phi, v);
            }
        }
    }
    let (mut theta, mut phi, mut val) = best;
    let mut width = PI / N_THETA as f64;
    for _ in 0..6 {
        let (t, v) = golden_section_max(|x| -f(x, phi), theta - width, theta + width, refine_iters);
        if -v <= val {
            theta = t;
            val = -v;
        }
        let (p, v) = golden_section_max(|x| -f(theta, x), phi - 2.0 * width, phi + 2.0 * width, refine_iters);
        if -v <= val {
            phi = p;
            val = -v;
        }
        width *= 0.5;
    }
    (theta, phi, val)
}
