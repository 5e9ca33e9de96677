//! Independent reference integrator: classical RK4 on the Schrödinger
//! equation with a fixed, phase-uniform step schedule and real signed
//! coupling. Shares no code with the library.

#![allow(dead_code)]

use num_complex::Complex64 as C;

/// `H = [[α, V], [V, −α]]` with `V` the signed (real) coupling.
pub struct Drive<'a> {
    pub alpha: &'a dyn Fn(f64) -> f64,
    pub v: &'a dyn Fn(f64) -> f64,
}

fn deriv(d: &Drive, t: f64, psi: [C; 2]) -> [C; 2] {
    let (a, v) = ((d.alpha)(t), (d.v)(t));
    let mi = C::new(0.0, -1.0);
    [
        mi * (psi[0] * a + psi[1] * v),
        mi * (psi[0] * v - psi[1] * a),
    ]
}

fn axpy(psi: [C; 2], k: [C; 2], h: f64) -> [C; 2] {
    [psi[0] + k[0] * h, psi[1] + k[1] * h]
}

/// Integrate `psi` over a smooth stretch `[t0, t1]`, steps of length
/// `h / max(Ω(t), 1)`.
pub fn rk4(d: &Drive, t0: f64, t1: f64, mut psi: [C; 2], h: f64) -> [C; 2] {
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    while (t1 - t) * dir > 0.0 {
        let om = (d.alpha)(t).hypot((d.v)(t)).max(1.0);
        let mut dt = h / om;
        if dt > (t1 - t).abs() {
            dt = (t1 - t).abs();
        }
        let dt = dt * dir;
        // sample segment ends from the inside so a jump at either end is
        // seen on the correct side
        let inside = |s: f64| {
            let eps = 1e-13 * s.abs().max(1.0);
            if s == t0 {
                s + dir * eps
            } else if s == t1 {
                s - dir * eps
            } else {
                s
            }
        };
        let k1 = deriv(d, inside(t), psi);
        let k2 = deriv(d, t + 0.5 * dt, axpy(psi, k1, 0.5 * dt));
        let k3 = deriv(d, t + 0.5 * dt, axpy(psi, k2, 0.5 * dt));
        let k4 = deriv(d, inside(t + dt), axpy(psi, k3, dt));
        for i in 0..2 {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
        t += dt;
        if (t1 - t).abs() < 1e-15 * t1.abs().max(1.0) {
            t = t1;
        }
    }
    psi
}

/// Upper and lower eigenvectors of `[[α, V], [V, −α]]`.
pub fn eigvecs(alpha: f64, v: f64) -> ([f64; 2], [f64; 2]) {
    let om = alpha.hypot(v);
    // upper: (α + Ω, V) normalised; lower: (−V, α + Ω) normalised
    let (x, y) = if alpha >= 0.0 {
        (alpha + om, v)
    } else {
        (v, om - alpha)
    };
    let n = x.hypot(y);
    let up = [x / n, y / n];
    let lo = [-up[1], up[0]];
    (up, lo)
}

/// Population transferred from the lower to the upper instantaneous
/// eigenstate over `[−t_max, t_max]`, with the drive split at `breaks`
/// (the right-continuous value is used after each break).
pub fn transfer_eigen(d: &Drive, t_max: f64, breaks: &[f64], h: f64) -> f64 {
    let (_, lo) = eigvecs((d.alpha)(-t_max), (d.v)(-t_max));
    let mut psi = [C::new(lo[0], 0.0), C::new(lo[1], 0.0)];
    let mut t = -t_max;
    let mut knots: Vec<f64> = breaks.iter().copied().filter(|b| b.abs() < t_max).collect();
    knots.push(t_max);
    for k in knots {
        psi = rk4(d, t, k, psi, h);
        t = k;
    }
    let (up, _) = eigvecs((d.alpha)(t_max), (d.v)(t_max));
    (psi[0] * up[0] + psi[1] * up[1]).norm_sqr()
}

/// `α = a t^{2n} − c`, `V = b`, optional flip `V → −V` for `t ≥ 0`.
pub fn parabolic_transfer(a: f64, b: f64, c: f64, n: i32, jump: bool, kappa: f64, h: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    let alpha = move |t: f64| a * t.powi(2 * n) - c;
    let v = move |t: f64| if jump && t >= 0.0 { -b } else { b };
    // |α(T)| ≥ κ·max(b, 1)
    let need = (kappa * b.max(1.0) + c).max(c.abs());
    let t_max = (need / a).powf(1.0 / (2 * n) as f64);
    let d = Drive {
        alpha: &alpha,
        v: &v,
    };
    transfer_eigen(&d, t_max, if jump { &[0.0] } else { &[] }, h)
}

/// Full propagator over `[t0, t1]` in the bare basis, columns evolved
/// from the basis states `(1, 0)` and `(0, 1)`.
pub fn propagator(d: &Drive, t0: f64, t1: f64, breaks: &[f64], h: f64) -> [[C; 2]; 2] {
    let mut cols = [
        [C::new(1.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), C::new(1.0, 0.0)],
    ];
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let mut knots: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| *b > lo && *b < hi)
        .collect();
    if t1 < t0 {
        knots.reverse();
    }
    knots.push(t1);
    for col in cols.iter_mut() {
        let mut t = t0;
        for &k in &knots {
            *col = rk4(d, t, k, *col, h);
            t = k;
        }
    }
    [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
}
