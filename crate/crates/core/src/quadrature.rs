// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Composite Gauss-Legendre quadrature on piecewise-smooth integrands.

use std::sync::OnceLock;

const ORDER: usize = 16;

/// Nodes and weights of the `ORDER`-point rule on [-1, 1].
fn rule() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(gauss_legendre::<ORDER>)
}

/// Newton iteration on the Legendre polynomial, starting from the Chebyshev guess.
fn gauss_legendre<const N: usize>() -> ([f64; N], [f64; N]) {
    let mut x = [0.0; N];
    let mut w = [0.0; N];
    let n = N as f64;
    for i in 0..N {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = z;
            for k in 2..=N {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Integrates `f` over `[a, b]` with one rule application.
fn panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(w.iter())
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

/// Integrates `f` over `[a, b]`.
///
/// The interval is split at every breakpoint strictly inside it and each
/// segment is divided into `panels` equal sub-panels. Integrand values are never
/// requested at a breakpoint, so jump discontinuities located there are exact.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    if b < a {
        return -integrate(f, b, a, breaks, panels);
    }
    let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    cuts.push(a);
    cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let panels = panels.max(1);
    let mut total = 0.0;
    for seg in cuts.windows(2) {
        let h = (seg[1] - seg[0]) / panels as f64;
        for k in 0..panels {
            let lo = seg[0] + k as f64 * h;
            let hi = if k + 1 == panels { seg[1] } else { lo + h };
            total += panel(&f, lo, hi);
        }
    }
    total
}

/// Running integral of `f` at every node of the increasing sequence `times`,
/// starting from zero at `times[0]`.
pub fn cumulative(f: impl Fn(f64) -> f64, times: &[f64], breaks: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    if let Some(&first) = times.first() {
        out.push(0.0);
        let mut prev = first;
        for &t in &times[1..] {
            acc += integrate(&f, prev, t, breaks, 1);
            out.push(acc);
            prev = t;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| x.powi(31) + 3.0 * x * x, -1.0, 2.0, &[], 1);
        let exact = (2f64.powi(32) - 1.0) / 32.0 + (8.0 + 1.0);
        assert!((v - exact).abs() / exact < 1e-13);
    }

    #[test]
    fn step_function_with_break() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { -2.0 };
        let v = integrate(f, 0.0, 1.0, &[0.3], 1);
        assert!((v - (0.3 - 1.4)).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, &[0.0], 32);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let times: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        let c = cumulative(|x| x.cos(), &times, &[]);
        for (t, v) in times.iter().zip(&c) {
            assert!((v - t.sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn reversed_limits() {
        let v = integrate(|x| x, 1.0, 0.0, &[], 4);
        assert!((v + 0.5).abs() < 1e-15);
    }
}
