//! Reference computations that share no code path with the library.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `erf(x)` for `0 <= x <= 4` by the all-positive series
/// `2/√π · e^{-x²} · Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1))`.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > 1e-18 * sum {
        n += 1.0;
        term *= 2.0 * x * x / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * (-x * x).exp() * sum
}

/// `erfc(x)` for `x >= 2` by its continued fraction, modified Lentz.
fn erfc_cf(x: f64) -> f64 {
    // erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / PI.sqrt() / f
}

/// Reference `Φ(z)`.
pub fn phi_ref(z: f64) -> f64 {
    let x = z.abs() / 2f64.sqrt();
    let tail = if x < 3.0 {
        0.5 * (1.0 - erf_series(x))
    } else {
        0.5 * erfc_cf(x)
    };
    if z < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Reference quantile by bisection on `phi_ref`.
pub fn quantile_ref(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0, 40.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if phi_ref(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of the `N(mean, sigma²)` density over a
/// finite interval.
pub fn normal_mass_simpson(lo: f64, hi: f64, mean: f64, sigma: f64) -> f64 {
    let f = move |y: f64| {
        let z = (y - mean) / sigma;
        (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sigma)
    };
    if lo == hi {
        return 0.0;
    }
    let m = 0.5 * (lo + hi);
    let (fa, fm, fb) = (f(lo), f(m), f(hi));
    let whole = simpson(lo, hi, fa, fm, fb);
    adaptive(&f, lo, hi, fa, fm, fb, whole, 1e-15, 50)
}

/// Asymptotic Kolmogorov critical value `c` with `P(√n·D > c) = alpha`,
/// solved from `2 Σ (-1)^{k-1} e^{-2k²c²} = alpha` by bisection.
pub fn ks_critical(alpha: f64) -> f64 {
    let tail = |c: f64| -> f64 {
        let mut s = 0.0;
        for k in 1..100 {
            let k = k as f64;
            s += 2.0 * (-1f64).powi(k as i32 - 1) * (-2.0 * k * k * c * c).exp();
        }
        s
    };
    let (mut lo, mut hi) = (0.3, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One-sample KS statistic of `values` against Uniform(0, 1).
pub fn ks_uniform(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len() as f64;
    values
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let i = i as f64;
            ((i + 1.0) / n - u).max(u - i / n)
        })
        .fold(0.0, f64::max)
}
