use crate::error::{Error, Result};

const MAX_ITER: usize = 400;

/// Bisection on a bracketing interval of a monotone function.
///
/// Returns once `|f(x)| <= tol` or the bracket is narrower than `tol`.
pub fn find_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::Domain(format!("bad bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    let rising = fa < 0.0;
    for _ in 0..MAX_ITER {
        let mid = a + 0.5 * (b - a);
        let fm = f(mid);
        if fm.abs() <= tol || b - a <= tol || mid == a || mid == b {
            return Ok(mid);
        }
        if (fm < 0.0) == rising {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(a + 0.5 * (b - a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::std_normal_cdf;

    #[test]
    fn identity_root() {
        let x = find_root(|x| x, -1.0, 1.0, 1e-12).unwrap();
        assert!(x.abs() <= 1e-12);
    }

    #[test]
    fn median_of_normal() {
        let x = find_root(|x| std_normal_cdf(x) - 0.5, -3.0, 3.0, 1e-13).unwrap();
        assert!(x.abs() <= 1e-12);
    }

    #[test]
    fn decreasing_function() {
        let x = find_root(|x| 2.0 - x, 0.0, 5.0, 1e-12).unwrap();
        assert!((x - 2.0).abs() <= 1e-11);
    }

    #[test]
    fn no_sign_change_is_bracket_error() {
        let err = find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-9).unwrap_err();
        assert_eq!(err, Error::Bracket { lo: -1.0, hi: 1.0 });
    }
}
