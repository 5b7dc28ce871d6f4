use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_BISECTIONS: usize = 400;

/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign.
///
/// Stops when the bracket is narrower than `tol` (absolute) or the midpoint
/// stops moving in floating point.
pub fn bisect<T: Real>(mut f: impl FnMut(T) -> T, lo: T, hi: T, tol: T) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "no sign change on [{}, {}]",
            a.to_f64_lossy(),
            b.to_f64_lossy()
        )));
    }
    let two = T::int(2);
    for _ in 0..MAX_BISECTIONS {
        let m = (a + b) / two;
        if (b - a).abs() <= tol || m <= a || m >= b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == T::zero() {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok((a + b) / two)
}

/// Safeguarded Newton iteration: Newton steps that leave the current bracket
/// are replaced by bisection. `f` returns `(value, derivative)`.
pub fn newton_bisect<T: Real>(mut f: impl FnMut(T) -> (T, T), lo: T, hi: T, tol: T) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let (fa, _) = f(a);
    let (fb, _) = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "no sign change on [{}, {}]",
            a.to_f64_lossy(),
            b.to_f64_lossy()
        )));
    }
    let increasing = fb > fa;
    let two = T::int(2);
    let mut x = (a + b) / two;
    for _ in 0..MAX_BISECTIONS {
        let (fx, dfx) = f(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if (fx > T::zero()) == increasing {
            b = x;
        } else {
            a = x;
        }
        if (b - a).abs() <= tol {
            return Ok((a + b) / two);
        }
        let newton = x - fx / dfx;
        let next = if dfx != T::zero() && newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            (a + b) / two
        };
        if (next - x).abs() <= tol / two {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Grows `hi` geometrically until `f(lo)` and `f(hi)` differ in sign.
pub fn expand_bracket<T: Real>(mut f: impl FnMut(T) -> T, lo: T, mut hi: T, factor: T) -> Result<T> {
    let flo = f(lo);
    for _ in 0..200 {
        let fhi = f(hi);
        if fhi.signum() != flo.signum() || fhi == T::zero() {
            return Ok(hi);
        }
        hi = hi * factor;
    }
    Err(Error::Domain("bracket expansion failed".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn newton_bisect_matches_bisect_on_cubic() {
        let f = |x: f64| x * x * x - x - 1.0;
        let df = |x: f64| 3.0 * x * x - 1.0;
        let a = bisect(f, 1.0, 2.0, 1e-15).unwrap();
        let b = newton_bisect(|x| (f(x), df(x)), 1.0, 2.0, 1e-15).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn bracket_expansion() {
        let hi = expand_bracket(|x: f64| x - 37.0, 0.0, 1.0, 2.0).unwrap();
        assert!(hi >= 37.0);
    }

    #[test]
    fn works_in_f32() {
        let r = bisect(|x: f32| x * x - 2.0, 0.0, 2.0, 1e-6).unwrap();
        assert!((r - 2f32.sqrt()).abs() < 1e-5);
    }
}
