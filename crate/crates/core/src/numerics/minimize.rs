use crate::scalar::Real;

/// Location and value of a minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub x: T,
    pub value: T,
}

fn inv_phi<T: Real>() -> T {
    (T::int(5).sqrt() - T::one()) / T::int(2)
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
///
/// Runs until the bracket is narrower than `tol` or stops shrinking.
pub fn golden_section<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T) -> Minimum<T> {
    let r = inv_phi::<T>();
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..500 {
        if (b - a).abs() <= tol {
            break;
        }
        let width = b - a;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if !(b - a < width) {
            break;
        }
    }
    if fc <= fd {
        Minimum { x: c, value: fc }
    } else {
        Minimum { x: d, value: fd }
    }
}

/// Minimizes `f` over `x > 0` by scanning a log-spaced grid on `[lo, hi]`
/// and refining the best cell with golden-section search in `ln x`.
///
/// If the best grid point sits on an end of the range the range is widened
/// (by a factor 1e3 on that side) a bounded number of times.
pub fn minimize_on_log_scale<T: Real>(
    mut f: impl FnMut(T) -> T,
    lo: T,
    hi: T,
    samples: usize,
    tol: T,
) -> Minimum<T> {
    let samples = samples.max(5);
    let (mut llo, mut lhi) = (lo.ln(), hi.ln());
    let widen = T::lit(1e3).ln();
    let mut g = |u: T| f(u.exp());
    for _ in 0..8 {
        let step = (lhi - llo) / T::from_usize(samples - 1).unwrap();
        let mut best = 0;
        let mut best_val = T::infinity();
        for i in 0..samples {
            let u = llo + step * T::from_usize(i).unwrap();
            let v = g(u);
            if v < best_val {
                best_val = v;
                best = i;
            }
        }
        if best == 0 {
            llo = llo - widen;
            continue;
        }
        if best == samples - 1 {
            lhi = lhi + widen;
            continue;
        }
        let a = llo + step * T::from_usize(best - 1).unwrap();
        let b = llo + step * T::from_usize(best + 1).unwrap();
        let m = golden_section(&mut g, a, b, tol);
        return Minimum {
            x: m.x.exp(),
            value: m.value,
        };
    }
    let m = golden_section(&mut g, llo, lhi, tol);
    Minimum {
        x: m.x.exp(),
        value: m.value,
    }
}

/// Downhill line minimization of `f` from `x0` inside `[lo, hi]`: steps of
/// growing size bracket a minimum, golden-section refines it.
fn line_minimize<T: Real>(f: &mut impl FnMut(T) -> T, x0: T, step: T, lo: T, hi: T, tol: T) -> Minimum<T> {
    let clamp = |x: T| x.max(lo).min(hi);
    let f0 = f(x0);
    let mut dir = T::one();
    let mut h = step;
    let mut x1 = clamp(x0 + h);
    let mut f1 = f(x1);
    if f1 > f0 {
        dir = -T::one();
        x1 = clamp(x0 - h);
        f1 = f(x1);
        if f1 > f0 {
            let m = golden_section(&mut *f, clamp(x0 - h), clamp(x0 + h), tol);
            return if m.value <= f0 { m } else { Minimum { x: x0, value: f0 } };
        }
    }
    let mut prev = x0;
    let mut cur = x1;
    let mut fcur = f1;
    for _ in 0..200 {
        h = h * T::int(2);
        let next = clamp(cur + dir * h);
        if next == cur {
            break;
        }
        let fnext = f(next);
        if fnext > fcur {
            let m = golden_section(&mut *f, prev, next, tol);
            return if m.value <= fcur { m } else { Minimum { x: cur, value: fcur } };
        }
        prev = cur;
        cur = next;
        fcur = fnext;
    }
    Minimum { x: cur, value: fcur }
}

/// Coordinate descent with golden-section line searches on each axis plus a
/// pattern move along the last sweep's displacement. Box constraints are
/// `bounds[k] = (lo, hi)`; `f` may return `+inf` outside its domain.
pub fn coordinate_descent_2d<T: Real>(
    mut f: impl FnMut(T, T) -> T,
    start: (T, T),
    bounds: [(T, T); 2],
    tol: T,
    max_sweeps: usize,
) -> (T, T, T) {
    let (mut x, mut y) = start;
    let mut fx = f(x, y);
    let mut step = [T::lit(0.1), T::lit(0.05)];
    for _ in 0..max_sweeps {
        let (x_old, y_old, f_old) = (x, y, fx);
        let m = line_minimize(&mut |u| f(u, y), x, step[0], bounds[0].0, bounds[0].1, tol);
        if m.value <= fx {
            step[0] = ((m.x - x).abs() * T::int(2)).max(tol * T::int(10));
            x = m.x;
            fx = m.value;
        }
        let m = line_minimize(&mut |v| f(x, v), y, step[1], bounds[1].0, bounds[1].1, tol);
        if m.value <= fx {
            step[1] = ((m.x - y).abs() * T::int(2)).max(tol * T::int(10));
            y = m.x;
            fx = m.value;
        }
        let (dx, dy) = (x - x_old, y - y_old);
        let len = (dx * dx + dy * dy).sqrt();
        if len > T::zero() {
            let (ux, uy) = (dx / len, dy / len);
            let (bx, by) = (x, y);
            let mut along = |s: T| {
                let (px, py) = (bx + s * ux, by + s * uy);
                if px < bounds[0].0 || px > bounds[0].1 || py < bounds[1].0 || py > bounds[1].1 {
                    T::infinity()
                } else {
                    f(px, py)
                }
            };
            let m = line_minimize(&mut along, T::zero(), len, -T::int(1000), T::int(1000), tol);
            if m.value < fx {
                x = bx + m.x * ux;
                y = by + m.x * uy;
                fx = m.value;
            }
        }
        if (f_old - fx).abs() <= T::epsilon() * fx.abs() && len <= tol {
            break;
        }
    }
    (x, y, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let m = golden_section(|x: f64| (x - 1.3).powi(2) + 2.0, -4.0, 5.0, 1e-12);
        assert!((m.x - 1.3).abs() < 1e-6);
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn log_scale_minimum_outside_initial_range() {
        let m = minimize_on_log_scale(|x: f64| (x.ln() - 9.0).powi(2), 1e-2, 1e2, 21, 1e-12);
        assert!((m.x.ln() - 9.0).abs() < 1e-5);
    }

    #[test]
    fn coordinate_descent_on_rotated_valley() {
        let f = |x: f64, y: f64| {
            let (u, v) = (x + y - 1.0, x - y - 0.2);
            u * u + 50.0 * v * v
        };
        let (x, y, v) = coordinate_descent_2d(f, (3.0, -2.0), [(-10.0, 10.0), (-10.0, 10.0)], 1e-12, 2000);
        assert!((x - 0.6).abs() < 1e-6 && (y - 0.4).abs() < 1e-6, "{x} {y}");
        assert!(v < 1e-12);
    }
}
