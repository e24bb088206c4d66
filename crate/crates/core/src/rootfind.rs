//! Bracketing root finders on scalar functions that may be undefined at
//! some arguments (`None`).

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Bisection on a sign change `f(lo) · f(hi) < 0`, to an interval of width
/// `xtol`. Returns `None` if `f` becomes undefined inside the bracket.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<f64>
where
    F: FnMut(f64) -> Option<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    while (hi - lo).abs() > xtol {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section search for a minimum of `f` in `[lo, hi]`. Returns the
/// abscissa and value of the best point seen.
pub fn golden_min<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> Option<f64>,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (hi - lo).abs() > xtol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Some(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}
