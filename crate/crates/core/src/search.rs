//! Scalar extremum and root searches.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximisation of a unimodal `f` on `[a, b]` until the
/// bracket is below `rel_tol` relative to its midpoint.
pub fn golden_section_max<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Points spaced evenly in log over `[a, b]`, `per_decade` per decade and at
/// least 3 in total, both ends included.
pub fn log_grid(a: f64, b: f64, per_decade: usize) -> Vec<f64> {
    let decades = (b / a).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(2) + 1;
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Maximum of `f` over `[a, b]`: log pre-scan, then golden-section refinement
/// around the largest sample. Fails if the largest sample is a window edge.
pub fn bracketed_max<F>(
    mut f: F,
    a: f64,
    b: f64,
    per_decade: usize,
    rel_tol: f64,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = log_grid(a, b, per_decade);
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > values[best] { i } else { best });
    if best == 0 || best + 1 == grid.len() {
        return Err(Error::NoInteriorMaximum(format!(
            "largest sample on the window edge at {} of [{a}, {b}]",
            grid[best]
        )));
    }
    golden_section_max(f, grid[best - 1], grid[best + 1], rel_tol)
}

/// Bisection for a sign change of `f` on `[a, b]` to `rel_tol` relative.
pub fn bisect_root<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (a, b);
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot(format!(
            "no sign change on [{a}, {b}] ({f_lo}, {f_hi})"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= rel_tol * mid.abs() {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) =
            golden_section_max(|x| Ok(-(x - 1.7) * (x - 1.7) + 3.0), 0.0, 5.0, 1e-7).unwrap();
        assert!((x - 1.7).abs() < 1e-6);
        assert!((fx - 3.0).abs() < 1e-14);
    }

    #[test]
    fn bracketed_max_rejects_edge() {
        assert!(matches!(
            bracketed_max(Ok, 1.0, 10.0, 21, 1e-8),
            Err(Error::NoInteriorMaximum(_))
        ));
        let (x, _) =
            bracketed_max(|x: f64| Ok(x * (-x / 3.0).exp()), 0.1, 100.0, 21, 1e-9).unwrap();
        assert!((x - 3.0).abs() < 1e-7);
    }

    #[test]
    fn log_grid_ends() {
        let g = log_grid(0.2, 5.0, 21);
        assert_eq!(g[0], 0.2);
        assert_eq!(*g.last().unwrap(), 5.0);
        assert!(g.len() >= 30);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bisection() {
        let r = bisect_root(|x| Ok(x * x - 2.0), 0.0, 3.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect_root(|x| Ok(x * x + 1.0), 0.0, 3.0, 1e-10).is_err());
    }
}
