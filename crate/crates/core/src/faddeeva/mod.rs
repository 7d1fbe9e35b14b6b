//! The Faddeeva function w(z) = exp(-z^2) erfc(-iz).
//!
//! The first quadrant is covered by three regions in the scaled coordinates
//! `(|x| / 6.3, |y| / 4.4)`:
//!
//! * inside the small ellipse `rho^2 < 0.085264`, a power series for
//!   `exp(z^2) erfc(...)` multiplied back by `exp(-z^2)`;
//! * in the annulus up to `rho^2 = 1`, the Laplace continued fraction shifted
//!   up by `h > 0` and combined with a truncated Taylor expansion;
//! * outside, the plain continued fraction.
//!
//! The remaining quadrants follow from `w(-conj z) = conj w(z)` and
//! `w(z) = 2 exp(-z^2) - w(-z)`.

mod reference;

pub use reference::faddeeva_w_reference;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 2 / sqrt(pi).
const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Region layout, frozen in one place so the continuity tests can straddle it.
pub mod regions {
    /// Real-axis scale of the region ellipses.
    pub const SCALE_RE: f64 = 6.3;
    /// Imaginary-axis scale of the region ellipses.
    pub const SCALE_IM: f64 = 4.4;
    /// Squared scaled radius below which the power series is used.
    pub const SERIES_RHO2: f64 = 0.085264;
    /// Squared scaled radius above which the plain continued fraction is used.
    pub const CONTINUED_FRACTION_RHO2: f64 = 1.0;

    /// Which evaluation region a point of the first quadrant falls in.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Region {
        PowerSeries,
        ShiftedFraction,
        ContinuedFraction,
    }

    pub fn classify(x: f64, y: f64) -> Region {
        let xs = x.abs() / SCALE_RE;
        let ys = y.abs() / SCALE_IM;
        let rho2 = xs * xs + ys * ys;
        if rho2 < SERIES_RHO2 {
            Region::PowerSeries
        } else if rho2 > CONTINUED_FRACTION_RHO2 {
            Region::ContinuedFraction
        } else {
            Region::ShiftedFraction
        }
    }
}

/// Validated entry point: rejects non-finite input and reports overflow
/// (deep in the lower half-plane `|w|` grows like `exp(y^2 - x^2)`).
pub fn faddeeva_w(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("faddeeva_w argument"));
    }
    let value = w(z);
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::OutOfDomain(format!(
            "w({z}) overflows double precision"
        )))
    }
}

/// Unchecked kernel; non-finite input propagates NaN.
pub fn w(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let xa = x.abs();
    let ya = y.abs();
    let xquad = xa * xa - ya * ya;
    let yquad = 2.0 * xa * ya;

    let xs = xa / regions::SCALE_RE;
    let ys = ya / regions::SCALE_IM;
    let rho2 = xs * xs + ys * ys;

    let first = if rho2 < regions::SERIES_RHO2 {
        power_series(xa, ya, xquad, yquad, rho2.sqrt(), ys)
    } else {
        continued_fraction(xa, ya, rho2, ys)
    };

    if y >= 0.0 {
        if x < 0.0 {
            first.conj()
        } else {
            first
        }
    } else {
        // 2 exp(-z^2) with the sign of 2xy folded in below.
        let scale = 2.0 * (-xquad).exp();
        let twice_gauss = Complex64::new(scale * yquad.cos(), -scale * yquad.sin());
        let out = twice_gauss - first;
        if x > 0.0 {
            out.conj()
        } else {
            out
        }
    }
}

/// Power series around the origin, first quadrant.
fn power_series(xa: f64, ya: f64, xquad: f64, yquad: f64, rho: f64, ys: f64) -> Complex64 {
    let weight = (1.0 - 0.85 * ys) * rho;
    let n = (6.0 + 72.0 * weight).round() as usize;
    let mut j = 2 * n + 1;
    let mut xsum = 1.0 / j as f64;
    let mut ysum = 0.0;
    for i in (1..=n).rev() {
        j -= 2;
        let fi = i as f64;
        let xaux = (xsum * xquad - ysum * yquad) / fi;
        ysum = (xsum * yquad + ysum * xquad) / fi;
        xsum = xaux + 1.0 / j as f64;
    }
    let u1 = -TWO_OVER_SQRT_PI * (xsum * ya + ysum * xa) + 1.0;
    let v1 = TWO_OVER_SQRT_PI * (xsum * xa - ysum * ya);
    let gauss = (-xquad).exp();
    let u2 = gauss * yquad.cos();
    let v2 = -gauss * yquad.sin();
    Complex64::new(u1 * u2 - v1 * v2, u1 * v2 + v1 * u2)
}

/// Laplace continued fraction, optionally shifted by `h` and completed with a
/// Taylor expansion back to the true ordinate. First quadrant.
fn continued_fraction(xa: f64, ya: f64, rho2: f64, ys: f64) -> Complex64 {
    let (h, kapn, nu) = if rho2 > regions::CONTINUED_FRACTION_RHO2 {
        let rho = rho2.sqrt();
        (0.0, 0usize, (3.0 + 1442.0 / (26.0 * rho + 77.0)) as usize)
    } else {
        let weight = (1.0 - ys) * (1.0 - rho2).sqrt();
        (
            1.88 * weight,
            (7.0 + 34.0 * weight).round() as usize,
            (16.0 + 26.0 * weight).round() as usize,
        )
    };
    let shifted = h > 0.0;
    let h2 = 2.0 * h;
    let mut lambda = if shifted { h2.powi(kapn as i32) } else { 0.0 };

    let (mut rx, mut ry) = (0.0, 0.0);
    let (mut sx, mut sy) = (0.0, 0.0);
    for n in (0..=nu).rev() {
        let np1 = (n + 1) as f64;
        let tx = ya + h + np1 * rx;
        let ty = xa - np1 * ry;
        let c = 0.5 / (tx * tx + ty * ty);
        rx = c * tx;
        ry = c * ty;
        if shifted && n <= kapn {
            let t = lambda + sx;
            sx = rx * t - ry * sy;
            sy = ry * t + rx * sy;
            lambda /= h2;
        }
    }
    let (mut u, v) = if shifted {
        (TWO_OVER_SQRT_PI * sx, TWO_OVER_SQRT_PI * sy)
    } else {
        (TWO_OVER_SQRT_PI * rx, TWO_OVER_SQRT_PI * ry)
    };
    if ya == 0.0 {
        u = (-xa * xa).exp();
    }
    Complex64::new(u, v)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn origin_is_one() {
        assert_eq!(w(c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn frozen_values() {
        // 30-digit values from an independent arbitrary-precision evaluation.
        let cases = [
            (c(0.0, 1.0), c(0.427583576155807004410750344491, 0.0)),
            (
                c(1.0, 1.0),
                c(
                    0.304744205256912592457138841070,
                    0.208218938202831627287437347255,
                ),
            ),
            (
                c(3.0, 0.5),
                c(
                    0.037126366054692344667120356287,
                    0.192983755300362088391007598363,
                ),
            ),
            (
                c(-2.0, 0.3),
                c(
                    0.0763959516756421168569804261299,
                    -0.309831107140292696740721831,
                ),
            ),
            (
                c(0.5, -1.5),
                c(
                    0.742007182894863566098327070834,
                    14.8189437029650218761334622241,
                ),
            ),
            (
                c(6.0, 0.01),
                c(
                    0.000163752898896831842852335075241,
                    0.0953959233866014824121220157593,
                ),
            ),
        ];
        for (z, expected) in cases {
            let got = w(z);
            assert!(
                rel(got, expected) < 1e-13,
                "w({z}) = {got}, want {expected}"
            );
        }
    }

    #[test]
    fn large_argument_leading_term() {
        for phase in [0.1, 0.7, 1.3, 1.57, 2.2, 3.0] {
            let z = Complex64::from_polar(50.0, phase);
            let lead = Complex64::i() / (std::f64::consts::PI.sqrt() * z) * (1.0 + 0.5 / (z * z));
            assert!(rel(w(z), lead) < 1e-6);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(faddeeva_w(c(f64::NAN, 0.0)).is_err());
        assert!(faddeeva_w(c(0.0, f64::INFINITY)).is_err());
        assert!(faddeeva_w(c(0.0, -40.0)).is_err());
        assert!(faddeeva_w(c(1.0, -2.0)).is_ok());
    }

    #[test]
    fn region_boundaries_are_continuous() {
        // Both methods evaluated at the same boundary point must agree.
        for k in 0..64 {
            let phi = std::f64::consts::FRAC_PI_2 * (k as f64 + 0.5) / 64.0;
            for rho2 in [regions::SERIES_RHO2, regions::CONTINUED_FRACTION_RHO2] {
                let rho = rho2.sqrt();
                let xa = rho * phi.cos() * regions::SCALE_RE;
                let ya = rho * phi.sin() * regions::SCALE_IM;
                let ys = ya / regions::SCALE_IM;
                let inside = if rho2 == regions::SERIES_RHO2 {
                    power_series(xa, ya, xa * xa - ya * ya, 2.0 * xa * ya, rho, ys)
                } else {
                    continued_fraction(xa, ya, rho2 * (1.0 - 1e-15), ys)
                };
                let outside = continued_fraction(xa, ya, rho2 * (1.0 + 1e-15), ys);
                let d = rel(inside, outside);
                assert!(d <= 1e-12, "jump {d} at phi={phi} rho2={rho2}");
            }
        }
    }

    #[test]
    fn lower_half_plane_matches_reference_across_boundaries() {
        for k in 0..16 {
            let phi = std::f64::consts::FRAC_PI_2 * (k as f64 + 0.5) / 16.0;
            for rho2 in [regions::SERIES_RHO2, regions::CONTINUED_FRACTION_RHO2] {
                for side in [1.0 - 1e-9, 1.0 + 1e-9] {
                    let r = rho2.sqrt() * side;
                    for sign in [1.0, -1.0] {
                        let z = c(
                            sign * r * phi.cos() * regions::SCALE_RE,
                            -r * phi.sin() * regions::SCALE_IM,
                        );
                        let exact = faddeeva_w_reference(z, 20).unwrap();
                        assert!(rel(w(z), exact) <= 1e-12, "z = {z}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(x in -12.0f64..12.0, y in -6.0f64..12.0) {
            let z = c(x, y);
            let lhs = w(-z.conj());
            let rhs = w(z).conj();
            prop_assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(1e-300));
        }

        #[test]
        fn reflection_identity(r in 0.0f64..5.0, phi in -std::f64::consts::PI..std::f64::consts::PI) {
            let z = Complex64::from_polar(r, phi);
            let lhs = w(z) + w(-z);
            let rhs = 2.0 * (-z * z).exp();
            let scale = rhs.norm().max(w(z).norm()).max(w(-z).norm());
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }

        #[test]
        fn bounded_in_upper_half_plane(x in -30.0f64..30.0, y in 0.0f64..30.0) {
            let m = w(c(x, y)).norm();
            prop_assert!(m > 0.0 && m <= 1.0 + 1e-15);
        }
    }
}
