//! Slow arbitrary-precision evaluation of w(z), used as a test oracle.
//!
//! `w(z) = exp(-z^2) * (1 + 2i/sqrt(pi) * sum_n z^(2n+1) / (n! (2n+1)))`,
//! with both the exponential and the erf series summed term by term in
//! binary fixed point. Enough guard bits are carried to absorb the
//! cancellation of terms as large as `exp(|z|^2)`.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::{Float, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MAX_ABS_Z: f64 = 20.0;
const MAX_DIGITS: u32 = 30;

/// Fixed-point complex number `(re + i im) / 2^bits`.
#[derive(Clone)]
struct FixedComplex {
    re: BigInt,
    im: BigInt,
}

struct Fixed {
    bits: u64,
}

impl Fixed {
    fn one(&self) -> BigInt {
        BigInt::from(1) << self.bits
    }

    fn fixed(&self, v: f64) -> BigInt {
        if v == 0.0 {
            return BigInt::zero();
        }
        let (mantissa, exponent, sign) = v.integer_decode();
        let m = BigInt::from(mantissa);
        let shift = exponent as i64 + self.bits as i64;
        let mag = if shift >= 0 {
            m << shift as u64
        } else {
            m >> (-shift) as u64
        };
        if sign < 0 {
            -mag
        } else {
            mag
        }
    }

    fn to_f64(&self, v: &BigInt) -> f64 {
        if v.is_zero() {
            return 0.0;
        }
        let negative = v.sign() == Sign::Minus;
        let mag = v.abs();
        let len = mag.bits();
        let drop = len.saturating_sub(64);
        let top = (mag >> drop).to_f64().unwrap_or(f64::NAN);
        let exponent = drop as i64 - self.bits as i64;
        let value = scale_by_pow2(top, exponent);
        if negative {
            -value
        } else {
            value
        }
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    fn cmul(&self, a: &FixedComplex, b: &FixedComplex) -> FixedComplex {
        FixedComplex {
            re: self.mul(&a.re, &b.re) - self.mul(&a.im, &b.im),
            im: self.mul(&a.re, &b.im) + self.mul(&a.im, &b.re),
        }
    }

    /// pi by Machin's formula.
    fn pi(&self) -> BigInt {
        let guard = 32;
        let inner = Fixed {
            bits: self.bits + guard,
        };
        let atan_inv = |n: i64| -> BigInt {
            // atan(1/n) = sum (-1)^k / ((2k+1) n^(2k+1))
            let n2 = BigInt::from(n * n);
            let mut power = inner.one() / BigInt::from(n);
            let mut sum = BigInt::zero();
            let mut k: i64 = 0;
            while !power.is_zero() {
                let term = &power / BigInt::from(2 * k + 1);
                if k % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
                power /= &n2;
                k += 1;
            }
            sum
        };
        let pi = BigInt::from(16) * atan_inv(5) - BigInt::from(4) * atan_inv(239);
        pi >> guard
    }

    fn sqrt(&self, v: &BigInt) -> BigInt {
        (v << self.bits).sqrt()
    }
}

fn scale_by_pow2(v: f64, exponent: i64) -> f64 {
    // Split the scaling so intermediate powers stay representable.
    let mut out = v;
    let mut e = exponent;
    while e > 1000 {
        out *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        out *= 2f64.powi(-1000);
        e += 1000;
    }
    out * 2f64.powi(e as i32)
}

/// High-precision w(z) for `|z| <= 20`, correct to about `digits` significant
/// digits before the final rounding to double precision.
pub fn faddeeva_w_reference(z: Complex64, digits: u32) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("faddeeva_w_reference argument"));
    }
    if z.norm() > MAX_ABS_Z {
        return Err(Error::OutOfDomain(format!(
            "reference w(z) needs |z| <= {MAX_ABS_Z}, got {}",
            z.norm()
        )));
    }
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::OutOfDomain(format!(
            "digits must be in 1..={MAX_DIGITS}, got {digits}"
        )));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }

    let r2 = z.norm_sqr();
    let guard = (3.0 * r2 * std::f64::consts::LOG2_E).ceil() as u64 + 96;
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + guard;
    let fx = Fixed { bits };

    let zf = FixedComplex {
        re: fx.fixed(z.re),
        im: fx.fixed(z.im),
    };
    let z2 = fx.cmul(&zf, &zf);
    let neg_z2 = FixedComplex {
        re: -z2.re.clone(),
        im: -z2.im.clone(),
    };

    // exp(-z^2) = sum (-z^2)^k / k!
    let mut gauss = FixedComplex {
        re: fx.one(),
        im: BigInt::zero(),
    };
    let mut term = gauss.clone();
    let mut k: u64 = 1;
    loop {
        term = fx.cmul(&term, &neg_z2);
        term.re /= k;
        term.im /= k;
        if term.re.is_zero() && term.im.is_zero() && k as f64 > r2 {
            break;
        }
        gauss.re += &term.re;
        gauss.im += &term.im;
        k += 1;
    }

    // sum z^(2n+1) / (n! (2n+1))
    let mut power = zf.clone(); // z^(2n+1) / n!
    let mut series = zf.clone();
    let mut n: u64 = 1;
    loop {
        power = fx.cmul(&power, &z2);
        power.re /= n;
        power.im /= n;
        if power.re.is_zero() && power.im.is_zero() && n as f64 > r2 {
            break;
        }
        let denom = 2 * n + 1;
        series.re += &power.re / denom;
        series.im += &power.im / denom;
        n += 1;
    }

    // 1 + 2i/sqrt(pi) * series
    let sqrt_pi = fx.sqrt(&fx.pi());
    let two_over_sqrt_pi = (fx.one() << 1u32 << bits) / sqrt_pi;
    let scaled_re = fx.mul(&series.re, &two_over_sqrt_pi);
    let scaled_im = fx.mul(&series.im, &two_over_sqrt_pi);
    let bracket = FixedComplex {
        re: fx.one() - scaled_im,
        im: scaled_re,
    };
    let result = fx.cmul(&gauss, &bracket);
    Ok(Complex64::new(fx.to_f64(&result.re), fx.to_f64(&result.im)))
}
