//! Floating-point scalar abstraction used by every numerical kernel.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type backing complex matrices: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant (tolerance, random draw) into `T`.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable in scalar type")
}

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(real(re), real(im))
}

/// `e^{2πi·exponent/order}`.
pub fn root_of_unity<T: Real>(exponent: i64, order: u32) -> Complex<T> {
    let order = i64::from(order.max(1));
    let k = exponent.rem_euclid(order);
    // exact values at the quarter turns keep small examples free of rounding noise
    if (4 * k) % order == 0 {
        return match (4 * k) / order {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
    }
    let theta = T::TAU() * real::<T>(k as f64) / real::<T>(order as f64);
    Complex::new(theta.cos(), theta.sin())
}

/// Rounds to the given number of decimals as an integer key; `-0` and `0` collapse.
pub fn round_key<T: Real>(x: T, decimals: i32) -> i64 {
    let scaled = x.to_f64().unwrap_or(0.0) * 10f64.powi(decimals);
    scaled.round() as i64
}

/// Rounds for display and serialization, mapping `-0.0` to `0.0`.
pub fn round_display<T: Real>(x: T, decimals: i32) -> f64 {
    let p = 10f64.powi(decimals);
    let v = (x.to_f64().unwrap_or(0.0) * p).round() / p;
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        let i: Complex<f64> = root_of_unity(1, 4);
        assert_eq!(i, Complex::new(0.0, 1.0));
        let m: Complex<f64> = root_of_unity(-2, 4);
        assert_eq!(m, Complex::new(-1.0, 0.0));
        let one: Complex<f32> = root_of_unity(6, 6);
        assert_eq!(one, Complex::new(1.0, 0.0));
    }

    #[test]
    fn generic_roots_have_unit_modulus() {
        for k in 0..12 {
            let z: Complex<f64> = root_of_unity(k, 12);
            assert!((z.norm() - 1.0).abs() < 1e-15);
            let w: Complex<f64> = root_of_unity(k * 12, 12);
            assert_eq!(w, Complex::new(1.0, 0.0));
        }
    }

    #[test]
    fn rounding_collapses_negative_zero() {
        assert_eq!(round_key(-1e-12f64, 9), 0);
        assert_eq!(round_display(-1e-13f64, 9).to_bits(), 0.0f64.to_bits());
    }
}
