//! Complex helpers on top of `num_complex::Complex64`.
//!
//! All multivalued functions use the principal branch with the cut on the
//! negative real axis: `sqrt`, `ln` and `powf`/`powc` from `num_complex`
//! already follow that convention.

pub use num_complex::Complex64;

/// Complex number carrier used throughout transforms and special functions.
pub type ComplexValue = Complex64;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    if z.norm() > 0.5 {
        return z.exp() - 1.0;
    }
    let (s, co) = z.im.sin_cos();
    let ea = z.re.exp_m1();
    // e^a cos b - 1 = expm1(a) cos b - 2 sin^2(b/2)
    let half = (0.5 * z.im).sin();
    Complex64::new(ea * co - 2.0 * half * half, (ea + 1.0) * s)
}

#[inline]
pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Relative distance `|a - b| / max(|b|, floor)`.
pub fn rel_diff(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}
