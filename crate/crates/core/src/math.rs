//! Float transcendentals routed through `libm`.
//!
//! Routing everything through `libm` (instead of the platform libm behind
//! `std`) keeps results bit-identical across platforms and toolchains, which
//! the frozen regression fixtures rely on. Callers inside and outside the
//! crate are expected to use these rather than the `std` float methods.

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn cbrt(x: f64) -> f64 {
    libm::cbrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Hölder conjugate `p' = p/(p-1)`.
#[inline]
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// `x^(1/p)` with the convention `0^(1/p) = 0`.
#[inline]
pub fn root(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        pow(x, 1.0 / p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_of_two_is_two() {
        assert_eq!(conjugate(2.0), 2.0);
    }

    #[test]
    fn root_at_zero() {
        assert_eq!(root(0.0, 1.5), 0.0);
        assert!((root(8.0, 3.0) - 2.0).abs() < 1e-14);
    }
}
