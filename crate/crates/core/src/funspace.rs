//! Finite-dimensional Banach function spaces `l^q(mu)` with their associate
//! spaces, and the explicit duality extremizer.
//!
//! At finite dimension the associate space of `l^q(mu)` is `l^(q')(mu)` with
//! the integral pairing, the norming identity holds with an attained
//! supremum, and the almost-extremizer of the abstract argument is exact:
//! for `f >= 0` and `r in (1, oo)`, the map `h_s = f_s^(q-1) ||f||^(r-q)`
//! satisfies `||h||_(q') = ||f||^(r-1)` and `<f, h> = ||f||^r`.

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::math;

/// `l^q(mu)` on `dim` coordinates with positive measure weights `mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpaceDescriptor {
    pub q: f64,
    pub dim: usize,
    pub mu: Vec<f64>,
}

impl FunctionSpaceDescriptor {
    pub fn new(q: f64, dim: usize) -> Result<Self> {
        Self::with_measure(q, dim, vec![1.0; dim])
    }

    pub fn with_measure(q: f64, dim: usize, mu: Vec<f64>) -> Result<Self> {
        if !(q > 1.0 && q.is_finite()) {
            return Err(invalid("function space exponent must lie in (1, infinity)"));
        }
        if dim == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        if mu.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: mu.len(),
            });
        }
        if mu.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(invalid("measure weights must be positive and finite"));
        }
        Ok(FunctionSpaceDescriptor { q, dim, mu })
    }

    /// Associate exponent `q'` with `1/q + 1/q' = 1`.
    pub fn q_conj(&self) -> f64 {
        math::conjugate(self.q)
    }

    fn check_dim(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: f.len(),
            });
        }
        Ok(())
    }

    /// `||f|| = (sum |f_s|^q mu_s)^(1/q)`.
    pub fn norm(&self, f: &[f64]) -> Result<f64> {
        self.check_dim(f)?;
        Ok(self.norm_with_exponent(f, self.q))
    }

    /// Associate-space norm `||h||_(q') = (sum |h_s|^(q') mu_s)^(1/q')`.
    pub fn dual_norm(&self, h: &[f64]) -> Result<f64> {
        self.check_dim(h)?;
        Ok(self.norm_with_exponent(h, self.q_conj()))
    }

    fn norm_with_exponent(&self, f: &[f64], e: f64) -> f64 {
        let s: f64 = f
            .iter()
            .zip(&self.mu)
            .map(|(&v, &m)| math::pow(math::abs(v), e) * m)
            .sum();
        math::root(s, e)
    }

    /// Integral pairing `<f, h> = sum f_s h_s mu_s`.
    pub fn pairing(&self, f: &[f64], h: &[f64]) -> Result<f64> {
        self.check_dim(f)?;
        self.check_dim(h)?;
        Ok(f
            .iter()
            .zip(h)
            .zip(&self.mu)
            .map(|((&a, &b), &m)| a * b * m)
            .sum())
    }

    /// The exact duality extremizer `h_s = f_s^(q-1) ||f||^(r-q)` for `f >= 0`.
    ///
    /// Then `||h||_(q') = ||f||^(r-1)` and `<f, h> = ||f||^r`, both with
    /// equality. By convention `f = 0` yields `h = 0`.
    pub fn extremizer(&self, f: &[f64], r: f64) -> Result<Vec<f64>> {
        self.check_dim(f)?;
        if !(r > 1.0 && r.is_finite()) {
            return Err(invalid("extremizer exponent must lie in (1, infinity)"));
        }
        if f.iter().any(|&v| v < 0.0) {
            return Err(invalid("extremizer requires a nonnegative argument"));
        }
        let nf = self.norm(f)?;
        if nf == 0.0 {
            return Ok(vec![0.0; self.dim]);
        }
        let scale = math::pow(nf, r - self.q);
        Ok(f
            .iter()
            .map(|&v| {
                if v == 0.0 {
                    0.0
                } else {
                    math::pow(v, self.q - 1.0) * scale
                }
            })
            .collect())
    }
}
