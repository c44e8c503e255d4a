//! Exact-arity vector arithmetic on ℝⁿ: dot product, Euclidean norm and
//! metric, and convex combinations.
//!
//! All operations are pure and return raw values; tolerance decisions live
//! in [`crate::checker`]. Dimension mismatches are hard errors, never
//! broadcast.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fixed-dimension point of ℝⁿ. Coordinates are finite f64 and the
/// dimension is at least one; both are enforced at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Vector { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dim must be positive");
        Vector {
            coords: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }

    fn check_dims(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Dot product Σᵢ uᵢvᵢ, summed in left-to-right index order so that
    /// results are deterministic and operand swap is bit-identical.
    pub fn dot(&self, other: &Vector) -> Result<f64> {
        self.check_dims(other)?;
        let mut sum = 0.0;
        for i in 0..self.dim() {
            sum += self.coords[i] * other.coords[i];
        }
        Ok(sum)
    }

    /// ‖v‖² = ⟨v,v⟩, computed without a sqrt round-trip.
    pub fn norm_sq(&self) -> f64 {
        self.dot(self).expect("self-dot never mismatches")
    }

    /// Euclidean norm ‖v‖ = √⟨v,v⟩.
    pub fn eu_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Squared Euclidean metric ‖x−y‖².
    pub fn metric_sq(&self, other: &Vector) -> Result<f64> {
        Ok(self.sub(other)?.norm_sq())
    }

    /// Euclidean metric d(x,y) = ‖x−y‖.
    pub fn eu_metric(&self, other: &Vector) -> Result<f64> {
        Ok(self.metric_sq(other)?.sqrt())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_dims(other)?;
        Ok(Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_dims(other)?;
        Ok(Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, a: f64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| a * c).collect(),
        }
    }

    /// αx + (1−α)y for α ∈ [0,1].
    pub fn convex_combo(alpha: f64, x: &Vector, y: &Vector) -> Result<Vector> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange { alpha });
        }
        x.scale(alpha).add(&y.scale(1.0 - alpha))
    }
}
