use crate::error::{Error, Result};

/// Compact interval `[lo, hi]` of the real line; `lo == hi` is a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval1D {
    lo: f64,
    hi: f64,
}

impl Interval1D {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi < lo {
            return Err(Error::DegenerateInput(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(c: f64) -> Self {
        Self { lo: c, hi: c }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn diameter(&self) -> f64 {
        self.hi - self.lo
    }

    /// The reflection `{-x | x ∈ X}`.
    pub fn reflect(&self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }

    /// Hausdorff distance.
    pub fn hausdorff(&self, other: &Self) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }
}
