//! Coding of the rotation by 1 on a circle of circumference α + 1.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::goldenfield::G;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SturmianError {
    #[error("alpha must be positive")]
    NonPositive,
    #[error("complexity needs an irrational alpha, got {0}")]
    Rational(String),
    #[error("empty range {0}..{1}")]
    EmptyRange(i64, i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bead {
    B,
    R,
}

impl Bead {
    pub fn as_char(self) -> char {
        match self {
            Bead::B => 'B',
            Bead::R => 'R',
        }
    }
}

/// Blue arc [0, α), red arc [α, α + 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleCoding {
    pub alpha: G,
}

impl CircleCoding {
    pub fn new(alpha: G) -> Result<Self, SturmianError> {
        if alpha.signum() <= 0 {
            return Err(SturmianError::NonPositive);
        }
        Ok(CircleCoding { alpha })
    }

    pub fn golden() -> Self {
        CircleCoding { alpha: G::phi() }
    }

    pub fn circumference(&self) -> G {
        &self.alpha + &G::one()
    }

    fn reduce(&self, x: &G) -> G {
        let c = self.circumference();
        let k = (x / &c).floor();
        x - &(&G::from_bigint(&k) * &c)
    }

    pub fn color_at(&self, x: &G) -> Bead {
        if self.reduce(x) < self.alpha {
            Bead::B
        } else {
            Bead::R
        }
    }

    /// Colors of the beads lo, lo+1, …, hi.
    pub fn code_necklace(&self, lo: i64, hi: i64) -> Result<Vec<Bead>, SturmianError> {
        if lo > hi {
            return Err(SturmianError::EmptyRange(lo, hi));
        }
        Ok((lo..=hi).map(|n| self.color_at(&G::from_int(n))).collect())
    }

    /// Arcs of the n-fold refinement ⋀_{j<n} R^{−j}{blue, red}, as sorted
    /// cut points on [0, α + 1).
    fn cuts(&self, n: usize) -> Vec<G> {
        let mut s = BTreeSet::new();
        s.insert(G::zero());
        s.insert(self.alpha.clone());
        for j in 0..n as i64 {
            s.insert(self.reduce(&G::from_int(-j)));
            s.insert(self.reduce(&(&self.alpha - &G::from_int(j))));
        }
        s.into_iter().collect()
    }

    /// Words of length n coding the arcs of the refinement.
    pub fn allowed_factors(&self, n: usize) -> Result<BTreeSet<Vec<Bead>>, SturmianError> {
        if self.alpha.is_rational() {
            return Err(SturmianError::Rational(self.alpha.to_string()));
        }
        if n == 0 {
            return Ok(std::iter::once(Vec::new()).collect());
        }
        let cuts = self.cuts(n);
        let c = self.circumference();
        let half = G::from_ratio(1, 2);
        let mut out = BTreeSet::new();
        for i in 0..cuts.len() {
            let hi = if i + 1 < cuts.len() {
                cuts[i + 1].clone()
            } else {
                c.clone()
            };
            let mid = (&cuts[i] + &hi) * &half;
            let w: Vec<Bead> = (0..n as i64)
                .map(|j| self.color_at(&(&mid + &G::from_int(j))))
                .collect();
            out.insert(w);
        }
        Ok(out)
    }

    pub fn complexity(&self, n: usize) -> Result<usize, SturmianError> {
        self.allowed_factors(n).map(|s| s.len())
    }

    /// Proportion of B over lo..=hi.
    pub fn blue_frequency(&self, lo: i64, hi: i64) -> Result<f64, SturmianError> {
        let s = self.code_necklace(lo, hi)?;
        Ok(s.iter().filter(|&&b| b == Bead::B).count() as f64 / s.len() as f64)
    }
}

pub fn to_string(beads: &[Bead]) -> String {
    beads.iter().map(|b| b.as_char()).collect()
}

/// Distinct length-n factors of a finite word.
pub fn scan_factors(beads: &[Bead], n: usize) -> BTreeSet<Vec<Bead>> {
    if n == 0 {
        return std::iter::once(Vec::new()).collect();
    }
    beads.windows(n).map(|w| w.to_vec()).collect()
}
