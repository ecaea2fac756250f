//! Admissible distance weights for the infimal convolution.
//!
//! A weight is a nonnegative function comparable to the euclidean norm:
//! r * |v| <= mu(v) <= s * |v| with 0 < r <= s. The comparability constants
//! feed the localization radius of the search, so they are computed exactly
//! for the built-in kinds and estimated on sphere samples for custom ones.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::RegularizeError;

type CustomWeight = Arc<dyn Fn(&[Complex64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Euclidean,
    /// max_j w_j |v_j|
    WeightedSup(Vec<f64>),
    Custom(CustomWeight),
}

/// Distance weight with cached euclidean comparability constants.
#[derive(Clone)]
pub struct DistanceFn {
    n: usize,
    kind: Kind,
    r: f64,
    s: f64,
}

impl fmt::Debug for DistanceFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match &self.kind {
            Kind::Euclidean => "euclidean",
            Kind::WeightedSup(_) => "weighted_sup",
            Kind::Custom(_) => "custom",
        };
        f.debug_struct("DistanceFn")
            .field("n", &self.n)
            .field("kind", &name)
            .field("r", &self.r)
            .field("s", &self.s)
            .finish()
    }
}

impl DistanceFn {
    pub fn euclidean(n: usize) -> DistanceFn {
        DistanceFn {
            n,
            kind: Kind::Euclidean,
            r: 1.0,
            s: 1.0,
        }
    }

    pub fn weighted_sup(weights: Vec<f64>) -> Result<DistanceFn, RegularizeError> {
        if weights.is_empty() || weights.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(RegularizeError::BadParameters(
                "sup-norm weights must be positive and finite".into(),
            ));
        }
        // lower constant: worst case spreads mass as 1/w_j^2 across axes
        let r = weights.iter().map(|w| w.powi(-2)).sum::<f64>().powf(-0.5);
        let s = weights.iter().cloned().fold(0.0, f64::max);
        Ok(DistanceFn {
            n: weights.len(),
            kind: Kind::WeightedSup(weights),
            r,
            s,
        })
    }

    /// Wraps an arbitrary weight; comparability constants are estimated on
    /// seeded unit-sphere samples and shaded outward by 10 percent.
    pub fn custom(n: usize, f: CustomWeight) -> Result<DistanceFn, RegularizeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9d15);
        let mut r = f64::INFINITY;
        let mut s: f64 = 0.0;
        let mut tried = 0usize;
        while tried < 2000 {
            let v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            tried += 1;
            let unit: Vec<Complex64> = v.iter().map(|c| c / norm).collect();
            let value = f(&unit);
            if !value.is_finite() || value <= 0.0 {
                return Err(RegularizeError::BadParameters(
                    "custom weight must be positive and finite on the unit sphere".into(),
                ));
            }
            r = r.min(value);
            s = s.max(value);
        }
        Ok(DistanceFn {
            n,
            kind: Kind::Custom(f),
            r: r * 0.9,
            s: s * 1.1,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Lower comparability constant: mu(v) >= r * |v|.
    pub fn r_mu(&self) -> f64 {
        self.r
    }

    /// Upper comparability constant: mu(v) <= s * |v|.
    pub fn s_mu(&self) -> f64 {
        self.s
    }

    pub fn eval(&self, v: &[Complex64]) -> f64 {
        debug_assert_eq!(v.len(), self.n);
        match &self.kind {
            Kind::Euclidean => v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
            Kind::WeightedSup(w) => v
                .iter()
                .zip(w)
                .map(|(c, &wi)| wi * c.norm())
                .fold(0.0, f64::max),
            Kind::Custom(f) => f(v),
        }
    }
}

/// JSON form: {"kind": "euclidean"} or {"kind": "weighted_sup", "weights": [...]}.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceSpec {
    Euclidean,
    WeightedSup { weights: Vec<f64> },
}

impl DistanceSpec {
    pub fn build(self, n: usize) -> Result<DistanceFn, RegularizeError> {
        match self {
            DistanceSpec::Euclidean => Ok(DistanceFn::euclidean(n)),
            DistanceSpec::WeightedSup { weights } => {
                if weights.len() != n {
                    return Err(RegularizeError::BadParameters(format!(
                        "expected {n} weights, got {}",
                        weights.len()
                    )));
                }
                DistanceFn::weighted_sup(weights)
            }
        }
    }
}
