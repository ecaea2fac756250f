//! Points of complex n-space in log-polar form.
//!
//! A point is stored as one log-modulus and one argument per coordinate.
//! A log-modulus of `-inf` encodes an exactly zero coordinate, so points on
//! the coordinate hyperplanes are represented without rounding. Arguments are
//! normalized to `[0, 2*pi)`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LogSupportError;

const TAU: f64 = std::f64::consts::TAU;

/// A point of complex n-space in log-polar coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoint {
    logmod: Vec<f64>,
    arg: Vec<f64>,
}

fn normalize_arg(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can return TAU when a is a tiny negative number
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl CPoint {
    /// Builds a point from log-moduli and arguments. `-inf` log-moduli are
    /// allowed (zero coordinates); `+inf` and NaN are rejected.
    pub fn new(logmod: Vec<f64>, arg: Vec<f64>) -> Result<Self, LogSupportError> {
        if logmod.len() != arg.len() {
            return Err(LogSupportError::DimensionMismatch {
                expected: logmod.len(),
                got: arg.len(),
            });
        }
        for (j, &m) in logmod.iter().enumerate() {
            if m.is_nan() || m == f64::INFINITY {
                return Err(LogSupportError::ZeroCoordinate(j));
            }
        }
        let arg = arg.into_iter().map(normalize_arg).collect();
        Ok(CPoint { logmod, arg })
    }

    /// Point with the given log-moduli and zero arguments.
    pub fn from_logmod(logmod: Vec<f64>) -> Self {
        let arg = vec![0.0; logmod.len()];
        CPoint { logmod, arg }
    }

    /// Point with all coordinates equal to the same positive modulus.
    pub fn diagonal(n: usize, modulus: f64) -> Self {
        CPoint::from_logmod(vec![modulus.ln(); n])
    }

    /// Builds a point from complex coordinates; zero coordinates map to
    /// `-inf` log-modulus exactly.
    pub fn from_complex(z: &[Complex64]) -> Self {
        let logmod = z.iter().map(|c| c.norm().ln()).collect();
        let arg = z.iter().map(|c| normalize_arg(c.arg())).collect();
        CPoint { logmod, arg }
    }

    pub fn dim(&self) -> usize {
        self.logmod.len()
    }

    pub fn logmod(&self) -> &[f64] {
        &self.logmod
    }

    pub fn arg(&self) -> &[f64] {
        &self.arg
    }

    /// Indices of exactly-zero coordinates.
    pub fn zero_coords(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&j| self.logmod[j] == f64::NEG_INFINITY)
            .collect()
    }

    pub fn has_zero_coord(&self) -> bool {
        self.logmod.contains(&f64::NEG_INFINITY)
    }

    /// Coordinatewise product: log-moduli add, arguments add modulo 2*pi.
    pub fn mul(&self, w: &CPoint) -> CPoint {
        debug_assert_eq!(self.dim(), w.dim());
        let logmod = self
            .logmod
            .iter()
            .zip(&w.logmod)
            .map(|(&a, &b)| a + b)
            .collect();
        let arg = self
            .arg
            .iter()
            .zip(&w.arg)
            .map(|(&a, &b)| normalize_arg(a + b))
            .collect();
        CPoint { logmod, arg }
    }

    /// Converts to complex coordinates. Zero coordinates become exact zeros.
    pub fn to_complex(&self) -> Vec<Complex64> {
        self.logmod
            .iter()
            .zip(&self.arg)
            .map(|(&m, &a)| {
                if m == f64::NEG_INFINITY {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(m.exp(), a)
                }
            })
            .collect()
    }

    /// Drops the coordinates listed in `dropped` (sorted, distinct).
    pub fn without_coords(&self, dropped: &[usize]) -> CPoint {
        let keep = |j: &usize| !dropped.contains(j);
        let logmod = (0..self.dim())
            .filter(keep)
            .map(|j| self.logmod[j])
            .collect();
        let arg = (0..self.dim()).filter(keep).map(|j| self.arg[j]).collect();
        CPoint { logmod, arg }
    }

    /// Largest log-modulus (log of the sup-norm of the moduli).
    pub fn log_sup_norm(&self) -> f64 {
        self.logmod
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Serialized form: `{"logmod": [...], "arg": [...]}` where entries are JSON
/// numbers or the literal strings "-inf" (log-moduli only). `arg` may be
/// omitted, defaulting to zeros.
#[derive(Serialize, Deserialize)]
struct CPointRepr {
    logmod: Vec<ExtReal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arg: Option<Vec<f64>>,
}

/// A real number that may be `-inf`, serialized as the string "-inf".
struct ExtReal(f64);

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(ExtReal(x)),
            Raw::Str(s) if s == "-inf" => Ok(ExtReal(f64::NEG_INFINITY)),
            Raw::Str(s) => Err(D::Error::custom(format!(
                "expected a number or \"-inf\", got {s:?}"
            ))),
        }
    }
}

impl Serialize for CPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = CPointRepr {
            logmod: self.logmod.iter().map(|&x| ExtReal(x)).collect(),
            arg: if self.arg.iter().all(|&a| a == 0.0) {
                None
            } else {
                Some(self.arg.clone())
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CPointRepr::deserialize(d)?;
        let logmod: Vec<f64> = repr.logmod.into_iter().map(|x| x.0).collect();
        let arg = repr.arg.unwrap_or_else(|| vec![0.0; logmod.len()]);
        CPoint::new(logmod, arg).map_err(D::Error::custom)
    }
}
