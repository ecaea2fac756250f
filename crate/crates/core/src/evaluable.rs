//! Function objects the operators act on.
//!
//! Everything evaluates on log-polar points and may return `-inf`. Growth
//! metadata ties a function to a polytope whose log-support bounds it from
//! above up to a constant; the bound is checked on samples where needed,
//! never assumed.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::cpoint::CPoint;
use crate::error::FunctionError;
use crate::logsupport;
use crate::polytope::{Polytope, MEMBERSHIP_TOL};

/// Declared growth envelope: u <= (log-support of `polytope`) + `upper_const`,
/// and when `lower_const` is present also u >= log-support + `lower_const`.
#[derive(Debug, Clone)]
pub struct Growth {
    pub polytope: Polytope,
    pub upper_const: f64,
    pub lower_const: Option<f64>,
}

/// A function of n complex variables with values in [-inf, inf).
pub trait Evaluable: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &CPoint) -> f64;
    fn growth(&self) -> Option<&Growth> {
        None
    }
}

/// Shared handle used wherever functions are composed.
pub type EvaluableHandle = Arc<dyn Evaluable>;

/// Piece of a tropical maximum: exponent vector and additive offset.
#[derive(Debug, Clone, Deserialize)]
pub struct TropicalPiece {
    pub a: Vec<f64>,
    pub c: f64,
}

/// Finite maximum of affine functions of the log-moduli, with exponents
/// constrained to the declared polytope.
#[derive(Debug, Clone)]
pub struct Tropical {
    pieces: Vec<TropicalPiece>,
    growth: Growth,
}

impl Tropical {
    pub fn new(polytope: Polytope, pieces: Vec<TropicalPiece>) -> Result<Tropical, FunctionError> {
        if pieces.is_empty() {
            return Err(FunctionError::Invalid(
                "tropical needs at least one piece".into(),
            ));
        }
        for (index, piece) in pieces.iter().enumerate() {
            if piece.a.len() != polytope.dim() {
                return Err(FunctionError::DimensionMismatch {
                    expected: polytope.dim(),
                    got: piece.a.len(),
                });
            }
            if piece.a.iter().any(|&c| !c.is_finite() || c < 0.0) || !piece.c.is_finite() {
                return Err(FunctionError::Invalid(format!(
                    "piece {index} has non-finite or negative data"
                )));
            }
            let residual = polytope.hull_residual(&piece.a);
            if residual > MEMBERSHIP_TOL {
                return Err(FunctionError::ExponentOutsidePolytope { index, residual });
            }
        }
        let upper_const = pieces.iter().map(|p| p.c).fold(f64::NEG_INFINITY, f64::max);
        let growth = Growth {
            polytope,
            upper_const,
            lower_const: None,
        };
        Ok(Tropical { pieces, growth })
    }

    /// The tropical envelope of a polytope: one zero-offset piece per extreme
    /// point. On points without zero coordinates it equals the log-support.
    pub fn envelope(polytope: &Polytope) -> Tropical {
        let pieces = polytope
            .extreme_points()
            .into_iter()
            .map(|a| TropicalPiece { a, c: 0.0 })
            .collect();
        let mut t = Tropical::new(polytope.clone(), pieces).expect("extreme points are members");
        t.growth.lower_const = Some(0.0);
        t
    }

    pub fn pieces(&self) -> &[TropicalPiece] {
        &self.pieces
    }

    /// A finite lower bound when one piece is constant, used by operator
    /// preconditions that want boundedness below.
    pub fn constant_floor(&self) -> Option<f64> {
        self.pieces
            .iter()
            .filter(|p| p.a.iter().all(|&c| c == 0.0))
            .map(|p| p.c)
            .fold(None, |acc, c| Some(acc.map_or(c, |a: f64| a.max(c))))
    }
}

/// Dot product with the zero-times-minus-infinity convention: exponent zero
/// contributes nothing even on a hyperplane.
fn graded_dot(a: &[f64], logmod: &[f64]) -> f64 {
    let mut s = 0.0;
    for (&ai, &m) in a.iter().zip(logmod) {
        if ai != 0.0 {
            if m == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            s += ai * m;
        }
    }
    s
}

impl Evaluable for Tropical {
    fn dim(&self) -> usize {
        self.growth.polytope.dim()
    }

    fn eval(&self, z: &CPoint) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for piece in &self.pieces {
            let v = graded_dot(&piece.a, z.logmod());
            let v = if v == f64::NEG_INFINITY {
                v
            } else {
                v + piece.c
            };
            if v > best {
                best = v;
            }
        }
        best
    }

    fn growth(&self) -> Option<&Growth> {
        Some(&self.growth)
    }
}

/// One monomial of a polynomial: integer exponents and a complex coefficient.
#[derive(Debug, Clone)]
pub struct Monomial {
    pub alpha: Vec<u32>,
    pub coeff: Complex64,
}

/// (1/m) log |p(z)| for a polynomial p whose scaled exponents lie in the
/// declared polytope.
#[derive(Debug, Clone)]
pub struct PolyLog {
    monomials: Vec<Monomial>,
    scale: u32,
    growth: Growth,
}

impl PolyLog {
    pub fn new(
        polytope: Polytope,
        scale: u32,
        monomials: Vec<Monomial>,
    ) -> Result<PolyLog, FunctionError> {
        if scale == 0 {
            return Err(FunctionError::Invalid("scale must be positive".into()));
        }
        if monomials.is_empty() {
            return Err(FunctionError::Invalid(
                "polynomial needs at least one monomial".into(),
            ));
        }
        let mut coeff_sum = 0.0;
        for (index, mono) in monomials.iter().enumerate() {
            if mono.alpha.len() != polytope.dim() {
                return Err(FunctionError::DimensionMismatch {
                    expected: polytope.dim(),
                    got: mono.alpha.len(),
                });
            }
            if !mono.coeff.re.is_finite() || !mono.coeff.im.is_finite() {
                return Err(FunctionError::Invalid(format!(
                    "monomial {index} has a bad coefficient"
                )));
            }
            let scaled: Vec<f64> = mono
                .alpha
                .iter()
                .map(|&e| e as f64 / scale as f64)
                .collect();
            let residual = polytope.hull_residual(&scaled);
            if residual > MEMBERSHIP_TOL {
                return Err(FunctionError::ExponentOutsidePolytope { index, residual });
            }
            coeff_sum += mono.coeff.norm();
        }
        let growth = Growth {
            upper_const: coeff_sum.ln() / scale as f64,
            polytope,
            lower_const: None,
        };
        Ok(PolyLog {
            monomials,
            scale,
            growth,
        })
    }
}

impl Evaluable for PolyLog {
    fn dim(&self) -> usize {
        self.growth.polytope.dim()
    }

    fn eval(&self, z: &CPoint) -> f64 {
        // factor out the largest term log-modulus, then sum phases
        let mut logs = Vec::with_capacity(self.monomials.len());
        let mut top = f64::NEG_INFINITY;
        for mono in &self.monomials {
            let mut lm = mono.coeff.norm().ln();
            let mut phase = mono.coeff.arg();
            for (j, &e) in mono.alpha.iter().enumerate() {
                if e != 0 {
                    let m = z.logmod()[j];
                    if m == f64::NEG_INFINITY {
                        lm = f64::NEG_INFINITY;
                        break;
                    }
                    lm += e as f64 * m;
                    phase += e as f64 * z.arg()[j];
                }
            }
            if lm > top {
                top = lm;
            }
            logs.push((lm, phase));
        }
        if top == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (lm, phase) in logs {
            if lm > f64::NEG_INFINITY {
                acc += Complex64::from_polar((lm - top).exp(), phase);
            }
        }
        let norm = acc.norm();
        if norm == 0.0 {
            f64::NEG_INFINITY
        } else {
            (top + norm.ln()) / self.scale as f64
        }
    }

    fn growth(&self) -> Option<&Growth> {
        Some(&self.growth)
    }
}

/// The log-support function of a polytope as a function object.
#[derive(Debug, Clone)]
pub struct LogSupportFn {
    growth: Growth,
}

impl LogSupportFn {
    pub fn new(polytope: Polytope) -> LogSupportFn {
        LogSupportFn {
            growth: Growth {
                polytope,
                upper_const: 0.0,
                lower_const: Some(0.0),
            },
        }
    }

    pub fn polytope(&self) -> &Polytope {
        &self.growth.polytope
    }
}

impl Evaluable for LogSupportFn {
    fn dim(&self) -> usize {
        self.growth.polytope.dim()
    }

    fn eval(&self, z: &CPoint) -> f64 {
        logsupport::hs(&self.growth.polytope, z)
    }

    fn growth(&self) -> Option<&Growth> {
        Some(&self.growth)
    }
}

/// u scaled by a positive factor, used by the gluing construction.
pub struct Scaled {
    pub factor: f64,
    pub inner: EvaluableHandle,
}

impl Evaluable for Scaled {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, z: &CPoint) -> f64 {
        self.factor * self.inner.eval(z)
    }
}

/// Closure-backed function for tests and controls.
pub struct FnEvaluable<F: Fn(&CPoint) -> f64 + Send + Sync> {
    n: usize,
    f: F,
    growth: Option<Growth>,
}

impl<F: Fn(&CPoint) -> f64 + Send + Sync> FnEvaluable<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnEvaluable { n, f, growth: None }
    }

    pub fn with_growth(n: usize, f: F, growth: Growth) -> Self {
        FnEvaluable {
            n,
            f,
            growth: Some(growth),
        }
    }
}

impl<F: Fn(&CPoint) -> f64 + Send + Sync> Evaluable for FnEvaluable<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, z: &CPoint) -> f64 {
        (self.f)(z)
    }

    fn growth(&self) -> Option<&Growth> {
        self.growth.as_ref()
    }
}

/// Checks the declared growth envelope on the given samples.
pub fn verify_growth(u: &dyn Evaluable, samples: &[CPoint], tol: f64) -> Result<(), FunctionError> {
    let Some(growth) = u.growth() else {
        return Ok(());
    };
    for z in samples {
        let value = u.eval(z);
        let bound = logsupport::hs(&growth.polytope, z);
        if value > bound + growth.upper_const + tol {
            return Err(FunctionError::Invalid(format!(
                "declared upper growth violated: value {value} above bound {} at {z:?}",
                bound + growth.upper_const
            )));
        }
        if let Some(lower) = growth.lower_const {
            if value < bound + lower - tol {
                return Err(FunctionError::Invalid(format!(
                    "declared lower growth violated: value {value} below bound {} at {z:?}",
                    bound + lower
                )));
            }
        }
    }
    Ok(())
}

/// JSON form of a function fixture, dispatched on "kind".
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionSpec {
    Tropical {
        polytope: Polytope,
        pieces: Vec<TropicalPiece>,
    },
    Polylog {
        polytope: Polytope,
        m: u32,
        monomials: Vec<MonomialSpec>,
    },
    Hs {
        polytope: Polytope,
    },
}

#[derive(Deserialize)]
pub struct MonomialSpec {
    pub alpha: Vec<u32>,
    /// [re, im]
    pub coeff: [f64; 2],
}

impl FunctionSpec {
    pub fn build(self) -> Result<EvaluableHandle, FunctionError> {
        match self {
            FunctionSpec::Tropical { polytope, pieces } => {
                Ok(Arc::new(Tropical::new(polytope, pieces)?))
            }
            FunctionSpec::Polylog {
                polytope,
                m,
                monomials,
            } => {
                let monomials = monomials
                    .into_iter()
                    .map(|ms| Monomial {
                        alpha: ms.alpha,
                        coeff: Complex64::new(ms.coeff[0], ms.coeff[1]),
                    })
                    .collect();
                Ok(Arc::new(PolyLog::new(polytope, m, monomials)?))
            }
            FunctionSpec::Hs { polytope } => Ok(Arc::new(LogSupportFn::new(polytope))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn tropical_checks_membership() {
        let p = fixtures::simplex(2);
        let good = Tropical::new(
            p.clone(),
            vec![
                TropicalPiece {
                    a: vec![1.0, 0.0],
                    c: 0.0,
                },
                TropicalPiece {
                    a: vec![0.0, 0.0],
                    c: -1.0,
                },
            ],
        );
        assert!(good.is_ok());
        let bad = Tropical::new(
            p,
            vec![TropicalPiece {
                a: vec![1.0, 1.0],
                c: 0.0,
            }],
        );
        assert!(matches!(
            bad,
            Err(FunctionError::ExponentOutsidePolytope { .. })
        ));
    }

    #[test]
    fn tropical_eval_with_zero_coordinates() {
        let p = fixtures::unit_box(2);
        let u = Tropical::new(
            p,
            vec![
                TropicalPiece {
                    a: vec![1.0, 1.0],
                    c: 0.0,
                },
                TropicalPiece {
                    a: vec![0.0, 0.0],
                    c: -1.0,
                },
            ],
        )
        .unwrap();
        let z = CPoint::from_logmod(vec![3.0, 2.0]);
        assert_eq!(u.eval(&z), 5.0);
        // the exponent (1,1) piece dies on the hyperplane, the constant survives
        let zh = CPoint::new(vec![3.0, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
        assert_eq!(u.eval(&zh), -1.0);
        assert_eq!(u.constant_floor(), Some(-1.0));
    }

    #[test]
    fn polylog_matches_direct_evaluation() {
        // p(z) = 1 + z1^3 z2 under the quadrilateral, m = 1
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let u = PolyLog::new(
            p,
            1,
            vec![
                Monomial {
                    alpha: vec![0, 0],
                    coeff: Complex64::new(1.0, 0.0),
                },
                Monomial {
                    alpha: vec![3, 1],
                    coeff: Complex64::new(1.0, 0.0),
                },
            ],
        )
        .unwrap();
        let z = [Complex64::new(1.3, 0.4), Complex64::new(-0.2, 1.1)];
        let direct = (Complex64::new(1.0, 0.0) + z[0].powu(3) * z[1]).norm().ln();
        let via = u.eval(&CPoint::from_complex(&z));
        assert!((direct - via).abs() < 1e-12, "{direct} vs {via}");
    }

    #[test]
    fn polylog_hits_minus_infinity_on_zeros() {
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let u = PolyLog::new(
            p,
            1,
            vec![
                Monomial {
                    alpha: vec![0, 0],
                    coeff: Complex64::new(1.0, 0.0),
                },
                Monomial {
                    alpha: vec![3, 1],
                    coeff: Complex64::new(1.0, 0.0),
                },
            ],
        )
        .unwrap();
        // z1 = 1, z2 = -1 makes p vanish; the phase arithmetic leaves only
        // rounding noise of order 1e-16, so the log-modulus collapses
        let z = CPoint::new(vec![0.0, 0.0], vec![0.0, std::f64::consts::PI]).unwrap();
        assert!(u.eval(&z) < -30.0);
        // a zero coordinate kills every monomial exactly
        let origin = CPoint::new(vec![f64::NEG_INFINITY; 2], vec![0.0; 2]).unwrap();
        let no_constant = PolyLog::new(
            fixtures::example_quadrilateral(1.0, 3.0),
            1,
            vec![Monomial {
                alpha: vec![3, 1],
                coeff: Complex64::new(1.0, 0.0),
            }],
        )
        .unwrap();
        assert_eq!(no_constant.eval(&origin), f64::NEG_INFINITY);
    }

    #[test]
    fn polylog_rejects_exponents_outside() {
        let p = fixtures::simplex(2);
        let bad = PolyLog::new(
            p,
            1,
            vec![Monomial {
                alpha: vec![2, 0],
                coeff: Complex64::new(1.0, 0.0),
            }],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn envelope_growth_is_tight() {
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let u = Tropical::envelope(&p);
        let samples: Vec<CPoint> = (0..50)
            .map(|i| {
                let t = i as f64 / 10.0 - 2.5;
                CPoint::from_logmod(vec![t, -t + 0.3])
            })
            .collect();
        verify_growth(&u, &samples, 1e-12).unwrap();
    }

    #[test]
    fn function_spec_parses_all_kinds() {
        let tropical = r#"{"kind": "tropical", "polytope": {"n": 2, "vertices": [[1, 0], [0, 1]]},
                           "pieces": [{"a": [1.0, 0.0], "c": 0.5}]}"#;
        let f: FunctionSpec = serde_json::from_str(tropical).unwrap();
        let u = f.build().unwrap();
        assert_eq!(u.dim(), 2);
        assert!((u.eval(&CPoint::from_logmod(vec![2.0, 0.0])) - 2.5).abs() < 1e-15);

        let polylog = r#"{"kind": "polylog", "polytope": {"n": 1, "vertices": [[2]]}, "m": 2,
                          "monomials": [{"alpha": [4], "coeff": [1.0, 0.0]}]}"#;
        let f: FunctionSpec = serde_json::from_str(polylog).unwrap();
        let u = f.build().unwrap();
        // (1/2) log |z^4| = 2 log |z|
        assert!((u.eval(&CPoint::from_logmod(vec![0.7])) - 1.4).abs() < 1e-12);

        let hs = r#"{"kind": "hs", "polytope": {"n": 2, "vertices": [[1, 0], [0, 1]]}}"#;
        let f: FunctionSpec = serde_json::from_str(hs).unwrap();
        let u = f.build().unwrap();
        assert_eq!(u.eval(&CPoint::from_logmod(vec![0.0, 0.0])), 0.0);
    }
}
