//! Logarithmic support function of a convex body and its growth diagnostics.
//!
//! Off the coordinate hyperplanes the value is the support function of the
//! body at the vector of log-moduli. On a hyperplane the correct extension
//! evaluates the support function of the zero-slice face of the body in the
//! surviving variables; for bodies that are not lower sets this is genuinely
//! smaller than any limit along rays into the hyperplane, which is exactly
//! the discontinuity the diagnostics in this crate probe.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cpoint::CPoint;
use crate::error::LogSupportError;
use crate::evaluable::Evaluable;
use crate::polytope::Polytope;
use crate::report::{Cell, Report};

/// Support function at the log-moduli; rejects points on coordinate
/// hyperplanes instead of extending.
pub fn hs_interior(p: &Polytope, z: &CPoint) -> Result<f64, LogSupportError> {
    if z.dim() != p.dim() {
        return Err(LogSupportError::DimensionMismatch {
            expected: p.dim(),
            got: z.dim(),
        });
    }
    if let Some(&j) = z.zero_coords().first() {
        return Err(LogSupportError::ZeroCoordinate(j));
    }
    Ok(p.support(z.logmod()))
}

/// Log-support on all of complex space: support function off the coordinate
/// hyperplanes, support of the zero-slice face on them. Every zero slice of a
/// body in the nonnegative orthant is an exposed face, so restriction to the
/// vertices lying exactly on the slice is exact, not approximate.
pub fn hs(p: &Polytope, z: &CPoint) -> f64 {
    assert_eq!(
        z.dim(),
        p.dim(),
        "dimension mismatch in log-support evaluation"
    );
    let zeros = z.zero_coords();
    if zeros.is_empty() {
        return p.support(z.logmod());
    }
    if zeros.len() == p.dim() {
        // sole survivor is the origin
        return 0.0;
    }
    let face = p
        .face_restrict(&zeros)
        .expect("zero set is a proper nonempty subset");
    face.support(z.without_coords(&zeros).logmod())
}

/// Closed formula valid exactly for lower sets: clip the log-moduli at zero
/// and take the plain support function. Errors when the body is not a lower
/// set, because the formula is wrong there.
pub fn hs_lower_formula(p: &Polytope, z: &CPoint) -> Result<f64, LogSupportError> {
    if z.dim() != p.dim() {
        return Err(LogSupportError::DimensionMismatch {
            expected: p.dim(),
            got: z.dim(),
        });
    }
    if !p.is_lower() {
        return Err(LogSupportError::NotLowerSet);
    }
    let clipped: Vec<f64> = z
        .logmod()
        .iter()
        .map(|&m| {
            if m == f64::NEG_INFINITY {
                0.0
            } else {
                m.max(0.0)
            }
        })
        .collect();
    // each vertex either pays nothing on the clipped coordinates or is
    // dominated by its projection, which the lower set also contains
    Ok(p.support(&clipped))
}

/// Descent cross-check for the hyperplane extension: evaluates the support
/// function with the zeroed coordinates pushed to -t and returns the values
/// at the requested depths. For t past the crossover these are exactly the
/// face value; disagreement flags a bug in the face restriction.
pub fn hs_descent(p: &Polytope, z: &CPoint, depths: &[f64]) -> Vec<f64> {
    let zeros = z.zero_coords();
    depths
        .iter()
        .map(|&t| {
            let xi: Vec<f64> = z
                .logmod()
                .iter()
                .enumerate()
                .map(|(j, &m)| if zeros.contains(&j) { -t } else { m })
                .collect();
            p.support(&xi)
        })
        .collect()
}

/// Log-sum-exp of the pairings of `z` with a raw point list: the value at
/// `z` of the polynomial whose monomial exponents are the listed points,
/// with all coefficients 1 and phases ignored. Zero coordinates kill every
/// term that uses them (with the 0 * -inf = 0 convention on zero exponents).
pub fn hs_poly(points: &[Vec<f64>], z: &CPoint) -> f64 {
    let mut terms = Vec::with_capacity(points.len());
    let mut top = f64::NEG_INFINITY;
    for v in points {
        let mut t = 0.0;
        for (&vi, &m) in v.iter().zip(z.logmod()) {
            if vi != 0.0 {
                if m == f64::NEG_INFINITY {
                    t = f64::NEG_INFINITY;
                    break;
                }
                t += vi * m;
            }
        }
        if t > top {
            top = t;
        }
        terms.push(t);
    }
    if top == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|&t| (t - top).exp()).sum();
    top + sum.ln()
}

/// Log-sum-exp form of the log-support over the vertex list; a smooth upper
/// proxy used in tests, within log(#vertices) of the exact value.
pub fn hs_smooth_proxy(p: &Polytope, z: &CPoint) -> f64 {
    // origin vertex keeps the max term >= 0 finite
    hs_poly(p.vertices(), z)
}

/// Samples the gap u - hs(P, .) on polydisc spheres of the given radii and
/// reports its extremes per radius. Deterministic for a fixed seed: points
/// are drawn sequentially, evaluation is parallel with order restored.
pub fn growth_constants(
    u: &dyn Evaluable,
    p: &Polytope,
    radii: &[f64],
    samples_per_radius: usize,
    seed: u64,
) -> Report {
    let n = p.dim();
    let mut report = Report::new(&["radius", "max_gap", "min_gap"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &radius in radii {
        let lr = radius.ln();
        let mut points: Vec<CPoint> = Vec::new();
        // one ray per axis, hitting the coordinate hyperplanes
        for j in 0..n {
            let mut lm = vec![f64::NEG_INFINITY; n];
            lm[j] = lr;
            points.push(CPoint::new(lm, vec![0.0; n]).unwrap());
        }
        points.push(CPoint::from_logmod(vec![lr; n]));
        for k in 0..samples_per_radius {
            let mut lm: Vec<f64> = (0..n).map(|_| rng.gen_range(-lr..=lr)).collect();
            let arg: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            if k % 4 != 0 {
                // pin one coordinate to the sphere; the rest probe the interior
                let pin = rng.gen_range(0..n);
                lm[pin] = lr;
            }
            points.push(CPoint::new(lm, arg).unwrap());
        }
        let gaps: Vec<f64> = points
            .par_iter()
            .map(|z| {
                let value = u.eval(z);
                let bound = hs(p, z);
                if value == f64::NEG_INFINITY {
                    f64::NEG_INFINITY
                } else {
                    value - bound
                }
            })
            .collect();
        let max_gap = gaps
            .iter()
            .copied()
            .filter(|g| g.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        report.push_row(vec![
            Cell::Num(radius),
            Cell::Num(max_gap),
            Cell::Num(min_gap),
        ]);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluable::{LogSupportFn, Tropical};
    use crate::fixtures;

    #[test]
    fn interior_value_is_support_at_logmoduli() {
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let z = CPoint::from_logmod(vec![2.0, -1.0]);
        // candidates: 0, 2, -1, 3*2-1 = 5
        assert_eq!(hs_interior(&p, &z).unwrap(), 5.0);
        assert_eq!(hs(&p, &z), 5.0);
    }

    #[test]
    fn interior_rejects_hyperplane_points() {
        let p = fixtures::simplex(2);
        let z = CPoint::new(vec![1.0, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            hs_interior(&p, &z),
            Err(LogSupportError::ZeroCoordinate(1))
        ));
    }

    #[test]
    fn hyperplane_extension_uses_the_face() {
        // quadrilateral with a = 1, b = 3: the face on {x2 = 0} is [0, 1],
        // so on z2 = 0 the value is max(0, log|z1|), not the 3 log|z1| that
        // the vertex (3, 1) would suggest along rays
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let z = CPoint::new(vec![2.0, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
        assert_eq!(hs(&p, &z), 2.0);
        let z = CPoint::new(vec![-2.0, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
        assert_eq!(hs(&p, &z), 0.0);
        // descent stabilizes on the same value once deep enough
        let z = CPoint::new(vec![2.0, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
        let vals = hs_descent(&p, &z, &[10.0, 20.0, 40.0]);
        assert_eq!(vals[1], 2.0);
        assert_eq!(vals[2], 2.0);
    }

    #[test]
    fn origin_evaluates_to_zero() {
        let p = fixtures::example_quadrilateral(2.0, 7.0);
        let z = CPoint::new(vec![f64::NEG_INFINITY, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
        assert_eq!(hs(&p, &z), 0.0);
    }

    #[test]
    fn lower_formula_matches_hs_on_lower_sets() {
        let p = fixtures::simplex(3);
        for (lm, want) in [
            (vec![1.0, 2.0, 3.0], 3.0),
            (vec![-1.0, -2.0, -3.0], 0.0),
            (vec![f64::NEG_INFINITY, 2.0, -5.0], 2.0),
            (
                vec![f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
                0.0,
            ),
        ] {
            let z = CPoint::new(lm, vec![0.0; 3]).unwrap();
            assert_eq!(hs(&p, &z), want);
            assert_eq!(hs_lower_formula(&p, &z).unwrap(), want);
        }
    }

    #[test]
    fn lower_formula_refuses_non_lower_sets() {
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let z = CPoint::from_logmod(vec![1.0, 1.0]);
        assert!(matches!(
            hs_lower_formula(&p, &z),
            Err(LogSupportError::NotLowerSet)
        ));
    }

    #[test]
    fn lower_formula_agrees_on_random_lower_sets() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=3);
            let verts: Vec<Vec<f64>> = (0..rng.gen_range(1..=4))
                .map(|_| (0..n).map(|_| rng.gen_range(0.0..2.0)).collect())
                .collect();
            let p = Polytope::new(n, verts).unwrap().lower_hull();
            let lm: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        f64::NEG_INFINITY
                    } else {
                        rng.gen_range(-3.0..3.0)
                    }
                })
                .collect();
            let z = CPoint::new(lm, vec![0.0; n]).unwrap();
            let a = hs(&p, &z);
            let b = hs_lower_formula(&p, &z).unwrap();
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn smooth_proxy_bounds() {
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let count = p.vertices().len() as f64;
        for lm in [vec![2.0, -1.0], vec![0.3, 0.3], vec![-4.0, 6.0]] {
            let z = CPoint::from_logmod(lm);
            let exact = hs(&p, &z);
            let proxy = hs_smooth_proxy(&p, &z);
            assert!(proxy >= exact - 1e-12);
            assert!(proxy <= exact + count.ln() + 1e-12);
        }
    }

    #[test]
    fn growth_report_for_the_support_function_itself() {
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let u = LogSupportFn::new(p.clone());
        let report = growth_constants(&u, &p, &[10.0, 100.0], 64, 5);
        for row in 0..2 {
            let max_gap = report.rows()[row][1].as_num().unwrap();
            let min_gap = report.rows()[row][2].as_num().unwrap();
            assert!(max_gap.abs() < 1e-9);
            assert!(min_gap.abs() < 1e-9);
        }
    }

    #[test]
    fn growth_report_flags_divergence_for_misdeclared_polytope() {
        // u is the envelope of the quadrilateral, declared against the unit
        // simplex: on the diagonal the gap grows like 3 log R, so the max
        // gap must trend up hard
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let u = Tropical::envelope(&p);
        let wrong = fixtures::simplex(2);
        let report = growth_constants(&u, &wrong, &[1e2, 1e3, 1e4], 32, 7);
        assert!(report.column_trending_up("max_gap", 1.0));
    }
}
