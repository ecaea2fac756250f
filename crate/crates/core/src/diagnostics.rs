//! Continuity and regularity diagnostics: Lipschitz-constant sampling, radial
//! modulus-of-continuity profiles with certified lower bounds, automatic
//! discontinuity witnesses for non-lower polytopes, the slow-regularization
//! table for the quadrilateral family, the corner-triangle formula gap, the
//! non-monotone vertex-count diagnostic over nested polytopes, and a
//! finite-difference subharmonicity check along complex lines.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cpoint::CPoint;
use crate::distance::DistanceFn;
use crate::error::DiagnosticsError;
use crate::evaluable::{Evaluable, LogSupportFn};
use crate::fixtures;
use crate::logsupport::{hs, hs_poly};
use crate::polytope::{Polytope, LOWER_SET_MARGIN};
use crate::regularize::inf_conv_a;
use crate::report::{Cell, Report};
use crate::search::SearchConfig;

/// Divergence thresholds checked against the tail of a profile's value
/// column: the last three rows must clear 10, 20 and 30 in order.
pub const DIVERGENCE_TAIL: [f64; 3] = [10.0, 20.0, 30.0];

/// Slack allowed when checking a profile value against its certified lower
/// bound.
const BOUND_SLACK: f64 = 1e-6;

/// A radial continuity profile: the perturbation it was computed for, the
/// per-radius table, and whether the tail of the value column clears the
/// divergence thresholds.
#[derive(Debug, Clone)]
pub struct ContinuityReport {
    /// The multiplicative-coordinate offset the profile perturbs by.
    pub offset: CPoint,
    /// Columns radius, value, bound, gap, verdict.
    pub table: Report,
    /// True when the value column exceeds DIVERGENCE_TAIL on its last rows.
    pub diverging: bool,
}

/// Samples difference quotients |u(z) - u(w)| / |z - w| over complex pairs
/// in the box of the given half-width and returns the largest one seen.
/// Alternates independent pairs with nearby pairs (offset about 1e-3 of the
/// box) so both global and local slopes are probed. Pairs where either value
/// is non-finite, or the points nearly coincide, are skipped. Deterministic
/// for a fixed seed.
pub fn lipschitz_estimate(u: &dyn Evaluable, pairs: usize, box_radius: f64, seed: u64) -> f64 {
    let n = u.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<(Vec<Complex64>, Vec<Complex64>)> = Vec::with_capacity(pairs);
    for k in 0..pairs {
        let z: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(
                    rng.gen_range(-box_radius..box_radius),
                    rng.gen_range(-box_radius..box_radius),
                )
            })
            .collect();
        let w: Vec<Complex64> = if k % 2 == 0 {
            (0..n)
                .map(|_| {
                    Complex64::new(
                        rng.gen_range(-box_radius..box_radius),
                        rng.gen_range(-box_radius..box_radius),
                    )
                })
                .collect()
        } else {
            let step = 1e-3 * box_radius;
            z.iter()
                .map(|&c| {
                    c + Complex64::new(rng.gen_range(-step..step), rng.gen_range(-step..step))
                })
                .collect()
        };
        draws.push((z, w));
    }
    draws
        .par_iter()
        .map(|(z, w)| {
            let dist: f64 = z
                .iter()
                .zip(w)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if dist < 1e-12 {
                return 0.0;
            }
            let fz = u.eval(&CPoint::from_complex(z));
            let fw = u.eval(&CPoint::from_complex(w));
            if !fz.is_finite() || !fw.is_finite() {
                return 0.0;
            }
            (fz - fw).abs() / dist
        })
        .reduce(|| 0.0, f64::max)
}

/// log|a + b| and arg(a + b) for two coordinates in log-polar form, without
/// ever forming numbers outside floating range: the smaller term is divided
/// out in log space first. Exact when either side is zero.
fn add_log(am: f64, aa: f64, bm: f64, ba: f64) -> (f64, f64) {
    if bm == f64::NEG_INFINITY {
        return (am, aa);
    }
    if am == f64::NEG_INFINITY {
        return (bm, ba);
    }
    // express as dominant * (1 + ratio) with |ratio| <= 1
    let (dm, da, rm, ra) = if am >= bm {
        (am, aa, bm - am, ba - aa)
    } else {
        (bm, ba, am - bm, aa - ba)
    };
    if rm < -40.0 {
        return (dm, da);
    }
    let sum = Complex64::new(1.0, 0.0) + Complex64::from_polar(rm.exp(), ra);
    if sum.norm() == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    (dm + sum.norm().ln(), da + sum.arg())
}

/// The point z + w with both sides in log-polar form.
fn offset_point(z: &CPoint, w: &CPoint) -> CPoint {
    let n = z.dim();
    let mut lm = Vec::with_capacity(n);
    let mut ar = Vec::with_capacity(n);
    for j in 0..n {
        let (m, a) = add_log(z.logmod()[j], z.arg()[j], w.logmod()[j], w.arg()[j]);
        lm.push(m);
        ar.push(a);
    }
    CPoint::new(lm, ar).expect("offset of valid points is valid")
}

/// The certified lower-bound machinery for a profile along a degenerate ray:
/// the coordinate split implied by the ray's zeros, the first hull vertex
/// whose projection to the kept coordinates leaves the polytope, and the
/// constant contributed by the offset on the zeroed coordinates.
struct BoundData {
    zeroed: Vec<usize>,
    witness_line: Polytope,
    offset_constant: f64,
}

/// First vertex in storage order whose projection (zeroing the listed
/// coordinates) leaves the hull by more than the lower-set margin.
fn violating_vertex(p: &Polytope, zeroed: &[usize]) -> Option<Vec<f64>> {
    p.vertices()
        .iter()
        .find(|v| {
            let mut proj = (*v).clone();
            for &j in zeroed {
                proj[j] = 0.0;
            }
            !p.contains_within(&proj, LOWER_SET_MARGIN)
        })
        .cloned()
}

fn bound_data(p: &Polytope, w: &CPoint, ray: &CPoint) -> Option<BoundData> {
    let n = p.dim();
    let zeroed: Vec<usize> = (0..n)
        .filter(|&j| ray.logmod()[j] == f64::NEG_INFINITY)
        .collect();
    if zeroed.is_empty() || zeroed.len() == n {
        return None;
    }
    // the offset must live entirely on the zeroed coordinates for the
    // kept coordinates of z + w to keep their moduli
    let supported = (0..n).all(|j| zeroed.contains(&j) || w.logmod()[j] == f64::NEG_INFINITY);
    if !supported {
        return None;
    }
    let s = violating_vertex(p, &zeroed)?;
    let kept: Vec<f64> = (0..n)
        .filter(|j| !zeroed.contains(j))
        .map(|j| s[j])
        .collect();
    let witness_line = Polytope::new(kept.len(), vec![kept]).ok()?;
    let mut offset_constant = 0.0;
    for &j in &zeroed {
        if s[j] != 0.0 {
            if w.logmod()[j] == f64::NEG_INFINITY {
                return None;
            }
            offset_constant += s[j] * w.logmod()[j];
        }
    }
    Some(BoundData {
        zeroed,
        witness_line,
        offset_constant,
    })
}

/// Profiles hs(P, z + w) - hs(P, z) along the ray z(R) with per-coordinate
/// moduli R^{d_j}, where d_j is read from `ray.logmod()` (NEG_INFINITY pins
/// the coordinate to zero) and phases from `ray.arg()`. When the ray has
/// zeroed coordinates and `w` is supported on them, each row also carries
/// the certified lower bound through the first hull vertex that leaves the
/// polytope under the projection; otherwise the bound column is -inf and
/// makes no claim. The `diverging` flag checks the value tail against
/// DIVERGENCE_TAIL. Radii must be finite, strictly increasing, and above 1.
pub fn modulus_profile(
    p: &Polytope,
    w: &CPoint,
    ray: &CPoint,
    radii: &[f64],
) -> Result<ContinuityReport, DiagnosticsError> {
    let n = p.dim();
    if w.dim() != n || ray.dim() != n {
        return Err(DiagnosticsError::BadParameters(format!(
            "dimension mismatch: polytope {n}, offset {}, ray {}",
            w.dim(),
            ray.dim()
        )));
    }
    if radii.is_empty() {
        return Err(DiagnosticsError::BadParameters("no radii given".into()));
    }
    if radii.iter().any(|r| !r.is_finite()) || radii[0] <= 1.0 {
        return Err(DiagnosticsError::BadParameters(
            "radii must be finite and above 1".into(),
        ));
    }
    for pair in radii.windows(2) {
        if pair[1] <= pair[0] {
            return Err(DiagnosticsError::BadParameters(format!(
                "radii must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }

    let bound = bound_data(p, w, ray);
    let mut table = Report::new(&["radius", "value", "bound", "gap", "verdict"]);
    let mut all_ok = true;
    for &radius in radii {
        let lr = radius.ln();
        let lm: Vec<f64> = ray.logmod().iter().map(|&d| d * lr).collect();
        let z = CPoint::new(lm, ray.arg().to_vec()).expect("scaled ray is valid");
        let zw = offset_point(&z, w);
        let base = hs(p, &z);
        let value = hs(p, &zw) - base;
        let bound_row = match &bound {
            Some(data) => {
                let z_kept = z.without_coords(&data.zeroed);
                hs(&data.witness_line, &z_kept) - base + data.offset_constant
            }
            None => f64::NEG_INFINITY,
        };
        let gap = value - bound_row;
        let ok = value >= bound_row - BOUND_SLACK;
        all_ok &= ok;
        table.push_row(vec![
            Cell::Num(radius),
            Cell::Num(value),
            Cell::Num(bound_row),
            Cell::Num(gap),
            Cell::Text(if ok { "ok".into() } else { "below".into() }),
        ]);
    }
    table.set_passed(all_ok);
    let diverging = table.column_exceeds_tail("value", &DIVERGENCE_TAIL);
    Ok(ContinuityReport {
        offset: w.clone(),
        table,
        diverging,
    })
}

/// Nonempty proper subsets of {0, .., n-1}, smallest first and in
/// descending mask order within each size, so later coordinates are zeroed
/// before earlier ones.
fn splits(n: usize) -> Vec<Vec<usize>> {
    let mut masks: Vec<u32> = (1..((1u32 << n) - 1)).collect();
    masks.sort_by_key(|m| (m.count_ones(), std::cmp::Reverse(*m)));
    masks
        .iter()
        .map(|m| (0..n).filter(|j| m & (1 << j) != 0).collect())
        .collect()
}

/// Euclidean projection of a point onto the convex hull of the vertex list,
/// by Frank-Wolfe iteration with exact line search. The hull is compact and
/// the objective quadratic, so the iterates converge to the projection.
fn project_hull(q: &[f64], verts: &[Vec<f64>]) -> Vec<f64> {
    let mut x = verts[0].clone();
    for _ in 0..4000 {
        let g: Vec<f64> = x.iter().zip(q).map(|(&xi, &qi)| xi - qi).collect();
        let best = verts
            .iter()
            .min_by(|a, b| {
                let da: f64 = a.iter().zip(&g).map(|(&ai, &gi)| ai * gi).sum();
                let db: f64 = b.iter().zip(&g).map(|(&bi, &gi)| bi * gi).sum();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        let d: Vec<f64> = best.iter().zip(&x).map(|(&bi, &xi)| bi - xi).collect();
        let gd: f64 = g.iter().zip(&d).map(|(&gi, &di)| gi * di).sum();
        if gd >= -1e-14 {
            break;
        }
        let dd: f64 = d.iter().map(|&di| di * di).sum();
        let gamma = (-gd / dd).clamp(0.0, 1.0);
        for (xi, &di) in x.iter_mut().zip(&d) {
            *xi += gamma * di;
        }
    }
    x
}

/// Searches a non-lower polytope for a perturbation that breaks uniform
/// continuity of its log-support along a ray into a coordinate hyperplane.
/// Tries coordinate splits smallest-first; for the first split whose face
/// projection expels some hull vertex, the offset puts modulus `delta` on
/// the zeroed coordinates and the ray direction is chosen to separate that
/// vertex from the face polytope, so the profile's certified lower bound
/// grows linearly in log radius. Radii are placed where the bound reaches
/// 5, 15, 25 and 35, which makes the profile diverge past the standard
/// thresholds. Returns the offset and the profile; errors with IsLowerSet
/// when every projection stays inside (the lower-set case, where the
/// log-support is uniformly continuous and no witness exists).
pub fn nonuniform_witness(
    p: &Polytope,
    delta: f64,
) -> Result<(CPoint, ContinuityReport), DiagnosticsError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(DiagnosticsError::BadParameters(format!(
            "offset modulus must lie in (0, 1), got {delta}"
        )));
    }
    let n = p.dim();
    if !(2..=16).contains(&n) {
        return Err(DiagnosticsError::BadParameters(format!(
            "witness search needs dimension in 2..=16, got {n}"
        )));
    }
    let mut found: Option<(Vec<usize>, Vec<f64>)> = None;
    for zeroed in splits(n) {
        if let Some(v) = violating_vertex(p, &zeroed) {
            found = Some((zeroed, v));
            break;
        }
    }
    let Some((zeroed, s)) = found else {
        return Err(DiagnosticsError::IsLowerSet);
    };

    let kept_idx: Vec<usize> = (0..n).filter(|j| !zeroed.contains(j)).collect();
    let s_kept: Vec<f64> = kept_idx.iter().map(|&j| s[j]).collect();
    let face = p
        .face_restrict(&zeroed)
        .map_err(|e| DiagnosticsError::BadParameters(e.to_string()))?;

    // Direction separating the expelled vertex from the face polytope. The
    // all-ones direction works whenever the coordinate sum already exceeds
    // the face's sigma; otherwise the gap to the euclidean projection onto
    // the face gives a strictly separating direction.
    let sum: f64 = s_kept.iter().sum();
    let direction: Vec<f64> = if sum > face.sigma() + 1e-9 {
        vec![1.0; kept_idx.len()]
    } else {
        let proj = project_hull(&s_kept, face.vertices());
        let mut d: Vec<f64> = s_kept.iter().zip(&proj).map(|(&a, &b)| a - b).collect();
        let sup = d.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        if sup <= 0.0 {
            return Err(DiagnosticsError::BadParameters(
                "could not certify a separating direction".into(),
            ));
        }
        for x in &mut d {
            *x /= sup;
        }
        d
    };
    let slope: f64 = s_kept
        .iter()
        .zip(&direction)
        .map(|(&a, &b)| a * b)
        .sum::<f64>()
        - face.support(&direction);
    if slope <= 1e-9 {
        return Err(DiagnosticsError::BadParameters(
            "could not certify a separating direction".into(),
        ));
    }

    let weight: f64 = zeroed.iter().map(|&j| s[j]).sum();
    let offset_constant = weight * delta.ln();

    // place the radii so the certified bound reads 5, 15, 25, 35
    let radii: Vec<f64> = (0..4)
        .map(|k| ((5.0 + 10.0 * k as f64 - offset_constant) / slope).exp())
        .collect();
    if radii.iter().any(|r| !r.is_finite()) {
        return Err(DiagnosticsError::BadParameters(
            "separation slope too shallow for a floating-point witness radius".into(),
        ));
    }

    let mut w_lm = vec![f64::NEG_INFINITY; n];
    for &j in &zeroed {
        w_lm[j] = delta.ln();
    }
    let w = CPoint::new(w_lm, vec![0.0; n]).expect("offset point is valid");

    let mut ray_lm = vec![f64::NEG_INFINITY; n];
    for (k, &j) in kept_idx.iter().enumerate() {
        ray_lm[j] = direction[k];
    }
    let ray = CPoint::new(ray_lm, vec![0.0; n]).expect("ray point is valid");

    let report = modulus_profile(p, &w, &ray, &radii)?;
    Ok((w, report))
}

/// Tolerance used by the quadrilateral slow-regularization verdicts.
const EX12_SLACK: f64 = 1e-6;

/// Profiles the infimal-convolution regularization of the quadrilateral
/// family's log-support along the degenerate ray (R, 0): value is the
/// regularization minus the log-support at the ray point, bound is the
/// divergent lower bound (r - a) log R - log(1 + 1/delta) with
/// r = b / (a + 1), and the verdict checks value >= bound. Requires
/// b > a (a + 1), so the bound actually grows, offset modulus in (0, 1),
/// and radii finite, increasing and above 1.
pub fn example12_report(
    a: f64,
    b: f64,
    delta: f64,
    radii: &[f64],
    cfg: &SearchConfig,
) -> Result<Report, DiagnosticsError> {
    if !(a.is_finite() && a > 0.0) {
        return Err(DiagnosticsError::BadParameters(format!(
            "first exponent must be positive and finite, got {a}"
        )));
    }
    if !(b.is_finite() && b > a * (a + 1.0)) {
        return Err(DiagnosticsError::BadParameters(format!(
            "second exponent must exceed a(a + 1) = {} for the bound to grow, got {b}",
            a * (a + 1.0)
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(DiagnosticsError::BadParameters(format!(
            "offset modulus must lie in (0, 1), got {delta}"
        )));
    }
    if radii.is_empty()
        || radii.iter().any(|r| !r.is_finite())
        || radii[0] <= 1.0
        || radii.windows(2).any(|p| p[1] <= p[0])
    {
        return Err(DiagnosticsError::BadParameters(
            "radii must be finite, strictly increasing, and above 1".into(),
        ));
    }

    let p = fixtures::example_quadrilateral(a, b);
    let u = LogSupportFn::new(p.clone());
    let mu = DistanceFn::euclidean(2);
    let r = b / (a + 1.0);
    let penalty = (1.0 + 1.0 / delta).ln();

    let rows: Vec<Result<(f64, f64, f64), DiagnosticsError>> = radii
        .par_iter()
        .map(|&radius| {
            let lr = radius.ln();
            let z = CPoint::new(vec![lr, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
            let out = inf_conv_a(&u, &mu, delta, &z, cfg)
                .map_err(|e| DiagnosticsError::BadParameters(e.to_string()))?;
            let value = out.value - hs(&p, &z);
            let bound = (r - a) * lr - penalty;
            Ok((radius, value, bound))
        })
        .collect();

    let mut report = Report::new(&["radius", "value", "bound", "gap", "verdict"]);
    let mut all_ok = true;
    for row in rows {
        let (radius, value, bound) = row?;
        let gap = value - bound;
        let ok = gap >= -EX12_SLACK;
        all_ok &= ok;
        report.push_row(vec![
            Cell::Num(radius),
            Cell::Num(value),
            Cell::Num(bound),
            Cell::Num(gap),
            Cell::Text(if ok { "ok".into() } else { "below".into() }),
        ]);
    }
    report.set_passed(all_ok);
    Ok(report)
}

/// Evaluates the corner-triangle log-support along the hyperbola-like probe
/// (1/R, R), where the true value is identically zero while the formula
/// that restricts attention to the unbounded coordinate predicts log R. The
/// gap column records that prediction error and grows without bound. Radii
/// must be finite, strictly increasing, and above 1.
pub fn perera_example_report(radii: &[f64]) -> Result<Report, DiagnosticsError> {
    if radii.is_empty()
        || radii.iter().any(|r| !r.is_finite())
        || radii[0] <= 1.0
        || radii.windows(2).any(|p| p[1] <= p[0])
    {
        return Err(DiagnosticsError::BadParameters(
            "radii must be finite, strictly increasing, and above 1".into(),
        ));
    }
    let p = fixtures::corner_triangle();
    let mut report = Report::new(&["radius", "value", "bound", "gap", "verdict"]);
    let mut all_ok = true;
    for &radius in radii {
        let lr = radius.ln();
        let z = CPoint::new(vec![-lr, lr], vec![0.0, 0.0]).unwrap();
        let value = hs(&p, &z);
        let bound = lr;
        let gap = bound - value;
        let ok = value.abs() <= 1e-9 && (gap - lr).abs() <= 1e-9;
        all_ok &= ok;
        report.push_row(vec![
            Cell::Num(radius),
            Cell::Num(value),
            Cell::Num(bound),
            Cell::Num(gap),
            Cell::Text(if ok { "ok".into() } else { "off".into() }),
        ]);
    }
    report.set_passed(all_ok);
    Ok(report)
}

/// Evaluates log of the all-coefficients-one polynomial with monomial
/// exponents at the extreme points of each polytope, at the all-ones point
/// (so each value is log of the extreme-point count), for a chain that must
/// be nested decreasingly. Rows where the value rises against the previous
/// polytope are marked, and the report fails when any rise occurs: smaller
/// polytope, larger diagnostic. Errors with NotNested when some vertex of a
/// later polytope leaves an earlier one.
pub fn hs_nonmonotone_report(polytopes: &[Polytope]) -> Result<Report, DiagnosticsError> {
    if polytopes.is_empty() {
        return Err(DiagnosticsError::BadParameters("no polytopes given".into()));
    }
    let n = polytopes[0].dim();
    if polytopes.iter().any(|p| p.dim() != n) {
        return Err(DiagnosticsError::BadParameters(
            "polytopes must share a dimension".into(),
        ));
    }
    for (j, pair) in polytopes.windows(2).enumerate() {
        let mut residual = 0.0f64;
        for v in pair[1].vertices() {
            residual = residual.max(pair[0].hull_residual(v));
        }
        if residual > LOWER_SET_MARGIN {
            return Err(DiagnosticsError::NotNested {
                index: j + 1,
                residual,
            });
        }
    }
    let ones = CPoint::from_logmod(vec![0.0; n]);
    let mut report = Report::new(&["index", "count", "value", "gap", "verdict"]);
    let mut prev: Option<f64> = None;
    let mut all_ok = true;
    for (j, p) in polytopes.iter().enumerate() {
        let ext = p.extreme_points();
        let value = hs_poly(&ext, &ones);
        let gap = prev.map_or(0.0, |q| value - q);
        let ok = gap <= 1e-12;
        all_ok &= ok;
        report.push_row(vec![
            Cell::Num((j + 1) as f64),
            Cell::Num(ext.len() as f64),
            Cell::Num(value),
            Cell::Num(gap),
            Cell::Text(if ok { "ok".into() } else { "rose".into() }),
        ]);
        prev = Some(value);
    }
    report.set_passed(all_ok);
    Ok(report)
}

/// A rectangular grid of complex parameters for the subharmonicity check.
#[derive(Debug, Clone)]
pub struct StencilSpec {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
    /// Grid points per side.
    pub count: usize,
}

impl StencilSpec {
    /// Square grid over [lo, hi] x [lo, hi] with `count` points per side.
    pub fn grid(lo: f64, hi: f64, count: usize) -> StencilSpec {
        StencilSpec {
            re_lo: lo,
            re_hi: hi,
            im_lo: lo,
            im_hi: hi,
            count,
        }
    }

    fn centers(&self) -> Vec<Complex64> {
        let lerp = |lo: f64, hi: f64, i: usize| {
            if self.count <= 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (self.count - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.count * self.count);
        for i in 0..self.count {
            for k in 0..self.count {
                out.push(Complex64::new(
                    lerp(self.re_lo, self.re_hi, i),
                    lerp(self.im_lo, self.im_hi, k),
                ));
            }
        }
        out
    }
}

/// Finite-difference tolerance matched to the truncation error of the
/// five-point Laplacian at step h.
pub fn fd_tolerance(h: f64) -> f64 {
    1e3 * h * h
}

/// Minimum of the five-point discrete Laplacian of c -> u(base + c * dir)
/// over the stencil grid, with step h. A subharmonic function keeps this
/// above -fd_tolerance(h) wherever it is smooth; the check errors with the
/// flat grid index when any stencil evaluation is non-finite, since the
/// Laplacian carries no information across a singularity.
pub fn log_sh_check(
    u: &dyn Evaluable,
    base: &CPoint,
    dir: &CPoint,
    stencil: &StencilSpec,
    h: f64,
) -> Result<f64, DiagnosticsError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(DiagnosticsError::BadParameters(format!(
            "step must be positive and finite, got {h}"
        )));
    }
    if stencil.count == 0 {
        return Err(DiagnosticsError::BadParameters("empty stencil".into()));
    }
    let n = u.dim();
    if base.dim() != n || dir.dim() != n {
        return Err(DiagnosticsError::BadParameters(format!(
            "dimension mismatch: function {n}, base {}, direction {}",
            base.dim(),
            dir.dim()
        )));
    }
    let base_c = base.to_complex();
    let dir_c = dir.to_complex();
    let at = |c: Complex64| -> f64 {
        let pt: Vec<Complex64> = base_c
            .iter()
            .zip(&dir_c)
            .map(|(&b, &d)| b + c * d)
            .collect();
        u.eval(&CPoint::from_complex(&pt))
    };
    let offsets = [
        Complex64::new(h, 0.0),
        Complex64::new(-h, 0.0),
        Complex64::new(0.0, h),
        Complex64::new(0.0, -h),
    ];
    let mut min_lap = f64::INFINITY;
    for (idx, c) in stencil.centers().into_iter().enumerate() {
        let center = at(c);
        if !center.is_finite() {
            return Err(DiagnosticsError::StencilHitsSingularity(idx));
        }
        let mut ring = 0.0;
        for off in offsets {
            let v = at(c + off);
            if !v.is_finite() {
                return Err(DiagnosticsError::StencilHitsSingularity(idx));
            }
            ring += v;
        }
        let lap = (ring - 4.0 * center) / (h * h);
        if lap < min_lap {
            min_lap = lap;
        }
    }
    Ok(min_lap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluable::FnEvaluable;
    use crate::logsupport::hs_lower_formula;
    use std::f64::consts::TAU;

    #[test]
    fn lipschitz_of_the_simplex_log_support_stays_at_one() {
        let u = LogSupportFn::new(fixtures::simplex(2));
        let est = lipschitz_estimate(&u, 4000, 3.0, 7);
        assert!(est <= 1.0 + 1e-6, "estimate {est}");
        assert!(est > 0.5, "estimate {est} suspiciously small");
    }

    #[test]
    fn profile_of_a_lower_set_stays_bounded() {
        let p = fixtures::simplex(2);
        let w = CPoint::from_logmod(vec![(0.05f64).ln(), (0.05f64).ln()]);
        let ray = CPoint::from_logmod(vec![1.0, 1.0]);
        let out = modulus_profile(&p, &w, &ray, &[10.0, 100.0, 1000.0, 10_000.0]).unwrap();
        assert!(!out.diverging);
        for value in out.table.column_values("value") {
            // euclidean offset norm is about 0.07, sigma is 1
            assert!(value.abs() <= 0.1, "value {value}");
        }
        // no degenerate coordinate on the ray: the bound makes no claim
        for bound in out.table.column_values("bound") {
            assert_eq!(bound, f64::NEG_INFINITY);
        }
        assert_eq!(out.table.passed(), Some(true));
    }

    #[test]
    fn profile_of_the_diagonal_segment_tracks_its_bound_exactly() {
        let p = fixtures::diagonal_segment();
        let delta = 0.25f64;
        let w = CPoint::new(vec![f64::NEG_INFINITY, delta.ln()], vec![0.0, 0.0]).unwrap();
        let ray = CPoint::new(vec![1.0, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
        let radii = [1e3, 1e6, 1e9, 1e12, 1e15];
        let out = modulus_profile(&p, &w, &ray, &radii).unwrap();
        assert!(out.diverging);
        assert_eq!(out.table.passed(), Some(true));
        for (k, &radius) in radii.iter().enumerate() {
            let row = &out.table.rows()[k];
            let value = row[1].as_num().unwrap();
            let bound = row[2].as_num().unwrap();
            let expect = radius.ln() + delta.ln();
            assert!((value - expect).abs() < 1e-9, "value {value} vs {expect}");
            assert!((bound - expect).abs() < 1e-9, "bound {bound} vs {expect}");
        }
    }

    #[test]
    fn witness_for_the_diagonal_segment_diverges_on_schedule() {
        let p = fixtures::diagonal_segment();
        let (w, out) = nonuniform_witness(&p, 0.5).unwrap();
        assert_eq!(w.logmod()[0], f64::NEG_INFINITY);
        assert!((w.logmod()[1] - 0.5f64.ln()).abs() < 1e-15);
        assert!(out.diverging);
        assert_eq!(out.table.passed(), Some(true));
        let bounds = out.table.column_values("bound");
        for (k, &b) in bounds.iter().enumerate() {
            assert!((b - (5.0 + 10.0 * k as f64)).abs() < 1e-6, "bound {b}");
        }
        let values = out.table.column_values("value");
        for (v, b) in values.iter().zip(&bounds) {
            assert!(v >= &(b - 1e-6));
        }
        assert_eq!(out.offset.logmod(), w.logmod());
    }

    #[test]
    fn witness_zeroes_the_first_coordinate_for_the_corner_triangle() {
        let p = fixtures::corner_triangle();
        let (w, out) = nonuniform_witness(&p, 0.5).unwrap();
        // zeroing the second coordinate keeps every vertex inside, so the
        // split lands on the first coordinate
        assert!(w.logmod()[0].is_finite());
        assert_eq!(w.logmod()[1], f64::NEG_INFINITY);
        assert!(out.diverging);
    }

    #[test]
    fn witness_refuses_lower_sets() {
        assert!(matches!(
            nonuniform_witness(&fixtures::simplex(2), 0.5),
            Err(DiagnosticsError::IsLowerSet)
        ));
        assert!(matches!(
            nonuniform_witness(&fixtures::unit_box(3), 0.5),
            Err(DiagnosticsError::IsLowerSet)
        ));
    }

    #[test]
    fn quadrilateral_report_beats_its_divergent_bound() {
        let cfg = SearchConfig::default();
        let report = example12_report(1.0, 3.0, 0.5, &[10.0, 100.0, 1000.0], &cfg).unwrap();
        assert_eq!(report.passed(), Some(true));
        // closed form for the restricted minimization: value is
        // 0.5 log R + 0.5 log delta - log 2
        for (k, &radius) in [10.0f64, 100.0, 1000.0].iter().enumerate() {
            let value = report.rows()[k][1].as_num().unwrap();
            let oracle = 0.5 * radius.ln() + 0.5 * 0.5f64.ln() - 2.0f64.ln();
            assert!((value - oracle).abs() < 1e-3, "value {value} vs {oracle}");
        }
    }

    #[test]
    fn quadrilateral_report_validates_its_parameters() {
        let cfg = SearchConfig::default();
        assert!(example12_report(1.0, 1.5, 0.5, &[10.0], &cfg).is_err());
        assert!(example12_report(1.0, 3.0, 1.5, &[10.0], &cfg).is_err());
        assert!(example12_report(-1.0, 3.0, 0.5, &[10.0], &cfg).is_err());
        assert!(example12_report(1.0, 3.0, 0.5, &[], &cfg).is_err());
        assert!(example12_report(1.0, 3.0, 0.5, &[10.0, 5.0], &cfg).is_err());
    }

    #[test]
    fn corner_triangle_gap_is_the_log_radius() {
        let report = perera_example_report(&[2.0, 4.0, 8.0]).unwrap();
        assert_eq!(report.passed(), Some(true));
        for (k, &radius) in [2.0f64, 4.0, 8.0].iter().enumerate() {
            let row = &report.rows()[k];
            assert!(row[1].as_num().unwrap().abs() <= 1e-12);
            assert!((row[3].as_num().unwrap() - radius.ln()).abs() <= 1e-12);
        }
        assert!(perera_example_report(&[0.5, 2.0]).is_err());
    }

    #[test]
    fn vertex_counts_rise_along_the_inscribed_chain() {
        let chain = fixtures::inscribed_chain();
        let report = hs_nonmonotone_report(&chain).unwrap();
        assert_eq!(report.passed(), Some(false));
        let counts: Vec<f64> = report.column_values("count");
        assert_eq!(counts, vec![3.0, 4.0, 6.0, 10.0]);
        for (k, &c) in counts.iter().enumerate() {
            let value = report.rows()[k][2].as_num().unwrap();
            assert!((value - c.ln()).abs() <= 1e-12);
        }
    }

    #[test]
    fn constant_chain_raises_no_flag_and_nesting_is_enforced() {
        let p = fixtures::simplex(2);
        let report = hs_nonmonotone_report(&[p.clone(), p.clone(), p.clone()]).unwrap();
        assert_eq!(report.passed(), Some(true));
        let err = hs_nonmonotone_report(&[p.clone(), p.scale(2.0)]);
        assert!(matches!(
            err,
            Err(DiagnosticsError::NotNested { index: 1, .. })
        ));
    }

    #[test]
    fn laplacian_control_recovers_minus_four() {
        let u = FnEvaluable::new(1, |z: &CPoint| {
            let lm = z.logmod()[0];
            if lm == f64::NEG_INFINITY {
                0.0
            } else {
                -(2.0 * lm).exp()
            }
        });
        let base = CPoint::from_logmod(vec![f64::NEG_INFINITY]);
        let dir = CPoint::from_logmod(vec![0.0]);
        let stencil = StencilSpec::grid(-1.0, 1.0, 5);
        let lap = log_sh_check(&u, &base, &dir, &stencil, 1e-3).unwrap();
        // the five-point stencil is exact on quadratics
        assert!((lap + 4.0).abs() < 1e-6, "laplacian {lap}");
    }

    #[test]
    fn log_support_passes_the_subharmonicity_check() {
        let u = LogSupportFn::new(fixtures::example_quadrilateral(1.0, 3.0));
        let base = CPoint::from_logmod(vec![0.3, -0.2]);
        let dir = CPoint::new(vec![0.0, 0.1], vec![0.4, 1.1]).unwrap();
        let stencil = StencilSpec::grid(-0.5, 0.5, 4);
        let h = 1e-3;
        let lap = log_sh_check(&u, &base, &dir, &stencil, h).unwrap();
        assert!(lap >= -fd_tolerance(h), "laplacian {lap}");
    }

    #[test]
    fn pole_on_the_stencil_is_reported() {
        let u = FnEvaluable::new(1, |z: &CPoint| z.logmod()[0]);
        let base = CPoint::from_logmod(vec![f64::NEG_INFINITY]);
        let dir = CPoint::from_logmod(vec![0.0]);
        // grid includes the origin, where log|c| is -inf
        let stencil = StencilSpec::grid(-1.0, 1.0, 3);
        let err = log_sh_check(&u, &base, &dir, &stencil, 1e-3);
        assert!(matches!(
            err,
            Err(DiagnosticsError::StencilHitsSingularity(_))
        ));
    }

    #[test]
    fn offset_arithmetic_is_exact_at_zeros_and_robust_at_extremes() {
        let z = CPoint::new(vec![800.0, f64::NEG_INFINITY], vec![0.0, 0.0]).unwrap();
        let w = CPoint::new(vec![f64::NEG_INFINITY, 0.0], vec![0.0, 1.0]).unwrap();
        let zw = offset_point(&z, &w);
        assert_eq!(zw.logmod()[0], 800.0);
        assert_eq!(zw.logmod()[1], 0.0);
        assert_eq!(zw.arg()[1], 1.0);
        // comparable magnitudes go through the exact complex sum
        let a = CPoint::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        let b = CPoint::new(vec![0.0, 0.0], vec![TAU / 2.0, 0.0]).unwrap();
        let ab = offset_point(&a, &b);
        assert!(ab.logmod()[0] < -30.0); // 1 + (-1) collapses
        assert!((ab.logmod()[1] - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn splits_order_prefers_small_sets_and_late_coordinates() {
        let order = splits(3);
        assert_eq!(order[0], vec![2]);
        assert_eq!(order[1], vec![1]);
        assert_eq!(order[2], vec![0]);
        assert_eq!(order[3], vec![1, 2]);
        assert_eq!(order.len(), 6);
    }

    #[test]
    fn lower_formula_and_profile_agree_on_a_lower_fixture() {
        // spot-check that the profile's machinery matches the clip formula
        let p = fixtures::unit_box(2);
        let z = CPoint::from_logmod(vec![2.0, -3.0]);
        assert!((hs(&p, &z) - hs_lower_formula(&p, &z).unwrap()).abs() < 1e-12);
    }
}
