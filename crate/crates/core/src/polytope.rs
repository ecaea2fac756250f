//! Compact convex polytopes in the nonnegative orthant, given by vertices.
//!
//! The origin is always adjoined, so every polytope here contains 0. Support
//! values are exact maxima over vertex dot products; membership is decided by
//! a small phase-1 simplex solve for convex-combination weights.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::PolytopeError;

/// Residual tolerance for hull membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Looser margin used by the lower-set test so boundary projections do not flap.
pub const LOWER_SET_MARGIN: f64 = 1e-7;
/// A vertex coordinate at or below this is treated as lying on the face x_j = 0.
pub const FACE_ZERO_TOL: f64 = 1e-12;

const MAX_DIM: usize = 6;

/// Convex hull of finitely many points of the nonnegative orthant, 0 included.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    n: usize,
    vertices: Vec<Vec<f64>>,
}

impl Polytope {
    /// Validates generators (finite, nonnegative, right dimension), adjoins
    /// the origin, and drops exact duplicates.
    pub fn new(n: usize, generators: Vec<Vec<f64>>) -> Result<Self, PolytopeError> {
        if n == 0 || n > MAX_DIM {
            return Err(PolytopeError::InvalidDimension(n));
        }
        let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(generators.len() + 1);
        for (index, v) in generators.into_iter().enumerate() {
            if v.len() != n {
                return Err(PolytopeError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            for &c in &v {
                if !c.is_finite() {
                    return Err(PolytopeError::InvalidVertex {
                        index,
                        reason: format!("non-finite coordinate {c}"),
                    });
                }
                if c < 0.0 {
                    return Err(PolytopeError::InvalidVertex {
                        index,
                        reason: format!("negative coordinate {c}"),
                    });
                }
            }
            if !vertices.contains(&v) {
                vertices.push(v);
            }
        }
        let zero = vec![0.0; n];
        if !vertices.contains(&zero) {
            vertices.push(zero);
        }
        Ok(Polytope { n, vertices })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Support value: max over vertices of the dot product with `xi`.
    /// Finite directions only; hyperplane limits live in the log-support layer.
    pub fn support(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.n);
        debug_assert!(xi.iter().all(|c| c.is_finite()));
        let mut best = f64::NEG_INFINITY;
        for v in &self.vertices {
            let mut dot = 0.0;
            for j in 0..self.n {
                dot += v[j] * xi[j];
            }
            if dot > best {
                best = dot;
            }
        }
        best
    }

    /// Support value in the all-ones direction.
    pub fn sigma(&self) -> f64 {
        self.support(&vec![1.0; self.n])
    }

    /// L1 infeasibility of writing `x` as a convex combination of vertices.
    /// Zero (up to rounding) exactly when `x` lies in the hull.
    pub fn hull_residual(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        hull_residual(&self.vertices, x)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_within(x, MEMBERSHIP_TOL)
    }

    pub fn contains_within(&self, x: &[f64], tol: f64) -> bool {
        self.hull_residual(x) <= tol
    }

    /// True when every coordinate box [0, x] with x in the polytope stays
    /// inside. Checked on vertices: every coordinate-zeroing projection of
    /// every vertex must be a member (margin `LOWER_SET_MARGIN`).
    pub fn is_lower(&self) -> bool {
        let mut proj = vec![0.0; self.n];
        for v in &self.vertices {
            for mask in 1u32..(1 << self.n) {
                for j in 0..self.n {
                    proj[j] = if mask & (1 << j) != 0 { 0.0 } else { v[j] };
                }
                if !self.contains_within(&proj, LOWER_SET_MARGIN) {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest lower set containing the polytope: the hull of all
    /// coordinate-zeroing projections of the vertices.
    pub fn lower_hull(&self) -> Polytope {
        let mut points: Vec<Vec<f64>> = Vec::new();
        for v in &self.vertices {
            for mask in 0u32..(1 << self.n) {
                let p: Vec<f64> = (0..self.n)
                    .map(|j| if mask & (1 << j) != 0 { 0.0 } else { v[j] })
                    .collect();
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }
        Polytope::new(self.n, points).expect("projections stay valid")
    }

    /// Restriction to the face where the listed coordinates vanish, with those
    /// coordinates dropped. Because the polytope sits in the nonnegative
    /// orthant, that face is exactly the hull of the vertices whose listed
    /// coordinates are zero, at every dimension.
    pub fn face_restrict(&self, zeroed: &[usize]) -> Result<Polytope, PolytopeError> {
        let mut sorted = zeroed.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let valid = sorted.len() == zeroed.len()
            && !sorted.is_empty()
            && sorted.len() < self.n
            && sorted.iter().all(|&j| j < self.n);
        if !valid {
            return Err(PolytopeError::InvalidSubset(zeroed.to_vec()));
        }
        let kept: Vec<usize> = (0..self.n).filter(|j| !sorted.contains(j)).collect();
        let mut points: Vec<Vec<f64>> = Vec::new();
        for v in &self.vertices {
            if sorted.iter().all(|&j| v[j] <= FACE_ZERO_TOL) {
                let p: Vec<f64> = kept.iter().map(|&j| v[j]).collect();
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }
        Polytope::new(kept.len(), points)
    }

    /// Hull of the union of vertex sets.
    pub fn hull_union(&self, other: &Polytope) -> Result<Polytope, PolytopeError> {
        if self.n != other.n {
            return Err(PolytopeError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut points = self.vertices.clone();
        points.extend(other.vertices.iter().cloned());
        Polytope::new(self.n, points)
    }

    /// Minimal generating set: vertices that are not convex combinations of
    /// the other vertices.
    pub fn extreme_points(&self) -> Vec<Vec<f64>> {
        let m = self.vertices.len();
        if m == 1 {
            return self.vertices.clone();
        }
        let mut extreme = Vec::new();
        for i in 0..m {
            let others: Vec<Vec<f64>> = (0..m)
                .filter(|&k| k != i)
                .map(|k| self.vertices[k].clone())
                .collect();
            if hull_residual(&others, &self.vertices[i]) > MEMBERSHIP_TOL {
                extreme.push(self.vertices[i].clone());
            }
        }
        extreme
    }

    /// The polytope scaled by `t >= 0`.
    pub fn scale(&self, t: f64) -> Polytope {
        assert!(t.is_finite() && t >= 0.0);
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|&c| c * t).collect())
            .collect();
        Polytope::new(self.n, vertices).expect("scaling preserves validity")
    }

    /// Largest `a` such that the scaled standard simplex a*conv{0, e_1..e_n}
    /// fits inside, found by bisection on membership of the axis points.
    pub fn inscribed_simplex_scale(&self) -> f64 {
        let mut best = f64::INFINITY;
        for j in 0..self.n {
            let mut axis = vec![0.0; self.n];
            axis[j] = 1.0;
            let mut lo = 0.0;
            let mut hi = self.support(&axis);
            if hi <= 0.0 {
                return 0.0;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let mut p = vec![0.0; self.n];
                p[j] = mid;
                if self.contains(&p) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            best = best.min(lo);
        }
        best
    }
}

/// Phase-1 simplex: minimal sum of artificial variables for
/// `sum lambda_i v_i = x, sum lambda_i = 1, lambda >= 0`.
/// Dense tableau with Bland's rule; artificial columns never re-enter.
fn hull_residual(vertices: &[Vec<f64>], x: &[f64]) -> f64 {
    let n = x.len();
    let m = vertices.len();
    if m == 0 {
        return x.iter().map(|c| c.abs()).sum::<f64>() + 1.0;
    }
    let rows = n + 1;
    let cols = m + rows;
    const PIVOT_TOL: f64 = 1e-11;

    // tableau[i] holds the constraint row and its RHS at position `cols`
    let mut t = vec![vec![0.0f64; cols + 1]; rows];
    for i in 0..n {
        for (jv, v) in vertices.iter().enumerate() {
            t[i][jv] = v[i];
        }
        t[i][cols] = x[i];
    }
    t[n][..m].fill(1.0);
    t[n][cols] = 1.0;
    // flip rows so RHS >= 0, then artificial i is basic in row i
    for (i, row) in t.iter_mut().enumerate() {
        if row[cols] < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
        }
        row[m + i] = 1.0;
    }
    // objective row: reduced costs for minimizing the artificial sum
    let mut obj = vec![0.0f64; cols + 1];
    for row in &t {
        for (o, v) in obj.iter_mut().zip(row) {
            *o += v;
        }
    }
    for i in 0..rows {
        obj[m + i] = 0.0;
    }
    let mut basis: Vec<usize> = (0..rows).map(|i| m + i).collect();

    let max_iter = 60 * (cols + 2);
    for _ in 0..max_iter {
        // Bland: smallest non-artificial column with positive reduced cost
        let Some(enter) = (0..m).find(|&j| obj[j] > PIVOT_TOL) else {
            break;
        };
        // ratio test, Bland tie-break on basis column
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..rows {
            if t[i][enter] > PIVOT_TOL {
                let ratio = t[i][cols] / t[i][enter];
                let better = ratio < best_ratio - PIVOT_TOL
                    || (ratio < best_ratio + PIVOT_TOL
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            break; // unbounded cannot happen with the sum-to-one row; bail out
        };
        let piv = t[r][enter];
        t[r].iter_mut().for_each(|v| *v /= piv);
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && row[enter].abs() > 0.0 {
                let f = row[enter];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = obj[enter];
        if f.abs() > 0.0 {
            for (o, pv) in obj.iter_mut().zip(&pivot_row) {
                *o -= f * pv;
            }
        }
        basis[r] = enter;
    }

    let mut infeasibility = 0.0;
    for i in 0..rows {
        if basis[i] >= m {
            infeasibility += t[i][cols].max(0.0);
        }
    }
    infeasibility
}

/// Serialized form: `{"n": 2, "vertices": [[0, 0], [1, 0]]}`. Coordinates are
/// JSON numbers or decimal strings.
#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    n: usize,
    vertices: Vec<Vec<Coord>>,
}

struct Coord(f64);

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Coord(x)),
            Raw::Str(s) => s
                .trim()
                .parse::<f64>()
                .map(Coord)
                .map_err(|e| D::Error::custom(format!("bad coordinate {s:?}: {e}"))),
        }
    }
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = PolytopeRepr {
            n: self.n,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|&c| Coord(c)).collect())
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PolytopeRepr::deserialize(d)?;
        let vertices = repr
            .vertices
            .into_iter()
            .map(|v| v.into_iter().map(|c| c.0).collect())
            .collect();
        Polytope::new(repr.n, vertices).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn origin_is_adjoined_and_duplicates_dropped() {
        let p = Polytope::new(2, vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert!(p.vertices().contains(&vec![0.0, 0.0]));
    }

    #[test]
    fn rejects_bad_vertices() {
        assert!(Polytope::new(2, vec![vec![-0.1, 0.0]]).is_err());
        assert!(Polytope::new(2, vec![vec![f64::NAN, 0.0]]).is_err());
        assert!(Polytope::new(2, vec![vec![1.0]]).is_err());
        assert!(Polytope::new(7, vec![]).is_err());
        assert!(Polytope::new(0, vec![]).is_err());
    }

    #[test]
    fn support_matches_hand_values() {
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        // vertices (0,0), (1,0), (0,1), (3,1)
        assert_eq!(p.support(&[1.0, 1.0]), 4.0);
        assert_eq!(p.support(&[1.0, 0.0]), 3.0);
        assert_eq!(p.support(&[0.0, 1.0]), 1.0);
        assert_eq!(p.support(&[-1.0, -1.0]), 0.0);
        assert_eq!(p.sigma(), 4.0);
    }

    #[test]
    fn membership_accepts_convex_combinations() {
        // oracle: random convex combinations of vertices are members
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let mut w: Vec<f64> = (0..p.vertices().len()).map(|_| rng.gen::<f64>()).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            let mut point = vec![0.0; 2];
            for (wi, v) in w.iter().zip(p.vertices()) {
                point[0] += wi * v[0];
                point[1] += wi * v[1];
            }
            assert!(p.contains(&point), "convex combination {point:?} rejected");
        }
    }

    #[test]
    fn membership_rejects_separated_points() {
        // oracle: push the support-attaining vertex past the supporting
        // hyperplane; the result must land outside
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let xi: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            if norm < 1e-3 {
                continue;
            }
            let best = p
                .vertices()
                .iter()
                .max_by(|a, b| {
                    let da = a[0] * xi[0] + a[1] * xi[1];
                    let db = b[0] * xi[0] + b[1] * xi[1];
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap()
                .clone();
            let t = rng.gen_range(1e-4..1.0);
            let point = [best[0] + t * xi[0] / norm, best[1] + t * xi[1] / norm];
            assert!(
                !p.contains(&point),
                "point {point:?} at distance {t} past the boundary accepted"
            );
        }
    }

    #[test]
    fn membership_examples() {
        let p = fixtures::example_quadrilateral(1.0, 3.0);
        assert!(p.contains(&[1.5, 0.5]));
        assert!(!p.contains(&[3.0, 0.0]));
        let degenerate = Polytope::new(2, vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(degenerate.contains(&[0.5, 0.5]));
    }

    #[test]
    fn lower_set_examples() {
        assert!(fixtures::simplex(2).is_lower());
        assert!(fixtures::unit_box(2).is_lower());
        assert!(!fixtures::example_quadrilateral(1.0, 3.0).is_lower());
        assert!(!fixtures::diagonal_segment().is_lower());
        assert!(fixtures::origin(3).is_lower());
    }

    #[test]
    fn lower_hull_examples() {
        let p = fixtures::diagonal_segment();
        let lh = p.lower_hull();
        assert!(lh.is_lower());
        assert!(lh.contains(&[1.0, 0.0]) && lh.contains(&[0.0, 1.0]));
        // contains the original and is idempotent
        for v in p.vertices() {
            assert!(lh.contains(v));
        }
        let lh2 = lh.lower_hull();
        let mut e1: Vec<Vec<f64>> = lh.extreme_points();
        let mut e2: Vec<Vec<f64>> = lh2.extreme_points();
        e1.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e2.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(e1, e2);

        let q = fixtures::example_quadrilateral(1.0, 3.0).lower_hull();
        assert!(q.is_lower());
        assert!(q.contains(&[3.0, 0.0]));
    }

    #[test]
    fn face_restrict_examples() {
        let seg = fixtures::diagonal_segment();
        let t = seg.face_restrict(&[1]).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.extreme_points(), vec![vec![0.0]]);

        let quad = fixtures::example_quadrilateral(1.0, 3.0);
        let t = quad.face_restrict(&[1]).unwrap();
        let mut ext = t.extreme_points();
        ext.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(ext, vec![vec![0.0], vec![1.0]]);

        let boxp = fixtures::unit_box(2);
        let t = boxp.face_restrict(&[1]).unwrap();
        assert!(t.contains(&[1.0]) && t.contains(&[0.0]) && !t.contains(&[1.1]));

        assert!(quad.face_restrict(&[0, 1]).is_err());
        assert!(quad.face_restrict(&[]).is_err());
        assert!(quad.face_restrict(&[2]).is_err());
    }

    #[test]
    fn extreme_points_examples() {
        assert_eq!(fixtures::simplex(2).extreme_points().len(), 3);
        assert_eq!(fixtures::origin(2).extreme_points().len(), 1);
        // interior and edge points are not extreme
        let p = Polytope::new(
            2,
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.5, 0.5],
                vec![0.25, 0.25],
            ],
        )
        .unwrap();
        let ext = p.extreme_points();
        assert_eq!(ext.len(), 3);
        assert!(!ext.contains(&vec![0.5, 0.5]));
    }

    #[test]
    fn hull_union_merges_vertex_sets() {
        let a = fixtures::simplex(2).scale(0.5);
        let b = fixtures::example_quadrilateral(1.0, 3.0);
        let u = a.hull_union(&b).unwrap();
        assert!(u.contains(&[0.5, 0.0]) && u.contains(&[3.0, 1.0]));
        assert!(a.hull_union(&fixtures::simplex(3)).is_err());
    }

    #[test]
    fn inscribed_simplex_scale_examples() {
        let s = fixtures::simplex(2);
        assert!((s.inscribed_simplex_scale() - 1.0).abs() < 1e-9);
        let half = fixtures::simplex(2).scale(0.5);
        let u = half
            .hull_union(&fixtures::example_quadrilateral(1.0, 3.0))
            .unwrap();
        // axis reach along x2 is capped by the hull of (0, 1) absent: max is 1
        assert!(u.inscribed_simplex_scale() > 0.4);
        // degenerate in the axis directions: only tolerance-level reach
        assert!(fixtures::diagonal_segment().inscribed_simplex_scale() < 2e-9);
    }

    #[test]
    fn support_function_invariants_sampled() {
        let fixtures: Vec<Polytope> = vec![
            fixtures::simplex(2),
            fixtures::unit_box(2),
            fixtures::example_quadrilateral(1.0, 3.0),
            fixtures::simplex(3),
            fixtures::unit_box(4),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for p in &fixtures {
            let n = p.dim();
            let sigma = p.sigma();
            for _ in 0..1000 {
                let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
                let eta: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
                let t = rng.gen_range(0.0..4.0);
                // positive homogeneity
                let scaled: Vec<f64> = xi.iter().map(|&c| c * t).collect();
                assert!(
                    (p.support(&scaled) - t * p.support(&xi)).abs()
                        <= 1e-9 * (1.0 + p.support(&xi).abs() * t)
                );
                // subadditivity
                let sum: Vec<f64> = xi.iter().zip(&eta).map(|(&a, &b)| a + b).collect();
                assert!(p.support(&sum) <= p.support(&xi) + p.support(&eta) + 1e-9);
                // sup-norm Lipschitz bound with constant sigma
                let dist = xi
                    .iter()
                    .zip(&eta)
                    .map(|(&a, &b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!((p.support(&xi) - p.support(&eta)).abs() <= sigma * dist + 1e-9);
                // support is nonnegative at nonnegative directions times any sign flip:
                // the origin vertex forces support >= 0 everywhere
                assert!(p.support(&xi) >= 0.0);
            }
        }
    }

    #[test]
    fn monotone_in_the_vertex_set() {
        let small = fixtures::simplex(2).scale(0.5);
        let big = fixtures::example_quadrilateral(1.0, 3.0);
        let u = small.hull_union(&big).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let xi: Vec<f64> = (0..2).map(|_| rng.gen_range(-5.0..5.0)).collect();
            assert!(small.support(&xi) <= u.support(&xi) + 1e-12);
            assert!(big.support(&xi) <= u.support(&xi) + 1e-12);
        }
    }

    #[test]
    fn lower_dual_characterization_sampled() {
        // lower sets satisfy support(xi) = support(xi clipped at 0); non-lower
        // sets must fail somewhere
        let cases = vec![
            (fixtures::simplex(2), true),
            (fixtures::unit_box(3), true),
            (fixtures::example_quadrilateral(1.0, 3.0), false),
            (fixtures::diagonal_segment(), false),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for (p, lower) in cases {
            assert_eq!(p.is_lower(), lower);
            let n = p.dim();
            let mut all_match = true;
            for _ in 0..1000 {
                let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let clipped: Vec<f64> = xi.iter().map(|&c| c.max(0.0)).collect();
                if (p.support(&xi) - p.support(&clipped)).abs() > 1e-9 {
                    all_match = false;
                }
            }
            assert_eq!(
                all_match, lower,
                "dual characterization disagrees for {p:?}"
            );
        }
    }

    #[test]
    fn json_round_trip_and_decimal_strings() {
        let text = r#"{"n": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["3", "1"]]}"#;
        let p: Polytope = serde_json::from_str(text).unwrap();
        // same hull as the quadrilateral fixture, stored order aside
        let mut got = p.vertices().to_vec();
        let mut want = fixtures::example_quadrilateral(1.0, 3.0)
            .vertices()
            .to_vec();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want);
        let out = serde_json::to_string(&p).unwrap();
        let p2: Polytope = serde_json::from_str(&out).unwrap();
        assert_eq!(p, p2);
    }
}
