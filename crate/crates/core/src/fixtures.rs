//! Standard polytopes and grids used across tests, reports, and benches.

use crate::polytope::Polytope;

/// Standard simplex: hull of the origin and the unit axis points.
pub fn simplex(n: usize) -> Polytope {
    let mut gens = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        gens.push(e);
    }
    Polytope::new(n, gens).expect("simplex generators are valid")
}

/// Unit box: hull of all 0/1 vectors.
pub fn unit_box(n: usize) -> Polytope {
    let mut gens = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        gens.push((0..n).map(|j| ((mask >> j) & 1) as f64).collect());
    }
    Polytope::new(n, gens).expect("box generators are valid")
}

/// The plane quadrilateral hull{(0,0), (a,0), (0,a), (b,a)}. For b > a(a+1)
/// it is not a lower set and drives the continuity counterexamples.
pub fn example_quadrilateral(a: f64, b: f64) -> Polytope {
    Polytope::new(2, vec![vec![a, 0.0], vec![0.0, a], vec![b, a]])
        .expect("quadrilateral generators are valid")
}

/// Segment from the origin to (1, 1); not a lower set.
pub fn diagonal_segment() -> Polytope {
    Polytope::new(2, vec![vec![1.0, 1.0]]).expect("segment generators are valid")
}

/// The origin alone.
pub fn origin(n: usize) -> Polytope {
    Polytope::new(n, vec![]).expect("origin is valid")
}

/// Triangle hull{(0,0), (1,1), (1,0)}: support along (-1, 1) vanishes, which
/// refutes the componentwise sup formula on inverse-modulus curves.
pub fn corner_triangle() -> Polytope {
    Polytope::new(2, vec![vec![1.0, 1.0], vec![1.0, 0.0]]).expect("triangle generators are valid")
}

/// Nested decreasing quarter-disc approximations with 3, 4, 6, 10 extreme
/// points. Each polygon inscribes the quarter circle of its radius; the next
/// radius equals the previous polygon's arc inradius, so the chain decreases
/// while the extreme-point count grows.
pub fn inscribed_chain() -> Vec<Polytope> {
    let mut chain = Vec::new();
    let mut radius = 1.0f64;
    for &m in &[1usize, 2, 4, 8] {
        let mut gens = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let theta = (k as f64) * std::f64::consts::FRAC_PI_2 / (m as f64);
            gens.push(vec![radius * theta.cos(), radius * theta.sin()]);
        }
        chain.push(Polytope::new(2, gens).expect("arc generators are valid"));
        radius *= (std::f64::consts::PI / (4.0 * m as f64)).cos();
    }
    chain
}
