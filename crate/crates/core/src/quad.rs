//! Quadrature rules for the smoothing kernels.
//!
//! The radial direction uses a Gauss rule built for the weighted measure
//! chi(rho) * rho * drho on [0, 1], where chi is the kernel profile. Building
//! the rule against the profile (discretized Stieltjes recurrence, then
//! nodes from the Jacobi matrix) keeps the kernel mass exact and leaves only
//! the smooth part of integrands to the quadrature, so doubling the order
//! moves results at machine-precision scale. The angular direction uses the
//! uniform trapezoid rule on the circle, which is spectrally accurate for
//! periodic integrands.

use std::sync::{Arc, OnceLock};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th positive root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&t| half * t).collect(),
    )
}

/// The default radial profile: the standard bump exp(-1/(1-rho^2)) on [0, 1).
pub fn bump_profile(rho: f64) -> f64 {
    if rho >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - rho * rho)).exp()
    }
}

/// A Gauss rule for the measure chi(rho) * rho * drho on [0, 1].
#[derive(Debug, Clone)]
pub struct RadialRule {
    /// Nodes in (0, 1), increasing.
    pub nodes: Vec<f64>,
    /// Weights normalized to sum to exactly 1.
    pub weights: Vec<f64>,
    /// Total measure mass integral chi(rho) rho drho before normalization.
    pub raw_mass: f64,
}

impl RadialRule {
    pub fn for_profile(profile: &(dyn Fn(f64) -> f64 + Sync), n: usize) -> RadialRule {
        // reference discretization of the measure: composite Gauss-Legendre
        let panels = 80;
        let per = 24;
        let (gx, gw) = gauss_legendre(per);
        let mut rx = Vec::with_capacity(panels * per);
        let mut dmu = Vec::with_capacity(panels * per);
        for p in 0..panels {
            let a = p as f64 / panels as f64;
            let b = (p + 1) as f64 / panels as f64;
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            for i in 0..per {
                let x = mid + half * gx[i];
                rx.push(x);
                dmu.push(half * gw[i] * profile(x) * x);
            }
        }
        let b0: f64 = dmu.iter().sum();
        assert!(b0 > 0.0, "profile mass must be positive");

        // Stieltjes: recurrence coefficients of the orthonormal polynomials
        let mut alpha = vec![0.0; n];
        let mut beta: Vec<f64> = vec![0.0; n]; // beta[0] unused; beta[k] links p_{k-1} -> p_k
        let len = rx.len();
        let mut p_prev = vec![0.0; len];
        let mut p: Vec<f64> = vec![1.0 / b0.sqrt(); len];
        for k in 0..n {
            let mut a_k = 0.0;
            for i in 0..len {
                a_k += dmu[i] * rx[i] * p[i] * p[i];
            }
            alpha[k] = a_k;
            if k + 1 < n {
                let sb = if k > 0 { beta[k].sqrt() } else { 0.0 };
                let mut q = vec![0.0; len];
                let mut nb = 0.0;
                for i in 0..len {
                    q[i] = (rx[i] - a_k) * p[i] - sb * p_prev[i];
                    nb += dmu[i] * q[i] * q[i];
                }
                beta[k + 1] = nb;
                let s = nb.sqrt();
                p_prev = p;
                p = q.into_iter().map(|v| v / s).collect();
            }
        }

        // nodes: eigenvalues of the Jacobi matrix by bisection with Sturm counts
        let off: Vec<f64> = (1..n).map(|k| beta[k].sqrt()).collect();
        let nodes = tridiagonal_eigenvalues(&alpha, &off);

        // weights: Christoffel numbers from the orthonormal recurrence
        let mut weights = Vec::with_capacity(n);
        for &x in &nodes {
            let mut s = 0.0;
            let mut q0 = 1.0 / b0.sqrt();
            s += q0 * q0;
            let mut q1 = if n > 1 {
                (x - alpha[0]) * q0 / off[0]
            } else {
                0.0
            };
            if n > 1 {
                s += q1 * q1;
            }
            for k in 1..n.saturating_sub(1) {
                let q2 = ((x - alpha[k]) * q1 - off[k - 1] * q0) / off[k];
                q0 = q1;
                q1 = q2;
                s += q2 * q2;
            }
            weights.push(1.0 / s);
        }
        let total: f64 = weights.iter().sum();
        debug_assert!((total / b0 - 1.0).abs() < 1e-10);
        let weights = weights.into_iter().map(|w| w / total).collect();
        RadialRule {
            nodes,
            weights,
            raw_mass: b0,
        }
    }

    /// Integral of f against the normalized measure.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix, increasing, by bisection
/// driven by Sturm sequence counts.
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let radius: f64 = {
        let mut r: f64 = 0.0;
        for i in 0..n {
            let mut g = diag[i].abs();
            if i > 0 {
                g += off[i - 1].abs();
            }
            if i < n - 1 {
                g += off[i].abs();
            }
            r = r.max(g);
        }
        r + 1.0
    };
    // count of eigenvalues strictly below lambda
    let count_below = |lambda: f64| -> usize {
        let mut count = 0;
        let mut d = 1.0f64;
        for i in 0..n {
            let o2 = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
            d = diag[i] - lambda - o2 / d;
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut eigs = Vec::with_capacity(n);
    for k in 0..n {
        let mut lo = -radius;
        let mut hi = radius;
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON * radius {
                break;
            }
        }
        eigs.push(0.5 * (lo + hi));
    }
    eigs
}

/// Smoothing kernel: product over variables of a radial bump on the unit
/// disc, each factor normalized to unit mass, sampled by a profile-weighted
/// Gauss rule in rho and the uniform trapezoid rule in theta.
#[derive(Clone)]
pub struct Kernel {
    n_radial: usize,
    n_angular: usize,
    radial: Arc<RadialRule>,
    /// 2-D disc integral of the raw profile; the per-variable factor divides by it.
    per_variable_mass: f64,
}

pub const DEFAULT_RADIAL_ORDER: usize = 24;
pub const DEFAULT_ANGULAR_ORDER: usize = 32;

impl Kernel {
    pub fn new(n_radial: usize, n_angular: usize) -> Kernel {
        assert!(n_radial >= 2 && n_angular >= 4);
        let radial = Arc::new(RadialRule::for_profile(&bump_profile, n_radial));
        let per_variable_mass = std::f64::consts::TAU * radial.raw_mass;
        Kernel {
            n_radial,
            n_angular,
            radial,
            per_variable_mass,
        }
    }

    /// The default 24 x 32 rule, built once.
    pub fn standard() -> &'static Kernel {
        static STANDARD: OnceLock<Kernel> = OnceLock::new();
        STANDARD.get_or_init(|| Kernel::new(DEFAULT_RADIAL_ORDER, DEFAULT_ANGULAR_ORDER))
    }

    /// Same profile at doubled orders, for convergence gating.
    pub fn doubled(&self) -> Kernel {
        Kernel::new(2 * self.n_radial, 2 * self.n_angular)
    }

    pub fn n_radial(&self) -> usize {
        self.n_radial
    }

    pub fn n_angular(&self) -> usize {
        self.n_angular
    }

    pub fn per_variable_mass(&self) -> f64 {
        self.per_variable_mass
    }

    /// Radial nodes with normalized weights (summing to 1).
    pub fn radial_nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radial
            .nodes
            .iter()
            .zip(&self.radial.weights)
            .map(|(&x, &w)| (x, w))
    }

    /// Uniform angular nodes, each carrying weight 1/n_angular.
    pub fn angular_nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let k = self.n_angular;
        (0..k).map(move |i| std::f64::consts::TAU * (i as f64) / (k as f64))
    }

    /// Per-variable node list: offsets rho * e^{i theta} inside the unit disc
    /// with weights summing to exactly 1.
    pub fn disc_nodes(&self) -> Vec<DiscNode> {
        let mut out = Vec::with_capacity(self.n_radial * self.n_angular);
        let aw = 1.0 / self.n_angular as f64;
        for (rho, rw) in self.radial_nodes() {
            for theta in self.angular_nodes() {
                out.push(DiscNode {
                    rho,
                    theta,
                    weight: rw * aw,
                });
            }
        }
        out
    }

    /// Unit mass of the normalized per-variable factor, re-evaluated with this
    /// rule. Exact up to rounding by construction.
    pub fn self_mass(&self) -> f64 {
        self.disc_nodes().iter().map(|n| n.weight).sum()
    }

    /// Integral of f(rho) against the normalized radial measure.
    pub fn radial_moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.radial.integrate(f)
    }

    /// Second radial moment, used by closed-form comparisons.
    pub fn second_moment(&self) -> f64 {
        self.radial_moment(|r| r * r)
    }

    /// Log-radial moment: the smoothing value of log|.| at the origin minus
    /// log of the scale.
    pub fn log_moment(&self) -> f64 {
        self.radial_moment(f64::ln)
    }
}

impl std::fmt::Debug for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kernel")
            .field("n_radial", &self.n_radial)
            .field("n_angular", &self.n_angular)
            .field("per_variable_mass", &self.per_variable_mass)
            .finish()
    }
}

/// One quadrature node of the per-variable disc rule.
#[derive(Debug, Clone, Copy)]
pub struct DiscNode {
    pub rho: f64,
    pub theta: f64,
    pub weight: f64,
}
