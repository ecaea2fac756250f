//! The regularization operators and the gluing construction.
//!
//! Four operators share one contract: each is a one-parameter family
//! R_delta u that never drops below u at the evaluation point (witness
//! nodes guarantee this even under search truncation) and whose excess over
//! u is controlled by the growth envelope. The two search-based operators
//! underestimate a supremum or overestimate an infimum only in the safe
//! direction for that contract.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cpoint::CPoint;
use crate::distance::DistanceFn;
use crate::error::RegularizeError;
use crate::evaluable::{Evaluable, EvaluableHandle, Growth, Scaled};
use crate::logsupport::hs;
use crate::polytope::Polytope;
use crate::quad::Kernel;
use crate::report::{Cell, Report};
use crate::search::{self, Axis, SearchConfig};

/// Finite values below this are clamped by the averaging operator and the
/// clamp is flagged; the level is far below anything the bounded fixtures
/// produce, so a flag means a genuine near-singularity.
pub const VALUE_FLOOR: f64 = -1e6;

/// Tolerance for the pointwise decrease check in sequence utilities; covers
/// line-search jitter in operator-produced tables without masking real rises.
pub const DECREASE_TOL: f64 = 1e-7;

/// Value of one operator application plus numerical honesty flags.
#[derive(Debug, Clone, Copy)]
pub struct OpOutcome {
    pub value: f64,
    /// The base value u(z) was -inf; localization fell back to a unit-scale
    /// ball instead of the value-dependent one.
    pub nonfinite_center: bool,
    /// Some finite node value lay below VALUE_FLOOR and was clamped.
    pub underflow: bool,
    /// Total quadrature weight of -inf nodes encountered.
    pub neg_inf_weight: f64,
}

/// The operator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    /// Infimal convolution against a distance weight.
    InfConv,
    /// Supremal convolution with a multiplicative dilation penalty.
    SupConv,
    /// Multiplicative-average smoothing (plain mean of values).
    IntConv,
    /// Multiplicative-average smoothing through the exponential.
    LogIntConv,
    /// Additive smoothing by a shrinking bump.
    StdSmooth,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::InfConv => "inf_conv",
            OpKind::SupConv => "sup_conv",
            OpKind::IntConv => "int_conv",
            OpKind::LogIntConv => "log_int_conv",
            OpKind::StdSmooth => "std_smooth",
        }
    }

    pub fn parse(s: &str) -> Option<OpKind> {
        match s {
            "inf_conv" | "a" => Some(OpKind::InfConv),
            "sup_conv" | "b" => Some(OpKind::SupConv),
            "int_conv" | "c" => Some(OpKind::IntConv),
            "log_int_conv" | "d" => Some(OpKind::LogIntConv),
            "std_smooth" => Some(OpKind::StdSmooth),
            _ => None,
        }
    }
}

fn check_delta_positive(delta: f64) -> Result<(), RegularizeError> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(RegularizeError::BadParameters(format!(
            "delta must be positive and finite, got {delta}"
        )));
    }
    Ok(())
}

/// Infimal convolution: -log inf_w { e^{-u(w)} + mu(z - w)/delta }.
///
/// The infimum is localized: any w that beats the w = z witness satisfies
/// mu(z - w) <= delta e^{-u(z)}, so the search box is the corresponding
/// euclidean ball. The objective is evaluated shifted by u(z) so that the
/// witness sits at exactly 1, which keeps the arithmetic in range whatever
/// the magnitude of u(z). The w = z anchor makes the result >= u(z) by
/// construction.
pub fn inf_conv_a(
    u: &dyn Evaluable,
    mu: &DistanceFn,
    delta: f64,
    z: &CPoint,
    cfg: &SearchConfig,
) -> Result<OpOutcome, RegularizeError> {
    check_delta_positive(delta)?;
    let n = u.dim();
    if mu.dim() != n || z.dim() != n {
        return Err(RegularizeError::BadParameters(format!(
            "dimension mismatch: function {n}, weight {}, point {}",
            mu.dim(),
            z.dim()
        )));
    }
    let uz = u.eval(z);
    let nonfinite_center = uz == f64::NEG_INFINITY;
    let shift = if nonfinite_center { 0.0 } else { uz };
    // ball radius delta e^{-u(z)} / r_mu, clamped into a workable range
    let raw_radius = if nonfinite_center {
        delta / mu.r_mu()
    } else {
        delta * (-uz).exp() / mu.r_mu()
    };
    let radius = cfg
        .radius_override
        .unwrap_or(raw_radius)
        .clamp(1e-280, 1e12);

    let zc = z.to_complex();
    let objective = |params: &[f64]| -> f64 {
        let mut eta = vec![Complex64::new(0.0, 0.0); n];
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            eta[j] = Complex64::from_polar(params[2 * j], params[2 * j + 1]);
            w[j] = zc[j] - eta[j];
        }
        let uw = u.eval(&CPoint::from_complex(&w));
        let mut obj = (shift - uw).exp(); // e^{-(u(w) - shift)}
        let pen = mu.eval(&eta);
        if pen > 0.0 {
            let scaled = pen / delta * shift.exp();
            obj += if scaled.is_nan() {
                f64::INFINITY
            } else {
                scaled
            };
        }
        obj
    };

    let mut axes = Vec::with_capacity(2 * n);
    for _ in 0..n {
        axes.push(Axis::radial(radius, cfg.coarse, 1e-10));
        axes.push(Axis::angular(10));
    }
    let anchor = vec![0.0; 2 * n];
    let (_, best) = search::minimize(&objective, &axes, &[anchor], cfg);
    // best <= objective(eta = 0) = 1, so value >= shift = u(z)
    let value = if best <= 0.0 {
        f64::INFINITY
    } else {
        shift - best.ln()
    };
    Ok(OpOutcome {
        value,
        nonfinite_center,
        underflow: false,
        neg_inf_weight: 0.0,
    })
}

/// Supremal convolution: sup_w { u(z * w) - log(|w - 1|_inf + 1) / delta }.
///
/// Requires delta < 1 / sigma so the penalty slope beats the growth of u;
/// the supremum is then attained inside |w|_inf <= r with r computed from
/// the growth envelope and the value at the w = 1 witness. The witness
/// anchor makes the result >= u(z).
pub fn sup_conv_b(
    u: &dyn Evaluable,
    delta: f64,
    z: &CPoint,
    bounds: Option<(f64, f64)>,
    cfg: &SearchConfig,
) -> Result<OpOutcome, RegularizeError> {
    check_delta_positive(delta)?;
    let growth = u.growth().ok_or(RegularizeError::MissingGrowth)?;
    let sigma = growth.polytope.sigma();
    if sigma > 0.0 && delta >= 1.0 / sigma {
        return Err(RegularizeError::DeltaTooLarge {
            delta,
            limit: 1.0 / sigma,
        });
    }
    let n = u.dim();
    if z.dim() != n {
        return Err(RegularizeError::BadParameters(format!(
            "dimension mismatch: function {n}, point {}",
            z.dim()
        )));
    }
    let slope = 1.0 / delta - sigma;
    let uz = u.eval(z);
    let nonfinite_center = uz == f64::NEG_INFINITY;
    let (m1, m2) = match bounds {
        Some(b) => b,
        None => {
            let m1 = hs(&growth.polytope, z) + growth.upper_const;
            // any probe's penalized value certifies a lower bound for the
            // supremum; the best one keeps the localization radius sane
            // even when u(z) sits in a deep pole
            let mut best = uz;
            for &m in &[0.9f64, 1.0, 1.1] {
                for k in 0..4 {
                    let phi = std::f64::consts::TAU * k as f64 / 4.0;
                    let w = CPoint::new(vec![m.ln(); n], vec![phi; n]).unwrap();
                    let pen = (Complex64::from_polar(m, phi) - Complex64::new(1.0, 0.0)).norm();
                    let value = u.eval(&z.mul(&w)) - (pen + 1.0).ln() / delta;
                    best = best.max(value);
                }
            }
            let m2 = if best == f64::NEG_INFINITY {
                m1 - 30.0 * slope
            } else {
                best
            };
            (m1, m2)
        }
    };
    // beyond |w|_inf = r the penalty dominates any gain over the baseline
    let ln_r = ((m1 - m2) / slope).clamp(0.0, 30.0);
    let r_search = cfg.radius_override.unwrap_or(2.0 * ln_r.exp());

    let objective = |params: &[f64]| -> f64 {
        let mut lm = Vec::with_capacity(n);
        let mut ar = Vec::with_capacity(n);
        let mut worst = 0.0f64; // |w - 1|_inf
        for j in 0..n {
            let m = params[2 * j];
            let phi = params[2 * j + 1];
            lm.push(if m == 0.0 { f64::NEG_INFINITY } else { m.ln() });
            ar.push(phi);
            let dist = (Complex64::from_polar(m, phi) - Complex64::new(1.0, 0.0)).norm();
            if dist > worst {
                worst = dist;
            }
        }
        let w = CPoint::new(lm, ar).unwrap();
        let uval = u.eval(&z.mul(&w));
        if uval == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        uval - (worst + 1.0).ln() / delta
    };

    let mut axes = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let mut radial = Axis::radial(r_search, cfg.coarse, 1e-8);
        radial.grid.push(1.0);
        radial.grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        axes.push(radial);
        axes.push(Axis::angular(10));
    }
    let mut anchor = vec![0.0; 2 * n];
    for j in 0..n {
        anchor[2 * j] = 1.0;
    }
    let (_, value) = search::maximize(&objective, &axes, &[anchor], cfg);
    Ok(OpOutcome {
        value,
        nonfinite_center,
        underflow: false,
        neg_inf_weight: 0.0,
    })
}

/// Per-variable multiplicative offset nodes 1 + delta rho e^{i theta} in
/// log-polar form, with their weights.
fn dilation_nodes(kernel: &Kernel, delta: f64) -> Vec<(f64, f64, f64)> {
    kernel
        .disc_nodes()
        .iter()
        .map(|node| {
            let w = Complex64::new(1.0, 0.0) + Complex64::from_polar(delta * node.rho, node.theta);
            (
                w.norm().ln(),
                w.arg().rem_euclid(std::f64::consts::TAU),
                node.weight,
            )
        })
        .collect()
}

fn check_delta_unit(delta: f64) -> Result<(), RegularizeError> {
    check_delta_positive(delta)?;
    if delta >= 1.0 {
        return Err(RegularizeError::BadParameters(format!(
            "delta must be below 1 so dilation offsets stay off zero, got {delta}"
        )));
    }
    Ok(())
}

/// Multiplicative-average smoothing: mean of u over per-variable dilations
/// z_j (1 + delta rho e^{i theta}). Nodes at -inf make the mean -inf and
/// their weight is reported; finite values below VALUE_FLOOR are clamped
/// and flagged.
pub fn int_conv_c(
    u: &dyn Evaluable,
    delta: f64,
    z: &CPoint,
    kernel: &Kernel,
) -> Result<OpOutcome, RegularizeError> {
    check_delta_unit(delta)?;
    let n = u.dim();
    if z.dim() != n {
        return Err(RegularizeError::BadParameters(format!(
            "dimension mismatch: function {n}, point {}",
            z.dim()
        )));
    }
    let nodes = dilation_nodes(kernel, delta);
    let mut acc = 0.0f64;
    let mut neg_inf_weight = 0.0f64;
    let mut underflow = false;
    for_each_dilated(n, &nodes, z, |point, weight| {
        let val = u.eval(point);
        if val == f64::NEG_INFINITY {
            neg_inf_weight += weight;
        } else if val < VALUE_FLOOR {
            underflow = true;
            acc += weight * VALUE_FLOOR;
        } else {
            acc += weight * val;
        }
    });
    let value = if neg_inf_weight > 0.0 {
        f64::NEG_INFINITY
    } else {
        acc
    };
    Ok(OpOutcome {
        value,
        nonfinite_center: false,
        underflow,
        neg_inf_weight,
    })
}

/// Multiplicative-average smoothing through the exponential:
/// log of the mean of e^u over the same dilation nodes, computed by a
/// running rescaled sum. Nodes at -inf contribute exactly zero.
pub fn log_int_conv_d(
    u: &dyn Evaluable,
    delta: f64,
    z: &CPoint,
    kernel: &Kernel,
) -> Result<OpOutcome, RegularizeError> {
    check_delta_unit(delta)?;
    let n = u.dim();
    if z.dim() != n {
        return Err(RegularizeError::BadParameters(format!(
            "dimension mismatch: function {n}, point {}",
            z.dim()
        )));
    }
    let nodes = dilation_nodes(kernel, delta);
    let mut top = f64::NEG_INFINITY;
    let mut sum = 0.0f64;
    let mut neg_inf_weight = 0.0f64;
    for_each_dilated(n, &nodes, z, |point, weight| {
        let val = u.eval(point);
        if val == f64::NEG_INFINITY {
            neg_inf_weight += weight;
        } else if val <= top {
            sum += weight * (val - top).exp();
        } else {
            sum = sum * (top - val).exp() + weight;
            top = val;
        }
    });
    let value = if sum == 0.0 {
        f64::NEG_INFINITY
    } else {
        top + sum.ln()
    };
    Ok(OpOutcome {
        value,
        nonfinite_center: false,
        underflow: false,
        neg_inf_weight,
    })
}

/// Additive smoothing by the product bump at euclidean scale delta: mean of
/// u(z - w) with per-variable offsets of radius (delta / sqrt n) rho. Shares
/// the clamping policy of the multiplicative average.
pub fn std_smooth(
    u: &dyn Evaluable,
    delta: f64,
    z: &CPoint,
    kernel: &Kernel,
) -> Result<OpOutcome, RegularizeError> {
    check_delta_positive(delta)?;
    let n = u.dim();
    if z.dim() != n {
        return Err(RegularizeError::BadParameters(format!(
            "dimension mismatch: function {n}, point {}",
            z.dim()
        )));
    }
    if z.logmod().iter().any(|&m| m > 700.0) {
        return Err(RegularizeError::BadParameters(
            "modulus too large for additive smoothing".into(),
        ));
    }
    let scale = delta / (n as f64).sqrt();
    let zc = z.to_complex();
    let nodes = kernel.disc_nodes();
    let mut index = vec![0usize; n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = 0.0f64;
    let mut neg_inf_weight = 0.0f64;
    let mut underflow = false;
    'walk: loop {
        let mut weight = 1.0;
        for j in 0..n {
            let node = nodes[index[j]];
            w[j] = zc[j] - Complex64::from_polar(scale * node.rho, node.theta);
            weight *= node.weight;
        }
        let val = u.eval(&CPoint::from_complex(&w));
        if val == f64::NEG_INFINITY {
            neg_inf_weight += weight;
        } else if val < VALUE_FLOOR {
            underflow = true;
            acc += weight * VALUE_FLOOR;
        } else {
            acc += weight * val;
        }
        let mut k = n;
        while k > 0 {
            k -= 1;
            index[k] += 1;
            if index[k] < nodes.len() {
                continue 'walk;
            }
            index[k] = 0;
        }
        break;
    }
    let value = if neg_inf_weight > 0.0 {
        f64::NEG_INFINITY
    } else {
        acc
    };
    Ok(OpOutcome {
        value,
        nonfinite_center: false,
        underflow,
        neg_inf_weight,
    })
}

/// Shared tensor loop over per-variable log-polar offset nodes applied
/// multiplicatively to z.
fn for_each_dilated(
    n: usize,
    nodes: &[(f64, f64, f64)],
    z: &CPoint,
    mut f: impl FnMut(&CPoint, f64),
) {
    let mut index = vec![0usize; n];
    let mut lm = vec![0.0f64; n];
    let mut ar = vec![0.0f64; n];
    'walk: loop {
        let mut weight = 1.0;
        for j in 0..n {
            let (l, a, w) = nodes[index[j]];
            let zl = z.logmod()[j];
            lm[j] = if zl == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                zl + l
            };
            ar[j] = (z.arg()[j] + a).rem_euclid(std::f64::consts::TAU);
            weight *= w;
        }
        let point = CPoint::new(lm.clone(), ar.clone()).unwrap();
        f(&point, weight);
        let mut k = n;
        while k > 0 {
            k -= 1;
            index[k] += 1;
            if index[k] < nodes.len() {
                continue 'walk;
            }
            index[k] = 0;
        }
        break;
    }
}

/// Dispatch one operator application.
#[allow(clippy::too_many_arguments)]
pub fn apply(
    kind: OpKind,
    u: &dyn Evaluable,
    delta: f64,
    z: &CPoint,
    mu: &DistanceFn,
    kernel: &Kernel,
    search: &SearchConfig,
    bounds: Option<(f64, f64)>,
) -> Result<OpOutcome, RegularizeError> {
    match kind {
        OpKind::InfConv => inf_conv_a(u, mu, delta, z, search),
        OpKind::SupConv => sup_conv_b(u, delta, z, bounds, search),
        OpKind::IntConv => int_conv_c(u, delta, z, kernel),
        OpKind::LogIntConv => log_int_conv_d(u, delta, z, kernel),
        OpKind::StdSmooth => std_smooth(u, delta, z, kernel),
    }
}

/// One operator at a fixed delta, packaged as a function object.
pub struct Regularized {
    kind: OpKind,
    inner: EvaluableHandle,
    delta: f64,
    mu: DistanceFn,
    kernel: Kernel,
    search: SearchConfig,
    bounds: Option<(f64, f64)>,
}

impl Regularized {
    pub fn new(
        kind: OpKind,
        inner: EvaluableHandle,
        delta: f64,
    ) -> Result<Regularized, RegularizeError> {
        check_delta_positive(delta)?;
        match kind {
            OpKind::SupConv => {
                let growth = inner.growth().ok_or(RegularizeError::MissingGrowth)?;
                let sigma = growth.polytope.sigma();
                if sigma > 0.0 && delta >= 1.0 / sigma {
                    return Err(RegularizeError::DeltaTooLarge {
                        delta,
                        limit: 1.0 / sigma,
                    });
                }
            }
            OpKind::IntConv | OpKind::LogIntConv => check_delta_unit(delta)?,
            OpKind::InfConv | OpKind::StdSmooth => {}
        }
        let n = inner.dim();
        Ok(Regularized {
            kind,
            inner,
            delta,
            mu: DistanceFn::euclidean(n),
            kernel: Kernel::standard().clone(),
            search: SearchConfig::default(),
            bounds: None,
        })
    }

    pub fn with_distance(mut self, mu: DistanceFn) -> Result<Regularized, RegularizeError> {
        if mu.dim() != self.inner.dim() {
            return Err(RegularizeError::BadParameters(
                "distance weight dimension mismatch".into(),
            ));
        }
        self.mu = mu;
        Ok(self)
    }

    pub fn with_kernel(mut self, kernel: Kernel) -> Regularized {
        self.kernel = kernel;
        self
    }

    pub fn with_search(mut self, search: SearchConfig) -> Regularized {
        self.search = search;
        self
    }

    pub fn with_bounds(mut self, bounds: (f64, f64)) -> Regularized {
        self.bounds = Some(bounds);
        self
    }

    pub fn outcome(&self, z: &CPoint) -> Result<OpOutcome, RegularizeError> {
        apply(
            self.kind,
            self.inner.as_ref(),
            self.delta,
            z,
            &self.mu,
            &self.kernel,
            &self.search,
            self.bounds,
        )
    }
}

impl Evaluable for Regularized {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, z: &CPoint) -> f64 {
        self.outcome(z)
            .expect("parameters validated at construction")
            .value
    }
}

/// Spec for a delta-indexed monotonicity table.
pub struct MonotoneSpec<'a> {
    pub kind: OpKind,
    /// Strictly decreasing positive deltas.
    pub deltas: &'a [f64],
    pub grid: &'a [CPoint],
    /// Allowed pointwise rise between consecutive deltas.
    pub tol: f64,
    pub mu: Option<&'a DistanceFn>,
    pub kernel: Option<&'a Kernel>,
    pub search: SearchConfig,
    pub bounds: Option<(f64, f64)>,
}

/// Tabulates R_delta u on the grid for each delta and checks that values
/// decrease as delta does and that the gap to u shrinks. Passes iff both
/// hold within tol.
pub fn monotone_check(u: &dyn Evaluable, spec: &MonotoneSpec) -> Result<Report, RegularizeError> {
    if spec.deltas.is_empty() || spec.grid.is_empty() {
        return Err(RegularizeError::BadParameters(
            "need at least one delta and one grid point".into(),
        ));
    }
    for pair in spec.deltas.windows(2) {
        if pair[1] >= pair[0] || pair[0].is_nan() || pair[1].is_nan() {
            return Err(RegularizeError::BadParameters(
                "deltas must be strictly decreasing".into(),
            ));
        }
    }
    let n = u.dim();
    let default_mu = DistanceFn::euclidean(n);
    let mu = spec.mu.unwrap_or(&default_mu);
    let kernel = spec.kernel.unwrap_or_else(|| Kernel::standard());
    let u_vals: Vec<f64> = spec.grid.iter().map(|z| u.eval(z)).collect();

    let mut report = Report::new(&["delta", "max_rise", "violations", "max_gap", "verdict"]);
    let mut prev: Option<Vec<f64>> = None;
    let mut gaps: Vec<f64> = Vec::new();
    let mut all_ok = true;
    for &delta in spec.deltas {
        let row: Vec<f64> = spec
            .grid
            .par_iter()
            .map(|z| {
                apply(
                    spec.kind,
                    u,
                    delta,
                    z,
                    mu,
                    kernel,
                    &spec.search,
                    spec.bounds,
                )
                .map(|o| o.value)
            })
            .collect::<Result<Vec<f64>, RegularizeError>>()?;
        let mut max_rise = 0.0f64;
        let mut violations = 0usize;
        if let Some(prev_row) = &prev {
            for (cur, old) in row.iter().zip(prev_row) {
                let rise = match (cur.is_finite(), old.is_finite()) {
                    (true, true) => cur - old,
                    // -inf to anything is a fall or a tie, never a rise
                    _ => {
                        if *cur == f64::NEG_INFINITY {
                            f64::NEG_INFINITY
                        } else if *old == f64::NEG_INFINITY {
                            f64::INFINITY
                        } else {
                            0.0
                        }
                    }
                };
                if rise > spec.tol {
                    violations += 1;
                }
                if rise.is_finite() && rise > max_rise {
                    max_rise = rise;
                } else if rise == f64::INFINITY {
                    max_rise = f64::INFINITY;
                }
            }
        }
        let max_gap = row
            .iter()
            .zip(&u_vals)
            .map(|(r, &uv)| match (r.is_finite(), uv.is_finite()) {
                (true, true) => (r - uv).abs(),
                (false, false) => 0.0,
                _ => f64::INFINITY,
            })
            .fold(0.0f64, f64::max);
        let ok = violations == 0;
        all_ok &= ok;
        report.push_row(vec![
            Cell::Num(delta),
            Cell::Num(max_rise),
            Cell::Num(violations as f64),
            Cell::Num(max_gap),
            Cell::Text(if ok { "ok".into() } else { "rose".into() }),
        ]);
        gaps.push(max_gap);
        prev = Some(row);
    }
    let gaps_shrink = gaps.windows(2).all(|w| w[1] <= w[0] + spec.tol);
    report.set_passed(all_ok && gaps_shrink);
    Ok(report)
}

/// Largest 1-based index at which a pointwise-decreasing sequence still
/// fails to sit strictly below the comparison values; 0 when every element
/// is already below. Errors if the sequence is not decreasing within
/// DECREASE_TOL or if even the last element fails.
pub fn dini_index(values: &[Vec<f64>], bound: &[f64]) -> Result<usize, RegularizeError> {
    if values.is_empty() {
        return Err(RegularizeError::BadParameters("empty sequence".into()));
    }
    for (j, row) in values.iter().enumerate() {
        if row.len() != bound.len() {
            return Err(RegularizeError::BadParameters(format!(
                "row {j} has {} values, expected {}",
                row.len(),
                bound.len()
            )));
        }
    }
    for j in 1..values.len() {
        for (g, (curr, prev)) in values[j].iter().zip(&values[j - 1]).enumerate() {
            let rise = curr - prev;
            if rise > DECREASE_TOL {
                return Err(RegularizeError::NotDecreasing {
                    index: j + 1,
                    point: g,
                    rise,
                });
            }
        }
    }
    let below = |row: &[f64]| row.iter().zip(bound).all(|(v, b)| v < b);
    if !below(values.last().unwrap()) {
        return Err(RegularizeError::NeverBelow);
    }
    for j in (0..values.len()).rev() {
        if !below(&values[j]) {
            return Ok(j + 1);
        }
    }
    Ok(0)
}

/// Result of the gluing construction: the smoothed function inside the
/// polydisc of the outer radius, the shifted log-support outside, with the
/// crossover verified on the distinguished boundary at construction.
pub struct GluedFn {
    smooth: Arc<Regularized>,
    polytope: Polytope,
    cut: f64,
    ln_outer: f64,
    growth: Growth,
}

/// Glues max(H - C, smoothed t*u) inside the polydisc of radius `outer` to
/// H - C outside. Validates that the polytope pins growth (it must contain
/// a scaled standard simplex), that `outer` clears the crossover radius
/// implied by the growth constants, and that the smoothed branch actually
/// sits below the cut branch on the distinguished boundary.
pub fn glue(
    u: EvaluableHandle,
    p: &Polytope,
    cut: f64,
    t: f64,
    outer: f64,
    delta: f64,
    kernel: &Kernel,
) -> Result<GluedFn, RegularizeError> {
    if !(0.0 < t && t < 1.0) {
        return Err(RegularizeError::BadParameters(format!(
            "interpolation weight must lie in (0, 1), got {t}"
        )));
    }
    check_delta_positive(delta)?;
    if !(outer.is_finite() && outer > 1.0) {
        return Err(RegularizeError::BadParameters(format!(
            "outer radius must be finite and above 1, got {outer}"
        )));
    }
    let growth = u.growth().ok_or(RegularizeError::MissingGrowth)?;
    let polytope = p.clone();
    let c_u = growth.upper_const;
    if polytope.dim() != u.dim() {
        return Err(RegularizeError::BadParameters(format!(
            "polytope dimension {} does not match function dimension {}",
            polytope.dim(),
            u.dim()
        )));
    }
    let n = polytope.dim();
    let a_star = polytope.inscribed_simplex_scale();
    if a_star < 1e-9 {
        return Err(RegularizeError::BadParameters(
            "polytope must contain a scaled standard simplex to pin growth".into(),
        ));
    }
    let r0 = (((cut + t * c_u) / ((1.0 - t) * a_star)).max(0.0)).exp();
    if outer <= r0 {
        return Err(RegularizeError::BadParameters(format!(
            "outer radius {outer} does not clear the crossover radius {r0:.6e}"
        )));
    }

    let scaled: EvaluableHandle = Arc::new(Scaled {
        factor: t,
        inner: u,
    });
    let smooth =
        Arc::new(Regularized::new(OpKind::StdSmooth, scaled, delta)?.with_kernel(kernel.clone()));

    // the cut branch is constant on the distinguished boundary
    let ln_outer = outer.ln();
    let cut_value = polytope.support(&vec![ln_outer; n]) - cut;
    let k_b = match n {
        1 => 16,
        2 => 6,
        _ => 3,
    };
    let mut samples = Vec::new();
    let mut index = vec![0usize; n];
    loop {
        let arg: Vec<f64> = index
            .iter()
            .map(|&i| std::f64::consts::TAU * i as f64 / k_b as f64)
            .collect();
        samples.push(CPoint::new(vec![ln_outer; n], arg).unwrap());
        let mut k = n;
        let mut done = true;
        while k > 0 {
            k -= 1;
            index[k] += 1;
            if index[k] < k_b {
                done = false;
                break;
            }
            index[k] = 0;
        }
        if done {
            break;
        }
    }
    let margin = samples
        .par_iter()
        .map(|z| smooth.eval(z) - cut_value)
        .reduce(|| f64::NEG_INFINITY, f64::max);
    if margin >= 0.0 {
        return Err(RegularizeError::GlueMismatch { margin });
    }

    let upper_const = (-cut).max(margin + cut_value + 1e-9);
    let growth = Growth {
        polytope: polytope.clone(),
        upper_const,
        lower_const: Some(-cut),
    };
    Ok(GluedFn {
        smooth,
        polytope,
        cut,
        ln_outer,
        growth,
    })
}

impl GluedFn {
    /// The constant subtracted from the log-support on the outer branch.
    pub fn cut(&self) -> f64 {
        self.cut
    }
}

impl Evaluable for GluedFn {
    fn dim(&self) -> usize {
        self.polytope.dim()
    }

    fn eval(&self, z: &CPoint) -> f64 {
        let base = hs(&self.polytope, z) - self.cut;
        if z.logmod().iter().all(|&m| m < self.ln_outer) {
            base.max(self.smooth.eval(z))
        } else {
            base
        }
    }

    fn growth(&self) -> Option<&Growth> {
        Some(&self.growth)
    }
}
