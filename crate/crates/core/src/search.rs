//! Deterministic box-constrained minimization for the convolution operators.
//!
//! The objectives are cheap, low-dimensional, and multimodal across many
//! decades (a radial dip can sit five orders of magnitude below the box
//! radius), so the strategy is a dense coarse product grid with log-spaced
//! radial values, followed by cyclic coordinate descent with golden-section
//! line searches from the best cells. Everything is derandomized; results
//! depend only on the inputs.

/// One coordinate of the search box.
#[derive(Debug, Clone)]
pub struct Axis {
    /// Coarse grid, sorted ascending.
    pub grid: Vec<f64>,
    /// Hard bounds for refinement.
    pub lo: f64,
    pub hi: f64,
    /// Period for wrap-around coordinates (angles); bounds are ignored.
    pub period: Option<f64>,
}

impl Axis {
    /// Radial axis: zero plus a geometric sweep from `hi * floor_ratio` to `hi`.
    pub fn radial(hi: f64, points: usize, floor_ratio: f64) -> Axis {
        assert!(hi > 0.0 && hi.is_finite());
        assert!(floor_ratio > 0.0 && floor_ratio < 1.0);
        let mut grid = vec![0.0];
        let points = points.max(2);
        let lo = hi * floor_ratio;
        for k in 0..points {
            let t = k as f64 / (points - 1) as f64;
            grid.push(lo * (hi / lo).powf(t));
        }
        Axis {
            grid,
            lo: 0.0,
            hi,
            period: None,
        }
    }

    /// Angular axis: uniform grid on a full period.
    pub fn angular(points: usize) -> Axis {
        let period = std::f64::consts::TAU;
        let points = points.max(1);
        let grid = (0..points)
            .map(|k| period * k as f64 / points as f64)
            .collect();
        Axis {
            grid,
            lo: 0.0,
            hi: period,
            period: Some(period),
        }
    }

    /// Linear axis: uniform grid on [lo, hi].
    pub fn linear(lo: f64, hi: f64, points: usize) -> Axis {
        assert!(lo < hi);
        let points = points.max(2);
        let grid = (0..points)
            .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
            .collect();
        Axis {
            grid,
            lo,
            hi,
            period: None,
        }
    }

    fn clamp(&self, x: f64) -> f64 {
        match self.period {
            Some(p) => x.rem_euclid(p),
            None => x.clamp(self.lo, self.hi),
        }
    }

    /// Largest gap between adjacent grid values, the initial trust width.
    fn spacing(&self) -> f64 {
        self.grid
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
            .max((self.hi - self.lo) * 1e-3)
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Coarse points per radial axis built by the operators.
    pub coarse: usize,
    /// Refinement starts taken from the best coarse cells.
    pub multistart: usize,
    /// Cyclic rounds of coordinate descent per start.
    pub rounds: usize,
    /// Golden-section iterations per line search.
    pub line_iters: usize,
    /// Cap on coarse grid evaluations; grids are thinned to fit.
    pub budget: usize,
    /// Replaces the derived localization radius when set; used by the
    /// localization-soundness checks.
    pub radius_override: Option<f64>,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            coarse: 26,
            multistart: 6,
            rounds: 5,
            line_iters: 48,
            budget: 40_000,
            radius_override: None,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_line(
    f: &dyn Fn(&[f64]) -> f64,
    x: &mut [f64],
    axis_index: usize,
    axis: &Axis,
    width: f64,
    iters: usize,
) -> f64 {
    let center = x[axis_index];
    let (mut a, mut b) = match axis.period {
        Some(_) => (center - width, center + width),
        None => ((center - width).max(axis.lo), (center + width).min(axis.hi)),
    };
    if b - a < 1e-300 {
        x[axis_index] = axis.clamp(center);
        return f(x);
    }
    let probe = |t: f64, x: &mut [f64]| {
        x[axis_index] = axis.clamp(t);
        f(x)
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = probe(c, x);
    let mut fd = probe(d, x);
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = probe(c, x);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = probe(d, x);
        }
    }
    // keep the measured center competitive: a kink at the bracket edge can
    // beat both interior points
    let (tb, fb) = if fc <= fd { (c, fc) } else { (d, fd) };
    let f_center = probe(center, x);
    if f_center <= fb {
        x[axis_index] = axis.clamp(center);
        f_center
    } else {
        x[axis_index] = axis.clamp(tb);
        fb
    }
}

/// Minimizes f over the product of the axes. `anchors` are always evaluated
/// and can only improve the result; pass the points any correctness argument
/// relies on. Returns the best point and value.
pub fn minimize(
    f: &dyn Fn(&[f64]) -> f64,
    axes: &[Axis],
    anchors: &[Vec<f64>],
    cfg: &SearchConfig,
) -> (Vec<f64>, f64) {
    assert!(!axes.is_empty());
    // thin grids uniformly until the product fits the budget
    let mut strides = vec![1usize; axes.len()];
    loop {
        let total: usize = axes
            .iter()
            .zip(&strides)
            .map(|(a, &s)| a.grid.len().div_ceil(s))
            .product();
        if total <= cfg.budget.max(16) {
            break;
        }
        // thin the densest axis first
        let densest = (0..axes.len())
            .max_by_key(|&i| axes[i].grid.len().div_ceil(strides[i]))
            .unwrap();
        strides[densest] += 1;
    }
    let grids: Vec<Vec<f64>> = axes
        .iter()
        .zip(&strides)
        .map(|(a, &s)| a.grid.iter().copied().step_by(s).collect())
        .collect();

    let mut best_cells: Vec<(f64, Vec<f64>)> = Vec::new();
    let push_cell = |value: f64, point: Vec<f64>, best_cells: &mut Vec<(f64, Vec<f64>)>| {
        if value.is_nan() {
            return;
        }
        best_cells.push((value, point));
        best_cells.sort_by(|l, r| l.0.partial_cmp(&r.0).unwrap());
        best_cells.truncate(cfg.multistart.max(1));
    };

    let mut index = vec![0usize; axes.len()];
    let mut point: Vec<f64> = grids.iter().map(|g| g[0]).collect();
    'sweep: loop {
        let value = f(&point);
        push_cell(value, point.clone(), &mut best_cells);
        let mut k = axes.len();
        while k > 0 {
            k -= 1;
            index[k] += 1;
            if index[k] < grids[k].len() {
                point[k] = grids[k][index[k]];
                continue 'sweep;
            }
            index[k] = 0;
            point[k] = grids[k][0];
        }
        break;
    }
    for anchor in anchors {
        let value = f(anchor);
        push_cell(value, anchor.clone(), &mut best_cells);
    }

    let mut best = best_cells
        .first()
        .cloned()
        .unwrap_or_else(|| (f64::INFINITY, grids.iter().map(|g| g[0]).collect()));
    for (_, start) in best_cells.clone() {
        let mut x = start;
        // trust region per axis: a full cell of the *thinned* grid, so
        // refinement can cross everything the sweep skipped
        let mut widths: Vec<f64> = axes
            .iter()
            .zip(&strides)
            .map(|(a, &s)| a.spacing() * s as f64)
            .collect();
        let mut current = f(&x);
        for _ in 0..cfg.rounds {
            for (j, axis) in axes.iter().enumerate() {
                if axis.grid.len() == 1 && axis.hi == axis.lo {
                    continue;
                }
                current = golden_line(f, &mut x, j, axis, widths[j], cfg.line_iters);
                widths[j] *= 0.35;
            }
        }
        if current < best.0 {
            best = (current, x);
        }
    }
    for anchor in anchors {
        let value = f(anchor);
        if value < best.0 {
            best = (value, anchor.clone());
        }
    }
    let (value, point) = best;
    (point, value)
}

/// Maximizes f by minimizing its negation; -inf values are legal and simply
/// never win.
pub fn maximize(
    f: &dyn Fn(&[f64]) -> f64,
    axes: &[Axis],
    anchors: &[Vec<f64>],
    cfg: &SearchConfig,
) -> (Vec<f64>, f64) {
    let neg = |x: &[f64]| -f(x);
    let (point, value) = minimize(&neg, axes, anchors, cfg);
    (point, -value)
}
