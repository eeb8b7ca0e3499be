//! Scalar minimization: a coarse uniform grid locates the basin, then
//! golden-section search refines inside the bracket around the best grid
//! point. Exact for unimodal objectives, a reasonable heuristic otherwise.

/// Result of a one-dimensional search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub arg: f64,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Index of the best point on the coarse grid.
    pub grid_index: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimize `f` over `[lo, hi]`.
///
/// `grid_points` must be at least 3. `tol` is an absolute tolerance on the
/// bracket width.
pub fn minimize<F>(f: F, lo: f64, hi: f64, grid_points: usize, tol: f64, max_refinements: usize) -> Optimum
where
    F: Fn(f64) -> f64,
{
    debug_assert!(grid_points >= 3 && lo <= hi);
    let f = |x: f64| sanitize(f(x));
    if lo == hi {
        return Optimum {
            arg: lo,
            value: f(lo),
            converged: true,
            iterations: 0,
            grid_index: 0,
        };
    }

    let step = (hi - lo) / (grid_points - 1) as f64;
    let node = |i: usize| {
        if i == grid_points - 1 {
            hi
        } else {
            lo + step * i as f64
        }
    };
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..grid_points {
        let v = f(node(i));
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut best_x = node(best_i);

    let mut a = node(best_i.saturating_sub(1));
    let mut b = node((best_i + 1).min(grid_points - 1));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_refinements {
        if b - a <= tol || !(a < c && c < d && d < b) {
            converged = true;
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    if !converged && b - a <= tol {
        converged = true;
    }

    for (x, v) in [(c, fc), (d, fd), (a, f(a)), (b, f(b))] {
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    Optimum {
        arg: best_x,
        value: best_v,
        converged,
        iterations,
        grid_index: best_i,
    }
}

/// Maximize `f` over `[lo, hi]`; the returned `value` is the maximum.
pub fn maximize<F>(f: F, lo: f64, hi: f64, grid_points: usize, tol: f64, max_refinements: usize) -> Optimum
where
    F: Fn(f64) -> f64,
{
    let mut opt = minimize(|x| -f(x), lo, hi, grid_points, tol, max_refinements);
    opt.value = -opt.value;
    opt
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 1);
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
