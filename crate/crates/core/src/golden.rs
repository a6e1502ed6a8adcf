//! Golden-section search for the maximum of a unimodal function.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes `f` on `[lo, hi]`, shrinking the bracket until it is narrower
/// than `tol`. Returns the midpoint of the final bracket and its value.
pub fn maximize<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Evaluates `f` on `points` interior grid points of `(lo, hi)`, then refines
/// around the best one with golden-section search. The grid guards against
/// settling on a secondary peak.
pub fn grid_then_golden<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
) -> (f64, f64) {
    let step = (hi - lo) / (points + 1) as f64;
    let best = (1..=points).map(|i| (i, f(lo + i as f64 * step))).fold(
        (1, f64::NEG_INFINITY),
        |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
    );
    let a = lo + (best.0 - 1) as f64 * step;
    let b = lo + (best.0 + 1) as f64 * step;
    maximize(f, a, b, tol)
}
