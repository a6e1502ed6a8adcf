//! The game on a continuous unit circle.
//!
//! Points are measured clockwise from the root `O` in `[0, 1)`. A search
//! sweeps one unit of length per unit of time and the Searcher survives
//! until time `t` with probability `p^t`, so the payoff is `p^T` where `T` is
//! the time at which the last target is reached. Logarithms are natural.

use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::MixedStrategy;
use crate::golden;
use crate::solution::{GameSolution, Method, SearchPlan};

/// Continuous game with `k` targets and survival base `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousGame {
    k: usize,
    p: f64,
}

impl ContinuousGame {
    pub fn new(k: usize, p: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInstance("need at least one target".into()));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidInstance(format!("p = {p} is not in (0, 1)")));
        }
        Ok(ContinuousGame { k, p })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Target positions `0 < x_1 < ... < x_k < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePlacement {
    points: Vec<f64>,
}

impl CirclePlacement {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidStrategy("placement has no targets".into()));
        }
        if points.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
            return Err(Error::InvalidStrategy(format!(
                "positions {points:?} must lie strictly inside (0, 1)"
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStrategy(format!(
                "positions {points:?} are not strictly increasing"
            )));
        }
        Ok(CirclePlacement { points })
    }

    /// `k` points evenly spaced with the root, at `i / (k + 1)`.
    pub fn equally_spaced(k: usize) -> Self {
        CirclePlacement {
            points: (1..=k).map(|i| i as f64 / (k + 1) as f64).collect(),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Eq for CirclePlacement {}

impl Hash for CirclePlacement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for x in &self.points {
            x.to_bits().hash(state);
        }
    }
}

fn check_len(g: &ContinuousGame, h: &CirclePlacement) -> Result<()> {
    if h.len() != g.k {
        return Err(Error::InvalidStrategy(format!(
            "placement has {} targets, game has k = {}",
            h.len(),
            g.k
        )));
    }
    Ok(())
}

/// Adaptive Searcher: the Hider spaces the targets evenly and the Searcher
/// mixes uniformly over "clockwise until `j` found, then anticlockwise".
/// The value is `p^(k/(k+1))`.
pub fn continuous_adaptive_solution(
    g: &ContinuousGame,
) -> Result<GameSolution<CirclePlacement, SearchPlan>> {
    let k = g.k;
    Ok(GameSolution::exact(
        g.p.powf(k as f64 / (k + 1) as f64),
        MixedStrategy::pure(CirclePlacement::equally_spaced(k)),
        MixedStrategy::uniform((0..=k).map(SearchPlan::Adaptive).collect())?,
        Method::ContinuousAdaptive,
    ))
}

/// Expected payoff of `h` against the uniform adaptive mix: rule `j` skips
/// exactly the arc between targets `j` and `j + 1`.
pub fn adaptive_pure_payoff(g: &ContinuousGame, h: &CirclePlacement) -> Result<f64> {
    check_len(g, h)?;
    let mut prev = 0.0;
    let mut total = 0.0;
    for &x in h.points.iter().chain(std::iter::once(&1.0)) {
        total += g.p.powf(1.0 - (x - prev));
        prev = x;
    }
    Ok(total / (g.k + 1) as f64)
}

/// Expected payoff of every Searcher against the Hider that places the
/// targets `1/k` apart at a uniformly random offset: `k (p - p^(1-1/k)) / ln p`.
pub fn hider_star_upper_bound(g: &ContinuousGame) -> f64 {
    upper_bound(g.k, g.p)
}

fn upper_bound(k: usize, p: f64) -> f64 {
    let l = p.ln();
    let k = k as f64;
    // p - p^(1 - 1/k) = -p expm1(-l/k)
    -k * p * (-l / k).exp_m1() / l
}

fn lower_bound(k: usize, p: f64) -> f64 {
    p.powf(1.0 - 1.0 / (2 * k) as f64)
}

/// Search time of the plan that sweeps `first` clockwise and then the rest
/// anticlockwise, against targets at clockwise distances `ys`. Targets on
/// the boundary of the first arc count as found by it.
fn split_time(ys: &[f64], first: f64) -> f64 {
    let outside = ys
        .iter()
        .copied()
        .filter(|&y| y > first)
        .fold(f64::INFINITY, f64::min);
    if outside.is_infinite() {
        ys.iter().copied().fold(0.0, f64::max)
    } else {
        first + (1.0 - outside)
    }
}

fn star_plan_time(xs: &[f64], k: usize, j: usize, clockwise: bool) -> f64 {
    let first = j as f64 / k as f64;
    if clockwise {
        split_time(xs, first)
    } else {
        let ys: Vec<f64> = xs.iter().map(|&x| 1.0 - x).collect();
        split_time(&ys, first)
    }
}

/// Exact expected payoff of the split-sweep Searcher against `h`: pick
/// `j` uniformly from `1..=k` and a direction at random, sweep `j/k` that
/// way, then `(k-j)/k` the other way from the root.
pub fn searcher_star_payoff(g: &ContinuousGame, h: &CirclePlacement) -> Result<f64> {
    check_len(g, h)?;
    let k = g.k;
    let mut total = 0.0;
    for j in 1..=k {
        for clockwise in [true, false] {
            total += g.p.powf(star_plan_time(&h.points, k, j, clockwise));
        }
    }
    Ok(total / (2 * k) as f64)
}

/// Bounds on the value of the non-adaptive continuous game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousBounds {
    pub lower: f64,
    pub upper: f64,
    /// `upper / lower`.
    pub ratio: f64,
    /// `upper - lower`.
    pub gap: f64,
}

pub fn continuous_bounds(g: &ContinuousGame) -> ContinuousBounds {
    let lower = lower_bound(g.k, g.p);
    let upper = upper_bound(g.k, g.p);
    ContinuousBounds {
        lower,
        upper,
        ratio: bound_ratio(g.k, g.p),
        gap: upper - lower,
    }
}

/// `k (p^(1/2k) - p^(-1/2k)) / ln p`, the ratio of the bounds.
pub fn bound_ratio(k: usize, p: f64) -> f64 {
    let l = p.ln();
    let h = l / (2 * k) as f64;
    2.0 * k as f64 * h.sinh() / l
}

/// Sign of the derivative of [`bound_ratio`]:
/// `ln p (p^(1/2k) + p^(-1/2k)) - k (p^(1/2k) - p^(-1/2k))`.
pub fn ratio_derivative_numerator(k: usize, p: f64) -> f64 {
    let l = p.ln();
    let h = l / (2 * k) as f64;
    l * 2.0 * h.cosh() - k as f64 * 2.0 * h.sinh()
}

/// `upper - lower` as a function of `p`; zero at the endpoints.
pub fn bound_gap(k: usize, p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    upper_bound(k, p) - lower_bound(k, p)
}

/// Number of coarse grid points used by [`max_bound_gap`].
pub const GAP_GRID_POINTS: usize = 1000;
/// Final bracket width of [`max_bound_gap`].
pub const GAP_TOL: f64 = 1e-8;

/// Largest difference between the bounds over `p in (0, 1)`, returned as
/// `(argmax, max)`.
pub fn max_bound_gap(k: usize) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::InvalidInstance("need at least one target".into()));
    }
    Ok(golden::grid_then_golden(
        |p| bound_gap(k, p),
        0.0,
        1.0,
        GAP_GRID_POINTS,
        GAP_TOL,
    ))
}

/// Outcome of [`ratio_monotonicity_check`]. Both margins are negative when
/// the check passes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    /// Largest `f(p_{i+1}) - f(p_i)` over consecutive grid points.
    pub max_ratio_step: f64,
    /// Largest value of the derivative numerator on the grid.
    pub max_numerator: f64,
}

/// Checks that the bound ratio strictly decreases along `grid` and that the
/// derivative numerator is negative at every grid point.
pub fn ratio_monotonicity_check(k: usize, grid: &[f64]) -> Result<MonotonicityReport> {
    if grid.len() < 2
        || grid.iter().any(|&p| !(p > 0.0 && p < 1.0))
        || grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidInstance(
            "grid must be increasing with at least two points in (0, 1)".into(),
        ));
    }
    let ratios: Vec<f64> = grid.iter().map(|&p| bound_ratio(k, p)).collect();
    let report = MonotonicityReport {
        max_ratio_step: ratios
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max),
        max_numerator: grid
            .iter()
            .map(|&p| ratio_derivative_numerator(k, p))
            .fold(f64::NEG_INFINITY, f64::max),
    };
    if report.max_ratio_step >= 0.0 || report.max_numerator >= 0.0 {
        return Err(Error::PropertyViolation(format!(
            "bound ratio not decreasing for k = {k}: {report:?}"
        )));
    }
    Ok(report)
}

/// Sample mean and standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

/// Monte Carlo estimate of the payoff when the split-sweep Searcher meets
/// the randomly offset evenly spaced Hider. Deterministic given `seed`.
pub fn star_vs_star_monte_carlo(g: &ContinuousGame, samples: usize, seed: u64) -> Result<Estimate> {
    if samples < 2 {
        return Err(Error::InvalidInstance("need at least two samples".into()));
    }
    let k = g.k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut xs = vec![0.0; k];
    for _ in 0..samples {
        let offset = rng.random::<f64>() / k as f64;
        for (i, x) in xs.iter_mut().enumerate() {
            *x = offset + i as f64 / k as f64;
        }
        let j = rng.random_range(1..=k);
        let clockwise = rng.random::<bool>();
        let v = g.p.powf(star_plan_time(&xs, k, j, clockwise));
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(Estimate {
        mean,
        std_err: (var / n).sqrt(),
    })
}
