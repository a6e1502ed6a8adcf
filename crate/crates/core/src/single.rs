//! One hidden target.
//!
//! Closed forms for the game without graph structure, the cycle with equal
//! success probabilities, the two-point solution under the prefix/suffix
//! condition, the complete three-vertex solution, and the square-root
//! auxiliary game whose solution gives approximately optimal strategies.

use crate::error::{Error, Result};
use crate::game::{
    all_placements, guaranteed_payoff, payoff, CycleGame, ExpandingSearch, HiderPlacement,
    MixedStrategy,
};
use crate::matrix;
use crate::solution::{GameSolution, Guarantee, Method, SearchPlan};

/// Tolerance used when comparing cross-multiplied products.
pub const CONDITION_TOL: f64 = 1e-12;

/// Prefix and suffix products of the success probabilities.
///
/// Indices are 1-based: `pi(j) = p_1 ... p_j` and `pi_bar(j) = p_j ... p_n`.
/// Index `n + 1` is a sentinel with `pi = 0` and `pi_bar = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixProducts {
    p: Vec<f64>,
    fwd: Vec<f64>,
    bwd: Vec<f64>,
}

impl PrefixProducts {
    pub fn new(p: &[f64]) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidInstance("no success probabilities".into()));
        }
        if p.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
            return Err(Error::InvalidInstance(
                "success probabilities must lie in (0, 1)".into(),
            ));
        }
        let fwd = p
            .iter()
            .scan(1.0, |acc, &q| {
                *acc *= q;
                Some(*acc)
            })
            .collect();
        let mut bwd: Vec<f64> = p
            .iter()
            .rev()
            .scan(1.0, |acc, &q| {
                *acc *= q;
                Some(*acc)
            })
            .collect();
        bwd.reverse();
        Ok(PrefixProducts {
            p: p.to_vec(),
            fwd,
            bwd,
        })
    }

    pub fn of(game: &CycleGame) -> Self {
        Self::new(game.probs()).expect("games hold valid probabilities")
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn pi(&self, j: usize) -> f64 {
        match j {
            0 => 1.0,
            j if j > self.n() => 0.0,
            j => self.fwd[j - 1],
        }
    }

    pub fn pi_bar(&self, j: usize) -> f64 {
        if j > self.n() {
            1.0
        } else {
            self.bwd[j - 1]
        }
    }

    /// `p_1 ... p_{j-1} sqrt(p_j)`.
    pub fn pi_prime(&self, j: usize) -> f64 {
        if j > self.n() {
            0.0
        } else {
            self.pi(j - 1) * self.p[j - 1].sqrt()
        }
    }

    /// `sqrt(p_j) p_{j+1} ... p_n`.
    pub fn pi_bar_prime(&self, j: usize) -> f64 {
        if j > self.n() {
            1.0
        } else {
            self.p[j - 1].sqrt() * self.pi_bar(j + 1)
        }
    }

    /// Product of all success probabilities.
    pub fn total(&self) -> f64 {
        self.fwd[self.n() - 1]
    }

    /// The index `j` where the clockwise and anticlockwise payoffs cross in
    /// the auxiliary game.
    pub fn prime_boundary_index(&self) -> usize {
        crossing(self.n(), |j| self.pi_prime(j), |j| self.pi_bar_prime(j))
    }
}

fn crossing(n: usize, fwd: impl Fn(usize) -> f64, bwd: impl Fn(usize) -> f64) -> usize {
    (1..=n)
        .find(|&j| fwd(j) >= bwd(j) && fwd(j + 1) < bwd(j + 1))
        .expect("prefix products decrease and suffix products increase")
}

/// The unique `j` with `pi(j) >= pi_bar(j)` and `pi(j+1) < pi_bar(j+1)`.
pub fn boundary_index(pp: &PrefixProducts) -> usize {
    crossing(pp.n(), |j| pp.pi(j), |j| pp.pi_bar(j))
}

/// Whether mixing the two full sweeps so as to equalize vertices `j` and
/// `j + 1` also holds every other vertex to at least the same payoff.
///
/// Evaluated as `(pi_i - pi_j)(pi_bar_{j+1} - pi_bar_j) >=
/// (pi_j - pi_{j+1})(pi_bar_j - pi_bar_i)` for every `i` other than `j`,
/// `j + 1`, which is the sign of the sweep mix's payoff at `i` minus the
/// two-point value.
pub fn condition1_holds(pp: &PrefixProducts, j: usize) -> bool {
    let n = pp.n();
    let (pj, pj1) = (pp.pi(j), pp.pi(j + 1));
    let (bj, bj1) = (pp.pi_bar(j), pp.pi_bar(j + 1));
    (1..=n)
        .filter(|&i| i != j && i != j + 1)
        .all(|i| (pp.pi(i) - pj) * (bj1 - bj) >= (pj - pj1) * (bj - pp.pi_bar(i)) - CONDITION_TOL)
}

fn sweeps(n: usize, clockwise: f64) -> Result<MixedStrategy<SearchPlan>> {
    MixedStrategy::new(vec![
        (SearchPlan::Order(ExpandingSearch::clockwise(n)), clockwise),
        (
            SearchPlan::Order(ExpandingSearch::anticlockwise(n)),
            1.0 - clockwise,
        ),
    ])
}

fn vertex_mix(weights: Vec<(usize, f64)>) -> Result<MixedStrategy<HiderPlacement>> {
    let mut merged: Vec<(HiderPlacement, f64)> = Vec::new();
    for (v, w) in weights {
        let h = HiderPlacement::single(v)?;
        match merged.iter_mut().find(|(g, _)| *g == h) {
            Some(entry) => entry.1 += w,
            None => merged.push((h, w)),
        }
    }
    MixedStrategy::from_weights(merged)
}

fn ensure_single_target(game: &CycleGame) -> Result<()> {
    if game.k() != 1 {
        return Err(Error::WrongSolver(format!(
            "single-target solver called with k = {}",
            game.k()
        )));
    }
    Ok(())
}

/// Solution of the game without graph structure: any search order is
/// allowed.
///
/// The Hider picks each `k`-subset `A` with probability proportional to
/// `prod_{i in A} (1 - p_i) / p_i`; the Searcher searches a subset drawn from
/// the same distribution first and the remaining locations in random order.
/// For `k = 1` the value has a closed form; for larger `k` it is computed as
/// the best-response payoff against the optimal Hider mix.
pub fn unstructured_solution(p: &[f64], k: usize) -> Result<GameSolution> {
    let n = p.len();
    if n == 0 || p.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
        return Err(Error::InvalidInstance(
            "success probabilities must lie in (0, 1)".into(),
        ));
    }
    if k < 1 || k > n {
        return Err(Error::InvalidInstance(format!("k = {k} outside 1..={n}")));
    }
    if n > matrix::MAX_ORACLE_N {
        return Err(Error::InstanceTooLarge(format!(
            "unstructured solution limited to n <= {}",
            matrix::MAX_ORACLE_N
        )));
    }
    let odds: Vec<f64> = p.iter().map(|&q| (1.0 - q) / q).collect();
    let subsets = all_placements(n, k);
    if subsets.len() > matrix::MAX_PLACEMENTS {
        return Err(Error::InstanceTooLarge(format!(
            "{} subsets exceed {}",
            subsets.len(),
            matrix::MAX_PLACEMENTS
        )));
    }
    let weights: Vec<f64> = subsets
        .iter()
        .map(|a| a.vertices().iter().map(|&v| odds[v - 1]).product())
        .collect();
    let hider = MixedStrategy::from_weights(
        subsets
            .iter()
            .cloned()
            .zip(weights.iter().copied())
            .collect(),
    )?;
    let searcher = MixedStrategy::from_weights(
        subsets
            .iter()
            .map(|a| SearchPlan::SubsetFirst(a.vertices().to_vec()))
            .zip(weights.iter().copied())
            .collect(),
    )?;
    let (value, method) = if k == 1 {
        let total: f64 = p.iter().product();
        (
            (1.0 - total) / odds.iter().sum::<f64>(),
            Method::Unstructured,
        )
    } else {
        (
            best_response_value(p, &odds, k),
            Method::UnstructuredBestResponse,
        )
    };
    Ok(GameSolution::exact(value, hider, searcher, method))
}

/// Best payoff any search order achieves against the Hider mix with
/// subset weights proportional to the product of `odds`, by dynamic
/// programming over searched sets.
fn best_response_value(p: &[f64], odds: &[f64], k: usize) -> f64 {
    let n = p.len();
    let full = 1usize << n;
    // esym[s * k + j] = e_j(odds restricted to s), j < k.
    let mut esym = vec![0.0; full * k];
    for s in 0..full {
        esym[s * k] = 1.0;
        if s == 0 {
            continue;
        }
        let u = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        for j in 1..k {
            esym[s * k + j] = esym[rest * k + j] + odds[u] * esym[rest * k + j - 1];
        }
    }
    let normaliser = {
        // e_k of all odds
        let mut e = vec![0.0; k + 1];
        e[0] = 1.0;
        for &w in odds {
            for j in (1..=k).rev() {
                e[j] += w * e[j - 1];
            }
        }
        e[k]
    };
    let mut prod = vec![1.0; full];
    for s in 1..full {
        let u = s.trailing_zeros() as usize;
        prod[s] = prod[s & (s - 1)] * p[u];
    }
    let mut best = vec![0.0; full];
    for s in (0..full - 1).rev() {
        let mut b = f64::NEG_INFINITY;
        for (v, &w) in odds.iter().enumerate() {
            if s >> v & 1 == 1 {
                continue;
            }
            let t = s | 1 << v;
            let gain = prod[t] * w * esym[s * k + k - 1] / normaliser;
            b = b.max(gain + best[t]);
        }
        best[s] = b;
    }
    best[0]
}

/// The unstructured value, which no cycle game exceeds.
pub fn theorem1_upper_bound(game: &CycleGame) -> Result<f64> {
    Ok(unstructured_solution(game.probs(), game.k())?.value)
}

/// Equal success probabilities and one target: the Hider sits at (one of)
/// the middle vertices, the Searcher sweeps the whole cycle in a random
/// direction.
pub fn equal_p_solution(game: &CycleGame) -> Result<GameSolution> {
    ensure_single_target(game)?;
    let p = game
        .common_prob()
        .ok_or_else(|| Error::WrongSolver("success probabilities are not all equal".into()))?;
    let n = game.n();
    let lo = n.div_ceil(2);
    let hi = (n + 2) / 2;
    let value = (p.powi(lo as i32) + p.powi(hi as i32)) / 2.0;
    Ok(GameSolution::exact(
        value,
        vertex_mix(vec![(lo, 0.5), (hi, 0.5)])?,
        sweeps(n, 0.5)?,
        Method::EqualP,
    ))
}

/// The solution where the Hider mixes over `j`, `j + 1` and the Searcher
/// over the two full sweeps. Requires [`condition1_holds`].
pub fn two_point_solution(pp: &PrefixProducts, j: usize) -> Result<GameSolution> {
    let n = pp.n();
    if n < 2 || j == 0 || j >= n {
        return Err(Error::WrongSolver(format!(
            "two-point solution needs 1 <= j < n, got j = {j}, n = {n}"
        )));
    }
    if !condition1_holds(pp, j) {
        return Err(Error::WrongSolver(format!(
            "sweep mix does not hold every vertex to the two-point value (j = {j})"
        )));
    }
    let (pj, pj1) = (pp.pi(j), pp.pi(j + 1));
    let (bj, bj1) = (pp.pi_bar(j), pp.pi_bar(j + 1));
    let denom = pj - pj1 + bj1 - bj;
    let value = (bj1 * pj - pj1 * bj) / denom;
    let q = (bj1 - pj1) / denom;
    let r = (bj1 - bj) / denom;

    let hider = vertex_mix(vec![(j, q), (j + 1, 1.0 - q)])?;
    let searcher = sweeps(n, r)?;
    let solution = GameSolution::exact(value, hider, searcher, Method::TwoPoint);
    certify_searcher(pp.probs(), &solution, CONDITION_TOL)?;
    Ok(solution)
}

/// Checks that the Searcher mix of `solution` earns at least its value
/// against every single-vertex hiding place.
fn certify_searcher(p: &[f64], solution: &GameSolution, tol: f64) -> Result<()> {
    let game = CycleGame::new(p.to_vec(), 1)?;
    let orders = solution
        .searcher_orders()
        .ok_or_else(|| Error::Unsupported("searcher plan is not a fixed order".into()))?;
    let floor = guaranteed_payoff(&game, &orders)?;
    if floor < solution.value - tol {
        return Err(Error::PropertyViolation(format!(
            "searcher mix guarantees {floor}, below the claimed value {}",
            solution.value
        )));
    }
    Ok(())
}

/// Complete solution for three vertices.
///
/// The instance is relabelled so that `p1 >= p3` and the answer mapped
/// back. When the two-point condition holds the two sweeps suffice;
/// otherwise the Hider mixes over all three vertices as in the unstructured
/// game and the Searcher mixes the two sweeps with the order `(1, 3, 2)`,
/// found by equalizing the payoff at every vertex.
pub fn n3_solution(p1: f64, p2: f64, p3: f64) -> Result<GameSolution> {
    CycleGame::new(vec![p1, p2, p3], 1)?;
    if p1 < p3 {
        return Ok(mirror_solution(n3_oriented(p3, p2, p1)?, 3));
    }
    n3_oriented(p1, p2, p3)
}

fn n3_oriented(p1: f64, p2: f64, p3: f64) -> Result<GameSolution> {
    let pp = PrefixProducts::new(&[p1, p2, p3])?;
    if condition1_holds(&pp, 2) {
        let value = p1 * p2 * p3 * (1.0 - p2 * p3) / (p1 * p2 * (1.0 - p3) + p3 * (1.0 - p2));
        let hider = vertex_mix(vec![(2, p3 * (1.0 - p1 * p2)), (3, p2 * (p1 - p3))])?;
        let c = p3 * (1.0 - p2);
        let a = p1 * p2 * (1.0 - p3);
        let searcher = sweeps(3, c / (c + a))?;
        return Ok(GameSolution::exact(value, hider, searcher, Method::N3Case1));
    }

    let odds = [(1.0 - p1) / p1, (1.0 - p2) / p2, (1.0 - p3) / p3];
    let value = (1.0 - p1 * p2 * p3) / odds.iter().sum::<f64>();
    let hider = vertex_mix(vec![(1, odds[0]), (2, odds[1]), (3, odds[2])])?;

    let orders = [
        ExpandingSearch::clockwise(3),
        ExpandingSearch::anticlockwise(3),
        ExpandingSearch::new(vec![1, 3, 2])?,
    ];
    let game = CycleGame::new(vec![p1, p2, p3], 1)?;
    let mut system = [[0.0; 3]; 3];
    for (i, row) in system.iter_mut().enumerate() {
        let h = HiderPlacement::single(i + 1)?;
        for (c, s) in orders.iter().enumerate() {
            row[c] = payoff(&game, &h, s)?;
        }
    }
    let searcher = match solve3(system, [value; 3]) {
        Some(w)
            if w.iter().all(|&x| x >= -CONDITION_TOL)
                && (w.iter().sum::<f64>() - 1.0).abs() < 1e-9 =>
        {
            let support = orders
                .iter()
                .cloned()
                .map(SearchPlan::Order)
                .zip(w.iter().map(|x| x.max(0.0)))
                .collect();
            MixedStrategy::from_weights(support)?
        }
        _ => matrix::oracle_solution(&game)?.searcher,
    };
    let solution = GameSolution::exact(value, hider, searcher, Method::N3Case2);
    certify_searcher(&[p1, p2, p3], &solution, 1e-12)?;
    Ok(solution)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot = a[col];
            for (x, y) in a[row][col..].iter_mut().zip(&pivot[col..]) {
                *x -= f * y;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

fn mirror_solution(sol: GameSolution, n: usize) -> GameSolution {
    GameSolution {
        hider: sol.hider.map(|h| h.mirrored(n)),
        searcher: sol.searcher.map(|s| match s {
            SearchPlan::Order(o) => SearchPlan::Order(o.mirrored()),
            other => other.clone(),
        }),
        ..sol
    }
}

/// Exact solution of the auxiliary game with payoff `P(j, s) / sqrt(p_j)`.
///
/// The Hider uses at most the two vertices around the crossing index `j'`
/// and the Searcher only the two full sweeps. The returned value is the
/// auxiliary game's value.
pub fn gamma_prime_solution(pp: &PrefixProducts) -> Result<GameSolution> {
    let n = pp.n();
    if n < 2 {
        return Err(Error::InvalidInstance("need at least two vertices".into()));
    }
    let j = pp.prime_boundary_index();
    let (a, b) = (pp.pi_prime(j), pp.pi_bar_prime(j));
    let (a1, b1) = (pp.pi_prime(j + 1), pp.pi_bar_prime(j + 1));

    let (value, hider, beta) = if (a - b).abs() <= CONDITION_TOL {
        (pp.total().sqrt(), vertex_mix(vec![(j, 1.0)])?, 0.5)
    } else {
        let denom = a - a1 + b1 - b;
        let value = (b1 * a - a1 * b) / denom;
        let q = (b1 - a1) / denom;
        let beta = (b1 - b) / denom;
        (value, vertex_mix(vec![(j, q), (j + 1, 1.0 - q)])?, beta)
    };

    for i in 1..=n {
        let earned = beta * pp.pi_prime(i) + (1.0 - beta) * pp.pi_bar_prime(i);
        if earned < value - CONDITION_TOL {
            return Err(Error::PropertyViolation(format!(
                "auxiliary sweep mix earns {earned} at vertex {i}, below {value}"
            )));
        }
    }
    Ok(GameSolution::exact(
        value,
        hider,
        sweeps(n, beta)?,
        Method::GammaPrime,
    ))
}

/// Auxiliary-game strategies played in the original game.
///
/// The Searcher is guaranteed `min_i sqrt(p_i) v'` and the Hider concedes at
/// most `max(sqrt(p_j), sqrt(p_{j+1})) v'`, where `v'` is the auxiliary value;
/// their ratio is the approximation factor. `value` is set to the Searcher
/// floor.
pub fn approx_solution(game: &CycleGame) -> Result<GameSolution> {
    ensure_single_target(game)?;
    let pp = PrefixProducts::of(game);
    let aux = gamma_prime_solution(&pp)?;
    let j = pp.prime_boundary_index();
    let n = game.n();
    let root = |v: usize| game.prob(v).sqrt();
    let min_root = (1..=n).map(root).fold(f64::INFINITY, f64::min);
    let max_pair = root(j).max(if j < n { root(j + 1) } else { 0.0 });
    let guarantee = Guarantee {
        searcher_floor: min_root * aux.value,
        hider_ceiling: max_pair * aux.value,
    };
    if guarantee.searcher_floor > guarantee.hider_ceiling {
        return Err(Error::PropertyViolation(format!(
            "floor {} exceeds ceiling {}",
            guarantee.searcher_floor, guarantee.hider_ceiling
        )));
    }
    Ok(GameSolution {
        value: guarantee.searcher_floor,
        hider: aux.hider,
        searcher: aux.searcher,
        method: Method::Approx,
        guarantee: Some(guarantee),
    })
}

/// The approximation factor `max(sqrt(p_j), sqrt(p_{j+1})) / min_i sqrt(p_i)`.
pub fn approximation_factor(game: &CycleGame) -> Result<f64> {
    let sol = approx_solution(game)?;
    Ok(sol.guarantee.map_or(1.0, |g| g.ratio()))
}
