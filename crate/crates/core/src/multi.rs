//! Several targets with equal success probabilities.
//!
//! The adaptive Searcher's optimal mix is uniform over the rules
//! `sigma_0..sigma_k`; the Hider's is uniform over the balanced placements,
//! whose consecutive gaps (with sentinels `0` and `n + 1`) all equal
//! `floor((n+1)/(k+1))` or `ceil((n+1)/(k+1))`.

use crate::error::{Error, Result};
use crate::game::{CycleGame, ExpandingSearch, HiderPlacement, MixedStrategy};
use crate::single::unstructured_solution;
use crate::solution::{GameSolution, Method, SearchPlan};

/// Gaps `v_{j+1} - v_j` of a placement, with `v_0 = 0` and `v_{k+1} = n + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpacingProfile {
    gaps: Vec<usize>,
}

impl SpacingProfile {
    pub fn new(gaps: Vec<usize>) -> Result<Self> {
        if gaps.len() < 2 || gaps.contains(&0) {
            return Err(Error::InvalidInstance(format!(
                "spacing profile {gaps:?} needs at least two positive gaps"
            )));
        }
        Ok(SpacingProfile { gaps })
    }

    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    /// Number of non-root vertices.
    pub fn n(&self) -> usize {
        self.gaps.iter().sum::<usize>() - 1
    }

    /// Number of targets.
    pub fn k(&self) -> usize {
        self.gaps.len() - 1
    }

    /// The placement these gaps describe.
    pub fn placement(&self) -> HiderPlacement {
        let vertices = self
            .gaps
            .iter()
            .take(self.k())
            .scan(0, |v, g| {
                *v += g;
                Some(*v)
            })
            .collect();
        HiderPlacement::new(vertices).expect("positive gaps give increasing vertices")
    }
}

pub fn spacing_profile(h: &HiderPlacement, n: usize) -> Result<SpacingProfile> {
    if h.vertices().last().is_some_and(|&v| v > n) {
        return Err(Error::InvalidStrategy(format!(
            "placement {h} exceeds n = {n}"
        )));
    }
    let mut prev = 0;
    let mut gaps: Vec<usize> = h
        .vertices()
        .iter()
        .map(|&v| {
            let g = v - prev;
            prev = v;
            g
        })
        .collect();
    gaps.push(n + 1 - prev);
    SpacingProfile::new(gaps)
}

/// Expected payoff of a placement with this profile against the uniform mix
/// over `sigma_0..sigma_k`: rule `sigma_j` searches every vertex except the
/// `n_j - 1` strictly inside gap `j`.
pub fn adaptive_expected_payoff(profile: &SpacingProfile, p: f64) -> f64 {
    let n = profile.n() as i32;
    let k = profile.k();
    profile
        .gaps
        .iter()
        .map(|&g| p.powi(n - g as i32 + 1))
        .sum::<f64>()
        / (k + 1) as f64
}

/// The balanced placements together with the split by first target.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementFamily {
    pub members: Vec<HiderPlacement>,
    /// Members whose first target sits at `floor((n+1)/(k+1))`.
    pub minus: usize,
    /// Members whose first target sits at `ceil((n+1)/(k+1))`.
    pub plus: usize,
}

impl PlacementFamily {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Enumerates every balanced placement by walking all gap sequences over
/// `{floor, ceil}` that sum to `n + 1`.
pub fn enumerate_snk(n: usize, k: usize) -> Result<PlacementFamily> {
    if k < 1 || k > n {
        return Err(Error::InvalidInstance(format!("k = {k} outside 1..={n}")));
    }
    let lo = (n + 1) / (k + 1);
    let hi = (n + 1).div_ceil(k + 1);
    let choices: Vec<usize> = if lo == hi { vec![lo] } else { vec![lo, hi] };

    fn walk(
        remaining: usize,
        slots: usize,
        choices: &[usize],
        gaps: &mut Vec<usize>,
        out: &mut Vec<SpacingProfile>,
    ) {
        if slots == 0 {
            if remaining == 0 {
                out.push(SpacingProfile { gaps: gaps.clone() });
            }
            return;
        }
        for &g in choices {
            if g <= remaining {
                gaps.push(g);
                walk(remaining - g, slots - 1, choices, gaps, out);
                gaps.pop();
            }
        }
    }

    let mut profiles = Vec::new();
    walk(n + 1, k + 1, &choices, &mut Vec::new(), &mut profiles);
    let members: Vec<HiderPlacement> = profiles.iter().map(SpacingProfile::placement).collect();
    let first = |v: usize| members.iter().filter(|h| h.vertices()[0] == v).count();
    Ok(PlacementFamily {
        minus: first(lo),
        plus: first(hi),
        members,
    })
}

/// Closed-form sizes of the balanced family and its two halves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SnkCounts {
    pub s: u64,
    pub minus: u64,
    pub plus: u64,
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Counts via binomial coefficients, writing `n = a (k + 1) + b` with
/// `0 <= b <= k`. Requires `a >= 1`.
pub fn count_snk(n: usize, k: usize) -> Result<SnkCounts> {
    if k < 1 || k > n {
        return Err(Error::InvalidInstance(format!("k = {k} outside 1..={n}")));
    }
    let (a, b) = (n / (k + 1), (n % (k + 1)) as u64);
    if a == 0 {
        return Err(Error::InvalidInstance(format!(
            "n = {n} < k + 1 = {}: the counting formula needs a >= 1",
            k + 1
        )));
    }
    let k = k as u64;
    if b == k {
        return Ok(SnkCounts {
            s: 1,
            minus: 1,
            plus: 1,
        });
    }
    Ok(SnkCounts {
        s: binomial(k + 1, b + 1),
        minus: binomial(k, b + 1),
        plus: binomial(k, b),
    })
}

/// Value of the adaptive game with equal success probability `p`.
pub fn adaptive_value(n: usize, k: usize, p: f64) -> f64 {
    let (a, b) = (n / (k + 1), n % (k + 1));
    let kk = (k + 1) as f64;
    let e = (n - a) as i32;
    (k - b) as f64 / kk * p.powi(e + 1) + (b + 1) as f64 / kk * p.powi(e)
}

/// Adaptive Searcher, equal success probabilities: uniform over the rules
/// `sigma_0..sigma_k` against uniform over the balanced placements.
pub fn adaptive_solution(game: &CycleGame) -> Result<GameSolution> {
    let p = game.common_prob().ok_or_else(|| {
        Error::WrongSolver("adaptive solution needs equal success probabilities".into())
    })?;
    let (n, k) = (game.n(), game.k());
    let family = enumerate_snk(n, k)?;
    Ok(GameSolution::exact(
        adaptive_value(n, k, p),
        MixedStrategy::uniform(family.members)?,
        MixedStrategy::uniform((0..=k).map(SearchPlan::Adaptive).collect())?,
        Method::Adaptive,
    ))
}

/// The expanding search that leaves `v` for last: clockwise up to `v - 1`,
/// then anticlockwise down to `v`.
pub fn search_ending_at(n: usize, v: usize) -> ExpandingSearch {
    let order = (1..v)
        .chain((v + 1..=n).rev())
        .chain(std::iter::once(v))
        .collect();
    ExpandingSearch::new(order).expect("two sweeps meeting at v form an expanding search")
}

/// `k = n - 1` targets: only the last vertex searched matters, so the cycle
/// imposes no restriction and the unstructured solution applies. The
/// Searcher leaves the complement of a Hider-distributed subset for last.
pub fn k_equals_n_minus_1_solution(game: &CycleGame) -> Result<GameSolution> {
    let n = game.n();
    if game.k() + 1 != n {
        return Err(Error::WrongSolver(format!(
            "needs k = n - 1, got n = {n}, k = {}",
            game.k()
        )));
    }
    let base = unstructured_solution(game.probs(), game.k())?;
    let searcher = MixedStrategy::new(
        base.hider
            .iter()
            .map(|(a, q)| {
                let last = (1..=n)
                    .find(|&v| !a.contains(v))
                    .expect("one vertex left out");
                (SearchPlan::Order(search_ending_at(n, last)), q)
            })
            .collect(),
    )?;
    Ok(GameSolution {
        searcher,
        method: Method::AllButOne,
        ..base
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tuples(f: &PlacementFamily) -> Vec<Vec<usize>> {
        f.members.iter().map(|h| h.vertices().to_vec()).collect()
    }

    #[test]
    fn balanced_families() {
        let f = enumerate_snk(5, 2).unwrap();
        assert_eq!(tuples(&f), vec![vec![2, 4]]);

        let f = enumerate_snk(4, 2).unwrap();
        let mut t = tuples(&f);
        t.sort();
        assert_eq!(t, vec![vec![1, 3], vec![2, 3], vec![2, 4]]);
        assert_eq!((f.minus, f.plus), (1, 2));

        for n in [2, 4, 10] {
            let f = enumerate_snk(n, 1).unwrap();
            let mut t = tuples(&f);
            t.sort();
            assert_eq!(t, vec![vec![n / 2], vec![n / 2 + 1]]);
        }
    }

    #[test]
    fn counting_formula() {
        assert_eq!(count_snk(7, 3).unwrap().s, 1);
        assert_eq!(
            count_snk(9, 2).unwrap(),
            SnkCounts {
                s: 3,
                minus: 2,
                plus: 1
            }
        );
        assert_eq!(count_snk(10, 3).unwrap().s, 4);
        assert!(count_snk(3, 3).is_err());
        let f = enumerate_snk(9, 2).unwrap();
        assert_eq!((f.size(), f.minus, f.plus), (3, 2, 1));
    }

    #[test]
    fn adaptive_values() {
        let s = adaptive_solution(&CycleGame::equal(5, 0.5, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(s.value, 0.0625, epsilon = 1e-15);
        let s = adaptive_solution(&CycleGame::equal(4, 0.5, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(s.value, 0.0625 / 3.0 + 0.125 * 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.value, 0.104167, epsilon = 1e-6);
        for n in [3, 5, 7, 9] {
            let s = adaptive_solution(&CycleGame::equal(n, 0.3, 1).unwrap()).unwrap();
            assert_abs_diff_eq!(s.value, 0.3f64.powi((n as i32 + 1) / 2), epsilon = 1e-15);
        }
        assert!(matches!(
            adaptive_solution(&CycleGame::new(vec![0.5, 0.6, 0.5], 2).unwrap()),
            Err(Error::WrongSolver(_))
        ));
    }

    #[test]
    fn profiles() {
        let h = |v: Vec<usize>| HiderPlacement::new(v).unwrap();
        assert_eq!(
            spacing_profile(&h(vec![2, 4]), 5).unwrap().gaps(),
            &[2, 2, 2]
        );
        assert_eq!(
            spacing_profile(&h(vec![1, 3]), 4).unwrap().gaps(),
            &[1, 2, 2]
        );
        assert_eq!(
            spacing_profile(&h(vec![2, 4]), 4).unwrap().gaps(),
            &[2, 2, 1]
        );
        assert!(spacing_profile(&h(vec![2, 6]), 5).is_err());

        let p = 0.5;
        let even = spacing_profile(&h(vec![2, 4]), 5).unwrap();
        assert_abs_diff_eq!(adaptive_expected_payoff(&even, p), 0.0625);
        let skew = spacing_profile(&h(vec![1, 3]), 4).unwrap();
        assert_abs_diff_eq!(
            adaptive_expected_payoff(&skew, p),
            (0.0625 + 0.125 + 0.125) / 3.0
        );
    }

    #[test]
    fn balancing_move_lowers_payoff() {
        let p = 0.7;
        let wide = SpacingProfile::new(vec![4, 1, 2]).unwrap();
        let balanced = SpacingProfile::new(vec![3, 2, 2]).unwrap();
        assert!(adaptive_expected_payoff(&wide, p) > adaptive_expected_payoff(&balanced, p));
    }

    #[test]
    fn all_but_one_target() {
        let g = CycleGame::new(vec![0.4, 0.7], 1).unwrap();
        let a = k_equals_n_minus_1_solution(&g).unwrap();
        let b = unstructured_solution(g.probs(), 1).unwrap();
        assert_abs_diff_eq!(a.value, b.value);
        assert_eq!(a.hider, b.hider);

        let g = CycleGame::equal(3, 0.5, 2).unwrap();
        let s = k_equals_n_minus_1_solution(&g).unwrap();
        for (_, q) in s.hider.iter() {
            assert_abs_diff_eq!(q, 1.0 / 3.0, epsilon = 1e-15);
        }

        let g = CycleGame::new(vec![0.9, 0.5, 0.9], 2).unwrap();
        let s = k_equals_n_minus_1_solution(&g).unwrap();
        let q = |v: Vec<usize>| s.hider.probability_of(&HiderPlacement::new(v).unwrap());
        assert_abs_diff_eq!(q(vec![1, 2]), 9.0 / 19.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q(vec![1, 3]), 1.0 / 19.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q(vec![2, 3]), 9.0 / 19.0, epsilon = 1e-15);

        assert!(k_equals_n_minus_1_solution(&CycleGame::equal(4, 0.5, 2).unwrap()).is_err());
    }

    #[test]
    fn search_ending_at_vertex() {
        assert_eq!(search_ending_at(5, 3).order(), &[1, 2, 5, 4, 3]);
        assert_eq!(search_ending_at(4, 1).order(), &[4, 3, 2, 1]);
        assert_eq!(search_ending_at(4, 4).order(), &[1, 2, 3, 4]);
    }
}
