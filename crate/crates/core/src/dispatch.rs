//! Picks the right solver for an instance and cross-checks it against the
//! oracle.

use crate::error::{Error, Result};
use crate::game::{CycleGame, HiderPlacement, MixedStrategy};
use crate::matrix::{self, CERTIFICATE_TOL};
use crate::multi;
use crate::single::{self, PrefixProducts};
use crate::solution::{GameSolution, Guarantee, Method, SearchPlan};
use crate::ExpandingSearch;

/// Solves the cycle game with the most specific construction that applies.
///
/// Single-target instances without a closed form fall back to the oracle
/// while it is tractable and to the approximate solution beyond that.
/// With `adaptive`, only equal success probabilities are supported.
pub fn solve(game: &CycleGame, adaptive: bool) -> Result<GameSolution> {
    if adaptive {
        if game.common_prob().is_none() {
            return Err(Error::Unsupported(
                "adaptive game is only solved for equal success probabilities".into(),
            ));
        }
        return multi::adaptive_solution(game);
    }
    let (n, k) = (game.n(), game.k());
    if k == n {
        return all_targets_solution(game);
    }
    if k + 1 == n {
        return multi::k_equals_n_minus_1_solution(game);
    }
    if k > 1 {
        return matrix::oracle_solution(game);
    }
    if game.common_prob().is_some() {
        return single::equal_p_solution(game);
    }
    if n == 3 {
        let p = game.probs();
        return single::n3_solution(p[0], p[1], p[2]);
    }
    let pp = PrefixProducts::of(game);
    let j = single::boundary_index(&pp);
    if single::condition1_holds(&pp, j) {
        return single::two_point_solution(&pp, j);
    }
    if n <= matrix::MAX_ORACLE_N {
        matrix::oracle_solution(game)
    } else {
        single::approx_solution(game)
    }
}

/// Every vertex holds a target, so every search pays the full product.
fn all_targets_solution(game: &CycleGame) -> Result<GameSolution> {
    let n = game.n();
    let all = HiderPlacement::new((1..=n).collect())?;
    Ok(GameSolution::exact(
        game.total_product(),
        MixedStrategy::pure(all),
        MixedStrategy::pure(SearchPlan::Order(ExpandingSearch::clockwise(n))),
        Method::Unstructured,
    ))
}

/// Closed-form value set against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub method: Method,
    pub closed_form: f64,
    pub oracle: f64,
    pub difference: f64,
    /// The approximate solution's bracket, when the dispatcher had to use
    /// the oracle for a single target.
    pub bracket: Option<Guarantee>,
    pub passed: bool,
}

/// Solves `game` through [`solve`] and independently through the payoff
/// matrix, and compares the values to [`CERTIFICATE_TOL`].
pub fn verify(game: &CycleGame, adaptive: bool) -> Result<Verification> {
    let sol = solve(game, adaptive)?;
    let oracle = if adaptive {
        matrix::adaptive_oracle_solution(game)?.value
    } else {
        matrix::oracle_value(game)?
    };
    let bracket = if !adaptive && game.k() == 1 && sol.method == Method::Oracle {
        single::approx_solution(game)?.guarantee
    } else {
        sol.guarantee
    };
    let difference = (sol.value - oracle).abs();
    let passed = match bracket {
        Some(g) if !sol.method.is_exact() => g.contains(oracle, CERTIFICATE_TOL),
        Some(g) => difference <= CERTIFICATE_TOL && g.contains(oracle, CERTIFICATE_TOL),
        None => difference <= CERTIFICATE_TOL,
    };
    Ok(Verification {
        method: sol.method,
        closed_form: sol.value,
        oracle,
        difference,
        bracket,
        passed,
    })
}

/// One triple of the three-vertex condition grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub p: [f64; 3],
    pub boundary: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    /// Triples where the two-point condition holds.
    pub count: usize,
    pub total: usize,
    pub rows: Vec<GridRow>,
}

/// Evaluates the two-point condition at the boundary index for every
/// triple `(p1, p2, p3)` drawn from the three value lists.
pub fn condition_grid(v1: &[f64], v2: &[f64], v3: &[f64]) -> Result<GridReport> {
    let mut rows = Vec::with_capacity(v1.len() * v2.len() * v3.len());
    for &a in v1 {
        for &b in v2 {
            for &c in v3 {
                let pp = PrefixProducts::new(&[a, b, c])?;
                let boundary = single::boundary_index(&pp);
                rows.push(GridRow {
                    p: [a, b, c],
                    boundary,
                    holds: single::condition1_holds(&pp, boundary),
                });
            }
        }
    }
    Ok(GridReport {
        count: rows.iter().filter(|r| r.holds).count(),
        total: rows.len(),
        rows,
    })
}

/// The nine values `0.1, 0.2, ..., 0.9`.
pub fn decile_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn game(p: &[f64], k: usize) -> CycleGame {
        CycleGame::new(p.to_vec(), k).unwrap()
    }

    #[test]
    fn dispatch_methods() {
        assert_eq!(
            solve(&game(&[0.5; 4], 1), false).unwrap().method,
            Method::EqualP
        );
        assert_eq!(
            solve(&game(&[0.3, 0.6], 1), false).unwrap().method,
            Method::AllButOne
        );
        assert_eq!(
            solve(&game(&[0.3, 0.6, 0.8], 3), false).unwrap().method,
            Method::Unstructured
        );
        assert_eq!(
            solve(&game(&[0.3, 0.6, 0.8], 2), false).unwrap().method,
            Method::AllButOne
        );
        assert_eq!(
            solve(&game(&[0.3, 0.6, 0.8, 0.5, 0.4], 2), false)
                .unwrap()
                .method,
            Method::Oracle
        );
        assert_eq!(
            solve(&game(&[0.5; 6], 2), true).unwrap().method,
            Method::Adaptive
        );
        assert!(matches!(
            solve(&game(&[0.5, 0.6, 0.5, 0.5], 2), true),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn equal_p_value() {
        assert_abs_diff_eq!(
            solve(&game(&[0.5; 4], 1), false).unwrap().value,
            0.1875,
            epsilon = 1e-15
        );
    }

    #[test]
    fn all_targets() {
        let s = solve(&game(&[0.5, 0.4, 0.9], 3), false).unwrap();
        assert_abs_diff_eq!(s.value, 0.18, epsilon = 1e-15);
    }

    #[test]
    fn verify_passes() {
        for g in [
            game(&[0.5; 5], 1),
            game(&[0.3, 0.9, 0.2], 1),
            game(&[0.9, 0.5, 0.9], 2),
            game(&[0.7, 0.2, 0.9, 0.4, 0.6], 1),
        ] {
            let v = verify(&g, false).unwrap();
            assert!(v.passed, "{v:?}");
        }
        let v = verify(&game(&[0.6; 7], 2), true).unwrap();
        assert!(v.passed, "{v:?}");
    }

    #[test]
    fn grid_count() {
        let d = decile_grid();
        let r = condition_grid(&d, &d, &d).unwrap();
        assert_eq!((r.count, r.total), (526, 729));
    }
}
