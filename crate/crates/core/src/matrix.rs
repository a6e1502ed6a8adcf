//! Finite zero-sum matrix games solved by linear programming, and the payoff
//! matrices of cycle games built from exhaustive strategy enumeration.
//!
//! The row player maximizes, the column player minimizes. After rescaling
//! the matrix so its entries are positive, the column player's problem is
//!
//! ```text
//! maximize  sum(y)   subject to  M y <= 1,  y >= 0
//! ```
//!
//! whose optimum `z` gives the value `1 / z`; the column strategy is `y / z`
//! and the row strategy is read off the dual prices of the slack rows. The
//! simplex runs on a condensed (Tucker) tableau of size `rows x cols`, so a
//! game with tens of thousands of pure Searcher strategies stays cheap.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::game::{
    all_placements, enumerate_expanding_searches, CycleGame, ExpandingSearch, HiderPlacement,
    MixedStrategy, SwitchingRule,
};
use crate::solution::{GameSolution, Method, SearchPlan};

/// Pivot eligibility threshold on the normalised tableau.
const PIVOT_EPS: f64 = 1e-12;
/// Ratio-test cutoff below which a pivot counts as degenerate.
pub const FEASIBILITY_TOL: f64 = 1e-10;
/// Slack allowed on the optimality certificate, in payoff units.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Largest cycle the exhaustive builders accept.
pub const MAX_ORACLE_N: usize = 16;
/// Largest number of Hider placements the builders accept.
pub const MAX_PLACEMENTS: usize = 100_000;
/// Largest payoff matrix (entries) the builders accept.
pub const MAX_ENTRIES: usize = 20_000_000;

/// A payoff matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGame {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl MatrixGame {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInstance("empty payoff matrix".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidInstance(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInstance(
                "payoff matrix has non-finite entries".into(),
            ));
        }
        Ok(MatrixGame {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInstance("ragged payoff matrix".into()));
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn scaled(&self, c: f64) -> MatrixGame {
        MatrixGame {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `min_j sum_i x_i M_ij`: what row mix `x` guarantees.
    pub fn row_guarantee(&self, x: &[f64]) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| x[i] * self.get(i, j)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    /// `max_i sum_j M_ij y_j`: what column mix `y` concedes.
    pub fn col_guarantee(&self, y: &[f64]) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Value and optimal strategies of a matrix game.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSolution {
    pub value: f64,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
}

impl MatrixSolution {
    /// Checks both sides of the optimality certificate against `game`.
    pub fn certify(&self, game: &MatrixGame, tol: f64) -> Result<()> {
        let floor = game.row_guarantee(&self.row_strategy);
        let ceiling = game.col_guarantee(&self.col_strategy);
        if floor < self.value - tol || ceiling > self.value + tol {
            return Err(Error::SolverFailure(format!(
                "certificate violated: row floor {floor}, column ceiling {ceiling}, value {}",
                self.value
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Structural(usize),
    Slack(usize),
}

struct Tableau {
    m: usize,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    d: Vec<f64>,
    z: f64,
    row_var: Vec<Var>,
    col_var: Vec<Var>,
}

impl Tableau {
    fn label(&self, v: Var) -> usize {
        match v {
            Var::Structural(j) => j,
            Var::Slack(i) => self.n + i,
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let eligible = (0..self.n).filter(|&c| self.d[c] > PIVOT_EPS);
        if bland {
            eligible.min_by_key(|&c| self.label(self.col_var[c]))
        } else {
            eligible.fold(None, |best: Option<usize>, c| match best {
                Some(b) if self.d[b] >= self.d[c] => Some(b),
                _ => Some(c),
            })
        }
    }

    fn leaving(&self, c: usize, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.m {
            let arc = self.a[r * self.n + c];
            if arc <= PIVOT_EPS {
                continue;
            }
            let ratio = self.b[r] / arc;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let better =
                        if (ratio - bratio).abs() <= FEASIBILITY_TOL * bratio.abs().max(1.0) {
                            if bland {
                                self.label(self.row_var[r]) < self.label(self.row_var[br])
                            } else {
                                arc > self.a[br * self.n + c]
                            }
                        } else {
                            ratio < bratio
                        };
                    if better {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let n = self.n;
        let piv = self.a[r * n + c];
        let inv = 1.0 / piv;
        for j in 0..n {
            if j != c {
                self.a[r * n + j] *= inv;
            }
        }
        self.a[r * n + c] = inv;
        self.b[r] *= inv;

        let pivot_row: Vec<f64> = self.a[r * n..(r + 1) * n].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let aic = self.a[i * n + c];
            if aic == 0.0 {
                continue;
            }
            let row = &mut self.a[i * n..(i + 1) * n];
            for j in 0..n {
                if j != c {
                    row[j] -= aic * pivot_row[j];
                }
            }
            row[c] = -aic * inv;
            self.b[i] -= aic * self.b[r];
        }
        let dc = self.d[c];
        for (j, &a) in pivot_row.iter().enumerate() {
            if j != c {
                self.d[j] -= dc * a;
            }
        }
        self.d[c] = -dc * inv;
        self.z += dc * self.b[r];

        std::mem::swap(&mut self.row_var[r], &mut self.col_var[c]);
    }
}

/// Solves a zero-sum matrix game; rows maximize.
///
/// Dantzig's rule is used until `10 (m + n)` consecutive degenerate pivots
/// have been made, after which Bland's rule takes over. The returned
/// strategies are checked against the certificate before returning.
pub fn solve_matrix_game(game: &MatrixGame) -> Result<MatrixSolution> {
    let (m, n) = (game.rows, game.cols);
    let scale = game.entries.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let min = game
        .entries
        .iter()
        .fold(f64::INFINITY, |acc, &x| acc.min(x))
        / scale;
    let shift = if min > 0.0 { 0.0 } else { 1.0 - min };

    let mut t = Tableau {
        m,
        n,
        a: game.entries.iter().map(|x| x / scale + shift).collect(),
        b: vec![1.0; m],
        d: vec![1.0; n],
        z: 0.0,
        row_var: (0..m).map(Var::Slack).collect(),
        col_var: (0..n).map(Var::Structural).collect(),
    };

    let degenerate_limit = 10 * (m + n);
    let max_pivots = 50 * (m + n) + 1000;
    let mut degenerate_run = 0;
    let mut bland = false;
    let mut pivots = 0;
    while let Some(c) = t.entering(bland) {
        let r = t
            .leaving(c, bland)
            .ok_or_else(|| Error::SolverFailure("linear program is unbounded".into()))?;
        let step = t.b[r] / t.a[r * n + c];
        if step <= FEASIBILITY_TOL {
            degenerate_run += 1;
            if degenerate_run >= degenerate_limit {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }
        t.pivot(r, c);
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::SolverFailure(format!(
                "simplex did not converge within {max_pivots} pivots"
            )));
        }
    }

    let mut y = vec![0.0; n];
    for (r, v) in t.row_var.iter().enumerate() {
        if let Var::Structural(j) = *v {
            y[j] = t.b[r].max(0.0);
        }
    }
    let mut x = vec![0.0; m];
    for (c, v) in t.col_var.iter().enumerate() {
        if let Var::Slack(i) = *v {
            x[i] = (-t.d[c]).max(0.0);
        }
    }
    let ysum: f64 = y.iter().sum();
    let xsum: f64 = x.iter().sum();
    if !(ysum > 0.0 && xsum > 0.0) {
        return Err(Error::SolverFailure("degenerate optimum".into()));
    }
    y.iter_mut().for_each(|v| *v /= ysum);
    x.iter_mut().for_each(|v| *v /= xsum);

    let value = (1.0 / t.z - shift) * scale;
    let solution = MatrixSolution {
        value,
        row_strategy: x,
        col_strategy: y,
    };
    solution.certify(game, CERTIFICATE_TOL)?;
    Ok(solution)
}

/// Payoff matrix of a non-adaptive cycle game, with the strategies indexing
/// its rows and columns.
#[derive(Debug, Clone)]
pub struct DiscreteGameMatrix {
    pub matrix: MatrixGame,
    pub searches: Vec<ExpandingSearch>,
    pub placements: Vec<HiderPlacement>,
}

/// Payoff matrix of an adaptive cycle game: rows are the rules
/// `sigma_0..sigma_k`.
#[derive(Debug, Clone)]
pub struct AdaptiveGameMatrix {
    pub matrix: MatrixGame,
    pub rules: Vec<usize>,
    pub placements: Vec<HiderPlacement>,
}

fn binomial_capped(n: usize, k: usize, cap: usize) -> Option<usize> {
    let k = k.min(n - k);
    let mut c: usize = 1;
    for i in 0..k {
        c = c.checked_mul(n - i)? / (i + 1);
        if c > cap {
            return None;
        }
    }
    Some(c)
}

fn check_size(game: &CycleGame, rows: usize) -> Result<usize> {
    let (n, k) = (game.n(), game.k());
    if n > MAX_ORACLE_N {
        return Err(Error::InstanceTooLarge(format!(
            "n = {n} exceeds the oracle limit {MAX_ORACLE_N}"
        )));
    }
    let cols = binomial_capped(n, k, MAX_PLACEMENTS).ok_or_else(|| {
        Error::InstanceTooLarge(format!(
            "C({n}, {k}) Hider placements exceed {MAX_PLACEMENTS}"
        ))
    })?;
    if rows.saturating_mul(cols) > MAX_ENTRIES {
        return Err(Error::InstanceTooLarge(format!(
            "{rows} x {cols} payoff matrix exceeds {MAX_ENTRIES} entries"
        )));
    }
    Ok(cols)
}

/// Builds the matrix of `payoff(H, sigma)` over every expanding search and
/// every `k`-subset of vertices.
pub fn build_discrete_game_matrix(game: &CycleGame) -> Result<DiscreteGameMatrix> {
    let n = game.n();
    check_size(game, 1usize << (n - 1))?;
    let searches = enumerate_expanding_searches(n)?;
    let placements = all_placements(n, game.k());
    let mut entries = Vec::with_capacity(searches.len() * placements.len());
    for s in &searches {
        let pos = s.positions();
        let prefix: Vec<f64> = s
            .order()
            .iter()
            .scan(1.0, |acc, &v| {
                *acc *= game.prob(v);
                Some(*acc)
            })
            .collect();
        for h in &placements {
            let last = h.vertices().iter().map(|&v| pos[v - 1]).max().unwrap_or(0);
            entries.push(prefix[last]);
        }
    }
    let matrix = MatrixGame::new(searches.len(), placements.len(), entries)?;
    Ok(DiscreteGameMatrix {
        matrix,
        searches,
        placements,
    })
}

/// Builds the matrix of the adaptive rules `sigma_j` against every
/// `k`-subset, by simulating each rule.
pub fn build_adaptive_game_matrix(game: &CycleGame) -> Result<AdaptiveGameMatrix> {
    let k = game.k();
    check_size(game, k + 1)?;
    let placements = all_placements(game.n(), k);
    let rules: Vec<usize> = (0..=k).collect();
    let mut entries = Vec::with_capacity(rules.len() * placements.len());
    for &j in &rules {
        let rule = SwitchingRule::sigma(j, k)?;
        for h in &placements {
            entries.push(rule.payoff(game, h)?);
        }
    }
    let matrix = MatrixGame::new(rules.len(), placements.len(), entries)?;
    Ok(AdaptiveGameMatrix {
        matrix,
        rules,
        placements,
    })
}

fn mix_from<T>(items: &[T], probs: &[f64]) -> Result<MixedStrategy<T>>
where
    T: Clone + Eq + std::hash::Hash + std::fmt::Debug,
{
    let support = items
        .iter()
        .cloned()
        .zip(probs.iter().copied())
        .filter(|(_, q)| *q > 0.0)
        .collect_vec();
    MixedStrategy::from_weights(support)
}

/// Solves the non-adaptive cycle game exhaustively.
pub fn oracle_solution(game: &CycleGame) -> Result<GameSolution> {
    let built = build_discrete_game_matrix(game)?;
    let sol = solve_matrix_game(&built.matrix)?;
    let plans: Vec<SearchPlan> = built.searches.into_iter().map(SearchPlan::Order).collect();
    Ok(GameSolution::exact(
        sol.value,
        mix_from(&built.placements, &sol.col_strategy)?,
        mix_from(&plans, &sol.row_strategy)?,
        Method::Oracle,
    ))
}

/// Value of the non-adaptive cycle game computed by the oracle.
pub fn oracle_value(game: &CycleGame) -> Result<f64> {
    let built = build_discrete_game_matrix(game)?;
    Ok(solve_matrix_game(&built.matrix)?.value)
}

/// Solves the adaptive cycle game over the rules `sigma_0..sigma_k`.
pub fn adaptive_oracle_solution(game: &CycleGame) -> Result<GameSolution> {
    let built = build_adaptive_game_matrix(game)?;
    let sol = solve_matrix_game(&built.matrix)?;
    let plans: Vec<SearchPlan> = built.rules.into_iter().map(SearchPlan::Adaptive).collect();
    Ok(GameSolution::exact(
        sol.value,
        mix_from(&built.placements, &sol.col_strategy)?,
        mix_from(&plans, &sol.row_strategy)?,
        Method::Oracle,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn one_by_one() {
        let g = MatrixGame::from_rows(vec![vec![1.0]]).unwrap();
        let s = solve_matrix_game(&g).unwrap();
        assert_abs_diff_eq!(s.value, 1.0, epsilon = 1e-12);
        assert_eq!(s.row_strategy, vec![1.0]);
        assert_eq!(s.col_strategy, vec![1.0]);
    }

    #[test]
    fn matching_pennies() {
        let g = MatrixGame::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let s = solve_matrix_game(&g).unwrap();
        assert_abs_diff_eq!(s.value, 0.0, epsilon = 1e-12);
        for q in s.row_strategy.iter().chain(&s.col_strategy) {
            assert_abs_diff_eq!(*q, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn rock_paper_scissors_with_double_blow() {
        let g = MatrixGame::from_rows(vec![
            vec![0.0, 2.0, -1.0],
            vec![-1.0, 0.0, 1.0],
            vec![1.0, -1.0, 0.0],
        ])
        .unwrap();
        let s = solve_matrix_game(&g).unwrap();
        assert_abs_diff_eq!(s.value, 1.0 / 12.0, epsilon = 1e-12);
    }

    #[test]
    fn dominated_and_zero_games() {
        let g = MatrixGame::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(solve_matrix_game(&g).unwrap().value, 0.0);
        let g =
            MatrixGame::from_rows(vec![vec![3.0, 5.0], vec![1.0, 7.0], vec![2.0, 2.0]]).unwrap();
        // Row 0 guarantees 3; column 0 holds rows to at most 3.
        assert_abs_diff_eq!(solve_matrix_game(&g).unwrap().value, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(matches!(
            MatrixGame::from_rows(vec![]),
            Err(Error::InvalidInstance(_))
        ));
        assert!(MatrixGame::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(MatrixGame::from_rows(vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn small_cycle_matrices() {
        let g = CycleGame::equal(2, 0.5, 1).unwrap();
        let built = build_discrete_game_matrix(&g).unwrap();
        assert_eq!(built.matrix.row(0), &[0.5, 0.25]);
        assert_eq!(built.matrix.row(1), &[0.25, 0.5]);

        let g = CycleGame::new(vec![0.3, 0.6, 0.8], 3).unwrap();
        let built = build_discrete_game_matrix(&g).unwrap();
        assert_eq!(built.matrix.cols(), 1);
        for i in 0..4 {
            assert_abs_diff_eq!(built.matrix.get(i, 0), 0.3 * 0.6 * 0.8, epsilon = 1e-15);
        }

        let g = CycleGame::new(vec![0.9, 0.5, 0.9], 1).unwrap();
        let built = build_discrete_game_matrix(&g).unwrap();
        assert_eq!((built.matrix.rows(), built.matrix.cols()), (4, 3));
        assert_abs_diff_eq!(built.matrix.get(0, 1), 0.45, epsilon = 1e-15);
    }

    #[test]
    fn equal_p_three_cycle_value() {
        let g = CycleGame::equal(3, 0.5, 1).unwrap();
        assert_abs_diff_eq!(oracle_value(&g).unwrap(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn size_guards() {
        let g = CycleGame::equal(17, 0.5, 1).unwrap();
        assert!(matches!(
            build_discrete_game_matrix(&g),
            Err(Error::InstanceTooLarge(_))
        ));
        let g = CycleGame::equal(16, 0.5, 8).unwrap();
        assert!(matches!(
            build_discrete_game_matrix(&g),
            Err(Error::InstanceTooLarge(_))
        ));
    }

    #[test]
    fn adaptive_matrix_entries() {
        let g = CycleGame::equal(5, 0.5, 2).unwrap();
        let built = build_adaptive_game_matrix(&g).unwrap();
        let col = built
            .placements
            .iter()
            .position(|h| h.vertices() == [2, 4])
            .unwrap();
        assert_abs_diff_eq!(built.matrix.get(1, col), 0.0625);

        let g = CycleGame::equal(4, 0.5, 2).unwrap();
        let built = build_adaptive_game_matrix(&g).unwrap();
        let col = built
            .placements
            .iter()
            .position(|h| h.vertices() == [2, 4])
            .unwrap();
        let mean = built.matrix.column(col).iter().sum::<f64>() / 3.0;
        assert_abs_diff_eq!(mean, (0.125 + 0.125 + 0.0625) / 3.0, epsilon = 1e-15);
    }
}
