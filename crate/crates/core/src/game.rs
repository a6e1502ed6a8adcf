//! Cycle games, expanding searches and the payoff function.
//!
//! Vertices of the cycle are `0..=n`; `0` is the root, always searched first
//! with survival probability one, so it never appears in orderings or
//! placements. Clockwise means `1, 2, ..., n`.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::PROB_SUM_TOL;

/// A search and rescue game on the cycle with `n` non-root vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleGame {
    p: Vec<f64>,
    k: usize,
}

impl CycleGame {
    /// Builds a game from the success probabilities `p_1..p_n` and the
    /// number of targets `k`.
    pub fn new(p: Vec<f64>, k: usize) -> Result<Self> {
        let n = p.len();
        if n < 2 {
            return Err(Error::InvalidInstance(format!(
                "cycle needs at least 2 non-root vertices, got {n}"
            )));
        }
        if let Some((i, &pi)) = p
            .iter()
            .enumerate()
            .find(|(_, &pi)| !(pi > 0.0 && pi < 1.0))
        {
            return Err(Error::InvalidInstance(format!(
                "success probability p_{} = {pi} is not in (0, 1)",
                i + 1
            )));
        }
        if k < 1 || k > n {
            return Err(Error::InvalidInstance(format!(
                "target count k = {k} must lie in 1..={n}"
            )));
        }
        Ok(CycleGame { p, k })
    }

    /// Game with every success probability equal to `p`.
    pub fn equal(n: usize, p: f64, k: usize) -> Result<Self> {
        Self::new(vec![p; n], k)
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Success probabilities `p_1..p_n` (index `i - 1` holds `p_i`).
    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    /// Success probability of vertex `v` in `1..=n`.
    pub fn prob(&self, v: usize) -> f64 {
        self.p[v - 1]
    }

    /// The common success probability, if all vertices share one.
    pub fn common_prob(&self) -> Option<f64> {
        let first = self.p[0];
        self.p.iter().all(|&q| q == first).then_some(first)
    }

    /// Same probabilities, different number of targets.
    pub fn with_targets(&self, k: usize) -> Result<Self> {
        Self::new(self.p.clone(), k)
    }

    /// The game with vertex labels reversed (`v -> n + 1 - v`).
    pub fn mirrored(&self) -> Self {
        let mut p = self.p.clone();
        p.reverse();
        CycleGame { p, k: self.k }
    }

    /// Product of all success probabilities.
    pub fn total_product(&self) -> f64 {
        self.p.iter().product()
    }

    pub(crate) fn check_placement(&self, h: &HiderPlacement) -> Result<()> {
        if h.len() != self.k {
            return Err(Error::InvalidStrategy(format!(
                "placement {h} has {} targets, game has k = {}",
                h.len(),
                self.k
            )));
        }
        if h.vertices().last().is_some_and(|&v| v > self.n()) {
            return Err(Error::InvalidStrategy(format!(
                "placement {h} uses a vertex outside 1..={}",
                self.n()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_search(&self, s: &ExpandingSearch) -> Result<()> {
        if s.n() != self.n() {
            return Err(Error::InvalidStrategy(format!(
                "search {s} covers {} vertices, game has n = {}",
                s.n(),
                self.n()
            )));
        }
        Ok(())
    }
}

/// One step of an expanding search on a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// Extend the searched arc clockwise.
    Clockwise,
    /// Extend the searched arc anticlockwise.
    Anticlockwise,
}

impl Move {
    pub fn symbol(self) -> char {
        match self {
            Move::Clockwise => 'C',
            Move::Anticlockwise => 'A',
        }
    }
}

/// An expanding search of the cycle: every prefix of `order`, together with
/// the root, is a contiguous arc.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpandingSearch {
    order: Vec<usize>,
}

impl ExpandingSearch {
    /// Validates `order` as an expanding search of the cycle with
    /// `order.len()` non-root vertices.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::InvalidStrategy("empty search order".into()));
        }
        let (mut cw, mut acw) = (0, n + 1);
        for (step, &v) in order.iter().enumerate() {
            if v == cw + 1 {
                cw = v;
            } else if v + 1 == acw {
                acw = v;
            } else {
                return Err(Error::InvalidStrategy(format!(
                    "vertex {v} at step {} is not adjacent to the searched arc",
                    step + 1
                )));
            }
        }
        Ok(ExpandingSearch { order })
    }

    /// Builds the search from a move string. The final move is irrelevant:
    /// only one vertex is left by then.
    pub fn from_moves(moves: &[Move]) -> Result<Self> {
        let n = moves.len();
        if n == 0 {
            return Err(Error::InvalidStrategy("empty move string".into()));
        }
        let (mut cw, mut acw) = (0, n + 1);
        let order = moves
            .iter()
            .map(|m| match m {
                Move::Clockwise => {
                    cw += 1;
                    cw
                }
                Move::Anticlockwise => {
                    acw -= 1;
                    acw
                }
            })
            .collect();
        Ok(ExpandingSearch { order })
    }

    /// Parses a string over `{C, A}`.
    pub fn parse_moves(s: &str) -> Result<Self> {
        let moves = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'C' => Ok(Move::Clockwise),
                'A' => Ok(Move::Anticlockwise),
                other => Err(Error::InvalidStrategy(format!("unknown move {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_moves(&moves)
    }

    /// `(1, 2, ..., n)`.
    pub fn clockwise(n: usize) -> Self {
        ExpandingSearch {
            order: (1..=n).collect(),
        }
    }

    /// `(n, n - 1, ..., 1)`.
    pub fn anticlockwise(n: usize) -> Self {
        ExpandingSearch {
            order: (1..=n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// `order()[i]` is the `(i + 1)`-th vertex searched.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Canonical move string; the final move is always clockwise.
    pub fn moves(&self) -> Vec<Move> {
        let mut cw = 0;
        let last = self.order.len() - 1;
        self.order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if i == last || v == cw + 1 {
                    cw = v;
                    Move::Clockwise
                } else {
                    Move::Anticlockwise
                }
            })
            .collect()
    }

    pub fn move_string(&self) -> String {
        self.moves().into_iter().map(Move::symbol).collect()
    }

    /// `positions()[v - 1]` is the zero-based step at which `v` is searched.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v - 1] = i;
        }
        pos
    }

    /// The same search with vertex labels reversed.
    pub fn mirrored(&self) -> Self {
        let n = self.order.len();
        ExpandingSearch {
            order: self.order.iter().map(|&v| n + 1 - v).collect(),
        }
    }
}

impl fmt::Display for ExpandingSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.order)
    }
}

/// Every expanding search of the cycle with `n` non-root vertices, in
/// lexicographic order of their move strings (`C` before `A`). There are
/// `2^(n-1)` of them.
pub fn enumerate_expanding_searches(n: usize) -> Result<Vec<ExpandingSearch>> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!(
            "expanding searches need n >= 2, got {n}"
        )));
    }
    if n > 30 {
        return Err(Error::InstanceTooLarge(format!(
            "2^{} expanding searches",
            n - 1
        )));
    }
    let free = n - 1;
    let searches = (0u64..1 << free)
        .map(|mask| {
            let mut moves: Vec<Move> = (0..free)
                .map(|i| {
                    if mask >> (free - 1 - i) & 1 == 1 {
                        Move::Anticlockwise
                    } else {
                        Move::Clockwise
                    }
                })
                .collect();
            moves.push(Move::Clockwise);
            ExpandingSearch::from_moves(&moves).expect("non-empty move string")
        })
        .collect();
    Ok(searches)
}

/// Target locations: a strictly increasing tuple of vertices in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HiderPlacement {
    vertices: Vec<usize>,
}

impl HiderPlacement {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidStrategy("placement has no targets".into()));
        }
        if vertices[0] == 0 {
            return Err(Error::InvalidStrategy(
                "targets cannot be hidden at the root".into(),
            ));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStrategy(format!(
                "placement vertices {vertices:?} are not strictly increasing"
            )));
        }
        Ok(HiderPlacement { vertices })
    }

    /// A single target at `v`.
    pub fn single(v: usize) -> Result<Self> {
        Self::new(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn mirrored(&self, n: usize) -> Self {
        let mut vertices: Vec<usize> = self.vertices.iter().map(|&v| n + 1 - v).collect();
        vertices.reverse();
        HiderPlacement { vertices }
    }
}

impl fmt::Display for HiderPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.vertices)
    }
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub fn all_placements(n: usize, k: usize) -> Vec<HiderPlacement> {
    use itertools::Itertools;
    (1..=n)
        .combinations(k)
        .map(|vertices| HiderPlacement { vertices })
        .collect()
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[usize]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// A finitely supported probability distribution over pure strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy<T> {
    support: Vec<(T, f64)>,
}

impl<T: PartialEq + Eq + Hash + Clone + fmt::Debug> MixedStrategy<T> {
    /// Validates nonnegativity, distinctness and that the probabilities sum
    /// to one. Zero-probability entries are dropped.
    pub fn new(support: Vec<(T, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidStrategy("empty support".into()));
        }
        let mut seen = HashSet::new();
        for (item, prob) in &support {
            if !prob.is_finite() || *prob < 0.0 {
                return Err(Error::InvalidStrategy(format!(
                    "probability {prob} of {item:?} is not a nonnegative number"
                )));
            }
            if !seen.insert(item.clone()) {
                return Err(Error::InvalidStrategy(format!(
                    "{item:?} appears twice in the support"
                )));
            }
        }
        let total = fsum(support.iter().map(|(_, q)| *q));
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidStrategy(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let support = support.into_iter().filter(|(_, q)| *q > 0.0).collect();
        Ok(MixedStrategy { support })
    }

    /// Rescales nonnegative weights to a distribution.
    pub fn from_weights(weights: Vec<(T, f64)>) -> Result<Self> {
        let total = fsum(weights.iter().map(|(_, w)| *w));
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidStrategy(format!(
                "weights sum to {total}, cannot normalise"
            )));
        }
        Self::new(weights.into_iter().map(|(t, w)| (t, w / total)).collect())
    }

    pub fn pure(item: T) -> Self {
        MixedStrategy {
            support: vec![(item, 1.0)],
        }
    }

    pub fn uniform(items: Vec<T>) -> Result<Self> {
        let w = 1.0 / items.len() as f64;
        Self::from_weights(items.into_iter().map(|t| (t, w)).collect())
    }

    /// Probability assigned to `item` (zero when outside the support).
    pub fn probability_of(&self, item: &T) -> f64 {
        self.support
            .iter()
            .find(|(t, _)| t == item)
            .map_or(0.0, |(_, q)| *q)
    }

    pub fn map<U, F>(&self, f: F) -> MixedStrategy<U>
    where
        F: Fn(&T) -> U,
    {
        MixedStrategy {
            support: self.support.iter().map(|(t, q)| (f(t), *q)).collect(),
        }
    }
}

impl<T> MixedStrategy<T> {
    pub fn support(&self) -> &[(T, f64)] {
        &self.support
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.support.iter().map(|(t, q)| (t, *q))
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

/// Compensated (Neumaier) summation.
pub fn fsum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Probability of surviving until every target in `h` has been searched,
/// when searching in the order `search`.
pub fn payoff(game: &CycleGame, h: &HiderPlacement, search: &ExpandingSearch) -> Result<f64> {
    game.check_placement(h)?;
    game.check_search(search)?;
    let pos = search.positions();
    let last = h.vertices().iter().map(|&v| pos[v - 1]).max().unwrap_or(0);
    Ok(search.order()[..=last]
        .iter()
        .map(|&v| game.prob(v))
        .product())
}

/// The auxiliary single-target payoff `P(j, search) / sqrt(p_j)`.
pub fn payoff_prime(game: &CycleGame, j: usize, search: &ExpandingSearch) -> Result<f64> {
    if game.k() != 1 {
        return Err(Error::Unsupported(format!(
            "the auxiliary payoff is only defined for one target, game has k = {}",
            game.k()
        )));
    }
    if j == 0 || j > game.n() {
        return Err(Error::InvalidStrategy(format!(
            "vertex {j} is outside 1..={}",
            game.n()
        )));
    }
    game.check_search(search)?;
    let before: f64 = search
        .order()
        .iter()
        .take_while(|&&v| v != j)
        .map(|&v| game.prob(v))
        .product();
    Ok(game.prob(j).sqrt() * before)
}

/// Expected payoff of a pair of mixed strategies.
pub fn mixed_payoff(
    game: &CycleGame,
    hider: &MixedStrategy<HiderPlacement>,
    searcher: &MixedStrategy<ExpandingSearch>,
) -> Result<f64> {
    let mut total = 0.0;
    for (h, qh) in hider.iter() {
        for (s, qs) in searcher.iter() {
            total += qh * qs * payoff(game, h, s)?;
        }
    }
    Ok(total)
}

/// Smallest expected payoff of `searcher` over all pure Hider placements,
/// i.e. what the mixed search guarantees.
pub fn guaranteed_payoff(
    game: &CycleGame,
    searcher: &MixedStrategy<ExpandingSearch>,
) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for h in all_placements(game.n(), game.k()) {
        let mut v = 0.0;
        for (s, q) in searcher.iter() {
            v += q * payoff(game, &h, s)?;
        }
        worst = worst.min(v);
    }
    Ok(worst)
}

/// An adaptive search that alternates direction: clockwise until
/// `clockwise[0]` targets are found, then anticlockwise from the root until
/// `anticlockwise[0]` more are found, then clockwise again, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwitchingRule {
    clockwise: Vec<usize>,
    anticlockwise: Vec<usize>,
}

impl SwitchingRule {
    pub fn new(clockwise: Vec<usize>, anticlockwise: Vec<usize>, k: usize) -> Result<Self> {
        if clockwise.len() != anticlockwise.len() || clockwise.is_empty() {
            return Err(Error::InvalidStrategy(
                "switching sequences must be non-empty and of equal length".into(),
            ));
        }
        let total: usize = clockwise.iter().chain(&anticlockwise).sum();
        if total != k {
            return Err(Error::InvalidStrategy(format!(
                "switching sequences find {total} targets, game has k = {k}"
            )));
        }
        Ok(SwitchingRule {
            clockwise,
            anticlockwise,
        })
    }

    /// The rule that goes clockwise until `j` targets are found and then
    /// anticlockwise.
    pub fn sigma(j: usize, k: usize) -> Result<Self> {
        if j > k {
            return Err(Error::InvalidStrategy(format!(
                "rule index {j} exceeds k = {k}"
            )));
        }
        Self::new(vec![j], vec![k - j], k)
    }

    /// Total number of targets found while moving clockwise.
    pub fn clockwise_total(&self) -> usize {
        self.clockwise.iter().sum()
    }

    /// Probability of surviving until every target is found.
    pub fn payoff(&self, game: &CycleGame, h: &HiderPlacement) -> Result<f64> {
        game.check_placement(h)?;
        let n = game.n();
        let (mut cw, mut acw) = (0, n + 1);
        let mut found = 0;
        let mut survive = 1.0;
        for (&x, &y) in self.clockwise.iter().zip(&self.anticlockwise) {
            for (want, clockwise) in [(x, true), (y, false)] {
                let mut got = 0;
                while got < want && found < h.len() && cw + 1 < acw {
                    let v = if clockwise {
                        cw += 1;
                        cw
                    } else {
                        acw -= 1;
                        acw
                    };
                    survive *= game.prob(v);
                    if h.contains(v) {
                        got += 1;
                        found += 1;
                    }
                }
            }
        }
        Ok(survive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn orders(n: usize) -> Vec<Vec<usize>> {
        enumerate_expanding_searches(n)
            .unwrap()
            .into_iter()
            .map(|s| s.order().to_vec())
            .collect()
    }

    #[test]
    fn enumerates_small_cycles() {
        assert_eq!(orders(2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(
            orders(3),
            vec![vec![1, 2, 3], vec![1, 3, 2], vec![3, 1, 2], vec![3, 2, 1]]
        );
        assert_eq!(orders(10).len(), 512);
    }

    #[test]
    fn enumeration_rejects_tiny_cycles() {
        assert!(matches!(
            enumerate_expanding_searches(1),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn enumeration_is_complete_and_valid() {
        for n in 2..=16 {
            let all = enumerate_expanding_searches(n).unwrap();
            assert_eq!(all.len(), 1 << (n - 1));
            if n <= 12 {
                let distinct: HashSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
                for s in &all {
                    assert_prefix_arcs(s);
                    assert_eq!(ExpandingSearch::from_moves(&s.moves()).unwrap(), *s);
                }
            }
        }
    }

    // Independent check: the searched set plus the root is an arc iff it
    // is {0..a} ∪ {b..n} for some a < b.
    fn assert_prefix_arcs(s: &ExpandingSearch) {
        let n = s.n();
        let mut searched = vec![false; n + 2];
        searched[0] = true;
        for &v in s.order() {
            searched[v] = true;
            let a = (0..=n).take_while(|&i| searched[i]).last().unwrap();
            let tail = (1..=n).rev().take_while(|&i| searched[i]).count();
            let count = searched[..=n].iter().filter(|&&b| b).count();
            assert_eq!(count, a + 1 + tail.min(n - a), "{s} prefix is not an arc");
        }
    }

    #[test]
    fn invalid_orders_are_rejected() {
        assert!(ExpandingSearch::new(vec![2, 1, 3]).is_err());
        assert!(ExpandingSearch::new(vec![1, 1, 3]).is_err());
        assert!(ExpandingSearch::new(vec![1, 3, 2]).is_ok());
    }

    #[test]
    fn canonical_final_move_is_clockwise() {
        let s = ExpandingSearch::anticlockwise(4);
        assert_eq!(s.move_string(), "AAAC");
        assert_eq!(ExpandingSearch::parse_moves("AAAA").unwrap(), s);
    }

    #[test]
    fn game_validation() {
        assert!(CycleGame::new(vec![0.5], 1).is_err());
        assert!(CycleGame::new(vec![0.5, 1.0], 1).is_err());
        assert!(CycleGame::new(vec![0.5, 0.0], 1).is_err());
        assert!(CycleGame::new(vec![0.5, 0.5], 3).is_err());
        assert!(CycleGame::new(vec![0.5, 0.5], 0).is_err());
        assert!(CycleGame::new(vec![0.5, f64::NAN], 1).is_err());
    }

    #[test]
    fn pure_payoffs() {
        let g = CycleGame::equal(3, 0.5, 1).unwrap();
        let h = HiderPlacement::single(2).unwrap();
        assert_abs_diff_eq!(
            payoff(&g, &h, &ExpandingSearch::clockwise(3)).unwrap(),
            0.25
        );

        let g = CycleGame::new(vec![0.9, 0.5, 0.9], 1).unwrap();
        let s = ExpandingSearch::new(vec![3, 2, 1]).unwrap();
        assert_abs_diff_eq!(payoff(&g, &h, &s).unwrap(), 0.45, epsilon = 1e-15);

        let g = CycleGame::equal(4, 0.5, 2).unwrap();
        let h = HiderPlacement::new(vec![1, 3]).unwrap();
        assert_abs_diff_eq!(
            payoff(&g, &h, &ExpandingSearch::clockwise(4)).unwrap(),
            0.125
        );
    }

    #[test]
    fn payoff_rejects_bad_placements() {
        let g = CycleGame::equal(3, 0.5, 1).unwrap();
        let s = ExpandingSearch::clockwise(3);
        assert!(HiderPlacement::single(0).is_err());
        let far = HiderPlacement::single(4).unwrap();
        assert!(matches!(
            payoff(&g, &far, &s),
            Err(Error::InvalidStrategy(_))
        ));
        let two = HiderPlacement::new(vec![1, 2]).unwrap();
        assert!(payoff(&g, &two, &s).is_err());
        assert!(payoff(
            &g,
            &HiderPlacement::single(1).unwrap(),
            &ExpandingSearch::clockwise(4)
        )
        .is_err());
    }

    #[test]
    fn auxiliary_payoff() {
        let g = CycleGame::equal(3, 0.5, 1).unwrap();
        let v = payoff_prime(&g, 2, &ExpandingSearch::clockwise(3)).unwrap();
        assert_abs_diff_eq!(v, 0.5 * 0.5f64.sqrt(), epsilon = 1e-15);

        let g = CycleGame::new(vec![0.9, 0.5, 0.9], 1).unwrap();
        let s = ExpandingSearch::new(vec![3, 2, 1]).unwrap();
        assert_abs_diff_eq!(payoff_prime(&g, 2, &s).unwrap(), 0.636396, epsilon = 1e-6);
        assert_abs_diff_eq!(
            payoff_prime(&g, 3, &s).unwrap(),
            0.9f64.sqrt(),
            epsilon = 1e-15
        );

        let g2 = g.with_targets(2).unwrap();
        assert!(matches!(
            payoff_prime(&g2, 2, &s),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn mixed_payoffs() {
        let g = CycleGame::equal(3, 0.5, 1).unwrap();
        let h = MixedStrategy::pure(HiderPlacement::single(2).unwrap());
        let s = MixedStrategy::uniform(vec![
            ExpandingSearch::clockwise(3),
            ExpandingSearch::anticlockwise(3),
        ])
        .unwrap();
        assert_abs_diff_eq!(mixed_payoff(&g, &h, &s).unwrap(), 0.25);

        let g = CycleGame::equal(2, 0.5, 1).unwrap();
        let h = MixedStrategy::uniform(all_placements(2, 1)).unwrap();
        let s = MixedStrategy::uniform(enumerate_expanding_searches(2).unwrap()).unwrap();
        assert_abs_diff_eq!(mixed_payoff(&g, &h, &s).unwrap(), 0.375);

        let wrong = MixedStrategy::pure(ExpandingSearch::clockwise(3));
        assert!(mixed_payoff(&g, &h, &wrong).is_err());
    }

    #[test]
    fn mixed_strategy_validation() {
        assert!(MixedStrategy::new(vec![(1, 0.5), (2, 0.4)]).is_err());
        assert!(MixedStrategy::new(vec![(1, 0.5), (1, 0.5)]).is_err());
        assert!(MixedStrategy::new(vec![(1, 1.5), (2, -0.5)]).is_err());
        let m = MixedStrategy::new(vec![(1, 1.0), (2, 0.0)]).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn sigma_rules_match_hand_simulation() {
        let g = CycleGame::equal(5, 0.5, 2).unwrap();
        let h = HiderPlacement::new(vec![2, 4]).unwrap();
        let one = SwitchingRule::sigma(1, 2).unwrap();
        assert_abs_diff_eq!(one.payoff(&g, &h).unwrap(), 0.0625);
        let all_cw = SwitchingRule::sigma(2, 2).unwrap();
        let direct = payoff(&g, &h, &ExpandingSearch::clockwise(5)).unwrap();
        assert_abs_diff_eq!(all_cw.payoff(&g, &h).unwrap(), direct);
        let all_acw = SwitchingRule::sigma(0, 2).unwrap();
        let direct = payoff(&g, &h, &ExpandingSearch::anticlockwise(5)).unwrap();
        assert_abs_diff_eq!(all_acw.payoff(&g, &h).unwrap(), direct);
    }

    #[test]
    fn payoff_is_monotone_in_position() {
        let g = CycleGame::new(vec![0.3, 0.8, 0.6, 0.9, 0.7], 1).unwrap();
        for s in enumerate_expanding_searches(5).unwrap() {
            let vals: Vec<f64> = s
                .order()
                .iter()
                .map(|&v| payoff(&g, &HiderPlacement::single(v).unwrap(), &s).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] <= w[0]));
        }
    }
}
