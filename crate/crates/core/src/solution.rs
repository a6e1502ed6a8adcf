use std::fmt;

use crate::game::{ExpandingSearch, HiderPlacement, MixedStrategy};

/// A pure Searcher plan, in whichever form the solver that produced it uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SearchPlan {
    /// A fixed expanding search of the cycle.
    Order(ExpandingSearch),
    /// Search these locations first, then the rest in uniformly random
    /// order (the game without graph structure).
    SubsetFirst(Vec<usize>),
    /// Adaptive: clockwise until this many targets are found, then
    /// anticlockwise from the root.
    Adaptive(usize),
}

impl fmt::Display for SearchPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchPlan::Order(s) => write!(f, "{s}"),
            SearchPlan::SubsetFirst(a) => {
                let parts: Vec<String> = a.iter().map(|v| v.to_string()).collect();
                write!(f, "first{{{}}}", parts.join(","))
            }
            SearchPlan::Adaptive(j) => write!(f, "sigma{j}"),
        }
    }
}

/// Which construction produced a [`GameSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// No graph structure, one target: exact closed form.
    Unstructured,
    /// No graph structure, several targets: value is the best response to
    /// the optimal Hider mix, computed numerically.
    UnstructuredBestResponse,
    /// Equal success probabilities, one target.
    EqualP,
    /// Two-point Hider mix against the two full sweeps.
    TwoPoint,
    /// Three vertices, two-point case.
    N3Case1,
    /// Three vertices, fully mixed Hider.
    N3Case2,
    /// Exact solution of the auxiliary square-root game.
    GammaPrime,
    /// Auxiliary-game strategies used in the original game, with bounds.
    Approx,
    /// `k = n - 1` targets, reduced to the unstructured game.
    AllButOne,
    /// Adaptive Searcher, equal probabilities.
    Adaptive,
    /// Adaptive Searcher on the continuous circle.
    ContinuousAdaptive,
    /// Linear-programming solution of the full payoff matrix.
    Oracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Unstructured => "unstructured",
            Method::UnstructuredBestResponse => "unstructured-best-response",
            Method::EqualP => "equal-p",
            Method::TwoPoint => "two-point",
            Method::N3Case1 => "n3-case1",
            Method::N3Case2 => "n3-case2",
            Method::GammaPrime => "gamma-prime",
            Method::Approx => "approx",
            Method::AllButOne => "all-but-one",
            Method::Adaptive => "adaptive",
            Method::ContinuousAdaptive => "continuous-adaptive",
            Method::Oracle => "oracle",
        }
    }

    /// Whether `value` is the exact game value.
    pub fn is_exact(self) -> bool {
        !matches!(self, Method::Approx)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Payoffs certified by the two strategies of an approximate solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guarantee {
    /// The Searcher strategy earns at least this against any Hider.
    pub searcher_floor: f64,
    /// The Hider strategy concedes at most this against any Searcher.
    pub hider_ceiling: f64,
}

impl Guarantee {
    pub fn ratio(&self) -> f64 {
        self.hider_ceiling / self.searcher_floor
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.searcher_floor - tol <= v && v <= self.hider_ceiling + tol
    }
}

/// Value and mixed strategies of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution<H = HiderPlacement, S = SearchPlan> {
    pub value: f64,
    pub hider: MixedStrategy<H>,
    pub searcher: MixedStrategy<S>,
    pub method: Method,
    /// Present only for approximate solutions; exact solutions certify
    /// `value` from both sides.
    pub guarantee: Option<Guarantee>,
}

impl<H, S> GameSolution<H, S> {
    pub fn exact(
        value: f64,
        hider: MixedStrategy<H>,
        searcher: MixedStrategy<S>,
        method: Method,
    ) -> Self {
        GameSolution {
            value,
            hider,
            searcher,
            method,
            guarantee: None,
        }
    }

    /// `(searcher floor, hider ceiling)`; both equal `value` when exact.
    pub fn bounds(&self) -> (f64, f64) {
        match self.guarantee {
            Some(g) => (g.searcher_floor, g.hider_ceiling),
            None => (self.value, self.value),
        }
    }
}

impl<H> GameSolution<H, SearchPlan> {
    /// The Searcher mix as expanding searches, when every plan is a fixed order.
    pub fn searcher_orders(&self) -> Option<MixedStrategy<ExpandingSearch>> {
        let support = self
            .searcher
            .iter()
            .map(|(plan, q)| match plan {
                SearchPlan::Order(s) => Some((s.clone(), q)),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        MixedStrategy::new(support).ok()
    }
}
