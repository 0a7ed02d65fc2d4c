//! Round-bounded comparison games between pointed structures: the two-way
//! and one-way games, the graded game with successor bijections, strategy
//! extraction to and from homomorphisms out of unravellings, bounded
//! morphisms, and spans of bounded morphisms witnessing equivalence.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::comonad::{unravel, Unravelling};
use crate::pptree::{validate_pp_tree, PpTree};
use crate::structure::{last_k, Homomorphism, PointedStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GameMode {
    /// Spoiler may move on either side; relation harmony is two-way.
    Bisim,
    /// Spoiler moves on the left only; harmony is one-way.
    Sim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("invalid stems: {0}")]
    InvalidStems(String),
}

/// A Duplicator strategy: for each reachable winning position and each
/// Spoiler move on one side, the recorded answer on the other. Positions are
/// the two chains walked so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    mode: GameMode,
    rounds: usize,
    responses: BTreeMap<(Vec<usize>, Vec<usize>, Side, usize), usize>,
}

impl Strategy {
    pub fn new(mode: GameMode, rounds: usize) -> Self {
        Strategy {
            mode,
            rounds,
            responses: BTreeMap::new(),
        }
    }

    pub fn mode(&self) -> GameMode {
        self.mode
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn record(
        &mut self,
        left: Vec<usize>,
        right: Vec<usize>,
        side: Side,
        spoiler: usize,
        answer: usize,
    ) {
        self.responses.insert((left, right, side, spoiler), answer);
    }

    pub fn respond(
        &self,
        left: &[usize],
        right: &[usize],
        side: Side,
        spoiler: usize,
    ) -> Option<usize> {
        self.responses
            .get(&(left.to_vec(), right.to_vec(), side, spoiler))
            .copied()
    }

    /// All `(left, right, side, spoiler, answer)` records in position order.
    pub fn records(&self) -> impl Iterator<Item = (&[usize], &[usize], Side, usize, usize)> {
        self.responses
            .iter()
            .map(|((l, r, side, spoiler), &answer)| {
                (l.as_slice(), r.as_slice(), *side, *spoiler, answer)
            })
    }
}

struct Solver<'a> {
    a: &'a PointedStructure,
    b: &'a PointedStructure,
    window: usize,
    mode: GameMode,
    memo: BTreeMap<(Vec<usize>, Vec<usize>, usize), bool>,
}

impl<'a> Solver<'a> {
    fn new(a: &'a PointedStructure, b: &'a PointedStructure, mode: GameMode) -> Self {
        Solver {
            a,
            b,
            window: a.signature().max_arity(),
            mode,
            memo: BTreeMap::new(),
        }
    }

    fn harmony(&self, s: &[usize], t: &[usize]) -> bool {
        self.a.signature().sigma_bar().all(|(symbol, _)| {
            let on_a = self.a.atom_true(symbol, s).expect("symbol in signature");
            let on_b = self.b.atom_true(symbol, t).expect("symbol in signature");
            match self.mode {
                GameMode::Bisim => on_a == on_b,
                GameMode::Sim => !on_a || on_b,
            }
        })
    }

    fn extend(window: &[usize], next: usize, width: usize) -> Vec<usize> {
        let mut e = window.to_vec();
        e.push(next);
        let from = e.len().saturating_sub(width);
        e.split_off(from)
    }

    /// Duplicator wins from the position `(s, t)` with `j` rounds left.
    /// `s` and `t` are already truncated to the memory window: harmony only
    /// inspects suffixes, so positions with equal windows are equivalent.
    fn win(&mut self, s: &[usize], t: &[usize], j: usize) -> bool {
        let key = (s.to_vec(), t.to_vec(), j);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        // provisional insert is unnecessary: positions shrink in `j`
        let value = self.harmony(s, t) && (j == 0 || self.rounds_playable(s, t, j));
        self.memo.insert(key, value);
        value
    }

    fn rounds_playable(&mut self, s: &[usize], t: &[usize], j: usize) -> bool {
        let succ_a = self.a.successors(*s.last().unwrap()).to_vec();
        let succ_b = self.b.successors(*t.last().unwrap()).to_vec();
        // Spoiler on the left: every left move needs some winning answer.
        // An empty successor set means Spoiler cannot choose that side.
        let forth = succ_a.iter().all(|&x| {
            let s2 = Self::extend(s, x, self.window);
            succ_b.iter().any(|&y| {
                let t2 = Self::extend(t, y, self.window);
                self.win(&s2, &t2, j - 1)
            })
        });
        if !forth {
            return false;
        }
        if self.mode == GameMode::Sim {
            return true;
        }
        succ_b.iter().all(|&y| {
            let t2 = Self::extend(t, y, self.window);
            succ_a.iter().any(|&x| {
                let s2 = Self::extend(s, x, self.window);
                self.win(&s2, &t2, j - 1)
            })
        })
    }

    fn win_full(&mut self, s: &[usize], t: &[usize], j: usize) -> bool {
        let w = self.window;
        let (s, t) = (last_k(s, w).to_vec(), last_k(t, w).to_vec());
        self.win(&s, &t, j)
    }
}

/// Decides the k-round game and returns Duplicator's verdict without
/// extracting a strategy.
pub fn duplicator_wins(
    a: &PointedStructure,
    b: &PointedStructure,
    k: usize,
    mode: GameMode,
) -> Result<bool, GameError> {
    if a.signature() != b.signature() {
        return Err(GameError::SignatureMismatch);
    }
    let mut solver = Solver::new(a, b, mode);
    Ok(solver.win(&[a.basepoint()], &[b.basepoint()], k))
}

/// Decides the k-round game; when Duplicator wins, extracts a strategy from
/// the solved table, answering every Spoiler move with the smallest winning
/// response.
pub fn decide_bisim_game(
    a: &PointedStructure,
    b: &PointedStructure,
    k: usize,
    mode: GameMode,
) -> Result<(bool, Option<Strategy>), GameError> {
    if a.signature() != b.signature() {
        return Err(GameError::SignatureMismatch);
    }
    let mut solver = Solver::new(a, b, mode);
    if !solver.win(&[a.basepoint()], &[b.basepoint()], k) {
        return Ok((false, None));
    }
    let mut strategy = Strategy::new(mode, k);
    let mut stack = alloc::vec![(alloc::vec![a.basepoint()], alloc::vec![b.basepoint()], k)];
    let mut seen = BTreeSet::new();
    while let Some((s, t, j)) = stack.pop() {
        if j == 0 || !seen.insert((s.clone(), t.clone())) {
            continue;
        }
        let succ_a = a.successors(*s.last().unwrap()).to_vec();
        let succ_b = b.successors(*t.last().unwrap()).to_vec();
        for &x in &succ_a {
            let mut s2 = s.clone();
            s2.push(x);
            let y = succ_b
                .iter()
                .copied()
                .find(|&y| {
                    let mut t2 = t.clone();
                    t2.push(y);
                    solver.win_full(&s2, &t2, j - 1)
                })
                .expect("winning position has an answer for every Spoiler move");
            strategy.record(s.clone(), t.clone(), Side::Left, x, y);
            let mut t2 = t.clone();
            t2.push(y);
            stack.push((s2, t2, j - 1));
        }
        if mode == GameMode::Bisim {
            for &y in &succ_b {
                let mut t2 = t.clone();
                t2.push(y);
                let x = succ_a
                    .iter()
                    .copied()
                    .find(|&x| {
                        let mut s2 = s.clone();
                        s2.push(x);
                        solver.win_full(&s2, &t2, j - 1)
                    })
                    .expect("winning position has an answer for every Spoiler move");
                strategy.record(s.clone(), t.clone(), Side::Right, y, x);
                let mut s2 = s.clone();
                s2.push(x);
                stack.push((s2, t2, j - 1));
            }
        }
    }
    Ok((true, Some(strategy)))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("strategy was extracted from the {0:?} game, expected Sim")]
    WrongMode(GameMode),
    #[error("strategy has no response at position ({left:?}, {right:?}) to Spoiler move {spoiler}")]
    Incomplete {
        left: Vec<usize>,
        right: Vec<usize>,
        spoiler: usize,
    },
    #[error("replayed map is not a homomorphism: {0}")]
    NotWinning(crate::structure::HomomorphismError),
}

/// Replays a winning one-way strategy along every chain of the unravelling
/// of `a`, producing the homomorphism that sends a chain to the last element
/// of Duplicator's cumulative answer.
pub fn strategy_to_kleisli(
    strategy: &Strategy,
    a: &PointedStructure,
    b: &PointedStructure,
    k: usize,
) -> Result<Homomorphism, StrategyError> {
    if strategy.mode() != GameMode::Sim {
        return Err(StrategyError::WrongMode(strategy.mode()));
    }
    let u = unravel(a, k);
    let mut answers: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    answers.insert(
        alloc::vec![a.basepoint()],
        alloc::vec![b.basepoint()],
    );
    // breadth-first node order guarantees prefixes are answered first
    let mut map = Vec::with_capacity(u.node_count());
    for v in 0..u.node_count() {
        let chain = u.chain_of(v);
        let answer = if chain.len() == 1 {
            answers[chain].clone()
        } else {
            let prefix = &chain[..chain.len() - 1];
            let spoiler = *chain.last().unwrap();
            let so_far = answers[prefix].clone();
            let reply = strategy
                .respond(prefix, &so_far, Side::Left, spoiler)
                .ok_or_else(|| StrategyError::Incomplete {
                    left: prefix.to_vec(),
                    right: so_far.clone(),
                    spoiler,
                })?;
            let mut extended = so_far;
            extended.push(reply);
            answers.insert(chain.to_vec(), extended.clone());
            extended
        };
        map.push(*answer.last().unwrap());
    }
    Homomorphism::new(u.structure().clone(), b.clone(), map).map_err(StrategyError::NotWinning)
}

/// The inverse direction: a homomorphism out of the unravelling of `a`
/// induces a one-way strategy whose answers replay the homomorphism.
pub fn kleisli_to_strategy(h: &Homomorphism, u: &Unravelling) -> Strategy {
    let mut strategy = Strategy::new(GameMode::Sim, u.k());
    for v in 0..u.node_count() {
        let chain = u.chain_of(v);
        if chain.len() == 1 {
            continue;
        }
        let prefix = &chain[..chain.len() - 1];
        let answered: Vec<usize> = (1..=prefix.len())
            .map(|l| h.apply(u.node_of_chain(&prefix[..l]).expect("prefix is a node")))
            .collect();
        strategy.record(
            prefix.to_vec(),
            answered,
            Side::Left,
            *chain.last().unwrap(),
            h.apply(v),
        );
    }
    strategy
}

/// Kuhn's augmenting-path matching; true iff a perfect matching exists in
/// the bipartite graph `adj` (left size x right size, equal sizes required).
fn has_perfect_matching(adj: &[Vec<bool>], right_size: usize) -> bool {
    if adj.len() != right_size {
        return false;
    }
    let mut matched_to: Vec<Option<usize>> = alloc::vec![None; right_size];
    fn augment(
        left: usize,
        adj: &[Vec<bool>],
        visited: &mut [bool],
        matched_to: &mut [Option<usize>],
    ) -> bool {
        for y in 0..visited.len() {
            if adj[left][y] && !visited[y] {
                visited[y] = true;
                if matched_to[y].is_none()
                    || augment(matched_to[y].unwrap(), adj, visited, matched_to)
                {
                    matched_to[y] = Some(left);
                    return true;
                }
            }
        }
        false
    }
    for x in 0..adj.len() {
        let mut visited = alloc::vec![false; right_size];
        if !augment(x, adj, &mut visited, &mut matched_to) {
            return false;
        }
    }
    true
}

struct GradedSolver<'a> {
    a: &'a PointedStructure,
    b: &'a PointedStructure,
    window: usize,
    memo: BTreeMap<(Vec<usize>, Vec<usize>, usize), bool>,
}

impl<'a> GradedSolver<'a> {
    fn harmony(&self, s: &[usize], t: &[usize]) -> bool {
        self.a.signature().sigma_bar().all(|(symbol, _)| {
            self.a.atom_true(symbol, s) == self.b.atom_true(symbol, t)
        })
    }

    /// With rounds remaining, Duplicator must offer a bijection between the
    /// successor sets under which every Spoiler choice stays winning; that
    /// is a perfect matching on the winning-pairs graph.
    fn win(&mut self, s: &[usize], t: &[usize], j: usize) -> bool {
        let key = (s.to_vec(), t.to_vec(), j);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let value = self.harmony(s, t) && (j == 0 || self.matching_exists(s, t, j));
        self.memo.insert(key, value);
        value
    }

    fn matching_exists(&mut self, s: &[usize], t: &[usize], j: usize) -> bool {
        let succ_a = self.a.successors(*s.last().unwrap()).to_vec();
        let succ_b = self.b.successors(*t.last().unwrap()).to_vec();
        if succ_a.len() != succ_b.len() {
            return false;
        }
        let adj: Vec<Vec<bool>> = succ_a
            .iter()
            .map(|&x| {
                let s2 = Solver::extend(s, x, self.window);
                succ_b
                    .iter()
                    .map(|&y| {
                        let t2 = Solver::extend(t, y, self.window);
                        self.win(&s2, &t2, j - 1)
                    })
                    .collect()
            })
            .collect();
        has_perfect_matching(&adj, succ_b.len())
    }
}

/// The graded game: Duplicator must exhibit a bijection between successor
/// sets each round. Optional stems start the game mid-chain; they default to
/// the two basepoints. The successor-bijection requirement applies only
/// while rounds remain, so at `k = 0` only harmony is checked.
pub fn decide_graded_bisim(
    a: &PointedStructure,
    b: &PointedStructure,
    k: usize,
    stems: Option<(&[usize], &[usize])>,
) -> Result<bool, GameError> {
    if a.signature() != b.signature() {
        return Err(GameError::SignatureMismatch);
    }
    let (base_a, base_b) = (alloc::vec![a.basepoint()], alloc::vec![b.basepoint()]);
    let (s, t) = match stems {
        None => (base_a.as_slice(), base_b.as_slice()),
        Some((s, t)) => {
            if !a.is_chain(s) {
                return Err(GameError::InvalidStems(alloc::format!(
                    "{s:?} is not a chain of the left structure"
                )));
            }
            if !b.is_chain(t) {
                return Err(GameError::InvalidStems(alloc::format!(
                    "{t:?} is not a chain of the right structure"
                )));
            }
            if s.len() != t.len() {
                return Err(GameError::InvalidStems(
                    "stems must have equal length".into(),
                ));
            }
            (s, t)
        }
    };
    let mut solver = GradedSolver {
        a,
        b,
        window: a.signature().max_arity(),
        memo: BTreeMap::new(),
    };
    let w = solver.window;
    Ok(solver.win(last_k(s, w), last_k(t, w), k))
}

/// Bounded morphism check: relation harmony on every `E`-chain of the
/// domain plus the successor-lifting back condition. Harmony over all
/// chains reduces to chains of length up to the maximum arity, since atoms
/// only inspect suffixes of that length.
pub fn is_bounded_morphism(f: &Homomorphism) -> bool {
    let dom = f.dom();
    let cod = f.cod();
    let window = dom.signature().max_arity();

    // harmony on all chains of length <= window, from every start node
    let mut stack: Vec<Vec<usize>> = (0..dom.universe_size()).map(|v| alloc::vec![v]).collect();
    while let Some(chain) = stack.pop() {
        let image: Vec<usize> = chain.iter().map(|&v| f.apply(v)).collect();
        for (symbol, _) in dom.signature().sigma_bar() {
            if dom.atom_true(symbol, &chain) != cod.atom_true(symbol, &image) {
                return false;
            }
        }
        if chain.len() < window {
            for &next in dom.successors(*chain.last().unwrap()) {
                let mut e = chain.clone();
                e.push(next);
                stack.push(e);
            }
        }
    }

    // back condition
    for x in 0..dom.universe_size() {
        for &y in cod.successors(f.apply(x)) {
            if !dom.successors(x).iter().any(|&x2| f.apply(x2) == y) {
                return false;
            }
        }
    }
    true
}

/// When Duplicator wins the k-round two-way game, builds the tree of winning
/// position pairs closed under winning extensions, rooted at the pair of
/// basepoints, together with its two projections onto the unravellings.
/// Both legs are bounded morphisms. `None` when the game is lost.
pub fn build_bisim_span(
    a: &PointedStructure,
    b: &PointedStructure,
    k: usize,
) -> Result<Option<(PpTree, Homomorphism, Homomorphism)>, GameError> {
    if a.signature() != b.signature() {
        return Err(GameError::SignatureMismatch);
    }
    let mut solver = Solver::new(a, b, GameMode::Bisim);
    if !solver.win(&[a.basepoint()], &[b.basepoint()], k) {
        return Ok(None);
    }

    let mut chains: Vec<(Vec<usize>, Vec<usize>)> = alloc::vec![(
        alloc::vec![a.basepoint()],
        alloc::vec![b.basepoint()],
    )];
    let mut parent: Vec<Option<usize>> = alloc::vec![None];
    let mut head = 0;
    while head < chains.len() {
        let (s, t) = chains[head].clone();
        let depth = s.len() - 1;
        if depth < k {
            let j = k - depth;
            for &x in a.successors(*s.last().unwrap()) {
                for &y in b.successors(*t.last().unwrap()) {
                    let mut s2 = s.clone();
                    s2.push(x);
                    let mut t2 = t.clone();
                    t2.push(y);
                    if solver.win_full(&s2, &t2, j - 1) {
                        chains.push((s2, t2));
                        parent.push(Some(head));
                    }
                }
            }
        }
        head += 1;
    }

    let sig = a.signature().clone();
    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    for (symbol, arity) in sig.symbols() {
        let mut tuples = BTreeSet::new();
        for (v, (s, _)) in chains.iter().enumerate() {
            // harmony makes the left and right projections interchangeable
            if arity <= s.len() && a.holds(symbol, last_k(s, arity)) {
                let mut node_tuple = alloc::vec![v];
                let mut cur = v;
                for _ in 1..arity {
                    cur = parent[cur].expect("chain long enough");
                    node_tuple.push(cur);
                }
                node_tuple.reverse();
                tuples.insert(node_tuple);
            }
        }
        interpretations.insert(String::from(symbol), tuples);
    }
    let apex_structure = PointedStructure::new(sig, chains.len(), 0, interpretations)
        .expect("span apex is a valid structure");
    let apex = validate_pp_tree(&apex_structure).expect("span apex is a pp-tree");

    let ua = unravel(a, k);
    let ub = unravel(b, k);
    let left_map: Vec<usize> = chains
        .iter()
        .map(|(s, _)| ua.node_of_chain(s).expect("winning pair projects to a chain"))
        .collect();
    let right_map: Vec<usize> = chains
        .iter()
        .map(|(_, t)| ub.node_of_chain(t).expect("winning pair projects to a chain"))
        .collect();
    let left = Homomorphism::new(apex_structure.clone(), ua.structure().clone(), left_map)
        .expect("left projection is a homomorphism");
    let right = Homomorphism::new(apex_structure, ub.structure().clone(), right_map)
        .expect("right projection is a homomorphism");
    debug_assert!(is_bounded_morphism(&left));
    debug_assert!(is_bounded_morphism(&right));
    Ok(Some((apex, left, right)))
}
