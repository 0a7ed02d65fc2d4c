//! The k-step unravelling of a pointed structure and its comonad structure:
//! counit (last element), comultiplication (sequence of prefixes), functor
//! action on homomorphisms, unravelling at a chain, law checkers, and the
//! coarser sequence-based unravelling together with its inclusion.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::pptree::{validate_pp_tree, PpTree};
use crate::structure::{last_k, Homomorphism, PointedStructure};

/// Universe cap for [`ef_unravel`]; sequence spaces grow as `n^k`.
pub const EF_DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComonadError {
    #[error("stem {0:?} is not an E-chain of the structure")]
    NotAChain(Vec<usize>),
    #[error("sequence unravelling needs at least one round")]
    ZeroRounds,
    #[error("sequence universe would have {required} elements, cap is {cap}")]
    CapExceeded { required: usize, cap: usize },
}

/// The tree of `E`-chains of a structure, each node remembering the chain it
/// denotes. Node 0 is the root; children are ordered by successor index, and
/// nodes are listed in breadth-first order.
#[derive(Debug, Clone)]
pub struct Unravelling {
    tree: PpTree,
    node_chain: Vec<Vec<usize>>,
    index_of_chain: BTreeMap<Vec<usize>, usize>,
    source: PointedStructure,
    k: usize,
    stem: Vec<usize>,
}

impl Unravelling {
    pub fn tree(&self) -> &PpTree {
        &self.tree
    }

    /// The unravelled structure itself (the tree's underlying structure).
    pub fn structure(&self) -> &PointedStructure {
        self.tree.structure()
    }

    pub fn source(&self) -> &PointedStructure {
        &self.source
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The chain marked as the maximal stem (`[basepoint]` for a plain
    /// unravelling).
    pub fn stem(&self) -> &[usize] {
        &self.stem
    }

    pub fn node_count(&self) -> usize {
        self.node_chain.len()
    }

    pub fn chain_of(&self, node: usize) -> &[usize] {
        &self.node_chain[node]
    }

    pub fn node_of_chain(&self, chain: &[usize]) -> Option<usize> {
        self.index_of_chain.get(chain).copied()
    }

    /// The counit: each chain is sent to its last element. The codomain is
    /// the source repointed at the stem's first element, which is the source
    /// itself for plain unravellings.
    pub fn counit(&self) -> Homomorphism {
        let cod = self
            .source
            .repointed(self.node_chain[0][0])
            .expect("stem head is in range");
        let map = self
            .node_chain
            .iter()
            .map(|c| *c.last().expect("chains are non-empty"))
            .collect();
        Homomorphism::new(self.structure().clone(), cod, map)
            .expect("counit is a homomorphism")
    }
}

fn build_unravelling(
    source: &PointedStructure,
    nodes: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    k: usize,
    stem: Vec<usize>,
) -> Unravelling {
    let sig = source.signature().clone();
    let mut interpretations: BTreeMap<String, alloc::collections::BTreeSet<Vec<usize>>> =
        BTreeMap::new();
    for (symbol, arity) in sig.symbols() {
        let mut tuples = alloc::collections::BTreeSet::new();
        for (v, chain) in nodes.iter().enumerate() {
            if arity <= chain.len() && source.holds(symbol, last_k(chain, arity)) {
                // the unique chain of nodes of length `arity` ending at v
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
    let structure = PointedStructure::new(sig, nodes.len(), 0, interpretations)
        .expect("unravelling is a valid structure");
    let tree = validate_pp_tree(&structure).expect("unravelling is a pp-tree");
    let index_of_chain = nodes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    Unravelling {
        tree,
        node_chain: nodes,
        index_of_chain,
        source: source.clone(),
        k,
        stem,
    }
}

/// The unravelling of `(a, basepoint)` up to `k` steps: all `E`-chains from
/// the basepoint of length at most `k + 1`, in breadth-first order, with an
/// arity-`r` symbol holding on the `r` consecutive prefixes whose last
/// elements form a tuple of the source interpretation.
pub fn unravel(a: &PointedStructure, k: usize) -> Unravelling {
    let basepoint = a.basepoint();
    let mut nodes = alloc::vec![alloc::vec![basepoint]];
    let mut parent: Vec<Option<usize>> = alloc::vec![None];
    let mut head = 0;
    while head < nodes.len() {
        let chain = nodes[head].clone();
        if chain.len() <= k {
            for &next in a.successors(*chain.last().unwrap()) {
                let mut child = chain.clone();
                child.push(next);
                nodes.push(child);
                parent.push(Some(head));
            }
        }
        head += 1;
    }
    build_unravelling(a, nodes, parent, k, alloc::vec![basepoint])
}

/// The unravelling of `a` at the chain `s` with `k` further rounds: the
/// embedded substructure of the unravelling of `(a, s(1))` with budget
/// `k + |s| - 1` on the chains comparable with `s` in the prefix order.
/// `s` is the maximal stem of the result.
pub fn unravel_at_chain(
    a: &PointedStructure,
    s: &[usize],
    k: usize,
) -> Result<Unravelling, ComonadError> {
    if !a.is_chain(s) {
        return Err(ComonadError::NotAChain(s.to_vec()));
    }
    let budget = k + s.len() - 1; // chains of length up to budget + 1
    let mut nodes: Vec<Vec<usize>> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    // the proper prefixes of s come first, one per depth
    for len in 1..s.len() {
        nodes.push(s[..len].to_vec());
        parent.push(if len == 1 { None } else { Some(len - 2) });
    }
    nodes.push(s.to_vec());
    parent.push(if s.len() == 1 { None } else { Some(s.len() - 2) });
    // from s onwards, grow as in a plain unravelling
    let mut head = s.len() - 1;
    while head < nodes.len() {
        let chain = nodes[head].clone();
        if chain.len() <= budget {
            for &next in a.successors(*chain.last().unwrap()) {
                let mut child = chain.clone();
                child.push(next);
                nodes.push(child);
                parent.push(Some(head));
            }
        }
        head += 1;
    }
    Ok(build_unravelling(a, nodes, parent, k, s.to_vec()))
}

/// Functor action: a homomorphism between sources lifts to one between their
/// unravellings, acting elementwise on chains.
pub fn lift_morphism(f: &Homomorphism, k: usize) -> Homomorphism {
    let dom = unravel(f.dom(), k);
    let cod = unravel(f.cod(), k);
    let map = dom
        .node_chain
        .iter()
        .map(|chain| {
            let image: Vec<usize> = chain.iter().map(|&v| f.apply(v)).collect();
            cod.node_of_chain(&image)
                .expect("homomorphisms map chains to chains")
        })
        .collect();
    Homomorphism::new(dom.structure().clone(), cod.structure().clone(), map)
        .expect("elementwise image of a homomorphism is a homomorphism")
}

/// The comultiplication at `u`: the unravelling of the unravelling, together
/// with the map sending a chain to its sequence of prefixes.
pub fn comultiplication(u: &Unravelling) -> (Unravelling, Homomorphism) {
    let gg = unravel(u.structure(), u.k());
    let map = (0..u.node_count())
        .map(|v| {
            let mut prefixes = alloc::vec![v];
            let mut cur = v;
            while let Some(p) = u.tree.parent(cur) {
                prefixes.push(p);
                cur = p;
            }
            prefixes.reverse();
            gg.node_of_chain(&prefixes)
                .expect("prefix sequences are chains of the unravelling")
        })
        .collect();
    let delta = Homomorphism::new(u.structure().clone(), gg.structure().clone(), map)
        .expect("comultiplication is a homomorphism");
    (gg, delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    RightCounit,
    LeftCounit,
    Coassociativity,
    Idempotence,
}

impl core::fmt::Display for Law {
    fn fmt(&self, w: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Law::RightCounit => write!(w, "counit . comultiplication = id"),
            Law::LeftCounit => write!(w, "lifted counit . comultiplication = id"),
            Law::Coassociativity => write!(w, "comultiplication is coassociative"),
            Law::Idempotence => write!(w, "comultiplication . lifted counit = id"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFailure {
    pub law: Law,
    pub node: usize,
}

/// Outcome of [`check_comonad_laws`]; empty `failures` means all laws hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds the counit and comultiplication at `a` and verifies the comonad
/// laws plus idempotence, listing every failing node.
pub fn check_comonad_laws(a: &PointedStructure, k: usize) -> LawReport {
    let ga = unravel(a, k);
    let (gga, delta) = comultiplication(&ga);
    let counit_ga = gga.counit();
    let lifted_counit = lift_morphism(&ga.counit(), k);
    let (_ggga, delta_ga) = comultiplication(&gga);
    let lifted_delta = lift_morphism(&delta, k);

    let mut failures = Vec::new();
    for v in 0..ga.node_count() {
        if counit_ga.apply(delta.apply(v)) != v {
            failures.push(LawFailure {
                law: Law::RightCounit,
                node: v,
            });
        }
        if lifted_counit.apply(delta.apply(v)) != v {
            failures.push(LawFailure {
                law: Law::LeftCounit,
                node: v,
            });
        }
        if delta_ga.apply(delta.apply(v)) != lifted_delta.apply(delta.apply(v)) {
            failures.push(LawFailure {
                law: Law::Coassociativity,
                node: v,
            });
        }
    }
    for w in 0..gga.node_count() {
        if delta.apply(lifted_counit.apply(w)) != w {
            failures.push(LawFailure {
                law: Law::Idempotence,
                node: w,
            });
        }
    }
    LawReport { failures }
}

/// The sequence-based unravelling `(a, k)` with the default universe cap.
///
/// A pebbling variant would decorate the `i`-th element of every sequence
/// with the pebble index `(i + 1) mod N` for `N` the maximum arity, so that
/// chains reuse pebbles cyclically; only the plain sequence form is built
/// here, as a comparison target for the chain unravelling.
pub fn ef_unravel(
    a: &PointedStructure,
    k: usize,
) -> Result<(PointedStructure, Homomorphism), ComonadError> {
    ef_unravel_capped(a, k, EF_DEFAULT_CAP)
}

/// Universe: all non-empty sequences over the universe of length at most
/// `k`, pointed at `[basepoint]`. An arity-`r` symbol holds on `r` pairwise
/// prefix-comparable sequences whose last elements form a source tuple.
/// Returns the structure together with the inclusion of the chain
/// unravelling with budget `k - 1`, which is injective by construction.
pub fn ef_unravel_capped(
    a: &PointedStructure,
    k: usize,
    cap: usize,
) -> Result<(PointedStructure, Homomorphism), ComonadError> {
    if k == 0 {
        return Err(ComonadError::ZeroRounds);
    }
    let n = a.universe_size();
    let mut required = 0usize;
    let mut power = 1usize;
    for _ in 0..k {
        power = power.saturating_mul(n);
        required = required.saturating_add(power);
    }
    if required > cap {
        return Err(ComonadError::CapExceeded { required, cap });
    }

    // sequences ordered by length, then lexicographically
    let mut seqs: Vec<Vec<usize>> = Vec::with_capacity(required);
    let mut frontier: Vec<Vec<usize>> = (0..n).map(|v| alloc::vec![v]).collect();
    for _ in 0..k {
        seqs.extend(frontier.iter().cloned());
        let mut next = Vec::with_capacity(frontier.len() * n);
        for s in &frontier {
            for v in 0..n {
                let mut e = s.clone();
                e.push(v);
                next.push(e);
            }
        }
        frontier = next;
    }
    let index: BTreeMap<&[usize], usize> = seqs
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();

    let mut interpretations: BTreeMap<String, alloc::collections::BTreeSet<Vec<usize>>> =
        BTreeMap::new();
    for (symbol, arity) in a.signature().symbols() {
        let mut tuples = alloc::collections::BTreeSet::new();
        // a pairwise-comparable tuple lives among the prefixes of its
        // longest component, and must mention that component
        for longest in &seqs {
            let prefixes: Vec<&[usize]> =
                (1..=longest.len()).map(|l| &longest[..l]).collect();
            let mut pick = alloc::vec![0usize; arity];
            loop {
                if pick.iter().any(|&i| i == prefixes.len() - 1) {
                    let source_tuple: Vec<usize> = pick
                        .iter()
                        .map(|&i| *prefixes[i].last().unwrap())
                        .collect();
                    if a.holds(symbol, &source_tuple) {
                        tuples.insert(
                            pick.iter().map(|&i| index[prefixes[i]]).collect::<Vec<_>>(),
                        );
                    }
                }
                let mut pos = arity;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    pick[pos] += 1;
                    if pick[pos] < prefixes.len() {
                        break;
                    }
                    pick[pos] = 0;
                }
                if pick.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        interpretations.insert(String::from(symbol), tuples);
    }
    let basepoint = index[&[a.basepoint()][..]];
    let ef = PointedStructure::new(a.signature().clone(), seqs.len(), basepoint, interpretations)
        .expect("sequence unravelling is a valid structure");

    let chains = unravel(a, k - 1);
    let map: Vec<usize> = (0..chains.node_count())
        .map(|v| index[chains.chain_of(v)])
        .collect();
    let inclusion = Homomorphism::new(chains.structure().clone(), ef.clone(), map)
        .expect("chain unravelling includes into the sequence unravelling");
    debug_assert!(inclusion.is_injective());
    Ok((ef, inclusion))
}
