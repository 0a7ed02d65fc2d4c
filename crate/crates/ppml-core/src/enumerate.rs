//! Deterministic enumeration and seeded random generation of structures,
//! pp-trees, chains and formulas. The exhaustive enumerators back the
//! brute-force oracles; the seeded generators drive randomized suites
//! reproducibly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::pptree::{validate_pp_tree, PpTree};
use crate::signature::{Signature, EDGE};
use crate::structure::PointedStructure;
use crate::syntax::PpmlFormula;

/// Tiny deterministic generator (SplitMix64). Sequences are stable across
/// platforms and releases, so seeded tests stay reproducible.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniformly in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % den as u64) < num as u64
    }
}

/// All rooted tree shapes with up to `max_nodes` nodes, branching bounded by
/// `max_branching` and height bounded by `max_height`. A shape is the parent
/// array of nodes `1..n`; node 0 is the root. Shapes are not deduplicated up
/// to isomorphism.
pub fn tree_shapes(
    max_nodes: usize,
    max_branching: usize,
    max_height: usize,
) -> Vec<Vec<usize>> {
    let mut shapes = Vec::new();
    let mut parents: Vec<usize> = Vec::new();
    fn grow(
        parents: &mut Vec<usize>,
        shapes: &mut Vec<Vec<usize>>,
        max_nodes: usize,
        max_branching: usize,
        max_height: usize,
    ) {
        shapes.push(parents.clone());
        if parents.len() + 1 == max_nodes {
            return;
        }
        let next = parents.len() + 1;
        for attach in 0..next {
            let degree = parents.iter().filter(|&&p| p == attach).count();
            if degree >= max_branching {
                continue;
            }
            let mut height = 1;
            let mut cur = attach;
            while cur != 0 {
                cur = if cur == 0 { 0 } else { parents[cur - 1] };
                height += 1;
            }
            if height > max_height {
                continue;
            }
            parents.push(attach);
            grow(parents, shapes, max_nodes, max_branching, max_height);
            parents.pop();
        }
    }
    if max_nodes > 0 {
        grow(
            &mut parents,
            &mut shapes,
            max_nodes,
            max_branching,
            max_height,
        );
    }
    shapes
}

fn heights_of(parents: &[usize]) -> Vec<usize> {
    let mut heights = alloc::vec![0usize; parents.len() + 1];
    for (i, &p) in parents.iter().enumerate() {
        heights[i + 1] = heights[p] + 1;
    }
    heights
}

fn shape_to_tree(
    sig: &Signature,
    parents: &[usize],
    chosen: &BTreeMap<&str, Vec<usize>>,
) -> PpTree {
    let n = parents.len() + 1;
    let mut root_chain: Vec<Vec<usize>> = alloc::vec![alloc::vec![0]];
    for v in 1..n {
        let mut chain = root_chain[parents[v - 1]].clone();
        chain.push(v);
        root_chain.push(chain);
    }
    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    interpretations.insert(
        String::from(EDGE),
        parents
            .iter()
            .enumerate()
            .map(|(i, &p)| alloc::vec![p, i + 1])
            .collect(),
    );
    for (symbol, arity) in sig.sigma_bar() {
        let marks = chosen.get(symbol).map(Vec::as_slice).unwrap_or(&[]);
        let tuples = marks
            .iter()
            .map(|&v| {
                let chain = &root_chain[v];
                chain[chain.len() - arity..].to_vec()
            })
            .collect();
        interpretations.insert(String::from(symbol), tuples);
    }
    let structure = PointedStructure::new(sig.clone(), n, 0, interpretations)
        .expect("enumerated tree is a valid structure");
    validate_pp_tree(&structure).expect("enumerated tree is a pp-tree")
}

/// Visits every pp-tree over `sig` within the given shape bounds: every tree
/// shape crossed with every placement of relation tuples (an arity-`r`
/// symbol may end at any node of height at least `r - 1`). The callback
/// returns `false` to stop; the function returns `false` iff stopped.
pub fn for_each_pp_tree<F>(
    sig: &Signature,
    max_nodes: usize,
    max_branching: usize,
    max_height: usize,
    visit: &mut F,
) -> bool
where
    F: FnMut(&PpTree) -> bool,
{
    for shape in tree_shapes(max_nodes, max_branching, max_height) {
        let heights = heights_of(&shape);
        let symbols: Vec<(&str, usize)> = sig.sigma_bar().collect();
        let eligible: Vec<Vec<usize>> = symbols
            .iter()
            .map(|&(_, arity)| {
                (0..heights.len())
                    .filter(|&v| heights[v] + 1 >= arity)
                    .collect()
            })
            .collect();
        let mut masks = alloc::vec![0u128; symbols.len()];
        loop {
            let chosen: BTreeMap<&str, Vec<usize>> = symbols
                .iter()
                .enumerate()
                .map(|(i, &(name, _))| {
                    let marks = eligible[i]
                        .iter()
                        .enumerate()
                        .filter(|&(bit, _)| masks[i] & (1 << bit) != 0)
                        .map(|(_, &v)| v)
                        .collect();
                    (name, marks)
                })
                .collect();
            let tree = shape_to_tree(sig, &shape, &chosen);
            if !visit(&tree) {
                return false;
            }
            if !advance_odometer(&mut masks, |i| eligible[i].len()) {
                break;
            }
        }
    }
    true
}

/// Advances a vector of per-slot subset masks, slot `i` ranging over
/// `2^(width of i)` values; false once all combinations are exhausted.
fn advance_odometer(masks: &mut [u128], width: impl Fn(usize) -> usize) -> bool {
    for (i, mask) in masks.iter_mut().enumerate() {
        let bits = width(i);
        assert!(bits < 128, "subset space too large to enumerate");
        *mask += 1;
        if *mask < (1u128 << bits) {
            return true;
        }
        *mask = 0;
    }
    false
}

/// Visits every structure over `sig` with exactly `size` elements: every
/// combination of interpretations and every basepoint. Feasible only for
/// very small sizes. The callback returns `false` to stop.
pub fn for_each_structure<F>(sig: &Signature, size: usize, visit: &mut F) -> bool
where
    F: FnMut(&PointedStructure) -> bool,
{
    let symbols: Vec<(&str, usize)> = sig.symbols().collect();
    let spaces: Vec<Vec<Vec<usize>>> = symbols
        .iter()
        .map(|&(_, arity)| all_tuples(size, arity))
        .collect();
    let mut masks = alloc::vec![0u128; symbols.len()];
    loop {
        let interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = symbols
            .iter()
            .enumerate()
            .map(|(i, &(name, _))| {
                let tuples = spaces[i]
                    .iter()
                    .enumerate()
                    .filter(|&(bit, _)| masks[i] & (1 << bit) != 0)
                    .map(|(_, t)| t.clone())
                    .collect();
                (String::from(name), tuples)
            })
            .collect();
        for basepoint in 0..size {
            let s = PointedStructure::new(
                sig.clone(),
                size,
                basepoint,
                interpretations.clone(),
            )
            .expect("enumerated structure is valid");
            if !visit(&s) {
                return false;
            }
        }
        if !advance_odometer(&mut masks, |i| spaces[i].len()) {
            break;
        }
    }
    true
}

fn all_tuples(size: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * size);
        for t in &out {
            for v in 0..size {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// A random structure over `sig` with `1..=max_size` elements: each
/// potential tuple is kept with fixed density, the basepoint is uniform.
pub fn random_structure(
    sig: &Signature,
    max_size: usize,
    rng: &mut SplitMix64,
) -> PointedStructure {
    let size = 1 + rng.below(max_size);
    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    for (symbol, arity) in sig.symbols() {
        let mut tuples = BTreeSet::new();
        for t in all_tuples(size, arity) {
            let keep = if symbol == EDGE {
                rng.chance(2, 5)
            } else {
                rng.chance(3, 10)
            };
            if keep {
                tuples.insert(t);
            }
        }
        interpretations.insert(String::from(symbol), tuples);
    }
    PointedStructure::new(sig.clone(), size, rng.below(size), interpretations)
        .expect("random structure is valid")
}

/// All `E`-chains of `a` starting at `start`, of length `1..=max_len`.
pub fn chains_from(a: &PointedStructure, start: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = alloc::vec![alloc::vec![start]];
    while let Some(chain) = stack.pop() {
        if chain.len() < max_len {
            for &next in a.successors(*chain.last().unwrap()) {
                let mut e = chain.clone();
                e.push(next);
                stack.push(e);
            }
        }
        out.push(chain);
    }
    out
}

/// All `E`-chains of `a` of length `1..=max_len` from every start node.
pub fn all_chains(a: &PointedStructure, max_len: usize) -> Vec<Vec<usize>> {
    (0..a.universe_size())
        .flat_map(|v| chains_from(a, v, max_len))
        .collect()
}

/// A random formula over `sig` of modal depth at most `max_depth`.
pub fn random_formula(
    sig: &Signature,
    max_depth: usize,
    allow_graded: bool,
    rng: &mut SplitMix64,
) -> PpmlFormula {
    let atoms: Vec<&str> = sig.sigma_bar().map(|(n, _)| n).collect();
    fn gen(
        atoms: &[&str],
        depth: usize,
        budget: usize,
        allow_graded: bool,
        rng: &mut SplitMix64,
    ) -> PpmlFormula {
        let leaf_only = budget == 0;
        let choice = if leaf_only { rng.below(3) } else { rng.below(10) };
        match choice {
            0 => PpmlFormula::Top,
            1 => PpmlFormula::Bot,
            2 => {
                if atoms.is_empty() {
                    PpmlFormula::Top
                } else {
                    PpmlFormula::atom(atoms[rng.below(atoms.len())])
                }
            }
            3 | 4 => PpmlFormula::not(gen(atoms, depth, budget - 1, allow_graded, rng)),
            5 | 6 => PpmlFormula::and(
                gen(atoms, depth, budget - 1, allow_graded, rng),
                gen(atoms, depth, budget - 1, allow_graded, rng),
            ),
            _ => {
                if depth == 0 {
                    gen(atoms, depth, budget - 1, allow_graded, rng)
                } else if allow_graded && rng.chance(1, 4) {
                    PpmlFormula::graded(
                        1 + rng.below(3) as u32,
                        gen(atoms, depth - 1, budget - 1, allow_graded, rng),
                    )
                } else {
                    PpmlFormula::diamond(gen(atoms, depth - 1, budget - 1, allow_graded, rng))
                }
            }
        }
    }
    gen(&atoms, max_depth, max_depth + 3, allow_graded, rng)
}

/// A random negation-free formula that is well nested by construction: an
/// atom only appears under at least `arity - 1` diamonds.
pub fn random_well_nested_positive(
    sig: &Signature,
    max_depth: usize,
    rng: &mut SplitMix64,
) -> PpmlFormula {
    let atoms: Vec<(&str, usize)> = sig.sigma_bar().collect();
    fn gen(
        atoms: &[(&str, usize)],
        guards: usize,
        depth: usize,
        budget: usize,
        rng: &mut SplitMix64,
    ) -> PpmlFormula {
        let evaluable: Vec<&str> = atoms
            .iter()
            .filter(|&&(_, arity)| arity <= guards + 1)
            .map(|&(name, _)| name)
            .collect();
        let choice = if budget == 0 { rng.below(2) } else { rng.below(8) };
        match choice {
            0 => PpmlFormula::Top,
            1 | 2 => {
                if evaluable.is_empty() {
                    PpmlFormula::Top
                } else {
                    PpmlFormula::atom(evaluable[rng.below(evaluable.len())])
                }
            }
            3 | 4 => PpmlFormula::and(
                gen(atoms, guards, depth, budget - 1, rng),
                gen(atoms, guards, depth, budget - 1, rng),
            ),
            _ => {
                if depth == 0 {
                    gen(atoms, guards, depth, budget - 1, rng)
                } else {
                    PpmlFormula::diamond(gen(atoms, guards + 1, depth - 1, budget - 1, rng))
                }
            }
        }
    }
    gen(&atoms, 0, max_depth, max_depth + 3, rng)
}

/// All formulas over `sig` with at most `max_connectives` connectives and
/// modal depth at most `max_depth`, lightly canonicalised: no double
/// negation, conjunctions ordered with the smaller operand first.
pub fn enumerate_formulas(
    sig: &Signature,
    max_connectives: usize,
    max_depth: usize,
    allow_graded: bool,
) -> Vec<PpmlFormula> {
    let mut by_cost: Vec<Vec<PpmlFormula>> = Vec::with_capacity(max_connectives + 1);
    let mut leaves = alloc::vec![PpmlFormula::Top, PpmlFormula::Bot];
    leaves.extend(sig.sigma_bar().map(|(n, _)| PpmlFormula::atom(n)));
    by_cost.push(leaves);
    for cost in 1..=max_connectives {
        let mut level = Vec::new();
        for f in &by_cost[cost - 1] {
            if !matches!(f, PpmlFormula::Not(_)) {
                level.push(PpmlFormula::not(f.clone()));
            }
            if crate::syntax::modal_depth(f) < max_depth {
                level.push(PpmlFormula::diamond(f.clone()));
                if allow_graded {
                    level.push(PpmlFormula::graded(2, f.clone()));
                }
            }
        }
        for left_cost in 0..cost {
            let right_cost = cost - 1 - left_cost;
            for l in &by_cost[left_cost] {
                for r in &by_cost[right_cost] {
                    if l < r {
                        level.push(PpmlFormula::and(l.clone(), r.clone()));
                    }
                }
            }
        }
        by_cost.push(level);
    }
    let mut seen = BTreeSet::new();
    by_cost
        .into_iter()
        .flatten()
        .filter(|f| seen.insert(f.clone()))
        .collect()
}
