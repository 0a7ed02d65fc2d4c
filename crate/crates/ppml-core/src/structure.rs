//! Pointed relational structures, homomorphisms and products.
//!
//! Elements are dense indices `0..universe_size`. Interpretations are sorted
//! tuple sets, which keeps iteration deterministic and membership cheap.
//! Every value is immutable after construction.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::signature::Signature;

/// The suffix of `s` of length `k` (all of `s` when `k >= s.len()`).
pub fn last_k(s: &[usize], k: usize) -> &[usize] {
    &s[s.len().saturating_sub(k)..]
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("empty universe")]
    EmptyUniverse,
    #[error("basepoint {basepoint} out of range for universe of size {universe}")]
    BasepointOutOfRange { basepoint: usize, universe: usize },
    #[error("interpretation given for `{0}`, which is not in the signature")]
    UnknownSymbol(String),
    #[error("tuple of length {got} in interpretation of `{symbol}` (arity {expected})")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("element {index} in a `{symbol}` tuple is out of range")]
    ElementOutOfRange { symbol: String, index: usize },
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("relabelling is not a permutation of the universe")]
    InvalidRelabelling,
}

/// A finite relational structure with a distinguished basepoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PointedStructure {
    signature: Signature,
    universe_size: usize,
    basepoint: usize,
    interpretations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    successors: Vec<Vec<usize>>,
}

impl PointedStructure {
    pub fn new(
        signature: Signature,
        universe_size: usize,
        basepoint: usize,
        interpretations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    ) -> Result<Self, StructureError> {
        if universe_size == 0 {
            return Err(StructureError::EmptyUniverse);
        }
        if basepoint >= universe_size {
            return Err(StructureError::BasepointOutOfRange {
                basepoint,
                universe: universe_size,
            });
        }
        let mut full: BTreeMap<String, BTreeSet<Vec<usize>>> = signature
            .symbols()
            .map(|(n, _)| (String::from(n), BTreeSet::new()))
            .collect();
        for (symbol, tuples) in interpretations {
            let arity = signature
                .arity(&symbol)
                .ok_or_else(|| StructureError::UnknownSymbol(symbol.clone()))?;
            for tuple in &tuples {
                if tuple.len() != arity {
                    return Err(StructureError::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: arity,
                        got: tuple.len(),
                    });
                }
                if let Some(&bad) = tuple.iter().find(|&&e| e >= universe_size) {
                    return Err(StructureError::ElementOutOfRange {
                        symbol: symbol.clone(),
                        index: bad,
                    });
                }
            }
            full.insert(symbol, tuples);
        }
        let mut successors = alloc::vec![Vec::new(); universe_size];
        for pair in &full[crate::signature::EDGE] {
            successors[pair[0]].push(pair[1]);
        }
        Ok(PointedStructure {
            signature,
            universe_size,
            basepoint,
            interpretations: full,
            successors,
        })
    }

    /// The one-element structure in which every relation holds everywhere.
    pub fn terminal(signature: Signature) -> Self {
        let interpretations = signature
            .symbols()
            .map(|(n, a)| {
                (
                    String::from(n),
                    BTreeSet::from_iter([alloc::vec![0usize; a]]),
                )
            })
            .collect();
        PointedStructure::new(signature, 1, 0, interpretations)
            .expect("terminal structure is valid")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn interpretation(&self, symbol: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.interpretations.get(symbol)
    }

    pub fn holds(&self, symbol: &str, tuple: &[usize]) -> bool {
        self.interpretations
            .get(symbol)
            .is_some_and(|set| set.contains(tuple))
    }

    /// `E`-successors of `v`, in index order.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }

    /// Truth of an atom on the valuation `s`: the symbol's arity must fit in
    /// `s` and the suffix of that length must be in the interpretation.
    /// `None` when the symbol is not in the signature.
    pub fn atom_true(&self, symbol: &str, s: &[usize]) -> Option<bool> {
        let arity = self.signature.arity(symbol)?;
        Some(arity <= s.len() && self.holds(symbol, last_k(s, arity)))
    }

    /// Whether consecutive entries of `s` are related by `E` (singletons are
    /// chains; the empty sequence is not).
    pub fn is_chain(&self, s: &[usize]) -> bool {
        !s.is_empty()
            && s.iter().all(|&v| v < self.universe_size)
            && s.windows(2).all(|w| self.successors[w[0]].contains(&w[1]))
    }

    /// Elements reachable from the basepoint along `E`, basepoint included.
    pub fn reachable_from_basepoint(&self) -> Vec<bool> {
        let mut seen = alloc::vec![false; self.universe_size];
        let mut queue = VecDeque::from_iter([self.basepoint]);
        seen[self.basepoint] = true;
        while let Some(v) = queue.pop_front() {
            for &w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Categorical product: pairs of elements, componentwise tuples,
    /// basepoint pair. The pair `(i, j)` is encoded as `i * |other| + j`.
    pub fn product(&self, other: &PointedStructure) -> Result<PointedStructure, StructureError> {
        if self.signature != other.signature {
            return Err(StructureError::SignatureMismatch);
        }
        let m = other.universe_size;
        let pair = |i: usize, j: usize| i * m + j;
        let mut interpretations = BTreeMap::new();
        for (symbol, _) in self.signature.symbols() {
            let mut tuples = BTreeSet::new();
            for tx in &self.interpretations[symbol] {
                for ty in &other.interpretations[symbol] {
                    tuples.insert(
                        tx.iter()
                            .zip(ty)
                            .map(|(&i, &j)| pair(i, j))
                            .collect::<Vec<_>>(),
                    );
                }
            }
            interpretations.insert(String::from(symbol), tuples);
        }
        PointedStructure::new(
            self.signature.clone(),
            self.universe_size * m,
            pair(self.basepoint, other.basepoint),
            interpretations,
        )
    }

    /// The same structure with a different basepoint.
    pub fn repointed(&self, basepoint: usize) -> Result<PointedStructure, StructureError> {
        if basepoint >= self.universe_size {
            return Err(StructureError::BasepointOutOfRange {
                basepoint,
                universe: self.universe_size,
            });
        }
        let mut s = self.clone();
        s.basepoint = basepoint;
        Ok(s)
    }

    /// The same structure with element `v` renamed to `perm[v]`.
    pub fn relabelled(&self, perm: &[usize]) -> Result<PointedStructure, StructureError> {
        let n = self.universe_size;
        let mut seen = alloc::vec![false; n];
        if perm.len() != n || !perm.iter().all(|&v| v < n && !core::mem::replace(&mut seen[v], true))
        {
            return Err(StructureError::InvalidRelabelling);
        }
        let interpretations = self
            .interpretations
            .iter()
            .map(|(symbol, tuples)| {
                (
                    symbol.clone(),
                    tuples
                        .iter()
                        .map(|t| t.iter().map(|&v| perm[v]).collect::<Vec<_>>())
                        .collect(),
                )
            })
            .collect();
        PointedStructure::new(
            self.signature.clone(),
            n,
            perm[self.basepoint],
            interpretations,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomomorphismError {
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("map has length {got}, domain has {expected} elements")]
    MapLength { expected: usize, got: usize },
    #[error("image {image} of element {element} is out of range")]
    ImageOutOfRange { element: usize, image: usize },
    #[error("basepoint not preserved")]
    BasepointNotPreserved,
    #[error("tuple {tuple:?} of `{symbol}` is not preserved")]
    TupleNotPreserved { symbol: String, tuple: Vec<usize> },
}

/// A total basepoint-preserving homomorphism between two structures over a
/// common signature. Construction re-checks every preservation condition;
/// the derived predicates (`is_strong`, ...) are recomputed from the map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    dom: PointedStructure,
    cod: PointedStructure,
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(
        dom: PointedStructure,
        cod: PointedStructure,
        map: Vec<usize>,
    ) -> Result<Self, HomomorphismError> {
        if dom.signature != cod.signature {
            return Err(HomomorphismError::SignatureMismatch);
        }
        if map.len() != dom.universe_size {
            return Err(HomomorphismError::MapLength {
                expected: dom.universe_size,
                got: map.len(),
            });
        }
        if let Some((element, &image)) = map.iter().enumerate().find(|(_, &i)| i >= cod.universe_size)
        {
            return Err(HomomorphismError::ImageOutOfRange { element, image });
        }
        if map[dom.basepoint] != cod.basepoint {
            return Err(HomomorphismError::BasepointNotPreserved);
        }
        for (symbol, tuples) in &dom.interpretations {
            for tuple in tuples {
                let image: Vec<usize> = tuple.iter().map(|&v| map[v]).collect();
                if !cod.holds(symbol, &image) {
                    return Err(HomomorphismError::TupleNotPreserved {
                        symbol: symbol.clone(),
                        tuple: tuple.clone(),
                    });
                }
            }
        }
        Ok(Homomorphism { dom, cod, map })
    }

    pub fn identity(a: &PointedStructure) -> Self {
        Homomorphism::new(a.clone(), a.clone(), (0..a.universe_size).collect())
            .expect("identity is a homomorphism")
    }

    pub fn dom(&self) -> &PointedStructure {
        &self.dom
    }

    pub fn cod(&self) -> &PointedStructure {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = alloc::vec![false; self.cod.universe_size];
        self.map
            .iter()
            .all(|&v| !core::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = alloc::vec![false; self.cod.universe_size];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// Strong: relations are reflected as well as preserved.
    pub fn is_strong(&self) -> bool {
        for (symbol, arity) in self.dom.signature.symbols() {
            let mut tuple = alloc::vec![0usize; arity];
            loop {
                let image: Vec<usize> = tuple.iter().map(|&v| self.map[v]).collect();
                if self.cod.holds(symbol, &image) && !self.dom.holds(symbol, &tuple) {
                    return false;
                }
                // advance the tuple odometer
                let mut i = arity;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    tuple[i] += 1;
                    if tuple[i] < self.dom.universe_size {
                        break;
                    }
                    tuple[i] = 0;
                }
                if tuple.iter().all(|&v| v == 0) {
                    break;
                }
            }
        }
        true
    }

    /// Relational embedding: injective and strong.
    pub fn is_embedding(&self) -> bool {
        self.is_injective() && self.is_strong()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective() && self.is_strong()
    }
}

/// Assignment order for homomorphism search: breadth-first from the
/// basepoint when the domain is a pp-tree (the dominant shape, where early
/// edge checks prune hardest), plain index order otherwise.
fn search_order(dom: &PointedStructure) -> Vec<usize> {
    if crate::pptree::validate_pp_tree(dom).is_err() {
        return (0..dom.universe_size).collect();
    }
    let mut order = Vec::with_capacity(dom.universe_size);
    let mut queue = VecDeque::from_iter([dom.basepoint]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        queue.extend(dom.successors(v));
    }
    order
}

struct HomSearch<'a> {
    dom: &'a PointedStructure,
    cod: &'a PointedStructure,
    order: Vec<usize>,
    /// Tuples to check once the element at a given order position is mapped:
    /// all of whose entries are assigned by then, none earlier.
    checks: Vec<Vec<(&'a str, &'a Vec<usize>)>>,
    assignment: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    fn new(dom: &'a PointedStructure, cod: &'a PointedStructure) -> Self {
        let order = search_order(dom);
        let mut rank = alloc::vec![0usize; dom.universe_size];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut checks: Vec<Vec<(&str, &Vec<usize>)>> = alloc::vec![Vec::new(); order.len()];
        for (symbol, tuples) in &dom.interpretations {
            for tuple in tuples {
                let latest = tuple.iter().map(|&v| rank[v]).max().expect("arity >= 1");
                checks[latest].push((symbol, tuple));
            }
        }
        HomSearch {
            dom,
            cod,
            order,
            checks,
            assignment: alloc::vec![0usize; dom.universe_size],
        }
    }

    fn consistent(&self, pos: usize) -> bool {
        self.checks[pos].iter().all(|&(symbol, tuple)| {
            let image: Vec<usize> = tuple.iter().map(|&v| self.assignment[v]).collect();
            self.cod.holds(symbol, &image)
        })
    }

    /// Extends the partial assignment from order position `pos`; returns the
    /// number of completions, stopping early once `limit` is reached.
    fn run(&mut self, pos: usize, limit: u64) -> u64 {
        if pos == self.order.len() {
            return 1;
        }
        let v = self.order[pos];
        let candidates = if v == self.dom.basepoint {
            self.cod.basepoint..self.cod.basepoint + 1
        } else {
            0..self.cod.universe_size
        };
        let mut found = 0;
        for image in candidates {
            self.assignment[v] = image;
            if self.consistent(pos) {
                found += self.run(pos + 1, limit - found);
                if found >= limit {
                    return found;
                }
            }
        }
        found
    }
}

/// Searches for a basepoint-preserving homomorphism by backtracking.
/// `None` is definitive: no homomorphism exists.
pub fn find_homomorphism(
    dom: &PointedStructure,
    cod: &PointedStructure,
) -> Result<Option<Homomorphism>, StructureError> {
    if dom.signature != cod.signature {
        return Err(StructureError::SignatureMismatch);
    }
    let mut search = HomSearch::new(dom, cod);
    if search.run(0, 1) == 1 {
        let hom = Homomorphism::new(dom.clone(), cod.clone(), search.assignment)
            .expect("search result is a homomorphism");
        Ok(Some(hom))
    } else {
        Ok(None)
    }
}

/// Exact number of basepoint-preserving homomorphisms `dom -> cod`.
pub fn count_homomorphisms(
    dom: &PointedStructure,
    cod: &PointedStructure,
) -> Result<u64, StructureError> {
    if dom.signature != cod.signature {
        return Err(StructureError::SignatureMismatch);
    }
    let mut search = HomSearch::new(dom, cod);
    Ok(search.run(0, u64::MAX))
}
