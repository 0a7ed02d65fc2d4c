//! Validated path-predicate trees and their canonical codes.
//!
//! A path-predicate tree is a pointed structure whose `E`-reduct is a rooted
//! tree and whose other relations hold only along root chains: every tuple of
//! an arity-`r` symbol is the unique `E`-chain of length `r` ending at its
//! last component.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use crate::signature::EDGE;
use crate::structure::{last_k, PointedStructure};

/// Rejection report: the first violated tree condition with a witness.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PpTreeViolation {
    #[error("basepoint has an E-predecessor {predecessor}")]
    BasepointHasPredecessor { predecessor: usize },
    #[error("node {node} has more than one E-predecessor")]
    MultiplePredecessors { node: usize },
    #[error("node {node} is not reachable from the basepoint")]
    Unreachable { node: usize },
    #[error("tuple {tuple:?} of `{symbol}` is not the E-chain ending at its last component")]
    TupleNotChain { symbol: String, tuple: Vec<usize> },
}

/// A pointed structure that passed [`validate_pp_tree`], with parent and
/// height tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpTree {
    underlying: PointedStructure,
    parent: Vec<Option<usize>>,
    height_of: Vec<usize>,
    tree_height: usize,
}

/// Checks both pp-tree conditions and builds the index tables.
pub fn validate_pp_tree(s: &PointedStructure) -> Result<PpTree, PpTreeViolation> {
    let n = s.universe_size();
    let root = s.basepoint();
    let mut parent: Vec<Option<usize>> = alloc::vec![None; n];
    for pair in s.interpretation(EDGE).expect("E always interpreted") {
        let (from, to) = (pair[0], pair[1]);
        if to == root {
            return Err(PpTreeViolation::BasepointHasPredecessor { predecessor: from });
        }
        if parent[to].is_some() {
            return Err(PpTreeViolation::MultiplePredecessors { node: to });
        }
        parent[to] = Some(from);
    }
    let mut height_of = alloc::vec![usize::MAX; n];
    height_of[root] = 0;
    let mut queue = VecDeque::from_iter([root]);
    while let Some(v) = queue.pop_front() {
        for &w in s.successors(v) {
            if height_of[w] == usize::MAX {
                height_of[w] = height_of[v] + 1;
                queue.push_back(w);
            }
        }
    }
    if let Some(node) = (0..n).find(|&v| height_of[v] == usize::MAX) {
        return Err(PpTreeViolation::Unreachable { node });
    }
    for (symbol, _) in s.signature().sigma_bar() {
        for tuple in s.interpretation(symbol).expect("all symbols interpreted") {
            let chain = tuple
                .windows(2)
                .all(|w| parent[w[1]] == Some(w[0]));
            if !chain {
                return Err(PpTreeViolation::TupleNotChain {
                    symbol: String::from(symbol),
                    tuple: tuple.clone(),
                });
            }
        }
    }
    let tree_height = height_of.iter().copied().max().unwrap_or(0);
    Ok(PpTree {
        underlying: s.clone(),
        parent,
        height_of,
        tree_height,
    })
}

impl PpTree {
    pub fn structure(&self) -> &PointedStructure {
        &self.underlying
    }

    /// Consumes the tree, returning the underlying structure.
    pub fn into_structure(self) -> PointedStructure {
        self.underlying
    }

    pub fn root(&self) -> usize {
        self.underlying.basepoint()
    }

    pub fn node_count(&self) -> usize {
        self.underlying.universe_size()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn height(&self, v: usize) -> usize {
        self.height_of[v]
    }

    pub fn tree_height(&self) -> usize {
        self.tree_height
    }

    pub fn children(&self, v: usize) -> &[usize] {
        self.underlying.successors(v)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children(v).is_empty()
    }

    /// The unique `E`-chain from the root to `v`.
    pub fn root_chain(&self, v: usize) -> Vec<usize> {
        let mut chain = alloc::vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        chain
    }

    /// A canonical byte string: equal codes exactly for trees isomorphic as
    /// pointed structures. Each node is labelled with the symbols whose
    /// tuples end at it; a node's code is its label followed by the sorted
    /// codes of its children, all length-prefixed.
    pub fn canonical_code(&self) -> Vec<u8> {
        self.code_of(self.root(), &self.root_chain(self.root()))
    }

    fn code_of(&self, v: usize, chain: &[usize]) -> Vec<u8> {
        let mut labels: Vec<&str> = Vec::new();
        for (symbol, arity) in self.underlying.signature().sigma_bar() {
            if arity <= chain.len() && self.underlying.holds(symbol, last_k(chain, arity)) {
                labels.push(symbol);
            }
        }
        let mut child_codes: Vec<Vec<u8>> = self
            .children(v)
            .iter()
            .map(|&w| {
                let mut extended = chain.to_vec();
                extended.push(w);
                self.code_of(w, &extended)
            })
            .collect();
        child_codes.sort();

        let mut code = Vec::new();
        push_len(&mut code, labels.len());
        for label in labels {
            push_len(&mut code, label.len());
            code.extend_from_slice(label.as_bytes());
        }
        push_len(&mut code, child_codes.len());
        for child in child_codes {
            code.extend_from_slice(&child);
        }
        code
    }
}

fn push_len(buf: &mut Vec<u8>, len: usize) {
    buf.extend_from_slice(&(len as u32).to_le_bytes());
}
