//! Mutual encoding of finite pp-trees and well-nested positive formulas:
//! a tree describes the conjunctive query it satisfies, and a positive
//! formula unfolds into its canonical model through three tree surgeries
//! (tuple addition, pushout along the common subtree, leaf creation).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::pptree::{validate_pp_tree, PpTree};
use crate::signature::Signature;
use crate::structure::{last_k, PointedStructure};
use crate::syntax::{modal_debt, PpmlFormula, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CanonicalError {
    #[error("formula is not positive (negation, bottom or graded diamond present)")]
    NotPositive,
    #[error("formula is badly nested (debt {0})")]
    BadlyNested(usize),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// The positive formula a finite pp-tree satisfies canonically: at each node,
/// the conjunction of the symbols holding on the root chain (in name order)
/// and one diamond per child (in index order). Empty conjunctions are `Top`,
/// elided otherwise.
pub fn nu_formula(t: &PpTree) -> PpmlFormula {
    fn at(t: &PpTree, chain: &mut Vec<usize>) -> PpmlFormula {
        let mut conjuncts = Vec::new();
        for (symbol, arity) in t.structure().signature().sigma_bar() {
            if arity <= chain.len() && t.structure().holds(symbol, last_k(chain, arity)) {
                conjuncts.push(PpmlFormula::atom(symbol));
            }
        }
        let node = *chain.last().expect("chain non-empty");
        for &child in t.children(node) {
            chain.push(child);
            conjuncts.push(PpmlFormula::diamond(at(t, chain)));
            chain.pop();
        }
        PpmlFormula::conjoin(conjuncts)
    }
    at(t, &mut alloc::vec![t.root()])
}

/// A growing pp-tree: parent pointers plus relation tuples. Fresh nodes take
/// the next unused index, so merging renames only the right-hand extension.
#[derive(Debug, Clone)]
struct TreeBuilder {
    parent: Vec<Option<usize>>,
    tuples: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

impl TreeBuilder {
    fn singleton() -> Self {
        TreeBuilder {
            parent: alloc::vec![None],
            tuples: BTreeMap::new(),
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn root_chain(&self, v: usize) -> Vec<usize> {
        let mut chain = alloc::vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        chain
    }

    fn add_leaf(&mut self, below: usize) -> usize {
        self.parent.push(Some(below));
        self.parent.len() - 1
    }

    fn add_tuple(&mut self, symbol: &str, tuple: Vec<usize>) {
        self.tuples.entry(String::from(symbol)).or_default().insert(tuple);
    }

    /// Pushout along the common base: both sides extend the first `base`
    /// nodes; the right-hand extension is renamed past the left-hand one and
    /// interpretations are unioned.
    fn merge(mut self, base: usize, other: TreeBuilder) -> TreeBuilder {
        let offset = self.len() - base;
        let rename = |v: usize| if v < base { v } else { v + offset };
        for (&p, v) in other.parent.iter().zip(0..).skip(base) {
            debug_assert_eq!(rename(v), self.parent.len());
            self.parent.push(p.map(rename));
        }
        for (symbol, tuples) in other.tuples {
            let renamed = tuples
                .into_iter()
                .map(|t| t.into_iter().map(rename).collect::<Vec<_>>());
            self.tuples.entry(symbol).or_default().extend(renamed);
        }
        self
    }

    fn into_pp_tree(self, sig: &Signature) -> PpTree {
        let mut interpretations = self.tuples;
        let edges: BTreeSet<Vec<usize>> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| alloc::vec![p, v]))
            .collect();
        interpretations.insert(String::from(crate::signature::EDGE), edges);
        let structure = PointedStructure::new(sig.clone(), self.parent.len(), 0, interpretations)
            .expect("builder produces a valid structure");
        validate_pp_tree(&structure).expect("builder produces a pp-tree")
    }
}

fn build_model(
    f: &PpmlFormula,
    sig: &Signature,
    tree: TreeBuilder,
    leaf: usize,
) -> TreeBuilder {
    match f {
        PpmlFormula::Top => tree,
        PpmlFormula::Atom(name) => {
            let arity = sig.arity(name).expect("checked before building");
            let chain = tree.root_chain(leaf);
            debug_assert!(arity <= chain.len(), "debt bound guarantees room");
            let mut tree = tree;
            tree.add_tuple(name, last_k(&chain, arity).to_vec());
            tree
        }
        PpmlFormula::And(l, r) => {
            let base = tree.len();
            let left = build_model(l, sig, tree.clone(), leaf);
            let right = build_model(r, sig, tree, leaf);
            left.merge(base, right)
        }
        PpmlFormula::Diamond(g) => {
            let mut tree = tree;
            let fresh = tree.add_leaf(leaf);
            build_model(g, sig, tree, fresh)
        }
        PpmlFormula::Bot | PpmlFormula::Not(_) | PpmlFormula::GradedDiamond(..) => {
            unreachable!("positivity checked before building")
        }
    }
}

/// The canonical model of a well-nested positive formula: a finite pp-tree
/// whose height is the formula's modal depth, mapping into exactly the
/// structures that satisfy the formula.
pub fn canonical_model(f: &PpmlFormula, sig: &Signature) -> Result<PpTree, CanonicalError> {
    if !f.is_positive() {
        return Err(CanonicalError::NotPositive);
    }
    let debt = modal_debt(f, sig)?;
    if debt > 0 {
        return Err(CanonicalError::BadlyNested(debt));
    }
    let tree = build_model(f, sig, TreeBuilder::singleton(), 0);
    Ok(tree.into_pp_tree(sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_a, sig_eps, sig_es, single_point};
    use crate::semantics::eval_ppml;
    use crate::structure::find_homomorphism;
    use crate::syntax::PpmlFormula as F;
    use alloc::vec;

    #[test]
    fn nu_of_bare_point_is_top() {
        let t = validate_pp_tree(&single_point()).unwrap();
        assert_eq!(nu_formula(&t), F::Top);
    }

    #[test]
    fn nu_of_labelled_point_is_the_atom() {
        let mut interp = BTreeMap::new();
        interp.insert(String::from("p"), BTreeSet::from_iter([vec![0usize]]));
        let s = PointedStructure::new(sig_eps(), 1, 0, interp).unwrap();
        let t = validate_pp_tree(&s).unwrap();
        assert_eq!(nu_formula(&t), F::atom("p"));
    }

    fn s_edge_chain() -> PpTree {
        let mut interp = BTreeMap::new();
        interp.insert(String::from("E"), BTreeSet::from_iter([vec![0, 1]]));
        interp.insert(String::from("S"), BTreeSet::from_iter([vec![0, 1]]));
        validate_pp_tree(&PointedStructure::new(sig_es(), 2, 0, interp).unwrap()).unwrap()
    }

    #[test]
    fn nu_of_s_chain_is_diamond_s() {
        assert_eq!(nu_formula(&s_edge_chain()), F::diamond(F::atom("S")));
    }

    #[test]
    fn model_of_top_is_a_point() {
        let t = canonical_model(&F::Top, &sig_es()).unwrap();
        assert_eq!(t.node_count(), 1);
        assert!(t.structure().interpretation("S").unwrap().is_empty());
    }

    #[test]
    fn model_of_diamond_s_is_the_s_chain() {
        let t = canonical_model(&F::diamond(F::atom("S")), &sig_es()).unwrap();
        assert_eq!(t.structure(), s_edge_chain().structure());
    }

    #[test]
    fn model_of_conjunction_glues_along_base() {
        let f = F::and(F::atom("p"), F::diamond(F::atom("p")));
        let t = canonical_model(&f, &sig_eps()).unwrap();
        assert_eq!(t.node_count(), 2);
        let p = t.structure().interpretation("p").unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn badly_nested_and_negated_inputs_rejected() {
        assert_eq!(
            canonical_model(&F::atom("S"), &sig_es()),
            Err(CanonicalError::BadlyNested(1))
        );
        assert_eq!(
            canonical_model(&F::not(F::Top), &sig_es()),
            Err(CanonicalError::NotPositive)
        );
    }

    #[test]
    fn model_satisfies_its_formula() {
        let formulas = [
            F::diamond(F::atom("S")),
            F::and(F::diamond(F::atom("S")), F::diamond(F::Top)),
            F::diamond(F::and(F::atom("S"), F::diamond(F::atom("S")))),
        ];
        for f in formulas {
            let t = canonical_model(&f, &sig_es()).unwrap();
            assert_eq!(t.tree_height(), crate::syntax::modal_depth(&f));
            assert_eq!(
                eval_ppml(t.structure(), &[t.root()], &f),
                Ok(true),
                "model of {f} satisfies it"
            );
        }
    }

    #[test]
    fn hom_existence_matches_nu_truth_on_examples() {
        let a = example_a();
        let t = s_edge_chain();
        let nu = nu_formula(&t);
        assert!(find_homomorphism(t.structure(), &a).unwrap().is_some());
        assert_eq!(eval_ppml(&a, &[0], &nu), Ok(true));

        let point = single_point();
        assert!(find_homomorphism(t.structure(), &point).unwrap().is_none());
        assert_eq!(eval_ppml(&point, &[0], &nu), Ok(false));
    }
}
