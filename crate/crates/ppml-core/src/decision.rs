//! End-user decision procedures: satisfiability over unimodal signatures by
//! a witness tableau, satisfiability for arbitrary arities by reduction to
//! the unimodal case, model checking (direct and by reduction), and
//! k-bisimilarity by game, reduction or unravelling isomorphism. A bounded
//! brute-force satisfiability oracle backs the tests.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::comonad::unravel;
use crate::games::{duplicator_wins, GameError, GameMode};
use crate::pptree::{validate_pp_tree, PpTree};
use crate::semantics::{eval_ppml, EvalError};
use crate::signature::{Signature, EDGE};
use crate::structure::PointedStructure;
use crate::syntax::{modal_depth, PpmlFormula};
use crate::translate::{k_inverse, k_translate, phi_k};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecisionError {
    #[error("atom `{0}` does not resolve in the signature")]
    UnknownAtom(String),
    #[error("`E` is not a legal atom")]
    EdgeAtom,
    #[error("atom `{0}` is not unary")]
    NonUnaryAtom(String),
    #[error("graded diamonds are not supported by this procedure")]
    GradedUnsupported,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Satisfiability verdict; `model` carries a satisfying pointed tree when
/// satisfiable, re-checked against the input before it is returned.
#[derive(Debug, Clone)]
pub struct SatResult {
    pub satisfiable: bool,
    pub model: Option<PpTree>,
}

impl SatResult {
    fn unsat() -> Self {
        SatResult {
            satisfiable: false,
            model: None,
        }
    }
}

fn check_atoms(
    f: &PpmlFormula,
    sig: &Signature,
    require_unary: bool,
    allow_graded: bool,
) -> Result<(), DecisionError> {
    if !allow_graded && f.has_graded() {
        return Err(DecisionError::GradedUnsupported);
    }
    for atom in f.atoms() {
        if atom == EDGE {
            return Err(DecisionError::EdgeAtom);
        }
        match sig.arity(atom) {
            None => return Err(DecisionError::UnknownAtom(String::from(atom))),
            Some(1) => {}
            Some(_) if !require_unary => {}
            Some(_) => return Err(DecisionError::NonUnaryAtom(String::from(atom))),
        }
    }
    Ok(())
}

/// A node of the tableau-produced witness tree.
struct Witness {
    props: BTreeSet<String>,
    children: Vec<Witness>,
}

/// Recursive witness tableau: saturate the boolean structure of the signed
/// obligations, then open one child per surviving diamond obligation,
/// carrying all box obligations down. Obligation sets are deduplicated by
/// construction; the branch depth is bounded by the modal depth.
fn tableau(mut obligations: BTreeSet<(PpmlFormula, bool)>) -> Option<Witness> {
    loop {
        let expandable = obligations.iter().find(|(f, _)| {
            matches!(
                f,
                PpmlFormula::Top | PpmlFormula::Bot | PpmlFormula::Not(_) | PpmlFormula::And(..)
            )
        });
        let Some((f, sign)) = expandable.cloned() else {
            break;
        };
        obligations.remove(&(f.clone(), sign));
        match (f, sign) {
            (PpmlFormula::Top, true) | (PpmlFormula::Bot, false) => {}
            (PpmlFormula::Top, false) | (PpmlFormula::Bot, true) => return None,
            (PpmlFormula::Not(g), s) => {
                obligations.insert((*g, !s));
            }
            (PpmlFormula::And(l, r), true) => {
                obligations.insert((*l, true));
                obligations.insert((*r, true));
            }
            (PpmlFormula::And(l, r), false) => {
                let mut left = obligations.clone();
                left.insert((*l, false));
                if let Some(witness) = tableau(left) {
                    return Some(witness);
                }
                obligations.insert((*r, false));
                return tableau(obligations);
            }
            _ => unreachable!("filtered by the expandable test"),
        }
    }

    let mut props = BTreeSet::new();
    for (f, sign) in &obligations {
        if let PpmlFormula::Atom(name) = f {
            if *sign {
                props.insert(name.clone());
            } else if obligations.contains(&(f.clone(), true)) {
                return None; // clash on the atom
            }
        }
    }

    let diamonds: BTreeSet<PpmlFormula> = obligations
        .iter()
        .filter_map(|(f, sign)| match (f, sign) {
            (PpmlFormula::Diamond(g), true) => Some((**g).clone()),
            _ => None,
        })
        .collect();
    let boxes: BTreeSet<(PpmlFormula, bool)> = obligations
        .iter()
        .filter_map(|(f, sign)| match (f, sign) {
            (PpmlFormula::Diamond(g), false) => Some(((**g).clone(), false)),
            _ => None,
        })
        .collect();
    let mut children = Vec::with_capacity(diamonds.len());
    for g in diamonds {
        let mut child = boxes.clone();
        child.insert((g, true));
        children.push(tableau(child)?);
    }
    Some(Witness { props, children })
}

fn witness_to_tree(witness: &Witness, sig: &Signature) -> PpTree {
    // breadth-first numbering keeps node order reproducible
    let mut parents: Vec<Option<usize>> = alloc::vec![None];
    let mut props: Vec<&BTreeSet<String>> = alloc::vec![&witness.props];
    let mut queue = alloc::collections::VecDeque::from_iter([(0usize, witness)]);
    while let Some((index, node)) = queue.pop_front() {
        for child in &node.children {
            parents.push(Some(index));
            props.push(&child.props);
            queue.push_back((parents.len() - 1, child));
        }
    }
    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    interpretations.insert(
        String::from(EDGE),
        parents
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| alloc::vec![p, v]))
            .collect(),
    );
    for (symbol, _) in sig.sigma_bar() {
        let marks = props
            .iter()
            .enumerate()
            .filter(|(_, ps)| ps.contains(symbol))
            .map(|(v, _)| alloc::vec![v])
            .collect();
        interpretations.insert(String::from(symbol), marks);
    }
    let structure = PointedStructure::new(sig.clone(), parents.len(), 0, interpretations)
        .expect("witness tree is a valid structure");
    validate_pp_tree(&structure).expect("witness tree is a tree")
}

/// Satisfiability over a unimodal signature. On success the model is a
/// Kripke tree of height at most the modal depth, re-checked before return.
pub fn bml_sat(f: &PpmlFormula, sig: &Signature) -> Result<SatResult, DecisionError> {
    check_atoms(f, sig, true, false)?;
    match tableau(BTreeSet::from_iter([(f.clone(), true)])) {
        None => Ok(SatResult::unsat()),
        Some(witness) => {
            let tree = witness_to_tree(&witness, sig);
            let holds = eval_ppml(tree.structure(), &[tree.root()], f)?;
            assert!(holds, "tableau model must satisfy its formula");
            Ok(SatResult {
                satisfiable: true,
                model: Some(tree),
            })
        }
    }
}

/// Satisfiability for arbitrary arities, by reduction: conjoin the formula
/// characterising flattened trees, decide over the flattened signature, and
/// unfold the Kripke-tree model back into a pp-tree.
pub fn ppml_sat(f: &PpmlFormula, sig: &Signature) -> Result<SatResult, DecisionError> {
    check_atoms(f, sig, false, false)?;
    let flat = sig.flattened();
    let reduced = PpmlFormula::and(f.clone(), phi_k(sig));
    match bml_sat(&reduced, &flat)? {
        SatResult {
            satisfiable: false, ..
        } => Ok(SatResult::unsat()),
        SatResult {
            model: Some(tree), ..
        } => {
            let model = k_inverse(&tree, sig)
                .expect("a model of the image formula unfolds");
            let holds = eval_ppml(model.structure(), &[model.root()], f)?;
            assert!(holds, "unfolded model must satisfy the input");
            Ok(SatResult {
                satisfiable: true,
                model: Some(model),
            })
        }
        _ => unreachable!("satisfiable results carry a model"),
    }
}

/// Brute-force satisfiability oracle: enumerates pp-trees of height at most
/// the modal depth within the node and branching bounds, evaluating the
/// formula at each root. Sound within the bounds; used to cross-check
/// [`ppml_sat`].
pub fn brute_force_ppml_sat(
    f: &PpmlFormula,
    sig: &Signature,
    max_nodes: usize,
    max_branching: usize,
) -> Result<SatResult, DecisionError> {
    check_atoms(f, sig, false, true)?;
    let height = modal_depth(f);
    let mut found: Option<PpTree> = None;
    let mut error: Option<EvalError> = None;
    crate::enumerate::for_each_pp_tree(sig, max_nodes, max_branching, height, &mut |t| {
        match eval_ppml(t.structure(), &[t.root()], f) {
            Ok(true) => {
                found = Some(t.clone());
                false
            }
            Ok(false) => true,
            Err(e) => {
                error = Some(e);
                false
            }
        }
    });
    if let Some(e) = error {
        return Err(e.into());
    }
    Ok(match found {
        Some(model) => SatResult {
            satisfiable: true,
            model: Some(model),
        },
        None => SatResult::unsat(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMethod {
    /// Evaluate the formula on the structure directly.
    Direct,
    /// Unravel to the modal depth, flatten, and evaluate over the unimodal
    /// signature.
    Reduction,
}

pub fn model_check(
    a: &PointedStructure,
    f: &PpmlFormula,
    method: McMethod,
) -> Result<bool, DecisionError> {
    match method {
        McMethod::Direct => Ok(eval_ppml(a, &[a.basepoint()], f)?),
        McMethod::Reduction => {
            let u = unravel(a, modal_depth(f));
            let flat = k_translate(u.tree());
            Ok(eval_ppml(flat.structure(), &[flat.root()], f)?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BisimMethod {
    /// Solve the k-round game directly.
    Game,
    /// Flatten both unravellings and solve the unimodal game.
    Reduction,
    /// Compare canonical codes of the unravellings; decides the finer graded
    /// relation, so `true` implies the other methods answer `true`.
    GradedIso,
}

pub fn decide_k_bisim(
    a: &PointedStructure,
    b: &PointedStructure,
    k: usize,
    method: BisimMethod,
) -> Result<bool, DecisionError> {
    match method {
        BisimMethod::Game => Ok(duplicator_wins(a, b, k, GameMode::Bisim)?),
        BisimMethod::Reduction => {
            if a.signature() != b.signature() {
                return Err(GameError::SignatureMismatch.into());
            }
            let fa = k_translate(unravel(a, k).tree());
            let fb = k_translate(unravel(b, k).tree());
            Ok(duplicator_wins(
                fa.structure(),
                fb.structure(),
                k,
                GameMode::Bisim,
            )?)
        }
        BisimMethod::GradedIso => {
            if a.signature() != b.signature() {
                return Err(GameError::SignatureMismatch.into());
            }
            let code_a = unravel(a, k).tree().canonical_code();
            let code_b = unravel(b, k).tree().canonical_code();
            Ok(code_a == code_b)
        }
    }
}
