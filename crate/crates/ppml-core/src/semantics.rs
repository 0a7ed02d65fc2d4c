//! Reference evaluators: path formulas over valuations, data graph logic
//! over data Kripke models, and brute-force first-order evaluation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::signature::EDGE;
use crate::structure::{last_k, PointedStructure};
use crate::syntax::{DataGlFormula, FolFormula, PpmlFormula};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("world {0} out of range")]
    WorldOutOfRange(usize),
    #[error("data assignment has {got} entries for {expected} worlds")]
    DataLength { expected: usize, got: usize },
    #[error("proposition table has {got} entries for {expected} worlds")]
    PropsLength { expected: usize, got: usize },
    #[error("proposition `{prop}` at world {world} is not declared")]
    UndeclaredProp { prop: String, world: usize },
}

/// Violations of data-graph-model validity: the relation must be transitive
/// and irreflexive.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelViolation {
    #[error("edges {0} -> {1} -> {2} without {0} -> {2}: relation is not transitive")]
    NotTransitive(usize, usize, usize),
    #[error("reflexive edge at world {0}")]
    Reflexive(usize),
}

/// A finite directed graph whose nodes carry a data value and a set of
/// propositions. Only equality of data values is ever observable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataKripkeModel {
    world_count: usize,
    edges: BTreeSet<(usize, usize)>,
    data_of: Vec<u64>,
    props: BTreeSet<String>,
    props_of: Vec<BTreeSet<String>>,
}

impl DataKripkeModel {
    pub fn new(
        world_count: usize,
        edges: BTreeSet<(usize, usize)>,
        data_of: Vec<u64>,
        props: BTreeSet<String>,
        props_of: Vec<BTreeSet<String>>,
    ) -> Result<Self, ModelError> {
        if data_of.len() != world_count {
            return Err(ModelError::DataLength {
                expected: world_count,
                got: data_of.len(),
            });
        }
        if props_of.len() != world_count {
            return Err(ModelError::PropsLength {
                expected: world_count,
                got: props_of.len(),
            });
        }
        for &(u, v) in &edges {
            let bad = if u >= world_count { u } else { v };
            if bad >= world_count {
                return Err(ModelError::WorldOutOfRange(bad));
            }
        }
        for (world, ps) in props_of.iter().enumerate() {
            if let Some(p) = ps.iter().find(|p| !props.contains(*p)) {
                return Err(ModelError::UndeclaredProp {
                    prop: p.clone(),
                    world,
                });
            }
        }
        Ok(DataKripkeModel {
            world_count,
            edges,
            data_of,
            props,
            props_of,
        })
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn data(&self, w: usize) -> u64 {
        self.data_of[w]
    }

    pub fn data_of(&self) -> &[u64] {
        &self.data_of
    }

    pub fn props(&self) -> &BTreeSet<String> {
        &self.props
    }

    pub fn props_at(&self, w: usize) -> &BTreeSet<String> {
        &self.props_of[w]
    }

    /// Checks that the relation is transitive and irreflexive, reporting the
    /// first violation.
    pub fn validate(&self) -> Result<(), ModelViolation> {
        for &(u, v) in &self.edges {
            if u == v {
                return Err(ModelViolation::Reflexive(u));
            }
        }
        for &(u, v) in &self.edges {
            for &(v2, w) in self.edges.range((v, 0)..=(v, usize::MAX)) {
                debug_assert_eq!(v, v2);
                if !self.edges.contains(&(u, w)) {
                    return Err(ModelViolation::NotTransitive(u, v, w));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("valuation is empty")]
    EmptyValuation,
    #[error("valuation entry {0} out of range")]
    ValuationOutOfRange(usize),
    #[error("atom `{0}` does not resolve in the signature")]
    UnknownAtom(String),
    #[error("`E` is not a legal atom")]
    EdgeAtom,
    #[error("proposition `{0}` is not declared")]
    UnknownProposition(String),
    #[error("invalid data graph model: {0}")]
    InvalidModel(#[from] ModelViolation),
    #[error("world {0} out of range")]
    WorldOutOfRange(usize),
    #[error("variable x{0} is unassigned")]
    UnassignedVariable(usize),
    #[error("symbol `{0}` does not resolve in the signature")]
    UnknownSymbol(String),
    #[error("atom `{symbol}` has {got} arguments, arity is {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("assignment maps x{variable} to {element}, which is out of range")]
    AssignmentOutOfRange { variable: usize, element: usize },
}

/// Interned formula nodes, so truth values can be memoised per subformula.
enum Node {
    Top,
    Bot,
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Diamond(usize),
    Graded(u32, usize),
}

struct Evaluator<'a> {
    a: &'a PointedStructure,
    nodes: Vec<Node>,
    atoms: Vec<String>,
    window: usize,
    memo: BTreeMap<(usize, Vec<usize>), bool>,
}

impl<'a> Evaluator<'a> {
    fn new(a: &'a PointedStructure) -> Self {
        Evaluator {
            a,
            nodes: Vec::new(),
            atoms: Vec::new(),
            window: a.signature().max_arity(),
            memo: BTreeMap::new(),
        }
    }

    fn intern(&mut self, f: &PpmlFormula) -> Result<usize, EvalError> {
        let node = match f {
            PpmlFormula::Top => Node::Top,
            PpmlFormula::Bot => Node::Bot,
            PpmlFormula::Atom(name) => {
                if name == EDGE {
                    return Err(EvalError::EdgeAtom);
                }
                if self.a.signature().arity(name).is_none() {
                    return Err(EvalError::UnknownAtom(name.clone()));
                }
                self.atoms.push(name.clone());
                Node::Atom(self.atoms.len() - 1)
            }
            PpmlFormula::Not(g) => Node::Not(self.intern(g)?),
            PpmlFormula::And(l, r) => Node::And(self.intern(l)?, self.intern(r)?),
            PpmlFormula::Diamond(g) => Node::Diamond(self.intern(g)?),
            PpmlFormula::GradedDiamond(n, g) => Node::Graded(n.get(), self.intern(g)?),
        };
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    /// `suffix` is the current valuation truncated to the memory window; the
    /// semantics only ever inspect that suffix.
    fn eval(&mut self, id: usize, suffix: &[usize]) -> bool {
        let key = (id, suffix.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let value = match self.nodes[id] {
            Node::Top => true,
            Node::Bot => false,
            Node::Atom(i) => self
                .a
                .atom_true(&self.atoms[i], suffix)
                .expect("atom resolved at intern time"),
            Node::Not(g) => !self.eval(g, suffix),
            Node::And(l, r) => self.eval(l, suffix) && self.eval(r, suffix),
            Node::Diamond(g) => {
                let last = *suffix.last().expect("valuation non-empty");
                let succs = self.a.successors(last).to_vec();
                succs
                    .into_iter()
                    .any(|x| self.eval_extended(g, suffix, x))
            }
            Node::Graded(n, g) => {
                let last = *suffix.last().expect("valuation non-empty");
                let succs = self.a.successors(last).to_vec();
                let mut hits = 0u32;
                for x in succs {
                    if self.eval_extended(g, suffix, x) {
                        hits += 1;
                        if hits >= n {
                            break;
                        }
                    }
                }
                hits >= n
            }
        };
        self.memo.insert(key, value);
        value
    }

    fn eval_extended(&mut self, id: usize, suffix: &[usize], next: usize) -> bool {
        let mut extended = suffix.to_vec();
        extended.push(next);
        let from = extended.len().saturating_sub(self.window);
        self.eval(id, &extended[from..])
    }
}

/// Truth of a path formula on the valuation `s`. An atom of arity `r` is
/// true iff `r` fits in `s` and the last `r` entries form a tuple of its
/// interpretation; a diamond extends `s` by an `E`-successor of its last
/// entry; a graded diamond needs at least `n` distinct such successors.
pub fn eval_ppml(
    a: &PointedStructure,
    s: &[usize],
    f: &PpmlFormula,
) -> Result<bool, EvalError> {
    if s.is_empty() {
        return Err(EvalError::EmptyValuation);
    }
    if let Some(&bad) = s.iter().find(|&&v| v >= a.universe_size()) {
        return Err(EvalError::ValuationOutOfRange(bad));
    }
    let mut evaluator = Evaluator::new(a);
    let root = evaluator.intern(f)?;
    let suffix = last_k(s, evaluator.window);
    Ok(evaluator.eval(root, suffix))
}

/// Truth of a data formula at a world. The equal-data and distinct-data
/// accessibility relations are computed from the data assignment on the fly.
/// Models whose relation is not transitive irreflexive are rejected.
pub fn eval_datagl(
    m: &DataKripkeModel,
    w: usize,
    f: &DataGlFormula,
) -> Result<bool, EvalError> {
    m.validate()?;
    if w >= m.world_count() {
        return Err(EvalError::WorldOutOfRange(w));
    }
    eval_datagl_rec(m, w, f)
}

fn eval_datagl_rec(m: &DataKripkeModel, w: usize, f: &DataGlFormula) -> Result<bool, EvalError> {
    Ok(match f {
        DataGlFormula::Top => true,
        DataGlFormula::Bot => false,
        DataGlFormula::Prop(p) => {
            if !m.props().contains(p) {
                return Err(EvalError::UnknownProposition(p.clone()));
            }
            m.props_at(w).contains(p)
        }
        DataGlFormula::Not(g) => !eval_datagl_rec(m, w, g)?,
        DataGlFormula::And(l, r) => eval_datagl_rec(m, w, l)? && eval_datagl_rec(m, w, r)?,
        DataGlFormula::DiamondEq(g) => {
            let mut found = false;
            for &(u, v) in m.edges().range((w, 0)..=(w, usize::MAX)) {
                debug_assert_eq!(u, w);
                if m.data(w) == m.data(v) && eval_datagl_rec(m, v, g)? {
                    found = true;
                    break;
                }
            }
            found
        }
        DataGlFormula::DiamondNeq(g) => {
            let mut found = false;
            for &(u, v) in m.edges().range((w, 0)..=(w, usize::MAX)) {
                debug_assert_eq!(u, w);
                if m.data(w) != m.data(v) && eval_datagl_rec(m, v, g)? {
                    found = true;
                    break;
                }
            }
            found
        }
    })
}

/// Classical Tarskian truth; existential quantifiers enumerate the universe.
pub fn eval_fol(
    a: &PointedStructure,
    assignment: &BTreeMap<usize, usize>,
    f: &FolFormula,
) -> Result<bool, EvalError> {
    for (&variable, &element) in assignment {
        if element >= a.universe_size() {
            return Err(EvalError::AssignmentOutOfRange { variable, element });
        }
    }
    let mut assignment = assignment.clone();
    eval_fol_rec(a, &mut assignment, f)
}

fn eval_fol_rec(
    a: &PointedStructure,
    assignment: &mut BTreeMap<usize, usize>,
    f: &FolFormula,
) -> Result<bool, EvalError> {
    Ok(match f {
        FolFormula::Top => true,
        FolFormula::Bot => false,
        FolFormula::Atom(symbol, args) => {
            let arity = a
                .signature()
                .arity(symbol)
                .ok_or_else(|| EvalError::UnknownSymbol(symbol.clone()))?;
            if args.len() != arity {
                return Err(EvalError::ArityMismatch {
                    symbol: symbol.clone(),
                    expected: arity,
                    got: args.len(),
                });
            }
            let mut tuple = Vec::with_capacity(args.len());
            for &v in args {
                tuple.push(
                    *assignment
                        .get(&v)
                        .ok_or(EvalError::UnassignedVariable(v))?,
                );
            }
            a.holds(symbol, &tuple)
        }
        FolFormula::Not(g) => !eval_fol_rec(a, assignment, g)?,
        FolFormula::And(l, r) => {
            // no short-circuit: both sides must be well formed
            let lv = eval_fol_rec(a, assignment, l)?;
            let rv = eval_fol_rec(a, assignment, r)?;
            lv && rv
        }
        FolFormula::Exists(v, g) => {
            let saved = assignment.get(v).copied();
            let mut found = false;
            for element in 0..a.universe_size() {
                assignment.insert(*v, element);
                if eval_fol_rec(a, assignment, g)? {
                    found = true;
                    break;
                }
            }
            match saved {
                Some(old) => {
                    assignment.insert(*v, old);
                }
                None => {
                    assignment.remove(v);
                }
            }
            found
        }
    })
}
