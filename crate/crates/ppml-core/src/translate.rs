//! Inter-logic maps: the standard translation into first-order logic, the
//! two data-logic translations with their substitution, encapsulation of
//! data models as relational structures and its inverse, path-expression
//! translation, arity flattening of pp-trees into Kripke trees, and the
//! formula carving out the flattened image.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::pptree::{validate_pp_tree, PpTree};
use crate::semantics::{DataKripkeModel, ModelViolation};
use crate::signature::{Signature, EDGE, R_EQ};
use crate::structure::{last_k, PointedStructure};
use crate::syntax::{CdxpPath, CdxpPolarity, DataGlFormula, FolFormula, PpmlFormula};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("graded diamonds are not supported by this translation")]
    GradedUnsupported,
    #[error("atom `{0}` does not resolve in the signature")]
    UnknownAtom(String),
    #[error("`E` is not a legal atom")]
    EdgeAtom,
    #[error("atom `{0}` is neither the equal-data symbol nor a proposition")]
    NonDataglAtom(String),
    #[error("signature lacks `{name}` of arity {arity} required by a path of that length")]
    MissingPathSymbol { name: String, arity: usize },
    #[error("invalid data graph model: {0}")]
    InvalidModel(#[from] ModelViolation),
    #[error("world {0} out of range")]
    WorldOutOfRange(usize),
    #[error("signature is not a data graph signature: {0}")]
    NotDataglSignature(String),
    #[error("`E` has a reflexive edge at {0}")]
    EdgeReflexive(usize),
    #[error("`E` is not transitive: {0} -> {1} -> {2}")]
    EdgeNotTransitive(usize, usize, usize),
    #[error("equal-data relation is not reflexive at {0}")]
    EqNotReflexive(usize),
    #[error("equal-data relation is not symmetric on ({0}, {1})")]
    EqNotSymmetric(usize, usize),
    #[error("equal-data relation is not transitive on ({0}, {1}, {2})")]
    EqNotTransitive(usize, usize, usize),
    #[error("symbol `{symbol}` holds at node {node}, which is too close to the root")]
    StarViolation { node: usize, symbol: String },
    #[error("tree signature does not match the flattening of the given signature")]
    SymbolMismatch,
}

/// The data graph signature: `E` and the equal-data symbol, both binary,
/// plus the given unary propositions.
pub fn sigma_dgl<I, S>(props: I) -> Signature
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut symbols: Vec<(String, usize)> =
        props.into_iter().map(|p| (p.into(), 1)).collect();
    symbols.push((String::from(R_EQ), 2));
    Signature::with_symbols(symbols).expect("data graph signature is valid")
}

/// Standard translation into first-order logic over the same signature,
/// reusing variables cyclically: with maximum arity `N`, only `x0..x(N-1)`
/// ever occur, and the quantifier rank equals the modal depth.
pub fn standard_translation(
    f: &PpmlFormula,
    sig: &Signature,
) -> Result<FolFormula, TranslateError> {
    let width = sig.max_arity();
    st(f, sig, width, &[0])
}

fn st(
    f: &PpmlFormula,
    sig: &Signature,
    width: usize,
    ctx: &[usize],
) -> Result<FolFormula, TranslateError> {
    Ok(match f {
        PpmlFormula::Top => FolFormula::Top,
        PpmlFormula::Bot => FolFormula::Bot,
        PpmlFormula::Atom(name) => {
            if name == EDGE {
                return Err(TranslateError::EdgeAtom);
            }
            let arity = sig
                .arity(name)
                .ok_or_else(|| TranslateError::UnknownAtom(name.clone()))?;
            if arity <= ctx.len() {
                FolFormula::Atom(name.clone(), last_k(ctx, arity).to_vec())
            } else {
                FolFormula::Bot
            }
        }
        PpmlFormula::Not(g) => FolFormula::not(st(g, sig, width, ctx)?),
        PpmlFormula::And(l, r) => {
            FolFormula::and(st(l, sig, width, ctx)?, st(r, sig, width, ctx)?)
        }
        PpmlFormula::Diamond(g) => {
            let x = *ctx.last().expect("context non-empty");
            let y = (x + 1) % width;
            let mut next = last_k(ctx, width - 1).to_vec();
            next.push(y);
            FolFormula::exists(
                y,
                FolFormula::and(
                    FolFormula::Atom(String::from(EDGE), alloc::vec![x, y]),
                    st(g, sig, width, &next)?,
                ),
            )
        }
        PpmlFormula::GradedDiamond(..) => return Err(TranslateError::GradedUnsupported),
    })
}

/// Data formulas into path formulas: the two data diamonds become a plain
/// diamond guarding the equal-data atom positively or negatively.
pub fn tr1(f: &DataGlFormula) -> PpmlFormula {
    match f {
        DataGlFormula::Top => PpmlFormula::Top,
        DataGlFormula::Bot => PpmlFormula::Bot,
        DataGlFormula::Prop(p) => PpmlFormula::atom(p.clone()),
        DataGlFormula::Not(g) => PpmlFormula::not(tr1(g)),
        DataGlFormula::And(l, r) => PpmlFormula::and(tr1(l), tr1(r)),
        DataGlFormula::DiamondEq(g) => {
            PpmlFormula::diamond(PpmlFormula::and(PpmlFormula::atom(R_EQ), tr1(g)))
        }
        DataGlFormula::DiamondNeq(g) => PpmlFormula::diamond(PpmlFormula::and(
            PpmlFormula::not(PpmlFormula::atom(R_EQ)),
            tr1(g),
        )),
    }
}

/// Replaces every occurrence of the equal-data atom that is not under a
/// diamond by `Top` or `Bot`.
pub fn substitute_eq(f: &PpmlFormula, with_top: bool) -> PpmlFormula {
    match f {
        PpmlFormula::Atom(name) if name == R_EQ => {
            if with_top {
                PpmlFormula::Top
            } else {
                PpmlFormula::Bot
            }
        }
        PpmlFormula::Not(g) => PpmlFormula::not(substitute_eq(g, with_top)),
        PpmlFormula::And(l, r) => {
            PpmlFormula::and(substitute_eq(l, with_top), substitute_eq(r, with_top))
        }
        // diamonds shield their subformula from the substitution
        _ => f.clone(),
    }
}

/// Path formulas over a data graph signature back into data formulas. An
/// unguarded equal-data atom is unsatisfiable; a diamond splits into the
/// equal-data and distinct-data cases, substituting accordingly.
pub fn tr2(f: &PpmlFormula, sig: &Signature) -> Result<DataGlFormula, TranslateError> {
    Ok(match f {
        PpmlFormula::Top => DataGlFormula::Top,
        PpmlFormula::Bot => DataGlFormula::Bot,
        PpmlFormula::Atom(name) if name == R_EQ => DataGlFormula::Bot,
        PpmlFormula::Atom(name) => {
            if name == EDGE {
                return Err(TranslateError::EdgeAtom);
            }
            match sig.arity(name) {
                None => return Err(TranslateError::UnknownAtom(name.clone())),
                Some(1) => DataGlFormula::prop(name.clone()),
                Some(_) => return Err(TranslateError::NonDataglAtom(name.clone())),
            }
        }
        PpmlFormula::Not(g) => DataGlFormula::not(tr2(g, sig)?),
        PpmlFormula::And(l, r) => DataGlFormula::and(tr2(l, sig)?, tr2(r, sig)?),
        PpmlFormula::Diamond(g) => DataGlFormula::or(
            DataGlFormula::diamond_eq(tr2(&substitute_eq(g, true), sig)?),
            DataGlFormula::diamond_neq(tr2(&substitute_eq(g, false), sig)?),
        ),
        PpmlFormula::GradedDiamond(..) => return Err(TranslateError::GradedUnsupported),
    })
}

/// Encapsulates a data model as a relational structure: the relation becomes
/// `E`, the data assignment becomes the equal-data equivalence relation
/// (loops included), and propositions become unary relations.
pub fn datagl_to_structure(
    m: &DataKripkeModel,
    world: usize,
) -> Result<PointedStructure, TranslateError> {
    m.validate()?;
    if world >= m.world_count() {
        return Err(TranslateError::WorldOutOfRange(world));
    }
    let n = m.world_count();
    let sig = sigma_dgl(m.props().iter().cloned());
    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    interpretations.insert(
        String::from(EDGE),
        m.edges().iter().map(|&(u, v)| alloc::vec![u, v]).collect(),
    );
    let mut eq = BTreeSet::new();
    for u in 0..n {
        for v in 0..n {
            if m.data(u) == m.data(v) {
                eq.insert(alloc::vec![u, v]);
            }
        }
    }
    interpretations.insert(String::from(R_EQ), eq);
    for p in m.props() {
        let holds = (0..n)
            .filter(|&w| m.props_at(w).contains(p))
            .map(|w| alloc::vec![w])
            .collect();
        interpretations.insert(p.clone(), holds);
    }
    Ok(PointedStructure::new(sig, n, world, interpretations)
        .expect("encapsulation produces a valid structure"))
}

/// Recovers a data model from a structure in the image of the encapsulation:
/// `E` must be transitive irreflexive and the equal-data relation an
/// equivalence. Data values number the equivalence classes in order of first
/// appearance, so encapsulating the result reproduces the input exactly.
pub fn structure_to_datagl(
    a: &PointedStructure,
) -> Result<(DataKripkeModel, usize), TranslateError> {
    let sig = a.signature();
    if sig.arity(R_EQ) != Some(2) {
        return Err(TranslateError::NotDataglSignature(
            "missing binary equal-data symbol".into(),
        ));
    }
    if let Some((name, _)) = sig
        .sigma_bar()
        .find(|&(name, arity)| name != R_EQ && arity != 1)
    {
        return Err(TranslateError::NotDataglSignature(alloc::format!(
            "symbol `{name}` is neither unary nor the equal-data symbol"
        )));
    }
    let n = a.universe_size();
    let edge = a.interpretation(EDGE).expect("E interpreted");
    for t in edge {
        if t[0] == t[1] {
            return Err(TranslateError::EdgeReflexive(t[0]));
        }
    }
    for t in edge {
        for t2 in edge {
            if t2[0] == t[1] && !a.holds(EDGE, &[t[0], t2[1]]) {
                return Err(TranslateError::EdgeNotTransitive(t[0], t[1], t2[1]));
            }
        }
    }
    let eq = |u: usize, v: usize| a.holds(R_EQ, &[u, v]);
    for v in 0..n {
        if !eq(v, v) {
            return Err(TranslateError::EqNotReflexive(v));
        }
    }
    for u in 0..n {
        for v in 0..n {
            if eq(u, v) && !eq(v, u) {
                return Err(TranslateError::EqNotSymmetric(u, v));
            }
            for w in 0..n {
                if eq(u, v) && eq(v, w) && !eq(u, w) {
                    return Err(TranslateError::EqNotTransitive(u, v, w));
                }
            }
        }
    }
    // number classes by first appearance
    let mut data = alloc::vec![0u64; n];
    let mut classes = 0u64;
    for v in 0..n {
        match (0..v).find(|&u| eq(u, v)) {
            Some(u) => data[v] = data[u],
            None => {
                data[v] = classes;
                classes += 1;
            }
        }
    }
    let props: BTreeSet<String> = sig
        .sigma_bar()
        .filter(|&(name, _)| name != R_EQ)
        .map(|(name, _)| String::from(name))
        .collect();
    let props_of: Vec<BTreeSet<String>> = (0..n)
        .map(|w| {
            props
                .iter()
                .filter(|p| a.holds(p, &[w]))
                .cloned()
                .collect()
        })
        .collect();
    let edges = edge.iter().map(|t| (t[0], t[1])).collect();
    let model = DataKripkeModel::new(n, edges, data, props, props_of)
        .expect("extracted model is well formed");
    Ok((model, a.basepoint()))
}

/// A data-comparison path becomes nested diamonds carrying the tests, ending
/// in the arity-`(n+1)` comparison atom (negated for the inequality form).
/// For a single step that atom is the equal-data symbol itself.
pub fn tr1_cdxp(path: &CdxpPath, sig: &Signature) -> Result<PpmlFormula, TranslateError> {
    let steps = path.tests().len();
    let arity = steps + 1;
    let name = if arity == 2 {
        String::from(R_EQ)
    } else {
        alloc::format!("R_{arity}")
    };
    if sig.arity(&name) != Some(arity) {
        return Err(TranslateError::MissingPathSymbol { name, arity });
    }
    let comparison = match path.polarity() {
        CdxpPolarity::Equal => PpmlFormula::atom(name),
        CdxpPolarity::NotEqual => PpmlFormula::not(PpmlFormula::atom(name)),
    };
    let mut formula = comparison;
    for test in path.tests().iter().rev() {
        formula = PpmlFormula::diamond(PpmlFormula::and(tr1(test), formula));
    }
    Ok(formula)
}

/// Flattens a pp-tree over `sig` into a Kripke tree over the unimodal
/// signature: each symbol becomes unary and holds at the last node of each
/// of its tuples. No information is lost: tuples are recoverable as the
/// root-chain suffixes ending at the marked nodes.
pub fn k_translate(t: &PpTree) -> PpTree {
    let source = t.structure();
    let flat_sig = source.signature().flattened();
    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    interpretations.insert(
        String::from(EDGE),
        source.interpretation(EDGE).expect("E interpreted").clone(),
    );
    for (symbol, _) in source.signature().sigma_bar() {
        let marks = source
            .interpretation(symbol)
            .expect("all symbols interpreted")
            .iter()
            .map(|tuple| alloc::vec![*tuple.last().expect("arity >= 1")])
            .collect();
        interpretations.insert(String::from(symbol), marks);
    }
    let structure = PointedStructure::new(
        flat_sig,
        source.universe_size(),
        source.basepoint(),
        interpretations,
    )
    .expect("flattening preserves validity");
    validate_pp_tree(&structure).expect("flattening preserves the tree shape")
}

/// Inverse of the flattening on its image: a Kripke tree where every marked
/// node is high enough unfolds back into the unique pp-tree over `sig`. A
/// mark closer to the root than `arity - 1` is a witness that the tree is
/// not in the image.
pub fn k_inverse(t: &PpTree, sig: &Signature) -> Result<PpTree, TranslateError> {
    let source = t.structure();
    if source.signature() != &sig.flattened() {
        return Err(TranslateError::SymbolMismatch);
    }
    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    interpretations.insert(
        String::from(EDGE),
        source.interpretation(EDGE).expect("E interpreted").clone(),
    );
    for (symbol, arity) in sig.sigma_bar() {
        let mut tuples = BTreeSet::new();
        for mark in source.interpretation(symbol).expect("all symbols interpreted") {
            let node = mark[0];
            if t.height(node) + 1 < arity {
                return Err(TranslateError::StarViolation {
                    node,
                    symbol: String::from(symbol),
                });
            }
            let chain = t.root_chain(node);
            tuples.insert(last_k(&chain, arity).to_vec());
        }
        interpretations.insert(String::from(symbol), tuples);
    }
    let structure = PointedStructure::new(
        sig.clone(),
        source.universe_size(),
        source.basepoint(),
        interpretations,
    )
    .expect("unfolding produces a valid structure");
    Ok(validate_pp_tree(&structure).expect("unfolding preserves the tree shape"))
}

/// The arity-flattening of an arbitrary pointed structure: a symbol holds at
/// an element iff some `E`-chain from the basepoint ends there with its last
/// `arity` elements forming a tuple. Agrees with [`k_translate`] on
/// pp-trees rooted at their basepoint.
pub fn underline_k(a: &PointedStructure) -> PointedStructure {
    let reachable = a.reachable_from_basepoint();
    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    interpretations.insert(
        String::from(EDGE),
        a.interpretation(EDGE).expect("E interpreted").clone(),
    );
    for (symbol, _) in a.signature().sigma_bar() {
        let mut marks = BTreeSet::new();
        for tuple in a.interpretation(symbol).expect("all symbols interpreted") {
            if a.is_chain(tuple) && reachable[tuple[0]] {
                marks.insert(alloc::vec![*tuple.last().expect("arity >= 1")]);
            }
        }
        interpretations.insert(String::from(symbol), marks);
    }
    PointedStructure::new(
        a.signature().flattened(),
        a.universe_size(),
        a.basepoint(),
        interpretations,
    )
    .expect("flattening preserves validity")
}

/// The formula over the flattened signature characterising flattened
/// pp-trees among Kripke trees: no symbol of arity `r > 1` may hold within
/// distance `r - 2` of the root. True of every structure when all symbols
/// are unary.
pub fn phi_k(sig: &Signature) -> PpmlFormula {
    let mut conjuncts = Vec::new();
    for (symbol, arity) in sig.sigma_bar() {
        if arity > 1 {
            for depth in 0..=arity - 2 {
                let mut f = PpmlFormula::atom(symbol);
                for _ in 0..depth {
                    f = PpmlFormula::diamond(f);
                }
                conjuncts.push(PpmlFormula::not(f));
            }
        }
    }
    PpmlFormula::conjoin(conjuncts)
}
