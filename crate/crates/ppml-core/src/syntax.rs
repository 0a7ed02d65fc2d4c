//! Formula ASTs, modal depth, modal debt and the well-nesting rewrite.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;

use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("atom `{0}` does not resolve in the signature")]
    UnknownAtom(String),
    #[error("`E` is not a legal atom")]
    EdgeAtom,
}

/// Path-predicate formulas. Atoms are relation symbols of arbitrary arity;
/// `E` is never a legal atom. Graded diamonds require at least one witness.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PpmlFormula {
    Top,
    Bot,
    Atom(String),
    Not(Box<PpmlFormula>),
    And(Box<PpmlFormula>, Box<PpmlFormula>),
    Diamond(Box<PpmlFormula>),
    GradedDiamond(NonZeroU32, Box<PpmlFormula>),
}

impl PpmlFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        PpmlFormula::Atom(name.into())
    }

    // a constructor taking ownership, not the `!` operator
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PpmlFormula) -> Self {
        PpmlFormula::Not(Box::new(f))
    }

    pub fn and(l: PpmlFormula, r: PpmlFormula) -> Self {
        PpmlFormula::And(Box::new(l), Box::new(r))
    }

    pub fn diamond(f: PpmlFormula) -> Self {
        PpmlFormula::Diamond(Box::new(f))
    }

    pub fn graded(n: u32, f: PpmlFormula) -> Self {
        PpmlFormula::GradedDiamond(
            NonZeroU32::new(n).expect("graded diamond count must be >= 1"),
            Box::new(f),
        )
    }

    /// Right-fold of a conjunction list; the empty conjunction is `Top`.
    pub fn conjoin(conjuncts: Vec<PpmlFormula>) -> Self {
        let mut it = conjuncts.into_iter().rev();
        match it.next() {
            None => PpmlFormula::Top,
            Some(last) => it.fold(last, |acc, f| PpmlFormula::and(f, acc)),
        }
    }

    /// Negation-free and bottom-free: built from atoms, `Top`, `And`, `Diamond`.
    pub fn is_positive(&self) -> bool {
        match self {
            PpmlFormula::Top | PpmlFormula::Atom(_) => true,
            PpmlFormula::And(l, r) => l.is_positive() && r.is_positive(),
            PpmlFormula::Diamond(f) => f.is_positive(),
            PpmlFormula::Bot | PpmlFormula::Not(_) | PpmlFormula::GradedDiamond(..) => false,
        }
    }

    pub fn has_graded(&self) -> bool {
        match self {
            PpmlFormula::GradedDiamond(..) => true,
            PpmlFormula::Not(f) | PpmlFormula::Diamond(f) => f.has_graded(),
            PpmlFormula::And(l, r) => l.has_graded() || r.has_graded(),
            _ => false,
        }
    }

    /// Atom names in order of first occurrence.
    pub fn atoms(&self) -> Vec<&str> {
        fn walk<'f>(f: &'f PpmlFormula, out: &mut Vec<&'f str>) {
            match f {
                PpmlFormula::Atom(name) => {
                    if !out.contains(&name.as_str()) {
                        out.push(name);
                    }
                }
                PpmlFormula::Not(g)
                | PpmlFormula::Diamond(g)
                | PpmlFormula::GradedDiamond(_, g) => walk(g, out),
                PpmlFormula::And(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                PpmlFormula::Top | PpmlFormula::Bot => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Maximum number of nested diamonds; a graded diamond is one nesting level.
pub fn modal_depth(f: &PpmlFormula) -> usize {
    match f {
        PpmlFormula::Top | PpmlFormula::Bot | PpmlFormula::Atom(_) => 0,
        PpmlFormula::Not(g) => modal_depth(g),
        PpmlFormula::And(l, r) => modal_depth(l).max(modal_depth(r)),
        PpmlFormula::Diamond(g) | PpmlFormula::GradedDiamond(_, g) => modal_depth(g) + 1,
    }
}

/// How many diamonds must already enclose the formula for every atom to be
/// evaluable: atoms cost `arity - 1`, a diamond pays one unit off. A formula
/// is well nested iff its debt is 0.
pub fn modal_debt(f: &PpmlFormula, sig: &Signature) -> Result<usize, SyntaxError> {
    match f {
        PpmlFormula::Top | PpmlFormula::Bot => Ok(0),
        PpmlFormula::Atom(name) => {
            if name == crate::signature::EDGE {
                return Err(SyntaxError::EdgeAtom);
            }
            sig.arity(name)
                .map(|a| a - 1)
                .ok_or_else(|| SyntaxError::UnknownAtom(name.clone()))
        }
        PpmlFormula::Not(g) => modal_debt(g, sig),
        PpmlFormula::And(l, r) => Ok(modal_debt(l, sig)?.max(modal_debt(r, sig)?)),
        PpmlFormula::Diamond(g) | PpmlFormula::GradedDiamond(_, g) => {
            Ok(modal_debt(g, sig)?.saturating_sub(1))
        }
    }
}

/// Replaces every atom occurrence nested in fewer than `arity - 1` diamonds
/// by `Bot`. The result has debt 0 and agrees with the input under
/// single-pointed evaluation.
pub fn rewrite_well_nested(f: &PpmlFormula, sig: &Signature) -> Result<PpmlFormula, SyntaxError> {
    fn go(f: &PpmlFormula, sig: &Signature, depth: usize) -> Result<PpmlFormula, SyntaxError> {
        Ok(match f {
            PpmlFormula::Top => PpmlFormula::Top,
            PpmlFormula::Bot => PpmlFormula::Bot,
            PpmlFormula::Atom(name) => {
                if name == crate::signature::EDGE {
                    return Err(SyntaxError::EdgeAtom);
                }
                let arity = sig
                    .arity(name)
                    .ok_or_else(|| SyntaxError::UnknownAtom(name.clone()))?;
                if depth + 1 < arity {
                    PpmlFormula::Bot
                } else {
                    f.clone()
                }
            }
            PpmlFormula::Not(g) => PpmlFormula::not(go(g, sig, depth)?),
            PpmlFormula::And(l, r) => {
                PpmlFormula::and(go(l, sig, depth)?, go(r, sig, depth)?)
            }
            PpmlFormula::Diamond(g) => PpmlFormula::diamond(go(g, sig, depth + 1)?),
            PpmlFormula::GradedDiamond(n, g) => {
                PpmlFormula::GradedDiamond(*n, Box::new(go(g, sig, depth + 1)?))
            }
        })
    }
    go(f, sig, 0)
}

impl fmt::Display for PpmlFormula {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        // conjunction is the only binary operator and binds loosest
        fn operand(f: &PpmlFormula, w: &mut fmt::Formatter<'_>) -> fmt::Result {
            if matches!(f, PpmlFormula::And(..)) {
                write!(w, "({f})")
            } else {
                write!(w, "{f}")
            }
        }
        match self {
            PpmlFormula::Top => write!(w, "T"),
            PpmlFormula::Bot => write!(w, "F"),
            PpmlFormula::Atom(name) => write!(w, "{name}"),
            PpmlFormula::Not(f) => {
                write!(w, "!")?;
                operand(f, w)
            }
            PpmlFormula::And(l, r) => {
                write!(w, "{l} & ")?;
                operand(r, w)
            }
            PpmlFormula::Diamond(f) => {
                write!(w, "<>")?;
                operand(f, w)
            }
            PpmlFormula::GradedDiamond(n, f) => {
                write!(w, "<{n}>")?;
                operand(f, w)
            }
        }
    }
}

/// Data graph logic formulas: propositions plus equal-data and distinct-data
/// diamonds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DataGlFormula {
    Top,
    Bot,
    Prop(String),
    Not(Box<DataGlFormula>),
    And(Box<DataGlFormula>, Box<DataGlFormula>),
    DiamondEq(Box<DataGlFormula>),
    DiamondNeq(Box<DataGlFormula>),
}

impl DataGlFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        DataGlFormula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: DataGlFormula) -> Self {
        DataGlFormula::Not(Box::new(f))
    }

    pub fn and(l: DataGlFormula, r: DataGlFormula) -> Self {
        DataGlFormula::And(Box::new(l), Box::new(r))
    }

    /// `l | r` encoded as `!(!l & !r)`; the grammar has no primitive
    /// disjunction.
    pub fn or(l: DataGlFormula, r: DataGlFormula) -> Self {
        DataGlFormula::not(DataGlFormula::and(
            DataGlFormula::not(l),
            DataGlFormula::not(r),
        ))
    }

    pub fn diamond_eq(f: DataGlFormula) -> Self {
        DataGlFormula::DiamondEq(Box::new(f))
    }

    pub fn diamond_neq(f: DataGlFormula) -> Self {
        DataGlFormula::DiamondNeq(Box::new(f))
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            DataGlFormula::Top | DataGlFormula::Bot | DataGlFormula::Prop(_) => 0,
            DataGlFormula::Not(f) => f.modal_depth(),
            DataGlFormula::And(l, r) => l.modal_depth().max(r.modal_depth()),
            DataGlFormula::DiamondEq(f) | DataGlFormula::DiamondNeq(f) => f.modal_depth() + 1,
        }
    }
}

impl fmt::Display for DataGlFormula {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &DataGlFormula, w: &mut fmt::Formatter<'_>) -> fmt::Result {
            if matches!(f, DataGlFormula::And(..)) {
                write!(w, "({f})")
            } else {
                write!(w, "{f}")
            }
        }
        match self {
            DataGlFormula::Top => write!(w, "T"),
            DataGlFormula::Bot => write!(w, "F"),
            DataGlFormula::Prop(name) => write!(w, "{name}"),
            DataGlFormula::Not(f) => {
                write!(w, "!")?;
                operand(f, w)
            }
            DataGlFormula::And(l, r) => {
                write!(w, "{l} & ")?;
                operand(r, w)
            }
            DataGlFormula::DiamondEq(f) => {
                write!(w, "<=>")?;
                operand(f, w)
            }
            DataGlFormula::DiamondNeq(f) => {
                write!(w, "<!=>")?;
                operand(f, w)
            }
        }
    }
}

/// First-order formulas over a relational signature; output language of the
/// standard translation, printed but never parsed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FolFormula {
    Top,
    Bot,
    /// `symbol(x_{i1}, ..., x_{ir})`; the variable list length must equal the
    /// symbol's arity.
    Atom(String, Vec<usize>),
    Not(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Exists(usize, Box<FolFormula>),
}

impl FolFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FolFormula) -> Self {
        FolFormula::Not(Box::new(f))
    }

    pub fn and(l: FolFormula, r: FolFormula) -> Self {
        FolFormula::And(Box::new(l), Box::new(r))
    }

    pub fn exists(var: usize, f: FolFormula) -> Self {
        FolFormula::Exists(var, Box::new(f))
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            FolFormula::Top | FolFormula::Bot | FolFormula::Atom(..) => 0,
            FolFormula::Not(f) => f.quantifier_rank(),
            FolFormula::And(l, r) => l.quantifier_rank().max(r.quantifier_rank()),
            FolFormula::Exists(_, f) => f.quantifier_rank() + 1,
        }
    }

    /// Every variable index mentioned, bound or free.
    pub fn variables(&self) -> alloc::collections::BTreeSet<usize> {
        let mut vars = alloc::collections::BTreeSet::new();
        fn walk(f: &FolFormula, vars: &mut alloc::collections::BTreeSet<usize>) {
            match f {
                FolFormula::Atom(_, args) => vars.extend(args.iter().copied()),
                FolFormula::Not(g) => walk(g, vars),
                FolFormula::And(l, r) => {
                    walk(l, vars);
                    walk(r, vars);
                }
                FolFormula::Exists(v, g) => {
                    vars.insert(*v);
                    walk(g, vars);
                }
                FolFormula::Top | FolFormula::Bot => {}
            }
        }
        walk(self, &mut vars);
        vars
    }
}

impl fmt::Display for FolFormula {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &FolFormula, w: &mut fmt::Formatter<'_>) -> fmt::Result {
            if matches!(f, FolFormula::And(..)) {
                write!(w, "({f})")
            } else {
                write!(w, "{f}")
            }
        }
        match self {
            FolFormula::Top => write!(w, "T"),
            FolFormula::Bot => write!(w, "F"),
            FolFormula::Atom(symbol, args) => {
                write!(w, "{symbol}(")?;
                for (i, v) in args.iter().enumerate() {
                    if i > 0 {
                        write!(w, ",")?;
                    }
                    write!(w, "x{v}")?;
                }
                write!(w, ")")
            }
            FolFormula::Not(f) => {
                write!(w, "!")?;
                operand(f, w)
            }
            FolFormula::And(l, r) => {
                write!(w, "{l} & ")?;
                operand(r, w)
            }
            FolFormula::Exists(v, f) => write!(w, "exists x{v} ({f})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CdxpPolarity {
    Equal,
    NotEqual,
}

/// A data-comparison path: `n >= 1` descendant steps, each guarded by a test,
/// comparing the data of the start and end points for (in)equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdxpPath {
    polarity: CdxpPolarity,
    tests: Vec<DataGlFormula>,
}

impl CdxpPath {
    /// `tests` must be non-empty.
    pub fn new(polarity: CdxpPolarity, tests: Vec<DataGlFormula>) -> Option<Self> {
        if tests.is_empty() {
            None
        } else {
            Some(CdxpPath { polarity, tests })
        }
    }

    pub fn polarity(&self) -> CdxpPolarity {
        self.polarity
    }

    pub fn tests(&self) -> &[DataGlFormula] {
        &self.tests
    }
}
