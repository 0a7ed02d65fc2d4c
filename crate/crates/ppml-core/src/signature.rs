//! Relational vocabularies with a distinguished binary accessibility symbol.

use alloc::collections::BTreeMap;
use alloc::string::String;

/// Name of the reserved accessibility symbol.
pub const EDGE: &str = "E";

/// Name of the equal-data symbol used by data graph logic signatures.
pub const R_EQ: &str = "R_=";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("signature must contain the accessibility symbol `E` with arity 2")]
    MissingEdge,
    #[error("symbol `E` must have arity 2, got {0}")]
    EdgeArity(usize),
    #[error("symbol `{0}` has arity 0; arities must be positive")]
    ZeroArity(String),
    #[error("empty symbol name")]
    EmptyName,
}

/// A finite relational signature: an ordered map from symbol names to
/// positive arities, always containing [`EDGE`] with arity 2.
///
/// `sigma_bar` (every symbol except `E`) is derived on demand, never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Signature {
    symbols: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new(symbols: BTreeMap<String, usize>) -> Result<Self, SignatureError> {
        match symbols.get(EDGE) {
            None => return Err(SignatureError::MissingEdge),
            Some(&2) => {}
            Some(&a) => return Err(SignatureError::EdgeArity(a)),
        }
        for (name, &arity) in &symbols {
            if name.is_empty() {
                return Err(SignatureError::EmptyName);
            }
            if arity == 0 {
                return Err(SignatureError::ZeroArity(name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    /// Builds a signature from `(name, arity)` pairs, inserting `E` if absent.
    pub fn with_symbols<I, S>(pairs: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut symbols: BTreeMap<String, usize> =
            pairs.into_iter().map(|(n, a)| (n.into(), a)).collect();
        symbols.entry(EDGE.into()).or_insert(2);
        Signature::new(symbols)
    }

    /// The signature `{E}` with no further symbols.
    pub fn edge_only() -> Self {
        Signature::with_symbols::<_, String>([]).expect("edge-only signature is valid")
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.symbols.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.symbols.contains_key(symbol)
    }

    /// All symbols in name order, `E` included.
    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(n, &a)| (n.as_str(), a))
    }

    /// All symbols except `E`, in name order.
    pub fn sigma_bar(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols().filter(|(n, _)| *n != EDGE)
    }

    /// Maximum arity over all symbols; at least 2 because of `E`.
    pub fn max_arity(&self) -> usize {
        self.symbols.values().copied().max().unwrap_or(2)
    }

    /// True when every symbol other than `E` is unary.
    pub fn is_unimodal(&self) -> bool {
        self.sigma_bar().all(|(_, a)| a == 1)
    }

    /// The same symbols with every arity other than `E`'s flattened to 1.
    pub fn flattened(&self) -> Signature {
        let symbols = self
            .symbols
            .iter()
            .map(|(n, &a)| (n.clone(), if n == EDGE { a } else { 1 }))
            .collect();
        Signature::new(symbols).expect("flattening preserves validity")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // `E` is always present
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requires_edge_with_arity_two() {
        assert_eq!(
            Signature::new(BTreeMap::new()),
            Err(SignatureError::MissingEdge)
        );
        let mut m = BTreeMap::new();
        m.insert(String::from("E"), 3);
        assert_eq!(Signature::new(m), Err(SignatureError::EdgeArity(3)));
    }

    #[test]
    fn rejects_zero_arity() {
        let err = Signature::with_symbols([("p", 0)]).unwrap_err();
        assert_eq!(err, SignatureError::ZeroArity("p".into()));
    }

    #[test]
    fn sigma_bar_excludes_edge() {
        let sig = Signature::with_symbols([("S", 2), ("p", 1)]).unwrap();
        let bar: alloc::vec::Vec<_> = sig.sigma_bar().collect();
        assert_eq!(bar, alloc::vec![("S", 2), ("p", 1)]);
        assert_eq!(sig.max_arity(), 2);
        assert!(!sig.is_unimodal());
    }

    #[test]
    fn flattened_is_unimodal() {
        let sig = Signature::with_symbols([("T", 3), ("p", 1)]).unwrap();
        let flat = sig.flattened();
        assert!(flat.is_unimodal());
        assert_eq!(flat.arity("T"), Some(1));
        assert_eq!(flat.arity("E"), Some(2));
    }
}
