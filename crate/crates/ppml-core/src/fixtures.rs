//! Small example structures shared by documentation, unit tests and the
//! golden CLI tests.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;

use crate::signature::Signature;
use crate::structure::PointedStructure;

/// `{E, S}` with `S` binary.
pub fn sig_es() -> Signature {
    Signature::with_symbols([("S", 2)]).unwrap()
}

/// `{E, p, S}` with `p` unary and `S` binary.
pub fn sig_eps() -> Signature {
    Signature::with_symbols([("p", 1), ("S", 2)]).unwrap()
}

/// A five-element structure: the basepoint `0` has successors `1..=4`, and
/// `S` links the basepoint symmetrically with `3` and `4`.
pub fn example_a() -> PointedStructure {
    let mut interp = BTreeMap::new();
    interp.insert(
        String::from("E"),
        BTreeSet::from_iter([vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]]),
    );
    interp.insert(
        String::from("S"),
        BTreeSet::from_iter([vec![0, 3], vec![3, 0], vec![0, 4], vec![4, 0]]),
    );
    PointedStructure::new(sig_es(), 5, 0, interp).unwrap()
}

/// A four-element companion to [`example_a`]: the basepoint `0` has
/// successors `1..=3`, and `S` links the basepoint symmetrically with `2`.
pub fn example_b() -> PointedStructure {
    let mut interp = BTreeMap::new();
    interp.insert(
        String::from("E"),
        BTreeSet::from_iter([vec![0, 1], vec![0, 2], vec![0, 3]]),
    );
    interp.insert(
        String::from("S"),
        BTreeSet::from_iter([vec![0, 2], vec![2, 0]]),
    );
    PointedStructure::new(sig_es(), 4, 0, interp).unwrap()
}

/// A single point with no relations over `{E, S}`.
pub fn single_point() -> PointedStructure {
    PointedStructure::new(sig_es(), 1, 0, BTreeMap::new()).unwrap()
}
