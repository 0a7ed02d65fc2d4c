//! Shared input pools for the acceptance suites: exhaustive tiny structures,
//! seeded random structures and models, and formula families.

use std::collections::BTreeSet;

use ppml_core::enumerate::{
    enumerate_formulas, for_each_structure, random_formula, random_structure, SplitMix64,
};
use ppml_core::semantics::DataKripkeModel;
use ppml_core::signature::{Signature, R_EQ};
use ppml_core::structure::PointedStructure;
use ppml_core::syntax::{DataGlFormula, PpmlFormula};

pub fn sig_ps() -> Signature {
    Signature::with_symbols([("p", 1), ("S", 2)]).unwrap()
}

/// All one-element structures over `sig` plus `extra` seeded random ones of
/// universe size at most `max_size`, deduplicated.
pub fn structure_pool(
    sig: &Signature,
    max_size: usize,
    extra: usize,
    seed: u64,
) -> Vec<PointedStructure> {
    let mut pool = Vec::new();
    for_each_structure(sig, 1, &mut |s| {
        pool.push(s.clone());
        true
    });
    let mut seen: BTreeSet<PointedStructure> = pool.iter().cloned().collect();
    let mut rng = SplitMix64::new(seed);
    let mut added = 0;
    while added < extra {
        let s = random_structure(sig, max_size, &mut rng);
        if seen.insert(s.clone()) {
            pool.push(s);
            added += 1;
        }
    }
    pool
}

/// Every formula with at most `connectives` connectives and depth at most
/// `depth`, extended by `extra` seeded random formulas of the same depth.
pub fn formula_pool(
    sig: &Signature,
    depth: usize,
    connectives: usize,
    extra: usize,
    seed: u64,
) -> Vec<PpmlFormula> {
    let mut pool = enumerate_formulas(sig, connectives, depth, false);
    let mut seen: BTreeSet<PpmlFormula> = pool.iter().cloned().collect();
    let mut rng = SplitMix64::new(seed);
    let mut added = 0;
    while added < extra {
        let f = random_formula(sig, depth, false, &mut rng);
        if ppml_core::syntax::modal_depth(&f) <= depth && seen.insert(f.clone()) {
            pool.push(f);
            added += 1;
        }
    }
    pool
}

/// A random valid data model: the relation is a transitively closed random
/// order on `1..=max_worlds` worlds, hence transitive irreflexive.
pub fn random_data_model(
    max_worlds: usize,
    props: &[&str],
    rng: &mut SplitMix64,
) -> DataKripkeModel {
    let n = 1 + rng.below(max_worlds);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.chance(2, 5) {
                edges.insert((u, v));
            }
        }
    }
    // transitive closure; edges only point upwards, so no cycles appear
    loop {
        let mut grew = false;
        let snapshot: Vec<(usize, usize)> = edges.iter().copied().collect();
        for &(u, v) in &snapshot {
            for &(v2, w) in &snapshot {
                if v == v2 && edges.insert((u, w)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let data: Vec<u64> = (0..n).map(|_| rng.below(3) as u64).collect();
    let declared: BTreeSet<String> = props.iter().map(|p| p.to_string()).collect();
    let props_of = (0..n)
        .map(|_| {
            declared
                .iter()
                .filter(|_| rng.chance(1, 3))
                .cloned()
                .collect()
        })
        .collect();
    DataKripkeModel::new(n, edges, data, declared, props_of).unwrap()
}

/// A random data formula of bounded depth.
pub fn random_datagl_formula(
    props: &[&str],
    depth: usize,
    rng: &mut SplitMix64,
) -> DataGlFormula {
    let choice = if depth == 0 { rng.below(4) } else { rng.below(8) };
    match choice {
        0 => DataGlFormula::Top,
        1 => DataGlFormula::Bot,
        2 | 3 => {
            if props.is_empty() {
                DataGlFormula::Top
            } else {
                DataGlFormula::prop(props[rng.below(props.len())])
            }
        }
        4 => DataGlFormula::not(random_datagl_formula(props, depth, rng)),
        5 => DataGlFormula::and(
            random_datagl_formula(props, depth - 1, rng),
            random_datagl_formula(props, depth - 1, rng),
        ),
        6 => DataGlFormula::diamond_eq(random_datagl_formula(props, depth - 1, rng)),
        _ => DataGlFormula::diamond_neq(random_datagl_formula(props, depth - 1, rng)),
    }
}

/// A random path formula over the data signature (atoms: propositions and
/// the equal-data symbol), without graded diamonds.
pub fn random_sigma_dgl_formula(
    props: &[&str],
    depth: usize,
    rng: &mut SplitMix64,
) -> PpmlFormula {
    let choice = if depth == 0 { rng.below(5) } else { rng.below(9) };
    match choice {
        0 => PpmlFormula::Top,
        1 => PpmlFormula::Bot,
        2 => PpmlFormula::atom(R_EQ),
        3 | 4 => {
            if props.is_empty() {
                PpmlFormula::Top
            } else {
                PpmlFormula::atom(props[rng.below(props.len())])
            }
        }
        5 => PpmlFormula::not(random_sigma_dgl_formula(props, depth, rng)),
        6 => PpmlFormula::and(
            random_sigma_dgl_formula(props, depth - 1, rng),
            random_sigma_dgl_formula(props, depth - 1, rng),
        ),
        _ => PpmlFormula::diamond(random_sigma_dgl_formula(props, depth - 1, rng)),
    }
}
