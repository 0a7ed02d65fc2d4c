//! Cross-module properties: parser round trips, debt rewriting against
//! evaluation, homomorphism search against counting, canonical codes against
//! explicit isomorphism search, product laws, and the characterisation of
//! trees as unravellings.

use proptest::prelude::*;

use ppml_core::comonad::unravel;
use ppml_core::enumerate::{for_each_pp_tree, random_structure, SplitMix64};
use ppml_core::fixtures::{sig_eps, sig_es};
use ppml_core::parse::{parse_datagl, parse_ppml};
use ppml_core::pptree::validate_pp_tree;
use ppml_core::semantics::eval_ppml;
use ppml_core::signature::Signature;
use ppml_core::structure::{count_homomorphisms, find_homomorphism, Homomorphism};
use ppml_core::syntax::{modal_debt, modal_depth, rewrite_well_nested, DataGlFormula, PpmlFormula};
use ppml_core::translate::standard_translation;
use ppml_core::PpTree;

fn arb_ppml() -> impl Strategy<Value = PpmlFormula> {
    let leaf = prop_oneof![
        Just(PpmlFormula::Top),
        Just(PpmlFormula::Bot),
        prop_oneof![Just("p"), Just("S"), Just("q_1")].prop_map(PpmlFormula::atom),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(PpmlFormula::not),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| PpmlFormula::and(l, r)),
            inner.clone().prop_map(PpmlFormula::diamond),
            (1u32..4, inner).prop_map(|(n, f)| PpmlFormula::graded(n, f)),
        ]
    })
}

fn arb_datagl() -> impl Strategy<Value = DataGlFormula> {
    let leaf = prop_oneof![
        Just(DataGlFormula::Top),
        Just(DataGlFormula::Bot),
        prop_oneof![Just("p"), Just("q")].prop_map(DataGlFormula::prop),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(DataGlFormula::not),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| DataGlFormula::and(l, r)),
            inner.clone().prop_map(DataGlFormula::diamond_eq),
            inner.prop_map(DataGlFormula::diamond_neq),
        ]
    })
}

fn test_signature() -> Signature {
    Signature::with_symbols([("p", 1), ("S", 2), ("q_1", 1)]).unwrap()
}

proptest! {
    #[test]
    fn parse_print_round_trip_ppml(f in arb_ppml()) {
        let printed = f.to_string();
        prop_assert_eq!(parse_ppml(&printed).unwrap(), f);
    }

    #[test]
    fn parse_print_round_trip_datagl(f in arb_datagl()) {
        let printed = f.to_string();
        prop_assert_eq!(parse_datagl(&printed).unwrap(), f);
    }

    #[test]
    fn rewrite_always_reaches_zero_debt(f in arb_ppml()) {
        let sig = test_signature();
        let rewritten = rewrite_well_nested(&f, &sig).unwrap();
        prop_assert_eq!(modal_debt(&rewritten, &sig).unwrap(), 0);
    }

    #[test]
    fn rewrite_preserves_single_pointed_truth(f in arb_ppml(), seed in 0u64..500) {
        let sig = test_signature();
        let mut rng = SplitMix64::new(seed);
        let a = random_structure(&sig, 5, &mut rng);
        let rewritten = rewrite_well_nested(&f, &sig).unwrap();
        for start in 0..a.universe_size() {
            prop_assert_eq!(
                eval_ppml(&a, &[start], &f).unwrap(),
                eval_ppml(&a, &[start], &rewritten).unwrap()
            );
        }
    }

    #[test]
    fn translation_depth_equals_quantifier_rank(f in arb_ppml()) {
        let sig = test_signature();
        if f.has_graded() {
            return Ok(());
        }
        let fol = standard_translation(&f, &sig).unwrap();
        prop_assert_eq!(fol.quantifier_rank(), modal_depth(&f));
        let width = sig.max_arity();
        prop_assert!(fol.variables().iter().all(|&v| v < width));
    }

    #[test]
    fn find_iff_positive_count(seed in 0u64..300) {
        let sig = sig_eps();
        let mut rng = SplitMix64::new(seed);
        let dom = random_structure(&sig, 4, &mut rng);
        let cod = random_structure(&sig, 4, &mut rng);
        let found = find_homomorphism(&dom, &cod).unwrap();
        let count = count_homomorphisms(&dom, &cod).unwrap();
        prop_assert_eq!(found.is_some(), count > 0);
    }

    #[test]
    fn product_is_symmetric_up_to_iso(seed in 0u64..200) {
        let sig = sig_es();
        let mut rng = SplitMix64::new(seed);
        let x = random_structure(&sig, 3, &mut rng);
        let y = random_structure(&sig, 3, &mut rng);
        let xy = x.product(&y).unwrap();
        let yx = y.product(&x).unwrap();
        // the pair swap (i, j) -> (j, i) is an isomorphism
        let m = y.universe_size();
        let n = x.universe_size();
        let swap: Vec<usize> = (0..n * m).map(|c| (c % m) * n + c / m).collect();
        let iso = Homomorphism::new(xy, yx, swap).unwrap();
        prop_assert!(iso.is_isomorphism());
    }

    #[test]
    fn product_edge_counts_multiply(seed in 0u64..200) {
        let sig = sig_es();
        let mut rng = SplitMix64::new(seed);
        let x = random_structure(&sig, 4, &mut rng);
        let y = random_structure(&sig, 4, &mut rng);
        let p = x.product(&y).unwrap();
        let ex = x.interpretation("E").unwrap().len();
        let ey = y.interpretation("E").unwrap().len();
        prop_assert_eq!(p.interpretation("E").unwrap().len(), ex * ey);
    }

    #[test]
    fn unravellings_validate_with_height_bound(seed in 0u64..200, k in 0usize..4) {
        let sig = sig_eps();
        let mut rng = SplitMix64::new(seed);
        let a = random_structure(&sig, 4, &mut rng);
        let u = unravel(&a, k);
        let revalidated = validate_pp_tree(u.structure()).unwrap();
        prop_assert!(revalidated.tree_height() <= k);
    }
}

/// Exhaustive search for an isomorphism: all basepoint-preserving bijections
/// checked for strongness. Independent of canonical codes.
fn isomorphic_by_search(t1: &PpTree, t2: &PpTree) -> bool {
    let n = t1.node_count();
    if n != t2.node_count() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm over all permutations
    fn heaps(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heaps(perm, k - 1, out);
            if k.is_multiple_of(2) {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    let mut all = Vec::new();
    heaps(&mut perm, n, &mut all);
    for p in all {
        if p[t1.structure().basepoint()] != t2.structure().basepoint() {
            continue;
        }
        if let Ok(h) = Homomorphism::new(t1.structure().clone(), t2.structure().clone(), p) {
            if h.is_isomorphism() {
                return true;
            }
        }
    }
    false
}

#[test]
fn canonical_codes_agree_with_isomorphism_search() {
    // every pair from a family of small trees, codes vs explicit search
    let sig = sig_es();
    let mut trees: Vec<PpTree> = Vec::new();
    for_each_pp_tree(&sig, 4, 3, 3, &mut |t| {
        trees.push(t.clone());
        true
    });
    // thin the family to keep the quadratic pair sweep quick
    let sample: Vec<&PpTree> = trees.iter().step_by(7).collect();
    for (i, t1) in sample.iter().enumerate() {
        for t2 in sample.iter().skip(i) {
            let by_code = t1.canonical_code() == t2.canonical_code();
            let by_search = isomorphic_by_search(t1, t2);
            assert_eq!(by_code, by_search, "codes and search disagree");
        }
    }
}

#[test]
fn trees_are_exactly_their_own_unravellings() {
    let sig = sig_es();
    for_each_pp_tree(&sig, 5, 2, 3, &mut |t| {
        let height = t.tree_height();
        // unravelling at the height reproduces the tree up to isomorphism
        let again = unravel(t.structure(), height);
        assert_eq!(again.tree().canonical_code(), t.canonical_code());
        // a smaller budget truncates it
        if height > 0 {
            let truncated = unravel(t.structure(), height - 1);
            assert_ne!(truncated.tree().canonical_code(), t.canonical_code());
        }
        true
    });
}

/// Reference recursion over full valuations, no truncation or memoisation.
fn naive_eval(
    a: &ppml_core::PointedStructure,
    s: &[usize],
    f: &PpmlFormula,
) -> bool {
    match f {
        PpmlFormula::Top => true,
        PpmlFormula::Bot => false,
        PpmlFormula::Atom(name) => a.atom_true(name, s).unwrap(),
        PpmlFormula::Not(g) => !naive_eval(a, s, g),
        PpmlFormula::And(l, r) => naive_eval(a, s, l) && naive_eval(a, s, r),
        PpmlFormula::Diamond(g) => a.successors(*s.last().unwrap()).iter().any(|&x| {
            let mut e = s.to_vec();
            e.push(x);
            naive_eval(a, &e, g)
        }),
        PpmlFormula::GradedDiamond(n, g) => {
            let hits = a
                .successors(*s.last().unwrap())
                .iter()
                .filter(|&&x| {
                    let mut e = s.to_vec();
                    e.push(x);
                    naive_eval(a, &e, g)
                })
                .count();
            hits >= n.get() as usize
        }
    }
}

#[test]
fn window_truncation_agrees_with_naive_reference() {
    // the memory-window evaluator and the full-valuation recursion agree on
    // every chain of the structure, including long ones
    let sig = sig_eps();
    let mut rng = SplitMix64::new(23);
    for _ in 0..120 {
        let a = random_structure(&sig, 5, &mut rng);
        let f = ppml_core::enumerate::random_formula(&sig, 3, true, &mut rng);
        for s in ppml_core::enumerate::all_chains(&a, 4) {
            assert_eq!(
                eval_ppml(&a, &s, &f).unwrap(),
                naive_eval(&a, &s, &f),
                "window evaluation of {f} at {s:?}"
            );
        }
    }
}

#[test]
fn unravelling_is_idempotent_up_to_codes() {
    let sig = sig_eps();
    let mut rng = SplitMix64::new(31);
    for _ in 0..80 {
        let a = random_structure(&sig, 4, &mut rng);
        for k in 0..=3 {
            let once = unravel(&a, k);
            let twice = unravel(once.structure(), k);
            assert_eq!(
                once.tree().canonical_code(),
                twice.tree().canonical_code(),
                "repeated unravelling changed the tree at k = {k}"
            );
        }
    }
}

#[test]
fn spans_are_sound_on_random_pairs() {
    use ppml_core::games::{build_bisim_span, duplicator_wins, is_bounded_morphism, GameMode};
    let sig = sig_eps();
    let mut rng = SplitMix64::new(37);
    let mut built = 0usize;
    for _ in 0..150 {
        let a = random_structure(&sig, 4, &mut rng);
        let b = random_structure(&sig, 4, &mut rng);
        let k = rng.below(3);
        match build_bisim_span(&a, &b, k).unwrap() {
            None => assert!(!duplicator_wins(&a, &b, k, GameMode::Bisim).unwrap()),
            Some((apex, left, right)) => {
                built += 1;
                assert!(apex.tree_height() <= k);
                assert!(is_bounded_morphism(&left));
                assert!(is_bounded_morphism(&right));
            }
        }
    }
    assert!(built > 0, "no spans were ever built");
}

#[test]
fn flattening_round_trips_on_random_trees() {
    use ppml_core::translate::{k_inverse, k_translate};
    let sig = sig_eps();
    let mut rng = SplitMix64::new(41);
    for _ in 0..80 {
        let a = random_structure(&sig, 4, &mut rng);
        let t = unravel(&a, 3);
        let back = k_inverse(&k_translate(t.tree()), &sig).unwrap();
        assert_eq!(back.structure(), t.structure());
    }
}

#[test]
fn codes_respect_relabelling_on_larger_trees() {
    // seven- and eight-node trees: codes are invariant under relabelling and
    // split structurally different trees
    let sig = sig_es();
    let mut rng = SplitMix64::new(43);
    let mut larger: Vec<ppml_core::PpTree> = Vec::new();
    for_each_pp_tree(&sig, 8, 3, 7, &mut |t| {
        if t.node_count() >= 7 && rng.chance(1, 50) {
            larger.push(t.clone());
        }
        larger.len() < 12
    });
    assert!(larger.len() >= 4);
    for t in &larger {
        let n = t.node_count();
        let perm: Vec<usize> = (0..n).map(|v| (v * 5 + 3) % n).collect();
        if let Ok(relabelled) = t.structure().relabelled(&perm) {
            let t2 = validate_pp_tree(&relabelled).unwrap();
            assert_eq!(t.canonical_code(), t2.canonical_code());
        }
    }
    for (i, t1) in larger.iter().enumerate() {
        for t2 in larger.iter().skip(i + 1) {
            if t1.canonical_code() == t2.canonical_code() {
                // codes may legitimately collide only for isomorphic trees;
                // the iso-search oracle below is feasible at eight nodes
                assert!(isomorphic_by_search(t1, t2));
            }
        }
    }
}

#[test]
fn game_hierarchy_and_symmetry() {
    use ppml_core::games::{decide_graded_bisim, duplicator_wins, GameMode};
    let sig = sig_eps();
    let mut rng = SplitMix64::new(47);
    for _ in 0..200 {
        let a = random_structure(&sig, 4, &mut rng);
        let b = random_structure(&sig, 4, &mut rng);
        for k in 0..=3 {
            let bisim = duplicator_wins(&a, &b, k, GameMode::Bisim).unwrap();
            // both relations are symmetric
            assert_eq!(bisim, duplicator_wins(&b, &a, k, GameMode::Bisim).unwrap());
            let graded = decide_graded_bisim(&a, &b, k, None).unwrap();
            assert_eq!(graded, decide_graded_bisim(&b, &a, k, None).unwrap());
            // graded equivalence refines the plain one, which refines
            // mutual simulation
            if graded {
                assert!(bisim);
            }
            if bisim {
                assert!(duplicator_wins(&a, &b, k, GameMode::Sim).unwrap());
                assert!(duplicator_wins(&b, &a, k, GameMode::Sim).unwrap());
            }
            // fewer rounds can only help Duplicator
            if k > 0 && bisim {
                assert!(duplicator_wins(&a, &b, k - 1, GameMode::Bisim).unwrap());
            }
            if k > 0 && graded {
                assert!(decide_graded_bisim(&a, &b, k - 1, None).unwrap());
            }
        }
        // every structure is equivalent to itself under all three relations
        for k in 0..=2 {
            assert!(duplicator_wins(&a, &a, k, GameMode::Bisim).unwrap());
            assert!(decide_graded_bisim(&a, &a, k, None).unwrap());
        }
    }
}

#[test]
fn graded_one_is_plain_diamond_everywhere() {
    let sig = sig_eps();
    let mut rng = SplitMix64::new(11);
    for _ in 0..60 {
        let a = random_structure(&sig, 4, &mut rng);
        let f = ppml_core::enumerate::random_formula(&sig, 2, false, &mut rng);
        for start in 0..a.universe_size() {
            assert_eq!(
                eval_ppml(&a, &[start], &PpmlFormula::graded(1, f.clone())).unwrap(),
                eval_ppml(&a, &[start], &PpmlFormula::diamond(f.clone())).unwrap()
            );
        }
    }
}
