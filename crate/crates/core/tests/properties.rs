use std::collections::HashSet;

use growthlab_core::contracting::{
    barrier_witnesses, portion_from_witnesses, project, projection_diameter, Axis,
};
use growthlab_core::subgroup::{canonical_rep, stallings_from_generators, StallingsGraph};
use growthlab_core::{ball, GroupOracle, Word};
use proptest::prelude::*;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop::sample::select(vec!['a', 'A', 'b', 'B']), 0..=max_len)
        .prop_map(|cs| Word::parse(&cs.into_iter().collect::<String>()).unwrap())
}

/// Nontrivial reduced words in the free group.
fn nontrivial(max_len: usize) -> impl Strategy<Value = Word> {
    let oracle = f2();
    word(max_len).prop_filter_map("trivial", move |w| oracle.normal_form(&w).ok().filter(|w| !w.is_empty()))
}

fn f2() -> GroupOracle {
    GroupOracle::free(2).unwrap()
}

fn oracles() -> Vec<GroupOracle> {
    vec![f2(), GroupOracle::free_product(vec![Some(2), None]).unwrap(), GroupOracle::free_product(vec![Some(2), Some(3)]).unwrap()]
}

fn subgroup(gens: &[&str]) -> StallingsGraph {
    let gens: Vec<Word> = gens.iter().map(|g| Word::parse(g).unwrap()).collect();
    stallings_from_generators(&f2(), &gens).unwrap()
}

/// A product of random generators of `H` and their inverses.
fn subgroup_element(gens: &[&str], picks: &[(usize, bool)]) -> Word {
    let oracle = f2();
    let mut w = Word::identity();
    for &(i, inv) in picks {
        let g = Word::parse(gens[i % gens.len()]).unwrap();
        let g = if inv { g.formal_inverse() } else { g };
        w = oracle.multiply(&w, &g).unwrap();
    }
    w
}

const PAIRS: [(&[&str], &[&str]); 4] = [
    (&["a"], &["a"]),
    (&["aa", "b"], &["baB"]),
    (&["ab"], &["b", "aaa"]),
    (&[], &["abA"]),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normal_form_is_idempotent_and_multiplicative(u in word(10), v in word(10), which in 0usize..3) {
        let g = &oracles()[which];
        let nu = g.normal_form(&u).unwrap();
        prop_assert_eq!(g.normal_form(&nu).unwrap(), nu.clone());
        let nv = g.normal_form(&v).unwrap();
        prop_assert_eq!(g.normal_form(&u.concat(&v)).unwrap(), g.multiply(&nu, &nv).unwrap());
        prop_assert!(g.multiply(&nu, &g.invert(&nu).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn word_metric_is_a_metric(u in word(8), v in word(8), w in word(8), which in 0usize..3) {
        let g = &oracles()[which];
        let (u, v, w) = (g.normal_form(&u).unwrap(), g.normal_form(&v).unwrap(), g.normal_form(&w).unwrap());
        let d = |x: &Word, y: &Word| g.distance(x, y).unwrap();
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert_eq!(d(&u, &u), 0);
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w));
    }

    #[test]
    fn geodesics_step_one_edge_at_a_time(u in word(10), which in 0usize..3) {
        let g = &oracles()[which];
        let path = g.geodesic(&u).unwrap();
        let n = g.word_length(&u).unwrap();
        prop_assert_eq!(path.len(), n + 1);
        for (i, x) in path.iter().enumerate() {
            prop_assert_eq!(g.word_length(x).unwrap(), i);
        }
        for pair in path.windows(2) {
            prop_assert_eq!(g.distance(&pair[0], &pair[1]).unwrap(), 1);
        }
    }

    #[test]
    fn membership_matches_generated_elements(pair in 0usize..4, picks in proptest::collection::vec((0usize..4, any::<bool>()), 0..5), noise in word(6)) {
        let gens = PAIRS[pair].1;
        let h = subgroup(gens);
        let x = subgroup_element(gens, &picks);
        prop_assert!(h.membership(&x));
        let noise = f2().normal_form(&noise).unwrap();
        let listed: HashSet<Word> = h.elements(noise.len()).into_iter().collect();
        prop_assert_eq!(h.membership(&noise), listed.contains(&noise));
    }

    #[test]
    fn canonical_rep_is_a_double_coset_invariant(
        pair in 0usize..4,
        g in word(6),
        left in proptest::collection::vec((0usize..4, any::<bool>()), 0..4),
        right in proptest::collection::vec((0usize..4, any::<bool>()), 0..4),
    ) {
        let oracle = f2();
        let (hg, kg) = PAIRS[pair];
        let (h, k) = (subgroup(hg), subgroup(kg));
        let g = oracle.normal_form(&g).unwrap();
        let rep = canonical_rep(&h, &k, &g);
        let x = if hg.is_empty() { Word::identity() } else { subgroup_element(hg, &left) };
        let y = subgroup_element(kg, &right);
        let moved = oracle.multiply(&oracle.multiply(&x, &g).unwrap(), &y).unwrap();
        prop_assert_eq!(canonical_rep(&h, &k, &moved), rep.clone());
        prop_assert!(rep.len() <= g.len());
    }

    #[test]
    fn axis_points_project_to_themselves(f in nontrivial(5), n in -4i64..=4) {
        let oracle = f2();
        let axis = Axis::new(&oracle, &f).unwrap();
        let x = axis.vertex(n);
        prop_assert_eq!(project(&oracle, &axis, &x).unwrap(), vec![x]);
    }

    #[test]
    fn projection_is_equivariant(f in nontrivial(4), g in word(5), x in word(6)) {
        let oracle = f2();
        let (g, x) = (oracle.normal_form(&g).unwrap(), oracle.normal_form(&x).unwrap());
        let axis = Axis::new(&oracle, &f).unwrap();
        let moved = axis.translated(&oracle, &g).unwrap();
        let mut expected: Vec<Word> = project(&oracle, &axis, &x).unwrap().iter().map(|p| oracle.multiply(&g, p).unwrap()).collect();
        let mut got = project(&oracle, &moved, &oracle.multiply(&g, &x).unwrap()).unwrap();
        expected.sort();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn barrier_witnesses_lie_near_the_path(g in word(9), f in nontrivial(3), epsilon in 0usize..=1, l_min in 1usize..4) {
        let oracle = f2();
        let g = oracle.normal_form(&g).unwrap();
        let path = oracle.geodesic(&g).unwrap();
        let witnesses = barrier_witnesses(&oracle, &path, epsilon, &f).unwrap();
        let near = |x: &Word| path.iter().map(|p| oracle.distance(p, x).unwrap()).min().unwrap();
        for w in &witnesses {
            prop_assert!(near(&w.witness) <= epsilon);
            prop_assert!(near(&oracle.multiply(&w.witness, &f).unwrap()) <= epsilon);
        }
        let portion = portion_from_witnesses(g.len(), &witnesses, l_min);
        prop_assert!((0.0..=1.0).contains(&portion));
        if witnesses.is_empty() && !g.is_empty() {
            prop_assert_eq!(portion, 1.0);
        }
    }
}

#[test]
fn balls_are_closed_under_neighbours() {
    for oracle in oracles() {
        let inner = ball(&oracle, 3).unwrap();
        let outer: HashSet<Word> = ball(&oracle, 4).unwrap().to_vec().into_iter().collect();
        for r in 0..=3 {
            assert!(inner.sphere(r).iter().all(|w| oracle.word_length(w).unwrap() == r));
        }
        for w in inner.iter() {
            for x in ["a", "A", "b", "B"] {
                let n = oracle.multiply(w, &oracle.normal_form(&Word::parse(x).unwrap()).unwrap()).unwrap();
                assert!(outer.contains(&n), "{w}{x}");
            }
        }
    }
}

#[test]
fn subgroup_elements_have_bounded_axis_projection() {
    let oracle = f2();
    let axis = Axis::new(&oracle, &Word::parse("a").unwrap()).unwrap();
    for h in subgroup(&["b"]).elements(6) {
        assert_eq!(projection_diameter(&oracle, &axis, &oracle.geodesic(&h).unwrap()).unwrap(), 0);
    }
}
