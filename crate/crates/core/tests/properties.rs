use fano_bott::genfun::{f_from_t, plethystic_log_sum, solve_by_euler_iteration, solve_by_exp_iteration, t_from_f};
use fano_bott::toric::{primitive_relation, RelationKind};
use fano_bott::{
    are_equivalent, cactus_to_forest, canonical_code, count_indecomposable_diffeo_classes, enumerate_tree_classes,
    fan_to_forest, forest_class_to_cactus, forest_to_fan, is_fano, solve_functional_equation, BottFan, Cactus,
    Relation, Sign, SignedForest,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RELATIONS: [Relation; 3] = [Relation::Iso, Relation::Sim, Relation::Approx];

/// Random signed forest on up to `max_n` vertices with shuffled labels.
fn forest(max_n: usize) -> impl Strategy<Value = SignedForest> {
    (0..=max_n).prop_flat_map(|n| {
        let choices = (0..n).map(|v| (0..=v, any::<bool>())).collect::<Vec<_>>();
        let labels = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (choices, labels).prop_map(move |(choices, labels)| {
            let mut parent = vec![None; n];
            let mut sign = vec![None; n];
            for (v, &(p, minus)) in choices.iter().enumerate() {
                if p < v {
                    parent[labels[v]] = Some(labels[p]);
                    sign[labels[v]] = Some(if minus { Sign::Minus } else { Sign::Plus });
                }
            }
            SignedForest::new(parent, sign).unwrap()
        })
    })
}

fn forest_and_vertex(max_n: usize) -> impl Strategy<Value = (SignedForest, usize)> {
    forest(max_n)
        .prop_filter("non-empty", |f| !f.is_empty())
        .prop_flat_map(|f| {
            let n = f.len();
            (Just(f), 0..n)
        })
}

fn forest_and_permutation(max_n: usize) -> impl Strategy<Value = (SignedForest, Vec<usize>)> {
    forest(max_n).prop_flat_map(|f| {
        let n = f.len();
        (Just(f), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })
}

/// Disjoint union with `b`'s vertices shifted past `a`'s.
fn disjoint_union(a: &SignedForest, b: &SignedForest) -> SignedForest {
    let shift = a.len();
    let parent = a
        .parents()
        .iter()
        .copied()
        .chain(b.parents().iter().map(|p| p.map(|p| p + shift)))
        .collect();
    let sign = a.signs().iter().chain(b.signs()).copied().collect();
    SignedForest::new(parent, sign).unwrap()
}

proptest! {
    #[test]
    fn flips_are_commuting_involutions((f, i) in forest_and_vertex(10), j in 0usize..10) {
        let j = j % f.len();
        prop_assert_eq!(f.apply_r(i).unwrap().apply_r(i).unwrap(), f.clone());
        let ij = f.apply_r(i).unwrap().apply_r(j).unwrap();
        let ji = f.apply_r(j).unwrap().apply_r(i).unwrap();
        prop_assert_eq!(ij, ji);
    }

    #[test]
    fn codes_are_relabeling_invariant((f, perm) in forest_and_permutation(10)) {
        let g = f.relabel(&perm).unwrap();
        for rel in RELATIONS {
            prop_assert_eq!(canonical_code(&f, rel), canonical_code(&g, rel));
        }
    }

    #[test]
    fn sim_and_approx_codes_ignore_flips((f, i) in forest_and_vertex(10)) {
        let g = f.apply_r(i).unwrap();
        prop_assert_eq!(canonical_code(&f, Relation::Sim), canonical_code(&g, Relation::Sim));
        prop_assert_eq!(canonical_code(&f, Relation::Approx), canonical_code(&g, Relation::Approx));
    }

    #[test]
    fn approx_codes_ignore_root_edge_signs(f in forest(10), mask in any::<u16>()) {
        let mut sign = f.signs().to_vec();
        for (v, s) in sign.iter_mut().enumerate() {
            if f.parent(v).is_some_and(|p| f.is_root(p)) && mask >> v & 1 == 1 {
                *s = s.map(Sign::flip);
            }
        }
        let g = SignedForest::new(f.parents().to_vec(), sign).unwrap();
        prop_assert_eq!(canonical_code(&f, Relation::Approx), canonical_code(&g, Relation::Approx));
    }

    #[test]
    fn relations_are_nested((f, perm) in forest_and_permutation(8), mask in any::<u64>()) {
        let g = f.relabel(&perm).unwrap().apply_r_mask(mask);
        prop_assert!(are_equivalent(&f, &g, Relation::Sim).unwrap());
        prop_assert!(are_equivalent(&f, &g, Relation::Approx).unwrap());
        if are_equivalent(&f, &g, Relation::Iso).unwrap() {
            prop_assert!(are_equivalent(&f, &g, Relation::Sim).unwrap());
        }
    }

    #[test]
    fn decoded_code_is_equivalent(f in forest(12)) {
        for rel in RELATIONS {
            let code = canonical_code(&f, rel);
            let back = code.decode();
            prop_assert_eq!(canonical_code(&back, rel), code);
        }
    }

    #[test]
    fn forest_codes_factor_through_components(a in forest(6), b in forest(6)) {
        for rel in RELATIONS {
            prop_assert_eq!(
                canonical_code(&disjoint_union(&a, &b), rel),
                canonical_code(&disjoint_union(&b, &a), rel)
            );
        }
    }

    #[test]
    fn json_round_trip(f in forest(12)) {
        let text = f.to_json().to_string();
        prop_assert_eq!(SignedForest::from_json_str(&text).unwrap(), f);
    }

    #[test]
    fn fan_round_trip(f in forest(7)) {
        let fan = forest_to_fan(&f);
        let fan = BottFan::validate(&fan.rows()).unwrap();
        prop_assert!(is_fano(&fan).unwrap().is_fano);
        prop_assert_eq!(fan_to_forest(&fan).unwrap(), f);
    }

    #[test]
    fn op1_acts_as_a_flip((f, i) in forest_and_vertex(7)) {
        let fan = forest_to_fan(&f).apply_op1(i).unwrap();
        let g = fan_to_forest(&fan).unwrap();
        prop_assert_eq!(&g, &f.apply_r(i).unwrap());
        prop_assert!(are_equivalent(&f, &g, Relation::Sim).unwrap());
    }

    #[test]
    fn op2_acts_as_a_relabeling((f, perm) in forest_and_permutation(7)) {
        let g = fan_to_forest(&forest_to_fan(&f).apply_op2(&perm).unwrap()).unwrap();
        prop_assert!(are_equivalent(&f, &g, Relation::Iso).unwrap());
    }

    #[test]
    fn relation_degrees_by_kind(f in forest(7)) {
        let fan = forest_to_fan(&f);
        for i in 0..f.len() {
            let r = primitive_relation(&fan, i).unwrap();
            match r.kind {
                RelationKind::Zero => prop_assert_eq!(r.degree, 2),
                RelationKind::Parent { .. } => prop_assert_eq!(r.degree, 1),
                RelationKind::General { .. } => prop_assert!(false, "forest fans have no general relations"),
            }
        }
    }

    #[test]
    fn cactus_is_a_class_function((f, i) in forest_and_vertex(10)) {
        prop_assert_eq!(forest_class_to_cactus(&f), forest_class_to_cactus(&f.apply_r(i).unwrap()));
    }

    #[test]
    fn cactus_round_trip(f in forest(10)) {
        let c = forest_class_to_cactus(&f);
        prop_assert_eq!(c.size(), f.len());
        let g = c.to_graph();
        prop_assert_eq!(g.vertex_count, 2 * f.len() + 1);
        prop_assert!(g.check().is_ok());
        prop_assert!(are_equivalent(&cactus_to_forest(&c), &f, Relation::Sim).unwrap());
        prop_assert_eq!(Cactus::from_json_str(&c.to_json().to_string()).unwrap(), c);
    }
}

/// Random unimodular matrix as a product of elementary row operations.
fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
    for _ in 0..3 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            m[a].iter_mut().for_each(|x| *x = -*x);
            continue;
        }
        let k = rng.gen_range(-2..=2);
        let row_b = m[b].clone();
        for (x, y) in m[a].iter_mut().zip(row_b) {
            *x += k * y;
        }
    }
    m
}

#[test]
fn gl_transforms_preserve_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let fans = [
        vec![
            vec![1, 0, 0, -1, 0, 0],
            vec![1, 1, 0, 0, -1, -1],
            vec![0, 0, 1, 0, 0, -1],
        ],
        vec![
            vec![1, 0, 0, -1, 0, 0],
            vec![1, 1, 0, 0, -1, 0],
            vec![1, 0, 1, 0, 1, -1],
        ],
    ];
    for trial in 0..100 {
        let fan = BottFan::validate(&fans[trial % 2]).unwrap();
        let a = random_unimodular(3, &mut rng);
        let moved = fan.transform(&a).unwrap();
        let before: Vec<i64> = is_fano(&fan).unwrap().relations.iter().map(|r| r.degree).collect();
        let after: Vec<i64> = is_fano(&moved).unwrap().relations.iter().map(|r| r.degree).collect();
        assert_eq!(before, after, "trial {trial}, A = {a:?}");
    }
}

#[test]
fn single_root_approx_classes_count_forests_one_smaller() {
    let gf = solve_functional_equation(8);
    for n in 1..=8 {
        let trees = enumerate_tree_classes(n, Relation::Approx).unwrap().len();
        assert_eq!(BigInt::from(trees), *gf.f_n(n - 1), "n={n}");
        assert_eq!(count_indecomposable_diffeo_classes(n).unwrap(), trees);
    }
}

#[test]
fn generating_function_routes_agree_to_order_64() {
    let order = 64;
    let solved = solve_functional_equation(order);
    assert_eq!(solve_by_euler_iteration(order).unwrap(), solved);
    assert_eq!(solve_by_exp_iteration(order).unwrap(), solved);
    assert_eq!(t_from_f(&solved.f).unwrap(), solved.t);
    assert_eq!(f_from_t(&solved.t).unwrap(), solved.f);
    let log_sum = plethystic_log_sum(&solved.t);
    assert_eq!(solved.f.to_rational().log().unwrap(), log_sum);
    assert_eq!(log_sum.exp().unwrap(), solved.f.to_rational());
}
