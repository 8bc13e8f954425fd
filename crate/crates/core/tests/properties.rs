use std::sync::OnceLock;

use csa_core::arrangement::{bit, bits, build_csg, full_set, Arrangement, HSet};
use csa_core::budget::Budget;
use csa_core::exactlin::{RatVector, Subspace};
use csa_core::formality::{generation_closure, line_closure, GenerationMode};
use csa_core::tables::{bn_table, delta_table, ReproducedTable};
use csa_core::{Graph, IntersectionLattice};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

/// Random tree plus extra edges on `n` vertices.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<u32>(), n - 1), any::<u32>()))
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = (2..=n).map(|v| (parents[v - 2] as usize % (v - 1) + 1, v)).collect();
            let mut k = 0;
            for a in 1..=n {
                for b in a + 1..=n {
                    if extra >> (k % 32) & 1 == 1 && !edges.contains(&(a, b)) {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            Graph::new(n, &edges).unwrap()
        })
}

fn graph_and_sets(max_n: usize) -> impl Strategy<Value = (Arrangement, HSet, HSet)> {
    connected_graph(max_n).prop_flat_map(|g| {
        let a = build_csg(&g).unwrap();
        let m = a.len();
        let mask = full_set(m);
        (Just(a), any::<u128>().prop_map(move |x| x & mask), any::<u128>().prop_map(move |x| x & mask))
    })
}

fn nonempty(s: HSet) -> HSet {
    if s == 0 {
        1
    } else {
        s
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn line_closure_is_a_closure_operator((a, s, t) in graph_and_sets(5)) {
        let s = nonempty(s);
        let cs = line_closure(&a, s).unwrap().result_set();
        prop_assert_eq!(cs & s, s);
        prop_assert_eq!(line_closure(&a, cs).unwrap().result_set(), cs);
        let ct = line_closure(&a, s | t).unwrap().result_set();
        prop_assert_eq!(cs & ct, cs);
        // closed: every pair's localization is inside
        let members: Vec<usize> = bits(cs).collect();
        for (i, &h) in members.iter().enumerate() {
            for &k in &members[i + 1..] {
                prop_assert_eq!(a.closure(bit(h) | bit(k)) & !cs, 0);
            }
        }
    }

    #[test]
    fn generation_closure_is_extensive_and_idempotent((a, s, _t) in graph_and_sets(4)) {
        let s = nonempty(s);
        let b = Budget::default();
        let c = generation_closure(&a, s, GenerationMode::Pair, &b).unwrap().result_set();
        prop_assert_eq!(c & s, s);
        prop_assert_eq!(generation_closure(&a, c, GenerationMode::Pair, &b).unwrap().result_set(), c);
        let e = generation_closure(&a, s, GenerationMode::Exponential, &b).unwrap().result_set();
        prop_assert_eq!(c & e, c);
    }
}

fn small_arrangement() -> impl Strategy<Value = Arrangement> {
    (2usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(-2i64..=2, n), 1..=7).prop_map(move |rows| {
            let rows: Vec<Vec<i64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
            if rows.is_empty() {
                Arrangement::from_normals(n, &[vec![1; n]]).unwrap()
            } else {
                Arrangement::from_normals(n, &rows).unwrap()
            }
        })
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn mobius_recursion(a in small_arrangement()) {
        let l = IntersectionLattice::new(&a).unwrap();
        let flats = l.flats();
        for x in flats {
            // order by inclusion of the hyperplane sets, checked against subspaces
            let below: i64 = flats.iter().filter(|y| y.closed & x.closed == y.closed).map(|y| y.mobius).sum();
            prop_assert_eq!(below, if x.closed == 0 { 1 } else { 0 });
            prop_assert_eq!(a.closure(x.closed), x.closed);
            prop_assert_eq!(a.rank_of_set(x.closed), x.rank);
        }
        prop_assert_eq!(l.characteristic_polynomial().eval(1), if a.is_empty() { 1 } else { 0 });
    }
}

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), 0..=n).prop_map(move |rows| {
        let normals: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        Subspace::kernel_of_all(n, &normals)
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn modular_law((u, v, w) in (2usize..=5).prop_flat_map(|n| (subspace(n), subspace(n), subspace(n)))) {
        let dim_sum = u.sum(&v).unwrap().dim();
        let dim_meet = u.intersect(&v).unwrap().dim();
        prop_assert_eq!(dim_sum + dim_meet, u.dim() + v.dim());
        // U ⊆ W  ⟹  U + (V ∩ W) = (U + V) ∩ W
        let u = u.intersect(&w).unwrap();
        let left = u.sum(&v.intersect(&w).unwrap()).unwrap();
        let right = u.sum(&v).unwrap().intersect(&w).unwrap();
        prop_assert_eq!(left.dim(), right.dim());
        prop_assert!(left.contains(&right) && right.contains(&left));
        for b in u.basis() {
            prop_assert!(w.contains_vector(b));
        }
        let zero = RatVector::zeros(u.ambient_dim());
        prop_assert!(u.contains_vector(&zero));
    }
}

fn tables() -> &'static Vec<ReproducedTable> {
    static T: OnceLock<Vec<ReproducedTable>> = OnceLock::new();
    T.get_or_init(|| {
        let mut v: Vec<ReproducedTable> = (2..=5).map(|n| bn_table(n).unwrap()).collect();
        v.extend((2..=4).map(|n| delta_table(n).unwrap()));
        v
    })
}

fn sorted_nonzero(v: &[usize]) -> Vec<u64> {
    let mut v: Vec<u64> = v.iter().filter(|&&x| x > 0).map(|&x| x as u64).collect();
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(config())]

    /// Each row's exponents agree with the Poincaré polynomials of `A'_i` and `A''_i`.
    #[test]
    fn table_rows_reverify(t in 0usize..7, r in any::<prop::sample::Index>()) {
        let tab = &tables()[t];
        let i = r.index(tab.table.rows.len());
        let row = &tab.table.rows[i];
        let before: HSet = tab.script[..i].iter().fold(0, |m, &(h, _)| m | bit(h));
        let a_before = tab.arrangement.subarrangement(before);
        let pi = IntersectionLattice::new(&a_before).unwrap().poincare_polynomial();
        let mut got = pi.factor_one_plus().unwrap_or_default();
        got.sort_unstable();
        prop_assert_eq!(got, sorted_nonzero(&row.exp_before));
        let with_h = tab.arrangement.subarrangement(before | bit(row.hyperplane));
        let pos = bits(before | bit(row.hyperplane)).position(|h| h == row.hyperplane).unwrap();
        let restricted = with_h.restriction(pos).unwrap();
        prop_assert_eq!(restricted.len(), row.restriction_size);
        let pr = IntersectionLattice::new(&restricted).unwrap().poincare_polynomial();
        let mut got = pr.factor_one_plus().unwrap_or_default();
        got.sort_unstable();
        prop_assert_eq!(got, sorted_nonzero(&row.exp_restriction));
        prop_assert_eq!(tab.arrangement.normal(row.hyperplane), row.form.as_slice());
    }
}
