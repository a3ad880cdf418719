use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use cutlift::catalog::make_pentagonal;
use cutlift::cut::{cut_count, mask_to_set};
use cutlift::equivalence::{are_ps_equivalent, canonical_form, find_switching};
use cutlift::format::{parse_graph, parse_inequality_doc, parse_plan, write_bundle, write_graph, write_plan};
use cutlift::graph::{label, EliminationPlan, PlanEntry};
use cutlift::verify::is_valid;
use cutlift::{FormChoice, FormKind, Graph, Inequality, Label, Permutation, Rational};

fn small_ineq(n: usize) -> impl Strategy<Value = Inequality> {
    let g = Arc::new(Graph::complete(n));
    let e = g.edge_count();
    (proptest::collection::vec(-3i64..=3, e), -3i64..=3).prop_map(move |(c, rhs)| {
        let terms = g
            .edge_pairs()
            .iter()
            .zip(&c)
            .map(|(&(i, j), &x)| (g.label(i).clone(), g.label(j).clone(), Rational::from_integer(x.into())));
        Inequality::from_terms(g.clone(), terms, Rational::from_integer(rhs.into())).unwrap()
    })
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|img| {
        let map: BTreeMap<Label, Label> = img
            .iter()
            .enumerate()
            .map(|(i, &j)| (label((i + 1).to_string()), label(j.to_string())))
            .collect();
        Permutation::from_map(map).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn switching_is_an_involution_preserving_validity(q in small_ineq(5), m in 0u32..16) {
        let s = mask_to_set(q.graph(), m);
        let sw = q.switch(&s).unwrap();
        prop_assert_eq!(sw.switch(&s).unwrap(), q.clone());
        prop_assert_eq!(is_valid(&sw).unwrap(), is_valid(&q).unwrap());
    }

    #[test]
    fn permutation_inverse_round_trips(q in small_ineq(5), p in perm(5)) {
        let moved = q.permute(&p).unwrap();
        prop_assert_eq!(moved.permute(&p.inverse()).unwrap(), q.clone());
        prop_assert_eq!(is_valid(&moved).unwrap(), is_valid(&q).unwrap());
    }

    #[test]
    fn bundle_round_trip(q in small_ineq(6), num in 1i64..7, den in 1i64..7) {
        let scale = Rational::new(num.into(), den.into());
        let terms: Vec<_> = q.terms().map(|(e, c)| (e.lo().clone(), e.hi().clone(), c * &scale)).collect();
        let q = Inequality::from_terms(q.graph_arc().clone(), terms, q.rhs() * &scale).unwrap();
        let text = write_bundle(&q);
        let back = parse_inequality_doc(&text, None).unwrap();
        prop_assert_eq!(&back, &q);
        prop_assert_eq!(write_bundle(&back), text);
    }

    #[test]
    fn graph_round_trip(n in 2usize..8, bits in any::<u32>()) {
        let nodes: Vec<Label> = (1..=n).map(|i| label(format!("v{i}"))).collect();
        let mut edges = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if bits >> (k % 32) & 1 == 1 {
                    edges.push((nodes[i].clone(), nodes[j].clone()));
                }
                k += 1;
            }
        }
        let g = Graph::new("G", nodes, edges).unwrap();
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_graph(&back), text);
    }

    #[test]
    fn plan_round_trip(forms in proptest::collection::vec(0usize..5, 1..4)) {
        let pairs = [("1", "2"), ("1", "3"), ("2", "3")];
        let entries = forms
            .iter()
            .zip(pairs)
            .enumerate()
            .map(|(i, (&f, (u, v)))| {
                let form = if f == 4 { FormChoice::Canonical } else { FormChoice::Explicit(FormKind::ALL[f]) };
                PlanEntry::new(label(u), label(v), label(format!("w{i}")), form)
            })
            .collect();
        let p = EliminationPlan::new(entries).unwrap();
        let text = write_plan(&p);
        prop_assert_eq!(parse_plan(&text).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_members_share_canonical_form_and_replay(p in perm(5), m in 0u32..16) {
        let base = make_pentagonal();
        let other = base.permute(&p).unwrap().switch(&mask_to_set(base.graph(), m)).unwrap();
        prop_assert_eq!(canonical_form(&other).unwrap(), canonical_form(&base).unwrap());
        let (eq, w) = are_ps_equivalent(&base, &other).unwrap();
        prop_assert!(eq);
        prop_assert_eq!(w.unwrap().apply(&base).unwrap(), other);
    }

    #[test]
    fn parity_switching_matches_exhaustive(q in small_ineq(5), m in 0u32..16) {
        let target = q.switch(&mask_to_set(q.graph(), m)).unwrap();
        let s = find_switching(&q, &target).unwrap().unwrap();
        prop_assert_eq!(q.switch(&s).unwrap(), target);
        prop_assert!(cut_count(q.graph()) == 16);
    }
}
