use proptest::prelude::*;

use vafagg::axioms::{
    check_interpretation_independence, check_pref_axiom, PrefAxiom, SearchBounds,
};
use vafagg::doc::{parse_json, to_json, vaf_from_doc, vaf_to_doc};
use vafagg::justification::{defeat_graphs, enumerate_justifying_audiences, lexmin_justification};
use vafagg::prefagg::{aggregate_prefs, PrefRule, PreferenceProfile};
use vafagg::{induce_defeat_graph, ArgumentId, AttackGraph, Audience, SymbolTable, Vaf, ValueId};

fn vaf_strategy() -> impl Strategy<Value = Vaf> {
    (1usize..=5, 1usize..=4)
        .prop_flat_map(|(m, k)| {
            let k = k.min(m);
            (
                Just(m),
                Just(k),
                Just((0..k).collect::<Vec<usize>>()).prop_shuffle(),
                proptest::collection::vec(0..k, m),
                proptest::collection::vec(any::<bool>(), m * m),
            )
        })
        .prop_map(|(m, k, firsts, rest, mask)| {
            let mut labels = rest;
            labels[..k].copy_from_slice(&firsts);
            let attacks = (0..m * m)
                .filter(|&i| mask[i])
                .map(|i| (ArgumentId::from(i / m), ArgumentId::from(i % m)));
            Vaf::from_parts(
                SymbolTable::numbered("v", k),
                SymbolTable::numbered("a", m),
                labels.into_iter().map(ValueId::from).collect(),
                AttackGraph::new(m, attacks).unwrap(),
            )
            .unwrap()
        })
}

fn audience_of(k: usize) -> impl Strategy<Value = Audience> {
    Just((0..k).map(ValueId::from).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|o| Audience::new(o).unwrap())
}

fn vaf_and_audience() -> impl Strategy<Value = (Vaf, Audience)> {
    vaf_strategy().prop_flat_map(|vaf| {
        let k = vaf.value_count();
        (Just(vaf), audience_of(k))
    })
}

proptest! {
    #[test]
    fn induced_graphs_keep_same_value_attacks_and_are_justified((vaf, audience) in vaf_and_audience()) {
        let g = induce_defeat_graph(&vaf, &audience).unwrap();
        prop_assert!(g.is_subgraph_of(vaf.attacks()));
        for &(a, b) in vaf.attacks().edges() {
            if vaf.val(a) == vaf.val(b) {
                prop_assert!(g.contains((a, b)));
            }
        }
        let justifying = enumerate_justifying_audiences(&vaf, &g).unwrap();
        prop_assert!(justifying.contains(&audience));
        let lexmin = lexmin_justification(&vaf, &g).unwrap();
        prop_assert_eq!(lexmin.as_ref(), justifying.first());
        for other in &justifying {
            prop_assert_eq!(&induce_defeat_graph(&vaf, other).unwrap(), &g);
        }
    }

    #[test]
    fn frameworks_round_trip(vaf in vaf_strategy()) {
        let text = to_json(&vaf_to_doc(&vaf));
        prop_assert_eq!(vaf_from_doc(&parse_json(&text, "framework").unwrap()).unwrap(), vaf);
    }

    #[test]
    fn borda_is_unanimous_and_anonymous(audiences in (1usize..=5, 1usize..=4).prop_flat_map(|(k, n)| proptest::collection::vec(audience_of(k), n))) {
        let profile = PreferenceProfile::new(audiences.clone()).unwrap();
        let out = aggregate_prefs(&PrefRule::borda(), &profile).unwrap();
        let k = profile.value_count();
        for a in (0..k).map(ValueId::from) {
            for b in (0..k).map(ValueId::from) {
                if a != b && audiences.iter().all(|x| x.prefers(a, b)) {
                    prop_assert!(out.prefers(a, b));
                }
            }
        }
        let reversed: Vec<usize> = (0..profile.agents()).rev().collect();
        prop_assert_eq!(aggregate_prefs(&PrefRule::borda(), &profile.permuted(&reversed)).unwrap(), out);
    }

    #[test]
    fn defeat_graphs_are_exactly_the_induced_graphs(vaf in vaf_strategy()) {
        let listed = defeat_graphs(&vaf).unwrap();
        for g in &listed {
            prop_assert!(!enumerate_justifying_audiences(&vaf, g).unwrap().is_empty());
        }
        let mut sorted = listed.clone();
        sorted.sort_by(|a, b| a.edge_count().cmp(&b.edge_count()).then_with(|| a.cmp(b)));
        sorted.dedup();
        prop_assert_eq!(sorted, listed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// An independent rule is interpretation independent on every framework searched.
    #[test]
    fn consistency_triangle(vaf in vaf_strategy(), index in 0usize..2) {
        let rule = PrefRule::Dictator { index };
        let bounds = SearchBounds { max_values: vaf.value_count(), max_agents: 2, ..SearchBounds::default() };
        if check_pref_axiom(&rule, PrefAxiom::Independence, &bounds).unwrap().holds() {
            prop_assert!(check_interpretation_independence(&rule, &vaf, 2).unwrap().holds());
        }
    }
}
