//! The combined mechanism: pick a justifying audience for every submitted
//! graph, aggregate those audiences, and induce the collective defeat graph
//! on the same framework.

use crate::error::{Error, Result};
use crate::graphagg::GraphProfile;
use crate::justification::{
    find_justifying_vaf, first_unjustified, lexmin_justification, RationaliseLimits,
};
use crate::prefagg::{aggregate_prefs, PrefRule, PreferenceProfile};
use crate::vaf::{induce_defeat_graph, AttackGraph, Audience, SymbolTable, Vaf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JustificationSelector {
    /// The lexicographically smallest justifying audience under the declared
    /// value order. Depends only on the graph, never on the agent.
    LexMin,
    /// One audience per agent, validated against that agent's graph.
    Explicit { table: Vec<Audience> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VafSelector {
    Provided(Vaf),
    /// First labelling (lexicographically) of `candidate_attacks` with at most
    /// `max_values` values that justifies the profile.
    BruteForce {
        arguments: SymbolTable,
        candidate_attacks: AttackGraph,
        max_values: usize,
    },
}

pub fn select_justifications(
    selector: &JustificationSelector,
    vaf: &Vaf,
    profile: &GraphProfile,
) -> Result<PreferenceProfile> {
    if let Some(agent) = first_unjustified(vaf, profile.graphs())? {
        return Err(Error::UnjustifiedInput { agent });
    }
    let audiences = match selector {
        JustificationSelector::LexMin => profile
            .graphs()
            .iter()
            .enumerate()
            .map(|(agent, g)| {
                lexmin_justification(vaf, g)?.ok_or(Error::UnjustifiedInput { agent })
            })
            .collect::<Result<Vec<_>>>()?,
        JustificationSelector::Explicit { table } => {
            if table.len() != profile.agents() {
                return Err(Error::InvalidExplicitTable {
                    agent: table.len().min(profile.agents()),
                });
            }
            for (agent, (audience, g)) in table.iter().zip(profile.graphs()).enumerate() {
                if audience.len() != vaf.value_count() || &induce_defeat_graph(vaf, audience)? != g
                {
                    return Err(Error::InvalidExplicitTable { agent });
                }
            }
            table.clone()
        }
    };
    PreferenceProfile::new(audiences)
}

/// Everything the mechanism computed on the way to its output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinedOutcome {
    pub justifications: PreferenceProfile,
    pub collective: Audience,
    pub graph: AttackGraph,
}

pub fn combined_mechanism_detailed(
    rule: &PrefRule,
    selector: &JustificationSelector,
    vaf: &Vaf,
    profile: &GraphProfile,
) -> Result<CombinedOutcome> {
    let justifications = select_justifications(selector, vaf, profile)?;
    let collective = aggregate_prefs(rule, &justifications)?;
    let graph = induce_defeat_graph(vaf, &collective)?;
    Ok(CombinedOutcome {
        justifications,
        collective,
        graph,
    })
}

pub fn combined_mechanism(
    rule: &PrefRule,
    selector: &JustificationSelector,
    vaf: &Vaf,
    profile: &GraphProfile,
) -> Result<AttackGraph> {
    Ok(combined_mechanism_detailed(rule, selector, vaf, profile)?.graph)
}

/// The framework a [`VafSelector`] settles on for `profile`.
pub fn resolve_vaf(vaf_selector: &VafSelector, profile: &GraphProfile) -> Result<Vaf> {
    let vaf = match vaf_selector {
        VafSelector::Provided(vaf) => vaf.clone(),
        VafSelector::BruteForce {
            arguments,
            candidate_attacks,
            max_values,
        } => find_justifying_vaf(
            arguments,
            profile.graphs(),
            candidate_attacks,
            *max_values,
            &RationaliseLimits::default(),
        )?
        .ok_or(Error::NoJustifyingVaf)?,
    };
    if let Some(agent) = first_unjustified(&vaf, profile.graphs())? {
        return Err(Error::UnjustifiedInput { agent });
    }
    Ok(vaf)
}

pub fn combined_mechanism_fixed_vaf(
    rule: &PrefRule,
    vaf_selector: &VafSelector,
    selector: &JustificationSelector,
    profile: &GraphProfile,
) -> Result<AttackGraph> {
    let vaf = resolve_vaf(vaf_selector, profile)?;
    combined_mechanism(rule, selector, &vaf, profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::justification::{edge, is_defeat_graph};
    use crate::testutil::{edges, running_vaf};
    use crate::vaf::ArgumentId;

    fn experts(vaf: &Vaf) -> GraphProfile {
        GraphProfile::new(vec![
            edges(vaf, "B>A D>A C>B E>D F>C F>E F>G"),
            edges(vaf, "C>B E>D F>C F>E F>G"),
            induce_defeat_graph(vaf, &vaf.audience(&["SF", "ER", "EV", "IE"]).unwrap()).unwrap(),
        ])
        .unwrap()
    }

    fn alternative_table(vaf: &Vaf) -> JustificationSelector {
        JustificationSelector::Explicit {
            table: vec![
                vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap(),
                vaf.audience(&["EV", "ER", "IE", "SF"]).unwrap(),
                vaf.audience(&["SF", "ER", "EV", "IE"]).unwrap(),
            ],
        }
    }

    fn tiebreak_borda(vaf: &Vaf) -> PrefRule {
        PrefRule::Borda {
            tiebreak: Some(vaf.audience(&["ER", "SF", "IE", "EV"]).unwrap()),
        }
    }

    #[test]
    fn lexmin_selection() {
        let vaf = running_vaf();
        let p = GraphProfile::new(vec![experts(&vaf).graphs()[0].clone()]).unwrap();
        let sel = select_justifications(&JustificationSelector::LexMin, &vaf, &p).unwrap();
        assert_eq!(
            sel.audiences(),
            &[vaf.audience(&["EV", "SF", "IE", "ER"]).unwrap()]
        );
    }

    #[test]
    fn explicit_selection_is_validated() {
        let vaf = running_vaf();
        let p = experts(&vaf);
        let sel = select_justifications(&alternative_table(&vaf), &vaf, &p).unwrap();
        assert_eq!(
            sel.audiences()[1],
            vaf.audience(&["EV", "ER", "IE", "SF"]).unwrap()
        );

        let wrong = JustificationSelector::Explicit {
            table: vec![
                vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap(),
                vaf.audience(&["ER", "EV", "IE", "SF"]).unwrap(),
                vaf.audience(&["SF", "ER", "EV", "IE"]).unwrap(),
            ],
        };
        assert!(matches!(
            select_justifications(&wrong, &vaf, &p),
            Err(Error::InvalidExplicitTable { agent: 1 })
        ));
        let short = JustificationSelector::Explicit {
            table: vec![vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap()],
        };
        assert!(matches!(
            select_justifications(&short, &vaf, &p),
            Err(Error::InvalidExplicitTable { .. })
        ));
    }

    #[test]
    fn unjustified_input_is_rejected() {
        let vaf = running_vaf();
        let p = GraphProfile::new(vec![
            experts(&vaf).graphs()[0].clone(),
            vaf.attacks().clone(),
        ])
        .unwrap();
        assert!(matches!(
            select_justifications(&JustificationSelector::LexMin, &vaf, &p),
            Err(Error::UnjustifiedInput { agent: 1 })
        ));
    }

    #[test]
    fn alternative_justifications_block_b_on_a() {
        let vaf = running_vaf();
        let out = combined_mechanism(
            &tiebreak_borda(&vaf),
            &alternative_table(&vaf),
            &vaf,
            &experts(&vaf),
        )
        .unwrap();
        assert_eq!(out, edges(&vaf, "C>B E>D F>C F>E F>G"));
        let fixed = combined_mechanism_fixed_vaf(
            &tiebreak_borda(&vaf),
            &VafSelector::Provided(vaf.clone()),
            &alternative_table(&vaf),
            &experts(&vaf),
        )
        .unwrap();
        assert_eq!(fixed, out);
    }

    #[test]
    fn dictator_returns_its_graph() {
        let vaf = running_vaf();
        let p = experts(&vaf);
        for sel in [JustificationSelector::LexMin, alternative_table(&vaf)] {
            let out = combined_mechanism(&PrefRule::Dictator { index: 1 }, &sel, &vaf, &p).unwrap();
            assert_eq!(out, p.graphs()[1]);
        }
    }

    #[test]
    fn unanimous_profile_with_unique_justification() {
        let vaf = Vaf::new(
            &["v1", "v2"],
            &[("a", "v1"), ("b", "v2")],
            &[("a", "b"), ("b", "a")],
        )
        .unwrap();
        let g = vaf.graph(&[("b", "a")]).unwrap();
        let p = GraphProfile::new(vec![g.clone(); 3]).unwrap();
        for rule in [PrefRule::borda(), PrefRule::Dictator { index: 2 }] {
            assert_eq!(
                combined_mechanism(&rule, &JustificationSelector::LexMin, &vaf, &p).unwrap(),
                g
            );
        }
    }

    #[test]
    fn single_agent_fixed_vaf() {
        let vaf = running_vaf();
        let g = experts(&vaf).graphs()[2].clone();
        let p = GraphProfile::new(vec![g.clone()]).unwrap();
        let out = combined_mechanism_fixed_vaf(
            &PrefRule::borda(),
            &VafSelector::Provided(vaf.clone()),
            &JustificationSelector::LexMin,
            &p,
        )
        .unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn brute_force_vaf_selection() {
        let args = SymbolTable::new(["a", "b"]).unwrap();
        let mutual = AttackGraph::new(2, [edge(0, 1), edge(1, 0)]).unwrap();
        let p = GraphProfile::new(vec![
            AttackGraph::new(2, [edge(0, 1)]).unwrap(),
            AttackGraph::new(2, [edge(1, 0)]).unwrap(),
        ])
        .unwrap();
        let selector = VafSelector::BruteForce {
            arguments: args,
            candidate_attacks: mutual,
            max_values: 2,
        };
        let vaf = resolve_vaf(&selector, &p).unwrap();
        assert_eq!(vaf.val(ArgumentId(0)).index(), 0);
        assert_eq!(vaf.val(ArgumentId(1)).index(), 1);
        // audiences v1>v2 and v2>v1 tie on Borda; the declared order puts v1 first
        let out = combined_mechanism_fixed_vaf(
            &PrefRule::borda(),
            &selector,
            &JustificationSelector::LexMin,
            &p,
        )
        .unwrap();
        assert_eq!(out, AttackGraph::new(2, [edge(0, 1)]).unwrap());
        assert!(is_defeat_graph(&vaf, &out).unwrap());

        let none = VafSelector::BruteForce {
            arguments: SymbolTable::new(["a", "b"]).unwrap(),
            candidate_attacks: AttackGraph::new(2, [edge(0, 1), edge(1, 0)]).unwrap(),
            max_values: 1,
        };
        assert!(matches!(
            resolve_vaf(&none, &p),
            Err(Error::NoJustifyingVaf)
        ));
    }
}
