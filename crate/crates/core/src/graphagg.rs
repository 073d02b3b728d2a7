//! Graph aggregation: many attack graphs in, one attack graph out.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::justification::{derive_constraints, first_unjustified, JustifiabilityReport};
use crate::vaf::{ArgumentId, AttackGraph, Edge, Vaf};

/// A non-empty sequence of attack graphs over a common argument set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphProfile {
    graphs: Vec<AttackGraph>,
}

impl GraphProfile {
    pub fn new(graphs: Vec<AttackGraph>) -> Result<Self> {
        let first = graphs.first().ok_or(Error::EmptyProfile)?;
        if let Some(bad) = graphs.iter().find(|g| g.size() != first.size()) {
            return Err(Error::ArgumentSetMismatch {
                expected: first.size(),
                found: bad.size(),
            });
        }
        Ok(GraphProfile { graphs })
    }

    pub fn graphs(&self) -> &[AttackGraph] {
        &self.graphs
    }

    pub fn agents(&self) -> usize {
        self.graphs.len()
    }

    pub fn argument_count(&self) -> usize {
        self.graphs[0].size()
    }

    /// Agent `i` of the result is agent `permutation[i]` of `self`.
    pub fn permuted(&self, permutation: &[usize]) -> Self {
        GraphProfile {
            graphs: permutation
                .iter()
                .map(|&i| self.graphs[i].clone())
                .collect(),
        }
    }

    /// Replaces agent `agent`'s graph.
    pub fn with_member(&self, agent: usize, graph: AttackGraph) -> Self {
        let mut graphs = self.graphs.clone();
        graphs[agent] = graph;
        GraphProfile { graphs }
    }

    pub fn union(&self) -> BTreeSet<Edge> {
        self.graphs
            .iter()
            .flat_map(|g| g.edges().iter().copied())
            .collect()
    }
}

pub type Quota = Ratio<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphRule {
    /// Keep an edge when at least `max(1, ceil(q * n))` agents have it.
    Quota { q: Quota },
    /// Quota 1/2.
    Majority,
    /// Returns agent `index`'s graph.
    Dictator { index: usize },
    /// The input graph with the smallest total symmetric-difference distance
    /// to all inputs; lowest agent index on ties.
    RepresentativeVoter,
}

impl GraphRule {
    pub fn quota(q: Quota) -> Result<Self> {
        check_quota(q)?;
        Ok(GraphRule::Quota { q })
    }
}

fn check_quota(q: Quota) -> Result<()> {
    if q > Ratio::from_integer(1) {
        return Err(Error::RuleProfileMismatch(format!("quota {q} is above 1")));
    }
    Ok(())
}

/// Support an edge needs under quota `q` with `n` agents.
pub fn quota_threshold(q: Quota, n: usize) -> usize {
    let n = n as u64;
    let needed = (q.numer() * n).div_ceil(*q.denom());
    needed.max(1) as usize
}

/// Agents whose graph contains `a -> b`.
pub fn support_count_graph(
    profile: &GraphProfile,
    a: ArgumentId,
    b: ArgumentId,
) -> Result<BTreeSet<usize>> {
    for x in [a, b] {
        if x.index() >= profile.argument_count() {
            return Err(Error::UnknownArgument(x.to_string()));
        }
    }
    Ok(profile
        .graphs()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.contains((a, b)))
        .map(|(i, _)| i)
        .collect())
}

fn symmetric_difference(a: &AttackGraph, b: &AttackGraph) -> usize {
    a.edges().symmetric_difference(b.edges()).count()
}

pub fn aggregate_graphs(rule: &GraphRule, profile: &GraphProfile) -> Result<AttackGraph> {
    let n = profile.agents();
    match rule {
        GraphRule::Quota { q } => {
            check_quota(*q)?;
            Ok(quota_aggregate(*q, profile))
        }
        GraphRule::Majority => Ok(quota_aggregate(Ratio::new(1, 2), profile)),
        GraphRule::Dictator { index } => profile.graphs().get(*index).cloned().ok_or_else(|| {
            Error::RuleProfileMismatch(format!("dictator {index} but only {n} agents"))
        }),
        GraphRule::RepresentativeVoter => {
            let graphs = profile.graphs();
            let best = (0..n)
                .min_by_key(|&i| {
                    (
                        graphs
                            .iter()
                            .map(|g| symmetric_difference(&graphs[i], g))
                            .sum::<usize>(),
                        i,
                    )
                })
                .expect("profile is non-empty");
            Ok(graphs[best].clone())
        }
    }
}

fn quota_aggregate(q: Quota, profile: &GraphProfile) -> AttackGraph {
    let threshold = quota_threshold(q, profile.agents());
    let edges = profile
        .union()
        .into_iter()
        .filter(|&e| profile.graphs().iter().filter(|g| g.contains(e)).count() >= threshold);
    AttackGraph::new(profile.argument_count(), edges).expect("edges come from the profile")
}

/// Aggregates a profile of defeat graphs of `vaf` and reports whether the
/// outcome is again a defeat graph.
pub fn preserves_defeat_graph_on(
    rule: &GraphRule,
    vaf: &Vaf,
    profile: &GraphProfile,
) -> Result<JustifiabilityReport> {
    if let Some(agent) = first_unjustified(vaf, profile.graphs())? {
        return Err(Error::UnjustifiedInput { agent });
    }
    derive_constraints(vaf, &aggregate_graphs(rule, profile)?)
}
