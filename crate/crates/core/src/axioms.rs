//! Exhaustive small-domain verification of aggregation axioms.
//!
//! Every check enumerates a finite domain of profiles in a fixed canonical
//! order and reports either [`Status::Holds`] or the first violation it meets
//! as a [`Witness`]. Profiles are ordered by total edge count (graph profiles
//! only), then lexicographically by the domain index of each member; domains
//! themselves are listed fewest edges first. Witnesses carry everything needed
//! to re-run them through the public API, see [`Verdict::replay`].

#![allow(clippy::large_enum_variant)]

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::combined::combined_mechanism;
use crate::combined::JustificationSelector;
use crate::error::{Error, Result};
use crate::graphagg::{aggregate_graphs, GraphProfile, GraphRule};
use crate::justification::{
    all_audiences, defeat_graphs, derive_constraints, enumerate_justifying_audiences,
    is_defeat_graph, JustifiabilityReport,
};
use crate::prefagg::{aggregate_prefs, PrefRule, PreferenceProfile};
use crate::vaf::{
    induce_defeat_graph, ArgumentId, AttackGraph, Audience, Edge, SymbolTable, Vaf, ValueId,
};

pub const DEFAULT_MAX_CASES: u128 = 5_000_000;

/// Largest argument universe for which every graph is enumerated (2^(m*m) graphs).
const MAX_UNIVERSE_ARGUMENTS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_values: usize,
    pub max_agents: usize,
    pub max_arguments: usize,
    /// Largest attack relation tried by the framework-independence search.
    pub max_attacks: usize,
    /// Cap on the estimated number of cases; larger searches are refused up front.
    pub max_cases: u128,
    pub time_budget: Option<Duration>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_values: 3,
            max_agents: 2,
            max_arguments: 4,
            max_attacks: 2,
            max_cases: DEFAULT_MAX_CASES,
            time_budget: None,
        }
    }
}

impl SearchBounds {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("max_values", self.max_values),
            ("max_agents", self.max_agents),
            ("max_arguments", self.max_arguments),
            ("max_attacks", self.max_attacks),
        ] {
            if v == 0 {
                return Err(Error::InvalidBounds(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    fn admit(&self, estimated: Option<u128>) -> Result<()> {
        match estimated {
            Some(e) if e <= self.max_cases => Ok(()),
            Some(e) => Err(Error::BudgetExceeded {
                estimated: e,
                cap: self.max_cases,
            }),
            None => Err(Error::BudgetExceeded {
                estimated: u128::MAX,
                cap: self.max_cases,
            }),
        }
    }

    fn with_agents(&self, n: usize) -> Self {
        SearchBounds {
            max_agents: n,
            ..self.clone()
        }
    }
}

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),*
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),*
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|a| a.name() == s)
                    .ok_or_else(|| Error::Parse(format!("unknown axiom `{s}`")))
            }
        }
    };
}

named_enum!(PrefAxiom {
    Unanimity => "unanimity",
    Anonymity => "anonymity",
    Independence => "independence",
    NonDictatorship => "non-dictatorship",
});

named_enum!(GraphAxiom {
    Unanimity => "unanimity",
    Anonymity => "anonymity",
    Independence => "independence",
    Monotonicity => "monotonicity",
    NonDictatorship => "non-dictatorship",
});

/// Where graph profiles are drawn from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphDomain {
    /// Every graph (self-loops included) over `arguments` arguments.
    AllGraphs { arguments: usize },
    /// The defeat graphs of one framework.
    DefeatGraphs(Vaf),
}

impl GraphDomain {
    pub fn graphs(&self) -> Result<Vec<AttackGraph>> {
        match self {
            GraphDomain::AllGraphs { arguments } => all_graphs(*arguments),
            GraphDomain::DefeatGraphs(vaf) => defeat_graphs(vaf),
        }
    }

    pub fn argument_count(&self) -> usize {
        match self {
            GraphDomain::AllGraphs { arguments } => *arguments,
            GraphDomain::DefeatGraphs(vaf) => vaf.argument_count(),
        }
    }
}

/// A graph aggregation rule under test: either a plain rule, or the rule
/// induced by the combined mechanism (lexmin selector) on a fixed framework.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphAggregator {
    Rule(GraphRule),
    Induced { rule: PrefRule, vaf: Vaf },
}

impl GraphAggregator {
    pub fn apply(&self, profile: &GraphProfile) -> Result<AttackGraph> {
        match self {
            GraphAggregator::Rule(rule) => aggregate_graphs(rule, profile),
            GraphAggregator::Induced { rule, vaf } => {
                combined_mechanism(rule, &JustificationSelector::LexMin, vaf, profile)
            }
        }
    }
}

/// What was checked, with enough context to replay a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subject {
    Pref {
        rule: PrefRule,
        axiom: PrefAxiom,
        values: usize,
        agents: usize,
    },
    Graph {
        aggregator: GraphAggregator,
        axiom: GraphAxiom,
        domain: GraphDomain,
        agents: usize,
    },
    Preservation {
        rule: GraphRule,
        vaf: Vaf,
        agents: usize,
    },
    InterpretationIndependence {
        rule: PrefRule,
        vaf: Vaf,
        agents: usize,
    },
    VafIndependence {
        rule: PrefRule,
        bounds: SearchBounds,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    PrefUnanimity {
        profile: PreferenceProfile,
        pair: (ValueId, ValueId),
        output: Audience,
    },
    PrefAnonymity {
        profile: PreferenceProfile,
        permutation: Vec<usize>,
        outputs: [Audience; 2],
    },
    PrefIndependence {
        profiles: [PreferenceProfile; 2],
        pair: (ValueId, ValueId),
        outputs: [Audience; 2],
    },
    /// Agent `agent` decided every profile in the domain.
    PrefDictatorship {
        agent: usize,
    },
    GraphUnanimity {
        profile: GraphProfile,
        edge: Edge,
        output: AttackGraph,
    },
    GraphAnonymity {
        profile: GraphProfile,
        permutation: Vec<usize>,
        outputs: [AttackGraph; 2],
    },
    GraphIndependence {
        profiles: [GraphProfile; 2],
        edge: Edge,
        outputs: [AttackGraph; 2],
    },
    /// `profiles[1]` is `profiles[0]` with `agent` additionally accepting `edge`.
    GraphMonotonicity {
        profiles: [GraphProfile; 2],
        agent: usize,
        edge: Edge,
        outputs: [AttackGraph; 2],
    },
    GraphDictatorship {
        agent: usize,
    },
    NotPreserved {
        profile: GraphProfile,
        output: AttackGraph,
        report: JustifiabilityReport,
    },
    InterpretationDependent {
        graphs: GraphProfile,
        justifications: [PreferenceProfile; 2],
        outputs: [AttackGraph; 2],
    },
    VafDependent {
        graphs: GraphProfile,
        vafs: [Vaf; 2],
        outputs: [AttackGraph; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub subject: Subject,
    pub status: Status,
    /// Number of cases examined.
    pub checked: u64,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            Status::Holds => None,
            Status::Fails(w) => Some(w),
        }
    }

    /// Recomputes the witness from scratch; `true` iff the same violation occurs.
    pub fn replay(&self) -> Result<bool> {
        match self.witness() {
            None => Ok(false),
            Some(w) => replay_witness(&self.subject, w),
        }
    }
}

struct Clock {
    start: Instant,
    limit: Option<Duration>,
    checked: u64,
}

impl Clock {
    fn new(bounds: &SearchBounds) -> Self {
        Clock {
            start: Instant::now(),
            limit: bounds.time_budget,
            checked: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.checked += 1;
        if self.checked.is_multiple_of(1024) {
            if let Some(limit) = self.limit {
                if self.start.elapsed() > limit {
                    return Err(Error::TimeBudgetExceeded {
                        checked: self.checked,
                    });
                }
            }
        }
        Ok(())
    }
}

/// All `n`-tuples over `weights.len()` items, lightest total weight first,
/// lexicographic within equal weight.
fn canonical_profiles(weights: &[usize], n: usize) -> Vec<Vec<u32>> {
    let d = weights.len();
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(d.saturating_pow(n as u32));
    let mut t = vec![0u32; n];
    'outer: loop {
        out.push(t.clone());
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            t[i] += 1;
            if (t[i] as usize) < d {
                break;
            }
            t[i] = 0;
        }
    }
    // stable sort keeps lexicographic order inside each weight class
    out.sort_by_key(|t| t.iter().map(|&x| weights[x as usize]).sum::<usize>());
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Non-identity permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn pow(d: usize, n: usize) -> Option<u128> {
    (d as u128).checked_pow(n as u32)
}

/// Every graph over `m` arguments, fewest edges first.
pub fn all_graphs(m: usize) -> Result<Vec<AttackGraph>> {
    if m > MAX_UNIVERSE_ARGUMENTS {
        return Err(Error::InvalidBounds(format!(
            "cannot enumerate all graphs over {m} arguments (limit {MAX_UNIVERSE_ARGUMENTS})"
        )));
    }
    let pairs = universe_edges(m);
    let mut graphs: Vec<AttackGraph> = (0u64..1 << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e);
            AttackGraph::new(m, edges).expect("edges are in range")
        })
        .collect();
    graphs.sort_by(|a, b| a.edge_count().cmp(&b.edge_count()).then_with(|| a.cmp(b)));
    Ok(graphs)
}

fn universe_edges(m: usize) -> Vec<Edge> {
    (0..m)
        .flat_map(|a| (0..m).map(move |b| (ArgumentId::from(a), ArgumentId::from(b))))
        .collect()
}

fn pref_profile(domain: &[Audience], t: &[u32]) -> PreferenceProfile {
    PreferenceProfile::new(t.iter().map(|&i| domain[i as usize].clone()).collect())
        .expect("domain profile")
}

fn graph_profile(domain: &[AttackGraph], t: &[u32]) -> GraphProfile {
    GraphProfile::new(t.iter().map(|&i| domain[i as usize].clone()).collect())
        .expect("domain profile")
}

fn value_pairs(k: usize) -> Vec<(ValueId, ValueId)> {
    (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (ValueId::from(a), ValueId::from(b))))
        .collect()
}

pub fn check_pref_axiom(
    rule: &PrefRule,
    axiom: PrefAxiom,
    bounds: &SearchBounds,
) -> Result<Verdict> {
    bounds.validate()?;
    let (k, n) = (bounds.max_values, bounds.max_agents);
    let domain = all_audiences(k)?;
    let per_profile = if axiom == PrefAxiom::Anonymity {
        factorial(n)
    } else {
        1
    };
    bounds.admit(pow(domain.len(), n).and_then(|c| c.checked_mul(per_profile)))?;
    let profiles = canonical_profiles(&vec![0; domain.len()], n);
    let mut clock = Clock::new(bounds);
    let subject = Subject::Pref {
        rule: rule.clone(),
        axiom,
        values: k,
        agents: n,
    };
    let fails = |w: Witness, clock: &Clock| {
        Ok(Verdict {
            subject: subject.clone(),
            status: Status::Fails(w),
            checked: clock.checked,
        })
    };

    match axiom {
        PrefAxiom::Unanimity => {
            for t in &profiles {
                clock.tick()?;
                let p = pref_profile(&domain, t);
                let out = aggregate_prefs(rule, &p)?;
                for a in 0..k {
                    for b in 0..k {
                        let (a, b) = (ValueId::from(a), ValueId::from(b));
                        if a != b
                            && p.audiences().iter().all(|x| x.prefers(a, b))
                            && !out.prefers(a, b)
                        {
                            return fails(
                                Witness::PrefUnanimity {
                                    profile: p,
                                    pair: (a, b),
                                    output: out,
                                },
                                &clock,
                            );
                        }
                    }
                }
            }
        }
        PrefAxiom::Anonymity => {
            let perms = permutations(n);
            for t in &profiles {
                let p = pref_profile(&domain, t);
                let out = aggregate_prefs(rule, &p)?;
                for perm in &perms {
                    clock.tick()?;
                    let other = aggregate_prefs(rule, &p.permuted(perm))?;
                    if other != out {
                        return fails(
                            Witness::PrefAnonymity {
                                profile: p,
                                permutation: perm.clone(),
                                outputs: [out, other],
                            },
                            &clock,
                        );
                    }
                }
            }
        }
        PrefAxiom::Independence => {
            let pairs = value_pairs(k);
            let mut first: HashMap<(usize, u64), usize> = HashMap::new();
            let mut outputs: Vec<(PreferenceProfile, Audience)> =
                Vec::with_capacity(profiles.len());
            for (i, t) in profiles.iter().enumerate() {
                clock.tick()?;
                let p = pref_profile(&domain, t);
                let out = aggregate_prefs(rule, &p)?;
                for (pi, &(a, b)) in pairs.iter().enumerate() {
                    let mask = supporters_mask(p.audiences().iter().map(|x| x.prefers(a, b)));
                    let j = *first.entry((pi, mask)).or_insert(i);
                    let earlier = if j == i { &out } else { &outputs[j].1 };
                    if earlier.prefers(a, b) != out.prefers(a, b) {
                        let (p0, o0) = outputs[j].clone();
                        return fails(
                            Witness::PrefIndependence {
                                profiles: [p0, p],
                                pair: (a, b),
                                outputs: [o0, out],
                            },
                            &clock,
                        );
                    }
                }
                outputs.push((p, out));
            }
        }
        PrefAxiom::NonDictatorship => {
            let mut candidates = vec![true; n];
            for t in &profiles {
                clock.tick()?;
                let p = pref_profile(&domain, t);
                let out = aggregate_prefs(rule, &p)?;
                for (i, c) in candidates.iter_mut().enumerate() {
                    *c &= p.audiences()[i] == out;
                }
            }
            if let Some(agent) = candidates.iter().position(|&c| c) {
                return fails(Witness::PrefDictatorship { agent }, &clock);
            }
        }
    }
    Ok(Verdict {
        subject,
        status: Status::Holds,
        checked: clock.checked,
    })
}

fn supporters_mask(support: impl Iterator<Item = bool>) -> u64 {
    support
        .enumerate()
        .filter(|(_, s)| *s)
        .fold(0, |m, (i, _)| m | 1 << i)
}

pub fn check_graph_axiom(
    rule: &GraphRule,
    axiom: GraphAxiom,
    bounds: &SearchBounds,
    justified_only: Option<&Vaf>,
) -> Result<Verdict> {
    bounds.validate()?;
    let domain = match justified_only {
        Some(vaf) => GraphDomain::DefeatGraphs(vaf.clone()),
        None => GraphDomain::AllGraphs {
            arguments: bounds.max_arguments,
        },
    };
    run_graph_axiom(GraphAggregator::Rule(rule.clone()), axiom, domain, bounds)
}

/// Checks `axiom` for the graph rule induced by the combined mechanism with
/// `pref_rule` and the lexmin selector on `vaf`, over all `n`-agent profiles of
/// defeat graphs. Every output is also confirmed to be a defeat graph.
pub fn check_inheritance(
    pref_rule: &PrefRule,
    vaf: &Vaf,
    axiom: GraphAxiom,
    n: usize,
) -> Result<Verdict> {
    let bounds = SearchBounds::default().with_agents(n);
    bounds.validate()?;
    let aggregator = GraphAggregator::Induced {
        rule: pref_rule.clone(),
        vaf: vaf.clone(),
    };
    let domain = GraphDomain::DefeatGraphs(vaf.clone());
    let subject = Subject::Graph {
        aggregator: aggregator.clone(),
        axiom,
        domain: domain.clone(),
        agents: n,
    };

    let graphs = domain.graphs()?;
    bounds.admit(pow(graphs.len(), n))?;
    let mut clock = Clock::new(&bounds);
    for t in canonical_profiles(&weights(&graphs), n) {
        clock.tick()?;
        let p = graph_profile(&graphs, &t);
        let output = aggregator.apply(&p)?;
        let report = derive_constraints(vaf, &output)?;
        if !report.is_justified() {
            let w = Witness::NotPreserved {
                profile: p,
                output,
                report,
            };
            return Ok(Verdict {
                subject,
                status: Status::Fails(w),
                checked: clock.checked,
            });
        }
    }
    let mut verdict = run_graph_axiom(aggregator, axiom, domain, &bounds)?;
    verdict.checked += clock.checked;
    Ok(verdict)
}

fn weights(graphs: &[AttackGraph]) -> Vec<usize> {
    graphs.iter().map(AttackGraph::edge_count).collect()
}

fn run_graph_axiom(
    aggregator: GraphAggregator,
    axiom: GraphAxiom,
    domain: GraphDomain,
    bounds: &SearchBounds,
) -> Result<Verdict> {
    let n = bounds.max_agents;
    let graphs = domain.graphs()?;
    let per_profile = if axiom == GraphAxiom::Anonymity {
        factorial(n)
    } else {
        1
    };
    bounds.admit(pow(graphs.len(), n).and_then(|c| c.checked_mul(per_profile)))?;
    let universe = universe_edges(domain.argument_count());
    let profiles = canonical_profiles(&weights(&graphs), n);
    let mut clock = Clock::new(bounds);
    let subject = Subject::Graph {
        aggregator: aggregator.clone(),
        axiom,
        domain,
        agents: n,
    };
    let fails = |w: Witness, clock: &Clock| {
        Ok(Verdict {
            subject: subject.clone(),
            status: Status::Fails(w),
            checked: clock.checked,
        })
    };

    match axiom {
        GraphAxiom::Unanimity => {
            for t in &profiles {
                clock.tick()?;
                let p = graph_profile(&graphs, t);
                let out = aggregator.apply(&p)?;
                let first = &p.graphs()[0];
                for &e in first.edges() {
                    if p.graphs().iter().all(|g| g.contains(e)) && !out.contains(e) {
                        return fails(
                            Witness::GraphUnanimity {
                                profile: p,
                                edge: e,
                                output: out,
                            },
                            &clock,
                        );
                    }
                }
            }
        }
        GraphAxiom::Anonymity => {
            let perms = permutations(n);
            for t in &profiles {
                let p = graph_profile(&graphs, t);
                let out = aggregator.apply(&p)?;
                for perm in &perms {
                    clock.tick()?;
                    let other = aggregator.apply(&p.permuted(perm))?;
                    if other != out {
                        return fails(
                            Witness::GraphAnonymity {
                                profile: p,
                                permutation: perm.clone(),
                                outputs: [out, other],
                            },
                            &clock,
                        );
                    }
                }
            }
        }
        GraphAxiom::Independence => {
            let mut first: HashMap<(usize, u64), usize> = HashMap::new();
            let mut outputs: Vec<(GraphProfile, AttackGraph)> = Vec::with_capacity(profiles.len());
            for (i, t) in profiles.iter().enumerate() {
                clock.tick()?;
                let p = graph_profile(&graphs, t);
                let out = aggregator.apply(&p)?;
                for (ei, &e) in universe.iter().enumerate() {
                    let mask = supporters_mask(p.graphs().iter().map(|g| g.contains(e)));
                    let j = *first.entry((ei, mask)).or_insert(i);
                    let earlier = if j == i { &out } else { &outputs[j].1 };
                    if earlier.contains(e) != out.contains(e) {
                        let (p0, o0) = outputs[j].clone();
                        return fails(
                            Witness::GraphIndependence {
                                profiles: [p0, p],
                                edge: e,
                                outputs: [o0, out],
                            },
                            &clock,
                        );
                    }
                }
                outputs.push((p, out));
            }
        }
        GraphAxiom::Monotonicity => {
            let index_of: HashMap<&AttackGraph, u32> = graphs
                .iter()
                .enumerate()
                .map(|(i, g)| (g, i as u32))
                .collect();
            let position: HashMap<&[u32], usize> = profiles
                .iter()
                .enumerate()
                .map(|(i, t)| (t.as_slice(), i))
                .collect();
            let mut outputs = Vec::with_capacity(profiles.len());
            for t in &profiles {
                outputs.push(aggregator.apply(&graph_profile(&graphs, t))?);
            }
            for (i, t) in profiles.iter().enumerate() {
                clock.tick()?;
                for &e in outputs[i].edges() {
                    for agent in 0..n {
                        let g = &graphs[t[agent] as usize];
                        if g.contains(e) {
                            continue;
                        }
                        let Some(&gi) = index_of.get(&g.with_edge(e)) else {
                            continue;
                        };
                        let mut t2 = t.clone();
                        t2[agent] = gi;
                        let j = position[t2.as_slice()];
                        if !outputs[j].contains(e) {
                            let w = Witness::GraphMonotonicity {
                                profiles: [graph_profile(&graphs, t), graph_profile(&graphs, &t2)],
                                agent,
                                edge: e,
                                outputs: [outputs[i].clone(), outputs[j].clone()],
                            };
                            return fails(w, &clock);
                        }
                    }
                }
            }
        }
        GraphAxiom::NonDictatorship => {
            let mut candidates = vec![true; n];
            for t in &profiles {
                clock.tick()?;
                let p = graph_profile(&graphs, t);
                let out = aggregator.apply(&p)?;
                for (i, c) in candidates.iter_mut().enumerate() {
                    *c &= p.graphs()[i] == out;
                }
            }
            if let Some(agent) = candidates.iter().position(|&c| c) {
                return fails(Witness::GraphDictatorship { agent }, &clock);
            }
        }
    }
    Ok(Verdict {
        subject,
        status: Status::Holds,
        checked: clock.checked,
    })
}

/// Does `rule` map every `n`-agent profile of defeat graphs of `vaf` to a defeat graph?
pub fn check_preservation(rule: &GraphRule, vaf: &Vaf, n: usize) -> Result<Verdict> {
    let bounds = SearchBounds::default().with_agents(n);
    bounds.validate()?;
    let graphs = defeat_graphs(vaf)?;
    bounds.admit(pow(graphs.len(), n))?;
    let subject = Subject::Preservation {
        rule: rule.clone(),
        vaf: vaf.clone(),
        agents: n,
    };
    let mut clock = Clock::new(&bounds);
    for t in canonical_profiles(&weights(&graphs), n) {
        clock.tick()?;
        let p = graph_profile(&graphs, &t);
        let output = aggregate_graphs(rule, &p)?;
        let report = derive_constraints(vaf, &output)?;
        if !report.is_justified() {
            let w = Witness::NotPreserved {
                profile: p,
                output,
                report,
            };
            return Ok(Verdict {
                subject,
                status: Status::Fails(w),
                checked: clock.checked,
            });
        }
    }
    Ok(Verdict {
        subject,
        status: Status::Holds,
        checked: clock.checked,
    })
}

/// For every `n`-agent profile of defeat graphs of `vaf`, do all justifying
/// preference profiles lead `rule` to the same collective defeat graph?
pub fn check_interpretation_independence(rule: &PrefRule, vaf: &Vaf, n: usize) -> Result<Verdict> {
    let bounds = SearchBounds::default().with_agents(n);
    bounds.validate()?;
    let graphs = defeat_graphs(vaf)?;
    let justifications: Vec<Vec<Audience>> = graphs
        .iter()
        .map(|g| enumerate_justifying_audiences(vaf, g))
        .collect::<Result<_>>()?;
    let widest = justifications.iter().map(Vec::len).max().unwrap_or(1);
    bounds.admit(pow(graphs.len(), n).and_then(|c| c.checked_mul(pow(widest, n)?)))?;
    let subject = Subject::InterpretationIndependence {
        rule: rule.clone(),
        vaf: vaf.clone(),
        agents: n,
    };
    let mut clock = Clock::new(&bounds);

    for t in canonical_profiles(&weights(&graphs), n) {
        let choices: Vec<&[Audience]> = t
            .iter()
            .map(|&i| justifications[i as usize].as_slice())
            .collect();
        let mut pick = vec![0usize; n];
        let mut reference: Option<(PreferenceProfile, AttackGraph)> = None;
        loop {
            clock.tick()?;
            let p = PreferenceProfile::new(
                pick.iter()
                    .zip(&choices)
                    .map(|(&c, opts)| opts[c].clone())
                    .collect(),
            )?;
            let out = induce_defeat_graph(vaf, &aggregate_prefs(rule, &p)?)?;
            match &reference {
                None => reference = Some((p, out)),
                Some((p0, o0)) if *o0 != out => {
                    let w = Witness::InterpretationDependent {
                        graphs: graph_profile(&graphs, &t),
                        justifications: [p0.clone(), p],
                        outputs: [o0.clone(), out],
                    };
                    return Ok(Verdict {
                        subject,
                        status: Status::Fails(w),
                        checked: clock.checked,
                    });
                }
                Some(_) => {}
            }
            // odometer over justification choices
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
            }
            if pick.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    Ok(Verdict {
        subject,
        status: Status::Holds,
        checked: clock.checked,
    })
}

/// Surjective labellings of `m` arguments onto `k` values, lexicographic.
fn surjective_labelings(m: usize, k: usize) -> Vec<Vec<ValueId>> {
    let mut out = Vec::new();
    let mut l = vec![0usize; m];
    loop {
        let mut used = vec![false; k];
        l.iter().for_each(|&v| used[v] = true);
        if used.iter().all(|&u| u) {
            out.push(l.iter().map(|&v| ValueId::from(v)).collect());
        }
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            l[i] += 1;
            if l[i] < k {
                break;
            }
            l[i] = 0;
        }
    }
}

/// Attack relations without self-attacks of 1..=`max` edges over `m` arguments,
/// smallest first.
fn attack_relations(m: usize, max: usize) -> Vec<Vec<Edge>> {
    let pairs: Vec<Edge> = universe_edges(m)
        .into_iter()
        .filter(|(a, b)| a != b)
        .collect();
    let mut out = Vec::new();
    fn grow(
        pairs: &[Edge],
        start: usize,
        size: usize,
        cur: &mut Vec<Edge>,
        out: &mut Vec<Vec<Edge>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..pairs.len() {
            cur.push(pairs[i]);
            grow(pairs, i + 1, size, cur, out);
            cur.pop();
        }
    }
    for size in 1..=max.min(pairs.len()) {
        grow(&pairs, 0, size, &mut Vec::new(), &mut out);
    }
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Searches for a graph profile and two labellings of the same attack relation,
/// both justifying the profile, on which the combined mechanism disagrees.
pub fn check_vaf_independence(
    pref_rule: &PrefRule,
    selector: &JustificationSelector,
    bounds: &SearchBounds,
) -> Result<Verdict> {
    bounds.validate()?;
    if let JustificationSelector::Explicit { .. } = selector {
        return Err(Error::InvalidExplicitTable { agent: 0 });
    }
    let (m, k, n) = (bounds.max_arguments, bounds.max_values, bounds.max_agents);
    if k > m {
        return Err(Error::InvalidBounds(format!(
            "{k} values cannot all label {m} arguments"
        )));
    }
    let labelings = surjective_labelings(m, k);
    let relations = attack_relations(m, bounds.max_attacks);
    let pairs = binomial(labelings.len() as u128, 2);
    let per_pair = pow(1usize << bounds.max_attacks.min(60), n);
    bounds
        .admit(per_pair.and_then(|c| c.checked_mul(pairs)?.checked_mul(relations.len() as u128)))?;

    let subject = Subject::VafIndependence {
        rule: pref_rule.clone(),
        bounds: bounds.clone(),
    };
    let arguments = SymbolTable::numbered("a", m);
    let values = SymbolTable::numbered("v", k);
    let mut clock = Clock::new(bounds);

    for relation in &relations {
        let attacks = AttackGraph::new(m, relation.iter().copied())?;
        // per labelling: its framework and the lexmin audience of each defeat graph
        let mut frameworks = Vec::with_capacity(labelings.len());
        for labels in &labelings {
            let vaf = Vaf::from_parts(
                values.clone(),
                arguments.clone(),
                labels.clone(),
                attacks.clone(),
            )?;
            let mut chosen = HashMap::new();
            for g in defeat_graphs(&vaf)? {
                let audience = derive_constraints(&vaf, &g)?
                    .constraints()
                    .and_then(|cs| cs.lexmin_extension())
                    .expect("defeat graphs are justified");
                chosen.insert(g, audience);
            }
            frameworks.push((vaf, chosen));
        }
        for i in 0..frameworks.len() {
            for j in i + 1..frameworks.len() {
                let (vaf1, chosen1) = &frameworks[i];
                let (vaf2, chosen2) = &frameworks[j];
                let mut common: Vec<AttackGraph> = chosen1
                    .keys()
                    .filter(|g| chosen2.contains_key(*g))
                    .cloned()
                    .collect();
                common.sort_by(|a, b| a.edge_count().cmp(&b.edge_count()).then_with(|| a.cmp(b)));
                for t in canonical_profiles(&weights(&common), n) {
                    clock.tick()?;
                    let run = |vaf: &Vaf,
                               chosen: &HashMap<AttackGraph, Audience>|
                     -> Result<AttackGraph> {
                        let p = PreferenceProfile::new(
                            t.iter()
                                .map(|&x| chosen[&common[x as usize]].clone())
                                .collect(),
                        )?;
                        induce_defeat_graph(vaf, &aggregate_prefs(pref_rule, &p)?)
                    };
                    let (o1, o2) = (run(vaf1, chosen1)?, run(vaf2, chosen2)?);
                    if o1 != o2 {
                        let w = Witness::VafDependent {
                            graphs: graph_profile(&common, &t),
                            vafs: [vaf1.clone(), vaf2.clone()],
                            outputs: [o1, o2],
                        };
                        return Ok(Verdict {
                            subject,
                            status: Status::Fails(w),
                            checked: clock.checked,
                        });
                    }
                }
            }
        }
    }
    Ok(Verdict {
        subject,
        status: Status::Holds,
        checked: clock.checked,
    })
}

fn not_preserved(
    vaf: &Vaf,
    profile: &GraphProfile,
    claimed: &AttackGraph,
    output: AttackGraph,
) -> Result<bool> {
    for g in profile.graphs() {
        if !is_defeat_graph(vaf, g)? {
            return Ok(false);
        }
    }
    Ok(&output == claimed && !is_defeat_graph(vaf, &output)?)
}

fn replay_witness(subject: &Subject, witness: &Witness) -> Result<bool> {
    match (subject, witness) {
        (
            Subject::Pref { rule, .. },
            Witness::PrefUnanimity {
                profile,
                pair: (a, b),
                output,
            },
        ) => {
            let out = aggregate_prefs(rule, profile)?;
            Ok(&out == output
                && profile.audiences().iter().all(|x| x.prefers(*a, *b))
                && !out.prefers(*a, *b))
        }
        (
            Subject::Pref { rule, .. },
            Witness::PrefAnonymity {
                profile,
                permutation,
                outputs,
            },
        ) => {
            let o0 = aggregate_prefs(rule, profile)?;
            let o1 = aggregate_prefs(rule, &profile.permuted(permutation))?;
            Ok([o0.clone(), o1.clone()] == *outputs && o0 != o1)
        }
        (
            Subject::Pref { rule, .. },
            Witness::PrefIndependence {
                profiles,
                pair: (a, b),
                outputs,
            },
        ) => {
            let o0 = aggregate_prefs(rule, &profiles[0])?;
            let o1 = aggregate_prefs(rule, &profiles[1])?;
            let same_support = crate::prefagg::support_count_pref(&profiles[0], *a, *b)?
                == crate::prefagg::support_count_pref(&profiles[1], *a, *b)?;
            Ok([o0.clone(), o1.clone()] == *outputs
                && same_support
                && o0.prefers(*a, *b) != o1.prefers(*a, *b))
        }
        (
            Subject::Pref {
                rule,
                values,
                agents,
                ..
            },
            Witness::PrefDictatorship { agent },
        ) => {
            let domain = all_audiences(*values)?;
            for t in canonical_profiles(&vec![0; domain.len()], *agents) {
                let p = pref_profile(&domain, &t);
                if aggregate_prefs(rule, &p)? != p.audiences()[*agent] {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (
            Subject::Graph { aggregator, .. },
            Witness::GraphUnanimity {
                profile,
                edge,
                output,
            },
        ) => {
            let out = aggregator.apply(profile)?;
            Ok(&out == output
                && profile.graphs().iter().all(|g| g.contains(*edge))
                && !out.contains(*edge))
        }
        (
            Subject::Graph { aggregator, .. },
            Witness::GraphAnonymity {
                profile,
                permutation,
                outputs,
            },
        ) => {
            let o0 = aggregator.apply(profile)?;
            let o1 = aggregator.apply(&profile.permuted(permutation))?;
            Ok([o0.clone(), o1.clone()] == *outputs && o0 != o1)
        }
        (
            Subject::Graph { aggregator, .. },
            Witness::GraphIndependence {
                profiles,
                edge,
                outputs,
            },
        ) => {
            let o0 = aggregator.apply(&profiles[0])?;
            let o1 = aggregator.apply(&profiles[1])?;
            let support =
                |p: &GraphProfile| supporters_mask(p.graphs().iter().map(|g| g.contains(*edge)));
            Ok([o0.clone(), o1.clone()] == *outputs
                && support(&profiles[0]) == support(&profiles[1])
                && o0.contains(*edge) != o1.contains(*edge))
        }
        (
            Subject::Graph { aggregator, .. },
            Witness::GraphMonotonicity {
                profiles,
                agent,
                edge,
                outputs,
            },
        ) => {
            let o0 = aggregator.apply(&profiles[0])?;
            let o1 = aggregator.apply(&profiles[1])?;
            let before = &profiles[0].graphs()[*agent];
            let raised = profiles[1] == profiles[0].with_member(*agent, before.with_edge(*edge))
                && !before.contains(*edge);
            Ok([o0.clone(), o1.clone()] == *outputs
                && raised
                && o0.contains(*edge)
                && !o1.contains(*edge))
        }
        (
            Subject::Graph {
                aggregator,
                domain,
                agents,
                ..
            },
            Witness::GraphDictatorship { agent },
        ) => {
            let graphs = domain.graphs()?;
            for t in canonical_profiles(&weights(&graphs), *agents) {
                let p = graph_profile(&graphs, &t);
                if aggregator.apply(&p)? != p.graphs()[*agent] {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (
            Subject::Graph {
                aggregator: aggregator @ GraphAggregator::Induced { vaf, .. },
                ..
            },
            Witness::NotPreserved {
                profile, output, ..
            },
        ) => not_preserved(vaf, profile, output, aggregator.apply(profile)?),
        (
            Subject::Preservation { rule, vaf, .. },
            Witness::NotPreserved {
                profile, output, ..
            },
        ) => not_preserved(vaf, profile, output, aggregate_graphs(rule, profile)?),
        (
            Subject::InterpretationIndependence { rule, vaf, .. },
            Witness::InterpretationDependent {
                graphs,
                justifications,
                outputs,
            },
        ) => {
            for p in justifications {
                for (a, g) in p.audiences().iter().zip(graphs.graphs()) {
                    if &induce_defeat_graph(vaf, a)? != g {
                        return Ok(false);
                    }
                }
            }
            let o0 = induce_defeat_graph(vaf, &aggregate_prefs(rule, &justifications[0])?)?;
            let o1 = induce_defeat_graph(vaf, &aggregate_prefs(rule, &justifications[1])?)?;
            Ok([o0.clone(), o1.clone()] == *outputs && o0 != o1)
        }
        (
            Subject::VafIndependence { rule, .. },
            Witness::VafDependent {
                graphs,
                vafs,
                outputs,
            },
        ) => {
            if vafs[0].attacks() != vafs[1].attacks() || vafs[0].arguments() != vafs[1].arguments()
            {
                return Ok(false);
            }
            let o0 = combined_mechanism(rule, &JustificationSelector::LexMin, &vafs[0], graphs)?;
            let o1 = combined_mechanism(rule, &JustificationSelector::LexMin, &vafs[1], graphs)?;
            Ok([o0.clone(), o1.clone()] == *outputs && o0 != o1)
        }
        _ => Ok(false),
    }
}
