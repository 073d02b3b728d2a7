//! Recovering the audiences that justify an observed attack graph.
//!
//! Each attack `a -> b` between differently valued arguments pins the relative
//! order of `val(a)` and `val(b)`: kept means `val(a) > val(b)`, dropped means
//! `val(b) > val(a)`. The resulting constraints form a digraph on values; the
//! graph is a defeat graph iff that digraph is acyclic, and its justifying
//! audiences are exactly the linear extensions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::vaf::{
    induce_defeat_graph, ArgumentId, AttackGraph, Audience, Edge, SymbolTable, Vaf, ValueId,
};

/// Largest value set whose audiences we are willing to enumerate.
pub const DEFAULT_MAX_ENUMERATED_VALUES: usize = 8;

/// Strict-order constraints `(u, w)`, read "u must be preferred to w".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintSet {
    value_count: usize,
    constraints: BTreeSet<(ValueId, ValueId)>,
}

impl ConstraintSet {
    pub fn new(
        value_count: usize,
        constraints: impl IntoIterator<Item = (ValueId, ValueId)>,
    ) -> Result<Self> {
        let constraints: BTreeSet<_> = constraints.into_iter().collect();
        for &(u, w) in &constraints {
            if u == w {
                return Err(Error::EqualValues);
            }
            if u.index() >= value_count || w.index() >= value_count {
                return Err(Error::UnknownValue(
                    if u.index() >= value_count { u } else { w }.to_string(),
                ));
            }
        }
        Ok(ConstraintSet {
            value_count,
            constraints,
        })
    }

    pub fn unconstrained(value_count: usize) -> Self {
        ConstraintSet {
            value_count,
            constraints: BTreeSet::new(),
        }
    }

    pub fn value_count(&self) -> usize {
        self.value_count
    }

    pub fn constraints(&self) -> &BTreeSet<(ValueId, ValueId)> {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn is_satisfied_by(&self, audience: &Audience) -> bool {
        audience.len() == self.value_count
            && self
                .constraints
                .iter()
                .all(|&(u, w)| audience.prefers(u, w))
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.value_count];
        for &(u, w) in &self.constraints {
            succ[u.index()].push(w.index());
        }
        succ
    }

    /// A directed cycle, rotated to start at its smallest value, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<ValueId>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let succ = self.successors();
        let mut mark = vec![Mark::New; self.value_count];
        for root in 0..self.value_count {
            if mark[root] != Mark::New {
                continue;
            }
            // iterative DFS; stack holds (vertex, next successor slot)
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Active;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&w) = succ[v].get(*next) {
                    *next += 1;
                    match mark[w] {
                        Mark::New => {
                            mark[w] = Mark::Active;
                            stack.push((w, 0));
                        }
                        Mark::Active => {
                            let start = stack
                                .iter()
                                .position(|&(x, _)| x == w)
                                .expect("active vertex is on the stack");
                            let mut cycle: Vec<ValueId> = stack[start..]
                                .iter()
                                .map(|&(x, _)| ValueId::from(x))
                                .collect();
                            let min = cycle
                                .iter()
                                .enumerate()
                                .min_by_key(|(_, v)| **v)
                                .map(|(i, _)| i)
                                .unwrap_or(0);
                            cycle.rotate_left(min);
                            return Some(cycle);
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[v] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }

    /// The lexicographically smallest linear extension (greedy: smallest available source first).
    pub fn lexmin_extension(&self) -> Option<Audience> {
        let succ = self.successors();
        let mut indegree = vec![0usize; self.value_count];
        for &(_, w) in &self.constraints {
            indegree[w.index()] += 1;
        }
        let mut placed = vec![false; self.value_count];
        let mut order = Vec::with_capacity(self.value_count);
        for _ in 0..self.value_count {
            let next = (0..self.value_count).find(|&v| !placed[v] && indegree[v] == 0)?;
            placed[next] = true;
            for &w in &succ[next] {
                indegree[w] -= 1;
            }
            order.push(ValueId::from(next));
        }
        Some(Audience::new(order).expect("extension is a permutation"))
    }

    /// Every linear extension, in lexicographic order of the value sequence.
    pub fn linear_extensions(&self, max_values: usize) -> Result<Vec<Audience>> {
        if self.value_count > max_values {
            return Err(Error::EnumerationBudgetExceeded {
                values: self.value_count,
                limit: max_values,
            });
        }
        let succ = self.successors();
        let mut indegree = vec![0usize; self.value_count];
        for &(_, w) in &self.constraints {
            indegree[w.index()] += 1;
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.value_count);
        let mut placed = vec![false; self.value_count];
        extend(&succ, &mut indegree, &mut placed, &mut prefix, &mut out);
        Ok(out)
    }
}

fn extend(
    succ: &[Vec<usize>],
    indegree: &mut [usize],
    placed: &mut [bool],
    prefix: &mut Vec<ValueId>,
    out: &mut Vec<Audience>,
) {
    let k = succ.len();
    if prefix.len() == k {
        out.push(Audience::new(prefix.clone()).expect("extension is a permutation"));
        return;
    }
    for v in 0..k {
        if placed[v] || indegree[v] != 0 {
            continue;
        }
        placed[v] = true;
        for &w in &succ[v] {
            indegree[w] -= 1;
        }
        prefix.push(ValueId::from(v));
        extend(succ, indegree, placed, prefix, out);
        prefix.pop();
        for &w in &succ[v] {
            indegree[w] += 1;
        }
        placed[v] = false;
    }
}

/// All audiences over `k` values, in lexicographic order.
pub fn all_audiences(k: usize) -> Result<Vec<Audience>> {
    ConstraintSet::unconstrained(k).linear_extensions(DEFAULT_MAX_ENUMERATED_VALUES)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum JustifiabilityReport {
    Justified(ConstraintSet),
    /// An edge of the graph that the framework does not have as an attack.
    NotSubgraph(Edge),
    /// An attack between equally valued arguments was removed.
    SameValueAttackDropped(Edge),
    /// Contradictory constraints; the cycle reads `c0 > c1 > ... > c0`.
    CyclicConstraints(Vec<ValueId>),
}

impl JustifiabilityReport {
    pub fn is_justified(&self) -> bool {
        matches!(self, JustifiabilityReport::Justified(_))
    }

    pub fn constraints(&self) -> Option<&ConstraintSet> {
        match self {
            JustifiabilityReport::Justified(cs) => Some(cs),
            _ => None,
        }
    }
}

/// Constraint derivation against a bare labelling, shared with the rationaliser.
fn report_for_labels(
    labels: &[ValueId],
    value_count: usize,
    attacks: &AttackGraph,
    af: &AttackGraph,
) -> JustifiabilityReport {
    if let Some(&edge) = af.edges().iter().find(|e| !attacks.contains(**e)) {
        return JustifiabilityReport::NotSubgraph(edge);
    }
    let mut constraints = BTreeSet::new();
    for &(a, b) in attacks.edges() {
        let (va, vb) = (labels[a.index()], labels[b.index()]);
        let kept = af.contains((a, b));
        if va == vb {
            if !kept {
                return JustifiabilityReport::SameValueAttackDropped((a, b));
            }
        } else if kept {
            constraints.insert((va, vb));
        } else {
            constraints.insert((vb, va));
        }
    }
    let cs = ConstraintSet {
        value_count,
        constraints,
    };
    match cs.find_cycle() {
        Some(cycle) => JustifiabilityReport::CyclicConstraints(cycle),
        None => JustifiabilityReport::Justified(cs),
    }
}

pub fn derive_constraints(vaf: &Vaf, af: &AttackGraph) -> Result<JustifiabilityReport> {
    vaf.check_graph(af)?;
    Ok(report_for_labels(
        vaf.labels(),
        vaf.value_count(),
        vaf.attacks(),
        af,
    ))
}

pub fn is_defeat_graph(vaf: &Vaf, af: &AttackGraph) -> Result<bool> {
    Ok(derive_constraints(vaf, af)?.is_justified())
}

/// Every audience inducing `af`, in lexicographic order. Empty iff `af` is not a defeat graph.
pub fn enumerate_justifying_audiences(vaf: &Vaf, af: &AttackGraph) -> Result<Vec<Audience>> {
    enumerate_justifying_audiences_within(vaf, af, DEFAULT_MAX_ENUMERATED_VALUES)
}

pub fn enumerate_justifying_audiences_within(
    vaf: &Vaf,
    af: &AttackGraph,
    max_values: usize,
) -> Result<Vec<Audience>> {
    if vaf.value_count() > max_values {
        return Err(Error::EnumerationBudgetExceeded {
            values: vaf.value_count(),
            limit: max_values,
        });
    }
    match derive_constraints(vaf, af)? {
        JustifiabilityReport::Justified(cs) => cs.linear_extensions(max_values),
        _ => Ok(Vec::new()),
    }
}

/// The lexicographically smallest justifying audience, if any.
pub fn lexmin_justification(vaf: &Vaf, af: &AttackGraph) -> Result<Option<Audience>> {
    Ok(derive_constraints(vaf, af)?
        .constraints()
        .and_then(ConstraintSet::lexmin_extension))
}

/// The distinct defeat graphs of `vaf`, fewest edges first, ties in edge order.
pub fn defeat_graphs(vaf: &Vaf) -> Result<Vec<AttackGraph>> {
    if vaf.value_count() > DEFAULT_MAX_ENUMERATED_VALUES {
        return Err(Error::EnumerationBudgetExceeded {
            values: vaf.value_count(),
            limit: DEFAULT_MAX_ENUMERATED_VALUES,
        });
    }
    let mut graphs = BTreeSet::new();
    for p in all_audiences(vaf.value_count())? {
        graphs.insert(induce_defeat_graph(vaf, &p)?);
    }
    let mut graphs: Vec<_> = graphs.into_iter().collect();
    graphs.sort_by(|a, b| a.edge_count().cmp(&b.edge_count()).then_with(|| a.cmp(b)));
    Ok(graphs)
}

/// Every pair of distinct values is linked by some attack (in either direction).
pub fn has_unique_justification_property(vaf: &Vaf) -> bool {
    let k = vaf.value_count();
    let mut linked = vec![vec![false; k]; k];
    for (a, b) in vaf.cross_value_attacks() {
        let (va, vb) = (vaf.val(a).index(), vaf.val(b).index());
        linked[va][vb] = true;
        linked[vb][va] = true;
    }
    (0..k).all(|u| (u + 1..k).all(|w| linked[u][w]))
}

pub fn is_profile_justified_by(vaf: &Vaf, profile: &[AttackGraph]) -> Result<bool> {
    if profile.is_empty() {
        return Err(Error::EmptyProfile);
    }
    for g in profile {
        if !is_defeat_graph(vaf, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Index of the first profile member that is not a defeat graph of `vaf`.
pub(crate) fn first_unjustified(vaf: &Vaf, profile: &[AttackGraph]) -> Result<Option<usize>> {
    if profile.is_empty() {
        return Err(Error::EmptyProfile);
    }
    for (i, g) in profile.iter().enumerate() {
        if !is_defeat_graph(vaf, g)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Hard caps for the brute-force rationaliser.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationaliseLimits {
    pub max_arguments: usize,
    pub max_values: usize,
    pub max_labelings: u128,
}

impl Default for RationaliseLimits {
    fn default() -> Self {
        RationaliseLimits {
            max_arguments: 8,
            max_values: 4,
            max_labelings: 4u128.pow(8),
        }
    }
}

/// Searches labellings of `candidate_attacks`' arguments with at most `max_values`
/// values (named `v1..`) for one under which every profile member is a defeat
/// graph. Labellings are tried in lexicographic order; the first hit is returned.
pub fn find_justifying_vaf(
    arguments: &SymbolTable,
    profile: &[AttackGraph],
    candidate_attacks: &AttackGraph,
    max_values: usize,
    limits: &RationaliseLimits,
) -> Result<Option<Vaf>> {
    if profile.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let n = arguments.len();
    if candidate_attacks.size() != n {
        return Err(Error::ArgumentSetMismatch {
            expected: n,
            found: candidate_attacks.size(),
        });
    }
    for g in profile {
        if g.size() != n {
            return Err(Error::ArgumentSetMismatch {
                expected: n,
                found: g.size(),
            });
        }
        if let Some(&(a, b)) = g.edges().iter().find(|e| !candidate_attacks.contains(**e)) {
            return Err(Error::EdgeOutsideCandidates(
                arguments.name(a.index()).to_string(),
                arguments.name(b.index()).to_string(),
            ));
        }
    }
    let estimated = (max_values as u128).saturating_pow(n as u32);
    if n > limits.max_arguments
        || max_values > limits.max_values
        || estimated > limits.max_labelings
    {
        return Err(Error::BudgetExceeded {
            estimated,
            cap: limits.max_labelings,
        });
    }
    if n == 0 {
        let vaf = Vaf::from_parts(
            SymbolTable::default(),
            arguments.clone(),
            Vec::new(),
            candidate_attacks.clone(),
        )?;
        return Ok(Some(vaf));
    }
    if max_values == 0 {
        return Ok(None);
    }

    // Only restricted-growth labellings are visited: renaming values in order of
    // first use maps any working labelling to a lexicographically smaller one.
    let mut labels = vec![ValueId(0); n];
    loop {
        let used = labels.iter().map(|v| v.index()).max().map_or(0, |m| m + 1);
        let ok = profile
            .iter()
            .all(|g| report_for_labels(&labels, used, candidate_attacks, g).is_justified());
        if ok {
            let vaf = Vaf::from_parts(
                SymbolTable::numbered("v", used),
                arguments.clone(),
                labels,
                candidate_attacks.clone(),
            )?;
            return Ok(Some(vaf));
        }
        if !next_restricted_growth(&mut labels, max_values) {
            return Ok(None);
        }
    }
}

/// Advances to the next restricted-growth string with entries below `limit`.
fn next_restricted_growth(labels: &mut [ValueId], limit: usize) -> bool {
    for i in (1..labels.len()).rev() {
        let prefix_max = labels[..i].iter().map(|v| v.index()).max().unwrap_or(0);
        let cur = labels[i].index();
        if cur < limit - 1 && cur <= prefix_max {
            labels[i] = ValueId::from(cur + 1);
            for l in &mut labels[i + 1..] {
                *l = ValueId(0);
            }
            return true;
        }
    }
    false
}

/// Edge between raw argument indices.
pub fn edge(a: usize, b: usize) -> Edge {
    (ArgumentId::from(a), ArgumentId::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{cycle_vaf, edges, running_vaf, v};

    fn names(vaf: &Vaf, cs: &ConstraintSet) -> BTreeSet<(String, String)> {
        cs.constraints()
            .iter()
            .map(|&(u, w)| {
                (
                    vaf.values().name(u.index()).to_string(),
                    vaf.values().name(w.index()).to_string(),
                )
            })
            .collect()
    }

    #[test]
    fn constraints_for_expert_one() {
        let vaf = running_vaf();
        let af = edges(&vaf, "B>A D>A C>B E>D F>C F>E F>G");
        let report = derive_constraints(&vaf, &af).unwrap();
        let cs = report.constraints().expect("justified");
        let expected: BTreeSet<(String, String)> = [
            ("SF", "ER"),
            ("IE", "ER"),
            ("EV", "SF"),
            ("EV", "IE"),
            ("EV", "ER"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(names(&vaf, cs), expected);
    }

    #[test]
    fn dropped_same_value_attack_is_reported() {
        let vaf = running_vaf();
        let af = vaf
            .attacks()
            .without_edge((vaf.argument_id("C").unwrap(), vaf.argument_id("B").unwrap()));
        let report = derive_constraints(&vaf, &af).unwrap();
        assert_eq!(
            report,
            JustifiabilityReport::SameValueAttackDropped((
                vaf.argument_id("C").unwrap(),
                vaf.argument_id("B").unwrap()
            ))
        );
    }

    #[test]
    fn non_subgraph_is_reported() {
        let vaf = running_vaf();
        let af = edges(&vaf, "A>B");
        assert!(matches!(
            derive_constraints(&vaf, &af).unwrap(),
            JustifiabilityReport::NotSubgraph(_)
        ));
        assert!(enumerate_justifying_audiences(&vaf, &af)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn three_cycle_with_nothing_kept_is_cyclic() {
        let vaf = cycle_vaf(3);
        let report = derive_constraints(&vaf, &AttackGraph::empty(3)).unwrap();
        // v2 > v1, v3 > v2, v1 > v3
        assert_eq!(
            report,
            JustifiabilityReport::CyclicConstraints(vec![v(0), v(2), v(1)])
        );
    }

    #[test]
    fn argument_set_mismatch() {
        let vaf = running_vaf();
        assert!(matches!(
            derive_constraints(&vaf, &AttackGraph::empty(3)),
            Err(Error::ArgumentSetMismatch {
                expected: 7,
                found: 3
            })
        ));
    }

    #[test]
    fn defeat_graph_cases() {
        let vaf = running_vaf();
        assert!(is_defeat_graph(&vaf, &edges(&vaf, "B>A C>B E>D F>C F>E F>G")).unwrap());
        assert!(!is_defeat_graph(&vaf, vaf.attacks()).unwrap());
        let single =
            Vaf::new(&["v"], &[("a", "v"), ("b", "v")], &[("a", "b"), ("b", "a")]).unwrap();
        assert!(is_defeat_graph(&single, single.attacks()).unwrap());
    }

    #[test]
    fn justifying_audiences_of_expert_one() {
        let vaf = running_vaf();
        let af = edges(&vaf, "B>A D>A C>B E>D F>C F>E F>G");
        let got = enumerate_justifying_audiences(&vaf, &af).unwrap();
        let expected = vec![
            vaf.audience(&["EV", "SF", "IE", "ER"]).unwrap(),
            vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap(),
        ];
        assert_eq!(got.len(), 2);
        for e in &expected {
            assert!(got.contains(e));
        }
    }

    #[test]
    fn mutual_attack_keeping_one_side() {
        let vaf = Vaf::new(
            &["v1", "v2"],
            &[("a", "v1"), ("b", "v2")],
            &[("a", "b"), ("b", "a")],
        )
        .unwrap();
        let got = enumerate_justifying_audiences(&vaf, &vaf.graph(&[("a", "b")]).unwrap()).unwrap();
        assert_eq!(got, vec![vaf.audience(&["v1", "v2"]).unwrap()]);
    }

    #[test]
    fn enumeration_budget() {
        let vaf = cycle_vaf(9);
        assert!(matches!(
            enumerate_justifying_audiences(&vaf, vaf.attacks()),
            Err(Error::EnumerationBudgetExceeded {
                values: 9,
                limit: 8
            })
        ));
    }

    #[test]
    fn unique_justification_property_cases() {
        assert!(!has_unique_justification_property(&running_vaf()));
        let pair = Vaf::new(
            &["v1", "v2"],
            &[("a", "v1"), ("b", "v2")],
            &[("a", "b"), ("b", "a")],
        )
        .unwrap();
        assert!(has_unique_justification_property(&pair));
        let line = Vaf::new(
            &["v1", "v2", "v3"],
            &[("a1", "v1"), ("a2", "v2"), ("a3", "v3")],
            &[("a1", "a2"), ("a2", "a3")],
        )
        .unwrap();
        assert!(!has_unique_justification_property(&line));
    }

    #[test]
    fn profile_justification() {
        let vaf = cycle_vaf(4);
        let singles: Vec<_> = (0..4)
            .map(|i| AttackGraph::new(4, [edge(i, (i + 1) % 4)]).unwrap())
            .collect();
        assert!(is_profile_justified_by(&vaf, &singles).unwrap());
        assert!(matches!(
            is_profile_justified_by(&vaf, &[]),
            Err(Error::EmptyProfile)
        ));
        let outside = AttackGraph::new(4, [edge(1, 0)]).unwrap();
        assert!(!is_profile_justified_by(&vaf, &[outside]).unwrap());
    }

    #[test]
    fn lexmin_uses_declared_order() {
        let vaf = running_vaf();
        let af = edges(&vaf, "B>A D>A C>B E>D F>C F>E F>G");
        let got = lexmin_justification(&vaf, &af).unwrap().unwrap();
        assert_eq!(got, vaf.audience(&["EV", "SF", "IE", "ER"]).unwrap());
    }

    #[test]
    fn rationaliser_cases() {
        let vaf = running_vaf();
        let a = edges(&vaf, "B>A D>A C>B E>D F>C F>E F>G");
        let b = edges(&vaf, "C>B E>D F>C F>E F>G");
        let limits = RationaliseLimits::default();
        let found = find_justifying_vaf(
            vaf.arguments(),
            &[a.clone(), b.clone()],
            vaf.attacks(),
            4,
            &limits,
        )
        .unwrap()
        .expect("running labelling is a witness");
        assert!(is_profile_justified_by(&found, &[a, b]).unwrap());

        let all = find_justifying_vaf(
            vaf.arguments(),
            &[vaf.attacks().clone()],
            vaf.attacks(),
            3,
            &limits,
        )
        .unwrap()
        .unwrap();
        assert_eq!(all.value_count(), 1);

        let args = SymbolTable::new(["a", "b"]).unwrap();
        let mutual = AttackGraph::new(2, [edge(0, 1), edge(1, 0)]).unwrap();
        let p = [
            AttackGraph::new(2, [edge(0, 1)]).unwrap(),
            AttackGraph::new(2, [edge(1, 0)]).unwrap(),
        ];
        let found = find_justifying_vaf(&args, &p, &mutual, 2, &limits)
            .unwrap()
            .unwrap();
        assert_ne!(found.val(ArgumentId(0)), found.val(ArgumentId(1)));
        assert!(find_justifying_vaf(&args, &p, &mutual, 1, &limits)
            .unwrap()
            .is_none());
    }

    #[test]
    fn rationaliser_caps() {
        let args = SymbolTable::numbered("a", 9);
        let g = AttackGraph::empty(9);
        assert!(matches!(
            find_justifying_vaf(
                &args,
                std::slice::from_ref(&g),
                &g,
                2,
                &RationaliseLimits::default()
            ),
            Err(Error::BudgetExceeded { .. })
        ));
        let args = SymbolTable::numbered("a", 2);
        let g = AttackGraph::new(2, [edge(0, 1)]).unwrap();
        assert!(matches!(
            find_justifying_vaf(
                &args,
                &[g],
                &AttackGraph::empty(2),
                2,
                &RationaliseLimits::default()
            ),
            Err(Error::EdgeOutsideCandidates(..))
        ));
    }

    #[test]
    fn restricted_growth_enumeration_counts() {
        // Bell-number-like counts truncated at `limit` blocks: S(4,1)+S(4,2) = 1 + 7
        let mut labels = vec![ValueId(0); 4];
        let mut count = 1;
        while next_restricted_growth(&mut labels, 2) {
            count += 1;
        }
        assert_eq!(count, 8);
    }
}
