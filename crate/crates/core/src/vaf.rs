//! Value-based argumentation frameworks, audiences and induced defeat graphs.
//!
//! Arguments and values are interned: a [`Vaf`] owns one [`SymbolTable`] for
//! each, and [`ArgumentId`] / [`ValueId`] are positions in those tables. The
//! declared order of a table is the canonical order used for tie-breaking and
//! lexicographic choices throughout the crate.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                Self(i as u32)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "#{}", self.0)
            }
        }
    };
}

id_type!(
    /// A value, as a position in the framework's value table.
    ValueId
);
id_type!(
    /// An argument, as a position in the framework's argument table.
    ArgumentId
);

/// A directed attack `(attacker, target)`.
pub type Edge = (ArgumentId, ArgumentId);

/// Ordered set of unique, non-empty names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    lookup: HashMap<String, u32>,
}

impl SymbolTable {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = SymbolTable::default();
        for name in names {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::InvariantViolation("empty name".into()));
            }
            if table.lookup.contains_key(&name) {
                return Err(Error::InvariantViolation(format!(
                    "duplicate name `{name}`"
                )));
            }
            table.lookup.insert(name.clone(), table.names.len() as u32);
            table.names.push(name);
        }
        Ok(table)
    }

    /// `prefix1, prefix2, ...` for synthetic search domains.
    pub fn numbered(prefix: &str, count: usize) -> Self {
        Self::new((1..=count).map(|i| format!("{prefix}{i}"))).expect("numbered names are unique")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A strict total order over `0..k` values, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Audience {
    order: Vec<ValueId>,
    position: Vec<u32>,
}

impl Audience {
    /// Fails unless `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<ValueId>) -> Result<Self> {
        let k = order.len();
        let mut position = vec![u32::MAX; k];
        for (pos, v) in order.iter().enumerate() {
            let slot = position
                .get_mut(v.index())
                .ok_or_else(|| Error::UnknownValue(v.to_string()))?;
            if *slot != u32::MAX {
                return Err(Error::InvariantViolation(format!("value {v} ranked twice")));
            }
            *slot = pos as u32;
        }
        Ok(Audience { order, position })
    }

    /// The declared order `v0 > v1 > ... > v(k-1)`.
    pub fn identity(k: usize) -> Self {
        Audience::new((0..k).map(ValueId::from).collect()).expect("identity is a permutation")
    }

    /// Resolves names against `values`; the names must be a permutation of the table.
    pub fn from_names<S: AsRef<str>>(values: &SymbolTable, names: &[S]) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::AudienceMismatch {
                expected: values.len(),
                found: names.len(),
            });
        }
        let order = names
            .iter()
            .map(|n| {
                values
                    .get(n.as_ref())
                    .map(ValueId)
                    .ok_or_else(|| Error::UnknownValue(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Audience::new(order)
    }

    pub fn order(&self) -> &[ValueId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Number of values strictly below `v`.
    pub fn rank(&self, v: ValueId) -> Result<usize> {
        let pos = *self
            .position
            .get(v.index())
            .ok_or_else(|| Error::UnknownValue(v.to_string()))?;
        Ok(self.order.len() - 1 - pos as usize)
    }

    /// `a` strictly preferred to `b`. Both must be in range.
    pub fn prefers(&self, a: ValueId, b: ValueId) -> bool {
        self.position[a.index()] < self.position[b.index()]
    }

    pub fn names<'a>(&self, values: &'a SymbolTable) -> Vec<&'a str> {
        self.order.iter().map(|v| values.name(v.index())).collect()
    }
}

/// Rank of `v` in `audience`: the count of values it dominates.
pub fn rank(audience: &Audience, v: ValueId) -> Result<usize> {
    audience.rank(v)
}

/// A directed graph over the arguments `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttackGraph {
    size: usize,
    edges: BTreeSet<Edge>,
}

impl AttackGraph {
    pub fn new(size: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        if let Some(&(a, b)) = edges
            .iter()
            .find(|(a, b)| a.index() >= size || b.index() >= size)
        {
            let bad = if a.index() >= size { a } else { b };
            return Err(Error::UnknownArgument(bad.to_string()));
        }
        Ok(AttackGraph { size, edges })
    }

    pub fn empty(size: usize) -> Self {
        AttackGraph {
            size,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_names<S: AsRef<str>>(arguments: &SymbolTable, edges: &[(S, S)]) -> Result<Self> {
        let resolve = |n: &S| {
            arguments
                .get(n.as_ref())
                .map(ArgumentId)
                .ok_or_else(|| Error::UnknownArgument(n.as_ref().to_string()))
        };
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((resolve(a)?, resolve(b)?)))
            .collect::<Result<Vec<_>>>()?;
        AttackGraph::new(arguments.len(), edges)
    }

    /// Number of arguments (vertices).
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn contains(&self, edge: Edge) -> bool {
        self.edges.contains(&edge)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn with_edge(&self, edge: Edge) -> Self {
        let mut g = self.clone();
        g.edges.insert(edge);
        g
    }

    pub fn without_edge(&self, edge: Edge) -> Self {
        let mut g = self.clone();
        g.edges.remove(&edge);
        g
    }

    pub fn is_subgraph_of(&self, other: &AttackGraph) -> bool {
        self.size == other.size && self.edges.is_subset(&other.edges)
    }
}

/// A value-based argumentation framework.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vaf {
    values: SymbolTable,
    arguments: SymbolTable,
    labels: Vec<ValueId>,
    attacks: AttackGraph,
}

impl Vaf {
    /// Builds a framework from names. `arguments` pairs each argument with its value.
    pub fn new<S: AsRef<str>>(
        values: &[S],
        arguments: &[(S, S)],
        attacks: &[(S, S)],
    ) -> Result<Self> {
        let values = SymbolTable::new(values.iter().map(|s| s.as_ref().to_string()))?;
        let argument_table =
            SymbolTable::new(arguments.iter().map(|(a, _)| a.as_ref().to_string()))?;
        let labels = arguments
            .iter()
            .map(|(a, v)| {
                values.get(v.as_ref()).map(ValueId).ok_or_else(|| {
                    Error::InvariantViolation(format!(
                        "argument `{}` has undeclared value `{}`",
                        a.as_ref(),
                        v.as_ref()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let attacks = AttackGraph::from_names(&argument_table, attacks).map_err(|e| {
            Error::InvariantViolation(format!("attack on undeclared argument: {e}"))
        })?;
        Vaf::from_parts(values, argument_table, labels, attacks)
    }

    pub fn from_parts(
        values: SymbolTable,
        arguments: SymbolTable,
        labels: Vec<ValueId>,
        attacks: AttackGraph,
    ) -> Result<Self> {
        if labels.len() != arguments.len() {
            return Err(Error::InvariantViolation(
                "every argument needs exactly one value".into(),
            ));
        }
        if attacks.size() != arguments.len() {
            return Err(Error::InvariantViolation(
                "attack graph is over a different argument set".into(),
            ));
        }
        let mut used = vec![false; values.len()];
        for v in &labels {
            *used
                .get_mut(v.index())
                .ok_or_else(|| Error::InvariantViolation(format!("label {v} out of range")))? =
                true;
        }
        if let Some(unused) = used.iter().position(|u| !u) {
            return Err(Error::InvariantViolation(format!(
                "value `{}` labels no argument",
                values.name(unused)
            )));
        }
        Ok(Vaf {
            values,
            arguments,
            labels,
            attacks,
        })
    }

    pub fn values(&self) -> &SymbolTable {
        &self.values
    }

    pub fn arguments(&self) -> &SymbolTable {
        &self.arguments
    }

    pub fn value_count(&self) -> usize {
        self.values.len()
    }

    pub fn argument_count(&self) -> usize {
        self.arguments.len()
    }

    pub fn labels(&self) -> &[ValueId] {
        &self.labels
    }

    pub fn val(&self, a: ArgumentId) -> ValueId {
        self.labels[a.index()]
    }

    /// The attack relation, as a graph over the framework's arguments.
    pub fn attacks(&self) -> &AttackGraph {
        &self.attacks
    }

    pub fn value_id(&self, name: &str) -> Result<ValueId> {
        self.values
            .get(name)
            .map(ValueId)
            .ok_or_else(|| Error::UnknownValue(name.into()))
    }

    pub fn argument_id(&self, name: &str) -> Result<ArgumentId> {
        self.arguments
            .get(name)
            .map(ArgumentId)
            .ok_or_else(|| Error::UnknownArgument(name.into()))
    }

    pub fn audience<S: AsRef<str>>(&self, names: &[S]) -> Result<Audience> {
        Audience::from_names(&self.values, names)
    }

    pub fn graph<S: AsRef<str>>(&self, edges: &[(S, S)]) -> Result<AttackGraph> {
        AttackGraph::from_names(&self.arguments, edges)
    }

    /// Attacks whose endpoints carry different values; only these can be blocked.
    pub fn cross_value_attacks(&self) -> impl Iterator<Item = Edge> + '_ {
        self.attacks
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| self.val(a) != self.val(b))
    }

    pub(crate) fn check_audience(&self, audience: &Audience) -> Result<()> {
        if audience.len() != self.value_count() {
            return Err(Error::AudienceMismatch {
                expected: self.value_count(),
                found: audience.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_graph(&self, graph: &AttackGraph) -> Result<()> {
        if graph.size() != self.argument_count() {
            return Err(Error::ArgumentSetMismatch {
                expected: self.argument_count(),
                found: graph.size(),
            });
        }
        Ok(())
    }

    /// Same arguments and attacks, different labelling.
    pub fn relabel(&self, values: SymbolTable, labels: Vec<ValueId>) -> Result<Vaf> {
        Vaf::from_parts(values, self.arguments.clone(), labels, self.attacks.clone())
    }
}

/// Whether `a` defeats `b` for `audience`: `a` attacks `b` and `val(b)` is not preferred to `val(a)`.
pub fn defeats(vaf: &Vaf, audience: &Audience, a: ArgumentId, b: ArgumentId) -> Result<bool> {
    vaf.check_audience(audience)?;
    for x in [a, b] {
        if x.index() >= vaf.argument_count() {
            return Err(Error::UnknownArgument(x.to_string()));
        }
    }
    Ok(vaf.attacks.contains((a, b)) && !audience.prefers(vaf.val(b), vaf.val(a)))
}

/// The defeat graph of `vaf` induced by `audience`. All arguments are kept.
pub fn induce_defeat_graph(vaf: &Vaf, audience: &Audience) -> Result<AttackGraph> {
    vaf.check_audience(audience)?;
    Ok(AttackGraph {
        size: vaf.argument_count(),
        edges: vaf
            .attacks
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| !audience.prefers(vaf.val(b), vaf.val(a)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{edges, running_vaf};

    #[test]
    fn rank_counts_dominated_values() {
        let vaf = running_vaf();
        let expert1 = vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap();
        let expert2 = vaf.audience(&["EV", "ER", "SF", "IE"]).unwrap();
        assert_eq!(rank(&expert1, vaf.value_id("EV").unwrap()).unwrap(), 3);
        assert_eq!(rank(&expert1, vaf.value_id("ER").unwrap()).unwrap(), 0);
        assert_eq!(rank(&expert2, vaf.value_id("SF").unwrap()).unwrap(), 1);
        assert!(matches!(
            rank(&expert1, ValueId(9)),
            Err(Error::UnknownValue(_))
        ));
    }

    #[test]
    fn defeat_cases() {
        let vaf = running_vaf();
        let id = |n: &str| vaf.argument_id(n).unwrap();
        let expert1 = vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap();
        let expert2 = vaf.audience(&["EV", "ER", "SF", "IE"]).unwrap();
        assert!(!defeats(&vaf, &expert1, id("G"), id("F")).unwrap());
        assert!(!defeats(&vaf, &expert2, id("B"), id("A")).unwrap());
        for order in [
            ["ER", "SF", "EV", "IE"],
            ["IE", "EV", "SF", "ER"],
            ["SF", "ER", "IE", "EV"],
        ] {
            let p = vaf.audience(&order).unwrap();
            assert!(defeats(&vaf, &p, id("C"), id("B")).unwrap());
        }
        // not an attack at all
        assert!(!defeats(&vaf, &expert1, id("A"), id("B")).unwrap());
        assert!(matches!(
            defeats(&vaf, &expert1, ArgumentId(40), id("B")),
            Err(Error::UnknownArgument(_))
        ));
        assert!(matches!(
            defeats(&vaf, &Audience::identity(3), id("B"), id("A")),
            Err(Error::AudienceMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn induces_the_expert_graphs() {
        let vaf = running_vaf();
        let a =
            induce_defeat_graph(&vaf, &vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap()).unwrap();
        let expected_a = edges(&vaf, "B>A D>A C>B E>D F>C F>E F>G");
        assert_eq!(a, expected_a);
        let b =
            induce_defeat_graph(&vaf, &vaf.audience(&["EV", "ER", "SF", "IE"]).unwrap()).unwrap();
        assert_eq!(b, edges(&vaf, "C>B E>D F>C F>E F>G"));
        assert_eq!(b.size(), 7);
    }

    #[test]
    fn single_value_framework_keeps_every_attack() {
        let vaf = Vaf::new(
            &["v"],
            &[("a", "v"), ("b", "v"), ("c", "v")],
            &[("a", "b"), ("b", "c"), ("c", "c")],
        )
        .unwrap();
        let g = induce_defeat_graph(&vaf, &Audience::identity(1)).unwrap();
        assert_eq!(&g, vaf.attacks());
    }

    #[test]
    fn construction_rejects_broken_frameworks() {
        let err = Vaf::new(&["v", "w"], &[("a", "v")], &[]).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
        let err = Vaf::new(&["v"], &[("a", "v")], &[("a", "z")]).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
        let err = Vaf::new(&["v"], &[("a", "v"), ("a", "v")], &[]).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
        let err = Vaf::new(&["v"], &[("a", "w")], &[]).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
        let empty = Vaf::new::<&str>(&[], &[], &[]).unwrap();
        assert_eq!(empty.argument_count(), 0);
    }

    #[test]
    fn audience_must_be_a_permutation() {
        assert!(Audience::new(vec![ValueId(0), ValueId(0)]).is_err());
        assert!(Audience::new(vec![ValueId(0), ValueId(2)]).is_err());
        let vaf = running_vaf();
        assert!(matches!(
            vaf.audience(&["EV", "IE", "SF"]),
            Err(Error::AudienceMismatch { .. })
        ));
        assert!(matches!(
            vaf.audience(&["EV", "IE", "SF", "XX"]),
            Err(Error::UnknownValue(_))
        ));
    }
}
