//! JSON documents and DOT rendering.
//!
//! Each document kind has a serde mirror (`*Doc`) and a pair of conversions to
//! and from the library types. Names are resolved against symbol tables: a
//! framework's when one is supplied, otherwise the names the document declares.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::axioms::{
    GraphAggregator, GraphAxiom, GraphDomain, PrefAxiom, SearchBounds, Status, Subject, Verdict,
    Witness,
};
use crate::error::{Error, Result};
use crate::graphagg::{GraphProfile, GraphRule, Quota};
use crate::justification::{derive_constraints, ConstraintSet, JustifiabilityReport};
use crate::prefagg::{PrefRule, PreferenceProfile};
use crate::vaf::{ArgumentId, AttackGraph, Audience, Edge, SymbolTable, Vaf, ValueId};

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

type NamePair = (String, String);

fn edge_names(arguments: &SymbolTable, (a, b): Edge) -> NamePair {
    (
        arguments.name(a.index()).to_string(),
        arguments.name(b.index()).to_string(),
    )
}

fn edge_from_names(arguments: &SymbolTable, (a, b): &NamePair) -> Result<Edge> {
    let id = |n: &str| {
        arguments
            .get(n)
            .map(ArgumentId)
            .ok_or_else(|| Error::UnknownArgument(n.to_string()))
    };
    Ok((id(a)?, id(b)?))
}

fn value_from_name(values: &SymbolTable, name: &str) -> Result<ValueId> {
    values
        .get(name)
        .map(ValueId)
        .ok_or_else(|| Error::UnknownValue(name.to_string()))
}

fn exactly_two<T>(items: Vec<T>, what: &str) -> Result<[T; 2]> {
    items
        .try_into()
        .map_err(|v: Vec<T>| Error::Parse(format!("{what}: expected 2 entries, found {}", v.len())))
}

// ---- frameworks ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArgumentDoc {
    pub id: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VafDoc {
    pub values: Vec<String>,
    pub arguments: Vec<ArgumentDoc>,
    pub attacks: Vec<NamePair>,
}

pub fn parse_vaf(text: &str) -> Result<Vaf> {
    vaf_from_doc(&parse_json(text, "framework")?)
}

pub fn vaf_from_doc(doc: &VafDoc) -> Result<Vaf> {
    let arguments: Vec<(&str, &str)> = doc
        .arguments
        .iter()
        .map(|a| (a.id.as_str(), a.value.as_str()))
        .collect();
    let attacks: Vec<(&str, &str)> = doc
        .attacks
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let values: Vec<&str> = doc.values.iter().map(String::as_str).collect();
    Vaf::new(&values, &arguments, &attacks)
}

pub fn vaf_to_doc(vaf: &Vaf) -> VafDoc {
    VafDoc {
        values: vaf.values().names().to_vec(),
        arguments: (0..vaf.argument_count())
            .map(|i| ArgumentDoc {
                id: vaf.arguments().name(i).to_string(),
                value: vaf.values().name(vaf.labels()[i].index()).to_string(),
            })
            .collect(),
        attacks: vaf
            .attacks()
            .edges()
            .iter()
            .map(|&e| edge_names(vaf.arguments(), e))
            .collect(),
    }
}

// ---- audiences ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AudienceDoc {
    pub order: Vec<String>,
}

/// Members share `values` when given; otherwise the framework's value order,
/// or failing that the first member's listing, is the declared order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AudienceProfileDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    pub members: Vec<AudienceDoc>,
}

pub fn audience_from_doc(values: &SymbolTable, doc: &AudienceDoc) -> Result<Audience> {
    Audience::from_names(values, &doc.order)
}

pub fn audience_to_doc(values: &SymbolTable, audience: &Audience) -> AudienceDoc {
    AudienceDoc {
        order: audience
            .names(values)
            .into_iter()
            .map(String::from)
            .collect(),
    }
}

pub fn audience_profile_from_doc(
    doc: &AudienceProfileDoc,
    framework_values: Option<&SymbolTable>,
) -> Result<(SymbolTable, PreferenceProfile)> {
    let values = match (framework_values, &doc.values, doc.members.first()) {
        (Some(t), _, _) => t.clone(),
        (None, Some(names), _) => SymbolTable::new(names.iter().cloned())?,
        (None, None, Some(first)) => SymbolTable::new(first.order.iter().cloned())?,
        (None, None, None) => return Err(Error::EmptyProfile),
    };
    let audiences = doc
        .members
        .iter()
        .map(|m| audience_from_doc(&values, m))
        .collect::<Result<Vec<_>>>()?;
    Ok((values.clone(), PreferenceProfile::new(audiences)?))
}

pub fn audience_profile_to_doc(
    values: &SymbolTable,
    profile: &PreferenceProfile,
) -> AudienceProfileDoc {
    AudienceProfileDoc {
        values: Some(values.names().to_vec()),
        members: profile
            .audiences()
            .iter()
            .map(|a| audience_to_doc(values, a))
            .collect(),
    }
}

// ---- graphs ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arguments: Option<Vec<String>>,
    pub edges: Vec<NamePair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphProfileDoc {
    pub members: Vec<GraphDoc>,
}

fn same_arguments(table: &SymbolTable, declared: &Option<Vec<String>>) -> Result<()> {
    match declared {
        Some(names) if names.as_slice() != table.names() => Err(Error::Parse(format!(
            "graph declares arguments {names:?}, expected {:?}",
            table.names()
        ))),
        _ => Ok(()),
    }
}

pub fn graph_from_doc(
    doc: &GraphDoc,
    arguments: Option<&SymbolTable>,
) -> Result<(SymbolTable, AttackGraph)> {
    let table = match (arguments, &doc.arguments) {
        (Some(t), _) => t.clone(),
        (None, Some(names)) => SymbolTable::new(names.iter().cloned())?,
        (None, None) => {
            return Err(Error::Parse(
                "graph has no \"arguments\" and no framework was given".into(),
            ))
        }
    };
    same_arguments(&table, &doc.arguments)?;
    let edges = doc
        .edges
        .iter()
        .map(|e| edge_from_names(&table, e))
        .collect::<Result<Vec<_>>>()?;
    let graph = AttackGraph::new(table.len(), edges)?;
    Ok((table, graph))
}

pub fn graph_to_doc(arguments: &SymbolTable, graph: &AttackGraph) -> GraphDoc {
    GraphDoc {
        arguments: Some(arguments.names().to_vec()),
        edges: graph
            .edges()
            .iter()
            .map(|&e| edge_names(arguments, e))
            .collect(),
    }
}

pub fn graph_profile_from_doc(
    doc: &GraphProfileDoc,
    arguments: Option<&SymbolTable>,
) -> Result<(SymbolTable, GraphProfile)> {
    let first = doc.members.first().ok_or(Error::EmptyProfile)?;
    let (table, _) = graph_from_doc(first, arguments)?;
    let graphs = doc
        .members
        .iter()
        .map(|m| graph_from_doc(m, Some(&table)).map(|(_, g)| g))
        .collect::<Result<Vec<_>>>()?;
    Ok((table, GraphProfile::new(graphs)?))
}

pub fn graph_profile_to_doc(arguments: &SymbolTable, profile: &GraphProfile) -> GraphProfileDoc {
    GraphProfileDoc {
        members: profile
            .graphs()
            .iter()
            .map(|g| graph_to_doc(arguments, g))
            .collect(),
    }
}

// ---- rules ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum RuleDoc {
    Borda {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tiebreak: Option<Vec<String>>,
    },
    Quota {
        q: String,
    },
    Majority,
    Dictator {
        index: usize,
    },
    Representative,
}

/// Parses `1/2`, `0.5` or `1` exactly.
pub fn parse_quota(text: &str) -> Result<Quota> {
    let bad = || Error::Parse(format!("invalid quota `{text}`"));
    let digits = |s: &str| -> Result<u64> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    let q = if let Some((n, d)) = text.split_once('/') {
        let d = digits(d)?;
        if d == 0 {
            return Err(bad());
        }
        Quota::new(digits(n)?, d)
    } else if let Some((whole, frac)) = text.split_once('.') {
        let scale = 10u64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let whole = if whole.is_empty() { 0 } else { digits(whole)? };
        let numer = whole
            .checked_mul(scale)
            .and_then(|w| w.checked_add(digits(frac).ok()?))
            .ok_or_else(bad)?;
        Quota::new(numer, scale)
    } else {
        Quota::from_integer(digits(text)?)
    };
    if q > Quota::from_integer(1) {
        return Err(Error::Parse(format!("quota `{text}` is above 1")));
    }
    Ok(q)
}

pub fn quota_to_string(q: Quota) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses an inline rule: `borda`, `borda:ER>SF>IE>EV`, `quota:1/2`,
/// `majority`, `dictator:0` or `representative`.
pub fn parse_rule_spec(spec: &str) -> Result<RuleDoc> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let missing = || {
        Error::Parse(format!(
            "rule `{name}` needs a parameter, as in `{name}:...`"
        ))
    };
    match (name, arg) {
        ("borda", None) => Ok(RuleDoc::Borda { tiebreak: None }),
        ("borda", Some(order)) => Ok(RuleDoc::Borda {
            tiebreak: Some(order.split('>').map(|s| s.trim().to_string()).collect()),
        }),
        ("quota", Some(q)) => {
            parse_quota(q)?;
            Ok(RuleDoc::Quota { q: q.to_string() })
        }
        ("quota", None) | ("dictator", None) => Err(missing()),
        ("majority", None) => Ok(RuleDoc::Majority),
        ("dictator", Some(i)) => i
            .parse()
            .map(|index| RuleDoc::Dictator { index })
            .map_err(|_| Error::Parse(format!("invalid dictator index `{i}`"))),
        ("representative", None) => Ok(RuleDoc::Representative),
        _ => Err(Error::Parse(format!("unknown rule `{spec}`"))),
    }
}

impl RuleDoc {
    /// `true` for rules that only aggregate graphs.
    pub fn is_graph_only(&self) -> bool {
        matches!(
            self,
            RuleDoc::Quota { .. } | RuleDoc::Majority | RuleDoc::Representative
        )
    }

    pub fn to_pref_rule(&self, values: &SymbolTable) -> Result<PrefRule> {
        match self {
            RuleDoc::Borda { tiebreak: None } => Ok(PrefRule::borda()),
            RuleDoc::Borda {
                tiebreak: Some(order),
            } => Ok(PrefRule::Borda {
                tiebreak: Some(Audience::from_names(values, order)?),
            }),
            RuleDoc::Dictator { index } => Ok(PrefRule::Dictator { index: *index }),
            _ => Err(Error::Parse(
                "expected a preference rule (borda or dictator)".into(),
            )),
        }
    }

    pub fn to_graph_rule(&self) -> Result<GraphRule> {
        match self {
            RuleDoc::Quota { q } => GraphRule::quota(parse_quota(q)?),
            RuleDoc::Majority => Ok(GraphRule::Majority),
            RuleDoc::Dictator { index } => Ok(GraphRule::Dictator { index: *index }),
            RuleDoc::Representative => Ok(GraphRule::RepresentativeVoter),
            RuleDoc::Borda { .. } => Err(Error::Parse(
                "expected a graph rule (quota, majority, dictator or representative)".into(),
            )),
        }
    }
}

pub fn pref_rule_to_doc(values: &SymbolTable, rule: &PrefRule) -> RuleDoc {
    match rule {
        PrefRule::Borda { tiebreak } => RuleDoc::Borda {
            tiebreak: tiebreak.as_ref().map(|t| audience_to_doc(values, t).order),
        },
        PrefRule::Dictator { index } => RuleDoc::Dictator { index: *index },
    }
}

pub fn graph_rule_to_doc(rule: &GraphRule) -> RuleDoc {
    match rule {
        GraphRule::Quota { q } => RuleDoc::Quota {
            q: quota_to_string(*q),
        },
        GraphRule::Majority => RuleDoc::Majority,
        GraphRule::Dictator { index } => RuleDoc::Dictator { index: *index },
        GraphRule::RepresentativeVoter => RuleDoc::Representative,
    }
}

// ---- search bounds ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsDoc {
    pub max_values: usize,
    pub max_agents: usize,
    pub max_arguments: usize,
    pub max_attacks: usize,
    pub max_cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_budget_ms: Option<u64>,
}

impl Default for BoundsDoc {
    fn default() -> Self {
        bounds_to_doc(&SearchBounds::default())
    }
}

pub fn bounds_from_doc(doc: &BoundsDoc) -> SearchBounds {
    SearchBounds {
        max_values: doc.max_values,
        max_agents: doc.max_agents,
        max_arguments: doc.max_arguments,
        max_attacks: doc.max_attacks,
        max_cases: doc.max_cases as u128,
        time_budget: doc.time_budget_ms.map(std::time::Duration::from_millis),
    }
}

pub fn bounds_to_doc(bounds: &SearchBounds) -> BoundsDoc {
    BoundsDoc {
        max_values: bounds.max_values,
        max_agents: bounds.max_agents,
        max_arguments: bounds.max_arguments,
        max_attacks: bounds.max_attacks,
        max_cases: bounds.max_cases.min(u64::MAX as u128) as u64,
        time_budget_ms: bounds.time_budget.map(|d| d.as_millis() as u64),
    }
}

// ---- justification reports ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReportDoc {
    /// Each pair is `[preferred, dispreferred]`.
    Justified {
        constraints: Vec<NamePair>,
    },
    NotSubgraph {
        edge: NamePair,
    },
    SameValueAttackDropped {
        edge: NamePair,
    },
    CyclicConstraints {
        cycle: Vec<String>,
    },
}

pub fn report_to_doc(vaf: &Vaf, report: &JustifiabilityReport) -> ReportDoc {
    let value = |v: &ValueId| vaf.values().name(v.index()).to_string();
    match report {
        JustifiabilityReport::Justified(cs) => ReportDoc::Justified {
            constraints: cs
                .constraints()
                .iter()
                .map(|(a, b)| (value(a), value(b)))
                .collect(),
        },
        JustifiabilityReport::NotSubgraph(e) => ReportDoc::NotSubgraph {
            edge: edge_names(vaf.arguments(), *e),
        },
        JustifiabilityReport::SameValueAttackDropped(e) => ReportDoc::SameValueAttackDropped {
            edge: edge_names(vaf.arguments(), *e),
        },
        JustifiabilityReport::CyclicConstraints(c) => ReportDoc::CyclicConstraints {
            cycle: c.iter().map(value).collect(),
        },
    }
}

pub fn report_from_doc(vaf: &Vaf, doc: &ReportDoc) -> Result<JustifiabilityReport> {
    let value = |n: &String| value_from_name(vaf.values(), n);
    Ok(match doc {
        ReportDoc::Justified { constraints } => {
            JustifiabilityReport::Justified(ConstraintSet::new(
                vaf.value_count(),
                constraints
                    .iter()
                    .map(|(a, b)| Ok((value(a)?, value(b)?)))
                    .collect::<Result<Vec<_>>>()?,
            )?)
        }
        ReportDoc::NotSubgraph { edge } => {
            JustifiabilityReport::NotSubgraph(edge_from_names(vaf.arguments(), edge)?)
        }
        ReportDoc::SameValueAttackDropped { edge } => {
            JustifiabilityReport::SameValueAttackDropped(edge_from_names(vaf.arguments(), edge)?)
        }
        ReportDoc::CyclicConstraints { cycle } => {
            JustifiabilityReport::CyclicConstraints(cycle.iter().map(value).collect::<Result<_>>()?)
        }
    })
}

// ---- verdicts ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    PrefAxiom,
    GraphAxiom,
    Inheritance,
    Preservation,
    InterpretationIndependence,
    VafIndependence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubjectDoc {
    pub check: CheckKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
    pub rule: RuleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vaf: Option<VafDoc>,
    /// Size of the value set for preference searches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<usize>,
    /// Size of the argument universe for unrestricted graph searches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arguments: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agents: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessDoc {
    PrefUnanimity {
        profile: AudienceProfileDoc,
        pair: NamePair,
        output: AudienceDoc,
    },
    PrefAnonymity {
        profile: AudienceProfileDoc,
        permutation: Vec<usize>,
        outputs: Vec<AudienceDoc>,
    },
    PrefIndependence {
        profiles: Vec<AudienceProfileDoc>,
        pair: NamePair,
        outputs: Vec<AudienceDoc>,
    },
    PrefDictatorship {
        agent: usize,
    },
    GraphUnanimity {
        profile: GraphProfileDoc,
        edge: NamePair,
        output: GraphDoc,
    },
    GraphAnonymity {
        profile: GraphProfileDoc,
        permutation: Vec<usize>,
        outputs: Vec<GraphDoc>,
    },
    GraphIndependence {
        profiles: Vec<GraphProfileDoc>,
        edge: NamePair,
        outputs: Vec<GraphDoc>,
    },
    GraphMonotonicity {
        profiles: Vec<GraphProfileDoc>,
        agent: usize,
        edge: NamePair,
        outputs: Vec<GraphDoc>,
    },
    GraphDictatorship {
        agent: usize,
    },
    NotPreserved {
        profile: GraphProfileDoc,
        output: GraphDoc,
        report: ReportDoc,
    },
    InterpretationDependent {
        profile: GraphProfileDoc,
        justifications: Vec<AudienceProfileDoc>,
        outputs: Vec<GraphDoc>,
    },
    VafDependent {
        profile: GraphProfileDoc,
        vafs: Vec<VafDoc>,
        outputs: Vec<GraphDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictDoc {
    pub holds: bool,
    pub checked: u64,
    pub subject: SubjectDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

/// Symbol tables a subject's witnesses are written against.
struct Names {
    values: SymbolTable,
    arguments: SymbolTable,
    vaf: Option<Vaf>,
}

fn subject_names(subject: &Subject) -> Names {
    let of_vaf = |vaf: &Vaf| Names {
        values: vaf.values().clone(),
        arguments: vaf.arguments().clone(),
        vaf: Some(vaf.clone()),
    };
    match subject {
        Subject::Pref { values, .. } => Names {
            values: SymbolTable::numbered("v", *values),
            arguments: SymbolTable::default(),
            vaf: None,
        },
        Subject::Graph {
            aggregator: GraphAggregator::Induced { vaf, .. },
            ..
        } => of_vaf(vaf),
        Subject::Graph {
            domain: GraphDomain::DefeatGraphs(vaf),
            ..
        } => of_vaf(vaf),
        Subject::Graph {
            domain: GraphDomain::AllGraphs { arguments },
            ..
        } => Names {
            values: SymbolTable::default(),
            arguments: SymbolTable::numbered("a", *arguments),
            vaf: None,
        },
        Subject::Preservation { vaf, .. } | Subject::InterpretationIndependence { vaf, .. } => {
            of_vaf(vaf)
        }
        Subject::VafIndependence { bounds, .. } => Names {
            values: SymbolTable::numbered("v", bounds.max_values),
            arguments: SymbolTable::numbered("a", bounds.max_arguments),
            vaf: None,
        },
    }
}

fn subject_to_doc(subject: &Subject, names: &Names) -> SubjectDoc {
    let blank = |check, rule| SubjectDoc {
        check,
        axiom: None,
        rule,
        vaf: None,
        values: None,
        arguments: None,
        agents: None,
        bounds: None,
    };
    match subject {
        Subject::Pref {
            rule,
            axiom,
            values,
            agents,
        } => SubjectDoc {
            axiom: Some(axiom.name().into()),
            values: Some(*values),
            agents: Some(*agents),
            ..blank(CheckKind::PrefAxiom, pref_rule_to_doc(&names.values, rule))
        },
        Subject::Graph {
            aggregator,
            axiom,
            domain,
            agents,
        } => {
            let (check, rule) = match aggregator {
                GraphAggregator::Rule(r) => (CheckKind::GraphAxiom, graph_rule_to_doc(r)),
                GraphAggregator::Induced { rule, .. } => (
                    CheckKind::Inheritance,
                    pref_rule_to_doc(&names.values, rule),
                ),
            };
            let arguments = match domain {
                GraphDomain::AllGraphs { arguments } => Some(*arguments),
                GraphDomain::DefeatGraphs(_) => None,
            };
            SubjectDoc {
                axiom: Some(axiom.name().into()),
                vaf: names.vaf.as_ref().map(vaf_to_doc),
                arguments,
                agents: Some(*agents),
                ..blank(check, rule)
            }
        }
        Subject::Preservation { rule, vaf, agents } => SubjectDoc {
            vaf: Some(vaf_to_doc(vaf)),
            agents: Some(*agents),
            ..blank(CheckKind::Preservation, graph_rule_to_doc(rule))
        },
        Subject::InterpretationIndependence { rule, vaf, agents } => SubjectDoc {
            vaf: Some(vaf_to_doc(vaf)),
            agents: Some(*agents),
            ..blank(
                CheckKind::InterpretationIndependence,
                pref_rule_to_doc(&names.values, rule),
            )
        },
        Subject::VafIndependence { rule, bounds } => SubjectDoc {
            bounds: Some(bounds_to_doc(bounds)),
            ..blank(
                CheckKind::VafIndependence,
                pref_rule_to_doc(&names.values, rule),
            )
        },
    }
}

fn subject_from_doc(doc: &SubjectDoc) -> Result<Subject> {
    let field = |name: &str| Error::Parse(format!("verdict subject is missing \"{name}\""));
    let vaf = || -> Result<Vaf> { vaf_from_doc(doc.vaf.as_ref().ok_or_else(|| field("vaf"))?) };
    let agents = || doc.agents.ok_or_else(|| field("agents"));
    let axiom = || doc.axiom.as_deref().ok_or_else(|| field("axiom"));
    Ok(match doc.check {
        CheckKind::PrefAxiom => {
            let values = doc.values.ok_or_else(|| field("values"))?;
            Subject::Pref {
                rule: doc.rule.to_pref_rule(&SymbolTable::numbered("v", values))?,
                axiom: axiom()?.parse::<PrefAxiom>()?,
                values,
                agents: agents()?,
            }
        }
        CheckKind::GraphAxiom => {
            let domain = match (&doc.vaf, doc.arguments) {
                (Some(_), _) => GraphDomain::DefeatGraphs(vaf()?),
                (None, Some(arguments)) => GraphDomain::AllGraphs { arguments },
                (None, None) => return Err(field("arguments")),
            };
            Subject::Graph {
                aggregator: GraphAggregator::Rule(doc.rule.to_graph_rule()?),
                axiom: axiom()?.parse::<GraphAxiom>()?,
                domain,
                agents: agents()?,
            }
        }
        CheckKind::Inheritance => {
            let vaf = vaf()?;
            Subject::Graph {
                aggregator: GraphAggregator::Induced {
                    rule: doc.rule.to_pref_rule(vaf.values())?,
                    vaf: vaf.clone(),
                },
                axiom: axiom()?.parse::<GraphAxiom>()?,
                domain: GraphDomain::DefeatGraphs(vaf),
                agents: agents()?,
            }
        }
        CheckKind::Preservation => Subject::Preservation {
            rule: doc.rule.to_graph_rule()?,
            vaf: vaf()?,
            agents: agents()?,
        },
        CheckKind::InterpretationIndependence => {
            let vaf = vaf()?;
            Subject::InterpretationIndependence {
                rule: doc.rule.to_pref_rule(vaf.values())?,
                vaf,
                agents: agents()?,
            }
        }
        CheckKind::VafIndependence => {
            let bounds = bounds_from_doc(doc.bounds.as_ref().ok_or_else(|| field("bounds"))?);
            let values = SymbolTable::numbered("v", bounds.max_values);
            Subject::VafIndependence {
                rule: doc.rule.to_pref_rule(&values)?,
                bounds,
            }
        }
    })
}

fn witness_to_doc(witness: &Witness, names: &Names) -> WitnessDoc {
    let value = |v: ValueId| names.values.name(v.index()).to_string();
    let pair = |(a, b): (ValueId, ValueId)| (value(a), value(b));
    let edge = |e: Edge| edge_names(&names.arguments, e);
    let prefs = |p: &PreferenceProfile| audience_profile_to_doc(&names.values, p);
    let audience = |a: &Audience| audience_to_doc(&names.values, a);
    let graphs = |p: &GraphProfile| graph_profile_to_doc(&names.arguments, p);
    let graph = |g: &AttackGraph| graph_to_doc(&names.arguments, g);
    match witness {
        Witness::PrefUnanimity {
            profile,
            pair: p,
            output,
        } => WitnessDoc::PrefUnanimity {
            profile: prefs(profile),
            pair: pair(*p),
            output: audience(output),
        },
        Witness::PrefAnonymity {
            profile,
            permutation,
            outputs,
        } => WitnessDoc::PrefAnonymity {
            profile: prefs(profile),
            permutation: permutation.clone(),
            outputs: outputs.iter().map(audience).collect(),
        },
        Witness::PrefIndependence {
            profiles,
            pair: p,
            outputs,
        } => WitnessDoc::PrefIndependence {
            profiles: profiles.iter().map(prefs).collect(),
            pair: pair(*p),
            outputs: outputs.iter().map(audience).collect(),
        },
        Witness::PrefDictatorship { agent } => WitnessDoc::PrefDictatorship { agent: *agent },
        Witness::GraphUnanimity {
            profile,
            edge: e,
            output,
        } => WitnessDoc::GraphUnanimity {
            profile: graphs(profile),
            edge: edge(*e),
            output: graph(output),
        },
        Witness::GraphAnonymity {
            profile,
            permutation,
            outputs,
        } => WitnessDoc::GraphAnonymity {
            profile: graphs(profile),
            permutation: permutation.clone(),
            outputs: outputs.iter().map(graph).collect(),
        },
        Witness::GraphIndependence {
            profiles,
            edge: e,
            outputs,
        } => WitnessDoc::GraphIndependence {
            profiles: profiles.iter().map(graphs).collect(),
            edge: edge(*e),
            outputs: outputs.iter().map(graph).collect(),
        },
        Witness::GraphMonotonicity {
            profiles,
            agent,
            edge: e,
            outputs,
        } => WitnessDoc::GraphMonotonicity {
            profiles: profiles.iter().map(graphs).collect(),
            agent: *agent,
            edge: edge(*e),
            outputs: outputs.iter().map(graph).collect(),
        },
        Witness::GraphDictatorship { agent } => WitnessDoc::GraphDictatorship { agent: *agent },
        Witness::NotPreserved {
            profile,
            output,
            report,
        } => WitnessDoc::NotPreserved {
            profile: graphs(profile),
            output: graph(output),
            report: report_to_doc(
                names
                    .vaf
                    .as_ref()
                    .expect("preservation subjects carry a framework"),
                report,
            ),
        },
        Witness::InterpretationDependent {
            graphs: g,
            justifications,
            outputs,
        } => WitnessDoc::InterpretationDependent {
            profile: graphs(g),
            justifications: justifications.iter().map(prefs).collect(),
            outputs: outputs.iter().map(graph).collect(),
        },
        Witness::VafDependent {
            graphs: g,
            vafs,
            outputs,
        } => WitnessDoc::VafDependent {
            profile: graphs(g),
            vafs: vafs.iter().map(vaf_to_doc).collect(),
            outputs: outputs.iter().map(graph).collect(),
        },
    }
}

fn witness_from_doc(doc: &WitnessDoc, names: &Names) -> Result<Witness> {
    let value = |n: &str| value_from_name(&names.values, n);
    let pair = |(a, b): &NamePair| -> Result<(ValueId, ValueId)> { Ok((value(a)?, value(b)?)) };
    let edge = |e: &NamePair| edge_from_names(&names.arguments, e);
    let prefs =
        |p: &AudienceProfileDoc| audience_profile_from_doc(p, Some(&names.values)).map(|(_, p)| p);
    let audience = |a: &AudienceDoc| audience_from_doc(&names.values, a);
    let graphs =
        |p: &GraphProfileDoc| graph_profile_from_doc(p, Some(&names.arguments)).map(|(_, p)| p);
    let graph = |g: &GraphDoc| graph_from_doc(g, Some(&names.arguments)).map(|(_, g)| g);
    let audiences2 = |v: &[AudienceDoc]| {
        exactly_two(
            v.iter().map(audience).collect::<Result<Vec<_>>>()?,
            "outputs",
        )
    };
    let graphs2 =
        |v: &[GraphDoc]| exactly_two(v.iter().map(graph).collect::<Result<Vec<_>>>()?, "outputs");
    Ok(match doc {
        WitnessDoc::PrefUnanimity {
            profile,
            pair: p,
            output,
        } => Witness::PrefUnanimity {
            profile: prefs(profile)?,
            pair: pair(p)?,
            output: audience(output)?,
        },
        WitnessDoc::PrefAnonymity {
            profile,
            permutation,
            outputs,
        } => Witness::PrefAnonymity {
            profile: prefs(profile)?,
            permutation: permutation.clone(),
            outputs: audiences2(outputs)?,
        },
        WitnessDoc::PrefIndependence {
            profiles,
            pair: p,
            outputs,
        } => Witness::PrefIndependence {
            profiles: exactly_two(
                profiles.iter().map(prefs).collect::<Result<Vec<_>>>()?,
                "profiles",
            )?,
            pair: pair(p)?,
            outputs: audiences2(outputs)?,
        },
        WitnessDoc::PrefDictatorship { agent } => Witness::PrefDictatorship { agent: *agent },
        WitnessDoc::GraphUnanimity {
            profile,
            edge: e,
            output,
        } => Witness::GraphUnanimity {
            profile: graphs(profile)?,
            edge: edge(e)?,
            output: graph(output)?,
        },
        WitnessDoc::GraphAnonymity {
            profile,
            permutation,
            outputs,
        } => Witness::GraphAnonymity {
            profile: graphs(profile)?,
            permutation: permutation.clone(),
            outputs: graphs2(outputs)?,
        },
        WitnessDoc::GraphIndependence {
            profiles,
            edge: e,
            outputs,
        } => Witness::GraphIndependence {
            profiles: exactly_two(
                profiles.iter().map(graphs).collect::<Result<Vec<_>>>()?,
                "profiles",
            )?,
            edge: edge(e)?,
            outputs: graphs2(outputs)?,
        },
        WitnessDoc::GraphMonotonicity {
            profiles,
            agent,
            edge: e,
            outputs,
        } => Witness::GraphMonotonicity {
            profiles: exactly_two(
                profiles.iter().map(graphs).collect::<Result<Vec<_>>>()?,
                "profiles",
            )?,
            agent: *agent,
            edge: edge(e)?,
            outputs: graphs2(outputs)?,
        },
        WitnessDoc::GraphDictatorship { agent } => Witness::GraphDictatorship { agent: *agent },
        WitnessDoc::NotPreserved {
            profile,
            output,
            report,
        } => {
            let vaf = names
                .vaf
                .as_ref()
                .ok_or_else(|| Error::Parse("witness needs a framework".into()))?;
            Witness::NotPreserved {
                profile: graphs(profile)?,
                output: graph(output)?,
                report: report_from_doc(vaf, report)?,
            }
        }
        WitnessDoc::InterpretationDependent {
            profile,
            justifications,
            outputs,
        } => Witness::InterpretationDependent {
            graphs: graphs(profile)?,
            justifications: exactly_two(
                justifications
                    .iter()
                    .map(prefs)
                    .collect::<Result<Vec<_>>>()?,
                "justifications",
            )?,
            outputs: graphs2(outputs)?,
        },
        WitnessDoc::VafDependent {
            profile,
            vafs,
            outputs,
        } => Witness::VafDependent {
            graphs: graphs(profile)?,
            vafs: exactly_two(
                vafs.iter().map(vaf_from_doc).collect::<Result<Vec<_>>>()?,
                "vafs",
            )?,
            outputs: graphs2(outputs)?,
        },
    })
}

pub fn verdict_to_doc(verdict: &Verdict) -> VerdictDoc {
    let names = subject_names(&verdict.subject);
    VerdictDoc {
        holds: verdict.holds(),
        checked: verdict.checked,
        subject: subject_to_doc(&verdict.subject, &names),
        witness: verdict.witness().map(|w| witness_to_doc(w, &names)),
    }
}

pub fn verdict_from_doc(doc: &VerdictDoc) -> Result<Verdict> {
    let subject = subject_from_doc(&doc.subject)?;
    let names = subject_names(&subject);
    let status = match (&doc.witness, doc.holds) {
        (None, true) => Status::Holds,
        (Some(w), false) => Status::Fails(witness_from_doc(w, &names)?),
        _ => {
            return Err(Error::Parse(
                "a verdict fails exactly when it carries a witness".into(),
            ))
        }
    };
    Ok(Verdict {
        subject,
        status,
        checked: doc.checked,
    })
}

/// Justifiability report of `graph` against `vaf`, as a document.
pub fn check_graph_doc(vaf: &Vaf, graph: &AttackGraph) -> Result<ReportDoc> {
    Ok(report_to_doc(vaf, &derive_constraints(vaf, graph)?))
}

// ---- errors ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub error: ErrorBody,
}

pub fn error_to_doc(error: &Error) -> ErrorDoc {
    ErrorDoc {
        error: ErrorBody {
            kind: error.kind().into(),
            message: error.to_string(),
        },
    }
}

// ---- DOT ----

fn escaped(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quoted(name: &str) -> String {
    format!("\"{}\"", escaped(name))
}

/// Renders `graph` over `arguments`. With a framework, nodes are labelled with
/// their values; with `show_blocked`, the framework's attacks missing from
/// `graph` are drawn dashed.
pub fn render_dot(
    arguments: &SymbolTable,
    graph: &AttackGraph,
    vaf: Option<&Vaf>,
    show_blocked: bool,
) -> String {
    let mut out = String::from("digraph defeat {\n  node [shape=circle];\n");
    for (i, name) in arguments.names().iter().enumerate() {
        match vaf {
            Some(vaf) => {
                let value = vaf.values().name(vaf.labels()[i].index());
                out.push_str(&format!(
                    "  {} [label=\"{}\\n{}\"];\n",
                    quoted(name),
                    escaped(name),
                    escaped(value)
                ));
            }
            None => out.push_str(&format!("  {};\n", quoted(name))),
        }
    }
    let blocked: Vec<Edge> = match vaf {
        Some(vaf) if show_blocked => vaf
            .attacks()
            .edges()
            .difference(graph.edges())
            .copied()
            .collect(),
        _ => Vec::new(),
    };
    let mut lines: Vec<(Edge, bool)> = graph.edges().iter().map(|&e| (e, false)).collect();
    lines.extend(blocked.into_iter().map(|e| (e, true)));
    lines.sort();
    for ((a, b), dashed) in lines {
        let style = if dashed { " [style=dashed]" } else { "" };
        out.push_str(&format!(
            "  {} -> {}{style};\n",
            quoted(arguments.name(a.index())),
            quoted(arguments.name(b.index()))
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::check_preservation;
    use crate::testutil::{cycle_vaf, edges, running_vaf};

    const RUNNING: &str = r#"{
        "values": ["ER", "SF", "EV", "IE"],
        "arguments": [
            {"id": "A", "value": "ER"}, {"id": "B", "value": "SF"}, {"id": "C", "value": "SF"},
            {"id": "D", "value": "IE"}, {"id": "E", "value": "IE"}, {"id": "F", "value": "EV"},
            {"id": "G", "value": "ER"}
        ],
        "attacks": [["B","A"],["D","A"],["C","B"],["E","D"],["F","C"],["F","E"],["F","G"],["G","F"]]
    }"#;

    #[test]
    fn parses_the_running_example() {
        let vaf = parse_vaf(RUNNING).unwrap();
        assert_eq!(vaf, running_vaf());
        assert_eq!(vaf_from_doc(&vaf_to_doc(&vaf)).unwrap(), vaf);
    }

    #[test]
    fn framework_errors() {
        let dangling =
            r#"{"values":["v"],"arguments":[{"id":"a","value":"v"}],"attacks":[["a","z"]]}"#;
        assert!(matches!(
            parse_vaf(dangling),
            Err(Error::InvariantViolation(_))
        ));
        let unused = r#"{"values":["v","w"],"arguments":[{"id":"a","value":"v"}],"attacks":[]}"#;
        assert!(matches!(
            parse_vaf(unused),
            Err(Error::InvariantViolation(_))
        ));
        let duplicate = r#"{"values":["v"],"arguments":[{"id":"a","value":"v"},{"id":"a","value":"v"}],"attacks":[]}"#;
        assert!(matches!(
            parse_vaf(duplicate),
            Err(Error::InvariantViolation(_))
        ));
        let Err(Error::Parse(msg)) = parse_vaf("{\n  \"values\": [1]\n}") else {
            panic!("expected a parse error")
        };
        assert!(msg.contains("line 2"), "{msg}");
        let empty = parse_vaf(r#"{"values":[],"arguments":[],"attacks":[]}"#).unwrap();
        assert_eq!(empty.argument_count(), 0);
        assert_eq!(empty.attacks().edge_count(), 0);
    }

    #[test]
    fn quotas_are_exact() {
        assert_eq!(parse_quota("1/2").unwrap(), Quota::new(1, 2));
        assert_eq!(parse_quota("0.5").unwrap(), Quota::new(1, 2));
        assert_eq!(parse_quota(".25").unwrap(), Quota::new(1, 4));
        assert_eq!(parse_quota("0.6666").unwrap(), Quota::new(3333, 5000));
        assert_eq!(parse_quota("1").unwrap(), Quota::from_integer(1));
        for bad in ["", "1/0", "-1", "1.5", "3/2", "x", "0.5.5"] {
            assert!(parse_quota(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn inline_rules() {
        assert_eq!(
            parse_rule_spec("quota:0.5").unwrap(),
            RuleDoc::Quota { q: "0.5".into() }
        );
        assert_eq!(
            parse_rule_spec("dictator:2").unwrap(),
            RuleDoc::Dictator { index: 2 }
        );
        let vaf = running_vaf();
        let borda = parse_rule_spec("borda:ER>SF>IE>EV")
            .unwrap()
            .to_pref_rule(vaf.values())
            .unwrap();
        assert_eq!(
            borda,
            PrefRule::Borda {
                tiebreak: Some(vaf.audience(&["ER", "SF", "IE", "EV"]).unwrap())
            }
        );
        assert!(parse_rule_spec("plurality").is_err());
        assert!(parse_rule_spec("dictator").is_err());
        assert!(parse_rule_spec("majority")
            .unwrap()
            .to_pref_rule(vaf.values())
            .is_err());
        let json = serde_json::to_string(&graph_rule_to_doc(
            &GraphRule::quota(Quota::new(2, 3)).unwrap(),
        ))
        .unwrap();
        assert_eq!(json, r#"{"rule":"quota","q":"2/3"}"#);
        assert_eq!(
            serde_json::to_string(&RuleDoc::Majority).unwrap(),
            r#"{"rule":"majority"}"#
        );
    }

    #[test]
    fn graphs_need_argument_names() {
        let vaf = running_vaf();
        let doc: GraphDoc = parse_json(r#"{"edges":[["B","A"]]}"#, "graph").unwrap();
        assert!(graph_from_doc(&doc, None).is_err());
        let (_, g) = graph_from_doc(&doc, Some(vaf.arguments())).unwrap();
        assert_eq!(g, edges(&vaf, "B>A"));
        let wrong: GraphDoc = parse_json(r#"{"arguments":["A","B"],"edges":[]}"#, "graph").unwrap();
        assert!(graph_from_doc(&wrong, Some(vaf.arguments())).is_err());
    }

    #[test]
    fn verdicts_round_trip() {
        let verdict = check_preservation(&GraphRule::Majority, &cycle_vaf(4), 4).unwrap();
        let doc = verdict_to_doc(&verdict);
        let text = to_json(&doc);
        let back = verdict_from_doc(&parse_json(&text, "verdict").unwrap()).unwrap();
        assert_eq!(back, verdict);
        assert!(back.replay().unwrap());
    }

    #[test]
    fn dot_is_stable_and_marks_blocked_attacks() {
        let vaf = running_vaf();
        let g = edges(&vaf, "C>B F>C");
        let dot = render_dot(vaf.arguments(), &g, Some(&vaf), true);
        assert_eq!(dot, render_dot(vaf.arguments(), &g, Some(&vaf), true));
        assert!(dot.contains("  \"C\" -> \"B\";\n"));
        assert!(dot.contains("  \"B\" -> \"A\" [style=dashed];\n"));
        assert!(dot.contains("  \"A\" [label=\"A\\nER\"];\n"));
        assert!(!render_dot(vaf.arguments(), &g, Some(&vaf), false).contains("dashed"));
    }
}
