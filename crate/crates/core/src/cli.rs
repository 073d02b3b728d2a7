//! Command-line front end. Every subcommand reads JSON documents, calls one
//! library operation and writes a JSON document (or DOT with `--dot`).
//!
//! Exit status is 0 on success, 1 on domain errors and 2 on malformed input;
//! failures print an error document to standard output.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value as Json;

use crate::axioms::{
    check_graph_axiom, check_inheritance, check_interpretation_independence, check_pref_axiom,
    check_preservation, check_vaf_independence, GraphAxiom, PrefAxiom, SearchBounds,
};
use crate::combined::{
    combined_mechanism_detailed, resolve_vaf, JustificationSelector, VafSelector,
};
use crate::doc::*;
use crate::error::{Error, Result};
use crate::graphagg::{aggregate_graphs, GraphProfile};
use crate::justification::{
    derive_constraints, enumerate_justifying_audiences_within, find_justifying_vaf,
    lexmin_justification, RationaliseLimits, DEFAULT_MAX_ENUMERATED_VALUES,
};
use crate::prefagg::{aggregate_prefs, borda_scores, PrefRule};
use crate::vaf::{induce_defeat_graph, AttackGraph, SymbolTable, Vaf};

#[derive(Parser, Debug)]
#[command(
    name = "vafagg",
    version,
    about = "Aggregate value-based argumentation frameworks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct DotArgs {
    /// Emit the resulting graph as Graphviz DOT.
    #[arg(long)]
    pub dot: bool,

    /// With --dot, draw attacks blocked by the audience as dashed edges.
    #[arg(long, requires = "dot")]
    pub show_blocked: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Induce the defeat graph of an audience.
    Induce {
        #[arg(long, value_name = "FILE")]
        vaf: PathBuf,
        #[arg(long, value_name = "FILE")]
        audience: PathBuf,
        #[command(flatten)]
        dot: DotArgs,
    },
    /// Report whether a graph (or each graph of a profile) is a defeat graph.
    Check {
        #[arg(long, value_name = "FILE")]
        vaf: PathBuf,
        #[arg(long, value_name = "FILE")]
        profile: PathBuf,
    },
    /// List the audiences that justify a graph (or each graph of a profile).
    Justify {
        #[arg(long, value_name = "FILE")]
        vaf: PathBuf,
        #[arg(long, value_name = "FILE")]
        profile: PathBuf,
        /// Refuse to enumerate audiences over more values than this.
        #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATED_VALUES)]
        max_values: usize,
    },
    /// Aggregate a profile of audiences.
    AggPrefs {
        #[arg(long, value_name = "FILE")]
        profile: PathBuf,
        /// `borda`, `borda:V1>V2>...`, `dictator:I`, inline JSON or a rule file.
        #[arg(long, value_name = "SPEC")]
        rule: String,
        /// Also induce the collective defeat graph on this framework.
        #[arg(long, value_name = "FILE")]
        vaf: Option<PathBuf>,
        #[command(flatten)]
        dot: DotArgs,
    },
    /// Aggregate a profile of attack graphs.
    AggGraphs {
        #[arg(long, value_name = "FILE")]
        profile: PathBuf,
        /// `quota:Q`, `majority`, `dictator:I`, `representative`, inline JSON or a rule file.
        #[arg(long, value_name = "SPEC")]
        rule: String,
        /// Resolve names against this framework and report whether the result is a defeat graph.
        #[arg(long, value_name = "FILE")]
        vaf: Option<PathBuf>,
        #[command(flatten)]
        dot: DotArgs,
    },
    /// Justify each graph, aggregate the audiences and induce the collective graph.
    Combined {
        #[arg(long, value_name = "FILE")]
        profile: PathBuf,
        #[arg(long, value_name = "SPEC")]
        rule: String,
        #[arg(long, value_name = "FILE")]
        vaf: Option<PathBuf>,
        /// `lexmin` or `explicit:FILE` (an audience profile, one member per agent).
        #[arg(long, default_value = "lexmin")]
        selector: String,
        /// `provided` (use --vaf) or `brute:MAXV` (search labellings of the candidate attacks).
        #[arg(long, default_value = "provided")]
        vaf_selector: String,
        #[command(flatten)]
        dot: DotArgs,
    },
    /// Find a labelling that makes every graph of a profile a defeat graph.
    Rationalise {
        #[arg(long, value_name = "FILE")]
        profile: PathBuf,
        /// Candidate attacks; defaults to the union of the profile.
        #[arg(long, value_name = "FILE")]
        vaf: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_values: usize,
    },
    /// Exhaustively check an axiom, or replay a stored verdict.
    AxiomCheck {
        #[arg(long, value_name = "SPEC", required_unless_present = "replay")]
        rule: Option<String>,
        /// `pref:X`, `graph:X`, `inherited:X`, `preservation`,
        /// `interpretation-independence`, `vaf-independence`, or a bare axiom name.
        #[arg(long, value_name = "NAME", required_unless_present = "replay")]
        axiom: Option<String>,
        #[arg(long, value_name = "FILE")]
        vaf: Option<PathBuf>,
        /// Number of agents (overrides the bounds file).
        #[arg(long)]
        n: Option<usize>,
        /// Number of values for preference searches (overrides the bounds file).
        #[arg(long)]
        max_values: Option<usize>,
        #[arg(long, value_name = "FILE")]
        bounds: Option<PathBuf>,
        /// Re-run the witness of a verdict document produced earlier.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["rule", "axiom"])]
        replay: Option<PathBuf>,
    },
}

/// Parses arguments, runs the command, writes its output and returns the exit status.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(&cli.command) {
        Ok(text) => match &out {
            Some(path) => match fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => report(&Error::Parse(format!(
                    "cannot write {}: {e}",
                    path.display()
                ))),
            },
            None => {
                print!("{text}");
                0
            }
        },
        Err(e) => report(&e),
    }
}

fn report(error: &Error) -> i32 {
    print!("{}", to_json(&error_to_doc(error)));
    eprintln!("error: {error}");
    if error.is_parse_error() {
        2
    } else {
        1
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&read(path)?, &path.display().to_string())
}

fn load_vaf(path: &Path) -> Result<Vaf> {
    parse_vaf(&read(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_optional_vaf(path: &Option<PathBuf>) -> Result<Option<Vaf>> {
    path.as_deref().map(load_vaf).transpose()
}

/// Inline JSON, a rule file, or an inline spec such as `quota:1/2`.
pub fn load_rule(spec: &str) -> Result<RuleDoc> {
    let trimmed = spec.trim_start();
    if trimmed.starts_with('{') {
        parse_json(trimmed, "rule")
    } else if Path::new(spec).is_file() {
        load(Path::new(spec))
    } else {
        parse_rule_spec(spec)
    }
}

/// A graph document or a graph profile document.
fn load_graphs(
    path: &Path,
    arguments: Option<&SymbolTable>,
) -> Result<(SymbolTable, GraphProfile, bool)> {
    let json: Json = load(path)?;
    if json.get("members").is_some() {
        let doc: GraphProfileDoc = serde_json::from_value(json)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let (table, profile) = graph_profile_from_doc(&doc, arguments)?;
        Ok((table, profile, true))
    } else {
        let doc: GraphDoc = serde_json::from_value(json)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let (table, graph) = graph_from_doc(&doc, arguments)?;
        Ok((table, GraphProfile::new(vec![graph])?, false))
    }
}

fn emit<T: Serialize>(doc: &T) -> Result<String> {
    Ok(to_json(doc))
}

#[derive(Serialize)]
struct Members<T> {
    members: Vec<T>,
}

fn per_graph<T: Serialize>(items: Vec<T>, is_profile: bool) -> Result<String> {
    if is_profile {
        emit(&Members { members: items })
    } else {
        emit(&items.into_iter().next().expect("one graph"))
    }
}

#[derive(Serialize)]
struct Justification {
    justifiable: bool,
    lexmin: Option<AudienceDoc>,
    audiences: Vec<AudienceDoc>,
    report: ReportDoc,
}

#[derive(Serialize)]
struct AggPrefsOutput {
    order: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scores: Option<serde_json::Map<String, Json>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    defeat_graph: Option<GraphDoc>,
}

#[derive(Serialize)]
struct AggGraphsOutput {
    #[serde(flatten)]
    graph: GraphDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    justification: Option<ReportDoc>,
}

#[derive(Serialize)]
struct CombinedOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    vaf: Option<VafDoc>,
    justifications: AudienceProfileDoc,
    collective: AudienceDoc,
    graph: GraphDoc,
}

#[derive(Serialize)]
struct ReplayOutput {
    confirmed: bool,
    holds: bool,
}

fn graph_output(
    arguments: &SymbolTable,
    graph: &AttackGraph,
    vaf: Option<&Vaf>,
    dot: DotArgs,
    doc: impl Serialize,
) -> Result<String> {
    if dot.dot {
        Ok(render_dot(arguments, graph, vaf, dot.show_blocked))
    } else {
        emit(&doc)
    }
}

pub fn run(command: &Command) -> Result<String> {
    match command {
        Command::Induce { vaf, audience, dot } => {
            let vaf = load_vaf(vaf)?;
            let audience = audience_from_doc(vaf.values(), &load(audience)?)?;
            let graph = induce_defeat_graph(&vaf, &audience)?;
            graph_output(
                vaf.arguments(),
                &graph,
                Some(&vaf),
                *dot,
                graph_to_doc(vaf.arguments(), &graph),
            )
        }
        Command::Check { vaf, profile } => {
            let vaf = load_vaf(vaf)?;
            let (_, graphs, is_profile) = load_graphs(profile, Some(vaf.arguments()))?;
            let reports = graphs
                .graphs()
                .iter()
                .map(|g| check_graph_doc(&vaf, g))
                .collect::<Result<Vec<_>>>()?;
            per_graph(reports, is_profile)
        }
        Command::Justify {
            vaf,
            profile,
            max_values,
        } => {
            let vaf = load_vaf(vaf)?;
            let (_, graphs, is_profile) = load_graphs(profile, Some(vaf.arguments()))?;
            let mut out = Vec::new();
            for g in graphs.graphs() {
                let report = derive_constraints(&vaf, g)?;
                let audiences = enumerate_justifying_audiences_within(&vaf, g, *max_values)?;
                out.push(Justification {
                    justifiable: report.is_justified(),
                    lexmin: lexmin_justification(&vaf, g)?
                        .map(|a| audience_to_doc(vaf.values(), &a)),
                    audiences: audiences
                        .iter()
                        .map(|a| audience_to_doc(vaf.values(), a))
                        .collect(),
                    report: report_to_doc(&vaf, &report),
                });
            }
            per_graph(out, is_profile)
        }
        Command::AggPrefs {
            profile,
            rule,
            vaf,
            dot,
        } => {
            let vaf = load_optional_vaf(vaf)?;
            let doc: AudienceProfileDoc = load(profile)?;
            let (values, profile) = audience_profile_from_doc(&doc, vaf.as_ref().map(Vaf::values))?;
            let rule = load_rule(rule)?.to_pref_rule(&values)?;
            let collective = aggregate_prefs(&rule, &profile)?;
            let scores = matches!(rule, PrefRule::Borda { .. }).then(|| {
                let scores = borda_scores(&profile);
                values
                    .names()
                    .iter()
                    .enumerate()
                    .map(|(i, n)| (n.clone(), Json::from(scores[&i.into()])))
                    .collect()
            });
            let graph = vaf
                .as_ref()
                .map(|v| induce_defeat_graph(v, &collective))
                .transpose()?;
            if dot.dot {
                let (vaf, graph) = vaf
                    .as_ref()
                    .zip(graph.as_ref())
                    .ok_or_else(|| Error::Parse("--dot needs --vaf".into()))?;
                return Ok(render_dot(
                    vaf.arguments(),
                    graph,
                    Some(vaf),
                    dot.show_blocked,
                ));
            }
            emit(&AggPrefsOutput {
                order: audience_to_doc(&values, &collective).order,
                scores,
                defeat_graph: vaf
                    .as_ref()
                    .zip(graph.as_ref())
                    .map(|(v, g)| graph_to_doc(v.arguments(), g)),
            })
        }
        Command::AggGraphs {
            profile,
            rule,
            vaf,
            dot,
        } => {
            let vaf = load_optional_vaf(vaf)?;
            let (arguments, profile, _) = load_graphs(profile, vaf.as_ref().map(Vaf::arguments))?;
            let rule = load_rule(rule)?.to_graph_rule()?;
            let graph = aggregate_graphs(&rule, &profile)?;
            let justification = vaf
                .as_ref()
                .map(|v| check_graph_doc(v, &graph))
                .transpose()?;
            let doc = AggGraphsOutput {
                graph: graph_to_doc(&arguments, &graph),
                justification,
            };
            graph_output(&arguments, &graph, vaf.as_ref(), *dot, doc)
        }
        Command::Combined {
            profile,
            rule,
            vaf,
            selector,
            vaf_selector,
            dot,
        } => {
            let given = load_optional_vaf(vaf)?;
            let (arguments, graphs, _) = load_graphs(profile, given.as_ref().map(Vaf::arguments))?;
            let vaf_selector = match (vaf_selector.as_str(), &given) {
                ("provided", Some(v)) => VafSelector::Provided(v.clone()),
                ("provided", None) => {
                    return Err(Error::Parse("--vaf-selector provided needs --vaf".into()))
                }
                (spec, _) => {
                    let max = spec
                        .strip_prefix("brute:")
                        .and_then(|m| m.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("invalid --vaf-selector `{spec}`")))?;
                    let candidate_attacks = match &given {
                        Some(v) => v.attacks().clone(),
                        None => AttackGraph::new(arguments.len(), graphs.union())?,
                    };
                    VafSelector::BruteForce {
                        arguments: arguments.clone(),
                        candidate_attacks,
                        max_values: max,
                    }
                }
            };
            let brute = matches!(vaf_selector, VafSelector::BruteForce { .. });
            let vaf = resolve_vaf(&vaf_selector, &graphs)?;
            let selector = match selector.as_str() {
                "lexmin" => JustificationSelector::LexMin,
                spec => {
                    let path = spec
                        .strip_prefix("explicit:")
                        .ok_or_else(|| Error::Parse(format!("invalid --selector `{spec}`")))?;
                    let (_, table) =
                        audience_profile_from_doc(&load(Path::new(path))?, Some(vaf.values()))?;
                    JustificationSelector::Explicit {
                        table: table.audiences().to_vec(),
                    }
                }
            };
            let rule = load_rule(rule)?.to_pref_rule(vaf.values())?;
            let outcome = combined_mechanism_detailed(&rule, &selector, &vaf, &graphs)?;
            let doc = CombinedOutput {
                vaf: brute.then(|| vaf_to_doc(&vaf)),
                justifications: audience_profile_to_doc(vaf.values(), &outcome.justifications),
                collective: audience_to_doc(vaf.values(), &outcome.collective),
                graph: graph_to_doc(vaf.arguments(), &outcome.graph),
            };
            graph_output(vaf.arguments(), &outcome.graph, Some(&vaf), *dot, doc)
        }
        Command::Rationalise {
            profile,
            vaf,
            max_values,
        } => {
            let given = load_optional_vaf(vaf)?;
            let (arguments, graphs, _) = load_graphs(profile, given.as_ref().map(Vaf::arguments))?;
            let candidates = match &given {
                Some(v) => v.attacks().clone(),
                None => AttackGraph::new(arguments.len(), graphs.union())?,
            };
            let found = find_justifying_vaf(
                &arguments,
                graphs.graphs(),
                &candidates,
                *max_values,
                &RationaliseLimits::default(),
            )?
            .ok_or(Error::NoJustifyingVaf)?;
            emit(&vaf_to_doc(&found))
        }
        Command::AxiomCheck {
            replay: Some(path), ..
        } => {
            let verdict = verdict_from_doc(&load(path)?)?;
            emit(&ReplayOutput {
                confirmed: verdict.replay()?,
                holds: verdict.holds(),
            })
        }
        Command::AxiomCheck {
            rule,
            axiom,
            vaf,
            n,
            max_values,
            bounds,
            replay: None,
        } => {
            let rule = load_rule(rule.as_deref().expect("clap requires --rule"))?;
            let axiom = axiom.as_deref().expect("clap requires --axiom");
            let vaf = load_optional_vaf(vaf)?;
            let mut bounds = match bounds {
                Some(path) => bounds_from_doc(&load(path)?),
                None => SearchBounds::default(),
            };
            if let Some(n) = n {
                bounds.max_agents = *n;
            }
            if let Some(k) = max_values {
                bounds.max_values = *k;
            }
            let verdict = axiom_check(&rule, axiom, vaf.as_ref(), &bounds)?;
            emit(&verdict_to_doc(&verdict))
        }
    }
}

fn need_vaf<'a>(vaf: Option<&'a Vaf>, axiom: &str) -> Result<&'a Vaf> {
    vaf.ok_or_else(|| Error::Parse(format!("axiom `{axiom}` needs --vaf")))
}

fn axiom_check(
    rule: &RuleDoc,
    axiom: &str,
    vaf: Option<&Vaf>,
    bounds: &SearchBounds,
) -> Result<crate::axioms::Verdict> {
    let pref_values = |vaf: Option<&Vaf>| match vaf {
        Some(v) => v.values().clone(),
        None => SymbolTable::numbered("v", bounds.max_values),
    };
    let n = bounds.max_agents;
    match axiom.split_once(':') {
        Some(("pref", name)) => check_pref_axiom(
            &rule.to_pref_rule(&pref_values(None))?,
            name.parse()?,
            bounds,
        ),
        Some(("graph", name)) => {
            check_graph_axiom(&rule.to_graph_rule()?, name.parse()?, bounds, vaf)
        }
        Some(("inherited", name)) => {
            let vaf = need_vaf(vaf, axiom)?;
            check_inheritance(&rule.to_pref_rule(vaf.values())?, vaf, name.parse()?, n)
        }
        Some(_) => Err(Error::Parse(format!("unknown axiom `{axiom}`"))),
        None => match axiom {
            "preservation" => check_preservation(&rule.to_graph_rule()?, need_vaf(vaf, axiom)?, n),
            "interpretation-independence" => {
                let vaf = need_vaf(vaf, axiom)?;
                check_interpretation_independence(&rule.to_pref_rule(vaf.values())?, vaf, n)
            }
            "vaf-independence" => check_vaf_independence(
                &rule.to_pref_rule(&pref_values(None))?,
                &JustificationSelector::LexMin,
                bounds,
            ),
            name if rule.is_graph_only() || name == GraphAxiom::Monotonicity.name() => {
                check_graph_axiom(&rule.to_graph_rule()?, name.parse()?, bounds, vaf)
            }
            name => match vaf {
                Some(vaf) => {
                    check_inheritance(&rule.to_pref_rule(vaf.values())?, vaf, name.parse()?, n)
                }
                None => check_pref_axiom(
                    &rule.to_pref_rule(&pref_values(None))?,
                    name.parse::<PrefAxiom>()?,
                    bounds,
                ),
            },
        },
    }
}
