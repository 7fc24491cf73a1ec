//! Command line front end for the algebra library: analyze an ideal, a graph
//! or a poset and emit one canonical JSON report per invocation.
//!
//! Reports have sorted keys and no timing data, so re-running a command on
//! the same input yields byte-identical output. Exit codes: 0 success,
//! 2 parse error, 3 budget exceeded, 4 precondition violated.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use koenig_core::binomial_edge::{
    canonical_components_jg, cm_verdict_jg, is_unmixed_jg, koenig_jg, special_sop_jg,
    traceable_decomposition,
};
use koenig_core::edge_ideals::{canonical_module_edge, koenig_cm_report, tau};
use koenig_core::error::Error;
use koenig_core::graphs::parse_graph_text;
use koenig_core::groebner::buchberger;
use koenig_core::hibi::{
    canonical_module_hibi, koenig_bound, koenig_hibi, koenig_via_reduced_basis, poset_ideals,
    segre_lattice, DistributiveLattice, PosetData,
};
use koenig_core::ideal::parse_ideal;
use koenig_core::koenig::koenig_graded;
use koenig_core::{
    Budget, IdealPresentation, LinearForm, Monomial, MonomialOrder, OrderKind, OrderSpec,
    SimpleGraph,
};

#[derive(Parser)]
#[command(
    name = "koenig",
    version,
    about = "Coprime-initials certificates, parameter systems and canonical modules \
             for monomial, binomial and lattice ideals"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze an ideal file: generators one per line, `vars:` header
    /// optional, variables x1, x2, ... otherwise.
    Ideal(IdealArgs),
    /// Analyze a graph file: vertex count, then one `i j` edge per line.
    Graph(GraphArgs),
    /// Analyze a poset file (JSON with `elements` and 1-based `covers`
    /// [lower, upper]) or a grid lattice.
    Poset(PosetArgs),
}

#[derive(Args)]
struct IdealArgs {
    /// Path to the ideal description.
    file: PathBuf,
    /// Monomial order kind. For `koenig`, omitting both this and
    /// `--priority` searches over all orders.
    #[arg(long, value_enum)]
    order: Option<OrderChoice>,
    /// Variable priority, highest first, as 1-based indices like `2,1`.
    #[arg(long, value_delimiter = ',')]
    priority: Option<Vec<usize>>,
    /// One of: koenig | gb | dim | hilbert <D>.
    #[arg(long, required = true, num_args = 1..=2)]
    action: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderChoice {
    Lex,
    Degrevlex,
}

#[derive(Args)]
struct GraphArgs {
    /// Path to the graph description.
    file: PathBuf,
    /// One of: edge-report | canonical | binomial-report | canonical-binomial.
    #[arg(long, required = true)]
    action: String,
}

#[derive(Args)]
struct PosetArgs {
    /// Path to the poset description; not used by `segre`.
    file: Option<PathBuf>,
    /// One of: lattice | koenig | canonical | segre <rows> <cols>.
    #[arg(long, required = true, num_args = 1..=3)]
    action: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
                Format::Text => print_text(&report),
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(match err {
                Error::Parse { .. } => 2u8,
                Error::Budget(_) => 3u8,
                Error::Precondition(_) => 4u8,
            })
        }
    }
}

fn run(command: &Command) -> Result<Value, Error> {
    let budget = budget_from_env()?;
    let (name, action, input, results) = match command {
        Command::Ideal(args) => {
            let ideal = parse_ideal(&read_input(&args.file)?)?;
            let echo = obj(vec![
                ("generators", json!(rendered_generators(&ideal))),
                ("variables", json!(ideal.variable_names())),
            ]);
            ("ideal", args.action.join(" "), echo, run_ideal(args, &ideal, &budget)?)
        }
        Command::Graph(args) => {
            let graph = parse_graph_text(&read_input(&args.file)?)?;
            let echo = obj(vec![
                ("edges", edge_list(&graph.edges())),
                ("vertices", json!(graph.n())),
            ]);
            ("graph", args.action.clone(), echo, run_graph(&args.action, &graph, &budget)?)
        }
        Command::Poset(args) => {
            if args.action.first().map(String::as_str) == Some("segre") {
                let (rows, cols) = segre_shape(&args.action)?;
                let echo = obj(vec![("cols", json!(cols)), ("rows", json!(rows))]);
                let lattice = segre_lattice(rows, cols)?;
                ("poset", args.action.join(" "), echo, run_poset_koenig(&lattice, &budget)?)
            } else {
                let file = args.file.as_ref().ok_or_else(|| {
                    Error::precondition("this action needs a poset file argument")
                })?;
                let text = read_input(file)?;
                let data: PosetData = serde_json::from_str(&text)
                    .map_err(|e| Error::parse(0, format!("invalid poset JSON: {}", e)))?;
                let poset = data.to_poset()?;
                let echo = obj(vec![
                    ("covers", json!(PosetData::from_poset(&poset).covers)),
                    ("elements", json!(poset.len())),
                ]);
                let lattice = poset_ideals(&poset)?;
                let results = match args.action[0].as_str() {
                    "lattice" => run_poset_lattice(&lattice)?,
                    "koenig" => run_poset_koenig(&lattice, &budget)?,
                    "canonical" => run_poset_canonical(&lattice)?,
                    other => {
                        return Err(Error::precondition(format!(
                            "unknown poset action '{}'",
                            other
                        )))
                    }
                };
                ("poset", args.action.join(" "), echo, results)
            }
        }
    };
    Ok(obj(vec![
        ("action", json!(action)),
        (
            "budget",
            obj(vec![
                ("reduction_steps", json!(budget.reduction_steps)),
                ("s_pairs", json!(budget.s_pairs)),
            ]),
        ),
        ("command", json!(name)),
        ("input", input),
        ("results", results),
    ]))
}

// ---------------------------------------------------------------------------
// Ideal actions
// ---------------------------------------------------------------------------

fn run_ideal(args: &IdealArgs, ideal: &IdealPresentation, budget: &Budget) -> Result<Value, Error> {
    let order = chosen_order(args, ideal.n)?;
    match args.action[0].as_str() {
        "koenig" => {
            if args.action.len() != 1 {
                return Err(Error::precondition("koenig takes no further arguments"));
            }
            let search = koenig_graded(ideal, order.as_ref(), budget)?;
            let mut fields = vec![
                ("height", json!(search.height)),
                ("koenig", json!(search.certificate.is_some())),
                ("note", json!(search.note)),
            ];
            if let Some(cert) = &search.certificate {
                fields.push(("initials", monomial_list(&cert.initials)));
                fields.push(("parameters", form_list(&cert.parameters)));
                fields.push((
                    "generators",
                    json!(cert.generator_indices.iter().map(|&i| i + 1).collect::<Vec<_>>()),
                ));
            } else if !search.attempts.is_empty() {
                let attempts: Vec<Value> = search
                    .attempts
                    .iter()
                    .map(|a| {
                        obj(vec![
                            ("chosen", monomial_list(&a.report.chosen)),
                            ("inequalities", json!(a.report.contradiction_inequalities())),
                        ])
                    })
                    .collect();
                fields.push(("attempts", Value::Array(attempts)));
            }
            Ok(obj(fields))
        }
        "gb" => {
            let order = order
                .unwrap_or_else(|| OrderSpec::Monomial(MonomialOrder::degrevlex(ideal.n)));
            let gb = buchberger(ideal, &order, budget)?;
            let rendering = IdealPresentation::new(ideal.n, gb.elements.clone())?;
            Ok(obj(vec![
                ("elements", json!(rendered_generators(&rendering))),
                ("initials", monomial_list(&gb.initial_generators())),
            ]))
        }
        "dim" => {
            let order = order
                .unwrap_or_else(|| OrderSpec::Monomial(MonomialOrder::degrevlex(ideal.n)));
            let gb = buchberger(ideal, &order, budget)?;
            Ok(obj(vec![("dim", json!(gb.quotient_dimension()?))]))
        }
        "hilbert" => {
            let bound: u32 = args
                .action
                .get(1)
                .ok_or_else(|| Error::precondition("hilbert needs a degree bound"))?
                .parse()
                .map_err(|_| Error::precondition("hilbert degree bound must be a number"))?;
            let order = order
                .unwrap_or_else(|| OrderSpec::Monomial(MonomialOrder::degrevlex(ideal.n)));
            let gb = buchberger(ideal, &order, budget)?;
            Ok(obj(vec![("values", json!(gb.hilbert_function(bound)))]))
        }
        other => Err(Error::precondition(format!("unknown ideal action '{}'", other))),
    }
}

fn chosen_order(args: &IdealArgs, n: usize) -> Result<Option<OrderSpec>, Error> {
    if args.order.is_none() && args.priority.is_none() {
        return Ok(None);
    }
    let kind = match args.order {
        Some(OrderChoice::Lex) => OrderKind::Lex,
        _ => OrderKind::DegRevLex,
    };
    let order = match &args.priority {
        None => match kind {
            OrderKind::Lex => MonomialOrder::lex(n),
            OrderKind::DegRevLex => MonomialOrder::degrevlex(n),
        },
        Some(list) => {
            let mut priority = Vec::new();
            for &v in list {
                if v == 0 {
                    return Err(Error::precondition("priorities are 1-based variable indices"));
                }
                priority.push(v - 1);
            }
            MonomialOrder::with_priority(kind, priority)?
        }
    };
    Ok(Some(OrderSpec::Monomial(order)))
}

// ---------------------------------------------------------------------------
// Graph actions
// ---------------------------------------------------------------------------

fn run_graph(action: &str, graph: &SimpleGraph, budget: &Budget) -> Result<Value, Error> {
    match action {
        "edge-report" => {
            let report = koenig_cm_report(graph)?;
            Ok(obj(vec![
                ("alpha", json!(report.alpha)),
                ("cm", json!(report.cm)),
                ("faces", json!(report.faces)),
                ("koenig", json!(true)),
                ("matching", edge_list(&report.matching)),
                ("matching_number", json!(report.matching.len())),
                ("reg", json!(report.regularity)),
                ("tau", json!(tau(graph))),
                ("type", json!(report.module_type)),
            ]))
        }
        "canonical" => {
            let module = canonical_module_edge(graph)?;
            Ok(obj(vec![
                ("generators", monomial_list(&module.generators)),
                ("h_edges", edge_list(&module.h_graph.edges())),
                ("matching", edge_list(&module.matching.edges)),
                ("type", json!(module.module_type)),
            ]))
        }
        "binomial-report" => {
            let verdict = koenig_jg(graph, budget)?;
            let traceable = traceable_decomposition(graph)?.is_some();
            let mut fields = vec![
                ("dim", json!(verdict.dim)),
                ("koenig", json!(verdict.certificate.is_some())),
                ("max_semipath", json!(verdict.semipath.length)),
                ("required_length", json!(verdict.required_length)),
                ("traceable", json!(traceable)),
                ("unmixed", json!(is_unmixed_jg(graph)?)),
            ];
            if verdict.certificate.is_some() {
                let sop = special_sop_jg(graph, budget)?;
                fields.push(("sop", binomial_form_list(&sop.forms, graph.n())));
                fields.push(("sop_quotient_length", json!(sop.quotient_length)));
                let cm = cm_verdict_jg(graph, budget)?;
                fields.push(("cm", json!(cm.cohen_macaulay)));
                fields.push(("multiplicity", json!(cm.multiplicity)));
            }
            Ok(obj(fields))
        }
        "canonical-binomial" => {
            let components = canonical_components_jg(graph, budget)?;
            let sets: Vec<Vec<usize>> = components
                .iter()
                .map(|r| r.vertices.iter().map(|&v| v + 1).collect())
                .collect();
            Ok(obj(vec![("components", json!(sets)), ("count", json!(sets.len()))]))
        }
        other => Err(Error::precondition(format!("unknown graph action '{}'", other))),
    }
}

// ---------------------------------------------------------------------------
// Poset actions
// ---------------------------------------------------------------------------

fn run_poset_lattice(lattice: &DistributiveLattice) -> Result<Value, Error> {
    let members: Vec<Vec<usize>> = lattice
        .member_sets()
        .into_iter()
        .map(|s| s.into_iter().map(|v| v + 1).collect())
        .collect();
    Ok(obj(vec![
        ("covers", edge_list(&lattice.cover_pairs())),
        ("elements", json!(lattice.len())),
        ("height", json!(lattice.height())),
        ("members", json!(members)),
        ("rank", json!(lattice.rank())),
    ]))
}

fn run_poset_koenig(lattice: &DistributiveLattice, budget: &Budget) -> Result<Value, Error> {
    let verdict = koenig_hibi(lattice, budget)?;
    let bound = koenig_bound(lattice);
    let mut fields = vec![
        ("bipartite_incom", json!(verdict.bipartite_incom)),
        ("bound", json!(bound.bound)),
        ("bound_holds", json!(bound.holds)),
        ("height", json!(verdict.height)),
        ("koenig", json!(verdict.koenig_revlex)),
        ("revlex", json!(verdict.koenig_revlex)),
        ("size", json!(lattice.len())),
        ("thin", json!(verdict.thin)),
    ];
    match &verdict.witness {
        Some(cert) => {
            fields.push(("witness_initials", monomial_list(&cert.initials)));
            fields.push(("witness_parameters", form_list(&cert.parameters)));
        }
        None => {
            // A family can still exist under another order; try the reduced
            // basis under lex.
            let lex = OrderSpec::Monomial(MonomialOrder::lex(lattice.len()));
            let lex_certificate = match koenig_via_reduced_basis(lattice, &lex, budget) {
                Ok((_, search)) => match search.certificate {
                    Some(cert) => sorted_monomial_list(&cert.initials),
                    None => Value::Null,
                },
                Err(Error::Precondition(_)) => Value::Null,
                Err(other) => return Err(other),
            };
            fields.push(("lex_certificate", lex_certificate));
        }
    }
    Ok(obj(fields))
}

fn run_poset_canonical(lattice: &DistributiveLattice) -> Result<Value, Error> {
    let report = canonical_module_hibi(lattice)?;
    let mut survivors: Vec<Vec<usize>> = report
        .survivors
        .iter()
        .map(|c| c.vertices.iter().map(|&v| v + 1).collect())
        .collect();
    survivors.sort();
    let intersection = match &report.monomial_intersection {
        Some(ms) => sorted_monomial_list(ms),
        None => Value::Null,
    };
    Ok(obj(vec![
        ("admissible_nonempty", json!(report.admissible_nonempty)),
        ("cells", json!(report.cells.len())),
        ("intersection", intersection),
        ("module_free", json!(report.module_free)),
        ("survivors", json!(survivors)),
        ("target_height", json!(report.target_height)),
    ]))
}

fn segre_shape(action: &[String]) -> Result<(usize, usize), Error> {
    if action.len() != 3 {
        return Err(Error::precondition("segre needs two size arguments"));
    }
    let parse = |text: &String| {
        text.parse::<usize>()
            .map_err(|_| Error::precondition(format!("bad grid size '{}'", text)))
    };
    Ok((parse(&action[1])?, parse(&action[2])?))
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn read_input(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::precondition(format!("cannot read {}: {}", path.display(), e)))
}

fn budget_from_env() -> Result<Budget, Error> {
    match std::env::var("KOENIG_BUDGET") {
        Ok(text) => {
            let factor: f64 = text.trim().parse().map_err(|_| {
                Error::precondition(format!("KOENIG_BUDGET must be a number, found '{}'", text))
            })?;
            if factor <= 0.0 || !factor.is_finite() {
                return Err(Error::precondition("KOENIG_BUDGET must be positive"));
            }
            Ok(Budget::default().scaled(factor))
        }
        Err(_) => Ok(Budget::default()),
    }
}

/// Object with the given fields, keys sorted, independent of map internals.
fn obj(fields: Vec<(&str, Value)>) -> Value {
    let mut sorted = fields;
    sorted.sort_by(|a, b| a.0.cmp(b.0));
    let mut map = serde_json::Map::new();
    for (key, value) in sorted {
        map.insert(key.to_string(), value);
    }
    Value::Object(map)
}

fn rendered_generators(ideal: &IdealPresentation) -> Vec<String> {
    ideal.generators.iter().map(|g| ideal.render_generator(g)).collect()
}

fn monomial_list(monomials: &[Monomial]) -> Value {
    json!(monomials.iter().map(Monomial::to_string).collect::<Vec<_>>())
}

/// Monomials sorted by degree and then by support, the reading order.
fn sorted_monomial_list(monomials: &[Monomial]) -> Value {
    let mut sorted = monomials.to_vec();
    sorted.sort_by_key(|m| (m.degree(), m.support()));
    monomial_list(&sorted)
}

fn form_list(forms: &[LinearForm]) -> Value {
    json!(forms.iter().map(LinearForm::to_string).collect::<Vec<_>>())
}

/// Linear forms over the doubled variable set of a binomial edge ideal,
/// rendered with x/y names.
fn binomial_form_list(forms: &[LinearForm], vertices: usize) -> Value {
    let name = |i: usize| {
        if i < vertices {
            format!("x{}", i + 1)
        } else {
            format!("y{}", i - vertices + 1)
        }
    };
    let rendered: Vec<String> = forms
        .iter()
        .map(|f| match f {
            LinearForm::Var(i) => name(*i),
            LinearForm::Diff(i, j) => format!("{} - {}", name(*j), name(*i)),
        })
        .collect();
    json!(rendered)
}

fn edge_list(edges: &[(usize, usize)]) -> Value {
    json!(edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect::<Vec<_>>())
}

fn print_text(report: &Value) {
    let mut lines = Vec::new();
    collect_lines(String::new(), report, &mut lines);
    for line in lines {
        println!("{}", line);
    }
}

fn collect_lines(path: String, value: &Value, out: &mut Vec<String>) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for key in keys {
                let next = if path.is_empty() { key.clone() } else { format!("{}.{}", path, key) };
                collect_lines(next, &map[key], out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, item) in items.iter().enumerate() {
                collect_lines(format!("{}[{}]", path, i), item, out);
            }
        }
        other => out.push(format!("{} = {}", path, other)),
    }
}
