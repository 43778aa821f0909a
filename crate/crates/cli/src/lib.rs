//! The `sgh` command line: every subcommand reads graph files, runs one
//! core operation and returns a versioned JSON report plus an exit code.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sgh_core::hom::{component_edge_slots, core_retract, edge_slots, switch_core_retract, Retract};
use sgh_core::io::{
    graph_to_json, graph_to_text, parse_graph, parse_lists, parse_order, parse_table,
    witness_from_json, witness_to_json, GraphFile,
};
use sgh_core::order::{newmain_build, newmain_premise_search, newmain_props, NewmainBuild};
use sgh_core::poly::{excluder, permutable_triples, table_to_text};
use sgh_core::{
    are_switch_equivalent, check_props, classify_lphom, classify_lshom, classify_shom,
    find_min_ordering, is_min_ordering, list_hom, list_switch_hom, product_with_p, search_poly3,
    switching_graph, Answer, BrGraph, Error, ListAssignment, PolyProps, Polymorphism3, Target,
    VertexId,
};

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

/// Environment variable capping the base graph size of searches.
pub const MAX_VERTICES_VAR: &str = "SGH_MAX_VERTICES";
pub const DEFAULT_MAX_VERTICES: usize = 24;

pub const EXIT_ANSWERED: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sgh",
    version,
    about = "Switching, homomorphisms and polymorphisms of br-graphs"
)]
pub struct Cli {
    /// Directory to write certificates into.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the switching graph P(H).
    Pgraph { graph: PathBuf },
    /// Emit the bipartite product H x P.
    ProductP { graph: PathBuf },
    /// Decide whether two graphs on the same names are switch-equivalent.
    SwitchEq { first: PathBuf, second: PathBuf },
    /// Find a (list, switch) homomorphism G -> H.
    Hom {
        source: PathBuf,
        target: PathBuf,
        /// List file with lines `list <vertex> <targets..>`.
        #[arg(long)]
        lists: Option<PathBuf>,
        /// Allow switching the source.
        #[arg(long)]
        switch: bool,
    },
    /// Compute the core or the switch-core.
    Core {
        graph: PathBuf,
        #[arg(long)]
        switch: bool,
    },
    /// Excluders of a triple in the red graph of H, one per position.
    Excluders {
        graph: PathBuf,
        a: String,
        b: String,
        c: String,
    },
    /// Permutable triples of the red graph of H.
    Triples { graph: PathBuf },
    /// Search for a ternary polymorphism with the given properties.
    FindPoly {
        graph: PathBuf,
        /// Comma separated: wnu, nu3, conservative, semi, idempotent.
        #[arg(long)]
        props: String,
        #[arg(long, value_enum, default_value_t = On::Graph)]
        on: On,
    },
    /// Check a polymorphism table against the graph.
    CheckPoly {
        graph: PathBuf,
        table: PathBuf,
        #[arg(long, default_value = "")]
        props: String,
        #[arg(long, value_enum, default_value_t = On::Graph)]
        on: On,
    },
    /// Find or check a min-ordering of the underlying graph.
    MinOrder {
        graph: PathBuf,
        /// File listing the vertices lowest first.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Build H and the semi-conservative WNU on P(H) from a witness.
    NewmainBuild { witness: PathBuf },
    /// Search for a witness producing a switching of H.
    NewmainSearch { graph: PathBuf },
    /// Classify the complexity of a problem for H.
    Classify {
        graph: PathBuf,
        #[arg(long, value_enum)]
        problem: ProblemArg,
    },
}

/// The structure an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum On {
    /// The graph itself, with its `swap` map if it has one.
    Graph,
    /// The switching graph P(H) with its switch map.
    Pgraph,
    /// The red graph of P(H).
    RedPgraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Shom,
    Lphom,
    Lshom,
}

/// Exit code and JSON report of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    fn answered(report: Value) -> Outcome {
        Outcome {
            code: EXIT_ANSWERED,
            report,
        }
    }
}

/// A failure, prefixed by the file it came from when known.
#[derive(Debug)]
struct Failure {
    context: Option<String>,
    message: String,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Failure {
        Failure {
            context: None,
            message: error.to_string(),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn in_file<T>(path: &Path, r: sgh_core::Result<T>) -> Run<T> {
    r.map_err(|error| Failure {
        context: Some(path.display().to_string()),
        message: error.to_string(),
    })
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        context: Some(path.display().to_string()),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn load_graph(path: &Path) -> Run<GraphFile> {
    let src = read(path)?;
    in_file(path, parse_graph(&src))
}

/// Cap from the environment; unparsable values fall back to the default.
pub fn max_vertices() -> usize {
    std::env::var(MAX_VERTICES_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_VERTICES)
}

fn check_size(g: &BrGraph) -> Run<()> {
    let limit = max_vertices();
    if g.len() > limit {
        return Err(Error::TooLarge {
            size: g.len(),
            limit,
        }
        .into());
    }
    Ok(())
}

fn names(g: &BrGraph, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| g.name(v).to_string()).collect()
}

fn map_json(source: &BrGraph, target: &BrGraph, map: &[VertexId]) -> Value {
    let mut obj = serde_json::Map::new();
    for v in source.vertices() {
        obj.insert(
            source.name(v).to_string(),
            json!(target.name(map[v.index()])),
        );
    }
    Value::Object(obj)
}

/// Writes certificate files under `--out` and records their paths.
struct Certificates {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl Certificates {
    fn write(&mut self, name: &str, contents: &str) -> Run<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| io_failure(&path, e))?;
        self.written.push(path.display().to_string());
        Ok(())
    }

    fn write_json(&mut self, name: &str, value: &Value) -> Run<()> {
        self.write(
            name,
            &format!(
                "{}\n",
                serde_json::to_string_pretty(value).expect("json value")
            ),
        )
    }
}

/// Parses `argv` (program name first) and runs it.
pub fn run_cli<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(cli),
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                Outcome::answered(json!({"schema": SCHEMA, "help": text}))
            } else {
                Outcome {
                    code: EXIT_INPUT_ERROR,
                    report: json!({"schema": SCHEMA, "error": text.trim_end()}),
                }
            }
        }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    let mut certs = Certificates {
        dir: cli.out.clone(),
        written: Vec::new(),
    };
    let name = command_name(&cli.command);
    match dispatch(&cli.command, &mut certs) {
        Ok((code, mut report)) => {
            report["schema"] = json!(SCHEMA);
            report["command"] = json!(name);
            report["certificates"] = json!(certs.written);
            Outcome { code, report }
        }
        Err(f) => {
            let message = match f.context {
                Some(file) => format!("{file}: {}", f.message),
                None => f.message,
            };
            Outcome {
                code: EXIT_INPUT_ERROR,
                report: json!({"schema": SCHEMA, "command": name, "error": message}),
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Pgraph { .. } => "pgraph",
        Command::ProductP { .. } => "product-p",
        Command::SwitchEq { .. } => "switch-eq",
        Command::Hom { .. } => "hom",
        Command::Core { .. } => "core",
        Command::Excluders { .. } => "excluders",
        Command::Triples { .. } => "triples",
        Command::FindPoly { .. } => "find-poly",
        Command::CheckPoly { .. } => "check-poly",
        Command::MinOrder { .. } => "min-order",
        Command::NewmainBuild { .. } => "newmain-build",
        Command::NewmainSearch { .. } => "newmain-search",
        Command::Classify { .. } => "classify",
    }
}

fn dispatch(command: &Command, certs: &mut Certificates) -> Run<(i32, Value)> {
    let report = match command {
        Command::Pgraph { graph } => {
            let h = load_graph(graph)?.graph;
            let pg = switching_graph(&h);
            certs.write("pgraph.brg", &graph_to_text(&pg.graph, Some(&pg.switch)))?;
            json!({"vertices": pg.graph.len(), "graph": graph_to_json(&pg.graph, Some(&pg.switch))})
        }
        Command::ProductP { graph } => {
            let h = load_graph(graph)?.graph;
            let prod = product_with_p(&h);
            certs.write(
                "product.brg",
                &graph_to_text(&prod.graph, Some(&prod.parity_switch)),
            )?;
            json!({"vertices": prod.graph.len(), "graph": graph_to_json(&prod.graph, Some(&prod.parity_switch))})
        }
        Command::SwitchEq { first, second } => {
            let g1 = load_graph(first)?.graph;
            let g2 = load_graph(second)?.graph;
            let found = are_switch_equivalent(&g1, &g2)?;
            json!({
                "equivalent": found.is_some(),
                "switch_set": found.map(|s| s.names(&g1)),
            })
        }
        Command::Hom {
            source,
            target,
            lists,
            switch,
        } => hom(source, target, lists.as_deref(), *switch, certs)?,
        Command::Core { graph, switch } => {
            let h = load_graph(graph)?.graph;
            check_size(&h)?;
            let core = if *switch {
                switch_core_retract(&h)?
            } else {
                core_retract(&h)?
            };
            certs.write("core.brg", &graph_to_text(&core.graph, None))?;
            core_json(&h, &core)
        }
        Command::Excluders { graph, a, b, c } => {
            let h = load_graph(graph)?.graph;
            check_size(&h)?;
            let red = h.red_graph();
            let triple = [red.require(a)?, red.require(b)?, red.require(c)?];
            let mut found = Vec::new();
            for t in 0..3 {
                let cert = excluder(&red, triple, t)?;
                if let Some(c) = &cert {
                    if !c.verify(&red) {
                        return Err(Error::SelfCheck(
                            "excluder certificate does not verify".into(),
                        )
                        .into());
                    }
                }
                found.push(cert.map(|c| c.to_json(&red)));
            }
            let permutable = found.iter().all(Option::is_some) && a != b && b != c && a != c;
            let report = json!({"triple": [a, b, c], "permutable": permutable, "excluders": found});
            certs.write_json("excluders.json", &report)?;
            report
        }
        Command::Triples { graph } => {
            let h = load_graph(graph)?.graph;
            check_size(&h)?;
            let red = h.red_graph();
            let triples = permutable_triples(&red)?;
            if triples.iter().any(|t| !t.verify(&red)) {
                return Err(Error::SelfCheck("permutable triple does not verify".into()).into());
            }
            let list: Vec<Value> = triples.iter().map(|t| t.to_json(&red)).collect();
            let report = json!({"count": list.len(), "triples": list});
            certs.write_json("triples.json", &report)?;
            report
        }
        Command::FindPoly { graph, props, on } => {
            let file = load_graph(graph)?;
            check_size(&file.graph)?;
            let props = PolyProps::parse(props)?;
            let target = target_for(file, *on)?;
            let outcome = search_poly3(&target, props)?;
            let report = json!({
                "target_vertices": target.len(),
                "properties": props.props().iter().map(|p| p.name()).collect::<Vec<_>>(),
                "found": outcome.is_found(),
            });
            if let Some(f) = outcome.found() {
                certs.write("table.txt", &table_to_text(&target.graph, f))?;
            }
            report
        }
        Command::CheckPoly {
            graph,
            table,
            props,
            on,
        } => {
            let file = load_graph(graph)?;
            let props = if props.is_empty() {
                PolyProps::none()
            } else {
                PolyProps::parse(props)?
            };
            let target = target_for(file, *on)?;
            let src = read(table)?;
            let f = in_file(table, parse_table(&src, &target.graph))?;
            prop_report(&target, &f, props)?
        }
        Command::MinOrder { graph, check } => {
            let h = load_graph(graph)?.graph;
            let under = h.underlying();
            match check {
                Some(path) => {
                    let src = read(path)?;
                    let order = in_file(path, parse_order(&src, &h))?;
                    let violation = is_min_ordering(&under, &order)?;
                    json!({
                        "min_ordering": violation.is_none(),
                        "violation": violation.map(|v| names(&h, &[v.a, v.a_prime, v.b, v.b_prime])),
                    })
                }
                None => {
                    check_size(&h)?;
                    let found = find_min_ordering(&under)?;
                    let order = found.map(|m| names(&h, m.order.as_slice()));
                    if let Some(o) = &order {
                        certs.write("order.txt", &format!("{}\n", o.join(" ")))?;
                    }
                    json!({"found": order.is_some(), "order": order})
                }
            }
        }
        Command::NewmainBuild { witness } => {
            let src = read(witness)?;
            let w = in_file(witness, witness_from_json(&src))?;
            let build = newmain_build(&w)?;
            build_json(&build, certs)?
        }
        Command::NewmainSearch { graph } => {
            let h = load_graph(graph)?.graph;
            check_size(&h)?;
            match newmain_premise_search(&h)? {
                Some(hit) => {
                    let mut report = build_json(&hit.build, certs)?;
                    report["found"] = json!(true);
                    report["switch_set"] = json!(hit.switch_set.names(&h));
                    report
                }
                None => json!({"found": false}),
            }
        }
        Command::Classify { graph, problem } => return classify(graph, *problem, certs),
    };
    Ok((EXIT_ANSWERED, report))
}

fn hom(
    source: &Path,
    target: &Path,
    lists: Option<&Path>,
    switch: bool,
    certs: &mut Certificates,
) -> Run<Value> {
    let g = load_graph(source)?.graph;
    let h = load_graph(target)?.graph;
    check_size(&h)?;
    let report = if switch {
        let pg = switching_graph(&h);
        let lists = match lists {
            Some(path) => {
                let src = read(path)?;
                in_file(path, parse_lists(&src, &g, &pg.graph, Some(&pg)))?
            }
            None => ListAssignment::full(g.len(), pg.graph.len()),
        };
        let found = list_switch_hom(&g, &h, &lists)?;
        json!({
            "found": found.is_some(),
            "switch_set": found.as_ref().map(|s| s.switch_set.names(&g)),
            "map": found.as_ref().map(|s| map_json(&g, &h, &s.map.map)),
        })
    } else {
        let lists = match lists {
            Some(path) => {
                let src = read(path)?;
                in_file(path, parse_lists(&src, &g, &h, None))?
            }
            None => ListAssignment::full(g.len(), h.len()),
        };
        let found = list_hom(&g, &h, &lists)?;
        json!({
            "found": found.is_some(),
            "map": found.as_ref().map(|f| map_json(&g, &h, &f.map)),
        })
    };
    if report["found"] == json!(true) {
        certs.write_json("hom.json", &report)?;
    }
    Ok(report)
}

fn core_json(h: &BrGraph, core: &Retract) -> Value {
    json!({
        "vertices": names(h, &core.vertices),
        "size": core.vertices.len(),
        "edge_slots": edge_slots(&core.graph),
        "component_slots": component_edge_slots(&core.graph),
        "graph": graph_to_json(&core.graph, None),
        "switch_set": core.switch_set.as_ref().map(|s| s.names(h)),
        "map": map_json(h, h, &core.map.map),
    })
}

fn target_for(file: GraphFile, on: On) -> Run<Target> {
    Ok(match on {
        On::Graph => match file.swap {
            Some(s) => Target::with_switch(file.graph, s)?,
            None => Target::new(file.graph),
        },
        On::Pgraph => Target::switching(&switching_graph(&file.graph)),
        On::RedPgraph => Target::from_graph(&switching_graph(&file.graph).graph.red_graph()),
    })
}

fn prop_report(target: &Target, f: &Polymorphism3, props: PolyProps) -> Run<Value> {
    let report = check_props(target, f, props)?;
    let g = &target.graph;
    let results: Vec<Value> = report
        .results
        .iter()
        .map(|r| {
            json!({
                "property": r.prop.name(),
                "holds": r.holds(),
                "counterexample": r.counterexample.as_ref().map(|c| json!({
                    "inputs": c.inputs.iter().map(|x| names(g, x)).collect::<Vec<_>>(),
                    "message": c.message,
                })),
            })
        })
        .collect();
    Ok(json!({"all_hold": report.all_hold(), "results": results}))
}

fn build_json(build: &NewmainBuild, certs: &mut Certificates) -> Run<Value> {
    let target = build.target();
    let checks = prop_report(&target, &build.phi, newmain_props())?;
    certs.write("h.brg", &graph_to_text(&build.h, None))?;
    certs.write("table.txt", &table_to_text(&target.graph, &build.phi))?;
    certs.write_json("witness.json", &witness_to_json(&build.witness))?;
    Ok(json!({
        "witness": witness_to_json(&build.witness),
        "graph": graph_to_json(&build.h, None),
        "target_vertices": target.len(),
        "table_entries": build.phi.table().len(),
        "checks": checks,
    }))
}

fn classify(graph: &Path, problem: ProblemArg, certs: &mut Certificates) -> Run<(i32, Value)> {
    let h = load_graph(graph)?.graph;
    check_size(&h)?;
    let verdict = match problem {
        ProblemArg::Shom => classify_shom(&h),
        ProblemArg::Lphom => classify_lphom(&h),
        ProblemArg::Lshom => classify_lshom(&h),
    }?;
    verdict.verify(&h)?;
    let report = verdict.to_json(&h);
    certs.write_json("verdict.json", &report)?;
    if let Some((target, table)) = verdict.table() {
        certs.write("table.txt", &table_to_text(target, table))?;
    }
    let code = if verdict.answer == Answer::Unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_ANSWERED
    };
    Ok((code, report))
}
