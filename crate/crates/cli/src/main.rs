use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kideal::corpus::{random_1graph, random_kgraph, rng};
use kideal::doc::{
    family_to_doc, graph_to_json, parse_colors, parse_dynsys, parse_family, parse_family_named, parse_graph,
    parse_vertex_list, FamilyDocument,
};
use kideal::dynsys::{dyn_check_nt_tuple, dyn_invariant_subsets, dyn_to_kgraph, validate_dynsys, DynSys};
use kideal::lattice::{
    build_lattice, enumerate_no_tuples, enumerate_nt_tuples, enumerate_relative_no_tuples, join, join_formula_check,
    meet, regular_case_report, rsy_report, show_antichain, to_dot, to_json, EnumConfig,
};
use kideal::oracle::{
    antichain_families, invariant_subsets_bruteforce, katsura_tpairs, katsura_tpairs_dyn, no_via_absorbent,
    nt_via_absorbent, pairs_to_families, tracing_oracle,
};
use kideal::tuple::{
    check_m_tuple, check_no_tuple, check_nt_tuple, check_relative_no_tuple, maximalise, rf_condition_sets, Witness,
};
use kideal::{ColorSet, Error, KGraph, TupleFamily, VertexSet};

#[derive(Parser)]
#[command(name = "kideal", version, about = "Gauge-invariant ideal data of finite k-graphs and commuting dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Decide {
    /// Use the independent reference implementation.
    #[arg(long)]
    oracle: bool,
    /// Print the intermediate sets behind the decision.
    #[arg(long)]
    explain: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the factorisation rules of a graph document.
    Validate { graph: PathBuf },
    /// F-tracing vertices.
    Tracing {
        graph: PathBuf,
        #[arg(long = "F")]
        f: String,
        #[arg(long)]
        oracle: bool,
    },
    /// H0 together with the vertices that are not F-sources modulo H0.
    Jf {
        graph: PathBuf,
        #[arg(long = "F")]
        f: String,
        #[arg(long = "H0")]
        h0: String,
    },
    /// Quotient graph by a hereditary set.
    Quotient {
        graph: PathBuf,
        #[arg(long = "H")]
        h: String,
    },
    /// Subgraph on a vertex set.
    Subgraph {
        graph: PathBuf,
        #[arg(long = "H")]
        h: String,
    },
    /// Saturation of a hereditary set.
    Saturate {
        graph: PathBuf,
        #[arg(long = "H")]
        h: String,
    },
    /// Decide whether a family is an NT-family.
    CheckNt {
        graph: PathBuf,
        family: PathBuf,
        #[command(flatten)]
        opts: Decide,
    },
    /// Decide whether a family is an NO-family (or relative to K).
    CheckNo {
        graph: PathBuf,
        family: PathBuf,
        #[arg(long)]
        relative: Option<PathBuf>,
        #[command(flatten)]
        opts: Decide,
    },
    /// Decide whether a family is an (M)-family.
    CheckM {
        graph: PathBuf,
        family: PathBuf,
        #[command(flatten)]
        opts: Decide,
    },
    /// Largest family inducing the same ideal.
    Maximalise { graph: PathBuf, family: PathBuf },
    /// List NT-families (or NO / relative NO) in canonical order.
    Enumerate {
        graph: PathBuf,
        #[arg(long, conflicts_with = "relative")]
        no: bool,
        #[arg(long)]
        relative: Option<PathBuf>,
        #[arg(long)]
        oracle: bool,
    },
    /// Hasse diagram of the NT-lattice.
    Lattice {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Meet of two NT-families.
    Meet { graph: PathBuf, a: PathBuf, b: PathBuf },
    /// Join of two NT-families.
    Join { graph: PathBuf, a: PathBuf, b: PathBuf },
    /// Join through the quotient by H0.
    JoinFormula {
        graph: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "H0")]
        h0: String,
    },
    /// Checks for sourceless graphs.
    RegularReport { graph: PathBuf },
    /// Checks for locally convex graphs.
    RsyReport { graph: PathBuf },
    /// Check that the maps of a dynamical system commute.
    DynsysValidate { system: PathBuf },
    /// Decide whether a family of subsets is an NT-family for the system.
    DynsysCheckNt {
        system: PathBuf,
        family: PathBuf,
        #[command(flatten)]
        opts: Decide,
    },
    /// Subsets whose families (H, V, ..., V) are NO-families.
    DynsysInvariants {
        system: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Emit a random valid graph document.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
    },
}

/// Outcome of a command: printed text plus whether the property held.
struct Report {
    out: String,
    holds: bool,
}

impl Report {
    fn ok(out: impl Into<String>) -> Self {
        Report { out: out.into(), holds: true }
    }

    fn decision(holds: bool, out: impl Into<String>) -> Self {
        Report { out: out.into(), holds }
    }
}

type Res<T> = std::result::Result<T, Error>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Res<KGraph> {
    parse_graph(&read(path)?)
}

fn load_valid_graph(path: &Path) -> Res<KGraph> {
    let g = load_graph(path)?;
    if let Some(v) = g.validate().first() {
        return Err(Error::Input(format!("not a k-graph: {}", v.describe(&g))));
    }
    Ok(g)
}

fn load_family(g: &KGraph, path: &Path) -> Res<TupleFamily> {
    parse_family(g, &read(path)?)
}

fn colors(g: &KGraph, key: &str) -> Res<ColorSet> {
    let f = parse_colors(key, g.k())?;
    if f.is_empty() {
        return Err(Error::Input("--F must name at least one color".into()));
    }
    Ok(f)
}

fn vertices(g: &KGraph, list: &str) -> Res<VertexSet> {
    parse_vertex_list(g.vertices(), list)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn families_json(g: &KGraph, list: &[TupleFamily]) -> String {
    let docs: Vec<FamilyDocument> = list.iter().map(|h| family_to_doc(g, h)).collect();
    json(&docs)
}

fn witness_report(names: &[String], w: Option<Witness>, yes: &str, no: &str) -> Report {
    match w {
        None => Report::decision(true, yes),
        Some(w) => Report::decision(false, format!("{no}\n{}", w.describe(names))),
    }
}

fn explain_nt(g: &KGraph, h: &TupleFamily) -> Res<String> {
    let mut lines = Vec::new();
    for m in 1..(1usize << g.k()) - 1 {
        let f = ColorSet::from_mask(m);
        let (h1, h2, h3) = rf_condition_sets(g, h, f)?;
        lines.push(format!(
            "F={f}: H1={} H2={} H3={} H_F={}",
            g.show_set(h1),
            g.show_set(h2),
            g.show_set(h3),
            g.show_set(h.get(f))
        ));
    }
    Ok(lines.join("\n"))
}

fn with_explain(mut r: Report, extra: Res<String>) -> Res<Report> {
    let extra = extra?;
    if !extra.is_empty() {
        r.out = format!("{}\n{extra}", r.out);
    }
    Ok(r)
}

fn check_nt(g: &KGraph, h: &TupleFamily, opts: &Decide) -> Res<Report> {
    let r = if opts.oracle {
        let holds = nt_via_absorbent(g, h)?;
        Report::decision(holds, if holds { "NT-family (oracle)" } else { "not an NT-family (oracle)" })
    } else {
        witness_report(g.vertices(), check_nt_tuple(g, h)?, "NT-family", "not an NT-family")
    };
    // the three sets are only defined once the base is hereditary
    if opts.explain && g.is_hereditary(h.base()) {
        return with_explain(r, explain_nt(g, h));
    }
    Ok(r)
}

fn check_no(g: &KGraph, h: &TupleFamily, relative: Option<&TupleFamily>, opts: &Decide) -> Res<Report> {
    let r = match (relative, opts.oracle) {
        (Some(k), true) => {
            let holds = nt_via_absorbent(g, h)? && k.is_subset(h);
            Report::decision(holds, if holds { "relative NO-family (oracle)" } else { "not a relative NO-family (oracle)" })
        }
        (Some(k), false) => witness_report(
            g.vertices(),
            check_relative_no_tuple(g, h, k)?,
            "relative NO-family",
            "not a relative NO-family",
        ),
        (None, true) => {
            let holds = no_via_absorbent(g, h)?;
            Report::decision(holds, if holds { "NO-family (oracle)" } else { "not an NO-family (oracle)" })
        }
        (None, false) => witness_report(g.vertices(), check_no_tuple(g, h)?, "NO-family", "not an NO-family"),
    };
    if opts.explain {
        let mut lines = Vec::new();
        for m in 1..1usize << g.k() {
            let f = ColorSet::from_mask(m);
            let tr = if opts.oracle { tracing_oracle(g, f) } else { g.f_tracing(f)? };
            lines.push(format!("F={f}: tracing={} H_F={}", g.show_set(tr), g.show_set(h.get(f))));
        }
        return with_explain(r, Ok(lines.join("\n")));
    }
    Ok(r)
}

fn check_m(g: &KGraph, h: &TupleFamily, opts: &Decide) -> Res<Report> {
    if opts.oracle {
        // (M)-families are exactly the NT-families with empty base
        let holds = h.base().is_empty() && nt_via_absorbent(g, h)?;
        return Ok(Report::decision(holds, if holds { "(M)-family (oracle)" } else { "not an (M)-family (oracle)" }));
    }
    let r = witness_report(g.vertices(), check_m_tuple(g, h)?, "(M)-family", "not an (M)-family");
    if opts.explain && h.base().is_empty() && g.is_hereditary(h.base()) {
        return with_explain(r, explain_nt(g, h));
    }
    Ok(r)
}

fn enumerate(g: &KGraph, no: bool, relative: Option<&TupleFamily>, oracle: bool) -> Res<Vec<TupleFamily>> {
    if oracle {
        if no || relative.is_some() {
            return Err(Error::Input("--oracle enumerates NT-families only".into()));
        }
        if g.k() == 1 {
            return Ok(pairs_to_families(&katsura_tpairs(g)?));
        }
        if g.n() == 1 && g.is_sourceless() {
            return antichain_families(g);
        }
        return Err(Error::Input("no enumeration oracle for this graph (needs rank 1 or one vertex)".into()));
    }
    match relative {
        Some(k) => enumerate_relative_no_tuples(g, k),
        None if no => enumerate_no_tuples(g),
        None => enumerate_nt_tuples(g),
    }
}

fn load_dynsys_family(ds: &DynSys, path: &Path) -> Res<TupleFamily> {
    parse_family_named(ds.carrier(), ds.d(), &read(path)?)
}

fn dynsys_check_nt(ds: &DynSys, h: &TupleFamily, opts: &Decide) -> Res<Report> {
    if opts.oracle {
        let holds = if ds.d() == 1 {
            katsura_tpairs_dyn(ds)?.contains(&(h.base(), h.get(ColorSet::single(1))))
        } else {
            nt_via_absorbent(&dyn_to_kgraph(ds)?, h)?
        };
        return Ok(Report::decision(holds, if holds { "NT-family (oracle)" } else { "not an NT-family (oracle)" }));
    }
    let r = witness_report(ds.carrier(), dyn_check_nt_tuple(ds, h)?, "NT-family", "not an NT-family");
    if opts.explain {
        let g = dyn_to_kgraph(ds)?;
        if g.is_hereditary(h.base()) {
            return with_explain(r, explain_nt(&g, h));
        }
    }
    Ok(r)
}

fn run(cmd: Command) -> Res<Report> {
    match cmd {
        Command::Validate { graph } => {
            let g = load_graph(&graph)?;
            let v = g.validate();
            if v.is_empty() {
                return Ok(Report::ok(format!("valid {}-graph: {} vertices, {} edges", g.k(), g.n(), g.edges().len())));
            }
            let lines: Vec<String> = v.iter().map(|x| x.describe(&g)).collect();
            Ok(Report::decision(false, format!("invalid\n{}", lines.join("\n"))))
        }
        Command::Tracing { graph, f, oracle } => {
            let g = load_valid_graph(&graph)?;
            let f = colors(&g, &f)?;
            let s = if oracle { tracing_oracle(&g, f) } else { g.f_tracing(f)? };
            Ok(Report::ok(g.show_set(s)))
        }
        Command::Jf { graph, f, h0 } => {
            let g = load_valid_graph(&graph)?;
            let f = colors(&g, &f)?;
            Ok(Report::ok(g.show_set(g.jf_vertices(f, vertices(&g, &h0)?)?)))
        }
        Command::Quotient { graph, h } => {
            let g = load_valid_graph(&graph)?;
            Ok(Report::ok(graph_to_json(&g.quotient_graph(vertices(&g, &h)?)?)))
        }
        Command::Subgraph { graph, h } => {
            let g = load_valid_graph(&graph)?;
            Ok(Report::ok(graph_to_json(&g.subgraph(vertices(&g, &h)?)?)))
        }
        Command::Saturate { graph, h } => {
            let g = load_valid_graph(&graph)?;
            Ok(Report::ok(g.show_set(g.saturation(vertices(&g, &h)?)?)))
        }
        Command::CheckNt { graph, family, opts } => {
            let g = load_valid_graph(&graph)?;
            check_nt(&g, &load_family(&g, &family)?, &opts)
        }
        Command::CheckNo { graph, family, relative, opts } => {
            let g = load_valid_graph(&graph)?;
            let h = load_family(&g, &family)?;
            let k = relative.map(|p| load_family(&g, &p)).transpose()?;
            check_no(&g, &h, k.as_ref(), &opts)
        }
        Command::CheckM { graph, family, opts } => {
            let g = load_valid_graph(&graph)?;
            check_m(&g, &load_family(&g, &family)?, &opts)
        }
        Command::Maximalise { graph, family } => {
            let g = load_valid_graph(&graph)?;
            let m = maximalise(&g, &load_family(&g, &family)?)?;
            Ok(Report::ok(json(&family_to_doc(&g, &m))))
        }
        Command::Enumerate { graph, no, relative, oracle } => {
            let g = load_valid_graph(&graph)?;
            let k = relative.map(|p| load_family(&g, &p)).transpose()?;
            let list = enumerate(&g, no, k.as_ref(), oracle)?;
            Ok(Report::ok(families_json(&g, &list)))
        }
        Command::Lattice { graph, format } => {
            let g = load_valid_graph(&graph)?;
            let lat = build_lattice(&g, enumerate_nt_tuples(&g)?)?;
            Ok(Report::ok(match format {
                Format::Dot => to_dot(&g, &lat).trim_end().to_string(),
                Format::Json => json(&to_json(&g, &lat)),
            }))
        }
        Command::Meet { graph, a, b } => {
            let g = load_valid_graph(&graph)?;
            let m = meet(&g, &load_family(&g, &a)?, &load_family(&g, &b)?)?;
            Ok(Report::ok(json(&family_to_doc(&g, &m))))
        }
        Command::Join { graph, a, b } => {
            let g = load_valid_graph(&graph)?;
            let (a, b) = (load_family(&g, &a)?, load_family(&g, &b)?);
            let cfg = EnumConfig::default();
            eprintln!(
                "join computed over the full NT enumeration (bounds: {} cells, {} families, {} steps)",
                cfg.max_cells, cfg.max_tuples, cfg.max_steps
            );
            let nodes = enumerate_nt_tuples(&g)?;
            Ok(Report::ok(json(&family_to_doc(&g, &join(&a, &b, &nodes)?))))
        }
        Command::JoinFormula { graph, a, b, h0 } => {
            let g = load_valid_graph(&graph)?;
            let (a, b) = (load_family(&g, &a)?, load_family(&g, &b)?);
            let jf = join_formula_check(&g, &a, &b, vertices(&g, &h0)?)?;
            let out = serde_json::json!({
                "family": family_to_doc(&g, &jf.family),
                "changing_rounds": jf.changing_rounds,
            });
            Ok(Report::ok(json(&out)))
        }
        Command::RegularReport { graph } => {
            let g = load_valid_graph(&graph)?;
            let rep = regular_case_report(&g)?;
            let mut out = serde_json::json!({
                "nt_count": rep.nt_count,
                "no_expected": rep.no_expected.iter().map(|h| family_to_doc(&g, h)).collect::<Vec<_>>(),
                "no_enumerated": rep.no_enumerated.iter().map(|h| family_to_doc(&g, h)).collect::<Vec<_>>(),
                "no_match": rep.no_match,
            });
            if let Some(a) = &rep.antichains {
                out["antichains"] = serde_json::json!(a.iter().map(|x| show_antichain(x)).collect::<Vec<_>>());
                out["antichain_match"] = serde_json::json!(rep.antichain_match);
            }
            let holds = rep.no_match && rep.antichain_match.unwrap_or(true);
            Ok(Report::decision(holds, json(&out)))
        }
        Command::RsyReport { graph } => {
            let g = load_valid_graph(&graph)?;
            let rep = rsy_report(&g)?;
            let out = serde_json::json!({
                "hereditary_saturated": rep.hereditary_saturated.iter().map(|&s| g.names(s)).collect::<Vec<_>>(),
                "no_count": rep.no_tuples.len(),
                "bijective": rep.bijective,
                "joins_match": rep.joins_match,
            });
            Ok(Report::decision(rep.bijective && rep.joins_match, json(&out)))
        }
        Command::DynsysValidate { system } => {
            let ds = parse_dynsys(&read(&system)?)?;
            let v = validate_dynsys(&ds);
            if v.is_empty() {
                return Ok(Report::ok(format!("valid: {} commuting maps on {} points", ds.d(), ds.n())));
            }
            let lines: Vec<String> = v.iter().map(|x| x.describe(&ds)).collect();
            Ok(Report::decision(false, format!("invalid\n{}", lines.join("\n"))))
        }
        Command::DynsysCheckNt { system, family, opts } => {
            let ds = parse_dynsys(&read(&system)?)?;
            let h = load_dynsys_family(&ds, &family)?;
            dynsys_check_nt(&ds, &h, &opts)
        }
        Command::DynsysInvariants { system, oracle } => {
            let ds = parse_dynsys(&read(&system)?)?;
            let sets = if oracle {
                if !ds.is_automorphic() {
                    return Err(Error::Input("the brute-force route needs bijective maps".into()));
                }
                invariant_subsets_bruteforce(&ds)?
            } else {
                dyn_invariant_subsets(&ds)?
            };
            let names: Vec<Vec<&str>> =
                sets.iter().map(|s| s.iter().map(|v| ds.carrier()[v].as_str()).collect()).collect();
            Ok(Report::ok(json(&names)))
        }
        Command::Generate { seed, k, max_vertices } => {
            if k == 0 || k > 3 || max_vertices == 0 || max_vertices > 8 {
                return Err(Error::Input("generate supports 1 ≤ k ≤ 3 and 1 ≤ max-vertices ≤ 8".into()));
            }
            let mut r = rng(seed);
            let g = if k == 1 { random_1graph(&mut r, max_vertices, 6) } else { random_kgraph(&mut r, k, max_vertices) };
            Ok(Report::ok(graph_to_json(&g)))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Composition(_) | Error::Precondition(_) => 2,
        Error::Capacity(_) => 3,
        Error::Inconclusive(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(r) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", r.out);
            if r.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
