//! `mcayley`: build, analyze and check m-Cayley digraphs from the command line.
//!
//! Exit codes: 0 the property holds (or the command succeeded), 1 it fails
//! (or a reproduction mismatched), 2 bad input, 3 a bound or budget was hit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use mcayley::aut::{mcayley_automorphisms, PartMode};
use mcayley::ci::{
    check_mci_babai, check_mci_direct, check_mpci_babai, check_mpci_direct, CiReport, CiWitness,
};
use mcayley::digraph::{connection_sets_from_arcs, ConnectionSetsFile, MCayleyDigraph, Mode};
use mcayley::groups::make_named_group_with;
use mcayley::normalizer::{filtered_subgroups, NormalizerGroup};
use mcayley::perms::Permutation;
use mcayley::repro::fixtures::{canonical_id, FixtureFile};
use mcayley::repro::{
    census, fixture, merge, run_fixture, verify_small_theorems, verify_table1, CensusConfig,
    CensusResult, Engine, FIXTURE_IDS,
};
use mcayley::{Error, Limits};

#[derive(Parser)]
#[command(
    name = "mcayley",
    version,
    about = "m-Cayley digraphs, their automorphisms and CI checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum number of group elements any enumeration may visit.
    #[arg(long, global = true, env = "MCAYLEY_BOUND_ELEMENTS")]
    element_bound: Option<usize>,
    /// Maximum vertex count for automorphism searches.
    #[arg(long, global = true, env = "MCAYLEY_BOUND_AUT_VERTICES")]
    aut_bound: Option<usize>,
    /// Maximum order of an input group.
    #[arg(long, global = true, env = "MCAYLEY_BOUND_GROUP_ORDER")]
    group_bound: Option<usize>,
    /// Wall-clock budget for censuses, in seconds.
    #[arg(long, global = true, env = "MCAYLEY_BOUND_BUDGET_S")]
    budget_s: Option<u64>,
    /// Worker threads for censuses.
    #[arg(long, global = true, env = "MCAYLEY_WORKERS")]
    workers: Option<usize>,
    /// Report wall time (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Mci,
    Mpci,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Babai,
    Orbits,
}

/// Inputs are connection-set JSON files, digraph exports, fixture files, or
/// `fixture:<id>` (`fixture:<id>:sigma` for the second digraph of a pair).
#[derive(Subcommand)]
enum Command {
    /// Build the digraph and summarize it.
    Build {
        input: String,
        /// Override the mode stored in the input.
        #[arg(long)]
        mode: Option<Mode>,
        /// Write the digraph (JSON, or DIMACS for `.dimacs`/`.col`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Automorphism group and normalizer data.
    Aut {
        input: String,
        /// Also report the subgroup fixing every part.
        #[arg(long)]
        parts_fixed: bool,
        /// Also report the orders of Ñ, C̃ and K̃.
        #[arg(long)]
        normalizer: bool,
    },
    /// Decide mCI or mPCI for one digraph, or directly against a second one.
    Check {
        input: String,
        #[arg(long, value_enum)]
        property: Property,
        /// Direct check: is some n ∈ N mapping the input onto this digraph?
        #[arg(long)]
        against: Option<String>,
    },
    /// Exhaustive census of all instances of (group, m, mode).
    Census {
        group: String,
        m: usize,
        mode: Mode,
        /// 0-based shard `k/n`.
        #[arg(long, default_value = "0/1")]
        shard: String,
        /// Continue from an existing shard file in `--out`.
        #[arg(long)]
        resume: bool,
        /// Directory for per-instance JSON-lines records.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = EngineArg::Babai)]
        engine: EngineArg,
    },
    /// Combine shard files of one census.
    Merge {
        dir: PathBuf,
        group: String,
        m: usize,
        mode: Mode,
    },
    /// Reproduce a fixture (`F1`..`F11` or its id), `all`, `table1` or `theorems`.
    Repro {
        target: String,
        /// Parameter k of the cyclic gadget.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Print a fixture as JSON.
    Fixture {
        id: String,
        #[arg(long)]
        k: Option<usize>,
        /// Print only the connection sets of Γ (or of Σ with `--sigma`).
        #[arg(long)]
        sets: bool,
        #[arg(long, requires = "sets")]
        sigma: bool,
    },
}

enum Status {
    Holds,
    Fails,
    Bound,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    fn code(self) -> ExitCode {
        ExitCode::from(match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Bound => 3,
        })
    }
}

struct Ctx {
    format: Format,
    limits: Limits,
    budget: Option<Duration>,
    workers: usize,
    timing: bool,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
        match self.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
            Format::Text => println!("{}", text()),
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let defaults = Limits::default();
    let ctx = Ctx {
        format: cli.format,
        limits: Limits {
            group_order: cli.group_bound.unwrap_or(defaults.group_order),
            elements: cli.element_bound.unwrap_or(defaults.elements),
            aut_vertices: cli.aut_bound.unwrap_or(defaults.aut_vertices),
        },
        budget: cli.budget_s.map(Duration::from_secs),
        workers: cli
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        timing: cli.timing,
    };
    match run(&ctx, cli.command) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            let bound = e
                .chain()
                .any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_bound));
            ExitCode::from(if bound { 3 } else { 2 })
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> anyhow::Result<Status> {
    match command {
        Command::Build { input, mode, out } => cmd_build(ctx, &input, mode, out.as_deref()),
        Command::Aut {
            input,
            parts_fixed,
            normalizer,
        } => cmd_aut(ctx, &input, parts_fixed, normalizer),
        Command::Check {
            input,
            property,
            against,
        } => cmd_check(ctx, &input, property, against.as_deref()),
        Command::Census {
            group,
            m,
            mode,
            shard,
            resume,
            out,
            engine,
        } => {
            let (k, n) = parse_shard(&shard)?;
            let mut cfg = CensusConfig::new(
                Arc::new(make_named_group_with(&group, &ctx.limits)?),
                m,
                mode,
            );
            cfg.shard = (k, n);
            cfg.resume = resume;
            cfg.out_dir = out;
            cfg.engine = match engine {
                EngineArg::Babai => Engine::Babai,
                EngineArg::Orbits => Engine::Orbits,
            };
            cfg.workers = ctx.workers;
            cfg.budget = ctx.budget;
            cfg.limits = ctx.limits.clone();
            if resume && cfg.out_dir.is_none() {
                bail!("--resume needs --out");
            }
            report_census(ctx, &census(&cfg)?)
        }
        Command::Merge {
            dir,
            group,
            m,
            mode,
        } => {
            let g = Arc::new(make_named_group_with(&group, &ctx.limits)?);
            report_census(ctx, &merge(&dir, g, m, mode)?)
        }
        Command::Repro { target, k } => cmd_repro(ctx, &target, k),
        Command::Fixture { id, k, sets, sigma } => {
            let fx = fixture(&with_k(&id, k))?;
            if sets {
                let g = if sigma {
                    fx.sigma
                        .as_ref()
                        .ok_or_else(|| anyhow!("fixture {} has no second digraph", fx.id))?
                } else {
                    &fx.gamma
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&ConnectionSetsFile::of(g))?
                );
            } else {
                println!("{}", serde_json::to_string_pretty(&fx.to_file())?);
            }
            Ok(Status::Holds)
        }
    }
}

fn with_k(id: &str, k: Option<usize>) -> String {
    match k {
        Some(k) if canonical_id(id).starts_with("cyclic-gadget") => format!("cyclic-gadget({k})"),
        _ => id.to_string(),
    }
}

fn parse_shard(s: &str) -> anyhow::Result<(u64, u64)> {
    let (k, n) = s
        .split_once('/')
        .ok_or_else(|| anyhow!("shard must look like k/n"))?;
    let (k, n): (u64, u64) = (k.trim().parse()?, n.trim().parse()?);
    if n == 0 || k >= n {
        bail!("shard {k}/{n}: need 0 <= k < n");
    }
    Ok((k, n))
}

fn load(input: &str, limits: &Limits) -> anyhow::Result<MCayleyDigraph> {
    if let Some(rest) = input.strip_prefix("fixture:") {
        let (id, second) = match rest.strip_suffix(":sigma") {
            Some(id) => (id, true),
            None => (rest, false),
        };
        let fx = fixture(id)?;
        return if second {
            fx.sigma
                .ok_or_else(|| anyhow!("fixture {} has no second digraph", fx.id))
        } else {
            Ok(fx.gamma)
        };
    }
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {input}"))?;
    from_value(value, limits).with_context(|| format!("loading {input}"))
}

fn from_value(value: Value, limits: &Limits) -> anyhow::Result<MCayleyDigraph> {
    if value.get("gamma").is_some() {
        let f: FixtureFile = serde_json::from_value(value)?;
        return Ok(f.gamma.build(limits)?);
    }
    if value.get("sets").is_some() {
        let f: ConnectionSetsFile = serde_json::from_value(value)?;
        return Ok(f.build(limits)?);
    }
    if let Some(arcs) = value.get("arcs") {
        let group = value["group"]
            .as_str()
            .ok_or_else(|| anyhow!("missing group"))?;
        let m = value["m"].as_u64().ok_or_else(|| anyhow!("missing m"))? as usize;
        let mode: Mode = serde_json::from_value(value["mode"].clone())?;
        let arcs: Vec<(usize, usize)> = serde_json::from_value(arcs.clone())?;
        let g = Arc::new(make_named_group_with(group, limits)?);
        return Ok(connection_sets_from_arcs(g, m, &arcs, mode)?);
    }
    bail!("expected connection sets, a digraph export or a fixture file")
}

fn rebuild(g: &MCayleyDigraph, mode: Option<Mode>) -> anyhow::Result<MCayleyDigraph> {
    match mode {
        Some(mode) if mode != g.mode() => Ok(MCayleyDigraph::build(g.conn().clone(), mode)?),
        _ => Ok(g.clone()),
    }
}

fn cmd_build(
    ctx: &Ctx,
    input: &str,
    mode: Option<Mode>,
    out: Option<&Path>,
) -> anyhow::Result<Status> {
    let g = rebuild(&load(input, &ctx.limits)?, mode)?;
    let weak = g.weak_components();
    let blocks = g.block_components();
    if let Some(path) = out {
        let dimacs = path
            .extension()
            .is_some_and(|e| e == "dimacs" || e == "col");
        let body = if dimacs {
            g.export_dimacs()
        } else {
            serde_json::to_string_pretty(&g.export_json())? + "\n"
        };
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    let summary = json!({
        "group": g.group().name(),
        "m": g.m(),
        "mode": g.mode(),
        "vertices": g.n(),
        "arcs": g.arcs().len(),
        "weak_components": weak.blocks,
        "block_components": blocks,
    });
    ctx.emit(&summary, || {
        format!(
            "{} vertices, {} arcs; {} weak components; {} block components",
            g.n(),
            g.arcs().len(),
            weak.len(),
            blocks.len()
        )
    })?;
    Ok(Status::Holds)
}

fn cycles(p: &Permutation) -> String {
    let cs: Vec<String> = p
        .cycles()
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            format!(
                "({})",
                c.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            )
        })
        .collect();
    if cs.is_empty() {
        "()".into()
    } else {
        cs.join("")
    }
}

fn cmd_aut(ctx: &Ctx, input: &str, parts_fixed: bool, normalizer: bool) -> anyhow::Result<Status> {
    let g = load(input, &ctx.limits)?;
    let a = mcayley_automorphisms(&g, PartMode::Free, &ctx.limits)?;
    let mut out = json!({
        "vertices": g.n(),
        "aut_order": a.order().to_string(),
        "generators": a.generators().iter().map(|p| p.as_slice().to_vec()).collect::<Vec<_>>(),
    });
    let mut text = vec![format!("|Aut| = {}", a.order())];
    text.extend(a.generators().iter().map(|p| format!("  {}", cycles(p))));
    if parts_fixed {
        let f = mcayley_automorphisms(&g, PartMode::Fixed, &ctx.limits)?;
        out["fixed_parts_order"] = json!(f.order().to_string());
        text.push(format!("|Aut_(G)| = {}", f.order()));
    }
    if normalizer {
        let ng = NormalizerGroup::new(g.conn().group_arc().clone(), g.m());
        let n_tilde = ng.stabilizer_order(g.conn());
        let k_tilde = ng.kernel_order(g.conn());
        out["n_tilde_order"] = json!(n_tilde.to_string());
        out["k_tilde_order"] = json!(k_tilde.to_string());
        text.push(format!("|Ñ| = {n_tilde}"));
        match filtered_subgroups(&g, 0, &ctx.limits) {
            Ok(f) => {
                out["c_tilde_order"] = json!(f.c_tilde.len().to_string());
                text.push(format!("|C̃| = {}", f.c_tilde.len()));
            }
            Err(e) if e.is_bound() => text.push(format!("|C̃| not computed: {e}")),
            Err(e) => return Err(e.into()),
        }
        text.push(format!("|K̃| = {k_tilde}"));
    }
    ctx.emit(&out, || text.join("\n"))?;
    Ok(Status::Holds)
}

fn describe(report: &CiReport) -> String {
    let s = &report.stats;
    let mut lines = vec![format!(
        "{}: {}{}",
        report.property.as_str(),
        if report.verdict { "holds" } else { "fails" },
        if report.vacuous { " (vacuous)" } else { "" }
    )];
    if s.aut_order > 0 {
        lines.push(format!(
            "|Aut| = {}, acting group order {}, |Ñ| = {}, {} semiregular subgroups, class of R(G) has {}",
            s.aut_order, s.acting_order, s.normalizer_order, s.subgroups, s.class_size
        ));
    }
    if s.elements_scanned > 0 {
        lines.push(format!("{} elements scanned", s.elements_scanned));
    }
    match &report.witness {
        Some(CiWitness::NonConjugate { subgroup, .. }) => {
            lines.push("non-conjugate semiregular subgroup generated by:".into());
            let gens: Vec<String> = subgroup
                .to_perm_group()
                .generators
                .iter()
                .map(cycles)
                .collect();
            lines.push(format!("  {}", gens.join(", ")));
        }
        Some(CiWitness::Normalizer { element }) => lines.push(format!(
            "n = (left {:?}, alpha {:?}, sigma {:?})",
            element.left, element.alpha, element.sigma
        )),
        Some(CiWitness::Conjugators { conjugators }) => {
            lines.push(format!("{} conjugators onto R(G)", conjugators.len()))
        }
        None => {}
    }
    lines.extend(report.notes.iter().map(|n| format!("note: {n}")));
    lines.join("\n")
}

fn cmd_check(
    ctx: &Ctx,
    input: &str,
    property: Property,
    against: Option<&str>,
) -> anyhow::Result<Status> {
    let g = load(input, &ctx.limits)?;
    let clock = Instant::now();
    let mut report = match (property, against) {
        (Property::Mci, None) => check_mci_babai(&g, &ctx.limits)?,
        (Property::Mpci, None) => check_mpci_babai(&g, &ctx.limits)?,
        (p, Some(other)) => {
            let s = load(other, &ctx.limits)?;
            if p == Property::Mci {
                check_mci_direct(&g, &s, &ctx.limits)?
            } else {
                check_mpci_direct(&g, &s, &ctx.limits)?
            }
        }
    };
    if ctx.timing {
        report.stats.wall_ms = Some(clock.elapsed().as_millis() as u64);
    }
    ctx.emit(&report, || describe(&report))?;
    Ok(Status::of(report.verdict))
}

fn report_census(ctx: &Ctx, r: &CensusResult) -> anyhow::Result<Status> {
    ctx.emit(r, || {
        let mut s = r.summary();
        if !r.failures.is_empty() {
            let shown: Vec<String> = r.failures.iter().take(20).map(|i| i.to_string()).collect();
            s.push_str(&format!("\nfailing instances: {}", shown.join(" ")));
            if r.failures.len() > 20 {
                s.push_str(" ...");
            }
        }
        s
    })?;
    Ok(if r.failed > 0 {
        Status::Fails
    } else if !r.complete || r.errors > 0 {
        Status::Bound
    } else {
        Status::Holds
    })
}

fn fixture_json(ctx: &Ctx, id: &str) -> anyhow::Result<(bool, Value, String)> {
    let r = run_fixture(id, &ctx.limits)?;
    let mut text = vec![format!(
        "{}: {}",
        r.id,
        if r.pass { "PASS" } else { "FAIL" }
    )];
    for e in &r.results {
        let mark = if e.pass { "ok" } else { "MISMATCH" };
        if e.pass {
            text.push(format!("  {}: {} [{mark}]", e.check, e.actual));
        } else {
            text.push(format!(
                "  {}: expected {}, got {} [{mark}]",
                e.check, e.expected, e.actual
            ));
        }
    }
    Ok((r.pass, serde_json::to_value(&r)?, text.join("\n")))
}

fn cmd_repro(ctx: &Ctx, target: &str, k: Option<usize>) -> anyhow::Result<Status> {
    let mut pass = true;
    let mut values = Vec::new();
    let mut texts = Vec::new();
    let all = target == "all";
    if all || target == "table1" {
        let r = verify_table1();
        pass &= r.pass;
        let mut t = vec!["M | primitive | conjugate | normal | unique".to_string()];
        let yn = |b: bool| if b { "yes" } else { "no" };
        for row in &r.rows {
            let f = &row.flags;
            t.push(format!(
                "{} (order {}) | {} | {} | {} | {} [{}]",
                row.name,
                f.order,
                yn(f.primitive),
                yn(f.conjugate),
                yn(f.normal),
                yn(f.unique),
                if row.pass { "ok" } else { "MISMATCH" }
            ));
        }
        t.push(format!(
            "{} overgroups of the fixed D6; {} with Sylow 3-subgroup of order 3, all regular D6 conjugate: {}; rows with 9 | |M| match: {}",
            r.overgroups,
            r.sylow3_order3,
            yn(r.sylow3_order3_conjugate),
            yn(r.sylow9_rows_match)
        ));
        texts.push(t.join("\n"));
        values.push(json!({"table1": r}));
    }
    if all || target == "theorems" {
        let r = verify_small_theorems(ctx.workers, &ctx.limits)?;
        pass &= r.pass;
        texts.push(
            r.checks
                .iter()
                .map(|c| {
                    format!(
                        "{} [{}]: {}",
                        c.name,
                        if c.pass { "ok" } else { "MISMATCH" },
                        c.detail
                    )
                })
                .collect::<Vec<_>>()
                .join("\n"),
        );
        values.push(json!({"theorems": r}));
    }
    let ids: Vec<String> = if all {
        FIXTURE_IDS.iter().map(|s| s.to_string()).collect()
    } else if target == "table1" || target == "theorems" {
        Vec::new()
    } else {
        vec![with_k(target, k)]
    };
    for id in ids {
        let (ok, v, t) = fixture_json(ctx, &id)?;
        pass &= ok;
        values.push(v);
        texts.push(t);
    }
    let out = if values.len() == 1 {
        values.pop().unwrap()
    } else {
        Value::Array(values)
    };
    ctx.emit(&out, || texts.join("\n"))?;
    Ok(Status::of(pass))
}
