//! `mdeg`: run the classification pipelines, check tuples, print normal forms
//! and manage the result cache.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdeg_core::classify::seeds::load_seed_file;
use mdeg_core::classify::{self, pipeline_id, Cache, ClassManifest, Context};
use mdeg_core::{common_projection, mixed_degree, mixed_volume, normal_form, soprunov_check, Error, LatticePolytope, PolytopeTuple};
use serde::Serialize;

mod gate;

use gate::{expected_count, Pipeline};

#[derive(Parser)]
#[command(name = "mdeg", version, about = "Lattice polytope tuples of small mixed degree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interior points, mixed volume, mixed degree and projections of a tuple.
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a classification pipeline and write its result.
    Classify(ClassifyArgs),
    /// Affine unimodular normal form of a single polytope.
    NormalForm {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Inspect or clean the result cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
        #[arg(long, global = true)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_enum)]
    pipeline: Pipeline,
    /// Family parameter, required for the family pipeline.
    #[arg(long)]
    k: Option<i64>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Cache directory; MDEG_CACHE_DIR overrides it.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Seed polytopes to use instead of the bundled ones.
    #[arg(long)]
    seed_file: Option<PathBuf>,
    /// Where to write the result (stdout if omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Do not compare the count with the expected value.
    #[arg(long)]
    no_gate: bool,
}

#[derive(Subcommand)]
enum CacheAction {
    Stat,
    Gc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::CoverageGap { .. } | Error::CounterexampleFound { .. } => 1,
            Error::Io(_) | Error::CacheCorrupt(_) => 3,
            Error::InternalInvariantViolation(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 3, message: format!("{}: {e}", path.display()) }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| usage(format!("parse error: {what}: {e}")))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct CheckReport {
    ambient_dim: usize,
    members: usize,
    mixed_volume: Option<i64>,
    interior_points: Option<usize>,
    bound_equality: Option<bool>,
    all_subsums_hollow: Option<bool>,
    mixed_degree: usize,
    witness: Option<mdeg_core::mixed::MixedDegreeWitness>,
    projection_exact: Option<Vec<i64>>,
    projection_translates: Option<Vec<i64>>,
    pair_projections: Vec<(usize, usize, bool)>,
}

fn check_report(t: &PolytopeTuple) -> Result<CheckReport, Failure> {
    let n = t.ambient_dim();
    let square = t.len() == n;
    let (mv, soprunov) = if square { (Some(mixed_volume(t)?), Some(soprunov_check(t)?)) } else { (None, None) };
    let md = mixed_degree(t)?;
    let full = t.iter().all(LatticePolytope::is_full_dimensional);
    let dir = |p: Option<mdeg_core::Projection>| p.map(|p| p.kernel_direction.to_vec());
    let (exact, translates) = if full && square {
        (dir(common_projection(t, false)?), dir(common_projection(t, true)?))
    } else {
        (None, None)
    };
    let mut pairs = Vec::new();
    if full && n == 3 {
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let pair = PolytopeTuple::new(vec![t[i].clone(), t[j].clone()])?;
                pairs.push((i, j, mdeg_core::proj::projects_onto_simplex_translates(&pair)?));
            }
        }
    }
    Ok(CheckReport {
        ambient_dim: n,
        members: t.len(),
        mixed_volume: mv,
        interior_points: soprunov.as_ref().map(|s| s.interior_count),
        bound_equality: soprunov.as_ref().map(|s| s.equality),
        all_subsums_hollow: soprunov.as_ref().map(|s| s.all_subsums_hollow),
        mixed_degree: md.value,
        witness: md.witness,
        projection_exact: exact,
        projection_translates: translates,
        pair_projections: pairs,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check_text(r: &CheckReport) -> String {
    let mut s = String::new();
    writeln!(s, "members\t{} in dimension {}", r.members, r.ambient_dim).unwrap();
    if let Some(mv) = r.mixed_volume {
        writeln!(s, "mixed_volume\t{mv}").unwrap();
    }
    if let Some(c) = r.interior_points {
        writeln!(s, "interior_points\t{c}").unwrap();
        writeln!(s, "bound_equality\t{}", yes_no(r.bound_equality == Some(true))).unwrap();
        writeln!(s, "all_subsums_hollow\t{}", yes_no(r.all_subsums_hollow == Some(true))).unwrap();
    }
    writeln!(s, "mixed_degree\t{}", r.mixed_degree).unwrap();
    if let Some(w) = &r.witness {
        writeln!(s, "witness\t{w:?}").unwrap();
    }
    let show = |d: &Option<Vec<i64>>| d.as_ref().map_or("no".to_string(), |v| format!("yes along {v:?}"));
    writeln!(s, "common_projection\t{}", show(&r.projection_exact)).unwrap();
    writeln!(s, "common_projection_translates\t{}", show(&r.projection_translates)).unwrap();
    for (i, j, ok) in &r.pair_projections {
        writeln!(s, "pair_projection\t{i} {j}\t{}", yes_no(*ok)).unwrap();
    }
    s
}

fn cmd_check(input: &Path, format: Format) -> Result<(), Failure> {
    let t: PolytopeTuple = parse(&read_input(input)?, "polytope tuple")?;
    let r = check_report(&t)?;
    emit(None, &if format == Format::Json { to_json(&r) } else { check_text(&r) })
}

fn cmd_normal_form(input: &Path, format: Format) -> Result<(), Failure> {
    let p: LatticePolytope = parse(&read_input(input)?, "polytope")?;
    let nf = normal_form(&p)?;
    let text = match format {
        Format::Json => to_json(&nf),
        Format::Text => {
            let m = &nf.canonical_vertex_matrix;
            let mut s = format!("digest\t{}\n", nf.hash);
            for r in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|c| m[(r, c)].to_string()).collect();
                writeln!(s, "{}", row.join(" ")).unwrap();
            }
            s
        }
    };
    emit(None, &text)
}

fn manifest_text(m: &ClassManifest) -> String {
    let mut s = format!("pipeline\t{}\ncount\t{}\nprovenance\t{}\n", m.pipeline_id, m.count, m.provenance);
    for (k, v) in &m.parameters {
        writeln!(s, "parameter\t{k}\t{v}").unwrap();
    }
    for c in &m.classes {
        let members: Vec<String> = c.members.iter().map(|p| format!("{:?}", p.vertices())).collect();
        writeln!(s, "class\t{}\t{}", c.digest, members.join("\t")).unwrap();
    }
    s
}

/// The number a run produced, with its rendered output.
struct RunOutput {
    count: usize,
    json: String,
    text: String,
}

impl RunOutput {
    fn manifest(m: &ClassManifest) -> Self {
        RunOutput { count: m.count, json: to_json(m), text: manifest_text(m) }
    }
}

fn context(args: &ClassifyArgs, cache: Cache) -> Result<Context, Failure> {
    match &args.seed_file {
        Some(p) => Ok(Context::from_seed_file(load_seed_file(&read_input(p)?)?, cache)),
        None => Ok(Context::bundled(cache)?),
    }
}

fn pairs_manifest(ctx: &Context) -> Result<ClassManifest, Failure> {
    Ok(classify::load_manifest(&ctx.cache, pipeline_id::EXCEPTIONAL_PAIRS, &Default::default(), &ctx.provenance())?)
}

/// Both multi-exceptional manifests, computed once and stored.
fn multi_manifests(ctx: &Context) -> Result<(ClassManifest, ClassManifest), Failure> {
    let pairs = pairs_manifest(ctx)?;
    let load = |id| classify::load_manifest(&ctx.cache, id, &Default::default(), &pairs.provenance);
    if let (Ok(two), Ok(three)) = (load(pipeline_id::TWO_EXCEPTIONAL), load(pipeline_id::THREE_EXCEPTIONAL)) {
        return Ok((two, three));
    }
    let (two, three) = classify::triples_multi_exceptional(&pairs)?;
    classify::store_manifest(&ctx.cache, &two)?;
    classify::store_manifest(&ctx.cache, &three)?;
    Ok((two, three))
}

fn run(args: &ClassifyArgs) -> Result<RunOutput, Failure> {
    let cache = Cache::from_env_or(Some(args.cache_dir.clone().unwrap_or_else(|| PathBuf::from(".mdeg-cache"))));
    let out = match args.pipeline {
        Pipeline::ExceptionalPairs => {
            let ctx = context(args, cache)?;
            let m = classify::exceptional_pairs(&ctx)?;
            classify::store_manifest(&ctx.cache, &m)?;
            RunOutput::manifest(&m)
        }
        Pipeline::TwoExceptional => RunOutput::manifest(&multi_manifests(&context(args, cache)?)?.0),
        Pipeline::ThreeExceptional => RunOutput::manifest(&multi_manifests(&context(args, cache)?)?.1),
        Pipeline::OneExceptional => {
            let ctx = context(args, cache)?;
            let m = classify::triples_one_exceptional(&pairs_manifest(&ctx)?)?;
            classify::store_manifest(&ctx.cache, &m)?;
            RunOutput::manifest(&m)
        }
        Pipeline::Spanning => RunOutput::manifest(&classify::triples_spanning_directions()?),
        Pipeline::Family => {
            let k = args.k.ok_or_else(|| usage("--k is required for the family pipeline"))?;
            RunOutput::manifest(&classify::family_subtriples(k)?)
        }
        Pipeline::Cover => {
            let ctx = context(args, cache)?;
            let (two, three) = multi_manifests(&ctx)?;
            let pairs = pairs_manifest(&ctx)?;
            let one = classify::load_manifest(
                &ctx.cache,
                pipeline_id::ONE_EXCEPTIONAL,
                &[("pairs".to_string(), pairs.count.to_string())].into_iter().collect(),
                &pairs.provenance,
            )?;
            let r = classify::maximal_cover_check(&[&two, &three, &one])?;
            let mut text = String::new();
            for (label, md) in &r.maximal_degrees {
                writeln!(text, "maximal\t{label}\tmixed_degree\t{md}").unwrap();
            }
            for (d, label) in &r.assignments {
                writeln!(text, "class\t{d}\t{label}").unwrap();
            }
            RunOutput { count: r.assignments.len(), json: to_json(&r), text }
        }
        Pipeline::Dim4 => {
            let r = classify::dim4_case0_check()?;
            let text = format!("members\t{}\nsurviving\t{}\ncounterexamples\t{}\n", r.members, r.surviving, r.counterexamples.len());
            RunOutput { count: r.counterexamples.len(), json: to_json(&r), text }
        }
    };
    Ok(out)
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), Failure> {
    if args.k.is_some() != (args.pipeline == Pipeline::Family) {
        return Err(usage("--k is required for the family pipeline and only allowed there"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| usage(format!("thread pool: {e}")))?;
    let out = pool.install(|| run(args))?;
    emit(args.output.as_deref(), if args.format == Format::Json { &out.json } else { &out.text })?;
    eprintln!("count {}", out.count);
    if args.no_gate {
        return Ok(());
    }
    if let Some(expected) = expected_count(args.pipeline, args.k) {
        if out.count != expected {
            return Err(Failure { code: 1, message: format!("count {} differs from the expected {expected}", out.count) });
        }
    }
    Ok(())
}

fn cmd_cache(action: &CacheAction, dir: Option<PathBuf>) -> Result<(), Failure> {
    let cache = Cache::from_env_or(Some(dir.unwrap_or_else(|| PathBuf::from(".mdeg-cache"))));
    match action {
        CacheAction::Stat => {
            let s = cache.stat()?;
            println!("entries\t{}\nbytes\t{}", s.entries, s.bytes);
        }
        CacheAction::Gc => println!("removed\t{}", cache.gc()?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Check { input, format } => cmd_check(input, *format),
        Command::Classify(args) => cmd_classify(args),
        Command::NormalForm { input, format } => cmd_normal_form(input, *format),
        Command::Cache { action, cache_dir } => cmd_cache(action, cache_dir.clone()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
