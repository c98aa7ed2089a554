//! `agccz`: build AG CSS codes, synthesize addressable CCZ gate lists, schedule and verify them.

mod artifacts;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use agccz_core::css::params::{tower_calculator, ParamsRow, TowerReport, PARAMS_CSV_HEADER};
use agccz_core::css::COSET_BUDGET;
use agccz_core::error::CurveError;
use agccz_core::verify::{state_space_size, verify_dense, Verdict};
use agccz_core::{
    build_css, greedy_schedule, synthesize, validate_schedule, verify_logical_ccz,
    verify_state_oracle, Certificate, CssArtifact, CssCode, Curve, CurveData, CurveKind, CurveSpec,
    FieldElem, GateList, LogicalTarget, Pattern, Schedule, StateOptions, SynthOptions, TowerParams,
};
use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use artifacts::{ArtifactDir, CERTIFICATE, CSS, CURVE, GATES, REPORT, SCHEDULE, TOOL, VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "agccz",
    version,
    about = "AG CSS codes with addressable CCZ gates"
)]
struct Cli {
    /// Directory holding curve, code, gate, schedule and certificate artifacts.
    #[arg(
        long,
        global = true,
        env = "AGCCZ_ARTIFACT_DIR",
        default_value = "artifacts"
    )]
    artifact_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print exact parameter bounds as CSV (or JSON).
    Params(ParamsArgs),
    /// Build the curve and CSS code artifacts.
    Build(BuildArgs),
    /// Synthesize a CCZ gate list for one logical target.
    Synth(SynthArgs),
    /// Greedily layer the current gate list.
    Schedule,
    /// Certify gate lists against their logical targets.
    Verify(VerifyArgs),
    /// Summarize the artifact directory with hashes.
    Report,
}

#[derive(clap::Args, Debug)]
struct ParamsArgs {
    /// Values of r for the closed-form family bounds.
    #[arg(long, num_args = 1..)]
    r: Vec<u32>,
    /// JSON file with one tower parameter object or an array of them.
    #[arg(long)]
    tower_file: Option<PathBuf>,
    /// Also emit the Hermitian instance with this pole bound for every r.
    #[arg(long)]
    s: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Hermitian,
    Toy,
}

#[derive(clap::Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long, value_enum, default_value_t = Kind::Hermitian)]
    kind: Kind,
    /// Distinguished fiber index (default: the fiber of x = 0).
    #[arg(long)]
    fiber: Option<usize>,
    /// Toy backend data (places, fibers, basis, automorphisms, optional u).
    #[arg(long)]
    toy_file: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct SynthArgs {
    /// 111, 112, 123 or intra, two_block, three_block.
    #[arg(long)]
    pattern: Pattern,
    #[arg(long = "A")]
    a: usize,
    #[arg(long = "B")]
    b: usize,
    #[arg(long = "C")]
    c: usize,
    /// Field element in hex.
    #[arg(long, default_value = "1")]
    gamma: String,
    /// Keep gates whose coefficient is zero.
    #[arg(long)]
    keep_zero: bool,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Sweep every (A, B, C) and all three patterns instead of the current gate list.
    #[arg(long)]
    all_triples: bool,
    /// With --all-triples, use every nonzero gamma instead of {1, omega}.
    #[arg(long)]
    gamma_sweep: bool,
    /// Also run the state oracle.
    #[arg(long)]
    state: bool,
    /// Also run the dense state-vector check (intra pattern, small codes).
    #[arg(long)]
    dense: bool,
    /// Samples per gate list when the state oracle cannot enumerate.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Seed for every sampled check; required when sampling engages.
    #[arg(long)]
    seed: Option<u64>,
}

/// Failure classes, mapped to distinct exit codes.
#[derive(Debug)]
enum Failure {
    Config(anyhow::Error),
    Build(anyhow::Error),
    Verify(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Build(_) => 3,
            Failure::Verify(_) => 4,
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn config<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Config(e.into())
}

fn build_failure<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Build(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dir = ArtifactDir::new(&cli.artifact_dir);
    let result = match cli.command {
        Command::Params(args) => cmd_params(args),
        Command::Build(args) => cmd_build(&dir, args),
        Command::Synth(args) => cmd_synth(&dir, args),
        Command::Schedule => cmd_schedule(&dir),
        Command::Verify(args) => cmd_verify(&dir, args),
        Command::Report => cmd_report(&dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let e = match &f {
                Failure::Config(e) | Failure::Build(e) | Failure::Verify(e) => e,
            };
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TowerFile {
    One(TowerParams),
    Many(Vec<TowerParams>),
}

#[derive(Serialize)]
struct ParamsJson {
    family: Vec<agccz_core::css::params::FamilyBounds>,
    tower: Vec<TowerReport>,
    hermitian: Vec<agccz_core::DesignedBounds>,
}

fn cmd_params(args: ParamsArgs) -> Outcome {
    if args.r.is_empty() && args.tower_file.is_none() {
        return Err(config(anyhow!(
            "nothing to tabulate: pass --r and/or --tower-file"
        )));
    }
    if args.s.is_some() && args.r.is_empty() {
        return Err(config(anyhow!("--s needs at least one --r")));
    }
    let towers: Vec<TowerParams> = match &args.tower_file {
        None => Vec::new(),
        Some(path) => match artifacts::read_json::<TowerFile>(path).map_err(config)? {
            TowerFile::One(t) => vec![t],
            TowerFile::Many(ts) => ts,
        },
    };
    let reports = towers
        .iter()
        .map(tower_calculator)
        .collect::<Result<Vec<_>, _>>()
        .map_err(config)?;
    let mut specs = Vec::new();
    if let Some(s) = args.s {
        for &r in &args.r {
            let spec = CurveSpec::hermitian(r, s).map_err(config)?;
            spec.validate().map_err(config)?;
            specs.push(spec);
        }
    }

    match args.format {
        Format::Csv => {
            println!("{PARAMS_CSV_HEADER}");
            let rows = args
                .r
                .iter()
                .map(|&r| ParamsRow::family(r))
                .chain(reports.iter().map(ParamsRow::tower))
                .chain(specs.iter().map(ParamsRow::hermitian));
            for row in rows {
                println!("{}", row.to_csv());
            }
        }
        Format::Json => {
            let json = ParamsJson {
                family: args
                    .r
                    .iter()
                    .map(|&r| agccz_core::css::params::family_bounds(r))
                    .collect(),
                tower: reports,
                hermitian: specs
                    .iter()
                    .map(|spec| {
                        let g = spec.genus() as usize;
                        let m = (spec.s as usize + 1).saturating_sub(g);
                        agccz_core::css::params::quantum_params(
                            spec,
                            spec.num_places() as usize,
                            spec.r() as usize,
                            m,
                        )
                    })
                    .collect(),
            };
            print!("{}", artifacts::render(&json).map_err(config)?);
        }
    }
    Ok(())
}

/// Input problems are configuration errors; violated axioms are build failures.
fn classify_curve_error(e: CurveError) -> Failure {
    match e {
        CurveError::Axiom { .. } | CurveError::NotInBasis(_) | CurveError::NoTwistVector(_) => {
            build_failure(e)
        }
        _ => config(e),
    }
}

fn cmd_build(dir: &ArtifactDir, args: BuildArgs) -> Outcome {
    let curve = match args.kind {
        Kind::Hermitian => {
            if args.toy_file.is_some() {
                return Err(config(anyhow!("--toy-file needs --kind toy")));
            }
            let (Some(r), Some(s)) = (args.r, args.s) else {
                return Err(config(anyhow!("the hermitian backend needs --r and --s")));
            };
            Curve::hermitian(r, s, args.fiber).map_err(classify_curve_error)?
        }
        Kind::Toy => {
            let curve = match &args.toy_file {
                Some(path) => Curve::toy_from_file(path).map_err(classify_curve_error)?,
                None => Curve::toy_r2(),
            };
            let spec = curve.spec();
            if args.r.is_some_and(|r| r != spec.r()) || args.s.is_some_and(|s| s != spec.s) {
                return Err(config(anyhow!(
                    "toy data has r = {}, s = {}, which disagrees with the flags",
                    spec.r(),
                    spec.s
                )));
            }
            match args.fiber {
                None => curve,
                Some(f) => {
                    let mut data = curve.to_data();
                    if f >= data.fibers.len() {
                        return Err(config(CurveError::NoSuchFiber(f)));
                    }
                    data.distinguished_fiber = f;
                    Curve::from_data(data).map_err(classify_curve_error)?
                }
            }
        }
    };
    let report = curve.check_axioms();
    if let Some(c) = report.first_failure() {
        return Err(build_failure(anyhow!(
            "backend axiom `{}` failed: {}",
            c.name,
            c.detail
        )));
    }
    let css = build_css(&curve).map_err(build_failure)?;

    dir.write(CURVE, &curve.to_data()).map_err(config)?;
    dir.write(CSS, &css.to_artifact()).map_err(config)?;
    let p = &css.params;
    println!(
        "{}: [[{}, {}]] over GF({}), m = {}, d(C) >= {}, d(C_perp) >= {}, d >= {}",
        css.curve_ref,
        css.n(),
        css.k(),
        css.field.q(),
        css.m(),
        p.d_code,
        p.d_dual,
        p.d_lb
    );
    if css.degenerate {
        eprintln!(
            "warning: degenerate code: G0 is empty, so every stabilizer coset is a single word"
        );
    }
    Ok(())
}

fn load_css(dir: &ArtifactDir) -> Outcome<CssCode> {
    if !dir.exists(CSS) {
        return Err(config(anyhow!(
            "{} not found; run `build` first",
            dir.path(CSS).display()
        )));
    }
    let artifact: CssArtifact = dir.read(CSS).map_err(config)?;
    CssCode::from_artifact(artifact).map_err(build_failure)
}

fn load_gates(dir: &ArtifactDir) -> Outcome<GateList> {
    if !dir.exists(GATES) {
        return Err(config(anyhow!(
            "{} not found; run `synth` first",
            dir.path(GATES).display()
        )));
    }
    dir.read(GATES).map_err(config)
}

fn cmd_synth(dir: &ArtifactDir, args: SynthArgs) -> Outcome {
    let css = load_css(dir)?;
    let gamma: FieldElem = args.gamma.parse().map_err(config)?;
    if !css.field.contains(gamma) {
        return Err(config(anyhow!(
            "gamma {gamma} is not in GF({})",
            css.field.q()
        )));
    }
    let target = LogicalTarget {
        a: args.a,
        b: args.b,
        c: args.c,
        gamma,
    };
    let opts = SynthOptions {
        keep_zero: args.keep_zero,
    };
    let gl = synthesize(&css, args.pattern, target, opts).map_err(config)?;
    dir.write(GATES, &gl).map_err(config)?;
    println!(
        "pattern {} target ({}, {}, {}) gamma {}: {} gates",
        gl.pattern,
        target.a,
        target.b,
        target.c,
        gamma,
        gl.len()
    );
    Ok(())
}

fn cmd_schedule(dir: &ArtifactDir) -> Outcome {
    let gl = load_gates(dir)?;
    let schedule = greedy_schedule(&gl);
    let report = validate_schedule(&gl, &schedule);
    if !report.passed() {
        return Err(Failure::Verify(anyhow!(
            "schedule invalid: {}",
            report.detail.join("; ")
        )));
    }
    dir.write(SCHEDULE, &schedule).map_err(config)?;
    println!(
        "pattern {}: {} gates in depth {}",
        gl.pattern,
        gl.len(),
        schedule.depth
    );
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct VerifyRun {
    tool: String,
    version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    seed: Option<u64>,
    inputs: BTreeMap<String, String>,
    total: usize,
    passed: usize,
    failed: usize,
    certificates: Vec<Certificate>,
}

fn cmd_verify(dir: &ArtifactDir, args: VerifyArgs) -> Outcome {
    let css = load_css(dir)?;
    let lists: Vec<GateList> = if args.all_triples {
        let gammas: Vec<FieldElem> = if args.gamma_sweep {
            css.field.nonzero_elements().collect()
        } else {
            vec![FieldElem::ONE, css.field.omega()]
        };
        let k = css.k();
        let mut lists = Vec::new();
        for pattern in Pattern::ALL {
            for &gamma in &gammas {
                for a in 0..k {
                    for b in 0..k {
                        for c in 0..k {
                            let target = LogicalTarget { a, b, c, gamma };
                            lists.push(
                                synthesize(&css, pattern, target, SynthOptions::default())
                                    .map_err(config)?,
                            );
                        }
                    }
                }
            }
        }
        lists
    } else {
        vec![load_gates(dir)?]
    };

    if args.state {
        let samples_needed = lists
            .iter()
            .any(|gl| state_space_size(&css, gl.pattern).is_none_or(|n| n > COSET_BUDGET));
        if samples_needed && args.seed.is_none() {
            return Err(config(anyhow!(
                "the state oracle must sample for this code; pass --seed"
            )));
        }
    }
    let opts = StateOptions {
        samples: args.samples,
        seed: args.seed.unwrap_or(0),
        ..StateOptions::default()
    };

    let mut certificates = Vec::new();
    for gl in &lists {
        certificates.push(verify_logical_ccz(&css, gl).map_err(config)?);
        if args.state {
            certificates.push(verify_state_oracle(&css, gl, opts).map_err(config)?);
        }
        if args.dense && gl.pattern == Pattern::Intra {
            certificates.push(verify_dense(&css, gl).map_err(config)?);
        }
    }
    let failed: Vec<&Certificate> = certificates
        .iter()
        .filter(|c| c.result == Verdict::Fail)
        .collect();
    let inputs = if args.all_triples {
        dir.hashes(&[CSS])
    } else {
        dir.hashes(&[CSS, GATES])
    }
    .map_err(config)?;
    let run = VerifyRun {
        tool: TOOL.into(),
        version: VERSION.into(),
        seed: args.seed,
        inputs,
        total: certificates.len(),
        passed: certificates.len() - failed.len(),
        failed: failed.len(),
        certificates: certificates.clone(),
    };
    dir.write(CERTIFICATE, &run).map_err(config)?;
    println!(
        "{}: {} gate lists, {} certificates, {} passed, {} failed",
        css.curve_ref,
        lists.len(),
        run.total,
        run.passed,
        run.failed
    );
    match failed.first() {
        None => Ok(()),
        Some(c) => Err(Failure::Verify(anyhow!(
            "FAIL {:?} {} ({}, {}, {}): witness {}",
            c.method,
            c.pattern,
            c.target.a,
            c.target.b,
            c.target.c,
            serde_json::to_string(&c.witness).unwrap_or_default()
        ))),
    }
}

#[derive(Debug, Serialize)]
struct Report {
    tool: String,
    version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    artifacts: BTreeMap<String, String>,
    code: CodeSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    gates: Option<GateSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    schedule_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<VerifySummary>,
}

#[derive(Debug, Serialize)]
struct CodeSummary {
    curve_ref: String,
    kind: CurveKind,
    q: usize,
    n: usize,
    k: usize,
    m: usize,
    degenerate: bool,
    params: agccz_core::DesignedBounds,
}

#[derive(Debug, Serialize)]
struct GateSummary {
    pattern: Pattern,
    target: LogicalTarget,
    count: usize,
}

#[derive(Debug, Serialize)]
struct VerifySummary {
    total: usize,
    passed: usize,
    failed: usize,
}

fn cmd_report(dir: &ArtifactDir) -> Outcome {
    let css = load_css(dir)?;
    if dir.exists(CURVE) {
        let data: CurveData = dir.read(CURVE).map_err(config)?;
        Curve::from_data(data).map_err(classify_curve_error)?;
    }
    let gates = if dir.exists(GATES) {
        let gl = load_gates(dir)?;
        Some(GateSummary {
            pattern: gl.pattern,
            target: gl.target,
            count: gl.len(),
        })
    } else {
        None
    };
    let schedule_depth = if dir.exists(SCHEDULE) {
        Some(dir.read::<Schedule>(SCHEDULE).map_err(config)?.depth)
    } else {
        None
    };
    let run: Option<VerifyRun> = if dir.exists(CERTIFICATE) {
        Some(
            dir.read(CERTIFICATE)
                .context("certificate")
                .map_err(config)?,
        )
    } else {
        None
    };
    let report = Report {
        tool: TOOL.into(),
        version: VERSION.into(),
        seed: run.as_ref().and_then(|r| r.seed),
        artifacts: dir
            .hashes(&[CURVE, CSS, GATES, SCHEDULE, CERTIFICATE])
            .map_err(config)?,
        code: CodeSummary {
            curve_ref: css.curve_ref.clone(),
            kind: css.kind,
            q: css.field.q(),
            n: css.n(),
            k: css.k(),
            m: css.m(),
            degenerate: css.degenerate,
            params: css.params,
        },
        gates,
        schedule_depth,
        verification: run.as_ref().map(|r| VerifySummary {
            total: r.total,
            passed: r.passed,
            failed: r.failed,
        }),
    };
    dir.write(REPORT, &report).map_err(config)?;
    print!("{}", artifacts::render(&report).map_err(config)?);
    Ok(())
}
