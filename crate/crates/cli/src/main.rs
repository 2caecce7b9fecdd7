use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oclearn::harness::{
    emit_report, run_experiment, AlgorithmConfig, BenchConfig, ExperimentConfig, InstanceSource, RunResult, RunStatus,
};
use oclearn::oracles::run_suite;
use oclearn::problems::{
    draw_sample, generate, read_instance, verify_assumptions, write_instance, write_sample, GeneratorSpec, Layout,
    RegionShape,
};

#[derive(Parser)]
#[command(name = "oclearn", version, about = "Label-efficient multiclass learning under linear output codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a problem instance file.
    Gen(GenArgs),
    /// Draw a labeled sample from an instance as CSV.
    Sample(SampleArgs),
    /// Run one experiment against an instance file.
    Run(RunArgs),
    /// Run every experiment of a config file.
    Bench(BenchArgs),
    /// Run the oracle suite, or check one instance's assumptions.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Ecoc,
    EcocManifold,
    OneVsAll,
    BoundaryFeatures,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Ball,
    Cube,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    generator: Generator,
    /// Ambient dimension.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Number of classes (ecoc, ecoc-manifold, one-vs-all).
    #[arg(long, default_value_t = 3)]
    classes: usize,
    #[arg(long, default_value_t = 0.3)]
    margin: f64,
    #[arg(long, value_enum, default_value = "ball")]
    shape: Shape,
    /// Intrinsic dimension of ecoc-manifold patches.
    #[arg(long, default_value_t = 1)]
    intrinsic: usize,
    #[arg(long, default_value_t = 0.5)]
    b_min: f64,
    /// staircase2d, grid2d, axis_grid_d or single_cell.
    #[arg(long, default_value = "staircase2d")]
    layout: Layout,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Sl,
    Hier,
    Sphere,
    Planes,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eps: Option<f64>,
    /// Connection radius (sl, sphere).
    #[arg(long)]
    rc: Option<f64>,
    /// Label count (hier).
    #[arg(long)]
    t: Option<usize>,
    /// Half-ball radius (planes).
    #[arg(long)]
    r: Option<f64>,
    /// Activity or detection threshold (sphere, planes).
    #[arg(long)]
    tau: Option<f64>,
    /// Half-ball approximation level (planes).
    #[arg(long)]
    alpha: Option<f64>,
    /// Cells to label (planes).
    #[arg(long)]
    cells: Option<usize>,
    /// Label noise rate.
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Majority-vote queries per group; enables the agnostic wrapper.
    #[arg(long)]
    tq: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    #[arg(long, default_value_t = 10_000)]
    heldout: usize,
    #[arg(long)]
    target_error: Option<f64>,
    #[arg(long)]
    label_cap: Option<usize>,
    /// Output directory for results.csv, timings.csv, summary.txt and config.toml.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Monte Carlo draws per estimate.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check this instance's assumptions instead of running the suite.
    #[arg(long)]
    instance: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Sample(a) => sample(a),
        Command::Run(a) => run(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn gen(a: GenArgs) -> oclearn::Result<bool> {
    let spec = match a.generator {
        Generator::Ecoc => GeneratorSpec::Ecoc {
            d: a.d,
            components: a.classes,
            margin: a.margin,
            shape: match a.shape {
                Shape::Ball => RegionShape::Ball,
                Shape::Cube => RegionShape::Cube,
            },
        },
        Generator::EcocManifold => GeneratorSpec::EcocManifold {
            ambient: a.d,
            intrinsic: a.intrinsic,
            components: a.classes,
            margin: a.margin,
        },
        Generator::OneVsAll => GeneratorSpec::OneVsAll { d: a.d, classes: a.classes, b_min: a.b_min },
        Generator::BoundaryFeatures => GeneratorSpec::BoundaryFeatures { d: a.d, layout: a.layout, scale: a.scale },
    };
    let instance = generate(&spec, a.seed)?;
    write_instance(&a.out, &instance)?;
    println!("wrote {} ({} classes, d={})", a.out.display(), instance.num_classes(), instance.dim);
    Ok(true)
}

fn sample(a: SampleArgs) -> oclearn::Result<bool> {
    let instance = read_instance(&a.instance)?;
    let s = draw_sample(&instance, a.n, a.seed)?;
    let labels = s.points.rows().map(|x| instance.label(x)).collect::<oclearn::Result<Vec<_>>>()?;
    write_sample(&a.out, &s.points, Some(&labels))?;
    println!("wrote {} points to {}", a.n, a.out.display());
    Ok(true)
}

fn need<T>(v: Option<T>, flag: &str, algo: &str) -> oclearn::Result<T> {
    v.ok_or_else(|| oclearn::Error::InvalidInput(format!("--{flag} is required for --algo {algo}")))
}

fn run(a: RunArgs) -> oclearn::Result<bool> {
    let algorithm = match a.algo {
        Algo::Sl => AlgorithmConfig::Sl { r_c: need(a.rc, "rc", "sl")?, epsilon: need(a.eps, "eps", "sl")? },
        Algo::Hier => AlgorithmConfig::Hier { t: need(a.t, "t", "hier")? },
        Algo::Sphere => AlgorithmConfig::Sphere { epsilon: need(a.eps, "eps", "sphere")?, r_c: a.rc, tau: a.tau },
        Algo::Planes => AlgorithmConfig::Planes {
            r: a.r,
            tau: a.tau,
            alpha: a.alpha,
            epsilon: a.eps.unwrap_or(0.1),
            cells: a.cells,
            directions: 64,
            refine_steps: 100,
        },
    };
    let config = ExperimentConfig {
        name: String::new(),
        instance: InstanceSource::File { path: a.instance },
        n: a.n,
        algorithm,
        eta: a.eta,
        t_per_group: a.tq,
        heldout_size: a.heldout,
        repetitions: a.repetitions,
        seed_base: a.seed,
        target_error: a.target_error,
        label_cap: a.label_cap,
    };
    config.validate()?;
    let results = run_experiment(&config)?;
    std::fs::create_dir_all(&a.out)?;
    std::fs::write(a.out.join("config.toml"), config.to_toml()?)?;
    finish(&results, &a.out)
}

fn bench(a: BenchArgs) -> oclearn::Result<bool> {
    let bench = BenchConfig::load(&a.config)?;
    let mut results = Vec::new();
    for e in &bench.experiment {
        results.extend(run_experiment(e)?);
    }
    finish(&results, &a.out)
}

fn finish(results: &[RunResult], out: &std::path::Path) -> oclearn::Result<bool> {
    let files = emit_report(results, out)?;
    print!("{}", std::fs::read_to_string(&files.summary)?);
    for r in results.iter().filter(|r| r.status == RunStatus::Failed) {
        eprintln!("repetition {} failed: {}", r.repetition, r.message);
    }
    Ok(results.iter().all(|r| r.status == RunStatus::Ok && r.success))
}

fn verify(a: VerifyArgs) -> oclearn::Result<bool> {
    if let Some(path) = a.instance {
        let instance = read_instance(&path)?;
        let report = verify_assumptions(&instance, a.samples, a.seed)?;
        print!("{report}");
        return Ok(report.all_passed());
    }
    let report = run_suite(a.samples, a.seed)?;
    print!("{report}");
    println!("{} checks, {} failed", report.lines.len(), report.failures());
    Ok(report.all_passed())
}
