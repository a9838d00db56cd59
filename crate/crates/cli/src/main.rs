use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use marginal_spectra::balanced::{
    balanced_density, balanced_density_auto, balanced_moments, balanced_support, mp_moments,
    round_trip_residual, s_relation_residual,
};
use marginal_spectra::crosscheck::{self, CrosscheckOptions};
use marginal_spectra::curve::SpectralCurve;
use marginal_spectra::elimination::{
    adjudicate, build_system, eliminate_to_eta, equal_up_to_constant, eta_to_sextic, golden,
};
use marginal_spectra::exactalg::{format_rational, int, parse_rational, to_f64, Rational};
use marginal_spectra::maps::Enumerator;
use marginal_spectra::montecarlo::{simulate_seeds, Dims, Histogram, RunRecord, RNG_NAME};
use marginal_spectra::petals::{extract_moments, solve_petal_system};
use marginal_spectra::report::{moment_table_json, Artifact};
use marginal_spectra::resolvent::{
    density, density_auto, moments_from_curve, moments_from_curve_at, DensityCurve, DensityOptions, Regime,
    DEFAULT_EPSILON,
};
use marginal_spectra::{Error, Exec};

#[derive(Parser, Debug)]
#[command(name = "marginals", version, about = "Moments, spectral curves and densities for products of tensor marginals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum CommandName {
    Moments,
    Enumerate,
    Density,
    Simulate,
    Eliminate,
    Balanced,
    Crosscheck,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moments from the spectral curve, symbolic or at (c, m)
    Moments(Opts),
    /// Enumerate planar maps for M_k and compare with the petal series
    Enumerate(Opts),
    /// Eigenvalue density of the marginal product at (c, m)
    Density(Opts),
    /// Monte Carlo moments and spectra of Gaussian tensors
    Simulate(Opts),
    /// Derive the sextic by elimination and compare with the reference
    Eliminate(Opts),
    /// Balanced regime: cubic-curve moments, series identities and density
    Balanced(Opts),
    /// Run the cross-check suite
    Crosscheck(Opts),
}

#[derive(Args, Debug, Clone, Serialize)]
struct Opts {
    /// Ratio N_D / N_A (rational, e.g. 1/2 or 0.5)
    #[arg(long, default_value = "1")]
    c: String,
    /// Inner dimension m; y = 1/m (rational, non-integer allowed except for simulation)
    #[arg(long, default_value = "2")]
    m: String,
    /// Highest moment order, or N_A for `simulate`
    #[arg(long)]
    n: Option<usize>,
    /// Map size for `enumerate`
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    /// Number of grid points (uniform part of the automatic grid)
    #[arg(long)]
    grid_points: Option<usize>,
    /// Distance above the real axis for Stieltjes inversion
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of Monte Carlo seeds
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Output file; `.csv` selects CSV for densities, anything else JSON
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep moments symbolic in (y, c)
    #[arg(long)]
    symbolic: bool,
    /// Comma-separated criterion numbers for `crosscheck` (default: all)
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u8>,
    /// Run everything on one thread
    #[arg(long)]
    sequential: bool,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    command: CommandName,
    #[serde(flatten)]
    opts: &'a Opts,
    /// Parsed parameters, echoed exactly.
    c_value: String,
    m_value: String,
    y_value: String,
}

/// Why a run did not succeed, mapped to the exit code.
enum Failure {
    Config(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse(_) | Error::DimensionMismatch { .. } | Error::TooLarge { .. } => {
                Failure::Config(e.to_string())
            }
            other => Failure::Check(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Check(format!("writing output: {e}"))
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx<'a> {
    name: CommandName,
    opts: &'a Opts,
    c: Rational,
    m: Rational,
    y: Rational,
}

impl Ctx<'_> {
    fn exec(&self) -> Exec {
        if self.opts.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }

    fn config(&self) -> RunConfig<'_> {
        RunConfig {
            command: self.name,
            opts: self.opts,
            c_value: format_rational(&self.c),
            m_value: format_rational(&self.m),
            y_value: format_rational(&self.y),
        }
    }

    fn write_json<T: Serialize>(&self, result: &T) -> Result<(), Failure> {
        if let Some(path) = &self.opts.out {
            let cfg = self.config();
            std::fs::write(path, Artifact::new(&cfg, result).to_json())?;
            println!("wrote {}", path.display());
        }
        Ok(())
    }

    fn write_density(&self, d: &DensityCurve) -> Result<(), Failure> {
        let Some(path) = &self.opts.out else {
            return Ok(());
        };
        if is_csv(path) {
            let cfg = serde_json::to_string(&self.config()).expect("config serialises");
            let text = format!(
                "# schema_version {}\n# config {cfg}\n{}",
                marginal_spectra::report::SCHEMA_VERSION,
                d.to_csv()
            );
            std::fs::write(path, text)?;
            println!("wrote {}", path.display());
            Ok(())
        } else {
            self.write_json(d)
        }
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn positive(text: &str, flag: &str) -> Result<Rational, Failure> {
    let v = parse_rational(text).map_err(|e| Failure::Config(format!("--{flag}: {e}")))?;
    if v <= int(0) {
        return Err(Failure::Config(format!("--{flag} must be positive, got {text}")));
    }
    Ok(v)
}

fn sextic() -> Result<SpectralCurve, Failure> {
    Ok(SpectralCurve::new(golden::sextic())?)
}

fn moments(ctx: &Ctx) -> Outcome {
    let n = ctx.opts.n.unwrap_or(3);
    let curve = sextic()?;
    let body = if ctx.opts.symbolic {
        let table = moments_from_curve(&curve, n)?;
        for (k, m) in table.entries().iter().enumerate().skip(1) {
            println!("M_{k} = {m}");
        }
        moment_table_json(&table, None)
    } else {
        let table = moments_from_curve_at(&curve, n, &ctx.y, &ctx.c)?;
        let vals: Vec<Rational> = table
            .entries()
            .iter()
            .map(|p| p.constant_value().expect("evaluated moments are constants"))
            .collect();
        for (k, v) in vals.iter().enumerate().skip(1) {
            println!("M_{k} = {} ({})", format_rational(v), to_f64(v));
        }
        moment_table_json(&table, Some(&vals))
    };
    ctx.write_json(&body)?;
    Ok(true)
}

fn enumerate(ctx: &Ctx) -> Outcome {
    let k = ctx.opts.k;
    if k == 0 {
        return Err(Failure::Config("--k must be positive".into()));
    }
    let e = Enumerator { exec: ctx.exec(), ..Enumerator::default() };
    let oracle = e.moment(k)?;
    let series = extract_moments(&solve_petal_system(2 * k)?, k)?;
    let same = oracle == series.entries()[k];
    println!("oracle  M_{k} = {oracle}");
    println!("series  M_{k} = {}", series.entries()[k]);
    println!("{}", if same { "MATCH" } else { "MISMATCH" });
    if ctx.opts.out.is_some() {
        let maps = e.planar_maps(k)?;
        ctx.write_json(&json!({"k": k, "moment": oracle.to_string(), "match": same, "maps": maps}))?;
    }
    Ok(same)
}

fn density_cmd(ctx: &Ctx) -> Outcome {
    let o = ctx.opts;
    let opts = DensityOptions { epsilon: o.epsilon, exec: ctx.exec(), ..DensityOptions::default() };
    let d = match (o.grid_min, o.grid_max) {
        (Some(lo), Some(hi)) => {
            let grid = uniform_grid(lo, hi, o.grid_points.unwrap_or(400))?;
            density(&sextic()?, to_f64(&ctx.y), to_f64(&ctx.c), &grid, &opts)?
        }
        (None, None) => density_auto(&sextic()?, &ctx.y, &ctx.c, o.grid_points.unwrap_or(1500), &opts)?,
        _ => return Err(Failure::Config("give both --grid-min and --grid-max, or neither".into())),
    };
    report_density(&d);
    ctx.write_density(&d)?;
    Ok(true)
}

fn report_density(d: &DensityCurve) {
    println!("points        {}", d.lambdas.len());
    println!("support       [{:.6}, {:.6}]", d.support_estimate.0, d.support_estimate.1);
    println!("mass          {:.6}", d.mass());
    println!("first moment  {:.6}", d.moment(1));
    println!("min density   {:.3e}", d.min_rho());
}

fn uniform_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if lo.is_nan() || hi.is_nan() || lo >= hi || points < 2 {
        return Err(Failure::Config("grid needs --grid-min < --grid-max and at least 2 points".into()));
    }
    Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect())
}

fn as_whole(r: &Rational, what: &str) -> Result<usize, Failure> {
    if !r.is_integer() {
        return Err(Failure::Config(format!("{what} must be a whole number, got {}", format_rational(r))));
    }
    r.to_integer()
        .try_into()
        .map_err(|_| Failure::Config(format!("{what} is out of range")))
}

#[derive(Serialize)]
struct SimulationResult<'a> {
    rng: &'static str,
    dims: Dims,
    mean_moments: Vec<f64>,
    theory_moments: Vec<String>,
    runs: &'a [RunRecord],
}

fn simulate(ctx: &Ctx) -> Outcome {
    let n_a = ctx.opts.n.unwrap_or(300);
    let m = as_whole(&ctx.m, "--m for simulation")?;
    let n_d = as_whole(&(&ctx.c * Rational::from_integer(n_a.into())), "c * N_A")?;
    let dims = Dims { n_a, dim_b: m, dim_c: m, n_d };
    if dims.is_empty() || ctx.opts.samples == 0 {
        return Err(Failure::Config("dimensions and --samples must be positive".into()));
    }
    let seeds: Vec<u64> = (ctx.opts.seed..ctx.opts.seed + ctx.opts.samples as u64).collect();
    let mut runs = simulate_seeds(dims, Regime::Unbalanced, &seeds, 3, true, ctx.exec())?;
    let top = runs
        .iter()
        .flat_map(|r| r.eigenvalues.iter().copied())
        .fold(0.0, f64::max);
    for r in &mut runs {
        r.eigenvalues_histogram = Some(Histogram::uniform(&r.eigenvalues, 0.0, top, 30));
    }
    let mean_moments: Vec<f64> = (0..3)
        .map(|n| runs.iter().map(|r| r.normalized_moments[n]).sum::<f64>() / runs.len() as f64)
        .collect();
    let theory = moments_from_curve_at(&sextic()?, 3, &ctx.y, &ctx.c)?;
    let theory: Vec<Rational> = theory.entries()[1..]
        .iter()
        .map(|p| p.constant_value().expect("evaluated moments are constants"))
        .collect();
    println!("dims N_A={} m={} N_D={}, {} seeds ({RNG_NAME})", n_a, m, n_d, seeds.len());
    for (k, (got, want)) in mean_moments.iter().zip(&theory).enumerate() {
        let want = to_f64(want);
        println!("M_{} empirical {got:.6}  theory {want:.6}  rel. dev. {:.3}%", k + 1, 100.0 * (got - want).abs() / want);
    }
    let result = SimulationResult {
        rng: RNG_NAME,
        dims,
        mean_moments,
        theory_moments: theory.iter().map(format_rational).collect(),
        runs: &runs,
    };
    ctx.write_json(&result)?;
    if let Some(path) = &ctx.opts.out {
        let csv = path.with_extension("eigenvalues.csv");
        let mut text = String::from("seed,eigenvalue\n");
        for r in &runs {
            for l in &r.eigenvalues {
                text.push_str(&format!("{},{l}\n", r.seed));
            }
        }
        std::fs::write(&csv, text)?;
        println!("wrote {}", csv.display());
    }
    Ok(true)
}

fn eliminate(ctx: &Ctx) -> Outcome {
    let state = solve_petal_system(12)?;
    let t = adjudicate(&state)?;
    println!("generators: {t:?} transcription");
    let elim = eliminate_to_eta(&build_system(t), &state)?;
    let eta_ok = equal_up_to_constant(&elim.eta, &golden::eta());
    println!("eliminant: {} terms, {}", elim.eta.num_terms(), if eta_ok { "equal to reference up to a constant" } else { "DIFFERS from reference" });
    let curve = eta_to_sextic(&elim.eta)?;
    let diff = golden::diff(curve.poly(), &golden::sextic());
    for line in &diff {
        println!("  {line}");
    }
    let ok = eta_ok && diff.is_empty();
    println!("{}", if ok { "MATCH reference sextic" } else { "MISMATCH reference sextic" });
    ctx.write_json(&json!({
        "eta": elim.eta.to_string(),
        "sextic": curve.poly().to_string(),
        "stripped_factors": elim.stripped.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "match": ok,
    }))?;
    Ok(ok)
}

fn balanced(ctx: &Ctx) -> Outcome {
    let n = ctx.opts.n.unwrap_or(6);
    let table = balanced_moments(n, &ctx.c)?;
    let vals: Vec<Rational> = table
        .entries()
        .iter()
        .map(|p| p.constant_value().expect("evaluated moments are constants"))
        .collect();
    for (k, v) in vals.iter().enumerate().skip(1) {
        println!("M_{k} = {}", format_rational(v));
    }
    let mp = mp_moments(n)?.evaluate(&int(0), &ctx.c);
    println!("marginal law moments: {}", mp.iter().skip(1).map(format_rational).collect::<Vec<_>>().join(", "));
    let identity = s_relation_residual(n)?.is_zero();
    let round_trip = round_trip_residual(n, &ctx.c)?.is_zero();
    println!("moment-function identity through order {n}: {}", if identity { "holds" } else { "FAILS" });
    println!("inverse round trip through order {n}: {}", if round_trip { "holds" } else { "FAILS" });
    let support = balanced_support(&ctx.c)?;
    println!("support edges {:?}", support.edges);
    let opts = DensityOptions { epsilon: ctx.opts.epsilon, exec: ctx.exec(), ..DensityOptions::default() };
    let want_density = ctx.opts.out.is_some() || ctx.opts.grid_min.is_some();
    if want_density {
        let d = match (ctx.opts.grid_min, ctx.opts.grid_max) {
            (Some(lo), Some(hi)) => {
                let grid = uniform_grid(lo, hi, ctx.opts.grid_points.unwrap_or(400))?;
                balanced_density(to_f64(&ctx.c), &grid, &opts)?
            }
            (None, None) => balanced_density_auto(&ctx.c, ctx.opts.grid_points.unwrap_or(1500), &opts)?,
            _ => return Err(Failure::Config("give both --grid-min and --grid-max, or neither".into())),
        };
        report_density(&d);
        if ctx.opts.out.as_deref().is_some_and(is_csv) {
            ctx.write_density(&d)?;
        } else {
            ctx.write_json(&json!({
                "moments": vals.iter().map(format_rational).collect::<Vec<_>>(),
                "support": support,
                "density": d,
            }))?;
        }
    }
    Ok(identity && round_trip)
}

fn crosscheck_cmd(ctx: &Ctx) -> Outcome {
    let opts = CrosscheckOptions {
        exec: ctx.exec(),
        seeds: ctx.opts.samples,
        seed: ctx.opts.seed,
        ..CrosscheckOptions::default()
    };
    let ids: Vec<u8> = if ctx.opts.criteria.is_empty() {
        (1..=10).collect()
    } else {
        ctx.opts.criteria.clone()
    };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=10).contains(&i)) {
        return Err(Failure::Config(format!("no criterion {bad}")));
    }
    let mut results = Vec::new();
    for id in ids {
        let r = crosscheck::run_criterion(id, &opts);
        println!("[{}] criterion {:>2}: {} ({:.1}s)", if r.passed { "PASS" } else { "FAIL" }, r.id, r.title, r.seconds);
        for d in &r.details {
            println!("      {d}");
        }
        results.push(r);
    }
    let passed = results.iter().all(|r| r.passed);
    ctx.write_json(&crosscheck::CrosscheckReport { passed, results })?;
    Ok(passed)
}

fn run(name: CommandName, opts: &Opts) -> Outcome {
    let c = positive(&opts.c, "c")?;
    let m = positive(&opts.m, "m")?;
    if opts.epsilon.is_nan() || opts.epsilon <= 0.0 {
        return Err(Failure::Config("--epsilon must be positive".into()));
    }
    let y = m.recip();
    let ctx = Ctx { name, opts, c, m, y };
    match name {
        CommandName::Moments => moments(&ctx),
        CommandName::Enumerate => enumerate(&ctx),
        CommandName::Density => density_cmd(&ctx),
        CommandName::Simulate => simulate(&ctx),
        CommandName::Eliminate => eliminate(&ctx),
        CommandName::Balanced => balanced(&ctx),
        CommandName::Crosscheck => crosscheck_cmd(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match &cli.command {
        Command::Moments(o) => (CommandName::Moments, o),
        Command::Enumerate(o) => (CommandName::Enumerate, o),
        Command::Density(o) => (CommandName::Density, o),
        Command::Simulate(o) => (CommandName::Simulate, o),
        Command::Eliminate(o) => (CommandName::Eliminate, o),
        Command::Balanced(o) => (CommandName::Balanced, o),
        Command::Crosscheck(o) => (CommandName::Crosscheck, o),
    };
    match run(name, opts) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("invalid configuration: {msg}");
            ExitCode::from(2)
        }
    }
}
