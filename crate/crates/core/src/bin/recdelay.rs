//! `recdelay`: batch entry point for ingesting follow streams, measuring
//! reciprocation delays, and training or benchmarking delay predictors.
//!
//! Exit status is 0 on success, 1 on user error and 2 on internal failure.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use reciprocity_delay::analytics::{
    self, delay::bucket_mean_table, delay::pk_table, reciprocity::growth_table,
    reciprocity::reciprocity_rate_table, DegreeKind, DegreeThresholds, NeighborKind, Role,
};
use reciprocity_delay::baselines::{fit_lasso, fit_ridge};
use reciprocity_delay::calendar::{Weekday, DEFAULT_ANCHOR};
use reciprocity_delay::dprr::{self, DprrConfig, DEFAULT_GROUP_CAP};
use reciprocity_delay::eval::{self, BenchmarkConfig, Method, DEFAULT_BETA_GRID, REGULARIZATION_GRID};
use reciprocity_delay::features::{self, FeatureConfig, FillPolicy, FEATURE_NAMES, STANDARDIZER_FORMAT};
use reciprocity_delay::persist::{self, SavedModel, MODEL_FORMAT};
use reciprocity_delay::synth::{self, SynthConfig};
use reciprocity_delay::table::{Cell, Table};
use reciprocity_delay::{DynamicDigraph, Error};

const OUT_DIR_ENV: &str = "RECDELAY_OUT_DIR";

fn version() -> String {
    format!(
        "{}\nmodel format: {MODEL_FORMAT}\nstandardizer format: {STANDARDIZER_FORMAT}\nedge list: src<TAB>dst<TAB>day",
        env!("CARGO_PKG_VERSION")
    )
}

#[derive(Debug, Parser)]
#[command(name = "recdelay", about = "Reciprocation delay analysis and prediction")]
struct Cli {
    /// Worker threads (default: all cores). `--threads 1` gives reference runs.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate an edge list; prints `metric,value` rows.
    IngestCheck(IngestArgs),
    /// Write one CSV per analysis: growth.csv, reciprocity_rate.csv,
    /// densification.csv, delay_histogram.csv, join_time.csv, weekly.csv,
    /// pk.csv, degrees.csv, common_neighbors.csv.
    Analyze(AnalyzeArgs),
    /// Write the raw feature matrix `u,v,t1,group,f1..f14,y` to features.csv.
    Features(FeaturesArgs),
    /// Fit a predictor on a features CSV and save it as JSON.
    Train(TrainArgs),
    /// Score a features CSV with a saved model: `u,v,t1,prediction[,actual]`.
    Predict(PredictArgs),
    /// Benchmark predictors over repeated random splits; writes trials.csv
    /// (ratio,trial,method,mae,rmse,parameter,status) and summary.csv
    /// (ratio,method,mean_mae,mean_rmse,trials_ok,t_mae,p_mae,t_rmse,p_rmse).
    Evaluate(EvaluateArgs),
    /// Fit the network-lasso model once per beta on one split; writes
    /// beta_sweep.csv (beta,mae,rmse,iterations,converged).
    SweepBeta(SweepArgs),
    /// Generate a synthetic follow stream: edges.tsv and truth.csv
    /// (u,v,t1,t2,planted_delay,offset_v).
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct OutArg {
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Edge list, one `src<TAB>dst<TAB>day` record per line.
    #[arg(long)]
    edges: PathBuf,
}

#[derive(Debug, Args)]
struct FeatureArgs {
    /// Window of the previous-k delay feature.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Relations with a longer delay (days) are dropped.
    #[arg(long, default_value_t = 50)]
    cutoff: u32,
    /// Weekday of day 0, as a name or 0..=6 with Monday = 0.
    #[arg(long, default_value_t = DEFAULT_ANCHOR)]
    anchor_weekday: Weekday,
}

impl FeatureArgs {
    fn config(&self, standardize: bool) -> FeatureConfig {
        FeatureConfig {
            k: self.k,
            anchor: self.anchor_weekday,
            delay_cutoff: self.cutoff,
            standardize,
            fill: FillPolicy::TrainMean,
        }
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    out: OutArg,
    /// Delay cutoff in days.
    #[arg(long, default_value_t = 50)]
    cutoff: u32,
    #[arg(long, default_value_t = DEFAULT_ANCHOR)]
    anchor_weekday: Weekday,
    /// Width in days of the join-time buckets.
    #[arg(long, default_value_t = 30)]
    bucket_width: u32,
    /// Largest k of the sequential previous-k error table.
    #[arg(long, default_value_t = 8)]
    k_max: usize,
    /// Degrees below this are "low".
    #[arg(long, default_value_t = 10)]
    low_degree: usize,
    /// Degrees above this are "high".
    #[arg(long, default_value_t = 2000)]
    high_degree: usize,
}

#[derive(Debug, Args)]
struct FeaturesArgs {
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    out: OutArg,
    #[command(flatten)]
    features: FeatureArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum TrainMethod {
    Rg,
    Ls,
    Pd,
    Dprr,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Ridge weight on the global parameter (also the `rg` weight).
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Network-lasso weight.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// ADMM penalty.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 500)]
    max_iterations: usize,
    /// Largest target group used whole when pairing rows.
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModelArgs {
    fn dprr(&self) -> DprrConfig {
        DprrConfig {
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            max_iterations: self.max_iterations,
            group_cap: self.group_cap,
            seed: self.seed,
            ..DprrConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Features CSV written by `features`.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = TrainMethod::Dprr)]
    method: TrainMethod,
    /// Model output path.
    #[arg(long)]
    model: PathBuf,
    /// L1 weight of `ls`.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Fit on raw features instead of z-scored ones.
    #[arg(long)]
    no_standardize: bool,
    #[command(flatten)]
    params: ModelArgs,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Predictions CSV path.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct SplitArgs {
    /// Training rows per split.
    #[arg(long, default_value_t = 2000)]
    train_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    out: OutArg,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    split: SplitArgs,
    /// Test sizes as percentages of the train size.
    #[arg(long, value_delimiter = ',', default_values_t = [50u32, 70, 90])]
    test_ratio: Vec<u32>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Subset of p1,pk,rg,ls,pd,dprr.
    #[arg(long, value_delimiter = ',', default_values_t = Method::ALL)]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 500)]
    max_iterations: usize,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
    /// Cross-validation folds for the ridge and lasso weights.
    #[arg(long, default_value_t = 5)]
    cv_folds: usize,
    /// Ridge weight grid.
    #[arg(long, value_delimiter = ',', default_values_t = REGULARIZATION_GRID)]
    ridge_grid: Vec<f64>,
    /// Lasso weight grid.
    #[arg(long, value_delimiter = ',', default_values_t = REGULARIZATION_GRID)]
    lasso_grid: Vec<f64>,
    /// Largest k tried by the previous-k predictor.
    #[arg(long, default_value_t = 8)]
    pk_max: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    out: OutArg,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    split: SplitArgs,
    /// Test size as a percentage of the train size.
    #[arg(long, default_value_t = 50)]
    test_ratio: u32,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_BETA_GRID)]
    betas: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 500)]
    max_iterations: usize,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    out: OutArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    users: Option<usize>,
    /// Days simulated.
    #[arg(long)]
    horizon: Option<u32>,
    /// Ratio of consecutive days' arrival rates.
    #[arg(long)]
    growth: Option<f64>,
    #[arg(long)]
    initial_follows: Option<usize>,
    /// Expected follows per existing user per day.
    #[arg(long)]
    activity: Option<f64>,
    /// Probability of a preferential rather than uniform follow target.
    #[arg(long)]
    attachment: Option<f64>,
    #[arg(long)]
    reciprocation: Option<f64>,
    /// Planted coefficients, 14 comma-separated values with the bias last.
    #[arg(long, value_delimiter = ',')]
    w_star: Option<Vec<f64>>,
    /// Spread of the per-target delay offsets.
    #[arg(long)]
    sigma_u: Option<f64>,
    #[arg(long)]
    sigma_eps: Option<f64>,
    /// Follow-backs due after this day are dropped.
    #[arg(long)]
    censor_day: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    anchor_weekday: Option<Weekday>,
}

impl SynthArgs {
    fn config(&self) -> SynthConfig {
        let d = SynthConfig::default();
        SynthConfig {
            users: self.users.unwrap_or(d.users),
            horizon: self.horizon.unwrap_or(d.horizon),
            growth: self.growth.unwrap_or(d.growth),
            initial_follows: self.initial_follows.unwrap_or(d.initial_follows),
            activity: self.activity.unwrap_or(d.activity),
            attachment: self.attachment.unwrap_or(d.attachment),
            reciprocation: self.reciprocation.unwrap_or(d.reciprocation),
            w_star: self.w_star.clone().unwrap_or(d.w_star),
            sigma_u: self.sigma_u.unwrap_or(d.sigma_u),
            sigma_eps: self.sigma_eps.unwrap_or(d.sigma_eps),
            censor_day: self.censor_day.unwrap_or(d.censor_day),
            k: self.k.unwrap_or(d.k),
            fill: d.fill,
            anchor: self.anchor_weekday.unwrap_or(d.anchor),
            seed: self.seed,
        }
    }
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open `{}`", path.display()))?;
    Ok(BufReader::new(f))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create `{}`", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("cannot write `{}`", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_table(dir: &Path, name: &str, table: &Table) -> anyhow::Result<()> {
    let path = dir.join(name);
    let mut w = create(&path)?;
    table.write_csv(&mut w)?;
    w.flush()?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn load_graph(path: &Path) -> anyhow::Result<DynamicDigraph> {
    DynamicDigraph::from_reader(open(path)?).with_context(|| format!("invalid edge list `{}`", path.display()))
}

/// Raw (unstandardized) dataset of every follow-back in the stream.
fn load_pool(path: &Path, f: &FeatureArgs) -> anyhow::Result<features::Dataset> {
    let g = load_graph(path)?;
    let relations = analytics::extract_reciprocal_relations(&g);
    if relations.is_empty() {
        bail!(Error::Dataset(format!("`{}` contains no reciprocal relations", path.display())));
    }
    Ok(features::build_dataset(&g, &relations, &f.config(false))?)
}

fn ingest_check(a: &IngestArgs) -> anyhow::Result<()> {
    let records = read_edges(&a.edges)?;
    let g = DynamicDigraph::from_edges(&records)?;
    let relations = analytics::extract_reciprocal_relations(&g);
    let mut t = Table::new(&["metric", "value"]);
    let mut row = |k: &str, v: Cell| t.push(vec![k.into(), v]);
    row("records", records.len().into());
    row("nodes", g.node_count().into());
    row("edges", g.edge_count().into());
    row("duplicates_dropped", (records.len() - g.edge_count()).into());
    row("first_day", records.iter().map(|e| e.day).min().map_or(Cell::Missing, Cell::from));
    row("last_day", g.max_day().map_or(Cell::Missing, Cell::from));
    row("reciprocal_relations", relations.len().into());
    print!("{}", t.to_csv());
    Ok(())
}

fn read_edges(path: &Path) -> anyhow::Result<Vec<reciprocity_delay::TemporalEdge>> {
    reciprocity_delay::temporal_graph::read_edge_list(open(path)?)
        .with_context(|| format!("invalid edge list `{}`", path.display()))
}

fn analyze(a: &AnalyzeArgs) -> anyhow::Result<()> {
    let g = load_graph(&a.edges)?;
    let dir = &a.out.out;
    let relations = analytics::extract_reciprocal_relations(&g);
    let kept = analytics::within_cutoff(&relations, a.cutoff);

    let growth = analytics::growth_series(&g);
    write_table(dir, "growth.csv", &growth_table(&growth))?;
    write_table(dir, "reciprocity_rate.csv", &reciprocity_rate_table(&analytics::reciprocity_rate_series(&g)))?;

    let dens = match g.max_day() {
        Some(t_max) => analytics::densification_fit(&g, 0..=t_max),
        None => Err(Error::Empty("edge list")),
    };
    let dens_table = match dens {
        Ok(fit) => fit.to_table(),
        Err(e) => {
            log::warn!("densification fit skipped: {e}");
            Table::new(&["slope", "intercept", "t_min", "t_max", "points", "residual_rms"])
        }
    };
    write_table(dir, "densification.csv", &dens_table)?;

    write_table(dir, "delay_histogram.csv", &analytics::delay_histogram(&relations, a.cutoff).to_table())?;

    let mut join = Table::new(&["role", "bucket_start", "mean_delay", "count"]);
    for role in [Role::Source, Role::Target] {
        let t = bucket_mean_table(&analytics::avg_delay_by_join_time(&kept, &g, role, a.bucket_width));
        for r in t.rows {
            join.push(std::iter::once(Cell::from(role.label())).chain(r).collect());
        }
    }
    write_table(dir, "join_time.csv", &join)?;

    write_table(dir, "weekly.csv", &analytics::weekly_patterns(&kept, a.anchor_weekday).to_table())?;

    let ks: Vec<usize> = (1..=a.k_max.max(1)).collect();
    write_table(dir, "pk.csv", &pk_table(&analytics::sequential_pk_error(&relations, &ks, a.cutoff)))?;

    let th = DegreeThresholds { low: a.low_degree, high: a.high_degree };
    let mut degrees = Table::new(&["degree", "role", "bucket", "mean_delay", "count"]);
    for kind in [DegreeKind::In, DegreeKind::Out] {
        for role in [Role::Source, Role::Target] {
            let t = analytics::structure::degree_bucket_table(&analytics::avg_delay_by_degree_bucket(&kept, &g, kind, role, th));
            for r in t.rows {
                degrees.push([Cell::from(kind.label()), Cell::from(role.label())].into_iter().chain(r).collect());
            }
        }
    }
    write_table(dir, "degrees.csv", &degrees)?;

    let mut common = Table::new(&["neighbors", "range", "mean_delay", "count"]);
    for kind in [NeighborKind::Followees, NeighborKind::Followers] {
        let t = analytics::structure::common_neighbor_table(&analytics::avg_delay_by_common_neighbors(&kept, &g, kind));
        for r in t.rows {
            common.push(std::iter::once(Cell::from(kind.label())).chain(r).collect());
        }
    }
    write_table(dir, "common_neighbors.csv", &common)?;
    Ok(())
}

fn features_cmd(a: &FeaturesArgs) -> anyhow::Result<()> {
    let ds = load_pool(&a.edges, &a.features)?;
    let path = a.out.out.join("features.csv");
    let mut w = create(&path)?;
    features::write_dataset_csv(&mut w, &ds)?;
    w.flush()?;
    eprintln!("wrote {} ({} rows, columns f1..f{}: {})", path.display(), ds.len(), ds.dim(), FEATURE_NAMES.join(" "));
    Ok(())
}

fn read_features(path: &Path) -> anyhow::Result<features::Dataset> {
    features::read_dataset_csv(open(path)?).with_context(|| format!("invalid features file `{}`", path.display()))
}

fn train(a: &TrainArgs) -> anyhow::Result<()> {
    let mut ds = read_features(&a.data)?;
    if ds.y.is_none() {
        bail!(Error::Dataset("training data needs a `y` column".into()));
    }
    if !a.no_standardize {
        ds.standardize()?;
    }
    let cfg = a.params.dprr();
    let model: SavedModel = match a.method {
        TrainMethod::Rg => fit_ridge(&ds, a.params.alpha)?.into(),
        TrainMethod::Ls => fit_lasso(&ds, a.lambda)?.into(),
        TrainMethod::Pd | TrainMethod::Dprr => {
            let groups = dprr::groups_for(&ds, &cfg);
            let m = if a.method == TrainMethod::Dprr {
                dprr::fit(&ds, &groups, &cfg)?
            } else {
                dprr::fit_personal_only(&ds, &groups, &cfg)?
            };
            eprintln!(
                "objective {:.6} after {} iterations (converged: {})",
                m.diagnostics.objective, m.diagnostics.iterations, m.diagnostics.converged
            );
            m.into()
        }
    };
    let mut w = create(&a.model)?;
    persist::write_model(&mut w, &model)?;
    w.flush()?;
    eprintln!("wrote {} ({})", a.model.display(), model.kind_name());
    Ok(())
}

fn predict(a: &PredictArgs) -> anyhow::Result<()> {
    let model = persist::read_model(open(&a.model)?).with_context(|| format!("invalid model `{}`", a.model.display()))?;
    let mut ds = read_features(&a.data)?;
    if ds.dim() != model.dim() {
        bail!(Error::Format(format!(
            "schema mismatch: model expects {} feature columns, data has {}",
            model.dim(),
            ds.dim()
        )));
    }
    if let Some(s) = model.standardizer() {
        ds.apply_standardizer(s)?;
    }
    let preds = model.predict_dataset(&ds)?;
    let mut header = vec!["u", "v", "t1", "prediction"];
    if ds.y.is_some() {
        header.push("actual");
    }
    let mut t = Table::new(&header);
    for (i, p) in preds.iter().enumerate() {
        let m = &ds.meta[i];
        let mut row = vec![Cell::from(m.u.as_str()), Cell::from(m.v.as_str()), m.t1.into(), (*p).into()];
        if let Some(y) = &ds.y {
            row.push(y[i].into());
        }
        t.push(row);
    }
    let mut w = create(&a.output)?;
    t.write_csv(&mut w)?;
    w.flush()?;
    eprintln!("wrote {} ({} rows)", a.output.display(), t.len());
    Ok(())
}

fn evaluate(a: &EvaluateArgs) -> anyhow::Result<()> {
    let pool = load_pool(&a.edges, &a.features)?;
    let cfg = BenchmarkConfig {
        methods: a.methods.clone(),
        train_size: a.split.train_size,
        ratios: a.test_ratio.clone(),
        trials: a.trials,
        seed: a.split.seed,
        dprr: DprrConfig {
            alpha: a.alpha,
            beta: a.beta,
            rho: a.rho,
            max_iterations: a.max_iterations,
            group_cap: a.group_cap,
            seed: a.split.seed,
            ..DprrConfig::default()
        },
        cv_folds: a.cv_folds,
        ridge_grid: a.ridge_grid.clone(),
        lasso_grid: a.lasso_grid.clone(),
        pk_max: a.pk_max,
        standardize: true,
    };
    eprintln!("benchmark config: {}", serde_json::to_string(&cfg)?);
    eprintln!("pool: {} relations, {} targets", pool.len(), pool.groups().iter().max().map_or(0, |g| g + 1));
    let report = eval::run_benchmark(&pool, &cfg)?;
    write_table(&a.out.out, "trials.csv", &report.trials_table())?;
    let summary = report.summary_table();
    write_table(&a.out.out, "summary.csv", &summary)?;
    print!("{}", summary.to_csv());
    Ok(())
}

fn sweep(a: &SweepArgs) -> anyhow::Result<()> {
    let pool = load_pool(&a.edges, &a.features)?;
    let cfg = DprrConfig {
        alpha: a.alpha,
        rho: a.rho,
        max_iterations: a.max_iterations,
        group_cap: a.group_cap,
        seed: a.split.seed,
        ..DprrConfig::default()
    };
    let rows = eval::beta_sweep_split(&pool, a.split.train_size, a.test_ratio, a.split.seed, &cfg, &a.betas)?;
    let t = eval::sweep::sweep_table(&rows);
    write_table(&a.out.out, "beta_sweep.csv", &t)?;
    print!("{}", t.to_csv());
    Ok(())
}

fn synth_cmd(a: &SynthArgs) -> anyhow::Result<()> {
    let cfg = a.config();
    eprintln!("synth config: {cfg:?}");
    let out = synth::generate(&cfg)?;
    let path = a.out.out.join("edges.tsv");
    let mut w = create(&path)?;
    reciprocity_delay::temporal_graph::write_edge_list(&mut w, &out.edges)?;
    w.flush()?;
    eprintln!("wrote {} ({} edges)", path.display(), out.edges.len());
    write_table(&a.out.out, "truth.csv", &out.truth_table())?;
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::IngestCheck(a) => ingest_check(a),
        Command::Analyze(a) => analyze(a),
        Command::Features(a) => features_cmd(a),
        Command::Train(a) => train(a),
        Command::Predict(a) => predict(a),
        Command::Evaluate(a) => evaluate(a),
        Command::SweepBeta(a) => sweep(a),
        Command::Synth(a) => synth_cmd(a),
    }
}

/// Numeric breakdowns are internal failures; everything else traces back to
/// the input or the flags.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Numeric(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let version: &'static str = Box::leak(version().into_boxed_str());
    let matches = match Cli::command().version(version).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    eprintln!("resolved config: {cli:?}");
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => ExitCode::from(2),
    }
}
