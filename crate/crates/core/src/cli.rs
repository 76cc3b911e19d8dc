//! Command-line front end.
//!
//! ```text
//! floatbody approx inscribe --body disk.json --t-frac 1e-3 --seed 7
//! floatbody approx circumscribe --body ball3.json --n 64
//! floatbody verify --claim all --corpus default --seed 1
//! floatbody plot overlay --body square.json --t 0.1
//! floatbody plot scaling --d 3
//! floatbody replay out/manifest.json
//! ```
//!
//! Every run writes `manifest.json` into its output directory (`--out`, else
//! `$FLOATBODY_OUT`, else `./floatbody-out`). Exit codes: 0 pass, 1 claim
//! failure, 2 configuration or precondition error, 3 numeric failure.

use crate::approx::{circumscribed_facets, greedy_inscribed, GreedyLimits};
use crate::body::{BodyRef, Polytope};
use crate::error::{Error, Result};
use crate::io::{load_body, write_halfspaces_csv, write_polytope};
use crate::measure::{self, Estimator};
use crate::plot::{overlay_layers, overlay_svg, scaling_svg};
use crate::report::{markdown_summary, write_csv, write_json};
use crate::sampling::rotated_directions;
use crate::verify::corpus::CorpusBody;
use crate::verify::scaling::{default_grid, fit_line, scaling_study, ScalingRow, ScalingStudy};
use crate::verify::{run as run_verify, VerifyConfig};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

pub const OUT_ENV: &str = "FLOATBODY_OUT";
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(
    name = "floatbody",
    version,
    about = "Floating bodies, illumination bodies and polytope approximation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build inscribed or circumscribed polytopes.
    #[command(subcommand)]
    Approx(ApproxCommand),
    /// Check claims and write a report bundle.
    Verify(VerifyArgs),
    /// Render SVG figures.
    #[command(subcommand)]
    Plot(PlotCommand),
    /// Rerun a manifest and compare its artifacts byte for byte.
    Replay(ReplayArgs),
}

#[derive(Debug, Subcommand)]
pub enum ApproxCommand {
    /// Greedy polytope with `K_t ⊂ P_n ⊂ K`.
    Inscribe(InscribeArgs),
    /// Intersection of tangent halfspaces in `n` directions.
    Circumscribe(CircumscribeArgs),
}

#[derive(Debug, Subcommand)]
pub enum PlotCommand {
    /// Planar overlay of K, the outer polytope of K_t, K^t and optionally P_n.
    Overlay(OverlayArgs),
    /// Log-log plot of the ball approximation error against n.
    Scaling(ScalingArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Monte Carlo sample budget for bodies without exact volumetrics.
    #[arg(long, default_value_t = measure::DEFAULT_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level {
    /// Absolute level `t`.
    #[arg(long, conflicts_with = "t_frac")]
    pub t: Option<f64>,
    /// Level as a fraction of `vol(K)`.
    #[arg(long)]
    pub t_frac: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InscribeArgs {
    #[arg(long)]
    pub body: PathBuf,
    #[command(flatten)]
    pub level: Level,
    #[arg(long, default_value_t = 200)]
    pub streak: usize,
    /// Largest admissible `t / vol(K)`; defaults to `¼e⁻⁵`.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub max_iterations: usize,
    /// Skip the facet-normal pass after random sampling.
    #[arg(long)]
    pub no_polish: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircumscribeArgs {
    #[arg(long)]
    pub body: PathBuf,
    /// Number of facet directions.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// Claim id or `all`.
    #[arg(long, default_value = "all")]
    pub claim: String,
    /// `basic`, `default` or `extended`.
    #[arg(long, default_value = "default")]
    pub corpus: String,
    /// Single body replacing the corpus.
    #[arg(long)]
    pub body: Option<PathBuf>,
    #[command(flatten)]
    pub level: Level,
    /// Random directions per body.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlayArgs {
    #[arg(long)]
    pub body: PathBuf,
    #[command(flatten)]
    pub level: Level,
    /// Boundary sampling directions per layer.
    #[arg(long, default_value_t = 256)]
    pub directions: usize,
    /// Also draw a greedy inscribed polytope at the same level.
    #[arg(long)]
    pub inscribe: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    /// Plot rows from an existing scaling CSV instead of recomputing.
    #[arg(long)]
    pub from_csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Directory for the rerun; defaults to `replay/` next to the manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved command, as stored in the manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    ApproxInscribe(InscribeArgs),
    ApproxCircumscribe(CircumscribeArgs),
    Verify(VerifyArgs),
    PlotOverlay(OverlayArgs),
    PlotScaling(ScalingArgs),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    pub config: RunConfig,
    pub t: Option<f64>,
    pub t_frac: Option<f64>,
    pub artifacts: Vec<String>,
    pub exit_code: i32,
}

struct Outcome {
    t: Option<f64>,
    t_frac: Option<f64>,
    artifacts: Vec<String>,
    exit_code: i32,
}

impl Outcome {
    fn new(artifacts: Vec<String>) -> Self {
        Self {
            t: None,
            t_frac: None,
            artifacts,
            exit_code: 0,
        }
    }
}

fn out_dir(common: &Common) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("floatbody-out"))
}

fn absolute(p: &Path) -> Result<PathBuf> {
    fs::canonicalize(p).map_err(|e| Error::Invalid(format!("cannot open {}: {e}", p.display())))
}

fn common_mut(cfg: &mut RunConfig) -> &mut Common {
    match cfg {
        RunConfig::ApproxInscribe(a) => &mut a.common,
        RunConfig::ApproxCircumscribe(a) => &mut a.common,
        RunConfig::Verify(a) => &mut a.common,
        RunConfig::PlotOverlay(a) => &mut a.common,
        RunConfig::PlotScaling(a) => &mut a.common,
    }
}

/// Makes paths absolute and fixes the output directory.
fn resolve(mut cfg: RunConfig) -> Result<RunConfig> {
    match &mut cfg {
        RunConfig::ApproxInscribe(a) => a.body = absolute(&a.body)?,
        RunConfig::ApproxCircumscribe(a) => a.body = absolute(&a.body)?,
        RunConfig::PlotOverlay(a) => a.body = absolute(&a.body)?,
        RunConfig::Verify(a) => {
            if let Some(b) = &a.body {
                a.body = Some(absolute(b)?);
            }
        }
        RunConfig::PlotScaling(a) => {
            if let Some(b) = &a.from_csv {
                a.from_csv = Some(absolute(b)?);
            }
        }
    }
    let common = common_mut(&mut cfg);
    let out = out_dir(common);
    fs::create_dir_all(&out)?;
    common.out = Some(fs::canonicalize(&out)?);
    Ok(cfg)
}

fn level(k: &BodyRef, l: &Level, est: Estimator) -> Result<(f64, f64)> {
    let vol = measure::volume(k.as_ref(), est).value;
    match (l.t, l.t_frac) {
        (Some(t), _) => Ok((t, t / vol)),
        (None, Some(f)) => Ok((f * vol, f)),
        (None, None) => Err(Error::Invalid("one of --t or --t-frac is required".into())),
    }
}

fn estimator(c: &Common) -> Estimator {
    Estimator::auto(c.samples, c.seed)
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<String> {
    fs::write(dir.join(name), text)?;
    Ok(name.to_string())
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let mut cfg = cfg.clone();
    let dir = common_mut(&mut cfg).out.clone().expect("resolved");
    fs::create_dir_all(&dir)?;
    match &cfg {
        RunConfig::ApproxInscribe(a) => {
            let est = estimator(&a.common);
            let k = load_body(&a.body)?;
            let (t, frac) = level(&k, &a.level, est)?;
            let limits = GreedyLimits {
                threshold: a.threshold.unwrap_or_else(crate::approx::default_threshold),
                rejection_streak_limit: a.streak,
                max_iterations: a.max_iterations,
                polish: !a.no_polish,
                estimator: est,
                ..Default::default()
            };
            let (p, run) = greedy_inscribed(k.as_ref(), t, a.common.seed, limits)?;
            let poly = write_polytope(&dir, "inscribed", &p)?;
            let json = write_text(&dir, "run.json", &serde_json::to_string_pretty(&run)?)?;
            println!(
                "n = {} ({:?}), certificate slack {:.3e}",
                run.n(),
                run.terminated_by,
                run.certificate_slack
            );
            Ok(Outcome {
                t: Some(t),
                t_frac: Some(frac),
                ..Outcome::new(vec![poly, json])
            })
        }
        RunConfig::ApproxCircumscribe(a) => {
            let k = load_body(&a.body)?;
            let dirs = rotated_directions(k.dim(), a.n, a.common.seed);
            let h = circumscribed_facets(k.as_ref(), &dirs)?;
            let mut f = fs::File::create(dir.join("circumscribed_h.csv"))?;
            write_halfspaces_csv(&mut f, &h)?;
            let p = Polytope::from_halfspaces_with_interior(&h, &k.interior_point())?;
            let poly = write_polytope(&dir, "circumscribed", &p)?;
            println!("{} facets, volume {:.12}", h.halfspaces().len(), p.volume());
            Ok(Outcome::new(vec!["circumscribed_h.csv".into(), poly]))
        }
        RunConfig::Verify(a) => {
            let est = estimator(&a.common);
            let body = match &a.body {
                Some(path) => {
                    let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("body").to_string();
                    Some(CorpusBody::new(id, load_body(path)?))
                }
                None => None,
            };
            let vc = VerifyConfig {
                seed: a.common.seed,
                corpus: a.corpus.parse()?,
                body,
                t: a.level.t,
                t_frac: a.level.t_frac,
                trials: a.trials,
                estimator: est,
                ..Default::default()
            };
            let reports = run_verify(&a.claim, &vc)?;
            write_csv(fs::File::create(dir.join("reports.csv"))?, &reports)?;
            write_json(fs::File::create(dir.join("reports.json"))?, &reports)?;
            let summary = markdown_summary(&reports);
            let md = write_text(&dir, "summary.md", &summary)?;
            print!("{summary}");
            let failed = reports.iter().any(|r| r.hypothesis_met && !r.pass);
            Ok(Outcome {
                t: a.level.t,
                t_frac: a.level.t_frac,
                exit_code: i32::from(failed),
                ..Outcome::new(vec!["reports.csv".into(), "reports.json".into(), md])
            })
        }
        RunConfig::PlotOverlay(a) => {
            let est = estimator(&a.common);
            let k = load_body(&a.body)?;
            let (t, frac) = level(&k, &a.level, est)?;
            let pn = if a.inscribe {
                let limits = GreedyLimits {
                    estimator: est,
                    threshold: 1.0,
                    ..Default::default()
                };
                Some(greedy_inscribed(k.as_ref(), t, a.common.seed, limits)?.0)
            } else {
                None
            };
            let layers = overlay_layers(k.as_ref(), t, a.directions, pn.as_ref(), a.common.seed, est)?;
            let title = format!("t = {t:.4e} ({frac:.3e} vol)");
            let svg = write_text(&dir, "overlay.svg", &overlay_svg(&layers, &title))?;
            Ok(Outcome {
                t: Some(t),
                t_frac: Some(frac),
                ..Outcome::new(vec![svg])
            })
        }
        RunConfig::PlotScaling(a) => {
            let study = match &a.from_csv {
                Some(path) => {
                    let rows: Vec<ScalingRow> = csv::Reader::from_path(path)?.deserialize().collect::<std::result::Result<_, _>>()?;
                    let lx: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
                    let ly: Vec<f64> = rows.iter().map(|r| r.d_s.ln()).collect();
                    let (slope, intercept) = fit_line(&lx, &ly);
                    ScalingStudy {
                        d: a.d,
                        construction: if a.d == 2 {
                            crate::approx::Construction::Regular
                        } else {
                            crate::approx::Construction::Fibonacci
                        },
                        rows,
                        slope,
                        intercept,
                        expected_slope: -2.0 / (a.d as f64 - 1.0),
                    }
                }
                None => scaling_study(a.d, &a.grid.clone().unwrap_or_else(|| default_grid(a.d)), a.common.seed)?,
            };
            study.write_csv(fs::File::create(dir.join("scaling.csv"))?)?;
            let svg = write_text(&dir, "scaling.svg", &scaling_svg(&study))?;
            println!("slope {:.4} (expected {:.4})", study.slope, study.expected_slope);
            Ok(Outcome::new(vec!["scaling.csv".into(), svg]))
        }
    }
}

/// Runs a resolved config and writes its manifest; returns the exit code.
pub fn run_config(cfg: RunConfig) -> Result<i32> {
    let cfg = resolve(cfg)?;
    let outcome = execute(&cfg)?;
    let mut c = cfg.clone();
    let dir = common_mut(&mut c).out.clone().expect("resolved");
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg,
        t: outcome.t,
        t_frac: outcome.t_frac,
        artifacts: outcome.artifacts,
        exit_code: outcome.exit_code,
    };
    fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
    Ok(outcome.exit_code)
}

/// Reruns a manifest into a fresh directory; exit code 1 if any artifact differs.
pub fn replay(args: &ReplayArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.manifest)?;
    let original: Manifest = serde_json::from_str(&text)?;
    let src = args.manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
    let target = args.out.clone().unwrap_or_else(|| src.join("replay"));
    let mut cfg = original.config.clone();
    common_mut(&mut cfg).out = Some(target.clone());
    let code = run_config(cfg)?;
    let mut differ = Vec::new();
    for a in &original.artifacts {
        if fs::read(src.join(a))? != fs::read(target.join(a))? {
            differ.push(a.clone());
        }
    }
    if differ.is_empty() && code == original.exit_code {
        println!("replay identical: {} artifacts", original.artifacts.len());
        Ok(0)
    } else {
        eprintln!("replay differs: {differ:?} (exit {code} vs {})", original.exit_code);
        Ok(1)
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Approx(ApproxCommand::Inscribe(a)) => run_config(RunConfig::ApproxInscribe(a)),
        Command::Approx(ApproxCommand::Circumscribe(a)) => run_config(RunConfig::ApproxCircumscribe(a)),
        Command::Verify(a) => run_config(RunConfig::Verify(a)),
        Command::Plot(PlotCommand::Overlay(a)) => run_config(RunConfig::PlotOverlay(a)),
        Command::Plot(PlotCommand::Scaling(a)) => run_config(RunConfig::PlotScaling(a)),
        Command::Replay(a) => replay(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
