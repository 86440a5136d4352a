//! Command-line front end. Every stochastic subcommand requires `--seed`.
//!
//! Exit codes: 0 success, 2 usage error (bad flags or parameter values),
//! 1 data error (unreadable or malformed input).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bands::{
    band_covers, band_for_population_cdf, band_for_sample_edf, theta_band, Band, Truth,
};
use crate::edf::{Edf, WeightedEdf};
use crate::gof::{run_test, TestFamily};
use crate::ingest::{extract_subsample, BandResult, DataSource, Report, ReportPayload, Timing};
use crate::limitdist::{CdfModel, CriticalValue, Law};
use crate::montecarlo::{
    run_coverage_experiment, run_gof_level_experiment, CoverageReport, Experiment,
    ExperimentConfig, LevelReport,
};
use crate::pointwise::{ci_for_population_cdf, ci_for_sample_edf, ci_theta, VarianceSource};
use crate::resample::{draw_weights, SubsampleRule, WeightVector};
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "vresample",
    version,
    about = "Virtual resampling estimates of EDFs and CDFs from big samples"
)]
struct Cli {
    /// Add wall-clock timing to the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Upper-α critical value of a limit law.
    Quantile {
        #[arg(long, value_enum)]
        law: LawArg,
        #[arg(long, value_parser = parse_probability)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw multinomial weights and print the selected indices and counts.
    Subsample {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_rule)]
        rule: SubsampleRule,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simultaneous confidence band for F_N or F.
    Band {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        draw: DrawArgs,
        #[arg(long, value_enum, default_value = "f")]
        target: TargetArg,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        /// Report whether the band covers this CDF (target f only).
        #[arg(long, value_parser = parse_model_spec)]
        truth: Option<ModelSpec>,
        /// Write x, lower, upper, center rows for plotting.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Goodness-of-fit test of a fully specified null CDF.
    Gof {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        draw: DrawArgs,
        #[arg(long, value_parser = parse_model_spec)]
        null: ModelSpec,
        #[arg(long, value_parser = parse_family, default_value = "ks")]
        family: TestFamily,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pointwise confidence interval for F_N(x) or F(x).
    Ci {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        draw: DrawArgs,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, value_enum, default_value = "f")]
        target: TargetArg,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        #[arg(long, value_enum, default_value = "fmn")]
        variance: VarianceArg,
        /// True CDF, needed for `--variance truth`.
        #[arg(long, value_parser = parse_model_spec)]
        truth: Option<ModelSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo coverage or level study.
    Simulate {
        #[arg(long, value_enum)]
        table: TableArg,
        /// Sampling distribution; repeat for several.
        #[arg(long = "dist", value_parser = parse_model)]
        dists: Vec<CdfModel>,
        #[arg(long = "n", value_delimiter = ',')]
        sizes: Vec<u64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_rule)]
        rules: Vec<SubsampleRule>,
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long, value_parser = parse_probability, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = parse_family, default_value = "ks")]
        family: TestFamily,
        #[arg(long = "theta", value_delimiter = ',', allow_negative_numbers = true)]
        thetas: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to `bin` for `.bin`/`.f64` files and `csv` otherwise.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Record count; checked against the file.
    #[arg(long)]
    n: Option<u64>,
    /// 0-based CSV column.
    #[arg(long, default_value_t = 0)]
    column: usize,
    #[arg(long)]
    header: bool,
}

#[derive(Debug, Args)]
struct DrawArgs {
    #[arg(long, value_parser = parse_rule)]
    rule: SubsampleRule,
    #[arg(long, value_parser = parse_probability, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LawArg {
    Ks,
    Cvm,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    Fn,
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VarianceArg {
    Truth,
    Fn,
    Fmn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Bin,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Gof,
    Theta,
}

/// A model given inline, or a `table:PATH` file read after parsing.
#[derive(Debug, Clone)]
enum ModelSpec {
    Model(CdfModel),
    Table(PathBuf),
}

impl ModelSpec {
    fn load(&self) -> Result<CdfModel, CliError> {
        match self {
            ModelSpec::Model(m) => Ok(m.clone()),
            ModelSpec::Table(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(e.into()))?;
                CdfModel::table_from_text(&text).map_err(CliError::Data)
            }
        }
    }
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not in (0, 1)"))
    }
}

fn parse_rule(s: &str) -> Result<SubsampleRule, Error> {
    s.parse()
}

fn parse_model(s: &str) -> Result<CdfModel, Error> {
    s.parse()
}

fn parse_family(s: &str) -> Result<TestFamily, Error> {
    s.parse()
}

fn parse_model_spec(s: &str) -> Result<ModelSpec, Error> {
    match s.strip_prefix("table:") {
        Some(path) => Ok(ModelSpec::Table(PathBuf::from(path))),
        None => s.parse().map(ModelSpec::Model),
    }
}

enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Data(other),
        }
    }
}

/// Runs the CLI on `argv` (program name first) with the process streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let command_echo = argv.iter().skip(1).cloned().collect();
    match execute(cli, command_echo, out) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: Cli, command: Vec<String>, out: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    let (report, destination, text) = match cli.command {
        Command::Quantile { law, alpha, out } => {
            let law = match law {
                LawArg::Ks => Law::KolmogorovSup,
                LawArg::Cvm => Law::CramerVonMises,
                LawArg::Normal => Law::StdNormal,
            };
            let cv = CriticalValue::for_level(law, alpha)?;
            let report =
                Report::new(command, ReportPayload::Quantile(cv)).with_parameter("alpha", alpha);
            (report, out, None)
        }
        Command::Subsample { n, rule, seed, out } => {
            rule.validate()?;
            let size = rule.resolve(n);
            let w = draw_weights(n, size.m, seed)?;
            let mut report = Report::new(command, ReportPayload::Subsample(w))
                .with_parameter("n", n)
                .with_parameter("rule", rule.to_string())
                .with_parameter("m", size.m)
                .with_parameter("quadratic_warning", size.quadratic_warning);
            report.seeds.push(seed);
            (report, out, None)
        }
        Command::Band {
            data,
            draw,
            target,
            theta,
            truth,
            plot,
            out,
        } => {
            let theta = theta.unwrap_or(0.0);
            if target == TargetArg::Fn && theta != 0.0 {
                return Err(CliError::Usage("--theta applies to --target f only".into()));
            }
            if target == TargetArg::Fn && truth.is_some() {
                return Err(CliError::Usage("--truth applies to --target f only".into()));
            }
            let src = open_source(&data)?;
            let (g, w) = weighted_edf(&src, &draw)?;
            let band: Band = match target {
                TargetArg::Fn => band_for_sample_edf(&g, draw.alpha)?,
                TargetArg::F if theta == 0.0 => band_for_population_cdf(&g, src.n(), draw.alpha)?,
                TargetArg::F => theta_band(&g, &full_edf(&src)?, theta, draw.alpha)?,
            };
            let covers_truth = match &truth {
                Some(spec) => Some(band_covers(&band, Truth::Cdf(&spec.load()?))?),
                None => None,
            };
            if let Some(path) = &plot {
                write_plot(path, &band)?;
            }
            let report = draw_report(
                command,
                ReportPayload::Band(Box::new(BandResult { band, covers_truth })),
                &draw,
                &w,
            )
            .with_parameter("target", target_name(target))
            .with_parameter("theta", theta);
            (report, out, None)
        }
        Command::Gof {
            data,
            draw,
            null,
            family,
            theta,
            out,
        } => {
            let f0 = null.load()?;
            let src = open_source(&data)?;
            let (g, w) = weighted_edf(&src, &draw)?;
            let h = if theta == 0.0 {
                None
            } else {
                Some(full_edf(&src)?)
            };
            let result = run_test(family, &g, h.as_ref(), theta, &f0, draw.alpha)?;
            let report = draw_report(command, ReportPayload::Test(result), &draw, &w)
                .with_parameter("null", f0.to_string());
            (report, out, None)
        }
        Command::Ci {
            data,
            draw,
            x,
            target,
            theta,
            variance,
            truth,
            out,
        } => {
            let theta = theta.unwrap_or(0.0);
            if target == TargetArg::Fn && theta != 0.0 {
                return Err(CliError::Usage("--theta applies to --target f only".into()));
            }
            let truth = match (&truth, variance) {
                (Some(spec), _) => Some(spec.load()?),
                (None, VarianceArg::Truth) => {
                    return Err(CliError::Usage(
                        "--variance truth needs --truth MODEL".into(),
                    ));
                }
                (None, _) => None,
            };
            let source = match (variance, &truth) {
                (VarianceArg::Truth, Some(model)) => VarianceSource::Truth(model),
                (VarianceArg::Fn, _) => VarianceSource::SampleEdf,
                _ => VarianceSource::WeightedEdf,
            };
            let src = open_source(&data)?;
            let (g, w) = weighted_edf(&src, &draw)?;
            let h = if variance == VarianceArg::Fn || theta != 0.0 {
                Some(full_edf(&src)?)
            } else {
                None
            };
            let ci = match (target, h.as_ref()) {
                (TargetArg::Fn, h) => ci_for_sample_edf(&g, h, x, draw.alpha, source)?,
                (TargetArg::F, h) if theta == 0.0 => {
                    ci_for_population_cdf(&g, h, x, draw.alpha, source)?
                }
                (TargetArg::F, Some(h)) => ci_theta(&g, h, x, theta, draw.alpha, source)?,
                (TargetArg::F, None) => unreachable!("sample EDF is loaded whenever theta != 0"),
            };
            let report = draw_report(command, ReportPayload::Interval(ci), &draw, &w)
                .with_parameter("target", target_name(target));
            (report, out, None)
        }
        Command::Simulate {
            table,
            dists,
            sizes,
            rules,
            reps,
            alpha,
            seed,
            family,
            thetas,
            out,
        } => {
            let (payload, text) = simulate(
                table, dists, sizes, rules, reps, alpha, seed, family, thetas,
            )?;
            let mut report = Report::new(command, payload).with_parameter("alpha", alpha);
            report.seeds.push(seed);
            (report, out, Some(text))
        }
    };
    let mut report = report;
    if cli.timing {
        report.timing = Some(Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    let json = report.to_json()?;
    let io = |e: std::io::Error| CliError::Data(e.into());
    match destination {
        Some(path) => {
            std::fs::write(&path, format!("{json}\n")).map_err(io)?;
            if let Some(text) = text {
                write!(out, "{text}").map_err(io)?;
            }
        }
        None => {
            writeln!(out, "{json}").map_err(io)?;
            if let Some(text) = text {
                eprint!("{text}");
            }
        }
    }
    Ok(())
}

fn target_name(target: TargetArg) -> &'static str {
    match target {
        TargetArg::Fn => "fn",
        TargetArg::F => "f",
    }
}

fn open_source(data: &DataArgs) -> Result<DataSource, CliError> {
    let format =
        data.format
            .unwrap_or_else(|| match data.input.extension().and_then(|e| e.to_str()) {
                Some("bin" | "f64") => FormatArg::Bin,
                _ => FormatArg::Csv,
            });
    let src = match (format, data.n) {
        (FormatArg::Bin, Some(n)) => DataSource::binary_with_len(&data.input, n),
        (FormatArg::Bin, None) => DataSource::binary(&data.input),
        (FormatArg::Csv, Some(n)) => {
            DataSource::csv_with_len(&data.input, data.column, data.header, n)
        }
        (FormatArg::Csv, None) => DataSource::csv(&data.input, data.column, data.header),
    };
    src.map_err(CliError::Data)
}

fn weighted_edf(
    src: &DataSource,
    draw: &DrawArgs,
) -> Result<(WeightedEdf, WeightVector), CliError> {
    draw.rule.validate()?;
    let m = draw.rule.resolve(src.n()).m;
    let w = draw_weights(src.n(), m, draw.seed)?;
    let pairs = extract_subsample(src, &w).map_err(CliError::Data)?;
    let g = WeightedEdf::from_pairs(&pairs, m, src.n())?;
    Ok((g, w))
}

fn full_edf(src: &DataSource) -> Result<Edf, CliError> {
    let values = src.read_all().map_err(CliError::Data)?;
    Ok(Edf::from_values(&values)?)
}

fn draw_report(
    command: Vec<String>,
    payload: ReportPayload,
    draw: &DrawArgs,
    w: &WeightVector,
) -> Report {
    let mut report = Report::new(command, payload)
        .with_parameter("n", w.population_size())
        .with_parameter("m", w.draw_count())
        .with_parameter("distinct", w.distinct())
        .with_parameter("rule", draw.rule.to_string())
        .with_parameter("alpha", draw.alpha);
    report.seeds.push(draw.seed);
    report
}

fn write_plot(path: &Path, band: &Band) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| CliError::Data(e.into()))?;
    let data = |e: csv::Error| CliError::Data(e.into());
    writer
        .write_record(["x", "lower", "upper", "center"])
        .map_err(data)?;
    for row in band.plot_rows() {
        writer.serialize(row).map_err(data)?;
    }
    writer.flush().map_err(|e| CliError::Data(e.into()))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    table: TableArg,
    dists: Vec<CdfModel>,
    sizes: Vec<u64>,
    rules: Vec<SubsampleRule>,
    reps: Option<u64>,
    alpha: f64,
    seed: u64,
    family: TestFamily,
    thetas: Vec<f64>,
) -> Result<(ReportPayload, String), CliError> {
    let tables = matches!(table, TableArg::One | TableArg::Two | TableArg::Theta);
    let dists = if !dists.is_empty() {
        dists
    } else if tables {
        vec![CdfModel::chi_square(1)?, CdfModel::student_t(15)?]
    } else {
        vec![CdfModel::chi_square(6)?]
    };
    let sizes = match (sizes.is_empty(), tables) {
        (false, _) => sizes,
        (true, true) => vec![50, 200],
        (true, false) => vec![200],
    };
    let rules = match (rules.is_empty(), tables) {
        (false, _) => rules,
        (true, true) => vec![
            SubsampleRule::Power(0.5),
            SubsampleRule::Power(1.0),
            SubsampleRule::Power(1.9),
        ],
        (true, false) => vec![SubsampleRule::Fraction(1.0)],
    };
    let thetas = if thetas.is_empty() { vec![0.0] } else { thetas };
    let reps = reps.unwrap_or(if table == TableArg::Gof { 2000 } else { 1000 });
    let experiment = match table {
        TableArg::One => Experiment::CoverageF,
        TableArg::Two => Experiment::CoverageFn,
        TableArg::Theta => Experiment::ThetaBandCoverage { thetas },
        TableArg::Gof => Experiment::GofLevel { family, thetas },
    };
    let configs: Vec<ExperimentConfig> = dists
        .iter()
        .flat_map(|d| {
            sizes.iter().map(|&n| ExperimentConfig {
                distribution: d.clone(),
                n,
                rules: rules.clone(),
                alpha,
                replications: reps,
                base_seed: seed,
                experiment: experiment.clone(),
            })
        })
        .collect();
    if table == TableArg::Gof {
        let mut merged = LevelReport {
            alpha,
            base_seed: seed,
            rows: Vec::new(),
        };
        for cfg in configs {
            merged.rows.extend(run_gof_level_experiment(&cfg)?.rows);
        }
        let text = merged.to_text();
        Ok((ReportPayload::Level(merged), text))
    } else {
        let mut merged = CoverageReport {
            experiment,
            alpha,
            base_seed: seed,
            rows: Vec::new(),
        };
        for cfg in configs {
            merged.rows.extend(run_coverage_experiment(&cfg)?.rows);
        }
        let text = merged.to_text();
        Ok((ReportPayload::Coverage(merged), text))
    }
}
