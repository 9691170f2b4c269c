#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use climeta::scc::Numeraire;
use climeta::{DamageForm, Method};
use climeta_cli::report::Report;
use climeta_cli::{
    curve_csv, figure6_csv, fits_csv, function_scc, growth_comparison, national_csv, national_impacts,
    scc_csv, scc_rows, sector_csv, sector_summary, write_output, CliError, FitStage, InputPaths, Inputs,
    Result, Settings,
};

/// Reproduce the impact-function, sector, growth and social-cost tables.
#[derive(Parser, Debug)]
#[command(name = "climeta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Fit the impact functions: fits.csv and curve.csv.
    Fit,
    /// Complete the sector table: sector_table.csv.
    Sector,
    /// Downscale totals to countries: national_impacts.csv.
    Downscale,
    /// Compare growth effects: figure6.csv.
    Growth,
    /// Social cost of carbon: scc_table.csv.
    Scc,
    /// Everything, plus report.md.
    Report,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Unit {
    /// USD per tonne of carbon.
    Tc,
    /// USD per tonne of CO2.
    Tco2,
}

#[derive(Args, Debug)]
struct Options {
    /// Primary estimates CSV.
    #[arg(long, global = true)]
    estimates: Option<PathBuf>,
    /// Sector table CSV.
    #[arg(long, global = true)]
    sectors: Option<PathBuf>,
    /// Country covariates CSV.
    #[arg(long, global = true)]
    countries: Option<PathBuf>,
    /// Regional estimates CSV; refits the downscaling regression.
    #[arg(long, global = true)]
    regional: Option<PathBuf>,
    /// Region membership CSV.
    #[arg(long, global = true)]
    regions: Option<PathBuf>,
    /// Growth coefficients CSV.
    #[arg(long, global = true)]
    coefficients: Option<PathBuf>,
    /// Socio-economic scenario CSV.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Climate core TOML.
    #[arg(long, global = true)]
    climate: Option<PathBuf>,
    /// Restrict fit output to one estimation method.
    #[arg(long, global = true, value_parser = parse_method)]
    method: Option<Method>,
    /// Report one impact function.
    #[arg(long, global = true, value_parser = parse_form)]
    function: Option<DamageForm>,
    /// Pure rate of time preference.
    #[arg(long, global = true, default_value_t = 0.01)]
    prtp: f64,
    /// Elasticity of marginal utility.
    #[arg(long, global = true, default_value_t = 1.0)]
    eta: f64,
    /// Climate sensitivity, °C per CO2 doubling; defaults to the climate file.
    #[arg(long, global = true)]
    sensitivity: Option<f64>,
    /// Market share of impacts in the growth comparison.
    #[arg(long, global = true, default_value_t = 0.39)]
    market_share: f64,
    /// Warming above which estimates leave the core fitting sample; `inf` keeps all.
    #[arg(long, global = true, default_value_t = 8.0)]
    cutoff: f64,
    /// Unit of the social cost of carbon.
    #[arg(long, global = true, value_enum, default_value_t = Unit::Tc)]
    numeraire: Unit,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: climeta::Error| e.to_string())
}

fn parse_form(s: &str) -> Result<DamageForm, String> {
    s.parse().map_err(|e: climeta::Error| e.to_string())
}

impl Options {
    fn paths(&self) -> InputPaths {
        InputPaths {
            estimates: self.estimates.clone(),
            sectors: self.sectors.clone(),
            countries: self.countries.clone(),
            regional: self.regional.clone(),
            regions: self.regions.clone(),
            coefficients: self.coefficients.clone(),
            scenario: self.scenario.clone(),
            climate: self.climate.clone(),
        }
    }

    fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        if self.cutoff.is_nan() {
            return Err(CliError::Input("cutoff must be a number".into()));
        }
        s.fit.core_cutoff = self.cutoff.is_finite().then_some(self.cutoff);
        s.scc.prtp = self.prtp;
        s.scc.eta = self.eta;
        s.scc.numeraire = match self.numeraire {
            Unit::Tc => Numeraire::PerTonneCarbon,
            Unit::Tco2 => Numeraire::PerTonneCo2,
        };
        s.scc.validate()?;
        if let Some(v) = self.sensitivity {
            if !(v > 0.0) {
                return Err(CliError::Input("sensitivity must be positive".into()));
            }
        }
        s.sensitivity = self.sensitivity;
        if !(0.0..=1.0).contains(&self.market_share) {
            return Err(CliError::Input("market share must lie in [0, 1]".into()));
        }
        s.growth.market_share = self.market_share;
        Ok(s)
    }
}

fn run(cli: &Cli) -> Result<()> {
    let o = &cli.opts;
    let inputs = Inputs::load(&o.paths())?;
    let settings = o.settings()?;
    let out = &o.out;
    let wrote = |p: PathBuf| println!("wrote {}", p.display());
    match cli.command {
        Command::Fit => {
            let stage = FitStage::run(&inputs, &settings)?;
            wrote(write_output(out, "fits.csv", &fits_csv(&stage, o.method))?);
            wrote(write_output(out, "curve.csv", &curve_csv(stage.all(), &stage.band))?);
            let sample = match o.method {
                Some(m) => stage
                    .method(m)
                    .map(|f| &f.average)
                    .ok_or_else(|| CliError::Input(format!("no {m} estimates")))?,
                None => stage.all(),
            };
            let label = o.method.map(Method::as_str).unwrap_or("all");
            let best = sample.best();
            println!("best fit ({label}): {} ({:.1}%)", best.form(), 100.0 * best.bma_weight);
            if let Some(form) = o.function {
                if let Some(f) = sample.get(form) {
                    println!("{form}: {} ({:.1}%)", f.function.formula(), 100.0 * f.bma_weight);
                }
            }
        }
        Command::Sector => {
            let s = sector_summary(&inputs)?;
            wrote(write_output(out, "sector_table.csv", &sector_csv(&s))?);
            println!("average total {:.2}% of income", s.average_total);
            if let Some(u) = s.uplift {
                println!("imputation uplift {:.0}%", 100.0 * u);
            }
        }
        Command::Downscale => {
            let stage = FitStage::run(&inputs, &settings)?;
            let (model, national) = national_impacts(&inputs, &settings, stage.all())?;
            wrote(write_output(out, "national_impacts.csv", &national_csv(&national))?);
            println!("ln income {:.3}, temperature {:.3}", model.income_coef, model.temp_coef);
        }
        Command::Growth => {
            let stage = FitStage::run(&inputs, &settings)?;
            let cmp = growth_comparison(&inputs, &settings, &stage)?;
            wrote(write_output(out, "figure6.csv", &figure6_csv(&cmp))?);
            for c in cmp.columns() {
                println!("{}: {:.2}% [{:.2}, {:.2}]", c.label, c.central, c.lower, c.upper);
            }
        }
        Command::Scc => {
            let stage = FitStage::run(&inputs, &settings)?;
            let rows = scc_rows(&inputs, &settings, &stage)?;
            wrote(write_output(out, "scc_table.csv", &scc_csv(&rows, &settings))?);
            let unit = settings.scc.numeraire.unit();
            if let Some(form) = o.function {
                let v = function_scc(&rows, form)
                    .ok_or_else(|| CliError::Numerical(format!("{form} could not be fitted")))?;
                let rank = rows
                    .iter()
                    .filter(|r| r.group == "function" && r.scc < v)
                    .count();
                println!("{form}: {v:.1} {unit} (rank {} of 8 from the bottom)", rank + 1);
            }
        }
        Command::Report => {
            let report = Report::build(&inputs, &settings)?;
            wrote(write_output(out, "fits.csv", &fits_csv(&report.stage, None))?);
            wrote(write_output(out, "curve.csv", &curve_csv(report.stage.all(), &report.stage.band))?);
            wrote(write_output(out, "sector_table.csv", &sector_csv(&report.sectors))?);
            wrote(write_output(out, "national_impacts.csv", &national_csv(&report.national))?);
            wrote(write_output(out, "figure6.csv", &figure6_csv(&report.growth))?);
            wrote(write_output(out, "scc_table.csv", &scc_csv(&report.scc, &settings))?);
            wrote(write_output(out, "report.md", &report.markdown(&settings))?);
            println!("{} of {} targets pass", report.passed(), report.targets.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
