//! Batch driver behind the `climeta` binary.
//!
//! [`Inputs`] gathers every table, falling back to the bundled data for any
//! path not given. The `*_csv` functions render one output file each and
//! [`report`] collects the reference targets. Everything is a pure function
//! of inputs and [`Settings`], so repeated runs write identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use climeta::climate::{load_climate, ClimateCore};
use climeta::estimates::load_catalogue;
use climeta::fit::{fit_all_methods, fit_bounds, ConfidenceBand, FitOptions, MethodFits, ModelAverage};
use climeta::growth::{
    combine_studies, compare_growth, load_coefficients, ComparisonSetup, GrowthCoefficients,
    GrowthComparison, GrowthKind,
};
use climeta::regional::{
    downscale, fit_regional, load_countries, load_regional_estimates, study_totals_near,
    CountryRecord, NationalImpact, RegionMap, RegionalEstimate, RegionalModel,
};
use climeta::scc::{scc_per_estimate, weighted_mean_scc, SccConfig, SccContext};
use climeta::scenario::{load_scenario, Scenario};
use climeta::sector::{impute_sectors, load_sectors, SectorSummary, SectorTable};
use climeta::{data, DamageForm, EstimateCatalogue, Method};
use thiserror::Error;

pub mod report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<climeta::Error> for CliError {
    fn from(e: climeta::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Optional overrides of the bundled input files.
#[derive(Debug, Clone, Default)]
pub struct InputPaths {
    pub estimates: Option<PathBuf>,
    pub sectors: Option<PathBuf>,
    pub countries: Option<PathBuf>,
    pub regional: Option<PathBuf>,
    pub regions: Option<PathBuf>,
    pub coefficients: Option<PathBuf>,
    pub scenario: Option<PathBuf>,
    pub climate: Option<PathBuf>,
}

/// Every table an analysis may read.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub catalogue: EstimateCatalogue,
    pub sectors: SectorTable,
    pub countries: Vec<CountryRecord>,
    /// Regional estimates for refitting the downscaling model; `None` keeps
    /// the default coefficients.
    pub regional: Option<(Vec<RegionalEstimate>, RegionMap)>,
    pub coefficients: Vec<GrowthCoefficients>,
    pub scenario: Scenario,
    pub climate: ClimateCore,
}

fn existing(path: &Path) -> Result<&Path> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(CliError::Input(format!("{}: no such file", path.display())))
    }
}

impl Inputs {
    pub fn bundled() -> Self {
        Inputs {
            catalogue: data::catalogue(),
            sectors: data::sectors(),
            countries: data::countries(),
            regional: None,
            coefficients: data::growth_coefficients(),
            scenario: data::scenario(),
            climate: data::climate(),
        }
    }

    pub fn load(paths: &InputPaths) -> Result<Self> {
        let mut inputs = Inputs::bundled();
        if let Some(p) = &paths.estimates {
            inputs.catalogue = load_catalogue(existing(p)?)?;
        }
        if let Some(p) = &paths.sectors {
            inputs.sectors = load_sectors(existing(p)?)?;
        }
        if let Some(p) = &paths.countries {
            inputs.countries = load_countries(existing(p)?)?;
        }
        if let Some(p) = &paths.regional {
            let regions = match &paths.regions {
                Some(r) => RegionMap::load(existing(r)?)?,
                None => data::regions(),
            };
            inputs.regional = Some((load_regional_estimates(existing(p)?)?, regions));
        }
        if let Some(p) = &paths.coefficients {
            inputs.coefficients = load_coefficients(existing(p)?)?;
        }
        if let Some(p) = &paths.scenario {
            inputs.scenario = load_scenario(existing(p)?)?;
        }
        if let Some(p) = &paths.climate {
            inputs.climate = load_climate(existing(p)?)?;
        }
        Ok(inputs)
    }

    fn coefficients_of(&self, kind: GrowthKind) -> Result<Vec<GrowthCoefficients>> {
        let out: Vec<GrowthCoefficients> = self.coefficients.iter().filter(|c| c.kind == kind).cloned().collect();
        if out.is_empty() {
            return Err(CliError::Input(format!("no {kind} growth coefficients")));
        }
        Ok(out)
    }
}

/// Analysis knobs; the defaults are the central choices.
#[derive(Debug, Clone)]
pub struct Settings {
    pub fit: FitOptions,
    pub scc: SccConfig,
    pub growth: ComparisonSetup,
    /// Overrides the climate core's sensitivity, °C per doubling.
    pub sensitivity: Option<f64>,
    /// Warming to which national impacts are scaled, °C.
    pub downscale_to: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            fit: FitOptions::default(),
            scc: SccConfig::default(),
            growth: ComparisonSetup::default(),
            sensitivity: None,
            downscale_to: 2.5,
        }
    }
}

impl Settings {
    fn climate(&self, inputs: &Inputs) -> ClimateCore {
        let mut core = inputs.climate.clone();
        if let Some(s) = self.sensitivity {
            core.sensitivity = s;
        }
        core
    }
}

/// Model averages for the full catalogue and each method, plus the band.
#[derive(Debug, Clone)]
pub struct FitStage {
    pub subsets: Vec<MethodFits>,
    pub band: ConfidenceBand,
}

impl FitStage {
    pub fn run(inputs: &Inputs, settings: &Settings) -> Result<Self> {
        Ok(FitStage {
            subsets: fit_all_methods(&inputs.catalogue, &settings.fit)?,
            band: fit_bounds(&inputs.catalogue)?,
        })
    }

    pub fn all(&self) -> &ModelAverage {
        &self.subsets[0].average
    }

    pub fn method(&self, method: Method) -> Option<&MethodFits> {
        self.subsets.iter().find(|m| m.method == Some(method))
    }
}

fn sample_name(m: &MethodFits) -> &'static str {
    m.method.map(Method::as_str).unwrap_or("all")
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// `fits.csv`: one row per sample and form.
pub fn fits_csv(stage: &FitStage, method: Option<Method>) -> String {
    let mut out = String::from("sample,n_studies,form,p1,p2,p3,wsse,n_eff,weight,best\n");
    for m in stage.subsets.iter().filter(|m| method.is_none() || m.method == method) {
        let best = m.average.best().form();
        for f in &m.average.fits {
            let p = |i: usize| f.function.params.get(i).map(|v| format!("{v:.6e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                sample_name(m),
                m.n_studies,
                f.form(),
                p(0),
                p(1),
                p(2),
                num(f.wsse),
                num(f.n_eff),
                num(f.bma_weight),
                f.form() == best
            );
        }
    }
    out
}

/// `curve.csv`: averaged curve, its band and every form from −1 to 17 °C.
pub fn curve_csv(average: &ModelAverage, band: &ConfidenceBand) -> String {
    let mut out = String::from("warming,bma,lower,upper");
    for f in &average.fits {
        let _ = write!(out, ",{}", f.form());
    }
    out.push('\n');
    for i in 0..=180 {
        let t = -1.0 + 0.1 * i as f64;
        let c = average.evaluate(t);
        let _ = write!(out, "{:.1},{},{},{}", t, num(c), num(band.lower(c, t)), num(band.upper(c, t)));
        for f in &average.fits {
            let _ = write!(out, ",{}", num(f.function.evaluate(t)));
        }
        out.push('\n');
    }
    out
}

pub fn sector_summary(inputs: &Inputs) -> Result<SectorSummary> {
    Ok(impute_sectors(&inputs.sectors)?)
}

/// `sector_table.csv`: completed table, totals, headlines and ratios, with
/// the row averages in the last column. Imputed cells are flagged in the
/// trailing `imputed` column by study initials.
pub fn sector_csv(s: &SectorSummary) -> String {
    let t = &s.table;
    let mut out = String::from("row");
    for study in &t.studies {
        let _ = write!(out, ",{study}");
    }
    out.push_str(",Average,imputed\n");
    let cell = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
    for ((name, row), avg) in t.sectors.iter().zip(&t.cells).zip(&s.average) {
        let _ = write!(out, "{name}");
        for c in row {
            let _ = write!(out, ",{}", cell(c.value()));
        }
        let imputed: Vec<&str> = row
            .iter()
            .zip(&t.studies)
            .filter(|(c, _)| c.is_imputed())
            .map(|(_, s)| s.as_str())
            .collect();
        let _ = writeln!(out, ",{:.4},{}", avg, imputed.join(";"));
    }
    let line = |out: &mut String, label: &str, vals: &[f64], avg: Option<f64>| {
        let _ = write!(out, "{label}");
        for v in vals {
            let _ = write!(out, ",{v:.4}");
        }
        let _ = writeln!(out, ",{},", cell(avg));
    };
    line(&mut out, "Total", &s.totals, Some(s.average_total));
    if let Some(orig) = &t.originals {
        line(&mut out, "Original", orig, s.average_original);
    }
    if let (Some(r), Some(u)) = (&s.ratios, s.uplift) {
        line(&mut out, "Ratio", r, Some(1.0 + u));
    }
    line(&mut out, "Imputed share", &s.imputed_shares(), None);
    out
}

/// National impacts at `settings.downscale_to`, one study total per study.
pub fn national_impacts(inputs: &Inputs, settings: &Settings, average: &ModelAverage) -> Result<(RegionalModel, Vec<NationalImpact>)> {
    let model = match &inputs.regional {
        Some((estimates, regions)) => fit_regional(estimates, &inputs.countries, regions)?,
        None => RegionalModel::default(),
    };
    let totals = study_totals_near(&inputs.catalogue, settings.downscale_to);
    let national = downscale(&model, &totals, &inputs.countries, settings.downscale_to, average)?;
    Ok((model, national))
}

pub fn national_csv(national: &[NationalImpact]) -> String {
    let mut out = String::from("country_id,mean,sd\n");
    for n in national {
        let _ = writeln!(out, "{},{},{}", n.country_id, num(n.mean), num(n.sd));
    }
    out
}

pub fn growth_comparison(inputs: &Inputs, settings: &Settings, stage: &FitStage) -> Result<GrowthComparison> {
    Ok(compare_growth(
        stage.all(),
        &stage.band,
        &inputs.coefficients_of(GrowthKind::Level)?,
        &inputs.coefficients_of(GrowthKind::Change)?,
        &settings.growth,
    )?)
}

/// `figure6.csv`: end-of-path output loss, percent of GDP.
pub fn figure6_csv(cmp: &GrowthComparison) -> String {
    let mut out = String::from("column,central,lower,upper\n");
    for c in cmp.columns() {
        let _ = writeln!(out, "{},{},{},{}", c.label, num(c.central), num(c.lower), num(c.upper));
    }
    out
}

/// One social cost of carbon estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SccRow {
    /// `estimate`, `function`, `average`, `method_best`, `level` or `change`.
    pub group: &'static str,
    pub label: String,
    pub scc: f64,
}

/// Every social cost of carbon: per estimate, per form, the model average,
/// the best form of each method and each growth study with its combination.
pub fn scc_rows(inputs: &Inputs, settings: &Settings, stage: &FitStage) -> Result<Vec<SccRow>> {
    let ctx = SccContext::new(&inputs.scenario, &settings.climate(inputs), &settings.scc)?;
    let mut rows: Vec<SccRow> = scc_per_estimate(&inputs.catalogue, &ctx)?
        .into_iter()
        .map(|r| SccRow {
            group: "estimate",
            label: r.study_id,
            scc: r.scc,
        })
        .collect();
    for f in &stage.all().fits {
        rows.push(SccRow {
            group: "function",
            label: f.form().to_string(),
            scc: ctx.from_curve(&f.function)?,
        });
    }
    rows.push(SccRow {
        group: "average",
        label: "bma".into(),
        scc: ctx.from_curve(stage.all())?,
    });
    for m in stage.subsets.iter().filter(|m| m.method.is_some()) {
        let best = m.average.best();
        rows.push(SccRow {
            group: "method_best",
            label: format!("{}:{}", sample_name(m), best.form()),
            scc: ctx.from_curve(&best.function)?,
        });
    }
    for (group, kind) in [("level", GrowthKind::Level), ("change", GrowthKind::Change)] {
        let studies = inputs.coefficients_of(kind)?;
        for c in studies.iter().chain(std::iter::once(&combine_studies(&studies, None)?)) {
            rows.push(SccRow {
                group,
                label: c.label.clone(),
                scc: ctx.from_growth(c)?,
            });
        }
    }
    Ok(rows)
}

/// Catalogue-weighted mean of the per-estimate rows.
pub fn weighted_estimate_scc(inputs: &Inputs, settings: &Settings) -> Result<f64> {
    let ctx = SccContext::new(&inputs.scenario, &settings.climate(inputs), &settings.scc)?;
    Ok(weighted_mean_scc(&scc_per_estimate(&inputs.catalogue, &ctx)?))
}

pub fn scc_csv(rows: &[SccRow], settings: &Settings) -> String {
    let mut out = format!("group,label,scc_{}\n", settings.scc.numeraire.unit().replace('/', "_per_"));
    for r in rows {
        let _ = writeln!(out, "{},{},{:.4}", r.group, r.label, r.scc);
    }
    out
}

/// SCC of one form, looked up in `rows`.
pub fn function_scc(rows: &[SccRow], form: DamageForm) -> Option<f64> {
    rows.iter()
        .find(|r| r.group == "function" && r.label == form.as_str())
        .map(|r| r.scc)
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_output(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}
