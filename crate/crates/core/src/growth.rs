//! Growth effects of climate change.
//!
//! Two routes lead from climate to economic growth. A level impact `D`
//! depresses investment and so, in a Solow-Swan economy with capital in
//! steady state, lowers growth by `(λδ)^τ · D/(1+D)` in the `τ`-th year
//! after the shock, which fades quickly. Weather-shock regressions instead
//! relate growth directly to the temperature level (a permanent effect) or
//! to its change (a transient one).
//!
//! All gaps returned here are fractions of counterfactual output, positive
//! for a loss.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::damage::DamageCurve;
use crate::error::{Error, Result};
use crate::fit::{ConfidenceBand, ModelAverage};
use crate::regional::CountryRecord;

/// Neoclassical growth parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolowParams {
    /// Capital elasticity of output.
    pub lambda: f64,
    /// Depreciation rate per year.
    pub delta: f64,
    /// Savings rate; enters only through the steady state `K = sY/δ`.
    pub savings: f64,
}

impl Default for SolowParams {
    fn default() -> Self {
        SolowParams {
            lambda: 0.3,
            delta: 0.1,
            savings: 0.2,
        }
    }
}

impl SolowParams {
    pub fn validate(&self) -> Result<()> {
        let open = |v: f64| v > 0.0 && v < 1.0;
        if !open(self.lambda) || !open(self.delta) || !open(self.savings) {
            return Err(Error::InvalidInput(
                "lambda, delta and savings must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn decay(&self) -> f64 {
        self.lambda * self.delta
    }

    /// Steady-state capital-output ratio `s/δ`.
    pub fn capital_output_ratio(&self) -> f64 {
        self.savings / self.delta
    }

    /// `Σ_{τ≥1} (λδ)^τ = λδ / (1 − λδ)`.
    pub fn kernel_sum(&self) -> f64 {
        let x = self.decay();
        x / (1.0 - x)
    }
}

/// Growth-rate reduction `τ` years after a level shock of size `d`
/// (a fraction of output).
pub fn implied_growth_delta(d: f64, params: &SolowParams, tau: u32) -> Result<f64> {
    if d <= -1.0 {
        return Err(Error::Numerical(format!(
            "damage fraction {d} annihilates output"
        )));
    }
    if tau == 0 {
        return Err(Error::InvalidInput("tau counts from 1".into()));
    }
    Ok(params.decay().powi(tau as i32) * d / (1.0 + d))
}

/// Whether growth responds to the temperature level or its change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthKind {
    /// `g = a·T + b·T²`.
    Level,
    /// `g = a·ΔT + b·T·ΔT`.
    Change,
}

impl GrowthKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GrowthKind::Level => "level",
            GrowthKind::Change => "change",
        }
    }
}

impl fmt::Display for GrowthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GrowthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "level" => Ok(GrowthKind::Level),
            "change" => Ok(GrowthKind::Change),
            other => Err(Error::InvalidInput(format!("unknown growth kind `{other}`"))),
        }
    }
}

/// Sign convention of a reported coefficient.
///
/// `Reversed` marks a study that defines its shock with the opposite sign
/// (cold minus hot), so the reported `a` is negated before use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    #[default]
    Direct,
    Reversed,
}

/// A weather-shock study's global growth response.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCoefficients {
    pub label: String,
    pub kind: GrowthKind,
    /// As reported.
    pub a: f64,
    pub b: f64,
    /// Combination weight, when supplied with the data.
    pub weight: Option<f64>,
    pub convention: SignConvention,
}

impl GrowthCoefficients {
    pub fn new(label: &str, kind: GrowthKind, a: f64, b: f64) -> Self {
        GrowthCoefficients {
            label: label.to_string(),
            kind,
            a,
            b,
            weight: None,
            convention: SignConvention::Direct,
        }
    }

    pub fn zero(kind: GrowthKind) -> Self {
        Self::new("zero", kind, 0.0, 0.0)
    }

    /// `a` under the common sign convention.
    pub fn effective_a(&self) -> f64 {
        match self.convention {
            SignConvention::Direct => self.a,
            SignConvention::Reversed => -self.a,
        }
    }

    fn expect(&self, kind: GrowthKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: kind.as_str(),
                found: self.kind.as_str(),
            })
        }
    }
}

/// Growth-rate change per year at warming `t` for a level-type response.
pub fn level_growth_effect(coef: &GrowthCoefficients, t: f64) -> Result<f64> {
    coef.expect(GrowthKind::Level)?;
    Ok(coef.effective_a() * t + coef.b * t * t)
}

/// Growth-rate change per year at warming `t` and warming rate `dt` for a
/// change-type response.
pub fn change_growth_effect(coef: &GrowthCoefficients, t: f64, dt: f64) -> Result<f64> {
    coef.expect(GrowthKind::Change)?;
    Ok(coef.effective_a() * dt + coef.b * t * dt)
}

/// Weighted average of same-kind coefficient sets.
///
/// Explicit `weights` win over the weights carried by the coefficients;
/// without either, studies count equally. The result uses the direct sign
/// convention.
pub fn combine_studies(coefs: &[GrowthCoefficients], weights: Option<&[f64]>) -> Result<GrowthCoefficients> {
    let first = coefs
        .first()
        .ok_or_else(|| Error::InvalidInput("no studies to combine".into()))?;
    if let Some(other) = coefs.iter().find(|c| c.kind != first.kind) {
        return Err(Error::KindMismatch {
            expected: first.kind.as_str(),
            found: other.kind.as_str(),
        });
    }
    let w: Vec<f64> = match weights {
        Some(w) if w.len() != coefs.len() => {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} studies",
                w.len(),
                coefs.len()
            )))
        }
        Some(w) => w.to_vec(),
        None if coefs.iter().all(|c| c.weight.is_some()) => {
            coefs.iter().map(|c| c.weight.unwrap_or(0.0)).collect()
        }
        None => vec![1.0; coefs.len()],
    };
    if w.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput("weights must be positive".into()));
    }
    let total: f64 = w.iter().sum();
    let a = coefs.iter().zip(&w).map(|(c, w)| c.effective_a() * w).sum::<f64>() / total;
    let b = coefs.iter().zip(&w).map(|(c, w)| c.b * w).sum::<f64>() / total;
    Ok(GrowthCoefficients {
        label: "Combined".into(),
        kind: first.kind,
        a,
        b,
        weight: None,
        convention: SignConvention::Direct,
    })
}

/// Global level response from a national quadratic `β₁·T + β₂·T²`.
///
/// Each country's function is shifted so that its own (pre-industrial)
/// temperature has no effect; the global coefficients are the 2015-GDP
/// weighted average, `a = Σ w (β₁ + 2β₂T_c)` and `b = β₂`.
pub fn global_level_response(label: &str, beta1: f64, beta2: f64, countries: &[CountryRecord]) -> Result<GrowthCoefficients> {
    let gdp: f64 = countries.iter().map(|c| c.gdp_2015).sum();
    if !(gdp > 0.0) {
        return Err(Error::InvalidInput("total GDP is zero".into()));
    }
    let a = countries
        .iter()
        .map(|c| c.gdp_2015 * (beta1 + 2.0 * beta2 * c.temperature))
        .sum::<f64>()
        / gdp;
    Ok(GrowthCoefficients::new(label, GrowthKind::Level, a, beta2))
}

pub const COEFFICIENT_HEADER: [&str; 5] = ["label", "kind", "a", "b", "weight"];

/// Parses `label,kind,a,b,weight[,convention]`; an empty weight is absent.
pub fn parse_coefficients(text: &str) -> Result<Vec<GrowthCoefficients>> {
    #[derive(Deserialize)]
    struct Row {
        label: String,
        kind: GrowthKind,
        a: f64,
        b: f64,
        weight: Option<f64>,
        #[serde(default)]
        convention: Option<SignConvention>,
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::schema(1, e.to_string()))?
        .clone();
    if header.iter().take(5).ne(COEFFICIENT_HEADER.iter().copied()) {
        return Err(Error::schema(
            1,
            format!("expected header `{}`", COEFFICIENT_HEADER.join(",")),
        ));
    }
    let mut out = Vec::new();
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(|e| {
            Error::schema(e.position().map(|p| p.line()).unwrap_or(0), e.to_string())
        })?;
        if !row.a.is_finite() || !row.b.is_finite() {
            return Err(Error::InvalidInput(format!("{}: non-finite coefficient", row.label)));
        }
        out.push(GrowthCoefficients {
            label: row.label,
            kind: row.kind,
            a: row.a,
            b: row.b,
            weight: row.weight,
            convention: row.convention.unwrap_or_default(),
        });
    }
    Ok(out)
}

pub fn load_coefficients(path: impl AsRef<Path>) -> Result<Vec<GrowthCoefficients>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_coefficients(&text)
}

/// Annual warming path, °C above pre-industrial.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmingPath {
    pub years: Vec<i32>,
    pub temperature: Vec<f64>,
}

impl Default for WarmingPath {
    /// 1.1 °C in 2020, rising 0.04 °C a year to 4.3 °C in 2100.
    fn default() -> Self {
        WarmingPath::linear(2020, 2100, 1.1, 0.04)
    }
}

impl WarmingPath {
    pub fn linear(first: i32, last: i32, start: f64, rate: f64) -> Self {
        let years: Vec<i32> = (first..=last).collect();
        let temperature = years
            .iter()
            .map(|y| start + rate * (y - first) as f64)
            .collect();
        WarmingPath { years, temperature }
    }

    pub fn new(years: Vec<i32>, temperature: Vec<f64>) -> Result<Self> {
        if years.len() != temperature.len() || years.len() < 2 {
            return Err(Error::InvalidInput(
                "a path needs at least two years and one temperature per year".into(),
            ));
        }
        if years.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::InvalidInput("path years must be contiguous".into()));
        }
        if temperature.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("non-finite temperature".into()));
        }
        Ok(WarmingPath { years, temperature })
    }

    pub fn final_temperature(&self) -> f64 {
        *self.temperature.last().expect("non-empty path")
    }
}

/// Output lost by the end of the path through the growth effects implied by
/// a level-impact curve.
///
/// Every year's market damage `D_t = −share · curve(T_t)/100` launches its
/// own decaying train of growth reductions; the trains superpose.
pub fn accumulate_implied<C: DamageCurve + ?Sized>(
    curve: &C,
    path: &WarmingPath,
    params: &SolowParams,
    market_share: f64,
) -> Result<f64> {
    params.validate()?;
    if !(0.0..=1.0).contains(&market_share) {
        return Err(Error::InvalidInput(format!(
            "market share {market_share} outside [0, 1]"
        )));
    }
    let shocks: Vec<f64> = path
        .temperature
        .iter()
        .map(|&t| {
            let v = curve.impact_at(t);
            if !v.is_finite() {
                return Err(Error::Numerical(format!("curve undefined at {t} °C")));
            }
            let d = -market_share * v / 100.0;
            if d <= -1.0 {
                return Err(Error::Numerical(format!("damage {d} at {t} °C")));
            }
            Ok(d / (1.0 + d))
        })
        .collect::<Result<_>>()?;
    let x = params.decay();
    let mut output = 1.0;
    // train[j] = Σ_{i<j} x^{j−i} s_i, updated recursively
    let mut train = 0.0;
    for shock in &shocks[..shocks.len() - 1] {
        train = x * (train + shock);
        output *= 1.0 - train;
    }
    Ok(1.0 - output)
}

/// Output lost by the end of the path with an empirical growth response.
///
/// Level effects compound as `Π (1 + a·T + b·T²)`. Change effects enter
/// log output, each year adding `a·ΔT + b·T̄·ΔT` with `T̄` the mid-year
/// temperature, so a path that returns to its start returns output to the
/// counterfactual.
pub fn accumulate_empirical(coef: &GrowthCoefficients, path: &WarmingPath) -> Result<f64> {
    let index = output_index(coef, &path.temperature)?;
    Ok(1.0 - index.last().copied().unwrap_or(1.0))
}

/// Output relative to the no-warming counterfactual along `temperature`,
/// one value per year, starting at 1.
pub fn output_index(coef: &GrowthCoefficients, temperature: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(temperature.len());
    out.push(1.0);
    match coef.kind {
        GrowthKind::Level => {
            let mut level = 1.0;
            for &t in &temperature[1..] {
                let g = level_growth_effect(coef, t)?;
                if g <= -1.0 {
                    return Err(Error::Numerical(format!(
                        "{}: growth collapses at {t} °C",
                        coef.label
                    )));
                }
                level *= 1.0 + g;
                out.push(level);
            }
        }
        GrowthKind::Change => {
            let mut log_level = 0.0;
            for w in temperature.windows(2) {
                let dt = w[1] - w[0];
                log_level += change_growth_effect(coef, 0.5 * (w[0] + w[1]), dt)?;
                out.push(log_level.exp());
            }
        }
    }
    Ok(out)
}

/// Two-sided 67% normal interval half-width in standard deviations.
pub const Z67: f64 = 0.974;

/// One column of the four-way comparison: central output loss and an
/// indicative 67% interval, all in percent of GDP.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonColumn {
    pub label: &'static str,
    pub central: f64,
    pub lower: f64,
    pub upper: f64,
}

/// The four estimates of end-of-path output loss.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthComparison {
    pub comparative_static: ComparisonColumn,
    pub implied_growth: ComparisonColumn,
    pub level_empirical: ComparisonColumn,
    pub change_empirical: ComparisonColumn,
}

impl GrowthComparison {
    pub fn columns(&self) -> [&ComparisonColumn; 4] {
        [
            &self.comparative_static,
            &self.implied_growth,
            &self.level_empirical,
            &self.change_empirical,
        ]
    }
}

/// Settings of the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSetup {
    pub path: WarmingPath,
    pub params: SolowParams,
    pub market_share: f64,
}

impl Default for ComparisonSetup {
    fn default() -> Self {
        ComparisonSetup {
            path: WarmingPath::default(),
            params: SolowParams::default(),
            market_share: 0.39,
        }
    }
}

/// Builds the four columns.
///
/// The comparative-static and implied-growth intervals shift the averaged
/// curve by the band's one-standard-deviation slopes. The empirical
/// intervals are the combined gap plus or minus the standard error of a
/// weighted mean, `√Σ(wᵢ(gᵢ − ḡ))² / Σwᵢ`, over the individual studies.
pub fn compare_growth(
    average: &ModelAverage,
    band: &ConfidenceBand,
    level: &[GrowthCoefficients],
    change: &[GrowthCoefficients],
    setup: &ComparisonSetup,
) -> Result<GrowthComparison> {
    let share = setup.market_share;
    let t_end = setup.path.final_temperature();
    let pessimistic = |t: f64| average.evaluate(t) - Z67 * band.sd_neg_per_degree * t.abs();
    let optimistic = |t: f64| average.evaluate(t) + Z67 * band.sd_pos_per_degree * t.abs();

    let static_loss = |c: &dyn Fn(f64) -> f64| -share * c(t_end);
    let comparative_static = ComparisonColumn {
        label: "comparative_static",
        central: static_loss(&|t| average.evaluate(t)),
        lower: static_loss(&optimistic),
        upper: static_loss(&pessimistic),
    };
    let implied = |c: &dyn Fn(f64) -> f64| -> Result<f64> {
        Ok(100.0 * accumulate_implied(&c, &setup.path, &setup.params, share)?)
    };
    let implied_growth = ComparisonColumn {
        label: "implied_growth",
        central: implied(&|t| average.evaluate(t))?,
        lower: implied(&optimistic)?,
        upper: implied(&pessimistic)?,
    };
    Ok(GrowthComparison {
        comparative_static,
        implied_growth,
        level_empirical: empirical_column("level_empirical", level, &setup.path)?,
        change_empirical: empirical_column("change_empirical", change, &setup.path)?,
    })
}

fn empirical_column(label: &'static str, studies: &[GrowthCoefficients], path: &WarmingPath) -> Result<ComparisonColumn> {
    let combined = combine_studies(studies, None)?;
    let central = 100.0 * accumulate_empirical(&combined, path)?;
    let weights: Vec<f64> = studies.iter().map(|s| s.weight.unwrap_or(1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut spread = 0.0;
    for (s, w) in studies.iter().zip(&weights) {
        let gap = 100.0 * accumulate_empirical(s, path)?;
        spread += (w * (gap - central)).powi(2);
    }
    let sd = spread.sqrt() / total;
    Ok(ComparisonColumn {
        label,
        central,
        lower: central - sd,
        upper: central + sd,
    })
}
