//! Social cost of carbon.
//!
//! The climate core is run twice, with and without a pulse of emissions.
//! The difference in damages is discounted with the Ramsey rule
//! `r_t = ρ + η·g_t` back to the pulse year and divided by the pulse size.

use crate::climate::{run_climate, run_climate_with_pulse, ClimateCore};
use crate::damage::{DamageCurve, DamageFunction};
use crate::error::{Error, Result};
use crate::estimates::EstimateCatalogue;
use crate::growth::{output_index, GrowthCoefficients};
use crate::scenario::Scenario;

/// Unit in which the social cost of carbon is reported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Numeraire {
    /// USD per tonne of carbon.
    #[default]
    PerTonneCarbon,
    /// USD per tonne of carbon dioxide.
    PerTonneCo2,
}

impl Numeraire {
    /// Conversion from USD per tonne of carbon.
    pub fn factor(self) -> f64 {
        match self {
            Numeraire::PerTonneCarbon => 1.0,
            Numeraire::PerTonneCo2 => 12.0 / 44.0,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Numeraire::PerTonneCarbon => "USD/tC",
            Numeraire::PerTonneCo2 => "USD/tCO2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SccConfig {
    /// Pure rate of time preference per year.
    pub prtp: f64,
    /// Elasticity of marginal utility.
    pub eta: f64,
    pub pulse_year: i32,
    pub pulse_gtc: f64,
    /// Last year counted.
    pub horizon: i32,
    pub numeraire: Numeraire,
}

impl Default for SccConfig {
    fn default() -> Self {
        SccConfig {
            prtp: 0.01,
            eta: 1.0,
            pulse_year: 2015,
            pulse_gtc: 1.0,
            horizon: 2300,
            numeraire: Numeraire::PerTonneCarbon,
        }
    }
}

impl SccConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.prtp >= 0.0) || !(self.eta >= 0.0) {
            return Err(Error::InvalidInput("prtp and eta must be non-negative".into()));
        }
        if !(self.pulse_gtc > 0.0) {
            return Err(Error::InvalidInput("pulse size must be positive".into()));
        }
        Ok(())
    }
}

/// Scenario, base and pulsed warming paths and discount factors, computed
/// once and shared by every evaluation.
#[derive(Debug, Clone)]
pub struct SccContext {
    pub scenario: Scenario,
    pub config: SccConfig,
    pub base_temperature: Vec<f64>,
    pub pulse_temperature: Vec<f64>,
    /// One in the pulse year, zero before it.
    pub discount: Vec<f64>,
}

impl SccContext {
    pub fn new(scenario: &Scenario, core: &ClimateCore, config: &SccConfig) -> Result<Self> {
        config.validate()?;
        let scenario = scenario.until(config.horizon)?;
        let start = scenario
            .index_of(config.pulse_year)
            .ok_or_else(|| Error::InvalidInput(format!("pulse year {} outside the scenario", config.pulse_year)))?;
        let base = run_climate(&scenario, core)?;
        let pulsed = run_climate_with_pulse(&scenario, core, config.pulse_year, config.pulse_gtc)?;
        let growth = scenario.per_capita_growth();
        let mut discount = vec![0.0; scenario.len()];
        discount[start] = 1.0;
        for i in start + 1..scenario.len() {
            let rate = 1.0 + config.prtp + config.eta * growth[i];
            if !(rate > 0.0) {
                return Err(Error::Numerical(format!(
                    "discount rate not positive in {}",
                    scenario.years[i]
                )));
            }
            discount[i] = discount[i - 1] / rate;
        }
        Ok(SccContext {
            scenario,
            config: config.clone(),
            base_temperature: base.temperature,
            pulse_temperature: pulsed.temperature,
            discount,
        })
    }

    fn finish(&self, marginal: impl Iterator<Item = f64>) -> f64 {
        let usd: f64 = marginal.zip(&self.discount).map(|(d, df)| d * df).sum();
        usd / (self.config.pulse_gtc * 1e9) * self.config.numeraire.factor()
    }

    /// Social cost of carbon for a level-impact curve (percent of GDP).
    pub fn from_curve<C: DamageCurve + ?Sized>(&self, curve: &C) -> Result<f64> {
        let mut marginal = Vec::with_capacity(self.scenario.len());
        for i in 0..self.scenario.len() {
            let base = curve.impact_at(self.base_temperature[i]);
            let pulsed = curve.impact_at(self.pulse_temperature[i]);
            if !base.is_finite() || !pulsed.is_finite() || base <= -100.0 || pulsed <= -100.0 {
                return Err(Error::Numerical(format!(
                    "damages diverge in {}",
                    self.scenario.years[i]
                )));
            }
            marginal.push((base - pulsed) / 100.0 * self.scenario.gdp[i]);
        }
        Ok(self.finish(marginal.into_iter()))
    }

    /// Social cost of carbon for an empirical growth response.
    pub fn from_growth(&self, coef: &GrowthCoefficients) -> Result<f64> {
        let base = output_index(coef, &self.base_temperature)?;
        let pulsed = output_index(coef, &self.pulse_temperature)?;
        if base.iter().chain(&pulsed).any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Numerical(format!("{}: output collapses", coef.label)));
        }
        let gdp = &self.scenario.gdp;
        Ok(self.finish((0..gdp.len()).map(|i| (base[i] - pulsed[i]) * gdp[i])))
    }
}

pub fn scc_from_curve<C: DamageCurve + ?Sized>(
    curve: &C,
    scenario: &Scenario,
    core: &ClimateCore,
    config: &SccConfig,
) -> Result<f64> {
    SccContext::new(scenario, core, config)?.from_curve(curve)
}

pub fn scc_from_growth(
    coef: &GrowthCoefficients,
    scenario: &Scenario,
    core: &ClimateCore,
    config: &SccConfig,
) -> Result<f64> {
    SccContext::new(scenario, core, config)?.from_growth(coef)
}

/// Social cost of carbon of a quadratic curve through one estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateScc {
    pub study_id: String,
    pub label: String,
    pub warming: f64,
    pub impact: f64,
    /// `impact / warming²`.
    pub coefficient: f64,
    pub weight: f64,
    pub scc: f64,
}

/// Fits `impact = c·T²` through every estimate and prices each curve.
pub fn scc_per_estimate(catalogue: &EstimateCatalogue, ctx: &SccContext) -> Result<Vec<EstimateScc>> {
    catalogue
        .iter()
        .map(|(e, w)| {
            if e.warming == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{}: zero warming cannot anchor a curve",
                    e.study_id
                )));
            }
            let coefficient = e.impact / (e.warming * e.warming);
            Ok(EstimateScc {
                study_id: e.study_id.clone(),
                label: e.label.clone(),
                warming: e.warming,
                impact: e.impact,
                coefficient,
                weight: w,
                scc: ctx.from_curve(&DamageFunction::quadratic(coefficient))?,
            })
        })
        .collect()
}

/// Catalogue-weighted mean of the per-estimate values.
pub fn weighted_mean_scc(rows: &[EstimateScc]) -> f64 {
    let total: f64 = rows.iter().map(|r| r.weight).sum();
    rows.iter().map(|r| r.weight * r.scc).sum::<f64>() / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioAnchor;

    fn scenario() -> Scenario {
        let a = |year, gdp: f64, emissions| ScenarioAnchor {
            year,
            gdp,
            population: 1e9,
            emissions,
        };
        Scenario::from_anchors(&[a(2010, 6e13, 10.0), a(2100, 3e14, 15.0), a(2300, 1e15, 0.0)]).unwrap()
    }

    #[test]
    fn zero_curve_costs_nothing() {
        let v = scc_from_curve(&|_t: f64| 0.0, &scenario(), &ClimateCore::default(), &SccConfig::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn co2_numeraire_scales() {
        let ctx = SccContext::new(&scenario(), &ClimateCore::default(), &SccConfig::default()).unwrap();
        let c = SccContext::new(
            &scenario(),
            &ClimateCore::default(),
            &SccConfig {
                numeraire: Numeraire::PerTonneCo2,
                ..SccConfig::default()
            },
        )
        .unwrap();
        let curve = DamageFunction::quadratic(-0.2);
        let ratio = c.from_curve(&curve).unwrap() / ctx.from_curve(&curve).unwrap();
        assert!((ratio - 12.0 / 44.0).abs() < 1e-12);
    }

    #[test]
    fn pulse_outside_scenario_rejected() {
        let cfg = SccConfig {
            pulse_year: 1990,
            ..SccConfig::default()
        };
        assert!(SccContext::new(&scenario(), &ClimateCore::default(), &cfg).is_err());
    }

    #[test]
    fn zero_warming_estimate_rejected() {
        use crate::estimates::{Method, PrimaryEstimate};
        let cat = EstimateCatalogue::new(vec![PrimaryEstimate::new("A", 0.0, 0.0, Method::Cge)]).unwrap();
        let ctx = SccContext::new(&scenario(), &ClimateCore::default(), &SccConfig::default()).unwrap();
        assert!(scc_per_estimate(&cat, &ctx).is_err());
    }
}
