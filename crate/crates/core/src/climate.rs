//! Carbon-cycle and temperature response.
//!
//! Emissions are distributed over five carbon boxes, each decaying with its
//! own lifetime. Equilibrium warming is `S · log₂(C / C_pre)`; realized
//! warming relaxes towards it with a single e-folding time.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClimateCore {
    pub box_fractions: [f64; 5],
    /// Years; `inf` for a permanent box.
    pub box_lifetimes: [f64; 5],
    pub ppm_per_gtc: f64,
    pub preindustrial_ppm: f64,
    pub initial_ppm: f64,
    /// Split of the initial excess concentration over the boxes.
    pub initial_box_shares: [f64; 5],
    /// °C above pre-industrial in the first scenario year.
    pub initial_warming: f64,
    /// °C per doubling of CO₂.
    pub sensitivity: f64,
    /// Years.
    pub temperature_timescale: f64,
}

impl Default for ClimateCore {
    fn default() -> Self {
        ClimateCore {
            box_fractions: [0.13, 0.20, 0.32, 0.25, 0.10],
            box_lifetimes: [f64::INFINITY, 363.0, 74.0, 17.0, 2.0],
            ppm_per_gtc: 0.471,
            preindustrial_ppm: 280.0,
            initial_ppm: 389.0,
            initial_box_shares: [0.5, 0.25, 0.15, 0.08, 0.02],
            initial_warming: 0.95,
            sensitivity: 3.0,
            temperature_timescale: 37.0,
        }
    }
}

impl ClimateCore {
    /// Starts from a pre-industrial equilibrium: no excess carbon, no warming.
    pub fn preindustrial(mut self) -> Self {
        self.initial_ppm = self.preindustrial_ppm;
        self.initial_warming = 0.0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit_sum = |v: &[f64; 5]| (v.iter().sum::<f64>() - 1.0).abs() < 1e-9;
        if self.box_fractions.iter().any(|f| *f < 0.0) || !unit_sum(&self.box_fractions) {
            return Err(Error::InvalidInput("box fractions must be non-negative and sum to 1".into()));
        }
        if self.initial_box_shares.iter().any(|f| *f < 0.0) || !unit_sum(&self.initial_box_shares) {
            return Err(Error::InvalidInput("initial box shares must be non-negative and sum to 1".into()));
        }
        if self.box_lifetimes.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::InvalidInput("box lifetimes must be positive".into()));
        }
        let positive = [
            self.ppm_per_gtc,
            self.preindustrial_ppm,
            self.initial_ppm,
            self.sensitivity,
            self.temperature_timescale,
        ];
        if positive.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput(
                "concentrations, sensitivity and timescale must be positive".into(),
            ));
        }
        if !self.initial_warming.is_finite() {
            return Err(Error::InvalidInput("initial warming must be finite".into()));
        }
        Ok(())
    }

    pub fn equilibrium_warming(&self, ppm: f64) -> f64 {
        self.sensitivity * (ppm / self.preindustrial_ppm).log2()
    }
}

pub fn parse_climate(text: &str) -> Result<ClimateCore> {
    let core: ClimateCore =
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("climate config: {e}")))?;
    core.validate()?;
    Ok(core)
}

pub fn load_climate(path: impl AsRef<Path>) -> Result<ClimateCore> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_climate(&text)
}

/// Concentration and warming by scenario year.
#[derive(Debug, Clone, PartialEq)]
pub struct ClimatePath {
    pub concentration: Vec<f64>,
    pub temperature: Vec<f64>,
}

/// Runs the climate core over the scenario's emissions.
pub fn run_climate(scenario: &Scenario, core: &ClimateCore) -> Result<ClimatePath> {
    run_climate_with(scenario, core, |_, e| e)
}

/// Runs the climate core with an extra `pulse_gtc` emitted in `pulse_year`.
pub fn run_climate_with_pulse(
    scenario: &Scenario,
    core: &ClimateCore,
    pulse_year: i32,
    pulse_gtc: f64,
) -> Result<ClimatePath> {
    run_climate_with(scenario, core, |year, e| if year == pulse_year { e + pulse_gtc } else { e })
}

fn run_climate_with<F: Fn(i32, f64) -> f64>(scenario: &Scenario, core: &ClimateCore, emissions: F) -> Result<ClimatePath> {
    core.validate()?;
    let excess = core.initial_ppm - core.preindustrial_ppm;
    let mut boxes: [f64; 5] = std::array::from_fn(|i| excess * core.initial_box_shares[i]);
    let retain: [f64; 5] = std::array::from_fn(|i| (-1.0 / core.box_lifetimes[i]).exp());
    let mut temp = core.initial_warming;
    let mut out = ClimatePath {
        concentration: Vec::with_capacity(scenario.len()),
        temperature: Vec::with_capacity(scenario.len()),
    };
    for (i, &year) in scenario.years.iter().enumerate() {
        if i > 0 {
            let e = emissions(year, scenario.emissions[i]);
            for k in 0..5 {
                boxes[k] = boxes[k] * retain[k] + core.box_fractions[k] * e * core.ppm_per_gtc;
            }
            let ppm = core.preindustrial_ppm + boxes.iter().sum::<f64>();
            if !(ppm > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "non-physical concentration {ppm} ppm in {year}"
                )));
            }
            temp += (core.equilibrium_warming(ppm) - temp) / core.temperature_timescale;
        }
        out.concentration
            .push(core.preindustrial_ppm + boxes.iter().sum::<f64>());
        out.temperature.push(temp);
    }
    Ok(out)
}
