//! Regional regression of impacts on income and temperature, and
//! downscaling of global totals to countries.
//!
//! The regression is
//!
//! ```text
//! I_r = α_s + β_y · ln y_r + β_T · T_r
//! ```
//!
//! with one intercept per study. Downscaling evaluates the slopes for every
//! country, then shifts each study's national values by a constant so that
//! their GDP-weighted mean equals the study's own total.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::damage::DamageCurve;
use crate::error::{Error, Result};
use crate::estimates::EstimateCatalogue;
use crate::sector::rescale_impact;

/// One country: income (market-exchange USD per person per year), annual
/// mean temperature (°C) and GDP (USD) used as aggregation weight.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CountryRecord {
    pub country_id: String,
    #[serde(rename = "income_usd")]
    pub income: f64,
    #[serde(rename = "temp_c")]
    pub temperature: f64,
    #[serde(rename = "gdp2015_usd")]
    pub gdp_2015: f64,
}

impl CountryRecord {
    /// Population implied by GDP over income.
    pub fn population(&self) -> f64 {
        self.gdp_2015 / self.income
    }

    fn validate(&self) -> Result<()> {
        if !(self.income > 0.0) || !self.income.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{}: income must be positive",
                self.country_id
            )));
        }
        if !self.temperature.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{}: temperature must be finite",
                self.country_id
            )));
        }
        if !(self.gdp_2015 >= 0.0) || !self.gdp_2015.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{}: GDP must be non-negative",
                self.country_id
            )));
        }
        Ok(())
    }
}

/// A study's impact for one region (or one country).
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct RegionalEstimate {
    pub study_id: String,
    pub region_id: String,
    #[serde(rename = "impact_pct")]
    pub impact: f64,
    #[serde(rename = "warming_c")]
    pub warming: f64,
}

fn read_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .map(|r| {
            r.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                Error::schema(line, e.to_string())
            })
        })
        .collect()
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn parse_countries(text: &str) -> Result<Vec<CountryRecord>> {
    let rows: Vec<CountryRecord> = read_csv(text)?;
    if rows.is_empty() {
        return Err(Error::InvalidInput("country table is empty".into()));
    }
    for r in &rows {
        r.validate()?;
    }
    Ok(rows)
}

pub fn load_countries(path: impl AsRef<Path>) -> Result<Vec<CountryRecord>> {
    parse_countries(&read_file(path.as_ref())?)
}

pub fn parse_regional_estimates(text: &str) -> Result<Vec<RegionalEstimate>> {
    let rows: Vec<RegionalEstimate> = read_csv(text)?;
    if rows.iter().any(|r| !r.impact.is_finite() || !r.warming.is_finite()) {
        return Err(Error::InvalidInput("non-finite regional estimate".into()));
    }
    Ok(rows)
}

pub fn load_regional_estimates(path: impl AsRef<Path>) -> Result<Vec<RegionalEstimate>> {
    parse_regional_estimates(&read_file(path.as_ref())?)
}

/// Region membership, `region_id → country_ids`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegionMap {
    members: BTreeMap<String, Vec<String>>,
}

impl RegionMap {
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            region_id: String,
            country_id: String,
        }
        let mut members: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for r in read_csv::<Row>(text)? {
            members.entry(r.region_id).or_default().push(r.country_id);
        }
        Ok(RegionMap { members })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?)
    }

    pub fn members(&self, region: &str) -> Option<&[String]> {
        self.members.get(region).map(Vec::as_slice)
    }
}

/// Income and temperature of a region: income is total GDP over total
/// population, temperature is population-weighted.
///
/// A region id equal to a country id stands for that country.
pub fn region_covariates(
    region: &str,
    countries: &[CountryRecord],
    regions: &RegionMap,
) -> Result<(f64, f64)> {
    let by_id: HashMap<&str, &CountryRecord> =
        countries.iter().map(|c| (c.country_id.as_str(), c)).collect();
    let ids: Vec<&str> = match regions.members(region) {
        Some(m) => m.iter().map(String::as_str).collect(),
        None => vec![region],
    };
    let mut gdp = 0.0;
    let mut pop = 0.0;
    let mut temp = 0.0;
    for id in ids {
        let c = by_id
            .get(id)
            .ok_or_else(|| Error::InvalidInput(format!("region `{region}`: unknown country `{id}`")))?;
        gdp += c.gdp_2015;
        pop += c.population();
        temp += c.population() * c.temperature;
    }
    if pop <= 0.0 {
        return Err(Error::InvalidInput(format!("region `{region}` has no population")));
    }
    Ok((gdp / pop, temp / pop))
}

/// Fitted regional regression.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionalModel {
    /// %GDP per unit of ln(income).
    pub income_coef: f64,
    /// %GDP per °C of local temperature.
    pub temp_coef: f64,
    pub income_se: f64,
    pub temp_se: f64,
    pub study_intercepts: BTreeMap<String, f64>,
}

impl Default for RegionalModel {
    fn default() -> Self {
        RegionalModel {
            income_coef: 1.87,
            temp_coef: -0.39,
            income_se: 0.52,
            temp_se: 0.09,
            study_intercepts: BTreeMap::new(),
        }
    }
}

impl RegionalModel {
    /// Slope part of the prediction, without the study intercept.
    pub fn slope_term(&self, income: f64, temperature: f64) -> f64 {
        self.income_coef * income.ln() + self.temp_coef * temperature
    }

    pub fn predict(&self, study: &str, income: f64, temperature: f64) -> f64 {
        self.study_intercepts.get(study).copied().unwrap_or(0.0) + self.slope_term(income, temperature)
    }
}

/// Ordinary least squares with one dummy per study.
pub fn fit_regional(
    estimates: &[RegionalEstimate],
    countries: &[CountryRecord],
    regions: &RegionMap,
) -> Result<RegionalModel> {
    let studies: Vec<&str> = {
        let mut s: Vec<&str> = estimates.iter().map(|e| e.study_id.as_str()).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    if studies.len() < 2 {
        return Err(Error::InvalidInput(
            "regional regression needs at least two studies".into(),
        ));
    }
    let n = estimates.len();
    let k = studies.len() + 2;
    if n <= k {
        return Err(Error::Degenerate(format!(
            "{n} observations for {k} parameters"
        )));
    }
    let mut x = DMatrix::zeros(n, k);
    let mut y = DVector::zeros(n);
    for (i, e) in estimates.iter().enumerate() {
        let (income, temp) = region_covariates(&e.region_id, countries, regions)?;
        let s = studies.binary_search(&e.study_id.as_str()).expect("study listed");
        x[(i, s)] = 1.0;
        x[(i, k - 2)] = income.ln();
        x[(i, k - 1)] = temp;
        y[i] = e.impact;
    }
    let xtx = x.transpose() * &x;
    let svd = xtx.clone().svd(false, false);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > smax * 1e-12) {
        return Err(Error::Degenerate("regressors are collinear".into()));
    }
    let inv = xtx
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("regressors are collinear".into()))?;
    let beta = &inv * x.transpose() * &y;
    let resid = &y - &x * &beta;
    let sigma2 = resid.norm_squared() / (n - k) as f64;
    let se = |j: usize| (sigma2 * inv[(j, j)]).max(0.0).sqrt();
    Ok(RegionalModel {
        income_coef: beta[k - 2],
        temp_coef: beta[k - 1],
        income_se: se(k - 2),
        temp_se: se(k - 1),
        study_intercepts: studies
            .iter()
            .enumerate()
            .map(|(j, s)| (s.to_string(), beta[j]))
            .collect(),
    })
}

/// A study's global total impact and the warming it refers to.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyTotal {
    pub study_id: String,
    pub total: f64,
    pub warming: f64,
}

/// One total per study: the estimate closest to `target` °C among those
/// with positive warming, ties going to the first listed.
pub fn study_totals_near(catalogue: &EstimateCatalogue, target: f64) -> Vec<StudyTotal> {
    let mut best: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    for e in catalogue.estimates().iter().filter(|e| e.warming > 0.0) {
        let gap = (e.warming - target).abs();
        match best.get(e.study_id.as_str()) {
            Some((w, _)) if (w - target).abs() <= gap => {}
            _ => {
                best.insert(&e.study_id, (e.warming, e.impact));
            }
        }
    }
    best.into_iter()
        .map(|(id, (warming, total))| StudyTotal {
            study_id: id.to_string(),
            total,
            warming,
        })
        .collect()
}

/// Downscaled impact of one country across studies.
#[derive(Debug, Clone, PartialEq)]
pub struct NationalImpact {
    pub country_id: String,
    pub mean: f64,
    /// Sample standard deviation across studies, zero for a single study.
    pub sd: f64,
}

/// National impacts of one study, matched to `total` and not rescaled.
pub fn downscale_study(model: &RegionalModel, total: f64, countries: &[CountryRecord]) -> Result<Vec<f64>> {
    if countries.is_empty() {
        return Err(Error::InvalidInput("no countries to downscale to".into()));
    }
    let gdp: f64 = countries.iter().map(|c| c.gdp_2015).sum();
    if !(gdp > 0.0) {
        return Err(Error::InvalidInput("total GDP is zero".into()));
    }
    let raw: Vec<f64> = countries
        .iter()
        .map(|c| model.slope_term(c.income, c.temperature))
        .collect();
    let weighted: f64 = raw.iter().zip(countries).map(|(r, c)| r * c.gdp_2015).sum::<f64>() / gdp;
    let shift = total - weighted;
    Ok(raw.into_iter().map(|r| r + shift).collect())
}

/// Downscales every study total, rescales to `to_t` along `curve`, and
/// summarizes across studies per country.
pub fn downscale<C: DamageCurve + ?Sized>(
    model: &RegionalModel,
    totals: &[StudyTotal],
    countries: &[CountryRecord],
    to_t: f64,
    curve: &C,
) -> Result<Vec<NationalImpact>> {
    if totals.is_empty() {
        return Err(Error::InvalidInput("no study totals to downscale".into()));
    }
    let mut per_study = Vec::with_capacity(totals.len());
    for t in totals {
        let factor = rescale_impact(1.0, t.warming, to_t, curve)?;
        let national = downscale_study(model, t.total, countries)?;
        per_study.push(national.into_iter().map(|v| v * factor).collect::<Vec<f64>>());
    }
    let m = per_study.len() as f64;
    Ok(countries
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let vals = per_study.iter().map(|s| s[i]);
            let mean = vals.clone().sum::<f64>() / m;
            let sd = if per_study.len() > 1 {
                (vals.map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
            } else {
                0.0
            };
            NationalImpact {
                country_id: c.country_id.clone(),
                mean,
                sd,
            }
        })
        .collect())
}

/// GDP-weighted mean of national values.
pub fn gdp_weighted_mean(values: &[f64], countries: &[CountryRecord]) -> f64 {
    let gdp: f64 = countries.iter().map(|c| c.gdp_2015).sum();
    values.iter().zip(countries).map(|(v, c)| v * c.gdp_2015).sum::<f64>() / gdp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn country(id: &str, income: f64, temp: f64, gdp: f64) -> CountryRecord {
        CountryRecord {
            country_id: id.into(),
            income,
            temperature: temp,
            gdp_2015: gdp,
        }
    }

    #[test]
    fn single_country_takes_study_total() {
        let c = [country("X", 5000.0, 20.0, 1e11)];
        let out = downscale_study(&RegionalModel::default(), -1.7, &c).unwrap();
        assert!((out[0] + 1.7).abs() < 1e-12);
    }

    #[test]
    fn shift_preserves_slopes() {
        let c = [
            country("A", 50000.0, 10.0, 2e13),
            country("B", 1000.0, 27.0, 1e11),
        ];
        let m = RegionalModel::default();
        let out = downscale_study(&m, -2.0, &c).unwrap();
        let gap = out[0] - out[1];
        let expected = m.slope_term(50000.0, 10.0) - m.slope_term(1000.0, 27.0);
        assert!((gap - expected).abs() < 1e-12);
        assert!((gdp_weighted_mean(&out, &c) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_or_zero_gdp_rejected() {
        let m = RegionalModel::default();
        assert!(downscale_study(&m, -1.0, &[]).is_err());
        assert!(downscale_study(&m, -1.0, &[country("Z", 1.0, 1.0, 0.0)]).is_err());
    }

    #[test]
    fn region_covariates_weight_by_population() {
        let c = vec![country("A", 10000.0, 10.0, 1e12), country("B", 1000.0, 20.0, 1e11)];
        let regions = RegionMap::parse("region_id,country_id\nR,A\nR,B\n").unwrap();
        let (y, t) = region_covariates("R", &c, &regions).unwrap();
        // populations 1e8 and 1e8
        assert!((y - 5500.0).abs() < 1e-9);
        assert!((t - 15.0).abs() < 1e-12);
        let (y, _) = region_covariates("B", &c, &regions).unwrap();
        assert_eq!(y, 1000.0);
        assert!(region_covariates("Q", &c, &regions).is_err());
    }

    #[test]
    fn one_study_is_not_enough() {
        let c = vec![country("A", 10000.0, 10.0, 1e12)];
        let e = vec![RegionalEstimate {
            study_id: "S".into(),
            region_id: "A".into(),
            impact: -1.0,
            warming: 2.5,
        }];
        assert!(fit_regional(&e, &c, &RegionMap::default()).is_err());
    }
}
