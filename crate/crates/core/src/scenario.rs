//! Socio-economic and emissions scenario on an annual grid.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// One anchor year of a scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ScenarioAnchor {
    pub year: i32,
    #[serde(rename = "gdp_usd")]
    pub gdp: f64,
    pub population: f64,
    #[serde(rename = "emissions_gtc")]
    pub emissions: f64,
}

/// Annual GDP (USD/yr), population and CO₂ emissions (GtC/yr).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub years: Vec<i32>,
    pub gdp: Vec<f64>,
    pub population: Vec<f64>,
    pub emissions: Vec<f64>,
}

impl Scenario {
    /// Builds the annual grid from anchors by linear interpolation.
    pub fn from_anchors(anchors: &[ScenarioAnchor]) -> Result<Self> {
        if anchors.len() < 2 {
            return Err(Error::InvalidInput("a scenario needs at least two anchor years".into()));
        }
        if anchors.windows(2).any(|w| w[1].year <= w[0].year) {
            return Err(Error::InvalidInput("anchor years must increase".into()));
        }
        for a in anchors {
            if !(a.gdp > 0.0) || !(a.population > 0.0) || !a.gdp.is_finite() || !a.population.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{}: GDP and population must be positive",
                    a.year
                )));
            }
            if !a.emissions.is_finite() {
                return Err(Error::InvalidInput(format!("{}: non-finite emissions", a.year)));
            }
        }
        let first = anchors[0].year;
        let last = anchors[anchors.len() - 1].year;
        let mut s = Scenario {
            years: (first..=last).collect(),
            gdp: Vec::new(),
            population: Vec::new(),
            emissions: Vec::new(),
        };
        for &year in &s.years {
            let k = anchors.partition_point(|a| a.year <= year).clamp(1, anchors.len() - 1);
            let (lo, hi) = (anchors[k - 1], anchors[k]);
            let f = (year - lo.year) as f64 / (hi.year - lo.year) as f64;
            let lerp = |a: f64, b: f64| a + f * (b - a);
            s.gdp.push(lerp(lo.gdp, hi.gdp));
            s.population.push(lerp(lo.population, hi.population));
            s.emissions.push(lerp(lo.emissions, hi.emissions));
        }
        Ok(s)
    }

    /// Same path with every year's emissions set to zero.
    pub fn without_emissions(&self) -> Self {
        Scenario {
            emissions: vec![0.0; self.years.len()],
            ..self.clone()
        }
    }

    /// Truncates the scenario after `last_year`.
    pub fn until(&self, last_year: i32) -> Result<Self> {
        let n = self.years.iter().take_while(|y| **y <= last_year).count();
        if n < 2 {
            return Err(Error::InvalidInput(format!("horizon {last_year} leaves no scenario")));
        }
        Ok(Scenario {
            years: self.years[..n].to_vec(),
            gdp: self.gdp[..n].to_vec(),
            population: self.population[..n].to_vec(),
            emissions: self.emissions[..n].to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn index_of(&self, year: i32) -> Option<usize> {
        let first = *self.years.first()?;
        let i = usize::try_from(year - first).ok()?;
        (i < self.years.len()).then_some(i)
    }

    /// Per-capita income growth from the previous year; zero in the first.
    pub fn per_capita_growth(&self) -> Vec<f64> {
        let pc: Vec<f64> = self.gdp.iter().zip(&self.population).map(|(g, p)| g / p).collect();
        std::iter::once(0.0)
            .chain(pc.windows(2).map(|w| w[1] / w[0] - 1.0))
            .collect()
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let anchors: Vec<ScenarioAnchor> = reader
        .deserialize()
        .map(|r| {
            r.map_err(|e: csv::Error| {
                Error::schema(e.position().map(|p| p.line()).unwrap_or(0), e.to_string())
            })
        })
        .collect::<Result<_>>()?;
    Scenario::from_anchors(&anchors)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_between_anchors() {
        let s = parse_scenario("year,gdp_usd,population,emissions_gtc\n2010,10,1,5\n2020,20,2,0\n").unwrap();
        assert_eq!(s.len(), 11);
        assert_eq!(s.gdp[5], 15.0);
        assert_eq!(s.emissions[10], 0.0);
        assert_eq!(s.index_of(2013), Some(3));
        assert_eq!(s.index_of(2021), None);
    }

    #[test]
    fn rejects_non_positive_gdp() {
        assert!(parse_scenario("year,gdp_usd,population,emissions_gtc\n2010,0,1,5\n2020,20,2,0\n").is_err());
    }

    #[test]
    fn growth_starts_at_zero() {
        let s = parse_scenario("year,gdp_usd,population,emissions_gtc\n2010,100,1,0\n2011,110,1,0\n").unwrap();
        let g = s.per_capita_growth();
        assert_eq!(g[0], 0.0);
        assert!((g[1] - 0.1).abs() < 1e-12);
    }
}
