//! Data tables shipped with the crate.
//!
//! Every table is compiled into the library, so the bundled analysis runs
//! without touching the filesystem. The same files live in the repository's
//! `data/` directory for inspection and editing.

use crate::climate::{parse_climate, ClimateCore};
use crate::error::Result;
use crate::estimates::{parse_catalogue, EstimateCatalogue};
use crate::growth::{parse_coefficients, GrowthCoefficients, GrowthKind};
use crate::regional::{parse_countries, parse_regional_estimates, CountryRecord, RegionMap, RegionalEstimate};
use crate::scenario::{parse_scenario, Scenario};
use crate::sector::{parse_sectors, SectorTable};

pub const ESTIMATES_CSV: &str = include_str!("../../../data/estimates.csv");
pub const SECTORS_CSV: &str = include_str!("../../../data/sectors.csv");
pub const COUNTRIES_CSV: &str = include_str!("../../../data/countries.csv");
pub const REGIONAL_ESTIMATES_CSV: &str = include_str!("../../../data/regional_estimates.csv");
pub const REGIONS_CSV: &str = include_str!("../../../data/regions.csv");
pub const GROWTH_COEFFICIENTS_CSV: &str = include_str!("../../../data/growth_coefficients.csv");
pub const SCENARIO_CSV: &str = include_str!("../../../data/scenario.csv");
pub const CLIMATE_TOML: &str = include_str!("../../../data/climate.toml");

/// The catalogue of primary estimates.
pub fn catalogue() -> EstimateCatalogue {
    parse_catalogue(ESTIMATES_CSV).expect("bundled catalogue parses")
}

pub fn sectors() -> SectorTable {
    parse_sectors(SECTORS_CSV).expect("bundled sector table parses")
}

pub fn countries() -> Vec<CountryRecord> {
    parse_countries(COUNTRIES_CSV).expect("bundled country table parses")
}

/// Synthetic regional sample for exercising the regression.
pub fn regional_estimates() -> Vec<RegionalEstimate> {
    parse_regional_estimates(REGIONAL_ESTIMATES_CSV).expect("bundled regional sample parses")
}

pub fn regions() -> RegionMap {
    RegionMap::parse(REGIONS_CSV).expect("bundled region map parses")
}

pub fn growth_coefficients() -> Vec<GrowthCoefficients> {
    parse_coefficients(GROWTH_COEFFICIENTS_CSV).expect("bundled coefficients parse")
}

/// Bundled coefficients of one kind, in file order.
pub fn growth_coefficients_of(kind: GrowthKind) -> Vec<GrowthCoefficients> {
    growth_coefficients().into_iter().filter(|c| c.kind == kind).collect()
}

pub fn scenario() -> Scenario {
    parse_scenario(SCENARIO_CSV).expect("bundled scenario parses")
}

pub fn climate() -> ClimateCore {
    parse_climate(CLIMATE_TOML).expect("bundled climate config parses")
}

/// Parses every bundled table, reporting the first failure.
pub fn check() -> Result<()> {
    parse_catalogue(ESTIMATES_CSV)?;
    parse_sectors(SECTORS_CSV)?;
    parse_countries(COUNTRIES_CSV)?;
    parse_regional_estimates(REGIONAL_ESTIMATES_CSV)?;
    RegionMap::parse(REGIONS_CSV)?;
    parse_coefficients(GROWTH_COEFFICIENTS_CSV)?;
    parse_scenario(SCENARIO_CSV)?;
    parse_climate(CLIMATE_TOML)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    #[test]
    fn bundled_tables_parse() {
        super::check().unwrap();
    }
}
