//! Catalogue of primary estimates of the total impact of climate change.
//!
//! Each row is one comparative-static estimate: a warming level (°C above
//! pre-industrial) and the welfare-equivalent income change it causes, in
//! percent of GDP. Negative impacts are losses. Optional uncertainty comes
//! either as a standard deviation or as a min/max interval.
//!
//! Estimates are weighted so that every study carries a total weight of one,
//! split equally over its estimates.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Header of the estimates CSV file.
pub const CATALOGUE_HEADER: [&str; 8] = [
    "study_id",
    "label",
    "warming_c",
    "impact_pct",
    "sd_pct",
    "min_pct",
    "max_pct",
    "method",
];

/// How a primary estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Enumerative,
    Elicitation,
    Econometric,
    Cge,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Enumerative,
        Method::Elicitation,
        Method::Econometric,
        Method::Cge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Enumerative => "enumerative",
            Method::Elicitation => "elicitation",
            Method::Econometric => "econometric",
            Method::Cge => "cge",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts the full names and the abbreviations used in printed tables
    /// (`enum`, `elicit`, `ectric`).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "enumerative" | "enum" => Ok(Method::Enumerative),
            "elicitation" | "elicit" => Ok(Method::Elicitation),
            "econometric" | "ectric" => Ok(Method::Econometric),
            "cge" => Ok(Method::Cge),
            other => Err(Error::InvalidInput(format!("unknown method `{other}`"))),
        }
    }
}

/// One estimate of the comparative-static impact of warming.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimaryEstimate {
    pub study_id: String,
    pub label: String,
    /// °C above pre-industrial.
    pub warming: f64,
    /// Percent of GDP, negative = loss.
    pub impact: f64,
    pub sd: Option<f64>,
    pub min_impact: Option<f64>,
    pub max_impact: Option<f64>,
    pub method: Method,
}

impl PrimaryEstimate {
    pub fn new(study_id: &str, warming: f64, impact: f64, method: Method) -> Self {
        PrimaryEstimate {
            study_id: study_id.to_string(),
            label: study_id.to_string(),
            warming,
            impact,
            sd: None,
            min_impact: None,
            max_impact: None,
            method,
        }
    }

    pub fn with_sd(mut self, sd: f64) -> Self {
        self.sd = Some(sd);
        self
    }

    pub fn with_range(mut self, min: f64, max: f64) -> Self {
        self.min_impact = Some(min);
        self.max_impact = Some(max);
        self
    }

    /// True when the estimate reports any uncertainty information.
    pub fn is_uncertain(&self) -> bool {
        self.sd.is_some() || self.min_impact.is_some() || self.max_impact.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if self.study_id.trim().is_empty() {
            return Err(Error::InvalidInput("empty study_id".into()));
        }
        if !self.warming.is_finite() || !self.impact.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{}: warming and impact must be finite",
                self.study_id
            )));
        }
        if let Some(sd) = self.sd {
            if !(sd >= 0.0) || !sd.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{}: negative or non-finite sd {sd}",
                    self.study_id
                )));
            }
        }
        for v in [self.min_impact, self.max_impact].into_iter().flatten() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{}: non-finite bound",
                    self.study_id
                )));
            }
        }
        if let (Some(lo), Some(hi)) = (self.min_impact, self.max_impact) {
            if !(lo <= self.impact && self.impact <= hi) {
                return Err(Error::InvalidInput(format!(
                    "{}: impact {} outside [{lo}, {hi}]",
                    self.study_id, self.impact
                )));
            }
        }
        Ok(())
    }
}

/// Ordered estimates with their per-study weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateCatalogue {
    estimates: Vec<PrimaryEstimate>,
    weights: Vec<f64>,
}

impl EstimateCatalogue {
    /// Builds a catalogue, validating every row and assigning weights equal
    /// within each study and summing to one per study.
    pub fn new(estimates: Vec<PrimaryEstimate>) -> Result<Self> {
        if estimates.is_empty() {
            return Err(Error::EmptyCatalogue { context: None });
        }
        for e in &estimates {
            e.validate()?;
        }
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &estimates {
            *counts.entry(e.study_id.as_str()).or_default() += 1;
        }
        let weights = estimates
            .iter()
            .map(|e| 1.0 / counts[e.study_id.as_str()] as f64)
            .collect();
        Ok(EstimateCatalogue { estimates, weights })
    }

    pub fn len(&self) -> usize {
        self.estimates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }

    pub fn estimates(&self) -> &[PrimaryEstimate] {
        &self.estimates
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Estimates paired with their weights.
    pub fn iter(&self) -> impl Iterator<Item = (&PrimaryEstimate, f64)> + '_ {
        self.estimates.iter().zip(self.weights.iter().copied())
    }

    /// Distinct study identifiers in order of first appearance.
    pub fn studies(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.estimates
            .iter()
            .map(|e| e.study_id.as_str())
            .filter(|s| seen.insert(*s))
            .collect()
    }

    pub fn n_studies(&self) -> usize {
        self.studies().len()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Number of distinct warming levels.
    pub fn distinct_warming_levels(&self) -> usize {
        let mut levels: Vec<f64> = self.estimates.iter().map(|e| e.warming).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        levels.len()
    }

    /// Keeps the estimates matching `keep` and reweights the survivors.
    pub fn filter<F>(&self, keep: F) -> Result<Self>
    where
        F: Fn(&PrimaryEstimate) -> bool,
    {
        let kept: Vec<_> = self.estimates.iter().filter(|e| keep(e)).cloned().collect();
        if kept.is_empty() {
            return Err(Error::EmptyCatalogue {
                context: Some("no estimate survives the filter".into()),
            });
        }
        Self::new(kept)
    }

    pub fn filter_by_method(&self, method: Method) -> Result<Self> {
        self.filter(|e| e.method == method).map_err(|_| Error::EmptyCatalogue {
            context: Some(format!("no {method} estimates")),
        })
    }

    /// Estimates at or below `max_warming` °C, reweighted.
    pub fn up_to_warming(&self, max_warming: f64) -> Result<Self> {
        self.filter(|e| e.warming <= max_warming)
    }

    /// Serializes to the CSV schema accepted by [`parse_catalogue`].
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CATALOGUE_HEADER).expect("in-memory write");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for e in &self.estimates {
            w.write_record([
                e.study_id.clone(),
                e.label.clone(),
                e.warming.to_string(),
                e.impact.to_string(),
                opt(e.sd),
                opt(e.min_impact),
                opt(e.max_impact),
                e.method.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

/// Reads the estimates CSV at `path`.
pub fn load_catalogue(path: impl AsRef<Path>) -> Result<EstimateCatalogue> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_catalogue(&text)
}

/// Parses the estimates CSV schema from a string.
pub fn parse_catalogue(text: &str) -> Result<EstimateCatalogue> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::schema(1, e.to_string()))?
        .clone();
    if header.iter().ne(CATALOGUE_HEADER.iter().copied()) {
        return Err(Error::schema(
            1,
            format!("expected header `{}`", CATALOGUE_HEADER.join(",")),
        ));
    }

    let mut estimates = Vec::new();
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::schema(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let fields: Vec<String> = record.iter().map(str::to_string).collect();
        if !seen.insert(fields.clone()) {
            return Err(Error::schema(line, "duplicate row"));
        }
        let estimate = parse_row(&record, line)?;
        estimate
            .validate()
            .map_err(|e| Error::schema(line, e.to_string()))?;
        estimates.push(estimate);
    }
    EstimateCatalogue::new(estimates)
}

fn parse_row(record: &csv::StringRecord, line: u64) -> Result<PrimaryEstimate> {
    let field = |i: usize| record.get(i).unwrap_or("");
    let required = |i: usize| -> Result<f64> {
        field(i).parse::<f64>().map_err(|_| {
            Error::schema(
                line,
                format!("{}: cannot parse `{}`", CATALOGUE_HEADER[i], field(i)),
            )
        })
    };
    let optional = |i: usize| -> Result<Option<f64>> {
        if field(i).is_empty() {
            Ok(None)
        } else {
            required(i).map(Some)
        }
    };
    let study_id = field(0).to_string();
    if study_id.is_empty() {
        return Err(Error::schema(line, "empty study_id"));
    }
    let label = match field(1) {
        "" => study_id.clone(),
        l => l.to_string(),
    };
    let method = field(7)
        .parse::<Method>()
        .map_err(|e| Error::schema(line, e.to_string()))?;
    Ok(PrimaryEstimate {
        study_id,
        label,
        warming: required(2)?,
        impact: required(3)?,
        sd: optional(4)?,
        min_impact: optional(5)?,
        max_impact: optional(6)?,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "study_id,label,warming_c,impact_pct,sd_pct,min_pct,max_pct,method\n";

    #[test]
    fn single_study_splits_weight_equally() {
        let text = format!(
            "{HEADER}A,,1,-0.5,,,,cge\nA,,2,-1.1,,,,cge\nA,,3,-1.8,,,,cge\nA,,4,-2.8,,,,cge\n"
        );
        let cat = parse_catalogue(&text).unwrap();
        assert_eq!(cat.len(), 4);
        assert!(cat.weights().iter().all(|&w| w == 0.25));
        assert_eq!(cat.total_weight(), 1.0);
    }

    #[test]
    fn unknown_method_names_the_row() {
        let text = format!("{HEADER}A,,1,-0.5,,,,cge\nB,,2,-1,,,,magic\n");
        match parse_catalogue(&text) {
            Err(Error::Schema { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("magic"), "{message}");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_rows_rejected() {
        let text = format!("{HEADER}A,,1,-0.5,,,,cge\nA,,1,-0.5,,,,cge\n");
        assert!(matches!(
            parse_catalogue(&text),
            Err(Error::Schema { line: 3, .. })
        ));
    }

    #[test]
    fn malformed_number_reports_line() {
        let text = format!("{HEADER}A,,1,-0.5,,,,cge\nB,,x,-1,,,,enum\n");
        let err = parse_catalogue(&text).unwrap_err();
        assert!(matches!(err, Error::Schema { line: 3, .. }), "{err}");
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(matches!(
            parse_catalogue("a,b,c\n1,2,3\n"),
            Err(Error::Schema { line: 1, .. })
        ));
    }

    #[test]
    fn interval_must_contain_central_value() {
        let text = format!("{HEADER}A,,1,3.8,,-4.2,-2.7,ectric\n");
        assert!(parse_catalogue(&text).is_err());
    }

    #[test]
    fn negative_sd_rejected() {
        let e = PrimaryEstimate::new("A", 1.0, -1.0, Method::Cge).with_sd(-0.1);
        assert!(e.validate().is_err());
    }

    #[test]
    fn negative_warming_is_allowed() {
        let text = format!("{HEADER}dArge,,-1.0,-0.6,,,,enum\n");
        let cat = parse_catalogue(&text).unwrap();
        assert_eq!(cat.estimates()[0].warming, -1.0);
        assert_eq!(cat.estimates()[0].method, Method::Enumerative);
    }

    #[test]
    fn filter_with_no_match_signals_empty() {
        let text = format!("{HEADER}A,,1,-0.5,,,,cge\n");
        let cat = parse_catalogue(&text).unwrap();
        assert!(matches!(
            cat.filter_by_method(Method::Elicitation),
            Err(Error::EmptyCatalogue { .. })
        ));
    }

    #[test]
    fn filter_reweights_survivors() {
        let text = format!("{HEADER}A,,1,-0.5,,,,cge\nA,,2,-1,,,,enum\nB,,2,-1,,,,enum\n");
        let cat = parse_catalogue(&text).unwrap();
        assert_eq!(cat.weights(), &[0.5, 0.5, 1.0]);
        let enumerative = cat.filter_by_method(Method::Enumerative).unwrap();
        assert_eq!(enumerative.weights(), &[1.0, 1.0]);
    }
}
