//! Sectoral breakdown of total impacts and imputation of missing sectors.
//!
//! Studies that report sector detail rarely cover every sector. A missing
//! cell is filled with the mean of the studies that do report that sector,
//! which raises each study's total towards a complete accounting.

use std::collections::HashSet;
use std::path::Path;

use crate::damage::DamageCurve;
use crate::error::{Error, Result};

/// The seventeen impact categories, in table order.
pub const SECTORS: [&str; 17] = [
    "Agriculture",
    "Forestry",
    "Energy",
    "Water",
    "Tourism",
    "Other markets",
    "Coastal defence",
    "Dryland loss",
    "Wetland loss",
    "Ecosystem",
    "Health",
    "Air pollution",
    "Time use",
    "Settlements",
    "Catastrophe",
    "Migration",
    "Amenity",
];

/// Row label carrying each study's headline total impact.
pub const ORIGINAL_ROW: &str = "Original";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Observed(f64),
    Imputed(f64),
    Missing,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Observed(v) | Cell::Imputed(v) => Some(v),
            Cell::Missing => None,
        }
    }

    pub fn is_imputed(self) -> bool {
        matches!(self, Cell::Imputed(_))
    }
}

/// Sector impacts (percent of gross global income) by study.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorTable {
    pub studies: Vec<String>,
    pub sectors: Vec<String>,
    /// `cells[sector][study]`.
    pub cells: Vec<Vec<Cell>>,
    /// Headline total impact of each study, when known.
    pub originals: Option<Vec<f64>>,
}

impl SectorTable {
    pub fn cell(&self, sector: &str, study: &str) -> Option<Cell> {
        let r = self.sectors.iter().position(|s| s == sector)?;
        let c = self.studies.iter().position(|s| s == study)?;
        Some(self.cells[r][c])
    }

    /// Number of imputed cells per study.
    pub fn imputed_counts(&self) -> Vec<usize> {
        (0..self.studies.len())
            .map(|c| self.cells.iter().filter(|row| row[c].is_imputed()).count())
            .collect()
    }

    /// Number of observed cells per study.
    pub fn observed_counts(&self) -> Vec<usize> {
        (0..self.studies.len())
            .map(|c| {
                self.cells
                    .iter()
                    .filter(|row| matches!(row[c], Cell::Observed(_)))
                    .count()
            })
            .collect()
    }

    /// Column sums over the cells that carry a value.
    pub fn column_totals(&self) -> Vec<f64> {
        (0..self.studies.len())
            .map(|c| self.cells.iter().filter_map(|row| row[c].value()).sum())
            .collect()
    }

    /// Serializes to the `sectors.csv` layout; imputed cells are written
    /// as values, so the output is a completed table.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["sector".to_string()];
        header.extend(self.studies.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
        for (name, row) in self.sectors.iter().zip(&self.cells) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(|c| fmt(c.value())));
            w.write_record(&rec).expect("in-memory write");
        }
        if let Some(orig) = &self.originals {
            let mut rec = vec![ORIGINAL_ROW.to_string()];
            rec.extend(orig.iter().map(|v| fmt(Some(*v))));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

pub fn load_sectors(path: impl AsRef<Path>) -> Result<SectorTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sectors(&text)
}

/// Parses a sector table: first column the sector name, one column per
/// study, empty cells missing. An optional [`ORIGINAL_ROW`] carries the
/// headline totals. The sector rows must be exactly [`SECTORS`], in any
/// order.
pub fn parse_sectors(text: &str) -> Result<SectorTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::schema(1, e.to_string()))?
        .clone();
    if header.len() < 2 {
        return Err(Error::schema(1, "need a sector column and at least one study"));
    }
    let studies: Vec<String> = header.iter().skip(1).map(str::to_string).collect();

    let mut sectors = Vec::new();
    let mut cells = Vec::new();
    let mut originals = None;
    for record in reader.records() {
        let record = record.map_err(|e| {
            Error::schema(e.position().map(|p| p.line()).unwrap_or(0), e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let name = record.get(0).unwrap_or("").to_string();
        let mut row = Vec::with_capacity(studies.len());
        for (i, field) in record.iter().skip(1).enumerate() {
            if field.is_empty() {
                row.push(Cell::Missing);
            } else {
                let v: f64 = field.parse().map_err(|_| {
                    Error::schema(line, format!("{}: cannot parse `{field}`", studies[i]))
                })?;
                row.push(Cell::Observed(v));
            }
        }
        if name == ORIGINAL_ROW {
            let vals: Option<Vec<f64>> = row.iter().map(|c| c.value()).collect();
            originals = Some(vals.ok_or_else(|| {
                Error::schema(line, "Original row must be complete")
            })?);
            continue;
        }
        if sectors.contains(&name) {
            return Err(Error::schema(line, format!("duplicate sector `{name}`")));
        }
        if !SECTORS.contains(&name.as_str()) {
            return Err(Error::schema(line, format!("unknown sector `{name}`")));
        }
        sectors.push(name);
        cells.push(row);
    }
    let present: HashSet<&str> = sectors.iter().map(String::as_str).collect();
    if let Some(missing) = SECTORS.iter().find(|s| !present.contains(*s)) {
        return Err(Error::schema(0, format!("sector `{missing}` absent")));
    }
    Ok(SectorTable {
        studies,
        sectors,
        cells,
        originals,
    })
}

/// Completed table with the derived totals.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSummary {
    pub table: SectorTable,
    /// Completed column sums.
    pub totals: Vec<f64>,
    /// Total over headline, when headlines are known.
    pub ratios: Option<Vec<f64>>,
    /// Row means, the value used for imputation.
    pub average: Vec<f64>,
    pub average_total: f64,
    pub average_original: Option<f64>,
    /// `average_total / average_original − 1`.
    pub uplift: Option<f64>,
}

impl SectorSummary {
    /// Share of each completed total that comes from imputed cells.
    pub fn imputed_shares(&self) -> Vec<f64> {
        (0..self.totals.len())
            .map(|c| {
                let imputed: f64 = self
                    .table
                    .cells
                    .iter()
                    .filter(|row| row[c].is_imputed())
                    .filter_map(|row| row[c].value())
                    .sum();
                if self.totals[c] == 0.0 {
                    0.0
                } else {
                    imputed / self.totals[c]
                }
            })
            .collect()
    }

    /// Study whose total relies least on imputation.
    pub fn most_complete(&self) -> &str {
        let shares = self.imputed_shares();
        let idx = (0..shares.len())
            .min_by(|&a, &b| shares[a].total_cmp(&shares[b]))
            .unwrap_or(0);
        &self.table.studies[idx]
    }

    /// Study whose total relies most on imputation.
    pub fn least_complete(&self) -> &str {
        let shares = self.imputed_shares();
        let idx = (0..shares.len())
            .max_by(|&a, &b| shares[a].total_cmp(&shares[b]))
            .unwrap_or(0);
        &self.table.studies[idx]
    }
}

/// Fills every missing cell with the mean of the observed cells in its row.
pub fn impute_sectors(raw: &SectorTable) -> Result<SectorSummary> {
    let mut table = raw.clone();
    let mut average = Vec::with_capacity(table.cells.len());
    for (name, row) in table.sectors.iter().zip(table.cells.iter_mut()) {
        let observed: Vec<f64> = row
            .iter()
            .filter_map(|c| match c {
                Cell::Observed(v) => Some(*v),
                _ => None,
            })
            .collect();
        if observed.is_empty() {
            return Err(Error::InvalidInput(format!(
                "sector `{name}` is not observed in any study"
            )));
        }
        let mean = observed.iter().sum::<f64>() / observed.len() as f64;
        for c in row.iter_mut() {
            if let Cell::Missing = c {
                *c = Cell::Imputed(mean);
            }
        }
        let filled: Vec<f64> = row.iter().filter_map(|c| c.value()).collect();
        average.push(filled.iter().sum::<f64>() / filled.len() as f64);
    }
    let totals = table.column_totals();
    let n = totals.len() as f64;
    let average_total = totals.iter().sum::<f64>() / n;
    let (ratios, average_original, uplift) = match &table.originals {
        Some(orig) => {
            let ratios = totals.iter().zip(orig).map(|(t, o)| t / o).collect();
            let mean_orig = orig.iter().sum::<f64>() / n;
            (Some(ratios), Some(mean_orig), Some(average_total / mean_orig - 1.0))
        }
        None => (None, None, None),
    };
    Ok(SectorSummary {
        table,
        totals,
        ratios,
        average,
        average_total,
        average_original,
        uplift,
    })
}

/// Moves an impact from one warming level to another along `curve`:
/// `impact · curve(to_t) / curve(from_t)`.
pub fn rescale_impact<C: DamageCurve + ?Sized>(impact: f64, from_t: f64, to_t: f64, curve: &C) -> Result<f64> {
    if from_t == to_t {
        return Ok(impact);
    }
    let base = curve.impact_at(from_t);
    if base == 0.0 || !base.is_finite() {
        return Err(Error::Degenerate(format!(
            "curve vanishes at {from_t} °C; cannot rescale"
        )));
    }
    Ok(impact * curve.impact_at(to_t) / base)
}
