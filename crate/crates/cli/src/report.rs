//! Reference targets and the Markdown report.
//!
//! Each [`Target`] pairs a computed quantity with its published value and
//! the tolerance at which the two are taken to agree.

use std::fmt::Write as _;

use climeta::growth::{combine_studies, GrowthComparison, GrowthKind, SolowParams};
use climeta::regional::{gdp_weighted_mean, NationalImpact};
use climeta::sector::{rescale_impact, SectorSummary};
use climeta::{DamageForm, Method};

use crate::{
    growth_comparison, national_impacts, scc_rows, sector_summary, weighted_estimate_scc, FitStage,
    Inputs, Result, SccRow, Settings,
};

/// Published model weights, percent, in [`DamageForm::ALL`] order.
pub const REFERENCE_WEIGHTS: [f64; 8] = [18.96, 18.36, 14.09, 13.59, 13.49, 11.50, 9.78, 0.22];

/// Published row averages of the completed sector table, in sector order.
pub const REFERENCE_SECTOR_AVERAGE: [f64; 17] = [
    -0.26, -0.01, -0.07, -0.10, -0.09, -0.63, -0.03, -0.07, -0.17, -0.20, -0.38, -0.08, 0.29, -0.17, -0.27,
    -0.06, -0.33,
];

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub group: &'static str,
    pub name: String,
    pub computed: String,
    pub reference: String,
    pub tolerance: String,
    pub pass: bool,
}

fn absolute(group: &'static str, name: &str, computed: f64, reference: f64, tol: f64) -> Target {
    let decimals = if tol < 1e-3 { 10 } else { 4 };
    Target {
        group,
        name: name.into(),
        computed: format!("{computed:.decimals$}"),
        reference: if tol < 1e-3 { format!("{reference:.decimals$}") } else { format!("{reference}") },
        tolerance: if tol < 1e-3 { format!("± {tol:e}") } else { format!("± {tol}") },
        pass: (computed - reference).abs() <= tol,
    }
}

fn relative(group: &'static str, name: &str, computed: f64, reference: f64, rel: f64) -> Target {
    Target {
        group,
        name: name.into(),
        computed: format!("{computed:.4}"),
        reference: format!("{reference}"),
        tolerance: format!("± {:.0}%", rel * 100.0),
        pass: ((computed - reference) / reference).abs() <= rel,
    }
}

fn interval(group: &'static str, name: &str, computed: f64, reference: f64, lo: f64, hi: f64) -> Target {
    Target {
        group,
        name: name.into(),
        computed: format!("{computed:.1}"),
        reference: format!("{reference}"),
        tolerance: format!("[{lo}, {hi}]"),
        pass: (lo..=hi).contains(&computed),
    }
}

fn claim(group: &'static str, name: &str, computed: String, reference: &str, pass: bool) -> Target {
    Target {
        group,
        name: name.into(),
        computed,
        reference: reference.into(),
        tolerance: "exact".into(),
        pass,
    }
}

/// Everything the report shows.
#[derive(Debug, Clone)]
pub struct Report {
    pub stage: FitStage,
    pub sectors: SectorSummary,
    pub national: Vec<NationalImpact>,
    pub growth: GrowthComparison,
    pub scc: Vec<SccRow>,
    pub weighted_scc: f64,
    pub targets: Vec<Target>,
}

impl Report {
    pub fn build(inputs: &Inputs, settings: &Settings) -> Result<Self> {
        let stage = FitStage::run(inputs, settings)?;
        let sectors = sector_summary(inputs)?;
        let (_, national) = national_impacts(inputs, settings, stage.all())?;
        let growth = growth_comparison(inputs, settings, &stage)?;
        let scc = scc_rows(inputs, settings, &stage)?;
        let weighted_scc = weighted_estimate_scc(inputs, settings)?;
        let mut report = Report {
            stage,
            sectors,
            national,
            growth,
            scc,
            weighted_scc,
            targets: Vec::new(),
        };
        report.targets = report.collect_targets(inputs, settings)?;
        Ok(report)
    }

    pub fn passed(&self) -> usize {
        self.targets.iter().filter(|t| t.pass).count()
    }

    fn collect_targets(&self, inputs: &Inputs, settings: &Settings) -> Result<Vec<Target>> {
        let mut t = Vec::new();
        let all = self.stage.all();
        let param = |form: DamageForm, i: usize| all.get(form).map(|f| f.function.params[i]).unwrap_or(f64::NAN);

        t.push(absolute("fit", "quadratic coefficient", param(DamageForm::Quadratic, 0), -0.17, 0.02));
        t.push(absolute("fit", "linear slope", param(DamageForm::Linear, 0), -0.79, 0.08));
        t.push(relative("fit", "parabolic T coefficient", param(DamageForm::Parabolic, 0), -0.37, 0.2));
        t.push(relative("fit", "parabolic T² coefficient", param(DamageForm::Parabolic, 1), -0.098, 0.2));

        for (form, reference) in DamageForm::ALL.iter().zip(REFERENCE_WEIGHTS) {
            let w = all.get(*form).map(|f| 100.0 * f.bma_weight).unwrap_or(f64::NAN);
            t.push(absolute("bma", &format!("{form} weight, %"), w, reference, 4.0));
        }
        let ranked = |f: &dyn Fn(f64, f64) -> bool| {
            all.fits
                .iter()
                .reduce(|a, b| if f(b.bma_weight, a.bma_weight) { b } else { a })
                .map(|r| r.form())
        };
        let first = ranked(&|b, a| b > a);
        let last = ranked(&|b, a| b < a);
        t.push(claim(
            "bma",
            "highest and lowest weight",
            format!("{} / {}", first.map(|f| f.as_str()).unwrap_or("-"), last.map(|f| f.as_str()).unwrap_or("-")),
            "parabolic / exponential",
            first == Some(DamageForm::Parabolic) && last == Some(DamageForm::Exponential),
        ));
        for (method, form) in [
            (None, DamageForm::Parabolic),
            (Some(Method::Enumerative), DamageForm::PiecewiseLinear),
            (Some(Method::Elicitation), DamageForm::Linear),
            (Some(Method::Cge), DamageForm::Weitzman7),
        ] {
            let found = match method {
                None => Some(all.best().form()),
                Some(m) => self.stage.method(m).map(|m| m.average.best().form()),
            };
            t.push(claim(
                "bma",
                &format!("best form, {} estimates", method.map(Method::as_str).unwrap_or("all")),
                found.map(|f| f.to_string()).unwrap_or_else(|| "-".into()),
                form.as_str(),
                found == Some(form),
            ));
        }

        let band = &self.stage.band;
        t.push(absolute("band", "upside sd per °C", band.sd_pos_per_degree, 1.02, 0.15));
        t.push(absolute("band", "downside sd per °C", band.sd_neg_per_degree, 1.43, 0.15));
        t.push(claim(
            "band",
            "downside exceeds upside",
            format!("{:.3} vs {:.3}", band.sd_neg_per_degree, band.sd_pos_per_degree),
            "downside larger",
            band.sd_neg_per_degree > band.sd_pos_per_degree,
        ));

        let s = &self.sectors;
        let worst = s
            .average
            .iter()
            .zip(REFERENCE_SECTOR_AVERAGE)
            .map(|(a, r)| (a - r).abs())
            .fold(0.0, f64::max);
        t.push(Target {
            group: "sector",
            name: "largest deviation of sector averages".into(),
            computed: format!("{worst:.4}"),
            reference: "0".into(),
            tolerance: "≤ 0.02".into(),
            pass: worst <= 0.02,
        });
        t.push(absolute("sector", "average completed total", s.average_total, -2.56, 0.05));
        if let Some(u) = s.uplift {
            t.push(absolute("sector", "imputation uplift, %", 100.0 * u, 63.0, 5.0));
        }
        t.push(claim("sector", "most complete study", s.most_complete().into(), "Tol1995", s.most_complete() == "Tol1995"));
        t.push(claim(
            "sector",
            "least complete study",
            s.least_complete().into(),
            "Sartori2014",
            s.least_complete() == "Sartori2014",
        ));
        t.push(absolute("sector", "Sartori at 2.5 °C from −0.7 at 3.0 °C", rescale_impact(-0.7, 3.0, 2.5, all)?, -0.55, 0.02));
        t.push(absolute("sector", "Kompas at 2.5 °C from −1.8 at 3.0 °C", rescale_impact(-1.8, 3.0, 2.5, all)?, -1.40, 0.02));

        let means: Vec<f64> = self.national.iter().map(|n| n.mean).collect();
        let worse = means.iter().filter(|m| **m < -1.7).count();
        t.push(claim(
            "downscale",
            "countries worse than −1.7% at 2.5 °C",
            format!("{worse} of {}", means.len()),
            "more than half",
            2 * worse > means.len(),
        ));
        t.push(Target {
            group: "downscale",
            name: "GDP-weighted national mean".into(),
            computed: format!("{:.4}", gdp_weighted_mean(&means, &inputs.countries)),
            reference: "-".into(),
            tolerance: "informative".into(),
            pass: true,
        });

        let p = SolowParams::default();
        t.push(absolute("kernel", "Σ(λδ)^τ at λ = 0.3, δ = 0.1", p.kernel_sum(), 0.030928, 1e-6));
        let p = &settings.growth.params;
        let series: f64 = (1..=10_000).map(|k| p.decay().powi(k)).sum();
        t.push(absolute("kernel", "truncated series at the chosen λ, δ", series, p.kernel_sum(), 1e-12));

        let g = &self.growth;
        t.push(absolute("growth", "comparative static market loss, %", g.comparative_static.central, 1.80, 0.4));
        t.push(absolute("growth", "implied growth loss, %", g.implied_growth.central, 1.65, 0.4));
        t.push(absolute("growth", "level-type empirical loss, %", g.level_empirical.central, 36.0, 5.0));
        t.push(absolute("growth", "change-type empirical loss, %", g.change_empirical.central, 1.55, 0.4));

        let sig4 = |x: f64, r: f64| ((x - r) / r).abs() < 5e-4;
        for (kind, a, b) in [(GrowthKind::Level, -0.002023, -0.000023), (GrowthKind::Change, -0.004029, -0.000377)] {
            let studies: Vec<_> = inputs.coefficients.iter().filter(|c| c.kind == kind).cloned().collect();
            let c = combine_studies(&studies, None)?;
            t.push(claim(
                "combine",
                &format!("combined {kind} coefficients"),
                format!("({:.6}, {:.6})", c.a, c.b),
                &format!("({a}, {b})"),
                sig4(c.a, a) && sig4(c.b, b),
            ));
        }

        let unit = settings.scc.numeraire.unit();
        let get = |group: &str, label: &str| {
            self.scc
                .iter()
                .find(|r| r.group == group && r.label == label)
                .map(|r| r.scc)
                .unwrap_or(f64::NAN)
        };
        t.push(interval("scc", &format!("quadratic −0.17T², {unit}"), self.quadratic_scc(inputs, settings)?, 27.0, 13.0, 54.0));
        t.push(interval("scc", &format!("weighted per-estimate mean, {unit}"), self.weighted_scc, 59.0, 30.0, 89.0));
        t.push(interval("scc", &format!("combined change-type, {unit}"), get("change", "Combined"), 17.0, 8.5, 25.5));
        t.push(interval("scc", &format!("combined level-type, {unit}"), get("level", "Combined"), 218.0, 109.0, 327.0));
        let estimates: Vec<&SccRow> = self.scc.iter().filter(|r| r.group == "estimate").collect();
        let max = estimates.iter().max_by(|a, b| a.scc.total_cmp(&b.scc));
        t.push(claim(
            "scc",
            "largest per-estimate value",
            max.map(|r| r.label.clone()).unwrap_or_default(),
            "Horowitz2009",
            max.map(|r| r.label == "Horowitz2009").unwrap_or(false),
        ));
        let tol = get("estimate", "Tol2002ERE1");
        t.push(claim("scc", "Tol (2002) value negative", format!("{tol:.1}"), "< 0", tol < 0.0));
        let functions: Vec<&SccRow> = self.scc.iter().filter(|r| r.group == "function").collect();
        let min = functions.iter().min_by(|a, b| a.scc.total_cmp(&b.scc));
        t.push(claim(
            "scc",
            "cheapest impact function",
            min.map(|r| r.label.clone()).unwrap_or_default(),
            "exponential",
            min.map(|r| r.label == "exponential").unwrap_or(false),
        ));
        Ok(t)
    }

    fn quadratic_scc(&self, inputs: &Inputs, settings: &Settings) -> Result<f64> {
        let ctx = climeta::scc::SccContext::new(&inputs.scenario, &settings.climate(inputs), &settings.scc)?;
        Ok(ctx.from_curve(&climeta::DamageFunction::quadratic(-0.17))?)
    }

    /// Renders `report.md`.
    pub fn markdown(&self, settings: &Settings) -> String {
        let mut out = String::from("# climeta report\n\n");
        let s = &settings.scc;
        let _ = writeln!(
            out,
            "Settings: prtp {}, eta {}, pulse {} GtC in {}, horizon {}, unit {}, market share {}, core cutoff {}.\n",
            s.prtp,
            s.eta,
            s.pulse_gtc,
            s.pulse_year,
            s.horizon,
            s.numeraire.unit(),
            settings.growth.market_share,
            settings.fit.core_cutoff.map(|c| format!("{c} °C")).unwrap_or_else(|| "none".into()),
        );
        let _ = writeln!(out, "## Targets\n\n{} of {} targets pass.\n", self.passed(), self.targets.len());
        out.push_str("| group | target | computed | reference | tolerance | status |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for t in &self.targets {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                t.group,
                t.name,
                t.computed,
                t.reference,
                t.tolerance,
                if t.pass { "PASS" } else { "FAIL" }
            );
        }

        out.push_str("\n## Impact functions\n\n| form | formula | wsse | weight |\n|---|---|---|---|\n");
        for f in &self.stage.all().fits {
            let _ = writeln!(out, "| {} | {} | {:.3} | {:.2}% |", f.form(), f.function.formula(), f.wsse, 100.0 * f.bma_weight);
        }
        let b = &self.stage.band;
        let _ = writeln!(
            out,
            "\nBand from {} estimates in {} studies: sd {:.3} up and {:.3} down per °C.",
            b.n_estimates, b.n_studies, b.sd_pos_per_degree, b.sd_neg_per_degree
        );

        out.push_str("\n## Output loss by the end of the warming path\n\n| column | central | lower | upper |\n|---|---|---|---|\n");
        for c in self.growth.columns() {
            let _ = writeln!(out, "| {} | {:.2}% | {:.2}% | {:.2}% |", c.label, c.central, c.lower, c.upper);
        }

        let _ = writeln!(out, "\n## Social cost of carbon ({})\n\n| group | label | value |\n|---|---|---|", s.numeraire.unit());
        for r in self.scc.iter().filter(|r| r.group != "estimate") {
            let _ = writeln!(out, "| {} | {} | {:.1} |", r.group, r.label, r.scc);
        }
        let _ = writeln!(out, "| estimate | weighted mean of {} | {:.1} |", self.scc.iter().filter(|r| r.group == "estimate").count(), self.weighted_scc);
        out
    }
}
