//! Acceptance criteria, one test each.
//!
//! Every test prints one `PASS` or `FAIL` line with the computed values
//! and then asserts, so a red criterion shows both in the log and in the
//! test summary.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use climeta::data;
use climeta::fit::{fit_all, fit_bounds, fit_with, FitOptions};
use climeta::growth::{
    accumulate_empirical, combine_studies, compare_growth, ComparisonSetup, GrowthCoefficients,
    GrowthKind, SolowParams, WarmingPath,
};
use climeta::regional::{fit_regional, region_covariates, RegionalEstimate, RegionalModel};
use climeta::scc::{scc_per_estimate, weighted_mean_scc, SccConfig, SccContext};
use climeta::sector::impute_sectors;
use climeta::{DamageForm, DamageFunction, EstimateCatalogue, Method, PrimaryEstimate};
use climeta_cli::report::{REFERENCE_SECTOR_AVERAGE, REFERENCE_WEIGHTS};

const FIT_RUNTIME: Duration = Duration::from_secs(10);
const QUADRATIC: (f64, f64) = (-0.17, 0.02);
const LINEAR: (f64, f64) = (-0.79, 0.08);
const PARABOLIC: [f64; 2] = [-0.37, -0.098];
const PARABOLIC_REL: f64 = 0.20;
const WEIGHT_PP: f64 = 4.0;
const SD_POS: (f64, f64) = (1.02, 0.15);
const SD_NEG: (f64, f64) = (1.43, 0.15);
const SECTOR_AVG_TOL: f64 = 0.02;
const SECTOR_TOTAL: (f64, f64) = (-2.56, 0.05);
const UPLIFT_PCT: (f64, f64) = (63.0, 5.0);
const KERNEL: (f64, f64) = (0.030928, 1e-6);
const IMPLIED: (f64, f64) = (1.65, 0.4);
const CHANGE: (f64, f64) = (1.55, 0.4);
const LEVEL: (f64, f64) = (36.0, 5.0);
const STATIC: (f64, f64) = (1.80, 0.4);
const QUADRATIC_SCC: (f64, f64) = (13.0, 54.0);
const WEIGHTED_SCC: (f64, f64) = (30.0, 89.0);
const LEVEL_COMBINED: (f64, f64) = (-0.002023, -0.000023);
const CHANGE_COMBINED: (f64, f64) = (-0.004029, -0.000377);
const SIG4: f64 = 5e-4;
const ORACLE: f64 = 1e-8;
const TRANSIENCE: f64 = 1e-9;
const MARGINALITY: f64 = 0.01;
const REPORT_RUNTIME: Duration = Duration::from_secs(120);

struct Verdict {
    name: &'static str,
    lines: Vec<String>,
    pass: bool,
}

impl Verdict {
    fn new(name: &'static str) -> Self {
        Verdict {
            name,
            lines: Vec::new(),
            pass: true,
        }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        let what = what.into();
        self.lines.push(if ok { what } else { format!("{what} [off]") });
        self.pass &= ok;
    }

    fn near(&mut self, what: &str, value: f64, (target, tol): (f64, f64)) {
        self.check(format!("{what} {value:.6} vs {target} ± {tol}"), (value - target).abs() <= tol);
    }

    fn finish(self) {
        let status = if self.pass { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", self.name, self.lines.join("; "));
        assert!(self.pass, "{} failed: {}", self.name, self.lines.join("; "));
    }
}

fn scc_context() -> SccContext {
    SccContext::new(&data::scenario(), &data::climate(), &SccConfig::default()).unwrap()
}

#[test]
fn fit_reproduction() {
    let mut v = Verdict::new("fit_reproduction");
    let start = Instant::now();
    let avg = fit_all(&data::catalogue()).unwrap();
    let elapsed = start.elapsed();
    let p = |f: DamageForm| avg.get(f).unwrap().function.params.clone();
    v.near("quadratic", p(DamageForm::Quadratic)[0], QUADRATIC);
    v.near("linear", p(DamageForm::Linear)[0], LINEAR);
    for (i, (value, target)) in p(DamageForm::Parabolic).iter().zip(PARABOLIC).enumerate() {
        let rel = ((value - target) / target).abs();
        v.check(
            format!("parabolic[{i}] {value:.4} vs {target} ({:.1}% off, limit 20%)", 100.0 * rel),
            rel <= PARABOLIC_REL,
        );
    }
    v.check(format!("runtime {elapsed:?}"), elapsed < FIT_RUNTIME);
    v.finish();
}

#[test]
fn bma_weights() {
    let mut v = Verdict::new("bma_weights");
    let avg = fit_all(&data::catalogue()).unwrap();
    for (form, reference) in DamageForm::ALL.iter().zip(REFERENCE_WEIGHTS) {
        let w = 100.0 * avg.get(*form).unwrap().bma_weight;
        v.near(form.as_str(), w, (reference, WEIGHT_PP));
    }
    let order = |f: &dyn Fn(&f64, &f64) -> bool| {
        avg.fits
            .iter()
            .reduce(|a, b| if f(&b.bma_weight, &a.bma_weight) { b } else { a })
            .unwrap()
            .form()
    };
    let first = order(&|b, a| b > a);
    let last = order(&|b, a| b < a);
    v.check(format!("first {first}"), first == DamageForm::Parabolic);
    v.check(format!("last {last}"), last == DamageForm::Exponential);
    v.finish();
}

#[test]
fn uncertainty_skew() {
    let mut v = Verdict::new("uncertainty_skew");
    let band = fit_bounds(&data::catalogue()).unwrap();
    v.near("sd_pos", band.sd_pos_per_degree, SD_POS);
    v.near("sd_neg", band.sd_neg_per_degree, SD_NEG);
    v.check("negative exceeds positive", band.sd_neg_per_degree > band.sd_pos_per_degree);
    v.finish();
}

#[test]
fn sectoral_table() {
    let mut v = Verdict::new("sectoral_table");
    let s = impute_sectors(&data::sectors()).unwrap();
    let worst = s
        .average
        .iter()
        .zip(REFERENCE_SECTOR_AVERAGE)
        .map(|(a, r)| (a - r).abs())
        .fold(0.0, f64::max);
    v.check(format!("largest sector deviation {worst:.4} ≤ {SECTOR_AVG_TOL}"), worst <= SECTOR_AVG_TOL);
    v.near("total", s.average_total, SECTOR_TOTAL);
    v.near("uplift %", 100.0 * s.uplift.unwrap(), UPLIFT_PCT);
    v.finish();
}

#[test]
fn growth_kernel() {
    let mut v = Verdict::new("growth_kernel");
    let p = SolowParams::default();
    let x = p.decay();
    v.check(format!("λδ = {x}"), (x - 0.03).abs() < 1e-15);
    let series: f64 = (1..=10_000).map(|k| x.powi(k)).sum();
    v.check(
        format!("closed form {:.12} vs series {series:.12}", p.kernel_sum()),
        (p.kernel_sum() - x / (1.0 - x)).abs() < 1e-15 && (series - p.kernel_sum()).abs() < 1e-15,
    );
    v.near("value", p.kernel_sum(), KERNEL);
    v.finish();
}

#[test]
fn growth_comparison() {
    let mut v = Verdict::new("growth_comparison");
    let cat = data::catalogue();
    let setup = ComparisonSetup::default();
    v.check(
        format!("path {} → {:.2} °C", setup.path.temperature[0], setup.path.final_temperature()),
        (setup.path.final_temperature() - 4.3).abs() < 1e-9,
    );
    let g = compare_growth(
        &fit_all(&cat).unwrap(),
        &fit_bounds(&cat).unwrap(),
        &data::growth_coefficients_of(GrowthKind::Level),
        &data::growth_coefficients_of(GrowthKind::Change),
        &setup,
    )
    .unwrap();
    v.near("implied %", g.implied_growth.central, IMPLIED);
    v.near("change %", g.change_empirical.central, CHANGE);
    v.near("level %", g.level_empirical.central, LEVEL);
    v.near("comparative static %", g.comparative_static.central, STATIC);
    v.finish();
}

#[test]
fn scc_properties() {
    let mut v = Verdict::new("scc_properties");
    let ctx = scc_context();
    let q = ctx.from_curve(&DamageFunction::quadratic(-0.17)).unwrap();
    v.check(
        format!("quadratic {q:.1} USD/tC in [{}, {}]", QUADRATIC_SCC.0, QUADRATIC_SCC.1),
        (QUADRATIC_SCC.0..=QUADRATIC_SCC.1).contains(&q),
    );
    let rows = scc_per_estimate(&data::catalogue(), &ctx).unwrap();
    let w = weighted_mean_scc(&rows);
    v.check(
        format!("weighted mean {w:.1} USD/tC in [{}, {}]", WEIGHTED_SCC.0, WEIGHTED_SCC.1),
        (WEIGHTED_SCC.0..=WEIGHTED_SCC.1).contains(&w),
    );
    let tol = rows.iter().find(|r| r.study_id == "Tol2002ERE1").unwrap().scc;
    v.check(format!("Tol2002 {tol:.1} < 0"), tol < 0.0);
    let max = rows.iter().max_by(|a, b| a.scc.total_cmp(&b.scc)).unwrap();
    v.check(format!("maximum {} {:.1}", max.study_id, max.scc), max.study_id == "Horowitz2009");
    let avg = fit_all(&data::catalogue()).unwrap();
    let min = avg
        .fits
        .iter()
        .map(|f| (f.form(), ctx.from_curve(&f.function).unwrap()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    v.check(format!("cheapest form {} {:.1}", min.0, min.1), min.0 == DamageForm::Exponential);
    v.finish();
}

#[test]
fn combined_coefficients() {
    let mut v = Verdict::new("combined_coefficients");
    let sig4 = |x: f64, r: f64| ((x - r) / r).abs() < SIG4;
    for (kind, (a, b)) in [(GrowthKind::Level, LEVEL_COMBINED), (GrowthKind::Change, CHANGE_COMBINED)] {
        let studies = data::growth_coefficients_of(kind);
        let c = combine_studies(&studies, None).unwrap();
        v.check(format!("{kind} ({:.6}, {:.6}) vs ({a}, {b})", c.a, c.b), sig4(c.a, a) && sig4(c.b, b));
        v.check(format!("{kind} weights bundled"), studies.iter().all(|s| s.weight.is_some()));
    }
    let readme = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/README.md");
    let doc = std::fs::read_to_string(&readme).unwrap_or_default();
    v.check("weight provenance documented", doc.contains("growth_coefficients.csv") && doc.contains("weight"));
    v.finish();
}

#[test]
fn oracle_suites() {
    let mut v = Verdict::new("oracle_suites");

    let rows = [0.5, 1.0, 2.0, 3.0, 4.5, 6.0]
        .iter()
        .enumerate()
        .map(|(i, &t)| PrimaryEstimate::new(&format!("S{i}"), t, -0.25 * t * t, Method::Cge))
        .collect();
    let cat = EstimateCatalogue::new(rows).unwrap();
    let c = fit_with(DamageForm::Quadratic, &cat, &FitOptions::default()).unwrap().function.params[0];
    v.check(format!("impact fit recovers {c:.12}"), (c + 0.25).abs() < ORACLE);

    let countries = data::countries();
    let regions = data::regions();
    let truth = RegionalModel::default();
    let mut sample = Vec::new();
    for (s, alpha) in [("A", -2.0), ("B", -9.0)] {
        for id in ["OECD", "EASIA", "SASIA", "MENA", "SSA", "LATAM", "REF"] {
            let (y, t) = region_covariates(id, &countries, &regions).unwrap();
            sample.push(RegionalEstimate {
                study_id: s.into(),
                region_id: id.into(),
                impact: alpha + truth.slope_term(y, t),
                warming: 2.5,
            });
        }
    }
    let m = fit_regional(&sample, &countries, &regions).unwrap();
    v.check(
        format!("regional fit recovers ({:.10}, {:.10})", m.income_coef, m.temp_coef),
        (m.income_coef - 1.87).abs() < ORACLE && (m.temp_coef + 0.39).abs() < ORACLE,
    );

    let up = WarmingPath::default();
    let mut t = up.temperature.clone();
    t.extend(up.temperature.iter().rev().skip(1));
    let back = WarmingPath::new((2020..2020 + t.len() as i32).collect(), t).unwrap();
    let mut studies = data::growth_coefficients_of(GrowthKind::Change);
    studies.push(GrowthCoefficients::new("test", GrowthKind::Change, -0.01, -0.002));
    let worst = studies
        .iter()
        .map(|c| accumulate_empirical(c, &back).unwrap().abs())
        .fold(0.0, f64::max);
    v.check(format!("warm-then-reverse gap {worst:.2e}"), worst < TRANSIENCE);

    let curve = DamageFunction::quadratic(-0.17);
    let full = scc_context().from_curve(&curve).unwrap();
    let half = SccContext::new(
        &data::scenario(),
        &data::climate(),
        &SccConfig {
            pulse_gtc: 0.5,
            ..SccConfig::default()
        },
    )
    .unwrap()
    .from_curve(&curve)
    .unwrap();
    let drift = ((half - full) / full).abs();
    v.check(format!("pulse halving drift {:.4}%", 100.0 * drift), drift < MARGINALITY);
    v.finish();
}

fn run_report(dir: &Path) -> Duration {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_climeta"))
        .arg("report")
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs");
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    start.elapsed()
}

#[test]
fn determinism() {
    let mut v = Verdict::new("determinism");
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let t1 = run_report(a.path());
    let t2 = run_report(b.path());
    let mut names: Vec<String> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    v.check(format!("{} files", names.len()), names.len() == 7);
    for name in &names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap_or_default();
        v.check(format!("{name} identical"), x == y);
    }
    v.check(format!("runtime {t1:?} and {t2:?}"), t1.max(t2) < REPORT_RUNTIME);
    v.finish();
}
