use climeta::climate::{run_climate, ClimateCore};
use climeta::data;
use climeta::damage::Scaled;
use climeta::fit::fit_all;
use climeta::growth::{
    accumulate_empirical, change_growth_effect, combine_studies, implied_growth_delta,
    level_growth_effect, GrowthCoefficients, GrowthKind, SolowParams, WarmingPath,
};
use climeta::scc::{scc_per_estimate, weighted_mean_scc, SccConfig, SccContext};
use climeta::{DamageForm, DamageFunction, EstimateCatalogue, Method, PrimaryEstimate};
use proptest::prelude::*;

fn coef(label: &str) -> GrowthCoefficients {
    data::growth_coefficients()
        .into_iter()
        .find(|c| c.label == label)
        .unwrap()
}

fn sig4(x: f64, y: f64) -> bool {
    ((x - y) / y).abs() < 5e-4
}

#[test]
fn kernel_sum_at_three_percent() {
    let p = SolowParams {
        lambda: 0.3,
        delta: 0.1,
        savings: 0.2,
    };
    assert!((p.kernel_sum() - 0.030928).abs() < 1e-6);
    let series: f64 = (1..200).map(|t| p.decay().powi(t)).sum();
    assert!((series - p.kernel_sum()).abs() < 1e-15);
}

#[test]
fn one_percent_shock() {
    let v = implied_growth_delta(0.01, &SolowParams::default(), 1).unwrap();
    assert!((v - 2.970297e-4).abs() < 1e-9);
}

#[test]
fn tabulated_growth_effects() {
    let dell = level_growth_effect(&coef("Dell2012"), 1.0).unwrap();
    assert!((dell + 0.002131).abs() < 1e-12);
    let kalkuhl = level_growth_effect(&coef("Kalkuhl2020"), 3.0).unwrap();
    assert!((kalkuhl + 0.020133).abs() < 1e-9);
    let letta = change_growth_effect(&coef("Letta2018"), 2.0, 0.04).unwrap();
    assert!((letta + 1.862e-4).abs() < 1e-12);
    for c in data::growth_coefficients_of(GrowthKind::Level) {
        assert_eq!(level_growth_effect(&c, 0.0).unwrap(), 0.0);
    }
}

#[test]
fn combined_coefficients() {
    let level = combine_studies(&data::growth_coefficients_of(GrowthKind::Level), None).unwrap();
    let change = combine_studies(&data::growth_coefficients_of(GrowthKind::Change), None).unwrap();
    assert!(sig4(level.a, -0.002023) && sig4(level.b, -0.000023), "{level:?}");
    assert!(sig4(change.a, -0.004029) && sig4(change.b, -0.000377), "{change:?}");
}

#[test]
fn kahn_has_largest_change_effect() {
    let path = WarmingPath::default();
    let gaps: Vec<(String, f64)> = data::growth_coefficients_of(GrowthKind::Change)
        .iter()
        .map(|c| (c.label.clone(), accumulate_empirical(c, &path).unwrap()))
        .collect();
    let top = gaps.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert_eq!(top.0, "Kahn2019");
    assert!(top.1 > 0.0);
}

#[test]
fn bundled_change_studies_are_transient() {
    let up = WarmingPath::default();
    let mut t = up.temperature.clone();
    t.extend(up.temperature.iter().rev().skip(1));
    let there_and_back = WarmingPath::new((2020..2020 + t.len() as i32).collect(), t).unwrap();
    let mut studies = data::growth_coefficients_of(GrowthKind::Change);
    studies.push(combine_studies(&studies, None).unwrap());
    for c in &studies {
        assert!(accumulate_empirical(c, &there_and_back).unwrap().abs() < 1e-9, "{}", c.label);
    }
}

proptest! {
    #[test]
    fn any_change_response_is_transient(
        a in -0.05f64..0.05,
        b in -0.01f64..0.01,
        steps in proptest::collection::vec(-0.2f64..0.2, 1..60),
    ) {
        let mut t = vec![1.0];
        for s in &steps {
            t.push(t.last().unwrap() + s);
        }
        for s in steps.iter().rev() {
            t.push(t.last().unwrap() - s);
        }
        let path = WarmingPath::new((0..t.len() as i32).collect(), t).unwrap();
        let c = GrowthCoefficients::new("x", GrowthKind::Change, a, b);
        prop_assert!(accumulate_empirical(&c, &path).unwrap().abs() < 1e-9);
    }
}

fn context(config: SccConfig) -> SccContext {
    SccContext::new(&data::scenario(), &data::climate(), &config).unwrap()
}

#[test]
fn default_scenario_warming_in_2020() {
    let path = run_climate(&data::scenario(), &data::climate()).unwrap();
    assert!((path.temperature[10] - 1.1).abs() < 0.15);
}

#[test]
fn zero_emissions_from_preindustrial_stays_at_zero() {
    let core = ClimateCore::default().preindustrial();
    let path = run_climate(&data::scenario().without_emissions(), &core).unwrap();
    assert!(path.temperature.iter().all(|t| *t == 0.0));
}

#[test]
fn scc_is_linear_in_curve_scale() {
    let ctx = context(SccConfig::default());
    let avg = fit_all(&data::catalogue()).unwrap();
    let one = ctx.from_curve(&avg).unwrap();
    let two = ctx.from_curve(&Scaled { curve: |t: f64| avg.evaluate(t), factor: 2.0 }).unwrap();
    assert!((two - 2.0 * one).abs() < 1e-9 * one.abs());
}

#[test]
fn scc_falls_with_time_preference() {
    let curve = DamageFunction::quadratic(-0.17);
    let mut last = f64::INFINITY;
    for prtp in [0.0, 0.01, 0.02, 0.03] {
        let v = context(SccConfig {
            prtp,
            ..SccConfig::default()
        })
        .from_curve(&curve)
        .unwrap();
        assert!(v < last);
        last = v;
    }
}

#[test]
fn pulse_size_is_marginal() {
    let curve = DamageFunction::quadratic(-0.17);
    let full = context(SccConfig::default()).from_curve(&curve).unwrap();
    let half = context(SccConfig {
        pulse_gtc: 0.5,
        ..SccConfig::default()
    })
    .from_curve(&curve)
    .unwrap();
    assert!(((half - full) / full).abs() < 0.01);
}

#[test]
fn zero_growth_response_costs_nothing() {
    let ctx = context(SccConfig::default());
    assert_eq!(ctx.from_growth(&GrowthCoefficients::zero(GrowthKind::Level)).unwrap(), 0.0);
    assert_eq!(ctx.from_growth(&GrowthCoefficients::zero(GrowthKind::Change)).unwrap(), 0.0);
}

#[test]
fn exponential_form_is_cheapest() {
    let ctx = context(SccConfig::default());
    let avg = fit_all(&data::catalogue()).unwrap();
    let scc: Vec<(DamageForm, f64)> = avg
        .fits
        .iter()
        .map(|f| (f.form(), ctx.from_curve(&f.function).unwrap()))
        .collect();
    let min = scc.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert_eq!(min.0, DamageForm::Exponential);
}

#[test]
fn per_estimate_extremes() {
    let ctx = context(SccConfig::default());
    let rows = scc_per_estimate(&data::catalogue(), &ctx).unwrap();
    assert_eq!(rows.len(), 69);
    let max = rows.iter().max_by(|a, b| a.scc.total_cmp(&b.scc)).unwrap();
    assert_eq!(max.study_id, "Horowitz2009");
    let tol = rows.iter().find(|r| r.study_id == "Tol2002ERE1").unwrap();
    assert!(tol.scc < 0.0);
    assert!(weighted_mean_scc(&rows).is_finite());
}

#[test]
fn zero_impact_estimate_costs_nothing() {
    let cat = EstimateCatalogue::new(vec![PrimaryEstimate::new("A", 2.0, 0.0, Method::Cge)]).unwrap();
    let rows = scc_per_estimate(&cat, &context(SccConfig::default())).unwrap();
    assert_eq!(rows[0].scc, 0.0);
}
