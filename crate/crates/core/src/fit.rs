//! Study-weighted least-squares fits of the impact forms, model averaging
//! and the asymmetric uncertainty band.
//!
//! # Sample rule
//!
//! The smooth forms are fitted to the *core sample*, the estimates at or
//! below [`FitOptions::core_cutoff`] (8 °C by default), reweighted so every
//! surviving study again carries weight one. The piecewise-linear form is
//! the one form whose upper segment is identified only by the very large
//! warming estimates, so it is fitted to the full catalogue. Fit quality
//! (`wsse`) and the model weights are always evaluated on the core sample,
//! which makes the eight forms comparable. Setting the cutoff to `None`
//! fits and evaluates every form on the full catalogue.
//!
//! # Model weights
//!
//! With `n` the total study weight of the evaluation sample, form `m`
//! receives weight proportional to `(wsse_m / n)^(−n/2)`, the Gaussian
//! likelihood at the maximum-likelihood error variance. There is no
//! penalty for parameter count; [`bma_weights`] is the one place to change
//! that.

use nalgebra::{DMatrix, DVector};

use crate::damage::{DamageCurve, DamageForm, DamageFunction};
use crate::error::{Error, Result};
use crate::estimates::{EstimateCatalogue, Method, PrimaryEstimate};
use crate::optimize::{multi_start, Bounds, SimplexOptions};

/// Lower and upper bound of the piecewise-linear threshold, °C.
pub const THRESHOLD_BOUNDS: (f64, f64) = (2.0, 16.0);

/// Half-width of a 90% normal interval in standard deviations.
pub const Z90: f64 = 1.645;

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Warming (°C) above which estimates leave the core sample.
    pub core_cutoff: Option<f64>,
    pub simplex: SimplexOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            core_cutoff: Some(8.0),
            simplex: SimplexOptions::default(),
        }
    }
}

/// A fitted form and its quality of fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub function: DamageFunction,
    /// Weighted SSE on the evaluation (core) sample, %GDP².
    pub wsse: f64,
    /// Weighted SSE on the sample the form was fitted to.
    pub fit_wsse: f64,
    /// Total study weight of the evaluation sample.
    pub n_eff: f64,
    /// Number of estimates in the evaluation sample.
    pub n_used: usize,
    /// Model-average weight; zero until set by [`fit_all`].
    pub bma_weight: f64,
    pub converged: bool,
}

impl FitResult {
    pub fn form(&self) -> DamageForm {
        self.function.form
    }
}

impl DamageCurve for FitResult {
    fn impact_at(&self, warming: f64) -> f64 {
        self.function.evaluate(warming)
    }
}

/// Σ wᵢ (impactᵢ − curve(warmingᵢ))².
pub fn weighted_sse<C: DamageCurve + ?Sized>(curve: &C, catalogue: &EstimateCatalogue) -> f64 {
    catalogue
        .iter()
        .map(|(e, w)| w * (e.impact - curve.impact_at(e.warming)).powi(2))
        .sum()
}

struct Sample {
    t: Vec<f64>,
    d: Vec<f64>,
    w: Vec<f64>,
}

impl Sample {
    fn from(catalogue: &EstimateCatalogue) -> Self {
        Sample {
            t: catalogue.estimates().iter().map(|e| e.warming).collect(),
            d: catalogue.estimates().iter().map(|e| e.impact).collect(),
            w: catalogue.weights().to_vec(),
        }
    }

    fn sse(&self, form: DamageForm, p: &[f64]) -> f64 {
        self.t
            .iter()
            .zip(&self.d)
            .zip(&self.w)
            .map(|((t, d), w)| w * (d - form.eval(p, *t)).powi(2))
            .sum()
    }
}

/// Fits `form` to the catalogue with the default options.
pub fn fit(form: DamageForm, catalogue: &EstimateCatalogue) -> Result<FitResult> {
    fit_with(form, catalogue, &FitOptions::default())
}

pub fn fit_with(form: DamageForm, catalogue: &EstimateCatalogue, opts: &FitOptions) -> Result<FitResult> {
    let core = core_sample(catalogue, opts)?;
    let fit_sample = match form {
        DamageForm::PiecewiseLinear => catalogue.clone(),
        _ => core.clone(),
    };
    let (params, fit_wsse, converged) = minimize_form(form, &fit_sample, &opts.simplex)?;
    let function = DamageFunction::new(form, params)
        .map_err(|e| Error::Numerical(format!("{form}: {e}")))?;
    let wsse = weighted_sse(&function, &core);
    Ok(FitResult {
        function,
        wsse,
        fit_wsse,
        n_eff: core.total_weight(),
        n_used: core.len(),
        bma_weight: 0.0,
        converged,
    })
}

fn core_sample(catalogue: &EstimateCatalogue, opts: &FitOptions) -> Result<EstimateCatalogue> {
    match opts.core_cutoff {
        Some(cut) => catalogue.up_to_warming(cut).map_err(|_| Error::EmptyCatalogue {
            context: Some(format!("no estimate at or below {cut} °C")),
        }),
        None => Ok(catalogue.clone()),
    }
}

fn minimize_form(
    form: DamageForm,
    catalogue: &EstimateCatalogue,
    simplex: &SimplexOptions,
) -> Result<(Vec<f64>, f64, bool)> {
    let levels = catalogue.distinct_warming_levels();
    if levels < form.n_params() {
        return Err(Error::Degenerate(format!(
            "{form} needs {} distinct warming levels, catalogue has {levels}",
            form.n_params()
        )));
    }
    let sample = Sample::from(catalogue);
    let objective = |p: &[f64]| sample.sse(form, p);
    let n = form.n_params();
    let mut bounds = Bounds::unbounded(n);
    if form == DamageForm::PiecewiseLinear {
        bounds = bounds.with(1, THRESHOLD_BOUNDS.0, THRESHOLD_BOUNDS.1);
    }
    let starts = start_grid(form, &sample);
    let best = multi_start(&objective, &starts, &param_scale(form), &bounds, simplex)
        .ok_or_else(|| Error::Numerical(format!("{form}: empty start grid")))?;
    let (mut params, mut value) = (best.x, best.value);

    if let Some(exact) = exact_solution(form, &sample, &params) {
        let v = objective(&exact);
        if v <= value {
            params = exact;
            value = v;
        }
    }
    if !value.is_finite() {
        return Err(Error::Numerical(format!("{form}: objective diverged")));
    }
    Ok((params, value, best.converged))
}

/// Typical parameter magnitudes, used to scale the simplex.
fn param_scale(form: DamageForm) -> Vec<f64> {
    match form {
        DamageForm::Parabolic => vec![0.1, 0.01],
        DamageForm::HyperbolicSine => vec![0.1],
        DamageForm::Quadratic => vec![0.1],
        DamageForm::Weitzman6 => vec![0.1, 1e-5],
        DamageForm::Weitzman7 => vec![0.1, 1e-6],
        DamageForm::Linear => vec![0.1],
        DamageForm::PiecewiseLinear => vec![0.1, 1.0, 1.0],
        DamageForm::Exponential => vec![1e-3],
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// The fixed 16-point start schedule of each form.
///
/// One-parameter forms use 16 evenly spaced values; two-parameter forms a
/// 4 × 4 grid; the piecewise form 16 evenly spaced thresholds over its
/// bounds, each paired with the slopes that are optimal at that threshold.
fn start_grid(form: DamageForm, sample: &Sample) -> Vec<Vec<f64>> {
    let grid2 = |a: [f64; 4], b: [f64; 4]| -> Vec<Vec<f64>> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| vec![x, y])).collect()
    };
    match form {
        DamageForm::Parabolic => grid2([-1.0, -0.4, 0.0, 0.5], [-0.2, -0.08, 0.0, 0.05]),
        DamageForm::HyperbolicSine => linspace(-0.3, 1.2, 16).map(|b| vec![b]).collect(),
        DamageForm::Quadratic => linspace(-1.0, 0.5, 16).map(|a| vec![a]).collect(),
        DamageForm::Weitzman6 => grid2([-0.4, -0.2, 0.0, 0.2], [-1e-4, -1e-5, 1e-5, 1e-4]),
        DamageForm::Weitzman7 => grid2([-0.4, -0.2, 0.0, 0.2], [-1e-5, -1e-6, 1e-6, 1e-5]),
        DamageForm::Linear => linspace(-2.0, 1.0, 16).map(|a| vec![a]).collect(),
        DamageForm::PiecewiseLinear => linspace(THRESHOLD_BOUNDS.0, THRESHOLD_BOUNDS.1, 16)
            .map(|th| {
                let [lo, hi] = piecewise_slopes(sample, th).unwrap_or([-0.8, -0.8]);
                vec![lo, th, hi]
            })
            .collect(),
        DamageForm::Exponential => [1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3]
            .into_iter()
            .flat_map(|c| [c, -c])
            .collect::<Vec<f64>>()
            .into_iter()
            .map(|c| vec![c])
            .collect(),
    }
}

/// Closed-form optimum for the forms that are linear in their parameters.
///
/// For the piecewise form the threshold found by the simplex is kept and
/// the two slopes are solved exactly.
fn exact_solution(form: DamageForm, sample: &Sample, current: &[f64]) -> Option<Vec<f64>> {
    let basis: Vec<fn(f64) -> f64> = match form {
        DamageForm::Parabolic => vec![|t| t, |t| t * t],
        DamageForm::Quadratic => vec![|t| t * t],
        DamageForm::Weitzman6 => vec![|t| t * t, |t| t.powi(6)],
        DamageForm::Weitzman7 => vec![|t| t * t, |t| t.powi(7)],
        DamageForm::Linear => vec![|t| t],
        DamageForm::PiecewiseLinear => {
            let th = current[1];
            return piecewise_slopes(sample, th).map(|[lo, hi]| vec![lo, th, hi]);
        }
        DamageForm::HyperbolicSine | DamageForm::Exponential => return None,
    };
    let columns: Vec<Vec<f64>> = basis
        .iter()
        .map(|g| sample.t.iter().map(|&t| g(t)).collect())
        .collect();
    weighted_least_squares(&columns, &sample.d, &sample.w)
}

/// Slopes below and above `threshold` minimizing the weighted SSE.
fn piecewise_slopes(sample: &Sample, threshold: f64) -> Option<[f64; 2]> {
    let below = sample.t.iter().map(|&t| t.min(threshold)).collect();
    let above = sample.t.iter().map(|&t| (t - threshold).max(0.0)).collect();
    let b = weighted_least_squares(&[below, above], &sample.d, &sample.w)?;
    Some([b[0], b[1]])
}

/// Weighted least squares through the origin on the given regressors.
///
/// Columns are normalized before the SVD solve; a rank-deficient design
/// yields the minimum-norm solution, an all-zero column yields a zero
/// coefficient.
pub(crate) fn weighted_least_squares(columns: &[Vec<f64>], y: &[f64], w: &[f64]) -> Option<Vec<f64>> {
    let n = y.len();
    let k = columns.len();
    let norms: Vec<f64> = columns
        .iter()
        .map(|c| {
            let s = c.iter().zip(w).map(|(x, w)| w * x * x).sum::<f64>().sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let x = DMatrix::from_fn(n, k, |i, j| w[i].sqrt() * columns[j][i] / norms[j]);
    let rhs = DVector::from_fn(n, |i, _| w[i].sqrt() * y[i]);
    let svd = x.svd(true, true);
    let beta = svd.solve(&rhs, 1e-12).ok()?;
    let out: Vec<f64> = beta.iter().zip(&norms).map(|(b, s)| b / s).collect();
    out.iter().all(|v| v.is_finite()).then_some(out)
}

/// Model-average weights of fits that share one evaluation sample.
///
/// A form with zero error takes all the weight (shared equally if several
/// do).
pub fn bma_weights(fits: &[FitResult]) -> Result<Vec<f64>> {
    let first = fits
        .first()
        .ok_or_else(|| Error::InvalidInput("no fits to weight".into()))?;
    let n = first.n_eff;
    if fits.iter().any(|f| (f.n_eff - n).abs() > 1e-9 || f.n_used != first.n_used) {
        return Err(Error::InvalidInput(
            "fits were evaluated on different samples".into(),
        ));
    }
    let exact = fits.iter().filter(|f| f.wsse == 0.0).count();
    if exact > 0 {
        return Ok(fits
            .iter()
            .map(|f| if f.wsse == 0.0 { 1.0 / exact as f64 } else { 0.0 })
            .collect());
    }
    let log_lik: Vec<f64> = fits.iter().map(|f| -0.5 * n * (f.wsse / n).ln()).collect();
    let top = log_lik.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = log_lik.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|r| r / total).collect())
}

/// The fitted forms with their model weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelAverage {
    pub fits: Vec<FitResult>,
    /// Forms left out because the sample could not identify them.
    pub omitted: Vec<(DamageForm, String)>,
}

impl ModelAverage {
    /// Σ weight_m · f_m(T).
    pub fn evaluate(&self, warming: f64) -> f64 {
        self.fits
            .iter()
            .map(|f| f.bma_weight * f.function.evaluate(warming))
            .sum()
    }

    /// Form with the highest weight.
    pub fn best(&self) -> &FitResult {
        self.fits
            .iter()
            .reduce(|a, b| if b.bma_weight > a.bma_weight { b } else { a })
            .expect("a model average holds at least one fit")
    }

    pub fn get(&self, form: DamageForm) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.form() == form)
    }
}

impl DamageCurve for ModelAverage {
    fn impact_at(&self, warming: f64) -> f64 {
        self.evaluate(warming)
    }
}

/// Fits all eight forms with the default options and weights them.
pub fn fit_all(catalogue: &EstimateCatalogue) -> Result<ModelAverage> {
    fit_all_with(catalogue, &FitOptions::default())
}

/// Fits all eight forms and weights them, omitting forms the sample cannot
/// identify.
pub fn fit_all_with(catalogue: &EstimateCatalogue, opts: &FitOptions) -> Result<ModelAverage> {
    let mut fits = Vec::new();
    let mut omitted = Vec::new();
    for form in DamageForm::ALL {
        match fit_with(form, catalogue, opts) {
            Ok(f) => fits.push(f),
            Err(e @ Error::Degenerate(_)) => omitted.push((form, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    if fits.is_empty() {
        return Err(Error::Degenerate("no form can be fitted".into()));
    }
    let weights = bma_weights(&fits)?;
    for (f, w) in fits.iter_mut().zip(weights) {
        f.bma_weight = w;
    }
    Ok(ModelAverage { fits, omitted })
}

/// Model averages for the full catalogue and for each method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodFits {
    /// `None` for the full catalogue.
    pub method: Option<Method>,
    pub n_studies: usize,
    pub average: ModelAverage,
}

/// Fits every method subset and the full set; methods with no estimates
/// are skipped.
pub fn fit_all_methods(catalogue: &EstimateCatalogue, opts: &FitOptions) -> Result<Vec<MethodFits>> {
    let mut out = Vec::new();
    let subsets = std::iter::once(None).chain(Method::ALL.into_iter().map(Some));
    for method in subsets {
        let subset = match method {
            None => catalogue.clone(),
            Some(m) => match catalogue.filter_by_method(m) {
                Ok(s) => s,
                Err(Error::EmptyCatalogue { .. }) => continue,
                Err(e) => return Err(e),
            },
        };
        out.push(MethodFits {
            method,
            n_studies: subset.n_studies(),
            average: fit_all_with(&subset, opts)?,
        });
    }
    Ok(out)
}

/// Linear-in-warming uncertainty band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceBand {
    /// Slope of the regression of lower bounds on warming, %GDP per °C.
    pub lower_slope: f64,
    /// Slope of the regression of upper bounds on warming, %GDP per °C.
    pub upper_slope: f64,
    pub sd_pos_per_degree: f64,
    pub sd_neg_per_degree: f64,
    /// Estimates carrying uncertainty information.
    pub n_estimates: usize,
    pub n_studies: usize,
}

impl ConfidenceBand {
    /// Lower 90% bound around `central` at `warming`.
    pub fn lower(&self, central: f64, warming: f64) -> f64 {
        central - Z90 * self.sd_neg_per_degree * warming.abs()
    }

    /// Upper 90% bound around `central` at `warming`.
    pub fn upper(&self, central: f64, warming: f64) -> f64 {
        central + Z90 * self.sd_pos_per_degree * warming.abs()
    }
}

/// Interval of one uncertain estimate as (lower, upper).
///
/// A reported min/max is taken as a 90% interval and preferred over a
/// standard deviation; a missing side falls back on the standard deviation,
/// then on the central value.
pub fn estimate_interval(e: &PrimaryEstimate) -> (f64, f64) {
    let from_sd = e.sd.map(|s| (e.impact - Z90 * s, e.impact + Z90 * s));
    let lower = e.min_impact.or(from_sd.map(|b| b.0)).unwrap_or(e.impact);
    let upper = e.max_impact.or(from_sd.map(|b| b.1)).unwrap_or(e.impact);
    (lower, upper)
}

/// Fits the band to the estimates that report uncertainty, reweighted so
/// each contributing study carries weight one.
pub fn fit_bounds(catalogue: &EstimateCatalogue) -> Result<ConfidenceBand> {
    let uncertain = catalogue
        .filter(PrimaryEstimate::is_uncertain)
        .map_err(|_| Error::Degenerate("no estimate reports uncertainty".into()))?;
    if uncertain.len() < 2 {
        return Err(Error::Degenerate(
            "fewer than two estimates report uncertainty".into(),
        ));
    }
    if uncertain.distinct_warming_levels() < 2 {
        return Err(Error::Degenerate(
            "all uncertain estimates share one warming level".into(),
        ));
    }
    let mut t = Vec::new();
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let mut up_dev = Vec::new();
    let mut dn_dev = Vec::new();
    for e in uncertain.estimates() {
        let (l, u) = estimate_interval(e);
        t.push(e.warming);
        lo.push(l);
        hi.push(u);
        up_dev.push((u - e.impact) / Z90);
        dn_dev.push((e.impact - l) / Z90);
    }
    let w = uncertain.weights();
    let sxx: f64 = t.iter().zip(w).map(|(t, w)| w * t * t).sum();
    if sxx <= 0.0 {
        return Err(Error::Degenerate("all uncertain estimates at zero warming".into()));
    }
    let slope = |y: &[f64]| -> f64 {
        t.iter().zip(y).zip(w).map(|((t, y), w)| w * t * y).sum::<f64>() / sxx
    };
    Ok(ConfidenceBand {
        lower_slope: slope(&lo),
        upper_slope: slope(&hi),
        sd_pos_per_degree: slope(&up_dev).max(0.0),
        sd_neg_per_degree: slope(&dn_dev).max(0.0),
        n_estimates: uncertain.len(),
        n_studies: uncertain.n_studies(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(form: DamageForm, params: &[f64], temps: &[f64]) -> EstimateCatalogue {
        let rows = temps
            .iter()
            .enumerate()
            .map(|(i, &t)| PrimaryEstimate::new(&format!("S{i}"), t, form.eval(params, t), Method::Cge))
            .collect();
        EstimateCatalogue::new(rows).unwrap()
    }

    #[test]
    fn recovers_exact_quadratic() {
        let cat = synthetic(DamageForm::Quadratic, &[-0.25], &[1.0, 2.0, 2.5, 3.0, 4.0]);
        let f = fit(DamageForm::Quadratic, &cat).unwrap();
        assert!((f.function.params[0] + 0.25).abs() < 1e-8);
        assert!(f.wsse < 1e-20);
    }

    #[test]
    fn recovers_exact_sinh_and_exponential() {
        let temps = [0.5, 1.0, 2.0, 3.0, 5.0];
        let f = fit(DamageForm::HyperbolicSine, &synthetic(DamageForm::HyperbolicSine, &[0.37], &temps)).unwrap();
        assert!((f.function.params[0] - 0.37).abs() < 1e-8, "{:?}", f.function);
        let f = fit(DamageForm::Exponential, &synthetic(DamageForm::Exponential, &[0.0091], &temps)).unwrap();
        assert!((f.function.params[0] - 0.0091).abs() < 1e-10, "{:?}", f.function);
    }

    #[test]
    fn recovers_exact_piecewise() {
        let temps = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 9.0, 12.0, 15.0];
        let cat = synthetic(DamageForm::PiecewiseLinear, &[-0.5, 6.5, -3.0], &temps);
        let f = fit_with(
            DamageForm::PiecewiseLinear,
            &cat,
            &FitOptions {
                core_cutoff: None,
                ..FitOptions::default()
            },
        )
        .unwrap();
        let p = &f.function.params;
        assert!((p[0] + 0.5).abs() < 1e-8 && (p[1] - 6.5).abs() < 1e-6 && (p[2] + 3.0).abs() < 1e-6, "{p:?}");
    }

    #[test]
    fn multi_parameter_form_needs_spread() {
        let rows = vec![
            PrimaryEstimate::new("A", 2.5, -1.0, Method::Cge),
            PrimaryEstimate::new("B", 2.5, -2.0, Method::Cge),
        ];
        let cat = EstimateCatalogue::new(rows).unwrap();
        assert!(matches!(fit(DamageForm::Parabolic, &cat), Err(Error::Degenerate(_))));
        assert!(fit(DamageForm::Quadratic, &cat).is_ok());
    }

    #[test]
    fn identical_fit_quality_splits_weight() {
        let base = FitResult {
            function: DamageFunction::quadratic(-0.2),
            wsse: 3.0,
            fit_wsse: 3.0,
            n_eff: 10.0,
            n_used: 12,
            bma_weight: 0.0,
            converged: true,
        };
        let mut other = base.clone();
        other.function = DamageFunction::new(DamageForm::Linear, vec![-0.7]).unwrap();
        let w = bma_weights(&[base, other]).unwrap();
        assert_eq!(w, vec![0.5, 0.5]);
    }

    #[test]
    fn zero_error_form_takes_all_weight() {
        let mut a = FitResult {
            function: DamageFunction::quadratic(-0.2),
            wsse: 0.0,
            fit_wsse: 0.0,
            n_eff: 4.0,
            n_used: 4,
            bma_weight: 0.0,
            converged: true,
        };
        let mut b = a.clone();
        b.wsse = 1.0;
        let w = bma_weights(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(w, vec![1.0, 0.0]);
        a.n_eff = 5.0;
        assert!(bma_weights(&[a, b]).is_err());
    }

    #[test]
    fn zero_sd_gives_zero_width_band() {
        let rows = vec![
            PrimaryEstimate::new("A", 1.0, -0.5, Method::Cge).with_sd(0.0),
            PrimaryEstimate::new("B", 3.0, -2.0, Method::Cge).with_sd(0.0),
            PrimaryEstimate::new("C", 2.0, -1.0, Method::Cge),
        ];
        let band = fit_bounds(&EstimateCatalogue::new(rows).unwrap()).unwrap();
        assert_eq!(band.sd_pos_per_degree, 0.0);
        assert_eq!(band.sd_neg_per_degree, 0.0);
        assert_eq!(band.n_estimates, 2);
        assert_eq!(band.lower(-1.0, 3.0), band.upper(-1.0, 3.0));
    }

    #[test]
    fn band_needs_uncertain_estimates() {
        let rows = vec![PrimaryEstimate::new("A", 1.0, -0.5, Method::Cge)];
        assert!(fit_bounds(&EstimateCatalogue::new(rows).unwrap()).is_err());
    }

    #[test]
    fn range_preferred_over_sd() {
        let e = PrimaryEstimate::new("A", 3.0, -2.0, Method::Cge)
            .with_sd(1.0)
            .with_range(-5.0, 0.0);
        assert_eq!(estimate_interval(&e), (-5.0, 0.0));
        let e = PrimaryEstimate::new("A", 3.0, -2.0, Method::Cge).with_sd(1.0);
        let (l, u) = estimate_interval(&e);
        assert!((l + 2.0 + Z90).abs() < 1e-12 && (u + 2.0 - Z90).abs() < 1e-12);
    }
}
