//! Parametric impact functions of warming.
//!
//! Every form maps warming `T` (°C above pre-industrial) to an impact in
//! percent of GDP and vanishes at `T = 0` for any parameter values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that maps warming to an impact in percent of GDP.
pub trait DamageCurve {
    fn impact_at(&self, warming: f64) -> f64;
}

impl<F> DamageCurve for F
where
    F: Fn(f64) -> f64,
{
    fn impact_at(&self, warming: f64) -> f64 {
        self(warming)
    }
}

/// The eight candidate impact functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DamageForm {
    /// `a·T + b·T²`
    Parabolic,
    /// `−sinh(b·T)`
    HyperbolicSine,
    /// `a·T²`
    Quadratic,
    /// `a·T² + b·T⁶`
    Weitzman6,
    /// `a·T² + b·T⁷`
    Weitzman7,
    /// `a·T`
    Linear,
    /// `a·T` up to the threshold `τ`, then `a·τ + c·(T − τ)`.
    PiecewiseLinear,
    /// `c·(1 − eᵀ)`
    Exponential,
}

impl DamageForm {
    pub const ALL: [DamageForm; 8] = [
        DamageForm::Parabolic,
        DamageForm::HyperbolicSine,
        DamageForm::Quadratic,
        DamageForm::Weitzman6,
        DamageForm::Weitzman7,
        DamageForm::Linear,
        DamageForm::PiecewiseLinear,
        DamageForm::Exponential,
    ];

    pub fn n_params(self) -> usize {
        match self {
            DamageForm::Parabolic | DamageForm::Weitzman6 | DamageForm::Weitzman7 => 2,
            DamageForm::PiecewiseLinear => 3,
            _ => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DamageForm::Parabolic => "parabolic",
            DamageForm::HyperbolicSine => "hyperbolic_sine",
            DamageForm::Quadratic => "quadratic",
            DamageForm::Weitzman6 => "weitzman6",
            DamageForm::Weitzman7 => "weitzman7",
            DamageForm::Linear => "linear",
            DamageForm::PiecewiseLinear => "piecewise_linear",
            DamageForm::Exponential => "exponential",
        }
    }

    /// Evaluates the form at `t` with the given parameters.
    ///
    /// # Panics
    ///
    /// If `params` is shorter than [`DamageForm::n_params`].
    pub fn eval(self, params: &[f64], t: f64) -> f64 {
        match self {
            DamageForm::Parabolic => params[0] * t + params[1] * t * t,
            DamageForm::HyperbolicSine => -(params[0] * t).sinh(),
            DamageForm::Quadratic => params[0] * t * t,
            DamageForm::Weitzman6 => params[0] * t * t + params[1] * t.powi(6),
            DamageForm::Weitzman7 => params[0] * t * t + params[1] * t.powi(7),
            DamageForm::Linear => params[0] * t,
            DamageForm::PiecewiseLinear => {
                let (lower, threshold, upper) = (params[0], params[1], params[2]);
                if t <= threshold {
                    lower * t
                } else {
                    lower * threshold + upper * (t - threshold)
                }
            }
            DamageForm::Exponential => params[0] * (1.0 - t.exp()),
        }
    }
}

impl fmt::Display for DamageForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DamageForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        DamageForm::ALL
            .into_iter()
            .find(|f| f.as_str() == key)
            .or(match key.as_str() {
                "sinh" => Some(DamageForm::HyperbolicSine),
                "piecewise" => Some(DamageForm::PiecewiseLinear),
                "exp" => Some(DamageForm::Exponential),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidInput(format!("unknown impact function `{s}`")))
    }
}

/// A form together with concrete parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DamageFunction {
    pub form: DamageForm,
    pub params: Vec<f64>,
}

impl DamageFunction {
    pub fn new(form: DamageForm, params: Vec<f64>) -> Result<Self> {
        if params.len() != form.n_params() {
            return Err(Error::InvalidInput(format!(
                "{form} takes {} parameters, got {}",
                form.n_params(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("{form}: non-finite parameter")));
        }
        Ok(DamageFunction { form, params })
    }

    /// `coefficient · T²`, the single-parameter form fitted to individual estimates.
    pub fn quadratic(coefficient: f64) -> Self {
        DamageFunction {
            form: DamageForm::Quadratic,
            params: vec![coefficient],
        }
    }

    pub fn evaluate(&self, warming: f64) -> f64 {
        self.form.eval(&self.params, warming)
    }

    /// Human-readable formula, e.g. `-0.17*T^2`.
    pub fn formula(&self) -> String {
        let p = &self.params;
        match self.form {
            DamageForm::Parabolic => format!("{:.4}*T + {:.4}*T^2", p[0], p[1]),
            DamageForm::HyperbolicSine => format!("-sinh({:.4}*T)", p[0]),
            DamageForm::Quadratic => format!("{:.4}*T^2", p[0]),
            DamageForm::Weitzman6 => format!("{:.4}*T^2 + {:.4e}*T^6", p[0], p[1]),
            DamageForm::Weitzman7 => format!("{:.4}*T^2 + {:.4e}*T^7", p[0], p[1]),
            DamageForm::Linear => format!("{:.4}*T", p[0]),
            DamageForm::PiecewiseLinear => format!(
                "{:.4}*T if T <= {:.2}, else {:.4}*{:.2} + {:.4}*(T - {:.2})",
                p[0], p[1], p[0], p[1], p[2], p[1]
            ),
            DamageForm::Exponential => format!("{:.4e}*(1 - exp(T))", p[0]),
        }
    }
}

impl DamageCurve for DamageFunction {
    fn impact_at(&self, warming: f64) -> f64 {
        self.evaluate(warming)
    }
}

/// A curve multiplied by a constant.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<C> {
    pub curve: C,
    pub factor: f64,
}

impl<C: DamageCurve> DamageCurve for Scaled<C> {
    fn impact_at(&self, warming: f64) -> f64 {
        self.factor * self.curve.impact_at(warming)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params_for(form: DamageForm, raw: &[f64; 3]) -> Vec<f64> {
        let mut p = raw[..form.n_params()].to_vec();
        if form == DamageForm::PiecewiseLinear {
            p[1] = p[1].abs() + 2.0;
        }
        p
    }

    proptest! {
        #[test]
        fn every_form_vanishes_at_zero(a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64) {
            for form in DamageForm::ALL {
                let p = params_for(form, &[a, b, c]);
                prop_assert_eq!(form.eval(&p, 0.0), 0.0);
            }
        }

        #[test]
        fn piecewise_continuous_at_threshold(a in -2.0..2.0f64, th in 2.0..16.0f64, c in -20.0..20.0f64) {
            let f = |t| DamageForm::PiecewiseLinear.eval(&[a, th, c], t);
            let eps = 1e-9;
            prop_assert!((f(th - eps) - f(th + eps)).abs() < 1e-6);
            prop_assert_eq!(f(th), a * th);
        }
    }

    #[test]
    fn sinh_matches_exponential_quotient() {
        let b: f64 = 0.40;
        for t in [0.5f64, 1.0, 2.5, 4.3] {
            let quotient = (1.0 - (2.0 * b * t).exp()) / (2.0 * (b * t).exp());
            let v = DamageForm::HyperbolicSine.eval(&[b], t);
            assert!((v - quotient).abs() < 1e-12);
        }
    }

    #[test]
    fn published_exponential_shape() {
        // 0.0077 - 0.0077 e^T
        let v = DamageForm::Exponential.eval(&[0.0077], 2.0);
        assert!((v - (0.0077 - 0.0077 * 2f64.exp())).abs() < 1e-15);
    }

    #[test]
    fn parses_names_and_aliases() {
        assert_eq!("exponential".parse::<DamageForm>().unwrap(), DamageForm::Exponential);
        assert_eq!("piecewise-linear".parse::<DamageForm>().unwrap(), DamageForm::PiecewiseLinear);
        assert_eq!("sinh".parse::<DamageForm>().unwrap(), DamageForm::HyperbolicSine);
        assert!("cubic".parse::<DamageForm>().is_err());
    }

    #[test]
    fn wrong_parameter_count_rejected() {
        assert!(DamageFunction::new(DamageForm::Parabolic, vec![1.0]).is_err());
    }
}
