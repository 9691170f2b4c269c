//! Bounded Nelder-Mead simplex search with a fixed multi-start schedule.
//!
//! The search runs in scaled coordinates `z = x / scale` so that parameters of
//! very different magnitudes (a `T²` and a `T⁷` coefficient, say) move on a
//! comparable footing. Box bounds are enforced by projecting every trial
//! vertex onto the box.

/// Settings for a single simplex run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptions {
    /// Function-evaluation budget per start.
    pub max_evals: usize,
    /// Stop when the spread of vertex values falls below this.
    pub ftol: f64,
    /// Stop when the simplex diameter (scaled units) falls below this.
    pub xtol: f64,
    /// Initial edge length in scaled units.
    pub initial_step: f64,
    /// Number of restarts from the best vertex after convergence.
    pub restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_evals: 10_000,
            ftol: 1e-14,
            xtol: 1e-11,
            initial_step: 0.5,
            restarts: 2,
        }
    }
}

/// Inclusive box, `±∞` for unbounded coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn unbounded(dim: usize) -> Self {
        Bounds {
            lower: vec![f64::NEG_INFINITY; dim],
            upper: vec![f64::INFINITY; dim],
        }
    }

    pub fn with(mut self, index: usize, lower: f64, upper: f64) -> Self {
        self.lower[index] = lower;
        self.upper[index] = upper;
        self
    }

    fn project(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[i], self.upper[i]);
        }
    }
}

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// False when the budget ran out before the tolerances were met.
    pub converged: bool,
}

struct Problem<'a, F> {
    f: &'a F,
    scale: &'a [f64],
    bounds: &'a Bounds,
    evals: usize,
}

impl<F: Fn(&[f64]) -> f64> Problem<'_, F> {
    fn to_x(&self, z: &[f64]) -> Vec<f64> {
        let mut x: Vec<f64> = z.iter().zip(self.scale).map(|(z, s)| z * s).collect();
        self.bounds.project(&mut x);
        x
    }

    fn to_z(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(self.scale).map(|(x, s)| x / s).collect()
    }

    /// Evaluates at the projection of `z`, returning the projected `z`.
    fn eval(&mut self, z: &[f64]) -> (Vec<f64>, f64) {
        let x = self.to_x(z);
        self.evals += 1;
        let v = (self.f)(&x);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        (self.to_z(&x), v)
    }
}

/// Minimizes `f` from `x0`.
///
/// `scale` gives the typical magnitude of each coordinate and must be
/// strictly positive.
pub fn minimize<F>(f: &F, x0: &[f64], scale: &[f64], bounds: &Bounds, opts: &SimplexOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    assert_eq!(x0.len(), scale.len(), "scale has wrong dimension");
    assert!(scale.iter().all(|s| *s > 0.0), "scale must be positive");
    let mut problem = Problem {
        f,
        scale,
        bounds,
        evals: 0,
    };
    let mut start = problem.to_z(x0);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut converged = false;
    for round in 0..=opts.restarts {
        let budget = opts.max_evals.saturating_sub(problem.evals);
        if budget == 0 {
            break;
        }
        let step = if round == 0 {
            opts.initial_step
        } else {
            opts.initial_step * 0.1
        };
        let (z, v, ok) = simplex_run(&mut problem, &start, step, budget, opts);
        converged = ok;
        let improved = best.as_ref().is_none_or(|(_, b)| v < *b);
        if improved {
            best = Some((z.clone(), v));
        }
        start = z;
        if !improved && ok {
            break;
        }
    }
    let (z, value) = best.expect("at least one round runs");
    Minimum {
        x: problem.to_x(&z),
        value,
        evals: problem.evals,
        converged,
    }
}

fn simplex_run<F: Fn(&[f64]) -> f64>(
    p: &mut Problem<'_, F>,
    z0: &[f64],
    step: f64,
    budget: usize,
    opts: &SimplexOptions,
) -> (Vec<f64>, f64, bool) {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let n = z0.len();
    let stop_at = p.evals + budget;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push(p.eval(z0));
    for i in 0..n {
        let mut z = simplex[0].0.clone();
        z[i] += step;
        let candidate = p.eval(&z);
        // A vertex pinned to the starting point by a bound degenerates the simplex.
        if candidate.0 == simplex[0].0 {
            z[i] -= 2.0 * step;
            simplex.push(p.eval(&z));
        } else {
            simplex.push(candidate);
        }
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = (simplex[n].1 - simplex[0].1).abs();
        let diameter = simplex[1..]
            .iter()
            .map(|(z, _)| {
                z.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= opts.ftol * (1.0 + simplex[0].1.abs()) && diameter <= opts.xtol {
            let (z, v) = simplex.swap_remove(0);
            return (z, v, true);
        }
        if p.evals >= stop_at {
            let (z, v) = simplex.swap_remove(0);
            return (z, v, false);
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(z, _)| z[j]).sum::<f64>() / n as f64)
            .collect();
        let toward = |coef: f64, worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let worst = simplex[n].0.clone();
        let reflected = p.eval(&toward(REFLECT, &worst));
        if reflected.1 < simplex[0].1 {
            let expanded = p.eval(&toward(EXPAND, &worst));
            simplex[n] = if expanded.1 < reflected.1 { expanded } else { reflected };
            continue;
        }
        if reflected.1 < simplex[n - 1].1 {
            simplex[n] = reflected;
            continue;
        }
        let contracted = if reflected.1 < simplex[n].1 {
            p.eval(&toward(CONTRACT, &worst))
        } else {
            p.eval(&toward(-CONTRACT, &worst))
        };
        if contracted.1 < reflected.1.min(simplex[n].1) {
            simplex[n] = contracted;
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let z: Vec<f64> = anchor
                .iter()
                .zip(&vertex.0)
                .map(|(a, v)| a + SHRINK * (v - a))
                .collect();
            *vertex = p.eval(&z);
        }
    }
}

/// Runs [`minimize`] from every start and keeps the lowest value.
///
/// Ties go to the earliest start, so the result depends only on the inputs
/// and the order of `starts`.
pub fn multi_start<F>(
    f: &F,
    starts: &[Vec<f64>],
    scale: &[f64],
    bounds: &Bounds,
    opts: &SimplexOptions,
) -> Option<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    let mut best: Option<Minimum> = None;
    for x0 in starts {
        let m = minimize(f, x0, scale, bounds, opts);
        if best.as_ref().is_none_or(|b| m.value < b.value) {
            best = Some(m);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn finds_rosenbrock_minimum() {
        let m = minimize(
            &rosenbrock,
            &[-1.2, 1.0],
            &[1.0, 1.0],
            &Bounds::unbounded(2),
            &SimplexOptions::default(),
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn respects_bounds() {
        let f = |x: &[f64]| (x[0] - 5.0).powi(2);
        let bounds = Bounds::unbounded(1).with(0, -1.0, 2.0);
        let m = minimize(&f, &[0.0], &[1.0], &bounds, &SimplexOptions::default());
        assert!((m.x[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_handles_tiny_coefficients() {
        let f = |x: &[f64]| (x[0] - 3e-6).powi(2) * 1e12 + (x[1] + 0.2).powi(2);
        let m = minimize(
            &f,
            &[0.0, 0.0],
            &[1e-6, 0.1],
            &Bounds::unbounded(2),
            &SimplexOptions::default(),
        );
        assert!((m.x[0] - 3e-6).abs() < 1e-12);
        assert!((m.x[1] + 0.2).abs() < 1e-7);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let opts = SimplexOptions {
            max_evals: 10,
            ..SimplexOptions::default()
        };
        let m = minimize(&rosenbrock, &[-1.2, 1.0], &[1.0, 1.0], &Bounds::unbounded(2), &opts);
        assert!(!m.converged);
        assert!(m.evals <= 10 + 3);
    }

    #[test]
    fn multi_start_escapes_local_minimum() {
        let f = |x: &[f64]| (x[0] * x[0] - 4.0).powi(2) + x[0];
        let starts = vec![vec![1.5], vec![-1.5]];
        let m = multi_start(&f, &starts, &[1.0], &Bounds::unbounded(1), &SimplexOptions::default()).unwrap();
        assert!(m.x[0] < 0.0);
    }
}
