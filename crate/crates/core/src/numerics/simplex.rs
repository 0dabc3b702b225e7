//! Nelder–Mead simplex minimization.

use std::cell::Cell;

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Stop when the spread of simplex values and the simplex diameter fall
    /// below this.
    pub tol: f64,
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_evals: 20_000, initial_step: 0.5 }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimize `f` from `x0` with the standard reflection / expansion /
/// contraction / shrink steps.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], opts: SimplexOptions) -> SimplexResult {
    let dim = x0.len();
    if dim == 0 {
        return SimplexResult { x: vec![], value: f(x0), evals: 1, converged: true };
    }
    let evals = Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    let combine = |a: &[f64], b: &[f64], k: f64| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + k * (q - p)).collect() };
    let mut converged = false;
    while evals.get() < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (worst - best).abs() <= opts.tol && diameter <= opts.tol {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let worst_x = simplex[dim].0.clone();
        let reflected = combine(&centroid, &worst_x, -1.0);
        let fr = eval(&reflected);
        if fr < best {
            let expanded = combine(&centroid, &worst_x, -2.0);
            let fe = eval(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let (target, ft) = if fr < worst { (reflected, fr) } else { (worst_x, worst) };
            let contracted = combine(&centroid, &target, 0.5);
            let fc = eval(&contracted);
            if fc < ft {
                simplex[dim] = (contracted, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x = combine(&anchor, &entry.0, 0.5);
                    let fx = eval(&x);
                    *entry = (x, fx);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    SimplexResult { x, value, evals: evals.get(), converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(f, &[-1.2, 1.0], SimplexOptions { tol: 1e-12, ..Default::default() });
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn quadratic_in_five_dims() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2)).sum::<f64>();
        let r = nelder_mead(f, &[0.0; 5], SimplexOptions::default());
        assert!(r.value < 1e-9);
    }
}
