use nalgebra::{DMatrix, DVector};

/// Stopping rules for the damped Newton iteration.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200 }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub x: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |a, x| if x.is_nan() { f64::NAN } else { a.max(x.abs()) })
}

/// Newton's method with step halving whenever the max-norm residual would
/// grow. After reaching `tol` a few polishing steps are taken while they help.
pub fn damped_newton<F, J>(x0: DVector<f64>, f: F, jac: J, opts: NewtonOptions) -> NewtonOutcome
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
    J: Fn(&DVector<f64>) -> DMatrix<f64>,
{
    let mut x = x0;
    let mut fx = f(&x);
    let mut r = max_abs(&fx);
    let mut iterations = 0;
    let mut polish = 0;
    while iterations < opts.max_iter && r.is_finite() {
        if r < opts.tol {
            polish += 1;
            if polish > 3 || r == 0.0 {
                break;
            }
        }
        let Some(step) = jac(&x).lu().solve(&(-&fx)) else { break };
        if !step.iter().all(|s| s.is_finite()) {
            break;
        }
        iterations += 1;
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-10 {
            let xn = &x + &step * t;
            let fn_ = f(&xn);
            let rn = max_abs(&fn_);
            if rn < r {
                accepted = Some((xn, fn_, rn));
                break;
            }
            t /= 2.0;
        }
        match accepted {
            Some((xn, fn_, rn)) => {
                x = xn;
                fx = fn_;
                r = rn;
            }
            None => break,
        }
    }
    NewtonOutcome { converged: r < opts.tol, x, residual: r, iterations }
}
