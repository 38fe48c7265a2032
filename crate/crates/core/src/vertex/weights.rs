use crate::error::{domain, Result};
use crate::{c, C64};
use nalgebra::{Matrix4, SMatrix};
use serde::{Deserialize, Serialize};

/// Trigonometric parameterization `a = rho sh(lambda + eta)`,
/// `b = rho sh(lambda)`, `c = rho sh(eta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameterization {
    pub rho: C64,
    pub lambda: C64,
    pub eta: C64,
}

impl Parameterization {
    pub fn weights_at(&self, lambda: C64) -> (C64, C64, C64) {
        (self.rho * (lambda + self.eta).sinh(), self.rho * lambda.sinh(), self.rho * self.eta.sinh())
    }
}

/// Boltzmann weights of the six allowed vertices.
///
/// Direct weights carry no spectral parameter: the `lambda` argument of
/// [`monodromy`](super::monodromy) and friends is ignored for them, and they
/// cannot carry inhomogeneities.
///
/// JSON form: `{a, b, c}` or `{rho, lambda, eta, xi?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "WeightsJson", into = "WeightsJson")]
pub struct VertexWeights {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub parameterization: Option<Parameterization>,
    pub inhomogeneities: Option<Vec<C64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightsJson {
    Parameterized {
        rho: C64,
        lambda: C64,
        eta: C64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        xi: Option<Vec<C64>>,
    },
    Direct {
        a: C64,
        b: C64,
        c: C64,
    },
}

impl From<WeightsJson> for VertexWeights {
    fn from(w: WeightsJson) -> Self {
        match w {
            WeightsJson::Direct { a, b, c } => Self::direct(a, b, c),
            WeightsJson::Parameterized { rho, lambda, eta, xi } => {
                Self { inhomogeneities: xi, ..Self::parameterized(rho, lambda, eta) }
            }
        }
    }
}

impl From<VertexWeights> for WeightsJson {
    fn from(w: VertexWeights) -> Self {
        match w.parameterization {
            Some(p) => WeightsJson::Parameterized { rho: p.rho, lambda: p.lambda, eta: p.eta, xi: w.inhomogeneities },
            None => WeightsJson::Direct { a: w.a, b: w.b, c: w.c },
        }
    }
}

impl VertexWeights {
    pub fn direct(a: C64, b: C64, c: C64) -> Self {
        Self { a, b, c, parameterization: None, inhomogeneities: None }
    }

    /// `a = b = c = 1`.
    pub fn ice() -> Self {
        Self::direct(c(1.0), c(1.0), c(1.0))
    }

    pub fn parameterized(rho: C64, lambda: C64, eta: C64) -> Self {
        let p = Parameterization { rho, lambda, eta };
        let (a, b, cc) = p.weights_at(lambda);
        Self { a, b, c: cc, parameterization: Some(p), inhomogeneities: None }
    }

    /// Attaches per-site inhomogeneities `xi_j`; needs a parameterization.
    pub fn with_inhomogeneities(mut self, xi: Vec<C64>) -> Result<Self> {
        if self.parameterization.is_none() {
            return domain("inhomogeneities need parameterized weights");
        }
        self.inhomogeneities = Some(xi);
        Ok(self)
    }

    /// Recovers `(rho, lambda, eta)` from direct weights via
    /// `ch(eta) = (a^2 + b^2 - c^2) / (2ab)`.
    pub fn solve_parameterization(&self) -> Result<Parameterization> {
        let (a, b, cc) = (self.a, self.b, self.c);
        if a.norm() == 0.0 || b.norm() == 0.0 || cc.norm() == 0.0 {
            return domain("parameterization needs nonzero a, b, c");
        }
        let delta = (a * a + b * b - cc * cc) / (2.0 * a * b);
        let eta0 = delta.acosh();
        let mut best: Option<(f64, Parameterization)> = None;
        for eta in [eta0, -eta0] {
            if eta.sinh().norm() < 1e-300 {
                continue;
            }
            let coth = (a / b - eta.cosh()) / eta.sinh();
            let lambda = 0.5 * ((coth + 1.0) / (coth - 1.0)).ln();
            let rho = b / lambda.sinh();
            let p = Parameterization { rho, lambda, eta };
            let (ra, rb, rc) = p.weights_at(lambda);
            let err = (ra - a).norm() + (rb - b).norm() + (rc - cc).norm();
            if best.is_none_or(|(e, _)| err < e) {
                best = Some((err, p));
            }
        }
        match best {
            Some((err, p)) if err.is_finite() && err < 1e-9 * (a.norm() + b.norm() + cc.norm()) => Ok(p),
            _ => domain("weights admit no trigonometric parameterization (|Delta| = 1 or b = 0)"),
        }
    }

    /// `c = 0`: the R-matrix is diagonal and arrows never turn.
    pub fn is_degenerate(&self) -> bool {
        self.c.norm() < 1e-14 * (self.a.norm() + self.b.norm()).max(1e-300)
    }

    /// `|reconstructed - stored|` for parameterized weights.
    pub fn parameterization_error(&self) -> Option<f64> {
        self.parameterization.map(|p| {
            let (a, b, cc) = p.weights_at(p.lambda);
            (a - self.a).norm().max((b - self.b).norm()).max((cc - self.c).norm())
        })
    }

    /// `(a, b, c)` at each site for spectral parameter `lambda`.
    pub fn site_weights(&self, lambda: C64, sites: usize) -> Result<Vec<[C64; 3]>> {
        match (&self.parameterization, &self.inhomogeneities) {
            (None, _) => Ok(vec![[self.a, self.b, self.c]; sites]),
            (Some(p), None) => {
                let (a, b, cc) = p.weights_at(lambda);
                Ok(vec![[a, b, cc]; sites])
            }
            (Some(p), Some(xi)) => {
                if xi.len() != sites {
                    return domain(format!("{} inhomogeneities for {sites} sites", xi.len()));
                }
                Ok(xi
                    .iter()
                    .map(|&x| {
                        let (a, b, cc) = p.weights_at(lambda - x);
                        [a, b, cc]
                    })
                    .collect())
            }
        }
    }
}

/// R-matrix on `aux (x) site`, index `2 aux + site`:
/// `[[a,0,0,0],[0,b,c,0],[0,c,b,0],[0,0,0,a]]`.
pub fn r_from_weights(a: C64, b: C64, cc: C64) -> Matrix4<C64> {
    let z = c(0.0);
    Matrix4::new(a, z, z, z, z, b, cc, z, z, cc, b, z, z, z, z, a)
}

/// `R(lambda)` with `a = rho sh(lambda + eta)`, `b = rho sh(lambda)`, `c = rho sh(eta)`.
pub fn r_matrix(lambda: C64, eta: C64, rho: C64) -> Matrix4<C64> {
    let (a, b, cc) = Parameterization { rho, lambda, eta }.weights_at(lambda);
    r_from_weights(a, b, cc)
}

type M8 = SMatrix<C64, 8, 8>;

/// Embeds a two-space operator into three spaces (space 1 slowest).
fn embed(r: &Matrix4<C64>, first: usize, second: usize) -> M8 {
    let bit = |s: usize, k: usize| (s >> (2 - k)) & 1;
    M8::from_fn(|row, col| {
        let spectator = 3 - first - second;
        if bit(row, spectator) != bit(col, spectator) {
            return c(0.0);
        }
        r[(2 * bit(row, first) + bit(row, second), 2 * bit(col, first) + bit(col, second))]
    })
}

/// Max entry of `R12(l-m) R13(l-n) R23(m-n) - R23(m-n) R13(l-n) R12(l-m)`
/// for any two-space `R(u)`.
pub fn ybe_residual_with(r: impl Fn(C64) -> Matrix4<C64>, lambda: C64, mu: C64, nu: C64) -> f64 {
    let r12 = embed(&r(lambda - mu), 0, 1);
    let r13 = embed(&r(lambda - nu), 0, 2);
    let r23 = embed(&r(mu - nu), 1, 2);
    (r12 * r13 * r23 - r23 * r13 * r12).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn ybe_residual(lambda: C64, mu: C64, nu: C64, eta: C64, rho: C64) -> f64 {
    ybe_residual_with(|u| r_matrix(u, eta, rho), lambda, mu, nu)
}
