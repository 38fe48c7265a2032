use crate::error::{LabError, Result};
use crate::C64;
use nalgebra::DMatrix;

/// Determinant as `exp(log_abs) * phase`.
#[derive(Clone, Copy, Debug)]
pub struct LogDet {
    pub log_abs: f64,
    pub phase: C64,
}

impl LogDet {
    pub fn value(&self) -> C64 {
        self.phase * self.log_abs.exp()
    }

    /// `self / other` without forming either determinant.
    pub fn ratio(&self, other: &LogDet) -> C64 {
        self.phase / other.phase * (self.log_abs - other.log_abs).exp()
    }
}

/// LU with partial pivoting; singular matrices are an error.
pub fn log_determinant(m: &DMatrix<C64>) -> Result<LogDet> {
    if m.nrows() != m.ncols() {
        return Err(LabError::DimensionMismatch { left: m.nrows(), right: m.ncols() });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(LogDet { log_abs: 0.0, phase: C64::new(1.0, 0.0) });
    }
    let lu = m.clone().lu();
    let u = lu.u();
    let mut log_abs = 0.0;
    let mut phase = lu.p().determinant::<C64>();
    for i in 0..n {
        let d = u[(i, i)];
        let a = d.norm();
        if a == 0.0 || !a.is_finite() {
            return Err(LabError::Singular(format!("zero pivot at {i}")));
        }
        log_abs += a.ln();
        phase *= d / a;
    }
    Ok(LogDet { log_abs, phase })
}
