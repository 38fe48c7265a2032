use crate::error::{LabError, Result};
use crate::C64;
use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use serde::{Deserialize, Serialize};

/// Matrices up to this dimension are stored dense.
pub const DENSE_LIMIT: usize = 4096;

/// Which space an operator acts on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// Full `2^sites` spin space.
    Full { sites: usize },
    /// Fixed number of down spins.
    Sector { sites: usize, down: usize },
    /// Fermions on `sites` sites with fixed electron and down-spin counts.
    Fermion { sites: usize, electrons: usize, down: usize },
    /// Spin chain with one auxiliary spin in front (monodromy matrices).
    Monodromy { sites: usize },
    Generic,
}

#[derive(Clone, Debug)]
pub enum Storage {
    Dense(DMatrix<C64>),
    Sparse(CsrMatrix<C64>),
}

/// A square complex matrix, dense or CSR, tagged with the space it acts on.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    storage: Storage,
    space: Space,
    hermitian: bool,
}

/// Wire form `{dim, format, entries: [[row, col, re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub format: String,
    pub entries: Vec<(usize, usize, f64, f64)>,
}

impl OperatorMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, C64)>,
        space: Space,
    ) -> Self {
        if dim <= DENSE_LIMIT {
            let mut m = DMatrix::zeros(dim, dim);
            for (i, j, v) in triplets {
                m[(i, j)] += v;
            }
            Self::from_dense(m, space)
        } else {
            let mut coo = CooMatrix::new(dim, dim);
            for (i, j, v) in triplets {
                coo.push(i, j, v);
            }
            Self { storage: Storage::Sparse(CsrMatrix::from(&coo)), space, hermitian: false }
        }
    }

    pub fn from_dense(m: DMatrix<C64>, space: Space) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        Self { storage: Storage::Dense(m), space, hermitian: false }
    }

    pub fn from_sparse(m: CsrMatrix<C64>, space: Space) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        Self { storage: Storage::Sparse(m), space, hermitian: false }
    }

    pub fn identity(dim: usize, space: Space) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))), space)
    }

    pub fn dim(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.nrows(),
            Storage::Sparse(m) => m.nrows(),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    /// True only after a successful [`OperatorMatrix::checked_hermitian`].
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Sets the Hermitian flag if `max |M - M^dagger| < 1e-12`.
    pub fn checked_hermitian(mut self) -> Result<Self> {
        let dev = self.hermitian_deviation();
        if dev >= 1e-12 {
            return Err(LabError::NotHermitian(dev));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => (m - m.adjoint()).iter().fold(0.0, |a, z| a.max(z.norm())),
            Storage::Sparse(m) => {
                let adj = adjoint_csr(m);
                let diff = m - &adj;
                diff.values().iter().fold(0.0, |a, z| a.max(z.norm()))
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        match &self.storage {
            Storage::Dense(m) => m[(i, j)],
            Storage::Sparse(m) => m
                .get_entry(i, j)
                .map(|e| e.into_value())
                .unwrap_or_default(),
        }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        assert_eq!(v.len(), self.dim(), "vector length");
        match &self.storage {
            Storage::Dense(m) => m * v,
            Storage::Sparse(m) => {
                let (offsets, cols, vals) = (m.row_offsets(), m.col_indices(), m.values());
                DVector::from_iterator(
                    m.nrows(),
                    (0..m.nrows()).map(|r| {
                        (offsets[r]..offsets[r + 1]).map(|k| vals[k] * v[cols[k]]).sum::<C64>()
                    }),
                )
            }
        }
    }

    /// `M^T v` (no conjugation).
    pub fn apply_transpose(&self, v: &DVector<C64>) -> DVector<C64> {
        assert_eq!(v.len(), self.dim(), "vector length");
        match &self.storage {
            Storage::Dense(m) => m.tr_mul(v),
            Storage::Sparse(m) => {
                let mut out = DVector::zeros(m.ncols());
                for (r, c, val) in m.triplet_iter() {
                    out[c] += val * v[r];
                }
                out
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(m) => {
                let mut d = DMatrix::zeros(m.nrows(), m.ncols());
                for (i, j, v) in m.triplet_iter() {
                    d[(i, j)] += *v;
                }
                d
            }
        }
    }

    /// Nonzero entries in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        match &self.storage {
            Storage::Dense(m) => {
                let mut out = Vec::new();
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        if m[(i, j)] != C64::default() {
                            out.push((i, j, m[(i, j)]));
                        }
                    }
                }
                out
            }
            Storage::Sparse(m) => m.triplet_iter().map(|(i, j, v)| (i, j, *v)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.triplets().iter().fold(0.0, |a, t| a.max(t.2.norm()))
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_dim(other)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a * b),
            (Storage::Dense(a), Storage::Dense(b)) => Storage::Dense(a * b),
            _ => Storage::Dense(self.to_dense() * other.to_dense()),
        };
        Ok(OperatorMatrix { storage, space: self.space.clone(), hermitian: false })
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: C64, other: &OperatorMatrix, beta: C64) -> Result<OperatorMatrix> {
        self.check_dim(other)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a * alpha + b * beta),
            _ => Storage::Dense(self.to_dense() * alpha + other.to_dense() * beta),
        };
        Ok(OperatorMatrix { storage, space: self.space.clone(), hermitian: false })
    }

    pub fn scale(&self, s: C64) -> OperatorMatrix {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m * s),
            Storage::Sparse(m) => Storage::Sparse(m * s),
        };
        OperatorMatrix { storage, space: self.space.clone(), hermitian: false }
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m.adjoint()),
            Storage::Sparse(m) => Storage::Sparse(adjoint_csr(m)),
        };
        OperatorMatrix { storage, space: self.space.clone(), hermitian: self.hermitian }
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_difference(&self, other: &OperatorMatrix) -> Result<f64> {
        Ok(self.combine(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))?.max_abs())
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            dim: self.dim(),
            format: if self.is_dense() { "dense" } else { "coo" }.to_string(),
            entries: self.triplets().into_iter().map(|(i, j, v)| (i, j, v.re, v.im)).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson, space: Space) -> Result<Self> {
        if let Some(bad) = json.entries.iter().find(|e| e.0 >= json.dim || e.1 >= json.dim) {
            return Err(LabError::Config(format!("entry ({}, {}) outside dim {}", bad.0, bad.1, json.dim)));
        }
        Ok(Self::from_triplets(
            json.dim,
            json.entries.iter().map(|&(i, j, re, im)| (i, j, C64::new(re, im))),
            space,
        ))
    }

    fn check_dim(&self, other: &OperatorMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(LabError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }
}

fn adjoint_csr(m: &CsrMatrix<C64>) -> CsrMatrix<C64> {
    let mut t = m.transpose();
    t.values_mut().iter_mut().for_each(|z| *z = z.conj());
    t
}

/// Largest entry magnitude of `AB - BA`.
pub fn commutator_norm(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<f64> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    ab.max_difference(&ba)
}
