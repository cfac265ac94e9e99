use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::numlin::{residual_norm, spectral_norm, Matrix};

/// Entries of modulus at or below this count as structural zeros when
/// computing supports.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Which side of a Kronecker product carries the identity factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberSide {
    /// `A ⊗ I_f`: the fibre is the fast (inner) index.
    Right,
    /// `I_f ⊗ A`: the fibre is the slow (outer) index.
    Left,
}

/// A finite matrix together with the domain indices on which it agrees
/// exactly with the infinite-dimensional operator it stands for.
///
/// Columns outside `faithful` are stored as exact zeros. `adj_faithful` is
/// the set of codomain indices on which the adjoint is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedMap {
    matrix: Matrix,
    faithful: IndexSet,
    adj_faithful: IndexSet,
}

impl WindowedMap {
    /// Builds a windowed map from the natural truncation `matrix`.
    ///
    /// Non-faithful columns are zeroed, and any codomain row that received a
    /// nonzero entry from such a column is dropped from `adj_faithful`.
    pub fn new(matrix: Matrix, faithful: IndexSet, adj_faithful: IndexSet) -> Result<Self> {
        if faithful.max().is_some_and(|i| i >= matrix.cols()) {
            return Err(Error::InvalidInput(format!(
                "faithful index out of range for {} columns",
                matrix.cols()
            )));
        }
        if adj_faithful.max().is_some_and(|i| i >= matrix.rows()) {
            return Err(Error::InvalidInput(format!(
                "adjoint-faithful index out of range for {} rows",
                matrix.rows()
            )));
        }
        let dropped: Vec<usize> = (0..matrix.cols()).filter(|&j| !faithful.contains(j)).collect();
        let mut polluted = Vec::new();
        for &j in &dropped {
            polluted.extend(matrix.column_support(j, 0.0));
        }
        let adj_faithful = adj_faithful.difference(&IndexSet::new(polluted));
        Ok(WindowedMap {
            matrix: matrix.with_zeroed_columns(dropped),
            faithful,
            adj_faithful,
        })
    }

    /// A genuine finite operator: exact on every index.
    pub fn exact(matrix: Matrix) -> Self {
        let faithful = IndexSet::full(matrix.cols());
        let adj_faithful = IndexSet::full(matrix.rows());
        WindowedMap {
            matrix,
            faithful,
            adj_faithful,
        }
    }

    pub fn identity(n: usize) -> Self {
        WindowedMap::exact(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn faithful(&self) -> &IndexSet {
        &self.faithful
    }

    pub fn adj_faithful(&self) -> &IndexSet {
        &self.adj_faithful
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `self ∘ inner`. An index stays faithful only if it is faithful for
    /// `inner` and `inner` maps it into the faithful set of `self`.
    pub fn compose(&self, inner: &WindowedMap) -> Result<WindowedMap> {
        let product = self.matrix.try_mul(&inner.matrix)?;
        let faithful: IndexSet = inner
            .faithful
            .iter()
            .filter(|&i| {
                inner
                    .matrix
                    .column_support(i, SUPPORT_EPS)
                    .all(|k| self.faithful.contains(k))
            })
            .collect();
        let adj_faithful: IndexSet = self
            .adj_faithful
            .iter()
            .filter(|&i| {
                (0..self.matrix.cols())
                    .filter(|&k| self.matrix.get(i, k).norm() > SUPPORT_EPS)
                    .all(|k| inner.adj_faithful.contains(k))
            })
            .collect();
        WindowedMap::new(product, faithful, adj_faithful)
    }

    pub fn adjoint(&self) -> WindowedMap {
        WindowedMap::new(
            self.matrix.adjoint(),
            self.adj_faithful.clone(),
            self.faithful.clone(),
        )
        .expect("adjoint index sets are in range")
    }

    /// Compression `B* A B` onto the columns of `basis` (ambient × k).
    /// A basis vector is faithful when its support lies in the faithful set.
    pub fn compress(&self, basis: &Matrix) -> Result<WindowedMap> {
        if !self.matrix.is_square() || basis.rows() != self.matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compress a {}x{} map onto a basis with {} rows",
                self.matrix.rows(),
                self.matrix.cols(),
                basis.rows()
            )));
        }
        let inside = |set: &IndexSet| -> IndexSet {
            (0..basis.cols())
                .filter(|&b| basis.column_support(b, SUPPORT_EPS).all(|i| set.contains(i)))
                .collect()
        };
        let faithful = inside(&self.faithful);
        let adj_faithful = inside(&self.adj_faithful);
        let product = basis.adjoint().try_mul(&self.matrix.try_mul(basis)?)?;
        WindowedMap::new(product, faithful, adj_faithful)
    }

    /// `Z A Z*` for a unitary `Z`, with faithful sets carried through the
    /// support rule.
    pub fn conjugate(&self, z: &Matrix) -> Result<WindowedMap> {
        let zmap = WindowedMap::exact(z.clone());
        zmap.compose(&self.compose(&zmap.adjoint())?)
    }

    /// Block-diagonal direct sum; faithful sets are offset and united.
    pub fn direct_sum(parts: &[&WindowedMap]) -> WindowedMap {
        let mats: Vec<&Matrix> = parts.iter().map(|p| &p.matrix).collect();
        let matrix = Matrix::block_diag(&mats);
        let (mut faithful, mut adj) = (IndexSet::empty(), IndexSet::empty());
        let (mut c0, mut r0) = (0, 0);
        for p in parts {
            faithful = faithful.union(&p.faithful.offset(c0));
            adj = adj.union(&p.adj_faithful.offset(r0));
            c0 += p.domain_dim();
            r0 += p.codomain_dim();
        }
        WindowedMap {
            matrix,
            faithful,
            adj_faithful: adj,
        }
    }

    /// Kronecker product with `I_fiber` on the given side.
    pub fn tensor_identity(&self, fiber: usize, side: FiberSide) -> WindowedMap {
        let id = Matrix::identity(fiber);
        match side {
            FiberSide::Right => WindowedMap {
                matrix: self.matrix.kron(&id),
                faithful: self.faithful.expand(fiber),
                adj_faithful: self.adj_faithful.expand(fiber),
            },
            FiberSide::Left => {
                let (c, r) = (self.domain_dim(), self.codomain_dim());
                WindowedMap {
                    matrix: id.kron(&self.matrix),
                    faithful: (0..fiber).flat_map(|b| self.faithful.offset(b * c).iter().collect::<Vec<_>>()).collect(),
                    adj_faithful: (0..fiber)
                        .flat_map(|b| self.adj_faithful.offset(b * r).iter().collect::<Vec<_>>())
                        .collect(),
                }
            }
        }
    }

    /// Residual `‖(A - B) F‖` over the common faithful columns `F`; returns
    /// the residual and the number of compared columns.
    pub fn faithful_residual(&self, other: &WindowedMap) -> Result<(f64, usize)> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(Error::DimensionMismatch(format!(
                "shapes {:?} and {:?} differ",
                self.matrix.shape(),
                other.matrix.shape()
            )));
        }
        let common = self.faithful.intersection(&other.faithful);
        let a = self.matrix.select_columns(common.as_slice());
        let b = other.matrix.select_columns(common.as_slice());
        Ok((residual_norm(&a, &b)?, common.len()))
    }

    /// `‖F* A* A F - I‖` over the faithful columns.
    pub fn isometry_defect(&self) -> f64 {
        let f = self.matrix.select_columns(self.faithful.as_slice());
        let gram = &f.adjoint() * &f;
        spectral_norm(&(&gram - &Matrix::identity(f.cols())))
    }
}
