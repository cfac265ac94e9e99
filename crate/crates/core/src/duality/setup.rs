use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::numlin::{residual_norm, Matrix, Subspace};
use crate::semigroups::{
    circulant_unitary, torus_translation, CompressionKernel, PairOfSemigroups, SemigroupFamily, WindowedMap,
};
use crate::spaces::{LRegionIndex, TorusGrid2D};

const UNITARY_TOL: f64 = 1e-12;

/// A pair of commuting unitaries on a finite ambient space together with the
/// subspace `H` carrying the original pair `Vᵢ,ₜ = P_H Uᵢᵗ |_H`.
///
/// Each unitary also records its seam: the columns whose image wraps around
/// the finite ambient and therefore does not represent the infinite
/// translation. Those columns are excluded from every faithful set.
#[derive(Clone, Debug)]
pub struct ExtensionSetup {
    label: String,
    m: usize,
    unitaries: [Matrix; 2],
    faithful: [IndexSet; 2],
    adj_faithful: [IndexSet; 2],
    h: Subspace,
    physical_window: IndexSet,
}

fn unitary_defect(u: &Matrix) -> Result<f64> {
    let id = Matrix::identity(u.cols());
    Ok(residual_norm(&u.adjoint().try_mul(u)?, &id)?.max(residual_norm(&u.try_mul(&u.adjoint())?, &id)?))
}

impl ExtensionSetup {
    /// Setup without seams: both unitaries are exact on every index.
    pub fn new(label: impl Into<String>, m: usize, u1: Matrix, u2: Matrix, h: Subspace) -> Result<Self> {
        let n = u1.rows();
        if !u1.is_square() || u2.shape() != u1.shape() || h.ambient() != n {
            return Err(Error::DimensionMismatch(format!(
                "unitaries {:?}, {:?} and subspace in C^{}",
                u1.shape(),
                u2.shape(),
                h.ambient()
            )));
        }
        if m == 0 {
            return Err(Error::InvalidInput("m must be at least 1".into()));
        }
        for u in [&u1, &u2] {
            let d = unitary_defect(u)?;
            if d > UNITARY_TOL {
                return Err(Error::InvalidInput(format!("ambient operator is not unitary (defect {d:e})")));
            }
        }
        let comm = residual_norm(&u1.try_mul(&u2)?, &u2.try_mul(&u1)?)?;
        if comm > UNITARY_TOL {
            return Err(Error::InvalidInput(format!("ambient unitaries do not commute ({comm:e})")));
        }
        Ok(ExtensionSetup {
            label: label.into(),
            m,
            unitaries: [u1, u2],
            faithful: [IndexSet::full(n), IndexSet::full(n)],
            adj_faithful: [IndexSet::full(n), IndexSet::full(n)],
            h,
            physical_window: IndexSet::full(n),
        })
    }

    /// Declares which columns (and adjoint columns) of unitary `i` are free
    /// of wrap-around.
    pub fn with_seam(mut self, i: usize, faithful: IndexSet, adj_faithful: IndexSet) -> Result<Self> {
        let n = self.ambient_dim();
        if i > 1 || faithful.max().is_some_and(|k| k >= n) || adj_faithful.max().is_some_and(|k| k >= n) {
            return Err(Error::InvalidInput("seam index out of range".into()));
        }
        self.faithful[i] = faithful;
        self.adj_faithful[i] = adj_faithful;
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    pub fn ambient_dim(&self) -> usize {
        self.unitaries[0].rows()
    }

    pub fn unitary(&self, i: usize) -> &Matrix {
        &self.unitaries[i]
    }

    pub fn h(&self) -> &Subspace {
        &self.h
    }

    pub fn physical_window(&self) -> &IndexSet {
        &self.physical_window
    }

    /// Unitary `i` as a windowed map (seam columns zeroed).
    pub fn step(&self, i: usize) -> WindowedMap {
        WindowedMap::new(
            self.unitaries[i].clone(),
            self.faithful[i].clone(),
            self.adj_faithful[i].clone(),
        )
        .expect("seams validated on construction")
    }

    /// Adjoint of unitary `i` as a windowed map.
    pub fn step_adjoint(&self, i: usize) -> WindowedMap {
        WindowedMap::new(
            self.unitaries[i].adjoint(),
            self.adj_faithful[i].clone(),
            self.faithful[i].clone(),
        )
        .expect("seams validated on construction")
    }

    /// Same unitaries with a different subspace.
    pub fn with_subspace(&self, h: Subspace) -> Result<ExtensionSetup> {
        if h.ambient() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "subspace in C^{} for a setup on C^{}",
                h.ambient(),
                self.ambient_dim()
            )));
        }
        Ok(ExtensionSetup { h, ..self.clone() })
    }

    /// Setup with the adjoint unitaries and subspace `h`; used to form the
    /// dual of a dual.
    pub fn adjoint_setup(&self, h: Subspace) -> Result<ExtensionSetup> {
        let mut out = self.with_subspace(h)?;
        out.label = format!("{} (adjoint)", self.label);
        out.unitaries = [self.unitaries[0].adjoint(), self.unitaries[1].adjoint()];
        out.faithful = self.adj_faithful.clone();
        out.adj_faithful = self.faithful.clone();
        Ok(out)
    }

    /// `(P_H U₁ᵗ|_H, P_H U₂ᵗ|_H)` in the coordinates of the basis of `H`.
    pub fn original_pair(&self) -> PairOfSemigroups {
        self.compressed_pair(&self.h, false, "V")
    }

    pub(crate) fn compressed_pair(&self, space: &Subspace, adjoint: bool, name: &str) -> PairOfSemigroups {
        let family = |i: usize| {
            let step = if adjoint { self.step_adjoint(i) } else { self.step(i) };
            SemigroupFamily::new(CompressionKernel {
                label: format!("{name}{}", i + 1),
                step,
                basis: space.basis().clone(),
                m: self.m,
            })
        };
        PairOfSemigroups {
            first: family(0),
            second: family(1),
        }
    }

    /// Block-diagonal sum of setups sharing one grid resolution.
    pub fn direct_sum(label: impl Into<String>, parts: &[&ExtensionSetup]) -> Result<ExtensionSetup> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidInput("direct sum of no setups".into()))?;
        if parts.iter().any(|p| p.m != first.m) {
            return Err(Error::InvalidInput("setups use different grid resolutions".into()));
        }
        let block = |i: usize| -> Matrix {
            let mats: Vec<&Matrix> = parts.iter().map(|p| &p.unitaries[i]).collect();
            Matrix::block_diag(&mats)
        };
        let offsets: Vec<usize> = parts
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.ambient_dim();
                Some(o)
            })
            .collect();
        let union = |f: &dyn Fn(&ExtensionSetup) -> &IndexSet| -> IndexSet {
            parts
                .iter()
                .zip(&offsets)
                .fold(IndexSet::empty(), |acc, (p, &o)| acc.union(&f(p).offset(o)))
        };
        let hs: Vec<&Subspace> = parts.iter().map(|p| &p.h).collect();
        Ok(ExtensionSetup {
            label: label.into(),
            m: first.m,
            unitaries: [block(0), block(1)],
            faithful: [union(&|p| &p.faithful[0]), union(&|p| &p.faithful[1])],
            adj_faithful: [union(&|p| &p.adj_faithful[0]), union(&|p| &p.adj_faithful[1])],
            h: Subspace::direct_sum(&hs),
            physical_window: union(&|p| &p.physical_window),
        })
    }
}

/// Unit translation of the torus along one axis (`+1` or `-1` cells) with
/// its seam: columns whose image wraps are not faithful, and neither are
/// rows whose preimage wraps.
fn seamed_translation(grid: &TorusGrid2D, axis: usize, dir: i64) -> (Matrix, IndexSet, IndexSet) {
    let (a, b) = if axis == 0 { (dir, 0) } else { (0, dir) };
    let u = torus_translation(grid, a, b);
    let last = grid.n - 1;
    let mut faithful = Vec::new();
    let mut adj = Vec::new();
    for cell in 0..grid.cells() {
        let (c1, c2) = grid.coords(cell);
        let c = if axis == 0 { c1 } else { c2 };
        let (wraps_out, wraps_in) = if dir > 0 { (c == last, c == 0) } else { (c == 0, c == last) };
        for rho in 0..grid.fiber {
            let idx = grid.index(c1, c2, rho);
            if !wraps_out {
                faithful.push(idx);
            }
            if !wraps_in {
                adj.push(idx);
            }
        }
    }
    (u, IndexSet::new(faithful), IndexSet::new(adj))
}

fn torus_setup(label: &str, region: &LRegionIndex, dir: i64, h: Subspace) -> Result<ExtensionSetup> {
    let (u1, f1, a1) = seamed_translation(&region.torus, 0, dir);
    let (u2, f2, a2) = seamed_translation(&region.torus, 1, dir);
    ExtensionSetup::new(label, region.m, u1, u2, h)?
        .with_seam(0, f1, a1)?
        .with_seam(1, f2, a2)
}

/// The L-region inside the torus with leftward/downward unit moves; the
/// original pair is the modified bishift.
pub fn l_region_setup(m: usize, extent: usize, fiber: usize) -> Result<ExtensionSetup> {
    let region = LRegionIndex::new(m, extent, fiber)?;
    let h = Subspace::coordinate(region.torus.dim(), &region.region_coords())?;
    torus_setup("l_region", &region, -1, h)
}

/// The quadrant inside the torus with rightward/upward unit moves; the
/// original pair is the bishift.
pub fn quadrant_setup(m: usize, extent: usize, fiber: usize) -> Result<ExtensionSetup> {
    let region = LRegionIndex::new(m, extent, fiber)?;
    let h = Subspace::coordinate(region.torus.dim(), &region.quadrant_coords())?;
    torus_setup("quadrant", &region, 1, h)
}

/// Ring of `2mT` cells tensored with `C^p`. The first unitary moves the ring
/// left, the second is the `p`-point circulant on the fibre; `H` is the lower
/// half of the ring. The original pair is (c.n.u. shift ⊗ I, I ⊗ unitary).
pub fn cnu_unitary_setup(m: usize, extent: usize, p: usize) -> Result<ExtensionSetup> {
    if m == 0 || extent == 0 || p == 0 {
        return Err(Error::InvalidInput("m, T and p must be at least 1".into()));
    }
    let n = 2 * m * extent;
    let ring_left = circulant_unitary(n, n - 1)?;
    let u1 = ring_left.kron(&Matrix::identity(p));
    let u2 = Matrix::identity(n).kron(&circulant_unitary(p, 1)?);
    let faithful: IndexSet = (p..n * p).collect();
    let adj: IndexSet = (0..(n - 1) * p).collect();
    let h = Subspace::coordinate(n * p, &(0..m * extent * p).collect())?;
    ExtensionSetup::new("cnu_x_unitary", m, u1, u2, h)?.with_seam(0, faithful, adj)
}

/// [`cnu_unitary_setup`] with the two members exchanged.
pub fn unitary_cnu_setup(m: usize, extent: usize, p: usize) -> Result<ExtensionSetup> {
    let s = cnu_unitary_setup(m, extent, p)?;
    ExtensionSetup::new("unitary_x_cnu", m, s.unitaries[1].clone(), s.unitaries[0].clone(), s.h.clone())?
        .with_seam(1, s.faithful[0].clone(), s.adj_faithful[0].clone())
}

/// `(C_p ⊗ I_q, I_p ⊗ C_q)` on `C^{pq}` with `H` the whole space.
pub fn unitary_unitary_setup(m: usize, p: usize, q: usize) -> Result<ExtensionSetup> {
    let u1 = circulant_unitary(p, 1)?.kron(&Matrix::identity(q));
    let u2 = Matrix::identity(p).kron(&circulant_unitary(q, 1)?);
    ExtensionSetup::new("unitary_x_unitary", m, u1, u2, Subspace::full(p * q))
}
