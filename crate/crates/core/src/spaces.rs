//! Index conventions for every discretised function space, plus the two
//! structural permutations: the half-line-to-Hardy relabelling `W` and the
//! fibre reordering `Λ`.
//!
//! Cells have width `1/m`. A 1-D grid over `[0, T)` has `m·T` cells; every
//! cell carries an `r`-dimensional fibre and coordinates are cell-major
//! (`cell * r + fibre`).

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::numlin::Matrix;

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidInput(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// Cells of width `1/m` over `[0, T)` with an `r`-dimensional fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellGrid1D {
    pub m: usize,
    pub extent: usize,
    pub fiber: usize,
}

impl CellGrid1D {
    pub fn new(m: usize, extent: usize, fiber: usize) -> Result<Self> {
        positive("m", m)?;
        positive("T", extent)?;
        positive("r", fiber)?;
        Ok(CellGrid1D { m, extent, fiber })
    }

    pub fn cells(&self) -> usize {
        self.m * self.extent
    }

    pub fn dim(&self) -> usize {
        self.cells() * self.fiber
    }

    pub fn index(&self, cell: usize, rho: usize) -> usize {
        debug_assert!(cell < self.cells() && rho < self.fiber);
        cell * self.fiber + rho
    }
}

/// Truncated coefficient space of `H²(D, L²([0,1], F))`: polynomial degrees
/// `0..=d`, each coefficient an `m`-cell function on `[0,1]` with fibre `r`.
/// Degree `n` occupies block `n`; inside a block, cell-major then fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HardyCoeffSpace {
    pub degree: usize,
    pub m: usize,
    pub fiber: usize,
}

impl HardyCoeffSpace {
    pub fn new(degree: usize, m: usize, fiber: usize) -> Result<Self> {
        positive("m", m)?;
        positive("r", fiber)?;
        Ok(HardyCoeffSpace { degree, m, fiber })
    }

    pub fn block_dim(&self) -> usize {
        self.m * self.fiber
    }

    pub fn dim(&self) -> usize {
        (self.degree + 1) * self.block_dim()
    }

    pub fn index(&self, degree: usize, cell: usize, rho: usize) -> usize {
        debug_assert!(degree <= self.degree && cell < self.m && rho < self.fiber);
        degree * self.block_dim() + cell * self.fiber + rho
    }
}

/// Cells of the quadrant window `[0, T)²`, lexicographic `(k1, k2, fibre)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadrantGrid2D {
    pub m: usize,
    pub extent: usize,
    pub fiber: usize,
}

impl QuadrantGrid2D {
    pub fn new(m: usize, extent: usize, fiber: usize) -> Result<Self> {
        positive("m", m)?;
        positive("T", extent)?;
        positive("r", fiber)?;
        Ok(QuadrantGrid2D { m, extent, fiber })
    }

    /// Cells per axis.
    pub fn side(&self) -> usize {
        self.m * self.extent
    }

    pub fn dim(&self) -> usize {
        self.side() * self.side() * self.fiber
    }

    pub fn index(&self, k1: usize, k2: usize, rho: usize) -> usize {
        (k1 * self.side() + k2) * self.fiber + rho
    }
}

/// Cyclic `n × n` cell grid; all index arithmetic is modulo `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusGrid2D {
    pub n: usize,
    pub fiber: usize,
}

impl TorusGrid2D {
    pub fn new(n: usize, fiber: usize) -> Result<Self> {
        positive("n", n)?;
        positive("r", fiber)?;
        Ok(TorusGrid2D { n, fiber })
    }

    pub fn cells(&self) -> usize {
        self.n * self.n
    }

    pub fn dim(&self) -> usize {
        self.cells() * self.fiber
    }

    pub fn cell(&self, c1: usize, c2: usize) -> usize {
        c1 * self.n + c2
    }

    pub fn index(&self, c1: usize, c2: usize, rho: usize) -> usize {
        self.cell(c1, c2) * self.fiber + rho
    }

    /// Inverse of [`TorusGrid2D::cell`].
    pub fn coords(&self, cell: usize) -> (usize, usize) {
        (cell / self.n, cell % self.n)
    }

    pub fn wrap(&self, c: i64) -> usize {
        c.rem_euclid(self.n as i64) as usize
    }
}

/// The L-shaped region `[-T, T)² \ [0, T)²` inside a torus of side `2mT`.
///
/// Torus coordinate `c` stands for the physical cell `[(c - mT)/m, (c - mT + 1)/m)`,
/// so the quadrant is `c1, c2 >= mT`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LRegionIndex {
    pub torus: TorusGrid2D,
    pub m: usize,
    pub extent: usize,
}

impl LRegionIndex {
    pub fn new(m: usize, extent: usize, fiber: usize) -> Result<Self> {
        positive("m", m)?;
        positive("T", extent)?;
        Ok(LRegionIndex {
            torus: TorusGrid2D::new(2 * m * extent, fiber)?,
            m,
            extent,
        })
    }

    /// Cells from the origin to the window edge along one axis (`mT`).
    pub fn half(&self) -> usize {
        self.m * self.extent
    }

    pub fn in_quadrant(&self, c1: usize, c2: usize) -> bool {
        c1 >= self.half() && c2 >= self.half()
    }

    /// Torus cell ids of the L-region, ascending.
    pub fn region_cells(&self) -> IndexSet {
        (0..self.torus.cells())
            .filter(|&c| {
                let (c1, c2) = self.torus.coords(c);
                !self.in_quadrant(c1, c2)
            })
            .collect()
    }

    /// Torus cell ids of the quadrant `[0, T)²`, ascending.
    pub fn quadrant_cells(&self) -> IndexSet {
        (0..self.torus.cells())
            .filter(|&c| {
                let (c1, c2) = self.torus.coords(c);
                self.in_quadrant(c1, c2)
            })
            .collect()
    }

    /// Ambient coordinates (cells expanded by the fibre) of the L-region.
    pub fn region_coords(&self) -> IndexSet {
        self.region_cells().expand(self.torus.fiber)
    }

    /// Ambient coordinates of the quadrant.
    pub fn quadrant_coords(&self) -> IndexSet {
        self.quadrant_cells().expand(self.torus.fiber)
    }

    /// Physical cell label `(c - mT)` for a torus coordinate.
    pub fn physical(&self, c: usize) -> i64 {
        c as i64 - self.half() as i64
    }

    pub fn dim(&self) -> usize {
        3 * self.half() * self.half() * self.torus.fiber
    }
}

/// Unitary relabelling `W` from `L²([0,T), F)` cells to truncated Hardy
/// coefficients: grid cell `k = n·m + j` goes to degree `n`, interval cell `j`;
/// the fibre is untouched.
pub fn w_unitary(extent: usize, m: usize, r: usize) -> Result<Matrix> {
    let grid = CellGrid1D::new(m, extent, r)?;
    let hardy = HardyCoeffSpace::new(extent - 1, m, r)?;
    let mut image = vec![None; grid.dim()];
    for k in 0..grid.cells() {
        let (n, j) = (k / m, k % m);
        for rho in 0..r {
            image[grid.index(k, rho)] = Some(hardy.index(n, j, rho));
        }
    }
    Ok(Matrix::partial_permutation(hardy.dim(), &image))
}

/// `Λ`: fibre-major coordinates (`ρ·m + k`) to cell-major (`k·r + ρ`).
pub fn lambda_reorder(m: usize, r: usize) -> Result<Matrix> {
    positive("m", m)?;
    positive("r", r)?;
    let mut image = vec![None; m * r];
    for rho in 0..r {
        for k in 0..m {
            image[rho * m + k] = Some(k * r + rho);
        }
    }
    Ok(Matrix::partial_permutation(m * r, &image))
}

/// Isometric 0/1 matrix placing the coordinates `sub` at their positions in
/// the ordered index set `ambient`.
pub fn region_injection(sub: &IndexSet, ambient: &IndexSet) -> Result<Matrix> {
    let mut image = Vec::with_capacity(sub.len());
    for i in sub.iter() {
        let pos = ambient.position(i).ok_or_else(|| {
            Error::InvalidRegion(format!("index {i} of the subregion is not in the ambient region"))
        })?;
        image.push(Some(pos));
    }
    Ok(Matrix::partial_permutation(ambient.len(), &image))
}
