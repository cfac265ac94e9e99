use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::numlin::Matrix;
use crate::spaces::{CellGrid1D, HardyCoeffSpace, LRegionIndex, QuadrantGrid2D, TorusGrid2D};

use super::windowed::{FiberSide, WindowedMap};

/// Coordinate direction of a two-parameter family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    First,
    Second,
}

/// Converts a real time to a step count on the `1/m` grid, rejecting
/// anything that is not a non-negative multiple of `1/m`.
pub fn grid_steps(t: f64, m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let scaled = t * m as f64;
    let j = scaled.round();
    if !t.is_finite() || t < 0.0 || (scaled - j).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("t = {t} is not a non-negative multiple of 1/{m}")));
    }
    Ok(j as usize)
}

fn window_check(j: usize, limit: usize) -> Result<()> {
    if j > limit {
        return Err(Error::WindowTooSmall(format!(
            "shift of {j} cells exceeds the {limit}-cell window"
        )));
    }
    Ok(())
}

/// Right shift by `j` cells on `L²([0,T), F)`. Cells pushed past `T` leave
/// the window, so their columns are outside the faithful set.
pub fn halfline_shift(grid: &CellGrid1D, j: usize) -> Result<WindowedMap> {
    let cells = grid.cells();
    window_check(j, cells)?;
    let r = grid.fiber;
    let mut image = vec![None; grid.dim()];
    let mut faithful = Vec::new();
    for k in 0..cells.saturating_sub(j) {
        for rho in 0..r {
            image[grid.index(k, rho)] = Some(grid.index(k + j, rho));
            faithful.push(grid.index(k, rho));
        }
    }
    WindowedMap::new(
        Matrix::partial_permutation(grid.dim(), &image),
        IndexSet::new(faithful),
        IndexSet::full(grid.dim()),
    )
}

/// The partial isometries `E₀` (shift right by `j` cells inside `[0,1]`) and
/// `E₁` (the `j` cells that fall off the right end, wrapped to the start),
/// both on `m` cells with fibre `r`.
pub fn partial_isometry_pair(m: usize, j: usize, r: usize) -> Result<(Matrix, Matrix)> {
    if m == 0 || r == 0 {
        return Err(Error::InvalidInput("m and r must be at least 1".into()));
    }
    if j >= m {
        return Err(Error::InvalidShift(format!("shift {j} must be below m = {m}")));
    }
    let n = m * r;
    let mut e0 = vec![None; n];
    let mut e1 = vec![None; n];
    for k in 0..m {
        for rho in 0..r {
            if k + j < m {
                e0[k * r + rho] = Some((k + j) * r + rho);
            }
            if k < j {
                e1[(m - j + k) * r + rho] = Some(k * r + rho);
            }
        }
    }
    Ok((Matrix::partial_permutation(n, &e0), Matrix::partial_permutation(n, &e1)))
}

/// Multiplication by `φ_t = E₀,ₛ zⁿ + E₁,ₛ zⁿ⁺¹` (`t = n + s`, `j = t·m`
/// steps) on truncated Hardy coefficients.
///
/// A degree block is faithful when all of its images stay at degree `≤ d`;
/// for `s = 0` the `E₁` term vanishes and only `b + n ≤ d` is needed.
pub fn phi_multiplier(space: &HardyCoeffSpace, j: usize) -> Result<WindowedMap> {
    let m = space.m;
    let (n, s) = (j / m, j % m);
    if n > space.degree {
        return Err(Error::WindowTooSmall(format!(
            "degree shift {n} exceeds truncation degree {}",
            space.degree
        )));
    }
    let (e0, e1) = partial_isometry_pair(m, s, space.fiber)?;
    let bd = space.block_dim();
    let d = space.degree;
    let mut matrix = Matrix::zeros(space.dim(), space.dim());
    let mut faithful = Vec::new();
    for b in 0..=d {
        let mut place = |target: usize, e: &Matrix| {
            if target <= d {
                for col in 0..bd {
                    for row in 0..bd {
                        let v = e.get(row, col);
                        if v.norm() != 0.0 {
                            matrix.set(target * bd + row, b * bd + col, v);
                        }
                    }
                }
            }
        };
        place(b + n, &e0);
        if s > 0 {
            place(b + n + 1, &e1);
        }
        if b + n + usize::from(s > 0) <= d {
            faithful.extend(b * bd..(b + 1) * bd);
        }
    }
    WindowedMap::new(matrix, IndexSet::new(faithful), IndexSet::full(space.dim()))
}

fn quadrant_shift(grid: &QuadrantGrid2D, j: usize, axis: Axis) -> Result<WindowedMap> {
    let side = grid.side();
    window_check(j, side)?;
    let mut image = vec![None; grid.dim()];
    let mut faithful = Vec::new();
    for k1 in 0..side {
        for k2 in 0..side {
            let (t1, t2) = match axis {
                Axis::First => (k1 + j, k2),
                Axis::Second => (k1, k2 + j),
            };
            if t1 < side && t2 < side {
                for rho in 0..grid.fiber {
                    image[grid.index(k1, k2, rho)] = Some(grid.index(t1, t2, rho));
                    faithful.push(grid.index(k1, k2, rho));
                }
            }
        }
    }
    WindowedMap::new(
        Matrix::partial_permutation(grid.dim(), &image),
        IndexSet::new(faithful),
        IndexSet::full(grid.dim()),
    )
}

/// The two coordinate shifts on the quadrant `[0,T)²`.
pub fn bishift_pair(grid: &QuadrantGrid2D, j: usize) -> Result<(WindowedMap, WindowedMap)> {
    Ok((quadrant_shift(grid, j, Axis::First)?, quadrant_shift(grid, j, Axis::Second)?))
}

/// One member of the modified bishift on the L-region, in region coordinates
/// (region cells ascending, fibre fastest).
///
/// `(M f)(x) = f(x + t·e)` unless `x + t·e` lies in the quadrant, where the
/// output is zero. As a matrix, column `y` goes to row `y − j·e`; columns
/// whose image would leave the window on the negative side are not faithful.
pub fn modified_bishift(region: &LRegionIndex, j: usize, axis: Axis) -> Result<WindowedMap> {
    window_check(j, region.half())?;
    let torus = region.torus;
    let r = torus.fiber;
    let n = torus.n;
    let cells = region.region_cells();
    let dim = cells.len() * r;
    let pos = |c1: usize, c2: usize| cells.position(torus.cell(c1, c2));
    let mut image = vec![None; dim];
    let mut faithful = Vec::new();
    let mut adj = Vec::new();
    for (p, cell) in cells.iter().enumerate() {
        let (c1, c2) = torus.coords(cell);
        let along = match axis {
            Axis::First => c1,
            Axis::Second => c2,
        };
        if along >= j {
            let (t1, t2) = match axis {
                Axis::First => (c1 - j, c2),
                Axis::Second => (c1, c2 - j),
            };
            let q = pos(t1, t2).ok_or_else(|| {
                Error::InternalInconsistency("leftward move left the L-region".into())
            })?;
            for rho in 0..r {
                image[p * r + rho] = Some(q * r + rho);
                faithful.push(p * r + rho);
            }
        }
        let (across, other) = match axis {
            Axis::First => (c1, c2),
            Axis::Second => (c2, c1),
        };
        if across + j < n || other >= region.half() {
            adj.extend(p * r..(p + 1) * r);
        }
    }
    WindowedMap::new(
        Matrix::partial_permutation(dim, &image),
        IndexSet::new(faithful),
        IndexSet::new(adj),
    )
}

/// `(M₁,ₜ, M₂,ₜ)` on the L-region.
pub fn modified_bishift_pair(region: &LRegionIndex, j: usize) -> Result<(WindowedMap, WindowedMap)> {
    Ok((
        modified_bishift(region, j, Axis::First)?,
        modified_bishift(region, j, Axis::Second)?,
    ))
}

/// Cyclic translation of the torus by `(a, b)` cells; exactly unitary.
pub fn torus_translation(grid: &TorusGrid2D, a: i64, b: i64) -> Matrix {
    let mut image = vec![None; grid.dim()];
    for cell in 0..grid.cells() {
        let (c1, c2) = grid.coords(cell);
        let t1 = grid.wrap(c1 as i64 + a);
        let t2 = grid.wrap(c2 as i64 + b);
        for rho in 0..grid.fiber {
            image[grid.index(c1, c2, rho)] = Some(grid.index(t1, t2, rho));
        }
    }
    Matrix::partial_permutation(grid.dim(), &image)
}

/// Cyclic shift `e_i ↦ e_{i+k mod n}`.
pub fn circulant_unitary(n: usize, k: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidInput("circulant size must be at least 1".into()));
    }
    let image: Vec<Option<usize>> = (0..n).map(|i| Some((i + k) % n)).collect();
    Ok(Matrix::partial_permutation(n, &image))
}

/// Block-diagonal direct sum of windowed maps.
pub fn direct_sum(parts: &[&WindowedMap]) -> Result<WindowedMap> {
    if parts.is_empty() {
        return Err(Error::InvalidInput("direct sum of no parts".into()));
    }
    if let Some(p) = parts.iter().find(|p| !p.matrix().is_square()) {
        return Err(Error::DimensionMismatch(format!(
            "direct sum part is {}x{}, expected square",
            p.codomain_dim(),
            p.domain_dim()
        )));
    }
    Ok(WindowedMap::direct_sum(parts))
}

/// `A ⊗ I` or `I ⊗ A` depending on `side`.
pub fn tensor_with_identity(map: &WindowedMap, fiber: usize, side: FiberSide) -> Result<WindowedMap> {
    if fiber == 0 {
        return Err(Error::DimensionMismatch("identity factor of dimension 0".into()));
    }
    Ok(map.tensor_identity(fiber, side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::C64;

    #[test]
    fn grid_time_rejects_off_grid() {
        assert_eq!(grid_steps(1.5, 2).unwrap(), 3);
        assert!(grid_steps(0.3, 2).is_err());
        assert!(grid_steps(-0.5, 2).is_err());
    }

    #[test]
    fn half_shift_sends_cell_zero_to_one() {
        let g = CellGrid1D::new(2, 2, 1).unwrap();
        let s = halfline_shift(&g, 1).unwrap();
        assert_eq!(s.matrix().get(1, 0), C64::new(1.0, 0.0));
        assert_eq!(s.faithful().as_slice(), &[0, 1, 2]);
        assert!(halfline_shift(&g, 5).is_err());
    }

    #[test]
    fn phi_step_layout() {
        let h = HardyCoeffSpace::new(3, 2, 1).unwrap();
        let phi = phi_multiplier(&h, 3).unwrap();
        let (e0, e1) = partial_isometry_pair(2, 1, 1).unwrap();
        for b in 0..4 {
            for c in 0..4 {
                let block = Matrix::from_fn(2, 2, |i, k| phi.matrix().get(2 * b + i, 2 * c + k));
                let expected = if b == c + 1 && c + 2 <= 3 {
                    e0.clone()
                } else if b == c + 2 {
                    e1.clone()
                } else {
                    Matrix::zeros(2, 2)
                };
                assert_eq!(block, expected, "block ({b},{c})");
            }
        }
        assert_eq!(phi.faithful().as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn phi_at_integer_time_is_degree_shift() {
        let h = HardyCoeffSpace::new(2, 3, 1).unwrap();
        let phi = phi_multiplier(&h, 3).unwrap();
        assert_eq!(phi.faithful().len(), 6);
        for i in 0..6 {
            assert_eq!(phi.matrix().get(i + 3, i), C64::new(1.0, 0.0));
        }
        assert!(phi_multiplier(&h, 9).is_err());
    }

    #[test]
    fn modified_bishift_cells() {
        let region = LRegionIndex::new(1, 2, 1).unwrap();
        let (m1, _) = modified_bishift_pair(&region, 1).unwrap();
        let cells = region.region_cells();
        let at = |x1: i64, x2: i64| {
            let c = region.torus.cell((x1 + 2) as usize, (x2 + 2) as usize);
            cells.position(c).unwrap()
        };
        let row = at(-1, 1);
        assert!((0..m1.domain_dim()).all(|k| m1.matrix().get(row, k).norm() == 0.0));
        assert_eq!(m1.matrix().get(at(-2, -1), at(-1, -1)), C64::new(1.0, 0.0));
        assert_eq!(m1.isometry_defect(), 0.0);
    }

    #[test]
    fn circulant_and_torus() {
        let c = circulant_unitary(2, 1).unwrap();
        assert_eq!(c, Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let g = TorusGrid2D::new(4, 1).unwrap();
        let t = torus_translation(&g, 1, 0);
        let t4 = &(&t * &t) * &(&t * &t);
        assert_eq!(t4, Matrix::identity(16));
        assert_eq!(torus_translation(&g, 2, -1).adjoint(), torus_translation(&g, -2, 1));
    }
}
