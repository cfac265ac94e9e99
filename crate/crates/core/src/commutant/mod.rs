//! Commutants of finite operator families by vectorised null spaces, and
//! the structure checks that go with them.

use crate::error::{Error, Result};
use crate::numlin::{nullspace, residual_norm, spectral_norm, Matrix, Tolerances, C64};
use crate::report::{CheckEntry, Report};
use crate::semigroups::{partial_isometry_pair, SemigroupFamily};
use crate::spaces::lambda_reorder;

/// Reconstruction residual at or below which a commutant element is
/// declared to have fibre-scalar form.
pub const STRUCTURE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureVerdict {
    /// Every element acts as the identity on cells (or degrees) tensored
    /// with an operator on the fibre.
    FiberScalar,
    Other,
}

#[derive(Clone, Debug)]
pub struct CommutantBasis {
    pub dim: usize,
    /// Frobenius-orthonormal basis of the solution space.
    pub basis: Vec<Matrix>,
    pub structure_verdict: StructureVerdict,
    pub max_structure_residual: f64,
    /// Worst residual of any basis element against any imposed constraint.
    pub max_constraint_residual: f64,
}

/// `(B·op − op·B)[rows, cols] = 0`.
struct Constraint {
    op: Matrix,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Constraint {
    fn all(op: Matrix) -> Self {
        let n = op.rows();
        Constraint {
            op,
            rows: (0..n).collect(),
            cols: (0..n).collect(),
        }
    }

    fn residual(&self, b: &Matrix) -> Result<f64> {
        let d = b.try_mul(&self.op)?.try_sub(&self.op.try_mul(b)?)?;
        Ok(spectral_norm(&d.select_rows(&self.rows).select_columns(&self.cols)))
    }
}

/// Null space of the stacked vectorised constraints; `vec` is column-major,
/// so unknown `q·n + p` is `B[p, q]`.
fn solve(n: usize, constraints: &[Constraint], tol: &Tolerances) -> Result<(Vec<Matrix>, f64)> {
    let unknowns = n * n;
    let total_rows: usize = constraints.iter().map(|c| c.rows.len() * c.cols.len()).sum();
    let mut system = Matrix::zeros(total_rows, unknowns);
    let mut row = 0;
    for c in constraints {
        for &j in &c.cols {
            for &i in &c.rows {
                // (B E)[i, j] = Σ_k B[i, k] E[k, j]
                for k in 0..n {
                    let e = c.op.get(k, j);
                    if e.norm() != 0.0 {
                        let at = k * n + i;
                        system.set(row, at, system.get(row, at) + e);
                    }
                }
                // (E B)[i, j] = Σ_k E[i, k] B[k, j]
                for k in 0..n {
                    let e = c.op.get(i, k);
                    if e.norm() != 0.0 {
                        let at = j * n + k;
                        system.set(row, at, system.get(row, at) - e);
                    }
                }
                row += 1;
            }
        }
    }
    let null = nullspace(&system, tol)?;
    let mut basis = Vec::with_capacity(null.dim());
    let mut worst = 0.0f64;
    for v in null.basis().columns() {
        let b = Matrix::from_fn(n, n, |p, q| v[q * n + p]);
        for c in constraints {
            worst = worst.max(c.residual(&b)?);
        }
        basis.push(b);
    }
    Ok((basis, worst))
}

/// `C = Θ* B Θ` with `Θx` the constant cell function of value `x/√m`
/// (cell-major coordinates): the average of all `r×r` blocks of `B`.
pub fn theta_compress(b: &Matrix, m: usize, r: usize) -> Result<Matrix> {
    if m == 0 || r == 0 || b.shape() != (m * r, m * r) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {0}x{0} operator, got {1:?}",
            m * r,
            b.shape()
        )));
    }
    let mut sum = Matrix::zeros(r, r);
    for k in 0..m {
        for l in 0..m {
            for i in 0..r {
                for j in 0..r {
                    sum.set(i, j, sum.get(i, j) + b.get(k * r + i, l * r + j));
                }
            }
        }
    }
    Ok(sum.scale(C64::new(1.0 / m as f64, 0.0)))
}

/// `Λ (C ⊗ I_m) Λ*`: `C` acting on the fibre of every cell, written in
/// cell-major coordinates.
pub fn fiber_scalar(c: &Matrix, m: usize) -> Result<Matrix> {
    let lambda = lambda_reorder(m, c.rows())?;
    lambda.try_mul(&c.kron(&Matrix::identity(m)).try_mul(&lambda.adjoint())?)
}

/// Operators on `m` cells with fibre `r` commuting with `E₀,ⱼ` and `E₁,ⱼ`
/// for every `1 ≤ j < m`.
pub fn commutant_of_partial_isometries(m: usize, r: usize, tol: &Tolerances) -> Result<CommutantBasis> {
    tol.validate()?;
    if m < 2 || r == 0 {
        return Err(Error::InvalidInput(format!("need m ≥ 2 and r ≥ 1, got m = {m}, r = {r}")));
    }
    let mut constraints = Vec::with_capacity(2 * (m - 1));
    for j in 1..m {
        let (e0, e1) = partial_isometry_pair(m, j, r)?;
        constraints.push(Constraint::all(e0));
        constraints.push(Constraint::all(e1));
    }
    let (basis, max_constraint_residual) = solve(m * r, &constraints, tol)?;
    let mut structure = 0.0f64;
    for b in &basis {
        let rebuilt = fiber_scalar(&theta_compress(b, m, r)?, m)?;
        structure = structure.max(residual_norm(b, &rebuilt)?);
    }
    Ok(finish(basis, structure, max_constraint_residual))
}

fn finish(basis: Vec<Matrix>, structure: f64, constraint: f64) -> CommutantBasis {
    CommutantBasis {
        dim: basis.len(),
        basis,
        structure_verdict: if structure <= STRUCTURE_TOL {
            StructureVerdict::FiberScalar
        } else {
            StructureVerdict::Other
        },
        max_structure_residual: structure,
        max_constraint_residual: constraint,
    }
}

/// Truncated `M_z ⊗ I_r` on degrees `0..=d`.
pub fn mz_truncated(d: usize, r: usize) -> Matrix {
    let n = (d + 1) * r;
    let image: Vec<Option<usize>> = (0..n).map(|i| (i + r < n).then_some(i + r)).collect();
    Matrix::partial_permutation(n, &image)
}

/// `I_{d+1} ⊗ ω` with `ω` the mean diagonal block, and the residual of `b`
/// against it.
fn block_scalar_residual(b: &Matrix, blocks: usize, r: usize) -> Result<(Matrix, f64)> {
    let mut omega = Matrix::zeros(r, r);
    for k in 0..blocks {
        let idx: Vec<usize> = (k * r..(k + 1) * r).collect();
        omega = omega.try_add(&b.select_rows(&idx).select_columns(&idx))?;
    }
    let omega = omega.scale(C64::new(1.0 / blocks as f64, 0.0));
    let rebuilt = Matrix::identity(blocks).kron(&omega);
    Ok((omega, residual_norm(b, &rebuilt)?))
}

/// Operators on degrees `0..=d` (fibre `r`) doubly commuting with the
/// truncated `M_z ⊗ I`. `[B, M_z]` is imposed on degree columns `0..d-1`;
/// `[B, M_z*]` on every column but not on the top-degree rows, which the
/// truncation cannot represent.
pub fn doubly_commutant_of_mz(d: usize, r: usize, tol: &Tolerances) -> Result<CommutantBasis> {
    tol.validate()?;
    if d < 1 || r == 0 {
        return Err(Error::InvalidInput(format!("need d ≥ 1 and r ≥ 1, got d = {d}, r = {r}")));
    }
    let n = (d + 1) * r;
    let mz = mz_truncated(d, r);
    let constraints = [
        Constraint {
            op: mz.clone(),
            rows: (0..n).collect(),
            cols: (0..d * r).collect(),
        },
        Constraint {
            op: mz.adjoint(),
            rows: (0..d * r).collect(),
            cols: (0..n).collect(),
        },
    ];
    let (basis, max_constraint_residual) = solve(n, &constraints, tol)?;
    let mut structure = 0.0f64;
    for b in &basis {
        structure = structure.max(block_scalar_residual(b, d + 1, r)?.1);
    }
    Ok(finish(basis, structure, max_constraint_residual))
}

/// Instance check of the normal-commutant statement: for each sampled pair
/// `(A_s, V_t)` with `A_s` normal, commutation implies adjoint-commutation,
/// and `A_s` has the form `I ⊗ B_s` over cells with fibre `fiber`.
pub fn fuglede_instance_check(
    a: &SemigroupFamily,
    v: &SemigroupFamily,
    fiber: usize,
    samples: &[usize],
    tol: &Tolerances,
) -> Result<Report> {
    tol.validate()?;
    if a.dim() != v.dim() || fiber == 0 || a.dim() % fiber != 0 {
        return Err(Error::DimensionMismatch(format!(
            "families on {} and {} with fibre {fiber}",
            a.dim(),
            v.dim()
        )));
    }
    let cells = a.dim() / fiber;
    let (mut normal, mut comm, mut dcomm, mut form) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut implication = true;
    for &s in samples {
        let am = a.element(s)?;
        let x = am.matrix();
        let nres = residual_norm(&x.try_mul(&x.adjoint())?, &x.adjoint().try_mul(x)?)?;
        if nres > tol.resid_abs || am.faithful().len() != a.dim() {
            return Err(Error::PreconditionFailed(format!(
                "sample at step {s} is not a normal operator (residual {nres:e})"
            )));
        }
        normal = normal.max(nres);
        for &t in samples {
            let vt = v.element(t)?;
            let c = am.compose(&vt)?.faithful_residual(&vt.compose(&am)?)?.0;
            let vs = vt.adjoint();
            let dc = am.compose(&vs)?.faithful_residual(&vs.compose(&am)?)?.0;
            if c <= tol.resid_abs && dc > 10.0 * tol.resid_abs {
                implication = false;
            }
            comm = comm.max(c);
            dcomm = dcomm.max(dc);
        }
        form = form.max(block_scalar_residual(x, cells, fiber)?.1);
    }
    let mut report = Report::new();
    report.push(CheckEntry::bounded("normality", normal, vec![a.dim()], tol.resid_abs));
    report.push(CheckEntry::bounded("commutation", comm, vec![a.dim()], tol.resid_abs));
    report.push(CheckEntry::new("adjoint_commutation", dcomm, vec![a.dim()], implication));
    report.push(CheckEntry::bounded("fiber_form", form, vec![cells, fiber], tol.resid_abs));
    Ok(report)
}
