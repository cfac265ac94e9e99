use crate::error::{Error, Result};
use crate::numlin::{residual_norm, Matrix, Tolerances};
use crate::report::{CheckEntry, Report};
use crate::semigroups::{halfline_shift, phi_multiplier, PairOfSemigroups};
use crate::spaces::{w_unitary, CellGrid1D, HardyCoeffSpace};

/// Compares `W Sₜ W*` with multiplication by `φₜ` at each sampled step count.
/// Both sides are partial permutations, so a pass requires an exact zero.
pub fn bcl_check(extent: usize, m: usize, r: usize, samples: &[usize]) -> Result<Report> {
    let grid = CellGrid1D::new(m, extent, r)?;
    let hardy = HardyCoeffSpace::new(extent - 1, m, r)?;
    let w = w_unitary(extent, m, r)?;
    let mut report = Report::new();
    for &j in samples {
        let shifted = halfline_shift(&grid, j)?.conjugate(&w)?;
        let phi = phi_multiplier(&hardy, j)?;
        let (res, cols) = shifted.faithful_residual(&phi)?;
        report.push(CheckEntry::new(
            format!("bcl_step_{j}"),
            res,
            vec![hardy.dim(), cols],
            res == 0.0,
        ));
    }
    Ok(report)
}

/// Checks `Z A_{j,t} Z* = B_{j,t}` for both members and every sample, on the
/// faithful sets.
pub fn verify_joint_equivalence(
    a: &PairOfSemigroups,
    b: &PairOfSemigroups,
    z: &Matrix,
    samples: &[usize],
    tol: &Tolerances,
) -> Result<Report> {
    tol.validate()?;
    if z.rows() != b.dim() || z.cols() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Z is {}x{}, pairs act on {} and {}",
            z.rows(),
            z.cols(),
            a.dim(),
            b.dim()
        )));
    }
    let zz = z.adjoint().try_mul(z)?;
    let defect = residual_norm(&zz, &Matrix::identity(z.cols()))?
        .max(residual_norm(&z.try_mul(&z.adjoint())?, &Matrix::identity(z.rows()))?);
    if defect > tol.resid_abs {
        return Err(Error::PreconditionFailed(format!("Z is not unitary (defect {defect:e})")));
    }
    let (mut worst, mut compared) = (0.0f64, usize::MAX);
    for &t in samples {
        for (fa, fb) in [(&a.first, &b.first), (&a.second, &b.second)] {
            let lhs = fa.element(t)?.conjugate(z)?;
            let (res, cols) = lhs.faithful_residual(&fb.element(t)?)?;
            worst = worst.max(res);
            compared = compared.min(cols);
        }
    }
    let mut report = Report::new();
    report.push(CheckEntry::bounded("z_unitary", defect, vec![z.rows()], tol.resid_abs));
    report.push(CheckEntry::bounded(
        "joint_equivalence",
        worst,
        vec![b.dim(), if samples.is_empty() { 0 } else { compared }],
        tol.resid_abs,
    ));
    Ok(report)
}
