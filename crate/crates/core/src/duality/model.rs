use crate::decompose::{fourfold_decompose, PairClass};
use crate::error::{Error, Result};
use crate::numlin::{nullspace, residual_norm, Matrix, Tolerances};
use crate::report::{CheckEntry, Report};
use crate::semigroups::modified_bishift_pair;
use crate::spaces::LRegionIndex;

use super::extension::{classify_or_vacuous, dual_pair};
use super::setup::ExtensionSetup;

/// Applies `Uᵏ` (or `(U*)^{-k}` for negative `k`) to a vector.
fn power_apply(u: &Matrix, k: i64, v: &Matrix) -> Result<Matrix> {
    let step = if k >= 0 { u.clone() } else { u.adjoint() };
    let mut out = v.clone();
    for _ in 0..k.unsigned_abs() {
        out = step.try_mul(&out)?;
    }
    Ok(out)
}

/// Identifies the original pair with the modified bishift on `region`.
///
/// The wandering subspace `ker W₁* ∩ ker W₂*` of the dual pair is moved
/// around by the adjoint unitaries to give a frame indexed by the L-region
/// cells; conjugating the original pair by that frame must reproduce
/// [`modified_bishift_pair`] exactly at the sampled steps.
pub fn modified_bishift_model_check(
    setup: &ExtensionSetup,
    region: &LRegionIndex,
    k_max: usize,
    max_orbit: usize,
    samples: &[usize],
    tol: &Tolerances,
) -> Result<Report> {
    if setup.ambient_dim() != region.torus.dim() || setup.h().dim() != region.dim() {
        return Err(Error::DimensionMismatch(format!(
            "setup on C^{} with dim H = {} does not match the L-region ({} in C^{})",
            setup.ambient_dim(),
            setup.h().dim(),
            region.dim(),
            region.torus.dim()
        )));
    }
    let dual = dual_pair(setup, max_orbit, tol)?;
    let not_bishift = |why: String| Error::PreconditionFailed(format!("dual pair is not a bishift: {why}"));
    if dual.wt_h.is_zero() {
        return Err(not_bishift("it is empty".into()));
    }
    // The generators determine the whole discrete pair.
    let (class, _, _) = classify_or_vacuous(&dual.dual, &[1], tol)?;
    if class != PairClass::DoublyCommuting {
        return Err(not_bishift(format!("it is {}", class.as_str())));
    }
    let split = fourfold_decompose(&dual.dual, k_max, &[1], tol)?;
    if split.h_pp.dim() != dual.wt_h.dim() {
        return Err(not_bishift(format!("pure part has dimension {} of {}", split.h_pp.dim(), dual.wt_h.dim())));
    }

    let g1 = dual.dual.first.generator()?;
    let g2 = dual.dual.second.generator()?;
    let stacked = Matrix::vstack(&[&g1.matrix().adjoint(), &g2.matrix().adjoint()])?;
    let wandering = nullspace(&stacked, tol)?;
    let r = region.torus.fiber;
    let mut report = Report::new();
    report.push(CheckEntry::new(
        "wandering_dim",
        0.0,
        vec![wandering.dim(), r],
        wandering.dim() == r,
    ));
    if wandering.dim() != r {
        return Ok(report);
    }
    let w = dual.wt_h.basis().try_mul(wandering.basis())?;

    let half = region.half() as i64;
    let u1s = setup.unitary(0).adjoint();
    let u2s = setup.unitary(1).adjoint();
    let mut frame = Vec::with_capacity(region.dim());
    for cell in region.region_cells().iter() {
        let (c1, c2) = region.torus.coords(cell);
        for rho in 0..r {
            let v = w.select_columns(&[rho]);
            let v = power_apply(&u2s, c2 as i64 - half, &v)?;
            let v = power_apply(&u1s, c1 as i64 - half, &v)?;
            frame.push(v.column_vec(0));
        }
    }
    let z = Matrix::from_columns(setup.ambient_dim(), &frame);
    let g = setup.h().basis().adjoint().try_mul(&z)?;
    let id = Matrix::identity(g.cols());
    let defect = residual_norm(&g.adjoint().try_mul(&g)?, &id)?.max(residual_norm(&g.try_mul(&g.adjoint())?, &id)?);
    report.push(CheckEntry::bounded("frame_unitary", defect, vec![g.rows()], tol.resid_abs));

    let original = setup.original_pair();
    let ga = g.adjoint();
    let (mut worst, mut compared) = (0.0f64, usize::MAX);
    for &j in samples {
        let (m1, m2) = modified_bishift_pair(region, j)?;
        for (fam, model) in [(&original.first, &m1), (&original.second, &m2)] {
            let (res, cols) = fam.element(j)?.conjugate(&ga)?.faithful_residual(model)?;
            worst = worst.max(res);
            compared = compared.min(cols);
        }
    }
    report.push(CheckEntry::bounded(
        "model_equivalence",
        worst,
        vec![region.dim(), if samples.is_empty() { 0 } else { compared }],
        tol.resid_abs,
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::setup::*;
    use super::*;

    #[test]
    fn scalar_and_vector_fibres() {
        for r in [1, 2] {
            let region = LRegionIndex::new(1, 2, r).unwrap();
            let setup = l_region_setup(1, 2, r).unwrap();
            let rep = modified_bishift_model_check(&setup, &region, 4, 8, &[1, 2], &Tolerances::default()).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.max_residual(), 0.0);
            let again = modified_bishift_model_check(&setup, &region, 4, 8, &[1, 2], &Tolerances::default()).unwrap();
            assert_eq!(rep, again);
        }
    }

    #[test]
    fn quadrant_setup_is_rejected() {
        let region = LRegionIndex::new(1, 2, 1).unwrap();
        let setup = quadrant_setup(1, 2, 1).unwrap();
        assert!(modified_bishift_model_check(&setup, &region, 4, 8, &[1], &Tolerances::default()).is_err());
    }
}
