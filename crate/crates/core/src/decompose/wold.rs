use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::numlin::{
    complement, intersect, orthonormal_basis, projector_distance, residual_norm, spectral_norm, Matrix,
    Subspace, Tolerances,
};
use crate::semigroups::{PairOfSemigroups, ProductKernel, SemigroupFamily, WindowedMap, SUPPORT_EPS};

/// Splitting of the window into the completely non-unitary part and the
/// unitary part of a family.
#[derive(Clone, Debug)]
pub struct WoldResult {
    pub cnu_part: Subspace,
    pub unitary_part: Subspace,
    /// The intersection did not change on one extra power.
    pub stabilized: bool,
    pub steps_used: usize,
    /// Some power had lost faithful columns, so ranges were computed on a
    /// truncated set. Diagnostic only.
    pub window_exhausted: bool,
    /// `max(‖B*B − I‖, ‖BB* − I‖)` for the generator compressed to the
    /// unitary part, together with its invariance defect.
    pub unitary_residual: f64,
}

fn faithful_range(power: &WindowedMap, tol: &Tolerances) -> Result<Subspace> {
    let cols = power.matrix().select_columns(power.faithful().as_slice());
    orthonormal_basis(&cols, tol)
}

/// Unitary part as the intersection of the ranges of the first `k_max`
/// generator powers, certified by one extra power.
pub fn wold_cooper(family: &SemigroupFamily, k_max: usize, tol: &Tolerances) -> Result<WoldResult> {
    tol.validate()?;
    if k_max == 0 {
        return Err(Error::InvalidInput("K must be at least 1".into()));
    }
    let n = family.dim();
    let g = family.generator()?;
    let mut power = WindowedMap::identity(n);
    let mut running = Subspace::full(n);
    let mut previous = running.clone();
    let mut exhausted = false;
    for _ in 0..=k_max {
        power = g.compose(&power)?;
        exhausted |= power.faithful().len() < n;
        previous = running.clone();
        running = intersect(&running, &faithful_range(&power, tol)?, tol)?;
    }
    // `previous` is the K-step intersection, `running` the certificate.
    let stabilized =
        previous.dim() == running.dim() && projector_distance(&previous, &running)? <= tol.resid_abs;
    let unitary_part = previous;
    let unitary_residual = unitary_defect(&g, &unitary_part)?;
    Ok(WoldResult {
        cnu_part: complement(&unitary_part),
        unitary_part,
        stabilized,
        steps_used: k_max,
        window_exhausted: exhausted,
        unitary_residual,
    })
}

fn unitary_defect(g: &WindowedMap, part: &Subspace) -> Result<f64> {
    if part.is_zero() {
        return Ok(0.0);
    }
    let q = part.basis();
    let gq = g.matrix().try_mul(q)?;
    let b = q.adjoint().try_mul(&gq)?;
    let id = Matrix::identity(part.dim());
    let leak = residual_norm(&gq, &q.try_mul(&b)?)?;
    let left = residual_norm(&b.adjoint().try_mul(&b)?, &id)?;
    let right = residual_norm(&b.try_mul(&b.adjoint())?, &id)?;
    Ok(leak.max(left).max(right))
}

/// True iff the unitary part is trivial and the computation stabilised.
pub fn is_cnu(family: &SemigroupFamily, k_max: usize, tol: &Tolerances) -> Result<bool> {
    let w = wold_cooper(family, k_max, tol)?;
    Ok(w.unitary_part.is_zero() && w.stabilized)
}

/// `‖P A − A P‖` and `‖P A* − A* P‖` over the columns where both products
/// are exact: `i` faithful for the map and `P eᵢ` supported in the faithful
/// set. Returns the larger residual and the smaller column count.
pub fn reduction_residual(space: &Subspace, map: &WindowedMap) -> Result<(f64, usize)> {
    if space.ambient() != map.domain_dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace in C^{} against a map on C^{}",
            space.ambient(),
            map.domain_dim()
        )));
    }
    let p = space.projector();
    let one_side = |a: &WindowedMap| -> Result<(f64, usize)> {
        let cols: IndexSet = a
            .faithful()
            .iter()
            .filter(|&i| p.column_support(i, SUPPORT_EPS).all(|k| a.faithful().contains(k)))
            .collect();
        let pa = p.try_mul(a.matrix())?;
        let ap = a.matrix().try_mul(&p)?;
        let d = pa.try_sub(&ap)?.select_columns(cols.as_slice());
        Ok((spectral_norm(&d), cols.len()))
    };
    let (r1, c1) = one_side(map)?;
    let (r2, c2) = one_side(&map.adjoint())?;
    Ok((r1.max(r2), c1.min(c2)))
}

/// Unitary part of the product family `t ↦ V₁,ₜ V₂,ₜ` with its reduction
/// residual against both generators.
#[derive(Clone, Debug)]
pub struct ProductUnitaryPart {
    pub space: Subspace,
    pub stabilized: bool,
    pub reduction_residual: f64,
}

pub fn product_unitary_part(pair: &PairOfSemigroups, k_max: usize, tol: &Tolerances) -> Result<ProductUnitaryPart> {
    let product = SemigroupFamily::new(ProductKernel(pair.clone()));
    let w = wold_cooper(&product, k_max, tol)?;
    let r1 = reduction_residual(&w.unitary_part, &pair.first.generator()?)?.0;
    let r2 = reduction_residual(&w.unitary_part, &pair.second.generator()?)?.0;
    Ok(ProductUnitaryPart {
        space: w.unitary_part,
        stabilized: w.stabilized,
        reduction_residual: r1.max(r2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroups::{circulant_family, halfline_family, DirectSumKernel};
    use crate::spaces::CellGrid1D;

    #[test]
    fn circulant_is_all_unitary() {
        let w = wold_cooper(&circulant_family(4, 1, 1), 3, &Tolerances::default()).unwrap();
        assert_eq!(w.unitary_part.dim(), 4);
        assert!(w.stabilized);
        assert_eq!(w.unitary_residual, 0.0);
    }

    #[test]
    fn shift_has_no_unitary_part() {
        let f = halfline_family(CellGrid1D::new(1, 8, 1).unwrap());
        let w = wold_cooper(&f, 8, &Tolerances::default()).unwrap();
        assert_eq!(w.unitary_part.dim(), 0);
        assert!(w.stabilized);
        assert!(is_cnu(&f, 8, &Tolerances::default()).unwrap());
    }

    #[test]
    fn shift_plus_circulant() {
        let f = SemigroupFamily::new(DirectSumKernel(vec![
            halfline_family(CellGrid1D::new(1, 8, 1).unwrap()),
            circulant_family(4, 1, 1),
        ]));
        let w = wold_cooper(&f, 8, &Tolerances::default()).unwrap();
        assert_eq!(w.unitary_part.coordinate_support(), Some((8..12).collect()));
        assert!(!is_cnu(&f, 8, &Tolerances::default()).unwrap());
    }
}
