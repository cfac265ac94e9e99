use crate::decompose::{product_unitary_part, PairClass};
use crate::error::{Error, Result};
use crate::numlin::{
    complement_within, max_principal_angle, orthonormal_basis, overlap, projector_distance, spectral_norm,
    Matrix, Subspace, Tolerances,
};
use crate::report::{CheckEntry, Report};
use crate::semigroups::{PairOfSemigroups, WindowedMap, SUPPORT_EPS};

use super::setup::ExtensionSetup;

/// Orbit span of `H` under the ambient unitaries.
#[derive(Clone, Debug)]
pub struct MinimalExtension {
    pub space: Subspace,
    /// Smallest `A` with `span{U₁ᵃU₂ᵇH : |a|,|b| ≤ A} = span{… ≤ A+1}`.
    pub radius: usize,
    pub stabilized: bool,
}

fn neighbour_moves(setup: &ExtensionSetup) -> Result<Vec<Matrix>> {
    let powers = |i: usize| [setup.unitary(i).adjoint(), Matrix::identity(setup.ambient_dim()), setup.unitary(i).clone()];
    let (p1, p2) = (powers(0), powers(1));
    let mut moves = Vec::with_capacity(9);
    for a in &p1 {
        for b in &p2 {
            moves.push(a.try_mul(b)?);
        }
    }
    Ok(moves)
}

/// Orbit span of an arbitrary subspace `s` under the setup's unitaries.
pub fn orbit_span(setup: &ExtensionSetup, s: &Subspace, max_orbit: usize, tol: &Tolerances) -> Result<MinimalExtension> {
    tol.validate()?;
    let moves = neighbour_moves(setup)?;
    let mut current = s.clone();
    for radius in 0..=max_orbit {
        if current.is_zero() || current.dim() == current.ambient() {
            return Ok(MinimalExtension { space: current, radius, stabilized: true });
        }
        let images = moves
            .iter()
            .map(|u| u.try_mul(current.basis()))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Matrix> = images.iter().collect();
        let next = orthonormal_basis(&Matrix::hstack(&refs)?, tol)?;
        if next.dim() == current.dim() && max_principal_angle(&current, &next)? <= tol.resid_abs {
            return Ok(MinimalExtension { space: current, radius, stabilized: true });
        }
        current = next;
    }
    Ok(MinimalExtension {
        space: current,
        radius: max_orbit,
        stabilized: false,
    })
}

/// Minimal unitary extension space of the setup's original pair.
pub fn minimal_extension(setup: &ExtensionSetup, max_orbit: usize, tol: &Tolerances) -> Result<MinimalExtension> {
    orbit_span(setup, setup.h(), max_orbit, tol)
}

/// The extension space, its part orthogonal to `H`, and the dual pair
/// (adjoint unitaries compressed to that part).
#[derive(Clone, Debug)]
pub struct DualResult {
    pub extension: MinimalExtension,
    pub wt_h: Subspace,
    pub dual: PairOfSemigroups,
    /// `max_i ‖(I − P) Uᵢ* Q‖` over the basis vectors of `wt_h` that lie in
    /// the faithful set of `Uᵢ*`.
    pub invariance_residual: f64,
}

impl DualResult {
    pub fn ob_h(&self) -> &Subspace {
        &self.extension.space
    }
}

/// `‖(I − P_S) A Q_f‖` where `Q_f` are the basis vectors of `s` supported in
/// the faithful set of `a`.
pub(crate) fn invariance_defect(s: &Subspace, a: &WindowedMap) -> Result<f64> {
    if s.is_zero() {
        return Ok(0.0);
    }
    let q = s.basis();
    let cols: Vec<usize> = (0..q.cols())
        .filter(|&b| q.column_support(b, SUPPORT_EPS).all(|i| a.faithful().contains(i)))
        .collect();
    let qf = q.select_columns(&cols);
    let aq = a.matrix().try_mul(&qf)?;
    let inside = q.try_mul(&q.adjoint().try_mul(&aq)?)?;
    Ok(spectral_norm(&aq.try_sub(&inside)?))
}

pub fn dual_pair(setup: &ExtensionSetup, max_orbit: usize, tol: &Tolerances) -> Result<DualResult> {
    let extension = minimal_extension(setup, max_orbit, tol)?;
    if !extension.stabilized {
        return Err(Error::PreconditionFailed(format!(
            "orbit span did not stabilise within radius {max_orbit}"
        )));
    }
    let wt_h = complement_within(&extension.space, setup.h(), tol)?;
    let dual = setup.compressed_pair(&wt_h, true, "W");
    let invariance_residual =
        invariance_defect(&wt_h, &setup.step_adjoint(0))?.max(invariance_defect(&wt_h, &setup.step_adjoint(1))?);
    Ok(DualResult {
        extension,
        wt_h,
        dual,
        invariance_residual,
    })
}

/// The dual pair's product family has trivial unitary part.
pub fn dual_cnu_check(setup: &ExtensionSetup, k_max: usize, max_orbit: usize, tol: &Tolerances) -> Result<Report> {
    let dual = dual_pair(setup, max_orbit, tol)?;
    let mut report = Report::new();
    report.push(CheckEntry::bounded(
        "dual_invariance",
        dual.invariance_residual,
        vec![dual.ob_h().dim(), dual.wt_h.dim()],
        tol.resid_abs,
    ));
    if dual.wt_h.is_zero() {
        report.push(CheckEntry::new("dual_cnu", 0.0, vec![0, 0], true).with_note("empty dual"));
        return Ok(report);
    }
    let part = product_unitary_part(&dual.dual, k_max, tol)?;
    let mut entry = CheckEntry::new(
        "dual_cnu",
        part.reduction_residual,
        vec![dual.wt_h.dim(), part.space.dim()],
        part.space.is_zero() && part.stabilized,
    );
    if !part.stabilized {
        entry = entry.with_note("unitary part not stabilised; enlarge K or the window");
    }
    report.push(entry);
    Ok(report)
}

/// Dual of the dual: builds the setup `(U₁*, U₂*, wtH)`, checks its orbit
/// span is the original extension space, and compares the recovered pair
/// with the original one at the sampled steps.
pub fn double_dual_check(
    setup: &ExtensionSetup,
    k_max: usize,
    max_orbit: usize,
    samples: &[usize],
    tol: &Tolerances,
) -> Result<Report> {
    if setup.h().is_zero() {
        return Err(Error::PreconditionFailed("original space is zero".into()));
    }
    let original = setup.original_pair();
    let unitary = product_unitary_part(&original, k_max, tol)?;
    if !unitary.space.is_zero() || !unitary.stabilized {
        return Err(Error::PreconditionFailed(format!(
            "original pair is not c.n.u. (unitary part of dimension {})",
            unitary.space.dim()
        )));
    }
    let first = dual_pair(setup, max_orbit, tol)?;
    let dual_setup = setup.adjoint_setup(first.wt_h.clone())?;
    let second = dual_pair(&dual_setup, max_orbit, tol)?;

    let mut report = Report::new();
    let ob = first.ob_h();
    let ob2 = second.ob_h();
    let minimality = if ob.dim() == ob2.dim() { projector_distance(ob, ob2)? } else { 1.0 };
    report.push(CheckEntry::bounded(
        "double_dual_minimality",
        minimality,
        vec![ob.dim(), ob2.dim()],
        tol.resid_abs,
    ));
    let recovered = &second.wt_h;
    let space_res = if recovered.dim() == setup.h().dim() {
        projector_distance(recovered, setup.h())?
    } else {
        1.0
    };
    report.push(CheckEntry::bounded(
        "double_dual_space",
        space_res,
        vec![setup.h().dim(), recovered.dim()],
        tol.resid_abs,
    ));
    // Recovered operators in the coordinates of P_R Q_H.
    let carried = recovered.projector().try_mul(setup.h().basis())?;
    let carried = Subspace::from_orthonormal(carried).map_err(|_| {
        Error::InternalInconsistency("recovered space is not aligned with the original space".into())
    })?;
    let back = dual_setup.with_subspace(carried)?.compressed_pair_of_adjoint();
    let mut worst = 0.0f64;
    let mut compared = usize::MAX;
    for &t in samples {
        for (a, b) in [(&back.first, &original.first), (&back.second, &original.second)] {
            let (res, cols) = a.element(t)?.faithful_residual(&b.element(t)?)?;
            worst = worst.max(res);
            compared = compared.min(cols);
        }
    }
    report.push(CheckEntry::bounded(
        "double_dual_pair",
        worst,
        vec![setup.h().dim(), if samples.is_empty() { 0 } else { compared }],
        tol.resid_abs,
    ));
    report.push(CheckEntry::bounded(
        "double_dual_orthogonal",
        overlap(recovered, &first.wt_h)?,
        vec![recovered.dim(), first.wt_h.dim()],
        tol.resid_abs,
    ));
    Ok(report)
}

impl ExtensionSetup {
    /// Compression of the adjoint unitaries to `H`: the dual pair of this
    /// setup when `H` plays the role of the complement.
    pub(crate) fn compressed_pair_of_adjoint(&self) -> PairOfSemigroups {
        self.compressed_pair(self.h(), true, "V")
    }
}

/// Classification of a pair that may act on a zero-dimensional space; the
/// empty pair counts as doubly commuting.
pub(crate) fn classify_or_vacuous(
    pair: &PairOfSemigroups,
    samples: &[usize],
    tol: &Tolerances,
) -> Result<(PairClass, f64, f64)> {
    if pair.dim() == 0 {
        return Ok((PairClass::DoublyCommuting, 0.0, 0.0));
    }
    let rep = crate::decompose::classify_pair(pair, samples, tol)?;
    Ok((rep.classified, rep.comm_residual, rep.double_comm_residual))
}
