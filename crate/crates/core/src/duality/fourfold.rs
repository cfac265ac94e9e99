use crate::decompose::{fourfold_decompose, product_unitary_part, reduction_residual, PairClass};
use crate::error::{Error, Result};
use crate::numlin::{complement_within, orthonormal_basis, overlap, spectral_norm, Subspace, Tolerances};
use crate::report::{CheckEntry, Report};

use super::extension::{classify_or_vacuous, dual_pair, orbit_span};
use super::setup::ExtensionSetup;

/// Splitting `H = H_m ⊕ H_pu ⊕ H_up ⊕ H_uu` of a pair whose dual is doubly
/// commuting. Subspaces are in the coordinates of the basis of `H`.
#[derive(Clone, Debug)]
pub struct DualFourfoldResult {
    pub h_m: Subspace,
    pub h_pu: Subspace,
    pub h_up: Subspace,
    pub h_uu: Subspace,
    pub report: Report,
}

impl DualFourfoldResult {
    pub fn dims(&self) -> [usize; 4] {
        [self.h_m.dim(), self.h_pu.dim(), self.h_up.dim(), self.h_uu.dim()]
    }
}

fn lift(s: &Subspace, basis_owner: &Subspace) -> Result<Subspace> {
    s.embed(basis_owner.basis())
}

/// Ambient subspace `s ⊆ H` rewritten in the coordinates of the basis of `H`,
/// with the residual `‖(I − P_H) Q_s‖` of the containment.
fn in_h_coords(s: &Subspace, h: &Subspace, tol: &Tolerances) -> Result<(Subspace, f64)> {
    if s.is_zero() {
        return Ok((Subspace::zero(h.dim()), 0.0));
    }
    let coords = h.basis().adjoint().try_mul(s.basis())?;
    let leak = spectral_norm(&s.basis().try_sub(&h.basis().try_mul(&coords)?)?);
    Ok((orthonormal_basis(&coords, tol)?, leak))
}

pub fn dual_fourfold(
    setup: &ExtensionSetup,
    k_max: usize,
    max_orbit: usize,
    samples: &[usize],
    tol: &Tolerances,
) -> Result<DualFourfoldResult> {
    let h = setup.h();
    let original = setup.original_pair();
    let unitary = product_unitary_part(&original, k_max, tol)?;
    let h_uu_amb = lift(&unitary.space, h)?;
    let h_s = complement_within(h, &h_uu_amb, tol)?;
    let dual = dual_pair(&setup.with_subspace(h_s)?, max_orbit, tol)?;
    let ambient = setup.ambient_dim();

    let mut tilde = [Subspace::zero(ambient), Subspace::zero(ambient), Subspace::zero(ambient)];
    if !dual.wt_h.is_zero() {
        let (class, _, dres) = classify_or_vacuous(&dual.dual, samples, tol)?;
        if class != PairClass::DoublyCommuting {
            return Err(Error::PreconditionFailed(format!(
                "dual pair is not doubly commuting (adjoint-commutator residual {dres:e})"
            )));
        }
        let split = fourfold_decompose(&dual.dual, k_max, samples, tol)?;
        if !split.h_uu.is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "dual pair has a {}-dimensional doubly unitary part",
                split.h_uu.dim()
            )));
        }
        tilde = [
            lift(&split.h_pp, &dual.wt_h)?,
            lift(&split.h_pu, &dual.wt_h)?,
            lift(&split.h_up, &dual.wt_h)?,
        ];
    }

    let mut hats = Vec::with_capacity(3);
    let mut parts_amb = Vec::with_capacity(4);
    for t in &tilde {
        let hat = orbit_span(setup, t, max_orbit, tol)?;
        if !hat.stabilized {
            return Err(Error::PreconditionFailed(format!(
                "orbit span of a dual part did not stabilise within radius {max_orbit}"
            )));
        }
        parts_amb.push(complement_within(&hat.space, t, tol)?);
        hats.push(hat.space);
    }
    parts_amb.push(h_uu_amb.clone());

    let mut report = Report::new();
    let mut orth = 0.0f64;
    let spans = [&hats[0], &hats[1], &hats[2], &h_uu_amb];
    for a in 0..4 {
        for b in (a + 1)..4 {
            orth = orth.max(overlap(spans[a], spans[b])?);
        }
    }
    report.push(CheckEntry::bounded("lifted_parts_orthogonal", orth, vec![ambient], tol.resid_abs));

    let mut parts = Vec::with_capacity(4);
    let mut leak = 0.0f64;
    for p in &parts_amb {
        let (ph, l) = in_h_coords(p, h, tol)?;
        leak = leak.max(l);
        parts.push(ph);
    }
    report.push(CheckEntry::bounded("parts_inside_h", leak, vec![h.dim()], tol.resid_abs));
    let dims: Vec<usize> = parts.iter().map(|p| p.dim()).collect();
    let total: usize = dims.iter().sum();
    report.push(CheckEntry::new(
        "parts_exhaust_h",
        0.0,
        vec![h.dim(), total],
        total == h.dim(),
    ));
    let mut members = Vec::new();
    for &s in samples {
        members.push(original.first.element(s)?);
        members.push(original.second.element(s)?);
    }
    let mut red = 0.0f64;
    for p in &parts {
        for member in &members {
            red = red.max(reduction_residual(p, member)?.0);
        }
    }
    report.push(CheckEntry::bounded("parts_reduce_pair", red, dims.clone(), tol.resid_abs));
    let mut it = parts.into_iter();
    Ok(DualFourfoldResult {
        h_m: it.next().expect("four parts"),
        h_pu: it.next().expect("four parts"),
        h_up: it.next().expect("four parts"),
        h_uu: it.next().expect("four parts"),
        report,
    })
}

/// Classes of the original pair and of its dual, plus the three-part
/// splitting check when both are doubly commuting.
#[derive(Clone, Debug)]
pub struct SimultaneousResult {
    pub original: PairClass,
    pub original_residual: f64,
    pub dual: PairClass,
    pub dual_residual: f64,
    /// `[pp, pu, up, uu]` dimensions when both pairs are doubly commuting.
    pub decomposition: Option<[usize; 4]>,
    pub report: Report,
}

pub fn simultaneous_dc_ddc_classify(
    setup: &ExtensionSetup,
    k_max: usize,
    max_orbit: usize,
    samples: &[usize],
    tol: &Tolerances,
) -> Result<SimultaneousResult> {
    let original = setup.original_pair();
    let (oc, _, ores) = classify_or_vacuous(&original, samples, tol)?;
    let dual = dual_pair(setup, max_orbit, tol)?;
    let (dc, _, dres) = classify_or_vacuous(&dual.dual, samples, tol)?;
    let mut report = Report::new();
    let mut decomposition = None;
    if oc == PairClass::DoublyCommuting && dc == PairClass::DoublyCommuting {
        let dims = if original.dim() == 0 {
            [0; 4]
        } else {
            let split = fourfold_decompose(&original, k_max, samples, tol)?;
            let red = split.reduction_residuals.iter().fold(0.0f64, |a, &b| a.max(b));
            report.push(CheckEntry::bounded("split_reduces_pair", red, split.dims().to_vec(), tol.resid_abs));
            split.dims()
        };
        report.push(CheckEntry::new("h_pp_vanishes", 0.0, vec![dims[0]], dims[0] == 0));
        let total: usize = dims.iter().sum();
        report.push(CheckEntry::new(
            "three_parts_exhaust_h",
            0.0,
            vec![original.dim(), total],
            total == original.dim(),
        ));
        let dual_split = dual_fourfold(setup, k_max, max_orbit, samples, tol)?;
        report.push(CheckEntry::new("h_m_vanishes", 0.0, vec![dual_split.h_m.dim()], dual_split.h_m.is_zero()));
        decomposition = Some(dims);
    }
    Ok(SimultaneousResult {
        original: oc,
        original_residual: ores,
        dual: dc,
        dual_residual: dres,
        decomposition,
        report,
    })
}
