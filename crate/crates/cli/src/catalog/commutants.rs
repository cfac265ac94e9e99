use isoflow_core::commutant::{
    commutant_of_partial_isometries, doubly_commutant_of_mz, fuglede_instance_check, StructureVerdict,
};
use isoflow_core::numlin::{residual_norm, Matrix, Tolerances};
use isoflow_core::semigroups::{
    circulant_family, halfline_family, partial_isometry_pair, FiberSide, SemigroupFamily, TensorKernel,
};
use isoflow_core::spaces::CellGrid1D;
use isoflow_core::{CheckEntry, Report};
use isoflow_core::Result as CoreResult;

use super::{prefixed, Construction, Failure};
use crate::params::{count, times, ParamSpec, Params};

/// Worst defect of `E0E0* + E1E1* = I` and `E0*E0 + E1*E1 = I` over
/// `0 <= j < m`.
pub fn resolution_defect(m: usize, r: usize) -> CoreResult<f64> {
    let id = Matrix::identity(m * r);
    let mut worst = 0.0f64;
    for j in 0..m {
        let (e0, e1) = partial_isometry_pair(m, j, r)?;
        let range = e0.try_mul(&e0.adjoint())?.try_add(&e1.try_mul(&e1.adjoint())?)?;
        let domain = e0.adjoint().try_mul(&e0)?.try_add(&e1.adjoint().try_mul(&e1)?)?;
        worst = worst.max(residual_norm(&range, &id)?).max(residual_norm(&domain, &id)?);
    }
    Ok(worst)
}

fn structure_entry(id: &str, verdict: StructureVerdict, residual: f64, dims: Vec<usize>, tol: &Tolerances) -> CheckEntry {
    CheckEntry::new(id, residual, dims, verdict == StructureVerdict::FiberScalar && residual <= tol.resid_abs)
}

pub struct CommutantE;

impl Construction for CommutantE {
    fn name(&self) -> &'static str {
        "commutant_e"
    }
    fn anchor(&self) -> &'static str {
        "commutant of the cut-and-wrap partial isometries on the unit interval"
    }
    fn summary(&self) -> &'static str {
        "operators commuting with E0 and E1 at every grid shift are I (x) C; dimension r^2"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("m", 2, 16, Some("4"), "cells on the unit interval"),
            count("r", 1, 4, Some("2"), "fibre dimension"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let (m, r) = (p.count("m"), p.count("r"));
        let mut report = Report::new();
        let defect = resolution_defect(m, r)?;
        report.push(CheckEntry::new("resolution_identities", defect, vec![m * r], defect == 0.0));
        let c = commutant_of_partial_isometries(m, r, tol)?;
        report.push(
            CheckEntry::new(
                "commutant_dim",
                c.max_constraint_residual,
                vec![c.dim, r * r],
                c.dim == r * r && c.max_constraint_residual <= 10.0 * tol.rank_rel,
            )
            .with_note("shifts restricted to the grid; instance-level evidence"),
        );
        report.push(structure_entry(
            "fiber_scalar_structure",
            c.structure_verdict,
            c.max_structure_residual,
            vec![m, r],
            tol,
        ));
        Ok(report)
    }
}

pub struct CommutantMz;

impl Construction for CommutantMz {
    fn name(&self) -> &'static str {
        "commutant_mz"
    }
    fn anchor(&self) -> &'static str {
        "double commutant of the Hardy-space shift; commutant of a normal family"
    }
    fn summary(&self) -> &'static str {
        "operators doubly commuting with truncated M_z (x) I are I (x) omega; normal commutant instances"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("d", 1, 8, Some("3"), "top polynomial degree"),
            count("r", 1, 4, Some("2"), "fibre dimension"),
            count("m", 1, 4, Some("1"), "cells per unit length for the normal-family instance"),
            count("T", 1, 8, Some("4"), "window length for the normal-family instance"),
            times("samples", Some("[1.0, 2.0]"), "sample times for the normal-family instance"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let (d, r, m) = (p.count("d"), p.count("r"), p.count("m"));
        let mut report = Report::new();
        let c = doubly_commutant_of_mz(d, r, tol)?;
        report.push(CheckEntry::new(
            "mz_commutant_dim",
            c.max_constraint_residual,
            vec![c.dim, r * r],
            c.dim == r * r && c.max_constraint_residual <= 10.0 * tol.rank_rel,
        ));
        report.push(structure_entry(
            "block_scalar_structure",
            c.structure_verdict,
            c.max_structure_residual,
            vec![d + 1, r],
            tol,
        ));
        let grid = CellGrid1D::new(m, p.count("T"), r)?;
        let normal = SemigroupFamily::new(TensorKernel {
            inner: circulant_family(r, 1, m),
            fiber: grid.cells(),
            side: FiberSide::Left,
        });
        let steps = p.steps("samples", m)?;
        let fuglede = fuglede_instance_check(&normal, &halfline_family(grid), r, &steps, tol)?;
        report.extend(prefixed("normal_family", fuglede));
        Ok(report)
    }
}
