use isoflow_core::decompose::{bcl_check, classify_pair, fourfold_decompose, product_unitary_part, wold_cooper};
use isoflow_core::numlin::Tolerances;
use isoflow_core::semigroups::{
    bishift_families, check_semigroup_law, halfline_family, modified_bishift_families, PairOfSemigroups,
    SemigroupFamily,
};
use isoflow_core::spaces::{CellGrid1D, LRegionIndex, QuadrantGrid2D};
use isoflow_core::{CheckEntry, Report};

use super::{prefixed, Construction, Failure};
use crate::params::{count, times, ParamSpec, Params};

fn isometry_entry(family: &SemigroupFamily, steps: &[usize], tol: &Tolerances) -> Result<CheckEntry, Failure> {
    let mut worst = 0.0f64;
    for &s in steps {
        worst = worst.max(family.element(s)?.isometry_defect());
    }
    Ok(CheckEntry::bounded("isometric_on_window", worst, vec![family.dim()], tol.resid_abs))
}

fn pair_laws(pair: &PairOfSemigroups, steps: &[usize], tol: &Tolerances) -> Result<Report, Failure> {
    let mut report = Report::new();
    for (name, f) in [("first", &pair.first), ("second", &pair.second)] {
        let mut laws = check_semigroup_law(f, steps, tol.resid_abs)?;
        laws.push(isometry_entry(f, steps, tol)?);
        report.extend(prefixed(name, laws));
    }
    Ok(report)
}

pub struct HalflineShift;

impl Construction for HalflineShift {
    fn name(&self) -> &'static str {
        "halfline_shift"
    }
    fn anchor(&self) -> &'static str {
        "right-shift semigroup; Cooper's decomposition (pure shift has no unitary part)"
    }
    fn summary(&self) -> &'static str {
        "right shift on L2([0,T), C^r): semigroup law, isometry on the window, c.n.u."
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("m", 1, 8, Some("2"), "cells per unit length"),
            count("T", 1, 16, Some("4"), "window length"),
            count("r", 1, 4, Some("1"), "fibre dimension"),
            count("K", 1, 128, Some("16"), "generator powers used by the Wold splitting"),
            times("samples", Some("[0.5, 1.0]"), "times for the semigroup law"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let m = p.count("m");
        let family = halfline_family(CellGrid1D::new(m, p.count("T"), p.count("r"))?);
        let steps = p.steps("samples", m)?;
        let mut report = check_semigroup_law(&family, &steps, tol.resid_abs)?;
        report.push(isometry_entry(&family, &steps, tol)?);
        let w = wold_cooper(&family, p.count("K"), tol)?;
        report.push(CheckEntry::new(
            "unitary_part_vanishes",
            w.unitary_residual,
            vec![family.dim(), w.unitary_part.dim()],
            w.unitary_part.is_zero() && w.stabilized,
        ));
        Ok(report)
    }
}

pub struct Bishift;

impl Construction for Bishift {
    fn name(&self) -> &'static str {
        "bishift"
    }
    fn anchor(&self) -> &'static str {
        "bishift example; fourfold decomposition; bishift model"
    }
    fn summary(&self) -> &'static str {
        "coordinate shifts on the quadrant: doubly commuting, entirely pure, trivial product unitary part"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("m", 1, 4, Some("1"), "cells per unit length"),
            count("T", 1, 8, Some("3"), "window length"),
            count("r", 1, 3, Some("1"), "fibre dimension"),
            count("K", 1, 64, Some("8"), "generator powers used by the Wold splitting"),
            times("samples", Some("[1.0]"), "sample times"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let m = p.count("m");
        let pair = bishift_families(QuadrantGrid2D::new(m, p.count("T"), p.count("r"))?);
        let steps = p.steps("samples", m)?;
        let k = p.count("K");
        let mut report = pair_laws(&pair, &steps, tol)?;
        let class = classify_pair(&pair, &steps, tol)?;
        let n = pair.dim();
        report.push(CheckEntry::bounded("commutator", class.comm_residual, vec![n, class.compared], tol.resid_abs));
        report.push(CheckEntry::bounded(
            "adjoint_commutator",
            class.double_comm_residual,
            vec![n, class.compared],
            tol.resid_abs,
        ));
        let split = fourfold_decompose(&pair, k, &steps, tol)?;
        let red = split.reduction_residuals.iter().fold(0.0f64, |a, &b| a.max(b));
        let dims = split.dims();
        report.push(CheckEntry::new(
            "pure_part_fills_window",
            red,
            dims.to_vec(),
            dims == [n, 0, 0, 0] && red <= tol.resid_abs && split.stabilized(),
        ));
        let unitary = product_unitary_part(&pair, k, tol)?;
        report.push(CheckEntry::new(
            "product_unitary_part_vanishes",
            unitary.reduction_residual,
            vec![n, unitary.space.dim()],
            unitary.space.is_zero() && unitary.stabilized,
        ));
        Ok(report)
    }
}

pub struct ModifiedBishift;

impl Construction for ModifiedBishift {
    fn name(&self) -> &'static str {
        "modified_bishift"
    }
    fn anchor(&self) -> &'static str {
        "modified bishift example (commuting, not doubly commuting)"
    }
    fn summary(&self) -> &'static str {
        "compressed translations on the L-shaped region: commuting isometries whose adjoints do not commute"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("m", 1, 4, Some("1"), "cells per unit length"),
            count("T", 1, 6, Some("2"), "window length"),
            count("r", 1, 3, Some("1"), "fibre dimension"),
            times("samples", Some("[1.0]"), "sample times"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let m = p.count("m");
        let pair = modified_bishift_families(LRegionIndex::new(m, p.count("T"), p.count("r"))?);
        let steps = p.steps("samples", m)?;
        let mut report = pair_laws(&pair, &steps, tol)?;
        let class = classify_pair(&pair, &steps, tol)?;
        let n = pair.dim();
        report.push(CheckEntry::bounded("commutator", class.comm_residual, vec![n, class.compared], tol.resid_abs));
        report.push(CheckEntry::new(
            "adjoint_commutator_witness",
            class.double_comm_residual,
            vec![n, class.compared],
            class.double_comm_residual > tol.resid_abs,
        ));
        Ok(report)
    }
}

pub struct Bcl;

impl Construction for Bcl {
    fn name(&self) -> &'static str {
        "bcl"
    }
    fn anchor(&self) -> &'static str {
        "half-line shift as a Hardy-space multiplier (W S_t W* = M_phi_t)"
    }
    fn summary(&self) -> &'static str {
        "relabelled right shift against multiplication by phi_t; both are partial permutations, equality is exact"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("T", 1, 8, Some("4"), "window length (truncation degree T-1)"),
            count("m", 1, 8, Some("4"), "cells per unit interval"),
            count("r", 1, 4, Some("1"), "fibre dimension"),
            times("samples", Some("[0.0, 0.5, 1.0]"), "times at which the identity is compared"),
        ];
        P
    }
    fn run(&self, p: &Params, _tol: &Tolerances) -> Result<Report, Failure> {
        let m = p.count("m");
        let steps = p.steps("samples", m)?;
        Ok(bcl_check(p.count("T"), m, p.count("r"), &steps)?)
    }
}
