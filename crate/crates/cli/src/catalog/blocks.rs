use isoflow_core::decompose::{classify_pair, fourfold_decompose, product_unitary_part, PairClass};
use isoflow_core::duality::{
    cnu_unitary_setup, dual_cnu_check, dual_fourfold, l_region_setup, unitary_cnu_setup, unitary_unitary_setup,
    ExtensionSetup,
};
use isoflow_core::numlin::{max_principal_angle, Subspace, Tolerances};
use isoflow_core::semigroups::{
    bishift_families, check_semigroup_law, circulant_family, halfline_family, DirectSumKernel, FiberSide,
    PairOfSemigroups, SemigroupFamily, TensorKernel,
};
use isoflow_core::spaces::{CellGrid1D, QuadrantGrid2D};
use isoflow_core::{CheckEntry, IndexSet, Report};
use isoflow_core::Result as CoreResult;

use super::{prefixed, Construction, Failure};
use crate::params::{count, times, ParamSpec, Params};

fn tensor(inner: SemigroupFamily, fiber: usize, side: FiberSide) -> SemigroupFamily {
    SemigroupFamily::new(TensorKernel { inner, fiber, side })
}

/// Shift x shift, shift x unitary, unitary x shift and unitary x unitary
/// blocks summed into one doubly commuting pair, with the block sizes.
pub fn four_block_pair(m: usize, extent: usize, p: usize) -> CoreResult<(PairOfSemigroups, [usize; 4])> {
    let n = m * extent;
    let ss = bishift_families(QuadrantGrid2D::new(m, extent, 1)?);
    let su = PairOfSemigroups::new(
        halfline_family(CellGrid1D::new(m, extent, p)?),
        tensor(circulant_family(p, 1, m), n, FiberSide::Left),
    )?;
    let us = su.swapped();
    let uu = PairOfSemigroups::new(
        tensor(circulant_family(p, 1, m), p, FiberSide::Right),
        tensor(circulant_family(p, 1, m), p, FiberSide::Left),
    )?;
    let dims = [ss.dim(), su.dim(), us.dim(), uu.dim()];
    let blocks = [ss, su, us, uu];
    let first = blocks.iter().map(|b| b.first.clone()).collect();
    let second = blocks.iter().map(|b| b.second.clone()).collect();
    let pair = PairOfSemigroups::new(
        SemigroupFamily::new(DirectSumKernel(first)),
        SemigroupFamily::new(DirectSumKernel(second)),
    )?;
    Ok((pair, dims))
}

/// Coordinate subspaces of consecutive blocks with the given sizes.
fn coordinate_blocks(dims: &[usize]) -> CoreResult<Vec<Subspace>> {
    let total: usize = dims.iter().sum();
    let mut start = 0;
    let mut out = Vec::with_capacity(dims.len());
    for &d in dims {
        out.push(Subspace::coordinate(total, &(start..start + d).collect::<IndexSet>())?);
        start += d;
    }
    Ok(out)
}

pub struct FourBlockDc;

impl Construction for FourBlockDc {
    fn name(&self) -> &'static str {
        "four_block_dc"
    }
    fn anchor(&self) -> &'static str {
        "fourfold decomposition of a doubly commuting pair"
    }
    fn summary(&self) -> &'static str {
        "direct sum of shift/unitary blocks; the recovered four parts must be the blocks"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("m", 1, 4, Some("1"), "cells per unit length"),
            count("T", 1, 8, Some("4"), "window length"),
            count("p", 1, 6, Some("3"), "size of the circulant blocks"),
            count("K", 1, 64, Some("8"), "generator powers used by the Wold splitting"),
            times("samples", Some("[1.0]"), "sample times"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let m = p.count("m");
        let (pair, dims) = four_block_pair(m, p.count("T"), p.count("p"))?;
        let steps = p.steps("samples", m)?;
        let k = p.count("K");
        let n = pair.dim();
        let mut report = Report::new();
        for (name, f) in [("first", &pair.first), ("second", &pair.second)] {
            report.extend(prefixed(name, check_semigroup_law(f, &steps, tol.resid_abs)?));
        }
        let class = classify_pair(&pair, &steps, tol)?;
        report.push(CheckEntry::new(
            "doubly_commuting",
            class.comm_residual.max(class.double_comm_residual),
            vec![n, class.compared],
            class.classified == PairClass::DoublyCommuting,
        ));
        let split = fourfold_decompose(&pair, k, &steps, tol)?;
        let red = split.reduction_residuals.iter().fold(0.0f64, |a, &b| a.max(b));
        let found = split.dims();
        let mut dims_echo = found.to_vec();
        dims_echo.extend(dims);
        report.push(CheckEntry::new(
            "part_dims",
            red,
            dims_echo,
            found == dims && red <= tol.resid_abs && split.stabilized(),
        ));
        let blocks = coordinate_blocks(&dims)?;
        let mut angle = 0.0f64;
        for (part, block) in split.parts().iter().zip(&blocks) {
            angle = angle.max(if part.dim() == block.dim() { max_principal_angle(part, block)? } else { 1.0 });
        }
        report.push(CheckEntry::bounded("parts_match_blocks", angle, vec![n], 1e-8));
        let unitary = product_unitary_part(&pair, k, tol)?;
        let uangle = if unitary.space.dim() == blocks[3].dim() {
            max_principal_angle(&unitary.space, &blocks[3])?
        } else {
            1.0
        };
        report.push(CheckEntry::new(
            "product_unitary_part_is_uu",
            uangle,
            vec![unitary.space.dim(), dims[3]],
            uangle <= 1e-8 && unitary.stabilized,
        ));
        Ok(report)
    }
}

/// L-region, c.n.u. x unitary, unitary x c.n.u. and unitary x unitary
/// extension setups summed, with the dimensions of their original spaces.
pub fn four_block_dual_setup(m: usize, extent: usize, p: usize) -> CoreResult<(ExtensionSetup, [usize; 4])> {
    let parts = [
        l_region_setup(m, extent, 1)?,
        cnu_unitary_setup(m, extent, p)?,
        unitary_cnu_setup(m, extent, p)?,
        unitary_unitary_setup(m, p, p)?,
    ];
    let dims = [parts[0].h().dim(), parts[1].h().dim(), parts[2].h().dim(), parts[3].h().dim()];
    let refs: Vec<&ExtensionSetup> = parts.iter().collect();
    Ok((ExtensionSetup::direct_sum("four_block", &refs)?, dims))
}

pub struct FourBlockDdc;

impl Construction for FourBlockDdc {
    fn name(&self) -> &'static str {
        "four_block_ddc"
    }
    fn anchor(&self) -> &'static str {
        "fourfold decomposition of a pair with doubly commuting dual"
    }
    fn summary(&self) -> &'static str {
        "direct sum of L-region and shift/unitary extension setups; recovered parts must be the blocks"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("m", 1, 2, Some("1"), "cells per unit length"),
            count("T", 1, 4, Some("2"), "window length"),
            count("p", 1, 4, Some("3"), "size of the circulant blocks"),
            count("K", 1, 64, Some("8"), "generator powers used by the Wold splitting"),
            count("max_orbit", 1, 32, Some("8"), "largest orbit radius tried for the extension"),
            times("samples", Some("[1.0]"), "sample times"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let m = p.count("m");
        let (setup, dims) = four_block_dual_setup(m, p.count("T"), p.count("p"))?;
        let steps = p.steps("samples", m)?;
        let (k, orbit) = (p.count("K"), p.count("max_orbit"));
        let split = dual_fourfold(&setup, k, orbit, &steps, tol)?;
        let found = split.dims();
        let mut report = split.report;
        let mut dims_echo = found.to_vec();
        dims_echo.extend(dims);
        report.push(CheckEntry::new("part_dims", 0.0, dims_echo, found == dims));
        report.extend(dual_cnu_check(&setup, k, orbit, tol)?);
        Ok(report)
    }
}
