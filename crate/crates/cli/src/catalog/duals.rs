use isoflow_core::decompose::PairClass;
use isoflow_core::duality::{
    cnu_unitary_setup, double_dual_check, dual_cnu_check, dual_pair, l_region_setup, minimal_extension,
    modified_bishift_model_check, quadrant_setup, simultaneous_dc_ddc_classify, unitary_cnu_setup,
    unitary_unitary_setup, ExtensionSetup,
};
use isoflow_core::numlin::{projector_distance, Subspace, Tolerances};
use isoflow_core::semigroups::bishift_pair;
use isoflow_core::spaces::{LRegionIndex, QuadrantGrid2D};
use isoflow_core::{CheckEntry, Report};
use isoflow_core::Result as CoreResult;

use super::{prefixed, Construction, Failure};
use crate::params::{choice, count, flag, times, ParamSpec, Params};

pub struct DualExample;

impl Construction for DualExample {
    fn name(&self) -> &'static str {
        "dual_example"
    }
    fn anchor(&self) -> &'static str {
        "dual of the modified bishift is the bishift"
    }
    fn summary(&self) -> &'static str {
        "torus extension of the L-region pair; the dual lives on the quadrant and equals the bishift"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("m", 1, 2, Some("1"), "cells per unit length"),
            count("T", 1, 4, Some("2"), "window length"),
            count("r", 1, 2, Some("1"), "fibre dimension"),
            count("K", 1, 64, Some("8"), "generator powers used by the Wold splitting"),
            count("max_orbit", 1, 32, Some("8"), "largest orbit radius tried for the extension"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let (m, t, r) = (p.count("m"), p.count("T"), p.count("r"));
        let (k, orbit) = (p.count("K"), p.count("max_orbit"));
        let region = LRegionIndex::new(m, t, r)?;
        let setup = l_region_setup(m, t, r)?;
        let dual = dual_pair(&setup, orbit, tol)?;
        let ambient = setup.ambient_dim();
        let mut report = Report::new();
        let ob = dual.ob_h().dim();
        report.push(
            CheckEntry::new(
                "extension_is_torus",
                if ob == ambient { 0.0 } else { 1.0 },
                vec![ob, ambient],
                ob == ambient && dual.extension.stabilized,
            )
            .with_note(format!("orbit radius {}", dual.extension.radius)),
        );
        let quadrant = Subspace::coordinate(ambient, &region.quadrant_coords())?;
        let dist = if dual.wt_h.dim() == quadrant.dim() { projector_distance(&dual.wt_h, &quadrant)? } else { 1.0 };
        report.push(CheckEntry::bounded(
            "dual_space_is_quadrant",
            dist,
            vec![dual.wt_h.dim(), quadrant.dim()],
            tol.resid_abs,
        ));
        let grid = QuadrantGrid2D::new(m, t, r)?;
        let (mut worst, mut exact) = (0.0f64, dist == 0.0);
        let last = m * t;
        for j in 0..=last {
            let (s1, s2) = bishift_pair(&grid, j)?;
            for (fam, model) in [(&dual.dual.first, s1), (&dual.dual.second, s2)] {
                let w = fam.element(j)?;
                if w.matrix().shape() != model.matrix().shape() {
                    exact = false;
                    worst = 1.0;
                    continue;
                }
                worst = worst.max(w.faithful_residual(&model)?.0);
                exact &= w == model;
            }
        }
        report.push(CheckEntry::new("dual_equals_bishift", worst, vec![grid.dim(), last + 1], exact));
        report.extend(dual_cnu_check(&setup, k, orbit, tol)?);
        Ok(report)
    }
}

pub struct DoubleDual;

impl Construction for DoubleDual {
    fn name(&self) -> &'static str {
        "double_dual"
    }
    fn anchor(&self) -> &'static str {
        "double dual recovers the pair; modified bishift model"
    }
    fn summary(&self) -> &'static str {
        "dual of the dual of the L-region pair, orbit minimality, and identification with the modified bishift"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            count("m", 1, 2, Some("1"), "cells per unit length"),
            count("T", 1, 4, Some("2"), "window length"),
            count("r", 1, 2, Some("1"), "fibre dimension"),
            count("K", 1, 64, Some("8"), "generator powers used by the Wold splitting"),
            count("max_orbit", 1, 32, Some("8"), "largest orbit radius tried for the extension"),
            times("samples", Some("[1.0, 2.0]"), "sample times"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let (m, t, r) = (p.count("m"), p.count("T"), p.count("r"));
        let (k, orbit) = (p.count("K"), p.count("max_orbit"));
        let steps = p.steps("samples", m)?;
        let region = LRegionIndex::new(m, t, r)?;
        let setup = l_region_setup(m, t, r)?;
        let mut report = double_dual_check(&setup, k, orbit, &steps, tol)?;
        let ext = minimal_extension(&setup, orbit, tol)?;
        report.push(CheckEntry::new(
            "minimality_radius",
            0.0,
            vec![ext.radius, 2 * m * t],
            ext.stabilized && ext.radius <= 2 * m * t,
        ));
        let model = modified_bishift_model_check(&setup, &region, k, orbit, &steps, tol)?;
        report.extend(prefixed("model", model));
        Ok(report)
    }
}

const VARIANTS: &[&str] = &["mixed", "quadrant", "unitary"];

/// The bundled setups for the simultaneous classification.
pub fn simultaneous_setup(variant: &str, m: usize, extent: usize, p: usize) -> CoreResult<ExtensionSetup> {
    match variant {
        "quadrant" => quadrant_setup(m, extent, 1),
        "unitary" => unitary_unitary_setup(m, p, p),
        _ => {
            let parts = [cnu_unitary_setup(m, extent, p)?, unitary_cnu_setup(m, extent, p)?, unitary_unitary_setup(m, p, p)?];
            let refs: Vec<&ExtensionSetup> = parts.iter().collect();
            ExtensionSetup::direct_sum("mixed", &refs)
        }
    }
}

pub struct Simultaneous;

impl Construction for Simultaneous {
    fn name(&self) -> &'static str {
        "simultaneous"
    }
    fn anchor(&self) -> &'static str {
        "pairs that are doubly commuting and have doubly commuting duals"
    }
    fn summary(&self) -> &'static str {
        "classifies a pair and its dual; when both are doubly commuting the pure-pure part vanishes"
    }
    fn params(&self) -> &'static [ParamSpec] {
        const P: &[ParamSpec] = &[
            choice("setup", VARIANTS, Some("\"mixed\""), "which bundled extension setup to use"),
            count("m", 1, 2, Some("1"), "cells per unit length"),
            count("T", 1, 4, Some("2"), "window length"),
            count("p", 1, 4, Some("2"), "size of the circulant blocks"),
            count("K", 1, 64, Some("8"), "generator powers used by the Wold splitting"),
            count("max_orbit", 1, 32, Some("8"), "largest orbit radius tried for the extension"),
            times("samples", Some("[1.0]"), "sample times"),
            flag("expect_dc", Some("true"), "whether the pair should be doubly commuting"),
            flag("expect_ddc", Some("true"), "whether the dual should be doubly commuting"),
        ];
        P
    }
    fn run(&self, p: &Params, tol: &Tolerances) -> Result<Report, Failure> {
        let m = p.count("m");
        let setup = simultaneous_setup(p.choice("setup"), m, p.count("T"), p.count("p"))?;
        let steps = p.steps("samples", m)?;
        let (k, orbit) = (p.count("K"), p.count("max_orbit"));
        let res = simultaneous_dc_ddc_classify(&setup, k, orbit, &steps, tol)?;
        let n = setup.h().dim();
        let mut report = Report::new();
        let dc = res.original == PairClass::DoublyCommuting;
        report.push(
            CheckEntry::new("original_doubly_commuting", res.original_residual, vec![n], dc == p.flag("expect_dc"))
                .with_note(res.original.as_str()),
        );
        let ddc = res.dual == PairClass::DoublyCommuting;
        report.push(
            CheckEntry::new("dual_doubly_commuting", res.dual_residual, vec![n], ddc == p.flag("expect_ddc"))
                .with_note(res.dual.as_str()),
        );
        report.extend(res.report);
        report.extend(dual_cnu_check(&setup, k, orbit, tol)?);
        Ok(report)
    }
}
