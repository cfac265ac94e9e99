use isoflow_core::decompose::{classify_pair, wold_cooper, PairClass};
use isoflow_core::numlin::Tolerances;
use isoflow_core::semigroups::{
    bishift_families, check_semigroup_law, circulant_family, halfline_family, halfline_shift,
    modified_bishift_families, phi_family, DirectSumKernel, SemigroupFamily,
};
use isoflow_core::spaces::{CellGrid1D, HardyCoeffSpace, LRegionIndex, QuadrantGrid2D};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn halfline_law_is_exact(m in 1usize..4, t in 2usize..5, r in 1usize..3, s in 0usize..4, u in 0usize..4) {
        let cells = m * t;
        prop_assume!(2 * s.max(u) < cells);
        let family = halfline_family(CellGrid1D::new(m, t, r).unwrap());
        let report = check_semigroup_law(&family, &[s, u], 0.0).unwrap();
        prop_assert!(report.passed());
        prop_assert_eq!(report.max_residual(), 0.0);
    }

    #[test]
    fn shift_moves_each_faithful_cell_by_j(m in 1usize..4, t in 1usize..5, r in 1usize..3, j in 0usize..12) {
        let grid = CellGrid1D::new(m, t, r).unwrap();
        prop_assume!(j <= grid.cells());
        let w = halfline_shift(&grid, j).unwrap();
        prop_assert_eq!(w.faithful().len(), grid.cells().saturating_sub(j) * r);
        for col in w.faithful().iter() {
            prop_assert_eq!(w.matrix().get(col + j * r, col).re, 1.0);
        }
        prop_assert_eq!(w.isometry_defect(), 0.0);
    }

    #[test]
    fn multiplier_law_is_exact(d in 2usize..4, m in 1usize..4, r in 1usize..3, s in 0usize..4, u in 0usize..4) {
        let family = phi_family(HardyCoeffSpace::new(d, m, r).unwrap());
        prop_assume!(family.element(2 * s.max(u)).is_ok_and(|w| !w.faithful().is_empty()));
        let report = check_semigroup_law(&family, &[s, u], 0.0).unwrap();
        prop_assert!(report.passed());
        prop_assert_eq!(report.max_residual(), 0.0);
    }

    #[test]
    fn bishift_is_doubly_commuting(m in 1usize..3, t in 2usize..4, r in 1usize..3) {
        let pair = bishift_families(QuadrantGrid2D::new(m, t, r).unwrap());
        let c = classify_pair(&pair, &[1], &Tolerances::default()).unwrap();
        prop_assert_eq!(c.classified, PairClass::DoublyCommuting);
        prop_assert_eq!(c.comm_residual, 0.0);
    }

    #[test]
    fn modified_bishift_commutes_but_not_doubly(m in 1usize..3, t in 1usize..4) {
        prop_assume!(m * t >= 2);
        let pair = modified_bishift_families(LRegionIndex::new(m, t, 1).unwrap());
        let c = classify_pair(&pair, &[1], &Tolerances::default()).unwrap();
        prop_assert_eq!(c.classified, PairClass::Commuting);
        prop_assert_eq!(c.comm_residual, 0.0);
    }

    #[test]
    fn cooper_split_recovers_the_circulant_block(cells in 2usize..8, p in 1usize..5) {
        let family = SemigroupFamily::new(DirectSumKernel(vec![
            halfline_family(CellGrid1D::new(1, cells, 1).unwrap()),
            circulant_family(p, 1, 1),
        ]));
        let w = wold_cooper(&family, cells, &Tolerances::default()).unwrap();
        prop_assert!(w.stabilized);
        prop_assert_eq!(w.unitary_part.dim(), p);
        prop_assert_eq!(w.cnu_part.dim(), cells);
        let support = w.unitary_part.coordinate_support().unwrap();
        prop_assert_eq!(support.as_slice(), &(cells..cells + p).collect::<Vec<_>>()[..]);
    }
}
