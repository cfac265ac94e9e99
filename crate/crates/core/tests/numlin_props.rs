use isoflow_core::numlin::{
    complement, intersect, max_principal_angle, nullspace, orthonormal_basis, overlap, projector_distance,
    singular_values, spectral_norm, Matrix, Subspace, Tolerances, C64,
};
use isoflow_core::IndexSet;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |i, j| C64::new(v[i * cols + j].0, v[i * cols + j].1)))
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..7, 1usize..7)
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    shape().prop_flat_map(|(r, c)| matrix(r, c))
}

/// `A·B` with inner dimension `k`: rank `k` almost surely.
fn low_rank() -> impl Strategy<Value = (Matrix, usize)> {
    (2usize..7, 2usize..7, 1usize..3).prop_flat_map(|(r, c, k)| {
        let k = k.min(r).min(c);
        (matrix(r, k), matrix(k, c)).prop_map(move |(a, b)| (a.try_mul(&b).unwrap(), k))
    })
}

fn identity_defect(q: &Matrix) -> f64 {
    spectral_norm(&q.adjoint().try_mul(q).unwrap().try_sub(&Matrix::identity(q.cols())).unwrap())
}

proptest! {
    #[test]
    fn basis_is_orthonormal_and_spans_the_columns(m in any_matrix()) {
        let s = orthonormal_basis(&m, &Tolerances::default()).unwrap();
        prop_assert!(s.dim() <= m.rows().min(m.cols()));
        prop_assert!(identity_defect(s.basis()) <= 1e-12);
        let p = s.projector();
        let leak = spectral_norm(&m.try_sub(&p.try_mul(&m).unwrap()).unwrap());
        prop_assert!(leak <= 1e-10 * spectral_norm(&m).max(1.0));
        prop_assert!(spectral_norm(&p.try_mul(&p).unwrap().try_sub(&p).unwrap()) <= 1e-12);
        prop_assert!(spectral_norm(&p.try_sub(&p.adjoint()).unwrap()) <= 1e-12);
    }

    #[test]
    fn rank_of_a_product_is_the_inner_dimension((m, k) in low_rank()) {
        prop_assert_eq!(orthonormal_basis(&m, &Tolerances::default()).unwrap().dim(), k);
        prop_assert_eq!(nullspace(&m, &Tolerances::default()).unwrap().dim(), m.cols() - k);
    }

    #[test]
    fn nullspace_is_annihilated(m in any_matrix()) {
        let n = nullspace(&m, &Tolerances::default()).unwrap();
        if !n.is_zero() {
            prop_assert!(spectral_norm(&m.try_mul(n.basis()).unwrap()) <= 1e-9 * spectral_norm(&m).max(1.0));
        }
        let rank = orthonormal_basis(&m, &Tolerances::default()).unwrap().dim();
        prop_assert_eq!(rank + n.dim(), m.cols());
    }

    #[test]
    fn complement_splits_the_space(m in any_matrix()) {
        let s = orthonormal_basis(&m, &Tolerances::default()).unwrap();
        let c = complement(&s);
        prop_assert_eq!(s.dim() + c.dim(), m.rows());
        prop_assert!(overlap(&s, &c).unwrap() <= 1e-12);
        prop_assert!(intersect(&s, &c, &Tolerances::default()).unwrap().is_zero());
    }

    #[test]
    fn intersection_with_itself_is_itself(m in any_matrix()) {
        let s = orthonormal_basis(&m, &Tolerances::default()).unwrap();
        let i = intersect(&s, &s, &Tolerances::default()).unwrap();
        prop_assert_eq!(i.dim(), s.dim());
        prop_assert!(max_principal_angle(&i, &s).unwrap() <= 1e-7);
        prop_assert!(projector_distance(&i, &s).unwrap() <= 1e-7);
    }

    #[test]
    fn singular_values_match_the_frobenius_norm(m in any_matrix()) {
        let sv = singular_values(&m);
        prop_assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        let energy: f64 = sv.iter().map(|s| s * s).sum();
        let fro = m.frobenius_norm();
        prop_assert!((energy - fro * fro).abs() <= 1e-10 * fro * fro + 1e-14);
        let widest = (0..m.cols()).map(|j| m.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max);
        prop_assert!(spectral_norm(&m) + 1e-12 >= widest);
    }

    #[test]
    fn partial_permutations_give_exact_coordinate_spans(
        n in 1usize..10,
        raw in prop::collection::vec(prop::option::of(0usize..10), 1..10),
    ) {
        // Keep an injective partial map into 0..n.
        let mut used = vec![false; n];
        let image: Vec<Option<usize>> = raw
            .iter()
            .map(|t| t.map(|t| t % n).filter(|&t| !std::mem::replace(&mut used[t], true)))
            .collect();
        let m = Matrix::partial_permutation(n, &image);
        let s = orthonormal_basis(&m, &Tolerances::default()).unwrap();
        let expected: IndexSet = image.iter().flatten().copied().collect();
        prop_assert_eq!(s.coordinate_support(), Some(expected.clone()));
        prop_assert_eq!(s, Subspace::coordinate(n, &expected).unwrap());
    }
}
