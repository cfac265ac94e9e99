use super::matrix::{dot, norm_sqr, Matrix, C64, ONE, ZERO};
use super::svd::{jacobi_svd, spectral_norm};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;

/// Numerical thresholds used by every rank and residual decision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Singular values below `rank_rel * sigma_max` count as zero.
    pub rank_rel: f64,
    /// Absolute bound for residual norms to count as a pass.
    pub resid_abs: f64,
    /// Principal-angle cosine above which a direction is shared.
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: 1e-10,
            resid_abs: 1e-10,
            angle: 1.0 - 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel", self.rank_rel),
            ("resid_abs", self.resid_abs),
            ("angle", self.angle),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidInput(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Subspace of `C^ambient` carried by an orthonormal column basis.
///
/// Bases made only of standard unit vectors are stored sorted by coordinate
/// with unit entries, so coordinate subspaces have a single canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

const ORTHONORMAL_TOL: f64 = 1e-12;

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Span of the standard unit vectors listed in `coords`.
    pub fn coordinate(ambient: usize, coords: &IndexSet) -> Result<Self> {
        if coords.max().is_some_and(|m| m >= ambient) {
            return Err(Error::InvalidRegion(format!(
                "coordinate set {coords} exceeds ambient dimension {ambient}"
            )));
        }
        let image: Vec<Option<usize>> = coords.iter().map(Some).collect();
        Ok(Subspace {
            ambient,
            basis: Matrix::partial_permutation(ambient, &image),
        })
    }

    /// Wraps a basis that is already orthonormal to within 1e-12 entrywise.
    pub fn from_orthonormal(basis: Matrix) -> Result<Self> {
        if !basis.is_finite() {
            return Err(Error::InvalidInput("non-finite basis entries".into()));
        }
        if basis.cols() > basis.rows() {
            return Err(Error::InvalidInput("more basis vectors than ambient dimension".into()));
        }
        let gram = &basis.adjoint() * &basis;
        let defect = (&gram - &Matrix::identity(basis.cols())).max_abs();
        if defect > ORTHONORMAL_TOL {
            return Err(Error::InvalidInput(format!(
                "basis is not orthonormal (gram defect {defect:e})"
            )));
        }
        Ok(Subspace {
            ambient: basis.rows(),
            basis: canonicalize(basis),
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Orthogonal projector `Q Q*`.
    pub fn projector(&self) -> Matrix {
        &self.basis * &self.basis.adjoint()
    }

    /// Coordinates of this subspace when it is spanned by standard unit vectors.
    pub fn coordinate_support(&self) -> Option<IndexSet> {
        let mut coords = Vec::with_capacity(self.dim());
        for col in self.basis.columns() {
            let mut hit = None;
            for (i, &z) in col.iter().enumerate() {
                if z == ZERO {
                    continue;
                }
                if hit.is_some() || z != ONE {
                    return None;
                }
                hit = Some(i);
            }
            coords.push(hit?);
        }
        Some(IndexSet::new(coords))
    }

    /// Same subspace re-expressed inside a larger space through an isometry
    /// `embedding` (ambient x self.ambient).
    pub fn embed(&self, embedding: &Matrix) -> Result<Subspace> {
        if embedding.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "embedding has {} columns, subspace lives in C^{}",
                embedding.cols(),
                self.ambient
            )));
        }
        Subspace::from_orthonormal(embedding.try_mul(&self.basis)?)
    }

    /// Orthogonal direct sum of subspaces living in independent ambient blocks.
    pub fn direct_sum(parts: &[&Subspace]) -> Subspace {
        let bases: Vec<&Matrix> = parts.iter().map(|p| &p.basis).collect();
        let basis = Matrix::block_diag(&bases);
        Subspace {
            ambient: basis.rows(),
            basis: canonicalize(basis),
        }
    }
}

/// Replaces bases consisting of standard unit vectors (any unimodular phase)
/// by the sorted exact unit vectors; other bases pass through unchanged.
fn canonicalize(basis: Matrix) -> Matrix {
    match unit_vector_coords(&basis) {
        Some(mut coords) => {
            coords.sort_unstable();
            let image: Vec<Option<usize>> = coords.into_iter().map(Some).collect();
            Matrix::partial_permutation(basis.rows(), &image)
        }
        None => basis,
    }
}

fn unit_vector_coords(basis: &Matrix) -> Option<Vec<usize>> {
    let mut coords = Vec::with_capacity(basis.cols());
    for col in basis.columns() {
        let mut hit = None;
        for (i, &z) in col.iter().enumerate() {
            if z == ZERO {
                continue;
            }
            if hit.is_some() || (z.norm() - 1.0).abs() > 4.0 * f64::EPSILON {
                return None;
            }
            hit = Some(i);
        }
        coords.push(hit?);
    }
    Some(coords)
}

/// Gram–Schmidt with column pivoting (largest remaining norm first, ties to
/// the lowest index) and a second orthogonalisation pass. Stops after
/// `max_vectors` vectors or when every remaining column is below `floor`.
fn pivoted_gram_schmidt(
    columns: &mut [Vec<C64>],
    prior: &[Vec<C64>],
    floor: f64,
    max_vectors: usize,
) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    let mut alive: Vec<bool> = vec![true; columns.len()];
    while out.len() < max_vectors {
        let mut best: Option<(usize, f64)> = None;
        for (j, col) in columns.iter().enumerate() {
            if !alive[j] {
                continue;
            }
            let n2 = norm_sqr(col);
            if best.is_none_or(|(_, b)| n2 > b) {
                best = Some((j, n2));
            }
        }
        let Some((j, n2)) = best else { break };
        if n2.sqrt() <= floor {
            break;
        }
        alive[j] = false;
        let mut v = columns[j].clone();
        for _ in 0..2 {
            for q in prior.iter().chain(out.iter()) {
                let c = dot(q, &v);
                if c != ZERO {
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
            }
        }
        let nv = norm_sqr(&v).sqrt();
        if nv <= floor {
            continue;
        }
        for vi in v.iter_mut() {
            *vi /= nv;
        }
        for (k, col) in columns.iter_mut().enumerate() {
            if !alive[k] {
                continue;
            }
            let c = dot(&v, col);
            if c != ZERO {
                for (ci, qi) in col.iter_mut().zip(&v) {
                    *ci -= c * qi;
                }
            }
        }
        out.push(v);
    }
    out
}

/// Orthonormal basis of the column space of `m`.
///
/// The rank is the number of singular values at or above
/// `tol.rank_rel * sigma_max`. The basis comes from pivoted Gram–Schmidt,
/// which returns exact unit vectors for 0/1 inputs; when the numerical rank
/// is smaller than the Gram–Schmidt count the dominant singular subspace is
/// taken instead.
pub fn orthonormal_basis(m: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("non-finite matrix entries".into()));
    }
    let rows = m.rows();
    let max_norm = m
        .columns()
        .map(|c| norm_sqr(c).sqrt())
        .fold(0.0_f64, f64::max);
    if max_norm == 0.0 {
        return Ok(Subspace::zero(rows));
    }
    let floor = max_norm * f64::EPSILON * (rows.max(1) as f64);
    let mut columns: Vec<Vec<C64>> = m.columns().map(|c| c.to_vec()).collect();
    let q = pivoted_gram_schmidt(&mut columns, &[], floor, rows);
    let qmat = Matrix::from_columns(rows, &q);

    // Singular values of m equal those of R = Q* m.
    let r = qmat.adjoint().try_mul(m)?;
    let svd = jacobi_svd(&r.adjoint());
    let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
    let rank = svd
        .sigma
        .iter()
        .filter(|&&s| s >= tol.rank_rel * sigma_max && s > 0.0)
        .count();
    if rank == q.len() {
        return Ok(Subspace {
            ambient: rows,
            basis: canonicalize(qmat),
        });
    }
    // svd.v holds the left singular vectors of R (right ones of R*).
    let lead = svd.v.select_columns(&(0..rank).collect::<Vec<_>>());
    let basis = qmat.try_mul(&lead)?;
    Ok(Subspace {
        ambient: rows,
        basis: canonicalize(basis),
    })
}

/// Orthogonal complement in the ambient space.
pub fn complement(s: &Subspace) -> Subspace {
    let n = s.ambient;
    let target = n - s.dim();
    if target == 0 {
        return Subspace::zero(n);
    }
    let prior: Vec<Vec<C64>> = s.basis.columns().map(|c| c.to_vec()).collect();
    let mut columns: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut e = vec![ZERO; n];
            e[i] = ONE;
            for q in &prior {
                let c = q[i].conj();
                if c != ZERO {
                    for (ek, qk) in e.iter_mut().zip(q) {
                        *ek -= c * qk;
                    }
                }
            }
            e
        })
        .collect();
    let q = pivoted_gram_schmidt(&mut columns, &prior, 0.0, target);
    Subspace {
        ambient: n,
        basis: canonicalize(Matrix::from_columns(n, &q)),
    }
}

/// Orthogonal complement of `inner` inside `outer` (`outer ⊖ inner`).
pub fn complement_within(outer: &Subspace, inner: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    check_ambient(outer, inner)?;
    if inner.is_zero() {
        return Ok(outer.clone());
    }
    let projected = &outer.basis - &(&inner.projector() * &outer.basis);
    orthonormal_basis(&projected, tol)
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {} differ",
            a.ambient, b.ambient
        )));
    }
    Ok(())
}

/// Numerical intersection: directions of `s1` whose principal-angle cosine
/// with `s2` is at least `tol.angle`.
///
/// Computed from the eigen-decomposition of `P1 P2 P1` restricted to `s1`,
/// i.e. the singular vectors of `Q1* Q2`.
pub fn intersect(s1: &Subspace, s2: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    check_ambient(s1, s2)?;
    let n = s1.ambient;
    if s1.is_zero() || s2.is_zero() {
        return Ok(Subspace::zero(n));
    }
    let m = s1.basis.adjoint().try_mul(&s2.basis)?;
    let svd = jacobi_svd(&m.adjoint());
    let keep: Vec<usize> = (0..svd.sigma.len())
        .filter(|&j| svd.sigma[j] >= tol.angle)
        .collect();
    if keep.is_empty() {
        return Ok(Subspace::zero(n));
    }
    let dirs = s1.basis.try_mul(&svd.v.select_columns(&keep))?;
    orthonormal_basis(&dirs, tol)
}

/// Orthonormal basis of the numerical null space: right singular vectors
/// whose singular value is below `tol.rank_rel * sigma_max`.
pub fn nullspace(m: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("non-finite matrix entries".into()));
    }
    let n = m.cols();
    if n == 0 {
        return Ok(Subspace::zero(0));
    }
    if m.rows() == 0 || m.is_zero() {
        return Ok(Subspace::full(n));
    }
    let svd = jacobi_svd(m);
    let cutoff = tol.rank_rel * svd.sigma[0];
    let null: Vec<usize> = (0..n).filter(|&j| svd.sigma[j] < cutoff).collect();
    if null.is_empty() {
        return Ok(Subspace::zero(n));
    }
    orthonormal_basis(&svd.v.select_columns(&null), tol)
}

/// Spectral norm of `a - b`; exactly zero when the inputs are bit-identical.
pub fn residual_norm(a: &Matrix, b: &Matrix) -> Result<f64> {
    let d = a.try_sub(b)?;
    Ok(spectral_norm(&d))
}

/// Largest principal angle between two subspaces of equal dimension,
/// computed as `asin ‖(I - P1) Q2‖` for accuracy at small angles.
pub fn max_principal_angle(s1: &Subspace, s2: &Subspace) -> Result<f64> {
    check_ambient(s1, s2)?;
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace dimensions {} and {} differ",
            s1.dim(),
            s2.dim()
        )));
    }
    if s1.is_zero() {
        return Ok(0.0);
    }
    let proj = &s1.basis * &(s1.basis.adjoint().try_mul(&s2.basis)?);
    let resid = &s2.basis - &proj;
    Ok(spectral_norm(&resid).min(1.0).asin())
}

/// Spectral distance between the orthogonal projectors of two subspaces.
pub fn projector_distance(s1: &Subspace, s2: &Subspace) -> Result<f64> {
    check_ambient(s1, s2)?;
    residual_norm(&s1.projector(), &s2.projector())
}

/// `‖Q1* Q2‖`: zero exactly when the subspaces are orthogonal.
pub fn overlap(s1: &Subspace, s2: &Subspace) -> Result<f64> {
    check_ambient(s1, s2)?;
    if s1.is_zero() || s2.is_zero() {
        return Ok(0.0);
    }
    Ok(spectral_norm(&s1.basis.adjoint().try_mul(&s2.basis)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec<C64> {
        let mut v = vec![ZERO; n];
        v[i] = ONE;
        v
    }

    fn span(n: usize, idx: &[usize]) -> Subspace {
        Subspace::coordinate(n, &IndexSet::new(idx.to_vec())).unwrap()
    }

    /// Independent rank oracle: Gaussian elimination with partial pivoting
    /// on a real matrix.
    fn gauss_rank(rows: &[Vec<f64>]) -> usize {
        let mut a: Vec<Vec<f64>> = rows.to_vec();
        let (n, m) = (a.len(), a.first().map_or(0, |r| r.len()));
        let mut rank = 0;
        for c in 0..m {
            let Some(p) = (rank..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else {
                break;
            };
            if a[p][c].abs() < 1e-12 {
                continue;
            }
            a.swap(rank, p);
            for i in 0..n {
                if i != rank {
                    let f = a[i][c] / a[rank][c];
                    for k in 0..m {
                        a[i][k] -= f * a[rank][k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn identity_basis_is_identity() {
        let s = orthonormal_basis(&Matrix::identity(3), &Tolerances::default()).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.basis(), &Matrix::identity(3));
    }

    #[test]
    fn zero_matrix_has_empty_basis() {
        let s = orthonormal_basis(&Matrix::zeros(4, 2), &Tolerances::default()).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.ambient(), 4);
    }

    #[test]
    fn dependent_columns_span_first_two_coordinates() {
        let m = Matrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
        let oracle = gauss_rank(&[vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]]);
        let s = orthonormal_basis(&m, &Tolerances::default()).unwrap();
        assert_eq!(s.dim(), oracle);
        assert_eq!(s, span(3, &[0, 1]));
    }

    #[test]
    fn non_finite_input_rejected() {
        let mut m = Matrix::identity(2);
        m.set(0, 1, C64::new(f64::NAN, 0.0));
        assert!(matches!(
            orthonormal_basis(&m, &Tolerances::default()),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(nullspace(&m, &Tolerances::default()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn intersect_examples() {
        let tol = Tolerances::default();
        let a = span(4, &[0, 1]);
        assert_eq!(intersect(&a, &a, &tol).unwrap(), a);
        let b = span(4, &[1, 2]);
        assert_eq!(intersect(&a, &b, &tol).unwrap(), span(4, &[1]));
        let c = intersect(&span(4, &[0]), &span(4, &[1]), &tol).unwrap();
        assert_eq!(c.dim(), 0);
        assert!(matches!(
            intersect(&a, &span(3, &[0]), &tol),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn intersect_matches_projector_product_oracle() {
        // Oracle: eigenvectors of P1 P2 P1 with eigenvalue 1 via the fixed
        // points of repeated application, tested on a tilted plane pair.
        let tol = Tolerances::default();
        let r = 1.0 / 2f64.sqrt();
        let s1 = Subspace::from_orthonormal(Matrix::from_columns(
            3,
            &[e(3, 2), vec![C64::new(r, 0.0), C64::new(r, 0.0), ZERO]],
        ))
        .unwrap();
        let s2 = span(3, &[0, 2]);
        let got = intersect(&s1, &s2, &tol).unwrap();
        assert_eq!(got, span(3, &[2]));
        let p1 = s1.projector();
        let p2 = s2.projector();
        let ppp = &(&p1 * &p2) * &p1;
        let fixed = &ppp * got.basis();
        assert!(residual_norm(&fixed, got.basis()).unwrap() < 1e-14);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&span(2, &[0])), span(2, &[1]));
        assert_eq!(complement(&Subspace::full(3)).dim(), 0);
        let r = 1.0 / 2f64.sqrt();
        let diag = Subspace::from_orthonormal(Matrix::from_real_rows(&[&[r], &[r]])).unwrap();
        let c = complement(&diag);
        assert_eq!(c.dim(), 1);
        // Gram–Schmidt oracle: (1,-1)/sqrt(2) up to phase.
        let want = [r, -r];
        let col = c.basis().column(0);
        let phase = col[0] / C64::new(want[0], 0.0);
        for (z, w) in col.iter().zip(want) {
            assert!((z - phase * w).norm() < 1e-15);
        }
    }

    #[test]
    fn nullspace_examples() {
        let tol = Tolerances::default();
        assert_eq!(nullspace(&Matrix::zeros(2, 2), &tol).unwrap().dim(), 2);
        assert_eq!(nullspace(&Matrix::identity(3), &tol).unwrap().dim(), 0);
        let m = Matrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let ns = nullspace(&m, &tol).unwrap();
        assert_eq!(ns.dim(), 1);
        // Eigen oracle: the 0-eigenvector of [[1,1],[1,1]] is (1,-1)/sqrt(2).
        let col = ns.basis().column(0);
        assert!((col[0] + col[1]).norm() < 1e-15);
        assert!((col[0].norm() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn residual_examples() {
        let i2 = Matrix::identity(2);
        assert_eq!(residual_norm(&i2, &i2).unwrap(), 0.0);
        assert_eq!(residual_norm(&i2, &Matrix::zeros(2, 2)).unwrap(), 1.0);
        let a = Matrix::diag_real(&[3.0, 1.0]);
        assert_eq!(residual_norm(&a, &i2).unwrap(), 2.0);
        assert!(matches!(
            residual_norm(&i2, &Matrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn complement_within_coordinates_is_exact() {
        let tol = Tolerances::default();
        let outer = span(6, &[0, 1, 2, 4]);
        let inner = span(6, &[1, 4]);
        assert_eq!(complement_within(&outer, &inner, &tol).unwrap(), span(6, &[0, 2]));
    }

    #[test]
    fn principal_angle_of_tilted_lines() {
        let th: f64 = 1e-3;
        let a = Subspace::from_orthonormal(Matrix::from_real_rows(&[&[1.0], &[0.0]])).unwrap();
        let b =
            Subspace::from_orthonormal(Matrix::from_real_rows(&[&[th.cos()], &[th.sin()]])).unwrap();
        assert!((max_principal_angle(&a, &b).unwrap() - th).abs() < 1e-15);
    }
}
