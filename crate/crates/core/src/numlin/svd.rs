//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! Column pairs are visited in a fixed cyclic order. A pair whose inner
//! product is already exactly zero is never rotated, so matrices whose
//! columns have disjoint supports (partial permutations and their
//! compressions) come out of the iteration untouched and bit-exact.

use super::matrix::{dot, norm_sqr, Matrix, C64};

const MAX_SWEEPS: usize = 80;

/// Result of [`jacobi_svd`]: the columns of `a · v` are mutually orthogonal
/// with norms `sigma`. Columns are sorted by decreasing singular value
/// (stable, so ties keep their original order).
pub(crate) struct JacobiSvd {
    pub v: Matrix,
    pub sigma: Vec<f64>,
}

pub(crate) fn jacobi_svd(a: &Matrix) -> JacobiSvd {
    let (rows, n) = a.shape();
    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    let tol = f64::EPSILON * (rows.max(1) as f64);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(w.column(p));
                let beta = norm_sqr(w.column(q));
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(w.column(p), w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| norm_sqr(w.column(j)).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite singular values"));
    JacobiSvd {
        v: v.select_columns(&order),
        sigma: order.iter().map(|&j| norms[j]).collect(),
    }
}

/// Applies the plane rotation that orthogonalises columns `p` and `q`:
/// with `b = conj(phase) · x_q`,
/// `x_p ← c·x_p − s·b`, `x_q ← phase · (s·x_p + c·b)`.
fn rotate(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let rows = m.rows();
    let pc = phase.conj();
    for i in 0..rows {
        let xp = m.get(i, p);
        let b = pc * m.get(i, q);
        m.set(i, p, xp * c - b * s);
        m.set(i, q, phase * (xp * s + b * c));
    }
}

/// Singular values in decreasing order; the shorter side is used as the
/// column dimension.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    if a.cols() <= a.rows() {
        jacobi_svd(a).sigma
    } else {
        jacobi_svd(&a.adjoint()).sigma
    }
}

/// Largest singular value; exactly zero for an all-zero matrix.
pub fn spectral_norm(a: &Matrix) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    singular_values(a).first().copied().unwrap_or(0.0)
}
