//! Small dense complex linear algebra.
//!
//! Everything here is deterministic and sized for desk-scale frames (a handful
//! of rows and columns): cyclic Jacobi for Hermitian eigenproblems, one-sided
//! (Hestenes) Jacobi for singular values and null spaces, and a shifted QR
//! iteration on the Hessenberg form for eigenvalues of general matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const MAX_SWEEPS: usize = 80;
const MAX_QR_ITERS: usize = 100;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `<x, y> = sum_j x_j conj(y_j)`, linear in the first argument.
pub fn inner<'a>(
    x: impl IntoIterator<Item = &'a C64>,
    y: impl IntoIterator<Item = &'a C64>,
) -> C64 {
    x.into_iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm<'a>(x: impl IntoIterator<Item = &'a C64>) -> f64 {
    x.into_iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs(&(m - m.adjoint())) <= tol
}

/// Unitary factor of a 2x2 Jacobi rotation that diagonalizes the Hermitian
/// block `[[app, apq], [conj(apq), aqq]]`, as `[[jpp, jpq], [jqp, jqq]]`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> [C64; 4] {
    let b = apq.norm();
    let phase = if b > 0.0 { apq / b } else { C64::new(1.0, 0.0) };
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    let ph = phase.conj();
    [
        C64::new(cs, 0.0),
        C64::new(sn, 0.0),
        ph * (-sn),
        ph * cs,
    ]
}

/// `M[:, p], M[:, q] <- M[:, p] jpp + M[:, q] jqp, M[:, p] jpq + M[:, q] jqq`.
fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, j: &[C64; 4]) {
    for r in 0..m.nrows() {
        let mp = m[(r, p)];
        let mq = m[(r, q)];
        m[(r, p)] = mp * j[0] + mq * j[2];
        m[(r, q)] = mp * j[1] + mq * j[3];
    }
}

/// Left multiplication by the adjoint of the rotation.
fn rotate_rows_adjoint(m: &mut CMatrix, p: usize, q: usize, j: &[C64; 4]) {
    for col in 0..m.ncols() {
        let mp = m[(p, col)];
        let mq = m[(q, col)];
        m[(p, col)] = j[0].conj() * mp + j[2].conj() * mq;
        m[(q, col)] = j[1].conj() * mp + j[3].conj() * mq;
    }
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

/// Cyclic Jacobi eigen-decomposition of a Hermitian matrix.
///
/// Only the Hermitian part `(A + A^*)/2` is used.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    assert!(a.is_square(), "hermitian_eigen needs a square matrix");
    let n = a.nrows();
    let mut m = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let mut v = CMatrix::identity(n, n);
    let scale = max_abs(&m).max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= f64::EPSILON * 1e-2 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let j = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, apq);
                rotate_columns(&mut m, p, q, &j);
                rotate_rows_adjoint(&mut m, p, q, &j);
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
                rotate_columns(&mut v, p, q, &j);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &k| m[(i, i)].re.total_cmp(&m[(k, k)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| v[(r, order[col])]);
    HermitianEigen { values, vectors }
}

#[derive(Debug, Clone)]
pub struct Svd {
    /// Nonincreasing, one per column of the input.
    pub singular_values: Vec<f64>,
    /// Right singular vectors, column `k` paired with `singular_values[k]`.
    pub v: CMatrix,
}

/// One-sided Jacobi SVD. Works for any shape; a wide `m x N` input yields `N`
/// singular values of which at most `m` are nonzero.
pub fn svd(a: &CMatrix) -> Svd {
    let cols = a.ncols();
    let mut b = a.clone();
    let mut v = CMatrix::identity(cols, cols);
    let total: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    let negligible = total * f64::EPSILON * f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::new(0.0, 0.0));
                for r in 0..b.nrows() {
                    let bp = b[(r, p)];
                    let bq = b[(r, q)];
                    alpha += bp.norm_sqr();
                    beta += bq.norm_sqr();
                    gamma += bp.conj() * bq;
                }
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let j = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut b, p, q, &j);
                rotate_columns(&mut v, p, q, &j);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..cols).map(|k| norm(b.column(k).iter())).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &k| norms[k].total_cmp(&norms[i]).then(i.cmp(&k)));
    Svd {
        singular_values: order.iter().map(|&k| norms[k]).collect(),
        v: CMatrix::from_fn(cols, cols, |r, col| v[(r, order[col])]),
    }
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    svd(a).singular_values.first().copied().unwrap_or(0.0)
}

/// `max(rows, cols) * sigma_max * rel`.
pub fn rank_threshold(a: &CMatrix, sigma_max: f64, rel: f64) -> f64 {
    a.nrows().max(a.ncols()) as f64 * sigma_max * rel
}

pub fn rank(a: &CMatrix, rel: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let s = svd(a).singular_values;
    let thr = rank_threshold(a, s[0], rel);
    s.iter().filter(|&&x| x > thr).count()
}

/// Orthonormal basis (as columns) of `{x : A x = 0}` together with the
/// numerical rank of `A`.
pub fn null_space(a: &CMatrix, rel: f64) -> (usize, CMatrix) {
    let cols = a.ncols();
    let d = svd(a);
    let sigma_max = d.singular_values.first().copied().unwrap_or(0.0);
    let thr = rank_threshold(a, sigma_max, rel);
    let r = d.singular_values.iter().filter(|&&x| x > thr).count();
    let basis = d.v.columns(r, cols - r).into_owned();
    (r, basis)
}

/// Complex Givens pair `(c, s)` with `[[c, s], [-conj(s), c]] [a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

/// Unitary reduction to upper Hessenberg form by Householder reflections.
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let xnorm = norm(h.view((k + 1, k), (n - k - 1, 1)).iter());
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = (k + 1..n).map(|r| h[(r, k)]).collect();
        v[0] -= alpha;
        let vn = norm(v.iter());
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // H <- (I - 2 v v^*) H (I - 2 v v^*)
        for col in 0..n {
            let dot: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, col)]).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, col)] -= *vi * dot * 2.0;
            }
        }
        for row in 0..n {
            let dot: C64 = v.iter().enumerate().map(|(i, vi)| h[(row, k + 1 + i)] * vi).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(row, k + 1 + i)] -= dot * vi.conj() * 2.0;
            }
        }
        for r in (k + 2)..n {
            h[(r, k)] = C64::new(0.0, 0.0);
        }
    }
    h
}

/// Eigenvalue of the trailing 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, cc: C64, d: C64) -> C64 {
    let tr = a + d;
    let det = a * d - b * cc;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let half = tr * 0.5;
    let l1 = half + disc;
    let l2 = half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a general square complex matrix (Hessenberg reduction
/// followed by Wilkinson-shifted QR steps with deflation).
pub fn eigenvalues(a: &CMatrix) -> Vec<C64> {
    assert!(a.is_square(), "eigenvalues needs a square matrix");
    let n = a.nrows();
    let mut h = hessenberg(a);
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let scale = max_abs(&h);
    let mut hi = n - 1;
    let mut iters = 0usize;

    loop {
        if hi == 0 {
            out.push(h[(0, 0)]);
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let reference = if diag > 0.0 { diag } else { scale };
            if sub <= f64::EPSILON * reference {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out.push(h[(hi, hi)]);
            hi -= 1;
            iters = 0;
            continue;
        }

        iters += 1;
        let mu = if iters.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm() * 0.75, 0.0)
        } else if iters > MAX_QR_ITERS * n {
            // give up on this block and read the diagonal
            for k in (lo..=hi).rev() {
                out.push(h[(k, k)]);
            }
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            iters = 0;
            continue;
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            for col in k..=hi {
                let x = h[(k, col)];
                let y = h[(k + 1, col)];
                h[(k, col)] = x * cs + sn * y;
                h[(k + 1, col)] = -sn.conj() * x + y * cs;
            }
            rots.push((cs, sn));
        }
        for (offset, (cs, sn)) in rots.into_iter().enumerate() {
            let k = lo + offset;
            let top = (k + 2).min(hi);
            for row in lo..=top {
                let x = h[(row, k)];
                let y = h[(row, k + 1)];
                h[(row, k)] = x * cs + y * sn.conj();
                h[(row, k + 1)] = -x * sn + y * cs;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    out.reverse();
    out
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &CMatrix) -> f64 {
    eigenvalues(a).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn m(rows: usize, cols: usize, data: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_row_iterator(rows, cols, data.iter().map(|&(r, i)| c(r, i)))
    }

    fn sample(rows: usize, cols: usize, seed: u64) -> CMatrix {
        // small deterministic LCG, enough for kernel tests
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMatrix::from_fn(rows, cols, |_, _| c(next(), next()))
    }

    #[test]
    fn hermitian_eigen_matches_nalgebra() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 5);
            let a = sample(n, n, seed);
            let h = &a + a.adjoint();
            let ours = hermitian_eigen(&h);
            let mut theirs: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (x, y) in ours.values.iter().zip(&theirs) {
                assert_relative_eq!(x, y, epsilon = 1e-11, max_relative = 1e-11);
            }
            // A V = V diag(values)
            let lam = CMatrix::from_diagonal(&CVector::from_iterator(n, ours.values.iter().map(|&x| c(x, 0.0))));
            let resid = &h * &ours.vectors - &ours.vectors * lam;
            assert!(max_abs(&resid) < 1e-11);
        }
    }

    #[test]
    fn svd_matches_nalgebra_on_wide_and_tall() {
        for seed in 0..20 {
            let rows = 1 + (seed as usize % 4);
            let cols = 1 + ((seed as usize * 7) % 6);
            let a = sample(rows, cols, seed + 100);
            let ours = svd(&a);
            let mut theirs: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
            theirs.sort_by(|x, y| y.total_cmp(x));
            for (k, y) in theirs.iter().enumerate() {
                assert_relative_eq!(ours.singular_values[k], *y, epsilon = 1e-12, max_relative = 1e-11);
            }
            for x in &ours.singular_values[theirs.len()..] {
                assert!(*x < 1e-12);
            }
        }
    }

    #[test]
    fn operator_norm_examples() {
        assert_relative_eq!(operator_norm(&CMatrix::identity(3, 3)), 1.0, epsilon = 1e-15);
        let nil = m(2, 2, &[(0.0, 0.0), (2.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert_relative_eq!(operator_norm(&nil), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn spectral_radius_examples() {
        assert_relative_eq!(spectral_radius(&CMatrix::identity(3, 3)), 1.0, epsilon = 1e-14);
        let nil = m(2, 2, &[(0.0, 0.0), (2.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(spectral_radius(&nil) < 1e-14);
        // 90 degree rotation has eigenvalues +-i
        let rot = m(2, 2, &[(0.0, 0.0), (-1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        assert_relative_eq!(spectral_radius(&rot), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigenvalues_match_schur_oracle() {
        for seed in 0..30 {
            let n = 1 + (seed as usize % 6);
            let a = sample(n, n, seed + 500);
            let mut ours: Vec<C64> = eigenvalues(&a);
            let mut theirs: Vec<C64> = a
                .clone()
                .schur()
                .eigenvalues()
                .expect("schur eigenvalues")
                .iter()
                .copied()
                .collect();
            let key = |z: &C64| (z.re * 1e6).round() as i64 * 1_000_000_000 + (z.im * 1e6).round() as i64;
            ours.sort_by_key(key);
            theirs.sort_by_key(key);
            for (x, y) in ours.iter().zip(&theirs) {
                assert!((x - y).norm() < 1e-9, "seed {seed}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn null_space_of_split_axis_synthesis() {
        let a = m(2, 3, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.5, 0.0), (0.5, 0.0)]);
        let (r, k) = null_space(&a, 1e-12);
        assert_eq!(r, 2);
        assert_eq!(k.ncols(), 1);
        assert!(max_abs(&(&a * &k)) < 1e-14);
        // proportional to (0, 1, -1)
        assert!(k[(0, 0)].norm() < 1e-14);
        assert_relative_eq!((k[(1, 0)] + k[(2, 0)]).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rank_detects_dependence() {
        let a = m(2, 2, &[(1.0, 0.0), (2.0, 0.0), (2.0, 0.0), (4.0, 0.0)]);
        assert_eq!(rank(&a, 1e-12), 1);
        assert_eq!(rank(&CMatrix::identity(3, 3), 1e-12), 3);
    }
}
