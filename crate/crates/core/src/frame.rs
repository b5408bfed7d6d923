//! Frames, frame operators, canonical duals and the affine space of all duals.
//!
//! A frame is stored through its `n x N` synthesis matrix whose `i`-th column
//! is `f_i`. The inner product is linear in the first argument.

use crate::error::{FrameError, Result};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    synthesis: CMatrix,
}

impl Frame {
    /// Builds a family from its vectors. All vectors must share one length.
    /// Spanning is not checked here; operations that need it report
    /// [`FrameError::RankDeficient`].
    pub fn new(vectors: &[Vec<C64>]) -> Result<Self> {
        let first = vectors.first().ok_or(FrameError::Empty)?;
        let n = first.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(FrameError::DimensionMismatch(format!(
                "vector {} has length {}, expected {n}",
                i + 1,
                v.len()
            )));
        }
        let synthesis = CMatrix::from_fn(n, vectors.len(), |r, col| vectors[col][r]);
        Ok(Self { synthesis })
    }

    pub fn from_real(vectors: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::new(&complex)
    }

    pub fn from_synthesis(synthesis: CMatrix) -> Result<Self> {
        if synthesis.nrows() == 0 || synthesis.ncols() == 0 {
            return Err(FrameError::Empty);
        }
        Ok(Self { synthesis })
    }

    /// Ambient dimension `n`.
    pub fn dimension(&self) -> usize {
        self.synthesis.nrows()
    }

    /// Number of vectors `N`.
    pub fn len(&self) -> usize {
        self.synthesis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.synthesis.ncols() == 0
    }

    pub fn synthesis(&self) -> &CMatrix {
        &self.synthesis
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.synthesis.column(i).into_owned()
    }

    pub fn vectors(&self) -> Vec<Vec<C64>> {
        (0..self.len())
            .map(|i| self.synthesis.column(i).iter().copied().collect())
            .collect()
    }

    pub fn norm_of(&self, i: usize) -> f64 {
        linalg::norm(self.synthesis.column(i).iter())
    }

    /// `<self_i, other_i>`.
    pub fn inner_at(&self, other: &Frame, i: usize) -> C64 {
        linalg::inner(self.synthesis.column(i).iter(), other.synthesis.column(i).iter())
    }

    pub fn scaled(&self, s: C64) -> Frame {
        Frame { synthesis: &self.synthesis * s }
    }

    /// Entrywise convex/linear combination `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Frame, b: f64) -> Result<Frame> {
        check_same_shape(self, other)?;
        Ok(Frame {
            synthesis: &self.synthesis * C64::new(a, 0.0) + &other.synthesis * C64::new(b, 0.0),
        })
    }

    /// Largest entrywise deviation between two families of the same shape.
    pub fn max_entry_diff(&self, other: &Frame) -> Result<f64> {
        check_same_shape(self, other)?;
        Ok(linalg::max_abs(&(&self.synthesis - &other.synthesis)))
    }
}

fn check_same_shape(f: &Frame, g: &Frame) -> Result<()> {
    if f.dimension() != g.dimension() || f.len() != g.len() {
        return Err(FrameError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            f.dimension(),
            f.len(),
            g.dimension(),
            g.len()
        )));
    }
    Ok(())
}

/// `S_F = sum_i f_i f_i^*`, Hermitian positive definite for a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOperator {
    pub matrix: CMatrix,
}

impl FrameOperator {
    /// Solves `S x = b` through the Cholesky factor.
    pub fn solve(&self, rhs: &CMatrix) -> CMatrix {
        self.matrix
            .clone()
            .cholesky()
            .expect("frame operator is positive definite")
            .solve(rhs)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.matrix).values
    }
}

fn ensure_spanning(f: &Frame, tol: &Tolerances) -> Result<()> {
    let s = linalg::svd(f.synthesis()).singular_values;
    let sigma_max = s[0];
    let thr = linalg::rank_threshold(f.synthesis(), sigma_max, tol.rank_rel);
    // the n-th singular value decides spanning; fewer vectors than n cannot span
    let sigma_min = if f.len() >= f.dimension() { s[f.dimension() - 1] } else { 0.0 };
    if sigma_max == 0.0 || sigma_min <= thr {
        return Err(FrameError::RankDeficient { sigma_min, threshold: thr });
    }
    Ok(())
}

pub fn frame_operator(f: &Frame) -> Result<FrameOperator> {
    ensure_spanning(f, &Tolerances::default())?;
    let t = f.synthesis();
    let mut matrix = t * t.adjoint();
    // exact Hermitian symmetry
    let n = matrix.nrows();
    for r in 0..n {
        matrix[(r, r)].im = 0.0;
        for col in (r + 1)..n {
            matrix[(col, r)] = matrix[(r, col)].conj();
        }
    }
    Ok(FrameOperator { matrix })
}

/// Optimal frame bounds `(A, B)`: extreme eigenvalues of the frame operator.
pub fn frame_bounds(f: &Frame) -> Result<(f64, f64)> {
    let values = frame_operator(f)?.eigenvalues();
    Ok((values[0], values[values.len() - 1]))
}

/// `true` when `B - A <= rel * B`.
pub fn is_tight(f: &Frame, rel: f64) -> Result<bool> {
    let (a, b) = frame_bounds(f)?;
    Ok(b - a <= rel * b)
}

/// `{S_F^{-1} f_i}` computed by linear solves against the frame operator.
pub fn canonical_dual(f: &Frame) -> Result<Frame> {
    let s = frame_operator(f)?;
    Frame::from_synthesis(s.solve(f.synthesis()))
}

/// `T_G T_F^* - I` in max-norm, plus the trace residual `|sum <g_i, f_i> - n|`.
pub fn duality_residual(f: &Frame, g: &Frame) -> Result<(f64, f64)> {
    check_same_shape(f, g)?;
    let n = f.dimension();
    let prod = g.synthesis() * f.synthesis().adjoint();
    let dev = linalg::max_abs(&(&prod - CMatrix::identity(n, n)));
    let trace: C64 = (0..f.len()).map(|i| g.inner_at(f, i)).sum();
    Ok((dev, (trace - C64::new(n as f64, 0.0)).norm()))
}

/// Whether `G` reconstructs through `F`: `f = sum_i <f, f_i> g_i` for all `f`.
pub fn is_dual(f: &Frame, g: &Frame, tol: f64) -> Result<bool> {
    let (dev, trace) = duality_residual(f, g)?;
    Ok(dev <= tol && trace <= tol * f.dimension() as f64)
}

/// Affine coordinates for the set of all duals of a frame.
///
/// Every dual is `base + C K^*` where `K` (`N x (N - r)`) holds an orthonormal
/// basis of the null space of the synthesis matrix and `C` is an arbitrary
/// `n x (N - r)` complex matrix. Coefficient `k = j * (N - r) + m` multiplies
/// the perturbation `e_j k_m^*`.
#[derive(Debug, Clone)]
pub struct DualParameterization {
    pub base: Frame,
    pub null_basis: CMatrix,
    pub rank: usize,
}

impl DualParameterization {
    /// Number of complex coefficients `n (N - rank)`.
    pub fn dim(&self) -> usize {
        self.base.dimension() * self.null_basis.ncols()
    }

    pub fn null_dim(&self) -> usize {
        self.null_basis.ncols()
    }

    /// The `k`-th perturbation `U^(k)` as an `n x N` family.
    pub fn basis_element(&self, k: usize) -> Frame {
        let n = self.base.dimension();
        let nd = self.null_dim();
        assert!(k < n * nd, "basis index out of range");
        let (j, m) = (k / nd, k % nd);
        let kcol = self.null_basis.column(m);
        let t = CMatrix::from_fn(n, self.base.len(), |r, col| {
            if r == j {
                kcol[col].conj()
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Frame { synthesis: t }
    }

    /// Coefficient matrix `C` from a flat coefficient list.
    pub fn coefficient_matrix(&self, coeffs: &[C64]) -> Result<CMatrix> {
        if coeffs.len() != self.dim() {
            return Err(FrameError::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.dim(),
                coeffs.len()
            )));
        }
        Ok(CMatrix::from_row_slice(self.base.dimension(), self.null_dim(), coeffs))
    }

    /// Flat coefficients of `G - base` projected onto the perturbation span.
    pub fn coordinates_of(&self, g: &Frame) -> Result<Vec<C64>> {
        check_same_shape(&self.base, g)?;
        let cm = (g.synthesis() - self.base.synthesis()) * &self.null_basis;
        Ok(row_major(&cm))
    }
}

fn row_major(m: &CMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for col in 0..m.ncols() {
            out.push(m[(r, col)]);
        }
    }
    out
}

pub fn dual_space(f: &Frame) -> Result<DualParameterization> {
    let base = canonical_dual(f)?;
    let (rank, null_basis) = linalg::null_space(f.synthesis(), Tolerances::default().rank_rel);
    Ok(DualParameterization { base, null_basis, rank })
}

/// `base + sum_k c_k U^(k)`.
pub fn dual_from_params(p: &DualParameterization, coeffs: &[C64]) -> Result<Frame> {
    let cm = p.coefficient_matrix(coeffs)?;
    Ok(Frame {
        synthesis: p.base.synthesis() + cm * p.null_basis.adjoint(),
    })
}

/// `{U f_i}` for a unitary `U`.
pub fn apply_unitary(u: &CMatrix, f: &Frame) -> Result<Frame> {
    let n = f.dimension();
    if u.nrows() != n || u.ncols() != n {
        return Err(FrameError::DimensionMismatch(format!(
            "unitary is {}x{}, frame dimension {n}",
            u.nrows(),
            u.ncols()
        )));
    }
    let dev = linalg::max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)));
    if dev > Tolerances::default().sym {
        return Err(FrameError::NotUnitary(dev));
    }
    Ok(Frame { synthesis: u * f.synthesis() })
}
