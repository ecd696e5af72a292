//! Matrix cross-checks, independent of the symbolic rewrite engine.
//!
//! Two representations back the checks:
//!
//! * an exact rational one over `Complex<BigRational>` for algebra-level
//!   identities (non-unitary normalization, every entry rational);
//! * the usual unitary one over `Complex64` for spectra, with a hand-rolled
//!   cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Oscillator truncation at dimension N corrupts only the top of the ladder:
//! entries (i, j) with i, j < N − L are exact for words moving at most L
//! rungs, which is what the truncation guard protects.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Algebra, Generator, OperatorExpr};
use crate::engine::{PerturbationProblem, SeriesResult};
use crate::error::Error;
use crate::param::{pid, ParamValues, HBAR};
use crate::scalar::Coeff;

/// Which finite matrix representation to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisSpec {
    /// Number basis |0⟩..|dim−1⟩, truncated.
    Hw { dim: usize },
    /// Spin-l multiplet |l,l⟩..|l,−l⟩, exact.
    Su2 { l: u32 },
}

impl BasisSpec {
    pub fn algebra(&self) -> Algebra {
        match self {
            BasisSpec::Hw { .. } => Algebra::Hw,
            BasisSpec::Su2 { .. } => Algebra::Su2,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            BasisSpec::Hw { dim } => dim,
            BasisSpec::Su2 { l } => 2 * l as usize + 1,
        }
    }
}

/// Oscillator truncation guard: at dimension N, trust expressions whose
/// largest ladder power is at most N/4.
pub fn hw_truncation_guard(max_power: u32, dim: usize) -> bool {
    (max_power as usize) * 4 <= dim
}

// ---------------------------------------------------------------------------
// Floating-point (unitary) representation
// ---------------------------------------------------------------------------

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Unitary-normalized generator matrix.
fn generator_matrix(gen: Generator, basis: &BasisSpec, hbar: f64) -> DMatrix<Complex64> {
    let dim = basis.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    match (*basis, gen) {
        (BasisSpec::Hw { dim }, Generator::Create) => {
            for n in 0..dim.saturating_sub(1) {
                m[(n + 1, n)] = c64(((n + 1) as f64).sqrt());
            }
        }
        (BasisSpec::Hw { dim }, Generator::Annihilate) => {
            for n in 0..dim.saturating_sub(1) {
                m[(n, n + 1)] = c64(((n + 1) as f64).sqrt());
            }
        }
        (BasisSpec::Su2 { l }, gen) => {
            let l = f64::from(l);
            let dim = basis.dim();
            // row/column i holds m = l − i, so the top state comes first
            let mval = |i: usize| l - i as f64;
            match gen {
                Generator::LZero => {
                    for i in 0..dim {
                        m[(i, i)] = c64(hbar * mval(i));
                    }
                }
                Generator::LPlus => {
                    for i in 1..dim {
                        let mm = mval(i);
                        m[(i - 1, i)] = c64(hbar * (l * (l + 1.0) - mm * (mm + 1.0)).sqrt());
                    }
                }
                Generator::LMinus => {
                    for i in 0..dim - 1 {
                        let mm = mval(i);
                        m[(i + 1, i)] = c64(hbar * (l * (l + 1.0) - mm * (mm - 1.0)).sqrt());
                    }
                }
                _ => unreachable!("algebra mismatch caught by caller"),
            }
        }
        _ => unreachable!("algebra mismatch caught by caller"),
    }
    m
}

/// Numeric matrix of an expression in the given basis.
pub fn matrix_rep(
    expr: &OperatorExpr,
    basis: &BasisSpec,
    values: &ParamValues,
) -> Result<DMatrix<Complex64>, Error> {
    if expr.algebra() != basis.algebra() {
        return Err(Error::AlgebraMismatch(expr.algebra(), basis.algebra()));
    }
    let dim = basis.dim();
    let hbar = match basis {
        BasisSpec::Su2 { .. } => values.require(&pid(HBAR))?.re,
        BasisSpec::Hw { .. } => 0.0, // ladder matrix elements carry no ħ here
    };
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    let id = DMatrix::<Complex64>::identity(dim, dim);
    for (mono, scalar) in expr.terms() {
        let coeff = scalar.eval(values)?;
        let mut word_mat = id.clone();
        for gen in mono.word() {
            word_mat *= generator_matrix(gen, basis, hbar);
        }
        out += word_mat * coeff;
    }
    Ok(out)
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermiticity deviation relative to the largest entry.
fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let scale = max_abs(m).max(1e-300);
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev / scale
}

const HERMITICITY_TOL: f64 = 1e-12;
const JACOBI_SWEEP_LIMIT: usize = 100;
const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

/// Eigenvalues and orthonormal eigenvectors of a Hermitian matrix by cyclic
/// Jacobi rotations. Eigenvalues ascend; column k of the returned matrix is
/// the eigenvector for eigenvalue k. Every eigenpair is verified against the
/// input to ‖Av − λv‖ ≤ 1e−10·‖A‖.
pub fn hermitian_eigen(a: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>), Error> {
    let dev = hermiticity_deviation(a);
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitianMatrix(dev));
    }
    let n = a.nrows();
    let mut m = a.clone();
    // Force exact Hermitian symmetry so rotations stay unitary.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * c64(0.5);
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
        m[(i, i)] = c64(m[(i, i)].re);
    }
    let mut vecs = DMatrix::<Complex64>::identity(n, n);
    let norm = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let tol = 1e-14 * norm;
    let mut converged = false;
    for _ in 0..JACOBI_SWEEP_LIMIT {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= tol / (n as f64) {
                    continue;
                }
                // Phase out the off-diagonal entry, then rotate as in the
                // real symmetric case.
                let phase = apq / c64(apq.norm());
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Column update: (col_p, col_q) ← (c·col_p − s̄·col_q, s·col_p + c̄·col_q)
                // with the phase folded into the q side.
                let cs = c64(c);
                let sp = phase * c64(s);
                for i in 0..n {
                    let vip = m[(i, p)];
                    let viq = m[(i, q)];
                    m[(i, p)] = vip * cs - viq * sp.conj();
                    m[(i, q)] = vip * sp + viq * cs;
                }
                for i in 0..n {
                    let vip = m[(p, i)];
                    let viq = m[(q, i)];
                    m[(p, i)] = vip * cs - viq * sp;
                    m[(q, i)] = vip * sp.conj() + viq * cs;
                }
                for i in 0..n {
                    let vip = vecs[(i, p)];
                    let viq = vecs[(i, q)];
                    vecs[(i, p)] = vip * cs - viq * sp.conj();
                    vecs[(i, q)] = vip * sp + viq * cs;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut sorted_vecs = DMatrix::<Complex64>::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        sorted_vecs.set_column(k, &vecs.column(i));
    }
    // Residual validation against the original matrix.
    let a_scale = norm;
    for k in 0..n {
        let v = sorted_vecs.column(k);
        let resid = (a * v) - v * c64(eigenvalues[k]);
        let r = resid.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let bound = EIGEN_RESIDUAL_TOL * a_scale.max(1.0);
        if r > bound {
            return Err(Error::ResidualTooLarge(r, bound));
        }
    }
    Ok((eigenvalues, sorted_vecs))
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<f64>, Error> {
    hermitian_eigen(a).map(|(vals, _)| vals)
}

/// exp(G) for anti-Hermitian G, via the eigendecomposition of the Hermitian
/// matrix iG. The result is unitary to working precision.
pub fn expm_anti_hermitian(g: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, Error> {
    let ig = g.map(|z| Complex64::new(0.0, 1.0) * z);
    let (theta, vecs) = hermitian_eigen(&ig)?;
    let n = g.nrows();
    let mut diag = DMatrix::<Complex64>::zeros(n, n);
    for (k, th) in theta.iter().enumerate() {
        diag[(k, k)] = Complex64::new(0.0, -th).exp();
    }
    Ok(&vecs * diag * vecs.adjoint())
}

/// Scaling report of the similarity check: off-diagonal residuals of the
/// transformed Hamiltonian at several perturbation strengths.
#[derive(Clone, Debug)]
pub struct SimilarityReport {
    pub order: u32,
    pub lambdas: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares slope of ln(residual) against ln(λ); `None` when any
    /// residual sits at the numeric noise floor.
    pub fitted_exponent: Option<f64>,
}

/// Conjugate H(λ) = H⁰_graded + λV by exp(G(λ)) with G(λ) = Σ λⁿ Gₙ and
/// measure the largest off-diagonal element. Central parts of H⁰ are
/// omitted: they commute with everything and cannot contribute off-diagonal
/// weight. For truncated oscillator bases the top quarter of rows/columns is
/// excluded from the measurement.
pub fn similarity_check(
    problem: &PerturbationProblem,
    series: &SeriesResult,
    basis: &BasisSpec,
    values: &ParamValues,
    order: u32,
    lambdas: &[f64],
) -> Result<SimilarityReport, Error> {
    assert!(order >= 1 && order <= series.max_order());
    let v_mat = matrix_rep(problem.v(), basis, values)?;
    let h_graded = matrix_rep(&problem.gap().grading_operator(), basis, values)?;
    let mut g_mats = Vec::new();
    for n in 1..=order {
        let g_n = &series.order(n).expect("order within range").g;
        g_mats.push(matrix_rep(g_n, basis, values)?);
    }
    let dim = basis.dim();
    let guard = match basis {
        BasisSpec::Hw { .. } => dim - dim / 4,
        BasisSpec::Su2 { .. } => dim,
    };
    let mut residuals = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut g = DMatrix::<Complex64>::zeros(dim, dim);
        for (idx, gm) in g_mats.iter().enumerate() {
            let n = (idx + 1) as i32;
            g += gm * c64(lambda.powi(n));
        }
        let u = expm_anti_hermitian(&g)?;
        let h = &h_graded + &v_mat * c64(lambda);
        let transformed = &u * h * u.adjoint();
        let mut r: f64 = 0.0;
        for i in 0..guard {
            for j in 0..guard {
                if i != j {
                    r = r.max(transformed[(i, j)].norm());
                }
            }
        }
        residuals.push(r);
    }
    let fitted_exponent = fit_log_slope(lambdas, &residuals);
    Ok(SimilarityReport {
        order,
        lambdas: lambdas.to_vec(),
        residuals,
        fitted_exponent,
    })
}

const RESIDUAL_NOISE_FLOOR: f64 = 1e-12;

fn fit_log_slope(lambdas: &[f64], residuals: &[f64]) -> Option<f64> {
    if lambdas.len() < 2 || residuals.iter().any(|&r| r < RESIDUAL_NOISE_FLOOR) {
        return None;
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

// ---------------------------------------------------------------------------
// Exact rational (non-unitary) representation
// ---------------------------------------------------------------------------

/// Dense matrix over exact Gaussian rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    dim: usize,
    data: Vec<Coeff>,
}

impl RatMatrix {
    pub fn zeros(dim: usize) -> Self {
        RatMatrix {
            dim,
            data: vec![Coeff::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = RatMatrix::zeros(dim);
        for i in 0..dim {
            *m.at_mut(i, i) = Coeff::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.dim + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Coeff {
        &mut self.data[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = RatMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let bkj = rhs.at(k, j);
                    if bkj.is_zero() {
                        continue;
                    }
                    let prod = aik * bkj;
                    let e = out.at_mut(i, j);
                    *e = e.clone() + prod;
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, rhs: &RatMatrix, factor: &Coeff) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = a.clone() + b * factor;
        }
    }

    /// Equality on the sub-block of indices below `dim − protect`; rows and
    /// columns within `protect` of the truncation edge are ignored.
    pub fn eq_guarded(&self, rhs: &RatMatrix, protect: usize) -> bool {
        assert_eq!(self.dim, rhs.dim);
        let limit = self.dim.saturating_sub(protect);
        for i in 0..limit {
            for j in 0..limit {
                if self.at(i, j) != rhs.at(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

/// Exact generator matrix in a non-unitary basis where every entry is
/// rational: `a†` shifts up with weight 1 and `a` shifts down with weight n;
/// the spin ladder uses the highest-weight normalization L− vₖ = v_{k+1},
/// L+ vₖ = k(2l−k+1) ħ² v_{k−1}, L0 vₖ = (l−k) ħ vₖ.
pub fn rational_generator_matrix(
    gen: Generator,
    basis: &BasisSpec,
    hbar: &BigRational,
) -> RatMatrix {
    let dim = basis.dim();
    let mut m = RatMatrix::zeros(dim);
    let real = |r: BigRational| Coeff::new(r, BigRational::zero());
    let from_int = |k: i64| BigRational::from_integer(k.into());
    match (*basis, gen) {
        (BasisSpec::Hw { .. }, Generator::Create) => {
            for n in 0..dim - 1 {
                *m.at_mut(n + 1, n) = Coeff::one();
            }
        }
        (BasisSpec::Hw { .. }, Generator::Annihilate) => {
            for n in 0..dim - 1 {
                *m.at_mut(n, n + 1) = real(from_int((n + 1) as i64));
            }
        }
        (BasisSpec::Su2 { l }, gen) => {
            let l = i64::from(l);
            match gen {
                Generator::LZero => {
                    for k in 0..dim {
                        *m.at_mut(k, k) = real(from_int(l - k as i64) * hbar);
                    }
                }
                Generator::LMinus => {
                    for k in 0..dim - 1 {
                        *m.at_mut(k + 1, k) = Coeff::one();
                    }
                }
                Generator::LPlus => {
                    for k in 1..dim {
                        let kk = k as i64;
                        let w = from_int(kk * (2 * l - kk + 1)) * hbar * hbar;
                        *m.at_mut(k - 1, k) = real(w);
                    }
                }
                _ => unreachable!("algebra mismatch caught by caller"),
            }
        }
        _ => unreachable!("algebra mismatch caught by caller"),
    }
    m
}

/// Exact matrix of a generator word (leftmost factor acts last).
pub fn rational_word_matrix(
    word: &[Generator],
    basis: &BasisSpec,
    hbar: &BigRational,
) -> RatMatrix {
    let mut out = RatMatrix::identity(basis.dim());
    for &g in word {
        out = out.mul(&rational_generator_matrix(g, basis, hbar));
    }
    out
}

/// Exact matrix of an expression under exact rational parameter bindings.
pub fn rational_expr_matrix(
    expr: &OperatorExpr,
    basis: &BasisSpec,
    values: &BTreeMap<crate::param::ParamId, BigRational>,
) -> Result<RatMatrix, Error> {
    if expr.algebra() != basis.algebra() {
        return Err(Error::AlgebraMismatch(expr.algebra(), basis.algebra()));
    }
    let hbar = values
        .get(&pid(HBAR))
        .cloned()
        .unwrap_or_else(BigRational::one);
    let mut out = RatMatrix::zeros(basis.dim());
    for (mono, scalar) in expr.terms() {
        let coeff = scalar.eval_exact(values)?;
        let word = rational_word_matrix(&mono.word(), basis, &hbar);
        out.add_scaled(&word, &coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::normal_order;
    use crate::scalar::{int, rat, Scalar};
    use Generator::*;

    #[test]
    fn rational_oscillator_commutator_is_one_below_the_edge() {
        let basis = BasisSpec::Hw { dim: 6 };
        let one = BigRational::one();
        let a = rational_generator_matrix(Annihilate, &basis, &one);
        let adag = rational_generator_matrix(Create, &basis, &one);
        let comm_minus_id = {
            let mut c = a.mul(&adag);
            c.add_scaled(&adag.mul(&a), &-Coeff::one());
            c.add_scaled(&RatMatrix::identity(6), &-Coeff::one());
            c
        };
        assert!(comm_minus_id.eq_guarded(&RatMatrix::zeros(6), 1));
        // ...and visibly wrong exactly at the truncation corner.
        assert!(!comm_minus_id.eq_guarded(&RatMatrix::zeros(6), 0));
    }

    #[test]
    fn rational_su2_satisfies_the_bracket_relations_exactly() {
        let basis = BasisSpec::Su2 { l: 3 };
        let hbar = rat(3, 2);
        let real = |r: BigRational| Coeff::new(r, BigRational::zero());
        let lp = rational_generator_matrix(LPlus, &basis, &hbar);
        let lm = rational_generator_matrix(LMinus, &basis, &hbar);
        let lz = rational_generator_matrix(LZero, &basis, &hbar);
        // [L+, L-] = 2ħ L0
        let mut lhs = lp.mul(&lm);
        lhs.add_scaled(&lm.mul(&lp), &-Coeff::one());
        let mut rhs = RatMatrix::zeros(basis.dim());
        rhs.add_scaled(&lz, &real(int(2) * &hbar));
        assert_eq!(lhs, rhs);
        // [L0, L+] = ħ L+
        let mut lhs = lz.mul(&lp);
        lhs.add_scaled(&lp.mul(&lz), &-Coeff::one());
        let mut rhs = RatMatrix::zeros(basis.dim());
        rhs.add_scaled(&lp, &real(hbar.clone()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_ordering_agrees_with_the_exact_representation() {
        // the order-4 rewrite example: a·a·a†·a†
        let word = [Annihilate, Annihilate, Create, Create];
        let basis = BasisSpec::Hw { dim: 10 };
        let hbar = BigRational::one();
        let direct = rational_word_matrix(&word, &basis, &hbar);
        let expr = normal_order(Algebra::Hw, Scalar::one(), &word).unwrap();
        let via_canonical =
            rational_expr_matrix(&expr, &basis, &BTreeMap::new()).unwrap();
        assert!(direct.eq_guarded(&via_canonical, word.len()));
    }

    #[test]
    fn su2_normal_ordering_is_exact_at_any_multiplet() {
        let word = [LMinus, LZero, LPlus, LMinus];
        let expr = normal_order(Algebra::Su2, Scalar::one(), &word).unwrap();
        let mut values = BTreeMap::new();
        values.insert(pid(HBAR), rat(3, 2));
        for l in [1, 2, 3] {
            let basis = BasisSpec::Su2 { l };
            let direct = rational_word_matrix(&word, &basis, &rat(3, 2));
            let via_canonical = rational_expr_matrix(&expr, &basis, &values).unwrap();
            assert_eq!(direct, via_canonical);
        }
    }

    #[test]
    fn jacobi_reproduces_a_known_spectrum() {
        let mut a = DMatrix::<Complex64>::zeros(3, 3);
        a[(0, 0)] = c64(3.0);
        a[(1, 1)] = c64(1.0);
        a[(2, 2)] = c64(2.0);
        let vals = hermitian_eigenvalues(&a).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);

        // 2×2 with a complex off-diagonal entry: eigenvalues 0 and 2.
        let mut b = DMatrix::<Complex64>::zeros(2, 2);
        b[(0, 0)] = c64(1.0);
        b[(1, 1)] = c64(1.0);
        b[(0, 1)] = Complex64::new(0.0, 1.0);
        b[(1, 0)] = Complex64::new(0.0, -1.0);
        let (vals, vecs) = hermitian_eigen(&b).unwrap();
        assert!((vals[0] - 0.0).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);
        let residual = &b * vecs.column(1) - vecs.column(1) * c64(vals[1]);
        assert!(residual.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut a = DMatrix::<Complex64>::zeros(2, 2);
        a[(0, 1)] = c64(1.0);
        assert!(matches!(
            hermitian_eigenvalues(&a),
            Err(Error::NotHermitianMatrix(_))
        ));
    }

    #[test]
    fn exponential_of_anti_hermitian_is_unitary() {
        let mut g = DMatrix::<Complex64>::zeros(3, 3);
        g[(0, 1)] = c64(0.3);
        g[(1, 0)] = c64(-0.3);
        g[(1, 2)] = Complex64::new(0.0, 0.2);
        g[(2, 1)] = Complex64::new(0.0, 0.2);
        let u = expm_anti_hermitian(&g).unwrap();
        let should_be_id = &u * u.adjoint();
        let id = DMatrix::<Complex64>::identity(3, 3);
        assert!(max_abs(&(should_be_id - id)) < 1e-13);
    }

    #[test]
    fn truncation_guard_thresholds() {
        assert!(hw_truncation_guard(6, 24));
        assert!(!hw_truncation_guard(6, 8));
        assert!(hw_truncation_guard(2, 8));
    }
}
