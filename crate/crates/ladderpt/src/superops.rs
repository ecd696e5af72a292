//! The three superoperators that drive the expansion.
//!
//! On a canonical monomial with raising power m and lowering power n:
//!
//! * `pi_project` keeps the term iff m = n (the diagonal part);
//! * `gamma` multiplies by (m − n) · gap — the commutator with the graded
//!   part of the unperturbed Hamiltonian;
//! * `gamma_inverse` kills diagonal terms and divides the rest by
//!   (m − n) · gap, so Γ∘Γ⁻¹ = Γ⁻¹∘Γ = Id − Π exactly.
//!
//! The gap constant is a fixed single product of parameters (ħω₀ or ħκ), so
//! both scalings stay exact.

use crate::algebra::{Algebra, Monomial, OperatorExpr};
use crate::error::Error;
use crate::param::HBAR;
use crate::scalar::{int, Scalar};

/// Keep the diagonal (equal raising and lowering power) terms.
pub fn pi_project(expr: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero(expr.algebra());
    for (m, s) in expr.terms() {
        if m.is_diagonal() {
            out = &out + &OperatorExpr::term(*m, s.clone());
        }
    }
    out
}

/// A ladder algebra together with its level-spacing constant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapSpec {
    algebra: Algebra,
    gap: Scalar,
    gap_inverse: Scalar,
}

impl GapSpec {
    /// The gap must be a single nonzero product of parameters so its exact
    /// reciprocal exists.
    pub fn new(algebra: Algebra, gap: Scalar) -> Result<Self, Error> {
        if gap.single_term().is_none() {
            return Err(Error::InvalidGap);
        }
        let gap_inverse = gap.inverse().map_err(|_| Error::InvalidGap)?;
        Ok(GapSpec {
            algebra,
            gap,
            gap_inverse,
        })
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn gap(&self) -> &Scalar {
        &self.gap
    }

    /// Γ: scale each term by its grade times the gap. Diagonal terms drop.
    pub fn gamma(&self, expr: &OperatorExpr) -> OperatorExpr {
        self.graded_scale(expr, |grade| &Scalar::from_integer(grade) * &self.gap)
    }

    /// Γ⁻¹: zero on diagonal terms, otherwise divide by grade times gap.
    /// Total by construction — the kernel of Γ maps to zero, which is what
    /// makes Γ∘Γ⁻¹ = Id − Π rather than Id.
    pub fn gamma_inverse(&self, expr: &OperatorExpr) -> OperatorExpr {
        self.graded_scale(expr, |grade| {
            &Scalar::from_ratio(1, grade) * &self.gap_inverse
        })
    }

    fn graded_scale(
        &self,
        expr: &OperatorExpr,
        factor: impl Fn(i64) -> Scalar,
    ) -> OperatorExpr {
        assert_eq!(
            expr.algebra(),
            self.algebra,
            "superoperator applied across algebras"
        );
        let mut out = OperatorExpr::zero(self.algebra);
        for (m, s) in expr.terms() {
            let grade = m.grade();
            if grade != 0 {
                out = &out + &OperatorExpr::term(*m, s * &factor(grade));
            }
        }
        out
    }

    /// The graded part of the unperturbed Hamiltonian: gap · a†a for the
    /// oscillator, (gap/ħ) · L0 for su(2). Commuting with it realizes Γ.
    pub fn grading_operator(&self) -> OperatorExpr {
        match self.algebra {
            Algebra::Hw => OperatorExpr::term(Monomial::hw(1, 1), self.gap.clone()),
            Algebra::Su2 => OperatorExpr::term(
                Monomial::su2(0, 1, 0),
                &self.gap * &Scalar::param_pow(HBAR, int(-1)),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{KAPPA, OMEGA0};

    fn hw_gap() -> GapSpec {
        let gap = &Scalar::param(HBAR) * &Scalar::param(OMEGA0);
        GapSpec::new(Algebra::Hw, gap).unwrap()
    }

    fn su2_gap() -> GapSpec {
        let gap = &Scalar::param(HBAR) * &Scalar::param(KAPPA);
        GapSpec::new(Algebra::Su2, gap).unwrap()
    }

    #[test]
    fn projection_keeps_exactly_the_diagonal_terms() {
        let e = &OperatorExpr::from_monomial(Monomial::hw(2, 2))
            + &OperatorExpr::from_monomial(Monomial::hw(1, 0));
        let p = pi_project(&e);
        assert_eq!(p, OperatorExpr::from_monomial(Monomial::hw(2, 2)));
        // Π is idempotent and fixes constants.
        assert_eq!(pi_project(&p), p);
        let c = OperatorExpr::constant(Algebra::Su2, Scalar::from_ratio(3, 7));
        assert_eq!(pi_project(&c), c);
    }

    #[test]
    fn gamma_scales_by_grade_times_gap() {
        let gap = hw_gap();
        // Γ(a†) = ħω₀ a†, Γ(a) = −ħω₀ a, Γ(a†a) = 0
        let adag = OperatorExpr::from_monomial(Monomial::hw(1, 0));
        assert_eq!(gap.gamma(&adag), adag.scale(gap.gap()));
        let a = OperatorExpr::from_monomial(Monomial::hw(0, 1));
        assert_eq!(gap.gamma(&a), a.scale(&-gap.gap()));
        let n = OperatorExpr::from_monomial(Monomial::hw(1, 1));
        assert!(gap.gamma(&n).is_zero());
    }

    #[test]
    fn gamma_inverse_carries_the_grade_sign() {
        let gap = hw_gap();
        let inv = gap.gap().inverse().unwrap();
        // Γ⁻¹(a†) = (ħω₀)⁻¹ a† but Γ⁻¹(a) = −(ħω₀)⁻¹ a.
        let adag = OperatorExpr::from_monomial(Monomial::hw(1, 0));
        assert_eq!(gap.gamma_inverse(&adag), adag.scale(&inv));
        let a = OperatorExpr::from_monomial(Monomial::hw(0, 1));
        assert_eq!(gap.gamma_inverse(&a), a.scale(&-&inv));
    }

    #[test]
    fn complementarity_on_a_mixed_expression() {
        let gap = su2_gap();
        let e = &(&OperatorExpr::from_monomial(Monomial::su2(2, 1, 0))
            + &OperatorExpr::from_monomial(Monomial::su2(1, 0, 1)))
            + &OperatorExpr::from_monomial(Monomial::su2(0, 0, 3));
        let lhs = gap.gamma(&gap.gamma_inverse(&e));
        let rhs = &e - &pi_project(&e);
        assert_eq!(lhs, rhs);
        assert_eq!(gap.gamma_inverse(&gap.gamma(&e)), rhs);
        assert!(gap.gamma(&pi_project(&e)).is_zero());
    }

    #[test]
    fn gamma_is_commutation_with_the_grading_operator() {
        let gap = su2_gap();
        let n_gap = gap.grading_operator();
        let e = OperatorExpr::from_monomial(Monomial::su2(2, 1, 1));
        assert_eq!(n_gap.commutator(&e).unwrap(), gap.gamma(&e));
    }

    #[test]
    fn gap_must_be_a_single_product() {
        let sum = &Scalar::param(HBAR) + &Scalar::one();
        assert_eq!(
            GapSpec::new(Algebra::Hw, sum).unwrap_err(),
            Error::InvalidGap
        );
        assert_eq!(
            GapSpec::new(Algebra::Hw, Scalar::zero()).unwrap_err(),
            Error::InvalidGap
        );
    }
}
