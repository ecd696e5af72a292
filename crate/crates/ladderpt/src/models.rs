//! Concrete problem presets, number-basis expectations, and energy tables.
//!
//! Two exactly solvable presets ship with the crate:
//!
//! * `stark_problem`: an oscillator displaced by a static linear coupling.
//!   V = −eE √(ħ/2mω₀) (a† + a), gap ħω₀, central part ħω₀/2.
//! * `zeeman_problem`: an su(2) ladder split by κ along the quantization
//!   axis and driven transversally. V = (u L+ + u* L−)/2, gap ħκ, central
//!   part ε_R + (α/r²)·L².
//!
//! Both stay exact through every order the engine can reach.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{Algebra, Monomial, OperatorExpr};
use crate::engine::{PerturbationProblem, SeriesResult};
use crate::error::Error;
use crate::param::{
    pid, ParamValues, ALPHA_R2, CHARGE, EPS_R, FIELD, HBAR, KAPPA, L_SQUARED, MASS, OMEGA0,
    UNIT_PHASE, UNIT_PHASE_CONJ,
};
use crate::scalar::{int, rat, Scalar};
use crate::superops::{pi_project, GapSpec};

/// A basis state of one algebra: an occupation number, or an (l, m) pair
/// with |m| ≤ l.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum StateLabel {
    Hw { n: u64 },
    Su2 { l: u64, m: i64 },
}

impl StateLabel {
    pub fn hw(n: u64) -> Self {
        StateLabel::Hw { n }
    }

    pub fn su2(l: u64, m: i64) -> Result<Self, Error> {
        if m.unsigned_abs() > l {
            return Err(Error::InvalidState(
                format!("{l}:{m}"),
                "|m| must not exceed l".into(),
            ));
        }
        Ok(StateLabel::Su2 { l, m })
    }

    pub fn algebra(&self) -> Algebra {
        match self {
            StateLabel::Hw { .. } => Algebra::Hw,
            StateLabel::Su2 { .. } => Algebra::Su2,
        }
    }

    /// Eigenvalue index of the grading operator: n for the oscillator, m for
    /// the su(2) ladder.
    pub fn grade(&self) -> i64 {
        match *self {
            StateLabel::Hw { n } => n as i64,
            StateLabel::Su2 { m, .. } => m,
        }
    }

    /// Parse `"3"` (oscillator) or `"l:m"` such as `"1:-1"` (su(2)).
    pub fn parse(text: &str, algebra: Algebra) -> Result<Self, Error> {
        let bad = |why: &str| Error::InvalidState(text.to_owned(), why.to_owned());
        match algebra {
            Algebra::Hw => text
                .trim()
                .parse::<u64>()
                .map(StateLabel::hw)
                .map_err(|_| bad("expected a nonnegative occupation number")),
            Algebra::Su2 => {
                let (l, m) = text
                    .split_once(':')
                    .ok_or_else(|| bad("expected `l:m`"))?;
                let l = l
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| bad("l must be a nonnegative integer"))?;
                let m = m
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| bad("m must be an integer"))?;
                StateLabel::su2(l, m)
            }
        }
    }
}

impl std::fmt::Display for StateLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateLabel::Hw { n } => write!(f, "n={n}"),
            StateLabel::Su2 { l, m } => write!(f, "l={l},m={m}"),
        }
    }
}

/// Oscillator with a static linear coupling. Exact at second order: the
/// whole series terminates there.
pub fn stark_problem(max_order: u32) -> PerturbationProblem {
    let gap = GapSpec::new(
        Algebra::Hw,
        &Scalar::param(HBAR) * &Scalar::param(OMEGA0),
    )
    .expect("gap is a single product");
    let h0_central = &Scalar::from_ratio(1, 2) * &(&Scalar::param(HBAR) * &Scalar::param(OMEGA0));
    // −eE √(ħ/2mω₀) = −eE · (1/2)√2 · ħ^{1/2} m^{−1/2} ω₀^{−1/2}
    let coupling = [
        Scalar::from_ratio(-1, 2),
        Scalar::sqrt2_pow(1),
        Scalar::param(CHARGE),
        Scalar::param(FIELD),
        Scalar::param_pow(HBAR, rat(1, 2)),
        Scalar::param_pow(MASS, rat(-1, 2)),
        Scalar::param_pow(OMEGA0, rat(-1, 2)),
    ]
    .into_iter()
    .fold(Scalar::one(), |acc, s| &acc * &s);
    let v = (&OperatorExpr::from_monomial(Monomial::hw(1, 0))
        + &OperatorExpr::from_monomial(Monomial::hw(0, 1)))
        .scale(&coupling);
    PerturbationProblem::new(gap, h0_central, v, max_order).expect("preset is valid")
}

/// su(2) ladder with a transverse unit-strength drive at phase u.
pub fn zeeman_problem(max_order: u32) -> PerturbationProblem {
    let gap = GapSpec::new(
        Algebra::Su2,
        &Scalar::param(HBAR) * &Scalar::param(KAPPA),
    )
    .expect("gap is a single product");
    let h0_central = &Scalar::param(EPS_R)
        + &(&Scalar::param(ALPHA_R2) * &Scalar::param(L_SQUARED));
    let half = Scalar::from_ratio(1, 2);
    let v = &OperatorExpr::from_monomial(Monomial::su2(1, 0, 0))
        .scale(&(&half * &Scalar::param(UNIT_PHASE)))
        + &OperatorExpr::from_monomial(Monomial::su2(0, 0, 1))
            .scale(&(&half * &Scalar::param(UNIT_PHASE_CONJ)));
    PerturbationProblem::new(gap, h0_central, v, max_order).expect("preset is valid")
}

/// Exact expectation value of a diagonal operator in one basis state,
/// returned as a symbolic scalar (powers of ħ survive; everything else is a
/// rational number).
///
/// For the oscillator, ⟨n| a†^k a^k |n⟩ = n·(n−1)⋯(n−k+1). For su(2),
/// descending k steps from m and climbing back gives
/// ⟨l,m| L+^k L0^p L-^k |l,m⟩ = ((m−k)ħ)^p · ∏_{j<k} ħ²(l(l+1) − (m−j)(m−j−1)).
pub fn diagonal_expectation(expr: &OperatorExpr, state: &StateLabel) -> Result<Scalar, Error> {
    if expr.algebra() != state.algebra() {
        return Err(Error::AlgebraMismatch(expr.algebra(), state.algebra()));
    }
    if pi_project(expr) != *expr {
        return Err(Error::NotDiagonal);
    }
    let mut acc = Scalar::zero();
    for (mono, s) in expr.terms() {
        let factor = match (*mono, *state) {
            (Monomial::Hw { create, .. }, StateLabel::Hw { n }) => {
                let k = u64::from(create);
                if k > n {
                    Scalar::zero()
                } else {
                    let mut f = BigRational::one();
                    for j in 0..k {
                        f *= BigRational::from_integer(BigInt::from(n - j));
                    }
                    Scalar::from_rational(f)
                }
            }
            (Monomial::Su2 { plus, zero, .. }, StateLabel::Su2 { l, m }) => {
                let k = i64::try_from(plus).expect("power fits");
                let p = zero;
                let casimir = BigInt::from(l) * BigInt::from(l + 1);
                let mut f = BigRational::one();
                for j in 0..k {
                    let mj = BigInt::from(m - j);
                    let step = &casimir - &mj * (&mj - BigInt::one());
                    f *= BigRational::from_integer(step);
                }
                let center = BigInt::from(m - k);
                let mut center_pow = BigRational::one();
                for _ in 0..p {
                    center_pow *= BigRational::from_integer(center.clone());
                }
                let hbar_power = int(2) * int(k) + int(i64::from(p));
                &Scalar::from_rational(f * center_pow)
                    * &Scalar::param_pow(HBAR, hbar_power)
            }
            _ => unreachable!("algebra checked above"),
        };
        acc = &acc + &(s * &factor);
    }
    Ok(acc)
}

/// Bindings augmented with the per-state value of the central Casimir
/// symbol: L2 ↦ l(l+1)·ħ².
fn state_values(values: &ParamValues, state: &StateLabel) -> Result<ParamValues, Error> {
    let mut out = values.clone();
    if let StateLabel::Su2 { l, .. } = state {
        if values.get(&pid(L_SQUARED)).is_none() {
            let hbar = values.require(&pid(HBAR))?;
            let l = *l as f64;
            out.insert(pid(L_SQUARED), hbar * hbar * l * (l + 1.0));
        }
    }
    Ok(out)
}

/// One row of the energy table produced by [`evaluate_spectrum`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub state: StateLabel,
    /// Unperturbed energy: central part plus grade × gap.
    pub eps0: f64,
    /// Per-order diagonal corrections ⟨state|Wₙ|state⟩, one entry per order.
    pub corrections: Vec<(u32, f64)>,
    /// eps0 plus all corrections.
    pub energy: f64,
}

/// Evaluate perturbed energies for a list of states under numeric bindings.
pub fn evaluate_spectrum(
    problem: &PerturbationProblem,
    series: &SeriesResult,
    states: &[StateLabel],
    values: &ParamValues,
) -> Result<Vec<SpectrumRow>, Error> {
    let mut rows = Vec::with_capacity(states.len());
    for state in states {
        if state.algebra() != problem.algebra() {
            return Err(Error::AlgebraMismatch(problem.algebra(), state.algebra()));
        }
        let sv = state_values(values, state)?;
        let gap_val = real_part(problem.gap().gap().eval(&sv)?)?;
        let central = if problem.h0_central().is_zero() {
            0.0
        } else {
            real_part(problem.h0_central().eval(&sv)?)?
        };
        let eps0 = central + state.grade() as f64 * gap_val;
        let mut corrections = Vec::with_capacity(series.orders.len());
        let mut energy = eps0;
        for o in &series.orders {
            let c = if o.w.is_zero() {
                0.0
            } else {
                real_part(diagonal_expectation(&o.w, state)?.eval(&sv)?)?
            };
            energy += c;
            corrections.push((o.order, c));
        }
        rows.push(SpectrumRow {
            state: *state,
            eps0,
            corrections,
            energy,
        });
    }
    Ok(rows)
}

fn real_part(v: Complex64) -> Result<f64, Error> {
    if v.im.abs() > 1e-9 * (1.0 + v.re.abs()) {
        return Err(Error::NotExact(format!(
            "energy evaluation produced a complex value {v}"
        )));
    }
    Ok(v.re)
}
