//! Exact scalar arithmetic: Gaussian-rational coefficients times monomials in
//! symbolic parameters with rational exponents.
//!
//! A [`Scalar`] is a canonical sum of [`ScalarTerm`]s. Each term is
//!
//! ```text
//! (re + im·i) · (√2)^s · ∏ param^exponent        s ∈ {0, 1}
//! ```
//!
//! with every part exact: coefficients are rationals over big integers,
//! exponents are rationals (half-integers appear in oscillator couplings such
//! as ħ^{1/2}), and the √2 slot carries the one irrational factor those
//! couplings need. Even powers of √2 fold into the rational coefficient, the
//! unit-modulus pair u·u_conj reduces to 1, and terms with equal parameter
//! parts merge, so structural equality is exact symbolic equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::param::{pid, ParamId, ParamValues, UNIT_PHASE, UNIT_PHASE_CONJ};

/// Exact Gaussian-rational coefficient.
pub type Coeff = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// One product term of a [`Scalar`]. Canonical on construction: no zero
/// exponents, u/u_conj reduced, √2 slot folded to 0 or 1, and a zero
/// coefficient clears everything else.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarTerm {
    coeff: Coeff,
    sqrt2: bool,
    powers: BTreeMap<ParamId, BigRational>,
}

impl ScalarTerm {
    pub fn new(coeff: Coeff, sqrt2_pow: i64, powers: BTreeMap<ParamId, BigRational>) -> Self {
        let mut term = ScalarTerm {
            coeff,
            sqrt2: false,
            powers,
        };
        term.absorb_sqrt2(sqrt2_pow);
        term.reduce_unit_pair();
        term.powers.retain(|_, e| !e.is_zero());
        if term.coeff.is_zero() {
            term.sqrt2 = false;
            term.powers.clear();
        }
        term
    }

    pub fn coeff(&self) -> &Coeff {
        &self.coeff
    }

    pub fn has_sqrt2(&self) -> bool {
        self.sqrt2
    }

    pub fn powers(&self) -> &BTreeMap<ParamId, BigRational> {
        &self.powers
    }

    /// Fold an integer power of √2 into the term: pairs become factors of 2
    /// in the coefficient, leaving the slot holding 0 or 1.
    fn absorb_sqrt2(&mut self, added: i64) {
        let total = i64::from(self.sqrt2) + added;
        let half = total.div_euclid(2);
        let rem = total.rem_euclid(2);
        if half != 0 {
            let factor = pow_rational(&int(2), half);
            self.coeff = scale(&self.coeff, &factor);
        }
        self.sqrt2 = rem == 1;
    }

    /// Apply u·u_conj → 1: subtract the common part of the two exponents so
    /// at most one of the pair survives.
    fn reduce_unit_pair(&mut self) {
        let u = pid(UNIT_PHASE);
        let uc = pid(UNIT_PHASE_CONJ);
        let eu = self.powers.get(&u).cloned();
        let ec = self.powers.get(&uc).cloned();
        if let (Some(eu), Some(ec)) = (eu, ec) {
            let common = eu.clone().min(ec.clone());
            if !common.is_zero() {
                self.powers.insert(u, eu - common.clone());
                self.powers.insert(uc, ec - common);
            }
        }
    }

    /// Ordering on the parameter part only; coefficients of like terms merge.
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.powers
            .cmp(&other.powers)
            .then(self.sqrt2.cmp(&other.sqrt2))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut powers = self.powers.clone();
        for (p, e) in &other.powers {
            let entry = powers.entry(p.clone()).or_insert_with(BigRational::zero);
            *entry += e;
        }
        ScalarTerm::new(
            &self.coeff * &other.coeff,
            i64::from(self.sqrt2) + i64::from(other.sqrt2),
            powers,
        )
    }

    fn conjugate(&self) -> Self {
        let mut powers = BTreeMap::new();
        for (p, e) in &self.powers {
            powers.insert(p.conjugate(), e.clone());
        }
        ScalarTerm::new(self.coeff.conj(), i64::from(self.sqrt2), powers)
    }

    fn eval(&self, values: &ParamValues) -> Result<Complex64, Error> {
        let mut acc = coeff_to_c64(&self.coeff)?;
        if self.sqrt2 {
            acc *= std::f64::consts::SQRT_2;
        }
        for (p, e) in &self.powers {
            let v = values.require(p)?;
            acc *= value_pow(p, v, e)?;
        }
        Ok(acc)
    }

    fn eval_exact(&self, values: &BTreeMap<ParamId, BigRational>) -> Result<Coeff, Error> {
        if self.sqrt2 {
            return Err(Error::NotExact("term carries a √2 factor".into()));
        }
        let mut acc = self.coeff.clone();
        for (p, e) in &self.powers {
            if !e.is_integer() {
                return Err(Error::NotExact(format!(
                    "fractional exponent on `{p}` has no rational value"
                )));
            }
            let v = values
                .get(p)
                .ok_or_else(|| Error::MissingParameter(p.as_str().to_owned()))?;
            if v.is_zero() && e.is_negative() {
                return Err(Error::DivisionByZero);
            }
            let k = e
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::NotExact("exponent out of range".into()))?;
            acc = scale(&acc, &pow_rational(v, k));
        }
        Ok(acc)
    }
}

/// Canonical sum of scalar terms, sorted by parameter part with no zero
/// coefficients. The empty sum is zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Scalar {
    terms: Vec<ScalarTerm>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_coeff(Coeff::one())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::from_coeff(Coeff::new(BigRational::zero(), BigRational::one()))
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::from_rational(int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(rat(num, den))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::from_coeff(Coeff::new(r, BigRational::zero()))
    }

    pub fn from_coeff(c: Coeff) -> Self {
        Scalar::from_terms(vec![ScalarTerm::new(c, 0, BTreeMap::new())])
    }

    /// The parameter `name` to the first power.
    pub fn param(name: &str) -> Self {
        Scalar::param_pow(name, int(1))
    }

    pub fn param_pow(name: &str, exponent: BigRational) -> Self {
        let mut powers = BTreeMap::new();
        powers.insert(pid(name), exponent);
        Scalar::from_terms(vec![ScalarTerm::new(Coeff::one(), 0, powers)])
    }

    /// Exact (√2)^k, e.g. `sqrt2_pow(-1)` for the 1/√2 in oscillator
    /// couplings.
    pub fn sqrt2_pow(k: i64) -> Self {
        Scalar::from_terms(vec![ScalarTerm::new(Coeff::one(), k, BTreeMap::new())])
    }

    pub fn from_terms(terms: Vec<ScalarTerm>) -> Self {
        let mut terms: Vec<ScalarTerm> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        terms.sort_by(|a, b| a.key_cmp(b));
        let mut merged: Vec<ScalarTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.key_cmp(&t) == Ordering::Equal => {
                    last.coeff = &last.coeff + &t.coeff;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Scalar { terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    pub fn terms(&self) -> &[ScalarTerm] {
        &self.terms
    }

    /// The sole term of a single-product scalar, if it is one.
    pub fn single_term(&self) -> Option<&ScalarTerm> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn conjugate(&self) -> Self {
        Scalar::from_terms(self.terms.iter().map(ScalarTerm::conjugate).collect())
    }

    /// Exact reciprocal, defined for single-product scalars only.
    pub fn inverse(&self) -> Result<Self, Error> {
        let t = self.single_term().ok_or(Error::NotSingleTerm)?;
        if t.coeff.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv_coeff = Coeff::one() / &t.coeff;
        let powers = t
            .powers
            .iter()
            .map(|(p, e)| (p.clone(), -e.clone()))
            .collect();
        Ok(Scalar::from_terms(vec![ScalarTerm::new(
            inv_coeff,
            -i64::from(t.sqrt2),
            powers,
        )]))
    }

    /// Every parameter mentioned by any term.
    pub fn params(&self) -> impl Iterator<Item = &ParamId> {
        self.terms.iter().flat_map(|t| t.powers.keys())
    }

    /// Numeric value under the given bindings.
    pub fn eval(&self, values: &ParamValues) -> Result<Complex64, Error> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            acc += t.eval(values)?;
        }
        Ok(acc)
    }

    /// Exact rational value under exact rational bindings. Fails on √2
    /// factors or fractional exponents; the rational oracle never feeds those.
    pub fn eval_exact(&self, values: &BTreeMap<ParamId, BigRational>) -> Result<Coeff, Error> {
        let mut acc = Coeff::zero();
        for t in &self.terms {
            acc = acc + t.eval_exact(values)?;
        }
        Ok(acc)
    }
}

fn scale(c: &Coeff, r: &BigRational) -> Coeff {
    Coeff::new(&c.re * r, &c.im * r)
}

/// r^k for integer k of either sign (r nonzero when k < 0).
pub fn pow_rational(r: &BigRational, k: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if k >= 0 {
        r.clone()
    } else {
        BigRational::one() / r.clone()
    };
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

fn coeff_to_c64(c: &Coeff) -> Result<Complex64, Error> {
    let re = c
        .re
        .to_f64()
        .ok_or_else(|| Error::NotExact("coefficient exceeds f64 range".into()))?;
    let im = c
        .im
        .to_f64()
        .ok_or_else(|| Error::NotExact("coefficient exceeds f64 range".into()))?;
    Ok(Complex64::new(re, im))
}

fn value_pow(p: &ParamId, v: Complex64, e: &BigRational) -> Result<Complex64, Error> {
    if e.is_integer() {
        let k = e
            .to_integer()
            .to_i32()
            .ok_or_else(|| Error::NotExact("exponent out of range".into()))?;
        Ok(v.powi(k))
    } else if v.im == 0.0 && v.re > 0.0 {
        let ef = e
            .to_f64()
            .ok_or_else(|| Error::NotExact("exponent exceeds f64 range".into()))?;
        Ok(Complex64::new(v.re.powf(ef), 0.0))
    } else {
        Err(Error::FractionalPower(p.as_str().to_owned()))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Scalar::from_terms(terms)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(a.mul(b));
            }
        }
        Scalar::from_terms(terms)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let minus_one = Coeff::new(-BigRational::one(), BigRational::zero());
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.coeff = &t.coeff * &minus_one;
                    t
                })
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{HBAR, KAPPA};

    #[test]
    fn zero_is_the_empty_sum() {
        assert!(Scalar::zero().is_zero());
        assert!((&Scalar::one() - &Scalar::one()).is_zero());
        let k = Scalar::param(KAPPA);
        assert!((&k - &k).is_zero());
    }

    #[test]
    fn zero_coefficient_clears_powers() {
        let t = ScalarTerm::new(Coeff::zero(), 1, {
            let mut m = BTreeMap::new();
            m.insert(pid(HBAR), int(2));
            m
        });
        assert!(t.powers().is_empty());
        assert!(!t.has_sqrt2());
    }

    #[test]
    fn sqrt2_pairs_fold_into_the_coefficient() {
        let two = &Scalar::sqrt2_pow(1) * &Scalar::sqrt2_pow(1);
        assert_eq!(two, Scalar::from_integer(2));
        // (√2)^-1 = (1/2)·√2, still exact.
        let inv = Scalar::sqrt2_pow(-1);
        assert_eq!(&inv * &Scalar::sqrt2_pow(1), Scalar::one());
        let half_sqrt2 = &Scalar::from_ratio(1, 2) * &Scalar::sqrt2_pow(1);
        assert_eq!(inv, half_sqrt2);
    }

    #[test]
    fn unit_phase_product_reduces_to_one() {
        let u = Scalar::param(UNIT_PHASE);
        let uc = Scalar::param(UNIT_PHASE_CONJ);
        assert_eq!(&u * &uc, Scalar::one());
        // u² · u_conj leaves a single u.
        assert_eq!(&(&u * &u) * &uc, u);
    }

    #[test]
    fn conjugation_swaps_the_phase_pair_and_the_imaginary_part() {
        let s = &Scalar::i() * &Scalar::param(UNIT_PHASE);
        let expected = -&(&Scalar::i() * &Scalar::param(UNIT_PHASE_CONJ));
        assert_eq!(s.conjugate(), expected);
        assert_eq!(s.conjugate().conjugate(), s);
    }

    #[test]
    fn inverse_of_a_product_term() {
        let gap = &Scalar::param(HBAR) * &Scalar::param(OMEGA_TEST);
        let inv = gap.inverse().unwrap();
        assert_eq!(&gap * &inv, Scalar::one());
        let sum = &gap + &Scalar::one();
        assert_eq!(sum.inverse(), Err(Error::NotSingleTerm));
        assert_eq!(Scalar::zero().inverse(), Err(Error::NotSingleTerm));
    }

    const OMEGA_TEST: &str = "omega0";

    #[test]
    fn like_terms_merge_and_unlike_terms_do_not() {
        let k1 = Scalar::param_pow(KAPPA, int(-1));
        let k3 = Scalar::param_pow(KAPPA, int(-3));
        let sum = &(&k1 + &k3) + &k1;
        assert_eq!(sum.terms().len(), 2);
        let expected = &(&Scalar::from_integer(2) * &k1) + &k3;
        assert_eq!(sum, expected);
        // 1 and √2 are rationally independent: they stay separate terms.
        let mixed = &Scalar::one() + &Scalar::sqrt2_pow(1);
        assert_eq!(mixed.terms().len(), 2);
    }

    #[test]
    fn numeric_eval_handles_half_integer_exponents() {
        let s = &Scalar::from_ratio(-1, 2) * &Scalar::param_pow(HBAR, rat(1, 2));
        let vals = ParamValues::new().with_real(HBAR, 4.0);
        let v = s.eval(&vals).unwrap();
        assert!((v.re - (-1.0)).abs() < 1e-14 && v.im == 0.0);
        let missing = Scalar::param(KAPPA).eval(&ParamValues::new());
        assert_eq!(missing, Err(Error::MissingParameter(KAPPA.into())));
    }

    #[test]
    fn exact_eval_is_rational() {
        let s = &Scalar::param_pow(HBAR, int(2)) * &Scalar::from_ratio(3, 4);
        let mut vals = BTreeMap::new();
        vals.insert(pid(HBAR), rat(2, 3));
        let v = s.eval_exact(&vals).unwrap();
        assert_eq!(v, Coeff::new(rat(1, 3), int(0)));
        let with_root = Scalar::sqrt2_pow(1);
        assert!(with_root.eval_exact(&vals).is_err());
    }
}
