//! Normal-ordered ladder monomials and finite operator expressions.
//!
//! Two algebras are supported:
//!
//! * the oscillator pair with `[a, a†] = 1`, canonical words `a†^m a^n`;
//! * the su(2) ladder triple with `[L0, L±] = ±ħ L±`, `[L+, L-] = 2ħ L0`,
//!   canonical words `L+^m L0^p L-^n`.
//!
//! Arbitrary generator words are rewritten into canonical form by the local
//! rules
//!
//! ```text
//! a · a†  →  a† · a + 1
//! L0 · L+ →  L+ · L0 + ħ L+
//! L- · L+ →  L+ · L- − 2ħ L0
//! L- · L0 →  L0 · L- + ħ L-
//! ```
//!
//! each of which strictly reduces the number of out-of-order adjacent pairs
//! or the word length, so rewriting terminates. An [`OperatorExpr`] is a
//! finite map from canonical monomials to exact scalars; two expressions are
//! equal as operators iff they are structurally equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;
use crate::param::HBAR;
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Algebra {
    /// Oscillator creation/annihilation pair.
    Hw,
    /// su(2) raising/central/lowering triple.
    Su2,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::Hw => "hw",
            Algebra::Su2 => "su2",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    Create,
    Annihilate,
    LPlus,
    LZero,
    LMinus,
}

impl Generator {
    pub fn algebra(self) -> Algebra {
        match self {
            Generator::Create | Generator::Annihilate => Algebra::Hw,
            _ => Algebra::Su2,
        }
    }

    /// Position in the canonical word order; lower ranks come first.
    fn rank(self) -> u8 {
        match self {
            Generator::Create | Generator::LPlus => 0,
            Generator::Annihilate | Generator::LZero => 1,
            Generator::LMinus => 2,
        }
    }

    pub fn adjoint(self) -> Generator {
        match self {
            Generator::Create => Generator::Annihilate,
            Generator::Annihilate => Generator::Create,
            Generator::LPlus => Generator::LMinus,
            Generator::LMinus => Generator::LPlus,
            Generator::LZero => Generator::LZero,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Generator::Create => "a†",
            Generator::Annihilate => "a",
            Generator::LPlus => "L+",
            Generator::LZero => "L0",
            Generator::LMinus => "L-",
        }
    }
}

/// A normal-ordered generator word, stored as its exponents. The derived
/// ordering is lexicographic on (raising, central, lowering) powers with the
/// identity first — the deterministic term order of every expression.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Monomial {
    Hw { create: u32, annihilate: u32 },
    Su2 { plus: u32, zero: u32, minus: u32 },
}

impl Monomial {
    pub fn hw(create: u32, annihilate: u32) -> Self {
        Monomial::Hw { create, annihilate }
    }

    pub fn su2(plus: u32, zero: u32, minus: u32) -> Self {
        Monomial::Su2 { plus, zero, minus }
    }

    pub fn identity(algebra: Algebra) -> Self {
        match algebra {
            Algebra::Hw => Monomial::hw(0, 0),
            Algebra::Su2 => Monomial::su2(0, 0, 0),
        }
    }

    pub fn algebra(&self) -> Algebra {
        match self {
            Monomial::Hw { .. } => Algebra::Hw,
            Monomial::Su2 { .. } => Algebra::Su2,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Monomial::identity(self.algebra())
    }

    /// Raising power minus lowering power — the ladder grading that the
    /// superoperators act through.
    pub fn grade(&self) -> i64 {
        match self {
            Monomial::Hw { create, annihilate } => i64::from(*create) - i64::from(*annihilate),
            Monomial::Su2 { plus, minus, .. } => i64::from(*plus) - i64::from(*minus),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.grade() == 0
    }

    /// Mirror image under the adjoint: powers swap ends, the central power
    /// stays put. The result is already normal-ordered.
    pub fn adjoint(&self) -> Monomial {
        match *self {
            Monomial::Hw { create, annihilate } => Monomial::hw(annihilate, create),
            Monomial::Su2 { plus, zero, minus } => Monomial::su2(minus, zero, plus),
        }
    }

    pub fn word(&self) -> Vec<Generator> {
        let mut w = Vec::new();
        match *self {
            Monomial::Hw { create, annihilate } => {
                w.extend(std::iter::repeat(Generator::Create).take(create as usize));
                w.extend(std::iter::repeat(Generator::Annihilate).take(annihilate as usize));
            }
            Monomial::Su2 { plus, zero, minus } => {
                w.extend(std::iter::repeat(Generator::LPlus).take(plus as usize));
                w.extend(std::iter::repeat(Generator::LZero).take(zero as usize));
                w.extend(std::iter::repeat(Generator::LMinus).take(minus as usize));
            }
        }
        w
    }

    /// Largest single-generator power, the quantity the truncation guard of
    /// the matrix oracle cares about.
    pub fn max_power(&self) -> u32 {
        match *self {
            Monomial::Hw { create, annihilate } => create.max(annihilate),
            Monomial::Su2 { plus, zero, minus } => plus.max(zero).max(minus),
        }
    }

    pub fn degree(&self) -> u32 {
        match *self {
            Monomial::Hw { create, annihilate } => create + annihilate,
            Monomial::Su2 { plus, zero, minus } => plus + zero + minus,
        }
    }

    fn from_sorted_word(algebra: Algebra, word: &[Generator]) -> Monomial {
        let mut counts = [0u32; 3];
        for g in word {
            counts[g.rank() as usize] += 1;
        }
        match algebra {
            Algebra::Hw => Monomial::hw(counts[0], counts[1]),
            Algebra::Su2 => Monomial::su2(counts[0], counts[1], counts[2]),
        }
    }
}

/// Finite linear combination of canonical monomials of a single algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorExpr {
    algebra: Algebra,
    terms: BTreeMap<Monomial, Scalar>,
}

impl OperatorExpr {
    pub fn zero(algebra: Algebra) -> Self {
        OperatorExpr {
            algebra,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator.
    pub fn identity(algebra: Algebra) -> Self {
        OperatorExpr::constant(algebra, Scalar::one())
    }

    /// A central multiple of the identity.
    pub fn constant(algebra: Algebra, scalar: Scalar) -> Self {
        OperatorExpr::term(Monomial::identity(algebra), scalar)
    }

    pub fn from_generator(g: Generator) -> Self {
        let word = [g];
        let m = Monomial::from_sorted_word(g.algebra(), &word);
        OperatorExpr::term(m, Scalar::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        OperatorExpr::term(m, Scalar::one())
    }

    pub fn term(m: Monomial, scalar: Scalar) -> Self {
        let mut e = OperatorExpr::zero(m.algebra());
        e.add_term(m, scalar);
        e
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient of one monomial (zero when absent).
    pub fn coeff_of(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn max_power(&self) -> u32 {
        self.terms.keys().map(Monomial::max_power).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, scalar: Scalar) {
        debug_assert_eq!(m.algebra(), self.algebra);
        if scalar.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(scalar);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &scalar;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn accumulate(&mut self, other: OperatorExpr) {
        for (m, s) in other.terms {
            self.add_term(m, s);
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_algebra(rhs)?;
        let mut out = self.clone();
        out.accumulate(rhs.clone());
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, Error> {
        self.checked_add(&rhs.negated())
    }

    /// Operator product: concatenate words pairwise and rewrite to canonical
    /// form. Bilinear and associative.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_algebra(rhs)?;
        let mut out = OperatorExpr::zero(self.algebra);
        for (m1, s1) in &self.terms {
            for (m2, s2) in &rhs.terms {
                let mut word = m1.word();
                word.extend(m2.word());
                out.accumulate(reorder(self.algebra, s1 * s2, word));
            }
        }
        Ok(out)
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, Error> {
        let ab = self.checked_mul(rhs)?;
        let ba = rhs.checked_mul(self)?;
        ab.checked_sub(&ba)
    }

    pub fn negated(&self) -> Self {
        OperatorExpr {
            algebra: self.algebra,
            terms: self.terms.iter().map(|(m, s)| (*m, -s)).collect(),
        }
    }

    /// Multiply every term by a scalar.
    pub fn scale(&self, scalar: &Scalar) -> Self {
        if scalar.is_zero() {
            return OperatorExpr::zero(self.algebra);
        }
        let mut out = OperatorExpr::zero(self.algebra);
        for (m, s) in &self.terms {
            out.add_term(*m, s * scalar);
        }
        out
    }

    /// Hermitian adjoint: reverse and dagger each word (which lands back in
    /// canonical order), conjugate each scalar.
    pub fn adjoint(&self) -> Self {
        let mut out = OperatorExpr::zero(self.algebra);
        for (m, s) in &self.terms {
            out.add_term(m.adjoint(), s.conjugate());
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_anti_hermitian(&self) -> bool {
        self.adjoint() == self.negated()
    }

    /// Re-canonicalize. Expressions are canonical by construction, so this
    /// is a fixed point; it exists so the invariant can be exercised.
    pub fn simplify(&self) -> Self {
        let mut out = OperatorExpr::zero(self.algebra);
        for (m, s) in &self.terms {
            out.add_term(*m, Scalar::from_terms(s.terms().to_vec()));
        }
        out
    }

    fn check_algebra(&self, rhs: &Self) -> Result<(), Error> {
        if self.algebra == rhs.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(self.algebra, rhs.algebra))
        }
    }
}

/// Rewrite `scalar · g1 g2 ... gk` into canonical form. The word may be in
/// any order; all generators must belong to `algebra`.
pub fn normal_order(
    algebra: Algebra,
    scalar: Scalar,
    word: &[Generator],
) -> Result<OperatorExpr, Error> {
    for g in word {
        if g.algebra() != algebra {
            return Err(Error::ForeignGenerator(g.token(), algebra));
        }
    }
    Ok(reorder(algebra, scalar, word.to_vec()))
}

/// Worklist rewriting; assumes the word already passed the algebra check.
///
/// Pending words are keyed by (length, inversion count, word) and the largest
/// key is rewritten first. Every rewrite strictly shrinks that key — a swap
/// removes exactly one inversion, a contraction shortens the word — so a word
/// popped from the front can never reappear, and coefficients of identical
/// intermediate words merge instead of spawning duplicate branches. Without the
/// merge the branch count grows exponentially in the number of inversions.
fn reorder(algebra: Algebra, scalar: Scalar, word: Vec<Generator>) -> OperatorExpr {
    let key = |w: Vec<Generator>| (w.len(), inversions(&w), w);
    let mut out = OperatorExpr::zero(algebra);
    let mut work: BTreeMap<(usize, usize, Vec<Generator>), Scalar> = BTreeMap::new();
    work.insert(key(word), scalar);
    while let Some(((_, _, w), s)) = work.pop_last() {
        if s.is_zero() {
            continue;
        }
        match first_inversion(&w) {
            None => out.add_term(Monomial::from_sorted_word(algebra, &w), s),
            Some(i) => {
                for (mult, replacement) in rewrite_pair(w[i], w[i + 1]) {
                    let mut next = Vec::with_capacity(w.len() + replacement.len());
                    next.extend_from_slice(&w[..i]);
                    next.extend_from_slice(&replacement);
                    next.extend_from_slice(&w[i + 2..]);
                    let slot = work.entry(key(next)).or_insert_with(Scalar::zero);
                    *slot = &*slot + &(&s * &mult);
                }
            }
        }
    }
    out
}

fn first_inversion(word: &[Generator]) -> Option<usize> {
    word.windows(2).position(|w| w[0].rank() > w[1].rank())
}

fn inversions(word: &[Generator]) -> usize {
    let mut count = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i].rank() > word[j].rank() {
                count += 1;
            }
        }
    }
    count
}

/// The local commutation rules, as (multiplier, replacement word) pairs for
/// one out-of-order adjacent pair.
fn rewrite_pair(g1: Generator, g2: Generator) -> Vec<(Scalar, Vec<Generator>)> {
    use Generator::*;
    let hbar = || Scalar::param(HBAR);
    match (g1, g2) {
        (Annihilate, Create) => vec![
            (Scalar::one(), vec![Create, Annihilate]),
            (Scalar::one(), vec![]),
        ],
        (LZero, LPlus) => vec![
            (Scalar::one(), vec![LPlus, LZero]),
            (hbar(), vec![LPlus]),
        ],
        (LMinus, LPlus) => vec![
            (Scalar::one(), vec![LPlus, LMinus]),
            (-&(&Scalar::from_integer(2) * &hbar()), vec![LZero]),
        ],
        (LMinus, LZero) => vec![
            (Scalar::one(), vec![LZero, LMinus]),
            (hbar(), vec![LMinus]),
        ],
        _ => unreachable!("pair {:?} {:?} is already ordered", g1, g2),
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.checked_add(rhs).expect("operator addition across algebras")
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.checked_sub(rhs).expect("operator subtraction across algebras")
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.checked_mul(rhs).expect("operator product across algebras")
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.negated()
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: OperatorExpr) -> OperatorExpr {
        &self + &rhs
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        &self - &rhs
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        &self * &rhs
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use Generator::*;

    fn hbar() -> Scalar {
        Scalar::param(HBAR)
    }

    #[test]
    fn oscillator_pair_reorders_with_unit_commutator() {
        // a·a† = a†·a + 1
        let e = normal_order(Algebra::Hw, Scalar::one(), &[Annihilate, Create]).unwrap();
        let expected = &OperatorExpr::from_monomial(Monomial::hw(1, 1))
            + &OperatorExpr::identity(Algebra::Hw);
        assert_eq!(e, expected);
    }

    #[test]
    fn squared_annihilators_against_squared_creators() {
        // a·a·a†·a† = a†²a² + 4 a†a + 2
        let e = normal_order(
            Algebra::Hw,
            Scalar::one(),
            &[Annihilate, Annihilate, Create, Create],
        )
        .unwrap();
        let mut expected = OperatorExpr::from_monomial(Monomial::hw(2, 2));
        expected = &expected
            + &OperatorExpr::term(Monomial::hw(1, 1), Scalar::from_integer(4));
        expected = &expected
            + &OperatorExpr::constant(Algebra::Hw, Scalar::from_integer(2));
        assert_eq!(e, expected);
    }

    #[test]
    fn su2_pair_rules() {
        // L-·L+ = L+·L- − 2ħ L0
        let e = normal_order(Algebra::Su2, Scalar::one(), &[LMinus, LPlus]).unwrap();
        let expected = &OperatorExpr::from_monomial(Monomial::su2(1, 0, 1))
            - &OperatorExpr::term(Monomial::su2(0, 1, 0), &Scalar::from_integer(2) * &hbar());
        assert_eq!(e, expected);

        // L0·L+ = L+·L0 + ħ L+
        let e = normal_order(Algebra::Su2, Scalar::one(), &[LZero, LPlus]).unwrap();
        let expected = &OperatorExpr::from_monomial(Monomial::su2(1, 1, 0))
            + &OperatorExpr::term(Monomial::su2(1, 0, 0), hbar());
        assert_eq!(e, expected);

        // L-·L0 = L0·L- + ħ L-
        let e = normal_order(Algebra::Su2, Scalar::one(), &[LMinus, LZero]).unwrap();
        let expected = &OperatorExpr::from_monomial(Monomial::su2(0, 1, 1))
            + &OperatorExpr::term(Monomial::su2(0, 0, 1), hbar());
        assert_eq!(e, expected);
    }

    #[test]
    fn field_quadrature_squared() {
        // (a† + a)² = a†² + 2a†a + a² + 1
        let x = &OperatorExpr::from_generator(Create) + &OperatorExpr::from_generator(Annihilate);
        let sq = &x * &x;
        let mut expected = OperatorExpr::from_monomial(Monomial::hw(2, 0));
        expected = &expected + &OperatorExpr::term(Monomial::hw(1, 1), Scalar::from_integer(2));
        expected = &expected + &OperatorExpr::from_monomial(Monomial::hw(0, 2));
        expected = &expected + &OperatorExpr::identity(Algebra::Hw);
        assert_eq!(sq, expected);
    }

    #[test]
    fn mixed_algebra_words_are_rejected() {
        let err = normal_order(Algebra::Hw, Scalar::one(), &[Annihilate, LPlus]).unwrap_err();
        assert_eq!(err, Error::ForeignGenerator("L+", Algebra::Hw));
        let a = OperatorExpr::from_generator(Create);
        let l = OperatorExpr::from_generator(LPlus);
        assert_eq!(
            a.checked_mul(&l),
            Err(Error::AlgebraMismatch(Algebra::Hw, Algebra::Su2))
        );
    }

    #[test]
    fn identity_is_neutral_and_central() {
        for alg in [Algebra::Hw, Algebra::Su2] {
            let one = OperatorExpr::identity(alg);
            let x = match alg {
                Algebra::Hw => OperatorExpr::from_monomial(Monomial::hw(2, 1)),
                Algebra::Su2 => OperatorExpr::from_monomial(Monomial::su2(1, 1, 2)),
            };
            assert_eq!(&one * &x, x);
            assert_eq!(&x * &one, x);
            assert!(one.commutator(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn adjoint_mirrors_words_and_conjugates_scalars() {
        // (i · a†² a)† = −i · a† a²
        let e = OperatorExpr::term(Monomial::hw(2, 1), Scalar::i());
        let expected = OperatorExpr::term(Monomial::hw(1, 2), -&Scalar::i());
        assert_eq!(e.adjoint(), expected);
        assert_eq!(e.adjoint().adjoint(), e);

        let m = Monomial::su2(2, 1, 0);
        assert_eq!(m.adjoint(), Monomial::su2(0, 1, 2));
    }

    #[test]
    fn commutator_is_antisymmetric() {
        let x = &OperatorExpr::from_monomial(Monomial::su2(1, 0, 0))
            + &OperatorExpr::term(Monomial::su2(0, 1, 1), Scalar::from_ratio(1, 3));
        let y = OperatorExpr::from_monomial(Monomial::su2(0, 0, 1));
        let xy = x.commutator(&y).unwrap();
        let yx = y.commutator(&x).unwrap();
        assert_eq!(xy, yx.negated());
        assert!(x.commutator(&x).unwrap().is_zero());
    }

    #[test]
    fn simplify_is_a_fixed_point() {
        let e = normal_order(
            Algebra::Su2,
            Scalar::param_pow(HBAR, int(-1)),
            &[LMinus, LPlus, LZero],
        )
        .unwrap();
        assert_eq!(e.simplify(), e);
        assert_eq!(e.simplify().simplify(), e.simplify());
    }

    #[test]
    fn grading_and_guards() {
        assert_eq!(Monomial::hw(3, 1).grade(), 2);
        assert_eq!(Monomial::su2(1, 4, 1).grade(), 0);
        assert!(Monomial::su2(2, 1, 2).is_diagonal());
        assert_eq!(Monomial::su2(1, 4, 2).max_power(), 4);
        assert_eq!(Monomial::hw(3, 1).degree(), 4);
    }
}
