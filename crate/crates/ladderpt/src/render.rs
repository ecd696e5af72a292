//! Text, LaTeX, and JSON presentations of operator expressions.
//!
//! The text form is the plain `*`-separated product grammar that the
//! expression parser also reads: exact coefficient, optional `2^{1/2}`,
//! parameter powers in name order, then the generator word (`1` for the
//! identity). Integer exponents print bare (`m^-1`), fractional ones braced
//! (`hbar^{1/2}`). The JSON form is lossless: one record per scalar term of
//! each monomial, with every rational as an exact string.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Monomial, OperatorExpr};
use crate::error::Error;
use crate::param::{
    pid, ParamId, ALPHA_R2, EPS_R, FIELD, HBAR, KAPPA, L_SQUARED, OMEGA0, UNIT_PHASE_CONJ,
};
use crate::scalar::{Coeff, Scalar, ScalarTerm};

// ---------------------------------------------------------------------------
// Plain text
// ---------------------------------------------------------------------------

fn exponent_text(e: &BigRational) -> String {
    if e.is_integer() {
        format!("{e}")
    } else {
        format!("{{{e}}}")
    }
}

/// The `*`-separated factors of one scalar term, excluding any generator
/// word. Empty exactly when the term is the number one.
fn term_factors(term: &ScalarTerm) -> Vec<String> {
    let mut factors = Vec::new();
    let c = term.coeff();
    if c.im.is_zero() {
        if !c.re.is_one() {
            factors.push(format!("{}", c.re));
        }
    } else if c.re.is_zero() {
        if !c.im.is_one() {
            if c.im == -BigRational::one() {
                factors.push("-1".into());
            } else {
                factors.push(format!("{}", c.im));
            }
        }
        factors.push("i".into());
    } else {
        let im = &c.im;
        let sign = if im.is_negative() { "-" } else { "+" };
        factors.push(format!("({}{}{}i)", c.re, sign, im.abs()));
    }
    if term.has_sqrt2() {
        factors.push("2^{1/2}".into());
    }
    for (p, e) in term.powers() {
        if e.is_one() {
            factors.push(p.as_str().to_owned());
        } else {
            factors.push(format!("{}^{}", p.as_str(), exponent_text(e)));
        }
    }
    factors
}

fn term_text(term: &ScalarTerm) -> String {
    let f = term_factors(term);
    if f.is_empty() {
        "1".into()
    } else {
        f.join(" * ")
    }
}

/// Whether a term's printed form leads with a minus sign that a sum can
/// absorb into a ` - ` separator.
fn term_is_negative(term: &ScalarTerm) -> bool {
    let c = term.coeff();
    c.re.is_negative() || (c.re.is_zero() && c.im.is_negative())
}

fn negate_term(term: &ScalarTerm) -> ScalarTerm {
    let c = term.coeff();
    ScalarTerm::new(
        Coeff::new(-c.re.clone(), -c.im.clone()),
        i64::from(term.has_sqrt2()),
        term.powers().clone(),
    )
}

/// A scalar as a standalone sum, e.g. `1/2 * kappa^-1 - 1/8 * kappa^-3`.
pub fn scalar_to_text(s: &Scalar) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in s.terms().iter().enumerate() {
        let (sep, t) = if term_is_negative(t) {
            (if i == 0 { "-" } else { " - " }, negate_term(t))
        } else {
            (if i == 0 { "" } else { " + " }, t.clone())
        };
        out.push_str(sep);
        out.push_str(&term_text(&t));
    }
    out
}

fn word_text(m: &Monomial) -> String {
    fn push(parts: &mut Vec<String>, token: &str, power: u32) {
        match power {
            0 => {}
            1 => parts.push(token.to_owned()),
            k => parts.push(format!("{token}^{k}")),
        }
    }
    let mut parts = Vec::new();
    match *m {
        Monomial::Hw { create, annihilate } => {
            push(&mut parts, "a†", create);
            push(&mut parts, "a", annihilate);
        }
        Monomial::Su2 { plus, zero, minus } => {
            push(&mut parts, "L+", plus);
            push(&mut parts, "L0", zero);
            push(&mut parts, "L-", minus);
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

/// Render an expression as exact plain text, one summand per scalar term.
pub fn expr_to_text(expr: &OperatorExpr) -> String {
    if expr.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let mut first = true;
    for (mono, scalar) in expr.terms() {
        let word = word_text(mono);
        match scalar.terms() {
            [single] => {
                let (negative, t) = if term_is_negative(single) {
                    (true, negate_term(single))
                } else {
                    (false, single.clone())
                };
                out.push_str(match (first, negative) {
                    (true, false) => "",
                    (true, true) => "-",
                    (false, false) => " + ",
                    (false, true) => " - ",
                });
                let mut factors = term_factors(&t);
                factors.push(word);
                out.push_str(&factors.join(" * "));
            }
            _ => {
                if !first {
                    out.push_str(" + ");
                }
                out.push_str(&format!("({}) * {}", scalar_to_text(scalar), word));
            }
        }
        first = false;
    }
    out
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&expr_to_text(self))
    }
}

// ---------------------------------------------------------------------------
// LaTeX
// ---------------------------------------------------------------------------

fn rational_latex(r: &BigRational) -> String {
    if r.is_integer() {
        format!("{r}")
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        let a = r.abs();
        format!("{sign}\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

/// Base symbol for a parameter, plus whether it already ends in a
/// superscript (and so needs brace protection before another exponent).
fn param_latex(p: &ParamId) -> (String, bool) {
    let name = p.as_str();
    let known: Option<(&str, bool)> = match name {
        HBAR => Some(("\\hbar", false)),
        OMEGA0 => Some(("\\omega_0", false)),
        KAPPA => Some(("\\kappa", false)),
        FIELD => Some(("\\mathcal{E}", false)),
        UNIT_PHASE_CONJ => Some(("u^{*}", true)),
        EPS_R => Some(("\\varepsilon_R", false)),
        ALPHA_R2 => Some(("\\alpha_{r^2}", false)),
        L_SQUARED => Some(("\\mathbf{L}^{2}", true)),
        _ => None,
    };
    match known {
        Some((s, wrap)) => (s.to_owned(), wrap),
        None if name.chars().all(|c| c.is_ascii_alphabetic()) && name.len() == 1 => {
            (name.to_owned(), false)
        }
        None => (format!("\\mathrm{{{}}}", name.replace('_', "\\_")), false),
    }
}

fn term_latex_factors(term: &ScalarTerm) -> Vec<String> {
    let mut factors = Vec::new();
    let c = term.coeff();
    if c.im.is_zero() {
        if !c.re.is_one() {
            factors.push(rational_latex(&c.re));
        }
    } else if c.re.is_zero() {
        if c.im == -BigRational::one() {
            factors.push("-\\mathrm{i}".into());
        } else {
            if !c.im.is_one() {
                factors.push(rational_latex(&c.im));
            }
            factors.push("\\mathrm{i}".into());
        }
    } else {
        factors.push(format!(
            "\\left({} {} {}\\,\\mathrm{{i}}\\right)",
            rational_latex(&c.re),
            if c.im.is_negative() { "-" } else { "+" },
            rational_latex(&c.im.abs())
        ));
    }
    if term.has_sqrt2() {
        factors.push("\\sqrt{2}".into());
    }
    for (p, e) in term.powers() {
        let (base, wrap) = param_latex(p);
        if e.is_one() {
            factors.push(base);
        } else if wrap {
            factors.push(format!("{{{base}}}^{{{e}}}"));
        } else {
            factors.push(format!("{base}^{{{e}}}"));
        }
    }
    factors
}

fn join_latex(factors: &[String]) -> String {
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("\\,")
    }
}

pub fn scalar_to_latex(s: &Scalar) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in s.terms().iter().enumerate() {
        let (sep, t) = if term_is_negative(t) {
            (if i == 0 { "-" } else { " - " }, negate_term(t))
        } else {
            (if i == 0 { "" } else { " + " }, t.clone())
        };
        out.push_str(sep);
        out.push_str(&join_latex(&term_latex_factors(&t)));
    }
    out
}

fn word_latex(m: &Monomial) -> String {
    fn power(base: &str, k: u32) -> Option<String> {
        match k {
            0 => None,
            1 => Some(base.to_owned()),
            k => Some(format!("{base}^{{{k}}}")),
        }
    }
    let mut parts = Vec::new();
    match *m {
        Monomial::Hw { create, annihilate } => {
            match create {
                0 => {}
                1 => parts.push("\\hat{a}^{\\dagger}".to_owned()),
                k => parts.push(format!("\\hat{{a}}^{{\\dagger {k}}}")),
            }
            parts.extend(power("\\hat{a}", annihilate));
        }
        Monomial::Su2 { plus, zero, minus } => {
            parts.extend(power("\\hat{L}_{+}", plus));
            parts.extend(power("\\hat{L}_{0}", zero));
            parts.extend(power("\\hat{L}_{-}", minus));
        }
    }
    if parts.is_empty() {
        "\\hat{1}".into()
    } else {
        parts.join("\\,")
    }
}

/// Render an expression as a LaTeX math fragment.
pub fn expr_to_latex(expr: &OperatorExpr) -> String {
    if expr.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let mut first = true;
    for (mono, scalar) in expr.terms() {
        let word = word_latex(mono);
        match scalar.terms() {
            [single] => {
                let (negative, t) = if term_is_negative(single) {
                    (true, negate_term(single))
                } else {
                    (false, single.clone())
                };
                out.push_str(match (first, negative) {
                    (true, false) => "",
                    (true, true) => "-",
                    (false, false) => " + ",
                    (false, true) => " - ",
                });
                let factors = term_latex_factors(&t);
                if factors.is_empty() {
                    out.push_str(&word);
                } else {
                    out.push_str(&join_latex(&factors));
                    out.push_str("\\,");
                    out.push_str(&word);
                }
            }
            _ => {
                if !first {
                    out.push_str(" + ");
                }
                out.push_str(&format!(
                    "\\left({}\\right)\\,{}",
                    scalar_to_latex(scalar),
                    word
                ));
            }
        }
        first = false;
    }
    out
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    re: String,
    im: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    sqrt2: bool,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: CoeffJson,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, String>,
    powers: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ExprJson {
    algebra: String,
    terms: Vec<TermJson>,
}

fn expr_to_json_struct(expr: &OperatorExpr) -> ExprJson {
    let mut terms = Vec::new();
    for (mono, scalar) in expr.terms() {
        let powers = match *mono {
            Monomial::Hw { create, annihilate } => vec![create, annihilate],
            Monomial::Su2 { plus, zero, minus } => vec![plus, zero, minus],
        };
        for t in scalar.terms() {
            terms.push(TermJson {
                coeff: CoeffJson {
                    re: t.coeff().re.to_string(),
                    im: t.coeff().im.to_string(),
                    sqrt2: t.has_sqrt2(),
                },
                params: t
                    .powers()
                    .iter()
                    .map(|(p, e)| (p.as_str().to_owned(), e.to_string()))
                    .collect(),
                powers: powers.clone(),
            });
        }
    }
    ExprJson {
        algebra: expr.algebra().to_string(),
        terms,
    }
}

/// Lossless JSON value of an expression.
pub fn expr_to_json(expr: &OperatorExpr) -> serde_json::Value {
    serde_json::to_value(expr_to_json_struct(expr)).expect("expression serialization")
}

/// Lossless JSON text of an expression, pretty-printed.
pub fn expr_to_json_string(expr: &OperatorExpr) -> String {
    serde_json::to_string_pretty(&expr_to_json_struct(expr)).expect("expression serialization")
}

fn parse_rational(text: &str, what: &str) -> Result<BigRational, Error> {
    BigRational::from_str(text.trim())
        .map_err(|e| Error::parse(0, format!("invalid rational in {what}: `{text}` ({e})")))
}

fn algebra_from_name(name: &str) -> Result<Algebra, Error> {
    match name {
        "hw" => Ok(Algebra::Hw),
        "su2" => Ok(Algebra::Su2),
        other => Err(Error::parse(0, format!("unknown algebra `{other}`"))),
    }
}

/// Rebuild an expression from its JSON text. Like terms re-merge, so
/// `expr_from_json(expr_to_json_string(e)) == e`.
pub fn expr_from_json(text: &str) -> Result<OperatorExpr, Error> {
    let parsed: ExprJson = serde_json::from_str(text)
        .map_err(|e| Error::parse(0, format!("invalid expression JSON: {e}")))?;
    let algebra = algebra_from_name(&parsed.algebra)?;
    let mut out = OperatorExpr::zero(algebra);
    for t in &parsed.terms {
        let mono = match (algebra, t.powers.as_slice()) {
            (Algebra::Hw, &[c, a]) => Monomial::hw(c, a),
            (Algebra::Su2, &[p, z, m]) => Monomial::su2(p, z, m),
            _ => {
                return Err(Error::parse(
                    0,
                    format!(
                        "power list {:?} does not fit algebra `{algebra}`",
                        t.powers
                    ),
                ))
            }
        };
        let re = parse_rational(&t.coeff.re, "coefficient")?;
        let im = parse_rational(&t.coeff.im, "coefficient")?;
        let mut powers = BTreeMap::new();
        for (name, e) in &t.params {
            powers.insert(pid(name), parse_rational(e, "exponent")?);
        }
        let term = ScalarTerm::new(Coeff::new(re, im), i64::from(t.coeff.sqrt2), powers);
        let scalar = Scalar::from_terms(vec![term]);
        out = out.checked_add(&OperatorExpr::term(mono, scalar))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator::*;
    use crate::algebra::normal_order;
    use crate::param::{CHARGE, MASS};
    use crate::scalar::{int, rat};

    fn coupling() -> Scalar {
        // -1/2 · √2 · e · E · ħ^{1/2} · m^{-1/2} · ω₀^{-1/2}
        let mut s = &Scalar::from_ratio(-1, 2) * &Scalar::sqrt2_pow(1);
        for (name, e) in [
            (CHARGE, int(1)),
            (FIELD, int(1)),
            (HBAR, rat(1, 2)),
            (MASS, rat(-1, 2)),
            (OMEGA0, rat(-1, 2)),
        ] {
            s = &s * &Scalar::param_pow(name, e);
        }
        s
    }

    #[test]
    fn text_renders_exact_products_in_name_order() {
        let e = OperatorExpr::term(Monomial::hw(1, 0), coupling());
        assert_eq!(
            expr_to_text(&e),
            "-1/2 * 2^{1/2} * E * e * hbar^{1/2} * m^{-1/2} * omega0^{-1/2} * a†"
        );
        let c = OperatorExpr::constant(
            Algebra::Hw,
            &Scalar::from_ratio(-1, 2)
                * &(&Scalar::param_pow(MASS, int(-1)) * &Scalar::param_pow(FIELD, int(2))),
        );
        assert_eq!(expr_to_text(&c), "-1/2 * E^2 * m^-1 * 1");
    }

    #[test]
    fn sums_absorb_signs_and_group_multi_term_scalars() {
        let e = &OperatorExpr::from_monomial(Monomial::hw(1, 0))
            - &OperatorExpr::from_monomial(Monomial::hw(0, 1));
        assert_eq!(expr_to_text(&e), "-a + a†");
        let w = OperatorExpr::term(
            Monomial::su2(0, 1, 0),
            &(&Scalar::from_ratio(1, 2) * &Scalar::param_pow(KAPPA, int(-1)))
                - &(&Scalar::from_ratio(1, 8) * &Scalar::param_pow(KAPPA, int(-3))),
        );
        assert_eq!(
            expr_to_text(&w),
            "(-1/8 * kappa^-3 + 1/2 * kappa^-1) * L0"
        );
        assert_eq!(expr_to_text(&OperatorExpr::zero(Algebra::Hw)), "0");
    }

    #[test]
    fn imaginary_coefficients_render_compactly() {
        let e = OperatorExpr::term(Monomial::su2(1, 0, 0), Scalar::i());
        assert_eq!(expr_to_text(&e), "i * L+");
        let e = OperatorExpr::term(Monomial::su2(1, 0, 0), -&Scalar::i());
        assert_eq!(expr_to_text(&e), "-i * L+");
        let e = OperatorExpr::term(
            Monomial::hw(1, 1),
            &Scalar::from_ratio(3, 2) * &Scalar::i(),
        );
        assert_eq!(expr_to_text(&e), "3/2 * i * a† a");
    }

    #[test]
    fn latex_uses_standard_symbols() {
        let e = OperatorExpr::term(Monomial::hw(1, 0), coupling());
        let tex = expr_to_latex(&e);
        assert!(tex.contains("\\sqrt{2}"));
        assert!(tex.contains("\\hbar^{1/2}"));
        assert!(tex.contains("\\mathcal{E}"));
        assert!(tex.contains("\\omega_0^{-1/2}"));
        assert!(tex.contains("\\hat{a}^{\\dagger}"));
        assert!(tex.starts_with("-\\frac{1}{2}"));
        let id = OperatorExpr::identity(Algebra::Su2);
        assert_eq!(expr_to_latex(&id), "\\hat{1}");
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let e = normal_order(
            Algebra::Su2,
            &Scalar::param_pow(HBAR, int(-1)) * &Scalar::from_ratio(-3, 7),
            &[LMinus, LPlus, LZero],
        )
        .unwrap();
        let back = expr_from_json(&expr_to_json_string(&e)).unwrap();
        assert_eq!(back, e);

        let with_root = OperatorExpr::term(
            Monomial::hw(2, 0),
            &coupling() * &Scalar::i(),
        );
        let back = expr_from_json(&expr_to_json_string(&with_root)).unwrap();
        assert_eq!(back, with_root);
    }

    #[test]
    fn json_rejects_mismatched_powers() {
        let text = r#"{"algebra":"su2","terms":[{"coeff":{"re":"1","im":"0"},"powers":[1,0]}]}"#;
        assert!(expr_from_json(text).is_err());
        let text = r#"{"algebra":"nope","terms":[]}"#;
        assert!(expr_from_json(text).is_err());
    }
}
