//! Parser for the plain-text expression grammar used by configs and the CLI.
//!
//! An expression is a sum of products. Each product is a `*`-separated list
//! of factors; a factor is itself a whitespace-separated run of atoms, so
//! rendered words like `a†^2 a` read back directly. Atoms are
//!
//! * exact numbers: `3`, `-1/2`, `0.25` (decimals become exact ratios), `i`;
//! * powers of two: `2^{1/2}`, `2^-1` — half-integer exponents keep an exact
//!   `√2` factor;
//! * parameters with optional exponents: `kappa`, `m^-1`, `hbar^{1/2}`;
//! * generators: `a†` (alias `ad`), `a`, `L+`, `L0`, `L-`, optionally
//!   raised to a nonnegative integer power.
//!
//! A `-` at the start of a summand negates it; `^` exponents may be braced
//! or bare. Errors carry the byte offset of the offending atom.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::str::FromStr;

use crate::algebra::{normal_order, Algebra, Generator, OperatorExpr};
use crate::error::Error;
use crate::scalar::{pow_rational, Scalar};

fn generator_token(s: &str) -> Option<Generator> {
    match s {
        "a†" | "ad" => Some(Generator::Create),
        "a" => Some(Generator::Annihilate),
        "L+" => Some(Generator::LPlus),
        "L0" => Some(Generator::LZero),
        "L-" => Some(Generator::LMinus),
        _ => None,
    }
}

fn is_param_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `"0.25"` → 1/4, `"-3"` → −3, `"3/4"` → 3/4.
fn parse_rational_text(s: &str, offset: usize) -> Result<BigRational, Error> {
    let t = s.trim();
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let (negative, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int_part),
        };
        let digits_ok = |d: &str| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(int_digits) || !digits_ok(frac_part) {
            return Err(Error::parse(offset, format!("invalid number `{t}`")));
        }
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let whole: BigInt = int_digits.parse().expect("checked digits");
        let frac: BigInt = frac_part.parse().expect("checked digits");
        let num = whole * &scale + frac;
        let r = BigRational::new(num, scale);
        Ok(if negative { -r } else { r })
    } else {
        BigRational::from_str(t)
            .map_err(|_| Error::parse(offset, format!("invalid number `{t}`")))
    }
}

fn parse_exponent(s: &str, offset: usize) -> Result<BigRational, Error> {
    let t = s.trim();
    let inner = match (t.strip_prefix('{'), t.strip_suffix('}')) {
        (Some(rest), Some(_)) => &rest[..rest.len() - 1],
        (None, None) => t,
        _ => return Err(Error::parse(offset, format!("unbalanced braces in exponent `{t}`"))),
    };
    parse_rational_text(inner, offset)
}

enum Atom {
    Number(Scalar),
    Word(Vec<Generator>),
}

fn parse_atom(atom: &str, offset: usize) -> Result<Atom, Error> {
    if atom == "i" {
        return Ok(Atom::Number(Scalar::i()));
    }
    if let Some(g) = generator_token(atom) {
        return Ok(Atom::Word(vec![g]));
    }
    // A parenthesized factor is a scalar sub-sum, e.g. `(1+1i)` or
    // `(1/2 * kappa^-1 - 1/8 * kappa^-3)`.
    if let Some(inner) = atom.strip_prefix('(') {
        let inner = inner.strip_suffix(')').ok_or_else(|| {
            Error::parse(offset, format!("unbalanced parentheses in `{atom}`"))
        })?;
        return Ok(Atom::Number(parse_scalar_sum_at(inner, offset + 1)?));
    }
    // An imaginary literal like `1i` or `3/4i`.
    if let Some(body) = atom.strip_suffix('i') {
        if body.bytes().next().is_some_and(|b| b.is_ascii_digit() || b == b'-')
            && !body.contains('^')
        {
            let r = parse_rational_text(body, offset)?;
            return Ok(Atom::Number(&Scalar::from_rational(r) * &Scalar::i()));
        }
    }
    if let Some(caret) = atom.find('^') {
        let (base, exp) = atom.split_at(caret);
        let e = parse_exponent(&exp[1..], offset + caret + 1)?;
        if let Some(g) = generator_token(base) {
            let k = if e.is_integer() { e.to_integer().to_usize() } else { None };
            let k = k.ok_or_else(|| {
                Error::parse(
                    offset,
                    format!("generator power must be a nonnegative integer, got `{e}`"),
                )
            })?;
            return Ok(Atom::Word(vec![g; k]));
        }
        if base.bytes().next().is_some_and(|b| b.is_ascii_digit() || b == b'-') {
            let b = parse_rational_text(base, offset)?;
            if e.is_integer() {
                let k = e.to_integer().to_i64().ok_or_else(|| {
                    Error::parse(offset, "exponent out of range".to_owned())
                })?;
                if b.is_zero() && k < 0 {
                    return Err(Error::parse(offset, "zero to a negative power"));
                }
                return Ok(Atom::Number(Scalar::from_rational(pow_rational(&b, k))));
            }
            // Only 2^{k/2} stays exact, as an explicit √2 factor.
            let doubled = &e + &e;
            if b == BigRational::from_integer(2.into()) && doubled.is_integer() {
                let k = doubled.to_integer().to_i64().ok_or_else(|| {
                    Error::parse(offset, "exponent out of range".to_owned())
                })?;
                return Ok(Atom::Number(Scalar::sqrt2_pow(k)));
            }
            return Err(Error::parse(
                offset,
                format!("irrational power `{base}^{e}` has no exact form"),
            ));
        }
        if is_param_name(base) {
            return Ok(Atom::Number(Scalar::param_pow(base, e)));
        }
        return Err(Error::parse(offset, format!("unrecognized base `{base}`")));
    }
    if atom.bytes().next().is_some_and(|b| b.is_ascii_digit() || b == b'-') {
        return Ok(Atom::Number(Scalar::from_rational(parse_rational_text(
            atom, offset,
        )?)));
    }
    if is_param_name(atom) {
        return Ok(Atom::Number(Scalar::param(atom)));
    }
    Err(Error::parse(offset, format!("unrecognized token `{atom}`")))
}

/// Parse one product into its scalar prefactor and generator word, in the
/// order written.
pub fn parse_product(text: &str) -> Result<(Scalar, Vec<Generator>), Error> {
    parse_product_at(text, 0)
}

fn parse_product_at(text: &str, base: usize) -> Result<(Scalar, Vec<Generator>), Error> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::parse(base, "empty product"));
    }
    let mut offset = base + (text.len() - text.trim_start().len());
    let mut scalar = Scalar::one();
    let mut rest = trimmed;
    if let Some(r) = trimmed.strip_prefix('-') {
        // a leading sign negates the whole product unless it directly opens
        // a numeric literal like -1/2
        if !r.bytes().next().is_some_and(|b| b.is_ascii_digit()) {
            scalar = -scalar;
            offset += 1;
            rest = r;
        }
    }
    let mut word = Vec::new();
    let mut seen_any = false;
    for (piece_start, piece) in split_factors(rest, offset) {
        if piece.trim().is_empty() {
            return Err(Error::parse(piece_start, "empty factor"));
        }
        for (atom_off, atom) in split_atoms(piece, piece_start) {
            match parse_atom(atom, atom_off)? {
                Atom::Number(s) => scalar = &scalar * &s,
                Atom::Word(gens) => word.extend(gens),
            }
            seen_any = true;
        }
    }
    if !seen_any {
        return Err(Error::parse(base, "empty product"));
    }
    Ok((scalar, word))
}

/// Split a product at `*` signs outside parentheses and braces.
fn split_factors(text: &str, base: usize) -> Vec<(usize, &str)> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            '*' if depth == 0 => {
                parts.push((base + start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((base + start, &text[start..]));
    parts
}

/// Split one factor into whitespace-separated atoms, keeping parenthesized
/// groups (which may contain spaces) intact.
fn split_atoms(text: &str, base: usize) -> Vec<(usize, &str)> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if depth == 0 && c.is_whitespace() {
            if let Some(s) = start.take() {
                parts.push((base + s, &text[s..i]));
            }
            continue;
        }
        if start.is_none() {
            start = Some(i);
        }
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
    }
    if let Some(s) = start {
        parts.push((base + s, &text[s..]));
    }
    parts
}

/// Split a sum at top-level `+`/`-`, keeping each summand's sign and byte
/// offset. A sign right after `^` or `*` binds to the following factor, and
/// one immediately after `L` is part of a ladder token (`L+`, `L-`).
fn split_sum(text: &str) -> Result<Vec<(bool, usize, &str)>, Error> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut sign = false;
    let mut prev_char: Option<char> = None;
    let mut prev_significant: Option<char> = None;
    let mut leading = true;
    for (i, c) in text.char_indices() {
        match c {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                let ladder_token = prev_char == Some('L');
                let binds_right = matches!(prev_significant, Some('^') | Some('*'));
                if leading {
                    sign = c == '-';
                    start = i + 1;
                    leading = false;
                    prev_char = Some(c);
                    prev_significant = Some(c);
                    continue;
                }
                if !ladder_token && !binds_right {
                    let piece = &text[start..i];
                    if piece.trim().is_empty() {
                        return Err(Error::parse(start, "empty summand"));
                    }
                    parts.push((sign, start, piece));
                    sign = c == '-';
                    start = i + 1;
                    prev_char = Some(c);
                    prev_significant = None;
                    continue;
                }
            }
            _ => {}
        }
        prev_char = Some(c);
        if !c.is_whitespace() {
            prev_significant = Some(c);
            leading = false;
        }
    }
    if depth != 0 {
        return Err(Error::parse(0, "unbalanced braces"));
    }
    let piece = &text[start..];
    if piece.trim().is_empty() {
        return Err(Error::parse(start, "empty summand"));
    }
    parts.push((sign, start, piece));
    Ok(parts)
}

/// Parse a sum of products into a canonical operator expression.
pub fn parse_expr(algebra: Algebra, text: &str) -> Result<OperatorExpr, Error> {
    let mut out = OperatorExpr::zero(algebra);
    for (negative, offset, piece) in split_sum(text)? {
        let (mut scalar, word) = parse_product_at(piece, offset)?;
        if negative {
            scalar = -scalar;
        }
        let term = normal_order(algebra, scalar, &word)?;
        out = out.checked_add(&term)?;
    }
    Ok(out)
}

/// Parse a sum of purely scalar products (no generators allowed).
pub fn parse_scalar_sum(text: &str) -> Result<Scalar, Error> {
    parse_scalar_sum_at(text, 0)
}

fn parse_scalar_sum_at(text: &str, base: usize) -> Result<Scalar, Error> {
    let mut out = Scalar::zero();
    for (negative, offset, piece) in split_sum(text)? {
        let (scalar, word) = parse_product_at(piece, base + offset)?;
        if let Some(g) = word.first() {
            return Err(Error::parse(
                offset,
                format!("operator `{}` where a scalar was expected", g.token()),
            ));
        }
        out = if negative { &out - &scalar } else { &out + &scalar };
    }
    Ok(out)
}

/// Parse a numeric literal like `1.5`, `-2e-3`, `0.6+0.8i`, or `1i`.
pub fn parse_complex_number(text: &str) -> Result<Complex64, Error> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::parse(0, "empty number"));
    }
    let bytes = t.as_bytes();
    let mut split_at = None;
    for i in 1..bytes.len() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split_at = Some(i);
        }
    }
    let parse_f64 = |s: &str| -> Result<f64, Error> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::parse(0, format!("invalid number `{s}`")))
    };
    let parse_imag = |s: &str| -> Result<f64, Error> {
        let body = s
            .trim()
            .strip_suffix('i')
            .ok_or_else(|| Error::parse(0, format!("expected imaginary part in `{s}`")))?;
        match body.trim() {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => parse_f64(other),
        }
    };
    match split_at {
        Some(i) => {
            let re = parse_f64(&t[..i])?;
            let sign = if bytes[i] == b'-' { -1.0 } else { 1.0 };
            let im = parse_imag(&t[i + 1..])?;
            Ok(Complex64::new(re, sign * im))
        }
        None => {
            if t.ends_with('i') {
                Ok(Complex64::new(0.0, parse_imag(t)?))
            } else {
                Ok(Complex64::new(parse_f64(t)?, 0.0))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{HBAR, KAPPA, OMEGA0, UNIT_PHASE, UNIT_PHASE_CONJ};
    use crate::render::expr_to_text;
    use crate::scalar::{int, rat};

    #[test]
    fn products_parse_exactly() {
        let (s, w) = parse_product("1/2 * hbar * omega0").unwrap();
        let expected = &(&Scalar::from_ratio(1, 2) * &Scalar::param(HBAR)) * &Scalar::param(OMEGA0);
        assert_eq!(s, expected);
        assert!(w.is_empty());

        let (s, w) = parse_product("-1/2 * 2^{1/2} * hbar^{1/2} * a†").unwrap();
        assert_eq!(w, vec![Generator::Create]);
        let expected = &(&Scalar::from_ratio(-1, 2) * &Scalar::sqrt2_pow(1))
            * &Scalar::param_pow(HBAR, rat(1, 2));
        assert_eq!(s, expected);

        let (_, w) = parse_product("a†^2 a").unwrap();
        assert_eq!(
            w,
            vec![Generator::Create, Generator::Create, Generator::Annihilate]
        );
    }

    #[test]
    fn decimals_become_exact_ratios() {
        let (s, _) = parse_product("0.25 * kappa").unwrap();
        assert_eq!(
            s,
            &Scalar::from_ratio(1, 4) * &Scalar::param(KAPPA)
        );
    }

    #[test]
    fn grouped_scalars_and_imaginary_literals() {
        let e = parse_expr(Algebra::Su2, "(1/2 * kappa^-1 - 1/8 * kappa^-3) * L0").unwrap();
        let coeff = &(&Scalar::from_ratio(1, 2) * &Scalar::param_pow(KAPPA, int(-1)))
            - &(&Scalar::from_ratio(1, 8) * &Scalar::param_pow(KAPPA, int(-3)));
        assert_eq!(
            e,
            OperatorExpr::term(crate::algebra::Monomial::su2(0, 1, 0), coeff)
        );

        let e = parse_expr(Algebra::Hw, "(1+1i) * a").unwrap();
        let coeff = &Scalar::one() + &Scalar::i();
        assert_eq!(
            e,
            OperatorExpr::term(crate::algebra::Monomial::hw(0, 1), coeff)
        );

        let (s, w) = parse_product("3/4i * a†").unwrap();
        assert_eq!(w, vec![Generator::Create]);
        assert_eq!(s, &Scalar::from_ratio(3, 4) * &Scalar::i());
    }

    #[test]
    fn sums_respect_exponent_minus_signs() {
        let s = parse_scalar_sum("1/2 * kappa^-1 - 1/8 * kappa^-3").unwrap();
        let expected = &(&Scalar::from_ratio(1, 2) * &Scalar::param_pow(KAPPA, int(-1)))
            - &(&Scalar::from_ratio(1, 8) * &Scalar::param_pow(KAPPA, int(-3)));
        assert_eq!(s, expected);

        let s = parse_scalar_sum("-kappa + 2^{-1/2}").unwrap();
        let expected = &(-&Scalar::param(KAPPA)) + &Scalar::sqrt2_pow(-1);
        assert_eq!(s, expected);
    }

    #[test]
    fn operator_sums_normal_order_on_the_way_in() {
        let e = parse_expr(Algebra::Hw, "a * a†").unwrap();
        assert_eq!(expr_to_text(&e), "1 + a† a");
        let e = parse_expr(
            Algebra::Su2,
            "1/2 * u * L+ + 1/2 * u_conj * L-",
        )
        .unwrap();
        let half = Scalar::from_ratio(1, 2);
        let expected = &OperatorExpr::term(
            crate::algebra::Monomial::su2(1, 0, 0),
            &half * &Scalar::param(UNIT_PHASE),
        ) + &OperatorExpr::term(
            crate::algebra::Monomial::su2(0, 0, 1),
            &half * &Scalar::param(UNIT_PHASE_CONJ),
        );
        assert_eq!(e, expected);
        assert!(e.is_hermitian());
    }

    #[test]
    fn rendered_text_reads_back() {
        let e = parse_expr(Algebra::Su2, "i * hbar^{1/2} * L+^2 L0 - 3/4 * L-").unwrap();
        let round = parse_expr(Algebra::Su2, &expr_to_text(&e)).unwrap();
        assert_eq!(round, e);
    }

    #[test]
    fn errors_carry_offsets_and_reasons() {
        let err = parse_expr(Algebra::Hw, "a† + L+").unwrap_err();
        assert!(matches!(err, Error::ForeignGenerator("L+", Algebra::Hw)));
        let err = parse_product("3 * what?").unwrap_err();
        match err {
            Error::Parse { offset, .. } => assert_eq!(offset, 4),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_scalar_sum("kappa * L0").is_err());
        assert!(parse_product("2^{1/3}").is_err());
        assert!(parse_product("").is_err());
    }

    #[test]
    fn complex_literals() {
        let z = parse_complex_number("0.6+0.8i").unwrap();
        assert_eq!(z, Complex64::new(0.6, 0.8));
        let z = parse_complex_number("-2e-3").unwrap();
        assert_eq!(z, Complex64::new(-0.002, 0.0));
        let z = parse_complex_number("-i").unwrap();
        assert_eq!(z, Complex64::new(0.0, -1.0));
        let z = parse_complex_number("1.5").unwrap();
        assert_eq!(z, Complex64::new(1.5, 0.0));
        assert!(parse_complex_number("0.6+").is_err());
    }
}
