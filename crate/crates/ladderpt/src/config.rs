//! TOML problem definitions for the command-line interface.
//!
//! A config names either a built-in preset or an explicit problem:
//!
//! ```toml
//! # preset form
//! preset = "stark"          # or "zeeman"
//!
//! # explicit form (mutually exclusive with `preset`)
//! algebra = "hw"            # "hw" | "su2"
//! gap = "hbar * omega0"     # single product, the level spacing of H0
//! v = "e * E * (…)"         # Hermitian, purely off-diagonal perturbation
//! h0_central = "…"          # optional central part of H0 (default 0)
//!
//! max_order = 4             # optional, default 4
//! format = "text"           # optional: "text" | "json" | "latex"
//! states = ["0", "1"]       # optional; su2 labels look like "1:-1"
//!
//! [params]                  # optional numeric bindings
//! hbar = 1.0
//! u = "0.6+0.8i"            # strings may carry complex literals
//! ```
//!
//! Every violated invariant is reported by name: a non-Hermitian `v`, a
//! perturbation with diagonal terms, a gap that is not a single product, an
//! unknown parameter, a state label of the wrong algebra.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::algebra::Algebra;
use crate::engine::PerturbationProblem;
use crate::error::Error;
use crate::models::{stark_problem, zeeman_problem, StateLabel};
use crate::param::{pid, ParamValues, HBAR};
use crate::parse::{parse_complex_number, parse_expr, parse_scalar_sum};
use crate::superops::GapSpec;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Latex,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "latex" => Ok(OutputFormat::Latex),
            other => Err(Error::config(format!(
                "unknown format `{other}` (expected text, json, or latex)"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
            OutputFormat::Latex => "latex",
        })
    }
}

/// A fully validated problem setup ready to run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: PerturbationProblem,
    pub format: OutputFormat,
    pub states: Vec<StateLabel>,
    pub values: ParamValues,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    algebra: Option<String>,
    gap: Option<String>,
    v: Option<String>,
    h0_central: Option<String>,
    max_order: Option<u32>,
    format: Option<String>,
    states: Option<Vec<String>>,
    #[serde(default)]
    params: BTreeMap<String, toml::Value>,
}

pub const DEFAULT_ORDER: u32 = 4;

/// Build one of the built-in exactly solvable problems.
pub fn preset_problem(name: &str, max_order: u32) -> Result<PerturbationProblem, Error> {
    match name {
        "stark" => Ok(stark_problem(max_order)),
        "zeeman" => Ok(zeeman_problem(max_order)),
        other => Err(Error::config(format!(
            "unknown preset `{other}` (expected stark or zeeman)"
        ))),
    }
}

fn algebra_from_name(name: &str) -> Result<Algebra, Error> {
    match name {
        "hw" => Ok(Algebra::Hw),
        "su2" => Ok(Algebra::Su2),
        other => Err(Error::config(format!(
            "unknown algebra `{other}` (expected hw or su2)"
        ))),
    }
}

/// Parameter names a problem can consume: everything mentioned by its gap,
/// central part, or perturbation, plus `hbar` (the rewrite rules use it).
pub fn allowed_params(problem: &PerturbationProblem) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    names.insert(HBAR.to_owned());
    for p in problem.gap().gap().params() {
        names.insert(p.as_str().to_owned());
    }
    for p in problem.h0_central().params() {
        names.insert(p.as_str().to_owned());
    }
    for (_, s) in problem.v().terms() {
        for p in s.params() {
            names.insert(p.as_str().to_owned());
        }
    }
    names
}

fn toml_value_to_complex(key: &str, value: &toml::Value) -> Result<num_complex::Complex64, Error> {
    match value {
        toml::Value::Integer(i) => Ok(num_complex::Complex64::new(*i as f64, 0.0)),
        toml::Value::Float(f) => Ok(num_complex::Complex64::new(*f, 0.0)),
        toml::Value::String(s) => parse_complex_number(s)
            .map_err(|e| Error::config(format!("parameter `{key}`: {e}"))),
        other => Err(Error::config(format!(
            "parameter `{key}` must be a number or a string literal, got {}",
            other.type_str()
        ))),
    }
}

fn check_param_names(
    values: &ParamValues,
    allowed: &BTreeSet<String>,
) -> Result<(), Error> {
    for (p, _) in values.iter() {
        if !allowed.contains(p.as_str()) {
            return Err(Error::config(format!(
                "unknown parameter `{}`; this problem uses: {}",
                p.as_str(),
                allowed.iter().cloned().collect::<Vec<_>>().join(", ")
            )));
        }
    }
    values.validate().map_err(Error::config)
}

/// Parse `key=value,key=value` numeric bindings (CLI `--params`).
pub fn parse_param_list(text: &str) -> Result<ParamValues, Error> {
    let mut values = ParamValues::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (key, value) = piece.split_once('=').ok_or_else(|| {
            Error::config(format!("expected key=value in `--params`, got `{piece}`"))
        })?;
        let z = parse_complex_number(value)
            .map_err(|e| Error::config(format!("parameter `{}`: {e}", key.trim())))?;
        values.insert(pid(key.trim()), z);
    }
    Ok(values)
}

/// Parse comma-separated state labels for the given algebra.
pub fn parse_state_list(text: &str, algebra: Algebra) -> Result<Vec<StateLabel>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| StateLabel::parse(s, algebra))
        .collect()
}

/// Parse and validate a TOML config. `order_override` (the CLI `--order`
/// flag) wins over the file's `max_order`.
pub fn parse_config(text: &str, order_override: Option<u32>) -> Result<RunConfig, Error> {
    let raw: RawConfig = toml::from_str(text)
        .map_err(|e| Error::config(format!("TOML error: {e}")))?;
    let order = order_override
        .or(raw.max_order)
        .unwrap_or(DEFAULT_ORDER);

    let problem = match &raw.preset {
        Some(name) => {
            for (field, present) in [
                ("algebra", raw.algebra.is_some()),
                ("gap", raw.gap.is_some()),
                ("v", raw.v.is_some()),
                ("h0_central", raw.h0_central.is_some()),
            ] {
                if present {
                    return Err(Error::config(format!(
                        "`{field}` cannot be combined with `preset`"
                    )));
                }
            }
            preset_problem(name, order)?
        }
        None => {
            let algebra_name = raw
                .algebra
                .as_deref()
                .ok_or_else(|| Error::config("missing `algebra` (or use `preset`)"))?;
            let algebra = algebra_from_name(algebra_name)?;
            let gap_text = raw
                .gap
                .as_deref()
                .ok_or_else(|| Error::config("missing `gap`"))?;
            let gap = GapSpec::new(algebra, parse_scalar_sum(gap_text)?)?;
            let v_text = raw
                .v
                .as_deref()
                .ok_or_else(|| Error::config("missing `v`"))?;
            let v = parse_expr(algebra, v_text)?;
            let h0_central = match raw.h0_central.as_deref() {
                Some(t) => parse_scalar_sum(t)?,
                None => crate::scalar::Scalar::zero(),
            };
            PerturbationProblem::new(gap, h0_central, v, order)?
        }
    };

    let format = match raw.format.as_deref() {
        Some(f) => f.parse()?,
        None => OutputFormat::Text,
    };

    let states = match &raw.states {
        Some(labels) => labels
            .iter()
            .map(|s| StateLabel::parse(s, problem.algebra()))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };

    let mut values = ParamValues::new();
    for (key, value) in &raw.params {
        values.insert(pid(key), toml_value_to_complex(key, value)?);
    }
    check_param_names(&values, &allowed_params(&problem))?;

    Ok(RunConfig {
        problem,
        format,
        states,
        values,
    })
}

/// Assemble a run setup straight from CLI flags (no config file).
pub fn config_from_preset(
    preset: &str,
    order: Option<u32>,
    format: Option<OutputFormat>,
    params: Option<&str>,
    states: Option<&str>,
) -> Result<RunConfig, Error> {
    let problem = preset_problem(preset, order.unwrap_or(DEFAULT_ORDER))?;
    let values = match params {
        Some(t) => parse_param_list(t)?,
        None => ParamValues::new(),
    };
    check_param_names(&values, &allowed_params(&problem))?;
    let states = match states {
        Some(t) => parse_state_list(t, problem.algebra())?,
        None => Vec::new(),
    };
    Ok(RunConfig {
        problem,
        format: format.unwrap_or_default(),
        states,
        values,
    })
}

/// Apply CLI overrides on top of a parsed config file.
pub fn apply_overrides(
    mut config: RunConfig,
    format: Option<OutputFormat>,
    params: Option<&str>,
    states: Option<&str>,
) -> Result<RunConfig, Error> {
    if let Some(f) = format {
        config.format = f;
    }
    if let Some(t) = params {
        let extra = parse_param_list(t)?;
        for (p, z) in extra.iter() {
            config.values.insert(p.clone(), *z);
        }
        check_param_names(&config.values, &allowed_params(&config.problem))?;
    }
    if let Some(t) = states {
        config.states = parse_state_list(t, config.problem.algebra())?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_config_round() {
        let cfg = parse_config("preset = \"stark\"\nmax_order = 6\n", None).unwrap();
        assert_eq!(cfg.problem.max_order(), 6);
        assert_eq!(cfg.problem.algebra(), Algebra::Hw);
        assert_eq!(cfg.format, OutputFormat::Text);
        let cfg = parse_config("preset = \"stark\"", Some(2)).unwrap();
        assert_eq!(cfg.problem.max_order(), 2);
    }

    #[test]
    fn explicit_config_builds_a_problem() {
        let text = r#"
algebra = "su2"
gap = "hbar * kappa"
v = "1/2 * u * L+ + 1/2 * u_conj * L-"
h0_central = "eps_R"
max_order = 3
format = "json"
states = ["1:1", "1:0", "1:-1"]

[params]
hbar = 1.0
kappa = 5.0
u = "0.6+0.8i"
"#;
        let cfg = parse_config(text, None).unwrap();
        assert_eq!(cfg.problem.algebra(), Algebra::Su2);
        assert_eq!(cfg.problem.max_order(), 3);
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.states.len(), 3);
        assert!(cfg.values.contains(&pid("kappa")));
    }

    #[test]
    fn violated_invariants_are_named() {
        let non_hermitian = parse_config(
            "algebra = \"su2\"\ngap = \"hbar * kappa\"\nv = \"1 * L+\"\n",
            None,
        )
        .unwrap_err();
        assert_eq!(non_hermitian, Error::NotHermitian);

        let diagonal = parse_config(
            "algebra = \"su2\"\ngap = \"hbar * kappa\"\nv = \"L+ + L- + L0\"\n",
            None,
        )
        .unwrap_err();
        assert_eq!(diagonal, Error::DiagonalPerturbation);

        let bad_gap = parse_config(
            "algebra = \"hw\"\ngap = \"hbar + omega0\"\nv = \"a† + a\"\n",
            None,
        )
        .unwrap_err();
        assert_eq!(bad_gap, Error::InvalidGap);

        let unknown = parse_config(
            "preset = \"stark\"\n[params]\nzeta = 1.0\n",
            None,
        )
        .unwrap_err();
        assert!(matches!(unknown, Error::Config(ref m) if m.contains("zeta")));

        let mixed = parse_config("preset = \"stark\"\ngap = \"hbar\"\n", None).unwrap_err();
        assert!(matches!(mixed, Error::Config(ref m) if m.contains("preset")));
    }

    #[test]
    fn param_and_state_lists() {
        let v = parse_param_list("hbar=1, kappa=2.5, u=0.6+0.8i").unwrap();
        assert_eq!(v.get(&pid("kappa")), Some(num_complex::Complex64::new(2.5, 0.0)));
        assert_eq!(v.get(&pid("u")), Some(num_complex::Complex64::new(0.6, 0.8)));
        let s = parse_state_list("1:1, 1:0, 1:-1", Algebra::Su2).unwrap();
        assert_eq!(s.len(), 3);
        assert!(parse_state_list("3", Algebra::Su2).is_err());
    }
}
