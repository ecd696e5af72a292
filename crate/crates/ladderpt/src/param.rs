//! Symbolic parameter names and their numeric bindings.
//!
//! Parameters are opaque commuting symbols (`hbar`, `omega0`, `kappa`, ...).
//! The single exception is the unit-modulus pair `u` / `u_conj`: the two are
//! independent symbols whose product rewrites to 1 and which swap under
//! complex conjugation.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::Error;

/// Reduced Planck constant.
pub const HBAR: &str = "hbar";
/// Oscillator mass.
pub const MASS: &str = "m";
/// Oscillator frequency.
pub const OMEGA0: &str = "omega0";
/// Elementary charge.
pub const CHARGE: &str = "e";
/// Static field strength.
pub const FIELD: &str = "E";
/// Level-splitting frequency of the su(2) ladder.
pub const KAPPA: &str = "kappa";
/// Unit-modulus phase of the transverse coupling.
pub const UNIT_PHASE: &str = "u";
/// Conjugate phase; `u * u_conj` reduces to 1.
pub const UNIT_PHASE_CONJ: &str = "u_conj";
/// Radial energy, carried as an opaque central constant.
pub const EPS_R: &str = "eps_R";
/// Radial expectation of the centrifugal coupling.
pub const ALPHA_R2: &str = "alpha_r2";
/// Central Casimir eigenvalue symbol; bound to l(l+1)·hbar² per state.
pub const L_SQUARED: &str = "L2";

/// Interned name of one symbolic parameter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ParamId(String);

impl ParamId {
    pub fn new(name: impl Into<String>) -> Self {
        ParamId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Partner under complex conjugation: `u` and `u_conj` swap, every other
    /// parameter is real and maps to itself.
    pub fn conjugate(&self) -> ParamId {
        if self.0 == UNIT_PHASE {
            ParamId::new(UNIT_PHASE_CONJ)
        } else if self.0 == UNIT_PHASE_CONJ {
            ParamId::new(UNIT_PHASE)
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ParamId {
    fn from(s: &str) -> Self {
        ParamId::new(s)
    }
}

/// Shorthand constructor used throughout the crate.
pub fn pid(name: &str) -> ParamId {
    ParamId::new(name)
}

/// Numeric bindings for parameters, used by the matrix oracle and spectrum
/// evaluation. Values are complex so the unit phase can be bound directly.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamValues {
    values: BTreeMap<ParamId, Complex64>,
}

impl ParamValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: ParamId, value: Complex64) {
        self.values.insert(id, value);
    }

    pub fn insert_real(&mut self, name: &str, value: f64) {
        self.insert(pid(name), Complex64::new(value, 0.0));
    }

    pub fn with_real(mut self, name: &str, value: f64) -> Self {
        self.insert_real(name, value);
        self
    }

    pub fn with_complex(mut self, name: &str, value: Complex64) -> Self {
        self.insert(pid(name), value);
        self
    }

    /// Look a parameter up. `u_conj` falls back to the conjugate of `u` (and
    /// vice versa) so the pair only needs one binding.
    pub fn get(&self, id: &ParamId) -> Option<Complex64> {
        if let Some(v) = self.values.get(id) {
            return Some(*v);
        }
        let partner = id.conjugate();
        if partner != *id {
            return self.values.get(&partner).map(|v| v.conj());
        }
        None
    }

    pub fn require(&self, id: &ParamId) -> Result<Complex64, Error> {
        self.get(id)
            .ok_or_else(|| Error::MissingParameter(id.as_str().to_owned()))
    }

    pub fn contains(&self, id: &ParamId) -> bool {
        self.get(id).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ParamId, &Complex64)> {
        self.values.iter()
    }

    /// Physical sanity checks on well-known names: positive real scales and a
    /// unit-modulus phase. Unknown names are not judged here.
    pub fn validate(&self) -> Result<(), String> {
        for name in [HBAR, MASS, OMEGA0, KAPPA] {
            if let Some(v) = self.values.get(&pid(name)) {
                if v.im != 0.0 || v.re <= 0.0 {
                    return Err(format!("parameter `{name}` must be a positive real, got {v}"));
                }
            }
        }
        for name in [UNIT_PHASE, UNIT_PHASE_CONJ] {
            if let Some(v) = self.values.get(&pid(name)) {
                if (v.norm() - 1.0).abs() > 1e-9 {
                    return Err(format!("parameter `{name}` must have unit modulus, got |{v}| = {}", v.norm()));
                }
            }
        }
        Ok(())
    }
}

impl FromIterator<(ParamId, Complex64)> for ParamValues {
    fn from_iter<T: IntoIterator<Item = (ParamId, Complex64)>>(iter: T) -> Self {
        ParamValues {
            values: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_phase_pair_swaps_under_conjugation() {
        assert_eq!(pid(UNIT_PHASE).conjugate(), pid(UNIT_PHASE_CONJ));
        assert_eq!(pid(UNIT_PHASE_CONJ).conjugate(), pid(UNIT_PHASE));
        assert_eq!(pid(HBAR).conjugate(), pid(HBAR));
    }

    #[test]
    fn u_conj_value_falls_back_to_conjugate() {
        let vals = ParamValues::new().with_complex(UNIT_PHASE, Complex64::new(0.6, 0.8));
        let uc = vals.get(&pid(UNIT_PHASE_CONJ)).unwrap();
        assert_eq!(uc, Complex64::new(0.6, -0.8));
    }

    #[test]
    fn validation_rejects_nonpositive_scales() {
        let vals = ParamValues::new().with_real(OMEGA0, -1.0);
        assert!(vals.validate().is_err());
    }
}
