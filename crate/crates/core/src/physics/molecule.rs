use serde::{Deserialize, Serialize};

use super::constants::{AVOGADRO, C};
use crate::error::{Error, Result};

/// Handedness of a molecule, carried as the sign of its rotatory strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Enantiomer {
    /// Positive rotatory strength, e.g. (R)-3-(eq)-MCP.
    Positive,
    /// Negative rotatory strength, e.g. (S)-3-(eq)-MCP.
    Negative,
}

impl Enantiomer {
    pub fn sign(self) -> f64 {
        match self {
            Enantiomer::Positive => 1.0,
            Enantiomer::Negative => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Enantiomer::Positive => Enantiomer::Negative,
            Enantiomer::Negative => Enantiomer::Positive,
        }
    }
}

/// A two-level chiral molecule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeSpec {
    pub name: String,
    /// |d01|, C m.
    pub dipole_d01: f64,
    /// Signed R01/c, C^2 m^2.
    pub rotatory_r01_over_c: f64,
    /// Transition angular frequency, rad/s.
    pub omega10: f64,
    /// kg.
    pub mass: f64,
}

impl MoleculeSpec {
    pub fn new(
        name: impl Into<String>,
        dipole_d01: f64,
        rotatory_r01_over_c: f64,
        omega10: f64,
        mass: f64,
    ) -> Result<Self> {
        let m = MoleculeSpec {
            name: name.into(),
            dipole_d01,
            rotatory_r01_over_c,
            omega10,
            mass,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dipole_d01 >= 0.0 && self.dipole_d01.is_finite()) {
            return Err(Error::invalid("dipole_d01", "must be finite and >= 0"));
        }
        if !self.rotatory_r01_over_c.is_finite() {
            return Err(Error::invalid("rotatory_r01_over_c", "must be finite"));
        }
        if !(self.omega10 > 0.0 && self.omega10.is_finite()) {
            return Err(Error::invalid("omega10", "must be finite and > 0"));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::invalid("mass", "must be finite and > 0"));
        }
        Ok(())
    }

    /// 3-methyl-cyclopentanone with an equatorial methyl group,
    /// S0 -> S1 electronic transition.
    pub fn three_mcp_eq(enantiomer: Enantiomer) -> Self {
        MoleculeSpec {
            name: "3MCP-eq".into(),
            dipole_d01: 2.44e-31,
            rotatory_r01_over_c: enantiomer.sign() * 8.07e-63,
            omega10: 6.44e15,
            mass: 1.63e-25,
        }
    }

    /// Propylene oxide, vibrational transition. The (R) form has positive
    /// rotatory strength.
    pub fn propylene_oxide(enantiomer: Enantiomer) -> Self {
        // C3H6O, 58.08 g/mol
        MoleculeSpec {
            name: "propylene-oxide".into(),
            dipole_d01: 8.82e-32,
            rotatory_r01_over_c: enantiomer.sign() * 3.89e-67,
            omega10: 3.8e13,
            mass: 58.08e-3 / AVOGADRO,
        }
    }

    /// Look up a built-in preset by name.
    pub fn preset(name: &str, enantiomer: Enantiomer) -> Option<Self> {
        match name {
            "3MCP-eq" => Some(Self::three_mcp_eq(enantiomer)),
            "propylene-oxide" => Some(Self::propylene_oxide(enantiomer)),
            _ => None,
        }
    }

    pub const PRESET_NAMES: [&'static str; 2] = ["3MCP-eq", "propylene-oxide"];

    /// R01 itself, C^2 m^3 / s.
    pub fn rotatory_r01(&self) -> f64 {
        self.rotatory_r01_over_c * C
    }

    /// Transition wavelength 2 pi c / omega10, m.
    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI * C / self.omega10
    }

    pub fn enantiomer(&self) -> Enantiomer {
        if self.rotatory_r01_over_c < 0.0 {
            Enantiomer::Negative
        } else {
            Enantiomer::Positive
        }
    }

    /// The same molecule with the rotatory strength negated.
    pub fn mirror_image(&self) -> Self {
        MoleculeSpec {
            rotatory_r01_over_c: -self.rotatory_r01_over_c,
            ..self.clone()
        }
    }

    pub fn with_enantiomer(&self, e: Enantiomer) -> Self {
        MoleculeSpec {
            rotatory_r01_over_c: e.sign() * self.rotatory_r01_over_c.abs(),
            ..self.clone()
        }
    }
}
