//! JSON system files: coefficient field, variables, equations, and the
//! specialization, all as strings in the shared expression grammar.
//!
//! Validation pipeline: build the field, parse the equations, compute the
//! order matrix, then check the specialization solves the system.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::dfield::DifferenceField;
use crate::error::{Error, Result};
use crate::parse::{parse_equation, parse_field_element};
use crate::rank::{validate_specialization, Specialization};
use crate::sigma::{SigmaPolynomial, SystemSpec};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDescriptor {
    pub generators: Vec<String>,
    #[serde(default)]
    pub sigma_images: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecializationFile {
    /// Defaults to the coefficient field when omitted.
    #[serde(default)]
    pub target_field: Option<FieldDescriptor>,
    pub assign: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    /// Defaults to Q with sigma = id.
    #[serde(default)]
    pub coefficient_field: Option<FieldDescriptor>,
    pub variables: Vec<String>,
    pub equations: Vec<String>,
    pub specialization: SpecializationFile,
}

pub fn build_field(fd: Option<&FieldDescriptor>) -> Result<DifferenceField> {
    let Some(fd) = fd else {
        return Ok(DifferenceField::rationals());
    };
    let names = fd.generators.clone();
    let images = match &fd.sigma_images {
        None => None,
        Some(map) if map.is_empty() => None,
        Some(map) => {
            for key in map.keys() {
                if !names.contains(key) {
                    return Err(Error::MalformedExpression(format!(
                        "sigma image given for unknown generator `{key}`"
                    )));
                }
            }
            let mut images = Vec::with_capacity(names.len());
            for g in &names {
                let Some(expr) = map.get(g) else {
                    return Err(Error::MalformedExpression(format!(
                        "generator `{g}` has no sigma image (give all or none)"
                    )));
                };
                images.push(parse_field_element(expr, &names)?);
            }
            Some(images)
        }
    };
    DifferenceField::new(names, images)
}

impl SystemFile {
    pub fn from_json(text: &str) -> Result<SystemFile> {
        serde_json::from_str(text)
            .map_err(|e| Error::MalformedExpression(format!("bad system file: {e}")))
    }

    /// Build the system and its specialization; does not yet check that the
    /// point solves the equations.
    pub fn build(&self) -> Result<(SystemSpec, Specialization)> {
        let field = build_field(self.coefficient_field.as_ref())?;
        let gen_names: Vec<String> = field.generators().to_vec();
        let equations: Vec<SigmaPolynomial> = self
            .equations
            .iter()
            .map(|s| parse_equation(s, &self.variables, &gen_names))
            .collect::<Result<_>>()?;
        let sys = SystemSpec::new(field, self.variables.clone(), equations)?;

        let target = match &self.specialization.target_field {
            Some(fd) => build_field(Some(fd))?,
            None => sys.field.clone(),
        };
        let target_gens: Vec<String> = target.generators().to_vec();
        let mut assign = Vec::with_capacity(sys.n());
        for v in &sys.var_names {
            let Some(expr) = self.specialization.assign.get(v) else {
                return Err(Error::InvalidSystem(format!(
                    "specialization assigns no value to `{v}`"
                )));
            };
            assign.push(parse_field_element(expr, &target_gens)?);
        }
        for key in self.specialization.assign.keys() {
            if !sys.var_names.contains(key) {
                return Err(Error::InvalidSystem(format!(
                    "specialization assigns unknown variable `{key}`"
                )));
            }
        }
        Ok((sys, Specialization { target, assign }))
    }

    /// Full pipeline including the solution check.
    pub fn load(&self) -> Result<(SystemSpec, Specialization)> {
        let (sys, sp) = self.build()?;
        validate_specialization(&sys, &sp)?;
        Ok((sys, sp))
    }
}

/// The bundled worked example: the order-2 orbit swap with a product
/// constraint, solved generically in Q(t) with sigma(t) = 1/t.
/// Byte-stable by construction.
pub const EXAMPLE_SYSTEM_JSON: &str = r#"{
  "variables": ["y1", "y2"],
  "equations": ["y1@2 - y1", "y1@1 - y2", "y1*y2 - 1"],
  "specialization": {
    "target_field": {
      "generators": ["t"],
      "sigma_images": { "t": "1/t" }
    },
    "assign": { "y1": "t", "y2": "1/t" }
  }
}
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_example_loads_and_validates() {
        let file = SystemFile::from_json(EXAMPLE_SYSTEM_JSON).unwrap();
        let (sys, sp) = file.load().unwrap();
        assert_eq!((sys.n(), sys.r(), sys.e), (2, 3, 2));
        assert_eq!(sp.target.generators(), &["t".to_string()]);
    }

    #[test]
    fn default_field_is_q() {
        let text = r#"{
            "variables": ["y1"],
            "equations": ["y1@1 - y1"],
            "specialization": { "assign": { "y1": "1" } }
        }"#;
        let (sys, sp) = SystemFile::from_json(text).unwrap().load().unwrap();
        assert_eq!(sys.field.nvars(), 0);
        assert_eq!(sp.target.nvars(), 0);
    }

    #[test]
    fn missing_assignment_rejected() {
        let text = r#"{
            "variables": ["y1", "y2"],
            "equations": ["y1@1 - y2"],
            "specialization": { "assign": { "y1": "1" } }
        }"#;
        let err = SystemFile::from_json(text).unwrap().build().unwrap_err();
        assert!(matches!(err, Error::InvalidSystem(_)));
    }

    #[test]
    fn non_solution_rejected_at_load() {
        let text = r#"{
            "variables": ["y1", "y2"],
            "equations": ["y1@2 - y1", "y1@1 - y2", "y1*y2 - 1"],
            "specialization": {
                "target_field": { "generators": ["t"], "sigma_images": { "t": "1/t" } },
                "assign": { "y1": "t", "y2": "t" }
            }
        }"#;
        let err = SystemFile::from_json(text).unwrap().load().unwrap_err();
        assert!(matches!(err, Error::NotASolution(_)));
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{
            "variables": ["y1"],
            "equations": ["y1@1 - y1"],
            "nonsense": 1,
            "specialization": { "assign": { "y1": "1" } }
        }"#;
        assert!(SystemFile::from_json(text).is_err());
    }
}
