//! JSON interchange for GRS codes.
//!
//! Elements are written as discrete logs to the canonical primitive element,
//! so a document is only meaningful together with the field's modulus, which
//! is stored alongside and checked on load.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::ConstructionParams;
use crate::field::{make_field, Felt, FieldError};
use crate::grs::{GrsError, GrsSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub p: u64,
    pub e: u32,
    /// Coefficients of the modulus, constant term first.
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroMarker {
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogDoc {
    pub log: u64,
}

/// A locator: `{"log": i}` or the string `"zero"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementDoc {
    Log(LogDoc),
    Zero(ZeroMarker),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub schema_version: u32,
    pub field: FieldDoc,
    pub k: usize,
    pub locators: Vec<ElementDoc>,
    pub multipliers: Vec<LogDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ConstructionParams>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("schema version {0} is not supported (expected {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("modulus {got:?} is not the canonical modulus {expected:?}")]
    NonCanonicalModulus { expected: Vec<u32>, got: Vec<u32> },
    #[error("log {log} is outside [0, {group_order})")]
    LogOutOfRange { log: u64, group_order: u64 },
    #[error(transparent)]
    Grs(#[from] GrsError),
}

impl CodeDocument {
    pub fn from_code(code: &GrsSpec) -> CodeDocument {
        let f = code.field();
        let log = |x: &Felt| LogDoc {
            log: x.log().expect("multipliers are nonzero"),
        };
        CodeDocument {
            schema_version: SCHEMA_VERSION,
            field: FieldDoc {
                p: f.characteristic(),
                e: f.base_degree(),
                modulus: f.modulus().to_vec(),
            },
            k: code.k(),
            locators: code
                .locators()
                .iter()
                .map(|a| match a.log() {
                    Some(l) => ElementDoc::Log(LogDoc { log: l }),
                    None => ElementDoc::Zero(ZeroMarker::Zero),
                })
                .collect(),
            multipliers: code.multipliers().iter().map(log).collect(),
            provenance: code.provenance().cloned(),
        }
    }

    pub fn to_code(&self) -> Result<GrsSpec, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::SchemaVersion(self.schema_version));
        }
        let f = make_field(self.field.p, self.field.e)?;
        if f.modulus() != self.field.modulus.as_slice() {
            return Err(DocumentError::NonCanonicalModulus {
                expected: f.modulus().to_vec(),
                got: self.field.modulus.clone(),
            });
        }
        let elem = |log: u64| {
            if log >= f.group_order() {
                Err(DocumentError::LogOutOfRange {
                    log,
                    group_order: f.group_order(),
                })
            } else {
                Ok(f.from_log(log as i64))
            }
        };
        let locators = self
            .locators
            .iter()
            .map(|d| match d {
                ElementDoc::Log(l) => elem(l.log),
                ElementDoc::Zero(_) => Ok(f.zero()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let multipliers = self
            .multipliers
            .iter()
            .map(|l| elem(l.log))
            .collect::<Result<Vec<_>, _>>()?;
        let code = GrsSpec::new(f, locators, multipliers, self.k)?;
        Ok(match &self.provenance {
            Some(p) => code.with_provenance(p.clone()),
            None => code,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialise")
    }

    pub fn from_json(text: &str) -> Result<CodeDocument, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))
    }
}
