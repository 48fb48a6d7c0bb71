//! Law-violation reports shared by every validator.

use std::fmt;

use serde::Serialize;

use crate::fincat::Name;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    IdentityEndpoints,
    MissingComposite,
    SpuriousComposite,
    CompositeEndpoints,
    LeftUnit,
    RightUnit,
    Associativity,
    FunctorEndpoints,
    FunctorIdentity,
    FunctorComposition,
    NotParallel,
    ComponentEndpoints,
    Naturality,
    PresheafIdentity,
    PresheafComposition,
    TransitionEndpoints,
    Fiber,
    Base,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: Law,
    /// Names of the cells the failing equation was evaluated at.
    pub witness: Vec<Name>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: Law, witness: Vec<Name>, detail: impl Into<String>) {
        self.violations.push(Violation {
            law,
            witness,
            detail: detail.into(),
        });
    }

    /// Re-files every violation of `inner` under `law`, prefixing the witness.
    pub fn absorb(&mut self, law: Law, prefix: &Name, inner: ValidationReport) {
        for v in inner.violations {
            let mut witness = vec![prefix.clone()];
            witness.extend(v.witness);
            self.push(law, witness, format!("{:?}: {}", v.law, v.detail));
        }
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let names: Vec<String> = v.witness.iter().map(|n| n.to_string()).collect();
            write!(f, "{:?} at [{}]: {}", v.law, names.join(", "), v.detail)?;
        }
        Ok(())
    }
}
