//! Three-valued analysis results.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Evidence attached to a [`Verdict`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Empty,
    Note {
        text: String,
    },
    /// A chain of objects and the basis indices of the morphisms along it.
    Composable {
        objects: Vec<String>,
        basis: Vec<usize>,
        failure: String,
    },
    /// A basis morphism acting wrongly on a basis vector.
    Action {
        source: String,
        target: String,
        basis: Vec<usize>,
        vector: usize,
        failure: String,
    },
    Object {
        object: String,
        reason: String,
    },
    Frontier {
        target: String,
        members: Vec<String>,
        exception: Vec<String>,
    },
    /// A morphism into `target` that does not factor through the members.
    Cokernel {
        target: String,
        source: String,
        members: Vec<String>,
        vector: Vec<String>,
    },
    /// Minimal window-relative frontier sizes over successive windows.
    Growth {
        target: String,
        windows: Vec<String>,
        sizes: Vec<usize>,
    },
    Tower {
        frontiers: BTreeMap<String, Vec<String>>,
    },
    Supports {
        sets: BTreeMap<String, Vec<String>>,
    },
    Dimensions {
        dims: BTreeMap<String, usize>,
    },
    Trials {
        passed: usize,
        failed: usize,
        seed: u64,
    },
}

impl Witness {
    pub fn note(text: impl Into<String>) -> Witness {
        Witness::Note { text: text.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Certified { witness: Witness },
    Refuted { witness: Witness },
    InconclusiveAtWindow { window: String, reason: String },
}

impl Verdict {
    pub fn certified() -> Verdict {
        Verdict::Certified {
            witness: Witness::Empty,
        }
    }

    pub fn certified_with(witness: Witness) -> Verdict {
        Verdict::Certified { witness }
    }

    pub fn refuted(witness: Witness) -> Verdict {
        Verdict::Refuted { witness }
    }

    pub fn inconclusive(window: impl Into<String>, reason: impl Into<String>) -> Verdict {
        Verdict::InconclusiveAtWindow {
            window: window.into(),
            reason: reason.into(),
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::InconclusiveAtWindow { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Certified { witness } | Verdict::Refuted { witness } => Some(witness),
            Verdict::InconclusiveAtWindow { .. } => None,
        }
    }

    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Certified { .. } => 0,
            Verdict::Refuted { .. } => 2,
            Verdict::InconclusiveAtWindow { .. } => 3,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Certified { .. } => "Certified",
            Verdict::Refuted { .. } => "Refuted",
            Verdict::InconclusiveAtWindow { .. } => "InconclusiveAtWindow",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::InconclusiveAtWindow { window, reason } => {
                write!(f, "InconclusiveAtWindow({window}: {reason})")
            }
            other => f.write_str(other.label()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_with_tags() {
        let v = Verdict::refuted(Witness::Object {
            object: "-1".into(),
            reason: "infinite down-set".into(),
        });
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"verdict":"Refuted","witness":{"kind":"object","object":"-1","reason":"infinite down-set"}}"#
        );
        let back: Verdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.exit_code(), 2);
    }
}
