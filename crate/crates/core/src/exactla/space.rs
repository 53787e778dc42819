use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite-dimensional rational vector space with its implicit standard basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Space {
    pub dim: usize,
    pub label: String,
}

impl Space {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Space {
            dim,
            label: label.into(),
        }
    }

    pub fn line() -> Self {
        Space::new("R", 1)
    }

    pub fn zero() -> Self {
        Space::new("0", 0)
    }

    pub fn dual(&self) -> Space {
        Space::new(format!("{}*", wrap(&self.label)), self.dim)
    }

    /// Basis index of `e_i ⊗ f_j` is `i * dim(other) + j`.
    pub fn tensor(&self, other: &Space) -> Space {
        Space::new(
            format!("{}⊗{}", wrap(&self.label), wrap(&other.label)),
            self.dim * other.dim,
        )
    }

    /// Coordinates of `self` come first.
    pub fn direct_sum(&self, other: &Space) -> Space {
        Space::new(
            format!("{}⊕{}", wrap(&self.label), wrap(&other.label)),
            self.dim + other.dim,
        )
    }

    pub fn relabel(&self, label: impl Into<String>) -> Space {
        Space::new(label, self.dim)
    }
}

fn wrap(label: &str) -> String {
    if label.contains('⊗') || label.contains('⊕') {
        format!("({label})")
    } else {
        label.to_string()
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.label, self.dim)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}
