use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An ordered set of distinct symbol labels.
///
/// The position of a label is its index everywhere else in the crate.
/// Cloning is cheap; the labels are shared.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    labels: Arc<[String]>,
}

impl Alphabet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// Labels `{prefix}0 .. {prefix}{n-1}`.
    pub fn indexed(prefix: &str, n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "{what}: {self:?} vs {other:?}"
            )))
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.labels.len() <= 8 {
            f.debug_list().entries(self.labels.iter()).finish()
        } else {
            write!(f, "[{} .. {}; {}]", self.labels[0], self.labels[self.labels.len() - 1], self.labels.len())
        }
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Self::new(labels)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.labels.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicates() {
        assert!(matches!(Alphabet::new(Vec::<String>::new()), Err(Error::EmptyAlphabet)));
        assert!(matches!(Alphabet::new(["a", "b", "a"]), Err(Error::DuplicateLabel(l)) if l == "a"));
    }

    #[test]
    fn index_roundtrip() {
        let a = Alphabet::new(["low", "mid", "high"]).unwrap();
        assert_eq!(a.index_of("mid"), Some(1));
        assert_eq!(a.label(2), "high");
        assert_eq!(a.index_of("none"), None);
    }
}
