//! Finite answer spaces and hidden worlds.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Integer answer value. Spaces, hidden weights, and replies all share it.
pub type Value = i64;

/// Hard cap on space size. Exhaustive verification far beyond this is out of
/// reach anyway, so construction fails early instead of exhausting memory.
pub const MAX_SPACE: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("answer space must not be empty")]
    Empty,
    #[error("inverted range: {lo}..{hi}")]
    InvertedRange { lo: Value, hi: Value },
    #[error("duplicate value {0} in answer space")]
    Duplicate(Value),
    #[error("answer space exceeds {MAX_SPACE} values")]
    TooLarge,
}

/// A finite, strictly increasing set of admissible answers.
///
/// Construction canonicalizes: values are sorted and duplicates rejected.
/// Singletons are legal here; puzzle scenarios demand at least two values,
/// which the verifier checks separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerSpace {
    values: Vec<Value>,
}

impl AnswerSpace {
    /// The canonical interval space `lo..=hi`.
    pub fn interval(lo: Value, hi: Value) -> Result<Self, SpaceError> {
        if lo > hi {
            return Err(SpaceError::InvertedRange { lo, hi });
        }
        let size = hi
            .checked_sub(lo)
            .and_then(|d| d.checked_add(1))
            .filter(|&n| n as u128 <= MAX_SPACE as u128);
        if size.is_none() {
            return Err(SpaceError::TooLarge);
        }
        Ok(Self {
            values: (lo..=hi).collect(),
        })
    }

    /// An arbitrary finite set.
    pub fn from_values(mut values: Vec<Value>) -> Result<Self, SpaceError> {
        if values.is_empty() {
            return Err(SpaceError::Empty);
        }
        if values.len() > MAX_SPACE {
            return Err(SpaceError::TooLarge);
        }
        values.sort_unstable();
        for pair in values.windows(2) {
            if pair[0] == pair[1] {
                return Err(SpaceError::Duplicate(pair[0]));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty spaces
    }

    pub fn contains(&self, v: Value) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    pub fn min(&self) -> Value {
        self.values[0]
    }

    pub fn max(&self) -> Value {
        *self.values.last().expect("nonempty by construction")
    }

    pub fn iter(&self) -> impl Iterator<Item = Value> + '_ {
        self.values.iter().copied()
    }

    pub fn as_set(&self) -> BTreeSet<Value> {
        self.values.iter().copied().collect()
    }

    fn is_contiguous(&self) -> bool {
        self.max() - self.min() + 1 == self.values.len() as Value
    }
}

impl fmt::Display for AnswerSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() > 1 && self.is_contiguous() {
            write!(f, "{}..{}", self.min(), self.max())
        } else {
            write!(f, "{{")?;
            for (i, v) in self.values.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}}")
        }
    }
}

/// One possible hidden state: the true weight the guards know.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World {
    pub true_weight: Value,
}

impl World {
    pub fn new(true_weight: Value) -> Self {
        Self { true_weight }
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.true_weight)
    }
}
