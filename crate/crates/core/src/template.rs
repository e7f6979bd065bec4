//! Set templates: world-indexed two-element reply sets for restricted
//! questions.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::space::{AnswerSpace, Value, World};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("offset pair requires a nonzero offset")]
    ZeroOffset,
}

/// A template instantiates to `{w, w+delta}` or `{c, w}` at the hidden
/// world `w`; either way the result must be two distinct members of the
/// answer space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetTemplate {
    OffsetPair { delta: Value },
    ConstPair { value: Value },
}

impl SetTemplate {
    pub fn offset_pair(delta: Value) -> Result<Self, TemplateError> {
        if delta == 0 {
            return Err(TemplateError::ZeroOffset);
        }
        Ok(SetTemplate::OffsetPair { delta })
    }

    pub fn const_pair(value: Value) -> Self {
        SetTemplate::ConstPair { value }
    }

    /// Instantiates against the full space at `world`. The violated
    /// condition travels with the error so exclusions can be reported.
    pub fn instantiate(
        &self,
        world: World,
        space: &AnswerSpace,
    ) -> Result<[Value; 2], InvalidWorld> {
        let w = world.true_weight;
        if !space.contains(w) {
            return Err(InvalidWorld::OutsideSpace {
                template: *self,
                world: w,
                value: w,
            });
        }
        let partner = match *self {
            SetTemplate::OffsetPair { delta } => {
                w.checked_add(delta).ok_or(InvalidWorld::Overflow {
                    template: *self,
                    world: w,
                })?
            }
            SetTemplate::ConstPair { value } => value,
        };
        if partner == w {
            return Err(InvalidWorld::Collapses {
                template: *self,
                world: w,
            });
        }
        if !space.contains(partner) {
            return Err(InvalidWorld::OutsideSpace {
                template: *self,
                world: w,
                value: partner,
            });
        }
        Ok(if partner < w { [partner, w] } else { [w, partner] })
    }

    /// Instantiation as a two-element reply set.
    pub fn instantiate_set(
        &self,
        world: World,
        space: &AnswerSpace,
    ) -> Result<BTreeSet<Value>, InvalidWorld> {
        let [a, b] = self.instantiate(world, space)?;
        Ok(BTreeSet::from([a, b]))
    }
}

impl fmt::Display for SetTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SetTemplate::OffsetPair { delta } if delta >= 0 => {
                write!(f, "{{w,w+{delta}}}")
            }
            SetTemplate::OffsetPair { delta } => {
                write!(f, "{{w,w-{}}}", delta.unsigned_abs())
            }
            SetTemplate::ConstPair { value } => write!(f, "{{{value},w}}"),
        }
    }
}

/// A world at which a template fails to produce two distinct in-space
/// values; such worlds leave the verification domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidWorld {
    #[error("template {template} collapses to a single value at world {world}")]
    Collapses { template: SetTemplate, world: Value },
    #[error("template {template} needs {value} at world {world}, which is outside the answer space")]
    OutsideSpace {
        template: SetTemplate,
        world: Value,
        value: Value,
    },
    #[error("template {template} overflows at world {world}")]
    Overflow { template: SetTemplate, world: Value },
}
