//! Guard roles, role assignments, and the three liar models.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::space::{AnswerSpace, Value};

/// Highest guard count the role enumerator will expand; `any` mode is
/// exponential in it.
pub const MAX_GUARDS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    TruthTeller,
    Liar,
}

impl Role {
    pub fn opposite(self) -> Self {
        match self {
            Role::TruthTeller => Role::Liar,
            Role::Liar => Role::TruthTeller,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::TruthTeller => write!(f, "truth-teller"),
            Role::Liar => write!(f, "liar"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModeError {
    #[error("a role assignment needs at least one guard")]
    Empty,
    #[error("exactly-one-each requires exactly 2 guards (have {0})")]
    ExactlyOneEachArity(usize),
    #[error("guard count {0} exceeds the enumeration limit of {MAX_GUARDS}")]
    TooManyGuards(usize),
}

/// Roles for every guard, indexed by position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoleAssignment {
    roles: Vec<Role>,
}

impl RoleAssignment {
    pub fn new(roles: Vec<Role>) -> Result<Self, ModeError> {
        if roles.is_empty() {
            return Err(ModeError::Empty);
        }
        Ok(Self { roles })
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty assignments
    }

    pub fn role(&self, guard: usize) -> Role {
        self.roles[guard]
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn liar_positions(&self) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Role::Liar)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for RoleAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.roles.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// How hidden roles are quantified during verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentMode {
    /// Two guards, exactly one of each role: the classic setup.
    ExactlyOneEach,
    /// Every combination of roles over the guard count.
    Any,
}

/// All role assignments the mode admits, in lexicographic order with
/// truth-teller before liar.
pub fn enumerate_assignments(
    guard_count: usize,
    mode: AssignmentMode,
) -> Result<Vec<RoleAssignment>, ModeError> {
    if guard_count == 0 {
        return Err(ModeError::Empty);
    }
    if guard_count > MAX_GUARDS {
        return Err(ModeError::TooManyGuards(guard_count));
    }
    match mode {
        AssignmentMode::ExactlyOneEach => {
            if guard_count != 2 {
                return Err(ModeError::ExactlyOneEachArity(guard_count));
            }
            Ok(vec![
                RoleAssignment::new(vec![Role::TruthTeller, Role::Liar])?,
                RoleAssignment::new(vec![Role::Liar, Role::TruthTeller])?,
            ])
        }
        AssignmentMode::Any => {
            let mut out = Vec::with_capacity(1 << guard_count);
            for mask in 0u32..(1 << guard_count) {
                let roles = (0..guard_count)
                    .map(|i| {
                        // guard 0 varies slowest, so the order is lexicographic
                        if mask >> (guard_count - 1 - i) & 1 == 1 {
                            Role::Liar
                        } else {
                            Role::TruthTeller
                        }
                    })
                    .collect();
                out.push(RoleAssignment::new(roles)?);
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("fixed rule must change the answer")]
    FixesPoint(Value),
    #[error("fixed rule offset must be nonzero")]
    ZeroOffset,
}

/// A deterministic per-value lying rule: asked for a value `x` the liar
/// answers `f(x)`, with `f(x) != x` everywhere.
///
/// The map may send a value outside the answer space; whether that makes a
/// world invalid or triggers the restricted-reply fallback is decided at
/// evaluation time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedRule {
    map: BTreeMap<Value, Value>,
    offset: Option<Value>,
}

impl FixedRule {
    /// The offset rule `x -> x + delta` over the whole space.
    pub fn offset(delta: Value, space: &AnswerSpace) -> Result<Self, ModelError> {
        if delta == 0 {
            return Err(ModelError::ZeroOffset);
        }
        let map = space
            .iter()
            .filter_map(|x| x.checked_add(delta).map(|y| (x, y)))
            .collect();
        Ok(Self {
            map,
            offset: Some(delta),
        })
    }

    /// An arbitrary rule; every entry must move its point.
    pub fn from_map(map: BTreeMap<Value, Value>) -> Result<Self, ModelError> {
        for (&x, &y) in &map {
            if x == y {
                return Err(ModelError::FixesPoint(x));
            }
        }
        Ok(Self { map, offset: None })
    }

    pub fn apply(&self, x: Value) -> Option<Value> {
        self.map.get(&x).copied()
    }
}

impl fmt::Display for FixedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.offset {
            Some(d) if d >= 0 => write!(f, "fixed(+{d})"),
            Some(d) => write!(f, "fixed({d})"),
            None => write!(f, "fixed rule over {} points", self.map.len()),
        }
    }
}

/// What the liar is allowed to do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiarModel {
    /// Lies deterministically through a per-value rule.
    FixedRule(FixedRule),
    /// May give any false answer in the permissible set, and all of them
    /// are possible.
    FullSupport,
    /// Answers by an arbitrary deterministic strategy; verification
    /// quantifies over all of them.
    Adversarial,
}

impl fmt::Display for LiarModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiarModel::FixedRule(rule) => write!(f, "{rule}"),
            LiarModel::FullSupport => write!(f, "full_support"),
            LiarModel::Adversarial => write!(f, "adversarial"),
        }
    }
}
