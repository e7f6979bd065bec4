//! Exhaustive verification: does a prompt pin down the hidden weight no
//! matter which guard is asked, which roles they hold, and how the liar
//! exercises its freedom?
//!
//! Verification runs in two passes. A scanning pass decides which worlds
//! can host the prompt at all: a world is excluded when a restriction pair
//! cannot be formed in it, or (under a fixed rule) when the rule is blocked
//! with no restriction to fall back on. An enumeration pass then walks
//! every surviving world, role assignment, and liar behavior, recording
//! each possible answer. The prompt wins if no answer can arise in two
//! different worlds; the map from answers back to worlds is returned as a
//! [`Decoder`].

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::adversary::enumerate_strategies;
use crate::model::{enumerate_assignments, AssignmentMode, LiarModel, RoleAssignment};
use crate::question::Question;
use crate::semantics::{response_support, EvalContext, EvalError};
use crate::space::{AnswerSpace, Value, World};

/// How the scenario around the prompt is set up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: AssignmentMode,
    pub guard_count: usize,
    /// Seat of the guard the prompt is posed to, zero-based.
    pub asked_guard: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: AssignmentMode::ExactlyOneEach,
            guard_count: 2,
            asked_guard: 0,
        }
    }
}

/// How a particular answer came about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Behavior {
    /// The `choice`-th smallest element of the respondent's support.
    Support { choice: usize },
    /// Under the adversarial model: the liar's `index`-th strategy, then
    /// the `choice`-th element of the resulting support.
    Strategy { index: usize, choice: usize },
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Behavior::Support { choice } => write!(f, "choice {choice}"),
            Behavior::Strategy { index, choice } => {
                write!(f, "strategy {index}, choice {choice}")
            }
        }
    }
}

/// One realizable answer, with everything that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub world: World,
    pub assignment: RoleAssignment,
    pub behavior: Behavior,
    pub answer: Value,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "world {}, roles {}, {}, answer {}",
            self.world, self.assignment, self.behavior, self.answer
        )
    }
}

/// A world the prompt cannot be asked in, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludedWorld {
    pub world: World,
    pub reason: EvalError,
}

impl fmt::Display for ExcludedWorld {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "world {} excluded: {}", self.world, self.reason)
    }
}

/// Why a prompt fails to win.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// The same answer can arise in two different worlds, so no decoder
    /// can tell them apart. The witnesses are the first such pair found.
    Collision {
        answer: Value,
        world_a: World,
        world_b: World,
        witness_a: Outcome,
        witness_b: Outcome,
    },
    /// Some respondent has no permitted answer at all, so the exchange can
    /// dead-end before yielding information.
    Stuck {
        world: World,
        assignment: RoleAssignment,
        /// Index of the liar strategy in force, when one was.
        strategy: Option<usize>,
        question: Question,
    },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Collision {
                answer,
                world_a,
                world_b,
                ..
            } => write!(
                f,
                "answer {answer} can arise in world {world_a} and in world {world_b}"
            ),
            Counterexample::Stuck {
                world,
                assignment,
                strategy,
                question,
            } => {
                write!(
                    f,
                    "world {world} with roles {assignment} has no answer to {question}"
                )?;
                if let Some(index) = strategy {
                    write!(f, " under strategy {index}")?;
                }
                Ok(())
            }
        }
    }
}

/// Maps each realizable answer back to the unique world it betrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoder {
    map: BTreeMap<Value, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("answer {answer} can never arise from this prompt")]
    UnknownAnswer { answer: Value },
}

impl Decoder {
    pub fn decode(&self, answer: Value) -> Result<Value, DecodeError> {
        self.map
            .get(&answer)
            .copied()
            .ok_or(DecodeError::UnknownAnswer { answer })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Value, Value)> + '_ {
        self.map.iter().map(|(a, w)| (*a, *w))
    }

    /// A short human description: "identity", "answer - 10", "swap 0 <-> 1",
    /// or a fallback naming the table size.
    pub fn describe(&self) -> String {
        if self.map.is_empty() {
            return "table with 0 entries".to_string();
        }
        if self.map.iter().all(|(answer, weight)| answer == weight) {
            return "identity".to_string();
        }
        let deltas: Option<Vec<Value>> = self
            .map
            .iter()
            .map(|(answer, weight)| weight.checked_sub(*answer))
            .collect();
        if let Some(deltas) = deltas {
            if deltas.windows(2).all(|pair| pair[0] == pair[1]) {
                let delta = deltas[0];
                return if delta >= 0 {
                    format!("answer + {delta}")
                } else {
                    format!("answer - {}", -delta)
                };
            }
        }
        if self.map.len() == 2 {
            let pairs: Vec<(Value, Value)> = self.entries().collect();
            let ((a, wa), (b, wb)) = (pairs[0], pairs[1]);
            if wa == b && wb == a {
                return format!("swap {a} <-> {b}");
            }
        }
        format!("table with {} entries", self.map.len())
    }
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// The verifier's judgement of a prompt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every realizable answer identifies one world; `decoder` recovers it.
    Winning {
        decoder: Decoder,
        /// Number of (world, assignment, behavior) outcomes enumerated.
        outcomes: usize,
        excluded: Vec<ExcludedWorld>,
    },
    /// The prompt can fail; the first counterexample found is included.
    NotWinning {
        counterexample: Counterexample,
        excluded: Vec<ExcludedWorld>,
    },
    /// No world survives the scanning pass, so the prompt can never be
    /// asked as posed.
    Invalid {
        reason: String,
        excluded: Vec<ExcludedWorld>,
    },
}

impl Verdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, Verdict::Winning { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Winning {
                decoder, outcomes, ..
            } => write!(
                f,
                "WINNING, decoder: {}, {} outcomes",
                decoder.describe(),
                outcomes
            ),
            Verdict::NotWinning {
                counterexample, ..
            } => write!(f, "NOT WINNING: {counterexample}"),
            Verdict::Invalid { reason, .. } => write!(f, "INVALID: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    /// Prompts containing `could(self)` have no truthful sets to compare;
    /// the fixpoint analysis covers them instead.
    #[error(
        "the prompt contains could(self), which has no truthful set; \
         use the fixpoint analysis instead"
    )]
    SelfReferenceUnsupported,

    #[error("invalid scenario: {0}")]
    Validation(String),

    /// Outcome enumeration dead-ended; only returned by [`outcomes`], since
    /// [`verify`] reports the same situation as a counterexample.
    #[error("no outcome can be produced: {0}")]
    Stuck(Box<Counterexample>),

    #[error(transparent)]
    Eval(EvalError),
}

/// Rejects scenario shapes the engine cannot make sense of.
fn validate(
    question: &Question,
    space: &AnswerSpace,
    model: &LiarModel,
    options: &VerifyOptions,
) -> Result<(), VerifyError> {
    if space.len() < 2 {
        return Err(VerifyError::Validation(
            "the answer space must contain at least two values; one value hides nothing".into(),
        ));
    }
    if question.contains_self_reference() {
        return Err(VerifyError::SelfReferenceUnsupported);
    }
    enumerate_assignments(options.guard_count, options.mode)
        .map_err(|e| VerifyError::Validation(e.to_string()))?;
    if options.asked_guard >= options.guard_count {
        return Err(VerifyError::Validation(format!(
            "asked guard {} is out of range for {} guards",
            options.asked_guard, options.guard_count
        )));
    }
    if question.contains_ask_other() && options.guard_count != 2 {
        return Err(VerifyError::Validation(format!(
            "other() requires exactly two guards, the scenario has {}",
            options.guard_count
        )));
    }
    if matches!(model, LiarModel::Adversarial) && options.mode != AssignmentMode::ExactlyOneEach {
        return Err(VerifyError::Validation(
            "the adversarial model needs exactly one liar; use exactly-one-each roles".into(),
        ));
    }
    Ok(())
}

/// Splits the space into worlds that can host the prompt and worlds that
/// cannot. Restriction templates are checked under every model; fixed
/// rules additionally get a full evaluation per role assignment, because a
/// blocked rule outside any restriction makes the world unusable.
fn scan(
    question: &Question,
    space: &AnswerSpace,
    model: &LiarModel,
    options: &VerifyOptions,
    assignments: &[RoleAssignment],
) -> Result<(Vec<World>, Vec<ExcludedWorld>), VerifyError> {
    let templates = question.templates();
    let mut valid = Vec::new();
    let mut excluded = Vec::new();
    'worlds: for &value in space.values() {
        let world = World::new(value);
        for template in &templates {
            if let Err(err) = template.instantiate(world, space) {
                excluded.push(ExcludedWorld {
                    world,
                    reason: EvalError::InvalidRestriction(err),
                });
                continue 'worlds;
            }
        }
        if matches!(model, LiarModel::FixedRule(_)) {
            for assignment in assignments {
                let ctx = EvalContext {
                    space,
                    roles: assignment,
                    model,
                    world,
                    strategy: None,
                };
                match response_support(&ctx, options.asked_guard, question) {
                    Ok(_) => {}
                    Err(err) if err.excludes_world() => {
                        excluded.push(ExcludedWorld { world, reason: err });
                        continue 'worlds;
                    }
                    // a stuck respondent is a property of the prompt, not
                    // of the world; the enumeration pass reports it
                    Err(EvalError::Stuck { .. }) => {}
                    Err(err) => return Err(VerifyError::Eval(err)),
                }
            }
        }
        valid.push(world);
    }
    Ok((valid, excluded))
}

/// The worlds in which the prompt can be asked, under the default
/// two-guard, exactly-one-each scenario.
pub fn valid_worlds(
    question: &Question,
    space: &AnswerSpace,
    model: &LiarModel,
) -> Result<Vec<World>, VerifyError> {
    let options = VerifyOptions::default();
    validate(question, space, model, &options)?;
    let assignments = enumerate_assignments(options.guard_count, options.mode)
        .map_err(|e| VerifyError::Validation(e.to_string()))?;
    let (valid, _) = scan(question, space, model, &options, &assignments)?;
    Ok(valid)
}

enum WalkEnd {
    Done,
    Halted(Counterexample),
}

/// Feeds every outcome of every valid world to `emit`, stopping early if
/// `emit` reports a counterexample or a respondent is stuck.
fn walk(
    question: &Question,
    space: &AnswerSpace,
    model: &LiarModel,
    options: &VerifyOptions,
    assignments: &[RoleAssignment],
    valid: &[World],
    emit: &mut dyn FnMut(Outcome) -> Option<Counterexample>,
) -> Result<WalkEnd, VerifyError> {
    for &world in valid {
        for assignment in assignments {
            let halted = match model {
                LiarModel::Adversarial => {
                    walk_strategies(question, space, model, options, assignment, world, emit)?
                }
                _ => walk_supports(question, space, model, options, assignment, world, emit)?,
            };
            if let Some(counterexample) = halted {
                return Ok(WalkEnd::Halted(counterexample));
            }
        }
    }
    Ok(WalkEnd::Done)
}

fn walk_supports(
    question: &Question,
    space: &AnswerSpace,
    model: &LiarModel,
    options: &VerifyOptions,
    assignment: &RoleAssignment,
    world: World,
    emit: &mut dyn FnMut(Outcome) -> Option<Counterexample>,
) -> Result<Option<Counterexample>, VerifyError> {
    let ctx = EvalContext {
        space,
        roles: assignment,
        model,
        world,
        strategy: None,
    };
    let support = match response_support(&ctx, options.asked_guard, question) {
        Ok(support) => support,
        Err(EvalError::Stuck { question, .. }) => {
            return Ok(Some(Counterexample::Stuck {
                world,
                assignment: assignment.clone(),
                strategy: None,
                question,
            }))
        }
        Err(err) => return Err(VerifyError::Eval(err)),
    };
    for (choice, &answer) in support.iter().enumerate() {
        let outcome = Outcome {
            world,
            assignment: assignment.clone(),
            behavior: Behavior::Support { choice },
            answer,
        };
        if let Some(counterexample) = emit(outcome) {
            return Ok(Some(counterexample));
        }
    }
    Ok(None)
}

fn walk_strategies(
    question: &Question,
    space: &AnswerSpace,
    model: &LiarModel,
    options: &VerifyOptions,
    assignment: &RoleAssignment,
    world: World,
    emit: &mut dyn FnMut(Outcome) -> Option<Counterexample>,
) -> Result<Option<Counterexample>, VerifyError> {
    let strategies =
        enumerate_strategies(question, space, assignment, world).map_err(VerifyError::Eval)?;
    if strategies.is_empty() {
        return Ok(Some(Counterexample::Stuck {
            world,
            assignment: assignment.clone(),
            strategy: None,
            question: question.clone(),
        }));
    }
    for (index, strategy) in strategies.iter().enumerate() {
        let ctx = EvalContext {
            space,
            roles: assignment,
            model,
            world,
            strategy: Some(strategy),
        };
        let support = match response_support(&ctx, options.asked_guard, question) {
            Ok(support) => support,
            Err(EvalError::Stuck { question, .. }) => {
                return Ok(Some(Counterexample::Stuck {
                    world,
                    assignment: assignment.clone(),
                    strategy: Some(index),
                    question,
                }))
            }
            Err(err) => return Err(VerifyError::Eval(err)),
        };
        for (choice, &answer) in support.iter().enumerate() {
            let outcome = Outcome {
                world,
                assignment: assignment.clone(),
                behavior: Behavior::Strategy { index, choice },
                answer,
            };
            if let Some(counterexample) = emit(outcome) {
                return Ok(Some(counterexample));
            }
        }
    }
    Ok(None)
}

/// Decides whether `question` always lets the asker recover the weight.
pub fn verify(
    question: &Question,
    space: &AnswerSpace,
    model: &LiarModel,
    options: &VerifyOptions,
) -> Result<Verdict, VerifyError> {
    validate(question, space, model, options)?;
    let assignments = enumerate_assignments(options.guard_count, options.mode)
        .map_err(|e| VerifyError::Validation(e.to_string()))?;
    let (valid, excluded) = scan(question, space, model, options, &assignments)?;
    if valid.is_empty() {
        return Ok(Verdict::Invalid {
            reason: format!("every world in {space} is excluded"),
            excluded,
        });
    }
    let mut first_seen: BTreeMap<Value, Outcome> = BTreeMap::new();
    let mut total = 0usize;
    let end = walk(
        question,
        space,
        model,
        options,
        &assignments,
        &valid,
        &mut |outcome| {
            total += 1;
            match first_seen.entry(outcome.answer) {
                Entry::Vacant(slot) => {
                    slot.insert(outcome);
                    None
                }
                Entry::Occupied(slot) => {
                    let earlier = slot.get();
                    if earlier.world == outcome.world {
                        return None;
                    }
                    Some(Counterexample::Collision {
                        answer: outcome.answer,
                        world_a: earlier.world,
                        world_b: outcome.world,
                        witness_a: earlier.clone(),
                        witness_b: outcome,
                    })
                }
            }
        },
    )?;
    match end {
        WalkEnd::Halted(counterexample) => Ok(Verdict::NotWinning {
            counterexample,
            excluded,
        }),
        WalkEnd::Done => {
            let map = first_seen
                .iter()
                .map(|(answer, outcome)| (*answer, outcome.world.true_weight))
                .collect();
            Ok(Verdict::Winning {
                decoder: Decoder { map },
                outcomes: total,
                excluded,
            })
        }
    }
}

/// Every outcome the scenario can produce, in enumeration order: worlds
/// ascending, assignments in their listed order, behaviors in order. Fails
/// with [`VerifyError::Stuck`] if some respondent has no answer, because
/// the full list then does not exist.
pub fn outcomes(
    question: &Question,
    space: &AnswerSpace,
    model: &LiarModel,
    options: &VerifyOptions,
) -> Result<Vec<Outcome>, VerifyError> {
    validate(question, space, model, options)?;
    let assignments = enumerate_assignments(options.guard_count, options.mode)
        .map_err(|e| VerifyError::Validation(e.to_string()))?;
    let (valid, _) = scan(question, space, model, options, &assignments)?;
    let mut all = Vec::new();
    let end = walk(
        question,
        space,
        model,
        options,
        &assignments,
        &valid,
        &mut |outcome| {
            all.push(outcome);
            None
        },
    )?;
    match end {
        WalkEnd::Done => Ok(all),
        WalkEnd::Halted(counterexample) => Err(VerifyError::Stuck(Box::new(counterexample))),
    }
}
