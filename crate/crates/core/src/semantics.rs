//! Question semantics: truthful sets, response supports, and the
//! self-reference fixpoint analysis.
//!
//! Everything is evaluated against an [`EvalContext`]: a finite answer
//! space, a role assignment, a liar model, and the true world. Two notions
//! drive the whole crate:
//!
//! * the **truthful set** of a question for an agent: the answers an honest
//!   respondent in that seat could give;
//! * the **response support**: the answers the agent may actually give once
//!   its role is applied (truth-tellers answer inside the truthful set,
//!   liars outside it, in model-specific ways).
//!
//! Questions that talk about agents ("what would the other guard say?",
//! "which answers could you give?") recurse into a response support, so the
//! two notions are mutually defined. A `restrict({...}, q)` wrapper swaps
//! the ambient reply space for its instantiated pair, for itself and for
//! everything beneath it.
//!
//! An empty response support is reported as [`EvalError::Stuck`]: the
//! respondent has no permitted answer at all, which the verifier treats as
//! a counterexample rather than as a crash.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::adversary::Strategy;
use crate::model::{LiarModel, Role, RoleAssignment};
use crate::question::Question;
use crate::space::{AnswerSpace, Value, World};
use crate::template::InvalidWorld;

/// A set of candidate answers. Ordered, so every enumeration is stable.
pub type AnswerSet = BTreeSet<Value>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    /// `could(self)` asks for the support of the very question being asked;
    /// there is no truthful set to compute. [`solve_self_reference`] says
    /// what can be said about it instead.
    #[error("could(self) is self-referential and has no truthful set")]
    SelfReference,

    #[error("other() refers to the one other guard, but there are {guards} guards")]
    Arity { guards: usize },

    #[error("the fixed rule is undefined at {value}")]
    FixedRuleUndefined { value: Value },

    #[error("the fixed rule maps {value} to {image}, which is outside the reply space")]
    FixedRuleLeavesSpace { value: Value, image: Value },

    #[error("the fixed rule needs a single honest answer to transform, found {count}")]
    FixedRuleManyTruths { count: usize },

    #[error("restriction cannot be formed: {0}")]
    InvalidRestriction(#[from] InvalidWorld),

    #[error("the {role} has no permitted answer to {question}")]
    Stuck { role: Role, question: Question },

    #[error("evaluating {question} for an adversarial liar requires a strategy")]
    StrategyRequired { question: Question },

    #[error("the strategy does not bind {question}")]
    StrategyIncomplete { question: Question },

    #[error("guard {guard} does not exist; there are {count} guards")]
    NoSuchGuard { guard: usize, count: usize },
}

impl EvalError {
    /// True for errors that mean the world itself cannot host the question
    /// (a restriction pair collapses or leaves the space, or a fixed rule
    /// has nowhere to go). The verifier drops such worlds with a report
    /// instead of failing outright.
    pub fn excludes_world(&self) -> bool {
        matches!(
            self,
            EvalError::FixedRuleUndefined { .. }
                | EvalError::FixedRuleLeavesSpace { .. }
                | EvalError::FixedRuleManyTruths { .. }
                | EvalError::InvalidRestriction(_)
        )
    }
}

/// Everything an evaluation needs to know about the scenario.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub space: &'a AnswerSpace,
    pub roles: &'a RoleAssignment,
    pub model: &'a LiarModel,
    pub world: World,
    /// Bindings for the adversarial liar, when one is in play.
    pub strategy: Option<&'a Strategy>,
}

/// An evaluation viewpoint: a seat plus the role assumed for it. Usually
/// the role matches the assignment, but `avoid(opposite, ...)` may have to
/// conjure a hypothetical respondent of the opposite type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Agent {
    position: usize,
    role: Role,
}

/// The honest answers `guard` could give to `question`.
pub fn truthful_set(
    ctx: &EvalContext,
    guard: usize,
    question: &Question,
) -> Result<AnswerSet, EvalError> {
    let agent = seat(ctx, guard)?;
    Eval { ctx }.truthful(agent, question, None)
}

/// The answers `guard` may actually give to `question`, with its role and
/// the liar model applied. Empty supports surface as [`EvalError::Stuck`].
pub fn response_support(
    ctx: &EvalContext,
    guard: usize,
    question: &Question,
) -> Result<AnswerSet, EvalError> {
    let agent = seat(ctx, guard)?;
    Eval { ctx }.support(agent, question, None)
}

/// The set a respondent must answer from: the instantiated restriction if
/// the question carries one at the top, the whole space otherwise.
pub fn reply_space(ctx: &EvalContext, question: &Question) -> Result<AnswerSet, EvalError> {
    Eval { ctx }.reply(question, None)
}

/// Like [`truthful_set`] but inside an explicit ambient restriction; the
/// strategy enumerator needs this to evaluate spine questions in context.
pub(crate) fn truthful_in(
    ctx: &EvalContext,
    guard: usize,
    question: &Question,
    restriction: Option<&AnswerSet>,
) -> Result<AnswerSet, EvalError> {
    let agent = seat(ctx, guard)?;
    Eval { ctx }.truthful(agent, question, restriction)
}

fn seat(ctx: &EvalContext, guard: usize) -> Result<Agent, EvalError> {
    if guard >= ctx.roles.len() {
        return Err(EvalError::NoSuchGuard {
            guard,
            count: ctx.roles.len(),
        });
    }
    Ok(Agent {
        position: guard,
        role: ctx.roles.role(guard),
    })
}

struct Eval<'a> {
    ctx: &'a EvalContext<'a>,
}

impl Eval<'_> {
    fn permissible(&self, restriction: Option<&AnswerSet>) -> AnswerSet {
        restriction
            .cloned()
            .unwrap_or_else(|| self.ctx.space.as_set())
    }

    fn reply(
        &self,
        question: &Question,
        restriction: Option<&AnswerSet>,
    ) -> Result<AnswerSet, EvalError> {
        if let Question::Restricted(template, _) = question {
            Ok(template.instantiate_set(self.ctx.world, self.ctx.space)?)
        } else {
            Ok(self.permissible(restriction))
        }
    }

    fn truthful(
        &self,
        agent: Agent,
        question: &Question,
        restriction: Option<&AnswerSet>,
    ) -> Result<AnswerSet, EvalError> {
        match question {
            // The honest answer is the weight itself, if the reply space
            // still admits it.
            Question::Direct => {
                let w = self.ctx.world.true_weight;
                let mut set = AnswerSet::new();
                if self.permissible(restriction).contains(&w) {
                    set.insert(w);
                }
                Ok(set)
            }
            Question::CouldProvideSelf => Err(EvalError::SelfReference),
            // What the one other guard could answer, role and model applied.
            Question::AskOther(inner) => {
                let guards = self.ctx.roles.len();
                if guards != 2 {
                    return Err(EvalError::Arity { guards });
                }
                let other = Agent {
                    position: 1 - agent.position,
                    role: self.ctx.roles.role(1 - agent.position),
                };
                self.support(other, inner, restriction)
            }
            // A counterfactual about a single utterance: it has an honest
            // answer only when the agent's own support is a single point.
            // Otherwise "the answer you would give" denotes nothing, the
            // truthful set is empty, and a truth-teller is stuck while a
            // liar is unconstrained.
            Question::WouldSayYou(inner) => {
                let own = self.support(agent, inner, restriction)?;
                if own.len() == 1 {
                    Ok(own)
                } else {
                    Ok(AnswerSet::new())
                }
            }
            // A capability question: the honest answer names any element of
            // the agent's own support, so the truthful set is that support.
            Question::CouldProvide(inner) => self.support(agent, inner, restriction),
            Question::Restricted(template, inner) => {
                let narrowed = template.instantiate_set(self.ctx.world, self.ctx.space)?;
                self.support(agent, inner, Some(&narrowed))
            }
            // Values the opposite type could not give to the inner question.
            Question::OppositeAvoids(inner) => {
                let opposite = self.opposite(agent);
                let avoided = self.support(opposite, inner, restriction)?;
                Ok(self
                    .permissible(restriction)
                    .difference(&avoided)
                    .copied()
                    .collect())
            }
        }
    }

    /// The agent of the opposite type referred to by `avoid(opposite, ...)`.
    /// With two guards of opposite roles this is the real other guard;
    /// otherwise it is a hypothetical respondent in the same seat.
    fn opposite(&self, agent: Agent) -> Agent {
        let roles = self.ctx.roles;
        if roles.len() == 2 && roles.role(1 - agent.position) == agent.role.opposite() {
            Agent {
                position: 1 - agent.position,
                role: agent.role.opposite(),
            }
        } else {
            Agent {
                position: agent.position,
                role: agent.role.opposite(),
            }
        }
    }

    fn support(
        &self,
        agent: Agent,
        question: &Question,
        restriction: Option<&AnswerSet>,
    ) -> Result<AnswerSet, EvalError> {
        let reply = self.reply(question, restriction)?;
        // Inside a restriction a fixed-rule liar whose rule is blocked may
        // fall back to lying freely; at the top level a blocked rule means
        // the world cannot host the question at all.
        let restricted = matches!(question, Question::Restricted(..)) || restriction.is_some();
        let support = match agent.role {
            Role::TruthTeller => {
                let truthful = self.truthful(agent, question, restriction)?;
                truthful.intersection(&reply).copied().collect()
            }
            Role::Liar => match self.ctx.model {
                LiarModel::Adversarial => {
                    let strategy = self.ctx.strategy.ok_or_else(|| EvalError::StrategyRequired {
                        question: question.clone(),
                    })?;
                    let value = strategy.get(question).ok_or_else(|| {
                        EvalError::StrategyIncomplete {
                            question: question.clone(),
                        }
                    })?;
                    AnswerSet::from([value])
                }
                LiarModel::FullSupport => {
                    let truthful = self.truthful(agent, question, restriction)?;
                    reply.difference(&truthful).copied().collect()
                }
                LiarModel::FixedRule(rule) => {
                    let truthful = self.truthful(agent, question, restriction)?;
                    let fallback = |reply: &AnswerSet, truthful: &AnswerSet| {
                        reply.difference(truthful).copied().collect::<AnswerSet>()
                    };
                    if truthful.len() == 1 {
                        let honest = *truthful.iter().next().expect("len checked");
                        match rule.apply(honest) {
                            Some(image) if reply.contains(&image) => AnswerSet::from([image]),
                            Some(_) | None if restricted => fallback(&reply, &truthful),
                            Some(image) => {
                                return Err(EvalError::FixedRuleLeavesSpace {
                                    value: honest,
                                    image,
                                })
                            }
                            None => return Err(EvalError::FixedRuleUndefined { value: honest }),
                        }
                    } else if restricted {
                        fallback(&reply, &truthful)
                    } else {
                        return Err(EvalError::FixedRuleManyTruths {
                            count: truthful.len(),
                        });
                    }
                }
            },
        };
        if support.is_empty() {
            return Err(EvalError::Stuck {
                role: agent.role,
                question: question.clone(),
            });
        }
        Ok(support)
    }
}

/// Resolution of `could(self)` for a role: the question asks for a set R
/// that equals the respondent's own answering rule applied to R.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixpointReport {
    /// Every candidate set satisfies the equation, so the answer carries no
    /// information. `space_size` is the exponent: there are 2^space_size
    /// candidates.
    Underdetermined { space_size: usize },
    /// No candidate set satisfies the equation; iterating the rule flips
    /// between the two recorded sets forever.
    NoFixpoint { oscillation: (AnswerSet, AnswerSet) },
}

impl fmt::Display for FixpointReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixpointReport::Underdetermined { space_size } => write!(
                f,
                "underdetermined: all 2^{space_size} candidate answer sets are fixed points"
            ),
            FixpointReport::NoFixpoint { oscillation } => write!(
                f,
                "no fixpoint: iteration alternates between a set of {} answers and a set of {}",
                oscillation.0.len(),
                oscillation.1.len()
            ),
        }
    }
}

/// Decides what a respondent of the given role can say to `could(self)`.
///
/// A truth-teller must report exactly the set it could report: any set R
/// satisfies R = R, so the answer is underdetermined. A liar must report a
/// set disjoint from what it could report; asking for R with R = space \ R
/// has no solution, and iterating the rule from the honest starting point
/// oscillates between the full space and the empty set. Both findings
/// depend only on the role, not on the liar model.
pub fn solve_self_reference(role: Role, space: &AnswerSpace) -> FixpointReport {
    match role {
        Role::TruthTeller => FixpointReport::Underdetermined {
            space_size: space.len(),
        },
        Role::Liar => {
            let full = space.as_set();
            let mut current = full.clone();
            loop {
                let next: AnswerSet = full.difference(&current).copied().collect();
                let after: AnswerSet = full.difference(&next).copied().collect();
                if after == current {
                    return FixpointReport::NoFixpoint {
                        oscillation: (current, next),
                    };
                }
                current = next;
            }
        }
    }
}
