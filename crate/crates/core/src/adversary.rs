//! Deterministic liar strategies.
//!
//! The adversarial model lets the liar commit, before answering, to one
//! concrete reply for every question along the prompt's spine, constrained
//! only by per-question falsity: each committed reply must lie outside the
//! liar's truthful set for that question, evaluated with the inner
//! commitments already in force. A prompt only wins against this model if
//! it wins against every such commitment, so the verifier enumerates them
//! exhaustively.

use std::collections::BTreeMap;
use std::fmt;

use crate::model::{LiarModel, RoleAssignment};
use crate::question::Question;
use crate::semantics::{self, AnswerSet, EvalContext, EvalError};
use crate::space::{AnswerSpace, Value, World};

/// One complete commitment: a reply for every question on the spine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    answers: BTreeMap<Question, Value>,
}

impl Strategy {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Question, Value)>) -> Self {
        Strategy {
            answers: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, question: &Question) -> Option<Value> {
        self.answers.get(question).copied()
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&Question, Value)> {
        self.answers.iter().map(|(q, v)| (q, *v))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut entries: Vec<(&Question, Value)> = self.bindings().collect();
        entries.sort_by(|a, b| a.0.depth().cmp(&b.0.depth()).then_with(|| a.0.cmp(b.0)));
        let mut first = true;
        for (question, value) in entries {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{question} -> {value}")?;
            first = false;
        }
        Ok(())
    }
}

/// A spine question together with the reply space the liar answers it from
/// and the restriction enclosing it (if any).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureEntry {
    pub question: Question,
    pub reply: AnswerSet,
    pub context: Option<AnswerSet>,
}

/// The spine of `root`, innermost first, each question paired with the
/// reply space a strategy must choose from. Restrictions instantiate
/// against the given world, so the closure is world-specific.
pub fn closure_entries(
    root: &Question,
    world: World,
    space: &AnswerSpace,
) -> Result<Vec<ClosureEntry>, EvalError> {
    let mut entries = Vec::new();
    let mut enclosing: Option<AnswerSet> = None;
    let mut current = Some(root);
    while let Some(question) = current {
        let own = match question {
            Question::Restricted(template, _) => Some(template.instantiate_set(world, space)?),
            _ => None,
        };
        let reply = own
            .clone()
            .or_else(|| enclosing.clone())
            .unwrap_or_else(|| space.as_set());
        entries.push(ClosureEntry {
            question: question.clone(),
            reply,
            context: enclosing.clone(),
        });
        if own.is_some() {
            enclosing = own;
        }
        current = question.inner();
    }
    entries.reverse();
    Ok(entries)
}

/// Every strategy the liar could commit to for `root` in the given world,
/// in lexicographic order (innermost question varying slowest, candidate
/// replies ascending). An empty result means every commitment dies: the
/// liar is stuck no matter what it plans.
///
/// The role assignment must contain exactly one liar; the verifier
/// guarantees this by requiring exactly-one-each roles for the adversarial
/// model.
pub fn enumerate_strategies(
    root: &Question,
    space: &AnswerSpace,
    roles: &RoleAssignment,
    world: World,
) -> Result<Vec<Strategy>, EvalError> {
    let liars = roles.liar_positions();
    assert_eq!(
        liars.len(),
        1,
        "adversarial strategies are defined for exactly one liar"
    );
    let liar = liars[0];
    let entries = closure_entries(root, world, space)?;
    let mut out = Vec::new();
    let mut partial = Strategy {
        answers: BTreeMap::new(),
    };
    let search = Search {
        entries: &entries,
        liar,
        space,
        roles,
        world,
    };
    search.descend(0, &mut partial, &mut out)?;
    Ok(out)
}

struct Search<'a> {
    entries: &'a [ClosureEntry],
    liar: usize,
    space: &'a AnswerSpace,
    roles: &'a RoleAssignment,
    world: World,
}

impl Search<'_> {
    fn descend(
        &self,
        index: usize,
        partial: &mut Strategy,
        out: &mut Vec<Strategy>,
    ) -> Result<(), EvalError> {
        let Some(entry) = self.entries.get(index) else {
            out.push(partial.clone());
            return Ok(());
        };
        let model = LiarModel::Adversarial;
        let ctx = EvalContext {
            space: self.space,
            roles: self.roles,
            model: &model,
            world: self.world,
            strategy: Some(&*partial),
        };
        // Inner commitments are already bound, so the liar's truthful set
        // for this spine question is well defined. A stuck evaluation just
        // kills this branch of the search.
        let truthful =
            match semantics::truthful_in(&ctx, self.liar, &entry.question, entry.context.as_ref())
            {
                Ok(set) => set,
                Err(EvalError::Stuck { .. }) => return Ok(()),
                Err(other) => return Err(other),
            };
        let candidates: Vec<Value> = entry.reply.difference(&truthful).copied().collect();
        for value in candidates {
            partial.answers.insert(entry.question.clone(), value);
            self.descend(index + 1, partial, out)?;
            partial.answers.remove(&entry.question);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Role;
    use crate::parse::parse;

    fn tl() -> RoleAssignment {
        RoleAssignment::new(vec![Role::TruthTeller, Role::Liar]).unwrap()
    }

    fn bound(strategy: &Strategy, text: &str) -> Value {
        strategy.get(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn direct_question_has_one_choice_per_false_value() {
        let space = AnswerSpace::interval(0, 2).unwrap();
        let q = parse("weight").unwrap();
        let strategies = enumerate_strategies(&q, &space, &tl(), World::new(0)).unwrap();
        assert_eq!(strategies.len(), 2);
        assert_eq!(bound(&strategies[0], "weight"), 1);
        assert_eq!(bound(&strategies[1], "weight"), 2);
    }

    #[test]
    fn nested_counterfactual_multiplies_choices_in_order() {
        let space = AnswerSpace::interval(0, 2).unwrap();
        let q = parse("you(weight)").unwrap();
        let strategies = enumerate_strategies(&q, &space, &tl(), World::new(0)).unwrap();
        let picked: Vec<(Value, Value)> = strategies
            .iter()
            .map(|s| (bound(s, "weight"), bound(s, "you(weight)")))
            .collect();
        // innermost commitment varies slowest; the outer lie avoids the
        // committed inner reply
        assert_eq!(picked, vec![(1, 0), (1, 2), (2, 0), (2, 1)]);
    }

    #[test]
    fn restriction_pins_the_strategy_completely() {
        let space = AnswerSpace::interval(0, 100).unwrap();
        let q = parse("restrict({w,w+10}, weight)").unwrap();
        let strategies = enumerate_strategies(&q, &space, &tl(), World::new(70)).unwrap();
        assert_eq!(strategies.len(), 1);
        assert_eq!(bound(&strategies[0], "weight"), 80);
        assert_eq!(bound(&strategies[0], "restrict({w,w+10}, weight)"), 70);
    }

    #[test]
    fn closure_tracks_reply_spaces_down_the_spine() {
        let space = AnswerSpace::interval(0, 100).unwrap();
        let q = parse("restrict({w,w+10}, weight)").unwrap();
        let entries = closure_entries(&q, World::new(70), &space).unwrap();
        assert_eq!(entries.len(), 2);
        let pair: AnswerSet = [70, 80].into_iter().collect();
        // innermost first: the bare question answers inside the pair it is
        // enclosed by, and the restriction itself replies from its own pair
        assert_eq!(entries[0].question, parse("weight").unwrap());
        assert_eq!(entries[0].reply, pair);
        assert_eq!(entries[0].context, Some(pair.clone()));
        assert_eq!(entries[1].question, q);
        assert_eq!(entries[1].reply, pair);
        assert_eq!(entries[1].context, None);
    }

    #[test]
    fn enumeration_matches_brute_force_filtering() {
        let space = AnswerSpace::interval(0, 2).unwrap();
        let assignment = tl();
        for prompt in ["you(weight)", "could(weight)", "avoid(opposite, weight)"] {
            let q = parse(prompt).unwrap();
            for w in 0..=2 {
                let world = World::new(w);
                let fast = enumerate_strategies(&q, &space, &assignment, world).unwrap();
                let slow = brute_force(&q, &space, &assignment, world);
                assert_eq!(fast, slow, "prompt {prompt}, world {w}");
            }
        }
    }

    /// Builds every total assignment of replies and keeps those where each
    /// reply is false given the full commitment.
    fn brute_force(
        root: &Question,
        space: &AnswerSpace,
        roles: &RoleAssignment,
        world: World,
    ) -> Vec<Strategy> {
        let entries = closure_entries(root, world, space).unwrap();
        let liar = roles.liar_positions()[0];
        let mut all = vec![Strategy::from_pairs([])];
        for entry in &entries {
            let mut grown = Vec::new();
            for base in &all {
                for value in &entry.reply {
                    let mut pairs: Vec<(Question, Value)> =
                        base.bindings().map(|(q, v)| (q.clone(), v)).collect();
                    pairs.push((entry.question.clone(), *value));
                    grown.push(Strategy::from_pairs(pairs));
                }
            }
            all = grown;
        }
        let model = LiarModel::Adversarial;
        all.retain(|strategy| {
            entries.iter().all(|entry| {
                let ctx = EvalContext {
                    space,
                    roles,
                    model: &model,
                    world,
                    strategy: Some(strategy),
                };
                match semantics::truthful_in(&ctx, liar, &entry.question, entry.context.as_ref()) {
                    Ok(truthful) => !truthful.contains(&strategy.get(&entry.question).unwrap()),
                    Err(_) => false,
                }
            })
        });
        all
    }

    #[test]
    fn display_lists_bindings_innermost_first() {
        let strategy = Strategy::from_pairs([
            (parse("you(weight)").unwrap(), 0),
            (parse("weight").unwrap(), 2),
        ]);
        assert_eq!(strategy.to_string(), "weight -> 2, you(weight) -> 0");
    }
}
