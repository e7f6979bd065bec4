//! Grammar-bounded search for winning prompts.
//!
//! The search is brute force on purpose: the grammar up to a small depth is
//! tiny, and running the full verifier on each candidate gives the same
//! guarantees for synthesized prompts as for handwritten ones. Candidates
//! built on `could(self)` cannot be verified at all; they are set aside
//! with a note from the fixpoint analysis explaining why.

use std::fmt;

use crate::model::{LiarModel, Role};
use crate::question::{enumerate_grammar, Question};
use crate::semantics::solve_self_reference;
use crate::space::AnswerSpace;
use crate::template::SetTemplate;
use crate::verifier::{verify, Counterexample, Verdict, VerifyError, VerifyOptions};

/// Coarse classification of why a candidate fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterexampleKind {
    /// Two worlds can produce the same answer.
    Collision,
    /// Some respondent can end up with no permitted answer.
    Stuck,
}

impl fmt::Display for CounterexampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterexampleKind::Collision => f.write_str("collision"),
            CounterexampleKind::Stuck => f.write_str("stuck"),
        }
    }
}

/// Every candidate in the grammar, sorted by what the verifier said.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisReport {
    /// Total number of candidates enumerated.
    pub examined: usize,
    /// Winning prompts with their decoder descriptions.
    pub winning: Vec<(Question, String)>,
    /// Losing prompts with the kind of counterexample found.
    pub failing: Vec<(Question, CounterexampleKind)>,
    /// Prompts that cannot be asked in any world, or that do not fit the
    /// scenario shape, with the reason.
    pub invalid: Vec<(Question, String)>,
    /// Prompts built on could(self), with the fixpoint diagnosis.
    pub self_referential: Vec<(Question, String)>,
}

/// Runs the verifier over every prompt in the grammar up to `max_depth`.
pub fn synthesize(
    space: &AnswerSpace,
    model: &LiarModel,
    options: &VerifyOptions,
    max_depth: usize,
    templates: &[SetTemplate],
) -> Result<SynthesisReport, VerifyError> {
    let candidates = enumerate_grammar(max_depth, templates);
    let mut report = SynthesisReport {
        examined: candidates.len(),
        winning: Vec::new(),
        failing: Vec::new(),
        invalid: Vec::new(),
        self_referential: Vec::new(),
    };
    for question in candidates {
        if question.contains_self_reference() {
            let note = format!(
                "truth-teller: {}; liar: {}",
                solve_self_reference(Role::TruthTeller, space),
                solve_self_reference(Role::Liar, space)
            );
            report.self_referential.push((question, note));
            continue;
        }
        match verify(&question, space, model, options) {
            Ok(Verdict::Winning { decoder, .. }) => {
                report.winning.push((question, decoder.describe()));
            }
            Ok(Verdict::NotWinning { counterexample, .. }) => {
                let kind = match counterexample {
                    Counterexample::Collision { .. } => CounterexampleKind::Collision,
                    Counterexample::Stuck { .. } => CounterexampleKind::Stuck,
                };
                report.failing.push((question, kind));
            }
            Ok(Verdict::Invalid { reason, .. }) => {
                report.invalid.push((question, reason));
            }
            // a candidate that does not fit the scenario (for example
            // other() with three guards) is reported, not fatal
            Err(VerifyError::Validation(reason)) => {
                report.invalid.push((question, reason));
            }
            Err(other) => return Err(other),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn names(list: &[(Question, String)]) -> Vec<String> {
        list.iter().map(|(q, _)| q.to_string()).collect()
    }

    #[test]
    fn depth_two_search_finds_the_two_robust_prompts() {
        let space = AnswerSpace::interval(0, 2).unwrap();
        let report = synthesize(
            &space,
            &LiarModel::FullSupport,
            &VerifyOptions::default(),
            2,
            &[],
        )
        .unwrap();
        assert_eq!(report.examined, 10);
        assert_eq!(
            names(&report.winning),
            vec!["could(weight)", "avoid(opposite, weight)"]
        );
        let failing: Vec<String> = report.failing.iter().map(|(q, _)| q.to_string()).collect();
        assert_eq!(failing, vec!["weight", "other(weight)", "you(weight)"]);
        assert!(report.invalid.is_empty());
        assert_eq!(report.self_referential.len(), 5);
    }

    #[test]
    fn self_referential_candidates_carry_the_fixpoint_note() {
        let space = AnswerSpace::interval(0, 2).unwrap();
        let report = synthesize(
            &space,
            &LiarModel::FullSupport,
            &VerifyOptions::default(),
            1,
            &[],
        )
        .unwrap();
        assert_eq!(report.examined, 2);
        let (question, note) = &report.self_referential[0];
        assert_eq!(*question, parse("could(self)").unwrap());
        assert!(note.contains("underdetermined"));
        assert!(note.contains("no fixpoint"));
    }

    #[test]
    fn grammar_growth_only_adds_candidates() {
        let space = AnswerSpace::interval(0, 2).unwrap();
        let shallow = synthesize(
            &space,
            &LiarModel::FullSupport,
            &VerifyOptions::default(),
            1,
            &[],
        )
        .unwrap();
        let deep = synthesize(
            &space,
            &LiarModel::FullSupport,
            &VerifyOptions::default(),
            2,
            &[],
        )
        .unwrap();
        assert!(deep.examined > shallow.examined);
        for (question, _) in &shallow.winning {
            assert!(deep.winning.iter().any(|(q, _)| q == question));
        }
    }
}
