//! Exhaustive analysis of weight-guessing puzzles posed to a pair of
//! guards, one of whom lies.
//!
//! A hidden weight is drawn from a finite answer space. A prompt, written
//! in a small question language, is posed to one guard without knowing
//! whether that guard tells the truth or lies. The prompt **wins** if every
//! answer that can possibly come back identifies the weight uniquely, no
//! matter how the roles were dealt and no matter how the liar exercises
//! whatever freedom its model grants.
//!
//! The crate provides:
//!
//! * the question language: an AST ([`Question`]), a parser ([`parse`]),
//!   and a canonical printer;
//! * evaluation semantics ([`truthful_set`], [`response_support`]) under
//!   three liar models ([`LiarModel`]): a fixed value-rewriting rule, free
//!   choice among false answers, and an adversarial liar that commits to
//!   deterministic replies in advance;
//! * the exhaustive verifier ([`verify`]), which either hands back a
//!   [`Decoder`] mapping answers to weights or a concrete
//!   [`Counterexample`];
//! * a grammar-bounded synthesizer ([`synthesize`]) that searches for
//!   winning prompts;
//! * a fixpoint analysis ([`solve_self_reference`]) for the one question
//!   the verifier refuses to touch, `could(self)`.

pub mod adversary;
pub mod model;
pub mod parse;
pub mod question;
pub mod semantics;
pub mod space;
pub mod synth;
pub mod template;
pub mod verifier;

pub use adversary::{closure_entries, enumerate_strategies, ClosureEntry, Strategy};
pub use model::{
    enumerate_assignments, AssignmentMode, FixedRule, LiarModel, ModeError, ModelError, Role,
    RoleAssignment, MAX_GUARDS,
};
pub use parse::{parse, parse_template, ParseError};
pub use question::{enumerate_grammar, Question};
pub use semantics::{
    reply_space, response_support, solve_self_reference, truthful_set, AnswerSet, EvalContext,
    EvalError, FixpointReport,
};
pub use space::{AnswerSpace, SpaceError, Value, World, MAX_SPACE};
pub use synth::{synthesize, CounterexampleKind, SynthesisReport};
pub use template::{InvalidWorld, SetTemplate, TemplateError};
pub use verifier::{
    outcomes, valid_worlds, verify, Behavior, Counterexample, DecodeError, Decoder, ExcludedWorld,
    Outcome, Verdict, VerifyError, VerifyOptions,
};
