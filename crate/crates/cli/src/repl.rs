//! The interactive round: one hidden world, one hidden deal of roles, a
//! budget of questions, and at most one guess.
//!
//! Guards are numbered from 1 in everything the player sees. Asks that
//! reach a guard consume budget, even when the guard has nothing to say;
//! rejected input (unparseable questions, bad guard numbers, asking with
//! no budget left) does not. `guess` and `reveal` stay available after
//! the budget runs out. Under the adversarial model the liar commits to a
//! fresh strategy for every ask: it is not bound across questions.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use guards_core::{
    enumerate_assignments, enumerate_strategies, parse, response_support, AnswerSpace,
    AssignmentMode, EvalContext, EvalError, LiarModel, Question, Role, RoleAssignment, Value,
    World,
};

use crate::scenario::Scenario;

pub struct Session {
    space: AnswerSpace,
    model: LiarModel,
    roles: RoleAssignment,
    world: World,
    rng: ChaCha8Rng,
    asks_left: usize,
    seed: u64,
}

/// What one input line produced: output lines, and an exit code once the
/// round is over.
pub enum Step {
    Continue(Vec<String>),
    Finished(Vec<String>, u8),
}

impl Session {
    pub fn new(scenario: &Scenario, seed: u64) -> Result<Self, String> {
        if scenario.liar == LiarModel::Adversarial && scenario.mode != AssignmentMode::ExactlyOneEach
        {
            return Err("the adversarial model requires roles=exactly-one-each".to_string());
        }
        let assignments = enumerate_assignments(scenario.guard_count, scenario.mode)
            .map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let world = World::new(scenario.space.values()[rng.random_range(0..scenario.space.len())]);
        let roles = assignments[rng.random_range(0..assignments.len())].clone();
        Ok(Session {
            space: scenario.space.clone(),
            model: scenario.liar.clone(),
            roles,
            world,
            rng,
            asks_left: scenario.budget,
            seed,
        })
    }

    pub fn greeting(&self, scenario: &Scenario) -> Vec<String> {
        vec![
            format!(
                "a weight was hidden in {} and the roles were dealt",
                self.space
            ),
            scenario.describe(),
            format!("seed {}; questions available: {}", self.seed, self.asks_left),
            "commands: ask <guard> <question> | guess <value> | reveal | help | quit".to_string(),
        ]
    }

    pub fn step(&mut self, line: &str) -> Step {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            return Step::Continue(Vec::new());
        }
        let (word, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((w, r)) => (w, r),
            None => (trimmed, ""),
        };
        match word {
            "help" => Step::Continue(vec![
                "ask <guard> <question>   pose a question, e.g. ask 1 could(weight)".to_string(),
                "guess <value>            commit to a weight and end the round".to_string(),
                "reveal                   give up and see the hidden setup".to_string(),
                "quit                     leave without guessing".to_string(),
            ]),
            "quit" => Step::Finished(vec!["goodbye".to_string()], 0),
            "reveal" => Step::Finished(
                vec![format!(
                    "the weight was {}; the roles were {}",
                    self.world.true_weight, self.roles
                )],
                0,
            ),
            "guess" => self.guess(rest),
            "ask" => self.ask(rest),
            other => Step::Continue(vec![format!("unknown command '{other}'; try help")]),
        }
    }

    fn guess(&mut self, rest: &str) -> Step {
        let Ok(value) = rest.trim().parse::<Value>() else {
            return Step::Continue(vec![
                "guess needs an integer, like: guess 12".to_string()
            ]);
        };
        if value == self.world.true_weight {
            Step::Finished(vec![format!("correct: the weight is {value}")], 0)
        } else {
            Step::Finished(
                vec![format!("wrong: the weight was {}", self.world.true_weight)],
                1,
            )
        }
    }

    fn ask(&mut self, rest: &str) -> Step {
        let usage = || {
            Step::Continue(vec![
                "ask needs a guard number and a question, like: ask 1 could(weight)".to_string(),
            ])
        };
        let rest = rest.trim_start();
        let (index_text, question_text) = match rest.split_once(char::is_whitespace) {
            Some((i, q)) => (i, q),
            None => return usage(),
        };
        let Ok(number) = index_text.parse::<usize>() else {
            return usage();
        };
        if number == 0 || number > self.roles.len() {
            return Step::Continue(vec![format!(
                "there is no guard {number}; guards are numbered 1..{}",
                self.roles.len()
            )]);
        }
        if self.asks_left == 0 {
            return Step::Continue(vec![
                "no questions left; guess <value> or reveal".to_string()
            ]);
        }
        let question = match parse(question_text) {
            Ok(q) => q,
            Err(e) => return Step::Continue(vec![e.to_string()]),
        };
        if question.contains_ask_other() && self.roles.len() != 2 {
            return Step::Continue(vec![format!(
                "other(...) needs exactly 2 guards; there are {}",
                self.roles.len()
            )]);
        }

        // From here on the question is spent, whatever comes of it.
        self.asks_left -= 1;
        let seat = number - 1;

        if question == Question::CouldProvideSelf {
            return Step::Continue(match self.roles.role(seat) {
                Role::TruthTeller => {
                    let index = self.rng.random_range(0..self.space.len());
                    let value = self.space.values()[index];
                    vec![
                        format!("guard {number} answers {value}"),
                        "note: could(self) is underdetermined for a truth-teller; \
                         any answer satisfies it"
                            .to_string(),
                    ]
                }
                Role::Liar => vec![
                    format!("guard {number} says nothing"),
                    "note: no answer set is a fixpoint of could(self) for a liar".to_string(),
                ],
            });
        }
        if question.contains_self_reference() {
            return Step::Continue(vec![format!(
                "guard {number} cannot make sense of a question built on could(self)"
            )]);
        }

        let strategy = if self.model == LiarModel::Adversarial {
            match enumerate_strategies(&question, &self.space, &self.roles, self.world) {
                Ok(list) if list.is_empty() => {
                    return Step::Continue(vec![format!("guard {number} says nothing")]);
                }
                Ok(list) => {
                    let index = self.rng.random_range(0..list.len());
                    Some(list[index].clone())
                }
                Err(e) if e.excludes_world() => {
                    return Step::Continue(vec![format!("guard {number} says nothing")]);
                }
                Err(e) => {
                    return Step::Continue(vec![format!("guard {number} cannot answer: {e}")]);
                }
            }
        } else {
            None
        };

        let ctx = EvalContext {
            space: &self.space,
            roles: &self.roles,
            model: &self.model,
            world: self.world,
            strategy: strategy.as_ref(),
        };
        match response_support(&ctx, seat, &question) {
            Ok(support) => {
                let options: Vec<Value> = support.into_iter().collect();
                let answer = options[self.rng.random_range(0..options.len())];
                Step::Continue(vec![format!("guard {number} answers {answer}")])
            }
            Err(EvalError::Stuck { .. }) => {
                Step::Continue(vec![format!("guard {number} says nothing")])
            }
            Err(e) if e.excludes_world() => {
                Step::Continue(vec![format!("guard {number} says nothing")])
            }
            Err(e) => Step::Continue(vec![format!("guard {number} cannot answer: {e}")]),
        }
    }
}

/// Drives a session over generic line input, for the binary and for
/// transcript tests. Returns the exit code.
pub fn run<R: BufRead, W: Write>(
    scenario: &Scenario,
    input: R,
    output: &mut W,
) -> Result<u8, String> {
    let seed = scenario.seed.unwrap_or_else(|| rand::rng().random());
    let mut session = Session::new(scenario, seed)?;
    let echo = |output: &mut W, lines: &[String]| -> Result<(), String> {
        for line in lines {
            writeln!(output, "{line}").map_err(|e| e.to_string())?;
        }
        Ok(())
    };
    echo(output, &session.greeting(scenario))?;
    let mut lines = input.lines();
    loop {
        write!(output, "> ").map_err(|e| e.to_string())?;
        output.flush().map_err(|e| e.to_string())?;
        let Some(line) = lines.next() else {
            writeln!(output).map_err(|e| e.to_string())?;
            return Ok(0); // end of input without a guess
        };
        let line = line.map_err(|e| e.to_string())?;
        match session.step(&line) {
            Step::Continue(out) => echo(output, &out)?,
            Step::Finished(out, code) => {
                echo(output, &out)?;
                return Ok(code);
            }
        }
    }
}
