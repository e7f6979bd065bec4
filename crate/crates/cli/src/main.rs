//! Command line front end for the guard puzzle engine.
//!
//! Every subcommand reads a scenario file and works from it: `verify`
//! judges the prompt, `eval` shows the machinery in one chosen world,
//! `synth` searches the grammar for winning prompts, `fixpoint` analyzes
//! `could(self)`, and `play` runs one hidden round on stdin and stdout.
//!
//! Exit codes: 0 for success (a winning prompt, a found winner, a correct
//! or absent guess), 1 for a clean negative (not winning, no winner, a
//! wrong guess), 2 for anything that stops the command from answering.

mod repl;
mod report;
mod scenario;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use guards_core::{
    enumerate_assignments, enumerate_strategies, reply_space, response_support,
    solve_self_reference, synthesize, truthful_set, verify, AssignmentMode, EvalContext,
    LiarModel, Question, Role, Value, Verdict, VerifyOptions, World,
};

use crate::scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "guards",
    version,
    about = "verify, explore, and play weight-guessing prompts against a liar"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the scenario's prompt always recovers the weight
    Verify {
        /// Scenario file to read
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// Which guard the prompt is posed to, numbered from 1
        #[arg(long, default_value_t = 1)]
        asked_guard: usize,
    },
    /// Show truthful sets and answer supports in one chosen world
    Eval {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// The hidden weight to evaluate under
        #[arg(long)]
        world: Value,
        /// Which guard the prompt is posed to, numbered from 1
        #[arg(long, default_value_t = 1)]
        asked_guard: usize,
    },
    /// Search the question grammar for winning prompts
    Synth {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// How many nested question layers to enumerate
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
    },
    /// Analyze what could(self) pins down for each role
    Fixpoint {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Play one hidden round interactively
    Play {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify {
            scenario,
            format,
            asked_guard,
        } => verify_command(&scenario, format, asked_guard),
        Command::Eval {
            scenario,
            format,
            world,
            asked_guard,
        } => eval_command(&scenario, format, world, asked_guard),
        Command::Synth {
            scenario,
            format,
            max_depth,
        } => synth_command(&scenario, format, max_depth),
        Command::Fixpoint { scenario, format } => fixpoint_command(&scenario, format),
        Command::Play { scenario } => play_command(&scenario),
    }
}

fn load(path: &Path) -> Result<Scenario, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    scenario::parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn required_prompt(scenario: &Scenario) -> Result<Question, String> {
    scenario
        .prompt
        .clone()
        .ok_or_else(|| "the scenario has no prompt; add prompt=\"...\"".to_string())
}

/// Converts a 1-based guard number from the command line into a seat index.
fn seat_index(asked_guard: usize, guard_count: usize) -> Result<usize, String> {
    if asked_guard == 0 || asked_guard > guard_count {
        return Err(format!(
            "there is no guard {asked_guard}; guards are numbered 1..{guard_count}"
        ));
    }
    Ok(asked_guard - 1)
}

/// Prints the chosen rendering. A reader that hangs up early (for example
/// `guards ... | head`) is not an error; any other write failure is fatal.
fn emit(format: Format, human: Vec<String>, machine: serde_json::Value) {
    let mut text = match format {
        Format::Human => human.join("\n"),
        Format::Machine => serde_json::to_string_pretty(&machine).expect("reports serialize"),
    };
    text.push('\n');
    if let Err(e) = io::Write::write_all(&mut io::stdout().lock(), text.as_bytes()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write output: {e}");
            std::process::exit(2);
        }
    }
}

fn verify_command(path: &Path, format: Format, asked_guard: usize) -> Result<ExitCode, String> {
    let scenario = load(path)?;
    let prompt = required_prompt(&scenario)?;
    let options = VerifyOptions {
        mode: scenario.mode,
        guard_count: scenario.guard_count,
        asked_guard: seat_index(asked_guard, scenario.guard_count)?,
    };
    let verdict =
        verify(&prompt, &scenario.space, &scenario.liar, &options).map_err(|e| e.to_string())?;
    let mut human = vec![format!("prompt: {prompt}"), scenario.describe()];
    human.extend(report::verdict_human(&verdict));
    emit(format, human, report::verdict_json(&prompt, &verdict));
    Ok(match verdict {
        Verdict::Winning { .. } => ExitCode::SUCCESS,
        Verdict::NotWinning { .. } => ExitCode::from(1),
        Verdict::Invalid { .. } => ExitCode::from(2),
    })
}

fn synth_command(path: &Path, format: Format, max_depth: usize) -> Result<ExitCode, String> {
    let scenario = load(path)?;
    let options = VerifyOptions {
        mode: scenario.mode,
        guard_count: scenario.guard_count,
        asked_guard: 0,
    };
    let found = synthesize(
        &scenario.space,
        &scenario.liar,
        &options,
        max_depth,
        &scenario.templates,
    )
    .map_err(|e| e.to_string())?;
    let mut human = vec![scenario.describe()];
    human.extend(report::synthesis_human(&found, max_depth));
    emit(format, human, report::synthesis_json(&found, max_depth));
    Ok(if found.winning.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn fixpoint_command(path: &Path, format: Format) -> Result<ExitCode, String> {
    let scenario = load(path)?;
    let honest = solve_self_reference(Role::TruthTeller, &scenario.space);
    let liar = solve_self_reference(Role::Liar, &scenario.space);
    let human = vec![
        format!(
            "space: {} ({} values)",
            scenario.space,
            scenario.space.len()
        ),
        report::fixpoint_line("truth-teller", &honest, &scenario.space),
        report::fixpoint_line("liar", &liar, &scenario.space),
    ];
    emit(
        format,
        human,
        report::fixpoints_json(&scenario.space, &honest, &liar),
    );
    Ok(ExitCode::SUCCESS)
}

fn play_command(path: &Path) -> Result<ExitCode, String> {
    let scenario = load(path)?;
    let stdin = io::stdin().lock();
    let mut stdout = io::stdout().lock();
    let code = repl::run(&scenario, stdin, &mut stdout)?;
    Ok(ExitCode::from(code))
}

fn eval_command(
    path: &Path,
    format: Format,
    world: Value,
    asked_guard: usize,
) -> Result<ExitCode, String> {
    let scenario = load(path)?;
    let prompt = required_prompt(&scenario)?;
    if prompt.contains_self_reference() {
        return Err(
            "the prompt contains could(self), which has no truthful set; \
             use the fixpoint subcommand"
                .to_string(),
        );
    }
    if !scenario.space.contains(world) {
        return Err(format!("world {world} is not in {}", scenario.space));
    }
    if scenario.liar == LiarModel::Adversarial && scenario.mode != AssignmentMode::ExactlyOneEach {
        return Err("the adversarial model needs exactly one liar; use exactly-one-each roles"
            .to_string());
    }
    if prompt.contains_ask_other() && scenario.guard_count != 2 {
        return Err(format!(
            "other() requires exactly two guards, the scenario has {}",
            scenario.guard_count
        ));
    }
    let seat = seat_index(asked_guard, scenario.guard_count)?;
    let world = World::new(world);
    let assignments = enumerate_assignments(scenario.guard_count, scenario.mode)
        .map_err(|e| e.to_string())?;

    let mut human = vec![
        format!("prompt: {prompt}"),
        scenario.describe(),
        format!("world: {world}; asked guard: {asked_guard}"),
    ];
    let mut cases = Vec::new();

    // the reply space depends only on the question and the world
    let reply_ctx = EvalContext {
        space: &scenario.space,
        roles: &assignments[0],
        model: &scenario.liar,
        world,
        strategy: None,
    };
    let reply_json = match reply_space(&reply_ctx, &prompt) {
        Ok(reply) => {
            human.push(format!(
                "reply space: {}",
                report::set_text(&reply, &scenario.space)
            ));
            serde_json::json!(reply.iter().collect::<Vec<_>>())
        }
        Err(e) => {
            human.push(format!("reply space: cannot be formed: {e}"));
            serde_json::json!({ "error": e.to_string() })
        }
    };

    for assignment in &assignments {
        let ctx = EvalContext {
            space: &scenario.space,
            roles: assignment,
            model: &scenario.liar,
            world,
            strategy: None,
        };
        if scenario.liar == LiarModel::Adversarial {
            match enumerate_strategies(&prompt, &scenario.space, assignment, world) {
                Ok(strategies) => {
                    let noun = if strategies.len() == 1 {
                        "strategy"
                    } else {
                        "strategies"
                    };
                    human.push(format!(
                        "roles {assignment}: {} {noun}",
                        strategies.len()
                    ));
                    let mut strategy_json = Vec::new();
                    for (index, strategy) in strategies.iter().enumerate() {
                        let bindings: Vec<String> = strategy
                            .bindings()
                            .map(|(q, v)| format!("{q}={v}"))
                            .collect();
                        let committed = EvalContext {
                            strategy: Some(strategy),
                            ..ctx
                        };
                        let answer = match response_support(&committed, seat, &prompt) {
                            Ok(support) => {
                                let shown = report::set_text(&support, &scenario.space);
                                human.push(format!(
                                    "  strategy {index}: {} -> answers {shown}",
                                    bindings.join(", ")
                                ));
                                serde_json::json!(support.iter().collect::<Vec<_>>())
                            }
                            Err(e) => {
                                human.push(format!(
                                    "  strategy {index}: {} -> {e}",
                                    bindings.join(", ")
                                ));
                                serde_json::json!({ "error": e.to_string() })
                            }
                        };
                        strategy_json.push(serde_json::json!({
                            "bindings": strategy
                                .bindings()
                                .map(|(q, v)| serde_json::json!([q.to_string(), v]))
                                .collect::<Vec<_>>(),
                            "answers": answer,
                        }));
                    }
                    cases.push(serde_json::json!({
                        "roles": assignment.to_string(),
                        "strategies": strategy_json,
                    }));
                }
                Err(e) => {
                    human.push(format!("roles {assignment}: world excluded: {e}"));
                    cases.push(serde_json::json!({
                        "roles": assignment.to_string(),
                        "error": e.to_string(),
                    }));
                }
            }
            continue;
        }
        let truthful = truthful_set(&ctx, seat, &prompt);
        let support = response_support(&ctx, seat, &prompt);
        let describe = |outcome: &Result<guards_core::AnswerSet, guards_core::EvalError>| {
            match outcome {
                Ok(set) => report::set_text(set, &scenario.space),
                Err(e) => format!("({e})"),
            }
        };
        human.push(format!(
            "roles {assignment}: truthful {}, support {}",
            describe(&truthful),
            describe(&support)
        ));
        let to_json = |outcome: Result<guards_core::AnswerSet, guards_core::EvalError>| {
            match outcome {
                Ok(set) => serde_json::json!(set.iter().collect::<Vec<_>>()),
                Err(e) => serde_json::json!({ "error": e.to_string() }),
            }
        };
        cases.push(serde_json::json!({
            "roles": assignment.to_string(),
            "truthful": to_json(truthful),
            "support": to_json(support),
        }));
    }

    let machine = serde_json::json!({
        "prompt": prompt.to_string(),
        "world": world.true_weight,
        "asked_guard": asked_guard,
        "reply": reply_json,
        "cases": cases,
    });
    emit(format, human, machine);
    Ok(ExitCode::SUCCESS)
}
