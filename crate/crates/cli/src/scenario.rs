//! Scenario files: the line-oriented `key=value` setup every subcommand
//! reads.
//!
//! ```text
//! # an ordinary scenario
//! space=0..100          # or space={0,5,9}
//! guards=2              # default 2
//! roles=exactly-one-each# or any; default exactly-one-each
//! liar=full_support     # or fixed(<offset>) or adversarial; default full_support
//! prompt="could(weight)"
//! seed=7                # play only; sampled if absent
//! budget=1              # play only; default 1
//! templates={w,w+10};{0,w}   # synth only
//! ```
//!
//! Comments are whole lines starting with `#`. Keys may appear in any
//! order, at most once each. Errors carry the 1-based line number.

use thiserror::Error;

use guards_core::{
    parse, parse_template, AnswerSpace, AssignmentMode, FixedRule, LiarModel, Question,
    SetTemplate, Value, MAX_GUARDS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Field { line: usize, message: String },
    #[error("missing required key '{0}'")]
    Missing(&'static str),
}

fn field(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Field {
        line,
        message: message.into(),
    }
}

/// A fully assembled scenario. `prompt`, `seed`, and `templates` are
/// optional in the file; the subcommands demand what they need.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub space: AnswerSpace,
    pub guard_count: usize,
    pub mode: AssignmentMode,
    pub liar: LiarModel,
    pub prompt: Option<Question>,
    pub seed: Option<u64>,
    pub budget: usize,
    pub templates: Vec<SetTemplate>,
}

impl Scenario {
    /// One-line summary for report headers.
    pub fn describe(&self) -> String {
        let roles = match self.mode {
            AssignmentMode::ExactlyOneEach => "exactly-one-each",
            AssignmentMode::Any => "any",
        };
        format!(
            "space: {}; guards: {}; roles: {}; liar: {}",
            self.space, self.guard_count, roles, self.liar
        )
    }
}

const KNOWN_KEYS: [&str; 8] = [
    "space",
    "guards",
    "roles",
    "liar",
    "prompt",
    "seed",
    "budget",
    "templates",
];

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    // First pass: collect each key with its line number, rejecting
    // unknown and duplicate keys where they stand.
    let mut fields: Vec<(&'static str, usize, String)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(field(line, "expected key=value"));
        };
        let key = key.trim();
        let Some(&key) = KNOWN_KEYS.iter().find(|k| **k == key) else {
            return Err(field(
                line,
                format!("unknown key '{key}' (known: {})", KNOWN_KEYS.join(", ")),
            ));
        };
        if fields.iter().any(|(k, _, _)| *k == key) {
            return Err(field(line, format!("duplicate key '{key}'")));
        }
        fields.push((key, line, value.trim().to_string()));
    }
    let lookup = |key: &str| fields.iter().find(|(k, _, _)| *k == key);

    // The space comes first: the fixed-rule model is built over it.
    let (_, line, value) = lookup("space").ok_or(ScenarioError::Missing("space"))?;
    let space = parse_space(*line, value)?;

    let guard_count = match lookup("guards") {
        None => 2,
        Some((_, line, value)) => {
            let n: usize = value
                .parse()
                .map_err(|_| field(*line, "guards must be an integer"))?;
            if n == 0 || n > MAX_GUARDS {
                return Err(field(
                    *line,
                    format!("guards must be between 1 and {MAX_GUARDS}"),
                ));
            }
            n
        }
    };

    let mode = match lookup("roles") {
        None => AssignmentMode::ExactlyOneEach,
        Some((_, line, value)) => match value.as_str() {
            "exactly-one-each" => AssignmentMode::ExactlyOneEach,
            "any" => AssignmentMode::Any,
            other => {
                return Err(field(
                    *line,
                    format!("roles must be exactly-one-each or any, not '{other}'"),
                ))
            }
        },
    };

    let liar = match lookup("liar") {
        None => LiarModel::FullSupport,
        Some((_, line, value)) => parse_liar(*line, value, &space)?,
    };

    let prompt = match lookup("prompt") {
        None => None,
        Some((_, line, value)) => {
            let inner = value
                .strip_prefix('"')
                .and_then(|v| v.strip_suffix('"'))
                .ok_or_else(|| field(*line, "prompt must be wrapped in double quotes"))?;
            Some(parse(inner).map_err(|e| field(*line, e.to_string()))?)
        }
    };

    let seed = match lookup("seed") {
        None => None,
        Some((_, line, value)) => Some(
            value
                .parse::<u64>()
                .map_err(|_| field(*line, "seed must be a non-negative integer"))?,
        ),
    };

    let budget = match lookup("budget") {
        None => 1,
        Some((_, line, value)) => {
            let n: usize = value
                .parse()
                .map_err(|_| field(*line, "budget must be an integer"))?;
            if n == 0 {
                return Err(field(*line, "budget must be at least 1"));
            }
            n
        }
    };

    let templates = match lookup("templates") {
        None => Vec::new(),
        Some((_, line, value)) => value
            .split(';')
            .map(|part| parse_template(part).map_err(|e| field(*line, e.to_string())))
            .collect::<Result<Vec<SetTemplate>, ScenarioError>>()?,
    };

    Ok(Scenario {
        space,
        guard_count,
        mode,
        liar,
        prompt,
        seed,
        budget,
        templates,
    })
}

fn parse_space(line: usize, value: &str) -> Result<AnswerSpace, ScenarioError> {
    if let Some(inner) = value.strip_prefix('{').and_then(|v| v.strip_suffix('}')) {
        let values = inner
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<Value>()
                    .map_err(|_| field(line, format!("'{}' is not an integer", part.trim())))
            })
            .collect::<Result<Vec<Value>, ScenarioError>>()?;
        return AnswerSpace::from_values(values).map_err(|e| field(line, e.to_string()));
    }
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: Value = lo
            .trim()
            .parse()
            .map_err(|_| field(line, format!("'{}' is not an integer", lo.trim())))?;
        let hi: Value = hi
            .trim()
            .parse()
            .map_err(|_| field(line, format!("'{}' is not an integer", hi.trim())))?;
        return AnswerSpace::interval(lo, hi).map_err(|e| field(line, e.to_string()));
    }
    Err(field(line, "space must be <lo>..<hi> or {v1,v2,...}"))
}

fn parse_liar(line: usize, value: &str, space: &AnswerSpace) -> Result<LiarModel, ScenarioError> {
    match value {
        "full_support" => return Ok(LiarModel::FullSupport),
        "adversarial" => return Ok(LiarModel::Adversarial),
        _ => {}
    }
    if let Some(inner) = value.strip_prefix("fixed(").and_then(|v| v.strip_suffix(')')) {
        let delta: Value = inner
            .trim()
            .parse()
            .map_err(|_| field(line, format!("'{}' is not an integer offset", inner.trim())))?;
        if delta == 0 {
            return Err(field(line, "fixed rule must change the answer"));
        }
        let rule = FixedRule::offset(delta, space).map_err(|e| field(line, e.to_string()))?;
        return Ok(LiarModel::FixedRule(rule));
    }
    Err(field(
        line,
        format!("liar must be full_support, fixed(<offset>), or adversarial, not '{value}'"),
    ))
}
