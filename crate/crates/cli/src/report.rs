//! Renders engine results for people and for machines.
//!
//! Human output is line-oriented and keeps long lists short; machine output
//! is one JSON document on stdout with stable field names.

use serde_json::{json, Value as Json};

use guards_core::{
    AnswerSet, AnswerSpace, Counterexample, ExcludedWorld, FixpointReport, Question,
    SynthesisReport, Verdict,
};

/// Shows an answer set relative to its space: the whole space prints as
/// `S`, the empty set as the empty-set sign, anything else as its elements.
pub fn set_text(set: &AnswerSet, space: &AnswerSpace) -> String {
    if set.is_empty() {
        return "\u{2205}".to_string();
    }
    if set.len() == space.len() && space.iter().all(|v| set.contains(&v)) {
        return "S".to_string();
    }
    let elements: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", elements.join(", "))
}

/// One line of the fixpoint analysis, prefixed with the role it covers.
pub fn fixpoint_line(label: &str, report: &FixpointReport, space: &AnswerSpace) -> String {
    match report {
        FixpointReport::Underdetermined { space_size } => format!(
            "{label}: UNDERDETERMINED: all 2^{space_size} candidate answer sets are fixed points"
        ),
        FixpointReport::NoFixpoint { oscillation } => format!(
            "{label}: NO FIXPOINT: oscillates between {} and {}",
            set_text(&oscillation.0, space),
            set_text(&oscillation.1, space)
        ),
    }
}

fn excluded_summary(excluded: &[ExcludedWorld]) -> Option<String> {
    if excluded.is_empty() {
        return None;
    }
    let shown: Vec<String> = excluded
        .iter()
        .take(3)
        .map(|e| format!("{} ({})", e.world, e.reason))
        .collect();
    let mut line = format!("excluded worlds ({}): {}", excluded.len(), shown.join(", "));
    if excluded.len() > 3 {
        line.push_str(&format!(", and {} more", excluded.len() - 3));
    }
    Some(line)
}

fn excluded_of(verdict: &Verdict) -> &[ExcludedWorld] {
    match verdict {
        Verdict::Winning { excluded, .. }
        | Verdict::NotWinning { excluded, .. }
        | Verdict::Invalid { excluded, .. } => excluded,
    }
}

/// The verdict for human eyes: the headline, supporting detail, and a
/// capped list of excluded worlds.
pub fn verdict_human(verdict: &Verdict) -> Vec<String> {
    let mut lines = vec![verdict.to_string()];
    match verdict {
        Verdict::Winning { decoder, .. } => {
            // named decoders explain themselves; tables get a sample
            if decoder.describe().starts_with("table") {
                for (answer, weight) in decoder.entries().take(8) {
                    lines.push(format!("  answer {answer} means weight {weight}"));
                }
                if decoder.len() > 8 {
                    lines.push(format!("  ... {} entries in all", decoder.len()));
                }
            }
        }
        Verdict::NotWinning {
            counterexample:
                Counterexample::Collision {
                    witness_a,
                    witness_b,
                    ..
                },
            ..
        } => {
            lines.push(format!("  first: {witness_a}"));
            lines.push(format!("  second: {witness_b}"));
        }
        _ => {}
    }
    if let Some(line) = excluded_summary(excluded_of(verdict)) {
        lines.push(line);
    }
    lines
}

fn excluded_json(excluded: &[ExcludedWorld]) -> Json {
    Json::Array(
        excluded
            .iter()
            .map(|e| {
                json!({
                    "world": e.world.true_weight,
                    "reason": e.reason.to_string(),
                })
            })
            .collect(),
    )
}

/// The verdict as one JSON document.
pub fn verdict_json(prompt: &Question, verdict: &Verdict) -> Json {
    match verdict {
        Verdict::Winning {
            decoder,
            outcomes,
            excluded,
        } => json!({
            "prompt": prompt.to_string(),
            "verdict": "winning",
            "decoder": decoder.describe(),
            "entries": decoder.entries().map(|(a, w)| json!([a, w])).collect::<Vec<_>>(),
            "outcomes": outcomes,
            "excluded": excluded_json(excluded),
        }),
        Verdict::NotWinning {
            counterexample,
            excluded,
        } => {
            let detail = match counterexample {
                Counterexample::Collision {
                    answer,
                    world_a,
                    world_b,
                    witness_a,
                    witness_b,
                } => json!({
                    "kind": "collision",
                    "answer": answer,
                    "world_a": world_a.true_weight,
                    "world_b": world_b.true_weight,
                    "witness_a": witness_a.to_string(),
                    "witness_b": witness_b.to_string(),
                }),
                Counterexample::Stuck {
                    world,
                    assignment,
                    strategy,
                    question,
                } => json!({
                    "kind": "stuck",
                    "world": world.true_weight,
                    "roles": assignment.to_string(),
                    "strategy": strategy,
                    "question": question.to_string(),
                }),
            };
            json!({
                "prompt": prompt.to_string(),
                "verdict": "not_winning",
                "counterexample": detail,
                "excluded": excluded_json(excluded),
            })
        }
        Verdict::Invalid { reason, excluded } => json!({
            "prompt": prompt.to_string(),
            "verdict": "invalid",
            "reason": reason,
            "excluded": excluded_json(excluded),
        }),
    }
}

/// The synthesis report for human eyes: one bucket per verdict kind.
pub fn synthesis_human(report: &SynthesisReport, max_depth: usize) -> Vec<String> {
    let mut lines = vec![format!(
        "examined {} prompts up to depth {max_depth}",
        report.examined
    )];
    lines.push(format!("winning ({}):", report.winning.len()));
    for (question, decoder) in &report.winning {
        lines.push(format!("  {question}  [decoder: {decoder}]"));
    }
    lines.push(format!("failing ({}):", report.failing.len()));
    for (question, kind) in &report.failing {
        lines.push(format!("  {question}  [{kind}]"));
    }
    lines.push(format!("invalid ({}):", report.invalid.len()));
    for (question, reason) in &report.invalid {
        lines.push(format!("  {question}  [{reason}]"));
    }
    lines.push(format!(
        "self-referential ({}):",
        report.self_referential.len()
    ));
    for (question, note) in &report.self_referential {
        lines.push(format!("  {question}  [{note}]"));
    }
    lines
}

/// The synthesis report as one JSON document.
pub fn synthesis_json(report: &SynthesisReport, max_depth: usize) -> Json {
    json!({
        "examined": report.examined,
        "max_depth": max_depth,
        "winning": report.winning.iter().map(|(q, d)| json!({
            "prompt": q.to_string(),
            "decoder": d,
        })).collect::<Vec<_>>(),
        "failing": report.failing.iter().map(|(q, k)| json!({
            "prompt": q.to_string(),
            "kind": k.to_string(),
        })).collect::<Vec<_>>(),
        "invalid": report.invalid.iter().map(|(q, r)| json!({
            "prompt": q.to_string(),
            "reason": r,
        })).collect::<Vec<_>>(),
        "self_referential": report.self_referential.iter().map(|(q, n)| json!({
            "prompt": q.to_string(),
            "note": n,
        })).collect::<Vec<_>>(),
    })
}

fn fixpoint_json(report: &FixpointReport) -> Json {
    match report {
        FixpointReport::Underdetermined { space_size } => json!({
            "kind": "underdetermined",
            "space_size": space_size,
        }),
        FixpointReport::NoFixpoint { oscillation } => json!({
            "kind": "no_fixpoint",
            "sizes": [oscillation.0.len(), oscillation.1.len()],
        }),
    }
}

/// Both fixpoint analyses as one JSON document.
pub fn fixpoints_json(
    space: &AnswerSpace,
    truth_teller: &FixpointReport,
    liar: &FixpointReport,
) -> Json {
    json!({
        "space": space.to_string(),
        "truth_teller": fixpoint_json(truth_teller),
        "liar": fixpoint_json(liar),
    })
}
