//! End-to-end acceptance checks.
//!
//! Each test drives a complete scenario whose expected outcome was worked
//! out by hand before the engine was written, and ends by printing a
//! one-line pass marker (visible with `cargo test -- --nocapture`). A
//! failing assertion is the corresponding fail line.

use guards_core::{
    enumerate_strategies, parse, solve_self_reference, synthesize, valid_worlds, verify,
    AnswerSpace, AssignmentMode, Behavior, Counterexample, CounterexampleKind, Decoder,
    ExcludedWorld, FixedRule, FixpointReport, LiarModel, Outcome, Question, Role, RoleAssignment,
    SetTemplate, Value, Verdict, VerifyError, VerifyOptions, World,
};

fn interval(lo: Value, hi: Value) -> AnswerSpace {
    AnswerSpace::interval(lo, hi).expect("a nonempty interval")
}

fn prompt(text: &str) -> Question {
    parse(text).expect("a well-formed prompt")
}

fn roles(pair: [Role; 2]) -> RoleAssignment {
    RoleAssignment::new(pair.to_vec()).expect("a small cast")
}

fn expect_winning(verdict: &Verdict) -> (&Decoder, usize, &[ExcludedWorld]) {
    match verdict {
        Verdict::Winning {
            decoder,
            outcomes,
            excluded,
        } => (decoder, *outcomes, excluded),
        other => panic!("expected a winning verdict, got: {other}"),
    }
}

fn expect_collision(verdict: &Verdict) -> (Value, World, World, &Outcome, &Outcome) {
    match verdict {
        Verdict::NotWinning {
            counterexample:
                Counterexample::Collision {
                    answer,
                    world_a,
                    world_b,
                    witness_a,
                    witness_b,
                },
            ..
        } => (*answer, *world_a, *world_b, witness_a, witness_b),
        other => panic!("expected a collision, got: {other}"),
    }
}

/// Criterion 1: the classic relay. Asking what the other guard would say
/// recovers the weight whenever the lie is invertible: with two worlds a
/// free liar can only swap them, and under an offset rule every respondent
/// reports `w + delta`.
#[test]
fn criterion_1_relay_question_recovers_the_weight() {
    let two = interval(0, 1);
    let relay = prompt("other(weight)");
    let options = VerifyOptions::default();

    let verdict = verify(&relay, &two, &LiarModel::FullSupport, &options).unwrap();
    let (decoder, count, excluded) = expect_winning(&verdict);
    assert_eq!(decoder.describe(), "swap 0 <-> 1");
    assert_eq!(decoder.decode(0), Ok(1));
    assert_eq!(decoder.decode(1), Ok(0));
    assert_eq!(count, 4);
    assert!(excluded.is_empty());

    let hundred = interval(0, 100);
    let plus_ten = LiarModel::FixedRule(FixedRule::offset(10, &hundred).unwrap());
    let verdict = verify(&relay, &hundred, &plus_ten, &options).unwrap();
    let (decoder, count, excluded) = expect_winning(&verdict);
    assert_eq!(decoder.describe(), "answer - 10");
    assert_eq!(decoder.decode(10), Ok(0));
    assert_eq!(decoder.decode(100), Ok(90));
    assert_eq!(count, 182);

    // Worlds 91..=100 cannot host the question: the rule would push the
    // answer past the end of the space.
    let excluded_worlds: Vec<Value> = excluded.iter().map(|e| e.world.true_weight).collect();
    assert_eq!(excluded_worlds, (91..=100).collect::<Vec<_>>());
    assert!(excluded.iter().all(|e| e.reason.excludes_world()));
    let valid = valid_worlds(&relay, &hundred, &plus_ten).unwrap();
    assert_eq!(
        valid,
        (0..=90).map(World::new).collect::<Vec<_>>(),
        "the relay should be askable exactly in worlds 0..=90"
    );

    println!("criterion 1 (relay question recovers the weight): pass");
}

/// Criterion 2: the capability question. `could(weight)` forces even a
/// free liar to name the weight, because the honest report of its options
/// is "everything but w" and the only way to falsify that is to say w.
#[test]
fn criterion_2_capability_question_pins_a_free_liar() {
    let space = interval(0, 100);
    let question = prompt("could(weight)");
    let options = VerifyOptions::default();

    let verdict = verify(&question, &space, &LiarModel::FullSupport, &options).unwrap();
    let (decoder, count, excluded) = expect_winning(&verdict);
    assert_eq!(decoder.describe(), "identity");
    assert_eq!(decoder.len(), 101);
    assert_eq!(count, 202);
    assert!(excluded.is_empty());
    assert_eq!(
        verdict.to_string(),
        "WINNING, decoder: identity, 202 outcomes"
    );

    println!("criterion 2 (capability question pins a free liar): pass");
}

/// Criterion 3: an adversarial liar plans its answers in advance, subject
/// only to falsity against its own commitments. That freedom breaks
/// `you(weight)`, and the verdict carries the exact strategy that does it.
#[test]
fn criterion_3_adversarial_commitments_break_the_echo() {
    let space = interval(0, 2);
    let truth_first = roles([Role::TruthTeller, Role::Liar]);

    // The liar has two commitments available for the bare question and
    // four for the echo: the inner binding constrains the outer one.
    let bare = enumerate_strategies(&prompt("weight"), &space, &truth_first, World::new(0));
    assert_eq!(bare.unwrap().len(), 2);

    let echo = prompt("you(weight)");
    let strategies = enumerate_strategies(&echo, &space, &truth_first, World::new(0)).unwrap();
    let bindings: Vec<(Value, Value)> = strategies
        .iter()
        .map(|s| {
            (
                s.get(&prompt("weight")).unwrap(),
                s.get(&echo).unwrap(),
            )
        })
        .collect();
    assert_eq!(bindings, vec![(1, 0), (1, 2), (2, 0), (2, 1)]);

    let verdict = verify(
        &echo,
        &space,
        &LiarModel::Adversarial,
        &VerifyOptions::default(),
    )
    .unwrap();
    let (answer, world_a, world_b, witness_a, witness_b) = expect_collision(&verdict);
    assert_eq!(answer, 1);
    assert_eq!(world_a, World::new(0));
    assert_eq!(world_b, World::new(1));
    assert_eq!(
        witness_a,
        &Outcome {
            world: World::new(0),
            assignment: roles([Role::Liar, Role::TruthTeller]),
            behavior: Behavior::Strategy { index: 3, choice: 0 },
            answer: 1,
        },
        "the collision should name the liar commitment that mimics world 1"
    );
    assert_eq!(witness_b.world, World::new(1));
    assert_eq!(witness_b.answer, 1);

    println!("criterion 3 (adversarial commitments break the echo): pass");
}

/// Criterion 4: restriction pairs. Confining replies to an instantiated
/// two-element set leaves the liar exactly one false option, so the
/// restricted question wins under every liar model at once.
#[test]
fn criterion_4_restriction_pairs_force_the_weight_out() {
    let space = interval(0, 100);
    let options = VerifyOptions::default();
    let models = [
        LiarModel::FixedRule(FixedRule::offset(10, &space).unwrap()),
        LiarModel::FullSupport,
        LiarModel::Adversarial,
    ];

    let offset_pair = prompt("restrict({w,w+10}, weight)");
    for model in &models {
        let verdict = verify(&offset_pair, &space, model, &options).unwrap();
        let (decoder, count, _) = expect_winning(&verdict);
        assert_eq!(decoder.describe(), "identity", "model {model}");
        assert_eq!(count, 182, "model {model}");
        let valid = valid_worlds(&offset_pair, &space, model).unwrap();
        assert_eq!(
            valid,
            (0..=90).map(World::new).collect::<Vec<_>>(),
            "worlds past 90 cannot form the pair under {model}"
        );
    }

    // Under the adversarial model the pair pins the liar completely: one
    // commitment survives, and it hands over the weight.
    let world = World::new(70);
    let strategies =
        enumerate_strategies(&offset_pair, &space, &roles([Role::TruthTeller, Role::Liar]), world)
            .unwrap();
    assert_eq!(strategies.len(), 1);
    assert_eq!(strategies[0].get(&prompt("weight")), Some(80));
    assert_eq!(strategies[0].get(&offset_pair), Some(70));

    // The constant pair {0,w} also wins everywhere, except that world 0
    // itself collapses the pair and is reported as excluded.
    let const_pair = prompt("restrict({0,w}, weight)");
    for model in &models {
        let verdict = verify(&const_pair, &space, model, &options).unwrap();
        let (decoder, count, excluded) = expect_winning(&verdict);
        assert_eq!(decoder.describe(), "identity", "model {model}");
        assert_eq!(count, 200, "model {model}");
        assert_eq!(excluded.len(), 1, "model {model}");
        assert_eq!(excluded[0].world, World::new(0));
        assert!(excluded[0].reason.excludes_world());
    }

    println!("criterion 4 (restriction pairs force the weight out): pass");
}

/// Criterion 5: the models form a hierarchy. Every prompt that beats the
/// adversarial liar also beats the free liar, and the converse fails:
/// `could(weight)` separates them.
#[test]
fn criterion_5_adversarial_wins_are_a_subset_of_full_support_wins() {
    let space = interval(0, 4);
    let options = VerifyOptions::default();
    let templates = [SetTemplate::offset_pair(1).unwrap()];

    let free = synthesize(&space, &LiarModel::FullSupport, &options, 2, &templates).unwrap();
    let planned = synthesize(&space, &LiarModel::Adversarial, &options, 2, &templates).unwrap();
    assert_eq!(free.examined, 12);
    assert_eq!(planned.examined, 12);

    let names = |report: &guards_core::SynthesisReport| -> Vec<String> {
        report.winning.iter().map(|(q, _)| q.to_string()).collect()
    };
    assert_eq!(
        names(&free),
        [
            "could(weight)",
            "avoid(opposite, weight)",
            "restrict({w,w+1}, weight)"
        ]
    );
    assert_eq!(names(&planned), ["restrict({w,w+1}, weight)"]);
    for winner in names(&planned) {
        assert!(
            names(&free).contains(&winner),
            "{winner} beats the planning liar but not the free one"
        );
    }

    // The separation is witnessed by the capability question.
    let capability = prompt("could(weight)");
    assert!(verify(&capability, &space, &LiarModel::FullSupport, &options)
        .unwrap()
        .is_winning());
    let verdict = verify(&capability, &space, &LiarModel::Adversarial, &options).unwrap();
    assert!(matches!(verdict, Verdict::NotWinning { .. }));

    println!("criterion 5 (adversarial wins are a subset of full-support wins): pass");
}

/// Criterion 6: opposite-type reasoning and larger casts. Asking what a
/// guard of the opposite type would never say wins against a free liar,
/// loses to a planning one, cannot be asked at all under an offset rule,
/// and the capability question scales to three guards of arbitrary roles.
#[test]
fn criterion_6_opposite_avoidance_and_three_guards() {
    let options = VerifyOptions::default();
    let avoidance = prompt("avoid(opposite, weight)");

    let hundred = interval(0, 100);
    let verdict = verify(&avoidance, &hundred, &LiarModel::FullSupport, &options).unwrap();
    let (decoder, count, _) = expect_winning(&verdict);
    assert_eq!(decoder.describe(), "identity");
    assert_eq!(count, 202);

    let three = interval(0, 2);
    let verdict = verify(&avoidance, &three, &LiarModel::Adversarial, &options).unwrap();
    let (answer, world_a, world_b, _, _) = expect_collision(&verdict);
    assert_eq!(answer, 1);
    assert_eq!(world_a, World::new(0));
    assert_eq!(world_b, World::new(1));

    // A truthful report of "what the opposite type avoids" is never a
    // single value, so an offset rule has nothing to transform: every
    // world is excluded and the scenario is rejected as a whole.
    let plus_ten = LiarModel::FixedRule(FixedRule::offset(10, &hundred).unwrap());
    let verdict = verify(&avoidance, &hundred, &plus_ten, &options).unwrap();
    match &verdict {
        Verdict::Invalid { reason, excluded } => {
            assert_eq!(reason, "every world in 0..100 is excluded");
            assert_eq!(excluded.len(), 101);
        }
        other => panic!("expected an invalid verdict, got: {other}"),
    }

    // could(weight) does not mention the other guard, so it survives a
    // cast of three with unconstrained roles.
    let crowd = VerifyOptions {
        mode: AssignmentMode::Any,
        guard_count: 3,
        asked_guard: 0,
    };
    let verdict = verify(
        &prompt("could(weight)"),
        &hundred,
        &LiarModel::FullSupport,
        &crowd,
    )
    .unwrap();
    let (decoder, count, _) = expect_winning(&verdict);
    assert_eq!(decoder.describe(), "identity");
    assert_eq!(count, 808);

    println!("criterion 6 (opposite avoidance and three guards): pass");
}

/// Criterion 7: `could(self)` is diagnosed, not verified. The verifier
/// refuses it, and the fixpoint analysis explains why: for a truth-teller
/// every candidate answer set works, for a liar none does.
#[test]
fn criterion_7_self_reference_is_diagnosed_not_verified() {
    let space = interval(0, 100);
    let question = prompt("could(self)");

    let err = verify(
        &question,
        &space,
        &LiarModel::FullSupport,
        &VerifyOptions::default(),
    )
    .unwrap_err();
    assert!(matches!(err, VerifyError::SelfReferenceUnsupported));

    let honest = solve_self_reference(Role::TruthTeller, &space);
    assert_eq!(honest, FixpointReport::Underdetermined { space_size: 101 });
    assert_eq!(
        honest.to_string(),
        "underdetermined: all 2^101 candidate answer sets are fixed points"
    );

    let lying = solve_self_reference(Role::Liar, &space);
    match &lying {
        FixpointReport::NoFixpoint { oscillation } => {
            assert_eq!(oscillation.0, space.as_set());
            assert!(oscillation.1.is_empty());
        }
        other => panic!("expected an oscillation, got: {other}"),
    }
    assert_eq!(
        lying.to_string(),
        "no fixpoint: iteration alternates between a set of 101 answers and a set of 0"
    );

    // the diagnosis has the same shape on the smallest interesting space
    let pair = interval(0, 1);
    assert_eq!(
        solve_self_reference(Role::TruthTeller, &pair),
        FixpointReport::Underdetermined { space_size: 2 }
    );
    match solve_self_reference(Role::Liar, &pair) {
        FixpointReport::NoFixpoint { oscillation } => {
            assert_eq!(oscillation.0, pair.as_set());
            assert!(oscillation.1.is_empty());
        }
        other => panic!("expected an oscillation, got: {other}"),
    }

    println!("criterion 7 (self-reference is diagnosed, not verified): pass");
}

/// Criterion 8: synthesis sorts a whole grammar layer into winners,
/// failures, and self-referential prompts, with a reason attached to each.
#[test]
fn criterion_8_synthesis_sorts_the_grammar() {
    let space = interval(0, 2);
    let options = VerifyOptions::default();

    let report = synthesize(&space, &LiarModel::FullSupport, &options, 2, &[]).unwrap();
    assert_eq!(report.examined, 10);
    let winning: Vec<String> = report.winning.iter().map(|(q, _)| q.to_string()).collect();
    assert_eq!(winning, ["could(weight)", "avoid(opposite, weight)"]);
    assert!(report.winning.iter().all(|(_, d)| d == "identity"));
    let failing: Vec<String> = report.failing.iter().map(|(q, _)| q.to_string()).collect();
    assert_eq!(failing, ["weight", "other(weight)", "you(weight)"]);
    assert!(report
        .failing
        .iter()
        .all(|(_, kind)| *kind == CounterexampleKind::Collision));
    assert_eq!(report.self_referential.len(), 5);
    assert!(report.invalid.is_empty());
    for (_, note) in &report.self_referential {
        assert!(note.contains("underdetermined"));
        assert!(note.contains("no fixpoint"));
    }

    // Against the planning liar the same layer has no winners at all;
    // restriction templates are what criterion 5 adds to change that.
    let report = synthesize(&space, &LiarModel::Adversarial, &options, 2, &[]).unwrap();
    assert!(report.winning.is_empty());
    assert_eq!(report.failing.len(), 5);
    assert!(report
        .failing
        .iter()
        .all(|(_, kind)| *kind == CounterexampleKind::Collision));

    println!("criterion 8 (synthesis sorts the grammar): pass");
}

/// Criterion 9: the prompt language round-trips through its canonical
/// printer, tolerates whitespace, and reports errors by byte offset.
#[test]
fn criterion_9_prompts_parse_print_and_complain_precisely() {
    let canonical = [
        "weight",
        "could(self)",
        "other(weight)",
        "you(could(weight))",
        "avoid(opposite, weight)",
        "restrict({w,w+10}, weight)",
        "restrict({w,w-3}, other(weight))",
        "restrict({0,w}, weight)",
    ];
    for text in canonical {
        assert_eq!(prompt(text).to_string(), text, "round trip of {text}");
    }

    assert_eq!(
        parse("  restrict( {w , w+10} ,\tweight )").unwrap(),
        prompt("restrict({w,w+10}, weight)")
    );

    let err = parse("other(weight").unwrap_err();
    assert_eq!((err.offset, err.expected.as_str()), (12, "\")\""));
    assert_eq!(err.found, "end of input");
    assert_eq!(
        err.to_string(),
        "parse error at offset 12: expected \")\", found end of input"
    );

    let err = parse("restrict({w,w+0}, weight)").unwrap_err();
    assert_eq!((err.offset, err.expected.as_str()), (14, "a nonzero offset"));

    println!("criterion 9 (prompts parse, print, and complain precisely): pass");
}
