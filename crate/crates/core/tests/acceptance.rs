//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `cargo test --test acceptance -- --nocapture`).
//!
//! Golden numbers (state counts, terminal counts) were pinned from the
//! independent brute-force explorer in tests/common before the main
//! builder existed; the suite re-derives them on every run.

mod common;

use std::time::Instant;

use common::{oracle_eval, oracle_explore, philosophers, random_spec, Rng};
use imds::ctl::{Evaluator, Formula};
use imds::detect::{check_all, check_resource_deadlock, check_termination};
use imds::lts::{Lts, LtsLimits};
use imds::model::{validate_spec, SourceView, SystemSpec};
use imds::parse::{load_source, render};
use imds::semantics::{enabled_actions, fire};

const SERVER_VIEW: &str = include_str!("../testdata/two_semaphores.imds");
const AGENT_VIEW: &str = include_str!("../testdata/two_semaphores_agent.imds");
const REDUCED: &str = include_str!("../testdata/two_semaphores_reduced.imds");

fn load(src: &str) -> (SystemSpec, Lts) {
    let spec = load_source(src).expect("corpus parses").spec;
    assert!(validate_spec(&spec).is_clean());
    let lts = Lts::build(&spec, &LtsLimits::default()).expect("within limits");
    (spec, lts)
}

fn verdict_of<'r>(
    report: &'r imds::detect::AnalysisReport,
    spec: &SystemSpec,
    kind: imds::detect::CheckKind,
    subject: &str,
) -> &'r imds::detect::Verdict {
    report
        .all_verdicts()
        .find(|v| v.kind == kind && v.subject_name(spec).as_deref() == Some(subject))
        .unwrap_or_else(|| panic!("missing verdict {kind:?} {subject}"))
}

#[test]
fn criterion_1_golden_verdict_suite() {
    let started = Instant::now();
    let (spec, lts) = load(SERVER_VIEW);
    let report = check_all(&lts, &spec);
    let elapsed = started.elapsed();

    use imds::detect::CheckKind::*;
    let expect = [
        (ResourceDeadlock, "A[1]", true),
        (ResourceDeadlock, "A[2]", true),
        (ResourceDeadlock, "A3", false),
        (CommunicationDeadlock, "sem[1]", true),
        (CommunicationDeadlock, "sem[2]", true),
        (CommunicationDeadlock, "r", false),
        (CommunicationDeadlock, "proc[1]", false),
        (CommunicationDeadlock, "proc[2]", false),
        (Termination, "A[1]", false),
        (Termination, "A[2]", false),
        (Termination, "A3", false),
    ];
    for (kind, subject, holds) in expect {
        assert_eq!(
            verdict_of(&report, &spec, kind, subject).holds,
            holds,
            "{kind:?} for {subject}"
        );
    }
    assert!(!report.total.holds);
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "golden suite took {elapsed:?}, budget is 1 s"
    );
    println!("criterion 1 (golden verdict suite, < 1 s): PASS ({elapsed:?})");
}

#[test]
fn criterion_2_observer_ablation() {
    let (full_spec, full_lts) = load(SERVER_VIEW);
    let (red_spec, red_lts) = load(REDUCED);
    let full = check_all(&full_lts, &full_spec);
    let red = check_all(&red_lts, &red_spec);

    // Total deadlock flips.
    assert!(!full.total.holds, "observer keeps the system moving");
    assert!(red.total.holds, "without it the system halts completely");

    // Every verdict about the shared subjects is unchanged.
    let mut compared = 0;
    for v in red.all_verdicts() {
        let Some(name) = v.subject_name(&red_spec) else {
            continue;
        };
        let counterpart = verdict_of(&full, &full_spec, v.kind, &name);
        assert_eq!(v.holds, counterpart.holds, "{} for {name}", v.kind.label());
        compared += 1;
    }
    assert_eq!(compared, 8, "2 agents x 2 checks + 4 servers x 1");
    println!("criterion 2 (observer ablation flips only total deadlock): PASS");
}

#[test]
fn criterion_3_terminal_classification() {
    // Counts pinned by the independent text-keyed explorer.
    let full_spec = load_source(SERVER_VIEW).unwrap().spec;
    let full_oracle = oracle_explore(&full_spec, 1_000_000);
    assert_eq!(
        (
            full_oracle.states,
            full_oracle.transitions,
            full_oracle.clean_terminals,
            full_oracle.stuck_terminals
        ),
        (136, 344, 0, 0)
    );
    let red_spec = load_source(REDUCED).unwrap().spec;
    let red_oracle = oracle_explore(&red_spec, 1_000_000);
    assert_eq!(
        (
            red_oracle.states,
            red_oracle.transitions,
            red_oracle.clean_terminals,
            red_oracle.stuck_terminals
        ),
        (68, 104, 1, 1)
    );

    // The builder agrees with the oracle and with the pinned numbers.
    let (_, full_lts) = load(SERVER_VIEW);
    let full_terminals = full_lts.terminal_states();
    assert_eq!(full_lts.state_count(), 136);
    assert_eq!(full_lts.transitions().len(), 344);
    assert!(full_terminals.clean.is_empty() && full_terminals.stuck.is_empty());

    let (_, red_lts) = load(REDUCED);
    let red_terminals = red_lts.terminal_states();
    assert_eq!(red_lts.state_count(), 68);
    assert_eq!(red_lts.transitions().len(), 104);
    assert_eq!(red_terminals.clean.len(), 1);
    assert_eq!(red_terminals.stuck.len(), 1);
    println!("criterion 3 (terminal classification pinned by oracle): PASS");
}

#[test]
fn criterion_4_oracle_equivalence_on_random_systems() {
    let mut systems = 0;
    let mut formulas = 0;
    let mut seed = 0u64;
    while systems < 100 {
        seed += 1;
        let mut rng = Rng::new(seed ^ 0xacce97);
        let spec = random_spec(&mut rng);
        let limits = LtsLimits {
            max_states: 200,
            max_transitions: 5_000,
        };
        let Ok(lts) = Lts::build(&spec, &limits) else {
            continue;
        };
        let ev = Evaluator::new(&lts, &spec);
        let agents: Vec<_> = spec.agent_ids().collect();
        let servers: Vec<_> = spec.server_ids().collect();
        let p = Formula::PendingAgent(agents[rng.below(agents.len())]);
        let q = Formula::EnabledServerAction(servers[rng.below(servers.len())]);
        let en = Formula::EnabledAgentAction(agents[rng.below(agents.len())]);
        let candidates = vec![
            // The two detector shapes.
            p.clone().and(en.clone().not().ag()).ef(),
            p.clone().implies(p.clone().not().ag().af()).ag(),
            // Operator basics.
            q.clone().ex(),
            Formula::True.eu(p.clone()),
            q.clone().eg(),
            p.clone().af(),
            q.clone().au(p.clone()),
            Formula::Terminal.ef(),
        ];
        for f in &candidates {
            assert_eq!(
                ev.eval(f),
                oracle_eval(&lts, &spec, f),
                "seed {seed}: {}",
                f.to_text(&spec)
            );
            formulas += 1;
        }
        systems += 1;
    }
    println!(
        "criterion 4 (engine = path-enumeration oracle, {systems} systems / {formulas} formulas, 0 disagreements): PASS"
    );
}

#[test]
fn criterion_5_semantics_property_suite() {
    // 1000 random firings preserve well-formedness and the frame rule.
    let mut rng = Rng::new(0x5eed);
    let mut steps = 0;
    while steps < 1000 {
        let spec = random_spec(&mut rng);
        let mut c = spec.initial_configuration();
        for _ in 0..60 {
            let enabled = enabled_actions(&spec, &c);
            if enabled.is_empty() {
                break;
            }
            let action = enabled[rng.below(enabled.len())];
            let next = fire(&spec, &c, action).unwrap();
            common::assert_frame(&spec, &c, action, &next);
            common::assert_well_formed(&spec, &next);
            c = next;
            steps += 1;
            if steps == 1000 {
                break;
            }
        }
    }

    // 1000 enabled pairs on distinct servers with distinct agents commute.
    let mut pairs = 0;
    let mut seed = 0x10ca1u64;
    while pairs < 1000 {
        seed += 1;
        let mut rng = Rng::new(seed);
        let spec = random_spec(&mut rng);
        for c in common::random_reachable_configs(&spec, &mut rng, 25, 12) {
            let enabled = enabled_actions(&spec, &c);
            for (i, &a1) in enabled.iter().enumerate() {
                for &a2 in &enabled[i + 1..] {
                    let (d1, d2) = (spec.action(a1), spec.action(a2));
                    if d1.server() == d2.server() || d1.agent() == d2.agent() {
                        continue;
                    }
                    let via1 = fire(&spec, &fire(&spec, &c, a1).unwrap(), a2).unwrap();
                    let via2 = fire(&spec, &fire(&spec, &c, a2).unwrap(), a1).unwrap();
                    assert_eq!(via1, via2, "locality violated (seed {seed})");
                    pairs += 1;
                    if pairs == 1000 {
                        break;
                    }
                }
            }
        }
    }
    println!("criterion 5 (1000 frame-checked firings, 1000 commuting pairs): PASS");
}

#[test]
fn criterion_6_view_canonicity() {
    let server = load_source(SERVER_VIEW).unwrap().spec;
    let agent = load_source(AGENT_VIEW).unwrap().spec;
    assert_eq!(
        server.canonical_form(),
        agent.canonical_form(),
        "both corpus views flatten to the same system"
    );

    for spec in [&server, &agent] {
        for view in [SourceView::Server, SourceView::Agent] {
            let once = render(spec, view);
            let reparsed = load_source(&once).unwrap().spec;
            assert_eq!(spec.canonical_form(), reparsed.canonical_form());
            let twice = render(&reparsed, view);
            assert_eq!(once, twice, "render is a fixed point under reparsing");
        }
    }
    println!("criterion 6 (view canonicity and render fixed points): PASS");
}

#[test]
fn criterion_7_detector_time_linear_in_lts_size() {
    let suite_started = Instant::now();

    // One resource check, one communication check, one termination check:
    // a fixed workload whose cost must scale with states + transitions.
    fn measure(spec: &SystemSpec, lts: &Lts) -> f64 {
        let a = spec.agent_by_name("Ph[1]").unwrap();
        let s = spec.server_by_name("f[1]").unwrap();
        let mut best = f64::INFINITY;
        for _ in 0..7 {
            let t = Instant::now();
            let v1 = check_resource_deadlock(lts, spec, a);
            let v2 = imds::detect::check_comm_deadlock(lts, spec, s);
            let v3 = check_termination(lts, spec, a);
            best = best.min(t.elapsed().as_secs_f64());
            assert!(v1.holds && v2.holds && !v3.holds);
        }
        best
    }

    // Warm up allocator and caches on the largest instance.
    {
        let spec = philosophers(8);
        let lts = Lts::build(&spec, &LtsLimits::default()).unwrap();
        measure(&spec, &lts);
    }

    let mut points: Vec<(f64, f64)> = Vec::new();
    for n in 2..=8 {
        let spec = philosophers(n);
        let lts = Lts::build(&spec, &LtsLimits::default()).unwrap();
        let size = (lts.state_count() + lts.transitions().len()) as f64;
        points.push((size, measure(&spec, &lts)));
    }

    // Relative-error least squares for t = c + a*size (the intercept is
    // the fixed per-query setup; growth itself must be linear).
    let (mut s00, mut s01, mut s11, mut b0, mut b1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in &points {
        let w = 1.0 / (y * y);
        s00 += w;
        s01 += w * x;
        s11 += w * x * x;
        b0 += w * y;
        b1 += w * x * y;
    }
    let det = s00 * s11 - s01 * s01;
    let c = (s11 * b0 - s01 * b1) / det;
    let a = (s00 * b1 - s01 * b0) / det;
    assert!(a > 0.0, "positive slope");

    let mut worst: f64 = 0.0;
    for &(x, y) in &points {
        let fit = c + a * x;
        let residual = ((y - fit) / fit).abs();
        worst = worst.max(residual);
        assert!(
            residual <= 0.30,
            "size {x}: time {y:.6}s vs fit {fit:.6}s, residual {:.1}% exceeds 30%",
            residual * 100.0
        );
    }
    // The largest instance must be slope-dominated, or "linear" would be
    // vacuous.
    let (x_max, _) = points.last().unwrap();
    assert!(
        a * x_max >= 10.0 * c.max(0.0),
        "growth dominates the intercept"
    );

    let elapsed = suite_started.elapsed();
    assert!(elapsed.as_secs() < 60, "scaling suite took {elapsed:?}");
    println!(
        "criterion 7 (detector time linear in LTS size, worst residual {:.1}%, {elapsed:?} total): PASS",
        worst * 100.0
    );
}

#[test]
fn criterion_8_json_report_byte_determinism() {
    let corpus = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("testdata")
        .join("two_semaphores.imds");
    let run = || {
        std::process::Command::new(env!("CARGO_BIN_EXE_imds"))
            .args(["check", corpus.to_str().unwrap(), "--json"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout, "byte-identical JSON reports");
    println!("criterion 8 (repeated runs produce byte-identical JSON): PASS");
}

#[test]
fn criterion_9_promela_golden() {
    let spec = load_source(SERVER_VIEW).unwrap().spec;
    let pml = imds::export::to_promela(&spec).unwrap();
    let golden = include_str!("../testdata/two_semaphores.pml");
    assert_eq!(pml, golden, "matches the curated golden file");

    assert_eq!(pml.matches("run ").count(), 5, "five spawned servers");
    let init = &pml[pml.find("init {").expect("init block")..];
    let sends = init
        .bytes()
        .enumerate()
        .filter(|&(i, b)| b == b'!' && init.as_bytes().get(i + 1) != Some(&b'='))
        .count();
    assert_eq!(sends, 3, "three initial messages");
    println!("criterion 9 (Promela golden, 5 runs / 3 initial sends): PASS");
}
