//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them on success).

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sagents_core::comms::{protocol, MessagePool};
use sagents_core::harness::{
    bench_world_config, iron_scarce_config, run_cell, stage_order_audit, verify_shelter,
    BenchTask, OrgSpec, TaskSpec,
};
use sagents_core::hourglass::{
    monitor_progress, parse_todo, render_action, ActionBody, AgentAction, TaskStatus, Verb,
};
use sagents_core::org_graph::{build_coa, build_goa, build_toa, AgentGraph, AgentId};
use sagents_core::planner_backends::largest_remainder;
use sagents_core::scheduler::{
    collect_metrics, log_to_jsonl, mode_tc, Mode, RunMeta, SchedulerConfig, StepRecord,
};
use sagents_core::world::{execute_primitive, items, Inventory, Position, Primitive, World};
use sagents_core::{StructureLabel, WorldConfig};

/// Prints the criterion verdict line and fails the test on FAIL.
fn verdict(n: u32, what: &str, ok: bool, detail: String) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n:2} [{status}] {what}: {detail}");
    assert!(ok, "criterion {n} failed: {detail}");
}

fn workers(n: usize) -> Vec<AgentId> {
    (0..n)
        .map(|i| AgentId::from(format!("worker{}", (b'A' + i as u8) as char).as_str()))
        .collect()
}

/// Independent cycle oracle: a command cycle exists iff some agent can
/// reach itself through at least one command edge.
fn has_cycle_bruteforce(graph: &AgentGraph) -> bool {
    let edges = graph.command_edges();
    for start in graph.agents() {
        let mut frontier: Vec<&AgentId> = edges
            .iter()
            .filter(|(a, _)| a == start)
            .map(|(_, b)| b)
            .collect();
        let mut seen: BTreeSet<&AgentId> = BTreeSet::new();
        while let Some(v) = frontier.pop() {
            if v == start {
                return true;
            }
            if seen.insert(v) {
                frontier.extend(edges.iter().filter(|(a, _)| a == v).map(|(_, b)| b));
            }
        }
    }
    false
}

#[test]
fn criterion_01_organization_properties() {
    let mut ok = true;
    let mut detail = String::new();
    for n in 2..=5usize {
        let ids = workers(n);
        let goa = build_goa(&ids).expect("goa builds");
        let toa = build_toa(AgentId::from("leader"), &ids).expect("toa builds");
        let coa = build_coa(&ids).expect("coa builds");

        let goa_report = goa.validate();
        if goa_report.command_cycles.is_empty() || !has_cycle_bruteforce(&goa) {
            ok = false;
            detail = format!("GoA({n}) reported no command cycle");
        }

        for (name, g) in [("ToA", &toa), ("CoA", &coa)] {
            let report = g.validate_with(1);
            if !report.command_cycles.is_empty()
                || has_cycle_bruteforce(g)
                || report.max_agent_in_degree > 1
                || !report.is_valid
            {
                ok = false;
                detail = format!(
                    "{name}({n}) cycles={} in_degree={}",
                    report.command_cycles.len(),
                    report.max_agent_in_degree
                );
            }
        }
    }
    if ok {
        detail = "GoA has cycles, ToA/CoA acyclic with in-degree <= 1 for 2-5 agents".into();
    }
    verdict(1, "organization properties", ok, detail);
}

#[test]
fn criterion_02_oracle_split_fidelity() {
    let mut ok = largest_remainder(50, 3) == vec![17, 17, 16];
    let mut detail = format!("50/3 -> {:?}", largest_remainder(50, 3));

    // The split surfaces verbatim in a live run's delegation messages.
    let out = run_cell(
        &TaskSpec::parse("collection:stone:50").unwrap(),
        &"toa:4".parse::<OrgSpec>().unwrap(),
        Mode::NonObstructive,
        42,
        &bench_world_config(),
        &SchedulerConfig::default(),
    )
    .expect("run");
    let msgs: Vec<&str> = out
        .pool
        .records()
        .iter()
        .filter(|r| r.speaker == AgentId::from("leader"))
        .filter_map(|r| protocol::instruction_of(&r.message))
        .collect();
    let seventeens = msgs.iter().filter(|m| **m == "mine 17 stones").count();
    let sixteens = msgs.iter().filter(|m| **m == "mine 16 stones").count();
    if seventeens != 2 || sixteens != 1 {
        ok = false;
        detail = format!("delegations were {msgs:?}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let q: u32 = rng.gen_range(0..10_000);
        let n: usize = rng.gen_range(1..9);
        let parts = largest_remainder(q, n);
        let sum: u32 = parts.iter().sum();
        let max = *parts.iter().max().unwrap();
        let min = *parts.iter().min().unwrap();
        let sorted = parts.windows(2).all(|w| w[0] >= w[1]);
        if parts.len() != n || sum != q || max - min > 1 || !sorted {
            ok = false;
            detail = format!("split({q},{n}) -> {parts:?}");
            break;
        }
    }
    verdict(2, "oracle split fidelity", ok, detail);
}

#[test]
fn criterion_03_monitor_fixture_suite() {
    let me = AgentId::from("workerA");
    let boss = AgentId::from("leader");
    let judge = |msgs: &[String]| {
        let mut pool = MessagePool::new();
        for (i, m) in msgs.iter().enumerate() {
            pool.post(i as u64, me.clone(), boss.clone(), m.clone()).unwrap();
        }
        monitor_progress("mine 17 stones", pool.records(), None)
            .expect("judge")
            .status
    };

    let mut low = Inventory::new();
    low.insert("stone".to_string(), 3);
    let cases = [
        (vec!["I'll start the task mine 17 stones now".to_string()], TaskStatus::Unknown),
        (vec!["Got it!".to_string()], TaskStatus::Unknown),
        (vec!["I have succeeded the task mine 17 stones.".to_string()], TaskStatus::Success),
        (vec!["I have failed the task mine 17 stones.".to_string()], TaskStatus::Fail),
        (
            vec![
                "I have succeeded the task mine 17 stones.".to_string(),
                protocol::inventory_report(&low, &[None, None, None, None, None, None]),
            ],
            TaskStatus::Fail,
        ),
    ];
    let mut ok = true;
    let mut detail = "start/ack unknown, claims judged, contradiction flips to fail".to_string();
    for (msgs, expected) in &cases {
        let got = judge(msgs);
        if got != *expected {
            ok = false;
            detail = format!("{msgs:?} judged {got:?}, expected {expected:?}");
        }
    }
    verdict(3, "monitor fixture suite", ok, detail);
}

fn random_body(rng: &mut ChaCha8Rng) -> ActionBody {
    let verbs = [
        Verb::Mine,
        Verb::Craft,
        Verb::Smelt,
        Verb::Kill,
        Verb::Cook,
        Verb::Equip,
        Verb::Build,
        Verb::Give,
        Verb::MoveTo,
    ];
    let item_pool = [
        "log", "stone", "iron_ore", "plank", "stick", "crafting_table", "wooden_pickaxe",
        "stone_pickaxe", "plank_block", "zombie", "foundation", "walls", "roof",
    ];
    let verb = verbs[rng.gen_range(0..verbs.len())];
    let quantity = if rng.gen_bool(0.5) { Some(rng.gen_range(1..999)) } else { None };
    let item = item_pool[rng.gen_range(0..item_pool.len())].to_string();
    let position = Position::new(
        rng.gen_range(-99..99),
        rng.gen_range(0..128),
        rng.gen_range(-99..99),
    );
    let target = AgentId::from(["workerA", "workerB", "manager"][rng.gen_range(0..3)]);
    match verb {
        Verb::MoveTo => ActionBody {
            verb,
            quantity: None,
            item: None,
            position: Some(position),
            target: None,
        },
        Verb::Build => ActionBody {
            verb,
            quantity,
            item: Some(item),
            position: Some(position),
            target: None,
        },
        Verb::Give => ActionBody {
            verb,
            quantity,
            item: Some(item),
            position: None,
            target: Some(target),
        },
        _ => ActionBody { verb, quantity, item: Some(item), position: None, target: None },
    }
}

#[test]
fn criterion_04_grammar_round_trip() {
    let mut ok = true;
    let mut detail = String::new();

    // Worked examples straight from the prompt-design fixtures.
    let fixtures = [
        "mine 25 woods",
        "inform WorkerA to mine 25 woods",
        "inform workerA to build walls at (-10,72,-30) (use 48 planks)",
        "inform workerB to give a log to workerA",
    ];
    for text in fixtures {
        let parsed = parse_todo(text).expect("fixture parses");
        let reparsed = parse_todo(&render_action(&parsed)).expect("render parses");
        if parsed != reparsed {
            ok = false;
            detail = format!("fixture '{text}' not stable: {parsed:?} vs {reparsed:?}");
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..10_000 {
        let action = if rng.gen_bool(0.5) {
            AgentAction::Direct(random_body(&mut rng))
        } else {
            AgentAction::Delegate {
                target: AgentId::from(["workerA", "workerB", "leader"][rng.gen_range(0..3)]),
                inner: random_body(&mut rng),
            }
        };
        let rendered = render_action(&action);
        match parse_todo(&rendered) {
            Ok(parsed) if parsed == action => {}
            other => {
                ok = false;
                detail = format!("fuzz case {i}: '{rendered}' -> {other:?} != {action:?}");
                break;
            }
        }
    }
    if ok {
        detail = "4 fixtures + 10000 fuzz actions round-trip".into();
    }
    verdict(4, "grammar round-trip", ok, detail);
}

#[test]
fn criterion_05_collection_ordering() {
    let cfg = bench_world_config();
    let sched = SchedulerConfig::default();
    let task = TaskSpec::parse("collection:stone:50").unwrap();
    let tc = |org: &str, mode: Mode| {
        let out = run_cell(&task, &org.parse().unwrap(), mode, 42, &cfg, &sched).expect("run");
        assert!(out.report.success, "{org} {mode} failed: {:?}", out.report);
        out.report.tc.expect("successful run has a TC")
    };
    let toa = tc("toa:4", Mode::NonObstructive);
    let goa = tc("goa:3", Mode::RoundBased);
    let coa = tc("coa:3", Mode::Relay);
    let ok = toa < goa && goa < coa;
    verdict(
        5,
        "collection ordering (ToA < GoA round-based < CoA relay)",
        ok,
        format!("TC: ToA={toa:.1} GoA={goa:.1} CoA={coa:.1}"),
    );
}

#[test]
fn criterion_06_team_speedup_and_iron_divergence() {
    let cfg = bench_world_config();
    let sched = SchedulerConfig::default();
    let mut ok = true;
    let mut detail = String::new();
    let mut worst: f64 = f64::INFINITY;
    for task in ["collection:log:50", "collection:log:100"] {
        let spec = TaskSpec::parse(task).unwrap();
        for seed in 1..=5u64 {
            let solo = run_cell(&spec, &"solo".parse().unwrap(), Mode::NonObstructive, seed, &cfg, &sched)
                .expect("solo run");
            let team = run_cell(&spec, &"toa:4".parse().unwrap(), Mode::NonObstructive, seed, &cfg, &sched)
                .expect("team run");
            match (solo.report.tc, team.report.tc) {
                (Some(s), Some(t)) if t > 0.0 => {
                    let speedup = s / t;
                    worst = worst.min(speedup);
                    if speedup < 1.5 {
                        ok = false;
                        detail = format!("{task} seed {seed}: speedup {speedup:.2} < 1.5");
                    }
                }
                other => {
                    ok = false;
                    detail = format!("{task} seed {seed}: unexpected TCs {other:?}");
                }
            }
        }
    }

    let iron_cfg = iron_scarce_config();
    let iron_sched = SchedulerConfig { failure_rate: 0.1, ..SchedulerConfig::default() };
    let iron = TaskSpec::parse("collection:iron_ore:6").unwrap();
    let mut nans = 0;
    let mut team_wins = 0;
    for seed in 1..=5u64 {
        let solo = run_cell(&iron, &"solo".parse().unwrap(), Mode::NonObstructive, seed, &iron_cfg, &iron_sched)
            .expect("solo iron");
        let team = run_cell(&iron, &"toa:4".parse().unwrap(), Mode::NonObstructive, seed, &iron_cfg, &iron_sched)
            .expect("team iron");
        if solo.report.diverged && solo.report.tc.is_none() {
            nans += 1;
        } else {
            ok = false;
            detail = format!("solo iron seed {seed} did not diverge: {:?}", solo.report);
        }
        if team.report.success && team.report.tc.is_some() {
            team_wins += 1;
        } else {
            ok = false;
            detail = format!("team iron seed {seed} did not succeed: {:?}", team.report);
        }
    }
    if ok {
        detail = format!(
            "log speedup >= 1.5 on 10 fixtures (worst {worst:.2}); iron: {nans}/5 solo NaN, \
             {team_wins}/5 team successes"
        );
    }
    verdict(6, "team speedup and iron divergence", ok, detail);
}

#[test]
fn criterion_07_non_obstruction_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    let mut detail = String::new();
    let mut strict_checked = 0;
    for case in 0..100 {
        let agents = rng.gen_range(2..=5usize);
        let rounds = rng.gen_range(1..=6usize);
        let mut durations: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for a in 0..agents {
            let row: Vec<u64> = (0..rounds).map(|_| rng.gen_range(0..100)).collect();
            durations.insert(format!("agent{a}"), row);
        }
        let non = mode_tc(Mode::NonObstructive, &durations);
        let round = mode_tc(Mode::RoundBased, &durations);
        if non > round + 1e-9 {
            ok = false;
            detail = format!("case {case}: non {non} > round {round} for {durations:?}");
            break;
        }
        let heterogeneous = (0..rounds).any(|r| {
            let vals: Vec<u64> = durations.values().map(|d| d[r]).collect();
            vals.iter().any(|v| *v != vals[0])
        });
        if heterogeneous {
            strict_checked += 1;
            if non >= round {
                ok = false;
                detail = format!("case {case}: non {non} not strictly below round {round}");
                break;
            }
        }
    }
    if ok {
        detail = format!("100 matrices dominated; {strict_checked} strict heterogeneous cases");
    }
    verdict(7, "non-obstruction dominance", ok, detail);
}

#[test]
fn criterion_08_shelter_end_to_end() {
    let cfg = bench_world_config();
    let task = TaskSpec::parse("shelter").unwrap();
    let out = run_cell(
        &task,
        &"toa:3".parse::<OrgSpec>().unwrap(),
        Mode::NonObstructive,
        7,
        &cfg,
        &SchedulerConfig::default(),
    )
    .expect("run");
    let bench = BenchTask::new(task, &cfg);
    let problems = verify_shelter(&out.world, bench.blueprint.as_ref().unwrap());
    let order = stage_order_audit(&out.pool);
    let ok = out.report.success && problems.is_empty() && order.is_ok();
    verdict(
        8,
        "shelter end-to-end",
        ok,
        format!(
            "success={} violations={} stage_order={:?}",
            out.report.success,
            problems.len(),
            order
        ),
    );
}

#[test]
fn criterion_09_nan_rule_truth_table() {
    // Synthetic logs: `fails` failed attempts, then optionally a late
    // progress step that resets the stall clock.
    let meta = |_: ()| RunMeta {
        objective: "mine 10 irons".into(),
        structure: StructureLabel::Solo,
        mode: Mode::Relay,
        seed: 9,
        agents: vec!["workerA".into()],
        goal_target: 10,
        stall_ticks: 2400,
        attempt_limit: 5,
        world_hash: "h".into(),
    };
    let log = |fails: u32, late_progress: bool| -> Vec<StepRecord> {
        let mut steps = Vec::new();
        for i in 0..6u64 {
            steps.push(StepRecord {
                seq: i + 1,
                agent: "workerA".into(),
                ticks: 500,
                idle: false,
                completed: if (i as u32) < fails { Some(false) } else { None },
                prompts: 1,
                progress: 0,
                events: vec![],
            });
        }
        if late_progress {
            steps.push(StepRecord {
                seq: 7,
                agent: "workerA".into(),
                ticks: 10,
                idle: false,
                completed: None,
                prompts: 0,
                progress: 1,
                events: vec![],
            });
        }
        steps
    };
    // (stalled, many fails) -> expected divergence.
    let table = [
        (false, false, false),
        (false, true, false),
        (true, false, false),
        (true, true, true),
    ];
    let mut ok = true;
    let mut detail = "diverges exactly when stall > 2400 ticks and attempts > 5".to_string();
    for (stalled, many_fails, expect) in table {
        let fails = if many_fails { 6 } else { 2 };
        let report = collect_metrics(&meta(()), &log(fails, !stalled));
        if report.success || report.diverged != expect || report.tc.is_some() {
            ok = false;
            detail = format!(
                "stalled={stalled} fails={fails}: diverged={} tc={:?}",
                report.diverged, report.tc
            );
        }
    }
    verdict(9, "NaN rule truth table", ok, detail);
}

#[test]
fn criterion_10_determinism() {
    let cfg = bench_world_config();
    let sched = SchedulerConfig::default();
    let task = TaskSpec::parse("collection:stone:50").unwrap();
    let org: OrgSpec = "toa:4".parse().unwrap();
    let a = run_cell(&task, &org, Mode::NonObstructive, 42, &cfg, &sched).expect("run a");
    let b = run_cell(&task, &org, Mode::NonObstructive, 42, &cfg, &sched).expect("run b");
    let c = run_cell(&task, &org, Mode::NonObstructive, 43, &cfg, &sched).expect("run c");
    let same_log = log_to_jsonl(&a.log) == log_to_jsonl(&b.log);
    let same_report = serde_json::to_string(&a.report).unwrap()
        == serde_json::to_string(&b.report).unwrap();
    let seed_changes_log = log_to_jsonl(&a.log) != log_to_jsonl(&c.log);
    let ok = same_log && same_report && seed_changes_log;
    verdict(
        10,
        "determinism",
        ok,
        format!(
            "identical(seed 42 logs)={same_log} identical(reports)={same_report} \
             seed-43-differs={seed_changes_log}"
        ),
    );
}

#[test]
fn criterion_11_mpt_accounting() {
    let meta = RunMeta {
        objective: "mine 9 stones".into(),
        structure: StructureLabel::Tree,
        mode: Mode::NonObstructive,
        seed: 11,
        agents: vec!["leader".into(), "workerA".into(), "workerB".into()],
        goal_target: 9,
        stall_ticks: 2400,
        attempt_limit: 5,
        world_hash: "h".into(),
    };
    // Hand-counted planning invocations: leader 4, workerA 3, workerB 4.
    let mut log = Vec::new();
    let mut seq = 0;
    for (agent, prompts) in [("leader", 4u64), ("workerA", 3), ("workerB", 4)] {
        for _ in 0..prompts {
            seq += 1;
            log.push(StepRecord {
                seq,
                agent: agent.into(),
                ticks: 30,
                idle: false,
                completed: None,
                prompts: 1,
                progress: 9,
                events: vec![],
            });
        }
    }
    let report = collect_metrics(&meta, &log);
    let ok = report.mpt == 11.0 / 3.0
        && report.prompt_counts["leader"] == 4
        && report.prompt_counts["workerA"] == 3
        && report.prompt_counts["workerB"] == 4;
    verdict(
        11,
        "mPT accounting",
        ok,
        format!("prompts 4/3/4 -> mPT {} (expected {})", report.mpt, 11.0 / 3.0),
    );
}

/// Wood, stone, iron, and dirt content of one item, measured in base
/// units (planks, stone blocks, ore, dirt) so crafting is conservative.
fn mass(item: &str) -> [f64; 4] {
    match item {
        "log" => [4.0, 0.0, 0.0, 0.0],
        "plank" | "plank_block" => [1.0, 0.0, 0.0, 0.0],
        "stick" => [0.5, 0.0, 0.0, 0.0],
        "crafting_table" | "wooden_pickaxe" => [4.0, 0.0, 0.0, 0.0],
        "stone" => [0.0, 1.0, 0.0, 0.0],
        "stone_pickaxe" => [1.0, 3.0, 0.0, 0.0],
        "furnace" => [0.0, 8.0, 0.0, 0.0],
        "iron_ore" | "iron" => [0.0, 0.0, 1.0, 0.0],
        "dirt" | "grass" => [0.0, 0.0, 0.0, 1.0],
        other => panic!("unexpected item {other}"),
    }
}

fn total_mass(world: &World) -> [f64; 4] {
    let mut sum = [0.0f64; 4];
    let mut add = |item: &str, count: f64| {
        let m = mass(item);
        for (s, v) in sum.iter_mut().zip(m) {
            *s += v * count;
        }
    };
    for (pos, kind) in &world.state.blocks {
        // A block's mass is the mass of what mining it would yield.
        let yields = world
            .config
            .blocks
            .get(kind)
            .map(|b| b.yields.clone())
            .unwrap_or_else(|| kind.clone());
        let _ = pos;
        add(&yields, 1.0);
    }
    for chest in world.state.chests.values() {
        for (item, count) in chest {
            add(item, f64::from(*count));
        }
    }
    for body in world.bodies.values() {
        for (item, count) in &body.inventory {
            add(item, f64::from(*count));
        }
        for slot in body.equipment.iter().flatten() {
            add(slot, 1.0);
        }
    }
    sum
}

#[test]
fn criterion_12_conservation() {
    let mut cfg = WorldConfig::default();
    cfg.half_extent = 8;
    cfg.tree_count = 6;
    cfg.iron_vein_count = 1;
    cfg.iron_vein_size = 3;
    cfg.iron_min_distance = 2.0;
    cfg.iron_max_distance = 6.0;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let agents = [AgentId::from("workerA"), AgentId::from("workerB")];
    let kinds = ["log", "stone", "iron_ore", "plank_block", "dirt"];
    let craftables = ["plank", "stick", "crafting_table", "wooden_pickaxe", "stone_pickaxe", "furnace"];
    let mut ok = true;
    let mut detail = String::new();
    'outer: for sequence in 0..1000 {
        let mut world = World::generate(sequence, cfg.clone()).expect("generate");
        let surface = cfg.surface_y;
        world.spawn(agents[0].clone(), Position::new(0, surface + 1, 0));
        world.spawn(agents[1].clone(), Position::new(2, surface + 1, 2));
        // Seed inventories so crafting and placing have raw material.
        for a in &agents {
            let body = world.body_mut(a).unwrap();
            body.add_item(items::LOG, 4);
            body.add_item(items::STONE, 12);
            body.add_item(items::PLANK, 6);
            body.add_item(items::WOODEN_PICKAXE, 1);
        }
        let before = total_mass(&world);
        for _ in 0..5 {
            let agent = &agents[rng.gen_range(0..2)];
            let primitive = match rng.gen_range(0..7) {
                0 => Primitive::MineBlock {
                    kind: kinds[rng.gen_range(0..kinds.len())].to_string(),
                    count: rng.gen_range(1..4),
                },
                1 => Primitive::CraftItem {
                    item: craftables[rng.gen_range(0..craftables.len())].to_string(),
                    count: rng.gen_range(1..3),
                },
                2 => Primitive::SmeltItem { item: items::IRON.to_string(), count: 1 },
                3 => Primitive::PlaceBlock {
                    kind: ["stone", "plank_block", "dirt"][rng.gen_range(0..3)].to_string(),
                    pos: Position::new(
                        rng.gen_range(-6..6),
                        surface + 1,
                        rng.gen_range(-6..6),
                    ),
                },
                4 => Primitive::GiveItem {
                    target: agents[rng.gen_range(0..2)].clone(),
                    item: ["log", "stone", "plank"][rng.gen_range(0..3)].to_string(),
                    count: rng.gen_range(1..4),
                },
                5 => Primitive::Equip {
                    item: ["wooden_pickaxe", "stone_pickaxe"][rng.gen_range(0..2)].to_string(),
                },
                _ => Primitive::MoveTo(Position::new(
                    rng.gen_range(-8..8),
                    surface + 1,
                    rng.gen_range(-8..8),
                )),
            };
            // Failures are fine; they must simply not create or destroy.
            let _ = execute_primitive(&mut world, agent, &primitive);
        }
        let after = total_mass(&world);
        for (dim, (b, a)) in before.iter().zip(after.iter()).enumerate() {
            if (b - a).abs() > 1e-6 {
                ok = false;
                detail = format!("sequence {sequence} dim {dim}: {b} -> {a}");
                break 'outer;
            }
        }
    }
    if ok {
        detail = "wood/stone/iron/dirt mass conserved over 1000 random sequences".into();
    }
    verdict(12, "conservation", ok, detail);
}
