//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! each and exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmplan::channel::{free_space_gain, los_probability};
use swarmplan::energy::{horizontal_fly_power, hover_power, vertical_power};
use swarmplan::evaluator::evaluate_mission;
use swarmplan::geometry::{geometric_median, sum_of_distances, Point2};
use swarmplan::harness::{
    export_run, extreme_index, mean_hover_altitude, normalized_hypervolumes, run_engine, select_compromise,
    summarize, Engine, RunResult,
};
use swarmplan::moo::{fast_nondominated_sort, ParetoArchive, WoaParams};
use swarmplan::scenario::{generate_scenario, AreaBounds};
use swarmplan::{predeploy, Deployment, Scenario, ScenarioConfig};

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn instance(users: usize, seed: u64) -> (Scenario, Deployment) {
    let s = ScenarioConfig {
        users,
        ..ScenarioConfig::default()
    }
    .generate(seed)
    .expect("scenario");
    let d = predeploy(&s).expect("deployment");
    (s, d)
}

fn woa(seed: u64) -> WoaParams {
    WoaParams {
        seed,
        ..WoaParams::default()
    }
}

/// Both engines on the default 60-GU instance, one entry per seed.
struct DeskRun {
    scenario: Scenario,
    deployment: Deployment,
    ins: ParetoArchive,
    hv_ins: f64,
    hv_nsga: f64,
}

fn desk_runs() -> Vec<DeskRun> {
    SEEDS
        .iter()
        .map(|&seed| {
            let (scenario, deployment) = instance(60, seed);
            let ins = run_engine(&scenario, &deployment, Engine::InsWoa, &woa(seed), None).expect("ins-woa");
            let nsga = run_engine(&scenario, &deployment, Engine::Nsga2, &woa(seed), Some(ins.evaluations))
                .expect("nsga2");
            assert_eq!(nsga.evaluations, ins.evaluations);
            let hv = normalized_hypervolumes(&[&ins, &nsga]).expect("hypervolume");
            DeskRun {
                scenario,
                deployment,
                ins,
                hv_ins: hv[0],
                hv_nsga: hv[1],
            }
        })
        .collect()
}

fn unit_values() -> Outcome {
    let cfg = ScenarioConfig::default();
    let e = cfg.energy();
    let ch = cfg.channel();
    let p_hov = hover_power(&e);
    let p_ver = vertical_power(6.0, &e);

    // term-by-term propulsion model, evaluated naively
    let v: f64 = 15.0;
    let oracle = e.p0 * (1.0 + 3.0 * v.powi(2) / e.u_tips.powi(2))
        + e.p1 * ((1.0 + v.powi(4) / (4.0 * e.v0.powi(4))).sqrt() - v.powi(2) / (2.0 * e.v0.powi(2))).sqrt()
        + 0.5 * e.d0 * e.rho0 * e.s0 * e.a0 * v.powi(3);
    let p_fly = horizontal_fly_power(v, &e);

    let h_db = 10.0 * free_space_gain(100.0, &ch).log10();
    let h_oracle = 20.0 * (ch.light_speed / (4.0 * std::f64::consts::PI * ch.carrier_freq * 100.0)).log10();
    let p_los = los_probability(9.6, &ch);

    let checks = [
        p_hov == 219.82,
        (p_ver - 249.9).abs() <= 0.05,
        (p_fly - 104.4).abs() <= 0.5 && (p_fly - oracle).abs() <= 0.5,
        (h_db + 80.05).abs() <= 0.01 && (h_db - h_oracle).abs() <= 1e-9,
        (p_los - 0.094340).abs() <= 1e-6,
    ];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "P_hov={p_hov} W, P_ver(6)={p_ver:.3} W, P_fly(15)={p_fly:.3} W (oracle {oracle:.3}), h_F(100)={h_db:.4} dB, P_LoS(9.6)={p_los:.6}"
        ),
    )
}

fn brute_fronts(objs: &[[f64; 3]], viol: &[f64]) -> Vec<Vec<usize>> {
    let dominates = |a: usize, b: usize| {
        let (fa, fb) = (viol[a] <= 0.0, viol[b] <= 0.0);
        if fa != fb {
            return fa;
        }
        if !fa {
            return viol[a] < viol[b];
        }
        (0..3).all(|j| objs[a][j] <= objs[b][j]) && (0..3).any(|j| objs[a][j] < objs[b][j])
    };
    let mut left: Vec<usize> = (0..objs.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&k| k != i && dominates(k, i)))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Minimum of the distance sum over a coarse grid on the bounding box, then
/// a fine grid around the coarse winner.
fn grid_median(points: &[Point2]) -> f64 {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let search = |cx: f64, cy: f64, hx: f64, hy: f64, n: usize| {
        let mut best = (f64::INFINITY, cx, cy);
        for i in 0..=n {
            for k in 0..=n {
                let x = cx - hx + 2.0 * hx * i as f64 / n as f64;
                let y = cy - hy + 2.0 * hy * k as f64 / n as f64;
                let f = sum_of_distances(points, &Point2::new(x, y));
                if f < best.0 {
                    best = (f, x, y);
                }
            }
        }
        best
    };
    let n = 200;
    let (hx, hy) = (0.5 * (x1 - x0), 0.5 * (y1 - y0));
    let (_, cx, cy) = search(0.5 * (x0 + x1), 0.5 * (y0 + y1), hx, hy, n);
    let (step_x, step_y) = (2.0 * hx / n as f64, 2.0 * hy / n as f64);
    search(cx, cy, step_x, step_y, 1000).0
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=50);
        let objs: Vec<[f64; 3]> = (0..n)
            .map(|_| [0; 3].map(|_: i32| rng.random_range(0..6) as f64))
            .collect();
        let viol: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.7) { 0.0 } else { rng.random_range(1..4) as f64 * 0.5 })
            .collect();
        if fast_nondominated_sort(&objs, &viol) != brute_fronts(&objs, &viol) {
            mismatches += 1;
        }
    }
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..20 {
        let n = rng.random_range(3..=12);
        let pts: Vec<Point2> = (0..n)
            .map(|_| Point2::new(rng.random_range(0.0..1000.0), rng.random_range(0.0..1000.0)))
            .collect();
        let m = geometric_median(&pts, 1e-10, 100_000).expect("median");
        worst_gap = worst_gap.max(sum_of_distances(&pts, &m) - grid_median(&pts));
    }
    outcome(
        mismatches == 0 && worst_gap <= 1e-6,
        format!("NDS mismatches {mismatches}/200; worst median-minus-grid objective gap {worst_gap:.3e}"),
    )
}

fn structural_feasibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut violations = Vec::new();
    for case in 0..100u64 {
        let swarms = rng.random_range(1..=4);
        let tuavs = rng.random_range(swarms..=3 * swarms);
        let users = rng.random_range(tuavs.max(10)..=150);
        let s = generate_scenario(AreaBounds::default(), users, swarms, tuavs, case).expect("scenario");
        let d = match predeploy(&s) {
            Ok(d) => d,
            Err(e) => {
                violations.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let mut bad = |msg: String| violations.push(format!("case {case}: {msg}"));
        if d.swarm_sizes.iter().sum::<usize>() != tuavs || d.tuavs.len() != tuavs {
            bad(format!("swarm sizes {:?} do not sum to {tuavs}", d.swarm_sizes));
        }
        if d.swarm_sizes.len() != swarms || d.swarm_sizes.iter().any(|&m| m > s.m_max) {
            bad(format!("swarm sizes {:?} break M_max {}", d.swarm_sizes, s.m_max));
        }
        let mut served = vec![0usize; users];
        for (t, plan) in d.tuavs.iter().enumerate() {
            for (h, c) in plan.candidates.iter().enumerate() {
                if c.members.len() > s.u_max {
                    bad(format!("T-UAV {t} hover {h} serves {} GUs", c.members.len()));
                }
                for &u in &c.members {
                    served[u] += 1;
                    let conn = d.connections.assignment[u];
                    if conn.tuav != t || conn.hover != h || conn.swarm != plan.swarm {
                        bad(format!("GU {u} connection disagrees with candidate membership"));
                    }
                }
            }
        }
        if served.iter().any(|&k| k != 1) {
            bad("a GU is not served exactly once".into());
        }
    }
    let n = violations.len();
    let detail = match violations.first() {
        Some(v) => format!("{n} violations, first: {v}"),
        None => "100 scenarios, zero violations".into(),
    };
    outcome(n == 0, detail)
}

fn determinism() -> Outcome {
    let (s, d) = instance(60, 11);
    let dir = tempfile::tempdir().expect("tempdir");
    let mut files = Vec::new();
    for (rep, threads) in [1, 4].into_iter().enumerate() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("pool");
        let archive = pool.install(|| run_engine(&s, &d, Engine::InsWoa, &woa(11), None)).expect("ins-woa");
        let record = summarize(Engine::InsWoa, 60, 11, &archive, 0.0, 0.0);
        let out = dir.path().join(format!("rep{rep}"));
        std::fs::create_dir_all(&out).expect("mkdir");
        export_run(&out, &RunResult { record, archive }, &d).expect("export");
        files.push(out);
    }
    let read = |dir: &Path, ext: &str| std::fs::read(dir.join(format!("ins-woa-u60-s11.{ext}"))).expect("read");
    let same = ["archive.csv", "archive.json", "trajectory.json"]
        .iter()
        .all(|ext| read(&files[0], ext) == read(&files[1], ext));
    let size = read(&files[0], "archive.json").len();
    outcome(
        same,
        format!(
            "archive csv/json and trajectory {} across runs on 1 and 4 threads ({size} byte archive)",
            if same { "byte-identical" } else { "DIFFER" }
        ),
    )
}

fn min_teu(a: &ParetoArchive) -> f64 {
    a.objectives().iter().map(|o| o[0]).fold(f64::INFINITY, f64::min)
}

fn teu_trend(desk: &[DeskRun]) -> Outcome {
    let mut means = Vec::new();
    for users in [30, 40, 50] {
        let total: f64 = SEEDS
            .iter()
            .map(|&seed| {
                let (s, d) = instance(users, seed);
                min_teu(&run_engine(&s, &d, Engine::InsWoa, &woa(seed), None).expect("ins-woa"))
            })
            .sum();
        means.push(total / SEEDS.len() as f64);
    }
    means.push(desk.iter().map(|r| min_teu(&r.ins)).sum::<f64>() / desk.len() as f64);
    let ok = means.windows(2).all(|w| w[1] >= w[0]);
    let shown: Vec<String> = means.iter().map(|m| format!("{m:.0}")).collect();
    outcome(ok, format!("mean archive-min TEU for U=30,40,50,60: {} J", shown.join(", ")))
}

fn aeg_magnitude(desk: &[DeskRun]) -> Outcome {
    let f2: Vec<f64> = desk
        .iter()
        .map(|r| r.ins.members[select_compromise(&r.ins).expect("non-empty")].objectives.aeg)
        .collect();
    let hits = f2.iter().filter(|v| (0.002..=0.2).contains(*v)).count();
    let shown: Vec<String> = f2.iter().map(|v| format!("{v:.4}")).collect();
    outcome(hits >= 4, format!("compromise f2 per seed [{}] J, {hits}/5 in band", shown.join(", ")))
}

fn delay_feasibility(desk: &[DeskRun]) -> Outcome {
    let mut members = 0;
    let mut violations = 0;
    for r in desk {
        for m in &r.ins.members {
            members += 1;
            let eval = evaluate_mission(&r.scenario, &r.deployment, &m.solution, true).expect("evaluation");
            for (u, link) in eval.gu_links.iter().enumerate() {
                match link {
                    Some(l) if l.delay() <= r.scenario.gus[u].max_delay => {}
                    _ => violations += 1,
                }
            }
        }
    }
    outcome(
        violations == 0 && members > 0,
        format!("{members} archive members over 5 seeds, {violations} GU delay violations"),
    )
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn power_tradeoff(desk: &[DeskRun]) -> Outcome {
    let pairs: Vec<(f64, f64)> = desk
        .iter()
        .map(|r| {
            let p = |j| mean(&r.ins.members[extreme_index(&r.ins, j).expect("non-empty")].solution.gu_powers);
            (p(1), p(2))
        })
        .collect();
    let hits = pairs.iter().filter(|(aeg, adg)| aeg < adg).count();
    let shown: Vec<String> = pairs.iter().map(|(a, b)| format!("{a:.3}<{b:.3}")).collect();
    outcome(hits >= 4, format!("mean GU power AEG-extreme vs ADG-extreme [{}] W, {hits}/5", shown.join(", ")))
}

fn altitude(desk: &[DeskRun]) -> Outcome {
    let pairs: Vec<(f64, f64)> = desk
        .iter()
        .map(|r| {
            let z = |j| mean_hover_altitude(&r.ins.members[extreme_index(&r.ins, j).expect("non-empty")].solution);
            (z(0), z(1))
        })
        .collect();
    let hits = pairs.iter().filter(|(teu, aeg)| teu >= aeg).count();
    let shown: Vec<String> = pairs.iter().map(|(a, b)| format!("{a:.1}>={b:.1}")).collect();
    outcome(hits >= 4, format!("mean hover altitude TEU-extreme vs AEG-extreme [{}] m, {hits}/5", shown.join(", ")))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn baseline(desk: &[DeskRun]) -> Outcome {
    let ins = median(desk.iter().map(|r| r.hv_ins).collect());
    let nsga = median(desk.iter().map(|r| r.hv_nsga).collect());
    outcome(
        ins >= 0.9 * nsga,
        format!("median hypervolume INS-WOA {ins:.4} vs NSGA-II {nsga:.4} (bound {:.4})", 0.9 * nsga),
    )
}

fn r_squared(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

fn scaling() -> Outcome {
    let users = [30.0, 60.0, 120.0];
    let times: Vec<f64> = users
        .iter()
        .map(|&u| {
            let (s, d) = instance(u as usize, 1);
            (0..3)
                .map(|_| {
                    let start = Instant::now();
                    run_engine(&s, &d, Engine::InsWoa, &woa(1), None).expect("ins-woa");
                    start.elapsed().as_secs_f64()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let r2 = r_squared(&users, &times);
    outcome(
        r2 >= 0.9,
        format!("wall time U=30,60,120: {:.3}s, {:.3}s, {:.3}s; R^2 = {r2:.4}", times[0], times[1], times[2]),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let desk = catch_unwind(desk_runs).ok();
    let desk = &desk;
    let with_desk = |f: fn(&[DeskRun]) -> Outcome| -> Check<'_> {
        Box::new(move || match desk {
            Some(d) => f(d),
            None => outcome(false, "desk-scale runs panicked"),
        })
    };
    let criteria: Vec<(&str, Check)> = vec![
        ("unit values", Box::new(unit_values)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("structural feasibility", Box::new(structural_feasibility)),
        ("determinism", Box::new(determinism)),
        ("TEU grows with U", with_desk(teu_trend)),
        ("AEG magnitude", with_desk(aeg_magnitude)),
        ("delay feasibility", with_desk(delay_feasibility)),
        ("power trade-off", with_desk(power_tradeoff)),
        ("altitude", with_desk(altitude)),
        ("baseline comparison", with_desk(baseline)),
        ("scaling", Box::new(scaling)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(check.as_ref())).unwrap_or_else(|_| outcome(false, "panicked"));
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<24} {}  {} [{:.1}s]",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
