//! End-to-end experiment runs through the harness.

use std::fs;
use std::path::Path;

use swarmplan::harness::{self, Engine, ExperimentPlan, Pick, RunRecord, SeriesRow};
use swarmplan::moo::WoaParams;
use swarmplan::{evaluate, predeploy, ScenarioConfig};

fn plan(out: &Path, users: Vec<usize>, seeds: Vec<u64>) -> ExperimentPlan {
    ExperimentPlan {
        config: ScenarioConfig {
            users: 30,
            swarms: 2,
            tuavs: 4,
            ..ScenarioConfig::default()
        },
        users,
        engines: vec![Engine::Nsga2, Engine::InsWoa],
        seeds,
        woa: WoaParams {
            population: 8,
            iterations: 4,
            ..WoaParams::default()
        },
        budget: None,
        out: out.to_path_buf(),
    }
}

fn read_csv<T: serde::de::DeserializeOwned>(path: &Path) -> Vec<T> {
    csv::Reader::from_path(path)
        .unwrap()
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn one_record_and_archive_per_engine_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let results = harness::run(&plan(dir.path(), vec![], vec![1, 2, 3])).unwrap();
    assert_eq!(results.len(), 6);

    let records: Vec<RunRecord> = read_csv(&dir.path().join("summary.csv"));
    assert_eq!(records, results.iter().map(|r| r.record.clone()).collect::<Vec<_>>());
    for seed in [1, 2, 3] {
        let ins = records.iter().find(|r| r.engine == Engine::InsWoa && r.seed == seed).unwrap();
        let nsga = records.iter().find(|r| r.engine == Engine::Nsga2 && r.seed == seed).unwrap();
        assert_eq!(ins.evaluations, nsga.evaluations);
        for engine in [Engine::InsWoa, Engine::Nsga2] {
            let stem = harness::run_stem(engine, 30, seed);
            for ext in ["archive.csv", "archive.json", "trajectory.json"] {
                assert!(dir.path().join("runs").join(format!("{stem}.{ext}")).is_file(), "{stem}.{ext}");
            }
        }
    }
    let files = fs::read_dir(dir.path().join("runs")).unwrap().count();
    assert_eq!(files, 18);
}

#[test]
fn exported_objectives_recompute_from_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let p = plan(dir.path(), vec![], vec![7]);
    harness::run(&p).unwrap();
    let scenario = ScenarioConfig { users: 30, ..p.config.clone() }.generate(7).unwrap();
    let deployment = predeploy(&scenario).unwrap();
    for r in harness::load_results(dir.path()).unwrap() {
        let rows: Vec<harness::ArchiveRow> = read_csv(
            &dir.path()
                .join("runs")
                .join(format!("{}.archive.csv", harness::run_stem(r.record.engine, 30, 7))),
        );
        assert_eq!(rows.len(), r.archive.len());
        for (row, m) in rows.iter().zip(&r.archive.members) {
            let o = evaluate(&scenario, &deployment, &m.solution).unwrap();
            assert_eq!([row.f1, row.f2, row.f3], o.as_array());
        }
    }
}

#[test]
fn rerun_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    harness::run(&plan(a.path(), vec![], vec![4])).unwrap();
    harness::run(&plan(b.path(), vec![], vec![4])).unwrap();
    for engine in [Engine::InsWoa, Engine::Nsga2] {
        let stem = harness::run_stem(engine, 30, 4);
        for ext in ["archive.csv", "archive.json", "trajectory.json"] {
            let name = format!("runs/{stem}.{ext}");
            assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name}");
        }
    }
}

#[test]
fn sweep_aggregates_per_engine_and_user_count() {
    let dir = tempfile::tempdir().unwrap();
    harness::run(&plan(dir.path(), vec![30, 60], vec![1, 2])).unwrap();
    let rows: Vec<SeriesRow> = read_csv(&dir.path().join("aggregate.csv"));
    let keys: Vec<(Engine, usize, usize)> = rows.iter().map(|r| (r.engine, r.users, r.runs)).collect();
    assert_eq!(
        keys,
        vec![
            (Engine::InsWoa, 30, 2),
            (Engine::InsWoa, 60, 2),
            (Engine::Nsga2, 30, 2),
            (Engine::Nsga2, 60, 2),
        ]
    );

    let report: harness::Report =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report.series, rows);
    assert_eq!(report.wall_time.len(), 4);
    assert_eq!(report.profiles.len(), 8 * Pick::ALL.len());
    for p in &report.profiles {
        assert_eq!(p.power_histogram.iter().sum::<usize>(), p.users);
        assert!((30.0..=100.0).contains(&p.mean_hover_altitude));
    }
}

#[test]
fn report_rebuilds_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let results = harness::run(&plan(dir.path(), vec![], vec![5])).unwrap();
    let written = fs::read(dir.path().join("report.json")).unwrap();
    let loaded = harness::load_results(dir.path()).unwrap();
    assert_eq!(loaded.len(), results.len());
    for (a, b) in loaded.iter().zip(&results) {
        assert_eq!(a.record, b.record);
        assert_eq!(a.archive.objectives(), b.archive.objectives());
    }
    fs::remove_file(dir.path().join("report.json")).unwrap();
    harness::write_report(dir.path(), &harness::report(&loaded).unwrap()).unwrap();
    assert_eq!(fs::read(dir.path().join("report.json")).unwrap(), written);
}

#[test]
fn invalid_plans_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = plan(dir.path(), vec![], vec![]);
    assert!(harness::run(&p).is_err());
    p.seeds = vec![1];
    p.engines.clear();
    assert!(harness::run(&p).is_err());
    p.engines = vec![Engine::InsWoa];
    p.budget = Some(3);
    assert_eq!(harness::run(&p).unwrap_err().exit_code(), 1);
}
