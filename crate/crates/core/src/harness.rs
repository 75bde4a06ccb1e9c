//! Experiment runner: sweeps, engine comparison, compromise selection and
//! the tabular exports behind the objective, power, altitude and timing
//! figures.
//!
//! Output layout under `out/`:
//!
//! | file | content |
//! |------|---------|
//! | `runs/<engine>-u<U>-s<seed>.archive.csv` | `rank,crowding,f1,f2,f3,violation` per member |
//! | `runs/<engine>-u<U>-s<seed>.archive.json` | members with their full solutions |
//! | `runs/<engine>-u<U>-s<seed>.trajectory.json` | compromise trajectory |
//! | `summary.csv` | one [`RunRecord`] per run |
//! | `aggregate.csv` | one [`SeriesRow`] per (engine, U) |
//! | `report.json` | [`Report`] |
//!
//! Archive files carry no timestamps or timings and are byte-identical
//! across reruns of the same plan.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{ObjectiveVector, Solution};
use crate::io::write_atomic;
use crate::moo::{
    compromise_index, hypervolume, ins_woa, nsga2, planned_evaluations, ArchiveMember, NsgaParams,
    ParetoArchive, WoaParams,
};
use crate::predeploy::{predeploy, Deployment};
use crate::scenario::{Point3, Scenario, ScenarioConfig};

/// Reference point of the normalized hypervolume.
pub const HV_REFERENCE: [f64; 3] = [1.1, 1.1, 1.1];
/// Upper edges of the GU power histogram, W. The first bin starts at 0 and
/// the last one is closed.
pub const POWER_BINS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Engine {
    #[serde(rename = "ins-woa")]
    InsWoa,
    #[serde(rename = "nsga2")]
    Nsga2,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::InsWoa => "ins-woa",
            Engine::Nsga2 => "nsga2",
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ins-woa" | "inswoa" | "woa" => Ok(Engine::InsWoa),
            "nsga2" | "nsga-ii" => Ok(Engine::Nsga2),
            _ => Err(Error::Config(format!("unknown engine `{s}` (expected ins-woa or nsga2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub config: ScenarioConfig,
    /// GU counts to sweep; empty means `config.users` only.
    pub users: Vec<usize>,
    pub engines: Vec<Engine>,
    pub seeds: Vec<u64>,
    /// Engine settings; the seed is replaced by each replication seed.
    pub woa: WoaParams,
    /// Evaluation cap per run. NSGA-II always receives the count actually
    /// used by INS-WOA on the same instance when both engines run.
    pub budget: Option<usize>,
    pub out: PathBuf,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.engines.is_empty() {
            return Err(Error::Config("plan needs at least one engine".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("plan needs at least one seed".into()));
        }
        if self.budget == Some(0) {
            return Err(Error::Config("budget must be positive".into()));
        }
        if self.users.contains(&0) {
            return Err(Error::Config("user counts must be positive".into()));
        }
        self.woa.validate()
    }

    fn user_counts(&self) -> Vec<usize> {
        if self.users.is_empty() {
            vec![self.config.users]
        } else {
            self.users.clone()
        }
    }
}

/// Summary of one (engine, U, seed) run. Column order of `summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub engine: Engine,
    pub users: usize,
    pub seed: u64,
    pub evaluations: usize,
    pub archive_size: usize,
    pub all_infeasible: bool,
    pub min_teu: f64,
    pub min_aeg: f64,
    pub min_adg: f64,
    pub median_teu: f64,
    pub median_aeg: f64,
    pub median_adg: f64,
    /// Normalized over all engines' archives of the same instance.
    pub hypervolume: f64,
    pub compromise_index: usize,
    pub compromise_teu: f64,
    pub compromise_aeg: f64,
    pub compromise_adg: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub record: RunRecord,
    pub archive: ParetoArchive,
}

/// Index of the compromise member: smallest sum of min-max normalized objectives.
pub fn select_compromise(archive: &ParetoArchive) -> Option<usize> {
    compromise_index(&archive.objectives())
}

/// Index of the member minimizing objective `j` (0 = TEU, 1 = AEG, 2 = ADG).
pub fn extreme_index(archive: &ParetoArchive, j: usize) -> Option<usize> {
    let objs = archive.objectives();
    (0..objs.len()).min_by(|&a, &b| objs[a][j].total_cmp(&objs[b][j]).then(a.cmp(&b)))
}

/// Runs one engine on one instance.
pub fn run_engine(
    scenario: &Scenario,
    deployment: &Deployment,
    engine: Engine,
    woa: &WoaParams,
    budget: Option<usize>,
) -> Result<ParetoArchive> {
    match engine {
        Engine::InsWoa => ins_woa(
            scenario,
            deployment,
            &WoaParams {
                max_evaluations: budget.or(woa.max_evaluations),
                ..woa.clone()
            },
        ),
        Engine::Nsga2 => nsga2(
            scenario,
            deployment,
            &NsgaParams {
                population: woa.population,
                evaluations: budget
                    .unwrap_or_else(|| planned_evaluations(deployment, woa.population, woa.iterations)),
                seed: woa.seed,
                offset_radius: woa.offset_radius,
                ..NsgaParams::default()
            },
        ),
    }
}

/// Min-max normalizes every archive over their union and returns each
/// archive's hypervolume against [`HV_REFERENCE`]. All-infeasible archives
/// score 0 and do not enter the normalization.
pub fn normalized_hypervolumes(archives: &[&ParetoArchive]) -> Result<Vec<f64>> {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for a in archives.iter().filter(|a| !a.all_infeasible) {
        for o in a.objectives() {
            for j in 0..3 {
                lo[j] = lo[j].min(o[j]);
                hi[j] = hi[j].max(o[j]);
            }
        }
    }
    archives
        .iter()
        .map(|a| {
            if a.all_infeasible {
                return Ok(0.0);
            }
            let pts: Vec<[f64; 3]> = a
                .objectives()
                .iter()
                .map(|o| {
                    let mut p = [0.0; 3];
                    for j in 0..3 {
                        let span = hi[j] - lo[j];
                        p[j] = if span > 0.0 { (o[j] - lo[j]) / span } else { 0.0 };
                    }
                    p
                })
                .collect();
            hypervolume(&pts, HV_REFERENCE)
        })
        .collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn summarize(
    engine: Engine,
    users: usize,
    seed: u64,
    archive: &ParetoArchive,
    hypervolume: f64,
    wall_time_s: f64,
) -> RunRecord {
    let objs = archive.objectives();
    let col = |j: usize| objs.iter().map(|o| o[j]).collect::<Vec<f64>>();
    let min = |j: usize| col(j).into_iter().fold(f64::INFINITY, f64::min);
    let ci = select_compromise(archive).unwrap_or(0);
    let comp = objs.get(ci).copied().unwrap_or([f64::NAN; 3]);
    RunRecord {
        engine,
        users,
        seed,
        evaluations: archive.evaluations,
        archive_size: archive.len(),
        all_infeasible: archive.all_infeasible,
        min_teu: min(0),
        min_aeg: min(1),
        min_adg: min(2),
        median_teu: median(col(0)),
        median_aeg: median(col(1)),
        median_adg: median(col(2)),
        hypervolume,
        compromise_index: ci,
        compromise_teu: comp[0],
        compromise_aeg: comp[1],
        compromise_adg: comp[2],
        wall_time_s,
    }
}

/// Runs every (U, seed, engine) combination and writes all exports.
pub fn run(plan: &ExperimentPlan) -> Result<Vec<RunResult>> {
    plan.validate()?;
    let runs_dir = plan.out.join("runs");
    fs::create_dir_all(&runs_dir).map_err(|e| Error::io(&runs_dir, e))?;
    let mut engines = plan.engines.clone();
    engines.sort();
    engines.dedup();

    let mut results = Vec::new();
    for users in plan.user_counts() {
        for &seed in &plan.seeds {
            let cfg = ScenarioConfig {
                users,
                ..plan.config.clone()
            };
            let scenario = cfg.generate(seed)?;
            let deployment = predeploy(&scenario)?;
            let woa = WoaParams {
                seed,
                ..plan.woa.clone()
            };
            let mut budget = plan.budget;
            let mut group: Vec<(Engine, ParetoArchive, f64)> = Vec::new();
            for &engine in &engines {
                let start = Instant::now();
                let archive = run_engine(&scenario, &deployment, engine, &woa, budget)?;
                let wall = start.elapsed().as_secs_f64();
                if engine == Engine::InsWoa {
                    budget = Some(archive.evaluations);
                }
                log::info!(
                    "{engine} U={users} seed={seed}: {} members, {} evaluations, {wall:.2}s",
                    archive.len(),
                    archive.evaluations
                );
                group.push((engine, archive, wall));
            }
            let refs: Vec<&ParetoArchive> = group.iter().map(|g| &g.1).collect();
            let hvs = normalized_hypervolumes(&refs)?;
            for ((engine, archive, wall), hv) in group.into_iter().zip(hvs) {
                let record = summarize(engine, users, seed, &archive, hv, wall);
                let result = RunResult { record, archive };
                export_run(&runs_dir, &result, &deployment)?;
                results.push(result);
            }
        }
    }
    write_summary(&plan.out, &results)?;
    write_report(&plan.out, &report(&results)?)?;
    Ok(results)
}

/// Writes `aggregate.csv` and `report.json`.
pub fn write_report(out: &Path, report: &Report) -> Result<()> {
    write_csv(&out.join("aggregate.csv"), &report.series)?;
    write_json(&out.join("report.json"), report)
}

pub fn run_stem(engine: Engine, users: usize, seed: u64) -> String {
    format!("{engine}-u{users}-s{seed}")
}

/// Row of an archive CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveRow {
    pub rank: usize,
    pub crowding: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub violation: f64,
}

/// Machine-readable archive: members with their solutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveDocument {
    pub engine: Engine,
    pub users: usize,
    pub seed: u64,
    pub evaluations: usize,
    pub members: Vec<ArchiveMember>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuPower {
    pub gu: usize,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoverVisit {
    pub candidate: usize,
    pub position: Point3,
    pub gus: Vec<GuPower>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuavTrajectory {
    pub tuav: usize,
    pub swarm: usize,
    pub site: Point3,
    pub relay_power: f64,
    pub hovers: Vec<HoverVisit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDocument {
    pub engine: Engine,
    pub users: usize,
    pub seed: u64,
    pub objectives: ObjectiveVector,
    pub tuavs: Vec<TuavTrajectory>,
}

pub fn trajectory(deployment: &Deployment, solution: &Solution) -> Vec<TuavTrajectory> {
    deployment
        .tuavs
        .iter()
        .enumerate()
        .map(|(t, plan)| TuavTrajectory {
            tuav: t,
            swarm: plan.swarm,
            site: deployment.swarm_sites[plan.swarm],
            relay_power: solution.relay_powers[t],
            hovers: solution.orderings[t]
                .iter()
                .map(|&c| HoverVisit {
                    candidate: c,
                    position: solution.hover_points[t][c],
                    gus: plan.candidates[c]
                        .members
                        .iter()
                        .map(|&u| GuPower {
                            gu: u,
                            power: solution.gu_powers[u],
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect()
}

pub fn archive_rows(archive: &ParetoArchive) -> Vec<ArchiveRow> {
    archive
        .members
        .iter()
        .zip(archive.ranks.iter().zip(&archive.crowding))
        .map(|(m, (&rank, &crowding))| ArchiveRow {
            rank,
            crowding,
            f1: m.objectives.teu,
            f2: m.objectives.aeg,
            f3: m.objectives.adg,
            violation: m.violation,
        })
        .collect()
}

/// Writes the archive CSV, archive JSON and compromise trajectory of one run.
pub fn export_run(dir: &Path, result: &RunResult, deployment: &Deployment) -> Result<()> {
    let r = &result.record;
    let stem = run_stem(r.engine, r.users, r.seed);
    write_csv(&dir.join(format!("{stem}.archive.csv")), &archive_rows(&result.archive))?;
    let doc = ArchiveDocument {
        engine: r.engine,
        users: r.users,
        seed: r.seed,
        evaluations: result.archive.evaluations,
        members: result.archive.members.clone(),
    };
    write_json(&dir.join(format!("{stem}.archive.json")), &doc)?;
    if let Some(m) = result.archive.members.get(r.compromise_index) {
        let traj = TrajectoryDocument {
            engine: r.engine,
            users: r.users,
            seed: r.seed,
            objectives: m.objectives,
            tuavs: trajectory(deployment, &m.solution),
        };
        write_json(&dir.join(format!("{stem}.trajectory.json")), &traj)?;
    }
    Ok(())
}

pub fn write_summary(out: &Path, results: &[RunResult]) -> Result<()> {
    let records: Vec<&RunRecord> = results.iter().map(|r| &r.record).collect();
    write_csv(&out.join("summary.csv"), &records)
}

pub(crate) fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    write_atomic(path, &bytes)
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Reloads the results of a previous [`run`] from `out`.
pub fn load_results(out: &Path) -> Result<Vec<RunResult>> {
    let summary = out.join("summary.csv");
    let mut reader = csv::Reader::from_path(&summary).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => Error::Config(format!("{}: no summary found ({e})", summary.display())),
        _ => Error::Csv(e),
    })?;
    let mut results = Vec::new();
    for row in reader.deserialize() {
        let record: RunRecord = row?;
        let path = out
            .join("runs")
            .join(format!("{}.archive.json", run_stem(record.engine, record.users, record.seed)));
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let doc: ArchiveDocument = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let archive = ParetoArchive::from_members(doc.members, doc.evaluations);
        results.push(RunResult { record, archive });
    }
    Ok(results)
}

/// Objective, timing and budget means per (engine, U). Column order of `aggregate.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub engine: Engine,
    pub users: usize,
    pub runs: usize,
    pub mean_min_teu: f64,
    pub mean_min_aeg: f64,
    pub mean_min_adg: f64,
    pub mean_compromise_teu: f64,
    pub mean_compromise_aeg: f64,
    pub mean_compromise_adg: f64,
    pub mean_hypervolume: f64,
    pub mean_evaluations: f64,
    pub mean_wall_time_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pick {
    Teu,
    Aeg,
    Adg,
    Compromise,
}

impl Pick {
    pub const ALL: [Pick; 4] = [Pick::Teu, Pick::Aeg, Pick::Adg, Pick::Compromise];

    pub fn index(&self, archive: &ParetoArchive) -> Option<usize> {
        match self {
            Pick::Teu => extreme_index(archive, 0),
            Pick::Aeg => extreme_index(archive, 1),
            Pick::Adg => extreme_index(archive, 2),
            Pick::Compromise => select_compromise(archive),
        }
    }
}

/// Power histogram and hover altitude of one selected archive member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberProfile {
    pub engine: Engine,
    pub users: usize,
    pub seed: u64,
    pub pick: Pick,
    pub member: usize,
    pub objectives: ObjectiveVector,
    /// GU counts per [`POWER_BINS`] interval.
    pub power_histogram: Vec<usize>,
    pub mean_gu_power: f64,
    pub mean_hover_altitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallTimePoint {
    pub engine: Engine,
    pub users: usize,
    pub mean_wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub power_bins: Vec<f64>,
    pub series: Vec<SeriesRow>,
    pub profiles: Vec<MemberProfile>,
    pub wall_time: Vec<WallTimePoint>,
}

pub fn power_histogram(powers: &[f64]) -> Vec<usize> {
    let bins = POWER_BINS.len() - 1;
    let mut counts = vec![0; bins];
    for &p in powers {
        let k = POWER_BINS[1..bins].iter().take_while(|&&edge| p >= edge).count();
        counts[k] += 1;
    }
    counts
}

pub fn mean_hover_altitude(solution: &Solution) -> f64 {
    let zs: Vec<f64> = solution
        .orderings
        .iter()
        .zip(&solution.hover_points)
        .flat_map(|(o, h)| o.iter().map(move |&c| h[c].z))
        .collect();
    zs.iter().sum::<f64>() / zs.len() as f64
}

pub fn profile(engine: Engine, users: usize, seed: u64, archive: &ParetoArchive, pick: Pick) -> Option<MemberProfile> {
    let i = pick.index(archive)?;
    let m = &archive.members[i];
    let p = &m.solution.gu_powers;
    Some(MemberProfile {
        engine,
        users,
        seed,
        pick,
        member: i,
        objectives: m.objectives,
        power_histogram: power_histogram(p),
        mean_gu_power: p.iter().sum::<f64>() / p.len() as f64,
        mean_hover_altitude: mean_hover_altitude(&m.solution),
    })
}

pub fn report(results: &[RunResult]) -> Result<Report> {
    if results.is_empty() {
        return Err(Error::Config("no runs to report".into()));
    }
    let mut keys: Vec<(Engine, usize)> = results.iter().map(|r| (r.record.engine, r.record.users)).collect();
    keys.sort();
    keys.dedup();
    let mut series = Vec::new();
    let mut wall_time = Vec::new();
    for (engine, users) in keys {
        let recs: Vec<&RunRecord> = results
            .iter()
            .map(|r| &r.record)
            .filter(|r| r.engine == engine && r.users == users)
            .collect();
        let mean = |f: &dyn Fn(&RunRecord) -> f64| recs.iter().map(|r| f(r)).sum::<f64>() / recs.len() as f64;
        let row = SeriesRow {
            engine,
            users,
            runs: recs.len(),
            mean_min_teu: mean(&|r| r.min_teu),
            mean_min_aeg: mean(&|r| r.min_aeg),
            mean_min_adg: mean(&|r| r.min_adg),
            mean_compromise_teu: mean(&|r| r.compromise_teu),
            mean_compromise_aeg: mean(&|r| r.compromise_aeg),
            mean_compromise_adg: mean(&|r| r.compromise_adg),
            mean_hypervolume: mean(&|r| r.hypervolume),
            mean_evaluations: mean(&|r| r.evaluations as f64),
            mean_wall_time_s: mean(&|r| r.wall_time_s),
        };
        wall_time.push(WallTimePoint {
            engine,
            users,
            mean_wall_time_s: row.mean_wall_time_s,
        });
        series.push(row);
    }
    let profiles = results
        .iter()
        .flat_map(|r| {
            Pick::ALL
                .iter()
                .filter_map(|&pick| profile(r.record.engine, r.record.users, r.record.seed, &r.archive, pick))
        })
        .collect();
    Ok(Report {
        power_bins: POWER_BINS.to_vec(),
        series,
        profiles,
        wall_time,
    })
}
