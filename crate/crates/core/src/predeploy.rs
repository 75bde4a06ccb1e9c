//! Swarm pre-deployment: cluster the GUs, split the area into Voronoi
//! subregions (one per T-UAV), pick H-UAV sites among the Voronoi vertices,
//! and place capacity-limited Fermat hover candidates inside each subregion.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::assignment::min_cost_assignment;
use crate::error::{Error, Result};
use crate::geometry::{geometric_median, kmeans, voronoi, Point2};
use crate::scenario::{validate_scenario, Point3, Scenario};

const KMEANS_MAX_ITERS: usize = 300;
/// Above this many candidate site subsets the search switches from
/// enumeration to greedy construction plus swap descent.
const EXHAUSTIVE_SUBSET_LIMIT: u64 = 50_000;

/// One hover candidate: a Fermat point and the GUs it serves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermatGroup {
    pub point: Point2,
    /// Scenario indices of the member GUs, ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuavPlan {
    pub swarm: usize,
    /// Index of the Voronoi subregion (equal to the cluster index).
    pub subregion: usize,
    pub candidates: Vec<FermatGroup>,
}

/// Where a GU uploads: T-UAV `tuav` of swarm `swarm`, at its candidate `hover`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    pub swarm: usize,
    pub tuav: usize,
    pub hover: usize,
}

/// Connection of every GU, indexed by GU.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionPlan {
    pub assignment: Vec<Connection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    /// H-UAV position of each swarm.
    pub swarm_sites: Vec<Point3>,
    /// Number of T-UAVs in each swarm.
    pub swarm_sizes: Vec<usize>,
    /// One entry per T-UAV; T-UAV `t` serves subregion `t`.
    pub tuavs: Vec<TuavPlan>,
    pub connections: ConnectionPlan,
    pub cluster_centers: Vec<Point2>,
    pub cells: Vec<Vec<Point2>>,
    /// Candidate H-UAV sites (Voronoi vertices).
    pub vertices: Vec<Point2>,
}

impl Deployment {
    /// Number of hover candidates over all T-UAVs.
    pub fn total_candidates(&self) -> usize {
        self.tuavs.iter().map(|t| t.candidates.len()).sum()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("deployment serializes");
        crate::io::write_atomic(path.as_ref(), json.as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// Chosen H-UAV sites and the site each cluster center reports to.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteSelection {
    /// Indices into the candidate list, one per swarm.
    pub sites: Vec<usize>,
    /// For each center, the swarm (position in `sites`) it belongs to.
    pub assignment: Vec<usize>,
    /// Sum of center-to-site distances.
    pub cost: f64,
}

pub fn predeploy(scenario: &Scenario) -> Result<Deployment> {
    let note = validate_scenario(scenario);
    if !note.is_valid() {
        return Err(Error::Config(note.violations.join("; ")));
    }
    let m = scenario.num_tuavs;
    let s = scenario.num_swarms;
    let bounds = &scenario.bounds;
    let gu_xy: Vec<Point2> = scenario.gus.iter().map(|g| g.position.into()).collect();

    let clusters = kmeans(&gu_xy, m, scenario.seed, KMEANS_MAX_ITERS)?;
    let centers = clusters.centers;
    let diagram = voronoi(&centers, bounds)?;

    let mut candidates = diagram.vertices.clone();
    if candidates.len() < s {
        // too few Voronoi vertices (e.g. a single subregion): fall back on the centers
        for c in &centers {
            if candidates.len() >= s {
                break;
            }
            if !candidates.contains(c) {
                candidates.push(*c);
            }
        }
    }
    let selection = select_swarm_sites(&candidates, &centers, s, scenario.m_max)?;

    let swarm_sites: Vec<Point3> = selection
        .sites
        .iter()
        .map(|&i| candidates[i].with_z(bounds.huav_altitude))
        .collect();
    let mut swarm_sizes = vec![0; s];
    for &sw in &selection.assignment {
        swarm_sizes[sw] += 1;
    }

    // subregion membership is nearest-center, which is exactly the Voronoi cell
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (u, p) in gu_xy.iter().enumerate() {
        members[diagram.nearest_seed(p)].push(u);
    }

    let mut tuavs = Vec::with_capacity(m);
    let mut assignment = vec![None; scenario.gus.len()];
    for (t, region) in members.iter().enumerate() {
        let pts: Vec<Point2> = region.iter().map(|&u| gu_xy[u]).collect();
        let groups = if pts.is_empty() {
            Vec::new()
        } else {
            group_gus(&pts, scenario.u_max, scenario.seed ^ (t as u64).wrapping_mul(0x9E37_79B9))?
        };
        let mut cands = Vec::with_capacity(groups.len());
        for (n, g) in groups.iter().enumerate() {
            let gpts: Vec<Point2> = g.iter().map(|&i| pts[i]).collect();
            let point = geometric_median(&gpts, 1e-7, 10_000)?;
            let mut gus: Vec<usize> = g.iter().map(|&i| region[i]).collect();
            gus.sort_unstable();
            for &u in &gus {
                assignment[u] = Some(Connection {
                    swarm: selection.assignment[t],
                    tuav: t,
                    hover: n,
                });
            }
            cands.push(FermatGroup { point, members: gus });
        }
        tuavs.push(TuavPlan {
            swarm: selection.assignment[t],
            subregion: t,
            candidates: cands,
        });
    }
    let assignment = assignment
        .into_iter()
        .map(|c| c.expect("every GU lies in some subregion"))
        .collect();

    Ok(Deployment {
        swarm_sites,
        swarm_sizes,
        tuavs,
        connections: ConnectionPlan { assignment },
        cluster_centers: centers,
        cells: diagram.cells,
        vertices: candidates,
    })
}

/// Chooses `num_sites` distinct candidate points as H-UAV sites and assigns
/// every center to one of them, at most `m_max` per site, minimizing the sum
/// of center-to-site distances.
///
/// When there are at least as many centers as sites every chosen site
/// receives at least one center. Ties go to the lexicographically first
/// subset of candidate indices.
pub fn select_swarm_sites(
    candidates: &[Point2],
    centers: &[Point2],
    num_sites: usize,
    m_max: usize,
) -> Result<SiteSelection> {
    if num_sites == 0 || candidates.len() < num_sites {
        return Err(Error::Config(format!(
            "need {num_sites} distinct sites but only {} candidates exist",
            candidates.len()
        )));
    }
    if centers.len() > num_sites * m_max {
        return Err(Error::Config(format!(
            "{} T-UAVs cannot be split over {num_sites} swarms of at most {m_max}",
            centers.len()
        )));
    }
    let n = candidates.len();
    let subsets = binomial(n as u64, num_sites as u64);
    let best = if subsets <= EXHAUSTIVE_SUBSET_LIMIT {
        let mut best: Option<SiteSelection> = None;
        let mut subset: Vec<usize> = (0..num_sites).collect();
        loop {
            let cand = assign_centers(candidates, centers, &subset, m_max);
            if best.as_ref().is_none_or(|b| cand.cost < b.cost - 1e-9) {
                best = Some(cand);
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
        best.expect("at least one subset")
    } else {
        greedy_swap(candidates, centers, num_sites, m_max)
    };
    Ok(best)
}

fn assign_centers(candidates: &[Point2], centers: &[Point2], subset: &[usize], m_max: usize) -> SiteSelection {
    // one mandatory slot per site (heavily discounted) plus m_max - 1 optional slots
    let mandatory = centers.len() >= subset.len();
    let bonus = 1e9;
    let cost: Vec<Vec<f64>> = centers
        .iter()
        .map(|c| {
            let mut row = Vec::with_capacity(subset.len() * m_max);
            for &site in subset {
                let d = c.distance(&candidates[site]);
                for slot in 0..m_max {
                    row.push(if slot == 0 && mandatory { d - bonus } else { d });
                }
            }
            row
        })
        .collect();
    let cols = min_cost_assignment(&cost);
    let assignment: Vec<usize> = cols.iter().map(|&c| c / m_max).collect();
    let total = assignment
        .iter()
        .zip(centers)
        .map(|(&sw, c)| c.distance(&candidates[subset[sw]]))
        .sum();
    SiteSelection {
        sites: subset.to_vec(),
        assignment,
        cost: total,
    }
}

fn greedy_swap(candidates: &[Point2], centers: &[Point2], num_sites: usize, m_max: usize) -> SiteSelection {
    let n = candidates.len();
    // greedy build on the uncapacitated nearest-site cost, then capacity-aware swaps
    let mut chosen: Vec<usize> = Vec::with_capacity(num_sites);
    while chosen.len() < num_sites {
        let mut best = (f64::INFINITY, 0);
        for v in 0..n {
            if chosen.contains(&v) {
                continue;
            }
            let cost: f64 = centers
                .iter()
                .map(|c| {
                    chosen
                        .iter()
                        .chain(std::iter::once(&v))
                        .map(|&s| c.distance(&candidates[s]))
                        .fold(f64::INFINITY, f64::min)
                })
                .sum();
            if cost < best.0 {
                best = (cost, v);
            }
        }
        chosen.push(best.1);
    }
    chosen.sort_unstable();
    let mut current = assign_centers(candidates, centers, &chosen, m_max);
    loop {
        let mut improved = false;
        'outer: for pos in 0..num_sites {
            for v in 0..n {
                if current.sites.contains(&v) {
                    continue;
                }
                let mut trial = current.sites.clone();
                trial[pos] = v;
                trial.sort_unstable();
                let cand = assign_centers(candidates, centers, &trial, m_max);
                if cand.cost < current.cost - 1e-9 {
                    current = cand;
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            return current;
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Splits GUs into `ceil(n / u_max)` groups of at most `u_max` members.
///
/// Groups come from k-means; any group over capacity then gives its member
/// farthest from the group center to the nearest group with spare room,
/// repeatedly, lowest group index first. Returned groups are non-empty and
/// hold indices into `points`, ascending.
pub fn group_gus(points: &[Point2], u_max: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if points.is_empty() {
        return Err(Error::Config("cannot group an empty GU set".into()));
    }
    if u_max == 0 {
        return Err(Error::Config("u_max must be >= 1".into()));
    }
    let k = points.len().div_ceil(u_max);
    if k == 1 {
        return Ok(vec![(0..points.len()).collect()]);
    }
    let clusters = kmeans(points, k, seed, KMEANS_MAX_ITERS)?;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &l) in clusters.labels.iter().enumerate() {
        groups[l].push(i);
    }
    let centers = clusters.centers;
    let mut moves = 0;
    while let Some(g) = groups.iter().position(|m| m.len() > u_max) {
        let c = centers[g];
        let (pos, &far) = groups[g]
            .iter()
            .enumerate()
            .max_by(|a, b| {
                let da = points[*a.1].distance_sq(&c);
                let db = points[*b.1].distance_sq(&c);
                // ties resolve to the lowest index
                da.total_cmp(&db).then(b.1.cmp(a.1))
            })
            .expect("oversized group is non-empty");
        let target = (0..k)
            .filter(|&h| h != g && groups[h].len() < u_max)
            .min_by(|&a, &b| {
                points[far]
                    .distance_sq(&centers[a])
                    .total_cmp(&points[far].distance_sq(&centers[b]))
                    .then(a.cmp(&b))
            })
            .expect("total capacity covers every GU");
        groups[g].remove(pos);
        groups[target].push(far);
        moves += 1;
        debug_assert!(moves <= points.len());
    }
    let mut groups: Vec<Vec<usize>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
    for g in &mut groups {
        g.sort_unstable();
    }
    Ok(groups)
}
