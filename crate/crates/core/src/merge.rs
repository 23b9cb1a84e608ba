//! Combining two solutions: Steiner points inside a random circle are taken
//! from the donor, the rest from the base, and the rebuilt triangulation is
//! solved again.

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cdt::{Cdt, Instance};
use crate::geom::rational::from_f64;
use crate::geom::{locate_in_polygon, PolygonLocation};
use crate::io::{verify, Solution};
use crate::search::{solve_from, SearchConfig, Terminated};
use crate::{Error, Point, Rational, Result};

#[derive(Clone, Debug)]
pub struct MergeConfig {
    /// Pair draws made by `merge_loop`.
    pub rounds: usize,
    pub circles_per_pair: usize,
    /// Radius range as fractions of the bounding-box diagonal.
    pub radius: (f64, f64),
    pub seed: u64,
    pub resolve: SearchConfig,
    /// Run the circles of one pair concurrently.
    pub parallel: bool,
}

impl Default for MergeConfig {
    fn default() -> Self {
        MergeConfig {
            rounds: 20,
            circles_per_pair: 4,
            radius: (0.1, 0.5),
            seed: 0,
            resolve: SearchConfig { max_rounds: 500, ..SearchConfig::default() },
            parallel: true,
        }
    }
}

impl MergeConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.radius;
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return Err(Error::Precondition(format!("radius range ({lo}, {hi}) must satisfy 0 < min <= max <= 1")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius_squared: Rational,
}

impl Circle {
    pub fn contains(&self, p: &Point) -> bool {
        p.dist2(&self.center) <= self.radius_squared
    }
}

#[derive(Clone, Debug)]
pub struct MergeOutcome {
    pub solution: Solution,
    /// False when the re-solve failed and `solution` is the base.
    pub accepted: bool,
}

fn rejected(base: &Solution) -> MergeOutcome {
    MergeOutcome { solution: base.clone(), accepted: false }
}

pub fn merge_once(
    inst: &Instance,
    base: &Solution,
    donor: &Solution,
    circle: &Circle,
    cfg: &SearchConfig,
) -> MergeOutcome {
    let mut points: Vec<Point> = base.steiner_points.iter().filter(|p| !circle.contains(p)).cloned().collect();
    points.extend(donor.steiner_points.iter().filter(|p| circle.contains(p)).cloned());
    if points == base.steiner_points {
        return MergeOutcome { solution: base.clone(), accepted: true };
    }
    let cdt = match Cdt::with_steiner_points(inst, &points) {
        Ok((cdt, skipped)) => {
            if !skipped.is_empty() {
                debug!("merge dropped {} donor points", skipped.len());
            }
            cdt
        }
        Err(e) => {
            debug!("merge rebuild failed: {e}");
            return rejected(base);
        }
    };
    let report = solve_from(cdt, cfg);
    if report.terminated != Terminated::NonObtuse {
        return rejected(base);
    }
    let solution = Solution::from_cdt(inst, &report.final_cdt);
    if !verify(inst, &solution).valid {
        return rejected(base);
    }
    MergeOutcome { solution, accepted: true }
}

fn bounding_box(inst: &Instance) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in inst.boundary_polygon() {
        let q = p.to_f64();
        for k in 0..2 {
            lo[k] = lo[k].min(q[k]);
            hi[k] = hi[k].max(q[k]);
        }
    }
    (lo, hi)
}

/// Center uniform over the bounding box, rejected until inside the region.
pub fn sample_circle<R: Rng + ?Sized>(inst: &Instance, radius: (f64, f64), rng: &mut R) -> Circle {
    let (lo, hi) = bounding_box(inst);
    let diag = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
    let region = inst.boundary_polygon();
    let center = loop {
        let x = from_f64(rng.gen_range(lo[0]..=hi[0])).expect("finite");
        let y = from_f64(rng.gen_range(lo[1]..=hi[1])).expect("finite");
        let c = Point::new(x, y);
        if locate_in_polygon(&region, &c) == PolygonLocation::Inside {
            break c;
        }
    };
    let r = diag * rng.gen_range(radius.0..=radius.1);
    Circle { center, radius_squared: from_f64(r * r).expect("finite") }
}

#[derive(Clone, Debug)]
pub struct MergeReport {
    pub best: Solution,
    pub attempts: usize,
    pub improvements: usize,
}

/// Repeated pairwise merging over a pool of verified solutions. The result
/// never has more Steiner points than the best pool member.
pub fn merge_loop(inst: &Instance, pool: &[Solution], cfg: &MergeConfig) -> Result<MergeReport> {
    cfg.validate()?;
    if pool.is_empty() {
        return Err(Error::Precondition("merge pool is empty".into()));
    }
    for (i, s) in pool.iter().enumerate() {
        let r = verify(inst, s);
        if !r.valid {
            return Err(Error::Precondition(format!("pool solution {i} does not verify")));
        }
    }
    let mut pool: Vec<Solution> = pool.to_vec();
    let best_of = |pool: &[Solution]| -> usize {
        (0..pool.len()).min_by_key(|&i| (pool[i].steiner_count(), i)).expect("nonempty")
    };
    let mut best = pool[best_of(&pool)].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut attempts, mut improvements) = (0, 0);

    for round in 0..cfg.rounds {
        let i = rng.gen_range(0..pool.len());
        let j = if pool.len() > 1 { (i + rng.gen_range(1..pool.len())) % pool.len() } else { i };
        let circles: Vec<(Circle, SearchConfig)> = (0..cfg.circles_per_pair)
            .map(|c| {
                let circle = sample_circle(inst, cfg.radius, &mut rng);
                let seed = cfg.resolve.seed ^ ((round as u64) << 32 | c as u64);
                (circle, SearchConfig { seed, ..cfg.resolve.clone() })
            })
            .collect();
        let run = |(circle, scfg): &(Circle, SearchConfig)| merge_once(inst, &pool[i], &pool[j], circle, scfg);
        let outcomes: Vec<MergeOutcome> =
            if cfg.parallel { circles.par_iter().map(run).collect() } else { circles.iter().map(run).collect() };
        attempts += outcomes.len();

        // single writer: the best accepted outcome replaces the base
        let winner = outcomes.into_iter().filter(|o| o.accepted).min_by_key(|o| o.solution.steiner_count());
        if let Some(o) = winner {
            if o.solution.steiner_count() < pool[i].steiner_count() {
                debug!("merge round {round}: {} -> {}", pool[i].steiner_count(), o.solution.steiner_count());
                pool[i] = o.solution;
                improvements += 1;
                if pool[i].steiner_count() < best.steiner_count() {
                    best = pool[i].clone();
                }
            }
        }
    }
    info!("merge: {attempts} attempts, {improvements} improvements, best {}", best.steiner_count());
    Ok(MergeReport { best, attempts, improvements })
}
