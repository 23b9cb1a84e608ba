//! Cost function, sampled lookahead and the round-based local search.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{apply_action, generate_actions_with, Action, ActionConfig};
use crate::cdt::{edge_key, Cdt, Instance, TriId, VertexId};
use crate::geom::{self, TriangleClass};
use crate::{Point, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalWeights {
    pub steiner: f64,
    pub superseded: f64,
    pub non_superseded: f64,
}

impl Default for EvalWeights {
    fn default() -> Self {
        EvalWeights { steiner: 1.0, superseded: 1.1, non_superseded: 3.1 }
    }
}

/// Counts entering the cost function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub steiner: usize,
    pub superseded: usize,
    pub non_superseded: usize,
}

impl Evaluation {
    pub fn obtuse(&self) -> usize {
        self.superseded + self.non_superseded
    }

    pub fn score(&self, w: &EvalWeights) -> f64 {
        w.steiner * self.steiner as f64
            + w.superseded * self.superseded as f64
            + w.non_superseded * self.non_superseded as f64
    }
}

/// Longest side of a triangle given by its corners, as corner indices
/// `(i, j)`; `None` when two sides tie for longest.
fn longest_corners(t: [&Point; 3]) -> Option<(usize, usize)> {
    let sides = [(1, 2), (2, 0), (0, 1)].map(|(i, j)| ((i, j), t[i].dist2(t[j])));
    let best = sides.iter().max_by(|a, b| a.1.cmp(&b.1))?;
    (sides.iter().filter(|s| s.1 == best.1).count() == 1).then_some(best.0)
}

fn is_obtuse(t: [&Point; 3]) -> bool {
    matches!(geom::triangle_class(t), Ok(TriangleClass::ObtuseAt(_)))
}

/// Whether obtuse `t` supersedes obtuse `u`: the longest side of `t` is one
/// of the two shorter sides of `u`.
pub fn supersedes(t: [&Point; 3], u: [&Point; 3]) -> bool {
    if !is_obtuse(t) || !is_obtuse(u) {
        return false;
    }
    let (Some((ti, tj)), Some((ui, uj))) = (longest_corners(t), longest_corners(u)) else { return false };
    let same = |a: &Point, b: &Point, c: &Point, d: &Point| (a == c && b == d) || (a == d && b == c);
    (0..3).any(|k| {
        let (a, b) = (k, (k + 1) % 3);
        let is_longest = (a == ui && b == uj) || (a == uj && b == ui);
        !is_longest && same(t[ti], t[tj], u[a], u[b])
    })
}

/// Counts for the cost function. The longest sides of all obtuse triangles
/// are collected once; a triangle is superseded iff one of its shorter
/// sides is in that set.
pub fn evaluate(cdt: &Cdt) -> Evaluation {
    let obtuse = cdt.obtuse_triangles();
    let longest: HashSet<(VertexId, VertexId)> = obtuse.iter().map(|&t| cdt.longest_side(t)).collect();
    let mut e = Evaluation { steiner: cdt.steiner_count(), ..Default::default() };
    for &u in &obtuse {
        let own = cdt.longest_side(u);
        let tri = cdt.triangle(u).expect("live");
        let superseded = (0..3).map(|i| tri.edge(i)).any(|(a, b)| {
            let k = edge_key(a, b);
            k != own && longest.contains(&k)
        });
        if superseded {
            e.superseded += 1;
        } else {
            e.non_superseded += 1;
        }
    }
    e
}

pub fn eval0(cdt: &Cdt, w: &EvalWeights) -> f64 {
    evaluate(cdt).score(w)
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub depth: usize,
    /// Actions sampled per node below the root.
    pub sample_size: usize,
    /// Rank temperature of the sampling bias.
    pub temperature: f64,
    pub seed: u64,
    pub max_rounds: usize,
    /// Wall-clock budget, checked between rounds.
    pub time_budget: Option<Duration>,
    /// Rounds without improvement of the best cost before a restart.
    pub stagnation: usize,
    pub weights: EvalWeights,
    pub actions: ActionConfig,
    /// Evaluate root actions on the rayon pool.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth: 0,
            sample_size: 8,
            temperature: 2.0,
            seed: 0,
            max_rounds: 2000,
            time_budget: None,
            stagnation: 25,
            weights: EvalWeights::default(),
            actions: ActionConfig::default(),
            parallel: true,
        }
    }
}

impl SearchConfig {
    pub const MAX_DEPTH: usize = 5;
}

/// Deterministic RNG stream for a `(seed, round, ordinal)` triple.
pub fn stream(seed: u64, round: u64, ordinal: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&round.to_le_bytes());
    bytes[16..24].copy_from_slice(&ordinal.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

/// Children of `cdt` under all applicable actions, in action order.
fn children(cdt: &Cdt, cfg: &SearchConfig) -> Vec<(usize, Action, Cdt)> {
    generate_actions_with(cdt, &cfg.actions)
        .into_iter()
        .enumerate()
        .filter_map(|(i, a)| apply_action(cdt, &a).ok().map(|c| (i, a, c)))
        .collect()
}

/// Rank-biased sample without replacement: weight `exp(-rank / temperature)`
/// with ranks taken by ascending `keys`.
pub fn biased_sample<R: Rng + ?Sized>(keys: &[f64], size: usize, temperature: f64, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    let ranked: Vec<(usize, f64)> =
        order.iter().enumerate().map(|(rank, &i)| (i, (-(rank as f64) / temperature.max(1e-9)).exp())).collect();
    let mut picked: Vec<usize> = ranked
        .choose_multiple_weighted(rng, size.min(keys.len()), |x| x.1)
        .expect("weights are positive and finite")
        .map(|x| x.0)
        .collect();
    picked.sort_unstable();
    picked
}

/// Depth-`k` lookahead value. Below depth zero, the minimum over a biased
/// sample of children; an empty action set scores the state itself.
pub fn eval_k<R: Rng + ?Sized>(cdt: &Cdt, k: usize, cfg: &SearchConfig, rng: &mut R) -> f64 {
    let here = eval0(cdt, &cfg.weights);
    if k == 0 {
        return here;
    }
    let kids = children(cdt, cfg);
    if kids.is_empty() {
        return here;
    }
    let keys: Vec<f64> = kids.iter().map(|(_, _, c)| eval0(c, &cfg.weights)).collect();
    let sample = biased_sample(&keys, cfg.sample_size, cfg.temperature, rng);
    sample
        .into_iter()
        .map(|i| if k == 1 { keys[i] } else { eval_k(&kids[i].2, k - 1, cfg, rng) })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Terminated {
    NonObtuse,
    Budget,
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub action: String,
    pub kind: String,
    pub eval_before: f64,
    pub eval_after: f64,
    pub obtuse_before: usize,
    pub obtuse_after: usize,
    pub steiner_after: usize,
    /// The round restarted from the best state seen so far.
    pub restart: bool,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub final_cdt: Cdt,
    pub rounds: Vec<RoundRecord>,
    pub terminated: Terminated,
    pub elapsed: Duration,
}

pub struct RoundChoice {
    pub cdt: Cdt,
    pub action: Action,
    pub value: f64,
}

struct Scored {
    ordinal: usize,
    value: f64,
    obtuse: usize,
    steiner: usize,
}

fn score_children(kids: &[(usize, Action, Cdt)], cfg: &SearchConfig, round: usize) -> Vec<Scored> {
    let score = |(i, _, c): &(usize, Action, Cdt)| {
        let mut rng = stream(cfg.seed, round as u64, *i as u64);
        Scored {
            ordinal: *i,
            value: eval_k(c, cfg.depth, cfg, &mut rng),
            obtuse: c.obtuse_count(),
            steiner: c.steiner_count(),
        }
    };
    if cfg.parallel {
        kids.par_iter().map(score).collect()
    } else {
        kids.iter().map(score).collect()
    }
}

fn rank(a: &Scored, b: &Scored) -> std::cmp::Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.obtuse.cmp(&b.obtuse))
        .then(a.steiner.cmp(&b.steiner))
        .then(a.ordinal.cmp(&b.ordinal))
}

/// One round: every root action is applied and scored by its lookahead
/// value; the best child wins. `None` when no action applies.
pub fn solve_round(cdt: &Cdt, cfg: &SearchConfig, round: usize) -> Option<RoundChoice> {
    let kids = children(cdt, cfg);
    let scored = score_children(&kids, cfg, round);
    let best = scored.iter().min_by(|a, b| rank(a, b))?;
    let (_, action, child) = kids.into_iter().find(|(i, _, _)| *i == best.ordinal).expect("scored child");
    Some(RoundChoice { cdt: child, action, value: best.value })
}

/// A restart move: a rank-biased random child rather than the best one.
fn restart_round(cdt: &Cdt, cfg: &SearchConfig, round: usize, restarts: u64) -> Option<RoundChoice> {
    let kids = children(cdt, cfg);
    if kids.is_empty() {
        return None;
    }
    let keys: Vec<f64> = kids.iter().map(|(_, _, c)| eval0(c, &cfg.weights)).collect();
    let mut rng = stream(cfg.seed ^ 0x5EED, round as u64, restarts);
    let pick = biased_sample(&keys, 1, cfg.temperature, &mut rng)[0];
    let (_, action, child) = kids.into_iter().nth(pick).expect("sampled index");
    Some(RoundChoice { cdt: child, action, value: keys[pick] })
}

pub fn solve(inst: &Instance, cfg: &SearchConfig) -> Result<SolveReport> {
    let cdt = Cdt::build(inst)?;
    Ok(solve_from(cdt, cfg))
}

/// Runs the local search from an existing triangulation.
pub fn solve_from(start: Cdt, cfg: &SearchConfig) -> SolveReport {
    let clock = Instant::now();
    let w = &cfg.weights;
    let mut cur = start;
    let mut best = cur.clone();
    let mut best_eval = eval0(&best, w);
    let mut since_best = 0usize;
    let mut restarts = 0u64;
    let mut rounds = Vec::new();
    let terminated = loop {
        if cur.obtuse_count() == 0 {
            break Terminated::NonObtuse;
        }
        if rounds.len() >= cfg.max_rounds || cfg.time_budget.is_some_and(|b| clock.elapsed() >= b) {
            break Terminated::Budget;
        }
        let round = rounds.len();
        let restart = cfg.stagnation > 0 && since_best >= cfg.stagnation;
        let base = if restart { best.clone() } else { cur.clone() };
        let choice = if restart {
            restarts += 1;
            since_best = 0;
            restart_round(&base, cfg, round, restarts)
        } else {
            solve_round(&base, cfg, round)
        };
        let Some(choice) = choice else {
            if restart || since_best == 0 {
                break Terminated::Stuck;
            }
            // dead end away from the best state: restart there next round
            since_best = cfg.stagnation.max(1);
            continue;
        };
        let eval_before = eval0(&base, w);
        cur = choice.cdt;
        let after = evaluate(&cur);
        let eval_after = after.score(w);
        log::debug!("round {round}: {} -> {eval_after:.1} ({} obtuse)", choice.action.kind, after.obtuse());
        rounds.push(RoundRecord {
            round,
            action: choice.action.kind.to_string(),
            kind: choice.action.kind.name().to_string(),
            eval_before,
            eval_after,
            obtuse_before: base.obtuse_count(),
            obtuse_after: after.obtuse(),
            steiner_after: after.steiner,
            restart,
        });
        if eval_after < best_eval || (after.obtuse() == 0 && best.obtuse_count() > 0) {
            best_eval = eval_after;
            best = cur.clone();
            since_best = 0;
        } else {
            since_best += 1;
        }
    };
    let final_cdt = if terminated == Terminated::NonObtuse { cur } else { best };
    SolveReport { final_cdt, rounds, terminated, elapsed: clock.elapsed() }
}

/// Brute-force supersede count over all ordered pairs, for cross-checking
/// [`evaluate`].
pub fn evaluate_pairwise(cdt: &Cdt) -> Evaluation {
    let tris: Vec<TriId> = cdt.triangle_ids().collect();
    let mut e = Evaluation { steiner: cdt.steiner_count(), ..Default::default() };
    for &u in &tris {
        let pu = cdt.tri_points(u);
        if !is_obtuse(pu) {
            continue;
        }
        if tris.iter().any(|&t| t != u && supersedes(cdt.tri_points(t), pu)) {
            e.superseded += 1;
        } else {
            e.non_superseded += 1;
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;

    fn tri(inst: Vec<Point>) -> Instance {
        let n = inst.len();
        Instance::new("t", inst, (0..n).collect(), vec![]).unwrap()
    }

    #[test]
    fn supersedes_examples() {
        let t = [&pt(4, 0), &pt(1, 1), &pt(2, 1)];
        let u = [&pt(0, 0), &pt(4, 0), &pt(1, 1)];
        assert!(supersedes(t, u));
        assert!(!supersedes(u, t));
        let right = [&pt(0, 0), &pt(1, 0), &pt(0, 1)];
        assert!(!supersedes(right, u));
    }

    #[test]
    fn eval_examples() {
        let w = EvalWeights::default();
        let seven = Evaluation { steiner: 7, superseded: 0, non_superseded: 0 };
        assert_eq!(seven.score(&w), 7.0);
        let lone = Evaluation { steiner: 0, superseded: 0, non_superseded: 1 };
        assert_eq!(lone.score(&w), 3.1);
        let mixed = Evaluation { steiner: 3, superseded: 2, non_superseded: 1 };
        assert!((mixed.score(&w) - 8.3).abs() < 1e-12);

        let cdt = Cdt::build(&tri(vec![pt(0, 0), pt(4, 0), pt(1, 1)])).unwrap();
        assert_eq!(evaluate(&cdt), lone);
        assert_eq!(eval0(&cdt, &w), 3.1);
    }

    #[test]
    fn eval_k_base_case_and_terminal_states() {
        let cfg = SearchConfig { parallel: false, ..Default::default() };
        let cdt = Cdt::build(&tri(vec![pt(0, 0), pt(4, 0), pt(1, 1)])).unwrap();
        let mut rng = stream(1, 0, 0);
        assert_eq!(eval_k(&cdt, 0, &cfg, &mut rng), eval0(&cdt, &cfg.weights));
        // the only action gives a non-obtuse state with one Steiner point
        assert_eq!(eval_k(&cdt, 1, &cfg, &mut rng), 1.0);
        assert_eq!(eval_k(&cdt, 3, &cfg, &mut rng), 1.0);
        let square = Cdt::build(&tri(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])).unwrap();
        assert_eq!(eval_k(&square, 3, &cfg, &mut rng), 0.0);
    }

    #[test]
    fn biased_sample_is_deterministic_and_distinct() {
        let keys = [5.0, 1.0, 3.0, 2.0, 8.0];
        let a = biased_sample(&keys, 3, 1.0, &mut stream(4, 2, 1));
        let b = biased_sample(&keys, 3, 1.0, &mut stream(4, 2, 1));
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(biased_sample(&keys, 9, 1.0, &mut stream(0, 0, 0)), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn solve_triangle_and_square() {
        let cfg = SearchConfig::default();
        let r = solve(&tri(vec![pt(0, 0), pt(4, 0), pt(1, 1)]), &cfg).unwrap();
        assert_eq!(r.terminated, Terminated::NonObtuse);
        assert_eq!(r.final_cdt.steiner_points(), vec![pt(1, 0)]);
        assert_eq!(r.rounds.len(), 1);
        assert_eq!(r.rounds[0].kind, "altitude-drop");

        let r = solve(&tri(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]), &cfg).unwrap();
        assert_eq!(r.terminated, Terminated::NonObtuse);
        assert!(r.rounds.is_empty());
        assert_eq!(r.final_cdt.steiner_count(), 0);
    }

    #[test]
    fn pairwise_and_set_counts_agree() {
        use rand::Rng;
        let mut rng = stream(7, 0, 0);
        for _ in 0..10 {
            let mut pts = vec![pt(0, 0), pt(20, 0), pt(20, 20), pt(0, 20)];
            while pts.len() < 10 {
                let p = pt(rng.gen_range(1..20), rng.gen_range(1..20));
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            let cdt = Cdt::build(&Instance::new("r", pts, vec![0, 1, 2, 3], vec![]).unwrap()).unwrap();
            assert_eq!(evaluate(&cdt), evaluate_pairwise(&cdt));
        }
    }

    #[test]
    fn serial_and_parallel_rounds_agree() {
        let inst = Instance::new(
            "p",
            vec![pt(0, 0), pt(10, 0), pt(10, 10), pt(0, 10), pt(3, 1), pt(6, 2), pt(2, 7)],
            vec![0, 1, 2, 3],
            vec![],
        )
        .unwrap();
        let base = SearchConfig { max_rounds: 6, depth: 1, sample_size: 3, ..Default::default() };
        let a = solve(&inst, &SearchConfig { parallel: false, ..base.clone() }).unwrap();
        let b = solve(&inst, &base).unwrap();
        assert_eq!(a.rounds, b.rounds);
        assert_eq!(a.final_cdt.steiner_points(), b.final_cdt.steiner_points());
    }
}
