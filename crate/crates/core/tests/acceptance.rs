//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test --test acceptance`; exits nonzero if any criterion fails.

mod common;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nonobtuse::actions::{apply_action, generate_actions_with};
use nonobtuse::cdt::{Cdt, Instance};
use nonobtuse::geom::{dot_at, on_open_segment, orientation, triangle_class, Orientation, TriangleClass};
use nonobtuse::io::{parse_instance, solution_triangles, verify, write_instance, Solution, ViolationCode};
use nonobtuse::merge::{merge_loop, MergeConfig};
use nonobtuse::primitives::{altitude_drop, center_feasible, polygon_center, SimplePolygon};
use nonobtuse::search::{
    eval0, eval_k, evaluate, evaluate_pairwise, solve, solve_round, SearchConfig, SolveReport, Terminated,
};
use nonobtuse::{pt, Point, Rational};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn random_rational_point(rng: &mut ChaCha8Rng) -> Point {
    let mut c = || q(rng.gen_range(-1000..=1000), rng.gen_range(1..=60));
    Point::new(c(), c())
}

/// Exact right angles at the foot of every altitude drop.
fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let clock = Instant::now();
    let (mut checked, mut failures) = (0, 0);
    while checked < 1000 {
        let t = [random_rational_point(&mut rng), random_rational_point(&mut rng), random_rational_point(&mut rng)];
        let Ok(TriangleClass::ObtuseAt(i)) = triangle_class([&t[0], &t[1], &t[2]]) else { continue };
        checked += 1;
        let (c, a, b) = (&t[i], &t[(i + 1) % 3], &t[(i + 2) % 3]);
        let Ok(f) = altitude_drop([&t[0], &t[1], &t[2]]) else {
            failures += 1;
            continue;
        };
        let right = dot_at(a, &f, c).is_zero() && dot_at(b, &f, c).is_zero();
        let halves_ok = [a, b].iter().all(|x| triangle_class([c, &f, x]).is_ok_and(|k| !k.is_obtuse()));
        if !(right && halves_ok && on_open_segment(a, b, &f)) {
            failures += 1;
        }
    }
    let elapsed = clock.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(1),
        format!("{checked} obtuse triangles, {failures} failures, {:.3}s", elapsed.as_secs_f64()),
    )
}

fn random_small_polygon(rng: &mut ChaCha8Rng) -> Option<SimplePolygon> {
    let k = rng.gen_range(3..=7);
    let tau = std::f64::consts::TAU;
    // half fully random, half jittered regular shapes that are often feasible
    let jitter = rng.gen_bool(0.5);
    let mut angles: Vec<f64> = (0..k)
        .map(|i| {
            if jitter {
                (tau * i as f64 / k as f64 + rng.gen_range(-0.4..0.4)).rem_euclid(tau)
            } else {
                rng.gen_range(0.0..tau)
            }
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    let mut pts: Vec<Point> = Vec::new();
    for a in angles {
        let r = rng.gen_range(18.0..30.0);
        let p = pt((30.0 + r * a.cos()).round() as i64, (30.0 + r * a.sin()).round() as i64);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    if pts.len() < 3 {
        return None;
    }
    SimplePolygon::new(pts).ok()
}

/// Float prescreen for a strictly feasible center; lenient so that the
/// exact check decides.
fn maybe_strict(poly: &[[f64; 2]], x: [f64; 2]) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let orient = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
        let dot = |p: [f64; 2], o: [f64; 2], r: [f64; 2]| (p[0] - o[0]) * (r[0] - o[0]) + (p[1] - o[1]) * (r[1] - o[1]);
        orient > -1e-9 && dot(x, a, b) > -1e-9 && dot(a, b, x) > -1e-9 && dot(a, x, b) > -1e-9
    })
}

fn strictly_feasible(poly: &[Point], x: &Point) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        orientation(a, b, x) == Orientation::CounterClockwise
            && dot_at(x, a, b).is_positive()
            && dot_at(a, b, x).is_positive()
            && dot_at(a, x, b).is_positive()
    })
}

/// Polygon centers are feasible, and none is missed where a grid finds one.
fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let clock = Instant::now();
    let (mut polys, mut found, mut unsound, mut misses) = (0, 0, 0, 0);
    while polys < 500 {
        let Some(poly) = random_small_polygon(&mut rng) else { continue };
        polys += 1;
        let vs = poly.vertices();
        let center = polygon_center(&poly);
        if let Some(c) = &center {
            found += 1;
            let fan_ok = (0..vs.len())
                .all(|i| triangle_class([&vs[i], &vs[(i + 1) % vs.len()], c]).is_ok_and(|k| !k.is_obtuse()));
            if !center_feasible(&poly, c) || !fan_ok {
                unsound += 1;
            }
            continue;
        }
        let fv: Vec<[f64; 2]> = vs.iter().map(Point::to_f64).collect();
        let lo = [vs.iter().map(|p| p.x.clone()).min().unwrap(), vs.iter().map(|p| p.y.clone()).min().unwrap()];
        let hi = [vs.iter().map(|p| p.x.clone()).max().unwrap(), vs.iter().map(|p| p.y.clone()).max().unwrap()];
        let step = |k: usize, axis: usize| -> Rational {
            lo[axis].clone() + (hi[axis].clone() - lo[axis].clone()) * q(2 * k as i64 + 1, 400)
        };
        let (flo, fhi) =
            (Point::new(lo[0].clone(), lo[1].clone()).to_f64(), Point::new(hi[0].clone(), hi[1].clone()).to_f64());
        let fstep = |k: usize, axis: usize| flo[axis] + (fhi[axis] - flo[axis]) * (2 * k + 1) as f64 / 400.0;
        let hit = (0..200).any(|i| {
            (0..200).any(|j| {
                maybe_strict(&fv, [fstep(i, 0), fstep(j, 1)])
                    && strictly_feasible(vs, &Point::new(step(i, 0), step(j, 1)))
            })
        });
        if hit {
            misses += 1;
        }
    }
    let elapsed = clock.elapsed();
    outcome(
        unsound == 0 && misses == 0 && elapsed < Duration::from_secs(30),
        format!(
            "{polys} polygons, {found} centers, {unsound} unsound, {misses} grid misses, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// A state reached by a few greedy rounds from a random point set.
fn mid_search_state(seed: u64, n: usize, rounds: usize) -> Cdt {
    let inst = common::point_set_instance("s", seed, n);
    let cfg = SearchConfig { parallel: false, ..SearchConfig::default() };
    let mut cdt = Cdt::build(&inst).unwrap();
    for r in 0..rounds {
        match solve_round(&cdt, &cfg, r) {
            Some(c) => cdt = c.cdt,
            None => break,
        }
    }
    cdt
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w = SearchConfig::default().weights;
    let mut mismatches = 0;
    for s in 0..200u64 {
        let cdt = mid_search_state(1000 + s, rng.gen_range(5..=11), rng.gen_range(0..=4));
        let (fast, slow) = (evaluate(&cdt), evaluate_pairwise(&cdt));
        if fast != slow || eval0(&cdt, &w) != slow.score(&w) {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("200 states, {mismatches} mismatches"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = SearchConfig { sample_size: usize::MAX, parallel: false, ..SearchConfig::default() };
    let (mut states, mut with_actions, mut mismatches) = (0, 0, 0);
    let mut seed = 2000u64;
    while states < 50 {
        seed += 1;
        let n = rng.gen_range(4..=6);
        let inst = common::point_set_instance("e", seed, n);
        let mut cdt = Cdt::build(&inst).unwrap();
        let extra = rng.gen_range(0..=8 - n);
        let mut tries = 0;
        while cdt.steiner_count() < extra && tries < 50 {
            tries += 1;
            let _ = cdt.insert_point(pt(rng.gen_range(0..=1000), rng.gen_range(0..=1000)));
        }
        states += 1;
        let actions = generate_actions_with(&cdt, &cfg.actions);
        let children: Vec<f64> =
            actions.iter().filter_map(|a| apply_action(&cdt, a).ok()).map(|c| eval0(&c, &cfg.weights)).collect();
        let exhaustive = if children.is_empty() {
            eval0(&cdt, &cfg.weights)
        } else {
            with_actions += 1;
            children.into_iter().fold(f64::INFINITY, f64::min)
        };
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        if eval_k(&cdt, 1, &cfg, &mut r) != exhaustive {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{states} states ({with_actions} with actions), {mismatches} mismatches"))
}

struct Solved {
    inst: Instance,
    report: SolveReport,
    solution: Solution,
}

fn criterion_5(suite: &[Solved]) -> Outcome {
    let limit = Duration::from_secs(300);
    let mut bad = Vec::new();
    for s in suite {
        let ok = s.report.terminated == Terminated::NonObtuse
            && s.report.elapsed < limit
            && verify(&s.inst, &s.solution).valid;
        if !ok {
            bad.push(s.inst.uid.clone());
        }
    }
    let slowest = suite.iter().map(|s| s.report.elapsed).max().unwrap_or_default();
    let steiner: usize = suite.iter().map(|s| s.solution.steiner_count()).sum();
    outcome(
        bad.is_empty(),
        format!(
            "{} instances, {} failed {:?}, {steiner} Steiner points total, slowest {:.1}s",
            suite.len(),
            bad.len(),
            bad,
            slowest.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Outcome {
    let path = std::env::var_os("NONOBTUSE_POINT_SET_10_INSTANCE").map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/point-set_10_c04b0024.instance.json")
    });
    let Ok(bytes) = fs::read(&path) else {
        return outcome(false, format!("instance point-set_10_c04b0024 not available at {}", path.display()));
    };
    let inst = match parse_instance(&bytes) {
        Ok(i) => i,
        Err(e) => return outcome(false, format!("cannot parse {}: {e}", path.display())),
    };
    let r = solve(&inst, &SearchConfig { time_budget: Some(Duration::from_secs(300)), ..SearchConfig::default() })
        .expect("instance builds");
    let sol = Solution::from_cdt(&inst, &r.final_cdt);
    let pass = r.terminated == Terminated::NonObtuse && sol.steiner_count() <= 10 && verify(&inst, &sol).valid;
    let mut best = sol.steiner_count();
    for seed in 1..20 {
        let r = solve(&inst, &SearchConfig { seed, ..SearchConfig::default() }).expect("instance builds");
        if r.terminated == Terminated::NonObtuse {
            best = best.min(r.final_cdt.steiner_count());
        }
    }
    outcome(
        pass,
        format!(
            "seed 0: {:?} with {} Steiner points in {:.1}s; best over 20 seeds {best}",
            r.terminated,
            sol.steiner_count(),
            r.elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7(suite: &[Solved]) -> Outcome {
    let (mut applied, mut violations) = (0, 0);
    for s in suite {
        for rec in s.report.rounds.iter().filter(|r| r.kind == "cell-center") {
            applied += 1;
            if rec.obtuse_after >= rec.obtuse_before {
                violations += 1;
            }
        }
    }
    outcome(violations == 0 && applied > 0, format!("{applied} cell-center actions applied, {violations} violations"))
}

fn criterion_8(suite: &[Solved]) -> Outcome {
    let clock = Instant::now();
    let (mut violations, mut improved, mut identical) = (0, 0, 0);
    let (mut before, mut after) = (0, 0);
    for (k, s) in suite.iter().enumerate() {
        let other = solve(&s.inst, &SearchConfig { seed: 1, ..SearchConfig::default() }).expect("builds");
        let mut pool = vec![s.solution.clone()];
        if other.terminated == Terminated::NonObtuse {
            pool.push(Solution::from_cdt(&s.inst, &other.final_cdt));
        }
        if pool.len() == 2 && pool[0] == pool[1] {
            identical += 1;
        }
        let min = pool.iter().map(Solution::steiner_count).min().unwrap();
        let cfg = MergeConfig {
            rounds: 3,
            circles_per_pair: 2,
            radius: (0.1, 0.4),
            seed: k as u64,
            resolve: SearchConfig { max_rounds: 150, ..SearchConfig::default() },
            parallel: true,
        };
        match merge_loop(&s.inst, &pool, &cfg) {
            Ok(r) if verify(&s.inst, &r.best).valid && r.best.steiner_count() <= min => {
                before += min;
                after += r.best.steiner_count();
                if r.best.steiner_count() < min {
                    improved += 1;
                }
            }
            _ => violations += 1,
        }
    }
    outcome(
        violations == 0,
        format!(
            "{} pools ({identical} with identical members), {violations} violations, {improved} improved, Steiner {before} -> {after}, {:.1}s",
            suite.len(),
            clock.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_9(suite: &[Solved]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    let picks: Vec<&Solved> =
        suite.iter().filter(|s| ["square-3", "polygon-2", "point-set-3"].contains(&s.inst.uid.as_str())).collect();
    for s in &picks {
        let inst = dir.path().join(format!("{}.json", s.inst.uid));
        fs::write(&inst, write_instance(&s.inst).unwrap()).unwrap();
        let mut outputs = Vec::new();
        for (workers, rep) in [("1", 0), ("1", 1), ("8", 0), ("8", 1)] {
            let out = dir.path().join(format!("{}-{workers}-{rep}.json", s.inst.uid));
            let status = Command::new(env!("CARGO_BIN_EXE_nonobtuse"))
                .args(["solve", "--deterministic", "--seed", "7", "--workers", workers, "--instance"])
                .arg(&inst)
                .arg("--out")
                .arg(&out)
                .env("RUST_LOG", "warn")
                .status()
                .unwrap();
            outputs.push((status.code(), fs::read(&out).unwrap_or_default()));
        }
        if outputs.iter().any(|o| o != &outputs[0]) || outputs[0].0 != Some(0) {
            differing.push(s.inst.uid.clone());
        }
    }
    outcome(
        differing.is_empty() && picks.len() == 3,
        format!("{} instances x 4 runs (1 and 8 workers), differing {differing:?}", picks.len()),
    )
}

fn normalized(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Constraint pieces of a solution: consecutive points along each
/// boundary edge and constraint.
fn constraint_pieces(inst: &Instance, pts: &[Point]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (a, b) in inst.constraint_segments() {
        let mut chain: Vec<usize> = (0..pts.len()).filter(|&v| on_open_segment(&pts[a], &pts[b], &pts[v])).collect();
        chain.sort_by(|&u, &v| pts[a].dist2(&pts[u]).cmp(&pts[a].dist2(&pts[v])));
        chain.insert(0, a);
        chain.push(b);
        out.extend(chain.windows(2).map(|w| normalized(w[0], w[1])));
    }
    out
}

/// Independent expectation for a moved Steiner point: broken orientation
/// means not a triangulation, otherwise any obtuse triangle is reported.
fn perturbation_expectation(tris: &[[usize; 3]], pts: &[Point]) -> Option<ViolationCode> {
    let mut obtuse = false;
    for t in tris {
        let [a, b, c] = t.map(|i| &pts[i]);
        if orientation(a, b, c) != Orientation::CounterClockwise {
            return Some(ViolationCode::NotTriangulation);
        }
        obtuse |= triangle_class([a, b, c]).map_or(true, |k| k.is_obtuse());
    }
    obtuse.then_some(ViolationCode::ObtuseTriangle)
}

fn mutate(s: &Solved, kind: usize, rng: &mut ChaCha8Rng) -> Option<(Solution, ViolationCode)> {
    let sol = &s.solution;
    let pts: Vec<Point> = s.inst.points.iter().chain(&sol.steiner_points).cloned().collect();
    let pieces = constraint_pieces(&s.inst, &pts);
    match kind {
        // drop an unconstrained edge
        0 => {
            let free: Vec<usize> = (0..sol.edges.len())
                .filter(|&i| !pieces.contains(&normalized(sol.edges[i].0, sol.edges[i].1)))
                .collect();
            let i = *free.get(rng.gen_range(0..free.len().max(1)))?;
            let mut m = sol.clone();
            m.edges.remove(i);
            Some((m, ViolationCode::NotTriangulation))
        }
        // move a Steiner point that is not on a constraint
        1 => {
            let tris = solution_triangles(&s.inst, sol)?;
            let n = s.inst.points.len();
            let segments = s.inst.constraint_segments();
            let free: Vec<usize> = (n..pts.len())
                .filter(|&v| !segments.iter().any(|&(a, b)| on_open_segment(&pts[a], &pts[b], &pts[v])))
                .collect();
            for _ in 0..40 {
                let v = *free.get(rng.gen_range(0..free.len().max(1)))?;
                let scale = q(1, rng.gen_range(2..2000));
                let dx = Rational::from_integer(rng.gen_range(-3..=3).into()) * scale.clone();
                let dy = Rational::from_integer(rng.gen_range(-3..=3).into()) * scale;
                let mut moved = pts.clone();
                moved[v] = Point::new(moved[v].x.clone() + dx, moved[v].y.clone() + dy);
                if moved[..v].contains(&moved[v]) || moved[v + 1..].contains(&moved[v]) {
                    continue;
                }
                if let Some(code) = perturbation_expectation(&tris, &moved) {
                    let mut m = sol.clone();
                    m.steiner_points[v - n] = moved[v].clone();
                    return Some((m, code));
                }
            }
            None
        }
        // remove a constraint piece
        _ => {
            let present: Vec<usize> = (0..sol.edges.len())
                .filter(|&i| pieces.contains(&normalized(sol.edges[i].0, sol.edges[i].1)))
                .collect();
            let i = *present.get(rng.gen_range(0..present.len().max(1)))?;
            let mut m = sol.clone();
            m.edges.remove(i);
            Some((m, ViolationCode::ConstraintUncovered))
        }
    }
}

fn criterion_10(suite: &[Solved]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut made, mut accepted, mut wrong_code) = (0, 0, 0);
    let mut per_kind = [0usize; 3];
    let mut attempt = 0usize;
    while made < 100 && attempt < 10_000 {
        let kind = attempt % 3;
        let s = &suite[rng.gen_range(0..suite.len())];
        attempt += 1;
        let Some((m, code)) = mutate(s, kind, &mut rng) else { continue };
        made += 1;
        per_kind[kind] += 1;
        let r = verify(&s.inst, &m);
        if r.valid {
            accepted += 1;
        } else if !r.has(code) {
            wrong_code += 1;
        }
    }
    outcome(
        made == 100 && accepted == 0 && wrong_code == 0,
        format!(
            "{made} mutants (edge drops {}, perturbations {}, constraint removals {}), {accepted} accepted, {wrong_code} wrong codes",
            per_kind[0], per_kind[1], per_kind[2]
        ),
    )
}

fn report(n: usize, o: &Outcome) {
    println!("criterion {n:>2}: {}  {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    let _ = std::io::stdout().flush();
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; `--list` must
    // not run anything.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let clock = Instant::now();
    let mut all = Vec::new();
    let mut record = |n: usize, o: Outcome| {
        report(n, &o);
        all.push(o.pass);
    };
    record(1, criterion_1());
    record(2, criterion_2());
    record(3, criterion_3());
    record(4, criterion_4());

    let suite: Vec<Solved> = common::desk_suite()
        .into_iter()
        .map(|inst| {
            let report = solve(&inst, &SearchConfig::default()).expect("desk instances build");
            let solution = Solution::from_cdt(&inst, &report.final_cdt);
            Solved { inst, report, solution }
        })
        .collect();
    record(5, criterion_5(&suite));
    record(6, criterion_6());
    record(7, criterion_7(&suite));
    record(8, criterion_8(&suite));
    record(9, criterion_9(&suite));
    record(10, criterion_10(&suite));

    let failed = all.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed, {:.1}s", all.len() - failed, clock.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
