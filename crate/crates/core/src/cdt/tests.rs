use super::*;
use crate::geom::AngleClass;
use crate::{pt, ptq};
use rand::{Rng, SeedableRng};

pub(crate) fn square() -> Instance {
    Instance::new("square", vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)], vec![0, 1, 2, 3], vec![]).unwrap()
}

pub(crate) fn obtuse_triangle() -> Instance {
    Instance::new("tri", vec![pt(0, 0), pt(4, 0), pt(1, 1)], vec![0, 1, 2], vec![]).unwrap()
}

/// Brute-force CDT check: no vertex visible from inside a triangle lies
/// strictly inside its circumcircle. Visibility is sampled from the
/// centroid and from points near each corner.
pub(crate) fn brute_force_delaunay(cdt: &Cdt) -> std::result::Result<(), String> {
    let cons: Vec<(Point, Point)> =
        cdt.constrained_edges().into_iter().map(|(a, b)| (cdt.point(a).clone(), cdt.point(b).clone())).collect();
    let blocked = |from: &Point, to: &Point| {
        cons.iter().any(|(a, b)| {
            geom::open_segments_intersect(from, to, a, b)
                || (geom::on_open_segment(from, to, a) || geom::on_open_segment(from, to, b))
        })
    };
    for t in cdt.triangle_ids() {
        let [a, b, c] = cdt.tri_points(t);
        let g = geom::centroid(a, b, c);
        let mut samples = vec![g.clone()];
        for p in [a, b, c] {
            // 9/10 of the way from the corner to the centroid
            let nine = Rational::new(9.into(), 10.into());
            let one = Rational::new(1.into(), 10.into());
            samples.push(Point::new(&g.x * &nine + &p.x * &one, &g.y * &nine + &p.y * &one));
        }
        for w in cdt.vertex_ids() {
            if cdt.tri(t).contains(w) {
                continue;
            }
            let q = cdt.point(w);
            if geom::in_circle(a, b, c, q).unwrap() != CirclePosition::Inside {
                continue;
            }
            if samples.iter().any(|s| !blocked(s, q)) {
                return Err(format!("vertex {w} visible inside circumcircle of triangle {t}"));
            }
        }
    }
    Ok(())
}

fn check(cdt: &Cdt) {
    cdt.validate().unwrap();
    brute_force_delaunay(cdt).unwrap();
}

#[test]
fn square_builds_two_triangles() {
    let cdt = Cdt::build(&square()).unwrap();
    assert_eq!(cdt.triangle_count(), 2);
    assert_eq!(cdt.steiner_count(), 0);
    assert!(cdt.obtuse_triangles().is_empty());
    check(&cdt);
}

#[test]
fn constrained_diagonal_is_kept() {
    for (a, b) in [(0, 2), (1, 3)] {
        let inst =
            Instance::new("sq", vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)], vec![0, 1, 2, 3], vec![(a, b)]).unwrap();
        let cdt = Cdt::build(&inst).unwrap();
        assert_eq!(cdt.triangle_count(), 2);
        assert!(cdt.is_constrained(a, b));
        assert!(cdt.edges().contains(&edge_key(a, b)));
        check(&cdt);
    }
}

#[test]
fn constraint_forces_non_delaunay_edge() {
    // Long thin rhombus; the constraint forces the long diagonal.
    let inst =
        Instance::new("rh", vec![pt(0, 0), pt(5, -1), pt(10, 0), pt(5, 1)], vec![0, 1, 2, 3], vec![(0, 2)]).unwrap();
    let cdt = Cdt::build(&inst).unwrap();
    assert!(cdt.edges().contains(&(0, 2)));
    check(&cdt);
    let free = Instance::new("rh", inst.points.clone(), vec![0, 1, 2, 3], vec![]).unwrap();
    let cdt = Cdt::build(&free).unwrap();
    assert!(cdt.edges().contains(&(1, 3)));
}

#[test]
fn triangle_instance_is_obtuse() {
    let cdt = Cdt::build(&obtuse_triangle()).unwrap();
    assert_eq!(cdt.triangle_count(), 1);
    assert_eq!(cdt.obtuse_triangles().len(), 1);
}

#[test]
fn nonconvex_region_with_inner_points() {
    let inst = Instance::new(
        "l",
        vec![pt(0, 0), pt(6, 0), pt(6, 2), pt(2, 2), pt(2, 6), pt(0, 6), pt(1, 1), pt(1, 4), pt(4, 1)],
        vec![0, 1, 2, 3, 4, 5],
        vec![(6, 7)],
    )
    .unwrap();
    let cdt = Cdt::build(&inst).unwrap();
    check(&cdt);
    assert!(cdt.is_constrained(6, 7));
}

#[test]
fn constraint_through_vertex_is_split() {
    let inst = Instance::new(
        "split",
        vec![pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4), pt(1, 2), pt(2, 2), pt(3, 2)],
        vec![0, 1, 2, 3],
        vec![(4, 6)],
    )
    .unwrap();
    let cdt = Cdt::build(&inst).unwrap();
    assert!(cdt.is_constrained(4, 5) && cdt.is_constrained(5, 6));
    check(&cdt);
}

#[test]
fn crossing_constraints_rejected() {
    let err = Instance::new(
        "x",
        vec![pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4), pt(1, 1), pt(3, 3), pt(1, 3), pt(3, 1)],
        vec![0, 1, 2, 3],
        vec![(4, 5), (6, 7)],
    )
    .unwrap_err();
    assert!(matches!(err, Error::CrossingConstraints));
    let err = Instance::new("bow", vec![pt(0, 0), pt(2, 2), pt(2, 0), pt(0, 2)], vec![0, 1, 2, 3], vec![]).unwrap_err();
    assert!(matches!(err, Error::InvalidInstance(_)));
}

#[test]
fn insert_center_of_square() {
    let mut cdt = Cdt::build(&square()).unwrap();
    let v = cdt.insert_point(ptq((1, 2), (1, 2))).unwrap();
    assert_eq!(cdt.triangle_count(), 4);
    assert_eq!(cdt.steiner_count(), 1);
    assert_eq!(cdt.star(v).len(), 4);
    check(&cdt);
}

#[test]
fn insert_on_constrained_boundary_splits() {
    let mut cdt = Cdt::build(&obtuse_triangle()).unwrap();
    let v = cdt.insert_point(pt(1, 0)).unwrap();
    assert_eq!(cdt.triangle_count(), 2);
    assert!(cdt.is_constrained(0, v) && cdt.is_constrained(v, 1));
    assert!(!cdt.is_constrained(0, 1));
    for t in cdt.triangle_ids() {
        let tri = cdt.triangle(t).unwrap();
        let i = tri.v.iter().position(|&x| x == v).unwrap();
        let [a, b, c] = [tri.v[(i + 2) % 3], tri.v[i], tri.v[(i + 1) % 3]];
        assert_eq!(geom::angle_class_at(cdt.point(a), cdt.point(b), cdt.point(c)).unwrap(), AngleClass::Right);
    }
    assert!(cdt.obtuse_triangles().is_empty());
    check(&cdt);

    cdt.remove_point(v).unwrap();
    assert_eq!(cdt.triangle_count(), 1);
    assert!(cdt.is_constrained(0, 1));
    assert_eq!(cdt.obtuse_triangles().len(), 1);
    check(&cdt);
}

#[test]
fn insert_errors() {
    let mut cdt = Cdt::build(&square()).unwrap();
    assert!(matches!(cdt.insert_point(pt(2, 2)), Err(Error::OutsideRegion)));
    assert!(matches!(cdt.insert_point(pt(1, 1)), Err(Error::DuplicateVertex)));
    assert!(matches!(cdt.remove_point(0), Err(Error::InputVertex(0))));
    assert_eq!(cdt.steiner_count(), 0);
    check(&cdt);
}

#[test]
fn locate_examples() {
    let cdt = Cdt::build(&square()).unwrap();
    match cdt.locate(&ptq((1, 2), (1, 8))).unwrap() {
        Location::Triangle(t) => assert!(cdt.triangle(t).unwrap().contains(0) && cdt.triangle(t).unwrap().contains(1)),
        other => panic!("{other:?}"),
    }
    assert_eq!(cdt.locate(&pt(1, 1)).unwrap(), Location::Vertex(2));
    let diag = cdt.edges().into_iter().find(|&(a, b)| (a, b) == (0, 2) || (a, b) == (1, 3)).unwrap();
    let mid = cdt.point(diag.0).midpoint(cdt.point(diag.1));
    match cdt.locate(&mid).unwrap() {
        Location::Edge(a, b) => assert_eq!(edge_key(a, b), diag),
        other => panic!("{other:?}"),
    }
    assert!(matches!(cdt.locate(&pt(5, 5)), Err(Error::OutsideRegion)));
}

#[test]
fn square_with_diagonal_has_no_obtuse() {
    let cdt = Cdt::build(&square()).unwrap();
    for t in cdt.triangle_ids() {
        assert_eq!(cdt.triangle(t).unwrap().class, TriangleClass::NonObtuse);
    }
}

fn random_instance(seed: u64, n_inner: usize) -> Instance {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![pt(0, 0), pt(40, 0), pt(40, 30), pt(0, 30)];
    while pts.len() < 4 + n_inner {
        let p = pt(rng.gen_range(1..40), rng.gen_range(1..30));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    Instance::new(format!("rand{seed}"), pts, vec![0, 1, 2, 3], vec![(4, 5)]).unwrap()
}

#[test]
fn random_insert_remove_round_trip() {
    for seed in 0..6 {
        let inst = random_instance(seed, 6);
        let Ok(mut cdt) = Cdt::build(&inst) else { continue };
        check(&cdt);
        let before = cdt.canonical_triangles();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(100 + seed);
        let mut inserted = Vec::new();
        for _ in 0..6 {
            let p = ptq((rng.gen_range(1..400), 10), (rng.gen_range(1..300), 10));
            if let Ok(v) = cdt.insert_point(p) {
                inserted.push(v);
                check(&cdt);
            }
        }
        for v in inserted.into_iter().rev() {
            cdt.remove_point(v).unwrap();
            check(&cdt);
        }
        assert_eq!(cdt.canonical_triangles(), before, "seed {seed}");
    }
}

#[test]
fn euler_holds_after_every_operation() {
    let mut cdt = Cdt::build(&random_instance(9, 8)).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut steiner = Vec::new();
    for k in 0..30 {
        if k % 3 == 2 && !steiner.is_empty() {
            let v = steiner.swap_remove(rng.gen_range(0..steiner.len()));
            cdt.remove_point(v).unwrap();
        } else {
            let p = ptq((rng.gen_range(0..=400), 10), (rng.gen_range(0..=300), 10));
            let before = cdt.steiner_count();
            if let Ok(v) = cdt.insert_point(p) {
                assert_eq!(cdt.steiner_count(), before + 1);
                steiner.push(v);
            }
        }
        cdt.validate().unwrap();
    }
    brute_force_delaunay(&cdt).unwrap();
}
