use std::collections::BTreeSet;

use num_bigint::BigInt;
use taut_core::cayley::{build_ball, CayleyBall};
use taut_core::complexes::{samples, OmegaSet};
use taut_core::oracle::PresentationOracle;
use taut_core::presentation::{build_p, build_racg, Homomorphism};
use taut_core::schedule::{kernel_length_lower_bound, Surd};
use taut_core::spectrum::{cayley_spectrum, Tautness};
use taut_core::word_engine::{kernel_shortest_element, Budget, KernelSearch};
use taut_core::{GroupPresentation, SimpleGraph, Word};

/// Rooted isomorphism by backtracking; only meant for balls of a few dozen vertices.
fn rooted_isomorphic(a: &SimpleGraph, ra: usize, b: &SimpleGraph, rb: usize) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let da = a.distances_from(ra);
    let db = b.distances_from(rb);
    let deg = |g: &SimpleGraph, v| g.neighbors(v).len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[ra] = rb;
    used[rb] = true;
    let mut order: Vec<usize> = (0..n).filter(|&v| v != ra).collect();
    order.sort_by_key(|&v| da[v]);

    fn go(
        i: usize,
        order: &[usize],
        a: &SimpleGraph,
        b: &SimpleGraph,
        map: &mut [usize],
        used: &mut [bool],
        ok: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        let Some(&v) = order.get(i) else { return true };
        for w in 0..map.len() {
            if used[w] || !ok(v, w) {
                continue;
            }
            let consistent = a.neighbors(v).iter().all(|&u| map[u] == usize::MAX || b.adjacent(map[u], w))
                && (0..map.len()).all(|u| map[u] == usize::MAX || a.adjacent(u, v) == b.adjacent(map[u], w));
            if consistent {
                map[v] = w;
                used[w] = true;
                if go(i + 1, order, a, b, map, used, ok) {
                    return true;
                }
                map[v] = usize::MAX;
                used[w] = false;
            }
        }
        false
    }
    let ok = |v: usize, w: usize| da[v] == db[w] && deg(a, v) == deg(b, w);
    go(0, &order, a, b, &mut map, &mut used, &ok)
}

fn induced_ball(ball: &CayleyBall, center: usize, r: usize) -> (SimpleGraph, usize) {
    let keep: Vec<usize> =
        (0..ball.vertex_count()).filter(|&v| ball.graph_distance(center, v).is_some_and(|d| d <= r)).collect();
    let pos = |v: usize| keep.iter().position(|&k| k == v);
    let mut edges = BTreeSet::new();
    for (i, &v) in keep.iter().enumerate() {
        for &u in ball.neighbors(v) {
            if let Some(j) = pos(u) {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    (SimpleGraph::numbered(keep.len(), &edges).unwrap(), pos(center).unwrap())
}

#[test]
fn balls_look_the_same_from_every_vertex() {
    let budget = Budget::default();
    for p in [build_racg(&SimpleGraph::cycle(5)), build_racg(&SimpleGraph::path(3)), cyclic(7)] {
        let oracle = PresentationOracle::new(p, budget);
        let small = build_ball(&oracle, 2).unwrap();
        let big = build_ball(&oracle, 3).unwrap();
        let (g0, r0) = induced_ball(&small, 0, 2);
        for x in (0..big.vertex_count()).filter(|&v| big.vertices[v].dist == 1) {
            let (gx, rx) = induced_ball(&big, x, 2);
            assert!(rooted_isomorphic(&g0, r0, &gx, rx), "ball around {} differs", big.vertices[x].word);
        }
    }
}

fn cyclic(n: i64) -> GroupPresentation {
    GroupPresentation::new(vec!["a".into()], vec![Word::power(0, n)]).unwrap()
}

#[test]
fn kernel_lengths_respect_the_lower_bound() {
    let budget = Budget::default();
    let c4 = samples::cycle(4);
    let omega = OmegaSet::new(vec![samples::boundary_loop(&c4, 4)]);
    for (s, t) in [(vec![0], vec![0, 1]), (vec![0, 1], vec![0, 1, 2])] {
        let (s, t): (BTreeSet<i64>, BTreeSet<i64>) = (s.into_iter().collect(), t.into_iter().collect());
        let p_s = build_p(&c4, &omega, &s).unwrap();
        let p_t = build_p(&c4, &omega, &t).unwrap();
        let big = |x: &BTreeSet<i64>| x.iter().map(|&v| BigInt::from(v)).collect::<BTreeSet<_>>();
        let bound = kernel_length_lower_bound(1, &big(&s), &big(&t)).unwrap();
        let h = Homomorphism::generator_identity(p_s.clone(), p_t.clone()).unwrap();
        match kernel_shortest_element(&p_s, &p_t, &h, 4, &budget).unwrap() {
            KernelSearch::Found { length, .. } => {
                assert!(Surd::integer(length as i64) >= bound, "S={s:?} T={t:?}: length {length} < {bound}")
            }
            KernelSearch::NotFoundWithinRadius { .. } => {}
        }
    }
}

#[test]
fn larger_budgets_only_refine_spectra() {
    let tiny = Budget { max_cosets: 8, max_deductions: 50, max_search_depth: 1, max_degree: 2 };
    let groups = [
        cyclic(5),
        build_racg(&SimpleGraph::cycle(5)),
        GroupPresentation::new(vec!["a".into(), "b".into()], vec![Word::power(0, 3), Word::power(1, 3)]).unwrap(),
    ];
    for p in groups {
        let mut previous: Option<Vec<Tautness>> = None;
        for budget in [tiny, Budget::small(), Budget::default()] {
            let oracle = PresentationOracle::new(p.clone(), budget);
            let spectrum = match cayley_spectrum(&oracle, 7, &budget) {
                Ok(s) => s,
                // an oracle that cannot even build the ball decides nothing
                Err(_) => continue,
            };
            let now: Vec<Tautness> = spectrum.entries.iter().map(|e| e.status).collect();
            if let Some(before) = &previous {
                for (b, n) in before.iter().zip(&now) {
                    assert!(*b == Tautness::Unknown || b == n, "status changed from {b:?} to {n:?}");
                }
            }
            previous = Some(now);
        }
    }
}
