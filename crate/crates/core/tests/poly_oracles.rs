mod common;

use std::collections::HashSet;

use common::{all_brgraphs, random_brgraph, random_graph};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgh_core::poly::{
    hr_nu3, lift_to_bipartite, project_from_bipartite, search_poly3_ordered, ExcluderTable,
};
use sgh_core::*;

/// Forward reachability over walk-triple states, from the start triple.
fn brute_excluder(g: &Graph, triple: [VertexId; 3], target: usize) -> bool {
    let [o1, o2] = [(target + 1) % 3, (target + 2) % 3];
    let mut seen = HashSet::from([triple]);
    let mut frontier = vec![triple];
    while let Some(u) = frontier.pop() {
        if u[o1] == u[o2] {
            return true;
        }
        for a in g.vertices() {
            for b in g.vertices() {
                for c in g.vertices() {
                    let v = [a, b, c];
                    let steps = (0..3).all(|j| g.adjacent(u[j], v[j]));
                    let avoids = !g.adjacent(u[target], v[o1]) && !g.adjacent(u[target], v[o2]);
                    if steps && avoids && seen.insert(v) {
                        frontier.push(v);
                    }
                }
            }
        }
    }
    false
}

fn all_triples(n: usize) -> impl Iterator<Item = [VertexId; 3]> {
    (0..n * n * n).map(move |i| [i / (n * n), i / n % n, i % n].map(VertexId::from))
}

/// Colour preservation checked over pairs of triples of edges.
fn brute_polymorphism(h: &BrGraph, f: &[VertexId]) -> bool {
    let n = h.len();
    let at = |x: [VertexId; 3]| f[x[0].index() * n * n + x[1].index() * n + x[2].index()];
    all_triples(n).all(|x| {
        all_triples(n).all(|y| {
            Colour::BOTH
                .iter()
                .all(|&c| !(0..3).all(|i| h.has(c, x[i], y[i])) || h.has(c, at(x), at(y)))
        })
    })
}

fn brute_nu3(n: usize, f: &[VertexId]) -> bool {
    let at = |x: [VertexId; 3]| f[x[0].index() * n * n + x[1].index() * n + x[2].index()];
    all_triples(n).all(|x| {
        let maj = if x[0] == x[1] || x[0] == x[2] {
            Some(x[0])
        } else if x[1] == x[2] {
            Some(x[1])
        } else {
            None
        };
        maj.is_none_or(|m| at(x) == m)
    })
}

/// Tables over `n` values where unforced entries range over the inputs.
fn conservative_nu3_tables(n: usize) -> Vec<Vec<VertexId>> {
    let free: Vec<[VertexId; 3]> = all_triples(n)
        .filter(|x| x[0] != x[1] && x[1] != x[2] && x[0] != x[2])
        .collect();
    let mut base = vec![VertexId(0); n * n * n];
    for (i, x) in all_triples(n).enumerate() {
        base[i] = if x[1] == x[2] { x[1] } else { x[0] };
    }
    (0..3usize.pow(free.len() as u32))
        .map(|mut code| {
            let mut t = base.clone();
            for x in &free {
                t[x[0].index() * n * n + x[1].index() * n + x[2].index()] = x[code % 3];
                code /= 3;
            }
            t
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn excluder_table_matches_forward_search(seed in any::<u64>(), n in 2usize..=5, p in 0.2f64..0.8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, p, true);
        let table = ExcluderTable::compute(&g).unwrap();
        for x in all_triples(n) {
            for t in 0..3 {
                let expected = brute_excluder(&g, x, t);
                prop_assert_eq!(table.has(x, t), expected);
                if let Some(cert) = table.certificate(x, t) {
                    prop_assert!(expected && cert.verify(&g));
                }
            }
        }
    }

    #[test]
    fn hr_nu3_is_a_symmetric_conservative_nu3(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 0.4, true);
        let Ok(f) = hr_nu3(&g) else {
            prop_assert!(!ExcluderTable::compute(&g).unwrap().permutable().is_empty());
            return Ok(());
        };
        let h = g.to_red_brgraph();
        prop_assert!(brute_polymorphism(&h, f.table()) && brute_nu3(n, f.table()));
        prop_assert!(f.entries().all(|(x, y)| x.contains(&y)));
        let props = PolyProps::parse("nu3,conservative,symmetric").unwrap();
        prop_assert!(check_props(&Target::from_graph(&g), &f, props).unwrap().all_hold());
    }

    #[test]
    fn transport_round_trips_and_keeps_flags(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_brgraph(&mut rng, n, true);
        let prod = product_with_p(&h);
        let f = if rng.gen_bool(0.5) {
            Polymorphism3::from_fn(n, |x| x[rng.gen_range(0..3)])
        } else {
            Polymorphism3::from_fn(n, |_| VertexId::from(rng.gen_range(0..n)))
        };
        let lift = lift_to_bipartite(&f, &prod).unwrap();
        prop_assert_eq!(project_from_bipartite(&lift, &prod).unwrap(), f.clone());
        let props = PolyProps::parse("nu3,wnu,idempotent,conservative").unwrap();
        let small = check_props(&Target::new(h.clone()), &f, props).unwrap();
        let big = check_props(&Target::product(&prod, None), &lift, props).unwrap();
        for prop in props.props() {
            prop_assert_eq!(small.holds(prop), big.holds(prop), "{}", prop.name());
        }
    }
}

#[test]
fn search_agrees_with_exhaustive_tables_on_two_vertices() {
    let tables: Vec<Vec<VertexId>> = (0u32..256)
        .map(|code| (0..8).map(|i| VertexId(code >> i & 1)).collect())
        .collect();
    for h in all_brgraphs(2) {
        let target = Target::new(h.clone());
        for spec in [
            "idempotent",
            "conservative",
            "wnu",
            "nu3",
            "conservative,nu3",
        ] {
            let props = PolyProps::parse(spec).unwrap();
            let expected = tables.iter().any(|t| {
                let f = Polymorphism3::from_table(2, t.clone()).unwrap();
                brute_polymorphism(&h, t) && check_props(&target, &f, props).unwrap().all_hold()
            });
            let found = search_poly3(&target, props).unwrap();
            assert_eq!(found.is_found(), expected, "{spec} on {:?}", h.all_edges());
        }
    }
}

#[test]
fn conservative_nu3_search_agrees_with_enumeration_on_three_vertices() {
    let tables = conservative_nu3_tables(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut graphs = all_brgraphs(3);
    graphs.shuffle(&mut rng);
    for h in graphs.into_iter().take(400) {
        let expected = tables.iter().any(|t| brute_polymorphism(&h, t));
        let props = PolyProps::parse("conservative,nu3").unwrap();
        let found = search_poly3(&Target::new(h.clone()), props).unwrap();
        assert_eq!(found.is_found(), expected, "{:?}", h.all_edges());
        if let Some(f) = found.found() {
            assert!(brute_polymorphism(&h, f.table()) && brute_nu3(3, f.table()));
        }
    }
}

#[test]
fn ordered_search_respects_value_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let h = random_brgraph(&mut rng, 3, true);
        let target = Target::switching(&switching_graph(&h));
        let props = PolyProps::parse("semi,wnu").unwrap();
        let mut order: Vec<VertexId> = (0..6).map(VertexId::from).collect();
        order.shuffle(&mut rng);
        let a = search_poly3(&target, props).unwrap();
        let b = search_poly3_ordered(&target, props, &order).unwrap();
        assert_eq!(a.is_found(), b.is_found());
        if let Some(f) = b.found() {
            assert!(check_props(&target, f, props).unwrap().all_hold());
        }
    }
}

#[test]
fn conservative_conditions_agree_on_two_vertex_inputs() {
    for h in all_brgraphs(2).into_iter().chain(all_brgraphs(1)) {
        let pg = switching_graph(&h);
        let red = pg.graph.red_graph();
        let nu3 = search_poly3(
            &Target::from_graph(&red),
            PolyProps::parse("conservative,nu3").unwrap(),
        )
        .unwrap()
        .is_found();
        let wnu = search_poly3(
            &Target::new(pg.graph.clone()),
            PolyProps::parse("conservative,wnu").unwrap(),
        )
        .unwrap()
        .is_found();
        let no_triple = permutable_triples_of(&red);
        assert_eq!((nu3, wnu), (no_triple, no_triple), "{:?}", h.all_edges());
    }
}

fn permutable_triples_of(g: &Graph) -> bool {
    ExcluderTable::compute(g).unwrap().permutable().is_empty()
}
