use flextile::complex::{self, LabeledMultigraph, Violation, DEFAULT_MAX_HALF_EDGES};
use flextile::pot::{parse_pot, Pot, SingleBondPot};
use flextile::TileDistribution;

fn small_distributions(pot: &Pot, max_half_edges: u64) -> Vec<TileDistribution> {
    let arms: Vec<u64> = pot.tiles().iter().map(|t| t.arms() as u64).collect();
    let mut out = Vec::new();
    let mut counts = vec![0u64; arms.len()];
    fn walk(j: usize, left: u64, arms: &[u64], counts: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if j == arms.len() {
            if counts.iter().any(|&c| c > 0) {
                out.push(counts.clone());
            }
            return;
        }
        for c in 0..=left / arms[j] {
            counts[j] = c;
            walk(j + 1, left - c * arms[j], arms, counts, out);
        }
        counts[j] = 0;
    }
    let mut raw = Vec::new();
    walk(0, max_half_edges, &arms, &mut counts, &mut raw);
    for c in raw {
        let d = TileDistribution::new(c);
        if d.satisfies(pot) {
            out.push(d);
        }
    }
    out
}

fn pots() -> Vec<Pot> {
    let mut out: Vec<Pot> = (2..=4)
        .flat_map(|e1| (2..=e1).map(move |e2| SingleBondPot::new(e1, e2).unwrap().to_pot()))
        .collect();
    out.push(parse_pot("{a,b};{a*};{b*}").unwrap());
    out.push(parse_pot("{a^2,b};{a*,b*};{a*};{b*}").unwrap());
    out
}

#[test]
fn enumerated_realizations_are_valid_and_conserve_half_edges() {
    for pot in pots() {
        for dist in small_distributions(&pot, 10) {
            let graphs = complex::enumerate_realizations(&pot, &dist, DEFAULT_MAX_HALF_EDGES).unwrap();
            let half_edges: u64 = pot.tiles().iter().zip(dist.counts()).map(|(t, &r)| t.arms() as u64 * r).sum();
            assert!(!graphs.is_empty(), "{pot} {dist} has no realization");
            for g in &graphs {
                assert_eq!(2 * g.edge_count() as u64, half_edges, "{pot} {dist}");
                assert!(complex::validate_realization(g, &pot).unwrap().ok);
                assert_eq!(complex::tile_distribution_of(g, &pot).unwrap(), dist);
            }
        }
    }
}

#[test]
fn disconnected_realizations_split_along_a_listed_decomposition() {
    for pot in pots() {
        for dist in small_distributions(&pot, 10) {
            let decompositions = complex::decompose_distribution(&pot, &dist).unwrap();
            let graphs = complex::enumerate_realizations(&pot, &dist, DEFAULT_MAX_HALF_EDGES).unwrap();
            let mut any_disconnected = false;
            for g in &graphs {
                let mut parts = complex::component_distributions(g, &pot).unwrap();
                assert_eq!(parts.len(), complex::components(g).len());
                for p in &parts {
                    assert!(p.satisfies(&pot), "{pot}: component {p} unbalanced");
                }
                if parts.len() > 1 {
                    any_disconnected = true;
                    parts.sort_by(|a, b| b.cmp(a));
                    assert!(decompositions.contains(&parts), "{pot} {dist}: {parts:?} not listed");
                }
            }
            assert_eq!(any_disconnected, !decompositions.is_empty(), "{pot} {dist}");
        }
    }
}

#[test]
fn validation_reports_each_defect() {
    let pot = parse_pot("{a^3};{a*^3};{a*}").unwrap();
    let mut g = LabeledMultigraph::new();
    let u = g.add_vertex(1);
    let v = g.add_vertex(2);
    for _ in 0..3 {
        g.add_edge(u, v, 'a');
    }
    assert!(complex::validate_realization(&g, &pot).unwrap().ok);

    let mut looped = g.clone();
    looped.add_edge(u, u, 'a');
    let check = complex::validate_realization(&looped, &pot).unwrap();
    assert!(!check.ok);
    assert!(check.violations.iter().any(|v| matches!(v, Violation::Loop { .. })));

    let mut short = LabeledMultigraph::new();
    let u = short.add_vertex(1);
    let v = short.add_vertex(2);
    short.add_edge(u, v, 'a');
    let check = complex::validate_realization(&short, &pot).unwrap();
    assert!(check.violations.iter().any(|v| matches!(v, Violation::EndMismatch { .. })));

    let two = g.disjoint_union(&g);
    assert!(complex::validate_realization(&two, &pot).unwrap().ok);
    assert_eq!(complex::components(&two).len(), 2);
    assert_eq!(complex::tile_distribution_of(&two, &pot).unwrap().counts(), &[2, 2, 0]);
}

#[test]
fn disconnection_classifiers_follow_the_order_rules() {
    for e1 in 2..=7u32 {
        for e2 in 2..=e1 {
            let sb = SingleBondPot::new(e1, e2).unwrap();
            for n in 1..=16 {
                let exact = complex::realizes_disconnected(&sb, n).unwrap();
                if let Some(by_gcd) = complex::disconnected_by_gcd(&sb, n) {
                    assert_eq!(exact, by_gcd, "({e1},{e2}) n={n}");
                }
                if let Some(by_zeta) = complex::disconnected_by_zeta(&sb, n) {
                    if by_zeta {
                        assert!(exact, "({e1},{e2}) n={n}");
                    }
                }
            }
        }
    }
}

#[test]
fn graph_documents_round_trip() {
    let pot = parse_pot("{a^3};{a*^3};{a*}").unwrap();
    let mut g = LabeledMultigraph::new();
    let u = g.add_vertex(1);
    let v = g.add_vertex(3);
    let w = g.add_vertex(3);
    let x = g.add_vertex(3);
    for t in [v, w, x] {
        g.add_edge(u, t, 'a');
    }
    let doc = complex::GraphDocument::parse(&g.to_json(&pot)).unwrap();
    assert_eq!(doc.graph(), g);
    assert_eq!(parse_pot(&doc.pot).unwrap(), pot);
    assert!(complex::GraphDocument::parse(r#"{"pot":"{a};{a*}","vertices":[],"edges":[],"x":1}"#).is_err());
}
