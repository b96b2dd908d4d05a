//! Exhaustive checks of the order classifier against a direct search over
//! `(x, y, z)` with `x + y + z = n` and `e1 x = e2 y + z`.

use flextile::builders;
use flextile::complex;
use flextile::feasibility;
use flextile::pot::SingleBondPot;
use flextile::scalar::ceil_rational;
use flextile::TileDistribution;

fn pots(max_e1: u32) -> impl Iterator<Item = SingleBondPot> {
    (2..=max_e1).flat_map(|e1| (2..=e1).map(move |e2| SingleBondPot::new(e1, e2).unwrap()))
}

fn brute(e1: u64, e2: u64, n: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for x in 0..=n {
        for y in 0..=n - x {
            let z = n - x - y;
            if e1 * x == e2 * y + z {
                out.push((x, y, z));
            }
        }
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn witnesses_match_direct_search() {
    for sb in pots(9) {
        let (e1, e2) = (sb.e1() as u64, sb.e2() as u64);
        for n in 1..=40 {
            let all = brute(e1, e2, n);
            let listed: Vec<(u64, u64, u64)> = feasibility::single_bond_distributions(&sb, n)
                .iter()
                .map(|d| (d.count(0), d.count(1), d.count(2)))
                .collect();
            assert_eq!(listed, all, "({e1},{e2}) n={n}");
            let witness = feasibility::is_realizable(&sb, n).map(|d| (d.count(0), d.count(1), d.count(2)));
            assert_eq!(witness, all.first().copied(), "({e1},{e2}) n={n}");
        }
    }
}

#[test]
fn general_oracle_lists_the_same_distributions() {
    for sb in pots(6) {
        let pot = sb.to_pot();
        for n in 1..=25 {
            let mut general = feasibility::distributions_for_order(&pot, n).unwrap();
            general.sort();
            let mut direct: Vec<TileDistribution> = brute(sb.e1() as u64, sb.e2() as u64, n)
                .into_iter()
                .map(|(x, y, z)| TileDistribution::new(vec![x, y, z]))
                .collect();
            direct.sort();
            assert_eq!(general, direct, "({},{}) n={n}", sb.e1(), sb.e2());
        }
    }
}

#[test]
fn min_order_is_first_realizable_order() {
    for sb in pots(9) {
        let first = (1..).find(|&n| !brute(sb.e1() as u64, sb.e2() as u64, n).is_empty()).unwrap();
        assert_eq!(feasibility::min_order(&sb), first);
    }
}

#[test]
fn gcd_divides_every_realizable_order() {
    for sb in pots(9) {
        let (e1, e2) = (sb.e1() as u64, sb.e2() as u64);
        let d = gcd(e1 + 1, e2 - 1);
        assert_eq!(feasibility::gcd_classifier(&sb), d);
        for n in 1..=60 {
            let realizable = !brute(e1, e2, n).is_empty();
            if realizable {
                assert_eq!(n % d, 0, "({e1},{e2}) n={n} d={d}");
            }
            if n >= 40 && n % d == 0 {
                assert!(realizable, "({e1},{e2}) n={n} d={d}");
            }
        }
    }
}

#[test]
fn zeta_is_one_past_the_last_gap() {
    for sb in pots(9) {
        let (e1, e2) = (sb.e1() as u64, sb.e2() as u64);
        let zeta = feasibility::zeta(&sb);
        if gcd(e1 + 1, e2 - 1) != 1 {
            assert_eq!(zeta, None);
            assert!(feasibility::eta(&sb).is_err());
            continue;
        }
        let last_gap = (1..=200).filter(|&n| brute(e1, e2, n).is_empty()).max().unwrap();
        assert_eq!(zeta, Some(last_gap + 1), "({e1},{e2})");
        let eta = feasibility::eta(&sb).unwrap();
        assert!(zeta.unwrap() <= ceil_rational(&eta) as u64);
        let by_hand = ((e1 + 1) * (e1 + e2) * e2).max((e2 - 1) * (e1 + e2) * e1);
        assert_eq!(eta, flextile::Rational::new(by_hand as i64, (e1 * e2) as i64));
    }
}

#[test]
fn order_table_marks_realizable_orders() {
    let sb = SingleBondPot::new(6, 4).unwrap();
    let report = feasibility::feasibility_report(&sb, 12);
    let realizable: Vec<u64> = report.orders.iter().filter(|e| e.realizable()).map(|e| e.order).collect();
    assert_eq!(realizable, vec![4, 5, 7, 8, 9, 10, 11, 12]);
    assert_eq!((report.d, report.min_order, report.zeta), (1, 4, Some(7)));
}

#[test]
fn every_realizable_order_has_a_connected_build() {
    for sb in pots(9) {
        let pot = sb.to_pot();
        for n in 1..=40 {
            match feasibility::is_realizable(&sb, n) {
                Some(_) => {
                    let g = builders::build_auto(&sb, n)
                        .unwrap_or_else(|e| panic!("({},{}) n={n}: {e}", sb.e1(), sb.e2()));
                    assert_eq!(g.order() as u64, n);
                    assert!(complex::validate_realization(&g, &pot).unwrap().ok);
                    assert_eq!(complex::components(&g).len(), 1);
                }
                None => assert!(builders::build_auto(&sb, n).is_err()),
            }
        }
    }
}
