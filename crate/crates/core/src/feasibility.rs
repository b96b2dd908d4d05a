//! Which orders a pot realizes, and with which tile distributions.
//!
//! For the single-bond pot `{a^e1},{a*^e2},{a*}` a distribution `(x, y, z)` of
//! order `n` exists exactly when `(e1+1) x + (1-e2) y = n` has a solution with
//! `x, y >= 0` and `z = n - x - y >= 0`; the balance `e1 x = e2 y + z` then
//! holds automatically. [`distributions_for_order`] is the brute-force oracle
//! that works for any pot and is used to cross-check the fast path.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::pot::{Pot, SingleBondPot};
use crate::scalar::ceil_rational;
use crate::spectrum::TileDistribution;
use crate::Rational;

/// Maximum number of candidate vectors any enumeration may visit.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("not applicable: gcd(e1+1, e2-1) = {d} != 1")]
    NotApplicable { d: u64 },
}

/// Number of nonnegative integer vectors of length `parts` summing to `n`.
fn compositions(n: u64, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(n == 0);
    }
    // C(n + parts - 1, parts - 1), saturating
    let k = (parts - 1) as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = match acc.checked_mul(n as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// All tile distributions of order `n`, in lexicographic order.
pub fn distributions_for_order(
    pot: &Pot,
    n: u64,
) -> Result<Vec<TileDistribution>, FeasibilityError> {
    if n == 0 {
        return Err(FeasibilityError::ZeroOrder);
    }
    let needed = compositions(n, pot.len());
    if needed > ENUMERATION_BUDGET as u128 {
        return Err(FeasibilityError::BudgetExceeded {
            needed,
            budget: ENUMERATION_BUDGET,
        });
    }
    let nets: Vec<Vec<i64>> = pot
        .bond_edge_types()
        .iter()
        .map(|&l| (1..=pot.len()).map(|j| pot.net_count(l, j)).collect())
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0u64; pot.len()];
    let mut balance = vec![0i64; nets.len()];
    enumerate(&nets, 0, n, &mut current, &mut balance, &mut out);
    Ok(out)
}

fn enumerate(
    nets: &[Vec<i64>],
    tile: usize,
    remaining: u64,
    current: &mut Vec<u64>,
    balance: &mut Vec<i64>,
    out: &mut Vec<TileDistribution>,
) {
    if tile + 1 == current.len() {
        current[tile] = remaining;
        let ok = nets
            .iter()
            .zip(balance.iter())
            .all(|(row, b)| b + row[tile] * remaining as i64 == 0);
        if ok {
            out.push(TileDistribution::new(current.clone()));
        }
        return;
    }
    for count in 0..=remaining {
        current[tile] = count;
        for (b, row) in balance.iter_mut().zip(nets) {
            *b += row[tile] * count as i64;
        }
        enumerate(nets, tile + 1, remaining - count, current, balance, out);
        for (b, row) in balance.iter_mut().zip(nets) {
            *b -= row[tile] * count as i64;
        }
    }
}

/// All distributions `(x, y, z)` of order `n`, by increasing `x`.
pub fn single_bond_distributions(pot: &SingleBondPot, n: u64) -> Vec<TileDistribution> {
    let (e1, e2) = (pot.e1() as i64, pot.e2() as i64);
    let n_i = n as i64;
    (0..=n_i)
        .filter_map(|x| {
            // (e1 + 1) x - n = (e2 - 1) y
            let rhs = (e1 + 1) * x - n_i;
            if rhs < 0 || rhs % (e2 - 1) != 0 {
                return None;
            }
            let y = rhs / (e2 - 1);
            let z = n_i - x - y;
            (z >= 0).then(|| TileDistribution::new(vec![x as u64, y as u64, z as u64]))
        })
        .collect()
}

/// A witness distribution of order `n` (smallest `x`), if one exists.
pub fn is_realizable(pot: &SingleBondPot, n: u64) -> Option<TileDistribution> {
    if n == 0 {
        return None;
    }
    single_bond_distributions(pot, n).into_iter().next()
}

/// `gcd(e1 + 1, e2 - 1)`.
pub fn gcd_classifier(pot: &SingleBondPot) -> u64 {
    (pot.e1() as u64 + 1).gcd(&(pot.e2() as u64 - 1))
}

/// Smallest realizable order.
pub fn min_order(pot: &SingleBondPot) -> u64 {
    (1..)
        .find(|&n| is_realizable(pot, n).is_some())
        .expect("order e1 + e2 is always realizable")
}

/// `max{(e1+1)(e1+e2)/e1, (e2-1)(e1+e2)/e2}`, the order from which every order is realizable.
pub fn eta(pot: &SingleBondPot) -> Result<Rational, FeasibilityError> {
    let d = gcd_classifier(pot);
    if d != 1 {
        return Err(FeasibilityError::NotApplicable { d });
    }
    let (e1, e2) = (pot.e1() as i64, pot.e2() as i64);
    let a = Rational::new((e1 + 1) * (e1 + e2), e1);
    let b = Rational::new((e2 - 1) * (e1 + e2), e2);
    Ok(a.max(b))
}

/// Smallest `n` such that every order `>= n` is realizable; `None` when `d != 1`.
pub fn zeta(pot: &SingleBondPot) -> Option<u64> {
    let bound = ceil_rational(&eta(pot).ok()?) as u64;
    let last_gap = (1..bound).rev().find(|&n| is_realizable(pot, n).is_none());
    Some(last_gap.map_or(1, |g| g + 1))
}

/// `e1 = e2 q + r` with `0 <= r < e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DivisionForm {
    pub q: u32,
    pub r: u32,
}

pub fn division_form(pot: &SingleBondPot) -> DivisionForm {
    let (q, r) = pot.e1().div_rem(&pot.e2());
    DivisionForm { q, r }
}

/// The three distributions every single-bond pot realizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalDistributions {
    /// `(1, q, r)`, order `q + r + 1`
    pub division: TileDistribution,
    /// `(1, 0, e1)`, order `1 + e1`
    pub star: TileDistribution,
    /// `(e2, e1, 0)`, order `e1 + e2`
    pub bipartite: TileDistribution,
}

pub fn canonical_distributions(pot: &SingleBondPot) -> CanonicalDistributions {
    let DivisionForm { q, r } = division_form(pot);
    let (e1, e2) = (pot.e1() as u64, pot.e2() as u64);
    CanonicalDistributions {
        division: TileDistribution::new(vec![1, q as u64, r as u64]),
        star: TileDistribution::new(vec![1, 0, e1]),
        bipartite: TileDistribution::new(vec![e2, e1, 0]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderEntry {
    pub order: u64,
    pub witness: Option<TileDistribution>,
}

impl OrderEntry {
    pub fn realizable(&self) -> bool {
        self.witness.is_some()
    }
}

/// Realizability of every order in `1..=max_order`.
pub fn order_table(pot: &SingleBondPot, max_order: u64) -> Vec<OrderEntry> {
    (1..=max_order)
        .map(|order| OrderEntry {
            order,
            witness: is_realizable(pot, order),
        })
        .collect()
}

/// Summary of the order structure of a single-bond pot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub d: u64,
    pub min_order: u64,
    pub eta: Option<Rational>,
    pub zeta: Option<u64>,
    pub orders: Vec<OrderEntry>,
}

pub fn feasibility_report(pot: &SingleBondPot, max_order: u64) -> FeasibilityReport {
    FeasibilityReport {
        d: gcd_classifier(pot),
        min_order: min_order(pot),
        eta: eta(pot).ok(),
        zeta: zeta(pot),
        orders: order_table(pot, max_order),
    }
}
