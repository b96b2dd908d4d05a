//! Constructions of connected complexes for the single-bond pot.
//!
//! Every builder works in role terms (donor `{a^e1}`, acceptor `{a*^e2}`, cap
//! `{a*}`) and emits vertices labelled with the source pot's tile indices, so
//! the output validates against [`SingleBondPot::to_pot`] directly.
//!
//! The path and cycle constructions keep a running count of unmatched ends and
//! compare it against closed-form expectations after each phase. A mismatch is
//! returned as [`BuildError::Ledger`] instead of being repaired.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::complex::{components, validate_realization, LabeledMultigraph};
use crate::feasibility::{self, canonical_distributions};
use crate::pot::{Role, SingleBondPot};
use crate::spectrum::TileDistribution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("distribution {dist} is invalid: {reason}")]
    InvalidDistribution { dist: String, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no graph of order {0} is realizable")]
    Infeasible(u64),
    #[error("no connected construction applies to any distribution of order {order}{}", if *.all_forced { " (every distribution forces a disconnected graph)" } else { "" })]
    NoConnectedBuilder { order: u64, all_forced: bool },
    #[error("end-count ledger mismatch after {step}: {quantity} is {observed}, expected {expected}")]
    Ledger {
        step: &'static str,
        quantity: &'static str,
        expected: i64,
        observed: i64,
    },
    #[error("constructed graph failed validation: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Path,
    Cycle,
    Star,
    Divalg,
    Bipartite,
    Auto,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Path,
        Algorithm::Cycle,
        Algorithm::Star,
        Algorithm::Divalg,
        Algorithm::Bipartite,
        Algorithm::Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Path => "path",
            Algorithm::Cycle => "cycle",
            Algorithm::Star => "star",
            Algorithm::Divalg => "divalg",
            Algorithm::Bipartite => "bipartite",
            Algorithm::Auto => "auto",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// One checked end count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub step: &'static str,
    pub quantity: &'static str,
    pub value: i64,
}

/// A constructed graph with the end counts verified along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub graph: LabeledMultigraph,
    pub ledger: Vec<LedgerEntry>,
}

/// Graph under construction plus unmatched-end bookkeeping.
struct Assembly<'a> {
    pot: &'a SingleBondPot,
    graph: LabeledMultigraph,
    roles: Vec<Role>,
    free: Vec<u32>,
    ledger: Vec<LedgerEntry>,
}

impl<'a> Assembly<'a> {
    fn new(pot: &'a SingleBondPot) -> Self {
        Self {
            pot,
            graph: LabeledMultigraph::new(),
            roles: Vec::new(),
            free: Vec::new(),
            ledger: Vec::new(),
        }
    }

    fn arms(&self, role: Role) -> u32 {
        match role {
            Role::Donor => self.pot.e1(),
            Role::Acceptor => self.pot.e2(),
            Role::Cap => 1,
        }
    }

    fn add(&mut self, role: Role) -> usize {
        let id = self.graph.add_vertex(self.pot.tile_index(role));
        self.roles.push(role);
        self.free.push(self.arms(role));
        id
    }

    /// Joins one free end of each; `donor` must be a donor vertex.
    fn bond(&mut self, donor: usize, other: usize) {
        debug_assert_eq!(self.roles[donor], Role::Donor);
        debug_assert_ne!(self.roles[other], Role::Donor);
        assert!(self.free[donor] > 0 && self.free[other] > 0, "no free end to bond");
        self.free[donor] -= 1;
        self.free[other] -= 1;
        let label = self.pot.label();
        if self.pot.hat_swapped() {
            self.graph.add_edge(other, donor, label);
        } else {
            self.graph.add_edge(donor, other, label);
        }
    }

    /// Bonds `spine` and `hanger`, whichever of the two is the donor.
    fn bond_any(&mut self, a: usize, b: usize) {
        if self.roles[a] == Role::Donor {
            self.bond(a, b);
        } else {
            self.bond(b, a);
        }
    }

    fn free_ends(&self, role: Role) -> i64 {
        self.roles
            .iter()
            .zip(&self.free)
            .filter(|(r, _)| **r == role)
            .map(|(_, f)| *f as i64)
            .sum()
    }

    fn check(
        &mut self,
        step: &'static str,
        quantity: &'static str,
        observed: i64,
        expected: i64,
    ) -> Result<(), BuildError> {
        if observed != expected {
            return Err(BuildError::Ledger {
                step,
                quantity,
                expected,
                observed,
            });
        }
        self.ledger.push(LedgerEntry {
            step,
            quantity,
            value: observed,
        });
        Ok(())
    }

    fn check_free(
        &mut self,
        step: &'static str,
        role: Role,
        expected: i64,
    ) -> Result<(), BuildError> {
        let quantity = match role {
            Role::Donor => "unmatched a ends",
            Role::Acceptor => "unmatched a* ends on t2",
            Role::Cap => "unmatched a* ends on t3",
        };
        let observed = self.free_ends(role);
        self.check(step, quantity, observed, expected)
    }

    /// Pairs every free end on `acceptors` with donors, lowest index first.
    fn match_acceptors(&mut self, acceptors: impl IntoIterator<Item = usize>) {
        let mut donor = 0;
        for a in acceptors {
            while self.free[a] > 0 {
                while donor < self.roles.len()
                    && (self.roles[donor] != Role::Donor || self.free[donor] == 0)
                {
                    donor += 1;
                }
                if donor == self.roles.len() {
                    return;
                }
                self.bond(donor, a);
            }
        }
    }

    /// Hangs a cap on every remaining free donor end; returns how many were added.
    fn cap_donors(&mut self) -> u64 {
        let mut added = 0;
        for v in 0..self.roles.len() {
            while self.roles[v] == Role::Donor && self.free[v] > 0 {
                let cap = self.add(Role::Cap);
                self.bond(v, cap);
                added += 1;
            }
        }
        added
    }

    fn finish(self) -> Construction {
        Construction {
            graph: self.graph,
            ledger: self.ledger,
        }
    }
}

/// `(R1, R2, R3)` as signed integers after checking the balance `e1 R1 = e2 R2 + R3`.
fn checked_counts(pot: &SingleBondPot, dist: &TileDistribution) -> Result<[i64; 3], BuildError> {
    let invalid = |reason: String| BuildError::InvalidDistribution {
        dist: dist.to_string(),
        reason,
    };
    if dist.len() != 3 {
        return Err(invalid(format!("expected 3 tile counts, got {}", dist.len())));
    }
    let [r1, r2, r3] = [0, 1, 2].map(|i| dist.count(i) as i64);
    let (e1, e2) = (pot.e1() as i64, pot.e2() as i64);
    if e1 * r1 != e2 * r2 + r3 {
        return Err(invalid(format!(
            "{e1}*{r1} != {e2}*{r2} + {r3}, the a and a* ends do not balance"
        )));
    }
    if r1 == 0 {
        return Err(invalid("distribution is empty".into()));
    }
    Ok([r1, r2, r3])
}

/// Path construction for `1 + R2 (e2 - 1) >= R1`.
pub fn build_path(pot: &SingleBondPot, dist: &TileDistribution) -> Result<LabeledMultigraph, BuildError> {
    trace_path(pot, dist).map(|c| c.graph)
}

/// [`build_path`] with its end-count ledger.
pub fn trace_path(pot: &SingleBondPot, dist: &TileDistribution) -> Result<Construction, BuildError> {
    let [r1, r2, r3] = checked_counts(pot, dist)?;
    let (e1, e2) = (pot.e1() as i64, pot.e2() as i64);
    if 1 + r2 * (e2 - 1) < r1 {
        return Err(BuildError::Precondition(format!(
            "path construction needs 1 + R2(e2-1) >= R1, but 1 + {r2}*{} = {} < {r1}",
            e2 - 1,
            1 + r2 * (e2 - 1)
        )));
    }
    if r2 == 0 {
        if r1 == 1 {
            return Ok(Construction {
                graph: build_star(pot),
                ledger: Vec::new(),
            });
        }
        return Err(BuildError::Precondition(format!(
            "R2 = 0 with R1 = {r1} > 1 leaves the t1 tiles unconnectable"
        )));
    }

    // With R1 < R2 the spine alternates the other way round.
    let (spine_role, hang_role, spine_count, hang_total) = if r1 >= r2 {
        (Role::Acceptor, Role::Donor, r2, r1)
    } else {
        (Role::Donor, Role::Acceptor, r1, r2)
    };
    let mut asm = Assembly::new(pot);

    // step 1: alternating path on 2 * spine_count - 1 vertices
    let path_len = 2 * spine_count - 1;
    for k in 0..path_len {
        let v = asm.add(if k % 2 == 0 { spine_role } else { hang_role });
        if k > 0 {
            asm.bond_any(v - 1, v);
        }
    }

    // steps 2 and 3: hang the remaining copies greedily on v1, v3, ...
    let spine_arms = asm.arms(spine_role) as i64;
    let mut counter = hang_total - (spine_count - 1);
    let odd: Vec<usize> = (0..path_len as usize).step_by(2).collect();
    for (i, &v) in odd.iter().enumerate() {
        if counter == 0 {
            break;
        }
        let mut cap = if i == 0 { spine_arms - 1 } else { spine_arms - 2 };
        if i + 1 == odd.len() {
            cap = asm.free[v] as i64;
        }
        let take = counter.min(cap);
        for _ in 0..take {
            let h = asm.add(hang_role);
            asm.bond_any(v, h);
        }
        counter -= take;
    }
    asm.check("step 3", "copies left to attach", counter, 0)?;
    asm.check_free("step 3", Role::Donor, (e1 - 1) * r1 - r2 + 1)?;
    asm.check_free("step 3", Role::Acceptor, (e2 - 1) * r2 - r1 + 1)?;

    // step 4: residual a* on t2 vertices meet residual a ends
    let acceptors: Vec<usize> = (0..asm.roles.len())
        .filter(|&v| asm.roles[v] == Role::Acceptor)
        .collect();
    asm.match_acceptors(acceptors);
    asm.check_free("step 4", Role::Acceptor, 0)?;
    asm.check_free("step 4", Role::Donor, e1 * r1 - e2 * r2)?;

    // step 5: caps
    let caps = asm.cap_donors() as i64;
    asm.check("step 5", "t3 tiles attached", caps, r3)?;
    Ok(asm.finish())
}

/// Cycle construction for `1 <= R1 <= R2`.
pub fn build_cycle(pot: &SingleBondPot, dist: &TileDistribution) -> Result<LabeledMultigraph, BuildError> {
    trace_cycle(pot, dist).map(|c| c.graph)
}

/// [`build_cycle`] with its end-count ledger.
pub fn trace_cycle(pot: &SingleBondPot, dist: &TileDistribution) -> Result<Construction, BuildError> {
    let [r1, r2, r3] = checked_counts(pot, dist)?;
    let (e1, e2) = (pot.e1() as i64, pot.e2() as i64);
    if r1 > r2 {
        return Err(BuildError::Precondition(format!(
            "cycle construction needs R1 <= R2, but R1 = {r1} > R2 = {r2}"
        )));
    }
    let mut asm = Assembly::new(pot);

    // step 1: alternating cycle v1 (t1), v2 (t2), ..., v_{2 R1} (t2)
    let len = 2 * r1 as usize;
    for k in 0..len {
        asm.add(if k % 2 == 0 { Role::Donor } else { Role::Acceptor });
    }
    for k in (1..len).step_by(2) {
        asm.bond(k - 1, k);
        asm.bond((k + 1) % len, k);
    }

    // step 2: each t2 spends its other e2 - 2 ends on its two neighbours
    let extra = (e2 - 2) as usize;
    for k in (1..len).step_by(2) {
        for _ in 0..extra / 2 {
            asm.bond(k - 1, k);
        }
        for _ in 0..extra.div_ceil(2) {
            asm.bond((k + 1) % len, k);
        }
    }
    for v in (0..len).step_by(2) {
        let free = asm.free[v] as i64;
        asm.check("step 2", "unmatched a ends on a cycle t1", free, e1 - e2)?;
    }
    asm.check_free("step 2", Role::Acceptor, 0)?;
    if r2 > r1 && r2 - r1 >= r1 * (e1 - e2) {
        return Err(BuildError::Ledger {
            step: "step 2",
            quantity: "room for the remaining t2 copies",
            expected: r2 - r1 + 1,
            observed: r1 * (e1 - e2),
        });
    }

    // steps 3 and 4: hang the other R2 - R1 copies of t2, e1 - e2 per t1
    let mut counter = r2 - r1;
    let mut hung = Vec::new();
    for v in (0..len).step_by(2) {
        if counter == 0 {
            break;
        }
        let take = counter.min(e1 - e2);
        for _ in 0..take {
            let h = asm.add(Role::Acceptor);
            asm.bond(v, h);
            hung.push(h);
        }
        counter -= take;
    }
    asm.check("step 4", "copies left to attach", counter, 0)?;
    asm.check_free("step 4", Role::Acceptor, (r2 - r1) * (e2 - 1))?;

    // step 5
    asm.match_acceptors(hung);
    asm.check_free("step 5", Role::Acceptor, 0)?;
    asm.check_free("step 5", Role::Donor, r1 * (e1 - e2) - e2 * (r2 - r1))?;
    asm.check("step 5", "residual a ends vs R3", asm.free_ends(Role::Donor), r3)?;

    // step 6
    let caps = asm.cap_donors() as i64;
    asm.check("step 6", "t3 tiles attached", caps, r3)?;
    Ok(asm.finish())
}

/// One t1 joined to `e1` one-armed tiles; distribution `(1, 0, e1)`.
pub fn build_star(pot: &SingleBondPot) -> LabeledMultigraph {
    let mut asm = Assembly::new(pot);
    asm.add(Role::Donor);
    asm.cap_donors();
    asm.graph
}

/// Distribution `(1, q, r)` for `e1 = q e2 + r`: the t1 tile bonds `e2`
/// times to each t2 and once to each t3.
pub fn build_divalg(pot: &SingleBondPot) -> LabeledMultigraph {
    let form = feasibility::division_form(pot);
    let mut asm = Assembly::new(pot);
    let hub = asm.add(Role::Donor);
    for _ in 0..form.q {
        let t2 = asm.add(Role::Acceptor);
        for _ in 0..pot.e2() {
            asm.bond(hub, t2);
        }
    }
    asm.cap_donors();
    asm.graph
}

/// `K_{e2,e1}`: `e2` copies of t1 each bonded once to each of `e1` copies of t2.
pub fn build_bipartite(pot: &SingleBondPot) -> LabeledMultigraph {
    let mut asm = Assembly::new(pot);
    let donors: Vec<usize> = (0..pot.e2()).map(|_| asm.add(Role::Donor)).collect();
    let acceptors: Vec<usize> = (0..pot.e1()).map(|_| asm.add(Role::Acceptor)).collect();
    for &d in &donors {
        for &a in &acceptors {
            asm.bond(d, a);
        }
    }
    asm.graph
}

/// The builder that will handle `dist` (role order), if any.
///
/// Canonical star and division-algorithm distributions get their dedicated
/// builders; otherwise the cycle construction is preferred when `R1 <= R2`
/// and the path construction when `1 + R2 (e2 - 1) >= R1`.
pub fn select_algorithm(pot: &SingleBondPot, dist: &TileDistribution) -> Option<Algorithm> {
    checked_counts(pot, dist).ok()?;
    let canon = canonical_distributions(pot);
    let (r1, r2) = (dist.count(0), dist.count(1));
    if *dist == canon.star {
        Some(Algorithm::Star)
    } else if *dist == canon.division {
        Some(Algorithm::Divalg)
    } else if r1 <= r2 {
        Some(Algorithm::Cycle)
    } else if 1 + r2 * (pot.e2() as u64 - 1) >= r1 && r2 > 0 {
        Some(Algorithm::Path)
    } else {
        None
    }
}

/// A construction request: pot, role-ordered distribution and algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildRequest {
    pub pot: SingleBondPot,
    pub dist: TileDistribution,
    pub algorithm: Algorithm,
}

impl BuildRequest {
    /// Runs the requested builder and re-validates the result.
    pub fn build(&self) -> Result<LabeledMultigraph, BuildError> {
        let pot = &self.pot;
        let canon = canonical_distributions(pot);
        let expect = |want: &TileDistribution, name: &str| {
            if self.dist == *want {
                Ok(())
            } else {
                Err(BuildError::Precondition(format!(
                    "the {name} construction only produces distribution {want}, not {}",
                    self.dist
                )))
            }
        };
        let graph = match self.algorithm {
            Algorithm::Path => build_path(pot, &self.dist)?,
            Algorithm::Cycle => build_cycle(pot, &self.dist)?,
            Algorithm::Star => {
                expect(&canon.star, "star")?;
                build_star(pot)
            }
            Algorithm::Divalg => {
                expect(&canon.division, "division-algorithm")?;
                build_divalg(pot)
            }
            Algorithm::Bipartite => {
                expect(&canon.bipartite, "bipartite")?;
                build_bipartite(pot)
            }
            Algorithm::Auto => build_for_distribution(pot, &self.dist)?,
        };
        verify(pot, &graph)?;
        Ok(graph)
    }
}

fn build_for_distribution(
    pot: &SingleBondPot,
    dist: &TileDistribution,
) -> Result<LabeledMultigraph, BuildError> {
    checked_counts(pot, dist)?;
    let algorithm = select_algorithm(pot, dist).ok_or_else(|| {
        BuildError::Precondition(format!(
            "neither construction applies to {dist}: 1 + R2(e2-1) = {} < R1 = {}",
            1 + dist.count(1) * (pot.e2() as u64 - 1),
            dist.count(0)
        ))
    })?;
    BuildRequest {
        pot: pot.clone(),
        dist: dist.clone(),
        algorithm,
    }
    .build()
}

/// A connected graph of order `n`, using the first witness some builder handles.
pub fn build_auto(pot: &SingleBondPot, n: u64) -> Result<LabeledMultigraph, BuildError> {
    let witnesses = if n == 0 {
        Vec::new()
    } else {
        feasibility::single_bond_distributions(pot, n)
    };
    if witnesses.is_empty() {
        return Err(BuildError::Infeasible(n));
    }
    for dist in &witnesses {
        if select_algorithm(pot, dist).is_some() {
            return build_for_distribution(pot, dist);
        }
    }
    let all_forced = witnesses
        .iter()
        .all(|d| crate::complex::forced_disconnected(d, pot));
    Err(BuildError::NoConnectedBuilder {
        order: n,
        all_forced,
    })
}

/// Checks that `graph` realizes the pot and is connected.
pub fn verify(pot: &SingleBondPot, graph: &LabeledMultigraph) -> Result<(), BuildError> {
    let check = validate_realization(graph, &pot.to_pot())
        .map_err(|e| BuildError::Invalid(e.to_string()))?;
    if !check.ok {
        let detail: Vec<String> = check.violations.iter().map(|v| v.to_string()).collect();
        return Err(BuildError::Invalid(detail.join("; ")));
    }
    let parts = components(graph).len();
    if parts != 1 {
        return Err(BuildError::Invalid(format!("graph has {parts} components")));
    }
    Ok(())
}
