//! Construction matrices, row reduction and the spectrum of a pot.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pot::{Pot, SingleBondPot};
use crate::scalar::{ratio, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("spectrum parameter k must be at least 1")]
    ZeroK,
    #[error("spectrum parameter z = {z} lies outside [0, {max}]")]
    ZOutOfRange { z: String, max: String },
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("component r{component} scaled by n = {order} is {value}, not a nonnegative integer")]
    NonIntegral {
        component: usize,
        order: u64,
        value: String,
    },
}

/// Integer tile counts `(R1, ..., Rp)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TileDistribution {
    counts: Vec<u64>,
}

impl TileDistribution {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn zeros(tiles: usize) -> Self {
        Self {
            counts: vec![0; tiles],
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Count for 0-based tile position `index`; 0 when out of range.
    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(index).copied().unwrap_or(0)
    }

    pub fn order(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Whether the counts balance every bond-edge type of `pot`.
    pub fn satisfies(&self, pot: &Pot) -> bool {
        self.counts.len() == pot.len()
            && pot.bond_edge_types().iter().all(|&label| {
                self.counts
                    .iter()
                    .enumerate()
                    .map(|(j, &r)| r as i128 * pot.net_count(label, j + 1) as i128)
                    .sum::<i128>()
                    == 0
            })
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.len() != other.len() {
            return None;
        }
        self.counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl fmt::Display for TileDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<u64>> for TileDistribution {
    fn from(counts: Vec<u64>) -> Self {
        Self::new(counts)
    }
}

/// Augmented matrix `[Z | 0 ; 1 ... 1 | 1]`.
///
/// Rows `0..m` hold the net end counts `z_{i,j}` of each bond-edge type with a
/// zero right-hand side; the final row forces the proportions to sum to one.
/// After [`rref`](Self::rref) the row structure is whatever elimination leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionMatrix<T> {
    rows: Vec<Vec<T>>,
    tiles: usize,
}

impl<T: Scalar> ConstructionMatrix<T> {
    /// Builds a matrix from augmented rows, each `tiles + 1` entries long.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let tiles = rows.first().map_or(0, |r| r.len().saturating_sub(1));
        assert!(
            rows.iter().all(|r| r.len() == tiles + 1),
            "ragged construction matrix"
        );
        Self { rows, tiles }
    }

    pub fn from_integer_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn tiles(&self) -> usize {
        self.tiles
    }

    pub fn entry(&self, row: usize, col: usize) -> &T {
        &self.rows[row][col]
    }

    pub fn augmented(&self, row: usize) -> &T {
        &self.rows[row][self.tiles]
    }

    /// Reduced row echelon form.
    ///
    /// Columns are scanned left to right (the augmented column included); the
    /// pivot is the first row at or below the current one with a nonzero entry,
    /// swapped up only when it is not already in place, then normalised to 1.
    pub fn rref(&self) -> Self {
        let mut rows = self.rows.clone();
        let width = self.tiles + 1;
        let mut lead = 0;
        for col in 0..width {
            if lead == rows.len() {
                break;
            }
            let Some(pivot) = (lead..rows.len()).find(|&r| !rows[r][col].is_negligible()) else {
                continue;
            };
            rows.swap(lead, pivot);
            let inv = T::one() / rows[lead][col].clone();
            for v in rows[lead].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for r in 0..rows.len() {
                if r == lead || rows[r][col].is_negligible() {
                    continue;
                }
                let factor = rows[r][col].clone();
                let pivot_row = rows[lead].clone();
                for (v, p) in rows[r].iter_mut().zip(pivot_row) {
                    *v = v.clone() - factor.clone() * p;
                }
            }
            if !T::is_exact() {
                for v in rows.iter_mut().flatten().filter(|v| v.is_negligible()) {
                    *v = T::zero();
                }
            }
            lead += 1;
        }
        Self {
            rows,
            tiles: self.tiles,
        }
    }

    /// Pivot columns of a matrix already in reduced row echelon form.
    fn pivots(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row.iter().position(|v| !v.is_negligible()).map(|c| (r, c)))
            .collect()
    }

    /// General solution `particular + span(nullspace)`, or `None` when inconsistent.
    ///
    /// Free variables are set to zero in the particular solution; the nullspace
    /// has one basis vector per free column, in column order.
    pub fn solve(&self) -> Option<LinearSolution<T>> {
        let reduced = self.rref();
        let pivots = reduced.pivots();
        if pivots.iter().any(|&(_, c)| c == self.tiles) {
            return None;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free: Vec<usize> = (0..self.tiles).filter(|c| !pivot_cols.contains(c)).collect();

        let mut particular = vec![T::zero(); self.tiles];
        for &(r, c) in &pivots {
            particular[c] = reduced.augmented(r).clone();
        }
        let nullspace = free
            .iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.tiles];
                v[f] = T::one();
                for &(r, c) in &pivots {
                    v[c] = -reduced.entry(r, f).clone();
                }
                v
            })
            .collect();
        Some(LinearSolution {
            particular,
            free_columns: free,
            nullspace,
        })
    }
}

impl<T: Scalar> fmt::Display for ConstructionMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str("(")?;
            for (c, v) in row.iter().enumerate() {
                if c == self.tiles {
                    f.write_str(" | ")?;
                } else if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Affine solution set of a consistent construction matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution<T> {
    pub particular: Vec<T>,
    pub free_columns: Vec<usize>,
    pub nullspace: Vec<Vec<T>>,
}

impl<T: Scalar> LinearSolution<T> {
    /// The solution whose free variables take the given values.
    pub fn evaluate(&self, free_values: &[T]) -> Vec<T> {
        assert_eq!(free_values.len(), self.nullspace.len());
        let mut out = self.particular.clone();
        for (t, basis) in free_values.iter().zip(&self.nullspace) {
            for (o, b) in out.iter_mut().zip(basis) {
                *o = o.clone() + t.clone() * b.clone();
            }
        }
        out
    }
}

/// Builds the construction matrix of `pot`.
pub fn construction_matrix<T: Scalar>(pot: &Pot) -> ConstructionMatrix<T> {
    let p = pot.len();
    let mut rows: Vec<Vec<T>> = pot
        .bond_edge_types()
        .iter()
        .map(|&label| {
            (1..=p)
                .map(|j| T::from_int(pot.net_count(label, j)))
                .chain(std::iter::once(T::zero()))
                .collect()
        })
        .collect();
    rows.push(vec![T::one(); p + 1]);
    ConstructionMatrix::from_rows(rows)
}

/// A vector of tile proportions `(r1, ..., rp)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint<T> {
    proportions: Vec<T>,
}

impl<T: Scalar> SpectrumPoint<T> {
    pub fn new(proportions: Vec<T>) -> Self {
        Self { proportions }
    }

    pub fn proportions(&self) -> &[T] {
        &self.proportions
    }

    /// Every proportion lies in `[0, 1]`.
    pub fn in_unit_box(&self) -> bool {
        self.proportions
            .iter()
            .all(|r| *r >= T::zero() && *r <= T::one())
    }

    /// Checks every row of `matrix` against this point.
    pub fn satisfies(&self, matrix: &ConstructionMatrix<T>) -> bool {
        self.proportions.len() == matrix.tiles()
            && matrix.rows().iter().all(|row| {
                let lhs = row[..matrix.tiles()]
                    .iter()
                    .zip(&self.proportions)
                    .fold(T::zero(), |acc, (a, r)| acc + a.clone() * r.clone());
                (lhs - row[matrix.tiles()].clone()).is_negligible()
            })
    }
}

impl<T: Scalar> fmt::Display for SpectrumPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, r) in self.proportions.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(">")
    }
}

/// Parameters `(k, z)` of the single-bond spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumParameters<T> {
    k: u32,
    z: T,
}

impl<T: Scalar> SpectrumParameters<T> {
    pub fn new(k: u32, z: T) -> Result<Self, SpectrumError> {
        if k == 0 {
            return Err(SpectrumError::ZeroK);
        }
        Ok(Self { k, z })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn z(&self) -> &T {
        &self.z
    }

    /// Upper end `k e1 / (e1 + 1)` of the admissible z range.
    pub fn z_max(&self, pot: &SingleBondPot) -> T {
        let e1 = pot.e1() as i64;
        ratio(self.k as i64 * e1, e1 + 1)
    }
}

/// Closed-form spectrum point
/// `1/(k(e1+e2)) < k e2 - (e2-1) z, k e1 - (e1+1) z, (e1+e2) z >`.
pub fn single_bond_spectrum<T: Scalar>(
    pot: &SingleBondPot,
    params: &SpectrumParameters<T>,
) -> Result<SpectrumPoint<T>, SpectrumError> {
    let max = params.z_max(pot);
    let z = params.z.clone();
    if z < T::zero() || z > max {
        return Err(SpectrumError::ZOutOfRange {
            z: z.to_string(),
            max: max.to_string(),
        });
    }
    let e1 = T::from_int(pot.e1() as i64);
    let e2 = T::from_int(pot.e2() as i64);
    let k = T::from_int(params.k as i64);
    let one = T::one();
    let scale = one.clone() / (k.clone() * (e1.clone() + e2.clone()));
    let components = [
        k.clone() * e2.clone() - (e2.clone() - one.clone()) * z.clone(),
        k * e1.clone() - (e1.clone() + one) * z.clone(),
        (e1 + e2) * z,
    ];
    Ok(SpectrumPoint::new(
        components.into_iter().map(|c| c * scale.clone()).collect(),
    ))
}

/// `(n r1, ..., n rp)` when every component is a nonnegative integer.
pub fn scale_to_distribution<T: Scalar>(
    point: &SpectrumPoint<T>,
    n: u64,
) -> Result<TileDistribution, SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::ZeroOrder);
    }
    let scale = T::from_int(n as i64);
    point
        .proportions
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let value = r.clone() * scale.clone();
            value
                .to_exact_integer()
                .filter(|v| *v >= 0)
                .map(|v| v as u64)
                .ok_or_else(|| SpectrumError::NonIntegral {
                    component: j + 1,
                    order: n,
                    value: value.to_string(),
                })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(TileDistribution::new)
}

/// Human-readable closed form of the single-bond spectrum, e.g.
/// `1/(10k)<4k-3z, 6k-7z, 10z>, k >= 1, z in [0, 6k/7]`.
pub fn closed_form_text(pot: &SingleBondPot) -> String {
    fn term(coef: u32, var: char) -> String {
        if coef == 1 {
            var.to_string()
        } else {
            format!("{coef}{var}")
        }
    }
    let (e1, e2) = (pot.e1(), pot.e2());
    let sum = e1 + e2;
    format!(
        "1/({sum}k)<{}-{}, {}-{}, {}>, k >= 1, z in [0, {}/{}]",
        term(e2, 'k'),
        term(e2 - 1, 'z'),
        term(e1, 'k'),
        term(e1 + 1, 'z'),
        term(sum, 'z'),
        term(e1, 'k'),
        e1 + 1
    )
}
