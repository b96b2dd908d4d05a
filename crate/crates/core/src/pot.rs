//! Tile types, pots and the textual pot format.
//!
//! A pot is written as a `;`-separated list of tiles, each tile a
//! brace-delimited, comma-separated list of cohesive ends:
//!
//! ```text
//! {a^6};{a*^4};{a*}
//! ```
//!
//! `*` marks a hatted (complementary) end and `^n` a multiplicity. Whitespace
//! is ignored everywhere. Tiles keep the order in which they are written and
//! are addressed by 1-based index (`t1`, `t2`, ...).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectrum::TileDistribution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PotError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("zero multiplicity at position {position}")]
    ZeroMultiplicity { position: usize },
    #[error("empty tile at position {position}")]
    EmptyTile { position: usize },
    #[error("pot has no tiles")]
    EmptyPot,
    #[error("invalid cohesive-end label {0:?}: expected a lowercase letter a-z")]
    InvalidLabel(char),
    #[error("tile t{duplicate} is identical to tile t{first}")]
    DuplicateTile { first: usize, duplicate: usize },
    #[error("complement closure violated: {present} appears on a tile but {missing} does not")]
    ComplementClosure {
        label: char,
        present: CohesiveEnd,
        missing: CohesiveEnd,
    },
    #[error("pot has {0} bond-edge types, the single-bond family needs exactly one")]
    NotSingleBond(usize),
    #[error("pot is missing the one-armed tile of the single-bond family")]
    MissingOneArmed,
    #[error("pot is outside the single-bond family: {0}")]
    OutsideFamily(String),
    #[error("single-bond pot needs e1 >= e2 > 1, got e1 = {e1}, e2 = {e2}")]
    InvalidArms { e1: u32, e2: u32 },
}

/// One cohesive end: a bond-edge label and whether it is the hatted complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CohesiveEnd {
    label: char,
    hatted: bool,
}

impl CohesiveEnd {
    pub fn new(label: char, hatted: bool) -> Result<Self, PotError> {
        if label.is_ascii_lowercase() {
            Ok(Self { label, hatted })
        } else {
            Err(PotError::InvalidLabel(label))
        }
    }

    pub fn unhatted(label: char) -> Result<Self, PotError> {
        Self::new(label, false)
    }

    pub fn hatted(label: char) -> Result<Self, PotError> {
        Self::new(label, true)
    }

    pub fn label(&self) -> char {
        self.label
    }

    pub fn is_hatted(&self) -> bool {
        self.hatted
    }

    pub fn complement(&self) -> Self {
        Self {
            label: self.label,
            hatted: !self.hatted,
        }
    }
}

impl fmt::Display for CohesiveEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hatted {
            write!(f, "{}*", self.label)
        } else {
            write!(f, "{}", self.label)
        }
    }
}

/// A tile type: a multiset of cohesive ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileType {
    ends: BTreeMap<CohesiveEnd, u32>,
}

impl TileType {
    /// Builds a tile from `(end, multiplicity)` pairs, aggregating repeats.
    pub fn new(ends: impl IntoIterator<Item = (CohesiveEnd, u32)>) -> Result<Self, PotError> {
        let mut map = BTreeMap::new();
        for (end, mult) in ends {
            if mult == 0 {
                return Err(PotError::ZeroMultiplicity { position: 0 });
            }
            *map.entry(end).or_insert(0) += mult;
        }
        if map.is_empty() {
            return Err(PotError::EmptyTile { position: 0 });
        }
        Ok(Self { ends: map })
    }

    /// `{label^arms}` or `{label*^arms}`.
    pub fn uniform(label: char, hatted: bool, arms: u32) -> Result<Self, PotError> {
        Self::new([(CohesiveEnd::new(label, hatted)?, arms)])
    }

    pub fn ends(&self) -> impl Iterator<Item = (CohesiveEnd, u32)> + '_ {
        self.ends.iter().map(|(e, m)| (*e, *m))
    }

    pub fn count(&self, end: CohesiveEnd) -> u32 {
        self.ends.get(&end).copied().unwrap_or(0)
    }

    /// Total number of arms.
    pub fn arms(&self) -> u32 {
        self.ends.values().sum()
    }

    /// Unhatted minus hatted ends of `label`.
    pub fn net(&self, label: char) -> i64 {
        let count = |hatted| {
            self.ends
                .get(&CohesiveEnd { label, hatted })
                .copied()
                .unwrap_or(0) as i64
        };
        count(false) - count(true)
    }

    pub fn labels(&self) -> impl Iterator<Item = char> + '_ {
        self.ends.keys().map(|e| e.label)
    }
}

impl fmt::Display for TileType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (end, mult)) in self.ends.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{end}")?;
            if *mult != 1 {
                write!(f, "^{mult}")?;
            }
        }
        f.write_str("}")
    }
}

/// An ordered collection of distinct tile types, closed under complementation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pot {
    tiles: Vec<TileType>,
    labels: Vec<char>,
}

impl Pot {
    pub fn new(tiles: Vec<TileType>) -> Result<Self, PotError> {
        if tiles.is_empty() {
            return Err(PotError::EmptyPot);
        }
        for (i, tile) in tiles.iter().enumerate() {
            if let Some(first) = tiles[..i].iter().position(|t| t == tile) {
                return Err(PotError::DuplicateTile {
                    first: first + 1,
                    duplicate: i + 1,
                });
            }
        }
        let present: BTreeSet<CohesiveEnd> = tiles
            .iter()
            .flat_map(|t| t.ends.keys().copied())
            .collect();
        for end in &present {
            if !present.contains(&end.complement()) {
                return Err(PotError::ComplementClosure {
                    label: end.label,
                    present: *end,
                    missing: end.complement(),
                });
            }
        }
        let labels: BTreeSet<char> = present.iter().map(|e| e.label).collect();
        Ok(Self {
            tiles,
            labels: labels.into_iter().collect(),
        })
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    /// Tile `t_index` (1-based).
    pub fn tile(&self, index: usize) -> Option<&TileType> {
        index.checked_sub(1).and_then(|i| self.tiles.get(i))
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Bond-edge types in alphabetical order.
    pub fn bond_edge_types(&self) -> &[char] {
        &self.labels
    }

    /// `z_{i,j}` for bond-edge type `label` and tile `t_j` (1-based).
    pub fn net_count(&self, label: char, tile: usize) -> i64 {
        self.tile(tile).map_or(0, |t| t.net(label))
    }
}

impl fmt::Display for Pot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tile) in self.tiles.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{tile}")?;
        }
        Ok(())
    }
}

impl FromStr for Pot {
    type Err = PotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pot(s)
    }
}

/// Parses the textual pot format; positions in errors are 0-based character offsets.
pub fn parse_pot(text: &str) -> Result<Pot, PotError> {
    let mut parser = Parser::new(text);
    let mut tiles = Vec::new();
    loop {
        tiles.push(parser.tile()?);
        match parser.peek() {
            Some((_, ';')) => {
                parser.bump();
            }
            None => break,
            Some((pos, c)) => return Err(syntax(pos, format!("expected ';' or end of input, found {c:?}"))),
        }
    }
    Pot::new(tiles)
}

fn syntax(position: usize, message: impl Into<String>) -> PotError {
    PotError::Syntax {
        position,
        message: message.into(),
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Self {
            chars,
            cursor: 0,
            end: text.chars().count(),
        }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.cursor).copied()
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let next = self.peek();
        self.cursor += 1;
        next
    }

    fn position(&self) -> usize {
        self.peek().map_or(self.end, |(p, _)| p)
    }

    fn expect(&mut self, want: char) -> Result<usize, PotError> {
        match self.bump() {
            Some((pos, c)) if c == want => Ok(pos),
            Some((pos, c)) => Err(syntax(pos, format!("expected {want:?}, found {c:?}"))),
            None => Err(syntax(self.end, format!("expected {want:?}, found end of input"))),
        }
    }

    fn tile(&mut self) -> Result<TileType, PotError> {
        let open = self.expect('{')?;
        if let Some((_, '}')) = self.peek() {
            return Err(PotError::EmptyTile { position: open });
        }
        let mut ends = BTreeMap::new();
        loop {
            let (end, mult) = self.end_spec()?;
            *ends.entry(end).or_insert(0u32) += mult;
            match self.bump() {
                Some((_, ',')) => continue,
                Some((_, '}')) => break,
                Some((pos, c)) => return Err(syntax(pos, format!("expected ',' or '}}', found {c:?}"))),
                None => return Err(syntax(self.end, "unterminated tile")),
            }
        }
        Ok(TileType { ends })
    }

    fn end_spec(&mut self) -> Result<(CohesiveEnd, u32), PotError> {
        let label = match self.bump() {
            Some((_, c)) if c.is_ascii_lowercase() => c,
            Some((pos, c)) => return Err(syntax(pos, format!("expected a label a-z, found {c:?}"))),
            None => return Err(syntax(self.end, "expected a label, found end of input")),
        };
        let hatted = matches!(self.peek(), Some((_, '*')));
        if hatted {
            self.bump();
        }
        let mut mult = 1u32;
        if let Some((_, '^')) = self.peek() {
            self.bump();
            let start = self.position();
            let mut digits = String::new();
            while let Some((_, c)) = self.peek().filter(|(_, c)| c.is_ascii_digit()) {
                digits.push(c);
                self.bump();
            }
            if digits.is_empty() {
                return Err(syntax(start, "expected a multiplicity after '^'"));
            }
            mult = digits
                .parse()
                .map_err(|_| syntax(start, "multiplicity too large"))?;
            if mult == 0 {
                return Err(PotError::ZeroMultiplicity { position: start });
            }
        }
        Ok((CohesiveEnd { label, hatted }, mult))
    }
}

/// Which of the three single-bond tile shapes a tile plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// `t1 = {a^e1}`
    Donor,
    /// `t2 = {a*^e2}`
    Acceptor,
    /// `t3 = {a*}`
    Cap,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Donor, Role::Acceptor, Role::Cap];

    pub fn index(self) -> usize {
        match self {
            Role::Donor => 0,
            Role::Acceptor => 1,
            Role::Cap => 2,
        }
    }
}

/// The pot `{a^e1},{a*^e2},{a*}` with `e1 >= e2 > 1`.
///
/// A pot read from text may list the three tiles in any order and may use the
/// opposite hat orientation (`{a*^e1},{a^e2},{a}`). `tile_roles` remembers
/// where each role sits in the source pot and `hat_swapped` whether hats were
/// flipped, so constructed graphs can be reported against the original pot.
/// Distributions on this type are always in role order `(R1, R2, R3)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingleBondPot {
    e1: u32,
    e2: u32,
    label: char,
    hat_swapped: bool,
    tile_roles: [usize; 3],
}

impl SingleBondPot {
    pub fn new(e1: u32, e2: u32) -> Result<Self, PotError> {
        if e2 <= 1 || e1 < e2 {
            return Err(PotError::InvalidArms { e1, e2 });
        }
        Ok(Self {
            e1,
            e2,
            label: 'a',
            hat_swapped: false,
            tile_roles: [1, 2, 3],
        })
    }

    pub fn e1(&self) -> u32 {
        self.e1
    }

    pub fn e2(&self) -> u32 {
        self.e2
    }

    pub fn label(&self) -> char {
        self.label
    }

    pub fn hat_swapped(&self) -> bool {
        self.hat_swapped
    }

    /// 1-based index of the tile playing `role` in the source pot.
    pub fn tile_index(&self, role: Role) -> usize {
        self.tile_roles[role.index()]
    }

    /// The end carried by donor tiles in the source orientation.
    pub fn donor_end(&self) -> CohesiveEnd {
        CohesiveEnd {
            label: self.label,
            hatted: self.hat_swapped,
        }
    }

    /// The source pot, tiles in their original order and orientation.
    pub fn to_pot(&self) -> Pot {
        let donor = self.donor_end();
        let acceptor = donor.complement();
        let mut tiles = vec![None, None, None];
        tiles[self.tile_index(Role::Donor) - 1] = Some(TileType {
            ends: BTreeMap::from([(donor, self.e1)]),
        });
        tiles[self.tile_index(Role::Acceptor) - 1] = Some(TileType {
            ends: BTreeMap::from([(acceptor, self.e2)]),
        });
        tiles[self.tile_index(Role::Cap) - 1] = Some(TileType {
            ends: BTreeMap::from([(acceptor, 1)]),
        });
        Pot::new(tiles.into_iter().map(Option::unwrap).collect())
            .expect("single-bond pots are always well formed")
    }

    /// Converts a role-ordered `(R1, R2, R3)` into the source pot's tile order.
    pub fn to_pot_order(&self, roles: &TileDistribution) -> TileDistribution {
        let mut counts = vec![0; 3];
        for role in Role::ALL {
            counts[self.tile_index(role) - 1] = roles.count(role.index());
        }
        TileDistribution::new(counts)
    }

    /// Converts a distribution in source tile order into role order.
    pub fn to_role_order(&self, dist: &TileDistribution) -> TileDistribution {
        TileDistribution::new(
            Role::ALL
                .iter()
                .map(|r| dist.count(self.tile_index(*r) - 1))
                .collect(),
        )
    }
}

impl fmt::Display for SingleBondPot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pot())
    }
}

/// Recognises the single-bond family `{x^e1},{x*^e2},{x*}` in either hat orientation.
pub fn as_single_bond(pot: &Pot) -> Result<SingleBondPot, PotError> {
    if pot.labels.len() != 1 {
        return Err(PotError::NotSingleBond(pot.labels.len()));
    }
    let label = pot.labels[0];
    let mut unhatted = Vec::new();
    let mut hatted = Vec::new();
    for (i, tile) in pot.tiles.iter().enumerate() {
        let up = tile.count(CohesiveEnd { label, hatted: false });
        let down = tile.count(CohesiveEnd { label, hatted: true });
        match (up, down) {
            (u, 0) => unhatted.push((i + 1, u)),
            (0, d) => hatted.push((i + 1, d)),
            _ => {
                return Err(PotError::OutsideFamily(format!(
                    "tile t{} carries both {label} and {label}* ends",
                    i + 1
                )))
            }
        }
    }
    let (single, pair, hat_swapped) = match (unhatted.len(), hatted.len()) {
        (1, 2) => (unhatted[0], hatted, false),
        (2, 1) => (hatted[0], unhatted, true),
        (1, 1) => return Err(PotError::MissingOneArmed),
        _ if pot.tiles.len() > 3 => {
            return Err(PotError::OutsideFamily(format!(
                "expected 3 tiles, found {}",
                pot.tiles.len()
            )))
        }
        _ => {
            return Err(PotError::OutsideFamily(
                "expected one tile on one side of the bond and two on the other".into(),
            ))
        }
    };
    let cap = pair
        .iter()
        .find(|(_, arms)| *arms == 1)
        .ok_or(PotError::MissingOneArmed)?;
    let acceptor = pair
        .iter()
        .find(|(_, arms)| *arms != 1)
        .expect("distinct tiles on the same side differ in arm count");
    let (e1, e2) = (single.1, acceptor.1);
    if e1 < e2 {
        return Err(PotError::OutsideFamily(format!(
            "the one-armed tile must complement the larger tile (e1 = {e1} < e2 = {e2})"
        )));
    }
    Ok(SingleBondPot {
        e1,
        e2,
        label,
        hat_swapped,
        tile_roles: [single.0, acceptor.0, cap.0],
    })
}
