//! The eight 3x3 matrices a choice may place on a triple of rows.
//!
//! A (0,1)-column on three rows with roles first, second, third is encoded as
//! the mask `v0 | v1 << 1 | v2 << 2`. The eight columns fall into three
//! complementary pairs; a pattern picks one column from each pair, and bit `p`
//! of its selector says which member of pair `p` was picked.

use std::fmt;

use crate::matrix::RMatrix;

/// Columns `(1,0,0)/(0,1,1)`, `(0,1,0)/(1,0,1)` and `(0,0,1)/(1,1,0)`.
pub const PAIRS: [[u8; 2]; 3] = [[0b001, 0b110], [0b010, 0b101], [0b100, 0b011]];

/// A 0-implication between roles: a 0 in role `.0` forces a 0 in role `.1`.
pub type RoleArc = (u8, u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Identity,
    IdentityComplement,
    /// Both implications leave the same role.
    OutStar,
    /// Both implications enter the same role.
    InStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern(u8);

const fn columns_of(selector: u8) -> [u8; 3] {
    [
        PAIRS[0][(selector & 1) as usize],
        PAIRS[1][((selector >> 1) & 1) as usize],
        PAIRS[2][((selector >> 2) & 1) as usize],
    ]
}

/// Bit `v` is set when column `v` is one of the pattern's three columns.
const fn forbidden_set(selector: u8) -> u8 {
    let c = columns_of(selector);
    (1 << c[0]) | (1 << c[1]) | (1 << c[2])
}

/// Columns satisfying both implications `a` and `b`.
const fn satisfying(a: RoleArc, b: RoleArc) -> u8 {
    let mut set = 0u8;
    let mut v = 0u8;
    while v < 8 {
        let ok_a = (v >> a.0) & 1 == 1 || (v >> a.1) & 1 == 0;
        let ok_b = (v >> b.0) & 1 == 1 || (v >> b.1) & 1 == 0;
        if ok_a && ok_b {
            set |= 1 << v;
        }
        v += 1;
    }
    set
}

const ALL_ARCS: [RoleArc; 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

/// For each selector, the unique pair of implications whose valid columns are
/// exactly the five columns the pattern leaves, if there is one.
const fn derive_arcs() -> [Option<[RoleArc; 2]>; 8] {
    let mut out = [None; 8];
    let mut s = 0;
    while s < 8 {
        let valid = !forbidden_set(s as u8);
        let mut found: Option<[RoleArc; 2]> = None;
        let mut matches = 0;
        let mut i = 0;
        while i < 6 {
            let mut j = i + 1;
            while j < 6 {
                if satisfying(ALL_ARCS[i], ALL_ARCS[j]) == valid {
                    found = Some([ALL_ARCS[i], ALL_ARCS[j]]);
                    matches += 1;
                }
                j += 1;
            }
            i += 1;
        }
        assert!(matches <= 1);
        out[s] = found;
        s += 1;
    }
    out
}

const ARCS: [Option<[RoleArc; 2]>; 8] = derive_arcs();

const fn arcs_share_endpoint(a: [RoleArc; 2]) -> bool {
    a[0].0 == a[1].0 || a[0].1 == a[1].1
}

// Compile-time checks: the identity (selector 0) and its complement (7) imply
// nothing, every other selector is an out-star or in-star pair.
const _: () = {
    assert!(ARCS[0].is_none() && ARCS[7].is_none());
    let mut s = 1;
    while s < 7 {
        match ARCS[s] {
            Some(a) => assert!(arcs_share_endpoint(a)),
            None => panic!("good selector without implications"),
        }
        s += 1;
    }
};

impl TriplePattern {
    pub const I: TriplePattern = TriplePattern(0);
    pub const IC: TriplePattern = TriplePattern(7);
    /// Columns `(0,1,1), (0,1,0), (0,0,1)`: implications first->second, first->third.
    pub const A1: TriplePattern = TriplePattern(0b001);
    /// Columns `(0,1,1), (1,0,1), (0,0,1)`: implications first->third, second->third.
    pub const A2: TriplePattern = TriplePattern(0b011);

    pub fn new(selector: u8) -> Option<Self> {
        (selector < 8).then_some(TriplePattern(selector))
    }

    pub fn all() -> impl Iterator<Item = TriplePattern> {
        (0..8).map(TriplePattern)
    }

    pub fn good() -> impl Iterator<Item = TriplePattern> {
        Self::all().filter(|p| p.is_good())
    }

    pub fn selector(self) -> u8 {
        self.0
    }

    pub fn column_masks(self) -> [u8; 3] {
        columns_of(self.0)
    }

    /// Bit `v` set when role mask `v` is one of the three columns.
    pub fn forbidden(self) -> u8 {
        forbidden_set(self.0)
    }

    /// Whether the column with role mask `v` avoids all three columns.
    pub fn allows(self, v: u8) -> bool {
        self.forbidden() >> v & 1 == 0
    }

    pub fn is_good(self) -> bool {
        self.0 != 0 && self.0 != 7
    }

    pub fn kind(self) -> PatternKind {
        match ARCS[self.0 as usize] {
            None if self.0 == 0 => PatternKind::Identity,
            None => PatternKind::IdentityComplement,
            Some(a) if a[0].0 == a[1].0 => PatternKind::OutStar,
            Some(_) => PatternKind::InStar,
        }
    }

    pub fn implied_arcs(self) -> Option<[RoleArc; 2]> {
        ARCS[self.0 as usize]
    }

    /// The good pattern implying exactly the given two role arcs.
    pub fn from_arcs(arcs: [RoleArc; 2]) -> Option<Self> {
        let key = |mut a: [RoleArc; 2]| {
            a.sort_unstable();
            a
        };
        Self::good().find(|p| key(p.implied_arcs().unwrap()) == key(arcs))
    }

    /// The pattern as a 3x3 (0,1)-matrix, columns in pair order.
    pub fn matrix(self) -> RMatrix {
        let columns = self
            .column_masks()
            .iter()
            .map(|&v| (0..3).map(|i| (v >> i) & 1).collect())
            .collect();
        RMatrix::new(3, 2, columns).expect("3x3 pattern")
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            PatternKind::Identity => write!(f, "I"),
            PatternKind::IdentityComplement => write!(f, "Ic"),
            _ => {
                let [a, b] = self.implied_arcs().unwrap();
                write!(f, "{}>{},{}>{}", a.0, a.1, b.0, b.1)
            }
        }
    }
}
