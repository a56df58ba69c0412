//! Finite groups as explicit multiplication tables.
//!
//! Elements are dense indices `0..order` and the identity is always index 0.
//! Builders validate the group axioms; everything downstream assumes them.

mod builders;
mod quotient;
mod subgroup;

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use builders::{are_isomorphic, cycle_notation, parse_cycles};
pub use quotient::QuotientWithSection;
pub use subgroup::{all_subgroups, center, normal_subgroups, Embedding, SubgroupHandle};

/// Orders up to which associativity is checked on every triple.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 512;
/// Random triples sampled above [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`].
pub const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 10_000;
/// Default cap on the size of a permutation closure.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry {value} at ({row}, {col}) is outside 0..{order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("not a Latin square: {line} {index} repeats element {value}")]
    NotLatinSquare { line: &'static str, index: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("closure exceeds {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error("dihedral group needs n >= 1")]
    InvalidDihedral,
    #[error("cyclic group needs n >= 1")]
    InvalidCyclic,
    #[error("subgroup is not normal: {conjugator}·{element}·{conjugator}⁻¹ leaves it")]
    NotNormal { conjugator: usize, element: usize },
    #[error("element index {0} out of range")]
    BadElement(usize),
    #[error("cannot parse element word `{0}`")]
    BadWord(String),
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
    /// Named generators used to parse element words such as `a2b`.
    generators: Vec<(String, usize)>,
}

impl FiniteGroup {
    /// Validates a square table and relabels so that the identity is index 0.
    pub fn from_multiplication_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange { row, col, value, order: n });
                }
            }
        }
        for (line, pick) in [("row", true), ("column", false)] {
            for i in 0..n {
                let mut seen = vec![false; n];
                for j in 0..n {
                    let v = if pick { table[i][j] } else { table[j][i] };
                    if std::mem::replace(&mut seen[v], true) {
                        return Err(GroupError::NotLatinSquare { line, index: i, value: v });
                    }
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inv = vec![0; n];
        for (x, slot) in inv.iter_mut().enumerate() {
            let y = (0..n).find(|&y| table[x][y] == e).ok_or(GroupError::NoInverse { element: x })?;
            if table[y][x] != e {
                return Err(GroupError::NoInverse { element: x });
            }
            *slot = y;
        }
        check_associative(n, |a, b| table[a][b])?;

        // swap the identity into slot 0
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]);
            }
        }
        let mut inv_relabeled = vec![0; n];
        for x in 0..n {
            inv_relabeled[relabel(x)] = relabel(inv[x]);
        }
        Ok(FiniteGroup { order: n, mul, inv: inv_relabeled, labels: None, generators: Vec::new() })
    }

    /// Builds a group from a table already known to satisfy the axioms.
    pub(crate) fn from_trusted_parts(
        order: usize,
        mul: Vec<usize>,
        labels: Option<Vec<String>>,
        generators: Vec<(String, usize)>,
    ) -> Self {
        debug_assert_eq!(mul.len(), order * order);
        let mut inv = vec![0; order];
        for (x, slot) in inv.iter_mut().enumerate() {
            *slot = (0..order).find(|&y| mul[x * order + y] == 0).expect("inverse in trusted table");
        }
        let g = FiniteGroup { order, mul, inv, labels, generators };
        debug_assert!(g.check_axioms().is_ok());
        g
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_trusted_parts(1, vec![0], Some(vec!["1".into()]), Vec::new())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g⁻¹·a·g`.
    #[inline]
    pub fn conjugate(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    /// Equal multiplication tables, ignoring labels and generator names.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.mul == other.mul
    }

    pub fn into_shared(self) -> Arc<FiniteGroup> {
        Arc::new(self)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exponent: least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|g| self.element_order(g)).fold(1, lcm)
    }

    pub fn center_elements(&self) -> Vec<usize> {
        self.elements().filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z))).collect()
    }

    /// Conjugacy classes by naive enumeration, sorted by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in self.elements() {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<usize> = self.elements().map(|g| self.conjugate(x, g)).collect();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Re-checks all axioms on the stored table.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(GroupError::NoIdentity);
            }
            if self.mul(x, self.inv(x)) != 0 || self.mul(self.inv(x), x) != 0 {
                return Err(GroupError::NoInverse { element: x });
            }
        }
        check_associative(n, |a, b| self.mul(a, b))
    }

    /// Parses an element word: generator names with optional exponents
    /// (`a2b`, `a^2 b`, `ab`), `1` for the identity, or a raw index.
    pub fn parse_word(&self, word: &str) -> Result<usize, GroupError> {
        let w = word.trim();
        if w.is_empty() {
            return Err(GroupError::BadWord(word.into()));
        }
        if w.chars().all(|c| c.is_ascii_digit()) && (self.generators.is_empty() || w != "1") {
            let idx: usize = w.parse().map_err(|_| GroupError::BadWord(word.into()))?;
            return if idx < self.order { Ok(idx) } else { Err(GroupError::BadElement(idx)) };
        }
        if w == "1" {
            return Ok(0);
        }
        let chars: Vec<char> = w.chars().filter(|c| !c.is_whitespace() && *c != '*' && *c != '·').collect();
        let mut acc = 0;
        let mut i = 0;
        while i < chars.len() {
            if !chars[i].is_alphabetic() {
                return Err(GroupError::BadWord(word.into()));
            }
            let name = chars[i].to_string();
            i += 1;
            let gen = self
                .generators
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, g)| *g)
                .ok_or_else(|| GroupError::BadWord(word.into()))?;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
            }
            let exp_start = i;
            let negative = i < chars.len() && chars[i] == '-';
            if negative {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[exp_start..i].iter().filter(|c| c.is_ascii_digit()).collect();
            let mut exp: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| GroupError::BadWord(word.into()))? };
            if negative {
                exp = -exp;
            }
            let base = if exp < 0 { self.inv(gen) } else { gen };
            for _ in 0..exp.unsigned_abs() {
                acc = self.mul(acc, base);
            }
        }
        Ok(acc)
    }
}

fn check_associative(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<(), GroupError> {
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a55c);
        for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
            let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                return Err(GroupError::NotAssociative { a, b, c });
            }
        }
    }
    Ok(())
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}
