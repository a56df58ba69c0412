//! Twisted equivariant K⁰ of finite G-sets, where a bundle is a representation
//! of the isotropy group at one point of each orbit.

mod decompose;
mod gset;
mod k0;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::DecompositionError;
use crate::group::GroupError;
use crate::projrep::RepError;

pub use decompose::{naturality_check, verify_gset_decomposition, GSetDecomposition, GSetReport, NaturalityReport};
pub use gset::{random_gset_over, random_map_into, FiniteGSet, GSetMap};
pub use k0::{conjugate_rep, k0_of_gset, pullback_between, pullback_matrix, KSummand, TwistedKGroup};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KGroupError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("point {point} is out of range for a set of {size} points")]
    PointOutOfRange { point: usize, size: usize },
    #[error("images of {element} do not form a permutation")]
    NotAPermutation { element: usize },
    #[error("action law fails: ({g}·{h})·{x} ≠ {g}·({h}·{x})")]
    NotAnAction { g: usize, h: usize, x: usize },
    #[error("the identity moves point {0}")]
    IdentityMoves(usize),
    #[error("listed elements generate a subgroup of order {found}, not the whole group of order {order}")]
    NotGenerating { found: usize, order: usize },
    #[error("the G-set and the twist live over different groups")]
    GroupMismatch,
    #[error("element {a} of A moves point {point}")]
    ANotTrivial { a: usize, point: usize },
    #[error("map is not equivariant: f({g}·{point}) ≠ {g}·f({point})")]
    NotEquivariant { g: usize, point: usize },
    #[error("map has {got} images for a set of {size} points")]
    MapSize { got: usize, size: usize },
    #[error("maps do not compose")]
    NotComposable,
    #[error("rank mismatch: {lhs} on the G side, {rhs} summed over orbits")]
    RankMismatch { lhs: usize, rhs: usize },
    #[error("the decomposition map is not a bijection on bases: {0}")]
    NotBijective(String),
    #[error("naturality fails at entry ({row}, {col}): {lhs} ≠ {rhs}")]
    NotNatural { row: usize, col: usize, lhs: i64, rhs: i64 },
}

/// Small dense integer matrix for maps between K-groups in their irreducible bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    for j in 0..rhs.cols {
                        out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                    }
                }
            }
        }
        out
    }

    pub fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Square, entries in {0,1}, exactly one 1 per row and column.
    pub fn is_permutation(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().all(|&x| x == 0 || x == 1)
            && (0..self.rows).all(|i| (0..self.cols).map(|j| self.get(i, j)).sum::<i64>() == 1)
            && (0..self.cols).all(|j| (0..self.rows).map(|i| self.get(i, j)).sum::<i64>() == 1)
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(i64::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
