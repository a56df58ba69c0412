use std::process::ExitCode;

use serde_json::json;
use twistdecomp::decomposition::DecompositionError;
use twistdecomp::{CocycleError, FormatError, GroupError, KGroupError, RepError};

use crate::Common;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DECOMPOSITION: u8 = 3;
pub const EXIT_RANK: u8 = 4;
pub const EXIT_NUMERIC: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, kind: "usage", message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, kind: "invalid_input", message: message.into() }
    }

    pub fn suite(failed: usize, total: usize) -> Self {
        Failure { code: EXIT_DECOMPOSITION, kind: "suite_failure", message: format!("{failed} of {total} checks failed") }
    }

    pub fn report(&self, _common: &Common) -> ExitCode {
        eprintln!("error: {}", self.message);
        if self.code == EXIT_DECOMPOSITION || self.code == EXIT_RANK {
            let diag = json!({ "schema": 1, "error": self.kind, "exit_code": self.code, "message": self.message });
            println!("{}", serde_json::to_string_pretty(&diag).expect("diagnostic serializes"));
        }
        ExitCode::from(self.code)
    }
}

fn rep_failure(e: &RepError) -> Failure {
    Failure { code: EXIT_NUMERIC, kind: "numeric", message: e.to_string() }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<CocycleError> for Failure {
    fn from(e: CocycleError) -> Self {
        match e {
            CocycleError::Invalid(report) => Failure::input(format!("cocycle is invalid\n{report}")),
            CocycleError::SearchSpaceTooLarge { .. } => Failure { code: EXIT_NUMERIC, kind: "numeric", message: e.to_string() },
            other => Failure::input(other.to_string()),
        }
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        rep_failure(&e)
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Cocycle(c) => c.into(),
            FormatError::KGroup(k) => k.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

impl From<DecompositionError> for Failure {
    fn from(e: DecompositionError) -> Self {
        let kind = match &e {
            DecompositionError::Group(g) => return g.clone().into(),
            DecompositionError::GroupMismatch => return Failure::input(e.to_string()),
            DecompositionError::Cocycle(c) => return c.clone().into(),
            DecompositionError::Rep(r) => return rep_failure(r),
            DecompositionError::OrbitMixing { .. } => "orbit_mixing",
            DecompositionError::MatchFailure { .. } => "match_failure",
            DecompositionError::NotScalar { .. } => "not_scalar",
            DecompositionError::NotUnimodular { .. } => "not_unimodular",
            DecompositionError::NotACocycle(_) => "not_a_cocycle",
            DecompositionError::NotBijective(_) => "not_bijective",
            _ => "decomposition",
        };
        Failure { code: EXIT_DECOMPOSITION, kind, message: e.to_string() }
    }
}

impl From<KGroupError> for Failure {
    fn from(e: KGroupError) -> Self {
        match e {
            KGroupError::Group(g) => g.into(),
            KGroupError::Rep(r) => r.into(),
            KGroupError::Decomposition(d) => d.into(),
            KGroupError::RankMismatch { .. } => Failure { code: EXIT_RANK, kind: "rank_mismatch", message: e.to_string() },
            KGroupError::NotBijective(_) | KGroupError::NotNatural { .. } => {
                Failure { code: EXIT_RANK, kind: "k_group_map", message: e.to_string() }
            }
            other => Failure::input(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error() {
        let f: Failure = KGroupError::RankMismatch { lhs: 2, rhs: 3 }.into();
        assert_eq!(f.code, EXIT_RANK);
        let f: Failure = KGroupError::NotNatural { row: 0, col: 0, lhs: 1, rhs: 0 }.into();
        assert_eq!(f.code, EXIT_RANK);
        let f: Failure = KGroupError::ANotTrivial { a: 1, point: 0 }.into();
        assert_eq!(f.code, EXIT_INPUT);
        let f: Failure = DecompositionError::NotBijective("x".into()).into();
        assert_eq!((f.code, f.kind), (EXIT_DECOMPOSITION, "not_bijective"));
        let f: Failure = CocycleError::SearchSpaceTooLarge { size: 1, cap: 0 }.into();
        assert_eq!(f.code, EXIT_NUMERIC);
        let f: Failure = FormatError::GroupMismatch.into();
        assert_eq!(f.code, EXIT_INPUT);
        let f: Failure = KGroupError::Decomposition(DecompositionError::HomRelation(1.0)).into();
        assert_eq!(f.code, EXIT_DECOMPOSITION);
    }
}
