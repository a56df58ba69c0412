//! Twisted representations of finite groups and the decomposition of twisted
//! equivariant K-theory along a normal subgroup, checked on points and finite G-sets.
//!
//! Numerical code is generic over the scalar (`f64` or `f32`); the aliases at
//! the bottom fix it to `f64` or `f32`.

pub mod cocycle;
pub mod decomposition;
pub mod formats;
pub mod group;
pub mod kgroups;
pub mod linalg;
pub mod projrep;
pub mod scalar;
pub mod tolerance;

pub use cocycle::{dihedral_alpha, is_coboundary_brute, CentralExtension, Cocycle, CocycleError, NumericCocycle, Twist, UnitScalar};
pub use decomposition::{
    verify_point_decomposition, DecompositionError, DecompositionOptions, DecompositionReport, PhaseConvention, Setting,
};
pub use formats::FormatError;
pub use group::{FiniteGroup, GroupError, QuotientWithSection, SubgroupHandle};
pub use kgroups::{
    k0_of_gset, naturality_check, pullback_matrix, verify_gset_decomposition, FiniteGSet, GSetMap, IntMatrix, KGroupError,
};
pub use projrep::{irreducibles, AlphaCharacter, IrrTable, ProjectiveRep, RepError};
pub use scalar::Real;
pub use tolerance::Tolerances;

pub type ProjectiveRep64 = projrep::ProjectiveRep<f64>;
pub type ProjectiveRep32 = projrep::ProjectiveRep<f32>;
pub type IrrTable64 = projrep::IrrTable<f64>;
pub type IrrTable32 = projrep::IrrTable<f32>;
pub type NumericCocycle64 = cocycle::NumericCocycle<f64>;
pub type NumericCocycle32 = cocycle::NumericCocycle<f32>;
pub type Twist64 = cocycle::Twist<f64>;
pub type Twist32 = cocycle::Twist<f32>;
pub type OrbitDatum64 = decomposition::OrbitDatum<f64>;
pub type OrbitDatum32 = decomposition::OrbitDatum<f32>;
pub type TwistedKGroup64 = kgroups::TwistedKGroup<f64>;
pub type TwistedKGroup32 = kgroups::TwistedKGroup<f32>;
pub type CMatrix64 = linalg::CMatrix<f64>;
pub type CMatrix32 = linalg::CMatrix<f32>;
