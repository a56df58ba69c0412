//! Projective representations `ρ(g)ρ(h) = α(g,h)ρ(gh)` as explicit unitary matrices.

mod irreducibles;

use std::cmp::Ordering;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cocycle::Twist;
use crate::group::{Embedding, FiniteGroup, SubgroupHandle};
use crate::linalg::{intertwining_space, CMatrix};
use crate::scalar::{real, round_key, Real};
use crate::tolerance::Tolerances;

pub use irreducibles::{irreducibles, irreducibles_with_retries, IrrTable, MAX_IRREDUCIBLES_ORDER, SPLIT_RETRIES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("expected one matrix per group element ({expected}), got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("matrix for element {element} is {rows}x{cols}, expected {dim}x{dim}")]
    DimensionMismatch { element: usize, rows: usize, cols: usize, dim: usize },
    #[error("representations live over different twists")]
    TwistMismatch,
    #[error("representation is not irreducible (commutant dimension {0})")]
    NotIrreducible(usize),
    #[error("character inner product {value} is not within tolerance of an integer")]
    NonIntegerMultiplicity { value: f64 },
    #[error("randomized splitting failed after {attempts} attempts")]
    SplitFailure { attempts: usize },
    #[error("group order {0} exceeds the dense linear algebra limit")]
    TooLarge(usize),
    #[error("relation fails: {0}")]
    Invalid(String),
}

/// `g ↦ ρ(g)` over a twist, one square matrix per group element.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveRep<T: Real = f64> {
    twist: Twist<T>,
    dim: usize,
    matrices: Vec<CMatrix<T>>,
}

/// Worst violations of the defining relation, unitarity and `ρ(1) = I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepReport {
    /// Pairs `(g, h)` with `‖ρ(g)ρ(h) − α(g,h)ρ(gh)‖ > tol`.
    pub relation: Vec<(usize, usize)>,
    pub non_unitary: Vec<usize>,
    pub identity_defect: f64,
    pub max_relation_defect: f64,
    pub max_unitary_defect: f64,
    relation_tol: f64,
}

impl RepReport {
    pub fn is_valid(&self) -> bool {
        self.relation.is_empty() && self.non_unitary.is_empty() && self.identity_defect <= self.relation_tol
    }
}

impl<T: Real> ProjectiveRep<T> {
    pub fn new(twist: Twist<T>, matrices: Vec<CMatrix<T>>) -> Result<Self, RepError> {
        let n = twist.group().order();
        if matrices.len() != n {
            return Err(RepError::WrongCount { expected: n, got: matrices.len() });
        }
        let dim = matrices[0].rows();
        for (element, m) in matrices.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(RepError::DimensionMismatch { element, rows: m.rows(), cols: m.cols(), dim });
            }
        }
        Ok(ProjectiveRep { twist, dim, matrices })
    }

    /// Like [`ProjectiveRep::new`] but also requires a clean [`RepReport`].
    pub fn new_validated(twist: Twist<T>, matrices: Vec<CMatrix<T>>, tol: &Tolerances) -> Result<Self, RepError> {
        let rep = Self::new(twist, matrices)?;
        let report = rep.validate(tol);
        if !report.is_valid() {
            return Err(RepError::Invalid(format!(
                "{} relation failures (max {:.3e}), {} non-unitary",
                report.relation.len(),
                report.max_relation_defect,
                report.non_unitary.len()
            )));
        }
        Ok(rep)
    }

    /// The constant 1-dimensional assignment `g ↦ 1`.
    pub fn trivial(twist: Twist<T>) -> Self {
        let n = twist.group().order();
        ProjectiveRep { twist, dim: 1, matrices: vec![CMatrix::identity(1); n] }
    }

    pub fn twist(&self) -> &Twist<T> {
        &self.twist
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.twist.group()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMatrix<T> {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix<T>] {
        &self.matrices
    }

    pub fn validate(&self, tol: &Tolerances) -> RepReport {
        let rel_tol = if self.twist.is_exact() { tol.rep } else { tol.rep_numeric };
        let rel = real::<T>(rel_tol);
        let g = self.group();
        let to = |x: T| x.to_f64().unwrap_or(f64::INFINITY);
        let mut relation = Vec::new();
        let mut max_relation_defect = 0f64;
        for a in g.elements() {
            for b in g.elements() {
                let lhs = self.matrices[a].mul(&self.matrices[b]);
                let rhs = self.matrices[g.mul(a, b)].scale(self.twist.value(a, b));
                let d = lhs.max_abs_diff(&rhs);
                max_relation_defect = max_relation_defect.max(to(d));
                if d > rel {
                    relation.push((a, b));
                }
            }
        }
        let mut non_unitary = Vec::new();
        let mut max_unitary_defect = 0f64;
        for (x, m) in self.matrices.iter().enumerate() {
            let d = m.unitarity_defect();
            max_unitary_defect = max_unitary_defect.max(to(d));
            if d > real(tol.unitary.max(rel_tol)) {
                non_unitary.push(x);
            }
        }
        let identity_defect = to(self.matrices[0].max_abs_diff(&CMatrix::identity(self.dim)));
        RepReport { relation, non_unitary, identity_defect, max_relation_defect, max_unitary_defect, relation_tol: rel_tol }
    }

    pub fn character(&self) -> AlphaCharacter<T> {
        AlphaCharacter { values: self.matrices.iter().map(CMatrix::trace).collect() }
    }

    /// `V†·ρ(g)·V` for `V` with orthonormal columns spanning an invariant subspace.
    pub fn compress(&self, basis: &CMatrix<T>) -> ProjectiveRep<T> {
        let matrices = self.matrices.iter().map(|m| basis.adjoint_mul(&m.mul(basis))).collect();
        ProjectiveRep { twist: self.twist.clone(), dim: basis.cols(), matrices }
    }

    /// `g ↦ U⁻¹ρ(g)U` for unitary `U`.
    pub fn conjugated(&self, u: &CMatrix<T>) -> ProjectiveRep<T> {
        self.compress(u)
    }

    pub fn direct_sum(&self, other: &ProjectiveRep<T>) -> ProjectiveRep<T> {
        let (d1, d2) = (self.dim, other.dim);
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                CMatrix::from_fn(d1 + d2, d1 + d2, |r, c| match (r < d1, c < d1) {
                    (true, true) => a[(r, c)],
                    (false, false) => b[(r - d1, c - d1)],
                    _ => Complex::zero(),
                })
            })
            .collect();
        ProjectiveRep { twist: self.twist.clone(), dim: d1 + d2, matrices }
    }

    /// Restriction to a subgroup, re-indexed to the subgroup's standalone numbering.
    pub fn restrict(&self, sub: &SubgroupHandle) -> (ProjectiveRep<T>, Embedding) {
        let (twist, emb) = self.twist.restrict(sub);
        let matrices = emb.to_parent.iter().map(|&g| self.matrices[g].clone()).collect();
        (ProjectiveRep { twist, dim: self.dim, matrices }, emb)
    }

    /// Same matrices over another twist on the same indexing (for example an
    /// isomorphic copy of the group, or a cocycle the caller knows is equal).
    pub fn with_twist(&self, twist: Twist<T>) -> ProjectiveRep<T> {
        assert_eq!(twist.group().order(), self.matrices.len());
        ProjectiveRep { twist, dim: self.dim, matrices: self.matrices.clone() }
    }

    /// Multiplies `ρ(g)` by `c(g)`; the result lives over `α·δc`.
    pub fn rescaled(&self, c: &[Complex<T>], twist: Twist<T>) -> ProjectiveRep<T> {
        let matrices = self.matrices.iter().zip(c).map(|(m, z)| m.scale(*z)).collect();
        ProjectiveRep { twist, dim: self.dim, matrices }
    }

    /// Commutant dimension `dim End_G(V)`; 1 exactly when irreducible.
    pub fn commutant_dimension(&self) -> usize {
        if self.dim == 1 {
            return 1;
        }
        intertwining_space(&self.matrices, &self.matrices).len()
    }

    /// Orthogonal projector onto the `τ`-isotypic part of `self`:
    /// `P = (dim τ / |G|)·Σ_g conj(χ_τ(g))·ρ(g)`.
    pub fn isotypic_projector(&self, tau: &AlphaCharacter<T>) -> CMatrix<T> {
        let n = self.matrices.len();
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for (m, v) in self.matrices.iter().zip(&tau.values) {
            p.add_assign(&m.scale(v.conj()));
        }
        p.scale(Complex::new(tau.dim_real() / real::<T>(n as f64), T::zero()))
    }

    pub fn map_scalar<U: Real>(&self, twist: Twist<U>) -> ProjectiveRep<U> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| m.map(|z| Complex::new(real::<U>(z.re.to_f64().unwrap()), real::<U>(z.im.to_f64().unwrap()))))
            .collect();
        ProjectiveRep { twist, dim: self.dim, matrices }
    }
}

/// Twisted regular representation on basis `{e_h}`: `ρ(g)e_h = α(g,h)e_{gh}`.
pub fn regular_rep<T: Real>(twist: Twist<T>) -> ProjectiveRep<T> {
    let g = Arc::clone(twist.group());
    let n = g.order();
    let matrices = g
        .elements()
        .map(|x| {
            let mut m = CMatrix::zeros(n, n);
            for h in 0..n {
                m[(g.mul(x, h), h)] = twist.value(x, h);
            }
            m
        })
        .collect();
    ProjectiveRep { twist, dim: n, matrices }
}

/// Traces of a projective representation, one per group element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaCharacter<T: Real = f64> {
    #[serde(serialize_with = "serialize_complex_vec")]
    pub values: Vec<Complex<T>>,
}

fn serialize_complex_vec<T: Real, S: serde::Serializer>(v: &[Complex<T>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[crate::scalar::round_display(z.re, 9), crate::scalar::round_display(z.im, 9)])?;
    }
    seq.end()
}

impl<T: Real> AlphaCharacter<T> {
    pub fn dim_real(&self) -> T {
        self.values[0].re
    }

    pub fn dim(&self) -> usize {
        self.values[0].re.to_f64().unwrap_or(0.0).round().max(0.0) as usize
    }

    /// `⟨χ, ψ⟩ = (1/|G|)·Σ_g χ(g)·conj(ψ(g))`.
    pub fn inner(&self, other: &AlphaCharacter<T>) -> Complex<T> {
        assert_eq!(self.values.len(), other.values.len());
        let s = self.values.iter().zip(&other.values).fold(Complex::zero(), |acc: Complex<T>, (a, b)| acc + *a * b.conj());
        s / real::<T>(self.values.len() as f64)
    }

    pub fn max_distance(&self, other: &AlphaCharacter<T>) -> T {
        self.values.iter().zip(&other.values).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn approx_eq(&self, other: &AlphaCharacter<T>, tol: f64) -> bool {
        self.values.len() == other.values.len() && self.max_distance(other) <= real(tol)
    }

    /// Rounded `(re, im)` keys used for ordering and fingerprints.
    pub fn keys(&self) -> Vec<(i64, i64)> {
        self.values.iter().map(|z| (round_key(z.re, 9), round_key(z.im, 9))).collect()
    }

    /// Compact printable identity: values rounded to 4 decimals.
    pub fn fingerprint(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(|z| format_complex(*z, 4)).collect();
        format!("[{}]", parts.join(", "))
    }

    pub fn restrict(&self, emb: &Embedding) -> AlphaCharacter<T> {
        AlphaCharacter { values: emb.to_parent.iter().map(|&g| self.values[g]).collect() }
    }
}

/// Ordering by dimension, then lexicographically by rounded character values.
pub fn character_order<T: Real>(a: &AlphaCharacter<T>, b: &AlphaCharacter<T>) -> Ordering {
    a.dim().cmp(&b.dim()).then_with(|| a.keys().cmp(&b.keys()))
}

/// `a+bi` with trailing zeros trimmed; `-0` prints as `0`.
pub fn format_complex<T: Real>(z: Complex<T>, decimals: i32) -> String {
    let re = crate::scalar::round_display(z.re, decimals);
    let im = crate::scalar::round_display(z.im, decimals);
    let p = decimals.max(0) as usize;
    let trim = |x: f64| {
        let s = format!("{x:.p$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    };
    match (re == 0.0, im == 0.0) {
        (_, true) => trim(re),
        (true, false) => format!("{}i", trim(im)),
        (false, false) if im < 0.0 => format!("{}-{}i", trim(re), trim(-im)),
        _ => format!("{}+{}i", trim(re), trim(im)),
    }
}

/// `dim Hom_G(τ, W)` from characters, rejected unless within `tol` of an integer.
pub fn multiplicity<T: Real>(w: &ProjectiveRep<T>, tau: &ProjectiveRep<T>, tol: &Tolerances) -> Result<usize, RepError> {
    if !w.twist().same_table(tau.twist(), tol.cocycle) {
        return Err(RepError::TwistMismatch);
    }
    character_multiplicity(&w.character(), &tau.character(), tol.character)
}

pub fn character_multiplicity<T: Real>(w: &AlphaCharacter<T>, tau: &AlphaCharacter<T>, tol: f64) -> Result<usize, RepError> {
    let ip = w.inner(tau);
    let re = ip.re.to_f64().unwrap_or(f64::NAN);
    let im = ip.im.to_f64().unwrap_or(f64::NAN);
    let rounded = re.round();
    if (re - rounded).abs() > tol || im.abs() > tol || rounded < 0.0 {
        return Err(RepError::NonIntegerMultiplicity { value: re });
    }
    Ok(rounded as usize)
}

/// Unitary `M` with `ρ₂(g) = M⁻¹ρ₁(g)M` for all `g`, or `None` when the
/// characters differ. The phase is fixed by making the first entry (row-major)
/// with modulus above half the maximum real and positive.
pub fn intertwiner<T: Real>(
    rho1: &ProjectiveRep<T>,
    rho2: &ProjectiveRep<T>,
    tol: &Tolerances,
) -> Result<Option<CMatrix<T>>, RepError> {
    if !rho1.twist().same_table(rho2.twist(), tol.cocycle) {
        return Err(RepError::TwistMismatch);
    }
    if rho1.dim() != rho2.dim() || !rho1.character().approx_eq(&rho2.character(), tol.character) {
        return Ok(None);
    }
    // ρ₁(g)·M = M·ρ₂(g)
    let space = intertwining_space(rho2.matrices(), rho1.matrices());
    match space.len() {
        0 => Ok(None),
        1 => {
            let m = space[0].scale(Complex::new(real::<T>(rho1.dim() as f64).sqrt(), T::zero()));
            Ok(Some(normalize_phase(&m)))
        }
        k => Err(RepError::NotIrreducible(k)),
    }
}

/// Rotates a matrix so its first dominant entry (row-major, modulus above
/// half the maximum) is real and positive.
pub fn normalize_phase<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let max = m.max_abs();
    if max == T::zero() {
        return m.clone();
    }
    let half = max * real::<T>(0.5);
    let pivot = m.as_slice().iter().find(|z| z.norm() > half).copied().unwrap_or_else(Complex::one);
    m.scale(pivot.conj() / pivot.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{dihedral_alpha, Cocycle};
    use crate::scalar::root_of_unity;

    /// `τ_i(aᵏbˡ) = A_iᵏ B_iˡ` with `A_i = diag(εⁱ, ε^{1−i})`, `B_i` the swap.
    fn tau_matrices(n: usize, i: i64) -> Vec<CMatrix<f64>> {
        let a_exp = |k: usize| (i * k as i64, (1 - i) * k as i64);
        (0..2 * n)
            .map(|x| {
                let (k, l) = (x % n, x / n);
                let (e1, e2) = a_exp(k);
                let a = CMatrix::diagonal(&[root_of_unity(e1, n as u32), root_of_unity(e2, n as u32)]);
                if l == 0 {
                    a
                } else {
                    let b = CMatrix::from_fn(2, 2, |r, c| if r != c { Complex::one() } else { Complex::zero() });
                    a.mul(&b)
                }
            })
            .collect()
    }

    fn alpha4() -> Twist<f64> {
        dihedral_alpha(4).unwrap().into()
    }

    #[test]
    fn explicit_dihedral_reps_are_valid() {
        let tol = Tolerances::default();
        let tau1 = ProjectiveRep::new(alpha4(), tau_matrices(4, 1)).unwrap();
        assert!(tau1.validate(&tol).is_valid());
        let chi = tau1.character();
        assert!((chi.values[1] - Complex::new(1.0, 1.0)).norm() < 1e-12);
        let tau2 = ProjectiveRep::new(alpha4(), tau_matrices(4, 2)).unwrap();
        assert!(tau2.character().values[2].norm() < 1e-12);
        assert_eq!(tau1.commutant_dimension(), 1);
        assert_eq!(intertwiner(&tau1, &tau2, &tol).unwrap(), None);
    }

    #[test]
    fn untwisted_relation_fails_at_b_a() {
        let d8 = dihedral_alpha(4).unwrap().group().clone();
        let trivial: Twist<f64> = Cocycle::trivial(&d8, 1).into();
        let rep = ProjectiveRep::new(trivial, tau_matrices(4, 1)).unwrap();
        let report = rep.validate(&Tolerances::default());
        assert!(!report.is_valid());
        assert!(report.relation.contains(&(4, 1)));
    }

    #[test]
    fn regular_characters() {
        let reg = regular_rep(alpha4());
        assert!(reg.validate(&Tolerances::default()).is_valid());
        let chi = reg.character();
        assert_eq!(chi.values[0], Complex::new(8.0, 0.0));
        assert!(chi.values[1..].iter().all(|z| z.norm() == 0.0));

        let z2 = FiniteGroup::cyclic(2).unwrap().into_shared();
        let reg = regular_rep::<f64>(Cocycle::trivial(&z2, 1).into());
        assert_eq!(reg.character().values, vec![Complex::new(2.0, 0.0), Complex::zero()]);
    }

    #[test]
    fn multiplicities_and_intertwiners() {
        let tol = Tolerances::default();
        let tau1 = ProjectiveRep::new(alpha4(), tau_matrices(4, 1)).unwrap();
        assert_eq!(multiplicity(&tau1, &tau1, &tol).unwrap(), 1);
        assert_eq!(multiplicity(&regular_rep(alpha4()), &tau1, &tol).unwrap(), 2);
        let id = intertwiner(&tau1, &tau1, &tol).unwrap().unwrap();
        assert!(id.max_abs_diff(&CMatrix::identity(2)) < 1e-10);

        // a conjugated copy is recovered up to the normalized phase
        let u = CMatrix::from_rows(&[
            vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)],
            vec![Complex::new(0.0, 0.8), Complex::new(0.6, 0.0)],
        ]);
        let copy = tau1.conjugated(&u);
        let m = intertwiner(&tau1, &copy, &tol).unwrap().unwrap();
        for g in 0..8 {
            let back = m.adjoint().mul(&tau1.matrix(g).mul(&m));
            assert!(back.max_abs_diff(copy.matrix(g)) < 1e-9);
        }
        assert!(m.unitarity_defect() < 1e-9);
    }

    #[test]
    fn restriction_to_rotations() {
        let tol = Tolerances::default();
        let tau1 = ProjectiveRep::new(alpha4(), tau_matrices(4, 1)).unwrap();
        let a = SubgroupHandle::closure(tau1.group(), &[1]).unwrap();
        let (res, emb) = tau1.restrict(&a);
        assert_eq!(emb.group.order(), 4);
        assert!(res.validate(&tol).is_valid());
        // ρ(a) = i
        let rho = AlphaCharacter { values: (0..4).map(|k| root_of_unity::<f64>(k, 4)).collect() };
        assert_eq!(character_multiplicity(&res.character(), &rho, tol.character).unwrap(), 1);
        let trivial = AlphaCharacter { values: vec![Complex::one(); 4] };
        assert_eq!(character_multiplicity(&res.character(), &trivial, tol.character).unwrap(), 1);
        let p = res.isotypic_projector(&rho);
        assert!((p.trace() - Complex::one()).norm() < 1e-12);
        assert!(p.mul(&p).max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_complex(Complex::new(1.0, 1.0), 4), "1+1i");
        assert_eq!(format_complex(Complex::new(-1e-12, -0.5), 4), "-0.5i");
        assert_eq!(format_complex(Complex::new(0.25, -2.0), 4), "0.25-2i");
        assert_eq!(format_complex(Complex::new(-0.0, 0.0), 4), "0");
    }
}
