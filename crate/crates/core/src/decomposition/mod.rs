//! The G-action on `Irr^α(A)`, orbits, isotropy, the intertwiners `M_q`, the
//! induced cocycles `β_{τ,α}` and the multiplicity representations on
//! `Hom_A(V_τ, W)`.

mod hom;
mod report;

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cocycle::{tau_scalar, Cocycle, CocycleError, NumericCocycle, Twist};
use crate::group::{Embedding, FiniteGroup, GroupError, QuotientWithSection, SubgroupHandle};
use crate::linalg::CMatrix;
use crate::projrep::{intertwiner, irreducibles, IrrTable, ProjectiveRep, RepError};
use crate::scalar::{real, Real};
use crate::tolerance::Tolerances;

pub use hom::{hom_rep, hom_rep_on, reconstruct, HomRep, Reconstruction};
pub use report::{
    verify_point_decomposition, DecompositionOptions, DecompositionReport, IrrSummary, MatchEntry, OrbitSummary,
    PointDecomposition, RankSummary,
    REPORT_SCHEMA,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompositionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("cocycle and subgroup live on different groups")]
    GroupMismatch,
    #[error("g = {g} sends irreducible {irr} to a character outside the table")]
    UnmatchedCharacter { g: usize, irr: usize },
    #[error("action law fails: {0}")]
    ActionLaw(String),
    #[error("restriction of irreducible {w} meets orbits {orbits:?}")]
    OrbitMixing { w: usize, orbits: Vec<usize> },
    #[error("restriction of irreducible {w} has unequal multiplicities {multiplicities:?} on its orbit")]
    UnequalMultiplicities { w: usize, multiplicities: Vec<usize> },
    #[error("irreducible {w} could not be matched: {reason}")]
    MatchFailure { w: usize, reason: String },
    #[error("β({q1},{q2}) is not scalar (defect {defect:.3e})")]
    NotScalar { q1: usize, q2: usize, defect: f64 },
    #[error("β({q1},{q2}) has modulus {modulus}")]
    NotUnimodular { q1: usize, q2: usize, modulus: f64 },
    #[error("induced cocycle fails the cocycle axioms: {0}")]
    NotACocycle(String),
    #[error("τ-isotypic component is zero")]
    NotIsotypic,
    #[error("Hom representation fails the β-relation (defect {0:.3e})")]
    HomRelation(f64),
    #[error("reconstruction disagrees with the input (defect {0:.3e})")]
    Reconstruction(f64),
    #[error("matching is not a bijection: {0}")]
    NotBijective(String),
}

/// How the intertwiners `M_q` are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// Schur solver output: first dominant entry real positive.
    #[default]
    Normalized,
    /// Normalized, then `M_q` (q ≠ 1) multiplied by a unit scalar drawn from the seed.
    Perturbed(u64),
}

/// A group, a normal subgroup and a cocycle, with the restricted data on `A`.
#[derive(Debug, Clone)]
pub struct Setting {
    group: Arc<FiniteGroup>,
    normal: SubgroupHandle,
    alpha: Arc<Cocycle>,
    alpha_a: Arc<Cocycle>,
    a_emb: Embedding,
}

impl Setting {
    pub fn new(alpha: Cocycle, normal: SubgroupHandle) -> Result<Self, DecompositionError> {
        if **normal.parent() != **alpha.group() {
            return Err(DecompositionError::GroupMismatch);
        }
        if let Some((conjugator, element)) = normal.normality_violation() {
            return Err(GroupError::NotNormal { conjugator, element }.into());
        }
        let report = alpha.validate();
        if !report.is_valid() {
            return Err(CocycleError::Invalid(report).into());
        }
        let group = Arc::clone(alpha.group());
        let normal = SubgroupHandle::from_elements(&group, normal.elements())?;
        let (alpha_a, a_emb) = alpha.restrict(&normal);
        Ok(Setting { group, normal, alpha: Arc::new(alpha), alpha_a: Arc::new(alpha_a), a_emb })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn normal(&self) -> &SubgroupHandle {
        &self.normal
    }

    pub fn alpha(&self) -> &Arc<Cocycle> {
        &self.alpha
    }

    pub fn alpha_a(&self) -> &Arc<Cocycle> {
        &self.alpha_a
    }

    pub fn a_embedding(&self) -> &Embedding {
        &self.a_emb
    }

    pub fn twist_g<T: Real>(&self) -> Twist<T> {
        Twist::Exact(Arc::clone(&self.alpha))
    }

    pub fn twist_a<T: Real>(&self) -> Twist<T> {
        Twist::Exact(Arc::clone(&self.alpha_a))
    }
}

/// `(g·ρ)(a) = α(g⁻¹a, g)·α(g, g⁻¹a)⁻¹·ρ(g⁻¹ag)` for an `α|_A`-representation
/// `ρ` indexed by the standalone numbering of `A`.
pub fn act<T: Real>(setting: &Setting, g: usize, rho: &ProjectiveRep<T>) -> ProjectiveRep<T> {
    let grp = &setting.group;
    let emb = &setting.a_emb;
    let gi = grp.inv(g);
    let matrices = emb
        .to_parent
        .iter()
        .map(|&a| {
            let gia = grp.mul(gi, a);
            let conj = emb.from_parent(grp.mul(gia, g)).expect("A is normal");
            let scalar = setting.alpha.complex::<T>(gia, g) * setting.alpha.complex::<T>(g, gia).conj();
            rho.matrix(conj).scale(scalar)
        })
        .collect();
    let acted = ProjectiveRep::new(rho.twist().clone(), matrices).expect("same shape");
    debug_assert!(acted.validate(&Tolerances::for_scalar::<T>().scaled(1e2)).is_valid());
    acted
}

/// The permutation action of `G` on the classes of `Irr^α(A)`, with intertwiner witnesses.
#[derive(Debug, Clone)]
pub struct IrrAction<T: Real = f64> {
    base: IrrTable<T>,
    /// `perm[g][i]` = class of `g·τᵢ`.
    perm: Vec<Vec<usize>>,
    /// `witness[g][i]` = `M` with `(g·τᵢ)(a) = M⁻¹·τ_{perm[g][i]}(a)·M`.
    witness: Vec<Vec<CMatrix<T>>>,
}

impl<T: Real> IrrAction<T> {
    pub fn base(&self) -> &IrrTable<T> {
        &self.base
    }

    pub fn perm(&self, g: usize, i: usize) -> usize {
        self.perm[g][i]
    }

    pub fn witness(&self, g: usize, i: usize) -> &CMatrix<T> {
        &self.witness[g][i]
    }

    /// Orbits as sorted index lists, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let k = self.base.len();
        let mut seen = vec![false; k];
        let mut orbits = Vec::new();
        for i in 0..k {
            if seen[i] {
                continue;
            }
            let mut orbit: Vec<usize> = self.perm.iter().map(|row| row[i]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &j in &orbit {
                seen[j] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// `{g : g·[τᵢ] = [τᵢ]}`.
    pub fn isotropy(&self, parent: &Arc<FiniteGroup>, i: usize) -> SubgroupHandle {
        let fixed: Vec<usize> = parent.elements().filter(|&g| self.perm[g][i] == i).collect();
        SubgroupHandle::from_elements(parent, &fixed).expect("stabilizers are subgroups")
    }
}

/// Computes `g·τᵢ` for all `g` and `i`, identifies classes by characters and
/// checks the action laws and the triviality of the action of `A`.
pub fn action_table<T: Real>(setting: &Setting, base: IrrTable<T>, tol: &Tolerances) -> Result<IrrAction<T>, DecompositionError> {
    let grp = &setting.group;
    let k = base.len();
    let mut perm = vec![vec![0; k]; grp.order()];
    let mut witness = vec![Vec::with_capacity(k); grp.order()];
    for g in grp.elements() {
        for i in 0..k {
            let acted = act(setting, g, base.irreducible(i));
            let j = base
                .find(&acted.character(), tol.character)
                .ok_or(DecompositionError::UnmatchedCharacter { g, irr: i })?;
            let m = if g == 0 {
                CMatrix::identity(acted.dim())
            } else {
                intertwiner(base.irreducible(j), &acted, tol)?.ok_or(DecompositionError::UnmatchedCharacter { g, irr: i })?
            };
            perm[g][i] = j;
            witness[g].push(m);
        }
    }
    for i in 0..k {
        if perm[0][i] != i {
            return Err(DecompositionError::ActionLaw(format!("1·τ{i} ≠ τ{i}")));
        }
        for &a in setting.normal.elements() {
            if perm[a][i] != i {
                return Err(DecompositionError::ActionLaw(format!("A-element {a} moves τ{i}")));
            }
        }
        for g in grp.elements() {
            for h in grp.elements() {
                if perm[g][perm[h][i]] != perm[grp.mul(g, h)][i] {
                    return Err(DecompositionError::ActionLaw(format!("g={g}, h={h} on τ{i}")));
                }
            }
        }
    }
    Ok(IrrAction { base, perm, witness })
}

/// One orbit of `G` on `Irr^α(A)` with everything needed to build `β_{τ,α}`.
#[derive(Debug, Clone)]
pub struct OrbitDatum<T: Real = f64> {
    pub representative: usize,
    pub members: Vec<usize>,
    /// `G_{[τ]}` inside `G`.
    pub isotropy: SubgroupHandle,
    /// `G_{[τ]}` as a standalone group.
    pub isotropy_embedding: Embedding,
    /// `α` restricted to `G_{[τ]}`.
    pub alpha_isotropy: Arc<Cocycle>,
    /// `A ⊴ G_{[τ]}` and the section `σ`, in standalone indices of `G_{[τ]}`.
    pub quotient: QuotientWithSection,
    /// `M_q` with `(σ(q)·τ)(a) = M_q⁻¹·τ(a)·M_q`, `M_1 = I`.
    pub m: Vec<CMatrix<T>>,
    /// Unit scalars applied to the normalized `M_q`, all 1 under the default convention.
    pub phases: Vec<Complex<T>>,
    pub beta: Arc<NumericCocycle<T>>,
    /// Largest deviation of an intermediate `β` matrix from a scalar.
    pub scalar_defect: f64,
}

impl<T: Real> OrbitDatum<T> {
    pub fn q_group(&self) -> &Arc<FiniteGroup> {
        self.quotient.quotient()
    }

    pub fn beta_twist(&self) -> Twist<T> {
        Twist::Numeric(Arc::clone(&self.beta))
    }

    /// Parent index of `σ(q)`.
    pub fn section_in_parent(&self, q: usize) -> usize {
        self.isotropy_embedding.to_parent(self.quotient.section(q))
    }
}

/// One [`OrbitDatum`] per orbit, representatives being the smallest index.
pub fn orbit_data<T: Real>(
    setting: &Setting,
    action: &IrrAction<T>,
    convention: PhaseConvention,
    tol: &Tolerances,
) -> Result<Vec<OrbitDatum<T>>, DecompositionError> {
    action.orbits().into_iter().map(|members| orbit_datum(setting, action, members, convention, tol)).collect()
}

fn orbit_datum<T: Real>(
    setting: &Setting,
    action: &IrrAction<T>,
    members: Vec<usize>,
    convention: PhaseConvention,
    tol: &Tolerances,
) -> Result<OrbitDatum<T>, DecompositionError> {
    let grp = &setting.group;
    let representative = members[0];
    let tau = action.base().irreducible(representative);
    let isotropy = action.isotropy(grp, representative);
    let (alpha_iso, iso_emb) = setting.alpha.restrict(&isotropy);
    let a_in_iso: Vec<usize> =
        setting.normal.elements().iter().map(|&a| iso_emb.from_parent(a).expect("A ⊆ G_[τ]")).collect();
    let kernel = SubgroupHandle::from_elements(&iso_emb.group, &a_in_iso)?;
    let quotient = QuotientWithSection::new(&kernel)?;
    let q_order = quotient.quotient().order();

    let phases: Vec<Complex<T>> = match convention {
        PhaseConvention::Normalized => vec![Complex::new(T::one(), T::zero()); q_order],
        PhaseConvention::Perturbed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..q_order)
                .map(|q| {
                    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    if q == 0 {
                        Complex::new(T::one(), T::zero())
                    } else {
                        Complex::new(real::<T>(theta.cos()), real::<T>(theta.sin()))
                    }
                })
                .collect()
        }
    };

    let mut m = Vec::with_capacity(q_order);
    for q in 0..q_order {
        if q == 0 {
            m.push(CMatrix::identity(tau.dim()));
            continue;
        }
        let s = iso_emb.to_parent(quotient.section(q));
        let acted = act(setting, s, tau);
        let mq = intertwiner(tau, &acted, tol)?.ok_or_else(|| {
            DecompositionError::ActionLaw(format!("σ({q}) does not fix the class of τ{representative}"))
        })?;
        m.push(mq.scale(phases[q]));
    }

    let datum = OrbitDatum {
        representative,
        members,
        isotropy,
        isotropy_embedding: iso_emb,
        alpha_isotropy: Arc::new(alpha_iso),
        quotient,
        m,
        phases,
        beta: Arc::new(NumericCocycle::trivial(&FiniteGroup::trivial().into_shared())),
        scalar_defect: 0.0,
    };
    let (beta, scalar_defect) = induced_cocycle(setting, &datum, tau, tol)?;
    Ok(OrbitDatum { beta: Arc::new(beta), scalar_defect, ..datum })
}

/// `β(q₁,q₂) = τ(q₁,q₂)·ρ(χ(q₁,q₂))·M_{q₂}⁻¹·M_{q₁}⁻¹·M_{q₁q₂}`, each product
/// checked to be a unit scalar matrix. Returns the cocycle and the worst scalar defect.
pub fn induced_cocycle<T: Real>(
    setting: &Setting,
    datum: &OrbitDatum<T>,
    rho: &ProjectiveRep<T>,
    tol: &Tolerances,
) -> Result<(NumericCocycle<T>, f64), DecompositionError> {
    let qs = &datum.quotient;
    let q = qs.quotient();
    let n = q.order();
    let mut table = Vec::with_capacity(n * n);
    let mut worst = 0f64;
    for q1 in 0..n {
        for q2 in 0..n {
            let q12 = q.mul(q1, q2);
            let tau = tau_scalar(&datum.alpha_isotropy, qs, q1, q2).to_complex::<T>();
            let chi = datum.isotropy_embedding.to_parent(qs.chi(q1, q2));
            let chi_a = setting.a_emb.from_parent(chi).expect("χ lies in A");
            let t = rho
                .matrix(chi_a)
                .mul(&datum.m[q2].adjoint())
                .mul(&datum.m[q1].adjoint())
                .mul(&datum.m[q12])
                .scale(tau);
            let (lambda, defect) = t.scalar_part();
            let defect = defect.to_f64().unwrap_or(f64::INFINITY);
            worst = worst.max(defect);
            if defect > tol.scalar {
                return Err(DecompositionError::NotScalar { q1, q2, defect });
            }
            let modulus = lambda.norm().to_f64().unwrap_or(f64::INFINITY);
            if (modulus - 1.0).abs() > tol.unitary.max(tol.scalar) {
                return Err(DecompositionError::NotUnimodular { q1, q2, modulus });
            }
            table.push(if q1 == 0 || q2 == 0 { Complex::new(T::one(), T::zero()) } else { lambda / lambda.norm() });
        }
    }
    let beta = NumericCocycle::from_values(q, table)?;
    let report = beta.report();
    if !report.passes(tol.cocycle, tol.unitary) {
        return Err(DecompositionError::NotACocycle(format!(
            "normalization {:.3e}, identity {:.3e}",
            report.normalization, report.identity
        )));
    }
    Ok((beta, worst))
}

/// Irreducibles of `α|_A` and the action on them.
pub fn build_action<T: Real>(setting: &Setting, seed: u64, tol: &Tolerances) -> Result<IrrAction<T>, DecompositionError> {
    let irr_a = irreducibles(setting.twist_a::<T>(), seed, tol)?;
    action_table(setting, irr_a, tol)
}
