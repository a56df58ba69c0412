use num_complex::Complex;

use super::{DecompositionError, OrbitDatum, Setting};
use crate::cocycle::Twist;
use crate::linalg::{intertwining_space, CMatrix};
use crate::projrep::ProjectiveRep;
use crate::scalar::{real, Real};
use crate::tolerance::Tolerances;

/// `Hom_A(V_τ, W)` with its `β`-representation of `Q_{[τ]}`.
#[derive(Debug, Clone)]
pub struct HomRep<T: Real = f64> {
    /// `q ↦ (f ↦ W(σ(q))·f·M_q⁻¹)` in the basis below.
    pub rep: ProjectiveRep<T>,
    /// Frobenius-orthonormal basis `f₁..f_m`, each `dim W × dim τ`.
    pub basis: Vec<CMatrix<T>>,
    /// Dimension of the `τ`-isotypic part of `W|_A`.
    pub isotypic_dim: usize,
}

/// The β-representation on `Hom_A(V_τ, W)` for an `α`-representation `W` of
/// `G_{[τ]}` (standalone indexing of the isotropy group).
pub fn hom_rep<T: Real>(
    setting: &Setting,
    datum: &OrbitDatum<T>,
    tau: &ProjectiveRep<T>,
    w: &ProjectiveRep<T>,
    tol: &Tolerances,
) -> Result<HomRep<T>, DecompositionError> {
    let qs: Vec<usize> = datum.q_group().elements().collect();
    hom_rep_on(setting, datum, tau, w, Some, &qs, datum.beta_twist(), tol)?.ok_or(DecompositionError::NotIsotypic)
}

/// Same construction for `W` defined on a subgroup `S` with `A ⊆ S ⊆ G_{[τ]}`.
/// `to_w` sends a standalone index of `G_{[τ]}` to the index of `W`'s group,
/// `qs` lists `S/A` inside `Q_{[τ]}` in the order of `twist`'s group. `None`
/// when the `τ`-isotypic part of `W|_A` is zero.
#[allow(clippy::too_many_arguments)]
pub fn hom_rep_on<T: Real>(
    setting: &Setting,
    datum: &OrbitDatum<T>,
    tau: &ProjectiveRep<T>,
    w: &ProjectiveRep<T>,
    to_w: impl Fn(usize) -> Option<usize>,
    qs: &[usize],
    twist: Twist<T>,
    tol: &Tolerances,
) -> Result<Option<HomRep<T>>, DecompositionError> {
    let iso = &datum.isotropy_embedding;
    let a_emb = setting.a_embedding();
    let index = |x: usize| to_w(x).ok_or_else(|| DecompositionError::MatchFailure {
        w: 0,
        reason: format!("element {x} of the isotropy group is outside the domain of W"),
    });
    let w_on_a: Vec<CMatrix<T>> = a_emb
        .to_parent
        .iter()
        .map(|&a| index(iso.from_parent(a).expect("A ⊆ G_[τ]")).map(|k| w.matrix(k).clone()))
        .collect::<Result<_, _>>()?;
    let w_a = ProjectiveRep::new(tau.twist().clone(), w_on_a)?;
    let projector = w_a.isotypic_projector(&tau.character());
    let isotypic = projector.trace().re.to_f64().unwrap_or(0.0);
    if isotypic < 0.5 {
        return Ok(None);
    }
    let isotypic_dim = isotypic.round() as usize;

    // W(a)·f = f·τ(a)
    let basis = intertwining_space(tau.matrices(), w_a.matrices());
    let m = basis.len();
    if m * tau.dim() != isotypic_dim {
        return Err(DecompositionError::MatchFailure {
            w: 0,
            reason: format!("Hom has dimension {m} but the isotypic part has dimension {isotypic_dim}"),
        });
    }
    for f in &basis {
        if projector.mul(f).max_abs_diff(f) > real(tol.rep_numeric) {
            return Err(DecompositionError::NotIsotypic);
        }
    }

    let quotient = &datum.quotient;
    let matrices: Vec<CMatrix<T>> = qs
        .iter()
        .map(|&q| {
            let ws = w.matrix(index(quotient.section(q))?);
            let m_inv = datum.m[q].adjoint();
            Ok(CMatrix::from_fn(m, m, |j, i| {
                let image = ws.mul(&basis[i]).mul(&m_inv);
                basis[j].inner(&image)
            }))
        })
        .collect::<Result<_, DecompositionError>>()?;
    let rep = ProjectiveRep::new(twist, matrices)?;
    let report = rep.validate(tol);
    if !report.is_valid() {
        return Err(DecompositionError::HomRelation(report.max_relation_defect.max(report.max_unitary_defect)));
    }
    Ok(Some(HomRep { rep, basis, isotypic_dim }))
}

/// `V_τ ⊗ Hom_A(V_τ, W)` with `g ↦ M_{π(g)}·ρ̃(σ̃(π(g))⁻¹(g,1)) ⊗ R(π(g))`, and
/// how well it reproduces the `τ`-isotypic part of `W` on `G_{[τ]}`.
#[derive(Debug, Clone)]
pub struct Reconstruction<T: Real = f64> {
    pub rep: ProjectiveRep<T>,
    /// Largest `|χ_rec(g) − tr(P·W(g))|`.
    pub character_defect: f64,
    /// Largest `‖W(g)·Γ − Γ·rec(g)‖` for `Γ(v ⊗ f) = f(v)`.
    pub gamma_defect: f64,
}

pub fn reconstruct<T: Real>(
    setting: &Setting,
    datum: &OrbitDatum<T>,
    tau: &ProjectiveRep<T>,
    w: &ProjectiveRep<T>,
    hom: &HomRep<T>,
) -> Reconstruction<T> {
    let iso = &datum.isotropy_embedding;
    let grp = &iso.group;
    let qs = &datum.quotient;
    let alpha = &datum.alpha_isotropy;
    let a_emb = setting.a_embedding();
    let matrices: Vec<CMatrix<T>> = grp
        .elements()
        .map(|g| {
            let q = qs.project(g);
            let s = qs.section(q);
            let si = grp.inv(s);
            let a = grp.mul(si, g);
            let a_std = a_emb.from_parent(iso.to_parent(a)).expect("σ(π(g))⁻¹g lies in A");
            // (s,1)⁻¹(g,1) = (s⁻¹g, α(s⁻¹,g)·α(s⁻¹,s)⁻¹)
            let z = alpha.complex::<T>(si, g) * alpha.complex::<T>(si, s).conj();
            let left = datum.m[q].mul(tau.matrix(a_std)).scale(z);
            left.kron(hom.rep.matrix(q))
        })
        .collect();
    let rep = ProjectiveRep::new(Twist::Exact(alpha.clone()), matrices).expect("square");

    let (dt, m) = (tau.dim(), hom.basis.len());
    let gamma = CMatrix::from_fn(w.dim(), dt * m, |r, c| hom.basis[c % m][(r, c / m)]);
    let w_on_a: Vec<CMatrix<T>> =
        a_emb.to_parent.iter().map(|&a| w.matrix(iso.from_parent(a).expect("A ⊆ G_[τ]")).clone()).collect();
    let projector = ProjectiveRep::new(tau.twist().clone(), w_on_a).expect("square").isotypic_projector(&tau.character());
    let mut character_defect = 0f64;
    let mut gamma_defect = 0f64;
    for g in grp.elements() {
        let expected: Complex<T> = projector.mul(w.matrix(g)).trace();
        let got = rep.matrix(g).trace();
        character_defect = character_defect.max((expected - got).norm().to_f64().unwrap_or(f64::INFINITY));
        let d = w.matrix(g).mul(&gamma).max_abs_diff(&gamma.mul(rep.matrix(g)));
        gamma_defect = gamma_defect.max(d.to_f64().unwrap_or(f64::INFINITY));
    }
    if m == 0 {
        character_defect = character_defect.max(if projector.max_abs() > T::zero() { 1.0 } else { 0.0 });
    }
    Reconstruction { rep, character_defect, gamma_defect }
}
