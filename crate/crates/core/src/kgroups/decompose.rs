use std::fmt::Write as _;

use serde::Serialize;

use super::gset::same_group;
use super::{conjugate_rep, k0_of_gset, pullback_between, FiniteGSet, GSetMap, IntMatrix, KGroupError, TwistedKGroup};
use crate::decomposition::{
    build_action, hom_rep_on, orbit_data, DecompositionOptions, OrbitDatum, Setting, REPORT_SCHEMA,
};
use crate::group::SubgroupHandle;
use crate::projrep::IrrTable;
use crate::scalar::Real;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GSetReport {
    pub schema: u32,
    pub points: usize,
    /// Per G-orbit of points: smallest point, isotropy order, rank of its summand.
    pub g_orbits: Vec<[usize; 3]>,
    pub lhs_rank: usize,
    /// Per orbit `[τ]` of `G` on `Irr^α(A)`: representative and the rank of the `β`-twisted `Q_{[τ]}` side.
    pub tau_orbits: Vec<[usize; 2]>,
    pub rhs_rank: usize,
    /// Rows: basis of the right side, columns: basis of the left side.
    pub phi: IntMatrix,
    pub bijective: bool,
}

impl GSetReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} points, {} G-orbits", self.points, self.g_orbits.len());
        for [p, iso, r] in &self.g_orbits {
            let _ = writeln!(s, "  orbit of {p}: |G_x| = {iso}, rank {r}");
        }
        let _ = writeln!(s, "G side: rank {}", self.lhs_rank);
        for [rep, r] in &self.tau_orbits {
            let _ = writeln!(s, "  [τ{rep}]: rank {r}");
        }
        let _ = writeln!(s, "orbit side: rank {}", self.rhs_rank);
        let _ = writeln!(s, "decomposition map {}", if self.bijective { "is a bijection on bases" } else { "is NOT a bijection" });
        s
    }
}

/// Both sides of the decomposition for one G-set, and the map between their bases.
#[derive(Debug, Clone)]
pub struct GSetDecomposition<T: Real = f64> {
    pub lhs: TwistedKGroup<T>,
    pub orbits: Vec<OrbitDatum<T>>,
    pub irr_a: IrrTable<T>,
    /// One K-group per orbit datum, over `Q_{[τ]}` twisted by `β_{τ,α}`.
    pub rhs: Vec<TwistedKGroup<T>>,
    pub phi: IntMatrix,
    pub report: GSetReport,
}

/// Computes the rank of `αK⁰_G(X)` and, independently, of each
/// `β_{τ,α}K⁰_{Q_{[τ]}}(X)`, and the map between them sending a bundle to the
/// fibrewise `Hom_A(V_τ, ─)`. Fails unless the ranks agree and that map is a
/// bijection on bases.
pub fn verify_gset_decomposition<T: Real>(
    setting: &Setting,
    x: &FiniteGSet,
    options: &DecompositionOptions,
) -> Result<GSetDecomposition<T>, KGroupError> {
    if !same_group(setting.group(), x.group()) {
        return Err(KGroupError::GroupMismatch);
    }
    if let Some((a, point)) = x.moved_by(setting.normal().elements()) {
        return Err(KGroupError::ANotTrivial { a, point });
    }
    let tol = &options.tolerances;
    let lhs = k0_of_gset(&setting.twist_g::<T>(), x, options.seed, tol)?;
    let action = build_action::<T>(setting, options.seed, tol)?;
    let orbits = orbit_data(setting, &action, options.convention, tol)?;
    let rhs = orbits
        .iter()
        .map(|d| {
            let xq = x.descended(&d.isotropy_embedding, &d.quotient)?;
            k0_of_gset(&d.beta_twist(), &xq, options.seed, tol)
        })
        .collect::<Result<Vec<_>, KGroupError>>()?;
    let rhs_rank: usize = rhs.iter().map(TwistedKGroup::rank).sum();
    if rhs_rank != lhs.rank() {
        return Err(KGroupError::RankMismatch { lhs: lhs.rank(), rhs: rhs_rank });
    }
    let irr_a = action.base().clone();
    let phi = phi_matrix(setting, &orbits, &irr_a, &lhs, &rhs, tol)?;
    let bijective = phi.is_permutation();
    if !bijective {
        return Err(KGroupError::NotBijective(format!("matrix\n{phi}")));
    }
    let report = GSetReport {
        schema: REPORT_SCHEMA,
        points: x.size(),
        g_orbits: lhs.summands().iter().map(|s| [s.point, s.isotropy.order(), s.table.len()]).collect(),
        lhs_rank: lhs.rank(),
        tau_orbits: orbits.iter().zip(&rhs).map(|(d, k)| [d.representative, k.rank()]).collect(),
        rhs_rank,
        phi: phi.clone(),
        bijective,
    };
    Ok(GSetDecomposition { lhs, orbits, irr_a, rhs, phi, report })
}

fn phi_matrix<T: Real>(
    setting: &Setting,
    orbits: &[OrbitDatum<T>],
    irr_a: &IrrTable<T>,
    lhs: &TwistedKGroup<T>,
    rhs: &[TwistedKGroup<T>],
    tol: &Tolerances,
) -> Result<IntMatrix, KGroupError> {
    let x = lhs.gset();
    let twist = setting.twist_g::<T>();
    let lhs_offsets = lhs.offsets();
    let mut row0 = 0;
    let mut phi = IntMatrix::zeros(rhs.iter().map(TwistedKGroup::rank).sum(), lhs.rank());
    for (d, k) in orbits.iter().zip(rhs) {
        let tau = irr_a.irreducible(d.representative);
        let iso = &d.isotropy_embedding;
        for (sq, r) in k.summands().iter().zip(k.offsets()) {
            let y = sq.point;
            let i = lhs.summand_of(y);
            let sx = &lhs.summands()[i];
            let g = x.transporter(sx.point, y).expect("same orbit");
            // preimage of the stabilizer of y in Q_[τ]: G_y ∩ G_[τ]
            let s_elems: Vec<usize> = d.isotropy.elements().iter().copied().filter(|&s| x.act(s, y) == y).collect();
            let s = SubgroupHandle::from_elements(setting.group(), &s_elems)?;
            let (s_twist, s_emb) = twist.restrict(&s);
            for (w, rep) in sx.table.irreducibles().iter().enumerate() {
                let fibre = conjugate_rep(&twist, rep, &sx.embedding, g, &s_emb, s_twist.clone(), tol)?;
                let hom = hom_rep_on(
                    setting,
                    d,
                    tau,
                    &fibre,
                    |t| s_emb.from_parent(iso.to_parent(t)),
                    &sq.embedding.to_parent,
                    sq.twist.clone(),
                    tol,
                )?;
                if let Some(hom) = hom {
                    let mults = sq.table.decompose(&hom.rep.character(), tol.character)?;
                    for (j, m) in mults.into_iter().enumerate() {
                        phi.set(row0 + r + j, lhs_offsets[i] + w, m as i64);
                    }
                }
            }
        }
        row0 += k.rank();
    }
    Ok(phi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    /// `f*` on the G side.
    pub pullback: IntMatrix,
    /// `f*` on each `β`-twisted `Q_{[τ]}` side.
    pub decomposed: Vec<IntMatrix>,
    /// `Φ_X·f*`.
    pub lhs: IntMatrix,
    /// `(⊕ f*)·Φ_Y`.
    pub rhs: IntMatrix,
}

/// Checks `Φ_X ∘ f* = (⊕_{[τ]} f*) ∘ Φ_Y` for `f: X → Y`, both decompositions
/// computed from the same setting and options.
pub fn naturality_check<T: Real>(
    dx: &GSetDecomposition<T>,
    dy: &GSetDecomposition<T>,
    f: &GSetMap,
    tol: &Tolerances,
) -> Result<NaturalityReport, KGroupError> {
    if dx.orbits.len() != dy.orbits.len() {
        return Err(KGroupError::NotComposable);
    }
    let pullback = pullback_between(&dx.lhs, &dy.lhs, f, tol)?;
    let decomposed = dx
        .orbits
        .iter()
        .enumerate()
        .map(|(d, datum)| {
            let fq = f.descended(&datum.isotropy_embedding, &datum.quotient)?;
            pullback_between(&dx.rhs[d], &dy.rhs[d], &fq, tol)
        })
        .collect::<Result<Vec<_>, KGroupError>>()?;
    let lhs = dx.phi.mul(&pullback);
    let rhs = IntMatrix::block_diagonal(&decomposed).mul(&dy.phi);
    for row in 0..lhs.rows {
        for col in 0..lhs.cols {
            if lhs.get(row, col) != rhs.get(row, col) {
                return Err(KGroupError::NotNatural { row, col, lhs: lhs.get(row, col), rhs: rhs.get(row, col) });
            }
        }
    }
    Ok(NaturalityReport { pullback, decomposed, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{dihedral_alpha, Cocycle};
    use crate::group::{normal_subgroups, FiniteGroup};
    use crate::kgroups::{random_gset_over, random_map_into};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setting(n: usize, seeds: &[usize]) -> Setting {
        let alpha = dihedral_alpha(n).unwrap();
        let a = SubgroupHandle::closure(alpha.group(), seeds).unwrap();
        Setting::new(alpha, a).unwrap()
    }

    #[test]
    fn point_matches_point_decomposition() {
        let s = setting(4, &[2]);
        let d = verify_gset_decomposition::<f64>(&s, &FiniteGSet::point(s.group()), &DecompositionOptions::default())
            .unwrap();
        assert_eq!(d.report.lhs_rank, 2);
        assert_eq!(d.report.rhs_rank, 2);
        assert!(d.phi.is_permutation());
    }

    #[test]
    fn swap_set_over_the_center() {
        let s = setting(4, &[2]);
        let x = FiniteGSet::from_generator_images(s.group(), 2, &[(1, vec![1, 0]), (4, vec![1, 0])]).unwrap();
        let d = verify_gset_decomposition::<f64>(&s, &x, &DecompositionOptions::default()).unwrap();
        assert_eq!(d.report.lhs_rank, d.report.rhs_rank);
    }

    #[test]
    fn a_must_act_trivially() {
        let s = setting(4, &[1]);
        let err = verify_gset_decomposition::<f64>(&s, &FiniteGSet::regular(s.group()), &DecompositionOptions::default())
            .unwrap_err();
        assert!(matches!(err, KGroupError::ANotTrivial { .. }));
    }

    #[test]
    fn empty_set_has_rank_zero() {
        let s = setting(4, &[1]);
        let d = verify_gset_decomposition::<f64>(&s, &FiniteGSet::empty(s.group()), &DecompositionOptions::default())
            .unwrap();
        assert_eq!((d.report.lhs_rank, d.report.rhs_rank), (0, 0));
    }

    #[test]
    fn naturality_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let opts = DecompositionOptions::default();
        let tol = Tolerances::default();
        for seeds in [&[1usize][..], &[2], &[]] {
            let s = setting(4, seeds);
            for _ in 0..3 {
                let y = random_gset_over(s.normal(), 4, &mut rng);
                let f = random_map_into(&y, s.normal(), 6, &mut rng);
                let dx = verify_gset_decomposition::<f64>(&s, f.source(), &opts).unwrap();
                let dy = verify_gset_decomposition::<f64>(&s, &y, &opts).unwrap();
                naturality_check(&dx, &dy, &f, &tol).unwrap();
            }
        }
    }

    #[test]
    fn untwisted_d12_free_quotient_orbits() {
        let g = FiniteGroup::dihedral(6).unwrap().into_shared();
        for a in normal_subgroups(&g) {
            let s = Setting::new(Cocycle::trivial(&g, 1), a.clone()).unwrap();
            let x = FiniteGSet::cosets(&a);
            let d = verify_gset_decomposition::<f64>(&s, &x, &DecompositionOptions::default()).unwrap();
            assert_eq!(d.report.lhs_rank, d.report.rhs_rank, "A = {:?}", a.elements());
        }
    }
}
