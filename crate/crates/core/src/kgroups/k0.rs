use super::gset::same_group;
use super::{FiniteGSet, GSetMap, IntMatrix, KGroupError};
use crate::cocycle::Twist;
use crate::group::{Embedding, SubgroupHandle};
use crate::linalg::CMatrix;
use crate::projrep::{irreducibles, IrrTable, ProjectiveRep};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// One orbit of the G-set and the twisted representation ring of its isotropy group.
#[derive(Debug, Clone)]
pub struct KSummand<T: Real = f64> {
    /// Smallest point of the orbit.
    pub point: usize,
    pub orbit: Vec<usize>,
    pub isotropy: SubgroupHandle,
    pub embedding: Embedding,
    /// The twist restricted to the isotropy group, standalone indexing.
    pub twist: Twist<T>,
    pub table: IrrTable<T>,
}

/// `K⁰` of a finite G-set twisted by `α`, as a free abelian group with a
/// basis of (orbit, irreducible of the isotropy group) pairs.
#[derive(Debug, Clone)]
pub struct TwistedKGroup<T: Real = f64> {
    twist: Twist<T>,
    gset: FiniteGSet,
    summands: Vec<KSummand<T>>,
    rank: usize,
}

impl<T: Real> TwistedKGroup<T> {
    pub fn twist(&self) -> &Twist<T> {
        &self.twist
    }

    pub fn gset(&self) -> &FiniteGSet {
        &self.gset
    }

    pub fn summands(&self) -> &[KSummand<T>] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Index of the first basis element of each summand.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.summands
            .iter()
            .map(|s| {
                let o = acc;
                acc += s.table.len();
                o
            })
            .collect()
    }

    pub fn summand_of(&self, x: usize) -> usize {
        self.summands.iter().position(|s| s.orbit.contains(&x)).expect("summands cover the set")
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.table.len()).collect()
    }
}

pub fn k0_of_gset<T: Real>(
    twist: &Twist<T>,
    x: &FiniteGSet,
    seed: u64,
    tol: &Tolerances,
) -> Result<TwistedKGroup<T>, KGroupError> {
    if !same_group(twist.group(), x.group()) {
        return Err(KGroupError::GroupMismatch);
    }
    let summands = x
        .orbits()
        .into_iter()
        .map(|orbit| {
            let point = orbit[0];
            let isotropy = x.stabilizer(point);
            let (sub_twist, embedding) = twist.restrict(&isotropy);
            let table = irreducibles(sub_twist.clone(), seed, tol)?;
            Ok(KSummand { point, orbit, isotropy, embedding, twist: sub_twist, table })
        })
        .collect::<Result<Vec<_>, KGroupError>>()?;
    let rank = summands.iter().map(|s| s.table.len()).sum();
    Ok(TwistedKGroup { twist: twist.clone(), gset: x.clone(), summands, rank })
}

/// `ρ` on `H` carried to `target ⊆ gHg⁻¹` by `h ↦ α(g⁻¹h,g)·α(g,g⁻¹h)⁻¹·ρ(g⁻¹hg)`.
/// `twist` lives on the ambient group, `target_twist` on `target`'s standalone group.
pub fn conjugate_rep<T: Real>(
    twist: &Twist<T>,
    rho: &ProjectiveRep<T>,
    domain: &Embedding,
    g: usize,
    target: &Embedding,
    target_twist: Twist<T>,
    tol: &Tolerances,
) -> Result<ProjectiveRep<T>, KGroupError> {
    let grp = twist.group();
    let gi = grp.inv(g);
    let matrices: Vec<CMatrix<T>> = target
        .to_parent
        .iter()
        .map(|&h| {
            let gih = grp.mul(gi, h);
            let k = domain.from_parent(grp.mul(gih, g)).ok_or(KGroupError::NotEquivariant { g, point: h })?;
            let z = twist.value(gih, g) * twist.value(g, gih).conj();
            Ok(rho.matrix(k).scale(z))
        })
        .collect::<Result<_, KGroupError>>()?;
    let rep = ProjectiveRep::new(target_twist, matrices)?;
    debug_assert!(rep.validate(&tol.scaled(1e2)).is_valid(), "conjugated representation breaks the twisted relation");
    Ok(rep)
}

/// Matrix of `f*: K(Y) → K(X)`, rows indexed by the basis of `K(X)` and
/// columns by the basis of `K(Y)`.
pub fn pullback_between<T: Real>(
    kx: &TwistedKGroup<T>,
    ky: &TwistedKGroup<T>,
    f: &GSetMap,
    tol: &Tolerances,
) -> Result<IntMatrix, KGroupError> {
    if f.source() != kx.gset() || f.target() != ky.gset() {
        return Err(KGroupError::NotComposable);
    }
    if !kx.twist().same_table(ky.twist(), tol.cocycle) {
        return Err(KGroupError::GroupMismatch);
    }
    let (ox, oy) = (kx.offsets(), ky.offsets());
    let mut out = IntMatrix::zeros(kx.rank(), ky.rank());
    for (i, sx) in kx.summands().iter().enumerate() {
        let image = f.image(sx.point);
        let j = ky.summand_of(image);
        let sy = &ky.summands()[j];
        let g = ky.gset().transporter(sy.point, image).expect("same orbit");
        for (t, rho) in sy.table.irreducibles().iter().enumerate() {
            let moved = conjugate_rep(ky.twist(), rho, &sy.embedding, g, &sx.embedding, sx.twist.clone(), tol)?;
            let mults = sx.table.decompose(&moved.character(), tol.character)?;
            for (s, m) in mults.into_iter().enumerate() {
                out.set(ox[i] + s, oy[j] + t, m as i64);
            }
        }
    }
    Ok(out)
}

pub fn pullback_matrix<T: Real>(
    twist: &Twist<T>,
    f: &GSetMap,
    seed: u64,
    tol: &Tolerances,
) -> Result<IntMatrix, KGroupError> {
    let kx = k0_of_gset(twist, f.source(), seed, tol)?;
    let ky = k0_of_gset(twist, f.target(), seed, tol)?;
    pullback_between(&kx, &ky, f, tol)
}
