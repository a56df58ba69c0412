//! Irreducible projective representations by randomized splitting of the
//! twisted regular representation.

use std::sync::Arc;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{character_order, AlphaCharacter, ProjectiveRep, RepError};
use crate::cocycle::Twist;
use crate::group::FiniteGroup;
use crate::linalg::{cluster_eigenvalues, hermitian_eigen, CMatrix};
use crate::scalar::{real, Real};
use crate::tolerance::Tolerances;

/// Largest group order handled by the dense pipeline.
pub const MAX_IRREDUCIBLES_ORDER: usize = 512;
/// Extra attempts, each with the next seed, after a failed decomposition.
pub const SPLIT_RETRIES: usize = 5;

/// The irreducible representations over one twist, ordered by dimension and
/// then by rounded character values.
#[derive(Debug, Clone)]
pub struct IrrTable<T: Real = f64> {
    twist: Twist<T>,
    irreducibles: Vec<ProjectiveRep<T>>,
    characters: Vec<AlphaCharacter<T>>,
}

impl<T: Real> IrrTable<T> {
    pub fn twist(&self) -> &Twist<T> {
        &self.twist
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.twist.group()
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn irreducibles(&self) -> &[ProjectiveRep<T>] {
        &self.irreducibles
    }

    pub fn irreducible(&self, i: usize) -> &ProjectiveRep<T> {
        &self.irreducibles[i]
    }

    pub fn characters(&self) -> &[AlphaCharacter<T>] {
        &self.characters
    }

    pub fn character(&self, i: usize) -> &AlphaCharacter<T> {
        &self.characters[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.characters.iter().map(AlphaCharacter::dim).collect()
    }

    pub fn sum_of_squares(&self) -> usize {
        self.dims().iter().map(|d| d * d).sum()
    }

    /// Index of the irreducible whose character equals `chi` within `tol`.
    pub fn find(&self, chi: &AlphaCharacter<T>, tol: f64) -> Option<usize> {
        self.characters.iter().position(|c| c.approx_eq(chi, tol))
    }

    /// Multiplicity of every irreducible in `chi`.
    pub fn decompose(&self, chi: &AlphaCharacter<T>, tol: f64) -> Result<Vec<usize>, RepError> {
        self.characters.iter().map(|c| super::character_multiplicity(chi, c, tol)).collect()
    }

    /// Largest `|⟨χᵢ,χⱼ⟩ − δᵢⱼ|` over the table.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0f64;
        for (i, a) in self.characters.iter().enumerate() {
            for (j, b) in self.characters.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                let ip = a.inner(b);
                let d = (ip - Complex::new(real::<T>(target), T::zero())).norm();
                worst = worst.max(d.to_f64().unwrap_or(f64::INFINITY));
            }
        }
        worst
    }
}

/// [`irreducibles_with_retries`] with the default retry budget.
pub fn irreducibles<T: Real>(twist: Twist<T>, seed: u64, tol: &Tolerances) -> Result<IrrTable<T>, RepError> {
    irreducibles_with_retries(twist, seed, tol, SPLIT_RETRIES)
}

/// Decomposes the twisted regular representation. Each seed drives a random
/// Hermitian matrix averaged over the group; its eigenspaces are invariant and
/// are split recursively until every block has a one-dimensional commutant.
pub fn irreducibles_with_retries<T: Real>(
    twist: Twist<T>,
    seed: u64,
    tol: &Tolerances,
    retries: usize,
) -> Result<IrrTable<T>, RepError> {
    let order = twist.group().order();
    if order > MAX_IRREDUCIBLES_ORDER {
        return Err(RepError::TooLarge(order));
    }
    for attempt in 0..=retries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        if let Some(table) = attempt_decomposition(&twist, &mut rng, tol) {
            return Ok(table);
        }
    }
    Err(RepError::SplitFailure { attempts: retries + 1 })
}

fn attempt_decomposition<T: Real>(twist: &Twist<T>, rng: &mut ChaCha8Rng, tol: &Tolerances) -> Option<IrrTable<T>> {
    let g = twist.group();
    let n = g.order();
    // the first split uses the monomial structure of the regular representation
    let h = CMatrix::<T>::random_hermitian(n, rng);
    let mut t = CMatrix::<T>::zeros(n, n);
    for x in g.elements() {
        for a in 0..n {
            let ra = g.mul(x, a);
            let pa = twist.value(x, a);
            for b in 0..n {
                let rb = g.mul(x, b);
                t[(ra, rb)] = t[(ra, rb)] + pa * h[(a, b)] * twist.value(x, b).conj();
            }
        }
    }
    let t = t.scale(Complex::new(T::one() / real::<T>(n as f64), T::zero()));
    let regular = super::regular_rep(twist.clone());
    let mut leaves = Vec::new();
    for basis in eigenspaces(&t) {
        let block = compress_regular(twist, &basis);
        if !invariant(&regular, &basis, &block, tol) {
            return None;
        }
        split(block, rng, tol, n, &mut leaves)?;
    }

    let mut irreducibles: Vec<ProjectiveRep<T>> = Vec::new();
    let mut characters: Vec<AlphaCharacter<T>> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for leaf in leaves {
        let chi = leaf.character();
        match characters.iter().position(|c| c.approx_eq(&chi, tol.character)) {
            Some(i) => counts[i] += 1,
            None => {
                characters.push(chi);
                irreducibles.push(leaf);
                counts.push(1);
            }
        }
    }
    // every irreducible occurs in the regular representation as often as its dimension
    let dims_ok = characters.iter().zip(&counts).all(|(c, &k)| c.dim() == k);
    let sum: usize = characters.iter().map(|c| c.dim() * c.dim()).sum();
    if !dims_ok || sum != n {
        return None;
    }
    let mut entries: Vec<(ProjectiveRep<T>, AlphaCharacter<T>)> = irreducibles.into_iter().zip(characters).collect();
    entries.sort_by(|a, b| character_order(&a.1, &b.1));
    let (irreducibles, characters) = entries.into_iter().unzip();
    let table = IrrTable { twist: twist.clone(), irreducibles, characters };
    (table.orthonormality_defect() <= tol.character).then_some(table)
}

fn split<T: Real>(
    block: ProjectiveRep<T>,
    rng: &mut ChaCha8Rng,
    tol: &Tolerances,
    depth_budget: usize,
    out: &mut Vec<ProjectiveRep<T>>,
) -> Option<()> {
    if depth_budget == 0 {
        return None;
    }
    let d = block.dim();
    if d == 1 {
        out.push(block);
        return Some(());
    }
    for attempt in 0..3 {
        let h = CMatrix::<T>::random_hermitian(d, rng);
        let spaces = eigenspaces(&average(&block, &h));
        if spaces.len() == 1 {
            // a scalar average on the first draw almost always means irreducible
            if attempt == 0 && block.commutant_dimension() == 1 {
                out.push(block);
                return Some(());
            }
            continue;
        }
        for basis in spaces {
            let sub = block.compress(&basis);
            if !invariant(&block, &basis, &sub, tol) {
                return None;
            }
            split(sub, rng, tol, depth_budget - 1, out)?;
        }
        return Some(());
    }
    None
}

/// `(1/|G|)·Σ_g ρ(g)·H·ρ(g)†`, which commutes with every `ρ(g)`.
fn average<T: Real>(rep: &ProjectiveRep<T>, h: &CMatrix<T>) -> CMatrix<T> {
    let mut t = CMatrix::zeros(rep.dim(), rep.dim());
    for m in rep.matrices() {
        t.add_assign(&m.mul(h).mul(&m.adjoint()));
    }
    t.scale(Complex::new(T::one() / real::<T>(rep.matrices().len() as f64), T::zero()))
}

/// Orthonormal bases of the eigenspaces, in ascending eigenvalue order.
fn eigenspaces<T: Real>(t: &CMatrix<T>) -> Vec<CMatrix<T>> {
    let eig = hermitian_eigen(t);
    let scale = eig.values.iter().fold(T::zero(), |m, v| m.max(v.abs())).max(T::one());
    let gap = T::epsilon().sqrt() * real::<T>(10.0) * scale;
    cluster_eigenvalues(&eig.values, gap).into_iter().map(|cols| eig.vectors.select_columns(&cols)).collect()
}

/// `V†·ρ_reg(g)·V` using `ρ_reg(g)e_h = α(g,h)e_{gh}` row by row.
fn compress_regular<T: Real>(twist: &Twist<T>, basis: &CMatrix<T>) -> ProjectiveRep<T> {
    let g = twist.group();
    let (n, k) = (basis.rows(), basis.cols());
    let matrices = g
        .elements()
        .map(|x| {
            let mut image = CMatrix::zeros(n, k);
            for h in 0..n {
                let row = g.mul(x, h);
                let phase = twist.value(x, h);
                for c in 0..k {
                    image[(row, c)] = phase * basis[(h, c)];
                }
            }
            basis.adjoint_mul(&image)
        })
        .collect();
    ProjectiveRep::new(twist.clone(), matrices).expect("square blocks")
}

/// Residual of `ρ(g)V = V·block(g)`, the invariance of the chosen subspace.
fn invariant<T: Real>(rep: &ProjectiveRep<T>, basis: &CMatrix<T>, block: &ProjectiveRep<T>, tol: &Tolerances) -> bool {
    let bound = real::<T>(if rep.twist().is_exact() { tol.rep } else { tol.rep_numeric });
    rep.matrices().iter().zip(block.matrices()).all(|(m, b)| {
        let lhs = m.mul(basis);
        let rhs = basis.mul(b);
        lhs.max_abs_diff(&rhs) <= bound
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{dihedral_alpha, Cocycle};
    use crate::scalar::root_of_unity;

    #[test]
    fn cyclic_four_has_linear_characters() {
        let z4 = FiniteGroup::cyclic(4).unwrap().into_shared();
        let table = irreducibles::<f64>(Cocycle::trivial(&z4, 1).into(), 0, &Tolerances::default()).unwrap();
        assert_eq!(table.dims(), vec![1, 1, 1, 1]);
        for k in 0..4 {
            let chi = AlphaCharacter { values: (0..4).map(|x| root_of_unity::<f64>(k * x, 4)).collect() };
            assert!(table.find(&chi, 1e-6).is_some(), "missing character {k}");
        }
    }

    #[test]
    fn dihedral_alpha_family() {
        for n in [2usize, 4, 6, 8] {
            let alpha = dihedral_alpha(n).unwrap();
            let table = irreducibles::<f64>(alpha.into(), 0, &Tolerances::default()).unwrap();
            assert_eq!(table.dims(), vec![2; n / 2], "n = {n}");
            assert_eq!(table.sum_of_squares(), 2 * n);
            for rep in table.irreducibles() {
                assert!(rep.validate(&Tolerances::default()).is_valid());
            }
        }
    }

    #[test]
    fn single_precision_d8() {
        let alpha = dihedral_alpha(4).unwrap();
        let table = irreducibles::<f32>(alpha.into(), 0, &Tolerances::single_precision()).unwrap();
        assert_eq!(table.dims(), vec![2, 2]);
    }

    #[test]
    fn seeds_agree() {
        let t: Twist<f64> = Cocycle::trivial(&FiniteGroup::dihedral(4).unwrap().into_shared(), 1).into();
        let tol = Tolerances::default();
        let reference = irreducibles(t.clone(), 0, &tol).unwrap();
        assert_eq!(reference.dims(), vec![1, 1, 1, 1, 2]);
        for seed in [1, 2] {
            let other = irreducibles(t.clone(), seed, &tol).unwrap();
            for (a, b) in reference.characters().iter().zip(other.characters()) {
                assert!(a.approx_eq(b, 1e-6));
            }
        }
    }

    #[test]
    fn refuses_large_orders() {
        let big = FiniteGroup::cyclic(513).unwrap().into_shared();
        assert_eq!(
            irreducibles::<f64>(Cocycle::trivial(&big, 1).into(), 0, &Tolerances::default()).unwrap_err(),
            RepError::TooLarge(513)
        );
    }
}
