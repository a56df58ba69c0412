use std::collections::VecDeque;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::KGroupError;
use crate::group::{all_subgroups, Embedding, FiniteGroup, QuotientWithSection, SubgroupHandle};

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A finite set with a left action, stored as `images[g·size + x] = g·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGSet {
    group: Arc<FiniteGroup>,
    size: usize,
    images: Vec<usize>,
}

impl FiniteGSet {
    /// Full table: `table[g][x] = g·x`. The action laws are checked exhaustively.
    pub fn from_table(group: &Arc<FiniteGroup>, size: usize, table: &[Vec<usize>]) -> Result<Self, KGroupError> {
        if table.len() != group.order() {
            return Err(KGroupError::NotGenerating { found: table.len(), order: group.order() });
        }
        let mut images = Vec::with_capacity(group.order() * size);
        for (g, row) in table.iter().enumerate() {
            check_permutation(g, row, size)?;
            images.extend_from_slice(row);
        }
        let x = FiniteGSet { group: Arc::clone(group), size, images };
        x.check_laws()?;
        Ok(x)
    }

    /// Images of a few elements; the rest are forced by the action law, and the
    /// listed elements must generate the group.
    pub fn from_generator_images(
        group: &Arc<FiniteGroup>,
        size: usize,
        listed: &[(usize, Vec<usize>)],
    ) -> Result<Self, KGroupError> {
        for (g, p) in listed {
            check_permutation(*g, p, size)?;
        }
        let n = group.order();
        let mut perms: Vec<Option<Vec<usize>>> = vec![None; n];
        perms[0] = Some((0..size).collect());
        let mut queue = VecDeque::from([0usize]);
        let mut found = 1;
        while let Some(h) = queue.pop_front() {
            let ph = perms[h].clone().expect("queued elements have images");
            for (l, pl) in listed {
                let lh = group.mul(*l, h);
                let p: Vec<usize> = ph.iter().map(|&x| pl[x]).collect();
                match &perms[lh] {
                    Some(existing) => {
                        if let Some(x) = (0..size).find(|&x| existing[x] != p[x]) {
                            return Err(KGroupError::NotAnAction { g: *l, h, x });
                        }
                    }
                    None => {
                        perms[lh] = Some(p);
                        found += 1;
                        queue.push_back(lh);
                    }
                }
            }
        }
        if found < n {
            return Err(KGroupError::NotGenerating { found, order: n });
        }
        let images = perms.into_iter().flat_map(|p| p.expect("all reached")).collect();
        let x = FiniteGSet { group: Arc::clone(group), size, images };
        x.check_laws()?;
        Ok(x)
    }

    pub fn point(group: &Arc<FiniteGroup>) -> Self {
        FiniteGSet { group: Arc::clone(group), size: 1, images: vec![0; group.order()] }
    }

    pub fn empty(group: &Arc<FiniteGroup>) -> Self {
        FiniteGSet { group: Arc::clone(group), size: 0, images: Vec::new() }
    }

    /// Left cosets `G/K`, ordered by their smallest element.
    pub fn cosets(sub: &SubgroupHandle) -> Self {
        let group = sub.parent();
        let n = group.order();
        let (coset_of, reps) = coset_indices(sub);
        let size = reps.len();
        let mut images = vec![0; n * size];
        for g in 0..n {
            for (c, &r) in reps.iter().enumerate() {
                images[g * size + c] = coset_of[group.mul(g, r)];
            }
        }
        FiniteGSet { group: Arc::clone(group), size, images }
    }

    /// `G` acting on itself by left translation.
    pub fn regular(group: &Arc<FiniteGroup>) -> Self {
        Self::cosets(&SubgroupHandle::trivial(group))
    }

    /// A `G/N`-set seen as a `G`-set through the projection.
    pub fn pulled_back(quotient: &QuotientWithSection, qset: &FiniteGSet) -> Result<Self, KGroupError> {
        if !same_group(quotient.quotient(), &qset.group) {
            return Err(KGroupError::GroupMismatch);
        }
        let group = quotient.parent();
        let size = qset.size;
        let images = (0..group.order()).flat_map(|g| qset.row(quotient.project(g)).to_vec()).collect();
        Ok(FiniteGSet { group: Arc::clone(group), size, images })
    }

    /// The same points acted on by a subgroup, in the subgroup's standalone indexing.
    pub fn restricted(&self, emb: &Embedding) -> Self {
        let images = emb.to_parent.iter().flat_map(|&g| self.row(g).to_vec()).collect();
        FiniteGSet { group: Arc::clone(&emb.group), size: self.size, images }
    }

    /// For a set on which the kernel of `quotient` acts trivially, the induced
    /// action of the quotient: `q·x = σ(q)·x`. `quotient.parent()` is the
    /// standalone group of `emb`.
    pub fn descended(&self, emb: &Embedding, quotient: &QuotientWithSection) -> Result<Self, KGroupError> {
        let kernel: Vec<usize> = quotient.kernel().elements().iter().map(|&k| emb.to_parent(k)).collect();
        if let Some((a, point)) = self.moved_by(&kernel) {
            return Err(KGroupError::ANotTrivial { a, point });
        }
        let q = quotient.quotient();
        let images = (0..q.order()).flat_map(|c| self.row(emb.to_parent(quotient.section(c))).to_vec()).collect();
        Ok(FiniteGSet { group: Arc::clone(q), size: self.size, images })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.images[g * self.size + x]
    }

    pub fn row(&self, g: usize) -> &[usize] {
        &self.images[g * self.size..(g + 1) * self.size]
    }

    /// Orbits as sorted point lists, ordered by their smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> SubgroupHandle {
        let elements: Vec<usize> = self.group.elements().filter(|&g| self.act(g, x) == x).collect();
        SubgroupHandle::from_elements(&self.group, &elements).expect("stabilizers are subgroups")
    }

    /// Smallest `g` with `g·x = y`.
    pub fn transporter(&self, x: usize, y: usize) -> Option<usize> {
        self.group.elements().find(|&g| self.act(g, x) == y)
    }

    /// First `(a, x)` with `a·x ≠ x` among the given elements.
    pub fn moved_by(&self, elements: &[usize]) -> Option<(usize, usize)> {
        elements.iter().find_map(|&a| (0..self.size).find(|&x| self.act(a, x) != x).map(|x| (a, x)))
    }

    pub fn is_trivial_on(&self, sub: &SubgroupHandle) -> bool {
        self.moved_by(sub.elements()).is_none()
    }

    /// Points of `other` are shifted by `self.size()`.
    pub fn disjoint_union(&self, other: &FiniteGSet) -> Result<Self, KGroupError> {
        if !same_group(&self.group, &other.group) {
            return Err(KGroupError::GroupMismatch);
        }
        let size = self.size + other.size;
        let images = self
            .group
            .elements()
            .flat_map(|g| {
                let mut row = self.row(g).to_vec();
                row.extend(other.row(g).iter().map(|&y| y + self.size));
                row
            })
            .collect();
        Ok(FiniteGSet { group: Arc::clone(&self.group), size, images })
    }

    /// Renames point `x` to `perm[x]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, KGroupError> {
        check_permutation(0, perm, self.size)?;
        let mut images = vec![0; self.images.len()];
        for g in self.group.elements() {
            for x in 0..self.size {
                images[g * self.size + perm[x]] = perm[self.act(g, x)];
            }
        }
        Ok(FiniteGSet { group: Arc::clone(&self.group), size: self.size, images })
    }

    fn check_laws(&self) -> Result<(), KGroupError> {
        if let Some(x) = (0..self.size).find(|&x| self.act(0, x) != x) {
            return Err(KGroupError::IdentityMoves(x));
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                if let Some(x) = (0..self.size).find(|&x| self.act(gh, x) != self.act(g, self.act(h, x))) {
                    return Err(KGroupError::NotAnAction { g, h, x });
                }
            }
        }
        Ok(())
    }
}

fn check_permutation(element: usize, images: &[usize], size: usize) -> Result<(), KGroupError> {
    if images.len() != size {
        return Err(KGroupError::MapSize { got: images.len(), size });
    }
    let mut hit = vec![false; size];
    for &y in images {
        if y >= size {
            return Err(KGroupError::PointOutOfRange { point: y, size });
        }
        if hit[y] {
            return Err(KGroupError::NotAPermutation { element });
        }
        hit[y] = true;
    }
    Ok(())
}

/// Coset index of every element and the smallest element of each coset.
fn coset_indices(sub: &SubgroupHandle) -> (Vec<usize>, Vec<usize>) {
    let group = sub.parent();
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for g in group.elements() {
        if coset_of[g] != usize::MAX {
            continue;
        }
        for &k in sub.elements() {
            coset_of[group.mul(g, k)] = reps.len();
        }
        reps.push(g);
    }
    (coset_of, reps)
}

/// An equivariant map between two G-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSetMap {
    source: FiniteGSet,
    target: FiniteGSet,
    map: Vec<usize>,
}

impl GSetMap {
    /// Checks equivariance exhaustively.
    pub fn new(source: FiniteGSet, target: FiniteGSet, map: Vec<usize>) -> Result<Self, KGroupError> {
        if !same_group(&source.group, &target.group) {
            return Err(KGroupError::GroupMismatch);
        }
        if map.len() != source.size {
            return Err(KGroupError::MapSize { got: map.len(), size: source.size });
        }
        if let Some(&y) = map.iter().find(|&&y| y >= target.size) {
            return Err(KGroupError::PointOutOfRange { point: y, size: target.size });
        }
        for g in source.group.elements() {
            if let Some(point) = (0..source.size).find(|&x| map[source.act(g, x)] != target.act(g, map[x])) {
                return Err(KGroupError::NotEquivariant { g, point });
            }
        }
        Ok(GSetMap { source, target, map })
    }

    pub fn identity(x: &FiniteGSet) -> Self {
        GSetMap { source: x.clone(), target: x.clone(), map: (0..x.size).collect() }
    }

    /// `X → point`.
    pub fn collapse(x: &FiniteGSet) -> Self {
        GSetMap { source: x.clone(), target: FiniteGSet::point(&x.group), map: vec![0; x.size] }
    }

    /// `G/K → Y`, `gK ↦ g·y`; requires `K ⊆ Stab(y)`.
    pub fn from_coset_space(sub: &SubgroupHandle, target: &FiniteGSet, y: usize) -> Result<Self, KGroupError> {
        let source = FiniteGSet::cosets(sub);
        let (_, reps) = coset_indices(sub);
        let map = reps.iter().map(|&g| target.act(g, y)).collect();
        GSetMap::new(source, target.clone(), map)
    }

    pub fn source(&self) -> &FiniteGSet {
        &self.source
    }

    pub fn target(&self) -> &FiniteGSet {
        &self.target
    }

    pub fn image(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GSetMap) -> Result<GSetMap, KGroupError> {
        if self.target != next.source {
            return Err(KGroupError::NotComposable);
        }
        Ok(GSetMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        })
    }

    /// Sum of two maps on disjoint unions.
    pub fn disjoint_union(&self, other: &GSetMap) -> Result<GSetMap, KGroupError> {
        let source = self.source.disjoint_union(&other.source)?;
        let target = self.target.disjoint_union(&other.target)?;
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|&y| y + self.target.size));
        Ok(GSetMap { source, target, map })
    }

    /// The same map between the descended sets.
    pub fn descended(&self, emb: &Embedding, quotient: &QuotientWithSection) -> Result<GSetMap, KGroupError> {
        Ok(GSetMap {
            source: self.source.descended(emb, quotient)?,
            target: self.target.descended(emb, quotient)?,
            map: self.map.clone(),
        })
    }
}

fn subgroups_between(containing: &SubgroupHandle, within: &SubgroupHandle) -> Vec<SubgroupHandle> {
    all_subgroups(within.parent())
        .into_iter()
        .filter(|k| containing.is_subgroup_of(k) && k.is_subgroup_of(within))
        .collect()
}

/// A disjoint union of one to three coset spaces `G/K` with `containing ⊆ K`,
/// at most `max_size` points in total. Always at least one point when
/// `|G : containing| ≤ max_size`.
pub fn random_gset_over<R: Rng>(containing: &SubgroupHandle, max_size: usize, rng: &mut R) -> FiniteGSet {
    let group = containing.parent();
    let whole = SubgroupHandle::whole(group);
    let candidates = subgroups_between(containing, &whole);
    let parts = rng.random_range(1..=3);
    let mut x = FiniteGSet::empty(group);
    for _ in 0..parts {
        let room = max_size - x.size;
        let fitting: Vec<&SubgroupHandle> = candidates.iter().filter(|k| k.index() <= room).collect();
        match fitting.choose(rng) {
            Some(k) => x = x.disjoint_union(&FiniteGSet::cosets(k)).expect("same group"),
            None => break,
        }
    }
    x
}

/// A random equivariant map into `target` from a union of coset spaces `G/K`
/// with `containing ⊆ K ⊆ Stab(y)`, at most `max_size` source points. The
/// source is empty when `target` is.
pub fn random_map_into<R: Rng>(
    target: &FiniteGSet,
    containing: &SubgroupHandle,
    max_size: usize,
    rng: &mut R,
) -> GSetMap {
    let group = target.group();
    let mut f = GSetMap { source: FiniteGSet::empty(group), target: target.clone(), map: Vec::new() };
    if target.size() == 0 {
        return f;
    }
    let parts = rng.random_range(1..=3);
    for _ in 0..parts {
        let y = rng.random_range(0..target.size());
        let room = max_size - f.source.size;
        let options: Vec<SubgroupHandle> = subgroups_between(containing, &target.stabilizer(y))
            .into_iter()
            .filter(|k| k.index() <= room)
            .collect();
        let Some(k) = options.choose(rng) else { continue };
        let piece = GSetMap::from_coset_space(k, target, y).expect("stabilizer contains K");
        let offset = f.source.size;
        f.source = f.source.disjoint_union(&piece.source).expect("same group");
        f.map.extend(piece.map.iter().copied());
        debug_assert_eq!(f.map.len(), offset + piece.source.size);
    }
    f
}
