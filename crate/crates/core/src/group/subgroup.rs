use std::collections::BTreeSet;
use std::sync::Arc;

use super::{FiniteGroup, GroupError};

/// A subgroup stored as the sorted list of its elements in the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupHandle {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
}

/// A subgroup re-indexed as a standalone group. Standalone index `i`
/// corresponds to the `i`-th smallest parent index, so identities match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub group: Arc<FiniteGroup>,
    pub to_parent: Vec<usize>,
    pub from_parent: Vec<Option<usize>>,
}

impl Embedding {
    pub fn to_parent(&self, x: usize) -> usize {
        self.to_parent[x]
    }

    pub fn from_parent(&self, g: usize) -> Option<usize> {
        self.from_parent[g]
    }
}

pub(crate) fn closure_elements(g: &FiniteGroup, seeds: &[usize]) -> Vec<usize> {
    let mut members = vec![false; g.order()];
    members[0] = true;
    let mut list = vec![0usize];
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        i += 1;
        for &s in seeds {
            let y = g.mul(x, s);
            if !members[y] {
                members[y] = true;
                list.push(y);
            }
        }
    }
    list.sort_unstable();
    list
}

impl SubgroupHandle {
    /// Smallest subgroup containing `seeds`.
    pub fn closure(parent: &Arc<FiniteGroup>, seeds: &[usize]) -> Result<Self, GroupError> {
        if let Some(&bad) = seeds.iter().find(|&&s| s >= parent.order()) {
            return Err(GroupError::BadElement(bad));
        }
        Ok(SubgroupHandle { parent: Arc::clone(parent), elements: closure_elements(parent, seeds) })
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        SubgroupHandle { parent: Arc::clone(parent), elements: parent.elements().collect() }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        SubgroupHandle { parent: Arc::clone(parent), elements: vec![0] }
    }

    /// Accepts an explicit element list if it is closed under products.
    pub fn from_elements(parent: &Arc<FiniteGroup>, elements: &[usize]) -> Result<Self, GroupError> {
        let closed = SubgroupHandle::closure(parent, elements)?;
        let given: BTreeSet<usize> = elements.iter().copied().chain([0]).collect();
        if closed.elements.len() != given.len() {
            let outside = closed.elements.iter().copied().find(|x| !given.contains(x)).unwrap_or(0);
            return Err(GroupError::BadElement(outside));
        }
        Ok(closed)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupHandle) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// First `(g, a)` with `g·a·g⁻¹ ∉ self`.
    pub fn normality_violation(&self) -> Option<(usize, usize)> {
        let p = &self.parent;
        for g in p.elements() {
            for &a in &self.elements {
                if !self.contains(p.mul(p.mul(g, a), p.inv(g))) {
                    return Some((g, a));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_violation().is_none()
    }

    /// Checks normality inside an intermediate subgroup `ambient ⊇ self`.
    pub fn is_normal_in(&self, ambient: &SubgroupHandle) -> bool {
        let p = &self.parent;
        self.is_subgroup_of(ambient)
            && ambient
                .elements
                .iter()
                .all(|&g| self.elements.iter().all(|&a| self.contains(p.mul(p.mul(g, a), p.inv(g)))))
    }

    /// `g⁻¹·H·g`.
    pub fn conjugate_by(&self, g: usize) -> SubgroupHandle {
        let mut elements: Vec<usize> = self.elements.iter().map(|&h| self.parent.conjugate(h, g)).collect();
        elements.sort_unstable();
        SubgroupHandle { parent: Arc::clone(&self.parent), elements }
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|&g| self.parent.label(g)).collect()
    }

    /// The subgroup as a standalone group. Parent labels are kept and parent
    /// generators lying in the subgroup stay usable in element words.
    pub fn embedding(&self) -> Embedding {
        let n = self.order();
        let p = &self.parent;
        let mut from_parent = vec![None; p.order()];
        for (i, &g) in self.elements.iter().enumerate() {
            from_parent[g] = Some(i);
        }
        let mut mul = vec![0; n * n];
        for (i, &x) in self.elements.iter().enumerate() {
            for (j, &y) in self.elements.iter().enumerate() {
                mul[i * n + j] = from_parent[p.mul(x, y)].expect("subgroup closed under products");
            }
        }
        let labels = self.elements.iter().map(|&g| p.label(g)).collect();
        let generators = p
            .generators()
            .iter()
            .filter_map(|(name, g)| from_parent[*g].map(|i| (name.clone(), i)))
            .collect();
        let group = Arc::new(FiniteGroup::from_trusted_parts(n, mul, Some(labels), generators));
        Embedding { group, to_parent: self.elements.clone(), from_parent }
    }
}

/// Every subgroup, sorted by order and then by element list.
pub fn all_subgroups(parent: &Arc<FiniteGroup>) -> Vec<SubgroupHandle> {
    let mut found: BTreeSet<Vec<usize>> = parent.elements().map(|g| closure_elements(parent, &[g])).collect();
    let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
    let cyclic: Vec<usize> = parent.elements().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for &g in &cyclic {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut seeds = h.clone();
                seeds.push(g);
                let joined = closure_elements(parent, &seeds);
                if found.insert(joined.clone()) {
                    next.push(joined);
                }
            }
        }
        frontier = next;
    }
    let mut subgroups: Vec<SubgroupHandle> =
        found.into_iter().map(|elements| SubgroupHandle { parent: Arc::clone(parent), elements }).collect();
    subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    subgroups
}

pub fn normal_subgroups(parent: &Arc<FiniteGroup>) -> Vec<SubgroupHandle> {
    all_subgroups(parent).into_iter().filter(SubgroupHandle::is_normal).collect()
}

pub fn center(parent: &Arc<FiniteGroup>) -> SubgroupHandle {
    SubgroupHandle { parent: Arc::clone(parent), elements: parent.center_elements() }
}
