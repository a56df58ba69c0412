use std::sync::Arc;

use super::{FiniteGroup, GroupError, SubgroupHandle};

/// `Q = G/A` with projection `π` and the minimum-index section `σ`.
/// Quotient indices follow the order of the cosets' smallest elements, so
/// the identity coset is index 0 and `σ(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientWithSection {
    kernel: SubgroupHandle,
    quotient: Arc<FiniteGroup>,
    projection: Vec<usize>,
    section: Vec<usize>,
}

impl QuotientWithSection {
    pub fn new(kernel: &SubgroupHandle) -> Result<Self, GroupError> {
        if let Some((conjugator, element)) = kernel.normality_violation() {
            return Err(GroupError::NotNormal { conjugator, element });
        }
        let g = kernel.parent();
        let mut projection = vec![usize::MAX; g.order()];
        let mut section = Vec::new();
        for x in g.elements() {
            if projection[x] != usize::MAX {
                continue;
            }
            // x is the smallest element of its coset x·A
            let q = section.len();
            section.push(x);
            for &a in kernel.elements() {
                projection[g.mul(x, a)] = q;
            }
        }
        let m = section.len();
        let mut mul = vec![0; m * m];
        for q1 in 0..m {
            for q2 in 0..m {
                mul[q1 * m + q2] = projection[g.mul(section[q1], section[q2])];
            }
        }
        let labels = section.iter().map(|&x| format!("[{}]", g.label(x))).collect();
        let mut generators: Vec<(String, usize)> = Vec::new();
        for (name, gen) in g.generators() {
            generators.push((name.clone(), projection[*gen]));
        }
        let quotient = Arc::new(FiniteGroup::from_trusted_parts(m, mul, Some(labels), generators));
        Ok(QuotientWithSection { kernel: kernel.clone(), quotient, projection, section })
    }

    /// Quotient of `G` by the subgroup generated by `seeds`.
    pub fn of_subgroup(parent: &Arc<FiniteGroup>, seeds: &[usize]) -> Result<Self, GroupError> {
        QuotientWithSection::new(&SubgroupHandle::closure(parent, seeds)?)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        self.kernel.parent()
    }

    pub fn kernel(&self) -> &SubgroupHandle {
        &self.kernel
    }

    pub fn quotient(&self) -> &Arc<FiniteGroup> {
        &self.quotient
    }

    #[inline]
    pub fn project(&self, g: usize) -> usize {
        self.projection[g]
    }

    #[inline]
    pub fn section(&self, q: usize) -> usize {
        self.section[q]
    }

    pub fn sections(&self) -> &[usize] {
        &self.section
    }

    /// Elements of the coset `q` in increasing order.
    pub fn coset(&self, q: usize) -> Vec<usize> {
        self.parent().elements().filter(|&g| self.projection[g] == q).collect()
    }

    /// `χ(q₁,q₂) = σ(q₁q₂)⁻¹σ(q₁)σ(q₂)`, an element of the kernel.
    pub fn chi(&self, q1: usize, q2: usize) -> usize {
        let g = self.parent();
        let q12 = self.quotient.mul(q1, q2);
        let value = g.mul(g.inv(self.section[q12]), g.mul(self.section[q1], self.section[q2]));
        assert!(self.kernel.contains(value), "χ({q1},{q2}) = {value} leaves the kernel");
        value
    }
}
