//! Normalized 2-cocycles with values in roots of unity, their numeric
//! counterparts, central extensions and the τ correction scalar.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::group::{gcd, lcm, Embedding, FiniteGroup, QuotientWithSection, SubgroupHandle};
use crate::scalar::{real, root_of_unity, Real};

/// Largest lattice search `K'^{|Q|-1}` accepted by [`is_coboundary_brute`].
pub const COBOUNDARY_SEARCH_CAP: u64 = 24u64.pow(5);
/// Largest lattice order accepted by [`is_coboundary_brute`].
pub const COBOUNDARY_MAX_LATTICE: u32 = 24;
/// Violations kept in a report; the total count is always exact.
const REPORT_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CocycleError {
    #[error("dihedral cocycle needs an even n >= 2, got {0}")]
    OddN(usize),
    #[error("root-of-unity order must be positive")]
    ZeroOrder,
    #[error("table has {got} entries, expected {expected}")]
    BadTable { expected: usize, got: usize },
    #[error("not a normalized 2-cocycle: {0}")]
    Invalid(CocycleReport),
    #[error("search space {size} exceeds cap {cap}")]
    SearchSpaceTooLarge { size: u64, cap: u64 },
}

/// `e^{2πi·exponent/order}`, an element of `μ_order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct UnitScalar {
    exponent: u32,
    order: u32,
}

impl UnitScalar {
    pub fn new(exponent: i64, order: u32) -> Self {
        let order = order.max(1);
        UnitScalar { exponent: exponent.rem_euclid(i64::from(order)) as u32, order }
    }

    pub fn one() -> Self {
        UnitScalar { exponent: 0, order: 1 }
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }

    /// Same value written over `μ_order`; `order` must be a multiple of the current one.
    pub fn rescaled(&self, order: u32) -> Self {
        assert_eq!(order % self.order, 0, "μ_{} is not contained in μ_{order}", self.order);
        UnitScalar { exponent: self.exponent * (order / self.order), order }
    }

    /// Lowest-terms form, so equal values compare equal.
    pub fn reduced(&self) -> Self {
        let d = gcd(self.exponent as usize, self.order as usize).max(1) as u32;
        UnitScalar { exponent: self.exponent / d, order: self.order / d }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = lcm(self.order as usize, rhs.order as usize) as u32;
        let (a, b) = (self.rescaled(order), rhs.rescaled(order));
        UnitScalar::new(i64::from(a.exponent) + i64::from(b.exponent), order)
    }

    pub fn inv(&self) -> Self {
        UnitScalar::new(-i64::from(self.exponent), self.order)
    }

    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        root_of_unity(i64::from(self.exponent), self.order)
    }
}

impl fmt::Display for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        match (r.exponent, r.order) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (1, 4) => write!(f, "i"),
            (3, 4) => write!(f, "-i"),
            (k, n) => write!(f, "e^(2πi·{k}/{n})"),
        }
    }
}

/// Every failure of normalization or of the cocycle identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    /// Pairs `(g, 1)` or `(1, g)` with a nonzero exponent.
    pub normalization: Vec<(usize, usize)>,
    /// Triples `(g, h, k)` where `α(gh,k)α(g,h) ≠ α(g,hk)α(h,k)`.
    pub identity: Vec<(usize, usize, usize)>,
    pub normalization_count: usize,
    pub identity_count: usize,
}

impl CocycleReport {
    pub fn is_valid(&self) -> bool {
        self.normalization_count == 0 && self.identity_count == 0
    }

    fn push_normalization(&mut self, pair: (usize, usize)) {
        self.normalization_count += 1;
        if self.normalization.len() < REPORT_LIMIT {
            self.normalization.push(pair);
        }
    }

    fn push_identity(&mut self, triple: (usize, usize, usize)) {
        self.identity_count += 1;
        if self.identity.len() < REPORT_LIMIT {
            self.identity.push(triple);
        }
    }
}

impl fmt::Display for CocycleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        write!(f, "{} normalization and {} identity violations", self.normalization_count, self.identity_count)?;
        if let Some((g, h, k)) = self.identity.first() {
            write!(f, ", first at (g,h,k) = ({g},{h},{k})")?;
        } else if let Some((g, h)) = self.normalization.first() {
            write!(f, ", first at ({g},{h})")?;
        }
        Ok(())
    }
}

/// Checks a raw exponent table (row-major, `|G|²` entries) against the axioms.
pub fn validate_exponents(group: &FiniteGroup, order: u32, table: &[u32]) -> CocycleReport {
    let n = group.order();
    let k = order.max(1);
    let e = |g: usize, h: usize| table[g * n + h] % k;
    let mut report = CocycleReport::default();
    for g in 0..n {
        if e(g, 0) != 0 {
            report.push_normalization((g, 0));
        }
        if g != 0 && e(0, g) != 0 {
            report.push_normalization((0, g));
        }
    }
    for g in 0..n {
        for h in 0..n {
            let gh = group.mul(g, h);
            for x in 0..n {
                let lhs = e(gh, x) + e(g, h);
                let rhs = e(g, group.mul(h, x)) + e(h, x);
                if lhs % k != rhs % k {
                    report.push_identity((g, h, x));
                }
            }
        }
    }
    report
}

/// A normalized 2-cocycle `G × G → μ_K` stored as exponents mod `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    group: Arc<FiniteGroup>,
    order: u32,
    table: Vec<u32>,
}

impl Cocycle {
    pub fn trivial(group: &Arc<FiniteGroup>, order: u32) -> Self {
        let n = group.order();
        Cocycle { group: Arc::clone(group), order: order.max(1), table: vec![0; n * n] }
    }

    /// Validates and wraps a row-major exponent table.
    pub fn from_exponents(group: &Arc<FiniteGroup>, order: u32, exponents: &[i64]) -> Result<Self, CocycleError> {
        if order == 0 {
            return Err(CocycleError::ZeroOrder);
        }
        let n = group.order();
        if exponents.len() != n * n {
            return Err(CocycleError::BadTable { expected: n * n, got: exponents.len() });
        }
        let table: Vec<u32> = exponents.iter().map(|&x| x.rem_euclid(i64::from(order)) as u32).collect();
        let report = validate_exponents(group, order, &table);
        if !report.is_valid() {
            return Err(CocycleError::Invalid(report));
        }
        Ok(Cocycle { group: Arc::clone(group), order, table })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponents(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn exponent(&self, g: usize, h: usize) -> u32 {
        self.table[g * self.group.order() + h]
    }

    pub fn value(&self, g: usize, h: usize) -> UnitScalar {
        UnitScalar::new(i64::from(self.exponent(g, h)), self.order)
    }

    #[inline]
    pub fn complex<T: Real>(&self, g: usize, h: usize) -> Complex<T> {
        root_of_unity(i64::from(self.exponent(g, h)), self.order)
    }

    pub fn is_identically_one(&self) -> bool {
        self.table.iter().all(|&e| e == 0)
    }

    pub fn validate(&self) -> CocycleReport {
        validate_exponents(&self.group, self.order, &self.table)
    }

    /// Restriction to a subgroup, re-indexed as a standalone group.
    pub fn restrict(&self, sub: &SubgroupHandle) -> (Cocycle, Embedding) {
        assert!(Arc::ptr_eq(sub.parent(), &self.group) || **sub.parent() == *self.group);
        let emb = sub.embedding();
        let m = sub.order();
        let table = (0..m * m).map(|i| self.exponent(emb.to_parent[i / m], emb.to_parent[i % m])).collect();
        let restricted = Cocycle { group: Arc::clone(&emb.group), order: self.order, table };
        debug_assert!(restricted.validate().is_valid());
        (restricted, emb)
    }

    /// Same cocycle on an isomorphic copy of the group (identical indexing).
    pub fn with_group(&self, group: &Arc<FiniteGroup>) -> Cocycle {
        assert_eq!(group.order(), self.group.order());
        Cocycle { group: Arc::clone(group), order: self.order, table: self.table.clone() }
    }

    pub fn to_numeric<T: Real>(&self) -> NumericCocycle<T> {
        let n = self.group.order();
        let table = (0..n * n).map(|i| self.complex(i / n, i % n)).collect();
        NumericCocycle { group: Arc::clone(&self.group), table }
    }
}

/// The cocycle of the dihedral family: `α(aʲ, ·) = 1`, `α(aʲb, aᵏbˡ) = εᵏ`
/// with `ε = e^{2πi/n}`.
pub fn dihedral_alpha(n: usize) -> Result<Cocycle, CocycleError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(CocycleError::OddN(n));
    }
    let group = FiniteGroup::dihedral(n).expect("n >= 2").into_shared();
    let order = 2 * n;
    let mut table = vec![0u32; order * order];
    for x in n..order {
        for y in 0..order {
            table[x * order + y] = (y % n) as u32;
        }
    }
    let alpha = Cocycle { group, order: n as u32, table };
    debug_assert!(alpha.validate().is_valid());
    Ok(alpha)
}

/// `G̃_α`: pairs `(g, k)` encoded as `g·K + k`, multiplied by
/// `(g₁,k₁)(g₂,k₂) = (g₁g₂, α(g₁,g₂) + k₁ + k₂)`.
#[derive(Debug, Clone)]
pub struct CentralExtension {
    pub group: Arc<FiniteGroup>,
    pub base: Arc<FiniteGroup>,
    pub order: u32,
}

impl CentralExtension {
    pub fn new(alpha: &Cocycle) -> Self {
        let base = Arc::clone(alpha.group());
        let k = alpha.order() as usize;
        let n = base.order() * k;
        let mut mul = vec![0; n * n];
        for x in 0..n {
            let (g1, z1) = (x / k, x % k);
            for y in 0..n {
                let (g2, z2) = (y / k, y % k);
                let z = (alpha.exponent(g1, g2) as usize + z1 + z2) % k;
                mul[x * n + y] = base.mul(g1, g2) * k + z;
            }
        }
        let labels = (0..n).map(|x| format!("({}, {})", base.label(x / k), x % k)).collect();
        let group = FiniteGroup::from_trusted_parts(n, mul, Some(labels), Vec::new()).into_shared();
        CentralExtension { group, base, order: alpha.order() }
    }

    pub fn encode(&self, g: usize, k: u32) -> usize {
        g * self.order as usize + (k % self.order) as usize
    }

    /// Image of `e^{2πi k/K}` in the centre.
    pub fn central(&self, k: u32) -> usize {
        self.encode(0, k)
    }

    pub fn project(&self, x: usize) -> usize {
        x / self.order as usize
    }

    pub fn central_subgroup(&self) -> SubgroupHandle {
        SubgroupHandle::closure(&self.group, &[self.central(1 % self.order)]).expect("valid element")
    }
}

/// `τ(q₁,q₂) = α(σ(q₁q₂), χ(q₁,q₂))⁻¹ α(σ(q₁), σ(q₂))`, cross-checked against
/// `α(σ(q₁q₂)⁻¹, σ(q₁)σ(q₂)) α(σ(q₁q₂), σ(q₁q₂)⁻¹)⁻¹ α(σ(q₁), σ(q₂))`.
pub fn tau_scalar(alpha: &Cocycle, qs: &QuotientWithSection, q1: usize, q2: usize) -> UnitScalar {
    let g = alpha.group();
    let k = i64::from(alpha.order());
    let e = |x: usize, y: usize| i64::from(alpha.exponent(x, y));
    let s = qs.section(qs.quotient().mul(q1, q2));
    let (s1, s2) = (qs.section(q1), qs.section(q2));
    let chi = qs.chi(q1, q2);
    let short = (e(s1, s2) - e(s, chi)).rem_euclid(k);
    let long = (e(g.inv(s), g.mul(s1, s2)) - e(s, g.inv(s)) + e(s1, s2)).rem_euclid(k);
    assert_eq!(short, long, "the two expressions for τ({q1},{q2}) disagree");
    UnitScalar::new(short, alpha.order())
}

/// A 2-cocycle with unit complex values, as produced by intertwiner products.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCocycle<T: Real = f64> {
    group: Arc<FiniteGroup>,
    table: Vec<Complex<T>>,
}

/// Worst deviations of a numeric table from the cocycle axioms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericCocycleReport {
    pub normalization: f64,
    pub identity: f64,
    pub modulus: f64,
}

impl NumericCocycleReport {
    pub fn passes(&self, tol_cocycle: f64, tol_unitary: f64) -> bool {
        self.normalization <= tol_cocycle && self.identity <= tol_cocycle && self.modulus <= tol_unitary
    }
}

impl<T: Real> NumericCocycle<T> {
    pub fn from_values(group: &Arc<FiniteGroup>, table: Vec<Complex<T>>) -> Result<Self, CocycleError> {
        let n = group.order();
        if table.len() != n * n {
            return Err(CocycleError::BadTable { expected: n * n, got: table.len() });
        }
        Ok(NumericCocycle { group: Arc::clone(group), table })
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        let n = group.order();
        NumericCocycle { group: Arc::clone(group), table: vec![Complex::one(); n * n] }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn value(&self, g: usize, h: usize) -> Complex<T> {
        self.table[g * self.group.order() + h]
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.table
    }

    pub fn report(&self) -> NumericCocycleReport {
        let n = self.group.order();
        let one: Complex<T> = Complex::one();
        let to = |x: T| x.to_f64().unwrap_or(f64::INFINITY);
        let mut normalization = 0f64;
        let mut modulus = 0f64;
        for g in 0..n {
            normalization = normalization.max(to((self.value(g, 0) - one).norm())).max(to((self.value(0, g) - one).norm()));
            for h in 0..n {
                modulus = modulus.max(to((self.value(g, h).norm() - T::one()).abs()));
            }
        }
        let mut identity = 0f64;
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                let b_gh = self.value(g, h);
                for k in 0..n {
                    let lhs = self.value(gh, k) * b_gh;
                    let rhs = self.value(g, self.group.mul(h, k)) * self.value(h, k);
                    identity = identity.max(to((lhs - rhs).norm()));
                }
            }
        }
        NumericCocycleReport { normalization, identity, modulus }
    }

    /// Every entry within `tol` of `μ_order`, rewritten exactly; otherwise `None`.
    pub fn snap(&self, order: u32, tol: f64) -> Option<Cocycle> {
        let order = order.max(1);
        let mut exps = Vec::with_capacity(self.table.len());
        for z in &self.table {
            let theta = z.arg().to_f64()? / std::f64::consts::TAU;
            let k = (theta * f64::from(order)).round() as i64;
            let lattice: Complex<T> = root_of_unity(k, order);
            if (lattice - *z).norm().to_f64()? > tol {
                return None;
            }
            exps.push(k);
        }
        Cocycle::from_exponents(&self.group, order, &exps).ok()
    }

    /// Multiplies by the coboundary of `c`: `β'(g,h) = β(g,h)·c(g)c(h)/c(gh)`.
    pub fn times_coboundary(&self, c: &[Complex<T>]) -> Self {
        let n = self.group.order();
        let table =
            (0..n * n).map(|i| self.table[i] * c[i / n] * c[i % n] / c[self.group.mul(i / n, i % n)]).collect();
        NumericCocycle { group: Arc::clone(&self.group), table }
    }

    pub fn restrict(&self, sub: &SubgroupHandle) -> (NumericCocycle<T>, Embedding) {
        let emb = sub.embedding();
        let m = sub.order();
        let table = (0..m * m).map(|i| self.value(emb.to_parent[i / m], emb.to_parent[i % m])).collect();
        (NumericCocycle { group: Arc::clone(&emb.group), table }, emb)
    }

    pub fn with_group(&self, group: &Arc<FiniteGroup>) -> Self {
        assert_eq!(group.order(), self.group.order());
        NumericCocycle { group: Arc::clone(group), table: self.table.clone() }
    }
}

/// The twist a projective representation lives over.
#[derive(Debug, Clone, PartialEq)]
pub enum Twist<T: Real = f64> {
    Exact(Arc<Cocycle>),
    Numeric(Arc<NumericCocycle<T>>),
}

impl<T: Real> Twist<T> {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            Twist::Exact(c) => c.group(),
            Twist::Numeric(c) => c.group(),
        }
    }

    #[inline]
    pub fn value(&self, g: usize, h: usize) -> Complex<T> {
        match self {
            Twist::Exact(c) => c.complex(g, h),
            Twist::Numeric(c) => c.value(g, h),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Twist::Exact(_))
    }

    /// Whether two twists have the same table (the precondition for comparing characters).
    pub fn same_table(&self, other: &Twist<T>, tol: f64) -> bool {
        let n = self.group().order();
        if other.group().order() != n {
            return false;
        }
        match (self, other) {
            (Twist::Exact(a), Twist::Exact(b)) => {
                a.exponents().iter().zip(b.exponents()).all(|(x, y)| {
                    UnitScalar::new(i64::from(*x), a.order()).reduced() == UnitScalar::new(i64::from(*y), b.order()).reduced()
                })
            }
            _ => (0..n * n).all(|i| (self.value(i / n, i % n) - other.value(i / n, i % n)).norm() <= real(tol)),
        }
    }

    pub fn restrict(&self, sub: &SubgroupHandle) -> (Twist<T>, Embedding) {
        match self {
            Twist::Exact(c) => {
                let (r, e) = c.restrict(sub);
                (Twist::Exact(Arc::new(r)), e)
            }
            Twist::Numeric(c) => {
                let (r, e) = c.restrict(sub);
                (Twist::Numeric(Arc::new(r)), e)
            }
        }
    }
}

impl<T: Real> From<Cocycle> for Twist<T> {
    fn from(c: Cocycle) -> Self {
        Twist::Exact(Arc::new(c))
    }
}

impl<T: Real> From<NumericCocycle<T>> for Twist<T> {
    fn from(c: NumericCocycle<T>) -> Self {
        Twist::Numeric(Arc::new(c))
    }
}

/// Searches `c: Q → μ_{K'}` with `c(1) = 1` and `β(q₁,q₂) = c(q₁)c(q₂)c(q₁q₂)⁻¹`
/// within `tol`. Candidates are visited in lexicographic order of exponents,
/// so the first hit is deterministic. `Ok(None)` means no solution in that lattice.
pub fn is_coboundary_brute<T: Real>(
    beta: &NumericCocycle<T>,
    lattice_order: u32,
    tol: f64,
) -> Result<Option<Vec<UnitScalar>>, CocycleError> {
    let n = beta.group().order();
    let k = lattice_order.max(1);
    let size = u64::from(k).checked_pow(n.saturating_sub(1) as u32).unwrap_or(u64::MAX);
    if k > COBOUNDARY_MAX_LATTICE || size > COBOUNDARY_SEARCH_CAP {
        return Err(CocycleError::SearchSpaceTooLarge { size, cap: COBOUNDARY_SEARCH_CAP });
    }
    let roots: Vec<Complex<T>> = (0..k).map(|e| root_of_unity(i64::from(e), k)).collect();
    let mut exps = vec![0u32; n];
    if search_cochain(beta, &roots, &mut exps, 1, real(tol)) {
        Ok(Some(exps.iter().map(|&e| UnitScalar::new(i64::from(e), k)).collect()))
    } else {
        Ok(None)
    }
}

fn search_cochain<T: Real>(beta: &NumericCocycle<T>, roots: &[Complex<T>], exps: &mut [u32], next: usize, tol: T) -> bool {
    let n = exps.len();
    let g = beta.group();
    // pairs whose three entries are all assigned, with the newest index among them
    let consistent = |exps: &[u32], upto: usize| {
        for q1 in 0..=upto {
            for q2 in 0..=upto {
                let q12 = g.mul(q1, q2);
                if q12 > upto || (q1 != upto && q2 != upto && q12 != upto) {
                    continue;
                }
                let delta = roots[exps[q1] as usize] * roots[exps[q2] as usize] / roots[exps[q12] as usize];
                if (delta - beta.value(q1, q2)).norm() > tol {
                    return false;
                }
            }
        }
        true
    };
    if next == 0 || !consistent(exps, next - 1) {
        return false;
    }
    if next == n {
        return true;
    }
    for e in 0..roots.len() as u32 {
        exps[next] = e;
        if search_cochain(beta, roots, exps, next + 1, tol) {
            return true;
        }
    }
    exps[next] = 0;
    false
}
