use std::collections::{HashMap, VecDeque};

use super::{FiniteGroup, GroupError, DEFAULT_CLOSURE_CAP};

impl FiniteGroup {
    /// Closure of permutation generators under composition, with the default cap.
    pub fn from_permutation_generators(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_permutation_generators_capped(degree, generators, DEFAULT_CLOSURE_CAP)
    }

    /// Closure of permutation generators. Products compose right to left:
    /// `(p·q)(i) = p(q(i))`. Element 0 is the identity permutation and the
    /// remaining elements appear in breadth-first order.
    pub fn from_permutation_generators_capped(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (index, p) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            let ok = p.len() == degree && p.iter().all(|&x| x < degree && !std::mem::replace(&mut seen[x], true));
            if !ok {
                return Err(GroupError::NotAPermutation { index, degree });
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let prod: Vec<usize> = (0..degree).map(|i| elements[x][g[i]]).collect();
                if !index.contains_key(&prod) {
                    if elements.len() >= cap {
                        return Err(GroupError::ClosureTooLarge { cap });
                    }
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let n = elements.len();
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..degree).map(|i| elements[a][elements[b][i]]).collect();
                mul[a * n + b] = index[&prod];
            }
        }
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        let gens = generators
            .iter()
            .enumerate()
            .take(26)
            .map(|(i, g)| (((b'a' + i as u8) as char).to_string(), index[g]))
            .collect();
        Ok(FiniteGroup::from_trusted_parts(n, mul, Some(labels), gens))
    }

    /// `D_{2n} = ⟨a, b | aⁿ = b² = 1, bab = a⁻¹⟩` with `index(aᵏbˡ) = k + n·l`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidDihedral);
        }
        let order = 2 * n;
        let mut mul = vec![0; order * order];
        for x in 0..order {
            let (k, l) = (x % n, x / n);
            for y in 0..order {
                let (m, r) = (y % n, y / n);
                // aᵏbˡ · aᵐbʳ = a^{k + (−1)ˡ m} b^{l+r}
                let exp = if l == 0 { k + m } else { k + n - m };
                mul[x * order + y] = exp % n + n * ((l + r) % 2);
            }
        }
        let labels = (0..order).map(|x| dihedral_label(x % n, x / n)).collect();
        let generators = vec![("a".to_string(), 1 % n), ("b".to_string(), n)];
        Ok(FiniteGroup::from_trusted_parts(order, mul, Some(labels), generators))
    }

    /// `Z/n = ⟨g⟩` with `index(gᵏ) = k`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidCyclic);
        }
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let labels = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        Ok(FiniteGroup::from_trusted_parts(n, mul, Some(labels), vec![("g".to_string(), 1 % n)]))
    }
}

fn dihedral_label(k: usize, l: usize) -> String {
    let a = match k {
        0 => String::new(),
        1 => "a".to_string(),
        _ => format!("a^{k}"),
    };
    match (a.is_empty(), l) {
        (true, 0) => "1".to_string(),
        (false, 0) => a,
        (true, _) => "b".to_string(),
        (false, _) => format!("{a} b"),
    }
}

/// Cycle notation with fixed points omitted; the identity prints as `()`.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
        out.push('(');
        out.push_str(&body.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

/// Parses `(0 1 2)(3 4)` into the permutation it denotes on `0..degree`.
/// Cycles compose right to left as functions: `(0 1)(1 2)` sends 2 to 0.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Vec<usize>, String> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(format!("expected `(` in `{text}`"));
        }
        let close = rest.find(')').ok_or_else(|| format!("unclosed cycle in `{text}`"))?;
        let inner = &rest[1..close];
        let cycle: Vec<usize> = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| format!("bad point `{s}` in `{text}`")))
            .collect::<Result<_, _>>()?;
        if let Some(bad) = cycle.iter().find(|&&x| x >= degree) {
            return Err(format!("point {bad} outside 0..{degree}"));
        }
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != cycle.len() {
            return Err(format!("repeated point in cycle `({inner})`"));
        }
        cycles.push(cycle);
        rest = rest[close + 1..].trim_start();
    }
    // rightmost cycle acts first
    for cycle in cycles.iter().rev() {
        let mut step: Vec<usize> = (0..degree).collect();
        for (i, &x) in cycle.iter().enumerate() {
            step[x] = cycle[(i + 1) % cycle.len()];
        }
        perm = perm.iter().map(|&x| step[x]).collect();
    }
    Ok(perm)
}

/// Brute-force isomorphism test, extending a map from a generating set of `g`.
pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    if g.order() != h.order() {
        return false;
    }
    let mut g_orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let mut h_orders: Vec<usize> = h.elements().map(|x| h.element_order(x)).collect();
    g_orders.sort_unstable();
    h_orders.sort_unstable();
    if g_orders != h_orders {
        return false;
    }
    let gens = small_generating_set(g);
    let h_elements: Vec<usize> = h.elements().collect();
    let mut images = vec![0usize; gens.len()];
    search_images(g, h, &gens, &h_elements, 0, &mut images)
}

fn small_generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    for x in g.elements() {
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        span = super::subgroup::closure_elements(g, &gens);
        if span.len() == g.order() {
            break;
        }
    }
    gens
}

fn search_images(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    candidates: &[usize],
    depth: usize,
    images: &mut Vec<usize>,
) -> bool {
    if depth == gens.len() {
        return extends_to_isomorphism(g, h, gens, images);
    }
    let want = g.element_order(gens[depth]);
    for &c in candidates {
        if h.element_order(c) == want {
            images[depth] = c;
            if search_images(g, h, gens, candidates, depth + 1, images) {
                return true;
            }
        }
    }
    false
}

fn extends_to_isomorphism(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize]) -> bool {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (s, t) in gens.iter().zip(images) {
            let y = g.mul(x, *s);
            let image = h.mul(map[x], *t);
            if map[y] == usize::MAX {
                map[y] = image;
                queue.push_back(y);
            } else if map[y] != image {
                return false;
            }
        }
    }
    let mut hit = vec![false; n];
    for &m in &map {
        if m == usize::MAX || std::mem::replace(&mut hit[m], true) {
            return false;
        }
    }
    g.elements().all(|a| g.elements().all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])))
}
