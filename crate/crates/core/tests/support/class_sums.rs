//! Character degrees of an ordinary finite group from its class sums alone.
//!
//! A generic self-adjoint element `z` of the center of `C[G]` acts on the
//! regular representation with one eigenvalue per irreducible character `χ`,
//! of multiplicity `χ(1)²`. Nothing here touches the library under test.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

pub fn conjugacy_classes(order: usize, mul: &dyn Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    let inv = |g: usize| (0..order).find(|&h| mul(g, h) == 0).expect("inverse exists");
    let mut seen = vec![false; order];
    let mut classes = Vec::new();
    for g in 0..order {
        if seen[g] {
            continue;
        }
        let mut class: Vec<usize> = (0..order).map(|x| mul(mul(x, g), inv(x))).collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            seen[c] = true;
        }
        classes.push(class);
    }
    classes
}

/// Sorted degrees. `mul` must be a group law with identity 0.
pub fn character_degrees(order: usize, mul: &dyn Fn(usize, usize) -> usize, seed: u64) -> Vec<usize> {
    let inv = |g: usize| (0..order).find(|&h| mul(g, h) == 0).expect("inverse exists");
    let classes = conjugacy_classes(order, mul);
    let class_of = |g: usize| classes.iter().position(|c| c.contains(&g)).expect("every element has a class");
    // small LCG, the coefficients only need to be generic
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let mut coeff = vec![None::<Complex<f64>>; classes.len()];
    for j in 0..classes.len() {
        if coeff[j].is_some() {
            continue;
        }
        let star = class_of(inv(classes[j][0]));
        if star == j {
            coeff[j] = Some(Complex::new(next(), 0.0));
        } else {
            let r = Complex::new(next(), next());
            coeff[j] = Some(r);
            coeff[star] = Some(r.conj());
        }
    }
    let mut l = DMatrix::<Complex<f64>>::zeros(order, order);
    for x in 0..order {
        let zx = coeff[class_of(x)].expect("assigned");
        for h in 0..order {
            l[(mul(x, h), h)] += zx;
        }
    }
    let mut eig: Vec<f64> = SymmetricEigen::new(l).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    let mut degrees = Vec::new();
    let mut run = 1;
    for w in 0..eig.len() {
        if w + 1 < eig.len() && (eig[w + 1] - eig[w]).abs() < 1e-7 {
            run += 1;
            continue;
        }
        let d = (run as f64).sqrt().round() as usize;
        assert_eq!(d * d, run, "eigenvalue multiplicity {run} is not a square");
        degrees.push(d);
        run = 1;
    }
    assert_eq!(degrees.len(), classes.len(), "eigenvalues failed to separate the characters");
    degrees.sort_unstable();
    degrees
}
