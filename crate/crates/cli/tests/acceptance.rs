//! Acceptance criteria, one PASS/FAIL line each. Run with `--nocapture` to see them.

#[path = "../../core/tests/support/class_sums.rs"]
mod class_sums;

use std::f64::consts::TAU;
use std::process::Command;

use serde_json::Value;
use twistdecomp::decomposition::{build_action, PointDecomposition};
use twistdecomp::formats::{parse_cocycle_spec, parse_group_spec, parse_subgroup_words};
use twistdecomp::group::normal_subgroups;
use twistdecomp::{
    irreducibles, verify_point_decomposition, AlphaCharacter, DecompositionOptions, PhaseConvention, Setting, Tolerances,
};

const CHARACTER_TOL: f64 = 1e-6;
const COCYCLE_TOL: f64 = 1e-8;
const SEED: u64 = 0;
const GSET_CASES: usize = 50;
const CHAINS: usize = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_twistdecomp"))
        .args(args)
        .env_remove("TWISTDECOMP_TOL_SCALE")
        .output()
        .expect("binary runs");
    (o.status.code(), o.stdout)
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    match cli(args) {
        (Some(0), out) => serde_json::from_slice(&out).map_err(|e| e.to_string()),
        (code, _) => Err(format!("{args:?} exited with {code:?}")),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn setting(group: &str, normal: &str, cocycle: &str) -> Setting {
    let g = parse_group_spec(group).expect("group").into_shared();
    let alpha = parse_cocycle_spec(cocycle, &g).expect("cocycle");
    let a = parse_subgroup_words(&g, normal).expect("subgroup");
    Setting::new(alpha, a).expect("normal subgroup")
}

fn decompose(s: &Setting, convention: PhaseConvention, lattice: Option<u32>) -> Result<PointDecomposition<f64>, String> {
    let options = DecompositionOptions { seed: SEED, convention, tolerances: Tolerances::default(), coboundary_lattice: lattice };
    verify_point_decomposition::<f64>(s, &options).map_err(|e| e.to_string())
}

/// Trace of `τ_i(a^k b^l) = A_i^k B_i^l`: `ε^{ik} + ε^{(1-i)k}` for `l = 0`, zero otherwise.
fn explicit_character(n: usize, i: usize) -> Vec<[f64; 2]> {
    (0..2 * n)
        .map(|x| {
            if x >= n {
                return [0.0, 0.0];
            }
            let k = x as f64;
            let t1 = TAU * i as f64 * k / n as f64;
            let t2 = TAU * (1.0 - i as f64) * k / n as f64;
            [t1.cos() + t2.cos(), t1.sin() + t2.sin()]
        })
        .collect()
}

fn exported_character(irr: &Value) -> Vec<[f64; 2]> {
    irr["character"]
        .as_array()
        .expect("character list")
        .iter()
        .map(|c| [c["value"][0].as_f64().unwrap(), c["value"][1].as_f64().unwrap()])
        .collect()
}

fn char_distance(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x[0] - y[0]).hypot(x[1] - y[1])).fold(0.0, f64::max)
}

/// Index in the table of `τ_i` for the given group order, by character.
fn tau_index(d: &PointDecomposition<f64>, n: usize, i: usize) -> Option<usize> {
    let target = explicit_character(n, i);
    d.irr_g.characters().iter().position(|c| {
        let v: Vec<[f64; 2]> = c.values.iter().map(|z| [z.re, z.im]).collect();
        char_distance(&v, &target) < CHARACTER_TOL
    })
}

fn criterion_1() -> Outcome {
    for n in [2, 4, 6, 8, 10] {
        let v = cli_json(&["irr", &format!("dihedral:{n}"), &format!("dihedral_alpha:{n}"), "--format=json"])?;
        let dims: Vec<u64> = v["dimensions"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect();
        ensure(dims.len() == n / 2 && dims.iter().all(|&d| d == 2), || format!("n={n}: dimensions {dims:?}"))?;
        ensure(v["sum_of_squares"] == 2 * n, || format!("n={n}: Σ dim² = {}", v["sum_of_squares"]))?;
        let exported: Vec<Vec<[f64; 2]>> = v["irreducibles"].as_array().unwrap().iter().map(exported_character).collect();
        let mut used = vec![false; exported.len()];
        for i in 1..=n / 2 {
            let target = explicit_character(n, i);
            let j = (0..exported.len())
                .find(|&j| !used[j] && char_distance(&exported[j], &target) < CHARACTER_TOL)
                .ok_or_else(|| format!("n={n}: no irreducible has the character of τ_{i}"))?;
            used[j] = true;
        }
    }
    Ok(format!("n ∈ {{2,4,6,8,10}}: n/2 irreducibles of dim 2, Σ dim² = 2n, characters of τ_i within {CHARACTER_TOL:e}"))
}

/// Index in `Irr(⟨a⟩)` of `ρ^k`, `ρ(a) = i`, for D_8 where `⟨a⟩ = {0,1,2,3}`.
fn rho_indices(d: &PointDecomposition<f64>) -> Result<Vec<usize>, String> {
    let base = d.action.base();
    (0..4)
        .map(|k| {
            let values = (0..4).map(|j| twistdecomp::scalar::root_of_unity::<f64>((k * j) as i64, 4)).collect();
            base.find(&AlphaCharacter { values }, CHARACTER_TOL).ok_or_else(|| format!("ρ^{k} not in Irr(A)"))
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let s = setting("dihedral:4", "a", "dihedral_alpha:4");
    let d = decompose(&s, PhaseConvention::Normalized, Some(8))?;
    let r = rho_indices(&d)?;
    let b = s.group().parse_word("b").unwrap();
    ensure(d.action.perm(b, r[1]) == r[0], || "b·ρ ≠ 1".into())?;
    ensure(d.action.perm(b, r[2]) == r[3], || "b·ρ² ≠ ρ³".into())?;
    let rep = &d.report;
    let mut orbits: Vec<Vec<usize>> = rep.orbits.iter().map(|o| {
        let mut m = o.members.clone();
        m.sort_unstable();
        m
    }).collect();
    orbits.sort();
    let mut expect = vec![vec![r[0], r[1]], vec![r[2], r[3]]];
    for o in &mut expect {
        o.sort_unstable();
    }
    expect.sort();
    ensure(orbits == expect, || format!("orbits {orbits:?}"))?;
    ensure(rep.orbits.iter().all(|o| o.isotropy_order == 4 && o.quotient_order == 1), || "isotropy is not A".into())?;
    ensure(d.orbits.iter().all(|o| o.isotropy.elements() == s.normal().elements()), || "isotropy is not A".into())?;
    ensure(rep.rank.lhs == 2 && rep.rank.per_orbit == vec![1, 1] && rep.rank.bijective, || format!("rank {:?}", rep.rank))?;
    for (i, members) in [(1, [r[0], r[1]]), (2, [r[2], r[3]])] {
        let w = tau_index(&d, 4, i).ok_or_else(|| format!("τ_{i} not found"))?;
        let m = rep.matching.iter().find(|m| m.w == w).ok_or("unmatched")?;
        let orbit = &rep.orbits[m.orbit].members;
        ensure(members.iter().all(|x| orbit.contains(x)), || format!("τ_{i} sent to orbit {orbit:?}"))?;
        let restricted = d.irr_g.character(w).restrict(s.a_embedding());
        let mult = d.action.base().decompose(&restricted, CHARACTER_TOL).map_err(|e| e.to_string())?;
        ensure(
            (0..4).all(|k| mult[r[k]] == usize::from(members.contains(&r[k]))),
            || format!("τ_{i}|_A multiplicities {mult:?}"),
        )?;
    }
    Ok("b·ρ = 1, b·ρ² = ρ³, orbits {1,ρ} {ρ²,ρ³}, G_[τ] = A, Q trivial, rank 2 = 1+1, τ₁ ↦ {1,ρ}, τ₂ ↦ {ρ²,ρ³}".into())
}

fn criterion_3() -> Outcome {
    let s = setting("dihedral:4", "a2", "dihedral_alpha:4");
    let d = decompose(&s, PhaseConvention::Normalized, Some(8))?;
    let rep = &d.report;
    ensure(rep.orbits.len() == 1, || format!("{} orbits", rep.orbits.len()))?;
    let o = &rep.orbits[0];
    let rotations = parse_subgroup_words(s.group(), "a").unwrap();
    ensure(d.orbits[0].isotropy.elements() == rotations.elements(), || format!("isotropy {:?}", o.isotropy))?;
    ensure(o.quotient_order == 2, || format!("|Q| = {}", o.quotient_order))?;
    let beta = d.orbits[0].beta.report();
    ensure(beta.normalization <= COCYCLE_TOL && beta.identity <= COCYCLE_TOL, || format!("β defects {beta:?}"))?;
    ensure(o.coboundary.is_some() && o.coboundary_lattice.is_some_and(|k| k <= 8), || "β not a coboundary in μ_8".into())?;
    ensure(o.beta_irreducible_dims.len() == 2, || format!("|Irr^β(Q)| = {}", o.beta_irreducible_dims.len()))?;
    let mut targets: Vec<usize> = rep.matching.iter().map(|m| m.beta_irreducible).collect();
    targets.sort_unstable();
    ensure(rep.matching.len() == 2 && targets == vec![0, 1] && rep.rank.bijective, || format!("matching {targets:?}"))?;
    Ok(format!("one orbit, G_[1] = ⟨a⟩, Q ≅ Z/2, β defect {:.1e}, coboundary in μ_8, 2 β-irreducibles, bijection", beta.identity))
}

fn criterion_4() -> Outcome {
    for n in [2, 4, 6, 8, 10] {
        let v = cli_json(&["decompose", &format!("dihedral:{n}"), "--A=a", &format!("dihedral_alpha:{n}"), "--format=json"])?;
        let orbits = v["orbits"].as_array().unwrap();
        ensure(orbits.len() == n / 2, || format!("n={n}: {} orbits", orbits.len()))?;
        ensure(
            orbits.iter().all(|o| o["members"].as_array().unwrap().len() == 2 && o["quotient_order"] == 1),
            || format!("n={n}: orbit sizes or Q wrong"),
        )?;
        ensure(v["rank"]["rhs"] == n / 2 && v["rank"]["per_orbit"].as_array().unwrap().iter().all(|r| r == 1), || {
            format!("n={n}: rank {}", v["rank"])
        })?;
    }
    Ok("n ∈ {2,4,6,8,10}: n/2 orbits of size 2, Q trivial, rank n/2".into())
}

/// `(group, cocycle)` pairs: dihedral n ≤ 12 with both cocycles, cyclic n ≤ 12.
fn test_matrix() -> Vec<(String, String)> {
    let mut m = Vec::new();
    for n in 1..=12 {
        m.push((format!("dihedral:{n}"), "trivial".to_string()));
        if n % 2 == 0 {
            m.push((format!("dihedral:{n}"), format!("dihedral_alpha:{n}")));
        }
        m.push((format!("cyclic:{n}"), "trivial".to_string()));
    }
    m
}

fn normal_settings(max_order: usize) -> Vec<(String, Setting)> {
    let mut out = Vec::new();
    for (group, cocycle) in test_matrix() {
        let g = parse_group_spec(&group).unwrap().into_shared();
        let alpha = parse_cocycle_spec(&cocycle, &g).unwrap();
        for a in normal_subgroups(&g).into_iter().filter(|a| a.order() <= max_order) {
            let label = format!("{group} {cocycle} A={:?}", a.labels());
            out.push((label, Setting::new(alpha.clone(), a).unwrap()));
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let conventions = [PhaseConvention::Normalized, PhaseConvention::Perturbed(1), PhaseConvention::Perturbed(2)];
    let mut worst = 0.0f64;
    let mut betas = 0;
    let settings = normal_settings(usize::MAX);
    for (label, s) in &settings {
        let mut reference: Option<Vec<(usize, usize)>> = None;
        for &c in &conventions {
            let d = decompose(s, c, None).map_err(|e| format!("{label}: {e}"))?;
            for o in &d.orbits {
                let r = o.beta.report();
                worst = worst.max(r.normalization).max(r.identity);
                betas += 1;
            }
            let mut sig: Vec<(usize, usize)> = d.report.matching.iter().map(|m| (m.w, m.orbit)).collect();
            sig.sort_unstable();
            ensure(d.report.rank.bijective, || format!("{label}: not bijective under {c:?}"))?;
            match &reference {
                None => reference = Some(sig),
                Some(r) => ensure(*r == sig, || format!("{label}: matching changes under {c:?}"))?,
            }
        }
    }
    ensure(worst <= COCYCLE_TOL, || format!("worst β defect {worst:e}"))?;
    Ok(format!("{betas} β over {} settings × 3 conventions, worst defect {worst:.1e} ≤ {COCYCLE_TOL:e}, matching identical", settings.len()))
}

fn criterion_6() -> Outcome {
    let tol = Tolerances::default();
    let matrix = test_matrix();
    for (group, cocycle) in &matrix {
        let g = parse_group_spec(group).unwrap().into_shared();
        let alpha = parse_cocycle_spec(cocycle, &g).unwrap();
        let t = irreducibles::<f64>(alpha.into(), SEED, &tol).map_err(|e| format!("{group} {cocycle}: {e}"))?;
        ensure(t.sum_of_squares() == g.order(), || format!("{group} {cocycle}: Σ dim² = {}", t.sum_of_squares()))?;
        if cocycle == "trivial" {
            let mut dims = t.dims();
            dims.sort_unstable();
            let oracle = class_sums::character_degrees(g.order(), &|x, y| g.mul(x, y), 1);
            ensure(dims == oracle, || format!("{group}: {dims:?} vs class sums {oracle:?}"))?;
        }
    }
    Ok(format!("{} (G, α) pairs: Σ dim² = |G|; trivial α degrees equal the class-sum oracle", matrix.len()))
}

fn criterion_7() -> Outcome {
    let tol = Tolerances::default();
    let settings = normal_settings(8);
    let mut checked = 0;
    for (label, s) in &settings {
        let action = build_action::<f64>(s, SEED, &tol).map_err(|e| format!("{label}: {e}"))?;
        let orbits = action.orbits();
        let irr_g = irreducibles::<f64>(s.twist_g(), SEED, &tol).map_err(|e| e.to_string())?;
        for (w, chi) in irr_g.characters().iter().enumerate() {
            let mult = action.base().decompose(&chi.restrict(s.a_embedding()), tol.character).map_err(|e| e.to_string())?;
            let support: Vec<usize> = (0..mult.len()).filter(|&i| mult[i] > 0).collect();
            let orbit = orbits.iter().find(|o| o.contains(&support[0])).expect("orbits cover Irr(A)");
            ensure(support.iter().all(|i| orbit.contains(i)), || format!("{label}: W{w} meets two orbits"))?;
            ensure(orbit.iter().all(|&i| mult[i] == mult[support[0]]), || format!("{label}: W{w} multiplicities {mult:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} irreducibles over {} (G, α, A ⊴ G, |A| ≤ 8): one orbit, equal multiplicities", settings.len()))
}

fn criterion_8() -> Outcome {
    let cases = GSET_CASES.to_string();
    let v = cli_json(&["verify", "random-gsets", "--cases", &cases, "--seed=0", "--format=json"])?;
    let rows = v["rows"].as_array().unwrap();
    let failed: Vec<&Value> = rows.iter().filter(|r| r["pass"] != true).collect();
    ensure(failed.is_empty(), || format!("{} failing rows, first {}", failed.len(), failed[0]))?;
    let chains = rows.iter().filter(|r| r["case"].as_str().unwrap().contains("chain")).count();
    let single = rows.len() - chains;
    ensure(single == GSET_CASES && chains >= CHAINS, || format!("{single} cases, {chains} chains"))?;
    Ok(format!("{single} G-set decompositions and {chains} two-map chains pass"))
}

fn criterion_9() -> Outcome {
    let args = ["decompose", "dihedral:4", "--A=a2", "dihedral_alpha:4", "--seed=0", "--format=json"];
    let (c1, a) = cli(&args);
    let (c2, b) = cli(&args);
    ensure(c1 == Some(0) && c2 == Some(0), || format!("exit codes {c1:?} {c2:?}"))?;
    ensure(a == b, || "outputs differ".into())?;
    Ok(format!("two runs, {} identical bytes", a.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("dihedral family irreducibles", criterion_1),
        ("D_8 over <a>", criterion_2),
        ("D_8 over <a^2>", criterion_3),
        ("D_2n over <a> orbits", criterion_4),
        ("induced cocycles across phase conventions", criterion_5),
        ("sum of squares and class-sum oracle", criterion_6),
        ("single-orbit restriction", criterion_7),
        ("G-set decomposition and functoriality", criterion_8),
        ("deterministic JSON", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
