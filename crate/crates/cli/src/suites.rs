use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use twistdecomp::decomposition::{build_action, orbit_data, verify_point_decomposition, DecompositionOptions, PhaseConvention, Setting};
use twistdecomp::kgroups::{
    naturality_check, pullback_between, random_gset_over, random_map_into, verify_gset_decomposition, GSetMap,
};
use twistdecomp::{irreducibles, Tolerances};

use crate::commands::load_setting;
use crate::failure::{Failure, EXIT_DECOMPOSITION, EXIT_RANK};

pub struct SuiteParams {
    pub max_n: usize,
    pub group: Option<String>,
    pub normal: Option<String>,
    pub cocycle: Option<String>,
    pub cases: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub case: String,
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub schema: u32,
    pub suite: String,
    pub rows: Vec<Row>,
    #[serde(skip)]
    pub failure_code: u8,
}

impl SuiteOutcome {
    fn new(suite: &str, failure_code: u8) -> Self {
        SuiteOutcome { schema: 1, suite: suite.to_string(), rows: Vec::new(), failure_code }
    }

    fn push(&mut self, case: impl Into<String>, check: &str, pass: bool, detail: impl Into<String>) {
        self.rows.push(Row { case: case.into(), check: check.to_string(), pass, detail: detail.into() });
    }

    fn push_result<T>(&mut self, case: &str, check: &str, r: Result<T, String>, detail: impl FnOnce(&T) -> String) {
        match r {
            Ok(v) => {
                let d = detail(&v);
                self.push(case, check, true, d)
            }
            Err(e) => self.push(case, check, false, e),
        }
    }

    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite outcome serializes")
    }

    pub fn to_text(&self) -> String {
        let width = |s: &str| s.chars().count();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - width(s)));
        let cw = self.rows.iter().map(|r| width(&r.case)).max().unwrap_or(0);
        let kw = self.rows.iter().map(|r| width(&r.check)).max().unwrap_or(0);
        let mut s = format!("suite {}\n", self.suite);
        for r in &self.rows {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            s += &format!("{}  {}  {verdict}  {}\n", pad(&r.case, cw), pad(&r.check, kw), r.detail);
        }
        s += &format!("{} checks, {} failed\n", self.rows.len(), self.failed());
        s
    }
}

pub fn run(name: &str, p: &SuiteParams, tol: &Tolerances) -> Result<SuiteOutcome, Failure> {
    match name {
        "dihedral-family" => Ok(dihedral_family(p, tol)),
        "sum-of-squares" => sum_of_squares(p, tol),
        "action-laws" => action_laws(p, tol),
        "random-gsets" => Ok(random_gsets(p, tol)),
        "phase-robustness" => Ok(phase_robustness(p, tol)),
        other => Err(Failure::usage(format!(
            "unknown suite `{other}`; known: dihedral-family, sum-of-squares, action-laws, random-gsets, phase-robustness"
        ))),
    }
}

fn options(p: &SuiteParams, tol: &Tolerances, convention: PhaseConvention) -> DecompositionOptions {
    DecompositionOptions { seed: p.seed, convention, tolerances: *tol, coboundary_lattice: Some(8) }
}

fn dihedral_family(p: &SuiteParams, tol: &Tolerances) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("dihedral-family", EXIT_DECOMPOSITION);
    for n in (2..=p.max_n).step_by(2) {
        let case = format!("D_{}", 2 * n);
        let setting = match load_setting(&format!("dihedral:{n}"), "a", &format!("dihedral_alpha:{n}")) {
            Ok(s) => s,
            Err(f) => {
                out.push(case, "setup", false, f.message);
                continue;
            }
        };
        let irr = irreducibles::<f64>(setting.twist_g(), p.seed, tol).map_err(|e| e.to_string()).and_then(|t| {
            let dims = t.dims();
            if dims.len() == n / 2 && dims.iter().all(|&d| d == 2) && t.sum_of_squares() == 2 * n {
                Ok(dims)
            } else {
                Err(format!("dimensions {dims:?}"))
            }
        });
        out.push_result(&case, "irreducibles", irr, |d| format!("{} of dimension 2, Σ dim² = {}", d.len(), 4 * d.len()));
        let dec = verify_point_decomposition::<f64>(&setting, &options(p, tol, PhaseConvention::Normalized))
            .map_err(|e| e.to_string())
            .and_then(|r| {
                let o = &r.report.orbits;
                if o.len() == n / 2 && o.iter().all(|x| x.members.len() == 2 && x.quotient_order == 1) && r.report.rank.bijective {
                    Ok(r.report.rank.clone())
                } else {
                    Err(format!("{} orbits, sizes {:?}", o.len(), o.iter().map(|x| x.members.len()).collect::<Vec<_>>()))
                }
            });
        out.push_result(&case, "orbits over <a>", dec, |r| format!("{} orbits of size 2, rank {} = {}", r.per_orbit.len(), r.lhs, r.rhs));
    }
    out
}

fn sum_of_squares(p: &SuiteParams, tol: &Tolerances) -> Result<SuiteOutcome, Failure> {
    let group = p.group.clone().unwrap_or_else(|| "dihedral:6".into());
    let cocycle = p.cocycle.clone().unwrap_or_else(|| "trivial".into());
    let setting = load_setting(&group, "", &cocycle)?;
    let mut out = SuiteOutcome::new("sum-of-squares", EXIT_DECOMPOSITION);
    let order = setting.group().order();
    let r = irreducibles::<f64>(setting.twist_g(), p.seed, tol).map_err(|e| e.to_string()).and_then(|t| {
        let squares: Vec<String> = t.dims().iter().map(|d| (d * d).to_string()).collect();
        let line = format!("{} = {}", t.sum_of_squares(), squares.join("+"));
        if t.sum_of_squares() == order {
            Ok(line)
        } else {
            Err(format!("{line} but |G| = {order}"))
        }
    });
    out.push_result(&format!("{group} / {cocycle}"), "Σ dim² = |G|", r, |s| s.clone());
    Ok(out)
}

fn action_laws(p: &SuiteParams, tol: &Tolerances) -> Result<SuiteOutcome, Failure> {
    let group = p.group.clone().unwrap_or_else(|| "dihedral:4".into());
    let normal = p.normal.clone().unwrap_or_else(|| "a".into());
    let cocycle = p.cocycle.clone().unwrap_or_else(|| "dihedral_alpha:4".into());
    let setting = load_setting(&group, &normal, &cocycle)?;
    let case = format!("{group} A=<{normal}> {cocycle}");
    let mut out = SuiteOutcome::new("action-laws", EXIT_DECOMPOSITION);
    let action = match build_action::<f64>(&setting, p.seed, tol) {
        Ok(a) => a,
        Err(e) => {
            out.push(case, "action table", false, e.to_string());
            return Ok(out);
        }
    };
    let g = setting.group();
    let k = action.base().len();
    let identity = (0..k).all(|i| action.perm(0, i) == i);
    out.push(&case, "1·τ = τ", identity, format!("{k} classes"));
    let composite = g.elements().all(|x| g.elements().all(|y| (0..k).all(|i| action.perm(x, action.perm(y, i)) == action.perm(g.mul(x, y), i))));
    out.push(&case, "g·(h·τ) = (gh)·τ", composite, format!("{} pairs", g.order() * g.order()));
    let a_trivial = setting.normal().elements().iter().all(|&a| (0..k).all(|i| action.perm(a, i) == i));
    out.push(&case, "A acts trivially", a_trivial, format!("|A| = {}", setting.normal().order()));
    let orbits = action.orbits();
    let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    let partition = sizes.iter().sum::<usize>() == k;
    out.push(&case, "orbits partition Irr(A)", partition, format!("orbit sizes {sizes:?}"));
    Ok(out)
}

/// Both subgroups of `D_8` used for the finite G-set checks, with its cocycle.
fn gset_configs() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![("dihedral:4", "a", "dihedral_alpha:4"), ("dihedral:4", "a2", "dihedral_alpha:4")]
}

fn random_gsets(p: &SuiteParams, tol: &Tolerances) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("random-gsets", EXIT_RANK);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let configs = gset_configs();
    let settings: Vec<Setting> = configs.iter().map(|(g, a, c)| load_setting(g, a, c).expect("builtin setting")).collect();
    let opts = options(p, tol, PhaseConvention::Normalized);
    for case in 0..p.cases {
        let idx = case % settings.len();
        let s = &settings[idx];
        let x = random_gset_over(s.normal(), 6, &mut rng);
        let label = format!("{} A=<{}> #{case}", configs[idx].0, configs[idx].1);
        let r = verify_gset_decomposition::<f64>(s, &x, &opts).map_err(|e| e.to_string());
        out.push_result(&label, "ranks agree", r, |d| {
            format!("{} points, rank {} = {}", x.size(), d.report.lhs_rank, d.report.rhs_rank)
        });
    }
    let chains = (2 * p.cases).div_ceil(5);
    for case in 0..chains {
        let idx = case % settings.len();
        let s = &settings[idx];
        let label = format!("{} A=<{}> chain #{case}", configs[idx].0, configs[idx].1);
        let z = random_gset_over(s.normal(), 3, &mut rng);
        let g_map = random_map_into(&z, s.normal(), 5, &mut rng);
        let f_map = random_map_into(g_map.source(), s.normal(), 6, &mut rng);
        let r = chain_check(s, &f_map, &g_map, &opts, tol);
        out.push_result(&label, "(g∘f)* = f*·g*, natural", r, |sizes| format!("sizes {sizes:?}"));
    }
    out
}

fn chain_check(
    s: &Setting,
    f: &GSetMap,
    g: &GSetMap,
    opts: &DecompositionOptions,
    tol: &Tolerances,
) -> Result<[usize; 3], String> {
    let e = |e: twistdecomp::KGroupError| e.to_string();
    let dx = verify_gset_decomposition::<f64>(s, f.source(), opts).map_err(e)?;
    let dy = verify_gset_decomposition::<f64>(s, g.source(), opts).map_err(e)?;
    let dz = verify_gset_decomposition::<f64>(s, g.target(), opts).map_err(e)?;
    let gf = f.then(g).map_err(e)?;
    let pf = pullback_between(&dx.lhs, &dy.lhs, f, tol).map_err(e)?;
    let pg = pullback_between(&dy.lhs, &dz.lhs, g, tol).map_err(e)?;
    let pgf = pullback_between(&dx.lhs, &dz.lhs, &gf, tol).map_err(e)?;
    if pgf != pf.mul(&pg) {
        return Err(format!("(g∘f)* =\n{pgf}but f*·g* =\n{}", pf.mul(&pg)));
    }
    naturality_check(&dx, &dy, f, tol).map_err(e)?;
    naturality_check(&dy, &dz, g, tol).map_err(e)?;
    Ok([f.source().size(), g.source().size(), g.target().size()])
}

fn phase_robustness(p: &SuiteParams, tol: &Tolerances) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("phase-robustness", EXIT_DECOMPOSITION);
    let mut cases = vec![("dihedral:4", "a", "dihedral_alpha:4"), ("dihedral:4", "a2", "dihedral_alpha:4"), ("dihedral:4", "", "dihedral_alpha:4")];
    cases.extend([("dihedral:6", "a", "dihedral_alpha:6"), ("dihedral:6", "a3", "dihedral_alpha:6")]);
    let conventions = [PhaseConvention::Normalized, PhaseConvention::Perturbed(p.seed + 1), PhaseConvention::Perturbed(p.seed + 2)];
    for (g, a, c) in cases {
        let label = format!("{g} A=<{a}>");
        let setting = load_setting(g, a, c).expect("builtin setting");
        let mut signatures = Vec::new();
        let mut beta_ok = true;
        let mut worst = 0f64;
        for conv in conventions {
            match verify_point_decomposition::<f64>(&setting, &options(p, tol, conv)) {
                Ok(r) => {
                    for o in &r.orbits {
                        let rep = o.beta.report();
                        worst = worst.max(rep.identity).max(rep.normalization);
                        beta_ok &= rep.passes(tol.cocycle, tol.unitary);
                    }
                    let dims: Vec<Vec<usize>> = r.report.orbits.iter().map(|o| o.beta_irreducible_dims.clone()).collect();
                    signatures.push((r.report.matching_signature(), dims));
                }
                Err(e) => {
                    out.push(&label, "decomposition", false, format!("{conv:?}: {e}"));
                    beta_ok = false;
                }
            }
        }
        out.push(&label, "β is a normalized cocycle", beta_ok, format!("worst defect {worst:.1e} over 3 conventions"));
        let same = signatures.len() == conventions.len() && signatures.windows(2).all(|w| w[0] == w[1]);
        out.push(&label, "matching independent of phases", same, format!("{} conventions", signatures.len()));
        if let Ok(action) = build_action::<f64>(&setting, p.seed, tol) {
            let counts: Vec<usize> = conventions
                .iter()
                .filter_map(|&conv| orbit_data(&setting, &action, conv, tol).ok())
                .map(|d| d.len())
                .collect();
            out.push(&label, "orbit count stable", counts.windows(2).all(|w| w[0] == w[1]), format!("{counts:?}"));
        }
    }
    out
}
