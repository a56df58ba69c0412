use std::fs;
use std::sync::Arc;

use serde_json::json;
use twistdecomp::decomposition::{verify_point_decomposition, DecompositionOptions, PhaseConvention, Setting};
use twistdecomp::formats::{export_irr_table, parse_cocycle_spec, parse_group_spec, parse_gset_file, parse_subgroup_words};
use twistdecomp::group::{center, normal_subgroups};
use twistdecomp::kgroups::{verify_gset_decomposition, FiniteGSet};
use twistdecomp::{irreducibles, FiniteGroup};

use crate::failure::Failure;
use crate::{suites, Cli, Command, Common, Format};

/// Largest group for which `group` lists normal subgroups.
const NORMAL_LISTING_LIMIT: usize = 64;

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let common = &cli.common;
    match &cli.command {
        Command::Group { group } => cmd_group(common, group),
        Command::Irr { group, cocycle, matrices } => cmd_irr(common, group, cocycle, *matrices),
        Command::Decompose { group, normal, cocycle, convention, coboundary_lattice } => {
            cmd_decompose(common, group, normal, cocycle, convention, *coboundary_lattice)
        }
        Command::Kgset { group, normal, cocycle, gset } => cmd_kgset(common, group, normal, cocycle, gset),
        Command::Verify { suite, max_n, group, normal, cocycle, cases } => {
            let params = suites::SuiteParams {
                max_n: *max_n,
                group: group.clone(),
                normal: normal.clone(),
                cocycle: cocycle.clone(),
                cases: *cases,
                seed: common.seed,
            };
            let outcome = suites::run(suite, &params, &common.tolerances()?)?;
            let text = match common.format {
                Format::Json => outcome.to_json(),
                Format::Text => outcome.to_text(),
            };
            emit(common, &text)?;
            match outcome.failed() {
                0 => Ok(()),
                n => Err(Failure { code: outcome.failure_code, ..Failure::suite(n, outcome.rows.len()) }),
            }
        }
    }
}

/// Writes to `--output` when given, else stdout. A trailing newline is ensured.
pub fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &common.output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn load_group(spec: &str) -> Result<Arc<FiniteGroup>, Failure> {
    Ok(parse_group_spec(spec)?.into_shared())
}

pub fn load_setting(group: &str, normal: &str, cocycle: &str) -> Result<Setting, Failure> {
    let g = load_group(group)?;
    let alpha = parse_cocycle_spec(cocycle, &g)?;
    let a = parse_subgroup_words(&g, normal)?;
    Ok(Setting::new(alpha, a)?)
}

fn braces(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(", "))
}

fn cmd_group(common: &Common, spec: &str) -> Result<(), Failure> {
    let g = load_group(spec)?;
    let labels: Vec<String> = g.elements().map(|x| g.label(x)).collect();
    let z = center(&g).labels();
    let classes = g.conjugacy_classes().len();
    let normals: Option<Vec<Vec<String>>> =
        (g.order() <= NORMAL_LISTING_LIMIT).then(|| normal_subgroups(&g).iter().map(|n| n.labels()).collect());
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "schema": 1,
            "order": g.order(),
            "elements": labels,
            "abelian": g.is_abelian(),
            "conjugacy_classes": classes,
            "center": z,
            "normal_subgroups": normals,
        }))
        .expect("serializes"),
        Format::Text => {
            let mut s = format!("order {}\nelements: {}\n", g.order(), labels.join(", "));
            s += &format!("abelian: {}\nconjugacy classes: {classes}\n", if g.is_abelian() { "yes" } else { "no" });
            s += &format!("center (order {}): {}\n", z.len(), braces(&z));
            match &normals {
                Some(list) => {
                    s += &format!("normal subgroups ({}):\n", list.len());
                    for n in list {
                        s += &format!("  order {:>3}: {}\n", n.len(), braces(n));
                    }
                }
                None => s += &format!("normal subgroups: not listed above order {NORMAL_LISTING_LIMIT}\n"),
            }
            s
        }
    };
    emit(common, &text)
}

fn cmd_irr(common: &Common, group: &str, cocycle: &str, matrices: bool) -> Result<(), Failure> {
    let g = load_group(group)?;
    let alpha = parse_cocycle_spec(cocycle, &g)?;
    let tol = common.tolerances()?;
    let table = irreducibles::<f64>(alpha.into(), common.seed, &tol)?;
    let export = export_irr_table(&table, matrices);
    let text = match common.format {
        Format::Json => export.to_json(),
        Format::Text => export.to_text(),
    };
    emit(common, &text)
}

fn parse_convention(s: &str) -> Result<PhaseConvention, Failure> {
    match s.split_once(':') {
        None if s == "normalized" => Ok(PhaseConvention::Normalized),
        Some(("perturbed", seed)) => seed
            .parse()
            .map(PhaseConvention::Perturbed)
            .map_err(|_| Failure::usage(format!("bad convention seed `{seed}`"))),
        _ => Err(Failure::usage(format!("unknown convention `{s}`; expected normalized or perturbed:<seed>"))),
    }
}

fn cmd_decompose(
    common: &Common,
    group: &str,
    normal: &str,
    cocycle: &str,
    convention: &str,
    lattice: u32,
) -> Result<(), Failure> {
    let setting = load_setting(group, normal, cocycle)?;
    let options = DecompositionOptions {
        seed: common.seed,
        convention: parse_convention(convention)?,
        tolerances: common.tolerances()?,
        coboundary_lattice: (lattice > 0).then_some(lattice),
    };
    let result = verify_point_decomposition::<f64>(&setting, &options)?;
    let text = match common.format {
        Format::Json => result.report.to_json(),
        Format::Text => result.report.to_text(),
    };
    emit(common, &text)
}

fn load_gset(spec: &str, setting: &Setting) -> Result<FiniteGSet, Failure> {
    let g = setting.group();
    match spec {
        "point" => Ok(FiniteGSet::point(g)),
        "empty" => Ok(FiniteGSet::empty(g)),
        _ => match spec.strip_prefix("cosets:") {
            Some(words) => Ok(FiniteGSet::cosets(&parse_subgroup_words(g, words)?)),
            None => Ok(parse_gset_file(spec.strip_prefix("file:").unwrap_or(spec), g)?),
        },
    }
}

fn cmd_kgset(common: &Common, group: &str, normal: &str, cocycle: &str, gset: &str) -> Result<(), Failure> {
    let setting = load_setting(group, normal, cocycle)?;
    let x = load_gset(gset, &setting)?;
    let options = DecompositionOptions { seed: common.seed, tolerances: common.tolerances()?, ..Default::default() };
    let d = verify_gset_decomposition::<f64>(&setting, &x, &options)?;
    let text = match common.format {
        Format::Json => d.report.to_json(),
        Format::Text => format!("{}ranks agree: {} = {}\n", d.report.to_text(), d.report.lhs_rank, d.report.rhs_rank),
    };
    emit(common, &text)
}
