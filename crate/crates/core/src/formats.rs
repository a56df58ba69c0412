//! Text formats for groups, cocycles and G-sets, and JSON export of irreducible tables.

use std::fmt::Write as _;
use std::fs;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cocycle::{dihedral_alpha, Cocycle, CocycleError};
use crate::group::{parse_cycles, FiniteGroup, GroupError, SubgroupHandle};
use crate::kgroups::{FiniteGSet, KGroupError};
use crate::projrep::IrrTable;
use crate::scalar::{round_display, Real};

pub const EXPORT_SCHEMA: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("unknown {kind} `{spec}`")]
    UnknownSpec { kind: &'static str, spec: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    KGroup(#[from] KGroupError),
    #[error("the cocycle file is written for a group with a different multiplication table")]
    GroupMismatch,
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

fn read(path: &str) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError::Io { path: path.to_string(), message: e.to_string() })
}

/// Non-blank lines with `#` comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_count(spec: &str, value: &str, kind: &'static str) -> Result<usize, FormatError> {
    value.trim().parse().map_err(|_| FormatError::UnknownSpec { kind, spec: spec.to_string() })
}

/// In files an all-digit token is always an element index; anything else is a word.
fn parse_element(group: &FiniteGroup, token: &str) -> Result<usize, GroupError> {
    let t = token.trim();
    if !t.is_empty() && t.chars().all(|c| c.is_ascii_digit()) {
        let idx: usize = t.parse().map_err(|_| GroupError::BadWord(t.into()))?;
        return if idx < group.order() { Ok(idx) } else { Err(GroupError::BadElement(idx)) };
    }
    group.parse_word(t)
}

/// `dihedral:<n>`, `cyclic:<n>`, or a file given as `table:<path>`, `perm:<path>` or `file:<path>`.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup, FormatError> {
    let (kind, rest) = spec.split_once(':').unwrap_or(("file", spec));
    match kind.trim() {
        "dihedral" => Ok(FiniteGroup::dihedral(parse_count(spec, rest, "group spec")?)?),
        "cyclic" => Ok(FiniteGroup::cyclic(parse_count(spec, rest, "group spec")?)?),
        "table" | "perm" | "file" => parse_group_text(&read(rest.trim())?),
        _ => Err(FormatError::UnknownSpec { kind: "group spec", spec: spec.to_string() }),
    }
}

/// A `table:` header and `n` rows of `n` indices, or a `perm: degree=<d>`
/// header and one generator per line in cycle notation.
pub fn parse_group_text(text: &str) -> Result<FiniteGroup, FormatError> {
    let mut lines = content_lines(text);
    let (first_line, header) = lines.next().ok_or_else(|| parse_err(1, "empty group file"))?;
    if header == "table:" {
        let mut rows = Vec::new();
        let mut numbers = Vec::new();
        for (ln, l) in lines {
            let row = l
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("`{t}` is not an element index"))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
            numbers.push(ln);
        }
        let n = rows.len();
        for (row, ln) in rows.iter().zip(&numbers) {
            if row.len() != n {
                return Err(parse_err(*ln, format!("row has {} entries, expected {n}", row.len())));
            }
        }
        return Ok(FiniteGroup::from_multiplication_table(&rows)?);
    }
    if let Some(rest) = header.strip_prefix("perm:") {
        let degree = rest
            .trim()
            .strip_prefix("degree=")
            .and_then(|d| d.trim().parse::<usize>().ok())
            .ok_or_else(|| parse_err(first_line, "expected `perm: degree=<d>`"))?;
        let generators = lines
            .map(|(ln, l)| parse_cycles(l, degree).map_err(|m| parse_err(ln, m)))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(FiniteGroup::from_permutation_generators(degree, &generators)?);
    }
    Err(parse_err(first_line, "expected `table:` or `perm: degree=<d>`"))
}

/// The `table:` format read by [`parse_group_text`].
pub fn group_to_text(group: &FiniteGroup) -> String {
    let mut s = String::from("table:\n");
    for g in group.elements() {
        let row: Vec<String> = group.elements().map(|h| group.mul(g, h).to_string()).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

/// Element words separated by commas, closed under multiplication. An empty
/// string gives the trivial subgroup.
pub fn parse_subgroup_words(group: &Arc<FiniteGroup>, words: &str) -> Result<SubgroupHandle, FormatError> {
    let seeds = words
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| group.parse_word(w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SubgroupHandle::closure(group, &seeds)?)
}

/// `trivial`, `dihedral_alpha:<n>`, or a cocycle file as `file:<path>` or a bare path.
pub fn parse_cocycle_spec(spec: &str, group: &Arc<FiniteGroup>) -> Result<Cocycle, FormatError> {
    let spec = spec.trim();
    if spec == "trivial" {
        return Ok(Cocycle::trivial(group, 1));
    }
    if let Some(n) = spec.strip_prefix("dihedral_alpha:") {
        let alpha = dihedral_alpha(parse_count(spec, n, "cocycle spec")?)?;
        if !alpha.group().same_table(group) {
            return Err(FormatError::GroupMismatch);
        }
        return Ok(alpha.with_group(group));
    }
    let path = spec.strip_prefix("file:").unwrap_or(spec);
    parse_cocycle_text(&read(path)?, group)
}

/// Header `order K=<K> group=<spec>` then lines `g h exponent`; pairs not
/// listed have exponent 0. Elements are indices or words of `group`.
pub fn parse_cocycle_text(text: &str, group: &Arc<FiniteGroup>) -> Result<Cocycle, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty cocycle file"))?;
    let rest = header.strip_prefix("order").ok_or_else(|| parse_err(hl, "expected `order K=<K> group=<spec>`"))?;
    let mut order = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("K", k)) => {
                order = Some(k.parse::<u32>().map_err(|_| parse_err(hl, format!("bad order `{k}`")))?);
            }
            Some(("group", g)) => {
                let declared = parse_group_spec(g)?;
                if !declared.same_table(group) {
                    return Err(FormatError::GroupMismatch);
                }
            }
            _ => return Err(parse_err(hl, format!("unexpected header field `{field}`"))),
        }
    }
    let order = order.ok_or_else(|| parse_err(hl, "missing K=<K>"))?;
    if order == 0 {
        return Err(CocycleError::ZeroOrder.into());
    }
    let n = group.order();
    let mut exps: Vec<Option<i64>> = vec![None; n * n];
    for (ln, l) in lines {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 3 {
            return Err(parse_err(ln, "expected `g h exponent`"));
        }
        let g = parse_element(group, t[0]).map_err(|e| parse_err(ln, e.to_string()))?;
        let h = parse_element(group, t[1]).map_err(|e| parse_err(ln, e.to_string()))?;
        let e: i64 = t[2].parse().map_err(|_| parse_err(ln, format!("`{}` is not an integer", t[2])))?;
        let e = e.rem_euclid(i64::from(order));
        match exps[g * n + h] {
            Some(prev) if prev != e => return Err(parse_err(ln, format!("conflicting exponent for ({}, {})", t[0], t[1]))),
            _ => exps[g * n + h] = Some(e),
        }
    }
    let exps: Vec<i64> = exps.into_iter().map(|e| e.unwrap_or(0)).collect();
    Ok(Cocycle::from_exponents(group, order, &exps)?)
}

/// The format read by [`parse_cocycle_text`], listing only nonzero exponents.
pub fn cocycle_to_text(alpha: &Cocycle, group_spec: &str) -> String {
    let mut s = format!("order K={} group={group_spec}\n", alpha.order());
    let n = alpha.group().order();
    for g in 0..n {
        for h in 0..n {
            let e = alpha.exponent(g, h);
            if e != 0 {
                let _ = writeln!(s, "{g} {h} {e}");
            }
        }
    }
    s
}

/// `points=<n>` then lines `g: i0 … i_{n-1}`; the listed elements must generate the group.
pub fn parse_gset_text(text: &str, group: &Arc<FiniteGroup>) -> Result<FiniteGSet, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty G-set file"))?;
    let size: usize = header
        .strip_prefix("points=")
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| parse_err(hl, "expected `points=<n>`"))?;
    let mut listed = Vec::new();
    for (ln, l) in lines {
        let (word, images) = l.split_once(':').ok_or_else(|| parse_err(ln, "expected `g: i0 i1 …`"))?;
        let g = parse_element(group, word).map_err(|e| parse_err(ln, e.to_string()))?;
        let images = images
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("`{t}` is not a point"))))
            .collect::<Result<Vec<_>, _>>()?;
        if images.len() != size {
            return Err(parse_err(ln, format!("{} images for {size} points", images.len())));
        }
        listed.push((g, images));
    }
    if size == 0 && listed.is_empty() {
        return Ok(FiniteGSet::empty(group));
    }
    if listed.is_empty() && size == 1 {
        return Ok(FiniteGSet::point(group));
    }
    Ok(FiniteGSet::from_generator_images(group, size, &listed)?)
}

pub fn parse_gset_file(path: &str, group: &Arc<FiniteGroup>) -> Result<FiniteGSet, FormatError> {
    parse_gset_text(&read(path)?, group)
}

/// Writes every element's images, so any group can read it back.
pub fn gset_to_text(x: &FiniteGSet) -> String {
    let mut s = format!("points={}\n", x.size());
    for g in x.group().elements() {
        let row: Vec<String> = x.row(g).iter().map(usize::to_string).collect();
        let _ = writeln!(s, "{g}: {}", row.join(" "));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterValue {
    pub element: String,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrExport {
    pub index: usize,
    pub dim: usize,
    pub character: Vec<CharacterValue>,
    /// Row-major `[re, im]` entries of each matrix, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrTableExport {
    pub schema: u32,
    pub group_order: usize,
    pub count: usize,
    pub dimensions: Vec<usize>,
    pub sum_of_squares: usize,
    pub irreducibles: Vec<IrrExport>,
}

fn pair<T: Real>(z: num_complex::Complex<T>) -> [f64; 2] {
    [round_display(z.re.to_f64().unwrap_or(f64::NAN), 9), round_display(z.im.to_f64().unwrap_or(f64::NAN), 9)]
}

pub fn export_irr_table<T: Real>(table: &IrrTable<T>, with_matrices: bool) -> IrrTableExport {
    let group = table.group();
    let irreducibles = table
        .irreducibles()
        .iter()
        .enumerate()
        .map(|(index, rep)| IrrExport {
            index,
            dim: rep.dim(),
            character: table
                .character(index)
                .values
                .iter()
                .enumerate()
                .map(|(g, v)| CharacterValue { element: group.label(g), value: pair(*v) })
                .collect(),
            matrices: with_matrices.then(|| {
                rep.matrices()
                    .iter()
                    .map(|m| (0..m.rows()).map(|r| (0..m.cols()).map(|c| pair(m[(r, c)])).collect()).collect())
                    .collect()
            }),
        })
        .collect();
    IrrTableExport {
        schema: EXPORT_SCHEMA,
        group_order: group.order(),
        count: table.len(),
        dimensions: table.dims(),
        sum_of_squares: table.sum_of_squares(),
        irreducibles,
    }
}

impl IrrTableExport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("export serializes")
    }

    /// One row per irreducible: index, dimension, character values.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} irreducibles, dimensions {:?}, Σ dim² = {} = |G|", self.count, self.dimensions, self.sum_of_squares);
        let mut rows: Vec<Vec<String>> = Vec::new();
        if let Some(first) = self.irreducibles.first() {
            rows.push(std::iter::once("element".to_string()).chain(first.character.iter().map(|c| c.element.clone())).collect());
        }
        for irr in &self.irreducibles {
            let values = irr.character.iter().map(|c| crate::projrep::format_complex(num_complex::Complex::new(c.value[0], c.value[1]), 4));
            rows.push(std::iter::once(format!("χ{} (dim {})", irr.index, irr.dim)).chain(values).collect());
        }
        let cols = rows.first().map_or(0, Vec::len);
        let widths: Vec<usize> = (0..cols).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        for r in &rows {
            let cells: Vec<String> =
                r.iter().zip(&widths).map(|(cell, w)| format!("{cell}{}", " ".repeat(w - cell.chars().count()))).collect();
            let _ = writeln!(s, "{}", cells.join(" | ").trim_end());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projrep::irreducibles;
    use crate::tolerance::Tolerances;

    #[test]
    fn builtin_specs() {
        assert_eq!(parse_group_spec("dihedral:4").unwrap().order(), 8);
        assert_eq!(parse_group_spec("cyclic:5").unwrap().order(), 5);
        assert!(matches!(parse_group_spec("dihedral:x"), Err(FormatError::UnknownSpec { .. })));
        assert!(matches!(parse_group_spec("dodecahedral:3"), Err(FormatError::UnknownSpec { .. })));
    }

    #[test]
    fn table_round_trip() {
        let d8 = FiniteGroup::dihedral(4).unwrap();
        let back = parse_group_text(&group_to_text(&d8)).unwrap();
        assert!(back.same_table(&d8));
    }

    #[test]
    fn table_errors_carry_line_numbers() {
        let err = parse_group_text("table:\n0 1\n1\n").unwrap_err();
        assert_eq!(err, FormatError::Parse { line: 3, message: "row has 1 entries, expected 2".into() });
        let err = parse_group_text("# comment\nrows:\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }));
    }

    #[test]
    fn permutation_file() {
        let g = parse_group_text("perm: degree=4\n(0 1 2 3)\n(1 3)\n").unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
    }

    #[test]
    fn cocycle_file_round_trip() {
        let alpha = dihedral_alpha(4).unwrap();
        let text = cocycle_to_text(&alpha, "dihedral:4");
        let back = parse_cocycle_text(&text, alpha.group()).unwrap();
        assert_eq!(back.exponents(), alpha.exponents());
    }

    #[test]
    fn invalid_cocycle_is_reported() {
        let g = FiniteGroup::cyclic(2).unwrap().into_shared();
        let err = parse_cocycle_text("order K=2 group=cyclic:2\n0 g 1\n", &g);
        assert!(matches!(err, Err(FormatError::Cocycle(CocycleError::Invalid(_)))));
        let d8 = FiniteGroup::dihedral(4).unwrap().into_shared();
        assert_eq!(parse_cocycle_text("order K=2 group=cyclic:2\n", &d8).unwrap_err(), FormatError::GroupMismatch);
    }

    #[test]
    fn gset_file() {
        let g = FiniteGroup::dihedral(4).unwrap().into_shared();
        let x = parse_gset_text("points=2\na: 0 1\nb: 1 0\n", &g).unwrap();
        assert_eq!(x.orbits(), vec![vec![0, 1]]);
        let back = parse_gset_text(&gset_to_text(&x), &g).unwrap();
        assert_eq!(back, x);
        assert!(parse_gset_text("points=2\na: 0 1\n", &g).is_err());
        assert_eq!(parse_gset_text("points=0\n", &g).unwrap().size(), 0);
    }

    #[test]
    fn export_lists_labels() {
        let alpha = dihedral_alpha(4).unwrap();
        let t = irreducibles::<f64>(alpha.into(), 0, &Tolerances::default()).unwrap();
        let e = export_irr_table(&t, true);
        assert_eq!(e.dimensions, vec![2, 2]);
        assert_eq!(e.irreducibles[0].character[2].element, "a^2");
        assert!(e.to_json().contains("\"matrices\""));
        assert!(e.to_text().contains("Σ dim² = 8"));
    }

    #[test]
    fn subgroup_words() {
        let g = FiniteGroup::dihedral(4).unwrap().into_shared();
        assert_eq!(parse_subgroup_words(&g, "a2").unwrap().order(), 2);
        assert_eq!(parse_subgroup_words(&g, "a,b").unwrap().order(), 8);
        assert_eq!(parse_subgroup_words(&g, "").unwrap().order(), 1);
    }
}
