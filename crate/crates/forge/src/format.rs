//! Line-oriented text format for algebra descriptions.
//!
//! The grammar is documented in `docs/format.md`. Parsing validates the
//! structure constants through [`AlgebraBuilder`]; serialization is
//! canonical, so `serialize(parse(s))` is a fixed point.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use malcev_forge_core::catalog;
use malcev_forge_core::linalg::Matrix;
use malcev_forge_core::{AlgebraBuilder, Elem, GradingGroup, Rat, StructureAlgebra};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid algebra: {0}")]
    Invalid(#[from] malcev_forge_core::Error),
    #[error("unknown built-in `{0}`; expected one of {1}")]
    UnknownBuiltin(String, String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// An algebra together with the optional toral basis carried by the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub algebra: StructureAlgebra,
    pub toral: Option<Vec<Elem>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Basis,
    Products,
    Form,
    Toral,
}

pub fn parse_grading(s: &str) -> Option<GradingGroup> {
    match s {
        "trivial" => Some(GradingGroup::Trivial),
        "Z2" => Some(GradingGroup::z2()),
        _ => GradingGroup::zp(s.strip_prefix("Zp:")?.parse().ok()?).ok(),
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

fn parse_rat(line: usize, s: &str) -> Result<Rat, FormatError> {
    s.parse()
        .map_err(|e: malcev_forge_core::rat::ParseRatError| syntax(line, e.to_string()))
}

fn parse_row(line: usize, s: &str, n: usize) -> Result<Vec<Rat>, FormatError> {
    let row = s
        .split_whitespace()
        .map(|t| parse_rat(line, t))
        .collect::<Result<Vec<_>, _>>()?;
    if row.len() != n {
        return Err(syntax(line, format!("expected {n} entries, found {}", row.len())));
    }
    Ok(row)
}

/// Parses `0` or a `+`-separated list of `c*name`, `name`, `-name`.
fn parse_terms(line: usize, s: &str, names: &BTreeMap<String, usize>) -> Result<Elem, FormatError> {
    let s = s.trim();
    if s == "0" {
        return Ok(Elem::zero());
    }
    let mut out = Elem::zero();
    for part in s.split('+') {
        let part = part.trim();
        if part.is_empty() {
            return Err(syntax(line, "empty term"));
        }
        let (coeff, name) = match part.split_once('*') {
            Some((c, n)) => (parse_rat(line, c.trim())?, n.trim()),
            None => match part.strip_prefix('-') {
                Some(n) => (Rat::MINUS_ONE, n.trim()),
                None => (Rat::ONE, part),
            },
        };
        let &i = names
            .get(name)
            .ok_or_else(|| syntax(line, format!("undeclared basis name `{name}`")))?;
        out.add_scaled(coeff, &Elem::basis(i));
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<Document, FormatError> {
    let mut section = Section::Header;
    let mut header: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut basis: Vec<(usize, String, u32)> = Vec::new();
    let mut products: Vec<(usize, &str)> = Vec::new();
    let mut form: Vec<(usize, &str)> = Vec::new();
    let mut toral: Vec<(usize, &str)> = Vec::new();
    let mut seen = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            section = match name {
                "basis" => Section::Basis,
                "products" => Section::Products,
                "form" => Section::Form,
                "toral" => Section::Toral,
                _ => return Err(syntax(line, format!("unknown section `[{name}]`"))),
            };
            if seen.contains(&name) {
                return Err(syntax(line, format!("section `[{name}]` appears twice")));
            }
            seen.push(name);
            continue;
        }
        match section {
            Section::Header => {
                let (k, v) = t
                    .split_once('=')
                    .ok_or_else(|| syntax(line, "expected `key = value`"))?;
                let k = k.trim();
                if !matches!(
                    k,
                    "format_version" | "field" | "name" | "description" | "grading" | "bcommutative"
                ) {
                    return Err(syntax(line, format!("unknown header key `{k}`")));
                }
                if header.insert(k, (line, v.trim())).is_some() {
                    return Err(syntax(line, format!("header key `{k}` given twice")));
                }
            }
            Section::Basis => {
                let mut it = t.split_whitespace();
                let (Some(name), Some(deg), None) = (it.next(), it.next(), it.next()) else {
                    return Err(syntax(line, "expected `name degree`"));
                };
                let deg: u32 = deg
                    .parse()
                    .map_err(|_| syntax(line, format!("invalid degree `{deg}`")))?;
                basis.push((line, name.to_string(), deg));
            }
            Section::Products => products.push((line, t)),
            Section::Form => form.push((line, t)),
            Section::Toral => toral.push((line, t)),
        }
    }

    let get = |k: &'static str| header.get(k).copied().ok_or(FormatError::MissingKey(k));
    let (line, v) = get("format_version")?;
    if v != FORMAT_VERSION {
        return Err(syntax(line, format!("unsupported format_version `{v}`")));
    }
    let (line, v) = get("field")?;
    if v != "Q" {
        return Err(syntax(line, format!("unsupported field `{v}`; only Q")));
    }
    let (line, v) = get("grading")?;
    let grading = parse_grading(v).ok_or_else(|| syntax(line, format!("invalid grading `{v}`")))?;
    let bcomm = match header.get("bcommutative") {
        Some(&(line, v)) => {
            parse_bool(v).ok_or_else(|| syntax(line, format!("expected true or false, found `{v}`")))?
        }
        None => false,
    };

    let mut names = BTreeMap::new();
    let mut b = AlgebraBuilder::new(grading)
        .name(header.get("name").map_or("", |x| x.1))
        .description(header.get("description").map_or("", |x| x.1))
        .bcommutative(bcomm);
    for (line, name, deg) in &basis {
        if !grading.contains(malcev_forge_core::Degree(*deg)) {
            return Err(syntax(
                *line,
                format!("degree {deg} outside grading {}", grading.label()),
            ));
        }
        if names.insert(name.clone(), names.len()).is_some() {
            return Err(syntax(*line, format!("duplicate basis name `{name}`")));
        }
        b = b.basis(name, *deg);
    }
    let n = names.len();

    for (line, t) in products {
        let (lhs, rhs) = t
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected `a b = terms`"))?;
        let mut it = lhs.split_whitespace();
        let (Some(a), Some(c), None) = (it.next(), it.next(), it.next()) else {
            return Err(syntax(line, "left side must name two basis elements"));
        };
        let idx = |s: &str| {
            names
                .get(s)
                .copied()
                .ok_or_else(|| syntax(line, format!("undeclared basis name `{s}`")))
        };
        let (i, j) = (idx(a)?, idx(c)?);
        if b.has_product(i, j) {
            return Err(syntax(line, format!("product `{a} {c}` given twice")));
        }
        if bcomm && i != j && b.has_product(j, i) {
            return Err(syntax(
                line,
                format!("`{c} {a}` already given; a B-commutative table lists each pair once"),
            ));
        }
        b = b.product(i, j, parse_terms(line, rhs, &names)?);
    }

    if !form.is_empty() {
        if form.len() != n {
            return Err(syntax(form[0].0, format!("form needs {n} rows, found {}", form.len())));
        }
        let rows = form
            .iter()
            .map(|&(line, t)| parse_row(line, t, n))
            .collect::<Result<Vec<_>, _>>()?;
        b = b.gram(Matrix::from_rows(&rows));
    }
    let toral = if toral.is_empty() {
        None
    } else {
        Some(
            toral
                .iter()
                .map(|&(line, t)| parse_row(line, t, n).map(|r| Elem::from_dense(&r)))
                .collect::<Result<Vec<_>, _>>()?,
        )
    };
    Ok(Document {
        algebra: b.build()?,
        toral,
    })
}

fn render_terms(alg: &StructureAlgebra, e: &Elem) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = e
        .terms()
        .iter()
        .map(|&(k, c)| {
            let name = alg.basis_name(k);
            if c.is_one() {
                name.to_string()
            } else {
                format!("{c}*{name}")
            }
        })
        .collect();
    parts.join(" + ")
}

fn render_row(v: &[Rat]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical text: header, basis in order, products sorted by index pair,
/// then form and toral rows.
pub fn serialize(alg: &StructureAlgebra, toral: Option<&[Elem]>) -> String {
    let n = alg.dim();
    let mut out = String::new();
    let _ = writeln!(out, "format_version = {FORMAT_VERSION}");
    let _ = writeln!(out, "field = Q");
    let _ = writeln!(out, "name = {}", alg.name());
    if !alg.description().is_empty() {
        let _ = writeln!(out, "description = {}", alg.description());
    }
    let _ = writeln!(out, "grading = {}", alg.grading().label());
    let _ = writeln!(out, "bcommutative = {}", alg.is_bcommutative());
    out.push_str("\n[basis]\n");
    for i in 0..n {
        let _ = writeln!(out, "{} {}", alg.basis_name(i), alg.degree(i).0);
    }
    out.push_str("\n[products]\n");
    for i in 0..n {
        for j in 0..n {
            let p = alg.basis_product(i, j);
            let emit = if alg.is_bcommutative() {
                i < j || (i == j && !p.is_zero())
            } else {
                !p.is_zero()
            };
            if emit {
                let _ = writeln!(
                    out,
                    "{} {} = {}",
                    alg.basis_name(i),
                    alg.basis_name(j),
                    render_terms(alg, p)
                );
            }
        }
    }
    if let Some(g) = alg.gram() {
        out.push_str("\n[form]\n");
        for i in 0..n {
            let row: Vec<Rat> = (0..n).map(|j| g.get(i, j)).collect();
            let _ = writeln!(out, "{}", render_row(&row));
        }
    }
    if let Some(t) = toral {
        out.push_str("\n[toral]\n");
        for h in t {
            let _ = writeln!(out, "{}", render_row(&h.to_dense(n)));
        }
    }
    out
}

pub fn builtin(name: &str) -> Result<Document, FormatError> {
    let b = catalog::builtin(name)
        .ok_or_else(|| FormatError::UnknownBuiltin(name.to_string(), catalog::NAMES.join(", ")))?;
    Ok(Document {
        algebra: b.algebra,
        toral: Some(b.toral),
    })
}

/// Resolves `builtin:NAME` or a file path.
pub fn load(subject: &str) -> Result<Document, FormatError> {
    if let Some(name) = subject.strip_prefix("builtin:") {
        return builtin(name);
    }
    let text = std::fs::read_to_string(Path::new(subject)).map_err(|source| FormatError::Io {
        path: subject.to_string(),
        source,
    })?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "format_version = 1\nfield = Q\nname = t\ngrading = Z2\nbcommutative = true\n\n[basis]\na 0\nx 1\n\n[products]\na x = x\n";

    #[test]
    fn parses_and_completes() {
        let d = parse(TINY).unwrap();
        let a = &d.algebra;
        assert_eq!(a.dim(), 2);
        // x a = eps(0*1) a x = -x
        assert_eq!(a.render(a.basis_product(1, 0)), "-x");
        assert!(d.toral.is_none());
    }

    #[test]
    fn errors_carry_lines() {
        let bad = TINY.replace("a x = x", "a x = y");
        match parse(&bad) {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 12),
            other => panic!("{other:?}"),
        }
        let twice = format!("{TINY}x a = -x\n");
        assert!(matches!(parse(&twice), Err(FormatError::Syntax { line: 13, .. })));
        let graded = TINY.replace("a x = x", "a x = a");
        assert!(matches!(parse(&graded), Err(FormatError::Invalid(_))));
        assert!(matches!(
            parse("field = Q\n"),
            Err(FormatError::MissingKey("format_version"))
        ));
        let rat = TINY.replace("a x = x", "a x = 1/0*x");
        assert!(matches!(parse(&rat), Err(FormatError::Syntax { line: 12, .. })));
    }

    #[test]
    fn term_syntax() {
        let names: BTreeMap<String, usize> = [("e1".to_string(), 0), ("e2".to_string(), 1)].into();
        let e = parse_terms(1, "2*e1 + -1/2*e2 + -e1", &names).unwrap();
        assert_eq!(e, Elem::from_terms([(0, Rat::ONE), (1, Rat::new(-1, 2))]));
        assert!(parse_terms(1, "e1 +", &names).is_err());
    }

    #[test]
    fn grading_labels() {
        for g in ["trivial", "Z2", "Zp:3"] {
            assert_eq!(parse_grading(g).unwrap().label(), g);
        }
        assert!(parse_grading("Zp:4").is_none());
    }
}
