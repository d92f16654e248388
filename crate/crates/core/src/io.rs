//! Text formats for algebras, homomorphisms and schemes.
//!
//! Algebra documents are JSON objects:
//!
//! ```json
//! {
//!   "basis": ["1", "g"],
//!   "star": [0, 1],
//!   "lambda": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"]]
//! }
//! ```
//!
//! `lambda` lists the nonzero structure constants `[a, b, c, "p/q"]` meaning
//! `λ_{abc}`. Optional fields: `degrees` (rational strings, for algebras
//! whose degrees are not `λ_{aa*0}`) and `mode` (`"table"` or
//! `"c-algebra"`; defaults to `"table"` when every constant is nonnegative).
//!
//! Homomorphism documents are JSON lists of `[source-label, target-label]`.
//!
//! Scheme documents are a header line `n d` followed by n rows of n
//! relation indices in `0..=d`.

use crate::algebra::{AlgebraError, Mode, RawAlgebra, TableAlgebra};
use crate::hom::{homomorphism_from_labels, HomError, TableHomomorphism};
use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::scheme::{AssociationScheme, SchemeError};
use num_traits::Signed;
use serde::Deserialize;
use std::fmt::Write;
use thiserror::Error;

/// Largest basis accepted from a document.
pub const MAX_DOCUMENT_DIM: usize = 256;
/// Largest point set accepted from a scheme document.
pub const MAX_DOCUMENT_POINTS: usize = 4096;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("lambda entry {entry}: {message}")]
    Entry { entry: usize, message: String },
    #[error("field {field}: {message}")]
    Field { field: &'static str, message: String },
    #[error("basis element 0 is not the identity: {0}")]
    MissingIdentity(String),
    #[error("dimension {dim} exceeds the limit of {max}")]
    TooLarge { dim: usize, max: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

fn syntax(e: serde_json::Error) -> ParseError {
    ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDocument {
    basis: Vec<String>,
    star: Vec<usize>,
    lambda: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    degrees: Option<Vec<String>>,
    #[serde(default)]
    mode: Option<String>,
}

/// Parses the document into unvalidated algebra data and the requested mode.
pub fn parse_raw_algebra(text: &str) -> Result<(RawAlgebra, Mode), ParseError> {
    let doc: AlgebraDocument = serde_json::from_str(text).map_err(syntax)?;
    let dim = doc.basis.len();
    if dim == 0 {
        return Err(ParseError::Field {
            field: "basis",
            message: "empty basis".into(),
        });
    }
    if dim > MAX_DOCUMENT_DIM {
        return Err(ParseError::TooLarge {
            dim,
            max: MAX_DOCUMENT_DIM,
        });
    }
    if doc.star.len() != dim {
        return Err(ParseError::Field {
            field: "star",
            message: format!("{} entries for {dim} basis elements", doc.star.len()),
        });
    }
    if let Some(&s) = doc.star.iter().find(|&&s| s >= dim) {
        return Err(ParseError::Field {
            field: "star",
            message: format!("index {s} out of range"),
        });
    }
    let mut entries = Vec::with_capacity(doc.lambda.len());
    for (entry, (a, b, c, v)) in doc.lambda.into_iter().enumerate() {
        if let Some(i) = [a, b, c].into_iter().find(|&i| i >= dim) {
            return Err(ParseError::Entry {
                entry,
                message: format!("index {i} out of range for dimension {dim}"),
            });
        }
        let v = parse_rational(&v).map_err(|e| ParseError::Entry {
            entry,
            message: e.to_string(),
        })?;
        entries.push((a, b, c, v));
    }
    let degrees = match doc.degrees {
        None => None,
        Some(d) if d.len() != dim => {
            return Err(ParseError::Field {
                field: "degrees",
                message: format!("{} entries for {dim} basis elements", d.len()),
            })
        }
        Some(d) => Some(
            d.iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<Scalar>, _>>()
                .map_err(|e| ParseError::Field {
                    field: "degrees",
                    message: e.to_string(),
                })?,
        ),
    };
    let mode = match doc.mode.as_deref() {
        Some("table") => Mode::TableAlgebra,
        Some("c-algebra") => Mode::CAlgebra,
        Some(other) => {
            return Err(ParseError::Field {
                field: "mode",
                message: format!("unknown mode {other:?}"),
            })
        }
        None if entries.iter().any(|e| e.3.is_negative()) => Mode::CAlgebra,
        None => Mode::TableAlgebra,
    };
    let raw = RawAlgebra {
        labels: doc.basis,
        star: doc.star,
        entries,
        degrees,
    };
    check_identity(&raw)?;
    Ok((raw, mode))
}

fn check_identity(raw: &RawAlgebra) -> Result<(), ParseError> {
    let dim = raw.labels.len();
    let mut rows = vec![(Vec::new(), Vec::new()); dim];
    for (a, b, c, v) in &raw.entries {
        if *a == 0 {
            rows[*b].0.push((*c, v));
        }
        if *b == 0 {
            rows[*a].1.push((*c, v));
        }
    }
    for (b, (left, right)) in rows.iter().enumerate() {
        let unit = |r: &[(usize, &Scalar)]| r.len() == 1 && r[0].0 == b && r[0].1 == &Scalar::from_integer(1.into());
        if !unit(left) || !unit(right) {
            return Err(ParseError::MissingIdentity(format!(
                "{} * {} is not {}",
                raw.labels[0], raw.labels[b], raw.labels[b]
            )));
        }
    }
    Ok(())
}

/// Parses and validates an algebra document.
pub fn parse_table_algebra(text: &str) -> Result<TableAlgebra, ParseError> {
    let (raw, mode) = parse_raw_algebra(text)?;
    Ok(TableAlgebra::new(raw, mode)?)
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Canonical document: entries sorted by `(a, b, c)`, one per line.
pub fn serialize_table_algebra(alg: &TableAlgebra) -> String {
    let raw = alg.to_raw();
    let mut out = String::from("{\n");
    let basis: Vec<String> = raw.labels.iter().map(|l| json_string(l)).collect();
    let star: Vec<String> = raw.star.iter().map(|s| s.to_string()).collect();
    writeln!(out, "  \"basis\": [{}],", basis.join(", ")).unwrap();
    writeln!(out, "  \"star\": [{}],", star.join(", ")).unwrap();
    if alg.mode() == Mode::CAlgebra {
        out.push_str("  \"mode\": \"c-algebra\",\n");
    }
    if let Some(d) = &raw.degrees {
        let d: Vec<String> = d.iter().map(|x| json_string(&format_rational(x))).collect();
        writeln!(out, "  \"degrees\": [{}],", d.join(", ")).unwrap();
    }
    out.push_str("  \"lambda\": [\n");
    let n = raw.entries.len();
    for (i, (a, b, c, v)) in raw.entries.iter().enumerate() {
        let sep = if i + 1 == n { "" } else { "," };
        writeln!(out, "    [{a}, {b}, {c}, {}]{sep}", json_string(&format_rational(v))).unwrap();
    }
    out.push_str("  ]\n}\n");
    out
}

/// `[[source, target], ...]` label pairs.
pub fn parse_label_pairs(text: &str) -> Result<Vec<(String, String)>, ParseError> {
    serde_json::from_str(text).map_err(syntax)
}

pub fn parse_homomorphism(
    text: &str,
    source: &TableAlgebra,
    target: &TableAlgebra,
) -> Result<TableHomomorphism, ParseError> {
    let pairs = parse_label_pairs(text)?;
    Ok(homomorphism_from_labels(source, target, &pairs)?)
}

pub fn serialize_homomorphism(phi: &TableHomomorphism) -> String {
    let lines: Vec<String> = phi
        .label_pairs()
        .iter()
        .map(|(a, b)| format!("  [{}, {}]", json_string(a), json_string(b)))
        .collect();
    format!("[\n{}\n]\n", lines.join(",\n"))
}

/// Parses the relation matrix of a scheme document without validating
/// the scheme axioms. Returns the matrix and the number of relations.
pub fn parse_relation_matrix(text: &str) -> Result<(Vec<Vec<usize>>, usize), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let number = |line: usize, line_text: &str, token: &str| -> Result<usize, ParseError> {
        token.parse::<usize>().map_err(|e| ParseError::Syntax {
            line,
            column: column_of(line_text, token),
            message: format!("{token:?}: {e}"),
        })
    };
    let (hline, header) = lines.next().ok_or(ParseError::Syntax {
        line: 1,
        column: 1,
        message: "missing header \"n d\"".into(),
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(ParseError::Syntax {
            line: hline,
            column: 1,
            message: format!("header must be \"n d\", found {} fields", tokens.len()),
        });
    }
    let n = number(hline, header, tokens[0])?;
    let d = number(hline, header, tokens[1])?;
    if n == 0 {
        return Err(SchemeError::Empty.into());
    }
    if n > MAX_DOCUMENT_POINTS {
        return Err(ParseError::TooLarge {
            dim: n,
            max: MAX_DOCUMENT_POINTS,
        });
    }
    let mut rel = Vec::with_capacity(n);
    for (line, text) in lines.by_ref() {
        if rel.len() == n {
            return Err(ParseError::Syntax {
                line,
                column: 1,
                message: format!("more than {n} rows"),
            });
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != n {
            return Err(ParseError::Syntax {
                line,
                column: 1,
                message: format!("row has {} entries, expected {n}", tokens.len()),
            });
        }
        let mut row = Vec::with_capacity(n);
        for t in tokens {
            let v = number(line, text, t)?;
            if v > d {
                return Err(ParseError::Syntax {
                    line,
                    column: column_of(text, t),
                    message: format!("relation index {v} exceeds d = {d}"),
                });
            }
            row.push(v);
        }
        rel.push(row);
    }
    if rel.len() != n {
        return Err(ParseError::Syntax {
            line: text.lines().count().max(1),
            column: 1,
            message: format!("{} rows, expected {n}", rel.len()),
        });
    }
    Ok((rel, d + 1))
}

/// 1-based column of `token`, which must be a subslice of `line`.
fn column_of(line: &str, token: &str) -> usize {
    token.as_ptr() as usize - line.as_ptr() as usize + 1
}

pub fn parse_scheme(text: &str) -> Result<AssociationScheme, ParseError> {
    let (rel, r) = parse_relation_matrix(text)?;
    Ok(AssociationScheme::with_relations(rel, Some(r))?)
}

pub fn serialize_scheme(s: &AssociationScheme) -> String {
    let mut out = format!("{} {}\n", s.points(), s.rank() - 1);
    for row in s.matrix() {
        let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{cayley_scheme, cyclic, group_algebra, schur_ring, z8_partition};

    const Z2: &str = r#"{"basis": ["1", "g"], "star": [0, 1],
        "lambda": [[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"],[1,1,0,"1"]]}"#;

    #[test]
    fn z2_document() {
        let a = parse_table_algebra(Z2).unwrap();
        assert!(a.same_structure(&group_algebra(&cyclic(2))));
        let text = serialize_table_algebra(&a);
        assert_eq!(serialize_table_algebra(&parse_table_algebra(&text).unwrap()), text);
    }

    #[test]
    fn z8s_round_trip() {
        let s = schur_ring(&cyclic(8), &z8_partition()).unwrap();
        let text = serialize_table_algebra(&s);
        let back = parse_table_algebra(&text).unwrap();
        assert!(back.same_structure(&s));
        assert_eq!(back.labels(), s.labels());
    }

    #[test]
    fn entry_out_of_bounds() {
        let doc = r#"{"basis": ["1", "g"], "star": [0, 1], "lambda": [[0,0,5,"1"]]}"#;
        match parse_table_algebra(doc) {
            Err(ParseError::Entry { entry, .. }) => assert_eq!(entry, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_rational_and_syntax() {
        let doc = Z2.replace(r#"[1,1,0,"1"]"#, r#"[1,1,0,"1/0"]"#);
        assert!(matches!(parse_table_algebra(&doc), Err(ParseError::Entry { entry: 3, .. })));
        match parse_table_algebra("{\n  \"basis\": [\"1\",\n  ]") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_identity() {
        let doc = r#"{"basis": ["g", "1"], "star": [0, 1],
            "lambda": [[0,0,1,"1"],[0,1,0,"1"],[1,0,0,"1"],[1,1,1,"1"]]}"#;
        assert!(matches!(parse_table_algebra(doc), Err(ParseError::MissingIdentity(_))));
    }

    #[test]
    fn c_algebra_document() {
        let doc = r#"{"basis": ["1", "x"], "star": [0, 1], "mode": "c-algebra",
            "lambda": [[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"],[1,1,0,"1/2"],[1,1,1,"-1/2"]]}"#;
        let a = parse_table_algebra(doc).unwrap();
        assert_eq!(a.mode(), Mode::CAlgebra);
        let text = serialize_table_algebra(&a);
        assert!(text.contains("c-algebra"));
        assert!(parse_table_algebra(&text).unwrap().same_structure(&a));
    }

    #[test]
    fn homomorphism_documents() {
        let z4 = group_algebra(&cyclic(4));
        let z2 = group_algebra(&cyclic(2));
        let phi = parse_homomorphism(r#"[["1","1"],["g","g"],["g2","1"],["g3","g"]]"#, &z4, &z2).unwrap();
        assert_eq!(phi.images(), &[0, 1, 0, 1]);
        let text = serialize_homomorphism(&phi);
        assert_eq!(parse_homomorphism(&text, &z4, &z2).unwrap().images(), phi.images());
    }

    #[test]
    fn scheme_documents() {
        let k3 = parse_scheme("3 1\n0 1 1\n1 0 1\n1 1 0\n").unwrap();
        assert_eq!(k3.valency(1), 2);
        let c = cayley_scheme(&cyclic(8), &z8_partition()).unwrap();
        let text = serialize_scheme(&c);
        assert_eq!(parse_scheme(&text).unwrap().matrix(), c.matrix());
        match parse_scheme("3 1\n0 1 1\n1 0\n1 1 0\n") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_scheme("2 1\n0 1\n1 x\n") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_scheme("2 1\n0 2\n1 0\n"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_scheme("2 1\n0 1\n0 0\n"), Err(ParseError::Scheme(_))));
    }
}
