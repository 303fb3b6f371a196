//! JSON documents for forms, algebras, Brauer classes and ideal-valued forms,
//! with plain-text table rendering.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebras::StructureAlgebra;
use crate::brauer::BrauerClass2;
use crate::dedekind::{FracIdeal, IdealValuedForm, QuadOrder};
use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::linalg::Matrix;
use crate::scalars::{Base, Scalar};

impl FromStr for Base {
    type Err = Error;

    /// Accepts `Q`, `F_p`, `Q(sqrt(d))` and `<base>(t)`.
    fn from_str(s: &str) -> Result<Base> {
        let s = s.trim();
        if let Some(inner) = s.strip_suffix("(t)") {
            return Base::function(inner.parse()?);
        }
        if s == "Q" {
            return Ok(Base::Rational);
        }
        if let Some(p) = s.strip_prefix("F_") {
            let p: u64 = p.parse().map_err(|_| Error::parse(s, "expected F_p"))?;
            return Base::prime_field(p);
        }
        if let Some(d) = s.strip_prefix("Q(sqrt(").and_then(|x| x.strip_suffix("))")) {
            let d: i64 = d.trim().parse().map_err(|_| Error::parse(s, "bad radicand"))?;
            return Base::quadratic(d);
        }
        Err(Error::parse(s, "unknown base; expected Q, F_p, Q(sqrt(d)) or <base>(t)"))
    }
}

fn parse_row(base: &Base, row: &[String], location: &str) -> Result<Vec<Scalar>> {
    row.iter()
        .enumerate()
        .map(|(j, s)| {
            base.parse_scalar(s).map_err(|e| Error::parse(format!("{location}[{j}]"), e.to_string()))
        })
        .collect()
}

fn parse_matrix(base: &Base, rows: &[Vec<String>]) -> Result<Matrix> {
    let n = rows.len();
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != n {
                return Err(Error::parse(
                    format!("gram[{i}]"),
                    format!("row has {} entries, expected {n}", row.len()),
                ));
            }
            parse_row(base, row, &format!("gram[{i}]"))
        })
        .collect::<Result<Vec<_>>>()?;
    if n == 0 {
        return Ok(Matrix::zeros(base, 0, 0));
    }
    Matrix::from_rows(base, parsed)
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(Scalar::to_string).collect())
        .collect()
}

/// `{"base": …, "gram": [[…]], "value_label": …}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDoc {
    pub base: String,
    pub gram: Vec<Vec<String>>,
    #[serde(default = "trivial_label")]
    pub value_label: String,
}

fn trivial_label() -> String {
    crate::forms::TRIVIAL_LABEL.to_string()
}

impl FormDoc {
    pub fn from_form(q: &QuadraticForm) -> FormDoc {
        FormDoc {
            base: q.base().to_string(),
            gram: matrix_strings(q.gram()),
            value_label: q.value_label().to_string(),
        }
    }

    pub fn to_form(&self) -> Result<QuadraticForm> {
        let base: Base = self.base.parse()?;
        QuadraticForm::with_label(parse_matrix(&base, &self.gram)?, &self.value_label)
    }
}

/// `{"base": …, "dim": n, "labels": […], "table": […]}` with the table
/// flattened as `(i·n + j)·n + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub base: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub table: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &StructureAlgebra) -> AlgebraDoc {
        AlgebraDoc {
            base: a.base().to_string(),
            dim: a.dim(),
            labels: a.labels().to_vec(),
            table: a.to_dense().iter().map(Scalar::to_string).collect(),
            unit: Some(a.unit().iter().map(Scalar::to_string).collect()),
        }
    }

    pub fn to_algebra(&self) -> Result<StructureAlgebra> {
        let base: Base = self.base.parse()?;
        if self.labels.len() != self.dim {
            return Err(Error::parse("labels", format!("{} labels for dimension {}", self.labels.len(), self.dim)));
        }
        let table = parse_row(&base, &self.table, "table")?;
        let unit = self.unit.as_ref().map(|u| parse_row(&base, u, "unit")).transpose()?;
        StructureAlgebra::from_dense(&base, self.labels.clone(), &table, unit)
    }
}

/// Ideal-valued form with ideals as generator pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFormDoc {
    pub d: i64,
    pub coefficients: Vec<FracIdeal>,
    pub gram: Vec<Vec<String>>,
    pub value: FracIdeal,
}

impl IdealFormDoc {
    pub fn from_form(q: &IdealValuedForm) -> IdealFormDoc {
        IdealFormDoc {
            d: q.order().d(),
            coefficients: q.coefficients().to_vec(),
            gram: matrix_strings(q.gram()),
            value: q.value().clone(),
        }
    }

    pub fn to_form(&self) -> Result<IdealValuedForm> {
        let order = QuadOrder::new(self.d)?;
        IdealValuedForm::new(order, self.coefficients.clone(), parse_matrix(&order.base(), &self.gram)?, self.value.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Form,
    Algebra,
    Brauer,
    IdealForm,
}

impl FromStr for DocKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<DocKind> {
        match s {
            "form" => Ok(DocKind::Form),
            "algebra" => Ok(DocKind::Algebra),
            "brauer" => Ok(DocKind::Brauer),
            "ideal-form" => Ok(DocKind::IdealForm),
            other => Err(Error::InvalidInput(format!(
                "unknown document kind {other}; expected form, algebra, brauer or ideal-form"
            ))),
        }
    }
}

/// A validated document.
#[derive(Clone, Debug)]
pub enum Document {
    Form(QuadraticForm),
    Algebra(StructureAlgebra),
    Brauer(BrauerClass2),
    IdealForm(IdealValuedForm),
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(format!("{source}:{}:{}", e.line(), e.column()), e.to_string()))
}

pub fn read_document(text: &str, kind: DocKind, source: &str) -> Result<Document> {
    Ok(match kind {
        DocKind::Form => Document::Form(from_json::<FormDoc>(text, source)?.to_form()?),
        DocKind::Algebra => Document::Algebra(from_json::<AlgebraDoc>(text, source)?.to_algebra()?),
        DocKind::Brauer => Document::Brauer(from_json(text, source)?),
        DocKind::IdealForm => Document::IdealForm(from_json::<IdealFormDoc>(text, source)?.to_form()?),
    })
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// Canonical pretty-printed JSON, newline-terminated.
pub fn canonical_json(doc: &Document) -> String {
    match doc {
        Document::Form(q) => pretty(&FormDoc::from_form(q)),
        Document::Algebra(a) => pretty(&AlgebraDoc::from_algebra(a)),
        Document::Brauer(c) => pretty(c),
        Document::IdealForm(q) => pretty(&IdealFormDoc::from_form(q)),
    }
}

fn render_grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Human-readable rendering.
pub fn render_table(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::Form(q) => {
            let _ = writeln!(out, "form over {} valued in {}, rank {}", q.base(), q.value_label(), q.rank());
            out.push_str(&render_grid(&matrix_strings(q.gram())));
        }
        Document::Algebra(a) => {
            let _ = writeln!(out, "algebra over {} of dimension {}", a.base(), a.dim());
            let mut rows = vec![std::iter::once("*".to_string()).chain(a.labels().iter().cloned()).collect::<Vec<_>>()];
            for i in 0..a.dim() {
                let mut row = vec![a.labels()[i].clone()];
                for j in 0..a.dim() {
                    let terms: Vec<String> = a
                        .product(i, j)
                        .iter()
                        .map(|(k, c)| {
                            if c.is_one() {
                                a.labels()[*k].clone()
                            } else {
                                format!("({c}){}", a.labels()[*k])
                            }
                        })
                        .collect();
                    row.push(if terms.is_empty() { "0".into() } else { terms.join("+") });
                }
                rows.push(row);
            }
            out.push_str(&render_grid(&rows));
        }
        Document::Brauer(c) => {
            let _ = writeln!(out, "ramified at {c}, index {}", c.index());
        }
        Document::IdealForm(q) => {
            let _ = writeln!(out, "form over {} valued in {}, rank {}", q.order(), q.value(), q.rank());
            for (i, a) in q.coefficients().iter().enumerate() {
                let _ = writeln!(out, "a{} = {a}", i + 1);
            }
            out.push_str(&render_grid(&matrix_strings(q.gram())));
        }
    }
    out
}

/// Reads `input` as `kind` and writes canonical JSON when `output` ends in
/// `.json`, a table otherwise.
pub fn convert(input: &Path, output: &Path, kind: DocKind) -> Result<()> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", input.display())))?;
    let doc = read_document(&text, kind, &input.display().to_string())?;
    let rendered = if output.extension().is_some_and(|e| e == "json") {
        canonical_json(&doc)
    } else {
        render_table(&doc)
    };
    std::fs::write(output, rendered).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", output.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::even_clifford;
    use crate::forms::DiagonalForm;

    #[test]
    fn bases_round_trip() {
        for b in [Base::Rational, Base::PrimeField(7), Base::Quadratic(-5), Base::function(Base::PrimeField(5)).unwrap()] {
            assert_eq!(b.to_string().parse::<Base>().unwrap(), b);
        }
        assert!("F_4".parse::<Base>().is_err());
        assert!("R".parse::<Base>().is_err());
    }

    #[test]
    fn form_json_is_canonical() {
        let text = r#"{"base":"Q","gram":[["2/4","0"],["0","-3"]]}"#;
        let doc = read_document(text, DocKind::Form, "inline").unwrap();
        let once = canonical_json(&doc);
        let twice = canonical_json(&read_document(&once, DocKind::Form, "inline").unwrap());
        assert_eq!(once, twice);
        assert!(once.contains("\"1/2\""));
    }

    #[test]
    fn malformed_gram_reports_location() {
        let text = r#"{"base":"Q","gram":[["1","0"],["0"]]}"#;
        match read_document(text, DocKind::Form, "inline") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "gram[1]"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_document("{", DocKind::Form, "f.json"), Err(Error::Parse { .. })));
    }

    #[test]
    fn algebra_round_trip() {
        let c = even_clifford(&DiagonalForm::from_ints(&Base::Rational, &[1, -2, 3]).unwrap()).unwrap();
        let doc = Document::Algebra(c.algebra.clone());
        let json = canonical_json(&doc);
        match read_document(&json, DocKind::Algebra, "inline").unwrap() {
            Document::Algebra(a) => assert_eq!(a.to_dense(), c.algebra.to_dense()),
            _ => unreachable!(),
        }
        assert!(render_table(&doc).contains("e1e2"));
    }
}
