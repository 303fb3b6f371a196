use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qfinv::algebras::{quaternion, split_idempotent, StructureAlgebra};
use qfinv::brauer::{class_of_algebra, class_of_quaternion, parse_places, quaternion_from_class_with_cap, REALIZATION_CAP};
use qfinv::clifford::{
    clifford_bimodule, discriminant_algebra, even_clifford, even_clifford_of, split_components, sum_isomorphism,
};
use qfinv::dedekind::{
    even_clifford_order, hyperbolic_ideal_form, ClassGroupMod2, EvenCliffordOrder, QuadOrder, SEMISIMPLE_PRIME_BOUND,
};
use qfinv::exceptional::{albert_form, norm_roundtrip_check, pfaffian_roundtrip_check, reduced_norm_form};
use qfinv::forms::{signed_discriminant, to_diagonal, witt_decompose, DiagonalForm, QuadraticForm};
use qfinv::invariants::{construct_preimage, e0_form, e1_form, e2_form, milnor_reciprocity_check};
use qfinv::io::{canonical_json, convert, read_document, AlgebraDoc, DocKind, Document, IdealFormDoc};
use qfinv::scalars::{Base, Scalar};
use qfinv::verify::{run_suite, SUITES};
use qfinv::{Error, Result};

#[derive(Parser)]
#[command(name = "qfinv", version, about = "Even Clifford algebras, Witt invariants and Brauer classes of quadratic forms")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic forms.
    #[command(subcommand)]
    Qf(QfCmd),
    /// Structure-constant algebras.
    #[command(subcommand)]
    Alg(AlgCmd),
    /// Even Clifford algebras and Clifford bimodules.
    #[command(subcommand)]
    Cliff(CliffCmd),
    /// Brauer classes over Q.
    #[command(subcommand)]
    Br(BrCmd),
    /// The invariants e0, e1, e2 and residues.
    #[command(subcommand)]
    Inv(InvCmd),
    /// Reduced norm and Albert forms.
    #[command(subcommand)]
    Exc(ExcCmd),
    /// Ideal-valued forms over quadratic orders.
    #[command(subcommand)]
    Ded(DedCmd),
    /// Run a named verification suite, or `list`.
    Suite {
        name: String,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
    },
    /// Convert a JSON document to canonical JSON (`.json` output) or a table.
    Convert {
        input: PathBuf,
        output: PathBuf,
        /// form, algebra, brauer or ideal-form
        #[arg(long, default_value = "form")]
        kind: String,
    },
}

/// A form given as a JSON file or as diagonal entries.
#[derive(Args)]
struct FormInput {
    /// JSON form document.
    #[arg(long, conflicts_with = "diag")]
    file: Option<PathBuf>,
    /// Comma-separated diagonal entries.
    #[arg(long, allow_hyphen_values = true)]
    diag: Option<String>,
    /// Base field: Q, F_p, Q(sqrt(d)), Q(t), F_p(t).
    #[arg(long, default_value = "Q")]
    base: String,
}

impl FormInput {
    fn form(&self) -> Result<QuadraticForm> {
        match (&self.file, &self.diag) {
            (Some(path), _) => match read_document(&read(path)?, DocKind::Form, &path.display().to_string())? {
                Document::Form(q) => Ok(q),
                _ => unreachable!(),
            },
            (None, Some(entries)) => Ok(diagonal(&self.base, entries)?.to_form()),
            (None, None) => Err(Error::InvalidInput("give --file or --diag".into())),
        }
    }

    fn diagonal(&self) -> Result<DiagonalForm> {
        to_diagonal(&self.form()?)
    }
}

#[derive(Subcommand)]
enum QfCmd {
    /// Diagonalize.
    Diag(FormInput),
    /// Witt index and anisotropic kernel.
    Witt(FormInput),
    /// Signed discriminant.
    Disc(FormInput),
}

#[derive(Subcommand)]
enum AlgCmd {
    /// Basis of the center.
    Center { file: PathBuf },
    /// Central idempotents.
    Idempotents { file: PathBuf },
    /// The quaternion algebra (a, b).
    Quaternion {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "Q")]
        base: String,
    },
}

#[derive(Subcommand)]
enum CliffCmd {
    /// Structure constants of C0.
    Even(FormInput),
    /// Dimension and action check of C1.
    Bimodule(FormInput),
    /// Center and discriminant algebra of C0.
    Center(FormInput),
    /// The two components of C0 for even rank with split center.
    Split(FormInput),
    /// Check the isomorphism C0(q + r) = C0(q)(x)C0(r) + C1(q)(x)C1(r).
    SumCheck {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        #[arg(long, default_value = "Q")]
        base: String,
    },
}

#[derive(Subcommand)]
enum BrCmd {
    /// Ramification of the quaternion algebra (a, b).
    Class {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
    },
    /// A quaternion algebra with the given ramification.
    Realize {
        /// Comma-separated places, e.g. 2,3 or 2,inf.
        #[arg(long, default_value = "")]
        ramified: String,
        #[arg(long, default_value_t = REALIZATION_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum InvCmd {
    /// Rank mod 2.
    E0(FormInput),
    /// Signed discriminant.
    E1(FormInput),
    /// Clifford invariant of a form in I^2.
    E2(FormInput),
    /// A form in I^2 with prescribed e2.
    Preimage {
        #[arg(long, default_value = "")]
        ramified: String,
    },
    /// Residue reciprocity for a form over Q(t) or F_p(t).
    Reciprocity(FormInput),
}

#[derive(Subcommand)]
enum ExcCmd {
    /// Reduced norm form of (a, b).
    Norm {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Albert form of (a, b) (x) (c, d).
    Albert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Round trip: two parameters for a quaternion, four for a biquaternion.
    Roundtrip {
        #[arg(allow_hyphen_values = true, num_args = 2..=4, required = true)]
        params: Vec<String>,
    },
}

#[derive(Subcommand)]
enum DedCmd {
    /// Representatives of Cl(O)/2.
    Clgrp {
        #[arg(short, allow_hyphen_values = true)]
        d: i64,
    },
    /// The hyperbolic form on Hom(O^r, L) + O^r.
    Hyp(HypArgs),
    /// Even Clifford order of a hyperbolic or file-given form.
    CliffordOrder {
        #[command(flatten)]
        hyp: HypArgs,
        /// JSON ideal-form document instead of a hyperbolic form.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Args)]
struct HypArgs {
    #[arg(short, allow_hyphen_values = true, default_value_t = -5)]
    d: i64,
    /// Label of the value ideal from `ded clgrp`.
    #[arg(long, default_value = "O")]
    value: String,
    #[arg(long, default_value_t = 1)]
    rank: usize,
}

impl HypArgs {
    fn form(&self) -> Result<qfinv::dedekind::IdealValuedForm> {
        let order = QuadOrder::new(self.d)?;
        let classes = ClassGroupMod2::compute(order)?;
        let value = classes
            .representative(&self.value)
            .ok_or_else(|| Error::InvalidInput(format!("unknown class label {}", self.value)))?;
        hyperbolic_ideal_form(&vec![order.unit_ideal(); self.rank], &value.ideal)
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn diagonal(base: &str, entries: &str) -> Result<DiagonalForm> {
    let base: Base = base.parse()?;
    let values = entries
        .split(',')
        .map(|s| base.parse_scalar(s))
        .collect::<Result<Vec<_>>>()?;
    DiagonalForm::new(&base, values)
}

fn rational(s: &str) -> Result<Scalar> {
    Base::Rational.parse_scalar(s)
}

fn algebra_file(path: &PathBuf) -> Result<StructureAlgebra> {
    match read_document(&read(path)?, DocKind::Algebra, &path.display().to_string())? {
        Document::Algebra(a) => Ok(a),
        _ => unreachable!(),
    }
}

fn vector_json(v: &[Scalar]) -> Value {
    json!(v.iter().map(Scalar::to_string).collect::<Vec<_>>())
}

fn diag_json(q: &DiagonalForm) -> Value {
    json!({ "base": q.base().to_string(), "entries": vector_json(q.entries()) })
}

fn diag_text(q: &DiagonalForm) -> String {
    let entries: Vec<String> = q.entries().iter().map(Scalar::to_string).collect();
    format!("<{}>", entries.join(", "))
}

fn order_json(c: &EvenCliffordOrder) -> Result<Value> {
    let reductions: Vec<Value> = [3u64, 7, 23]
        .iter()
        .map(|&p| match c.reduction_commutes(p) {
            Ok(ok) => json!({ "p": p, "commutes": ok }),
            Err(e) => json!({ "p": p, "skipped": e.to_string() }),
        })
        .collect();
    let semisimple: Vec<Value> = c
        .semisimplicity_report(SEMISIMPLE_PRIME_BOUND)?
        .into_iter()
        .map(|(p, ok)| json!({ "p": p, "semisimple": ok }))
        .collect();
    Ok(json!({
        "dim": c.dim(),
        "labels": c.algebra.labels(),
        "ideals": c.ideals,
        "closure": true,
        "product_of_two_orders": c.splits_as_product()?,
        "split_certificates_best_effort": c.split_certificates()?.is_some(),
        "reductions": reductions,
        "semisimple_reductions": semisimple,
        "algebra": AlgebraDoc::from_algebra(&c.algebra),
    }))
}

/// Runs a command; returns its JSON value, its text rendering and an exit code.
fn run(cli: &Cli) -> Result<(Value, String, i32)> {
    let ok = |v: Value, t: String| Ok((v, t, 0));
    match &cli.command {
        Command::Qf(cmd) => match cmd {
            QfCmd::Diag(f) => {
                let d = f.diagonal()?;
                ok(diag_json(&d), diag_text(&d))
            }
            QfCmd::Witt(f) => {
                let w = witt_decompose(&f.form()?)?;
                ok(
                    json!({ "index": w.index, "kernel": diag_json(&w.kernel) }),
                    format!("{} hyperbolic planes + {}", w.index, diag_text(&w.kernel)),
                )
            }
            QfCmd::Disc(f) => {
                let s = signed_discriminant(&f.form()?)?;
                ok(json!({ "signed_discriminant": s }), s.to_string())
            }
        },
        Command::Alg(cmd) => match cmd {
            AlgCmd::Center { file } => {
                let a = algebra_file(file)?;
                let center: Vec<Value> = a.center().iter().map(|v| vector_json(v)).collect();
                let text = format!("center of dimension {}", center.len());
                ok(json!({ "dim": center.len(), "basis": center }), text)
            }
            AlgCmd::Idempotents { file } => {
                let a = algebra_file(file)?;
                let idem: Vec<Value> = a.central_idempotents()?.iter().map(|v| vector_json(v)).collect();
                let text = format!("{} central idempotents", idem.len());
                ok(json!({ "idempotents": idem }), text)
            }
            AlgCmd::Quaternion { a, b, base } => {
                let base: Base = base.parse()?;
                let alg = quaternion(&base.parse_scalar(a)?, &base.parse_scalar(b)?)?;
                let text = canonical_json(&Document::Algebra(alg.clone()));
                ok(serde_json::to_value(AlgebraDoc::from_algebra(&alg)).expect("serializable"), text)
            }
        },
        Command::Cliff(cmd) => match cmd {
            CliffCmd::Even(f) => {
                let c = even_clifford_of(&f.form()?)?;
                let doc = Document::Algebra(c.algebra.clone());
                ok(
                    serde_json::to_value(AlgebraDoc::from_algebra(&c.algebra)).expect("serializable"),
                    qfinv::io::render_table(&doc),
                )
            }
            CliffCmd::Bimodule(f) => {
                let b = clifford_bimodule(&f.diagonal()?)?;
                let commute = b.actions_commute();
                ok(
                    json!({ "dim": b.dim(), "actions_commute": commute }),
                    format!("C1 of dimension {}, actions commute: {commute}", b.dim()),
                )
            }
            CliffCmd::Center(f) => {
                let q = f.diagonal()?;
                let c = even_clifford(&q)?;
                let dim = c.algebra.center().len();
                let mut v = json!({ "center_dim": dim });
                let mut text = format!("center of dimension {dim}");
                if q.rank() % 2 == 0 {
                    let d = discriminant_algebra(&q)?;
                    v["delta"] = json!(d.delta.to_string());
                    v["split"] = json!(d.split);
                    text.push_str(&format!(", x^2 = {}, split: {}", d.delta, d.split));
                }
                ok(v, text)
            }
            CliffCmd::Split(f) => {
                let q = f.diagonal()?;
                let sc = split_components(&even_clifford(&q)?)?;
                let mut v = json!({ "plus_dim": sc.plus.dim(), "minus_dim": sc.minus.dim() });
                let mut text = format!("components of dimension {} and {}", sc.plus.dim(), sc.minus.dim());
                if *q.base() == Base::Rational && sc.plus.dim() == 4 {
                    let (p, m) = (class_of_algebra(&sc.plus)?, class_of_algebra(&sc.minus)?);
                    v["plus_class"] = serde_json::to_value(&p).expect("serializable");
                    v["minus_class"] = serde_json::to_value(&m).expect("serializable");
                    text.push_str(&format!("; classes {p} and {m}"));
                } else if sc.plus.dim() == 4 {
                    let split = split_idempotent(&sc.plus)?.is_some() && split_idempotent(&sc.minus)?.is_some();
                    v["split"] = json!(split);
                    text.push_str(&format!("; both split: {split}"));
                }
                ok(v, text)
            }
            CliffCmd::SumCheck { left, right, base } => {
                let s = sum_isomorphism(&diagonal(base, left)?, &diagonal(base, right)?)?;
                let iso = s.is_isomorphism();
                let v = json!({ "dim": s.target.dim(), "isomorphism": iso });
                Ok((v, format!("isomorphism of {}-dimensional algebras: {iso}", s.target.dim()), if iso { 0 } else { 1 }))
            }
        },
        Command::Br(cmd) => match cmd {
            BrCmd::Class { a, b } => {
                let (a, b) = (rational(a)?, rational(b)?);
                let c = class_of_quaternion(&a.to_rational().expect("rational"), &b.to_rational().expect("rational"))?;
                ok(serde_json::to_value(&c).expect("serializable"), c.to_string())
            }
            BrCmd::Realize { ramified, cap } => {
                let c = parse_places(ramified)?;
                let (a, b) = quaternion_from_class_with_cap(&c, *cap)?;
                ok(
                    json!({ "class": c, "a": a.to_string(), "b": b.to_string() }),
                    format!("({a}, {b})"),
                )
            }
        },
        Command::Inv(cmd) => match cmd {
            InvCmd::E0(f) => {
                let e = e0_form(&f.form()?);
                ok(json!({ "e0": e }), e.to_string())
            }
            InvCmd::E1(f) => {
                let e = e1_form(&f.form()?)?;
                ok(json!({ "e1": e }), e.to_string())
            }
            InvCmd::E2(f) => {
                let e = e2_form(&f.form()?)?;
                ok(serde_json::to_value(&e).expect("serializable"), e.to_string())
            }
            InvCmd::Preimage { ramified } => {
                let q = construct_preimage(&parse_places(ramified)?)?;
                ok(diag_json(&q), diag_text(&q))
            }
            InvCmd::Reciprocity(f) => {
                let r = milnor_reciprocity_check(&f.diagonal()?)?;
                let residues: Vec<Value> = r.residues.iter().map(|(p, n)| json!({ "place": p, "rank": n })).collect();
                let v = json!({ "residues": residues, "total_rank": r.total_rank, "holds": r.holds });
                let text = format!("{} residues, reciprocity holds: {}", r.residues.len(), r.holds);
                Ok((v, text, if r.holds { 0 } else { 1 }))
            }
        },
        Command::Exc(cmd) => match cmd {
            ExcCmd::Norm { a, b } => {
                let n = reduced_norm_form(&rational(a)?, &rational(b)?)?;
                ok(diag_json(&n.form), diag_text(&n.form))
            }
            ExcCmd::Albert { a, b, c, d } => {
                let f = albert_form(&rational(a)?, &rational(b)?, &rational(c)?, &rational(d)?)?;
                ok(diag_json(&f.form), diag_text(&f.form))
            }
            ExcCmd::Roundtrip { params } => {
                let p = params.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>()?;
                match p.len() {
                    2 => {
                        let r = norm_roundtrip_check(&p[0], &p[1])?;
                        let v = json!({ "expected": r.expected, "plus": r.plus, "minus": r.minus, "holds": r.holds() });
                        let text = format!("expected {}, components {} and {}", r.expected, r.plus, r.minus);
                        Ok((v, text, if r.holds() { 0 } else { 1 }))
                    }
                    4 => {
                        let r = pfaffian_roundtrip_check(&p[0], &p[1], &p[2], &p[3])?;
                        let v = json!({
                            "expected": r.expected,
                            "e2": r.class,
                            "alternating_dim": r.alternating_dim,
                            "pfaffian_matches_albert": r.pfaffian_matches_albert,
                            "holds": r.holds(),
                        });
                        let text = format!("expected {}, e2 of the Albert form {}", r.expected, r.class);
                        Ok((v, text, if r.holds() { 0 } else { 1 }))
                    }
                    n => Err(Error::InvalidInput(format!("roundtrip takes 2 or 4 parameters, got {n}"))),
                }
            }
        },
        Command::Ded(cmd) => match cmd {
            DedCmd::Clgrp { d } => {
                let classes = ClassGroupMod2::compute(QuadOrder::new(*d)?)?;
                let text = classes
                    .representatives
                    .iter()
                    .map(|r| format!("{} = {}", r.label, r.ideal))
                    .collect::<Vec<_>>()
                    .join("\n");
                ok(
                    json!({ "class_number": classes.class_number(), "representatives": classes.representatives }),
                    text,
                )
            }
            DedCmd::Hyp(h) => {
                let q = h.form()?;
                let doc = Document::IdealForm(q.clone());
                let mut v = serde_json::to_value(IdealFormDoc::from_form(&q)).expect("serializable");
                v["regular"] = json!(q.is_regular());
                ok(v, qfinv::io::render_table(&doc))
            }
            DedCmd::CliffordOrder { hyp, file } => {
                let q = match file {
                    Some(path) => match read_document(&read(path)?, DocKind::IdealForm, &path.display().to_string())? {
                        Document::IdealForm(q) => q,
                        _ => unreachable!(),
                    },
                    None => hyp.form()?,
                };
                let c = even_clifford_order(&q)?;
                let v = order_json(&c)?;
                let text = format!(
                    "order of rank {} over {}; closure holds; product of two orders: {}",
                    c.dim(),
                    q.order(),
                    v["product_of_two_orders"]
                );
                ok(v, text)
            }
        },
        Command::Suite { name, parallelism } => {
            if name == "list" {
                let list: Vec<Value> = SUITES
                    .iter()
                    .map(|s| json!({ "name": s.name, "cases": s.cases, "description": s.description }))
                    .collect();
                let text = SUITES
                    .iter()
                    .map(|s| format!("{:<20} {}", s.name, s.description))
                    .collect::<Vec<_>>()
                    .join("\n");
                return ok(json!(list), text);
            }
            let report = run_suite(name, cli.seed, *parallelism)?;
            let text = format!(
                "{}: {} cases, {} failures (seed {})",
                report.suite,
                report.cases,
                report.failures.len(),
                report.seed
            );
            let code = report.exit_code();
            Ok((serde_json::to_value(&report).expect("serializable"), text, code))
        }
        Command::Convert { input, output, kind } => {
            convert(input, output, kind.parse()?)?;
            ok(json!({ "written": output.display().to_string() }), format!("wrote {}", output.display()))
        }
    }
}

/// Writes a line to stdout, ignoring a closed pipe.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, text, code)) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&value).expect("serializable"));
            } else {
                emit(text.trim_end());
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            if cli.json {
                emit(&json!({ "error": e.to_string() }).to_string());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
