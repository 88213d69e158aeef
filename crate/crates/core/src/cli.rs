//! The `torus` command line tool.
//!
//! Exit codes: 0 for a complete field or a valid certificate, 1 for an
//! incomplete field, an invalid certificate or a flow that breaks down, and
//! 2 for malformed input. Results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::document::{read_certificate, read_field, CertificateDocument, Document, FieldDocument};
use crate::error::Error;
use crate::field::{Form2, VectorField};
use crate::flow::{integrate_numeric, ExactFlow, FlowStatus, NumericOptions};
use crate::text::{default_vars, format_poly, parse_coefficient, parse_poly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "torus",
    version,
    about = "Completeness of Laurent-polynomial vector fields on (C*)^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide completeness and print the certificate.
    Decide {
        field: PathBuf,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Replay a certificate against a field.
    Verify {
        field: PathBuf,
        certificate: PathBuf,
    },
    /// Print one reduction step.
    Reduce { field: PathBuf },
    /// Print sum_i z_i dp_i/dz_i.
    Divergence { field: PathBuf },
    /// Print the planar canonical data of a complete field.
    Canonical2 { field: PathBuf },
    /// Evaluate the flow at a complex time.
    Flow(FlowArgs),
    /// Transport a field through a unimodular monomial map.
    Pushforward {
        field: PathBuf,
        /// Rows separated by ';', entries by ',', e.g. "1,0;1,1".
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Emit a field file.
    Generate(GenerateArgs),
    /// Decide every *.json field file in a directory.
    Batch {
        dir: PathBuf,
        /// Write NAME.cert.json for every input into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct FlowArgs {
    field: PathBuf,
    /// Comma separated start point, e.g. "1,0.5-2i".
    #[arg(long, allow_hyphen_values = true)]
    z0: String,
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, conflicts_with = "numeric")]
    exact: bool,
    #[arg(long)]
    numeric: bool,
    #[arg(long, default_value_t = NumericOptions::default().rtol)]
    rtol: f64,
    #[arg(long, default_value_t = NumericOptions::default().atol)]
    atol: f64,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Planar field a2 f(W) + c1, -(a1 f(W) + c2) with W = z1^a1 z2^a2.
    #[arg(long, required = true)]
    form2: bool,
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Polynomial in the variable w.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long)]
    label: Option<String>,
}

/// A command outcome other than plain success.
enum Fail {
    /// Exit 1 with a message.
    Negative(String),
    /// Exit 2 with a message.
    Input(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Input(e.to_string())
    }
}

type CmdResult = Result<i32, Fail>;

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Fail::Negative(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_NEGATIVE
        }
        Err(Fail::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Decide { field, cert_out } => decide(&field, cert_out.as_deref(), out),
        Command::Verify { field, certificate } => verify(&field, &certificate, out),
        Command::Reduce { field } => reduce(&field, out),
        Command::Divergence { field } => divergence(&field, out),
        Command::Canonical2 { field } => canonical2(&field, out),
        Command::Flow(args) => flow(&args, out),
        Command::Pushforward { field, matrix } => pushforward(&field, &matrix, out),
        Command::Generate(args) => generate(&args, out),
        Command::Batch { dir, out: out_dir } => batch(&dir, out_dir.as_deref(), out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Fail> {
    out.write_all(text.as_bytes())
        .map_err(|e| Fail::Input(format!("cannot write output: {e}")))
}

fn read_text(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn load_field(path: &Path) -> Result<(FieldDocument, VectorField), Fail> {
    read_field(&read_text(path)?).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn verdict_code(complete: bool) -> i32 {
    if complete {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn decide(path: &Path, cert_out: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let (_, field) = load_field(path)?;
    let cert = field.decide_complete()?;
    let json = Document::Certificate(CertificateDocument::from_certificate(&cert)).to_json();
    emit(out, &format!("{}\n", cert.verdict))?;
    match cert_out {
        Some(target) => fs::write(target, json)
            .map_err(|e| Fail::Input(format!("{}: {e}", target.display())))?,
        None => emit(out, &json)?,
    }
    Ok(verdict_code(cert.is_complete()))
}

fn verify(field_path: &Path, cert_path: &Path, out: &mut dyn Write) -> CmdResult {
    let (_, field) = load_field(field_path)?;
    let doc = read_certificate(&read_text(cert_path)?)
        .map_err(|e| Fail::Input(format!("{}: {e}", cert_path.display())))?;
    // A well-formed document whose contents do not hold up is an invalid
    // certificate rather than an input error.
    let cert = match doc.to_certificate() {
        Ok(cert) => cert,
        Err(e) => {
            emit(out, "invalid\n")?;
            return Err(Fail::Negative(format!("{}: {e}", cert_path.display())));
        }
    };
    if cert.verify(&field) {
        emit(out, &format!("valid ({})\n", cert.verdict))?;
        Ok(EXIT_OK)
    } else {
        emit(out, "invalid\n")?;
        Ok(EXIT_NEGATIVE)
    }
}

fn reduce(path: &Path, out: &mut dyn Write) -> CmdResult {
    let (doc, field) = load_field(path)?;
    let step = match field.reduce() {
        Ok(step) => step,
        Err(Error::ConstantField) => {
            emit(
                out,
                "every p_i is constant; the field is already diagonal\n",
            )?;
            return Ok(EXIT_OK);
        }
        Err(Error::FullRank(m)) => {
            return Err(Fail::Negative(format!(
                "exponent lattice has full rank {m}; the field is not complete"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let vars = doc.variables();
    let w = default_vars("w", step.basis.rank());
    let mut text = String::from("basis:\n");
    for (j, row) in step.basis.rows().iter().enumerate() {
        let mono: Vec<String> = row
            .entries()
            .iter()
            .zip(&vars)
            .filter(|(&a, _)| a != 0)
            .map(|(&a, v)| {
                if a == 1 {
                    v.clone()
                } else {
                    format!("{v}^{a}")
                }
            })
            .collect();
        text.push_str(&format!("  {row}  {} = {}\n", w[j], mono.join("*")));
    }
    text.push_str("rewritten:\n");
    for (i, f) in step.f_list.iter().enumerate() {
        text.push_str(&format!("  p{} = {}\n", i + 1, format_poly(f, &w)));
    }
    text.push_str("reduced field:\n");
    for (j, p) in step.reduced.ps().iter().enumerate() {
        text.push_str(&format!(
            "  d{0}/dt = {0} * ({1})\n",
            w[j],
            format_poly(p, &w)
        ));
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn divergence(path: &Path, out: &mut dyn Write) -> CmdResult {
    let (doc, field) = load_field(path)?;
    emit(
        out,
        &format!("{}\n", format_poly(&field.divergence(), &doc.variables())),
    )?;
    Ok(EXIT_OK)
}

fn canonical2(path: &Path, out: &mut dyn Write) -> CmdResult {
    let (_, field) = load_field(path)?;
    match field.canonical2() {
        Ok(form) => {
            emit(out, &form.to_string())?;
            Ok(EXIT_OK)
        }
        Err(Error::NotComplete) => Err(Fail::Negative("field is not complete".into())),
        Err(e) => Err(e.into()),
    }
}

fn flow(args: &FlowArgs, out: &mut dyn Write) -> CmdResult {
    let (_, field) = load_field(&args.field)?;
    let z0 = split_list(&args.z0)
        .iter()
        .map(|s| parse_complex(s))
        .collect::<Result<Vec<_>, _>>()?;
    let t = parse_complex(&args.t)?;
    let exact = if args.numeric {
        None
    } else {
        match ExactFlow::build(&field) {
            Ok(f) => Some(f),
            Err(e) if args.exact => return Err(Fail::Input(format!("no exact flow: {e}"))),
            Err(_) => None,
        }
    };
    let mut text = String::new();
    let code = match exact {
        Some(exact) => {
            let z = exact.eval(&z0, t)?;
            text.push_str("method: exact\n");
            if z.iter().all(|v| v.is_finite()) {
                text.push_str("status: ok\n");
                push_point(&mut text, &z);
                EXIT_OK
            } else {
                text.push_str("status: escape (endpoint leaves double range)\n");
                EXIT_NEGATIVE
            }
        }
        None => {
            let opts = NumericOptions {
                rtol: args.rtol,
                atol: args.atol,
                ..Default::default()
            };
            let result = integrate_numeric(&field, &z0, t, opts)?;
            text.push_str("method: numeric\n");
            match result.status {
                FlowStatus::Ok => {
                    text.push_str("status: ok\n");
                    push_point(&mut text, result.endpoint.as_deref().unwrap_or_default());
                }
                FlowStatus::Blowup { t_star } => text.push_str(&format!(
                    "status: blow-up near t* = {}\n",
                    format_complex(t_star)
                )),
                FlowStatus::Escape { t_star } => text.push_str(&format!(
                    "status: escape near t* = {}\n",
                    format_complex(t_star)
                )),
            }
            text.push_str(&format!(
                "steps: {} accepted, {} rejected\n",
                result.stats.steps, result.stats.rejected
            ));
            verdict_code(result.status.is_ok())
        }
    };
    emit(out, &text)?;
    Ok(code)
}

fn push_point(text: &mut String, z: &[Complex64]) {
    for (i, v) in z.iter().enumerate() {
        text.push_str(&format!("z{} = {}\n", i + 1, format_complex(*v)));
    }
}

fn pushforward(path: &Path, matrix: &str, out: &mut dyn Write) -> CmdResult {
    let (doc, field) = load_field(path)?;
    let a = parse_matrix(matrix)?;
    let moved = field.pushforward(&a)?;
    let label = Some(format!(
        "pushforward of {} by [{}]",
        doc.label.as_deref().unwrap_or("field"),
        matrix.trim()
    ));
    emit(
        out,
        &Document::Field(FieldDocument::from_field(&moved, label, doc.source)).to_json(),
    )?;
    Ok(EXIT_OK)
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> CmdResult {
    let a = parse_int_list(&args.a)?;
    if a.len() != 2 {
        return Err(Fail::Input(format!(
            "--a needs two integers, got {}",
            a.len()
        )));
    }
    let f =
        parse_poly(&args.f, &["w".to_string()]).map_err(|e| Fail::Input(format!("--f: {e}")))?;
    let c = split_list(&args.c)
        .iter()
        .map(|s| parse_coefficient(s).map_err(|e| Fail::Input(format!("--c: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let [c1, c2]: [_; 2] = c
        .try_into()
        .map_err(|c: Vec<_>| Fail::Input(format!("--c needs two coefficients, got {}", c.len())))?;
    let form = Form2 {
        a1: a[0],
        a2: a[1],
        f,
        c1,
        c2,
    };
    let field = form.to_field()?;
    let source = format!(
        "form2 a={},{} f={} c={}",
        a[0],
        a[1],
        args.f.trim(),
        args.c.trim()
    );
    let doc = FieldDocument::from_field(&field, args.label.clone(), Some(source));
    emit(out, &Document::Field(doc).to_json())?;
    Ok(EXIT_OK)
}

/// Verdict or error message for one file of a batch.
fn decide_file(path: &Path, out_dir: Option<&Path>) -> Result<String, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let (_, field) = read_field(&text).map_err(|e| e.to_string())?;
    let cert = field.decide_complete().map_err(|e| e.to_string())?;
    if let Some(dir) = out_dir {
        let stem = path.file_stem().unwrap_or_default().to_string_lossy();
        let target = dir.join(format!("{stem}.cert.json"));
        let json = Document::Certificate(CertificateDocument::from_certificate(&cert)).to_json();
        fs::write(&target, json).map_err(|e| format!("{}: {e}", target.display()))?;
    }
    Ok(cert.verdict.to_string())
}

fn batch(dir: &Path, out_dir: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let entries = fs::read_dir(dir).map_err(|e| Fail::Input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .filter(|p| !p.to_string_lossy().ends_with(".cert.json"))
        .collect();
    files.sort();
    if let Some(d) = out_dir {
        fs::create_dir_all(d).map_err(|e| Fail::Input(format!("{}: {e}", d.display())))?;
    }
    let results: Vec<Result<String, String>> =
        files.par_iter().map(|p| decide_file(p, out_dir)).collect();
    let mut text = String::new();
    let mut failed = false;
    for (path, r) in files.iter().zip(results) {
        let name = path.file_name().unwrap_or_default().to_string_lossy();
        match r {
            Ok(verdict) => text.push_str(&format!("{name}: {verdict}\n")),
            Err(e) => {
                failed = true;
                text.push_str(&format!("{name}: error: {e}\n"));
            }
        }
    }
    emit(out, &text)?;
    Ok(if failed { EXIT_INPUT } else { EXIT_OK })
}

/// Splits at commas outside parentheses.
fn split_list(s: &str) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            parts.push(String::new());
        } else {
            parts.last_mut().expect("non-empty").push(ch);
        }
    }
    parts.into_iter().map(|p| p.trim().to_string()).collect()
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, Fail> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Fail::Input(format!("bad integer {:?}", x.trim())))
        })
        .collect()
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>, Fail> {
    s.split(';').map(parse_int_list).collect()
}

fn parse_float(s: &str) -> Result<f64, Fail> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Fail::Input(format!("bad number {s:?}"))),
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` with decimal floats.
pub fn parse_complex_str(text: &str) -> Result<Complex64, String> {
    parse_complex(text).map_err(|f| match f {
        Fail::Input(m) | Fail::Negative(m) => m,
    })
}

fn parse_complex(text: &str) -> Result<Complex64, Fail> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Fail::Input(format!("bad complex number {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_float(&s).map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    if re.is_empty() {
        return Err(bad());
    }
    let re = parse_float(re).map_err(|_| bad())?;
    let im = parse_float(im).map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// `a+bi` with round-trip float formatting.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}
