use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use montrep_core::enumerate::{
    enumerate_all, enumerate_tuples_mu_nonzero, Case, EnumError, EnumOptions, Enumeration,
};
use montrep_core::mat2::{mat_a, Mat2};
use montrep_core::rational::TangleData;
use montrep_core::tangle::{
    build_diagram, build_montesinos_diagram, ends_closed_form, parse_montesinos, parse_tangle,
    propagate, EndMatrices, Parsed, TangleError, TangleExpr,
};
use montrep_core::verify::{
    count_components, find_residual_roots, scan_closure_residual, verify_chain,
};
use montrep_core::{MontesinosSpec, C64};
use thiserror::Error;

use crate::args::{
    Cli, Command, ComponentsArgs, Dedupe, EnumOpts, Format, ScanArgs, TangleEndsArgs, VerifyArgs,
};
use crate::json::{self, ClassOut, Cx, EnumDocument, Link, RunInfo, Summary, WarningOut};
use crate::sample::lambda_samples;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    VerificationFailed = 1,
    InputError = 2,
    NumericFailure = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Input(_) => Exit::InputError,
            CliError::Numeric(_) => Exit::NumericFailure,
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::UsedWrongCase(_)
            | EnumError::TooManyTuples(_)
            | EnumError::InvalidParameter(_)
            | EnumError::Rational(_) => CliError::Input(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn input<E: ToString>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Input(format!("i/o: {e}"))
}

pub fn parse_spec(text: &str) -> Result<MontesinosSpec, CliError> {
    parse_montesinos(text).map_err(input)
}

pub fn parse_complex(text: &str) -> Result<C64, CliError> {
    let t = text.trim();
    t.parse::<C64>()
        .map_err(|_| CliError::Input(format!("not a complex number: {t:?}")))
        .and_then(|z| {
            if z.re.is_finite() && z.im.is_finite() {
                Ok(z)
            } else {
                Err(CliError::Input(format!("not finite: {t:?}")))
            }
        })
}

fn parse_cases(names: &[String]) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    for name in names {
        let case = Case::parse(name.trim())
            .ok_or_else(|| CliError::Input(format!("unknown case {name:?}")))?;
        if !cases.contains(&case) {
            cases.push(case);
        }
    }
    cases.sort();
    Ok(cases)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable document");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err)
}

fn components(spec: &MontesinosSpec) -> Result<usize, CliError> {
    count_components(&build_montesinos_diagram(spec)).map_err(|e| CliError::Numeric(e.to_string()))
}

/// The enumeration options and the echo of the run configuration.
pub fn options(spec: &MontesinosSpec, opts: &EnumOpts) -> Result<(EnumOptions, RunInfo), CliError> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(CliError::Input(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let cases = parse_cases(&opts.cases)?;
    let a_samples = if opts.a_values.is_empty() {
        montrep_core::enumerate::default_a_samples()
    } else {
        opts.a_values
            .iter()
            .map(|t| parse_complex(t))
            .collect::<Result<Vec<_>, _>>()?
    };
    let free = spec.len().saturating_sub(2);
    let lambdas = if free == 0 {
        Vec::new()
    } else {
        lambda_samples(opts.seed, opts.samples as usize, free)
    };
    let info = RunInfo {
        command: "enum",
        cases: cases.iter().map(|c| c.name()).collect(),
        tol: opts.tol,
        samples: opts.samples as usize,
        seed: opts.seed,
        a_values: a_samples.iter().map(|&z| z.into()).collect(),
        lambda_samples: lambdas
            .iter()
            .map(|v| v.iter().map(|&z| Cx::from(z)).collect())
            .collect(),
        dedupe: opts.dedupe == Some(Dedupe::Characters),
    };
    let eo = EnumOptions {
        cases,
        tol: opts.tol,
        a_samples,
        lambda_samples: lambdas,
        dedupe_characters: info.dedupe,
    };
    Ok((eo, info))
}

/// Builds the full `enum` document.
pub fn enum_document(
    spec_text: &str,
    opts: &EnumOpts,
) -> Result<(EnumDocument, Enumeration), CliError> {
    let spec = parse_spec(spec_text)?;
    let (eo, info) = options(&spec, opts)?;
    let e = enumerate_all(&spec, &eo)?;
    let doc = EnumDocument {
        schema: json::SCHEMA,
        link: Link::new(&spec, components(&spec)?),
        mu: json::mu_string(&spec),
        expansions: json::expansions(&spec),
        report: Summary::of(&e, &eo.cases),
        run: info,
        classes: e.classes.iter().map(ClassOut::from).collect(),
        warnings: e.warnings.iter().map(WarningOut::from).collect(),
    };
    Ok((doc, e))
}

fn fmt_key(key: &[i64]) -> String {
    key.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_residual(r: Option<f64>) -> String {
    r.map_or_else(|| "inf".to_string(), |x| format!("{x:.2e}"))
}

fn enum_text(doc: &EnumDocument, e: &Enumeration) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}  mu = {}  components = {}  crossings = {}",
        doc.link.spec, doc.mu, doc.link.components, doc.link.crossings
    );
    for (c, class) in e.classes.iter().zip(&doc.classes) {
        let (key, sample) = c.params.key();
        let _ = writeln!(
            out,
            "{:<4} ({}) #{}  residual {}  {}",
            c.case.roman(),
            fmt_key(&key),
            sample,
            fmt_residual(class.residual),
            if c.verified() { "ok" } else { "FAIL" }
        );
    }
    for (name, count) in &doc.report.per_case {
        let _ = writeln!(out, "total {name}: {count}");
    }
    let _ = writeln!(
        out,
        "classes {}  verified {}  failed {}  warnings {}",
        doc.report.total,
        doc.report.verified,
        doc.report.failed,
        doc.warnings.len()
    );
    out
}

fn run_enum(spec: &str, opts: &EnumOpts, out: &mut dyn Write) -> Result<Exit, CliError> {
    let (doc, e) = enum_document(spec, opts)?;
    let text = to_json(&doc);
    if let Some(path) = &opts.json {
        write_file(path, &text)?;
    }
    let shown = match opts.format {
        Format::Json => text,
        Format::Text => enum_text(&doc, &e),
    };
    out.write_all(shown.as_bytes()).map_err(io_err)?;
    Ok(if doc.report.pass {
        Exit::Success
    } else {
        Exit::VerificationFailed
    })
}

/// Re-verifies every class of a saved document from its matrices alone.
pub fn verify_document(text: &str, tol: f64) -> Result<json::VerifyDocument, CliError> {
    let doc: json::LoadedDocument = serde_json::from_str(text).map_err(input)?;
    if doc.schema != json::SCHEMA {
        return Err(CliError::Input(format!(
            "unsupported schema {}",
            doc.schema
        )));
    }
    let pairs: Vec<(i64, i64)> = doc.link.fractions.iter().map(|f| (f[0], f[1])).collect();
    let spec = MontesinosSpec::from_pairs(&pairs).map_err(input)?;
    let diagram = build_montesinos_diagram(&spec);
    let mut classes = Vec::with_capacity(doc.classes.len());
    for (index, c) in doc.classes.iter().enumerate() {
        let x: Vec<Mat2> = c.matrices.x.iter().map(|&m| m.into()).collect();
        let y: Vec<Mat2> = c.matrices.y.iter().map(|&m| m.into()).collect();
        if x.len() != spec.len() || y.len() != spec.len() {
            return Err(CliError::Input(format!(
                "class {index}: expected {} generating pairs",
                spec.len()
            )));
        }
        let report =
            verify_chain(&diagram, &x, &y, tol).map_err(|e| CliError::Numeric(e.to_string()))?;
        let r = report.max_residual();
        classes.push(json::VerifiedClass {
            index,
            case: c.case.clone(),
            residual: r.is_finite().then_some(r),
            pass: report.pass,
        });
    }
    Ok(json::VerifyDocument {
        schema: json::SCHEMA,
        link: Link::new(&spec, components(&spec)?),
        tol,
        pass: classes.iter().all(|c| c.pass),
        classes,
    })
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let doc = match (&args.from_json, &args.spec) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(io_err)?;
            let tol = args.opts.tol;
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::Input(format!(
                    "tolerance must be positive, got {tol}"
                )));
            }
            verify_document(&text, tol)?
        }
        (None, Some(spec)) => {
            let (doc, _) = enum_document(spec, &args.opts)?;
            verify_document(&serde_json::to_string(&doc).map_err(input)?, args.opts.tol)?
        }
        (None, None) => return Err(CliError::Input("a spec or --from-json is required".into())),
    };
    let text = to_json(&doc);
    if let Some(path) = &args.opts.json {
        write_file(path, &text)?;
    }
    let shown = match args.opts.format {
        Format::Json => text,
        Format::Text => {
            let mut s = String::new();
            for c in &doc.classes {
                let _ = writeln!(
                    s,
                    "#{:<4} {:<22} residual {}  {}",
                    c.index,
                    c.case,
                    fmt_residual(c.residual),
                    if c.pass { "ok" } else { "FAIL" }
                );
            }
            let failed = doc.classes.iter().filter(|c| !c.pass).count();
            let _ = writeln!(
                s,
                "{}: {} classes, {} failed, tol {:e}",
                doc.link.spec,
                doc.classes.len(),
                failed,
                doc.tol
            );
            s
        }
    };
    out.write_all(shown.as_bytes()).map_err(io_err)?;
    Ok(if doc.pass {
        Exit::Success
    } else {
        Exit::VerificationFailed
    })
}

/// Residual scans for the requested (or every) `n_1..n_r`.
pub fn scan_document(args: &ScanArgs) -> Result<json::ScanDocument, CliError> {
    let spec = parse_spec(&args.spec)?;
    if spec.mu_is_zero() {
        return Err(CliError::Input("the residual scan needs mu != 0".into()));
    }
    let tuples = enumerate_tuples_mu_nonzero(&spec)?;
    let lists: Vec<Vec<i64>> = match &args.n_list {
        Some(n) => {
            if n.len() != spec.len() {
                return Err(CliError::Input(format!("--n needs {} values", spec.len())));
            }
            vec![n.clone()]
        }
        None => {
            let mut all: Vec<Vec<i64>> = vec![Vec::new()];
            for f in spec.fractions() {
                all = all
                    .into_iter()
                    .flat_map(|prefix| {
                        (0..f.numer()).map(move |n| {
                            let mut v = prefix.clone();
                            v.push(n);
                            v
                        })
                    })
                    .collect();
            }
            all
        }
    };
    let grid = args.grid as usize;
    let step = std::f64::consts::TAU / grid as f64;
    let mut scans = Vec::with_capacity(lists.len());
    for n_list in lists {
        let rows = scan_closure_residual(&spec, &n_list, grid).map_err(input)?;
        let roots = find_residual_roots(&spec, &n_list, &rows, args.threshold);
        let mut expected: Vec<f64> = tuples
            .iter()
            .filter(|t| t.n_list == n_list)
            .map(|t| t.theta_over_pi.to_f64() * std::f64::consts::PI)
            .collect();
        expected.sort_by(f64::total_cmp);
        let matches = roots.len() == expected.len()
            && roots
                .iter()
                .zip(&expected)
                .all(|(r, e)| (r - e).abs() < step);
        scans.push(json::ScanOut {
            n_list,
            grid,
            samples: rows
                .iter()
                .map(|&(t, r)| (t, r.is_finite().then_some(r)))
                .collect(),
            roots,
            expected,
            matches,
        });
    }
    Ok(json::ScanDocument {
        schema: json::SCHEMA,
        link: Link::new(&spec, components(&spec)?),
        mu: json::mu_string(&spec),
        threshold: args.threshold,
        pass: scans.iter().all(|s| s.matches),
        scans,
    })
}

fn run_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let doc = scan_document(args)?;
    let text = to_json(&doc);
    if let Some(path) = &args.json {
        write_file(path, &text)?;
    }
    let shown = match args.format {
        Format::Json => text,
        Format::Text => {
            let mut s = String::new();
            for scan in &doc.scans {
                let _ = writeln!(s, "# n = ({})", fmt_key(&scan.n_list));
                if !args.no_table {
                    let _ = writeln!(s, "# theta\tresidual");
                    for (t, r) in &scan.samples {
                        let _ = writeln!(
                            s,
                            "{t:.10}\t{}",
                            r.map_or("inf".to_string(), |x| format!("{x:.6e}"))
                        );
                    }
                }
                let list = |v: &[f64]| {
                    v.iter()
                        .map(|t| format!("{t:.10}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let _ = writeln!(s, "# minima: {}", list(&scan.roots));
                let _ = writeln!(s, "# expected: {}", list(&scan.expected));
            }
            let _ = writeln!(
                s,
                "# {}: {} scans, {}",
                doc.link.spec,
                doc.scans.len(),
                if doc.pass {
                    "all minima match the enumerated tuples"
                } else {
                    "MISMATCH"
                }
            );
            s
        }
    };
    out.write_all(shown.as_bytes()).map_err(io_err)?;
    Ok(if doc.pass {
        Exit::Success
    } else {
        Exit::VerificationFailed
    })
}

fn mat_text(name: &str, m: &Mat2) -> String {
    let z = |c: C64| format!("{:+.6}{:+.6}i", c.re, c.im);
    let [a, b, c, d] = m.0;
    format!("{name:<3} [[{}, {}], [{}, {}]]\n", z(a), z(b), z(c), z(d))
}

pub fn tangle_ends_document(args: &TangleEndsArgs) -> Result<json::TangleEndsDocument, CliError> {
    let s = parse_complex(&args.s)?;
    let x0 = parse_complex(&args.x)?;
    let (expr, td) = match parse_tangle(&args.expr).map_err(input)? {
        Parsed::Rational(cf) => (
            TangleExpr::rational(&cf),
            Some(TangleData::new(cf).map_err(input)?),
        ),
        Parsed::Expr(e) => (e, None),
        Parsed::Montesinos(_) => {
            return Err(CliError::Input("expected a tangle, not a link".into()))
        }
    };
    let x = mat_a(x0).map_err(input)?.mat();
    let y = mat_a(x0 * s).map_err(input)?.mat();
    let d = build_diagram(&expr);
    let asg = propagate(&d, x, y).map_err(|e| match e {
        TangleError::PropagationOrder { .. } | TangleError::NoGeneratingPair => {
            CliError::Input(format!(
                "{e}: ends are computed for expressions of the form [k1] | [1/k2] * [k3] | ..."
            ))
        }
        e => CliError::Numeric(e.to_string()),
    })?;
    let get = |c| {
        asg.get(c)
            .ok_or_else(|| CliError::Numeric("unlabeled end".into()))
    };
    let prop = EndMatrices {
        nw: get(d.ends.nw)?,
        ne: get(d.ends.ne)?,
        sw: get(d.ends.sw)?,
        se: get(d.ends.se)?,
    };
    let closed = match &td {
        Some(td) => Some(
            ends_closed_form(td, &x, &y, s, 1e-9).map_err(|e| CliError::Numeric(e.to_string()))?,
        ),
        None => None,
    };
    let diff = closed.map(|c| {
        [
            (c.nw, prop.nw),
            (c.ne, prop.ne),
            (c.sw, prop.sw),
            (c.se, prop.se),
        ]
        .iter()
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0, f64::max)
    });
    Ok(json::TangleEndsDocument {
        schema: json::SCHEMA,
        expression: expr.to_string(),
        fraction: expr.fraction().ok().map(|(p, q)| [p, q]),
        s: s.into(),
        x: x.into(),
        y: y.into(),
        propagated: (&prop).into(),
        closed_form: closed.as_ref().map(Into::into),
        max_difference: diff,
    })
}

fn run_tangle_ends(args: &TangleEndsArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let doc = tangle_ends_document(args)?;
    let shown = match args.format {
        Format::Json => to_json(&doc),
        Format::Text => {
            let mut s = doc.expression.to_string();
            if let Some([p, q]) = doc.fraction {
                let _ = write!(s, "  fraction {p}/{q}");
            }
            s.push('\n');
            s += &mat_text("X", &doc.x.into());
            s += &mat_text("Y", &doc.y.into());
            let e = &doc.propagated;
            for (name, m) in [("nw", e.nw), ("ne", e.ne), ("sw", e.sw), ("se", e.se)] {
                s += &mat_text(name, &m.into());
            }
            if let Some(d) = doc.max_difference {
                let _ = writeln!(s, "closed form vs propagation: {d:.3e}");
            }
            s
        }
    };
    out.write_all(shown.as_bytes()).map_err(io_err)?;
    Ok(Exit::Success)
}

fn run_components(args: &ComponentsArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let spec = parse_spec(&args.spec)?;
    let link = Link::new(&spec, components(&spec)?);
    let shown = match args.format {
        Format::Json => to_json(&serde_json::json!({ "schema": json::SCHEMA, "link": link })),
        Format::Text => format!("{}: {} component(s)\n", link.spec, link.components),
    };
    out.write_all(shown.as_bytes()).map_err(io_err)?;
    Ok(Exit::Success)
}

/// Runs one command, writing its primary output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Exit, CliError> {
    match &cli.command {
        Command::Enum(a) => run_enum(&a.spec, &a.opts, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Scan(a) => run_scan(a, out),
        Command::TangleEnds(a) => run_tangle_ends(a, out),
        Command::Components(a) => run_components(a, out),
    }
}
