use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use lietop_core::attach::{inert_anick, inert_homological, quotient_consistency, AnickFailure, InertnessStatus};
use lietop_core::dgl::{homology, indecomposables, ChainComplex, DglPresentation};
use lietop_core::freelie::{bch, format_lie, log_group_word, FreeLie, LieElement, TensorElement, TruncationWindow};
use lietop_core::sullivan::{
    check_sullivan, cochains, homotopy_lie, semiquadratic_homology, wedge_homology, NilpotentLieData,
};

use crate::examples::{builtin, BUILTIN};
use crate::model::{eval, expr_names, group_word_names, implicit_algebra, InputError, Model};
use crate::parse::{parse, parse_expr};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "lietop",
    version,
    about = "Exact computations in completed free dg Lie algebras over Q"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Opts {
    /// Presentation file.
    #[arg(long, global = true)]
    pub file: Option<String>,
    /// Built-in example instead of a file.
    #[arg(long, global = true, conflicts_with = "file")]
    pub example: Option<String>,
    /// Truncation window: maximal weight and maximal degree.
    #[arg(long, global = true, num_args = 2, value_names = ["W", "D"])]
    pub window: Option<Vec<u32>>,
    /// Generator order for the Anick check, highest first (`x>y>z` or `x y z`).
    #[arg(long, global = true, num_args = 1..)]
    pub order: Option<Vec<String>>,
    /// Expected inertness verdict; a different verdict exits with status 1.
    #[arg(long, global = true)]
    pub expect: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Records,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Homology dimensions, stabilization and representatives.
    Homology,
    /// Lower central series dimensions of the underlying free Lie algebra.
    Lcs,
    /// Inertness of the cells over the rest of the presentation.
    Inert,
    /// log(exp x exp y) for two Lie expressions of degree 0.
    Bch {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// log of a group word, by name from the file or given inline.
    Logword {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Dual Sullivan algebra of the weight truncation and its checks.
    Sullivan,
    /// Print the built-in example files.
    Examples { name: Option<String> },
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    /// 0 on success, 1 when a computed finding contradicts `--expect` or a
    /// check fails.
    pub code: i32,
}

/// Accumulates the same report as aligned text and as `key: value` lines.
#[derive(Default)]
struct Report {
    text: String,
    records: Vec<(String, String)>,
}

impl Report {
    fn rec(&mut self, key: impl Into<String>, value: impl ToString) {
        self.records.push((key.into(), value.to_string()));
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Records => {
                let mut s = String::new();
                for (k, v) in &self.records {
                    writeln!(s, "{k}: {v}").unwrap();
                }
                s
            }
        }
    }
}

fn lie(t: &TensorElement) -> String {
    format_lie(t).unwrap_or_else(|| t.to_string())
}

fn window_flag(opts: &Opts) -> Option<TruncationWindow> {
    opts.window.as_ref().map(|v| TruncationWindow::new(v[0], v[1]))
}

fn source(opts: &Opts) -> Result<Option<String>, InputError> {
    if let Some(name) = &opts.example {
        return builtin(name)
            .map(|s| Some(s.to_string()))
            .ok_or_else(|| InputError::Other(format!("no built-in example '{name}'")));
    }
    match &opts.file {
        None => Ok(None),
        Some(path) => std::fs::read_to_string(path)
            .map(Some)
            .map_err(|e| InputError::Other(format!("{path}: {e}"))),
    }
}

fn load(opts: &Opts) -> Result<Model, InputError> {
    let text = source(opts)?.ok_or_else(|| InputError::Other("no input: use --file or --example".into()))?;
    Model::build(&parse(&text)?, window_flag(opts))
}

pub fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let opts = &cli.opts;
    let mut report = Report::default();
    let mut code = 0;
    match &cli.command {
        Command::Homology => cmd_homology(&load(opts)?, &mut report)?,
        Command::Lcs => cmd_lcs(&load(opts)?, &mut report)?,
        Command::Inert => code = cmd_inert(&load(opts)?, opts, &mut report)?,
        Command::Bch { x, y } => cmd_bch(opts, x, y, &mut report)?,
        Command::Logword { word } => cmd_logword(opts, word, &mut report)?,
        Command::Sullivan => code = cmd_sullivan(&load(opts)?, &mut report)?,
        Command::Examples { name } => cmd_examples(name.as_deref(), &mut report)?,
    }
    Ok(Outcome {
        output: report.render(opts.format),
        code,
    })
}

fn header(report: &mut Report, command: &str, window: TruncationWindow) {
    report.rec("command", command);
    report.rec("window", format!("{} {}", window.max_weight, window.max_degree));
    report.line(format!(
        "{command}  window: weight {} degree {}",
        window.max_weight, window.max_degree
    ));
}

fn cmd_homology(m: &Model, report: &mut Report) -> Result<(), InputError> {
    let p = m.attached()?;
    let table = homology(&p)?;
    let indec = indecomposables(&ChainComplex::build(&p)?);
    header(report, "homology", m.window);
    let valid = &table.valid_degrees;
    let last = valid.end.saturating_sub(1);
    report.rec("valid", format!("{} {last}", valid.start));
    report.line(format!("valid degrees: {} to {last}", valid.start));
    report.line(format!(
        "{:>6}  {:>5}  {:>5}  {:<6}  representatives",
        "degree", "dim", "indec", "stable"
    ));
    for d in valid.clone() {
        let dim = table.dims[&d];
        let ind = indec.get(&d).copied().unwrap_or(0);
        let stable = table.stabilized.get(&d).copied().unwrap_or(false);
        let reps: Vec<String> = table.representatives[&d].iter().map(|r| lie(r.value())).collect();
        report.rec(format!("h.{d}.dim"), dim);
        report.rec(format!("h.{d}.indecomposables"), ind);
        report.rec(format!("h.{d}.stabilized"), stable);
        for (i, r) in reps.iter().enumerate() {
            report.rec(format!("h.{d}.rep.{i}"), r);
        }
        report.line(format!(
            "{d:>6}  {dim:>5}  {ind:>5}  {:<6}  {}",
            if stable { "yes" } else { "no" },
            reps.join("; ")
        ));
    }
    Ok(())
}

fn cmd_lcs(m: &Model, report: &mut Report) -> Result<(), InputError> {
    let p = m.attached()?;
    let free = DglPresentation::free(p.algebra().clone());
    let dims = free.lcs_dims(m.window.max_weight)?;
    header(report, "lcs", m.window);
    report.line(format!("{:>6}  {:>6}  {:>5}", "weight", "degree", "dim"));
    for (k, row) in dims.iter().enumerate() {
        for (d, n) in row.iter().filter(|(_, n)| **n > 0) {
            report.rec(format!("lcs.{}.{d}", k + 1), n);
            report.line(format!("{:>6}  {d:>6}  {n:>5}", k + 1));
        }
    }
    Ok(())
}

fn parse_status(s: &str) -> Result<InertnessStatus, InputError> {
    match s {
        "inert" | "inert-up-to-window" => Ok(InertnessStatus::InertUpToWindow),
        "not-inert" => Ok(InertnessStatus::NotInert),
        "inconclusive" => Ok(InertnessStatus::Inconclusive),
        other => Err(InputError::Other(format!(
            "unknown verdict '{other}': expected inert, not-inert or inconclusive"
        ))),
    }
}

fn order_from_flag(alg: &FreeLie, flag: &[String]) -> Result<Vec<u16>, InputError> {
    let names: Vec<&str> = flag
        .iter()
        .flat_map(|s| s.split('>'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let mut out = Vec::new();
    for n in names {
        out.push(
            alg.letter(n)
                .map_err(|_| InputError::Other(format!("--order: unknown name '{n}'")))?,
        );
    }
    Ok(out)
}

fn cmd_inert(m: &Model, opts: &Opts, report: &mut Report) -> Result<i32, InputError> {
    let expected = opts.expect.as_deref().map(parse_status).transpose()?;
    if m.cells.is_empty() {
        return Err(InputError::Other("inert needs at least one cell".into()));
    }
    let v = inert_homological(&m.base, &m.cells, m.window)?;
    header(report, "inert", m.window);
    report.rec("status", v.status);
    report.rec("injective", v.injective);
    report.line(format!("status: {}", v.status));
    report.line(format!(
        "targets independent in homology: {}",
        if v.injective { "yes" } else { "no" }
    ));
    for f in &v.failing {
        report.rec(format!("failing.{}.cokernel", f.degree), f.cokernel_dim);
        report.rec(format!("failing.{}.stabilized", f.degree), f.stabilized);
        report.line(format!(
            "degree {}: cokernel {}{}",
            f.degree,
            f.cokernel_dim,
            if f.stabilized { "" } else { " (not stabilized)" }
        ));
        for (i, w) in f.witnesses.iter().enumerate() {
            let s = lie(w.value());
            report.rec(format!("failing.{}.witness.{i}", f.degree), &s);
            report.line(format!("  witness {s}"));
        }
    }
    if m.base.has_zero_differential() {
        let q = quotient_consistency(&m.base, &m.cells, m.window)?;
        report.rec("quotient.consistent", q.consistent());
        report.line(format!(
            "quotient consistency: {}",
            if q.consistent() { "agree" } else { "differ" }
        ));
        for (d, a, b) in &q.rows {
            report.rec(format!("quotient.{d}"), format!("{a} {b}"));
            report.line(format!("  degree {d}: attached {a}, quotient {b}"));
        }
    }
    let order = match &opts.order {
        Some(flag) => Some(order_from_flag(m.algebra(), flag)?),
        None => m.order.clone(),
    };
    if let Some(order) = order {
        let rels: Vec<TensorElement> = m.cells.cells.iter().map(|c| c.target.clone()).collect();
        let cert = inert_anick(&rels, &order, true)?;
        let alg = m.algebra();
        for (i, w) in cert.leading.iter().enumerate() {
            report.rec(format!("anick.leading.{i}"), alg.format_word(w));
        }
        let verdict = match &cert.failure {
            None => "pass".to_string(),
            Some(AnickFailure::Submonomial { inner, outer }) => {
                format!("fail: leading word {inner} occurs inside leading word {outer}")
            }
            Some(AnickFailure::Overlap { left, right, overlap }) => {
                format!("fail: leading words {left} and {right} overlap in {overlap} letters")
            }
        };
        report.rec("anick", &verdict);
        let lead: Vec<String> = cert.leading.iter().map(|w| alg.format_word(w)).collect();
        report.line(format!("anick: {verdict}  (leading words {})", lead.join(", ")));
    }
    Ok(match expected {
        Some(e) if e != v.status => 1,
        _ => 0,
    })
}

fn bch_algebra(opts: &Opts, exprs: &[&str]) -> Result<(FreeLie, Vec<TensorElement>), InputError> {
    let parsed = exprs.iter().map(|e| parse_expr(e)).collect::<Result<Vec<_>, _>>()?;
    let alg = match source(opts)? {
        Some(text) => Model::build(&parse(&text)?, window_flag(opts))?.algebra().clone(),
        None => {
            let mut names = Vec::new();
            for e in &parsed {
                expr_names(e, &mut names);
            }
            implicit_algebra(&names, window_flag(opts).unwrap_or_default())?
        }
    };
    let values = parsed.iter().map(|e| eval(&alg, e)).collect::<Result<Vec<_>, _>>()?;
    Ok((alg, values))
}

fn cmd_bch(opts: &Opts, x: &str, y: &str, report: &mut Report) -> Result<(), InputError> {
    let (alg, v) = bch_algebra(opts, &[x, y])?;
    let as_lie = |t: &TensorElement| LieElement::uncertified(t.clone());
    let z = bch(&as_lie(&v[0]), &as_lie(&v[1]))?;
    let s = lie(z.value());
    report.rec("command", "bch");
    report.rec(
        "window",
        format!("{} {}", alg.window().max_weight, alg.window().max_degree),
    );
    report.rec("bch", &s);
    report.line(s);
    Ok(())
}

fn cmd_logword(opts: &Opts, word: &str, report: &mut Report) -> Result<(), InputError> {
    let (alg, letters) = match source(opts)? {
        Some(text) => {
            let m = Model::build(&parse(&text)?, window_flag(opts))?;
            match m.words.get(word) {
                Some(w) => (m.algebra().clone(), w.clone()),
                None => {
                    let (letters, _) = group_word_names(word)?;
                    (m.algebra().clone(), letters)
                }
            }
        }
        None => {
            let (letters, names) = group_word_names(word)?;
            (
                implicit_algebra(&names, window_flag(opts).unwrap_or_default())?,
                letters,
            )
        }
    };
    let z = log_group_word(&alg, &letters)?;
    let s = lie(z.value());
    report.rec("command", "logword");
    report.rec(
        "window",
        format!("{} {}", alg.window().max_weight, alg.window().max_degree),
    );
    report.rec("log", &s);
    report.line(s);
    Ok(())
}

fn cmd_sullivan(m: &Model, report: &mut Report) -> Result<i32, InputError> {
    let p = m.attached()?;
    let l =
        NilpotentLieData::from_presentation(&p, m.window.max_weight).map_err(|e| InputError::Other(e.to_string()))?;
    let sd = cochains(&l);
    header(report, "sullivan", m.window);
    report.rec("dim", sd.dim());
    report.line(format!(
        "V: {} generators (truncation at weight {})",
        sd.dim(),
        m.window.max_weight
    ));
    for k in 0..sd.dim() {
        let name = &sd.names()[k];
        let d = sd.format(&sd.d(k));
        report.rec(format!("v.{k}"), format!("{name} {}", sd.degrees()[k]));
        report.rec(format!("d.{k}"), &d);
        report.line(format!("  d {name} = {d}    (degree {})", sd.degrees()[k]));
    }
    let check = check_sullivan(&sd);
    let filt: Vec<String> = check.filtration.iter().map(|n| n.to_string()).collect();
    report.rec(
        "check.d_squared",
        if check.violations.is_empty() { "ok" } else { "fail" },
    );
    for v in &check.violations {
        report.rec(format!("check.violation.{}", v.generator), sd.format(&v.residual));
        report.line(format!("  d² {} = {}", sd.names()[v.generator], sd.format(&v.residual)));
    }
    report.rec("check.filtration", filt.join(" "));
    report.line(format!(
        "d² = 0: {}   filtration: {}{}",
        if check.violations.is_empty() { "yes" } else { "no" },
        filt.join(" ⊂ "),
        if check.filtration_exhausts() {
            ""
        } else {
            " (does not exhaust V)"
        }
    ));
    let roundtrip = homotopy_lie(&sd).map(|back| back == l).unwrap_or(false);
    report.rec("roundtrip", if roundtrip { "ok" } else { "fail" });
    report.line(format!(
        "homotopy Lie algebra roundtrip: {}",
        if roundtrip { "ok" } else { "fail" }
    ));
    let top = m.window.max_degree.max(1);
    let t = semiquadratic_homology(&sd, top);
    report.line(format!("{:>6}  {:>9}  {:>14}", "degree", "H(ΛV,d)", "H(V∩ker d1,d0)"));
    for n in 1..=top {
        report.rec(
            format!("semiquadratic.{n}"),
            format!("{} {}", t.total[&n], t.linear[&n]),
        );
        report.line(format!("{n:>6}  {:>9}  {:>14}", t.total[&n], t.linear[&n]));
    }
    if sd.is_quadratic() {
        let h = wedge_homology(&sd, top).map_err(|e| InputError::Other(e.to_string()))?;
        let cells: Vec<String> = h.dims.iter().map(|((k, n), d)| format!("[{k}]{n}:{d}")).collect();
        for ((k, n), d) in &h.dims {
            report.rec(format!("wedge.{k}.{n}"), d);
        }
        report.line(format!("H^[k] in degree n: {}", cells.join(" ")));
    }
    Ok(if check.passed() && roundtrip { 0 } else { 1 })
}

fn cmd_examples(name: Option<&str>, report: &mut Report) -> Result<(), InputError> {
    let chosen: Vec<&(&str, &str)> = match name {
        None => BUILTIN.iter().collect(),
        Some(n) => vec![BUILTIN
            .iter()
            .find(|(k, _)| *k == n)
            .ok_or_else(|| InputError::Other(format!("no built-in example '{n}'")))?],
    };
    for (k, text) in chosen {
        report.line(format!("# == {k} =="));
        report.text.push_str(text);
        report.rec("example", k);
        for (i, l) in text.lines().enumerate() {
            report.rec(format!("{k}.{}", i + 1), l);
        }
    }
    Ok(())
}
