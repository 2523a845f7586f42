//! Command-line front end: homology tables, ladder reports, torsion
//! certificates, grids and family bounds.
//!
//! Exit codes: 0 success or report, 1 a certificate failed verification,
//! 2 parse error, 3 hypothesis rejection, 4 size guard.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::ChainComplex;
use crate::diagram::{Diagram, DiagramError};
use crate::homology::{khovanov_table, HomologyError, DEFAULT_CROSSING_LIMIT};
use crate::ladders::{check_hypotheses, detect_ladders, ladder_first_order, signed_state, LadderError};
use crate::smoothing::{KauffmanState, Label};
use crate::torsion::{family_lower_bound, Certifier, Family, Grid, TorsionCertificate, TorsionError};

#[derive(Parser, Debug)]
#[command(name = "khtorsion", version, about = "Khovanov homology and explicit order-two torsion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integer Khovanov homology table.
    Table(TableArgs),
    /// Ladders, periphery numbers and hypothesis checks for an initial state.
    Ladders(LaddersArgs),
    /// Order-two torsion certificates.
    Certify(CertifyArgs),
    /// Torsion grid of the monocircular diagram D(h1, h2).
    Grid(GridArgs),
    /// Lower bound on torsion classes for a pretzel, 3-braid or rational family.
    Bound(BoundArgs),
}

#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// PD code file: `X(a,b,c,d),...` or a JSON array of quadruples.
    #[arg(long, value_name = "FILE")]
    pub pd: Option<PathBuf>,
    /// PD code given on the command line.
    #[arg(long, value_name = "PD")]
    pub pd_inline: Option<String>,
    /// Pretzel diagram P(a1, ..., an).
    #[arg(long, value_name = "A1,A2,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub pretzel: Option<Vec<i64>>,
    /// Monocircular diagram D(h1, h2) = P(-1, ..., -1, h2).
    #[arg(long, value_name = "H1,H2", value_delimiter = ',')]
    pub monocircular: Option<Vec<usize>>,
    /// Closure of the 3-braid s1^a1 s2^a2 ...
    #[arg(long, value_name = "A1,A2,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub braid3: Option<Vec<i64>>,
    /// Standard rational diagram D(a1, ..., am).
    #[arg(long, value_name = "A1,A2,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub rational: Option<Vec<i64>>,
}

#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false)]
pub struct FamilyInput {
    #[arg(long, value_name = "A1,A2,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub pretzel: Option<Vec<i64>>,
    #[arg(long, value_name = "A1,A2,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub braid3: Option<Vec<i64>>,
    #[arg(long, value_name = "A1,A2,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub rational: Option<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    LadderFirst,
    Input,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_enum, default_value_t = Order::LadderFirst)]
    pub order: Order,
    /// Initial state used to find ladders for the ladder-first order.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub json: bool,
    /// Also print the boundary matrix out of C^{I,J} in coordinate form.
    #[arg(long, value_name = "I,J", value_delimiter = ',', allow_hyphen_values = true)]
    pub matrix: Option<Vec<i64>>,
    #[arg(long, default_value_t = DEFAULT_CROSSING_LIMIT)]
    pub limit: usize,
}

#[derive(Args, Debug)]
pub struct LaddersArgs {
    #[command(flatten)]
    pub input: Input,
    /// `A` (all-A), `signed`, or one A/B letter per crossing.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub input: Input,
    /// `A` (all-A), `signed`, or one A/B letter per crossing. By default the
    /// all-A state is tried first, then the signed state of family input.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long, value_enum, default_value_t = Order::LadderFirst)]
    pub order: Order,
    /// One entry per periphery-one ladder. Defaults to the first admissible tuple.
    #[arg(long, value_name = "M1,M2,..", value_delimiter = ',', conflicts_with_all = ["all_even", "all"])]
    pub mu: Option<Vec<usize>>,
    /// Every admissible tuple with all entries even.
    #[arg(long, conflicts_with = "all")]
    pub all_even: bool,
    /// Every admissible tuple.
    #[arg(long)]
    pub all: bool,
    /// Confirm each class with the Smith normal form oracle.
    #[arg(long)]
    pub verify_oracle: bool,
    /// Brute-force the evenness of each even module.
    #[arg(long)]
    pub check_evenness: bool,
    /// Require exactly one summand of V in the module, not just odd parity.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_CROSSING_LIMIT)]
    pub limit: usize,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(value_parser = clap::value_parser!(u32).range(2..))]
    pub h1: u32,
    #[arg(value_parser = clap::value_parser!(u32).range(2..))]
    pub h2: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub family: FamilyInput,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("rejected: {}", .0.join("; "))]
    Rejected(Vec<String>),
    #[error("{0}")]
    TooLarge(String),
    #[error("certificate failed verification for mu = {0:?}")]
    Unverified(Vec<usize>),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Unverified(_) | CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Rejected(_) => 3,
            CliError::TooLarge(_) => 4,
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        match e {
            DiagramError::TooLarge(_) => CliError::TooLarge(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::TooLarge { .. } => CliError::TooLarge(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<LadderError> for CliError {
    fn from(e: LadderError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<TorsionError> for CliError {
    fn from(e: TorsionError) -> Self {
        match e {
            TorsionError::Rejected(r) => CliError::Rejected(r),
            TorsionError::Inadmissible(m) => CliError::Rejected(vec![m]),
            TorsionError::Monochord { .. } | TorsionError::DegreeMismatch { .. } => {
                CliError::Rejected(vec![e.to_string()])
            }
            TorsionError::TooLarge { .. } => CliError::TooLarge(e.to_string()),
            TorsionError::Ladder(e) => e.into(),
            TorsionError::Homology(e) => e.into(),
            TorsionError::Diagram(e) => e.into(),
        }
    }
}

impl Input {
    /// The diagram and whether it came from a family with signed twists.
    pub fn load(&self) -> Result<(Diagram, bool), CliError> {
        if let Some(path) = &self.pd {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            return Ok((Diagram::parse_pd(&text)?, false));
        }
        if let Some(text) = &self.pd_inline {
            return Ok((Diagram::parse_pd(text)?, false));
        }
        if let Some(h) = &self.monocircular {
            let &[h1, h2] = h.as_slice() else {
                return Err(CliError::Parse(format!("--monocircular takes two heights, got {}", h.len())));
            };
            return Ok((Diagram::monocircular(h1, h2)?, false));
        }
        if let Some(a) = &self.pretzel {
            return Ok((Diagram::pretzel(a)?, true));
        }
        if let Some(a) = &self.braid3 {
            return Ok((Diagram::braid3_closure(a)?, true));
        }
        if let Some(a) = &self.rational {
            return Ok((Diagram::rational(a)?, true));
        }
        Err(CliError::Parse("no diagram given".into()))
    }
}

impl FamilyInput {
    fn family(&self) -> Family {
        match (&self.pretzel, &self.braid3, &self.rational) {
            (Some(a), _, _) => Family::Pretzel(a.clone()),
            (_, Some(a), _) => Family::Braid3(a.clone()),
            (_, _, Some(a)) => Family::Rational(a.clone()),
            _ => unreachable!("clap requires one family"),
        }
    }
}

/// Parses `A`, `signed`, or one A/B letter per crossing.
pub fn parse_state(text: Option<&str>, d: &Diagram, signed_default: bool) -> Result<KauffmanState, CliError> {
    let n = d.num_crossings();
    match text.map(str::trim) {
        None if signed_default => Ok(signed_state(d)),
        None => Ok(KauffmanState::all_a(n)),
        Some(t) if t.eq_ignore_ascii_case("a") || t.eq_ignore_ascii_case("all-a") => {
            Ok(KauffmanState::all_a(n))
        }
        Some(t) if t.eq_ignore_ascii_case("signed") => Ok(signed_state(d)),
        Some(t) => {
            let labels = t
                .chars()
                .map(|c| match c.to_ascii_uppercase() {
                    'A' => Ok(Label::A),
                    'B' => Ok(Label::B),
                    _ => Err(CliError::Parse(format!("state letter {c:?} is not A or B"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if labels.len() != n {
                return Err(CliError::Parse(format!(
                    "state has {} letters, diagram has {n} crossings",
                    labels.len()
                )));
            }
            Ok(KauffmanState::from_labels(&labels))
        }
    }
}

fn emit_json(out: &mut dyn Write, v: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Parse(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (d, signed) = a.input.load()?;
    if d.num_crossings() > a.limit {
        return Err(HomologyError::TooLarge {
            crossings: d.num_crossings(),
            limit: a.limit,
        }
        .into());
    }
    let d = match a.order {
        Order::Input => d,
        Order::LadderFirst => {
            let s = parse_state(a.state.as_deref(), &d, signed)?;
            let ladders = detect_ladders(&d, &s)?;
            d.reorder_crossings(&ladder_first_order(&ladders, d.num_crossings()))?
        }
    };
    let cx = ChainComplex::new(d);
    let table = khovanov_table(&cx, a.limit)?;
    let matrix = match a.matrix.as_deref() {
        None => None,
        Some(&[i, j]) => Some((i, j, cx.boundary_matrix(i, j))),
        Some(m) => return Err(CliError::Parse(format!("--matrix takes I,J, got {} values", m.len()))),
    };
    if a.json {
        let mut v = table.to_json();
        if let (Some((i, j, m)), Value::Object(map)) = (&matrix, &mut v) {
            map.insert(
                "matrix".into(),
                json!({"i": i, "j": j, "rows": m.rows, "cols": m.cols, "entries": m.to_coordinate_text()}),
            );
        }
        emit_json(out, &v)
    } else {
        writeln!(out, "{}", cx.diagram().to_pd_string())?;
        writeln!(out, "{}", table.render())?;
        if let Some((i, j, m)) = matrix {
            writeln!(out, "d from C^{{{i},{j}}}: {} x {}", m.rows, m.cols)?;
            write!(out, "{}", m.to_coordinate_text())?;
        }
        Ok(())
    }
}

fn cmd_ladders(a: &LaddersArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (d, signed) = a.input.load()?;
    let s = parse_state(a.state.as_deref(), &d, signed)?;
    let r = check_hypotheses(&d, &s)?;
    if a.json {
        return emit_json(out, &r);
    }
    writeln!(out, "state {s}  red scars {}", r.i0)?;
    for (k, l) in r.ladders.iter().enumerate() {
        writeln!(
            out,
            "ladder {}: height {} periphery {} steps {:?}{}",
            k + 1,
            l.height(),
            l.periphery,
            l.steps,
            if l.cyclic { " (cyclic)" } else { "" }
        )?;
    }
    writeln!(out, "route: {}", serde_json::to_value(r.route).unwrap_or_default().as_str().unwrap_or("?"))?;
    for f in &r.failures {
        writeln!(out, "  {f}")?;
    }
    Ok(())
}

fn render_certificate(c: &TorsionCertificate) -> String {
    let k = &c.checks;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mu: Vec<String> = c.mu.iter().map(usize::to_string).collect();
    let mut s = format!(
        "mu=({})  i={} j={}  h={} q={}  |X|={} |V|={}  dX=2V: {}  dV=0: {}  parity odd: {}  one summand: {}",
        mu.join(","),
        c.i,
        c.j,
        c.h,
        c.q,
        c.x.len(),
        c.v.len(),
        yn(k.dx_equals_2v),
        yn(k.dv_zero),
        yn(k.not_exact_parity),
        yn(k.exactly_one_summand)
    );
    if let Some(e) = k.evenness {
        s += &format!("  even module: {}", yn(e));
    }
    if let Some(o) = &k.oracle {
        match o.order {
            Some(n) => s += &format!("  oracle order: {n}"),
            None => s += "  oracle order: infinite",
        }
    }
    s
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (d, signed) = a.input.load()?;
    let ladder_first = a.order == Order::LadderFirst;
    let candidates = match &a.state {
        Some(t) => vec![("given", parse_state(Some(t), &d, signed)?)],
        None if signed => vec![
            ("all-A", KauffmanState::all_a(d.num_crossings())),
            ("signed", signed_state(&d)),
        ],
        None => vec![("all-A", KauffmanState::all_a(d.num_crossings()))],
    };
    let mut reasons = Vec::new();
    let mut found = None;
    for (name, s) in &candidates {
        match Certifier::with_order(&d, s, ladder_first) {
            Ok(c) => {
                found = Some(c);
                break;
            }
            Err(TorsionError::Rejected(r)) => {
                reasons.extend(r.into_iter().map(|f| format!("{name} state: {f}")))
            }
            Err(e) => return Err(e.into()),
        }
    }
    let Some(certifier) = found else {
        if a.json {
            emit_json(out, &json!({"schema": 1, "rejected": true, "reasons": reasons}))?;
        }
        return Err(CliError::Rejected(reasons));
    };
    let mus = if let Some(m) = &a.mu {
        vec![m.clone()]
    } else {
        let all = certifier.admissible_mus();
        if a.all_even {
            all.into_iter().filter(|m| m.iter().all(|x| x % 2 == 0)).collect()
        } else if a.all {
            all
        } else {
            all.into_iter().take(1).collect()
        }
    };
    if mus.is_empty() {
        return Err(CliError::Rejected(vec!["no admissible parameters".into()]));
    }
    let certs = mus
        .par_iter()
        .map(|mu| {
            let mut c = certifier.certify(mu, a.check_evenness)?;
            if a.verify_oracle {
                certifier.confirm_with_oracle(&mut c, a.limit)?;
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>, TorsionError>>()?;
    let route = serde_json::to_value(certifier.route()).unwrap_or_default();
    if a.json {
        emit_json(
            out,
            &json!({
                "schema": 1,
                "route": route,
                "order": if a.order == Order::LadderFirst { "ladder-first" } else { "input" },
                "heights": certifier.heights(),
                "certificates": certs,
            }),
        )?;
    } else {
        writeln!(
            out,
            "route: {}  heights: {:?}  red scars: {}",
            route.as_str().unwrap_or("?"),
            certifier.heights(),
            certifier.i0()
        )?;
        for c in &certs {
            writeln!(out, "{}", render_certificate(c))?;
        }
    }
    match certs
        .iter()
        .find(|c| !c.is_valid() || (a.strict && !c.checks.exactly_one_summand))
    {
        Some(c) => Err(CliError::Unverified(c.mu.clone())),
        None => Ok(()),
    }
}

fn cmd_grid(a: &GridArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = Grid::new(a.h1 as usize, a.h2 as usize);
    if a.json {
        emit_json(out, &g)
    } else {
        writeln!(out, "{g}")?;
        Ok(())
    }
}

fn cmd_bound(a: &BoundArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let r = family_lower_bound(&a.family.family());
    if a.json {
        return emit_json(out, &r);
    }
    for h in &r.hypotheses {
        writeln!(out, "[{}] {}", if h.holds { "x" } else { " " }, h.name)?;
    }
    match r.bound {
        Some(b) => writeln!(out, "factors {:?}  bound {b}", r.factors)?,
        None => writeln!(out, "hypotheses fail: no bound")?,
    }
    if let Some(e) = &r.exhaustive {
        writeln!(
            out,
            "exhaustive: heights {:?}, {} admissible tuples, {} classes",
            e.heights, e.admissible, e.classes
        )?;
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Table(a) => cmd_table(a, out),
        Command::Ladders(a) => cmd_ladders(a, out),
        Command::Certify(a) => cmd_certify(a, out),
        Command::Grid(a) => cmd_grid(a, out),
        Command::Bound(a) => cmd_bound(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("khtorsion").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn hyphen_values_parse() {
        let (code, out, _) = call(&["table", "--pretzel", "-1,3", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["table", "--pd-inline", "X(1,2,3"]).0, 2);
        assert_eq!(call(&["table"]).0, 2);
        assert_eq!(call(&["certify", "--pretzel", "-1,3"]).0, 3);
        assert_eq!(call(&["table", "--monocircular", "10,15"]).0, 4);
        assert_eq!(call(&["certify", "--monocircular", "3,6", "--mu", "3,3"]).0, 3);
        assert_eq!(call(&["certify", "--monocircular", "3,6", "--state", "AB"]).0, 2);
        assert_eq!(call(&["grid", "1", "4"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn rejection_names_height_one() {
        let (code, out, err) = call(&["certify", "--pretzel", "-1,3", "--json"]);
        assert_eq!(code, 3);
        assert!(err.contains("height 1"));
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rejected"], true);
    }

    #[test]
    fn braid_all_even() {
        let (code, out, _) = call(&["certify", "--braid3", "7,2", "--all-even", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let is: Vec<i64> = v["certificates"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["i"].as_i64().unwrap())
            .collect();
        assert_eq!(is, vec![5, 7, 9]);
    }

    #[test]
    fn grid_and_bound_text() {
        let (code, out, _) = call(&["grid", "10", "15"]);
        assert_eq!(code, 0);
        assert!(out.contains("counts i=1..25: 0,1,0,2,1,3,2,4,3,5,4,5,5,5,5,4,5,4,4,3,3,2,2,1,1"));
        let (code, out, _) = call(&["bound", "--pretzel", "5,-3,2,3,-2"]);
        assert_eq!(code, 0);
        assert!(out.contains("bound 1"));
        assert!(out.contains("6 admissible tuples, 4 classes"));
        let (code, out, _) = call(&["bound", "--rational", "2,2"]);
        assert_eq!(code, 0);
        assert!(out.contains("no bound"));
    }

    #[test]
    fn state_parsing() {
        let d = Diagram::monocircular(2, 2).unwrap();
        assert_eq!(parse_state(Some("abab"), &d, false).unwrap().bits(), 0b1010);
        assert!(parse_state(Some("abx"), &d, false).is_err());
        assert_eq!(parse_state(None, &d, false).unwrap().bits(), 0);
    }
}
