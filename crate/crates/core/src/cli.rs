//! `dparity` command-line front end.
//!
//! Exit codes: 0 when every verdict passes, 1 when any fails, 2 on usage,
//! parse or domain errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::base_change::BaseReduction;
use crate::dihedral_reps::{self, SubgroupTag};
use crate::error::Error;
use crate::parity_engine::{self, EnumerationBounds, LocalCompletion, LocalSetting};
use crate::regulator::{self, RationalRep};
use crate::surgery::{self, SurgeryPlan};
use crate::tate;
use crate::weierstrass::WeierstrassCurve;

#[derive(Debug, Parser)]
#[command(name = "dparity", about = "Local parity computations for elliptic curves in dihedral extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RepChoice {
    Trivial,
    Eta,
    Rho2,
    Regular,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tate's algorithm at one prime for every curve in a file.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Character table of D_{2p^n}.
    Chars {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Check the D_{2p^{n-1}} to D_{2p^n} decomposition identity.
        #[arg(long)]
        verify_reduction: bool,
    },
    /// Regulator constants of rational representations of D_{2p}.
    Regulator {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "all")]
        rep: RepChoice,
        /// Membership of 1 + eta + tau in T_Theta.
        #[arg(long)]
        membership: bool,
    },
    /// Compare both sides of the local identity.
    VerifyLocal {
        #[arg(long)]
        p: u64,
        /// Enumerate all settings within the bounds below.
        #[arg(long)]
        sweep: bool,
        /// Print the p mod 12 tables from both sides.
        #[arg(long)]
        emit_table: bool,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 5, 7, 11, 13])]
        ells: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2])]
        rs: Vec<u32>,
        /// Drop settings with impossible tame Frobenius action.
        #[arg(long)]
        strict: bool,
        /// Single setting: residue characteristic.
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, value_parser = parse_subgroup)]
        g_v: Option<SubgroupTag>,
        #[arg(long, value_parser = parse_subgroup)]
        i_v: Option<SubgroupTag>,
        /// good, split(n), nonsplit(n), addmult(n) or addgood(delta).
        #[arg(long, value_parser = parse_base)]
        base: Option<BaseReduction>,
        #[arg(long)]
        eta_equals_chi: Option<bool>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Product of both sides over the bad primes of each curve.
    VerifyGlobal {
        file: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        completion: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Move each curve to a close one, semistable away from p0.
    Surgery {
        file: PathBuf,
        #[arg(long)]
        p0: u64,
        #[arg(long)]
        v: u64,
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub lines: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub payload: serde_json::Value,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport { command: command.to_string(), lines: Vec::new(), passed: 0, failed: 0, payload: json!(null) }
    }

    fn record(&mut self, ok: bool, line: String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.lines.push(line);
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 {
            0
        } else {
            1
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Help(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

pub fn parse_subgroup(s: &str) -> std::result::Result<SubgroupTag, String> {
    match s {
        "1" => Ok(SubgroupTag::Trivial),
        "D2" => Ok(SubgroupTag::Order2),
        "Cp" => Ok(parity_engine::CP),
        "D2p" => Ok(parity_engine::D2P),
        _ => Err(format!("unknown subgroup {s:?} (expected 1, D2, Cp or D2p)")),
    }
}

pub fn parse_base(s: &str) -> std::result::Result<BaseReduction, String> {
    if s == "good" {
        return Ok(BaseReduction::Good);
    }
    let (kind, rest) = s.split_once('(').ok_or_else(|| format!("bad reduction descriptor {s:?}"))?;
    let k: u32 = rest
        .strip_suffix(')')
        .and_then(|x| x.parse().ok())
        .ok_or_else(|| format!("bad reduction descriptor {s:?}"))?;
    match kind {
        "split" => Ok(BaseReduction::SplitMult(k)),
        "nonsplit" => Ok(BaseReduction::NonsplitMult(k)),
        "addmult" => Ok(BaseReduction::AdditivePotMult(k)),
        "addgood" => Ok(BaseReduction::AdditivePotGood(k)),
        _ => Err(format!("bad reduction descriptor {s:?}")),
    }
}

/// One curve per non-comment line, as five integers.
pub fn parse_curve_file(path: &Path) -> crate::Result<Vec<WeierstrassCurve>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    parse_curves(&text)
}

pub fn parse_curves(text: &str) -> crate::Result<Vec<WeierstrassCurve>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let curve = t.parse::<WeierstrassCurve>().map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
            other => Error::Parse { line: i + 1, msg: other.to_string() },
        })?;
        out.push(curve);
    }
    Ok(out)
}

/// Lines `prime G_v I_v [eta_eq_chi]`.
pub fn parse_completion(text: &str) -> crate::Result<BTreeMap<u64, LocalCompletion>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let fields: Vec<&str> = t.split_whitespace().collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(err(format!("expected 'prime G_v I_v [eta_eq_chi]', found {} fields", fields.len())));
        }
        let prime: u64 = fields[0].parse().map_err(|_| err(format!("not a prime: {:?}", fields[0])))?;
        let g_v = parse_subgroup(fields[1]).map_err(err)?;
        let i_v = parse_subgroup(fields[2]).map_err(err)?;
        let eta_equals_chi = match fields.get(3) {
            None => None,
            Some(&("true" | "1" | "yes" | "eta=chi")) => Some(true),
            Some(&("false" | "0" | "no" | "eta!=chi")) => Some(false),
            Some(other) => return Err(err(format!("bad eta_eq_chi flag {other:?}"))),
        };
        out.insert(prime, LocalCompletion { g_v, i_v, eta_equals_chi });
    }
    Ok(out)
}

fn write_json(path: &Option<PathBuf>, value: &serde_json::Value) -> std::result::Result<(), CliError> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(p, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn reduce(file: &Path, ell: u64, json_path: &Option<PathBuf>) -> std::result::Result<RunReport, CliError> {
    crate::arith::ensure_prime(ell)?;
    let mut rep = RunReport::new("reduce");
    let mut records = Vec::new();
    for curve in parse_curve_file(file)? {
        let d = tate::local_reduction(&curve, ell)?;
        rep.record(true, format!("{curve} {d}"));
        records.push(json!({
            "curve": curve.to_string(),
            "ell": ell,
            "kodaira": d.kodaira.to_string(),
            "delta": d.delta,
            "tamagawa": d.tamagawa,
            "conductor_exp": d.conductor_exp,
            "split": d.split.to_string(),
        }));
    }
    rep.payload = json!(records);
    write_json(json_path, &rep.payload)?;
    Ok(rep)
}

fn chars(p: u64, n: u32, verify_reduction: bool) -> std::result::Result<RunReport, CliError> {
    let mut rep = RunReport::new("chars");
    let irr = dihedral_reps::irreducibles(p, n)?;
    let group = SubgroupTag::Dihedral(n);
    rep.lines.push(format!("D{} classes: {}", 2 * p.pow(n), group.class_labels(p).join(" ")));
    for chi in &irr {
        let vals: Vec<String> = chi.values().iter().map(|v| v.to_string()).collect();
        rep.lines.push(vals.join(" | "));
    }
    let mut ortho = true;
    for (i, a) in irr.iter().enumerate() {
        for (j, b) in irr.iter().enumerate() {
            ortho &= dihedral_reps::inner_product(a, b)? == (i == j) as i64;
        }
    }
    rep.record(ortho, format!("orthogonality over {} irreducibles: {}", irr.len(), pass_word(ortho)));
    if verify_reduction {
        for t in dihedral_reps::reduction_identity_terms(p, n)? {
            rep.record(t.holds, format!("reduction j={} from {:?}: {}", t.j, t.matching, pass_word(t.holds)));
        }
    }
    Ok(rep)
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn regulator_cmd(p: u64, choice: RepChoice, membership: bool) -> std::result::Result<RunReport, CliError> {
    if p < 5 {
        return Err(Error::PrimeTooSmall(p).into());
    }
    let mut rep = RunReport::new("regulator");
    let reps: Vec<(&str, RationalRep)> = match choice {
        RepChoice::Trivial => vec![("1", RationalRep::trivial(p)?)],
        RepChoice::Eta => vec![("eta", RationalRep::eta(p)?)],
        RepChoice::Rho2 => vec![("rho2", RationalRep::rho2(p)?)],
        RepChoice::Regular => vec![("regular", RationalRep::regular(p)?)],
        RepChoice::All => vec![
            ("1", RationalRep::trivial(p)?),
            ("eta", RationalRep::eta(p)?),
            ("rho2", RationalRep::rho2(p)?),
            ("regular", RationalRep::regular(p)?),
        ],
    };
    for (name, r) in reps {
        let c = regulator::regulator_constant_default(&r)?;
        let (num, den) = c.representative().expect("nonzero regulator constant");
        rep.lines.push(format!("C({name}) = {num}/{den} mod squares, ord_p parity {}", c.ord_p_parity(p)));
    }
    if membership {
        let sigma = regulator::one_eta_tau(p);
        let rows = regulator::t_theta_rows(&sigma, p)?;
        for row in &rows {
            rep.lines.push(format!(
                "<sigma,{}> = {}, ord_p C parity {}: {}",
                row.basis,
                row.multiplicity,
                row.ord_p_parity,
                pass_word(row.agrees)
            ));
        }
        let ok = rows.iter().all(|r| r.agrees);
        rep.record(ok, format!("1+eta+tau in T_Theta: {ok}"));
    }
    Ok(rep)
}

fn verdict_line(v: &parity_engine::LocalVerdict) -> String {
    format!("{} w={:+} c={:+} equal={} [{}]", v.setting, v.w_ratio, v.c_parity, v.equal, v.case_trace.join("; "))
}

#[allow(clippy::too_many_arguments)]
fn verify_local(
    p: u64,
    sweep: bool,
    emit_table: bool,
    bounds: EnumerationBounds,
    single: Option<(u64, u32, SubgroupTag, SubgroupTag, BaseReduction, Option<bool>)>,
    json_path: &Option<PathBuf>,
) -> std::result::Result<RunReport, CliError> {
    if p < 5 {
        return Err(Error::PrimeTooSmall(p).into());
    }
    let mut rep = RunReport::new("verify-local");
    let mut settings = Vec::new();
    if let Some((ell, r, g_v, i_v, base, flag)) = single {
        settings.push(LocalSetting::new(p, ell, r, g_v, i_v, base, flag)?);
    }
    if sweep {
        settings.extend(parity_engine::enumerate_settings(p, &bounds)?);
    }
    if settings.is_empty() && !emit_table {
        return Err(CliError::Usage("verify-local needs --sweep, --emit-table or a single setting (--ell, --g-v, --i-v, --base)".into()));
    }
    let mut verdicts = Vec::new();
    for s in &settings {
        let v = parity_engine::verify_local(s)?;
        rep.record(v.equal, verdict_line(&v));
        verdicts.push(v);
    }
    if !settings.is_empty() {
        rep.lines.push(format!("settings: {}, equal: {}, unequal: {}", settings.len(), rep.passed, rep.failed));
    }
    if emit_table {
        let c = parity_engine::c_table()?;
        let w = parity_engine::w_table()?;
        rep.lines.push("Tamagawa side:".into());
        rep.lines.extend(parity_engine::render_table(&c).lines().map(String::from));
        rep.lines.push("root number side:".into());
        rep.lines.extend(parity_engine::render_table(&w).lines().map(String::from));
        let ok = c == w && c == parity_engine::PRINTED_TABLE;
        rep.record(ok, format!("tables agree with each other and the printed table: {}", pass_word(ok)));
    }
    rep.payload = serde_json::to_value(&verdicts).map_err(|e| CliError::Io(e.to_string()))?;
    write_json(json_path, &rep.payload)?;
    Ok(rep)
}

fn verify_global(
    file: &Path,
    p: u64,
    completion: &Path,
    json_path: &Option<PathBuf>,
) -> std::result::Result<RunReport, CliError> {
    if p < 5 {
        return Err(Error::PrimeTooSmall(p).into());
    }
    let text = std::fs::read_to_string(completion).map_err(|e| CliError::Io(format!("{}: {e}", completion.display())))?;
    let map = parse_completion(&text)?;
    let mut rep = RunReport::new("verify-global");
    let mut records = Vec::new();
    for curve in parse_curve_file(file)? {
        let g = parity_engine::global_parity(&curve, p, &map)?;
        for (ell, v) in &g.locals {
            rep.lines.push(format!("  {ell}: {}", verdict_line(v)));
        }
        rep.record(g.equal, format!("{curve} w={:+} c={:+} equal={}", g.w_product, g.c_product, g.equal));
        records.push(json!({ "curve": curve.to_string(), "verdict": g }));
    }
    rep.payload = json!(records);
    write_json(json_path, &rep.payload)?;
    Ok(rep)
}

fn surgery_cmd(file: &Path, p0: u64, v: u64, n: u32, json_path: &Option<PathBuf>) -> std::result::Result<RunReport, CliError> {
    let plan = SurgeryPlan::new(p0, v, n)?;
    let mut rep = RunReport::new("surgery");
    let mut records = Vec::new();
    for curve in parse_curve_file(file)? {
        let res = surgery::make_semistable(&curve, &plan)?;
        let cert = surgery::certify(&res.curve, p0, v)?;
        let close = surgery::closeness_check(&curve, &res.curve, p0)?;
        rep.lines.push(format!("input {curve}"));
        rep.lines.push(format!("output {}", res.curve));
        rep.lines.extend(res.plan.to_string().lines().map(String::from));
        rep.lines.extend(cert.to_string().lines().map(String::from));
        let ok = cert.pass && close;
        rep.record(ok, format!("closeness at {p0}: {}; overall {}", pass_word(close), pass_word(ok)));
        records.push(json!({
            "input": curve.to_string(),
            "output": res.curve.to_string(),
            "plan": res.plan,
            "certify": cert,
            "closeness": close,
        }));
    }
    rep.payload = json!(records);
    write_json(json_path, &rep.payload)?;
    Ok(rep)
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> std::result::Result<RunReport, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    match cli.command {
        Command::Reduce { file, ell, json } => reduce(&file, ell, &json),
        Command::Chars { p, n, verify_reduction } => chars(p, n, verify_reduction),
        Command::Regulator { p, rep, membership } => regulator_cmd(p, rep, membership),
        Command::VerifyLocal {
            p,
            sweep,
            emit_table,
            max_n,
            ells,
            rs,
            strict,
            ell,
            r,
            g_v,
            i_v,
            base,
            eta_equals_chi,
            json,
        } => {
            let single = match (ell, g_v, i_v, base) {
                (None, None, None, None) => None,
                (Some(ell), Some(g), Some(i), Some(b)) => Some((ell, r, g, i, b, eta_equals_chi)),
                _ => return Err(CliError::Usage("a single setting needs --ell, --g-v, --i-v and --base".into())),
            };
            verify_local(p, sweep, emit_table, EnumerationBounds { max_n, rs, ells, strict }, single, &json)
        }
        Command::VerifyGlobal { file, p, completion, json } => verify_global(&file, p, &completion, &json),
        Command::Surgery { file, p0, v, n, json } => surgery_cmd(&file, p0, v, n, &json),
    }
}

/// Runs the command, writes its report to `out` and returns the exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match run(argv) {
        Ok(rep) => {
            for line in &rep.lines {
                let _ = writeln!(out, "{line}");
            }
            rep.exit_code()
        }
        Err(CliError::Help(text)) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(CliError::Usage(text)) => {
            let _ = writeln!(out, "{}", text.trim_end());
            2
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(out, "error: {e}");
            2
        }
        Err(CliError::Io(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            2
        }
    }
}
