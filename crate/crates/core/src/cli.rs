//! The `b2check` command line: problem parsing, the verification pipeline,
//! and its table and JSON reports.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cpoly::{abelianize, check_square_free, omega2_quotient_dim, ShapeParams};
use crate::error::{Error, Result};
use crate::forms::{check_form_properties, FormChecks, PhiMap};
use crate::lcs::lemmas::{check_b2rels_with, BracketDepChecker, BracketDepVerdict, LemmaVerdict};
use crate::lcs::{degree_reports, DegreeReport, DEFAULT_SEED};
use crate::ncalg::{Grading, NcPoly};
use crate::relmat::{self, RankCertificate};
use crate::series::{closed_form_hp, eq2_hp, leq, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Bruteforce,
    Phi,
    Relmat,
    Lemmas,
    Series,
    Forms,
}

impl Check {
    pub const ALL: [Check; 6] = [Check::Bruteforce, Check::Phi, Check::Relmat, Check::Lemmas, Check::Series, Check::Forms];

    fn name(self) -> &'static str {
        match self {
            Check::Bruteforce => "bruteforce",
            Check::Phi => "phi",
            Check::Relmat => "relmat",
            Check::Lemmas => "lemmas",
            Check::Series => "series",
            Check::Forms => "forms",
        }
    }
}

/// A verification problem; the file form may omit everything except `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(rename = "P")]
    pub p: NcPoly,
    #[serde(default)]
    pub weights: Option<(u32, u32)>,
    #[serde(default)]
    pub max_degree: Option<u32>,
    #[serde(default = "all_checks")]
    pub checks: Vec<Check>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Random instances per sampled property.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn all_checks() -> Vec<Check> {
    Check::ALL.to_vec()
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_samples() -> usize {
    100
}

impl ProblemSpec {
    pub fn new(p: NcPoly) -> Self {
        ProblemSpec {
            p,
            weights: None,
            max_degree: None,
            checks: all_checks(),
            seed: DEFAULT_SEED,
            samples: default_samples(),
        }
    }

    /// Either a full problem object (with key `"P"`) or a bare polynomial.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        if v.get("P").is_some() {
            Ok(serde_json::from_value(v)?)
        } else {
            Ok(ProblemSpec::new(serde_json::from_value(v)?))
        }
    }
}

/// Minimal coprime weights making every word of `p` the same degree.
pub fn infer_grading(p: &NcPoly) -> Result<Grading> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let counts: Vec<(i64, i64)> = p.terms().map(|(w, _)| (w.count_x() as i64, w.count_y() as i64)).collect();
    let (x0, y0) = counts[0];
    let mut ratio: Option<(i64, i64)> = None;
    for &(x, y) in &counts[1..] {
        let (dx, dy) = (x - x0, y - y0);
        if dx == 0 && dy == 0 {
            continue;
        }
        // s dx + r dy = 0 with s, r > 0
        if dx.signum() * dy.signum() >= 0 {
            return Err(Error::NotQuasihomogeneous(format!("{p}: no positive weights balance its words")));
        }
        let g = dx.gcd(&dy);
        let here = (dy.abs() / g, dx.abs() / g);
        match ratio {
            None => ratio = Some(here),
            Some(r) if r == here => {}
            Some(_) => return Err(Error::NotQuasihomogeneous(format!("{p}: word degrees force incompatible weights"))),
        }
    }
    let (s, r) = ratio.unwrap_or((1, 1));
    Grading::new(s as u32, r as u32)
}

/// 12 for the standard grading, `3 (s + r) max(n, 2)` otherwise.
pub fn default_max_degree(g: &Grading, shape: &ShapeParams) -> u32 {
    if (g.s, g.r) == (1, 1) {
        12
    } else {
        3 * (g.s + g.r) * shape.n.max(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemEcho {
    #[serde(rename = "P")]
    pub p: NcPoly,
    pub weights: (u32, u32),
    pub max_degree: u32,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub m: u32,
    pub phi_rank: usize,
    pub omega2_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTriple {
    pub bruteforce_hp: Option<TruncatedSeries>,
    pub bound_series: Option<TruncatedSeries>,
    pub closed_form: TruncatedSeries,
    pub eq2_hp: Option<TruncatedSeries>,
    pub product_formula: Option<TruncatedSeries>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub identities: Vec<LemmaVerdict>,
    pub bracketdep: Vec<BracketDepVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    IsomorphismVerified,
    NotVerified,
    /// The brute-force or phi check was not requested.
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: ProblemEcho,
    pub shape: ShapeParams,
    pub degrees: Vec<DegreeReport>,
    pub phi: Vec<PhiEntry>,
    pub relmat: Vec<RankCertificate>,
    pub series: SeriesTriple,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forms: Option<FormChecks>,
    pub checks: Vec<CheckOutcome>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn series_of(order: u32, dims: impl IntoIterator<Item = (u32, usize)>) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(order as usize);
    for (m, d) in dims {
        s.set(m as usize, d as i64);
    }
    s
}

/// Checks the hypotheses, then runs the requested checks up to the degree cap.
pub fn run(spec: &ProblemSpec) -> Result<RunReport> {
    let p = &spec.p;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.terms().all(|(w, _)| w.is_empty()) {
        return Err(Error::ConstantPolynomial);
    }
    let g = match spec.weights {
        Some((s, r)) => {
            let g = Grading::new(s, r)?;
            if p.homogeneous_degree(&g).is_none() {
                return Err(Error::NotQuasihomogeneous(format!("{p} under weights ({s}, {r})")));
            }
            g
        }
        None => infer_grading(p)?,
    };
    let p_ab = abelianize(p);
    let shape = check_square_free(&p_ab, &g)?;
    let max = spec.max_degree.unwrap_or_else(|| default_max_degree(&g, &shape));
    let mut checks = spec.checks.clone();
    checks.sort();
    checks.dedup();
    let wants = |c: Check| checks.contains(&c);
    let mut outcomes = Vec::new();
    let closed = closed_form_hp(&g, shape.d, max as usize);

    let degrees = if wants(Check::Bruteforce) { degree_reports(p, &g, max, spec.seed)? } else { Vec::new() };
    let bruteforce_hp = wants(Check::Bruteforce).then(|| series_of(max, degrees.iter().map(|r| (r.m, r.dim_b2))));
    if let Some(hp) = &bruteforce_hp {
        let bad: Vec<usize> = (0..=max as usize).filter(|&m| hp.coeff(m) != closed.coeff(m)).collect();
        let detail = if bad.is_empty() {
            format!("dim B2 matches the closed form for m <= {max}")
        } else {
            format!("dim B2 differs from the closed form at m = {bad:?}")
        };
        outcomes.push(CheckOutcome { check: Check::Bruteforce, passed: bad.is_empty(), detail });
    }

    let mut phi = Vec::new();
    if wants(Check::Phi) {
        let mut map = PhiMap::new(p, &g)?;
        for m in 1..=max {
            phi.push(PhiEntry { m, phi_rank: map.phi_rank(m), omega2_dim: omega2_quotient_dim(&p_ab, &g, m) });
        }
        let mut bad: Vec<u32> = phi.iter().filter(|e| e.phi_rank != e.omega2_dim).map(|e| e.m).collect();
        if !degrees.is_empty() {
            bad.extend(degrees.iter().zip(&phi).filter(|(d, e)| d.dim_b2 != e.phi_rank).map(|(d, _)| d.m));
            bad.sort();
            bad.dedup();
        }
        let detail = if bad.is_empty() {
            "phi is onto the Jacobian quotient at every degree".to_string()
        } else {
            format!("rank mismatch at m = {bad:?}")
        };
        outcomes.push(CheckOutcome { check: Check::Phi, passed: bad.is_empty(), detail });
    }

    let mut certs = Vec::new();
    if wants(Check::Relmat) && shape.n >= 1 {
        for m in 1..=max {
            if relmat::compute_sm(&g, &shape, m).sub.is_some() {
                certs.push(relmat::certify_max_rank(&g, &shape, m)?);
            }
        }
    }
    if wants(Check::Relmat) {
        let bad: Vec<u32> = certs.iter().filter(|c| !c.verdict).map(|c| c.m).collect();
        let detail = if shape.n == 0 {
            "single-term relations: no matrices to certify".to_string()
        } else if bad.is_empty() {
            format!("{} rank certificates hold", certs.len())
        } else {
            format!("rank certificates fail at m = {bad:?}")
        };
        outcomes.push(CheckOutcome { check: Check::Relmat, passed: bad.is_empty(), detail });
    }

    let mut series = SeriesTriple { bruteforce_hp, bound_series: None, closed_form: closed.clone(), eq2_hp: None, product_formula: None };
    if wants(Check::Series) {
        series.eq2_hp = eq2_hp(&g, shape.d, max as usize).ok();
        series.product_formula = relmat::product_formula(&g, &shape, max as usize).ok();
        let (passed, detail) = match relmat::bound_series(&g, &shape, max as usize) {
            Ok(b) => {
                let mut problems = Vec::new();
                if b != closed {
                    problems.push("bound series differs from the closed form".to_string());
                }
                if series.eq2_hp.as_ref().is_some_and(|e| *e != closed) {
                    problems.push("Hilbert series of the regular sequence differs from the closed form".to_string());
                }
                if series.product_formula.as_ref().is_some_and(|e| *e != closed) {
                    problems.push("product formula differs from the closed form".to_string());
                }
                if let Some(hp) = &series.bruteforce_hp {
                    if !leq(hp, &b)? {
                        problems.push("brute force exceeds the bound".to_string());
                    }
                }
                series.bound_series = Some(b);
                if problems.is_empty() {
                    (true, "bound series = closed form".to_string())
                } else {
                    (false, problems.join("; "))
                }
            }
            Err(Error::Certificate(e)) => (false, e),
            Err(e) => return Err(e),
        };
        outcomes.push(CheckOutcome { check: Check::Series, passed, detail });
    }

    let mut lemmas = None;
    if wants(Check::Lemmas) {
        let per_identity = spec.samples.div_ceil(4);
        let identities = check_b2rels_with(&Grading::standard(), 8, per_identity, spec.seed)?;
        let mut checker = BracketDepChecker::new(p, &g, spec.seed)?;
        let bracketdep = if max >= shape.d + g.s.min(g.r) {
            checker.check_random(spec.samples.max(50), max, spec.seed)?
        } else {
            Vec::new()
        };
        let failed = identities.iter().filter(|v| !v.holds).count() + bracketdep.iter().filter(|v| !v.vanishes).count();
        let detail = format!(
            "{} identity instances, {} bracket relations, {failed} failures",
            identities.len(),
            bracketdep.len()
        );
        outcomes.push(CheckOutcome { check: Check::Lemmas, passed: failed == 0, detail });
        lemmas = Some(LemmaReport { identities, bracketdep });
    }

    let mut forms = None;
    if wants(Check::Forms) {
        let f = check_form_properties(spec.samples, spec.seed);
        let detail = format!("{} form triples, {} words", f.triples, f.words);
        outcomes.push(CheckOutcome { check: Check::Forms, passed: f.all_hold(), detail });
        forms = Some(f);
    }

    let verdict = if !(wants(Check::Bruteforce) && wants(Check::Phi)) {
        Verdict::Incomplete
    } else if outcomes.iter().filter(|o| matches!(o.check, Check::Bruteforce | Check::Phi)).all(|o| o.passed) {
        Verdict::IsomorphismVerified
    } else {
        Verdict::NotVerified
    };
    Ok(RunReport {
        problem: ProblemEcho { p: p.clone(), weights: (g.s, g.r), max_degree: max, checks, seed: spec.seed, samples: spec.samples },
        shape,
        degrees,
        phi,
        relmat: certs,
        series,
        lemmas,
        forms,
        checks: outcomes,
        verdict,
    })
}

/// Plain-text summary: one row per degree, then the checks.
pub fn render_table(r: &RunReport) -> String {
    let mut out = String::new();
    let (s, rr) = r.problem.weights;
    let sh = &r.shape;
    let _ = writeln!(out, "P = {}", r.problem.p);
    let _ = writeln!(out, "weights (s, r) = ({s}, {rr}); d = {}; u = {}, v = {}, n = {}", sh.d, sh.u, sh.v, sh.n);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:>4} {:>8} {:>8} {:>8} {:>6} {:>4} {:>6} {:>6} {:>6}", "m", "L2", "L3", "L2+I", "B2", "phi", "omega2", "bound", "closed");
    let cell = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
    for m in 1..=r.problem.max_degree {
        let d = r.degrees.iter().find(|d| d.m == m);
        let ph = r.phi.iter().find(|e| e.m == m);
        let _ = writeln!(
            out,
            "{:>4} {:>8} {:>8} {:>8} {:>6} {:>4} {:>6} {:>6} {:>6}",
            m,
            cell(d.map(|d| d.dim_l2 as i64)),
            cell(d.map(|d| d.dim_l3 as i64)),
            cell(d.map(|d| d.dim_l2_plus_ideal as i64)),
            cell(d.map(|d| d.dim_b2 as i64)),
            cell(ph.map(|e| e.phi_rank as i64)),
            cell(ph.map(|e| e.omega2_dim as i64)),
            cell(r.series.bound_series.as_ref().map(|b| b.coeff(m as usize))),
            r.series.closed_form.coeff(m as usize),
        );
    }
    let _ = writeln!(out);
    for c in &r.checks {
        let _ = writeln!(out, "{:<11} {}  {}", c.check.name(), if c.passed { "PASS" } else { "FAIL" }, c.detail);
    }
    let verdict = match r.verdict {
        Verdict::IsomorphismVerified => "ISOMORPHISM_VERIFIED",
        Verdict::NotVerified => "NOT_VERIFIED",
        Verdict::Incomplete => "INCOMPLETE",
    };
    let _ = writeln!(out, "verdict: {verdict}");
    out
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ZeroPolynomial
        | Error::ConstantPolynomial
        | Error::NotHomogeneous
        | Error::NotQuasihomogeneous(_)
        | Error::NotSquareFree(_)
        | Error::SquarePart { .. } => 2,
        Error::Certificate(_) => 3,
        _ => 1,
    }
}

#[derive(Debug, Parser)]
#[command(name = "b2check", version, about = "Degree-wise verification of B2 for quasihomogeneous two-generator quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every check, with the isomorphism verdict.
    Analyze(CommonArgs),
    /// Closed form, bound series and the other series identities.
    Hilbert(CommonArgs),
    /// Brute-force dimensions of B2 against the closed form.
    Bruteforce(CommonArgs),
    /// Rank certificates of the relation matrices.
    Matrix(MatrixArgs),
    /// Random instances of the commutator identities and bracket relations.
    Lemmas(CommonArgs),
    /// Star-product properties and the rank of phi.
    Forms(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Problem file: a polynomial object like {"XXX": 1, "YY": 1} or a full problem with key "P".
    #[arg(long, value_name = "FILE")]
    poly: PathBuf,
    #[arg(long, value_name = "N")]
    max_degree: Option<u32>,
    /// Weights of X and Y, e.g. 2,3.
    #[arg(long, value_name = "S,R", value_parser = parse_weights)]
    weights: Option<(u32, u32)>,
    #[arg(long, value_name = "K")]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Comma-separated subset of checks (analyze only).
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    checks: Option<Vec<Check>>,
    /// Random instances per sampled property.
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also print A and B at this degree.
    #[arg(long, value_name = "M")]
    degree: Option<u32>,
}

fn parse_weights(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected s,r")?;
    let a = a.trim().parse().map_err(|_| format!("bad weight {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad weight {b:?}"))?;
    Ok((a, b))
}

fn load_spec(args: &CommonArgs, fixed: Option<&[Check]>) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(&args.poly).map_err(|e| Error::Io(format!("{}: {e}", args.poly.display())))?;
    let mut spec = ProblemSpec::from_json_str(&text)?;
    if let Some(w) = args.weights {
        spec.weights = Some(w);
    }
    if let Some(m) = args.max_degree {
        spec.max_degree = Some(m);
    }
    if let Some(k) = args.seed {
        spec.seed = k;
    }
    if let Some(n) = args.samples {
        spec.samples = n;
    }
    match fixed {
        Some(c) => spec.checks = c.to_vec(),
        None => {
            if let Some(c) = &args.checks {
                spec.checks = c.clone();
            }
        }
    }
    Ok(spec)
}

fn write_json(path: &Path, report: &RunReport) -> Result<()> {
    std::fs::write(path, report.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn matrix_dump(report: &RunReport, m: u32) -> Result<String> {
    let (s, r) = report.problem.weights;
    let g = Grading::new(s, r)?;
    let mut out = String::new();
    let Some((tag, frame)) = relmat::classify(&g, &report.shape, m) else {
        return Ok(format!("m = {m}: S_(m-d) is empty, no relations\n"));
    };
    let a = relmat::build_a(&frame.g, &frame.shape, &frame.sm)?;
    let b = relmat::build_b(&frame, &tag)?;
    let _ = writeln!(out, "m = {m}: {:?} {:?}{}", tag.shape, tag.pq_case, if frame.swapped { " (x and y exchanged)" } else { "" });
    for (name, mat) in [("A", &a), ("B", &b)] {
        let _ = writeln!(out, "{name} ({}x{}):", mat.rows(), mat.cols());
        for row in mat.to_string_rows() {
            let _ = writeln!(out, "  [{}]", row.join(", "));
        }
    }
    Ok(out)
}

/// Runs the command line; returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let (args, fixed, degree): (&CommonArgs, Option<&[Check]>, Option<u32>) = match &cli.command {
        Command::Analyze(a) => (a, None, None),
        Command::Hilbert(a) => (a, Some(&[Check::Series]), None),
        Command::Bruteforce(a) => (a, Some(&[Check::Bruteforce]), None),
        Command::Matrix(m) => (&m.common, Some(&[Check::Relmat]), m.degree),
        Command::Lemmas(a) => (a, Some(&[Check::Lemmas]), None),
        Command::Forms(a) => (a, Some(&[Check::Phi, Check::Forms]), None),
    };
    let analyze = fixed.is_none();
    let result = load_spec(args, fixed).and_then(|spec| {
        let report = run(&spec)?;
        let mut text = render_table(&report);
        if let Some(m) = degree {
            text.push('\n');
            text.push_str(&matrix_dump(&report, m)?);
        }
        Ok((report, text))
    });
    match result {
        Ok((report, text)) => {
            let _ = write!(out, "{text}");
            if let Some(path) = &args.json {
                if let Err(e) = write_json(path, &report) {
                    let _ = writeln!(err, "error: {e}");
                    return 1;
                }
            }
            let ok = report.all_passed() && (!analyze || report.verdict == Verdict::IsomorphismVerified);
            if ok {
                0
            } else {
                3
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> NcPoly {
        NcPoly::from_json_str(s).unwrap()
    }

    #[test]
    fn grading_inference() {
        let g = |s: &str| infer_grading(&poly(s)).map(|g| (g.s, g.r));
        assert_eq!(g(r#"{"XXX": 1, "YY": 1}"#), Ok((2, 3)));
        assert_eq!(g(r#"{"XY": 1, "YX": 1}"#), Ok((1, 1)));
        assert_eq!(g(r#"{"X": 1, "YY": 1}"#), Ok((2, 1)));
        assert_eq!(g(r#"{"XXYY": 1, "XXXXXXY": 1}"#), Ok((1, 4)));
        assert!(matches!(g(r#"{"XY": 1, "X": 1}"#), Err(Error::NotQuasihomogeneous(_))));
        assert!(matches!(g(r#"{"XX": 1, "Y": 1, "XYY": 1}"#), Err(Error::NotQuasihomogeneous(_))));
        assert_eq!(g("{}"), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn spec_forms() {
        let bare = ProblemSpec::from_json_str(r#"{"XY": 1, "YX": "1"}"#).unwrap();
        assert_eq!(bare.checks, Check::ALL.to_vec());
        let full = ProblemSpec::from_json_str(r#"{"P": {"XX": 1}, "weights": [1, 1], "checks": ["phi"], "seed": 7}"#).unwrap();
        assert_eq!((full.weights, full.checks, full.seed), (Some((1, 1)), vec![Check::Phi], 7));
        assert!(ProblemSpec::from_json_str("[1]").is_err());
    }

    #[test]
    fn hypotheses_first() {
        let run_p = |s: &str| run(&ProblemSpec::new(poly(s))).map(|_| ());
        assert!(matches!(run_p(r#"{"XXY": 1}"#), Err(Error::NotSquareFree(_))));
        assert!(matches!(run_p(r#"{"XY": 1, "YX": -1}"#), Err(Error::NotSquareFree(_))));
        assert_eq!(run_p(r#"{"": 3}"#), Err(Error::ConstantPolynomial));
        assert_eq!(run_p("{}"), Err(Error::ZeroPolynomial));
        let mut spec = ProblemSpec::new(poly(r#"{"XXX": 1, "YY": 1}"#));
        spec.weights = Some((1, 1));
        assert!(matches!(run(&spec), Err(Error::NotQuasihomogeneous(_))));
        spec.weights = Some((2, 4));
        assert!(matches!(run(&spec), Err(Error::InvalidGrading { .. })));
    }

    #[test]
    fn small_pipeline() {
        let mut spec = ProblemSpec::new(poly(r#"{"XY": 1, "YX": 1}"#));
        spec.max_degree = Some(6);
        spec.samples = 20;
        let r = run(&spec).unwrap();
        assert_eq!(r.verdict, Verdict::IsomorphismVerified);
        assert!(r.all_passed(), "{:?}", r.checks);
        assert_eq!(r.series.closed_form.coeffs(), &[0, 0, 1, 0, 0, 0, 0]);
        assert!(render_table(&r).contains("verdict: ISOMORPHISM_VERIFIED"));
        spec.checks = vec![Check::Series];
        assert_eq!(run(&spec).unwrap().verdict, Verdict::Incomplete);
    }

    #[test]
    fn default_degrees() {
        let shape = |n| ShapeParams { u: 0, v: 0, n, d: 0, a: vec![] };
        assert_eq!(default_max_degree(&Grading::standard(), &shape(2)), 12);
        assert_eq!(default_max_degree(&Grading::new(2, 3).unwrap(), &shape(1)), 30);
        assert_eq!(default_max_degree(&Grading::new(2, 3).unwrap(), &shape(3)), 45);
    }
}
