use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tamedeg::autos::{compose_word, parse_word_file, print_word_file, PolyMap};
use tamedeg::decision::{decide, scan, type_iii_constraints, DegreeTriple, ScanRow};
use tamedeg::numsemi::{frobenius, membership, SemigroupPair};
use tamedeg::parser::{
    parse_map_file, parse_polynomial, print_map_file, print_polynomial, ParseError,
};
use tamedeg::poisson::{algebraically_dependent, poisson_bracket, print_bracket, su_bound};
use tamedeg::poly::default_names;
use tamedeg::reduction::{
    default_cap, find_any_reduction, find_elementary_reduction, ReductionQuery, ReductionResult,
};
use tamedeg::report::{verify_example, verify_example_map};
use tamedeg::{Degree, Monomial, Polynomial};

/// Longest polynomial accepted on the command line; longer ones go in a file.
const MAX_INLINE_POLY: usize = 200;

#[derive(Parser)]
#[command(
    name = "tamedeg",
    version,
    about = "Multidegrees of tame automorphisms of affine 3-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a degree triple as Tame, NotTame or Unknown.
    Decide {
        d1: u64,
        d2: u64,
        d3: u64,
        /// Also print the witness word, in the order the degrees were given.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide every sorted triple with d3 <= MAX.
    Scan {
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a witness word for a realizable triple.
    Witness {
        d1: u64,
        d2: u64,
        d3: u64,
        #[arg(long)]
        json: bool,
    },
    /// Poisson bracket [f, g].
    Bracket {
        f: Option<String>,
        g: Option<String>,
        /// Read f and g from a map file instead.
        #[arg(long, conflicts_with_all = ["f", "g"])]
        file: Option<PathBuf>,
        #[arg(long, default_value = "x,y,z")]
        vars: String,
        #[arg(long)]
        json: bool,
    },
    /// Check the degree inequality for G(f, g); G is written in the first two variables.
    SuCheck {
        #[arg(value_name = "f")]
        f: Option<String>,
        #[arg(value_name = "g")]
        g: Option<String>,
        #[arg(name = "G")]
        big_g: Option<String>,
        /// Read f, g and G from a map file instead.
        #[arg(long, conflicts_with_all = ["f", "g", "G"])]
        file: Option<PathBuf>,
        #[arg(long, default_value = "x,y,z")]
        vars: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for an elementary reduction of a map of 3-space.
    Reduce {
        mapfile: PathBuf,
        /// Component to reduce (1-based); all three are tried when omitted.
        #[arg(long)]
        target: Option<usize>,
        /// Bound on the composed degree of support monomials.
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Membership of l in aN + bN.
    Semigroup { a: u64, b: u64, l: u64 },
    /// Multidegree of a map.
    Mdeg {
        mapfile: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compose a word file into a map.
    Compose {
        wordfile: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the (10, 23, 25) example.
    VerifyExample {
        /// Check this map instead of the built-in one.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    /// Exit code 1.
    Domain(String),
    /// Exit code 2.
    Usage(String),
}

impl From<tamedeg::Error> for Failure {
    fn from(e: tamedeg::Error) -> Self {
        match e {
            tamedeg::Error::Parse(p) => Failure::Usage(p.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Decide {
            d1,
            d2,
            d3,
            witness,
            json,
        } => cmd_decide(d1, d2, d3, witness, json),
        Command::Scan { max, format, out } => cmd_scan(max, format, out.as_deref()),
        Command::Witness { d1, d2, d3, json } => cmd_witness(d1, d2, d3, json),
        Command::Bracket {
            f,
            g,
            file,
            vars,
            json,
        } => cmd_bracket(f, g, file.as_deref(), &vars, json),
        Command::SuCheck {
            f,
            g,
            big_g,
            file,
            vars,
            json,
        } => cmd_su_check(f, g, big_g, file.as_deref(), &vars, json),
        Command::Reduce {
            mapfile,
            target,
            cap,
        } => cmd_reduce(&mapfile, target, cap),
        Command::Semigroup { a, b, l } => cmd_semigroup(a, b, l),
        Command::Mdeg { mapfile, json } => cmd_mdeg(&mapfile, json),
        Command::Compose { wordfile, json } => cmd_compose(&wordfile, json),
        Command::VerifyExample { map, json } => cmd_verify_example(map.as_deref(), json),
    }
}

fn print_json<T: Serialize>(value: &T) -> CmdResult {
    let text = serde_json::to_string(value).map_err(|e| Failure::Domain(e.to_string()))?;
    emit(&format!("{text}\n"))
}

/// Writes to standard output; a closed pipe is not an error.
fn emit(text: &str) -> CmdResult {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_map(path: &Path) -> Result<(Vec<String>, PolyMap), Failure> {
    let file = parse_map_file(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let map = PolyMap::new(file.polynomials)?;
    Ok((file.variables, map))
}

fn split_vars(vars: &str) -> Result<Vec<String>, Failure> {
    let names: Vec<String> = vars.split(',').map(|s| s.trim().to_string()).collect();
    if names.iter().any(String::is_empty) {
        return Err(Failure::Usage(format!("invalid variable list `{vars}`")));
    }
    Ok(names)
}

fn inline_poly(src: &str, names: &[String], what: &str) -> Result<Polynomial, Failure> {
    if src.len() > MAX_INLINE_POLY {
        return Err(Failure::Usage(format!(
            "{what} is longer than {MAX_INLINE_POLY} characters; pass it with --file"
        )));
    }
    parse_polynomial(src, names).map_err(|e| Failure::Usage(format!("{what}: {e}")))
}

/// Polynomials either from positional arguments or from a map file.
fn gather_polys(
    args: &[(Option<String>, &str)],
    file: Option<&Path>,
    vars: &str,
) -> Result<(Vec<String>, Vec<Polynomial>), Failure> {
    if let Some(path) = file {
        let parsed = parse_map_file(&read(path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        if parsed.polynomials.len() != args.len() {
            return Err(Failure::Usage(format!(
                "{}: expected {} polynomials, found {}",
                path.display(),
                args.len(),
                parsed.polynomials.len()
            )));
        }
        return Ok((parsed.variables, parsed.polynomials));
    }
    let names = split_vars(vars)?;
    let mut polys = Vec::new();
    for (arg, what) in args {
        let src = arg
            .as_deref()
            .ok_or_else(|| Failure::Usage(format!("missing argument {what}")))?;
        polys.push(inline_poly(src, &names, what)?);
    }
    Ok((names, polys))
}

#[derive(Serialize)]
struct DecideOut<'a> {
    verdict: tamedeg::decision::Verdict,
    reason: tamedeg::decision::Reason,
    #[serde(skip_serializing_if = "Option::is_none")]
    representation: Option<tamedeg::numsemi::Representation>,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    failed_hypotheses: &'a [tamedeg::decision::Hypothesis],
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

fn cmd_decide(d1: u64, d2: u64, d3: u64, want_witness: bool, json: bool) -> CmdResult {
    let triple = DegreeTriple::new(d1, d2, d3)?;
    let decision = decide(&triple)?;
    let witness = match (&decision.witness, want_witness) {
        (Some(w), true) => Some(print_word_file(&triple.orient(w)?, &default_names(3))),
        _ => None,
    };
    if json {
        return print_json(&DecideOut {
            verdict: decision.verdict,
            reason: decision.reason,
            representation: decision.representation,
            failed_hypotheses: &decision.failed_hypotheses,
            witness,
        });
    }
    let [a, b, c] = decision.triple;
    println!(
        "({a}, {b}, {c}): {} [{}]",
        decision.verdict, decision.reason
    );
    if let Some(r) = decision.representation {
        println!("{c} = {}*{a} + {}*{b}", r.s, r.t);
    }
    if !decision.failed_hypotheses.is_empty() {
        let names: Vec<String> = decision
            .failed_hypotheses
            .iter()
            .map(|h| h.to_string())
            .collect();
        println!("failed hypotheses: {}", names.join(", "));
    }
    if let Some(hit) = type_iii_constraints(&triple) {
        println!("type III degree pattern: n = {} ({:?})", hit.n, hit.family);
    }
    if want_witness {
        match witness {
            Some(w) => print!("{w}"),
            None => println!("no witness"),
        }
    }
    Ok(())
}

fn cmd_scan(max: u64, format: Format, out: Option<&Path>) -> CmdResult {
    let rows: Vec<ScanRow> = scan(max)?.iter().map(ScanRow::from).collect();
    let text = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)
                    .map_err(|e| Failure::Domain(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Domain(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is utf-8")
        }
        Format::Json => {
            let lines = rows
                .iter()
                .map(serde_json::to_string)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Domain(e.to_string()))?;
            format!("[\n{}\n]\n", lines.join(",\n"))
        }
    };
    match out {
        Some(path) => fs::write(path, text)?,
        None => emit(&text)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct WitnessOut {
    triple: [u64; 3],
    steps: usize,
    word: String,
}

fn cmd_witness(d1: u64, d2: u64, d3: u64, json: bool) -> CmdResult {
    let triple = DegreeTriple::new(d1, d2, d3)?;
    let decision = decide(&triple)?;
    let Some(w) = &decision.witness else {
        return Err(Failure::Domain(format!(
            "no witness for ({d1}, {d2}, {d3}): {} [{}]",
            decision.verdict, decision.reason
        )));
    };
    let word = triple.orient(w)?;
    let text = print_word_file(&word, &default_names(3));
    if json {
        print_json(&WitnessOut {
            triple: triple.original(),
            steps: word.len(),
            word: text,
        })
    } else {
        print!("{text}");
        Ok(())
    }
}

#[derive(Serialize)]
struct BracketOut {
    bracket: String,
    degree: Degree,
    dependent: bool,
}

fn cmd_bracket(
    f: Option<String>,
    g: Option<String>,
    file: Option<&Path>,
    vars: &str,
    json: bool,
) -> CmdResult {
    let (names, polys) = gather_polys(&[(f, "f"), (g, "g")], file, vars)?;
    let b = poisson_bracket(&polys[0], &polys[1])?;
    let out = BracketOut {
        bracket: print_bracket(&b, &names),
        degree: b.degree(),
        dependent: algebraically_dependent(&polys[0], &polys[1])?,
    };
    if json {
        return print_json(&out);
    }
    println!("{}", out.bracket);
    println!("degree: {}", out.degree);
    Ok(())
}

/// Reinterprets a polynomial in the first two variables as a bivariate one.
fn to_bivariate(p: &Polynomial) -> Result<Polynomial, Failure> {
    if (2..p.arity()).any(|i| p.depends_on(i)) {
        return Err(Failure::Usage(
            "G may only use the first two variables".into(),
        ));
    }
    let terms = p
        .terms()
        .map(|(m, c)| (Monomial::new([m.exponent(0), m.exponent(1)]), c.clone()));
    Ok(Polynomial::from_terms(2, terms)?)
}

fn cmd_su_check(
    f: Option<String>,
    g: Option<String>,
    big_g: Option<String>,
    file: Option<&Path>,
    vars: &str,
    json: bool,
) -> CmdResult {
    let (_, polys) = gather_polys(&[(f, "f"), (g, "g"), (big_g, "G")], file, vars)?;
    if polys[0].arity() < 2 {
        return Err(Failure::Usage("need at least two variables".into()));
    }
    let report = su_bound(&polys[0], &polys[1], &to_bivariate(&polys[2])?)?;
    if json {
        return print_json(&report);
    }
    println!(
        "p = {}, q = {}, r = {}, deg [f,g] = {}",
        report.p, report.q, report.r, report.bracket_degree
    );
    println!(
        "deg G(f,g) = {} {} {}: {}",
        report.lhs_degree,
        if report.holds { ">=" } else { "<" },
        report.rhs_bound,
        if report.holds { "holds" } else { "violated" }
    );
    Ok(())
}

#[derive(Serialize)]
struct ReduceOut {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    others: Option<[usize; 2]>,
    cap: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    g: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_degree: Option<i64>,
}

fn cmd_reduce(path: &Path, target: Option<usize>, cap: Option<u32>) -> CmdResult {
    let (names, map) = read_map(path)?;
    if map.arity() != 3 || map.components().len() != 3 {
        return Err(Failure::Domain("reduce needs a map of 3-space".into()));
    }
    let (cap, result): (u32, Option<ReductionResult>) = match target {
        Some(t) => {
            if !(1..=3).contains(&t) {
                return Err(Failure::Usage(format!(
                    "--target must be 1, 2 or 3, got {t}"
                )));
            }
            let cap = cap.unwrap_or_else(|| default_cap(&map, t - 1));
            let q = ReductionQuery::new(map, t - 1, cap)?;
            (cap, find_elementary_reduction(&q)?)
        }
        None => {
            let cap =
                cap.unwrap_or_else(|| (0..3).map(|i| default_cap(&map, i)).max().unwrap_or(1));
            (cap, find_any_reduction(&map, cap)?)
        }
    };
    let out = match result {
        Some(r) => ReduceOut {
            found: true,
            target: Some(r.target + 1),
            others: Some([r.others.0 + 1, r.others.1 + 1]),
            cap,
            g: Some(print_polynomial(&r.g, &["u", "v"])),
            residual: Some(print_polynomial(&r.residual, &names)),
            residual_degree: Some(r.residual_degree),
            target_degree: Some(r.target_degree),
        },
        None => ReduceOut {
            found: false,
            target,
            others: None,
            cap,
            g: None,
            residual: None,
            residual_degree: None,
            target_degree: None,
        },
    };
    print_json(&out)
}

#[derive(Serialize)]
struct SemigroupOut {
    member: bool,
    s: Option<u64>,
    t: Option<u64>,
    frobenius: Option<u64>,
}

fn cmd_semigroup(a: u64, b: u64, l: u64) -> CmdResult {
    let pair = SemigroupPair::new(a, b)?;
    // Representation relative to the generators in the order given.
    let rep = membership(l, pair).map(|r| if a <= b { (r.s, r.t) } else { (r.t, r.s) });
    print_json(&SemigroupOut {
        member: rep.is_some(),
        s: rep.map(|r| r.0),
        t: rep.map(|r| r.1),
        frobenius: frobenius(pair).ok(),
    })
}

#[derive(Serialize)]
struct MdegOut {
    mdeg: Vec<Degree>,
}

fn cmd_mdeg(path: &Path, json: bool) -> CmdResult {
    let (_, map) = read_map(path)?;
    let mdeg = map.mdeg();
    if json {
        print_json(&MdegOut { mdeg: mdeg.0 })
    } else {
        println!("{mdeg}");
        Ok(())
    }
}

#[derive(Serialize)]
struct ComposeOut {
    variables: Vec<String>,
    components: Vec<String>,
    mdeg: Vec<Degree>,
    jacobian_det: String,
}

fn cmd_compose(path: &Path, json: bool) -> CmdResult {
    let text = read(path)?;
    let word =
        parse_word_file(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let names = word_variables(&text, word.arity());
    let map = compose_word(&word)?;
    if json {
        return print_json(&ComposeOut {
            components: map
                .components()
                .iter()
                .map(|p| print_polynomial(p, &names))
                .collect(),
            mdeg: map.mdeg().0,
            jacobian_det: print_polynomial(&map.jacobian_det()?, &names),
            variables: names,
        });
    }
    print!("{}", print_map_file(map.components(), &names));
    Ok(())
}

/// Variable names declared by a word file, or the defaults.
fn word_variables(text: &str, arity: usize) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.strip_prefix("vars:"))
        .map(|rest| rest.split(',').map(|s| s.trim().to_string()).collect())
        .unwrap_or_else(|| default_names(arity))
}

fn cmd_verify_example(map: Option<&Path>, json: bool) -> CmdResult {
    let report = match map {
        Some(path) => verify_example_map(&read_map(path)?.1),
        None => verify_example(),
    };
    if json {
        print_json(&report)?;
    } else {
        for c in &report.checks {
            if c.passed {
                println!("PASS {}: {}", c.name, c.computed);
            } else {
                println!(
                    "FAIL {}: expected {}, computed {}",
                    c.name, c.expected, c.computed
                );
            }
        }
    }
    if report.passed {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(Failure::Domain(format!(
            "failed checks: {}",
            names.join(", ")
        )))
    }
}
