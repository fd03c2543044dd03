//! The `markoff` command-line front end.
//!
//! Exit codes: 0 success, 1 false verification or failed check, 2 usage or
//! parse error, 3 budget exceeded.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{
    count_c_a, count_c_beta, count_finite_field, cumulative_signatures, CountError, CountQuery,
};
use crate::euclid::{euclid_tree, layers, EuclidError, TreeId, DEFAULT_LAYER_BUDGET};
use crate::field::PrimeModulus;
use crate::markoff::{
    apply_sigma, classify_fundamental, descend, descend_to_terminal, generate_tree, is_fundamental,
    is_solution, make_fundamental, make_root, sort_triple, Family, FundamentalForm, MarkoffContext,
    MarkoffError, MarkoffTriple, Sign, Terminal, DEFAULT_TREE_DEPTH_BUDGET,
};
use crate::oracle::{
    census_of, enumerate_solutions, EnumerationConvention, OracleError, DEFAULT_ENUMERATION_BUDGET,
};
use crate::poly::{parse_poly, ParseError, Polynomial};
use crate::Branch;

pub const BUDGET_ENV: &str = "MARKOFF_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "markoff",
    version,
    about = "Markoff triples x^2+y^2+z^2 = Axyz over F_p[t]"
)]
pub struct Cli {
    /// Odd prime p
    #[arg(long, global = true, default_value_t = 13)]
    pub p: u64,
    /// The parameter A, e.g. `1`, `t`, `t^2+1`
    #[arg(long = "A", global = true, default_value = "1")]
    pub a: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Candidate cap for brute-force enumeration (MARKOFF_BUDGET wins if set)
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a triple solves the equation
    Verify {
        /// `(x; y; z)`
        #[arg(long)]
        triple: String,
    },
    /// Markoff tree below a solution
    Tree {
        #[arg(long)]
        root: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Descend a solution to its fundamental triple
    Descend {
        #[arg(long)]
        triple: String,
    },
    /// Layers of the (alpha, beta)-Euclid tree
    Euclid {
        #[arg(long, default_value_t = 1)]
        alpha: u64,
        #[arg(long, default_value_t = 0)]
        beta: u64,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Closed-form counts
    Count {
        #[command(subcommand)]
        what: CountCommand,
    },
    /// Stream every solution of bounded height as JSON lines
    Enumerate {
        #[arg(long, default_value_t = 1)]
        max_height: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::DegreeSorted)]
        convention: ConventionArg,
    },
    /// Build a fundamental triple or the least tree root over it
    Make(MakeArgs),
    /// Random descent and replay round trips
    Check {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CountCommand {
    /// C_A(n) for one height, or the cumulative count up to H
    Signatures {
        #[arg(long, default_value_t = 0)]
        beta: u64,
        #[arg(long, conflicts_with = "h", required_unless_present = "h")]
        n: Option<u64>,
        #[arg(long = "H")]
        h: Option<u64>,
    },
    /// Number of solutions of height n over F_q[t]
    Solutions {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        /// Add the brute-force census
        #[arg(long)]
        brute: bool,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Ordered,
    DegreeSorted,
}

impl From<ConventionArg> for EnumerationConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Ordered => EnumerationConvention::Ordered,
            ConventionArg::DegreeSorted => EnumerationConvention::DegreeSorted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Zero,
    Constant,
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Non-constant polynomial f
    #[arg(long)]
    f: String,
    /// The unit a in the constant family
    #[arg(long = "a", id = "unit", default_value = "1", value_parser = parse_sign, allow_hyphen_values = true)]
    unit: Sign,
    #[arg(long, default_value = "1", value_parser = parse_sign, allow_hyphen_values = true)]
    sign: Sign,
    /// Emit the least non-fundamental triple instead of the fundamental one
    #[arg(long)]
    root: bool,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s.trim() {
        "1" | "+1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        other => Err(format!("expected +1 or -1, got {other:?}")),
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Budget(String),
}

impl From<MarkoffError> for Failure {
    fn from(e: MarkoffError) -> Self {
        match e {
            MarkoffError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            OracleError::Markoff(m) => m.into(),
            OracleError::Count(c) => c.into(),
        }
    }
}

impl From<EuclidError> for Failure {
    fn from(e: EuclidError) -> Self {
        match e {
            EuclidError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

/// Parses and runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let env_budget = std::env::var(BUDGET_ENV).ok();
    match execute(&cli, env_budget.as_deref(), out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Budget(msg)) => {
            let _ = writeln!(err, "budget exceeded: {msg}");
            3
        }
    }
}

fn execute(cli: &Cli, env_budget: Option<&str>, out: &mut dyn Write) -> Result<i32, Failure> {
    let budget = match env_budget {
        Some(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::Usage(format!("{BUDGET_ENV} must be a non-negative integer")))?,
        None => cli.budget.unwrap_or(DEFAULT_ENUMERATION_BUDGET),
    };
    match &cli.command {
        Command::Verify { triple } => verify(cli, triple, out),
        Command::Tree { root, depth } => tree(cli, root, *depth, out),
        Command::Descend { triple } => descend_cmd(cli, triple, out),
        Command::Euclid { alpha, beta, depth } => euclid_cmd(cli, *alpha, *beta, *depth, out),
        Command::Count { what } => count_cmd(cli, what, budget, out),
        Command::Enumerate {
            max_height,
            convention,
        } => enumerate_cmd(cli, *max_height, (*convention).into(), budget, out),
        Command::Make(args) => make_cmd(cli, args, out),
        Command::Check { samples, depth } => check_cmd(cli, *samples, *depth, out),
    }
}

fn context(p: u64, a: &str) -> Result<MarkoffContext, Failure> {
    let m = PrimeModulus::new(p).map_err(|e| Failure::Usage(e.to_string()))?;
    let a = parse_poly(a, m).map_err(|e| Failure::Usage(format!("--A: {e}")))?;
    Ok(MarkoffContext::new(a)?)
}

fn poly_arg(name: &str, text: &str, m: PrimeModulus) -> Result<Polynomial, Failure> {
    parse_poly(text, m).map_err(|e| Failure::Usage(format!("{name}: {e}")))
}

/// Parses `(x; y; z)`; error positions refer to the whole string.
pub fn parse_triple(text: &str, m: PrimeModulus) -> Result<MarkoffTriple, ParseError> {
    use crate::poly::ParseErrorKind;
    let syntax = |msg: &str, pos: usize| ParseError {
        kind: ParseErrorKind::Syntax(msg.to_string()),
        position: pos,
    };
    let open = text
        .find(|c: char| !c.is_whitespace())
        .filter(|&i| text[i..].starts_with('('))
        .ok_or_else(|| syntax("expected '('", 0))?;
    let close = text
        .rfind(|c: char| !c.is_whitespace())
        .filter(|&i| text[i..].starts_with(')') && i > open)
        .ok_or_else(|| syntax("expected ')'", text.len()))?;
    let inner = &text[open + 1..close];
    let mut coords = Vec::with_capacity(3);
    let mut start = open + 1;
    for part in inner.split(';') {
        if coords.len() == 3 {
            return Err(syntax(
                "expected exactly three ';'-separated entries",
                start - 1,
            ));
        }
        coords.push(parse_poly(part, m).map_err(|e| e.offset(start))?);
        start += part.len() + 1;
    }
    if coords.len() != 3 {
        return Err(syntax(
            "expected exactly three ';'-separated entries",
            close,
        ));
    }
    let z = coords.pop().expect("three");
    let y = coords.pop().expect("three");
    let x = coords.pop().expect("three");
    Ok(MarkoffTriple::new(x, y, z))
}

fn triple_arg(name: &str, text: &str, m: PrimeModulus) -> Result<MarkoffTriple, Failure> {
    parse_triple(text, m).map_err(|e| {
        Failure::Usage(format!(
            "{name}: {e}\n  {text}\n  {}^",
            " ".repeat(e.position)
        ))
    })
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    writeln!(out, "{text}")?;
    Ok(())
}

fn no_dot(cmd: &str) -> Failure {
    Failure::Usage(format!("{cmd} has no dot output; use json or text"))
}

fn verify(cli: &Cli, triple: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = context(cli.p, &cli.a)?;
    let p = triple_arg("--triple", triple, ctx.modulus())?;
    let ok = is_solution(&ctx, &p)?;
    let report = if ok {
        let fundamental = sort_triple(&p)
            .map(|(s, _)| is_fundamental(&s))
            .unwrap_or(false);
        json!({
            "solution": true,
            "signature": p.signature(),
            "height": p.height(),
            "fundamental": fundamental,
        })
    } else {
        json!({ "solution": false })
    };
    match cli.format {
        Format::Json => emit_json(out, &report)?,
        Format::Text => {
            if ok {
                writeln!(
                    out,
                    "solution: true\nsignature: {}\nheight: {}\nfundamental: {}",
                    p.signature(),
                    p.height(),
                    report["fundamental"]
                )?;
            } else {
                writeln!(out, "solution: false")?;
            }
        }
        Format::Dot => return Err(no_dot("verify")),
    }
    Ok(if ok { 0 } else { 1 })
}

fn tree(cli: &Cli, root: &str, depth: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = context(cli.p, &cli.a)?;
    let p = triple_arg("--root", root, ctx.modulus())?;
    let t = generate_tree(&ctx, &p, depth, DEFAULT_TREE_DEPTH_BUDGET)?;
    match cli.format {
        Format::Json => emit_json(out, &t)?,
        Format::Text => write!(out, "{}", t.to_text())?,
        Format::Dot => write!(out, "{}", t.to_dot())?,
    }
    Ok(0)
}

fn descend_cmd(cli: &Cli, triple: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = context(cli.p, &cli.a)?;
    let p = triple_arg("--triple", triple, ctx.modulus())?;
    let (terminal, word, steps) = descend_to_terminal(&ctx, &p)?;
    let (kind, end, form) = match terminal {
        Terminal::Fundamental(f) => {
            let form = classify_fundamental(&ctx, &f)?;
            ("fundamental", f, Some(form))
        }
        Terminal::Constant(c) => ("constant", c, None),
    };
    match cli.format {
        Format::Json => emit_json(
            out,
            &json!({
                "input": p,
                "terminal": kind,
                "fundamental": end,
                "form": form,
                "word": word,
                "steps": steps,
            }),
        )?,
        Format::Text => {
            writeln!(out, "{kind}: {}", end.render_auto())?;
            if let Some(form) = &form {
                writeln!(out, "form: {}", render_form(form))?;
            }
            writeln!(out, "word: {word}\nsteps: {steps}")?;
        }
        Format::Dot => return Err(no_dot("descend")),
    }
    Ok(0)
}

fn render_form(form: &FundamentalForm) -> String {
    form.to_string()
}

fn euclid_cmd(
    cli: &Cli,
    alpha: u64,
    beta: u64,
    depth: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let id = TreeId::new(alpha, beta)?;
    match cli.format {
        Format::Json => {
            let ls = layers(id, depth, DEFAULT_LAYER_BUDGET)?;
            emit_json(out, &json!({ "alpha": alpha, "beta": beta, "layers": ls }))?;
        }
        Format::Text => {
            for (j, layer) in layers(id, depth, DEFAULT_LAYER_BUDGET)?.iter().enumerate() {
                let items: Vec<String> = layer.iter().map(ToString::to_string).collect();
                writeln!(out, "L{j}: {}", items.join(" "))?;
            }
        }
        Format::Dot => write!(
            out,
            "{}",
            euclid_tree(id, depth, DEFAULT_LAYER_BUDGET)?.to_dot()
        )?,
    }
    Ok(0)
}

fn count_cmd(
    cli: &Cli,
    what: &CountCommand,
    budget: u64,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if cli.format == Format::Dot {
        return Err(no_dot("count"));
    }
    let value: Value = match what {
        CountCommand::Signatures { beta, n, h } => match (n, h) {
            (_, Some(h)) => serde_json::to_value(cumulative_signatures(*beta, *h)?).expect("json"),
            (Some(n), None) => {
                let c_a = count_c_a(CountQuery { beta: *beta, n: *n })?;
                json!({
                    "beta": beta,
                    "n": n,
                    "C_A": c_a,
                    "C_beta": count_c_beta(*beta, *n)?,
                })
            }
            (None, None) => return Err(Failure::Usage("one of --n or --H is required".into())),
        },
        CountCommand::Solutions {
            q,
            n,
            brute,
            convention,
        } => {
            let ctx = context(*q, &cli.a)?;
            let formula = if ctx.is_constant_a() {
                if !brute {
                    return Err(Failure::Usage(
                        "no closed form for constant A; \
                         rerun with --brute for the census"
                            .into(),
                    ));
                }
                None
            } else {
                Some(count_finite_field(*q, ctx.beta() as u64, *n)?)
            };
            let mut v = json!({ "q": q, "A": ctx.a().render_auto(), "n": n, "formula": formula });
            if *brute {
                let n = usize::try_from(*n).map_err(|_| Failure::Usage("n too large".into()))?;
                let conventions: Vec<EnumerationConvention> = match convention {
                    Some(c) => vec![(*c).into()],
                    None => EnumerationConvention::BOTH.to_vec(),
                };
                let solutions =
                    enumerate_solutions(&ctx, n, EnumerationConvention::Ordered, budget)?;
                let reports = conventions
                    .into_iter()
                    .map(|c| census_of(&ctx, n, c, &solutions))
                    .collect::<Result<Vec<_>, _>>()?;
                v["brute"] = serde_json::to_value(reports).expect("json");
            }
            v
        }
    };
    match cli.format {
        Format::Text => writeln!(out, "{}", serde_json::to_string(&value).expect("json"))?,
        _ => emit_json(out, &value)?,
    }
    Ok(0)
}

fn enumerate_cmd(
    cli: &Cli,
    max_height: usize,
    convention: EnumerationConvention,
    budget: u64,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let ctx = context(cli.p, &cli.a)?;
    let all = enumerate_solutions(&ctx, max_height, convention, budget)?;
    for p in &all {
        match cli.format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(p).expect("json"))?,
            Format::Text => writeln!(out, "{}", p.render_auto())?,
            Format::Dot => return Err(no_dot("enumerate")),
        }
    }
    Ok(0)
}

fn make_cmd(cli: &Cli, args: &MakeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = context(cli.p, &cli.a)?;
    let f = poly_arg("--f", &args.f, ctx.modulus())?;
    let (family, form) = match args.family {
        FamilyArg::Zero => (
            Family::Zero,
            FundamentalForm::Zero {
                f: f.clone(),
                sign: args.sign,
            },
        ),
        FamilyArg::Constant => (
            Family::Constant,
            FundamentalForm::Constant {
                f: f.clone(),
                a: args.unit,
                sign: args.sign,
            },
        ),
    };
    let p = if args.root {
        make_root(&ctx, &f, args.unit, args.sign, family)?
    } else {
        make_fundamental(&ctx, &form)?
    };
    let ok = is_solution(&ctx, &p)?;
    match cli.format {
        Format::Json => emit_json(out, &json!({ "triple": p, "solution": ok }))?,
        Format::Text => writeln!(out, "{}", p.render_auto())?,
        Format::Dot => return Err(no_dot("make")),
    }
    Ok(if ok { 0 } else { 1 })
}

/// Random fundamental form valid for `ctx`.
pub fn random_form(ctx: &MarkoffContext, rng: &mut impl Rng, max_degree: usize) -> FundamentalForm {
    let m = ctx.modulus();
    let deg = rng.gen_range(1..=max_degree);
    let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..m.get())).collect();
    coeffs.push(rng.gen_range(1..m.get()));
    let f = Polynomial::from_coeffs(m, coeffs);
    let sign = if rng.gen() { Sign::Plus } else { Sign::Minus };
    if ctx.is_constant_a() && rng.gen() {
        let a = if rng.gen() { Sign::Plus } else { Sign::Minus };
        FundamentalForm::Constant { f, a, sign }
    } else {
        FundamentalForm::Zero { f, sign }
    }
}

/// A random node at depth `1..=depth` of the tree over a random fundamental triple.
pub fn random_node(
    ctx: &MarkoffContext,
    rng: &mut impl Rng,
    depth: usize,
) -> Result<(FundamentalForm, MarkoffTriple), MarkoffError> {
    let form = random_form(ctx, rng, 3);
    let mut p = make_fundamental(ctx, &form)?;
    let steps = rng.gen_range(1..=depth.max(1));
    for _ in 0..steps {
        let b = if rng.gen() { Branch::One } else { Branch::Two };
        p = sort_triple(&apply_sigma(ctx, &p, b))?.0;
    }
    Ok((form, p))
}

fn check_cmd(cli: &Cli, samples: usize, depth: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = context(cli.p, &cli.a)?;
    if depth > DEFAULT_TREE_DEPTH_BUDGET {
        return Err(MarkoffError::BudgetExceeded {
            depth,
            budget: DEFAULT_TREE_DEPTH_BUDGET,
        }
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut failures = Vec::new();
    for k in 0..samples {
        let (_, p) = random_node(&ctx, &mut rng, depth)?;
        let ok = descend(&ctx, &p).and_then(|d| {
            classify_fundamental(&ctx, &d.fundamental)?;
            Ok(d.word.replay(&ctx, &d.fundamental) == p && d.steps <= depth)
        });
        if !matches!(ok, Ok(true)) {
            failures.push(json!({ "sample": k, "triple": p.render_auto() }));
        }
    }
    let failed = failures.len();
    match cli.format {
        Format::Json => emit_json(
            out,
            &json!({ "seed": cli.seed, "samples": samples, "failures": failures }),
        )?,
        Format::Text => writeln!(
            out,
            "seed {}: {samples} samples, {failed} failures",
            cli.seed
        )?,
        Format::Dot => return Err(no_dot("check")),
    }
    Ok(if failed == 0 { 0 } else { 1 })
}
