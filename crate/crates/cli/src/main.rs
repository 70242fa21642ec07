use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tamehopf::catalog::{self, TameFamily};
use tamehopf::combinatorics;
use tamehopf::witnesses;
use tamehopf::{Character, Conductor, Cyc, FinAbGroup, ScalarExpr, WeightSeq};

#[derive(Parser)]
#[command(
    name = "tamehopf",
    version,
    about = "Hopf algebras on covering quivers: Hopf ideal criteria, enumeration and witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// H-polynomial identities and the root-of-unity vanishing criterion.
    Combinatorics {
        #[arg(long, default_value_t = 12)]
        m_max: usize,
        /// Corrupt one expected value (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// The covering quiver Γ_G(W).
    Quiver(Setup),
    /// Closed-form verdict next to the brute-force Hopf ideal test.
    HopfCheck {
        #[command(flatten)]
        setup: Setup,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// All tame Hopf instances over a group, up to relabelling.
    Enumerate {
        #[arg(long, default_value = "Z2")]
        group: String,
        /// Run every k-th criterion-negative point through the oracle (0: none).
        #[arg(long, default_value_t = 7)]
        neg_stride: usize,
    },
    /// Block decomposition of a lifted quotient.
    Blocks {
        #[command(flatten)]
        setup: Setup,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Explicit isomorphisms onto presented Hopf algebras.
    Witness {
        #[arg(value_enum)]
        which: WitnessKind,
    },
    /// Hopf axioms of kΓ_G(W) up to a path degree.
    Axioms(Setup),
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    Book,
    Taft,
}

#[derive(Args, Clone)]
struct Setup {
    #[arg(long, default_value = "Z2")]
    group: String,
    /// Two weights as exponent tuples; defaults to (g₁, g₁) or (g₁, g₂).
    #[arg(long)]
    weights: Option<String>,
    /// q1,p1,q2,p2 with χ_i(w_1)⁻¹ = q_i and χ_i(w_2)⁻¹ = p_i; `q,p` when
    /// w_1 = w_2. Omitted: every character pair.
    #[arg(long, allow_hyphen_values = true)]
    chars: Option<String>,
    #[arg(long)]
    degree_bound: Option<usize>,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long, value_parser = ["I1", "I2", "I3", "I4", "case5"])]
    family: String,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

struct Context {
    group: FinAbGroup,
    weights: WeightSeq,
    conductor: Conductor,
    char_pairs: Vec<(Character, Character)>,
    degree_bound: Option<usize>,
}

fn parse_scalar(s: &str) -> Result<ScalarExpr, UsageError> {
    s.parse::<ScalarExpr>()
        .map_err(|e| UsageError(format!("{s}: {e}")))
}

fn resolve(setup: &Setup, extra: &[&ScalarExpr]) -> Result<Context, UsageError> {
    let group: FinAbGroup = setup.group.parse()?;
    let weights = match &setup.weights {
        Some(w) => group.parse_elts(w)?,
        None if group.rank() == 1 => vec![group.generator(0); 2],
        None if group.rank() == 2 => vec![group.generator(0), group.generator(1)],
        None => {
            return Err(UsageError(
                "--weights is required for groups of rank > 2".into(),
            ))
        }
    };
    if weights.len() != 2 {
        return Err(UsageError(format!(
            "expected two weights, got {}",
            weights.len()
        )));
    }
    let weights = WeightSeq::new(weights);
    let exprs: Vec<ScalarExpr> = match &setup.chars {
        Some(c) => c.split(',').map(parse_scalar).collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let needed = exprs
        .iter()
        .chain(extra.iter().copied())
        .map(ScalarExpr::min_conductor)
        .chain([2, group.exponent()]);
    let conductor = Conductor::lcm_of(needed);
    let char_pairs = if setup.chars.is_some() {
        let vals: Vec<Cyc> = exprs
            .iter()
            .map(|s| s.to_cyc(conductor))
            .collect::<Result<_, _>>()?;
        let w = weights.weights();
        let (q1, p1, q2, p2) = match vals.as_slice() {
            [q1, p1, q2, p2] => (q1.clone(), p1.clone(), q2.clone(), p2.clone()),
            [q, p] if w[0] == w[1] => (q.clone(), q.clone(), p.clone(), p.clone()),
            _ => {
                return Err(UsageError(
                    "--chars takes q1,p1,q2,p2 (or q,p when w1 = w2)".into(),
                ))
            }
        };
        let find = |q: &Cyc, p: &Cyc| -> Result<Character, UsageError> {
            let (qi, pi) = (q.inv()?, p.inv()?);
            group
                .characters(conductor)?
                .into_iter()
                .map(|(_, c)| c)
                .find(|c| c.eval(&w[0], conductor) == qi && c.eval(&w[1], conductor) == pi)
                .ok_or_else(|| {
                    UsageError(format!(
                        "no character of {} has χ(w1)⁻¹ = {q}, χ(w2)⁻¹ = {p}",
                        group
                    ))
                })
        };
        vec![(find(&q1, &p1)?, find(&q2, &p2)?)]
    } else {
        catalog::all_char_pairs(&group, conductor)
    };
    Ok(Context {
        group,
        weights,
        conductor,
        char_pairs,
        degree_bound: setup.degree_bound,
    })
}

fn family_scalar(f: &FamilyArgs) -> Result<Option<ScalarExpr>, UsageError> {
    f.a.as_deref().map(parse_scalar).transpose()
}

fn build_family(
    f: &FamilyArgs,
    a: Option<&ScalarExpr>,
    l: Conductor,
) -> Result<TameFamily, UsageError> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| UsageError(format!("--{name} is required for {}", f.family)))
    };
    let a = || -> Result<Cyc, UsageError> {
        a.ok_or_else(|| UsageError(format!("--a is required for {}", f.family)))?
            .to_cyc(l)
            .map_err(UsageError::from)
    };
    let fam = match f.family.as_str() {
        "I1" => TameFamily::I1 { a: a()? },
        "I2" => TameFamily::I2 {
            m: need(f.m, "m")?,
            a: a()?,
        },
        "I3" => TameFamily::I3 { n: need(f.n, "n")? },
        "I4" => TameFamily::I4 { m: need(f.m, "m")? },
        _ => TameFamily::Case5,
    };
    fam.validate()?;
    Ok(fam)
}

struct Output {
    lines: Vec<String>,
    passed: bool,
}

impl Output {
    fn new() -> Self {
        Output {
            lines: Vec::new(),
            passed: true,
        }
    }

    fn json(&mut self, v: serde_json::Value) {
        self.lines
            .push(serde_json::to_string(&v).expect("serialisable"));
    }

    fn line(&mut self, s: String) {
        self.lines.push(s);
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "hopf"
    } else {
        "not hopf"
    }
}

fn cmd_combinatorics(
    m_max: usize,
    inject_fault: bool,
    format: Format,
    out: &mut Output,
) -> Result<(), UsageError> {
    if m_max < 2 {
        return Err(UsageError(format!(
            "--m-max must be at least 2, got {m_max}"
        )));
    }
    for m in 2..=m_max {
        let ident = combinatorics::h_identity_check(m)?;
        let gf = combinatorics::generating_function_check(m);
        let l = Conductor::lcm_of([m as u32]);
        let step = (l.get() / m as u32) as i64;
        let mut mismatches = Vec::new();
        for k in 0..m {
            let t = Cyc::root_of_unity(l, step * k as i64);
            let vanishes = combinatorics::vanishing_criterion(m, &t)?;
            let mut primitive = num_integer::gcd(k, m) == 1;
            if inject_fault && m == 2 && k == 1 {
                primitive = !primitive;
            }
            if vanishes != primitive {
                mismatches
                    .push(json!({"m": m, "k": k, "vanishes": vanishes, "expected": primitive}));
            }
        }
        let ok = ident && gf && mismatches.is_empty();
        out.passed &= ok;
        match format {
            Format::Table => out.line(format!(
                "m={m:<3} identity {} generating {} vanishing {}",
                mark(ident),
                mark(gf),
                mark(mismatches.is_empty())
            )),
            _ => out.json(json!({
                "m": m,
                "h_identity": ident,
                "generating_function": gf,
                "vanishing_iff_primitive": mismatches.is_empty(),
                "counterexamples": mismatches,
            })),
        }
    }
    if format == Format::Table {
        out.line(format!("{:>3} {:>3} {:>3}  value", "m", "l", "k"));
        for row in combinatorics::table(m_max) {
            out.line(format!(
                "{:>3} {:>3} {:>3}  {}",
                row.m, row.l, row.k, row.value
            ));
        }
    }
    Ok(())
}

fn cmd_quiver(setup: &Setup, format: Format, out: &mut Output) -> Result<(), UsageError> {
    let ctx = resolve(
        &Setup {
            chars: None,
            ..setup.clone()
        },
        &[],
    )?;
    let q = tamehopf::CoveringQuiver::new(ctx.group, ctx.weights)?;
    match format {
        Format::Dot => out.line(q.to_dot().trim_end().to_string()),
        _ => out.json(q.to_json()),
    }
    Ok(())
}

fn cmd_hopf_check(
    setup: &Setup,
    fam: &FamilyArgs,
    format: Format,
    out: &mut Output,
) -> Result<(), UsageError> {
    let a = family_scalar(fam)?;
    let ctx = resolve(setup, &a.iter().collect::<Vec<_>>())?;
    let family = build_family(fam, a.as_ref(), ctx.conductor)?;
    if family == TameFamily::Case5 {
        let r = catalog::case5_refutation();
        out.passed = r.excluded;
        out.json(json!({"family": "Case5", "verdict": "not hopf", "report": r}));
        return Ok(());
    }
    for (c1, c2) in &ctx.char_pairs {
        let h = catalog::hopf_structure(
            &ctx.group,
            &ctx.weights,
            vec![c1.clone(), c2.clone()],
            ctx.conductor,
        )?;
        let ideal = catalog::build_lifted_ideal(h.algebra(), &family)?;
        let crit = catalog::criterion(&h, &family)?;
        let bound = ctx
            .degree_bound
            .unwrap_or_else(|| ideal.default_degree_bound());
        let adm = ideal.is_admissible(bound);
        let report = h.hopf_ideal_checks(&ideal, true);
        let oracle = adm.admissible && report.passed;
        let agree = crit.hopf == oracle;
        out.passed &= agree;
        let chars: Vec<Vec<String>> = [c1, c2]
            .iter()
            .map(|c| c.values().iter().map(|v| v.to_string()).collect())
            .collect();
        match format {
            Format::Table => out.line(format!(
                "{} W={} chars={:?} criterion: {:<8} oracle: {:<8} {}",
                family,
                ctx.weights,
                chars,
                verdict(crit.hopf),
                verdict(oracle),
                if agree { "agree" } else { "DISAGREE" }
            )),
            _ => out.json(json!({
                "group": ctx.group.to_string(),
                "weights": ctx.weights.to_string(),
                "chars": chars,
                "family": family.to_string(),
                "criterion": verdict(crit.hopf),
                "criterion_ref": crit.reference,
                "oracle": verdict(oracle),
                "admissible": adm.admissible,
                "first_failure": report.first_failure(),
                "agree": agree,
            })),
        }
    }
    Ok(())
}

fn cmd_enumerate(
    group: &str,
    neg_stride: usize,
    format: Format,
    out: &mut Output,
) -> Result<(), UsageError> {
    let group: FinAbGroup = group.parse()?;
    let l = Conductor::lcm_of([2, group.exponent()]);
    let report = catalog::enumerate_tame(&group, l, neg_stride)?;
    for inst in &report.instances {
        out.passed &= inst.verdict == inst.oracle;
        match format {
            Format::Table => out.line(format!(
                "{} W={} {} m={:?} a={} dim={} oracle={}",
                inst.group,
                inst.weights,
                inst.family,
                inst.m,
                inst.a.as_deref().unwrap_or("-"),
                inst.dim,
                verdict(inst.oracle)
            )),
            _ => out.line(inst.to_json_line()),
        }
    }
    out.passed &= report.negative_disagreements.is_empty();
    out.json(json!({
        "summary": true,
        "instances": report.instances.len(),
        "negatives_checked": report.negatives_checked,
        "negative_disagreements": report.negative_disagreements,
    }));
    Ok(())
}

fn cmd_blocks(setup: &Setup, fam: &FamilyArgs, out: &mut Output) -> Result<(), UsageError> {
    let a = family_scalar(fam)?;
    let ctx = resolve(
        &Setup {
            chars: None,
            ..setup.clone()
        },
        &a.iter().collect::<Vec<_>>(),
    )?;
    let family = build_family(fam, a.as_ref(), ctx.conductor)?;
    let q = tamehopf::CoveringQuiver::new(ctx.group.clone(), ctx.weights.clone())?;
    let alg = tamehopf::PathAlgebra::new(std::sync::Arc::new(q), ctx.conductor);
    let ideal = catalog::build_lifted_ideal(&alg, &family)?;
    let r = catalog::blocks(&ideal)?;
    out.passed = r.equal_blocks && r.dimension_law;
    out.json(json!({
        "group": ctx.group.to_string(),
        "weights": ctx.weights.to_string(),
        "family": family.to_string(),
        "report": r,
    }));
    Ok(())
}

fn cmd_witness(which: WitnessKind, format: Format, out: &mut Output) -> Result<(), UsageError> {
    let phi = match which {
        WitnessKind::Book => witnesses::phi_book()?,
        WitnessKind::Taft => witnesses::phi_taft()?,
    };
    let r = witnesses::verify_hopf_iso(&phi);
    out.passed = r.passed;
    match format {
        Format::Table => {
            out.line(format!(
                "{}: {} -> {}",
                phi.name, phi.domain.name, phi.codomain.name
            ));
            for c in &r.checks {
                out.line(format!("  {:<22} {}", c.check, mark(c.passed)));
            }
        }
        _ => out.json(json!({"report": r, "morphism": phi.to_json()})),
    }
    Ok(())
}

fn cmd_axioms(setup: &Setup, format: Format, out: &mut Output) -> Result<(), UsageError> {
    let ctx = resolve(setup, &[])?;
    let bound = ctx.degree_bound.unwrap_or(4);
    for (c1, c2) in &ctx.char_pairs {
        let chars = vec![c1.clone(), c2.clone()];
        let h = match catalog::hopf_structure(&ctx.group, &ctx.weights, chars, ctx.conductor) {
            Ok(h) => h,
            Err(e) => {
                out.passed = false;
                out.json(json!({"error": e.to_string()}));
                continue;
            }
        };
        let r = h.verify_hopf_axioms(bound);
        out.passed &= r.passed;
        let vals: Vec<Vec<String>> = [c1, c2]
            .iter()
            .map(|c| c.values().iter().map(|v| v.to_string()).collect())
            .collect();
        match format {
            Format::Table => out.line(format!("chars={vals:?} degree<={bound} {}", mark(r.passed))),
            _ => out.json(json!({"chars": vals, "degree_bound": bound, "report": r})),
        }
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut Output) -> Result<(), UsageError> {
    if cli.format == Format::Dot && !matches!(cli.command, Command::Quiver(_)) {
        return Err(UsageError("--format dot only applies to `quiver`".into()));
    }
    match &cli.command {
        Command::Combinatorics {
            m_max,
            inject_fault,
        } => cmd_combinatorics(*m_max, *inject_fault, cli.format, out),
        Command::Quiver(s) => cmd_quiver(s, cli.format, out),
        Command::HopfCheck { setup, family } => cmd_hopf_check(setup, family, cli.format, out),
        Command::Enumerate { group, neg_stride } => {
            cmd_enumerate(group, *neg_stride, cli.format, out)
        }
        Command::Blocks { setup, family } => cmd_blocks(setup, family, out),
        Command::Witness { which } => cmd_witness(*which, cli.format, out),
        Command::Axioms(s) => cmd_axioms(s, cli.format, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output::new();
    if let Err(UsageError(msg)) = run(&cli, &mut out) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let sink: Box<dyn Write> = match &cli.out {
        Some(p) => match File::create(p) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::stdout()),
    };
    let mut w = BufWriter::new(sink);
    for l in &out.lines {
        if writeln!(w, "{l}").is_err() {
            return ExitCode::from(2);
        }
    }
    if w.flush().is_err() {
        return ExitCode::from(2);
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
