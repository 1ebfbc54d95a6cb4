mod expr;
mod mutate;
mod session;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quadpic::motdecomp::decompose_real;
use quadpic::phi::{phi_affine, phi_det};
use quadpic::picgroup::Independence;
use quadpic::{ExtensionLattice, PicContext, PicElement, QuadraticForm};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use expr::Expr;
use mutate::{mutate, MutationKind};
use session::{Backend, CliResult};

#[derive(Parser)]
#[command(
    name = "quadpic",
    version,
    about = "Invertible motives of quadrics: fingerprints, determinants and certificates"
)]
struct Cli {
    /// Declared model file (JSON). Without it the real backend is used.
    #[arg(long, global = true)]
    model: Option<PathBuf>,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Depth of generic splitting towers on the real backend.
    #[arg(long, global = true, default_value_t = 3)]
    lattice_depth: usize,

    /// Seed for randomized drivers.
    #[arg(long, global = true, default_value_t = 20_240_917)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Twist of det(Q) over one extension, or of e^q with --affine.
    Phi {
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "base")]
        ext: String,
        /// Report the affine generator e^q instead of the quadric.
        #[arg(long)]
        affine: bool,
    },
    /// det(Q) along the default flag or an explicit one.
    Det {
        #[arg(long)]
        form: String,
        /// Flag forms from Q downward, separated by `;`.
        #[arg(long, value_delimiter = ';')]
        flag: Option<Vec<String>>,
        /// Print the fingerprint over every extension.
        #[arg(long)]
        fingerprint: bool,
    },
    /// The generator e^q.
    E {
        #[arg(long)]
        form: String,
        #[arg(long)]
        fingerprint: bool,
    },
    /// Check that e^q * e^{q'} is the constant twist (n)[2n+1].
    InverseCheck {
        #[arg(long)]
        form: String,
    },
    /// Certify {e^q} linearly independent modulo Tate twists.
    Independent {
        #[arg(long = "form", required = true)]
        forms: Vec<String>,
    },
    /// Motivic equivalence of two quadrics.
    Equiv {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Motivic decomposition of a quadric.
    Decompose {
        #[arg(long)]
        form: String,
    },
    /// Compare prod det(P_i) with prod det(Q_j) against T-equivalence.
    Relations {
        #[arg(long = "lhs", required = true)]
        lhs: Vec<String>,
        #[arg(long = "rhs", required = true)]
        rhs: Vec<String>,
    },
    /// Coordinates of an element in the basis e^{<<-1>>^r} (real backend).
    Basis {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 4)]
        maxr: u32,
    },
    /// Validate the model; optionally check that seeded mutants are rejected.
    Validate {
        #[arg(long, default_value_t = 0)]
        mutants: usize,
        /// Largest form dimension registered on the real backend.
        #[arg(long, default_value_t = 16)]
        max_dim: u32,
    },
}

/// Command result: text, JSON, and whether the verdict was positive.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable"));
            } else {
                println!("{}", r.text.trim_end());
            }
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({"error": e.to_string()})).expect("serializable"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<Report> {
    let backend = Backend::load(cli.model.as_deref(), cli.lattice_depth)?;
    match &cli.command {
        Command::Phi { form, ext, affine } => {
            let q = backend.form(form)?;
            let (lattice, ids) = backend.lattice(std::slice::from_ref(&q), 0, &[ext])?;
            let e = &ids[0];
            let t = if *affine { phi_affine(&q, e, &lattice)? } else { phi_det(&q.quadric(), e, &lattice)? };
            Ok(Report::ok(t.to_string(), json!({"form": q, "extension": e, "affine": affine, "twist": t})))
        }
        Command::Det { form, flag, fingerprint } => {
            let q = backend.form(form)?;
            let flag =
                flag.as_ref().map(|f| f.iter().map(|s| backend.form(s)).collect::<CliResult<Vec<_>>>()).transpose()?;
            let ctx = backend.context(std::slice::from_ref(&q), 0)?;
            let x = ctx.det(&q.quadric(), flag.as_deref())?;
            element_report(&ctx, &format!("det({q})"), &x, *fingerprint)
        }
        Command::E { form, fingerprint } => {
            let q = backend.form(form)?;
            let ctx = backend.context(std::slice::from_ref(&q), 0)?;
            let x = ctx.generator_e(&q)?;
            element_report(&ctx, &format!("e^{q}"), &x, *fingerprint)
        }
        Command::InverseCheck { form } => {
            let q = backend.form(form)?;
            let ctx = backend.context(std::slice::from_ref(&q), 0)?;
            let r = ctx.inverse_identity_check(&q)?;
            let text = match (&r.constant, &r.first_failure) {
                (Some(c), _) if r.passed => format!("pass, constant {c}"),
                (_, Some((e, t))) => format!("fail: expected constant {}, got {t} over {e}", r.expected),
                _ => format!("fail: expected constant {}", r.expected),
            };
            Ok(Report { text, json: json!(r), ok: r.passed })
        }
        Command::Independent { forms } => {
            let qs = forms.iter().map(|s| backend.form(s)).collect::<CliResult<Vec<_>>>()?;
            let ctx = backend.context(&qs, 0)?;
            let verdict = ctx.independent(&qs)?;
            let mut text = String::new();
            let ok = match &verdict {
                Independence::Certified(c) => {
                    writeln!(text, "certified independent; elimination order:").unwrap();
                    for s in &c.steps {
                        writeln!(
                            text,
                            "  {} (reduced {}, prime {}): witness {}, twist {}",
                            s.form, s.reduced, s.prime, s.witness, s.twist
                        )
                        .unwrap();
                    }
                    true
                }
                Independence::Refused { refusals } => {
                    writeln!(text, "refused:").unwrap();
                    for r in refusals {
                        writeln!(text, "  {r}").unwrap();
                    }
                    false
                }
            };
            Ok(Report { text, json: json!(verdict), ok })
        }
        Command::Equiv { p, q } => {
            let (p, q) = (backend.form(p)?, backend.form(q)?);
            let ctx = backend.context(&[p.clone(), q.clone()], 0)?;
            let eq = ctx.motivically_equivalent(&p.quadric(), &q.quadric())?;
            let text = format!(
                "{} and {} are {}motivically equivalent",
                p.quadric(),
                q.quadric(),
                if eq { "" } else { "not " }
            );
            Ok(Report { text, json: json!({"p": p, "q": q, "equivalent": eq}), ok: eq })
        }
        Command::Decompose { form } => {
            let q = backend.form(form)?;
            let d = match &backend {
                Backend::Real { .. } => decompose_real(&q)?,
                Backend::Declared(_) => backend.context(&[], 0)?.registry().decomposition(&q)?,
            };
            let mut text = String::new();
            let tates: Vec<String> = d.tates.iter().map(|t| t.to_string()).collect();
            writeln!(text, "M({}) has rank {}", q.quadric(), d.rank()).unwrap();
            writeln!(text, "tates: {}", if tates.is_empty() { "none".into() } else { tates.join(" ") }).unwrap();
            for s in &d.summands {
                writeln!(text, "summand {} {} shifted by ({})[{}]", s.kind, s.class, s.shift, 2 * s.shift).unwrap();
            }
            Ok(Report::ok(text, json!(d)))
        }
        Command::Relations { lhs, rhs } => {
            let ps = lhs.iter().map(|s| backend.form(s)).collect::<CliResult<Vec<_>>>()?;
            let qs = rhs.iter().map(|s| backend.form(s)).collect::<CliResult<Vec<_>>>()?;
            let all: Vec<QuadraticForm> = ps.iter().chain(&qs).cloned().collect();
            let ctx = backend.context(&all, 0)?;
            let quadrics = |v: &[QuadraticForm]| v.iter().map(|q| q.quadric()).collect::<Vec<_>>();
            let v = ctx.relations_check(&quadrics(&ps), &quadrics(&qs))?;
            let text = format!(
                "fingerprints equal mod Tate: {}; T-equivalent: {}",
                v.fingerprint_equal_mod_tate, v.t_equivalent
            );
            Ok(Report { text, json: json!(v), ok: v.t_equivalent })
        }
        Command::Basis { expr, maxr } => {
            let e = expr::parse(expr)?;
            let forms = e.forms().into_iter().map(|s| backend.form(s)).collect::<CliResult<Vec<_>>>()?;
            let ctx = backend.context(&forms, *maxr)?;
            let x = eval(&ctx, &backend, &e)?;
            let b = ctx.basis_real(&x, *maxr)?;
            let mut text = format!("{x}\ntate {}\n", b.tate);
            if b.coords.is_empty() {
                text.push_str("all coordinates zero\n");
            }
            for (r, c) in &b.coords {
                writeln!(text, "r={r}: {c}").unwrap();
            }
            Ok(Report::ok(text, json!(b)))
        }
        Command::Validate { mutants, max_dim } => validate(&backend, cli, *mutants, *max_dim),
    }
}

fn eval(ctx: &PicContext, backend: &Backend, e: &Expr) -> CliResult<PicElement> {
    Ok(match e {
        Expr::One => ctx.identity(),
        Expr::E(f) => ctx.generator_e(&backend.form(f)?)?,
        Expr::Det(f) => ctx.det(&backend.form(f)?.quadric(), None)?,
        Expr::Tate(x, y) => ctx.tate(quadpic::TateTwist::new(*x, *y)),
        Expr::Mul(a, b) => eval(ctx, backend, a)?.mul(&eval(ctx, backend, b)?)?,
        Expr::Div(a, b) => eval(ctx, backend, a)?.div(&eval(ctx, backend, b)?)?,
        Expr::Pow(a, k) => eval(ctx, backend, a)?.pow(*k),
    })
}

fn element_report(ctx: &PicContext, name: &str, x: &PicElement, fingerprint: bool) -> CliResult<Report> {
    let nf = ctx.normal_form(x)?;
    let fp = ctx.fingerprint(x)?;
    let mut text = format!("{name} = {x}\nclosure {}\n", nf.closure);
    match &nf.classes {
        Some(c) if c.is_empty() => text.push_str("classes: none\n"),
        Some(c) => {
            let parts: Vec<String> = c.iter().map(|(k, v)| format!("{k} {v:+}")).collect();
            writeln!(text, "classes: {}", parts.join(", ")).unwrap();
        }
        None => text.push_str("classes: unavailable (equality is relative to the model)\n"),
    }
    if fingerprint {
        for entry in fp.entries() {
            writeln!(text, "  {} {}", entry.extension, entry.twist).unwrap();
        }
    }
    let json = json!({"element": x.to_repr(), "display": x.to_string(), "normal_form": nf, "fingerprint": fp});
    Ok(Report::ok(text, json))
}

fn validate(backend: &Backend, cli: &Cli, mutants: usize, max_dim: u32) -> CliResult<Report> {
    let lattice = match backend {
        Backend::Declared(l) => l.as_ref().clone(),
        Backend::Real { depth } => {
            let forms = (1..=max_dim)
                .flat_map(|d| (0..=d).map(move |p| QuadraticForm::real(p, d - p)))
                .collect::<quadpic::Result<Vec<_>>>()?;
            ExtensionLattice::real_generic_splitting(&forms, *depth)?
        }
    };
    let report = lattice.validate();
    let mut text = String::new();
    if report.is_valid() {
        writeln!(text, "valid: {} forms over {} extensions", lattice.forms().len(), lattice.len()).unwrap();
    } else {
        writeln!(text, "invalid: {} violations", report.violations.len()).unwrap();
        for v in &report.violations {
            writeln!(text, "  {v}").unwrap();
        }
    }
    let mut ok = report.is_valid();
    let mut json = json!({"valid": report.is_valid(), "violations": report.violations});
    if mutants > 0 {
        let doc = match lattice.document() {
            Some(d) => d.clone(),
            None => lattice.to_declared_document(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let (mut caught, mut tried, mut accepted) = (0usize, 0usize, Vec::new());
        for i in 0..mutants {
            let kind = MutationKind::ALL[i % MutationKind::ALL.len()];
            let Some(m) = mutate(&doc, kind, &mut rng) else { continue };
            tried += 1;
            match ExtensionLattice::from_document(m) {
                Ok(l) if l.validate().is_valid() => accepted.push(json!({"mutant": i, "kind": kind.name()})),
                _ => caught += 1,
            }
        }
        writeln!(text, "mutants: {caught}/{tried} caught (seed {})", cli.seed).unwrap();
        ok &= accepted.is_empty();
        json["mutants"] = json!({"seed": cli.seed, "tried": tried, "caught": caught, "accepted": accepted});
    }
    Ok(Report { text, json, ok })
}
