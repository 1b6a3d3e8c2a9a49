//! `weilbund`: command-line front end.
//!
//! Exit codes: 0 success, 1 a computed failure (invalid algebra, d² ≠ 0,
//! failed assert claim, degenerate form), 2 a configuration error. Errors
//! print one line `error: <kind>: <message>` on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use weilbund::checker::{self, ClaimId};
use weilbund::cohomology::{
    betti, capped_betti, scalar_extension_compare, BettiReport, ComparisonReport, ComplexSpec, Scalars,
    SignMode,
};
use weilbund::config::{self, Instance};
use weilbund::poisson::VectorField;
use weilbund::prolong::{
    expand_components, format_components, p_lift, prolong_function, prolong_poisson,
    prolong_vector_field, ProlongedCoordinates,
};
use weilbund::rational::{format_rational, parse_rational};
use weilbund::weil_algebra::LinearForm;
use weilbund::{Error, QPoly};

#[derive(Parser)]
#[command(name = "weilbund", version, about = "Weil algebras, prolonged Poisson structures and truncated Poisson cohomology")]
struct Cli {
    /// Worker threads for block and claim parallelism (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate or describe a Weil algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// Prolong functions, vector fields and Poisson structures.
    Prolong {
        #[command(subcommand)]
        action: ProlongAction,
    },
    /// Truncated Poisson cohomology tables.
    Cohomology(CohomologyArgs),
    /// Run checker claims.
    Verify(VerifyArgs),
    /// Print a claim's statement, anchor and procedure.
    Explain { claim: String },
}

#[derive(Subcommand)]
enum AlgebraAction {
    /// Check the Weil-algebra axioms and list any defects.
    Validate {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Dimension, height, ideal filtration and the Frobenius form of p.
    Info {
        #[arg(short, long)]
        config: PathBuf,
        /// Linear form, comma separated, overriding the config's p_form.
        #[arg(long)]
        p_form: Option<String>,
    },
}

#[derive(Subcommand)]
enum ProlongAction {
    /// f^A and its components.
    Fn {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// θ^A for θ given by comma-separated components.
    Vf {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// The prolonged structure {,}_A.
    Poisson {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// The real p-lift on n·dim A variables.
    Plift {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        p_form: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalarChoice {
    #[value(name = "R")]
    R,
    #[value(name = "A")]
    A,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeChoice {
    Standard,
    PaperTau,
}

#[derive(Args)]
struct CohomologyArgs {
    #[arg(short, long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value = "R")]
    scalars: ScalarChoice,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also compare A-scalar and real cohomology cell by cell.
    #[arg(long)]
    compare: bool,
    #[arg(long)]
    p_max: Option<usize>,
    #[arg(long)]
    weight_max: Option<u32>,
    #[arg(long, value_enum)]
    sign_mode: Option<ModeChoice>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance configs; the bundled set when omitted.
    #[arg(short, long)]
    config: Vec<PathBuf>,
    /// Comma-separated claim ids, or `all`.
    #[arg(long, default_value = "all")]
    claims: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Suite JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code and error kind.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Validation(_) => (1, "validation"),
            Error::InvalidPoisson(_) => (1, "invalid_poisson"),
            Error::DegenerateForm(_) => (1, "degenerate_form"),
            Error::NotAHomomorphism(..) => (1, "not_a_homomorphism"),
            Error::Parse(_) => (2, "parse"),
            Error::UnknownClaim(_) => (2, "unknown_claim"),
            Error::MissingIngredient(_) => (2, "missing_ingredient"),
            Error::InhomogeneousStructure { .. } => (2, "inhomogeneous"),
            Error::CapBelowDegree { .. } => (2, "cap"),
            Error::Io(_) => (2, "io"),
            _ => (2, "config"),
        };
        let message = match e {
            Error::MissingIngredient(what) => what,
            Error::UnknownClaim(id) => format!("{id} is not a registered claim"),
            Error::Config(msg) => msg,
            e => e.to_string(),
        };
        Failure { code, kind, message }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let first = e.to_string();
                let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
                eprintln!("error: usage: {first}");
                return ExitCode::from(2);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    if cli.jobs > 0 {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let result = match cli.command {
        Command::Algebra { action } => cmd_algebra(action),
        Command::Prolong { action } => cmd_prolong(action),
        Command::Cohomology(args) => cmd_cohomology(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Explain { claim } => checker::explain(&claim).map(|t| {
            print!("{t}");
            0
        }).map_err(Failure::from),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let msg = f.message.replace('\n', " ");
            eprintln!("error: {}: {}", f.kind, msg);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    config::read_to_string(path).map_err(|e| Failure {
        code: 2,
        kind: "io",
        message: e.to_string().trim_start_matches("config: ").to_string(),
    })
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let cfg = config::parse_instance(&read(path)?)?;
    let mut inst = Instance::from_config(&cfg)?;
    if cfg.name.is_none() {
        if let Some(stem) = path.file_stem() {
            inst.name = stem.to_string_lossy().into_owned();
        }
    }
    Ok(inst)
}

fn parse_form(text: &str, dim: usize) -> Result<LinearForm, Failure> {
    let coeffs = text
        .split(',')
        .map(|t| parse_rational(t.trim()).map_err(Error::from))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.len() != dim {
        return Err(Error::Config(format!("p_form: expected {dim} entries, found {}", coeffs.len())).into());
    }
    Ok(LinearForm::new(coeffs))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: 2,
        kind: "io",
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn cmd_algebra(action: AlgebraAction) -> CmdResult {
    match action {
        AlgebraAction::Validate { config: path } => {
            let (cfg, _) = config::parse_algebra_or_instance(&read(&path)?)?;
            match cfg.build() {
                Ok(a) => {
                    println!("valid: {} dim={} height={}", a.name(), a.dim(), a.height());
                    Ok(0)
                }
                Err(Error::Validation(report)) => {
                    println!("invalid: {} defect(s)", report.defects.len());
                    for d in &report.defects {
                        println!("  {d}");
                    }
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        AlgebraAction::Info { config: path, p_form } => {
            let (cfg, cfg_form) = config::parse_algebra_or_instance(&read(&path)?)?;
            let a = cfg.build()?;
            println!("dim={} height={}", a.dim(), a.height());
            println!("basis: {}", a.labels().join(", "));
            for (j, level) in a.ideal_filtration().iter().enumerate() {
                let elems: Vec<String> = level.iter().map(|e| a.format(e)).collect();
                println!("m^{}: dim {} [{}]", j + 1, level.len(), elems.join(", "));
            }
            let form = match (p_form, cfg_form) {
                (Some(t), _) => Some(parse_form(&t, a.dim())?),
                (None, Some(items)) => Some(parse_form(&items.join(","), a.dim())?),
                (None, None) => None,
            };
            if let Some(p) = form {
                let fr = a.frobenius_form(&p)?;
                let coeffs: Vec<String> = p.coeffs.iter().map(format_rational).collect();
                if let Some(dual) = fr.dual_basis {
                    let d: Vec<String> = dual.iter().map(|e| a.format(e)).collect();
                    println!("frobenius p=[{}]: nondegenerate, dual basis [{}]", coeffs.join(", "), d.join(", "));
                } else {
                    let k: Vec<String> = fr.kernel.unwrap_or_default().iter().map(format_rational).collect();
                    println!("frobenius p=[{}]: degenerate, kernel [{}]", coeffs.join(", "), k.join(", "));
                }
            }
            Ok(0)
        }
    }
}

fn cmd_prolong(action: ProlongAction) -> CmdResult {
    match action {
        ProlongAction::Fn { config: path, expr } => {
            let inst = load(&path)?;
            let n = inst.pi.n();
            let f = QPoly::parse(&expr, n)?;
            let fa = prolong_function(&f, &inst.algebra);
            let layout = ProlongedCoordinates::new(n, &inst.algebra);
            println!("f = {f}");
            println!("f^A = {}", fa.format_with(&|i| format!("X{}", i + 1)));
            println!("components {}", format_components(&expand_components(&fa), &layout));
            Ok(0)
        }
        ProlongAction::Vf { config: path, expr } => {
            let inst = load(&path)?;
            let n = inst.pi.n();
            let comps = expr
                .split(',')
                .map(|t| QPoly::parse(t.trim(), n))
                .collect::<Result<Vec<_>, _>>()?;
            if comps.len() != n {
                return Err(Error::Config(format!("--expr: expected {n} components, found {}", comps.len())).into());
            }
            let theta = VectorField::new(comps);
            let der = prolong_vector_field(&theta, &inst.algebra);
            let layout = ProlongedCoordinates::new(n, &inst.algebra);
            for (i, img) in der.images.iter().enumerate() {
                println!("theta^A(X{}) = {}", i + 1, img.format_with(&|k| format!("X{}", k + 1)));
            }
            println!("real form:");
            let real = der.real_form();
            for (k, c) in real.components.iter().enumerate() {
                if !c.is_zero() {
                    println!("  d/d{}: {}", layout.name(k), c.format_with(&|j| layout.name(j)));
                }
            }
            Ok(0)
        }
        ProlongAction::Poisson { config: path } => {
            let inst = load(&path)?;
            let pa = prolong_poisson(&inst.pi, &inst.algebra)?;
            let layout = ProlongedCoordinates::new(inst.pi.n(), &inst.algebra);
            for ((i, j), p) in pa.entries() {
                println!(
                    "{{X{}, X{}}}_A = {}  components {}",
                    i + 1,
                    j + 1,
                    p.format_with(&|k| format!("X{}", k + 1)),
                    format_components(&expand_components(p), &layout)
                );
            }
            Ok(0)
        }
        ProlongAction::Plift { config: path, p_form } => {
            let inst = load(&path)?;
            let form = match p_form {
                Some(t) => parse_form(&t, inst.algebra.dim())?,
                None => inst
                    .p_form
                    .clone()
                    .ok_or_else(|| Error::MissingIngredient("p_form (config key or --p-form)".into()))?,
            };
            inst.pi.require_jacobi()?;
            let lift = p_lift(&inst.pi, &inst.algebra, &form)?;
            let layout = ProlongedCoordinates::new(inst.pi.n(), &inst.algebra);
            let coeffs: Vec<String> = form.coeffs.iter().map(format_rational).collect();
            println!("p-lift with p=[{}] on {} variables", coeffs.join(", "), layout.num_vars());
            for ((i, j), p) in lift.entries() {
                println!("{{{}, {}}} = {}", layout.name(*i), layout.name(*j), p.format_with(&|k| layout.name(k)));
            }
            let report = lift.validate_jacobi();
            println!("jacobi: {}", if report.is_valid() { "valid" } else { "INVALID" });
            Ok(if report.is_valid() { 0 } else { 1 })
        }
    }
}

fn cmd_cohomology(args: CohomologyArgs) -> CmdResult {
    let inst = load(&args.config)?;
    let p_max = args.p_max.unwrap_or_else(|| inst.p_max());
    let w_max = args.weight_max.unwrap_or(inst.truncation.weight_max);
    let mode = match args.sign_mode {
        Some(ModeChoice::Standard) => SignMode::Standard,
        Some(ModeChoice::PaperTau) => SignMode::PaperTau,
        None => inst.sign_mode,
    };
    let homogeneous = !matches!(inst.pi.homogeneity(), weilbund::Homogeneity::Inhomogeneous { .. });
    if !homogeneous {
        let Some(cap) = inst.truncation.cap else {
            return Err(Error::InhomogeneousStructure {
                min: inst.pi.homogeneity().min_degree() as usize,
                max: inst.pi.homogeneity().max_degree() as usize,
            }
            .into());
        };
        let report = capped_betti(&inst.name, &inst.pi, cap, 0..=p_max, mode)?;
        print!("{}", report.to_table());
        if let Some(out) = &args.out {
            write_file(out, &(serde_json::to_string_pretty(&report).expect("serializes") + "\n"))?;
        }
        return Ok(0);
    }
    let scalars = match args.scalars {
        ScalarChoice::R => Scalars::Real,
        ScalarChoice::A => Scalars::Algebra(inst.algebra.clone()),
    };
    let spec = ComplexSpec::new(inst.name.clone(), inst.pi.clone(), scalars, 0..=p_max, 0..=w_max, mode)?;
    let report = betti(&spec)?;
    print!("{}", report.to_table());
    let mut code = if report.d_squared_zero { 0 } else { 1 };
    let mut comparison = None;
    if args.compare {
        let cmp = scalar_extension_compare(&inst.name, &inst.pi, &inst.algebra, 0..=p_max, 0..=w_max, mode)?;
        println!("compare with {}: {}", cmp.algebra, cmp.summary());
        if !cmp.all_hold() {
            code = 1;
        }
        comparison = Some(cmp);
    }
    if let Some(out) = &args.out {
        let json = CohomologyOutput {
            report: &report,
            comparison: comparison.as_ref(),
        };
        write_file(out, &(serde_json::to_string_pretty(&json).expect("serializes") + "\n"))?;
    }
    Ok(code)
}

#[derive(Serialize)]
struct CohomologyOutput<'a> {
    #[serde(flatten)]
    report: &'a BettiReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<&'a ComparisonReport>,
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let all = args.claims.trim().eq_ignore_ascii_case("all");
    let ids = ClaimId::parse_list(&args.claims)?;
    let instances = if args.config.is_empty() {
        config::bundled_all()
    } else {
        args.config.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?
    };
    let suite = checker::run_suite(&ids, &instances, args.seed, args.samples, !all)?;
    print!("{}", suite.to_table());
    if let Some(out) = &args.out {
        write_file(out, &(suite.to_json() + "\n"))?;
    }
    Ok(if suite.all_asserts_pass() { 0 } else { 1 })
}
