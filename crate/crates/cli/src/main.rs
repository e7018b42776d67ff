//! Command-line front end. Subcommands cover the library surface: reference
//! height constants, profile-curve CSV export, surface meshing, runtime
//! verification suites, and pointwise curvature evaluation.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Identical
//! invocations produce byte-identical stdout. Exit codes: 0 on success, 1
//! when a verification or computation fails, 2 on usage errors.

// `!(x <= tol)` deliberately treats a NaN estimate as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use birkhoff::{
    build_constant_h_curve, build_constant_k_curve, build_minimal_catenoid, build_nodoid,
    build_unduloid, constant_h_d1, constant_k_d1, constant_k_d2, curvatures_general,
    curvatures_graph, minimal_d1, nodoid_d3, run_suite, tessellate, tessellate_periodic,
    unduloid_d2, write_mesh_attributes_csv, write_obj, write_profile_csv,
    write_profile_csv_periodic, Error, GluedCurve, NormSpace, PeriodicCurve, ProfilePoint,
    QuadratureResult, Sign, Suite,
};

#[derive(Parser)]
#[command(
    name = "birkhoff",
    version,
    about = "Minkowski curvatures and rotational profile curves in the (x1^2+x2^2)^m + x3^(2m) normed spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the reference height constants of a case, with error estimates
    Constants(ConstantsArgs),
    /// Build a profile curve and write it as CSV (u,alpha,dalpha,ddalpha,K,H)
    Profile(ProfileArgs),
    /// Tessellate a surface of revolution into an OBJ plus an attribute CSV
    Mesh(MeshArgs),
    /// Run the runtime verification suites and print a pass/fail table
    Verify(VerifyArgs),
    /// Evaluate the curvatures K and H at a single profile jet
    Curvature(CurvatureArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstCase {
    /// Waist-to-infinity height d1 of the minimal profile (uses --c2)
    Minimal,
    /// Fold-to-axis half height d1, K = +1 with 0 < c1 < 1 (uses --c1)
    Spindle,
    /// Axis-to-rim height d2, K = -1 with 0 < c1 < 1 (uses --c1)
    Conic,
    /// Fold-to-fold half period d2, H = -1 with 0 < c3 < 1/4 (uses --c3)
    Unduloid,
    /// Leg heights d1 and d3 of one loop, H = 1 (uses --c1)
    Nodoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveCase {
    /// Catenoid-type minimal profile (uses --c2 waist, --c3 anchor)
    Minimal,
    /// Constant Gaussian curvature K = +/-1 (uses --sign, --c1)
    ConstantK,
    /// Constant mean curvature H = +/-1 (uses --sign, --c3 or --c1)
    ConstantH,
    /// Periodic wave-type H = -1 curve (uses --c3, --c5 anchor)
    Unduloid,
    /// Periodic loop-type H = +1 curve (uses --c1, --c2plus anchor)
    Nodoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Obj,
    Text,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Exponent of the gauge (m >= 2)
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Which case's constants to compute
    #[arg(long, value_enum, default_value_t = ConstCase::Nodoid)]
    case: ConstCase,
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c3: Option<f64>,
    /// Largest acceptable quadrature error estimate
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output format: json (one flat object per line) or csv
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct CurveSelection {
    /// Exponent of the gauge (m >= 2)
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Curve case to build
    #[arg(long, value_enum, conflicts_with_all = ["k", "h"])]
    case: Option<CurveCase>,
    /// Shorthand case selector: the constant Gaussian curvature (+1 or -1)
    #[arg(long = "K", allow_negative_numbers = true)]
    k: Option<f64>,
    /// Shorthand case selector: the constant mean curvature (+1, -1, or 0)
    #[arg(long = "H", allow_negative_numbers = true, conflicts_with = "k")]
    h: Option<f64>,
    /// Sign of the constant curvature for constant-k / constant-h cases
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c5: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2plus: Option<f64>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    select: CurveSelection,
    /// Number of sample rows in the CSV
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    /// Output format (csv is the only profile format)
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
struct MeshArgs {
    #[command(flatten)]
    select: CurveSelection,
    /// Number of rings along the profile direction
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Output OBJ path; vertex attributes go to the same path with a .csv extension
    #[arg(long)]
    out: PathBuf,
    /// Output format (obj is the only mesh format)
    #[arg(long, value_enum, default_value_t = OutputFormat::Obj)]
    format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exponent of the gauge (m >= 2)
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Suite to run: space, curvature, quadrature, profiles, oracle, mesh, or all
    #[arg(long, default_value = "all")]
    suite: String,
}

#[derive(Args)]
struct CurvatureArgs {
    /// Exponent of the gauge (m >= 2; 1 enables the Euclidean check mode)
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Radius alpha > 0
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// First derivative of the radius
    #[arg(long, allow_negative_numbers = true)]
    dalpha: f64,
    /// Second derivative of the radius
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    ddalpha: f64,
    /// First derivative of the height (general parametrization; omit for graph form)
    #[arg(long, allow_negative_numbers = true)]
    dbeta: Option<f64>,
    /// Second derivative of the height (general parametrization)
    #[arg(long, allow_negative_numbers = true)]
    ddbeta: Option<f64>,
    /// Output format: text (K = ..., H = ...) or json
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

enum Built {
    Glued(GluedCurve),
    Periodic(PeriodicCurve),
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain { reason: msg.into() }
}

fn resolve_curve(sel: &CurveSelection) -> Result<Built, Error> {
    let space = NormSpace::new(sel.m)?;
    // translate the shorthand selectors into a case + sign
    let (case, sign) = if let Some(k) = sel.k {
        let s = if k == 1.0 {
            SignArg::Plus
        } else if k == -1.0 {
            SignArg::Minus
        } else {
            return Err(usage(format!("--K must be +1 or -1, got {k}")));
        };
        (CurveCase::ConstantK, Some(s))
    } else if let Some(h) = sel.h {
        if h == 0.0 {
            (CurveCase::Minimal, None)
        } else if h == 1.0 {
            (CurveCase::ConstantH, Some(SignArg::Plus))
        } else if h == -1.0 {
            (CurveCase::ConstantH, Some(SignArg::Minus))
        } else {
            return Err(usage(format!("--H must be +1, -1, or 0, got {h}")));
        }
    } else if let Some(case) = sel.case {
        (case, sel.sign)
    } else {
        return Err(usage("select a curve with --case, --K, or --H"));
    };

    match case {
        CurveCase::Minimal => {
            let c2 = sel.c2.ok_or_else(|| usage("the minimal case needs --c2 (waist radius)"))?;
            let c3 = sel.c3.unwrap_or(0.0);
            Ok(Built::Glued(build_minimal_catenoid(&space, c2, c3)?))
        }
        CurveCase::ConstantK => {
            let sign = sign.ok_or_else(|| usage("the constant-k case needs --sign (or --K)"))?;
            let c1 = sel.c1.unwrap_or(0.0);
            Ok(Built::Glued(build_constant_k_curve(&space, sign.into(), c1, 0.0)?))
        }
        CurveCase::ConstantH => {
            let sign = sign.ok_or_else(|| usage("the constant-h case needs --sign (or --H)"))?;
            let c = match (sel.c3, sel.c1) {
                (Some(_), Some(_)) => {
                    return Err(usage("give the constant-h case either --c3 or --c1, not both"))
                }
                (Some(c3), None) => c3,
                // the loop-type pieces have first integral constant -c1 < 0
                (None, Some(c1)) => -c1,
                (None, None) => 0.0,
            };
            Ok(Built::Glued(build_constant_h_curve(&space, sign.into(), c, 0.0)?))
        }
        CurveCase::Unduloid => {
            let c3 = sel.c3.ok_or_else(|| usage("the unduloid needs --c3 in (0, 1/4)"))?;
            Ok(Built::Periodic(build_unduloid(&space, c3, sel.c5.unwrap_or(0.0))?))
        }
        CurveCase::Nodoid => {
            let c1 = sel.c1.ok_or_else(|| usage("the nodoid needs --c1 > 0"))?;
            Ok(Built::Periodic(build_nodoid(&space, c1, sel.c2plus.unwrap_or(0.0))?))
        }
    }
}

fn constant_line(name: &str, r: &QuadratureResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => format!(
            "{{\"name\":\"{name}\",\"value\":{},\"error_estimate\":{},\"evaluations\":{}}}",
            r.value, r.error_estimate, r.evaluations
        ),
        _ => format!("{name},{},{},{}", r.value, r.error_estimate, r.evaluations),
    }
}

fn run_constants(args: &ConstantsArgs) -> Result<ExitCode, Error> {
    let space = NormSpace::new(args.m)?;
    let need = |v: Option<f64>, what: &str| {
        v.ok_or_else(|| usage(format!("this case needs {what}")))
    };
    let results: Vec<(&str, QuadratureResult)> = match args.case {
        ConstCase::Minimal => {
            vec![("d1", minimal_d1(&space, need(args.c2, "--c2 (waist radius)")?)?)]
        }
        ConstCase::Spindle => {
            vec![("d1", constant_k_d1(&space, need(args.c1, "--c1 in (0, 1)")?)?)]
        }
        ConstCase::Conic => {
            vec![("d2", constant_k_d2(&space, need(args.c1, "--c1 in (0, 1)")?)?)]
        }
        ConstCase::Unduloid => {
            vec![("d2", unduloid_d2(&space, need(args.c3, "--c3 in (0, 1/4)")?)?)]
        }
        ConstCase::Nodoid => {
            let c1 = args.c1.unwrap_or(2.0);
            vec![("d1", constant_h_d1(&space, c1)?), ("d3", nodoid_d3(&space, c1)?)]
        }
    };
    if !matches!(args.format, OutputFormat::Json | OutputFormat::Csv) {
        return Err(usage("constants supports --format json or csv"));
    }
    if matches!(args.format, OutputFormat::Csv) {
        println!("name,value,error_estimate,evaluations");
    }
    let mut ok = true;
    for (name, r) in &results {
        println!("{}", constant_line(name, r, args.format));
        if !(r.error_estimate <= args.tol) {
            eprintln!(
                "{name}: error estimate {:e} exceeds the requested tolerance {:e}",
                r.error_estimate, args.tol
            );
            ok = false;
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_profile(args: &ProfileArgs) -> Result<ExitCode, Error> {
    if !matches!(args.format, OutputFormat::Csv) {
        return Err(usage("profile output is CSV; use --format csv"));
    }
    match resolve_curve(&args.select)? {
        Built::Glued(c) => write_profile_csv(&c, &args.out, args.samples)?,
        Built::Periodic(c) => write_profile_csv_periodic(&c, &args.out, args.samples)?,
    }
    eprintln!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn run_mesh(args: &MeshArgs) -> Result<ExitCode, Error> {
    if !matches!(args.format, OutputFormat::Obj) {
        return Err(usage("mesh output is OBJ (plus an attribute CSV); use --format obj"));
    }
    let rings_around = 64;
    let mesh = match resolve_curve(&args.select)? {
        Built::Glued(c) => tessellate(&c, args.samples, rings_around)?,
        Built::Periodic(c) => tessellate_periodic(&c, 1, args.samples, rings_around)?,
    };
    write_obj(&mesh, &args.out)?;
    let sidecar = args.out.with_extension("csv");
    write_mesh_attributes_csv(&mesh, &sidecar)?;
    eprintln!("wrote {} and {}", args.out.display(), sidecar.display());
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse()?]
    };
    let mut all_passed = true;
    for suite in suites {
        for r in run_suite(args.m, suite)? {
            let status = if r.passed { "PASS" } else { "FAIL" };
            println!("{status} {suite}/{}: {}", r.name, r.detail);
            all_passed &= r.passed;
        }
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_curvature(args: &CurvatureArgs) -> Result<ExitCode, Error> {
    let space =
        if args.m == 1 { NormSpace::oracle(1)? } else { NormSpace::new(args.m)? };
    let mut pair = match (args.dbeta, args.ddbeta) {
        (None, None) => curvatures_graph(&space, args.alpha, args.dalpha, args.ddalpha)?,
        (db, ddb) => curvatures_general(
            &space,
            ProfilePoint::new(
                args.alpha,
                args.dalpha,
                args.ddalpha,
                db.unwrap_or(1.0),
                ddb.unwrap_or(0.0),
            ),
        )?,
    };
    // A computed -0.0 would print with a stray sign.
    if pair.k == 0.0 {
        pair.k = 0.0;
    }
    if pair.h == 0.0 {
        pair.h = 0.0;
    }
    match args.format {
        OutputFormat::Json => {
            println!("{{\"name\":\"K\",\"value\":{}}}", pair.k);
            println!("{{\"name\":\"H\",\"value\":{}}}", pair.h);
        }
        OutputFormat::Text => {
            println!("K = {}", pair.k);
            println!("H = {}", pair.h);
        }
        _ => return Err(usage("curvature supports --format text or json")),
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io { .. }
        | Error::QuadratureBudget { .. }
        | Error::DidNotConverge { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Constants(a) => run_constants(a),
        Command::Profile(a) => run_profile(a),
        Command::Mesh(a) => run_mesh(a),
        Command::Verify(a) => run_verify(a),
        Command::Curvature(a) => run_curvature(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
