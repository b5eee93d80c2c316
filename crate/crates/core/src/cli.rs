//! The `zmc` command line.
//!
//! Exit status: 0 when every requested check passes, 1 on a failed check or a
//! library error, 2 on a usage error. Reports are JSON files written through a
//! temporary file and a rename.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Like `println!`, but a closed stdout (e.g. `zmc ... | head`) is not fatal.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map};

use crate::catalog::{
    builtin_surface, complex_probes, identity_terms, verify_at_points, verify_identity,
    BranchPolicy, IdentityParams, IDENTITY_TOL,
};
use crate::expr::{parse_complex, parse_real, AnalyticExpr, C64};
use crate::foliation::{foliation_check, leaf_surface};
use crate::meshio::{
    sample_graph_by_inversion, sample_patch, write_csv, write_obj, GridSpec, PatchSource,
    SurfacePatch,
};
use crate::report::{ErrorAccumulator, VerificationReport};
use crate::reps::{
    associated_family_point, bc_point, invert_parametrization, split_weierstrass,
    split_weierstrass_exprs, tlms_point, we_point, BCData, TLMSData, TlmsVariant, WEData, WEMode,
};
use crate::zmc::{parametric_sweep, residual_sweep, GraphEquation, JetMethod, SignatureMetric};

type CliResult<T> = Result<T, String>;

fn real(s: &str) -> CliResult<f64> {
    parse_real(s).map_err(|e| e.to_string())
}

fn complex(s: &str) -> CliResult<C64> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn grid(s: &str) -> CliResult<GridSpec> {
    s.parse()
        .map_err(|e: crate::meshio::MeshError| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "zmc",
    version,
    about = "Zero-mean-curvature surfaces: construction and verification"
)]
struct Cli {
    /// TOML file of default flag values; flags given on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Cmd {
    /// Evaluate or mesh a catalog surface
    Surface {
        #[command(subcommand)]
        cmd: SurfaceCmd,
    },
    /// Verify a decomposition identity
    Identity {
        #[command(subcommand)]
        cmd: IdentityCmd,
    },
    /// Graph ZMC residual sweeps, or `residual parametric`
    Residual(ResidualCmd),
    /// Weierstrass–Enneper representation
    We {
        #[command(subcommand)]
        cmd: WeCmd,
    },
    /// Timelike minimal surfaces
    Tlms {
        #[command(subcommand)]
        cmd: TlmsCmd,
    },
    /// Barbishov–Charnikov Born–Infeld solitons
    Bc {
        #[command(subcommand)]
        cmd: BcCmd,
    },
    /// Shifted-helicoid foliation leaves and checks
    Foliate(FoliateArgs),
}

#[derive(Args, Debug, Default)]
struct ReportOpts {
    /// Write the JSON report to this file
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Tolerance override
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Add a timestamp field to reports
    #[arg(long)]
    timestamp: bool,
}

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    /// Print Z(x, y)
    Eval {
        #[arg(long)]
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Treat x and y as complex numbers
        #[arg(long)]
        complex: bool,
    },
    /// Sample the surface on a grid and write OBJ or CSV (by extension)
    Mesh {
        #[arg(long)]
        name: String,
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum IdentityCmd {
    Verify {
        #[arg(long)]
        identity: String,
        #[arg(long)]
        n: usize,
        /// key=value pairs: beta=<r>, surface=<id>, a|b|c|d=<v1;v2;...>
        #[arg(long, num_args = 1..)]
        params: Vec<String>,
        /// Real grid `umin:umax:nu,vmin:vmax:nv[,margin]`
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        /// Number of random complex probes (instead of, or besides, a grid)
        #[arg(long)]
        probes: Option<usize>,
        #[arg(long, value_parser = real, default_value = "0.5")]
        max_im: f64,
        #[arg(long, value_parser = real, default_value = "0.05")]
        margin: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_parser = |s: &str| s.parse::<BranchPolicy>())]
        policy: Option<BranchPolicy>,
        #[command(flatten)]
        out: ReportOpts,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct ResidualCmd {
    #[command(subcommand)]
    sub: Option<ResidualSub>,
    #[arg(long, value_parser = |s: &str| s.parse::<GraphEquation>())]
    equation: Option<GraphEquation>,
    #[arg(long)]
    surface: Option<String>,
    #[arg(long, value_parser = grid, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    /// Finite-difference step for `--method fd`
    #[arg(long, value_parser = real, default_value = "1e-4")]
    h: f64,
    #[command(flatten)]
    out: ReportOpts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Fd,
}

#[derive(Subcommand, Debug)]
enum ResidualSub {
    /// Parametric ZMC check of a representation or graph lift
    Parametric(ParametricArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RepKind {
    We,
    Tlms,
    Bc,
    Surface,
}

#[derive(Args, Debug)]
struct ParametricArgs {
    #[arg(long, value_parser = |s: &str| s.parse::<SignatureMetric>())]
    metric: SignatureMetric,
    #[arg(long, value_enum)]
    rep: RepKind,
    #[command(flatten)]
    we: WeArgs,
    /// Associated-family angle for `--rep we`
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[command(flatten)]
    tlms: TlmsExprs,
    #[command(flatten)]
    bc: BcExprs,
    /// Surface id for `--rep surface` (graph lift)
    #[arg(long)]
    surface: Option<String>,
    #[arg(long, value_parser = grid, allow_hyphen_values = true)]
    grid: GridSpec,
    #[arg(long, value_parser = real, default_value = "1e-4")]
    h: f64,
    #[command(flatten)]
    out: ReportOpts,
}

#[derive(Args, Debug, Clone)]
struct WeArgs {
    /// f (or R in reduced-R mode), a function of --var
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    f: String,
    #[arg(long, default_value = "w", allow_hyphen_values = true)]
    g: String,
    #[arg(long, default_value = "minimal", value_parser = |s: &str| s.parse::<WEMode>())]
    mode: WEMode,
    #[arg(long, default_value = "w")]
    var: String,
    #[arg(long, value_parser = complex, default_value = "0", allow_hyphen_values = true)]
    zeta0: C64,
    /// Base offset `x0,y0,z0`
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    x0: String,
}

impl WeArgs {
    fn data(&self) -> CliResult<WEData> {
        let f = AnalyticExpr::parse(&self.f, &self.var).map_err(|e| format!("--f: {e}"))?;
        let g = AnalyticExpr::parse(&self.g, &self.var).map_err(|e| format!("--g: {e}"))?;
        let parts = real_list(&self.x0)?;
        let x0: [f64; 3] = parts
            .try_into()
            .map_err(|_| "--x0 needs three comma-separated values".to_string())?;
        Ok(WEData::new(f, g, self.mode).with_base(self.zeta0, x0))
    }
}

fn real_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(|p| real(p.trim())).collect()
}

#[derive(Subcommand, Debug)]
enum WeCmd {
    /// Print (x, y, z) at ζ
    Eval {
        #[command(flatten)]
        we: WeArgs,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        zeta: C64,
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Mesh over a ζ grid, or over an (x, y) grid with --graph
    Mesh {
        #[command(flatten)]
        we: WeArgs,
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// Sample z(x, y) by Newton inversion with continuation
        #[arg(long)]
        graph: bool,
        /// Initial ζ guess for --graph
        #[arg(long, value_parser = complex, default_value = "0", allow_hyphen_values = true)]
        seed_zeta: C64,
    },
    /// Find ζ with (x(ζ), y(ζ)) = (x, y)
    Invert {
        #[command(flatten)]
        we: WeArgs,
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        guess: C64,
    },
    /// Split f into weighted or expression parts
    Split {
        #[command(flatten)]
        we: WeArgs,
        #[arg(long, value_delimiter = ',', value_parser = real, allow_hyphen_values = true)]
        weights: Vec<f64>,
        /// One expression part, repeated for each part, instead of weights
        /// (non-vanishing checked by sampling)
        #[arg(long, allow_hyphen_values = true)]
        parts: Vec<String>,
        /// Check Σ z_i = z at random ζ in the disk |ζ| < --radius
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 50)]
        probes: usize,
        #[arg(long, value_parser = real, default_value = "0.8")]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: ReportOpts,
    },
}

#[derive(Args, Debug, Clone)]
struct TlmsExprs {
    /// f(u)
    #[arg(
        id = "tf",
        long = "tf",
        alias = "tlms-f",
        default_value = "1",
        allow_hyphen_values = true
    )]
    f: String,
    /// q(u)
    #[arg(long, default_value = "u", allow_hyphen_values = true)]
    q: String,
    /// g(v)
    #[arg(
        id = "tg",
        long = "tg",
        alias = "tlms-g",
        default_value = "1",
        allow_hyphen_values = true
    )]
    g: String,
    /// r(v)
    #[arg(long, default_value = "v", allow_hyphen_values = true)]
    r: String,
    #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
    u0: f64,
    #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
    v0: f64,
    /// Use the x line with (1 - r²) in the v integral
    #[arg(long)]
    literal: bool,
}

impl TlmsExprs {
    fn data(&self) -> CliResult<TLMSData> {
        let p = |s: &str, v: &str, flag: &str| {
            AnalyticExpr::parse(s, v).map_err(|e| format!("{flag}: {e}"))
        };
        let mut d = TLMSData::new(
            p(&self.f, "u", "f")?,
            p(&self.q, "u", "q")?,
            p(&self.g, "v", "g")?,
            p(&self.r, "v", "r")?,
        );
        d.u0 = self.u0;
        d.v0 = self.v0;
        if self.literal {
            d.variant = TlmsVariant::Literal;
        }
        Ok(d)
    }
}

#[derive(Args, Debug, Clone)]
struct BcExprs {
    /// F(r)
    #[arg(long = "F", default_value = "r", allow_hyphen_values = true)]
    big_f: String,
    /// G(s)
    #[arg(long = "G", default_value = "s", allow_hyphen_values = true)]
    big_g: String,
}

impl BcExprs {
    fn data(&self) -> CliResult<BCData> {
        Ok(BCData {
            f: AnalyticExpr::parse(&self.big_f, "r").map_err(|e| format!("--F: {e}"))?,
            g: AnalyticExpr::parse(&self.big_g, "s").map_err(|e| format!("--G: {e}"))?,
        })
    }
}

#[derive(Args, Debug)]
struct MeshCheck {
    #[arg(long, value_parser = grid, allow_hyphen_values = true)]
    grid: GridSpec,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also run the parametric ZMC check on the grid
    #[arg(long)]
    check: bool,
    #[arg(long, value_parser = real, default_value = "1e-4")]
    h: f64,
    #[command(flatten)]
    report: ReportOpts,
}

#[derive(Subcommand, Debug)]
enum TlmsCmd {
    Mesh {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value = "u", allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value = "v", allow_hyphen_values = true)]
        r: String,
        #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
        u0: f64,
        #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
        v0: f64,
        #[arg(long)]
        literal: bool,
        #[command(flatten)]
        mesh: MeshCheck,
    },
}

#[derive(Subcommand, Debug)]
enum BcCmd {
    Mesh {
        #[command(flatten)]
        bc: BcExprs,
        #[command(flatten)]
        mesh: MeshCheck,
    },
}

#[derive(Args, Debug)]
struct FoliateArgs {
    /// Leaf offsets
    #[arg(long, value_delimiter = ',', value_parser = real, allow_hyphen_values = true, default_value = "0")]
    t: Vec<f64>,
    /// Band range `k0..k1`
    #[arg(long, default_value = "0..0", allow_hyphen_values = true)]
    bands: String,
    /// Output directory for leaf meshes and check reports
    #[arg(long)]
    out: Option<PathBuf>,
    /// Points per direction of each leaf mesh
    #[arg(long, default_value_t = 41)]
    resolution: usize,
    /// y range half-width of leaf meshes and of the check grid
    #[arg(long, value_parser = real, default_value = "3")]
    y_max: f64,
    #[arg(long, value_enum, default_value_t = MeshFormat::Obj)]
    format: MeshFormat,
    /// Run the continuity and round-trip checks
    #[arg(long)]
    check: bool,
    #[arg(long)]
    timestamp: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MeshFormat {
    Obj,
    Csv,
    Both,
}

/// Appends `--key value` pairs from a TOML config for keys not already
/// present on the command line.
fn merge_config(argv: &[OsString]) -> CliResult<Vec<OsString>> {
    let mut path = None;
    let mut iter = argv.iter().enumerate();
    while let Some((_, a)) = iter.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = iter.next().map(|(_, p)| PathBuf::from(p));
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else {
        return Ok(argv.to_vec());
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("config {}: {e}", path.display()))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| format!("config {}: {e}", path.display()))?;
    let present = |key: &str| {
        let flag = format!("--{key}");
        let eq = format!("--{key}=");
        argv.iter().any(|a| {
            let a = a.to_string_lossy();
            a == flag.as_str() || a.starts_with(eq.as_str())
        })
    };
    let scalar = |v: &toml::Value| -> CliResult<String> {
        match v {
            toml::Value::String(s) => Ok(s.clone()),
            toml::Value::Integer(i) => Ok(i.to_string()),
            toml::Value::Float(f) => Ok(format!("{f:?}")),
            other => Err(format!("config value {other} is not a scalar")),
        }
    };
    let mut out = argv.to_vec();
    for (key, value) in &table {
        if present(key) {
            continue;
        }
        match value {
            toml::Value::Boolean(true) => out.push(format!("--{key}").into()),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                for item in items {
                    out.push(format!("--{key}").into());
                    out.push(scalar(item)?.into());
                }
            }
            v => {
                out.push(format!("--{key}").into());
                out.push(scalar(v)?.into());
            }
        }
    }
    Ok(out)
}

fn configure_threads() {
    if let Some(n) = std::env::var("ZMC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // the global pool can only be built once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Runs the command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match merge_config(&argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads();
    match dispatch(cli.cmd) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Runtime(s)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn rt<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn finish_report(report: VerificationReport, opts: &ReportOpts) -> Result<bool, Failure> {
    let report = if opts.timestamp {
        report.with_timestamp()
    } else {
        report
    };
    summarize(&report);
    if let Some(path) = &opts.report {
        report
            .write(path)
            .map_err(|e| rt(format!("{}: {e}", path.display())))?;
    }
    Ok(report.pass)
}

fn summarize(r: &VerificationReport) {
    out!(
        "{}: {} (max_abs_err {:.3e}, tolerance {:.1e}, {} points, {} skipped, policy {})",
        r.subject,
        if r.pass { "PASS" } else { "FAIL" },
        r.max_abs_err,
        r.tolerance,
        r.points_checked,
        r.points_skipped,
        r.policy
    );
}

fn write_patch(patch: &SurfacePatch, path: &Path) -> Result<(), Failure> {
    let res = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        write_csv(patch, path)
    } else {
        write_obj(patch, path)
    };
    res.map_err(|e| rt(format!("{}: {e}", path.display())))?;
    out!(
        "wrote {} ({} of {} points valid)",
        path.display(),
        patch.valid_count(),
        patch.points.len()
    );
    Ok(())
}

fn param_patch<F>(grid: &GridSpec, f: F) -> Result<SurfacePatch, Failure>
where
    F: Fn(f64, f64) -> Option<[f64; 3]> + Sync,
{
    sample_patch(&PatchSource::Parametric(&f), grid).map_err(rt)
}

fn dispatch(cmd: Cmd) -> Result<bool, Failure> {
    match cmd {
        Cmd::Surface { cmd } => surface_cmd(cmd),
        Cmd::Identity { cmd } => identity_cmd(cmd),
        Cmd::Residual(r) => residual_cmd(r),
        Cmd::We { cmd } => we_cmd(cmd),
        Cmd::Tlms { cmd } => tlms_cmd(cmd),
        Cmd::Bc { cmd } => bc_cmd(cmd),
        Cmd::Foliate(a) => foliate_cmd(a),
    }
}

fn surface_cmd(cmd: SurfaceCmd) -> Result<bool, Failure> {
    match cmd {
        SurfaceCmd::Eval {
            name,
            x,
            y,
            complex: is_complex,
        } => {
            let s = builtin_surface(&name).map_err(rt)?;
            if is_complex {
                let (x, y) = (
                    complex(&x).map_err(Failure::Usage)?,
                    complex(&y).map_err(Failure::Usage)?,
                );
                out!("{}", s.eval_complex(x, y).map_err(rt)?);
            } else {
                let (x, y) = (
                    real(&x).map_err(Failure::Usage)?,
                    real(&y).map_err(Failure::Usage)?,
                );
                out!("{}", s.eval(x, y).map_err(rt)?);
            }
            Ok(true)
        }
        SurfaceCmd::Mesh { name, grid, out } => {
            let s = builtin_surface(&name).map_err(rt)?;
            let g = grid.unwrap_or_else(|| s.default_grid());
            let patch = sample_patch(&PatchSource::Height(&s), &g).map_err(rt)?;
            write_patch(&patch, &out)?;
            Ok(true)
        }
    }
}

fn identity_cmd(cmd: IdentityCmd) -> Result<bool, Failure> {
    let IdentityCmd::Verify {
        identity,
        n,
        params,
        grid,
        probes,
        max_im,
        margin,
        seed,
        policy,
        out,
    } = cmd;
    if grid.is_none() && probes.is_none() {
        return usage("identity verify needs --grid or --probes");
    }
    let params = IdentityParams::from_pairs(params.iter().map(String::as_str)).map_err(rt)?;
    let mut inst = identity_terms(&identity, n, &params).map_err(rt)?;
    if let Some(p) = policy {
        inst = inst.with_policy(p);
    }
    let tol = out.tol.unwrap_or(IDENTITY_TOL);
    let mut ok = true;
    if let Some(g) = grid {
        let report = verify_identity(&inst, &g, tol).map_err(rt)?;
        ok &= finish_report(report, &out)?;
    }
    if let Some(count) = probes {
        let pts = complex_probes(&inst, count, max_im, margin, seed);
        if pts.len() < count {
            return Err(rt(format!(
                "only {} of {count} probes found in the domain",
                pts.len()
            )));
        }
        let mut report = verify_at_points(&inst, &pts, margin, tol).map_err(rt)?;
        report.parameters.insert("probes".into(), json!(count));
        report.parameters.insert("max_im".into(), json!(max_im));
        report.parameters.insert("seed".into(), json!(seed));
        let probe_out = ReportOpts {
            report: out.report.as_ref().map(|p| {
                if grid.is_some() {
                    sibling(p, "probes")
                } else {
                    p.clone()
                }
            }),
            tol: out.tol,
            timestamp: out.timestamp,
        };
        ok &= finish_report(report, &probe_out)?;
    }
    Ok(ok)
}

/// `dir/name.json` → `dir/name-<tag>.json`
fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}-{tag}{ext}"))
}

fn residual_cmd(cmd: ResidualCmd) -> Result<bool, Failure> {
    if let Some(ResidualSub::Parametric(p)) = cmd.sub {
        return parametric_cmd(p);
    }
    let Some(eq) = cmd.equation else {
        return usage("residual needs --equation");
    };
    let Some(id) = cmd.surface else {
        return usage("residual needs --surface");
    };
    let s = builtin_surface(&id).map_err(rt)?;
    let g = cmd.grid.unwrap_or_else(|| s.default_grid());
    let method = match cmd.method {
        Method::Exact => JetMethod::Exact,
        Method::Fd => JetMethod::CentralDiff(cmd.h),
    };
    let tol = cmd.out.tol.unwrap_or(1e-10);
    finish_report(residual_sweep(&s, eq, &g, method, tol), &cmd.out)
}

fn parametric_cmd(p: ParametricArgs) -> Result<bool, Failure> {
    let tol = p.out.tol.unwrap_or(1e-6);
    let report = match p.rep {
        RepKind::We => {
            let d = p.we.data()?;
            let theta = p.theta;
            let sampler = move |u: f64, v: f64| {
                let z = C64::new(u, v);
                match theta {
                    Some(t) => associated_family_point(&d, z, t),
                    None => we_point(&d, z),
                }
                .map_err(|e| e.to_string())
            };
            parametric_sweep("we-parametric", sampler, p.metric, &p.grid, p.h, tol)
        }
        RepKind::Tlms => {
            let d = p.tlms.data()?;
            let sampler = move |u: f64, v: f64| tlms_point(&d, u, v).map_err(|e| e.to_string());
            parametric_sweep("tlms-parametric", sampler, p.metric, &p.grid, p.h, tol)
        }
        RepKind::Bc => {
            let d = p.bc.data()?;
            let sampler = move |r: f64, s: f64| bc_point(&d, r, s).map_err(|e| e.to_string());
            parametric_sweep("bc-parametric", sampler, p.metric, &p.grid, p.h, tol)
        }
        RepKind::Surface => {
            let Some(id) = p.surface.as_deref() else {
                return usage("--rep surface needs --surface");
            };
            let s = builtin_surface(id).map_err(rt)?;
            let sampler =
                |x: f64, y: f64| s.eval(x, y).map(|z| [x, y, z]).map_err(|e| e.to_string());
            parametric_sweep("graph-parametric", sampler, p.metric, &p.grid, p.h, tol)
        }
    };
    finish_report(report, &p.out)
}

fn we_cmd(cmd: WeCmd) -> Result<bool, Failure> {
    match cmd {
        WeCmd::Eval { we, zeta, theta } => {
            let d = we.data()?;
            let p = match theta {
                Some(t) => associated_family_point(&d, zeta, t),
                None => we_point(&d, zeta),
            }
            .map_err(rt)?;
            out!("{} {} {}", p[0], p[1], p[2]);
            Ok(true)
        }
        WeCmd::Mesh {
            we,
            grid,
            out,
            theta,
            graph,
            seed_zeta,
        } => {
            let d = we.data()?;
            let patch = if graph {
                sample_graph_by_inversion(&d, &grid, seed_zeta)
                    .map_err(rt)?
                    .0
            } else {
                param_patch(&grid, |u, v| {
                    let z = C64::new(u, v);
                    match theta {
                        Some(t) => associated_family_point(&d, z, t),
                        None => we_point(&d, z),
                    }
                    .ok()
                })?
            };
            write_patch(&patch, &out)?;
            Ok(true)
        }
        WeCmd::Invert { we, x, y, guess } => {
            let d = we.data()?;
            let z = invert_parametrization(&d, x, y, guess).map_err(rt)?;
            out!("{z}");
            Ok(true)
        }
        WeCmd::Split {
            we,
            weights,
            parts,
            verify,
            probes,
            radius,
            seed,
            out,
        } => {
            let d = we.data()?;
            let pieces = match (weights.is_empty(), parts.is_empty()) {
                (false, true) => split_weierstrass(&d, &weights).map_err(rt)?,
                (true, false) => {
                    let exprs = parts
                        .iter()
                        .map(|p| AnalyticExpr::parse(p, &we.var).map_err(rt))
                        .collect::<Result<Vec<_>, _>>()?;
                    let samples = disk_samples(radius, 1000, seed);
                    split_weierstrass_exprs(&d, &exprs, &samples).map_err(rt)?
                }
                _ => return usage("we split needs exactly one of --weights or --parts"),
            };
            for (i, p) in pieces.iter().enumerate() {
                out!("part {i}: f = {}", p.f);
            }
            if !verify {
                return Ok(true);
            }
            let whole = WEData { x0: [0.0; 3], ..d };
            let mut acc = ErrorAccumulator::new();
            for zeta in disk_samples(radius, probes, seed) {
                let z = we_point(&whole, zeta).map_err(rt)?[2];
                let mut sum = 0.0;
                for p in &pieces {
                    sum += we_point(p, zeta).map_err(rt)?[2];
                }
                acc.push((sum - z).abs(), &[zeta], C64::from(z), C64::from(sum));
            }
            let mut params = Map::new();
            params.insert("f".into(), json!(whole.f.to_string()));
            params.insert("mode".into(), json!(whole.mode.name()));
            params.insert("weights".into(), json!(weights));
            params.insert("parts".into(), json!(parts));
            params.insert("probes".into(), json!(probes));
            params.insert("radius".into(), json!(radius));
            params.insert("seed".into(), json!(seed));
            let report = acc.finish(
                "we-split",
                params,
                None,
                "principal",
                out.tol.unwrap_or(1e-10),
            );
            finish_report(report, &out)
        }
    }
}

/// Uniform random points in the disk `|ζ| < radius`.
pub fn disk_samples(radius: f64, count: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

fn mesh_and_check<F>(
    subject: &str,
    sampler: F,
    metric: SignatureMetric,
    m: &MeshCheck,
) -> Result<bool, Failure>
where
    F: Fn(f64, f64) -> Result<[f64; 3], String> + Sync,
{
    if m.out.is_none() && !m.check {
        return usage("nothing to do: give --out and/or --check");
    }
    if let Some(out) = &m.out {
        let patch = param_patch(&m.grid, |u, v| sampler(u, v).ok())?;
        write_patch(&patch, out)?;
    }
    if m.check {
        let tol = m.report.tol.unwrap_or(1e-6);
        let report = parametric_sweep(subject, &sampler, metric, &m.grid, m.h, tol);
        return finish_report(report, &m.report);
    }
    Ok(true)
}

fn tlms_cmd(cmd: TlmsCmd) -> Result<bool, Failure> {
    let TlmsCmd::Mesh {
        f,
        q,
        g,
        r,
        u0,
        v0,
        literal,
        mesh,
    } = cmd;
    let data = TlmsExprs {
        f,
        q,
        g,
        r,
        u0,
        v0,
        literal,
    }
    .data()?;
    let sampler = |u: f64, v: f64| tlms_point(&data, u, v).map_err(|e| e.to_string());
    mesh_and_check("tlms-parametric", sampler, SignatureMetric::L3X, &mesh)
}

fn bc_cmd(cmd: BcCmd) -> Result<bool, Failure> {
    let BcCmd::Mesh { bc, mesh } = cmd;
    let data = bc.data()?;
    let sampler = |r: f64, s: f64| bc_point(&data, r, s).map_err(|e| e.to_string());
    mesh_and_check("bc-parametric", sampler, SignatureMetric::L3P, &mesh)
}

fn parse_bands(s: &str) -> CliResult<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("bands `{s}` must look like k0..k1"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad band `{a}`"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad band `{b}`"))?;
    if a > b {
        return Err(format!("empty band range `{s}`"));
    }
    Ok((a, b))
}

fn foliate_cmd(a: FoliateArgs) -> Result<bool, Failure> {
    use std::f64::consts::PI;
    let (k0, k1) = parse_bands(&a.bands).map_err(Failure::Usage)?;
    if a.out.is_none() && !a.check {
        return usage("nothing to do: give --out and/or --check");
    }
    if a.resolution < 2 {
        return usage("--resolution must be at least 2");
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| rt(format!("{}: {e}", dir.display())))?;
        for k in k0..=k1 {
            let x0 = (2 * k - 1) as f64 * PI;
            let x1 = (2 * k + 1) as f64 * PI;
            let g = GridSpec::new((x0, x1, a.resolution), (-a.y_max, a.y_max, a.resolution))
                .map_err(rt)?;
            for &t in &a.t {
                let leaf = leaf_surface(t);
                let patch = sample_patch(&PatchSource::Height(&leaf), &g).map_err(rt)?;
                let stem = format!("leaf_k{k}_t{t}");
                if matches!(a.format, MeshFormat::Obj | MeshFormat::Both) {
                    write_patch(&patch, &dir.join(format!("{stem}.obj")))?;
                }
                if matches!(a.format, MeshFormat::Csv | MeshFormat::Both) {
                    write_patch(&patch, &dir.join(format!("{stem}.csv")))?;
                }
            }
        }
    }
    if !a.check {
        return Ok(true);
    }
    let x0 = (2 * k0 - 1) as f64 * PI;
    let x1 = (2 * k1 + 1) as f64 * PI;
    let n = a.resolution.max(2);
    let g = GridSpec::with_margin((x0, x1, n), (-a.y_max, a.y_max, n), 1e-6).map_err(rt)?;
    let (cont, round) = foliation_check(&g, &a.t).map_err(rt)?;
    let mut ok = true;
    for r in [cont, round] {
        let opts = ReportOpts {
            report: a
                .out
                .as_ref()
                .map(|d| d.join(format!("{}.json", r.subject))),
            tol: None,
            timestamp: a.timestamp,
        };
        ok &= finish_report(r, &opts)?;
    }
    Ok(ok)
}
