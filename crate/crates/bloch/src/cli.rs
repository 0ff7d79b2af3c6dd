use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use bloch_core::fedorov::{self, ArcSide, FedorovInput, TraceOptions};
use bloch_core::geometry;
use bloch_core::mapping::{self, BoundResult};
use bloch_core::special_fn::{incomplete_f, EllipticModulus};
use bloch_core::symcheck::{self, HarmonicEstimate, SlitFamily, TwoSided};
use bloch_core::R_OPTIMAL;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::json::{self, Obj};
use crate::{parallel, render};

#[derive(Debug, Parser)]
#[command(name = "bloch", version, about = "Slit-disk domains and the univalent Bloch-Landau upper bound")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// K, K', the nome, F(φ, k), Θ(u) and Z(u) for one modulus.
    Special(SpecialArgs),
    /// Fedorov's minimal-capacity continuum through 0, c, e^{±iα}.
    Fedorov(FedorovArgs),
    /// Trace the curved arcs of Fedorov's continuum.
    Trace(TraceArgs),
    /// The bound for one outer radius R.
    Bound(RadiusArgs),
    /// Minimize the bound over R.
    Optimize(OptimizeArgs),
    /// Draw the domain as SVG.
    Render(RadiusArgs),
    /// Numerical inradius and extremal-disk clearances.
    Inradius(InradiusArgs),
    /// Monte-Carlo harmonic measure and two-sided symmetry checks.
    Symcheck(SymcheckArgs),
}

#[derive(Debug, Args)]
pub struct SpecialArgs {
    #[arg(long)]
    pub k: f64,
    /// Amplitude for F(φ, k).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub phi: f64,
    /// Argument for Θ(u) and Z(u).
    #[arg(long, default_value_t = 0.0)]
    pub u: f64,
}

#[derive(Debug, Args)]
pub struct FedorovArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub input: FedorovArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[arg(long = "R", default_value_t = R_OPTIMAL)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, default_value_t = bloch_core::optimize::DEFAULT_WINDOW.0)]
    pub rmin: f64,
    #[arg(long, default_value_t = bloch_core::optimize::DEFAULT_WINDOW.1)]
    pub rmax: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct InradiusArgs {
    #[arg(long = "R", default_value_t = R_OPTIMAL)]
    pub r: f64,
    #[arg(long = "grid-step", default_value_t = 0.02)]
    pub grid_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// n rotated copies of the radial slit [r, 1].
    Radial,
    /// n rotated slits each carrying measure a.
    Base,
    /// The six arcs and six slits of the domain for radius R, scaled to the unit disk.
    Domain,
}

#[derive(Debug, Args)]
pub struct SymcheckArgs {
    #[arg(long, value_enum, default_value_t = Family::Domain)]
    pub family: Family,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Slit start for the radial family.
    #[arg(long)]
    pub r: Option<f64>,
    /// Per-slit measure for the base family.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long = "R", default_value_t = R_OPTIMAL)]
    pub big_r: f64,
    #[arg(long, default_value_t = 100_000)]
    pub walks: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be finite, got {x}")))
    }
}

impl Cli {
    fn format(&self) -> Result<Format> {
        let (default, allowed): (Format, &[Format]) = match self.command {
            Command::Trace(_) | Command::Optimize(_) => (Format::Json, &[Format::Json, Format::Csv]),
            Command::Render(_) => (Format::Svg, &[Format::Svg]),
            _ => (Format::Json, &[Format::Json]),
        };
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(invalid(format!("format {f:?} is not available for this subcommand")))
        }
    }

    /// Flag checks that need no computation.
    pub fn validate(&self) -> Result<Format> {
        let format = self.format()?;
        match &self.command {
            Command::Special(a) => {
                finite("k", a.k)?;
                finite("phi", a.phi)?;
                finite("u", a.u)?;
            }
            Command::Fedorov(a) => {
                finite("alpha", a.alpha)?;
                finite("c", a.c)?;
            }
            Command::Trace(a) => {
                finite("alpha", a.input.alpha)?;
                finite("c", a.input.c)?;
                if !(a.step > 1e-6 && a.step < 1e-2) {
                    return Err(invalid(format!("--step must lie in (1e-6, 1e-2), got {}", a.step)));
                }
                if !(a.tol >= 1e-10) {
                    return Err(invalid(format!("--tol must be at least 1e-10, got {}", a.tol)));
                }
            }
            Command::Bound(a) | Command::Render(a) => mapping::check_window(a.r)?,
            Command::Optimize(a) => {
                if !(a.rmin > 3.0 && a.rmin <= a.rmax && a.rmax <= 4.5) {
                    return Err(invalid(format!(
                        "need 3 < --rmin <= --rmax <= 4.5, got [{}, {}]",
                        a.rmin, a.rmax
                    )));
                }
                if !(a.tol >= 1e-9) {
                    return Err(invalid(format!("--tol must be at least 1e-9, got {}", a.tol)));
                }
            }
            Command::Inradius(a) => {
                mapping::check_window(a.r)?;
                if !(a.grid_step > 1e-4 && a.grid_step <= 0.5) {
                    return Err(invalid(format!("--grid-step must lie in (1e-4, 0.5], got {}", a.grid_step)));
                }
            }
            Command::Symcheck(a) => {
                if a.walks < symcheck::MIN_WALKS {
                    return Err(invalid(format!("--walks must be at least {}", symcheck::MIN_WALKS)));
                }
                match a.family {
                    Family::Radial => {
                        let r = a.r.ok_or_else(|| invalid("--family radial needs --r"))?;
                        if !(r > 0.0 && r < 1.0) || a.n == 0 {
                            return Err(invalid("--family radial needs --n >= 1 and 0 < --r < 1"));
                        }
                    }
                    Family::Base => {
                        let x = a.a.ok_or_else(|| invalid("--family base needs --a"))?;
                        if !(x > 0.0 && x < 1.0 / a.n.max(1) as f64) || a.n == 0 {
                            return Err(invalid("--family base needs --n >= 1 and 0 < --a < 1/n"));
                        }
                    }
                    Family::Domain => mapping::check_window(a.big_r)?,
                }
            }
        }
        Ok(format)
    }
}

/// Execute a parsed command and return the bytes to emit.
pub fn execute(cli: &Cli) -> Result<String> {
    let format = cli.validate()?;
    let threads = parallel::threads_from_env()?;
    match &cli.command {
        Command::Special(a) => special(a),
        Command::Fedorov(a) => fedorov_cmd(a),
        Command::Trace(a) => trace(a, format),
        Command::Bound(a) => {
            let b = mapping::bound(a.r)?;
            Ok(json::to_string(&json::document("bound", bound_json(&b)?)))
        }
        Command::Optimize(a) => parallel::with_threads(threads, || optimize(a, format))?,
        Command::Render(a) => Ok(render::svg(&geometry::build_domain(a.r)?)),
        Command::Inradius(a) => inradius(a),
        Command::Symcheck(a) => parallel::with_threads(threads, || symcheck_cmd(a))?,
    }
}

/// Parse `args`, run, and report; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { crate::error::EXIT_INVALID } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = execute(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::Stream),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn special(a: &SpecialArgs) -> Result<String> {
    let m = EllipticModulus::new(a.k)?;
    let f = incomplete_f(a.phi, a.k)?;
    let mut body = Obj::new()
        .num("k", m.k)?
        .num("k_complement", m.k_complement)?
        .num("big_k", m.big_k)?;
    // K' is infinite at k = 0; omitted there rather than emitted as a non-number.
    if m.big_k_complement.is_finite() {
        body = body.num("big_k_complement", m.big_k_complement)?;
    }
    let body = body
        .num("q", m.q)?
        .num("phi", a.phi)?
        .num("incomplete_f", f)?
        .num("u", a.u)?
        .num("big_theta", m.theta(a.u))?
        .num("jacobi_zeta", m.zeta(a.u))?
        .build();
    Ok(json::to_string(&json::document("special", body)))
}

fn fedorov_json(s: &fedorov::FedorovSolution) -> Result<Value> {
    Ok(Obj::new()
        .num("alpha", s.input.alpha)?
        .num("c", s.input.c)?
        .num("p", s.p)?
        .num("k", s.modulus.k)?
        .num("q", s.modulus.q)?
        .num("phi_amp", s.phi_amp)?
        .num("w_ell", s.w_ell)?
        .num("b", s.b)?
        .num("capacity", s.capacity)?
        .build())
}

fn fedorov_cmd(a: &FedorovArgs) -> Result<String> {
    let s = fedorov::solve(FedorovInput::new(a.alpha, a.c)?)?;
    Ok(json::to_string(&json::document("fedorov", fedorov_json(&s)?)))
}

fn side_name(side: ArcSide) -> &'static str {
    match side {
        ArcSide::Upper => "upper",
        ArcSide::Lower => "lower",
    }
}

fn trace(a: &TraceArgs, format: Format) -> Result<String> {
    let s = fedorov::solve(FedorovInput::new(a.input.alpha, a.input.c)?)?;
    let opts = TraceOptions {
        step: a.step,
        tol: a.tol,
        ..TraceOptions::default()
    };
    let arcs = [
        fedorov::trace_arc_with(&s, ArcSide::Upper, &opts)?,
        fedorov::trace_arc_with(&s, ArcSide::Lower, &opts)?,
    ];
    if format == Format::Csv {
        let mut out = String::from("side,index,x,y\n");
        for arc in &arcs {
            for (i, z) in arc.with_start().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{i},{},{}",
                    side_name(arc.side),
                    json::round15(z.re),
                    json::round15(z.im)
                );
            }
        }
        return Ok(out);
    }
    let mut list = Vec::new();
    for arc in &arcs {
        let points = arc
            .with_start()
            .iter()
            .map(|&z| json::complex("point", z))
            .collect::<Result<Vec<_>>>()?;
        list.push(
            Obj::new()
                .val("side", side_name(arc.side))
                .complex("seed_direction", arc.seed_direction)?
                .complex("end_target", arc.end_target)?
                .num("endpoint_residual", arc.endpoint_residual)?
                .num("max_orthogonality_residual", arc.max_orthogonality_residual)?
                .val("points", points)
                .build(),
        );
    }
    let body = Obj::new()
        .val("solution", fedorov_json(&s)?)
        .num("step", a.step)?
        .num("tol", a.tol)?
        .val("arcs", list)
        .build();
    Ok(json::to_string(&json::document("trace", body)))
}

fn bound_json(b: &BoundResult) -> Result<Value> {
    Ok(Obj::new()
        .num("r", b.r)?
        .complex("w", b.w)?
        .complex("z0", b.z0)?
        .num("psi_1", b.psi_1)?
        .num("psi_m8", b.psi_m8)?
        .num("n", b.n)?
        .num("alpha", b.alpha)?
        .num("c", b.c)?
        .num("b", b.b)?
        .num("capacity", b.capacity)?
        .num("g_prime_abs", b.g_prime_abs)?
        .num("bound", b.bound)?
        .build())
}

fn optimize(a: &OptimizeArgs, format: Format) -> Result<String> {
    let rep = parallel::minimize_bound(a.rmin, a.rmax, a.tol)?;
    if format == Format::Csv {
        let mut out = String::from("row,R,bound,alpha,c,capacity\n");
        let prescan = bloch_core::optimize::PRESCAN_SAMPLES.min(rep.history.len());
        for (i, s) in rep.history.iter().enumerate() {
            let kind = if rep.history.len() == 1 {
                "single"
            } else if i < prescan {
                "prescan"
            } else {
                "golden"
            };
            let _ = writeln!(
                out,
                "{kind},{},{},{},{},{}",
                json::round15(s.r),
                json::round15(s.bound),
                json::round15(s.alpha),
                json::round15(s.c),
                json::round15(s.capacity)
            );
        }
        let best = rep
            .history
            .iter()
            .find(|s| s.r == rep.r_star)
            .expect("optimum is one of the evaluations");
        let _ = writeln!(
            out,
            "optimum,{},{},{},{},{}",
            json::round15(best.r),
            json::round15(best.bound),
            json::round15(best.alpha),
            json::round15(best.c),
            json::round15(best.capacity)
        );
        return Ok(out);
    }
    let history = rep
        .history
        .iter()
        .map(|s| Ok(Value::Array(vec![json::num("R", s.r)?, json::num("bound", s.bound)?])))
        .collect::<Result<Vec<_>>>()?;
    let body = Obj::new()
        .num("r_star", rep.r_star)?
        .num("bound_star", rep.bound_star)?
        .val("evaluations", rep.evaluations)
        .val(
            "bracket",
            Value::Array(vec![json::num("bracket", rep.bracket.0)?, json::num("bracket", rep.bracket.1)?]),
        )
        .val("history", history)
        .build();
    Ok(json::to_string(&json::document("optimize", body)))
}

fn kind_name(k: geometry::DiskKind) -> &'static str {
    match k {
        geometry::DiskKind::Goodman => "goodman",
        geometry::DiskKind::OuterRay => "outer_ray",
        geometry::DiskKind::OuterSegment => "outer_segment",
    }
}

fn inradius(a: &InradiusArgs) -> Result<String> {
    let model = geometry::build_domain(a.r)?;
    let (at, ir) = geometry::inradius_search(&model, a.grid_step);
    let centers = model
        .extremal_centers
        .iter()
        .zip(model.clearances())
        .map(|(c, d)| {
            Ok(Obj::new()
                .val("kind", kind_name(c.kind))
                .val("extremal", c.kind.is_extremal())
                .complex("center", c.center)?
                .num("clearance", d)?
                .build())
        })
        .collect::<Result<Vec<_>>>()?;
    let body = Obj::new()
        .num("r", a.r)?
        .complex("w", model.w)?
        .num("grid_step", a.grid_step)?
        .num("inradius", ir)?
        .complex("inradius_center", at)?
        .val("extremal_centers", centers)
        .build();
    Ok(json::to_string(&json::document("inradius", body)))
}

fn estimate_json(name: &str, e: &HarmonicEstimate) -> Result<Value> {
    Ok(Obj::new()
        .val("target", name)
        .num("value", e.value)?
        .num("std_error", e.std_error)?
        .val("walks", e.walks)
        .build())
}

fn two_sided_json(index: usize, t: &TwoSided) -> Result<Value> {
    let diff = t.difference();
    let se = t.difference_std_error();
    Ok(Obj::new()
        .val("arc", index)
        .val("left", estimate_json("left", &t.left)?)
        .val("right", estimate_json("right", &t.right)?)
        .num("difference", diff)?
        .num("difference_std_error", se)?
        .val("discarded", t.discarded)
        .num("discard_fraction", t.discard_fraction)?
        .val("symmetric_within_3_sigma", diff.abs() <= 3.0 * se)
        .val("valid", t.is_valid())
        .build())
}

fn symcheck_cmd(a: &SymcheckArgs) -> Result<String> {
    let mut body = Obj::new();
    let (family, expected, labels): (SlitFamily, Option<f64>, Vec<String>) = match a.family {
        Family::Radial => {
            let r = a.r.expect("validated");
            body = body.val("family", "radial").val("n", a.n).num("r", r)?;
            let m = symcheck::radial_slit_measure(r.powi(a.n as i32))? / a.n as f64;
            (SlitFamily::radial(a.n, r)?, Some(m), (0..a.n).map(|i| format!("slit {i}")).collect())
        }
        Family::Base => {
            let target = a.a.expect("validated");
            let r = symcheck::solve_base_config(a.n, target)?;
            body = body.val("family", "base").val("n", a.n).num("a", target)?.num("r", r)?;
            (SlitFamily::radial(a.n, r)?, Some(target), (0..a.n).map(|i| format!("slit {i}")).collect())
        }
        Family::Domain => {
            let model = geometry::build_domain(a.big_r)?;
            body = body.val("family", "domain").num("r", a.big_r)?;
            let labels = (0..model.arcs.len())
                .map(|i| format!("arc {i}"))
                .chain((0..model.slits.len()).map(|i| format!("slit {i}")))
                .collect();
            (SlitFamily::from_domain(&model)?, None, labels)
        }
    };
    let (estimates, sides) = parallel::full_run(&family, a.walks, a.seed)?;
    let mut targets = vec![estimate_json("circle", &estimates[0])?];
    for (name, e) in labels.iter().zip(&estimates[1..]) {
        targets.push(estimate_json(name, e)?);
    }
    let sides = sides
        .iter()
        .enumerate()
        .map(|(i, t)| two_sided_json(i, t))
        .collect::<Result<Vec<_>>>()?;
    if let Some(m) = expected {
        body = body.num("expected_per_slit", m)?;
    }
    let body = body
        .val("walks", a.walks)
        .val("seed", a.seed)
        .val("targets", targets)
        .val("two_sided", sides)
        .build();
    Ok(json::to_string(&json::document("symcheck", body)))
}
