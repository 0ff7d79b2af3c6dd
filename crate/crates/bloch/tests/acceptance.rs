//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion does.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use bloch::parallel;
use bloch_core::fedorov::{self, ArcSide, FConvention, FedorovInput, FedorovSolution};
use bloch_core::geometry;
use bloch_core::mapping;
use bloch_core::optimize::OptimizationReport;
use bloch_core::special_fn::{complete_k, incomplete_f, theta4, EllipticModulus};
use bloch_core::symcheck::{self, SlitFamily};
use bloch_core::*;
use bloch_oracles as oracle;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

const R_OPT: f64 = 4.054_635_8;
const DIGITS: f64 = 0.656_393_613_152_19;
const WALKS: u64 = 1_000_000;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn c1() -> Outcome {
    let t = Instant::now();
    let b = mapping::bound(R_OPT).map_err(e)?;
    let took = t.elapsed();
    let err = (b.bound - DIGITS).abs();
    check(err <= 5e-10, || format!("bound {} differs by {err:e}", b.bound))?;
    check(took < Duration::from_secs(1), || format!("took {took:?}"))?;

    // The algebraic-limit reading of F does not reproduce the digits.
    let geo = geometry::solve_w(R_OPT).map_err(e)?;
    let params = mapping::fedorov_params(R_OPT, geo.w * geo.w * geo.w).map_err(e)?;
    let alt = FedorovInput::new(params.alpha, params.c)
        .and_then(|i| fedorov::solve_with(i, FConvention::AlgebraicLimit))
        .map(|s| (params.n * s.capacity).cbrt() / R_OPT);
    let alt_msg = match alt {
        Ok(v) => {
            check((v - DIGITS).abs() > 5e-10, || format!("alternative convention also gives {v}"))?;
            format!("alternative convention gives {v:.14}")
        }
        Err(err) => format!("alternative convention fails: {err}"),
    };
    Ok(format!("bound = {:.14} (error {err:.1e}) in {took:?}; {alt_msg}", b.bound))
}

fn c2(rep: &OptimizationReport, took: Duration) -> Outcome {
    check((rep.r_star - R_OPT).abs() <= 1e-3, || format!("r_star = {}", rep.r_star))?;
    check(rep.bound_star <= UPPER_BOUND_IMPROVED, || format!("bound_star = {}", rep.bound_star))?;
    check(rep.bound_star < UPPER_BOUND_BELLER_HUMMEL, || "not below 0.6564155".into())?;
    check(rep.bound_star < UPPER_BOUND_GOODMAN, || "not below 0.65647".into())?;
    check(rep.bound_star > LOWER_BOUND_XIONG, || "not above 0.570884".into())?;
    check(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!(
        "r_star = {:.9}, bound_star = {:.13}, {} evaluations in {took:?}",
        rep.r_star, rep.bound_star, rep.evaluations
    ))
}

fn c3() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut u = |lo: f64, hi: f64| lo + (hi - lo) * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64);
    let mut worst_f: f64 = 0.0;
    for _ in 0..1000 {
        let (phi, k) = (u(0.0, FRAC_PI_2), u(0.0, 0.99));
        worst_f = worst_f.max((incomplete_f(phi, k).map_err(e)? - oracle::elliptic_f(phi, k)).abs());
        worst_f = worst_f.max((complete_k(k).map_err(e)? - oracle::elliptic_k(k)).abs());
    }
    check(worst_f <= 1e-12, || format!("F/K error {worst_f:e}"))?;

    let h = 1e-6;
    let mut worst_z: f64 = 0.0;
    for &k in &[0.1, 0.5, 0.9] {
        let m = EllipticModulus::new(k).map_err(e)?;
        for i in 0..=40 {
            let x = 2.0 * m.big_k * i as f64 / 40.0;
            let fd = (m.theta(x + h).ln() - m.theta(x - h).ln()) / (2.0 * h);
            worst_z = worst_z.max((m.zeta(x) - fd).abs());
        }
    }
    check(worst_z <= 1e-8, || format!("zeta error {worst_z:e}"))?;

    let mut worst_t: f64 = 0.0;
    for qi in 1..=50 {
        let q = qi as f64 / 100.0;
        for vi in 0..16 {
            let v = vi as f64 * PI / 15.0;
            worst_t = worst_t.max((theta4(v, q).map_err(e)? - oracle::theta4_product(v, q)).abs());
        }
    }
    check(worst_t <= 1e-12, || format!("theta error {worst_t:e}"))?;
    let took = t.elapsed();
    check(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    Ok(format!(
        "F/K {worst_f:.1e}, zeta {worst_z:.1e}, theta {worst_t:.1e} in {took:?}"
    ))
}

fn configs() -> Result<Vec<(&'static str, FedorovSolution)>, String> {
    let quarter = fedorov::solve(FedorovInput::new(FRAC_PI_4, 1.0).map_err(e)?).map_err(e)?;
    let (_, optimal) = mapping::bound_with_solution(R_OPT).map_err(e)?;
    Ok(vec![("(pi/4, 1)", quarter), ("R = 4.0546358", optimal)])
}

fn c4() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for (name, s) in configs()? {
        let arcs: Vec<Vec<Complex64>> = fedorov::continuum(&s).map_err(e)?.into_iter().collect();
        // 500 panels on each of the four arcs.
        let cap = oracle::capacity_of_arcs(&arcs, 500);
        let rel = (cap - s.capacity).abs() / s.capacity;
        check(rel <= 5e-3, || format!("{name}: oracle {cap} vs {} (rel {rel:e})", s.capacity))?;
        parts.push(format!("{name} rel {rel:.1e}"));
    }
    let took = t.elapsed();
    check(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{} in {took:?}", parts.join(", ")))
}

fn c5() -> Outcome {
    let mut worst = [0.0f64; 4];
    for (name, s) in configs()? {
        let up = fedorov::trace_arc(&s, ArcSide::Upper, 1e-3, 1e-10).map_err(e)?;
        let lo = fedorov::trace_arc(&s, ArcSide::Lower, 1e-3, 1e-10).map_err(e)?;
        for arc in [&up, &lo] {
            check(arc.endpoint_residual <= 1e-6, || format!("{name}: endpoint {}", arc.endpoint_residual))?;
            check(arc.max_orthogonality_residual <= 1e-8, || {
                format!("{name}: orthogonality {}", arc.max_orthogonality_residual)
            })?;
            worst[0] = worst[0].max(arc.endpoint_residual);
            worst[1] = worst[1].max(arc.max_orthogonality_residual);
        }
        check(up.points.len() == lo.points.len(), || format!("{name}: arc lengths differ"))?;
        let conj = up.points.iter().zip(&lo.points).map(|(u, l)| (u.conj() - l).norm()).fold(0.0, f64::max);
        check(conj <= 1e-9, || format!("{name}: conjugation {conj:e}"))?;
        worst[2] = worst[2].max(conj);
        // The stem leaves b along the real axis, so the arcs must leave at ±π/2.
        let dev = [
            up.seed_direction.arg() - FRAC_PI_2,
            lo.seed_direction.arg() + FRAC_PI_2,
            up.tangents[0].arg() - FRAC_PI_2,
            lo.tangents[0].arg() + FRAC_PI_2,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()));
        check(dev <= 1e-3, || format!("{name}: departure off by {dev:e}"))?;
        worst[3] = worst[3].max(dev);
    }
    Ok(format!(
        "endpoint {:.1e}, orthogonality {:.1e}, conjugation {:.1e}, departure {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn c6() -> Outcome {
    let (mut res, mut d_max, mut arg_max) = (0.0f64, 0.0f64, 0.0f64);
    let mut n = 0;
    for i in 1..=1500 {
        let r = 3.0 + i as f64 * 1e-3;
        let g = geometry::solve_w(r).map_err(e)?;
        res = res.max(((g.w - g.p1).norm() - 1.0).abs()).max(((g.w - g.p2).norm() - 1.0).abs());
        d_max = d_max.max(g.d);
        arg_max = arg_max.max(g.w.arg());
        n += 1;
    }
    check(res <= 1e-12, || format!("circle residual {res:e}"))?;
    check(d_max < 2.0, || format!("d reaches {d_max}"))?;
    check(arg_max < FRAC_PI_6, || format!("arg w reaches {arg_max}"))?;
    Ok(format!("{n} radii: residual {res:.1e}, max d {d_max:.6}, max arg w {arg_max:.6}"))
}

fn c7(rep: &OptimizationReport) -> Outcome {
    let model = geometry::build_domain(rep.r_star).map_err(e)?;
    let (at, ir) = geometry::inradius_search(&model, 0.02);
    check((0.999..=1.001).contains(&ir), || format!("inradius {ir} at {at}"))?;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (c, d) in model.extremal_centers.iter().zip(model.clearances()) {
        if c.kind.is_extremal() {
            worst = worst.max((d - 1.0).abs());
            count += 1;
        }
    }
    check(count == 12, || format!("{count} extremal centers"))?;
    check(worst <= 1e-4, || format!("clearance off by {worst:e}"))?;
    Ok(format!("inradius {ir:.6} at {at:.4}; {count} clearances within {worst:.1e}"))
}

fn c8() -> Outcome {
    let t = Instant::now();
    // (a) both sides of a radial slit.
    let fam = SlitFamily::radial(1, 0.5).map_err(e)?;
    let (_, sides) = parallel::full_run(&fam, WALKS, 11).map_err(e)?;
    let ts = &sides[0];
    let z_a = ts.difference().abs() / ts.difference_std_error();
    check(z_a <= 3.0, || format!("radial slit sides differ by {z_a:.2} sigma"))?;

    // (b) the base configuration.
    let r = symcheck::solve_base_config(3, 1.0 / 6.0).map_err(e)?;
    let fam = SlitFamily::radial(3, r).map_err(e)?;
    let (est, _) = parallel::full_run(&fam, WALKS, 12).map_err(e)?;
    let z_circle = (est[0].value - 0.5).abs() / est[0].std_error;
    check(z_circle <= 3.0, || format!("circle measure {} ({z_circle:.2} sigma)", est[0].value))?;
    let mut z_b: f64 = 0.0;
    for s in &est[1..] {
        let z = (s.value - 1.0 / 6.0).abs() / s.std_error;
        check(z <= 3.0, || format!("slit measure {} ({z:.2} sigma)", s.value))?;
        z_b = z_b.max(z);
    }

    // (c) the six arcs of the extremal domain.
    let model = geometry::build_domain(R_OPT).map_err(e)?;
    let fam = SlitFamily::from_domain(&model).map_err(e)?;
    let (_, sides) = parallel::full_run(&fam, WALKS, 13).map_err(e)?;
    let (mut z_c, mut disc): (f64, f64) = (0.0, 0.0);
    for (i, ts) in sides.iter().take(model.arcs.len()).enumerate() {
        let z = ts.difference().abs() / ts.difference_std_error();
        check(z <= 3.0, || format!("arc {i}: sides differ by {z:.2} sigma ({ts:?})"))?;
        check(ts.discard_fraction < symcheck::MAX_DISCARD_FRACTION, || {
            format!("arc {i}: discard fraction {}", ts.discard_fraction)
        })?;
        z_c = z_c.max(z);
        disc = disc.max(ts.discard_fraction);
    }
    let took = t.elapsed();
    check(took < Duration::from_secs(600), || format!("took {took:?}"))?;
    Ok(format!(
        "{WALKS} walks each: radial {z_a:.2} sigma; base circle {z_circle:.2} / slits {z_b:.2} sigma; \
         arcs {z_c:.2} sigma, discard {disc:.1e}; {took:?}"
    ))
}

fn strip_schema(s: &str) -> String {
    s.lines().filter(|l| !l.contains("\"schema_version\"")).collect::<Vec<_>>().join("\n")
}

fn run_bin(args: &[&str], threads: &str) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bloch"))
        .args(args)
        .env(parallel::THREADS_ENV, threads)
        .output()
        .map_err(e)?;
    check(out.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    String::from_utf8(out.stdout).map_err(e)
}

fn c9() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["bound", "--R", "4.0546358"],
        &["optimize", "--rmin", "3.9", "--rmax", "4.2"],
        &["symcheck", "--family", "domain", "--walks", "50000", "--seed", "7"],
        &["symcheck", "--family", "base", "--n", "3", "--a", "0.1", "--walks", "50000", "--seed", "3"],
        &["render"],
    ];
    for args in runs {
        let reference = strip_schema(&run_bin(args, "1")?);
        for threads in ["1", "2", "4"] {
            let again = strip_schema(&run_bin(args, threads)?);
            check(again == reference, || format!("{args:?} differs with {threads} threads"))?;
        }
    }
    Ok(format!("{} commands bit-identical across 1/2/4 threads and repeats", runs.len()))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: u32, what: &str, outcome: Outcome, took: Duration| {
        match outcome {
            Ok(msg) => println!("PASS criterion {n} ({what}): {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n} ({what}): {msg} [{took:.2?}]");
            }
        }
    };
    let timed = |f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed())
    };

    let (o, d) = timed(&c1);
    report(1, "digit reproduction", o, d);

    let t = Instant::now();
    let opt = parallel::minimize_bound(3.9, 4.2, 1e-7);
    let opt_took = t.elapsed();
    match &opt {
        Ok(rep) => report(2, "optimization", c2(rep, opt_took), opt_took),
        Err(err) => report(2, "optimization", Err(err.to_string()), opt_took),
    }

    let (o, d) = timed(&c3);
    report(3, "special-function oracles", o, d);
    let (o, d) = timed(&c4);
    report(4, "capacity oracle", o, d);
    let (o, d) = timed(&c5);
    report(5, "trajectory", o, d);
    let (o, d) = timed(&c6);
    report(6, "geometry", o, d);
    let t = Instant::now();
    let o = match &opt {
        Ok(rep) => c7(rep),
        Err(err) => Err(format!("no optimum: {err}")),
    };
    report(7, "inradius", o, t.elapsed());
    let (o, d) = timed(&c8);
    report(8, "harmonic symmetry", o, d);
    let (o, d) = timed(&c9);
    report(9, "determinism", o, d);

    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
