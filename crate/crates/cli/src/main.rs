//! `torus-obs`: experiment driver for the torus observability laboratory.
//!
//! Exit status: 0 when every checked statement holds, 2 when one is
//! falsified, 1 on usage, I/O or numerical errors.

mod output;
mod plot;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use torus_obs::geodesics::{self, TorusPoint};
use torus_obs::lattice::{self, DirectionClass, PrimitiveDirection, UnitDirection, DEFAULT_C};
use torus_obs::observability as obs;
use torus_obs::spectral::{self, FourierField2D};
use torus_obs::PERIOD;

use output::{num, Format, OutputArgs, Report, Table};

#[derive(Parser)]
#[command(
    name = "torus-obs",
    version,
    about = "Observability experiments for the Schrödinger flow on the flat torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the eps-rational directions.
    Enumerate(EnumerateArgs),
    /// Classify a direction as rational or irrational.
    Classify(ClassifyArgs),
    /// Best rational approximation of a number in (0, 1).
    Approx(ApproxArgs),
    /// Sums of two squares r2(N) for N <= n-max.
    R2(R2Args),
    /// Angular windows around eps-rational directions and their disjointness.
    Windows(WindowsArgs),
    /// First hitting time of a single geodesic into B(0, r).
    Hit(HitArgs),
    /// Check the hitting-time bound over sampled points and irrational directions.
    HitVerify(HitVerifyArgs),
    /// Section points of a closed geodesic on {x1 = 0}.
    Sections(SectionsArgs),
    /// Unitarity, group law, full-period identity and defect bound on random fields.
    PropagateCheck(PropagateCheckArgs),
    /// Fourier coefficients of the ball indicator.
    BallCoeff(BallCoeffArgs),
    /// Eigenspace Gramian for one shell |k|^2 = N.
    Gramian(GramianArgs),
    /// Truncated observability constant.
    ObsConst(ObsConstArgs),
    /// Check the observability inequality on random truncated states.
    VerifyIneq(VerifyIneqArgs),
    /// Nazarov-Turan extremal ratios.
    Nazarov(NazarovArgs),
    /// Extremal constant of the 1-D Helmholtz estimate.
    Helmholtz1d(HelmholtzArgs),
    /// Growth of the observability constant as eps decreases.
    Scaling(ScalingArgs),
    /// Render two columns of a report as SVG.
    Plot(PlotArgs),
}

#[derive(Args, Serialize)]
struct EnumerateArgs {
    #[arg(long)]
    eps: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct ClassifyArgs {
    #[arg(long)]
    eps: f64,
    /// Direction angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    angle: f64,
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct ApproxArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    n_max: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct R2Args {
    #[arg(long)]
    n_max: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct WindowsArgs {
    #[arg(long)]
    eps: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct HitArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, allow_hyphen_values = true)]
    y: f64,
    #[arg(long, allow_hyphen_values = true)]
    angle: f64,
    #[arg(long)]
    radius: f64,
    #[arg(long)]
    horizon: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct HitVerifyArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, default_value_t = 50)]
    dirs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct SectionsArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, allow_hyphen_values = true)]
    b: i64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct PropagateCheckArgs {
    /// Mode cutoff K (fields live on |k|_inf <= K).
    #[arg(long, default_value_t = 8)]
    k: u32,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct BallCoeffArgs {
    #[arg(long)]
    eps: f64,
    /// Tabulate modes with 0 <= m1, m2 <= m-max.
    #[arg(long, default_value_t = 4)]
    m_max: u32,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct GramianArgs {
    /// Shell index N = |k|^2.
    #[arg(long)]
    n: u64,
    #[arg(long)]
    eps: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct ObsConstArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    n_max: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct VerifyIneqArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    n_max: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    quad_points: usize,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct NazarovArgs {
    /// Measure |E| of the centered interval.
    #[arg(long, default_value_t = 0.1)]
    measure: f64,
    /// Largest number of consecutive frequencies {0, ..., n-1}.
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Also report the ratio for this explicit frequency set.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    freqs: Option<Vec<i64>>,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct HelmholtzArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    h: f64,
    #[arg(long, allow_hyphen_values = true)]
    z: f64,
    #[arg(long, default_value_t = 200)]
    k: u32,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct ScalingArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    eps_list: Vec<f64>,
    #[arg(long)]
    n_max: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct PlotArgs {
    /// CSV report, or JSON report with a `rows` array.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = plot::Kind::Line)]
    kind: plot::Kind,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long)]
    log_x: bool,
    #[arg(long)]
    log_y: bool,
    #[arg(long)]
    out: PathBuf,
}

type CmdResult = Result<bool, String>;

fn counters(pairs: &[(&'static str, u64)]) -> BTreeMap<&'static str, u64> {
    pairs.iter().copied().collect()
}

fn finish<T: Serialize, C: Serialize>(
    name: &str,
    config: &C,
    output: &OutputArgs,
    report: Report<T>,
    start: Instant,
) -> CmdResult {
    let format = output.format.unwrap_or(report.default_format);
    let bytes = output::render(name, &report, format).map_err(|e| e.to_string())?;
    output::write_outputs(
        name,
        config,
        output.out.as_deref(),
        format,
        &bytes,
        &report.counters,
        start.elapsed(),
    )
    .map_err(|e| format!("writing report: {e}"))?;
    Ok(report.holds)
}

fn lib<T>(r: torus_obs::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn enumerate(args: &EnumerateArgs) -> Result<Report<impl Serialize>, String> {
    let set = lib(lattice::enumerate_eps_rational(args.eps))?;
    let mut table = Table::new(&["a", "b", "norm_sq", "angle"]);
    for d in set.directions() {
        table.push(vec![
            d.a().to_string(),
            d.b().to_string(),
            d.norm_sq().to_string(),
            num(d.angle()),
        ]);
    }
    let n = set.len() as u64;
    Ok(Report {
        body: set,
        table,
        default_format: Format::Csv,
        counters: counters(&[("directions", n)]),
        holds: true,
    })
}

#[derive(Serialize)]
struct ClassifyBody {
    eps: f64,
    #[serde(rename = "C")]
    c: f64,
    angle: f64,
    class: DirectionClass,
}

fn classify(args: &ClassifyArgs) -> Result<Report<impl Serialize>, String> {
    let xi = UnitDirection::from_angle(args.angle);
    let class = lib(lattice::classify_direction(xi, args.eps, args.c))?;
    let mut table = Table::new(&["angle", "class", "eta_a", "eta_b", "gap", "margin"]);
    match class {
        DirectionClass::Rational { eta, gap } => table.push(vec![
            num(xi.angle()),
            "rational".into(),
            eta.a().to_string(),
            eta.b().to_string(),
            num(gap),
            String::new(),
        ]),
        DirectionClass::Irrational { margin } => table.push(vec![
            num(xi.angle()),
            "irrational".into(),
            String::new(),
            String::new(),
            String::new(),
            num(margin),
        ]),
    }
    Ok(Report {
        body: ClassifyBody {
            eps: args.eps,
            c: args.c,
            angle: xi.angle(),
            class,
        },
        table,
        default_format: Format::Json,
        counters: BTreeMap::new(),
        holds: true,
    })
}

#[derive(Serialize)]
struct ApproxBody {
    alpha: f64,
    n_max: u64,
    #[serde(flatten)]
    approx: lattice::RationalApprox,
    dirichlet_bound: f64,
}

fn approx(args: &ApproxArgs) -> Result<Report<impl Serialize>, String> {
    let r = lib(lattice::best_rational_approx(args.alpha, args.n_max))?;
    let bound = 1.0 / (args.n_max as f64 + 1.0);
    let mut table = Table::new(&["alpha", "n_max", "n", "m", "err", "dirichlet_bound"]);
    table.push(vec![
        num(args.alpha),
        args.n_max.to_string(),
        r.n.to_string(),
        r.m.to_string(),
        num(r.err),
        num(bound),
    ]);
    Ok(Report {
        holds: r.err <= bound,
        body: ApproxBody {
            alpha: args.alpha,
            n_max: args.n_max,
            approx: r,
            dirichlet_bound: bound,
        },
        table,
        default_format: Format::Json,
        counters: BTreeMap::new(),
    })
}

#[derive(Serialize)]
struct R2Row {
    #[serde(rename = "N")]
    n: u64,
    r2: u64,
}

#[derive(Serialize)]
struct R2Body {
    n_max: u64,
    rows: Vec<R2Row>,
}

fn r2(args: &R2Args) -> Result<Report<impl Serialize>, String> {
    let rows: Vec<R2Row> = (0..=args.n_max)
        .map(|n| R2Row {
            n,
            r2: lattice::r2_count(n),
        })
        .collect();
    let mut table = Table::new(&["N", "r2"]);
    for r in &rows {
        table.push(vec![r.n.to_string(), r.r2.to_string()]);
    }
    let n = rows.len() as u64;
    Ok(Report {
        body: R2Body {
            n_max: args.n_max,
            rows,
        },
        table,
        default_format: Format::Csv,
        counters: counters(&[("rows", n)]),
        holds: true,
    })
}

fn windows(args: &WindowsArgs) -> Result<Report<impl Serialize>, String> {
    let rep = lib(lattice::angular_windows(args.eps))?;
    let mut table = Table::new(&["a", "b", "center", "half_width"]);
    for w in &rep.windows {
        table.push(vec![
            w.center.a().to_string(),
            w.center.b().to_string(),
            num(w.center.angle()),
            num(w.half_width),
        ]);
    }
    let c = counters(&[
        ("windows", rep.windows.len() as u64),
        ("overlaps", rep.overlaps.len() as u64),
    ]);
    Ok(Report {
        holds: rep.disjoint(),
        body: rep,
        table,
        default_format: Format::Csv,
        counters: c,
    })
}

fn hit(args: &HitArgs) -> Result<Report<impl Serialize>, String> {
    let rec = lib(geodesics::first_hit_time(
        TorusPoint::new(args.x, args.y),
        UnitDirection::from_angle(args.angle),
        args.radius,
        args.horizon,
    ))?;
    let mut table = Table::new(&["x", "y", "angle", "radius", "horizon", "hit_time"]);
    table.push(vec![
        num(rec.start.x()),
        num(rec.start.y()),
        num(rec.direction.angle()),
        num(rec.radius),
        num(rec.horizon),
        rec.hit_time.map(num).unwrap_or_default(),
    ]);
    Ok(Report {
        body: rec,
        table,
        default_format: Format::Json,
        counters: BTreeMap::new(),
        holds: true,
    })
}

fn hit_verify(args: &HitVerifyArgs) -> Result<Report<impl Serialize>, String> {
    let rep = lib(geodesics::verify_hitting_bound(
        args.eps,
        args.c,
        args.points,
        args.dirs,
        args.seed,
    ))?;
    let mut table = Table::new(&["x", "y", "angle", "hit_time"]);
    for c in &rep.counterexamples {
        table.push(vec![
            num(c.x),
            num(c.y),
            num(c.angle),
            c.hit_time.map(num).unwrap_or_default(),
        ]);
    }
    let c = counters(&[
        ("samples", rep.n_samples as u64),
        ("rejected_directions", rep.n_rejected as u64),
        ("counterexamples", rep.counterexamples.len() as u64),
        ("seed", args.seed),
    ]);
    Ok(Report {
        holds: rep.pass,
        body: rep,
        table,
        default_format: Format::Json,
        counters: c,
    })
}

fn sections(args: &SectionsArgs) -> Result<Report<impl Serialize>, String> {
    let eta = lib(PrimitiveDirection::new(args.a, args.b))?;
    let rep = geodesics::closed_geodesic_sections(eta);
    let mut table = Table::new(&["x", "y"]);
    for p in &rep.points {
        table.push(vec![num(p.x()), num(p.y())]);
    }
    let c = counters(&[("points", rep.points.len() as u64)]);
    Ok(Report {
        holds: rep.degenerate || rep.matches_expected,
        body: rep,
        table,
        default_format: Format::Json,
        counters: c,
    })
}

const EXACTNESS_TOL: f64 = 1e-13;

#[derive(Serialize)]
struct PropagateBody {
    #[serde(rename = "K")]
    k: u32,
    samples: usize,
    seed: u64,
    tolerance: f64,
    max_unitarity: f64,
    max_group_law: f64,
    max_full_period: f64,
    defect_failures: usize,
    max_defect_ratio: f64,
    pass: bool,
}

fn max_diff(a: &FourierField2D, b: &FourierField2D) -> Result<f64, String> {
    Ok(lib(a.sub(b))?
        .modes()
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max))
}

fn propagate_check(args: &PropagateCheckArgs) -> Result<Report<impl Serialize>, String> {
    if args.k == 0 || args.samples == 0 {
        return Err("--k and --samples must be >= 1".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let kk = args.k as i64;
    let (mut unit, mut group, mut period, mut ratio) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut defect_failures = 0;
    for _ in 0..args.samples {
        let modes: Vec<((i64, i64), Complex64)> = (-kk..=kk)
            .flat_map(|a| (-kk..=kk).map(move |b| (a, b)))
            .map(|m| {
                (
                    m,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let u = lib(FourierField2D::from_modes(args.k, modes))?;
        let n = u.norm();
        let t = rng.gen_range(-10.0..10.0);
        unit = unit.max((spectral::propagate(&u, t).norm() - n).abs() / n);
        // dyadic times make s + t exact
        let s = rng.gen_range(-256i32..=256) as f64 / 65536.0;
        let t = rng.gen_range(-256i32..=256) as f64 / 65536.0;
        group = group.max(max_diff(
            &spectral::propagate(&spectral::propagate(&u, t), s),
            &spectral::propagate(&u, s + t),
        )?);
        period = period.max(max_diff(&spectral::propagate(&u, PERIOD), &u)?);
        let h = rng.gen_range(0.01..1.0);
        let t = rng.gen_range(-2.0..2.0);
        let chk = lib(spectral::propagation_defect_check(&u, h, t))?;
        if !chk.pass {
            defect_failures += 1;
        }
        if chk.rhs > 0.0 {
            ratio = ratio.max(chk.lhs / chk.rhs);
        }
    }
    let pass = unit <= EXACTNESS_TOL
        && group <= EXACTNESS_TOL
        && period <= EXACTNESS_TOL
        && defect_failures == 0;
    let mut table = Table::new(&["check", "max_error"]);
    table.push(vec!["unitarity".into(), num(unit)]);
    table.push(vec!["group_law".into(), num(group)]);
    table.push(vec!["full_period".into(), num(period)]);
    table.push(vec!["defect_ratio".into(), num(ratio)]);
    Ok(Report {
        body: PropagateBody {
            k: args.k,
            samples: args.samples,
            seed: args.seed,
            tolerance: EXACTNESS_TOL,
            max_unitarity: unit,
            max_group_law: group,
            max_full_period: period,
            defect_failures,
            max_defect_ratio: ratio,
            pass,
        },
        table,
        default_format: Format::Json,
        counters: counters(&[
            ("samples", args.samples as u64),
            ("defect_failures", defect_failures as u64),
            ("seed", args.seed),
        ]),
        holds: pass,
    })
}

#[derive(Serialize)]
struct CoeffRow {
    m1: i64,
    m2: i64,
    coeff: f64,
}

#[derive(Serialize)]
struct BallCoeffBody {
    eps: f64,
    rows: Vec<CoeffRow>,
}

fn ball_coeff(args: &BallCoeffArgs) -> Result<Report<impl Serialize>, String> {
    let m = args.m_max as i64;
    let mut rows = Vec::new();
    for m1 in 0..=m {
        for m2 in 0..=m {
            rows.push(CoeffRow {
                m1,
                m2,
                coeff: lib(spectral::ball_indicator_coeff(args.eps, (m1, m2)))?,
            });
        }
    }
    let mut table = Table::new(&["m1", "m2", "coeff"]);
    for r in &rows {
        table.push(vec![r.m1.to_string(), r.m2.to_string(), num(r.coeff)]);
    }
    let n = rows.len() as u64;
    Ok(Report {
        body: BallCoeffBody {
            eps: args.eps,
            rows,
        },
        table,
        default_format: Format::Csv,
        counters: counters(&[("rows", n)]),
        holds: true,
    })
}

#[derive(Serialize)]
struct GramianBody {
    #[serde(rename = "N")]
    n: u64,
    eps: f64,
    modes: Vec<(i64, i64)>,
    matrix: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
    lambda_min: f64,
}

fn gramian(args: &GramianArgs) -> Result<Report<impl Serialize>, String> {
    let g = lib(obs::eigenspace_gramian(args.n, args.eps))?;
    let eig = lib(g.eigen())?;
    let r = g.rank();
    let matrix: Vec<Vec<f64>> = (0..r)
        .map(|i| (0..r).map(|j| g.get(i, j)).collect())
        .collect();
    let mut table = Table::new(&["i", "j", "value"]);
    for (i, row) in matrix.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            table.push(vec![i.to_string(), j.to_string(), num(*v)]);
        }
    }
    Ok(Report {
        body: GramianBody {
            n: args.n,
            eps: args.eps,
            modes: g.basis().modes().to_vec(),
            matrix,
            lambda_min: eig.values[0],
            eigenvalues: eig.values,
        },
        table,
        default_format: Format::Json,
        counters: counters(&[("rank", r as u64)]),
        holds: true,
    })
}

fn obs_const(args: &ObsConstArgs) -> Result<Report<impl Serialize>, String> {
    let rep = lib(obs::observability_constant(args.eps, args.n_max))?;
    let mut table = Table::new(&["N", "rank", "lambda_min"]);
    for r in &rep.rows {
        table.push(vec![r.n.to_string(), r.rank.to_string(), num(r.lambda_min)]);
    }
    let c = counters(&[("eigenspaces", rep.rows.len() as u64)]);
    Ok(Report {
        holds: rep.constant >= 2.0 / (args.eps * args.eps) * (1.0 - 1e-12),
        body: rep,
        table,
        default_format: Format::Json,
        counters: c,
    })
}

fn verify_ineq(args: &VerifyIneqArgs) -> Result<Report<impl Serialize>, String> {
    let rep = lib(obs::verify_inequality_samples(
        args.eps,
        args.n_max,
        args.samples,
        args.seed,
        args.quad_points,
    ))?;
    let mut table = Table::new(&[
        "index",
        "norm_sq",
        "integral",
        "ratio",
        "max_cross_relative",
    ]);
    for f in &rep.failures {
        table.push(vec![
            f.index.to_string(),
            num(f.norm_sq),
            num(f.integral),
            num(f.ratio),
            num(f.max_cross_relative),
        ]);
    }
    let c = counters(&[
        ("samples", rep.n_samples as u64),
        ("failures", rep.failures.len() as u64),
        ("seed", args.seed),
    ]);
    Ok(Report {
        holds: rep.pass,
        body: rep,
        table,
        default_format: Format::Json,
        counters: c,
    })
}

#[derive(Serialize)]
struct NazarovBody {
    #[serde(flatten)]
    growth: obs::NazarovGrowth,
    #[serde(skip_serializing_if = "Option::is_none")]
    explicit: Option<ExplicitRatio>,
}

#[derive(Serialize)]
struct ExplicitRatio {
    freqs: Vec<i64>,
    ratio: f64,
}

fn nazarov(args: &NazarovArgs) -> Result<Report<impl Serialize>, String> {
    let growth = lib(obs::nazarov_growth(args.measure, args.n_max))?;
    let explicit = match &args.freqs {
        Some(f) => {
            let set = lib(obs::FrequencySet::new(f.clone()))?;
            let e = lib(obs::Interval1D::centered(0.0, args.measure))?;
            Some(ExplicitRatio {
                freqs: set.as_slice().to_vec(),
                ratio: lib(obs::nazarov_ratio(&set, &e))?,
            })
        }
        None => None,
    };
    let mut table = Table::new(&["n", "ratio", "log_ratio"]);
    for r in &growth.rows {
        table.push(vec![r.n.to_string(), num(r.ratio), num(r.log_ratio)]);
    }
    let c = counters(&[("rows", growth.rows.len() as u64)]);
    Ok(Report {
        body: NazarovBody { growth, explicit },
        table,
        default_format: Format::Json,
        counters: c,
        holds: true,
    })
}

#[derive(Serialize)]
struct HelmholtzBody {
    eps: f64,
    h: f64,
    z: f64,
    #[serde(rename = "K")]
    k: u32,
    c_star: f64,
    c_star_over_eps2: f64,
}

fn helmholtz(args: &HelmholtzArgs) -> Result<Report<impl Serialize>, String> {
    let c = lib(obs::helmholtz_1d_constant(args.eps, args.h, args.z, args.k))?;
    let body = HelmholtzBody {
        eps: args.eps,
        h: args.h,
        z: args.z,
        k: args.k,
        c_star: c,
        c_star_over_eps2: c / (args.eps * args.eps),
    };
    let mut table = Table::new(&["eps", "h", "z", "K", "c_star", "c_star_over_eps2"]);
    table.push(vec![
        num(body.eps),
        num(body.h),
        num(body.z),
        body.k.to_string(),
        num(body.c_star),
        num(body.c_star_over_eps2),
    ]);
    Ok(Report {
        body,
        table,
        default_format: Format::Json,
        counters: BTreeMap::new(),
        holds: true,
    })
}

fn scaling(args: &ScalingArgs) -> Result<Report<impl Serialize>, String> {
    let rep = lib(obs::scaling_study(&args.eps_list, args.n_max))?;
    let mut table = Table::new(&["eps", "inv_eps", "constant", "argmin_n"]);
    for r in &rep.rows {
        table.push(vec![
            num(r.eps),
            num(r.inv_eps),
            num(r.constant),
            r.argmin_n.to_string(),
        ]);
    }
    let c = counters(&[
        ("rows", rep.rows.len() as u64),
        ("fits", rep.fits.len() as u64),
    ]);
    Ok(Report {
        holds: rep.monotone(),
        body: rep,
        table,
        default_format: Format::Json,
        counters: c,
    })
}

fn plot_cmd(args: &PlotArgs, start: Instant) -> CmdResult {
    let cols = plot::read_columns(&args.input)?;
    let svg = plot::render_svg(
        &cols,
        &plot::PlotSpec {
            kind: args.kind,
            x: &args.x,
            y: &args.y,
            log_x: args.log_x,
            log_y: args.log_y,
        },
    )?;
    let rows = cols.values.first().map_or(0, Vec::len) as u64;
    std::fs::write(&args.out, svg).map_err(|e| format!("{}: {e}", args.out.display()))?;
    #[derive(Serialize)]
    struct PlotManifest<'a> {
        schema: &'static str,
        subcommand: &'static str,
        version: &'static str,
        config: &'a PlotArgs,
        outputs: Vec<String>,
        duration_secs: f64,
        counters: BTreeMap<&'static str, u64>,
    }
    let manifest = PlotManifest {
        schema: "manifest/v1",
        subcommand: "plot",
        version: env!("CARGO_PKG_VERSION"),
        config: args,
        outputs: vec![args.out.display().to_string()],
        duration_secs: start.elapsed().as_secs_f64(),
        counters: counters(&[("points", rows)]),
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| e.to_string())? + "\n";
    std::fs::write(output::manifest_path(&args.out), text).map_err(|e| e.to_string())?;
    Ok(true)
}

macro_rules! dispatch {
    ($name:literal, $args:expr, $f:ident, $start:expr) => {{
        let report = $f($args)?;
        finish($name, $args, &$args.output, report, $start)
    }};
}

fn run(cmd: &Command) -> CmdResult {
    let start = Instant::now();
    match cmd {
        Command::Enumerate(a) => dispatch!("enumerate", a, enumerate, start),
        Command::Classify(a) => dispatch!("classify", a, classify, start),
        Command::Approx(a) => dispatch!("approx", a, approx, start),
        Command::R2(a) => dispatch!("r2", a, r2, start),
        Command::Windows(a) => dispatch!("windows", a, windows, start),
        Command::Hit(a) => dispatch!("hit", a, hit, start),
        Command::HitVerify(a) => dispatch!("hit-verify", a, hit_verify, start),
        Command::Sections(a) => dispatch!("sections", a, sections, start),
        Command::PropagateCheck(a) => dispatch!("propagate-check", a, propagate_check, start),
        Command::BallCoeff(a) => dispatch!("ball-coeff", a, ball_coeff, start),
        Command::Gramian(a) => dispatch!("gramian", a, gramian, start),
        Command::ObsConst(a) => dispatch!("obs-const", a, obs_const, start),
        Command::VerifyIneq(a) => dispatch!("verify-ineq", a, verify_ineq, start),
        Command::Nazarov(a) => dispatch!("nazarov", a, nazarov, start),
        Command::Helmholtz1d(a) => dispatch!("helmholtz1d", a, helmholtz, start),
        Command::Scaling(a) => dispatch!("scaling", a, scaling, start),
        Command::Plot(a) => plot_cmd(a, start),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
