mod input;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use pm_core::operators::{kernel_basis, kernel_rank_check, laplace_poly, AlphaConvention};
use pm_core::restrict::{star_disk, star_sphere, DiagonalPoint, Target};
use pm_core::star::{asym_coeffs, poisson_bracket, star_eval, BoundMode, StarParams};
use pm_core::suites::{verify_suite, Suite};
use pm_core::{parse_expression, pm_derive, pm_tilde, ExtPoint2, OmegaFunction, PMethod, PmError, Slot};

use input::Sweep;
use report::{Format, Report};

/// Peschl–Minda operators and the Wick star product on Ω.
#[derive(Parser, Debug)]
#[command(name = "pm", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// D^{m,n} f, symbolically or at a point.
    Derive(DeriveArgs),
    /// D̃^{m,n} f = (z/w)^{n-m} D^{n,m} f.
    Tilde(DeriveArgs),
    /// Coefficients of P_{m,n}.
    Poly {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Use the boundary weight α_{n,0} = n!(n-1)! instead of 0.
        #[arg(long)]
        factorial_alpha: bool,
    },
    /// Generators of ker D_z^{n+1} or ker D_w^{n+1}.
    Kernel {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "z", value_parser = parse_slot)]
        slot: Slot,
        /// Largest |exponent| of the monomial grid.
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
    },
    /// (f⋆_ħ g)(p) with a tail bound.
    Star(StarArgs),
    /// Star product on the disk, w = z̄.
    StarDisk(DiagonalArgs),
    /// Star product on the sphere, w = -z̄.
    StarSphere(DiagonalArgs),
    /// Asymptotic coefficients a_0 … a_N.
    Asym {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, value_parser = input::point)]
        at: Option<ExtPoint2<Complex64>>,
        #[command(flatten)]
        series: SeriesArgs,
        /// With --at and --sweep, tabulate |f⋆g - Σ_{n≤N} ħ^n a_n| along the ray.
        #[arg(long, value_parser = input::sweep)]
        sweep: Option<Sweep>,
        #[arg(long, default_value_t = 0.0)]
        ray: f64,
    },
    /// Poisson bracket {f, g}.
    Poisson {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, value_parser = input::point)]
        at: Option<ExtPoint2<Complex64>>,
    },
    /// Evaluate an expression at a point.
    Eval {
        #[arg(long)]
        expr: String,
        #[arg(long, value_parser = input::point)]
        at: ExtPoint2<Complex64>,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct DeriveArgs {
    #[arg(long)]
    expr: String,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value = "explicit", value_parser = parse_method)]
    method: PMethod,
    #[arg(long, value_parser = input::point)]
    at: Option<ExtPoint2<Complex64>>,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, value_parser = input::complex)]
    hbar: Option<Complex64>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Series budget; defaults to PM_MAX_TERMS, then 200.
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long, default_value = "certified", value_parser = parse_mode)]
    mode: BoundMode,
    /// Cauchy radius for certified bounds.
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Args, Debug)]
struct StarArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
    #[arg(long, value_parser = input::point)]
    at: ExtPoint2<Complex64>,
    #[command(flatten)]
    series: SeriesArgs,
    /// Tabulate over ħ = t·e^{i·ray}, e.g. hbar=1e-1:1e-4:log:10.
    #[arg(long, value_parser = input::sweep)]
    sweep: Option<Sweep>,
    #[arg(long, default_value_t = 0.0)]
    ray: f64,
}

#[derive(Args, Debug)]
struct DiagonalArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
    #[arg(long, value_parser = input::complex)]
    at: Complex64,
    #[command(flatten)]
    series: SeriesArgs,
}

fn parse_slot(s: &str) -> Result<Slot, String> {
    match s {
        "z" => Ok(Slot::Z),
        "w" => Ok(Slot::W),
        _ => Err(format!("slot must be z or w, got '{s}'")),
    }
}

fn parse_method(s: &str) -> Result<PMethod, String> {
    s.parse().map_err(|e: PmError| e.to_string())
}

fn parse_mode(s: &str) -> Result<BoundMode, String> {
    s.parse().map_err(|e: PmError| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: PmError| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(PmError),
}

impl From<PmError> for Failure {
    fn from(e: PmError) -> Self {
        Failure::Compute(e)
    }
}

fn expression(text: &str, flag: &str) -> Result<OmegaFunction, Failure> {
    parse_expression(text).map_err(|e| match e {
        PmError::SyntaxError { pos, ref msg } => {
            Failure::Usage(format!("--{flag}: syntax error at position {pos}: {msg}\n  {text}\n  {}^", " ".repeat(pos)))
        }
        other => Failure::Compute(other),
    })
}

fn c_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn real_text(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn c_text(c: Complex64) -> String {
    match c.im {
        im if im == 0.0 => real_text(c.re),
        im if im < 0.0 => format!("{}-{}i", real_text(c.re), real_text(-im)),
        im => format!("{}+{}i", real_text(c.re), real_text(im)),
    }
}

fn max_terms(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("PM_MAX_TERMS") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("PM_MAX_TERMS='{v}' is not a positive integer"))),
        Err(_) => Ok(200),
    }
}

fn params(s: &SeriesArgs, hbar: Complex64) -> Result<StarParams, Failure> {
    let mut p = StarParams::new(hbar).with_tol(s.tol).with_max_terms(max_terms(s.max_terms)?).with_mode(s.mode);
    if let Some(r) = s.radius {
        p = p.with_radius(r);
    }
    Ok(p)
}

fn required_hbar(s: &SeriesArgs) -> Result<Complex64, Failure> {
    s.hbar.ok_or_else(|| Failure::Usage("--hbar is required".into()))
}

fn derive(a: &DeriveArgs, tilde: bool) -> Result<Report, Failure> {
    let f = expression(&a.expr, "expr")?;
    let d = if tilde { pm_tilde(&f, a.m, a.n)? } else { pm_derive(&f, a.m, a.n, a.method)? };
    let mut obj = json!({ "m": a.m, "n": a.n, "result": d.to_string(), "function": d.to_json_value() });
    if !tilde {
        obj["method"] = json!(a.method.name());
    }
    let mut text = d.to_string();
    if let Some(p) = &a.at {
        let v = d.evaluate(p)?;
        obj["value"] = c_json(v);
        text = format!("{text}\nvalue: {}", c_text(v));
    }
    Ok(Report::Record { json: obj, text })
}

fn star_record(r: &pm_core::star::StarResult, hbar: Complex64) -> Report {
    let mut obj = serde_json::to_value(r).expect("json");
    obj["hbar"] = c_json(hbar);
    let text = format!("value: {}\ntail_bound: {:e}\nterms: {}\nmode: {}", c_text(r.value), r.tail_bound, r.terms, r.mode);
    Report::Record { json: obj, text }
}

fn star(a: &StarArgs) -> Result<Report, Failure> {
    let f = expression(&a.f, "f")?;
    let g = expression(&a.g, "g")?;
    let Some(sweep) = &a.sweep else {
        let hbar = required_hbar(&a.series)?;
        return Ok(star_record(&star_eval(&f, &g, &a.at, &params(&a.series, hbar)?)?, hbar));
    };
    let dir = Complex64::from_polar(1.0, a.ray);
    let mut rows = Vec::new();
    for &t in &sweep.values {
        let hbar = dir * t;
        let r = star_eval(&f, &g, &a.at, &params(&a.series, hbar)?)?;
        rows.push(vec![json!(hbar.re), json!(hbar.im), json!(r.value.re), json!(r.value.im), json!(r.tail_bound), json!(r.terms)]);
    }
    let header = ["hbar_re", "hbar_im", "value_re", "value_im", "tail_bound", "terms"].map(String::from).to_vec();
    Ok(Report::Table { header, rows })
}

fn diagonal(a: &DiagonalArgs, target: Target) -> Result<Report, Failure> {
    let f = expression(&a.f, "f")?;
    let g = expression(&a.g, "g")?;
    let hbar = required_hbar(&a.series)?;
    let p = DiagonalPoint::new(a.at, target)?;
    let prm = params(&a.series, hbar)?;
    let r = if target == Target::Disk { star_disk(&f, &g, &p, &prm)? } else { star_sphere(&f, &g, &p, &prm)? };
    let mut obj = serde_json::to_value(&r).expect("json");
    obj["hbar"] = c_json(hbar);
    let text = format!(
        "value: {}\ntail_bound: {:e}\nterms: {}\none_variable_value: {}",
        c_text(r.value_c64()),
        r.tail_bound,
        r.terms,
        c_text(Complex64::new(r.one_variable_value[0], r.one_variable_value[1]))
    );
    Ok(Report::Record { json: obj, text })
}

#[allow(clippy::too_many_arguments)]
fn asym(
    f: &str,
    g: &str,
    order: u32,
    at: &Option<ExtPoint2<Complex64>>,
    series: &SeriesArgs,
    sweep: &Option<Sweep>,
    ray: f64,
) -> Result<Report, Failure> {
    let f = expression(f, "f")?;
    let g = expression(g, "g")?;
    let s = asym_coeffs(&f, &g, order);
    if let Some(sweep) = sweep {
        let p = at.as_ref().ok_or_else(|| Failure::Usage("--sweep needs --at".into()))?;
        let dir = Complex64::from_polar(1.0, ray);
        let mut rows = Vec::new();
        for &t in &sweep.values {
            let hbar = dir * t;
            let exact = star_eval(&f, &g, p, &params(series, hbar)?)?;
            let partial = s.eval(p, hbar, order as usize)?;
            rows.push(vec![json!(t), json!(hbar.re), json!(hbar.im), json!((exact.value - partial).norm()), json!(exact.tail_bound)]);
        }
        let header = ["hbar_abs", "hbar_re", "hbar_im", "remainder", "tail_bound"].map(String::from).to_vec();
        return Ok(Report::Table { header, rows });
    }
    let mut lines: Vec<String> = s.coefficients.iter().enumerate().map(|(k, a)| format!("a_{k} = {a}")).collect();
    let mut obj = json!({ "order": order, "coefficients": s.coefficients.iter().map(|a| a.to_string()).collect::<Vec<_>>() });
    if let Some(p) = at {
        let vals = s.coefficients.iter().map(|a| a.evaluate(p)).collect::<pm_core::Result<Vec<_>>>()?;
        lines.extend(vals.iter().enumerate().map(|(k, v)| format!("a_{k}(p) = {}", c_text(*v))));
        obj["values"] = Value::Array(vals.into_iter().map(c_json).collect());
        if let Some(hbar) = series.hbar {
            let partial = s.eval(p, hbar, order as usize)?;
            obj["partial_sum"] = c_json(partial);
            lines.push(format!("partial_sum = {}", c_text(partial)));
        }
    }
    Ok(Report::Record { json: obj, text: lines.join("\n") })
}

fn run(cli: &Cli) -> Result<(Report, bool), Failure> {
    let report = match &cli.command {
        Command::Derive(a) => derive(a, false)?,
        Command::Tilde(a) => derive(a, true)?,
        Command::Poly { m, n, factorial_alpha } => {
            let conv = if *factorial_alpha { AlphaConvention::Factorial } else { AlphaConvention::Corrected };
            let p = laplace_poly(*m, *n, conv);
            let coeffs: Vec<Value> = p
                .coeffs()
                .iter()
                .map(|c| c.to_string().parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::String(c.to_string())))
                .collect();
            let listed = coeffs.iter().map(Value::to_string).collect::<Vec<_>>().join(", ");
            let text = format!("coefficients: [{listed}]\npolynomial: {p}");
            Report::Record { json: json!({ "m": m, "n": n, "coefficients": coeffs, "polynomial": p.to_string() }), text }
        }
        Command::Kernel { n, slot, cutoff } => {
            let gens = kernel_basis(*n, *slot, *cutoff);
            let rank = kernel_rank_check(*n, *slot, *cutoff);
            let names: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
            let text = format!(
                "{}\nkernel_dim: {} (expected {})\ngenerators_annihilated: {}",
                names.join("\n"),
                rank.kernel_dim,
                rank.expected_kernel_dim,
                rank.generators_annihilated
            );
            Report::Record { json: json!({ "n": n, "cutoff": cutoff, "generators": names, "rank": rank }), text }
        }
        Command::Star(a) => star(a)?,
        Command::StarDisk(a) => diagonal(a, Target::Disk)?,
        Command::StarSphere(a) => diagonal(a, Target::Sphere)?,
        Command::Asym { f, g, order, at, series, sweep, ray } => asym(f, g, *order, at, series, sweep, *ray)?,
        Command::Poisson { f, g, at } => {
            let b = poisson_bracket(&expression(f, "f")?, &expression(g, "g")?);
            let mut obj = json!({ "result": b.to_string(), "function": b.to_json_value() });
            let mut text = b.to_string();
            if let Some(p) = at {
                let v = b.evaluate(p)?;
                obj["value"] = c_json(v);
                text = format!("{text}\nvalue: {}", c_text(v));
            }
            Report::Record { json: obj, text }
        }
        Command::Eval { expr, at } => {
            let v = expression(expr, "expr")?.evaluate(at)?;
            Report::Record { json: json!({ "value": c_json(v) }), text: c_text(v) }
        }
        Command::Verify { suite, seed } => {
            let r = verify_suite(*suite, *seed)?;
            if cli.format == Format::Csv {
                let header = ["property", "instances", "max_deviation", "passed"].map(String::from).to_vec();
                let rows = r
                    .properties
                    .iter()
                    .map(|p| vec![json!(p.name), json!(p.instances), json!(p.max_deviation), json!(p.passed)])
                    .collect();
                return Ok((Report::Table { header, rows }, r.passed));
            }
            let mut lines: Vec<String> = r
                .properties
                .iter()
                .map(|p| {
                    let tag = if p.passed { "PASS" } else { "FAIL" };
                    format!("{tag} {} instances={} max_deviation={:e}", p.name, p.instances, p.max_deviation)
                })
                .collect();
            lines.push(format!("{}: {}", r.suite, if r.passed { "pass" } else { "fail" }));
            let passed = r.passed;
            return Ok((Report::Record { json: serde_json::to_value(&r).expect("json"), text: lines.join("\n") }, passed));
        }
    };
    Ok((report, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, passed)) => {
            print!("{}", report.render(cli.format));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            let obj = json!({ "error": { "code": e.code(), "message": e.to_string() } });
            let report = Report::Record { json: obj, text: format!("error[{}]: {e}", e.code()) };
            print!("{}", report.render(cli.format));
            ExitCode::from(1)
        }
    }
}
