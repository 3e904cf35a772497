//! The `torsion-lab` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::census::{census_csv, decimal6, density_ratio, fit_exponent, run_census};
use crate::divpoly::{division_poly, primitive_at, primitive_division_poly};
use crate::error::{Error, Result};
use crate::exactnum::{Field, QuadField, QuadScalar, Rational};
use crate::families::{
    family_for, registry_load, sample_specializations, verify_family, Admission, FamilySpec, VerificationReport,
    BUNDLED_REGISTRY,
};
use crate::galois::{
    conjugate_containment, cycle_types, distribution_distance, enumerate_group, frobenius_sample, group_index,
    partition_label, CycleTypeDistribution, Variant,
};
use crate::torsion::{condition_p, torsion_subgroup_with, twist_classes, TorsionConfig};
use crate::weierstrass::{split_pair, Curve, Point};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "TORSION_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "torsion-lab",
    version,
    about = "Torsion of elliptic curves y^2 = x^3 + Ax + B over Q and Q(sqrt d)"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Work over Q(sqrt(D)) instead of Q (D squarefree, not 0 or 1).
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "D")]
    pub field: Option<i64>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add decimal renderings next to exact rationals in reports.
    #[arg(long, global = true)]
    pub decimal: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a division polynomial.
    Divpoly {
        n: usize,
        /// Print psi_n (with y) instead of the primitive Psi_n.
        #[arg(long)]
        psi: bool,
        /// Specialize at a curve "A,B".
        #[arg(long, allow_hyphen_values = true, value_name = "A,B")]
        at: Option<String>,
    },
    /// Torsion subgroup of a curve "A,B".
    Torsion {
        #[arg(allow_hyphen_values = true, value_name = "A,B")]
        curve: String,
        /// Largest point order searched.
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Whether Psi_m splits and Psi_n has a root.
    Condp {
        #[arg(allow_hyphen_values = true, value_name = "A,B")]
        curve: String,
        m: usize,
        n: usize,
    },
    /// Quadratic twists with Z/m x Z/n torsion, modulo squares.
    Twists {
        #[arg(allow_hyphen_values = true, value_name = "A,B")]
        curve: String,
        m: usize,
        n: usize,
    },
    /// Genus-zero torsion families.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Matrix groups and Frobenius statistics.
    #[command(subcommand)]
    Galois(GaloisCommand),
    /// Torsion census of integral curves by height.
    Census {
        /// Ascending height cutoffs.
        #[arg(long, value_delimiter = ',', required = true)]
        heights: Vec<u64>,
        /// Skip models with p^4 | A and p^6 | B (the default).
        #[arg(long, conflicts_with = "raw")]
        minimal: bool,
        /// Keep non-minimal models.
        #[arg(long)]
        raw: bool,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Also print an exploratory growth exponent for "m,n".
        #[arg(long, value_name = "m,n")]
        fit: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// Verify the families in a registry file (built-ins and the bundled
    /// registry when no file is given).
    Verify {
        file: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Stream specialized curves as CSV "A,B,r,u".
    Gen {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GaloisCommand {
    /// Frobenius degree patterns of Psi_N modulo good primes.
    Sample {
        #[arg(allow_hyphen_values = true, value_name = "A,B")]
        curve: String,
        n: usize,
        #[arg(long, default_value_t = 1000)]
        primes: usize,
        /// Compare against Hbar_N(m, n); may be repeated.
        #[arg(long, value_name = "m,n")]
        compare: Vec<String>,
    },
    /// Order and cycle types of H_N(m, n) or a variant.
    Groups {
        modulus: u32,
        m: u32,
        n: u32,
        /// One of h, hbar, h1, h1bar.
        #[arg(long, default_value = "hbar")]
        variant: String,
    },
    /// Whether Hbar^1_N(m, n) lies in a conjugate of Hbar_N(m2, n2).
    Containment {
        modulus: u32,
        #[arg(value_name = "m,n")]
        first: String,
        #[arg(value_name = "m2,n2")]
        second: String,
    },
    /// Indices of H^1_N(m, n) in SL_2(Z/N), plain and modulo +-1.
    Index { modulus: u32, m: u32, n: u32 },
}

/// Run the command line with `argv` (program name first), writing results
/// to `out` and diagnostics to `err`. Returns the process exit code: 0 on
/// success, 1 on a domain error, 2 on a usage error.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Parse(_) | Error::InvalidArgument(_) => 2,
                _ => 1,
            }
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    let s = serde_json::to_string_pretty(v).expect("json value serializes");
    emit(out, &format!("{s}\n"))
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Divpoly { n, psi, at } => cmd_divpoly(cfg, *n, *psi, at.as_deref(), out),
        Command::Torsion { curve, max_order } => with_field(cfg, |ctx| cmd_torsion(cfg, ctx, curve, *max_order, out)),
        Command::Condp { curve, m, n } => with_field(cfg, |ctx| cmd_condp(cfg, ctx, curve, *m, *n, out)),
        Command::Twists { curve, m, n } => with_field(cfg, |ctx| cmd_twists(cfg, ctx, curve, *m, *n, out)),
        Command::Family(FamilyCommand::Verify { file, samples }) => {
            cmd_family_verify(cfg, file.as_deref(), *samples, out)
        }
        Command::Family(FamilyCommand::Gen { m, n, count }) => cmd_family_gen(cfg, *m, *n, *count, out),
        Command::Galois(g) => cmd_galois(cfg, g, out),
        Command::Census {
            heights,
            raw,
            out: path,
            fit,
            ..
        } => cmd_census(cfg, heights, !raw, path.as_deref(), fit.as_deref(), out),
    }
}

/// Object-safe stand-in for a field context.
enum FieldCtx {
    Rational,
    Quad(QuadField),
}

fn with_field(cfg: &RunConfig, task: impl FnOnce(&FieldCtx) -> Result<i32>) -> Result<i32> {
    match cfg.field {
        None => task(&FieldCtx::Rational),
        Some(d) => task(&FieldCtx::Quad(QuadField::new(d)?)),
    }
}

macro_rules! over_field {
    ($ctx:expr, $f:ident ( $($arg:expr),* )) => {
        match $ctx {
            FieldCtx::Rational => $f::<Rational>(&(), $($arg),*),
            FieldCtx::Quad(k) => $f::<QuadScalar>(k, $($arg),*),
        }
    };
}

fn field_json<F: Field>(ctx: &F::Ctx) -> Value {
    json!(F::describe(ctx))
}

fn curve_json<F: Field>(e: &Curve<F>) -> Value {
    json!({ "a": e.a().to_string(), "b": e.b().to_string() })
}

fn point_json<F: Field>(p: &Point<F>) -> Value {
    match (p.x(), p.y()) {
        (Some(x), Some(y)) => json!({ "x": x.to_string(), "y": y.to_string() }),
        _ => json!("inf"),
    }
}

fn parse_usize_pair(s: &str) -> Result<(usize, usize)> {
    let (a, b) = split_pair(s)?;
    let p = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("expected a positive integer, got '{t}'")))
    };
    Ok((p(a)?, p(b)?))
}

fn cmd_divpoly(cfg: &RunConfig, n: usize, psi: bool, at: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    match at {
        None => {
            let (text, degree, kind) = if psi {
                let p = division_poly(n as i64);
                (p.to_string(), p.x_degree().unwrap_or(0), "psi")
            } else {
                let p = primitive_division_poly(n)?;
                (p.to_string(), p.degree, "primitive")
            };
            if cfg.json {
                emit_json(
                    out,
                    &json!({ "n": n, "kind": kind, "degree": degree, "polynomial": text }),
                )?;
            } else {
                emit(out, &format!("{text}\n"))?;
            }
            Ok(0)
        }
        Some(curve) => with_field(cfg, |ctx| over_field!(ctx, divpoly_at(cfg, n, psi, curve, out))),
    }
}

fn divpoly_at<F: Field>(
    ctx: &F::Ctx,
    cfg: &RunConfig,
    n: usize,
    psi: bool,
    curve: &str,
    out: &mut dyn Write,
) -> Result<i32> {
    let e = Curve::<F>::parse(ctx, curve)?;
    let (text, coeffs, parity) = if psi {
        let p = crate::divpoly::division_poly_at(n as i64, e.a(), e.b());
        let t = if p.parity == 1 {
            format!("y*({})", p.poly)
        } else {
            p.poly.to_string()
        };
        (t, p.poly.coeffs().to_vec(), p.parity)
    } else {
        let p = primitive_at(n, e.a(), e.b())?;
        (p.to_string(), p.coeffs().to_vec(), 0)
    };
    if cfg.json {
        let c: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
        emit_json(
            out,
            &json!({
                "n": n,
                "kind": if psi { "psi" } else { "primitive" },
                "field": field_json::<F>(ctx),
                "curve": curve_json(&e),
                "y_parity": parity,
                "coefficients": c,
                "polynomial": text,
            }),
        )?;
    } else {
        emit(out, &format!("{text}\n"))?;
    }
    Ok(0)
}

fn cmd_torsion(
    cfg: &RunConfig,
    ctx: &FieldCtx,
    curve: &str,
    max_order: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    over_field!(ctx, torsion_in(cfg, curve, max_order, out))
}

fn torsion_in<F: Field>(
    ctx: &F::Ctx,
    cfg: &RunConfig,
    curve: &str,
    max_order: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    let e = Curve::<F>::parse(ctx, curve)?;
    let mut tc = TorsionConfig::for_field::<F>();
    if let Some(k) = max_order {
        tc.max_order = k;
    }
    let t = torsion_subgroup_with(&e, tc)?;
    if cfg.json {
        let gens: Vec<Value> = t.generators.iter().map(point_json).collect();
        emit_json(
            out,
            &json!({
                "field": field_json::<F>(ctx),
                "curve": curve_json(&e),
                "m": t.m,
                "n": t.n,
                "order": t.order(),
                "group": t.group_name(),
                "generators": gens,
            }),
        )?;
    } else {
        emit(out, &format!("{t}\n"))?;
    }
    Ok(0)
}

fn cmd_condp(cfg: &RunConfig, ctx: &FieldCtx, curve: &str, m: usize, n: usize, out: &mut dyn Write) -> Result<i32> {
    over_field!(ctx, condp_in(cfg, curve, m, n, out))
}

fn condp_in<F: Field>(
    ctx: &F::Ctx,
    cfg: &RunConfig,
    curve: &str,
    m: usize,
    n: usize,
    out: &mut dyn Write,
) -> Result<i32> {
    let e = Curve::<F>::parse(ctx, curve)?;
    let holds = condition_p(&e, m, n)?;
    if cfg.json {
        emit_json(
            out,
            &json!({ "field": field_json::<F>(ctx), "curve": curve_json(&e), "m": m, "n": n, "holds": holds }),
        )?;
    } else {
        emit(out, &format!("{holds}\n"))?;
    }
    Ok(0)
}

fn cmd_twists(cfg: &RunConfig, ctx: &FieldCtx, curve: &str, m: usize, n: usize, out: &mut dyn Write) -> Result<i32> {
    over_field!(ctx, twists_in(cfg, curve, m, n, out))
}

fn twists_in<F: Field>(
    ctx: &F::Ctx,
    cfg: &RunConfig,
    curve: &str,
    m: usize,
    n: usize,
    out: &mut dyn Write,
) -> Result<i32> {
    let e = Curve::<F>::parse(ctx, curve)?;
    let r = twist_classes(&e, m, n)?;
    if cfg.json {
        let classes: Vec<Value> = r
            .classes
            .iter()
            .map(|c| {
                json!({
                    "d": c.d.to_string(),
                    "alpha": c.alpha.as_ref().map(|a| a.to_string()),
                    "verified": c.verified,
                })
            })
            .collect();
        emit_json(
            out,
            &json!({
                "field": field_json::<F>(ctx),
                "curve": curve_json(&e),
                "m": m,
                "n": n,
                "every_class_works": r.every_class_works,
                "zero_d_roots": r.zero_d_roots,
                "within_bounds": r.within_bounds(),
                "classes": classes,
            }),
        )?;
    } else {
        let mut text = String::new();
        if r.every_class_works {
            text.push_str("every twist works; D = 1 represents all classes\n");
        } else {
            for c in &r.classes {
                let alpha = c.alpha.as_ref().map(|a| a.to_string()).unwrap_or_default();
                let status = if c.verified { "verified" } else { "unverified" };
                text.push_str(&format!("D = {} (alpha = {alpha}) {status}\n", c.d));
            }
        }
        emit(out, &text)?;
    }
    Ok(0)
}

fn report_json(r: &VerificationReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn report_text(r: &VerificationReport) -> String {
    let mark = |b: bool| if b { "pass" } else { "FAIL" };
    let mut s = format!(
        "{} ({}, {}): {}\n",
        r.label,
        r.m,
        r.n,
        if r.passed() { "pass" } else { "FAIL" }
    );
    s.push_str(&format!(
        "  (i)   {}: {}\n",
        mark(r.splitting.passed),
        r.splitting.evidence
    ));
    s.push_str(&format!(
        "  (ii)  {}: {}\n",
        mark(r.root_identity.passed),
        r.root_identity.evidence
    ));
    s.push_str(&format!("  (iii) {}: {}\n", mark(r.degrees.passed), r.degrees.evidence));
    for f in &r.failures {
        s.push_str(&format!("  failure: {f}\n"));
    }
    s
}

fn cmd_family_verify(
    cfg: &RunConfig,
    file: Option<&std::path::Path>,
    samples: usize,
    out: &mut dyn Write,
) -> Result<i32> {
    let admissions: Vec<Admission> = match file {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            registry_load(&text, samples, cfg.seed)?
        }
        None => {
            let mut v: Vec<Admission> = [(1, 2), (2, 2), (1, 3), (3, 3)]
                .into_iter()
                .map(|(m, n)| {
                    let spec = crate::families::builtin_family(m, n)?;
                    let report = verify_family(&spec, samples, cfg.seed);
                    Ok(if report.passed() {
                        Admission::Admitted { spec, report }
                    } else {
                        Admission::Rejected {
                            label: spec.label.clone(),
                            reason: "verification failed".into(),
                            report: Some(report),
                        }
                    })
                })
                .collect::<Result<_>>()?;
            v.extend(registry_load(BUNDLED_REGISTRY, samples, cfg.seed)?);
            v
        }
    };
    let rejected = admissions.iter().filter(|a| !a.is_admitted()).count();
    if cfg.json {
        let entries: Vec<Value> = admissions
            .iter()
            .map(|a| {
                json!({
                    "label": a.label(),
                    "admitted": a.is_admitted(),
                    "reason": match a { Admission::Rejected { reason, .. } => Some(reason.clone()), _ => None },
                    "report": a.report().map(report_json),
                })
            })
            .collect();
        emit_json(
            out,
            &json!({ "samples": samples, "seed": cfg.seed, "families": entries }),
        )?;
    } else {
        let mut text = String::new();
        for a in &admissions {
            match a {
                Admission::Admitted { report, .. } => text.push_str(&report_text(report)),
                Admission::Rejected { label, reason, report } => {
                    text.push_str(&format!("{label}: rejected, {reason}\n"));
                    if let Some(r) = report {
                        text.push_str(&report_text(r));
                    }
                }
            }
        }
        text.push_str(&format!(
            "{} admitted, {rejected} rejected\n",
            admissions.len() - rejected
        ));
        emit(out, &text)?;
    }
    Ok(if rejected == 0 { 0 } else { 1 })
}

fn family_gen_rows<F: Field>(ctx: &F::Ctx, spec: &FamilySpec, count: usize, seed: u64) -> Result<Vec<[String; 4]>> {
    Ok(sample_specializations::<F>(spec, ctx, count, seed)?
        .into_iter()
        .map(|s| {
            [
                s.curve.a().to_string(),
                s.curve.b().to_string(),
                s.r.to_string(),
                s.u.to_string(),
            ]
        })
        .collect())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', ' ']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_family_gen(cfg: &RunConfig, m: usize, n: usize, count: usize, out: &mut dyn Write) -> Result<i32> {
    let spec = family_for(m, n)?;
    let rows = match (cfg.field, spec.required.quad_d()) {
        (Some(d), _) => family_gen_rows::<QuadScalar>(&QuadField::new(d)?, &spec, count, cfg.seed)?,
        (None, Some(d)) => family_gen_rows::<QuadScalar>(&QuadField::new(d)?, &spec, count, cfg.seed)?,
        (None, None) => family_gen_rows::<Rational>(&(), &spec, count, cfg.seed)?,
    };
    let mut text = String::from("A,B,r,u\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    emit(out, &text)?;
    Ok(0)
}

fn distribution_json(d: &CycleTypeDistribution) -> Value {
    let map: serde_json::Map<String, Value> =
        d.0.iter()
            .map(|(k, v)| (partition_label(k), json!(v.to_string())))
            .collect();
    Value::Object(map)
}

fn cmd_galois(cfg: &RunConfig, cmd: &GaloisCommand, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        GaloisCommand::Sample {
            curve,
            n,
            primes,
            compare,
        } => {
            let e = Curve::<Rational>::parse(&(), curve)?;
            let sample =
                crate::par::with_threads(cfg.threads, || frobenius_sample(e.a(), e.b(), *n, *primes, cfg.seed))?;
            let empirical = sample.distribution();
            let targets: Vec<(usize, usize)> = if compare.is_empty() {
                vec![(1, 1)]
            } else {
                compare.iter().map(|s| parse_usize_pair(s)).collect::<Result<_>>()?
            };
            let mut comparisons = Vec::new();
            for (m, k) in targets {
                let g = enumerate_group(*n as u32, m as u32, k as u32, Variant::HBar)?;
                let theory = cycle_types(&g);
                let tv = distribution_distance(&empirical, &theory);
                let mut entry = json!({
                    "m": m,
                    "n": k,
                    "group": format!("Hbar_{}({m},{k})", n),
                    "group_order": g.order(),
                    "distribution": distribution_json(&theory),
                    "tv_distance": tv.to_string(),
                });
                if cfg.decimal {
                    entry["tv_distance_decimal"] = json!(decimal6(&tv));
                }
                comparisons.push(entry);
            }
            let report = json!({
                "curve": { "a": sample.a.to_string(), "b": sample.b.to_string() },
                "n": n,
                "seed": cfg.seed,
                "primes_used": sample.patterns.len(),
                "first_prime": sample.patterns.first().map(|p| p.0),
                "last_prime": sample.patterns.last().map(|p| p.0),
                "excluded_primes": sample.excluded,
                "empirical": distribution_json(&empirical),
                "comparisons": comparisons,
            });
            emit_json(out, &report)?;
            Ok(0)
        }
        GaloisCommand::Groups { modulus, m, n, variant } => {
            let v = Variant::parse(variant)?;
            let g = enumerate_group(*modulus, *m, *n, v)?;
            let d = cycle_types(&g);
            if cfg.json {
                emit_json(
                    out,
                    &json!({ "modulus": modulus, "m": m, "n": n, "variant": v.to_string(), "order": g.order(), "cycle_types": distribution_json(&d) }),
                )?;
            } else {
                let mut text = format!("{v}_{modulus}({m},{n}): order {}\n", g.order());
                for (k, f) in &d.0 {
                    text.push_str(&format!("  {}: {f}\n", partition_label(k)));
                }
                emit(out, &text)?;
            }
            Ok(0)
        }
        GaloisCommand::Containment { modulus, first, second } => {
            let (m, n) = parse_usize_pair(first)?;
            let (m2, n2) = parse_usize_pair(second)?;
            let holds = conjugate_containment(*modulus, m as u32, n as u32, m2 as u32, n2 as u32)?;
            if cfg.json {
                emit_json(
                    out,
                    &json!({ "modulus": modulus, "first": [m, n], "second": [m2, n2], "contained": holds }),
                )?;
            } else {
                emit(out, &format!("{holds}\n"))?;
            }
            Ok(0)
        }
        GaloisCommand::Index { modulus, m, n } => {
            let idx = group_index(*modulus, *m, *n)?;
            if cfg.json {
                emit_json(
                    out,
                    &json!({ "modulus": modulus, "m": m, "n": n, "plain": idx.plain, "mod_pm": idx.mod_pm }),
                )?;
            } else {
                emit(out, &format!("plain {}, mod +-1 {}\n", idx.plain, idx.mod_pm))?;
            }
            Ok(0)
        }
    }
}

fn cmd_census(
    cfg: &RunConfig,
    heights: &[u64],
    minimal: bool,
    path: Option<&std::path::Path>,
    fit: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32> {
    let rows = run_census(heights, minimal, cfg.threads)?;
    let csv = census_csv(&rows);
    match path {
        Some(p) => fs::write(p, &csv).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display())))?,
        None => emit(out, &csv)?,
    }
    if let Some(pair) = fit {
        let (m, n) = parse_usize_pair(pair)?;
        let f = fit_exponent(&rows, m, n)?;
        let points = density_ratio(&rows, m, n)?.len();
        emit(
            out,
            &format!(
                "exploratory fit for ({m},{n}): contains_count ~ X^{:.4} (rms residual {:.4}, {points} rows)\n",
                f.slope, f.residual
            ),
        )?;
    }
    Ok(0)
}
