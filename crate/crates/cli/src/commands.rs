//! Subcommands and their dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use germforge::blowup::{blowup_vf, divisor_singularities};
use germforge::catalog::{classify, first_integral, make_normal_form, make_pair, Family};
use germforge::germ::{decompose, decomposition_residual, RationalFn};
use germforge::hirzebruch::{local_generators_at_p, phi_flow, psi_flow, FnChart, FnPoint};
use germforge::mr::{cauchy_coefficient, compare_holonomy, formal_holonomy, linearize};
use germforge::numflow::{elliptic_loop, homothety_period_ratio, leaf_period, Controls, LeafLoopSpec};
use germforge::onedim::{onedim_check, restrict_to_axis, siegel_closed_criterion, siegel_regular_test, straighten_regular, Axis, Status as Verdict};
use germforge::series::laurent_residue;
use germforge::{lie_bracket, GaussRat, GermError, Scalar, C64, DEFAULT_DEGREE};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dsl::{self, is_catalog_ref, parse_catalog_id, parse_constant, parse_jet1, parse_pair, parse_vector_field, ParseError};
use crate::report::{complex, field, float, jet1, jet2, rational, scalar, Config, Report, Status};
use crate::suite::{self, SuiteConfig};

/// Exit status for command-line misuse.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error("{0}")]
    Usage(String),
}

type Outcome = Result<Status, CommandError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "germforge", version, about = "Germs of holomorphic vector fields: catalog, checks and periods")]
pub struct Cli {
    /// Truncation degree of every jet.
    #[arg(long, global = true, env = "GERMFORGE_DEGREE", default_value_t = DEFAULT_DEGREE)]
    pub degree: u32,
    /// Coefficient field; symbolic commands default to exact, numeric ones to float.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Zero threshold for float comparisons.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write the JSON report here; `-` prints it instead of the summary.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lie bracket [X, Y].
    Bracket { x: String, y: String },
    /// Checks [X, Y] = 0; a single `mt:` reference supplies both fields.
    Commute { x: String, y: Option<String> },
    /// Writes Z = f X + g Y.
    Decompose { z: String, x: String, y: String },
    /// Checks X(F) = 0; rows of the table supply their own F.
    FirstIntegral { field: String, integral: Option<String> },
    /// One blow-up of the origin.
    Blowup {
        field: String,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        chart: u8,
    },
    /// Candidate table rows for a germ.
    Classify { field: String },
    /// One-variable obstructions, for a field `[A, B]` or a germ h(z) ∂z.
    Semicheck {
        #[arg(allow_hyphen_values = true)]
        germ: String,
    },
    /// Residue of dz / h(z).
    Residue {
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    /// Straightening test for the regular family.
    Straighten {
        #[arg(long, allow_hyphen_values = true)]
        g1: String,
        #[arg(long, allow_hyphen_values = true)]
        g2: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Time-form period of a leaf loop.
    Period {
        #[arg(long, conflicts_with = "field", required_unless_present = "field")]
        catalog: Option<String>,
        #[arg(long)]
        field: Option<String>,
        /// Leaf value c of the elliptic pencil xy(x-y) = c.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["radius", "seed"])]
        leaf: Option<String>,
        #[arg(long, default_value_t = 1)]
        loops: i32,
        /// Circle |x - center| = radius in the base.
        #[arg(long, requires = "seed")]
        radius: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        center: String,
        /// Value of y at the starting point.
        #[arg(long, allow_hyphen_values = true, requires = "radius")]
        seed: Option<String>,
        /// Homothety factor for the scaling report.
        #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
        lambda: String,
    },
    /// Tracked holonomy of the formal model against the time-one map.
    Holonomy {
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        lambda: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.05")]
        z0: String,
    },
    /// Removes non-resonant terms through a degree.
    Linearize {
        field: String,
        #[arg(long, default_value_t = 11)]
        through: u32,
    },
    /// Flows and local generators on a Hirzebruch surface.
    Hirzebruch {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = ["1", "2"], default_value = "1")]
        chart: String,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Fiber coordinate, or `inf`.
        #[arg(long, allow_hyphen_values = true, requires = "base")]
        fiber: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        t: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        s: String,
    },
    /// Builds a catalog germ or pair.
    Make { id: String },
    /// Runs the acceptance suite.
    VerifyPaper {
        /// Item identifiers, repeatable or comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bracket { .. } => "bracket",
            Command::Commute { .. } => "commute",
            Command::Decompose { .. } => "decompose",
            Command::FirstIntegral { .. } => "first-integral",
            Command::Blowup { .. } => "blowup",
            Command::Classify { .. } => "classify",
            Command::Semicheck { .. } => "semicheck",
            Command::Residue { .. } => "residue",
            Command::Straighten { .. } => "straighten",
            Command::Period { .. } => "period",
            Command::Holonomy { .. } => "holonomy",
            Command::Linearize { .. } => "linearize",
            Command::Hirzebruch { .. } => "hirzebruch",
            Command::Make { .. } => "make",
            Command::VerifyPaper { .. } => "verify-paper",
        }
    }

    fn default_mode(&self) -> Mode {
        match self {
            Command::Period { .. } | Command::Holonomy { .. } => Mode::Float,
            _ => Mode::Exact,
        }
    }
}

struct Ctx {
    degree: u32,
    tol: f64,
}

/// Runs a command line (program name first) and returns the exit status.
pub fn main_with(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let json = cli.json.clone();
    let to_stdout = json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    let (report, extra) = run(cli, argv.into_iter().skip(1).collect());
    if !to_stdout {
        for line in extra {
            println!("{line}");
        }
        println!("{}", report.summary());
    }
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&report.to_json()).expect("reports serialize");
        if to_stdout {
            println!("{text}");
        } else if let Err(e) = std::fs::write(&path, text + "\n") {
            eprintln!("cannot write {}: {e}", path.display());
            return Status::Error.exit_code();
        }
    }
    report.status.exit_code()
}

/// Executes a parsed command line; also returns lines printed before the summary.
pub fn run(cli: Cli, args: Vec<String>) -> (Report, Vec<String>) {
    let mode = cli.mode.unwrap_or_else(|| cli.command.default_mode());
    let numeric = cli.command.default_mode() == Mode::Float;
    let mode_name = match (&cli.command, mode) {
        (Command::Hirzebruch { .. }, _) => "exact",
        (_, _) if numeric => "float",
        (_, Mode::Exact) => "exact",
        (_, Mode::Float) => "float",
    };
    let mut report = Report::new(cli.command.name(), args, Config { degree: cli.degree, mode: mode_name, tol: cli.tol });
    if numeric && mode == Mode::Exact {
        report.note("mode", json!("numeric commands integrate in double precision"));
    }
    let exact = mode == Mode::Exact;
    let ctx = Ctx { degree: cli.degree, tol: cli.tol };
    let mut lines = Vec::new();
    let outcome = if exact || numeric {
        dispatch::<GaussRat>(&cli.command, &ctx, &mut report, &mut lines)
    } else {
        dispatch::<C64>(&cli.command, &ctx, &mut report, &mut lines)
    };
    match outcome {
        Ok(status) => report.status = status,
        Err(e) => report.error(e.to_string()),
    }
    (report, lines)
}

fn dispatch<S: Scalar>(cmd: &Command, ctx: &Ctx, r: &mut Report, lines: &mut Vec<String>) -> Outcome {
    let d = ctx.degree;
    let tol = if S::EXACT { 0.0 } else { ctx.tol };
    match cmd {
        Command::Bracket { x, y } => {
            let (x, y) = (parse_vector_field::<S>(x, d)?, parse_vector_field::<S>(y, d)?);
            let b = lie_bracket(&x, &y)?;
            r.put("bracket", field(&b)).put("zero", json!(b.is_small(tol)));
            Ok(Status::Pass)
        }
        Command::Commute { x, y } => {
            let (x, y) = match y {
                Some(y) => (parse_vector_field::<S>(x, d)?, parse_vector_field::<S>(y, d)?),
                None => parse_pair::<S>(x, d)?
                    .ok_or_else(|| CommandError::Usage("a single argument must be an mt: pair reference".into()))?,
            };
            let b = lie_bracket(&x, &y)?;
            let zero = b.is_small(tol);
            r.put("x", field(&x)).put("y", field(&y)).put("bracket", field(&b)).put("zero", json!(zero));
            r.note("valid_through", json!(b.valid()));
            Ok(Status::from_bool(zero))
        }
        Command::Decompose { z, x, y } => {
            let (z, x, y) = (parse_vector_field::<S>(z, d)?, parse_vector_field::<S>(x, d)?, parse_vector_field::<S>(y, d)?);
            let (f, g) = decompose(&z, &x, &y, tol)?;
            let res = decomposition_residual(&z, &x, &y, &f, &g);
            r.put("f", rational(&f)).put("g", rational(&g)).put("residual_zero", json!(res.is_small(tol)));
            r.note("residual_max", float(res.max_abs()));
            Ok(Status::from_bool(res.is_small(tol)))
        }
        Command::FirstIntegral { field: text, integral } => {
            let x = parse_vector_field::<S>(text, d)?;
            let f: RationalFn<S> = match integral {
                Some(t) => dsl::parse_expression(t)?.to_rational(d)?,
                None => catalog_integral(text, d)?,
            };
            let df = f.derive_along(&x)?;
            let zero = df.num.is_small(tol);
            r.put("integral", rational(&f)).put("derivative", rational(&df)).put("zero", json!(zero));
            Ok(Status::from_bool(zero))
        }
        Command::Blowup { field: text, chart } => {
            let x = parse_vector_field::<S>(text, d)?;
            let b = blowup_vf(&x, *chart)?;
            r.put("chart", json!(b.chart))
                .put("transformed", field(&b.transformed))
                .put("divisor_order", json!(b.divisor_order))
                .put("foliation", field(&b.foliation))
                .put("dicritical", json!(b.dicritical));
            if !b.dicritical {
                let pts = divisor_singularities(&b, ctx.tol)?;
                let pts: Vec<Value> = pts
                    .iter()
                    .map(|p| {
                        json!({
                            "chart": p.chart,
                            "coord": complex(p.coord),
                            "multiplicity": p.multiplicity,
                            "along": complex(p.along),
                            "transverse": complex(p.transverse),
                        })
                    })
                    .collect();
                r.put("divisor_singularities", Value::Array(pts));
            }
            Ok(Status::Pass)
        }
        Command::Classify { field: text } => {
            let x = parse_vector_field::<S>(text, d)?;
            let c = classify(&x, &[], tol)?;
            let names: Vec<String> = c.candidates.iter().map(|k| k.to_string()).collect();
            r.put("candidates", json!(names));
            r.note("notes", json!(c.notes));
            r.note("order", json!(c.invariants.order));
            r.note("divisor", json!([c.invariants.divisor.0, c.invariants.divisor.1]));
            Ok(Status::from_bool(!c.candidates.is_empty()))
        }
        Command::Semicheck { germ } => semicheck::<S>(germ, d, tol, r),
        Command::Residue { h } => {
            let h = parse_jet1::<S>(h, d)?;
            r.put("residue", scalar(&laurent_residue(&h)?)).put("h", jet1(&h));
            Ok(Status::Pass)
        }
        Command::Straighten { g1, g2, n } => {
            let (g1, g2) = (parse_jet1::<S>(g1, d)?, parse_jet1::<S>(g2, d)?);
            let degree = d.min(n + 6);
            let v = siegel_regular_test(&g1, &g2, *n, degree, tol);
            let (u, beta) = straighten_regular(&g1, &g2, *n, degree)?;
            r.put("verdict", verdict_json(&v.status, &v.reason))
                .put("closed_form", json!(siegel_closed_criterion(&g1, &g2, tol)))
                .put("u", jet2(&u))
                .put("beta", jet2(&beta));
            Ok(verdict_status(v.status))
        }
        Command::Period { catalog, field: f, leaf, loops, radius, center, seed, lambda } => {
            let text = catalog.as_deref().or(f.as_deref()).expect("clap requires one");
            let x = parse_vector_field::<S>(text, d)?;
            let mut spec = match (leaf, radius, seed) {
                (Some(c), _, _) => elliptic_loop(parse_constant::<C64>(c)?),
                (None, Some(rad), Some(s)) => LeafLoopSpec::circle(Axis::X, parse_constant(center)?, *rad, parse_constant(s)?),
                _ => return Err(CommandError::Usage("give --leaf, or --radius with --seed".into())),
            };
            spec.winding = *loops;
            let p = leaf_period(&x, &spec)?;
            r.put("period", complex(p.period)).put("abs", float(p.period.norm()));
            r.note("closure_defect", float(p.defect)).note("step_consistency", float(p.consistency));
            let quadratic = [x.a(), x.b()].iter().all(|j| j.terms().all(|(i, k, _)| i + k == 2));
            if quadratic {
                let h = homothety_period_ratio(&x, &spec, parse_constant::<C64>(lambda)?)?;
                r.put(
                    "scaling",
                    json!({
                        "lambda": complex(parse_constant::<C64>(lambda)?),
                        "scaled_period": complex(h.scaled),
                        "ratio": complex(h.ratio),
                        "expected": complex(h.expected),
                        "defect": float(h.defect),
                    }),
                );
            }
            Ok(Status::Pass)
        }
        Command::Holonomy { p, lambda, z0 } => {
            let (lambda, z0) = (parse_constant::<C64>(lambda)?, parse_constant::<C64>(z0)?);
            let ctl = Controls::default();
            let c = compare_holonomy(*p, lambda, z0, &ctl)?;
            r.put("holonomy", complex(c.holonomy)).put("time_one", complex(c.time_one)).put("difference", float(c.difference));
            if *p == 1 {
                let z2 = cauchy_coefficient(|z| formal_holonomy(1, lambda, z, &ctl), 2, z0.norm().max(1e-3), 16)?;
                r.put("z2_coefficient", complex(z2));
            }
            Ok(Status::Pass)
        }
        Command::Linearize { field: text, through } => {
            let x = parse_vector_field::<S>(text, d)?;
            let l = linearize(&x, *through, tol)?;
            r.put("linearized", field(&l.linearized));
            if let germforge::germ::CoordinateChange::Series { phi1, phi2 } = &l.change {
                r.put("change", json!({ "x": jet2(phi1), "y": jet2(phi2) }));
            }
            match l.obstruction {
                None => {
                    r.put("obstruction", Value::Null);
                    Ok(Status::Pass)
                }
                Some((comp, i, j)) => {
                    r.put("obstruction", json!({ "component": format!("{comp:?}"), "i": i, "j": j }));
                    Ok(Status::Fail)
                }
            }
        }
        Command::Hirzebruch { n, chart, base, fiber, t, s } => hirzebruch(*n, chart, base, fiber, t, s, d, r),
        Command::Make { id } => {
            let id = parse_catalog_id::<S>(id, d)?;
            match id.family {
                Family::Row(_) => {
                    r.put("field", field(&make_normal_form(&id, d)?));
                    if let Some(f) = first_integral(&id, d)? {
                        r.put("first_integral", rational(&f));
                    }
                }
                Family::Pair(_) => {
                    let (x, y) = make_pair(&id, d)?;
                    r.put("x", field(&x)).put("y", field(&y));
                }
            }
            r.put("id", json!(id.to_string()));
            Ok(Status::Pass)
        }
        Command::VerifyPaper { only, seed } => {
            let cfg = SuiteConfig { degree: d, tol: ctx.tol, float: !S::EXACT, seed: *seed };
            let outcomes = suite::run_suite(&cfg, only).map_err(CommandError::Usage)?;
            let passed = outcomes.iter().filter(|o| o.passed).count();
            lines.extend(outcomes.iter().map(|o| o.line()));
            r.put("items", Value::Array(outcomes.iter().map(|o| o.to_json()).collect()));
            r.put("passed", json!(format!("{passed}/{}", outcomes.len())));
            Ok(Status::from_bool(passed == outcomes.len()))
        }
    }
}

fn catalog_integral<S: Scalar>(text: &str, d: u32) -> Result<RationalFn<S>, CommandError> {
    if !is_catalog_ref(text) {
        return Err(CommandError::Usage("give the integral, or a table: reference that has one".into()));
    }
    let id = parse_catalog_id::<S>(text, d)?;
    first_integral(&id, d)?.ok_or_else(|| CommandError::Usage(format!("{id} has no tabulated first integral")))
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Fail => Status::Fail,
        _ => Status::Pass,
    }
}

fn verdict_json<S: Scalar>(status: &Verdict, reason: &germforge::onedim::Reason<S>) -> Value {
    use germforge::onedim::Reason;
    let reason = match reason {
        Reason::Zero => json!({ "kind": "zero" }),
        Reason::Admissible { order } => json!({ "kind": "admissible", "order": order }),
        Reason::OrderTooHigh { order } => json!({ "kind": "order_too_high", "order": order }),
        Reason::NonzeroResidue { residue } => json!({ "kind": "nonzero_residue", "residue": scalar(residue) }),
        Reason::Witness { i, j, coeff } => json!({ "kind": "witness", "i": i, "j": j, "coeff": scalar(coeff) }),
        Reason::NoWitness { degree } => json!({ "kind": "no_witness", "degree": degree }),
        Reason::Precision(m) => json!({ "kind": "precision", "message": m }),
    };
    let status = match status {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Unknown => "unknown",
    };
    json!({ "status": status, "reason": reason })
}

fn semicheck<S: Scalar>(text: &str, d: u32, tol: f64, r: &mut Report) -> Outcome {
    let t = text.trim();
    if !(t.starts_with('[') || is_catalog_ref(t)) {
        let h = parse_jet1::<S>(t, d)?;
        let v = onedim_check(&h, tol);
        r.put("z", verdict_json(&v.status, &v.reason));
        return Ok(verdict_status(v.status));
    }
    let x = parse_vector_field::<S>(t, d)?;
    let mut status = Status::Pass;
    let mut checked = 0;
    for (axis, key) in [(Axis::X, "axis_x"), (Axis::Y, "axis_y")] {
        match restrict_to_axis(&x, axis, tol) {
            Ok(h) => {
                let v = onedim_check(&h, tol);
                r.put(key, json!({ "restriction": jet1(&h), "verdict": verdict_json(&v.status, &v.reason) }));
                if v.status == Verdict::Fail {
                    status = Status::Fail;
                }
                checked += 1;
            }
            Err(GermError::AxisNotInvariant(_)) => {
                r.put(key, json!("not invariant"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if checked == 0 {
        r.note("verdict", json!("no invariant axis; nothing to check"));
    }
    Ok(status)
}

#[allow(clippy::too_many_arguments)]
fn hirzebruch(n: u32, chart: &str, base: &Option<String>, fiber: &Option<String>, t: &str, s: &str, d: u32, r: &mut Report) -> Outcome {
    type Q = GaussRat;
    let g = local_generators_at_p::<Q>(n, d.min(10));
    r.put("z_flow", field(&g.z_flow)).put("y_flow", field(&g.y_flow));
    r.put("z_display", field(&g.z_display)).put("y_display", field(&g.y_display));
    r.note("signs", json!({ "z": g.z_sign, "y": g.y_sign }));
    let commute = lie_bracket(&g.z_flow, &g.y_flow)?.is_zero();
    r.put("generators_commute", json!(commute));
    if let Some(base) = base {
        let chart = if chart == "1" { FnChart::First } else { FnChart::Second };
        let base = parse_constant::<Q>(base)?;
        let p = match fiber.as_deref() {
            Some("inf") => FnPoint::at_infinity(n, chart, base),
            Some(f) => FnPoint::new(n, chart, base, parse_constant::<Q>(f)?),
            None => FnPoint::new(n, chart, base, Q::from_i64(0)),
        };
        let (t, s) = (parse_constant::<Q>(t)?, parse_constant::<Q>(s)?);
        let show = |p: &FnPoint<Q>| {
            json!({
                "chart": if p.chart == FnChart::First { 1 } else { 2 },
                "base": scalar(&p.base),
                "fiber": p.fiber().map(|f| scalar(&f)).unwrap_or(json!("inf")),
            })
        };
        let phi = phi_flow(n, &t, &p);
        let psi = psi_flow(n, &s, &p);
        let both = psi_flow(n, &s, &phi);
        let other = phi_flow(n, &t, &psi);
        r.put("point", show(&p)).put("phi", show(&phi)).put("psi", show(&psi)).put("psi_after_phi", show(&both));
        r.put("flows_commute", json!(both.same_point(&other)));
        return Ok(Status::from_bool(commute && both.same_point(&other)));
    }
    Ok(Status::from_bool(commute))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Report {
        let argv: Vec<String> = std::iter::once("germforge").chain(args.iter().copied()).map(String::from).collect();
        let cli = Cli::try_parse_from(&argv).unwrap();
        run(cli, argv[1..].to_vec()).0
    }

    #[test]
    fn commute_example() {
        let r = run_args(&["commute", "[y^2,0]", "[2*x*y, y^2]"]);
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.result["zero"], json!(true));
    }

    #[test]
    fn semicheck_order_violation() {
        let r = run_args(&["semicheck", "[x^3, 0]"]);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.result["axis_x"]["verdict"]["reason"]["kind"], "order_too_high");
    }

    #[test]
    fn period_with_scaling() {
        let r = run_args(&["period", "--catalog", "table:4[a=0]", "--leaf", "0.02", "--loops", "1"]);
        assert_eq!(r.status, Status::Pass, "{:?}", r.diagnostics);
        let abs: f64 = r.result["abs"].as_str().unwrap().parse().unwrap();
        assert!(abs > 0.0);
        let defect: f64 = r.result["scaling"]["defect"].as_str().unwrap().parse().unwrap();
        assert!(defect < 1e-6);
    }

    #[test]
    fn float_mode_is_honoured() {
        let r = run_args(&["--mode", "float", "bracket", "[x,0]", "[0,y]"]);
        assert_eq!(r.config.mode, "float");
        assert_eq!(r.result["zero"], json!(true));
    }
}
