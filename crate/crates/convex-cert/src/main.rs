//! Command-line front end: parse function specs, run the suites, and emit
//! human-readable or JSON reports.
//!
//! Exit codes: 0 = all requested checks passed, 1 = a counterexample or
//! failed check (the report is still written), 2 = usage or
//! configuration error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use convex_cert::checker::{axiom_suite, falsify, identity_suite, SampleConfig};
use convex_cert::conditions::{residual, ConditionId};
use convex_cert::estimate::{equivalence_report, estimate_l};
use convex_cert::funcs::FunctionHandle;
use convex_cert::parse::parse_fn_spec;
use convex_cert::report::{CheckSection, ReportDocument, RunSpecEcho};
use convex_cert::tolerance::ToleranceMode;
use convex_cert::Error;

#[derive(Parser)]
#[command(name = "convex-cert", version, about = "Numerical certification of convexity and gradient-smoothness inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the inner-product/metric axiom suite and Cauchy-Schwarz.
    Axioms {
        #[command(flatten)]
        common: Common,
    },
    /// Falsify one condition for one function, or replay a stored report.
    Check {
        #[arg(long = "fn", value_name = "SPEC")]
        fn_spec: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        /// nest0..nest6, convex0, convex1
        #[arg(long)]
        cond: Option<ConditionId>,
        #[arg(long = "L")]
        l: Option<f64>,
        /// Re-verify every counterexample stored in a previous JSON report.
        #[arg(long, value_name = "PATH")]
        replay: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate the gradient Lipschitz constant of a function.
    Estimate {
        #[arg(long = "fn", value_name = "SPEC")]
        fn_spec: String,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate all seven smoothness conditions and the implication DAG.
    Equiv {
        #[arg(long = "fn", value_name = "SPEC")]
        fn_spec: String,
        #[arg(long)]
        dim: usize,
        /// Smoothness parameter; when omitted, 1.05 x the estimated L is used.
        #[arg(long = "L")]
        l: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the worked-identity suites (square identity, norm lemma).
    Identities {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Sampling box as lo:hi, applied to every coordinate.
    #[arg(long = "box", value_name = "LO:HI")]
    box_spec: Option<String>,
    /// uniform01, endpoints_plus_uniform, near_zero
    #[arg(long = "alpha-strategy")]
    alpha_strategy: Option<String>,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Common {
    fn parse_box(&self) -> Result<Option<(f64, f64)>, Error> {
        match &self.box_spec {
            None => Ok(None),
            Some(s) => {
                let parts: Vec<&str> = s.split(':').collect();
                let err = || Error::Config(format!("--box expects lo:hi with lo < hi, got `{s}`"));
                if parts.len() != 2 {
                    return Err(err());
                }
                let lo: f64 = parts[0].parse().map_err(|_| err())?;
                let hi: f64 = parts[1].parse().map_err(|_| err())?;
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(err());
                }
                Ok(Some((lo, hi)))
            }
        }
    }

    fn sample_config(&self, dim: Option<usize>) -> Result<SampleConfig, Error> {
        let mut cfg = SampleConfig::default()
            .with_seed(self.seed)
            .with_samples(self.samples);
        if let (Some((lo, hi)), Some(dim)) = (self.parse_box()?, dim) {
            cfg.box_override = Some(vec![(lo, hi); dim]);
        }
        if let Some(s) = &self.alpha_strategy {
            cfg.alpha_strategy = s.parse()?;
        }
        Ok(cfg)
    }

    fn echo(&self, command: &str) -> Result<RunSpecEcho, Error> {
        Ok(RunSpecEcho {
            command: command.to_string(),
            fn_spec: None,
            dim: None,
            cond: None,
            l: None,
            seed: self.seed,
            n_samples: self.samples,
            box_override: self.parse_box()?,
            alpha_strategy: self.alpha_strategy.clone(),
            output: if self.json { "json" } else { "text" }.to_string(),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let started = Instant::now();
    match cli.command {
        Command::Axioms { common } => {
            let cfg = common.sample_config(None)?;
            let report = axiom_suite(&cfg);
            let passed = report.all_passed();
            let mut doc = ReportDocument::new(common.echo("axioms")?);
            doc.axioms = Some(report);
            emit(&common, &mut doc, started)?;
            Ok(exit_for(passed))
        }
        Command::Identities { common } => {
            let cfg = common.sample_config(None)?;
            let report = identity_suite(&cfg);
            let passed = report.all_passed();
            let mut doc = ReportDocument::new(common.echo("identities")?);
            doc.identities = Some(report);
            emit(&common, &mut doc, started)?;
            Ok(exit_for(passed))
        }
        Command::Check {
            replay: Some(path),
            common,
            ..
        } => replay(&path, &common),
        Command::Check {
            fn_spec,
            dim,
            cond,
            l,
            replay: None,
            common,
        } => {
            let fn_spec =
                fn_spec.ok_or_else(|| Error::Config("check requires --fn (or --replay)".into()))?;
            let dim = dim.ok_or_else(|| Error::Config("check requires --dim".into()))?;
            let cond = cond.ok_or_else(|| Error::Config("check requires --cond".into()))?;
            let f = parse_fn_spec(&fn_spec, dim)?;
            let cfg = common.sample_config(Some(dim))?;
            let l = resolve_l(cond, l, &f, &cfg)?;
            let verdict = falsify(cond, &f, l, &cfg)?;
            let holds = verdict.holds();

            let mut echo = common.echo("check")?;
            echo.fn_spec = Some(fn_spec);
            echo.dim = Some(dim);
            echo.cond = Some(cond);
            echo.l = Some(l);
            let mut doc = ReportDocument::new(echo);
            doc.check = Some(CheckSection {
                cond,
                l,
                holds,
                verdict,
            });
            emit(&common, &mut doc, started)?;
            Ok(exit_for(holds))
        }
        Command::Estimate {
            fn_spec,
            dim,
            common,
        } => {
            let f = parse_fn_spec(&fn_spec, dim)?;
            let cfg = common.sample_config(Some(dim))?;
            let est = estimate_l(&f, &cfg)?;
            let mut echo = common.echo("estimate")?;
            echo.fn_spec = Some(fn_spec);
            echo.dim = Some(dim);
            let mut doc = ReportDocument::new(echo);
            doc.l_estimate = Some(est);
            emit(&common, &mut doc, started)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv {
            fn_spec,
            dim,
            l,
            common,
        } => {
            let f = parse_fn_spec(&fn_spec, dim)?;
            let cfg = common.sample_config(Some(dim))?;
            let (l, est) = match l {
                Some(l) => (l, None),
                None => {
                    let est = estimate_l(&f, &cfg)?;
                    (headroom_l(est.l_hat), Some(est))
                }
            };
            let dag = equivalence_report(&f, l, &cfg)?;
            let passed = dag.all_hold() && dag.convexity_gate_holds;

            let mut echo = common.echo("equiv")?;
            echo.fn_spec = Some(fn_spec);
            echo.dim = Some(dim);
            echo.l = Some(l);
            let mut doc = ReportDocument::new(echo);
            doc.l_estimate = est;
            doc.dag = Some(dag);
            emit(&common, &mut doc, started)?;
            Ok(exit_for(passed))
        }
    }
}

/// 1.05 x the estimate, floored at 1 for gradient-constant functions
/// where any positive L works.
fn headroom_l(l_hat: f64) -> f64 {
    let l = 1.05 * l_hat;
    if l > 0.0 {
        l
    } else {
        1.0
    }
}

fn resolve_l(
    cond: ConditionId,
    l: Option<f64>,
    f: &FunctionHandle,
    cfg: &SampleConfig,
) -> Result<f64, Error> {
    if !cond.requires_l() {
        return Ok(1.0);
    }
    match l {
        Some(l) => Ok(l),
        None => Ok(headroom_l(estimate_l(f, cfg)?.l_hat)),
    }
}

fn exit_for(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit(common: &Common, doc: &mut ReportDocument, started: Instant) -> Result<(), Error> {
    doc.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    let body = if common.json {
        doc.to_json()
    } else {
        render_text(doc)
    };
    match &common.out {
        Some(path) => std::fs::write(path, body.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{body}"),
    }
    Ok(())
}

fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("convex-cert {}", doc.tool_version));
    push(
        &mut out,
        format!(
            "command: {} (seed {}, {} samples)",
            doc.run_spec.command, doc.run_spec.seed, doc.run_spec.n_samples
        ),
    );
    if let Some(f) = &doc.run_spec.fn_spec {
        push(&mut out, format!("function: {f}"));
    }
    if let Some(a) = &doc.axioms {
        for c in &a.checks {
            push(
                &mut out,
                format!(
                    "  axiom {:<22} {}  worst gap {:.3e}",
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.worst_gap
                ),
            );
        }
    }
    if let Some(i) = &doc.identities {
        push(
            &mut out,
            format!(
                "  square identity: {} (worst |gap| {:.3e} over {} triples)",
                if i.square_identity_passed { "PASS" } else { "FAIL" },
                i.square_identity_worst_abs_gap,
                i.square_identity_n
            ),
        );
        push(
            &mut out,
            format!(
                "  norm lemma: {} (min gap {:.3e} over {} instances)",
                if i.norm_lemma_passed { "PASS" } else { "FAIL" },
                i.norm_lemma_min_gap,
                i.norm_lemma_n
            ),
        );
    }
    if let Some(c) = &doc.check {
        push(
            &mut out,
            format!(
                "  condition {} at L={}: {}",
                c.cond,
                c.l,
                if c.holds { "holds" } else { "FALSIFIED" }
            ),
        );
        match &c.verdict {
            convex_cert::checker::Verdict::NoCounterexample {
                n_checked,
                worst_residual,
                ..
            } => push(
                &mut out,
                format!("  no counterexample in {n_checked} samples; worst residual {worst_residual:.6e}"),
            ),
            convex_cert::checker::Verdict::Counterexample {
                instance,
                residual,
                shrunk_instance,
                shrunk_residual,
                ..
            } => {
                push(
                    &mut out,
                    format!(
                        "  counterexample: x={:?} y={:?} alpha={:?} residual {residual:.6e}",
                        instance.x.as_slice(),
                        instance.y.as_slice(),
                        instance.alpha
                    ),
                );
                push(
                    &mut out,
                    format!(
                        "  shrunk:         x={:?} y={:?} alpha={:?} residual {shrunk_residual:.6e}",
                        shrunk_instance.x.as_slice(),
                        shrunk_instance.y.as_slice(),
                        shrunk_instance.alpha
                    ),
                );
            }
        }
    }
    if let Some(e) = &doc.l_estimate {
        push(
            &mut out,
            format!("  L estimate: {:.9} over {} pairs", e.l_hat, e.n_pairs),
        );
    }
    if let Some(d) = &doc.dag {
        for v in &d.verdicts {
            push(
                &mut out,
                format!(
                    "  {}: {}  worst residual {:.6e}",
                    v.cond,
                    if v.holds { "holds" } else { "FALSIFIED" },
                    v.worst_residual
                ),
            );
        }
        push(
            &mut out,
            format!(
                "  convexity gate (convex0): {}",
                if d.convexity_gate_holds { "holds" } else { "FALSIFIED" }
            ),
        );
        push(&mut out, format!("  {}", d.summary));
    }
    if let Some(e) = &doc.error {
        push(&mut out, format!("  error: {e}"));
    }
    out.pop();
    out
}

/// Re-verify every counterexample stored in a previous JSON report by
/// recomputing its residual from the serialized coordinates.
fn replay(path: &PathBuf, _common: &Common) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let doc: ReportDocument = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("invalid report JSON: {e}")))?;
    let fn_spec = doc
        .run_spec
        .fn_spec
        .as_ref()
        .ok_or_else(|| Error::Config("report has no function spec to replay".into()))?;
    let dim = doc
        .run_spec
        .dim
        .ok_or_else(|| Error::Config("report has no dimension to replay".into()))?;
    let f = parse_fn_spec(fn_spec, dim)?;
    let tol = ToleranceMode::default();

    let mut n_verified = 0usize;
    let mut verify = |inst: &convex_cert::conditions::ConditionInstance,
                      stored: f64|
     -> Result<(), Error> {
        let r = residual(&f, inst)?;
        // Coordinates round-trip losslessly, so the recomputed residual
        // must match to ulp scale.
        let ulp_scale = 8.0 * f64::EPSILON * (1.0 + stored.abs().max(r.scale));
        if (r.value - stored).abs() > ulp_scale {
            return Err(Error::Config(format!(
                "replay mismatch for {}: stored {stored:.17e}, recomputed {:.17e}",
                inst.cond, r.value
            )));
        }
        if tol.accept(r.value, r.scale) {
            return Err(Error::Config(format!(
                "stored counterexample for {} no longer violates (residual {:.3e})",
                inst.cond, r.value
            )));
        }
        n_verified += 1;
        Ok(())
    };

    if let Some(check) = &doc.check {
        if let convex_cert::checker::Verdict::Counterexample {
            instance,
            residual: r,
            shrunk_instance,
            shrunk_residual,
            ..
        } = &check.verdict
        {
            verify(instance, *r)?;
            verify(shrunk_instance, *shrunk_residual)?;
        }
    }
    if let Some(dag) = &doc.dag {
        for v in dag.verdicts.iter().chain([&dag.convexity_gate]) {
            if let Some(boxed) = &v.counterexample {
                if let convex_cert::checker::Verdict::Counterexample {
                    instance,
                    residual: r,
                    shrunk_instance,
                    shrunk_residual,
                    ..
                } = boxed.as_ref()
                {
                    verify(instance, *r)?;
                    verify(shrunk_instance, *shrunk_residual)?;
                }
            }
        }
    }

    println!("replay: {n_verified} stored counterexample(s) re-verified");
    Ok(ExitCode::SUCCESS)
}
