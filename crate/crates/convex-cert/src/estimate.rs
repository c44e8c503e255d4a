//! Lipschitz-constant estimation, per-condition minimal-L search, and the
//! implication-DAG consistency report for the seven smoothness conditions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checker::{falsify, PairStrategy, SampleConfig, Verdict};
use crate::conditions::{ConditionId, ALL_NESTEROV};
use crate::error::{Error, Result};
use crate::funcs::FunctionHandle;
use crate::vecspace::Vector;

/// Pairs closer than this are skipped when forming difference quotients.
const MIN_PAIR_DISTANCE: f64 = 1e-9;

/// Empirical supremum of gradient difference quotients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LEstimate {
    pub l_hat: f64,
    pub n_pairs: usize,
    pub argmax_pair: (Vector, Vector),
}

fn quotient_at(f: &FunctionHandle, x: &Vector, y: &Vector) -> Option<(f64, f64)> {
    let d = x.eu_metric(y).ok()?;
    if d < MIN_PAIR_DISTANCE {
        return None;
    }
    let gx = f.grad(x).ok()?;
    let gy = f.grad(y).ok()?;
    let q = gx.eu_metric(&gy).ok()? / d;
    q.is_finite().then_some((q, d))
}

fn estimate_pass(
    f: &FunctionHandle,
    cfg: &SampleConfig,
    strategy: PairStrategy,
    stream_base: u64,
) -> (usize, Option<(f64, u64, Vector, Vector)>) {
    let bbox = cfg
        .box_override
        .clone()
        .unwrap_or_else(|| f.domain().to_vec());

    let eval = |i: u64| -> Option<(f64, u64, Vector, Vector)> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream_base + i);
        let x = draw_point(&mut rng, &bbox);
        let y = match strategy {
            PairStrategy::Independent => draw_point(&mut rng, &bbox),
            PairStrategy::Nearby { sigma_frac } => {
                let coords: Vec<f64> = bbox
                    .iter()
                    .enumerate()
                    .map(|(k, &(lo, hi))| {
                        let sigma = sigma_frac * (hi - lo);
                        let n: f64 = rng.sample(rand_distr::StandardNormal);
                        (x.coord(k) + sigma * n).clamp(lo, hi)
                    })
                    .collect();
                Vector::new(coords).expect("finite")
            }
        };
        if !f.sample_ok(&x) || !f.sample_ok(&y) {
            return None;
        }
        let (q, _) = quotient_at(f, &x, &y)?;
        Some((q, i, x, y))
    };

    let pick = |a: Option<(f64, u64, Vector, Vector)>, b: Option<(f64, u64, Vector, Vector)>| match (a, b) {
        (Some(a), Some(b)) => {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                Some(b)
            } else {
                Some(a)
            }
        }
        (a, b) => a.or(b),
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Option<(f64, u64, Vector, Vector)>> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(eval)
        .collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Option<(f64, u64, Vector, Vector)>> =
        (0..cfg.n_samples as u64).map(eval).collect();

    let n_ok = results.iter().filter(|r| r.is_some()).count();
    let best = results.into_iter().fold(None, pick);
    (n_ok, best)
}

fn draw_point(rng: &mut ChaCha8Rng, bbox: &[(f64, f64)]) -> Vector {
    Vector::new(
        bbox.iter()
            .map(|&(lo, hi)| rng.gen_range(lo..=hi))
            .collect(),
    )
    .expect("finite box")
}

/// Estimate the gradient Lipschitz constant as the max difference quotient
/// ‖f′(x)−f′(y)‖ / ‖x−y‖ over sampled pairs, using both independent and
/// nearby pair strategies and taking the larger.
pub fn estimate_l(f: &FunctionHandle, cfg: &SampleConfig) -> Result<LEstimate> {
    let (n1, best1) = estimate_pass(f, cfg, PairStrategy::Independent, 0);
    let (n2, best2) = estimate_pass(f, cfg, PairStrategy::nearby_default(), 1 << 32);
    let n_pairs = n1 + n2;
    let best = match (best1, best2) {
        (Some(a), Some(b)) => {
            if b.0 > a.0 {
                b
            } else {
                a
            }
        }
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::AllPairsSkipped),
    };
    // Constant-gradient functions produce no admissible quotient above 0;
    // best.0 is then simply the observed max (possibly 0).
    Ok(LEstimate {
        l_hat: best.0,
        n_pairs,
        argmax_pair: (best.2, best.3),
    })
}

/// Bisect for the smallest L at which `cond` holds on the fixed sample set
/// generated by `cfg.seed`. The same seed is reused at every probe so the
/// predicate is monotone in L and the bisection is well-defined.
pub fn minimal_l(
    cond: ConditionId,
    f: &FunctionHandle,
    cfg: &SampleConfig,
    bracket: (f64, f64),
) -> Result<f64> {
    let (l_lo, l_hi) = bracket;
    if !(l_lo.is_finite() && l_hi.is_finite() && 0.0 < l_lo && l_lo < l_hi) {
        return Err(Error::InvalidBracket {
            lo: l_lo,
            hi: l_hi,
            reason: "need 0 < L_lo < L_hi, both finite".into(),
        });
    }
    let holds = |l: f64| -> Result<bool> { Ok(falsify(cond, f, l, cfg)?.holds()) };
    if !holds(l_hi)? {
        return Err(Error::InvalidBracket {
            lo: l_lo,
            hi: l_hi,
            reason: format!("{cond} already fails at L_hi"),
        });
    }
    if holds(l_lo)? {
        // The condition holds throughout the bracket; the lower end is the
        // minimal L the bracket can certify.
        return Ok(l_lo);
    }
    let width_target = 1e-3 * l_hi;
    let (mut lo, mut hi) = (l_lo, l_hi);
    while hi - lo > width_target {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// A summarized verdict for one condition in the DAG report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub cond: ConditionId,
    pub holds: bool,
    pub worst_residual: f64,
    pub n_checked: usize,
    pub n_skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Box<Verdict>>,
}

/// One proof-implication edge whose source held but whose target was
/// numerically falsified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub from: ConditionId,
    pub to: ConditionId,
    pub target_worst_residual: f64,
}

/// The proof-implication edges among the seven conditions: the main cycle
/// 0→4→1→2→3→0 plus the bidirectional pairs 1↔6 and 2↔5.
pub const DAG_EDGES: [(ConditionId, ConditionId); 9] = [
    (ConditionId::Nest0, ConditionId::Nest4),
    (ConditionId::Nest4, ConditionId::Nest1),
    (ConditionId::Nest1, ConditionId::Nest2),
    (ConditionId::Nest2, ConditionId::Nest3),
    (ConditionId::Nest3, ConditionId::Nest0),
    (ConditionId::Nest1, ConditionId::Nest6),
    (ConditionId::Nest6, ConditionId::Nest1),
    (ConditionId::Nest2, ConditionId::Nest5),
    (ConditionId::Nest5, ConditionId::Nest2),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DagReport {
    pub l: f64,
    /// Verdicts for nest0..nest6, in condition order.
    pub verdicts: Vec<ConditionVerdict>,
    /// Whether zero-order convexity passed; the equivalence claim is only
    /// labeled verified when it does.
    pub convexity_gate_holds: bool,
    pub convexity_gate: ConditionVerdict,
    pub edges: Vec<(ConditionId, ConditionId)>,
    pub discrepancies: Vec<Discrepancy>,
    pub summary: String,
}

impl DagReport {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }
}

fn summarize(cond: ConditionId, verdict: &Verdict) -> ConditionVerdict {
    ConditionVerdict {
        cond,
        holds: verdict.holds(),
        worst_residual: verdict.worst_residual(),
        n_checked: verdict.n_checked(),
        n_skipped: verdict.n_skipped(),
        counterexample: (!verdict.holds()).then(|| Box::new(verdict.clone())),
    }
}

/// Evaluate all seven conditions at the given L, plus the zero-order
/// convexity gate, and report any implication edge whose source holds
/// while its target is falsified. Every node is evaluated directly; the
/// DAG only localizes which implication numerically failed.
pub fn equivalence_report(f: &FunctionHandle, l: f64, cfg: &SampleConfig) -> Result<DagReport> {
    let gate_verdict = falsify(ConditionId::Convex0, f, 1.0, cfg)?;
    let convexity_gate = summarize(ConditionId::Convex0, &gate_verdict);

    let mut verdicts = Vec::with_capacity(7);
    for cond in ALL_NESTEROV {
        let v = falsify(cond, f, l, cfg)?;
        verdicts.push(summarize(cond, &v));
    }

    let lookup = |c: ConditionId| verdicts.iter().find(|v| v.cond == c).expect("all present");
    let discrepancies: Vec<Discrepancy> = DAG_EDGES
        .iter()
        .filter(|(from, to)| lookup(*from).holds && !lookup(*to).holds)
        .map(|&(from, to)| Discrepancy {
            from,
            to,
            target_worst_residual: lookup(to).worst_residual,
        })
        .collect();

    let n_hold = verdicts.iter().filter(|v| v.holds).count();
    let gate_holds = convexity_gate.holds;
    let summary = if !gate_holds {
        format!(
            "convexity gate FAILED (convex0 falsified); smoothness verdicts reported separately: {n_hold}/7 hold"
        )
    } else if n_hold == 7 {
        "all seven agree: holds (Nesterov equivalence verified on samples)".to_string()
    } else if n_hold == 0 {
        "all seven agree: falsified".to_string()
    } else {
        let list: Vec<String> = discrepancies
            .iter()
            .map(|d| format!("{}->{} (target residual {:.3e})", d.from, d.to, d.target_worst_residual))
            .collect();
        format!("discrepancies: {}", list.join(", "))
    };

    Ok(DagReport {
        l,
        verdicts,
        convexity_gate_holds: gate_holds,
        convexity_gate,
        edges: DAG_EDGES.to_vec(),
        discrepancies,
        summary,
    })
}
