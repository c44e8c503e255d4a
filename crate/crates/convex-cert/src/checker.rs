//! Seeded randomized falsification: sample condition instances, evaluate
//! residuals, report the worst violation, and shrink counterexamples.
//!
//! Determinism contract: sample i is generated from a counter-based RNG
//! stream keyed by (seed, i), so the sample set is identical regardless of
//! worker scheduling, and the worst-residual reduction breaks ties by
//! sample index. With the `parallel` feature the scan runs on a rayon
//! pool; without it the same scan runs sequentially and produces the
//! identical verdict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{residual, ConditionId, ConditionInstance};
use crate::error::{Error, Result};
use crate::funcs::FunctionHandle;
use crate::tolerance::ToleranceMode;
use crate::vecspace::Vector;

/// How α is drawn for the conditions that take one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaStrategy {
    Uniform01,
    /// Mostly uniform, with α ∈ {0, 1} forced on a fraction of samples so
    /// the α(1−α)=0 degeneracy is always exercised.
    EndpointsPlusUniform,
    /// α drawn from {10⁻ᵏ : k = 1..6}, probing the α→0 limit.
    NearZero,
}

impl std::str::FromStr for AlphaStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "uniform01" => AlphaStrategy::Uniform01,
            "endpoints_plus_uniform" => AlphaStrategy::EndpointsPlusUniform,
            "near_zero" => AlphaStrategy::NearZero,
            other => {
                return Err(Error::Config(format!(
                    "unknown alpha strategy `{other}` (expected uniform01, endpoints_plus_uniform, near_zero)"
                )))
            }
        })
    }
}

/// How the pair (x, y) is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStrategy {
    Independent,
    /// y = x + σ·gaussian with σ a fraction of the box width; Lipschitz
    /// quotient extremes for smooth functions occur at close pairs.
    Nearby { sigma_frac: f64 },
}

impl PairStrategy {
    pub fn nearby_default() -> Self {
        PairStrategy::Nearby { sigma_frac: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub n_samples: usize,
    /// Per-coordinate sampling box; defaults to the function's domain box.
    pub box_override: Option<Vec<(f64, f64)>>,
    pub alpha_strategy: AlphaStrategy,
    pub pair_strategy: PairStrategy,
    pub tolerance: ToleranceMode,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            n_samples: 10_000,
            box_override: None,
            alpha_strategy: AlphaStrategy::EndpointsPlusUniform,
            pair_strategy: PairStrategy::Independent,
            tolerance: ToleranceMode::default(),
        }
    }
}

impl SampleConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        assert!(n >= 1);
        self.n_samples = n;
        self
    }

    fn effective_box(&self, f: &FunctionHandle) -> Vec<(f64, f64)> {
        self.box_override
            .clone()
            .unwrap_or_else(|| f.domain().to_vec())
    }
}

/// Outcome of a falsification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    NoCounterexample {
        n_checked: usize,
        n_skipped: usize,
        worst_residual: f64,
        worst_scale: f64,
        worst_instance: ConditionInstance,
    },
    Counterexample {
        n_checked: usize,
        n_skipped: usize,
        instance: ConditionInstance,
        residual: f64,
        shrunk_instance: ConditionInstance,
        shrunk_residual: f64,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::NoCounterexample { .. })
    }

    pub fn n_checked(&self) -> usize {
        match self {
            Verdict::NoCounterexample { n_checked, .. } => *n_checked,
            Verdict::Counterexample { n_checked, .. } => *n_checked,
        }
    }

    pub fn n_skipped(&self) -> usize {
        match self {
            Verdict::NoCounterexample { n_skipped, .. } => *n_skipped,
            Verdict::Counterexample { n_skipped, .. } => *n_skipped,
        }
    }

    pub fn worst_residual(&self) -> f64 {
        match self {
            Verdict::NoCounterexample { worst_residual, .. } => *worst_residual,
            Verdict::Counterexample { residual, .. } => *residual,
        }
    }
}

/// Per-index RNG: sample i sees the same stream regardless of how the
/// scan is scheduled.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw_point(rng: &mut ChaCha8Rng, bbox: &[(f64, f64)]) -> Vector {
    Vector::new(
        bbox.iter()
            .map(|&(lo, hi)| rng.gen_range(lo..=hi))
            .collect(),
    )
    .expect("box bounds finite")
}

fn draw_pair(rng: &mut ChaCha8Rng, bbox: &[(f64, f64)], strategy: PairStrategy) -> (Vector, Vector) {
    let x = draw_point(rng, bbox);
    let y = match strategy {
        PairStrategy::Independent => draw_point(rng, bbox),
        PairStrategy::Nearby { sigma_frac } => {
            let coords: Vec<f64> = bbox
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| {
                    let sigma = sigma_frac * (hi - lo);
                    let n: f64 = rng.sample(StandardNormal);
                    (x.coord(i) + sigma * n).clamp(lo, hi)
                })
                .collect();
            Vector::new(coords).expect("clamped into finite box")
        }
    };
    (x, y)
}

fn draw_alpha(rng: &mut ChaCha8Rng, strategy: AlphaStrategy) -> f64 {
    match strategy {
        AlphaStrategy::Uniform01 => rng.gen_range(0.0..=1.0),
        AlphaStrategy::EndpointsPlusUniform => {
            let u: f64 = rng.gen();
            if u < 0.125 {
                0.0
            } else if u < 0.25 {
                1.0
            } else {
                rng.gen_range(0.0..=1.0)
            }
        }
        AlphaStrategy::NearZero => {
            let k = rng.gen_range(1u32..=6);
            10f64.powi(-(k as i32))
        }
    }
}

/// Generate the i-th instance, or None when the draw lands in an excluded
/// region of the function's sampling domain.
fn gen_instance(
    cond: ConditionId,
    f: &FunctionHandle,
    l: f64,
    cfg: &SampleConfig,
    bbox: &[(f64, f64)],
    index: u64,
) -> Option<ConditionInstance> {
    let mut rng = sample_rng(cfg.seed, index);
    let (x, y) = draw_pair(&mut rng, bbox, cfg.pair_strategy);
    if !f.sample_ok(&x) || !f.sample_ok(&y) {
        return None;
    }
    let alpha = cond
        .requires_alpha()
        .then(|| draw_alpha(&mut rng, cfg.alpha_strategy));
    Some(ConditionInstance::new(cond, l, x, y, alpha))
}

#[derive(Clone)]
struct Worst {
    residual: f64,
    scale: f64,
    index: u64,
    instance: ConditionInstance,
}

#[derive(Clone, Default)]
struct Acc {
    n_checked: usize,
    n_skipped: usize,
    worst: Option<Worst>,
}

impl Acc {
    fn push(mut self, outcome: Option<Worst>) -> Acc {
        match outcome {
            None => self.n_skipped += 1,
            Some(w) => {
                self.n_checked += 1;
                self.worst = Some(match self.worst.take() {
                    None => w,
                    Some(cur) => pick(cur, w),
                });
            }
        }
        self
    }

    fn merge(self, other: Acc) -> Acc {
        Acc {
            n_checked: self.n_checked + other.n_checked,
            n_skipped: self.n_skipped + other.n_skipped,
            worst: match (self.worst, other.worst) {
                (Some(a), Some(b)) => Some(pick(a, b)),
                (a, b) => a.or(b),
            },
        }
    }
}

// Larger residual wins; exact ties go to the smaller index so the
// reduction is order-independent.
fn pick(a: Worst, b: Worst) -> Worst {
    if b.residual > a.residual || (b.residual == a.residual && b.index < a.index) {
        b
    } else {
        a
    }
}

fn eval_sample(
    cond: ConditionId,
    f: &FunctionHandle,
    l: f64,
    cfg: &SampleConfig,
    bbox: &[(f64, f64)],
    index: u64,
) -> Option<Worst> {
    let instance = gen_instance(cond, f, l, cfg, bbox, index)?;
    let r = residual(f, &instance).ok()?;
    if !r.value.is_finite() {
        return None;
    }
    Some(Worst {
        residual: r.value,
        scale: r.scale,
        index,
        instance,
    })
}

#[cfg(feature = "parallel")]
fn scan_parallel(
    cond: ConditionId,
    f: &FunctionHandle,
    l: f64,
    cfg: &SampleConfig,
    bbox: &[(f64, f64)],
) -> Acc {
    (0..cfg.n_samples as u64)
        .into_par_iter()
        .fold(Acc::default, |acc, i| {
            acc.push(eval_sample(cond, f, l, cfg, bbox, i))
        })
        .reduce(Acc::default, Acc::merge)
}

fn scan_sequential(
    cond: ConditionId,
    f: &FunctionHandle,
    l: f64,
    cfg: &SampleConfig,
    bbox: &[(f64, f64)],
) -> Acc {
    (0..cfg.n_samples as u64).fold(Acc::default(), |acc, i| {
        acc.push(eval_sample(cond, f, l, cfg, bbox, i))
    })
}

fn falsify_impl(
    cond: ConditionId,
    f: &FunctionHandle,
    l: f64,
    cfg: &SampleConfig,
    parallel: bool,
) -> Result<Verdict> {
    if cond.requires_l() && !(l.is_finite() && l > 0.0) {
        return Err(Error::NonPositiveL {
            cond: cond.to_string(),
            l,
        });
    }
    let bbox = cfg.effective_box(f);
    if bbox.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: bbox.len(),
        });
    }

    #[cfg(feature = "parallel")]
    let acc = if parallel {
        scan_parallel(cond, f, l, cfg, &bbox)
    } else {
        scan_sequential(cond, f, l, cfg, &bbox)
    };
    #[cfg(not(feature = "parallel"))]
    let acc = {
        let _ = parallel;
        scan_sequential(cond, f, l, cfg, &bbox)
    };

    debug_assert_eq!(acc.n_checked + acc.n_skipped, cfg.n_samples);
    if acc.n_skipped * 2 > cfg.n_samples {
        return Err(Error::TooManySkipped {
            skipped: acc.n_skipped,
            total: cfg.n_samples,
        });
    }
    let worst = acc.worst.expect("at least one sample checked");

    if cfg.tolerance.accept(worst.residual, worst.scale) {
        Ok(Verdict::NoCounterexample {
            n_checked: acc.n_checked,
            n_skipped: acc.n_skipped,
            worst_residual: worst.residual,
            worst_scale: worst.scale,
            worst_instance: worst.instance,
        })
    } else {
        let shrunk = shrink(f, cfg, &worst.instance, &bbox);
        let shrunk_residual = residual(f, &shrunk)
            .expect("shrunk instance evaluates")
            .value;
        Ok(Verdict::Counterexample {
            n_checked: acc.n_checked,
            n_skipped: acc.n_skipped,
            instance: worst.instance,
            residual: worst.residual,
            shrunk_instance: shrunk,
            shrunk_residual,
        })
    }
}

/// Search for a counterexample to `cond` for `f` at parameter `l`.
/// Deterministic in (cfg.seed, cond, f, l): all n_samples instances are
/// evaluated and the maximal-residual violator is shrunk.
pub fn falsify(
    cond: ConditionId,
    f: &FunctionHandle,
    l: f64,
    cfg: &SampleConfig,
) -> Result<Verdict> {
    falsify_impl(cond, f, l, cfg, true)
}

/// Single-threaded variant of [`falsify`]; produces the identical verdict.
pub fn falsify_sequential(
    cond: ConditionId,
    f: &FunctionHandle,
    l: f64,
    cfg: &SampleConfig,
) -> Result<Verdict> {
    falsify_impl(cond, f, l, cfg, false)
}

/// Greedy deterministic shrink of a violating instance: halve coordinates
/// toward the box center, snap α toward {0, ½, 1}, then bisect each
/// coordinate toward the violation boundary. Every accepted move keeps
/// the violation, so the result still violates.
pub fn shrink(
    f: &FunctionHandle,
    cfg: &SampleConfig,
    instance: &ConditionInstance,
    bbox: &[(f64, f64)],
) -> ConditionInstance {
    const MAX_STEPS: usize = 200;
    let center: Vec<f64> = bbox.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect();
    let violates = |inst: &ConditionInstance| -> bool {
        match residual(f, inst) {
            Ok(r) => r.value.is_finite() && !cfg.tolerance.accept(r.value, r.scale),
            Err(_) => false,
        }
    };
    if !violates(instance) {
        return instance.clone();
    }

    let mut cur = instance.clone();
    let mut steps = 0usize;

    // Halving passes over all coordinates of x and y.
    loop {
        let mut improved = false;
        for which in 0..2 {
            for i in 0..cur.x.dim() {
                if steps >= MAX_STEPS {
                    break;
                }
                let mut cand = cur.clone();
                let (vecref, c) = if which == 0 {
                    (&mut cand.x, center[i])
                } else {
                    (&mut cand.y, center[i])
                };
                let mut coords = vecref.as_slice().to_vec();
                let halved = c + 0.5 * (coords[i] - c);
                if halved == coords[i] {
                    continue;
                }
                coords[i] = halved;
                *vecref = Vector::new(coords).expect("finite");
                if violates(&cand) {
                    cur = cand;
                    improved = true;
                    steps += 1;
                }
            }
        }
        if !improved || steps >= MAX_STEPS {
            break;
        }
    }

    // Snap alpha toward the canonical values when the violation persists.
    if let Some(a) = cur.alpha {
        for target in [0.5, 0.0, 1.0] {
            if a == target {
                break;
            }
            let mut cand = cur.clone();
            cand.alpha = Some(target);
            if violates(&cand) {
                cur = cand;
                break;
            }
        }
    }

    // Refine: bisect each coordinate between the box center and its
    // current value, pushing toward the violation boundary.
    for which in 0..2 {
        for i in 0..cur.x.dim() {
            let mut lo = center[i]; // may not violate
            let cur_val = if which == 0 {
                cur.x.coord(i)
            } else {
                cur.y.coord(i)
            };
            let mut hi = cur_val; // violates
            for _ in 0..30 {
                if steps >= MAX_STEPS {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                let mut cand = cur.clone();
                let mut coords = if which == 0 {
                    cand.x.as_slice().to_vec()
                } else {
                    cand.y.as_slice().to_vec()
                };
                coords[i] = mid;
                let v = Vector::new(coords).expect("finite");
                if which == 0 {
                    cand.x = v;
                } else {
                    cand.y = v;
                }
                if violates(&cand) {
                    cur = cand;
                    hi = mid;
                    steps += 1;
                } else {
                    lo = mid;
                }
            }
        }
    }

    debug_assert!(violates(&cur));
    cur
}

/// Result of one axiom check over the sampled tuples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    /// Worst gap magnitude, normalized by the per-instance scale.
    pub worst_gap: f64,
    pub n_tuples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomSuiteReport {
    pub dims: Vec<usize>,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomSuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const AXIOM_DIMS: [usize; 5] = [1, 2, 3, 5, 10];

/// Run the inner-product and metric axioms plus Cauchy-Schwarz on
/// `cfg.n_samples` random tuples in each of dims {1,2,3,5,10}.
pub fn axiom_suite(cfg: &SampleConfig) -> AxiomSuiteReport {
    let names = [
        "dot_scalar_mult",
        "dot_additivity",
        "dot_symmetry",
        "dot_self_nonneg",
        "cauchy_schwarz",
        "metric_definiteness",
        "metric_symmetry",
        "metric_triangle",
    ];
    let mut worst = [0.0f64; 8];
    let mut n_tuples = 0usize;
    let bound = cfg.tolerance.abs_tol;

    for (d_idx, &dim) in AXIOM_DIMS.iter().enumerate() {
        let bbox = vec![(-10.0, 10.0); dim];
        for i in 0..cfg.n_samples as u64 {
            let mut rng = sample_rng(cfg.seed, (d_idx as u64) << 40 | i);
            let u = draw_point(&mut rng, &bbox);
            let v = draw_point(&mut rng, &bbox);
            let w = draw_point(&mut rng, &bbox);
            let a: f64 = rng.gen_range(-10.0..10.0);
            n_tuples += 1;

            // ⟨au, v⟩ = a⟨u, v⟩
            let lhs = u.scale(a).dot(&v).unwrap();
            let rhs = a * u.dot(&v).unwrap();
            track(&mut worst[0], (lhs - rhs).abs(), lhs.abs().max(rhs.abs()));

            // ⟨u+v, w⟩ = ⟨u, w⟩ + ⟨v, w⟩
            let lhs = u.add(&v).unwrap().dot(&w).unwrap();
            let rhs = u.dot(&w).unwrap() + v.dot(&w).unwrap();
            track(&mut worst[1], (lhs - rhs).abs(), lhs.abs().max(rhs.abs()));

            // ⟨u, v⟩ = ⟨v, u⟩ — bit-for-bit under operand swap.
            let lhs = u.dot(&v).unwrap();
            let rhs = v.dot(&u).unwrap();
            let gap = if lhs.to_bits() == rhs.to_bits() {
                0.0
            } else {
                (lhs - rhs).abs()
            };
            track(&mut worst[2], gap, lhs.abs());

            // ⟨u, u⟩ ≥ 0
            track(&mut worst[3], -u.dot(&u).unwrap(), u.norm_sq());

            // |⟨u, v⟩| ≤ ‖u‖‖v‖
            let prod = u.eu_norm() * v.eu_norm();
            track(&mut worst[4], u.dot(&v).unwrap().abs() - prod, prod);

            // d(x, x) = 0
            track(&mut worst[5], u.eu_metric(&u).unwrap(), u.eu_norm());

            // d(x, y) = d(y, x)
            let dxy = u.eu_metric(&v).unwrap();
            let dyx = v.eu_metric(&u).unwrap();
            track(&mut worst[6], (dxy - dyx).abs(), dxy);

            // d(x, y) ≤ d(x, z) + d(z, y)
            let via = u.eu_metric(&w).unwrap() + w.eu_metric(&v).unwrap();
            track(&mut worst[7], dxy - via, via);
        }
    }

    let checks = names
        .iter()
        .zip(worst)
        .map(|(name, worst_gap)| AxiomCheck {
            name: name.to_string(),
            passed: worst_gap <= bound,
            worst_gap,
            n_tuples,
        })
        .collect();
    AxiomSuiteReport {
        dims: AXIOM_DIMS.to_vec(),
        checks,
    }
}

// Gap tracking, normalized by instance magnitude. Callers pass lhs-rhs
// with the violating direction positive; nonpositive gaps satisfy the
// axiom and count as zero. Symmetric equality checks pass |gap|.
fn track(worst: &mut f64, gap: f64, magnitude: f64) {
    let val = if gap <= 0.0 {
        0.0
    } else {
        gap / magnitude.abs().max(1.0)
    };
    if val > *worst {
        *worst = val;
    }
}

/// Results of the two worked-identity suites: the scalar square identity
/// (an exact algebraic identity, |gap| stays at rounding level) and the
/// norm lemma inequality (gap stays nonnegative).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySuiteReport {
    pub square_identity_n: usize,
    pub square_identity_worst_abs_gap: f64,
    pub square_identity_passed: bool,
    pub norm_lemma_n: usize,
    pub norm_lemma_min_gap: f64,
    pub norm_lemma_passed: bool,
}

impl IdentitySuiteReport {
    pub fn all_passed(&self) -> bool {
        self.square_identity_passed && self.norm_lemma_passed
    }
}

/// Run the square identity over `n_samples` scalar triples and the norm
/// lemma over `n_samples` dim-3 instances.
pub fn identity_suite(cfg: &SampleConfig) -> IdentitySuiteReport {
    let bound = cfg.tolerance.abs_tol;
    let mut worst_abs = 0.0f64;
    for i in 0..cfg.n_samples as u64 {
        let mut rng = sample_rng(cfg.seed, i);
        let x: f64 = rng.gen_range(-10.0..10.0);
        let y: f64 = rng.gen_range(-10.0..10.0);
        let a: f64 = rng.gen_range(0.0..=1.0);
        let gap = crate::conditions::square_identity_gap(x, y, a)
            .expect("alpha in range")
            .abs();
        if gap > worst_abs {
            worst_abs = gap;
        }
    }

    let bbox = vec![(-10.0, 10.0); 3];
    let mut min_gap = f64::INFINITY;
    for i in 0..cfg.n_samples as u64 {
        let mut rng = sample_rng(cfg.seed, (1u64 << 41) | i);
        let x = draw_point(&mut rng, &bbox);
        let y = draw_point(&mut rng, &bbox);
        let a: f64 = rng.gen_range(0.0..=1.0);
        let gap = crate::conditions::norm_lemma_gap(&x, &y, a).expect("alpha in range");
        if gap < min_gap {
            min_gap = gap;
        }
    }

    IdentitySuiteReport {
        square_identity_n: cfg.n_samples,
        square_identity_worst_abs_gap: worst_abs,
        square_identity_passed: worst_abs <= bound,
        norm_lemma_n: cfg.n_samples,
        norm_lemma_min_gap: min_gap,
        norm_lemma_passed: min_gap >= -bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::catalog::*;

    #[test]
    fn falsify_finds_convexity_violation_of_concave_control() {
        let f = neg_norm_sq(2);
        let cfg = SampleConfig::default().with_samples(2_000).with_seed(7);
        let v = falsify(ConditionId::Convex0, &f, 1.0, &cfg).unwrap();
        match v {
            Verdict::Counterexample {
                residual,
                shrunk_residual,
                ref shrunk_instance,
                ..
            } => {
                assert!(residual > 0.0);
                assert!(shrunk_residual > 0.0);
                // Shrinking never loses the violation.
                let r = crate::conditions::residual(&f, shrunk_instance).unwrap();
                assert!(!cfg.tolerance.accept(r.value, r.scale));
            }
            _ => panic!("expected counterexample"),
        }
    }

    #[test]
    fn falsify_confirms_tight_quadratic() {
        let f = norm_sq_fn(2);
        let cfg = SampleConfig::default().with_samples(2_000).with_seed(7);
        let v = falsify(ConditionId::Nest0, &f, 2.0, &cfg).unwrap();
        assert!(v.holds());
        if let Verdict::NoCounterexample { worst_residual, .. } = v {
            assert!(worst_residual <= 1e-9);
        }
    }

    #[test]
    fn falsify_detects_understated_l() {
        let f = norm_sq_fn(2);
        let cfg = SampleConfig::default().with_samples(2_000).with_seed(7);
        let v = falsify(ConditionId::Nest0, &f, 1.9, &cfg).unwrap();
        assert!(!v.holds());
    }

    #[test]
    fn determinism_and_parallel_sequential_agree() {
        let f = neg_norm_sq(3);
        let cfg = SampleConfig::default().with_samples(3_000).with_seed(42);
        let a = falsify(ConditionId::Convex0, &f, 1.0, &cfg).unwrap();
        let b = falsify(ConditionId::Convex0, &f, 1.0, &cfg).unwrap();
        assert_eq!(a, b);
        let c = falsify_sequential(ConditionId::Convex0, &f, 1.0, &cfg).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn skip_accounting_sums_to_n_samples() {
        // The norm's excluded origin ball produces occasional skips.
        let f = eu_norm_fn(2);
        let cfg = SampleConfig::default().with_samples(5_000).with_seed(3);
        let v = falsify(ConditionId::Convex0, &f, 1.0, &cfg).unwrap();
        assert_eq!(v.n_checked() + v.n_skipped(), 5_000);
    }

    #[test]
    fn shrink_moves_alpha_to_half_and_reduces_magnitude() {
        let f = neg_norm_sq(2);
        let cfg = SampleConfig::default();
        let bbox = f.domain().to_vec();
        let start = ConditionInstance::new(
            ConditionId::Convex0,
            1.0,
            Vector::from_slice(&[3.7, -2.1]).unwrap(),
            Vector::from_slice(&[-5.2, 0.4]).unwrap(),
            Some(0.81),
        );
        let shrunk = shrink(&f, &cfg, &start, &bbox);
        assert_eq!(shrunk.alpha, Some(0.5));
        let start_mag: f64 = start.x.eu_norm() + start.y.eu_norm();
        let shrunk_mag: f64 = shrunk.x.eu_norm() + shrunk.y.eu_norm();
        assert!(shrunk_mag < start_mag);
        let r = residual(&f, &shrunk).unwrap();
        assert!(!cfg.tolerance.accept(r.value, r.scale));
    }

    #[test]
    fn shrink_is_identity_on_non_violating_instance() {
        let f = norm_sq_fn(1);
        let cfg = SampleConfig::default();
        let inst = ConditionInstance::new(
            ConditionId::Nest0,
            2.0,
            Vector::from_slice(&[1.0]).unwrap(),
            Vector::from_slice(&[0.0]).unwrap(),
            None,
        );
        let bbox = f.domain().to_vec();
        assert_eq!(shrink(&f, &cfg, &inst, &bbox), inst);
    }

    #[test]
    fn shrink_quartic_witness_approaches_violation_boundary() {
        // |g'| = 12x² stays above 2 down to |x| ≈ 0.41, so the witness can
        // shrink well below 1.
        let f = quartic1d();
        let cfg = SampleConfig::default();
        let bbox = f.domain().to_vec();
        let start = ConditionInstance::new(
            ConditionId::Nest0,
            2.0,
            Vector::from_slice(&[9.3]).unwrap(),
            Vector::from_slice(&[4.0]).unwrap(),
            None,
        );
        let shrunk = shrink(&f, &cfg, &start, &bbox);
        assert!(shrunk.x.coord(0).abs() <= 1.0, "got {:?}", shrunk.x);
        let r = residual(&f, &shrunk).unwrap();
        assert!(!cfg.tolerance.accept(r.value, r.scale));
    }

    #[test]
    fn axiom_suite_passes_and_is_seed_stable() {
        let cfg = SampleConfig::default().with_samples(500).with_seed(1);
        let report = axiom_suite(&cfg);
        assert_eq!(report.checks.len(), 8);
        assert!(report.all_passed());
        for c in &report.checks {
            assert!(c.worst_gap <= 1e-9, "{}: {:.3e}", c.name, c.worst_gap);
        }
        // A different seed changes values but not verdicts.
        let other = axiom_suite(&SampleConfig::default().with_samples(500).with_seed(2));
        assert!(other.all_passed());
    }

    #[test]
    fn no_false_alarms_on_the_square_identity() {
        // The scalar identity evaluated as a pseudo-condition: 100k samples,
        // no residual exceeds tolerance.
        let tol = ToleranceMode::default();
        for i in 0..100_000u64 {
            let mut rng = sample_rng(12345, i);
            let x: f64 = rng.gen_range(-10.0..10.0);
            let y: f64 = rng.gen_range(-10.0..10.0);
            let a: f64 = rng.gen_range(0.0..=1.0);
            let gap = crate::conditions::square_identity_gap(x, y, a).unwrap();
            assert!(tol.accept(gap.abs(), 1.0));
        }
    }
}
