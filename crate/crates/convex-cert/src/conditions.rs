//! Residual evaluators for the checkable inequalities: the seven Nesterov
//! smoothness conditions, zero- and first-order convexity, the
//! Cauchy-Schwarz gap, the scalar square identity, and the norm lemma.
//!
//! Sign convention: an instance satisfies its condition iff the residual
//! is ≤ 0 (up to the checker's tolerance). Squared metrics are used
//! wherever the inequality squares a norm; only the plain Lipschitz
//! condition compares unsquared norms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcs::FunctionHandle;
use crate::tolerance::ToleranceMode;
use crate::vecspace::Vector;

/// The nine checkable inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    /// Gradient Lipschitz continuity: ‖f′(x)−f′(y)‖ ≤ L‖x−y‖.
    Nest0,
    /// Descent lemma: f(y) ≤ f(x) + ⟨f′(x),y−x⟩ + (L/2)‖x−y‖².
    Nest1,
    /// f(x) + ⟨f′(x),y−x⟩ + (1/2L)‖f′(x)−f′(y)‖² ≤ f(y).
    Nest2,
    /// Co-coercivity: (1/L)‖f′(x)−f′(y)‖² ≤ ⟨f′(x)−f′(y),x−y⟩.
    Nest3,
    /// ⟨f′(x)−f′(y),x−y⟩ ≤ L‖x−y‖².
    Nest4,
    /// Interpolated form of Nest2 with α ∈ [0,1].
    Nest5,
    /// Interpolated form of Nest1 with α ∈ [0,1].
    Nest6,
    /// Zero-order convexity: f(αx+(1−α)y) ≤ αf(x)+(1−α)f(y).
    Convex0,
    /// First-order convexity: f(x) + ⟨f′(x),y−x⟩ ≤ f(y).
    Convex1,
}

pub const ALL_NESTEROV: [ConditionId; 7] = [
    ConditionId::Nest0,
    ConditionId::Nest1,
    ConditionId::Nest2,
    ConditionId::Nest3,
    ConditionId::Nest4,
    ConditionId::Nest5,
    ConditionId::Nest6,
];

impl ConditionId {
    pub fn requires_alpha(self) -> bool {
        matches!(
            self,
            ConditionId::Nest5 | ConditionId::Nest6 | ConditionId::Convex0
        )
    }

    pub fn requires_l(self) -> bool {
        !matches!(self, ConditionId::Convex0 | ConditionId::Convex1)
    }

    pub fn requires_grad(self) -> bool {
        !matches!(self, ConditionId::Convex0)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionId::Nest0 => "nest0",
            ConditionId::Nest1 => "nest1",
            ConditionId::Nest2 => "nest2",
            ConditionId::Nest3 => "nest3",
            ConditionId::Nest4 => "nest4",
            ConditionId::Nest5 => "nest5",
            ConditionId::Nest6 => "nest6",
            ConditionId::Convex0 => "convex0",
            ConditionId::Convex1 => "convex1",
        };
        f.write_str(s)
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "nest0" => ConditionId::Nest0,
            "nest1" => ConditionId::Nest1,
            "nest2" => ConditionId::Nest2,
            "nest3" => ConditionId::Nest3,
            "nest4" => ConditionId::Nest4,
            "nest5" => ConditionId::Nest5,
            "nest6" => ConditionId::Nest6,
            "convex0" => ConditionId::Convex0,
            "convex1" => ConditionId::Convex1,
            other => {
                return Err(Error::Config(format!(
                    "unknown condition `{other}` (expected nest0..nest6, convex0, convex1)"
                )))
            }
        })
    }
}

impl Serialize for ConditionId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ConditionId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One sample point at which a condition is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionInstance {
    pub cond: ConditionId,
    /// Lipschitz parameter; ignored by convex0/convex1.
    pub l: f64,
    pub x: Vector,
    pub y: Vector,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
}

impl ConditionInstance {
    pub fn new(cond: ConditionId, l: f64, x: Vector, y: Vector, alpha: Option<f64>) -> Self {
        ConditionInstance {
            cond,
            l,
            x,
            y,
            alpha,
        }
    }

    fn validate(&self, f: &FunctionHandle) -> Result<f64> {
        if self.x.dim() != self.y.dim() {
            return Err(Error::DimensionMismatch {
                left: self.x.dim(),
                right: self.y.dim(),
            });
        }
        if self.x.dim() != f.dim() {
            return Err(Error::DimensionMismatch {
                left: f.dim(),
                right: self.x.dim(),
            });
        }
        if self.cond.requires_l() && !(self.l.is_finite() && self.l > 0.0) {
            return Err(Error::NonPositiveL {
                cond: self.cond.to_string(),
                l: self.l,
            });
        }
        if self.cond.requires_alpha() {
            let alpha = self.alpha.ok_or_else(|| Error::MissingAlpha {
                cond: self.cond.to_string(),
            })?;
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::AlphaOutOfRange { alpha });
            }
            Ok(alpha)
        } else {
            Ok(0.0)
        }
    }
}

/// Left and right sides of one inequality instance. The residual is
/// lhs − rhs; the scale is what tolerance decisions are measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualValue {
    pub value: f64,
    pub scale: f64,
}

fn sides(lhs: f64, rhs: f64) -> ResidualValue {
    ResidualValue {
        value: lhs - rhs,
        scale: lhs.abs().max(rhs.abs()).max(1.0),
    }
}

/// Evaluate the residual of a condition instance. Negative (or within
/// tolerance of zero) means the instance satisfies the condition.
pub fn residual(f: &FunctionHandle, inst: &ConditionInstance) -> Result<ResidualValue> {
    let alpha = inst.validate(f)?;
    let (x, y, l) = (&inst.x, &inst.y, inst.l);
    let val = match inst.cond {
        ConditionId::Nest0 => {
            let (gx, gy) = (f.grad(x)?, f.grad(y)?);
            sides(gx.eu_metric(&gy)?, l * x.eu_metric(y)?)
        }
        ConditionId::Nest1 => {
            let gx = f.grad(x)?;
            let lhs = f.eval(y)?;
            let rhs = f.eval(x)? + gx.dot(&y.sub(x)?)? + 0.5 * l * x.metric_sq(y)?;
            sides(lhs, rhs)
        }
        ConditionId::Nest2 => {
            let (gx, gy) = (f.grad(x)?, f.grad(y)?);
            let lhs = f.eval(x)? + gx.dot(&y.sub(x)?)? + gx.metric_sq(&gy)? / (2.0 * l);
            sides(lhs, f.eval(y)?)
        }
        ConditionId::Nest3 => {
            let (gx, gy) = (f.grad(x)?, f.grad(y)?);
            let lhs = gx.metric_sq(&gy)? / l;
            let rhs = gx.sub(&gy)?.dot(&x.sub(y)?)?;
            sides(lhs, rhs)
        }
        ConditionId::Nest4 => {
            let (gx, gy) = (f.grad(x)?, f.grad(y)?);
            let lhs = gx.sub(&gy)?.dot(&x.sub(y)?)?;
            sides(lhs, l * x.metric_sq(y)?)
        }
        ConditionId::Nest5 => {
            let (gx, gy) = (f.grad(x)?, f.grad(y)?);
            let z = Vector::convex_combo(alpha, x, y)?;
            let lhs = f.eval(&z)? + alpha * (1.0 - alpha) / (2.0 * l) * gx.metric_sq(&gy)?;
            let rhs = alpha * f.eval(x)? + (1.0 - alpha) * f.eval(y)?;
            sides(lhs, rhs)
        }
        ConditionId::Nest6 => {
            let z = Vector::convex_combo(alpha, x, y)?;
            let lhs = alpha * f.eval(x)? + (1.0 - alpha) * f.eval(y)?;
            let rhs = f.eval(&z)? + alpha * (1.0 - alpha) * 0.5 * l * x.metric_sq(y)?;
            sides(lhs, rhs)
        }
        ConditionId::Convex0 => {
            let z = Vector::convex_combo(alpha, x, y)?;
            let lhs = f.eval(&z)?;
            let rhs = alpha * f.eval(x)? + (1.0 - alpha) * f.eval(y)?;
            sides(lhs, rhs)
        }
        ConditionId::Convex1 => {
            let gx = f.grad(x)?;
            let lhs = f.eval(x)? + gx.dot(&y.sub(x)?)?;
            sides(lhs, f.eval(y)?)
        }
    };
    Ok(val)
}

/// Cauchy-Schwarz gap ‖u‖·‖v‖ − |⟨u,v⟩|; nonnegative, zero exactly for
/// parallel vectors up to rounding.
pub fn cauchy_schwarz_gap(u: &Vector, v: &Vector) -> Result<f64> {
    Ok(u.eu_norm() * v.eu_norm() - u.dot(v)?.abs())
}

/// Gap of the scalar identity
/// a·x² + (1−a)·y² − (ax+(1−a)y)² = a(1−a)(x−y)²; zero up to rounding.
pub fn square_identity_gap(x: f64, y: f64, a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::AlphaOutOfRange { alpha: a });
    }
    let mix = a * x + (1.0 - a) * y;
    let lhs = a * x * x + (1.0 - a) * y * y - mix * mix;
    let rhs = a * (1.0 - a) * (x - y) * (x - y);
    Ok(lhs - rhs)
}

/// Gap of the norm lemma
/// a‖x‖² + (1−a)‖y‖² − a(1−a)‖x−y‖²; nonnegative for a ∈ [0,1].
pub fn norm_lemma_gap(x: &Vector, y: &Vector, a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::AlphaOutOfRange { alpha: a });
    }
    Ok(a * x.norm_sq() + (1.0 - a) * y.norm_sq() - a * (1.0 - a) * x.metric_sq(y)?)
}

/// The two gaps of the chain
/// L‖x−y‖² ≥ ‖f′(x)−f′(y)‖·‖x−y‖ ≥ ⟨f′(x)−f′(y),x−y⟩,
/// i.e. the Lipschitz-to-monotonicity argument. Applicable only where the
/// Lipschitz condition itself holds at the instance; otherwise returns
/// `InapplicableInstance`.
pub fn chain_0_implies_4_gap(
    f: &FunctionHandle,
    l: f64,
    x: &Vector,
    y: &Vector,
    tol: &ToleranceMode,
) -> Result<(f64, f64)> {
    let inst = ConditionInstance::new(ConditionId::Nest0, l, x.clone(), y.clone(), None);
    let r = residual(f, &inst)?;
    if !tol.accept(r.value, r.scale) {
        return Err(Error::InapplicableInstance);
    }
    let gdiff = f.grad(x)?.sub(&f.grad(y)?)?;
    let xdiff = x.sub(y)?;
    let middle = gdiff.eu_norm() * xdiff.eu_norm();
    let first = l * x.metric_sq(y)? - middle;
    let second = middle - gdiff.dot(&xdiff)?;
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::catalog::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(coords: &[f64]) -> Vector {
        Vector::from_slice(coords).unwrap()
    }

    fn inst(cond: ConditionId, l: f64, x: &[f64], y: &[f64], alpha: Option<f64>) -> ConditionInstance {
        ConditionInstance::new(cond, l, v(x), v(y), alpha)
    }

    #[test]
    fn condition_id_round_trips_as_string() {
        for c in ALL_NESTEROV
            .into_iter()
            .chain([ConditionId::Convex0, ConditionId::Convex1])
        {
            assert_eq!(c.to_string().parse::<ConditionId>().unwrap(), c);
        }
        assert!("nest9".parse::<ConditionId>().is_err());
    }

    #[test]
    fn nest0_tight_for_norm_sq() {
        // g(x) = 2x, so ‖g(x)−g(y)‖ = 2‖x−y‖ and L=2 is exactly tight.
        let f = norm_sq_fn(2);
        let r = residual(&f, &inst(ConditionId::Nest0, 2.0, &[1.0, 0.0], &[0.0, 0.0], None)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn residuals_vanish_at_equal_points() {
        let f = norm_sq_fn(2);
        for cond in [ConditionId::Nest1, ConditionId::Nest4] {
            let r = residual(&f, &inst(cond, 3.0, &[1.5, -2.0], &[1.5, -2.0], None)).unwrap();
            assert_eq!(r.value, 0.0);
        }
    }

    #[test]
    fn nest1_tight_for_square() {
        // f(y)−f(x)−g(x)(y−x)−(L/2)(x−y)² = 0 − 1 + 2 − 1 = 0 at L=2.
        let f = square();
        let r = residual(&f, &inst(ConditionId::Nest1, 2.0, &[1.0], &[0.0], None)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn missing_alpha_and_bad_l_are_errors() {
        let f = norm_sq_fn(1);
        assert!(matches!(
            residual(&f, &inst(ConditionId::Nest5, 2.0, &[1.0], &[0.0], None)),
            Err(Error::MissingAlpha { .. })
        ));
        assert!(matches!(
            residual(&f, &inst(ConditionId::Nest2, 0.0, &[1.0], &[0.0], None)),
            Err(Error::NonPositiveL { .. })
        ));
        assert!(matches!(
            residual(&f, &inst(ConditionId::Convex0, 1.0, &[1.0], &[0.0], Some(1.5))),
            Err(Error::AlphaOutOfRange { .. })
        ));
    }

    #[test]
    fn cauchy_schwarz_gap_examples() {
        assert_eq!(cauchy_schwarz_gap(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 1.0);
        let g = cauchy_schwarz_gap(&v(&[1.0, 1.0]), &v(&[2.0, 2.0])).unwrap();
        assert!(g.abs() <= 1e-12);
        assert_eq!(cauchy_schwarz_gap(&v(&[0.0, 0.0]), &v(&[5.0, 6.0])).unwrap(), 0.0);
    }

    #[test]
    fn square_identity_gap_examples() {
        // Both sides are 0.25 at (1, 0, 0.5).
        assert_eq!(square_identity_gap(1.0, 0.0, 0.5).unwrap(), 0.0);
        assert_eq!(square_identity_gap(7.0, 7.0, 0.3).unwrap(), 0.0);
        assert_eq!(square_identity_gap(2.5, -4.0, 0.0).unwrap(), 0.0);
        assert!(square_identity_gap(1.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn square_identity_is_an_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(-10.0..10.0);
            let y: f64 = rng.gen_range(-10.0..10.0);
            let a: f64 = rng.gen_range(0.0..=1.0);
            let gap = square_identity_gap(x, y, a).unwrap();
            assert!(gap.abs() <= 1e-9, "gap {gap:.3e} at ({x},{y},{a})");
        }
    }

    #[test]
    fn norm_lemma_gap_examples() {
        let y = v(&[2.0, -1.0]);
        assert_eq!(norm_lemma_gap(&v(&[9.0, 9.0]), &y, 0.0).unwrap(), y.norm_sq());
        // Antipodal tight case: 0.5 + 0.5 − 0.25·4 = 0.
        assert_eq!(norm_lemma_gap(&v(&[1.0, 0.0]), &v(&[-1.0, 0.0]), 0.5).unwrap(), 0.0);
        let x = v(&[3.0, 4.0]);
        assert_eq!(norm_lemma_gap(&x, &x, 0.7).unwrap(), x.norm_sq());
    }

    #[test]
    fn chain_gap_examples() {
        let tol = ToleranceMode::default();
        // Gradient 2(x−y) is parallel to x−y, so both links are tight.
        let f = norm_sq_fn(2);
        let (a, b) = chain_0_implies_4_gap(&f, 2.0, &v(&[3.0, 1.0]), &v(&[0.5, -2.0]), &tol).unwrap();
        assert!(a.abs() <= 1e-9 * 100.0);
        assert!(b.abs() <= 1e-9 * 100.0);

        let x = v(&[1.0, 1.0]);
        let (a, b) = chain_0_implies_4_gap(&f, 2.0, &x, &x, &tol).unwrap();
        assert_eq!((a, b), (0.0, 0.0));

        // Zero gradient: first gap is L‖x−y‖² = 1.
        let c = const_default(2);
        let (a, b) = chain_0_implies_4_gap(&c, 1.0, &v(&[1.0, 0.0]), &v(&[0.0, 0.0]), &tol).unwrap();
        assert_eq!((a, b), (1.0, 0.0));

        // Instance violating Lipschitz is inapplicable, not a failure.
        let q = quartic1d();
        assert!(matches!(
            chain_0_implies_4_gap(&q, 2.0, &v(&[9.0]), &v(&[1.0]), &tol),
            Err(Error::InapplicableInstance)
        ));
    }

    fn sample_instance(
        rng: &mut impl Rng,
        cond: ConditionId,
        l: f64,
        dim: usize,
        alpha: Option<f64>,
    ) -> ConditionInstance {
        let x = Vector::new((0..dim).map(|_| rng.gen_range(-9.0..9.0)).collect()).unwrap();
        let y = Vector::new((0..dim).map(|_| rng.gen_range(-9.0..9.0)).collect()).unwrap();
        ConditionInstance::new(cond, l, x, y, alpha)
    }

    // Quadratic tightness: diag quadratic with L = 2 max dᵢ satisfies all
    // seven conditions, and Lipschitz is an equality along the stiffest axis.
    #[test]
    fn quadratic_tightness() {
        let f = diag_quadratic(vec![1.0, 5.0]).unwrap();
        let l = 10.0;
        let tol = ToleranceMode::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            for cond in ALL_NESTEROV {
                let alpha = cond.requires_alpha().then(|| rng.gen_range(0.0..=1.0));
                let inst = sample_instance(&mut rng, cond, l, 2, alpha);
                let r = residual(&f, &inst).unwrap();
                assert!(
                    tol.accept(r.value, r.scale),
                    "{cond}: residual {:.3e}",
                    r.value
                );
            }
        }
        // Equality along the max-d coordinate.
        let r = residual(
            &f,
            &inst(ConditionId::Nest0, l, &[0.0, 3.0], &[0.0, -1.0], None),
        )
        .unwrap();
        assert!(r.value.abs() <= 1e-9 * r.scale);
    }

    // Each condition gets easier as L grows.
    #[test]
    fn residuals_nonincreasing_in_l() {
        let f = diag_quadratic(vec![1.0, 5.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let alpha = Some(rng.gen_range(0.0..=1.0));
            for cond in ALL_NESTEROV {
                let a = cond.requires_alpha().then(|| alpha.unwrap());
                let base = sample_instance(&mut rng, cond, 1.0, 2, a);
                let mut prev = f64::INFINITY;
                for l in [0.5, 1.0, 2.0, 10.0, 100.0] {
                    let mut i = base.clone();
                    i.l = l;
                    let r = residual(&f, &i).unwrap().value;
                    assert!(
                        r <= prev + 1e-9 * (1.0 + prev.abs()),
                        "{cond} residual increased in L"
                    );
                    prev = r;
                }
            }
        }
    }

    // At α ∈ {0,1} the interpolated conditions degenerate to equalities.
    #[test]
    fn alpha_endpoint_degeneracy() {
        let f = diag_quadratic(vec![1.0, 5.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            for alpha in [0.0, 1.0] {
                for cond in [ConditionId::Nest5, ConditionId::Nest6] {
                    let i = sample_instance(&mut rng, cond, 3.0, 2, Some(alpha));
                    let r = residual(&f, &i).unwrap();
                    assert!(r.value.abs() <= 1e-9 * r.scale, "{cond} at alpha={alpha}");
                }
            }
        }
    }

    // Zero-order convexity is symmetric under (x,y,α) ↔ (y,x,1−α).
    #[test]
    fn convex0_swap_symmetry() {
        let f = norm_sq_fn(3);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..500 {
            let a: f64 = rng.gen_range(0.0..=1.0);
            let i = sample_instance(&mut rng, ConditionId::Convex0, 1.0, 3, Some(a));
            let swapped = ConditionInstance::new(
                ConditionId::Convex0,
                i.l,
                i.y.clone(),
                i.x.clone(),
                Some(1.0 - a),
            );
            let r1 = residual(&f, &i).unwrap();
            let r2 = residual(&f, &swapped).unwrap();
            assert!((r1.value - r2.value).abs() <= 1e-9 * r1.scale.max(r2.scale));
        }
    }
}
