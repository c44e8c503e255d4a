//! Evaluatable functions ℝⁿ→ℝ: the built-in catalog, analytic gradients
//! where known, a central finite-difference fallback, and the
//! convexity-preserving combinators (nonnegative scaling, sum, monotone
//! composition).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vecspace::Vector;

/// Default finite-difference step (central differences).
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Default per-coordinate domain box.
pub const DEFAULT_BOX: (f64, f64) = (-10.0, 10.0);

/// Radius of the origin ball excluded from sampling for the Euclidean norm
/// (its gradient is undefined at 0).
pub const NORM_EXCLUSION_RADIUS: f64 = 1e-3;

type EvalFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

/// Claims recorded on a function handle. Claims are metadata: the checker
/// spot-checks them numerically, it never trusts them as proof.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tags {
    pub claims_convex: bool,
    /// Claimed gradient-Lipschitz constant, when known.
    pub claims_l_smooth: Option<f64>,
    /// Deliberate counterexample entries (non-convex or non-smooth controls).
    pub control: bool,
}

/// An evaluatable f: ℝⁿ→ℝ with optional analytic gradient and a closed
/// domain box.
#[derive(Clone)]
pub struct FunctionHandle {
    name: String,
    dim: usize,
    eval_fn: EvalFn,
    grad_fn: Option<GradFn>,
    domain: Vec<(f64, f64)>,
    tags: Tags,
    /// Points with ‖x‖ below this radius are rejected from sampling and
    /// gradient evaluation (undefined gradient at the origin).
    excluded_origin_radius: Option<f64>,
    fd_step: f64,
}

impl std::fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("tags", &self.tags)
            .finish()
    }
}

impl FunctionHandle {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        eval_fn: EvalFn,
        grad_fn: Option<GradFn>,
        tags: Tags,
    ) -> Self {
        assert!(dim >= 1, "dim must be positive");
        FunctionHandle {
            name: name.into(),
            dim,
            eval_fn,
            grad_fn,
            domain: vec![DEFAULT_BOX; dim],
            tags,
            excluded_origin_radius: None,
            fd_step: DEFAULT_FD_STEP,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tags(&self) -> &Tags {
        &self.tags
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn excluded_origin_radius(&self) -> Option<f64> {
        self.excluded_origin_radius
    }

    pub fn with_domain(mut self, domain: Vec<(f64, f64)>) -> Self {
        assert_eq!(domain.len(), self.dim);
        for &(lo, hi) in &domain {
            assert!(lo < hi, "domain interval must be nonempty");
        }
        self.domain = domain;
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        assert!(h > 0.0);
        self.fd_step = h;
        self
    }

    fn with_excluded_origin(mut self, radius: f64) -> Self {
        self.excluded_origin_radius = Some(radius);
        self
    }

    pub fn has_analytic_grad(&self) -> bool {
        self.grad_fn.is_some()
    }

    /// True when the point is acceptable for sampling: inside the domain
    /// box and outside any excluded region.
    pub fn sample_ok(&self, x: &Vector) -> bool {
        if x.dim() != self.dim {
            return false;
        }
        for (i, &(lo, hi)) in self.domain.iter().enumerate() {
            let c = x.coord(i);
            if c < lo || c > hi {
                return false;
            }
        }
        if let Some(r) = self.excluded_origin_radius {
            if x.eu_norm() < r {
                return false;
            }
        }
        true
    }

    fn check_point(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: x.dim(),
            });
        }
        for (index, &(lo, hi)) in self.domain.iter().enumerate() {
            let value = x.coord(index);
            if value < lo || value > hi {
                return Err(Error::OutOfDomain {
                    index,
                    value,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        self.check_point(x)?;
        Ok((self.eval_fn)(x))
    }

    /// Gradient at x: analytic when available, otherwise central finite
    /// differences per coordinate with step `fd_step`.
    pub fn grad(&self, x: &Vector) -> Result<Vector> {
        self.check_point(x)?;
        if let Some(r) = self.excluded_origin_radius {
            if x.eu_norm() < r {
                return Err(Error::GradientUndefined {
                    name: self.name.clone(),
                    radius: r,
                });
            }
        }
        if let Some(g) = &self.grad_fn {
            return Ok(g(x));
        }
        self.grad_fd(x)
    }

    /// Central finite-difference gradient, independent of any analytic form.
    pub fn grad_fd(&self, x: &Vector) -> Result<Vector> {
        self.check_point(x)?;
        let h = self.fd_step;
        for (index, &(lo, hi)) in self.domain.iter().enumerate() {
            let c = x.coord(index);
            if c - h < lo || c + h > hi {
                return Err(Error::TooCloseToBoundary { index, h });
            }
        }
        let mut coords = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut plus: Vec<f64> = x.as_slice().to_vec();
            let mut minus = plus.clone();
            plus[i] += h;
            minus[i] -= h;
            let fp = (self.eval_fn)(&Vector::new(plus)?);
            let fm = (self.eval_fn)(&Vector::new(minus)?);
            coords.push((fp - fm) / (2.0 * h));
        }
        Vector::new(coords)
    }
}

/// a·f for a ≥ 0 (Thm.-1-style closure: preserves convexity).
pub fn scale(a: f64, f: &FunctionHandle) -> Result<FunctionHandle> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::NegativeScale { factor: a });
    }
    let ef = f.eval_fn.clone();
    let eval: EvalFn = Arc::new(move |x| a * ef(x));
    let grad: Option<GradFn> = f.grad_fn.as_ref().map(|g| {
        let g = g.clone();
        let gf: GradFn = Arc::new(move |x: &Vector| g(x).scale(a));
        gf
    });
    let tags = Tags {
        claims_convex: f.tags.claims_convex,
        claims_l_smooth: f.tags.claims_l_smooth.map(|l| a * l),
        control: f.tags.control,
    };
    let mut out = FunctionHandle::new(format!("scale({a}, {})", f.name), f.dim, eval, grad, tags);
    out.domain = f.domain.clone();
    out.excluded_origin_radius = f.excluded_origin_radius;
    out.fd_step = f.fd_step;
    Ok(out)
}

/// f + g (preserves convexity; smoothness constants add).
pub fn fn_sum(f: &FunctionHandle, g: &FunctionHandle) -> Result<FunctionHandle> {
    if f.dim != g.dim {
        return Err(Error::DimensionMismatch {
            left: f.dim,
            right: g.dim,
        });
    }
    let (ef, eg) = (f.eval_fn.clone(), g.eval_fn.clone());
    let eval: EvalFn = Arc::new(move |x| ef(x) + eg(x));
    let grad: Option<GradFn> = match (&f.grad_fn, &g.grad_fn) {
        (Some(gf), Some(gg)) => {
            let (gf, gg) = (gf.clone(), gg.clone());
            Some(Arc::new(move |x: &Vector| {
                gf(x).add(&gg(x)).expect("same dim")
            }))
        }
        _ => None,
    };
    let tags = Tags {
        claims_convex: f.tags.claims_convex && g.tags.claims_convex,
        claims_l_smooth: match (f.tags.claims_l_smooth, g.tags.claims_l_smooth) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        },
        control: f.tags.control || g.tags.control,
    };
    // Domain is the intersection of the operands' boxes.
    let domain: Vec<(f64, f64)> = f
        .domain
        .iter()
        .zip(&g.domain)
        .map(|(&(a, b), &(c, d))| (a.max(c), b.min(d)))
        .collect();
    for &(lo, hi) in &domain {
        if lo >= hi {
            return Err(Error::Config(format!(
                "empty domain intersection for sum({}, {})",
                f.name, g.name
            )));
        }
    }
    let mut out = FunctionHandle::new(
        format!("sum({}, {})", f.name, g.name),
        f.dim,
        eval,
        grad,
        tags,
    );
    out.domain = domain;
    out.excluded_origin_radius = f
        .excluded_origin_radius
        .into_iter()
        .chain(g.excluded_origin_radius)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    out.fd_step = f.fd_step.min(g.fd_step);
    Ok(out)
}

/// h∘f for a univariate h the caller asserts is convex and monotone
/// increasing on the range of f. The assertion is recorded in the tags,
/// not verified symbolically; the checker spot-checks it on samples.
pub fn compose_mono(h: &FunctionHandle, f: &FunctionHandle) -> Result<FunctionHandle> {
    if h.dim != 1 {
        return Err(Error::DimensionMismatch {
            left: 1,
            right: h.dim,
        });
    }
    let (eh, ef) = (h.eval_fn.clone(), f.eval_fn.clone());
    let eval: EvalFn = {
        let ef = ef.clone();
        Arc::new(move |x| {
            let t = ef(x);
            eh(&Vector::new(vec![t]).expect("inner value finite"))
        })
    };
    // Chain rule h'(f(x))·f'(x) when both parts have analytic gradients.
    let grad: Option<GradFn> = match (&h.grad_fn, &f.grad_fn) {
        (Some(gh), Some(gf)) => {
            let (gh, gf, ef) = (gh.clone(), gf.clone(), ef.clone());
            Some(Arc::new(move |x: &Vector| {
                let t = ef(x);
                let hp = gh(&Vector::new(vec![t]).expect("finite")).coord(0);
                gf(x).scale(hp)
            }))
        }
        _ => None,
    };
    let tags = Tags {
        claims_convex: h.tags.claims_convex && f.tags.claims_convex,
        claims_l_smooth: None,
        control: h.tags.control || f.tags.control,
    };
    let mut out = FunctionHandle::new(
        format!("compose({}, {})", h.name, f.name),
        f.dim,
        eval,
        grad,
        tags,
    );
    out.domain = f.domain.clone();
    out.excluded_origin_radius = f.excluded_origin_radius;
    out.fd_step = f.fd_step;
    Ok(out)
}

/// Built-in test functions.
pub mod catalog {
    use super::*;

    /// f(x) = x² on ℝ.
    pub fn square() -> FunctionHandle {
        FunctionHandle::new(
            "square",
            1,
            Arc::new(|x: &Vector| x.coord(0) * x.coord(0)),
            Some(Arc::new(|x: &Vector| x.scale(2.0))),
            Tags {
                claims_convex: true,
                claims_l_smooth: Some(2.0),
                control: false,
            },
        )
    }

    /// f(t) = t² restricted to t ≥ 0, where it is convex and monotone
    /// increasing; the admissible outer function for `compose`.
    pub fn square_pos() -> FunctionHandle {
        FunctionHandle::new(
            "square_pos",
            1,
            Arc::new(|x: &Vector| x.coord(0) * x.coord(0)),
            Some(Arc::new(|x: &Vector| x.scale(2.0))),
            Tags {
                claims_convex: true,
                claims_l_smooth: Some(2.0),
                control: false,
            },
        )
        .with_domain(vec![(0.0, 20.0)])
    }

    /// f(x) = ‖x‖₂. Convex but not differentiable at the origin; a ball of
    /// radius 1e-3 around 0 is excluded from sampling.
    pub fn eu_norm_fn(dim: usize) -> FunctionHandle {
        FunctionHandle::new(
            "norm",
            dim,
            Arc::new(|x: &Vector| x.eu_norm()),
            Some(Arc::new(|x: &Vector| x.scale(1.0 / x.eu_norm()))),
            Tags {
                claims_convex: true,
                claims_l_smooth: None,
                control: false,
            },
        )
        .with_excluded_origin(NORM_EXCLUSION_RADIUS)
    }

    /// f(x) = ‖x‖₂².
    pub fn norm_sq_fn(dim: usize) -> FunctionHandle {
        FunctionHandle::new(
            "norm2",
            dim,
            Arc::new(|x: &Vector| x.norm_sq()),
            Some(Arc::new(|x: &Vector| x.scale(2.0))),
            Tags {
                claims_convex: true,
                claims_l_smooth: Some(2.0),
                control: false,
            },
        )
    }

    /// Constant function. The default constant 1337 matches the witness
    /// used throughout the test suite.
    pub fn const_c(dim: usize, c: f64) -> FunctionHandle {
        FunctionHandle::new(
            format!("const({c})"),
            dim,
            Arc::new(move |_x: &Vector| c),
            Some(Arc::new(|x: &Vector| Vector::zero(x.dim()))),
            Tags {
                claims_convex: true,
                claims_l_smooth: Some(0.0),
                control: false,
            },
        )
    }

    pub fn const_default(dim: usize) -> FunctionHandle {
        const_c(dim, 1337.0)
    }

    /// f(x) = ⟨g, x⟩ + b.
    pub fn affine(g: Vector, b: f64) -> FunctionHandle {
        let grad = g.clone();
        FunctionHandle::new(
            "affine",
            g.dim(),
            Arc::new(move |x: &Vector| g.dot(x).expect("dim checked") + b),
            Some(Arc::new(move |_x: &Vector| grad.clone())),
            Tags {
                claims_convex: true,
                claims_l_smooth: Some(0.0),
                control: false,
            },
        )
    }

    /// f(x) = Σ dᵢxᵢ² with dᵢ ≥ 0; gradient Lipschitz constant 2·max dᵢ.
    pub fn diag_quadratic(ds: Vec<f64>) -> Result<FunctionHandle> {
        if ds.is_empty() {
            return Err(Error::Config("diagq needs at least one coefficient".into()));
        }
        for &d in &ds {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::Config(format!(
                    "diagq coefficients must be nonnegative, got {d}"
                )));
            }
        }
        let dim = ds.len();
        let l = 2.0 * ds.iter().cloned().fold(0.0f64, f64::max);
        let ds_grad = ds.clone();
        Ok(FunctionHandle::new(
            format!(
                "diagq({})",
                ds.iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            dim,
            Arc::new(move |x: &Vector| {
                let mut s = 0.0;
                for i in 0..x.dim() {
                    s += ds[i] * x.coord(i) * x.coord(i);
                }
                s
            }),
            Some(Arc::new(move |x: &Vector| {
                Vector::new(
                    (0..x.dim())
                        .map(|i| 2.0 * ds_grad[i] * x.coord(i))
                        .collect(),
                )
                .expect("finite")
            })),
            Tags {
                claims_convex: true,
                claims_l_smooth: Some(l),
                control: false,
            },
        ))
    }

    /// f(x) = −‖x‖₂², a strictly concave control.
    pub fn neg_norm_sq(dim: usize) -> FunctionHandle {
        FunctionHandle::new(
            "neg_norm2",
            dim,
            Arc::new(|x: &Vector| -x.norm_sq()),
            Some(Arc::new(|x: &Vector| x.scale(-2.0))),
            Tags {
                claims_convex: false,
                claims_l_smooth: Some(2.0),
                control: true,
            },
        )
    }

    /// f(x) = x⁴, convex but with a gradient that is not globally
    /// Lipschitz; the non-smooth control.
    pub fn quartic1d() -> FunctionHandle {
        FunctionHandle::new(
            "quartic",
            1,
            Arc::new(|x: &Vector| {
                let t = x.coord(0);
                t * t * t * t
            }),
            Some(Arc::new(|x: &Vector| {
                let t = x.coord(0);
                Vector::new(vec![4.0 * t * t * t]).expect("finite")
            })),
            Tags {
                claims_convex: true,
                claims_l_smooth: None,
                control: true,
            },
        )
    }

    /// All built-in entries at a representative dimension, for sweep tests.
    pub fn all_entries(dim: usize) -> Vec<FunctionHandle> {
        vec![
            square(),
            square_pos(),
            eu_norm_fn(dim),
            norm_sq_fn(dim),
            const_default(dim),
            affine(Vector::new(vec![1.0; dim]).unwrap(), 0.5),
            diag_quadratic((1..=dim).map(|i| i as f64).collect()).unwrap(),
            neg_norm_sq(dim),
            quartic1d(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(coords: &[f64]) -> Vector {
        Vector::from_slice(coords).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(square().eval(&v(&[3.0])).unwrap(), 9.0);
        assert_eq!(const_default(2).eval(&v(&[4.2, -7.0])).unwrap(), 1337.0);
        assert_eq!(norm_sq_fn(2).eval(&v(&[3.0, 4.0])).unwrap(), 25.0);
    }

    #[test]
    fn eval_out_of_domain_names_coordinate() {
        let err = square().eval(&v(&[11.0])).unwrap_err();
        assert!(matches!(err, Error::OutOfDomain { index: 0, .. }));
    }

    #[test]
    fn grad_examples() {
        // Central-difference oracle for norm2 at (1,2): expected (2,4).
        let f = norm_sq_fn(2);
        let g = f.grad(&v(&[1.0, 2.0])).unwrap();
        assert_eq!(g, v(&[2.0, 4.0]));
        let g_fd = f.grad_fd(&v(&[1.0, 2.0])).unwrap();
        assert!((g_fd.coord(0) - 2.0).abs() < 1e-8);
        assert!((g_fd.coord(1) - 4.0).abs() < 1e-8);

        let g = square().grad(&v(&[3.0])).unwrap();
        assert_eq!(g, v(&[6.0]));

        let g = const_default(3).grad(&v(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(g, Vector::zero(3));
    }

    #[test]
    fn grad_fd_boundary_error() {
        let f = square();
        let err = f.grad_fd(&v(&[10.0])).unwrap_err();
        assert!(matches!(err, Error::TooCloseToBoundary { .. }));
    }

    #[test]
    fn norm_gradient_undefined_at_origin() {
        let f = eu_norm_fn(2);
        let err = f.grad(&v(&[1e-5, 0.0])).unwrap_err();
        assert!(matches!(err, Error::GradientUndefined { .. }));
        assert!(!f.sample_ok(&v(&[1e-5, 0.0])));
        assert!(f.sample_ok(&v(&[1.0, 0.0])));
    }

    #[test]
    fn combinator_examples() {
        let sq = square();
        let zero = scale(0.0, &sq).unwrap();
        assert_eq!(zero.eval(&v(&[7.3])).unwrap(), 0.0);

        let double = fn_sum(&sq, &sq).unwrap();
        assert_eq!(double.eval(&v(&[3.0])).unwrap(), 18.0);

        // h(t)=t² on t≥0 composed with ‖x‖ equals ‖x‖².
        let composed = compose_mono(&square_pos(), &eu_norm_fn(2)).unwrap();
        assert_eq!(composed.eval(&v(&[3.0, 4.0])).unwrap(), 25.0);
        let direct = norm_sq_fn(2);
        assert_eq!(
            composed.eval(&v(&[1.5, -2.0])).unwrap(),
            direct.eval(&v(&[1.5, -2.0])).unwrap()
        );

        assert!(matches!(
            scale(-1.0, &sq),
            Err(Error::NegativeScale { .. })
        ));
        assert!(matches!(
            fn_sum(&sq, &norm_sq_fn(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn combinator_tags_propagate() {
        let f = scale(2.0, &norm_sq_fn(2)).unwrap();
        assert!(f.tags().claims_convex);
        assert_eq!(f.tags().claims_l_smooth, Some(4.0));
        let s = fn_sum(&norm_sq_fn(2), &diag_quadratic(vec![1.0, 5.0]).unwrap()).unwrap();
        assert_eq!(s.tags().claims_l_smooth, Some(12.0));
    }

    fn interior_point(f: &FunctionHandle, rng: &mut impl Rng) -> Vector {
        // Margin keeps FD probes inside the box.
        loop {
            let coords: Vec<f64> = f
                .domain()
                .iter()
                .map(|&(lo, hi)| {
                    let m = 1e-3 * (hi - lo);
                    rng.gen_range(lo + m..hi - m)
                })
                .collect();
            let x = Vector::new(coords).unwrap();
            if f.sample_ok(&x) {
                return x;
            }
        }
    }

    // Gradient consistency: analytic vs central FD on 100 seeded interior
    // points, relative to 1+‖grad‖.
    #[test]
    fn analytic_gradient_matches_fd_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for f in catalog::all_entries(3) {
            if !f.has_analytic_grad() {
                continue;
            }
            for _ in 0..100 {
                let x = interior_point(&f, &mut rng);
                let ga = f.grad(&x).unwrap();
                let gf = f.grad_fd(&x).unwrap();
                let denom = 1.0 + ga.eu_norm();
                let err = ga.sub(&gf).unwrap().eu_norm() / denom;
                assert!(
                    err <= 1e-6,
                    "{}: FD mismatch {err:.3e} at {:?}",
                    f.name(),
                    x.as_slice()
                );
            }
        }
    }

    // Continuity surrogate: small input perturbations give small output
    // changes, bounded by the local gradient scale.
    #[test]
    fn continuity_surrogate() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for f in catalog::all_entries(3) {
            if f.tags().control {
                continue;
            }
            for _ in 0..100 {
                let x = interior_point(&f, &mut rng);
                let g = match f.grad_fd(&x) {
                    Ok(g) => g,
                    Err(_) => continue,
                };
                let k = 10.0 * (1.0 + g.eu_norm());
                let delta: Vec<f64> = (0..f.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let delta = Vector::new(delta).unwrap();
                let norm = delta.eu_norm();
                if norm == 0.0 {
                    continue;
                }
                let delta = delta.scale(1e-8 / norm);
                let xp = x.add(&delta).unwrap();
                if !f.sample_ok(&xp) {
                    continue;
                }
                let df = (f.eval(&xp).unwrap() - f.eval(&x).unwrap()).abs();
                assert!(
                    df <= k * 1e-8,
                    "{}: |Δf| = {df:.3e} exceeds {k:.3}·1e-8",
                    f.name()
                );
            }
        }
    }

    // Combinator algebra on sampled points.
    #[test]
    fn combinator_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = diag_quadratic(vec![1.0, 5.0]).unwrap();
        let ident = scale(1.0, &f).unwrap();
        let zero = const_c(2, 0.0);
        let plus_zero = fn_sum(&f, &zero).unwrap();
        let nested = scale(2.0, &scale(3.0, &f).unwrap()).unwrap();
        let six = scale(6.0, &f).unwrap();
        for _ in 0..200 {
            let x = interior_point(&f, &mut rng);
            let fx = f.eval(&x).unwrap();
            assert_eq!(ident.eval(&x).unwrap(), fx);
            assert_eq!(plus_zero.eval(&x).unwrap(), fx);
            let a = nested.eval(&x).unwrap();
            let b = six.eval(&x).unwrap();
            assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }
}
