//! Coefficient models for matrix SDE eigenvalue flows and interacting
//! particle systems, plus a name-keyed registry of the built-in families.
//!
//! A model bundles the scalar coefficient functions of either
//!
//! ```text
//! dX = g(X) dB h(X) + h(X) dB' g(X) + b(X) dt          (matrix flow)
//! dx_i = sigma_i(x_i) dW_i
//!        + [ b(x_i) + sum_{j != i} pair(x_i, x_j) / (x_i - x_j) ] dt
//! ```
//!
//! For the matrix kind the particle-level coefficients are forced by the
//! eigenvalue dynamics: `sigma_i = 2 g h` and
//! `pair(x, y) = g^2(x) h^2(y) + g^2(y) h^2(x)`.
//!
//! Functions are evaluable objects, not symbolic expressions; square roots
//! clamp their argument at zero so that a transient numerical excursion
//! below the domain stays finite (domain exits are detected separately by
//! the integrator).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::laws::LawFamily;

/// Scalar coefficient function x -> R.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Per-particle diffusion (i, x) -> R.
pub type IndexedScalarFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;
/// Symmetric interaction numerator (x, y) -> R.
pub type PairFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Wrap a constant as a [`ScalarFn`].
pub fn constant(c: f64) -> ScalarFn {
    Arc::new(move |_| c)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelKind {
    /// Drift interaction comes from the matrix factorization
    /// `g^2(x) h^2(y) + g^2(y) h^2(x)`.
    MatrixEigenvalue,
    /// Free symmetric interaction kernel.
    GeneralParticle,
}

/// Large-N limits of the coefficients: `b_N -> b`, `N * pair_N -> pair`,
/// `sigma_N -> sigma` (zero for the matrix families).
#[derive(Clone)]
pub struct LimitCoefficients {
    pub b_limit: ScalarFn,
    pub pair_limit: PairFn,
    pub sigma_limit: ScalarFn,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CatalogError {
    #[error("{0}")]
    InvalidParameter(String),
    #[error("unknown model family `{0}`")]
    UnknownFamily(String),
}

/// A fully specified simulation model: coefficient functions, state domain,
/// particle count and (when known) the spectral law it converges to.
#[derive(Clone)]
pub struct CoefficientModel {
    name: String,
    kind: ModelKind,
    g: Option<ScalarFn>,
    h: Option<ScalarFn>,
    b: ScalarFn,
    sigma: IndexedScalarFn,
    pair: PairFn,
    domain: (f64, f64),
    n_particles: usize,
    limit_law_hint: Option<LawFamily>,
    limits: Option<LimitCoefficients>,
}

impl std::fmt::Debug for CoefficientModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoefficientModel")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("n_particles", &self.n_particles)
            .field("domain", &self.domain)
            .field("limit_law_hint", &self.limit_law_hint)
            .finish_non_exhaustive()
    }
}

impl CoefficientModel {
    /// Matrix-kind model; `sigma` and `pair` are derived from `(g, h)`.
    pub fn matrix(
        name: impl Into<String>,
        g: ScalarFn,
        h: ScalarFn,
        b: ScalarFn,
        domain: (f64, f64),
        n_particles: usize,
    ) -> Result<Self, CatalogError> {
        if n_particles == 0 {
            return Err(CatalogError::InvalidParameter(
                "n_particles must be positive".into(),
            ));
        }
        if !(domain.0 < domain.1) {
            return Err(CatalogError::InvalidParameter(
                "domain_lo must be below domain_hi".into(),
            ));
        }
        let (g2, h2) = (g.clone(), h.clone());
        let sigma: IndexedScalarFn = Arc::new(move |_i, x| 2.0 * g2(x) * h2(x));
        let (g3, h3) = (g.clone(), h.clone());
        let pair: PairFn = Arc::new(move |x, y| {
            let (gx, gy) = (g3(x), g3(y));
            let (hx, hy) = (h3(x), h3(y));
            gx * gx * hy * hy + gy * gy * hx * hx
        });
        Ok(Self {
            name: name.into(),
            kind: ModelKind::MatrixEigenvalue,
            g: Some(g),
            h: Some(h),
            b,
            sigma,
            pair,
            domain,
            n_particles,
            limit_law_hint: None,
            limits: None,
        })
    }

    /// General particle model with free diffusion and interaction kernel.
    pub fn particle(
        name: impl Into<String>,
        sigma: IndexedScalarFn,
        b: ScalarFn,
        pair: PairFn,
        domain: (f64, f64),
        n_particles: usize,
    ) -> Result<Self, CatalogError> {
        if n_particles == 0 {
            return Err(CatalogError::InvalidParameter(
                "n_particles must be positive".into(),
            ));
        }
        if !(domain.0 < domain.1) {
            return Err(CatalogError::InvalidParameter(
                "domain_lo must be below domain_hi".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            kind: ModelKind::GeneralParticle,
            g: None,
            h: None,
            b,
            sigma,
            pair,
            domain,
            n_particles,
            limit_law_hint: None,
            limits: None,
        })
    }

    pub fn with_limit_law(mut self, law: LawFamily) -> Self {
        self.limit_law_hint = Some(law);
        self
    }

    pub fn with_limits(mut self, limits: LimitCoefficients) -> Self {
        self.limits = Some(limits);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn limit_law_hint(&self) -> Option<&LawFamily> {
        self.limit_law_hint.as_ref()
    }

    pub fn limits(&self) -> Option<&LimitCoefficients> {
        self.limits.as_ref()
    }

    /// Left diffusion factor (matrix kind only).
    pub fn g(&self, x: f64) -> Option<f64> {
        self.g.as_ref().map(|f| f(x))
    }

    /// Right diffusion factor (matrix kind only).
    pub fn h(&self, x: f64) -> Option<f64> {
        self.h.as_ref().map(|f| f(x))
    }

    pub fn b(&self, x: f64) -> f64 {
        (self.b)(x)
    }

    pub fn sigma(&self, i: usize, x: f64) -> f64 {
        (self.sigma)(i, x)
    }

    pub fn pair(&self, x: f64, y: f64) -> f64 {
        (self.pair)(x, y)
    }

    /// Replace the particle count, keeping coefficients as-is. Only
    /// meaningful for kernels that do not bake `n` into their closures.
    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Dyson flow: `g = (2n)^{-1/2}`, `h = 1`, `b = 0` on the whole line.
/// Converges to the semicircle law; `n * pair = 1` exactly.
pub fn make_dyson(n: usize) -> Result<CoefficientModel, CatalogError> {
    if n == 0 {
        return Err(CatalogError::InvalidParameter("n must be positive".into()));
    }
    let gamma = 1.0 / (2.0 * n as f64).sqrt();
    let model = CoefficientModel::matrix(
        "dyson",
        constant(gamma),
        constant(1.0),
        constant(0.0),
        (f64::NEG_INFINITY, f64::INFINITY),
        n,
    )?;
    Ok(model
        .with_limit_law(LawFamily::Semicircle)
        .with_limits(LimitCoefficients {
            b_limit: constant(0.0),
            pair_limit: Arc::new(|_, _| 1.0),
            sigma_limit: constant(0.0),
        }))
}

/// Wishart flow with shape `p > n - 1`: `g = sqrt(x^+)`, `h = n^{-1/2}`,
/// `b = p/n` on `(0, inf)`. Converges to the Marchenko-Pastur law with
/// ratio `c = p/n`; `n * pair(x, y) = x + y` exactly.
pub fn make_wishart(n: usize, p: usize) -> Result<CoefficientModel, CatalogError> {
    if n == 0 || p == 0 {
        return Err(CatalogError::InvalidParameter(
            "n and p must be positive".into(),
        ));
    }
    if p <= n - 1 {
        return Err(CatalogError::InvalidParameter(format!(
            "wishart requires p > n - 1 (got n={n}, p={p})"
        )));
    }
    let c = p as f64 / n as f64;
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let model = CoefficientModel::matrix(
        "wishart",
        Arc::new(|x: f64| x.max(0.0).sqrt()),
        constant(inv_sqrt_n),
        constant(c),
        (0.0, f64::INFINITY),
        n,
    )?;
    Ok(model
        .with_limit_law(LawFamily::MarchenkoPastur { c })
        .with_limits(LimitCoefficients {
            b_limit: constant(c),
            pair_limit: Arc::new(|x, y| x + y),
            sigma_limit: constant(0.0),
        }))
}

/// Beta-Laguerre particle system: `sigma_i(x) = 2 sqrt(x^+ / n)`,
/// `b = beta * alpha / n`, `pair(x, y) = beta (x + y) / n` on `(0, inf)`.
/// Converges to the Marchenko-Pastur law with ratio `c = alpha / n` run at
/// rate `beta`; non-collision needs `alpha >= n` (documented, not enforced).
pub fn make_beta_laguerre(
    n: usize,
    beta: f64,
    alpha_param: f64,
) -> Result<CoefficientModel, CatalogError> {
    if n == 0 {
        return Err(CatalogError::InvalidParameter("n must be positive".into()));
    }
    if !(beta > 0.0) {
        return Err(CatalogError::InvalidParameter(
            "beta must be positive".into(),
        ));
    }
    if !(alpha_param > 0.0) {
        return Err(CatalogError::InvalidParameter(
            "alpha_param must be positive".into(),
        ));
    }
    let nf = n as f64;
    let c = alpha_param / nf;
    let b = beta * alpha_param / nf;
    let pair_scale = beta / nf;
    let model = CoefficientModel::particle(
        "beta_laguerre",
        Arc::new(move |_i, x: f64| 2.0 * (x.max(0.0) / nf).sqrt()),
        constant(b),
        Arc::new(move |x, y| pair_scale * (x + y)),
        (0.0, f64::INFINITY),
        n,
    )?;
    Ok(model
        .with_limit_law(LawFamily::BetaMarchenkoPastur { c, beta })
        .with_limits(LimitCoefficients {
            b_limit: constant(beta * c),
            pair_limit: Arc::new(move |x, y| beta * (x + y)),
            sigma_limit: constant(0.0),
        }))
}

/// Rescale a model given with unnormalized coefficients to its N-normalized
/// form: `sigma_i^N(x) = sigma_i(Nx)/N`, `b_N(x) = a(Nx)/N`,
/// `pair_N(x, y) = pair(Nx, Ny)/N^2`. For the matrix kind the diffusion
/// factors split symmetrically: `g_N(x) = g(Nx)/sqrt(N)`, likewise `h_N`.
pub fn normalize_model(raw: &CoefficientModel, n: usize) -> Result<CoefficientModel, CatalogError> {
    if n == 0 {
        return Err(CatalogError::InvalidParameter("n must be positive".into()));
    }
    let nf = n as f64;
    let name = format!("{}_normalized", raw.name);
    let domain = (raw.domain.0 / nf, raw.domain.1 / nf);
    let b_raw = raw.b.clone();
    let b: ScalarFn = Arc::new(move |x| b_raw(nf * x) / nf);
    let model = match raw.kind {
        ModelKind::MatrixEigenvalue => {
            let g_raw = raw.g.clone().expect("matrix kind carries g");
            let h_raw = raw.h.clone().expect("matrix kind carries h");
            let sqrt_n = nf.sqrt();
            CoefficientModel::matrix(
                name,
                Arc::new(move |x| g_raw(nf * x) / sqrt_n),
                Arc::new(move |x| h_raw(nf * x) / sqrt_n),
                b,
                domain,
                n,
            )?
        }
        ModelKind::GeneralParticle => {
            let sigma_raw = raw.sigma.clone();
            let pair_raw = raw.pair.clone();
            CoefficientModel::particle(
                name,
                Arc::new(move |i, x| sigma_raw(i, nf * x) / nf),
                b,
                Arc::new(move |x, y| pair_raw(nf * x, nf * y) / (nf * nf)),
                domain,
                n,
            )?
        }
    };
    Ok(model)
}

/// Construction parameters accepted by the registry families.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub p: Option<usize>,
    pub beta: Option<f64>,
    pub alpha_param: Option<f64>,
}

/// One catalog family, constructible by name from runtime parameters.
pub trait ModelFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, params: &ModelParams) -> Result<CoefficientModel, CatalogError>;
}

struct DysonFamily;

impl ModelFamily for DysonFamily {
    fn name(&self) -> &'static str {
        "dyson"
    }

    fn build(&self, params: &ModelParams) -> Result<CoefficientModel, CatalogError> {
        reject_extras("dyson", params, false, false)?;
        make_dyson(params.n)
    }
}

struct WishartFamily;

impl ModelFamily for WishartFamily {
    fn name(&self) -> &'static str {
        "wishart"
    }

    fn build(&self, params: &ModelParams) -> Result<CoefficientModel, CatalogError> {
        reject_extras("wishart", params, true, false)?;
        let p = params
            .p
            .ok_or_else(|| CatalogError::InvalidParameter("wishart requires p".into()))?;
        make_wishart(params.n, p)
    }
}

struct BetaLaguerreFamily;

impl ModelFamily for BetaLaguerreFamily {
    fn name(&self) -> &'static str {
        "beta_laguerre"
    }

    fn build(&self, params: &ModelParams) -> Result<CoefficientModel, CatalogError> {
        reject_extras("beta_laguerre", params, false, true)?;
        let beta = params.beta.ok_or_else(|| {
            CatalogError::InvalidParameter("beta_laguerre requires beta".into())
        })?;
        let alpha = params.alpha_param.ok_or_else(|| {
            CatalogError::InvalidParameter("beta_laguerre requires alpha_param".into())
        })?;
        make_beta_laguerre(params.n, beta, alpha)
    }
}

fn reject_extras(
    family: &str,
    params: &ModelParams,
    takes_p: bool,
    takes_beta: bool,
) -> Result<(), CatalogError> {
    if params.p.is_some() && !takes_p {
        return Err(CatalogError::InvalidParameter(format!(
            "{family} does not take p"
        )));
    }
    if (params.beta.is_some() || params.alpha_param.is_some()) && !takes_beta {
        return Err(CatalogError::InvalidParameter(format!(
            "{family} does not take beta/alpha_param"
        )));
    }
    Ok(())
}

/// Name-keyed registry of model families.
pub struct ModelRegistry {
    families: BTreeMap<&'static str, Box<dyn ModelFamily>>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        Self {
            families: BTreeMap::new(),
        }
    }

    /// Registry holding the built-in families.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(DysonFamily));
        r.register(Box::new(WishartFamily));
        r.register(Box::new(BetaLaguerreFamily));
        r
    }

    pub fn register(&mut self, family: Box<dyn ModelFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.families.keys().copied()
    }

    pub fn build(&self, name: &str, params: &ModelParams) -> Result<CoefficientModel, CatalogError> {
        self.families
            .get(name)
            .ok_or_else(|| CatalogError::UnknownFamily(name.to_string()))?
            .build(params)
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn dyson_coefficients() {
        let m = make_dyson(1).unwrap();
        // sigma = 2 g h = 2 / sqrt(2) = sqrt(2), independent of x
        assert!((m.sigma(0, 0.3) - 2.0f64.sqrt()).abs() < 1e-15);

        let m = make_dyson(8).unwrap();
        assert!((m.pair(1.0, -5.0) - 0.125).abs() < 1e-15);
        assert!((8.0 * m.pair(0.1, 0.2) - 1.0).abs() < 1e-15);

        let m = make_dyson(100).unwrap();
        assert!((m.pair(3.0, -2.0) - 0.01).abs() < 1e-15);
        assert_eq!(m.b(2.0), 0.0);
        assert_eq!(m.kind(), ModelKind::MatrixEigenvalue);
    }

    #[test]
    fn wishart_coefficients() {
        let m = make_wishart(2, 4).unwrap();
        assert_eq!(m.b(7.0), 2.0);
        // n * pair(x, y) = x + y exactly for these coefficients
        assert!((2.0 * m.pair(1.0, 3.0) - 4.0).abs() < 1e-15);

        assert!(make_wishart(2, 1).is_err());

        let m = make_wishart(10, 20).unwrap();
        let expect = 2.0 * 2.0 / 10.0f64.sqrt();
        assert!((m.sigma(3, 4.0) - expect).abs() < 1e-15);
        // clamped square root below the domain
        assert_eq!(m.sigma(0, -1.0), 0.0);
    }

    #[test]
    fn beta_laguerre_coefficients() {
        let m = make_beta_laguerre(4, 2.0, 8.0).unwrap();
        assert!((m.b(0.5) - 4.0).abs() < 1e-15);
        assert!((m.pair(1.0, 2.0) - 1.5).abs() < 1e-15);
        assert_eq!(m.kind(), ModelKind::GeneralParticle);

        // single particle reduces to a squared-Bessel-type diffusion
        let m = make_beta_laguerre(1, 1.0, 1.0).unwrap();
        assert!((m.sigma(0, 4.0) - 4.0).abs() < 1e-15);

        assert!(make_beta_laguerre(10, 0.0, 1.0).is_err());
        assert!(make_beta_laguerre(10, 1.0, -2.0).is_err());
    }

    #[test]
    fn normalization_rescales_coefficients() {
        // a(x) = x stays fixed under normalization
        let raw = CoefficientModel::particle(
            "raw",
            Arc::new(|_, _| 1.0),
            Arc::new(|x| x),
            Arc::new(|_, _| 1.0),
            (f64::NEG_INFINITY, f64::INFINITY),
            10,
        )
        .unwrap();
        let m = normalize_model(&raw, 10).unwrap();
        assert!((m.b(3.5) - 3.5).abs() < 1e-15);
        // pair = 1 scales to 1/25 at n = 5
        let m5 = normalize_model(&raw, 5).unwrap();
        assert!((m5.pair(0.4, 0.7) - 0.04).abs() < 1e-15);

        // sigma(x) = 2 sqrt(x): sigma_N(1) = 2 sqrt(4) / 4 = 1 at n = 4
        let raw = CoefficientModel::particle(
            "besq",
            Arc::new(|_, x: f64| 2.0 * x.max(0.0).sqrt()),
            Arc::new(|_| 0.0),
            Arc::new(|x, y| x + y),
            (0.0, f64::INFINITY),
            4,
        )
        .unwrap();
        let m = normalize_model(&raw, 4).unwrap();
        assert!((m.sigma(0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_kind_forces_sigma_and_pair() {
        // pair - [g^2(x) h^2(y) + g^2(y) h^2(x)] = 0 and sigma = 2 g h
        // on a bounded probe grid, for every matrix-kind catalog model.
        for m in [make_dyson(7).unwrap(), make_wishart(5, 9).unwrap()] {
            for ix in 0..20 {
                let x = 0.05 + 0.47 * ix as f64;
                let y = 0.11 + 0.31 * ix as f64;
                let g = |v: f64| m.g(v).unwrap();
                let h = |v: f64| m.h(v).unwrap();
                let expect = g(x).powi(2) * h(y).powi(2) + g(y).powi(2) * h(x).powi(2);
                assert_eq!(m.pair(x, y), expect);
                assert_eq!(m.sigma(3, x), 2.0 * g(x) * h(x));
            }
        }
    }

    #[test]
    fn pair_is_symmetric_on_random_probes() {
        let models = [
            make_dyson(13).unwrap(),
            make_wishart(6, 11).unwrap(),
            make_beta_laguerre(9, 1.5, 20.0).unwrap(),
        ];
        let mut rng = SplitMix64::new(99);
        for _ in 0..10_000 {
            let x = 20.0 * rng.next_f64() - 10.0;
            let y = 20.0 * rng.next_f64() - 10.0;
            for m in &models {
                assert_eq!(m.pair(x, y), m.pair(y, x));
            }
        }
    }

    #[test]
    fn limit_kernel_probes() {
        // Wishart with fixed p/n: n * pair(x, y) = x + y exactly.
        let m = make_wishart(50, 100).unwrap();
        for ix in 0..30 {
            let x = 0.2 * ix as f64;
            let y = 0.35 * ix as f64 + 0.01;
            assert!((50.0 * m.pair(x, y) - (x + y)).abs() < 1e-12);
        }
        // Dyson: n * pair = 1 exactly.
        let d = make_dyson(300).unwrap();
        assert_eq!(300.0 * d.pair(-3.0, 8.0), 1.0);
    }

    #[test]
    fn registry_builds_by_name() {
        let reg = ModelRegistry::builtin();
        let names: Vec<_> = reg.names().collect();
        assert_eq!(names, vec!["beta_laguerre", "dyson", "wishart"]);

        let m = reg
            .build(
                "wishart",
                &ModelParams {
                    n: 2,
                    p: Some(4),
                    ..Default::default()
                },
            )
            .unwrap();
        assert_eq!(m.name(), "wishart");

        let err = reg.build("wishart", &ModelParams { n: 2, ..Default::default() });
        assert_eq!(
            err.unwrap_err(),
            CatalogError::InvalidParameter("wishart requires p".into())
        );

        assert!(matches!(
            reg.build("nope", &ModelParams { n: 1, ..Default::default() }),
            Err(CatalogError::UnknownFamily(_))
        ));
        assert!(reg
            .build(
                "dyson",
                &ModelParams {
                    n: 5,
                    p: Some(3),
                    ..Default::default()
                }
            )
            .is_err());
    }
}
