//! Closed-form spectral limit laws and their Stieltjes transforms.
//!
//! Each family exposes `G_t(z) = int (z - x)^{-1} mu_t(dx)` on the upper
//! half-plane, the density and CDF recovered by Stieltjes inversion, and the
//! integrand of the time-flow equation its transform satisfies. The square
//! root in every formula is the branch mapping the upper half-plane to
//! itself, which pins `G ~ 1/z` at infinity and the Herglotz sign
//! `Im G < 0` on `Im z > 0`.

mod hilbert;
mod residuals;

pub use hilbert::{density_equation_residual, hilbert_transform};
pub use residuals::{
    limit_equation_residual, pde_residual, self_similar_residual, ResidualReport,
};

use std::sync::Arc;

use num_complex::Complex64;

use crate::catalog::ScalarFn;

#[derive(Debug, thiserror::Error)]
pub enum LawError {
    #[error("{0}")]
    InvalidParameter(String),
    #[error("unknown law family `{0}`")]
    UnknownFamily(String),
    #[error("evaluation point must stay off the real axis")]
    RealArgument,
    #[error("grid must be uniformly spaced")]
    NonUniformGrid,
    #[error("snapshots must sit on a uniform time grid")]
    NonUniformTimes,
    #[error("density samples must be nonnegative and integrate to one (integral {0})")]
    BadDensity(f64),
    #[error("need at least {0} samples")]
    TooFewSamples(usize),
}

/// Square root with values in the closed upper half-plane.
#[inline]
pub fn sqrt_upper(w: Complex64) -> Complex64 {
    let s = w.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Stieltjes transform of the semicircle law at time `t`:
/// `(z - sqrt(z^2 - 4t)) / (2t)`, with `G_0 = 1/z`.
pub fn semicircle_stieltjes(z: Complex64, t: f64) -> Complex64 {
    if t == 0.0 {
        return z.finv();
    }
    (z - sqrt_upper(z * z - 4.0 * t)) / (2.0 * t)
}

/// Stieltjes transform of the Marchenko-Pastur law with ratio `c >= 1`:
/// `((z + t(1-c)) - sqrt((z + t(1-c))^2 - 4tz)) / (2tz)`.
pub fn mp_stieltjes(z: Complex64, t: f64, c: f64) -> Complex64 {
    beta_mp_stieltjes(z, t, c, 1.0)
}

/// Stieltjes transform of the beta Marchenko-Pastur law:
/// `(z - bt(c-1) - sqrt((bt(c-1) - z)^2 - 4btz)) / (2btz)`; at `beta = 1`
/// this reduces exactly to [`mp_stieltjes`].
pub fn beta_mp_stieltjes(z: Complex64, t: f64, c: f64, beta: f64) -> Complex64 {
    let bt = beta * t;
    if bt == 0.0 {
        return z.finv();
    }
    let shift = bt * (c - 1.0);
    let disc = (shift - z) * (shift - z) - 4.0 * bt * z;
    (z - shift - sqrt_upper(disc)) / (2.0 * bt * z)
}

/// Self-similar reduction data: the scaling exponent and the
/// `(b, g^2, h^2)` split of the limit interaction kernel.
#[derive(Clone)]
pub struct SelfSimilarSplit {
    pub alpha: f64,
    pub b: ScalarFn,
    pub g2: ScalarFn,
    pub h2: ScalarFn,
}

/// Identifies a limit law together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LawFamily {
    Semicircle,
    MarchenkoPastur { c: f64 },
    BetaMarchenkoPastur { c: f64, beta: f64 },
}

impl LawFamily {
    pub fn name(&self) -> &'static str {
        match self {
            LawFamily::Semicircle => "semicircle",
            LawFamily::MarchenkoPastur { .. } => "marchenko_pastur",
            LawFamily::BetaMarchenkoPastur { .. } => "beta_marchenko_pastur",
        }
    }

    pub fn instantiate(&self) -> Box<dyn LimitLaw> {
        match *self {
            LawFamily::Semicircle => Box::new(Semicircle),
            LawFamily::MarchenkoPastur { c } => Box::new(MarchenkoPastur { c }),
            LawFamily::BetaMarchenkoPastur { c, beta } => {
                Box::new(BetaMarchenkoPastur { c, beta })
            }
        }
    }
}

/// Build a law family by name, as addressed from configs and the CLI.
pub fn law_from_name(
    name: &str,
    c: Option<f64>,
    beta: Option<f64>,
) -> Result<LawFamily, LawError> {
    let need_c = || {
        let c = c.ok_or_else(|| {
            LawError::InvalidParameter(format!("{name} requires a ratio parameter c"))
        })?;
        if c < 1.0 {
            return Err(LawError::InvalidParameter(
                "ratio parameter c must be >= 1".into(),
            ));
        }
        Ok(c)
    };
    match name {
        "semicircle" => {
            if c.is_some() || beta.is_some() {
                return Err(LawError::InvalidParameter(
                    "semicircle takes no parameters".into(),
                ));
            }
            Ok(LawFamily::Semicircle)
        }
        "marchenko_pastur" => {
            if beta.is_some() {
                return Err(LawError::InvalidParameter(
                    "marchenko_pastur does not take beta".into(),
                ));
            }
            Ok(LawFamily::MarchenkoPastur { c: need_c()? })
        }
        "beta_marchenko_pastur" => {
            let beta = beta.ok_or_else(|| {
                LawError::InvalidParameter("beta_marchenko_pastur requires beta".into())
            })?;
            if !(beta > 0.0) {
                return Err(LawError::InvalidParameter("beta must be positive".into()));
            }
            Ok(LawFamily::BetaMarchenkoPastur { c: need_c()?, beta })
        }
        other => Err(LawError::UnknownFamily(other.to_string())),
    }
}

/// A closed-form spectral limit law.
pub trait LimitLaw: Send + Sync {
    fn family(&self) -> LawFamily;

    fn stieltjes(&self, z: Complex64, t: f64) -> Complex64;

    /// Support interval of the density at time `t`.
    fn support(&self, t: f64) -> (f64, f64);

    /// Density at time `t` (exact boundary values of the transform).
    fn density(&self, x: f64, t: f64) -> f64;

    /// CDF at time `t`.
    fn cdf(&self, x: f64, t: f64) -> f64;

    /// The `(alpha, b, g^2, h^2)` data of the self-similar reduction.
    fn self_similar_split(&self) -> SelfSimilarSplit;

    /// Integrand `I(s, z)` of the flow equation
    /// `G_t(z) = G_0(z) + int_0^t I(s, z) ds` satisfied by this family
    /// from a point-mass start (`G_0 = 1/z`).
    fn flow_integrand(&self, z: Complex64, s: f64) -> Complex64;

    fn name(&self) -> &'static str {
        self.family().name()
    }

    /// Inverse CDF by bisection; `u` in (0, 1).
    fn quantile(&self, u: f64, t: f64) -> f64 {
        let (mut lo, mut hi) = self.support(t);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid, t) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Central difference in `z` used by the flow integrands.
fn d_dz(g: impl Fn(Complex64) -> Complex64, z: Complex64) -> Complex64 {
    const H: f64 = 1e-6;
    (g(z + H) - g(z - H)) / (2.0 * H)
}

pub struct Semicircle;

impl LimitLaw for Semicircle {
    fn family(&self) -> LawFamily {
        LawFamily::Semicircle
    }

    fn stieltjes(&self, z: Complex64, t: f64) -> Complex64 {
        semicircle_stieltjes(z, t)
    }

    fn support(&self, t: f64) -> (f64, f64) {
        let r = 2.0 * t.sqrt();
        (-r, r)
    }

    fn density(&self, x: f64, t: f64) -> f64 {
        let r2 = 4.0 * t - x * x;
        if r2 <= 0.0 {
            0.0
        } else {
            r2.sqrt() / (2.0 * std::f64::consts::PI * t)
        }
    }

    fn cdf(&self, x: f64, t: f64) -> f64 {
        let r = 2.0 * t.sqrt();
        if x <= -r {
            return 0.0;
        }
        if x >= r {
            return 1.0;
        }
        let pi = std::f64::consts::PI;
        0.5 + x * (4.0 * t - x * x).sqrt() / (4.0 * pi * t) + (x / r).asin() / pi
    }

    fn self_similar_split(&self) -> SelfSimilarSplit {
        SelfSimilarSplit {
            alpha: 0.5,
            b: Arc::new(|_| 0.0),
            g2: Arc::new(|_| 0.5),
            h2: Arc::new(|_| 1.0),
        }
    }

    fn flow_integrand(&self, z: Complex64, s: f64) -> Complex64 {
        let g = semicircle_stieltjes(z, s);
        -g * d_dz(|w| semicircle_stieltjes(w, s), z)
    }
}

pub struct MarchenkoPastur {
    pub c: f64,
}

impl LimitLaw for MarchenkoPastur {
    fn family(&self) -> LawFamily {
        LawFamily::MarchenkoPastur { c: self.c }
    }

    fn stieltjes(&self, z: Complex64, t: f64) -> Complex64 {
        mp_stieltjes(z, t, self.c)
    }

    fn support(&self, t: f64) -> (f64, f64) {
        mp_support(t, self.c, 1.0)
    }

    fn density(&self, x: f64, t: f64) -> f64 {
        mp_density(x, t, self.c, 1.0)
    }

    fn cdf(&self, x: f64, t: f64) -> f64 {
        mp_cdf(x, t, self.c, 1.0)
    }

    fn self_similar_split(&self) -> SelfSimilarSplit {
        let c = self.c;
        SelfSimilarSplit {
            alpha: 1.0,
            b: Arc::new(move |_| c),
            g2: Arc::new(|x| x),
            h2: Arc::new(|_| 1.0),
        }
    }

    fn flow_integrand(&self, z: Complex64, s: f64) -> Complex64 {
        mp_flow_integrand(z, s, self.c, 1.0)
    }
}

pub struct BetaMarchenkoPastur {
    pub c: f64,
    pub beta: f64,
}

impl LimitLaw for BetaMarchenkoPastur {
    fn family(&self) -> LawFamily {
        LawFamily::BetaMarchenkoPastur {
            c: self.c,
            beta: self.beta,
        }
    }

    fn stieltjes(&self, z: Complex64, t: f64) -> Complex64 {
        beta_mp_stieltjes(z, t, self.c, self.beta)
    }

    fn support(&self, t: f64) -> (f64, f64) {
        mp_support(t, self.c, self.beta)
    }

    fn density(&self, x: f64, t: f64) -> f64 {
        mp_density(x, t, self.c, self.beta)
    }

    fn cdf(&self, x: f64, t: f64) -> f64 {
        mp_cdf(x, t, self.c, self.beta)
    }

    fn self_similar_split(&self) -> SelfSimilarSplit {
        let (c, beta) = (self.c, self.beta);
        SelfSimilarSplit {
            alpha: 1.0,
            b: Arc::new(move |_| beta * c),
            g2: Arc::new(move |x| beta * x),
            h2: Arc::new(|_| 1.0),
        }
    }

    fn flow_integrand(&self, z: Complex64, s: f64) -> Complex64 {
        mp_flow_integrand(z, s, self.c, self.beta)
    }
}

/// Support edges `beta t (sqrt(c) -+ 1)^2` shared by the MP-type laws.
fn mp_support(t: f64, c: f64, beta: f64) -> (f64, f64) {
    let bt = beta * t;
    let s = c.sqrt();
    (bt * (s - 1.0) * (s - 1.0), bt * (s + 1.0) * (s + 1.0))
}

/// Density `sqrt((hi - x)(x - lo)) / (2 pi beta t x)` on the support.
fn mp_density(x: f64, t: f64, c: f64, beta: f64) -> f64 {
    let (lo, hi) = mp_support(t, c, beta);
    if x <= lo || x >= hi || x <= 0.0 {
        return 0.0;
    }
    ((hi - x) * (x - lo)).sqrt() / (2.0 * std::f64::consts::PI * beta * t * x)
}

/// CDF by quadrature of the density under `x = lo + (hi - lo) sin^2(theta)`,
/// which removes both square-root edges; composite Simpson then converges
/// far below the 1e-10 budget.
fn mp_cdf(x: f64, t: f64, c: f64, beta: f64) -> f64 {
    let (lo, hi) = mp_support(t, c, beta);
    if x <= lo {
        return 0.0;
    }
    if x >= hi {
        return 1.0;
    }
    let width = hi - lo;
    let theta_max = ((x - lo) / width).sqrt().min(1.0).asin();
    let scale = width * width / (4.0 * std::f64::consts::PI * beta * t);
    let integrand = |theta: f64| -> f64 {
        let s2 = (2.0 * theta).sin();
        let xt = lo + width * (theta.sin() * theta.sin());
        if xt <= 0.0 {
            // only reachable at theta = 0 when lo = 0 (c = 1); take the limit
            return if lo == 0.0 {
                width / (std::f64::consts::PI * beta * t)
            } else {
                0.0
            };
        }
        scale * s2 * s2 / xt
    };
    simpson(integrand, 0.0, theta_max, 2048).min(1.0)
}

fn mp_flow_integrand(z: Complex64, s: f64, c: f64, beta: f64) -> Complex64 {
    let g = beta_mp_stieltjes(z, s, c, beta);
    let dg = d_dz(|w| beta_mp_stieltjes(w, s, c, beta), z);
    -beta * ((c - 1.0) * dg + g * g + 2.0 * z * g * dg)
}

/// Composite Simpson rule with `2 * panels` subintervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Density samples by numerical Stieltjes inversion with Richardson
/// extrapolation in the offset: `p = 2 p_{eta/2} - p_eta`, clamped at zero.
pub fn invert_to_density(
    law: &dyn LimitLaw,
    t: f64,
    x_grid: &[f64],
    eta: f64,
) -> Result<Vec<f64>, LawError> {
    if !(eta > 0.0) {
        return Err(LawError::InvalidParameter("eta must be positive".into()));
    }
    let pi = std::f64::consts::PI;
    Ok(x_grid
        .iter()
        .map(|&x| {
            let p_full = -law.stieltjes(Complex64::new(x, eta), t).im / pi;
            let p_half = -law.stieltjes(Complex64::new(x, 0.5 * eta), t).im / pi;
            (2.0 * p_half - p_full).max(0.0)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    /// Quadrature oracle: `int density / (z - x) dx` under the edge-removing
    /// substitution, independent of the closed-form transform under test.
    fn stieltjes_by_quadrature(law: &dyn LimitLaw, z: Complex64, t: f64) -> Complex64 {
        let (lo, hi) = law.support(t);
        let width = hi - lo;
        let n = 40_000;
        let h = std::f64::consts::FRAC_PI_2 / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            let theta = k as f64 * h;
            let x = lo + width * theta.sin().powi(2);
            let jac = width * (2.0 * theta).sin();
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * law.density(x, t) * jac / (z - x);
        }
        acc * h / 3.0
    }

    #[test]
    fn semicircle_reference_values() {
        // (2i - sqrt(-8)) / 2 = -i (2 sqrt(2) - 2) / 2
        let g = semicircle_stieltjes(Complex64::new(0.0, 2.0), 1.0);
        assert!(g.re.abs() < 1e-15);
        assert!((g.im - (-0.41421356237309515)).abs() < 1e-12);

        // real z outside the support: (3 - sqrt(5)) / 2
        let g = semicircle_stieltjes(Complex64::new(3.0, 1e-12), 1.0);
        assert!((g.re - 0.3819660112501051).abs() < 1e-9);

        // independent quadrature oracle
        let law = Semicircle;
        for z in [Complex64::new(0.0, 2.0), Complex64::new(1.3, 0.4)] {
            let by_quad = stieltjes_by_quadrature(&law, z, 1.0);
            let closed = law.stieltjes(z, 1.0);
            assert!((by_quad - closed).norm() < 1e-6, "{z} {by_quad} {closed}");
        }
    }

    #[test]
    fn semicircle_quadratic_identity() {
        // t G^2 - z G + 1 = 0 for the closed form
        let mut rng = SplitMix64::new(5);
        for _ in 0..1000 {
            let z = Complex64::new(10.0 * rng.next_f64() - 5.0, 0.05 + 5.0 * rng.next_f64());
            let t = 0.1 + 3.0 * rng.next_f64();
            let g = semicircle_stieltjes(z, t);
            assert!((t * g * g - z * g + 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn mp_reference_values() {
        // c = 1, t = 1 at z = -1: -(sqrt(5) - 1) / 2
        let g = mp_stieltjes(Complex64::new(-1.0, 1e-12), 1.0, 1.0);
        assert!((g.re - (-0.6180339887498949)).abs() < 1e-9, "{g}");

        // quadrature oracle away from the support
        let law = MarchenkoPastur { c: 2.0 };
        for z in [Complex64::new(0.0, 1.0), Complex64::new(3.0, 0.7)] {
            let by_quad = stieltjes_by_quadrature(&law, z, 1.0);
            let closed = law.stieltjes(z, 1.0);
            assert!((by_quad - closed).norm() < 1e-6, "{z} {by_quad} {closed}");
        }
    }

    #[test]
    fn mp_quadratic_identity() {
        // z G1^2 + (c - 1 - z) G1 + 1 = 0 at t = 1
        let mut rng = SplitMix64::new(6);
        for c in [1.0, 2.0, 4.0] {
            for _ in 0..1000 {
                let z =
                    Complex64::new(12.0 * rng.next_f64() - 4.0, 0.05 + 5.0 * rng.next_f64());
                let g = mp_stieltjes(z, 1.0, c);
                let res = z * g * g + (c - 1.0 - z) * g + 1.0;
                assert!(res.norm() < 1e-12, "c={c} z={z} res={res}");
            }
        }
    }

    #[test]
    fn scaling_identities() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..500 {
            let z = Complex64::new(8.0 * rng.next_f64() - 4.0, 0.1 + 4.0 * rng.next_f64());
            let t = 0.2 + 2.0 * rng.next_f64();
            // G_t(z) = t^{-1/2} G_1(z t^{-1/2}) for the semicircle
            let lhs = semicircle_stieltjes(z, t);
            let rhs = semicircle_stieltjes(z / t.sqrt(), 1.0) / t.sqrt();
            assert!((lhs - rhs).norm() < 1e-13);
            // G_t(z) = t^{-1} G_1(z / t) for Marchenko-Pastur
            let c = 1.0 + 3.0 * rng.next_f64();
            let lhs = mp_stieltjes(z, t, c);
            let rhs = mp_stieltjes(z / t, 1.0, c) / t;
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn beta_one_reduces_to_mp() {
        let mut rng = SplitMix64::new(8);
        for _ in 0..1000 {
            let z = Complex64::new(10.0 * rng.next_f64() - 5.0, 0.05 + 5.0 * rng.next_f64());
            let t = 0.1 + 3.0 * rng.next_f64();
            let c = 1.0 + 4.0 * rng.next_f64();
            let diff = beta_mp_stieltjes(z, t, c, 1.0) - mp_stieltjes(z, t, c);
            assert!(diff.norm() < 1e-14);
        }
    }

    #[test]
    fn beta_mp_against_quadrature() {
        let law = BetaMarchenkoPastur { c: 1.0, beta: 2.0 };
        let z = Complex64::new(0.0, 4.0);
        let by_quad = stieltjes_by_quadrature(&law, z, 1.0);
        let closed = law.stieltjes(z, 1.0);
        assert!((by_quad - closed).norm() < 1e-6, "{by_quad} {closed}");
    }

    #[test]
    fn stieltjes_asymptotics() {
        // |iy G(iy) - 1| <= K / y along the imaginary axis
        for law in laws() {
            for y in [1e2, 1e3, 1e4] {
                let z = Complex64::new(0.0, y);
                let val = z * law.stieltjes(z, 1.0) - 1.0;
                assert!(val.norm() <= 20.0 / y, "{} y={y} {}", law.name(), val.norm());
            }
        }
    }

    #[test]
    fn herglotz_sign_and_conjugation() {
        let mut rng = SplitMix64::new(9);
        for law in laws() {
            for _ in 0..2000 {
                let z =
                    Complex64::new(16.0 * rng.next_f64() - 8.0, 1e-4 + 6.0 * rng.next_f64());
                let t = 0.2 + 2.0 * rng.next_f64();
                let g = law.stieltjes(z, t);
                assert!(g.im < 0.0, "{} z={z} g={g}", law.name());
            }
        }
    }

    #[test]
    fn branch_is_continuous_along_vertical_rays() {
        // no branch flips: successive values along a ray stay close
        for law in laws() {
            for x0 in [-3.0, -0.7, 0.0, 0.4, 1.0, 2.5, 6.0] {
                let mut prev: Option<Complex64> = None;
                let mut y = 1e-6;
                while y <= 10.0 {
                    let g = law.stieltjes(Complex64::new(x0, y), 1.0);
                    if let Some(p) = prev {
                        assert!(
                            (g - p).norm() < 0.3,
                            "{} jump at x0={x0} y={y}",
                            law.name()
                        );
                    }
                    prev = Some(g);
                    y *= 1.05;
                }
            }
        }
    }

    #[test]
    fn densities_normalize_and_match_inversion() {
        for law in laws() {
            let t = 1.0;
            // CDF spans 0 to 1 across the support
            let (lo, hi) = law.support(t);
            assert!(law.cdf(lo - 1e-9, t) == 0.0);
            assert!((law.cdf(hi, t) - 1.0).abs() < 1e-10, "{}", law.name());

            // numerical inversion agrees with the analytic density
            let xs: Vec<f64> = (0..60)
                .map(|k| lo + (hi - lo) * (0.02 + 0.96 * k as f64 / 59.0))
                .collect();
            let inv = invert_to_density(law.as_ref(), t, &xs, 1e-6).unwrap();
            for (x, p) in xs.iter().zip(&inv) {
                let exact = law.density(*x, t);
                assert!(
                    (p - exact).abs() < 2e-4 * (1.0 + exact),
                    "{} x={x} {p} vs {exact}",
                    law.name()
                );
            }
        }
    }

    #[test]
    fn inversion_reference_points() {
        let law = Semicircle;
        let p = invert_to_density(&law, 1.0, &[0.0, 3.0], 1e-6).unwrap();
        assert!((p[0] - 1.0 / std::f64::consts::PI).abs() < 1e-6);
        assert!(p[1].abs() < 1e-6);
    }

    #[test]
    fn round_trip_density_to_transform() {
        // quadrature of the inverted density reproduces G within 1e-4
        for law in laws() {
            let t = 1.0;
            let (lo, hi) = law.support(t);
            let n = 20_000usize;
            let dx = (hi - lo) / n as f64;
            let xs: Vec<f64> = (0..=n).map(|k| lo + k as f64 * dx).collect();
            let p = invert_to_density(law.as_ref(), t, &xs, 1e-7).unwrap();
            for z in [Complex64::new(0.3, 0.1), Complex64::new(-1.0, 0.5)] {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, pk) in xs.iter().zip(&p) {
                    acc += pk / (z - x);
                }
                acc *= dx;
                let err = (acc - law.stieltjes(z, t)).norm();
                assert!(err < 1e-4, "{} z={z} err={err}", law.name());
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for law in laws() {
            for u in [0.05, 0.3, 0.5, 0.9] {
                let x = law.quantile(u, 1.0);
                assert!((law.cdf(x, 1.0) - u).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!(
            law_from_name("semicircle", None, None).unwrap(),
            LawFamily::Semicircle
        );
        assert!(law_from_name("semicircle", Some(2.0), None).is_err());
        assert_eq!(
            law_from_name("marchenko_pastur", Some(2.0), None).unwrap(),
            LawFamily::MarchenkoPastur { c: 2.0 }
        );
        assert!(law_from_name("marchenko_pastur", Some(0.5), None).is_err());
        assert!(law_from_name("marchenko_pastur", None, None).is_err());
        assert!(law_from_name("beta_marchenko_pastur", Some(2.0), None).is_err());
        assert!(law_from_name("spherical", None, None).is_err());
    }

    fn laws() -> Vec<Box<dyn LimitLaw>> {
        vec![
            Box::new(Semicircle),
            Box::new(MarchenkoPastur { c: 2.0 }),
            Box::new(BetaMarchenkoPastur { c: 2.0, beta: 2.0 }),
            Box::new(BetaMarchenkoPastur { c: 1.0, beta: 0.5 }),
        ]
    }
}
