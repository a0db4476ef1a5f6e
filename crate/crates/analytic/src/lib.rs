//! Floating-point checks of the Bessel-function identities behind the
//! archimedean Fourier–Jacobi computation. Nothing here feeds the exact crates.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: {0}")]
    Divergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Tolerances handed to the quadrature.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// the z-integral is cut off where the integrand drops below this fraction of its peak
    pub tail_cutoff: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings { abs_tol: 1e-9, rel_tol: 1e-9, tail_cutoff: 1e-14 }
    }
}

/// A value with an estimated absolute error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Integrates over `[a, b]` as a sum of double-exponential panels of width ≤ `panel`.
fn integrate_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, panel: f64, tol: f64) -> Estimate {
    let n = (((b - a) / panel).ceil() as usize).max(1);
    let h = (b - a) / n as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for i in 0..n {
        let lo = a + i as f64 * h;
        let out = quadrature::double_exponential::integrate(&f, lo, lo + h, tol / n as f64);
        value += out.integral;
        error += out.error_estimate;
    }
    Estimate { value, error }
}

/// `K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt` with its error estimate.
pub fn bessel_k_estimate(nu: f64, x: f64) -> Result<Estimate> {
    if !(x > 0.0) || !x.is_finite() || !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("K_ν(x) needs x > 0 (got ν = {nu}, x = {x})")));
    }
    let nu = nu.abs();
    // exponent of the larger half of the integrand, relative to e^{−x}
    let phase = |t: f64| -x * (t.cosh() - 1.0) + nu * t;
    let t_peak = (nu / x).asinh();
    let peak = phase(t_peak);
    let mut t_max = t_peak + 1.0;
    while phase(t_max) > peak - 60.0 {
        t_max += 0.5;
    }
    let scale = peak;
    let f = |t: f64| 0.5 * ((phase(t) - scale).exp() + (-x * (t.cosh() - 1.0) - nu * t - scale).exp());
    let est = integrate_panels(f, 0.0, t_max, 1.0, 1e-15);
    let factor = (scale - x).exp();
    let value = est.value * factor;
    if !value.is_finite() {
        return Err(Error::Divergence(format!("K_{nu}({x}) overflowed")));
    }
    Ok(Estimate { value, error: est.error * factor })
}

pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_estimate(nu, x)?.value)
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).map(|i| a + i as f64).product()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn to_f64(n: &BigInt) -> f64 {
    n.to_string().parse().expect("integer renders as f64")
}

/// `c_n^j = n! / (j!(n−2j)!2^j)`.
pub fn c_nj(n: u32, j: u32) -> BigInt {
    if 2 * j > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(j) * factorial(n - 2 * j) * (BigInt::one() << j))
}

/// `C_{m,k} = (−1)^k 2^{2m−k} binom(m, 2k) (2k)!/(k!2^k)`.
pub fn c_mk(m: u32, k: u32) -> f64 {
    let mag = binomial(m, 2 * k) * factorial(2 * k) / (factorial(k) * (BigInt::one() << k));
    let v = to_f64(&mag) * 2f64.powi((2 * m - k) as i32);
    if k % 2 == 1 {
        -v
    } else {
        v
    }
}

/// The rational integrand `Σ_k C_{m,k} z^{m−2k} (ℓ+½)_{2m−k} (β²+z²)^{−(ℓ+2m−k+½)}`.
fn iint_weight(ell: u32, m: u32, beta: f64) -> impl Fn(f64) -> f64 {
    let terms: Vec<(f64, i32, f64)> = (0..=m / 2)
        .map(|k| {
            let c = c_mk(m, k) * pochhammer(ell as f64 + 0.5, 2 * m - k);
            (c, (m - 2 * k) as i32, (ell + 2 * m - k) as f64 + 0.5)
        })
        .collect();
    move |z: f64| {
        let r = beta * beta + z * z;
        terms.iter().map(|(c, p, e)| c * z.powi(*p) * r.powf(-e)).sum()
    }
}

/// `I_{ℓ,m}(β) = ∫_R e^{−iz} (…) dz` by quadrature, real and imaginary parts separately.
pub fn iint_quadrature(ell: u32, m: u32, beta: f64, settings: &QuadratureSettings) -> Result<(Complex64, f64)> {
    if ell < 1 || !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("I_(ℓ,m)(β) needs ℓ ≥ 1, β > 0 (ℓ = {ell}, β = {beta})")));
    }
    let g = iint_weight(ell, m, beta);
    let mut peak: f64 = 0.0;
    let mut z = 0.0;
    while z < 10.0 * (beta + 1.0) {
        peak = peak.max(g(z).abs());
        z += 0.01 * (beta + 1.0);
    }
    // the integrand decays like |z|^{−(2ℓ+3m+1)}; walk out until it is negligible
    let mut zmax = beta + 1.0;
    while g(zmax).abs() > settings.tail_cutoff * peak {
        zmax *= 1.25;
        if zmax > 1e8 {
            return Err(Error::Divergence(format!("integrand of I_({ell},{m})({beta}) does not decay")));
        }
    }
    let tol = settings.abs_tol.min(settings.rel_tol * peak) * 1e-3;
    let panel = std::f64::consts::PI;
    let re = integrate_panels(|z| z.cos() * g(z), -zmax, zmax, panel, tol);
    let im = integrate_panels(|z| -z.sin() * g(z), -zmax, zmax, panel, tol);
    if !re.value.is_finite() || !im.value.is_finite() {
        return Err(Error::Divergence(format!("I_({ell},{m})({beta}) is not finite")));
    }
    Ok((Complex64::new(re.value, im.value), re.error + im.error + 2.0 * settings.tail_cutoff * peak))
}

/// `2^{1−ℓ} u / (½)_ℓ · β^{−(ℓ+m)} K_{ℓ+m}(β)` for a unit phase `u`.
pub fn iint_closed_form(ell: u32, m: u32, beta: f64, phase: Complex64) -> Result<Complex64> {
    let mag = 2f64.powi(1 - ell as i32) / pochhammer(0.5, ell) * beta.powi(-((ell + m) as i32))
        * bessel_k((ell + m) as f64, beta)?;
    Ok(phase * mag)
}

fn unit_power(base: Complex64, m: u32) -> Complex64 {
    (0..m).fold(Complex64::new(1.0, 0.0), |acc, _| acc * base)
}

#[derive(Clone, Debug, Serialize)]
pub struct IintReport {
    pub ell: u32,
    pub m: u32,
    pub beta: f64,
    pub quadrature: [f64; 2],
    pub quadrature_error: f64,
    pub closed_form: [f64; 2],
    /// `|quadrature − closed form| / |closed form|` with the phase `(−i)^m`
    pub residual: f64,
    /// relative difference of the moduli
    pub modulus_residual: f64,
    /// `|arg(quadrature) − arg(closed form)|`
    pub phase_residual: f64,
    /// the same residual with the phase `i^m`
    pub residual_with_i_pow_m: f64,
}

/// Compares the quadrature of `I_{ℓ,m}(β)` with its Bessel closed form.
pub fn verify_iint(ell: u32, m: u32, beta: f64) -> Result<IintReport> {
    verify_iint_with(ell, m, beta, &QuadratureSettings::default())
}

pub fn verify_iint_with(ell: u32, m: u32, beta: f64, settings: &QuadratureSettings) -> Result<IintReport> {
    let (q, qerr) = iint_quadrature(ell, m, beta, settings)?;
    let minus_i = Complex64::new(0.0, -1.0);
    let c = iint_closed_form(ell, m, beta, unit_power(minus_i, m))?;
    let c_alt = iint_closed_form(ell, m, beta, unit_power(Complex64::new(0.0, 1.0), m))?;
    let phase_residual = {
        let d = (q / c).arg().abs();
        d.min(2.0 * std::f64::consts::PI - d)
    };
    Ok(IintReport {
        ell,
        m,
        beta,
        quadrature: [q.re, q.im],
        quadrature_error: qerr,
        closed_form: [c.re, c.im],
        residual: (q - c).norm() / c.norm(),
        modulus_residual: (q.norm() - c.norm()).abs() / c.norm(),
        phase_residual,
        residual_with_i_pow_m: (q - c_alt).norm() / c_alt.norm(),
    })
}

/// The grid ℓ ∈ {4,5}, m ∈ {0,1,2}, β ∈ {1,2,5}.
pub fn iint_grid() -> Vec<(u32, u32, f64)> {
    let mut out = Vec::new();
    for ell in [4, 5] {
        for m in [0, 1, 2] {
            for beta in [1.0, 2.0, 5.0] {
                out.push((ell, m, beta));
            }
        }
    }
    out
}

/// `∂_u^n(u^b K_b(u))` by the closed-form sum `Σ_j (−1)^{n−j} c_n^j u^{b−j} K_{b−n+j}(u)`.
pub fn bessel_derivative_closed_form(n: u32, b: u32, u: f64) -> Result<f64> {
    let mut acc = 0.0;
    for j in 0..=n / 2 {
        let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * to_f64(&c_nj(n, j)) * u.powi((b - j) as i32) * bessel_k(b as f64 - n as f64 + j as f64, u)?;
    }
    Ok(acc)
}

/// Central finite difference of order n for `u ↦ u^b K_b(u)`.
pub fn bessel_derivative_finite_difference(n: u32, b: u32, u: f64) -> Result<f64> {
    let f = |x: f64| -> Result<f64> { Ok(x.powi(b as i32) * bessel_k(b as f64, x)?) };
    // balances O(h²) truncation against rounding in f
    let h = 1e-13f64.powf(1.0 / (n as f64 + 2.0)) * u.max(1.0);
    let mut acc = 0.0;
    for i in 0..=n {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let x = u + (n as f64 / 2.0 - i as f64) * h;
        acc += sign * to_f64(&binomial(n, i)) * f(x)?;
    }
    Ok(acc / h.powi(n as i32))
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeReport {
    pub n: u32,
    pub b: u32,
    pub u: f64,
    pub finite_difference: f64,
    pub closed_form: f64,
    pub residual: f64,
}

/// Relative gap between finite differences and the closed-form derivative.
pub fn verify_bessel_derivative(n: u32, b: u32, u: f64) -> Result<DerivativeReport> {
    if n < 1 || b < n || !(u > 0.0) {
        return Err(Error::InvalidArgument(format!("need b ≥ n ≥ 1 and u > 0 (n = {n}, b = {b}, u = {u})")));
    }
    let fd = bessel_derivative_finite_difference(n, b, u)?;
    let cf = bessel_derivative_closed_form(n, b, u)?;
    Ok(DerivativeReport { n, b, u, finite_difference: fd, closed_form: cf, residual: (fd - cf).abs() / cf.abs() })
}

/// `Σ_{j+k=s} (−1)^j c_m^k c_{m−2k}^j` for `0 ≤ s ≤ ⌊m/2⌋`, in exact integers.
pub fn cnj_sums(m: u32) -> Vec<BigInt> {
    (0..=m / 2)
        .map(|s| {
            (0..=s)
                .map(|k| {
                    let j = s - k;
                    let t = c_nj(m, k) * c_nj(m - 2 * k, j);
                    if j % 2 == 1 {
                        -t
                    } else {
                        t
                    }
                })
                .sum()
        })
        .collect()
}

/// True when every level `1 ≤ j+k ≤ ⌊m/2⌋` sums to zero.
pub fn verify_cnj_identity(m: u32) -> bool {
    cnj_sums(m).iter().skip(1).all(|s| s.is_zero())
}
