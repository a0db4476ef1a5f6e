//! Truncated q-expansions: Ramanujan's Δ, the Shimura relation, and the
//! harmonic theta series of ⟨2⟩ ⊥ 2E₈ used as an independent check.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octonion::{coxeter_gram, Octonion, Quaternion};
use crate::scalar::Scalar;
use crate::shell::shell_coxeter;

pub const DEFAULT_PRECISION: usize = 50;

/// `Σ_{n ≤ N} c(n)qⁿ` with exact rational coefficients, known up to `q^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn zero(precision: usize) -> Self {
        QSeries { coeffs: vec![BigRational::zero(); precision + 1] }
    }

    pub fn one(precision: usize) -> Self {
        let mut s = QSeries::zero(precision);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-series needs at least the constant term");
        QSeries { coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Result<&BigRational> {
        self.coeffs.get(n).ok_or_else(|| {
            Error::Precondition(format!("q^{n} is beyond the precision {}", self.precision()))
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn set(&mut self, n: usize, c: BigRational) {
        self.coeffs[n] = c;
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        let n = self.precision().min(o.precision());
        QSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect() }
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let n = self.precision().min(o.precision());
        let mut out = QSeries::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut out = QSeries::one(self.precision());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> QSeries {
        let n = self.precision();
        let mut out = QSeries::zero(n);
        for i in k..=n {
            out.coeffs[i] = self.coeffs[i - k].clone();
        }
        out
    }

    /// The support `{n : c(n) ≠ 0}`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&n| !self.coeffs[n].is_zero()).collect()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})q^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision() + 1)
    }
}

/// `q Π_{k ≥ 1} (1 − q^k)²⁴` to the given precision.
pub fn delta_series(precision: usize) -> QSeries {
    let mut prod = QSeries::one(precision);
    for k in 1..=precision {
        let mut f = QSeries::one(precision);
        f.set(k, -BigRational::one());
        prod = prod.mul(&f.pow(24));
    }
    prod.shift(1)
}

fn default_delta() -> &'static QSeries {
    static D: OnceLock<QSeries> = OnceLock::new();
    D.get_or_init(|| delta_series(DEFAULT_PRECISION))
}

/// Ramanujan's τ(n), for `1 ≤ n ≤` [`DEFAULT_PRECISION`].
pub fn tau(n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidInput("τ is indexed from 1".into()));
    }
    Ok(default_delta().coeff(n)?.to_integer())
}

/// One row of the Shimura relation `τ(n) = Σ_{d|n} d⁵ α(n²/d²)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShimuraRow {
    pub n: usize,
    pub tau: Scalar,
    pub lifted: Scalar,
    pub residual: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShimuraReport {
    pub rows: Vec<ShimuraRow>,
}

impl ShimuraReport {
    pub fn all_zero(&self) -> bool {
        self.rows.iter().all(|r| r.residual.is_zero())
    }
}

/// Checks the Shimura relation for `1 ≤ n ≤ nmax` against normalized α values.
pub fn shimura_consistency(alphas: &BTreeMap<i64, Scalar>, nmax: usize) -> Result<ShimuraReport> {
    match alphas.get(&1) {
        Some(a) if a.is_one() => {}
        Some(a) => return Err(Error::Precondition(format!("α(1) = {a}, expected the normalization 1"))),
        None => return Err(Error::MissingData("α(1) is missing".into())),
    }
    let long = (nmax > DEFAULT_PRECISION).then(|| delta_series(nmax));
    let mut rows = Vec::with_capacity(nmax);
    for n in 1..=nmax {
        let t = match &long {
            Some(s) => s.coeff(n)?.to_integer(),
            None => tau(n)?,
        };
        let mut lifted = Scalar::zero();
        for d in (1..=n).filter(|d| n % d == 0) {
            let key = ((n / d) * (n / d)) as i64;
            let a = alphas
                .get(&key)
                .ok_or_else(|| Error::MissingData(format!("α({key}) is missing")))?;
            lifted += &(&Scalar::from_bigint(BigInt::from(d).pow(5)) * a);
        }
        let t = Scalar::from_bigint(t);
        let residual = &t - &lifted;
        rows.push(ShimuraRow { n, tau: t, lifted, residual });
    }
    Ok(ShimuraReport { rows })
}

/// Coxeter coordinates of `u`, which must lie in R_Θ.
fn coxeter_of(u: &Octonion) -> [i64; 8] {
    u.coxeter_ints().expect("element of R_Θ")
}

/// `Σ_D Σ_{v² + 4n(x) = D} h(v, x) q^D` with
/// `h = [v + ω(x,(0,i))]² + [v − ω(x,(0,i))]² + [v + ω(x,(−i,0))]²`.
///
/// Works in Coxeter coordinates with the Gram matrix throughout.
pub fn harmonic_theta(dmax: usize) -> Result<QSeries> {
    let q = |c: [i64; 4]| Quaternion::from_ints(c);
    let g = coxeter_gram();
    let dual = |u: [i64; 8]| -> [i64; 8] { std::array::from_fn(|i| (0..8).map(|j| g[i][j] * u[j]).sum()) };
    let ga = dual(coxeter_of(&Octonion::from_pair(&q([0; 4]), &q([0, 1, 0, 0]))));
    let gb = dual(coxeter_of(&Octonion::from_pair(&q([0, -1, 0, 0]), &q([0; 4]))));
    let mut out = QSeries::zero(dmax);
    for d in 0..=dmax as i64 {
        let (mut re, mut im) = (0i128, 0i128);
        for v in -d..=d {
            let rest = d - v * v;
            if rest < 0 || rest % 4 != 0 {
                continue;
            }
            for x in shell_coxeter((rest / 4) as u64).iter() {
                let a: i128 = x.iter().zip(&ga).map(|(p, q)| (p * q) as i128).sum();
                let b: i128 = x.iter().zip(&gb).map(|(p, q)| (p * q) as i128).sum();
                let v = v as i128;
                re += 3 * v * v - 2 * a * a - b * b;
                im += 2 * v * b;
            }
        }
        if im != 0 {
            return Err(Error::Computation(format!("imaginary part {im} survives at D = {d}")));
        }
        out.set(d as usize, BigRational::from_integer(re.into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_values() {
        let known = [1i64, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
        for (n, t) in known.iter().enumerate() {
            assert_eq!(tau(n + 1).unwrap(), BigInt::from(*t));
        }
        assert!(tau(DEFAULT_PRECISION + 1).is_err());
        assert!(tau(0).is_err());
    }

    #[test]
    fn series_arithmetic() {
        // (1 − q)(1 + q + q² + …) = 1
        let geom = QSeries::from_coeffs(vec![BigRational::one(); 5]);
        let mut lin = QSeries::one(4);
        lin.set(1, -BigRational::one());
        assert_eq!(lin.mul(&geom), QSeries::one(4));
        assert_eq!(geom.add(&lin).support(), vec![0, 2, 3, 4]);
        assert_eq!(geom.shift(2).support(), vec![2, 3, 4]);
        assert!(geom.coeff(5).is_err());
    }

    #[test]
    fn shimura_small() {
        let mut a = BTreeMap::new();
        a.insert(1, Scalar::one());
        a.insert(4, Scalar::from_int(-56));
        a.insert(9, Scalar::from_int(9));
        let r = shimura_consistency(&a, 3).unwrap();
        assert!(r.all_zero());
        assert!(shimura_consistency(&a, 4).is_err());
        a.insert(4, Scalar::from_int(-55));
        assert!(!shimura_consistency(&a, 3).unwrap().all_zero());
    }

    #[test]
    fn harmonic_theta_head() {
        let h = harmonic_theta(9).unwrap();
        assert_eq!(h.coeff(1).unwrap(), &BigRational::from_integer(6.into()));
        assert_eq!(h.coeff(4).unwrap(), &BigRational::from_integer((-336).into()));
        assert!(h.support().iter().all(|d| d % 4 == 0 || d % 4 == 1));
    }
}
