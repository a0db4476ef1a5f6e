//! Fourier coefficients of quaternionic theta lifts to G₂.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f4::{beta_km, singular_pair, wedge_pair, SingularPair, Wedge, WedgeTensor};
use crate::freudenthal::{fiber_rank_one, for_each_rank_one, gan_coeff, BinaryCubic, CubicRing, IntFreudenthal};
use crate::g2::{v7_basis, E2, E2S, U0};
use crate::gauss::{common_denominator, G};
use crate::jordan::{IntJordan, JordanElement, PairingTag, DIM};
use crate::octonion::{int_bilinear, Octonion, Quaternion};
use crate::scalar::Scalar;
use crate::shell::{shell_doubled, sigma};

/// `P_m(w) = (b∧c)^{⊗m}` for `w = (a, b, c, d)`.
pub fn p_m(w: &crate::freudenthal::FreudenthalElement, m: usize) -> WedgeTensor {
    WedgeTensor::wedge(&w.b, &w.c).power(m)
}

/// The singular pair built from `e₂`, `u₀` and `e₂ − e₂*`.
pub fn standard_pair() -> SingularPair {
    let b = v7_basis();
    singular_pair(&b[E2], &b[U0], &(&b[E2] - &b[E2S])).expect("standard pair is singular")
}

/// `(x∧y)^{⊗m}` for the standard pair.
pub fn standard_beta(m: usize) -> WedgeTensor {
    beta_km(m, &standard_pair()).expect("standard pair is singular")
}

/// `Σ_w σ₄(d_w)⟨P_m(w), β⟩` over the rank-one fiber, evaluated term by term in
/// exact arithmetic.
pub fn g2_fc_exact(w0: &BinaryCubic, beta: &WedgeTensor, tag: &PairingTag) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for w in fiber_rank_one(w0, tag)? {
        let a = Scalar::from_bigint(gan_coeff(&w)?);
        acc += &(&a * &wedge_pair(&p_m(&w, beta.degree), beta, tag)?);
    }
    Ok(acc)
}

/// Same sum as [`g2_fc_exact`], with each pairing compiled to integer linear
/// functionals on lattice coordinates. Falls back to exact arithmetic on overflow.
pub fn g2_fc(w0: &BinaryCubic, beta: &WedgeTensor, tag: &PairingTag) -> Result<Scalar> {
    if let PairingTag::E(e) = tag {
        if *e != JordanElement::identity() {
            return Err(Error::Unsupported(
                "fiber enumeration over a non-identity base point".into(),
            ));
        }
    }
    let compiled = CompiledBeta::new(beta, tag);
    let mut acc = Some(G::ZERO);
    for_each_rank_one(w0, |w| {
        if let Some(s) = acc {
            acc = compiled.eval(w).and_then(|v| s.add(v));
        }
    })?;
    match acc {
        Some(s) => Ok(&s.to_scalar() / &compiled.scale),
        None => g2_fc_exact(w0, beta, tag),
    }
}

/// Integer coordinates of an `IntJordan`: the diagonal, then doubled pair coordinates.
fn int_coords(t: &IntJordan) -> [i64; DIM] {
    let mut out = [0; DIM];
    out[..3].copy_from_slice(&t.c);
    for i in 0..3 {
        out[3 + 8 * i..11 + 8 * i].copy_from_slice(&t.a[i]);
    }
    out
}

/// The element with integer coordinate vector `e_k` (see [`int_coords`]).
fn coord_unit(k: usize) -> JordanElement {
    let mut t = JordanElement::zero();
    if k < 3 {
        t.c[k] = Scalar::one();
    } else {
        let (i, j) = ((k - 3) / 8, (k - 3) % 8);
        t.a[i] = Octonion::unit(j).scale(&Scalar::half());
    }
    t
}

/// Pairings `⟨b∧c, x∧y⟩` as Gaussian-integer bilinear data, with a common scale.
struct CompiledBeta {
    /// per distinct factor x∧y: the functionals `(x,·)_tag, (y,·), (x,·), (y,·)_tag`
    factors: Vec<[[G; DIM]; 4]>,
    /// β's terms as (scaled coefficient, factor indices)
    terms: Vec<(G, Vec<usize>)>,
    /// the raw sum times `1/scale` is the true value
    scale: Scalar,
    fallback: bool,
}

impl CompiledBeta {
    fn new(beta: &WedgeTensor, tag: &PairingTag) -> Self {
        let mut distinct: Vec<&Wedge> = Vec::new();
        let mut terms_idx = Vec::with_capacity(beta.terms.len());
        for (_, fs) in &beta.terms {
            let idx = fs
                .iter()
                .map(|f| match distinct.iter().position(|g| *g == f) {
                    Some(i) => i,
                    None => {
                        distinct.push(f);
                        distinct.len() - 1
                    }
                })
                .collect::<Vec<_>>();
            terms_idx.push(idx);
        }
        let units: Vec<JordanElement> = (0..DIM).map(coord_unit).collect();
        let raw: Vec<[Vec<Scalar>; 4]> = distinct
            .iter()
            .map(|(x, y)| {
                [
                    units.iter().map(|u| x.pair(u, tag)).collect(),
                    units.iter().map(|u| y.trace_pair(u)).collect(),
                    units.iter().map(|u| x.trace_pair(u)).collect(),
                    units.iter().map(|u| y.pair(u, tag)).collect(),
                ]
            })
            .collect();
        let fden = Scalar::from_bigint(common_denominator(raw.iter().flatten().flatten()));
        let cden = Scalar::from_bigint(common_denominator(beta.terms.iter().map(|(c, _)| c)));
        let mut fallback = false;
        let factors = raw
            .iter()
            .map(|fs| {
                let mut out = [[G::ZERO; DIM]; 4];
                for (o, f) in out.iter_mut().zip(fs) {
                    for (slot, c) in o.iter_mut().zip(f) {
                        match G::from_scalar(&(c * &fden)) {
                            Some(g) => *slot = g,
                            None => fallback = true,
                        }
                    }
                }
                out
            })
            .collect();
        let terms = beta
            .terms
            .iter()
            .zip(terms_idx)
            .map(|((c, _), idx)| {
                let g = G::from_scalar(&(c * &cden)).unwrap_or_else(|| {
                    fallback = true;
                    G::ZERO
                });
                (g, idx)
            })
            .collect();
        let scale = &cden * &fden.pow(2 * beta.degree as u32);
        CompiledBeta { factors, terms, scale, fallback }
    }

    fn eval(&self, w: &IntFreudenthal) -> Option<G> {
        if self.fallback {
            return None;
        }
        let content = w.content();
        let a = i64::try_from(sigma(4, content.unsigned_abs())).ok()?;
        let (b, c) = (int_coords(&w.b), int_coords(&w.c));
        let dot = |f: &[G; DIM], v: &[i64; DIM]| -> Option<G> {
            let mut s = G::ZERO;
            for (g, &x) in f.iter().zip(v) {
                if x != 0 && !g.is_zero() {
                    s = s.add(g.mul(G::from_i64(x))?)?;
                }
            }
            Some(s)
        };
        let mut pv = Vec::with_capacity(self.factors.len());
        for [xb, yc, xc, yb] in &self.factors {
            pv.push(dot(xb, &b)?.mul(dot(yc, &c)?)?.sub(dot(xc, &c)?.mul(dot(yb, &b)?)?)?);
        }
        let mut acc = G::ZERO;
        for (coef, idx) in &self.terms {
            let mut p = *coef;
            for &i in idx {
                p = p.mul(pv[i])?;
            }
            acc = acc.add(p)?;
        }
        acc.mul(G::from_i64(a))
    }
}

/// Which computation of the Δ_{G₂} coefficient to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// Through the Freudenthal fiber over the cubic of Z × Z_D.
    A,
    /// The direct sum over `v² + 4n(x) = D`.
    B,
}

fn check_discriminant(d: i64) -> Result<()> {
    if d <= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidInput(format!("D = {d} must be positive and ≡ 0, 1 mod 4")));
    }
    Ok(())
}

/// The unnormalized coefficient of Δ_{G₂} at the cubic ring Z × Z_D.
pub fn delta_g2_coefficient(d: i64, route: Route) -> Result<Scalar> {
    check_discriminant(d)?;
    match route {
        Route::A => {
            let w0 = CubicRing::z_cross_quadratic(d)?.cubic();
            g2_fc(&w0, &standard_beta(2), &PairingTag::I)
        }
        Route::B => Ok(Scalar::from_bigint(delta_g2_direct(d)?)),
    }
}

/// `Σ [v + ω(x,(0,i))]² + [v − ω(x,(0,i))]² + [v + ω(x,(−i,0))]²` over
/// `(v, x) ∈ Z ⊕ R_Θ` with `v² + 4n(x) = D`.
pub fn delta_g2_direct(d: i64) -> Result<BigInt> {
    check_discriminant(d)?;
    let q = |c: [i64; 4]| Quaternion::from_ints(c);
    let u = Octonion::from_pair(&q([0; 4]), &q([0, 1, 0, 0]))
        .doubled_ints()
        .expect("integral");
    let u2 = Octonion::from_pair(&q([0, -1, 0, 0]), &q([0; 4]))
        .doubled_ints()
        .expect("integral");
    let mut re: i128 = 0;
    let mut im: i128 = 0;
    let mut v: i64 = 0;
    while v * v <= d {
        let rest = d - v * v;
        if rest % 4 == 0 {
            for sign in if v == 0 { &[1][..] } else { &[1, -1][..] } {
                let v = (sign * v) as i128;
                for x in shell_doubled((rest / 4) as u64).iter() {
                    let a = int_bilinear(x, &u) as i128;
                    let b = int_bilinear(x, &u2) as i128;
                    // (v + ωa)² + (v − ωa)² + (v + ωb)²
                    re += 3 * v * v - 2 * a * a - b * b;
                    im += 2 * v * b;
                }
            }
        }
        v += 1;
    }
    if im != 0 {
        return Err(Error::Computation(format!("imaginary part {im} survives at D = {d}")));
    }
    Ok(BigInt::from(re))
}

/// `raw(D) / raw(1)`.
pub fn normalized_delta_g2(d: i64, route: Route) -> Result<Scalar> {
    let one = delta_g2_coefficient(1, route)?;
    let raw = delta_g2_coefficient(d, route)?;
    Ok(&raw / &one)
}

/// A G₂ Fourier coefficient with its I- and E-components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G2FourierCoefficient {
    pub raw_i: Scalar,
    pub raw_e: Option<Scalar>,
    pub target: BinaryCubic,
    pub m: usize,
}

impl G2FourierCoefficient {
    /// `γ_I·raw_I + γ_E·raw_E`.
    pub fn combined(&self, gamma_i: &Scalar, gamma_e: &Scalar) -> Scalar {
        let mut s = gamma_i * &self.raw_i;
        if let Some(e) = &self.raw_e {
            s += &(gamma_e * e);
        }
        s
    }
}

/// The two-sided coefficient `γ_I·a_I + γ_E·a_E`. The E-side is skipped when
/// `γ_E = 0`; otherwise E must be supplied.
pub fn g2_fc_with_e(
    w0: &BinaryCubic,
    beta_i: &WedgeTensor,
    beta_e: &WedgeTensor,
    e: Option<&JordanElement>,
    gammas: (&Scalar, &Scalar),
) -> Result<(G2FourierCoefficient, Scalar)> {
    let raw_i = g2_fc(w0, beta_i, &PairingTag::I)?;
    let raw_e = if gammas.1.is_zero() {
        None
    } else {
        let e = e.ok_or_else(|| Error::MissingData("E-data required when γ_E ≠ 0".into()))?;
        let tag = PairingTag::with_e(e.clone())?;
        Some(g2_fc(w0, beta_e, &tag)?)
    };
    let fc = G2FourierCoefficient { raw_i, raw_e, target: w0.clone(), m: beta_i.degree };
    let value = fc.combined(gammas.0, gammas.1);
    Ok((fc, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product3() -> BinaryCubic {
        CubicRing::Product3.cubic()
    }

    #[test]
    fn six_term_value() {
        for m in [2, 4] {
            let beta = standard_beta(m);
            assert_eq!(g2_fc(&product3(), &beta, &PairingTag::I).unwrap(), Scalar::from_int(6));
            assert_eq!(g2_fc_exact(&product3(), &beta, &PairingTag::I).unwrap(), Scalar::from_int(6));
        }
    }

    #[test]
    fn empty_fiber_gives_zero() {
        let w0 = BinaryCubic::from_ints([0, -1, 0, -1]);
        assert!(g2_fc(&w0, &standard_beta(2), &PairingTag::I).unwrap().is_zero());
    }

    #[test]
    fn small_discriminants() {
        assert_eq!(delta_g2_coefficient(1, Route::A).unwrap(), Scalar::from_int(6));
        assert_eq!(delta_g2_coefficient(1, Route::B).unwrap(), Scalar::from_int(6));
        assert_eq!(normalized_delta_g2(4, Route::B).unwrap(), Scalar::from_int(-56));
        assert!(delta_g2_coefficient(2, Route::A).is_err());
        assert!(delta_g2_coefficient(0, Route::B).is_err());
    }

    #[test]
    fn compiled_matches_exact() {
        let w0 = CubicRing::z_cross_quadratic(5).unwrap().cubic();
        let beta = standard_beta(2);
        assert_eq!(
            g2_fc(&w0, &beta, &PairingTag::I).unwrap(),
            g2_fc_exact(&w0, &beta, &PairingTag::I).unwrap()
        );
    }

    #[test]
    fn degree_mismatch_rejected() {
        let w = crate::freudenthal::FreudenthalElement::r1(&JordanElement::e(0));
        assert!(wedge_pair(&p_m(&w, 1), &standard_beta(2), &PairingTag::I).is_err());
    }

    #[test]
    fn e_side_gating() {
        let beta = standard_beta(2);
        let (zero, half) = (Scalar::zero(), Scalar::half());
        let (fc, v) = g2_fc_with_e(&product3(), &beta, &beta, None, (&Scalar::one(), &zero)).unwrap();
        assert!(fc.raw_e.is_none());
        assert_eq!(v, Scalar::from_int(6));
        assert!(g2_fc_with_e(&product3(), &beta, &beta, None, (&half, &half)).is_err());
        let id = JordanElement::identity();
        let (_, v) = g2_fc_with_e(&product3(), &beta, &beta, Some(&id), (&half, &half)).unwrap();
        assert_eq!(v, Scalar::from_int(6));
    }
}
