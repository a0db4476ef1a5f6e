//! The Freudenthal space W_J = Q ⊕ J ⊕ J^∨ ⊕ Q: symplectic and quartic forms, the
//! unipotent generator actions, the rank-one predicate, contents, binary cubic
//! projections, and enumeration of rank-one fibers over W_{J_R}.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f4::phi_vanishes;
use crate::jordan::{IntJordan, JordanElement, PairingTag};
use crate::scalar::Scalar;
use crate::shell::{shell_doubled, shell_with_trace, sigma};
use crate::octonion::{doubled_to_cox, int_conj, int_mul, IntOct};

/// `(a, b, c, d)` with `c` standing for an element of J^∨ through the trace form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct FreudenthalElement {
    pub a: Scalar,
    pub b: JordanElement,
    pub c: JordanElement,
    pub d: Scalar,
}

impl FreudenthalElement {
    pub fn new(a: Scalar, b: JordanElement, c: JordanElement, d: Scalar) -> Self {
        FreudenthalElement { a, b, c, d }
    }

    pub fn zero() -> Self {
        FreudenthalElement::default()
    }

    /// The rank-one family `(1, Z, Z^#, n(Z))`.
    pub fn r1(z: &JordanElement) -> Self {
        FreudenthalElement::new(Scalar::one(), z.clone(), z.sharp(), z.norm())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        FreudenthalElement::new(&self.a * s, self.b.scale(s), self.c.scale(s), &self.d * s)
    }

    pub fn add(&self, o: &Self) -> Self {
        FreudenthalElement::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }

    /// `⟨w, w'⟩ = ad' − da' − (b, c') + (c, b')`.
    pub fn symplectic(&self, o: &Self) -> Scalar {
        &(&(&(&self.a * &o.d) - &(&self.d * &o.a)) - &self.b.trace_pair(&o.c)) + &self.c.trace_pair(&o.b)
    }

    /// `q(w) = (ad − (b,c))² + 4a·n(c) + 4d·n(b) − 4(b^#, c^#)`.
    pub fn quartic(&self) -> Scalar {
        let t = &(&self.a * &self.d) - &self.b.trace_pair(&self.c);
        let four = Scalar::from_int(4);
        &(&(&t * &t) + &(&four * &(&(&self.a * &self.c.norm()) + &(&self.d * &self.b.norm()))))
            - &(&four * &self.b.sharp().trace_pair(&self.c.sharp()))
    }

    /// The order-two symmetry `(a, b, c, d) ↦ (d, −c, b, −a)`.
    pub fn flip(&self) -> Self {
        FreudenthalElement::new(self.d.clone(), -&self.c, self.b.clone(), -&self.a)
    }

    /// `n_L(X)(a, b, c, d) = (0, aX, b×X, (c, X))`.
    pub fn n_l(&self, x: &JordanElement) -> Self {
        FreudenthalElement::new(
            Scalar::zero(),
            x.scale(&self.a),
            self.b.cross(x),
            self.c.trace_pair(x),
        )
    }

    /// `n_L^∨(γ)(a, b, c, d) = ((b, γ), c×γ, dγ, 0)`.
    pub fn n_l_dual(&self, g: &JordanElement) -> Self {
        FreudenthalElement::new(
            self.b.trace_pair(g),
            self.c.cross(g),
            g.scale(&self.d),
            Scalar::zero(),
        )
    }

    /// `exp(n_L(X))`: `(a, b + aX, c + b×X + aX^#, d + (c,X) + (b,X^#) + a·n(X))`.
    pub fn n_g(&self, x: &JordanElement) -> Self {
        let xs = x.sharp();
        FreudenthalElement::new(
            self.a.clone(),
            &self.b + &x.scale(&self.a),
            &(&self.c + &self.b.cross(x)) + &xs.scale(&self.a),
            &(&(&self.d + &self.c.trace_pair(x)) + &self.b.trace_pair(&xs)) + &(&self.a * &x.norm()),
        )
    }

    /// `exp(n_L^∨(γ))`: `(a + (b,γ) + (c,γ^#) + d·n(γ), b + c×γ + dγ^#, c + dγ, d)`.
    pub fn n_g_dual(&self, g: &JordanElement) -> Self {
        let gs = g.sharp();
        FreudenthalElement::new(
            &(&(&self.a + &self.b.trace_pair(g)) + &self.c.trace_pair(&gs)) + &(&self.d * &g.norm()),
            &(&self.b + &self.c.cross(g)) + &gs.scale(&self.d),
            &self.c + &g.scale(&self.d),
            self.d.clone(),
        )
    }

    /// Rank at most one, decided branchwise on which of `a`, `d` vanish.
    pub fn is_rank_at_most_one(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if !self.a.is_zero() {
            let ai = self.a.inv().expect("nonzero");
            return self.c == self.b.sharp().scale(&ai) && self.d == &self.b.norm() * &(&ai * &ai);
        }
        if !self.d.is_zero() {
            let di = self.d.inv().expect("nonzero");
            return self.b == self.c.sharp().scale(&di) && self.c.norm().is_zero();
        }
        self.b.is_rank_at_most_one() && self.c.is_rank_at_most_one() && phi_vanishes(&self.c, &self.b)
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integral() && self.d.is_integral() && self.b.is_integral() && self.c.is_integral()
    }

    /// Content `d_w`: the gcd of all lattice coordinates.
    pub fn content(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::InvalidInput("content of the zero element".into()));
        }
        let not_integral = || Error::InvalidInput("element is not in W_{J_R}".into());
        let mut g = self.a.to_integer().ok_or_else(not_integral)?;
        g = g.gcd(&self.d.to_integer().ok_or_else(not_integral)?);
        for t in [&self.b, &self.c] {
            for x in t.lattice_coords().ok_or_else(not_integral)?.iter() {
                g = g.gcd(x);
            }
        }
        Ok(g.abs())
    }

    /// `p(w)(u, v) = a u³ + (b, P^#) u²v + (c, P) uv² + d v³` with P = I or E.
    pub fn project_cubic(&self, tag: &PairingTag) -> BinaryCubic {
        let p = tag.base_point();
        BinaryCubic([
            self.a.clone(),
            self.b.trace_pair(&p.sharp()),
            self.c.trace_pair(&p),
            self.d.clone(),
        ])
    }
}

/// `a(T) = 240σ₃(d_T)` for rank-one T, and `a(0) = 1`.
pub fn kim_coeff(t: &JordanElement) -> Result<BigInt> {
    if t.is_zero() {
        return Ok(BigInt::from(1));
    }
    if !t.is_rank_at_most_one() {
        return Err(Error::Precondition("kim_coeff needs a rank-one element".into()));
    }
    let d = t.content()?.to_u64().ok_or_else(|| Error::Computation("content too large".into()))?;
    Ok(BigInt::from(240u32) * BigInt::from(sigma(3, d)))
}

/// `a(w) = σ₄(d_w)` for rank-one w.
pub fn gan_coeff(w: &FreudenthalElement) -> Result<BigInt> {
    if !w.is_rank_at_most_one() {
        return Err(Error::Precondition("gan_coeff needs a rank-one element".into()));
    }
    let d = w.content()?.to_u64().ok_or_else(|| Error::Computation("content too large".into()))?;
    Ok(BigInt::from(sigma(4, d)))
}

/// `A u³ + B u²v + C uv² + D v³`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BinaryCubic(pub [Scalar; 4]);

impl BinaryCubic {
    pub fn from_ints(c: [i64; 4]) -> Self {
        BinaryCubic(c.map(Scalar::from_int))
    }

    /// Integer coefficients, if all are rational integers that fit in i64.
    pub fn as_ints(&self) -> Option<[i64; 4]> {
        let mut out = [0i64; 4];
        for (o, s) in out.iter_mut().zip(&self.0) {
            *o = s.to_i64()?;
        }
        Some(out)
    }

    /// `B²C² − 4AC³ − 4B³D − 27A²D² + 18ABCD`.
    pub fn discriminant(&self) -> Scalar {
        let [a, b, c, d] = &self.0;
        let n = |k: i64| Scalar::from_int(k);
        let sq = |x: &Scalar| x * x;
        let cube = |x: &Scalar| &(x * x) * x;
        &(&(&(&sq(&(b * c)) - &(&n(4) * &(a * &cube(c)))) - &(&n(4) * &(&cube(b) * d)))
            - &(&n(27) * &sq(&(a * d))))
            + &(&n(18) * &(&(a * b) * &(c * d)))
    }
}

impl fmt::Display for BinaryCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl std::str::FromStr for BinaryCubic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("binary cubic needs 4 coefficients: {s:?}")));
        }
        let mut c: [Scalar; 4] = Default::default();
        for (slot, p) in c.iter_mut().zip(parts) {
            *slot = p.parse()?;
        }
        Ok(BinaryCubic(c))
    }
}

/// Cubic rings whose binary cubic forms are fed to the G₂ coefficient engine.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CubicRing {
    /// Z × Z × Z.
    Product3,
    /// Z × Z_D with Z_D the quadratic ring of discriminant D.
    ZCrossQuadratic(i64),
}

impl CubicRing {
    pub fn z_cross_quadratic(d: i64) -> Result<Self> {
        if d.rem_euclid(4) > 1 {
            return Err(Error::InvalidInput(format!("discriminant {d} is not 0 or 1 mod 4")));
        }
        Ok(CubicRing::ZCrossQuadratic(d))
    }

    /// `(p, q)` with Z_D = Z[t]/(t² − pt − q), taking p = D.
    pub fn pq(d: i64) -> (i64, i64) {
        (d, (d - d * d) / 4)
    }

    /// The binary cubic form attached to the ring.
    ///
    /// For Z × Z[t]/(t² − pt − q) this is `−u²v + p uv² + q v³`, whose discriminant
    /// is p² + 4q = D.
    pub fn cubic(&self) -> BinaryCubic {
        match *self {
            CubicRing::Product3 => BinaryCubic::from_ints([0, 1, -1, 0]),
            CubicRing::ZCrossQuadratic(d) => {
                let (p, q) = CubicRing::pq(d);
                BinaryCubic::from_ints([0, -1, p, q])
            }
        }
    }
}

/// A lattice point of W_{J_R}, with J-components in integer form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IntFreudenthal {
    pub a: i64,
    pub b: IntJordan,
    pub c: IntJordan,
    pub d: i64,
}

impl IntFreudenthal {
    pub fn to_exact(&self) -> FreudenthalElement {
        FreudenthalElement::new(
            Scalar::from_int(self.a),
            self.b.to_exact(),
            self.c.to_exact(),
            Scalar::from_int(self.d),
        )
    }

    pub fn content(&self) -> i64 {
        let mut g = self.a.gcd(&self.d);
        for t in [&self.b, &self.c] {
            if g == 1 {
                break;
            }
            g = g.gcd(&t.content());
        }
        g
    }
}

/// Solves `a_i = (a_j a_k)* / s` in doubled coordinates, if the quotient lies in R_Θ.
fn solve_third(aj: &IntOct, ak: &IntOct, s: i64) -> Option<IntOct> {
    let m = int_conj(&int_mul(aj, ak));
    let mut out = [0i64; 8];
    for (o, v) in out.iter_mut().zip(m) {
        if v % s != 0 {
            return None;
        }
        *o = v / s;
    }
    doubled_to_cox(&out)?;
    Some(out)
}

/// Rank ≤ 1 elements of J_R with the given diagonal (all entries of one sign).
pub fn rank_one_with_diagonal(c: [i64; 3]) -> Vec<IntJordan> {
    rank_one_with_diagonal_and_traces(c, None)
}

/// Rank ≤ 1 elements of J_R with the given diagonal and, optionally, prescribed
/// traces of the off-diagonal entries `a1, a2, a3`.
///
/// One off-diagonal entry is solved from the other two through the adjoint
/// equations, so the cost is the product of two shell sizes.
pub fn rank_one_with_diagonal_and_traces(c: [i64; 3], traces: Option<[i64; 3]>) -> Vec<IntJordan> {
    let mut out = Vec::new();
    let norms = [c[1] * c[2], c[2] * c[0], c[0] * c[1]];
    if norms.iter().any(|&n| n < 0) {
        return out;
    }
    let shell = |i: usize| -> Vec<IntOct> {
        match traces {
            Some(t) => shell_with_trace(norms[i] as u64, t[i]),
            None => shell_doubled(norms[i] as u64).to_vec(),
        }
    };
    let Some(i) = (0..3).find(|&i| c[i] != 0) else {
        if traces.map_or(true, |t| t == [0; 3]) {
            out.push(IntJordan::zero());
        }
        return out;
    };
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let sj = shell(j);
    let sk = shell(k);
    for aj in &sj {
        for ak in &sk {
            let Some(ai) = solve_third(aj, ak, c[i]) else {
                continue;
            };
            if traces.is_some_and(|t| ai[0] != t[i]) {
                continue;
            }
            let mut t = IntJordan { c, a: [[0; 8]; 3] };
            t.a[i] = ai;
            t.a[j] = *aj;
            t.a[k] = *ak;
            if t.is_rank_at_most_one() {
                out.push(t);
            }
        }
    }
    out
}

/// Rank ≤ 1 elements of J_R with trace `t` (for t = 0 only the zero element).
pub fn rank_one_with_trace(t: i64) -> Vec<IntJordan> {
    if t < 0 {
        return rank_one_with_trace(-t).iter().map(IntJordan::neg).collect();
    }
    let mut out = Vec::new();
    for c1 in (0..=t).rev() {
        for c2 in (0..=t - c1).rev() {
            out.extend(rank_one_with_diagonal([c1, c2, t - c1 - c2]));
        }
    }
    out
}

fn target_ints(w0: &BinaryCubic) -> Result<[i64; 4]> {
    w0.as_ints()
        .ok_or_else(|| Error::InvalidInput(format!("target cubic {w0} must have integer coefficients")))
}

/// Calls `f` on every rank-one `w ∈ W_{J_R}` with `p_I(w) = w₀`, in a fixed order.
///
/// Only targets with leading coefficient A = 0 are supported. For D ≠ 0 each
/// rank-one `T₁` of trace B must be zero or a multiple of a diagonal idempotent;
/// this holds whenever |B| ≤ 1.
pub fn for_each_rank_one(w0: &BinaryCubic, mut f: impl FnMut(&IntFreudenthal)) -> Result<()> {
    let [a, b, c, d] = target_ints(w0)?;
    if a != 0 {
        return Err(Error::Unsupported(format!(
            "fiber enumeration needs leading coefficient 0, got {w0}"
        )));
    }
    let t1s = rank_one_with_trace(b);
    if d == 0 {
        let t2s = rank_one_with_trace(c);
        for t1 in &t1s {
            let e1 = t1.to_exact();
            for t2 in &t2s {
                if t1.is_zero() && t2.is_zero() {
                    continue;
                }
                let e2 = t2.to_exact();
                if !e1.trace_pair(&e2).is_zero() || !phi_vanishes(&e2, &e1) {
                    continue;
                }
                f(&IntFreudenthal { a: 0, b: *t1, c: *t2, d: 0 });
            }
        }
        return Ok(());
    }
    for t1 in &t1s {
        if t1.is_zero() {
            // b = c^#/d forces c^# = 0
            for t2 in rank_one_with_trace(c) {
                f(&IntFreudenthal { a: 0, b: *t1, c: t2, d });
            }
            continue;
        }
        let support: Vec<usize> = (0..3).filter(|&i| t1.c[i] != 0).collect();
        if support.len() != 1 || t1.a != [[0; 8]; 3] {
            return Err(Error::Unsupported(format!(
                "rank-one T1 of trace {b} outside the diagonal-idempotent family"
            )));
        }
        let i = support[0];
        let s = t1.c[i];
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        // T2 = [c_j, x; x*, c_k] block with c_j + c_k = C and c_j c_k − n(x) = D·s
        let disc = c * c - 4 * d * s;
        if disc < 0 {
            continue;
        }
        let vmax = (disc as f64).sqrt() as i64 + 1;
        for v in -vmax..=vmax {
            if (v - c).rem_euclid(2) != 0 || v * v > disc {
                continue;
            }
            let n4 = disc - v * v;
            if n4 % 4 != 0 {
                continue;
            }
            for x in shell_doubled((n4 / 4) as u64).iter() {
                let mut t2 = IntJordan::zero();
                t2.c[j] = (c + v) / 2;
                t2.c[k] = (c - v) / 2;
                t2.a[i] = *x;
                f(&IntFreudenthal { a: 0, b: *t1, c: t2, d });
            }
        }
    }
    Ok(())
}

/// The complete list of rank-one `w ∈ W_{J_R}` with `p_I(w) = w₀`.
pub fn fiber_rank_one(w0: &BinaryCubic, tag: &PairingTag) -> Result<Vec<FreudenthalElement>> {
    if let PairingTag::E(e) = tag {
        if *e != JordanElement::identity() {
            return Err(Error::Unsupported(
                "fiber enumeration over a non-identity base point".into(),
            ));
        }
    }
    let mut out = Vec::new();
    for_each_rank_one(w0, |w| out.push(w.to_exact()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_normalization() {
        let p = FreudenthalElement::new(Scalar::one(), JordanElement::zero(), JordanElement::zero(), Scalar::zero());
        let q = FreudenthalElement::new(Scalar::zero(), JordanElement::zero(), JordanElement::zero(), Scalar::one());
        assert_eq!(p.symplectic(&q), Scalar::one());
        assert_eq!(p.quartic(), Scalar::zero());
        assert_eq!(p.add(&q).quartic(), Scalar::one());
    }

    #[test]
    fn lemma_family_is_rank_one() {
        let w = FreudenthalElement::new(Scalar::zero(), JordanElement::e(0), -&JordanElement::e(1), Scalar::zero());
        assert!(w.is_rank_at_most_one());
        assert_eq!(w.project_cubic(&PairingTag::I), BinaryCubic::from_ints([0, 1, -1, 0]));
        assert_eq!(gan_coeff(&w).unwrap(), BigInt::from(1));
        let bad = FreudenthalElement::new(Scalar::zero(), JordanElement::e(0), -&JordanElement::e(0), Scalar::zero());
        assert!(!bad.is_rank_at_most_one());
    }

    #[test]
    fn kim_coefficients() {
        assert_eq!(kim_coeff(&JordanElement::e(0)).unwrap(), BigInt::from(240));
        assert_eq!(kim_coeff(&JordanElement::diag_ints(2, 0, 0)).unwrap(), BigInt::from(2160));
        assert_eq!(kim_coeff(&JordanElement::zero()).unwrap(), BigInt::from(1));
        assert!(kim_coeff(&JordanElement::identity()).is_err());
    }

    #[test]
    fn six_element_fiber() {
        let f = fiber_rank_one(&BinaryCubic::from_ints([0, 1, -1, 0]), &PairingTag::I).unwrap();
        assert_eq!(f.len(), 6);
        for w in &f {
            assert_eq!(w.d, Scalar::zero());
            assert!(w.b.c.iter().filter(|x| x.is_one()).count() == 1);
        }
    }

    #[test]
    fn quadratic_ring_discriminant() {
        for d in [1, 4, 5, 8, 12, 13] {
            let r = CubicRing::z_cross_quadratic(d).unwrap();
            assert_eq!(r.cubic().discriminant(), Scalar::from_int(d));
        }
        assert!(CubicRing::z_cross_quadratic(3).is_err());
    }

    #[test]
    fn leading_coefficient_rejected() {
        assert!(matches!(
            fiber_rank_one(&BinaryCubic::from_ints([1, 0, 0, 0]), &PairingTag::I),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn empty_fiber() {
        // −u²v − v³: the block equation v² + 4n(x) = −4 has no solutions
        let f = fiber_rank_one(&BinaryCubic::from_ints([0, -1, 0, -1]), &PairingTag::I).unwrap();
        assert!(f.is_empty());
    }
}
