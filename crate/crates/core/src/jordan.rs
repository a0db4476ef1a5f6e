//! The exceptional Jordan algebra J = H₃(Θ).
//!
//! An element is stored as `[c1, a3, a2*; a3*, c2, a1; a2, a1*, c3]`: three diagonal
//! scalars and three octonions `a = [a1, a2, a3]`.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octonion::{doubled_to_cox, int_conj, int_mul, int_norm, IntOct, Octonion};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct JordanElement {
    pub c: [Scalar; 3],
    pub a: [Octonion; 3],
}

/// Number of coordinates of J: three diagonal scalars and three octonions.
pub const DIM: usize = 27;

impl JordanElement {
    pub fn zero() -> Self {
        JordanElement::default()
    }

    pub fn identity() -> Self {
        JordanElement::diag(Scalar::one(), Scalar::one(), Scalar::one())
    }

    pub fn diag(c1: Scalar, c2: Scalar, c3: Scalar) -> Self {
        JordanElement {
            c: [c1, c2, c3],
            a: Default::default(),
        }
    }

    pub fn diag_ints(c1: i64, c2: i64, c3: i64) -> Self {
        JordanElement::diag(c1.into(), c2.into(), c3.into())
    }

    /// The diagonal idempotent `e_ii` (0-based index).
    pub fn e(i: usize) -> Self {
        let mut x = JordanElement::zero();
        x.c[i] = Scalar::one();
        x
    }

    pub fn new(c: [Scalar; 3], a: [Octonion; 3]) -> Self {
        JordanElement { c, a }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero) && self.a.iter().all(Octonion::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        JordanElement {
            c: std::array::from_fn(|i| &self.c[i] * s),
            a: std::array::from_fn(|i| self.a[i].scale(s)),
        }
    }

    pub fn trace(&self) -> Scalar {
        &(&self.c[0] + &self.c[1]) + &self.c[2]
    }

    /// The cubic norm `c1c2c3 − c1n(a1) − c2n(a2) − c3n(a3) + tr((a1a2)a3)`.
    pub fn norm(&self) -> Scalar {
        let [c1, c2, c3] = &self.c;
        let [a1, a2, a3] = &self.a;
        let t = (&(a1 * a2) * a3).trace();
        &(&(&(c1 * &(c2 * c3)) - &(c1 * &a1.norm())) - &(&(c2 * &a2.norm()) + &(c3 * &a3.norm())))
            + &t
    }

    /// The adjoint `X^#`, the quadratic map with `(X^#)^# = n(X)X`.
    pub fn sharp(&self) -> Self {
        let [c1, c2, c3] = &self.c;
        let [a1, a2, a3] = &self.a;
        JordanElement {
            c: [
                &(c2 * c3) - &a1.norm(),
                &(c3 * c1) - &a2.norm(),
                &(c1 * c2) - &a3.norm(),
            ],
            a: [
                &(a2 * a3).conj() - &a1.scale(c1),
                &(a3 * a1).conj() - &a2.scale(c2),
                &(a1 * a2).conj() - &a3.scale(c3),
            ],
        }
    }

    /// `X × Y = (X+Y)^# − X^# − Y^#`.
    pub fn cross(&self, o: &JordanElement) -> Self {
        let [c1, c2, c3] = &self.c;
        let [d1, d2, d3] = &o.c;
        let [a1, a2, a3] = &self.a;
        let [b1, b2, b3] = &o.a;
        // polarization of each component of the adjoint
        let cd = |x: &Scalar, y: &Scalar, u: &Scalar, v: &Scalar| &(x * v) + &(u * y);
        JordanElement {
            c: [
                &cd(c2, c3, d2, d3) - &a1.bilinear(b1),
                &cd(c3, c1, d3, d1) - &a2.bilinear(b2),
                &cd(c1, c2, d1, d2) - &a3.bilinear(b3),
            ],
            a: [
                &(&(a2 * b3) + &(b2 * a3)).conj() - &(&a1.scale(d1) + &b1.scale(c1)),
                &(&(a3 * b1) + &(b3 * a1)).conj() - &(&a2.scale(d2) + &b2.scale(c2)),
                &(&(a1 * b2) + &(b1 * a2)).conj() - &(&a3.scale(d3) + &b3.scale(c3)),
            ],
        }
    }

    /// The trace pairing `(X, Y) = Σ c_i d_i + Σ (a_i, b_i)`.
    pub fn trace_pair(&self, o: &JordanElement) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..3 {
            if !self.c[i].is_zero() && !o.c[i].is_zero() {
                acc += &(&self.c[i] * &o.c[i]);
            }
            acc += &self.a[i].bilinear(&o.a[i]);
        }
        acc
    }

    /// The symmetric trilinear form with `(x, x, x) = 6n(x)`.
    pub fn trilinear(&self, y: &JordanElement, z: &JordanElement) -> Scalar {
        self.cross(y).trace_pair(z)
    }

    /// `(u, v)_E = ¼(E,E,u)(E,E,v) − (E,u,v)`, or the trace pairing for tag I.
    pub fn pair(&self, o: &JordanElement, tag: &PairingTag) -> Scalar {
        match tag {
            PairingTag::I => self.trace_pair(o),
            PairingTag::E(e) => {
                let ee = e.cross(e);
                let quarter = Scalar::from_frac(1, 4);
                &(&quarter * &(ee.trace_pair(self) * ee.trace_pair(o))) - &e.cross(self).trace_pair(o)
            }
        }
    }

    pub fn is_rank_at_most_one(&self) -> bool {
        self.sharp().is_zero()
    }

    /// `½[[2c1, tr a3, tr a2], [tr a3, 2c2, tr a1], [tr a2, tr a1, 2c3]]`.
    pub fn project_h3q(&self) -> [[Scalar; 3]; 3] {
        let r = |o: &Octonion| o.0[0].clone();
        let [c1, c2, c3] = self.c.clone();
        let [a1, a2, a3] = &self.a;
        [
            [c1, r(a3), r(a2)],
            [r(a3), c2, r(a1)],
            [r(a2), r(a1), c3],
        ]
    }

    /// Trace-zero parts `(x1, x2, x3)` of the off-diagonal entries.
    pub fn vector_part(&self) -> [Octonion; 3] {
        std::array::from_fn(|i| self.a[i].trace_zero_part())
    }

    /// Membership in J_R: integral diagonal and off-diagonal entries in R_Θ.
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(Scalar::is_integral) && self.a.iter().all(Octonion::is_integral)
    }

    /// The 27 lattice coordinates: diagonal, then Coxeter coordinates of a1, a2, a3.
    pub fn lattice_coords(&self) -> Option<[BigInt; DIM]> {
        let mut out: [BigInt; DIM] = std::array::from_fn(|_| BigInt::zero());
        for i in 0..3 {
            out[i] = self.c[i].to_integer()?;
            let cx = self.a[i].to_coxeter();
            for k in 0..8 {
                out[3 + 8 * i + k] = cx[k].to_integer()?;
            }
        }
        Some(out)
    }

    /// Content `d_T`: the largest integer d with d⁻¹T ∈ J_R.
    pub fn content(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::InvalidInput("content of the zero element".into()));
        }
        let coords = self
            .lattice_coords()
            .ok_or_else(|| Error::InvalidInput("element is not in J_R".into()))?;
        Ok(coords.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).abs())
    }

    /// Pair coordinates in a fixed order: c1, c2, c3, a1[0..8], a2[0..8], a3[0..8].
    pub fn coords(&self) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(DIM);
        v.extend(self.c.iter().cloned());
        for a in &self.a {
            v.extend(a.0.iter().cloned());
        }
        v
    }

    pub fn from_coords(v: &[Scalar]) -> Self {
        assert_eq!(v.len(), DIM);
        JordanElement {
            c: std::array::from_fn(|i| v[i].clone()),
            a: std::array::from_fn(|i| Octonion(std::array::from_fn(|k| v[3 + 8 * i + k].clone()))),
        }
    }

    /// The basis vector with a single pair coordinate equal to 1.
    pub fn basis(idx: usize) -> Self {
        let mut v = vec![Scalar::zero(); DIM];
        v[idx] = Scalar::one();
        JordanElement::from_coords(&v)
    }

    /// Rebuilds an element from a symmetric rational part and a trace-zero vector part.
    pub fn from_h3_and_vector(x0: &[[Scalar; 3]; 3], v: &[Octonion; 3]) -> Self {
        let off = |s: &Scalar, o: &Octonion| {
            let mut r = o.trace_zero_part();
            r.0[0] = s.clone();
            r
        };
        JordanElement {
            c: [x0[0][0].clone(), x0[1][1].clone(), x0[2][2].clone()],
            a: [off(&x0[1][2], &v[0]), off(&x0[0][2], &v[1]), off(&x0[0][1], &v[2])],
        }
    }

    /// Levi action of `n ∈ GL₃`: `(X₀, v) ↦ (ᵗn⁻¹X₀n⁻¹, det(n)⁻¹·n·v)`.
    /// Scales the norm by `det(n)⁻²`.
    pub fn sp6_levi_act(&self, n: &[[Scalar; 3]; 3]) -> Result<Self> {
        let det = det3(n);
        let det_inv = det
            .inv()
            .ok_or_else(|| Error::InvalidInput("singular Levi matrix".into()))?;
        let ni = inv3(n, &det_inv);
        let x0 = self.project_h3q();
        // ᵗn⁻¹ X₀ n⁻¹
        let mut tmp: [[Scalar; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                tmp[i][j] = (0..3).map(|k| &ni[k][i] * &x0[k][j]).sum();
            }
        }
        let mut y0: [[Scalar; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                y0[i][j] = (0..3).map(|k| &tmp[i][k] * &ni[k][j]).sum();
            }
        }
        let v = self.vector_part();
        let w: [Octonion; 3] = std::array::from_fn(|i| {
            let mut acc = Octonion::zero();
            for (j, vj) in v.iter().enumerate() {
                acc = &acc + &vj.scale(&n[i][j]);
            }
            acc.scale(&det_inv)
        });
        Ok(JordanElement::from_h3_and_vector(&y0, &w))
    }

    /// Integer doubled form, if the element lies in J_R.
    pub fn to_int(&self) -> Option<IntJordan> {
        if !self.is_integral() {
            return None;
        }
        Some(IntJordan {
            c: [self.c[0].to_i64()?, self.c[1].to_i64()?, self.c[2].to_i64()?],
            a: [
                self.a[0].doubled_ints()?,
                self.a[1].doubled_ints()?,
                self.a[2].doubled_ints()?,
            ],
        })
    }
}

pub fn det3(n: &[[Scalar; 3]; 3]) -> Scalar {
    let m = |i: usize, j: usize| &n[i][j];
    &(&(m(0, 0) * &(&(m(1, 1) * m(2, 2)) - &(m(1, 2) * m(2, 1))))
        - &(m(0, 1) * &(&(m(1, 0) * m(2, 2)) - &(m(1, 2) * m(2, 0)))))
        + &(m(0, 2) * &(&(m(1, 0) * m(2, 1)) - &(m(1, 1) * m(2, 0))))
}

fn inv3(n: &[[Scalar; 3]; 3], det_inv: &Scalar) -> [[Scalar; 3]; 3] {
    let m = |i: usize, j: usize| &n[i % 3][j % 3];
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            // cofactor of (j, i)
            let c = &(m(j + 1, i + 1) * m(j + 2, i + 2)) - &(m(j + 1, i + 2) * m(j + 2, i + 1));
            &c * det_inv
        })
    })
}

impl Add for &JordanElement {
    type Output = JordanElement;
    fn add(self, o: &JordanElement) -> JordanElement {
        JordanElement {
            c: std::array::from_fn(|i| &self.c[i] + &o.c[i]),
            a: std::array::from_fn(|i| &self.a[i] + &o.a[i]),
        }
    }
}

impl Sub for &JordanElement {
    type Output = JordanElement;
    fn sub(self, o: &JordanElement) -> JordanElement {
        JordanElement {
            c: std::array::from_fn(|i| &self.c[i] - &o.c[i]),
            a: std::array::from_fn(|i| &self.a[i] - &o.a[i]),
        }
    }
}

impl Neg for &JordanElement {
    type Output = JordanElement;
    fn neg(self) -> JordanElement {
        JordanElement {
            c: std::array::from_fn(|i| -&self.c[i]),
            a: std::array::from_fn(|i| -&self.a[i]),
        }
    }
}

/// Which quadratic form on J a pairing uses.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub enum PairingTag {
    #[default]
    I,
    E(JordanElement),
}

impl PairingTag {
    /// An E-tag, checked to have norm 1 and to lie in J_R.
    pub fn with_e(e: JordanElement) -> Result<Self> {
        if e.norm() != Scalar::one() {
            return Err(Error::InvalidInput("E must have norm 1".into()));
        }
        if !e.is_integral() {
            return Err(Error::InvalidInput("E must lie in J_R".into()));
        }
        Ok(PairingTag::E(e))
    }

    /// The element playing the role of the identity: I or E.
    pub fn base_point(&self) -> JordanElement {
        match self {
            PairingTag::I => JordanElement::identity(),
            PairingTag::E(e) => e.clone(),
        }
    }
}

/// An element of J_R in integer form: diagonal integers and doubled off-diagonal octonions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IntJordan {
    pub c: [i64; 3],
    pub a: [IntOct; 3],
}

impl IntJordan {
    pub fn zero() -> Self {
        IntJordan {
            c: [0; 3],
            a: [[0; 8]; 3],
        }
    }

    pub fn e(i: usize, s: i64) -> Self {
        let mut x = IntJordan::zero();
        x.c[i] = s;
        x
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0; 3] && self.a == [[0; 8]; 3]
    }

    pub fn neg(&self) -> Self {
        IntJordan {
            c: self.c.map(|v| -v),
            a: self.a.map(|o| o.map(|v| -v)),
        }
    }

    pub fn trace(&self) -> i64 {
        self.c.iter().sum()
    }

    /// Adjoint in doubled form (the result again lies in J_R).
    pub fn sharp(&self) -> IntJordan {
        let [c1, c2, c3] = self.c;
        let [a1, a2, a3] = &self.a;
        let off = |p: &IntOct, q: &IntOct, s: i64, r: &IntOct| -> IntOct {
            let m = int_conj(&int_mul(p, q));
            std::array::from_fn(|k| m[k] - s * r[k])
        };
        IntJordan {
            c: [c2 * c3 - int_norm(a1), c3 * c1 - int_norm(a2), c1 * c2 - int_norm(a3)],
            a: [off(a2, a3, c1, a1), off(a3, a1, c2, a2), off(a1, a2, c3, a3)],
        }
    }

    pub fn is_rank_at_most_one(&self) -> bool {
        self.sharp().is_zero()
    }

    pub fn to_exact(&self) -> JordanElement {
        JordanElement {
            c: self.c.map(Scalar::from_int),
            a: self.a.map(|o| Octonion::from_doubled(&o)),
        }
    }

    /// gcd of the lattice coordinates (0 for the zero element).
    pub fn content(&self) -> i64 {
        let mut g = self.c.iter().fold(0i64, |g, &x| g.gcd(&x));
        for o in &self.a {
            let cx = doubled_to_cox(o).expect("off-diagonal entry in R_Θ");
            g = cx.iter().fold(g, |g, &x| g.gcd(&x));
        }
        g.abs()
    }
}

#[derive(Serialize, Deserialize)]
struct JordanJson {
    diag: [Scalar; 3],
    off: [Octonion; 3],
}

impl Serialize for JordanElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JordanJson {
            diag: self.c.clone(),
            off: self.a.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JordanElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = JordanJson::deserialize(d)?;
        Ok(JordanElement { c: j.diag, a: j.off })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_facts() {
        let i = JordanElement::identity();
        assert_eq!(i.norm(), Scalar::one());
        assert_eq!(i.sharp(), i);
        assert_eq!(i.trace(), Scalar::from_int(3));
        assert_eq!(i.trilinear(&i, &i), Scalar::from_int(6));
        assert_eq!(i.trace_pair(&i), Scalar::from_int(3));
        assert_eq!(i.scale(&Scalar::from_int(2)).sharp(), i.scale(&Scalar::from_int(4)));
    }

    #[test]
    fn diagonal_norms() {
        assert_eq!(JordanElement::diag_ints(2, 1, 1).norm(), Scalar::from_int(2));
        assert_eq!(JordanElement::diag_ints(2, 3, 5).norm(), Scalar::from_int(30));
        assert!(JordanElement::e(0).sharp().is_zero());
    }

    #[test]
    fn trilinear_polarizations() {
        let i = JordanElement::identity();
        assert_eq!(i.trilinear(&i, &JordanElement::e(0)), Scalar::from_int(2));
        assert_eq!(
            JordanElement::e(0).trilinear(&JordanElement::e(1), &JordanElement::e(2)),
            Scalar::one()
        );
    }

    #[test]
    fn rank_examples() {
        assert!(JordanElement::zero().is_rank_at_most_one());
        assert!(JordanElement::e(0).is_rank_at_most_one());
        assert!((-&JordanElement::e(0)).is_rank_at_most_one());
        assert!(!JordanElement::identity().is_rank_at_most_one());
    }

    #[test]
    fn content_examples() {
        assert_eq!(JordanElement::identity().content().unwrap(), BigInt::from(1));
        assert_eq!(JordanElement::diag_ints(2, 2, 2).content().unwrap(), BigInt::from(2));
        assert_eq!(JordanElement::diag_ints(6, 4, 0).content().unwrap(), BigInt::from(2));
        assert!(JordanElement::zero().content().is_err());
    }

    #[test]
    fn project_examples() {
        let mut t = JordanElement::zero();
        t.a[0] = Octonion::one();
        let p = t.project_h3q();
        assert_eq!(p[1][2], Scalar::one());
        assert_eq!(p[2][1], Scalar::one());
        t.a[0] = Octonion::unit(4);
        assert!(t.project_h3q().iter().flatten().all(Scalar::is_zero));
    }

    #[test]
    fn levi_scaling_by_two() {
        let two = Scalar::from_int(2);
        let z = Scalar::zero();
        let n = [
            [two.clone(), z.clone(), z.clone()],
            [z.clone(), two.clone(), z.clone()],
            [z.clone(), z.clone(), two.clone()],
        ];
        let r = JordanElement::identity().sp6_levi_act(&n).unwrap();
        assert_eq!(r.norm(), Scalar::from_frac(1, 64));
    }

    #[test]
    fn json_round_trip() {
        let mut t = JordanElement::diag_ints(1, -2, 3);
        t.a[1] = Octonion::from_coxeter_ints(&[1, 0, 0, 2, 0, 0, -1, 0]);
        let s = serde_json::to_string(&t).unwrap();
        let back: JordanElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
