//! Quaternions on (1, i, j, k), octonions as Cayley–Dickson pairs with γ = −1, and
//! the Coxeter integral order R_Θ.
//!
//! Octonions are stored in pair coordinates `(x, y) = x + y·e`. The Coxeter basis
//! `jh, e, −h, j, ih, 1, eh, ke` (with `h = ½(i+j+k+e)`) is a basis of simple roots
//! of E₈ for the trace form, and R_Θ is its Z-span.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A quaternion `q0 + q1 i + q2 j + q3 k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Quaternion(pub [Scalar; 4]);

impl Quaternion {
    pub fn zero() -> Self {
        Quaternion::default()
    }

    pub fn real(s: Scalar) -> Self {
        let mut q = Quaternion::zero();
        q.0[0] = s;
        q
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Quaternion(c.map(Scalar::from_int))
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = &self.0;
        Quaternion([a.clone(), -b, -c, -d])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn norm(&self) -> Scalar {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Quaternion(self.0.clone().map(|x| &x * s))
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        let [a0, a1, a2, a3] = &self.0;
        let [b0, b1, b2, b3] = &o.0;
        Quaternion([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ])
    }
}

/// An octonion `(x, y)`, with coordinates `[x0, x1, x2, x3, y0, y1, y2, y3]`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Octonion(pub [Scalar; 8]);

impl Octonion {
    pub fn zero() -> Self {
        Octonion::default()
    }

    pub fn one() -> Self {
        Octonion::real(Scalar::one())
    }

    pub fn real(s: Scalar) -> Self {
        let mut o = Octonion::zero();
        o.0[0] = s;
        o
    }

    /// The unit with a single pair coordinate equal to 1.
    pub fn unit(idx: usize) -> Self {
        let mut o = Octonion::zero();
        o.0[idx] = Scalar::one();
        o
    }

    pub fn from_pair(x: &Quaternion, y: &Quaternion) -> Self {
        Octonion(std::array::from_fn(|i| {
            if i < 4 {
                x.0[i].clone()
            } else {
                y.0[i - 4].clone()
            }
        }))
    }

    pub fn from_ints(c: [i64; 8]) -> Self {
        Octonion(c.map(Scalar::from_int))
    }

    pub fn x(&self) -> Quaternion {
        Quaternion(std::array::from_fn(|i| self.0[i].clone()))
    }

    pub fn y(&self) -> Quaternion {
        Quaternion(std::array::from_fn(|i| self.0[i + 4].clone()))
    }

    pub fn coords(&self) -> &[Scalar; 8] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn conj(&self) -> Self {
        let mut o = self.clone();
        for c in o.0.iter_mut().skip(1) {
            *c = -&*c;
        }
        o
    }

    /// The norm form, extended bilinearly (not Hermitian) to Gaussian coefficients.
    pub fn norm(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for c in &self.0 {
            if !c.is_zero() {
                acc += &(c * c);
            }
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        &self.0[0] + &self.0[0]
    }

    /// `(x, y) = n(x + y) − n(x) − n(y) = tr(x y*)`.
    pub fn bilinear(&self, o: &Octonion) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, b) in self.0.iter().zip(&o.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        &acc + &acc
    }

    /// `x − ½ tr(x)`.
    pub fn trace_zero_part(&self) -> Self {
        let mut o = self.clone();
        o.0[0] = Scalar::zero();
        o
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Octonion::zero();
        }
        Octonion(std::array::from_fn(|i| {
            if self.0[i].is_zero() {
                Scalar::zero()
            } else {
                &self.0[i] * s
            }
        }))
    }

    /// Coordinates in the Coxeter basis.
    pub fn to_coxeter(&self) -> [Scalar; 8] {
        let d = dictionary();
        std::array::from_fn(|i| {
            let mut acc = Scalar::zero();
            for j in 0..8 {
                if d.pair_to_cox[i][j] != 0 && !self.0[j].is_zero() {
                    acc += &(&self.0[j] * &Scalar::from_int(d.pair_to_cox[i][j]));
                }
            }
            acc
        })
    }

    pub fn from_coxeter(c: &[Scalar; 8]) -> Self {
        let d = dictionary();
        Octonion(std::array::from_fn(|i| {
            let mut acc = Scalar::zero();
            for j in 0..8 {
                if d.cox_to_doubled[i][j] != 0 && !c[j].is_zero() {
                    acc += &(&c[j] * &Scalar::from_int(d.cox_to_doubled[i][j]));
                }
            }
            &acc * &Scalar::half()
        }))
    }

    pub fn from_coxeter_ints(c: &[i64; 8]) -> Self {
        let p = cox_to_doubled(c);
        Octonion(p.map(|v| Scalar::from_frac(v, 2)))
    }

    /// Membership in R_Θ: all Coxeter coordinates are rational integers.
    pub fn is_integral(&self) -> bool {
        self.to_coxeter().iter().all(Scalar::is_integral)
    }

    /// Integer Coxeter coordinates, if the octonion lies in R_Θ.
    pub fn coxeter_ints(&self) -> Option<[i64; 8]> {
        let c = self.to_coxeter();
        let mut out = [0i64; 8];
        for (o, s) in out.iter_mut().zip(&c) {
            *o = s.to_i64()?;
        }
        Some(out)
    }

    /// Twice the pair coordinates, if they are all rational integers.
    pub fn doubled_ints(&self) -> Option<IntOct> {
        let mut out = [0i64; 8];
        for (o, s) in out.iter_mut().zip(&self.0) {
            *o = (s + s).to_i64()?;
        }
        Some(out)
    }

    pub fn from_doubled(p: &IntOct) -> Self {
        Octonion(p.map(|v| Scalar::from_frac(v, 2)))
    }
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oct(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, o: &Octonion) -> Octonion {
        Octonion(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, o: &Octonion) -> Octonion {
        Octonion(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }
}

impl Neg for &Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(std::array::from_fn(|i| -&self.0[i]))
    }
}

impl Mul for &Octonion {
    type Output = Octonion;
    /// `(x₁,y₁)(x₂,y₂) = (x₁x₂ − y₂* y₁, y₂x₁ + y₁x₂*)`.
    fn mul(self, o: &Octonion) -> Octonion {
        let (x1, y1) = (self.x(), self.y());
        let (x2, y2) = (o.x(), o.y());
        let a = &(&x1 * &x2) - &(&y2.conj() * &y1);
        let b = &(&y2 * &x1) + &(&y1 * &x2.conj());
        Octonion::from_pair(&a, &b)
    }
}

macro_rules! owned_oct_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Octonion> for Octonion {
            type Output = Octonion;
            fn $m(self, o: Octonion) -> Octonion {
                (&self).$m(&o)
            }
        }
    };
}
owned_oct_ops!(Add, add);
owned_oct_ops!(Sub, sub);
owned_oct_ops!(Mul, mul);

/// Multiply, as a free function.
pub fn oct_mul(x: &Octonion, y: &Octonion) -> Octonion {
    x * y
}

/// Integer octonion in doubled pair coordinates: the entries are `2·x_k`.
/// Every element of R_Θ has such a representation.
pub type IntOct = [i64; 8];

fn qmul_i(a: &[i64], b: &[i64]) -> [i64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qconj_i(a: &[i64]) -> [i64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Product of doubled octonions, again doubled. Exact for elements of R_Θ.
pub fn int_mul(a: &IntOct, b: &IntOct) -> IntOct {
    let (x1, y1) = (&a[..4], &a[4..]);
    let (x2, y2) = (&b[..4], &b[4..]);
    let p = qmul_i(x1, x2);
    let q = qmul_i(&qconj_i(y2), y1);
    let r = qmul_i(y2, x1);
    let s = qmul_i(y1, &qconj_i(x2));
    let mut out = [0i64; 8];
    for k in 0..4 {
        out[k] = p[k] - q[k];
        out[k + 4] = r[k] + s[k];
    }
    for v in out.iter_mut() {
        debug_assert!(*v % 2 == 0, "product left R_Θ");
        *v /= 2;
    }
    out
}

pub fn int_conj(a: &IntOct) -> IntOct {
    let mut o = *a;
    for v in o.iter_mut().skip(1) {
        *v = -*v;
    }
    o
}

/// Norm of a doubled octonion (the sum of squares is 4n).
pub fn int_norm(a: &IntOct) -> i64 {
    a.iter().map(|v| v * v).sum::<i64>() / 4
}

/// Bilinear form (x, y) of doubled octonions.
pub fn int_bilinear(a: &IntOct, b: &IntOct) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>() / 2
}

/// Trace of a doubled octonion.
pub fn int_trace(a: &IntOct) -> i64 {
    a[0]
}

/// Fixed dictionary between the Coxeter basis and pair coordinates.
struct Dictionary {
    /// Column j holds the doubled pair coordinates of the j-th Coxeter basis vector.
    cox_to_doubled: [[i64; 8]; 8],
    /// Integer inverse of the undoubled basis matrix.
    pair_to_cox: [[i64; 8]; 8],
    gram: [[i64; 8]; 8],
}

/// The Coxeter basis `jh, e, −h, j, ih, 1, eh, ke`.
pub fn coxeter_basis() -> [Octonion; 8] {
    let q = |c: [i64; 4]| Quaternion::from_ints(c);
    let zero = q([0, 0, 0, 0]);
    let i = Octonion::from_pair(&q([0, 1, 0, 0]), &zero);
    let j = Octonion::from_pair(&q([0, 0, 1, 0]), &zero);
    let k = Octonion::from_pair(&q([0, 0, 0, 1]), &zero);
    let e = Octonion::from_pair(&zero, &q([1, 0, 0, 0]));
    let one = Octonion::one();
    let h = (&(&(&i + &j) + &k) + &e).scale(&Scalar::half());
    [&j * &h, e.clone(), -&h, j.clone(), &i * &h, one, &e * &h, &k * &e]
}

fn dictionary() -> &'static Dictionary {
    static D: OnceLock<Dictionary> = OnceLock::new();
    D.get_or_init(|| {
        let basis = coxeter_basis();
        let mut cox_to_doubled = [[0i64; 8]; 8];
        for (j, b) in basis.iter().enumerate() {
            let d = b.doubled_ints().expect("Coxeter basis has half-integral coordinates");
            for i in 0..8 {
                cox_to_doubled[i][j] = d[i];
            }
        }
        let mut gram = [[0i64; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                gram[a][b] = basis[a]
                    .bilinear(&basis[b])
                    .to_i64()
                    .expect("integral Gram entry");
            }
        }
        let b = Matrix::from_rows(
            (0..8)
                .map(|i| {
                    (0..8)
                        .map(|j| Scalar::from_frac(cox_to_doubled[i][j], 2))
                        .collect()
                })
                .collect(),
        );
        let inv = b.inverse().expect("Coxeter basis is a basis");
        let mut pair_to_cox = [[0i64; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                pair_to_cox[i][j] = inv[(i, j)]
                    .to_i64()
                    .expect("R_Θ contains the Lipschitz-type lattice Z^8");
            }
        }
        Dictionary {
            cox_to_doubled,
            pair_to_cox,
            gram,
        }
    })
}

/// Gram matrix of the Coxeter basis under (x, y).
pub fn coxeter_gram() -> [[i64; 8]; 8] {
    dictionary().gram
}

/// Doubled pair coordinates of the element with the given Coxeter coordinates.
pub fn cox_to_doubled(c: &[i64; 8]) -> IntOct {
    let m = &dictionary().cox_to_doubled;
    std::array::from_fn(|i| (0..8).map(|j| m[i][j] * c[j]).sum())
}

/// Coxeter coordinates of a doubled octonion, or `None` if it is not in R_Θ.
pub fn doubled_to_cox(p: &IntOct) -> Option<[i64; 8]> {
    let m = &dictionary().pair_to_cox;
    let mut out = [0i64; 8];
    for i in 0..8 {
        let s: i64 = (0..8).map(|j| m[i][j] * p[j]).sum();
        if s % 2 != 0 {
            return None;
        }
        out[i] = s / 2;
    }
    Some(out)
}

/// Norm from Coxeter coordinates, `½ cᵀGc`.
pub fn cox_norm(c: &[i64; 8]) -> i64 {
    let g = &dictionary().gram;
    let mut s = 0;
    for i in 0..8 {
        for j in 0..8 {
            s += c[i] * g[i][j] * c[j];
        }
    }
    s / 2
}

/// Parses an octonion given as eight Coxeter coordinates.
pub fn octonion_from_coxeter_strs<S: AsRef<str>>(coords: &[S]) -> Result<Octonion> {
    if coords.len() != 8 {
        return Err(Error::Parse(format!(
            "octonion needs 8 coordinates, got {}",
            coords.len()
        )));
    }
    let mut c: [Scalar; 8] = Default::default();
    for (slot, s) in c.iter_mut().zip(coords) {
        *slot = s.as_ref().parse()?;
    }
    Ok(Octonion::from_coxeter(&c))
}

impl serde::Serialize for Octonion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let c = self.to_coxeter();
        let mut seq = s.serialize_seq(Some(8))?;
        for x in &c {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for Octonion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<Scalar> = Vec::deserialize(d)?;
        let arr: [Scalar; 8] = v
            .try_into()
            .map_err(|_| serde::de::Error::custom("octonion needs 8 coordinates"))?;
        Ok(Octonion::from_coxeter(&arr))
    }
}
