//! The operators Φ_{γ,x} on J, the map ∧²J⁰ → f₄ whose kernel is V_{λ₃}, singular
//! isotropic pairs `(x, y)`, and the tensors `(x∧y)^{⊗m}` with their pairings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{JordanElement, PairingTag, DIM};
use crate::linalg::Matrix;
use crate::octonion::Octonion;
use crate::scalar::Scalar;

/// `Φ_{γ,x}(z) = −γ×(x×z) + (γ,z)x + (γ,x)z`, with γ ∈ J^∨ identified with J.
pub fn phi_apply(g: &JordanElement, x: &JordanElement, z: &JordanElement) -> JordanElement {
    let t = -&g.cross(&x.cross(z));
    &(&t + &x.scale(&g.trace_pair(z))) + &z.scale(&g.trace_pair(x))
}

/// Whether Φ_{γ,x} is the zero operator on J.
pub fn phi_vanishes(g: &JordanElement, x: &JordanElement) -> bool {
    if !g.trace_pair(x).is_zero() {
        return false;
    }
    (0..DIM).all(|i| phi_apply(g, x, &JordanElement::basis(i)).is_zero())
}

/// Φ_{γ,x} as a 27×27 matrix on pair coordinates (column j is the image of basis j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiOperator(pub Matrix);

impl PhiOperator {
    pub fn apply(&self, z: &JordanElement) -> JordanElement {
        JordanElement::from_coords(&self.0.mul_vec(&z.coords()))
    }

    pub fn is_zero(&self) -> bool {
        (0..DIM).all(|i| (0..DIM).all(|j| self.0[(i, j)].is_zero()))
    }
}

pub fn phi(g: &JordanElement, x: &JordanElement) -> PhiOperator {
    let mut m = Matrix::zeros(DIM, DIM);
    for j in 0..DIM {
        for (i, v) in phi_apply(g, x, &JordanElement::basis(j)).coords().into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    PhiOperator(m)
}

/// A basis of the trace-zero subspace J⁰: `e11 − e22`, `e22 − e33`, then the
/// 24 off-diagonal pair coordinates.
pub fn trace_zero_basis() -> Vec<JordanElement> {
    let mut out = vec![
        &JordanElement::e(0) - &JordanElement::e(1),
        &JordanElement::e(1) - &JordanElement::e(2),
    ];
    out.extend((3..DIM).map(JordanElement::basis));
    out
}

/// The map ∧²J⁰ → End(J), `X∧Y ↦ Φ_{ι(X),Y} − Φ_{ι(Y),X}`, as a 729 × 325 matrix.
///
/// Columns are indexed by pairs `p < q` of [`trace_zero_basis`] in lexicographic
/// order; rows by the entries of the 27×27 operator.
pub fn phi_wedge_matrix() -> Matrix {
    let basis = trace_zero_basis();
    let n = basis.len();
    let ops: Vec<Vec<PhiOperator>> = basis
        .iter()
        .map(|g| basis.iter().map(|x| phi(g, x)).collect())
        .collect();
    let cols = n * (n - 1) / 2;
    let mut m = Matrix::zeros(DIM * DIM, cols);
    let mut col = 0;
    for p in 0..n {
        for q in p + 1..n {
            for i in 0..DIM {
                for j in 0..DIM {
                    let v = &ops[p][q].0[(i, j)] - &ops[q][p].0[(i, j)];
                    if !v.is_zero() {
                        m[(i * DIM + j, col)] = v;
                    }
                }
            }
            col += 1;
        }
    }
    m
}

/// Rank of the map ∧²J⁰ → f₄ and the dimension of its kernel V_{λ₃}.
pub fn phi_wedge_rank_and_kernel() -> (usize, usize) {
    let m = phi_wedge_matrix();
    let r = m.rank();
    (r, m.cols() - r)
}

/// A pair `(x, y)` spanning, with the dual copies, a singular isotropic subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPair {
    pub x: JordanElement,
    pub y: JordanElement,
}

/// Builds `x = [1, a3, a2*; a3*, −1, a1; a2, a1*, 0]` with `a1 = (a2 a3)*`,
/// `z = [0, 0, a2'*; 0, 1, 0; a2', 0, 0]` and `y = z × x`.
///
/// Requires `n(a2) = 0`, `a2 ≠ 0`, `n(a3) = −1`, `n(a2') = 1` and `(a2', a2) = 1`.
pub fn singular_pair(a2: &Octonion, a3: &Octonion, a2p: &Octonion) -> Result<SingularPair> {
    let pre = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("singular_pair: {what}")))
        }
    };
    pre(a2.norm().is_zero() && !a2.is_zero(), "a2 must be a nonzero null vector")?;
    pre(a3.norm() == Scalar::from_int(-1), "n(a3) must be -1")?;
    pre(a2p.norm().is_one(), "n(a2') must be 1")?;
    pre(a2p.bilinear(a2).is_one(), "(a2', a2) must be 1")?;
    let x = JordanElement::new(
        [Scalar::one(), Scalar::from_int(-1), Scalar::zero()],
        [(a2 * a3).conj(), a2.clone(), a3.clone()],
    );
    let z = JordanElement::new(
        [Scalar::zero(), Scalar::one(), Scalar::zero()],
        [Octonion::zero(), a2p.clone(), Octonion::zero()],
    );
    let y = z.cross(&x);
    let pair = SingularPair { x, y };
    let failed: Vec<&str> = pair.checklist().into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
    if !failed.is_empty() {
        return Err(Error::Computation(format!("singular pair checks failed: {failed:?}")));
    }
    Ok(pair)
}

impl SingularPair {
    /// Every condition making the span of x, y (and their images in J^∨) isotropic and singular.
    pub fn checklist(&self) -> Vec<(&'static str, bool)> {
        let (x, y) = (&self.x, &self.y);
        vec![
            ("(x,x) = 0", x.trace_pair(x).is_zero()),
            ("(x,y) = 0", x.trace_pair(y).is_zero()),
            ("(y,y) = 0", y.trace_pair(y).is_zero()),
            ("x# = 0", x.is_rank_at_most_one()),
            ("y# = 0", y.is_rank_at_most_one()),
            ("x × y = 0", x.cross(y).is_zero()),
            ("Φ(x,x) = 0", phi_vanishes(x, x)),
            ("Φ(x,y) = 0", phi_vanishes(x, y)),
            ("Φ(y,x) = 0", phi_vanishes(y, x)),
            ("Φ(y,y) = 0", phi_vanishes(y, y)),
        ]
    }

    pub fn is_singular(&self) -> bool {
        self.checklist().iter().all(|(_, ok)| *ok)
    }
}

/// One factor `b ∧ c` of a wedge tensor.
pub type Wedge = (JordanElement, JordanElement);

/// A linear combination of tensors `(b₁∧c₁) ⊗ … ⊗ (b_m∧c_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeTensor {
    pub degree: usize,
    pub terms: Vec<(Scalar, Vec<Wedge>)>,
}

impl WedgeTensor {
    /// The degree-0 tensor 1.
    pub fn one() -> Self {
        WedgeTensor {
            degree: 0,
            terms: vec![(Scalar::one(), Vec::new())],
        }
    }

    pub fn zero(degree: usize) -> Self {
        WedgeTensor { degree, terms: Vec::new() }
    }

    pub fn wedge(b: &JordanElement, c: &JordanElement) -> Self {
        WedgeTensor::from_terms(1, vec![(Scalar::one(), vec![(b.clone(), c.clone())])])
    }

    /// Builds a tensor from raw terms, orienting every factor and merging equal terms.
    pub fn from_terms(degree: usize, raw: Vec<(Scalar, Vec<Wedge>)>) -> Self {
        let mut terms: Vec<(Scalar, Vec<Wedge>)> = Vec::new();
        'outer: for (mut s, factors) in raw {
            assert_eq!(factors.len(), degree, "wedge tensor degree mismatch");
            let mut fs = Vec::with_capacity(degree);
            for (b, c) in factors {
                match b.cmp(&c) {
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Less => fs.push((b, c)),
                    std::cmp::Ordering::Greater => {
                        s = -s;
                        fs.push((c, b));
                    }
                }
            }
            if !s.is_zero() {
                terms.push((s, fs));
            }
        }
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut merged: Vec<(Scalar, Vec<Wedge>)> = Vec::with_capacity(terms.len());
        for (s, fs) in terms {
            match merged.last_mut() {
                Some(last) if last.1 == fs => last.0 += &s,
                _ => merged.push((s, fs)),
            }
        }
        merged.retain(|(s, _)| !s.is_zero());
        WedgeTensor { degree, terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn tensor(&self, o: &WedgeTensor) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (s, f) in &self.terms {
            for (t, g) in &o.terms {
                let mut fs = f.clone();
                fs.extend(g.iter().cloned());
                raw.push((s * t, fs));
            }
        }
        WedgeTensor::from_terms(self.degree + o.degree, raw)
    }

    pub fn power(&self, m: usize) -> Self {
        let mut out = WedgeTensor::one();
        for _ in 0..m {
            out = out.tensor(self);
        }
        out
    }

    pub fn add(&self, o: &WedgeTensor) -> Result<Self> {
        if self.degree != o.degree {
            return Err(Error::InvalidInput("adding wedge tensors of different degrees".into()));
        }
        let mut raw = self.terms.clone();
        raw.extend(o.terms.iter().cloned());
        Ok(WedgeTensor::from_terms(self.degree, raw))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        WedgeTensor::from_terms(
            self.degree,
            self.terms.iter().map(|(t, f)| (t * s, f.clone())).collect(),
        )
    }

    /// Replaces every factor by its projection to ∧²J⁰.
    pub fn trace_zero_projection(&self) -> Self {
        let third = Scalar::from_frac(1, 3);
        let proj = |b: &JordanElement| b - &JordanElement::identity().scale(&(&b.trace() * &third));
        WedgeTensor::from_terms(
            self.degree,
            self.terms
                .iter()
                .map(|(s, f)| (s.clone(), f.iter().map(|(b, c)| (proj(b), proj(c))).collect()))
                .collect(),
        )
    }
}

/// `β_{K,m} = (x∧y)^{⊗m}` for a singular pair.
pub fn beta_km(m: usize, pair: &SingularPair) -> Result<WedgeTensor> {
    if !pair.is_singular() {
        return Err(Error::Precondition("beta_km needs a singular isotropic pair".into()));
    }
    Ok(WedgeTensor::wedge(&pair.x, &pair.y).power(m))
}

/// `⟨b∧c, x∧y⟩ = (x,b)(y,c) − (x,c)(y,b)` with the tagged form in the J–J slots
/// and the trace pairing between J and J^∨.
pub fn wedge_factor_pair(bc: &Wedge, xy: &Wedge, tag: &PairingTag) -> Scalar {
    let (b, c) = bc;
    let (x, y) = xy;
    &(&x.pair(b, tag) * &y.trace_pair(c)) - &(&x.trace_pair(c) * &y.pair(b, tag))
}

/// The pairing `⟨P, β⟩` extended factor by factor and bilinearly.
pub fn wedge_pair(p: &WedgeTensor, beta: &WedgeTensor, tag: &PairingTag) -> Result<Scalar> {
    if p.degree != beta.degree {
        return Err(Error::InvalidInput(format!(
            "wedge_pair degree mismatch: {} vs {}",
            p.degree, beta.degree
        )));
    }
    let mut acc = Scalar::zero();
    for (s, f) in &p.terms {
        for (t, g) in &beta.terms {
            let mut prod = s * t;
            for (bc, xy) in f.iter().zip(g) {
                if prod.is_zero() {
                    break;
                }
                prod = &prod * &wedge_factor_pair(bc, xy, tag);
            }
            acc += &prod;
        }
    }
    Ok(acc)
}

/// Checks `(δb, x)_I = (b, δ⁻¹x)_E` for a linear map δ on J (27×27 on pair
/// coordinates) over the given samples.
pub fn transfer_pairing_holds(
    e: &JordanElement,
    delta: &Matrix,
    samples: &[(JordanElement, JordanElement)],
) -> Result<bool> {
    let inv = delta
        .inverse()
        .ok_or_else(|| Error::InvalidInput("δ is not invertible".into()))?;
    let tag = PairingTag::E(e.clone());
    let act = |m: &Matrix, v: &JordanElement| JordanElement::from_coords(&m.mul_vec(&v.coords()));
    Ok(samples
        .iter()
        .all(|(b, x)| act(delta, b).trace_pair(x) == b.pair(&act(&inv, x), &tag)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octonion::Quaternion;

    fn w() -> Scalar {
        Scalar::omega()
    }

    // ½((0,1) − ω(0,i)), ½((0,−1) − ω(0,i)) and −ω(i,0)
    fn e2() -> Octonion {
        let h = Scalar::half();
        Octonion::from_pair(
            &Quaternion::zero(),
            &Quaternion([h.clone(), -&(&h * &w()), Scalar::zero(), Scalar::zero()]),
        )
    }

    fn e2s() -> Octonion {
        let h = Scalar::half();
        Octonion::from_pair(
            &Quaternion::zero(),
            &Quaternion([-&h, -&(&h * &w()), Scalar::zero(), Scalar::zero()]),
        )
    }

    fn u0() -> Octonion {
        Octonion::from_pair(
            &Quaternion([Scalar::zero(), -&w(), Scalar::zero(), Scalar::zero()]),
            &Quaternion::zero(),
        )
    }

    fn pair() -> SingularPair {
        singular_pair(&e2(), &u0(), &(&e2() - &e2s())).unwrap()
    }

    #[test]
    fn phi_identity_pairs() {
        let i = JordanElement::identity();
        let e = JordanElement::new(
            [Scalar::from_int(2), Scalar::from_int(-1), Scalar::from_int(3)],
            [Octonion::from_ints([1, 0, 2, 0, 0, -1, 0, 1]), Octonion::zero(), Octonion::unit(3)],
        );
        assert_eq!(phi_apply(&i, &e, &i), e.scale(&Scalar::from_int(2)));
        assert_eq!(phi(&i, &e), phi(&e, &i));
    }

    #[test]
    fn documented_pair() {
        let p = pair();
        let h = Scalar::half();
        let q = |a: [Scalar; 4]| Quaternion(a);
        let z = Scalar::zero;
        let y1 = Octonion::from_pair(&Quaternion::zero(), &q([z(), -&w(), z(), z()]));
        let y2 = Octonion::from_pair(&Quaternion::zero(), &q([h.clone(), &h * &w(), z(), z()]));
        let y3 = Octonion::from_pair(&q([-&h, -&(&h * &w()), z(), z()]), &Quaternion::zero());
        assert_eq!(p.y.c, [Scalar::zero(), Scalar::from_int(-1), Scalar::one()]);
        assert_eq!(p.y.a, [y1, y2, y3]);
        let x1 = Octonion::from_pair(&Quaternion::zero(), &q([h.clone(), -&(&h * &w()), z(), z()]));
        assert_eq!(p.x.a[0], x1);
        assert!(p.is_singular());
    }

    #[test]
    fn diagonal_wedge_pairings() {
        let p = pair();
        let beta = WedgeTensor::wedge(&p.x, &p.y);
        for (i, j) in [(1, 2), (2, 0), (0, 1)] {
            let d = WedgeTensor::wedge(&JordanElement::e(i), &JordanElement::e(j));
            assert_eq!(wedge_pair(&d, &beta, &PairingTag::I).unwrap(), Scalar::from_int(-1));
        }
        let z = WedgeTensor::wedge(&JordanElement::e(0), &JordanElement::e(1));
        assert_eq!(wedge_pair(&z, &z, &PairingTag::I).unwrap(), Scalar::one());
    }

    #[test]
    fn beta_degrees() {
        let p = pair();
        assert_eq!(beta_km(0, &p).unwrap(), WedgeTensor::one());
        let b2 = beta_km(2, &p).unwrap();
        assert_eq!(b2.degree, 2);
        assert_eq!(b2.terms.len(), 1);
        let bad = SingularPair { x: JordanElement::e(0), y: JordanElement::e(1) };
        assert!(beta_km(1, &bad).is_err());
    }

    #[test]
    fn wedge_antisymmetry() {
        let a = JordanElement::e(0);
        let b = JordanElement::e(1);
        let s = WedgeTensor::wedge(&a, &b).add(&WedgeTensor::wedge(&b, &a)).unwrap();
        assert!(s.is_zero());
        assert!(WedgeTensor::wedge(&a, &a).is_zero());
    }

    #[test]
    fn singular_pair_preconditions() {
        assert!(matches!(
            singular_pair(&Octonion::one(), &u0(), &e2()),
            Err(Error::Precondition(_))
        ));
    }
}
