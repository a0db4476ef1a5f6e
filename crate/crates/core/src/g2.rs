//! V₇ = Θ⁰ over Q(ω), the derivation algebra g₂, tensors in the representations
//! W(k₁,k₂), lowering-operator spanning sets, and the pluriharmonic pairing with
//! the Fourier-expansion polynomial ring in `w₁,w₂,w₃,z₂₃,z₃₁,z₁₂`.

use std::collections::BTreeMap;
use std::fmt;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jordan::JordanElement;
use crate::linalg::{EchelonBasis, Matrix, SparseEchelon};
use crate::octonion::{Octonion, Quaternion};
use crate::scalar::Scalar;

pub const U0: usize = 0;
pub const E1: usize = 1;
pub const E2: usize = 2;
pub const E3: usize = 3;
pub const E1S: usize = 4;
pub const E2S: usize = 5;
pub const E3S: usize = 6;

pub const V7_NAMES: [&str; 7] = ["u0", "e1", "e2", "e3", "e1*", "e2*", "e3*"];

fn oct(x: [Scalar; 4], y: [Scalar; 4]) -> Octonion {
    Octonion::from_pair(&Quaternion(x), &Quaternion(y))
}

/// The basis `u₀, e₁, e₂, e₃, e₁*, e₂*, e₃*` of V₇ ⊗ Q(ω).
pub fn v7_basis() -> [Octonion; 7] {
    let h = Scalar::half();
    let hw = &h * &Scalar::omega();
    let z = Scalar::zero;
    [
        oct([z(), -&Scalar::omega(), z(), z()], [z(), z(), z(), z()]),
        oct([z(), z(), h.clone(), -&hw], [z(), z(), z(), z()]),
        oct([z(), z(), z(), z()], [h.clone(), -&hw, z(), z()]),
        oct([z(), z(), z(), z()], [z(), z(), -&h, -&hw]),
        oct([z(), z(), -&h, -&hw], [z(), z(), z(), z()]),
        oct([z(), z(), z(), z()], [-&h, -&hw, z(), z()]),
        oct([z(), z(), z(), z()], [z(), z(), h.clone(), -&hw]),
    ]
}

/// `ε₁ = ½((1,0) − ω(i,0))` and `ε₂ = ½((1,0) + ω(i,0))`, with `u₀ = ε₁ − ε₂`.
pub fn epsilons() -> (Octonion, Octonion) {
    let h = Scalar::half();
    let hw = &h * &Scalar::omega();
    let z = Scalar::zero;
    (
        oct([h.clone(), -&hw, z(), z()], [z(), z(), z(), z()]),
        oct([h, hw, z(), z()], [z(), z(), z(), z()]),
    )
}

struct G2Data {
    basis: [Octonion; 7],
    // pair coordinates 1..7 of the basis vectors, as columns
    p_inv: Matrix,
    der_basis: Vec<Derivation>,
    weights: Vec<[Scalar; 2]>,
}

fn data() -> &'static G2Data {
    static D: OnceLock<G2Data> = OnceLock::new();
    D.get_or_init(|| {
        let basis = v7_basis();
        let mut p = Matrix::zeros(7, 7);
        for (j, b) in basis.iter().enumerate() {
            assert!(b.trace().is_zero());
            for i in 0..7 {
                p[(i, j)] = b.0[i + 1].clone();
            }
        }
        let p_inv = p.inverse().expect("V7 basis is independent");
        let mut d = G2Data {
            basis,
            p_inv,
            der_basis: Vec::new(),
            weights: Vec::new(),
        };
        let mut ech = EchelonBasis::new();
        for a in 1..8 {
            for b in a + 1..8 {
                let m = derivation_with(&d, &Octonion::unit(a), &Octonion::unit(b));
                if ech.insert(&m.flat()) {
                    d.der_basis.push(m);
                }
            }
        }
        // Cartan subalgebra: derivations diagonal in the V7 basis
        let mut rows = Vec::new();
        for i in 0..7 {
            for j in 0..7 {
                if i != j {
                    rows.push(d.der_basis.iter().map(|m| m.0[(i, j)].clone()).collect());
                }
            }
        }
        let ker = Matrix::from_rows(rows).kernel();
        assert_eq!(ker.len(), 2, "the diagonal derivations form a Cartan subalgebra");
        let cartan: Vec<Derivation> = ker.iter().map(|c| combine(&d.der_basis, c)).collect();
        d.weights = (0..7)
            .map(|s| [cartan[0].0[(s, s)].clone(), cartan[1].0[(s, s)].clone()])
            .collect();
        d
    })
}

fn combine(basis: &[Derivation], c: &[Scalar]) -> Derivation {
    let mut m = Matrix::zeros(7, 7);
    for (d, x) in basis.iter().zip(c) {
        if x.is_zero() {
            continue;
        }
        for i in 0..7 {
            for j in 0..7 {
                let t = &d.0[(i, j)] * x;
                m[(i, j)] += &t;
            }
        }
    }
    Derivation(m)
}

/// Coordinates of a trace-zero octonion on the V₇ basis.
pub fn v7_coords(o: &Octonion) -> Result<[Scalar; 7]> {
    if !o.trace().is_zero() {
        return Err(Error::InvalidInput("octonion is not in V7 (nonzero trace)".into()));
    }
    let v = data().p_inv.mul_vec(&o.0[1..]);
    Ok(std::array::from_fn(|i| v[i].clone()))
}

pub fn v7_from_coords(c: &[Scalar; 7]) -> Octonion {
    let mut acc = Octonion::zero();
    for (b, x) in data().basis.iter().zip(c) {
        if !x.is_zero() {
            acc = &acc + &b.scale(x);
        }
    }
    acc
}

/// A derivation of Θ restricted to V₇, as a 7×7 matrix on the V₇ basis
/// (column j is the image of basis vector j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation(pub Matrix);

impl Derivation {
    pub fn apply(&self, o: &Octonion) -> Octonion {
        let c = v7_coords(&o.trace_zero_part()).expect("trace zero");
        let v = self.0.mul_vec(&c);
        v7_from_coords(&std::array::from_fn(|i| v[i].clone()))
    }

    pub fn flat(&self) -> Vec<Scalar> {
        (0..7).flat_map(|i| (0..7).map(move |j| (i, j))).map(|(i, j)| self.0[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.flat().iter().all(Scalar::is_zero)
    }

    /// Checks `D(xy) = D(x)y + xD(y)` on all pairs of V₇ basis vectors.
    pub fn is_derivation(&self) -> bool {
        let b = &data().basis;
        let ext = |o: &Octonion| self.apply(o);
        b.iter().all(|x| {
            b.iter().all(|y| {
                let xy = x * y;
                // D kills the real part
                ext(&xy) == &(&ext(x) * y) + &(x * &ext(y))
            })
        })
    }
}

fn derivation_with(d: &G2Data, x: &Octonion, y: &Octonion) -> Derivation {
    let dz = |z: &Octonion| {
        let lxly = &(x * &(y * z)) - &(y * &(x * z));
        let lxry = &(x * &(z * y)) - &(&(x * z) * y);
        let rxry = &(&(z * y) * x) - &(&(z * x) * y);
        &(&lxly + &lxry) + &rxry
    };
    let mut m = Matrix::zeros(7, 7);
    for (j, b) in d.basis.iter().enumerate() {
        let img = dz(b);
        assert!(img.trace().is_zero(), "derivations preserve V7");
        let c = d.p_inv.mul_vec(&img.0[1..]);
        for (i, v) in c.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Derivation(m)
}

/// `D_{x,y} = [L_x, L_y] + [L_x, R_y] + [R_x, R_y]` restricted to V₇.
pub fn derivation(x: &Octonion, y: &Octonion) -> Derivation {
    derivation_with(data(), x, y)
}

/// A basis of Der(Θ) ⊂ End(V₇) built from pairs of imaginary units.
pub fn derivation_basis() -> &'static [Derivation] {
    &data().der_basis
}

/// The weight of a V₇ basis vector for the diagonal Cartan subalgebra.
pub fn weight(s: usize) -> [Scalar; 2] {
    data().weights[s].clone()
}

/// The root vector for `α` (a weight difference), normalized so its first nonzero
/// entry is 1, or `None` if `α` is not a root.
pub fn root_vector(alpha: &[Scalar; 2]) -> Option<Derivation> {
    let d = data();
    let mut rows = Vec::new();
    for i in 0..7 {
        for j in 0..7 {
            let diff = [&d.weights[i][0] - &d.weights[j][0], &d.weights[i][1] - &d.weights[j][1]];
            if diff != *alpha {
                rows.push(d.der_basis.iter().map(|m| m.0[(i, j)].clone()).collect());
            }
        }
    }
    let ker = Matrix::from_rows(rows).kernel();
    if ker.len() != 1 {
        return None;
    }
    let m = combine(&d.der_basis, &ker[0]);
    let lead = m.flat().into_iter().find(|x| !x.is_zero())?;
    let inv = lead.inv()?;
    Some(combine(&[m], &[inv]))
}

/// Raising and lowering operators for the simple roots of a Borel subalgebra.
#[derive(Clone, Debug)]
pub struct Borel {
    pub raising: [Derivation; 2],
    pub lowering: [Derivation; 2],
}

/// The Borel subalgebra for which `top` spans the highest weight line of V₇ and
/// `top ∧ second` that of ∧²V₇, with `α₁ = wt(top) − wt(second)` short and
/// `α₂ = 2wt(second) − wt(top)` long.
pub fn borel_for(top: usize, second: usize) -> Result<Borel> {
    let a = weight(top);
    let b = weight(second);
    let alpha1 = [&a[0] - &b[0], &a[1] - &b[1]];
    let alpha2 = [&(&b[0] + &b[0]) - &a[0], &(&b[1] + &b[1]) - &a[1]];
    let neg = |x: &[Scalar; 2]| [-&x[0], -&x[1]];
    let get = |x: &[Scalar; 2]| {
        root_vector(x).ok_or_else(|| {
            Error::InvalidInput(format!(
                "({}, {}) does not determine a Borel subalgebra",
                V7_NAMES[top], V7_NAMES[second]
            ))
        })
    };
    Ok(Borel {
        raising: [get(&alpha1)?, get(&alpha2)?],
        lowering: [get(&neg(&alpha1))?, get(&neg(&alpha2))?],
    })
}

/// The Borel for which `e₁ ⊗ … ⊗ (e₁∧e₃*)…` is highest.
pub fn standard_borel() -> &'static Borel {
    static B: OnceLock<Borel> = OnceLock::new();
    B.get_or_init(|| borel_for(E1, E3S).expect("standard Borel"))
}

/// The Borel for which the null pair `e₂, e₃*` is highest.
pub fn null_pair_borel() -> &'static Borel {
    static B: OnceLock<Borel> = OnceLock::new();
    B.get_or_init(|| borel_for(E2, E3S).expect("null-pair Borel"))
}

/// Number of polynomial symbols: 7 for V₇ and 21 for ∧²V₇.
pub const NSYM: usize = 28;

/// Exponents of the 28 symbols.
pub type Monomial = [u8; NSYM];

fn wedge_table() -> &'static [[usize; 7]; 7] {
    static T: OnceLock<[[usize; 7]; 7]> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [[usize::MAX; 7]; 7];
        let mut k = 7;
        for i in 0..7 {
            for j in i + 1..7 {
                t[i][j] = k;
                t[j][i] = k;
                k += 1;
            }
        }
        t
    })
}

/// The symbol for `v_i ∧ v_j` and the sign relating it to the canonical `i < j` order.
fn wedge_symbol(i: usize, j: usize) -> Option<(usize, bool)> {
    (i != j).then(|| (wedge_table()[i][j], i > j))
}

/// `(i, j)` with `i < j` for a wedge symbol.
pub fn wedge_indices(sym: usize) -> (usize, usize) {
    let t = wedge_table();
    for i in 0..7 {
        for j in i + 1..7 {
            if t[i][j] == sym {
                return (i, j);
            }
        }
    }
    panic!("not a wedge symbol: {sym}");
}

/// An element of Sym^{k₁}(V₇) ⊗ Sym^{k₂}(∧²V₇) ⊂ V₇^{⊗k₁} ⊗ (∧²V₇)^{⊗k₂}, stored as a
/// polynomial in the V₇ basis and the wedges `v_i ∧ v_j` (i < j).
///
/// The representations W(k₁,k₂) lie in this symmetric part, since the highest
/// weight vector is invariant under permuting equal factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G2Tensor {
    pub k1: usize,
    pub k2: usize,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl G2Tensor {
    pub fn zero(k1: usize, k2: usize) -> Self {
        G2Tensor { k1, k2, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        let mut t = G2Tensor::zero(0, 0);
        t.terms.insert([0; NSYM], Scalar::one());
        t
    }

    /// A single basis vector of V₇.
    pub fn basis_vector(s: usize) -> Self {
        let mut t = G2Tensor::zero(1, 0);
        let mut m = [0; NSYM];
        m[s] = 1;
        t.terms.insert(m, Scalar::one());
        t
    }

    /// A general vector of V₇ from its coordinates.
    pub fn vector(c: &[Scalar; 7]) -> Self {
        let mut t = G2Tensor::zero(1, 0);
        for (s, x) in c.iter().enumerate() {
            if !x.is_zero() {
                let mut m = [0; NSYM];
                m[s] = 1;
                t.terms.insert(m, x.clone());
            }
        }
        t
    }

    /// `a ∧ b` for vectors given by V₇ coordinates.
    pub fn wedge(a: &[Scalar; 7], b: &[Scalar; 7]) -> Self {
        let mut t = G2Tensor::zero(0, 1);
        for i in 0..7 {
            for j in i + 1..7 {
                let c = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
                if !c.is_zero() {
                    let mut m = [0; NSYM];
                    m[wedge_table()[i][j]] = 1;
                    t.terms.insert(m, c);
                }
            }
        }
        t
    }

    pub fn basis_wedge(i: usize, j: usize) -> Self {
        let unit = |s: usize| std::array::from_fn(|k| if k == s { Scalar::one() } else { Scalar::zero() });
        G2Tensor::wedge(&unit(i), &unit(j))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Symmetrized tensor product.
    pub fn mul(&self, o: &G2Tensor) -> Self {
        let mut out = G2Tensor::zero(self.k1 + o.k1, self.k2 + o.k2);
        for (m, a) in &self.terms {
            for (n, b) in &o.terms {
                let mn: Monomial = std::array::from_fn(|i| m[i] + n[i]);
                add_term(&mut out.terms, mn, &(a * b));
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = G2Tensor::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn add(&self, o: &G2Tensor) -> Result<Self> {
        if (self.k1, self.k2) != (o.k1, o.k2) {
            return Err(Error::InvalidInput("adding G2 tensors of different degrees".into()));
        }
        let mut out = self.clone();
        for (m, x) in &o.terms {
            add_term(&mut out.terms, *m, x);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = G2Tensor::zero(self.k1, self.k2);
        if !s.is_zero() {
            out.terms = self.terms.iter().map(|(m, x)| (*m, x * s)).collect();
        }
        out
    }

    /// Action of a Lie algebra element, extended to tensors by the Leibniz rule.
    pub fn act(&self, d: &Derivation) -> Self {
        let m = &d.0;
        // image of each symbol as a list of (symbol, coefficient)
        let mut images: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(NSYM);
        for j in 0..7 {
            images.push((0..7).filter(|&i| !m[(i, j)].is_zero()).map(|i| (i, m[(i, j)].clone())).collect());
        }
        for sym in 7..NSYM {
            let (j, k) = wedge_indices(sym);
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            let mut push = |a: usize, b: usize, c: &Scalar| {
                if let Some((s, neg)) = wedge_symbol(a, b) {
                    let e = acc.entry(s).or_insert_with(Scalar::zero);
                    if neg {
                        *e -= c;
                    } else {
                        *e += c;
                    }
                }
            };
            for i in 0..7 {
                if !m[(i, j)].is_zero() {
                    push(i, k, &m[(i, j)]);
                }
                if !m[(i, k)].is_zero() {
                    push(j, i, &m[(i, k)]);
                }
            }
            images.push(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        }
        let mut out = G2Tensor::zero(self.k1, self.k2);
        for (mono, x) in &self.terms {
            for s in 0..NSYM {
                let e = mono[s];
                if e == 0 {
                    continue;
                }
                let f = x * &Scalar::from_int(e as i64);
                for (t, c) in &images[s] {
                    let mut n = *mono;
                    n[s] -= 1;
                    n[*t] += 1;
                    add_term(&mut out.terms, n, &(&f * c));
                }
            }
        }
        out
    }

    /// The factor lists `(vectors, wedges)` of a monomial.
    pub fn factors(m: &Monomial) -> (Vec<usize>, Vec<(usize, usize)>) {
        let mut v = Vec::new();
        let mut w = Vec::new();
        for s in 0..NSYM {
            for _ in 0..m[s] {
                if s < 7 {
                    v.push(s);
                } else {
                    w.push(wedge_indices(s));
                }
            }
        }
        (v, w)
    }
}

fn add_term<K: Ord>(terms: &mut BTreeMap<K, Scalar>, k: K, x: &Scalar) {
    if x.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(k) {
        Entry::Vacant(e) => {
            e.insert(x.clone());
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += x;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TensorTermJson {
    coeff: Scalar,
    v: Vec<usize>,
    wedge: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    k1: usize,
    k2: usize,
    terms: Vec<TensorTermJson>,
}

impl Serialize for G2Tensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            k1: self.k1,
            k2: self.k2,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let (v, w) = G2Tensor::factors(m);
                    TensorTermJson {
                        coeff: c.clone(),
                        v,
                        wedge: w.into_iter().map(|(i, j)| [i, j]).collect(),
                    }
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for G2Tensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = TensorJson::deserialize(d)?;
        let mut out = G2Tensor::zero(j.k1, j.k2);
        for t in j.terms {
            if t.v.len() != j.k1 || t.wedge.len() != j.k2 {
                return Err(D::Error::custom("tensor term has the wrong degrees"));
            }
            let mut m = [0u8; NSYM];
            let mut c = t.coeff;
            for s in t.v {
                if s >= 7 {
                    return Err(D::Error::custom("V7 index out of range"));
                }
                m[s] += 1;
            }
            for [a, b] in t.wedge {
                if a >= 7 || b >= 7 {
                    return Err(D::Error::custom("V7 index out of range"));
                }
                let Some((s, neg)) = wedge_symbol(a, b) else {
                    c = Scalar::zero();
                    continue;
                };
                if neg {
                    c = -c;
                }
                m[s] += 1;
            }
            add_term(&mut out.terms, m, &c);
        }
        Ok(out)
    }
}

/// `v(k₁,k₂) = e₁^{⊗k₁} ⊗ (e₁∧e₃*)^{⊗k₂}`.
pub fn highest_weight_vector(k1: usize, k2: usize) -> G2Tensor {
    G2Tensor::basis_vector(E1).pow(k1).mul(&G2Tensor::basis_wedge(E1, E3S).pow(k2))
}

/// `u^{⊗k₁} ⊗ (u∧v)^{⊗k₂}` for the null pair `u = e₂`, `v = e₃*`.
pub fn null_pair_beta(k1: usize, k2: usize) -> G2Tensor {
    let b = v7_basis();
    let (u, v) = (&b[E2], &b[E3S]);
    for (p, q) in [(u, u), (u, v), (v, u), (v, v)] {
        assert!((p * q).is_zero(), "u, v must multiply to zero");
    }
    G2Tensor::basis_vector(E2).pow(k1).mul(&G2Tensor::basis_wedge(E2, E3S).pow(k2))
}

/// Default word-length bound for spanning sets.
pub fn default_bound(k1: usize, k2: usize) -> usize {
    6 * (k1 + 2 * k2) + 1
}

/// Linearly independent vectors spanning the g₂-module generated by `v(k₁,k₂)`.
#[derive(Clone, Debug)]
pub struct SpanningSet {
    pub vectors: Vec<G2Tensor>,
    pub dimension: usize,
    /// Whether the search closed up before reaching the bound.
    pub saturated: bool,
}

/// Applies words of length ≤ `bound` in the lowering operators y₁, y₂ to
/// `v(k₁,k₂)` and keeps the independent results.
pub fn spanning_set(k1: usize, k2: usize, bound: usize) -> Result<SpanningSet> {
    if bound == 0 {
        return Err(Error::InvalidInput("spanning_set bound must be positive".into()));
    }
    let borel = standard_borel();
    let v = highest_weight_vector(k1, k2);
    let mut ech = SparseEchelon::new();
    ech.insert(&v.terms);
    let mut vectors = vec![v.clone()];
    let mut frontier = vec![v];
    let mut saturated = false;
    for _ in 0..bound {
        let mut next = Vec::new();
        for t in &frontier {
            for y in &borel.lowering {
                let u = t.act(y);
                if !u.is_zero() && ech.insert(&u.terms) {
                    vectors.push(u.clone());
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            saturated = true;
            break;
        }
        frontier = next;
    }
    Ok(SpanningSet { dimension: vectors.len(), vectors, saturated })
}

/// `dim W(k₁,k₂)` by the Weyl dimension formula.
pub fn weyl_dimension(k1: u64, k2: u64) -> u64 {
    (k1 + 1) * (k2 + 1) * (k1 + k2 + 2) * (k1 + 2 * k2 + 3) * (k1 + 3 * k2 + 4) * (2 * k1 + 3 * k2 + 5) / 120
}

/// A polynomial in `w₁, w₂, w₃, z₂₃, z₃₁, z₁₂`, keyed by exponent vectors in that order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPolynomial(pub BTreeMap<[u32; 6], Scalar>);

pub const BIPOLY_VARS: [&str; 6] = ["w1", "w2", "w3", "z23", "z31", "z12"];

impl BiPolynomial {
    pub fn zero() -> Self {
        BiPolynomial::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = BiPolynomial::zero();
        add_term(&mut p.0, [0; 6], &c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 6];
        e[i] = 1;
        let mut p = BiPolynomial::zero();
        p.0.insert(e, Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The bidegree `(deg_w, deg_z)` if the polynomial is bihomogeneous and nonzero.
    pub fn degrees(&self) -> Option<(u32, u32)> {
        let mut it = self.0.keys().map(|e| (e[0] + e[1] + e[2], e[3] + e[4] + e[5]));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn add_assign(&mut self, o: &BiPolynomial) {
        for (e, x) in &o.0 {
            add_term(&mut self.0, *e, x);
        }
    }

    pub fn add_scaled(&mut self, o: &BiPolynomial, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (e, x) in &o.0 {
            add_term(&mut self.0, *e, &(x * s));
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut p = BiPolynomial::zero();
        p.add_scaled(self, s);
        p
    }

    pub fn mul(&self, o: &BiPolynomial) -> Self {
        let mut p = BiPolynomial::zero();
        for (e, x) in &self.0 {
            for (f, y) in &o.0 {
                let ef: [u32; 6] = std::array::from_fn(|i| e[i] + f[i]);
                add_term(&mut p.0, ef, &(x * y));
            }
        }
        p
    }

    /// `Σᵢ ∂_{wᵢ} ∂_{zᵢ'}` with `w₁ ↔ z₂₃`, `w₂ ↔ z₃₁`, `w₃ ↔ z₁₂`.
    ///
    /// When either degree is 0 the target space is zero and so is the result.
    pub fn contract(&self) -> BiPolynomial {
        let mut p = BiPolynomial::zero();
        for (e, x) in &self.0 {
            for i in 0..3 {
                let (a, b) = (e[i], e[i + 3]);
                if a == 0 || b == 0 {
                    continue;
                }
                let mut f = *e;
                f[i] -= 1;
                f[i + 3] -= 1;
                add_term(&mut p.0, f, &(x * &Scalar::from_int((a * b) as i64)));
            }
        }
        p
    }
}

impl fmt::Display for BiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.0 {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, k) in BIPOLY_VARS.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

fn key_string(e: &[u32; 6]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn parse_key(s: &str) -> Option<[u32; 6]> {
    let v: Vec<u32> = s.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
    v.try_into().ok()
}

impl Serialize for BiPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (e, c) in &self.0 {
            m.serialize_entry(&key_string(e), c)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for BiPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: BTreeMap<String, Scalar> = BTreeMap::deserialize(d)?;
        let mut p = BiPolynomial::zero();
        for (k, v) in raw {
            let e = parse_key(&k).ok_or_else(|| D::Error::custom(format!("bad monomial key {k:?}")))?;
            add_term(&mut p.0, e, &v);
        }
        Ok(p)
    }
}

/// All exponent vectors of bidegree `(k₁, k₂)`, sorted.
pub fn bidegree_monomials(k1: u32, k2: u32) -> Vec<[u32; 6]> {
    let mut out = Vec::new();
    for a in 0..=k1 {
        for b in 0..=k1 - a {
            for c in 0..=k2 {
                for d in 0..=k2 - c {
                    out.push([a, b, k1 - a - b, c, d, k2 - c - d]);
                }
            }
        }
    }
    out.sort();
    out
}

/// Points `(1, a, b; 1, c, d)` with `a + b ≤ k₁`, `c + d ≤ k₂`. Unisolvent for
/// bihomogeneous polynomials of bidegree `(k₁, k₂)`.
pub fn interpolation_points(k1: u32, k2: u32) -> Vec<[i64; 6]> {
    let mut out = Vec::new();
    for a in 0..=k1 as i64 {
        for b in 0..=k1 as i64 - a {
            for c in 0..=k2 as i64 {
                for d in 0..=k2 as i64 - c {
                    out.push([1, a, b, 1, c, d]);
                }
            }
        }
    }
    out
}

fn monomial_at(e: &[u32; 6], pt: &[i64; 6]) -> Scalar {
    let mut v = BigInt::one();
    for (x, k) in pt.iter().zip(e) {
        v *= BigInt::from(*x).pow(*k);
    }
    Scalar::from_bigint(v)
}

impl BiPolynomial {
    pub fn eval(&self, pt: &[i64; 6]) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.0 {
            acc += &(c * &monomial_at(e, pt));
        }
        acc
    }

    /// The polynomial of bidegree `(k₁, k₂)` with the given values at
    /// [`interpolation_points`].
    pub fn interpolate(k1: u32, k2: u32, values: &[Scalar]) -> BiPolynomial {
        let monos = bidegree_monomials(k1, k2);
        assert_eq!(values.len(), monos.len());
        let coeffs = interpolation_inverse(k1, k2).mul_vec(values);
        let mut p = BiPolynomial::zero();
        for (e, c) in monos.into_iter().zip(coeffs) {
            add_term(&mut p.0, e, &c);
        }
        p
    }
}

fn interpolation_inverse(k1: u32, k2: u32) -> Matrix {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Matrix>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().expect("interpolation cache").get(&(k1, k2)) {
        return m.clone();
    }
    let monos = bidegree_monomials(k1, k2);
    let rows = interpolation_points(k1, k2)
        .iter()
        .map(|pt| monos.iter().map(|e| monomial_at(e, pt)).collect())
        .collect();
    let inv = Matrix::from_rows(rows).inverse().expect("unisolvent point set");
    cache.lock().expect("interpolation cache").insert((k1, k2), inv.clone());
    inv
}

/// Linear forms attached to T: for each tensor symbol, the image under `P(T)`.
///
/// For a V₇ symbol b: `Σᵢ (xᵢ, b) wᵢ`. For a wedge `c∧d`:
/// `Σ ((xᵢ,c)(x_{i'},d) − (xᵢ,d)(x_{i'},c)) z_{ii'}` over `(i,i') = (2,3), (3,1), (1,2)`.
pub(crate) fn symbol_forms(t: &JordanElement) -> Vec<BiPolynomial> {
    let b = &data().basis;
    let x: Vec<Octonion> = t.a.iter().map(Octonion::trace_zero_part).collect();
    // pr[i][s] = (x_i, b_s)
    let pr: Vec<Vec<Scalar>> = x.iter().map(|xi| b.iter().map(|bs| xi.bilinear(bs)).collect()).collect();
    let mut forms = Vec::with_capacity(NSYM);
    for s in 0..7 {
        let mut p = BiPolynomial::zero();
        for (i, row) in pr.iter().enumerate() {
            add_term(&mut p.0, unit_exp(i), &row[s]);
        }
        forms.push(p);
    }
    for sym in 7..NSYM {
        let (c, d) = wedge_indices(sym);
        let mut p = BiPolynomial::zero();
        for (var, (i, ip)) in [(3, (1, 2)), (4, (2, 0)), (5, (0, 1))] {
            let v = &(&pr[i][c] * &pr[ip][d]) - &(&pr[i][d] * &pr[ip][c]);
            add_term(&mut p.0, unit_exp(var), &v);
        }
        forms.push(p);
    }
    forms
}

fn unit_exp(i: usize) -> [u32; 6] {
    let mut e = [0; 6];
    e[i] = 1;
    e
}

/// Evaluates tensors against a fixed T, caching powers of the symbol forms.
pub struct PairingEvaluator {
    forms: Vec<BiPolynomial>,
    powers: BTreeMap<(usize, u8), BiPolynomial>,
}

impl PairingEvaluator {
    pub fn new(t: &JordanElement) -> Self {
        PairingEvaluator {
            forms: symbol_forms(t),
            powers: BTreeMap::new(),
        }
    }

    fn power(&mut self, s: usize, e: u8) -> BiPolynomial {
        if let Some(p) = self.powers.get(&(s, e)) {
            return p.clone();
        }
        let p = if e == 1 {
            self.forms[s].clone()
        } else {
            self.power(s, e - 1).mul(&self.forms[s])
        };
        self.powers.insert((s, e), p.clone());
        p
    }

    /// The image of a single monomial.
    pub fn monomial(&mut self, m: &Monomial) -> BiPolynomial {
        let mut acc = BiPolynomial::constant(Scalar::one());
        for s in 0..NSYM {
            if m[s] > 0 {
                acc = acc.mul(&self.power(s, m[s]));
                if acc.is_zero() {
                    break;
                }
            }
        }
        acc
    }

    pub fn pair(&mut self, beta: &G2Tensor) -> BiPolynomial {
        let mut out = BiPolynomial::zero();
        for (m, c) in &beta.terms {
            let v = self.monomial(m);
            out.add_scaled(&v, c);
        }
        out
    }
}

/// `{P_{k₁,k₂}(T), β}` as a polynomial of bidegree `(k₁, k₂)`.
pub fn pluriharmonic_pair(t: &JordanElement, beta: &G2Tensor) -> BiPolynomial {
    PairingEvaluator::new(t).pair(beta)
}

/// The contraction, required to vanish on the highest weight submodule.
pub fn contract_check(p: &BiPolynomial) -> BiPolynomial {
    p.contract()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_relations() {
        let b = v7_basis();
        let (e1, e2) = epsilons();
        assert_eq!(&e1 - &e2, b[U0]);
        assert_eq!(&e1 + &e2, Octonion::one());
        for v in &b {
            assert!(v.norm().is_zero() || v == &b[U0]);
        }
        assert_eq!(b[U0].norm(), Scalar::from_int(-1));
        // dual pairs
        for (i, j) in [(E1, E1S), (E2, E2S), (E3, E3S)] {
            assert!(!b[i].bilinear(&b[j]).is_zero());
        }
    }

    #[test]
    fn derivation_algebra() {
        assert_eq!(derivation_basis().len(), 14);
        for d in derivation_basis() {
            assert!(d.is_derivation());
        }
        let x = Octonion::from_ints([0, 1, 2, 0, -1, 0, 3, 1]);
        assert!(derivation(&x, &x).is_zero());
        assert!(derivation(&Octonion::one(), &x).is_zero());
    }

    #[test]
    fn borels_exist() {
        let s = standard_borel();
        let e1 = G2Tensor::basis_vector(E1);
        for x in &s.raising {
            assert!(e1.act(x).is_zero());
            assert!(G2Tensor::basis_wedge(E1, E3S).act(x).is_zero());
        }
        let n = null_pair_borel();
        for x in &n.raising {
            assert!(null_pair_beta(2, 4).act(x).is_zero());
        }
    }

    #[test]
    fn small_spanning_sets() {
        let s = spanning_set(1, 0, 7).unwrap();
        assert_eq!(s.dimension, 7);
        let s = spanning_set(0, 1, default_bound(0, 1)).unwrap();
        assert_eq!(s.dimension, 14);
        assert!(s.saturated);
        let s = spanning_set(0, 0, 1).unwrap();
        assert_eq!(s.vectors, vec![G2Tensor::one()]);
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(weyl_dimension(1, 0), 7);
        assert_eq!(weyl_dimension(0, 1), 14);
        assert_eq!(weyl_dimension(1, 1), 64);
        assert_eq!(weyl_dimension(0, 4), 748);
    }

    #[test]
    fn contraction_normalization() {
        let p = BiPolynomial::var(0).mul(&BiPolynomial::var(3));
        assert_eq!(p.contract(), BiPolynomial::constant(Scalar::one()));
        let q = BiPolynomial::var(0).mul(&BiPolynomial::var(4));
        assert!(q.contract().is_zero());
    }

    #[test]
    fn single_pairing_term() {
        let b = v7_basis();
        let s = b[E2S].bilinear(&b[E2]).inv().unwrap();
        let mut t = JordanElement::zero();
        t.a[0] = b[E2S].scale(&s);
        let p = pluriharmonic_pair(&t, &G2Tensor::basis_vector(E2));
        assert_eq!(p, BiPolynomial::var(0));
        assert!(pluriharmonic_pair(&JordanElement::identity(), &null_pair_beta(1, 1)).is_zero());
        assert_eq!(
            pluriharmonic_pair(&JordanElement::identity(), &G2Tensor::one()),
            BiPolynomial::constant(Scalar::one())
        );
    }

    #[test]
    fn interpolation_round_trip() {
        for (k1, k2) in [(0, 0), (1, 0), (0, 2), (2, 1)] {
            let monos = bidegree_monomials(k1, k2);
            assert_eq!(monos.len() as u32, (k1 + 1) * (k1 + 2) / 2 * (k2 + 1) * (k2 + 2) / 2);
            let mut p = BiPolynomial::zero();
            for (i, e) in monos.iter().enumerate() {
                p.0.insert(*e, Scalar::gaussian(i as i64 - 3, 1));
            }
            let vals: Vec<Scalar> = interpolation_points(k1, k2).iter().map(|pt| p.eval(pt)).collect();
            assert_eq!(BiPolynomial::interpolate(k1, k2, &vals), p);
        }
    }

    #[test]
    fn json_round_trips() {
        let t = highest_weight_vector(1, 2).add(&null_pair_beta(1, 2)).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<G2Tensor>(&s).unwrap(), t);
        let p = BiPolynomial::var(1).mul(&BiPolynomial::var(5)).scale(&Scalar::gaussian(1, -2));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"0,1,0,0,0,1":"1-2*w"}"#);
        assert_eq!(serde_json::from_str::<BiPolynomial>(&s).unwrap(), p);
    }
}
