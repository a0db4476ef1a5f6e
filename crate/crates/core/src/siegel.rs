//! Fourier coefficients of the lifts Θ(α) to Sp₆: fibers over half-integral T₀,
//! the weighted pluriharmonic sums, the tensor-algebra recursion P_n, and the
//! linear algebra deciding whether a coefficient table comes from a lift.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f4::phi_apply;
use crate::freudenthal::{kim_coeff, rank_one_with_diagonal_and_traces};
use crate::gauss::{common_denominator, G};
use crate::g2::{
    interpolation_points, spanning_set, symbol_forms, v7_basis, BiPolynomial, G2Tensor, Monomial,
    PairingEvaluator, NSYM,
};
use crate::jordan::{JordanElement, DIM};
use crate::linalg::Matrix;
use crate::octonion::Octonion;
use crate::scalar::Scalar;

/// A symmetric rational 3×3 matrix with integral diagonal and half-integral off-diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HalfIntegralMatrix(pub [[Scalar; 3]; 3]);

impl HalfIntegralMatrix {
    pub fn new(m: [[Scalar; 3]; 3]) -> Result<Self> {
        let bad = |what: &str| Err(Error::InvalidInput(format!("T0 {what}")));
        for i in 0..3 {
            for j in 0..3 {
                if m[i][j] != m[j][i] {
                    return bad("is not symmetric");
                }
                if !m[i][j].is_rational() {
                    return bad("must have rational entries");
                }
                let twice = &m[i][j] + &m[i][j];
                if !twice.is_integral() || (i == j && !m[i][j].is_integral()) {
                    return bad("is not half-integral");
                }
            }
        }
        Ok(HalfIntegralMatrix(m))
    }

    /// `½·m` for an integer matrix with even diagonal.
    pub fn from_twice(m: [[i64; 3]; 3]) -> Result<Self> {
        HalfIntegralMatrix::new(m.map(|r| r.map(|x| Scalar::from_frac(x, 2))))
    }

    pub fn zero() -> Self {
        HalfIntegralMatrix(Default::default())
    }

    pub fn diagonal(&self) -> Result<[i64; 3]> {
        let d = |i: usize| {
            self.0[i][i]
                .to_i64()
                .ok_or_else(|| Error::InvalidInput("T0 diagonal out of range".into()))
        };
        Ok([d(0)?, d(1)?, d(2)?])
    }

    /// Traces of the off-diagonal octonions `a1, a2, a3` of any T over T₀.
    pub fn off_traces(&self) -> Result<[i64; 3]> {
        let t = |i: usize, j: usize| {
            (&self.0[i][j] + &self.0[i][j])
                .to_i64()
                .ok_or_else(|| Error::InvalidInput("T0 entry out of range".into()))
        };
        Ok([t(1, 2)?, t(0, 2)?, t(0, 1)?])
    }

    /// All principal minors are nonnegative.
    pub fn is_psd(&self) -> bool {
        let m = &self.0;
        let nonneg = |s: &Scalar| s.re() >= &num_rational::BigRational::from_integer(0.into());
        let minor2 = |i: usize, j: usize| &(&m[i][i] * &m[j][j]) - &(&m[i][j] * &m[j][i]);
        (0..3).all(|i| nonneg(&m[i][i]))
            && nonneg(&minor2(0, 1))
            && nonneg(&minor2(0, 2))
            && nonneg(&minor2(1, 2))
            && nonneg(&crate::jordan::det3(m))
    }
}

impl<'de> Deserialize<'de> for HalfIntegralMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = <[[Scalar; 3]; 3]>::deserialize(d)?;
        HalfIntegralMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for HalfIntegralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{}, {}, {}]", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl std::str::FromStr for HalfIntegralMatrix {
    type Err = Error;
    /// Nine comma-separated entries in row-major order, or six as `a,b,c,d,e,f`
    /// for `[[a,d,e],[d,b,f],[e,f,c]]`.
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<Scalar> = s
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_>>()?;
        let m = match v.len() {
            9 => std::array::from_fn(|i| std::array::from_fn(|j| v[3 * i + j].clone())),
            6 => {
                let [a, b, c, d, e, f] = <[Scalar; 6]>::try_from(v).expect("six entries");
                [[a, d.clone(), e.clone()], [d, b, f.clone()], [e, f, c]]
            }
            n => return Err(Error::Parse(format!("T0 needs 6 or 9 entries, got {n}"))),
        };
        HalfIntegralMatrix::new(m)
    }
}

/// The demo coefficient index `½[[2,1,1],[1,2,1],[1,1,2]]`.
pub fn demo_t0() -> HalfIntegralMatrix {
    HalfIntegralMatrix::from_twice([[2, 1, 1], [1, 2, 1], [1, 1, 2]]).expect("half-integral")
}

/// All `T ∈ J_R` of rank ≤ 1 with `T ≥ 0` whose rational projection is T₀.
pub fn fiber_over_t0(t0: &HalfIntegralMatrix) -> Result<Vec<JordanElement>> {
    if !t0.is_psd() {
        return Err(Error::Precondition(format!("T0 = {t0} is not positive semidefinite")));
    }
    let c = t0.diagonal()?;
    let t = t0.off_traces()?;
    Ok(rank_one_with_diagonal_and_traces(c, Some(t)).iter().map(|x| x.to_exact()).collect())
}

/// λ = (k₁+2k₂+4, k₁+k₂+4, k₂+4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiegelWeight {
    pub lambda: [i64; 3],
}

impl SiegelWeight {
    pub fn from_k(k1: usize, k2: usize) -> Self {
        let (k1, k2) = (k1 as i64, k2 as i64);
        SiegelWeight {
            lambda: [k1 + 2 * k2 + 4, k1 + k2 + 4, k2 + 4],
        }
    }

    /// Recovers `(k₁, k₂)`, checking that re-encoding gives λ back.
    pub fn decode(&self) -> Result<(usize, usize)> {
        let [_, l2, l3] = self.lambda;
        let (k1, k2) = (l2 - l3, l3 - 4);
        if k1 < 0 || k2 < 0 || SiegelWeight::from_k(k1 as usize, k2 as usize) != *self {
            return Err(Error::InvalidInput(format!("weight {:?} is not of lift type", self.lambda)));
        }
        Ok((k1 as usize, k2 as usize))
    }
}

/// The fiber over T₀ together with the coefficients `a(T) = 240σ₃(d_T)`.
#[derive(Clone, Debug)]
pub struct SiegelFiber {
    pub t0: HalfIntegralMatrix,
    pub terms: Vec<(JordanElement, Scalar)>,
}

impl SiegelFiber {
    pub fn new(t0: &HalfIntegralMatrix) -> Result<Self> {
        let terms = fiber_over_t0(t0)?
            .into_iter()
            .map(|t| {
                let a = kim_coeff(&t)?;
                Ok((t, Scalar::from_bigint(a)))
            })
            .collect::<Result<_>>()?;
        Ok(SiegelFiber { t0: t0.clone(), terms })
    }

    /// `Σ_T a(T){P_{k₁,k₂}(T), β}`.
    pub fn fc(&self, beta: &G2Tensor) -> BiPolynomial {
        self.fc_many(std::slice::from_ref(beta)).pop().expect("one result")
    }

    /// Coefficients for several tensors, sharing the per-monomial sums.
    pub fn fc_many(&self, betas: &[G2Tensor]) -> Vec<BiPolynomial> {
        self.fc_many_points(betas).unwrap_or_else(|| self.fc_many_exact(betas))
    }

    /// Exact polynomial arithmetic throughout.
    pub fn fc_many_exact(&self, betas: &[G2Tensor]) -> Vec<BiPolynomial> {
        let monos: BTreeSet<Monomial> = betas.iter().flat_map(|b| b.terms.keys().copied()).collect();
        let mut agg: BTreeMap<Monomial, BiPolynomial> = BTreeMap::new();
        for (t, a) in &self.terms {
            let mut ev = PairingEvaluator::new(t);
            for m in &monos {
                let v = ev.monomial(m);
                if !v.is_zero() {
                    agg.entry(*m).or_default().add_scaled(&v, a);
                }
            }
        }
        betas
            .iter()
            .map(|b| {
                let mut out = BiPolynomial::zero();
                for (m, c) in &b.terms {
                    if let Some(v) = agg.get(m) {
                        out.add_scaled(v, c);
                    }
                }
                out
            })
            .collect()
    }

    /// Evaluates the symbol forms at [`interpolation_points`] in Gaussian
    /// integers, after clearing denominators, and interpolates the sums.
    /// `None` if the tensors have different bidegrees or an `i128` overflows.
    pub fn fc_many_points(&self, betas: &[G2Tensor]) -> Option<Vec<BiPolynomial>> {
        let (k1, k2) = (betas.first()?.k1, betas.first()?.k2);
        if betas.iter().any(|b| (b.k1, b.k2) != (k1, k2)) {
            return None;
        }
        let pts = interpolation_points(k1 as u32, k2 as u32);
        let np = pts.len();
        let monos: Vec<Monomial> = betas
            .iter()
            .flat_map(|b| b.terms.keys().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        let forms: Vec<Vec<BiPolynomial>> = self.terms.iter().map(|(t, _)| symbol_forms(t)).collect();
        // separate denominators for V₇ and wedge symbols
        let den = |wedge: bool| {
            common_denominator(
                forms.iter().flat_map(|fs| fs.iter().skip(if wedge { 7 } else { 0 }).take(if wedge { NSYM } else { 7 }))
                    .flat_map(|p| p.0.values()),
            )
        };
        let scale = [Scalar::from_bigint(den(false)), Scalar::from_bigint(den(true))];

        // Every monomial and all its prefixes, each node being its parent times one symbol.
        let mut nodes: BTreeMap<Monomial, usize> = BTreeMap::new();
        let mut tree: Vec<(usize, usize)> = vec![(0, 0)];
        nodes.insert([0; NSYM], 0);
        let mut targets = Vec::with_capacity(monos.len());
        for m in &monos {
            let mut cur = [0u8; NSYM];
            let mut idx = 0;
            for (sym, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    cur[sym] += 1;
                    idx = *nodes.entry(cur).or_insert_with(|| {
                        tree.push((idx, sym));
                        tree.len() - 1
                    });
                }
            }
            targets.push(idx);
        }

        let mut agg = vec![vec![G::ZERO; np]; monos.len()];
        let mut vals = vec![vec![G::ZERO; np]; NSYM];
        let mut node_vals = vec![vec![G::ZERO; np]; tree.len()];
        for ((_, a), fs) in self.terms.iter().zip(&forms) {
            let a = G::from_scalar(a)?;
            for (s, f) in fs.iter().enumerate() {
                let sc = &scale[usize::from(s >= 7)];
                for (v, pt) in vals[s].iter_mut().zip(&pts) {
                    *v = G::from_scalar(&(&f.eval(pt) * sc))?;
                }
            }
            node_vals[0].fill(a);
            for n in 1..tree.len() {
                let (parent, sym) = tree[n];
                let (lo, hi) = node_vals.split_at_mut(n);
                for ((out, x), y) in hi[0].iter_mut().zip(&lo[parent]).zip(&vals[sym]) {
                    *out = x.mul(*y)?;
                }
            }
            for (row, &n) in agg.iter_mut().zip(&targets) {
                for (slot, x) in row.iter_mut().zip(&node_vals[n]) {
                    *slot = slot.add(*x)?;
                }
            }
        }

        let dinv = (scale[0].pow(k1 as u32) * scale[1].pow(k2 as u32)).inv().expect("nonzero");
        let index: BTreeMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        betas
            .iter()
            .map(|b| {
                let dscale = Scalar::from_bigint(common_denominator(b.terms.values()));
                let mut vals = vec![G::ZERO; np];
                for (m, c) in &b.terms {
                    let c = G::from_scalar(&(c * &dscale))?;
                    for (v, x) in vals.iter_mut().zip(&agg[index[m]]) {
                        *v = v.add(c.mul(*x)?)?;
                    }
                }
                let f = &dinv / &dscale;
                let vals: Vec<Scalar> = vals.iter().map(|g| &g.to_scalar() * &f).collect();
                Some(BiPolynomial::interpolate(k1 as u32, k2 as u32, &vals))
            })
            .collect()
    }
}

/// `a_{Θ(β)}(T₀)`, without the overall normalizing constant.
pub fn siegel_fc(t0: &HalfIntegralMatrix, beta: &G2Tensor) -> Result<BiPolynomial> {
    Ok(SiegelFiber::new(t0)?.fc(beta))
}

/// An element of the tensor algebra T(J), keyed by words in the 27 pair coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorAlg(pub BTreeMap<Vec<u8>, Scalar>);

impl TensorAlg {
    pub fn constant(c: Scalar) -> Self {
        let mut t = TensorAlg::default();
        t.add_term(Vec::new(), &c);
        t
    }

    pub fn from_jordan(e: &JordanElement) -> Self {
        let mut t = TensorAlg::default();
        for (i, x) in e.coords().iter().enumerate() {
            t.add_term(vec![i as u8], x);
        }
        t
    }

    fn add_term(&mut self, k: Vec<u8>, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        let e = self.0.entry(k.clone()).or_insert_with(Scalar::zero);
        *e += x;
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, o: &TensorAlg, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (k, x) in &o.0 {
            self.add_term(k.clone(), &(x * s));
        }
    }

    /// `self ⊗ e`.
    pub fn tensor_right(&self, e: &JordanElement) -> Self {
        let c = e.coords();
        let mut t = TensorAlg::default();
        for (k, x) in &self.0 {
            for (i, y) in c.iter().enumerate() {
                if !y.is_zero() {
                    let mut w = k.clone();
                    w.push(i as u8);
                    t.add_term(w, &(x * y));
                }
            }
        }
        t
    }

    /// `{E, V₁⊗…⊗V_r} = Σ_j V₁⊗…⊗{E,V_j}⊗…⊗V_r`, zero on constants.
    pub fn bracket(&self, e: &JordanElement) -> Self {
        let images: Vec<Vec<Scalar>> = (0..DIM).map(|i| bracket(e, &JordanElement::basis(i)).coords()).collect();
        let mut t = TensorAlg::default();
        for (k, x) in &self.0 {
            for pos in 0..k.len() {
                for (i, y) in images[k[pos] as usize].iter().enumerate() {
                    if !y.is_zero() {
                        let mut w = k.clone();
                        w[pos] = i as u8;
                        t.add_term(w, &(x * y));
                    }
                }
            }
        }
        t
    }
}

/// `{E, E'} = Φ_{1,E}(E')`.
pub fn bracket(e: &JordanElement, f: &JordanElement) -> JordanElement {
    phi_apply(&JordanElement::identity(), e, f)
}

/// `P_n(E₁,…,E_n)` from `P₀ = 1` and
/// `P_{k+1} = P_k ⊗ E_{k+1} + ℓ(1,E_{k+1})P_k + ½{E_{k+1}, P_k} + ½Σ_j P_k(…,{E_{k+1},E_j},…)`.
pub fn pn_recursion(es: &[JordanElement], ell: &Scalar) -> TensorAlg {
    let Some((last, init)) = es.split_last() else {
        return TensorAlg::constant(Scalar::one());
    };
    let half = Scalar::half();
    let pk = pn_recursion(init, ell);
    let mut out = pk.tensor_right(last);
    out.add_scaled(&pk, &(ell * &last.trace()));
    out.add_scaled(&pk.bracket(last), &half);
    for j in 0..init.len() {
        let mut args = init.to_vec();
        args[j] = bracket(last, &init[j]);
        out.add_scaled(&pn_recursion(&args, ell), &half);
    }
    out
}

/// The basis of J ⊗ Q(ω): the six elements of H₃(Q), then `v_i ⊗ u_j` with the
/// octonion `u_j` of V₇ placed in off-diagonal slot i.
pub fn adapted_basis() -> Vec<JordanElement> {
    let mut b = vec![JordanElement::e(0), JordanElement::e(1), JordanElement::e(2)];
    for i in 0..3 {
        let mut x = JordanElement::zero();
        x.a[i] = Octonion::one();
        b.push(x);
    }
    for i in 0..3 {
        for u in v7_basis() {
            let mut x = JordanElement::zero();
            x.a[i] = u;
            b.push(x);
        }
    }
    b
}

type Coefficient = BTreeMap<Vec<u8>, Scalar>;

/// Checks that in `Σ_α P_n(E_{α₁},…,E_{α_n}) {E_{α₁}^∨⊗…⊗E_{α_n}^∨, β}` only the
/// leading term `E_{α₁}⊗…⊗E_{α_n}` contributes, for ℓ ∈ {0, 1, 5}.
///
/// Each monomial of β is read as the pure tensor with its V₇ factors first, in
/// canonical order; for powers such as `e₂^{k₁}(e₂∧e₃*)^{k₂}` this is exact.
pub fn leading_term_check(k1: usize, k2: usize, beta: &G2Tensor) -> Result<bool> {
    if (beta.k1, beta.k2) != (k1, k2) {
        return Err(Error::InvalidInput("β has the wrong degrees".into()));
    }
    let basis = adapted_basis();
    let n = basis.len();
    let gram = Matrix::from_rows(
        basis.iter().map(|x| basis.iter().map(|y| x.trace_pair(y)).collect()).collect(),
    );
    let ginv = gram
        .inverse()
        .ok_or_else(|| Error::Computation("adapted basis is degenerate".into()))?;
    // V7 parts of the dual basis: ys[α][i] = Im a_i(E_α^∨)
    let ys: Vec<[Octonion; 3]> = (0..n)
        .map(|a| {
            let mut d = JordanElement::zero();
            for (g, e) in basis.iter().enumerate() {
                d = &d + &e.scale(&ginv[(g, a)]);
            }
            std::array::from_fn(|i| d.a[i].trace_zero_part())
        })
        .collect();
    let v7 = v7_basis();

    // contributing index tuples with their V3^{⊗n} coefficients
    let mut tuples: Vec<(Vec<usize>, Coefficient)> = Vec::new();
    for (mono, c) in &beta.terms {
        let (vs, ws) = G2Tensor::factors(mono);
        let mut partial: Vec<(Vec<usize>, Coefficient)> = vec![(Vec::new(), [(Vec::new(), c.clone())].into())];
        for s in vs {
            let mut next = Vec::new();
            for a in 0..n {
                let vals: Vec<Scalar> = (0..3).map(|i| ys[a][i].bilinear(&v7[s])).collect();
                if vals.iter().all(Scalar::is_zero) {
                    continue;
                }
                for (idx, coef) in &partial {
                    let mut ni = idx.clone();
                    ni.push(a);
                    next.push((ni, extend(coef, &vals.iter().enumerate().map(|(i, v)| (vec![i as u8], v.clone())).collect())));
                }
            }
            partial = next;
        }
        for (p, q) in ws {
            let mut next = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    let mut local: Coefficient = BTreeMap::new();
                    for i in 0..3 {
                        for j in 0..3 {
                            let v = &(&ys[a][i].bilinear(&v7[p]) * &ys[b][j].bilinear(&v7[q]))
                                - &(&ys[a][i].bilinear(&v7[q]) * &ys[b][j].bilinear(&v7[p]));
                            if !v.is_zero() {
                                local.insert(vec![i as u8, j as u8], v);
                            }
                        }
                    }
                    if local.is_empty() {
                        continue;
                    }
                    for (idx, coef) in &partial {
                        let mut ni = idx.clone();
                        ni.push(a);
                        ni.push(b);
                        next.push((ni, extend(coef, &local)));
                    }
                }
            }
            partial = next;
        }
        tuples.extend(partial);
    }

    let combine = |ell: Option<&Scalar>| {
        let mut acc: BTreeMap<(Vec<u8>, Vec<u8>), Scalar> = BTreeMap::new();
        for (idx, coef) in &tuples {
            let es: Vec<JordanElement> = idx.iter().map(|&a| basis[a].clone()).collect();
            let p = match ell {
                Some(l) => pn_recursion(&es, l),
                None => {
                    let mut t = TensorAlg::constant(Scalar::one());
                    for e in &es {
                        t = t.tensor_right(e);
                    }
                    t
                }
            };
            for (w, x) in &p.0 {
                for (v, y) in coef {
                    let e = acc.entry((w.clone(), v.clone())).or_insert_with(Scalar::zero);
                    *e += &(x * y);
                }
            }
        }
        acc.retain(|_, x| !x.is_zero());
        acc
    };
    let leading = combine(None);
    for ell in [0, 1, 5] {
        if combine(Some(&Scalar::from_int(ell))) != leading {
            return Ok(false);
        }
    }
    Ok(true)
}

fn extend(a: &Coefficient, b: &Coefficient) -> Coefficient {
    let mut out = BTreeMap::new();
    for (k, x) in a {
        for (l, y) in b {
            let mut kl = k.clone();
            kl.extend(l);
            out.insert(kl, x * y);
        }
    }
    out
}

/// Outcome of lift detection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LiftDetection {
    /// The table equals `Σ c_j·a_{Θ(β_j)}` over the spanning set; zero coefficients omitted.
    Lift {
        combination: Vec<(usize, Scalar)>,
        spanning_dimension: usize,
    },
    /// The equations up to and including `failing_t0` are already inconsistent.
    NotALift { failing_t0: HalfIntegralMatrix },
}

/// Solves for a combination of spanning-set lifts matching the table on its T₀'s.
pub fn detect_lift(
    weight: &SiegelWeight,
    table: &[(HalfIntegralMatrix, BiPolynomial)],
    bound: usize,
) -> Result<LiftDetection> {
    let (k1, k2) = weight.decode()?;
    if k2 == 0 {
        return Err(Error::InvalidInput("detect_lift needs k2 > 0".into()));
    }
    if table.is_empty() {
        return Err(Error::InvalidInput("empty coefficient table".into()));
    }
    let span = spanning_set(k1, k2, bound)?;
    let ncols = span.vectors.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    let mut solution = vec![Scalar::zero(); ncols];
    for (t0, target) in table {
        let cols = SiegelFiber::new(t0)?.fc_many(&span.vectors);
        let keys: BTreeSet<[u32; 6]> = cols
            .iter()
            .flat_map(|c| c.0.keys().copied())
            .chain(target.0.keys().copied())
            .collect();
        for k in keys {
            rows.push(cols.iter().map(|c| c.0.get(&k).cloned().unwrap_or_default()).collect());
            rhs.push(target.0.get(&k).cloned().unwrap_or_default());
        }
        if rows.is_empty() {
            continue;
        }
        match Matrix::from_rows(rows.clone()).solve(&rhs) {
            Some(x) => solution = x,
            None => return Ok(LiftDetection::NotALift { failing_t0: t0.clone() }),
        }
    }
    Ok(LiftDetection::Lift {
        combination: solution
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect(),
        spanning_dimension: span.dimension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::{contract_check, null_pair_beta};

    #[test]
    fn half_integral_validation() {
        assert!(HalfIntegralMatrix::from_twice([[1, 0, 0], [0, 0, 0], [0, 0, 0]]).is_err());
        assert!(HalfIntegralMatrix::from_twice([[2, 1, 0], [0, 2, 0], [0, 0, 0]]).is_err());
        assert!(demo_t0().is_psd());
        assert!(!HalfIntegralMatrix::from_twice([[2, 3, 0], [3, 2, 0], [0, 0, 0]]).unwrap().is_psd());
        let p: HalfIntegralMatrix = "1,1,1,1/2,1/2,1/2".parse().unwrap();
        assert_eq!(p, demo_t0());
    }

    #[test]
    fn trivial_fibers() {
        assert_eq!(fiber_over_t0(&HalfIntegralMatrix::zero()).unwrap(), vec![JordanElement::zero()]);
        let d = HalfIntegralMatrix::from_twice([[2, 0, 0], [0, 0, 0], [0, 0, 0]]).unwrap();
        assert_eq!(fiber_over_t0(&d).unwrap(), vec![JordanElement::e(0)]);
    }

    #[test]
    fn weight_codec() {
        let w = SiegelWeight::from_k(0, 4);
        assert_eq!(w.lambda, [12, 8, 8]);
        assert_eq!(w.decode().unwrap(), (0, 4));
        assert!(SiegelWeight { lambda: [12, 8, 9] }.decode().is_err());
    }

    #[test]
    fn zero_t0_kills_cusp_forms() {
        let p = siegel_fc(&HalfIntegralMatrix::zero(), &null_pair_beta(0, 2)).unwrap();
        assert!(p.is_zero());
        let p = siegel_fc(&HalfIntegralMatrix::zero(), &G2Tensor::one()).unwrap();
        assert_eq!(p, BiPolynomial::constant(Scalar::one()));
    }

    #[test]
    fn demo_coefficient_is_highest_weight() {
        let p = siegel_fc(&demo_t0(), &null_pair_beta(1, 1)).unwrap();
        assert!(contract_check(&p).is_zero());
    }

    #[test]
    fn low_order_recursion() {
        let e1 = JordanElement::new(
            [Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(-1)],
            [Octonion::unit(2), Octonion::from_ints([0, 1, 0, 0, 1, 0, 0, 0]), Octonion::zero()],
        );
        let e2 = JordanElement::new(
            [Scalar::from_int(0), Scalar::from_int(1), Scalar::from_int(3)],
            [Octonion::zero(), Octonion::unit(5), Octonion::from_ints([1, 0, 0, 1, 0, 0, 0, 0])],
        );
        let l = Scalar::from_int(3);
        assert_eq!(pn_recursion(&[], &l), TensorAlg::constant(Scalar::one()));
        let mut p1 = TensorAlg::from_jordan(&e1);
        p1.add_scaled(&TensorAlg::constant(Scalar::one()), &(&l * &e1.trace()));
        assert_eq!(pn_recursion(std::slice::from_ref(&e1), &l), p1);

        let one = TensorAlg::constant(Scalar::one());
        let (t1, t2) = (e1.trace(), e2.trace());
        let br = bracket(&e1, &e2);
        let mut p2 = TensorAlg::from_jordan(&e1).tensor_right(&e2);
        p2.add_scaled(&TensorAlg::from_jordan(&e1), &(&l * &t2));
        p2.add_scaled(&TensorAlg::from_jordan(&e2), &(&l * &t1));
        p2.add_scaled(&TensorAlg::from_jordan(&br), &Scalar::one());
        p2.add_scaled(&one, &(&(&l * &l) * &(&t1 * &t2)));
        p2.add_scaled(&one, &(&(&l * &Scalar::half()) * &br.trace()));
        assert_eq!(pn_recursion(&[e1.clone(), e2.clone()], &l), p2);
        assert_eq!(bracket(&e1, &e2), bracket(&e2, &e1));
    }
}
