//! A quick pass over the main invariants, one PASS/FAIL line each.

use std::fmt::Write as _;

use etheta_core::f4::phi_vanishes;
use etheta_core::freudenthal::{fiber_rank_one, CubicRing};
use etheta_core::g2::{contract_check, derivation_basis, null_pair_beta};
use etheta_core::jordan::{JordanElement, PairingTag};
use etheta_core::octonion::Octonion;
use etheta_core::qseries::{harmonic_theta, tau};
use etheta_core::quaternionic::{delta_g2_coefficient, g2_fc, standard_beta, standard_pair, Route};
use etheta_core::shell::{shell_coxeter, sigma};
use etheta_core::siegel::{demo_t0, leading_term_check, siegel_fc};
use etheta_core::{Error, Scalar};

use crate::commands::{alpha_table, identity_rows};
use crate::Outcome;

type Check = (&'static str, fn() -> Result<bool, Error>);

fn sample_jordan(seed: i64) -> JordanElement {
    let o = |k: i64| Octonion::from_ints(std::array::from_fn(|i| ((i as i64 * 7 + k * 3) % 5) - 2));
    JordanElement::new(
        [Scalar::from_int(seed), Scalar::from_int(1 - seed), Scalar::from_int(2)],
        [o(seed), o(seed + 1), o(seed + 2)],
    )
}

const CHECKS: &[Check] = &[
    ("shell sizes 240σ₃(N), N ≤ 4", || {
        Ok((0..=4).all(|n| shell_coxeter(n).len() as u128 == if n == 0 { 1 } else { 240 * sigma(3, n) }))
    }),
    ("dim Der(Θ) = 14", || Ok(derivation_basis().len() == 14)),
    ("adjoint identity (X#)# = n(X)X", || {
        Ok((0..4).map(sample_jordan).all(|x| x.sharp().sharp() == x.scale(&x.norm())))
    }),
    ("standard pair is singular", || Ok(standard_pair().is_singular())),
    ("fiber over u²v − uv² has six rank-one elements", || {
        let f = fiber_rank_one(&CubicRing::Product3.cubic(), &PairingTag::I)?;
        Ok(f.len() == 6 && f.iter().all(|w| w.is_rank_at_most_one()))
    }),
    ("g2-fc at u²v − uv² equals 6 for m = 2, 4", || {
        let w0 = CubicRing::Product3.cubic();
        Ok([2, 4]
            .iter()
            .all(|&m| g2_fc(&w0, &standard_beta(m), &PairingTag::I) == Ok(Scalar::from_int(6))))
    }),
    ("route A = route B = harmonic theta for D ≤ 16", || {
        let h = harmonic_theta(16)?;
        for d in (1..=16).filter(|d| matches!(d % 4, 0 | 1)) {
            let a = delta_g2_coefficient(d, Route::A)?;
            if a != delta_g2_coefficient(d, Route::B)? || a != Scalar::from(h.coeff(d as usize)?.to_integer()) {
                return Ok(false);
            }
        }
        Ok(true)
    }),
    ("Shimura relation for n ≤ 4", || {
        let alphas = alpha_table(16, Route::A).map_err(|e| Error::Computation(e.to_string()))?;
        Ok(etheta_core::qseries::shimura_consistency(&alphas, 4)?.all_zero())
    }),
    ("τ(2) = −24, τ(3) = 252", || Ok(tau(2)? == (-24).into() && tau(3)? == 252.into())),
    ("leading-term check at (1,0) and (0,1)", || {
        Ok(leading_term_check(1, 0, &null_pair_beta(1, 0))? && leading_term_check(0, 1, &null_pair_beta(0, 1))?)
    }),
    ("highest-weight contraction vanishes at the demo T₀", || {
        Ok(contract_check(&siegel_fc(&demo_t0(), &null_pair_beta(1, 1))?).is_zero())
    }),
    ("Φ_{γ,x} = 0 for γ = e₁₁, x = e₂₂", || Ok(phi_vanishes(&JordanElement::e(1), &JordanElement::e(0)))),
];

pub fn run_selftest() -> Outcome {
    let mut text = String::new();
    let mut ok = true;
    for (name, f) in CHECKS {
        let res = f();
        let pass = matches!(res, Ok(true));
        ok &= pass;
        match res {
            Err(e) => writeln!(text, "FAIL {name}: {e}"),
            Ok(_) => writeln!(text, "{} {name}", if pass { "PASS" } else { "FAIL" }),
        }
        .expect("string write");
    }
    match identity_rows() {
        Ok(rows) => {
            let pass = rows.iter().all(|r| r.pass());
            ok &= pass;
            writeln!(text, "{} Bessel identity table ({} rows)", if pass { "PASS" } else { "FAIL" }, rows.len())
        }
        Err(e) => {
            ok = false;
            writeln!(text, "FAIL Bessel identity table: {e}")
        }
    }
    .expect("string write");
    Outcome { text, ok, ext: "txt" }
}
