//! Subcommand implementations. Every command renders its output in a fixed
//! order so identical inputs give byte-identical text.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use etheta_core::freudenthal::{fiber_rank_one, gan_coeff, kim_coeff, BinaryCubic, CubicRing};
use etheta_core::g2::{default_bound, highest_weight_vector, null_pair_beta, BiPolynomial, G2Tensor};
use etheta_core::jordan::{JordanElement, PairingTag};
use etheta_core::qseries::shimura_consistency;
use etheta_core::quaternionic::{delta_g2_coefficient, g2_fc, g2_fc_with_e, standard_beta, Route};
use etheta_core::siegel::{detect_lift, fiber_over_t0, siegel_fc, HalfIntegralMatrix, SiegelWeight};
use etheta_core::Scalar;

use crate::config::{Config, Format};
use crate::{CliError, Command, Outcome, RingChoice, RouteChoice};

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn parse_scalar(s: &str) -> Result<Scalar, CliError> {
    s.trim().parse().map_err(|e: etheta_core::Error| CliError::Input(e.to_string()))
}

fn read_t0(path: &Path) -> Result<HalfIntegralMatrix, CliError> {
    let text = read_file(path)?;
    let line = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join(",");
    Ok(line.parse::<HalfIntegralMatrix>()?)
}

fn route(r: RouteChoice) -> Route {
    match r {
        RouteChoice::A => Route::A,
        RouteChoice::B => Route::B,
    }
}

pub fn dispatch(cmd: &Command, config: &Config) -> Result<Outcome, CliError> {
    match cmd {
        Command::SiegelFc { k1, k2, t0, beta } => siegel_fc_cmd(*k1, *k2, t0, beta),
        Command::G2Fc { m, w0, ring, d, route: r, e_matrix, gamma } => {
            g2_fc_cmd(config, *m, w0.as_deref(), *ring, *d, route(*r), e_matrix.as_deref(), gamma.as_deref())
        }
        Command::ShimuraTable { dmax, route: r } => shimura_table(config, *dmax, route(*r)),
        Command::DetectLift { lambda, table, bound } => detect_lift_cmd(lambda, table, *bound),
        Command::EnumerateRank1 { t0, w0 } => enumerate_rank1(t0.as_deref(), w0.as_deref()),
        Command::ValidateIdentities => validate_identities(),
        Command::Selftest => Ok(crate::selftest::run_selftest()),
    }
}

pub fn siegel_fc_cmd(k1: usize, k2: usize, t0: &Path, beta: &str) -> Result<Outcome, CliError> {
    let t0 = read_t0(t0)?;
    let beta = match beta {
        "null" => null_pair_beta(k1, k2),
        "hw" => highest_weight_vector(k1, k2),
        path => {
            let b: G2Tensor = serde_json::from_str(&read_file(Path::new(path))?)
                .map_err(|e| CliError::Input(format!("bad β file: {e}")))?;
            if (b.k1, b.k2) != (k1, k2) {
                return Err(CliError::Input(format!(
                    "β has bidegree ({}, {}), expected ({k1}, {k2})",
                    b.k1, b.k2
                )));
            }
            b
        }
    };
    let p = siegel_fc(&t0, &beta)?;
    Ok(Outcome { text: to_json(&p), ok: true, ext: "json" })
}

#[derive(Serialize)]
struct G2Row {
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    w0: Option<String>,
    m: usize,
    raw: Scalar,
    normalized: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    raw_e: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    combined: Option<Scalar>,
}

#[allow(clippy::too_many_arguments)]
pub fn g2_fc_cmd(
    config: &Config,
    m: usize,
    w0: Option<&str>,
    ring: Option<RingChoice>,
    d: Option<i64>,
    route: Route,
    e_matrix: Option<&Path>,
    gamma: Option<&str>,
) -> Result<Outcome, CliError> {
    let beta = standard_beta(m);
    let product3 = CubicRing::Product3.cubic();
    let unit = g2_fc(&product3, &beta, &PairingTag::I)?;
    if unit.is_zero() {
        return Err(CliError::Compute("normalizing coefficient at u²v − uv² vanishes".into()));
    }
    let gammas = match gamma {
        Some(g) => Some(
            g.split_once(',')
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .ok_or_else(|| CliError::Input(format!("--gamma expects γ_I,γ_E, got {g:?}")))?,
        ),
        None => config.gamma_weights.clone(),
    };

    let (target, d_value) = match (w0, ring) {
        (Some(s), None) => (s.parse::<BinaryCubic>()?, None),
        (None, Some(RingChoice::Product3)) => (product3.clone(), None),
        (None, Some(RingChoice::ZxZD)) => {
            let d = d.ok_or_else(|| CliError::Input("--ring ZxZD needs --D".into()))?;
            if d > config.max_discriminant() {
                return Err(CliError::Input(format!(
                    "D = {d} exceeds the shell bound {} (largest D {})",
                    config.shell_bound,
                    config.max_discriminant()
                )));
            }
            (CubicRing::z_cross_quadratic(d)?.cubic(), Some(d))
        }
        _ => return Err(CliError::Input("give exactly one of --w0 or --ring".into())),
    };

    let raw = match (d_value, route) {
        (Some(d), Route::B) if m == 2 => delta_g2_coefficient(d, Route::B)?,
        (_, Route::B) => return Err(CliError::Input("route b exists only for --ring ZxZD with m = 2".into())),
        _ => g2_fc(&target, &beta, &PairingTag::I)?,
    };

    let (raw_e, combined) = match gammas {
        None => (None, None),
        Some((gi, ge)) => {
            let (gi, ge) = (parse_scalar(&gi)?, parse_scalar(&ge)?);
            let e = match e_matrix.map(Path::to_path_buf).or_else(|| config.e_matrix_path.clone()) {
                Some(p) => Some(
                    serde_json::from_str::<JordanElement>(&read_file(&p)?)
                        .map_err(|e| CliError::Input(format!("bad E matrix file: {e}")))?,
                ),
                None if !ge.is_zero() => {
                    return Err(CliError::Input(
                        "γ_E ≠ 0 needs E-data: pass --e-matrix or set e_matrix_path".into(),
                    ))
                }
                None => None,
            };
            let (fc, v) = g2_fc_with_e(&target, &beta, &beta, e.as_ref(), (&gi, &ge))?;
            (fc.raw_e, Some(v))
        }
    };

    let row = G2Row {
        d: d_value,
        w0: d_value.is_none().then(|| target.to_string()),
        m,
        normalized: &raw / &unit,
        raw,
        raw_e,
        combined,
    };
    let text = match config.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&vec![row]),
        Format::Csv => {
            let key = match row.d {
                Some(d) => ("D", d.to_string()),
                None => ("w0", format!("\"{}\"", target)),
            };
            format!("{},m,raw,normalized\n{},{},{},{}\n", key.0, key.1, row.m, row.raw, row.normalized)
        }
    };
    Ok(Outcome { text, ok: true, ext: if config.format == Some(Format::Csv) { "csv" } else { "json" } })
}

/// Normalized α(D) for all valid `D ≤ dmax`.
pub fn alpha_table(dmax: i64, route: Route) -> Result<BTreeMap<i64, Scalar>, CliError> {
    let unit = delta_g2_coefficient(1, route)?;
    let mut out = BTreeMap::new();
    for d in (1..=dmax).filter(|d| matches!(d % 4, 0 | 1)) {
        out.insert(d, &delta_g2_coefficient(d, route)? / &unit);
    }
    Ok(out)
}

pub fn shimura_table(config: &Config, dmax: i64, route: Route) -> Result<Outcome, CliError> {
    if dmax < 1 {
        return Err(CliError::Input("--dmax must be at least 1".into()));
    }
    if dmax > config.max_discriminant() {
        return Err(CliError::Input(format!(
            "--dmax {dmax} exceeds the shell bound {} (largest D {})",
            config.shell_bound,
            config.max_discriminant()
        )));
    }
    let alphas = alpha_table(dmax, route)?;
    let nmax = (1..).take_while(|n: &i64| n * n <= dmax).last().unwrap_or(1) as usize;
    if nmax > config.qseries_length {
        return Err(CliError::Input(format!("n = {nmax} exceeds qseries_length {}", config.qseries_length)));
    }
    let report = shimura_consistency(&alphas, nmax)?;
    let ok = report.all_zero();
    let text = match config.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("D,alpha\n");
            for (d, a) in &alphas {
                writeln!(s, "{d},{a}").expect("string write");
            }
            s.push_str("# shimura n,tau,lifted,residual\n");
            for r in &report.rows {
                writeln!(s, "# {},{},{},{}", r.n, r.tau, r.lifted, r.residual).expect("string write");
            }
            writeln!(s, "# consistent {ok}").expect("string write");
            s
        }
        Format::Json => {
            let rows: Vec<_> = alphas.iter().map(|(d, a)| json!({"D": d, "alpha": a})).collect();
            to_json(&json!({"alpha": rows, "shimura": report, "consistent": ok}))
        }
    };
    let ext = if config.format == Some(Format::Json) { "json" } else { "csv" };
    Ok(Outcome { text, ok, ext })
}

/// A T₀ given either as a 3×3 array or as the comma-separated text form.
#[derive(Deserialize)]
#[serde(untagged)]
enum T0Input {
    Text(String),
    Matrix(HalfIntegralMatrix),
}

#[derive(Deserialize)]
struct TableRow {
    t0: T0Input,
    fc: BiPolynomial,
}

pub fn parse_table(text: &str) -> Result<Vec<(HalfIntegralMatrix, BiPolynomial)>, CliError> {
    let rows: Vec<TableRow> =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad coefficient table: {e}")))?;
    rows.into_iter()
        .map(|r| {
            let t0 = match r.t0 {
                T0Input::Text(s) => s.parse()?,
                T0Input::Matrix(m) => m,
            };
            Ok((t0, r.fc))
        })
        .collect()
}

pub fn parse_lambda(s: &str) -> Result<SiegelWeight, CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Input(format!("bad λ entry {x:?}"))))
        .collect::<Result<_, _>>()?;
    let lambda: [i64; 3] = v
        .try_into()
        .map_err(|_| CliError::Input(format!("λ needs three entries, got {s:?}")))?;
    Ok(SiegelWeight { lambda })
}

pub fn detect_lift_cmd(lambda: &str, table: &Path, bound: Option<usize>) -> Result<Outcome, CliError> {
    let weight = parse_lambda(lambda)?;
    let (k1, k2) = weight.decode()?;
    let table = parse_table(&read_file(table)?)?;
    let res = detect_lift(&weight, &table, bound.unwrap_or_else(|| default_bound(k1, k2)))?;
    Ok(Outcome { text: to_json(&res), ok: true, ext: "json" })
}

pub fn enumerate_rank1(t0: Option<&Path>, w0: Option<&str>) -> Result<Outcome, CliError> {
    let mut text = String::new();
    match (t0, w0) {
        (Some(p), None) => {
            for t in fiber_over_t0(&read_t0(p)?)? {
                let a = kim_coeff(&t)?;
                writeln!(text, "{}", json!({"T": t, "a": a.to_string()})).expect("string write");
            }
        }
        (None, Some(s)) => {
            for w in fiber_rank_one(&s.parse::<BinaryCubic>()?, &PairingTag::I)? {
                let a = gan_coeff(&w)?;
                writeln!(text, "{}", json!({"w": w, "a": a.to_string()})).expect("string write");
            }
        }
        _ => return Err(CliError::Input("give exactly one of --t0 or --w0".into())),
    }
    Ok(Outcome { text, ok: true, ext: "jsonl" })
}

/// One line of the identity table.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub check: String,
    pub params: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl IdentityRow {
    pub fn pass(&self) -> bool {
        self.residual < self.tolerance
    }
}

/// All rows of the Bessel-identity table.
pub fn identity_rows() -> Result<Vec<IdentityRow>, CliError> {
    use etheta_analytic as an;
    let mut rows = Vec::new();
    let k_half = an::bessel_k(0.5, 1.0)?;
    let exact = (std::f64::consts::PI / 2.0).sqrt() * (-1.0f64).exp();
    rows.push(IdentityRow {
        check: "K_1/2 closed form".into(),
        params: "x=1".into(),
        residual: ((k_half - exact) / exact).abs(),
        tolerance: 1e-10,
    });
    for (nu, x) in [(1.5, 1.0), (4.0, 2.0), (7.0, 5.0)] {
        let lhs = an::bessel_k(nu + 1.0, x)?;
        let rhs = an::bessel_k(nu - 1.0, x)? + 2.0 * nu / x * an::bessel_k(nu, x)?;
        rows.push(IdentityRow {
            check: "K recurrence".into(),
            params: format!("nu={nu} x={x}"),
            residual: ((lhs - rhs) / lhs).abs(),
            tolerance: 1e-9,
        });
    }
    for (ell, m, beta) in an::iint_grid() {
        let r = an::verify_iint(ell, m, beta)?;
        rows.push(IdentityRow {
            check: "I_(l,m) integral".into(),
            params: format!("l={ell} m={m} beta={beta}"),
            residual: r.residual,
            tolerance: 1e-6,
        });
        if m % 2 == 1 {
            rows.push(IdentityRow {
                check: "I_(l,m) real part, m odd".into(),
                params: format!("l={ell} m={m} beta={beta}"),
                residual: r.quadrature[0].abs(),
                tolerance: 1e-8,
            });
        }
    }
    for (n, b, u, tol) in [(1, 6, 2.0, 1e-5), (2, 8, 1.5, 1e-4), (3, 10, 3.0, 1e-3)] {
        let r = an::verify_bessel_derivative(n, b, u)?;
        rows.push(IdentityRow {
            check: "u^b K_b derivative".into(),
            params: format!("n={n} b={b} u={u}"),
            residual: r.residual,
            tolerance: tol,
        });
    }
    for m in 0..=20 {
        rows.push(IdentityRow {
            check: "c_n^j identity (exact)".into(),
            params: format!("m={m}"),
            residual: if an::verify_cnj_identity(m) { 0.0 } else { 1.0 },
            tolerance: 0.5,
        });
    }
    Ok(rows)
}

pub fn validate_identities() -> Result<Outcome, CliError> {
    let rows = identity_rows()?;
    let mut text = String::from("check,params,residual,tolerance,pass\n");
    for r in &rows {
        writeln!(text, "{},{},{:.3e},{:.0e},{}", r.check, r.params, r.residual, r.tolerance, r.pass())
            .expect("string write");
    }
    Ok(Outcome { ok: rows.iter().all(IdentityRow::pass), text, ext: "csv" })
}
