//! Enumeration of the norm-N shells of R_Θ by exact Fincke–Pohst search on the
//! Coxeter Gram matrix.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::octonion::{cox_norm, cox_to_doubled, coxeter_gram, IntOct, Octonion};

type Q = Ratio<i128>;

/// Upper-triangular Fincke–Pohst coefficients: `cᵀGc = Σ q_ii (c_i + Σ_{j>i} q_ij c_j)²`.
fn fp_coefficients() -> &'static [[Q; 8]; 8] {
    static C: OnceLock<[[Q; 8]; 8]> = OnceLock::new();
    C.get_or_init(|| {
        let g = coxeter_gram();
        let mut q: [[Q; 8]; 8] = std::array::from_fn(|i| std::array::from_fn(|j| Q::from(g[i][j] as i128)));
        for i in 0..8 {
            for j in i + 1..8 {
                q[j][i] = q[i][j];
                q[i][j] = q[i][j] / q[i][i];
            }
            for k in i + 1..8 {
                for l in k..8 {
                    let t = q[k][i] * q[i][l];
                    q[k][l] -= t;
                }
            }
        }
        q
    })
}

fn search(i: usize, remaining: Q, c: &mut [i64; 8], q: &[[Q; 8]; 8], out: &mut Vec<[i64; 8]>) {
    let mut center = Q::zero();
    for j in i + 1..8 {
        center -= q[i][j] * Q::from(c[j] as i128);
    }
    let qii = q[i][i];
    let radius = (remaining / qii).to_f64().unwrap_or(0.0).max(0.0).sqrt();
    let mid = center.to_f64().unwrap_or(0.0);
    let lo = (mid - radius).floor() as i64 - 1;
    let hi = (mid + radius).ceil() as i64 + 1;
    for x in lo..=hi {
        let dx = Q::from(x as i128) - center;
        let used = qii * dx * dx;
        if used > remaining {
            continue;
        }
        c[i] = x;
        if i == 0 {
            if used == remaining {
                out.push(*c);
            }
        } else {
            search(i - 1, remaining - used, c, q, out);
        }
    }
    c[i] = 0;
}

fn enumerate(n: u64) -> Vec<[i64; 8]> {
    let q = fp_coefficients();
    let mut out = Vec::new();
    let mut c = [0i64; 8];
    search(7, Q::from(2 * n as i128), &mut c, q, &mut out);
    debug_assert!(out.iter().all(|v| cox_norm(v) == n as i64));
    out.sort();
    out
}

/// Elements of R_Θ of norm `n`, as Coxeter coordinates in lexicographic order.
pub fn shell_coxeter(n: u64) -> Arc<Vec<[i64; 8]>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<[i64; 8]>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("shell cache").get(&n) {
        return v.clone();
    }
    let v = Arc::new(enumerate(n));
    cache.lock().expect("shell cache").insert(n, v.clone());
    v
}

/// The same shell in doubled pair coordinates, in the same order.
pub fn shell_doubled(n: u64) -> Arc<Vec<IntOct>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<IntOct>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("shell cache").get(&n) {
        return v.clone();
    }
    let v: Arc<Vec<IntOct>> = Arc::new(shell_coxeter(n).iter().map(cox_to_doubled).collect());
    cache.lock().expect("shell cache").insert(n, v.clone());
    v
}

/// Elements of R_Θ of norm `n` with trace `t`, doubled pair coordinates.
pub fn shell_with_trace(n: u64, t: i64) -> Vec<IntOct> {
    shell_doubled(n).iter().filter(|p| p[0] == t).copied().collect()
}

/// `shell(N)`: the elements of R_Θ with n(x) = N as exact octonions.
pub fn shell(n: u64) -> Vec<Octonion> {
    shell_coxeter(n).iter().map(Octonion::from_coxeter_ints).collect()
}

/// Divisor power sum σ_k(n).
pub fn sigma(k: u32, n: u64) -> u128 {
    (1..=n).filter(|d| n % d == 0).map(|d| (d as u128).pow(k)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_shells() {
        assert_eq!(shell_coxeter(0).len(), 1);
        assert_eq!(shell_coxeter(1).len(), 240);
        assert_eq!(shell_coxeter(2).len(), 2160);
        assert_eq!(shell_coxeter(3).len(), 6720);
    }

    #[test]
    fn ordering_is_lexicographic() {
        let s = shell_coxeter(2);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn norm_one_with_trace_one() {
        // 56 roots pair to 1 with a fixed root in E8
        assert_eq!(shell_with_trace(1, 1).len(), 56);
    }
}
