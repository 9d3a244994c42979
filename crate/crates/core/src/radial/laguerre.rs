//! Associated Laguerre polynomials.

use statrs::function::gamma::ln_gamma;

/// L_n^α(x) by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// e^{log_prefactor}·ℓ_n(x) for n = 0..=nmax, where
/// ℓ_n = √(n!/Γ(n+α+1))·L_n^α are orthonormal under x^α e^{−x} dx.
///
/// The prefactor is carried as a separate exponent, so e^{−x/2} and powers of
/// x can be folded in without overflow or premature underflow in L_n.
pub fn orthonormal_laguerre(nmax: usize, alpha: f64, x: f64, log_prefactor: f64) -> Vec<f64> {
    const BIG: f64 = 1e150;
    let mut scale = log_prefactor;
    let mut out = Vec::with_capacity(nmax + 1);
    let l0 = (-0.5 * ln_gamma(alpha + 1.0)).exp();
    out.push(l0 * scale.exp());
    if nmax == 0 {
        return out;
    }
    // √(n+1)·√(n+α+1)·ℓ_{n+1} = (2n+α+1−x)ℓ_n − √n·√(n+α)·ℓ_{n−1}
    let mut prev = l0;
    let mut cur = (1.0 + alpha - x) * l0 / (1.0 + alpha).sqrt();
    out.push(cur * scale.exp());
    for n in 1..nmax {
        let nf = n as f64;
        let next = ((2.0 * nf + alpha + 1.0 - x) * cur - (nf * (nf + alpha)).sqrt() * prev)
            / ((nf + 1.0) * (nf + alpha + 1.0)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            prev /= BIG;
            cur /= BIG;
            scale += BIG.ln();
        }
        out.push(cur * scale.exp());
    }
    out
}

/// α·ln x with the convention 0·ln 0 = 0.
pub(crate) fn alpha_ln(alpha: f64, x: f64) -> f64 {
    if alpha == 0.0 {
        0.0
    } else {
        alpha * x.ln()
    }
}
