//! Discrete-series representations of su(1,1).
//!
//! Basis states |k,n⟩ with K₃|k,n⟩ = (k+n)|k,n⟩ and
//! K₊|k,n⟩ = √((n+1)(2k+n))|k,n+1⟩, K₋ = K₊†. The displacement operator is
//! D(z) = exp(zK₊ − z̄K₋); it maps |k,0⟩ to the Perelomov state labelled by
//! the disk variable ξ = (z/|z|)·tanh|z|.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Largest truncation the automatic displacement search will try.
pub const MAX_DIM: usize = 1024;
/// Column-0 tail norm accepted by [`displacement_converged`].
pub const TAIL_TOL: f64 = 1e-12;

/// √((n+1)(2k+n)), the K₊ matrix element ⟨k,n+1|K₊|k,n⟩.
pub fn ladder_up_coeff(k: f64, n: usize) -> f64 {
    let n = n as f64;
    ((n + 1.0) * (2.0 * k + n)).sqrt()
}

/// √(n(2k+n−1)), the K₋ matrix element ⟨k,n−1|K₋|k,n⟩; zero for n = 0.
pub fn ladder_down_coeff(k: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    (n * (2.0 * k + n - 1.0)).sqrt()
}

pub fn casimir_eigenvalue(k: f64) -> f64 {
    k * (k - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepBasisState {
    pub k: f64,
    pub n: usize,
}

impl RepBasisState {
    pub fn new(k: f64, n: usize) -> Result<Self> {
        check_k(k)?;
        Ok(RepBasisState { k, n })
    }

    /// K₃ eigenvalue k + n.
    pub fn weight(&self) -> f64 {
        self.k + self.n as f64
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("Bargmann index must be positive, got {k}")))
    }
}

/// Generators restricted to span{|k,0⟩ … |k,dim−1⟩}.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedRep {
    pub k: f64,
    pub dim: usize,
    pub kplus: DMatrix<Complex64>,
    pub kminus: DMatrix<Complex64>,
    pub kthree: DMatrix<Complex64>,
}

pub fn truncated_rep(k: f64, dim: usize) -> Result<TruncatedRep> {
    check_k(k)?;
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("truncation dimension must be >= 2, got {dim}")));
    }
    let mut kplus = DMatrix::zeros(dim, dim);
    let mut kthree = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        kthree[(n, n)] = Complex64::new(k + n as f64, 0.0);
        if n + 1 < dim {
            kplus[(n + 1, n)] = Complex64::new(ladder_up_coeff(k, n), 0.0);
        }
    }
    let kminus = kplus.adjoint();
    Ok(TruncatedRep { k, dim, kplus, kminus, kthree })
}

impl TruncatedRep {
    /// K₃² − ½(K₊K₋ + K₋K₊); equals k(k−1)·I away from the last row/column.
    pub fn casimir_matrix(&self) -> DMatrix<Complex64> {
        let half = Complex64::new(0.5, 0.0);
        &self.kthree * &self.kthree
            - (&self.kplus * &self.kminus + &self.kminus * &self.kplus) * half
    }

    /// zK₊ − z̄K₋.
    pub fn displacement_generator(&self, z: Complex64) -> DMatrix<Complex64> {
        &self.kplus * z - &self.kminus * z.conj()
    }
}

/// Leading `m`×`m` block.
pub fn interior<T: nalgebra::Scalar>(a: &DMatrix<T>, m: usize) -> DMatrix<T> {
    a.view((0, 0), (m, m)).into_owned()
}

fn norm_bound<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> f64 {
    // max(‖A‖₁, ‖A‖∞) bounds the spectral norm from above.
    let mut col = 0.0f64;
    let mut row = vec![0.0f64; a.nrows()];
    for j in 0..a.ncols() {
        let mut c = 0.0;
        for i in 0..a.nrows() {
            let v = a[(i, j)].clone().modulus();
            c += v;
            row[i] += v;
        }
        col = col.max(c);
    }
    col.max(row.into_iter().fold(0.0, f64::max))
}

/// Matrix exponential by scaling and squaring of a Taylor polynomial.
pub fn expm<T>(a: &DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = norm_bound(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a * T::from_real(0.5f64.powi(squarings));
    let mut sum = DMatrix::<T>::identity(n, n);
    let mut term = DMatrix::<T>::identity(n, n);
    for j in 1..=60 {
        term = (&term * &scaled) * T::from_real(1.0 / j as f64);
        sum += &term;
        if norm_bound(&term) <= 1e-18 * norm_bound(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// D(z) = exp(zK₊ − z̄K₋) on the truncated space.
///
/// With z = r·e^{iθ} and U = diag(e^{inθ}), D(z) = U·exp(r(K₊ − K₋))·U†, so
/// only a real exponential is needed.
pub fn displacement_matrix(rep: &TruncatedRep, z: Complex64) -> Result<DMatrix<Complex64>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("displacement parameter must be finite, got {z}")));
    }
    let dim = rep.dim;
    let r = z.norm();
    let theta = z.arg();
    let mut gen = DMatrix::<f64>::zeros(dim, dim);
    for n in 0..dim - 1 {
        let q = ladder_up_coeff(rep.k, n) * r;
        gen[(n + 1, n)] = q;
        gen[(n, n + 1)] = -q;
    }
    let e = expm(&gen);
    Ok(DMatrix::from_fn(dim, dim, |m, n| {
        Complex64::from_polar(1.0, (m as f64 - n as f64) * theta) * e[(m, n)]
    }))
}

/// Truncation size before any doubling.
pub fn auto_dimension(k: f64, z: Complex64) -> usize {
    let r = z.norm();
    let guess = (2.0 * k + 20.0 + 15.0 * r * r.exp()).ceil();
    64usize.max(guess as usize)
}

/// A displacement matrix whose truncation has been checked.
#[derive(Debug, Clone)]
pub struct Displacement {
    pub rep: TruncatedRep,
    pub matrix: DMatrix<Complex64>,
    /// Norm of column 0 over the last quarter of the rows.
    pub tail: f64,
}

/// D(z) at the smallest doubling of [`auto_dimension`] whose column-0 tail
/// norm is below [`TAIL_TOL`].
pub fn displacement_converged(k: f64, z: Complex64) -> Result<Displacement> {
    displacement_with_min_dim(k, z, 0)
}

/// As [`displacement_converged`], starting from at least `min_dim` states.
pub fn displacement_with_min_dim(k: f64, z: Complex64, min_dim: usize) -> Result<Displacement> {
    check_k(k)?;
    let mut dim = auto_dimension(k, z).max(min_dim);
    loop {
        if dim > MAX_DIM {
            return Err(Error::NonConvergence(format!(
                "displacement with |z| = {} and k = {k} needs more than {MAX_DIM} states",
                z.norm()
            )));
        }
        let rep = truncated_rep(k, dim)?;
        let matrix = displacement_matrix(&rep, z)?;
        let tail = (dim * 3 / 4..dim).map(|n| matrix[(n, 0)].norm_sqr()).sum::<f64>().sqrt();
        if tail < TAIL_TOL {
            return Ok(Displacement { rep, matrix, tail });
        }
        dim *= 2;
    }
}

fn check_disk(xi: Complex64) -> Result<f64> {
    let m = xi.norm();
    if m.is_nan() || m >= 1.0 {
        return Err(Error::OutsideUnitDisk { modulus: m, limit: 1.0 });
    }
    Ok(m)
}

/// Expansion coefficients c_n = ⟨k,n|ξ⟩ of the Perelomov state,
/// c_n = (1−|ξ|²)^k √(Γ(n+2k)/(n!Γ(2k))) ξⁿ, for n = 0..=nmax.
pub fn perelomov_coefficients(k: f64, xi: Complex64, nmax: usize) -> Result<Vec<Complex64>> {
    check_k(k)?;
    let m = check_disk(xi)?;
    let mut out = vec![Complex64::new(0.0, 0.0); nmax + 1];
    if m == 0.0 {
        out[0] = Complex64::new(1.0, 0.0);
        return Ok(out);
    }
    let base = k * (1.0 - m * m).ln() - 0.5 * ln_gamma(2.0 * k);
    let ln_m = m.ln();
    let theta = xi.arg();
    for (n, c) in out.iter_mut().enumerate() {
        let nf = n as f64;
        let ln_mag = base + 0.5 * (ln_gamma(nf + 2.0 * k) - ln_gamma(nf + 1.0)) + nf * ln_m;
        *c = Complex64::from_polar(ln_mag.exp(), nf * theta);
    }
    Ok(out)
}

/// The (z, ξ, ζ) triple of one coherent state.
///
/// In the normal form D(z) = exp(ζK₊)·exp(η K₃)·exp(−ζ̄K₋) one has ζ = ξ and
/// η = ln(1 − |ζ|²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParam {
    pub z: Complex64,
    pub xi: Complex64,
    pub zeta: Complex64,
}

impl CoherentParam {
    pub fn eta_nf(&self) -> f64 {
        (1.0 - self.zeta.norm_sqr()).ln()
    }

    pub fn from_xi(xi: Complex64) -> Result<Self> {
        let m = check_disk(xi)?;
        if m == 0.0 {
            return Ok(CoherentParam { z: Complex64::new(0.0, 0.0), xi, zeta: xi });
        }
        // atanh m = ln(1+m) − ½ln(1−m²), with 1−m² taken from the components
        // so that the rounding of m itself barely matters near the rim.
        let one_minus = one_minus_norm_sqr(xi);
        let r = m.ln_1p() - 0.5 * one_minus.ln();
        Ok(CoherentParam { z: xi * (r / m), xi, zeta: xi })
    }
}

pub fn xi_from_z(z: Complex64) -> CoherentParam {
    let r = z.norm();
    let xi = if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else if r < 0.5 {
        z * (r.tanh() / r)
    } else {
        rim_xi(z)
    };
    CoherentParam { z, xi, zeta: xi }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// 1 − |ξ|² without losing the low bits to cancellation.
fn one_minus_norm_sqr(xi: Complex64) -> f64 {
    let (px, py) = (xi.re * xi.re, xi.im * xi.im);
    let (ex, ey) = (xi.re.mul_add(xi.re, -px), xi.im.mul_add(xi.im, -py));
    let (a, ea) = two_sum(1.0, -px);
    let (b, eb) = two_sum(a, -py);
    b + (ea + eb - ex - ey)
}

/// ξ = (z/|z|)(1 − e) with e = 2/(e^{2|z|}+1), carrying the direction in
/// double-double so each component is rounded once.
fn rim_xi(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let (px, py) = (x * x, y * y);
    let (s_hi, err) = two_sum(px, py);
    let s_lo = err + x.mul_add(x, -px) + y.mul_add(y, -py);
    let r = s_hi.sqrt();
    let r_lo = ((-r).mul_add(r, s_hi) + s_lo) / (2.0 * r);
    let e = 2.0 / ((2.0 * r).exp() + 1.0);
    let component = |c: f64| {
        let q = c / r;
        let q_lo = ((-q).mul_add(r, c) - q * r_lo) / r;
        q + (q_lo - q * e)
    };
    Complex64::new(component(x), component(y))
}

/// exp(wK₊) entrywise: w^{m−n}/(m−n)!·Q₊(n)⋯Q₊(m−1) for m ≥ n.
fn exp_raising(rep: &TruncatedRep, w: Complex64) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(rep.dim, rep.dim);
    for n in 0..rep.dim {
        let mut v = Complex64::new(1.0, 0.0);
        out[(n, n)] = v;
        for m in n + 1..rep.dim {
            v *= w * (ladder_up_coeff(rep.k, m - 1) / (m - n) as f64);
            out[(m, n)] = v;
        }
    }
    out
}

/// exp(ζK₊)·exp(ηK₃)·exp(−ζ̄K₋) on the truncated space. The factors are
/// triangular, so every entry of the product is exact in the truncation.
pub fn normal_form_matrix(rep: &TruncatedRep, p: &CoherentParam) -> DMatrix<Complex64> {
    let lower = exp_raising(rep, p.zeta);
    let upper = exp_raising(rep, -p.zeta).adjoint();
    let eta = p.eta_nf();
    let diag = DMatrix::from_fn(rep.dim, rep.dim, |m, n| {
        if m == n {
            Complex64::new((eta * (rep.k + n as f64)).exp(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    lower * diag * upper
}
