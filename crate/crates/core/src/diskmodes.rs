//! Robin spectrum of the unit disk in closed form.
//!
//! For the boundary condition `∂_ν v + a v = 0` on `∂𝔻`, the second
//! eigenvalue is `λ₂(𝔻; a) = x(a)²` with `x(a) ∈ (0, j₁,₁)` the smallest
//! positive root of `x J₁'(x)/J₁(x) = −a`, and the eigenfunction is
//! `v = g(r) e^{iθ}` with `g(r) = (2/x) J₁(x r)` (so `g'(0) = 1`). At `a = −1`
//! the eigenvalue vanishes and `g(r) = r`.
//!
//! The first eigenvalue uses `J₀` for `a > 0` and `I₀` for `a < 0`.

use std::f64::consts::PI;

use crate::quadrature::integrate;
use crate::{Error, Result};

/// Terms kept in the `J₀`/`J₁` power series.
const SERIES_TERMS: usize = 40;

/// Beyond this argument the alternating series loses too many digits and
/// Miller's backward recurrence takes over.
const SERIES_LIMIT: f64 = 8.0;

const BESSEL_MAX_ARG: f64 = 20.0;

/// Root-finding tolerance for bisection.
const ROOT_TOL: f64 = 1e-14;

fn j_series(order: u32, x: f64) -> f64 {
    let y = 0.25 * x * x;
    // term_k = (−y)^k / (k! (k+order)!) · (x/2)^order
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for k in 1..SERIES_TERMS {
        let kf = k as f64;
        term *= -y / (kf * (kf + order as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// `(J₀(x), J₁(x))` by Miller's backward recurrence, normalized with
/// `J₀ + 2 Σ J₂ₖ = 1`.
fn j_miller(x: f64) -> (f64, f64) {
    let n_start = 2 * (((x + 40.0) / 2.0) as usize);
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=n_start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next; // J_{k-1}
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
        let idx = k - 1;
        if idx == 1 {
            j1 = cur;
        }
        if idx > 0 && idx % 2 == 0 {
            norm += 2.0 * cur;
        }
    }
    norm += cur;
    (cur / norm, j1 / norm)
}

fn check_bessel_arg(x: f64) -> Result<()> {
    if !(0.0..=BESSEL_MAX_ARG).contains(&x) {
        return Err(Error::Range {
            value: x,
            range: "Bessel argument in [0, 20]",
        });
    }
    Ok(())
}

/// `J₀(x)` or `J₁(x)` for `0 ≤ x ≤ 20`, absolute error below `10⁻¹⁰`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    check_bessel_arg(x)?;
    match order {
        0 => Ok(j0(x)),
        1 => Ok(j1(x)),
        _ => Err(Error::InvalidParameter(format!("Bessel order {order}"))),
    }
}

pub(crate) fn j0(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        j_series(0, x)
    } else {
        j_miller(x).0
    }
}

pub(crate) fn j1(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        j_series(1, x)
    } else {
        j_miller(x).1
    }
}

/// `J₁'(x) = J₀(x) − J₁(x)/x`, with limit `1/2` at the origin.
pub fn bessel_j1_prime(x: f64) -> Result<f64> {
    check_bessel_arg(x)?;
    Ok(j1_prime(x))
}

fn j1_prime(x: f64) -> f64 {
    if x == 0.0 {
        0.5
    } else {
        j0(x) - j1(x) / x
    }
}

/// Modified Bessel `I₀`/`I₁` by the (non-alternating) power series.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    if !(0.0..=700.0).contains(&x) {
        return Err(Error::Range {
            value: x,
            range: "modified Bessel argument in [0, 700]",
        });
    }
    let y = 0.25 * x * x;
    let (mut term, ord) = match order {
        0 => (1.0, 0.0),
        1 => (0.5 * x, 1.0),
        _ => return Err(Error::InvalidParameter(format!("Bessel order {order}"))),
    };
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= y / (k * (k + ord));
        sum += term;
        if term <= 1e-17 * sum || k > 2000.0 {
            break;
        }
        k += 1.0;
    }
    Ok(sum)
}

/// Bracketed bisection for a sign change of `f` on `[a, b]`.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    for _ in 0..300 {
        let m = 0.5 * (a + b);
        if (b - a) <= tol * m.abs().max(1.0) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// First positive zero `j₁,₁` of `J₁`, located by bisection on `[3, 4]`.
pub fn first_zero_j1() -> f64 {
    bisect(j1, 3.0, 4.0, ROOT_TOL).expect("J1 changes sign on [3,4]")
}

/// First positive zero `j₀,₁` of `J₀`, located by bisection on `[2, 3]`.
pub fn first_zero_j0() -> f64 {
    bisect(j0, 2.0, 3.0, ROOT_TOL).expect("J0 changes sign on [2,3]")
}

/// `x(a) = √λ₂(𝔻; a)` for `a ∈ [−1, 1]`.
fn excited_root(alpha: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::Range {
            value: alpha,
            range: "disk Robin parameter in [-1, 1]",
        });
    }
    if alpha == -1.0 {
        return Ok(0.0);
    }
    let j11 = first_zero_j1();
    let f = |x: f64| x * j1_prime(x) / j1(x) + alpha;
    bisect(f, 1e-12, j11 - 1e-9, ROOT_TOL)
}

/// Second Robin eigenvalue `λ₂(𝔻; a)` of the unit disk, `a ∈ [−1, 1]`.
pub fn disk_lambda2(alpha: f64) -> Result<f64> {
    let x = excited_root(alpha)?;
    Ok(x * x)
}

/// First Robin eigenvalue `λ₁(𝔻; a)`, `a ≥ −5`.
pub fn disk_lambda1(alpha: f64) -> Result<f64> {
    if !(alpha >= -5.0) || !alpha.is_finite() {
        return Err(Error::Range {
            value: alpha,
            range: "disk Robin parameter >= -5",
        });
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    if alpha > 0.0 {
        let j01 = first_zero_j0();
        let x = bisect(|x| -x * j1(x) + alpha * j0(x), 0.0, j01, ROOT_TOL)?;
        Ok(x * x)
    } else {
        let f = |k: f64| {
            k * bessel_i(1, k).expect("in range") + alpha * bessel_i(0, k).expect("in range")
        };
        let k = bisect(f, 0.0, 50.0, ROOT_TOL)?;
        Ok(-k * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Ground,
    Excited,
}

/// Radial profile `φ(r) = r^s Σ cₖ r^{2k}` (`s = 1` for the excited mode).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    odd: bool,
    coeffs: Vec<f64>,
}

impl RadialProfile {
    /// Excited-mode profile `g(r) = (2/x) J₁(x r)`, normalized by `g'(0) = 1`.
    fn excited(x: f64) -> Self {
        let y = 0.25 * x * x;
        let mut coeffs = Vec::with_capacity(SERIES_TERMS);
        let mut c = 1.0;
        coeffs.push(c);
        for k in 1..SERIES_TERMS {
            let kf = k as f64;
            c *= -y / (kf * (kf + 1.0));
            if c.abs() < 1e-19 {
                break;
            }
            coeffs.push(c);
        }
        Self { odd: true, coeffs }
    }

    /// Ground profile `J₀(x r)` (sign −1) or `I₀(k r)` (sign +1), height 1 at 0.
    fn ground(x: f64, sign: f64) -> Self {
        let y = 0.25 * x * x;
        let mut coeffs = vec![1.0];
        let mut c = 1.0;
        for k in 1..4 * SERIES_TERMS {
            let kf = k as f64;
            c *= sign * y / (kf * kf);
            if c.abs() < 1e-19 * coeffs.iter().map(|v: &f64| v.abs()).fold(0.0, f64::max) {
                break;
            }
            coeffs.push(c);
        }
        Self { odd: false, coeffs }
    }

    #[inline]
    fn even_part(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    /// `φ(r)`.
    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        let e = self.even_part(r * r);
        if self.odd {
            r * e
        } else {
            e
        }
    }

    /// `φ(r)/r` for the excited profile (smooth at 0, equal to `g'(0) = 1` there).
    #[inline]
    pub fn value_over_r(&self, r: f64) -> f64 {
        debug_assert!(self.odd);
        self.even_part(r * r)
    }

    /// `φ'(r)`.
    pub fn derivative(&self, r: f64) -> f64 {
        let s = r * r;
        if self.odd {
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, c)| acc * s + (2 * k + 1) as f64 * c)
        } else {
            // d/dr Σ cₖ r^{2k} = r Σ 2k cₖ r^{2k−2}
            let inner = self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * s + 2.0 * k as f64 * c);
            r * inner
        }
    }
}

/// A disk Robin mode with its eigenvalue and radial profile.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskMode {
    pub alpha: f64,
    pub lambda: f64,
    pub kind: ModeKind,
    pub profile: RadialProfile,
}

impl DiskMode {
    /// Second eigenmode `g(r) e^{iθ}` for `a ∈ [−1, 1]`.
    pub fn excited(alpha: f64) -> Result<Self> {
        let x = excited_root(alpha)?;
        Ok(Self {
            alpha,
            lambda: x * x,
            kind: ModeKind::Excited,
            profile: RadialProfile::excited(x),
        })
    }

    /// Ground state, radial and height 1 at the center.
    pub fn ground(alpha: f64) -> Result<Self> {
        let lambda = disk_lambda1(alpha)?;
        let profile = if lambda >= 0.0 {
            RadialProfile::ground(lambda.sqrt(), -1.0)
        } else {
            RadialProfile::ground((-lambda).sqrt(), 1.0)
        };
        Ok(Self {
            alpha,
            lambda,
            kind: ModeKind::Ground,
            profile,
        })
    }

    /// `g(1)` (or the ground profile at the boundary).
    pub fn boundary_value(&self) -> f64 {
        self.profile.value(1.0)
    }

    /// The excited eigenfunction `v(z) = g(|z|) z/|z|`, with `v(0) = 0`.
    #[inline]
    pub fn eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        z * self.profile.value_over_r(z.norm())
    }
}

/// Radial profile `g(r)` of the second eigenfunction.
pub fn disk_g(alpha: f64, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Range {
            value: r,
            range: "radius in [0, 1]",
        });
    }
    if alpha == -1.0 {
        return Ok(r);
    }
    Ok(DiskMode::excited(alpha)?.profile.value(r))
}

/// Energies of `v = g(r) e^{iθ}` on the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEnergies {
    /// `∫_𝔻 |∇v|² = 2π ∫₀¹ (g'² + g²/r²) r dr`.
    pub dirichlet: f64,
    /// `∫_𝔻 |v|² = 2π ∫₀¹ g² r dr`.
    pub mass: f64,
    /// `g(1)²`, the value of `|v|²` on the boundary.
    pub boundary: f64,
}

impl ModeEnergies {
    /// Residual of `λ₂ · mass = dirichlet + 2π a g(1)²`.
    pub fn identity_residual(&self, alpha: f64, lambda: f64) -> f64 {
        lambda * self.mass - self.dirichlet - 2.0 * PI * alpha * self.boundary
    }
}

/// Mode energies by adaptive quadrature (relative error below `10⁻⁸`).
pub fn disk_mode_energies(alpha: f64) -> Result<ModeEnergies> {
    let mode = DiskMode::excited(alpha)?;
    let g = &mode.profile;
    let dirichlet = 2.0
        * PI
        * integrate(
            |r| {
                let d = g.derivative(r);
                let q = g.value_over_r(r);
                (d * d + q * q) * r
            },
            0.0,
            1.0,
            1e-13,
        );
    let mass = 2.0 * PI * integrate(|r| g.value(r).powi(2) * r, 0.0, 1.0, 1e-13);
    let g1 = g.value(1.0);
    Ok(ModeEnergies {
        dirichlet,
        mass,
        boundary: g1 * g1,
    })
}
