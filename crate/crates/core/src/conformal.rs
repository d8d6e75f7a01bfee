//! Closed-form conformal maps of the disk, halfplane and slit plane.
//!
//! * [`Moebius`]: the disk automorphisms `M_w(z) = (z + w)/(z w̄ + 1)`.
//! * [`reflect`]: reflection across the diameter perpendicular to `p ∈ S¹`.
//! * [`halfplane_to_disk`] / [`disk_to_halfplane`]: `W(z) = (i − z)/(i + z)`.
//! * [`slit_map`] / [`slit_map_inverse`]: `S(z) = 2z/(z² + 1)` onto the doubly-slit plane.
//! * [`halfdisk_map`]: `H_r(z) = r S⁻¹(2z/r)` from the upper halfplane onto the halfdisk of radius `r`.
//!
//! The checked free functions validate their arguments; the `*_unchecked`
//! variants are used on hot quadrature paths where inputs are known to be valid.

use num_complex::Complex64;

use crate::{Error, Result};

/// Slack allowed when testing closed-set membership (`|z| ≤ 1`, `Im z ≥ 0`).
pub const DOMAIN_TOL: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this modulus `S⁻¹` switches to its odd Taylor series.
const SLIT_SERIES_RADIUS: f64 = 1e-4;

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn check_finite(z: Complex64) -> Result<()> {
    if finite(z) {
        Ok(())
    } else {
        Err(Error::Domain(z, "non-finite coordinates"))
    }
}

fn check_closed_disk(z: Complex64) -> Result<()> {
    check_finite(z)?;
    if z.norm() > 1.0 + DOMAIN_TOL {
        return Err(Error::Domain(z, "|z| > 1"));
    }
    Ok(())
}

/// Möbius self-map of the closed disk, `M_w(z) = (z + w)/(z w̄ + 1)`.
///
/// `|w| = 1` is admitted and gives the constant map `z ↦ w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moebius {
    w: Complex64,
}

impl Moebius {
    pub fn new(w: Complex64) -> Result<Self> {
        check_closed_disk(w)?;
        Ok(Self { w })
    }

    /// The identity map `M_0`.
    pub fn identity() -> Self {
        Self {
            w: Complex64::new(0.0, 0.0),
        }
    }

    pub fn param(&self) -> Complex64 {
        self.w
    }

    /// `M_{−w} = M_w⁻¹`.
    pub fn inverse(&self) -> Self {
        Self { w: -self.w }
    }

    /// `true` when `|w| = 1` (up to [`DOMAIN_TOL`]), i.e. the map is constant.
    pub fn is_degenerate(&self) -> bool {
        (self.w.norm() - 1.0).abs() <= DOMAIN_TOL
    }

    #[inline]
    pub fn apply_unchecked(&self, z: Complex64) -> Complex64 {
        mobius(self.w, z)
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        check_closed_disk(z)?;
        if self.is_degenerate() {
            if (z + self.w).norm() <= DOMAIN_TOL {
                return Err(Error::Indeterminate(z));
            }
            return Ok(self.w);
        }
        Ok(mobius(self.w, z))
    }
}

/// Raw formula `(z + w)/(z w̄ + 1)` without validation.
#[inline]
pub fn mobius(w: Complex64, z: Complex64) -> Complex64 {
    (z + w) / (z * w.conj() + ONE)
}

/// Checked `M_w(z)`.
pub fn moebius_apply(w: Complex64, z: Complex64) -> Result<Complex64> {
    Moebius::new(w)?.apply(z)
}

/// Reflection `R_p(z) = −p² z̄` across the line through the origin perpendicular to `p`.
pub fn reflect(p: Complex64, z: Complex64) -> Result<Complex64> {
    check_finite(p)?;
    check_finite(z)?;
    if (p.norm() - 1.0).abs() > DOMAIN_TOL {
        return Err(Error::Domain(p, "reflection axis must lie on the unit circle"));
    }
    Ok(reflect_unchecked(p, z))
}

#[inline]
pub fn reflect_unchecked(p: Complex64, z: Complex64) -> Complex64 {
    -(p * p) * z.conj()
}

/// `W(z) = (i − z)/(i + z)`, closed upper halfplane onto the closed disk.
pub fn halfplane_to_disk(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    if z.im < -DOMAIN_TOL {
        return Err(Error::Domain(z, "Im z < 0"));
    }
    let den = I + z;
    if den.norm() == 0.0 {
        return Err(Error::Pole(z));
    }
    Ok((I - z) / den)
}

/// `W⁻¹(z) = i(1 − z)/(1 + z)`, closed disk minus `−1` onto the closed halfplane.
pub fn disk_to_halfplane(z: Complex64) -> Result<Complex64> {
    check_closed_disk(z)?;
    let den = ONE + z;
    if den.norm() <= f64::EPSILON {
        return Err(Error::Pole(z));
    }
    Ok(I * (ONE - z) / den)
}

#[inline]
pub(crate) fn halfplane_to_disk_unchecked(z: Complex64) -> Complex64 {
    (I - z) / (I + z)
}

#[inline]
pub(crate) fn disk_to_halfplane_unchecked(z: Complex64) -> Complex64 {
    I * (ONE - z) / (ONE + z)
}

/// `S(z) = 2z/(z² + 1)`, the disk onto `ℂ ∖ ((−∞,−1] ∪ [1,∞))`.
pub fn slit_map(z: Complex64) -> Result<Complex64> {
    check_closed_disk(z)?;
    let den = z * z + ONE;
    if den.norm() <= f64::EPSILON {
        return Err(Error::Pole(z));
    }
    Ok(2.0 * z / den)
}

#[inline]
pub(crate) fn slit_map_unchecked(z: Complex64) -> Complex64 {
    2.0 * z / (z * z + ONE)
}

/// Root of `w z² − 2z + w = 0` of smaller modulus; the two roots have product 1.
#[inline]
fn slit_root(w: Complex64) -> Complex64 {
    if w.norm() < SLIT_SERIES_RADIUS {
        let w2 = w * w;
        return w * (0.5 + w2 * (0.125 + w2 / 16.0));
    }
    // Re √(1 − w²) ≥ 0 keeps |1 + s| ≥ 1, so the division is well conditioned.
    let s = (ONE - w * w).sqrt();
    let c = w / (ONE + s);
    if c.norm() > 1.0 {
        c.inv()
    } else {
        c
    }
}

/// `S⁻¹(w)`, the preimage in the open disk.
///
/// Fails with [`Error::Branch`] when both roots lie on the unit circle, which
/// happens exactly on the slits.
pub fn slit_map_inverse(w: Complex64) -> Result<Complex64> {
    check_finite(w)?;
    let z = slit_root(w);
    if z.norm() >= 1.0 - 1e-12 {
        return Err(Error::Branch(w));
    }
    Ok(z)
}

/// `S⁻¹` extended to the slits as the limit from the upper halfplane.
#[inline]
pub(crate) fn slit_inverse_upper(w: Complex64) -> Complex64 {
    let z = slit_root(w);
    if (z.norm() - 1.0).abs() <= 1e-10 && z.im < 0.0 {
        z.conj()
    } else {
        z
    }
}

/// `H_r(z) = r S⁻¹(2z/r)` from the closed upper halfplane onto the closed
/// halfdisk of radius `r`. On the real axis the upper limit is taken, so
/// `H_r(±r/2) = ±r`.
pub fn halfdisk_map(r: f64, z: Complex64) -> Result<Complex64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("halfdisk radius {r}")));
    }
    check_finite(z)?;
    if z.im < -DOMAIN_TOL {
        return Err(Error::Domain(z, "Im z < 0"));
    }
    Ok(halfdisk_map_unchecked(r, z))
}

#[inline]
pub(crate) fn halfdisk_map_unchecked(r: f64, z: Complex64) -> Complex64 {
    r * slit_inverse_upper(2.0 * z / r)
}

/// `H_r⁻¹(ζ) = (r/2) S(ζ/r)`, halfdisk back onto the halfplane.
pub fn halfdisk_map_inverse(r: f64, zeta: Complex64) -> Result<Complex64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("halfdisk radius {r}")));
    }
    check_finite(zeta)?;
    if zeta.norm() > r * (1.0 + DOMAIN_TOL) || zeta.im < -DOMAIN_TOL * r {
        return Err(Error::Domain(zeta, "outside the closed halfdisk"));
    }
    let x = zeta / r;
    let den = x * x + ONE;
    if den.norm() <= f64::EPSILON {
        return Err(Error::Pole(zeta));
    }
    Ok(0.5 * r * slit_map_unchecked(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} vs {b}");
    }

    #[test]
    fn moebius_basic_values() {
        close(moebius_apply(c(0.5, 0.0), c(0.0, 0.0)).unwrap(), c(0.5, 0.0), 1e-15);
        close(moebius_apply(c(0.5, 0.0), c(-0.5, 0.0)).unwrap(), c(0.0, 0.0), 1e-15);
        let w = c(0.3, 0.2);
        let z = c(0.1, -0.4);
        let m = Moebius::new(w).unwrap();
        close(m.inverse().apply(m.apply(z).unwrap()).unwrap(), z, 1e-15);
    }

    #[test]
    fn moebius_errors() {
        let p = c(0.0, 1.0);
        assert!(matches!(moebius_apply(p, -p), Err(Error::Indeterminate(_))));
        assert_eq!(moebius_apply(p, c(0.2, 0.1)).unwrap(), p);
        assert!(matches!(moebius_apply(c(0.1, 0.0), c(1.5, 0.0)), Err(Error::Domain(..))));
        assert!(Moebius::new(c(1.2, 0.0)).is_err());
        assert!(Moebius::new(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn reflection_values() {
        let z = c(0.3, -0.7);
        close(reflect(c(1.0, 0.0), z).unwrap(), c(-0.3, -0.7), 1e-15);
        close(reflect(c(0.0, 1.0), z).unwrap(), c(0.3, 0.7), 1e-15);
        let p = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        close(reflect(p, c(1.0, 0.0)).unwrap(), c(0.0, -1.0), 1e-15);
        assert!(reflect(c(0.5, 0.0), z).is_err());
    }

    #[test]
    fn wrap_map_values() {
        close(halfplane_to_disk(c(0.0, 0.0)).unwrap(), c(1.0, 0.0), 1e-15);
        close(halfplane_to_disk(c(0.0, 1.0)).unwrap(), c(0.0, 0.0), 1e-15);
        close(halfplane_to_disk(c(1.0, 0.0)).unwrap(), c(0.0, 1.0), 1e-15);
        close(halfplane_to_disk(c(-1.0, 0.0)).unwrap(), c(0.0, -1.0), 1e-15);
        assert!(halfplane_to_disk(c(0.0, -0.5)).is_err());
        assert!(matches!(disk_to_halfplane(c(-1.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn third_moebius_is_halving_in_halfplane() {
        let z = c(2.0, 3.0);
        let m = Moebius::new(c(1.0 / 3.0, 0.0)).unwrap();
        let back = disk_to_halfplane(m.apply(halfplane_to_disk(z).unwrap()).unwrap()).unwrap();
        close(back, z / 2.0, 1e-12);
    }

    #[test]
    fn slit_map_values() {
        close(slit_map(c(1.0, 0.0)).unwrap(), c(1.0, 0.0), 1e-15);
        close(slit_map(c(-1.0, 0.0)).unwrap(), c(-1.0, 0.0), 1e-15);
        assert_eq!(slit_map_inverse(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let h = 1e-7;
        let d = slit_map_inverse(c(h, 0.0)).unwrap() / h;
        assert_abs_diff_eq!(d.re, 0.5, epsilon = 1e-12);
        let expected = c(0.0, (5f64.sqrt() - 1.0) / 2.0);
        close(slit_map_inverse(c(0.0, 2.0)).unwrap(), expected, 1e-14);
        assert!(matches!(slit_map_inverse(c(2.0, 0.0)), Err(Error::Branch(_))));
        assert!(matches!(slit_map_inverse(c(-1.0, 0.0)), Err(Error::Branch(_))));
    }

    #[test]
    fn slit_series_matches_closed_form_at_switch() {
        let w = c(1.0001e-4, 0.3e-4);
        let s = (ONE - w * w).sqrt();
        let closed = (ONE - s) / w;
        let series = w * (0.5 + w * w * (0.125 + w * w / 16.0));
        close(closed, series, 1e-12);
    }

    #[test]
    fn halfdisk_values() {
        let r = 2.5;
        close(halfdisk_map(r, c(0.0, 0.0)).unwrap(), c(0.0, 0.0), 1e-15);
        close(halfdisk_map(r, c(r / 2.0, 0.0)).unwrap(), c(r, 0.0), 1e-12);
        close(halfdisk_map(r, c(-r / 2.0, 0.0)).unwrap(), c(-r, 0.0), 1e-12);
        let z = c(1.0, 1.0);
        assert!((halfdisk_map(1e6, z).unwrap() - z).norm() < 1e-5);
        close(
            halfdisk_map(1.0, c(0.0, 1.0)).unwrap(),
            c(0.0, (5f64.sqrt() - 1.0) / 2.0),
            1e-14,
        );
        assert!(halfdisk_map(1.0, c(0.2, -0.1)).is_err());
        assert!(halfdisk_map(0.0, c(0.2, 0.1)).is_err());
        // real-axis points beyond r/2 land on the upper semicircle
        let edge = halfdisk_map(1.0, c(0.9, 0.0)).unwrap();
        assert_abs_diff_eq!(edge.norm(), 1.0, epsilon = 1e-12);
        assert!(edge.im >= 0.0);
    }
}
