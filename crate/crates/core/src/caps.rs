//! Hyperbolic caps `C_{p,t} = M_{−pt}(C_{p,0})`, their hyperbolic reflections,
//! conformal cap maps `K_{p,t}: 𝔻 → C_{p,t}` with inverses, and fold maps.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::conformal::{
    disk_to_halfplane_unchecked, halfdisk_map_unchecked, halfplane_to_disk_unchecked, mobius,
    reflect_unchecked, slit_map_unchecked, DOMAIN_TOL,
};
use crate::{Error, Result};

/// Half-width of the band around the geodesic treated as belonging to the cap.
pub const CAP_TOL: f64 = 1e-9;

/// Sizes are kept at least this far from `±1`.
pub const T_MARGIN: f64 = 1e-6;

/// A hyperbolic cap with center `p = e^{i·p_angle}` and size `t ∈ (−1, 1)`.
///
/// Positive `t` gives caps larger than a half-disk; the cap fills the disk as
/// `t → 1` and shrinks to `p` as `t → −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cap {
    p_angle: f64,
    t: f64,
    p: Complex64,
}

impl Cap {
    /// Rejects `|t| ≥ 1`; admissible sizes are clamped to `[−1 + 10⁻⁶, 1 − 10⁻⁶]`.
    pub fn new(p_angle: f64, t: f64) -> Result<Self> {
        if !p_angle.is_finite() {
            return Err(Error::InvalidParameter(format!("cap angle {p_angle}")));
        }
        if !(t.abs() < 1.0) {
            return Err(Error::Range {
                value: t,
                range: "cap size t in (-1, 1)",
            });
        }
        let t = t.clamp(-1.0 + T_MARGIN, 1.0 - T_MARGIN);
        let p_angle = p_angle.rem_euclid(TAU);
        Ok(Self {
            p_angle,
            t,
            p: Complex64::from_polar(1.0, p_angle),
        })
    }

    pub fn p_angle(&self) -> f64 {
        self.p_angle
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The center `p ∈ S¹`.
    pub fn p(&self) -> Complex64 {
        self.p
    }

    /// The complementary cap `C* = C_{−p,−t}`.
    pub fn complement(&self) -> Self {
        Self::new(self.p_angle + std::f64::consts::PI, -self.t).expect("valid cap")
    }

    /// Geodesic endpoints `a = M_{−pt}(ip)`, `b = M_{−pt}(−ip)`.
    pub fn endpoints(&self) -> (Complex64, Complex64) {
        let w = -self.p * self.t;
        let ip = Complex64::i() * self.p;
        (mobius(w, ip), mobius(w, -ip))
    }

    /// Signed position relative to the geodesic: `Re(M_{pt}(z)·p̄)`.
    /// Nonnegative inside the cap, zero on `γ`.
    #[inline]
    pub fn side(&self, z: Complex64) -> f64 {
        (mobius(self.p * self.t, z) * self.p.conj()).re
    }

    /// Membership in the closed cap, with a [`CAP_TOL`] band around `γ`.
    pub fn contains(&self, z: Complex64) -> bool {
        self.side(z) >= -CAP_TOL
    }

    /// Hyperbolic reflection `τ_{p,t} = M_{−pt} ∘ R_p ∘ M_{pt}`.
    #[inline]
    pub fn reflection(&self, z: Complex64) -> Complex64 {
        let w = self.p * self.t;
        mobius(-w, reflect_unchecked(self.p, mobius(w, z)))
    }

    /// Fold of the disk onto the cap across `γ`: identity on `C`, `τ` on `C*`.
    #[inline]
    pub fn fold(&self, z: Complex64) -> Complex64 {
        if self.side(z) >= 0.0 {
            z
        } else {
            self.reflection(z)
        }
    }

    /// Radius `r(t)` of the halfdisk `W⁻¹(C_{1,|t|})`.
    pub fn radius(&self) -> f64 {
        cap_radius_param(self.t.abs())
    }

    /// Conformal cap map `K_{p,t}: 𝔻 → C_{p,t}`, extended to the closed disk.
    pub fn map(&self, z: Complex64) -> Complex64 {
        if self.t >= 0.0 {
            big_cap_map(self.p, self.t, z)
        } else {
            let inner = big_cap_map(self.p, -self.t, z);
            self.reflection(reflect_unchecked(self.p, inner))
        }
    }

    /// `G_C = K_C⁻¹: C → 𝔻`. Points within [`CAP_TOL`] outside the cap are
    /// projected onto `γ` first.
    pub fn map_inverse(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1.0 + DOMAIN_TOL {
            return Err(Error::Domain(z, "outside the closed disk"));
        }
        let side = self.side(z);
        if side < -CAP_TOL {
            return Err(Error::Domain(z, "outside the cap"));
        }
        Ok(self.map_inverse_unchecked(z))
    }

    /// [`Cap::map_inverse`] without validation; projects onto `γ` when `z`
    /// sits slightly on the wrong side.
    #[inline]
    pub fn map_inverse_unchecked(&self, z: Complex64) -> Complex64 {
        let z = self.project(z);
        if self.t >= 0.0 {
            big_cap_inverse(self.p, self.t, z)
        } else {
            let back = reflect_unchecked(self.p, self.reflection(z));
            big_cap_inverse(self.p, -self.t, back)
        }
    }

    /// `G_C ∘ F_C`: folds onto the cap and maps back to the disk.
    #[inline]
    pub fn fold_to_disk(&self, z: Complex64) -> Complex64 {
        self.map_inverse_unchecked(self.fold(z))
    }

    #[inline]
    fn project(&self, z: Complex64) -> Complex64 {
        let w = self.p * self.t;
        let zeta = mobius(w, z);
        let s = (zeta * self.p.conj()).re;
        if s >= 0.0 {
            z
        } else {
            mobius(-w, zeta - s * self.p)
        }
    }
}

/// `r(t) = |W⁻¹(M_{−t}(i))| = (1 + t)/(1 − t)`.
pub fn cap_radius_param(t: f64) -> f64 {
    (1.0 + t) / (1.0 - t)
}

/// `K_{p,t} = p · W ∘ H_r ∘ W⁻¹ · p̄` for `t ≥ 0`.
#[inline]
fn big_cap_map(p: Complex64, t: f64, z: Complex64) -> Complex64 {
    let x = z * p.conj();
    if (x + 1.0).norm() <= 1e-14 {
        // W⁻¹(−1) = ∞ and H_r(∞) = ir, whose image under W is −t.
        return -t * p;
    }
    let r = cap_radius_param(t);
    let h = halfdisk_map_unchecked(r, disk_to_halfplane_unchecked(x));
    p * halfplane_to_disk_unchecked(h)
}

#[inline]
fn big_cap_inverse(p: Complex64, t: f64, z: Complex64) -> Complex64 {
    let x = z * p.conj();
    if (x + 1.0).norm() <= 1e-14 {
        return -p;
    }
    let r = cap_radius_param(t);
    let zeta = disk_to_halfplane_unchecked(x) / r;
    let den = zeta * zeta + 1.0;
    if den.norm() <= 1e-14 {
        // the midpoint of γ, sent to ∞ in the halfplane and to −1 in the disk
        return -p;
    }
    let h = 0.5 * r * slit_map_unchecked(zeta);
    p * halfplane_to_disk_unchecked(h)
}

/// Checked `cap_contains` for points of the closed disk.
pub fn cap_contains(cap: &Cap, z: Complex64) -> Result<bool> {
    if z.norm() > 1.0 + DOMAIN_TOL {
        return Err(Error::Domain(z, "|z| > 1"));
    }
    Ok(cap.contains(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{mobius, reflect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_disk_points(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let r = radius * rng.random::<f64>().sqrt();
                Complex64::from_polar(r, rng.random::<f64>() * TAU)
            })
            .collect()
    }

    #[test]
    fn constructor_rejects_and_clamps() {
        assert!(Cap::new(0.0, 1.0).is_err());
        assert!(Cap::new(0.0, -1.0).is_err());
        assert!(Cap::new(0.0, f64::NAN).is_err());
        let cap = Cap::new(-0.5, 0.9999999).unwrap();
        assert_eq!(cap.t(), 1.0 - T_MARGIN);
        assert!((cap.p_angle() - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn containment_examples() {
        let half = Cap::new(0.0, 0.0).unwrap();
        assert!(half.contains(c(0.5, 0.0)));
        assert!(!half.contains(c(-0.5, 0.0)));
        assert!(Cap::new(0.0, 0.5).unwrap().contains(c(0.0, 0.0)));
        assert!(cap_contains(&half, c(2.0, 0.0)).is_err());
    }

    #[test]
    fn reflection_examples() {
        let half = Cap::new(0.0, 0.0).unwrap();
        let z = c(0.3, 0.4);
        assert!((half.reflection(z) - reflect(c(1.0, 0.0), z).unwrap()).norm() < 1e-15);

        let cap = Cap::new(0.0, 0.3).unwrap();
        for k in 0..21 {
            let y = -0.95 + 0.095 * k as f64;
            let on_geodesic = mobius(c(-0.3, 0.0), c(0.0, y));
            assert!(cap.side(on_geodesic).abs() < 1e-14);
            assert!((cap.reflection(on_geodesic) - on_geodesic).norm() < 1e-12);
        }
        for z in random_disk_points(200, 1.0, 3) {
            assert!((cap.reflection(cap.reflection(z)) - z).norm() < 1e-12);
        }
    }

    #[test]
    fn reflection_swaps_cap_and_complement() {
        let cap = Cap::new(1.1, -0.4).unwrap();
        for z in random_disk_points(200, 0.99, 5) {
            let s = cap.side(z);
            if s.abs() > 1e-6 {
                assert_eq!(cap.side(cap.reflection(z)) > 0.0, s < 0.0);
            }
        }
    }

    #[test]
    fn radius_examples() {
        assert!((cap_radius_param(0.0) - 1.0).abs() < 1e-15);
        assert!(cap_radius_param(0.99) > 100.0);
        // closed form vs the defining expression |W⁻¹(M_{−t}(i))|
        for k in 0..19 {
            let t = -0.9 + 0.1 * k as f64;
            let defining = disk_to_halfplane_unchecked(mobius(c(-t, 0.0), c(0.0, 1.0))).norm();
            assert!((defining - cap_radius_param(t)).abs() < 1e-12 * defining.max(1.0));
            assert!((cap_radius_param(t) * cap_radius_param(-t) - 1.0).abs() < 1e-13);
        }
        let mut prev = 0.0;
        for k in 0..100 {
            let r = cap_radius_param(-0.99 + 0.02 * k as f64);
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn map_examples() {
        let cap = Cap::new(0.0, 0.4).unwrap();
        assert!((cap.map(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-12);
        let half = Cap::new(0.0, 0.0).unwrap();
        assert!((half.map(c(0.0, 0.0)) - c(5f64.sqrt() - 2.0, 0.0)).norm() < 1e-14);
        let big = Cap::new(0.0, 0.999).unwrap();
        let z = c(0.3, 0.1);
        assert!((big.map(z) - z).norm() < 1e-2);
    }

    #[test]
    fn map_lands_in_cap() {
        for (angle, t) in [(0.0, 0.0), (0.7, 0.5), (2.0, -0.6), (4.0, 0.95), (5.5, -0.95)] {
            let cap = Cap::new(angle, t).unwrap();
            for z in random_disk_points(300, 0.999, 11) {
                assert!(cap.side(cap.map(z)) >= -1e-12, "cap ({angle},{t}) z={z}");
            }
            assert!((cap.map(cap.p()) - cap.p()).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_examples() {
        let half = Cap::new(0.0, 0.0).unwrap();
        let g = half.map_inverse(c(5f64.sqrt() - 2.0, 0.0)).unwrap();
        assert!(g.norm() < 1e-14);
        for (angle, t) in [(0.0, 0.4), (1.3, -0.7), (3.0, 0.0), (6.0, 0.9)] {
            let cap = Cap::new(angle, t).unwrap();
            assert!((cap.map_inverse(cap.p()).unwrap() - cap.p()).norm() < 1e-10);
            for z in random_disk_points(100, 0.98, 7) {
                let k = cap.map(z);
                let back = cap.map_inverse(k).unwrap();
                assert!((back - z).norm() < 1e-10, "G(K(z)) at {z}: {back}");
                let inside = cap.map_inverse_unchecked(cap.fold(z));
                assert!((cap.map(inside) - cap.fold(z)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn inverse_rejects_points_outside() {
        let half = Cap::new(0.0, 0.0).unwrap();
        assert!(half.map_inverse(c(-0.5, 0.0)).is_err());
        // inside the tolerance band: projected onto γ
        let g = half.map_inverse(c(-1e-10, 0.3)).unwrap();
        assert!((half.map(g) - c(0.0, 0.3)).norm() < 1e-9);
        assert!(half.map_inverse(c(1.5, 0.0)).is_err());
    }

    #[test]
    fn fold_examples() {
        let half = Cap::new(0.0, 0.0).unwrap();
        assert_eq!(half.fold(c(0.5, 0.0)), c(0.5, 0.0));
        assert!((half.fold(c(-0.5, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
        let cap = Cap::new(2.2, -0.3).unwrap();
        for z in random_disk_points(300, 1.0, 9) {
            let f = cap.fold(z);
            assert!(cap.contains(f));
            assert!((cap.fold(f) - f).norm() < 1e-12);
        }
    }

    #[test]
    fn endpoints_on_circle_and_geodesic() {
        let cap = Cap::new(0.8, 0.35).unwrap();
        let (a, b) = cap.endpoints();
        assert!((a.norm() - 1.0).abs() < 1e-14 && (b.norm() - 1.0).abs() < 1e-14);
        assert!(cap.side(a).abs() < 1e-12 && cap.side(b).abs() < 1e-12);
        let zero = Cap::new(0.8, 0.0).unwrap().endpoints();
        assert!((zero.0 - Complex64::i() * cap.p()).norm() < 1e-15);
    }

    #[test]
    fn endpoint_normalization() {
        // K has a square-root corner at the preimage of each endpoint, so
        // rounding of the f64 argument alone costs about 1e-8 there
        for (angle, t) in [(0.0, 0.0), (0.7, 0.5), (4.0, 0.9)] {
            let cap = Cap::new(angle, t).unwrap();
            let (a, b) = cap.endpoints();
            let w = cap.p() / 3.0;
            assert!((cap.map(mobius(w, a)) - a).norm() < 5e-8);
            assert!((cap.map(mobius(w, b)) - b).norm() < 5e-8);
            assert!((cap.map(cap.p()) - cap.p()).norm() < 1e-12);
        }
    }
}
