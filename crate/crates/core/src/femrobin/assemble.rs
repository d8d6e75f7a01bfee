//! P1 assembly of the weighted Robin forms.

use num_complex::Complex64;

use super::band::BandMatrix;
use super::mesh::Mesh;
use super::WeightedRobinProblem;
use crate::quadrature::{EDGE_2PT, TRIANGLE_3PT};
use crate::{Error, Result};

/// The three assembled forms: `∫ρ∇u·∇v`, `∫_∂ β u v` and `∫ω u v`.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub stiffness: BandMatrix,
    pub boundary: BandMatrix,
    pub mass: BandMatrix,
}

impl Assembled {
    /// `K = stiffness + boundary`.
    pub fn k(&self) -> BandMatrix {
        self.stiffness.combine(1.0, &self.boundary, 1.0)
    }

    /// `uᵀKu / uᵀMu`.
    pub fn rayleigh(&self, u: &[f64]) -> Result<f64> {
        let den = self.mass.quad_form(u);
        if !(den > 0.0) {
            return Err(Error::ZeroDenominator);
        }
        Ok((self.stiffness.quad_form(u) + self.boundary.quad_form(u)) / den)
    }
}

fn check(which: &'static str, value: f64, at: Complex64, lo: f64, hi: f64, bound: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::WeightBound {
            which,
            value,
            at,
            bound,
        })
    }
}

/// Assembles stiffness, boundary and mass matrices. Weights are sampled at
/// the quadrature nodes; the boundary weight is sampled at the radial
/// projection of each edge node onto the unit circle.
pub fn assemble(problem: &WeightedRobinProblem, mesh: &Mesh) -> Result<Assembled> {
    let n = mesh.n_vertices();
    let bw = mesh.bandwidth();
    let a = problem.bound();
    let inv_a = 1.0 / a;
    // tolerate rounding in weights that sit exactly on the bound
    let slack = 1e-12 * a;
    let mut stiffness = BandMatrix::zeros(n, bw);
    let mut mass = BandMatrix::zeros(n, bw);
    let mut boundary = BandMatrix::zeros(n, bw);

    for t in &mesh.triangles {
        let p = [mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]];
        let area = 0.5 * ((p[1] - p[0]).re * (p[2] - p[0]).im - (p[1] - p[0]).im * (p[2] - p[0]).re);
        let grads: [(f64, f64); 3] = std::array::from_fn(|i| {
            let a = p[(i + 1) % 3];
            let b = p[(i + 2) % 3];
            ((a.im - b.im) / (2.0 * area), (b.re - a.re) / (2.0 * area))
        });
        let mut rho_sum = 0.0;
        let mut local_mass = [[0.0; 3]; 3];
        for bary in &TRIANGLE_3PT {
            let q = p[0] * bary[0] + p[1] * bary[1] + p[2] * bary[2];
            let rho = problem.rho(q);
            check("rho", rho, q, inv_a - slack, a + slack, a)?;
            let omega = problem.omega(q);
            check("omega", omega, q, inv_a - slack, a + slack, a)?;
            rho_sum += rho;
            for i in 0..3 {
                for j in 0..=i {
                    local_mass[i][j] += omega * bary[i] * bary[j];
                }
            }
        }
        let w = area / 3.0;
        for i in 0..3 {
            for j in 0..=i {
                let s = (grads[i].0 * grads[j].0 + grads[i].1 * grads[j].1) * rho_sum * w;
                stiffness.add(t[i], t[j], s);
                mass.add(t[i], t[j], local_mass[i][j] * w);
            }
        }
    }

    for e in &mesh.boundary_edges {
        let (pa, pb) = (mesh.vertices[e[0]], mesh.vertices[e[1]]);
        let len = (pb - pa).norm();
        let mut local = [0.0; 3]; // aa, ab, bb
        for &s in &EDGE_2PT {
            let q = pa * (1.0 - s) + pb * s;
            let q = q / q.norm();
            let beta = problem.beta(q);
            check("beta", beta, q, -a - slack, a + slack, a)?;
            let (fa, fb) = (1.0 - s, s);
            local[0] += beta * fa * fa;
            local[1] += beta * fa * fb;
            local[2] += beta * fb * fb;
        }
        let w = 0.5 * len;
        boundary.add(e[0], e[0], local[0] * w);
        boundary.add(e[1], e[0], local[1] * w);
        boundary.add(e[1], e[1], local[2] * w);
    }

    Ok(Assembled {
        stiffness,
        boundary,
        mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::femrobin::build_disk_mesh;
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn neumann_constants_in_kernel() {
        let mesh = build_disk_mesh(6).unwrap();
        let asm = assemble(&WeightedRobinProblem::constant(0.0), &mesh).unwrap();
        for s in asm.stiffness.row_sums() {
            assert!(s.abs() < 1e-12);
        }
        let ones = vec![1.0; mesh.n_vertices()];
        assert!((asm.mass.quad_form(&ones) - mesh.area()).abs() < 1e-12);
        assert!(asm.rayleigh(&ones).unwrap().abs() < 1e-13);
    }

    #[test]
    fn boundary_form_measures_perimeter() {
        let mesh = build_disk_mesh(8).unwrap();
        let asm = assemble(&WeightedRobinProblem::constant(1.0), &mesh).unwrap();
        let ones = vec![1.0; mesh.n_vertices()];
        let k = 48.0;
        let perim = k * 2.0 * (PI / k).sin();
        assert!((asm.boundary.quad_form(&ones) - perim).abs() < 1e-12);
    }

    #[test]
    fn gradient_energy_of_linear_function() {
        let mesh = build_disk_mesh(5).unwrap();
        let asm = assemble(&WeightedRobinProblem::constant(0.0), &mesh).unwrap();
        let u: Vec<f64> = mesh.vertices.iter().map(|z| z.re).collect();
        // |∇x|² = 1 integrated over the polygon
        assert!((asm.stiffness.quad_form(&u) - mesh.area()).abs() < 1e-12);
    }

    #[test]
    fn weight_bounds_enforced() {
        let mesh = build_disk_mesh(3).unwrap();
        let bad = WeightedRobinProblem::new(
            Arc::new(|_| 1.0),
            Arc::new(|z: Complex64| 1.0 + 10.0 * z.norm()),
            Arc::new(|_| 0.0),
            4.0,
        )
        .unwrap();
        match assemble(&bad, &mesh) {
            Err(Error::WeightBound { which: "omega", .. }) => {}
            other => panic!("{other:?}"),
        }
        let bad_beta = WeightedRobinProblem::new(
            Arc::new(|_| 1.0),
            Arc::new(|_| 1.0),
            Arc::new(|_| -5.0),
            4.0,
        )
        .unwrap();
        assert!(matches!(
            assemble(&bad_beta, &mesh),
            Err(Error::WeightBound { which: "beta", .. })
        ));
    }
}
