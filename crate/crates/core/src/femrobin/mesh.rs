//! Structured polar triangulation of the unit disk.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::{Error, Result};

/// A triangulation of the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Complex64>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// Boundary edges traversed counterclockwise (domain on the left).
    pub boundary_edges: Vec<[usize; 2]>,
    /// Longest edge length.
    pub h: f64,
    n_rings: usize,
}

fn ring_start(k: usize) -> usize {
    if k == 0 {
        0
    } else {
        1 + 3 * k * (k - 1)
    }
}

fn ring_len(k: usize) -> usize {
    if k == 0 {
        1
    } else {
        6 * k
    }
}

fn signed_area(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    0.5 * ((b - a).re * (c - a).im - (b - a).im * (c - a).re)
}

/// Polar mesh with `n_rings` rings: ring `k` has radius `k/n_rings` and `6k`
/// equally spaced vertices. Consecutive rings are stitched by sweeping both
/// in angle.
pub fn build_disk_mesh(n_rings: usize) -> Result<Mesh> {
    if n_rings < 2 {
        return Err(Error::InvalidParameter(format!(
            "mesh needs at least 2 rings, got {n_rings}"
        )));
    }
    let n = n_rings;
    let mut vertices = Vec::with_capacity(ring_start(n + 1));
    vertices.push(Complex64::new(0.0, 0.0));
    for k in 1..=n {
        let r = k as f64 / n as f64;
        let m = ring_len(k);
        for j in 0..m {
            let theta = 2.0 * PI * j as f64 / m as f64;
            vertices.push(Complex64::from_polar(r, theta));
        }
    }

    let mut triangles = Vec::with_capacity(6 * n * n);
    for k in 1..=n {
        let (s0, m0) = (ring_start(k - 1), ring_len(k - 1));
        let (s1, m1) = (ring_start(k), ring_len(k));
        let inner = |i: usize| s0 + i % m0;
        let outer = |j: usize| s1 + j % m1;
        let (mut i, mut j) = (0usize, 0usize);
        while i < m0 || j < m1 {
            // angles as fractions of a turn, exact rationals compared crosswise
            let advance_outer = if i == m0 {
                true
            } else if j == m1 {
                false
            } else {
                (j + 1) * m0 <= (i + 1) * m1
            };
            let tri = if advance_outer {
                let t = [inner(i), outer(j), outer(j + 1)];
                j += 1;
                t
            } else {
                let t = [inner(i), outer(j), inner(i + 1)];
                i += 1;
                t
            };
            if m0 == 1 && tri[0] == tri[2] {
                continue;
            }
            triangles.push(tri);
        }
    }
    for t in &mut triangles {
        if signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) < 0.0 {
            t.swap(1, 2);
        }
    }

    let s = ring_start(n);
    let m = ring_len(n);
    let boundary_edges = (0..m).map(|j| [s + j, s + (j + 1) % m]).collect();

    let mut h: f64 = 0.0;
    for t in &triangles {
        for e in 0..3 {
            h = h.max((vertices[t[e]] - vertices[t[(e + 1) % 3]]).norm());
        }
    }
    Ok(Mesh {
        vertices,
        triangles,
        boundary_edges,
        h,
        n_rings,
    })
}

impl Mesh {
    pub fn n_rings(&self) -> usize {
        self.n_rings
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Signed area of triangle `t`.
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    /// Total area of the polygonal disk.
    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Largest index distance between two vertices sharing a triangle.
    pub fn bandwidth(&self) -> usize {
        self.triangles
            .iter()
            .map(|t| {
                let lo = t.iter().min().unwrap();
                let hi = t.iter().max().unwrap();
                hi - lo
            })
            .max()
            .unwrap_or(0)
    }

    /// Plain-text dump: `v re im`, `t i j k`, `b i j` lines.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        for v in &self.vertices {
            writeln!(out, "v {:.17e} {:.17e}", v.re, v.im)?;
        }
        for t in &self.triangles {
            writeln!(out, "t {} {} {}", t[0], t[1], t[2])?;
        }
        for b in &self.boundary_edges {
            writeln!(out, "b {} {}", b[0], b[1])?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }
}
