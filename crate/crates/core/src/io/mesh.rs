//! Uniform tessellation and STL/OBJ export.

use std::io::Write;

use crate::bspline::BSplineSurface;
use crate::error::{Error, Result};
use crate::point::Point3;
use crate::scalar::Real;

/// Vertices on a uniform `nu × nv` parameter grid; vertex `(i, j)` has
/// index `i * nv + j` with `i` along `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct TessellationGrid<T> {
    pub nu: usize,
    pub nv: usize,
    pub params: Vec<(T, T)>,
    pub vertices: Vec<Point3<T>>,
    pub triangles: Vec<[usize; 3]>,
}

impl<T: Real> TessellationGrid<T> {
    pub fn area(&self) -> T {
        self.triangles.iter().map(|t| self.triangle_normal(t).norm() * T::lit(0.5)).sum()
    }

    /// Unnormalized normal `(b − a) × (c − a)`.
    fn triangle_normal(&self, t: &[usize; 3]) -> Point3<T> {
        let [a, b, c] = t.map(|i| self.vertices[i]);
        (b - a).cross(&(c - a))
    }
}

/// Samples `surface` on a uniform grid and splits each quad along the
/// diagonal from its lower-left to its upper-right corner.
pub fn tessellate<T: Real>(surface: &BSplineSurface<T>, nu: usize, nv: usize) -> Result<TessellationGrid<T>> {
    if nu < 2 || nv < 2 {
        return Err(Error::invalid(format!("tessellation needs at least 2x2 vertices, got {nu}x{nv}")));
    }
    let (u0, u1) = surface.domain_u();
    let (v0, v1) = surface.domain_v();
    let at = |a: T, b: T, i: usize, n: usize| {
        if i + 1 == n {
            b
        } else {
            a + (b - a) * T::from_count(i) / T::from_count(n - 1)
        }
    };
    let mut params = Vec::with_capacity(nu * nv);
    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = at(u0, u1, i, nu);
        for j in 0..nv {
            let v = at(v0, v1, j, nv);
            params.push((u, v));
            vertices.push(surface.point_at(u, v));
        }
    }
    let mut triangles = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let a = i * nv + j;
            let b = (i + 1) * nv + j;
            let c = (i + 1) * nv + j + 1;
            let d = i * nv + j + 1;
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    Ok(TessellationGrid { nu, nv, params, vertices, triangles })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    StlAscii,
    Obj,
}

/// `%.8e` as C's printf writes it: nine significant digits and a signed
/// two-digit exponent. Negative zero prints as zero.
pub fn format_sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.8e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn triple<T: Real>(p: &Point3<T>) -> String {
    format!("{} {} {}", format_sci(p.x().as_f64()), format_sci(p.y().as_f64()), format_sci(p.z().as_f64()))
}

/// Writes the mesh to `sink`. Output depends only on the grid.
pub fn export_mesh<T: Real>(grid: &TessellationGrid<T>, format: MeshFormat, sink: &mut impl Write) -> Result<()> {
    if grid.vertices.is_empty() || grid.triangles.is_empty() {
        return Err(Error::invalid("cannot export an empty mesh"));
    }
    let mut out = String::new();
    match format {
        MeshFormat::StlAscii => {
            out.push_str("solid gordon\n");
            for t in &grid.triangles {
                let n = grid.triangle_normal(t).normalized(T::zero()).unwrap_or_else(Point3::zero);
                out.push_str(&format!("  facet normal {}\n    outer loop\n", triple(&n)));
                for &i in t {
                    out.push_str(&format!("      vertex {}\n", triple(&grid.vertices[i])));
                }
                out.push_str("    endloop\n  endfacet\n");
            }
            out.push_str("endsolid gordon\n");
        }
        MeshFormat::Obj => {
            for v in &grid.vertices {
                out.push_str(&format!("v {}\n", triple(v)));
            }
            for t in &grid.triangles {
                out.push_str(&format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1));
            }
        }
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}
