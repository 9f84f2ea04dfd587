use num_complex::Complex64;

use crate::assembly::{apply_magnetic, BoundaryMode, HermitianOperator, VertexFunction};
use crate::error::{Error, Result};
use crate::gauge::{realize_one_form, BetaSchedule, EdgeOneForm};
use crate::topology::{vertex_count, LevelGraph};

/// Extends an eigenfunction of the scale-(m-1) operator with eigenvalue
/// `R(z)` to an eigenfunction of the scale-m operator with eigenvalue `z`.
///
/// Functions are in the degree-weighted convention. Values on `V_{m-1}` are
/// kept; a new vertex `x` receives
/// `sum_{y~x} e^{i a(x->y)} f(y) / (deg(x) (1 - z))`.
pub fn extend_eigenfunction(
    f_parent: &VertexFunction,
    z: f64,
    sched: &BetaSchedule,
    g: &LevelGraph,
) -> Result<VertexFunction> {
    extend_with_form(f_parent, z, &realize_one_form(sched, g)?, g)
}

pub fn extend_with_form(
    f_parent: &VertexFunction,
    z: f64,
    a: &EdgeOneForm,
    g: &LevelGraph,
) -> Result<VertexFunction> {
    let m = g.scale();
    if m == 0 {
        return Err(Error::Domain("nothing to extend to at scale 0".into()));
    }
    if a.scale() != m {
        return Err(Error::Assembly(format!(
            "one-form has scale {} but the graph has scale {m}",
            a.scale()
        )));
    }
    let coarse = vertex_count(m - 1);
    if f_parent.len() != coarse {
        return Err(Error::Assembly(format!(
            "parent function has {} values, expected {coarse}",
            f_parent.len()
        )));
    }
    if z == 1.0 {
        return Err(Error::Pole);
    }
    let mut values = f_parent.0.clone();
    values.resize(g.vertex_count(), Complex64::new(0.0, 0.0));
    for x in coarse..g.vertex_count() {
        let sum: Complex64 = g
            .incidence(x)
            .iter()
            .map(|inc| Complex64::from_polar(1.0, a.oriented(inc.edge, inc.outgoing)) * values[inc.neighbor])
            .sum();
        values[x] = sum / (g.degree(x) as f64 * (1.0 - z));
    }
    Ok(VertexFunction(values))
}

fn weighted_norm(g: &LevelGraph, f: &VertexFunction, mode: BoundaryMode) -> f64 {
    f.0.iter()
        .enumerate()
        .filter(|(x, _)| mode == BoundaryMode::Full || !g.is_boundary(*x))
        .map(|(x, v)| g.degree(x) as f64 * v.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `||(M - z) f|| / ||f||` in the degree-weighted norm, over the rows of `mode`.
pub fn eigen_residual(
    g: &LevelGraph,
    a: &EdgeOneForm,
    f: &VertexFunction,
    z: f64,
    mode: BoundaryMode,
) -> f64 {
    let mut h = apply_magnetic(g, a, f);
    for (hx, fx) in h.0.iter_mut().zip(&f.0) {
        *hx -= z * fx;
    }
    weighted_norm(g, &h, mode) / weighted_norm(g, f, mode)
}

/// `max |f(p) - e^{i a(p->q)} f(q)|` over the edges of `g`.
pub fn max_edge_difference(g: &LevelGraph, a: &EdgeOneForm, f: &VertexFunction) -> f64 {
    g.edges()
        .map(|e| (f.0[e.source] - Complex64::from_polar(1.0, a.value(e.index)) * f.0[e.target]).norm())
        .fold(0.0, f64::max)
}

/// Converts a column of the symmetrized matrix into a degree-weighted
/// vertex function, filling removed boundary rows with zero.
pub fn from_symmetric(g: &LevelGraph, op: &HermitianOperator, column: &[Complex64]) -> VertexFunction {
    let mut f = VertexFunction::zeros(g.vertex_count());
    for (i, v) in column.iter().enumerate() {
        let x = op.vertex_of_row(i);
        f.0[x] = v / (g.degree(x) as f64).sqrt();
    }
    f
}

/// Inverse of [`from_symmetric`].
pub fn to_symmetric(g: &LevelGraph, op: &HermitianOperator, f: &VertexFunction) -> Vec<Complex64> {
    (0..op.dim())
        .map(|i| {
            let x = op.vertex_of_row(i);
            f.0[x] * (g.degree(x) as f64).sqrt()
        })
        .collect()
}
