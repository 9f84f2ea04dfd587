//! Dense magnetic operators and forms on level graphs.
//!
//! The operator `M f(x) = f(x) - deg(x)^-1 sum_{y~x} e^{i a(x->y)} f(y)` is
//! self-adjoint in the degree-weighted inner product. We store the similar
//! matrix `D^{1/2} M D^{-1/2}`, whose entries are
//! `-e^{i a(x->y)} / sqrt(deg x deg y)` off the diagonal and `1` on it, so
//! that standard Hermitian eigensolvers apply.

use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauge::{realize_one_form, BetaSchedule, EdgeOneForm};
use crate::topology::{vertex_count, CellWord, LevelGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryMode {
    /// Rows and columns of the two boundary vertices are removed.
    Dirichlet,
    Full,
}

/// Dense Hermitian matrix whose rows are graph vertices, ordered coarse-first.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
    scale: usize,
    mode: BoundaryMode,
    /// Number of leading rows belonging to `V_{m-1}` (minus `V_0` in Dirichlet mode).
    coarse_len: usize,
}

/// Blocks `S` (coarse), `X~` (coarse x fine), `X` (fine x coarse), `Q` (fine).
#[derive(Clone, Debug)]
pub struct Blocks {
    pub s: DMatrix<Complex64>,
    pub x_tilde: DMatrix<Complex64>,
    pub x: DMatrix<Complex64>,
    pub q: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Wraps an arbitrary Hermitian matrix; used for hand-built examples.
    pub fn from_matrix(
        matrix: DMatrix<Complex64>,
        scale: usize,
        mode: BoundaryMode,
        coarse_len: usize,
    ) -> Result<Self> {
        if !matrix.is_square() || coarse_len > matrix.nrows() {
            return Err(Error::Assembly(format!(
                "matrix {}x{} with coarse block {coarse_len} is not a valid operator",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(HermitianOperator {
            matrix,
            scale,
            mode,
            coarse_len,
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn coarse_len(&self) -> usize {
        self.coarse_len
    }

    /// Graph vertex represented by row `i`.
    pub fn vertex_of_row(&self, i: usize) -> usize {
        match self.mode {
            BoundaryMode::Full => i,
            BoundaryMode::Dirichlet => i + 2,
        }
    }

    pub fn row_of_vertex(&self, v: usize) -> Option<usize> {
        match self.mode {
            BoundaryMode::Full => Some(v),
            BoundaryMode::Dirichlet => v.checked_sub(2),
        }
        .filter(|&i| i < self.dim())
    }

    pub fn blocks(&self) -> Blocks {
        let (n, c) = (self.dim(), self.coarse_len);
        let f = n - c;
        let m = &self.matrix;
        Blocks {
            s: m.view((0, 0), (c, c)).into_owned(),
            x_tilde: m.view((0, c), (c, f)).into_owned(),
            x: m.view((c, 0), (f, c)).into_owned(),
            q: m.view((c, c), (f, f)).into_owned(),
        }
    }

    /// Largest entry-wise deviation from Hermitian symmetry.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in 0..=i {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Writes `i j re im` for every nonzero entry, row-major.
    pub fn write_dump<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let m = &self.matrix;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    writeln!(out, "{i} {j} {:?} {:?}", v.re, v.im)?;
                }
            }
        }
        Ok(())
    }
}

fn dirichlet_dim(m: usize) -> usize {
    vertex_count(m) - 2
}

pub fn assemble(g: &LevelGraph, a: &EdgeOneForm, mode: BoundaryMode) -> Result<HermitianOperator> {
    if a.scale() != g.scale() {
        return Err(Error::Assembly(format!(
            "one-form has scale {} but the graph has scale {}",
            a.scale(),
            g.scale()
        )));
    }
    let m = g.scale();
    let (dim, offset) = match mode {
        BoundaryMode::Full => (g.vertex_count(), 0),
        BoundaryMode::Dirichlet => (dirichlet_dim(m), 2),
    };
    let coarse_len = if m == 0 {
        dim
    } else {
        vertex_count(m - 1) - offset
    };

    let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for i in 0..dim {
        matrix[(i, i)] = Complex64::new(1.0, 0.0);
    }
    let deg = g.degrees();
    for e in g.edges() {
        let (Some(i), Some(j)) = (
            e.source.checked_sub(offset),
            e.target.checked_sub(offset),
        ) else {
            continue;
        };
        let weight = ((deg[e.source] * deg[e.target]) as f64).sqrt();
        let entry = -Complex64::from_polar(1.0, a.value(e.index)) / weight;
        matrix[(i, j)] += entry;
        matrix[(j, i)] = matrix[(i, j)].conj();
    }
    Ok(HermitianOperator {
        matrix,
        scale: m,
        mode,
        coarse_len,
    })
}

/// Assembles the operator of `sched` on `g`.
pub fn assemble_schedule(
    g: &LevelGraph,
    sched: &BetaSchedule,
    mode: BoundaryMode,
) -> Result<HermitianOperator> {
    assemble(g, &realize_one_form(sched, g)?, mode)
}

/// Zero-field operator.
pub fn laplacian(g: &LevelGraph, mode: BoundaryMode) -> Result<HermitianOperator> {
    assemble_schedule(g, &BetaSchedule::zero(g.scale()), mode)
}

/// A complex function on the vertices of a level graph.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction(pub Vec<Complex64>);

impl VertexFunction {
    pub fn zeros(n: usize) -> Self {
        VertexFunction(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_real(values: &[f64]) -> Self {
        VertexFunction(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }
}

/// `sum over edges p->q of |f(p) - e^{i a(p->q)} f(q)|^2`.
pub fn form_value(g: &LevelGraph, a: &EdgeOneForm, f: &VertexFunction) -> Result<f64> {
    if a.scale() != g.scale() || f.len() != g.vertex_count() {
        return Err(Error::Assembly(format!(
            "form of scale {} and function of length {} do not fit a scale-{} graph",
            a.scale(),
            f.len(),
            g.scale()
        )));
    }
    Ok(g
        .edges()
        .map(|e| {
            (f.0[e.source] - Complex64::from_polar(1.0, a.value(e.index)) * f.0[e.target]).norm_sqr()
        })
        .sum())
}

/// The same energy written as a sum over scale-m cells of the non-magnetic
/// energy of `e^{i A_w} f`, where `A_w` is the cell's potential: `0` at
/// `F_w(-1, 0)` and the through-difference of `w` at `F_w(1, 0)`.
pub fn form_value_by_cells(g: &LevelGraph, a: &EdgeOneForm, f: &VertexFunction) -> Result<f64> {
    if a.scale() != g.scale() || f.len() != g.vertex_count() {
        return Err(Error::Assembly("scale or length mismatch".into()));
    }
    let m = g.scale();
    let mut total = 0.0;
    for i in 0..g.edge_count() {
        let w = CellWord::from_index(m, i);
        let cell = g.cell(&w)?;
        let potential = [0.0, a.through(&w)?];
        let gauged = [
            Complex64::from_polar(1.0, potential[0]) * f.0[cell.source],
            Complex64::from_polar(1.0, potential[1]) * f.0[cell.target],
        ];
        total += (gauged[0] - gauged[1]).norm_sqr();
    }
    Ok(total)
}

/// `U* op U` with `U = diag(e^{i theta})`; `theta` is indexed by matrix row.
pub fn gauge_conjugate(op: &HermitianOperator, theta: &[f64]) -> Result<HermitianOperator> {
    if theta.len() != op.dim() {
        return Err(Error::Assembly(format!(
            "phase vector of length {} for a {}-dimensional operator",
            theta.len(),
            op.dim()
        )));
    }
    let n = op.dim();
    let mut matrix = op.matrix.clone();
    for i in 0..n {
        for j in 0..n {
            matrix[(i, j)] *= Complex64::from_polar(1.0, theta[j] - theta[i]);
        }
    }
    Ok(HermitianOperator { matrix, ..op.clone() })
}

/// Extends boundary values to `V_m` by repeated averaging: every vertex born
/// at level `k` receives the mean of the two endpoints of the cell it refines.
pub fn harmonic_extension(g: &LevelGraph, left: f64, right: f64) -> Vec<f64> {
    let mut h = vec![0.0; g.vertex_count()];
    h[0] = left;
    h[1] = right;
    for k in 0..g.scale() {
        for (cell, (top, bottom)) in g.cells_at(k).iter().zip(interior_at(g, k)) {
            let mid = 0.5 * (h[cell.source] + h[cell.target]);
            h[top] = mid;
            h[bottom] = mid;
        }
    }
    h
}

fn interior_at(g: &LevelGraph, k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..g.cells_at(k).len()).map(move |i| {
        g.interior_vertices(&CellWord::from_index(k, i))
            .expect("cell below graph scale is refined")
    })
}

/// The non-symmetrized operator `M` applied to `f` (full vertex set).
pub fn apply_magnetic(g: &LevelGraph, a: &EdgeOneForm, f: &VertexFunction) -> VertexFunction {
    let mut out = f.clone();
    for (x, value) in out.0.iter_mut().enumerate() {
        let deg = g.degree(x) as f64;
        let sum: Complex64 = g
            .incidence(x)
            .iter()
            .map(|inc| Complex64::from_polar(1.0, a.oriented(inc.edge, inc.outgoing)) * f.0[inc.neighbor])
            .sum();
        *value -= sum / deg;
    }
    out
}
