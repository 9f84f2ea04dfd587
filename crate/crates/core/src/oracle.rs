//! Dense eigensolver ground truth and comparison against decimation output.

use std::fmt::Write as _;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::assembly::{assemble_schedule, BoundaryMode, HermitianOperator};
use crate::decimation::{
    level_spectrum, phi_pair, unit_multiplicity, SchurSplit, SpectrumRow, SpectrumTable,
};
use crate::error::{Error, Result};
use crate::gauge::BetaSchedule;
use crate::topology::build_level_graph;

/// Default dimension cap; the scale-5 Dirichlet operator has dimension 682.
pub const DEFAULT_CAP: usize = 2048;

/// Default gap for clustering oracle eigenvalues.
pub const DEFAULT_CLUSTER_GAP: f64 = 1e-8;

/// Minimum distance between Schur grid points and the fine-block spectrum.
pub const GRID_MARGIN: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns matching `eigenvalues`.
    pub eigenvectors: DMatrix<Complex64>,
    /// `max_i ||A v_i - lambda_i v_i||`
    pub residual: f64,
    /// `||V* V - I||_max`
    pub orthonormality: f64,
    /// `|sum lambda - trace|`
    pub trace_defect: f64,
}

pub fn eigensolve(op: &HermitianOperator) -> Result<EigenDecomposition> {
    eigensolve_with_cap(op, DEFAULT_CAP)
}

pub fn eigensolve_with_cap(op: &HermitianOperator, cap: usize) -> Result<EigenDecomposition> {
    let n = op.dim();
    if n > cap {
        return Err(Error::OracleCap { dim: n, cap });
    }
    let a = op.matrix();
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    // The operator is sparse and the eigenvector columns are contiguous,
    // so both checks avoid dense complex products.
    let nonzeros: Vec<(usize, usize, Complex64)> = (0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .filter_map(|(i, j)| {
            let v = a[(i, j)];
            (v != Complex64::new(0.0, 0.0)).then_some((i, j, v))
        })
        .collect();
    let mut residual = 0.0f64;
    let mut av = vec![Complex64::new(0.0, 0.0); n];
    for (c, &l) in eigenvalues.iter().enumerate() {
        let col = eigenvectors.column(c);
        av.iter_mut().zip(col.iter()).for_each(|(x, v)| *x = -v * l);
        for &(i, j, v) in &nonzeros {
            av[i] += v * col[j];
        }
        residual = residual.max(av.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt());
    }
    let columns: Vec<&[Complex64]> = (0..n)
        .map(|c| &eigenvectors.as_slice()[c * n..(c + 1) * n])
        .collect();
    let mut orthonormality = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let dot: Complex64 = columns[i].iter().zip(columns[j]).map(|(x, y)| x.conj() * y).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            orthonormality = orthonormality.max((dot - target).norm());
        }
    }
    let trace: f64 = (0..n).map(|i| a[(i, i)].re).sum();
    let trace_defect = (eigenvalues.iter().sum::<f64>() - trace).abs();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        residual,
        orthonormality,
        trace_defect,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cluster {
    pub mean: f64,
    pub size: usize,
    pub min: f64,
    pub max: f64,
}

/// Groups sorted values whose consecutive differences are at most `gap`.
pub fn cluster(sorted: &[f64], gap: f64) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    let mut sum = 0.0;
    for &v in sorted {
        match out.last_mut() {
            Some(c) if v - c.max <= gap => {
                sum += v;
                c.size += 1;
                c.max = v;
                c.mean = sum / c.size as f64;
            }
            _ => {
                sum = v;
                out.push(Cluster {
                    mean: v,
                    size: 1,
                    min: v,
                    max: v,
                });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchedRow {
    pub decimated: f64,
    pub oracle_mean: f64,
    pub abs_err: f64,
    pub mult_dec: u64,
    pub mult_orc: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<MatchedRow>,
    pub clusters: Vec<Cluster>,
    /// Clusters that no decimated row maps to.
    pub orphan_clusters: Vec<Cluster>,
    pub max_value_error: f64,
    /// Clusters whose size differs from the summed multiplicity of the rows
    /// mapped to them, including orphans.
    pub multiplicity_mismatches: usize,
}

impl ComparisonReport {
    pub fn passes(&self, value_tol: f64) -> bool {
        self.max_value_error <= value_tol && self.multiplicity_mismatches == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} decimated rows, {} oracle clusters, max value error {:.3e}, {} multiplicity mismatches",
            self.rows.len(),
            self.clusters.len(),
            self.max_value_error,
            self.multiplicity_mismatches
        );
        for r in &self.rows {
            let flag = if r.mult_dec as usize == r.mult_orc { "" } else { "  MISMATCH" };
            let _ = writeln!(
                out,
                "  {:>22.16} {:>22.16} {:>10.3e} {:>8} {:>8}{flag}",
                r.decimated, r.oracle_mean, r.abs_err, r.mult_dec, r.mult_orc
            );
        }
        for c in &self.orphan_clusters {
            let _ = writeln!(out, "  unmatched oracle cluster at {} (size {})", c.mean, c.size);
        }
        out
    }

    /// CSV with header `decimated,oracle_mean,abs_err,mult_dec,mult_orc`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "decimated,oracle_mean,abs_err,mult_dec,mult_orc")?;
        for r in &self.rows {
            writeln!(
                out,
                "{:?},{:?},{:?},{},{}",
                r.decimated, r.oracle_mean, r.abs_err, r.mult_dec, r.mult_orc
            )?;
        }
        Ok(())
    }
}

pub fn compare(table: &SpectrumTable, eig: &EigenDecomposition, gap: f64) -> Result<ComparisonReport> {
    if !(gap > 10.0 * eig.residual) {
        return Err(Error::Domain(format!(
            "cluster gap {gap:.1e} must exceed ten times the solver residual {:.1e}",
            eig.residual
        )));
    }
    let clusters = cluster(&eig.eigenvalues, gap);
    let mut assigned = vec![0u64; clusters.len()];
    let mut rows = Vec::with_capacity(table.rows().len());
    let mut max_value_error = 0.0f64;
    for r in table.rows() {
        let Some((ci, c)) = clusters
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.mean - r.value).abs().total_cmp(&(b.1.mean - r.value).abs()))
        else {
            max_value_error = f64::INFINITY;
            rows.push(MatchedRow {
                decimated: r.value,
                oracle_mean: f64::NAN,
                abs_err: f64::INFINITY,
                mult_dec: r.multiplicity,
                mult_orc: 0,
            });
            continue;
        };
        let abs_err = (c.mean - r.value).abs();
        max_value_error = max_value_error.max(abs_err);
        assigned[ci] += r.multiplicity;
        rows.push(MatchedRow {
            decimated: r.value,
            oracle_mean: c.mean,
            abs_err,
            mult_dec: r.multiplicity,
            mult_orc: c.size,
        });
    }
    let multiplicity_mismatches = clusters
        .iter()
        .zip(&assigned)
        .filter(|(c, &a)| c.size as u64 != a)
        .count();
    let orphan_clusters = clusters
        .iter()
        .zip(&assigned)
        .filter(|(_, &a)| a == 0)
        .map(|(c, _)| *c)
        .collect();
    Ok(ComparisonReport {
        rows,
        clusters,
        orphan_clusters,
        max_value_error,
        multiplicity_mismatches,
    })
}

/// Converts a dense spectrum into table rows (birth levels unknown, reported as 0).
pub fn oracle_table(scale: usize, eig: &EigenDecomposition, gap: f64) -> SpectrumTable {
    let rows = cluster(&eig.eigenvalues, gap)
        .into_iter()
        .map(|c| SpectrumRow {
            value: c.mean,
            multiplicity: c.size as u64,
            birth_level: 0,
        })
        .collect();
    SpectrumTable::from_rows(scale, rows)
}

/// `20` real points spread over `[-0.5, 2.5]`, none within `0.07` of `1`.
pub fn default_z_grid() -> Vec<Complex64> {
    (0..20)
        .map(|k| Complex64::new(-0.5 + 3.0 * k as f64 / 19.0, 0.0))
        .collect()
}

/// Largest entry-wise residual of `Schur(M_m)(z) - (phi0(z) M_{m-1} - phi1(z) I)`
/// over the grid, with both operators assembled in full-vertex mode.
pub fn verify_similarity(sched: &BetaSchedule, m: usize, z_grid: &[Complex64]) -> Result<f64> {
    verify_similarity_in_mode(sched, m, z_grid, BoundaryMode::Full)
}

pub fn verify_similarity_in_mode(
    sched: &BetaSchedule,
    m: usize,
    z_grid: &[Complex64],
    mode: BoundaryMode,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("spectral similarity relates scale m >= 1 to m - 1".into()));
    }
    let fine = assemble_schedule(&build_level_graph(m), sched, mode)?;
    let coarse = assemble_schedule(&build_level_graph(m - 1), &sched.truncated(m - 1)?, mode)?;
    let split = SchurSplit::new(&fine)?;
    let beta = sched.beta(m)?;
    let n = coarse.dim();
    let mut worst = 0.0f64;
    for &z in z_grid {
        let distance = split.fine_distance(z);
        if distance < GRID_MARGIN {
            return Err(Error::Grid {
                z: format!("{z}"),
                distance,
                margin: GRID_MARGIN,
            });
        }
        let s = split.complement(z)?;
        let (phi0, phi1) = phi_pair(z, beta)?;
        let target = coarse.matrix() * phi0 - DMatrix::from_diagonal_element(n, n, phi1);
        worst = worst.max((s - target).iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

/// One comparison of the two candidate multiplicity formulas at a value
/// `z` with `R_k o ... o R_m (z) = 1`, that is, a value whose lineage starts
/// at level `k - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplicityCheck {
    pub scale: usize,
    pub k: usize,
    pub value: f64,
    pub oracle: usize,
    /// Carried unchanged from the birth level: `(1/3)(4^(k-1) + 2)`.
    pub propagation: u64,
    /// The closed form `(4/3)(4^k - 1)`.
    pub closed_form: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityEvidence {
    pub checks: Vec<MultiplicityCheck>,
}

impl MultiplicityEvidence {
    pub fn propagation_agrees(&self) -> usize {
        self.checks.iter().filter(|c| c.oracle as u64 == c.propagation).count()
    }

    pub fn closed_form_agrees(&self) -> usize {
        self.checks.iter().filter(|c| c.oracle as u64 == c.closed_form).count()
    }

    /// `"propagation"`, `"closed-form"`, `"both"` or `"neither"`.
    pub fn verdict(&self) -> &'static str {
        let n = self.checks.len();
        match (self.propagation_agrees() == n, self.closed_form_agrees() == n) {
            (true, true) => "both",
            (true, false) => "propagation",
            (false, true) => "closed-form",
            (false, false) => "neither",
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "multiplicity of values z with R_k o ... o R_m (z) = 1, oracle vs candidate formulas"
        );
        let _ = writeln!(
            out,
            "  {:>2} {:>2} {:>20} {:>7} {:>22} {:>18}",
            "m", "k", "value", "oracle", "propagation (4^(k-1)+2)/3", "closed (4/3)(4^k-1)"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:>2} {:>2} {:>20.15} {:>7} {:>22} {:>18}",
                c.scale, c.k, c.value, c.oracle, c.propagation, c.closed_form
            );
        }
        let _ = writeln!(
            out,
            "propagation rule matches {}/{} values; closed form matches {}/{} values",
            self.propagation_agrees(),
            self.checks.len(),
            self.closed_form_agrees(),
            self.checks.len()
        );
        let _ = writeln!(out, "oracle supports: {}", self.verdict());
        out
    }
}

/// Tests both multiplicity formulas against the dense oracle for scales
/// `2..=max_scale` under `sched`.
pub fn multiplicity_evidence(sched: &BetaSchedule, max_scale: usize) -> Result<MultiplicityEvidence> {
    let mut checks = Vec::new();
    for m in 2..=max_scale {
        let table = level_spectrum(sched, m)?;
        let op = assemble_schedule(&build_level_graph(m), sched, BoundaryMode::Dirichlet)?;
        let eig = eigensolve(&op)?;
        let clusters = cluster(&eig.eigenvalues, DEFAULT_CLUSTER_GAP);
        for row in table.rows().iter().filter(|r| r.birth_level < m) {
            let k = row.birth_level + 1;
            let oracle = clusters
                .iter()
                .filter(|c| (c.mean - row.value).abs() < 1e-6)
                .map(|c| c.size)
                .sum();
            checks.push(MultiplicityCheck {
                scale: m,
                k,
                value: row.value,
                oracle,
                propagation: unit_multiplicity(k - 1),
                closed_form: 4 * (4u64.pow(k as u32) - 1) / 3,
            });
        }
    }
    Ok(MultiplicityEvidence { checks })
}
