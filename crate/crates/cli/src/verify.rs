//! Invariant suites behind `dspec verify`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dlf_core::assembly::harmonic_extension;
use dlf_core::decimation::dirichlet_dimension;
use dlf_core::oracle::{default_z_grid, multiplicity_evidence, verify_similarity_in_mode, DEFAULT_CLUSTER_GAP};
use dlf_core::topology::vertex_count;
use dlf_core::{
    assemble_schedule, build_level_graph, build_level_graph_with_order, compare, eigensolve,
    gauge_conjugate, level_spectrum, BetaSchedule, BoundaryMode, ChildOrder, Result,
};

/// Seed shared by every randomized suite so reports are reproducible.
pub const SEED: u64 = 0x5eed_d1f;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    Schur,
    Oracle,
    Gauge,
    Degrees,
    Multiplicity,
}

impl Scope {
    pub const SUITES: [Scope; 5] = [
        Scope::Degrees,
        Scope::Schur,
        Scope::Oracle,
        Scope::Gauge,
        Scope::Multiplicity,
    ];

    pub fn suites(self) -> Vec<Scope> {
        match self {
            Scope::All => Self::SUITES.to_vec(),
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scope::All => "all",
            Scope::Schur => "schur",
            Scope::Oracle => "oracle",
            Scope::Gauge => "gauge",
            Scope::Degrees => "degrees",
            Scope::Multiplicity => "multiplicity",
        }
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Scope::All]
            .into_iter()
            .chain(Self::SUITES)
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown scope {s:?}; expected all, schur, oracle, gauge, degrees or multiplicity"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub scope: Scope,
    pub checks: Vec<Check>,
    /// Free-form text printed after the checks.
    pub notes: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        writeln!(f, "== {} [{status}]", self.scope.name())?;
        for c in &self.checks {
            let mark = if c.passed() { "ok  " } else { "FAIL" };
            writeln!(f, "  {mark} {}: {:.3e} (tol {:.1e})", c.name, c.measured, c.tolerance)?;
        }
        if !self.notes.is_empty() {
            for line in self.notes.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        Ok(())
    }
}

pub fn random_schedule(rng: &mut ChaCha8Rng, m: usize) -> BetaSchedule {
    let a0 = rng.random_range(-1.0..=1.0);
    let betas = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
    BetaSchedule::explicit(a0, betas)
}

pub fn run(scope: Scope) -> Result<Vec<SuiteReport>> {
    scope
        .suites()
        .into_iter()
        .map(|s| match s {
            Scope::Degrees => degrees(6),
            Scope::Schur => schur(4),
            Scope::Oracle => oracle(4, 10),
            Scope::Gauge => gauge(4),
            Scope::Multiplicity => multiplicity(4),
            Scope::All => unreachable!("expanded by suites()"),
        })
        .collect()
}

/// Vertex and edge counts and the degree law, from the edge list.
pub fn degrees(max_scale: usize) -> Result<SuiteReport> {
    let mut count_errors = 0usize;
    let mut degree_errors = 0usize;
    for m in 0..=max_scale {
        let g = build_level_graph(m);
        let mut walked = vec![0usize; g.vertex_count()];
        for e in g.edges() {
            walked[e.source] += 1;
            walked[e.target] += 1;
        }
        if g.vertex_count() != vertex_count(m) || g.edge_count() != 4usize.pow(m as u32) {
            count_errors += 1;
        }
        for (v, &d) in walked.iter().enumerate() {
            let expected = if g.is_boundary(v) {
                1 << m
            } else {
                1 << (m - g.birth_level(v) + 1)
            };
            if d != expected || g.degree(v) != d {
                degree_errors += 1;
            }
        }
    }
    Ok(SuiteReport {
        scope: Scope::Degrees,
        checks: vec![
            Check::new(format!("vertex/edge count violations, m=0..{max_scale}"), count_errors as f64, 0.0),
            Check::new(format!("degree law violations, m=0..{max_scale}"), degree_errors as f64, 0.0),
        ],
        notes: String::new(),
    })
}

/// Schur complement against `phi0 M_(m-1) - phi1 I` on the default grid.
pub fn schur(max_scale: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let grid = default_z_grid();
    let mut random = 0.0f64;
    let mut flat = 0.0f64;
    let mut shifted = 0.0f64;
    for m in 1..=max_scale {
        for mode in [BoundaryMode::Full, BoundaryMode::Dirichlet] {
            if m == 1 && mode == BoundaryMode::Dirichlet {
                // The scale-0 Dirichlet operator is empty.
                continue;
            }
            for _ in 0..3 {
                let sched = random_schedule(&mut rng, m);
                random = random.max(verify_similarity_in_mode(&sched, m, &grid, mode)?);
            }
            let mut betas: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
            betas[m - 1] = FRAC_PI_4;
            let sched = BetaSchedule::explicit(0.0, betas.clone());
            flat = flat.max(verify_similarity_in_mode(&sched, m, &grid, mode)?);
            let sched = BetaSchedule::explicit(0.74, betas);
            shifted = shifted.max(verify_similarity_in_mode(&sched, m, &grid, mode)?);
        }
    }
    Ok(SuiteReport {
        scope: Scope::Schur,
        checks: vec![
            Check::new(format!("max residual, random schedules, m=1..{max_scale}"), random, 1e-9),
            Check::new("max residual, cos 2beta_m = 0", flat, 1e-9),
            Check::new("max residual, asymmetric gauge a0 = 0.74", shifted, 1e-9),
        ],
        notes: String::new(),
    })
}

/// Decimated tables against clustered dense spectra.
pub fn oracle(max_scale: usize, per_scale: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    let mut mismatches = 0usize;
    for m in 1..=max_scale {
        let g = build_level_graph(m);
        let mut schedules = vec![BetaSchedule::zero(m)];
        schedules.extend((0..per_scale).map(|_| random_schedule(&mut rng, m)));
        for sched in &schedules {
            let table = level_spectrum(sched, m)?;
            let op = assemble_schedule(&g, sched, BoundaryMode::Dirichlet)?;
            let report = compare(&table, &eigensolve(&op)?, DEFAULT_CLUSTER_GAP)?;
            worst = worst.max(report.max_value_error);
            mismatches += report.multiplicity_mismatches;
        }
    }
    Ok(SuiteReport {
        scope: Scope::Oracle,
        checks: vec![
            Check::new(format!("max value error, m=1..{max_scale}"), worst, 1e-9),
            Check::new("multiplicity mismatches", mismatches as f64, 0.0),
        ],
        notes: String::new(),
    })
}

fn spectral_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Spectra under `a0` shifts, diagonal phase conjugation and child reordering.
pub fn gauge(max_scale: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut shift, mut phase, mut order) = (0.0f64, 0.0f64, 0.0f64);
    let mut harmonic = 0.0f64;
    for m in 1..=max_scale {
        let sched = random_schedule(&mut rng, m);
        let g = build_level_graph(m);
        let op = assemble_schedule(&g, &sched, BoundaryMode::Dirichlet)?;
        let base = eigensolve(&op)?.eigenvalues;
        for _ in 0..3 {
            let a0 = rng.random_range(-4.0..4.0);
            let moved = assemble_schedule(&g, &sched.clone().with_a0(a0), BoundaryMode::Dirichlet)?;
            shift = shift.max(spectral_distance(&base, &eigensolve(&moved)?.eigenvalues));
            let theta: Vec<f64> = (0..op.dim()).map(|_| rng.random_range(-3.2..3.2)).collect();
            let conj = gauge_conjugate(&op, &theta)?;
            phase = phase.max(spectral_distance(&base, &eigensolve(&conj)?.eigenvalues));
        }
        // The a0 shift is exactly conjugation by the harmonic phase.
        let full = assemble_schedule(&g, &sched.clone().with_a0(0.0), BoundaryMode::Full)?;
        let target = assemble_schedule(&g, &sched.clone().with_a0(1.3), BoundaryMode::Full)?;
        let theta = harmonic_extension(&g, 0.0, 1.3);
        let conj = gauge_conjugate(&full, &theta)?;
        harmonic = harmonic.max((conj.matrix() - target.matrix()).iter().map(|v| v.norm()).fold(0.0, f64::max));
        let orders = if m <= 3 { ChildOrder::all() } else { ChildOrder::all().into_iter().step_by(5).collect() };
        for o in orders {
            let h = build_level_graph_with_order(m, o);
            let s = eigensolve(&assemble_schedule(&h, &sched, BoundaryMode::Dirichlet)?)?.eigenvalues;
            order = order.max(spectral_distance(&base, &s));
        }
    }
    Ok(SuiteReport {
        scope: Scope::Gauge,
        checks: vec![
            Check::new(format!("a0 shift, max eigenvalue change, m=1..{max_scale}"), shift, 1e-12),
            Check::new("a0 shift equals harmonic phase conjugation (entrywise)", harmonic, 1e-12),
            Check::new("random diagonal phases, max eigenvalue change", phase, 1e-12),
            Check::new("child ordering permutations, max eigenvalue change", order, 1e-12),
        ],
        notes: String::new(),
    })
}

/// Which multiplicity formula the dense oracle supports for values whose
/// lineage starts below the top level.
pub fn multiplicity(max_scale: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut notes = String::new();
    let mut disagreements = 0usize;
    let mut total = 0usize;
    let mut unsupported = 0usize;
    let schedules = [BetaSchedule::zero(max_scale), random_schedule(&mut rng, max_scale)];
    for (i, sched) in schedules.iter().enumerate() {
        let evidence = multiplicity_evidence(sched, max_scale)?;
        total += evidence.checks.len();
        disagreements += evidence.checks.len() - evidence.propagation_agrees();
        if evidence.verdict() != "propagation" {
            unsupported += 1;
        }
        let label = if i == 0 { "zero field" } else { "random schedule" };
        notes.push_str(&format!("[{label}, m<={max_scale}]\n"));
        notes.push_str(&evidence.to_text());
    }
    let dims_ok = (1..=max_scale).all(|m| {
        level_spectrum(&schedules[1], m).map(|t| t.total_multiplicity()).ok() == Some(dirichlet_dimension(m))
    });
    Ok(SuiteReport {
        scope: Scope::Multiplicity,
        checks: vec![
            Check::new(format!("propagation rule disagreements over {total} values"), disagreements as f64, 0.0),
            Check::new("schedules where the oracle does not single out the propagation rule", unsupported as f64, 0.0),
            Check::new("multiplicity totals off the Dirichlet dimension", if dims_ok { 0.0 } else { 1.0 }, 0.0),
        ],
        notes,
    })
}
