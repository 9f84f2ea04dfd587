//! Magnetic fields whose flux depends only on the scale.
//!
//! A field is described by an exact scale-0 potential difference `a0` and a
//! sequence `beta_1, beta_2, ...`: every hole that appears when a cell of
//! length `n - 1` is refined carries flux `4 beta_n`. On a level graph the
//! field is realized as a real one-form on directed edges through the
//! through-difference recursion
//!
//! ```text
//! delta_root = a0
//! delta_{wj}  = delta_w / 2 + sigma_j * beta_{|w|+1}     (sigma = +1 top, -1 bottom)
//! ```
//!
//! and the scale-m edge owned by cell `w` carries `delta_w`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::topology::{ChildOrder, CellWord, LevelGraph};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScheduleKind {
    /// `beta_m = beta * r^m`
    Uniform { beta: f64, ratio: f64 },
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaSchedule {
    a0: f64,
    betas: Vec<f64>,
    kind: ScheduleKind,
    slow_decay_override: bool,
}

/// `beta_n = beta * r^n` for `n = 1..=max_scale`, with `a0 = 0`.
pub fn uniform_schedule(beta: f64, r: f64, max_scale: usize) -> Result<BetaSchedule> {
    if !(r > 0.0 && r < 0.25) {
        return Err(Error::Domain(format!(
            "ratio r = {r} must satisfy 0 < r < 1/4 so that beta_m = o(4^-m)"
        )));
    }
    if !beta.is_finite() {
        return Err(Error::Domain(format!("beta = {beta} is not finite")));
    }
    let betas = (1..=max_scale).map(|n| beta * r.powi(n as i32)).collect();
    Ok(BetaSchedule {
        a0: 0.0,
        betas,
        kind: ScheduleKind::Uniform { beta, ratio: r },
        slow_decay_override: false,
    })
}

/// Total flux enclosed by a loop, truncated to the schedule and, for uniform
/// fields, summed in closed form over the infinite tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopFlux {
    pub truncated: f64,
    pub closed_form: Option<f64>,
}

impl BetaSchedule {
    pub fn explicit(a0: f64, betas: Vec<f64>) -> Self {
        BetaSchedule {
            a0,
            betas,
            kind: ScheduleKind::Explicit,
            slow_decay_override: false,
        }
    }

    pub fn zero(max_scale: usize) -> Self {
        Self::explicit(0.0, vec![0.0; max_scale])
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn with_a0(mut self, a0: f64) -> Self {
        self.a0 = a0;
        self
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn max_scale(&self) -> usize {
        self.betas.len()
    }

    /// `beta_n`, 1-based.
    pub fn beta(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.betas.len() {
            return Err(Error::ScheduleLength {
                requested: n,
                available: self.betas.len(),
            });
        }
        Ok(self.betas[n - 1])
    }

    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m > self.betas.len() {
            return Err(Error::ScheduleLength {
                requested: m,
                available: self.betas.len(),
            });
        }
        let mut out = self.clone();
        out.betas.truncate(m);
        Ok(out)
    }

    /// Marks an explicit schedule as acceptable for renormalized limits even
    /// though its decay cannot be certified.
    pub fn allow_slow_decay(mut self) -> Self {
        self.slow_decay_override = true;
        self
    }

    /// Whether renormalized limits `4^m z_m` may be taken with this field:
    /// uniform fields with `r < 1/4`, the zero field, or an explicit
    /// schedule marked with [`BetaSchedule::allow_slow_decay`].
    pub fn decay_admissible(&self) -> bool {
        match self.kind {
            ScheduleKind::Uniform { ratio, .. } => ratio < 0.25,
            ScheduleKind::Explicit => {
                self.slow_decay_override || self.betas.iter().all(|&b| b == 0.0)
            }
        }
    }

    /// Flux enclosed by the outer loop of a diamond that first appears at
    /// `scale`: its own hole plus all holes nested inside it,
    /// `4 * sum_{n >= scale} 4^(n - scale) beta_n`.
    pub fn loop_flux(&self, scale: usize) -> Result<LoopFlux> {
        if scale == 0 {
            return Err(Error::Domain("loops first appear at scale 1".into()));
        }
        let truncated = 4.0
            * (scale..=self.betas.len())
                .map(|n| 4f64.powi((n - scale) as i32) * self.betas[n - 1])
                .sum::<f64>();
        let closed_form = match self.kind {
            ScheduleKind::Uniform { beta, ratio } => {
                Some(4.0 * beta * ratio.powi(scale as i32) / (1.0 - 4.0 * ratio))
            }
            ScheduleKind::Explicit => None,
        };
        Ok(LoopFlux {
            truncated,
            closed_form,
        })
    }

    /// Parses the schedule file format: a line `a0 <real>` followed by
    /// `beta <n> <real>` lines covering `n = 1..=M`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut a0 = None;
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["a0", v] => {
                    if a0.is_some() {
                        return Err(parse_err("duplicate a0 line".into()));
                    }
                    if !entries.is_empty() {
                        return Err(parse_err("a0 must precede the beta lines".into()));
                    }
                    a0 = Some(parse_real(v).map_err(parse_err)?);
                }
                ["beta", n, v] => {
                    if a0.is_none() {
                        return Err(parse_err("first line must be `a0 <real>`".into()));
                    }
                    let n: usize = n
                        .parse()
                        .map_err(|_| parse_err(format!("invalid scale index {n:?}")))?;
                    if n == 0 {
                        return Err(parse_err("scale indices start at 1".into()));
                    }
                    entries.push((n, line_no, parse_real(v).map_err(parse_err)?));
                }
                _ => return Err(parse_err(format!("unrecognized line {line:?}"))),
            }
        }
        let a0 = a0.ok_or(Error::Parse {
            line: 1,
            message: "missing `a0 <real>` line".into(),
        })?;
        let max = entries.iter().map(|e| e.0).max().unwrap_or(0);
        let mut betas = vec![None; max];
        for (n, line, v) in entries {
            if betas[n - 1].replace(v).is_some() {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate beta for scale {n}"),
                });
            }
        }
        let betas = betas
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                b.ok_or(Error::Parse {
                    line: 0,
                    message: format!("missing beta for scale {}", i + 1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::explicit(a0, betas))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("a0 {:?}\n", self.a0);
        for (i, b) in self.betas.iter().enumerate() {
            let _ = writeln!(out, "beta {} {:?}", i + 1, b);
        }
        out
    }
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("invalid real {s:?}")),
    }
}

/// `sum_n 4^n beta_n^2`, the squared norm of the field truncated to the
/// schedule.
pub fn hilbert_norm_sq(sched: &BetaSchedule) -> f64 {
    sched
        .betas
        .iter()
        .enumerate()
        .map(|(i, b)| 4f64.powi(i as i32 + 1) * b * b)
        .sum()
}

/// Real values on the directed edges of a level graph.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeOneForm {
    scale: usize,
    order: ChildOrder,
    /// `through[k][w.index()]` for cells of length `k <= scale`.
    through: Vec<Vec<f64>>,
}

impl EdgeOneForm {
    pub fn scale(&self) -> usize {
        self.scale
    }

    /// Values on the scale-m edges in their stored direction, indexed by edge.
    pub fn values(&self) -> &[f64] {
        &self.through[self.scale]
    }

    pub fn value(&self, edge: usize) -> f64 {
        self.through[self.scale][edge]
    }

    /// Value on `edge` traversed forwards (`outgoing`) or backwards.
    pub fn oriented(&self, edge: usize, outgoing: bool) -> f64 {
        let v = self.value(edge);
        if outgoing {
            v
        } else {
            -v
        }
    }

    /// Through-difference of the potential across cell `w`.
    pub fn through(&self, w: &CellWord) -> Result<f64> {
        if w.len() > self.scale {
            return Err(Error::Address(format!(
                "word {w} is longer than the form scale {}",
                self.scale
            )));
        }
        Ok(self.through[w.len()][w.index()])
    }
}

pub fn realize_one_form(sched: &BetaSchedule, g: &LevelGraph) -> Result<EdgeOneForm> {
    let order = g.order();
    let mut through = Vec::with_capacity(g.scale() + 1);
    through.push(vec![sched.a0()]);
    for k in 1..=g.scale() {
        let beta = sched.beta(k)?;
        let parent = &through[k - 1];
        let level = (0..parent.len() * 4)
            .map(|i| {
                let sign = order.slot((i % 4) as u8 + 1).loop_sign();
                parent[i / 4] / 2.0 + sign * beta
            })
            .collect();
        through.push(level);
    }
    Ok(EdgeOneForm {
        scale: g.scale(),
        order,
        through,
    })
}

/// Signed loop sum of the four children of `w` around its hole.
pub fn discrete_flux(f: &EdgeOneForm, w: &CellWord) -> Result<f64> {
    if w.len() >= f.scale {
        return Err(Error::NoHole {
            word: w.to_string(),
            cell_scale: w.len(),
            form_scale: f.scale,
        });
    }
    let children = &f.through[w.len() + 1];
    let base = 4 * w.index();
    Ok((1..=4u8)
        .map(|l| f.order.slot(l).loop_sign() * children[base + usize::from(l - 1)])
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::build_level_graph;

    #[test]
    fn uniform_values() {
        let s = uniform_schedule(0.5, 0.1, 3).unwrap();
        let expect = [0.05, 0.005, 0.0005];
        for (b, e) in s.betas().iter().zip(expect) {
            assert!((b - e).abs() < 1e-18);
        }
        assert_eq!(s.a0(), 0.0);
        assert!(uniform_schedule(0.0, 0.1, 5).unwrap().betas().iter().all(|&b| b == 0.0));
        assert!(matches!(uniform_schedule(1.0, 0.25, 3), Err(Error::Domain(_))));
        assert!(uniform_schedule(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn loop_flux_of_uniform_field() {
        let (beta, r) = (0.7, 0.2);
        let s = uniform_schedule(beta, r, 40).unwrap();
        let flux = s.loop_flux(2).unwrap();
        let series: f64 = (0..=38).map(|n| (4.0 * r).powi(n)).sum();
        assert!((flux.truncated - 4.0 * beta * r * r * series).abs() < 1e-14);
        let closed = flux.closed_form.unwrap();
        assert!((closed - 4.0 * beta * r * r / (1.0 - 4.0 * r)).abs() < 1e-15);
        assert!((closed - flux.truncated).abs() < 1e-4);
    }

    #[test]
    fn norm() {
        assert_eq!(hilbert_norm_sq(&BetaSchedule::zero(4)), 0.0);
        assert_eq!(hilbert_norm_sq(&BetaSchedule::explicit(0.0, vec![0.5])), 1.0);
        let s = uniform_schedule(0.3, 0.2, 12).unwrap();
        let direct: f64 = (1..=12).map(|n| 0.09 * (4.0 * 0.04f64).powi(n)).sum();
        assert!((hilbert_norm_sq(&s) - direct).abs() < 1e-15);
    }

    #[test]
    fn single_diamond_form() {
        let beta = 0.37;
        let g = build_level_graph(1);
        let f = realize_one_form(&BetaSchedule::explicit(0.0, vec![beta]), &g).unwrap();
        assert_eq!(f.values(), &[beta, beta, -beta, -beta]);
        assert!((discrete_flux(&f, &CellWord::root()).unwrap() - 4.0 * beta).abs() < 1e-15);
    }

    #[test]
    fn scale_two_top_top_edge() {
        let (b1, b2) = (0.3, -0.11);
        let g = build_level_graph(2);
        let f = realize_one_form(&BetaSchedule::explicit(0.0, vec![b1, b2]), &g).unwrap();
        let w = CellWord::parse("11").unwrap();
        assert!((f.value(w.index()) - (b1 / 2.0 + b2)).abs() < 1e-16);
    }

    #[test]
    fn errors() {
        let g = build_level_graph(3);
        assert!(matches!(
            realize_one_form(&BetaSchedule::zero(2), &g),
            Err(Error::ScheduleLength { requested: 3, available: 2 })
        ));
        let f = realize_one_form(&BetaSchedule::zero(3), &g).unwrap();
        assert!(matches!(
            discrete_flux(&f, &CellWord::parse("123").unwrap()),
            Err(Error::NoHole { .. })
        ));
    }

    #[test]
    fn schedule_file() {
        let s = BetaSchedule::parse("a0 0.25\nbeta 2 -0.5\n# comment\nbeta 1 1e-3\n").unwrap();
        assert_eq!(s.a0(), 0.25);
        assert_eq!(s.betas(), &[1e-3, -0.5]);
        assert_eq!(BetaSchedule::parse(&s.to_text()).unwrap(), s);

        for bad in [
            "beta 1 0.1\n",
            "a0 0\nbeta 2 0.1\n",
            "a0 0\nbeta 1 x\n",
            "a0 0\nbeta 1 0.1\nbeta 1 0.2\n",
            "a0 0\nfoo\n",
            "",
        ] {
            assert!(matches!(BetaSchedule::parse(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }
}
