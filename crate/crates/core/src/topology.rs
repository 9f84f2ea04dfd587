//! Scale-m graph approximations of the diamond lattice fractal.
//!
//! The scale-0 graph is a single edge between the two boundary vertices.
//! Each refinement replaces every edge `p -> q` by a diamond with a new top
//! vertex `t` and bottom vertex `b`, giving the four child edges `p -> t`,
//! `t -> q`, `p -> b` and `b -> q`. Vertices are numbered coarse-first: all
//! of `V_{m-1}` precedes the vertices born at scale `m`, so the coarse/fine
//! split used by the Schur complement is a contiguous block split.

use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};

/// Position of a child edge inside its parent diamond.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    /// `p -> t`
    TopFirst,
    /// `t -> q`
    TopSecond,
    /// `p -> b`
    BottomFirst,
    /// `b -> q`
    BottomSecond,
}

impl Slot {
    pub const ALL: [Slot; 4] = [
        Slot::TopFirst,
        Slot::TopSecond,
        Slot::BottomFirst,
        Slot::BottomSecond,
    ];

    pub fn is_top(self) -> bool {
        matches!(self, Slot::TopFirst | Slot::TopSecond)
    }

    /// Orientation of the edge relative to the loop `p -> t -> q -> b -> p`.
    pub fn loop_sign(self) -> f64 {
        if self.is_top() {
            1.0
        } else {
            -1.0
        }
    }

    /// Index of the self-similar map `F_j` whose image of `[-1, 1] x {0}` is
    /// this child edge in the planar embedding.
    fn ifs_index(self) -> u32 {
        match self {
            Slot::TopFirst => 2,
            Slot::TopSecond => 1,
            Slot::BottomFirst => 3,
            Slot::BottomSecond => 4,
        }
    }
}

/// Assignment of the word letters `1..=4` to child slots.
///
/// The standard order is `1 = p->t`, `2 = t->q`, `3 = p->b`, `4 = b->q`.
/// Other orders relabel cells (and therefore renumber vertices) without
/// changing the graph up to isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChildOrder([Slot; 4]);

impl ChildOrder {
    pub const STANDARD: ChildOrder = ChildOrder(Slot::ALL);

    pub fn new(slots: [Slot; 4]) -> Result<Self> {
        for s in Slot::ALL {
            if slots.iter().filter(|&&x| x == s).count() != 1 {
                return Err(Error::Domain(format!(
                    "child order {slots:?} is not a permutation of the four slots"
                )));
            }
        }
        Ok(ChildOrder(slots))
    }

    /// Slot of the child labelled `letter` (1-based).
    pub fn slot(&self, letter: u8) -> Slot {
        self.0[usize::from(letter - 1)]
    }

    /// All 24 child orders.
    pub fn all() -> Vec<ChildOrder> {
        let mut out = Vec::with_capacity(24);
        let s = Slot::ALL;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut seen = [false; 4];
                        if idx.iter().all(|&i| !std::mem::replace(&mut seen[i], true)) {
                            out.push(ChildOrder([s[a], s[b], s[c], s[d]]));
                        }
                    }
                }
            }
        }
        out
    }
}

impl Default for ChildOrder {
    fn default() -> Self {
        ChildOrder::STANDARD
    }
}

/// Combinatorial address of a cell: a word over `{1, 2, 3, 4}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellWord(Vec<u8>);

impl CellWord {
    pub fn root() -> Self {
        CellWord(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|l| !(1..=4).contains(*l)) {
            return Err(Error::Address(format!("letter {bad} is outside 1..=4")));
        }
        Ok(CellWord(letters))
    }

    /// Parses a word such as `"231"`. The empty string and `"-"` denote the
    /// root cell.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Self::root());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                '1'..='4' => Ok(c as u8 - b'0'),
                _ => Err(Error::Address(format!("invalid letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CellWord(letters))
    }

    /// Word of length `len` whose base-4 digits (letter - 1) spell `index`.
    pub fn from_index(len: usize, mut index: usize) -> Self {
        let mut letters = vec![0u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = (index % 4) as u8 + 1;
            index /= 4;
        }
        CellWord(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Position of this cell among the `4^len` cells of its scale.
    pub fn index(&self) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &l| acc * 4 + usize::from(l - 1))
    }

    pub fn child(&self, letter: u8) -> Result<Self> {
        if !(1..=4).contains(&letter) {
            return Err(Error::Address(format!("letter {letter} is outside 1..=4")));
        }
        let mut letters = self.0.clone();
        letters.push(letter);
        Ok(CellWord(letters))
    }

    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(CellWord(self.0[..self.0.len() - 1].to_vec()))
        }
    }
}

impl fmt::Display for CellWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Endpoints of a cell, `F_w(-1, 0)` and `F_w(1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub source: usize,
    pub target: usize,
}

/// A directed edge of the scale-m graph together with its index; the index
/// is the base-4 value of the owning cell word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub index: usize,
    pub source: usize,
    pub target: usize,
}

/// One end of an edge as seen from a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: usize,
    pub edge: usize,
    /// `true` when the edge is directed away from the vertex.
    pub outgoing: bool,
}

/// The scale-m graph approximation, fully materialized.
#[derive(Clone, Debug)]
pub struct LevelGraph {
    scale: usize,
    order: ChildOrder,
    birth: Vec<usize>,
    degree: Vec<usize>,
    /// `cells[k][w.index()]` for every cell of length `k <= scale`.
    cells: Vec<Vec<Cell>>,
    /// `interior[k][w.index()] = (top, bottom)` for cells of length `k < scale`.
    interior: Vec<Vec<(usize, usize)>>,
    incidence: Vec<Vec<Incidence>>,
}

/// `|V_m| = (2/3)(4^m + 2)`.
pub fn vertex_count(m: usize) -> usize {
    (2 * (4usize.pow(m as u32) + 2)) / 3
}

/// Builds the scale-m graph with the standard child order.
pub fn build_level_graph(m: usize) -> LevelGraph {
    build_level_graph_with_order(m, ChildOrder::STANDARD)
}

pub fn build_level_graph_with_order(m: usize, order: ChildOrder) -> LevelGraph {
    let mut birth = vec![0usize, 0];
    let mut cells = vec![vec![Cell {
        source: 0,
        target: 1,
    }]];
    let mut interior = Vec::with_capacity(m);

    for k in 1..=m {
        let parents = &cells[k - 1];
        let mut level = Vec::with_capacity(parents.len() * 4);
        let mut diamonds = Vec::with_capacity(parents.len());
        for parent in parents {
            let (p, q) = (parent.source, parent.target);
            let mut top = None;
            let mut bottom = None;
            for letter in 1..=4u8 {
                let slot = order.slot(letter);
                let hub = if slot.is_top() { &mut top } else { &mut bottom };
                let v = *hub.get_or_insert_with(|| {
                    birth.push(k);
                    birth.len() - 1
                });
                level.push(match slot {
                    Slot::TopFirst | Slot::BottomFirst => Cell {
                        source: p,
                        target: v,
                    },
                    Slot::TopSecond | Slot::BottomSecond => Cell {
                        source: v,
                        target: q,
                    },
                });
            }
            diamonds.push((top.expect("top created"), bottom.expect("bottom created")));
        }
        cells.push(level);
        interior.push(diamonds);
    }

    let n = birth.len();
    let mut degree = vec![0usize; n];
    let mut incidence = vec![Vec::new(); n];
    for (index, c) in cells[m].iter().enumerate() {
        degree[c.source] += 1;
        degree[c.target] += 1;
        incidence[c.source].push(Incidence {
            neighbor: c.target,
            edge: index,
            outgoing: true,
        });
        incidence[c.target].push(Incidence {
            neighbor: c.source,
            edge: index,
            outgoing: false,
        });
    }

    LevelGraph {
        scale: m,
        order,
        birth,
        degree,
        cells,
        interior,
        incidence,
    }
}

impl LevelGraph {
    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn order(&self) -> ChildOrder {
        self.order
    }

    pub fn vertex_count(&self) -> usize {
        self.birth.len()
    }

    pub fn edge_count(&self) -> usize {
        self.cells[self.scale].len()
    }

    /// Number of vertices of `V_k`, which are the first indices of this graph.
    pub fn coarse_vertex_count(&self, k: usize) -> usize {
        assert!(k <= self.scale, "scale {k} exceeds graph scale {}", self.scale);
        vertex_count(k)
    }

    /// The two `V_0` vertices, left then right.
    pub fn boundary(&self) -> (usize, usize) {
        (0, 1)
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        v < 2
    }

    pub fn birth_level(&self, v: usize) -> usize {
        self.birth[v]
    }

    pub fn birth_levels(&self) -> &[usize] {
        &self.birth
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn incidence(&self, v: usize) -> &[Incidence] {
        &self.incidence[v]
    }

    /// Cells of length `k`, indexed by word index.
    pub fn cells_at(&self, k: usize) -> &[Cell] {
        &self.cells[k]
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.cells[self.scale]
            .iter()
            .enumerate()
            .map(|(index, c)| Edge {
                index,
                source: c.source,
                target: c.target,
            })
    }

    pub fn edge(&self, index: usize) -> Edge {
        let c = self.cells[self.scale][index];
        Edge {
            index,
            source: c.source,
            target: c.target,
        }
    }

    pub fn cell(&self, w: &CellWord) -> Result<Cell> {
        if w.len() > self.scale {
            return Err(Error::Address(format!(
                "word {w} is longer than the graph scale {}",
                self.scale
            )));
        }
        Ok(self.cells[w.len()][w.index()])
    }

    /// Top and bottom vertices created when cell `w` is refined.
    pub fn interior_vertices(&self, w: &CellWord) -> Result<(usize, usize)> {
        if w.len() >= self.scale {
            return Err(Error::Address(format!(
                "cell {w} is not refined in a scale-{} graph",
                self.scale
            )));
        }
        Ok(self.interior[w.len()][w.index()])
    }
}

/// Returns `(F_w(-1, 0), F_w(1, 0))` as vertex indices.
pub fn cell_boundary(g: &LevelGraph, w: &CellWord) -> Result<(usize, usize)> {
    let c = g.cell(w)?;
    Ok((c.source, c.target))
}

fn check_area_factor(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 0.125) {
        return Err(Error::Domain(format!(
            "area factor s = {s} must satisfy 0 < s <= 1/8"
        )));
    }
    Ok(())
}

/// Area enclosed by a scale-m cell of the planar embedding, `2 s^(m-1)`.
pub fn cell_area(m: usize, s: f64) -> Result<f64> {
    check_area_factor(s)?;
    if m == 0 {
        return Err(Error::Domain("cell area is defined for m >= 1".into()));
    }
    Ok(2.0 * s.powi(m as i32 - 1))
}

/// Planar realization of a level graph by the self-similar maps `F_j`.
#[derive(Clone, Debug)]
pub struct Embedding {
    s: f64,
    order: ChildOrder,
    coords: Vec<[f64; 2]>,
}

impl Embedding {
    pub fn new(g: &LevelGraph, s: f64) -> Result<Self> {
        check_area_factor(s)?;
        let order = g.order();
        let mut coords = vec![[0.0; 2]; g.vertex_count()];
        coords[0] = [-1.0, 0.0];
        coords[1] = [1.0, 0.0];
        for k in 0..g.scale() {
            for (index, &(top, bottom)) in g.interior[k].iter().enumerate() {
                let w = CellWord::from_index(k, index);
                coords[top] = cell_map(order, &w, s, [0.0, 1.0]);
                coords[bottom] = cell_map(order, &w, s, [0.0, -1.0]);
            }
        }
        Ok(Embedding { s, order, coords })
    }

    pub fn area_factor(&self) -> f64 {
        self.s
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn point(&self, v: usize) -> [f64; 2] {
        self.coords[v]
    }

    /// Largest distance between an edge endpoint and the image of `(-1, 0)`
    /// or `(1, 0)` under the map of the owning cell.
    pub fn edge_consistency(&self, g: &LevelGraph) -> f64 {
        let mut worst: f64 = 0.0;
        for e in g.edges() {
            let w = CellWord::from_index(g.scale(), e.index);
            let a = cell_map(self.order, &w, self.s, [-1.0, 0.0]);
            let b = cell_map(self.order, &w, self.s, [1.0, 0.0]);
            worst = worst
                .max(dist(a, self.coords[e.source]))
                .max(dist(b, self.coords[e.target]));
        }
        worst
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// The map `F_j` attached to a child slot.
pub fn ifs_map(slot: Slot, s: f64, p: [f64; 2]) -> [f64; 2] {
    let j = slot.ifs_index();
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let angle = f64::from(2 * j - 1) * std::f64::consts::FRAC_PI_4;
    let shift = std::f64::consts::FRAC_1_SQRT_2;
    [
        0.5 * p[0] + shift * angle.cos(),
        0.5 * sign * p[0] + 2.0 * s * p[1] + shift * angle.sin(),
    ]
}

/// `F_w = F_{w_1} o ... o F_{w_m}` applied to `p`.
pub fn cell_map(order: ChildOrder, w: &CellWord, s: f64, p: [f64; 2]) -> [f64; 2] {
    w.letters()
        .iter()
        .rev()
        .fold(p, |acc, &l| ifs_map(order.slot(l), s, acc))
}

/// Writes one line per edge: `m source target cell_word birth_src birth_tgt`.
pub fn write_edge_list<W: Write>(g: &LevelGraph, out: &mut W) -> io::Result<()> {
    for e in g.edges() {
        writeln!(
            out,
            "{} {} {} {} {} {}",
            g.scale(),
            e.source,
            e.target,
            CellWord::from_index(g.scale(), e.index),
            g.birth_level(e.source),
            g.birth_level(e.target)
        )?;
    }
    Ok(())
}
