//! Crossing-level diagrams of tangles and Montesinos links.

use alloc::vec;
use alloc::vec::Vec;

use super::expr::TangleExpr;
use crate::montesinos::MontesinosSpec;
use crate::rational::ContinuedFraction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Corner {
    Nw,
    Ne,
    Sw,
    Se,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::Nw, Corner::Ne, Corner::Sw, Corner::Se];

    fn index(self) -> usize {
        match self {
            Corner::Nw => 0,
            Corner::Ne => 1,
            Corner::Sw => 2,
            Corner::Se => 3,
        }
    }

    fn from_index(i: usize) -> Corner {
        Corner::ALL[i]
    }
}

/// An arc with one of its two directions. `forward` refers to the arbitrary
/// but fixed orientation chosen when the arc was traced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DirectedArc {
    pub arc: usize,
    pub forward: bool,
}

impl DirectedArc {
    pub fn reversed(self) -> DirectedArc {
        DirectedArc {
            arc: self.arc,
            forward: !self.forward,
        }
    }

    fn shifted(self, offset: usize) -> DirectedArc {
        DirectedArc {
            arc: self.arc + offset,
            forward: self.forward,
        }
    }
}

/// A crossing. Both under-arcs are directed away from the crossing, so the
/// relation reads `rho(under_out) = -rho(over) rho(under_in) rho(over)^{-1}`
/// and is symmetric in the two under-arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Crossing {
    pub over: usize,
    pub under_in: DirectedArc,
    pub under_out: DirectedArc,
    /// `[1]` rather than `[-1]`.
    pub positive: bool,
}

/// The four ends of a tangle, directed outwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ends {
    pub nw: DirectedArc,
    pub ne: DirectedArc,
    pub sw: DirectedArc,
    pub se: DirectedArc,
}

impl Ends {
    pub fn get(&self, corner: Corner) -> DirectedArc {
        match corner {
            Corner::Nw => self.nw,
            Corner::Ne => self.ne,
            Corner::Sw => self.sw,
            Corner::Se => self.se,
        }
    }

    fn shifted(&self, offset: usize) -> Ends {
        Ends {
            nw: self.nw.shifted(offset),
            ne: self.ne.shifted(offset),
            sw: self.sw.shifted(offset),
            se: self.se.shifted(offset),
        }
    }
}

/// The arcs carrying the generating pair: `x` is the `nw` end, `y` leaves
/// the first crossing of the tangle at its `sw` corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Generators {
    pub x: DirectedArc,
    pub y: DirectedArc,
}

/// One tangle of a diagram, owning a contiguous range of arcs and crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Block {
    pub expansion: Option<ContinuedFraction>,
    pub first_arc: usize,
    pub arc_count: usize,
    pub first_crossing: usize,
    pub crossing_count: usize,
    pub ends: Ends,
    pub generators: Option<Generators>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum JoinKind {
    /// Between consecutive tangles of a stack.
    Glue,
    /// Closing the composite tangle into a link.
    Closure,
}

/// Two outward ends connected outside their blocks: `rho(a) = -rho(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Join {
    pub a: DirectedArc,
    pub b: DirectedArc,
    pub kind: JoinKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Diagram {
    pub arc_count: usize,
    pub crossings: Vec<Crossing>,
    /// Ends of the composite tangle (before any closure).
    pub ends: Ends,
    pub joins: Vec<Join>,
    pub blocks: Vec<Block>,
}

impl Diagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_closed(&self) -> bool {
        self.joins.iter().any(|j| j.kind == JoinKind::Closure)
    }
}

#[derive(Clone, Copy)]
enum Tile {
    Crossing { positive: bool },
    Zero,
    Infinity,
}

impl Tile {
    /// The corner joined to `c` by a strand inside the tile, if `c` is not
    /// the end of an under-strand.
    fn partner(self, c: Corner) -> Option<Corner> {
        use Corner::*;
        match (self, c) {
            (Tile::Crossing { positive: true }, Nw) => Some(Se),
            (Tile::Crossing { positive: true }, Se) => Some(Nw),
            (Tile::Crossing { positive: false }, Sw) => Some(Ne),
            (Tile::Crossing { positive: false }, Ne) => Some(Sw),
            (Tile::Crossing { .. }, _) => None,
            (Tile::Zero, Nw) => Some(Ne),
            (Tile::Zero, Ne) => Some(Nw),
            (Tile::Zero, Sw) => Some(Se),
            (Tile::Zero, Se) => Some(Sw),
            (Tile::Infinity, Nw) => Some(Sw),
            (Tile::Infinity, Sw) => Some(Nw),
            (Tile::Infinity, Ne) => Some(Se),
            (Tile::Infinity, Se) => Some(Ne),
        }
    }
}

fn point(tile: usize, c: Corner) -> usize {
    4 * tile + c.index()
}

#[derive(Default)]
struct Builder {
    tiles: Vec<Tile>,
    glue: Vec<(usize, usize)>,
}

impl Builder {
    /// Boundary points `[nw, ne, sw, se]` of the sub-tangle.
    fn build(&mut self, e: &TangleExpr) -> [usize; 4] {
        match e {
            TangleExpr::Zero | TangleExpr::Infinity | TangleExpr::Crossing { .. } => {
                let t = self.tiles.len();
                self.tiles.push(match e {
                    TangleExpr::Zero => Tile::Zero,
                    TangleExpr::Infinity => Tile::Infinity,
                    TangleExpr::Crossing { positive } => Tile::Crossing {
                        positive: *positive,
                    },
                    _ => unreachable!(),
                });
                [
                    point(t, Corner::Nw),
                    point(t, Corner::Ne),
                    point(t, Corner::Sw),
                    point(t, Corner::Se),
                ]
            }
            TangleExpr::Horizontal(a, b) => {
                let [anw, ane, asw, ase] = self.build(a);
                let [bnw, bne, bsw, bse] = self.build(b);
                self.glue.push((ane, bnw));
                self.glue.push((ase, bsw));
                [anw, bne, asw, bse]
            }
            TangleExpr::Vertical(a, b) => {
                let [anw, ane, asw, ase] = self.build(a);
                let [bnw, bne, bsw, bse] = self.build(b);
                self.glue.push((asw, bnw));
                self.glue.push((ase, bne));
                [anw, ane, bsw, bse]
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Edge {
    Glue,
    Internal,
}

/// Traces arcs through glued tiles. Returns the arc of every point and
/// whether the arc's forward direction points away from the point's tile.
fn trace_arcs(tiles: &[Tile], glue: &[(usize, usize)]) -> (Vec<usize>, Vec<bool>, usize) {
    let n = 4 * tiles.len();
    let mut glued = vec![None; n];
    for &(a, b) in glue {
        glued[a] = Some(b);
        glued[b] = Some(a);
    }
    let internal = |p: usize| {
        tiles[p / 4]
            .partner(Corner::from_index(p % 4))
            .map(|c| point(p / 4, c))
    };
    let degree = |p: usize| glued[p].is_some() as u8 + internal(p).is_some() as u8;

    let mut arc_of = vec![usize::MAX; n];
    let mut away = vec![false; n];
    let mut arcs = 0;
    // endpoints first, then closed loops
    for pass in 0..2 {
        for start in 0..n {
            if arc_of[start] != usize::MAX || (pass == 0 && degree(start) == 2) {
                continue;
            }
            let arc = arcs;
            arcs += 1;
            let mut p = start;
            let mut came_by: Option<Edge> = None;
            loop {
                arc_of[p] = arc;
                let next = match came_by {
                    None => glued[p]
                        .map(|q| (Edge::Glue, q))
                        .or_else(|| internal(p).map(|q| (Edge::Internal, q))),
                    Some(Edge::Glue) => internal(p).map(|q| (Edge::Internal, q)),
                    Some(Edge::Internal) => glued[p].map(|q| (Edge::Glue, q)),
                };
                match next {
                    Some((edge, q)) => {
                        away[p] = edge == Edge::Glue;
                        if arc_of[q] == arc {
                            break;
                        }
                        p = q;
                        came_by = Some(edge);
                    }
                    None => {
                        away[p] = came_by != Some(Edge::Glue);
                        break;
                    }
                }
            }
        }
    }
    (arc_of, away, arcs)
}

/// Diagram of an arbitrary tangle expression, as a single block.
pub fn build_diagram(expr: &TangleExpr) -> Diagram {
    let mut b = Builder::default();
    let boundary = b.build(expr);
    let (arc_of, away, arc_count) = trace_arcs(&b.tiles, &b.glue);
    let directed = |p: usize| DirectedArc {
        arc: arc_of[p],
        forward: away[p],
    };

    let mut crossings = Vec::new();
    for (t, tile) in b.tiles.iter().enumerate() {
        if let Tile::Crossing { positive } = *tile {
            let (over, input, output) = if positive {
                (Corner::Nw, Corner::Sw, Corner::Ne)
            } else {
                (Corner::Sw, Corner::Nw, Corner::Se)
            };
            crossings.push(Crossing {
                over: arc_of[point(t, over)],
                under_in: directed(point(t, input)),
                under_out: directed(point(t, output)),
                positive,
            });
        }
    }
    let ends = Ends {
        nw: directed(boundary[0]),
        ne: directed(boundary[1]),
        sw: directed(boundary[2]),
        se: directed(boundary[3]),
    };
    let generators = Generators {
        x: ends.nw,
        y: directed(point(0, Corner::Sw)),
    };
    let block = Block {
        expansion: None,
        first_arc: 0,
        arc_count,
        first_crossing: 0,
        crossing_count: crossings.len(),
        ends,
        generators: Some(generators),
    };
    Diagram {
        arc_count,
        crossings,
        ends,
        joins: Vec::new(),
        blocks: vec![block],
    }
}

/// Diagram of `[k_1] | [1/k_2] * [k_3] | ...` with its generating pair.
pub fn build_rational_diagram(ks: &ContinuedFraction) -> Diagram {
    let mut d = build_diagram(&TangleExpr::rational(ks));
    d.blocks[0].expansion = Some(ks.clone());
    d
}

/// The vertical stack of the rational tangles of `spec`, closed by joining
/// `nw` to `sw` and `ne` to `se`.
pub fn build_montesinos_diagram(spec: &MontesinosSpec) -> Diagram {
    let mut arc_count = 0;
    let mut crossings = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    let mut joins = Vec::new();
    for td in spec.tangles() {
        let d = build_rational_diagram(&td.expansion);
        let block = &d.blocks[0];
        let ends = block.ends.shifted(arc_count);
        if let Some(prev) = blocks.last() {
            joins.push(Join {
                a: prev.ends.sw,
                b: ends.nw,
                kind: JoinKind::Glue,
            });
            joins.push(Join {
                a: prev.ends.se,
                b: ends.ne,
                kind: JoinKind::Glue,
            });
        }
        let generators = block.generators.map(|g| Generators {
            x: g.x.shifted(arc_count),
            y: g.y.shifted(arc_count),
        });
        blocks.push(Block {
            expansion: block.expansion.clone(),
            first_arc: arc_count,
            arc_count: d.arc_count,
            first_crossing: crossings.len(),
            crossing_count: d.crossings.len(),
            ends,
            generators,
        });
        crossings.extend(d.crossings.iter().map(|c| Crossing {
            over: c.over + arc_count,
            under_in: c.under_in.shifted(arc_count),
            under_out: c.under_out.shifted(arc_count),
            positive: c.positive,
        }));
        arc_count += d.arc_count;
    }
    let first = blocks[0].ends;
    let last = blocks[blocks.len() - 1].ends;
    let ends = Ends {
        nw: first.nw,
        ne: first.ne,
        sw: last.sw,
        se: last.se,
    };
    joins.push(Join {
        a: ends.nw,
        b: ends.sw,
        kind: JoinKind::Closure,
    });
    joins.push(Join {
        a: ends.ne,
        b: ends.se,
        kind: JoinKind::Closure,
    });
    Diagram {
        arc_count,
        crossings,
        ends,
        joins,
        blocks,
    }
}
