//! Labelling every arc of a tangle from its generating pair.

use alloc::vec;
use alloc::vec::Vec;

use super::diagram::{Diagram, DirectedArc};
use super::TangleError;
use crate::mat2::Mat2;

/// Matrices on the arcs of a diagram, stored for the forward direction;
/// the reverse direction carries the inverse `-rho`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RepAssignment(pub Vec<Option<Mat2>>);

impl RepAssignment {
    pub fn empty(arc_count: usize) -> Self {
        RepAssignment(vec![None; arc_count])
    }

    pub fn arc(&self, arc: usize) -> Option<Mat2> {
        self.0.get(arc).copied().flatten()
    }

    pub fn get(&self, d: DirectedArc) -> Option<Mat2> {
        self.arc(d.arc).map(|m| if d.forward { m } else { -m })
    }

    pub fn set(&mut self, d: DirectedArc, m: Mat2) {
        self.0[d.arc] = Some(if d.forward { m } else { -m });
    }

    pub fn unlabeled(&self) -> usize {
        self.0.iter().filter(|m| m.is_none()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.unlabeled() == 0
    }
}

/// `-x y x^{-1}`: the under-arc leaving a crossing from the one on the other
/// side, both directed away from it.
fn cross(x: &Mat2, y: &Mat2) -> Result<Mat2, TangleError> {
    let inv = x
        .inverse()
        .ok_or(TangleError::Matrix(crate::mat2::Mat2Error::SingularMatrix))?;
    Ok(-(*x * *y * inv))
}

/// Labels the arcs of block `index` starting from `(x, y)` on its
/// generating pair.
pub fn propagate_block(
    d: &Diagram,
    index: usize,
    x: Mat2,
    y: Mat2,
    asg: &mut RepAssignment,
) -> Result<(), TangleError> {
    let block = &d.blocks[index];
    let g = block.generators.ok_or(TangleError::NoGeneratingPair)?;
    asg.set(g.x, x);
    asg.set(g.y, y);
    let crossings = &d.crossings[block.first_crossing..block.first_crossing + block.crossing_count];
    let mut done = vec![false; crossings.len()];
    loop {
        let mut progress = false;
        for (c, finished) in crossings.iter().zip(done.iter_mut()) {
            if *finished {
                continue;
            }
            let Some(over) = asg.arc(c.over) else {
                continue;
            };
            match (asg.get(c.under_in), asg.get(c.under_out)) {
                (Some(_), Some(_)) => {}
                (Some(a), None) => asg.set(c.under_out, cross(&over, &a)?),
                (None, Some(b)) => asg.set(c.under_in, cross(&over, &b)?),
                (None, None) => continue,
            }
            *finished = true;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let unlabeled = (block.first_arc..block.first_arc + block.arc_count)
        .filter(|&a| asg.arc(a).is_none())
        .count();
    if unlabeled > 0 {
        return Err(TangleError::PropagationOrder { unlabeled });
    }
    Ok(())
}

/// Labels a single-block diagram from `(X, Y)`.
pub fn propagate(d: &Diagram, x: Mat2, y: Mat2) -> Result<RepAssignment, TangleError> {
    let mut asg = RepAssignment::empty(d.arc_count);
    propagate_block(d, 0, x, y, &mut asg)?;
    Ok(asg)
}

/// Labels every block of a stacked diagram from its own `(X_l, Y_l)`.
/// The joins between blocks are not enforced here.
pub fn propagate_montesinos(
    d: &Diagram,
    pairs: &[(Mat2, Mat2)],
) -> Result<RepAssignment, TangleError> {
    if pairs.len() != d.blocks.len() {
        return Err(TangleError::NoGeneratingPair);
    }
    let mut asg = RepAssignment::empty(d.arc_count);
    for (i, (x, y)) in pairs.iter().enumerate() {
        propagate_block(d, i, *x, *y, &mut asg)?;
    }
    Ok(asg)
}
