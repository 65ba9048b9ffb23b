//! The shift move: remove the element at position `x` and reinsert it so it
//! lands at position `y`, preserving all other relative orders.
//!
//! The neighborhood of a permutation of length `n` is the (n-1)^2 position
//! pairs (x, y) with `y != x` and `y != x - 1` (shifting to `x - 1` would
//! duplicate the (x-1, x) move).

use rand::Rng;

use crate::model::Permutation;

use super::SearchError;

/// A legal shift move; positions are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftMove {
    pub x: usize,
    pub y: usize,
}

impl ShiftMove {
    pub fn new(x: usize, y: usize, n: usize) -> Result<Self, SearchError> {
        if x < 1 || x > n || y < 1 || y > n {
            return Err(SearchError::InvalidMove(format!(
                "positions ({x},{y}) out of range 1..={n}"
            )));
        }
        if y == x {
            return Err(SearchError::InvalidMove("y must differ from x".into()));
        }
        if y + 1 == x {
            return Err(SearchError::InvalidMove("y must differ from x - 1".into()));
        }
        Ok(ShiftMove { x, y })
    }

    /// Uniform draw over the (n-1)^2 legal pairs: both positions are drawn
    /// with replacement and the pair is redrawn until legal. Requires n >= 2.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ShiftMove {
        debug_assert!(n >= 2);
        loop {
            let x = rng.random_range(1..=n);
            let y = rng.random_range(1..=n);
            if y != x && y + 1 != x {
                return ShiftMove { x, y };
            }
        }
    }
}

/// Applies a shift move, yielding a fresh permutation.
pub fn apply_shift(perm: &Permutation, mv: ShiftMove) -> Permutation {
    debug_assert!(ShiftMove::new(mv.x, mv.y, perm.len()).is_ok());
    let mut order = perm.as_slice().to_vec();
    let elem = order.remove(mv.x - 1);
    order.insert(mv.y - 1, elem);
    Permutation::from_order_unchecked(order)
}

/// All legal moves for a permutation of length `n`, in (x, y) order.
pub fn all_moves(n: usize) -> Vec<ShiftMove> {
    let mut moves = Vec::with_capacity((n.saturating_sub(1)).pow(2));
    for x in 1..=n {
        for y in 1..=n {
            if y != x && y + 1 != x {
                moves.push(ShiftMove { x, y });
            }
        }
    }
    moves
}
