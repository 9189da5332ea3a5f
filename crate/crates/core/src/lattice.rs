//! Lattice coordinate bookkeeping shared by the mappings.
//!
//! Mode lattices are `l1` columns by `l2` rows, coordinates `(col, row)`
//! 1-based with `(1, 1)` in the south-west corner. Qubit layouts store
//! positions in half-integer units so auxiliary qubits can sit between rows.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Canonical orderings of an `l1 x l2` block of modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Traversal {
    /// Boustrophedon: row 1 runs left to right, row 2 right to left, ...
    SPattern,
    /// Every row runs left to right.
    Typewriter,
}

/// Bijection between lattice coordinates and canonical 0-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeOrder {
    pub l1: usize,
    pub l2: usize,
    pub traversal: Traversal,
}

impl LatticeOrder {
    pub fn s_pattern(l1: usize, l2: usize) -> Self {
        LatticeOrder {
            l1,
            l2,
            traversal: Traversal::SPattern,
        }
    }

    pub fn typewriter(l1: usize, l2: usize) -> Self {
        LatticeOrder {
            l1,
            l2,
            traversal: Traversal::Typewriter,
        }
    }

    pub fn n(&self) -> usize {
        self.l1 * self.l2
    }

    /// 0-based canonical index of the 1-based coordinate `(col, row)`.
    pub fn index(&self, col: usize, row: usize) -> usize {
        debug_assert!((1..=self.l1).contains(&col) && (1..=self.l2).contains(&row));
        let in_row = match self.traversal {
            Traversal::Typewriter => col - 1,
            Traversal::SPattern => {
                if row % 2 == 1 {
                    col - 1
                } else {
                    self.l1 - col
                }
            }
        };
        (row - 1) * self.l1 + in_row
    }

    /// Inverse of [`LatticeOrder::index`].
    pub fn coord(&self, index: usize) -> (usize, usize) {
        let row = index / self.l1 + 1;
        let in_row = index % self.l1;
        let col = match self.traversal {
            Traversal::Typewriter => in_row + 1,
            Traversal::SPattern => {
                if row % 2 == 1 {
                    in_row + 1
                } else {
                    self.l1 - in_row
                }
            }
        };
        (col, row)
    }
}

/// Position in half-integer units: `(2*col, 2*row)` stored as integers.
pub type HalfPos = (i64, i64);

/// Doubles an integer coordinate.
pub fn at(col: usize, row: usize) -> HalfPos {
    (2 * col as i64, 2 * row as i64)
}

/// Position halfway between rows: `(col, row + 1/2)`.
pub fn at_half_row(col: usize, row: usize) -> HalfPos {
    (2 * col as i64, 2 * row as i64 + 1)
}

/// Geometric layout of a qubit register with explicit couplings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QubitLayout {
    /// Position of each qubit, indexed by qubit number.
    pub positions: Vec<HalfPos>,
    /// Undirected adjacency list; `edges[q]` is sorted.
    pub edges: Vec<Vec<usize>>,
}

impl QubitLayout {
    pub fn new(positions: Vec<HalfPos>) -> Self {
        let n = positions.len();
        QubitLayout {
            positions,
            edges: vec![Vec::new(); n],
        }
    }

    /// A plain `l1 x l2` square lattice with nearest-neighbor couplings,
    /// qubit order defined by `order`.
    pub fn square(order: &LatticeOrder) -> Self {
        let mut positions = vec![(0, 0); order.n()];
        for row in 1..=order.l2 {
            for col in 1..=order.l1 {
                positions[order.index(col, row)] = at(col, row);
            }
        }
        let mut layout = QubitLayout::new(positions);
        for row in 1..=order.l2 {
            for col in 1..=order.l1 {
                if col < order.l1 {
                    layout.add_edge(order.index(col, row), order.index(col + 1, row));
                }
                if row < order.l2 {
                    layout.add_edge(order.index(col, row), order.index(col, row + 1));
                }
            }
        }
        layout
    }

    /// A 1 x n chain.
    pub fn chain(n: usize) -> Self {
        let mut layout = QubitLayout::new((0..n).map(|q| (2 * q as i64, 0)).collect());
        for q in 0..n.saturating_sub(1) {
            layout.add_edge(q, q + 1);
        }
        layout
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.len() && b < self.len());
        if !self.edges[a].contains(&b) {
            self.edges[a].push(b);
            self.edges[a].sort_unstable();
            self.edges[b].push(a);
            self.edges[b].sort_unstable();
        }
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.edges[a].binary_search(&b).is_ok()
    }

    /// Whether `qubits` induces a connected subgraph (true for empty sets).
    pub fn is_connected(&self, qubits: &[usize]) -> bool {
        if qubits.len() <= 1 {
            return true;
        }
        let set: std::collections::HashSet<usize> = qubits.iter().copied().collect();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![qubits[0]];
        seen.insert(qubits[0]);
        while let Some(q) = stack.pop() {
            for &m in &self.edges[q] {
                if set.contains(&m) && seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen.len() == qubits.len()
    }

    /// Breadth-first shortest path between two qubits along layout edges,
    /// inclusive of both endpoints. Ties are broken toward lower indices.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from == to {
            return Some(vec![from]);
        }
        let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(q) = queue.pop_front() {
            for &m in &self.edges[q] {
                if m != from && !prev.contains_key(&m) {
                    prev.insert(m, q);
                    if m == to {
                        let mut path = vec![to];
                        let mut cur = to;
                        while cur != from {
                            cur = prev[&cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(m);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_pattern_matches_figure_labels() {
        // 4-wide lattice: first winding sends 4 -> 5 straight up.
        let ord = LatticeOrder::s_pattern(4, 5);
        assert_eq!(ord.index(4, 1), 3); // label 4
        assert_eq!(ord.index(4, 2), 4); // label 5
        assert_eq!(ord.index(1, 2), 7); // label 8
        for i in 0..ord.n() {
            let (c, r) = ord.coord(i);
            assert_eq!(ord.index(c, r), i);
        }
    }

    #[test]
    fn single_row_is_plain_order() {
        let ord = LatticeOrder::s_pattern(1, 6);
        for row in 1..=6 {
            assert_eq!(ord.index(1, row), row - 1);
        }
    }

    #[test]
    fn typewriter_rows_left_to_right() {
        let ord = LatticeOrder::typewriter(4, 3);
        assert_eq!(ord.index(1, 2), 4); // label 5
        assert_eq!(ord.index(4, 2), 7); // label 8
    }

    #[test]
    fn square_layout_edges() {
        let layout = QubitLayout::square(&LatticeOrder::s_pattern(3, 2));
        assert_eq!(layout.len(), 6);
        // (1,1) touches (2,1) and (1,2).
        let a = LatticeOrder::s_pattern(3, 2).index(1, 1);
        let b = LatticeOrder::s_pattern(3, 2).index(2, 1);
        let c = LatticeOrder::s_pattern(3, 2).index(1, 2);
        assert!(layout.are_adjacent(a, b));
        assert!(layout.are_adjacent(a, c));
        assert!(layout.is_connected(&(0..6).collect::<Vec<_>>()));
    }

    #[test]
    fn shortest_path_on_chain() {
        let layout = QubitLayout::chain(5);
        assert_eq!(layout.shortest_path(0, 4).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(layout.shortest_path(2, 2).unwrap(), vec![2]);
    }
}
