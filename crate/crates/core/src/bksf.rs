//! Superfast simulation on the rotated square lattice: edge and vertex
//! operators, the two edge-ordering variants, loop stabilizers and parity
//! sectors.
//!
//! Modes live on an `l1 x l2` grid; one qubit sits on every lattice edge.
//! `A_jk` represents `-i m_j m_k`, `B_k` represents `-i m_k mbar_k`, and the
//! products of `A` around white plaquettes are the stabilizers.

use crate::fermion::{FermionSum, MajoranaFactor};
use crate::lattice::QubitLayout;
use crate::pauli::{Pauli, PauliString, PauliSum};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BksfError {
    #[error("mode {0} out of range for {1} modes")]
    ModeOutOfRange(usize, usize),
    #[error("modes {0} and {1} are not adjacent on the lattice")]
    NotAnEdge(usize, usize),
    #[error("path is disconnected at step {0}")]
    DisconnectedPath(usize),
    #[error("term has odd fermionic parity; the mapping covers operator pairs only")]
    ParityViolation,
    #[error("lattice must be at least 2 x 2")]
    TooSmall,
}

/// Per-vertex edge ordering; see the two table rows of orderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// top < left < right < bottom; long horizontal chains disconnect.
    V1,
    /// bottom < right < top < left; continuous strings in both directions.
    V2,
}

/// The four edge slots at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Top,
    Left,
    Right,
    Bottom,
}

fn slot_rank(variant: Variant, slot: Slot) -> u8 {
    match variant {
        Variant::V1 => match slot {
            Slot::Top => 1,
            Slot::Left => 2,
            Slot::Right => 3,
            Slot::Bottom => 4,
        },
        Variant::V2 => match slot {
            Slot::Bottom => 1,
            Slot::Right => 2,
            Slot::Top => 3,
            Slot::Left => 4,
        },
    }
}

/// Parity sector selection for the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Even,
    /// Odd-parity simulation with plaquette `k0` switched to "filled":
    /// `B_{k0} -> -B_{k0}`.
    Odd { k0: usize },
}

/// The rotated-lattice interaction graph with one qubit per edge.
#[derive(Debug, Clone)]
pub struct BksfGraph {
    pub l1: usize,
    pub l2: usize,
    pub variant: Variant,
    /// Qubit of the undirected edge, keyed by `(min mode, max mode)`.
    pub qubit_of_edge: BTreeMap<(usize, usize), usize>,
    /// Inverse of `qubit_of_edge`.
    pub edges: Vec<(usize, usize)>,
    pub layout: QubitLayout,
}

pub fn build_bksf(l1: usize, l2: usize, variant: Variant) -> Result<BksfGraph, BksfError> {
    // Degenerate strips are fine as long as at least one edge exists.
    if l1 * l2 < 2 {
        return Err(BksfError::TooSmall);
    }
    let mode = |x: usize, y: usize| (y - 1) * l1 + (x - 1);
    let mut qubit_of_edge = BTreeMap::new();
    let mut edges = Vec::new();
    let mut positions = Vec::new();
    // Horizontal edges of row y sit at (x + 1/2, y); vertical at (x, y + 1/2).
    for y in 1..=l2 {
        for x in 1..l1 {
            qubit_of_edge.insert((mode(x, y), mode(x + 1, y)), edges.len());
            edges.push((mode(x, y), mode(x + 1, y)));
            positions.push((2 * x as i64 + 1, 2 * y as i64));
        }
        if y < l2 {
            for x in 1..=l1 {
                qubit_of_edge.insert((mode(x, y), mode(x, y + 1)), edges.len());
                edges.push((mode(x, y), mode(x, y + 1)));
                positions.push((2 * x as i64, 2 * y as i64 + 1));
            }
        }
    }
    let mut layout = QubitLayout::new(positions);
    // Edge qubits couple when they share a plaquette corner, i.e. their
    // positions differ by (1, 1) in half-integer units.
    for a in 0..layout.len() {
        for b in a + 1..layout.len() {
            let (pa, pb) = (layout.positions[a], layout.positions[b]);
            if (pa.0 - pb.0).abs() == 1 && (pa.1 - pb.1).abs() == 1 {
                layout.add_edge(a, b);
            }
        }
    }
    Ok(BksfGraph {
        l1,
        l2,
        variant,
        qubit_of_edge,
        edges,
        layout,
    })
}

impl BksfGraph {
    pub fn n_modes(&self) -> usize {
        self.l1 * self.l2
    }

    pub fn n_qubits(&self) -> usize {
        self.edges.len()
    }

    pub fn mode_index(&self, x: usize, y: usize) -> usize {
        (y - 1) * self.l1 + (x - 1)
    }

    pub fn mode_coord(&self, k: usize) -> (usize, usize) {
        (k % self.l1 + 1, k / self.l1 + 1)
    }

    fn edge_qubit(&self, j: usize, k: usize) -> Option<usize> {
        self.qubit_of_edge.get(&(j.min(k), j.max(k))).copied()
    }

    /// Which slot the edge to `other` occupies at `vertex`.
    fn slot_at(&self, vertex: usize, other: usize) -> Slot {
        let (vx, vy) = self.mode_coord(vertex);
        let (ox, oy) = self.mode_coord(other);
        if oy == vy + 1 {
            Slot::Top
        } else if oy + 1 == vy {
            Slot::Bottom
        } else if ox == vx + 1 {
            Slot::Right
        } else {
            debug_assert!(ox + 1 == vx);
            Slot::Left
        }
    }

    /// Neighbors of a vertex on the mode lattice.
    fn neighbors(&self, k: usize) -> Vec<usize> {
        let (x, y) = self.mode_coord(k);
        let mut out = Vec::with_capacity(4);
        if x > 1 {
            out.push(self.mode_index(x - 1, y));
        }
        if x < self.l1 {
            out.push(self.mode_index(x + 1, y));
        }
        if y > 1 {
            out.push(self.mode_index(x, y - 1));
        }
        if y < self.l2 {
            out.push(self.mode_index(x, y + 1));
        }
        out
    }

    /// Orientation: horizontal edges point +x, vertical +y.
    fn epsilon(&self, j: usize, k: usize) -> i8 {
        let (jx, jy) = self.mode_coord(j);
        let (kx, ky) = self.mode_coord(k);
        if kx == jx + 1 || ky == jy + 1 {
            1
        } else {
            -1
        }
    }

    /// Vertex operator `B_k`: Z on every edge incident to `k`.
    pub fn vertex_operator(&self, k: usize) -> Result<PauliString, BksfError> {
        if k >= self.n_modes() {
            return Err(BksfError::ModeOutOfRange(k, self.n_modes()));
        }
        let mut s = PauliString::identity(self.n_qubits());
        for nb in self.neighbors(k) {
            s.apply_letter(self.edge_qubit(k, nb).expect("neighbor edge"), Pauli::Z);
        }
        Ok(s)
    }

    /// Local edge operator `A_jk` for lattice-adjacent modes: `epsilon_jk`
    /// times X on the edge qubit and Z on every lower-ordered edge at both
    /// endpoints.
    pub fn edge_operator(&self, j: usize, k: usize) -> Result<PauliString, BksfError> {
        let q = self
            .edge_qubit(j, k)
            .ok_or(BksfError::NotAnEdge(j, k))?;
        let mut s = PauliString::identity(self.n_qubits());
        s.apply_letter(q, Pauli::X);
        for (vertex, other) in [(k, j), (j, k)] {
            let here = slot_rank(self.variant, self.slot_at(vertex, other));
            for nb in self.neighbors(vertex) {
                if nb != other && slot_rank(self.variant, self.slot_at(vertex, nb)) < here {
                    s.apply_letter(self.edge_qubit(vertex, nb).expect("edge"), Pauli::Z);
                }
            }
        }
        if self.epsilon(j, k) < 0 {
            s.mul_phase(2);
        }
        Ok(s)
    }

    /// Long-range edge operator along a connected mode path:
    /// `A_{k1 kl} = i^(edges-1) prod_s A_{k_s k_{s+1}}`.
    pub fn edge_operator_path(&self, path: &[usize]) -> Result<PauliString, BksfError> {
        if path.len() < 2 {
            return Err(BksfError::DisconnectedPath(0));
        }
        let mut s = PauliString::identity(self.n_qubits());
        for (step, pair) in path.windows(2).enumerate() {
            if self.edge_qubit(pair[0], pair[1]).is_none() {
                return Err(BksfError::DisconnectedPath(step));
            }
            s = s
                .mul(&self.edge_operator(pair[0], pair[1])?)
                .expect("same register");
        }
        let phase = ((path.len() - 2) % 4) as u8;
        s.mul_phase(phase);
        Ok(s)
    }

    /// Default long-range path: down the source column to the target row,
    /// then along that row. Vertical runs on the last column pick up almost
    /// no dressing under the default ordering, so they are detoured one
    /// column inward to keep routed weights tracking the Manhattan distance.
    pub fn staircase(&self, j: usize, k: usize) -> Vec<usize> {
        let (jx, jy) = self.mode_coord(j);
        let (kx, ky) = self.mode_coord(k);
        let mut path = vec![j];
        let mut x = jx;
        if jy != ky && jx == self.l1 && self.l1 > 1 {
            x = self.l1 - 1;
            path.push(self.mode_index(x, jy));
        }
        // Horizontal runs along the top and bottom rows are likewise cheap;
        // cross them one row inward when the path has to turn.
        let crossing_row = if x != kx && (ky == self.l2 || ky == 1) && self.l2 > 2 && jy != ky {
            if ky == self.l2 {
                self.l2 - 1
            } else {
                2
            }
        } else {
            ky
        };
        let mut y = jy;
        while y != crossing_row {
            y = if crossing_row > y { y + 1 } else { y - 1 };
            path.push(self.mode_index(x, y));
        }
        while x != kx {
            x = if kx > x { x + 1 } else { x - 1 };
            path.push(self.mode_index(x, crossing_row));
        }
        while y != ky {
            y = if ky > y { y + 1 } else { y - 1 };
            path.push(self.mode_index(x, y));
        }
        path
    }

    /// `A` between arbitrary modes along the default staircase. The path is
    /// anchored at the lower mode index so that `A_kj = -A_jk` holds exactly
    /// for routed operators as well.
    pub fn edge_operator_routed(&self, j: usize, k: usize) -> Result<PauliString, BksfError> {
        if self.edge_qubit(j, k).is_some() {
            return self.edge_operator(j, k);
        }
        let mut a = self.edge_operator_path(&self.staircase(j.min(k), j.max(k)))?;
        if j > k {
            a.mul_phase(2);
        }
        Ok(a)
    }

    /// One loop stabilizer per white plaquette: the exact product of the
    /// four `A` operators around it, traversed counterclockwise. The closed
    /// loop represents the Majorana identity, so the product is imposed
    /// verbatim, sign included.
    pub fn loop_stabilizers(&self) -> Vec<PauliString> {
        let mut out = Vec::new();
        for y in 1..self.l2 {
            for x in 1..self.l1 {
                let cycle = [
                    self.mode_index(x, y),
                    self.mode_index(x + 1, y),
                    self.mode_index(x + 1, y + 1),
                    self.mode_index(x, y + 1),
                    self.mode_index(x, y),
                ];
                let mut s = PauliString::identity(self.n_qubits());
                for pair in cycle.windows(2) {
                    s = s
                        .mul(&self.edge_operator(pair[0], pair[1]).expect("plaquette edge"))
                        .expect("same register");
                }
                out.push(s);
            }
        }
        out
    }

    /// Image of an ordered pair of Majorana factors in the even sector.
    pub fn pair_image_public(
        &self,
        f1: MajoranaFactor,
        f2: MajoranaFactor,
    ) -> Result<(PauliString, Complex64), BksfError> {
        self.pair_image(f1, f2, Sector::Even)
    }

    /// Image of a pair of Majorana factors; the odd sector flips the sign of
    /// every emitted `B_{k0}`.
    fn pair_image(
        &self,
        f1: MajoranaFactor,
        f2: MajoranaFactor,
        sector: Sector,
    ) -> Result<(PauliString, Complex64), BksfError> {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let b_sign = |k: usize| -> Complex64 {
            match sector {
                Sector::Odd { k0 } if k0 == k => -one,
                _ => one,
            }
        };
        let n = self.n_qubits();
        if f1.mode == f2.mode {
            let k = f1.mode;
            return Ok(match (f1.bar, f2.bar) {
                // m m or mbar mbar: identity
                (false, false) | (true, true) => (PauliString::identity(n), one),
                // m mbar = i B_k
                (false, true) => (self.vertex_operator(k)?, i * b_sign(k)),
                // mbar m = -i B_k
                (true, false) => (self.vertex_operator(k)?, -i * b_sign(k)),
            });
        }
        let (j, k) = (f1.mode, f2.mode);
        let a = self.edge_operator_routed(j, k)?;
        Ok(match (f1.bar, f2.bar) {
            // m_j m_k = i A_jk
            (false, false) => (a, i),
            // m_j mbar_k = -A_jk B_k
            (false, true) => (
                a.mul(&self.vertex_operator(k)?).expect("same register"),
                -b_sign(k),
            ),
            // mbar_j m_k = B_j A_jk
            (true, false) => (
                self.vertex_operator(j)?.mul(&a).expect("same register"),
                b_sign(j),
            ),
            // mbar_j mbar_k = i B_j A_jk B_k
            (true, true) => (
                self.vertex_operator(j)?
                    .mul(&a)
                    .expect("same register")
                    .mul(&self.vertex_operator(k)?)
                    .expect("same register"),
                i * b_sign(j) * b_sign(k),
            ),
        })
    }

    /// Transforms a parity-conserving ladder-operator sum.
    pub fn transform(&self, f: &FermionSum, sector: Sector) -> Result<PauliSum, BksfError> {
        if f.n_modes > self.n_modes() {
            return Err(BksfError::ModeOutOfRange(f.n_modes - 1, self.n_modes()));
        }
        if let Sector::Odd { k0 } = sector {
            if k0 >= self.n_modes() {
                return Err(BksfError::ModeOutOfRange(k0, self.n_modes()));
            }
        }
        let n = self.n_qubits();
        let mut out = PauliSum::new(n);
        for (coeff, factors) in f.to_majorana() {
            if factors.len() % 2 != 0 {
                return Err(BksfError::ParityViolation);
            }
            let mut acc = PauliString::identity(n);
            let mut c = coeff;
            for pair in factors.chunks(2) {
                let (img, phase) = self.pair_image(pair[0], pair[1], sector)?;
                acc = acc.mul(&img).expect("same register");
                c *= phase;
            }
            out.add_term(&acc, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aqcode::StabilizerBasis;
    use crate::fermion::{FermionSum, LadderOp};
    use num_complex::Complex64 as C;

    #[test]
    fn qubit_and_stabilizer_counts() {
        let g = build_bksf(6, 6, Variant::V2).unwrap();
        assert_eq!(g.n_qubits(), 60);
        assert_eq!(g.loop_stabilizers().len(), 25);
        let g2 = build_bksf(2, 2, Variant::V2).unwrap();
        assert_eq!(g2.loop_stabilizers().len(), 1);
    }

    #[test]
    fn vertex_operator_weights() {
        let g = build_bksf(3, 3, Variant::V2).unwrap();
        // interior, boundary edge, corner
        assert_eq!(g.vertex_operator(g.mode_index(2, 2)).unwrap().weight(), 4);
        assert_eq!(g.vertex_operator(g.mode_index(2, 1)).unwrap().weight(), 3);
        assert_eq!(g.vertex_operator(g.mode_index(1, 1)).unwrap().weight(), 2);
        // B_k^2 = I
        let b = g.vertex_operator(4).unwrap();
        assert!(b.mul(&b).unwrap().is_identity());
    }

    #[test]
    fn edge_operator_antisymmetry() {
        let g = build_bksf(3, 2, Variant::V2).unwrap();
        let a = g.edge_operator(0, 1).unwrap();
        let mut b = g.edge_operator(1, 0).unwrap();
        b.mul_phase(2);
        assert_eq!(a, b);
        // A_jk A_kj = -I
        let prod = g
            .edge_operator(0, 1)
            .unwrap()
            .mul(&g.edge_operator(1, 0).unwrap())
            .unwrap();
        assert_eq!(prod.weight(), 0);
        assert_eq!(prod.phase(), 2);
    }

    #[test]
    fn variant2_interior_edge_weights() {
        let g = build_bksf(4, 4, Variant::V2).unwrap();
        // Horizontal A: X + Z at j.bottom + Z at k.{bottom,top,right}: weight 5.
        let j = g.mode_index(2, 2);
        let k = g.mode_index(3, 2);
        assert_eq!(g.edge_operator(j, k).unwrap().weight(), 5);
        // Vertical A (j below k): X + Z at j.{bottom,right}: weight 3.
        let k_up = g.mode_index(2, 3);
        assert_eq!(g.edge_operator(j, k_up).unwrap().weight(), 3);
    }

    #[test]
    fn variant1_interior_edge_weights() {
        let g = build_bksf(4, 4, Variant::V1).unwrap();
        let j = g.mode_index(2, 2);
        let k = g.mode_index(3, 2);
        // Horizontal: X + Z at j.{top,left} + Z at k.top: weight 4.
        assert_eq!(g.edge_operator(j, k).unwrap().weight(), 4);
        // Vertical: X + 3 Z at k: weight 4.
        let k_up = g.mode_index(2, 3);
        assert_eq!(g.edge_operator(j, k_up).unwrap().weight(), 4);
    }

    #[test]
    fn stabilizers_commute_with_everything_and_square_to_identity() {
        for variant in [Variant::V1, Variant::V2] {
            let g = build_bksf(3, 3, variant).unwrap();
            let stabs = g.loop_stabilizers();
            for s in &stabs {
                let sq = s.mul(s).unwrap();
                assert!(sq.is_identity(), "stabilizer squares to +I");
            }
            for (i, s) in stabs.iter().enumerate() {
                for t in stabs.iter().skip(i + 1) {
                    assert!(s.commutes(t).unwrap());
                }
                for k in 0..g.n_modes() {
                    assert!(s.commutes(&g.vertex_operator(k).unwrap()).unwrap());
                }
                for &(a, b) in g.qubit_of_edge.keys() {
                    assert!(s.commutes(&g.edge_operator(a, b).unwrap()).unwrap());
                }
            }
            // GF(2)-independent
            let basis = StabilizerBasis::new(&stabs).unwrap();
            assert_eq!(basis.rank(), stabs.len());
        }
    }

    /// White plaquette with all four surrounding modes interior.
    fn interior_plaquette(g: &BksfGraph) -> PauliString {
        let index = (g.l1 - 1) + 1; // x = 2, y = 2 in the enumeration
        g.loop_stabilizers()[index].clone()
    }

    #[test]
    fn variant2_interior_stabilizer_is_weight_six() {
        let g = build_bksf(4, 4, Variant::V2).unwrap();
        let s = interior_plaquette(&g);
        assert_eq!(s.weight(), 6);
        assert_eq!(s.phase() % 2, 0, "stabilizer is Hermitian");
        for s in g.loop_stabilizers() {
            assert_eq!(s.phase() % 2, 0);
        }
    }

    #[test]
    fn variant1_interior_stabilizer_shape() {
        // Table row 1: the 6-qubit pattern with two Y, two X and two Z.
        let g = build_bksf(4, 4, Variant::V1).unwrap();
        let s = interior_plaquette(&g);
        let mut census = std::collections::BTreeMap::new();
        for q in s.support() {
            *census.entry(format!("{}", s.letter(q))).or_insert(0) += 1;
        }
        assert_eq!(census.get("Y"), Some(&2));
        assert_eq!(census.get("X"), Some(&2));
        assert_eq!(census.get("Z"), Some(&2));
    }

    #[test]
    fn long_range_edge_operator_squares_to_identity() {
        let g = build_bksf(4, 4, Variant::V2).unwrap();
        let a = g.edge_operator_routed(g.mode_index(1, 1), g.mode_index(4, 3)).unwrap();
        let sq = a.mul(&a).unwrap();
        assert!(sq.is_identity(), "A_long^2 = +I so A_long is Hermitian");
    }

    #[test]
    fn deformation_invariance_modulo_stabilizers() {
        // Two different paths between the same modes differ by a stabilizer
        // product with + sign.
        let g = build_bksf(3, 3, Variant::V2).unwrap();
        let (j, k) = (g.mode_index(1, 1), g.mode_index(2, 2));
        let p1 = g
            .edge_operator_path(&[j, g.mode_index(1, 2), k])
            .unwrap();
        let p2 = g
            .edge_operator_path(&[j, g.mode_index(2, 1), k])
            .unwrap();
        let basis = StabilizerBasis::new(&g.loop_stabilizers()).unwrap();
        let ratio = p1.mul(&p2).unwrap();
        // Both paths act identically on the code space.
        assert_eq!(basis.membership_phase(&ratio), Some(0));
    }

    #[test]
    fn transform_commutes_with_stabilizers() {
        let g = build_bksf(2, 3, Variant::V2).unwrap();
        let mut f = FermionSum::new(6);
        f.add_hopping(C::new(0.8, 0.3), 0, 3).unwrap();
        f.add_hopping(C::new(-0.5, 0.0), 1, 2).unwrap();
        f.add(
            C::new(0.7, 0.0),
            vec![LadderOp::create(4), LadderOp::annihilate(4)],
        )
        .unwrap();
        let h = g.transform(&f, Sector::Even).unwrap();
        assert!(h.is_hermitian());
        for s in g.loop_stabilizers() {
            for (term, _) in h.iter() {
                assert!(term.commutes(&s).unwrap());
            }
        }
    }

    #[test]
    fn parity_violation_is_rejected() {
        let g = build_bksf(2, 2, Variant::V2).unwrap();
        let mut f = FermionSum::new(4);
        f.add(C::new(1.0, 0.0), vec![LadderOp::create(0)]).unwrap();
        assert!(matches!(
            g.transform(&f, Sector::Even),
            Err(BksfError::ParityViolation)
        ));
    }

    #[test]
    fn number_operator_is_half_one_minus_b() {
        let g = build_bksf(2, 2, Variant::V2).unwrap();
        let mut f = FermionSum::new(4);
        f.add(
            C::new(1.0, 0.0),
            vec![LadderOp::create(2), LadderOp::annihilate(2)],
        )
        .unwrap();
        let h = g.transform(&f, Sector::Even).unwrap();
        let mut expect = PauliSum::new(g.n_qubits());
        expect.add_term(&PauliString::identity(g.n_qubits()), C::new(0.5, 0.0));
        expect.add_term(&g.vertex_operator(2).unwrap(), C::new(-0.5, 0.0));
        assert_eq!(h, expect);
    }

    #[test]
    fn odd_sector_flips_vertex_sign() {
        let g = build_bksf(2, 2, Variant::V2).unwrap();
        let mut f = FermionSum::new(4);
        f.add(
            C::new(1.0, 0.0),
            vec![LadderOp::create(1), LadderOp::annihilate(1)],
        )
        .unwrap();
        let even = g.transform(&f, Sector::Even).unwrap();
        let odd = g.transform(&f, Sector::Odd { k0: 1 }).unwrap();
        // 1/2 (I - B) becomes 1/2 (I + B).
        assert_ne!(even, odd);
        let mut expect = PauliSum::new(g.n_qubits());
        expect.add_term(&PauliString::identity(g.n_qubits()), C::new(0.5, 0.0));
        expect.add_term(&g.vertex_operator(1).unwrap(), C::new(0.5, 0.0));
        assert_eq!(odd, expect);
    }
}
