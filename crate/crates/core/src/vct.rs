//! The Verstraete-Cirac transform as a quantum code: loop stabilizers over
//! Majorana pairs on primed auxiliary modes, logical operator construction,
//! Manhattan routing and the Fermi-Hubbard placement.
//!
//! Data modes keep their S-pattern canonical order on qubits `0..N`; the
//! primed partner of mode `k` lives in the auxiliary register behind them.
//! Stabilizers are the Jordan-Wigner images of `(-1)^b i m_{a'} mbar_{b'}`
//! over directed loop edges `a -> b`.

use crate::fermion::FermionSum;
use crate::lattice::{LatticeOrder, QubitLayout};
use crate::pauli::{Pauli, PauliString, PauliSum};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VctError {
    #[error("mode {0} out of range for {1} modes")]
    ModeOutOfRange(usize, usize),
    #[error("edge ({0}, {1}) is not a stabilized loop edge")]
    EdgeNotInCode(usize, usize),
    #[error("mode {0} carries no primed partner")]
    NotPrimed(usize),
    #[error("loops must be vertex-disjoint; mode {0} appears twice")]
    OverlappingLoops(usize),
    #[error("sparse periodicity {0} invalid: (l1-1)/I must be an odd integer")]
    BadPeriodicity(usize),
    #[error("operator acts on a removed (empty) data qubit")]
    TouchesRemoved,
}

/// A directed loop: edges run `vertices[s] -> vertices[s+1]`, wrapping.
/// A single-vertex loop is the degenerate `P_{jj}` stabilizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loop {
    pub vertices: Vec<usize>,
    pub b_signs: Vec<bool>,
}

impl Loop {
    pub fn edges(&self) -> Vec<(usize, usize, bool)> {
        let m = self.vertices.len();
        if m == 1 {
            return vec![(self.vertices[0], self.vertices[0], self.b_signs[0])];
        }
        (0..m)
            .map(|s| (self.vertices[s], self.vertices[(s + 1) % m], self.b_signs[s]))
            .collect()
    }
}

/// The Verstraete-Cirac code on `n_data + r` qubits.
#[derive(Debug, Clone)]
pub struct VctCode {
    pub n_data: usize,
    /// Modes owning a primed auxiliary, ascending.
    pub w: Vec<usize>,
    pub loops: Vec<Loop>,
    /// Auxiliary configuration; one bit per member of `w`, satisfying every
    /// loop parity constraint.
    pub chi: Vec<bool>,
    pub layout: QubitLayout,
    pub order: LatticeOrder,
    /// Data qubits pinned to `|0>` and dropped from the register (used by the
    /// Hubbard placement). Kept qubits are renumbered in ascending order.
    pub removed_data: Vec<usize>,
}

impl VctCode {
    pub fn r(&self) -> usize {
        self.w.len()
    }

    /// Register size before removing empty data qubits.
    pub fn n_full(&self) -> usize {
        self.n_data + self.r()
    }

    /// Register size after removal.
    pub fn n_total(&self) -> usize {
        self.n_full() - self.removed_data.len()
    }

    /// Auxiliary register slot of mode `k`'s primed partner.
    pub fn prime_slot(&self, k: usize) -> Result<usize, VctError> {
        self.w.binary_search(&k).map_err(|_| VctError::NotPrimed(k))
    }

    pub fn prime_qubit(&self, k: usize) -> Result<usize, VctError> {
        Ok(self.n_data + self.prime_slot(k)?)
    }

    /// Qubits kept after projecting out the empty data qubits.
    pub fn kept_qubits(&self) -> Vec<usize> {
        (0..self.n_full())
            .filter(|q| !self.removed_data.contains(q))
            .collect()
    }

    /// The stabilizer of a directed edge `alpha -> beta` on the full
    /// (pre-removal) register.
    pub fn stabilizer_full(
        &self,
        alpha: usize,
        beta: usize,
        b: bool,
    ) -> Result<PauliString, VctError> {
        let n = self.n_full();
        if alpha >= self.n_data || beta >= self.n_data {
            return Err(VctError::ModeOutOfRange(alpha.max(beta), self.n_data));
        }
        let mut s = PauliString::identity(n);
        if alpha == beta {
            // P^b_{jj} = (-1)^{1+b} Z_{j'}
            s.apply_letter(self.prime_qubit(alpha)?, Pauli::Z);
            s.mul_phase(if b { 0 } else { 2 });
            return Ok(s);
        }
        let (lo, hi, end_op) = if alpha < beta {
            (alpha, beta, Pauli::Y)
        } else {
            (beta, alpha, Pauli::X)
        };
        for j in lo + 1..=hi {
            s.apply_letter(j, Pauli::Z);
        }
        s.apply_letter(self.prime_qubit(lo)?, end_op);
        for &k in &self.w {
            if k > lo && k < hi {
                s.apply_letter(self.prime_qubit(k)?, Pauli::Z);
            }
        }
        s.apply_letter(self.prime_qubit(hi)?, end_op);
        if b {
            s.mul_phase(2);
        }
        Ok(s)
    }

    /// All stabilizer generators, restricted to the kept register.
    pub fn stabilizers(&self) -> Vec<PauliString> {
        let keep = self.kept_qubits();
        self.loops
            .iter()
            .flat_map(|l| l.edges())
            .map(|(a, b, sign)| {
                self.stabilizer_full(a, b, sign)
                    .expect("edges are validated at build time")
                    .restrict(&keep)
                    .expect("stabilizers are Z-type on removed qubits")
            })
            .collect()
    }

    /// Jordan-Wigner image of a single Majorana with the primed-register
    /// adjustment and its chi-dependent sign, on the full register.
    fn majorana_image_full(&self, mode: usize, bar: bool) -> Result<PauliString, VctError> {
        if mode >= self.n_data {
            return Err(VctError::ModeOutOfRange(mode, self.n_data));
        }
        let mut s = PauliString::identity(self.n_full());
        for j in 0..mode {
            s.apply_letter(j, Pauli::Z);
        }
        s.apply_letter(mode, if bar { Pauli::Y } else { Pauli::X });
        let mut sign = false;
        for (slot, &k) in self.w.iter().enumerate() {
            if k < mode {
                s.apply_letter(self.n_data + slot, Pauli::Z);
                sign ^= self.chi[slot];
            }
        }
        if sign {
            s.mul_phase(2);
        }
        Ok(s)
    }

    /// Transforms a ladder-operator sum into the logical Hamiltonian on the
    /// kept register; every term commutes with every stabilizer.
    pub fn transform(&self, f: &FermionSum) -> Result<PauliSum, VctError> {
        if f.n_modes > self.n_data {
            return Err(VctError::ModeOutOfRange(f.n_modes - 1, self.n_data));
        }
        let n = self.n_full();
        let mut full = PauliSum::new(n);
        for (coeff, factors) in f.to_majorana() {
            let mut acc = PauliString::identity(n);
            for fac in &factors {
                acc = acc
                    .mul(&self.majorana_image_full(fac.mode, fac.bar)?)
                    .expect("same register");
            }
            full.add_term(&acc, coeff);
        }
        let keep = self.kept_qubits();
        full.restrict(&keep).map_err(|_| VctError::TouchesRemoved)
    }

    /// Recomputes `chi` from the current loop sign bits.
    pub fn resolve_chi(&mut self) {
        self.chi = solve_chi(&self.w, &self.loops);
    }

    /// Adjusts a data-register string with its primed-register substring: a
    /// prime picks up a `Z` whenever an odd number of the string's X/Y
    /// positions lie canonically above it, matching the per-Majorana rule of
    /// [`VctCode::transform`] term by term.
    pub fn adjust_string(&self, h: &PauliString) -> Result<PauliString, VctError> {
        if h.n() != self.n_data {
            return Err(VctError::ModeOutOfRange(h.n(), self.n_data));
        }
        let mut out = h.embed(self.n_full());
        let mut sign = false;
        for (slot, &k) in self.w.iter().enumerate() {
            let above = (k + 1..self.n_data).filter(|&q| h.x_bit(q)).count();
            if above % 2 == 1 {
                out.apply_letter(self.n_data + slot, Pauli::Z);
            }
            // chi contributes once per X/Y position above this prime.
            if self.chi[slot] && above % 2 == 1 {
                sign ^= true;
            }
        }
        if sign {
            out.mul_phase(2);
        }
        let keep = self.kept_qubits();
        out.restrict(&keep).map_err(|_| VctError::TouchesRemoved)
    }

    /// Adjusts every term of a data-register sum.
    pub fn adjust_sum(&self, h: &PauliSum) -> Result<PauliSum, VctError> {
        let mut out = PauliSum::new(self.n_total());
        for (s, c) in h.iter() {
            out.add_term(&self.adjust_string(&s)?, c);
        }
        Ok(out)
    }

    /// Multiplies a term by the stabilizers of the edges along a path of
    /// modes; consecutive path entries must be loop-edge endpoints (either
    /// direction).
    pub fn route(&self, term: &PauliString, path: &[usize]) -> Result<PauliString, VctError> {
        let keep = self.kept_qubits();
        let mut edge_signs: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for l in &self.loops {
            for (a, b, s) in l.edges() {
                edge_signs.insert((a, b), s);
            }
        }
        let mut out = term.clone();
        for pair in path.windows(2) {
            let (v, u) = (pair[0], pair[1]);
            let (a, b, sign) = if let Some(&s) = edge_signs.get(&(v, u)) {
                (v, u, s)
            } else if let Some(&s) = edge_signs.get(&(u, v)) {
                (u, v, s)
            } else {
                return Err(VctError::EdgeNotInCode(v, u));
            };
            let stab = self
                .stabilizer_full(a, b, sign)?
                .restrict(&keep)
                .map_err(|_| VctError::TouchesRemoved)?;
            out = out.mul(&stab).expect("same register");
        }
        Ok(out)
    }

    /// Local stabilizer tiles: per row gap, products of vertical-edge
    /// stabilizers on adjacent primed columns, plus the already-local pieces
    /// (the winding-side vertical edge, the horizontal loop closures and the
    /// degenerate self-loops). Returns `(tile, color)` with the checkerboard
    /// two-coloring.
    pub fn local_tiling(&self) -> Vec<(PauliString, usize)> {
        let keep = self.kept_qubits();
        let mut tiles = Vec::new();
        // Vertical edges bucketed by row gap, keyed by column.
        let mut by_gap: BTreeMap<usize, BTreeMap<usize, (usize, usize, bool)>> = BTreeMap::new();
        for l in &self.loops {
            for (a, b, s) in l.edges() {
                let (ca, ra) = self.order.coord(a);
                let (cb, rb) = self.order.coord(b);
                if a != b && ca == cb && ra.abs_diff(rb) == 1 {
                    by_gap
                        .entry(ra.min(rb))
                        .or_default()
                        .insert(ca, (a, b, s));
                } else {
                    let tile = self
                        .stabilizer_full(a, b, s)
                        .expect("validated edge")
                        .restrict(&keep)
                        .expect("Z-type on removed");
                    tiles.push((tile, (ca + ra) % 2));
                }
            }
        }
        for (gap, cols) in &by_gap {
            // The vertical edge at the winding side is local on its own.
            let winding_col = if gap % 2 == 1 { self.order.l1 } else { 1 };
            if let Some(&(a, b, s)) = cols.get(&winding_col) {
                let ear = self
                    .stabilizer_full(a, b, s)
                    .expect("validated edge")
                    .restrict(&keep)
                    .expect("Z-type on removed");
                tiles.push((ear, (winding_col + gap) % 2));
            }
            let columns: Vec<usize> = cols.keys().copied().collect();
            for pair in columns.windows(2) {
                let (a1, b1, s1) = cols[&pair[0]];
                let (a2, b2, s2) = cols[&pair[1]];
                let tile = self
                    .stabilizer_full(a1, b1, s1)
                    .expect("validated edge")
                    .mul(&self.stabilizer_full(a2, b2, s2).expect("validated edge"))
                    .expect("same register")
                    .restrict(&keep)
                    .expect("Z-type on removed");
                tiles.push((tile, (pair[0] + gap) % 2));
            }
        }
        tiles
    }
}

/// Lexicographically smallest `chi` meeting every loop parity constraint:
/// the product of a loop's stabilizers is `(-1)^{1 + sum b} (x) Z` over its
/// primes, so the loop's chi parity must equal `1 + sum b` mod 2.
fn solve_chi(w: &[usize], loops: &[Loop]) -> Vec<bool> {
    let mut chi = vec![false; w.len()];
    for l in loops {
        let need = (1 + l.b_signs.iter().filter(|&&b| b).count()) % 2 == 1;
        if need {
            // The single 1 goes on the highest prime slot of the loop.
            let slot = l
                .vertices
                .iter()
                .map(|&v| w.binary_search(&v).expect("loop vertices are primed"))
                .max()
                .expect("loops are non-empty");
            chi[slot] = true;
        }
    }
    chi
}

fn validate_loops(n: usize, loops: &[Loop]) -> Result<Vec<usize>, VctError> {
    let mut seen = std::collections::BTreeSet::new();
    for l in loops {
        for &v in &l.vertices {
            if v >= n {
                return Err(VctError::ModeOutOfRange(v, n));
            }
            if !seen.insert(v) {
                return Err(VctError::OverlappingLoops(v));
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn vct_layout(order: &LatticeOrder, w: &[usize], removed: &[usize]) -> QubitLayout {
    // Data mode (x, y) sits at column 2x-1; its prime at column 2x. Primes
    // align vertically and horizontal chains alternate data and primes.
    let n = order.n();
    let mut positions = vec![(0, 0); n + w.len()];
    for idx in 0..n {
        let (x, y) = order.coord(idx);
        positions[idx] = (2 * (2 * x as i64 - 1), 2 * y as i64);
    }
    for (slot, &k) in w.iter().enumerate() {
        let (x, y) = order.coord(k);
        positions[n + slot] = (4 * x as i64, 2 * y as i64);
    }
    let mut layout = QubitLayout::new(positions);
    let slot_of = |k: usize| w.binary_search(&k).ok().map(|s| n + s);
    for idx in 0..n {
        let (x, y) = order.coord(idx);
        if let Some(p) = slot_of(idx) {
            layout.add_edge(idx, p);
            if y < order.l2 {
                let above = order.index(x, y + 1);
                if let Some(pa) = slot_of(above) {
                    layout.add_edge(p, pa);
                }
            }
            if x < order.l1 {
                layout.add_edge(p, order.index(x + 1, y));
            }
        } else if x < order.l1 {
            layout.add_edge(idx, order.index(x + 1, y));
        }
    }
    if removed.is_empty() {
        return layout;
    }
    let keep: Vec<usize> = (0..layout.len()).filter(|q| !removed.contains(q)).collect();
    let mut renumber = BTreeMap::new();
    for (new, &old) in keep.iter().enumerate() {
        renumber.insert(old, new);
    }
    let mut out = QubitLayout::new(keep.iter().map(|&q| layout.positions[q]).collect());
    for &old in &keep {
        for &m in &layout.edges[old] {
            if let (Some(&a), Some(&b)) = (renumber.get(&old), renumber.get(&m)) {
                if a < b {
                    out.add_edge(a, b);
                }
            }
        }
    }
    out
}

/// Column-pair loop over the full lattice height: up the right column,
/// across the top, down the left column, across the bottom.
fn column_pair_loop(order: &LatticeOrder, left: usize, right: usize) -> Loop {
    let mut vertices = Vec::with_capacity(2 * order.l2);
    for row in 1..=order.l2 {
        vertices.push(order.index(right, row));
    }
    for row in (1..=order.l2).rev() {
        vertices.push(order.index(left, row));
    }
    Loop {
        b_signs: vec![false; vertices.len()],
        vertices,
    }
}

fn build_vct_with(order: LatticeOrder, loops: Vec<Loop>, removed: Vec<usize>) -> VctCode {
    let w = validate_loops(order.n(), &loops).expect("construction produces valid loops");
    let chi = solve_chi(&w, &loops);
    let layout = vct_layout(&order, &w, &removed);
    VctCode {
        n_data: order.n(),
        w,
        loops,
        chi,
        layout,
        order,
        removed_data: removed,
    }
}

/// The original column-pair proposal on an `l1 x l2` mode lattice. For odd
/// `l1` the last column is covered by per-row-pair two-vertex loops instead.
pub fn build_vct(l1: usize, l2: usize) -> VctCode {
    let order = LatticeOrder::s_pattern(l1, l2);
    let mut loops = Vec::new();
    let mut col = 1;
    while col + 1 <= l1 {
        loops.push(column_pair_loop(&order, col, col + 1));
        col += 2;
    }
    if col == l1 {
        loops.extend(lone_column_loops(&order, col));
    }
    build_vct_with(order, loops, Vec::new())
}

/// Two-vertex loops on row pairs of a single column; a leftover row gets a
/// degenerate self-loop so its prime stays constrained.
fn lone_column_loops(order: &LatticeOrder, col: usize) -> Vec<Loop> {
    let mut loops = Vec::new();
    let mut row = 1;
    while row + 1 <= order.l2 {
        loops.push(Loop {
            vertices: vec![order.index(col, row), order.index(col, row + 1)],
            b_signs: vec![false, false],
        });
        row += 2;
    }
    if row == order.l2 {
        loops.push(Loop {
            vertices: vec![order.index(col, row)],
            b_signs: vec![false],
        });
    }
    loops
}

/// Qubit-economic VCT: primed columns only every `periodicity` columns;
/// `(l1-1)/periodicity` must be odd so connection columns pair up.
pub fn build_sparse_vct(l1: usize, l2: usize, periodicity: usize) -> Result<VctCode, VctError> {
    if periodicity == 0 || (l1 - 1) % periodicity != 0 || ((l1 - 1) / periodicity) % 2 == 0 {
        return Err(VctError::BadPeriodicity(periodicity));
    }
    let order = LatticeOrder::s_pattern(l1, l2);
    let cols: Vec<usize> = (1..=l1).step_by(periodicity).collect();
    let loops = cols
        .chunks(2)
        .map(|pair| column_pair_loop(&order, pair[0], pair[1]))
        .collect();
    Ok(build_vct_with(order, loops, Vec::new()))
}

/// Fermi-Hubbard placement: spin partners vertically adjacent on an
/// `(L+1) x 2L` mode lattice whose first column stays empty; the empty data
/// qubits are removed, leaving `4L^2 + 2L` qubits.
pub struct HubbardVct {
    pub code: VctCode,
    /// Mode of spin component `s` of site `(x, y)`, 0-based.
    pub site_mode: BTreeMap<(usize, usize, usize), usize>,
}

pub fn hubbard_vct_code(l: usize) -> HubbardVct {
    let l1 = l + 1;
    let l2 = 2 * l;
    let order = LatticeOrder::s_pattern(l1, l2);
    let mut loops = Vec::new();
    // Keep every physical column inside a full-height pair; the empty first
    // column takes the lone-column loops when l1 is odd.
    let first_paired = if l1 % 2 == 0 {
        1
    } else {
        loops.extend(lone_column_loops(&order, 1));
        2
    };
    let mut col = first_paired;
    while col + 1 <= l1 {
        loops.push(column_pair_loop(&order, col, col + 1));
        col += 2;
    }
    let removed: Vec<usize> = (1..=l2).map(|row| order.index(1, row)).collect();
    let code = build_vct_with(order, loops, removed);
    let mut site_mode = BTreeMap::new();
    for y in 1..=l {
        for x in 1..=l {
            for s in 0..2 {
                site_mode.insert((x, y, s), order.index(x + 1, 2 * y - 1 + s));
            }
        }
    }
    HubbardVct { code, site_mode }
}

/// The Hubbard Hamiltonian for the placement above, on the full mode count.
pub fn hubbard_vct_hamiltonian(l: usize, t: f64, eps: f64, u: f64) -> (HubbardVct, FermionSum) {
    use crate::fermion::LadderOp;
    use num_complex::Complex64;
    let placement = hubbard_vct_code(l);
    let n = placement.code.n_data;
    let mut f = FermionSum::new(n);
    let re = |v: f64| Complex64::new(v, 0.0);
    let mode = |x: usize, y: usize, s: usize| placement.site_mode[&(x, y, s)];
    for y in 1..=l {
        for x in 1..=l {
            for s in 0..2 {
                if x < l {
                    f.add_hopping(re(t), mode(x, y, s), mode(x + 1, y, s)).unwrap();
                }
                if y < l {
                    f.add_hopping(re(t), mode(x, y, s), mode(x, y + 1, s)).unwrap();
                }
                if eps != 0.0 {
                    let m = mode(x, y, s);
                    f.add(re(eps), vec![LadderOp::create(m), LadderOp::annihilate(m)])
                        .unwrap();
                }
            }
            if u != 0.0 {
                let (a, b) = (mode(x, y, 1), mode(x, y, 0));
                f.add(
                    re(u),
                    vec![
                        LadderOp::create(a),
                        LadderOp::annihilate(a),
                        LadderOp::create(b),
                        LadderOp::annihilate(b),
                    ],
                )
                .unwrap();
            }
        }
    }
    (placement, f)
}
