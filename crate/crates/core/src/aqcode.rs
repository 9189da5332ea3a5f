//! Auxiliary Qubit codes: the E-type, square-lattice and sparse mappings,
//! the three generic code flavors, stabilizer-modular reduction and
//! Manhattan routing.
//!
//! A code stabilizes strings `p^i` on the data register with one auxiliary
//! qubit each. The stabilizer generators are `(-1)^{chi_i} (p^i (x) aux_i)`,
//! matching an initialization circuit that prepares the auxiliaries from
//! `|chi>`; with the default `chi = 0` the signs disappear and the operator
//! adjustments below are sign-free.

use crate::fermion::FermionSum;
use crate::gf2::BitMatrix;
use crate::lattice::{at, at_half_row, LatticeOrder, QubitLayout};
use crate::linmap::{ladder_image_from_sets, LinearEncoder};
use crate::pauli::{Pauli, PauliString, PauliSum};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AqError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("sparse periodicity {0} invalid for l1 = {1}: (l1-1)/I must be an integer")]
    BadPeriodicity(usize, usize),
    #[error("operation requires a {0} code")]
    FlavorMismatch(&'static str),
    #[error("string does not commute with stabilizer #{0}")]
    CosetError(usize),
    #[error("stabilizer set contains -I; generators are inconsistent")]
    InconsistentGroup,
    #[error("no vertical connection at column {0}, row {1}")]
    MissingConnection(usize, usize),
}

/// Basis choice of the auxiliary qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `sigma_i = Z`, p-strings restricted to Z-type, basis `|B omega>`.
    Computational,
    /// `sigma_i = X`, arbitrary pairwise-commuting p-strings.
    Hadamard,
    /// `gamma_i = Z-dressing (x) X`, p-strings may anticommute.
    Anticommuting,
}

/// Lattice geometry of the three AQM constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AqmKind {
    EType,
    Square,
    Sparse { periodicity: usize },
}

/// Geometric bookkeeping for lattice-backed codes.
#[derive(Debug, Clone)]
pub struct AqmLattice {
    pub kind: AqmKind,
    pub order: LatticeOrder,
    /// Auxiliary index of the vertical connection crossing `(col, row+1/2)`;
    /// for the E-type the key is `(0, row)`.
    pub aux_of: BTreeMap<(usize, usize), usize>,
}

/// An Auxiliary Qubit code on `n_data + r` qubits.
#[derive(Debug, Clone)]
pub struct AuxCode {
    pub flavor: Flavor,
    pub n_data: usize,
    pub r: usize,
    /// Data-register part of each stabilizer, on `n_data` qubits.
    pub p_strings: Vec<PauliString>,
    /// Auxiliary-register part of each stabilizer, on `r` qubits.
    pub aux_ops: Vec<PauliString>,
    /// Auxiliary seed configuration; flips the sign of stabilizer `i`.
    pub chi: Vec<bool>,
    pub layout: QubitLayout,
    pub lattice: Option<AqmLattice>,
}

impl AuxCode {
    pub fn n_total(&self) -> usize {
        self.n_data + self.r
    }

    /// Full stabilizer generator `(-1)^{chi_i} (p^i (x) aux_i)`.
    pub fn stabilizer(&self, i: usize) -> PauliString {
        let n = self.n_total();
        let mut s = self.p_strings[i].embed(n);
        for q in 0..self.r {
            match self.aux_ops[i].letter(q) {
                Pauli::I => {}
                op => s.apply_letter(self.n_data + q, op),
            }
        }
        if self.chi[i] {
            s.mul_phase(2);
        }
        s
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.r).map(|i| self.stabilizer(i)).collect()
    }

    /// The defining binary matrix of a computational-flavor code.
    pub fn b_matrix(&self) -> Option<BitMatrix> {
        if self.flavor != Flavor::Computational {
            return None;
        }
        let mut b = BitMatrix::zeros(self.r, self.n_data);
        for (i, p) in self.p_strings.iter().enumerate() {
            for j in 0..self.n_data {
                if p.z_bit(j) {
                    b.set(i, j, true);
                }
            }
        }
        Some(b)
    }

    /// The defining `C^X`, `C^Y`, `C^Z` matrices of a Hadamard-flavor code.
    pub fn c_matrices(&self) -> (BitMatrix, BitMatrix, BitMatrix) {
        let mut cx = BitMatrix::zeros(self.r, self.n_data);
        let mut cy = BitMatrix::zeros(self.r, self.n_data);
        let mut cz = BitMatrix::zeros(self.r, self.n_data);
        for (i, p) in self.p_strings.iter().enumerate() {
            for j in 0..self.n_data {
                match p.letter(j) {
                    Pauli::X => cx.set(i, j, true),
                    Pauli::Y => cy.set(i, j, true),
                    Pauli::Z => cz.set(i, j, true),
                    Pauli::I => {}
                }
            }
        }
        (cx, cy, cz)
    }

    /// Adjusts a data-register string to `h (x) kappa^h` on the full register.
    pub fn adjust_string(&self, h: &PauliString) -> Result<PauliString, AqError> {
        if h.n() != self.n_data {
            return Err(AqError::DimensionMismatch(h.n(), self.n_data));
        }
        let mut out = h.embed(self.n_total());
        match self.flavor {
            Flavor::Computational => {
                // X on every auxiliary whose parity subset is flipped by h.
                for (i, p) in self.p_strings.iter().enumerate() {
                    let overlap = (0..self.n_data)
                        .filter(|&q| p.z_bit(q) && h.x_bit(q))
                        .count();
                    if overlap % 2 == 1 {
                        out.apply_letter(self.n_data + i, Pauli::X);
                    }
                }
            }
            Flavor::Hadamard | Flavor::Anticommuting => {
                // Z on every auxiliary whose p-string anticommutes with h.
                for (i, p) in self.p_strings.iter().enumerate() {
                    if !p.commutes(h).expect("same register") {
                        out.apply_letter(self.n_data + i, Pauli::Z);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Adjusts every term of a data-register sum.
    pub fn adjust_sum(&self, h: &PauliSum) -> Result<PauliSum, AqError> {
        let mut out = PauliSum::new(self.n_total());
        for (s, c) in h.iter() {
            out.add_term(&self.adjust_string(&s)?, c);
        }
        Ok(out)
    }

    /// Redefined update/flip/parity sets of mode `j` on the full register;
    /// auxiliary entries are appended wherever the update, flip or parity
    /// operator of the underlying encoder fails to commute with a stabilizer.
    fn adjusted_sets(
        &self,
        encoder: &LinearEncoder,
        j: usize,
    ) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let update = &encoder.sets.update[j];
        let flip = &encoder.sets.flip[j];
        let parity = &encoder.sets.parity[j];
        let mut u = update.clone();
        let mut f = flip.clone();
        let mut p = parity.clone();
        for (i, pi) in self.p_strings.iter().enumerate() {
            let odd = |set: &[usize], x_side: bool| -> bool {
                set.iter()
                    .filter(|&&q| if x_side { pi.x_bit(q) } else { pi.z_bit(q) })
                    .count()
                    % 2
                    == 1
            };
            match self.flavor {
                Flavor::Computational => {
                    if odd(update, false) {
                        u.push(self.n_data + i);
                    }
                }
                Flavor::Hadamard | Flavor::Anticommuting => {
                    if odd(flip, true) {
                        f.push(self.n_data + i);
                    }
                    if odd(parity, true) ^ odd(update, false) {
                        p.push(self.n_data + i);
                    }
                }
            }
        }
        (u, f, p)
    }

    /// The transform of a ladder-operator sum with the Hamiltonian
    /// adjustments fused in: every output term is `h_dat (x) kappa^h` and
    /// commutes with every stabilizer.
    pub fn adjusted_transform(
        &self,
        encoder: &LinearEncoder,
        f: &FermionSum,
    ) -> Result<PauliSum, AqError> {
        if encoder.n != self.n_data {
            return Err(AqError::DimensionMismatch(encoder.n, self.n_data));
        }
        if f.n_modes > self.n_data {
            return Err(AqError::DimensionMismatch(f.n_modes, self.n_data));
        }
        let n = self.n_total();
        let mut out = PauliSum::new(n);
        for term in &f.terms {
            let mut acc = PauliSum::scalar(n, term.coeff);
            for op in &term.factors {
                let (u, fl, pa) = self.adjusted_sets(encoder, op.mode);
                let img = ladder_image_from_sets(n, &u, &fl, &pa, op.dagger);
                acc = acc.mul(&img).expect("same register");
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }
}

// --- Reduction modulo the stabilizer group -----------------------------------

/// Echelonized stabilizer basis with exact sign tracking.
///
/// Each basis element is a genuine product of generators, so reducing a
/// string multiplies real group elements and the returned representative
/// carries the correct phase.
#[derive(Debug, Clone)]
pub struct StabilizerBasis {
    /// `(pivot bit, basis element)` sorted by pivot; pivots are unique.
    rows: Vec<(usize, PauliString)>,
}

fn first_set_bit(s: &PauliString) -> Option<usize> {
    for q in 0..s.n() {
        if s.x_bit(q) {
            return Some(2 * q);
        }
        if s.z_bit(q) {
            return Some(2 * q + 1);
        }
    }
    None
}

fn has_bit(s: &PauliString, bit: usize) -> bool {
    let q = bit / 2;
    if bit % 2 == 0 {
        s.x_bit(q)
    } else {
        s.z_bit(q)
    }
}

impl StabilizerBasis {
    pub fn new(generators: &[PauliString]) -> Result<Self, AqError> {
        for (i, g) in generators.iter().enumerate() {
            for (k, h) in generators.iter().enumerate().skip(i + 1) {
                if !g.commutes(h).expect("same register") {
                    return Err(AqError::CosetError(k));
                }
            }
        }
        let mut basis = StabilizerBasis { rows: Vec::new() };
        for g in generators {
            // A row only ever carries pivots of rows inserted after it, so
            // one forward pass clears everything known so far.
            let reduced = basis.echelon_reduce(g.clone());
            match first_set_bit(&reduced) {
                Some(pivot) => basis.rows.push((pivot, reduced)),
                None => {
                    if reduced.phase() != 0 {
                        return Err(AqError::InconsistentGroup);
                    }
                }
            }
        }
        // Jordan cleanup in reverse insertion order: afterwards every row
        // holds exactly one pivot, so reduction is a single pass.
        for k in (0..basis.rows.len()).rev() {
            let (pk, rk) = basis.rows[k].clone();
            for idx in 0..k {
                if has_bit(&basis.rows[idx].1, pk) {
                    basis.rows[idx].1 = basis.rows[idx].1.mul(&rk).expect("same register");
                }
            }
        }
        Ok(basis)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn echelon_reduce(&self, mut s: PauliString) -> PauliString {
        for (pivot, row) in &self.rows {
            if has_bit(&s, *pivot) {
                s = s.mul(row).expect("same register");
            }
        }
        s
    }

    /// Canonical minimal-weight-greedy representative of the coset
    /// `s * <stabilizer group>`, sign tracked exactly. Idempotent: the
    /// echelon step lands on the unique canonical coset member before the
    /// deterministic weight descent starts.
    pub fn reduce(&self, s: &PauliString) -> Result<PauliString, AqError> {
        for (i, (_, row)) in self.rows.iter().enumerate() {
            if !s.commutes(row).expect("same register") {
                return Err(AqError::CosetError(i));
            }
        }
        let mut best = self.echelon_reduce(s.clone());
        loop {
            let mut improved = false;
            for (_, row) in &self.rows {
                let cand = best.mul(row).expect("same register");
                if cand.weight() < best.weight() {
                    best = cand;
                    improved = true;
                }
            }
            if !improved {
                return Ok(best);
            }
        }
    }

    /// If `s` lies in the stabilizer group up to sign, returns its phase
    /// exponent: `Some(0)` for `+S`, `Some(2)` for `-S`.
    pub fn membership_phase(&self, s: &PauliString) -> Option<u8> {
        let reduced = self.echelon_reduce(s.clone());
        if reduced.weight() == 0 {
            Some(reduced.phase())
        } else {
            None
        }
    }
}

/// Reduces a string modulo the code's stabilizer group; see
/// [`StabilizerBasis::reduce`].
pub fn reduce_mod_stabilizers(s: &PauliString, code: &AuxCode) -> Result<PauliString, AqError> {
    StabilizerBasis::new(&code.stabilizers())?.reduce(s)
}

// --- The three AQM constructions ----------------------------------------------

/// E-type AQM: one computational-basis auxiliary per data row, storing that
/// row's parity. Data order is typewriter (row-major), matching the figure
/// labels; the auxiliary couples to its whole row.
pub fn build_e_type(l1: usize, l2: usize) -> AuxCode {
    let order = LatticeOrder::typewriter(l1, l2);
    let n = order.n();
    let r = l2;
    let mut p_strings = Vec::with_capacity(r);
    let mut aux_of = BTreeMap::new();
    for row in 1..=l2 {
        let mut p = PauliString::identity(n);
        for col in 1..=l1 {
            p.apply_letter(order.index(col, row), Pauli::Z);
        }
        p_strings.push(p);
        aux_of.insert((0, row), row - 1);
    }
    let aux_ops = (0..r)
        .map(|i| PauliString::single(r, i, Pauli::Z))
        .collect();

    let mut positions = vec![(0, 0); n + r];
    for row in 1..=l2 {
        for col in 1..=l1 {
            positions[order.index(col, row)] = at(col, row);
        }
        positions[n + row - 1] = at(0, row);
    }
    let mut layout = QubitLayout::new(positions);
    for row in 1..=l2 {
        for col in 1..l1 {
            layout.add_edge(order.index(col, row), order.index(col + 1, row));
        }
        // Row bus: the auxiliary is coupled to its whole row.
        for col in 1..=l1 {
            layout.add_edge(n + row - 1, order.index(col, row));
        }
        if row < l2 {
            layout.add_edge(n + row - 1, n + row);
        }
    }
    AuxCode {
        flavor: Flavor::Computational,
        n_data: n,
        r,
        p_strings,
        aux_ops,
        chi: vec![false; r],
        layout,
        lattice: Some(AqmLattice {
            kind: AqmKind::EType,
            order,
            aux_of,
        }),
    }
}

/// Data-register p-string of the vertical connection `(col, row + 1/2)` on
/// an S-pattern lattice: X/Y on the endpoints and Z along the winding path.
fn vertical_p_string(order: &LatticeOrder, col: usize, row: usize) -> PauliString {
    let n = order.n();
    let mut p = PauliString::identity(n);
    if row % 2 == 1 {
        // Odd row: Y below, X above, Z's toward the right winding.
        p.apply_letter(order.index(col, row), Pauli::Y);
        p.apply_letter(order.index(col, row + 1), Pauli::X);
        for k in col + 1..=order.l1 {
            p.apply_letter(order.index(k, row), Pauli::Z);
            p.apply_letter(order.index(k, row + 1), Pauli::Z);
        }
    } else {
        // Even row: X below, Y above, Z's toward the left winding.
        p.apply_letter(order.index(col, row), Pauli::X);
        p.apply_letter(order.index(col, row + 1), Pauli::Y);
        for k in 1..col {
            p.apply_letter(order.index(k, row), Pauli::Z);
            p.apply_letter(order.index(k, row + 1), Pauli::Z);
        }
    }
    p
}

/// Square lattice AQM: a Hadamard-basis auxiliary on every vertical
/// connection `(i, j+1/2)`.
pub fn build_square(l1: usize, l2: usize) -> AuxCode {
    build_sparse(l1, l2, 1).expect("periodicity 1 always divides")
}

/// Sparse AQM with vertical connections every `periodicity` columns,
/// including both boundaries; `periodicity = 1` reproduces [`build_square`].
pub fn build_sparse(l1: usize, l2: usize, periodicity: usize) -> Result<AuxCode, AqError> {
    if periodicity == 0 || (l1 > 1 && (l1 - 1) % periodicity != 0) {
        return Err(AqError::BadPeriodicity(periodicity, l1));
    }
    let order = LatticeOrder::s_pattern(l1, l2);
    let n = order.n();
    let cols: Vec<usize> = (1..=l1).step_by(periodicity).collect();

    let mut p_strings = Vec::new();
    let mut aux_of = BTreeMap::new();
    for row in 1..l2 {
        for &col in &cols {
            aux_of.insert((col, row), p_strings.len());
            p_strings.push(vertical_p_string(&order, col, row));
        }
    }
    let r = p_strings.len();
    let aux_ops: Vec<PauliString> = (0..r)
        .map(|i| PauliString::single(r, i, Pauli::X))
        .collect();

    let mut positions = vec![(0, 0); n + r];
    for row in 1..=l2 {
        for col in 1..=l1 {
            positions[order.index(col, row)] = at(col, row);
        }
    }
    for (&(col, row), &i) in &aux_of {
        positions[n + i] = at_half_row(col, row);
    }
    let mut layout = QubitLayout::new(positions);
    for row in 1..=l2 {
        for col in 1..l1 {
            layout.add_edge(order.index(col, row), order.index(col + 1, row));
        }
    }
    for (&(col, row), &i) in &aux_of {
        layout.add_edge(n + i, order.index(col, row));
        layout.add_edge(n + i, order.index(col, row + 1));
    }
    Ok(AuxCode {
        flavor: Flavor::Hadamard,
        n_data: n,
        r,
        p_strings,
        aux_ops,
        chi: vec![false; r],
        layout,
        lattice: Some(AqmLattice {
            kind: if periodicity == 1 {
                AqmKind::Square
            } else {
                AqmKind::Sparse { periodicity }
            },
            order,
            aux_of,
        }),
    })
}

fn complete_layout(n: usize) -> QubitLayout {
    let mut layout = QubitLayout::new((0..n).map(|q| (2 * q as i64, 0)).collect());
    for a in 0..n {
        for b in a + 1..n {
            layout.add_edge(a, b);
        }
    }
    layout
}

/// Generic code over possibly anticommuting p-strings:
/// `gamma^i = (prod_{k<i} Z_k^{i*k}) X_i` on the auxiliary register.
pub fn build_anticommuting(p_list: &[PauliString]) -> AuxCode {
    let r = p_list.len();
    let n = p_list.first().map_or(0, |p| p.n());
    let mut aux_ops = Vec::with_capacity(r);
    for i in 0..r {
        let mut g = PauliString::identity(r);
        for k in 0..i {
            if !p_list[i].commutes(&p_list[k]).expect("same register") {
                g.apply_letter(k, Pauli::Z);
            }
        }
        g.apply_letter(i, Pauli::X);
        aux_ops.push(g);
    }
    AuxCode {
        flavor: Flavor::Anticommuting,
        n_data: n,
        r,
        p_strings: p_list.to_vec(),
        aux_ops,
        chi: vec![false; r],
        layout: complete_layout(n + r),
        lattice: None,
    }
}

/// Generic Hadamard-basis code over pairwise commuting p-strings.
pub fn build_hadamard(p_list: &[PauliString]) -> Result<AuxCode, AqError> {
    for (i, a) in p_list.iter().enumerate() {
        for b in p_list.iter().skip(i + 1) {
            if !a.commutes(b).expect("same register") {
                return Err(AqError::CosetError(i));
            }
        }
    }
    let mut code = build_anticommuting(p_list);
    code.flavor = Flavor::Hadamard;
    Ok(code)
}

/// Generic computational-basis code defined by the rows of `B`.
pub fn build_computational(b: &BitMatrix) -> AuxCode {
    let (r, n) = (b.rows(), b.cols());
    let mut p_strings = Vec::with_capacity(r);
    for i in 0..r {
        let mut p = PauliString::identity(n);
        for j in b.row_support(i) {
            p.apply_letter(j, Pauli::Z);
        }
        p_strings.push(p);
    }
    let aux_ops = (0..r)
        .map(|i| PauliString::single(r, i, Pauli::Z))
        .collect();
    AuxCode {
        flavor: Flavor::Computational,
        n_data: n,
        r,
        p_strings,
        aux_ops,
        chi: vec![false; r],
        layout: complete_layout(n + r),
        lattice: None,
    }
}

// --- Routing -----------------------------------------------------------------

/// How a deformed string should cross rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RouteStrategy {
    /// Cross rows at the source column, then run along the target row.
    ColThenRow,
    /// Run along the source row first, crossing rows at the target column.
    RowThenCol,
    /// Cross rows at the listed connections `(col, row)` = `(col, row+1/2)`.
    Explicit(Vec<(usize, usize)>),
}

/// Deforms an adjusted two-mode string by multiplying the stabilizers of the
/// vertical connections along the chosen path. Endpoints are the lattice
/// coordinates of the two interacting modes; the source is the lower one.
pub fn route_string(
    code: &AuxCode,
    adjusted: &PauliString,
    endpoints: ((usize, usize), (usize, usize)),
    strategy: &RouteStrategy,
) -> Result<PauliString, AqError> {
    let lattice = code
        .lattice
        .as_ref()
        .ok_or(AqError::FlavorMismatch("lattice-backed"))?;
    let ((c_a, r_a), (c_b, r_b)) = endpoints;
    let (lo_row, hi_row) = (r_a.min(r_b), r_a.max(r_b));
    let crossings: Vec<(usize, usize)> = match strategy {
        RouteStrategy::Explicit(list) => list.clone(),
        RouteStrategy::ColThenRow => {
            let col = if r_a <= r_b { c_a } else { c_b };
            (lo_row..hi_row).map(|row| (col, row)).collect()
        }
        RouteStrategy::RowThenCol => {
            let col = if r_a <= r_b { c_b } else { c_a };
            (lo_row..hi_row).map(|row| (col, row)).collect()
        }
    };
    let mut out = adjusted.clone();
    for (col, row) in crossings {
        let key = if lattice.kind == AqmKind::EType {
            (0, row)
        } else {
            (col, row)
        };
        let &i = lattice
            .aux_of
            .get(&key)
            .ok_or(AqError::MissingConnection(col, row))?;
        out = out.mul(&code.stabilizer(i)).expect("same register");
    }
    Ok(out)
}

// --- Local stabilizer tilings --------------------------------------------------

/// A geometrically local generating set: products of row-adjacent stabilizer
/// pairs plus the already-local winding stabilizers ("ears").
pub fn local_tiling(code: &AuxCode) -> Result<Vec<PauliString>, AqError> {
    let lattice = code
        .lattice
        .as_ref()
        .filter(|l| matches!(l.kind, AqmKind::Square | AqmKind::Sparse { .. }))
        .ok_or(AqError::FlavorMismatch("square or sparse AQM"))?;
    let step = match lattice.kind {
        AqmKind::Sparse { periodicity } => periodicity,
        _ => 1,
    };
    let l1 = lattice.order.l1;
    let l2 = lattice.order.l2;
    let cols: Vec<usize> = (1..=l1).step_by(step).collect();
    let mut tiles = Vec::new();
    for row in 1..l2 {
        // The stabilizer at the winding is local already.
        let ear_col = if row % 2 == 1 { l1 } else { 1 };
        tiles.push(code.stabilizer(lattice.aux_of[&(ear_col, row)]));
        for pair in cols.windows(2) {
            let a = code.stabilizer(lattice.aux_of[&(pair[0], row)]);
            let b = code.stabilizer(lattice.aux_of[&(pair[1], row)]);
            tiles.push(a.mul(&b).expect("same register"));
        }
    }
    Ok(tiles)
}
