//! Connectivity-aware synthesis of code-space initialization unitaries and
//! Pauli-propagator gadgets, with greedy depth accounting.

use crate::aqcode::{AqmKind, AuxCode, Flavor};
use crate::lattice::QubitLayout;
use crate::oracle::StateVector;
use crate::pauli::{Pauli, PauliString};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("string support is not connected on the layout (and bridging is off)")]
    Disconnected,
    #[error("no path through the support ends next to the control qubit")]
    NoControlPath,
    #[error("two-qubit gate ({0}, {1}) is not a layout edge")]
    NotAnEdge(usize, usize),
    #[error("cannot synthesize the identity propagator")]
    IdentityString,
    #[error("initialization circuits exist for Auxiliary Qubit codes only")]
    UnsupportedCode,
    #[error("skipped qubits must be interior to the chain")]
    BadBridge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    /// `exp(i angle Z_q)`.
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    fn inverse(&self) -> Gate {
        match self.clone() {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::Rz(q, a) => Gate::Rz(q, -a),
            g => g,
        }
    }
}

/// A gate list over `n` qubits with the layout it was synthesized for.
#[derive(Debug, Clone)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub layout: QubitLayout,
}

impl Circuit {
    pub fn new(n: usize, layout: QubitLayout) -> Self {
        assert_eq!(layout.len(), n);
        Circuit {
            n,
            gates: Vec::new(),
            layout,
        }
    }

    fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Greedy as-soon-as-possible layering respecting qubit exclusivity.
    pub fn depth(&self) -> usize {
        let mut busy_until = vec![0usize; self.n];
        let mut depth = 0;
        for gate in &self.gates {
            let layer = gate
                .qubits()
                .iter()
                .map(|&q| busy_until[q])
                .max()
                .unwrap_or(0)
                + 1;
            for q in gate.qubits() {
                busy_until[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    /// Checks that every CNOT touches a layout edge.
    pub fn respects_connectivity(&self) -> bool {
        self.gates.iter().all(|g| match *g {
            Gate::Cnot { control, target } => self.layout.are_adjacent(control, target),
            _ => true,
        })
    }

    /// Applies the circuit to a state, gate by gate.
    pub fn apply_to(&self, state: &StateVector) -> StateVector {
        assert_eq!(state.n, self.n);
        let mut amps = state.amps.clone();
        let dim = amps.len();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for gate in &self.gates {
            match *gate {
                Gate::H(q) => {
                    let bit = 1usize << q;
                    for idx in 0..dim {
                        if idx & bit == 0 {
                            let a = amps[idx];
                            let b = amps[idx | bit];
                            amps[idx] = (a + b) * inv_sqrt2;
                            amps[idx | bit] = (a - b) * inv_sqrt2;
                        }
                    }
                }
                Gate::S(q) => {
                    let bit = 1usize << q;
                    for (idx, amp) in amps.iter_mut().enumerate() {
                        if idx & bit != 0 {
                            *amp *= Complex64::new(0.0, 1.0);
                        }
                    }
                }
                Gate::Sdg(q) => {
                    let bit = 1usize << q;
                    for (idx, amp) in amps.iter_mut().enumerate() {
                        if idx & bit != 0 {
                            *amp *= Complex64::new(0.0, -1.0);
                        }
                    }
                }
                Gate::X(q) => {
                    let bit = 1usize << q;
                    for idx in 0..dim {
                        if idx & bit == 0 {
                            amps.swap(idx, idx | bit);
                        }
                    }
                }
                Gate::Rz(q, angle) => {
                    let bit = 1usize << q;
                    let plus = Complex64::new(0.0, angle).exp();
                    let minus = Complex64::new(0.0, -angle).exp();
                    for (idx, amp) in amps.iter_mut().enumerate() {
                        *amp *= if idx & bit == 0 { plus } else { minus };
                    }
                }
                Gate::Cnot { control, target } => {
                    let c = 1usize << control;
                    let t = 1usize << target;
                    for idx in 0..dim {
                        if idx & c != 0 && idx & t == 0 {
                            amps.swap(idx, idx | t);
                        }
                    }
                }
            }
        }
        StateVector { n: self.n, amps }
    }

    /// Gate-list JSON, 1-based qubits.
    pub fn to_json(&self) -> serde_json::Value {
        let gates: Vec<serde_json::Value> = self
            .gates
            .iter()
            .map(|g| match *g {
                Gate::H(q) => serde_json::json!(["h", q + 1]),
                Gate::S(q) => serde_json::json!(["s", q + 1]),
                Gate::Sdg(q) => serde_json::json!(["sdg", q + 1]),
                Gate::X(q) => serde_json::json!(["x", q + 1]),
                Gate::Rz(q, a) => serde_json::json!(["rz", q + 1, a]),
                Gate::Cnot { control, target } => {
                    serde_json::json!(["cnot", control + 1, target + 1])
                }
            })
            .collect();
        serde_json::json!({ "n": self.n, "gates": gates, "depth": self.depth() })
    }

    /// One gate per line, 1-based qubits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            let line = match *g {
                Gate::H(q) => format!("h {}", q + 1),
                Gate::S(q) => format!("s {}", q + 1),
                Gate::Sdg(q) => format!("sdg {}", q + 1),
                Gate::X(q) => format!("x {}", q + 1),
                Gate::Rz(q, a) => format!("rz {} {}", q + 1, a),
                Gate::Cnot { control, target } => format!("cnot {} {}", control + 1, target + 1),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Which of the two compensation circuits `bridge_expand` emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BridgeVariant {
    Center,
    Right,
}

/// Logical CNOT from the head to the tail of `chain`, compensating the
/// interior qubits. The forward construction corrupts the interiors; the
/// emitted restore gates clear them again, for a total overhead of exactly
/// `4m` gates over a bare CNOT for `m` interior qubits.
pub fn bridge_expand(
    chain: &[usize],
    variant: BridgeVariant,
    layout: &QubitLayout,
) -> Result<Circuit, CircuitError> {
    if chain.len() < 2 {
        return Err(CircuitError::BadBridge);
    }
    let mut c = Circuit::new(layout.len(), layout.clone());
    emit_bridge_forward(&mut c, chain, variant);
    emit_bridge_restore(&mut c, chain, variant);
    Ok(c)
}

/// Forward half: after these gates the tail holds `head + tail` and the
/// interiors are scrambled (linearly).
fn emit_bridge_forward(c: &mut Circuit, chain: &[usize], variant: BridgeVariant) {
    let m = chain.len() - 2;
    match variant {
        BridgeVariant::Center => {
            // Downward chain, upward chain, final hop onto the tail.
            for i in 1..=m {
                c.push(Gate::Cnot {
                    control: chain[i],
                    target: chain[i - 1],
                });
            }
            for i in 0..m {
                c.push(Gate::Cnot {
                    control: chain[i],
                    target: chain[i + 1],
                });
            }
            c.push(Gate::Cnot {
                control: chain[m],
                target: chain[m + 1],
            });
        }
        BridgeVariant::Right => {
            for i in (0..=m).rev() {
                c.push(Gate::Cnot {
                    control: chain[i],
                    target: chain[i + 1],
                });
            }
            for i in 1..=m {
                c.push(Gate::Cnot {
                    control: chain[i],
                    target: chain[i + 1],
                });
            }
        }
    }
}

/// Restore half: clears the interior qubits while leaving the tail parity.
fn emit_bridge_restore(c: &mut Circuit, chain: &[usize], variant: BridgeVariant) {
    let m = chain.len() - 2;
    match variant {
        BridgeVariant::Center => {
            // Reverse of the first 2m forward gates.
            for i in (0..m).rev() {
                c.push(Gate::Cnot {
                    control: chain[i],
                    target: chain[i + 1],
                });
            }
            for i in (1..=m).rev() {
                c.push(Gate::Cnot {
                    control: chain[i],
                    target: chain[i - 1],
                });
            }
        }
        BridgeVariant::Right => {
            // Interiors hold head + w_i; peel from the head upward.
            for i in (0..m).rev() {
                c.push(Gate::Cnot {
                    control: chain[i],
                    target: chain[i + 1],
                });
            }
            for i in 1..m {
                c.push(Gate::Cnot {
                    control: chain[i],
                    target: chain[i + 1],
                });
            }
        }
    }
}

fn basis_change_in(c: &mut Circuit, q: usize, op: Pauli) {
    match op {
        Pauli::X => c.push(Gate::H(q)),
        Pauli::Y => {
            c.push(Gate::Sdg(q));
            c.push(Gate::H(q));
        }
        _ => {}
    }
}

fn basis_change_out(c: &mut Circuit, q: usize, op: Pauli) {
    match op {
        Pauli::X => c.push(Gate::H(q)),
        Pauli::Y => {
            c.push(Gate::H(q));
            c.push(Gate::S(q));
        }
        _ => {}
    }
}

/// Hamiltonian path through `support` on the layout, optionally required to
/// end adjacent to `end_next_to`. Depth-first search; supports are small.
fn support_path(
    layout: &QubitLayout,
    support: &[usize],
    end_next_to: Option<usize>,
) -> Option<Vec<usize>> {
    let set: std::collections::HashSet<usize> = support.iter().copied().collect();
    fn dfs(
        layout: &QubitLayout,
        set: &std::collections::HashSet<usize>,
        path: &mut Vec<usize>,
        seen: &mut std::collections::HashSet<usize>,
        end_next_to: Option<usize>,
    ) -> bool {
        if path.len() == set.len() {
            return match end_next_to {
                Some(c) => layout.are_adjacent(*path.last().unwrap(), c),
                None => true,
            };
        }
        let last = *path.last().unwrap();
        for &next in &layout.edges[last] {
            if set.contains(&next) && !seen.contains(&next) {
                path.push(next);
                seen.insert(next);
                if dfs(layout, set, path, seen, end_next_to) {
                    return true;
                }
                path.pop();
                seen.remove(&next);
            }
        }
        false
    }
    for &start in support {
        let mut path = vec![start];
        let mut seen = std::collections::HashSet::from([start]);
        if dfs(layout, &set, &mut path, &mut seen, end_next_to) {
            return Some(path);
        }
    }
    None
}

/// Propagator gadget for `exp(i phi h)`: basis changes, CNOT fan-in to a
/// middle qubit, the Z-rotation, and the mirrored uncompute. Disconnected
/// supports are joined through interior qubits with bridge chains when
/// `bridging` is set.
pub fn synth_propagator(
    h: &PauliString,
    phi: f64,
    layout: &QubitLayout,
    bridging: bool,
) -> Result<Circuit, CircuitError> {
    let support = h.support();
    if support.is_empty() {
        return Err(CircuitError::IdentityString);
    }
    let mut circuit = Circuit::new(layout.len(), layout.clone());
    if support.len() == 1 {
        let q = support[0];
        basis_change_in(&mut circuit, q, h.letter(q));
        circuit.push(Gate::Rz(q, phi));
        basis_change_out(&mut circuit, q, h.letter(q));
        return Ok(circuit);
    }

    // Order the support as a chain; bridge through skipped qubits if allowed.
    let (chain, skipped) = if layout.is_connected(&support) {
        match support_path(layout, &support, None) {
            Some(path) => (path, std::collections::HashSet::new()),
            None => return Err(CircuitError::Disconnected),
        }
    } else if bridging {
        bridged_chain(layout, &support)?
    } else {
        return Err(CircuitError::Disconnected);
    };

    let mut forward = Circuit::new(layout.len(), layout.clone());
    for &q in &support {
        basis_change_in(&mut forward, q, h.letter(q));
    }
    // Fan in both halves toward the middle of the chain; the rotation qubit
    // must carry a letter of h, so skip bridged interiors when centering.
    let mid = chain.len() / 2;
    let root_pos = (0..chain.len())
        .filter(|&i| !skipped.contains(&chain[i]))
        .min_by_key(|&i| i.abs_diff(mid))
        .expect("support is non-empty");
    let emit_half = |half: &[usize]| -> Vec<Gate> {
        // `half` runs from the chain end toward the root.
        let mut gates = Circuit::new(layout.len(), layout.clone());
        let mut run: Vec<usize> = Vec::new();
        for window in half.windows(2) {
            let (a, b) = (window[0], window[1]);
            if skipped.contains(&b) {
                if run.is_empty() {
                    run.push(a);
                }
                run.push(b);
                continue;
            }
            if run.is_empty() {
                gates.push(Gate::Cnot { control: a, target: b });
            } else {
                // b closes a skipped run; bridge the head parity across it.
                run.push(b);
                emit_bridge_forward(&mut gates, &run, BridgeVariant::Center);
                run.clear();
            }
        }
        gates.gates
    };
    // Left half: end -> root; right half: other end -> root. The halves act
    // on disjoint qubits except the root, so interleave them for depth.
    let left = emit_half(&chain[..=root_pos]);
    let right_chain: Vec<usize> = chain[root_pos..].iter().rev().copied().collect();
    let right = emit_half(&right_chain);
    let mut l = left.into_iter();
    let mut r = right.into_iter();
    loop {
        match (l.next(), r.next()) {
            (None, None) => break,
            (a, b) => {
                forward.gates.extend(a);
                forward.gates.extend(b);
            }
        }
    }

    circuit.gates.extend(forward.gates.iter().cloned());
    circuit.push(Gate::Rz(chain[root_pos], phi));
    // The mirrored inverse also restores the basis changes.
    for gate in forward.gates.iter().rev() {
        circuit.push(gate.inverse());
    }
    Ok(circuit)
}

/// Connects a disconnected support through shortest layout paths; returns
/// the full chain and the set of skipped interior qubits.
fn bridged_chain(
    layout: &QubitLayout,
    support: &[usize],
) -> Result<(Vec<usize>, std::collections::HashSet<usize>), CircuitError> {
    // Greedy: walk the support in layout order, stitching consecutive
    // components with shortest paths.
    let mut remaining: Vec<usize> = support.to_vec();
    let mut chain = vec![remaining.remove(0)];
    let mut skipped = std::collections::HashSet::new();
    while !remaining.is_empty() {
        let last = *chain.last().unwrap();
        let (best_idx, path) = remaining
            .iter()
            .enumerate()
            .filter_map(|(i, &q)| layout.shortest_path(last, q).map(|p| (i, p)))
            .min_by_key(|(_, p)| p.len())
            .ok_or(CircuitError::Disconnected)?;
        for &q in &path[1..] {
            if !support.contains(&q) {
                skipped.insert(q);
            }
            chain.push(q);
        }
        remaining.remove(best_idx);
    }
    Ok((chain, skipped))
}

/// Controlled application of a Pauli word: basis changes, a CNOT ladder along
/// the support, one controlled-Z link to the control, and the uncompute.
/// A `-1` word sign becomes a Z on the control.
fn controlled_pauli(
    circuit: &mut Circuit,
    control: usize,
    string: &PauliString,
) -> Result<(), CircuitError> {
    let support = string.support();
    if support.is_empty() {
        return Ok(());
    }
    let sign = string.word_coefficient();
    if sign.re < -0.5 {
        // -1 word sign: controlled global phase = Z on the control.
        circuit.push(Gate::S(control));
        circuit.push(Gate::S(control));
    }
    if let Some(path) = support_path(&circuit.layout.clone(), &support, Some(control)) {
        // CNOT ladder along the string plus a single controlled-Z link.
        for &q in &path {
            basis_change_in(circuit, q, string.letter(q));
        }
        for w in path.windows(2) {
            circuit.push(Gate::Cnot {
                control: w[0],
                target: w[1],
            });
        }
        let end = *path.last().unwrap();
        circuit.push(Gate::H(end));
        circuit.push(Gate::Cnot {
            control,
            target: end,
        });
        circuit.push(Gate::H(end));
        for w in path.windows(2).rev() {
            circuit.push(Gate::Cnot {
                control: w[0],
                target: w[1],
            });
        }
        for &q in &path {
            basis_change_out(circuit, q, string.letter(q));
        }
        return Ok(());
    }
    // Per-qubit controlled letters when everything touches the control
    // directly, as at the windings.
    if support.iter().all(|&q| circuit.layout.are_adjacent(q, control)) {
        for &q in &support {
            match string.letter(q) {
                Pauli::X => circuit.push(Gate::Cnot { control, target: q }),
                Pauli::Z => {
                    circuit.push(Gate::H(q));
                    circuit.push(Gate::Cnot { control, target: q });
                    circuit.push(Gate::H(q));
                }
                Pauli::Y => {
                    circuit.push(Gate::Sdg(q));
                    circuit.push(Gate::Cnot { control, target: q });
                    circuit.push(Gate::S(q));
                }
                Pauli::I => {}
            }
        }
        return Ok(());
    }
    Err(CircuitError::NoControlPath)
}

/// Code-space initialization circuit `V` for an Auxiliary Qubit code:
/// applying it to `|phi> (x) |chi>`-seeded auxiliaries yields a `+1`
/// eigenstate of every stabilizer.
pub fn synth_init(code: &AuxCode) -> Result<Circuit, CircuitError> {
    let n = code.n_total();
    let mut circuit = Circuit::new(n, code.layout.clone());
    for (i, &flip) in code.chi.iter().enumerate() {
        if flip {
            circuit.push(Gate::X(code.n_data + i));
        }
    }
    match code.flavor {
        Flavor::Computational => {
            // Parity fan-in: data qubit j feeds auxiliary i wherever B_ij = 1.
            for (i, p) in code.p_strings.iter().enumerate() {
                for j in 0..code.n_data {
                    if p.z_bit(j) {
                        circuit.push(Gate::Cnot {
                            control: j,
                            target: code.n_data + i,
                        });
                    }
                }
            }
        }
        Flavor::Hadamard => {
            for i in 0..code.r {
                circuit.push(Gate::H(code.n_data + i));
            }
            match code.lattice.as_ref().map(|l| &l.kind) {
                Some(AqmKind::Square) | Some(AqmKind::Sparse { .. }) => {
                    emit_lattice_sequence(&mut circuit, code)?;
                }
                _ => {
                    for i in 0..code.r {
                        let p = code.p_strings[i].embed(n);
                        controlled_pauli(&mut circuit, code.n_data + i, &p)?;
                    }
                }
            }
        }
        Flavor::Anticommuting => {
            // Later-indexed stabilizers are entangled first; with that order
            // no Z-dressing is needed on the conditional strings.
            for i in (0..code.r).rev() {
                circuit.push(Gate::H(code.n_data + i));
                let p = code.p_strings[i].embed(n);
                controlled_pauli(&mut circuit, code.n_data + i, &p)?;
            }
        }
    }
    Ok(circuit)
}

/// The O(l1)-depth conditional-string sequence of the square and sparse
/// AQMs: per row pair, entangle the winding auxiliary with its local
/// p-string, then walk inward, each conditional string merged with the
/// previously entangled stabilizer to stay local.
fn emit_lattice_sequence(circuit: &mut Circuit, code: &AuxCode) -> Result<(), CircuitError> {
    let lattice = code.lattice.as_ref().expect("lattice-backed code");
    let step = match lattice.kind {
        AqmKind::Sparse { periodicity } => periodicity,
        _ => 1,
    };
    let (l1, l2) = (lattice.order.l1, lattice.order.l2);
    let n = code.n_total();
    for row in 1..l2 {
        // Winding side: column l1 for odd rows, column 1 for even rows.
        let mut cols: Vec<usize> = (1..=l1).step_by(step).collect();
        if row % 2 == 1 {
            cols.reverse();
        }
        let first = cols[0];
        let aux = lattice.aux_of[&(first, row)];
        controlled_pauli(circuit, code.n_data + aux, &code.p_strings[aux].embed(n))?;
        for pair in cols.windows(2) {
            let (prev, col) = (pair[0], pair[1]);
            let aux_prev = lattice.aux_of[&(prev, row)];
            let aux_here = lattice.aux_of[&(col, row)];
            let merged = code
                .stabilizer(aux_prev)
                .mul(&code.p_strings[aux_here].embed(n))
                .expect("same register");
            controlled_pauli(circuit, code.n_data + aux_here, &merged)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aqcode;
    use crate::lattice::QubitLayout;
    use crate::oracle;
    use nalgebra::DMatrix;
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};

    fn circuit_matrix(c: &Circuit) -> DMatrix<C> {
        let dim = 1usize << c.n;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let out = c.apply_to(&StateVector::basis(c.n, col));
            for row in 0..dim {
                m[(row, col)] = out.amps[row];
            }
        }
        m
    }

    /// exp(i phi h) = cos(phi) I + i sin(phi) h for a Pauli word h.
    fn exact_propagator(h: &PauliString, phi: f64) -> DMatrix<C> {
        let mut sum = crate::pauli::PauliSum::new(h.n());
        sum.add_term(&PauliString::identity(h.n()), C::new(phi.cos(), 0.0));
        sum.add_term(h, C::new(0.0, phi.sin()));
        oracle::dense_matrix(&sum).unwrap()
    }

    fn frobenius_distance(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
        (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn single_z_is_one_rotation() {
        let h = PauliString::single(1, 0, Pauli::Z);
        let c = synth_propagator(&h, 0.4, &QubitLayout::chain(1), false).unwrap();
        assert_eq!(c.gates.len(), 1);
        assert!(frobenius_distance(&circuit_matrix(&c), &exact_propagator(&h, 0.4)) < 1e-12);
    }

    #[test]
    fn eight_qubit_gadget_matches_exponential() {
        // X Z Z Z Z Z Z X on a chain.
        let mut h = PauliString::identity(8);
        h.apply_letter(0, Pauli::X);
        for q in 1..7 {
            h.apply_letter(q, Pauli::Z);
        }
        h.apply_letter(7, Pauli::X);
        let phi = 0.37;
        let c = synth_propagator(&h, phi, &QubitLayout::chain(8), false).unwrap();
        assert!(c.respects_connectivity());
        assert!(frobenius_distance(&circuit_matrix(&c), &exact_propagator(&h, phi)) < 1e-10);
        // Gate census: 2(w-1) CNOTs; depth measured by the greedy layering.
        assert_eq!(c.cnot_count(), 14);
        assert_eq!(c.depth(), 11);
    }

    #[test]
    fn random_continuous_strings_match_exponential() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..12 {
            let n = rng.gen_range(2..=7);
            let layout = QubitLayout::chain(n);
            let start = rng.gen_range(0..n - 1);
            let stop = rng.gen_range(start + 1..n);
            let mut h = PauliString::identity(n);
            for q in start..=stop {
                let op = [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)];
                h.apply_letter(q, op);
            }
            if h.weight() < 2 {
                continue;
            }
            let phi: f64 = rng.gen_range(-1.5..1.5);
            let c = synth_propagator(&h, phi, &layout, false).unwrap();
            assert!(c.respects_connectivity());
            assert!(
                frobenius_distance(&circuit_matrix(&c), &exact_propagator(&h, phi)) < 1e-10,
                "string {} phi {}",
                h.render(),
                phi
            );
        }
    }

    #[test]
    fn disconnected_support_requires_bridging() {
        let mut h = PauliString::identity(5);
        h.apply_letter(0, Pauli::X);
        h.apply_letter(4, Pauli::X);
        let layout = QubitLayout::chain(5);
        assert!(matches!(
            synth_propagator(&h, 0.2, &layout, false),
            Err(CircuitError::Disconnected)
        ));
        let c = synth_propagator(&h, 0.2, &layout, true).unwrap();
        assert!(c.respects_connectivity());
        assert!(frobenius_distance(&circuit_matrix(&c), &exact_propagator(&h, 0.2)) < 1e-10);
    }

    #[test]
    fn bridge_gate_counts_and_annotations() {
        // m = 0: a bare CNOT.
        let layout = QubitLayout::chain(6);
        let c0 = bridge_expand(&[0, 1], BridgeVariant::Center, &layout).unwrap();
        assert_eq!(c0.gates.len(), 1);
        for m in 1..=4 {
            let chain: Vec<usize> = (0..m + 2).collect();
            let c = bridge_expand(&chain, BridgeVariant::Center, &layout).unwrap();
            assert_eq!(c.gates.len(), 1 + 4 * m, "total = logical CNOT + 4m");
        }
    }

    #[test]
    fn center_bridge_acts_as_logical_cnot_and_restores_interiors() {
        let layout = QubitLayout::chain(6);
        let chain: Vec<usize> = (0..6).collect();
        let c = bridge_expand(&chain, BridgeVariant::Center, &layout).unwrap();
        for input in 0..64usize {
            let out = c.apply_to(&StateVector::basis(6, input));
            let expect = input ^ (((input & 1) != 0) as usize) << 5;
            assert!((out.amps[expect] - C::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn right_bridge_matches_figure_annotations() {
        // Forward half only: omega_1 + omega_i on the interiors, tail picks
        // up omega_1 + omega_6.
        let layout = QubitLayout::chain(6);
        let chain: Vec<usize> = (0..6).collect();
        let mut c = Circuit::new(6, layout.clone());
        emit_bridge_forward(&mut c, &chain, BridgeVariant::Right);
        let input = 0b100101usize; // w = (1,0,1,0,0,1)
        let out = c.apply_to(&StateVector::basis(6, input));
        let w = |i: usize| (input >> i) & 1;
        let mut expect = w(0);
        for i in 1..6 {
            expect |= ((w(0) ^ w(i)) & 1) << i;
        }
        assert!((out.amps[expect] - C::new(1.0, 0.0)).norm() < 1e-12);
        // With the restore half the interiors come back.
        let full = bridge_expand(&chain, BridgeVariant::Right, &layout).unwrap();
        let out = full.apply_to(&StateVector::basis(6, input));
        let expect = input ^ (w(0) << 5);
        assert!((out.amps[expect] - C::new(1.0, 0.0)).norm() < 1e-12);
    }

    fn check_init_stabilizes(code: &aqcode::AuxCode, seed: u64) {
        let circuit = synth_init(code).unwrap();
        assert!(circuit.respects_connectivity());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let phi = StateVector::random(code.n_data, &mut rng);
            let mut state = phi.extend_zeros(code.r);
            state = circuit.apply_to(&state);
            for s in code.stabilizers() {
                let e = oracle::expectation_string(&s, &state);
                assert!(
                    (e - C::new(1.0, 0.0)).norm() < 1e-10,
                    "stabilizer expectation {e} for {}",
                    s.render()
                );
            }
        }
    }

    #[test]
    fn e_type_init_stabilizes_random_states() {
        check_init_stabilizes(&aqcode::build_e_type(4, 2), 31);
        // One row of 4: the 4-CNOT fan-in chain, depth 4.
        let code = aqcode::build_e_type(4, 1);
        let c = synth_init(&code).unwrap();
        assert_eq!(c.cnot_count(), 4);
        assert_eq!(c.depth(), 4);
    }

    #[test]
    fn square_init_stabilizes_random_states() {
        check_init_stabilizes(&aqcode::build_square(2, 2), 32);
        check_init_stabilizes(&aqcode::build_square(3, 2), 33);
    }

    #[test]
    fn sparse_init_stabilizes_random_states() {
        check_init_stabilizes(&aqcode::build_sparse(3, 2, 2).unwrap(), 34);
    }

    #[test]
    fn generic_and_anticommuting_init() {
        let p1 = PauliString::parse(3, "X1 Z2").unwrap();
        let p2 = PauliString::parse(3, "Z2 X3").unwrap();
        check_init_stabilizes(&aqcode::build_hadamard(&[p1.clone(), p2.clone()]).unwrap(), 35);
        let q1 = PauliString::parse(2, "X1").unwrap();
        let q2 = PauliString::parse(2, "Z1 Z2").unwrap();
        check_init_stabilizes(&aqcode::build_anticommuting(&[q1, q2]), 36);
    }

    #[test]
    fn square_init_depth_grows_linearly_in_l1() {
        let depths: Vec<usize> = (2..=6)
            .map(|l1| synth_init(&aqcode::build_square(l1, 2)).unwrap().depth())
            .collect();
        // Strictly increasing with bounded increments.
        for w in depths.windows(2) {
            let delta = w[1] as i64 - w[0] as i64;
            assert!(delta > 0 && delta < 30, "depth increments {:?}", depths);
        }
    }

    #[test]
    fn chi_seeded_init_still_stabilizes() {
        let mut code = aqcode::build_square(2, 2);
        code.chi = vec![true, false];
        check_init_stabilizes(&code, 37);
    }
}

/// Test-only window into the controlled-string decomposition.
#[doc(hidden)]
pub fn test_support_controlled_pauli(
    layout: &QubitLayout,
    control: usize,
    string: &PauliString,
) -> Result<Circuit, CircuitError> {
    let mut c = Circuit::new(layout.len(), layout.clone());
    controlled_pauli(&mut c, control, string)?;
    Ok(c)
}
