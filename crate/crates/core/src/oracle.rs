//! Brute-force verification: matrix-free state-vector application, code-space
//! bases, restricted spectra, and the canonical-anticommutation report.
//!
//! Everything here is desk scale on purpose. Guardrails reject registers that
//! would silently turn a unit test into an overnight job.

use crate::pauli::{PauliString, PauliSum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Hard cap on matrix-free register sizes.
pub const MAX_APPLY_QUBITS: usize = 26;
/// Hard cap on dense matrix construction.
pub const MAX_DENSE_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("register of {0} qubits exceeds the guardrail of {1}")]
    TooLarge(usize, usize),
    #[error("state dimension mismatch")]
    DimensionMismatch,
    #[error("stabilizers are inconsistent: code space is empty or short (rank {0})")]
    RankError(usize),
    #[error("operator does not commute with stabilizer #{0}")]
    NotInCommutant(usize),
    #[error("stabilizers must commute pairwise: ({0}, {1})")]
    NonCommutingStabilizers(usize, usize),
}

/// Dense complex state on `n` qubits; qubit `q` is bit `q` of the index.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

fn thread_budget() -> usize {
    std::env::var("LATTICEMAP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

impl StateVector {
    pub fn zero_state(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Self {
        assert!(n <= MAX_APPLY_QUBITS);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// Haar-ish random normalized state from the given RNG.
    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Self {
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        StateVector { n, amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
    }

    pub fn dot(&self, rhs: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(rhs.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product `self (x) |0^r>` extending by `r` zeroed qubits at the top.
    pub fn extend_zeros(&self, r: usize) -> StateVector {
        let mut out = StateVector {
            n: self.n + r,
            amps: vec![Complex64::new(0.0, 0.0); 1 << (self.n + r)],
        };
        out.amps[..self.amps.len()].copy_from_slice(&self.amps);
        out
    }
}

/// Applies a single Pauli string, matrix-free.
pub fn apply_string(op: &PauliString, s: &StateVector) -> StateVector {
    assert_eq!(op.n(), s.n);
    let dim = s.amps.len();
    let xw = op.x_mask();
    let zw = op.z_mask();
    let phase = match op.phase() {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    assert!(s.n <= 64, "oracle registers fit in one mask word");
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    let x0 = *xw.first().unwrap_or(&0) as usize;
    let z0 = *zw.first().unwrap_or(&0);
    for (src, amp) in s.amps.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let sign = if ((src as u64 & z0).count_ones()) % 2 == 1 {
            -phase
        } else {
            phase
        };
        out[src ^ x0] += sign * amp;
    }
    StateVector { n: s.n, amps: out }
}

/// Exact linear action of a Pauli sum, matrix-free per term. Honors the
/// `LATTICEMAP_THREADS` cap for large registers.
pub fn apply(op: &PauliSum, s: &StateVector) -> Result<StateVector, OracleError> {
    if s.n > MAX_APPLY_QUBITS {
        return Err(OracleError::TooLarge(s.n, MAX_APPLY_QUBITS));
    }
    if op.n() != s.n {
        return Err(OracleError::DimensionMismatch);
    }
    let dim = s.amps.len();
    let terms: Vec<(u64, u64, Complex64)> = op
        .iter()
        .map(|(p, c)| (p.x_mask()[0], p.z_mask()[0], c))
        .collect();
    let threads = thread_budget().min(dim.max(1));
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    let fill = |target_range: std::ops::Range<usize>, out: &mut [Complex64]| {
        for (slot, target) in target_range.enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(x, z, c) in &terms {
                let src = target ^ (x as usize);
                let amp = s.amps[src];
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let sign = if ((src as u64 & z).count_ones()) % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                acc += c * sign * amp;
            }
            out[slot] = acc;
        }
    };
    if threads <= 1 || dim < 1 << 12 {
        fill(0..dim, &mut out);
    } else {
        let chunk = dim.div_ceil(threads);
        let slices: Vec<&mut [Complex64]> = out.chunks_mut(chunk).collect();
        std::thread::scope(|scope| {
            for (t, slice) in slices.into_iter().enumerate() {
                let fill = &fill;
                scope.spawn(move || {
                    let start = t * chunk;
                    fill(start..start + slice.len(), slice);
                });
            }
        });
    }
    Ok(StateVector { n: s.n, amps: out })
}

/// Expectation value `<s|op|s>`.
pub fn expectation(op: &PauliSum, s: &StateVector) -> Result<Complex64, OracleError> {
    Ok(s.dot(&apply(op, s)?))
}

pub fn expectation_string(op: &PauliString, s: &StateVector) -> Complex64 {
    s.dot(&apply_string(op, s))
}

/// Dense matrix of a Pauli sum; guarded to small registers.
pub fn dense_matrix(op: &PauliSum) -> Result<DMatrix<Complex64>, OracleError> {
    if op.n() > MAX_DENSE_QUBITS {
        return Err(OracleError::TooLarge(op.n(), MAX_DENSE_QUBITS));
    }
    let dim = 1usize << op.n();
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let out = apply(op, &StateVector::basis(op.n(), col))?;
        for row in 0..dim {
            m[(row, col)] += out.amps[row];
        }
    }
    Ok(m)
}

/// Orthonormal basis of the joint `+1` eigenspace of a commuting stabilizer set.
#[derive(Debug, Clone)]
pub struct CodeBasis {
    pub n: usize,
    pub r: usize,
    pub vectors: Vec<StateVector>,
}

/// Builds the code basis by group-averaging computational kets in
/// lexicographic order and orthonormalizing; deterministic by construction.
pub fn codespace_basis(stabs: &[PauliString], n: usize) -> Result<CodeBasis, OracleError> {
    for (i, a) in stabs.iter().enumerate() {
        for (j, b) in stabs.iter().enumerate().skip(i + 1) {
            if !a.commutes(b).unwrap_or(false) {
                return Err(OracleError::NonCommutingStabilizers(i, j));
            }
        }
    }
    let rank = symplectic_rank(stabs, n);
    if n - rank > 14 {
        return Err(OracleError::TooLarge(n - rank, 14));
    }
    let target = 1usize << (n - rank);
    let mut vectors: Vec<StateVector> = Vec::with_capacity(target);
    for seed in 0..1usize << n {
        if vectors.len() == target {
            break;
        }
        let mut v = StateVector::basis(n, seed);
        for s in stabs {
            // v <- (v + S v)/2
            let sv = apply_string(s, &v);
            for (a, b) in v.amps.iter_mut().zip(sv.amps.iter()) {
                *a = (*a + b) * 0.5;
            }
        }
        for prev in &vectors {
            let overlap = prev.dot(&v);
            for (a, b) in v.amps.iter_mut().zip(prev.amps.iter()) {
                *a -= overlap * b;
            }
        }
        if v.norm() > 1e-8 {
            v.normalize();
            vectors.push(v);
        }
    }
    if vectors.len() != target {
        return Err(OracleError::RankError(vectors.len()));
    }
    // Each vector must actually be stabilized.
    for v in &vectors {
        for s in stabs {
            let e = expectation_string(s, v);
            if (e - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
                return Err(OracleError::RankError(vectors.len()));
            }
        }
    }
    Ok(CodeBasis {
        n,
        r: rank,
        vectors,
    })
}

/// Rank of the stabilizer set as GF(2) symplectic vectors.
fn symplectic_rank(stabs: &[PauliString], n: usize) -> usize {
    let mut rows: Vec<Vec<bool>> = stabs
        .iter()
        .map(|s| {
            let mut v = Vec::with_capacity(2 * n);
            for q in 0..n {
                v.push(s.x_bit(q));
            }
            for q in 0..n {
                v.push(s.z_bit(q));
            }
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..2 * n {
        if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) {
            rows.swap(pivot, rank);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] {
                    for (a, b) in row.iter_mut().zip(pivot_row.iter()) {
                        *a ^= *b;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Eigenvalues of `H` restricted to the code space, ascending, with
/// degeneracies kept.
pub fn restricted_spectrum(h: &PauliSum, basis: &CodeBasis) -> Result<Vec<f64>, OracleError> {
    let dim = basis.vectors.len();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let images: Vec<StateVector> = basis
        .vectors
        .iter()
        .map(|v| apply(h, v))
        .collect::<Result<_, _>>()?;
    for (b, img) in images.iter().enumerate() {
        for (a, va) in basis.vectors.iter().enumerate() {
            m[(a, b)] = va.dot(img);
        }
    }
    Ok(hermitian_eigenvalues(&m))
}

/// Checks termwise commutation of `h` with every stabilizer, as required
/// before a restricted spectrum is meaningful.
pub fn check_commutes_with_stabilizers(
    h: &PauliSum,
    stabs: &[PauliString],
) -> Result<(), OracleError> {
    for (i, s) in stabs.iter().enumerate() {
        for (term, _) in h.iter() {
            if !term.commutes(s).unwrap_or(false) {
                return Err(OracleError::NotInCommutant(i));
            }
        }
    }
    Ok(())
}

/// One canonical-anticommutation failure: the offending mode pair and the
/// surviving coset remainder.
#[derive(Debug, Clone)]
pub struct AlgebraFailure {
    pub i: usize,
    pub j: usize,
    pub witness: String,
}

/// Report of the canonical-anticommutation suite.
#[derive(Debug, Clone)]
pub struct AlgebraReport {
    pub pairs_checked: usize,
    pub failures: Vec<AlgebraFailure>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pairs_checked": self.pairs_checked,
            "failures": self.failures.iter().map(|f| {
                serde_json::json!({"i": f.i + 1, "j": f.j + 1, "witness": f.witness})
            }).collect::<Vec<_>>(),
        })
    }
}

/// Checks `[c_i, c_j^dag]_+ = delta_ij` and `[c_i, c_j]_+ = 0` for every
/// mode pair, with every operator taken modulo the stabilizer group: the
/// images themselves are first reduced to their deformed representatives, so
/// the relations only close through correctly signed stabilizers.
/// `images[k] = (annihilator image, creator image)` of mode `k`.
pub fn algebra_check(
    images: &[(PauliSum, PauliSum)],
    stabs: &[PauliString],
    n: usize,
) -> Result<AlgebraReport, crate::aqcode::AqError> {
    let basis = crate::aqcode::StabilizerBasis::new(stabs)?;
    let reduce_sum = |sum: &PauliSum| -> Result<PauliSum, crate::aqcode::AqError> {
        let mut out = PauliSum::new(n);
        for (term, coeff) in sum.iter() {
            let (rep, phase) = basis.reduce(&term)?.canonicalize();
            out.add_term(&rep, coeff * phase);
        }
        Ok(out)
    };
    let images: Vec<(PauliSum, PauliSum)> = images
        .iter()
        .map(|(a, c)| Ok((reduce_sum(a)?, reduce_sum(c)?)))
        .collect::<Result<_, crate::aqcode::AqError>>()?;
    let mut report = AlgebraReport {
        pairs_checked: 0,
        failures: Vec::new(),
    };
    for (i, (ci, _)) in images.iter().enumerate() {
        for (j, (cj, cjd)) in images.iter().enumerate() {
            report.pairs_checked += 1;
            let mut ac = ci.anticommutator(cjd).expect("same register");
            if i == j {
                ac.add_term(&PauliString::identity(n), Complex64::new(-1.0, 0.0));
            }
            let reduced = reduce_sum(&ac)?;
            if !reduced.is_empty() {
                report.failures.push(AlgebraFailure {
                    i,
                    j,
                    witness: format!("[c_{}, c^dag_{}]+ residue: {}", i + 1, j + 1, reduced),
                });
            }
            let ac2 = ci.anticommutator(cj).expect("same register");
            let reduced2 = reduce_sum(&ac2)?;
            if !reduced2.is_empty() {
                report.failures.push(AlgebraFailure {
                    i,
                    j,
                    witness: format!("[c_{}, c_{}]+ residue: {}", i + 1, j + 1, reduced2),
                });
            }
        }
    }
    Ok(report)
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let sym = m.clone().symmetric_eigen();
    let mut vals: Vec<f64> = sym.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Spectrum of a full Pauli sum on its whole register (dense, guarded).
pub fn full_spectrum(h: &PauliSum) -> Result<Vec<f64>, OracleError> {
    Ok(hermitian_eigenvalues(&dense_matrix(h)?))
}

/// Compares two sorted spectra at the given tolerance.
pub fn spectra_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use num_complex::Complex64 as C;
    use rand::SeedableRng;

    #[test]
    fn z_on_zero_state() {
        let s = StateVector::zero_state(3);
        let z = PauliString::single(3, 0, Pauli::Z);
        let out = apply_string(&z, &s);
        assert_eq!(out.amps[0], C::new(1.0, 0.0));
    }

    #[test]
    fn occupied_mode_projector() {
        // 1/2 (I - Z1) keeps |1 0...> intact.
        let mut p = PauliSum::new(3);
        p.add_term(&PauliString::identity(3), C::new(0.5, 0.0));
        p.add_term(&PauliString::single(3, 0, Pauli::Z), C::new(-0.5, 0.0));
        let s = StateVector::basis(3, 0b001);
        let out = apply(&p, &s).unwrap();
        assert!((out.amps[1] - C::new(1.0, 0.0)).norm() < 1e-15);
        assert!(out.norm() - 1.0 < 1e-12);
    }

    #[test]
    fn apply_matches_dense_at_n5() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        use rand::Rng;
        let n = 5;
        let mut sum = PauliSum::new(n);
        for _ in 0..12 {
            let ops: Vec<(usize, Pauli)> = (0..n)
                .filter_map(|q| {
                    match rng.gen_range(0..4) {
                        0 => None,
                        1 => Some((q, Pauli::X)),
                        2 => Some((q, Pauli::Y)),
                        _ => Some((q, Pauli::Z)),
                    }
                })
                .collect();
            sum.add_term(
                &PauliString::from_ops(n, &ops),
                C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let m = dense_matrix(&sum).unwrap();
        let s = StateVector::random(n, &mut rng);
        let fast = apply(&sum, &s).unwrap();
        for row in 0..1 << n {
            let mut acc = C::new(0.0, 0.0);
            for col in 0..1 << n {
                acc += m[(row, col)] * s.amps[col];
            }
            assert!((acc - fast.amps[row]).norm() < 1e-12);
        }
    }

    #[test]
    fn basis_of_empty_stabilizer_set_is_computational() {
        let basis = codespace_basis(&[], 2).unwrap();
        assert_eq!(basis.vectors.len(), 4);
    }

    #[test]
    fn zz_code_space() {
        let zz = PauliString::from_ops(2, &[(0, Pauli::Z), (1, Pauli::Z)]);
        let basis = codespace_basis(&[zz], 2).unwrap();
        assert_eq!(basis.vectors.len(), 2);
        // span{|00>, |11>}
        for v in &basis.vectors {
            assert!(v.amps[0b01].norm() < 1e-12 && v.amps[0b10].norm() < 1e-12);
        }
    }

    #[test]
    fn inconsistent_stabilizers_are_rejected() {
        let z = PauliString::single(1, 0, Pauli::Z);
        let mut minus_z = z.clone();
        minus_z.mul_phase(2);
        assert!(codespace_basis(&[z, minus_z], 1).is_err());
    }

    #[test]
    fn identity_spectrum_is_all_ones() {
        let basis = codespace_basis(&[], 2).unwrap();
        let h = PauliSum::scalar(2, C::new(1.0, 0.0));
        let vals = restricted_spectrum(&h, &basis).unwrap();
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn norm_conserved_under_hermitian_exponential_pieces() {
        // exp(i phi h) = cos(phi) I + i sin(phi) h for a Pauli string h.
        let h = PauliString::from_ops(2, &[(0, Pauli::X), (1, Pauli::Y)]);
        let phi: f64 = 0.731;
        let mut u = PauliSum::new(2);
        u.add_term(&PauliString::identity(2), C::new(phi.cos(), 0.0));
        u.add_term(&h, C::new(0.0, phi.sin()));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let s = StateVector::random(2, &mut rng);
        let out = apply(&u, &s).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}
