//! Phase-exact Pauli-string and Pauli-sum algebra in symplectic form.
//!
//! A Pauli string on `n` qubits is stored as a pair of bit masks `(x, z)`
//! together with a global phase exponent `k`, representing the operator
//! `i^k * prod_q X_q^{x_q} Z_q^{z_q}`. A `Y` on qubit `q` is `x_q = z_q = 1`
//! with one factor of `i` absorbed into the phase. Keeping the phase as an
//! integer mod 4 makes every product exact; complex coefficients only ever
//! live in [`PauliSum`].

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Absolute magnitude below which sum coefficients are dropped.
pub const DROP_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("qubit index {0} out of range for {1} qubits")]
    QubitOutOfRange(usize, usize),
    #[error("cannot parse Pauli string: {0}")]
    Parse(String),
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn mask_dot(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b.iter())
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        % 2
        == 1
}

/// Single-qubit Pauli letter, used for building and rendering strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pauli::I => write!(f, "I"),
            Pauli::X => write!(f, "X"),
            Pauli::Y => write!(f, "Y"),
            Pauli::Z => write!(f, "Z"),
        }
    }
}

/// An `n`-qubit Pauli string with its global phase tracked mod 4.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// Exponent `k` of the global prefactor `i^k`.
    phase: u8,
}

impl PauliString {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            phase: 0,
        }
    }

    /// Single-qubit operator `op` on qubit `q` (0-based).
    pub fn single(n: usize, q: usize, op: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.apply_letter(q, op);
        s
    }

    /// Builds a string from `(qubit, letter)` pairs; later letters multiply
    /// from the right on the same qubit.
    pub fn from_ops(n: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, op) in ops {
            s.apply_letter(q, op);
        }
        s
    }

    /// Multiplies the letter `op` onto qubit `q` from the right.
    pub fn apply_letter(&mut self, q: usize, op: Pauli) {
        assert!(q < self.n, "qubit {} out of range for {} qubits", q, self.n);
        let (w, b) = (q / 64, q % 64);
        let (xq, zq) = match op {
            Pauli::I => return,
            Pauli::X => (1u64, 0u64),
            Pauli::Y => (1, 1),
            Pauli::Z => (0, 1),
        };
        // Right-multiplication by X^xq Z^zq on one qubit: the existing Z on
        // this qubit must commute past the incoming X.
        if (self.z[w] >> b) & 1 == 1 && xq == 1 {
            self.phase = (self.phase + 2) % 4;
        }
        if op == Pauli::Y {
            self.phase = (self.phase + 1) % 4;
        }
        self.x[w] ^= xq << b;
        self.z[w] ^= zq << b;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn x_mask(&self) -> &[u64] {
        &self.x
    }

    pub fn z_mask(&self) -> &[u64] {
        &self.z
    }

    /// The Pauli letter on qubit `q`, ignoring the global phase.
    pub fn letter(&self, q: usize) -> Pauli {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(self.z.iter())
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// 0-based indices of the non-identity qubits, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.letter(q) != Pauli::I).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0 && self.phase == 0
    }

    /// Multiplies the phase by `i^k`.
    pub fn mul_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) % 4;
    }

    /// Parity of Y letters, which decides the sign picked up under transposition.
    pub fn y_parity(&self) -> bool {
        mask_dot(&self.x, &self.z)
    }

    fn y_count(&self) -> u32 {
        self.x
            .iter()
            .zip(self.z.iter())
            .map(|(x, z)| (x & z).count_ones())
            .sum()
    }

    /// The complex scalar `c` such that `self = c * W`, where `W` is the plain
    /// Pauli word over letters I, X, Y, Z without any prefactor.
    pub fn word_coefficient(&self) -> Complex64 {
        // i^phase * (-i)^{#Y}
        let k = (self.phase as i32 - self.y_count() as i32).rem_euclid(4);
        match k {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Exact operator product `self * rhs` with the phase tracked mod 4.
    pub fn mul(&self, rhs: &PauliString) -> Result<PauliString, PauliError> {
        if self.n != rhs.n {
            return Err(PauliError::DimensionMismatch(self.n, rhs.n));
        }
        // (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^<z1,x2> X^(x1+x2) Z^(z1+z2)
        let mut phase = (self.phase + rhs.phase) % 4;
        if mask_dot(&self.z, &rhs.x) {
            phase = (phase + 2) % 4;
        }
        Ok(PauliString {
            n: self.n,
            x: self.x.iter().zip(&rhs.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&rhs.z).map(|(a, b)| a ^ b).collect(),
            phase,
        })
    }

    /// Whether `self * rhs == rhs * self`, via the symplectic form.
    pub fn commutes(&self, rhs: &PauliString) -> Result<bool, PauliError> {
        if self.n != rhs.n {
            return Err(PauliError::DimensionMismatch(self.n, rhs.n));
        }
        Ok(mask_dot(&self.x, &rhs.z) == mask_dot(&self.z, &rhs.x))
    }

    /// Hermitian conjugate; a Pauli word is self-adjoint up to the phase.
    pub fn dagger(&self) -> PauliString {
        // (i^k X^x Z^z)^dag = i^{-k} Z^z X^x = i^{-k} (-1)^<x,z> X^x Z^z
        let mut phase = (4 - self.phase) % 4;
        if self.y_parity() {
            phase = (phase + 2) % 4;
        }
        PauliString {
            n: self.n,
            x: self.x.clone(),
            z: self.z.clone(),
            phase,
        }
    }

    /// Strips the phase, returning the phase-0 canonical string and `i^k`.
    pub fn canonicalize(mut self) -> (PauliString, Complex64) {
        let k = self.phase;
        self.phase = 0;
        let c = match k {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        (self, c)
    }

    /// Embeds the string into a register of `m >= n` qubits, acting as
    /// identity on the new qubits.
    pub fn embed(&self, m: usize) -> PauliString {
        assert!(m >= self.n);
        let mut s = PauliString::identity(m);
        s.phase = self.phase;
        s.x[..self.x.len()].copy_from_slice(&self.x);
        s.z[..self.z.len()].copy_from_slice(&self.z);
        s
    }

    /// Keeps only the qubits listed in `keep` (in order). Qubits outside
    /// `keep` must carry `I` or `Z`; a dropped `Z` is read as its `+1`
    /// eigenvalue on `|0>`, which is exact for registers pinned to zero.
    pub fn restrict(&self, keep: &[usize]) -> Result<PauliString, PauliError> {
        let keep_set: std::collections::HashSet<usize> = keep.iter().copied().collect();
        for q in 0..self.n {
            if !keep_set.contains(&q) && self.x_bit(q) {
                return Err(PauliError::QubitOutOfRange(q, self.n));
            }
        }
        let mut s = PauliString::identity(keep.len());
        for (new_q, &old_q) in keep.iter().enumerate() {
            if self.x_bit(old_q) {
                s.x[new_q / 64] |= 1 << (new_q % 64);
            }
            if self.z_bit(old_q) {
                s.z[new_q / 64] |= 1 << (new_q % 64);
            }
        }
        // Masks carry over verbatim, so the i^k prefactor does too.
        s.phase = self.phase;
        Ok(s)
    }

    /// Renders the plain word part, e.g. `"X1 Z2 Y5"`, 1-based, identity omitted.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .support()
            .iter()
            .map(|&q| format!("{}{}", self.letter(q), q + 1))
            .collect();
        if parts.is_empty() {
            "I".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Parses `"X1 Z2 Y5"` (1-based) into a phase-0 word on `n` qubits.
    pub fn parse(n: usize, text: &str) -> Result<PauliString, PauliError> {
        let mut ops = Vec::new();
        for token in text.split_whitespace() {
            if token == "I" {
                continue;
            }
            let (letter, idx) = token.split_at(1);
            let op = match letter {
                "X" => Pauli::X,
                "Y" => Pauli::Y,
                "Z" => Pauli::Z,
                _ => return Err(PauliError::Parse(token.to_string())),
            };
            let q: usize = idx
                .parse()
                .map_err(|_| PauliError::Parse(token.to_string()))?;
            if q == 0 || q > n {
                return Err(PauliError::QubitOutOfRange(q, n));
            }
            ops.push((q - 1, op));
        }
        Ok(PauliString::from_ops(n, &ops))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.word_coefficient();
        let prefix = if c.re > 0.5 {
            ""
        } else if c.re < -0.5 {
            "-"
        } else if c.im > 0.5 {
            "i "
        } else {
            "-i "
        };
        write!(f, "{}{}", prefix, self.render())
    }
}

/// Key of a phase-canonicalized string inside a [`PauliSum`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct TermKey {
    x: Vec<u64>,
    z: Vec<u64>,
}

/// A complex-weighted sum of Pauli strings with like-term collection.
///
/// Keys are phase-0 strings; any `i^k` prefactor is folded into the
/// coefficient at insertion. Coefficients below [`DROP_TOL`] are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<TermKey, Complex64>,
}

impl PauliSum {
    pub fn new(n: usize) -> Self {
        PauliSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The sum holding `coeff * I`.
    pub fn scalar(n: usize, coeff: Complex64) -> Self {
        let mut s = Self::new(n);
        s.add_term(&PauliString::identity(n), coeff);
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * string`, folding the string's phase into the coefficient.
    pub fn add_term(&mut self, string: &PauliString, coeff: Complex64) {
        assert_eq!(string.n(), self.n, "term size mismatch");
        let (canon, phase) = string.clone().canonicalize();
        let key = TermKey {
            x: canon.x,
            z: canon.z,
        };
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff * phase;
        if entry.norm() < DROP_TOL {
            let key = TermKey {
                x: string.x.clone(),
                z: string.z.clone(),
            };
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, rhs: &PauliSum) {
        assert_eq!(self.n, rhs.n);
        for (s, c) in rhs.iter() {
            self.add_term(&s, c);
        }
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        let mut out = PauliSum::new(self.n);
        for (s, c) in self.iter() {
            out.add_term(&s, c * factor);
        }
        out
    }

    /// Iterates terms as `(phase-0 string, coefficient)` in a fixed order.
    pub fn iter(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms.iter().map(move |(k, &c)| {
            (
                PauliString {
                    n: self.n,
                    x: k.x.clone(),
                    z: k.z.clone(),
                    phase: 0,
                },
                c,
            )
        })
    }

    /// Distributive product with like-term collection.
    pub fn mul(&self, rhs: &PauliSum) -> Result<PauliSum, PauliError> {
        if self.n != rhs.n {
            return Err(PauliError::DimensionMismatch(self.n, rhs.n));
        }
        let mut out = PauliSum::new(self.n);
        for (a, ca) in self.iter() {
            for (b, cb) in rhs.iter() {
                let prod = a.mul(&b)?;
                out.add_term(&prod, ca * cb);
            }
        }
        Ok(out)
    }

    /// Anticommutator `self*rhs + rhs*self`.
    pub fn anticommutator(&self, rhs: &PauliSum) -> Result<PauliSum, PauliError> {
        let mut out = self.mul(rhs)?;
        out.add_assign(&rhs.mul(self)?);
        Ok(out)
    }

    /// True iff the sum equals its Hermitian conjugate.
    pub fn is_hermitian(&self) -> bool {
        // Keys are self-adjoint up to (-1)^{y parity}; compare coefficients.
        self.terms.iter().all(|(k, c)| {
            let yp = mask_dot(&k.x, &k.z);
            let cdag = if yp { -c.conj() } else { c.conj() };
            (c - cdag).norm() < DROP_TOL
        })
    }

    /// Largest term weight, or 0 for the empty sum.
    pub fn max_weight(&self) -> usize {
        self.iter().map(|(s, _)| s.weight()).max().unwrap_or(0)
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> PauliSum {
        let mut out = PauliSum::new(self.n);
        for (s, c) in self.iter() {
            out.add_term(&s.dagger(), c.conj());
        }
        out
    }

    /// Embeds every term into a register of `m >= n` qubits.
    pub fn embed(&self, m: usize) -> PauliSum {
        let mut out = PauliSum::new(m);
        for (s, c) in self.iter() {
            out.add_term(&s.embed(m), c);
        }
        out
    }

    /// Restricts every term to `keep`; see [`PauliString::restrict`].
    pub fn restrict(&self, keep: &[usize]) -> Result<PauliSum, PauliError> {
        let mut out = PauliSum::new(keep.len());
        for (s, c) in self.iter() {
            let r = s.restrict(keep)?;
            out.add_term(&r, c);
        }
        Ok(out)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in self.iter() {
            // Report the coefficient of the plain word, not of the XZ form.
            let cw = c * s.word_coefficient();
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i) {}", cw.re, cw.im, s.render())?;
            first = false;
        }
        Ok(())
    }
}
