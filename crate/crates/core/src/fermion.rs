//! Second-quantized operator representation, Majorana decomposition, and
//! model generators.
//!
//! Ladder-operator products keep the order they were given in; none of the
//! transforms here normal-order anything, so reordering is the caller's job.

use crate::lattice::{LatticeOrder, Traversal};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FermionError {
    #[error("mode index {0} out of range for {1} modes")]
    ModeOutOfRange(usize, usize),
    #[error("parameter array `{0}` has length {1}, expected {2}")]
    ParamSize(&'static str, usize, usize),
    #[error("coefficients are not Hermitian: h[{0}][{1}] != conj(h[{1}][{0}])")]
    NotHermitian(usize, usize),
}

/// One creation or annihilation factor; `mode` is 0-based internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderOp {
    pub mode: usize,
    pub dagger: bool,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        LadderOp { mode, dagger: true }
    }
    pub fn annihilate(mode: usize) -> Self {
        LadderOp {
            mode,
            dagger: false,
        }
    }
}

/// An ordered product of ladder operators with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTerm {
    pub coeff: Complex64,
    pub factors: Vec<LadderOp>,
}

/// A sum of ladder-operator products on `n_modes` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionSum {
    pub n_modes: usize,
    pub terms: Vec<LadderTerm>,
}

/// One Majorana factor: species `m` (false) or `m-bar` (true).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MajoranaFactor {
    pub mode: usize,
    pub bar: bool,
}

impl FermionSum {
    pub fn new(n_modes: usize) -> Self {
        FermionSum {
            n_modes,
            terms: Vec::new(),
        }
    }

    pub fn add(&mut self, coeff: Complex64, factors: Vec<LadderOp>) -> Result<(), FermionError> {
        for f in &factors {
            if f.mode >= self.n_modes {
                return Err(FermionError::ModeOutOfRange(f.mode, self.n_modes));
            }
        }
        if coeff.norm() > 0.0 {
            self.terms.push(LadderTerm { coeff, factors });
        }
        Ok(())
    }

    /// Adds `coeff * c^dag_i c_j + conj(coeff) * c^dag_j c_i`.
    pub fn add_hopping(&mut self, coeff: Complex64, i: usize, j: usize) -> Result<(), FermionError> {
        self.add(coeff, vec![LadderOp::create(i), LadderOp::annihilate(j)])?;
        self.add(
            coeff.conj(),
            vec![LadderOp::create(j), LadderOp::annihilate(i)],
        )
    }

    /// Exact expansion of every term into Majorana monomials via
    /// `c^dag = (m - i mbar)/2`, `c = (m + i mbar)/2`. No simplification is
    /// performed; factors keep their written order.
    pub fn to_majorana(&self) -> Vec<(Complex64, Vec<MajoranaFactor>)> {
        let mut out = Vec::new();
        for term in &self.terms {
            // Each ladder factor splits into two Majorana summands.
            let mut acc: Vec<(Complex64, Vec<MajoranaFactor>)> =
                vec![(term.coeff, Vec::with_capacity(term.factors.len()))];
            for f in &term.factors {
                let half = Complex64::new(0.5, 0.0);
                let i_half = if f.dagger {
                    Complex64::new(0.0, -0.5)
                } else {
                    Complex64::new(0.0, 0.5)
                };
                let mut next = Vec::with_capacity(acc.len() * 2);
                for (c, factors) in &acc {
                    let mut with_m = factors.clone();
                    with_m.push(MajoranaFactor {
                        mode: f.mode,
                        bar: false,
                    });
                    next.push((c * half, with_m));
                    let mut with_bar = factors.clone();
                    with_bar.push(MajoranaFactor {
                        mode: f.mode,
                        bar: true,
                    });
                    next.push((c * i_half, with_bar));
                }
                acc = next;
            }
            out.extend(acc);
        }
        out
    }
}

/// Open-boundary Fermi-Hubbard parameters on an `L x L` site lattice.
///
/// Spin partners of site `(x, y)` occupy mode-lattice columns `2x-1` and
/// `2x`, so the mode lattice is `2L x L`. Arrays are indexed row-major by
/// lattice coordinate; the uniform constructor fills them with constants.
#[derive(Debug, Clone)]
pub struct HubbardParams {
    pub l: usize,
    /// `t_h[(x, y)]` couples sites `(x, y)` and `(x+1, y)`; `(L-1) * L` entries.
    pub t_h: Vec<f64>,
    /// `t_v[(x, y)]` couples sites `(x, y)` and `(x, y+1)`; `L * (L-1)` entries.
    pub t_v: Vec<f64>,
    /// Per-mode detuning, `2L * L` entries over the mode lattice.
    pub eps: Vec<f64>,
    /// Per-site Hubbard repulsion, `L * L` entries.
    pub u: Vec<f64>,
}

impl HubbardParams {
    pub fn uniform(l: usize, t: f64, eps: f64, u: f64) -> Self {
        HubbardParams {
            l,
            t_h: vec![t; (l - 1) * l],
            t_v: vec![t; l * (l - 1)],
            eps: vec![eps; 2 * l * l],
            u: vec![u; l * l],
        }
    }

    fn check(&self) -> Result<(), FermionError> {
        let l = self.l;
        if self.t_h.len() != (l - 1) * l {
            return Err(FermionError::ParamSize("t_h", self.t_h.len(), (l - 1) * l));
        }
        if self.t_v.len() != l * (l - 1) {
            return Err(FermionError::ParamSize("t_v", self.t_v.len(), l * (l - 1)));
        }
        if self.eps.len() != 2 * l * l {
            return Err(FermionError::ParamSize("eps", self.eps.len(), 2 * l * l));
        }
        if self.u.len() != l * l {
            return Err(FermionError::ParamSize("u", self.u.len(), l * l));
        }
        Ok(())
    }
}

/// Builds the Fermi-Hubbard Hamiltonian with mode indices taken from
/// `traversal` over the `2L x L` mode lattice.
pub fn hubbard(params: &HubbardParams, traversal: Traversal) -> Result<FermionSum, FermionError> {
    params.check()?;
    let l = params.l;
    let order = LatticeOrder {
        l1: 2 * l,
        l2: l,
        traversal,
    };
    let mut sum = FermionSum::new(2 * l * l);
    let re = |v: f64| Complex64::new(v, 0.0);

    // Horizontal hoppings: same spin, neighboring sites, columns i and i+2.
    for y in 1..=l {
        for x in 1..=l - 1 {
            let t = params.t_h[(y - 1) * (l - 1) + (x - 1)];
            for spin in 0..2 {
                let col = 2 * x - 1 + spin;
                sum.add_hopping(re(t), order.index(col, y), order.index(col + 2, y))?;
            }
        }
    }
    // Vertical hoppings: same spin, neighboring rows.
    for y in 1..=l - 1 {
        for x in 1..=l {
            let t = params.t_v[(y - 1) * l + (x - 1)];
            for spin in 0..2 {
                let col = 2 * x - 1 + spin;
                sum.add_hopping(re(t), order.index(col, y), order.index(col, y + 1))?;
            }
        }
    }
    // On-site detunings per mode.
    for y in 1..=l {
        for col in 1..=2 * l {
            let eps = params.eps[(y - 1) * 2 * l + (col - 1)];
            if eps != 0.0 {
                let j = order.index(col, y);
                sum.add(
                    re(eps),
                    vec![LadderOp::create(j), LadderOp::annihilate(j)],
                )?;
            }
        }
    }
    // Hubbard interactions on the spin pair of each site.
    for y in 1..=l {
        for x in 1..=l {
            let u = params.u[(y - 1) * l + (x - 1)];
            if u != 0.0 {
                let up = order.index(2 * x, y);
                let down = order.index(2 * x - 1, y);
                sum.add(
                    re(u),
                    vec![
                        LadderOp::create(up),
                        LadderOp::annihilate(up),
                        LadderOp::create(down),
                        LadderOp::annihilate(down),
                    ],
                )?;
            }
        }
    }
    Ok(sum)
}

/// Generic quadratic + quartic Hamiltonian
/// `sum h_ij c^dag_i c_j + sum h_ijkl c^dag_i c^dag_j c_k c_l`.
///
/// `h_one` is checked for Hermiticity; pass `strict = false` to downgrade a
/// violation to a silent accept (the transform output then need not be
/// Hermitian either).
pub fn generic(
    n_modes: usize,
    h_one: &[Vec<Complex64>],
    h_two: &[(usize, usize, usize, usize, Complex64)],
    strict: bool,
) -> Result<FermionSum, FermionError> {
    if h_one.len() != n_modes {
        return Err(FermionError::ParamSize("h_ij", h_one.len(), n_modes));
    }
    if strict {
        for i in 0..n_modes {
            for j in 0..n_modes {
                if (h_one[i][j] - h_one[j][i].conj()).norm() > 1e-10 {
                    return Err(FermionError::NotHermitian(i, j));
                }
            }
        }
    }
    let mut sum = FermionSum::new(n_modes);
    for (i, row) in h_one.iter().enumerate() {
        for (j, &h) in row.iter().enumerate() {
            if h.norm() > 0.0 {
                sum.add(h, vec![LadderOp::create(i), LadderOp::annihilate(j)])?;
            }
        }
    }
    for &(i, j, k, l, h) in h_two {
        if h.norm() > 0.0 {
            sum.add(
                h,
                vec![
                    LadderOp::create(i),
                    LadderOp::create(j),
                    LadderOp::annihilate(k),
                    LadderOp::annihilate(l),
                ],
            )?;
        }
    }
    Ok(sum)
}

// --- JSON schema ------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: [f64; 2],
    ops: Vec<(usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct FermionSumJson {
    n_modes: usize,
    terms: Vec<TermJson>,
}

impl FermionSum {
    /// Serializes to the wire schema; modes are 1-based in JSON.
    pub fn to_json(&self) -> serde_json::Value {
        let doc = FermionSumJson {
            n_modes: self.n_modes,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    coeff: [t.coeff.re, t.coeff.im],
                    ops: t
                        .factors
                        .iter()
                        .map(|f| (f.mode + 1, if f.dagger { "+" } else { "-" }.to_string()))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("fermion sum serialization")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        let doc: FermionSumJson =
            serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
        let mut sum = FermionSum::new(doc.n_modes);
        for term in doc.terms {
            let mut factors = Vec::new();
            for (mode, kind) in term.ops {
                if mode == 0 || mode > doc.n_modes {
                    return Err(format!("mode {} out of range", mode));
                }
                let dagger = match kind.as_str() {
                    "+" => true,
                    "-" => false,
                    other => return Err(format!("bad ladder op {:?}", other)),
                };
                factors.push(LadderOp {
                    mode: mode - 1,
                    dagger,
                });
            }
            sum.add(Complex64::new(term.coeff[0], term.coeff[1]), factors)
                .map_err(|e| e.to_string())?;
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_lattice_is_one_hubbard_term() {
        let mut p = HubbardParams::uniform(1, 0.0, 0.0, 0.0);
        p.u[0] = 2.5;
        let h = hubbard(&p, Traversal::SPattern).unwrap();
        assert_eq!(h.n_modes, 2);
        assert_eq!(h.terms.len(), 1);
        let t = &h.terms[0];
        assert_eq!(t.coeff, Complex64::new(2.5, 0.0));
        // u c^dag_2 c_2 c^dag_1 c_1 in 1-based labels.
        let modes: Vec<(usize, bool)> = t.factors.iter().map(|f| (f.mode, f.dagger)).collect();
        assert_eq!(modes, vec![(1, true), (1, false), (0, true), (0, false)]);
    }

    #[test]
    fn l2_term_census_matches_edge_enumeration() {
        // Oracle: enumerate open-boundary edges of the 2x2 site lattice.
        let l = 2usize;
        let horizontal_edges = (l - 1) * l;
        let vertical_edges = l * (l - 1);
        let h = hubbard(&HubbardParams::uniform(2, 1.0, 0.5, 2.0), Traversal::SPattern).unwrap();
        let hopping_pairs = h.terms.iter().filter(|t| t.factors.len() == 2
            && t.factors[0].mode != t.factors[1].mode).count();
        assert_eq!(hopping_pairs, 2 * (horizontal_edges + vertical_edges) * 2);
        let detunings = h
            .terms
            .iter()
            .filter(|t| t.factors.len() == 2 && t.factors[0].mode == t.factors[1].mode)
            .count();
        assert_eq!(detunings, 2 * l * l);
        let hubbard_terms = h.terms.iter().filter(|t| t.factors.len() == 4).count();
        assert_eq!(hubbard_terms, l * l);
    }

    #[test]
    fn majorana_expansion_of_creation_operator() {
        let mut f = FermionSum::new(1);
        f.add(Complex64::new(1.0, 0.0), vec![LadderOp::create(0)])
            .unwrap();
        let m = f.to_majorana();
        // c^dag_1 = 1/2 (m_1 - i mbar_1)
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].0, Complex64::new(0.5, 0.0));
        assert_eq!(m[0].1, vec![MajoranaFactor { mode: 0, bar: false }]);
        assert_eq!(m[1].0, Complex64::new(0.0, -0.5));
        assert_eq!(m[1].1, vec![MajoranaFactor { mode: 0, bar: true }]);
    }

    #[test]
    fn generic_number_operator() {
        let h =
            generic(3, &vec![
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ], &[], true)
            .unwrap();
        assert_eq!(h.terms.len(), 3);
        assert!(h.terms.iter().all(|t| t.factors.len() == 2));
    }

    #[test]
    fn generic_rejects_non_hermitian_when_strict() {
        let mut h_one = vec![vec![Complex64::new(0.0, 0.0); 2]; 2];
        h_one[0][1] = Complex64::new(1.0, 0.0);
        assert!(generic(2, &h_one, &[], true).is_err());
        assert!(generic(2, &h_one, &[], false).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let h = hubbard(&HubbardParams::uniform(2, 1.0, 0.3, 2.0), Traversal::SPattern).unwrap();
        let j = h.to_json();
        let back = FermionSum::from_json(&j).unwrap();
        assert_eq!(h, back);
    }
}
