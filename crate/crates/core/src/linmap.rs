//! Linear (no-auxiliary) fermion-to-qubit encoders and the ladder-to-Pauli
//! compiler: S-pattern Jordan-Wigner, Bravyi-Kitaev, parity, and arbitrary
//! labeled tree/forest transforms.

use crate::fermion::FermionSum;
use crate::gf2::{derive_sets, BitMatrix, Gf2Error, IndexSets};
use crate::lattice::LatticeOrder;
use crate::pauli::{Pauli, PauliString, PauliSum};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinmapError {
    #[error("mode {0} out of range for encoder on {1} modes")]
    ModeOutOfRange(usize, usize),
    #[error("forest labeling is inconsistent: {0}")]
    BadLabeling(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// An invertible GF(2) encoder together with its derived index sets and an
/// optional lattice embedding of the canonical order.
#[derive(Debug, Clone)]
pub struct LinearEncoder {
    pub a: BitMatrix,
    pub ainv: BitMatrix,
    pub sets: IndexSets,
    pub order: Option<LatticeOrder>,
    pub n: usize,
}

impl LinearEncoder {
    pub fn from_matrix(a: BitMatrix, order: Option<LatticeOrder>) -> Result<Self, LinmapError> {
        let ainv = a.invert()?;
        let sets = derive_sets(&a, &ainv)?;
        let n = a.rows();
        Ok(LinearEncoder {
            a,
            ainv,
            sets,
            order,
            n,
        })
    }

    /// Image of a single ladder operator as a two-term Pauli sum:
    /// `1/2 (X_U Z_P +- X_U Z_F Z_P)`.
    pub fn ladder_image(&self, mode: usize, dagger: bool) -> Result<PauliSum, LinmapError> {
        if mode >= self.n {
            return Err(LinmapError::ModeOutOfRange(mode, self.n));
        }
        Ok(ladder_image_from_sets(
            self.n,
            &self.sets.update[mode],
            &self.sets.flip[mode],
            &self.sets.parity[mode],
            dagger,
        ))
    }

    /// Transforms a whole ladder-operator sum into a Pauli sum.
    pub fn transform(&self, f: &FermionSum) -> Result<PauliSum, LinmapError> {
        if f.n_modes > self.n {
            return Err(LinmapError::ModeOutOfRange(f.n_modes - 1, self.n));
        }
        let mut out = PauliSum::new(self.n);
        for term in &f.terms {
            let mut acc = PauliSum::scalar(self.n, term.coeff);
            for op in &term.factors {
                let img = self.ladder_image(op.mode, op.dagger)?;
                acc = acc.mul(&img).expect("equal qubit counts");
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }
}

/// Shared expansion used by the linear encoders and the adjusted AQM
/// transforms: all four index slices live on the same register of `n` qubits.
pub(crate) fn ladder_image_from_sets(
    n: usize,
    update: &[usize],
    flip: &[usize],
    parity: &[usize],
    dagger: bool,
) -> PauliSum {
    let mut base = PauliString::identity(n);
    for &q in update {
        base.apply_letter(q, Pauli::X);
    }
    let mut plain = base.clone();
    for &q in parity {
        plain.apply_letter(q, Pauli::Z);
    }
    let mut flipped = base;
    for &q in flip {
        flipped.apply_letter(q, Pauli::Z);
    }
    for &q in parity {
        flipped.apply_letter(q, Pauli::Z);
    }
    let half = Complex64::new(0.5, 0.0);
    let sign = if dagger { half } else { -half };
    let mut sum = PauliSum::new(n);
    sum.add_term(&plain, half);
    sum.add_term(&flipped, sign);
    sum
}

/// Jordan-Wigner in plain canonical order (`A = I`).
pub fn jw(n: usize) -> LinearEncoder {
    LinearEncoder::from_matrix(BitMatrix::identity(n), None).expect("identity is invertible")
}

/// S-pattern Jordan-Wigner on an `l1 x l2` mode lattice: `A = I`, canonical
/// order snaking row by row starting left-to-right in the south-west corner.
pub fn jw_s_pattern(l1: usize, l2: usize) -> LinearEncoder {
    LinearEncoder::from_matrix(
        BitMatrix::identity(l1 * l2),
        Some(LatticeOrder::s_pattern(l1, l2)),
    )
    .expect("identity is invertible")
}

// --- Trees and forests -------------------------------------------------------

/// A forest of rooted trees; `parent[v]` is `None` for roots. Roots are
/// implicitly chained in ascending node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    pub parent: Vec<Option<usize>>,
}

impl Forest {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.parent[v].is_none()).collect()
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.n()];
        for v in 0..self.n() {
            if let Some(p) = self.parent[v] {
                ch[p].push(v);
            }
        }
        ch
    }

    /// Tree count, maximum level count, and maximum child count.
    pub fn shape(&self) -> (usize, usize, usize) {
        let ch = self.children();
        let tau = self.roots().len();
        let gamma = ch.iter().map(|c| c.len()).max().unwrap_or(0);
        let mut lambda = 0usize;
        for v in 0..self.n() {
            let mut depth = 1;
            let mut cur = v;
            while let Some(p) = self.parent[cur] {
                depth += 1;
                cur = p;
            }
            lambda = lambda.max(depth);
        }
        (tau, lambda, gamma)
    }

    fn validate(&self) -> Result<(), LinmapError> {
        for v in 0..self.n() {
            let mut seen = std::collections::HashSet::new();
            let mut cur = v;
            while let Some(p) = self.parent[cur] {
                if p >= self.n() || !seen.insert(cur) {
                    return Err(LinmapError::BadLabeling(format!(
                        "cycle or bad parent at node {v}"
                    )));
                }
                cur = p;
            }
        }
        Ok(())
    }
}

/// Assigns labels `0..N` to the forest nodes by the leaf-first program:
/// within each tree all descendants are labeled before their parent, each
/// descent picks the lowest-index leaf of the pending subtree, and sibling
/// choices take the lowest-index unlabeled sibling. Roots are labeled last
/// per tree; trees are processed in ascending root order.
///
/// Returns `label[node] = canonical index`.
pub fn label_forest(forest: &Forest) -> Result<Vec<usize>, LinmapError> {
    forest.validate()?;
    let n = forest.n();
    let children = forest.children();
    let mut label = vec![usize::MAX; n];
    let mut next = 0usize;

    // Lowest-index leaf of the subtree rooted at v.
    let lowest_leaf = |v: usize, label: &[usize]| -> usize {
        let mut best = usize::MAX;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let unlabeled_kids: Vec<usize> = children[u]
                .iter()
                .copied()
                .filter(|&c| label[c] == usize::MAX)
                .collect();
            if unlabeled_kids.is_empty() {
                best = best.min(u);
            } else {
                stack.extend(unlabeled_kids);
            }
        }
        best
    };

    for root in forest.roots() {
        // Line 2: choose a leaf of the tree and label it.
        let mut current = lowest_leaf(root, &label);
        label[current] = next;
        next += 1;
        loop {
            match forest.parent[current] {
                Some(p) => {
                    // Line 3: unlabeled siblings?
                    let sibling = children[p]
                        .iter()
                        .copied()
                        .filter(|&s| label[s] == usize::MAX)
                        .min();
                    if let Some(s) = sibling {
                        // Line 4: label the sibling itself if it is a leaf,
                        // otherwise a leaf of its subtree.
                        let leaf = lowest_leaf(s, &label);
                        label[leaf] = next;
                        next += 1;
                        current = leaf;
                    } else {
                        // Line 5: all siblings done, label the parent.
                        label[p] = next;
                        next += 1;
                        current = p;
                    }
                }
                // Line 5/6: current is the labeled root; next tree.
                None => break,
            }
        }
    }
    debug_assert_eq!(next, n);
    Ok(label)
}

/// Builds the encoder of a labeled forest: row `j` of `A` has ones on
/// `{j} union children(j)` (in labels), so the update set comes out as
/// `{j} union ancestors(j)`.
pub fn encoder_from_forest(
    forest: &Forest,
    label: &[usize],
) -> Result<LinearEncoder, LinmapError> {
    forest.validate()?;
    let n = forest.n();
    if label.len() != n {
        return Err(LinmapError::BadLabeling("label length mismatch".into()));
    }
    let mut seen = vec![false; n];
    for &l in label {
        if l >= n || seen[l] {
            return Err(LinmapError::BadLabeling("labels are not a permutation".into()));
        }
        seen[l] = true;
    }
    let children = forest.children();
    let mut a = BitMatrix::zeros(n, n);
    for v in 0..n {
        let j = label[v];
        a.set(j, j, true);
        for &c in &children[v] {
            a.set(j, label[c], true);
        }
    }
    let enc = LinearEncoder::from_matrix(a, None)?;
    // Cross-check the update sets against the ancestor rule.
    for v in 0..n {
        let mut expect: Vec<usize> = vec![label[v]];
        let mut cur = v;
        while let Some(p) = forest.parent[cur] {
            expect.push(label[p]);
            cur = p;
        }
        expect.sort_unstable();
        if enc.sets.update[label[v]] != expect {
            return Err(LinmapError::BadLabeling(format!(
                "update set of mode {} does not match ancestors",
                label[v] + 1
            )));
        }
    }
    Ok(enc)
}

/// The Fenwick-tree forest of the Bravyi-Kitaev transform, segmented for
/// arbitrary `N`: node `i` (1-based) hangs below `i + (i & -i)` when that
/// stays in range, otherwise it is a root.
pub fn bravyi_kitaev_forest(n: usize) -> Forest {
    let parent = (1..=n as u64)
        .map(|i| {
            let p = i + (i & i.wrapping_neg());
            if p <= n as u64 {
                Some(p as usize - 1)
            } else {
                None
            }
        })
        .collect();
    Forest { parent }
}

/// Bravyi-Kitaev encoder; for `N = 2^k` this is the single binary-rule tree.
pub fn bravyi_kitaev(n: usize) -> LinearEncoder {
    let forest = bravyi_kitaev_forest(n);
    let label: Vec<usize> = (0..n).collect();
    encoder_from_forest(&forest, &label).expect("Fenwick forest is consistent")
}

/// Parity transform: the vertical-line tree, so qubit `j` stores the parity
/// of modes `1..=j`.
pub fn parity(n: usize) -> LinearEncoder {
    let parent = (0..n)
        .map(|v| if v + 1 < n { Some(v + 1) } else { None })
        .collect();
    let forest = Forest { parent };
    let label: Vec<usize> = (0..n).collect();
    encoder_from_forest(&forest, &label).expect("line forest is consistent")
}

// --- Forest JSON -------------------------------------------------------------

/// Parses `{"trees":[{"parent":[...]}, ...]}` where within each tree the
/// entries are 1-based local parent indices and `0` marks the root.
pub fn forest_from_json(value: &serde_json::Value) -> Result<Forest, String> {
    #[derive(serde::Deserialize)]
    struct TreeJson {
        parent: Vec<usize>,
    }
    #[derive(serde::Deserialize)]
    struct ForestJson {
        trees: Vec<TreeJson>,
    }
    let doc: ForestJson = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
    let mut parent = Vec::new();
    let mut offset = 0usize;
    for tree in &doc.trees {
        let size = tree.parent.len();
        let mut roots = 0;
        for &p in &tree.parent {
            if p == 0 {
                parent.push(None);
                roots += 1;
            } else if p <= size {
                parent.push(Some(offset + p - 1));
            } else {
                return Err(format!("parent index {} out of tree of size {}", p, size));
            }
        }
        if roots != 1 {
            return Err(format!("tree must have exactly one root, found {}", roots));
        }
        offset += size;
    }
    Ok(Forest { parent })
}
