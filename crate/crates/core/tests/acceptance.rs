//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! per checked item. Tolerances are pinned in the constants below.

use latticemap::aqcode::{self, RouteStrategy};
use latticemap::bksf::{self, Sector, Variant};
use latticemap::circuits;
use latticemap::fermion::{hubbard, FermionSum, HubbardParams, LadderOp, MajoranaFactor};
use latticemap::lattice::Traversal;
use latticemap::linmap;
use latticemap::oracle::{self, StateVector};
use latticemap::pauli::{Pauli, PauliString, PauliSum};
use latticemap::stats;
use latticemap::vct;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const SPECTRUM_TOL: f64 = 1e-9;
const UNITARY_TOL: f64 = 1e-10;
const STABILIZER_TOL: f64 = 1e-10;

fn check(label: &str, ok: bool, failures: &mut Vec<String>) {
    println!("  [{}] {}", if ok { "PASS" } else { "FAIL" }, label);
    if !ok {
        failures.push(label.to_string());
    }
}

// --- Criterion 1: Hubbard weight table -----------------------------------------

#[test]
fn criterion_1_hubbard_weight_table() {
    let start = Instant::now();
    let mut failures = Vec::new();
    println!("criterion 1: Fermi-Hubbard string-length table (L = 3, interior terms)");

    let aqm = stats::aqm_square_weights();
    check("AQM vertical 3|3|5|1", aqm.vertical == [3, 3, 5, 1], &mut failures);
    check("AQM horizontal 5|5|5|5", aqm.horizontal == [5, 5, 5, 5], &mut failures);
    check("AQM Hubbard 6", aqm.hubbard == 6, &mut failures);
    check("AQM on-site 3", aqm.onsite == 3, &mut failures);
    check("AQM stabilizer interior 6", aqm.stabilizer == 6, &mut failures);

    let v = stats::vct_weights();
    check("VCT vertical 5|5|5|5", v.vertical == [5, 5, 5, 5], &mut failures);
    check("VCT horizontal 3|3|3|3", v.horizontal == [3, 3, 3, 3], &mut failures);
    check("VCT Hubbard 2", v.hubbard == 2, &mut failures);
    check("VCT on-site 1", v.onsite == 1, &mut failures);
    check("VCT stabilizer interior 6", v.stabilizer == 6, &mut failures);

    let b = stats::bksf_weights(Variant::V2);
    let bksf_vertical_ok = b.vertical == [2, 6, 5, 4];
    if !bksf_vertical_ok {
        // The quoted YX cell cannot be produced by any edge ordering: the XX
        // and YX strings differ by exactly one vertex operator restricted to
        // the lower mode, which forces weight(XX) + weight(YX) to be odd,
        // while 2 + 4 is even. The same construction reproduces the other
        // fourteen cells exactly; the consistent completion of this row is
        // 2|6|5|3.
        println!(
            "  note: BKSF vertical measured {:?}; weight(XX)+weight(YX) = 5 + 2k is odd for every ordering",
            b.vertical
        );
    }
    check(
        &format!("BKSF vertical 2|6|5|4 (measured {:?})", b.vertical),
        bksf_vertical_ok,
        &mut failures,
    );
    check("BKSF horizontal 8|4|5|7", b.horizontal == [8, 4, 5, 7], &mut failures);
    check(
        "BKSF Hubbard 6(+2)",
        b.hubbard == 6 && b.hubbard_skip == 2,
        &mut failures,
    );
    check("BKSF on-site 4", b.onsite == 4, &mut failures);
    check("BKSF stabilizer interior 6", b.stabilizer == 6, &mut failures);

    let elapsed = start.elapsed();
    println!("  runtime: {:.2?}", elapsed);
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 1 exceeded 5 s");
    assert!(failures.is_empty(), "criterion 1 failures: {failures:?}");
}

// --- Criterion 2: qubit-count table ---------------------------------------------

#[test]
fn criterion_2_qubit_count_table() {
    let start = Instant::now();
    let mut failures = Vec::new();
    println!("criterion 2: auxiliary and total qubit counts");

    for (l1, l2) in [(4usize, 4usize), (6, 6)] {
        let e = aqcode::build_e_type(l1, l2);
        check(&format!("E-type aux {l1}x{l2} = l2"), e.r == l2, &mut failures);
        let sq = aqcode::build_square(l1, l2);
        check(
            &format!("square aux {l1}x{l2} = l1*l2 - l1"),
            sq.r == l1 * l2 - l1,
            &mut failures,
        );
        let v = vct::build_vct(l1, l2);
        check(
            &format!("VCT aux {l1}x{l2} = l1*l2"),
            v.r() == l1 * l2,
            &mut failures,
        );
        let g = bksf::build_bksf(l1, l2, Variant::V2).unwrap();
        check(
            &format!("BKSF aux {l1}x{l2} = l1*l2 - l1 - l2"),
            g.n_qubits() == 2 * l1 * l2 - l1 - l2,
            &mut failures,
        );
    }
    for periodicity in [2usize, 3] {
        let (l1, l2) = (7usize, 6usize);
        let sp = aqcode::build_sparse(l1, l2, periodicity).unwrap();
        let expect = (l2 - 1) * ((l1 - 1) / periodicity + 1);
        check(
            &format!("sparse aux 7x6 I={periodicity} = (l2-1)((l1-1)/I+1) = {expect}"),
            sp.r == expect,
            &mut failures,
        );
    }
    for l in 1..=3usize {
        let placement = vct::hubbard_vct_code(l);
        check(
            &format!("VCT Hubbard total L={l} = 4L^2+2L"),
            placement.code.n_total() == 4 * l * l + 2 * l,
            &mut failures,
        );
        let g = bksf::build_bksf(2 * l, l.max(1), Variant::V2);
        let total = g.map(|g| g.n_qubits()).unwrap_or(0);
        check(
            &format!("BKSF Hubbard total L={l} = 4L^2-3L"),
            total == 4 * l * l - 3 * l,
            &mut failures,
        );
    }

    let elapsed = start.elapsed();
    println!("  runtime: {:.2?}", elapsed);
    assert!(elapsed.as_secs_f64() < 1.0, "criterion 2 exceeded 1 s");
    assert!(failures.is_empty(), "criterion 2 failures: {failures:?}");
}

// --- Criterion 3: spectrum equivalence ------------------------------------------

fn l2_hubbard(traversal: Traversal) -> FermionSum {
    let mut params = HubbardParams::uniform(2, 1.0, 0.35, 1.7);
    // Break accidental degeneracies a little.
    params.t_v[0] = 0.8;
    params.eps[3] = 0.55;
    hubbard(&params, traversal).unwrap()
}

#[test]
fn criterion_3_spectrum_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    println!("criterion 3: code-space-restricted spectra vs Jordan-Wigner");

    // Reference: S-pattern JW on the 4x2 mode lattice of the L=2 model.
    let f_s = l2_hubbard(Traversal::SPattern);
    let jw_ref = oracle::full_spectrum(&linmap::jw(8).transform(&f_s).unwrap()).unwrap();

    // E-type AQM (typewriter order), 10 qubits.
    {
        let f = l2_hubbard(Traversal::Typewriter);
        let code = aqcode::build_e_type(4, 2);
        let h = code.adjusted_transform(&linmap::jw(8), &f).unwrap();
        let basis = oracle::codespace_basis(&code.stabilizers(), code.n_total()).unwrap();
        oracle::check_commutes_with_stabilizers(&h, &code.stabilizers()).unwrap();
        let spec = oracle::restricted_spectrum(&h, &basis).unwrap();
        check(
            "E-type AQM (4x2) spectrum = JW spectrum",
            oracle::spectra_match(&spec, &jw_ref, SPECTRUM_TOL),
            &mut failures,
        );
    }
    // Square AQM, 12 qubits.
    {
        let code = aqcode::build_square(4, 2);
        let h = code.adjusted_transform(&linmap::jw(8), &f_s).unwrap();
        let basis = oracle::codespace_basis(&code.stabilizers(), code.n_total()).unwrap();
        let spec = oracle::restricted_spectrum(&h, &basis).unwrap();
        check(
            "square AQM (4x2) spectrum = JW spectrum",
            oracle::spectra_match(&spec, &jw_ref, SPECTRUM_TOL),
            &mut failures,
        );
    }
    // Sparse AQM with periodicity 3, 10 qubits.
    {
        let code = aqcode::build_sparse(4, 2, 3).unwrap();
        let h = code.adjusted_transform(&linmap::jw(8), &f_s).unwrap();
        let basis = oracle::codespace_basis(&code.stabilizers(), code.n_total()).unwrap();
        let spec = oracle::restricted_spectrum(&h, &basis).unwrap();
        check(
            "sparse AQM (4x2, I=3) spectrum = JW spectrum",
            oracle::spectra_match(&spec, &jw_ref, SPECTRUM_TOL),
            &mut failures,
        );
    }
    // VCT at L = 1: single site, detuning + interaction.
    {
        let (placement, f) = vct::hubbard_vct_hamiltonian(1, 1.0, 0.35, 1.7);
        let h = placement.code.transform(&f).unwrap();
        let stabs = placement.code.stabilizers();
        let basis = oracle::codespace_basis(&stabs, placement.code.n_total()).unwrap();
        let spec = oracle::restricted_spectrum(&h, &basis).unwrap();

        let mut reference = FermionSum::new(2);
        for m in 0..2 {
            reference
                .add(C::new(0.35, 0.0), vec![LadderOp::create(m), LadderOp::annihilate(m)])
                .unwrap();
        }
        reference
            .add(
                C::new(1.7, 0.0),
                vec![
                    LadderOp::create(1),
                    LadderOp::annihilate(1),
                    LadderOp::create(0),
                    LadderOp::annihilate(0),
                ],
            )
            .unwrap();
        let jw_small = oracle::full_spectrum(&linmap::jw(2).transform(&reference).unwrap()).unwrap();
        check(
            "VCT (L=1) spectrum = JW spectrum",
            oracle::spectra_match(&spec, &jw_small, SPECTRUM_TOL),
            &mut failures,
        );
    }
    // BKSF even sector on a 2x2 mode lattice.
    {
        let g = bksf::build_bksf(2, 2, Variant::V2).unwrap();
        let mut f = FermionSum::new(4);
        f.add_hopping(C::new(1.0, 0.0), 0, 1).unwrap();
        f.add_hopping(C::new(0.9, 0.2), 0, 2).unwrap();
        f.add_hopping(C::new(0.7, 0.0), 1, 3).unwrap();
        f.add_hopping(C::new(1.1, 0.0), 2, 3).unwrap();
        for m in 0..4 {
            f.add(
                C::new(0.3 + 0.1 * m as f64, 0.0),
                vec![LadderOp::create(m), LadderOp::annihilate(m)],
            )
            .unwrap();
        }
        f.add(
            C::new(1.5, 0.0),
            vec![
                LadderOp::create(0),
                LadderOp::annihilate(0),
                LadderOp::create(1),
                LadderOp::annihilate(1),
            ],
        )
        .unwrap();

        let h = g.transform(&f, Sector::Even).unwrap();
        let stabs = g.loop_stabilizers();
        let basis = oracle::codespace_basis(&stabs, g.n_qubits()).unwrap();
        let spec = oracle::restricted_spectrum(&h, &basis).unwrap();

        // JW reference projected onto even particle number.
        let dense = oracle::dense_matrix(&linmap::jw(4).transform(&f).unwrap()).unwrap();
        let even: Vec<usize> = (0..16).filter(|i: &usize| i.count_ones() % 2 == 0).collect();
        let mut m = nalgebra::DMatrix::<C>::zeros(8, 8);
        for (a, &ia) in even.iter().enumerate() {
            for (b, &ib) in even.iter().enumerate() {
                m[(a, b)] = dense[(ia, ib)];
            }
        }
        let jw_even = oracle::hermitian_eigenvalues(&m);
        check(
            "BKSF even sector (2x2) spectrum = even-number JW spectrum",
            oracle::spectra_match(&spec, &jw_even, SPECTRUM_TOL),
            &mut failures,
        );
    }

    let elapsed = start.elapsed();
    println!("  runtime: {:.2?}", elapsed);
    assert!(elapsed.as_secs_f64() < 120.0, "criterion 3 exceeded 2 min");
    assert!(failures.is_empty(), "criterion 3 failures: {failures:?}");
}

// --- Criterion 4: algebra suite --------------------------------------------------

fn ladder_images_linear(e: &linmap::LinearEncoder) -> Vec<(PauliSum, PauliSum)> {
    (0..e.n)
        .map(|m| {
            (
                e.ladder_image(m, false).unwrap(),
                e.ladder_image(m, true).unwrap(),
            )
        })
        .collect()
}

fn single_op(n: usize, mode: usize, dagger: bool) -> FermionSum {
    let mut f = FermionSum::new(n);
    f.add(
        C::new(1.0, 0.0),
        vec![if dagger {
            LadderOp::create(mode)
        } else {
            LadderOp::annihilate(mode)
        }],
    )
    .unwrap();
    f
}

#[test]
fn criterion_4_algebra_suite() {
    let mut failures = Vec::new();
    println!("criterion 4: canonical anticommutation relations");

    for (name, enc) in [
        ("JW n=7", linmap::jw(7)),
        ("Bravyi-Kitaev n=8", linmap::bravyi_kitaev(8)),
        ("parity n=7", linmap::parity(7)),
    ] {
        let report = oracle::algebra_check(&ladder_images_linear(&enc), &[], enc.n).unwrap();
        check(&format!("{name}: exact CAR"), report.passed(), &mut failures);
    }

    // AQMs: coset-zero modulo stabilizers.
    let aqm_cases: Vec<(&str, aqcode::AuxCode)> = vec![
        ("E-type 4x2 (10 qubits)", aqcode::build_e_type(4, 2)),
        ("square 3x2 (9 qubits)", aqcode::build_square(3, 2)),
        ("sparse 3x2 I=2 (8 qubits)", aqcode::build_sparse(3, 2, 2).unwrap()),
    ];
    for (name, code) in aqm_cases {
        let enc = linmap::jw(code.n_data);
        let images: Vec<(PauliSum, PauliSum)> = (0..code.n_data)
            .map(|m| {
                (
                    code.adjusted_transform(&enc, &single_op(code.n_data, m, false)).unwrap(),
                    code.adjusted_transform(&enc, &single_op(code.n_data, m, true)).unwrap(),
                )
            })
            .collect();
        let report = oracle::algebra_check(&images, &code.stabilizers(), code.n_total()).unwrap();
        check(
            &format!("{name}: CAR modulo stabilizers ({} pairs)", report.pairs_checked),
            report.passed(),
            &mut failures,
        );
    }

    // VCT 2x3 (12 qubits).
    {
        let code = vct::build_vct(2, 3);
        let n = code.n_data;
        let images: Vec<(PauliSum, PauliSum)> = (0..n)
            .map(|m| {
                (
                    code.transform(&single_op(n, m, false)).unwrap(),
                    code.transform(&single_op(n, m, true)).unwrap(),
                )
            })
            .collect();
        let report = oracle::algebra_check(&images, &code.stabilizers(), code.n_total()).unwrap();
        check(
            &format!("VCT 2x3 (12 qubits): CAR modulo stabilizers ({} pairs)", report.pairs_checked),
            report.passed(),
            &mut failures,
        );
    }

    // BKSF covers operator pairs only; the CAR consequence checked per mode
    // pair is c^dag_i c_j c^dag_j c_i = c^dag_i c_i (1 - c^dag_j c_j), with
    // every term reduced modulo the loop stabilizers.
    {
        let g = bksf::build_bksf(3, 2, Variant::V2).unwrap();
        let n_modes = g.n_modes();
        let basis = aqcode::StabilizerBasis::new(&g.loop_stabilizers()).unwrap();
        let reduce_sum = |sum: &PauliSum| -> PauliSum {
            let mut out = PauliSum::new(g.n_qubits());
            for (term, coeff) in sum.iter() {
                let (rep, phase) = basis.reduce(&term).unwrap().canonicalize();
                out.add_term(&rep, coeff * phase);
            }
            out
        };
        let pair_term = |i: usize, j: usize| -> PauliSum {
            let mut f = FermionSum::new(n_modes);
            f.add(C::new(1.0, 0.0), vec![LadderOp::create(i), LadderOp::annihilate(j)])
                .unwrap();
            g.transform(&f, Sector::Even).unwrap()
        };
        let mut ok = true;
        let mut checked = 0;
        for i in 0..n_modes {
            for j in 0..n_modes {
                if i == j {
                    // Number operators are projectors.
                    let q = pair_term(i, i);
                    let diff = {
                        let mut d = q.mul(&q).unwrap();
                        d.add_assign(&q.scaled(C::new(-1.0, 0.0)));
                        d
                    };
                    ok &= reduce_sum(&diff).is_empty();
                } else {
                    let lhs = pair_term(i, j).mul(&pair_term(j, i)).unwrap();
                    let ni = pair_term(i, i);
                    let nj = pair_term(j, j);
                    let mut rhs = ni.clone();
                    rhs.add_assign(&ni.mul(&nj).unwrap().scaled(C::new(-1.0, 0.0)));
                    let mut diff = lhs;
                    diff.add_assign(&rhs.scaled(C::new(-1.0, 0.0)));
                    ok &= reduce_sum(&diff).is_empty();
                }
                checked += 1;
            }
        }
        check(
            &format!("BKSF 3x2 (7 qubits): pair algebra modulo stabilizers ({checked} pairs)"),
            ok,
            &mut failures,
        );
    }

    // Negative control: deform one image by a stabilizer, as routing does,
    // then flip that stabilizer's sign. The reduction must undo the
    // deformation with the wrong sign and report the pair.
    {
        let code = aqcode::build_square(2, 2);
        let enc = linmap::jw(4);
        let mut images: Vec<(PauliSum, PauliSum)> = (0..4)
            .map(|m| {
                (
                    code.adjusted_transform(&enc, &single_op(4, m, false)).unwrap(),
                    code.adjusted_transform(&enc, &single_op(4, m, true)).unwrap(),
                )
            })
            .collect();
        let deform = |sum: &PauliSum| -> PauliSum {
            let mut s = PauliSum::new(code.n_total());
            s.add_term(&code.stabilizer(0), C::new(1.0, 0.0));
            sum.mul(&s).unwrap()
        };
        // Deform only the annihilator so the relation must close through
        // the stabilizer itself.
        images[0].0 = deform(&images[0].0);

        let healthy = oracle::algebra_check(&images, &code.stabilizers(), code.n_total()).unwrap();
        check(
            "control: stabilizer-deformed images still pass",
            healthy.passed(),
            &mut failures,
        );
        let mut stabs = code.stabilizers();
        stabs[0].mul_phase(2);
        let report = oracle::algebra_check(&images, &stabs, code.n_total()).unwrap();
        let witness_hits_mode_zero = report.failures.iter().any(|f| f.i == 0 || f.j == 0);
        check(
            "negative control: flipped stabilizer sign is caught with a mode-pair witness",
            !report.passed() && witness_hits_mode_zero,
            &mut failures,
        );
    }

    assert!(failures.is_empty(), "criterion 4 failures: {failures:?}");
}

// --- Criterion 5: Manhattan-distance property ------------------------------------

/// Connecting-string weight: a path of Manhattan length m covers the far
/// endpoint plus m steps, so the quoted step weights exclude one end mode.
fn connecting_weight(routed: &PauliString) -> i64 {
    routed.weight() as i64 - 1
}

#[test]
fn criterion_5_manhattan_distance() {
    let start = Instant::now();
    let mut failures = Vec::new();
    println!("criterion 5: Manhattan-distance property on a 6x6 mode lattice");

    let classes = [
        (Pauli::X, Pauli::X),
        (Pauli::Y, Pauli::Y),
        (Pauli::X, Pauli::Y),
        (Pauli::Y, Pauli::X),
    ];
    let hopping = |n: usize, a: usize, b: usize, ends: (Pauli, Pauli)| -> PauliString {
        let (lo, hi) = (a.min(b), a.max(b));
        let mut h = PauliString::identity(n);
        h.apply_letter(lo, ends.0);
        for q in lo + 1..hi {
            h.apply_letter(q, Pauli::Z);
        }
        h.apply_letter(hi, ends.1);
        h
    };

    // Square AQM: weight - 2 ends vs x + 2y within [-2, 2].
    {
        let code = aqcode::build_square(6, 6);
        let ord = code.lattice.as_ref().unwrap().order;
        let mut worst: i64 = 0;
        let mut ok = true;
        for a in 0..36usize {
            for b in a + 1..36 {
                let (c1, r1) = ord.coord(a);
                let (c2, r2) = ord.coord(b);
                let expected = (c1.abs_diff(c2) + 2 * r1.abs_diff(r2)) as i64;
                for &ends in &classes {
                    let h = hopping(36, a, b, ends);
                    let adj = code.adjust_string(&h).unwrap();
                    let routed = aqcode::route_string(
                        &code,
                        &adj,
                        ((c1, r1), (c2, r2)),
                        &RouteStrategy::ColThenRow,
                    )
                    .unwrap();
                    let diff = connecting_weight(&routed) - expected;
                    worst = worst.max(diff.abs());
                    ok &= (-2..=2).contains(&diff);
                }
            }
        }
        check(
            &format!("square AQM: |weight - (x+2y)| <= 2 over all pairs (worst {worst})"),
            ok,
            &mut failures,
        );
    }

    // VCT: weight - 2 ends vs 2x + y within [-2, 2].
    {
        let code = vct::build_vct(6, 6);
        let ord = code.order;
        let mut worst: i64 = 0;
        let mut ok = true;
        for a in 0..36usize {
            for b in a + 1..36 {
                let (c1, r1) = ord.coord(a);
                let (c2, r2) = ord.coord(b);
                let expected = (2 * c1.abs_diff(c2) + r1.abs_diff(r2)) as i64;
                // Route along the source column through stabilized vertical
                // edges to the target row.
                let col = c1;
                let mut path = vec![a];
                let mut row = r1;
                while row != r2 {
                    row = if r2 > row { row + 1 } else { row - 1 };
                    path.push(ord.index(col, row));
                }
                for &ends in &classes {
                    let h = hopping(36, a, b, ends);
                    let adj = code.adjust_string(&h).unwrap();
                    let routed = code.route(&adj, &path).unwrap();
                    let diff = connecting_weight(&routed) - expected;
                    worst = worst.max(diff.abs());
                    ok &= (-2..=2).contains(&diff);
                }
            }
        }
        check(
            &format!("VCT: |weight - (2x+y)| <= 2 over all pairs (worst {worst})"),
            ok,
            &mut failures,
        );
    }

    // BKSF: weight - 2 vs 2(x+y) within [-6, 6].
    {
        let g = bksf::build_bksf(6, 6, Variant::V2).unwrap();
        let mut worst: i64 = 0;
        let mut ok = true;
        let m = |mode: usize| MajoranaFactor { mode, bar: false };
        let mb = |mode: usize| MajoranaFactor { mode, bar: true };
        for a in 0..36usize {
            for b in a + 1..36 {
                let (c1, r1) = g.mode_coord(a);
                let (c2, r2) = g.mode_coord(b);
                let expected = 2 * (c1.abs_diff(c2) + r1.abs_diff(r2)) as i64;
                for pair in [
                    (m(b), mb(a)),
                    (m(a), mb(b)),
                    (mb(a), mb(b)),
                    (m(a), m(b)),
                ] {
                    let (img, _) = g.pair_image_public(pair.0, pair.1).unwrap();
                    let diff = connecting_weight(&img) - expected;
                    worst = worst.max(diff.abs());
                    ok &= (-6..=6).contains(&diff);
                }
            }
        }
        check(
            &format!("BKSF: |weight - 2(x+y)| <= 6 over all pairs (worst {worst})"),
            ok,
            &mut failures,
        );
    }

    let elapsed = start.elapsed();
    println!("  runtime: {:.2?}", elapsed);
    assert!(elapsed.as_secs_f64() < 30.0, "criterion 5 exceeded 30 s");
    assert!(failures.is_empty(), "criterion 5 failures: {failures:?}");
}

// --- Criterion 6: initialization circuits ----------------------------------------

#[test]
fn criterion_6_initialization_circuits() {
    let mut failures = Vec::new();
    println!("criterion 6: code-space initialization");
    let mut rng = ChaCha8Rng::seed_from_u64(606);

    let mut cases: Vec<(String, aqcode::AuxCode)> = Vec::new();
    for l1 in 2..=3usize {
        for l2 in 2..=3usize {
            cases.push((format!("E-type {l1}x{l2}"), aqcode::build_e_type(l1, l2)));
            cases.push((format!("square {l1}x{l2}"), aqcode::build_square(l1, l2)));
            if l1 > 1 && (l1 - 1) % 2 == 0 {
                cases.push((
                    format!("sparse {l1}x{l2} I=2"),
                    aqcode::build_sparse(l1, l2, 2).unwrap(),
                ));
            }
        }
    }
    for (name, code) in &cases {
        let circuit = circuits::synth_init(code).unwrap();
        let mut ok = circuit.respects_connectivity();
        for _ in 0..20 {
            let phi = StateVector::random(code.n_data, &mut rng);
            let state = circuit.apply_to(&phi.extend_zeros(code.r));
            for s in code.stabilizers() {
                let e = oracle::expectation_string(&s, &state);
                ok &= (e - C::new(1.0, 0.0)).norm() < STABILIZER_TOL;
            }
        }
        check(
            &format!("{name}: 20 random states, all stabilizer expectations +1"),
            ok,
            &mut failures,
        );
    }

    // Depth grows linearly in l1 at fixed l2 for the square AQM.
    {
        let l1s: Vec<f64> = (2..=6).map(|v| v as f64).collect();
        let depths: Vec<f64> = (2..=6)
            .map(|l1| circuits::synth_init(&aqcode::build_square(l1, 2)).unwrap().depth() as f64)
            .collect();
        let n = l1s.len() as f64;
        let sx: f64 = l1s.iter().sum();
        let sy: f64 = depths.iter().sum();
        let sxx: f64 = l1s.iter().map(|x| x * x).sum();
        let sxy: f64 = l1s.iter().zip(&depths).map(|(x, y)| x * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        let rss: f64 = l1s
            .iter()
            .zip(&depths)
            .map(|(x, y)| (y - slope * x - intercept).powi(2))
            .sum();
        check(
            &format!(
                "square AQM init depth vs l1: slope {slope:.2}, intercept {intercept:.2}, rss {rss:.2}"
            ),
            slope > 0.0 && slope < 40.0 && intercept.abs() < 60.0 && rss < 20.0,
            &mut failures,
        );
    }

    assert!(failures.is_empty(), "criterion 6 failures: {failures:?}");
}

// --- Criterion 7: propagator gadgets ----------------------------------------------

#[test]
fn criterion_7_propagator_gadgets() {
    let mut failures = Vec::new();
    println!("criterion 7: propagator gadgets and bridges");
    let mut rng = ChaCha8Rng::seed_from_u64(707);

    let mut all_ok = true;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(2..=10usize);
        let layout = latticemap::lattice::QubitLayout::chain(n);
        let start = rng.gen_range(0..n - 1);
        let stop = rng.gen_range(start + 1..n);
        let mut h = PauliString::identity(n);
        for q in start..=stop {
            h.apply_letter(q, [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]);
        }
        if h.weight() < 2 {
            continue;
        }
        let phi: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let circuit = circuits::synth_propagator(&h, phi, &layout, false).unwrap();
        all_ok &= circuit.respects_connectivity();

        // exp(i phi h) = cos(phi) I + i sin(phi) h; compare column by column.
        let dim = 1usize << n;
        let mut dist2 = 0.0;
        for col in 0..dim {
            let ket = StateVector::basis(n, col);
            let got = circuit.apply_to(&ket);
            let hket = oracle::apply_string(&h, &ket);
            for row in 0..dim {
                let want = C::new(phi.cos(), 0.0) * ket.amps[row]
                    + C::new(0.0, phi.sin()) * hket.amps[row];
                dist2 += (got.amps[row] - want).norm_sqr();
            }
        }
        let dist = dist2.sqrt();
        worst = worst.max(dist);
        all_ok &= dist < UNITARY_TOL;
    }
    check(
        &format!("50 random continuous strings, Frobenius distance < 1e-10 (worst {worst:.2e})"),
        all_ok,
        &mut failures,
    );

    // Bridge overhead exactly 4m.
    {
        let layout = latticemap::lattice::QubitLayout::chain(6);
        let mut ok = true;
        for m in 1..=4usize {
            let chain: Vec<usize> = (0..m + 2).collect();
            let c = circuits::bridge_expand(&chain, circuits::BridgeVariant::Center, &layout).unwrap();
            ok &= c.gates.len() == 4 * m + 1;
        }
        check("bridge_expand overhead = 4m for m in 1..=4", ok, &mut failures);
    }

    assert!(failures.is_empty(), "criterion 7 failures: {failures:?}");
}

// --- Criterion 8: tree transforms --------------------------------------------------

#[test]
fn criterion_8_tree_transforms() {
    let mut failures = Vec::new();
    println!("criterion 8: tree-based transforms");

    let bk = linmap::bravyi_kitaev(16);
    check(
        "BK N=16: F(8) = {4,6,7,8}",
        bk.sets.flip[7] == vec![3, 5, 6, 7],
        &mut failures,
    );
    check(
        "BK N=16: U(10) = {10,12,16}",
        bk.sets.update[9] == vec![9, 11, 15],
        &mut failures,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut weight_ok = true;
    let mut car_ok = true;
    for _ in 0..100 {
        let n = rng.gen_range(2..=14usize);
        let mut parent = vec![None; n];
        for v in 1..n {
            if !rng.gen_bool(0.3) {
                parent[v] = Some(rng.gen_range(0..v));
            }
        }
        let forest = linmap::Forest { parent };
        let label = linmap::label_forest(&forest).unwrap();
        let enc = linmap::encoder_from_forest(&forest, &label).unwrap();
        let (tau, lambda, gamma) = forest.shape();
        let bound = 3 * (tau + lambda * gamma);
        for m in 0..n {
            weight_ok &= enc.ladder_image(m, true).unwrap().max_weight() <= bound;
        }
        let report = oracle::algebra_check(&ladder_images_linear(&enc), &[], n).unwrap();
        car_ok &= report.passed();
    }
    check(
        "100 random forests: max single-operator weight <= 3(tau + Lambda*Gamma)",
        weight_ok,
        &mut failures,
    );
    check("100 random forests: exact CAR", car_ok, &mut failures);

    assert!(failures.is_empty(), "criterion 8 failures: {failures:?}");
}
