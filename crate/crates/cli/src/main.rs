//! Command-line front end: Hamiltonian generation, mapping, statistics,
//! stabilizer tilings, circuit synthesis and the oracle verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use latticemap::aqcode::{self, AuxCode};
use latticemap::bksf::{self, Sector, Variant};
use latticemap::circuits;
use latticemap::fermion::{hubbard, FermionSum, HubbardParams, LadderOp};
use latticemap::lattice::Traversal;
use latticemap::linmap;
use latticemap::oracle::{self, StateVector};
use latticemap::pauli::{PauliString, PauliSum};
use latticemap::stats;
use latticemap::vct;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "latticemap",
    about = "Fermion-to-qubit compilation on square-lattice qubit layouts",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct MappingArgs {
    /// One of: jw, bk, parity, tree, aqm-e, aqm-square, aqm-sparse, vct, bksf.
    #[arg(long)]
    mapping: String,
    /// Mode-lattice width.
    #[arg(long)]
    lx: Option<usize>,
    /// Mode-lattice height.
    #[arg(long)]
    ly: Option<usize>,
    /// Vertical-connection periodicity (aqm-sparse only).
    #[arg(long)]
    periodicity: Option<usize>,
    /// Edge-ordering variant 1 or 2 (bksf only).
    #[arg(long)]
    variant: Option<u8>,
    /// Parity sector: "even" or "odd:<mode>" (bksf only).
    #[arg(long)]
    sector: Option<String>,
    /// Auxiliary seed configuration as a bit string (aqm and vct codes).
    #[arg(long)]
    chi: Option<String>,
    /// Per-edge stabilizer sign bits (vct only).
    #[arg(long)]
    b_signs: Option<String>,
    /// Labeled-forest JSON file (tree only).
    #[arg(long)]
    forest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the Fermi-Hubbard Hamiltonian as ladder-operator JSON.
    Hubbard {
        /// Side length of the spatial site lattice.
        #[arg(short = 'L', long = "sites")]
        l: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        /// Mode order: s-pattern or typewriter.
        #[arg(long, default_value = "s-pattern")]
        order: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transform a ladder-operator Hamiltonian into a Pauli sum.
    Map {
        #[command(flatten)]
        mapping: MappingArgs,
        /// Input Hamiltonian JSON; stdin when omitted.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Qubit counts, and the Hubbard string-length table with --hubbard.
    Stats {
        #[command(flatten)]
        mapping: MappingArgs,
        /// Report the Hubbard weight table instead of plain counts.
        #[arg(long)]
        hubbard: bool,
        #[arg(short = 'L', long = "sites")]
        l: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the local stabilizer tiling.
    Tiling {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize initialization or propagator circuits.
    Circuit {
        #[command(flatten)]
        mapping: MappingArgs,
        /// "init" or "propagator".
        #[arg(long, default_value = "init")]
        kind: String,
        /// Pauli word like "X1 Z2 X3" (propagator only).
        #[arg(long)]
        string: Option<String>,
        /// Rotation angle in radians (propagator only).
        #[arg(long)]
        phi: Option<f64>,
        /// Register size for a chain-layout propagator.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle suite for a mapping at desk scale.
    Verify {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_output(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{content}"),
    }
    Ok(())
}

fn usage_error(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

const MAPPINGS: &[&str] = &[
    "jw",
    "bk",
    "parity",
    "tree",
    "aqm-e",
    "aqm-square",
    "aqm-sparse",
    "vct",
    "bksf",
];

fn parse_bits(text: &str) -> Vec<bool> {
    text.chars()
        .filter_map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

impl MappingArgs {
    fn validate(&self) {
        if !MAPPINGS.contains(&self.mapping.as_str()) {
            usage_error(&format!(
                "unknown mapping {:?}; expected one of {}",
                self.mapping,
                MAPPINGS.join(", ")
            ));
        }
        if self.periodicity.is_some() && self.mapping != "aqm-sparse" {
            usage_error("--periodicity applies to aqm-sparse only");
        }
        if self.mapping == "aqm-sparse" && self.periodicity.is_none() {
            usage_error("aqm-sparse requires --periodicity");
        }
        if (self.variant.is_some() || self.sector.is_some()) && self.mapping != "bksf" {
            usage_error("--variant/--sector apply to bksf only");
        }
        if self.b_signs.is_some() && self.mapping != "vct" {
            usage_error("--b-signs applies to vct only");
        }
        if self.chi.is_some() && !self.mapping.starts_with("aqm") && self.mapping != "vct" {
            usage_error("--chi applies to the auxiliary-qubit codes");
        }
        if self.forest.is_some() && self.mapping != "tree" {
            usage_error("--forest applies to tree only");
        }
    }

    fn dims(&self) -> (usize, usize) {
        match (self.lx, self.ly) {
            (Some(a), Some(b)) if a >= 1 && b >= 1 => (a, b),
            _ => usage_error("this mapping needs --lx and --ly"),
        }
    }

    fn variant(&self) -> Variant {
        match self.variant.unwrap_or(2) {
            1 => Variant::V1,
            2 => Variant::V2,
            v => usage_error(&format!("unknown BKSF variant {v}")),
        }
    }

    fn sector(&self) -> Sector {
        match self.sector.as_deref() {
            None | Some("even") => Sector::Even,
            Some(s) => match s.strip_prefix("odd:").and_then(|k| k.parse::<usize>().ok()) {
                Some(k0) if k0 >= 1 => Sector::Odd { k0: k0 - 1 },
                _ => usage_error("sector must be \"even\" or \"odd:<mode>\""),
            },
        }
    }

    fn chi_bits(&self, r: usize) -> Option<Vec<bool>> {
        let text = self.chi.as_ref()?;
        let bits = parse_bits(text);
        if bits.len() != r {
            usage_error(&format!("--chi needs exactly {r} bits"));
        }
        Some(bits)
    }

    fn aux_code(&self) -> Option<AuxCode> {
        let mut code = match self.mapping.as_str() {
            "aqm-e" => {
                let (l1, l2) = self.dims();
                aqcode::build_e_type(l1, l2)
            }
            "aqm-square" => {
                let (l1, l2) = self.dims();
                aqcode::build_square(l1, l2)
            }
            "aqm-sparse" => {
                let (l1, l2) = self.dims();
                match aqcode::build_sparse(l1, l2, self.periodicity.unwrap()) {
                    Ok(code) => code,
                    Err(e) => usage_error(&format!("{e}")),
                }
            }
            _ => return None,
        };
        if let Some(bits) = self.chi_bits(code.r) {
            code.chi = bits;
        }
        Some(code)
    }

    fn vct_code(&self) -> vct::VctCode {
        let (l1, l2) = self.dims();
        let mut code = vct::build_vct(l1, l2);
        if let Some(bits) = &self.b_signs {
            let flat = parse_bits(bits);
            let total: usize = code.loops.iter().map(|l| l.b_signs.len()).sum();
            if flat.len() != total {
                usage_error(&format!("--b-signs needs exactly {total} bits"));
            }
            let mut it = flat.into_iter();
            for l in &mut code.loops {
                for b in &mut l.b_signs {
                    *b = it.next().unwrap();
                }
            }
            code.resolve_chi();
        }
        if let Some(bits) = self.chi_bits(code.r()) {
            code.chi = bits;
        }
        code
    }
}

fn pauli_sum_json(h: &PauliSum) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = h
        .iter()
        .map(|(s, c)| {
            let cw = c * s.word_coefficient();
            serde_json::json!({ "string": s.render(), "coeff": [cw.re, cw.im] })
        })
        .collect();
    serde_json::json!({ "n": h.n(), "terms": terms })
}

fn read_fermion_sum(input: Option<&PathBuf>) -> Result<FermionSum> {
    let text = match input {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let value: serde_json::Value = serde_json::from_str(&text)?;
    FermionSum::from_json(&value).map_err(|e| anyhow!("bad Hamiltonian JSON: {e}"))
}

fn map_hamiltonian(args: &MappingArgs, f: &FermionSum) -> Result<PauliSum> {
    let n = f.n_modes;
    Ok(match args.mapping.as_str() {
        "jw" => linmap::jw(n).transform(f)?,
        "bk" => linmap::bravyi_kitaev(n).transform(f)?,
        "parity" => linmap::parity(n).transform(f)?,
        "tree" => {
            let path = args
                .forest
                .as_ref()
                .unwrap_or_else(|| usage_error("tree mapping requires --forest"));
            let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            let forest = linmap::forest_from_json(&value).map_err(|e| anyhow!(e))?;
            if forest.n() != n {
                bail!(
                    "forest has {} nodes but the Hamiltonian has {} modes",
                    forest.n(),
                    n
                );
            }
            let label = linmap::label_forest(&forest)?;
            linmap::encoder_from_forest(&forest, &label)?.transform(f)?
        }
        "aqm-e" | "aqm-square" | "aqm-sparse" => {
            let code = args.aux_code().expect("aqm mapping");
            if code.n_data != n {
                bail!("lattice has {} modes but the Hamiltonian has {}", code.n_data, n);
            }
            code.adjusted_transform(&linmap::jw(n), f)?
        }
        "vct" => {
            let code = args.vct_code();
            if code.n_data != n {
                bail!("lattice has {} modes but the Hamiltonian has {}", code.n_data, n);
            }
            code.transform(f)?
        }
        "bksf" => {
            let (l1, l2) = args.dims();
            let g = bksf::build_bksf(l1, l2, args.variant())?;
            if g.n_modes() != n {
                bail!("lattice has {} modes but the Hamiltonian has {}", g.n_modes(), n);
            }
            g.transform(f, args.sector())?
        }
        _ => unreachable!("validated"),
    })
}

fn run_stats(
    args: &MappingArgs,
    hubbard_table: bool,
    l: Option<usize>,
    format: &str,
) -> Result<String> {
    if hubbard_table {
        let l = l.unwrap_or_else(|| usage_error("--hubbard needs -L"));
        let weights = match args.mapping.as_str() {
            "aqm-square" => stats::aqm_square_weights(),
            "vct" => stats::vct_weights(),
            "bksf" => stats::bksf_weights(args.variant()),
            other => usage_error(&format!(
                "--hubbard stats cover aqm-square, vct and bksf, not {other}"
            )),
        };
        let (total, aux) = match args.mapping.as_str() {
            "aqm-square" => stats::qubit_counts("aqm-square", 2 * l, l, 1).unwrap(),
            "vct" => (4 * l * l + 2 * l, 2 * l * l + 2 * l),
            "bksf" => stats::qubit_counts("bksf", 2 * l, l, 1).unwrap(),
            _ => unreachable!(),
        };
        return Ok(if format == "text" {
            format!(
                "{}  qubits: total {} (aux {})\n",
                weights.to_text(&args.mapping),
                total,
                aux
            )
        } else {
            let mut v = weights.to_json();
            v["total_qubits"] = serde_json::json!(total);
            v["aux_qubits"] = serde_json::json!(aux);
            serde_json::to_string_pretty(&v)?
        });
    }
    let (l1, l2) = args.dims();
    let (total, aux) = stats::qubit_counts(&args.mapping, l1, l2, args.periodicity.unwrap_or(1))
        .unwrap_or_else(|| usage_error("no counts for this mapping"));
    Ok(if format == "text" {
        format!(
            "mapping {}: lattice {l1}x{l2}, aux {aux}, total {total}\n",
            args.mapping
        )
    } else {
        serde_json::to_string_pretty(&serde_json::json!({
            "mapping": args.mapping,
            "l1": l1,
            "l2": l2,
            "aux_qubits": aux,
            "total_qubits": total,
        }))?
    })
}

fn run_tiling(args: &MappingArgs, format: &str) -> Result<String> {
    let (tiles, layout) = match args.mapping.as_str() {
        "aqm-square" | "aqm-sparse" => {
            let code = args.aux_code().expect("aqm mapping");
            (aqcode::local_tiling(&code)?, code.layout.clone())
        }
        "vct" => {
            let code = args.vct_code();
            let tiles: Vec<PauliString> = code.local_tiling().into_iter().map(|(t, _)| t).collect();
            (tiles, code.layout.clone())
        }
        "bksf" => {
            let (l1, l2) = args.dims();
            let g = bksf::build_bksf(l1, l2, args.variant())?;
            (g.loop_stabilizers(), g.layout.clone())
        }
        other => usage_error(&format!("no tiling for mapping {other}")),
    };
    Ok(if format == "text" {
        stats::render_tiles(&layout, &tiles)
    } else {
        serde_json::to_string_pretty(&stats::tiles_to_json(&tiles))?
    })
}

fn run_circuit(
    args: &MappingArgs,
    kind: &str,
    string: Option<&str>,
    phi: Option<f64>,
    n: Option<usize>,
    format: &str,
) -> Result<String> {
    let circuit = match kind {
        "init" => match args.aux_code() {
            Some(code) => circuits::synth_init(&code)?,
            None => bail!("initialization circuits exist for the auxiliary-qubit mappings only"),
        },
        "propagator" => {
            let text = string.unwrap_or_else(|| usage_error("propagator needs --string"));
            let n = n.unwrap_or_else(|| usage_error("propagator needs --n"));
            let h = PauliString::parse(n, text)?;
            let phi = phi.unwrap_or_else(|| usage_error("propagator needs --phi"));
            circuits::synth_propagator(&h, phi, &latticemap::lattice::QubitLayout::chain(n), true)?
        }
        other => usage_error(&format!("unknown circuit kind {other}")),
    };
    Ok(if format == "text" {
        circuit.to_text()
    } else {
        serde_json::to_string_pretty(&circuit.to_json())?
    })
}

/// Small random Hermitian lattice Hamiltonian for the verification suite.
fn random_hamiltonian(n: usize, rng: &mut ChaCha8Rng) -> FermionSum {
    let mut f = FermionSum::new(n);
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            f.add_hopping(
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                i,
                j,
            )
            .unwrap();
        }
        let m = rng.gen_range(0..n);
        f.add(
            Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
            vec![LadderOp::create(m), LadderOp::annihilate(m)],
        )
        .unwrap();
    }
    f
}

fn single_op(n: usize, mode: usize, dagger: bool) -> FermionSum {
    let mut f = FermionSum::new(n);
    f.add(
        Complex64::new(1.0, 0.0),
        vec![if dagger {
            LadderOp::create(mode)
        } else {
            LadderOp::annihilate(mode)
        }],
    )
    .unwrap();
    f
}

struct VerifyOutcome {
    checks: Vec<(String, bool)>,
}

impl VerifyOutcome {
    fn record(&mut self, name: &str, ok: bool) {
        println!("  [{}] {}", if ok { "PASS" } else { "FAIL" }, name);
        self.checks.push((name.to_string(), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn verify_stabilizer_family(
    outcome: &mut VerifyOutcome,
    stabs: &[PauliString],
    h: &PauliSum,
    images: &[(PauliSum, PauliSum)],
    n_total: usize,
) -> Result<()> {
    let mut commute = true;
    for (i, a) in stabs.iter().enumerate() {
        for b in stabs.iter().skip(i + 1) {
            commute &= a.commutes(b)?;
        }
    }
    outcome.record("stabilizers commute pairwise", commute);

    let mut h_ok = h.is_hermitian();
    for s in stabs {
        for (term, _) in h.iter() {
            h_ok &= term.commutes(s)?;
        }
    }
    outcome.record(
        "transformed Hamiltonian is Hermitian and stabilizer-compatible",
        h_ok,
    );

    let report = oracle::algebra_check(images, stabs, n_total)?;
    outcome.record(
        &format!("anticommutation relations ({} pairs)", report.pairs_checked),
        report.passed(),
    );
    Ok(())
}

fn run_verify(args: &MappingArgs, seed: u64) -> Result<VerifyOutcome> {
    let mut outcome = VerifyOutcome { checks: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match args.mapping.as_str() {
        "jw" | "bk" | "parity" => {
            let (l1, l2) = args.dims();
            let n = (l1 * l2).min(8);
            let enc = match args.mapping.as_str() {
                "jw" => linmap::jw(n),
                "bk" => linmap::bravyi_kitaev(n),
                _ => linmap::parity(n),
            };
            let images: Vec<(PauliSum, PauliSum)> = (0..n)
                .map(|m| {
                    (
                        enc.ladder_image(m, false).unwrap(),
                        enc.ladder_image(m, true).unwrap(),
                    )
                })
                .collect();
            let report = oracle::algebra_check(&images, &[], n)?;
            outcome.record(
                &format!("exact anticommutation relations ({} pairs)", report.pairs_checked),
                report.passed(),
            );
            let h = enc.transform(&random_hamiltonian(n, &mut rng))?;
            outcome.record("Hermitian input maps to Hermitian output", h.is_hermitian());
        }
        "aqm-e" | "aqm-square" | "aqm-sparse" => {
            let code = args.aux_code().expect("aqm mapping");
            let n = code.n_data;
            let enc = linmap::jw(n);
            let h = code.adjusted_transform(&enc, &random_hamiltonian(n, &mut rng))?;
            let images: Vec<(PauliSum, PauliSum)> = (0..n)
                .map(|m| {
                    (
                        code.adjusted_transform(&enc, &single_op(n, m, false)).unwrap(),
                        code.adjusted_transform(&enc, &single_op(n, m, true)).unwrap(),
                    )
                })
                .collect();
            verify_stabilizer_family(&mut outcome, &code.stabilizers(), &h, &images, code.n_total())?;

            if code.n_total() <= 16 {
                let circuit = circuits::synth_init(&code)?;
                let mut init_ok = circuit.respects_connectivity();
                for _ in 0..5 {
                    let phi = StateVector::random(code.n_data, &mut rng);
                    let state = circuit.apply_to(&phi.extend_zeros(code.r));
                    for s in code.stabilizers() {
                        let e = oracle::expectation_string(&s, &state);
                        init_ok &= (e - Complex64::new(1.0, 0.0)).norm() < 1e-10;
                    }
                }
                outcome.record("initialization circuit stabilizes random states", init_ok);
            }
        }
        "vct" => {
            let code = args.vct_code();
            let n = code.n_data;
            let h = code.transform(&random_hamiltonian(n, &mut rng))?;
            let images: Vec<(PauliSum, PauliSum)> = (0..n)
                .map(|m| {
                    (
                        code.transform(&single_op(n, m, false)).unwrap(),
                        code.transform(&single_op(n, m, true)).unwrap(),
                    )
                })
                .collect();
            verify_stabilizer_family(&mut outcome, &code.stabilizers(), &h, &images, code.n_total())?;
        }
        "bksf" => {
            let (l1, l2) = args.dims();
            let g = bksf::build_bksf(l1, l2, args.variant())?;
            let n = g.n_modes();
            let h = g.transform(&random_hamiltonian(n, &mut rng), args.sector())?;
            let stabs = g.loop_stabilizers();
            let mut commute = true;
            for (i, a) in stabs.iter().enumerate() {
                for b in stabs.iter().skip(i + 1) {
                    commute &= a.commutes(b)?;
                }
            }
            outcome.record("loop stabilizers commute pairwise", commute);
            let mut h_ok = h.is_hermitian();
            for s in &stabs {
                for (term, _) in h.iter() {
                    h_ok &= term.commutes(s)?;
                }
            }
            outcome.record(
                "transformed Hamiltonian is Hermitian and stabilizer-compatible",
                h_ok,
            );
            if g.n_qubits() <= 16 {
                // Group-average the all-zero state and read the vertex operators.
                let mut vac = StateVector::zero_state(g.n_qubits());
                for s in &stabs {
                    let sv = oracle::apply_string(s, &vac);
                    for (a, b) in vac.amps.iter_mut().zip(sv.amps.iter()) {
                        *a = (*a + b) * 0.5;
                    }
                }
                vac.normalize();
                let mut b_ok = vac.norm() > 0.9;
                for k in 0..n {
                    let e = oracle::expectation_string(&g.vertex_operator(k)?, &vac);
                    b_ok &= (e - Complex64::new(1.0, 0.0)).norm() < 1e-10;
                }
                outcome.record("vacuum has +1 vertex-operator expectations", b_ok);
            }
        }
        "tree" => {
            let path = args
                .forest
                .as_ref()
                .unwrap_or_else(|| usage_error("tree mapping requires --forest"));
            let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            let forest = linmap::forest_from_json(&value).map_err(|e| anyhow!(e))?;
            let label = linmap::label_forest(&forest)?;
            let enc = linmap::encoder_from_forest(&forest, &label)?;
            let images: Vec<(PauliSum, PauliSum)> = (0..enc.n)
                .map(|m| {
                    (
                        enc.ladder_image(m, false).unwrap(),
                        enc.ladder_image(m, true).unwrap(),
                    )
                })
                .collect();
            let report = oracle::algebra_check(&images, &[], enc.n)?;
            outcome.record(
                &format!("exact anticommutation relations ({} pairs)", report.pairs_checked),
                report.passed(),
            );
        }
        other => usage_error(&format!("no verification suite for {other}")),
    }
    Ok(outcome)
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Hubbard { l, t, eps, u, order, out } => {
            let traversal = match order.as_str() {
                "s-pattern" => Traversal::SPattern,
                "typewriter" => Traversal::Typewriter,
                other => usage_error(&format!("unknown order {other}")),
            };
            let f = hubbard(&HubbardParams::uniform(l, t, eps, u), traversal)?;
            write_output(out.as_ref(), &serde_json::to_string_pretty(&f.to_json())?)?;
            Ok(0)
        }
        Command::Map { mapping, input, out } => {
            mapping.validate();
            let f = read_fermion_sum(input.as_ref())?;
            let h = map_hamiltonian(&mapping, &f)?;
            let (max_w, mean_w) = stats::weight_summary(&h);
            let mut doc = pauli_sum_json(&h);
            doc["max_weight"] = serde_json::json!(max_w);
            doc["mean_weight"] = serde_json::json!(mean_w);
            write_output(out.as_ref(), &serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
        Command::Stats { mapping, hubbard, l, format, out } => {
            mapping.validate();
            let text = run_stats(&mapping, hubbard, l, &format)?;
            write_output(out.as_ref(), &text)?;
            Ok(0)
        }
        Command::Tiling { mapping, format, out } => {
            mapping.validate();
            let text = run_tiling(&mapping, &format)?;
            write_output(out.as_ref(), &text)?;
            Ok(0)
        }
        Command::Circuit { mapping, kind, string, phi, n, format, out } => {
            mapping.validate();
            let text = run_circuit(&mapping, &kind, string.as_deref(), phi, n, &format)?;
            write_output(out.as_ref(), &text)?;
            Ok(0)
        }
        Command::Verify { mapping, seed, out } => {
            mapping.validate();
            println!("verify --mapping {}", mapping.mapping);
            let outcome = run_verify(&mapping, seed)?;
            let doc = serde_json::json!({
                "mapping": mapping.mapping,
                "checks": outcome
                    .checks
                    .iter()
                    .map(|(name, ok)| serde_json::json!({"name": name, "pass": ok}))
                    .collect::<Vec<_>>(),
                "pass": outcome.passed(),
            });
            if let Some(path) = out.as_ref() {
                write_output(Some(path), &serde_json::to_string_pretty(&doc)?)?;
            }
            Ok(if outcome.passed() { 0 } else { 1 })
        }
    }
}
