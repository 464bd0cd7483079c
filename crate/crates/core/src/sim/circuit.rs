//! Syndrome-extraction circuits for memory experiments.
//!
//! Qubit layout: data qubits `0..n`, then one X-check ancilla per row of `H`
//! (`n..n+r`), then one Z-check ancilla per row (`n+r..n+2r`).
//!
//! Each round resets the ancillas, measures every X check (Hadamard, CNOT
//! fan-out from the ancilla, Hadamard), then every Z check (CNOTs from data
//! into the ancilla), and measures all ancillas, X ancillas first. The
//! experiment ends with a transversal data measurement in the memory basis.

use serde::{Deserialize, Serialize};

use crate::codes::StackedCode;
use crate::error::{Error, Result};
use crate::gf2::BinMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    CodeCapacity,
    Phenomenological,
    CircuitLevel,
}

impl NoiseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseKind::CodeCapacity => "code-capacity",
            NoiseKind::Phenomenological => "phenomenological",
            NoiseKind::CircuitLevel => "circuit-level",
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "code-capacity" => Ok(NoiseKind::CodeCapacity),
            "phenomenological" => Ok(NoiseKind::Phenomenological),
            "circuit-level" => Ok(NoiseKind::CircuitLevel),
            _ => Err(Error::InvalidArgument(format!("unknown noise kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
    /// Depolarize qubits left idle during a CNOT layer (circuit level only).
    #[serde(default)]
    pub idle: bool,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("p = {p} is outside [0, 1]")));
        }
        Ok(NoiseModel { kind, p, idle: false })
    }

    pub fn with_idle(mut self, idle: bool) -> Self {
        self.idle = idle;
        self
    }
}

/// Memory basis: which logical operators are preserved and read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Basis {
    #[default]
    Z,
    X,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    /// Reset to |0>.
    Reset(Vec<u32>),
    H(Vec<u32>),
    /// `(control, target)` pairs acting on disjoint qubits.
    Cx(Vec<(u32, u32)>),
    /// Z-basis measurement; appends one record per qubit.
    Measure(Vec<u32>),
    Depolarize1(Vec<u32>, f64),
    Depolarize2(Vec<(u32, u32)>, f64),
    /// X flip just before a measurement.
    FlipReadout(Vec<u32>, f64),
}

#[derive(Debug, Clone)]
pub struct NoisyCircuit {
    pub ops: Vec<Op>,
    pub noise: NoiseModel,
    pub basis: Basis,
    pub rounds: usize,
    pub num_data: usize,
    /// Rows of `H`; there are this many X ancillas and as many Z ancillas.
    pub num_checks: usize,
    pub num_measurements: usize,
    /// Each detector is the parity of these measurement records.
    pub detectors: Vec<Vec<u32>>,
    pub observables: Vec<Vec<u32>>,
    /// Whether each detector compares checks of the memory basis type (or the
    /// final readout); the others only see errors that commute with the
    /// observables.
    pub memory_type: Vec<bool>,
    /// CNOT layers as `(check row, data qubit)` edges; X and Z checks reuse it.
    pub schedule: Vec<Vec<(u32, u32)>>,
}

impl NoisyCircuit {
    pub fn num_qubits(&self) -> usize {
        self.num_data + 2 * self.num_checks
    }

    pub fn x_ancilla(&self, row: usize) -> u32 {
        (self.num_data + row) as u32
    }

    pub fn z_ancilla(&self, row: usize) -> u32 {
        (self.num_data + self.num_checks + row) as u32
    }
}

/// Greedy edge colouring of the Tanner graph of `h`, edges visited row by
/// row. Each layer touches every check and every data qubit at most once.
pub fn edge_coloring(h: &BinMatrix) -> Vec<Vec<(u32, u32)>> {
    let mut layers: Vec<Vec<(u32, u32)>> = Vec::new();
    let mut row_used: Vec<Vec<bool>> = vec![Vec::new(); h.rows()];
    let mut col_used: Vec<Vec<bool>> = vec![Vec::new(); h.cols()];
    for r in 0..h.rows() {
        for c in h.row_support(r) {
            let mut color = 0;
            while row_used[r].get(color).copied().unwrap_or(false) || col_used[c].get(color).copied().unwrap_or(false)
            {
                color += 1;
            }
            for used in [&mut row_used[r], &mut col_used[c]] {
                if used.len() <= color {
                    used.resize(color + 1, false);
                }
                used[color] = true;
            }
            if layers.len() <= color {
                layers.resize(color + 1, Vec::new());
            }
            layers[color].push((r as u32, c as u32));
        }
    }
    layers
}

/// Builds the memory experiment. Code-capacity noise always uses one round.
pub fn build_circuit(code: &StackedCode, noise: NoiseModel, rounds: usize) -> Result<NoisyCircuit> {
    build_circuit_in(code, noise, rounds, Basis::Z)
}

pub fn build_circuit_in(code: &StackedCode, noise: NoiseModel, rounds: usize, basis: Basis) -> Result<NoisyCircuit> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    NoiseModel::new(noise.kind, noise.p)?;
    let rounds = if noise.kind == NoiseKind::CodeCapacity { 1 } else { rounds };
    let n = code.n;
    let r = code.h.rows();
    let schedule = edge_coloring(&code.h);
    let mut c = NoisyCircuit {
        ops: Vec::new(),
        noise,
        basis,
        rounds,
        num_data: n,
        num_checks: r,
        num_measurements: 0,
        detectors: Vec::new(),
        observables: Vec::new(),
        memory_type: Vec::new(),
        schedule,
    };
    let p = noise.p;
    let circuit_level = noise.kind == NoiseKind::CircuitLevel;
    let data: Vec<u32> = (0..n as u32).collect();
    let xanc: Vec<u32> = (0..r).map(|i| c.x_ancilla(i)).collect();
    let zanc: Vec<u32> = (0..r).map(|i| c.z_ancilla(i)).collect();
    let ancillas: Vec<u32> = xanc.iter().chain(&zanc).copied().collect();
    let mut ops = Vec::new();

    // State preparation; the basis change for X memory is treated as part of
    // a noisy reset rather than as a separate noisy gate.
    ops.push(Op::Reset(data.clone()));
    if basis == Basis::X {
        ops.push(Op::H(data.clone()));
    }
    if noise.kind != NoiseKind::Phenomenological {
        ops.push(Op::Depolarize1(data.clone(), p));
    }

    let layer_noise = |ops: &mut Vec<Op>, pairs: &[(u32, u32)]| {
        if !circuit_level {
            return;
        }
        ops.push(Op::Depolarize2(pairs.to_vec(), p));
        if noise.idle {
            let mut busy = vec![false; n + 2 * r];
            for &(a, b) in pairs {
                busy[a as usize] = true;
                busy[b as usize] = true;
            }
            let idle: Vec<u32> = (0..(n + 2 * r) as u32).filter(|&q| !busy[q as usize]).collect();
            if !idle.is_empty() {
                ops.push(Op::Depolarize1(idle, p));
            }
        }
    };

    for _ in 0..rounds {
        if noise.kind == NoiseKind::Phenomenological {
            ops.push(Op::Depolarize1(data.clone(), p));
        }
        ops.push(Op::Reset(ancillas.clone()));
        if circuit_level {
            ops.push(Op::Depolarize1(ancillas.clone(), p));
        }
        ops.push(Op::H(xanc.clone()));
        if circuit_level {
            ops.push(Op::Depolarize1(xanc.clone(), p));
        }
        for layer in &c.schedule {
            let pairs: Vec<(u32, u32)> = layer.iter().map(|&(row, q)| (xanc[row as usize], q)).collect();
            ops.push(Op::Cx(pairs.clone()));
            layer_noise(&mut ops, &pairs);
        }
        ops.push(Op::H(xanc.clone()));
        if circuit_level {
            ops.push(Op::Depolarize1(xanc.clone(), p));
        }
        for layer in &c.schedule {
            let pairs: Vec<(u32, u32)> = layer.iter().map(|&(row, q)| (q, zanc[row as usize])).collect();
            ops.push(Op::Cx(pairs.clone()));
            layer_noise(&mut ops, &pairs);
        }
        if noise.kind != NoiseKind::CodeCapacity {
            ops.push(Op::FlipReadout(ancillas.clone(), p));
        }
        ops.push(Op::Measure(ancillas.clone()));
    }
    if basis == Basis::X {
        ops.push(Op::H(data.clone()));
    }
    ops.push(Op::Measure(data));

    // Drop noise ops that can never fire so p = 0 circuits stay clean.
    ops.retain(|op| match op {
        Op::Depolarize1(_, q) | Op::Depolarize2(_, q) | Op::FlipReadout(_, q) => *q > 0.0,
        _ => true,
    });
    c.ops = ops;

    let per_round = 2 * r;
    c.num_measurements = rounds * per_round + n;
    let x_rec = |t: usize, i: usize| (t * per_round + i) as u32;
    let z_rec = |t: usize, i: usize| (t * per_round + r + i) as u32;
    let data_rec = |q: usize| (rounds * per_round + q) as u32;
    // "fixed" checks are deterministic from the first round in this basis.
    let (fixed, random): (&dyn Fn(usize, usize) -> u32, &dyn Fn(usize, usize) -> u32) = match basis {
        Basis::Z => (&z_rec, &x_rec),
        Basis::X => (&x_rec, &z_rec),
    };
    for t in 0..rounds {
        for i in 0..r {
            c.detectors.push(if t == 0 { vec![fixed(0, i)] } else { vec![fixed(t - 1, i), fixed(t, i)] });
            c.memory_type.push(true);
        }
        if t > 0 {
            for i in 0..r {
                c.detectors.push(vec![random(t - 1, i), random(t, i)]);
                c.memory_type.push(false);
            }
        }
    }
    for i in 0..r {
        let mut det: Vec<u32> = code.h.row_support(i).into_iter().map(data_rec).collect();
        det.push(fixed(rounds - 1, i));
        c.detectors.push(det);
        c.memory_type.push(true);
    }
    c.observables = code.logicals.iter().map(|l| l.ones_iter().map(data_rec).collect()).collect();
    Ok(c)
}
