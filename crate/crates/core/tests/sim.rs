use std::collections::BTreeMap;

use selfdual_core::codes::{Family, StackedCode};
use selfdual_core::sim::{
    self, build_circuit, build_circuit_in, derive_detector_model, edge_coloring, Basis, NoiseKind, NoiseModel,
    NoisyCircuit, Op,
};
use selfdual_core::tables;

fn code(n: usize, k: usize, d: usize) -> StackedCode {
    tables::find(Family::Bicycle, n, k, d).unwrap().spec().unwrap().build().unwrap()
}

fn noise(kind: NoiseKind, p: f64) -> NoiseModel {
    NoiseModel::new(kind, p).unwrap()
}

#[test]
fn noiseless_circuit_has_silent_detectors() {
    let c = code(24, 8, 4);
    for kind in [NoiseKind::CodeCapacity, NoiseKind::Phenomenological, NoiseKind::CircuitLevel] {
        for basis in [Basis::Z, Basis::X] {
            let circ = build_circuit_in(&c, noise(kind, 0.0), 3, basis).unwrap();
            let s = sim::sample(&circ, 10_000, 1);
            assert_eq!(s.shots(), 10_000);
            assert!(s.detectors.is_zero(), "{kind:?} {basis:?}");
            assert!(s.observables.is_zero());
        }
    }
}

#[test]
fn circuit_shape_for_36_4_6() {
    let c = code(36, 4, 6);
    let circ = build_circuit(&c, noise(NoiseKind::CircuitLevel, 1e-3), 6).unwrap();
    assert_eq!(circ.num_data, 36);
    assert_eq!(2 * circ.num_checks, 36);
    assert_eq!(circ.num_qubits(), 72);
    let measures: Vec<usize> =
        circ.ops.iter().filter_map(|op| if let Op::Measure(q) = op { Some(q.len()) } else { None }).collect();
    assert_eq!(measures, vec![36; 7]);
    assert_eq!(circ.observables.len(), 4);
    // six rounds of Z detectors, five of X detectors, one final layer
    assert_eq!(circ.detectors.len(), 18 * (6 + 5 + 1));
}

#[test]
fn code_capacity_forces_one_round() {
    let circ = build_circuit(&code(24, 8, 4), noise(NoiseKind::CodeCapacity, 0.1), 5).unwrap();
    assert_eq!(circ.rounds, 1);
    let noisy: Vec<&Op> =
        circ.ops.iter().filter(|op| matches!(op, Op::Depolarize1(..) | Op::Depolarize2(..) | Op::FlipReadout(..))).collect();
    assert_eq!(noisy.len(), 1);
    assert!(matches!(noisy[0], Op::Depolarize1(q, _) if q.len() == 24));
}

#[test]
fn edge_coloring_is_proper_and_complete() {
    let c = code(36, 4, 6);
    let layers = edge_coloring(&c.h);
    let mut seen = 0;
    for layer in &layers {
        let mut rows: Vec<u32> = layer.iter().map(|e| e.0).collect();
        let mut cols: Vec<u32> = layer.iter().map(|e| e.1).collect();
        rows.sort();
        cols.sort();
        rows.dedup();
        cols.dedup();
        assert_eq!(rows.len(), layer.len());
        assert_eq!(cols.len(), layer.len());
        for &(r, q) in layer {
            assert!(c.h.get(r as usize, q as usize));
        }
        seen += layer.len();
    }
    let nnz: usize = (0..c.h.rows()).map(|r| c.h.row_weight(r)).sum();
    assert_eq!(seen, nnz);
}

#[test]
fn data_z_error_flips_adjacent_x_check_detectors() {
    let c = code(24, 8, 4);
    let circ = build_circuit_in(&c, noise(NoiseKind::CodeCapacity, 0.01), 1, Basis::X).unwrap();
    let model = derive_detector_model(&circ).unwrap();
    assert_eq!(model.mechanisms.len(), 24);
    let mut expected: Vec<Vec<u32>> =
        (0..24).map(|q| (0..c.h.rows()).filter(|&r| c.h.get(r, q)).map(|r| r as u32).collect()).collect();
    let mut got: Vec<Vec<u32>> = model.mechanisms.iter().map(|m| m.detectors.clone()).collect();
    expected.sort();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn readout_flip_hits_two_consecutive_rounds() {
    let c = code(24, 8, 4);
    let r = c.h.rows() as u32;
    let circ = build_circuit(&c, noise(NoiseKind::Phenomenological, 0.01), 3).unwrap();
    let model = derive_detector_model(&circ).unwrap();
    // Z detectors of round 0 are 0..r, round 1 starts at r after round-0 Z
    // detectors only, then r X detectors follow.
    for i in 0..r {
        let pair = vec![i, r + i];
        let m = model.mechanisms.iter().find(|m| m.detectors == pair && m.observables.is_empty());
        assert!(m.is_some(), "row {i}");
        assert!((m.unwrap().p - 0.01).abs() < 1e-12);
    }
}

/// Independent oracle: push each elementary fault through the ops one at a
/// time with a plain per-qubit Pauli tracker.
fn oracle_model(circ: &NoisyCircuit) -> BTreeMap<(Vec<u32>, Vec<u32>), f64> {
    let paulis = [(1u8, 0u8), (1, 1), (0, 1)];
    let mut faults: Vec<(usize, Vec<(u32, u8, u8)>, f64)> = Vec::new();
    for (i, op) in circ.ops.iter().enumerate() {
        match op {
            Op::Depolarize1(qs, p) => {
                let q = 0.5 - 0.5 * (1.0 - 4.0 * p / 3.0).sqrt();
                for &qb in qs {
                    for &(x, z) in &paulis {
                        faults.push((i, vec![(qb, x, z)], q));
                    }
                }
            }
            Op::Depolarize2(pairs, p) => {
                let q = 0.5 - 0.5 * (1.0 - 16.0 * p / 15.0).powf(1.0 / 8.0);
                for &(a, b) in pairs {
                    for pa in 0..4 {
                        for pb in 0..4 {
                            if pa == 0 && pb == 0 {
                                continue;
                            }
                            let mut t = Vec::new();
                            if pa > 0 {
                                t.push((a, paulis[pa - 1].0, paulis[pa - 1].1));
                            }
                            if pb > 0 {
                                t.push((b, paulis[pb - 1].0, paulis[pb - 1].1));
                            }
                            faults.push((i, t, q));
                        }
                    }
                }
            }
            Op::FlipReadout(qs, p) => {
                for &qb in qs {
                    faults.push((i, vec![(qb, 1, 0)], *p));
                }
            }
            _ => {}
        }
    }
    let nq = circ.num_qubits();
    let mut out: BTreeMap<(Vec<u32>, Vec<u32>), f64> = BTreeMap::new();
    for (at, terms, p) in faults {
        let mut x = vec![0u8; nq];
        let mut z = vec![0u8; nq];
        let mut rec = Vec::new();
        for (i, op) in circ.ops.iter().enumerate().skip(at) {
            if i > at {
                match op {
                    Op::Reset(qs) => qs.iter().for_each(|&q| {
                        x[q as usize] = 0;
                        z[q as usize] = 0;
                    }),
                    Op::H(qs) => qs.iter().for_each(|&q| std::mem::swap(&mut x[q as usize], &mut z[q as usize])),
                    Op::Cx(ps) => ps.iter().for_each(|&(c, t)| {
                        x[t as usize] ^= x[c as usize];
                        z[c as usize] ^= z[t as usize];
                    }),
                    Op::Measure(qs) => rec.extend(qs.iter().map(|&q| x[q as usize])),
                    _ => {}
                }
            } else {
                // measurements before the fault
                for op in &circ.ops[..=at] {
                    if let Op::Measure(qs) = op {
                        rec.extend(std::iter::repeat(0).take(qs.len()));
                    }
                }
                for &(q, a, b) in &terms {
                    x[q as usize] ^= a;
                    z[q as usize] ^= b;
                }
            }
        }
        let parity = |g: &Vec<u32>| g.iter().fold(0u8, |acc, &m| acc ^ rec[m as usize]);
        let dets: Vec<u32> = (0..circ.detectors.len() as u32).filter(|&d| parity(&circ.detectors[d as usize]) == 1).collect();
        let obs: Vec<u32> =
            (0..circ.observables.len() as u32).filter(|&o| parity(&circ.observables[o as usize]) == 1).collect();
        if dets.is_empty() && obs.is_empty() {
            continue;
        }
        let e = out.entry((dets, obs)).or_insert(0.0);
        *e = *e * (1.0 - p) + p * (1.0 - *e);
    }
    out
}

#[test]
fn detector_model_matches_per_fault_oracle() {
    let c = code(24, 8, 4);
    let circ = build_circuit(&c, noise(NoiseKind::CircuitLevel, 0.003).with_idle(true), 2).unwrap();
    let model = derive_detector_model(&circ).unwrap();
    let oracle = oracle_model(&circ);
    assert_eq!(model.mechanisms.len(), oracle.len());
    for m in &model.mechanisms {
        let p = oracle[&(m.detectors.clone(), m.observables.clone())];
        assert!((p - m.p).abs() < 1e-12 * p.max(1e-300) + 1e-15, "{} vs {p}", m.p);
        assert!(m.p > 0.0 && m.p <= 0.5);
        assert!(m.detectors.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn two_qubit_depolarizing_is_uniform() {
    // qubits 0,1 are hit; 2..6 receive copies of x0, z0, x1, z1
    let circ = NoisyCircuit {
        ops: vec![
            Op::Reset((0..6).collect()),
            Op::Depolarize2(vec![(0, 1)], 1.0),
            Op::Cx(vec![(0, 2), (1, 4)]),
            Op::H(vec![0, 1]),
            Op::Cx(vec![(0, 3), (1, 5)]),
            Op::Measure(vec![2, 3, 4, 5]),
        ],
        noise: noise(NoiseKind::CircuitLevel, 1.0),
        basis: Basis::Z,
        rounds: 1,
        num_data: 6,
        num_checks: 0,
        num_measurements: 4,
        detectors: (0..4).map(|i| vec![i]).collect(),
        observables: Vec::new(),
        memory_type: vec![true; 4],
        schedule: Vec::new(),
    };
    let shots = 100_000;
    let s = sim::sample(&circ, shots, 5);
    let mut counts = [0usize; 16];
    for r in 0..shots {
        let idx = (0..4).fold(0, |a, b| a | (s.detectors.get(r, b) as usize) << b);
        counts[idx] += 1;
    }
    assert_eq!(counts[0], 0);
    let f = 1.0 / 15.0;
    let sigma = (f * (1.0 - f) / shots as f64).sqrt();
    for (i, &c) in counts.iter().enumerate().skip(1) {
        let rate = c as f64 / shots as f64;
        assert!((rate - f).abs() < 3.0 * sigma, "pauli {i}: {rate}");
    }
}

/// Counts detectors outside `k` sigma of the expected marginals.
fn outliers(expected: &[f64], s: &sim::Samples, k: f64) -> (usize, f64) {
    let shots = s.shots() as f64;
    let mut bad = 0;
    let mut worst = 0.0f64;
    for (d, &q) in expected.iter().enumerate() {
        let hits = (0..s.shots()).filter(|&r| s.detectors.get(r, d)).count() as f64;
        let sigma = (q * (1.0 - q) / shots).sqrt().max(1.0 / shots);
        let z = (hits / shots - q).abs() / sigma;
        worst = worst.max(z);
        if z > k {
            bad += 1;
        }
    }
    (bad, worst)
}

#[test]
fn detector_marginals_match_model() {
    let c = code(24, 8, 4);
    let circ = build_circuit(&c, noise(NoiseKind::CircuitLevel, 0.01), 2).unwrap();
    let model = derive_detector_model(&circ).unwrap();
    let expected = model.detector_marginals();
    let direct = sim::sample(&circ, 20_000, 9);
    let via_model = model.sample(20_000, 9);
    for s in [&direct, &via_model] {
        // about 0.3% of detectors fall outside 3 sigma by chance
        let (bad, worst) = outliers(&expected, s, 3.0);
        assert!(bad <= 2, "{bad} detectors beyond 3 sigma");
        assert!(worst < 4.5, "worst z {worst}");
    }
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let c = code(24, 8, 4);
    let circ = build_circuit(&c, noise(NoiseKind::CircuitLevel, 0.01), 2).unwrap();
    assert_eq!(sim::sample(&circ, 3000, 4), sim::sample(&circ, 3000, 4));
    assert_ne!(sim::sample(&circ, 3000, 4), sim::sample(&circ, 3000, 5));
}

#[test]
fn text_and_binary_round_trips() {
    let c = code(24, 8, 4);
    let circ = build_circuit(&c, noise(NoiseKind::Phenomenological, 0.02), 2).unwrap();
    let model = derive_detector_model(&circ).unwrap();
    let back = sim::DetectorModel::from_text(&model.to_text()).unwrap();
    assert_eq!(back, model);
    let s = sim::sample(&circ, 777, 2);
    let mut buf = Vec::new();
    sim::write_samples(&mut buf, &s).unwrap();
    assert_eq!(&buf[..8], b"SDSMPL01");
    assert_eq!(sim::read_samples(&buf[..]).unwrap(), s);
}

#[test]
fn malformed_model_text_is_rejected() {
    for text in ["detectors 2\nobservables 1\nerror(0.7) D0\n", "error(0.1) D0\n", "detectors 2\nobservables 1\nerror(0.1) D2\n"] {
        assert!(sim::DetectorModel::from_text(text).is_err(), "{text}");
    }
}

#[test]
fn summarize_formulas() {
    let r = sim::summarize(100, 0, 3).unwrap();
    assert_eq!((r.p_l, r.lfr, r.sigma_lfr), (0.0, 0.0, 0.0));
    let r = sim::summarize(10, 5, 1).unwrap();
    assert_eq!(r.lfr, 0.5);
    let r = sim::summarize(10_000, 1000, 10).unwrap();
    // independent evaluation through logarithms
    let lfr = 1.0 - (0.9f64.ln() / 10.0).exp();
    let sigma = (0.1 * (0.9f64.ln() * (0.1 - 1.0)).exp() * (0.1 * 0.9 / 10_000.0f64).sqrt()).abs();
    assert!((r.lfr - lfr).abs() < 1e-15);
    assert!((r.sigma_lfr - sigma).abs() < 1e-15, "{} {sigma}", r.sigma_lfr);
    assert!(sim::summarize(0, 0, 1).is_err());
    assert!(sim::summarize(1, 2, 1).is_err());
}

#[test]
fn pseudothreshold_examples() {
    let grid = [1e-3, 2e-3, 5e-3, 1e-2];
    let same: Vec<(f64, f64)> = grid.iter().map(|&p| (p, sim::grey_line(p, 4))).collect();
    assert_eq!(sim::pseudothreshold_crossings(&same, 4)[0], 1e-3);
    let star = 3.3e-3;
    let scaled: Vec<(f64, f64)> = grid.iter().map(|&p| (p, sim::grey_line(p, 4) * p / star)).collect();
    let x = sim::pseudothreshold_crossings(&scaled, 4);
    assert_eq!(x.len(), 1);
    assert!((x[0] - star).abs() < 1e-12 * star);
    let below: Vec<(f64, f64)> = grid.iter().map(|&p| (p, sim::grey_line(p, 4) / 10.0)).collect();
    assert!(sim::pseudothreshold_crossings(&below, 4).is_empty());
    assert!((sim::grey_line(1e-3, 4) - 3.994e-3).abs() < 1e-6);
}

#[test]
fn invalid_noise_is_rejected() {
    assert!(NoiseModel::new(NoiseKind::CircuitLevel, 1.5).is_err());
    assert!(NoiseModel::new(NoiseKind::CircuitLevel, -0.1).is_err());
    assert!(build_circuit(&code(24, 8, 4), noise(NoiseKind::CircuitLevel, 0.1), 0).is_err());
}
