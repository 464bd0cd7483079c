use selfdual_core::codes::{Family, StackedCode};
use selfdual_core::decoder::{ml_oracle, BpVariant, Decoder, DecoderConfig, MlOracle};
use selfdual_core::gf2::BinVector;
use selfdual_core::sim::{self, build_circuit, derive_detector_model, DetectorModel, Mechanism, NoiseKind, NoiseModel};
use selfdual_core::tables;

fn code(n: usize, k: usize, d: usize) -> StackedCode {
    tables::find(Family::Bicycle, n, k, d).unwrap().spec().unwrap().build().unwrap()
}

fn model(kind: NoiseKind, p: f64, rounds: usize) -> DetectorModel {
    let circ = build_circuit(&code(24, 8, 4), NoiseModel::new(kind, p).unwrap(), rounds).unwrap();
    derive_detector_model(&circ).unwrap()
}

fn syndrome(m: &DetectorModel, mechs: &[usize]) -> BinVector {
    let mut s = BinVector::zeros(m.num_detectors);
    for &j in mechs {
        for &d in &m.mechanisms[j].detectors {
            s.flip(d as usize);
        }
    }
    s
}

fn obs_of(m: &DetectorModel, mechs: &[usize]) -> BinVector {
    let mut o = BinVector::zeros(m.num_observables);
    for &j in mechs {
        for &x in &m.mechanisms[j].observables {
            o.flip(x as usize);
        }
    }
    o
}

#[test]
fn zero_syndrome_gives_zero_prediction() {
    let m = model(NoiseKind::CircuitLevel, 0.001, 2);
    let dec = Decoder::new(&m, DecoderConfig::default()).unwrap();
    let out = dec.decode(&BinVector::zeros(m.num_detectors));
    assert!(out.valid);
    assert!(out.observables.is_zero());
    assert!(ml_oracle(&model(NoiseKind::CodeCapacity, 0.01, 1), &BinVector::zeros(24)).unwrap().is_zero());
}

#[test]
fn single_mechanisms_are_recovered() {
    for (kind, rounds) in [(NoiseKind::CodeCapacity, 1), (NoiseKind::Phenomenological, 3)] {
        let m = model(kind, 1e-4, rounds);
        for variant in [BpVariant::MinSum { scale: 0.8 }, BpVariant::ProductSum] {
            let dec = Decoder::new(&m, DecoderConfig { bp_variant: variant, ..Default::default() }).unwrap();
            for j in 0..m.mechanisms.len() {
                let out = dec.decode(&syndrome(&m, &[j]));
                assert!(out.valid);
                assert_eq!(out.observables, obs_of(&m, &[j]), "{kind:?} mechanism {j}");
            }
        }
    }
}

#[test]
fn oracle_matches_hand_enumeration() {
    let mech = |p: f64, d: &[u32], o: &[u32]| Mechanism { p, detectors: d.to_vec(), observables: o.to_vec() };
    let m = DetectorModel {
        num_detectors: 1,
        num_observables: 1,
        mechanisms: vec![mech(0.1, &[0], &[0]), mech(0.08, &[0], &[]), mech(0.3, &[], &[0])],
    };
    // subsets explaining D0: {0}, {1}, {0,2}, {1,2}
    let pr = |a: bool, b: bool, c: bool| {
        let f = |on: bool, p: f64| if on { p } else { 1.0 - p };
        f(a, 0.1) * f(b, 0.08) * f(c, 0.3)
    };
    let flip = pr(true, false, false) + pr(false, true, true);
    let keep = pr(false, true, false) + pr(true, false, true);
    assert!(flip > keep);
    let s = BinVector::from_indices(1, &[0]);
    assert!(ml_oracle(&m, &s).unwrap().get(0));
    // shifting weight onto mechanism 1 changes the answer
    let mut m2 = m.clone();
    m2.mechanisms[1].p = 0.2;
    let flip2 = 0.1 * 0.8 * 0.7 + 0.9 * 0.2 * 0.3;
    let keep2 = 0.9 * 0.2 * 0.7 + 0.1 * 0.8 * 0.3;
    assert!(keep2 > flip2);
    assert!(!ml_oracle(&m2, &s).unwrap().get(0));
}

#[test]
fn oracle_refuses_large_models() {
    let m = model(NoiseKind::CircuitLevel, 0.001, 2);
    assert!(MlOracle::new(&m).is_err());
}

#[test]
fn oracle_dominates_bp_osd_at_code_capacity() {
    for &p in &[0.01, 0.05] {
        let m = model(NoiseKind::CodeCapacity, p, 1);
        let dec = Decoder::new(&m, DecoderConfig::default()).unwrap();
        let oracle = MlOracle::new(&m).unwrap();
        let s = m.sample(3000, 17);
        let (mut f_bp, mut f_ml, mut agree) = (0, 0, 0);
        for r in 0..s.shots() {
            let dets = s.detectors.row(r);
            let truth = s.observables.row(r);
            let a = dec.decode(&dets);
            let b = oracle.decode(&dets).unwrap();
            assert!(a.valid);
            f_bp += (a.observables != truth) as usize;
            f_ml += (b != truth) as usize;
            agree += (a.observables == b) as usize;
        }
        assert!(f_ml <= f_bp, "p={p}: ml {f_ml} > bp {f_bp}");
        if p == 0.01 {
            assert!(agree as f64 >= 0.99 * s.shots() as f64, "agreement {agree}");
        }
    }
}

#[test]
fn decoding_is_deterministic_and_sound() {
    let m = model(NoiseKind::CircuitLevel, 0.01, 2);
    let dec = Decoder::new(&m, DecoderConfig::default()).unwrap();
    let s = m.sample(300, 3);
    for r in 0..s.shots() {
        let dets = s.detectors.row(r);
        let a = dec.decode(&dets);
        assert_eq!(a, dec.decode(&dets));
        assert!(a.valid);
        let e: Vec<usize> = a.error.iter().map(|&v| v as usize).collect();
        assert_eq!(syndrome(&m, &e), dets);
        assert_eq!(obs_of(&m, &e), a.observables);
    }
}

#[test]
fn osd_orders_and_disabled_osd() {
    let m = model(NoiseKind::CircuitLevel, 0.02, 2);
    let s = m.sample(200, 8);
    let plain = Decoder::new(&m, DecoderConfig { osd_order: None, bp_iters: 3, ..Default::default() }).unwrap();
    let osd3 = Decoder::new(&m, DecoderConfig { osd_order: Some(3), ..Default::default() }).unwrap();
    let mut invalid = 0;
    for r in 0..s.shots() {
        let dets = s.detectors.row(r);
        invalid += !plain.decode(&dets).valid as usize;
        assert!(osd3.decode(&dets).valid);
    }
    assert!(invalid > 0);
}

#[test]
fn config_validation() {
    let m = model(NoiseKind::CodeCapacity, 0.01, 1);
    assert!(Decoder::new(&m, DecoderConfig { bp_iters: 0, ..Default::default() }).is_err());
    let bad = DecoderConfig { bp_variant: BpVariant::MinSum { scale: 1.5 }, ..Default::default() };
    assert!(Decoder::new(&m, bad).is_err());
    let json = serde_json::to_string(&DecoderConfig::default()).unwrap();
    assert_eq!(serde_json::from_str::<DecoderConfig>(&json).unwrap(), DecoderConfig::default());
}

#[test]
fn experiment_failure_rate_grows_with_p() {
    use selfdual_core::experiment::memory_experiment;
    let c = code(24, 8, 4);
    let lo = memory_experiment(&c, NoiseModel::new(NoiseKind::CodeCapacity, 0.01).unwrap(), 1, 4000, 1, DecoderConfig::default()).unwrap();
    let hi = memory_experiment(&c, NoiseModel::new(NoiseKind::CodeCapacity, 0.05).unwrap(), 1, 4000, 1, DecoderConfig::default()).unwrap();
    assert!(lo.failures < hi.failures);
    assert_eq!(sim::summarize(lo.shots, lo.failures, 1).unwrap(), lo);
}

fn ks_statistic(a: &[u64], b: &[u64]) -> f64 {
    let mut xs: Vec<u64> = a.iter().chain(b).copied().collect();
    xs.sort();
    xs.dedup();
    let cdf = |v: &[u64], x: u64| v.iter().filter(|&&y| y <= x).count() as f64 / v.len() as f64;
    xs.iter().map(|&x| (cdf(a, x) - cdf(b, x)).abs()).fold(0.0, f64::max)
}

#[test]
fn z_and_x_memory_are_indistinguishable() {
    use selfdual_core::experiment::Experiment;
    use selfdual_core::sim::Basis;
    let c = code(24, 8, 4);
    let noise = NoiseModel::new(NoiseKind::CircuitLevel, 0.004).unwrap();
    let per_batch = |basis| {
        let e = Experiment::new(&c, noise, 2, basis, DecoderConfig::default()).unwrap();
        e.batch_failures(20 * sim::BATCH_SHOTS, 21).into_iter().map(|b| b.1).collect::<Vec<u64>>()
    };
    let (z, x) = (per_batch(Basis::Z), per_batch(Basis::X));
    assert!(z.iter().sum::<u64>() > 0);
    // two-sample KS critical value at alpha = 0.01
    let critical = 1.628 * (2.0 / 20.0f64).sqrt();
    let d = ks_statistic(&z, &x);
    assert!(d < critical, "KS statistic {d} (z {z:?}, x {x:?})");
}
