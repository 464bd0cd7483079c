use selfdual_core::codes::Family;
use selfdual_core::distance::{self, ExactOutcome, LogicalSpace};
use selfdual_core::tables;

fn exact_d(family: Family, n: usize, k: usize, d: usize) -> usize {
    let entry = tables::find(family, n, k, d).expect("fixture");
    let code = entry.spec().unwrap().build().unwrap();
    match distance::distance_exact(&code, n).unwrap() {
        ExactOutcome::Found(r) => {
            assert!(r.exact);
            assert_eq!(r.witness.weight(), r.d_upper);
            r.d_upper
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn bicycle_24_8_4() {
    assert_eq!(exact_d(Family::Bicycle, 24, 8, 4), 4);
}

#[test]
fn bicycle_36_4_6() {
    assert_eq!(exact_d(Family::Bicycle, 36, 4, 6), 6);
}

#[test]
fn bb_32_12_4() {
    assert_eq!(exact_d(Family::Bb, 32, 12, 4), 4);
}

#[test]
fn not_found_below_small_cap() {
    let code = tables::find(Family::Bicycle, 36, 4, 6).unwrap().spec().unwrap().build().unwrap();
    assert_eq!(distance::distance_exact(&code, 5).unwrap(), ExactOutcome::NotFoundBelow(5));
}

#[test]
fn randomized_never_beats_exact_and_is_monotone() {
    let code = tables::find(Family::Bicycle, 36, 4, 6).unwrap().spec().unwrap().build().unwrap();
    let mut last = usize::MAX;
    for iters in [1, 8, 40, 200] {
        let r = distance::distance_randomized(&code, iters, 11).unwrap();
        assert!(!r.exact);
        assert!(r.d_upper >= 6);
        assert!(r.d_upper <= last);
        last = r.d_upper;
    }
    assert_eq!(last, 6);
}

#[test]
fn seeded_with_optimum_returns_it() {
    let code = tables::find(Family::Bicycle, 24, 8, 4).unwrap().spec().unwrap().build().unwrap();
    let ExactOutcome::Found(exact) = distance::distance_exact(&code, 24).unwrap() else { panic!() };
    let space = LogicalSpace::of_code(&code).unwrap();
    let r = distance::distance_randomized_from(&space, 1, 3, Some(exact.witness.clone())).unwrap();
    assert_eq!(r.d_upper, exact.d_upper);
}

#[test]
fn x_and_z_paths_agree() {
    let code = tables::find(Family::Bicycle, 24, 8, 4).unwrap().spec().unwrap().build().unwrap();
    let hx = code.h.clone();
    let hz = code.h.clone();
    let z = LogicalSpace::new(&hx, &hz).unwrap();
    let x = LogicalSpace::new(&hz, &hx).unwrap();
    let dz = distance::distance_exact_with(&z, 24, u64::MAX).unwrap();
    let dx = distance::distance_exact_with(&x, 24, u64::MAX).unwrap();
    assert_eq!(dz, dx);
}

#[test]
fn bb_100_12_8_upper_bound() {
    let code = tables::find(Family::Bb, 100, 12, 8).unwrap().spec().unwrap().build().unwrap();
    let r = distance::distance_randomized(&code, 2000, 1).unwrap();
    assert_eq!(r.d_upper, 8);
}
