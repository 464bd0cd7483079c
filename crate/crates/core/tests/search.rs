use selfdual_core::algebra::{LatticeSpec, PolySpec};
use selfdual_core::codes::{CodeSpec, Family, Parity};
use selfdual_core::search::{
    self, enumerate_candidates, DistanceBudget, ParityFilter, SearchSpace, SearchState, Span,
};
use selfdual_core::tables;

fn small_bb(budget: u64) -> SearchSpace {
    let mut s = SearchSpace::new(Family::Bb, Span::new(3, 4), Span::new(2, 3));
    s.budget = budget;
    s.seed = 5;
    s
}

#[test]
fn bicycle_l3_raw_count() {
    let mut s = SearchSpace::new(Family::Bicycle, Span::single(3), Span::single(1));
    s.budget = 100;
    assert_eq!(s.raw_count(), 9);
    s.reduce_symmetry = false;
    assert_eq!(enumerate_candidates(&s).unwrap().count(), 9);
    s.reduce_symmetry = true;
    let reduced = enumerate_candidates(&s).unwrap().count();
    assert!(reduced >= 1 && reduced < 9, "{reduced}");
}

#[test]
fn twisted_stream_contains_table_spec() {
    let lat = LatticeSpec::twisted(2, 14, 6);
    let target = CodeSpec {
        family: Family::TwistedBb,
        lattice: lat,
        a: PolySpec::parse(&lat, &["y", "xy"]).unwrap().0,
        b: PolySpec::parse(&lat, &["1", "y"]).unwrap().0,
        name: None,
    };
    let mut s = SearchSpace::new(Family::TwistedBb, Span::single(2), Span::single(14));
    s.gamma = Span::single(6);
    s.reduce_symmetry = false;
    s.budget = u64::MAX;
    let same = |c: &CodeSpec| {
        let mut a = c.a.terms().to_vec();
        let mut b = c.b.terms().to_vec();
        a.sort();
        b.sort();
        let mut ta = target.a.terms().to_vec();
        let mut tb = target.b.terms().to_vec();
        ta.sort();
        tb.sort();
        c.lattice == lat && a == ta && b == tb
    };
    assert!(enumerate_candidates(&s).unwrap().any(|c| same(&c)));
}

#[test]
fn reflection_stream_is_stackable() {
    let mut s = SearchSpace::new(Family::Reflection, Span::new(3, 4), Span::new(2, 3));
    s.budget = 40;
    let specs: Vec<_> = enumerate_candidates(&s).unwrap().collect();
    assert!(!specs.is_empty());
    for spec in specs {
        let code = spec.build().unwrap();
        assert!(code.h.matmul(&code.h.transpose()).unwrap().is_zero());
    }
}

#[test]
fn pinned_table_one_spec() {
    let spec = tables::find(Family::Bicycle, 36, 4, 6).unwrap().spec().unwrap();
    let hits = search::search(&SearchSpace::pinned(spec), &DistanceBudget::default()).unwrap();
    assert_eq!(hits.len(), 1);
    let h = &hits[0];
    assert_eq!((h.k, h.d_upper, h.exact), (4, 6, true));
    assert_eq!(h.merit.value(), 4.0);
}

#[test]
fn pinned_reflection_64_16() {
    let spec = tables::find(Family::Reflection, 64, 16, 8).unwrap().spec().unwrap();
    let hits = search::search(&SearchSpace::pinned(spec), &DistanceBudget::default()).unwrap();
    let h = &hits[0];
    assert_eq!((h.n, h.k), (64, 16));
    assert_eq!(h.merit, search::Merit::new(h.n, h.k, h.d_upper));
}

#[test]
fn empty_range_gives_nothing() {
    let s = SearchSpace::new(Family::Bb, Span::new(5, 4), Span::new(2, 3));
    assert!(search::search(&s, &DistanceBudget::default()).unwrap().is_empty());
    assert!(search::search(&small_bb(0), &DistanceBudget::default()).unwrap().is_empty());
}

#[test]
fn hits_round_trip_and_honor_parity() {
    let mut s = small_bb(60);
    s.parity = ParityFilter::EvenOnly;
    let hits = search::search(&s, &DistanceBudget::default()).unwrap();
    assert!(!hits.is_empty());
    for h in &hits {
        assert_eq!(h.parity, Parity::Even);
        let json = serde_json::to_string(&h.spec).unwrap();
        let code = serde_json::from_str::<CodeSpec>(&json).unwrap().build().unwrap();
        assert_eq!((code.n, code.k, code.parity), (h.n, h.k, h.parity));
    }
    for w in hits.windows(2) {
        assert!(w[0].merit >= w[1].merit);
    }
}

#[test]
fn larger_budget_keeps_undominated_hits() {
    let budget = DistanceBudget::default();
    let small = search::search(&small_bb(40), &budget).unwrap();
    let large = search::search(&small_bb(120), &budget).unwrap();
    for h in &small {
        assert!(large.iter().any(|g| g.dominates(h)), "{h:?}");
    }
}

#[test]
fn resume_matches_single_run() {
    let budget = DistanceBudget::default();
    let space = small_bb(150);
    let full = search::search(&space, &budget).unwrap();

    let mut state = SearchState::default();
    let mut partial = space.clone();
    partial.budget = 64;
    search::search_resume(&partial, &budget, &mut state, |_| {}, |_| Ok(())).unwrap();
    let json = serde_json::to_string(&state).unwrap();
    let mut state: SearchState = serde_json::from_str(&json).unwrap();
    search::search_resume(&space, &budget, &mut state, |_| {}, |_| Ok(())).unwrap();
    let mut resumed = state.frontier;
    search::rank_hits(&mut resumed);
    assert_eq!(resumed, full);
}
