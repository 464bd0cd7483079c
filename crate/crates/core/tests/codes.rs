use proptest::prelude::*;
use selfdual_core::algebra::{LatticeSpec, PolySpec};
use selfdual_core::codes::{logical_basis, Site};
use selfdual_core::{CodeSpec, Family, StackedCode};

fn bb(l: usize, m: usize, a: &[(usize, usize)], b: &[(usize, usize)]) -> Option<CodeSpec> {
    let lattice = LatticeSpec::periodic(l, m);
    let terms = |t: &[(usize, usize)]| t.iter().map(|(x, y)| format!("x{x}y{y}")).collect::<Vec<_>>();
    let a = PolySpec::parse(&lattice, &terms(a)).ok()?.0;
    let b = PolySpec::parse(&lattice, &terms(b)).ok()?.0;
    Some(CodeSpec { family: Family::Bb, lattice, a, b, name: None })
}

fn shift_x(code: &StackedCode, lattice: &LatticeSpec) -> Vec<usize> {
    (0..code.n)
        .map(|c| {
            let s = Site::from_column(lattice, c);
            Site { jx: (s.jx + 1) % lattice.l, ..s }.column(lattice)
        })
        .collect()
}

fn terms() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::btree_set((0..6usize, 0..4usize), 1..=3).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_codes_are_self_orthogonal(l in 2..6usize, m in 2..4usize, a in terms(), b in terms()) {
        let a: Vec<_> = a.into_iter().map(|(x, y)| (x % l, y % m)).collect();
        let b: Vec<_> = b.into_iter().map(|(x, y)| (x % l, y % m)).collect();
        let Some(spec) = bb(l, m, &a, &b) else { return Ok(()) };
        let code = spec.build().unwrap();
        prop_assert_eq!(code.n, 4 * l * m);
        prop_assert!(code.h.matmul(&code.h.transpose()).unwrap().is_zero());
        prop_assert_eq!(code.k, code.n - 2 * code.h.rank());
        prop_assert!(code.max_check_weight() <= 2 * (spec.a.terms().len() + spec.b.terms().len()));
        let logicals = logical_basis(&code);
        prop_assert_eq!(logicals.len(), code.k);
        for v in &logicals {
            prop_assert!(code.is_logical(v).unwrap());
        }
    }

    #[test]
    fn rowspace_is_translation_invariant(l in 2..6usize, m in 2..4usize, a in terms(), b in terms()) {
        let a: Vec<_> = a.into_iter().map(|(x, y)| (x % l, y % m)).collect();
        let b: Vec<_> = b.into_iter().map(|(x, y)| (x % l, y % m)).collect();
        let Some(spec) = bb(l, m, &a, &b) else { return Ok(()) };
        let code = spec.build().unwrap();
        let perm = shift_x(&code, &spec.lattice);
        let rows = code.rowspace();
        for r in 0..code.h.rows() {
            prop_assert!(rows.contains(&code.h.row(r).permuted(&perm)));
        }
    }
}

#[test]
fn generated_specs_build() {
    let spec = bb(3, 3, &[(0, 0), (1, 0), (0, 1)], &[(0, 0), (2, 0), (0, 2)]).unwrap();
    let code = spec.build().unwrap();
    assert_eq!(code.n, 36);
    assert!(code.k > 0);
}
