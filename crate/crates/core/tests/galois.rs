mod common;

use common::{bits_to_mask, is_subset, mask_to_bits, Naive};
use gccl_core::{FormalContext, Operators};
use proptest::prelude::*;

fn context_and_sets() -> impl Strategy<Value = (Naive, u64, u64, u64, u64)> {
    (0usize..=10, 0usize..=10).prop_flat_map(|(g, m)| {
        (
            prop::collection::vec(0..=common::full(m), g),
            0..=common::full(g),
            0..=common::full(g),
            0..=common::full(m),
            0..=common::full(m),
        )
            .prop_map(move |(rows, a1, a2, b1, b2)| {
                let naive = Naive {
                    n_objects: g,
                    n_attributes: m,
                    rows,
                };
                (naive, a1, a2, b1, b2)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn galois_laws((naive, a1, a2, b1, b2) in context_and_sets()) {
        let ctx = naive.to_context();
        let ops = Operators::new(&ctx);
        let (g, m) = (naive.n_objects, naive.n_attributes);
        let oset = |a: u64| ctx.object_set_from_bits(mask_to_bits(a, g)).unwrap();
        let aset = |b: u64| ctx.attribute_set_from_bits(mask_to_bits(b, m)).unwrap();
        let f = |a: u64| bits_to_mask(ops.common_attributes(&oset(a)).unwrap().bits());
        let h = |b: u64| bits_to_mask(ops.common_objects(&aset(b)).unwrap().bits());

        // values agree with the reference
        prop_assert_eq!(f(a1), naive.f(a1));
        prop_assert_eq!(h(b1), naive.h(b1));

        // antitone
        let (lo, hi) = (a1 & a2, a1 | a2);
        prop_assert!(is_subset(f(hi), f(lo)));
        let (blo, bhi) = (b1 & b2, b1 | b2);
        prop_assert!(is_subset(h(bhi), h(blo)));

        // union of objects: equality, which implies the superset form
        prop_assert_eq!(f(a1 | a2), f(a1) & f(a2));
        prop_assert_eq!(h(b1 | b2), h(b1) & h(b2));

        // H(B) = {g | B ⊆ F(g)}
        let expected = (0..g).filter(|&x| is_subset(b1, f(1 << x))).fold(0, |s, x| s | 1 << x);
        prop_assert_eq!(h(b1), expected);

        // Galois laws
        prop_assert!(is_subset(a1, h(f(a1))));
        prop_assert!(is_subset(b1, f(h(b1))));
        prop_assert_eq!(f(h(f(a1))), f(a1));
        prop_assert_eq!(h(f(h(b1))), h(b1));

        // closures: extensive, monotone, idempotent
        let ce = |a: u64| bits_to_mask(ops.closure_extent(&oset(a)).unwrap().bits());
        let ci = |b: u64| bits_to_mask(ops.closure_intent(&aset(b)).unwrap().bits());
        prop_assert!(is_subset(a1, ce(a1)));
        prop_assert!(is_subset(ce(lo), ce(hi)));
        prop_assert_eq!(ce(ce(a1)), ce(a1));
        prop_assert!(is_subset(b1, ci(b1)));
        prop_assert!(is_subset(ci(blo), ci(bhi)));
        prop_assert_eq!(ci(ci(b1)), ci(b1));

        prop_assert!(ops.is_concept(&oset(ce(a1)), &aset(f(a1))).unwrap());
        prop_assert_eq!(ops.is_concept(&oset(a1), &aset(b1)).unwrap(), f(a1) == b1 && h(b1) == a1);
    }
}

#[test]
fn row_and_column_reads_agree() {
    for seed in 0..200 {
        let naive = Naive::seeded(seed, 8, 8);
        let ctx = naive.to_context();
        for g in 0..naive.n_objects {
            for m in 0..naive.n_attributes {
                let in_row = ctx.object_intent(g).unwrap().contains(m);
                let in_column = ctx.attribute_extent(m).unwrap().contains(g);
                assert_eq!(in_row, in_column);
                assert_eq!(in_row, naive.rows[g] >> m & 1 == 1);
            }
        }
    }
}

#[test]
fn context_file_roundtrip() {
    for seed in 0..200 {
        let ctx = Naive::seeded(seed, 12, 10).to_context();
        let text = ctx.serialize();
        let back = FormalContext::parse(&text).unwrap();
        assert_eq!(back, ctx);
        assert_eq!(back.objects(), ctx.objects());
        assert_eq!(back.serialize(), text);
    }
}
