mod common;

use common::{space_masks, Naive};
use gccl_core::space::{granular_concepts, object_granule};
use gccl_core::{ConceptSpace, Operators};

const SEEDS: u64 = 300;

#[test]
fn enumeration_matches_oracle() {
    for seed in 0..SEEDS {
        let naive = Naive::seeded(seed, 12, 10);
        let ctx = naive.to_context();
        let space = ConceptSpace::enumerate(&ctx);
        assert_eq!(space_masks(&space), naive.concepts(), "seed {seed}");
        assert_eq!(space.len(), naive.concepts().len());
        assert_eq!(ConceptSpace::enumerate_parallel(&ctx), space, "seed {seed}");
        let smaller = naive.n_objects.min(naive.n_attributes);
        assert!(space.len() <= 1 << smaller);
    }
}

#[test]
fn canonical_order_and_boundaries() {
    for seed in 0..SEEDS {
        let ctx = Naive::seeded(seed, 12, 10).to_context();
        let space = ConceptSpace::enumerate(&ctx);
        let intents: Vec<_> = space.raw_iter().map(|(_, i)| i.to_bit_string()).collect();
        let mut sorted = intents.clone();
        sorted.sort();
        assert_eq!(intents, sorted);
        assert_eq!(space.top().extent(), &ctx.all_objects());
        assert_eq!(space.bottom().intent(), &ctx.all_attributes());
    }
}

#[test]
fn concepts_are_joins_of_object_granules() {
    for seed in 0..SEEDS {
        let ctx = Naive::seeded(seed, 12, 10).to_context();
        let ops = Operators::new(&ctx);
        let space = ConceptSpace::enumerate(&ctx);
        for concept in space.iter() {
            let mut objects = concept.extent().iter();
            let Some(first) = objects.next() else {
                continue;
            };
            let joined = objects.fold(object_granule(&ctx, first).unwrap(), |acc, g| {
                ops.join(&acc, &object_granule(&ctx, g).unwrap()).unwrap()
            });
            assert_eq!(joined, concept, "seed {seed}");
        }
        for granule in granular_concepts(&ctx) {
            assert!(ops.is_concept(granule.extent(), granule.intent()).unwrap());
            assert!(space.contains(&granule).unwrap());
        }
    }
}

#[test]
fn lattice_laws() {
    for seed in 0..60 {
        let ctx = Naive::seeded(seed, 7, 6).to_context();
        let ops = Operators::new(&ctx);
        let space = ConceptSpace::enumerate(&ctx);
        let concepts: Vec<_> = space.iter().collect();
        for x in &concepts {
            for y in &concepts {
                let meet = ops.meet(x, y).unwrap();
                let join = ops.join(x, y).unwrap();
                assert!(space.contains(&meet).unwrap() && space.contains(&join).unwrap());
                assert_eq!(meet, ops.meet(y, x).unwrap());
                assert_eq!(join, ops.join(y, x).unwrap());
                assert_eq!(ops.meet(x, &join).unwrap(), *x);
                assert_eq!(ops.join(x, &meet).unwrap(), *x);
                assert_eq!(x.leq(y).unwrap(), y.intent().is_subset(x.intent()).unwrap());
                assert_eq!(x.leq(y).unwrap(), meet == *x);
                for z in &concepts {
                    assert_eq!(
                        ops.meet(&meet, z).unwrap(),
                        ops.meet(x, &ops.meet(y, z).unwrap()).unwrap()
                    );
                    assert_eq!(
                        ops.join(&join, z).unwrap(),
                        ops.join(x, &ops.join(y, z).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn serialization_roundtrip() {
    for seed in 0..SEEDS {
        let ctx = Naive::seeded(seed, 12, 10).to_context();
        let space = ConceptSpace::enumerate(&ctx);
        let text = space.serialize();
        let back = ConceptSpace::parse(&text, &ctx).unwrap();
        assert_eq!(back, space);
        assert_eq!(back.serialize(), text);
    }
}
