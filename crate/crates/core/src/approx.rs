//! Learning concepts from clues.
//!
//! A closed clue yields its concept. Any other clue yields an upper
//! approximation, which always exists, and a lower approximation when a
//! greatest concept below the clue exists.
//!
//! | clue   | upper                                | lower                                    |
//! |--------|--------------------------------------|------------------------------------------|
//! | A      | least concept with extent ⊇ A        | greatest concept with extent ⊆ A         |
//! | B      | concept with the least intent ⊇ B    | concept with the greatest intent ⊆ B     |
//! | (A, B) | least concept with extent ⊇ A ∪ H(B) | greatest concept with extent ⊆ A ∩ H(B)  |

use crate::bitset::BitSet;
use crate::error::Result;
use crate::operators::Operators;
use crate::sets::{AttributeSet, ObjectSet};
use crate::space::Concept;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConceptClue {
    Objects(ObjectSet),
    Attributes(AttributeSet),
    Pair(ObjectSet, AttributeSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ApproximationResult {
    Exact(Concept),
    Approximate {
        lower: Option<Concept>,
        upper: Concept,
    },
}

impl ApproximationResult {
    pub fn is_exact(&self) -> bool {
        matches!(self, ApproximationResult::Exact(_))
    }

    pub fn upper(&self) -> &Concept {
        match self {
            ApproximationResult::Exact(c) => c,
            ApproximationResult::Approximate { upper, .. } => upper,
        }
    }

    pub fn lower(&self) -> Option<&Concept> {
        match self {
            ApproximationResult::Exact(c) => Some(c),
            ApproximationResult::Approximate { lower, .. } => lower.as_ref(),
        }
    }
}

pub fn learn(ops: &Operators<'_>, clue: &ConceptClue) -> Result<ApproximationResult> {
    match clue {
        ConceptClue::Objects(a) => learn_from_objects(ops, a),
        ConceptClue::Attributes(b) => learn_from_attributes(ops, b),
        ConceptClue::Pair(a, b) => learn_from_pair(ops, a, b),
    }
}

/// Greatest concept whose extent lies inside `objects`, if there is one.
///
/// Every concept with a nonempty extent inside `objects` is the join of the
/// object granules it covers, so the join of all granules inside `objects`
/// is the only candidate.
fn greatest_extent_within(ops: &Operators<'_>, objects: &BitSet) -> Option<Concept> {
    let ctx = ops.context();
    let mut intent = BitSet::full(ctx.n_attributes());
    for g in objects.ones() {
        let row = ctx.row(g);
        if ctx.extent_bits(row).is_subset(objects) {
            intent.intersect_with(row);
        }
    }
    let extent = ctx.extent_bits(&intent);
    extent
        .is_subset(objects)
        .then(|| Concept::from_bits(extent, intent, ops.generation()))
}

/// Concept with the largest intent inside `attributes`, if there is one.
fn greatest_intent_within(ops: &Operators<'_>, attributes: &BitSet) -> Option<Concept> {
    let ctx = ops.context();
    let columns = ctx.columns();
    let mut extent = BitSet::full(ctx.n_objects());
    for m in attributes.ones() {
        let column = &columns[m];
        if ctx.intent_bits(column).is_subset(attributes) {
            extent.intersect_with(column);
        }
    }
    let intent = ctx.intent_bits(&extent);
    intent
        .is_subset(attributes)
        .then(|| Concept::from_bits(extent, intent, ops.generation()))
}

pub fn learn_from_objects(ops: &Operators<'_>, objects: &ObjectSet) -> Result<ApproximationResult> {
    let upper = ops.concept_from_extent(objects)?;
    if upper.extent() == objects {
        return Ok(ApproximationResult::Exact(upper));
    }
    let lower = greatest_extent_within(ops, objects.bits());
    Ok(ApproximationResult::Approximate { lower, upper })
}

pub fn learn_from_attributes(
    ops: &Operators<'_>,
    attributes: &AttributeSet,
) -> Result<ApproximationResult> {
    let upper = ops.concept_from_intent(attributes)?;
    if upper.intent() == attributes {
        return Ok(ApproximationResult::Exact(upper));
    }
    let lower = greatest_intent_within(ops, attributes.bits());
    Ok(ApproximationResult::Approximate { lower, upper })
}

pub fn learn_from_pair(
    ops: &Operators<'_>,
    objects: &ObjectSet,
    attributes: &AttributeSet,
) -> Result<ApproximationResult> {
    if ops.is_concept(objects, attributes)? {
        let exact = Concept::from_bits(
            objects.bits().clone(),
            attributes.bits().clone(),
            ops.generation(),
        );
        return Ok(ApproximationResult::Exact(exact));
    }
    let ctx = ops.context();
    let carrier = ctx.extent_bits(attributes.bits());
    let intent = ctx
        .intent_bits(objects.bits())
        .intersection(&ctx.intent_bits(&carrier));
    let upper = Concept::from_bits(ctx.extent_bits(&intent), intent, ops.generation());
    let lower = greatest_extent_within(ops, &objects.bits().intersection(&carrier));
    Ok(ApproximationResult::Approximate { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::tests::k1;
    use crate::sets::Side;
    use crate::FormalContext;

    fn ids<S: Side>(s: &crate::Set<S>) -> Vec<usize> {
        s.iter().collect()
    }

    #[test]
    fn object_clues_on_k1() {
        let k = k1();
        let ops = Operators::new(&k);
        let r = learn_from_objects(&ops, &k.object_set(&[0, 2]).unwrap()).unwrap();
        assert!(r.is_exact());
        assert_eq!(ids(r.upper().intent()), vec![0, 1]);

        let r = learn_from_objects(&ops, &k.object_set(&[0, 1]).unwrap()).unwrap();
        assert!(!r.is_exact());
        assert_eq!(ids(r.upper().extent()), vec![0, 1, 2]);
        assert_eq!(ids(r.upper().intent()), vec![1]);
        assert!(r.lower().is_none());

        let r = learn_from_objects(&ops, &k.all_objects()).unwrap();
        assert!(r.is_exact());
        assert_eq!(ids(r.upper().intent()), vec![1]);
    }

    #[test]
    fn attribute_clues_on_k1() {
        let k = k1();
        let ops = Operators::new(&k);
        let r = learn_from_attributes(&ops, &k.attribute_set(&[1]).unwrap()).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.upper().extent(), &k.all_objects());

        let r = learn_from_attributes(&ops, &k.attribute_set(&[0]).unwrap()).unwrap();
        assert!(!r.is_exact());
        assert_eq!(ids(r.upper().intent()), vec![0, 1]);
        assert!(r.lower().is_none());

        let r = learn_from_attributes(&ops, &k.attribute_set(&[0, 2]).unwrap()).unwrap();
        assert_eq!(ids(r.upper().intent()), vec![0, 1, 2]);
        assert!(r.lower().is_none());
    }

    #[test]
    fn pair_clues_on_k1() {
        let k = k1();
        let ops = Operators::new(&k);
        let r = learn_from_pair(
            &ops,
            &k.object_set(&[0, 2]).unwrap(),
            &k.attribute_set(&[0, 1]).unwrap(),
        )
        .unwrap();
        assert!(r.is_exact());

        let r = learn_from_pair(&ops, &k.all_objects(), &k.all_attributes()).unwrap();
        assert!(!r.is_exact());
        assert_eq!(r.upper().extent(), &k.all_objects());
        assert_eq!(ids(r.upper().intent()), vec![1]);
        let lower = r.lower().unwrap();
        assert_eq!(ids(lower.extent()), vec![2]);
        assert_eq!(ids(lower.intent()), vec![0, 1, 2]);
    }

    #[test]
    fn boundary_pair_is_exact() {
        let k = FormalContext::from_bool_rows(["g"], ["a", "b"], &[vec![true, false]]).unwrap();
        let ops = Operators::new(&k);
        assert!(learn_from_pair(&ops, &k.no_objects(), &k.all_attributes())
            .unwrap()
            .is_exact());
    }

    #[test]
    fn exact_results_are_fixed_points() {
        let k = k1();
        let ops = Operators::new(&k);
        for c in crate::ConceptSpace::enumerate(&k).iter() {
            for clue in [
                ConceptClue::Objects(c.extent().clone()),
                ConceptClue::Attributes(c.intent().clone()),
                ConceptClue::Pair(c.extent().clone(), c.intent().clone()),
            ] {
                assert_eq!(
                    learn(&ops, &clue).unwrap(),
                    ApproximationResult::Exact(c.clone())
                );
            }
        }
    }

    #[test]
    fn stale_clue_rejected() {
        let k = k1();
        let other = k1();
        let ops = Operators::new(&k);
        assert!(learn(&ops, &ConceptClue::Objects(other.all_objects())).is_err());
    }
}
