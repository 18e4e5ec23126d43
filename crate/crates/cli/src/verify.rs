//! Cross-checks of a learning state against independent computations.

use std::collections::BTreeSet;

use gccl_core::{BitSet, ConceptSpace, FormalContext, IncrementBatch, LearningState};

use crate::CliError;

/// Largest object count for the closure-of-every-subset check.
pub const BRUTE_FORCE_MAX_OBJECTS: usize = 16;
/// Largest object count for the NextClosure and replay checks.
pub const NEXT_CLOSURE_MAX_OBJECTS: usize = 100;

fn close(ctx: &FormalContext, intent: &BitSet) -> BitSet {
    ctx.intent_bits(&ctx.extent_bits(intent))
}

/// All closed intents in lectic order (Ganter's NextClosure).
pub fn next_closure_intents(ctx: &FormalContext) -> Vec<BitSet> {
    let n = ctx.n_attributes();
    let mut current = close(ctx, &BitSet::new(n));
    let mut out = vec![current.clone()];
    'outer: loop {
        for i in (0..n).rev() {
            if current.contains(i) {
                continue;
            }
            let mut seed = BitSet::from_indices(n, current.ones().filter(|&m| m < i));
            seed.insert(i);
            let next = close(ctx, &seed);
            if next.agrees_below(&current, i) {
                current = next;
                out.push(current.clone());
                continue 'outer;
            }
        }
        return out;
    }
}

/// Intents reached by closing every object subset.
pub fn brute_force_intents(ctx: &FormalContext) -> BTreeSet<BitSet> {
    let n = ctx.n_objects();
    assert!(n <= 24, "brute force over {n} objects");
    (0u32..1 << n)
        .map(|mask| {
            ctx.intent_bits(&BitSet::from_indices(
                n,
                (0..n).filter(|g| mask >> g & 1 == 1),
            ))
        })
        .collect()
}

fn space_intents(space: &ConceptSpace) -> BTreeSet<BitSet> {
    space.raw_iter().map(|(_, i)| i.clone()).collect()
}

fn ensure(ok: bool, what: &str, lines: &mut Vec<String>) -> Result<(), CliError> {
    if !ok {
        return Err(CliError::Invariant(what.to_owned()));
    }
    lines.push(format!("ok\t{what}"));
    Ok(())
}

/// Runs every check that fits the state's size; returns one line per check.
pub fn verify_state(state: &LearningState) -> Result<Vec<String>, CliError> {
    let ctx = state.context();
    let space = state.space();
    let ops = state.operators();
    let mut lines = Vec::new();

    let all_concepts = space
        .iter()
        .all(|c| ops.is_concept(c.extent(), c.intent()).unwrap_or(false));
    ensure(all_concepts, "every stored pair is a concept", &mut lines)?;

    let sequential = ConceptSpace::enumerate(ctx);
    ensure(
        &sequential == space,
        "space equals re-enumeration",
        &mut lines,
    )?;
    ensure(
        ConceptSpace::enumerate_parallel(ctx) == sequential,
        "parallel enumeration equals sequential",
        &mut lines,
    )?;

    if ctx.n_objects() <= NEXT_CLOSURE_MAX_OBJECTS {
        let lectic = next_closure_intents(ctx);
        let as_set: BTreeSet<BitSet> = lectic.iter().cloned().collect();
        ensure(
            as_set.len() == lectic.len() && as_set == space_intents(space),
            "intents equal NextClosure",
            &mut lines,
        )?;

        let mut replay =
            LearningState::new(FormalContext::with_attributes(ctx.attributes().to_vec())?);
        for g in 0..ctx.n_objects() {
            replay.extend(IncrementBatch::objects(vec![(
                ctx.objects()[g].clone(),
                ctx.row(g).clone(),
            )]))?;
        }
        ensure(
            replay.space() == space,
            "one-object-at-a-time replay equals space",
            &mut lines,
        )?;
    } else {
        lines.push(format!(
            "skip\tNextClosure and replay (more than {NEXT_CLOSURE_MAX_OBJECTS} objects)"
        ));
    }

    if ctx.n_objects() <= BRUTE_FORCE_MAX_OBJECTS {
        ensure(
            brute_force_intents(ctx) == space_intents(space),
            "intents equal closure of every object subset",
            &mut lines,
        )?;
    } else {
        lines.push(format!(
            "skip\tsubset brute force (more than {BRUTE_FORCE_MAX_OBJECTS} objects)"
        ));
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k1() -> FormalContext {
        FormalContext::from_bool_rows(
            ["g1", "g2", "g3"],
            ["a", "b", "c"],
            &[
                vec![true, true, false],
                vec![false, true, true],
                vec![true, true, true],
            ],
        )
        .unwrap()
    }

    #[test]
    fn next_closure_on_k1() {
        let intents: Vec<String> = next_closure_intents(&k1())
            .iter()
            .map(BitSet::to_bit_string)
            .collect();
        assert_eq!(intents, ["010", "011", "110", "111"]);
    }

    #[test]
    fn k1_state_verifies() {
        let lines = verify_state(&LearningState::new(k1())).unwrap();
        assert!(lines.iter().all(|l| l.starts_with("ok")));
        assert_eq!(lines.len(), 6);
    }
}
