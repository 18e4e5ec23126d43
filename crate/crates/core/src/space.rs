//! Concept spaces: every (extent, intent) pair of a context, stored by intent.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::context::{FormalContext, Generation};
use crate::error::{Error, Result};
use crate::operators::Operators;
use crate::sets::{AttributeSet, ObjectSet, Set};
use crate::text::LineCursor;

/// A pair (A, B) with F(A) = B and H(B) = A.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Concept {
    extent: ObjectSet,
    intent: AttributeSet,
}

impl Concept {
    pub(crate) fn from_bits(extent: BitSet, intent: BitSet, generation: Generation) -> Self {
        Concept {
            extent: Set::from_bits(extent, generation),
            intent: Set::from_bits(intent, generation),
        }
    }

    pub fn extent(&self) -> &ObjectSet {
        &self.extent
    }

    pub fn intent(&self) -> &AttributeSet {
        &self.intent
    }

    pub fn generation(&self) -> Generation {
        self.extent.generation()
    }

    /// Extent inclusion; equivalent to reverse intent inclusion.
    pub fn leq(&self, other: &Concept) -> Result<bool> {
        self.extent.is_subset(&other.extent)
    }
}

impl Operators<'_> {
    /// (HF(A), F(A)): the least concept whose extent contains `objects`.
    pub fn concept_from_extent(&self, objects: &ObjectSet) -> Result<Concept> {
        self.check(objects)?;
        let ctx = self.context();
        let intent = ctx.intent_bits(objects.bits());
        let extent = ctx.extent_bits(&intent);
        Ok(Concept::from_bits(extent, intent, self.generation()))
    }

    /// (H(B), FH(B)): the greatest concept whose intent contains `attributes`.
    pub fn concept_from_intent(&self, attributes: &AttributeSet) -> Result<Concept> {
        self.check(attributes)?;
        let ctx = self.context();
        let extent = ctx.extent_bits(attributes.bits());
        let intent = ctx.intent_bits(&extent);
        Ok(Concept::from_bits(extent, intent, self.generation()))
    }

    /// (A₁ ∩ A₂, F(A₁ ∩ A₂)).
    pub fn meet(&self, a: &Concept, b: &Concept) -> Result<Concept> {
        self.check(&a.extent)?;
        self.check(&b.extent)?;
        let extent = a.extent.bits().intersection(b.extent.bits());
        let intent = self.context().intent_bits(&extent);
        Ok(Concept::from_bits(extent, intent, self.generation()))
    }

    /// (H(B₁ ∩ B₂), B₁ ∩ B₂).
    pub fn join(&self, a: &Concept, b: &Concept) -> Result<Concept> {
        self.check(&a.intent)?;
        self.check(&b.intent)?;
        let intent = a.intent.bits().intersection(b.intent.bits());
        let extent = self.context().extent_bits(&intent);
        Ok(Concept::from_bits(extent, intent, self.generation()))
    }
}

/// Object-granular concept (HF(g), F(g)).
pub fn object_granule(ctx: &FormalContext, g: usize) -> Result<Concept> {
    let intent = ctx.object_intent(g)?;
    let extent = ctx.extent_bits(intent.bits());
    Ok(Concept::from_bits(
        extent,
        intent.into_bits(),
        ctx.generation(),
    ))
}

/// Attribute-granular concept (H(m), FH(m)).
pub fn attribute_granule(ctx: &FormalContext, m: usize) -> Result<Concept> {
    let extent = ctx.attribute_extent(m)?;
    let intent = ctx.intent_bits(extent.bits());
    Ok(Concept::from_bits(
        extent.into_bits(),
        intent,
        ctx.generation(),
    ))
}

/// All object- and attribute-granular concepts, deduplicated, ordered by intent.
pub fn granular_concepts(ctx: &FormalContext) -> Vec<Concept> {
    let mut by_intent = BTreeMap::new();
    for g in 0..ctx.n_objects() {
        let c = object_granule(ctx, g).expect("index in range");
        by_intent.entry(c.intent.bits().clone()).or_insert(c);
    }
    for m in 0..ctx.n_attributes() {
        let c = attribute_granule(ctx, m).expect("index in range");
        by_intent.entry(c.intent.bits().clone()).or_insert(c);
    }
    by_intent.into_values().collect()
}

/// The set of all concepts of one context generation.
///
/// Concepts are keyed and iterated by intent in ascending bit-string order, so
/// the first concept is the top (G, F(G)) and the last the bottom (H(M), M).
#[derive(Clone, Debug)]
pub struct ConceptSpace {
    generation: Generation,
    n_objects: usize,
    n_attributes: usize,
    by_intent: BTreeMap<BitSet, BitSet>,
}

/// Spaces compare by dimensions and concepts; generation tags are ignored.
impl PartialEq for ConceptSpace {
    fn eq(&self, other: &Self) -> bool {
        self.n_objects == other.n_objects
            && self.n_attributes == other.n_attributes
            && self.by_intent == other.by_intent
    }
}

impl Eq for ConceptSpace {}

type RawConcept = (BitSet, BitSet);

/// Close-by-One: emits (intent, extent) for the node and recurses into every
/// canonical child `(extent ∩ col(j), F(extent ∩ col(j)))` with j ≥ `start`.
fn close_by_one(
    ctx: &FormalContext,
    extent: &BitSet,
    intent: &BitSet,
    start: usize,
    out: &mut Vec<RawConcept>,
) {
    let columns = ctx.columns();
    for j in start..ctx.n_attributes() {
        if intent.contains(j) {
            continue;
        }
        if let Some((child_extent, child_intent)) = canonical_child(ctx, columns, extent, intent, j)
        {
            close_by_one(ctx, &child_extent, &child_intent, j + 1, out);
            out.push((child_intent, child_extent));
        }
    }
}

fn canonical_child(
    ctx: &FormalContext,
    columns: &[BitSet],
    extent: &BitSet,
    intent: &BitSet,
    j: usize,
) -> Option<(BitSet, BitSet)> {
    let child_extent = extent.intersection(&columns[j]);
    // The child intent always contains intent ∪ {j}; stop intersecting rows
    // once that floor is reached.
    let mut floor = intent.clone();
    floor.insert(j);
    let mut child_intent = BitSet::full(ctx.n_attributes());
    for g in child_extent.ones() {
        child_intent.intersect_with(ctx.row(g));
        if child_intent == floor {
            break;
        }
    }
    child_intent
        .agrees_below(intent, j)
        .then_some((child_extent, child_intent))
}

impl ConceptSpace {
    /// Enumerates every concept of `ctx` with Close-by-One.
    pub fn enumerate(ctx: &FormalContext) -> Self {
        let (extent, intent) = ConceptSpace::root(ctx);
        let mut out = Vec::new();
        close_by_one(ctx, &extent, &intent, 0, &mut out);
        out.push((intent, extent));
        ConceptSpace::from_raw(ctx, out)
    }

    /// Like [`ConceptSpace::enumerate`], splitting the first level of the
    /// search tree across the rayon pool.
    pub fn enumerate_parallel(ctx: &FormalContext) -> Self {
        let (extent, intent) = ConceptSpace::root(ctx);
        let columns = ctx.columns();
        let branches: Vec<Vec<RawConcept>> = (0..ctx.n_attributes())
            .into_par_iter()
            .filter(|j| !intent.contains(*j))
            .map(|j| {
                let mut out = Vec::new();
                if let Some((ce, ci)) = canonical_child(ctx, columns, &extent, &intent, j) {
                    close_by_one(ctx, &ce, &ci, j + 1, &mut out);
                    out.push((ci, ce));
                }
                out
            })
            .collect();
        let mut all: Vec<RawConcept> = branches.into_iter().flatten().collect();
        all.push((intent, extent));
        ConceptSpace::from_raw(ctx, all)
    }

    fn root(ctx: &FormalContext) -> (BitSet, BitSet) {
        let extent = BitSet::full(ctx.n_objects());
        let intent = ctx.intent_bits(&extent);
        (extent, intent)
    }

    fn from_raw(ctx: &FormalContext, raw: Vec<RawConcept>) -> Self {
        let expected = raw.len();
        let by_intent: BTreeMap<BitSet, BitSet> = raw.into_iter().collect();
        debug_assert_eq!(
            by_intent.len(),
            expected,
            "enumeration produced a duplicate intent"
        );
        let space = ConceptSpace {
            generation: ctx.generation(),
            n_objects: ctx.n_objects(),
            n_attributes: ctx.n_attributes(),
            by_intent,
        };
        space.debug_check_bound();
        space
    }

    fn debug_check_bound(&self) {
        let smaller = self.n_objects.min(self.n_attributes);
        if smaller < 63 {
            debug_assert!(self.by_intent.len() as u64 <= 1u64 << smaller);
        }
    }

    pub fn generation(&self) -> Generation {
        self.generation
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_attributes(&self) -> usize {
        self.n_attributes
    }

    pub fn len(&self) -> usize {
        self.by_intent.len()
    }

    /// Never true: every context has at least one concept.
    pub fn is_empty(&self) -> bool {
        self.by_intent.is_empty()
    }

    /// Concepts in canonical (ascending intent) order.
    pub fn iter(&self) -> impl Iterator<Item = Concept> + '_ {
        self.by_intent
            .iter()
            .map(|(i, e)| Concept::from_bits(e.clone(), i.clone(), self.generation))
    }

    /// (extent, intent) bit pairs in canonical order.
    pub fn raw_iter(&self) -> impl Iterator<Item = (&BitSet, &BitSet)> + '_ {
        self.by_intent.iter().map(|(i, e)| (e, i))
    }

    pub fn top(&self) -> Concept {
        let (i, e) = self
            .by_intent
            .first_key_value()
            .expect("space is never empty");
        Concept::from_bits(e.clone(), i.clone(), self.generation)
    }

    pub fn bottom(&self) -> Concept {
        let (i, e) = self
            .by_intent
            .last_key_value()
            .expect("space is never empty");
        Concept::from_bits(e.clone(), i.clone(), self.generation)
    }

    fn check<S: crate::sets::Side>(&self, set: &Set<S>) -> Result<()> {
        if set.generation() != self.generation {
            return Err(Error::GenerationMismatch {
                expected: self.generation,
                found: set.generation(),
            });
        }
        Ok(())
    }

    /// The concept whose intent is exactly `intent`, if that set is closed.
    pub fn with_intent(&self, intent: &AttributeSet) -> Result<Option<Concept>> {
        self.check(intent)?;
        Ok(self
            .by_intent
            .get(intent.bits())
            .map(|e| Concept::from_bits(e.clone(), intent.bits().clone(), self.generation)))
    }

    pub fn contains(&self, concept: &Concept) -> Result<bool> {
        self.check(concept.extent())?;
        Ok(self.by_intent.get(concept.intent().bits()) == Some(concept.extent().bits()))
    }

    pub(crate) fn retag(&mut self, generation: Generation) {
        self.generation = generation;
    }

    /// Updates the space after `ctx` gained one object (its last row).
    ///
    /// The new intents are the old intents plus every I ∩ F(g); a new intent
    /// J takes the extent of its largest generator plus g.
    pub fn insert_object(&mut self, ctx: &FormalContext) -> Result<()> {
        if ctx.n_objects() != self.n_objects + 1 || ctx.n_attributes() != self.n_attributes {
            return Err(Error::Dimension(format!(
                "space is {}x{}, context after one object append is {}x{}",
                self.n_objects,
                self.n_attributes,
                ctx.n_objects(),
                ctx.n_attributes()
            )));
        }
        let g = self.n_objects;
        let row = ctx.row(g);
        let width = g + 1;

        // For each missing intersection, the generator with the largest extent.
        let mut fresh: HashMap<BitSet, &BitSet> = HashMap::new();
        let mut scratch = BitSet::new(self.n_attributes);
        for (intent, extent) in &self.by_intent {
            if intent.is_subset(row) {
                continue;
            }
            scratch.assign_intersection(intent, row);
            if self.by_intent.contains_key(&scratch) {
                continue;
            }
            match fresh.get_mut(&scratch) {
                Some(best) if extent.count() > best.count() => *best = extent,
                Some(_) => {}
                None => {
                    fresh.insert(scratch.clone(), extent);
                }
            }
        }
        let fresh: Vec<RawConcept> = fresh
            .into_iter()
            .map(|(intent, generator)| {
                let mut extent = generator.clone();
                extent.grow(width);
                extent.insert(g);
                (intent, extent)
            })
            .collect();

        for (intent, extent) in self.by_intent.iter_mut() {
            extent.grow(width);
            if intent.is_subset(row) {
                extent.insert(g);
            }
        }
        self.by_intent.extend(fresh);
        self.n_objects = width;
        self.generation = ctx.generation();
        self.debug_check_bound();
        Ok(())
    }

    /// Updates the space after `ctx` gained one attribute (its last column).
    ///
    /// Dual of [`ConceptSpace::insert_object`]: new extents are A ∩ H(m), each
    /// taking the intent of its largest generator plus m.
    pub fn insert_attribute(&mut self, ctx: &FormalContext) -> Result<()> {
        if ctx.n_attributes() != self.n_attributes + 1 || ctx.n_objects() != self.n_objects {
            return Err(Error::Dimension(format!(
                "space is {}x{}, context after one attribute append is {}x{}",
                self.n_objects,
                self.n_attributes,
                ctx.n_objects(),
                ctx.n_attributes()
            )));
        }
        let m = self.n_attributes;
        let column = ctx.column(m);
        let width = m + 1;

        let extents: HashMap<&BitSet, ()> = self.by_intent.values().map(|e| (e, ())).collect();
        let mut fresh: HashMap<BitSet, &BitSet> = HashMap::new();
        for (intent, extent) in &self.by_intent {
            if extent.is_subset(column) {
                continue;
            }
            let meet = extent.intersection(column);
            if extents.contains_key(&meet) {
                continue;
            }
            fresh
                .entry(meet)
                .and_modify(|best| {
                    if intent.count() > best.count() {
                        *best = intent;
                    }
                })
                .or_insert(intent);
        }
        let fresh: Vec<RawConcept> = fresh
            .into_iter()
            .map(|(extent, generator)| {
                let mut intent = generator.clone();
                intent.grow(width);
                intent.insert(m);
                (intent, extent)
            })
            .collect();
        drop(extents);

        let old = std::mem::take(&mut self.by_intent);
        self.by_intent = old
            .into_iter()
            .map(|(mut intent, extent)| {
                intent.grow(width);
                if extent.is_subset(column) {
                    intent.insert(m);
                }
                (intent, extent)
            })
            .chain(fresh)
            .collect();
        self.n_attributes = width;
        self.generation = ctx.generation();
        self.debug_check_bound();
        Ok(())
    }

    /// Canonical text form: `CS <|G|> <|M|> <count>` then one
    /// `<extent bits> <intent bits>` line per concept in intent order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write_to(&mut out);
        out
    }

    pub(crate) fn write_to(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "CS {} {} {}",
            self.n_objects,
            self.n_attributes,
            self.by_intent.len()
        );
        for (intent, extent) in &self.by_intent {
            let _ = writeln!(out, "{} {}", extent.to_bit_string(), intent.to_bit_string());
        }
    }

    /// Parses the canonical text form against `ctx`, checking that every line
    /// is a concept of `ctx` and that lines are in canonical order.
    pub fn parse(text: &str, ctx: &FormalContext) -> Result<Self> {
        let mut cursor = LineCursor::new(text);
        let space = ConceptSpace::parse_from(&mut cursor, ctx)
            .map_err(|(line, _, msg)| Error::parse(line, msg))?;
        if !cursor.at_end() {
            return Err(Error::parse(
                cursor.line_number(),
                "trailing content after last concept",
            ));
        }
        Ok(space)
    }

    /// Errors carry (line, byte offset, message).
    pub(crate) fn parse_from(
        cursor: &mut LineCursor<'_>,
        ctx: &FormalContext,
    ) -> std::result::Result<Self, (usize, usize, String)> {
        let (number, offset) = (cursor.line_number(), cursor.offset());
        let header =
            cursor
                .next_line()
                .ok_or((number, offset, "missing `CS` header".to_owned()))?;
        let fields: Vec<&str> = header.text.split(' ').collect();
        let parsed: Vec<usize> = fields
            .iter()
            .skip(1)
            .filter_map(|f| f.parse().ok())
            .collect();
        if fields.len() != 4 || fields[0] != "CS" || parsed.len() != 3 {
            return Err((
                header.number,
                header.offset,
                format!("malformed header {:?}", header.text),
            ));
        }
        let (n_objects, n_attributes, count) = (parsed[0], parsed[1], parsed[2]);
        if n_objects != ctx.n_objects() || n_attributes != ctx.n_attributes() {
            return Err((
                header.number,
                header.offset,
                format!(
                    "space is {n_objects}x{n_attributes}, context is {}x{}",
                    ctx.n_objects(),
                    ctx.n_attributes()
                ),
            ));
        }
        let mut by_intent = BTreeMap::new();
        let mut previous: Option<BitSet> = None;
        for _ in 0..count {
            let (number, offset) = (cursor.line_number(), cursor.offset());
            let line = cursor.next_line().ok_or((
                number,
                offset,
                format!("expected {count} concepts, input ended"),
            ))?;
            let bad = |msg: &str| (line.number, line.offset, msg.to_owned());
            // trailing whitespace is trimmed, so an empty intent leaves no separator
            let split = match line.text.split_once(' ') {
                None if n_attributes == 0 => Some((line.text, "")),
                other => other,
            };
            let (e, i) = split.ok_or_else(|| bad("expected `<extent> <intent>`"))?;
            let extent = BitSet::from_bit_str(e)
                .filter(|b| b.len() == n_objects)
                .ok_or_else(|| bad("malformed extent bits"))?;
            let intent = BitSet::from_bit_str(i)
                .filter(|b| b.len() == n_attributes)
                .ok_or_else(|| bad("malformed intent bits"))?;
            if previous.as_ref().is_some_and(|p| *p >= intent) {
                return Err(bad("concepts out of canonical order"));
            }
            if ctx.intent_bits(&extent) != intent || ctx.extent_bits(&intent) != extent {
                return Err(bad("pair is not a concept of the context"));
            }
            previous = Some(intent.clone());
            by_intent.insert(intent, extent);
        }
        Ok(ConceptSpace {
            generation: ctx.generation(),
            n_objects,
            n_attributes,
            by_intent,
        })
    }
}
