//! The object–attribute operator F and attribute–object operator H over one
//! context generation, and their closure compositions.
//!
//! F(A) is the set of attributes shared by every object in A and H(B) the set
//! of objects having every attribute in B. With this intersection form the
//! pair is antitone, F(A₁ ∪ A₂) = F(A₁) ∩ F(A₂), and H(B) = {g | B ⊆ F(g)}.
//! Conventions: F(∅) = M and H(∅) = G.

use crate::context::{FormalContext, Generation};
use crate::error::{Error, Result};
use crate::sets::{AttributeSet, ObjectSet, Set, Side};

/// F and H bound to one context generation.
///
/// The borrow keeps the context immutable while the pair is alive; operands
/// from another generation are rejected.
#[derive(Clone, Copy, Debug)]
pub struct Operators<'a> {
    ctx: &'a FormalContext,
}

impl<'a> Operators<'a> {
    pub fn new(ctx: &'a FormalContext) -> Self {
        Operators { ctx }
    }

    pub fn context(&self) -> &'a FormalContext {
        self.ctx
    }

    pub fn generation(&self) -> Generation {
        self.ctx.generation()
    }

    pub(crate) fn check<S: Side>(&self, set: &Set<S>) -> Result<()> {
        if set.generation() != self.ctx.generation() {
            return Err(Error::GenerationMismatch {
                expected: self.ctx.generation(),
                found: set.generation(),
            });
        }
        Ok(())
    }

    /// F: attributes common to all objects of `objects`.
    pub fn common_attributes(&self, objects: &ObjectSet) -> Result<AttributeSet> {
        self.check(objects)?;
        Ok(Set::from_bits(
            self.ctx.intent_bits(objects.bits()),
            self.generation(),
        ))
    }

    /// H: objects having all attributes of `attributes`.
    pub fn common_objects(&self, attributes: &AttributeSet) -> Result<ObjectSet> {
        self.check(attributes)?;
        Ok(Set::from_bits(
            self.ctx.extent_bits(attributes.bits()),
            self.generation(),
        ))
    }

    /// H(F(A)).
    pub fn closure_extent(&self, objects: &ObjectSet) -> Result<ObjectSet> {
        let intent = self.common_attributes(objects)?;
        self.common_objects(&intent)
    }

    /// F(H(B)).
    pub fn closure_intent(&self, attributes: &AttributeSet) -> Result<AttributeSet> {
        let extent = self.common_objects(attributes)?;
        self.common_attributes(&extent)
    }

    /// True iff F(A) = B and H(B) = A.
    pub fn is_concept(&self, objects: &ObjectSet, attributes: &AttributeSet) -> Result<bool> {
        self.check(objects)?;
        self.check(attributes)?;
        Ok(self.ctx.intent_bits(objects.bits()) == *attributes.bits()
            && self.ctx.extent_bits(attributes.bits()) == *objects.bits())
    }
}
