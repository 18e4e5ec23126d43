//! Object and attribute sets tagged with the context generation they index into.

use std::fmt;
use std::marker::PhantomData;

use crate::bitset::BitSet;
use crate::context::Generation;
use crate::error::{Error, Result};

/// Which side of a formal context a [`Set`] ranges over.
pub trait Side: Copy + Eq + fmt::Debug + Send + Sync + 'static {
    const KIND: &'static str;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objects {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Attributes {}

impl Side for Objects {
    const KIND: &'static str = "object";
}

impl Side for Attributes {
    const KIND: &'static str = "attribute";
}

/// Subset of a context's objects or attributes.
///
/// Positions refer to one context generation; binary operations between sets
/// of different generations fail with [`Error::GenerationMismatch`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Set<S: Side> {
    bits: BitSet,
    generation: Generation,
    _side: PhantomData<S>,
}

pub type ObjectSet = Set<Objects>;
pub type AttributeSet = Set<Attributes>;

impl<S: Side> Set<S> {
    pub(crate) fn from_bits(bits: BitSet, generation: Generation) -> Self {
        Set {
            bits,
            generation,
            _side: PhantomData,
        }
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn into_bits(self) -> BitSet {
        self.bits
    }

    pub fn generation(&self) -> Generation {
        self.generation
    }

    /// Size of the universe (|G| or |M| of the owning generation).
    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub(crate) fn check(&self, other: &Self) -> Result<()> {
        if self.generation != other.generation {
            return Err(Error::GenerationMismatch {
                expected: self.generation,
                found: other.generation,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Set::from_bits(
            self.bits.union(&other.bits),
            self.generation,
        ))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Set::from_bits(
            self.bits.intersection(&other.bits),
            self.generation,
        ))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Set::from_bits(
            self.bits.difference(&other.bits),
            self.generation,
        ))
    }

    pub fn complement(&self) -> Self {
        Set::from_bits(self.bits.complement(), self.generation)
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }
}

impl<S: Side> fmt::Debug for Set<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}Set{:?}",
            S::KIND,
            self.bits.ones().collect::<Vec<_>>()
        )
    }
}
