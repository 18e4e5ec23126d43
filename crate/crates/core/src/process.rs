//! The concept-cognitive process: a context and its concept space growing
//! through batches of new objects and attributes.
//!
//! Extending by ΔG and ΔM keeps every old row and column and widens them:
//! an old object's new intent is its old intent plus its bits over ΔM, an old
//! attribute's new extent is its old extent plus its bits over ΔG. An empty
//! delta contributes nothing on its side.

use std::collections::HashSet;
use std::time::{Duration, Instant, SystemTime};

use log::debug;

use crate::bitset::BitSet;
use crate::context::{validate_name, FormalContext};
use crate::error::{Error, Result};
use crate::operators::Operators;
use crate::space::ConceptSpace;

/// New objects and attributes for one step.
///
/// Object intents range over the old attributes followed by the new ones;
/// attribute extents range over the old objects followed by the new ones. A
/// cell shared by a new object and a new attribute appears in both and must
/// agree.
#[derive(Clone, Debug, Default)]
pub struct IncrementBatch {
    pub objects: Vec<(String, BitSet)>,
    pub attributes: Vec<(String, BitSet)>,
}

impl IncrementBatch {
    pub fn objects(objects: Vec<(String, BitSet)>) -> Self {
        IncrementBatch {
            objects,
            attributes: Vec::new(),
        }
    }

    pub fn attributes(attributes: Vec<(String, BitSet)>) -> Self {
        IncrementBatch {
            objects: Vec::new(),
            attributes,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty() && self.attributes.is_empty()
    }
}

/// How `extend` brings the concept space up to date.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UpdateMode {
    /// Insert one object or attribute at a time into the existing space.
    #[default]
    Incremental,
    /// Re-enumerate the space of the extended context from scratch.
    Reenumerate,
}

/// What one applied batch did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchRecord {
    pub objects_added: usize,
    pub attributes_added: usize,
    pub elapsed: Duration,
    pub finished_at: SystemTime,
}

/// A context, its concept space, and the batches that led there.
#[derive(Clone, Debug)]
pub struct LearningState {
    context: FormalContext,
    space: ConceptSpace,
    history: Vec<BatchRecord>,
    mode: UpdateMode,
}

impl LearningState {
    /// Forms the initial space of `context`.
    pub fn new(context: FormalContext) -> Self {
        let space = ConceptSpace::enumerate_parallel(&context);
        LearningState {
            context,
            space,
            history: Vec::new(),
            mode: UpdateMode::default(),
        }
    }

    /// Pairs a context with a space already known to be its concept space.
    pub fn from_parts(context: FormalContext, space: ConceptSpace) -> Result<Self> {
        if space.generation() != context.generation() {
            return Err(Error::GenerationMismatch {
                expected: context.generation(),
                found: space.generation(),
            });
        }
        Ok(LearningState {
            context,
            space,
            history: Vec::new(),
            mode: UpdateMode::default(),
        })
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn space(&self) -> &ConceptSpace {
        &self.space
    }

    pub fn operators(&self) -> Operators<'_> {
        Operators::new(&self.context)
    }

    pub fn history(&self) -> &[BatchRecord] {
        &self.history
    }

    pub fn mode(&self) -> UpdateMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: UpdateMode) {
        self.mode = mode;
    }

    /// Applies a batch: new attributes first, then new objects.
    ///
    /// A batch that fails validation leaves the state untouched.
    pub fn extend(&mut self, batch: IncrementBatch) -> Result<()> {
        if batch.is_empty() {
            return Ok(());
        }
        self.validate(&batch)?;
        let start = Instant::now();
        let old_objects = self.context.n_objects();
        let (n_new_objects, n_new_attributes) = (batch.objects.len(), batch.attributes.len());

        for (name, extent) in batch.attributes {
            self.context
                .append_attribute(name, extent.truncated(old_objects))
                .expect("batch validated");
            if self.mode == UpdateMode::Incremental {
                self.space
                    .insert_attribute(&self.context)
                    .expect("dimensions follow context");
            }
        }
        for (name, intent) in batch.objects {
            self.context
                .append_object(name, intent)
                .expect("batch validated");
            if self.mode == UpdateMode::Incremental {
                self.space
                    .insert_object(&self.context)
                    .expect("dimensions follow context");
            }
        }
        if self.mode == UpdateMode::Reenumerate {
            self.space = ConceptSpace::enumerate_parallel(&self.context);
        }
        self.space.retag(self.context.generation());

        let elapsed = start.elapsed();
        debug!(
            "applied batch of {n_new_objects} objects, {n_new_attributes} attributes in {elapsed:?}; {} concepts",
            self.space.len()
        );
        self.history.push(BatchRecord {
            objects_added: n_new_objects,
            attributes_added: n_new_attributes,
            elapsed,
            finished_at: SystemTime::now(),
        });
        self.debug_check();
        Ok(())
    }

    /// Applies a batch with no new attributes.
    pub fn extend_with_objects(&mut self, rows: Vec<(String, BitSet)>) -> Result<()> {
        self.extend(IncrementBatch::objects(rows))
    }

    fn validate(&self, batch: &IncrementBatch) -> Result<()> {
        let ctx = &self.context;
        let width_m = ctx.n_attributes() + batch.attributes.len();
        let width_g = ctx.n_objects() + batch.objects.len();
        let reject = |msg: String| Err(Error::BatchRejected(msg));

        let mut seen = HashSet::new();
        for (name, intent) in &batch.objects {
            validate_name("object", name)?;
            if ctx.object_index(name).is_some() || !seen.insert(name.as_str()) {
                return reject(format!("object `{name}` already exists"));
            }
            if intent.len() != width_m {
                return reject(format!(
                    "object `{name}` has intent width {}, expected {width_m}",
                    intent.len()
                ));
            }
        }
        seen.clear();
        for (name, extent) in &batch.attributes {
            validate_name("attribute", name)?;
            if ctx.attribute_index(name).is_some() || !seen.insert(name.as_str()) {
                return reject(format!("attribute `{name}` already exists"));
            }
            if extent.len() != width_g {
                return reject(format!(
                    "attribute `{name}` has extent width {}, expected {width_g}",
                    extent.len()
                ));
            }
        }
        for (j, (object, intent)) in batch.objects.iter().enumerate() {
            for (k, (attribute, extent)) in batch.attributes.iter().enumerate() {
                if intent.contains(ctx.n_attributes() + k) != extent.contains(ctx.n_objects() + j) {
                    return reject(format!("new object `{object}` and new attribute `{attribute}` disagree on their shared cell"));
                }
            }
        }
        Ok(())
    }

    fn debug_check(&self) {
        if cfg!(debug_assertions)
            && self.context.n_objects() <= 12
            && self.context.n_attributes() <= 10
        {
            debug_assert_eq!(self.space, ConceptSpace::enumerate(&self.context));
        }
    }
}
