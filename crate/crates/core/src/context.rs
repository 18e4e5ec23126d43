//! Formal contexts: objects, attributes and a dense incidence relation.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::sets::{AttributeSet, ObjectSet, Set, Side};
use crate::text::LineCursor;

static NEXT_GENERATION: AtomicU64 = AtomicU64::new(1);

/// Identifies one state of a context's object and attribute universes.
///
/// Every construction or append draws a fresh process-wide value; clones keep
/// the value of their source since their contents are identical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generation(u64);

impl Generation {
    fn fresh() -> Self {
        Generation(NEXT_GENERATION.fetch_add(1, Ordering::Relaxed))
    }
}

impl fmt::Display for Generation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A formal context (G, M, I) stored as one bit row per object.
///
/// Objects and attributes are only ever appended, so an index keeps its
/// meaning for the lifetime of the context.
#[derive(Clone)]
pub struct FormalContext {
    generation: Generation,
    objects: Vec<String>,
    attributes: Vec<String>,
    object_lookup: HashMap<String, usize>,
    attribute_lookup: HashMap<String, usize>,
    rows: Vec<BitSet>,
    // attribute-major mirror of `rows`, rebuilt on demand after appends
    columns: OnceLock<Vec<BitSet>>,
}

pub(crate) fn validate_name(kind: &'static str, name: &str) -> Result<()> {
    if name.is_empty() || name.contains(['\n', '\r']) || name.trim() != name {
        return Err(Error::InvalidIdentifier {
            kind,
            name: name.to_owned(),
        });
    }
    Ok(())
}

fn build_lookup(kind: &'static str, names: &[String]) -> Result<HashMap<String, usize>> {
    let mut lookup = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        validate_name(kind, name)?;
        if lookup.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateIdentifier {
                kind,
                name: name.clone(),
            });
        }
    }
    Ok(lookup)
}

impl FormalContext {
    pub fn new(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Result<Self> {
        if rows.len() != objects.len() {
            return Err(Error::Dimension(format!(
                "{} rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        if let Some((g, row)) = rows
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != attributes.len())
        {
            return Err(Error::Dimension(format!(
                "row {g} has width {}, expected {}",
                row.len(),
                attributes.len()
            )));
        }
        let object_lookup = build_lookup("object", &objects)?;
        let attribute_lookup = build_lookup("attribute", &attributes)?;
        Ok(FormalContext {
            generation: Generation::fresh(),
            objects,
            attributes,
            object_lookup,
            attribute_lookup,
            rows,
            columns: OnceLock::new(),
        })
    }

    /// Builds a context from boolean rows (`rows[g][m]`).
    pub fn from_bool_rows<O, A>(objects: O, attributes: A, rows: &[Vec<bool>]) -> Result<Self>
    where
        O: IntoIterator,
        O::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
    {
        FormalContext::new(
            objects.into_iter().map(Into::into).collect(),
            attributes.into_iter().map(Into::into).collect(),
            rows.iter().map(|r| BitSet::from_bools(r)).collect(),
        )
    }

    /// Context with the given attributes and no objects.
    pub fn with_attributes(attributes: Vec<String>) -> Result<Self> {
        FormalContext::new(Vec::new(), attributes, Vec::new())
    }

    pub fn generation(&self) -> Generation {
        self.generation
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_lookup.get(name).copied()
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attribute_lookup.get(name).copied()
    }

    /// Incidence row of object `g`. Panics when `g` is out of range.
    pub fn row(&self, g: usize) -> &BitSet {
        &self.rows[g]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    /// Incidence column of attribute `m`. Panics when `m` is out of range.
    pub fn column(&self, m: usize) -> &BitSet {
        &self.columns()[m]
    }

    pub fn columns(&self) -> &[BitSet] {
        self.columns.get_or_init(|| {
            let mut cols = vec![BitSet::new(self.objects.len()); self.attributes.len()];
            for (g, row) in self.rows.iter().enumerate() {
                for m in row.ones() {
                    cols[m].insert(g);
                }
            }
            cols
        })
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows.get(g).is_some_and(|r| r.contains(m))
    }

    /// F({g}): the attributes of one object.
    pub fn object_intent(&self, g: usize) -> Result<AttributeSet> {
        let row = self.rows.get(g).ok_or(Error::IndexOutOfRange {
            kind: "object",
            index: g,
            size: self.objects.len(),
        })?;
        Ok(Set::from_bits(row.clone(), self.generation))
    }

    /// H({m}): the objects having one attribute.
    pub fn attribute_extent(&self, m: usize) -> Result<ObjectSet> {
        if m >= self.attributes.len() {
            return Err(Error::IndexOutOfRange {
                kind: "attribute",
                index: m,
                size: self.attributes.len(),
            });
        }
        Ok(Set::from_bits(self.column(m).clone(), self.generation))
    }

    /// Common attributes of the objects in `extent`, intersecting rows in
    /// ascending object order. The empty object set yields every attribute.
    pub fn intent_bits(&self, extent: &BitSet) -> BitSet {
        let mut intent = BitSet::full(self.attributes.len());
        for g in extent.ones() {
            intent.intersect_with(&self.rows[g]);
            if intent.is_clear() {
                break;
            }
        }
        intent
    }

    /// Objects having every attribute in `intent`. The empty attribute set
    /// yields every object.
    pub fn extent_bits(&self, intent: &BitSet) -> BitSet {
        let columns = self.columns();
        let mut extent = BitSet::full(self.objects.len());
        for m in intent.ones() {
            extent.intersect_with(&columns[m]);
            if extent.is_clear() {
                break;
            }
        }
        extent
    }

    fn set_of<S: Side>(&self, width: usize, indices: &[usize]) -> Result<Set<S>> {
        let mut bits = BitSet::new(width);
        for &i in indices {
            if i >= width {
                return Err(Error::IndexOutOfRange {
                    kind: S::KIND,
                    index: i,
                    size: width,
                });
            }
            bits.insert(i);
        }
        Ok(Set::from_bits(bits, self.generation))
    }

    pub fn object_set(&self, indices: &[usize]) -> Result<ObjectSet> {
        self.set_of(self.objects.len(), indices)
    }

    pub fn attribute_set(&self, indices: &[usize]) -> Result<AttributeSet> {
        self.set_of(self.attributes.len(), indices)
    }

    pub fn objects_named<N: AsRef<str>>(&self, names: &[N]) -> Result<ObjectSet> {
        let indices = names
            .iter()
            .map(|n| {
                self.object_index(n.as_ref())
                    .ok_or_else(|| Error::UnknownName {
                        kind: "object",
                        name: n.as_ref().to_owned(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        self.object_set(&indices)
    }

    pub fn attributes_named<N: AsRef<str>>(&self, names: &[N]) -> Result<AttributeSet> {
        let indices = names
            .iter()
            .map(|n| {
                self.attribute_index(n.as_ref())
                    .ok_or_else(|| Error::UnknownName {
                        kind: "attribute",
                        name: n.as_ref().to_owned(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        self.attribute_set(&indices)
    }

    /// Wraps raw bits as an object set of this generation.
    pub fn object_set_from_bits(&self, bits: BitSet) -> Result<ObjectSet> {
        if bits.len() != self.objects.len() {
            return Err(Error::Dimension(format!(
                "object set of width {} for {} objects",
                bits.len(),
                self.objects.len()
            )));
        }
        Ok(Set::from_bits(bits, self.generation))
    }

    pub fn attribute_set_from_bits(&self, bits: BitSet) -> Result<AttributeSet> {
        if bits.len() != self.attributes.len() {
            return Err(Error::Dimension(format!(
                "attribute set of width {} for {} attributes",
                bits.len(),
                self.attributes.len()
            )));
        }
        Ok(Set::from_bits(bits, self.generation))
    }

    pub fn all_objects(&self) -> ObjectSet {
        Set::from_bits(BitSet::full(self.objects.len()), self.generation)
    }

    pub fn no_objects(&self) -> ObjectSet {
        Set::from_bits(BitSet::new(self.objects.len()), self.generation)
    }

    pub fn all_attributes(&self) -> AttributeSet {
        Set::from_bits(BitSet::full(self.attributes.len()), self.generation)
    }

    pub fn no_attributes(&self) -> AttributeSet {
        Set::from_bits(BitSet::new(self.attributes.len()), self.generation)
    }

    /// Appends an object with the given row; returns its index.
    pub fn append_object(&mut self, name: impl Into<String>, intent: BitSet) -> Result<usize> {
        let name = name.into();
        validate_name("object", &name)?;
        if self.object_lookup.contains_key(&name) {
            return Err(Error::DuplicateIdentifier {
                kind: "object",
                name,
            });
        }
        if intent.len() != self.attributes.len() {
            return Err(Error::Dimension(format!(
                "object row of width {}, expected {}",
                intent.len(),
                self.attributes.len()
            )));
        }
        let g = self.objects.len();
        self.object_lookup.insert(name.clone(), g);
        self.objects.push(name);
        self.rows.push(intent);
        self.touch();
        Ok(g)
    }

    /// Appends an attribute with the given column; returns its index.
    pub fn append_attribute(&mut self, name: impl Into<String>, extent: BitSet) -> Result<usize> {
        let name = name.into();
        validate_name("attribute", &name)?;
        if self.attribute_lookup.contains_key(&name) {
            return Err(Error::DuplicateIdentifier {
                kind: "attribute",
                name,
            });
        }
        if extent.len() != self.objects.len() {
            return Err(Error::Dimension(format!(
                "attribute column of width {}, expected {}",
                extent.len(),
                self.objects.len()
            )));
        }
        let m = self.attributes.len();
        self.attribute_lookup.insert(name.clone(), m);
        self.attributes.push(name);
        for (g, row) in self.rows.iter_mut().enumerate() {
            row.push(extent.contains(g));
        }
        self.touch();
        Ok(m)
    }

    fn touch(&mut self) {
        self.generation = Generation::fresh();
        self.columns = OnceLock::new();
    }

    /// Parses the Burmeister-layout context format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cursor = LineCursor::new(text);
        let ctx = FormalContext::parse_from(&mut cursor)?;
        if !cursor.at_end() {
            return Err(Error::parse(
                cursor.line_number(),
                "trailing content after last row",
            ));
        }
        Ok(ctx)
    }

    pub(crate) fn parse_from(cursor: &mut LineCursor<'_>) -> Result<Self> {
        let header = cursor.expect_line("`B` header")?;
        if header.text != "B" {
            return Err(Error::parse(
                header.number,
                format!("expected `B`, found {:?}", header.text),
            ));
        }
        let (_, n_objects) = cursor.expect_count("object count")?;
        let (_, n_attributes) = cursor.expect_count("attribute count")?;
        let mut objects = Vec::with_capacity(n_objects);
        let mut object_lookup = HashMap::with_capacity(n_objects);
        for _ in 0..n_objects {
            let line = cursor.expect_line("object name")?;
            if object_lookup.insert(line.text, objects.len()).is_some() {
                return Err(Error::parse(
                    line.number,
                    format!("duplicate object `{}`", line.text),
                ));
            }
            objects.push(line.text.to_owned());
        }
        let mut attributes = Vec::with_capacity(n_attributes);
        let mut attribute_lookup = HashMap::with_capacity(n_attributes);
        for _ in 0..n_attributes {
            let line = cursor.expect_line("attribute name")?;
            if attribute_lookup
                .insert(line.text, attributes.len())
                .is_some()
            {
                return Err(Error::parse(
                    line.number,
                    format!("duplicate attribute `{}`", line.text),
                ));
            }
            attributes.push(line.text.to_owned());
        }
        let mut rows = Vec::with_capacity(n_objects);
        for _ in 0..n_objects {
            let line = cursor.expect_line("incidence row")?;
            if line.text.chars().count() != n_attributes {
                return Err(Error::parse(
                    line.number,
                    format!(
                        "row has {} cells, expected {n_attributes}",
                        line.text.chars().count()
                    ),
                ));
            }
            let mut row = BitSet::new(n_attributes);
            for (m, c) in line.text.chars().enumerate() {
                match c {
                    'X' => row.insert(m),
                    '.' => {}
                    other => {
                        return Err(Error::parse(
                            line.number,
                            format!("illegal incidence character {other:?}"),
                        ))
                    }
                }
            }
            rows.push(row);
        }
        FormalContext::new(objects, attributes, rows)
            .map_err(|e| Error::parse(cursor.line_number(), e.to_string()))
    }

    /// Writes the Burmeister-layout context format.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write_to(&mut out);
        out
    }

    pub(crate) fn write_to(&self, out: &mut String) {
        let _ = writeln!(out, "B");
        let _ = writeln!(out, "{}", self.objects.len());
        let _ = writeln!(out, "{}", self.attributes.len());
        for name in self.objects.iter().chain(&self.attributes) {
            out.push_str(name);
            out.push('\n');
        }
        for row in &self.rows {
            out.extend((0..self.attributes.len()).map(|m| if row.contains(m) { 'X' } else { '.' }));
            out.push('\n');
        }
    }
}

/// Contexts compare by identifiers, their order and incidence; the generation
/// tag is ignored.
impl PartialEq for FormalContext {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.attributes == other.attributes
            && self.rows == other.rows
    }
}

impl Eq for FormalContext {}

impl fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormalContext")
            .field("generation", &self.generation)
            .field("objects", &self.objects.len())
            .field("attributes", &self.attributes.len())
            .finish()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// g1={a,b}, g2={b,c}, g3={a,b,c}
    pub(crate) fn k1() -> FormalContext {
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

    const K1_FILE: &str = "B\n3\n3\ng1\ng2\ng3\na\nb\nc\nXX.\n.XX\nXXX\n";

    #[test]
    fn object_intent_reads_rows() {
        let k = k1();
        assert_eq!(
            k.object_intent(0).unwrap().iter().collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert!(matches!(
            k.object_intent(3),
            Err(Error::IndexOutOfRange { .. })
        ));
        let empty = FormalContext::from_bool_rows(
            ["x", "y"],
            ["p", "q"],
            &[vec![false; 2], vec![false; 2]],
        )
        .unwrap();
        assert!(empty.object_intent(1).unwrap().is_empty());
        let full = FormalContext::from_bool_rows(["x"], ["p", "q"], &[vec![true; 2]]).unwrap();
        assert_eq!(full.object_intent(0).unwrap(), full.all_attributes());
    }

    #[test]
    fn attribute_extent_reads_columns() {
        let k = k1();
        assert_eq!(k.attribute_extent(1).unwrap(), k.all_objects());
        assert_eq!(
            k.attribute_extent(0).unwrap().iter().collect::<Vec<_>>(),
            vec![0, 2]
        );
        assert!(k.attribute_extent(3).is_err());
        let empty = FormalContext::from_bool_rows(["x"], ["p"], &[vec![false]]).unwrap();
        assert!(empty.attribute_extent(0).unwrap().is_empty());
    }

    #[test]
    fn k1_file_roundtrip() {
        let k = FormalContext::parse(K1_FILE).unwrap();
        assert_eq!(k, k1());
        assert_eq!(k.serialize(), K1_FILE);
        // trailing whitespace tolerated
        assert_eq!(
            FormalContext::parse(&format!("{K1_FILE}  \n\n")).unwrap(),
            k
        );
    }

    #[test]
    fn serialize_degenerate() {
        let none = FormalContext::with_attributes(vec!["a".into()]).unwrap();
        assert_eq!(none.serialize(), "B\n0\n1\na\n");
        let one = FormalContext::from_bool_rows(["g"], ["m"], &[vec![true]]).unwrap();
        assert_eq!(one.serialize(), "B\n1\n1\ng\nm\nX\n");
    }

    #[test]
    fn parse_errors_name_lines() {
        assert!(matches!(
            FormalContext::parse(""),
            Err(Error::Parse { line: 1, .. })
        ));
        let short_row = K1_FILE.replace(".XX\n", ".X\n");
        assert!(matches!(
            FormalContext::parse(&short_row),
            Err(Error::Parse { line: 11, .. })
        ));
        let bad_char = K1_FILE.replace("XXX\n", "XoX\n");
        assert!(matches!(
            FormalContext::parse(&bad_char),
            Err(Error::Parse { line: 12, .. })
        ));
        let dup = K1_FILE.replace("g3\n", "g1\n");
        assert!(matches!(
            FormalContext::parse(&dup),
            Err(Error::Parse { line: 6, .. })
        ));
        let missing_row = "B\n3\n3\ng1\ng2\ng3\na\nb\nc\nXX.\n.XX\n";
        assert!(matches!(
            FormalContext::parse(missing_row),
            Err(Error::Parse { line: 12, .. })
        ));
        assert!(FormalContext::parse("B\nx\n").is_err());
    }

    #[test]
    fn appends_change_generation_and_columns() {
        let mut k = k1();
        let before = k.generation();
        assert_eq!(k.column(2).ones().collect::<Vec<_>>(), vec![1, 2]);
        k.append_object("g4", BitSet::from_indices(3, [2])).unwrap();
        assert_ne!(k.generation(), before);
        assert_eq!(k.column(2).ones().collect::<Vec<_>>(), vec![1, 2, 3]);
        k.append_attribute("d", BitSet::from_indices(4, [0, 3]))
            .unwrap();
        assert_eq!(k.row(3).ones().collect::<Vec<_>>(), vec![2, 3]);
        assert!(k.append_object("g1", BitSet::new(4)).is_err());
        assert!(k.append_attribute("e", BitSet::new(3)).is_err());
    }

    #[test]
    fn rejects_bad_identifiers() {
        assert!(matches!(
            FormalContext::from_bool_rows(["g", "g"], ["a"], &[vec![true], vec![false]]),
            Err(Error::DuplicateIdentifier { .. })
        ));
        assert!(FormalContext::from_bool_rows(["g"], [" a"], &[vec![true]]).is_err());
        assert!(FormalContext::from_bool_rows(["g"], ["a"], &[vec![true, false]]).is_err());
    }
}
