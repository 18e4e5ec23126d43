//! Many-valued contexts and nominal scaling.

use std::collections::HashSet;
use std::io::Read;
use std::ops::Range;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};

/// One many-valued column: its admissible values and missing marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub domain: Vec<String>,
    pub missing: String,
}

/// Parses a schema: one `name : v1,v2,...,vk : missing` line per column.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_schema(text: &str) -> Result<Vec<Column>> {
    let mut columns: Vec<Column> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(" : ").map(str::trim).collect();
        let [name, values, missing] = parts[..] else {
            return Err(Error::parse(
                i + 1,
                format!("expected `name : values : missing`, found {line:?}"),
            ));
        };
        if name.is_empty() {
            return Err(Error::parse(i + 1, "empty column name"));
        }
        if columns.iter().any(|c| c.name == name) {
            return Err(Error::parse(i + 1, format!("duplicate column `{name}`")));
        }
        let domain: Vec<String> = values
            .split(',')
            .map(|v| v.trim().to_owned())
            .filter(|v| !v.is_empty())
            .collect();
        if domain.iter().collect::<HashSet<_>>().len() != domain.len() {
            return Err(Error::parse(
                i + 1,
                format!("repeated value in domain of `{name}`"),
            ));
        }
        if domain.iter().any(|v| v == missing) {
            return Err(Error::parse(
                i + 1,
                format!("missing marker of `{name}` is also a domain value"),
            ));
        }
        columns.push(Column {
            name: name.to_owned(),
            domain,
            missing: missing.to_owned(),
        });
    }
    Ok(columns)
}

/// A table of value strings over declared column domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManyValuedContext {
    objects: Vec<String>,
    columns: Vec<Column>,
    cells: Vec<Vec<String>>,
}

impl ManyValuedContext {
    /// Checks that every cell is a domain value or the missing marker.
    pub fn new(
        objects: Vec<String>,
        columns: Vec<Column>,
        cells: Vec<Vec<String>>,
    ) -> Result<Self> {
        if objects.len() != cells.len() {
            return Err(Error::Dimension(format!(
                "{} rows for {} objects",
                cells.len(),
                objects.len()
            )));
        }
        for (r, row) in cells.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::Data {
                    row: r + 1,
                    column: String::new(),
                    message: format!("{} cells, expected {}", row.len(), columns.len()),
                });
            }
            for (cell, col) in row.iter().zip(&columns) {
                check_cell(r, col, cell)?;
            }
        }
        Ok(ManyValuedContext {
            objects,
            columns,
            cells,
        })
    }

    /// Reads comma-separated rows; object `i` (1-based, data rows only) is
    /// named `o<i>`.
    pub fn from_csv<R: Read>(reader: R, columns: Vec<Column>, has_header: bool) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(has_header)
            .flexible(true)
            .from_reader(reader);
        let mut objects = Vec::new();
        let mut cells = Vec::new();
        for (r, record) in csv.records().enumerate() {
            let record = record?;
            let row: Vec<String> = record.iter().map(|c| c.trim().to_owned()).collect();
            if row.len() == 1 && row[0].is_empty() {
                continue;
            }
            objects.push(format!("o{}", r + 1));
            cells.push(row);
        }
        ManyValuedContext::new(objects, columns, cells)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn cells(&self) -> &[Vec<String>] {
        &self.cells
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    /// Drops the named columns.
    pub fn without_columns<N: AsRef<str>>(&self, names: &[N]) -> Result<Self> {
        let drop: HashSet<&str> = names.iter().map(AsRef::as_ref).collect();
        for name in &drop {
            if !self.columns.iter().any(|c| c.name == *name) {
                return Err(Error::UnknownName {
                    kind: "column",
                    name: (*name).to_owned(),
                });
            }
        }
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&c| !drop.contains(self.columns[c].name.as_str()))
            .collect();
        Ok(ManyValuedContext {
            objects: self.objects.clone(),
            columns: keep.iter().map(|&c| self.columns[c].clone()).collect(),
            cells: self
                .cells
                .iter()
                .map(|row| keep.iter().map(|&c| row[c].clone()).collect())
                .collect(),
        })
    }

    /// The rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.objects.len()) {
            return Err(Error::IndexOutOfRange {
                kind: "row",
                index: bad,
                size: self.objects.len(),
            });
        }
        Ok(ManyValuedContext {
            objects: indices.iter().map(|&i| self.objects[i].clone()).collect(),
            columns: self.columns.clone(),
            cells: indices.iter().map(|&i| self.cells[i].clone()).collect(),
        })
    }
}

fn check_cell(row: usize, col: &Column, cell: &str) -> Result<()> {
    if cell != col.missing && !col.domain.iter().any(|v| v == cell) {
        return Err(Error::Data {
            row: row + 1,
            column: col.name.clone(),
            message: format!("value {cell:?} outside domain {{{}}}", col.domain.join(",")),
        });
    }
    Ok(())
}

/// What a missing cell contributes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MissingPolicy {
    /// No attribute.
    #[default]
    NoAttribute,
    /// One extra `column=<marker>` attribute for columns that have missing cells.
    OwnAttribute,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ScaledColumn {
    column: Column,
    offset: usize,
    has_missing_attribute: bool,
}

/// Nominal scale: column `c` with value `v` becomes attribute `c=v`.
///
/// Attributes are laid out column by column in source order, values in
/// declared domain order, with the missing attribute (if any) last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NominalScale {
    columns: Vec<ScaledColumn>,
    attributes: Vec<String>,
    policy: MissingPolicy,
}

impl NominalScale {
    pub fn build(mvc: &ManyValuedContext, policy: MissingPolicy) -> Result<Self> {
        let mut columns = Vec::with_capacity(mvc.columns.len());
        let mut attributes = Vec::new();
        let mut seen = HashSet::new();
        for (c, col) in mvc.columns.iter().enumerate() {
            if col.domain.is_empty() {
                return Err(Error::Schema(format!(
                    "column `{}` has an empty domain",
                    col.name
                )));
            }
            let has_missing_attribute = policy == MissingPolicy::OwnAttribute
                && mvc.cells.iter().any(|row| row[c] == col.missing);
            let offset = attributes.len();
            let mut names: Vec<String> = col
                .domain
                .iter()
                .map(|v| format!("{}={v}", col.name))
                .collect();
            if has_missing_attribute {
                names.push(format!("{}={}", col.name, col.missing));
            }
            for name in names {
                if !seen.insert(name.clone()) {
                    return Err(Error::Schema(format!(
                        "scaled attribute `{name}` produced twice"
                    )));
                }
                attributes.push(name);
            }
            columns.push(ScaledColumn {
                column: col.clone(),
                offset,
                has_missing_attribute,
            });
        }
        Ok(NominalScale {
            columns,
            attributes,
            policy,
        })
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn policy(&self) -> MissingPolicy {
        self.policy
    }

    /// Source column name and the range of scaled attributes it produced.
    pub fn blocks(&self) -> impl Iterator<Item = (&str, Range<usize>)> + '_ {
        self.columns.iter().map(|sc| {
            let width = sc.column.domain.len() + usize::from(sc.has_missing_attribute);
            (sc.column.name.as_str(), sc.offset..sc.offset + width)
        })
    }

    /// Scaled row for one record of cells; `row` is used in error reports.
    pub fn scale_row(&self, row: usize, cells: &[String]) -> Result<BitSet> {
        if cells.len() != self.columns.len() {
            return Err(Error::Data {
                row: row + 1,
                column: String::new(),
                message: format!("{} cells, expected {}", cells.len(), self.columns.len()),
            });
        }
        let mut bits = BitSet::new(self.attributes.len());
        for (cell, sc) in cells.iter().zip(&self.columns) {
            let col = &sc.column;
            if *cell == col.missing {
                if sc.has_missing_attribute {
                    bits.insert(sc.offset + col.domain.len());
                }
                continue;
            }
            match col.domain.iter().position(|v| v == cell) {
                Some(v) => bits.insert(sc.offset + v),
                None => check_cell(row, col, cell)?,
            }
        }
        Ok(bits)
    }

    pub fn apply(&self, mvc: &ManyValuedContext) -> Result<FormalContext> {
        let sources: Vec<&Column> = self.columns.iter().map(|c| &c.column).collect();
        if mvc.columns.iter().collect::<Vec<_>>() != sources {
            return Err(Error::Schema(
                "scale was built for different columns".to_owned(),
            ));
        }
        let rows = mvc
            .cells
            .iter()
            .enumerate()
            .map(|(r, cells)| self.scale_row(r, cells))
            .collect::<Result<Vec<_>>>()?;
        FormalContext::new(mvc.objects.clone(), self.attributes.clone(), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yn(names: &[&str]) -> Vec<Column> {
        names
            .iter()
            .map(|n| Column {
                name: (*n).to_owned(),
                domain: vec!["y".into(), "n".into()],
                missing: "?".into(),
            })
            .collect()
    }

    fn mvc(columns: Vec<Column>, rows: &[&[&str]]) -> Result<ManyValuedContext> {
        ManyValuedContext::new(
            (0..rows.len()).map(|i| format!("o{i}")).collect(),
            columns,
            rows.iter()
                .map(|r| r.iter().map(|c| (*c).to_owned()).collect())
                .collect(),
        )
    }

    #[test]
    fn schema_parsing() {
        let cols =
            parse_schema("# votes\nclass : democrat,republican : ?\n\nwater : y,n : ?\n").unwrap();
        assert_eq!(cols.len(), 2);
        assert_eq!(cols[0].domain, vec!["democrat", "republican"]);
        assert_eq!(cols[1].missing, "?");
        assert!(matches!(
            parse_schema("a : x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_schema("a : x : ?\na : y : ?\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_schema("a : x,? : ?\n").is_err());
    }

    #[test]
    fn scaling_with_missing_cell() {
        let m = mvc(yn(&["p", "q", "r"]), &[&["y", "?", "n"]]).unwrap();
        let scale = NominalScale::build(&m, MissingPolicy::NoAttribute).unwrap();
        assert_eq!(
            scale.attributes(),
            ["p=y", "p=n", "q=y", "q=n", "r=y", "r=n"]
        );
        let ctx = scale.apply(&m).unwrap();
        assert_eq!(ctx.row(0).to_bit_string(), "100001");

        let own = NominalScale::build(&m, MissingPolicy::OwnAttribute).unwrap();
        assert_eq!(own.attributes().len(), 7);
        let blocks: Vec<_> = own.blocks().collect();
        assert_eq!(blocks, vec![("p", 0..2), ("q", 2..5), ("r", 5..7)]);
        assert_eq!(own.apply(&m).unwrap().row(0).to_bit_string(), "1000101");
    }

    #[test]
    fn degenerate_rows() {
        let m = mvc(yn(&["p", "q"]), &[&["?", "?"]]).unwrap();
        let ctx = NominalScale::build(&m, MissingPolicy::NoAttribute)
            .unwrap()
            .apply(&m)
            .unwrap();
        assert!(ctx.row(0).is_clear());

        let col = vec![Column {
            name: "c".into(),
            domain: vec!["v".into(), "w".into()],
            missing: "?".into(),
        }];
        let m = mvc(col, &[&["v"]]).unwrap();
        let ctx = NominalScale::build(&m, MissingPolicy::NoAttribute)
            .unwrap()
            .apply(&m)
            .unwrap();
        assert_eq!(ctx.row(0).to_bit_string(), "10");

        let single = vec![Column {
            name: "c".into(),
            domain: vec!["x".into()],
            missing: "?".into(),
        }];
        let m = mvc(single, &[]).unwrap();
        assert_eq!(
            NominalScale::build(&m, MissingPolicy::NoAttribute)
                .unwrap()
                .attributes()
                .len(),
            1
        );
    }

    #[test]
    fn bad_cells_and_collisions() {
        let err = mvc(yn(&["p", "q"]), &[&["y", "n"], &["y", "maybe"]]).unwrap_err();
        assert!(matches!(err, Error::Data { row: 2, ref column, .. } if column == "q"));

        let clash = vec![
            Column {
                name: "a=b".into(),
                domain: vec!["c".into()],
                missing: "?".into(),
            },
            Column {
                name: "a".into(),
                domain: vec!["b=c".into()],
                missing: "?".into(),
            },
        ];
        let m = mvc(clash, &[]).unwrap();
        assert!(matches!(
            NominalScale::build(&m, MissingPolicy::NoAttribute),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn csv_and_projection() {
        let data = "republican,n,y\ndemocrat,?,y\n";
        let mut cols = parse_schema("class : democrat,republican : ?").unwrap();
        cols.extend(yn(&["p", "q"]));
        let m = ManyValuedContext::from_csv(data.as_bytes(), cols.clone(), false).unwrap();
        assert_eq!(m.objects(), ["o1", "o2"]);
        let m = m.without_columns(&["class"]).unwrap();
        assert_eq!(m.columns().len(), 2);
        let ctx = NominalScale::build(&m, MissingPolicy::NoAttribute)
            .unwrap()
            .apply(&m)
            .unwrap();
        assert_eq!(ctx.row(0).to_bit_string(), "0110");
        assert_eq!(ctx.row(1).to_bit_string(), "0010");
        assert!(m.without_columns(&["nope"]).is_err());

        let with_header = format!("class,p,q\n{data}");
        let h = ManyValuedContext::from_csv(with_header.as_bytes(), cols.clone(), true).unwrap();
        assert_eq!(h.n_objects(), 2);
        assert!(ManyValuedContext::from_csv("democrat,y\n".as_bytes(), cols, false).is_err());
    }

    #[test]
    fn scale_is_deterministic() {
        let m = mvc(yn(&["p", "q"]), &[&["y", "n"], &["?", "y"]]).unwrap();
        let a = NominalScale::build(&m, MissingPolicy::NoAttribute)
            .unwrap()
            .apply(&m)
            .unwrap();
        let b = NominalScale::build(&m, MissingPolicy::NoAttribute)
            .unwrap()
            .apply(&m)
            .unwrap();
        assert_eq!(a.serialize(), b.serialize());
    }
}
