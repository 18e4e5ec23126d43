//! Formation and incremental-update timings, reported per initial size.

use std::fmt::Write as _;
use std::time::Instant;

use gccl_core::LearningState;
use log::{info, warn};

use crate::dataset::{Dataset, PublishedRow, PUBLISHED_BATCH_SIZES};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Markdown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub label: String,
    pub instances: usize,
    pub original_attributes: usize,
    pub scaled_attributes: usize,
    pub concepts: usize,
    pub build_seconds: f64,
    /// Median seconds per batch size; `None` when the dataset ran out of rows.
    pub batch_seconds: Vec<Option<f64>>,
    pub published: Option<PublishedRow>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub batch_sizes: Vec<usize>,
    pub rows: Vec<BenchRow>,
}

pub fn median(mut samples: Vec<f64>) -> f64 {
    assert!(!samples.is_empty(), "median of no samples");
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2.0
    }
}

/// Runs `setup` then times `run` on its output, `reps` times (at least once);
/// returns the last output and the median seconds.
pub fn time_median<S, T>(
    reps: usize,
    mut setup: impl FnMut() -> S,
    mut run: impl FnMut(S) -> T,
) -> (T, f64) {
    let mut samples = Vec::with_capacity(reps.max(1));
    let mut last = None;
    for _ in 0..reps.max(1) {
        let input = setup();
        let start = Instant::now();
        let out = run(input);
        samples.push(start.elapsed().as_secs_f64());
        last = Some(out);
    }
    (last.expect("at least one repetition"), median(samples))
}

/// Builds the state of the first `n` rows.
pub fn run_formation(
    data: &Dataset,
    n: usize,
    reps: usize,
) -> Result<(LearningState, BenchRow), CliError> {
    let context = data.context(n)?;
    let (state, seconds) = time_median(reps, || context.clone(), LearningState::new);
    info!(
        "{} n={n}: {} concepts in {seconds:.5}s",
        data.label,
        state.space().len()
    );
    let row = BenchRow {
        label: data.label.clone(),
        instances: n,
        original_attributes: data.original_attributes,
        scaled_attributes: data.scaled_attributes(),
        concepts: state.space().len(),
        build_seconds: seconds,
        batch_seconds: Vec::new(),
        published: None,
    };
    Ok((state, row))
}

/// Times adding each batch size of rows to a copy of `state`, taking the rows
/// that follow the ones already in it. Every batch starts from `state`.
pub fn run_incremental(
    state: &LearningState,
    data: &Dataset,
    batch_sizes: &[usize],
    reps: usize,
) -> Result<Vec<Option<f64>>, CliError> {
    let start = state.context().n_objects();
    let mut out = Vec::with_capacity(batch_sizes.len());
    for &size in batch_sizes {
        let Some(rows) = data.rows(start, size) else {
            warn!(
                "{}: batch of {size} after row {start} needs {} rows, only {} available; skipped",
                data.label,
                start + size,
                data.len()
            );
            out.push(None);
            continue;
        };
        let (result, seconds) = time_median(
            reps,
            || (state.clone(), rows.to_vec()),
            // the grown state is returned so it is dropped outside the timed span
            |(mut s, r)| s.extend_with_objects(r).map(|()| s),
        );
        let concepts = result?.space().len();
        info!(
            "{}: +{size} rows -> {concepts} concepts in {seconds:.5}s",
            data.label
        );
        out.push(Some(seconds));
    }
    Ok(out)
}

fn seconds(value: Option<f64>) -> String {
    value.map_or_else(|| "--".to_owned(), |s| format!("{s:.5}"))
}

fn table(format: Format, header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    match format {
        Format::Tsv => {
            for line in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
                out.push_str(&line.join("\t"));
                out.push('\n');
            }
        }
        Format::Markdown => {
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
            for row in rows {
                let _ = writeln!(out, "| {} |", row.join(" | "));
            }
        }
    }
    out
}

/// Report table, columns in [`BenchRow`] field order.
pub fn emit_report(report: &BenchReport, format: Format) -> String {
    let mut header: Vec<String> = [
        "dataset",
        "instances",
        "attributes_o",
        "attributes_s",
        "concepts",
        "initial_s",
    ]
    .map(String::from)
    .to_vec();
    header.extend(report.batch_sizes.iter().map(|b| format!("batch_{b}_s")));
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let mut cells = vec![
                r.label.clone(),
                r.instances.to_string(),
                r.original_attributes.to_string(),
                r.scaled_attributes.to_string(),
                r.concepts.to_string(),
                format!("{:.5}", r.build_seconds),
            ];
            cells.extend(r.batch_seconds.iter().map(|s| seconds(*s)));
            cells
        })
        .collect();
    table(format, &header, &rows)
}

/// Relative difference `(ours - theirs) / theirs` in percent.
pub fn delta_percent(ours: usize, theirs: usize) -> f64 {
    (ours as f64 - theirs as f64) / theirs as f64 * 100.0
}

/// Side-by-side comparison with the published figures, for rows that have them.
pub fn emit_comparison(report: &BenchReport, format: Format) -> String {
    let mut header: Vec<String> = [
        "dataset",
        "instances",
        "attributes_s",
        "published_attributes_s",
        "concepts",
        "published_concepts",
        "concepts_delta_pct",
        "initial_s",
        "published_initial_s",
    ]
    .map(String::from)
    .to_vec();
    for b in &report.batch_sizes {
        header.push(format!("batch_{b}_s"));
        header.push(format!("published_batch_{b}_s"));
    }
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .filter_map(|r| {
            let p = r.published?;
            let mut cells = vec![
                r.label.clone(),
                r.instances.to_string(),
                r.scaled_attributes.to_string(),
                p.scaled_attributes.to_string(),
                r.concepts.to_string(),
                p.concepts.to_string(),
                format!("{:+.1}", delta_percent(r.concepts, p.concepts)),
                format!("{:.5}", r.build_seconds),
                format!("{:.4}", p.initial_seconds),
            ];
            for (b, ours) in report.batch_sizes.iter().zip(&r.batch_seconds) {
                let theirs = PUBLISHED_BATCH_SIZES
                    .iter()
                    .position(|x| x == b)
                    .and_then(|i| p.batch_seconds[i]);
                cells.push(seconds(*ours));
                cells.push(theirs.map_or_else(|| "--".to_owned(), |s| format!("{s:.4}")));
            }
            Some(cells)
        })
        .collect();
    table(format, &header, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BenchReport {
        BenchReport {
            batch_sizes: vec![10, 1000],
            rows: vec![BenchRow {
                label: "voting".into(),
                instances: 20,
                original_attributes: 16,
                scaled_attributes: 32,
                concepts: 60,
                build_seconds: 0.000123456,
                batch_seconds: vec![Some(0.5), None],
                published: crate::dataset::VOTING.published_row(20),
            }],
        }
    }

    #[test]
    fn tsv_and_markdown_cells_match() {
        let report = sample();
        let tsv = emit_report(&report, Format::Tsv);
        assert_eq!(
            tsv,
            "dataset\tinstances\tattributes_o\tattributes_s\tconcepts\tinitial_s\tbatch_10_s\tbatch_1000_s\n\
             voting\t20\t16\t32\t60\t0.00012\t0.50000\t--\n"
        );
        let md = emit_report(&report, Format::Markdown);
        let md_cells: Vec<Vec<&str>> = md
            .lines()
            .filter(|l| !l.starts_with("|---"))
            .map(|l| l.trim_matches('|').split('|').map(str::trim).collect())
            .collect();
        let tsv_cells: Vec<Vec<&str>> = tsv.lines().map(|l| l.split('\t').collect()).collect();
        assert_eq!(md_cells, tsv_cells);
    }

    #[test]
    fn empty_report_is_header_only() {
        let report = BenchReport {
            batch_sizes: vec![10],
            rows: vec![],
        };
        assert_eq!(emit_report(&report, Format::Tsv).lines().count(), 1);
        assert_eq!(emit_report(&report, Format::Markdown).lines().count(), 2);
    }

    #[test]
    fn comparison_shows_delta() {
        let out = emit_comparison(&sample(), Format::Tsv);
        let row: Vec<&str> = out.lines().nth(1).unwrap().split('\t').collect();
        assert_eq!(row[5], "55");
        assert_eq!(row[6], "+9.1");
        assert_eq!(&row[9..], ["0.50000", "0.2186", "--", "--"]);
    }

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0]), 2.5);
    }
}
