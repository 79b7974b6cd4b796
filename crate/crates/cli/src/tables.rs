//! Reproduction of the reference tables.
//!
//! Every computable column is recomputed. Published values sit next to them
//! with a `_published` suffix, and the integral-analysis column, which is not
//! computed here, is emitted as `IAD_pinned`.

use std::sync::Arc;

use fgbeam::assembly::{solve, BoundaryCase, ElementKind};
use fgbeam::benchmarks::{self, Ladder, DEFLECTION_COLUMNS, GRADINGS, POWER_INDICES};
use fgbeam::recovery::{max_shear_stress, ShearRecovery};
use fgbeam::{FgError, GradingKind, Result, Section};
use rayon::prelude::*;

use crate::runs::csv_error;

pub const TABLE_IDS: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub id: u8,
    pub header: Vec<String>,
    pub rows: Vec<(String, Vec<Option<f64>>)>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().skip(1).position(|h| h == name)
    }

    pub fn value(&self, row: &str, column: &str) -> Option<f64> {
        let c = self.column(column)?;
        self.rows.iter().find(|(label, _)| label == row).and_then(|(_, cells)| cells[c])
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.header).map_err(csv_error)?;
        for (label, cells) in &self.rows {
            let mut record = vec![label.clone()];
            record.extend(cells.iter().map(|c| c.map(|v| format!("{v:.5}")).unwrap_or_default()));
            w.write_record(&record).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn case_label(kind: GradingKind, p: f64) -> String {
    format!("{}{}", kind.label(), p)
}

fn rel_pct(value: f64, reference: f64) -> f64 {
    100.0 * (value - reference) / reference
}

fn cases() -> Vec<(GradingKind, usize, f64)> {
    GRADINGS.iter().flat_map(|&g| POWER_INDICES.iter().enumerate().map(move |(i, &p)| (g, i, p))).collect()
}

fn sections() -> Result<Vec<Arc<Section>>> {
    cases().par_iter().map(|&(g, _, p)| Section::benchmark(g, p).map(Arc::new)).collect()
}

fn deflection(section: &Arc<Section>, boundary: BoundaryCase, kind: ElementKind, n: usize) -> Result<f64> {
    solve(&benchmarks::benchmark_model(section.clone(), boundary, kind, n)?)?.reported_deflection()
}

pub fn run_table(id: u8) -> Result<Table> {
    match id {
        1 => g_table(),
        2 => ladder_table(id, &benchmarks::CANTILEVER_B5_LADDER),
        3 => ladder_table(id, &benchmarks::CANTILEVER_C5_LADDER),
        4 => deflection_table(id, BoundaryCase::CF),
        5 => shear_table(id, BoundaryCase::CF),
        6 => ladder_table(id, &benchmarks::SIMPLY_SUPPORTED_C5_LADDER),
        7 => ladder_table(id, &benchmarks::CLAMPED_C5_LADDER),
        8 => deflection_table(id, BoundaryCase::SS),
        9 => deflection_table(id, BoundaryCase::CC),
        10 => shear_table(id, BoundaryCase::CC),
        _ => Err(FgError::Config(format!("unknown table {id}; expected 1 to 10"))),
    }
}

fn g_table() -> Result<Table> {
    let sections = sections()?;
    let rows = cases()
        .iter()
        .zip(&sections)
        .map(|(&(g, i, p), s)| {
            let value = s.constants().g();
            let published = benchmarks::G_VALUES[benchmarks::grading_index(g)][i];
            (case_label(g, p), vec![Some(value), Some(published), Some((value - published).abs())])
        })
        .collect();
    Ok(Table { id: 1, header: ["case", "g", "g_published", "abs_diff"].map(String::from).to_vec(), rows })
}

fn ladder_table(id: u8, ladder: &Ladder) -> Result<Table> {
    let section = Arc::new(Section::benchmark(ladder.grading, ladder.p)?);
    let meshes: Vec<usize> = ladder.rows.iter().map(|r| r.0).collect();
    let jobs: Vec<(usize, usize)> = (0..meshes.len()).flat_map(|r| (0..DEFLECTION_COLUMNS.len()).map(move |k| (r, k))).collect();
    let values = jobs
        .par_iter()
        .map(|&(r, k)| deflection(&section, ladder.boundary, DEFLECTION_COLUMNS[k], meshes[r]))
        .collect::<Result<Vec<_>>>()?;
    let mut header = vec!["elements".to_string()];
    for kind in DEFLECTION_COLUMNS {
        header.extend([kind.label().to_string(), format!("{}_published", kind.label()), format!("{}_err_pct", kind.label())]);
    }
    let mut rows = Vec::new();
    let width = DEFLECTION_COLUMNS.len();
    for (r, (n, published)) in ladder.rows.iter().enumerate() {
        let mut cells = Vec::new();
        for k in 0..width {
            let v = values[r * width + k];
            cells.extend([Some(v), published[k], published[k].map(|p| rel_pct(v, p))]);
        }
        rows.push((n.to_string(), cells));
    }
    let finest = &values[(meshes.len() - 1) * width..];
    let mut cells = Vec::new();
    for k in 0..width {
        cells.extend([Some(finest[k]), Some(ladder.converged[k]), Some(rel_pct(finest[k], ladder.converged[k]))]);
    }
    rows.push(("converged".to_string(), cells));
    Ok(Table { id, header, rows })
}

fn deflection_table(id: u8, boundary: BoundaryCase) -> Result<Table> {
    let sections = sections()?;
    let published = benchmarks::deflections(boundary);
    let jobs: Vec<(usize, usize)> = (0..sections.len()).flat_map(|c| (0..DEFLECTION_COLUMNS.len()).map(move |k| (c, k))).collect();
    let values = jobs
        .par_iter()
        .map(|&(c, k)| {
            let kind = DEFLECTION_COLUMNS[k];
            deflection(&sections[c], boundary, kind, benchmarks::comparison_mesh(kind, boundary))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut header = vec!["case".to_string()];
    for kind in DEFLECTION_COLUMNS {
        header.extend([kind.label().to_string(), format!("{}_published", kind.label()), format!("{}_err_iad_pct", kind.label())]);
    }
    header.push("IAD_pinned".into());
    let width = DEFLECTION_COLUMNS.len();
    let rows = cases()
        .iter()
        .enumerate()
        .map(|(c, &(g, i, p))| {
            let row = published[benchmarks::grading_index(g)][i];
            let iad = row[5];
            let mut cells = Vec::new();
            for k in 0..width {
                let v = values[c * width + k];
                cells.extend([Some(v), Some(row[k]), Some(rel_pct(v, iad))]);
            }
            cells.push(Some(iad));
            (case_label(g, p), cells)
        })
        .collect();
    Ok(Table { id, header, rows })
}

fn shear_table(id: u8, boundary: BoundaryCase) -> Result<Table> {
    let sections = sections()?;
    let published = benchmarks::peak_shear(boundary).expect("shear table exists for this support");
    let x = benchmarks::shear_section(boundary);
    let beam_kinds = [ElementKind::Dts, ElementKind::Pfts];
    let beam = (0..sections.len())
        .flat_map(|c| beam_kinds.iter().map(move |&k| (c, k)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(c, kind)| {
            let m = benchmarks::benchmark_model(sections[c].clone(), boundary, kind, benchmarks::comparison_mesh(kind, boundary))?;
            max_shear_stress(&solve(&m)?, x, ShearRecovery::default_for(kind)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let plane = cases()
        .par_iter()
        .map(|&(g, _, p)| {
            let s = benchmarks::benchmark_plane_model(g, p, boundary)?.solve()?;
            Ok(s.stress_profile(x)?.max_abs_tau())
        })
        .collect::<Result<Vec<_>>>()?;
    let header = [
        "case", "DTS", "DTS_published", "DTS_err_q4_pct", "PFTS", "PFTS_published", "PFTS_err_q4_pct", "Q4", "Q4_published",
    ]
    .map(String::from)
    .to_vec();
    let rows = cases()
        .iter()
        .enumerate()
        .map(|(c, &(g, i, p))| {
            let row = published[benchmarks::grading_index(g)][i];
            let (dts, pfts, q4) = (beam[2 * c], beam[2 * c + 1], plane[c]);
            let cells = vec![
                Some(dts),
                Some(row[0]),
                Some(rel_pct(dts, q4)),
                Some(pfts),
                Some(row[1]),
                Some(rel_pct(pfts, q4)),
                Some(q4),
                Some(row[2]),
            ];
            (case_label(g, p), cells)
        })
        .collect();
    Ok(Table { id, header, rows })
}
