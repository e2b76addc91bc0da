//! Orthogonal arrays and Taguchi main-effects analysis.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::Sense;

/// Experiment-design matrix with per-column level counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    levels: Vec<usize>,
    matrix: Vec<Vec<u8>>,
    strength: usize,
}

// OA(50, 2^1 × 5^11, 2). Column 0 is the two-level factor. Built from
// two GF(5) half-designs: six linear columns (with per-half offsets) and
// five quadratic columns whose second half uses a non-square leading
// coefficient.
const L50_DATA: [[u8; 12]; 50] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [0, 0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    [0, 0, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3],
    [0, 0, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4],
    [0, 1, 0, 1, 2, 3, 4, 1, 2, 3, 4, 0],
    [0, 1, 1, 2, 3, 4, 0, 2, 3, 4, 0, 1],
    [0, 1, 2, 3, 4, 0, 1, 3, 4, 0, 1, 2],
    [0, 1, 3, 4, 0, 1, 2, 4, 0, 1, 2, 3],
    [0, 1, 4, 0, 1, 2, 3, 0, 1, 2, 3, 4],
    [0, 2, 0, 2, 4, 1, 3, 4, 1, 3, 0, 2],
    [0, 2, 1, 3, 0, 2, 4, 0, 2, 4, 1, 3],
    [0, 2, 2, 4, 1, 3, 0, 1, 3, 0, 2, 4],
    [0, 2, 3, 0, 2, 4, 1, 2, 4, 1, 3, 0],
    [0, 2, 4, 1, 3, 0, 2, 3, 0, 2, 4, 1],
    [0, 3, 0, 3, 1, 4, 2, 4, 2, 0, 3, 1],
    [0, 3, 1, 4, 2, 0, 3, 0, 3, 1, 4, 2],
    [0, 3, 2, 0, 3, 1, 4, 1, 4, 2, 0, 3],
    [0, 3, 3, 1, 4, 2, 0, 2, 0, 3, 1, 4],
    [0, 3, 4, 2, 0, 3, 1, 3, 1, 4, 2, 0],
    [0, 4, 0, 4, 3, 2, 1, 1, 0, 4, 3, 2],
    [0, 4, 1, 0, 4, 3, 2, 2, 1, 0, 4, 3],
    [0, 4, 2, 1, 0, 4, 3, 3, 2, 1, 0, 4],
    [0, 4, 3, 2, 1, 0, 4, 4, 3, 2, 1, 0],
    [0, 4, 4, 3, 2, 1, 0, 0, 4, 3, 2, 1],
    [1, 0, 0, 2, 3, 3, 2, 0, 4, 1, 1, 4],
    [1, 0, 1, 3, 4, 4, 3, 1, 0, 2, 2, 0],
    [1, 0, 2, 4, 0, 0, 4, 2, 1, 3, 3, 1],
    [1, 0, 3, 0, 1, 1, 0, 3, 2, 4, 4, 2],
    [1, 0, 4, 1, 2, 2, 1, 4, 3, 0, 0, 3],
    [1, 1, 0, 3, 0, 1, 1, 2, 3, 2, 4, 4],
    [1, 1, 1, 4, 1, 2, 2, 3, 4, 3, 0, 0],
    [1, 1, 2, 0, 2, 3, 3, 4, 0, 4, 1, 1],
    [1, 1, 3, 1, 3, 4, 4, 0, 1, 0, 2, 2],
    [1, 1, 4, 2, 4, 0, 0, 1, 2, 1, 3, 3],
    [1, 2, 0, 4, 2, 4, 0, 3, 1, 2, 1, 3],
    [1, 2, 1, 0, 3, 0, 1, 4, 2, 3, 2, 4],
    [1, 2, 2, 1, 4, 1, 2, 0, 3, 4, 3, 0],
    [1, 2, 3, 2, 0, 2, 3, 1, 4, 0, 4, 1],
    [1, 2, 4, 3, 1, 3, 4, 2, 0, 1, 0, 2],
    [1, 3, 0, 0, 4, 2, 4, 3, 3, 1, 2, 1],
    [1, 3, 1, 1, 0, 3, 0, 4, 4, 2, 3, 2],
    [1, 3, 2, 2, 1, 4, 1, 0, 0, 3, 4, 3],
    [1, 3, 3, 3, 2, 0, 2, 1, 1, 4, 0, 4],
    [1, 3, 4, 4, 3, 1, 3, 2, 2, 0, 1, 0],
    [1, 4, 0, 1, 1, 0, 3, 2, 4, 4, 2, 3],
    [1, 4, 1, 2, 2, 1, 4, 3, 0, 0, 3, 4],
    [1, 4, 2, 3, 3, 2, 0, 4, 1, 1, 4, 0],
    [1, 4, 3, 4, 4, 3, 1, 0, 2, 2, 0, 1],
    [1, 4, 4, 0, 0, 4, 2, 1, 3, 3, 1, 2],
];

/// One failing (column pair, level pair) cell of a strength-2 check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub columns: (usize, usize),
    pub levels: (usize, usize),
    pub count: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub rows: usize,
    pub pairs_checked: usize,
    pub violations: Vec<PairViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Human-readable summary, one line per violation.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{}: {} rows, {} column pairs checked, {} violations\n",
            if self.is_valid() { "PASS" } else { "FAIL" },
            self.rows,
            self.pairs_checked,
            self.violations.len()
        );
        for v in &self.violations {
            writeln!(
                out,
                "  columns ({}, {}) levels ({}, {}): count {} expected {}",
                v.columns.0, v.columns.1, v.levels.0, v.levels.1, v.count, v.expected
            )
            .unwrap();
        }
        out
    }
}

impl OrthogonalArray {
    pub fn new(levels: Vec<usize>, matrix: Vec<Vec<u8>>, strength: usize) -> Result<Self> {
        if levels.is_empty() || matrix.is_empty() {
            return Err(invalid("orthogonal array needs at least one row and column"));
        }
        if levels.iter().any(|l| *l < 2 || *l > u8::MAX as usize) {
            return Err(invalid("level counts must lie in [2, 255]"));
        }
        for (r, row) in matrix.iter().enumerate() {
            if row.len() != levels.len() {
                return Err(invalid(format!(
                    "row {r} has {} entries, expected {}",
                    row.len(),
                    levels.len()
                )));
            }
            if let Some((j, v)) = row.iter().enumerate().find(|(j, v)| **v as usize >= levels[*j]) {
                return Err(invalid(format!("row {r} column {j}: level {v} out of range")));
            }
        }
        Ok(OrthogonalArray { levels, matrix, strength })
    }

    /// L27(3^13) from the 13 projective points of GF(3)^3: row `(a, b, c)`,
    /// column `(u, v, w)` holds `ua + vb + wc mod 3`.
    pub fn l27() -> Self {
        const COLUMNS: [[u8; 3]; 13] = [
            [1, 0, 0],
            [0, 1, 0],
            [1, 1, 0],
            [1, 2, 0],
            [0, 0, 1],
            [1, 0, 1],
            [1, 0, 2],
            [0, 1, 1],
            [1, 1, 1],
            [1, 2, 2],
            [0, 1, 2],
            [1, 2, 1],
            [1, 1, 2],
        ];
        let mut matrix = Vec::with_capacity(27);
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    matrix.push(
                        COLUMNS
                            .iter()
                            .map(|[u, v, w]| (u * a + v * b + w * c) % 3)
                            .collect(),
                    );
                }
            }
        }
        OrthogonalArray::new(vec![3; 13], matrix, 2).expect("L27 is well formed")
    }

    /// L50(2^1 x 5^11).
    pub fn l50() -> Self {
        let mut levels = vec![5; 12];
        levels[0] = 2;
        OrthogonalArray::new(levels, L50_DATA.iter().map(|r| r.to_vec()).collect(), 2)
            .expect("L50 is well formed")
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn columns(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.matrix[r]
    }

    pub fn level(&self, r: usize, j: usize) -> usize {
        self.matrix[r][j] as usize
    }

    /// FNV-1a over the level counts and matrix, for locking embedded data.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        for l in &self.levels {
            eat(*l as u8);
        }
        for row in &self.matrix {
            for v in row {
                eat(*v);
            }
        }
        h
    }

    /// Exhaustive pair-balance check over every column pair.
    pub fn validate_strength2(&self) -> ValidationReport {
        let rows = self.rows();
        let mut violations = Vec::new();
        let mut pairs_checked = 0;
        for j in 0..self.columns() {
            for k in j + 1..self.columns() {
                pairs_checked += 1;
                let (lj, lk) = (self.levels[j], self.levels[k]);
                let mut counts = vec![0usize; lj * lk];
                for row in &self.matrix {
                    counts[row[j] as usize * lk + row[k] as usize] += 1;
                }
                let expected = rows / (lj * lk);
                let divisible = rows % (lj * lk) == 0;
                for (cell, &count) in counts.iter().enumerate() {
                    if !divisible || count != expected {
                        violations.push(PairViolation {
                            columns: (j, k),
                            levels: (cell / lk, cell % lk),
                            count,
                            expected,
                        });
                    }
                }
            }
        }
        ValidationReport { rows, pairs_checked, violations }
    }

    /// Text form: `rows cols strength`, the level counts, then one row of
    /// space-separated level indices per experiment.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows(), self.columns(), self.strength);
        let levels: Vec<String> = self.levels.iter().map(ToString::to_string).collect();
        writeln!(out, "{}", levels.join(" ")).unwrap();
        for row in &self.matrix {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", cells.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        fn parse_line(line: &str) -> Result<Vec<usize>> {
            line.split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
                .collect()
        }
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = parse_line(lines.next().ok_or_else(|| Error::Parse("empty array file".into()))?)?;
        let [rows, cols, strength] = header[..] else {
            return Err(Error::Parse("header must be `rows cols strength`".into()));
        };
        let levels = parse_line(lines.next().ok_or_else(|| Error::Parse("missing level counts".into()))?)?;
        if levels.len() != cols {
            return Err(Error::Parse(format!(
                "expected {cols} level counts, found {}",
                levels.len()
            )));
        }
        let matrix = lines
            .map(|l| {
                parse_line(l)?
                    .into_iter()
                    .map(|v| u8::try_from(v).map_err(|_| Error::Parse(format!("level {v} too large"))))
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if matrix.len() != rows {
            return Err(Error::Parse(format!("expected {rows} rows, found {}", matrix.len())));
        }
        OrthogonalArray::new(levels, matrix, strength)
    }
}

/// Per-experiment response statistic over the experiment's runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ResponseStat {
    #[default]
    Best,
    Mean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResponse {
    pub row: usize,
    pub response: f64,
    pub per_run: Vec<f64>,
}

impl ExperimentResponse {
    pub fn from_runs(row: usize, per_run: Vec<f64>, stat: ResponseStat, sense: Sense) -> Result<Self> {
        if per_run.is_empty() {
            return Err(invalid("an experiment needs at least one run"));
        }
        let response = match stat {
            ResponseStat::Best => per_run
                .iter()
                .copied()
                .reduce(|a, b| if sense.better(b, a) { b } else { a })
                .unwrap(),
            ResponseStat::Mean => per_run.iter().sum::<f64>() / per_run.len() as f64,
        };
        Ok(ExperimentResponse { row, response, per_run })
    }
}

/// Mean response of every level of every column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainEffects {
    pub level_means: Vec<Vec<f64>>,
    pub best_levels: Vec<usize>,
    pub grand_mean: f64,
}

/// Level means per column. The best level has the best mean under
/// `sense`, lowest level index on ties.
pub fn main_effects(
    oa: &OrthogonalArray,
    responses: &[ExperimentResponse],
    sense: Sense,
) -> Result<MainEffects> {
    let mut by_row = vec![None; oa.rows()];
    for r in responses {
        let slot = by_row
            .get_mut(r.row)
            .ok_or_else(|| invalid(format!("response for row {} outside the array", r.row)))?;
        *slot = Some(r.response);
    }
    let values: Vec<f64> = by_row
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| invalid(format!("missing response for row {i}"))))
        .collect::<Result<_>>()?;

    let mut level_means = Vec::with_capacity(oa.columns());
    let mut best_levels = Vec::with_capacity(oa.columns());
    for j in 0..oa.columns() {
        let mut sums = vec![0.0; oa.levels()[j]];
        let mut counts = vec![0usize; oa.levels()[j]];
        for (r, v) in values.iter().enumerate() {
            sums[oa.level(r, j)] += v;
            counts[oa.level(r, j)] += 1;
        }
        let means: Vec<f64> = sums
            .iter()
            .zip(&counts)
            .map(|(s, c)| if *c == 0 { sense.worst() } else { s / *c as f64 })
            .collect();
        let best = (1..means.len()).fold(0, |b, l| if sense.better(means[l], means[b]) { l } else { b });
        level_means.push(means);
        best_levels.push(best);
    }
    Ok(MainEffects {
        level_means,
        best_levels,
        grand_mean: values.iter().sum::<f64>() / values.len() as f64,
    })
}

/// Picks each used column's concrete value at its best level. `None`
/// entries mark dummy columns and are skipped.
pub fn assemble_pva(effects: &MainEffects, level_values: &[Option<Vec<f64>>]) -> Result<Vec<f64>> {
    if level_values.len() != effects.best_levels.len() {
        return Err(invalid(format!(
            "{} level-value columns for {} analysed columns",
            level_values.len(),
            effects.best_levels.len()
        )));
    }
    let mut out = Vec::new();
    for (j, values) in level_values.iter().enumerate() {
        let Some(values) = values else { continue };
        if values.len() != effects.level_means[j].len() {
            return Err(invalid(format!(
                "column {j}: {} values for {} levels",
                values.len(),
                effects.level_means[j].len()
            )));
        }
        out.push(values[effects.best_levels[j]]);
    }
    Ok(out)
}
