//! Matrix interchange formats and JSON report schemas.
//!
//! * `alist`: the sparse LDPC text format. First line `n m`, then the
//!   maximum column and row degrees, the column degrees, the row degrees, one
//!   line of 1-based row indices per column and one line of 1-based column
//!   indices per row, each padded with zeros to the maximum degree.
//! * `dense`: one row per line of `0`/`1` characters.
//! * `json`: `{family, m, construction, rows, cols, row_supports}`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use stopset_core::codes::{CodeFamily, Family, ParityCheckMatrix};
use stopset_core::decode::{MonteCarloReport, PatternAnalysis};
use stopset_core::gf2::BitMatrix;
use stopset_core::stopping::StoppingSetDistribution;

use crate::error::{parse_err, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Alist,
    Dense,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Alist => "alist",
            Format::Dense => "dense",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alist" => Ok(Format::Alist),
            "dense" | "dense-text" | "txt" => Ok(Format::Dense),
            "json" => Ok(Format::Json),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

pub fn export(pcm: &ParityCheckMatrix, format: Format) -> Result<String> {
    match format {
        Format::Alist => Ok(to_alist(pcm.matrix())),
        Format::Dense => Ok(to_dense(pcm.matrix())),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&MatrixJson::from_pcm(pcm))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Parses a matrix. Non-JSON inputs carry no family, so `family` (if given)
/// is attached and its block length checked.
pub fn import(text: &str, format: Format, family: Option<CodeFamily>) -> Result<ParityCheckMatrix> {
    let (matrix, family) = match format {
        Format::Alist => (from_alist(text)?, family),
        Format::Dense => (from_dense(text)?, family),
        Format::Json => {
            let json: MatrixJson = serde_json::from_str(text)?;
            let own = json.code_family()?;
            (json.to_matrix()?, family.or(own))
        }
    };
    Ok(ParityCheckMatrix::external(matrix, family)?)
}

pub fn to_alist(h: &BitMatrix) -> String {
    let rows: Vec<Vec<usize>> = h.rows().iter().map(|r| r.support()).collect();
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); h.num_cols()];
    for (r, support) in rows.iter().enumerate() {
        for &c in support {
            cols[c - 1].push(r + 1);
        }
    }
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.num_cols(), h.num_rows());
    let _ = writeln!(out, "{max_col} {max_row}");
    out.push_str(&join(cols.iter().map(Vec::len)));
    out.push('\n');
    out.push_str(&join(rows.iter().map(Vec::len)));
    out.push('\n');
    for list in cols.iter().map(|c| (c, max_col)).chain(rows.iter().map(|r| (r, max_row))) {
        let (entries, width) = list;
        let padded = entries.iter().copied().chain(std::iter::repeat(0)).take(width.max(1));
        out.push_str(&join(padded));
        out.push('\n');
    }
    out
}

fn join(values: impl Iterator<Item = usize>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(lineno, format!("bad integer '{t}'"))))
        .collect()
}

/// Reads an alist file. Zero padding is optional; column and row lists must
/// describe the same matrix.
pub fn from_alist(text: &str) -> Result<BitMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| -> Result<(usize, Vec<usize>)> {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("unexpected end of file reading {what}")))?;
        Ok((no, numbers(line, no)?))
    };

    let (no, dims) = next("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(parse_err(no, "expected 'n m'"));
    };
    let (no, maxes) = next("maximum degrees")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(parse_err(no, "expected maximum column and row degrees"));
    };
    let (no, col_deg) = next("column degrees")?;
    if col_deg.len() != n {
        return Err(parse_err(no, format!("expected {n} column degrees")));
    }
    let (no, row_deg) = next("row degrees")?;
    if row_deg.len() != m {
        return Err(parse_err(no, format!("expected {m} row degrees")));
    }

    let mut read_lists = |count: usize, degrees: &[usize], max: usize, bound: usize, what: &str| {
        let mut lists = Vec::with_capacity(count);
        for degree in degrees.iter().take(count) {
            let (no, entries) = next(what)?;
            let entries: Vec<usize> = entries.into_iter().filter(|&e| e != 0).collect();
            if entries.len() != *degree || *degree > max {
                return Err(parse_err(no, format!("{what} length does not match its degree")));
            }
            if let Some(&bad) = entries.iter().find(|&&e| e > bound) {
                return Err(parse_err(no, format!("index {bad} exceeds {bound}")));
            }
            lists.push(entries);
        }
        Ok(lists)
    };
    let col_lists = read_lists(n, &col_deg, max_col, m, "column list")?;
    let row_lists = read_lists(m, &row_deg, max_row, n, "row list")?;

    let matrix = BitMatrix::from_supports(n, &row_lists)?;
    for (c, list) in col_lists.iter().enumerate() {
        let mut from_rows: Vec<usize> = (0..m).filter(|&r| matrix.row(r).get(c + 1).unwrap_or(false)).map(|r| r + 1).collect();
        let mut listed = list.clone();
        listed.sort_unstable();
        from_rows.sort_unstable();
        if listed != from_rows {
            return Err(parse_err(0, format!("column {} list disagrees with the row lists", c + 1)));
        }
    }
    Ok(matrix)
}

pub fn to_dense(h: &BitMatrix) -> String {
    let mut out = String::new();
    for row in h.rows() {
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}

/// Reads one row per line; blank lines and `#` comments are skipped, and
/// whitespace between digits is ignored.
pub fn from_dense(text: &str) -> Result<BitMatrix> {
    let mut supports = Vec::new();
    let mut width = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut support = Vec::new();
        let mut len = 0;
        for ch in line.chars().filter(|c| !c.is_whitespace()) {
            len += 1;
            match ch {
                '0' => {}
                '1' => support.push(len),
                _ => return Err(parse_err(i + 1, format!("unexpected character '{ch}'"))),
            }
        }
        match width {
            None => width = Some(len),
            Some(w) if w != len => {
                return Err(parse_err(i + 1, format!("row has {len} columns, expected {w}")));
            }
            _ => {}
        }
        supports.push(support);
    }
    let width = width.ok_or_else(|| parse_err(0, "no rows"))?;
    Ok(BitMatrix::from_supports(width, &supports)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub family: Option<String>,
    pub m: Option<u32>,
    pub construction: String,
    pub rows: usize,
    pub cols: usize,
    pub row_supports: Vec<Vec<usize>>,
}

impl MatrixJson {
    pub fn from_pcm(pcm: &ParityCheckMatrix) -> Self {
        let h = pcm.matrix();
        MatrixJson {
            family: pcm.family().map(|f| f.family().name().to_string()),
            m: pcm.family().map(|f| f.m()),
            construction: pcm.construction().name().to_string(),
            rows: h.num_rows(),
            cols: h.num_cols(),
            row_supports: h.rows().iter().map(|r| r.support()).collect(),
        }
    }

    pub fn code_family(&self) -> Result<Option<CodeFamily>> {
        match (&self.family, self.m) {
            (Some(name), Some(m)) => Ok(Some(CodeFamily::new(name.parse::<Family>()?, m)?)),
            _ => Ok(None),
        }
    }

    pub fn to_matrix(&self) -> Result<BitMatrix> {
        if self.row_supports.len() != self.rows {
            return Err(parse_err(0, format!("'rows' is {} but {} supports given", self.rows, self.row_supports.len())));
        }
        Ok(BitMatrix::from_supports(self.cols, &self.row_supports)?)
    }
}

/// Identifies the matrix a report was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixTag {
    pub family: Option<String>,
    pub m: Option<u32>,
    pub construction: String,
}

impl MatrixTag {
    pub fn of(pcm: &ParityCheckMatrix) -> Self {
        MatrixTag {
            family: pcm.family().map(|f| f.family().name().to_string()),
            m: pcm.family().map(|f| f.m()),
            construction: pcm.construction().name().to_string(),
        }
    }

    pub fn formula(family: CodeFamily) -> Self {
        MatrixTag {
            family: Some(family.family().name().to_string()),
            m: Some(family.m()),
            construction: family.family().optimal_construction().name().to_string(),
        }
    }
}

/// Stopping-set distribution with coefficients as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsdJson {
    pub family: Option<String>,
    pub m: Option<u32>,
    pub construction: String,
    pub method: String,
    pub n: usize,
    #[serde(rename = "T")]
    pub t: Vec<String>,
}

impl SsdJson {
    pub fn new(tag: MatrixTag, method: &str, ssd: &StoppingSetDistribution) -> Self {
        SsdJson {
            family: tag.family,
            m: tag.m,
            construction: tag.construction,
            method: method.to_string(),
            n: ssd.n(),
            t: ssd.to_decimal_strings(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub weight: usize,
    pub trials: String,
    pub fail_peel: String,
    pub fail_ml: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloJson {
    pub matrix: MatrixTag,
    pub rng: String,
    pub epsilon: f64,
    pub trials: String,
    pub seed: String,
    pub fail_peel: String,
    pub fail_rate_peel: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fail_ml: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fail_rate_ml: Option<f64>,
    pub stderr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_rate_peel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_weight: Option<Vec<WeightRow>>,
}

impl MonteCarloJson {
    pub fn new(tag: MatrixTag, report: &MonteCarloReport, exact: Option<f64>, per_weight: bool) -> Self {
        MonteCarloJson {
            matrix: tag,
            rng: report.rng.to_string(),
            epsilon: report.epsilon,
            trials: report.trials.to_string(),
            seed: report.seed.to_string(),
            fail_peel: report.fail_peel.to_string(),
            fail_rate_peel: report.fail_rate_peel(),
            fail_ml: report.fail_ml.map(|f| f.to_string()),
            fail_rate_ml: report.fail_rate_ml(),
            stderr: report.stderr(),
            exact_rate_peel: exact,
            per_weight: per_weight.then(|| {
                report
                    .per_weight
                    .iter()
                    .enumerate()
                    .map(|(w, c)| WeightRow {
                        weight: w,
                        trials: c.trials.to_string(),
                        fail_peel: c.fail_peel.to_string(),
                        fail_ml: c.fail_ml.to_string(),
                    })
                    .collect()
            }),
        }
    }
}

/// Exhaustive per-weight counts as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub matrix: MatrixTag,
    pub n: usize,
    pub fail_peel: Vec<String>,
    pub fail_ml: Vec<String>,
}

impl PatternJson {
    pub fn new(tag: MatrixTag, a: &PatternAnalysis) -> Self {
        let strings = |v: &[u64]| v.iter().map(u64::to_string).collect();
        PatternJson {
            matrix: tag,
            n: a.n,
            fail_peel: strings(&a.fail_peel),
            fail_ml: strings(&a.fail_ml),
        }
    }
}

/// One CSV line of a simulation sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub fail_rate: f64,
    pub stderr: f64,
    pub trials: String,
    pub seed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_rate: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use stopset_core::codes::{build_full_rank_hamming, build_h1, build_h2};

    #[test]
    fn dense_full_rank_m2() {
        let f = build_full_rank_hamming(2).unwrap();
        assert_eq!(export(&f, Format::Dense).unwrap(), "101\n011\n");
    }

    #[test]
    fn alist_layout() {
        let h = build_h2(2).unwrap();
        let text = to_alist(h.matrix());
        let first: Vec<&str> = text.lines().take(2).collect();
        assert_eq!(first, ["3 3", "2 2"]);
        assert_eq!(from_alist(&text).unwrap(), *h.matrix());
    }

    #[test]
    fn alist_without_padding() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        let h = from_alist(text).unwrap();
        assert_eq!(to_dense(&h), "110\n011\n");
        let unpadded = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";
        assert_eq!(from_alist(unpadded).unwrap(), h);
    }

    #[test]
    fn alist_rejects_inconsistent_lists() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 3\n2 3\n";
        assert!(from_alist(text).is_err());
        assert!(from_alist("3\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = build_h1(3).unwrap();
        let text = export(&h, Format::Json).unwrap();
        let json: MatrixJson = serde_json::from_str(&text).unwrap();
        assert!(json.row_supports.contains(&vec![1, 2, 3]));
        assert_eq!(json.family.as_deref(), Some("simplex"));
        let back = import(&text, Format::Json, None).unwrap();
        assert_eq!(back.matrix(), h.matrix());
        assert_eq!(back.family(), h.family());
    }

    #[test]
    fn dense_parsing() {
        let h = from_dense("# comment\n1 0 1\n\n0 1 1\n").unwrap();
        assert_eq!(to_dense(&h), "101\n011\n");
        assert!(from_dense("10\n1\n").is_err());
        assert!(from_dense("12\n").is_err());
        assert!(from_dense("").is_err());
    }

    #[test]
    fn format_names() {
        assert_eq!("ALIST".parse::<Format>().unwrap(), Format::Alist);
        assert_eq!("dense-text".parse::<Format>().unwrap(), Format::Dense);
        assert!("xml".parse::<Format>().is_err());
    }
}
