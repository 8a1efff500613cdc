use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A partition, stored as weakly decreasing positive row lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.contains(&0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("{rows:?} is not a partition")));
        }
        Ok(Self { rows })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Length of column `j` (1-based).
    pub fn column(&self, j: usize) -> usize {
        self.rows.iter().take_while(|r| **r >= j).count()
    }

    /// Boxes `(i, j)`, row `i` and column `j` both 1-based, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| (1..=*r).map(move |j| (i + 1, j)))
    }

    pub fn hook(&self, i: usize, j: usize) -> usize {
        let arm = self.rows[i - 1] - j;
        let leg = self.column(j) - i;
        arm + leg + 1
    }

    pub fn transpose(&self) -> Self {
        let width = self.rows.first().copied().unwrap_or(0);
        Self { rows: (1..=width).map(|j| self.column(j)).collect() }
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for YoungDiagram {
    type Err = Error;

    /// Accepts `2,1`, `(2,1)` and `()`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if inner.is_empty() {
            return Ok(Self::empty());
        }
        let rows = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::Parse(format!("row length {p:?}: {e}"))))
            .collect::<Result<_>>()?;
        Self::new(rows)
    }
}

/// All partitions of `n` in decreasing lexicographic order of row lengths,
/// so `(n)` comes first and `(1,...,1)` last.
pub fn partitions(n: usize) -> Vec<YoungDiagram> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if rest == 0 {
            out.push(YoungDiagram { rows: prefix.clone() });
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
