//! Cell-visiting patterns used to build skip-gram training windows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular grid of cell strings. Row 0 holds column headers and column 0
/// holds row headers; the corner cell is usually empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct CellTable {
    cells: Vec<Vec<String>>,
}

impl TryFrom<Vec<Vec<String>>> for CellTable {
    type Error = Error;

    fn try_from(cells: Vec<Vec<String>>) -> Result<Self> {
        CellTable::new(cells)
    }
}

impl From<CellTable> for Vec<Vec<String>> {
    fn from(t: CellTable) -> Self {
        t.cells
    }
}

impl CellTable {
    pub fn new(cells: Vec<Vec<String>>) -> Result<Self> {
        if let Some(first) = cells.first() {
            let w = first.len();
            if let Some(i) = cells.iter().position(|r| r.len() != w) {
                return Err(Error::invalid(format!(
                    "table row {i} has {} cells, expected {w}",
                    cells[i].len()
                )));
            }
        }
        Ok(CellTable { cells })
    }

    pub fn n_rows(&self) -> usize {
        self.cells.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&str> {
        self.cells.get(i)?.get(j).map(String::as_str)
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternMode {
    /// Row header, left neighbour, target, upper neighbour, column header.
    Headers,
    /// Plus-shaped neighbourhood: left, up, target, down, right.
    Rhombus,
    /// Rhombus with the down-right diagonal in place of the right neighbour.
    RhombusDiagonal,
    /// Two cells on each side along the row.
    Linear,
}

impl PatternMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PatternMode::Headers => "headers",
            PatternMode::Rhombus => "rhombus",
            PatternMode::RhombusDiagonal => "rhombus-diagonal",
            PatternMode::Linear => "linear",
        }
    }
}

impl fmt::Display for PatternMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "headers" => Ok(PatternMode::Headers),
            "rhombus" => Ok(PatternMode::Rhombus),
            "rhombus-diagonal" => Ok(PatternMode::RhombusDiagonal),
            "linear" => Ok(PatternMode::Linear),
            other => Err(Error::invalid(format!("unknown pattern mode `{other}`"))),
        }
    }
}

pub type CellIndex = (usize, usize);

/// Five-slot window; slot 2 always holds the target cell. Slots that fall
/// outside the table are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternWindow {
    pub slots: [Option<CellIndex>; 5],
}

impl PatternWindow {
    pub const TARGET: usize = 2;

    pub fn target(&self) -> CellIndex {
        self.slots[Self::TARGET].expect("target slot is always filled")
    }

    /// In-range cells in slot order, target included.
    pub fn cells(&self) -> Vec<CellIndex> {
        self.slots.iter().flatten().copied().collect()
    }

    /// In-range context cells, target excluded.
    pub fn contexts(&self) -> impl Iterator<Item = CellIndex> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != Self::TARGET)
            .filter_map(|(_, c)| *c)
    }
}

/// One window per body cell (`i >= 1`, `j >= 1`).
pub fn extract_patterns(table: &CellTable, mode: PatternMode) -> Vec<PatternWindow> {
    let (rows, cols) = (table.n_rows() as isize, table.n_cols() as isize);
    let at = |i: isize, j: isize| -> Option<CellIndex> {
        (i >= 0 && j >= 0 && i < rows && j < cols).then_some((i as usize, j as usize))
    };
    let mut out = Vec::new();
    for i in 1..rows {
        for j in 1..cols {
            let slots = match mode {
                PatternMode::Headers => [at(i, 0), at(i, j - 1), at(i, j), at(i - 1, j), at(0, j)],
                PatternMode::Rhombus => {
                    [at(i, j - 1), at(i - 1, j), at(i, j), at(i + 1, j), at(i, j + 1)]
                }
                PatternMode::RhombusDiagonal => [
                    at(i, j - 1),
                    at(i - 1, j),
                    at(i, j),
                    at(i + 1, j),
                    at(i + 1, j + 1),
                ],
                PatternMode::Linear => {
                    [at(i, j - 2), at(i, j - 1), at(i, j), at(i, j + 1), at(i, j + 2)]
                }
            };
            out.push(PatternWindow { slots });
        }
    }
    out
}
