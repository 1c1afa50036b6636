//! Rule 110 on a finite periodic lattice.
//!
//! Rows are stored bit-packed, 64 cells per word, cell `i` at bit `i % 64` of
//! word `i / 64`. Bits past the row width are always zero. The neighborhood of
//! cell `n` is `(n-1, n, n+1)` taken modulo the width.
//!
//! Two stepping kernels are provided: [`step`] walks the rule table one cell at
//! a time and is kept as the reference, [`step_packed`] evaluates whole words
//! with the boolean form of the same table.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Rule 110 as an explicit neighborhood table, `(left, center, right) -> next`.
pub const RULE_TABLE: [((bool, bool, bool), bool); 8] = [
    ((true, true, true), false),
    ((true, true, false), true),
    ((true, false, true), true),
    ((true, false, false), false),
    ((false, true, true), true),
    ((false, true, false), true),
    ((false, false, true), true),
    ((false, false, false), false),
];

/// Looks up the next state of a cell in [`RULE_TABLE`].
pub fn rule110(left: bool, center: bool, right: bool) -> bool {
    RULE_TABLE
        .iter()
        .find(|(hood, _)| *hood == (left, center, right))
        .map(|&(_, next)| next)
        .expect("table covers all eight neighborhoods")
}

/// Word-level form of [`RULE_TABLE`]: `(!L & (C | R)) | (L & (C ^ R))`.
#[inline(always)]
pub fn rule110_word(left: u64, center: u64, right: u64) -> u64 {
    (!left & (center | right)) | (left & (center ^ right))
}

/// Lattice width and time window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeConfig {
    width: usize,
    window: usize,
}

impl LatticeConfig {
    pub fn new(width: usize, window: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        if window == 0 {
            return Err(Error::ZeroWindow);
        }
        Ok(Self { width, window })
    }

    /// Builds a config and checks the window against the fastest glider speed.
    pub fn validated(width: usize, window: usize, v_max: f64) -> Result<Self> {
        let config = Self::new(width, window)?;
        config.check_window(v_max)?;
        Ok(config)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `floor(N / (2 v_max))`: left- and right-movers cannot wrap around and
    /// meet again inside a window this short.
    pub fn max_window(width: usize, v_max: f64) -> usize {
        if v_max <= 0.0 {
            return usize::MAX;
        }
        (width as f64 / (2.0 * v_max)).floor() as usize
    }

    pub fn check_window(&self, v_max: f64) -> Result<()> {
        let bound = Self::max_window(self.width, v_max);
        if self.window > bound {
            return Err(Error::WindowTooLong {
                window: self.window,
                bound,
                width: self.width,
                v_max,
            });
        }
        Ok(())
    }
}

/// One time slice of the lattice.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Row {
    width: usize,
    words: Vec<u64>,
}

impl Row {
    pub fn zeros(width: usize) -> Self {
        Self {
            width,
            words: vec![0; width.div_ceil(WORD)],
        }
    }

    pub fn ones(width: usize) -> Self {
        let mut row = Self {
            width,
            words: vec![u64::MAX; width.div_ceil(WORD)],
        };
        row.clear_tail();
        row
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut row = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            row.set(i, b);
        }
        row
    }

    /// Parses a string of `0`/`1` characters, cell 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Self::from_bits)
    }

    /// Builds a row from raw words. Bits past `width` are discarded.
    pub fn from_words(width: usize, mut words: Vec<u64>) -> Self {
        words.resize(width.div_ceil(WORD), 0);
        let mut row = Self { width, words };
        row.clear_tail();
        row
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.width);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    /// Cell value at a signed, wrapped index.
    #[inline]
    pub fn get_wrapped(&self, i: isize) -> bool {
        self.get(i.rem_euclid(self.width as isize) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Cyclic shift: cell `i` of the result is cell `i - k` of `self`.
    pub fn shifted(&self, k: isize) -> Row {
        let n = self.width as isize;
        let mut out = Row::zeros(self.width);
        for i in 0..self.width {
            if self.get(i) {
                out.set((i as isize + k).rem_euclid(n) as usize, true);
            }
        }
        out
    }

    pub fn xor(&self, other: &Row) -> Result<Row> {
        if self.width != other.width {
            return Err(Error::DimensionMismatch {
                left: (self.width, 1),
                right: (other.width, 1),
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Row {
            width: self.width,
            words,
        })
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    fn clear_tail(&mut self) {
        let rem = self.width % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Row({})", self.to_bit_string())
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// Reference kernel: applies [`rule110`] cell by cell.
pub fn step(row: &Row) -> Row {
    let n = row.width();
    let mut out = Row::zeros(n);
    for i in 0..n {
        let left = row.get((i + n - 1) % n);
        let right = row.get((i + 1) % n);
        out.set(i, rule110(left, row.get(i), right));
    }
    out
}

/// Word-parallel kernel. Produces the same row as [`step`] for every input.
pub fn step_packed(row: &Row) -> Row {
    let n = row.width;
    let w = &row.words;
    let nw = w.len();
    // bit index of cell n-1 inside the last word
    let top = (n - 1) % WORD;
    let last_cell = (w[nw - 1] >> top) & 1;
    let first_cell = w[0] & 1;

    let mut out = Vec::with_capacity(nw);
    for k in 0..nw {
        let c = w[k];
        let carry_in = if k == 0 { last_cell } else { w[k - 1] >> 63 };
        let left = (c << 1) | carry_in;
        let right = if k + 1 < nw {
            (c >> 1) | (w[k + 1] << 63)
        } else {
            (c >> 1) | (first_cell << top)
        };
        out.push(rule110_word(left, c, right));
    }
    let mut next = Row {
        width: n,
        words: out,
    };
    next.clear_tail();
    next
}

/// Rows `0..=T` of an evolution, row `t` being the state at time `t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpacetimeDiagram {
    rows: Vec<Row>,
}

impl SpacetimeDiagram {
    /// Wraps precomputed rows; every row must share one width.
    pub fn from_rows(rows: Vec<Row>) -> Result<Self> {
        if let Some(first) = rows.first() {
            if let Some(bad) = rows.iter().find(|r| r.width() != first.width()) {
                return Err(Error::DimensionMismatch {
                    left: (first.width(), 1),
                    right: (bad.width(), 1),
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, t: usize) -> &Row {
        &self.rows[t]
    }

    pub fn last(&self) -> &Row {
        self.rows.last().expect("a diagram has at least one row")
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Row::width)
    }

    /// Number of steps, one less than the number of rows.
    pub fn steps(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width(), self.rows.len())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Row::is_zero)
    }
}

/// Evolves `r0` for `steps` steps with the packed kernel.
pub fn evolve(r0: &Row, steps: usize) -> SpacetimeDiagram {
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(r0.clone());
    for t in 0..steps {
        let next = step_packed(&rows[t]);
        rows.push(next);
    }
    SpacetimeDiagram { rows }
}

/// Evolves without keeping the intermediate rows.
pub fn advance(r0: &Row, steps: usize) -> Row {
    let mut row = r0.clone();
    for _ in 0..steps {
        row = step_packed(&row);
    }
    row
}

/// Inverts the bit at lattice index `x`.
pub fn flip(row: &Row, x: usize) -> Result<Row> {
    if x >= row.width() {
        return Err(Error::SiteOutOfRange {
            index: x as i64,
            width: row.width(),
        });
    }
    let mut out = row.clone();
    out.set(x, !row.get(x));
    Ok(out)
}

/// Cellwise XOR of two diagrams of equal dimensions.
pub fn diff(a: &SpacetimeDiagram, b: &SpacetimeDiagram) -> Result<SpacetimeDiagram> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            left: a.dims(),
            right: b.dims(),
        });
    }
    let rows = a
        .rows
        .iter()
        .zip(&b.rows)
        .map(|(x, y)| x.xor(y))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpacetimeDiagram { rows })
}
