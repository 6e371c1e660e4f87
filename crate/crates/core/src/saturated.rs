//! t-saturated matrices (perfect hash families when t = q).
//!
//! An `n x l` matrix over `0..q` is t-saturated when every set of `t`
//! columns has some row whose restriction to those columns hits every
//! symbol. Rows act as guessing functions for one side of a bipartite
//! graph: a t-saturated matrix keeps the set of "everyone on this side is
//! wrong" colorings below `t`.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::{Budget, Meter};
use crate::error::{param, Error, Result};
use crate::words::Color;

/// Ceiling on `C(l, t) * n * t` elementary checks for [`is_t_saturated`].
pub const DEFAULT_CHECK_CEILING: u64 = 1_000_000_000;

/// Retries after the first attempt in [`random_saturated`].
pub const RANDOM_RETRIES: u64 = 16;

/// A matrix whose saturation level has been verified on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatedMatrix {
    rows: Vec<Vec<Color>>,
    cols: usize,
    q: usize,
    t: usize,
}

impl SaturatedMatrix {
    /// Verifies `rows` and wraps them. Fails unless `t >= q` and the
    /// matrix really is t-saturated.
    pub fn new(rows: Vec<Vec<Color>>, q: usize, t: usize) -> Result<Self> {
        if t < q {
            return param(format!("saturation level t = {t} below alphabet size q = {q}"));
        }
        match is_t_saturated(&rows, q, t)? {
            Saturation::Saturated => {
                let cols = rows.first().map_or(0, Vec::len);
                Ok(SaturatedMatrix { rows, cols, q, t })
            }
            Saturation::Violated(cols) => param(format!(
                "matrix is not {t}-saturated: columns {cols:?} have no onto row"
            )),
        }
    }

    pub fn rows(&self) -> &[Vec<Color>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn t(&self) -> usize {
        self.t
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Color {
        self.rows[row][col]
    }

    pub fn into_rows(self) -> Vec<Vec<Color>> {
        self.rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Saturation {
    Saturated,
    /// Lexicographically first column set with no onto row.
    Violated(Vec<usize>),
}

impl Saturation {
    pub fn holds(&self) -> bool {
        matches!(self, Saturation::Saturated)
    }
}

fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn shape(rows: &[Vec<Color>], q: usize) -> Result<usize> {
    if q == 0 || q > 64 {
        return param(format!("alphabet size {q} out of range 1..=64"));
    }
    let l = rows.first().map_or(0, Vec::len);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != l {
            return param(format!("row {r} has {} entries, expected {l}", row.len()));
        }
        if let Some(&c) = row.iter().find(|&&c| c as usize >= q) {
            return param(format!("entry {c} in row {r} outside 0..{q}"));
        }
    }
    Ok(l)
}

/// Checks t-saturation by brute force over all `C(l, t)` column sets.
pub fn is_t_saturated(rows: &[Vec<Color>], q: usize, t: usize) -> Result<Saturation> {
    is_t_saturated_with(rows, q, t, DEFAULT_CHECK_CEILING)
}

pub fn is_t_saturated_with(rows: &[Vec<Color>], q: usize, t: usize, ceiling: u64) -> Result<Saturation> {
    let l = shape(rows, q)?;
    if t > l {
        return param(format!("t = {t} exceeds column count {l}"));
    }
    let work = binomial(l, t)
        .and_then(|c| c.checked_mul(rows.len() as u64))
        .and_then(|c| c.checked_mul(t as u64));
    match work {
        Some(w) if w <= ceiling => {}
        _ => {
            return Err(Error::Budget(format!(
                "C({l},{t})*{}*{t} exceeds {ceiling} checks",
                rows.len()
            )))
        }
    }
    let full: u64 = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    for cols in (0..l).combinations(t) {
        if !has_onto_row(rows, &cols, full) {
            return Ok(Saturation::Violated(cols));
        }
    }
    Ok(Saturation::Saturated)
}

#[inline]
fn has_onto_row(rows: &[Vec<Color>], cols: &[usize], full: u64) -> bool {
    rows.iter().any(|row| {
        let mut seen = 0u64;
        for &c in cols {
            seen |= 1 << row[c];
        }
        seen == full
    })
}

/// Randomized alteration construction.
///
/// Samples an `n x 2l` uniform matrix, deletes the highest surviving column
/// of each bad t-set (in lexicographic order), and keeps the first `l`
/// survivors. On failure retries with `seed + 1`, up to
/// [`RANDOM_RETRIES`] times. `Ok(None)` means every attempt failed.
pub fn random_saturated(n: usize, l: usize, q: usize, t: usize, seed: u64) -> Result<Option<SaturatedMatrix>> {
    random_saturated_with(n, l, q, t, seed, DEFAULT_CHECK_CEILING)
}

pub fn random_saturated_with(
    n: usize,
    l: usize,
    q: usize,
    t: usize,
    seed: u64,
    ceiling: u64,
) -> Result<Option<SaturatedMatrix>> {
    if t < q {
        return param(format!("saturation level t = {t} below alphabet size q = {q}"));
    }
    if t > l {
        return param(format!("t = {t} exceeds column count {l}"));
    }
    if q == 0 || q > 64 {
        return param(format!("alphabet size {q} out of range 1..=64"));
    }
    let wide = 2 * l;
    let work = binomial(wide, t)
        .and_then(|c| c.checked_mul(n as u64))
        .and_then(|c| c.checked_mul(t as u64));
    if !matches!(work, Some(w) if w <= ceiling) {
        return Err(Error::Budget(format!("C({wide},{t})*{n}*{t} exceeds {ceiling} checks")));
    }
    let full: u64 = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    for attempt in 0..=RANDOM_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let rows: Vec<Vec<Color>> = (0..n)
            .map(|_| (0..wide).map(|_| rng.gen_range(0..q) as Color).collect())
            .collect();
        let mut alive = vec![true; wide];
        for cols in (0..wide).combinations(t) {
            if cols.iter().all(|&c| alive[c]) && !has_onto_row(&rows, &cols, full) {
                alive[*cols.last().unwrap()] = false;
            }
        }
        let keep: Vec<usize> = (0..wide).filter(|&c| alive[c]).take(l).collect();
        if keep.len() < l {
            continue;
        }
        let trimmed: Vec<Vec<Color>> = rows.iter().map(|row| keep.iter().map(|&c| row[c]).collect()).collect();
        if let Ok(m) = SaturatedMatrix::new(trimmed, q, t) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(SaturatedMatrix),
    /// No matrix with at most `n_max` rows exists.
    NotFound,
    Timeout,
}

/// Exhaustive search for a t-saturated `n x l` matrix with the fewest rows
/// `n <= n_max`.
///
/// Columns are chosen in nondecreasing order of their codes; since
/// relabeling symbols within a row preserves saturation, the first column
/// is fixed to all zeros. Budget work is counted in search nodes.
pub fn search_saturated(n_max: usize, l: usize, q: usize, t: usize, budget: Budget) -> Result<SearchOutcome> {
    if t < q {
        return param(format!("saturation level t = {t} below alphabet size q = {q}"));
    }
    if t > l {
        return param(format!("t = {t} exceeds column count {l}"));
    }
    if q == 0 || q > 64 {
        return param(format!("alphabet size {q} out of range 1..=64"));
    }
    let mut meter = budget.start();
    for n in 1..=n_max {
        let codes = match crate::budget::checked_pow(q, n) {
            Some(c) if c <= u32::MAX as u64 => c as usize,
            _ => return Ok(SearchOutcome::Timeout),
        };
        let mut search = ColumnSearch {
            n,
            l,
            q,
            t,
            codes,
            full: if q == 64 { u64::MAX } else { (1u64 << q) - 1 },
            cols: Vec::with_capacity(l),
            meter: &mut meter,
        };
        match search.run() {
            Some(true) => {
                let rows = (0..n).map(|r| search.cols.iter().map(|col| col[r]).collect()).collect();
                return SaturatedMatrix::new(rows, q, t).map(SearchOutcome::Found);
            }
            Some(false) => {}
            None => return Ok(SearchOutcome::Timeout),
        }
    }
    Ok(SearchOutcome::NotFound)
}

struct ColumnSearch<'a> {
    n: usize,
    l: usize,
    q: usize,
    t: usize,
    codes: usize,
    full: u64,
    cols: Vec<Vec<Color>>,
    meter: &'a mut Meter,
}

impl ColumnSearch<'_> {
    /// `Some(true)` when a full matrix sits in `cols`, `None` on timeout.
    fn run(&mut self) -> Option<bool> {
        self.extend(0)
    }

    fn decode(&self, mut code: usize) -> Vec<Color> {
        let mut col = vec![0; self.n];
        for c in col.iter_mut().rev() {
            *c = (code % self.q) as Color;
            code /= self.q;
        }
        col
    }

    fn extend(&mut self, min_code: usize) -> Option<bool> {
        if self.cols.len() == self.l {
            return Some(true);
        }
        let hi = if self.cols.is_empty() { 1 } else { self.codes };
        for code in min_code..hi {
            if !self.meter.tick() {
                return None;
            }
            let col = self.decode(code);
            self.cols.push(col);
            if self.last_column_ok() && self.extend(code)? {
                return Some(true);
            }
            self.cols.pop();
        }
        Some(false)
    }

    /// Every t-set containing the newest column has an onto row.
    fn last_column_ok(&self) -> bool {
        let k = self.cols.len();
        if k < self.t {
            return true;
        }
        let last = k - 1;
        (0..last).combinations(self.t - 1).all(|mut set| {
            set.push(last);
            (0..self.n).any(|r| {
                let mut seen = 0u64;
                for &c in &set {
                    seen |= 1 << self.cols[c][r];
                }
                seen == self.full
            })
        })
    }
}
