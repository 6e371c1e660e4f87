//! Affine guessing strategies over finite fields.
//!
//! A linear strategy is stored as a pair `(A, b)`: `A` has unit diagonal and
//! is supported on the visibility pattern of the graph, and vertex `i`
//! bets that `<A^i, x> = b_i`, i.e. guesses
//! `x_i = b_i - sum_{j != i} A[i][j] x_j`.

use rayon::prelude::*;

use crate::budget::{checked_pow, Budget};
use crate::error::{param, Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::graphs::{build_graph, GraphSpec, Mode, SightGraph};
use crate::strategies::{TableStrategy, Verdict};
use crate::words::{all_words, lex_word, next_word, Coloring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearStrategy {
    field: FieldSpec,
    a: Vec<Vec<Elem>>,
    b: Vec<Elem>,
}

impl LinearStrategy {
    /// Checks that `a` is square with unit diagonal and entries in range.
    pub fn new(field: FieldSpec, a: Vec<Vec<Elem>>, b: Vec<Elem>) -> Result<Self> {
        let n = a.len();
        let q = field.q();
        if b.len() != n {
            return param(format!("b has length {}, expected {n}", b.len()));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return param(format!("row {i} of A has length {}, expected {n}", row.len()));
            }
            if row.iter().chain(std::iter::once(&b[i])).any(|&e| e as usize >= q) {
                return param(format!("row {i} has entries outside F_{q}"));
            }
            if row[i] != 1 {
                return param(format!("A[{i}][{i}] = {}, must be 1", row[i]));
            }
        }
        Ok(LinearStrategy { field, a, b })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn a(&self) -> &[Vec<Elem>] {
        &self.a
    }

    pub fn b(&self) -> &[Elem] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Fails unless `A` vanishes off the visibility pattern of `g`.
    pub fn check_graph(&self, g: &SightGraph) -> Result<()> {
        if g.n() != self.n() {
            return Err(Error::Mismatch(format!(
                "strategy has {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        for i in 0..self.n() {
            for j in 0..self.n() {
                if i != j && self.a[i][j] != 0 && !g.has_edge(i, j) {
                    return param(format!("A[{i}][{j}] != 0 but {i} does not see {j}"));
                }
            }
        }
        Ok(())
    }

    /// Whether vertex `i` is right on coloring `x`.
    #[inline]
    pub fn correct(&self, i: usize, x: &[Elem]) -> bool {
        self.field.dot(&self.a[i], x) == self.b[i]
    }

    pub fn guess(&self, i: usize, x: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = self.b[i];
        for (j, (&aij, &xj)) in self.a[i].iter().zip(x).enumerate() {
            if j != i {
                acc = f.sub(acc, f.mul(aij, xj));
            }
        }
        acc
    }

    /// Expands into lookup tables on `g`.
    pub fn to_table(&self, g: &SightGraph) -> Result<TableStrategy> {
        self.check_graph(g)?;
        let f = &self.field;
        TableStrategy::from_fn(g, f.q(), |i, view| {
            g.sees(i)
                .iter()
                .zip(view)
                .fold(self.b[i], |acc, (&j, &c)| f.sub(acc, f.mul(self.a[i][j], c)))
        })
    }
}

/// The strategy on `C_4` over `F_3` in which rows 3 and 4 of `A` are the sum
/// and difference of rows 1 and 2, with `b = 0`.
pub fn c4_linear_example() -> LinearStrategy {
    let a = vec![vec![1, 1, 0, 1], vec![2, 1, 1, 0], vec![0, 2, 1, 1], vec![2, 0, 2, 1]];
    LinearStrategy::new(FieldSpec::new(3).unwrap(), a, vec![0; 4]).unwrap()
}

/// Exhaustive check over `F_q^n`; budget work counts colorings.
pub fn linear_verify(g: &SightGraph, s: &LinearStrategy, budget: Budget) -> Result<Verdict> {
    s.check_graph(g)?;
    let q = s.field.q();
    let n = g.n();
    let Some(total) = checked_pow(q, n).filter(|&t| t <= budget.work) else {
        return Ok(Verdict::Timeout);
    };
    let mut meter = budget.start();
    let mut x = vec![0; n];
    for _ in 0..total {
        if !meter.tick() {
            return Ok(Verdict::Timeout);
        }
        if !(0..n).any(|i| s.correct(i, &x)) {
            return Ok(Verdict::Loses(x));
        }
        next_word(&mut x, q);
    }
    Ok(Verdict::Wins)
}

/// Row-echelon rank over the field.
pub fn matrix_rank(m: &[Vec<Elem>], field: &FieldSpec) -> usize {
    let mut work = m.to_vec();
    reduce(&mut work, field).len()
}

/// In-place reduced row echelon form; returns pivot columns. Rows beyond
/// the rank end up zero.
fn reduce(m: &mut [Vec<Elem>], f: &FieldSpec) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(m[r][c]).unwrap();
        for e in m[r].iter_mut() {
            *e = f.mul(*e, inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..cols {
                    let delta = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{h : h^T a = 0}`.
fn left_null_space(a: &[Vec<Elem>], f: &FieldSpec) -> Vec<Vec<Elem>> {
    let n = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // h^T a = 0  <=>  a^T h = 0.
    let mut at: Vec<Vec<Elem>> = (0..cols).map(|j| (0..n).map(|i| a[i][j]).collect()).collect();
    let pivots = reduce(&mut at, f);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut h = vec![0; n];
            h[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                h[pc] = f.neg(at[r][fc]);
            }
            h
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearDecision {
    Solvable(LinearStrategy),
    Unsolvable,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearReport {
    pub decision: LinearDecision,
    /// Number of `A` matrices in the search space.
    pub matrices: u64,
}

/// An `(A, b)` pair.
type Witness = (Vec<Vec<Elem>>, Vec<Elem>);

/// Decides whether some affine strategy over `field` wins on `g`.
///
/// Enumerates every admissible `A` (free entries in row-major order, each
/// ranging over the whole field) and, per `A`, finds the `b` values that
/// win without looping over `b`: a coloring `x` defeats `b` exactly when
/// `b - Ax` has no zero coordinate, so the defeated set is
/// `im(A) + (F*)^n`. Projecting through a parity-check matrix `H` of
/// `im(A)`, `b` wins iff `Hb` avoids `H (F*)^n`. The witness is the first
/// `(A, b)` in lexicographic order.
///
/// Budget work is `q^(free entries) * q^n`; larger instances time out
/// immediately.
pub fn decide_linear_solvable(
    g: &SightGraph,
    field: &FieldSpec,
    budget: Budget,
    workers: usize,
) -> Result<LinearReport> {
    let n = g.n();
    let q = field.q();
    let free: Vec<(usize, usize)> = (0..n).flat_map(|i| g.sees(i).iter().map(move |&j| (i, j))).collect();
    let matrices = checked_pow(q, free.len());
    let within = matrices
        .and_then(|m| checked_pow(q, n).and_then(|c| m.checked_mul(c)))
        .is_some_and(|w| w <= budget.work);
    let Some(matrices) = matrices.filter(|_| within) else {
        return Ok(LinearReport {
            decision: LinearDecision::Timeout,
            matrices: matrices.unwrap_or(u64::MAX),
        });
    };
    // (F*)^n, as shifts of [q-1]^n.
    let nonzero: Vec<Vec<Elem>> = all_words(n, q - 1)
        .map(|w| w.into_iter().map(|c| c + 1).collect())
        .collect();
    let deadline = budget.time.map(|t| std::time::Instant::now() + t);

    let try_matrix = |idx: u64| -> Option<(Vec<Vec<Elem>>, Vec<Elem>)> {
        let entries = lex_word(idx as usize, free.len(), q);
        let mut a = vec![vec![0; n]; n];
        for i in 0..n {
            a[i][i] = 1;
        }
        for (&(i, j), &e) in free.iter().zip(&entries) {
            a[i][j] = e;
        }
        winning_b(&a, field, &nonzero).map(|b| (a, b))
    };

    let chunk: u64 = 4096;
    let chunks: Vec<u64> = (0..matrices.div_ceil(chunk)).collect();
    let scan = |&c: &u64| -> Option<Option<Witness>> {
        if deadline.is_some_and(|d| std::time::Instant::now() >= d) {
            return Some(None);
        }
        (c * chunk..((c + 1) * chunk).min(matrices))
            .find_map(&try_matrix)
            .map(Some)
    };
    let found = if workers <= 1 {
        chunks.iter().find_map(scan)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Parameter(e.to_string()))?;
        pool.install(|| chunks.par_iter().find_map_first(scan))
    };
    let decision = match found {
        None => LinearDecision::Unsolvable,
        Some(None) => LinearDecision::Timeout,
        Some(Some((a, b))) => LinearDecision::Solvable(LinearStrategy::new(field.clone(), a, b)?),
    };
    Ok(LinearReport { decision, matrices })
}

/// Lexicographically smallest winning `b` for this `A`, if any.
fn winning_b(a: &[Vec<Elem>], f: &FieldSpec, nonzero: &[Vec<Elem>]) -> Option<Vec<Elem>> {
    let n = a.len();
    let q = f.q();
    let h = left_null_space(a, f);
    if h.is_empty() {
        // A is invertible, so some x defeats every b.
        return None;
    }
    let syndrome = |v: &[Elem]| h.iter().fold(0usize, |acc, row| acc * q + f.dot(row, v) as usize);
    let space = q.pow(h.len() as u32);
    let mut hit = vec![false; space];
    let mut hits = 0;
    for s in nonzero {
        let k = syndrome(s);
        if !hit[k] {
            hit[k] = true;
            hits += 1;
            if hits == space {
                return None;
            }
        }
    }
    let mut b = vec![0; n];
    loop {
        if !hit[syndrome(&b)] {
            return Some(b);
        }
        if !next_word(&mut b, q) {
            unreachable!("an unhit syndrome class is nonempty");
        }
    }
}

/// Builds a coloring of the cycle with one arc removed on which every
/// vertex guesses wrong, for any strategy with three colors.
///
/// The strategy must be keyed on `cycle_minus_edge(n)`: vertex 0 sees only
/// vertex 1, and vertex `n-1` still sees vertex 0. Colors are fixed left to
/// right so that each vertex's guess function leaves at least two safe
/// choices for its successor.
pub fn cycle_minus_edge_adversary(n: usize, s: &TableStrategy) -> Result<Coloring> {
    if s.q() != 3 {
        return Err(Error::UnsupportedMode(format!(
            "the cycle-minus-edge adversary works for q = 3 only, got {}",
            s.q()
        )));
    }
    let g = build_graph(&GraphSpec::CycleMinusEdge(n))?;
    s.check_graph(&g)?;
    const Q: u8 = 3;
    let mut x = vec![0u8; n];

    // How many successor colors d make vertex i guess `target`.
    let hits = |x: &mut Vec<u8>, i: usize, target: u8| -> usize {
        let saved = x[i + 1];
        let count = (0..Q)
            .filter(|&d| {
                x[i + 1] = d;
                s.guess(i, x) == target
            })
            .count();
        x[i + 1] = saved;
        count
    };
    // Colors c for x[i] that keep vertex i - 1 wrong.
    let keeps_prev_wrong = |x: &mut Vec<u8>, i: usize| -> Vec<u8> {
        (0..Q)
            .filter(|&c| {
                x[i] = c;
                s.guess(i - 1, x) != x[i - 1]
            })
            .collect()
    };

    x[0] = (0..Q)
        .find(|&c| hits(&mut x, 0, c) <= 1)
        .expect("three preimages cannot all have two or more points");
    for i in 1..n - 1 {
        let safe = keeps_prev_wrong(&mut x, i);
        let pick = safe.into_iter().find(|&c| {
            x[i] = c;
            hits(&mut x, i, c) <= 1
        });
        x[i] = pick.ok_or_else(|| Error::Precondition(format!("no admissible color at vertex {i}")))?;
    }
    let last = n - 1;
    let safe = keeps_prev_wrong(&mut x, last);
    let pick = safe.into_iter().find(|&c| {
        x[last] = c;
        s.guess(last, &x) != c
    });
    x[last] = pick.ok_or_else(|| Error::Precondition("no admissible color at the last vertex".into()))?;

    if s.someone_correct(&x) {
        return Err(Error::Precondition(format!(
            "adversary coloring {x:?} failed re-validation"
        )));
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinRank {
    Value(usize),
    Timeout,
}

/// Minimum rank over `field` of a matrix fitting `g`: nonzero diagonal,
/// zeros at non-adjacent pairs, and both off-diagonal entries of each edge
/// free and independent.
///
/// This is the min-rank over the given field only, an upper bound on the
/// minimum over all finite fields. Scaling a row by a nonzero constant
/// keeps both the rank and the zero pattern, so only unit diagonals are
/// enumerated. Budget work is `(q-1)^n * q^(2|E|)`.
pub fn min_rank_bruteforce(g: &SightGraph, field: &FieldSpec, budget: Budget) -> Result<MinRank> {
    if g.mode() != Mode::Undirected {
        return Err(Error::UnsupportedMode("min-rank needs an undirected graph".into()));
    }
    let n = g.n();
    let q = field.q();
    let free: Vec<(usize, usize)> = (0..n).flat_map(|i| g.sees(i).iter().map(move |&j| (i, j))).collect();
    let within = checked_pow(q - 1, n)
        .zip(checked_pow(q, free.len()))
        .and_then(|(d, e)| d.checked_mul(e))
        .is_some_and(|w| w <= budget.work);
    if !within {
        return Ok(MinRank::Timeout);
    }
    let mut meter = budget.start();
    let mut entries = vec![0; free.len()];
    let mut best = n;
    loop {
        if !meter.tick() {
            return Ok(MinRank::Timeout);
        }
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            m[i][i] = 1;
        }
        for (&(i, j), &e) in free.iter().zip(&entries) {
            m[i][j] = e;
        }
        best = best.min(matrix_rank(&m, field));
        if best <= 1 || !next_word(&mut entries, q) {
            break;
        }
    }
    Ok(MinRank::Value(best))
}
