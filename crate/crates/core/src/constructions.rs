//! Explicit winning strategies.
//!
//! Saturated-matrix columns are indexed by the coloring a part sees, with
//! the lowest-index vertex as the least significant digit:
//! `col(x) = sum_j x_j q^j`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{param, Error, Result};
use crate::graphs::{build_graph, GraphSpec, SightGraph};
use crate::hamming::{exhaustive_center, find_center, trivial_center, CenterMode, Word};
use crate::saturated::{is_t_saturated, SaturatedMatrix};
use crate::strategies::TableStrategy;
use crate::words::{all_words, lex_rank, Color};

pub use crate::linear::c4_linear_example;

/// A graph, a strategy on it, and the largest "everyone on the matrix
/// side is wrong" set met while building it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub graph: SightGraph,
    pub strategy: TableStrategy,
    /// Largest `C_y` (or, for directed cycles, largest union of chained
    /// `C` sets) over every coloring enumerated. Zero when not applicable.
    pub largest_bad_set: usize,
}

/// `col(x) = sum_j x_j q^j`.
#[inline]
pub fn column_of(x: &[Color], q: usize) -> usize {
    x.iter().rev().fold(0, |acc, &c| acc * q + c as usize)
}

/// Sum-mod-n strategy on `K_n` with `n` colors: vertex `i` bets that the
/// total of all hats is `i` mod n, so exactly one vertex is right.
pub fn complete_graph_strategy(n: usize) -> Result<Construction> {
    if n == 0 {
        return param("K_n needs n >= 1");
    }
    let graph = build_graph(&GraphSpec::Complete(n))?;
    let strategy = TableStrategy::from_fn(&graph, n, |i, view| {
        let seen = view.iter().map(|&c| c as usize).sum::<usize>() % n;
        ((i + n - seen) % n) as Color
    })?;
    Ok(Construction {
        graph,
        strategy,
        largest_bad_set: 0,
    })
}

/// Colorings `x` of the viewed part for which every row of `matrix` misses
/// `own`, i.e. `matrix[i][col(x)] != own[i]` for all `i`. Lexicographic
/// order.
pub fn bad_set(matrix: &SaturatedMatrix, own: &[Color], viewed_len: usize) -> Vec<Word> {
    let q = matrix.q();
    all_words(viewed_len, q)
        .filter(|x| {
            let col = column_of(x, q);
            own.iter().enumerate().all(|(i, &c)| matrix.get(i, col) != c)
        })
        .collect()
}

fn check_matrix(m: &SaturatedMatrix, rows: usize, cols: usize, q: usize) -> Result<()> {
    if m.q() != q {
        return param(format!("matrix is over {} symbols, expected {q}", m.q()));
    }
    if m.n_rows() != rows || m.n_cols() != cols {
        return param(format!(
            "matrix is {}x{}, expected {rows}x{cols}",
            m.n_rows(),
            m.n_cols()
        ));
    }
    Ok(())
}

fn pow(q: usize, e: usize) -> Result<usize> {
    crate::budget::checked_pow(q, e)
        .filter(|&v| v <= (1 << 26))
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parameter(format!("{q}^{e} is beyond desk scale")))
}

/// `K_{m,n}` with `q` colors from an `n x q^m` (m+1)-saturated matrix.
///
/// Vertices `0..m` form the left part and `m..m+n` the right part. Right
/// vertex `i` guesses `M[i][col(x)]` for left coloring `x`. Seeing right
/// coloring `y`, the left part plays the diagonal center of `C_y`, the set
/// of left colorings on which the whole right part is wrong; saturation
/// keeps `|C_y| <= m`.
pub fn bipartite_from_saturated(m: usize, n: usize, q: usize, matrix: &SaturatedMatrix) -> Result<Construction> {
    if m == 0 || n == 0 {
        return param("both parts must be nonempty");
    }
    check_matrix(matrix, n, pow(q, m)?, q)?;
    if !is_t_saturated(matrix.rows(), q, m + 1)?.holds() {
        return param(format!("matrix is not {}-saturated", m + 1));
    }
    let graph = build_graph(&GraphSpec::CompleteMultipartite(vec![m, n]))?;
    let mut centers = Vec::with_capacity(pow(q, n)?);
    let mut largest = 0;
    for y in all_words(n, q) {
        let cy = bad_set(matrix, &y, m);
        if cy.len() > m {
            return Err(Error::Precondition(format!("|C_y| = {} exceeds m = {m}", cy.len())));
        }
        largest = largest.max(cy.len());
        centers.push(trivial_center(&cy, m));
    }
    let strategy = TableStrategy::from_fn(&graph, q, |v, view| {
        if v < m {
            centers[lex_rank(view, q)][v]
        } else {
            matrix.get(v - m, column_of(view, q))
        }
    })?;
    Ok(Construction {
        graph,
        strategy,
        largest_bad_set: largest,
    })
}

/// A deduplicated set of colorings of `r * m` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColoringSet {
    words: Vec<Word>,
    len: usize,
    q: usize,
}

impl PartialColoringSet {
    pub fn new(mut words: Vec<Word>, len: usize, q: usize) -> Result<Self> {
        for w in &words {
            if w.len() != len || w.iter().any(|&c| c as usize >= q) {
                return param(format!("coloring {w:?} is not in [{q}]^{len}"));
            }
        }
        words.sort();
        words.dedup();
        Ok(PartialColoringSet { words, len, q })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `{x : (x, y) in C}` where `y` covers the last `|y|` coordinates.
    pub fn suffix(&self, y: &[Color]) -> Vec<Word> {
        let cut = self.len - y.len();
        self.words
            .iter()
            .filter(|w| &w[cut..] == y)
            .map(|w| w[..cut].to_vec())
            .collect()
    }
}

/// Strategy for `K_{m,...,m}` (r parts) that is right on a prescribed set
/// of at most `m^r` colorings.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Plan {
    /// One part: play a radius-(m-1) center of the set.
    Base(Word),
    /// The last part plays `center`; the others recurse on `Suffix(y)`
    /// for each light `y` and guess 0 for heavy ones.
    Split { center: Word, rest: HashMap<Word, Plan> },
}

fn plan(words: &[Word], m: usize, r: usize) -> Result<Plan> {
    let cap = (m as u128).pow(r as u32);
    if words.len() as u128 > cap {
        return Err(Error::Precondition(format!(
            "{} colorings exceed m^r = {cap}",
            words.len()
        )));
    }
    if r == 1 {
        return Ok(Plan::Base(trivial_center(words, m)));
    }
    let cut = (r - 1) * m;
    let mut by_y: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    for w in words {
        by_y.entry(w[cut..].to_vec()).or_default().push(w[..cut].to_vec());
    }
    let light = (m as u128).pow(r as u32 - 1);
    let heavy: Vec<Word> = by_y
        .iter()
        .filter(|(_, s)| s.len() as u128 > light)
        .map(|(y, _)| y.clone())
        .collect();
    debug_assert!(heavy.len() <= m);
    let mut rest = HashMap::new();
    for (y, suffix) in by_y {
        if suffix.len() as u128 <= light {
            rest.insert(y, plan(&suffix, m, r - 1)?);
        }
    }
    Ok(Plan::Split {
        center: trivial_center(&heavy, m),
        rest,
    })
}

impl Plan {
    /// Guess of vertex `i` of part `p`; `x` colors all parts of this level.
    fn guess(&self, p: usize, i: usize, x: &[Color], m: usize) -> Color {
        match self {
            Plan::Base(center) => center[i],
            Plan::Split { center, rest } => {
                let cut = x.len() - m;
                if p * m >= cut {
                    center[i]
                } else {
                    match rest.get(&x[cut..]) {
                        Some(sub) => sub.guess(p, i, &x[..cut], m),
                        None => 0,
                    }
                }
            }
        }
    }
}

/// Rebuilds a full coloring from vertex `v`'s view (own slot set to 0).
fn spread(g: &SightGraph, v: usize, view: &[Color], into: &mut [Color]) {
    into.fill(0);
    for (&u, &c) in g.sees(v).iter().zip(view) {
        into[u] = c;
    }
}

/// `K_{m,...,m}` with `r` parts of size `m`, right on every coloring in `set`.
pub fn multipartite_partial(m: usize, r: usize, q: usize, set: &PartialColoringSet) -> Result<Construction> {
    if m == 0 || r == 0 {
        return param("need m >= 1 and r >= 1");
    }
    if set.len != r * m || set.q != q {
        return param(format!("coloring set is not over [{q}]^{}", r * m));
    }
    let plan = plan(&set.words, m, r)?;
    let graph = build_graph(&GraphSpec::CompleteMultipartite(vec![m; r]))?;
    let mut full = vec![0; r * m];
    let strategy = TableStrategy::from_fn(&graph, q, |v, view| {
        spread(&graph, v, view, &mut full);
        plan.guess(v / m, v % m, &full, m)
    })?;
    Ok(Construction {
        graph,
        strategy,
        largest_bad_set: 0,
    })
}

/// `K_{m,...,m,n}` (r-1 parts of size m, then one of size n) from an
/// `n x q^((r-1)m)` t-saturated matrix with `t <= m^(r-1)`.
///
/// The size-n part guesses from the matrix. The other parts, seeing its
/// coloring `y`, play the partial strategy for `C_y`, which has fewer than
/// `t` members.
pub fn multipartite_strategy(m: usize, r: usize, n: usize, q: usize, matrix: &SaturatedMatrix) -> Result<Construction> {
    if m == 0 || n == 0 || r < 2 {
        return param("need m >= 1, n >= 1, r >= 2");
    }
    let left = (r - 1) * m;
    check_matrix(matrix, n, pow(q, left)?, q)?;
    let t = matrix.t();
    if t as u128 > (m as u128).pow(r as u32 - 1) {
        return Err(Error::Precondition(format!("t = {t} exceeds m^(r-1)")));
    }
    let mut parts = vec![m; r - 1];
    parts.push(n);
    let graph = build_graph(&GraphSpec::CompleteMultipartite(parts))?;
    let mut plans: Vec<Option<Plan>> = vec![None; pow(q, n)?];
    let mut largest = 0;
    let mut failure = None;
    let mut full = vec![0; left + n];
    let strategy = TableStrategy::from_fn(&graph, q, |v, view| {
        spread(&graph, v, view, &mut full);
        if v >= left {
            return matrix.get(v - left, column_of(&full[..left], q));
        }
        let y = &full[left..];
        let slot = &mut plans[lex_rank(y, q)];
        if slot.is_none() {
            let cy = bad_set(matrix, y, left);
            largest = largest.max(cy.len());
            if cy.len() >= t {
                failure = Some(format!("|C_y| = {} not below t = {t}", cy.len()));
            }
            match plan(&cy, m, r - 1) {
                Ok(p) => *slot = Some(p),
                Err(e) => {
                    failure = Some(e.to_string());
                    *slot = Some(Plan::Base(vec![0; m]));
                }
            }
        }
        slot.as_ref().unwrap().guess(v / m, v % m, &full[..left], m)
    })?;
    if let Some(msg) = failure {
        return Err(Error::Precondition(msg));
    }
    Ok(Construction {
        graph,
        strategy,
        largest_bad_set: largest,
    })
}

/// Blow-up of the directed r-cycle with part sizes `sizes`, from matrices
/// `M_1..M_{r-1}` where `M_i` is `n_i x q^(n_{i+1})` and `t_i`-saturated,
/// with `prod t_i <= e^(n_r / q)`.
///
/// Parts `1..r-1` guess from their matrices. The last part sees part 1's
/// coloring, chains the `C` sets through the matrices to get every coloring
/// of itself on which parts `1..r-1` are all wrong (fewer than `prod t_i`
/// of them), and plays a radius-(n_r - 1) center of that set.
pub fn directed_cycle_strategy(sizes: &[usize], q: usize, matrices: &[SaturatedMatrix]) -> Result<Construction> {
    let r = sizes.len();
    if r < 3 {
        return param("directed cycle blow-up needs at least 3 parts");
    }
    if matrices.len() != r - 1 {
        return param(format!("expected {} matrices, got {}", r - 1, matrices.len()));
    }
    for (i, mat) in matrices.iter().enumerate() {
        check_matrix(mat, sizes[i], pow(q, sizes[i + 1])?, q)?;
    }
    let product: f64 = matrices.iter().map(|m| m.t() as f64).product();
    let last = sizes[r - 1];
    if product > (last as f64 / q as f64).exp() {
        return Err(Error::Precondition(format!(
            "product of saturation levels {product} exceeds e^({last}/{q})"
        )));
    }
    let graph = build_graph(&GraphSpec::DirectedCycleBlowup(sizes.to_vec()))?;
    let offsets: Vec<usize> = std::iter::once(0)
        .chain(sizes.iter().scan(0, |acc, &s| {
            *acc += s;
            Some(*acc)
        }))
        .collect();
    let last_start = offsets[r - 1];

    // Memoized C sets: bad[i][rank of x^i] = colorings of part i+1.
    let mut bad: Vec<HashMap<usize, Vec<Word>>> = vec![HashMap::new(); r - 1];
    let mut largest = 0;
    let mut failure = None;
    let strategy = TableStrategy::from_fn(&graph, q, |v, view| {
        if v < last_start {
            let part = offsets.iter().rposition(|&o| o <= v).unwrap();
            return matrices[part].get(v - offsets[part], column_of(view, q));
        }
        // view = coloring of part 1
        let mut frontier: Vec<Word> = vec![view.to_vec()];
        for (i, mat) in matrices.iter().enumerate() {
            let mut next: Vec<Word> = Vec::new();
            for x in &frontier {
                let set = bad[i]
                    .entry(lex_rank(x, q))
                    .or_insert_with(|| bad_set(mat, x, sizes[i + 1]));
                next.extend(set.iter().cloned());
            }
            next.sort();
            next.dedup();
            frontier = next;
        }
        largest = largest.max(frontier.len());
        if frontier.len() as f64 >= product {
            failure = Some(format!(
                "chained bad set of size {} not below {product}",
                frontier.len()
            ));
        }
        match covering_center(&frontier, last, q, lex_rank(view, q) as u64) {
            Some(center) => center[v - last_start],
            None => {
                failure = Some(format!("no center for chained bad set {frontier:?}"));
                0
            }
        }
    })?;
    if let Some(msg) = failure {
        return Err(Error::Precondition(msg));
    }
    Ok(Construction {
        graph,
        strategy,
        largest_bad_set: largest,
    })
}

/// Radius-(len-1) center: exhaustive (lexicographically smallest) when the
/// space is small, otherwise seeded random sampling with an exhaustive
/// fallback.
fn covering_center(words: &[Word], len: usize, q: usize, seed: u64) -> Option<Word> {
    let small = crate::budget::checked_pow(q, len).is_some_and(|s| s <= 1 << 20);
    if small {
        return exhaustive_center(words, len, q);
    }
    find_center(words, len, q, CenterMode::Probabilistic { seed, cap: None })
        .ok()?
        .certificate()
        .map(|c| c.center)
        .or_else(|| exhaustive_center(words, len, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::strategies::{verify_wins, Verdict};

    #[test]
    fn sum_strategy_small_cases() {
        let c = complete_graph_strategy(3).unwrap();
        let correct: Vec<usize> = (0..3)
            .filter(|&v| c.strategy.guess(v, &[0, 1, 2]) == [0, 1, 2][v])
            .collect();
        assert_eq!(correct, vec![0]);

        let c = complete_graph_strategy(1).unwrap();
        assert_eq!(c.strategy.table(0), &[0]);

        let c = complete_graph_strategy(4).unwrap();
        assert_eq!(
            verify_wins(&c.graph, &c.strategy, 4, Budget::unlimited()).unwrap(),
            Verdict::Wins
        );
    }

    #[test]
    fn column_index_is_little_endian() {
        assert_eq!(column_of(&[1, 0], 2), 1);
        assert_eq!(column_of(&[0, 1], 2), 2);
        assert_eq!(column_of(&[2, 1], 3), 5);
    }

    #[test]
    fn partial_base_case() {
        let set = PartialColoringSet::new(vec![vec![0, 1], vec![2, 2]], 2, 3).unwrap();
        assert_eq!(plan(set.words(), 2, 1).unwrap(), Plan::Base(vec![0, 2]));
        let c = multipartite_partial(2, 1, 3, &set).unwrap();
        for w in set.words() {
            assert!(c.strategy.someone_correct(w));
        }
    }

    #[test]
    fn partial_two_parts() {
        let words = vec![vec![0, 0, 0, 0], vec![0, 1, 1, 0], vec![1, 0, 0, 1], vec![1, 1, 1, 1]];
        let set = PartialColoringSet::new(words, 4, 2).unwrap();
        let c = multipartite_partial(2, 2, 2, &set).unwrap();
        for w in set.words() {
            assert!(c.strategy.someone_correct(w), "{w:?}");
        }
    }

    #[test]
    fn partial_empty_set_guesses_zero() {
        let set = PartialColoringSet::new(vec![], 4, 3).unwrap();
        let c = multipartite_partial(2, 2, 3, &set).unwrap();
        for v in 0..4 {
            assert!(c.strategy.table(v).iter().all(|&g| g == 0));
        }
    }

    #[test]
    fn partial_too_many() {
        let set = PartialColoringSet::new(all_words(2, 2).collect(), 2, 2).unwrap();
        assert!(matches!(
            multipartite_partial(2, 1, 2, &set),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn suffix_accessor() {
        let set =
            PartialColoringSet::new(vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]], 3, 2).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.suffix(&[1]), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(set.suffix(&[1, 0]), vec![vec![1]]);
    }

    #[test]
    fn bipartite_two_by_four() {
        let m = SaturatedMatrix::new(vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]], 2, 3).unwrap();
        let c = bipartite_from_saturated(2, 2, 2, &m).unwrap();
        assert!(c.largest_bad_set <= 2);
        assert_eq!(
            verify_wins(&c.graph, &c.strategy, 2, Budget::unlimited()).unwrap(),
            Verdict::Wins
        );
    }

    #[test]
    fn bipartite_rejects_wrong_shapes() {
        let m = SaturatedMatrix::new(vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]], 2, 3).unwrap();
        assert!(bipartite_from_saturated(2, 3, 2, &m).is_err());
        assert!(bipartite_from_saturated(1, 2, 2, &m).is_err());
        // 2-saturated only (distinct columns) is not enough for m = 2.
        let weak = SaturatedMatrix::new(vec![vec![0, 1, 0, 1], vec![0, 0, 1, 1]], 2, 2).unwrap();
        assert!(
            is_t_saturated(weak.rows(), 2, 3).unwrap().holds() || bipartite_from_saturated(2, 2, 2, &weak).is_err()
        );
    }

    #[test]
    fn multipartite_two_parts_with_t_equal_m() {
        // Four distinct binary columns of length 2: 2-saturated, so C_y has
        // at most one member.
        let m = SaturatedMatrix::new(vec![vec![0, 1, 0, 1], vec![0, 0, 1, 1]], 2, 2).unwrap();
        let c = multipartite_strategy(2, 2, 2, 2, &m).unwrap();
        assert!(c.largest_bad_set <= 1);
        assert!(verify_wins(&c.graph, &c.strategy, 2, Budget::unlimited())
            .unwrap()
            .wins());
    }

    #[test]
    fn directed_cycle_three_parts() {
        let cols: Vec<Word> = all_words(3, 2).collect();
        let rows: Vec<Vec<Color>> = (0..3).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let m = SaturatedMatrix::new(rows, 2, 2).unwrap();
        let c = directed_cycle_strategy(&[3, 3, 3], 2, &[m.clone(), m.clone()]).unwrap();
        assert!(c.largest_bad_set < 4);
        assert!(verify_wins(&c.graph, &c.strategy, 2, Budget::unlimited())
            .unwrap()
            .wins());
        assert!(matches!(
            directed_cycle_strategy(&[3, 3, 1], 2, &[m.clone(), m]),
            Err(Error::Parameter(_))
        ));
    }
}
