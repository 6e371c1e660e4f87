//! Table strategies and exhaustive win verification.
//!
//! A [`TableStrategy`] gives each vertex a total lookup table from the
//! colors it sees (in ascending neighbor order) to a guess. Tables are
//! indexed by the lexicographic rank of the view.

use std::ops::Range;

use rayon::prelude::*;

use crate::budget::{checked_pow, Budget};
use crate::error::{param, Error, Result};
use crate::graphs::{Mode, SightGraph};
use crate::words::{lex_rank, lex_word, next_word, Color, Coloring};

/// Largest number of colorings [`verify_wins`] enumerates by default.
pub const DEFAULT_VERIFY_WORK: u64 = 1_000_000_000;

pub fn default_verify_budget() -> Budget {
    Budget::work(DEFAULT_VERIFY_WORK)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableStrategy {
    q: usize,
    neighbors: Vec<Vec<usize>>,
    tables: Vec<Vec<Color>>,
}

impl TableStrategy {
    /// Wraps explicit tables after checking arity, totality and range.
    pub fn new(q: usize, neighbors: Vec<Vec<usize>>, tables: Vec<Vec<Color>>) -> Result<Self> {
        if q == 0 || q > Color::MAX as usize + 1 {
            return param(format!("q = {q} out of range"));
        }
        if neighbors.len() != tables.len() {
            return param("one table per vertex required");
        }
        for (v, (nb, table)) in neighbors.iter().zip(&tables).enumerate() {
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return param(format!("neighbors of {v} not strictly increasing"));
            }
            let want =
                checked_pow(q, nb.len()).ok_or_else(|| Error::Parameter(format!("table of vertex {v} too large")))?;
            if table.len() as u64 != want {
                return param(format!(
                    "table of vertex {v} has {} entries, expected {want}",
                    table.len()
                ));
            }
            if let Some(&g) = table.iter().find(|&&g| g as usize >= q) {
                return param(format!("guess {g} of vertex {v} outside 0..{q}"));
            }
        }
        Ok(TableStrategy { q, neighbors, tables })
    }

    /// Tabulates `guess(v, view)` over every view of every vertex of `g`.
    pub fn from_fn(g: &SightGraph, q: usize, mut guess: impl FnMut(usize, &[Color]) -> Color) -> Result<Self> {
        let mut tables = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            let d = g.degree(v);
            let size = checked_pow(q, d)
                .filter(|&s| s <= u32::MAX as u64)
                .ok_or_else(|| Error::Parameter(format!("table of vertex {v} too large")))?;
            let mut table = Vec::with_capacity(size as usize);
            let mut view = vec![0; d];
            loop {
                table.push(guess(v, &view));
                if !next_word(&mut view, q) {
                    break;
                }
            }
            tables.push(table);
        }
        TableStrategy::new(q, g.neighborhoods().to_vec(), tables)
    }

    /// Every vertex guesses `c` regardless of what it sees.
    pub fn constant(g: &SightGraph, q: usize, c: Color) -> Result<Self> {
        TableStrategy::from_fn(g, q, |_, _| c)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.tables.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn table(&self, v: usize) -> &[Color] {
        &self.tables[v]
    }

    /// Guess of `v` for the view given as colors of its neighbors.
    pub fn guess_view(&self, v: usize, view: &[Color]) -> Color {
        self.tables[v][lex_rank(view, self.q)]
    }

    /// Guess of `v` under a full coloring (its own entry is ignored).
    #[inline]
    pub fn guess(&self, v: usize, coloring: &[Color]) -> Color {
        self.tables[v][self.view_rank(v, coloring)]
    }

    #[inline]
    pub fn view_rank(&self, v: usize, coloring: &[Color]) -> usize {
        self.neighbors[v]
            .iter()
            .fold(0, |acc, &u| acc * self.q + coloring[u] as usize)
    }

    pub fn correct_count(&self, coloring: &[Color]) -> usize {
        (0..self.n())
            .filter(|&v| self.guess(v, coloring) == coloring[v])
            .count()
    }

    pub fn someone_correct(&self, coloring: &[Color]) -> bool {
        (0..self.n()).any(|v| self.guess(v, coloring) == coloring[v])
    }

    /// Fails unless the tables are keyed by exactly the neighborhoods of `g`.
    pub fn check_graph(&self, g: &SightGraph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::Mismatch(format!(
                "strategy has {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        for v in 0..g.n() {
            if self.neighbors[v] != g.sees(v) {
                return Err(Error::Mismatch(format!(
                    "vertex {v}: strategy keyed by {:?}, graph sees {:?}",
                    self.neighbors[v],
                    g.sees(v)
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn tables_mut(&mut self) -> &mut [Vec<Color>] {
        &mut self.tables
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Wins,
    /// Lexicographically smallest coloring on which every vertex is wrong.
    Loses(Coloring),
    Timeout,
}

impl Verdict {
    pub fn wins(&self) -> bool {
        matches!(self, Verdict::Wins)
    }
}

fn prepare(g: &SightGraph, s: &TableStrategy, q: usize, budget: &Budget) -> Result<Option<usize>> {
    if s.q() != q {
        return Err(Error::Mismatch(format!("strategy is for q = {}, asked q = {q}", s.q())));
    }
    s.check_graph(g)?;
    Ok(checked_pow(q, g.n())
        .filter(|&total| total <= budget.work && total <= usize::MAX as u64)
        .map(|total| total as usize))
}

/// Scans colorings with ranks in `range`; returns the first bad one.
fn first_bad_in(s: &TableStrategy, n: usize, range: Range<usize>) -> Option<Coloring> {
    if range.is_empty() {
        return None;
    }
    let q = s.q();
    let mut x = lex_word(range.start, n, q);
    for _ in range {
        if !s.someone_correct(&x) {
            return Some(x);
        }
        next_word(&mut x, q);
    }
    None
}

/// Decides whether `s` wins on `g` by enumerating all `q^n` colorings.
///
/// Budget work is the number of colorings; if `q^n` exceeds it the verdict
/// is [`Verdict::Timeout`] without enumerating anything.
pub fn verify_wins(g: &SightGraph, s: &TableStrategy, q: usize, budget: Budget) -> Result<Verdict> {
    verify_wins_par(g, s, q, budget, 1)
}

/// [`verify_wins`] split into contiguous rank ranges over `workers` threads;
/// the reported witness is still the lexicographically smallest.
pub fn verify_wins_par(g: &SightGraph, s: &TableStrategy, q: usize, budget: Budget, workers: usize) -> Result<Verdict> {
    let Some(total) = prepare(g, s, q, &budget)? else {
        return Ok(Verdict::Timeout);
    };
    let n = g.n();
    let deadline = budget.time.map(|t| std::time::Instant::now() + t);
    let chunk = 1 << 16;
    let ranges: Vec<Range<usize>> = (0..total)
        .step_by(chunk)
        .map(|lo| lo..(lo + chunk).min(total))
        .collect();
    let scan = |r: &Range<usize>| -> Option<Option<Coloring>> {
        if deadline.is_some_and(|d| std::time::Instant::now() >= d) {
            return Some(None);
        }
        first_bad_in(s, n, r.clone()).map(Some)
    };
    let found = if workers <= 1 {
        ranges.iter().find_map(scan)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Parameter(e.to_string()))?;
        pool.install(|| ranges.par_iter().find_map_first(scan))
    };
    Ok(match found {
        None => Verdict::Wins,
        Some(Some(x)) => Verdict::Loses(x),
        Some(None) => Verdict::Timeout,
    })
}

/// Every coloring on which all vertices guess wrong, in lexicographic order.
pub fn find_all_bad_colorings(g: &SightGraph, s: &TableStrategy, q: usize, budget: Budget) -> Result<Vec<Coloring>> {
    let Some(total) = prepare(g, s, q, &budget)? else {
        return Err(Error::Budget(format!("{q}^{} colorings exceed the budget", g.n())));
    };
    let mut out = Vec::new();
    let mut x = vec![0; g.n()];
    for _ in 0..total {
        if !s.someone_correct(&x) {
            out.push(x.clone());
        }
        next_word(&mut x, q);
    }
    Ok(out)
}

/// Transfers a strategy on `h` to a supergraph `g`.
///
/// `embedding[u]` is the vertex of `g` playing the role of `u`; every arc of
/// `h` must map to an arc of `g`. Embedded vertices ignore the extra colors
/// they see; every other vertex guesses 0.
pub fn lift_strategy(
    h: &SightGraph,
    s_h: &TableStrategy,
    g: &SightGraph,
    embedding: &[usize],
) -> Result<TableStrategy> {
    s_h.check_graph(h)?;
    if embedding.len() != h.n() {
        return param("embedding must map every vertex of h");
    }
    let mut preimage = vec![usize::MAX; g.n()];
    for (u, &v) in embedding.iter().enumerate() {
        if v >= g.n() {
            return param(format!("embedding sends {u} outside g"));
        }
        if preimage[v] != usize::MAX {
            return param(format!("embedding is not injective at {v}"));
        }
        preimage[v] = u;
    }
    for (u, w) in h.edges().into_iter().flat_map(|(u, w)| {
        if h.mode() == Mode::Undirected {
            vec![(u, w), (w, u)]
        } else {
            vec![(u, w)]
        }
    }) {
        if !g.has_edge(embedding[u], embedding[w]) {
            return param(format!(
                "arc {u}->{w} of h maps to non-arc {}->{} of g",
                embedding[u], embedding[w]
            ));
        }
    }
    // Positions, inside each g-view, of the colors the h-strategy reads.
    let picks: Vec<Option<Vec<usize>>> = (0..g.n())
        .map(|v| {
            let u = preimage[v];
            (u != usize::MAX).then(|| {
                h.sees(u)
                    .iter()
                    .map(|&w| g.sees(v).binary_search(&embedding[w]).unwrap())
                    .collect()
            })
        })
        .collect();
    let mut sub = Vec::new();
    TableStrategy::from_fn(g, s_h.q(), |v, view| match &picks[v] {
        Some(pos) => {
            sub.clear();
            sub.extend(pos.iter().map(|&p| view[p]));
            s_h.guess_view(preimage[v], &sub)
        }
        None => 0,
    })
}

/// Result of deleting a pendant vertex while keeping the strategy winning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub graph: SightGraph,
    pub strategy: TableStrategy,
    /// `labels[new] = old` vertex label.
    pub labels: Vec<usize>,
}

/// Removes the degree-one vertex `v1` from an undirected graph and rebuilds
/// its neighbor's table so the remaining players still always win.
///
/// Every coloring of `g - v1` on which all vertices other than the
/// neighbor `v2` guess wrong pins down what `v2` must guess for that view;
/// views never pinned down get guess 0. If two such colorings demand
/// different guesses for one view, the input strategy was not winning and
/// [`Error::NotReducible`] is returned.
pub fn tree_reduction(g: &SightGraph, s: &TableStrategy, v1: usize, q: usize, budget: Budget) -> Result<Reduction> {
    if g.mode() != Mode::Undirected {
        return Err(Error::UnsupportedMode(
            "tree reduction needs an undirected graph".into(),
        ));
    }
    if v1 >= g.n() {
        return param(format!("vertex {v1} out of range"));
    }
    if g.degree(v1) != 1 {
        return param(format!("vertex {v1} has degree {}, expected 1", g.degree(v1)));
    }
    if q < 3 {
        return Err(Error::Precondition(format!("tree reduction needs q >= 3, got {q}")));
    }
    if s.q() != q {
        return Err(Error::Mismatch(format!("strategy is for q = {}, asked q = {q}", s.q())));
    }
    s.check_graph(g)?;
    let v2_old = g.sees(v1)[0];
    let (h, labels) = g.without_vertex(v1)?;
    let m = h.n();
    let total = checked_pow(q, m)
        .filter(|&t| t <= budget.work)
        .ok_or_else(|| Error::Budget(format!("{q}^{m} colorings exceed the budget")))?;
    let v2 = labels.iter().position(|&o| o == v2_old).unwrap();

    // Tables of the survivors carry over; only v2's is rebuilt.
    let mut reduced = TableStrategy::from_fn(&h, q, |_, _| 0)?;
    for (new, &old) in labels.iter().enumerate() {
        if new != v2 {
            reduced.tables_mut()[new] = s.table(old).to_vec();
        }
    }
    const UNSET: Color = Color::MAX;
    let mut f2 = vec![UNSET; reduced.table(v2).len()];
    let mut x = vec![0; m];
    for _ in 0..total {
        let others_wrong = (0..m).all(|v| v == v2 || reduced.guess(v, &x) != x[v]);
        if others_wrong {
            let key = reduced.view_rank(v2, &x);
            match f2[key] {
                UNSET => f2[key] = x[v2],
                c if c == x[v2] => {}
                c => {
                    return Err(Error::NotReducible(format!(
                        "view {:?} of vertex {v2_old} needs both {c} and {}",
                        lex_word(key, h.degree(v2), q),
                        x[v2]
                    )))
                }
            }
        }
        next_word(&mut x, q);
    }
    for c in f2.iter_mut().filter(|c| **c == UNSET) {
        *c = 0;
    }
    reduced.tables_mut()[v2] = f2;
    Ok(Reduction {
        graph: h,
        strategy: reduced,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_graph, GraphSpec};

    fn sum_strategy(n: usize) -> (SightGraph, TableStrategy) {
        let g = build_graph(&GraphSpec::Complete(n)).unwrap();
        let s = TableStrategy::from_fn(&g, n, |v, view| {
            let sum: usize = view.iter().map(|&c| c as usize).sum();
            ((v + n * n - sum % n) % n) as Color
        })
        .unwrap();
        (g, s)
    }

    #[test]
    fn sum_strategy_wins_on_triangle() {
        let (g, s) = sum_strategy(3);
        assert_eq!(verify_wins(&g, &s, 3, default_verify_budget()).unwrap(), Verdict::Wins);
        assert!(find_all_bad_colorings(&g, &s, 3, default_verify_budget())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn constant_guess_on_edge_loses() {
        let g = build_graph(&GraphSpec::Path(2)).unwrap();
        let s = TableStrategy::constant(&g, 2, 0).unwrap();
        assert_eq!(
            verify_wins(&g, &s, 2, default_verify_budget()).unwrap(),
            Verdict::Loses(vec![1, 1])
        );
        assert_eq!(
            find_all_bad_colorings(&g, &s, 2, default_verify_budget()).unwrap(),
            vec![vec![1, 1]]
        );
    }

    #[test]
    fn lone_vertex() {
        let g = SightGraph::empty(1);
        let s = TableStrategy::constant(&g, 2, 0).unwrap();
        assert_eq!(
            find_all_bad_colorings(&g, &s, 2, default_verify_budget()).unwrap(),
            vec![vec![1]]
        );
    }

    #[test]
    fn budget_and_mismatch() {
        let (g, s) = sum_strategy(3);
        assert_eq!(verify_wins(&g, &s, 3, Budget::work(26)).unwrap(), Verdict::Timeout);
        assert!(matches!(
            verify_wins(&g, &s, 4, default_verify_budget()),
            Err(Error::Mismatch(_))
        ));
        let p3 = build_graph(&GraphSpec::Path(3)).unwrap();
        assert!(matches!(
            verify_wins(&p3, &s, 3, default_verify_budget()),
            Err(Error::Mismatch(_))
        ));
        assert!(find_all_bad_colorings(&g, &s, 3, Budget::work(3)).is_err());
    }

    #[test]
    fn parallel_agrees() {
        let g = build_graph(&GraphSpec::Cycle(5)).unwrap();
        let s = TableStrategy::from_fn(&g, 3, |v, view| {
            ((v + view[0] as usize * 2 + view[1] as usize) % 3) as Color
        })
        .unwrap();
        let seq = verify_wins(&g, &s, 3, default_verify_budget()).unwrap();
        let par = verify_wins_par(&g, &s, 3, default_verify_budget(), 4).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn table_validation() {
        assert!(TableStrategy::new(2, vec![vec![1], vec![0]], vec![vec![0, 1], vec![0]]).is_err());
        assert!(TableStrategy::new(2, vec![vec![1], vec![0]], vec![vec![0, 2], vec![0, 0]]).is_err());
        assert!(TableStrategy::new(2, vec![vec![1], vec![0]], vec![vec![0, 1], vec![1, 0]]).is_ok());
    }

    #[test]
    fn lift_triangle_into_k4_and_pendant() {
        let (k3, s) = sum_strategy(3);
        let k4 = build_graph(&GraphSpec::Complete(4)).unwrap();
        let lifted = lift_strategy(&k3, &s, &k4, &[0, 1, 2]).unwrap();
        assert!(verify_wins(&k4, &lifted, 3, default_verify_budget()).unwrap().wins());

        let pendant = SightGraph::from_edges(Mode::Undirected, 4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
        let lifted = lift_strategy(&k3, &s, &pendant, &[0, 1, 2]).unwrap();
        assert!(verify_wins(&pendant, &lifted, 3, default_verify_budget())
            .unwrap()
            .wins());

        let same = lift_strategy(&k3, &s, &k3, &[0, 1, 2]).unwrap();
        assert_eq!(same, s);

        let p3 = build_graph(&GraphSpec::Path(3)).unwrap();
        assert!(lift_strategy(&k3, &s, &p3, &[0, 1, 2]).is_err());
        assert!(lift_strategy(&k3, &s, &k4, &[0, 1, 1]).is_err());
    }

    #[test]
    fn tree_reduction_on_pendant_triangle() {
        let (k3, s) = sum_strategy(3);
        let g = SightGraph::from_edges(Mode::Undirected, 4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
        let lifted = lift_strategy(&k3, &s, &g, &[0, 1, 2]).unwrap();
        let red = tree_reduction(&g, &lifted, 3, 3, Budget::unlimited()).unwrap();
        assert_eq!(red.graph, k3);
        assert_eq!(red.labels, vec![0, 1, 2]);
        for v in 0..3 {
            assert_eq!(red.strategy.table(v).len(), 9);
        }
        assert!(verify_wins(&red.graph, &red.strategy, 3, default_verify_budget())
            .unwrap()
            .wins());
    }

    #[test]
    fn tree_reduction_rejects_bad_inputs() {
        let g = build_graph(&GraphSpec::Path(3)).unwrap();
        let s = TableStrategy::constant(&g, 3, 0).unwrap();
        assert!(matches!(
            tree_reduction(&g, &s, 1, 3, Budget::unlimited()),
            Err(Error::Parameter(_))
        ));
        let s2 = TableStrategy::constant(&g, 2, 0).unwrap();
        assert!(matches!(
            tree_reduction(&g, &s2, 0, 2, Budget::unlimited()),
            Err(Error::Precondition(_))
        ));

        // Vertex 0 copies its neighbor. With vertex 2 gone, (0,1) and (0,2)
        // both leave vertex 0 wrong and show vertex 1 the same view.
        let losing = TableStrategy::from_fn(&g, 3, |v, view| if v == 0 { view[0] } else { 0 }).unwrap();
        assert!(matches!(
            tree_reduction(&g, &losing, 2, 3, Budget::unlimited()),
            Err(Error::NotReducible(_))
        ));
    }
}
