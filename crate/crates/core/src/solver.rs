//! Exact q-solvability search, hat guessing numbers, and the randomized
//! adversaries that produce bad colorings.
//!
//! The exact search assigns guesses to cells `(v, view)`. It repeatedly takes
//! the lexicographically smallest coloring no assigned cell covers yet and
//! branches over the vertices, in ascending order, that could still cover it.
//! Branch `v` sets `v`'s cell to `x_v`; later branches forbid that value, so
//! the branches partition the remaining strategies.

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::{checked_pow, Budget, Meter};
use crate::error::{param, Error, Result};
use crate::graphs::SightGraph;
use crate::strategies::TableStrategy;
use crate::words::{lex_word, next_word, Color, Coloring};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_SOLVE_TIMEOUT: Duration = Duration::from_secs(60);
pub const DEFAULT_LLL_ITERS: u64 = 10_000;

/// Largest coloring space the exact search will index.
pub const MAX_SOLVER_COLORINGS: u64 = 1 << 24;

/// Random assignments tried before the exhaustive phase of
/// [`robust_bad_coloring`].
const ROBUST_RANDOM_TRIES: usize = 256;

/// Which uncovered coloring the exact search branches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branching {
    /// The lexicographically smallest uncovered coloring.
    #[default]
    Lex,
    /// An uncovered coloring with the fewest cells left that could cover it,
    /// ties broken lexicographically. Same verdicts, usually far fewer nodes.
    FewestOptions,
}

pub fn default_solve_budget() -> Budget {
    Budget::new(DEFAULT_NODE_BUDGET, Some(DEFAULT_SOLVE_TIMEOUT))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solvable(TableStrategy),
    Unsolvable,
    Timeout,
}

#[derive(Debug, Clone)]
pub struct SolveVerdict {
    pub outcome: SolveOutcome,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SolveVerdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self.outcome, SolveOutcome::Solvable(_))
    }

    pub fn is_unsolvable(&self) -> bool {
        matches!(self.outcome, SolveOutcome::Unsolvable)
    }

    pub fn is_timeout(&self) -> bool {
        matches!(self.outcome, SolveOutcome::Timeout)
    }

    pub fn witness(&self) -> Option<&TableStrategy> {
        match &self.outcome {
            SolveOutcome::Solvable(s) => Some(s),
            _ => None,
        }
    }

    /// `solvable`, `unsolvable` or `timeout`.
    pub fn label(&self) -> &'static str {
        match self.outcome {
            SolveOutcome::Solvable(_) => "solvable",
            SolveOutcome::Unsolvable => "unsolvable",
            SolveOutcome::Timeout => "timeout",
        }
    }
}

struct Search<'a> {
    q: usize,
    nbrs: &'a [Vec<usize>],
    /// `weight[i] = q^(n-1-i)`: rank contribution of coordinate i.
    weight: Vec<usize>,
    cell_base: Vec<usize>,
    /// Rank contribution of each view of v.
    view_part: Vec<Vec<usize>>,
    /// Rank contributions of all colorings of the vertices outside N(v) + v.
    free: Vec<Vec<usize>>,
    guess: Vec<Option<Color>>,
    forbidden: Vec<u64>,
    /// Assigned cells guessing right on each coloring.
    cover: Vec<u16>,
    /// Unassigned cells whose own-color value is not forbidden, per coloring.
    avail: Vec<u16>,
    uncovered: usize,
    /// Sum of class sizes over unassigned cells; each cell covers at most its
    /// class, so more uncovered colorings than this is a dead end.
    capacity: u64,
    branching: Branching,
    meter: Meter,
}

impl Search<'_> {
    fn digit(&self, r: usize, u: usize) -> usize {
        (r / self.weight[u]) % self.q
    }

    fn view_of(&self, r: usize, v: usize) -> usize {
        self.nbrs[v].iter().fold(0, |acc, &u| acc * self.q + self.digit(r, u))
    }

    /// Sets cell `(v, w)` to `g`; false if some uncovered coloring lost its
    /// last chance. Always applies the whole update.
    fn assign(&mut self, v: usize, w: usize, g: usize) -> bool {
        let cell = self.cell_base[v] + w;
        self.guess[cell] = Some(g as Color);
        self.capacity -= self.free[v].len() as u64;
        let mut alive = true;
        let forb = self.forbidden[cell];
        for h in (0..self.q).filter(|h| forb >> h & 1 == 0) {
            let base = self.view_part[v][w] + h * self.weight[v];
            for i in 0..self.free[v].len() {
                let r = base + self.free[v][i];
                self.avail[r] -= 1;
                if h == g {
                    self.cover[r] += 1;
                    if self.cover[r] == 1 {
                        self.uncovered -= 1;
                    }
                } else if self.cover[r] == 0 && self.avail[r] == 0 {
                    alive = false;
                }
            }
        }
        alive
    }

    fn unassign(&mut self, v: usize, w: usize, g: usize) {
        let cell = self.cell_base[v] + w;
        let forb = self.forbidden[cell];
        for h in (0..self.q).filter(|h| forb >> h & 1 == 0) {
            let base = self.view_part[v][w] + h * self.weight[v];
            for i in 0..self.free[v].len() {
                let r = base + self.free[v][i];
                self.avail[r] += 1;
                if h == g {
                    self.cover[r] -= 1;
                    if self.cover[r] == 0 {
                        self.uncovered += 1;
                    }
                }
            }
        }
        self.guess[cell] = None;
        self.capacity += self.free[v].len() as u64;
    }

    fn forbid(&mut self, v: usize, w: usize, g: usize) -> bool {
        let cell = self.cell_base[v] + w;
        self.forbidden[cell] |= 1 << g;
        let base = self.view_part[v][w] + g * self.weight[v];
        let mut alive = true;
        for &f in &self.free[v] {
            let r = base + f;
            self.avail[r] -= 1;
            alive &= self.cover[r] > 0 || self.avail[r] > 0;
        }
        alive
    }

    fn unforbid(&mut self, v: usize, w: usize, g: usize) {
        let cell = self.cell_base[v] + w;
        self.forbidden[cell] &= !(1 << g);
        let base = self.view_part[v][w] + g * self.weight[v];
        for &f in &self.free[v] {
            self.avail[base + f] += 1;
        }
    }

    /// `Some(true)` leaves a winning assignment in place; `None` on timeout.
    fn dfs(&mut self, start: usize) -> Option<bool> {
        if !self.meter.tick() {
            return None;
        }
        if self.uncovered == 0 {
            return Some(true);
        }
        if self.uncovered as u64 > self.capacity {
            return Some(false);
        }
        let mut r = start;
        while self.cover[r] > 0 {
            r += 1;
        }
        if self.branching == Branching::FewestOptions {
            let mut best = self.avail[r];
            for i in r + 1..self.cover.len() {
                if best == 1 {
                    break;
                }
                if self.cover[i] == 0 && self.avail[i] < best {
                    (r, best) = (i, self.avail[i]);
                }
            }
        }
        let next = if self.branching == Branching::Lex { r + 1 } else { start };
        let mut forbids = Vec::new();
        let mut result = Some(false);
        for v in 0..self.nbrs.len() {
            let w = self.view_of(r, v);
            let g = self.digit(r, v);
            let cell = self.cell_base[v] + w;
            if self.guess[cell].is_some() || self.forbidden[cell] >> g & 1 == 1 {
                continue;
            }
            let res = if self.assign(v, w, g) {
                self.dfs(next)
            } else {
                Some(false)
            };
            if res == Some(true) {
                return res;
            }
            self.unassign(v, w, g);
            if res.is_none() {
                result = None;
                break;
            }
            forbids.push((v, w, g));
            if !self.forbid(v, w, g) {
                break;
            }
        }
        for &(v, w, g) in forbids.iter().rev() {
            self.unforbid(v, w, g);
        }
        result
    }
}

fn all_offsets(coords: &[usize], weight: &[usize], q: usize) -> Vec<usize> {
    let mut out = vec![0usize];
    for &u in coords {
        out = out
            .iter()
            .flat_map(|&base| (0..q).map(move |c| base + c * weight[u]))
            .collect();
    }
    out
}

/// Decides whether `g` is q-solvable by complete backtracking over cells.
///
/// Budget work counts search nodes. A `Solvable` witness wins on every
/// coloring; `Unsolvable` is only reported after the space is exhausted.
pub fn decide_solvable(g: &SightGraph, q: usize, budget: Budget) -> Result<SolveVerdict> {
    decide_solvable_with(g, q, budget, Branching::Lex)
}

/// [`decide_solvable`] with an explicit branching rule.
pub fn decide_solvable_with(g: &SightGraph, q: usize, budget: Budget, branching: Branching) -> Result<SolveVerdict> {
    let n = g.n();
    if q == 0 || q > 64 {
        return param(format!("q = {q} out of range 1..=64"));
    }
    if n == 0 {
        return param("graph has no vertices");
    }
    let mut meter = budget.start();
    let total = match checked_pow(q, n) {
        Some(t) if t <= MAX_SOLVER_COLORINGS && n < u16::MAX as usize => t as usize,
        _ => {
            meter.tick();
            return Ok(SolveVerdict {
                outcome: SolveOutcome::Timeout,
                nodes: 0,
                elapsed: meter.elapsed(),
            });
        }
    };
    let weight: Vec<usize> = (0..n).map(|i| q.pow((n - 1 - i) as u32)).collect();
    let nbrs = g.neighborhoods();
    let mut cell_base = Vec::with_capacity(n);
    let mut view_part = Vec::with_capacity(n);
    let mut free = Vec::with_capacity(n);
    let mut cells = 0;
    for v in 0..n {
        cell_base.push(cells);
        // Neighbor order puts the first neighbor most significant, matching
        // the table rank of the view.
        let mut vp = Vec::with_capacity(q.pow(nbrs[v].len() as u32));
        let mut view = vec![0 as Color; nbrs[v].len()];
        loop {
            vp.push(nbrs[v].iter().zip(&view).map(|(&u, &c)| c as usize * weight[u]).sum());
            if !next_word(&mut view, q) {
                break;
            }
        }
        cells += vp.len();
        view_part.push(vp);
        let outside: Vec<usize> = (0..n).filter(|&u| u != v && !nbrs[v].contains(&u)).collect();
        free.push(all_offsets(&outside, &weight, q));
    }
    let capacity = (0..n).map(|v| (view_part[v].len() * free[v].len()) as u64).sum();
    let mut search = Search {
        q,
        nbrs,
        weight,
        cell_base,
        view_part,
        free,
        guess: vec![None; cells],
        forbidden: vec![0; cells],
        cover: vec![0; total],
        avail: vec![n as u16; total],
        uncovered: total,
        capacity,
        branching,
        meter,
    };
    let outcome = match search.dfs(0) {
        Some(true) => {
            let tables = (0..n)
                .map(|v| {
                    let lo = search.cell_base[v];
                    let hi = lo + search.view_part[v].len();
                    search.guess[lo..hi].iter().map(|c| c.unwrap_or(0)).collect()
                })
                .collect();
            SolveOutcome::Solvable(TableStrategy::new(q, nbrs.to_vec(), tables)?)
        }
        Some(false) => SolveOutcome::Unsolvable,
        None => SolveOutcome::Timeout,
    };
    Ok(SolveVerdict {
        outcome,
        nodes: search.meter.used(),
        elapsed: search.meter.elapsed(),
    })
}

/// Reference decision by enumerating every table strategy in lexicographic
/// order of its cells. Budget work counts strategy-coloring evaluations.
pub fn decide_solvable_naive(g: &SightGraph, q: usize, budget: Budget) -> Result<SolveOutcome> {
    let n = g.n();
    if q == 0 || q > Color::MAX as usize {
        return param(format!("q = {q} out of range"));
    }
    let sizes: Vec<usize> = (0..n).map(|v| q.pow(g.degree(v) as u32)).collect();
    let cells: usize = sizes.iter().sum();
    let work = checked_pow(q, cells).and_then(|s| s.checked_mul(checked_pow(q, n)?));
    if work.is_none_or(|w| w > budget.work) {
        return Ok(SolveOutcome::Timeout);
    }
    let base: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let b = *acc;
            *acc += s;
            Some(b)
        })
        .collect();
    let total = q.pow(n as u32);
    let colorings: Vec<Coloring> = (0..total).map(|r| lex_word(r, n, q)).collect();
    let cell_of: Vec<Vec<usize>> = colorings
        .iter()
        .map(|x| {
            (0..n)
                .map(|v| base[v] + g.sees(v).iter().fold(0, |acc, &u| acc * q + x[u] as usize))
                .collect()
        })
        .collect();
    let mut flat = vec![0 as Color; cells];
    loop {
        let wins = colorings
            .iter()
            .zip(&cell_of)
            .all(|(x, cs)| (0..n).any(|v| flat[cs[v]] == x[v]));
        if wins {
            let tables = (0..n).map(|v| flat[base[v]..base[v] + sizes[v]].to_vec()).collect();
            return Ok(SolveOutcome::Solvable(TableStrategy::new(
                q,
                g.neighborhoods().to_vec(),
                tables,
            )?));
        }
        if !next_word(&mut flat, q) {
            return Ok(SolveOutcome::Unsolvable);
        }
    }
}

#[derive(Debug, Clone)]
pub struct HatGuessingNumber {
    /// Largest q found solvable (at least 1).
    pub value: usize,
    /// True when `value + 1` was proved unsolvable.
    pub exact: bool,
    pub verdicts: Vec<(usize, SolveVerdict)>,
}

/// Runs [`decide_solvable`] for `q = 2..=q_max`, each with `budget`, and
/// stops at the first q that is not solvable.
pub fn hat_guessing_number(g: &SightGraph, q_max: usize, budget: Budget) -> Result<HatGuessingNumber> {
    hat_guessing_number_with(g, q_max, budget, Branching::Lex)
}

pub fn hat_guessing_number_with(
    g: &SightGraph,
    q_max: usize,
    budget: Budget,
    branching: Branching,
) -> Result<HatGuessingNumber> {
    if q_max == 0 {
        return param("q_max must be at least 1");
    }
    let mut report = HatGuessingNumber {
        value: 1,
        exact: false,
        verdicts: Vec::new(),
    };
    for q in 2..=q_max {
        let verdict = decide_solvable_with(g, q, budget, branching)?;
        let outcome = verdict.outcome.clone();
        report.verdicts.push((q, verdict));
        match outcome {
            SolveOutcome::Solvable(_) => report.value = q,
            SolveOutcome::Unsolvable => {
                report.exact = true;
                break;
            }
            SolveOutcome::Timeout => break,
        }
    }
    Ok(report)
}

fn check_strategy(g: &SightGraph, s: &TableStrategy, q: usize) -> Result<()> {
    if s.q() != q {
        return Err(Error::Mismatch(format!("strategy is for q = {}, asked q = {q}", s.q())));
    }
    s.check_graph(g)
}

/// Moser-Tardos resampling: while some vertex guesses right, recolor the
/// lowest such vertex and everything it sees. Any returned coloring defeats
/// every vertex.
pub fn lll_bad_coloring(
    g: &SightGraph,
    s: &TableStrategy,
    q: usize,
    seed: u64,
    max_iters: u64,
) -> Result<Option<Coloring>> {
    check_strategy(g, s, q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Coloring = (0..g.n()).map(|_| rng.gen_range(0..q) as Color).collect();
    for _ in 0..max_iters {
        let Some(v) = (0..g.n()).find(|&v| s.guess(v, &x) == x[v]) else {
            return Ok(Some(x));
        };
        x[v] = rng.gen_range(0..q) as Color;
        for &u in g.sees(v) {
            x[u] = rng.gen_range(0..q) as Color;
        }
    }
    Ok((!s.someone_correct(&x)).then_some(x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RobustOutcome {
    /// Colors of the low-degree vertices; high-degree entries are `None`.
    Found(Vec<Option<Color>>),
    NoneExists,
    Timeout,
}

struct Robust<'a> {
    s: &'a TableStrategy,
    q_low: usize,
    q_high: usize,
    low: Vec<usize>,
    /// Per low vertex: positions in its view held by high vertices.
    high_slots: Vec<Vec<usize>>,
    /// `ready[i]`: low vertices checkable once `low[..=i]` are colored.
    ready: Vec<Vec<usize>>,
    x: Vec<Option<Color>>,
    meter: Meter,
}

impl Robust<'_> {
    /// Whether low vertex `v` is wrong for every coloring of its high
    /// neighbors. `None` on timeout.
    fn safe(&mut self, v: usize) -> Option<bool> {
        let nb = self.s.neighbors(v);
        let slots = &self.high_slots[v];
        let mut view: Vec<Color> = nb.iter().map(|&u| self.x[u].unwrap_or(0)).collect();
        let mut high = vec![0 as Color; slots.len()];
        let own = self.x[v].expect("checked vertices are colored");
        loop {
            if !self.meter.tick() {
                return None;
            }
            for (&p, &c) in slots.iter().zip(&high) {
                view[p] = c;
            }
            if self.s.guess_view(v, &view) == own {
                return Some(false);
            }
            if !next_word(&mut high, self.q_low) {
                return Some(true);
            }
        }
    }

    fn all_safe(&mut self) -> Option<bool> {
        for i in 0..self.low.len() {
            if !self.safe(self.low[i])? {
                return Some(false);
            }
        }
        Some(true)
    }

    fn dfs(&mut self, i: usize) -> Option<bool> {
        if i == self.low.len() {
            return Some(true);
        }
        let v = self.low[i];
        for c in 0..self.q_high {
            self.x[v] = Some(c as Color);
            let mut ok = true;
            for j in 0..self.ready[i].len() {
                if !self.safe(self.ready[i][j])? {
                    ok = false;
                    break;
                }
            }
            if ok && self.dfs(i + 1)? {
                return Some(true);
            }
        }
        self.x[v] = None;
        Some(false)
    }
}

/// Searches colors in `[q_high]` for the vertices seeing at most `k` others
/// such that each of them guesses wrong under `s` whatever colors from
/// `[q_low]` the remaining vertices wear. Random assignments are tried
/// first, then an exhaustive search; `NoneExists` only follows exhaustion.
/// Budget work counts checked views.
pub fn robust_bad_coloring(
    g: &SightGraph,
    s: &TableStrategy,
    k: usize,
    q_low: usize,
    q_high: usize,
    seed: u64,
    budget: Budget,
) -> Result<RobustOutcome> {
    check_strategy(g, s, q_high)?;
    if q_low == 0 || q_low > q_high {
        return param(format!("need 1 <= q_low <= q_high, got {q_low} and {q_high}"));
    }
    let n = g.n();
    let low: Vec<usize> = (0..n).filter(|&v| g.degree(v) <= k).collect();
    let mut order = vec![usize::MAX; n];
    for (i, &v) in low.iter().enumerate() {
        order[v] = i;
    }
    let high_slots = (0..n)
        .map(|v| {
            g.sees(v)
                .iter()
                .enumerate()
                .filter(|&(_, &u)| order[u] == usize::MAX)
                .map(|(p, _)| p)
                .collect()
        })
        .collect();
    let mut ready = vec![Vec::new(); low.len()];
    for &v in &low {
        let last = g
            .sees(v)
            .iter()
            .map(|&u| order[u])
            .filter(|&i| i != usize::MAX)
            .fold(order[v], usize::max);
        ready[last].push(v);
    }
    let mut search = Robust {
        s,
        q_low,
        q_high,
        low,
        high_slots,
        ready,
        x: vec![None; n],
        meter: budget.start(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ROBUST_RANDOM_TRIES {
        for i in 0..search.low.len() {
            search.x[search.low[i]] = Some(rng.gen_range(0..q_high) as Color);
        }
        match search.all_safe() {
            Some(true) => return Ok(RobustOutcome::Found(search.x)),
            Some(false) => {}
            None => return Ok(RobustOutcome::Timeout),
        }
    }
    search.x = vec![None; n];
    Ok(match search.dfs(0) {
        Some(true) => RobustOutcome::Found(search.x),
        Some(false) => RobustOutcome::NoneExists,
        None => RobustOutcome::Timeout,
    })
}
