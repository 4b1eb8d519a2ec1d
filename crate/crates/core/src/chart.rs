//! Span items, dense log-domain charts, and the generic chart engine shared
//! by every factorization.
//!
//! A factorization describes its dynamic program as a set of span items and,
//! for each item, the binary productions `item <- left (x) right (x) w(p)`.
//! From that single description the engine derives Viterbi decoding (max
//! semiring with backpointers), the inside pass (log-sum semiring), and the
//! outside pass with part marginals.

/// Semiring zero in the log domain.
pub const LOG_ZERO: f64 = f64::NEG_INFINITY;

/// `log(exp(cell) + exp(increment))` by the max-shift method.
///
/// # Panics
///
/// Panics if either input is NaN.
#[inline]
pub fn logsumexp_accumulate(cell: f64, increment: f64) -> f64 {
    assert!(!cell.is_nan() && !increment.is_nan(), "NaN in log-sum accumulation");
    let (hi, lo) = if cell >= increment {
        (cell, increment)
    } else {
        (increment, cell)
    };
    if lo == LOG_ZERO {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Max-accumulation with a backpointer that only moves on strict improvement.
/// Returns whether the cell changed.
#[inline]
pub fn max_accumulate(cell: &mut f64, increment: f64, backpointer: &mut u32, candidate: u32) -> bool {
    assert!(!increment.is_nan(), "NaN in max accumulation");
    if increment > *cell {
        *cell = increment;
        *backpointer = candidate;
        true
    } else {
        false
    }
}

/// Log-sum-exp of a slice (`LOG_ZERO` for an empty slice).
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(LOG_ZERO, f64::max);
    if max == LOG_ZERO {
        return LOG_ZERO;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semiring {
    MaxTropical,
    LogSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpanKind {
    Complete,
    Incomplete,
    Sibling,
}

/// Which endpoint of a span is the head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The left endpoint heads the span (arcs point rightwards).
    HeadLeft,
    /// The right endpoint heads the span.
    HeadRight,
}

/// A chart item. For sibling spans of grandparented charts `grandparent`
/// holds the shared head of the two bounding modifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpanItem {
    pub kind: SpanKind,
    pub left: usize,
    pub right: usize,
    pub direction: Option<Direction>,
    pub grandparent: Option<usize>,
}

impl SpanItem {
    pub fn complete(left: usize, right: usize, direction: Direction, grandparent: Option<usize>) -> Self {
        SpanItem {
            kind: SpanKind::Complete,
            left,
            right,
            direction: Some(direction),
            grandparent,
        }
    }

    pub fn incomplete(left: usize, right: usize, direction: Direction, grandparent: Option<usize>) -> Self {
        SpanItem {
            kind: SpanKind::Incomplete,
            left,
            right,
            direction: Some(direction),
            grandparent,
        }
    }

    pub fn sibling(left: usize, right: usize, grandparent: Option<usize>) -> Self {
        SpanItem {
            kind: SpanKind::Sibling,
            left,
            right,
            direction: None,
            grandparent,
        }
    }

    /// Head of the span for complete and incomplete items.
    pub fn head(&self) -> Option<usize> {
        match self.direction? {
            Direction::HeadLeft => Some(self.left),
            Direction::HeadRight => Some(self.right),
        }
    }
}

pub(crate) const C_HL: u8 = 0;
pub(crate) const C_HR: u8 = 1;
pub(crate) const I_HL: u8 = 2;
pub(crate) const I_HR: u8 = 3;
pub(crate) const SIB: u8 = 4;
const SLOTS: usize = 5;

/// Compact internal item key: slot (kind and direction), grandparent
/// position (ignored by non-grandparented layouts), and span endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Key {
    pub slot: u8,
    pub g: usize,
    pub l: usize,
    pub r: usize,
}

impl Key {
    #[inline]
    pub fn new(slot: u8, g: usize, l: usize, r: usize) -> Self {
        Key { slot, g, l, r }
    }
}

/// Dense index arithmetic for a chart: `[slot][g][left][right]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChartLayout {
    n: usize,
    gdim: usize,
}

impl ChartLayout {
    /// `O(n^2)` cells.
    pub fn plain(n: usize) -> Self {
        ChartLayout { n, gdim: 1 }
    }

    /// `O(n^3)` cells: one plane per grandparent `0..=n` plus one for
    /// root-level items, which have no grandparent.
    pub fn grandparented(n: usize) -> Self {
        ChartLayout { n, gdim: n + 2 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_grandparented(&self) -> bool {
        self.gdim > 1
    }

    /// Grandparent coordinate used for root-level items.
    #[inline]
    pub(crate) fn no_grandparent(&self) -> usize {
        self.n + 1
    }

    pub fn cell_count(&self) -> usize {
        SLOTS * self.gdim * (self.n + 1) * (self.n + 1)
    }

    #[inline]
    pub(crate) fn at(&self, slot: u8, g: usize, l: usize, r: usize) -> usize {
        let w = self.n + 1;
        let g = if self.gdim == 1 { 0 } else { g };
        ((slot as usize * self.gdim + g) * w + l) * w + r
    }

    #[inline]
    pub(crate) fn key_index(&self, k: Key) -> usize {
        self.at(k.slot, k.g, k.l, k.r)
    }

    pub(crate) fn key_at(&self, index: usize) -> Key {
        let w = self.n + 1;
        let r = index % w;
        let rest = index / w;
        let l = rest % w;
        let rest = rest / w;
        let g = rest % self.gdim;
        let slot = (rest / self.gdim) as u8;
        Key { slot, g, l, r }
    }

    pub(crate) fn key_of(&self, item: &SpanItem) -> Option<Key> {
        let slot = match (item.kind, item.direction) {
            (SpanKind::Complete, Some(Direction::HeadLeft)) => C_HL,
            (SpanKind::Complete, Some(Direction::HeadRight)) => C_HR,
            (SpanKind::Incomplete, Some(Direction::HeadLeft)) => I_HL,
            (SpanKind::Incomplete, Some(Direction::HeadRight)) => I_HR,
            (SpanKind::Sibling, None) => SIB,
            _ => return None,
        };
        if item.left > item.right || item.right > self.n {
            return None;
        }
        let g = match (self.is_grandparented(), item.grandparent) {
            (false, None) => 0,
            (false, Some(_)) => return None,
            (true, None) => self.no_grandparent(),
            (true, Some(g)) if g <= self.n && (g < item.left || g > item.right) => g,
            (true, Some(_)) => return None,
        };
        Some(Key::new(slot, g, item.left, item.right))
    }

    #[cfg(test)]
    pub(crate) fn item_of(&self, k: Key) -> SpanItem {
        let grandparent = (self.is_grandparented() && k.g != self.no_grandparent()).then_some(k.g);
        match k.slot {
            C_HL => SpanItem::complete(k.l, k.r, Direction::HeadLeft, grandparent),
            C_HR => SpanItem::complete(k.l, k.r, Direction::HeadRight, grandparent),
            I_HL => SpanItem::incomplete(k.l, k.r, Direction::HeadLeft, grandparent),
            I_HR => SpanItem::incomplete(k.l, k.r, Direction::HeadRight, grandparent),
            _ => SpanItem::sibling(k.l, k.r, grandparent),
        }
    }
}

/// A dense table of log values keyed by span items.
#[derive(Debug, Clone)]
pub struct Chart {
    layout: ChartLayout,
    semiring: Semiring,
    cells: Vec<f64>,
    backpointers: Option<Vec<u32>>,
}

const NO_BACKPOINTER: u32 = u32::MAX;

impl Chart {
    pub fn new(layout: ChartLayout, semiring: Semiring) -> Self {
        let size = layout.cell_count();
        let backpointers = match semiring {
            Semiring::MaxTropical => Some(vec![NO_BACKPOINTER; size]),
            Semiring::LogSum => None,
        };
        Chart {
            layout,
            semiring,
            cells: vec![LOG_ZERO; size],
            backpointers,
        }
    }

    pub fn layout(&self) -> ChartLayout {
        self.layout
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    /// Number of allocated cells.
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Value of `item`; items the chart cannot hold read as `LOG_ZERO`.
    pub fn get(&self, item: &SpanItem) -> f64 {
        self.layout
            .key_of(item)
            .map_or(LOG_ZERO, |k| self.cells[self.layout.key_index(k)])
    }
}

/// One way of building an item: `left (x) right (x) w(weight)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Production {
    pub left: usize,
    pub right: usize,
    pub weight: Option<usize>,
}

/// The dynamic program of one factorization.
pub(crate) trait Derivations {
    fn layout(&self) -> ChartLayout;

    /// Items spanning exactly `[s, t]`, children before parents.
    fn items_for_span(&self, s: usize, t: usize, out: &mut Vec<Key>);

    /// Every production of `item`, in tie-break order.
    fn productions(&self, item: Key, out: &mut Vec<Production>);

    fn goal(&self) -> Key;
}

fn is_axiom(k: Key) -> bool {
    (k.slot == C_HL || k.slot == C_HR) && k.l == k.r
}

fn for_each_item(d: &impl Derivations, reverse: bool, mut f: impl FnMut(Key)) {
    let n = d.layout().n();
    let mut items = Vec::new();
    let mut visit = |s: usize, t: usize| {
        items.clear();
        d.items_for_span(s, t, &mut items);
        if reverse {
            items.iter().rev().for_each(|&k| f(k));
        } else {
            items.iter().for_each(|&k| f(k));
        }
    };
    if reverse {
        for width in (0..=n).rev() {
            for s in (0..=n - width).rev() {
                visit(s, s + width);
            }
        }
    } else {
        for width in 0..=n {
            for s in 0..=n - width {
                visit(s, s + width);
            }
        }
    }
}

/// Bottom-up pass in the given semiring.
pub(crate) fn fill(d: &impl Derivations, scores: &[f64], semiring: Semiring) -> Chart {
    let layout = d.layout();
    let mut chart = Chart::new(layout, semiring);
    let mut prods = Vec::new();
    let mut terms = Vec::new();
    for_each_item(d, false, |k| {
        let idx = layout.key_index(k);
        if is_axiom(k) {
            chart.cells[idx] = 0.0;
            return;
        }
        prods.clear();
        d.productions(k, &mut prods);
        terms.clear();
        terms.extend(prods.iter().map(|p| {
            chart.cells[p.left] + chart.cells[p.right] + p.weight.map_or(0.0, |w| scores[w])
        }));
        match semiring {
            Semiring::LogSum => chart.cells[idx] = logsumexp(&terms),
            Semiring::MaxTropical => {
                let (mut best, mut bp) = (LOG_ZERO, NO_BACKPOINTER);
                for (i, &v) in terms.iter().enumerate() {
                    max_accumulate(&mut best, v, &mut bp, i as u32);
                }
                chart.cells[idx] = best;
                if let Some(bps) = chart.backpointers.as_mut() {
                    bps[idx] = bp;
                }
            }
        }
    });
    chart
}

/// Log partition function read from an inside chart.
pub(crate) fn goal_value(d: &impl Derivations, chart: &Chart) -> f64 {
    chart.cells[d.layout().key_index(d.goal())]
}

/// Top-down pass: returns the outside chart and, for every weight index,
/// the marginal probability mass of the productions using it.
pub(crate) fn outside(d: &impl Derivations, scores: &[f64], inside: &Chart) -> (Chart, Vec<f64>) {
    assert_eq!(inside.semiring, Semiring::LogSum, "outside needs an inside chart");
    let layout = d.layout();
    let beta = &inside.cells;
    let log_z = goal_value(d, inside);
    let mut alpha = Chart::new(layout, Semiring::LogSum);
    let mut marginals = vec![0.0; scores.len()];
    alpha.cells[layout.key_index(d.goal())] = 0.0;
    let mut prods = Vec::new();
    for_each_item(d, true, |k| {
        let idx = layout.key_index(k);
        let a = alpha.cells[idx];
        if a == LOG_ZERO || is_axiom(k) {
            return;
        }
        prods.clear();
        d.productions(k, &mut prods);
        for p in &prods {
            let w = p.weight.map_or(0.0, |w| scores[w]);
            let (bl, br) = (beta[p.left], beta[p.right]);
            alpha.cells[p.left] = logsumexp_accumulate(alpha.cells[p.left], a + br + w);
            alpha.cells[p.right] = logsumexp_accumulate(alpha.cells[p.right], a + bl + w);
            if let Some(wi) = p.weight {
                let total = a + bl + br + w;
                if total > LOG_ZERO {
                    marginals[wi] += (total - log_z).exp();
                }
            }
        }
    });
    (alpha, marginals)
}

/// Follows backpointers from the goal and returns the head array.
pub(crate) fn backtrack(d: &impl Derivations, chart: &Chart) -> Vec<usize> {
    let layout = d.layout();
    let bps = chart
        .backpointers
        .as_ref()
        .expect("backtracking needs a max-semiring chart");
    let n = layout.n();
    let mut heads = vec![usize::MAX; n];
    let mut stack = vec![d.goal()];
    let mut prods = Vec::new();
    while let Some(k) = stack.pop() {
        if is_axiom(k) {
            continue;
        }
        match k.slot {
            I_HL => heads[k.r - 1] = k.l,
            I_HR => heads[k.l - 1] = k.r,
            _ => {}
        }
        let bp = bps[layout.key_index(k)];
        assert_ne!(bp, NO_BACKPOINTER, "underivable item on the best path");
        prods.clear();
        d.productions(k, &mut prods);
        let p = prods[bp as usize];
        stack.push(layout.key_at(p.right));
        stack.push(layout.key_at(p.left));
    }
    debug_assert!(heads.iter().all(|&h| h != usize::MAX));
    heads
}
