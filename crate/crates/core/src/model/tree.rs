use std::fmt;

use crate::error::TreeError;

/// Checks that `heads` (where `heads[m - 1]` is the head of word `m`)
/// describes a tree rooted at index 0.
pub fn validate_tree(heads: &[usize]) -> Result<(), TreeError> {
    let n = heads.len();
    if n == 0 {
        return Err(TreeError::Empty);
    }
    for (i, &h) in heads.iter().enumerate() {
        let word = i + 1;
        if h > n {
            return Err(TreeError::HeadOutOfRange { word, head: h, n });
        }
        if h == word {
            return Err(TreeError::SelfLoop { word });
        }
    }
    // 0 = unvisited, 1 = on current path, 2 = reaches root
    let mut state = vec![0u8; n + 1];
    state[0] = 2;
    let mut path = Vec::new();
    for start in 1..=n {
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = heads[v - 1];
        }
        if state[v] == 1 {
            return Err(TreeError::Cycle { word: v });
        }
        for u in path.drain(..) {
            state[u] = 2;
        }
    }
    Ok(())
}

/// Returns whether a valid tree is projective: for every arc `(h, m)` each
/// word strictly between `h` and `m` descends from `h`.
pub fn is_projective(heads: &[usize]) -> Result<bool, TreeError> {
    validate_tree(heads)?;
    let head_of = |w: usize| heads[w - 1];
    let dominated_by = |h: usize, mut w: usize| loop {
        if w == h {
            return true;
        }
        if w == 0 {
            return false;
        }
        w = head_of(w);
    };
    for m in 1..=heads.len() {
        let h = head_of(m);
        let (lo, hi) = if h < m { (h, m) } else { (m, h) };
        if (lo + 1..hi).any(|b| !dominated_by(h, b)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A multi-root projective dependency tree over words `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveTree {
    heads: Vec<usize>,
}

impl ProjectiveTree {
    /// Validates and wraps a head array (`heads[m - 1]` is the head of `m`).
    pub fn new(heads: Vec<usize>) -> Result<Self, TreeError> {
        if !is_projective(&heads)? {
            return Err(TreeError::NonProjective);
        }
        Ok(ProjectiveTree { heads })
    }

    /// Wraps a head array produced by a chart decoder.
    pub(crate) fn from_decoder(heads: Vec<usize>) -> Self {
        debug_assert_eq!(is_projective(&heads), Ok(true), "decoder produced {heads:?}");
        ProjectiveTree { heads }
    }

    /// Number of words.
    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }

    /// Head of word `m` (1-based).
    pub fn head(&self, m: usize) -> usize {
        self.heads[m - 1]
    }

    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    pub fn into_heads(self) -> Vec<usize> {
        self.heads
    }

    /// Modifiers of `h` to its left, nearest first.
    pub fn left_modifiers(&self, h: usize) -> impl Iterator<Item = usize> + '_ {
        (1..h).rev().filter(move |&m| self.head(m) == h)
    }

    /// Modifiers of `h` to its right, nearest first.
    pub fn right_modifiers(&self, h: usize) -> impl Iterator<Item = usize> + '_ {
        (h + 1..=self.len()).filter(move |&m| self.head(m) == h)
    }
}

impl fmt::Display for ProjectiveTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.heads)
    }
}
