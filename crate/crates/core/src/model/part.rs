use std::fmt;

/// A factorization unit of a dependency tree.
///
/// `inner: None` marks the inner-most modifier case: `modifier` is the
/// closest modifier of `head` on its side. Root-headed grand-sibling parts
/// use `grandparent = 0` as a sentinel together with `head = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Dep {
        head: usize,
        modifier: usize,
    },
    Sib {
        head: usize,
        inner: Option<usize>,
        modifier: usize,
    },
    Gch {
        grandparent: usize,
        head: usize,
        modifier: usize,
    },
    GSib {
        grandparent: usize,
        head: usize,
        inner: Option<usize>,
        modifier: usize,
    },
}

impl Part {
    pub fn dep(head: usize, modifier: usize) -> Self {
        Part::Dep { head, modifier }
    }

    pub fn sib(head: usize, inner: Option<usize>, modifier: usize) -> Self {
        Part::Sib {
            head,
            inner,
            modifier,
        }
    }

    pub fn gch(grandparent: usize, head: usize, modifier: usize) -> Self {
        Part::Gch {
            grandparent,
            head,
            modifier,
        }
    }

    pub fn gsib(grandparent: usize, head: usize, inner: Option<usize>, modifier: usize) -> Self {
        Part::GSib {
            grandparent,
            head,
            inner,
            modifier,
        }
    }

    pub fn head(&self) -> usize {
        match *self {
            Part::Dep { head, .. }
            | Part::Sib { head, .. }
            | Part::Gch { head, .. }
            | Part::GSib { head, .. } => head,
        }
    }

    pub fn modifier(&self) -> usize {
        match *self {
            Part::Dep { modifier, .. }
            | Part::Sib { modifier, .. }
            | Part::Gch { modifier, .. }
            | Part::GSib { modifier, .. } => modifier,
        }
    }

    /// Whether the part is structurally valid for an `n`-word sentence.
    pub fn is_valid(&self, n: usize) -> bool {
        let dep_ok = |s: usize, t: usize| s <= n && (1..=n).contains(&t) && s != t;
        let inner_ok = |s: usize, r: Option<usize>, t: usize| match r {
            None => true,
            Some(r) => (s < r && r < t) || (t < r && r < s),
        };
        let outside = |g: usize, s: usize, t: usize| g <= n && (g < s.min(t) || g > s.max(t));
        match *self {
            Part::Dep { head, modifier } => dep_ok(head, modifier),
            Part::Sib {
                head,
                inner,
                modifier,
            } => dep_ok(head, modifier) && inner_ok(head, inner, modifier),
            Part::Gch {
                grandparent,
                head,
                modifier,
            } => dep_ok(head, modifier) && head >= 1 && outside(grandparent, head, modifier),
            Part::GSib {
                grandparent,
                head,
                inner,
                modifier,
            } => {
                dep_ok(head, modifier)
                    && inner_ok(head, inner, modifier)
                    && if head == 0 {
                        grandparent == 0
                    } else {
                        outside(grandparent, head, modifier)
                    }
            }
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = |r: Option<usize>| r.map_or_else(|| "-".to_owned(), |r| r.to_string());
        match *self {
            Part::Dep { head, modifier } => write!(f, "Dep({head},{modifier})"),
            Part::Sib {
                head,
                inner: r,
                modifier,
            } => write!(f, "Sib({head},{},{modifier})", inner(r)),
            Part::Gch {
                grandparent,
                head,
                modifier,
            } => write!(f, "Gch({grandparent},{head},{modifier})"),
            Part::GSib {
                grandparent,
                head,
                inner: r,
                modifier,
            } => write!(f, "GSib({grandparent},{head},{},{modifier})", inner(r)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity() {
        assert!(Part::dep(0, 1).is_valid(1));
        assert!(!Part::dep(1, 0).is_valid(1));
        assert!(!Part::dep(1, 1).is_valid(1));
        assert!(Part::sib(3, Some(2), 1).is_valid(3));
        assert!(!Part::sib(3, Some(3), 1).is_valid(3));
        assert!(Part::gch(0, 1, 2).is_valid(2));
        assert!(!Part::gch(2, 1, 3).is_valid(3));
        assert!(!Part::gch(0, 0, 1).is_valid(2));
        assert!(Part::gsib(0, 0, None, 1).is_valid(1));
        assert!(!Part::gsib(2, 0, None, 1).is_valid(2));
        assert!(Part::gsib(3, 1, None, 2).is_valid(3));
    }

    #[test]
    fn display() {
        assert_eq!(Part::gsib(0, 1, None, 2).to_string(), "GSib(0,1,-,2)");
        assert_eq!(Part::sib(0, Some(1), 2).to_string(), "Sib(0,1,2)");
    }
}
