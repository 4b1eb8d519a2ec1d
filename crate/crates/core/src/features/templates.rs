//! The closed catalog of feature templates.
//!
//! Each row is written in the table notation `L(x)` / `P(x)` over the part's
//! roles `g`, `s`, `r`, `t` (and `b` for an in-between word), with optional
//! `+1`/`-1` offsets. A row mentioning `P` is instantiated twice, once with
//! fine tags and once with coarse tags.

use std::fmt;
use std::sync::OnceLock;

use crate::model::Factorization;

/// Bumped whenever the catalog changes; stored in model files.
pub const TEMPLATE_CATALOG_VERSION: u32 = 1;

/// Index of a template in [`catalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureTemplateId(pub u16);

impl fmt::Display for FeatureTemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Grandparent,
    Head,
    Inner,
    Modifier,
    Between,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attr {
    Form,
    Pos,
    CoarsePos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Atom {
    pub role: Role,
    pub offset: i8,
    pub attr: Attr,
}

/// One instantiable template.
#[derive(Debug, Clone)]
pub struct Template {
    pub id: FeatureTemplateId,
    /// Group and row, e.g. `dep.bigram:L(s)·P(t)/coarse`.
    pub name: String,
    /// Part type that fires the template (`Dep1` means `Dep` parts, ...).
    pub part: Factorization,
    pub atoms: Vec<Atom>,
}

impl Template {
    pub fn uses(&self, role: Role) -> bool {
        self.atoms.iter().any(|a| a.role == role)
    }
}

const DEP_UNIGRAM: &[&str] = &["L(s)·P(s)", "L(s)", "P(s)", "L(t)·P(t)", "L(t)", "P(t)"];
const DEP_BIGRAM: &[&str] = &[
    "L(s)·P(s)·L(t)·P(t)",
    "L(s)·P(s)·P(t)",
    "P(s)·L(t)·P(t)",
    "L(s)·P(s)·L(t)",
    "L(s)·L(t)·P(t)",
    "L(s)·L(t)",
    "P(s)·P(t)",
];
const DEP_BETWEEN: &[&str] = &["L(s)·L(b)·L(t)", "P(s)·P(b)·P(t)"];
// The printed table repeats its first context row as its fourth; the one
// neighbour combination it never lists, (s-1, t+1), is used instead.
const DEP_CONTEXT: &[&str] = &[
    "P(s)·P(t)·P(s+1)·P(t-1)",
    "P(s)·P(t)·P(s-1)·P(t-1)",
    "P(s)·P(t)·P(s+1)·P(t+1)",
    "P(s)·P(t)·P(s-1)·P(t+1)",
];
const GCH_TRIGRAM: &[&str] = &[
    "L(g)·L(s)·L(t)",
    "P(g)·P(s)·P(t)",
    "L(g)·P(g)·P(s)·P(t)",
    "P(g)·L(s)·P(s)·P(t)",
    "P(g)·P(s)·L(t)·P(t)",
];
const GCH_BACKOFF: &[&str] = &["L(g)·L(t)", "P(g)·P(t)", "L(g)·P(t)", "P(g)·L(t)"];
const GCH_COORDINATION: &[&str] = &[
    "L(g)·P(s)",
    "P(g)·P(s)",
    "L(g)·P(t)",
    "P(g)·P(t)",
    "P(s)·P(t)",
    "L(g)·L(s)·L(t)",
    "L(g)·P(s)·P(t)",
    "P(g)·L(s)·P(t)",
    "P(g)·P(s)·L(t)",
    "L(g)·L(s)·P(t)",
    "L(g)·P(s)·L(t)",
    "P(g)·L(s)·L(t)",
    "P(g)·P(s)·P(t)",
    "P(g)·L(s)",
    "P(g)·L(t)",
    "L(s)·P(t)",
    "P(s)·L(t)",
];
const SIB_TRIGRAM: &[&str] = &[
    "L(s)·L(r)·L(t)",
    "P(s)·P(r)·P(t)",
    "L(s)·P(s)·P(r)·P(t)",
    "P(s)·L(r)·P(r)·P(t)",
    "P(s)·P(r)·L(t)·P(t)",
];
const SIB_BACKOFF: &[&str] = &["L(r)·L(t)", "P(r)·P(t)", "L(r)·P(t)", "P(r)·L(t)"];
const GSIB_FOURGRAM: &[&str] = &[
    "L(g)·P(s)·P(r)·P(t)",
    "P(g)·L(s)·P(r)·P(t)",
    "P(g)·P(s)·L(r)·P(t)",
    "P(g)·P(s)·P(r)·L(t)",
    "L(g)·L(s)·P(r)·P(t)",
    "L(g)·P(s)·L(r)·P(t)",
    "L(g)·P(s)·P(r)·L(t)",
    "P(g)·L(s)·L(r)·P(t)",
    "L(g)·L(s)·P(r)·L(t)",
    "P(g)·P(s)·L(r)·L(t)",
    "P(g)·P(s)·P(r)·P(t)",
];
const GSIB_CONTEXT: &[&str] = &[
    "P(g)·P(s)·P(r)·P(t)·P(g+1)·P(s+1)·P(t+1)",
    "P(g)·P(s)·P(r)·P(t)·P(g-1)·P(s-1)·P(t-1)",
    "P(g)·P(s)·P(r)·P(t)·P(g+1)·P(s+1)",
    "P(g)·P(s)·P(r)·P(t)·P(g-1)·P(s-1)",
    "P(g)·P(r)·P(t)·P(g+1)·P(r+1)·P(t+1)",
    "P(g)·P(r)·P(t)·P(g+1)·P(r-1)·P(t-1)",
    "P(g)·P(r)·P(g+1)·P(r+1)",
    "P(g)·P(r)·P(g-1)·P(r-1)",
    "P(g)·P(t)·P(g+1)·P(t+1)",
    "P(g)·P(t)·P(g-1)·P(t-1)",
    "P(r)·P(t)·P(r+1)·P(t+1)",
    "P(r)·P(t)·P(r-1)·P(t-1)",
];
const GSIB_BACKOFF: &[&str] = &[
    "L(g)·P(r)·P(t)",
    "P(g)·L(r)·P(t)",
    "P(g)·P(r)·L(t)",
    "L(g)·L(r)·P(t)",
    "L(g)·P(r)·L(t)",
    "P(g)·L(r)·L(t)",
    "P(g)·P(r)·P(t)",
];

/// Row groups in catalog order.
pub const GROUPS: &[(&str, Factorization, &[&str])] = &[
    ("dep.unigram", Factorization::Dep1, DEP_UNIGRAM),
    ("dep.bigram", Factorization::Dep1, DEP_BIGRAM),
    ("dep.between", Factorization::Dep1, DEP_BETWEEN),
    ("dep.context", Factorization::Dep1, DEP_CONTEXT),
    ("gch.trigram", Factorization::Gch2, GCH_TRIGRAM),
    ("gch.backoff", Factorization::Gch2, GCH_BACKOFF),
    ("gch.coordination", Factorization::Gch2, GCH_COORDINATION),
    ("sib.trigram", Factorization::Sib2, SIB_TRIGRAM),
    ("sib.backoff", Factorization::Sib2, SIB_BACKOFF),
    ("gsib.fourgram", Factorization::GSib3, GSIB_FOURGRAM),
    ("gsib.context", Factorization::GSib3, GSIB_CONTEXT),
    ("gsib.backoff", Factorization::GSib3, GSIB_BACKOFF),
];

fn parse_atom(text: &str, pos: Attr) -> Atom {
    let (attr, rest) = text.split_at(1);
    let attr = match attr {
        "L" => Attr::Form,
        "P" => pos,
        _ => panic!("bad template atom {text}"),
    };
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).expect("parenthesized role");
    let (role, offset) = inner.split_at(1);
    let role = match role {
        "g" => Role::Grandparent,
        "s" => Role::Head,
        "r" => Role::Inner,
        "t" => Role::Modifier,
        "b" => Role::Between,
        _ => panic!("bad template role {text}"),
    };
    let offset = if offset.is_empty() { 0 } else { offset.parse().expect("offset") };
    Atom { role, offset, attr }
}

fn build_catalog() -> Vec<Template> {
    let mut out = Vec::new();
    for &(group, part, rows) in GROUPS {
        for row in rows {
            let variants: &[(Attr, &str)] = if row.contains('P') {
                &[(Attr::Pos, "fine"), (Attr::CoarsePos, "coarse")]
            } else {
                &[(Attr::Pos, "lex")]
            };
            for &(pos, variant) in variants {
                out.push(Template {
                    id: FeatureTemplateId(out.len() as u16),
                    name: format!("{group}:{row}/{variant}"),
                    part,
                    atoms: row.split('·').map(|a| parse_atom(a, pos)).collect(),
                });
            }
        }
    }
    out
}

/// Every template, indexed by id.
pub fn catalog() -> &'static [Template] {
    static CATALOG: OnceLock<Vec<Template>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

/// Templates fired by parts of the given type.
pub fn templates_for(part: Factorization) -> impl Iterator<Item = &'static Template> {
    catalog().iter().filter(move |t| t.part == part)
}
