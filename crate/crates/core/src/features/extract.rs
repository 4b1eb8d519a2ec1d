//! Instantiating templates on a part of a sentence.

use super::templates::{templates_for, Atom, Attr, FeatureTemplateId, Role};
use crate::error::{Error, Result};
use crate::model::{Factorization, Part, Sentence};

pub const BOS: &str = "<bos>";
pub const EOS: &str = "<eos>";
/// Value of every `r`-based atom when the part has no inner sibling.
pub const NONE_SYMBOL: &str = "<none>";
const SEPARATOR: char = '·';

/// The part type whose templates a part fires.
pub fn part_type(part: &Part) -> Factorization {
    match part {
        Part::Dep { .. } => Factorization::Dep1,
        Part::Sib { .. } => Factorization::Sib2,
        Part::Gch { .. } => Factorization::Gch2,
        Part::GSib { .. } => Factorization::GSib3,
    }
}

fn role_index(part: &Part, role: Role, between: usize) -> Option<usize> {
    match (role, *part) {
        (Role::Head, p) => Some(p.head()),
        (Role::Modifier, p) => Some(p.modifier()),
        (Role::Between, _) => Some(between),
        (Role::Inner, Part::Sib { inner, .. } | Part::GSib { inner, .. }) => inner,
        (Role::Grandparent, Part::Gch { grandparent, .. } | Part::GSib { grandparent, .. }) => Some(grandparent),
        _ => unreachable!("template role {role:?} not defined on {part}"),
    }
}

fn atom_value<'a>(sentence: &'a Sentence, part: &Part, atom: Atom, between: usize) -> &'a str {
    let Some(base) = role_index(part, atom.role, between) else {
        return NONE_SYMBOL;
    };
    let i = base as isize + atom.offset as isize;
    if i < 0 {
        return BOS;
    }
    if i as usize > sentence.len() {
        return EOS;
    }
    let tok = sentence.token(i as usize);
    match atom.attr {
        Attr::Form => &tok.form,
        Attr::Pos => &tok.pos,
        Attr::CoarsePos => &tok.cpos,
    }
}

fn push_escaped(out: &mut String, value: &str) {
    for c in value.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            SEPARATOR => out.push_str("\\·"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
}

/// Calls `f` once per fired feature, reusing `buf` for the key. The part
/// must be valid for the sentence.
pub fn for_each_feature(sentence: &Sentence, part: &Part, buf: &mut String, mut f: impl FnMut(FeatureTemplateId, &str)) {
    debug_assert!(part.is_valid(sentence.len()));
    let (lo, hi) = (part.head().min(part.modifier()), part.head().max(part.modifier()));
    for template in templates_for(part_type(part)) {
        let betweens = if template.uses(Role::Between) { lo + 1..hi } else { 0..1 };
        for b in betweens {
            buf.clear();
            for (k, &atom) in template.atoms.iter().enumerate() {
                if k > 0 {
                    buf.push(SEPARATOR);
                }
                push_escaped(buf, atom_value(sentence, part, atom, b));
            }
            f(template.id, buf);
        }
    }
}

/// All `(template, key)` pairs fired by `part`, in catalog order. Only the
/// part's own templates fire; enclosed lower-order parts are added by the
/// scorer.
pub fn extract_part_features(sentence: &Sentence, part: &Part) -> Result<Vec<(FeatureTemplateId, String)>> {
    if !part.is_valid(sentence.len()) {
        return Err(Error::InvalidPart(part.to_string(), sentence.len()));
    }
    let mut out = Vec::new();
    let mut buf = String::new();
    for_each_feature(sentence, part, &mut buf, |id, key| out.push((id, key.to_string())));
    Ok(out)
}

/// Escaped key fragment for one value; exposed for tests and tooling.
pub fn escape_value(value: &str) -> String {
    let mut s = String::new();
    push_escaped(&mut s, value);
    s
}
