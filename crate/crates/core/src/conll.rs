//! CoNLL-X reading and writing, and projectivization of gold trees.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::error::{ConllError, TreeError};
use crate::features::LanguageProfile;
use crate::first_order::decode_dep1;
use crate::model::{is_projective, validate_tree, Factorization, Part, PartScoreTable, ProjectiveTree, Sentence, Token};

const COLUMNS: usize = 10;
const EMPTY: &str = "_";

/// One token line with every column kept as read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConllRecord {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub cpostag: String,
    pub postag: String,
    pub feats: String,
    pub head: usize,
    pub deprel: String,
    pub phead: String,
    pub pdeprel: String,
}

/// A gold head array that is a valid tree but not necessarily projective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTree(pub Vec<usize>);

impl RawTree {
    pub fn heads(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_projective(&self) -> Result<bool, TreeError> {
        is_projective(&self.0)
    }
}

/// A sentence block: the parsed sentence, its gold heads, and the original
/// records for faithful output.
#[derive(Debug, Clone, PartialEq)]
pub struct ConllSentence {
    pub sentence: Sentence,
    pub tree: RawTree,
    pub records: Vec<ConllRecord>,
}

impl ConllSentence {
    /// Wraps a sentence that did not come from a file; unknown columns are
    /// `_` and CPOSTAG holds the derived coarse tag.
    pub fn from_sentence(sentence: Sentence, heads: Vec<usize>) -> Self {
        let records = sentence
            .words()
            .iter()
            .zip(&heads)
            .enumerate()
            .map(|(i, (tok, &head))| ConllRecord {
                id: i + 1,
                form: tok.form.clone(),
                lemma: EMPTY.into(),
                cpostag: tok.cpos.clone(),
                postag: tok.pos.clone(),
                feats: EMPTY.into(),
                head,
                deprel: EMPTY.into(),
                phead: EMPTY.into(),
                pdeprel: EMPTY.into(),
            })
            .collect();
        ConllSentence {
            sentence,
            tree: RawTree(heads),
            records,
        }
    }

    /// Gold POS tags of the words, for evaluation.
    pub fn gold_pos(&self) -> Vec<String> {
        self.records.iter().map(|r| r.postag.clone()).collect()
    }
}

struct Block {
    records: Vec<ConllRecord>,
    lines: Vec<usize>,
}

fn parse_line(line: &str, line_no: usize, expected_id: usize, seen: &mut HashSet<usize>) -> Result<ConllRecord, ConllError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != COLUMNS {
        return Err(ConllError::ColumnCount {
            line: line_no,
            found: cols.len(),
        });
    }
    let raw_id = cols[0];
    if raw_id.contains('-') || raw_id.contains('.') {
        return Err(ConllError::MultiwordToken {
            line: line_no,
            value: raw_id.into(),
        });
    }
    let id: usize = match raw_id.parse() {
        Ok(id) if id >= 1 => id,
        _ => {
            return Err(ConllError::InvalidId {
                line: line_no,
                value: raw_id.into(),
            })
        }
    };
    if !seen.insert(id) {
        return Err(ConllError::DuplicateId { line: line_no, id });
    }
    if id != expected_id {
        return Err(ConllError::IdOutOfOrder {
            line: line_no,
            id,
            expected: expected_id,
        });
    }
    if cols[1].is_empty() {
        return Err(ConllError::EmptyForm { line: line_no });
    }
    let head: usize = cols[6].parse().map_err(|_| ConllError::InvalidHead {
        line: line_no,
        value: cols[6].into(),
    })?;
    Ok(ConllRecord {
        id,
        form: cols[1].into(),
        lemma: cols[2].into(),
        cpostag: cols[3].into(),
        postag: cols[4].into(),
        feats: cols[5].into(),
        head,
        deprel: cols[7].into(),
        phead: cols[8].into(),
        pdeprel: cols[9].into(),
    })
}

fn finish_block(block: Block, profile: LanguageProfile) -> Result<ConllSentence, ConllError> {
    let n = block.records.len();
    for (r, &line) in block.records.iter().zip(&block.lines) {
        if r.head > n {
            return Err(ConllError::HeadOutOfRange { line, head: r.head, n });
        }
    }
    let sentence = Sentence::from_words(
        block
            .records
            .iter()
            .map(|r| Token::new(r.form.clone(), r.postag.clone(), profile))
            .collect(),
    )
    .expect("non-empty block with non-empty forms");
    Ok(ConllSentence {
        sentence,
        tree: RawTree(block.records.iter().map(|r| r.head).collect()),
        records: block.records,
    })
}

/// Reads blank-line separated CoNLL-X blocks. Coarse tags are derived from
/// POSTAG with `profile`; CPOSTAG is kept only for output. Trees are not
/// checked for cycles or projectivity here.
pub fn read_conll(reader: impl BufRead, profile: LanguageProfile) -> Result<Vec<ConllSentence>, ConllError> {
    let mut out = Vec::new();
    let mut block = Block {
        records: Vec::new(),
        lines: Vec::new(),
    };
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        let line_no = i + 1;
        if line.trim().is_empty() {
            if !block.records.is_empty() {
                let done = std::mem::replace(
                    &mut block,
                    Block {
                        records: Vec::new(),
                        lines: Vec::new(),
                    },
                );
                out.push(finish_block(done, profile)?);
                seen.clear();
            }
            continue;
        }
        if block.records.is_empty() && line.starts_with('#') {
            continue;
        }
        let record = parse_line(line, line_no, block.records.len() + 1, &mut seen)?;
        block.records.push(record);
        block.lines.push(line_no);
    }
    if !block.records.is_empty() {
        out.push(finish_block(block, profile)?);
    }
    Ok(out)
}

/// Writes one block with `heads` in the HEAD column; DEPREL, PHEAD and
/// PDEPREL are written as `_`.
pub fn write_sentence(w: &mut impl Write, records: &[ConllRecord], heads: &[usize]) -> std::io::Result<()> {
    assert_eq!(records.len(), heads.len(), "one head per record");
    for (r, h) in records.iter().zip(heads) {
        let or_empty = |s: &str| if s.is_empty() { EMPTY.to_string() } else { s.to_string() };
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t_\t_\t_",
            r.id,
            r.form,
            or_empty(&r.lemma),
            or_empty(&r.cpostag),
            or_empty(&r.postag),
            or_empty(&r.feats),
            h
        )?;
    }
    writeln!(w)
}

/// Writes every sentence with its predicted heads.
pub fn write_conll<'a>(
    w: &mut impl Write,
    sentences: impl IntoIterator<Item = (&'a ConllSentence, &'a [usize])>,
) -> std::io::Result<()> {
    for (s, heads) in sentences {
        write_sentence(w, &s.records, heads)?;
    }
    Ok(())
}

/// The projective tree agreeing with `gold` on the most edges: first-order
/// decoding with +1 for gold arcs and -1 otherwise. Projective input is
/// returned unchanged.
pub fn projectivize(gold: &RawTree) -> Result<ProjectiveTree, TreeError> {
    validate_tree(gold.heads())?;
    if is_projective(gold.heads())? {
        return ProjectiveTree::new(gold.0.clone());
    }
    let heads = gold.heads();
    let table = PartScoreTable::from_fn(heads.len(), Factorization::Dep1, |p| match *p {
        Part::Dep { head, modifier } if heads[modifier - 1] == head => 1.0,
        _ => -1.0,
    });
    Ok(decode_dep1(&table))
}
