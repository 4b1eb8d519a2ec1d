//! The feature index: `(template, key) -> j`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::extract::for_each_feature;
use super::scoring::components;
use super::templates::{catalog, FeatureTemplateId, TEMPLATE_CATALOG_VERSION};
use crate::error::{Error, ModelFileError, Result};
use crate::model::{Factorization, PartSpace, ProjectiveTree, Sentence};

const HEADER: &str = "hodep-features";

/// Injective map from instantiated features to dense indices, assigned in
/// first-occurrence order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureDictionary {
    by_template: Vec<HashMap<String, u32>>,
    entries: Vec<(FeatureTemplateId, String)>,
}

impl FeatureDictionary {
    pub fn new() -> Self {
        FeatureDictionary {
            by_template: vec![HashMap::new(); catalog().len()],
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Index of a feature; `None` for features never seen in training.
    pub fn get(&self, template: FeatureTemplateId, key: &str) -> Option<u32> {
        self.by_template.get(template.0 as usize)?.get(key).copied()
    }

    /// Index of a feature, adding it if new.
    pub fn insert(&mut self, template: FeatureTemplateId, key: &str) -> u32 {
        let map = &mut self.by_template[template.0 as usize];
        if let Some(&j) = map.get(key) {
            return j;
        }
        let j = self.entries.len() as u32;
        map.insert(key.to_string(), j);
        self.entries.push((template, key.to_string()));
        j
    }

    /// `(template, key)` of feature `j`.
    pub fn entry(&self, j: usize) -> (FeatureTemplateId, &str) {
        let (t, k) = &self.entries[j];
        (*t, k)
    }

    /// Adds every feature fired by any candidate part of `sentence` under
    /// the factorization, including enclosed lower-order parts.
    pub fn add_sentence(&mut self, sentence: &Sentence, factorization: Factorization) {
        let mut buf = String::new();
        for &component in components(factorization) {
            PartSpace::new(sentence.len(), component).for_each_part(|_, part| {
                for_each_feature(sentence, &part, &mut buf, |id, key| {
                    self.insert(id, key);
                });
            });
        }
    }

    /// Versioned text form: a header, then `template<TAB>key<TAB>index`
    /// lines.
    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{HEADER} {TEMPLATE_CATALOG_VERSION} {}", self.len())?;
        for (j, (t, k)) in self.entries.iter().enumerate() {
            writeln!(w, "{t}\t{k}\t{j}")?;
        }
        Ok(())
    }

    /// Reads the form produced by [`FeatureDictionary::write_to`].
    pub fn read_from<R: BufRead>(lines: &mut LineReader<R>) -> Result<Self, ModelFileError> {
        let header = lines.expect_line()?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 3 || fields[0] != HEADER {
            return Err(lines.error("expected feature dictionary header"));
        }
        if fields[1] != TEMPLATE_CATALOG_VERSION.to_string() {
            return Err(ModelFileError::Version(format!(
                "feature catalog {}, expected {TEMPLATE_CATALOG_VERSION}",
                fields[1]
            )));
        }
        let count: usize = fields[2].parse().map_err(|_| lines.error("bad feature count"))?;
        let mut dict = FeatureDictionary::new();
        for j in 0..count {
            let line = lines.expect_line()?;
            let mut parts = line.split('\t');
            let (Some(t), Some(k), Some(i), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(lines.error("expected template<TAB>key<TAB>index"));
            };
            let t: u16 = t.parse().map_err(|_| lines.error("bad template id"))?;
            if t as usize >= catalog().len() {
                return Err(lines.error("unknown template id"));
            }
            if i.parse::<usize>().ok() != Some(j) {
                return Err(lines.error("feature indices must be consecutive"));
            }
            if dict.insert(FeatureTemplateId(t), k) as usize != j {
                return Err(lines.error("duplicate feature"));
            }
        }
        Ok(dict)
    }
}

/// Scans the candidate parts of every training sentence.
pub fn build_dictionary(corpus: &[(Sentence, ProjectiveTree)], factorization: Factorization) -> Result<FeatureDictionary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut dict = FeatureDictionary::new();
    for (sentence, _) in corpus {
        dict.add_sentence(sentence, factorization);
    }
    Ok(dict)
}

/// Line-numbered reader for the text formats.
pub struct LineReader<R> {
    inner: R,
    line: usize,
}

impl<R: BufRead> LineReader<R> {
    pub fn new(inner: R) -> Self {
        LineReader { inner, line: 0 }
    }

    /// 1-based number of the last line returned.
    pub fn line(&self) -> usize {
        self.line
    }

    pub fn next_line(&mut self) -> Result<Option<String>, ModelFileError> {
        let mut s = String::new();
        if self.inner.read_line(&mut s)? == 0 {
            return Ok(None);
        }
        self.line += 1;
        if s.ends_with('\n') {
            s.pop();
            if s.ends_with('\r') {
                s.pop();
            }
        }
        Ok(Some(s))
    }

    pub fn expect_line(&mut self) -> Result<String, ModelFileError> {
        match self.next_line()? {
            Some(s) => Ok(s),
            None => Err(ModelFileError::Format {
                line: self.line + 1,
                message: "unexpected end of file".into(),
            }),
        }
    }

    pub fn error(&self, message: &str) -> ModelFileError {
        ModelFileError::Format {
            line: self.line,
            message: message.into(),
        }
    }
}
