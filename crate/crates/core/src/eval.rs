//! Unlabeled attachment score, root accuracy, and complete match.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Built-in sets of gold POS tags excluded from scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PunctProfile {
    English,
    Chinese,
    None,
}

impl PunctProfile {
    pub fn tags(self) -> BTreeSet<String> {
        let tags: &[&str] = match self {
            PunctProfile::English => &["''", "``", ":", ",", "."],
            PunctProfile::Chinese => &["PU"],
            PunctProfile::None => &[],
        };
        tags.iter().map(|t| t.to_string()).collect()
    }
}

impl FromStr for PunctProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "english" => Ok(PunctProfile::English),
            "chinese" => Ok(PunctProfile::Chinese),
            "none" => Ok(PunctProfile::None),
            _ => Err(format!("unknown punctuation profile {s:?} (expected english, chinese or none)")),
        }
    }
}

/// Gold and predicted heads of one sentence.
#[derive(Debug, Clone, Copy)]
pub struct SentencePair<'a> {
    pub gold: &'a [usize],
    pub predicted: &'a [usize],
    pub gold_pos: &'a [String],
}

/// Raw counts; the rates are derived.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Metrics {
    pub scoring_tokens: usize,
    pub correct_heads: usize,
    pub gold_roots: usize,
    pub correct_roots: usize,
    pub sentences: usize,
    pub complete_matches: usize,
}

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

impl Metrics {
    /// Percentage of scoring tokens with the correct head.
    pub fn uas(&self) -> f64 {
        percent(self.correct_heads, self.scoring_tokens)
    }

    /// Percentage of scoring gold root tokens also predicted as roots.
    pub fn ra(&self) -> f64 {
        percent(self.correct_roots, self.gold_roots)
    }

    /// Percentage of sentences whose scoring tokens are all correct.
    pub fn cm(&self) -> f64 {
        percent(self.complete_matches, self.sentences)
    }

    /// Machine-readable `key=value` lines.
    pub fn key_values(&self) -> String {
        format!(
            "uas={:.4}\nra={:.4}\ncm={:.4}\ntokens={}\nsentences={}\n",
            self.uas(),
            self.ra(),
            self.cm(),
            self.scoring_tokens,
            self.sentences
        )
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "metric  value    count")?;
        writeln!(f, "UAS     {:>6.2}%  {}/{}", self.uas(), self.correct_heads, self.scoring_tokens)?;
        writeln!(f, "RA      {:>6.2}%  {}/{}", self.ra(), self.correct_roots, self.gold_roots)?;
        write!(f, "CM      {:>6.2}%  {}/{}", self.cm(), self.complete_matches, self.sentences)
    }
}

/// Scores predictions. Tokens whose gold POS is in `punct_tags` are skipped
/// for UAS and CM; root accuracy counts every gold root token.
pub fn evaluate<'a>(pairs: impl IntoIterator<Item = SentencePair<'a>>, punct_tags: &BTreeSet<String>) -> Result<Metrics> {
    let mut m = Metrics::default();
    for (index, p) in pairs.into_iter().enumerate() {
        if p.gold.len() != p.predicted.len() || p.gold.len() != p.gold_pos.len() {
            return Err(Error::LengthMismatch {
                index,
                gold: p.gold.len(),
                predicted: p.predicted.len(),
            });
        }
        let mut complete = true;
        for ((&g, &h), pos) in p.gold.iter().zip(p.predicted).zip(p.gold_pos) {
            if g == 0 {
                m.gold_roots += 1;
                if h == 0 {
                    m.correct_roots += 1;
                }
            }
            if punct_tags.contains(pos) {
                continue;
            }
            m.scoring_tokens += 1;
            if g == h {
                m.correct_heads += 1;
            } else {
                complete = false;
            }
        }
        m.sentences += 1;
        if complete {
            m.complete_matches += 1;
        }
    }
    Ok(m)
}
