//! Trained model: factorization, POS profile, C, dictionary, and weights,
//! with a versioned text serialization.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, ModelFileError, Result};
use crate::features::{score_parts, FeatureDictionary, LanguageProfile, LineReader, WeightVector};
use crate::inference::decode;
use crate::model::{Factorization, ProjectiveTree, Sentence};

pub const MODEL_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "hodep-model";

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub factorization: Factorization,
    pub profile: LanguageProfile,
    pub regularizer_c: f64,
    pub dictionary: FeatureDictionary,
    pub weights: WeightVector,
}

impl Model {
    pub fn new(
        factorization: Factorization,
        profile: LanguageProfile,
        regularizer_c: f64,
        dictionary: FeatureDictionary,
        weights: WeightVector,
    ) -> Result<Self> {
        if dictionary.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: dictionary.len(),
                found: weights.len(),
            });
        }
        Ok(Model {
            factorization,
            profile,
            regularizer_c,
            dictionary,
            weights,
        })
    }

    /// Highest-scoring projective tree for `sentence`.
    pub fn parse(&self, sentence: &Sentence) -> ProjectiveTree {
        let table = score_parts(sentence, self.factorization, &self.dictionary, &self.weights)
            .expect("model dimensions are checked on construction");
        decode(&table)
    }

    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            w,
            "{MAGIC} {MODEL_FORMAT_VERSION} factorization={} profile={} c={}",
            self.factorization, self.profile, self.regularizer_c
        )?;
        self.dictionary.write_to(w)?;
        writeln!(w, "weights {}", self.weights.len())?;
        for v in self.weights.as_slice() {
            writeln!(w, "{v:.16e}")?;
        }
        Ok(())
    }

    pub fn read_from(r: impl BufRead) -> Result<Self, ModelFileError> {
        let mut lines = LineReader::new(r);
        let header = lines.expect_line()?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.first() != Some(&MAGIC) {
            return Err(lines.error("not a model file"));
        }
        if fields.get(1) != Some(&MODEL_FORMAT_VERSION.to_string().as_str()) {
            return Err(ModelFileError::Version(format!(
                "model format {}, expected {MODEL_FORMAT_VERSION}",
                fields.get(1).unwrap_or(&"?")
            )));
        }
        let (mut factorization, mut profile, mut c) = (None, None, None);
        for field in &fields[2..] {
            let Some((k, v)) = field.split_once('=') else {
                return Err(lines.error("expected key=value in header"));
            };
            match k {
                "factorization" => factorization = v.parse::<Factorization>().ok(),
                "profile" => profile = v.parse::<LanguageProfile>().ok(),
                "c" => c = v.parse::<f64>().ok(),
                _ => return Err(lines.error(&format!("unknown header field {k}"))),
            }
        }
        let (Some(factorization), Some(profile), Some(regularizer_c)) = (factorization, profile, c) else {
            return Err(lines.error("header needs valid factorization, profile and c"));
        };
        let dictionary = FeatureDictionary::read_from(&mut lines)?;
        let count_line = lines.expect_line()?;
        let count: usize = count_line
            .strip_prefix("weights ")
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| lines.error("expected `weights <count>`"))?;
        if count != dictionary.len() {
            return Err(lines.error("weight count differs from dictionary size"));
        }
        let mut weights = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.expect_line()?;
            match line.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => weights.push(v),
                _ => return Err(lines.error("expected a finite weight")),
            }
        }
        if let Some(extra) = lines.next_line()? {
            if !extra.trim().is_empty() {
                return Err(lines.error("trailing content"));
            }
        }
        Ok(Model {
            factorization,
            profile,
            regularizer_c,
            dictionary,
            weights: WeightVector::from_vec(weights).expect("checked finite"),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path).map_err(ModelFileError::from)?);
        self.write_to(&mut w).map_err(ModelFileError::from)?;
        w.flush().map_err(ModelFileError::from)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(ModelFileError::from)?;
        Ok(Model::read_from(BufReader::new(f))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::build_dictionary;

    fn model() -> Model {
        let s = Sentence::new([("x", "A"), ("y", "B")], LanguageProfile::Czech).unwrap();
        let corpus = vec![(s, ProjectiveTree::new(vec![0, 1]).unwrap())];
        let d = build_dictionary(&corpus, Factorization::Gch2).unwrap();
        let w = (0..d.len()).map(|i| (i as f64 + 0.1).sqrt() * 1e-3 - 0.01).collect();
        Model::new(Factorization::Gch2, LanguageProfile::Czech, 0.25, d, WeightVector::from_vec(w).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let m = model();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        assert!(buf.starts_with(b"hodep-model 1 factorization=gch2 profile=czech c=0.25\n"));
        assert_eq!(Model::read_from(&buf[..]).unwrap(), m);
    }

    #[test]
    fn rejects_other_versions_and_garbage() {
        assert!(matches!(
            Model::read_from(&b"hodep-model 7 factorization=dep1 profile=generic c=1\n"[..]),
            Err(ModelFileError::Version(_))
        ));
        assert!(matches!(Model::read_from(&b"hello\n"[..]), Err(ModelFileError::Format { line: 1, .. })));
        let mut buf = Vec::new();
        model().write_to(&mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        buf.extend_from_slice(b"zz\n");
        assert!(Model::read_from(&buf[..]).is_err());
    }

    #[test]
    fn parse_single_word() {
        let s = Sentence::new([("x", "A")], LanguageProfile::Czech).unwrap();
        assert_eq!(model().parse(&s).heads(), &[0]);
    }
}
