//! Composed part scores: a part's log-weight is the dot product of the
//! weights with its own features plus those of the lower-order parts it
//! encloses.

use super::dictionary::FeatureDictionary;
use super::extract::{for_each_feature, part_type};
use super::weights::WeightVector;
use crate::error::{Error, Result};
use crate::model::{Factorization, Part, PartScoreTable, PartSpace, Sentence};

const ABSENT: u32 = u32::MAX;

/// Part types whose features enter a factorization's scores; the first is
/// the factorization's own part type.
pub fn components(factorization: Factorization) -> &'static [Factorization] {
    use Factorization::*;
    match factorization {
        Dep1 => &[Dep1],
        Sib2 => &[Sib2, Dep1],
        Gch2 => &[Gch2, Dep1],
        GSib3 => &[GSib3, Sib2, Gch2, Dep1],
    }
}

/// The part itself followed by the lower-order parts it encloses.
pub fn enclosed_parts(part: &Part) -> Vec<Part> {
    match *part {
        Part::Dep { .. } => vec![*part],
        Part::Sib { head, modifier, .. } | Part::Gch { head, modifier, .. } => {
            vec![*part, Part::dep(head, modifier)]
        }
        Part::GSib {
            grandparent,
            head,
            inner,
            modifier,
        } => {
            let mut v = vec![*part, Part::sib(head, inner, modifier)];
            if head >= 1 {
                v.push(Part::gch(grandparent, head, modifier));
            }
            v.push(Part::dep(head, modifier));
            v
        }
    }
}

/// Compressed feature lists of one part type's candidate parts.
#[derive(Debug, Clone)]
struct ComponentFeatures {
    space: PartSpace,
    offsets: Vec<u32>,
    features: Vec<u32>,
}

impl ComponentFeatures {
    fn new(sentence: &Sentence, part_type: Factorization, dictionary: &FeatureDictionary) -> Self {
        let space = PartSpace::new(sentence.len(), part_type);
        let mut per_part: Vec<Vec<u32>> = vec![Vec::new(); space.len()];
        let mut buf = String::new();
        space.for_each_part(|i, part| {
            for_each_feature(sentence, &part, &mut buf, |id, key| {
                if let Some(j) = dictionary.get(id, key) {
                    per_part[i].push(j);
                }
            });
        });
        let mut offsets = Vec::with_capacity(space.len() + 1);
        let mut features = Vec::new();
        offsets.push(0);
        for fs in per_part {
            features.extend(fs);
            offsets.push(features.len() as u32);
        }
        ComponentFeatures { space, offsets, features }
    }

    #[inline]
    fn of(&self, i: usize) -> &[u32] {
        &self.features[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }
}

/// Dictionary-resolved features of every candidate part of one sentence
/// under one factorization, precomputed for repeated scoring.
#[derive(Debug, Clone)]
pub struct SentenceFeatures {
    space: PartSpace,
    components: Vec<ComponentFeatures>,
    /// For each index of `space`, the component index of every enclosed
    /// part (`ABSENT` where a component does not apply).
    composition: Vec<u32>,
}

impl SentenceFeatures {
    pub fn new(sentence: &Sentence, factorization: Factorization, dictionary: &FeatureDictionary) -> Self {
        let kinds = components(factorization);
        let comps: Vec<ComponentFeatures> = kinds
            .iter()
            .map(|&k| ComponentFeatures::new(sentence, k, dictionary))
            .collect();
        let space = PartSpace::new(sentence.len(), factorization);
        let mut composition = vec![ABSENT; space.len() * kinds.len()];
        space.for_each_part(|i, part| {
            for p in enclosed_parts(&part) {
                let c = kinds.iter().position(|&k| k == part_type(&p)).expect("enclosed type is a component");
                let ci = comps[c].space.index(&p).expect("enclosed part is valid");
                composition[i * kinds.len() + c] = ci as u32;
            }
        });
        SentenceFeatures {
            space,
            components: comps,
            composition,
        }
    }

    pub fn space(&self) -> &PartSpace {
        &self.space
    }

    /// Number of stored feature occurrences.
    pub fn feature_occurrences(&self) -> usize {
        self.components.iter().map(|c| c.features.len()).sum()
    }

    /// `log w(p, x)` for every candidate part.
    pub fn score(&self, weights: &[f64]) -> PartScoreTable {
        let comp_scores: Vec<Vec<f64>> = self
            .components
            .iter()
            .map(|c| {
                (0..c.space.len())
                    .map(|i| c.of(i).iter().map(|&j| weights[j as usize]).sum())
                    .collect()
            })
            .collect();
        let k = self.components.len();
        let scores = (0..self.space.len())
            .map(|i| {
                self.composition[i * k..(i + 1) * k]
                    .iter()
                    .zip(&comp_scores)
                    .filter(|(&ci, _)| ci != ABSENT)
                    .map(|(&ci, s)| s[ci as usize])
                    .sum()
            })
            .collect();
        PartScoreTable::from_scores(self.space.clone(), scores).expect("scores match the space")
    }

    /// `out_j += scale * sum_p mass(p) f_j(p)`, with `mass` indexed like the
    /// part space (marginals for expectations).
    pub fn accumulate(&self, mass: &[f64], scale: f64, out: &mut [f64]) {
        let k = self.components.len();
        for (c, comp) in self.components.iter().enumerate() {
            let mut m = vec![0.0; comp.space.len()];
            for (i, &mi) in mass.iter().enumerate() {
                let ci = self.composition[i * k + c];
                if ci != ABSENT && mi != 0.0 {
                    m[ci as usize] += mi;
                }
            }
            for (ci, &mc) in m.iter().enumerate() {
                if mc != 0.0 {
                    for &j in comp.of(ci) {
                        out[j as usize] += scale * mc;
                    }
                }
            }
        }
    }

    /// `out_j += scale * F_j(parts)` for a list of parts of this
    /// factorization (the decomposition of a tree).
    pub fn accumulate_parts(&self, parts: &[Part], scale: f64, out: &mut [f64]) {
        let mut mass = vec![0.0; self.space.len()];
        for p in parts {
            mass[self.space.index(p).expect("part of this factorization")] += 1.0;
        }
        self.accumulate(&mass, scale, out);
    }
}

/// Scores every candidate part of `sentence`.
pub fn score_parts(
    sentence: &Sentence,
    factorization: Factorization,
    dictionary: &FeatureDictionary,
    weights: &WeightVector,
) -> Result<PartScoreTable> {
    if weights.len() != dictionary.len() {
        return Err(Error::DimensionMismatch {
            expected: dictionary.len(),
            found: weights.len(),
        });
    }
    Ok(SentenceFeatures::new(sentence, factorization, dictionary).score(weights.as_slice()))
}
