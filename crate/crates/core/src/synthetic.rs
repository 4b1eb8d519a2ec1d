//! A small generated treebank for sanity experiments and tests.
//!
//! Sentences follow a toy phrase grammar `S -> NP V NP (PP) .` with noun
//! phrases `(DT) (JJ) NN (of NP)`. Heads follow the usual conventions: the
//! verb is the only root child and "with" phrases attach to the verb while
//! "of" phrases attach to the preceding noun.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::features::LanguageProfile;
use crate::model::{ProjectiveTree, Sentence};

const DETERMINERS: &[&str] = &["the", "a"];
const ADJECTIVES: &[&str] = &["big", "red", "old"];
const NOUNS: &[&str] = &["dog", "cat", "park", "man", "ball", "telescope"];
const VERBS: &[&str] = &["sees", "likes", "chased"];

#[derive(Default)]
struct Builder {
    words: Vec<(&'static str, &'static str)>,
    heads: Vec<usize>,
}

impl Builder {
    /// Appends a word and returns its 1-based index.
    fn push(&mut self, form: &'static str, pos: &'static str) -> usize {
        self.words.push((form, pos));
        self.heads.push(0);
        self.words.len()
    }

    fn attach(&mut self, dependent: usize, head: usize) {
        self.heads[dependent - 1] = head;
    }

    fn noun_phrase(&mut self, rng: &mut impl Rng, depth: usize) -> usize {
        let mut pre = Vec::new();
        if rng.gen_bool(0.7) {
            pre.push(self.push(DETERMINERS.choose(rng).unwrap(), "DT"));
        }
        if rng.gen_bool(0.4) {
            pre.push(self.push(ADJECTIVES.choose(rng).unwrap(), "JJ"));
        }
        let noun = self.push(NOUNS.choose(rng).unwrap(), "NN");
        for d in pre {
            self.attach(d, noun);
        }
        if depth == 0 && rng.gen_bool(0.3) {
            let prep = self.push("of", "IN");
            self.attach(prep, noun);
            let object = self.noun_phrase(rng, depth + 1);
            self.attach(object, prep);
        }
        noun
    }

    fn sentence(&mut self, rng: &mut impl Rng) {
        let subject = self.noun_phrase(rng, 0);
        let verb = self.push(VERBS.choose(rng).unwrap(), "VBZ");
        self.attach(subject, verb);
        let object = self.noun_phrase(rng, 0);
        self.attach(object, verb);
        if rng.gen_bool(0.4) {
            let prep = self.push("with", "IN");
            self.attach(prep, verb);
            let pobj = self.noun_phrase(rng, 1);
            self.attach(pobj, prep);
        }
        let stop = self.push(".", ".");
        self.attach(stop, verb);
    }
}

/// `count` sentences drawn deterministically from `seed`.
pub fn toy_corpus(count: usize, seed: u64) -> Vec<(Sentence, ProjectiveTree)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut b = Builder::default();
            b.sentence(&mut rng);
            let sentence = Sentence::new(b.words, LanguageProfile::English).expect("non-empty sentence");
            let tree = ProjectiveTree::new(b.heads).expect("grammar yields projective trees");
            (sentence, tree)
        })
        .collect()
}
