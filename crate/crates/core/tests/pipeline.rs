use std::io::Cursor;

use hodep::conll::{projectivize, read_conll, write_conll, ConllSentence};
use hodep::eval::{evaluate, PunctProfile, SentencePair};
use hodep::inference::{decode, log_partition, marginals};
use hodep::oracle::brute_force;
use hodep::synthetic::toy_corpus;
use hodep::train::{train, Model, TrainConfig};
use hodep::{decompose, tree_score, Factorization, LanguageProfile, PartScoreTable};

const ALL: [Factorization; 4] = [
    Factorization::Dep1,
    Factorization::Sib2,
    Factorization::Gch2,
    Factorization::GSib3,
];

#[test]
fn public_inference_agrees_with_enumeration() {
    for f in ALL {
        let table = PartScoreTable::from_fn(4, f, |p| ((format!("{p:?}").len() * 7919) % 13) as f64 / 5.0 - 1.0);
        let truth = brute_force(&table).unwrap();
        assert!((log_partition(&table) - truth.log_partition).abs() < 1e-9);
        let best = decode(&table);
        assert_eq!(tree_score(&best, &table), truth.best_score);
        let mu = marginals(&table);
        for (part, p) in &truth.marginals {
            assert!((mu.get(part) - p).abs() < 1e-9, "{f} {part:?}");
        }
        for part in decompose(&best, f) {
            assert!(table.get(&part).is_some());
        }
    }
}

#[test]
fn train_save_load_parse_evaluate() {
    let corpus = toy_corpus(12, 3);
    let config = TrainConfig {
        max_iterations: 60,
        ..TrainConfig::default()
    };
    let (weights, dictionary, report) = train(&corpus, Factorization::Gch2, &config).unwrap();
    assert!(report.regularized_objective.is_finite());
    let model = Model::new(Factorization::Gch2, LanguageProfile::English, config.regularizer_c, dictionary, weights).unwrap();

    let mut bytes = Vec::new();
    model.write_to(&mut bytes).unwrap();
    let loaded = Model::read_from(Cursor::new(&bytes)).unwrap();
    let mut again = Vec::new();
    loaded.write_to(&mut again).unwrap();
    assert_eq!(bytes, again);

    let gold: Vec<ConllSentence> = corpus
        .iter()
        .map(|(s, t)| ConllSentence::from_sentence(s.clone(), t.heads().to_vec()))
        .collect();
    let predicted: Vec<Vec<usize>> = gold.iter().map(|c| loaded.parse(&c.sentence).heads().to_vec()).collect();

    let mut text = Vec::new();
    write_conll(&mut text, gold.iter().zip(&predicted).map(|(c, h)| (c, h.as_slice()))).unwrap();
    let reread = read_conll(Cursor::new(&text), LanguageProfile::English).unwrap();
    assert_eq!(reread.len(), gold.len());

    let pos: Vec<Vec<String>> = gold.iter().map(|c| c.gold_pos()).collect();
    let metrics = evaluate(
        gold.iter().zip(&reread).zip(&pos).map(|((g, p), pos)| SentencePair {
            gold: g.tree.heads(),
            predicted: p.tree.heads(),
            gold_pos: pos,
        }),
        &PunctProfile::English.tags(),
    )
    .unwrap();
    assert_eq!(metrics.sentences, 12);
    assert!(metrics.uas() >= 99.0, "{metrics}");
}

#[test]
fn projectivized_trees_are_accepted_by_decoders() {
    let raw = hodep::conll::RawTree(vec![3, 4, 0, 3]);
    let tree = projectivize(&raw).unwrap();
    assert!(!raw.is_projective().unwrap());
    assert!(hodep::is_projective(tree.heads()).unwrap());
    assert_eq!(tree.heads()[2], 0);
}
