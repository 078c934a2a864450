//! Test support: a naive rescanning reference scorer and random instances.
#![allow(dead_code)]

use std::path::PathBuf;

use lid_core::{
    load_lexicon, LanguageId, LanguageLexicon, LexiconSet, Preset, ScoringConfig, TfMode,
    WeightMode,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn id(s: &str) -> LanguageId {
    LanguageId::new(s).unwrap()
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn demo_lexicon() -> LexiconSet {
    load_lexicon(&data_dir().join("lexicon")).unwrap().lexicon
}

/// Plain-data copy of one language's dictionaries.
#[derive(Debug, Clone)]
pub struct RefLanguage {
    pub id: String,
    pub stopwords: Vec<String>,
    pub diacritics: Vec<char>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub languages: Vec<RefLanguage>,
    pub tokens: Vec<String>,
    pub text: String,
    pub cfg: ScoringConfig,
}

impl Instance {
    pub fn lexicon(&self) -> LexiconSet {
        to_lexicon(&self.languages)
    }
}

pub fn to_lexicon(langs: &[RefLanguage]) -> LexiconSet {
    LexiconSet::new(langs.iter().map(|l| {
        (
            id(&l.id),
            LanguageLexicon::new(l.stopwords.iter().cloned(), l.diacritics.iter().copied()),
        )
    }))
    .unwrap()
}

/// Score every language by looping over (language, term) pairs and
/// recounting each term with a fresh scan of the token list.
pub fn oracle_scores(
    langs: &[RefLanguage],
    tokens: &[String],
    p: f64,
    tf_log: bool,
    weight: WeightMode,
    fallback: bool,
) -> Vec<f64> {
    let n_langs = langs.len() as f64;
    let any_diacritic = tokens.iter().any(|t| {
        t.chars()
            .any(|c| langs.iter().any(|l| l.diacritics.contains(&c)))
    });
    let p = if fallback && !any_diacritic { 1.0 } else { p };
    let tf = |count: usize| {
        if tf_log {
            (1.0 + count as f64).ln()
        } else {
            count as f64
        }
    };
    let w = |n: usize| match weight {
        WeightMode::Unit => 1.0,
        WeightMode::Ratio => n_langs / n as f64,
        WeightMode::LogRatio => (1.0 + n_langs / n as f64).ln(),
    };
    langs
        .iter()
        .map(|lang| {
            let mut stop = 0.0;
            for word in &lang.stopwords {
                let count = tokens.iter().filter(|t| *t == word).count();
                let n = langs.iter().filter(|l| l.stopwords.contains(word)).count();
                stop += tf(count) * w(n);
            }
            let mut dia = 0.0;
            for &d in &lang.diacritics {
                let count = tokens
                    .iter()
                    .map(|t| t.chars().filter(|&c| c == d).count())
                    .sum();
                let n = langs.iter().filter(|l| l.diacritics.contains(&d)).count();
                dia += tf(count) * w(n);
            }
            p * stop + (1.0 - p) * dia
        })
        .collect()
}

pub fn oracle_for(inst: &Instance) -> Vec<f64> {
    oracle_scores(
        &inst.languages,
        &inst.tokens,
        inst.cfg.p(),
        inst.cfg.tf_mode() == TfMode::Log,
        inst.cfg.weight_mode(),
        inst.cfg.stopword_fallback(),
    )
}

/// `Some(index)` of the unique positive maximum, `None` otherwise.
pub fn oracle_winner(scores: &[f64]) -> Option<usize> {
    let top = scores.iter().copied().fold(0.0, f64::max);
    if top <= 0.0 {
        return None;
    }
    let leaders: Vec<usize> = (0..scores.len())
        .filter(|&i| (top - scores[i]).abs() <= 1e-12 * top)
        .collect();
    (leaders.len() == 1).then(|| leaders[0])
}

const SYLLABLES: &[&str] = &[
    "la", "le", "de", "ci", "mo", "ra", "su", "ne", "to", "pi", "ga", "vo",
];
const MARKED: &[char] = &[
    'à', 'â', 'á', 'ă', 'ã', 'ç', 'è', 'é', 'ê', 'ë', 'î', 'ï', 'ì', 'í', 'ô', 'ò', 'ó', 'õ', 'ù',
    'û', 'ü', 'ú', 'ñ', 'ș', 'ş', 'ț', 'ţ', 'œ', 'æ',
];

fn random_word<R: Rng>(rng: &mut R) -> String {
    let mut w = String::new();
    for _ in 0..rng.gen_range(1..=2) {
        w.push_str(SYLLABLES.choose(rng).unwrap());
    }
    if rng.gen_bool(0.3) {
        let pos = rng.gen_range(0..w.chars().count());
        let mut chars: Vec<char> = w.chars().collect();
        chars[pos] = *MARKED.choose(rng).unwrap();
        w = chars.into_iter().collect();
    }
    w
}

/// Random lexicon (2..=max_langs languages, at most `max_terms` dictionary
/// entries in total) and a text of at most `max_tokens` tokens drawn mostly
/// from the dictionaries.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_langs: usize,
    max_terms: usize,
    max_tokens: usize,
) -> Instance {
    let n_langs = rng.gen_range(2..=max_langs);
    let word_pool: Vec<String> = (0..12).map(|_| random_word(rng)).collect();
    let dia_pool: Vec<char> = MARKED.choose_multiple(rng, 8).copied().collect();
    let mut budget = rng.gen_range(n_langs..=max_terms);
    let mut languages: Vec<RefLanguage> = (0..n_langs)
        .map(|i| RefLanguage {
            id: format!("l{i}"),
            stopwords: Vec::new(),
            diacritics: Vec::new(),
        })
        .collect();
    while budget > 0 {
        let lang = &mut languages[rng.gen_range(0..n_langs)];
        if rng.gen_bool(0.6) {
            let w = word_pool.choose(rng).unwrap();
            if !lang.stopwords.contains(w) {
                lang.stopwords.push(w.clone());
            }
        } else {
            let d = *dia_pool.choose(rng).unwrap();
            if !lang.diacritics.contains(&d) {
                lang.diacritics.push(d);
            }
        }
        budget -= 1;
    }
    let n_tokens = rng.gen_range(0..=max_tokens);
    let tokens: Vec<String> = (0..n_tokens)
        .map(|_| {
            if rng.gen_bool(0.7) {
                word_pool.choose(rng).unwrap().clone()
            } else {
                random_word(rng)
            }
        })
        .collect();
    let separators = [" ", ", ", "! ", " 42 ", " - ", "\t"];
    let mut text = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            text.push_str(separators.choose(rng).unwrap());
        }
        if rng.gen_bool(0.2) {
            text.push_str(&t.to_uppercase());
        } else {
            text.push_str(t);
        }
    }
    let cfg = random_config(rng);
    Instance {
        languages,
        tokens,
        text,
        cfg,
    }
}

/// A preset most of the time, otherwise arbitrary parameters.
pub fn random_config<R: Rng>(rng: &mut R) -> ScoringConfig {
    if rng.gen_bool(0.8) {
        return Preset::ALL.choose(rng).unwrap().config();
    }
    let tf = if rng.gen_bool(0.5) {
        TfMode::Raw
    } else {
        TfMode::Log
    };
    let weight = *[WeightMode::Unit, WeightMode::Ratio, WeightMode::LogRatio]
        .choose(rng)
        .unwrap();
    ScoringConfig::new(rng.gen_range(0.0..=1.0), tf, weight, rng.gen_bool(0.5)).unwrap()
}

/// Per-gold-column sums (in percent) of the confusion grid of a table report.
pub fn table_column_sums(table: &str) -> Vec<f64> {
    let mut lines = table
        .lines()
        .skip_while(|l| !l.starts_with("Confusion"))
        .skip(1);
    let header = lines.next().expect("confusion header");
    let k = header.split_whitespace().count() - 1;
    let mut sums = vec![0.0; k];
    for line in lines.take_while(|l| !l.trim().is_empty()) {
        let cells: Vec<&str> = line.split_whitespace().collect();
        for (j, cell) in cells[cells.len() - k..].iter().enumerate() {
            sums[j] += cell
                .trim_end_matches('%')
                .parse::<f64>()
                .expect("percent cell");
        }
    }
    sums
}
