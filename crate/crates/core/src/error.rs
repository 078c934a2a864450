use std::path::PathBuf;

use thiserror::Error;

use crate::lexicon::LanguageId;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing lexicon file {0}")]
    MissingFile(PathBuf),
    #[error("{path}: multi-token stop word at line {line}: {entry:?}")]
    MultiTokenStopword {
        path: PathBuf,
        line: usize,
        entry: String,
    },
    #[error("{path}: multi-character diacritic at line {line}: {entry:?}")]
    MultiCharDiacritic {
        path: PathBuf,
        line: usize,
        entry: String,
    },
    #[error("{path}: non-alphabetic diacritic at line {line}: {entry:?}")]
    NonAlphabeticDiacriticLine {
        path: PathBuf,
        line: usize,
        entry: String,
    },
    #[error("language {language}: non-alphabetic diacritic {entry:?}")]
    NonAlphabeticDiacritic { language: LanguageId, entry: char },
    #[error("language {0}: empty stop word")]
    EmptyStopword(LanguageId),
    #[error("invalid language code {0:?}")]
    InvalidLanguageCode(String),
    #[error("duplicate language code {0}")]
    DuplicateLanguage(LanguageId),
    #[error("lexicon contains no languages")]
    NoLanguages,
}

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("classification needs at least 2 languages, lexicon has {0}")]
    TooFewLanguages(usize),
    #[error("unknown language {0}")]
    UnknownLanguage(LanguageId),
    #[error("term {term:?} is not in the {language} dictionary")]
    TermNotInLanguage { term: String, language: LanguageId },
    #[error("p must lie in [0, 1], got {0}")]
    InvalidP(f64),
    #[error("unknown preset {0:?} (expected test1..test9)")]
    UnknownPreset(String),
    #[error("unknown {kind} mode {value:?}")]
    UnknownMode { kind: &'static str, value: String },
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {malformed} of {total} lines malformed (limit 10%); first at line {first_line}: {reason}")]
    TooManyMalformed {
        path: PathBuf,
        malformed: usize,
        total: usize,
        first_line: usize,
        reason: String,
    },
    #[error("unknown corpus format {0:?} (expected tsv or jsonl)")]
    UnknownFormat(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("document {id}: gold label {label} is not a lexicon language")]
    UnknownGold { id: usize, label: LanguageId },
    #[error("parallelism must be at least 1")]
    ZeroParallelism,
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
