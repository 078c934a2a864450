//! Dictionary-based language identification for closely related languages.
//!
//! Texts are scored per language from two dictionaries: stop words and
//! diacritic letters. Each matched term contributes its (optionally
//! log-dampened) frequency times a weight that favours terms few languages
//! share. The best-scoring language wins; texts with no evidence, or with a
//! tie at the top, stay unclassified.
//!
//! ```
//! use lid_core::{classify, normalize_text, LexiconSet, Preset, Verdict};
//!
//! let lex = LexiconSet::builtin_diacritics_only();
//! let text = normalize_text("Ţara noastră");
//! let (verdict, _scores) = classify(&text, &lex, &Preset::Test9.config()).unwrap();
//! assert_eq!(verdict.code(), "ro");
//! ```

pub mod error;
pub mod evaluation;
pub mod fold;
pub mod lexicon;
pub mod normalize;
pub mod scorer;

pub use error::{CorpusError, EvalError, LexiconError, ScoreError};
pub use evaluation::{
    emit_report, evaluate, load_corpus, ConfusionMatrix, Corpus, CorpusFormat, EvaluationReport,
    LabeledDocument, ReportFormat,
};
pub use fold::strip_diacritics;
pub use lexicon::{
    augment_with_stripped_variants, builtin_diacritics, load_lexicon, save_lexicon,
    validate_lexicon, Finding, FindingKind, LanguageId, LanguageLexicon, LexiconSet, LoadedLexicon,
    Severity, Term, TermKind,
};
pub use normalize::{normalize_text, NormalizedText};
pub use scorer::{
    classify, preset_config, score_all, score_language, tf, weight, Preset, ScoreVector,
    ScoringConfig, TfMode, UnclassifiedReason, Verdict, WeightMode,
};
