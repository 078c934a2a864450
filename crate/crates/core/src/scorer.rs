//! Weighted stop-word and diacritic scoring.
//!
//! For a text and a language `L`:
//!
//! ```text
//! score(text, L) = p     * Σ_{w ∈ stopwords(L)}  tf(count(w)) * weight(w)
//!                + (1-p) * Σ_{d ∈ diacritics(L)} tf(count(d)) * weight(d)
//! ```
//!
//! `tf` is the raw count or `ln(1 + count)`; `weight` is `1`, `N/n` or
//! `ln(1 + N/n)` where `N` is the number of languages and `n` the number of
//! languages whose dictionary holds the term. Logs are natural; any other
//! base scales every score by the same constant and cannot change a verdict.
//!
//! The sums iterate dictionary terms with constant-time count lookups, so a
//! language costs `O(|w| + |d|)` once the text is normalized.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Serialize, Serializer};

use crate::error::ScoreError;
use crate::lexicon::{LanguageId, LexiconSet, Term};
use crate::normalize::NormalizedText;

/// Relative tolerance under which two top scores count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TfMode {
    Raw,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Unit,
    Ratio,
    LogRatio,
}

impl TfMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TfMode::Raw => "raw",
            TfMode::Log => "log",
        }
    }
}

impl WeightMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::Unit => "unit",
            WeightMode::Ratio => "ratio",
            WeightMode::LogRatio => "log_ratio",
        }
    }
}

impl FromStr for TfMode {
    type Err = ScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(TfMode::Raw),
            "log" => Ok(TfMode::Log),
            _ => Err(ScoreError::UnknownMode {
                kind: "tf",
                value: s.to_owned(),
            }),
        }
    }
}

impl FromStr for WeightMode {
    type Err = ScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(WeightMode::Unit),
            "ratio" => Ok(WeightMode::Ratio),
            "log_ratio" | "log-ratio" => Ok(WeightMode::LogRatio),
            _ => Err(ScoreError::UnknownMode {
                kind: "weight",
                value: s.to_owned(),
            }),
        }
    }
}

impl fmt::Display for TfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scoring parameters. `p` weighs stop words, `1 - p` weighs diacritics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoringConfig {
    p: f64,
    tf_mode: TfMode,
    weight_mode: WeightMode,
    /// Score with `p = 1` when the text holds no known diacritic.
    stopword_fallback: bool,
}

impl ScoringConfig {
    pub fn new(
        p: f64,
        tf_mode: TfMode,
        weight_mode: WeightMode,
        stopword_fallback: bool,
    ) -> Result<Self, ScoreError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ScoreError::InvalidP(p));
        }
        Ok(ScoringConfig {
            p,
            tf_mode,
            weight_mode,
            stopword_fallback,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tf_mode(&self) -> TfMode {
        self.tf_mode
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    pub fn stopword_fallback(&self) -> bool {
        self.stopword_fallback
    }

    /// Same modes, different `p`.
    pub fn with_p(self, p: f64) -> Result<Self, ScoreError> {
        ScoringConfig::new(p, self.tf_mode, self.weight_mode, self.stopword_fallback)
    }

    pub fn with_fallback(mut self, on: bool) -> Self {
        self.stopword_fallback = on;
        self
    }
}

/// The nine evaluation configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Test1,
    Test2,
    Test3,
    Test4,
    Test5,
    Test6,
    Test7,
    Test8,
    Test9,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Test1,
        Preset::Test2,
        Preset::Test3,
        Preset::Test4,
        Preset::Test5,
        Preset::Test6,
        Preset::Test7,
        Preset::Test8,
        Preset::Test9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Test1 => "test1",
            Preset::Test2 => "test2",
            Preset::Test3 => "test3",
            Preset::Test4 => "test4",
            Preset::Test5 => "test5",
            Preset::Test6 => "test6",
            Preset::Test7 => "test7",
            Preset::Test8 => "test8",
            Preset::Test9 => "test9",
        }
    }

    /// `p` as an exact fraction, for display.
    pub fn p_label(self) -> &'static str {
        match self {
            Preset::Test1 | Preset::Test2 => "0",
            Preset::Test3 | Preset::Test4 => "1",
            Preset::Test5 | Preset::Test7 => "1/2",
            Preset::Test6 | Preset::Test8 | Preset::Test9 => "1/3",
        }
    }

    pub fn config(self) -> ScoringConfig {
        use TfMode::*;
        use WeightMode::*;
        let (p, tf_mode, weight_mode, stopword_fallback) = match self {
            Preset::Test1 => (0.0, Raw, Unit, false),
            Preset::Test2 => (0.0, Raw, Ratio, false),
            Preset::Test3 => (1.0, Raw, Unit, true),
            Preset::Test4 => (1.0, Raw, Ratio, true),
            Preset::Test5 => (0.5, Raw, Unit, true),
            Preset::Test6 => (1.0 / 3.0, Raw, Unit, true),
            Preset::Test7 => (0.5, Raw, Ratio, true),
            Preset::Test8 => (1.0 / 3.0, Raw, Ratio, true),
            Preset::Test9 => (1.0 / 3.0, Log, LogRatio, true),
        };
        ScoringConfig {
            p,
            tf_mode,
            weight_mode,
            stopword_fallback,
        }
    }
}

impl FromStr for Preset {
    type Err = ScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == lower)
            .ok_or_else(|| ScoreError::UnknownPreset(s.to_owned()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn preset_config(name: &str) -> Result<ScoringConfig, ScoreError> {
    name.parse::<Preset>().map(Preset::config)
}

/// Term frequency of a raw occurrence count.
pub fn tf(count: usize, mode: TfMode) -> f64 {
    let count = count as f64;
    match mode {
        TfMode::Raw => count,
        TfMode::Log => count.ln_1p(),
    }
}

/// Language weight for a term held by `n` of `n_langs` languages.
pub fn weight_for_spread(n_langs: usize, n: usize, mode: WeightMode) -> f64 {
    debug_assert!(n >= 1 && n <= n_langs);
    match mode {
        WeightMode::Unit => 1.0,
        WeightMode::Ratio => n_langs as f64 / n as f64,
        WeightMode::LogRatio => (n_langs as f64 / n as f64).ln_1p(),
    }
}

/// Weight of a dictionary term of `lang`.
pub fn weight(
    term: &Term,
    lang: &LanguageId,
    lex: &LexiconSet,
    mode: WeightMode,
) -> Result<f64, ScoreError> {
    let member = lex
        .get(lang)
        .ok_or_else(|| ScoreError::UnknownLanguage(lang.clone()))?
        .contains(term);
    if !member {
        return Err(ScoreError::TermNotInLanguage {
            term: term.to_string(),
            language: lang.clone(),
        });
    }
    Ok(weight_for_spread(
        lex.len(),
        lex.term_language_count(term),
        mode,
    ))
}

/// Score one language with `cfg.p` taken as already effective. Callers that
/// want the no-diacritic fallback should go through [`score_all`].
pub fn score_language(
    nt: &NormalizedText,
    lang: &LanguageId,
    lex: &LexiconSet,
    cfg: &ScoringConfig,
) -> Result<f64, ScoreError> {
    let l = lex
        .get(lang)
        .ok_or_else(|| ScoreError::UnknownLanguage(lang.clone()))?;
    let n_langs = lex.len();
    let index = lex.term_index();

    let mut stop_sum = 0.0;
    if cfg.p > 0.0 {
        for w in &l.stopwords {
            let count = nt.token_count(w);
            if count > 0 {
                let n = index.word(w).map_or(1, <[_]>::len);
                stop_sum += tf(count, cfg.tf_mode) * weight_for_spread(n_langs, n, cfg.weight_mode);
            }
        }
    }
    let mut dia_sum = 0.0;
    if cfg.p < 1.0 {
        for &d in &l.diacritics {
            let count = nt.diacritic_count(d);
            if count > 0 {
                let n = index.diacritic(d).map_or(1, <[_]>::len);
                dia_sum += tf(count, cfg.tf_mode) * weight_for_spread(n_langs, n, cfg.weight_mode);
            }
        }
    }
    Ok(cfg.p * stop_sum + (1.0 - cfg.p) * dia_sum)
}

/// The `p` actually used for a text: 1 when the fallback is enabled and the
/// text holds none of the lexicon's diacritics, `cfg.p` otherwise.
pub fn effective_p(nt: &NormalizedText, lex: &LexiconSet, cfg: &ScoringConfig) -> f64 {
    if cfg.stopword_fallback
        && !lex
            .languages()
            .values()
            .any(|l| nt.contains_any_char(&l.diacritics))
    {
        1.0
    } else {
        cfg.p
    }
}

/// Per-language scores in lexicon order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ScoreVector {
    scores: IndexMap<LanguageId, f64>,
}

impl ScoreVector {
    pub fn get(&self, id: &LanguageId) -> Option<f64> {
        self.scores.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LanguageId, f64)> {
        self.scores.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.scores.values().copied().fold(0.0, f64::max)
    }

    pub fn is_all_zero(&self) -> bool {
        self.scores.values().all(|&s| s == 0.0)
    }

    /// Verdict implied by these scores.
    pub fn verdict(&self) -> Verdict {
        let top = self.max();
        if top <= 0.0 {
            return Verdict::Unclassified(UnclassifiedReason::NoEvidence);
        }
        let mut leaders = self
            .scores
            .iter()
            .filter(|(_, &s)| (top - s).abs() <= TIE_TOLERANCE * top);
        match (leaders.next(), leaders.next()) {
            (Some((id, _)), None) => Verdict::Classified(id.clone()),
            _ => Verdict::Unclassified(UnclassifiedReason::Tie),
        }
    }
}

impl FromIterator<(LanguageId, f64)> for ScoreVector {
    fn from_iter<T: IntoIterator<Item = (LanguageId, f64)>>(iter: T) -> Self {
        ScoreVector {
            scores: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnclassifiedReason {
    /// Every language scored zero.
    NoEvidence,
    /// The top score is shared by two or more languages.
    Tie,
}

impl UnclassifiedReason {
    pub fn as_str(self) -> &'static str {
        match self {
            UnclassifiedReason::NoEvidence => "no_evidence",
            UnclassifiedReason::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Classified(LanguageId),
    Unclassified(UnclassifiedReason),
}

impl Verdict {
    /// Output token: the language code, or `und` when unclassified.
    pub fn code(&self) -> &str {
        match self {
            Verdict::Classified(id) => id.as_str(),
            Verdict::Unclassified(_) => "und",
        }
    }

    pub fn language(&self) -> Option<&LanguageId> {
        match self {
            Verdict::Classified(id) => Some(id),
            Verdict::Unclassified(_) => None,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

/// Score every language with a single effective `p` for the whole text.
pub fn score_all(
    nt: &NormalizedText,
    lex: &LexiconSet,
    cfg: &ScoringConfig,
) -> Result<ScoreVector, ScoreError> {
    if lex.len() < 2 {
        return Err(ScoreError::TooFewLanguages(lex.len()));
    }
    let effective = ScoringConfig {
        p: effective_p(nt, lex, cfg),
        ..*cfg
    };
    lex.language_ids()
        .map(|id| Ok((id.clone(), score_language(nt, id, lex, &effective)?)))
        .collect()
}

/// Pick the language with the unique highest positive score.
pub fn classify(
    nt: &NormalizedText,
    lex: &LexiconSet,
    cfg: &ScoringConfig,
) -> Result<(Verdict, ScoreVector), ScoreError> {
    let scores = score_all(nt, lex, cfg)?;
    Ok((scores.verdict(), scores))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LanguageLexicon;
    use crate::normalize::normalize_text;

    fn id(s: &str) -> LanguageId {
        LanguageId::new(s).unwrap()
    }

    fn demo_ab() -> LexiconSet {
        LexiconSet::new([
            (id("a"), LanguageLexicon::new(["le", "la"], ['é'])),
            (id("b"), LanguageLexicon::new(["el", "la"], ['ñ'])),
        ])
        .unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn tf_branches() {
        assert_eq!(tf(0, TfMode::Raw), 0.0);
        assert_eq!(tf(0, TfMode::Log), 0.0);
        assert_eq!(tf(2, TfMode::Raw), 2.0);
        assert!(close(tf(1, TfMode::Log), std::f64::consts::LN_2));
    }

    #[test]
    fn weight_branches() {
        assert_eq!(weight_for_spread(5, 1, WeightMode::Ratio), 5.0);
        assert_eq!(weight_for_spread(5, 5, WeightMode::Ratio), 1.0);
        assert_eq!(weight_for_spread(5, 3, WeightMode::Unit), 1.0);
        // ln(2.25)
        assert!(close(
            weight_for_spread(5, 4, WeightMode::LogRatio),
            0.810_930_216_216_328_8
        ));

        let lex = LexiconSet::builtin_diacritics_only();
        let w = weight(&Term::Diacritic('é'), &id("es"), &lex, WeightMode::LogRatio).unwrap();
        assert!(close(w, 2.25f64.ln()));
        assert!(matches!(
            weight(&Term::Diacritic('ñ'), &id("fr"), &lex, WeightMode::Unit),
            Err(ScoreError::TermNotInLanguage { .. })
        ));
    }

    #[test]
    fn two_language_example() {
        let lex = demo_ab();
        let nt = normalize_text("le café");
        let cfg = ScoringConfig::new(0.5, TfMode::Raw, WeightMode::Ratio, false).unwrap();
        assert!(close(
            score_language(&nt, &id("a"), &lex, &cfg).unwrap(),
            2.0
        ));
        assert_eq!(score_language(&nt, &id("b"), &lex, &cfg).unwrap(), 0.0);
        let (verdict, _) = classify(&nt, &lex, &cfg).unwrap();
        assert_eq!(verdict, Verdict::Classified(id("a")));
        assert!(matches!(
            score_language(&nt, &id("zz"), &lex, &cfg),
            Err(ScoreError::UnknownLanguage(_))
        ));
    }

    #[test]
    fn empty_text_scores_zero() {
        let lex = demo_ab();
        let nt = normalize_text("");
        for preset in Preset::ALL {
            let scores = score_all(&nt, &lex, &preset.config()).unwrap();
            assert!(scores.is_all_zero());
            assert_eq!(
                scores.verdict(),
                Verdict::Unclassified(UnclassifiedReason::NoEvidence)
            );
        }
    }

    #[test]
    fn p_one_ignores_diacritics() {
        let lex = demo_ab();
        let nt = normalize_text("la niña y el café");
        let cfg = ScoringConfig::new(1.0, TfMode::Raw, WeightMode::Ratio, false).unwrap();
        let other = LexiconSet::new([
            (id("a"), LanguageLexicon::new(["le", "la"], ['ç'])),
            (id("b"), LanguageLexicon::new(["el", "la"], ['é', 'ñ'])),
        ])
        .unwrap();
        assert_eq!(
            score_all(&nt, &lex, &cfg).unwrap(),
            score_all(&nt, &other, &cfg).unwrap()
        );
    }

    #[test]
    fn fallback_switches_to_stopwords() {
        let lex = demo_ab();
        let nt = normalize_text("el perro y la casa");
        let third = ScoringConfig::new(1.0 / 3.0, TfMode::Raw, WeightMode::Ratio, true).unwrap();
        let one = ScoringConfig::new(1.0, TfMode::Raw, WeightMode::Ratio, true).unwrap();
        assert_eq!(effective_p(&nt, &lex, &third), 1.0);
        assert_eq!(
            score_all(&nt, &lex, &third).unwrap(),
            score_all(&nt, &lex, &one).unwrap()
        );

        let off = ScoringConfig::new(0.0, TfMode::Raw, WeightMode::Unit, false).unwrap();
        assert!(score_all(&nt, &lex, &off).unwrap().is_all_zero());
    }

    #[test]
    fn alli_estare_ties() {
        let lex = LexiconSet::builtin_diacritics_only();
        let nt = normalize_text("allí estaré");
        let (verdict, scores) = classify(&nt, &lex, &Preset::Test9.config()).unwrap();
        assert_eq!(verdict, Verdict::Unclassified(UnclassifiedReason::Tie));
        let ln2 = std::f64::consts::LN_2;
        let w3 = (1.0f64 + 5.0 / 3.0).ln();
        let w4 = 2.25f64.ln();
        let full = 2.0 / 3.0 * ln2 * (w3 + w4);
        for code in ["it", "pt", "es"] {
            assert!((scores.get(&id(code)).unwrap() - full).abs() < 1e-12);
            assert!((scores.get(&id(code)).unwrap() - 0.827_968_7).abs() < 1e-6);
        }
        assert!((scores.get(&id("fr")).unwrap() - 0.374_729_3).abs() < 1e-6);
        assert_eq!(scores.get(&id("ro")), Some(0.0));
    }

    #[test]
    fn no_evidence() {
        let lex = LexiconSet::builtin_diacritics_only();
        let nt = normalize_text("universitate facultate istorie");
        let (verdict, _) = classify(&nt, &lex, &Preset::Test9.config()).unwrap();
        assert_eq!(
            verdict,
            Verdict::Unclassified(UnclassifiedReason::NoEvidence)
        );
        assert_eq!(verdict.code(), "und");
    }

    #[test]
    fn needs_two_languages() {
        let lex = LexiconSet::new([(id("ro"), LanguageLexicon::new(["și"], ['ș']))]).unwrap();
        assert_eq!(
            classify(&normalize_text("și"), &lex, &Preset::Test3.config()).unwrap_err(),
            ScoreError::TooFewLanguages(1)
        );
    }

    #[test]
    fn presets() {
        let t6 = preset_config("test6").unwrap();
        assert!(close(t6.p(), 1.0 / 3.0));
        assert_eq!(
            (t6.tf_mode(), t6.weight_mode()),
            (TfMode::Raw, WeightMode::Unit)
        );
        let t9 = preset_config("test9").unwrap();
        assert_eq!(
            (t9.tf_mode(), t9.weight_mode()),
            (TfMode::Log, WeightMode::LogRatio)
        );
        assert!(t9.stopword_fallback());
        let t1 = preset_config("test1").unwrap();
        assert_eq!(t1.p(), 0.0);
        assert_eq!(t1.weight_mode(), WeightMode::Unit);
        assert!(!t1.stopword_fallback());
        assert!(!preset_config("test2").unwrap().stopword_fallback());
        assert_eq!(preset_config("test3").unwrap().p(), 1.0);
        assert!(matches!(
            preset_config("test10"),
            Err(ScoreError::UnknownPreset(_))
        ));
    }

    #[test]
    fn config_validation() {
        assert!(ScoringConfig::new(1.5, TfMode::Raw, WeightMode::Unit, true).is_err());
        assert!(ScoringConfig::new(-0.1, TfMode::Raw, WeightMode::Unit, true).is_err());
        assert!(ScoringConfig::new(f64::NAN, TfMode::Raw, WeightMode::Unit, true).is_err());
        assert_eq!(
            "log_ratio".parse::<WeightMode>().unwrap(),
            WeightMode::LogRatio
        );
        assert!("cubic".parse::<TfMode>().is_err());
    }

    #[test]
    fn exact_tie_in_raw_mode() {
        let lex = demo_ab();
        let nt = normalize_text("la");
        let (verdict, _) = classify(&nt, &lex, &Preset::Test3.config()).unwrap();
        assert_eq!(verdict, Verdict::Unclassified(UnclassifiedReason::Tie));
    }
}
