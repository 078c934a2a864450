//! Per-language stop-word and diacritic dictionaries.
//!
//! A [`LexiconSet`] owns every language's dictionaries plus a cross-language
//! term index. The index answers "how many languages contain this term",
//! which is the `n` in the `N/n` language weight. Stop words and diacritics
//! are indexed under separate keys, so the stop word `y` and a hypothetical
//! diacritic `y` never share a count.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::LexiconError;
use crate::fold::strip_diacritics;
use crate::normalize::{fold_case_composed, normalize_text};

pub const STOPWORDS_FILE: &str = "stopwords.txt";
pub const DIACRITICS_FILE: &str = "diacritics.txt";

/// Diacritic letters per language, in table order.
const BUILTIN_DIACRITICS: [(&str, &str); 5] = [
    ("fr", "àâæçèéêëîïôœùûü"),
    ("it", "àáèéìíòóùú"),
    ("pt", "áâãàçéêíóôõú"),
    ("ro", "ăâîșşțţ"),
    ("es", "áéíóúñü"),
];

/// Short lowercase language code such as `fr` or `ro`. Letters, digits,
/// `-` and `_` only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LanguageId(String);

impl LanguageId {
    pub fn new(code: &str) -> Result<Self, LexiconError> {
        let code = code.trim().to_lowercase();
        let valid = |c: char| c.is_alphanumeric() || c == '-' || c == '_';
        if code.is_empty() || !code.chars().all(valid) {
            return Err(LexiconError::InvalidLanguageCode(code));
        }
        Ok(LanguageId(code))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for LanguageId {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LanguageId::new(s)
    }
}

/// Which dictionary a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    StopWord,
    Diacritic,
}

/// Key into the cross-language term index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Word(String),
    Diacritic(char),
}

impl Term {
    pub fn kind(&self) -> TermKind {
        match self {
            Term::Word(_) => TermKind::StopWord,
            Term::Diacritic(_) => TermKind::Diacritic,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Word(w) => f.write_str(w),
            Term::Diacritic(c) => write!(f, "{c}"),
        }
    }
}

/// The two dictionaries of one language.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LanguageLexicon {
    pub stopwords: BTreeSet<String>,
    pub diacritics: BTreeSet<char>,
}

impl LanguageLexicon {
    pub fn new<W, S, D>(stopwords: W, diacritics: D) -> Self
    where
        W: IntoIterator<Item = S>,
        S: Into<String>,
        D: IntoIterator<Item = char>,
    {
        LanguageLexicon {
            stopwords: stopwords.into_iter().map(Into::into).collect(),
            diacritics: diacritics.into_iter().collect(),
        }
    }

    pub fn contains(&self, term: &Term) -> bool {
        match term {
            Term::Word(w) => self.stopwords.contains(w),
            Term::Diacritic(c) => self.diacritics.contains(c),
        }
    }
}

/// All languages under test, in manifest order, with the term index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconSet {
    languages: IndexMap<LanguageId, LanguageLexicon>,
    term_index: TermIndex,
}

/// Term to the languages containing it, kept per kind so lookups can borrow.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TermIndex {
    words: HashMap<String, Vec<LanguageId>>,
    diacritics: HashMap<char, Vec<LanguageId>>,
}

impl TermIndex {
    fn build(languages: &IndexMap<LanguageId, LanguageLexicon>) -> Self {
        let mut index = TermIndex::default();
        for (id, lex) in languages {
            for w in &lex.stopwords {
                index.words.entry(w.clone()).or_default().push(id.clone());
            }
            for &d in &lex.diacritics {
                index.diacritics.entry(d).or_default().push(id.clone());
            }
        }
        index
    }

    pub fn get(&self, term: &Term) -> Option<&[LanguageId]> {
        match term {
            Term::Word(w) => self.word(w),
            Term::Diacritic(c) => self.diacritic(*c),
        }
    }

    pub fn word(&self, word: &str) -> Option<&[LanguageId]> {
        self.words.get(word).map(Vec::as_slice)
    }

    pub fn diacritic(&self, c: char) -> Option<&[LanguageId]> {
        self.diacritics.get(&c).map(Vec::as_slice)
    }

    /// Number of distinct (kind, term) keys.
    pub fn len(&self) -> usize {
        self.words.len() + self.diacritics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Term, &[LanguageId])> {
        let words = self
            .words
            .iter()
            .map(|(w, l)| (Term::Word(w.clone()), l.as_slice()));
        let dia = self
            .diacritics
            .iter()
            .map(|(c, l)| (Term::Diacritic(*c), l.as_slice()));
        words.chain(dia)
    }
}

impl LexiconSet {
    /// Build a set from languages in the given order. Entries are taken
    /// verbatim; use [`load_lexicon`] to get normalization applied.
    pub fn new<I>(languages: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (LanguageId, LanguageLexicon)>,
    {
        let mut map = IndexMap::new();
        for (id, lexicon) in languages {
            if lexicon.stopwords.iter().any(String::is_empty) {
                return Err(LexiconError::EmptyStopword(id));
            }
            if let Some(&c) = lexicon.diacritics.iter().find(|c| !c.is_alphabetic()) {
                return Err(LexiconError::NonAlphabeticDiacritic {
                    language: id,
                    entry: c,
                });
            }
            if map.contains_key(&id) {
                return Err(LexiconError::DuplicateLanguage(id));
            }
            map.insert(id, lexicon);
        }
        if map.is_empty() {
            return Err(LexiconError::NoLanguages);
        }
        let term_index = TermIndex::build(&map);
        Ok(LexiconSet {
            languages: map,
            term_index,
        })
    }

    /// The built-in diacritic table with empty stop-word lists.
    pub fn builtin_diacritics_only() -> Self {
        let langs = builtin_diacritics()
            .into_iter()
            .map(|(id, d)| (id, LanguageLexicon::new(Vec::<String>::new(), d)));
        LexiconSet::new(langs).expect("built-in table is valid")
    }

    /// Number of languages, `N`.
    pub fn len(&self) -> usize {
        self.languages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.languages.is_empty()
    }

    pub fn languages(&self) -> &IndexMap<LanguageId, LanguageLexicon> {
        &self.languages
    }

    pub fn language_ids(&self) -> impl Iterator<Item = &LanguageId> {
        self.languages.keys()
    }

    pub fn get(&self, id: &LanguageId) -> Option<&LanguageLexicon> {
        self.languages.get(id)
    }

    pub fn term_index(&self) -> &TermIndex {
        &self.term_index
    }

    /// Number of languages whose dictionary of the term's kind contains it.
    pub fn term_language_count(&self, term: &Term) -> usize {
        self.term_index.get(term).map_or(0, <[_]>::len)
    }

    pub fn word_language_count(&self, word: &str) -> usize {
        self.term_index.word(word).map_or(0, <[_]>::len)
    }

    pub fn diacritic_language_count(&self, c: char) -> usize {
        self.term_index.diacritic(c).map_or(0, <[_]>::len)
    }

    /// Union of every language's diacritic set.
    pub fn all_diacritics(&self) -> BTreeSet<char> {
        self.languages
            .values()
            .flat_map(|l| l.diacritics.iter().copied())
            .collect()
    }

    /// Rebuild the term index from the language dictionaries.
    pub fn rebuild_index(&self) -> TermIndex {
        TermIndex::build(&self.languages)
    }

    /// SHA-256 over a canonical dump of the dictionaries, hex encoded.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for (id, lex) in &self.languages {
            hasher.update(b"L\0");
            hasher.update(id.as_str().as_bytes());
            for w in &lex.stopwords {
                hasher.update(b"\0w\0");
                hasher.update(w.as_bytes());
            }
            for d in &lex.diacritics {
                hasher.update(b"\0d\0");
                hasher.update(d.to_string().as_bytes());
            }
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }
}

/// The built-in diacritic table for French, Italian, Portuguese, Romanian
/// and Spanish. Romanian lists both the comma-below and the legacy cedilla
/// forms of s and t.
pub fn builtin_diacritics() -> IndexMap<LanguageId, BTreeSet<char>> {
    BUILTIN_DIACRITICS
        .iter()
        .map(|(code, chars)| (LanguageId(code.to_string()), chars.chars().collect()))
        .collect()
}

/// The built-in table as `(code, letters)` rows in table order.
pub fn builtin_diacritic_rows() -> impl Iterator<Item = (&'static str, &'static str)> {
    BUILTIN_DIACRITICS.iter().copied()
}

/// Add the diacritic-free spelling of every stop word to its own language.
pub fn augment_with_stripped_variants(lex: &LexiconSet) -> LexiconSet {
    let languages = lex.languages.iter().map(|(id, l)| {
        let mut stopwords = l.stopwords.clone();
        stopwords.extend(l.stopwords.iter().map(|w| strip_diacritics(w)));
        (
            id.clone(),
            LanguageLexicon {
                stopwords,
                diacritics: l.diacritics.clone(),
            },
        )
    });
    LexiconSet::new(languages).expect("augmenting a valid set keeps it valid")
}

/// A non-fatal observation about a lexicon file or set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub kind: FindingKind,
    pub language: Option<LanguageId>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    /// Stop word present in all, or all but one, of the languages.
    WidelyShared,
    /// A diacritic entry with no mark on it (plain ASCII letter).
    UnmarkedDiacritic,
    EmptyDiacritics,
    /// Entry that preprocessing would change.
    NotNormalizationStable,
    /// Language with neither stop words nor diacritics.
    EmptyLanguage,
    TooFewLanguages,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match &self.language {
            Some(id) => write!(f, "{severity}: [{id}] {}", self.message),
            None => write!(f, "{severity}: {}", self.message),
        }
    }
}

impl Finding {
    fn warn(kind: FindingKind, language: Option<&LanguageId>, message: String) -> Self {
        Finding {
            severity: Severity::Warning,
            kind,
            language: language.cloned(),
            message,
        }
    }

    fn error(kind: FindingKind, language: Option<&LanguageId>, message: String) -> Self {
        Finding {
            severity: Severity::Error,
            kind,
            language: language.cloned(),
            message,
        }
    }
}

/// Diagnostics for a lexicon set. Never fails.
pub fn validate_lexicon(lex: &LexiconSet) -> Vec<Finding> {
    let n_langs = lex.len();
    let mut findings = Vec::new();
    if n_langs < 2 {
        findings.push(Finding::error(
            FindingKind::TooFewLanguages,
            None,
            format!("{n_langs} language(s); classification needs at least 2"),
        ));
    }
    let shared_threshold = n_langs.saturating_sub(1).max(2);
    let mut reported_shared = BTreeSet::new();
    for (id, l) in lex.languages() {
        if l.stopwords.is_empty() && l.diacritics.is_empty() {
            findings.push(Finding::error(
                FindingKind::EmptyLanguage,
                Some(id),
                "no stop words and no diacritics".into(),
            ));
        } else if l.diacritics.is_empty() {
            findings.push(Finding::warn(
                FindingKind::EmptyDiacritics,
                Some(id),
                "empty diacritic set".into(),
            ));
        }
        for w in &l.stopwords {
            let nt = normalize_text(w);
            if nt.tokens() != [w.as_str()] {
                findings.push(Finding::warn(
                    FindingKind::NotNormalizationStable,
                    Some(id),
                    format!("stop word {w:?} is not normalization-stable"),
                ));
            }
            let n = lex.word_language_count(w);
            if n_langs >= 2 && n >= shared_threshold && reported_shared.insert(w.clone()) {
                let holders: Vec<&str> = lex
                    .term_index()
                    .word(w)
                    .unwrap_or_default()
                    .iter()
                    .map(LanguageId::as_str)
                    .collect();
                findings.push(Finding::warn(
                    FindingKind::WidelyShared,
                    None,
                    format!(
                        "stop word {w:?} has n={n} of {n_langs} ({})",
                        holders.join(",")
                    ),
                ));
            }
        }
        for &d in &l.diacritics {
            if d.is_ascii() {
                findings.push(Finding::warn(
                    FindingKind::UnmarkedDiacritic,
                    Some(id),
                    format!("diacritic entry {d:?} carries no mark"),
                ));
            }
            if fold_case_composed(&d.to_string()) != d.to_string() {
                findings.push(Finding::warn(
                    FindingKind::NotNormalizationStable,
                    Some(id),
                    format!("diacritic {d:?} is not normalization-stable"),
                ));
            }
        }
    }
    findings
}

/// Result of reading a lexicon directory.
#[derive(Debug, Clone)]
pub struct LoadedLexicon {
    pub lexicon: LexiconSet,
    /// Entries the loader had to normalize.
    pub warnings: Vec<Finding>,
}

/// Read `<root>/<lang>/stopwords.txt` and `<root>/<lang>/diacritics.txt` for
/// every subdirectory of `root`, in sorted directory-name order.
pub fn load_lexicon(root: &Path) -> Result<LoadedLexicon, LexiconError> {
    let entries = fs::read_dir(root).map_err(|source| LexiconError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    let mut dirs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| LexiconError::Io {
            path: root.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        if path.is_dir() {
            dirs.push(path);
        }
    }
    dirs.sort();

    let mut warnings = Vec::new();
    let mut languages = Vec::with_capacity(dirs.len());
    let mut seen = BTreeSet::new();
    for dir in dirs {
        let name = dir.file_name().unwrap_or_default().to_string_lossy();
        let id = LanguageId::new(&name)?;
        if !seen.insert(id.clone()) {
            return Err(LexiconError::DuplicateLanguage(id));
        }
        let stopwords = read_stopwords(&dir.join(STOPWORDS_FILE), &id, &mut warnings)?;
        let diacritics = read_diacritics(&dir.join(DIACRITICS_FILE), &id, &mut warnings)?;
        languages.push((
            id,
            LanguageLexicon {
                stopwords,
                diacritics,
            },
        ));
    }
    if languages.is_empty() {
        return Err(LexiconError::NoLanguages);
    }
    Ok(LoadedLexicon {
        lexicon: LexiconSet::new(languages)?,
        warnings,
    })
}

/// Write a lexicon in the directory layout read by [`load_lexicon`]. Entries
/// are written sorted, one per line.
pub fn save_lexicon(lex: &LexiconSet, root: &Path) -> Result<(), LexiconError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| LexiconError::Io { path, source }
    };
    for (id, l) in lex.languages() {
        let dir = root.join(id.as_str());
        fs::create_dir_all(&dir).map_err(io(&dir))?;
        let mut words = String::new();
        for w in &l.stopwords {
            words.push_str(w);
            words.push('\n');
        }
        let path = dir.join(STOPWORDS_FILE);
        fs::write(&path, words).map_err(io(&path))?;
        let mut chars = String::new();
        for d in &l.diacritics {
            chars.push(*d);
            chars.push('\n');
        }
        let path = dir.join(DIACRITICS_FILE);
        fs::write(&path, chars).map_err(io(&path))?;
    }
    Ok(())
}

/// Yield `(line_number, trimmed_content)` for every meaningful line.
fn content_lines(path: &Path) -> Result<Vec<(usize, String)>, LexiconError> {
    if !path.is_file() {
        return Err(LexiconError::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().trim_start_matches('\u{feff}').trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.to_owned()))
        .collect())
}

fn read_stopwords(
    path: &Path,
    id: &LanguageId,
    warnings: &mut Vec<Finding>,
) -> Result<BTreeSet<String>, LexiconError> {
    let mut out = BTreeSet::new();
    for (line, entry) in content_lines(path)? {
        let nt = normalize_text(&entry);
        let [token] = nt.tokens() else {
            return Err(LexiconError::MultiTokenStopword {
                path: path.to_path_buf(),
                line,
                entry,
            });
        };
        if *token != entry {
            warnings.push(Finding::warn(
                FindingKind::NotNormalizationStable,
                Some(id),
                format!(
                    "{}:{line}: stop word {entry:?} normalized to {token:?}",
                    path.display()
                ),
            ));
        }
        out.insert(token.clone());
    }
    Ok(out)
}

fn read_diacritics(
    path: &Path,
    id: &LanguageId,
    warnings: &mut Vec<Finding>,
) -> Result<BTreeSet<char>, LexiconError> {
    let mut out = BTreeSet::new();
    for (line, entry) in content_lines(path)? {
        let folded = fold_case_composed(&entry);
        let mut chars = folded.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(LexiconError::MultiCharDiacritic {
                path: path.to_path_buf(),
                line,
                entry,
            });
        };
        if !c.is_alphabetic() {
            return Err(LexiconError::NonAlphabeticDiacriticLine {
                path: path.to_path_buf(),
                line,
                entry,
            });
        }
        if folded != entry {
            warnings.push(Finding::warn(
                FindingKind::NotNormalizationStable,
                Some(id),
                format!(
                    "{}:{line}: diacritic {entry:?} normalized to {folded:?}",
                    path.display()
                ),
            ));
        }
        out.insert(c);
    }
    Ok(out)
}
