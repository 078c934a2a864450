//! Text preprocessing: raw UTF-8 in, lowercase composed alphabetic tokens out.
//!
//! The pipeline is whitespace chunking, URL removal, `#`/`@` sigil stripping,
//! NFC composition with lowercasing, and finally splitting on every character
//! that is not a Unicode letter. Character and token counts are precomputed so
//! that scoring can look up any dictionary term in constant time.

use std::collections::HashMap;

use unicode_normalization::UnicodeNormalization;

/// A preprocessed document. Equality ignores `raw_length`, which is
/// diagnostic only.
#[derive(Debug, Clone, Default)]
pub struct NormalizedText {
    tokens: Vec<String>,
    char_freq: HashMap<char, usize>,
    token_freq: HashMap<String, usize>,
    raw_length: usize,
}

impl PartialEq for NormalizedText {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens && self.char_freq == other.char_freq
    }
}

impl Eq for NormalizedText {}

impl NormalizedText {
    pub fn new(raw: &str) -> Self {
        normalize_text(raw)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn char_freq(&self) -> &HashMap<char, usize> {
        &self.char_freq
    }

    /// Number of characters in the original input.
    pub fn raw_length(&self) -> usize {
        self.raw_length
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Occurrences of the character `c` across all tokens.
    pub fn diacritic_count(&self, c: char) -> usize {
        self.char_freq.get(&c).copied().unwrap_or(0)
    }

    /// Number of tokens exactly equal to `term`. Never matches substrings.
    pub fn token_count(&self, term: &str) -> usize {
        self.token_freq.get(term).copied().unwrap_or(0)
    }

    /// Total number of characters over all tokens.
    pub fn char_total(&self) -> usize {
        self.char_freq.values().sum()
    }

    /// True if any character of the text is in `set`.
    pub fn contains_any_char<'a, I>(&self, set: I) -> bool
    where
        I: IntoIterator<Item = &'a char>,
    {
        set.into_iter().any(|c| self.char_freq.contains_key(c))
    }
}

/// Run the full preprocessing pipeline over `raw`.
pub fn normalize_text(raw: &str) -> NormalizedText {
    let mut tokens = Vec::new();
    for chunk in raw.split_whitespace() {
        if is_url_like(chunk) {
            continue;
        }
        let chunk = chunk.trim_start_matches(['#', '@']);
        let folded = fold_case_composed(chunk);
        tokens.extend(
            folded
                .split(|c: char| !c.is_alphabetic())
                .filter(|t| !t.is_empty())
                .map(str::to_owned),
        );
    }
    build(tokens, raw.chars().count())
}

/// Convenience wrapper over [`NormalizedText::diacritic_count`].
pub fn diacritic_count(nt: &NormalizedText, c: char) -> usize {
    nt.diacritic_count(c)
}

/// Convenience wrapper over [`NormalizedText::token_count`].
pub fn token_count(nt: &NormalizedText, term: &str) -> usize {
    nt.token_count(term)
}

/// NFC-compose and lowercase. Lowercasing can emit decomposed sequences
/// (e.g. `İ` becomes `i` + U+0307), so composition runs again afterwards.
pub(crate) fn fold_case_composed(s: &str) -> String {
    let composed: String = s.nfc().collect();
    composed.to_lowercase().nfc().collect()
}

fn is_url_like(chunk: &str) -> bool {
    let body = chunk.trim_start_matches(|c: char| !c.is_alphanumeric());
    if body.contains("://") {
        return true;
    }
    body.get(..4)
        .is_some_and(|p| p.eq_ignore_ascii_case("www."))
}

fn build(tokens: Vec<String>, raw_length: usize) -> NormalizedText {
    let mut char_freq: HashMap<char, usize> = HashMap::new();
    let mut token_freq: HashMap<String, usize> = HashMap::with_capacity(tokens.len());
    for token in &tokens {
        for c in token.chars() {
            *char_freq.entry(c).or_default() += 1;
        }
        *token_freq.entry(token.clone()).or_default() += 1;
    }
    NormalizedText {
        tokens,
        char_freq,
        token_freq,
        raw_length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        normalize_text(s).tokens().to_vec()
    }

    #[test]
    fn keeps_accented_words_and_drops_punctuation() {
        assert_eq!(toks("buona sera, wagliù!"), ["buona", "sera", "wagliù"]);
    }

    #[test]
    fn empty_input() {
        let nt = normalize_text("");
        assert!(nt.tokens().is_empty());
        assert!(nt.char_freq().is_empty());
        assert_eq!(nt.raw_length(), 0);
    }

    #[test]
    fn urls_sigils_digits_and_case() {
        let nt = normalize_text("Café\u{2014}CAFÉ http://t.co/x #café123");
        assert_eq!(nt.tokens(), ["café", "café", "café"]);
        let expected: HashMap<char, usize> = [('c', 3), ('a', 3), ('f', 3), ('é', 3)]
            .into_iter()
            .collect();
        assert_eq!(nt.char_freq(), &expected);
        assert_eq!(nt.raw_length(), 32);
    }

    #[test]
    fn www_and_mentions() {
        assert_eq!(
            toks("see WWW.example.com @maria (https://x.y)"),
            ["see", "maria"]
        );
        assert_eq!(toks("##tag @@user"), ["tag", "user"]);
    }

    #[test]
    fn decomposed_matches_precomposed() {
        assert_eq!(normalize_text("e\u{301}"), normalize_text("é"));
        assert_eq!(normalize_text("s\u{326}i"), normalize_text("și"));
    }

    #[test]
    fn diacritic_counts() {
        assert_eq!(normalize_text("allí estaré").diacritic_count('é'), 1);
        assert_eq!(normalize_text("abc").diacritic_count('é'), 0);
        assert_eq!(normalize_text("ţară ţel").diacritic_count('ţ'), 2);
        // cedilla and comma forms stay distinct
        assert_eq!(normalize_text("ţară ţel").diacritic_count('ț'), 0);
    }

    #[test]
    fn token_counts_are_whole_token() {
        assert_eq!(normalize_text("la casa la").token_count("la"), 2);
        assert_eq!(normalize_text("lala").token_count("la"), 0);
        assert_eq!(
            normalize_text("il y a plongé son visage").token_count("y"),
            1
        );
    }

    #[test]
    fn uppercase_diacritic_folds() {
        assert_eq!(toks("ÉTÉ À"), ["été", "à"]);
        assert_eq!(toks("ŞI ȘI"), ["şi", "și"]);
    }

    #[test]
    fn apostrophes_split() {
        assert_eq!(toks("l'école d’été"), ["l", "école", "d", "été"]);
    }
}
