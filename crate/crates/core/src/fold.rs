//! Fixed folding table from accented Romance letters to ASCII.

/// ASCII replacement for one accented letter, or `None` if `c` is not in
/// the table.
pub fn fold_char(c: char) -> Option<&'static str> {
    let folded = match c {
        'à' | 'â' | 'á' | 'ă' | 'ã' => "a",
        'æ' => "ae",
        'ç' => "c",
        'è' | 'é' | 'ê' | 'ë' => "e",
        'î' | 'ï' | 'ì' | 'í' => "i",
        'ô' | 'ò' | 'ó' | 'õ' => "o",
        'œ' => "oe",
        'ù' | 'û' | 'ü' | 'ú' => "u",
        'ñ' => "n",
        'ș' | 'ş' => "s",
        'ț' | 'ţ' => "t",
        _ => return None,
    };
    Some(folded)
}

/// Replace every accented letter of `term` by its ASCII base. Letters
/// outside the table pass through unchanged.
pub fn strip_diacritics(term: &str) -> String {
    let mut out = String::with_capacity(term.len());
    for c in term.chars() {
        match fold_char(c) {
            Some(s) => out.push_str(s),
            None => out.push(c),
        }
    }
    out
}
