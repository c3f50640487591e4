/// Words that end in a period without ending the sentence.
const ABBREVIATIONS: [&str; 18] = [
    "al", "fig", "figs", "e.g", "i.e", "eq", "eqs", "sec", "vs", "cf", "dr", "mr", "mrs", "no",
    "tab", "approx", "resp", "ref",
];

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

/// Word immediately before byte position `end` (the terminator).
fn word_before(text: &str, end: usize) -> &str {
    let head = &text[..end];
    let start = head
        .char_indices()
        .rev()
        .find(|&(_, c)| c.is_whitespace() || c == '(' || c == '[')
        .map_or(0, |(i, c)| i + c.len_utf8());
    &head[start..]
}

fn is_guarded(text: &str, end: usize) -> bool {
    let word = word_before(text, end).to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

/// Splits at `.`, `!` or `?` followed by whitespace and an uppercase
/// letter, skipping common abbreviations. Sentences are trimmed; joined
/// back together they cover every non-whitespace character of the input.
pub fn split_sentences(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<(usize, char)> = body.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let mut j = i + 1;
            while j < chars.len()
                && (is_closer(chars[j].1) || matches!(chars[j].1, '.' | '!' | '?'))
            {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            let boundary = k > j
                && k < chars.len()
                && chars[k].1.is_uppercase()
                && !(c == '.' && is_guarded(body, pos));
            if boundary {
                let end = chars.get(j).map_or(body.len(), |&(b, _)| b);
                let s = body[start..end].trim();
                if !s.is_empty() {
                    out.push(s);
                }
                start = chars[k].0;
                i = k;
                continue;
            }
        }
        i += 1;
    }
    let tail = body[start..].trim();
    if !tail.is_empty() {
        out.push(tail);
    }
    out
}
