use std::borrow::Cow;

use super::Span;

/// Replace `span` of the original text with `replacement`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextEdit {
    pub span: Span,
    pub replacement: String,
}

impl TextEdit {
    pub fn new(span: Span, replacement: impl Into<String>) -> Self {
        TextEdit { span, replacement: replacement.into() }
    }

    pub fn insert(at: usize, text: impl Into<String>) -> Self {
        TextEdit { span: Span::empty(at), replacement: text.into() }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EditError {
    #[error("edits overlap at {0:?} and {1:?}")]
    Overlap(Span, Span),
    #[error("edit span {0:?} is outside the source or splits a character")]
    OutOfBounds(Span),
}

/// Splice edits into `source`. Edits may be given in any order; they are
/// applied left to right, and insertions at the same offset keep their
/// relative order.
pub fn apply_edits(source: &str, edits: &[TextEdit]) -> Result<String, EditError> {
    let mut ordered: Vec<&TextEdit> = edits.iter().collect();
    ordered.sort_by_key(|e| (e.span.start, e.span.end));
    for edit in &ordered {
        let s = edit.span;
        if s.start > s.end
            || s.end > source.len()
            || !source.is_char_boundary(s.start)
            || !source.is_char_boundary(s.end)
        {
            return Err(EditError::OutOfBounds(s));
        }
    }
    for pair in ordered.windows(2) {
        if pair[0].span.end > pair[1].span.start {
            return Err(EditError::Overlap(pair[0].span, pair[1].span));
        }
    }
    let extra: usize = ordered.iter().map(|e| e.replacement.len()).sum();
    let mut out = String::with_capacity(source.len() + extra);
    let mut cursor = 0;
    for edit in ordered {
        out.push_str(&source[cursor..edit.span.start]);
        out.push_str(&edit.replacement);
        cursor = edit.span.end;
    }
    out.push_str(&source[cursor..]);
    Ok(out)
}

/// Convert CRLF and lone CR line endings to LF.
pub fn normalize_newlines(text: &str) -> Cow<'_, str> {
    if !text.contains('\r') {
        return Cow::Borrowed(text);
    }
    Cow::Owned(text.replace("\r\n", "\n").replace('\r', "\n"))
}

/// Whether two texts differ once line endings are normalised.
pub fn text_differs(a: &str, b: &str) -> bool {
    normalize_newlines(a) != normalize_newlines(b)
}
