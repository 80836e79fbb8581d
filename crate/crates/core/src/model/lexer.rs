//! Tokenizer. Newlines end a statement only outside brackets, so tables may span lines.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Name(String),
    /// Quoted name, quotes removed.
    Str(String),
    Punct(char),
    Arrow,
    Le,
    Newline,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Byte span in the source.
    pub start: usize,
    pub end: usize,
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || "_.$+*'⋆∞".contains(c)
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut depth: Vec<(char, usize, usize)> = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let (mut line, mut line_start) = (1usize, 0usize);
    let mut i = 0;
    let err = |line: usize, col: usize, msg: &str| Error::Model(format!("line {line}, col {col}: {msg}"));
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = src[line_start..pos].chars().count() + 1;
        let push = |out: &mut Vec<Token>, tok: Tok, end: usize| {
            out.push(Token { tok, line, col, start: pos, end });
        };
        let next_pos = |k: usize| chars.get(k).map(|x| x.0).unwrap_or(src.len());
        match c {
            '\n' => {
                if depth.is_empty() {
                    push(&mut out, Tok::Newline, pos + 1);
                }
                line += 1;
                line_start = pos + 1;
                i += 1;
            }
            '#' => {
                while i < chars.len() && chars[i].1 != '\n' {
                    i += 1;
                }
            }
            c if c.is_whitespace() => i += 1,
            '"' => {
                let mut j = i + 1;
                let mut s = String::new();
                while j < chars.len() && chars[j].1 != '"' {
                    if chars[j].1 == '\n' {
                        return Err(err(line, col, "unterminated quoted name"));
                    }
                    s.push(chars[j].1);
                    j += 1;
                }
                if j >= chars.len() {
                    return Err(err(line, col, "unterminated quoted name"));
                }
                push(&mut out, Tok::Str(s), next_pos(j + 1));
                i = j + 1;
            }
            '-' if chars.get(i + 1).map(|x| x.1) == Some('>') => {
                push(&mut out, Tok::Arrow, next_pos(i + 2));
                i += 2;
            }
            '<' if chars.get(i + 1).map(|x| x.1) == Some('=') => {
                push(&mut out, Tok::Le, next_pos(i + 2));
                i += 2;
            }
            '(' | '[' | '{' => {
                depth.push((c, line, col));
                push(&mut out, Tok::Punct(c), pos + 1);
                i += 1;
            }
            ')' | ']' | '}' => {
                let want = match c {
                    ')' => '(',
                    ']' => '[',
                    _ => '{',
                };
                match depth.pop() {
                    Some((open, _, _)) if open == want => {}
                    _ => return Err(err(line, col, &format!("unbalanced `{c}`"))),
                }
                push(&mut out, Tok::Punct(c), pos + 1);
                i += 1;
            }
            '=' | ':' | ',' | ';' | '|' => {
                push(&mut out, Tok::Punct(c), pos + 1);
                i += 1;
            }
            c if is_name_char(c) || c == '-' => {
                let mut j = i;
                while j < chars.len() {
                    let d = chars[j].1;
                    let dash = d == '-' && chars.get(j + 1).map(|x| x.1) != Some('>');
                    if !(is_name_char(d) || dash) {
                        break;
                    }
                    j += 1;
                }
                let end = next_pos(j);
                push(&mut out, Tok::Name(src[pos..end].to_string()), end);
                i = j;
            }
            other => return Err(err(line, col, &format!("unexpected character `{other}`"))),
        }
    }
    if let Some((open, l, c)) = depth.pop() {
        return Err(err(l, c, &format!("`{open}` is never closed")));
    }
    let end = src.len();
    out.push(Token {
        tok: Tok::Newline,
        line,
        col: 1,
        start: end,
        end,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_span_lines() {
        let toks = tokenize("problem d : R -> F = table [\n [1, inf],\n [2, 3]]\nquery d a b # note\n").unwrap();
        let newlines = toks.iter().filter(|t| t.tok == Tok::Newline).count();
        assert_eq!(newlines, 3);
        assert!(toks.iter().any(|t| t.tok == Tok::Arrow));
        assert!(toks.iter().any(|t| t.tok == Tok::Name("inf".into())));
    }

    #[test]
    fn quoted_names_and_errors() {
        let toks = tokenize("chain {\"1 tgt\", 2tgts}").unwrap();
        assert_eq!(toks[2].tok, Tok::Str("1 tgt".into()));
        assert_eq!(toks[4].tok, Tok::Name("2tgts".into()));
        assert!(tokenize("a = (b").is_err());
        assert!(tokenize("a = b)").is_err());
        assert!(tokenize("\"open").is_err());
    }
}
