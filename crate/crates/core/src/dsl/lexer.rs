use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Ident(String),
    X,
    O,
    ODeriv,
    Sum,
    Binom,
    Floor,
    Where,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    DotDot,
    Assign,
    EqEq,
    Ge,
    Le,
    Gt,
    Lt,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(v) => v.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::X => "x".into(),
            Tok::O => "O".into(),
            Tok::ODeriv => "O'".into(),
            Tok::Sum => "Sum".into(),
            Tok::Binom => "C".into(),
            Tok::Floor => "floor".into(),
            Tok::Where => "where".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::Comma => ",".into(),
            Tok::DotDot => "..".into(),
            Tok::Assign => "=".into(),
            Tok::EqEq => "==".into(),
            Tok::Ge => ">=".into(),
            Tok::Le => "<=".into(),
            Tok::Gt => ">".into(),
            Tok::Lt => "<".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut column = 1;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<i64>().map_err(|_| ParseError::new("integer literal out of range", pos, &text))?;
            Tok::Int(value)
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "x" => Tok::X,
                "O" if chars.get(i) == Some(&'\'') => {
                    i += 1;
                    Tok::ODeriv
                }
                "O" => Tok::O,
                "Sum" => Tok::Sum,
                "C" => Tok::Binom,
                "floor" => Tok::Floor,
                "where" => Tok::Where,
                _ => Tok::Ident(word),
            }
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('.', Some('.')) => (Tok::DotDot, 2),
                ('=', Some('=')) => (Tok::EqEq, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('=', _) => (Tok::Assign, 1),
                ('>', _) => (Tok::Gt, 1),
                ('<', _) => (Tok::Lt, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('^', _) => (Tok::Caret, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                _ => return Err(ParseError::new("unexpected character", pos, &c.to_string())),
            };
            i += len;
            tok
        };
        column += i - start;
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, column },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn derivative_marker_binds_to_o() {
        assert_eq!(toks("O'[n]"), vec![Tok::ODeriv, Tok::LBracket, Tok::Ident("n".into()), Tok::RBracket, Tok::Eof]);
        assert!(tokenize("n'").is_err());
    }

    #[test]
    fn ranges_and_comparisons() {
        assert_eq!(
            toks("n=1..5, m>=n"),
            vec![
                Tok::Ident("n".into()),
                Tok::Assign,
                Tok::Int(1),
                Tok::DotDot,
                Tok::Int(5),
                Tok::Comma,
                Tok::Ident("m".into()),
                Tok::Ge,
                Tok::Ident("n".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("O[n\n  + x").unwrap();
        assert_eq!(t[0].pos, Pos { line: 1, column: 1 });
        assert_eq!(t[2].pos, Pos { line: 1, column: 3 });
        assert_eq!(t[3].pos, Pos { line: 2, column: 3 });
        assert_eq!(t.last().unwrap().pos, Pos { line: 2, column: 6 });
    }

    #[test]
    fn oversized_integer_is_an_error() {
        let e = tokenize("99999999999999999999").unwrap_err();
        assert_eq!(e.column, 1);
    }
}
