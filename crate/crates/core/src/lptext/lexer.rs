use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Period,
    Neck,
    Colon,
    Star,
    Plus,
    Minus,
    Hash,
    Bar,
    Gt,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(i) => format!("'{i}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Period => "'.'".into(),
            Tok::Neck => "':-'".into(),
            Tok::Colon => "':'".into(),
            Tok::Star => "'*'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Hash => "'#'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Gt => "'>'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Splits source text into tokens. Lines and columns are 1-based and count
/// characters. `%` starts a comment running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |tok: Tok, out: &mut Vec<Spanned>| out.push(Spanned { tok, line: start_line, column: start_col });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if word.bytes().all(|b| b.is_ascii_digit()) {
                match word.parse::<i64>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => {
                        return Err(ParseError::new(start_line, start_col, "integer in range", &word));
                    }
                }
            } else {
                Tok::Ident(word)
            };
            push(tok, &mut out);
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Period,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '#' => Tok::Hash,
            '|' => Tok::Bar,
            '>' => Tok::Gt,
            '-' => {
                if chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    let start = i;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    col += i - start;
                    let v = word
                        .parse::<i64>()
                        .map_err(|_| ParseError::new(start_line, start_col, "integer in range", &word))?;
                    push(Tok::Int(v), &mut out);
                    continue;
                }
                Tok::Minus
            }
            ':' => {
                if chars.get(i + 1) == Some(&'-') {
                    i += 1;
                    col += 1;
                    Tok::Neck
                } else {
                    Tok::Colon
                }
            }
            other => return Err(ParseError::new(line, col, "a token", &other.to_string())),
        };
        i += 1;
        col += 1;
        push(tok, &mut out);
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}
