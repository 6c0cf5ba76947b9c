use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    If,
    Is,
    Not,
    And,
    Or,
    Then,
}

impl Keyword {
    fn lookup(word: &str) -> Option<Keyword> {
        const TABLE: [(&str, Keyword); 6] = [
            ("IF", Keyword::If),
            ("IS", Keyword::Is),
            ("NOT", Keyword::Not),
            ("AND", Keyword::And),
            ("OR", Keyword::Or),
            ("THEN", Keyword::Then),
        ];
        TABLE
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(word))
            .map(|&(_, kw)| kw)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::If => "IF",
            Keyword::Is => "IS",
            Keyword::Not => "NOT",
            Keyword::And => "AND",
            Keyword::Or => "OR",
            Keyword::Then => "THEN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(String),
    Colon,
    Invalid(char),
    End,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "keyword {}", k.as_str()),
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::Invalid(c) => write!(f, "character {c:?}"),
            TokenKind::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `text` into tokens. Positions are 1-based; `first_line` offsets the
/// line numbers when the text is one line of a larger document.
pub fn tokenize(text: &str, first_line: usize) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (first_line, 1usize);
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            // a comment ends the line; a trailing End token sits where it began
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        let (start_line, start_col) = (line, column);
        let kind = if is_ident_start(c) {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if !is_ident_continue(c) {
                    break;
                }
                word.push(c);
                chars.next();
                column += 1;
            }
            match Keyword::lookup(&word) {
                Some(kw) => TokenKind::Keyword(kw),
                None => TokenKind::Ident(word),
            }
        } else {
            chars.next();
            column += 1;
            if c == ':' {
                TokenKind::Colon
            } else {
                TokenKind::Invalid(c)
            }
        };
        tokens.push(Token {
            kind,
            line: start_line,
            column: start_col,
        });
    }
    tokens.push(Token {
        kind: TokenKind::End,
        line,
        column,
    });
    tokens
}
