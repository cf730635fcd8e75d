//! Tokenizer for query and module source text.

use std::fmt;

use super::{ParseError, Pos};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Kw(Keyword),
    /// `/label`, an outgoing edge traversal.
    Pred(String),
    /// `!/label`, an incoming edge traversal.
    RevPred(String),
    /// `?name`
    Var(String),
    /// `$name` or `%name`; both sigils name the same collection.
    Coll(String),
    /// `@name`
    At(String),
    /// Unsigned integer literal. Negation is applied by the parser so that
    /// `i64::MIN` can be written.
    Int(u64),
    Double(f64),
    Str(String),
    Dot,
    Comma,
    Semi,
    Colon,
    ColonColon,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    EqEq,
    NotEq,
    Lt,
    Gt,
    Le,
    Ge,
    Minus,
    Plus,
    Star,
    Slash,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Import,
    Into,
    Def,
    Base,
    Recur,
    External,
    ImplementedBy,
    Expr,
    Require,
    Prohibit,
    Optional,
    Classify,
    Else,
    Bind,
    True,
    False,
}

impl Keyword {
    fn from_ident(s: &str) -> Option<Keyword> {
        Some(match s {
            "import" => Keyword::Import,
            "into" => Keyword::Into,
            "def" => Keyword::Def,
            "base" => Keyword::Base,
            "recur" => Keyword::Recur,
            "external" => Keyword::External,
            "implemented_by" => Keyword::ImplementedBy,
            "expr" => Keyword::Expr,
            "require" => Keyword::Require,
            "prohibit" => Keyword::Prohibit,
            "optional" => Keyword::Optional,
            "classify" => Keyword::Classify,
            "else" => Keyword::Else,
            "bind" => Keyword::Bind,
            "true" => Keyword::True,
            "false" => Keyword::False,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Import => "import",
            Keyword::Into => "into",
            Keyword::Def => "def",
            Keyword::Base => "base",
            Keyword::Recur => "recur",
            Keyword::External => "external",
            Keyword::ImplementedBy => "implemented_by",
            Keyword::Expr => "expr",
            Keyword::Require => "require",
            Keyword::Prohibit => "prohibit",
            Keyword::Optional => "optional",
            Keyword::Classify => "classify",
            Keyword::Else => "else",
            Keyword::Bind => "bind",
            Keyword::True => "true",
            Keyword::False => "false",
        }
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Kw(k) => write!(f, "keyword '{}'", k.as_str()),
            Tok::Pred(p) => write!(f, "predicate '{p}'"),
            Tok::RevPred(p) => write!(f, "predicate '!{p}'"),
            Tok::Var(v) => write!(f, "'?{v}'"),
            Tok::Coll(c) => write!(f, "'${c}'"),
            Tok::At(a) => write!(f, "'@{a}'"),
            Tok::Int(i) => write!(f, "integer {i}"),
            Tok::Double(d) => write!(f, "number {d}"),
            Tok::Str(_) => f.write_str("string literal"),
            Tok::Eof => f.write_str("end of input"),
            other => write!(f, "'{}'", punct_text(other)),
        }
    }
}

fn punct_text(t: &Tok) -> &'static str {
    match t {
        Tok::Dot => ".",
        Tok::Comma => ",",
        Tok::Semi => ";",
        Tok::Colon => ":",
        Tok::ColonColon => "::",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::Arrow => "->",
        Tok::EqEq => "==",
        Tok::NotEq => "!=",
        Tok::Lt => "<",
        Tok::Gt => ">",
        Tok::Le => "<=",
        Tok::Ge => ">=",
        Tok::Minus => "-",
        Tok::Plus => "+",
        Tok::Star => "*",
        Tok::Slash => "/",
        _ => "?",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

struct Lexer<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: u32,
    col: u32,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map(|&(i, _)| i).unwrap_or(self.src.len())
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn ident(&mut self) -> String {
        let start = self.offset();
        while self.peek().is_some_and(is_ident_char) {
            self.bump();
        }
        let end = self.offset();
        self.src[start..end].to_string()
    }

    /// Reads a predicate label after its leading `/`. Labels may have
    /// several `/`-separated segments, each starting with a letter or `_`.
    fn predicate_label(&mut self) -> String {
        let mut label = String::from("/");
        label.push_str(&self.ident());
        while self.peek() == Some('/') && self.peek2().is_some_and(is_ident_start) {
            self.bump();
            label.push('/');
            label.push_str(&self.ident());
        }
        label
    }

    fn sigil_name(&mut self, sigil: char, pos: Pos) -> Result<String, ParseError> {
        if !self.peek().is_some_and(is_ident_start) {
            return Err(ParseError::new(pos, format!("expected a name after '{sigil}'")));
        }
        Ok(self.ident())
    }

    fn string(&mut self, quote: char, pos: Pos) -> Result<String, ParseError> {
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(ParseError::new(pos, "unterminated string literal")),
                Some(c) if c == quote => return Ok(out),
                Some('\\') => {
                    let esc_pos = self.pos();
                    match self.bump() {
                        Some('n') => out.push('\n'),
                        Some('t') => out.push('\t'),
                        Some('r') => out.push('\r'),
                        Some('\\') => out.push('\\'),
                        Some('\'') => out.push('\''),
                        Some('"') => out.push('"'),
                        Some('u') => {
                            if self.bump() != Some('{') {
                                return Err(ParseError::new(esc_pos, "malformed \\u escape"));
                            }
                            let mut hex = String::new();
                            loop {
                                match self.bump() {
                                    Some('}') => break,
                                    Some(c) if c.is_ascii_hexdigit() && hex.len() < 6 => {
                                        hex.push(c)
                                    }
                                    _ => {
                                        return Err(ParseError::new(
                                            esc_pos,
                                            "malformed \\u escape",
                                        ))
                                    }
                                }
                            }
                            let c = u32::from_str_radix(&hex, 16)
                                .ok()
                                .and_then(char::from_u32)
                                .ok_or_else(|| ParseError::new(esc_pos, "invalid \\u escape"))?;
                            out.push(c);
                        }
                        None => return Err(ParseError::new(pos, "unterminated string literal")),
                        Some(c) => {
                            return Err(ParseError::new(esc_pos, format!("unknown escape '\\{c}'")))
                        }
                    }
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn number(&mut self, pos: Pos) -> Result<Tok, ParseError> {
        let start = self.offset();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        let mut is_double = false;
        if self.peek() == Some('.') && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
            is_double = true;
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            is_double = true;
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return Err(ParseError::new(pos, "malformed number: missing exponent digits"));
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
        }
        if self.peek().is_some_and(is_ident_char) {
            return Err(ParseError::new(pos, "malformed number"));
        }
        let text = &self.src[start..self.offset()];
        if is_double {
            text.parse()
                .map(Tok::Double)
                .map_err(|_| ParseError::new(pos, format!("malformed number '{text}'")))
        } else {
            text.parse()
                .map(Tok::Int)
                .map_err(|_| ParseError::new(pos, format!("integer '{text}' out of range")))
        }
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek2() == Some('/') => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let pos = self.pos();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let tok = self.number(pos)?;
            return Ok(Token { tok, pos });
        }
        let Some(c) = self.bump() else {
            return Ok(Token { tok: Tok::Eof, pos });
        };
        let tok = match c {
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' if self.peek() == Some(':') => {
                self.bump();
                Tok::ColonColon
            }
            ':' => Tok::Colon,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '-' if self.peek() == Some('>') => {
                self.bump();
                Tok::Arrow
            }
            '-' => Tok::Minus,
            '=' if self.peek() == Some('=') => {
                self.bump();
                Tok::EqEq
            }
            '!' if self.peek() == Some('=') => {
                self.bump();
                Tok::NotEq
            }
            '!' if self.peek() == Some('/') && self.peek2().is_some_and(is_ident_start) => {
                self.bump();
                Tok::RevPred(self.predicate_label())
            }
            '<' if self.peek() == Some('=') => {
                self.bump();
                Tok::Le
            }
            '<' => Tok::Lt,
            '>' if self.peek() == Some('=') => {
                self.bump();
                Tok::Ge
            }
            '>' => Tok::Gt,
            '/' if self.peek().is_some_and(is_ident_start) => Tok::Pred(self.predicate_label()),
            '/' => Tok::Slash,
            '?' => Tok::Var(self.sigil_name('?', pos)?),
            '$' => Tok::Coll(self.sigil_name('$', pos)?),
            '%' => Tok::Coll(self.sigil_name('%', pos)?),
            '@' => Tok::At(self.sigil_name('@', pos)?),
            '\'' | '"' => Tok::Str(self.string(c, pos)?),
            c if is_ident_start(c) => {
                let mut name = c.to_string();
                name.push_str(&self.ident());
                match Keyword::from_ident(&name) {
                    Some(kw) => Tok::Kw(kw),
                    None => Tok::Ident(name),
                }
            }
            c => return Err(ParseError::new(pos, format!("invalid character '{c}'"))),
        };
        Ok(Token { tok, pos })
    }
}

/// Tokenizes `src`. The final token is always [`Tok::Eof`].
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer {
        src,
        chars: src.char_indices().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        let t = lx.next_token()?;
        let eof = t.tok == Tok::Eof;
        out.push(t);
        if eof {
            return Ok(out);
        }
    }
}
