//! Recursive-descent parser.
//!
//! Precedence, loosest first: `==` (non-associative), `+ -`, `* /`, then
//! the postfix chain (`.step`, `->field`, `.bind(?x)`), then primaries.

use std::collections::HashSet;

use crate::value::{DateTime, Duration, Record, Value};

use super::ast::*;
use super::lexer::{tokenize, Keyword, Tok, Token};
use super::{ParseError, Pos};

type PResult<T> = Result<T, ParseError>;

/// Constructor-style literal forms such as `Id('/z/1')`.
const LITERAL_CTORS: &[&str] = &["Id", "Int", "Double", "Text", "DateTime", "Duration"];

pub fn parse_query(src: &str) -> PResult<QueryFile> {
    Parser::new(tokenize(src)?).query_file()
}

/// Parses a module. `path` is recorded on the result for diagnostics.
pub fn parse_module(path: &str, src: &str) -> PResult<Module> {
    Parser::new(tokenize(src)?).module(path)
}

/// Parses a single literal value: any Table-style literal, a negative
/// number, or a record literal whose field values are themselves literals.
/// Repeated record field names accumulate values.
pub fn parse_literal(src: &str) -> PResult<Value> {
    let mut p = Parser::new(tokenize(src)?);
    let v = p.literal_value()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("expected end of literal"));
    }
    Ok(v)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, i: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let j = (self.i + n).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: Keyword) -> bool {
        self.eat(&Tok::Kw(kw))
    }

    fn expect(&mut self, t: Tok, context: &str) -> PResult<Pos> {
        if *self.peek() == t {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&format!("expected {t} {context}")))
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        ParseError::new(self.pos(), format!("{what}, found {}", self.peek()))
    }

    fn ident(&mut self, context: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&format!("expected a name {context}"))),
        }
    }

    /// Field names may reuse keyword spellings (`end`, `base`, ...).
    fn field_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            Tok::Kw(k) => {
                self.bump();
                Ok(k.as_str().to_string())
            }
            _ => Err(self.unexpected("expected a field name")),
        }
    }

    // ---- files ----

    fn imports(&mut self) -> PResult<Vec<Import>> {
        let mut out = Vec::new();
        while *self.peek() == Tok::Kw(Keyword::Import) {
            let pos = self.bump().pos;
            let path = match self.bump().tok {
                Tok::Str(s) => s,
                _ => return Err(ParseError::new(pos, "expected a quoted module path after 'import'")),
            };
            let alias = if self.eat_kw(Keyword::Into) {
                Some(self.ident("after 'into'")?)
            } else {
                None
            };
            out.push(Import {
                path,
                alias,
                loc: Loc(pos),
            });
        }
        Ok(out)
    }

    fn top_level_defs(&mut self) -> PResult<Vec<Def>> {
        let mut defs = Vec::new();
        loop {
            match self.peek() {
                Tok::Kw(Keyword::Def) | Tok::Kw(Keyword::External) => {
                    let pos = self.pos();
                    let def = self.def(false)?;
                    if matches!(def, Def::Var { .. } | Def::Collection { .. }) {
                        return Err(ParseError::new(
                            pos,
                            "variable and collection definitions are only allowed inside blocks",
                        ));
                    }
                    defs.push(def);
                }
                Tok::Kw(Keyword::Require) if *self.peek_at(1) == Tok::Kw(Keyword::Def) => {
                    return Err(ParseError::new(
                        self.pos(),
                        "collection definitions are only allowed inside blocks",
                    ));
                }
                Tok::Kw(Keyword::Import) => {
                    return Err(ParseError::new(self.pos(), "imports must precede definitions"));
                }
                _ => return Ok(defs),
            }
        }
    }

    fn query_file(&mut self) -> PResult<QueryFile> {
        let imports = self.imports()?;
        let definitions = self.top_level_defs()?;
        if *self.peek() == Tok::Eof {
            return Err(ParseError::new(self.pos(), "empty query"));
        }
        let body = self.expr()?;
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("expected end of query"));
        }
        Ok(QueryFile {
            imports,
            definitions,
            body,
        })
    }

    fn module(&mut self, path: &str) -> PResult<Module> {
        let imports = self.imports()?;
        let definitions = self.top_level_defs()?;
        if *self.peek() != Tok::Eof {
            return Err(ParseError::new(self.pos(), "top-level path not allowed in module"));
        }
        Ok(Module {
            path: path.to_string(),
            imports,
            definitions,
        })
    }

    // ---- definitions ----

    /// Parses a definition starting at `def` or `external`. `required` is set
    /// when a leading `require` has already been consumed.
    fn def(&mut self, required: bool) -> PResult<Def> {
        let pos = self.pos();
        if self.eat_kw(Keyword::External) {
            if required {
                return Err(ParseError::new(pos, "only collection definitions can be required"));
            }
            return self.external_def(pos);
        }
        self.expect(Tok::Kw(Keyword::Def), "")?;
        if required && !matches!(self.peek(), Tok::Coll(_)) {
            return Err(ParseError::new(pos, "only collection definitions can be required"));
        }
        match self.peek().clone() {
            Tok::Var(name) => {
                self.bump();
                if matches!(name.as_str(), "cur" | "root" | "params") {
                    return Err(ParseError::new(pos, format!("'?{name}' cannot be redefined")));
                }
                let value = self.expr()?;
                Ok(Def::Var { name, value })
            }
            Tok::Coll(name) => {
                self.bump();
                let value = self.expr()?;
                Ok(Def::Collection {
                    name,
                    value,
                    required,
                })
            }
            Tok::Kw(Keyword::Base) => {
                self.bump();
                self.function(FunctionKind::Base, pos)
            }
            Tok::Kw(Keyword::Recur) => {
                self.bump();
                if !self.eat(&Tok::Lt) {
                    return Err(ParseError::new(
                        self.pos(),
                        "recur requires a bound, e.g. 'recur<10>'",
                    ));
                }
                let bound_pos = self.pos();
                let bound = match self.bump().tok {
                    Tok::Int(n) if n >= 1 && n <= u32::MAX as u64 => n as u32,
                    _ => {
                        return Err(ParseError::new(
                            bound_pos,
                            "recursion bound must be a positive integer",
                        ))
                    }
                };
                self.expect(Tok::Gt, "to close the recursion bound")?;
                self.function(FunctionKind::Recur(bound), pos)
            }
            Tok::Ident(_) => self.function(FunctionKind::Plain, pos),
            _ => Err(self.unexpected("expected a variable, collection or function name after 'def'")),
        }
    }

    fn function(&mut self, kind: FunctionKind, pos: Pos) -> PResult<Def> {
        let name = self.ident("for the function")?;
        let params = self.params()?;
        if *self.peek() != Tok::LBrace {
            return Err(self.unexpected("expected '{' to open the function body"));
        }
        let brace = self.bump().pos;
        let body = self.brace(brace)?;
        Ok(Def::Function(FunctionDef {
            name,
            kind,
            params,
            body,
            loc: Loc(pos),
        }))
    }

    fn external_def(&mut self, pos: Pos) -> PResult<Def> {
        self.expect(Tok::Kw(Keyword::Def), "after 'external'")?;
        let expr = self.eat_kw(Keyword::Expr);
        let name = self.ident("for the external function")?;
        let params = self.params()?;
        self.expect(Tok::Kw(Keyword::ImplementedBy), "after external function parameters")?;
        let implemented_by = match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                s
            }
            _ => return Err(self.unexpected("expected a quoted name after 'implemented_by'")),
        };
        Ok(Def::External(ExternalDef {
            name,
            params,
            implemented_by,
            expr,
            loc: Loc(pos),
        }))
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect(Tok::LParen, "to open the parameter list")?;
        let mut params = Vec::new();
        let mut seen = HashSet::new();
        if self.eat(&Tok::RParen) {
            return Ok(params);
        }
        loop {
            let pos = self.pos();
            let param = match self.bump().tok {
                Tok::Var(n) => Param::Var(n),
                Tok::Coll(n) => Param::Collection(n),
                other => {
                    return Err(ParseError::new(
                        pos,
                        format!("expected a '?variable' or '$collection' parameter, found {other}"),
                    ))
                }
            };
            if !seen.insert(param.name().to_string()) {
                return Err(ParseError::new(
                    pos,
                    format!("duplicate parameter '{}'", param.name()),
                ));
            }
            params.push(param);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RParen, "to close the parameter list")?;
            return Ok(params);
        }
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<PathExpr> {
        let left = self.additive()?;
        if *self.peek() == Tok::EqEq {
            self.bump();
            let right = self.additive()?;
            if *self.peek() == Tok::EqEq {
                return Err(ParseError::new(
                    self.pos(),
                    "'==' cannot be chained; add parentheses",
                ));
            }
            self.reject_unsupported()?;
            return Ok(PathExpr::Compare {
                left: Box::new(left),
                right: Box::new(right),
            });
        }
        self.reject_unsupported()?;
        Ok(left)
    }

    fn reject_unsupported(&self) -> PResult<()> {
        match self.peek() {
            t @ (Tok::NotEq | Tok::Lt | Tok::Gt | Tok::Le | Tok::Ge) => Err(ParseError::new(
                self.pos(),
                format!("operator {t} is not supported; only '==' is implemented"),
            )),
            _ => Ok(()),
        }
    }

    fn additive(&mut self) -> PResult<PathExpr> {
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(left),
            };
            let pos = self.bump().pos;
            let right = self.multiplicative()?;
            left = PathExpr::Arith {
                op,
                left: Box::new(left),
                right: Box::new(right),
                loc: Loc(pos),
            };
        }
    }

    fn multiplicative(&mut self) -> PResult<PathExpr> {
        let mut left = self.chain()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                Tok::Pred(_) if self.pred_is_division() => {
                    self.split_predicate()?;
                    ArithOp::Div
                }
                _ => return Ok(left),
            };
            let pos = self.bump().pos;
            let right = self.chain()?;
            left = PathExpr::Arith {
                op,
                left: Box::new(left),
                right: Box::new(right),
                loc: Loc(pos),
            };
        }
    }

    /// In operator position, `/Name(` or `/ns::` can only be a division
    /// followed by a call; any other `/label` is left for the caller (e.g. a
    /// classify case condition that starts with a predicate).
    fn pred_is_division(&self) -> bool {
        match self.peek() {
            Tok::Pred(label) => {
                !label[1..].contains('/')
                    && matches!(self.peek_at(1), Tok::LParen | Tok::ColonColon)
            }
            _ => false,
        }
    }

    /// Rewrites the current `Pred` token into `Slash` followed by the tokens
    /// of its label text.
    fn split_predicate(&mut self) -> PResult<()> {
        let Token { tok, pos } = self.toks[self.i].clone();
        let Tok::Pred(label) = tok else {
            return Ok(());
        };
        let mut rest = tokenize(&label[1..])?;
        rest.pop(); // Eof
        for t in &mut rest {
            t.pos = Pos {
                line: pos.line,
                col: pos.col + t.pos.col,
            };
        }
        self.toks[self.i] = Token {
            tok: Tok::Slash,
            pos,
        };
        self.toks.splice(self.i + 1..self.i + 1, rest);
        Ok(())
    }

    fn chain(&mut self) -> PResult<PathExpr> {
        let mut e = self.primary()?;
        let mut in_arrow_run = false;
        loop {
            match self.peek() {
                Tok::Dot => {
                    self.bump();
                    if self.eat_kw(Keyword::Bind) {
                        self.expect(Tok::LParen, "after 'bind'")?;
                        let var = match self.peek().clone() {
                            Tok::Var(v) if !matches!(v.as_str(), "cur" | "root" | "params") => {
                                self.bump();
                                v
                            }
                            _ => return Err(self.unexpected("expected a '?variable' to bind")),
                        };
                        self.expect(Tok::RParen, "to close 'bind'")?;
                        e = PathExpr::Bind {
                            body: Box::new(e),
                            var,
                        };
                    } else {
                        let right = self.primary()?;
                        e = PathExpr::dot(e, right);
                    }
                    in_arrow_run = false;
                }
                Tok::Arrow => {
                    self.bump();
                    let name = self.field_name()?;
                    match (&mut e, in_arrow_run) {
                        (PathExpr::FieldAccess { fields, .. }, true) => fields.push(name),
                        _ => {
                            e = PathExpr::FieldAccess {
                                base: Box::new(e),
                                fields: vec![name],
                            }
                        }
                    }
                    in_arrow_run = true;
                }
                _ => return Ok(e),
            }
        }
    }

    fn primary(&mut self) -> PResult<PathExpr> {
        let Token { tok, pos } = self.bump();
        Ok(match tok {
            Tok::At(a) => match a.as_str() {
                "entities" => PathExpr::Entities,
                "roots" => PathExpr::Roots,
                "merge" => {
                    return Err(ParseError::new(pos, "'@merge' is only valid as a record field name"))
                }
                _ => return Err(ParseError::new(pos, format!("unknown source '@{a}'"))),
            },
            Tok::Pred(label) => PathExpr::Predicate {
                label,
                direction: Direction::Forward,
            },
            Tok::RevPred(label) => PathExpr::Predicate {
                label,
                direction: Direction::Reverse,
            },
            Tok::Int(u) => PathExpr::Literal(Value::Int(
                i64::try_from(u)
                    .map_err(|_| ParseError::new(pos, "integer literal out of range"))?,
            )),
            Tok::Double(d) => PathExpr::Literal(Value::Double(d)),
            Tok::Str(s) => PathExpr::Literal(Value::String(s)),
            Tok::Kw(Keyword::True) => PathExpr::Literal(Value::Bool(true)),
            Tok::Kw(Keyword::False) => PathExpr::Literal(Value::Bool(false)),
            Tok::Minus => PathExpr::Literal(self.negative_number(pos)?),
            Tok::Var(n) => match n.as_str() {
                "cur" => PathExpr::Cur,
                "root" => PathExpr::Root,
                "params" => PathExpr::Params,
                _ => PathExpr::Var(n),
            },
            Tok::Coll(n) => PathExpr::Coll(n),
            Tok::LBracket => {
                let body = self.expr()?;
                self.expect(Tok::RBracket, "to close '['")?;
                PathExpr::Where(Box::new(body))
            }
            Tok::LParen => self.paren(pos)?,
            Tok::LBrace => self.brace(pos)?,
            Tok::Kw(kw @ (Keyword::Require | Keyword::Prohibit | Keyword::Optional)) => {
                self.expect(Tok::LParen, &format!("after '{}'", kw.as_str()))?;
                let body = Box::new(self.expr()?);
                self.expect(Tok::RParen, &format!("to close '{}('", kw.as_str()))?;
                match kw {
                    Keyword::Require => PathExpr::Require(body),
                    Keyword::Prohibit => PathExpr::Prohibit(body),
                    _ => PathExpr::Optional(body),
                }
            }
            Tok::Kw(Keyword::Classify) => self.classify()?,
            Tok::Ident(name) => self.ident_expr(name, pos)?,
            Tok::Kw(Keyword::Bind) => {
                return Err(ParseError::new(pos, "'bind(...)' must follow a '.'"))
            }
            Tok::Kw(Keyword::Def) => {
                return Err(ParseError::new(pos, "definitions are only allowed inside blocks"))
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("expected a path expression, found {other}"),
                ))
            }
        })
    }

    fn negative_number(&mut self, minus: Pos) -> PResult<Value> {
        match self.bump().tok {
            Tok::Int(u) if u <= 1u64 << 63 => Ok(Value::Int((u as i128).wrapping_neg() as i64)),
            Tok::Int(_) => Err(ParseError::new(minus, "integer literal out of range")),
            Tok::Double(d) => Ok(Value::Double(-d)),
            _ => Err(ParseError::new(
                minus,
                "unary '-' only applies to numeric literals",
            )),
        }
    }

    fn paren(&mut self, open: Pos) -> PResult<PathExpr> {
        if *self.peek() == Tok::RParen {
            return Err(ParseError::new(open, "empty parentheses"));
        }
        let first = self.expr()?;
        if self.eat(&Tok::RParen) {
            return Ok(first);
        }
        self.expect(Tok::Comma, "or ')' after parenthesized path")?;
        let mut items = vec![first];
        loop {
            if self.eat(&Tok::RParen) {
                break;
            }
            items.push(self.expr()?);
            if !self.eat(&Tok::Comma) {
                self.expect(Tok::RParen, "to close the tuple")?;
                break;
            }
        }
        Ok(PathExpr::Tuple(items))
    }

    /// After `{`: decides between a record constructor and a block.
    fn brace(&mut self, open: Pos) -> PResult<PathExpr> {
        if *self.peek() == Tok::RBrace {
            return Err(ParseError::new(open, "empty braces"));
        }
        if self.looks_like_record() {
            self.record()
        } else {
            self.block()
        }
    }

    fn looks_like_record(&self) -> bool {
        let is_name = |t: &Tok| {
            matches!(t, Tok::Ident(_) | Tok::Kw(_)) || *t == Tok::At("merge".to_string())
        };
        if is_name(self.peek()) && *self.peek_at(1) == Tok::Colon {
            return true;
        }
        *self.peek() == Tok::Kw(Keyword::Require)
            && is_name(self.peek_at(1))
            && *self.peek_at(2) == Tok::Colon
    }

    fn record(&mut self) -> PResult<PathExpr> {
        let mut fields = Vec::new();
        let mut seen = HashSet::new();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(PathExpr::Record(fields));
            }
            let pos = self.pos();
            let required =
                *self.peek() == Tok::Kw(Keyword::Require) && *self.peek_at(1) != Tok::Colon;
            if required {
                self.bump();
                if *self.peek() == Tok::Kw(Keyword::Require) && *self.peek_at(1) != Tok::Colon {
                    return Err(ParseError::new(self.pos(), "duplicate 'require' on field"));
                }
            }
            let name = if *self.peek() == Tok::At("merge".to_string()) {
                self.bump();
                FieldName::Merge
            } else {
                let name_pos = self.pos();
                let n = self.field_name()?;
                if !seen.insert(n.clone()) {
                    return Err(ParseError::new(name_pos, format!("duplicate field '{n}'")));
                }
                FieldName::Named(n)
            };
            self.expect(Tok::Colon, "after field name")?;
            let value = self.expr()?;
            fields.push(Field {
                name,
                required,
                value,
                loc: Loc(pos),
            });
        }
    }

    fn block(&mut self) -> PResult<PathExpr> {
        let mut elems = Vec::new();
        loop {
            let el = match self.peek() {
                Tok::Kw(Keyword::Def) | Tok::Kw(Keyword::External) => {
                    BlockElement::Def(self.def(false)?)
                }
                Tok::Kw(Keyword::Require) if *self.peek_at(1) == Tok::Kw(Keyword::Def) => {
                    self.bump();
                    BlockElement::Def(self.def(true)?)
                }
                _ => BlockElement::Path(self.expr()?),
            };
            elems.push(el);
            if self.eat(&Tok::Semi) {
                if *self.peek() == Tok::RBrace {
                    break;
                }
                continue;
            }
            if *self.peek() != Tok::RBrace {
                return Err(self.unexpected("expected ';' or '}' in block"));
            }
            break;
        }
        let close = self.bump().pos;
        if matches!(elems.last(), Some(BlockElement::Def(_))) {
            return Err(ParseError::new(
                close,
                "a block must end with a path, not a definition",
            ));
        }
        Ok(PathExpr::Block(elems))
    }

    fn classify(&mut self) -> PResult<PathExpr> {
        let open = self.expect(Tok::LBrace, "after 'classify'")?;
        let mut cases = Vec::new();
        let mut otherwise: Option<Box<PathExpr>> = None;
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            }
            if otherwise.is_some() {
                return Err(self.unexpected("expected '}' after the 'else' case"));
            }
            if self.eat_kw(Keyword::Else) {
                self.eat(&Tok::Colon);
                otherwise = Some(Box::new(self.expr()?));
                continue;
            }
            let condition = self.expr()?;
            self.expect(Tok::Colon, "after classify condition")?;
            let body = self.expr()?;
            cases.push(ClassifyCase { condition, body });
        }
        if cases.is_empty() {
            return Err(ParseError::new(open, "classify needs at least one case"));
        }
        Ok(PathExpr::Classify { cases, otherwise })
    }

    fn ident_expr(&mut self, name: String, pos: Pos) -> PResult<PathExpr> {
        if self.eat(&Tok::ColonColon) {
            let fname = self.ident("after '::'")?;
            let args = self.call_args()?;
            return Ok(PathExpr::Call {
                namespace: Some(name),
                name: fname,
                args,
                loc: Loc(pos),
            });
        }
        if *self.peek() != Tok::LParen {
            return Err(ParseError::new(
                pos,
                format!("expected '(' after '{name}'"),
            ));
        }
        if LITERAL_CTORS.contains(&name.as_str()) {
            return Ok(PathExpr::Literal(self.literal_ctor(&name, pos)?));
        }
        if let Some(kind) = AggregateKind::from_name(&name) {
            return self.aggregate(kind, pos);
        }
        let args = self.call_args()?;
        Ok(PathExpr::Call {
            namespace: None,
            name,
            args,
            loc: Loc(pos),
        })
    }

    fn call_args(&mut self) -> PResult<Vec<PathExpr>> {
        self.expect(Tok::LParen, "to open the argument list")?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if !self.eat(&Tok::Comma) {
                self.expect(Tok::RParen, "to close the argument list")?;
                return Ok(args);
            }
        }
    }

    fn aggregate(&mut self, kind: AggregateKind, pos: Pos) -> PResult<PathExpr> {
        self.expect(Tok::LParen, "")?;
        let (min, max) = kind.positional_args();
        let mut args = Vec::new();
        let mut keys = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                if args.len() < min || (args.len() < max && !kind.takes_keys()) {
                    args.push(self.expr()?);
                } else if kind.takes_keys() {
                    let descending = self.eat(&Tok::Minus);
                    keys.push(SortKey {
                        path: self.expr()?,
                        descending,
                    });
                } else {
                    return Err(ParseError::new(
                        self.pos(),
                        format!("too many arguments to {}", kind.name()),
                    ));
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, &format!("to close {}(", kind.name()))?;
        if args.len() < min {
            let expected = if min == max {
                format!("{min}")
            } else {
                format!("{min} to {max}")
            };
            return Err(ParseError::new(
                pos,
                format!("{} expects {expected} argument(s)", kind.name()),
            ));
        }
        Ok(PathExpr::Aggregate {
            kind,
            args,
            keys,
            loc: Loc(pos),
        })
    }

    // ---- literals ----

    fn literal_ctor(&mut self, name: &str, pos: Pos) -> PResult<Value> {
        self.expect(Tok::LParen, "")?;
        let mut strs = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Str(s) => {
                    self.bump();
                    strs.push(s);
                }
                _ => {
                    return Err(self.unexpected(&format!(
                        "{name}(...) takes quoted string arguments"
                    )))
                }
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RParen, &format!("to close {name}("))?;
        make_literal(name, &strs).map_err(|m| ParseError::new(pos, m))
    }

    fn literal_value(&mut self) -> PResult<Value> {
        let Token { tok, pos } = self.bump();
        match tok {
            Tok::Int(u) => i64::try_from(u)
                .map(Value::Int)
                .map_err(|_| ParseError::new(pos, "integer literal out of range")),
            Tok::Double(d) => Ok(Value::Double(d)),
            Tok::Minus => self.negative_number(pos),
            Tok::Str(s) => Ok(Value::String(s)),
            Tok::Kw(Keyword::True) => Ok(Value::Bool(true)),
            Tok::Kw(Keyword::False) => Ok(Value::Bool(false)),
            Tok::Ident(name) if LITERAL_CTORS.contains(&name.as_str()) => {
                self.literal_ctor(&name, pos)
            }
            Tok::LBrace => {
                let mut rec = Record::new();
                while !self.eat(&Tok::RBrace) {
                    let name = self.field_name()?;
                    self.expect(Tok::Colon, "after field name")?;
                    let v = self.literal_value()?;
                    rec.push(&name, v);
                }
                Ok(Value::Record(rec))
            }
            other => Err(ParseError::new(pos, format!("expected a literal, found {other}"))),
        }
    }
}

fn make_literal(name: &str, args: &[String]) -> Result<Value, String> {
    let want = if name == "Text" { 2 } else { 1 };
    if args.len() != want {
        return Err(format!("{name}(...) takes {want} argument(s)"));
    }
    let s = &args[0];
    Ok(match name {
        "Id" => Value::Id(s.clone()),
        "Int" => Value::Int(
            s.trim()
                .parse()
                .map_err(|_| format!("malformed Int literal '{s}'"))?,
        ),
        "Double" => Value::Double(
            s.trim()
                .parse()
                .map_err(|_| format!("malformed Double literal '{s}'"))?,
        ),
        "Text" => Value::text(s.clone(), args[1].clone()),
        "DateTime" => Value::DateTime(
            DateTime::parse(s).map_err(|e| format!("malformed DateTime literal: {e}"))?,
        ),
        "Duration" => Value::Duration(
            Duration::parse(s).map_err(|e| format!("malformed Duration literal: {e}"))?,
        ),
        _ => unreachable!("not a literal constructor: {name}"),
    })
}
