//! Line-oriented interactive session.
//!
//! Input is read in blocks terminated by a blank line (or end of input).
//! A block starting with `:` is a command and ends as soon as its braces
//! balance; anything else is a query.

use std::io::{self, BufRead, Write};

use crate::eval::{eval_query, QueryInputs};
use crate::graph::Graph;
use crate::stdlib::ExternalRegistry;
use crate::syntax::resolve::{link, ModuleLoader};
use crate::syntax::{parse_literal, parse_query};
use crate::value::Value;

use super::render_text;

const HELP: &str = "\
Enter a query followed by a blank line. Commands:
  :params <record>   set ?params (no argument clears it)
  :help              show this message
  :quit              leave the session
";

pub struct Repl<L> {
    pub graph: Graph,
    pub loader: L,
    pub registry: ExternalRegistry,
    pub params: Option<Value>,
    /// Print a prompt before each block.
    pub prompt: bool,
}

impl<L: ModuleLoader> Repl<L> {
    pub fn new(graph: Graph, loader: L, registry: ExternalRegistry) -> Self {
        Repl {
            graph,
            loader,
            registry,
            params: None,
            prompt: false,
        }
    }

    pub fn run(&mut self, input: &mut dyn BufRead, out: &mut dyn Write) -> io::Result<()> {
        loop {
            if self.prompt {
                write!(out, "pq> ")?;
                out.flush()?;
            }
            let Some(block) = read_block(input, out, self.prompt)? else {
                return Ok(());
            };
            let text = block.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(cmd) = text.strip_prefix(':') {
                if !self.command(cmd, out)? {
                    return Ok(());
                }
                continue;
            }
            match self.evaluate(text) {
                Ok(s) => out.write_all(s.as_bytes())?,
                Err(e) => writeln!(out, "error: {e}")?,
            }
        }
    }

    /// Returns false when the session should end.
    fn command(&mut self, cmd: &str, out: &mut dyn Write) -> io::Result<bool> {
        let (name, rest) = cmd.split_once(char::is_whitespace).unwrap_or((cmd, ""));
        match name {
            "quit" | "q" => return Ok(false),
            "help" => out.write_all(HELP.as_bytes())?,
            "params" if rest.trim().is_empty() => {
                self.params = None;
                writeln!(out, "params cleared")?;
            }
            "params" => match parse_literal(rest.trim()) {
                Ok(v) if v.is_record() => {
                    self.params = Some(v);
                    writeln!(out, "params set")?;
                }
                Ok(_) => writeln!(out, "error: params must be a Record")?,
                Err(e) => writeln!(out, "error: {e}")?,
            },
            other => writeln!(out, "error: unknown command ':{other}' (try :help)")?,
        }
        Ok(true)
    }

    fn evaluate(&self, text: &str) -> Result<String, String> {
        let query = parse_query(text).map_err(|e| e.to_string())?;
        let program = link(&query, "<repl>", &self.loader, &self.registry).map_err(|e| e.to_string())?;
        let inputs = QueryInputs {
            params: self.params.clone(),
            roots: None,
        };
        let result = eval_query(&program, &self.graph, &inputs).map_err(|e| e.to_string())?;
        Ok(render_text(&result, None))
    }
}

/// Net `{` minus `}` outside string literals.
fn brace_depth(text: &str) -> i32 {
    let mut depth = 0;
    let mut quote = None;
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        match (quote, c) {
            (Some(_), '\\') => {
                chars.next();
            }
            (Some(q), c) if c == q => quote = None,
            (Some(_), _) => {}
            (None, '\'' | '"') => quote = Some(c),
            (None, '{') => depth += 1,
            (None, '}') => depth -= 1,
            _ => {}
        }
    }
    depth
}

/// Lines up to a blank line; `None` at end of input with nothing read.
fn read_block(input: &mut dyn BufRead, out: &mut dyn Write, prompt: bool) -> io::Result<Option<String>> {
    let mut block = String::new();
    let mut saw_any = false;
    loop {
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Ok(saw_any.then_some(block));
        }
        saw_any = true;
        if line.trim().is_empty() {
            return Ok(Some(block));
        }
        block.push_str(&line);
        // A command is done once its braces close; no blank line needed.
        if block.trim_start().starts_with(':') && brace_depth(&block) <= 0 {
            return Ok(Some(block));
        }
        if prompt {
            write!(out, "..> ")?;
            out.flush()?;
        }
    }
}
