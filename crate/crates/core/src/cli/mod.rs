//! Command-line front end: `run`, `parse` and `repl`.

mod repl;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::eval::{eval_query, QueryInputs, QueryResult};
use crate::graph::{load_graph, Graph};
use crate::stdlib::{lookup_table, parse_cell, ExternalRegistry};
use crate::syntax::render::{dump_module, dump_query};
use crate::syntax::resolve::{file_id, link, FsLoader};
use crate::syntax::{parse_literal, parse_module, parse_query};
use crate::value::Value;

pub use repl::Repl;

#[derive(Debug, Parser)]
#[command(name = "pathquery", version, about = "Run PathQuery queries over a triple file")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a query and print the root-to-output mapping.
    Run(RunArgs),
    /// Parse a query (or module) and print its syntax tree.
    Parse(ParseArgs),
    /// Interactive session over one graph.
    Repl(ReplArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Linking {
    /// Directory searched for imported modules (repeatable).
    #[arg(long = "module-path", value_name = "DIR")]
    pub module_path: Vec<PathBuf>,
    /// Register a table-driven external function: NAME=FILE, where FILE has
    /// one TAB-separated row of literals per call (arguments, then result).
    #[arg(long, value_name = "NAME=FILE")]
    pub lookup: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Triple file (PQT).
    #[arg(long)]
    pub graph: PathBuf,
    /// Query file.
    #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
    pub query: Option<PathBuf>,
    /// Inline query text.
    #[arg(long)]
    pub expr: Option<String>,
    /// File holding one record literal, bound to `?params`.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// File with one node literal per line, output by `@roots`.
    #[arg(long)]
    pub roots: Option<PathBuf>,
    #[command(flatten)]
    pub linking: Linking,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print at most this many results (the total is still reported).
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ParseArgs {
    /// Query file.
    #[arg(long, conflicts_with_all = ["expr", "module"], required_unless_present_any = ["expr", "module"])]
    pub query: Option<PathBuf>,
    /// Inline query text.
    #[arg(long, conflicts_with = "module")]
    pub expr: Option<String>,
    /// Module file (definitions only).
    #[arg(long)]
    pub module: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplArgs {
    /// Triple file (PQT)
    #[arg(long)]
    pub graph: PathBuf,
    /// File holding one record literal, bound to `?params` until changed with `:params`
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[command(flatten)]
    pub linking: Linking,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    execute(cli, &mut stdout.lock(), &mut stderr.lock())
}

pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a, out),
        Command::Parse(a) => cmd_parse(&a, out),
        Command::Repl(a) => cmd_repl(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            1
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn read_graph(path: &Path) -> Result<Graph, String> {
    load_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn read_params(path: &Path) -> Result<Value, String> {
    let v = parse_literal(&read(path)?).map_err(|e| format!("{}:{e}", path.display()))?;
    if !v.is_record() {
        return Err(format!("{}: params must be a Record", path.display()));
    }
    Ok(v)
}

pub fn read_roots(path: &Path) -> Result<Vec<Value>, String> {
    let src = read(path)?;
    let mut roots = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v = parse_cell(t).map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        if v.is_record() {
            return Err(format!("{}:{}: a root cannot be a Record", path.display(), i + 1));
        }
        roots.push(v);
    }
    Ok(roots)
}

impl Linking {
    pub fn registry(&self) -> Result<ExternalRegistry, String> {
        let mut reg = ExternalRegistry::new();
        for spec in &self.lookup {
            let (name, file) = spec
                .split_once('=')
                .ok_or_else(|| format!("--lookup expects NAME=FILE, got '{spec}'"))?;
            let f = lookup_table(&read(Path::new(file))?).map_err(|e| format!("{file}: {e}"))?;
            reg.register_arc(name, f).map_err(|e| e.to_string())?;
        }
        Ok(reg)
    }

    /// Search directories: the query's own directory first, then `--module-path`.
    fn loader(&self, query_dir: Option<&Path>) -> FsLoader {
        let mut dirs = Vec::new();
        dirs.extend(query_dir.map(Path::to_path_buf));
        dirs.extend(self.module_path.iter().cloned());
        FsLoader::new(dirs)
    }
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> Result<(), String> {
    let (source, label, dir, id) = match (&a.query, &a.expr) {
        (Some(p), _) => (
            read(p)?,
            p.display().to_string(),
            p.parent().map(|d| if d.as_os_str().is_empty() { Path::new(".") } else { d }),
            file_id(p),
        ),
        (None, Some(e)) => (e.clone(), "<expr>".to_string(), Some(Path::new(".")), "<expr>".to_string()),
        (None, None) => return Err("one of --query or --expr is required".into()),
    };
    let graph = read_graph(&a.graph)?;
    let inputs = QueryInputs {
        params: a.params.as_deref().map(read_params).transpose()?,
        roots: a.roots.as_deref().map(read_roots).transpose()?,
    };
    let registry = a.linking.registry()?;
    let query = parse_query(&source).map_err(|e| format!("{label}:{e}"))?;
    let program = link(&query, &id, &a.linking.loader(dir), &registry).map_err(|e| e.to_string())?;
    let result = eval_query(&program, &graph, &inputs).map_err(|e| format!("{label}:{e}"))?;
    let text = match a.format {
        Format::Text => render_text(&result, a.limit),
        Format::Json => render_json(&result, a.limit),
    };
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

fn cmd_parse(a: &ParseArgs, out: &mut dyn Write) -> Result<(), String> {
    let text = if let Some(m) = &a.module {
        let src = read(m)?;
        let name = m.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let module = parse_module(&name, &src).map_err(|e| format!("{}:{e}", m.display()))?;
        dump_module(&module)
    } else {
        let (src, label) = match (&a.query, &a.expr) {
            (Some(p), _) => (read(p)?, p.display().to_string()),
            (None, Some(e)) => (e.clone(), "<expr>".to_string()),
            (None, None) => return Err("one of --query, --expr or --module is required".into()),
        };
        let q = parse_query(&src).map_err(|e| format!("{label}:{e}"))?;
        dump_query(&q)
    };
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

fn cmd_repl(a: &ReplArgs, out: &mut dyn Write) -> Result<(), String> {
    let graph = read_graph(&a.graph)?;
    let registry = a.linking.registry()?;
    let mut repl = Repl::new(graph, a.linking.loader(Some(Path::new("."))), registry);
    if let Some(p) = &a.params {
        repl.params = Some(read_params(p)?);
    }
    repl.prompt = io::IsTerminal::is_terminal(&io::stdin());
    let stdin = io::stdin();
    repl.run(&mut stdin.lock(), out).map_err(|e| e.to_string())
}

/// One `root: value` entry per pair, canonically sorted, then the total.
pub fn render_text(result: &QueryResult, limit: Option<usize>) -> String {
    let mut s = String::new();
    let pairs = result.sorted();
    for (root, value) in pairs.iter().take(limit.unwrap_or(usize::MAX)) {
        s.push_str(&root.render_literal());
        s.push_str(": ");
        s.push_str(&value.render_literal());
        s.push('\n');
    }
    s.push_str(&format!("(total results: {})\n", result.len()));
    s
}

/// A JSON array of `{root, value}` objects in evaluation order; each value is
/// `{type, literal}` with the one-line literal syntax.
pub fn render_json(result: &QueryResult, limit: Option<usize>) -> String {
    let typed = |v: &Value| {
        serde_json::json!({
            "type": v.type_name(),
            "literal": v.render_compact(),
        })
    };
    let items: Vec<serde_json::Value> = result
        .pairs
        .iter()
        .take(limit.unwrap_or(usize::MAX))
        .map(|(r, v)| serde_json::json!({ "root": typed(r), "value": typed(v) }))
        .collect();
    let mut s = serde_json::to_string_pretty(&items).expect("JSON values serialize");
    s.push('\n');
    s
}
