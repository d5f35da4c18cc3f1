//! Graph and tree-decomposition text formats.
//!
//! - edgelist: header `n m`, then `m` lines `u v` with 0-indexed vertices;
//!   `#` starts a comment.
//! - DIMACS: `p edge n m`, then `e u v` lines, 1-indexed; `c` lines are
//!   comments.
//! - PACE `.gr`: `p tw n m`, then `u v` lines, 1-indexed; `c` comments.
//! - PACE `.td`: `s td <bags> <width+1> <n>`, `b <i> <vertices...>` lines,
//!   then tree edges `i j`, all 1-indexed.
//!
//! Vertices are 0-indexed internally.

use std::collections::BTreeSet;
use std::fmt;

use pdim_core::treedecomp::TreeDecomposition;
use pdim_core::{Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    Edgelist,
    Dimacs,
    PaceGr,
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::Edgelist => "edgelist",
            GraphFormat::Dimacs => "dimacs",
            GraphFormat::PaceGr => "pace-gr",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: vertex {index} out of range for {n} vertices")]
    IndexOutOfRange { line: usize, index: i64, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: Vertex, v: Vertex },
    #[error("missing header")]
    MissingHeader,
    #[error("header declares {declared} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(
    line: usize,
    token: Option<&str>,
    what: &str,
) -> Result<T, ParseError> {
    let token = token.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| syntax(line, format!("bad {what} '{token}'")))
}

// Content lines with 1-based line numbers, comments removed.
fn content_lines(text: &str, comment: fn(&str) -> bool) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !comment(l))
}

struct EdgeCollector {
    n: usize,
    one_based: bool,
    seen: BTreeSet<(Vertex, Vertex)>,
    edges: Vec<(Vertex, Vertex)>,
}

impl EdgeCollector {
    fn new(n: usize, one_based: bool) -> Self {
        EdgeCollector {
            n,
            one_based,
            seen: BTreeSet::new(),
            edges: Vec::new(),
        }
    }

    fn vertex(&self, line: usize, raw: i64) -> Result<Vertex, ParseError> {
        let shifted = if self.one_based { raw - 1 } else { raw };
        if shifted < 0 || shifted as usize >= self.n {
            return Err(ParseError::IndexOutOfRange {
                line,
                index: raw,
                n: self.n,
            });
        }
        Ok(shifted as Vertex)
    }

    fn add(&mut self, line: usize, a: i64, b: i64) -> Result<(), ParseError> {
        let (u, v) = (self.vertex(line, a)?, self.vertex(line, b)?);
        if u == v {
            return Err(ParseError::SelfLoop { line, vertex: u });
        }
        if !self.seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::DuplicateEdge { line, u, v });
        }
        self.edges.push((u, v));
        Ok(())
    }

    fn finish(self, declared: usize) -> Result<Graph, ParseError> {
        if self.edges.len() != declared {
            return Err(ParseError::CountMismatch {
                what: "edges",
                declared,
                found: self.edges.len(),
            });
        }
        Ok(Graph::new(self.n, self.edges).expect("edges were checked"))
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, ParseError> {
    match format {
        GraphFormat::Edgelist => parse_edgelist(text),
        GraphFormat::Dimacs => parse_dimacs(text),
        GraphFormat::PaceGr => parse_pace_gr(text),
    }
}

fn parse_edgelist(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let mut tok = header.split_whitespace();
    let n: usize = number(line, tok.next(), "vertex count")?;
    let m: usize = number(line, tok.next(), "edge count")?;
    if tok.next().is_some() {
        return Err(syntax(line, "header must be 'n m'"));
    }
    let mut edges = EdgeCollector::new(n, false);
    for (line, l) in lines {
        let mut tok = l.split_whitespace();
        let a = number(line, tok.next(), "vertex")?;
        let b = number(line, tok.next(), "vertex")?;
        if tok.next().is_some() {
            return Err(syntax(line, "edge line must be 'u v'"));
        }
        edges.add(line, a, b)?;
    }
    edges.finish(m)
}

fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut edges: Option<(EdgeCollector, usize)> = None;
    for (line, l) in content_lines(text, |l| l.starts_with('c')) {
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("p") => {
                if edges.is_some() {
                    return Err(syntax(line, "second problem line"));
                }
                match tok.next() {
                    Some("edge") | Some("col") => {}
                    other => {
                        return Err(syntax(line, format!("unsupported problem type {other:?}")))
                    }
                }
                let n = number(line, tok.next(), "vertex count")?;
                let m = number(line, tok.next(), "edge count")?;
                edges = Some((EdgeCollector::new(n, true), m));
            }
            Some("e") => {
                let (collector, _) = edges.as_mut().ok_or(ParseError::MissingHeader)?;
                let a = number(line, tok.next(), "vertex")?;
                let b = number(line, tok.next(), "vertex")?;
                collector.add(line, a, b)?;
            }
            Some(other) => return Err(syntax(line, format!("unknown line type '{other}'"))),
            None => {}
        }
    }
    let (collector, m) = edges.ok_or(ParseError::MissingHeader)?;
    collector.finish(m)
}

fn parse_pace_gr(text: &str) -> Result<Graph, ParseError> {
    let mut edges: Option<(EdgeCollector, usize)> = None;
    for (line, l) in content_lines(text, |l| l.starts_with('c')) {
        let mut tok = l.split_whitespace();
        if l.starts_with('p') {
            tok.next();
            if tok.next() != Some("tw") {
                return Err(syntax(line, "expected 'p tw n m'"));
            }
            let n = number(line, tok.next(), "vertex count")?;
            let m = number(line, tok.next(), "edge count")?;
            edges = Some((EdgeCollector::new(n, true), m));
            continue;
        }
        let (collector, _) = edges.as_mut().ok_or(ParseError::MissingHeader)?;
        let a = number(line, tok.next(), "vertex")?;
        let b = number(line, tok.next(), "vertex")?;
        collector.add(line, a, b)?;
    }
    let (collector, m) = edges.ok_or(ParseError::MissingHeader)?;
    collector.finish(m)
}

/// Reads a PACE `.td` file. Declared counts are checked; the declared width
/// is not trusted (validate the result against the graph).
pub fn parse_td(text: &str) -> Result<TreeDecomposition, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut edges = Vec::new();
    for (line, l) in content_lines(text, |l| l.starts_with('c')) {
        let mut tok = l.split_whitespace();
        match tok.clone().next() {
            Some("s") => {
                tok.next();
                if tok.next() != Some("td") {
                    return Err(syntax(line, "expected 's td <bags> <width+1> <n>'"));
                }
                let count: usize = number(line, tok.next(), "bag count")?;
                let _declared_width: usize = number(line, tok.next(), "bag size")?;
                let n: usize = number(line, tok.next(), "vertex count")?;
                header = Some((count, n));
                bags = vec![None; count];
            }
            Some("b") => {
                let (count, n) = header.ok_or(ParseError::MissingHeader)?;
                tok.next();
                let i: i64 = number(line, tok.next(), "bag index")?;
                if i < 1 || i as usize > count {
                    return Err(ParseError::IndexOutOfRange {
                        line,
                        index: i,
                        n: count,
                    });
                }
                let mut bag = Vec::new();
                for t in tok {
                    let v: i64 = number(line, Some(t), "vertex")?;
                    if v < 1 || v as usize > n {
                        return Err(ParseError::IndexOutOfRange { line, index: v, n });
                    }
                    bag.push((v - 1) as Vertex);
                }
                if bags[i as usize - 1].replace(bag).is_some() {
                    return Err(syntax(line, format!("bag {i} given twice")));
                }
            }
            Some(_) => {
                let (count, _) = header.ok_or(ParseError::MissingHeader)?;
                let a: i64 = number(line, tok.next(), "bag index")?;
                let b: i64 = number(line, tok.next(), "bag index")?;
                for x in [a, b] {
                    if x < 1 || x as usize > count {
                        return Err(ParseError::IndexOutOfRange {
                            line,
                            index: x,
                            n: count,
                        });
                    }
                }
                edges.push((a as usize - 1, b as usize - 1));
            }
            None => {}
        }
    }
    header.ok_or(ParseError::MissingHeader)?;
    let declared = bags.len();
    let given: Vec<Vec<Vertex>> = bags.into_iter().flatten().collect();
    if given.len() != declared {
        return Err(ParseError::CountMismatch {
            what: "bags",
            declared,
            found: given.len(),
        });
    }
    Ok(TreeDecomposition::new(given, edges))
}

/// Writes a decomposition of an `n`-vertex graph in PACE `.td` form.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.len(), td.width() + 1, n);
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in td.edges() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

/// Writes a graph with vertices `0..n` in the given format.
pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    let (header, prefix, shift) = match format {
        GraphFormat::Edgelist => (format!("{} {}\n", g.order(), g.size()), "", 0),
        GraphFormat::Dimacs => (format!("p edge {} {}\n", g.order(), g.size()), "e ", 1),
        GraphFormat::PaceGr => (format!("p tw {} {}\n", g.order(), g.size()), "", 1),
    };
    let mut out = header;
    for (u, v) in g.edges() {
        out.push_str(&format!("{prefix}{} {}\n", u + shift, v + shift));
    }
    out
}
