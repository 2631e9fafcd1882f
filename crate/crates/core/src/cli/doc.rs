//! The plain-text instance format: parsing, canonical printing and name
//! resolution. The grammar is documented in `docs/format.md`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::enriched::VCat;
use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};
use crate::relation::{FiniteSet, SetMap, VRel};
use crate::topology::powerset::DEFAULT_POWERSET_CAP;
use crate::topology::{ModularSpace, Monad, PSpace, Structure, USpace};

#[derive(Clone, Debug, PartialEq)]
pub enum CatDef {
    Rel(String),
    Discrete(String),
}

/// A matrix row: a key (element or `{..}` subset) and its values.
pub type Row = (String, Vec<QValue>);

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Set { name: String, elements: Vec<String> },
    Map { name: String, source: String, target: String, pairs: Vec<(String, String)> },
    Values { name: String, set: String, pairs: Vec<(String, QValue)> },
    Rel { name: String, source: String, target: String, rows: Vec<Row> },
    Cat { name: String, def: CatDef },
    Space { name: String, monad: Monad, set: String, rows: Vec<Row> },
    Modular { name: String, cat: String, space: String },
    Query { op: String, args: Vec<String> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub quantale: Quantale,
    /// Items with the line they start on.
    pub items: Vec<(usize, Item)>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || "_*'.+-⊥⊤".contains(c)) && s != "END"
}

struct Cursor<'a> {
    line: usize,
    toks: Vec<(usize, &'a str)>,
    pos: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Cursor { line, toks: tokens(text), pos: 0, end_col: text.chars().count() + 1 }
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn next(&mut self, what: &str) -> Result<&'a str> {
        let t = self.toks.get(self.pos).ok_or_else(|| perr(self.line, self.end_col, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t.1)
    }

    fn name(&mut self, what: &str) -> Result<String> {
        let col = self.col();
        let t = self.next(what)?;
        if !is_name(t) {
            return Err(perr(self.line, col, format!("`{t}` is not a valid {what}")));
        }
        Ok(t.to_string())
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        let col = self.col();
        let t = self.next(&format!("`{lit}`"))?;
        if t != lit {
            return Err(perr(self.line, col, format!("expected `{lit}`, found `{t}`")));
        }
        Ok(())
    }

    fn rest(&mut self) -> Vec<(usize, &'a str)> {
        let r = self.toks[self.pos..].to_vec();
        self.pos = self.toks.len();
        r
    }

    fn done(&self) -> Result<()> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some((c, t)) => Err(perr(self.line, *c, format!("unexpected `{t}`"))),
        }
    }
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap_or("")
}

fn value(q: Quantale, line: usize, col: usize, t: &str) -> Result<QValue> {
    q.parse_value(t).map_err(|e| perr(line, col, e.to_string()))
}

fn row_key_ok(k: &str) -> bool {
    if let Some(inner) = k.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        inner.is_empty() || inner.split(',').all(is_name)
    } else {
        is_name(k)
    }
}

/// Parses a document. Syntax only: names are resolved by [`Env::build`].
pub fn parse(text: &str) -> Result<Document> {
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    let mut quantale = None;
    let mut items = Vec::new();
    while i < lines.len() {
        let ln = i + 1;
        let body = strip_comment(lines[i]);
        i += 1;
        let mut c = Cursor::new(ln, body);
        let Some(&(col, kw)) = c.toks.first() else { continue };
        c.pos = 1;
        let q = match (kw, quantale) {
            ("QUANTALE", None) => {
                let qcol = c.col();
                let name = c.next("a quantale name")?;
                quantale = Some(name.parse::<Quantale>().map_err(|e| perr(ln, qcol, e.to_string()))?);
                c.done()?;
                continue;
            }
            ("QUANTALE", Some(_)) => return Err(perr(ln, col, "QUANTALE declared twice")),
            (_, None) => return Err(perr(ln, col, "the document must start with QUANTALE")),
            (_, Some(q)) => q,
        };
        let item = match kw {
            "SET" => {
                let name = c.name("set name")?;
                c.expect("=")?;
                let mut elements = Vec::new();
                for (col, t) in c.rest() {
                    if !is_name(t) {
                        return Err(perr(ln, col, format!("`{t}` is not a valid element name")));
                    }
                    elements.push(t.to_string());
                }
                Item::Set { name, elements }
            }
            "MAP" | "VALUES" => {
                let name = c.name("name")?;
                c.expect(":")?;
                let source = c.name("set name")?;
                let target = if kw == "MAP" {
                    c.expect("->")?;
                    Some(c.name("set name")?)
                } else {
                    None
                };
                c.expect("=")?;
                let mut pairs = Vec::new();
                for (col, t) in c.rest() {
                    let (k, v) = t.split_once(':').ok_or_else(|| perr(ln, col, format!("expected `element:image`, found `{t}`")))?;
                    if !is_name(k) {
                        return Err(perr(ln, col, format!("`{k}` is not a valid element name")));
                    }
                    pairs.push((k.to_string(), v.to_string(), col + k.chars().count() + 1));
                }
                match target {
                    Some(target) => {
                        for (_, v, col) in &pairs {
                            if !is_name(v) {
                                return Err(perr(ln, *col, format!("`{v}` is not a valid element name")));
                            }
                        }
                        Item::Map { name, source, target, pairs: pairs.into_iter().map(|(k, v, _)| (k, v)).collect() }
                    }
                    None => Item::Values {
                        name,
                        set: source,
                        pairs: pairs
                            .into_iter()
                            .map(|(k, v, col)| value(q, ln, col, &v).map(|v| (k, v)))
                            .collect::<Result<_>>()?,
                    },
                }
            }
            "REL" | "SPACE" => {
                let name = c.name("name")?;
                c.expect(":")?;
                let head = if kw == "REL" {
                    let s = c.name("set name")?;
                    c.expect("->")?;
                    let t = c.name("set name")?;
                    (s, t, None)
                } else {
                    let kcol = c.col();
                    let monad = match c.next("closure or convergence")? {
                        "closure" => Monad::P,
                        "convergence" => Monad::U,
                        other => return Err(perr(ln, kcol, format!("expected closure or convergence, found `{other}`"))),
                    };
                    let s = c.name("set name")?;
                    (s, String::new(), Some(monad))
                };
                c.done()?;
                let mut rows = Vec::new();
                loop {
                    let Some(raw) = lines.get(i) else {
                        return Err(perr(ln, col, format!("{kw} block is missing END")));
                    };
                    let rl = i + 1;
                    i += 1;
                    let mut rc = Cursor::new(rl, strip_comment(raw));
                    let Some(&(kcol, key)) = rc.toks.first() else { continue };
                    if key == "END" {
                        rc.pos = 1;
                        rc.done()?;
                        break;
                    }
                    if !row_key_ok(key) {
                        return Err(perr(rl, kcol, format!("`{key}` is not a row key")));
                    }
                    rc.pos = 1;
                    rc.expect(":")?;
                    let vals = rc.rest().into_iter().map(|(vc, t)| value(q, rl, vc, t)).collect::<Result<Vec<_>>>()?;
                    rows.push((key.to_string(), vals));
                }
                match head {
                    (source, target, None) => Item::Rel { name, source, target, rows },
                    (set, _, Some(monad)) => Item::Space { name, monad, set, rows },
                }
            }
            "CAT" => {
                let name = c.name("name")?;
                c.expect("=")?;
                let first = c.name("relation name or `discrete`")?;
                let def = if first == "discrete" { CatDef::Discrete(c.name("set name")?) } else { CatDef::Rel(first) };
                c.done()?;
                Item::Cat { name, def }
            }
            "MODULAR" => {
                let name = c.name("name")?;
                c.expect("=")?;
                let cat = c.name("category name")?;
                let space = c.name("space name")?;
                c.done()?;
                Item::Modular { name, cat, space }
            }
            "QUERY" => {
                let op = c.name("query operation")?;
                let args = c.rest().into_iter().map(|(_, t)| t.to_string()).collect();
                Item::Query { op, args }
            }
            other => return Err(perr(ln, col, format!("unknown keyword `{other}`"))),
        };
        items.push((ln, item));
    }
    let quantale = quantale.ok_or_else(|| perr(1, 1, "empty document: QUANTALE declaration missing"))?;
    Ok(Document { quantale, items })
}

fn print_rows(out: &mut String, rows: &[Row]) {
    for (k, vs) in rows {
        let _ = write!(out, "  {k} :");
        for v in vs {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out.push_str("END\n");
}

/// Canonical text of a document. `parse(print(d)) == d`.
pub fn print(doc: &Document) -> String {
    let mut out = format!("QUANTALE {}\n", doc.quantale);
    for (_, item) in &doc.items {
        match item {
            Item::Set { name, elements } => {
                let _ = writeln!(out, "SET {name} = {}", elements.join(" "));
            }
            Item::Map { name, source, target, pairs } => {
                let ps: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                let _ = writeln!(out, "MAP {name} : {source} -> {target} = {}", ps.join(" "));
            }
            Item::Values { name, set, pairs } => {
                let ps: Vec<String> = pairs.iter().map(|(a, v)| format!("{a}:{v}")).collect();
                let _ = writeln!(out, "VALUES {name} : {set} = {}", ps.join(" "));
            }
            Item::Rel { name, source, target, rows } => {
                let _ = writeln!(out, "REL {name} : {source} -> {target}");
                print_rows(&mut out, rows);
            }
            Item::Cat { name, def } => {
                let _ = match def {
                    CatDef::Rel(r) => writeln!(out, "CAT {name} = {r}"),
                    CatDef::Discrete(s) => writeln!(out, "CAT {name} = discrete {s}"),
                };
            }
            Item::Space { name, monad, set, rows } => {
                let kind = if *monad == Monad::P { "closure" } else { "convergence" };
                let _ = writeln!(out, "SPACE {name} : {kind} {set}");
                print_rows(&mut out, rows);
            }
            Item::Modular { name, cat, space } => {
                let _ = writeln!(out, "MODULAR {name} = {cat} {space}");
            }
            Item::Query { op, args } => {
                let _ = if args.is_empty() {
                    writeln!(out, "QUERY {op}")
                } else {
                    writeln!(out, "QUERY {op} {}", args.join(" "))
                };
            }
        }
    }
    out
}

/// Named objects of a document, built in order.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub sets: HashMap<String, FiniteSet>,
    pub maps: HashMap<String, SetMap>,
    pub values: HashMap<String, (FiniteSet, Vec<QValue>)>,
    pub rels: HashMap<String, VRel>,
    pub cats: HashMap<String, VCat>,
    pub spaces: HashMap<String, Structure>,
    /// Category and space names; validated when used.
    pub modulars: HashMap<String, (String, String)>,
    pub line_of: HashMap<String, usize>,
}

fn lookup<'a, T>(map: &'a HashMap<String, T>, name: &str, kind: &str, line: usize) -> Result<&'a T> {
    map.get(name).ok_or_else(|| perr(line, 1, format!("undefined {kind} `{name}`")))
}

fn index(set: &FiniteSet, e: &str, line: usize) -> Result<usize> {
    set.index_of(e).ok_or_else(|| perr(line, 1, format!("`{e}` is not an element of {}", set.name())))
}

fn subset_mask(set: &FiniteSet, key: &str, line: usize) -> Result<usize> {
    let inner = key
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| perr(line, 1, format!("closure rows are keyed by subsets, found `{key}`")))?;
    if inner.is_empty() {
        return Ok(0);
    }
    inner.split(',').try_fold(0usize, |m, e| Ok(m | 1 << index(set, e, line)?))
}

/// Fills a matrix from keyed rows; every row must appear exactly once.
fn matrix(
    rows: &[Row],
    nrows: usize,
    ncols: usize,
    key: impl Fn(&str) -> Result<usize>,
    line: usize,
) -> Result<Vec<QValue>> {
    let mut out: Vec<Option<Vec<QValue>>> = vec![None; nrows];
    for (k, vs) in rows {
        let r = key(k)?;
        if vs.len() != ncols {
            return Err(perr(line, 1, format!("row `{k}` has {} values, expected {ncols}", vs.len())));
        }
        if out[r].replace(vs.clone()).is_some() {
            return Err(perr(line, 1, format!("row `{k}` given twice")));
        }
    }
    let mut flat = Vec::with_capacity(nrows * ncols);
    for (r, row) in out.into_iter().enumerate() {
        flat.extend(row.ok_or_else(|| perr(line, 1, format!("missing row {r} of {nrows}")))?);
    }
    Ok(flat)
}

impl Env {
    pub fn build(doc: &Document) -> Result<Env> {
        let q = doc.quantale;
        let mut env = Env::default();
        for (line, item) in &doc.items {
            let line = *line;
            let name = match item {
                Item::Query { .. } => continue,
                Item::Set { name, .. }
                | Item::Map { name, .. }
                | Item::Values { name, .. }
                | Item::Rel { name, .. }
                | Item::Cat { name, .. }
                | Item::Space { name, .. }
                | Item::Modular { name, .. } => name.clone(),
            };
            if env.line_of.insert(name.clone(), line).is_some() {
                return Err(perr(line, 1, format!("`{name}` defined twice")));
            }
            match item {
                Item::Set { elements, .. } => {
                    let s = FiniteSet::new(name.clone(), elements.iter().cloned()).map_err(|e| perr(line, 1, e.to_string()))?;
                    env.sets.insert(name, s);
                }
                Item::Map { source, target, pairs, .. } => {
                    let (s, t) = (lookup(&env.sets, source, "set", line)?, lookup(&env.sets, target, "set", line)?);
                    let mut table = vec![None; s.len()];
                    for (a, b) in pairs {
                        table[index(s, a, line)?] = Some(index(t, b, line)?);
                    }
                    let table = table
                        .into_iter()
                        .enumerate()
                        .map(|(i, v)| v.ok_or_else(|| perr(line, 1, format!("no image for `{}`", s.element(i)))))
                        .collect::<Result<Vec<_>>>()?;
                    env.maps.insert(name, SetMap::new(s.clone(), t.clone(), table)?);
                }
                Item::Values { set, pairs, .. } => {
                    let s = lookup(&env.sets, set, "set", line)?;
                    let mut vals = vec![None; s.len()];
                    for (a, v) in pairs {
                        vals[index(s, a, line)?] = Some(v.clone());
                    }
                    let vals = vals
                        .into_iter()
                        .enumerate()
                        .map(|(i, v)| v.ok_or_else(|| perr(line, 1, format!("no value for `{}`", s.element(i)))))
                        .collect::<Result<Vec<_>>>()?;
                    env.values.insert(name, (s.clone(), vals));
                }
                Item::Rel { source, target, rows, .. } => {
                    let (s, t) = (lookup(&env.sets, source, "set", line)?, lookup(&env.sets, target, "set", line)?);
                    let flat = matrix(rows, s.len(), t.len(), |k| index(s, k, line), line)?;
                    env.rels.insert(name, VRel::new(q, s.clone(), t.clone(), flat)?);
                }
                Item::Cat { def, .. } => {
                    let cat = match def {
                        CatDef::Rel(r) => VCat::new(lookup(&env.rels, r, "relation", line)?.clone())
                            .map_err(|e| perr(line, 1, e.to_string()))?,
                        CatDef::Discrete(s) => VCat::discrete(q, lookup(&env.sets, s, "set", line)?),
                    };
                    env.cats.insert(name, cat);
                }
                Item::Space { monad, set, rows, .. } => {
                    let s = lookup(&env.sets, set, "set", line)?;
                    let structure = match monad {
                        Monad::P => {
                            if s.len() > DEFAULT_POWERSET_CAP {
                                return Err(perr(line, 1, "carrier too large for a closure structure"));
                            }
                            let flat = matrix(rows, 1 << s.len(), s.len(), |k| subset_mask(s, k, line), line)?;
                            let tset = Monad::P.carrier(s, DEFAULT_POWERSET_CAP)?;
                            Structure::Closure(PSpace::new(s, VRel::new(q, tset, s.clone(), flat)?)?)
                        }
                        Monad::U => {
                            let flat = matrix(rows, s.len(), s.len(), |k| index(s, k, line), line)?;
                            Structure::Convergence(USpace::new(VRel::new(q, s.clone(), s.clone(), flat)?)?)
                        }
                    };
                    env.spaces.insert(name, structure);
                }
                Item::Modular { cat, space, .. } => {
                    let c = lookup(&env.cats, cat, "category", line)?;
                    let s = lookup(&env.spaces, space, "space", line)?;
                    if c.carrier() != s.carrier() {
                        return Err(perr(line, 1, "category and space live on different sets"));
                    }
                    env.modulars.insert(name, (cat.clone(), space.clone()));
                }
                Item::Query { .. } => unreachable!(),
            }
        }
        Ok(env)
    }

    pub fn line(&self, name: &str) -> usize {
        self.line_of.get(name).copied().unwrap_or(0)
    }

    pub fn modular(&self, name: &str) -> Result<ModularSpace> {
        let (c, s) = self
            .modulars
            .get(name)
            .ok_or_else(|| perr(self.line(name), 1, format!("undefined modular space `{name}`")))?;
        ModularSpace::new(self.cats[c].clone(), self.spaces[s].clone())
    }

    /// A category by name: a CAT, or the hom of a MODULAR.
    pub fn category(&self, name: &str, line: usize) -> Result<VCat> {
        if let Some(c) = self.cats.get(name) {
            return Ok(c.clone());
        }
        if let Some((c, _)) = self.modulars.get(name) {
            return Ok(self.cats[c].clone());
        }
        Err(perr(line, 1, format!("undefined category `{name}`")))
    }

    /// A structure by name: a SPACE, or the structure of a MODULAR.
    pub fn structure(&self, name: &str, line: usize) -> Result<Structure> {
        if let Some(s) = self.spaces.get(name) {
            return Ok(s.clone());
        }
        if let Some((_, s)) = self.modulars.get(name) {
            return Ok(self.spaces[s].clone());
        }
        Err(perr(line, 1, format!("undefined space `{name}`")))
    }
}
