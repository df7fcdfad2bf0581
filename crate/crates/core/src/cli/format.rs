//! The line-oriented instance format.
//!
//! ```text
//! # comment
//! set X = {x0, x1}
//! set A = {(x0, y0), (x1, y0)}
//! set I = {i0, i1}
//! map p : A -> X = {(x0, y0) -> x0, (x1, y0) -> x1}
//! interval I
//! role p = p
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::kernel::{mk_map, FinMap, FinSet, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    P,
    Q,
    F,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::P, Role::Q, Role::F];

    pub fn name(self) -> &'static str {
        match self {
            Role::P => "p",
            Role::Q => "q",
            Role::F => "f",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        Role::ALL.into_iter().find(|r| r.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub map: FinMap,
}

/// Named sets and maps, an interval and the maps playing `p`, `q`, `f`.
///
/// `p: A → X`, `q: B → A`, `f: X' → X`; only `p` is required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub sets: Vec<(String, FinSet)>,
    pub maps: Vec<MapDecl>,
    pub interval: String,
    pub roles: BTreeMap<Role, String>,
}

impl Instance {
    pub fn set(&self, name: &str) -> Result<&FinSet> {
        self.sets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::Resolution(name.to_string()))
    }

    pub fn map(&self, name: &str) -> Result<&FinMap> {
        self.maps
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.map)
            .ok_or_else(|| Error::Resolution(name.to_string()))
    }

    pub fn role(&self, r: Role) -> Option<&FinMap> {
        self.roles.get(&r).and_then(|n| self.map(n).ok())
    }

    pub fn points(&self) -> &FinSet {
        self.set(&self.interval).expect("validated on construction")
    }

    /// Every name resolves and the roles compose as declared.
    pub fn validate(&self) -> Result<()> {
        self.set(&self.interval)?;
        for m in &self.maps {
            if self.set(&m.src)? != m.map.dom() || self.set(&m.dst)? != m.map.cod() {
                return Err(Error::Invariant(format!("map {} disagrees with its sets", m.name)));
            }
        }
        for n in self.roles.values() {
            self.map(n)?;
        }
        let p = self
            .role(Role::P)
            .ok_or_else(|| Error::Invariant("no map plays p".into()))?;
        if let Some(q) = self.role(Role::Q) {
            if q.cod() != p.dom() {
                return Err(Error::Invariant("q must land in the domain of p".into()));
            }
        }
        if let Some(f) = self.role(Role::F) {
            if f.cod() != p.cod() {
                return Err(Error::Invariant("f must land in the codomain of p".into()));
            }
        }
        Ok(())
    }
}

/// Sets, then maps, then the interval and roles; parsing the output gives
/// back the same text.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    for (name, set) in &inst.sets {
        writeln!(out, "set {name} = {set}").unwrap();
    }
    for m in &inst.maps {
        writeln!(out, "map {} : {} -> {} = {}", m.name, m.src, m.dst, m.map).unwrap();
    }
    writeln!(out, "interval {}", inst.interval).unwrap();
    for (r, n) in &inst.roles {
        writeln!(out, "role {} = {n}", r.name()).unwrap();
    }
    out
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut sets: Vec<(String, FinSet)> = Vec::new();
    let mut maps = Vec::new();
    let mut interval = None;
    let mut roles = BTreeMap::new();
    let mut any = false;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut lx = Lexer::new(line, k + 1);
        let Some(keyword) = lx.ident_opt() else {
            lx.end()?;
            continue;
        };
        any = true;
        match keyword.as_str() {
            "set" => {
                let name = lx.ident()?;
                lx.expect("=")?;
                let elems = lx.braced(|lx| lx.value())?;
                lx.end()?;
                let set = FinSet::new(elems.iter().cloned());
                if set.len() != elems.len() {
                    return Err(lx.error("duplicate element"));
                }
                if sets.iter().any(|(n, _)| *n == name) {
                    return Err(lx.error(&format!("set {name} declared twice")));
                }
                sets.push((name, set));
            }
            "map" => {
                let name = lx.ident()?;
                lx.expect(":")?;
                let src = lx.ident()?;
                lx.expect("->")?;
                let dst = lx.ident()?;
                lx.expect("=")?;
                let pairs = lx.braced(|lx| {
                    let x = lx.value()?;
                    lx.expect("->")?;
                    Ok((x, lx.value()?))
                })?;
                lx.end()?;
                let resolve = |n: &str| {
                    sets.iter()
                        .find(|(m, _)| m == n)
                        .map(|(_, s)| s.clone())
                        .ok_or_else(|| Error::Resolution(n.to_string()))
                };
                let map = mk_map(resolve(&src)?, resolve(&dst)?, &pairs)
                    .map_err(|e| Error::Invariant(format!("map {name}: {e}")))?;
                maps.push(MapDecl { name, src, dst, map });
            }
            "interval" => {
                interval = Some(lx.ident()?);
                lx.end()?;
            }
            "role" => {
                lx.peek();
                let col = lx.column();
                let r = lx.ident()?;
                let role = Role::parse(&r).ok_or_else(|| Error::Parse {
                    line: k + 1,
                    column: col,
                    message: format!("unknown role {r}"),
                })?;
                lx.expect("=")?;
                roles.insert(role, lx.ident()?);
                lx.end()?;
            }
            other => return Err(lx.error(&format!("unknown declaration {other}"))),
        }
    }
    if !any {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty instance".into(),
        });
    }
    let interval = interval.ok_or_else(|| Error::Invariant("no interval declared".into()))?;
    let inst = Instance {
        sets,
        maps,
        interval,
        roles,
    };
    inst.validate()?;
    Ok(inst)
}

/// Parses a single element.
pub fn parse_value(text: &str) -> Result<Value> {
    let mut lx = Lexer::new(text, 1);
    let v = lx.value()?;
    lx.end()?;
    Ok(v)
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    src: &'a str,
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.')
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer {
            chars: src.char_indices().collect(),
            pos: 0,
            line,
            src,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column(),
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn rest(&self) -> &str {
        self.chars
            .get(self.pos)
            .map(|&(b, _)| &self.src[b..])
            .unwrap_or("")
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }

    fn ident_opt(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident(self.chars[self.pos].1) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|c| c.1).collect())
    }

    fn ident(&mut self) -> Result<String> {
        self.ident_opt().ok_or_else(|| self.error("expected a name"))
    }

    /// `{item, ...}`, possibly empty.
    fn braced<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect("{")?;
        self.list("}", &mut item)
    }

    fn list<T>(&mut self, close: &str, item: &mut impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn value(&mut self) -> Result<Value> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                if self.eat(")") {
                    return Ok(Value::Unit);
                }
                let a = self.value()?;
                self.expect(",")?;
                let b = self.value()?;
                self.expect(")")?;
                Ok(Value::pair(a, b))
            }
            Some('[') => {
                self.pos += 1;
                let col = self.column();
                let entries = self.list("]", &mut |lx: &mut Self| {
                    let k = lx.value()?;
                    lx.expect("=>")?;
                    Ok((k, lx.value()?))
                })?;
                Value::table(entries).map_err(|e| Error::Parse {
                    line: self.line,
                    column: col,
                    message: e.to_string(),
                })
            }
            Some(c) if is_ident(c) => Ok(Value::atom(self.ident()?)),
            _ => Err(self.error("expected an element")),
        }
    }
}
