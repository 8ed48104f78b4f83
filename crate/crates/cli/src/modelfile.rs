//! The `.gal` model-description format.
//!
//! ```text
//! field F7
//! model E { proj vars: X Y Z  ideal: [Y^2*Z - X^3 - Z^3] }
//! chart cusp { vars: x y  ideal: [y^2 - x^3] }
//! morphism zeta: E -> E { X -> 2*X; Y -> Y; Z -> Z; }
//! ```
//!
//! `proj vars:` may list several groups separated by `|` for products of
//! projective spaces. `#` starts a comment.

use std::collections::BTreeSet;
use std::fmt;

use gal_core::arith::BaseField;
use gal_core::ideal::PolyRing;
use gal_core::lattice::{Morphism, ProjModel};
use gal_core::models::Chart;
use gal_core::GalError;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDecl {
    pub name: String,
    pub groups: Vec<Vec<String>>,
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDecl {
    pub name: String,
    pub vars: Vec<String>,
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    /// `(target variable, image in the source variables)`, in target-variable order.
    pub images: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Model(ModelDecl),
    Chart(ChartDecl),
    Morphism(MorphismDecl),
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Model(m) => &m.name,
            Item::Chart(c) => &c.name,
            Item::Morphism(f) => &f.name,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Item::Model(_) => "model",
            Item::Chart(_) => "chart",
            Item::Morphism(_) => "morphism",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub field: BaseField,
    pub items: Vec<Item>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

struct Scanner {
    chars: Vec<char>,
    i: usize,
    pos: Pos,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl Scanner {
    fn new(src: &str) -> Self {
        Scanner { chars: src.chars().collect(), i: 0, pos: Pos { line: 1, col: 1 } }
    }

    fn err(&self, at: Pos, msg: impl Into<String>) -> CliError {
        CliError::Parse { line: at.line, col: at.col, message: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn describe_next(&mut self) -> String {
        self.skip_ws();
        match self.peek() {
            None => "end of input".into(),
            Some(c) if is_name_char(c) => {
                let w: String = self.chars[self.i..].iter().take_while(|c| is_name_char(**c)).collect();
                format!("'{w}'")
            }
            Some(c) => format!("'{c}'"),
        }
    }

    fn word(&mut self) -> Option<(String, Pos)> {
        self.skip_ws();
        let at = self.pos;
        let mut w = String::new();
        while let Some(c) = self.peek().filter(|c| is_name_char(*c)) {
            w.push(c);
            self.bump();
        }
        (!w.is_empty()).then_some((w, at))
    }

    fn peek_word(&mut self) -> Option<String> {
        self.skip_ws();
        let w: String = self.chars[self.i..].iter().take_while(|c| is_name_char(**c)).collect();
        (!w.is_empty()).then_some(w)
    }

    fn name(&mut self, what: &str) -> Result<(String, Pos), CliError> {
        self.skip_ws();
        let at = self.pos;
        match self.word() {
            Some(w) => Ok(w),
            None => {
                let found = self.describe_next();
                Err(self.err(at, format!("expected {what}, found {found}")))
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), CliError> {
        self.skip_ws();
        let at = self.pos;
        match self.peek_word() {
            Some(w) if w == kw => {
                self.word();
                Ok(())
            }
            _ => {
                let found = self.describe_next();
                Err(self.err(at, format!("expected '{kw}', found {found}")))
            }
        }
    }

    fn symbol(&mut self, sym: &str) -> Result<(), CliError> {
        self.skip_ws();
        let at = self.pos;
        let n = sym.chars().count();
        let here: String = self.chars[self.i..].iter().take(n).collect();
        if here == sym {
            for _ in 0..n {
                self.bump();
            }
            Ok(())
        } else {
            let found = self.describe_next();
            Err(self.err(at, format!("expected '{sym}', found {found}")))
        }
    }

    fn try_symbol(&mut self, sym: &str) -> bool {
        self.skip_ws();
        let n = sym.chars().count();
        let here: String = self.chars[self.i..].iter().take(n).collect();
        if here == sym {
            for _ in 0..n {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    /// Raw expression text up to one of `stops` at parenthesis depth 0.
    fn expression(&mut self, stops: &[char]) -> Result<(String, Pos), CliError> {
        self.skip_ws();
        let at = self.pos;
        let mut depth = 0i32;
        let mut text = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err(self.pos, format!("unterminated expression starting at line {}, column {}", at.line, at.col))),
                Some(c) if depth == 0 && stops.contains(&c) => break,
                Some('{') | Some('}') if depth == 0 => {
                    let p = self.pos;
                    let c = self.peek().unwrap();
                    return Err(self.err(p, format!("unexpected '{c}' inside an expression")));
                }
                Some(c) => {
                    if c == '(' {
                        depth += 1;
                    } else if c == ')' {
                        depth -= 1;
                        if depth < 0 {
                            return Err(self.err(self.pos, "unbalanced ')'"));
                        }
                    }
                    text.push(c);
                    self.bump();
                }
            }
        }
        let trimmed = text.trim_end().to_string();
        if trimmed.is_empty() {
            return Err(self.err(at, "empty expression"));
        }
        Ok((trimmed, at))
    }
}

/// Position of byte `offset` of `text`, which starts at `start`.
fn locate(start: Pos, text: &str, offset: usize) -> Pos {
    let mut p = start;
    for c in text[..offset.min(text.len())].chars() {
        if c == '\n' {
            p.line += 1;
            p.col = 1;
        } else {
            p.col += 1;
        }
    }
    p
}

/// Parse one polynomial in `ring` and return its canonical form.
fn canonical(ring: &PolyRing, text: &str, at: Pos) -> Result<String, CliError> {
    match ring.parse(text) {
        Ok(p) => Ok(ring.fmt(&p)),
        Err(GalError::Parse { offset, message }) => {
            let p = locate(at, text, offset);
            Err(CliError::Parse { line: p.line, col: p.col, message })
        }
        Err(e) => Err(CliError::Parse { line: at.line, col: at.col, message: e.to_string() }),
    }
}

fn parse_field(s: &mut Scanner) -> Result<BaseField, CliError> {
    let (w, at) = s.name("a field (Q or F<p>)")?;
    let p = if w == "Q" {
        return Ok(BaseField::Rationals);
    } else if w == "F" {
        let (n, at) = s.name("a prime")?;
        n.parse::<u64>().map_err(|_| s.err(at, format!("expected a prime, found '{n}'")))?
    } else if let Some(n) = w.strip_prefix('F') {
        n.parse::<u64>().map_err(|_| s.err(at, format!("unknown field '{w}'")))?
    } else {
        return Err(s.err(at, format!("unknown field '{w}'")));
    };
    BaseField::prime(p).map_err(|e| s.err(at, e.to_string()))
}

/// Field named by `GAL_DEFAULT_FIELD`, else `Q`.
pub fn default_field() -> Result<BaseField, CliError> {
    match std::env::var("GAL_DEFAULT_FIELD") {
        Ok(v) if !v.trim().is_empty() => {
            let mut s = Scanner::new(v.trim());
            let f = parse_field(&mut s).map_err(|e| CliError::Usage(format!("GAL_DEFAULT_FIELD: {e}")))?;
            if !s.at_end() {
                return Err(CliError::Usage(format!("GAL_DEFAULT_FIELD: unexpected text in '{v}'")));
            }
            Ok(f)
        }
        _ => Ok(BaseField::Rationals),
    }
}

fn ring_of(field: BaseField, vars: impl IntoIterator<Item = String>) -> PolyRing {
    let mut names = vec!["t".to_string()];
    names.extend(vars);
    PolyRing::from_names(field, names)
}

fn var_list(s: &mut Scanner, stop: &[&str], seen: &mut BTreeSet<String>) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    loop {
        s.skip_ws();
        if s.peek() == Some('|') {
            break;
        }
        match s.peek_word() {
            Some(w) if stop.contains(&w.as_str()) => break,
            Some(_) => {
                let (w, at) = s.word().unwrap();
                if w == "t" {
                    return Err(s.err(at, "'t' is reserved for the uniformizer"));
                }
                if !w.chars().next().unwrap().is_alphabetic() {
                    return Err(s.err(at, format!("'{w}' is not a variable name")));
                }
                if !seen.insert(w.clone()) {
                    return Err(s.err(at, format!("duplicate variable '{w}'")));
                }
                out.push(w);
            }
            None => {
                let at = s.pos;
                let found = s.describe_next();
                return Err(s.err(at, format!("expected a variable name, found {found}")));
            }
        }
    }
    Ok(out)
}

fn poly_list(s: &mut Scanner, ring: &PolyRing) -> Result<Vec<String>, CliError> {
    s.symbol("[")?;
    let mut out = Vec::new();
    if s.try_symbol("]") {
        return Ok(out);
    }
    loop {
        let (text, at) = s.expression(&[',', ']'])?;
        out.push(canonical(ring, &text, at)?);
        if s.try_symbol("]") {
            return Ok(out);
        }
        s.symbol(",")?;
    }
}

fn parse_model(s: &mut Scanner, field: BaseField) -> Result<ModelDecl, CliError> {
    let (name, _) = s.name("a model name")?;
    s.symbol("{")?;
    s.keyword("proj")?;
    s.keyword("vars")?;
    s.symbol(":")?;
    let mut seen = BTreeSet::new();
    let mut groups = Vec::new();
    loop {
        let at = s.pos;
        let g = var_list(s, &["ideal"], &mut seen)?;
        if g.is_empty() {
            return Err(s.err(at, "empty variable group"));
        }
        groups.push(g);
        if !s.try_symbol("|") {
            break;
        }
    }
    s.keyword("ideal")?;
    s.symbol(":")?;
    let ring = ring_of(field, groups.iter().flatten().cloned());
    let ideal = poly_list(s, &ring)?;
    s.symbol("}")?;
    Ok(ModelDecl { name, groups, ideal })
}

fn parse_chart(s: &mut Scanner, field: BaseField) -> Result<ChartDecl, CliError> {
    let (name, _) = s.name("a chart name")?;
    s.symbol("{")?;
    s.keyword("vars")?;
    s.symbol(":")?;
    let vars = var_list(s, &["ideal"], &mut BTreeSet::new())?;
    s.keyword("ideal")?;
    s.symbol(":")?;
    let ring = ring_of(field, vars.iter().cloned());
    let ideal = poly_list(s, &ring)?;
    s.symbol("}")?;
    Ok(ChartDecl { name, vars, ideal })
}

fn declared_model(s: &mut Scanner, items: &[Item], what: &str) -> Result<(String, ModelDecl), CliError> {
    let (n, at) = s.name(what)?;
    match items.iter().find(|i| i.name() == n) {
        Some(Item::Model(m)) => Ok((n, m.clone())),
        Some(other) => Err(s.err(at, format!("'{n}' is a {}, not a model", other.kind()))),
        None => Err(s.err(at, format!("undeclared model '{n}'"))),
    }
}

fn parse_morphism(s: &mut Scanner, field: BaseField, items: &[Item]) -> Result<MorphismDecl, CliError> {
    let (name, _) = s.name("a morphism name")?;
    s.symbol(":")?;
    let (source, src) = declared_model(s, items, "the source model")?;
    s.symbol("->")?;
    let (target, tgt) = declared_model(s, items, "the target model")?;
    s.symbol("{")?;
    let ring = ring_of(field, src.groups.iter().flatten().cloned());
    let tvars: Vec<String> = tgt.groups.iter().flatten().cloned().collect();
    let mut given: Vec<Option<String>> = vec![None; tvars.len()];
    while !s.try_symbol("}") {
        let (v, at) = s.name("a target variable or '}'")?;
        let Some(k) = tvars.iter().position(|x| *x == v) else {
            return Err(s.err(at, format!("'{v}' is not a variable of {target}")));
        };
        if given[k].is_some() {
            return Err(s.err(at, format!("image of '{v}' given twice")));
        }
        s.symbol("->")?;
        let (text, eat) = s.expression(&[';', '}'])?;
        given[k] = Some(canonical(&ring, &text, eat)?);
        s.symbol(";")?;
    }
    let mut images = Vec::new();
    for (v, img) in tvars.iter().zip(given) {
        match img {
            Some(i) => images.push((v.clone(), i)),
            None => return Err(s.err(s.pos, format!("morphism {name} gives no image for '{v}'"))),
        }
    }
    Ok(MorphismDecl { name, source, target, images })
}

/// Parse a model file; `GAL_DEFAULT_FIELD` supplies the field when the file omits it.
pub fn parse_model_file(text: &str) -> Result<ModelFile, CliError> {
    let mut s = Scanner::new(text);
    let field = if s.peek_word().as_deref() == Some("field") {
        s.word();
        parse_field(&mut s)?
    } else {
        default_field()?
    };
    let mut items: Vec<Item> = Vec::new();
    while !s.at_end() {
        let at = s.pos;
        let (kw, _) = s.name("'model', 'chart' or 'morphism'")?;
        let item = match kw.as_str() {
            "model" => Item::Model(parse_model(&mut s, field)?),
            "chart" => Item::Chart(parse_chart(&mut s, field)?),
            "morphism" => Item::Morphism(parse_morphism(&mut s, field, &items)?),
            "field" => return Err(s.err(at, "the field must be declared once, on the first line")),
            other => return Err(s.err(at, format!("expected 'model', 'chart' or 'morphism', found '{other}'"))),
        };
        if items.iter().any(|i| i.name() == item.name()) {
            return Err(s.err(at, format!("duplicate name '{}'", item.name())));
        }
        items.push(item);
    }
    Ok(ModelFile { field, items })
}

impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field)?;
        for item in &self.items {
            writeln!(f)?;
            match item {
                Item::Model(m) => {
                    let groups: Vec<String> = m.groups.iter().map(|g| g.join(" ")).collect();
                    writeln!(f, "model {} {{", m.name)?;
                    writeln!(f, "  proj vars: {}", groups.join(" | "))?;
                    writeln!(f, "  ideal: [{}]", m.ideal.join(", "))?;
                    writeln!(f, "}}")?;
                }
                Item::Chart(c) => {
                    writeln!(f, "chart {} {{", c.name)?;
                    writeln!(f, "  vars: {}", c.vars.join(" "))?;
                    writeln!(f, "  ideal: [{}]", c.ideal.join(", "))?;
                    writeln!(f, "}}")?;
                }
                Item::Morphism(m) => {
                    writeln!(f, "morphism {}: {} -> {} {{", m.name, m.source, m.target)?;
                    for (v, img) in &m.images {
                        writeln!(f, "  {v} -> {img};")?;
                    }
                    writeln!(f, "}}")?;
                }
            }
        }
        Ok(())
    }
}

impl ModelFile {
    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name() == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.name())
    }

    fn decl_model(&self, name: &str) -> Result<&ModelDecl, CliError> {
        match self.get(name) {
            Some(Item::Model(m)) => Ok(m),
            Some(i) => Err(CliError::Usage(format!("'{name}' is a {}, not a model", i.kind()))),
            None => Err(CliError::Usage(format!("no model named '{name}'"))),
        }
    }

    pub fn model(&self, name: &str) -> Result<ProjModel, CliError> {
        let m = self.decl_model(name)?;
        let groups: Vec<Vec<&str>> = m.groups.iter().map(|g| g.iter().map(|s| s.as_str()).collect()).collect();
        let gens: Vec<&str> = m.ideal.iter().map(|s| s.as_str()).collect();
        let pm = ProjModel::new(self.field, &groups, &gens).map_err(|e| CliError::Core(e.in_chart(format!("model {name}"))))?;
        Ok(pm.named(name))
    }

    pub fn chart(&self, name: &str) -> Result<Chart, CliError> {
        match self.get(name) {
            Some(Item::Chart(c)) => {
                let vars: Vec<&str> = c.vars.iter().map(|s| s.as_str()).collect();
                let gens: Vec<&str> = c.ideal.iter().map(|s| s.as_str()).collect();
                Ok(Chart::new(self.field, &vars, &gens)?.named(name))
            }
            Some(i) => Err(CliError::Usage(format!("'{name}' is a {}, not a chart", i.kind()))),
            None => Err(CliError::Usage(format!("no chart named '{name}'"))),
        }
    }

    pub fn morphism(&self, name: &str) -> Result<Morphism, CliError> {
        match self.get(name) {
            Some(Item::Morphism(m)) => {
                let src = self.model(&m.source)?;
                let tgt = if m.target == m.source { src.clone() } else { self.model(&m.target)? };
                let imgs: Vec<&str> = m.images.iter().map(|(_, i)| i.as_str()).collect();
                Ok(Morphism::parse(&src, &tgt, &imgs)?.named(name))
            }
            Some(i) => Err(CliError::Usage(format!("'{name}' is a {}, not a morphism", i.kind()))),
            None => Err(CliError::Usage(format!("no morphism named '{name}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let f = parse_model_file("field Q\nmodel P2 { proj vars: X Y Z ideal: [] }").unwrap();
        assert_eq!(f.field, BaseField::Rationals);
        let Item::Model(m) = &f.items[0] else { panic!() };
        assert_eq!(m.groups, vec![vec!["X", "Y", "Z"]]);
        assert!(m.ideal.is_empty());
    }

    #[test]
    fn missing_brace() {
        let e = parse_model_file("field Q\nmodel P2 {\n  proj vars: X Y Z\n  ideal: []\n\nmodel P1 { proj vars: X Y ideal: [] }").unwrap_err();
        let CliError::Parse { line, .. } = e else { panic!("{e}") };
        assert_eq!(line, 6);
    }

    #[test]
    fn duplicate_names() {
        let e = parse_model_file("field Q\nmodel E { proj vars: X Y ideal: [] }\nmodel E { proj vars: X Y ideal: [] }").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 3, col: 1, .. }), "{e}");
        assert!(e.to_string().contains("duplicate"));
    }

    #[test]
    fn undeclared_variable_location() {
        let e = parse_model_file("field Q\nchart c {\n  vars: x\n  ideal: [x^2 - y]\n}").unwrap_err();
        let CliError::Parse { line, col, .. } = e else { panic!("{e}") };
        assert_eq!((line, col), (4, 17));
    }

    #[test]
    fn morphisms_and_groups() {
        let text = "field F5\nmodel PP { proj vars: X0 X1 | Y0 Y1 ideal: [] }\nmorphism sw: PP -> PP { Y0 -> X0; Y1 -> X1; X0 -> Y0; X1 -> Y1; }";
        let f = parse_model_file(text).unwrap();
        let Item::Morphism(m) = &f.items[1] else { panic!() };
        assert_eq!(m.images[0], ("X0".to_string(), "Y0".to_string()));
        assert!(parse_model_file("field Q\nmorphism f: A -> A { X -> X; }").unwrap_err().to_string().contains("undeclared"));
        let again = parse_model_file(&f.to_string()).unwrap();
        assert_eq!(again, f);
    }
}
