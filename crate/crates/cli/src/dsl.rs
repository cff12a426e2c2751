//! Tangle documents: a line-oriented description of one slice word and the
//! parties that share out its bottom endpoints.
//!
//! ```text
//! # name: chained
//! mode kauffman
//! top 0
//! cup 1
//! cup 3
//! over 2
//! bottom 4
//! party A 1..2 plain
//! party B 3..4 plain
//! ```
//!
//! Everything after `#` is a comment. Full-line comments are kept as document
//! metadata (a `# name: …` line names the document); trailing comments are
//! dropped. Slices are checked against the running width as they are read, and
//! every error names the offending line.

use std::fmt;

use tl_entangle::state_space::{Party, PartyLayout};
use tl_entangle::tangle::{Slice, SliceWord};
use tl_entangle::Mode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A party line: 1-based inclusive range of bottom endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyDecl {
    pub name: String,
    pub first: usize,
    pub last: usize,
    /// A party of planar matchings rather than four projector-dressed bundles.
    pub plain: bool,
}

impl PartyDecl {
    pub fn len(&self) -> usize {
        self.last + 1 - self.first
    }

    pub fn is_empty(&self) -> bool {
        self.last < self.first
    }

    fn party(&self) -> Party {
        if self.plain {
            Party::plain(&self.name, self.first - 1, self.len())
        } else {
            Party::punctured(&self.name, self.first - 1, self.len() / 4)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleDocument {
    pub name: Option<String>,
    pub comments: Vec<String>,
    pub mode: Mode,
    pub top: usize,
    /// Width after the last slice.
    pub bottom: usize,
    pub slices: Vec<Slice>,
    pub parties: Vec<PartyDecl>,
}

impl TangleDocument {
    pub fn word(&self) -> SliceWord {
        SliceWord { top_width: self.top, slices: self.slices.clone() }
    }

    /// The declared parties, in declaration order; `None` without party lines.
    pub fn layout(&self) -> Option<PartyLayout> {
        if self.parties.is_empty() {
            return None;
        }
        let parties = self.parties.iter().map(PartyDecl::party).collect();
        Some(PartyLayout::new(self.bottom, parties).expect("party lines were validated on parse"))
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

fn int(tok: Option<&str>, what: &str, line: usize) -> Result<usize, ParseError> {
    match tok {
        None => err(line, format!("missing {}", what)),
        Some(t) => t.parse().or_else(|_| err(line, format!("{} must be a non-negative integer, got '{}'", what, t))),
    }
}

fn position(tok: Option<&str>, line: usize) -> Result<usize, ParseError> {
    let i = int(tok, "position", line)?;
    if i == 0 {
        return err(line, "positions are 1-based");
    }
    Ok(i)
}

fn no_more<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<(), ParseError> {
    match toks.next() {
        Some(t) => err(line, format!("unexpected '{}'", t)),
        None => Ok(()),
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_range(tok: Option<&str>, line: usize) -> Result<(usize, usize), ParseError> {
    let tok = match tok {
        Some(t) => t,
        None => return err(line, "missing endpoint range <first>..<last>"),
    };
    let (a, b) = match tok.split_once("..") {
        Some(ab) => ab,
        None => return err(line, format!("expected <first>..<last>, got '{}'", tok)),
    };
    let first = int(Some(a), "range start", line)?;
    let last = int(Some(b), "range end", line)?;
    if first == 0 || last < first {
        return err(line, format!("empty or 0-based range {}..{}", first, last));
    }
    Ok((first, last))
}

pub fn parse_tangle(text: &str) -> Result<TangleDocument, ParseError> {
    let mut name = None;
    let mut comments = Vec::new();
    let mut mode: Option<(Mode, usize)> = None;
    let mut top: Option<usize> = None;
    let mut width = 0;
    let mut slices = Vec::new();
    let mut bottom: Option<(usize, usize)> = None;
    let mut parties: Vec<(PartyDecl, usize)> = Vec::new();
    let mut last_line = 1;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        let mut toks = body.split_whitespace();
        let head = match toks.next() {
            Some(h) => h,
            None => {
                if let Some(c) = comment {
                    let c = c.strip_prefix(' ').unwrap_or(c);
                    match c.strip_prefix("name:") {
                        Some(n) if name.is_none() => name = Some(n.trim().to_string()),
                        _ => comments.push(c.to_string()),
                    }
                }
                continue;
            }
        };
        if bottom.is_some() && !matches!(head, "party") {
            return err(line, format!("'{}' after the bottom line", head));
        }
        match head {
            "mode" => {
                if let Some((_, at)) = mode {
                    return err(line, format!("mode already set on line {}", at));
                }
                let m = match toks.next() {
                    Some("kauffman") => Mode::Kauffman,
                    Some("permutation") => Mode::Permutation,
                    Some(other) => return err(line, format!("unknown mode '{}' (kauffman or permutation)", other)),
                    None => return err(line, "missing mode"),
                };
                no_more(toks, line)?;
                mode = Some((m, line));
            }
            "top" => {
                if !slices.is_empty() || top.is_some() {
                    return err(line, "top must come once, before the first slice");
                }
                let t = int(toks.next(), "top width", line)?;
                no_more(toks, line)?;
                top = Some(t);
                width = t;
            }
            "bottom" => {
                let b = int(toks.next(), "bottom width", line)?;
                no_more(toks, line)?;
                if b != width {
                    return err(line, format!("bottom declared as {} but the slices end at width {}", b, width));
                }
                bottom = Some((b, line));
            }
            "party" => {
                let pname = match toks.next() {
                    Some(n) if is_ident(n) => n.to_string(),
                    Some(n) => return err(line, format!("'{}' is not a party name", n)),
                    None => return err(line, "missing party name"),
                };
                let (first, last) = parse_range(toks.next(), line)?;
                let plain = match toks.next() {
                    None => false,
                    Some("plain") => true,
                    Some(other) => {
                        return err(line, format!("unexpected '{}' (only 'plain' may follow the range)", other))
                    }
                };
                no_more(toks, line)?;
                let decl = PartyDecl { name: pname, first, last, plain };
                if plain && !decl.len().is_multiple_of(2) {
                    return err(line, format!("plain party {} has an odd number of endpoints", decl.name));
                }
                if !plain && !decl.len().is_multiple_of(4) {
                    return err(
                        line,
                        format!(
                            "party {} has {} endpoints, not a multiple of 4 (mark it 'plain'?)",
                            decl.name,
                            decl.len()
                        ),
                    );
                }
                if let Some((p, at)) = parties.iter().find(|(p, _)| p.name == decl.name) {
                    return err(line, format!("party {} already declared on line {}", p.name, at));
                }
                if let Some((p, at)) = parties.iter().find(|(p, _)| p.first <= decl.last && decl.first <= p.last) {
                    return err(
                        line,
                        format!(
                            "range {}..{} overlaps party {} ({}..{}, line {})",
                            first, last, p.name, p.first, p.last, at
                        ),
                    );
                }
                parties.push((decl, line));
            }
            _ => {
                let s = match head {
                    "cup" => Slice::Cup(position(toks.next(), line)?),
                    "cap" => Slice::Cap(position(toks.next(), line)?),
                    "e" => Slice::E(position(toks.next(), line)?),
                    "over" => Slice::Over(position(toks.next(), line)?),
                    "under" => Slice::Under(position(toks.next(), line)?),
                    "jw" => {
                        let i = position(toks.next(), line)?;
                        let w = int(toks.next(), "projector width", line)?;
                        if w == 0 {
                            return err(line, "projector width must be positive");
                        }
                        Slice::Jw(i, w)
                    }
                    other => return err(line, format!("unknown statement '{}'", other)),
                };
                no_more(toks, line)?;
                width = match s.apply_width(width) {
                    Some(w) => w,
                    None => return err(line, format!("'{}' is out of range at width {}", s, width)),
                };
                slices.push(s);
            }
        }
    }

    let top = top.unwrap_or(0);
    if !parties.is_empty() {
        let at = parties.last().map(|(_, l)| *l).unwrap_or(last_line);
        if top != 0 {
            return err(at, format!("parties share out a state, but the document has {} top endpoints", top));
        }
        for (p, l) in &parties {
            if p.last > width {
                return err(*l, format!("party {} reaches endpoint {} of {}", p.name, p.last, width));
            }
        }
        let covered: usize = parties.iter().map(|(p, _)| p.len()).sum();
        if covered != width {
            let mut owned = vec![false; width];
            for (p, _) in &parties {
                owned[p.first - 1..p.last].iter_mut().for_each(|o| *o = true);
            }
            let free = owned.iter().position(|o| !o).map(|i| i + 1).unwrap_or(0);
            return err(at, format!("endpoint {} belongs to no party", free));
        }
    }
    Ok(TangleDocument {
        name,
        comments,
        mode: mode.map(|(m, _)| m).unwrap_or(Mode::Kauffman),
        top,
        bottom: width,
        slices,
        parties: parties.into_iter().map(|(p, _)| p).collect(),
    })
}

impl fmt::Display for TangleDocument {
    /// Canonical text: metadata comments, header, slices, bottom, parties.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            writeln!(f, "# name: {}", n)?;
        }
        for c in &self.comments {
            if c.is_empty() {
                writeln!(f, "#")?;
            } else {
                writeln!(f, "# {}", c)?;
            }
        }
        writeln!(f, "mode {}", self.mode)?;
        writeln!(f, "top {}", self.top)?;
        for s in &self.slices {
            writeln!(f, "{}", s)?;
        }
        writeln!(f, "bottom {}", self.bottom)?;
        for p in &self.parties {
            write!(f, "party {} {}..{}", p.name, p.first, p.last)?;
            if p.plain {
                write!(f, " plain")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAXENT: &str = "\
# name: maxent
top 0
cup 1  # inner pair
cup 1
cup 1
cup 1
bottom 8
party A 1..4
party B 5..8
";

    #[test]
    fn parses_header_slices_and_parties() {
        let doc = parse_tangle(MAXENT).unwrap();
        assert_eq!(doc.name.as_deref(), Some("maxent"));
        assert_eq!(doc.mode, Mode::Kauffman);
        assert_eq!((doc.top, doc.bottom), (0, 8));
        assert_eq!(doc.slices, vec![Slice::Cup(1); 4]);
        assert_eq!(doc.layout().unwrap().dims(), vec![2, 2]);
    }

    #[test]
    fn position_errors_name_the_line() {
        let e = parse_tangle("top 2\n\nover 3\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("out of range at width 2"), "{}", e);
    }

    #[test]
    fn width_and_party_errors() {
        assert_eq!(parse_tangle("cup 1\nbottom 4\n").unwrap_err().line, 2);
        let overlap = "cup 1\ncup 1\ncup 1\ncup 1\nparty A 1..4\nparty B 4..7\n";
        let e = parse_tangle(overlap).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.message.contains("overlaps party A"));
        let gap = "cup 1\ncup 1\nparty A 1..2 plain\n";
        assert!(parse_tangle(gap).unwrap_err().message.contains("endpoint 3 belongs to no party"));
        assert!(parse_tangle("cup 1\nparty A 1..2\n").unwrap_err().message.contains("multiple of 4"));
        assert_eq!(parse_tangle("mode braid\n").unwrap_err().line, 1);
        assert_eq!(parse_tangle("cup 1\ntop 0\n").unwrap_err().line, 2);
        assert_eq!(parse_tangle("cup 0\n").unwrap_err().line, 1);
        assert_eq!(parse_tangle("cup 1 2\n").unwrap_err().line, 1);
    }

    #[test]
    fn pretty_print_round_trips() {
        let doc = parse_tangle(MAXENT).unwrap();
        let again = parse_tangle(&doc.to_string()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(doc.to_string(), again.to_string());
    }
}
