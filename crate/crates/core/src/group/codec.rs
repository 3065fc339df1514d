//! Canonical text form of elements.
//!
//! ```text
//! element := leaf | point "|" "{" [ lamp ( "," lamp )* ] "}"
//! lamp    := point "↦" element
//! point   := "(" int "," int ")"    for Z^2 levels
//!          | "(" int ")"            for Z levels
//! leaf    := int
//! ```
//!
//! Lamps appear in increasing `(x, y)` order and never hold the identity,
//! so the encoding is injective on canonical elements.

use std::fmt::Write;

use super::{Element, GroupSpec, Lattice, Point};
use crate::error::{Error, Result};

const MAPS_TO: &str = "↦";

pub(crate) fn encode(levels: &[Lattice], a: &Element) -> String {
    let mut out = String::new();
    write_element(&mut out, levels, a);
    out
}

fn write_point(out: &mut String, lattice: Lattice, p: Point) {
    match lattice {
        Lattice::Z => write!(out, "({})", p.x),
        Lattice::Z2 => write!(out, "({},{})", p.x, p.y),
    }
    .unwrap();
}

fn write_element(out: &mut String, levels: &[Lattice], a: &Element) {
    match (levels.split_first(), a) {
        (Some((&lattice, inner)), Element::Node(n)) => {
            write_point(out, lattice, n.base());
            out.push_str("|{");
            for (i, (p, v)) in n.lamps().iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_point(out, lattice, *p);
                out.push_str(MAPS_TO);
                write_element(out, inner, v);
            }
            out.push('}');
        }
        (_, Element::Leaf(v)) => write!(out, "{v}").unwrap(),
        // Depth mismatch; encode structurally anyway.
        (None, Element::Node(_)) => out.push('?'),
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{token}'")))
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        let hit = self.rest().starts_with(token);
        if hit {
            self.pos += token.len();
        }
        hit
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        let bytes = self.rest().as_bytes();
        let mut len = usize::from(bytes.first() == Some(&b'-'));
        while bytes.get(len).is_some_and(u8::is_ascii_digit) {
            len += 1;
        }
        let digits = &self.rest()[..len];
        let v = digits
            .parse::<i64>()
            .map_err(|_| Error::parse(start, "expected an integer"))?;
        // Canonical integers: no "-0", no leading zeros.
        if digits.starts_with("-0") || (digits.len() > 1 && digits.starts_with('0')) {
            return Err(Error::parse(start, "non-canonical integer"));
        }
        self.pos += len;
        Ok(v)
    }

    fn coord(&mut self) -> Result<i32> {
        let start = self.pos;
        let v = self.int()?;
        i32::try_from(v).map_err(|_| Error::parse(start, "coordinate out of range"))
    }

    fn point(&mut self, lattice: Lattice) -> Result<Point> {
        self.expect("(")?;
        let x = self.coord()?;
        let y = match lattice {
            Lattice::Z => 0,
            Lattice::Z2 => {
                self.expect(",")?;
                self.coord()?
            }
        };
        self.expect(")")?;
        Ok(Point::new(x, y))
    }

    fn element(&mut self, spec: &GroupSpec, level: usize) -> Result<Element> {
        let Some(&lattice) = spec.levels().get(level) else {
            let start = self.pos;
            let v = self.int()?;
            if spec.leaf().reduce(v) != v {
                return Err(Error::parse(start, "leaf residue out of range"));
            }
            return Ok(Element::Leaf(v));
        };
        let base = self.point(lattice)?;
        self.expect("|{")?;
        let mut lamps: Vec<(Point, Element)> = Vec::new();
        if !self.eat("}") {
            loop {
                let key_pos = self.pos;
                let key = self.point(lattice)?;
                if lamps.last().is_some_and(|(prev, _)| *prev >= key) {
                    return Err(Error::parse(key_pos, "lamp keys must be strictly increasing"));
                }
                self.expect(MAPS_TO)?;
                let value_pos = self.pos;
                let value = self.element(spec, level + 1)?;
                if value.is_identity() {
                    return Err(Error::parse(value_pos, "lamp holds the identity"));
                }
                lamps.push((key, value));
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(Element::from_sorted(base, lamps))
    }
}

pub(crate) fn decode(spec: &GroupSpec, text: &str) -> Result<Element> {
    let mut cursor = Cursor { text, pos: 0 };
    let e = cursor.element(spec, 0)?;
    if cursor.pos != text.len() {
        return Err(Error::parse(cursor.pos, "trailing input"));
    }
    Ok(e)
}
