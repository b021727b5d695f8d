//! Element literals: signed sums of terms `c·w`, where `w` is a product of
//! generator names, each optionally followed by `*`. Integers and residues
//! accept plain integer sums only. Group ring generators are named `g1..gk`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Elem, Ring, RingKind};
use crate::error::{Error, Result};

fn names(ring: &Ring) -> Vec<String> {
    match ring.kind() {
        RingKind::Free { gens, .. } => gens.clone(),
        RingKind::GroupRing(g) => (1..=g.generator_count()).map(|k| format!("g{k}")).collect(),
        _ => Vec::new(),
    }
}

fn monomial(ring: &Ring, w: &[u32]) -> String {
    match ring.kind() {
        RingKind::Free { gens, .. } => w
            .iter()
            .map(|&l| {
                let name = &gens[(l / 2) as usize];
                if l % 2 == 1 {
                    format!("{name}*")
                } else {
                    name.clone()
                }
            })
            .collect(),
        RingKind::GroupRing(g) => g.word(w[0]).iter().map(|k| format!("g{}", k + 1)).collect(),
        _ => String::new(),
    }
}

pub(super) fn format(ring: &Ring, e: &Elem) -> String {
    let map = match e {
        Elem::Int(v) => return v.to_string(),
        Elem::Residue(r) => return r.to_string(),
        Elem::Lin(map) => map,
    };
    if map.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (w, c)) in map.iter().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        let mono = monomial(ring, w);
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}·{mono}"));
        }
    }
    out
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    ring: &'a Ring,
    names: Vec<String>,
}

impl Cursor<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().ok()
    }

    /// Longest generator name at the cursor, as its index.
    fn name(&mut self) -> Option<usize> {
        let rest: String = self.chars[self.pos..].iter().collect();
        let best = self
            .names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len())?;
        self.pos += best.1.chars().count();
        Some(best.0)
    }

    fn monomial(&mut self) -> Result<Option<Elem>> {
        let mut acc: Option<Elem> = None;
        while let Some(k) = self.name() {
            let mut factor = self.ring.generator(k)?;
            if self.peek() == Some('*') {
                self.pos += 1;
                factor = match self.ring.star(&factor) {
                    Ok(f) => f,
                    Err(_) => return self.err("ring has no involution"),
                };
            }
            acc = Some(match acc {
                None => factor,
                Some(a) => self.ring.mul(&a, &factor),
            });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Elem> {
        let coeff = self.integer();
        let save = self.pos;
        self.skip_ws();
        let dotted = matches!(self.peek(), Some('·') | Some('.'));
        if dotted {
            self.pos += 1;
            self.skip_ws();
        } else if coeff.is_some() {
            self.pos = save;
            // juxtaposition without whitespace, e.g. `3xy`
        }
        let mono = self.monomial()?;
        match (coeff, mono) {
            (None, None) => self.err("expected an integer or a generator name"),
            (Some(_), None) if dotted => self.err("expected a generator name after '·'"),
            (Some(c), None) => Ok(self.ring.from_bigint(c)),
            (None, Some(m)) => Ok(m),
            (Some(c), Some(m)) => Ok(self.ring.mul(&self.ring.from_bigint(c), &m)),
        }
    }
}

pub(super) fn parse(ring: &Ring, s: &str) -> Result<Elem> {
    let mut cur = Cursor {
        chars: s.chars().collect(),
        pos: 0,
        ring,
        names: names(ring),
    };
    let mut total = ring.zero();
    let mut first = true;
    loop {
        cur.skip_ws();
        let mut negative = false;
        match cur.peek() {
            Some('+') if !first => cur.pos += 1,
            Some('-') => {
                negative = true;
                cur.pos += 1;
            }
            None if first => return cur.err("empty literal"),
            Some(c) if !first => return cur.err(format!("expected '+' or '-', found {c:?}")),
            _ => {}
        }
        cur.skip_ws();
        let mut t = cur.term()?;
        if negative {
            t = ring.neg(&t);
        }
        total = ring.add(&total, &t);
        first = false;
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
    }
    if let Elem::Int(v) = &total {
        if v.is_zero() {
            return Ok(ring.zero());
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_free_literals() {
        let r = Ring::free(&["x", "y"], true, -1).unwrap();
        for s in ["3·xy* + 2", "-x + y*x", "0", "5", "-2·x*x*"] {
            let e = r.parse(s).unwrap();
            assert_eq!(r.parse(&r.format(&e)).unwrap(), e, "{s}");
        }
        assert_eq!(r.parse("3xy*").unwrap(), r.parse("3·xy*").unwrap());
    }

    #[test]
    fn reports_position_of_errors() {
        let r = Ring::free(&["x"], false, 1).unwrap();
        match r.parse("x + q") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.parse("x*").is_err());
        assert!(Ring::integers().parse("").is_err());
        assert!(Ring::integers().parse("x").is_err());
    }

    #[test]
    fn integer_literals_reduce() {
        let r = Ring::modular(5).unwrap();
        assert_eq!(r.parse("7").unwrap(), Elem::Residue(2));
        assert_eq!(r.parse("-1").unwrap(), Elem::Residue(4));
        assert_eq!(Ring::integers().parse("2 - 9").unwrap(), Elem::Int((-7).into()));
    }

    #[test]
    fn group_ring_words() {
        let r = Ring::group_ring(&[vec![2, 1, 3], vec![2, 3, 1]]).unwrap();
        let e = r.parse("2·g1g2 - 1").unwrap();
        assert_eq!(r.parse(&r.format(&e)).unwrap(), e);
        let g1 = r.parse("g1").unwrap();
        assert_eq!(r.mul(&g1, &g1), r.one());
        assert_eq!(r.parse("g2*").unwrap(), r.star(&r.parse("g2").unwrap()).unwrap());
    }
}
