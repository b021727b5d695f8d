//! Words in tagged generators, evaluated to matrices with formula inverses.

use std::fmt;

use crate::error::Result;
use crate::exactmat::GroupElement;

/// A generator symbol that evaluates to an invertible matrix in some context.
pub trait Letter: Clone + PartialEq + fmt::Debug {
    type Ctx;

    fn eval(&self, ctx: &Self::Ctx) -> Result<GroupElement>;

    fn identity(ctx: &Self::Ctx) -> GroupElement;

    /// True when the letter evaluates to the identity for formal reasons
    /// (a zero parameter).
    fn is_trivial(&self) -> bool;
}

/// A letter with an exponent of +1 (`inverse = false`) or -1.
#[derive(Clone, Debug, PartialEq)]
pub struct Syllable<L> {
    pub letter: L,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Word<L> {
    pub syllables: Vec<Syllable<L>>,
}

impl<L> Default for Word<L> {
    fn default() -> Self {
        Self { syllables: Vec::new() }
    }
}

impl<L: Letter> Word<L> {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(l: L) -> Self {
        Self {
            syllables: vec![Syllable {
                letter: l,
                inverse: false,
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = &L> {
        self.syllables.iter().map(|s| &s.letter)
    }

    pub fn then(mut self, other: &Self) -> Self {
        self.syllables.extend(other.syllables.iter().cloned());
        self
    }

    /// Reversed word with every exponent flipped.
    pub fn inverse(&self) -> Self {
        Self {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    letter: s.letter.clone(),
                    inverse: !s.inverse,
                })
                .collect(),
        }
    }

    /// `[u, v] = u v u^-1 v^-1`.
    pub fn commutator(u: &Self, v: &Self) -> Self {
        u.clone().then(v).then(&u.inverse()).then(&v.inverse())
    }

    pub fn evaluate(&self, ctx: &L::Ctx) -> Result<GroupElement> {
        let mut acc = L::identity(ctx);
        for s in &self.syllables {
            let g = s.letter.eval(ctx)?;
            acc = acc.mul(&if s.inverse { g.inv() } else { g })?;
        }
        Ok(acc)
    }

    /// Drops trivial letters and cancels adjacent `l l^-1` pairs. Letters are
    /// never merged, so `x(r) x(s)` stays as it is.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Syllable<L>> = Vec::with_capacity(self.syllables.len());
        for s in &self.syllables {
            if s.letter.is_trivial() {
                continue;
            }
            match out.last() {
                Some(t) if t.letter == s.letter && t.inverse != s.inverse => {
                    out.pop();
                }
                _ => out.push(s.clone()),
            }
        }
        Self { syllables: out }
    }
}

impl<L: fmt::Display> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (k, s) in self.syllables.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", s.letter)?;
            if s.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}
