//! Steinberg words in the symbols x_ij(r) and their evaluation x_ij(r) -> e_ij(r).
//!
//! Only consistency of the relations under evaluation is certified; the word
//! problem in St_n(R) is not attempted.

use std::fmt;

use crate::elementary::e;
use crate::error::{Error, Result};
use crate::exactmat::GroupElement;
use crate::report::{Check, Report};
use crate::rings::{Elem, Ring};
use crate::sampling::{ring_plan, Mode, SampleConfig};
use crate::word::{Letter, Syllable, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct StLetter {
    pub i: usize,
    pub j: usize,
    pub r: Elem,
}

#[derive(Clone, Debug)]
pub struct StCtx {
    pub ring: Ring,
    pub n: usize,
}

impl Letter for StLetter {
    type Ctx = StCtx;

    fn eval(&self, ctx: &StCtx) -> Result<GroupElement> {
        e(&ctx.ring, ctx.n, self.i, self.j, &self.r)
    }

    fn identity(ctx: &StCtx) -> GroupElement {
        GroupElement::identity(&ctx.ring, ctx.n)
    }

    fn is_trivial(&self) -> bool {
        match &self.r {
            Elem::Int(v) => num_traits::Zero::is_zero(v),
            Elem::Residue(v) => *v == 0,
            Elem::Lin(m) => m.is_empty(),
        }
    }
}

impl fmt::Display for StLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{},{}({:?})", self.i, self.j, self.r)
    }
}

/// A word in St_n(R); every letter has i ≠ j in 1..=n.
#[derive(Clone, Debug, PartialEq)]
pub struct StWord {
    n: usize,
    word: Word<StLetter>,
}

impl StWord {
    pub fn empty(n: usize) -> Self {
        Self { n, word: Word::empty() }
    }

    pub fn x(n: usize, i: usize, j: usize, r: Elem) -> Result<Self> {
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Index(format!("x_({i},{j}) in St_{n}")));
        }
        Ok(Self {
            n,
            word: Word::letter(StLetter { i, j, r }),
        })
    }

    /// Builds a word from `(i, j, r, inverse)` syllables.
    pub fn from_syllables(n: usize, syllables: Vec<(usize, usize, Elem, bool)>) -> Result<Self> {
        let mut w = Self::empty(n);
        for (i, j, r, inverse) in syllables {
            let mut x = Self::x(n, i, j, r)?;
            if inverse {
                x = x.inverse();
            }
            w = w.then(&x)?;
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable<StLetter>] {
        &self.word.syllables
    }

    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("St_{} word times St_{} word", self.n, other.n)));
        }
        Ok(Self {
            n: self.n,
            word: self.word.clone().then(&other.word),
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            word: self.word.inverse(),
        }
    }

    pub fn commutator(u: &Self, v: &Self) -> Result<Self> {
        u.then(v)?.then(&u.inverse())?.then(&v.inverse())
    }
}

impl fmt::Display for StWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

pub fn st_evaluate(ring: &Ring, w: &StWord) -> Result<GroupElement> {
    w.word.evaluate(&StCtx {
        ring: ring.clone(),
        n: w.n,
    })
}

/// Removes zero-parameter letters and adjacent inverse pairs; never merges.
pub fn st_free_reduce(w: &StWord) -> StWord {
    StWord {
        n: w.n,
        word: w.word.free_reduce(),
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Symbolic => "symbolic",
        Mode::Exhaustive => "exhaustive",
        Mode::Random => "random",
    }
}

/// St1-St3 instances over every admissible index tuple, compared after
/// evaluation.
pub fn verify_st_relations(ring: &Ring, n: usize, cfg: &SampleConfig) -> Result<Report> {
    if n < 3 {
        return Err(Error::Dimension(format!("needs n >= 3, got {n}")));
    }
    let plan = ring_plan(ring, 2, cfg)?;
    let r = &plan.ring;
    let mut st1 = Check::new("st.1");
    let mut st2 = Check::new("st.2");
    let mut st3 = Check::new("st.3");
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let eval = |w: &StWord| st_evaluate(r, w);
    for case in &plan.cases {
        let (a, b) = (&case[0], &case[1]);
        let w = |what: String| format!("{what}, r = {}, s = {}", r.format(a), r.format(b));
        for &(i, j) in &pairs {
            let lhs = StWord::x(n, i, j, a.clone())?.then(&StWord::x(n, i, j, b.clone())?)?;
            let rhs = StWord::x(n, i, j, r.add(a, b))?;
            st1.record(eval(&lhs)?.value() == eval(&rhs)?.value(), || w(format!("x_{i}{j}")));
            for k in (1..=n).filter(|&k| k != i && k != j) {
                let lhs = StWord::commutator(&StWord::x(n, i, j, a.clone())?, &StWord::x(n, j, k, b.clone())?)?;
                let rhs = StWord::x(n, i, k, r.mul(a, b))?;
                st2.record(eval(&lhs)?.value() == eval(&rhs)?.value(), || w(format!("({i}, {j}, {k})")));
            }
            for &(k, l) in pairs.iter().filter(|&&(k, l)| k != j && l != i) {
                let lhs = StWord::commutator(&StWord::x(n, i, j, a.clone())?, &StWord::x(n, k, l, b.clone())?)?;
                st3.record(eval(&lhs)?.is_identity(), || w(format!("({i}, {j}, {k}, {l})")));
            }
        }
    }
    let mut report = Report::new();
    for c in [st1, st2, st3] {
        report.push(c.value("mode", mode_name(plan.mode)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> Ring {
        Ring::free(&["r", "s"], false, 1).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let r = free();
        let (a, b) = (r.parse("r").unwrap(), r.parse("s").unwrap());
        assert!(st_evaluate(&r, &StWord::empty(3)).unwrap().is_identity());
        let w = StWord::x(3, 1, 2, a.clone()).unwrap().then(&StWord::x(3, 1, 2, r.neg(&a)).unwrap()).unwrap();
        assert!(st_evaluate(&r, &w).unwrap().is_identity());
        let c = StWord::from_syllables(
            3,
            vec![(1, 2, a.clone(), false), (2, 3, b.clone(), false), (1, 2, a.clone(), true), (2, 3, b.clone(), true)],
        )
        .unwrap();
        assert_eq!(st_evaluate(&r, &c).unwrap(), e(&r, 3, 1, 3, &r.mul(&a, &b)).unwrap());
    }

    #[test]
    fn free_reduction_examples() {
        let r = free();
        let a = r.parse("r").unwrap();
        let b = r.parse("s").unwrap();
        let x = StWord::x(3, 1, 2, a.clone()).unwrap();
        assert!(st_free_reduce(&x.then(&x.inverse()).unwrap()).is_empty());
        assert!(st_free_reduce(&StWord::x(3, 1, 2, r.zero()).unwrap()).is_empty());
        let two = x.then(&StWord::x(3, 1, 2, b).unwrap()).unwrap();
        assert_eq!(st_free_reduce(&two), two);
    }

    #[test]
    fn bad_indices() {
        let r = free();
        assert!(StWord::x(3, 2, 2, r.one()).is_err());
        assert!(StWord::x(3, 1, 4, r.one()).is_err());
        assert!(StWord::empty(3).then(&StWord::empty(4)).is_err());
    }

    #[test]
    fn relations_hold() {
        let cfg = SampleConfig::default();
        for n in [3, 4] {
            assert!(verify_st_relations(&free(), n, &cfg).unwrap().passed());
        }
        let rep = verify_st_relations(&Ring::modular(2).unwrap(), 3, &cfg).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.get("st.2").unwrap().cases, 4 * 6);
    }
}
