//! Exact arithmetic for the ring catalog every other module is generic over:
//! the integers, residues modulo `m`, free associative rings (optionally with
//! an involution on a doubled alphabet), and integral group rings of finite
//! permutation groups.
//!
//! Ring values are immutable and cheap to clone; [`Elem`] payloads are kept in
//! normal form so structural equality and hashing coincide with ring equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

mod group;
mod literal;
mod spec;

pub use group::{PermGroup, GROUP_CAP};
pub use spec::RingSpecJson;

/// A basis word. Free rings encode letter `k` as `2k` and its starred partner
/// as `2k + 1`; group rings use a single entry holding the group element index.
pub type Basis = Vec<u32>;

/// A normalized ring element payload. Its meaning depends on the owning [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(BigInt),
    Residue(u64),
    /// Finitely supported basis-to-coefficient map with no zero coefficients.
    Lin(BTreeMap<Basis, BigInt>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    Modular {
        m: u64,
    },
    Free {
        gens: Vec<String>,
        involution: bool,
        epsilon: i8,
    },
    GroupRing(PermGroup),
}

/// Shared handle to a ring in the catalog.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingKind>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

// Hashes only the characteristic; values hashed together share a ring.
impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.characteristic().hash(state);
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl Ring {
    pub fn integers() -> Self {
        Ring(Arc::new(RingKind::Integers))
    }

    pub fn modular(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Spec(format!("modulus must be at least 2, got {m}")));
        }
        Ok(Ring(Arc::new(RingKind::Modular { m })))
    }

    /// Free associative ring over the integers on the named generators.
    ///
    /// With `involution` set the alphabet is doubled to `{x, x*}` and `*`
    /// reverses words while swapping each letter with its starred partner.
    pub fn free<S: AsRef<str>>(gens: &[S], involution: bool, epsilon: i8) -> Result<Self> {
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::Spec(format!("epsilon must be +1 or -1, got {epsilon}")));
        }
        let gens: Vec<String> = gens.iter().map(|g| g.as_ref().to_string()).collect();
        for (k, g) in gens.iter().enumerate() {
            if !valid_name(g) {
                return Err(Error::Spec(format!("invalid generator name {g:?}")));
            }
            if gens[..k].contains(g) {
                return Err(Error::Spec(format!("duplicate generator name {g:?}")));
            }
        }
        Ok(Ring(Arc::new(RingKind::Free {
            gens,
            involution,
            epsilon,
        })))
    }

    /// Integral group ring of the permutation group generated by `perm_gens`
    /// (one-based image lists), with involution `g -> g^-1`.
    pub fn group_ring(perm_gens: &[Vec<u32>]) -> Result<Self> {
        let group = PermGroup::generate(perm_gens)?;
        Ok(Ring(Arc::new(RingKind::GroupRing(group))))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    /// 0 for the integral rings, `m` for residues modulo `m`.
    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            RingKind::Modular { m } => *m,
            _ => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind(), RingKind::Modular { .. })
    }

    pub fn order(&self) -> Option<u64> {
        match self.kind() {
            RingKind::Modular { m } => Some(*m),
            _ => None,
        }
    }

    /// All elements, for finite rings.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        match self.kind() {
            RingKind::Modular { m } => Ok((0..*m).map(Elem::Residue).collect()),
            _ => Err(Error::InfiniteRing),
        }
    }

    /// A set generating `(R, +)`, for finite rings.
    pub fn additive_generators(&self) -> Result<Vec<Elem>> {
        match self.kind() {
            RingKind::Modular { .. } => Ok(vec![self.one()]),
            _ => Err(Error::InfiniteRing),
        }
    }

    pub fn has_involution(&self) -> bool {
        match self.kind() {
            RingKind::Free { involution, .. } => *involution,
            _ => true,
        }
    }

    pub fn generator_names(&self) -> &[String] {
        match self.kind() {
            RingKind::Free { gens, .. } => gens,
            _ => &[],
        }
    }

    /// The `k`-th free generator (zero-based).
    pub fn generator(&self, k: usize) -> Result<Elem> {
        match self.kind() {
            RingKind::Free { gens, .. } if k < gens.len() => {
                Ok(Elem::Lin(BTreeMap::from([(vec![2 * k as u32], BigInt::one())])))
            }
            RingKind::GroupRing(g) if k < g.generator_count() => Ok(self.group_element(g.generator(k))),
            _ => Err(Error::Index(format!("ring has no generator {k}"))),
        }
    }

    /// A free ring with at least `k` generators that contains this one.
    /// Rings of other kinds are returned unchanged.
    pub fn with_min_gens(&self, k: usize) -> Ring {
        match self.kind() {
            RingKind::Free {
                gens,
                involution,
                epsilon,
            } if gens.len() < k => {
                let mut gens = gens.clone();
                let mut t = 1;
                while gens.len() < k {
                    let name = format!("t{t}");
                    if !gens.contains(&name) {
                        gens.push(name);
                    }
                    t += 1;
                }
                Ring(Arc::new(RingKind::Free {
                    gens,
                    involution: *involution,
                    epsilon: *epsilon,
                }))
            }
            _ => self.clone(),
        }
    }

    /// Copy of a free ring with the involution flag set.
    pub fn with_involution(&self) -> Ring {
        match self.kind() {
            RingKind::Free { gens, epsilon, .. } => Ring(Arc::new(RingKind::Free {
                gens: gens.clone(),
                involution: true,
                epsilon: *epsilon,
            })),
            _ => self.clone(),
        }
    }

    pub fn group(&self) -> Option<&PermGroup> {
        match self.kind() {
            RingKind::GroupRing(g) => Some(g),
            _ => None,
        }
    }

    pub fn group_element(&self, idx: u32) -> Elem {
        Elem::Lin(BTreeMap::from([(vec![idx], BigInt::one())]))
    }

    fn unit_basis(&self) -> Basis {
        match self.kind() {
            RingKind::GroupRing(_) => vec![0],
            _ => Vec::new(),
        }
    }

    pub fn zero(&self) -> Elem {
        match self.kind() {
            RingKind::Integers => Elem::Int(BigInt::zero()),
            RingKind::Modular { .. } => Elem::Residue(0),
            _ => Elem::Lin(BTreeMap::new()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Elem {
        self.from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(&self, v: BigInt) -> Elem {
        match self.kind() {
            RingKind::Integers => Elem::Int(v),
            RingKind::Modular { m } => {
                let r = v.mod_floor_u64(*m);
                Elem::Residue(r)
            }
            _ => {
                let mut map = BTreeMap::new();
                if !v.is_zero() {
                    map.insert(self.unit_basis(), v);
                }
                Elem::Lin(map)
            }
        }
    }

    /// Checks that a payload is a normalized element of this ring.
    pub fn check(&self, e: &Elem) -> Result<()> {
        let ok = match (self.kind(), e) {
            (RingKind::Integers, Elem::Int(_)) => true,
            (RingKind::Modular { m }, Elem::Residue(r)) => r < m,
            (RingKind::Free { gens, involution, .. }, Elem::Lin(map)) => map.iter().all(|(w, c)| {
                !c.is_zero()
                    && w.iter()
                        .all(|&l| ((l / 2) as usize) < gens.len() && (*involution || l % 2 == 0))
            }),
            (RingKind::GroupRing(g), Elem::Lin(map)) => map
                .iter()
                .all(|(w, c)| !c.is_zero() && w.len() == 1 && (w[0] as usize) < g.order()),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Foreign(format!("{e:?}")))
        }
    }

    pub fn is_zero(&self, e: &Elem) -> bool {
        match e {
            Elem::Int(v) => v.is_zero(),
            Elem::Residue(r) => *r == 0,
            Elem::Lin(map) => map.is_empty(),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (Elem::Residue(x), Elem::Residue(y)) => {
                let m = self.characteristic() as u128;
                Elem::Residue(((*x as u128 + *y as u128) % m) as u64)
            }
            (Elem::Lin(x), Elem::Lin(y)) => {
                let mut out = x.clone();
                for (w, c) in y {
                    add_term(&mut out, w.clone(), c.clone());
                }
                Elem::Lin(out)
            }
            _ => panic!("mixed element payloads in one ring"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Int(x) => Elem::Int(-x),
            Elem::Residue(x) => {
                let m = self.characteristic();
                Elem::Residue(if *x == 0 { 0 } else { m - x })
            }
            Elem::Lin(map) => Elem::Lin(map.iter().map(|(w, c)| (w.clone(), -c)).collect()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (Elem::Residue(x), Elem::Residue(y)) => {
                let m = self.characteristic() as u128;
                Elem::Residue(((*x as u128 * *y as u128) % m) as u64)
            }
            (Elem::Lin(x), Elem::Lin(y)) => {
                let mut out = BTreeMap::new();
                for (wa, ca) in x {
                    for (wb, cb) in y {
                        add_term(&mut out, self.basis_mul(wa, wb), ca * cb);
                    }
                }
                Elem::Lin(out)
            }
            _ => panic!("mixed element payloads in one ring"),
        }
    }

    /// Integer multiple `k·a`.
    pub fn mul_int(&self, a: &Elem, k: i64) -> Elem {
        self.mul(&self.from_int(k), a)
    }

    fn basis_mul(&self, a: &Basis, b: &Basis) -> Basis {
        match self.kind() {
            RingKind::GroupRing(g) => vec![g.mul(a[0], b[0])],
            _ => {
                let mut w = Vec::with_capacity(a.len() + b.len());
                w.extend_from_slice(a);
                w.extend_from_slice(b);
                w
            }
        }
    }

    /// Image of a basis word under the involution.
    pub(crate) fn star_basis(&self, w: &Basis) -> Basis {
        match self.kind() {
            RingKind::GroupRing(g) => vec![g.inv(w[0])],
            _ => w.iter().rev().map(|l| l ^ 1).collect(),
        }
    }

    /// The involution `x -> x*`: identity on the commutative rings, reversal
    /// with starring on involutive free rings, `g -> g^-1` on group rings.
    pub fn star(&self, a: &Elem) -> Result<Elem> {
        match (self.kind(), a) {
            (RingKind::Free { involution: false, .. }, _) => Err(Error::NoInvolution),
            (_, Elem::Lin(map)) => {
                Ok(Elem::Lin(map.iter().map(|(w, c)| (self.star_basis(w), c.clone())).collect()))
            }
            _ => Ok(a.clone()),
        }
    }

    pub fn format(&self, e: &Elem) -> String {
        literal::format(self, e)
    }

    /// Parses an element literal such as `3·xy* + 2` or `-g1g2 + 1`.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        literal::parse(self, s)
    }
}

fn add_term(map: &mut BTreeMap<Basis, BigInt>, w: Basis, c: BigInt) {
    use std::collections::btree_map::Entry;
    match map.entry(w) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        let m_big = BigInt::from(m);
        let mut r = self % &m_big;
        if r.is_negative() {
            r += &m_big;
        }
        r.try_into().expect("residue fits in u64")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Modular { m } => write!(f, "Z/{m}"),
            RingKind::Free {
                gens, involution, ..
            } => {
                let star = if *involution { " with *" } else { "" };
                write!(f, "Z<{}>{star}", gens.join(","))
            }
            RingKind::GroupRing(g) => write!(f, "Z[G], |G| = {}", g.order()),
        }
    }
}

/// An element together with its owning ring; operations check ownership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    ring: Ring,
    value: Elem,
}

impl RingElement {
    pub fn new(ring: &Ring, value: Elem) -> Result<Self> {
        ring.check(&value)?;
        Ok(Self {
            ring: ring.clone(),
            value,
        })
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Self> {
        Ok(Self {
            ring: ring.clone(),
            value: ring.parse(s)?,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::DistinctRings)
        }
    }

    fn wrap(&self, value: Elem) -> Self {
        Self {
            ring: self.ring.clone(),
            value,
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.value))
    }
}

pub fn ring_add(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.same_ring(b)?;
    Ok(a.wrap(a.ring.add(&a.value, &b.value)))
}

pub fn ring_mul(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.same_ring(b)?;
    Ok(a.wrap(a.ring.mul(&a.value, &b.value)))
}

pub fn involution(a: &RingElement) -> Result<RingElement> {
    Ok(a.wrap(a.ring.star(&a.value)?))
}

/// Units of a finite ring, found by exhaustive two-sided pairing.
pub fn units_of(ring: &Ring) -> Result<Vec<Elem>> {
    let all = ring.elements()?;
    let one = ring.one();
    Ok(all
        .iter()
        .filter(|u| {
            all.iter()
                .any(|v| ring.mul(u, v) == one && ring.mul(v, u) == one)
        })
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(ring: &Ring, s: &str) -> RingElement {
        RingElement::parse(ring, s).unwrap()
    }

    #[test]
    fn modular_addition_reduces() {
        let r = Ring::modular(5).unwrap();
        assert_eq!(ring_add(&el(&r, "3"), &el(&r, "4")).unwrap(), el(&r, "2"));
    }

    #[test]
    fn free_ring_cancels_to_normal_form() {
        let r = Ring::free(&["x", "y"], false, 1).unwrap();
        assert_eq!(ring_add(&el(&r, "xy + 1"), &el(&r, "-1")).unwrap(), el(&r, "xy"));
    }

    #[test]
    fn integers_are_arbitrary_precision() {
        let z = Ring::integers();
        let big = RingElement::new(&z, Elem::Int(BigInt::from(1u8) << 64)).unwrap();
        let sum = ring_add(&big, &big).unwrap();
        assert_eq!(sum.value(), &Elem::Int(BigInt::from(1u8) << 65));
    }

    #[test]
    fn free_ring_is_noncommutative() {
        let r = Ring::free(&["x", "y"], false, 1).unwrap();
        let xy = ring_mul(&el(&r, "x"), &el(&r, "y")).unwrap();
        let yx = ring_mul(&el(&r, "y"), &el(&r, "x")).unwrap();
        assert_eq!(xy, el(&r, "xy"));
        assert_eq!(yx, el(&r, "yx"));
        assert_ne!(xy, yx);
    }

    #[test]
    fn zero_divisor_mod_four() {
        let r = Ring::modular(4).unwrap();
        assert_eq!(ring_mul(&el(&r, "2"), &el(&r, "2")).unwrap(), el(&r, "0"));
    }

    #[test]
    fn distributivity_in_one_variable() {
        let r = Ring::free(&["x"], false, 1).unwrap();
        let p = ring_mul(&el(&r, "x + 1"), &el(&r, "x - 1")).unwrap();
        assert_eq!(p, el(&r, "xx - 1"));
    }

    #[test]
    fn distinct_rings_are_rejected() {
        let a = el(&Ring::modular(5).unwrap(), "1");
        let b = el(&Ring::modular(7).unwrap(), "1");
        assert_eq!(ring_add(&a, &b), Err(Error::DistinctRings));
        assert_eq!(ring_mul(&a, &b), Err(Error::DistinctRings));
    }

    #[test]
    fn involution_reverses_products() {
        let r = Ring::free(&["x", "y"], true, -1).unwrap();
        let xy = ring_mul(&el(&r, "x"), &el(&r, "y")).unwrap();
        assert_eq!(involution(&xy).unwrap(), el(&r, "y*x*"));
        assert_eq!(involution(&el(&r, "7")).unwrap(), el(&r, "7"));
        let z = Ring::integers();
        assert_eq!(involution(&el(&z, "7")).unwrap(), el(&z, "7"));
    }

    #[test]
    fn free_ring_without_involution_refuses_star() {
        let r = Ring::free(&["x"], false, 1).unwrap();
        assert_eq!(involution(&el(&r, "x")), Err(Error::NoInvolution));
    }

    #[test]
    fn group_ring_involution_is_anti_multiplicative() {
        let r = Ring::group_ring(&[vec![2, 1, 3], vec![2, 3, 1]]).unwrap();
        let g = r.group().unwrap();
        for a in 0..g.order() as u32 {
            for b in 0..g.order() as u32 {
                let ga = r.group_element(a);
                let gb = r.group_element(b);
                let lhs = r.star(&r.mul(&ga, &gb)).unwrap();
                let rhs = r.mul(&r.star(&gb).unwrap(), &r.star(&ga).unwrap());
                assert_eq!(lhs, rhs);
                assert_eq!(r.star(&ga).unwrap(), r.group_element(g.inv(a)));
            }
        }
    }

    #[test]
    fn units_by_exhaustive_pairing() {
        let units = |m| units_of(&Ring::modular(m).unwrap()).unwrap();
        let res = |v: &[u64]| v.iter().map(|&x| Elem::Residue(x)).collect::<Vec<_>>();
        assert_eq!(units(5), res(&[1, 2, 3, 4]));
        assert_eq!(units(4), res(&[1, 3]));
        assert_eq!(units(2), res(&[1]));
        assert_eq!(units_of(&Ring::integers()), Err(Error::InfiniteRing));
    }

    #[test]
    fn characteristic_is_consistent() {
        for m in 2..12u64 {
            let r = Ring::modular(m).unwrap();
            let mut acc = r.zero();
            for _ in 0..r.characteristic() {
                acc = r.add(&acc, &r.one());
            }
            assert!(r.is_zero(&acc));
        }
        assert_eq!(Ring::integers().characteristic(), 0);
    }

    #[test]
    fn constructor_invariants() {
        assert!(Ring::modular(1).is_err());
        assert!(Ring::free(&["x", "x"], true, 1).is_err());
        assert!(Ring::free(&["x"], true, 2).is_err());
    }

    #[test]
    fn extended_free_ring_keeps_old_generators() {
        let r = Ring::free(&["r", "s"], true, -1).unwrap();
        let big = r.with_min_gens(4);
        assert_eq!(big.generator_names(), &["r", "s", "t1", "t2"]);
        assert_eq!(big.generator(0).unwrap(), r.generator(0).unwrap());
    }
}
