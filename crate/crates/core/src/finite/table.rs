use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::exactmat::{commutator, GroupElement, Matrix};
use crate::rings::{Elem, Ring, RingKind};

/// Default element cap for closure searches.
pub const DEFAULT_CAP: usize = 5_000_000;

/// Matrices over `Z/m` whose entries fit in 128 bits are stored packed.
#[derive(Clone, Debug)]
enum Store {
    Packed {
        m: u64,
        bits: u32,
        set: IndexSet<u128>,
        /// generator values and inverses as flat row-major residues
        gens: Vec<(Vec<u64>, Vec<u64>)>,
    },
    Dense {
        set: IndexSet<Matrix>,
    },
}

/// A finite matrix group enumerated by breadth-first closure.
///
/// Element 0 is the identity. Insertion order is canonical for a fixed
/// generator order, so sizes and provenance words are reproducible.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    ring: Ring,
    n: usize,
    store: Store,
    /// (parent index, generator index) for every element but the identity
    parents: Vec<(u32, u32)>,
    generators: Vec<GroupElement>,
    cap: usize,
    complete: bool,
}

fn packing(ring: &Ring, n: usize) -> Option<(u64, u32)> {
    match ring.kind() {
        RingKind::Modular { m } => {
            let bits = 64 - (m - 1).leading_zeros();
            (bits as usize * n * n <= 128).then_some((*m, bits))
        }
        _ => None,
    }
}

fn flat(m: &Matrix) -> Vec<u64> {
    m.entries()
        .iter()
        .map(|e| match e {
            Elem::Residue(v) => *v,
            _ => unreachable!("packed tables hold residues"),
        })
        .collect()
}

fn pack(v: &[u64], bits: u32) -> u128 {
    v.iter()
        .enumerate()
        .fold(0u128, |acc, (k, &x)| acc | ((x as u128) << (bits as usize * k)))
}

fn unpack(key: u128, bits: u32, len: usize, out: &mut [u64]) {
    let mask = (1u128 << bits) - 1;
    for (k, slot) in out.iter_mut().enumerate().take(len) {
        *slot = ((key >> (bits as usize * k)) & mask) as u64;
    }
}

fn mul_flat(a: &[u64], b: &[u64], n: usize, m: u64, out: &mut [u64]) {
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0u128;
            for k in 0..n {
                acc += a[i * n + k] as u128 * b[k * n + j] as u128;
            }
            out[i * n + j] = (acc % m as u128) as u64;
        }
    }
}

impl FiniteGroupTable {
    /// An unexpanded table holding only the identity.
    fn empty(ring: &Ring, n: usize, cap: usize) -> Self {
        let store = match packing(ring, n) {
            Some((m, bits)) => {
                let id = flat(&Matrix::identity(ring, n));
                Store::Packed {
                    m,
                    bits,
                    set: IndexSet::from([pack(&id, bits)]),
                    gens: Vec::new(),
                }
            }
            None => Store::Dense {
                set: IndexSet::from([Matrix::identity(ring, n)]),
            },
        };
        Self {
            ring: ring.clone(),
            n,
            store,
            parents: vec![(0, u32::MAX)],
            generators: Vec::new(),
            cap: cap.max(1),
            complete: true,
        }
    }

    /// Closure of `gens` under multiplication, stopping at `cap` elements.
    /// Works over any ring as long as the generated group is finite.
    pub fn closure(ring: &Ring, n: usize, gens: Vec<GroupElement>, cap: usize) -> Result<Self> {
        let mut t = Self::empty(ring, n, cap);
        for g in gens {
            t.push_generator(g)?;
        }
        t.expand(0, 0);
        Ok(t)
    }

    fn push_generator(&mut self, g: GroupElement) -> Result<()> {
        if g.dim() != self.n {
            return Err(Error::Dimension(format!("generator of size {} in a table of size {}", g.dim(), self.n)));
        }
        if *g.ring() != self.ring {
            return Err(Error::DistinctRings);
        }
        if let Store::Packed { gens, .. } = &mut self.store {
            gens.push((flat(g.value()), flat(g.inverse_matrix())));
        }
        self.generators.push(g);
        Ok(())
    }

    /// Multiplies elements `[from..]` by every generator, and elements
    /// `[..from]` by generators `[first_new_gen..]` only.
    fn expand(&mut self, from: usize, first_new_gen: usize) {
        let n = self.n;
        let cap = self.cap;
        let gen_count = self.generators.len();
        let mut complete = true;
        match &mut self.store {
            Store::Packed { m, bits, set, gens } => {
                let (m, bits) = (*m, *bits);
                let len = n * n;
                let mut a = vec![0u64; len];
                let mut out = vec![0u64; len];
                let mut visit = |idx: usize, gen_range: std::ops::Range<usize>, set: &mut IndexSet<u128>, parents: &mut Vec<(u32, u32)>| -> bool {
                    unpack(set[idx], bits, len, &mut a);
                    for g in gen_range {
                        mul_flat(&a, &gens[g].0, n, m, &mut out);
                        let (_, fresh) = set.insert_full(pack(&out, bits));
                        if fresh {
                            parents.push((idx as u32, g as u32));
                            if set.len() >= cap {
                                return false;
                            }
                        }
                    }
                    true
                };
                'outer: {
                    for idx in 0..from.min(set.len()) {
                        if !visit(idx, first_new_gen..gen_count, set, &mut self.parents) {
                            complete = false;
                            break 'outer;
                        }
                    }
                    let mut idx = from;
                    while idx < set.len() {
                        if !visit(idx, 0..gen_count, set, &mut self.parents) {
                            complete = false;
                            break 'outer;
                        }
                        idx += 1;
                    }
                }
            }
            Store::Dense { set } => {
                let gens = &self.generators;
                let parents = &mut self.parents;
                let mut visit = |idx: usize, gen_range: std::ops::Range<usize>, set: &mut IndexSet<Matrix>| -> bool {
                    let x = set[idx].clone();
                    for g in gen_range {
                        let y = x.mul(gens[g].value()).expect("square matrices of one size");
                        let (_, fresh) = set.insert_full(y);
                        if fresh {
                            parents.push((idx as u32, g as u32));
                            if set.len() >= cap {
                                return false;
                            }
                        }
                    }
                    true
                };
                'outer: {
                    for idx in 0..from.min(set.len()) {
                        if !visit(idx, first_new_gen..gen_count, set) {
                            complete = false;
                            break 'outer;
                        }
                    }
                    let mut idx = from;
                    while idx < set.len() {
                        if !visit(idx, 0..gen_count, set) {
                            complete = false;
                            break 'outer;
                        }
                        idx += 1;
                    }
                }
            }
        }
        // A table that reached the cap exactly on its last element may still
        // be closed; it is reported incomplete all the same.
        self.complete = complete;
    }

    /// Adds a generator to a complete table and re-closes it.
    pub fn extend_with(&mut self, g: GroupElement) -> Result<()> {
        if !self.complete {
            return Err(Error::Incomplete(self.cap));
        }
        let old_len = self.order();
        let first_new = self.generators.len();
        self.push_generator(g)?;
        self.expand(old_len, first_new);
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        match &self.store {
            Store::Packed { set, .. } => set.len(),
            Store::Dense { set } => set.len(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn is_packed(&self) -> bool {
        matches!(self.store, Store::Packed { .. })
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        if m.rows() != self.n || m.cols() != self.n || *m.ring() != self.ring {
            return false;
        }
        match &self.store {
            Store::Packed { bits, set, .. } => set.contains(&pack(&flat(m), *bits)),
            Store::Dense { set } => set.contains(m),
        }
    }

    pub fn element(&self, idx: usize) -> Matrix {
        match &self.store {
            Store::Packed { bits, set, .. } => {
                let mut v = vec![0u64; self.n * self.n];
                unpack(set[idx], *bits, v.len(), &mut v);
                let rows = v
                    .chunks(self.n)
                    .map(|r| r.iter().map(|&x| Elem::Residue(x)).collect())
                    .collect();
                Matrix::from_rows(&self.ring, rows).expect("decoded entries are residues")
            }
            Store::Dense { set } => set[idx].clone(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Matrix> + '_ {
        (0..self.order()).map(|k| self.element(k))
    }

    /// Generator indices whose product (left to right) gives element `idx`.
    pub fn word_of(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut at = idx;
        while at != 0 {
            let (p, g) = self.parents[at];
            out.push(g as usize);
            at = p as usize;
        }
        out.reverse();
        out
    }

    /// The element `idx` with its inverse, rebuilt from its provenance word.
    pub fn group_element(&self, idx: usize) -> Result<GroupElement> {
        let word = self.word_of(idx);
        GroupElement::product(&self.ring, self.n, word.iter().map(|&g| &self.generators[g]))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        match (&self.store, &other.store) {
            (Store::Packed { set: a, bits: ba, .. }, Store::Packed { set: b, bits: bb, .. })
                if ba == bb && self.ring == other.ring && self.n == other.n =>
            {
                a.iter().all(|k| b.contains(k))
            }
            _ => self.elements().all(|m| other.contains(&m)),
        }
    }

    /// True when every ambient generator conjugates every generator back in.
    pub fn is_normal_in(&self, ambient: &Self) -> Result<bool> {
        for s in &self.generators {
            for g in &ambient.generators {
                let c = g.mul(s)?.mul(&g.inv())?;
                if !self.contains(c.value()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Smallest subgroup of `ambient` that contains `seeds` and is normalized by
/// every ambient generator. The result's generators are the seeds and
/// conjugates that were actually needed.
pub fn normal_closure(seeds: &[GroupElement], ambient: &FiniteGroupTable, cap: usize) -> Result<FiniteGroupTable> {
    if !ambient.is_complete() {
        return Err(Error::Incomplete(ambient.cap()));
    }
    for s in seeds {
        if !ambient.contains(s.value()) {
            return Err(Error::Spec("normal closure seed lies outside the ambient group".into()));
        }
    }
    let mut t = FiniteGroupTable::empty(ambient.ring(), ambient.dim(), cap);
    let mut work: std::collections::VecDeque<GroupElement> = seeds.iter().cloned().collect();
    while let Some(s) = work.pop_front() {
        if t.contains(s.value()) {
            continue;
        }
        t.extend_with(s.clone())?;
        if !t.is_complete() {
            return Ok(t);
        }
        for g in ambient.generators() {
            let c = g.mul(&s)?.mul(&g.inv())?;
            if !t.contains(c.value()) {
                work.push_back(c);
            }
        }
    }
    Ok(t)
}

/// Order of the commutator subgroup, found as the normal closure of the
/// commutators of generator pairs. The group is perfect when it matches.
pub fn derived_subgroup(table: &FiniteGroupTable, cap: usize) -> Result<FiniteGroupTable> {
    let gens = table.generators();
    let mut seeds = Vec::new();
    for (k, a) in gens.iter().enumerate() {
        for b in &gens[k + 1..] {
            let c = commutator(a, b)?;
            if !c.is_identity() {
                seeds.push(c);
            }
        }
    }
    normal_closure(&seeds, table, cap)
}

pub fn verify_perfect(table: &FiniteGroupTable, cap: usize) -> Result<bool> {
    let d = derived_subgroup(table, cap)?;
    if !d.is_complete() {
        return Err(Error::Incomplete(cap));
    }
    Ok(d.order() == table.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elementary::{a_diag, e};

    fn elementary_gens(ring: &Ring, n: usize) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    out.push(e(ring, n, i, j, &ring.one()).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn e3_over_f2_has_168_elements() {
        let r = Ring::modular(2).unwrap();
        let t = FiniteGroupTable::closure(&r, 3, elementary_gens(&r, 3), 10_000).unwrap();
        assert!(t.is_packed() && t.is_complete());
        assert_eq!(t.order(), 168);
        for idx in [0, 17, 167] {
            assert_eq!(t.group_element(idx).unwrap().value(), &t.element(idx));
        }
    }

    #[test]
    fn trivial_closure() {
        let r = Ring::modular(3).unwrap();
        let t = FiniteGroupTable::closure(&r, 2, vec![GroupElement::identity(&r, 2)], 10).unwrap();
        assert_eq!(t.order(), 1);
        assert!(verify_perfect(&t, 10).unwrap());
    }

    #[test]
    fn dense_and_packed_agree() {
        let z = Ring::integers();
        let gens: Vec<_> = (1..4).map(|i| a_diag(&z, 4, i, i + 1).unwrap()).collect();
        let t = FiniteGroupTable::closure(&z, 4, gens, 100).unwrap();
        assert!(!t.is_packed());
        assert_eq!(t.order(), 8);
        let r5 = Ring::modular(5).unwrap();
        let gens: Vec<_> = (1..4).map(|i| a_diag(&r5, 4, i, i + 1).unwrap()).collect();
        assert_eq!(FiniteGroupTable::closure(&r5, 4, gens, 100).unwrap().order(), 8);
    }

    #[test]
    fn cap_marks_incomplete() {
        let r = Ring::modular(2).unwrap();
        let t = FiniteGroupTable::closure(&r, 3, elementary_gens(&r, 3), 50).unwrap();
        assert!(!t.is_complete());
        assert_eq!(t.order(), 50);
    }

    #[test]
    fn normal_closure_is_normal() {
        let r = Ring::modular(3).unwrap();
        let amb = FiniteGroupTable::closure(&r, 3, elementary_gens(&r, 3), 10_000).unwrap();
        assert_eq!(amb.order(), 5616);
        let seed = e(&r, 3, 1, 2, &r.one()).unwrap();
        let nc = normal_closure(&[seed], &amb, 10_000).unwrap();
        assert_eq!(nc.order(), amb.order());
        assert!(nc.is_normal_in(&amb).unwrap());
        let triv = normal_closure(&[GroupElement::identity(&r, 3)], &amb, 10).unwrap();
        assert_eq!(triv.order(), 1);
    }
}
