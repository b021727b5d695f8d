use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Largest group accepted as the basis of a group ring.
pub const GROUP_CAP: usize = 10_000;

/// A finite permutation group, enumerated by closure from its generators.
///
/// Element 0 is always the identity. Every element remembers a shortest word in
/// the generators, which is how group ring elements are printed and parsed.
#[derive(Clone, Debug)]
pub struct PermGroup {
    gens: Vec<Vec<u32>>,
    elements: Vec<Vec<u32>>,
    words: Vec<Vec<usize>>,
    inverse: Vec<u32>,
    index: HashMap<Vec<u32>, u32>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for PermGroup {}

fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    // (p q)(x) = p(q(x))
    q.iter().map(|&x| p[x as usize]).collect()
}

impl PermGroup {
    /// Builds the group from permutations given as one-based image lists.
    pub fn generate(perm_gens: &[Vec<u32>]) -> Result<Self> {
        let degree = perm_gens.first().map_or(1, Vec::len);
        let mut gens = Vec::with_capacity(perm_gens.len());
        for p in perm_gens {
            if p.len() != degree {
                return Err(Error::Spec("permutation generators differ in degree".into()));
            }
            let mut seen = vec![false; degree];
            let mut zero_based = Vec::with_capacity(degree);
            for &img in p {
                let k = img as usize;
                if k == 0 || k > degree || seen[k - 1] {
                    return Err(Error::Spec(format!("{p:?} is not a permutation")));
                }
                seen[k - 1] = true;
                zero_based.push(img - 1);
            }
            gens.push(zero_based);
        }

        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut elements = vec![identity.clone()];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::from([(identity, 0u32)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(at) = queue.pop_front() {
            for (g, gen) in gens.iter().enumerate() {
                let next = compose(&elements[at], gen);
                if index.contains_key(&next) {
                    continue;
                }
                if elements.len() >= GROUP_CAP {
                    return Err(Error::Spec(format!("group exceeds {GROUP_CAP} elements")));
                }
                let mut word = words[at].clone();
                word.push(g);
                index.insert(next.clone(), elements.len() as u32);
                elements.push(next);
                words.push(word);
                queue.push_back(elements.len() - 1);
            }
        }

        let inverse = elements
            .iter()
            .map(|p| {
                let mut inv = vec![0u32; p.len()];
                for (x, &y) in p.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                index[&inv]
            })
            .collect();

        Ok(Self {
            gens,
            elements,
            words,
            inverse,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let p = compose(&self.elements[a as usize], &self.elements[b as usize]);
        self.index[&p]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// Index of the `k`-th generator (zero-based).
    pub fn generator(&self, k: usize) -> u32 {
        self.index[&self.gens[k]]
    }

    /// Shortest generator word for element `a` (zero-based generator indices).
    pub fn word(&self, a: u32) -> &[usize] {
        &self.words[a as usize]
    }

    pub fn permutation(&self, a: u32) -> &[u32] {
        &self.elements[a as usize]
    }

    /// Perm generators back in their one-based input form.
    pub fn perm_gens(&self) -> Vec<Vec<u32>> {
        self.gens
            .iter()
            .map(|p| p.iter().map(|x| x + 1).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_on_three_letters() {
        let g = PermGroup::generate(&[vec![2, 1, 3], vec![2, 3, 1]]).unwrap();
        assert_eq!(g.order(), 6);
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn rejects_non_permutation() {
        assert!(PermGroup::generate(&[vec![1, 1, 3]]).is_err());
        assert!(PermGroup::generate(&[vec![1, 2], vec![1, 2, 3]]).is_err());
    }
}
