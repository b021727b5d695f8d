use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formring::FormRing;
use crate::rings::{Elem, Ring};

/// Largest number of vectors or correction matrices a stable-range search
/// will enumerate.
pub const MAX_ENUMERATION: u64 = 20_000_000;

/// A right unimodular vector with its certificate: Σ a_i b_i = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularVector {
    pub entries: Vec<Elem>,
    pub witness: Vec<Elem>,
}

impl UnimodularVector {
    pub fn verify(&self, ring: &Ring) -> bool {
        let s = self
            .entries
            .iter()
            .zip(&self.witness)
            .fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)));
        s == ring.one()
    }
}

/// Right unimodularity over a finite ring, by growing the set of reachable
/// sums Σ_{i<k} a_i b_i one coordinate at a time.
pub fn is_unimodular(ring: &Ring, v: &[Elem]) -> Result<Option<UnimodularVector>> {
    let all = ring.elements()?;
    let zero = ring.zero();
    let mut reach: HashMap<Elem, Vec<Elem>> = HashMap::from([(zero.clone(), vec![zero; v.len()])]);
    for (k, a) in v.iter().enumerate() {
        let snapshot: Vec<(Elem, Vec<Elem>)> = reach.iter().map(|(s, w)| (s.clone(), w.clone())).collect();
        for b in &all {
            let ab = ring.mul(a, b);
            for (s, w) in &snapshot {
                let t = ring.add(s, &ab);
                reach.entry(t).or_insert_with(|| {
                    let mut w = w.clone();
                    w[k] = b.clone();
                    w
                });
            }
        }
    }
    Ok(reach.remove(&ring.one()).map(|witness| UnimodularVector {
        entries: v.to_vec(),
        witness,
    }))
}

fn count_check(base: usize, len: usize) -> Result<()> {
    let total = (base as u64).checked_pow(len as u32);
    match total {
        Some(t) if t <= MAX_ENUMERATION => Ok(()),
        _ => Err(Error::Overflow(format!("{base}^{len} vectors"))),
    }
}

/// Every vector in R^len, in lexicographic order of element indices.
fn all_vectors(all: &[Elem], len: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let total = all.len().pow(len as u32);
    (0..total).map(move |mut code| {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(all[code % all.len()].clone());
            code /= all.len();
        }
        v.reverse();
        v
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrOutcome {
    pub holds: bool,
    pub counterexample: Option<Vec<Elem>>,
    /// unimodular (m+1)-vectors examined
    pub vectors: u64,
}

struct UnimodularCache<'a> {
    ring: &'a Ring,
    known: HashMap<Vec<Elem>, bool>,
}

impl UnimodularCache<'_> {
    fn test(&mut self, v: &[Elem]) -> Result<bool> {
        if let Some(&b) = self.known.get(v) {
            return Ok(b);
        }
        let b = is_unimodular(self.ring, v)?.is_some();
        self.known.insert(v.to_vec(), b);
        Ok(b)
    }
}

/// sr_m: every unimodular (a_1, ..., a_(m+1)) admits b_1..b_m with
/// (a_1 + a_(m+1) b_1, ..., a_m + a_(m+1) b_m) unimodular.
pub fn check_sr(ring: &Ring, m: usize) -> Result<SrOutcome> {
    if m == 0 {
        return Err(Error::Dimension("stable range index must be at least 1".into()));
    }
    let all = ring.elements()?;
    count_check(all.len(), m + 1)?;
    count_check(all.len(), 2 * m + 1)?;
    let mut cache = UnimodularCache {
        ring,
        known: HashMap::new(),
    };
    let mut vectors = 0;
    for v in all_vectors(&all, m + 1) {
        if !cache.test(&v)? {
            continue;
        }
        vectors += 1;
        let last = &v[m];
        let mut found = false;
        for b in all_vectors(&all, m) {
            let w: Vec<Elem> = (0..m).map(|i| ring.add(&v[i], &ring.mul(last, &b[i]))).collect();
            if cache.test(&w)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(SrOutcome {
                holds: false,
                counterexample: Some(v),
                vectors,
            });
        }
    }
    Ok(SrOutcome {
        holds: true,
        counterexample: None,
        vectors,
    })
}

/// All of Λ_size: diagonal entries in Λ, free entries t above the diagonal
/// and -t*ε below.
pub fn lambda_matrices(form: &FormRing, size: usize) -> Result<Vec<Vec<Vec<Elem>>>> {
    let r = form.base();
    let all = r.elements()?;
    let lam = form.lambda_elements()?;
    let upper = size * (size - 1) / 2;
    let total = (lam.len() as u64)
        .checked_pow(size as u32)
        .and_then(|d| (all.len() as u64).checked_pow(upper as u32).and_then(|u| d.checked_mul(u)));
    match total {
        Some(t) if t <= MAX_ENUMERATION => {}
        _ => return Err(Error::Overflow(format!("Lambda_{size} is too large to enumerate"))),
    }
    let mut out = Vec::new();
    let diags: Vec<Vec<Elem>> = all_vectors(&lam, size).collect();
    let uppers: Vec<Vec<Elem>> = all_vectors(&all, upper).collect();
    for d in &diags {
        for u in &uppers {
            let mut g = vec![vec![r.zero(); size]; size];
            let mut k = 0;
            for i in 0..size {
                g[i][i] = d[i].clone();
                for j in i + 1..size {
                    g[i][j] = u[k].clone();
                    g[j][i] = r.neg(&r.mul(&r.star(&u[k])?, form.eps()));
                    k += 1;
                }
            }
            out.push(g);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSrOutcome {
    pub sr: SrOutcome,
    /// the γ-condition alone
    pub gamma_holds: bool,
    pub counterexample: Option<(Vec<Elem>, Vec<Elem>)>,
    /// unimodular 2(m+1)-vectors examined
    pub vectors: u64,
    pub gammas: usize,
}

impl LambdaSrOutcome {
    pub fn holds(&self) -> bool {
        self.sr.holds && self.gamma_holds
    }
}

/// Λsr_m: sr_m holds, and for every unimodular (a, b) ∈ R^(2(m+1)) some
/// γ ∈ Λ_(m+1) makes a + bγ unimodular, where (bγ)_k = Σ_l b_l γ_lk.
pub fn check_lambda_sr(form: &FormRing, m: usize) -> Result<LambdaSrOutcome> {
    let ring = form.base();
    let sr = check_sr(ring, m)?;
    let all = ring.elements()?;
    let len = m + 1;
    count_check(all.len(), 2 * len)?;
    let gammas = lambda_matrices(form, len)?;
    let mut cache = UnimodularCache {
        ring,
        known: HashMap::new(),
    };
    let mut vectors = 0;
    for v in all_vectors(&all, 2 * len) {
        if !cache.test(&v)? {
            continue;
        }
        vectors += 1;
        let (a, b) = v.split_at(len);
        let mut found = false;
        for g in &gammas {
            let w: Vec<Elem> = (0..len)
                .map(|k| {
                    (0..len).fold(a[k].clone(), |acc, l| ring.add(&acc, &ring.mul(&b[l], &g[l][k])))
                })
                .collect();
            if cache.test(&w)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(LambdaSrOutcome {
                sr,
                gamma_holds: false,
                counterexample: Some((a.to_vec(), b.to_vec())),
                vectors,
                gammas: gammas.len(),
            });
        }
    }
    Ok(LambdaSrOutcome {
        sr,
        gamma_holds: true,
        counterexample: None,
        vectors,
        gammas: gammas.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(v: &[u64]) -> Vec<Elem> {
        v.iter().map(|&x| Elem::Residue(x)).collect()
    }

    #[test]
    fn unimodular_examples_over_z4() {
        let r = Ring::modular(4).unwrap();
        let u = is_unimodular(&r, &res(&[1, 0])).unwrap().unwrap();
        assert!(u.verify(&r));
        assert!(is_unimodular(&r, &res(&[2, 3])).unwrap().unwrap().verify(&r));
        assert!(is_unimodular(&r, &res(&[2, 2])).unwrap().is_none());
        assert!(is_unimodular(&r, &res(&[0, 0])).unwrap().is_none());
        assert_eq!(is_unimodular(&Ring::integers(), &[]), Err(Error::InfiniteRing));
    }

    #[test]
    fn stable_range_one_for_small_residue_rings() {
        for m in [2, 3, 4, 6] {
            let r = Ring::modular(m).unwrap();
            assert!(check_sr(&r, 1).unwrap().holds, "Z/{m}");
            assert!(check_sr(&r, 2).unwrap().holds, "Z/{m}");
        }
    }

    #[test]
    fn lambda_matrices_lie_in_lambda_n() {
        let r = Ring::modular(3).unwrap();
        let f = FormRing::symplectic(&r).unwrap();
        let gs = lambda_matrices(&f, 2).unwrap();
        assert_eq!(gs.len(), 27);
        for g in gs {
            let m = crate::exactmat::Matrix::from_rows(&r, g).unwrap();
            assert!(f.lambda_n_contains(&m).unwrap());
        }
    }

    #[test]
    fn lambda_stable_range_symplectic() {
        for m in [2, 3] {
            let f = FormRing::symplectic(&Ring::modular(m).unwrap()).unwrap();
            let out = check_lambda_sr(&f, 1).unwrap();
            assert!(out.holds(), "Z/{m}");
            assert!(out.vectors > 0);
        }
    }
}
