//! Parameter assignments for identity checks.
//!
//! Free rings get one fresh generator per slot, which proves the identity for
//! every ring at once. Finite rings are exhausted. The integers and group rings
//! fall back to seeded random values, coefficients in [-9, 9].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formring::{FormRing, LambdaStrategy};
use crate::rings::{Elem, Ring, RingKind};

/// Largest number of exhaustive cases a single plan may produce.
pub const MAX_CASES: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub trials: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { trials: 20, seed: 0 }
    }
}

impl SampleConfig {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// What a formula slot may hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Any,
    Lambda,
    /// `a` with `a* ∈ Λ`.
    LambdaStar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Symbolic,
    Exhaustive,
    Random,
}

#[derive(Clone, Debug)]
pub struct Plan {
    /// The ring the cases live in; free rings may have gained generators.
    pub ring: Ring,
    pub form: Option<FormRing>,
    pub mode: Mode,
    pub cases: Vec<Vec<Elem>>,
}

/// Plan for `k` unconstrained slots over a plain ring.
pub fn ring_plan(ring: &Ring, k: usize, cfg: &SampleConfig) -> Result<Plan> {
    match ring.kind() {
        RingKind::Free { .. } => {
            let big = ring.with_min_gens(k);
            let case = (0..k).map(|i| big.generator(i)).collect::<Result<Vec<_>>>()?;
            Ok(Plan {
                ring: big,
                form: None,
                mode: Mode::Symbolic,
                cases: vec![case],
            })
        }
        _ if ring.is_finite() => {
            let all = ring.elements()?;
            Ok(Plan {
                ring: ring.clone(),
                form: None,
                mode: Mode::Exhaustive,
                cases: product(&vec![all; k])?,
            })
        }
        _ => {
            let mut rng = cfg.rng();
            let cases = (0..cfg.trials)
                .map(|_| (0..k).map(|_| random_element(ring, &mut rng)).collect())
                .collect();
            Ok(Plan {
                ring: ring.clone(),
                form: None,
                mode: Mode::Random,
                cases,
            })
        }
    }
}

/// Plan for slots constrained by a form parameter.
pub fn form_plan(form: &FormRing, slots: &[Slot], cfg: &SampleConfig) -> Result<Plan> {
    let ring = form.base();
    match ring.kind() {
        RingKind::Free { .. } => {
            let big = ring.with_min_gens(slots.len());
            let form = form.rebase(&big)?;
            let mut case = Vec::with_capacity(slots.len());
            for (k, slot) in slots.iter().enumerate() {
                let y = big.generator(k)?;
                case.push(constrain(&form, *slot, &symbolic_lambda(&form, &y)?, &y)?);
            }
            Ok(Plan {
                ring: big,
                form: Some(form),
                mode: Mode::Symbolic,
                cases: vec![case],
            })
        }
        _ if ring.is_finite() => {
            let all = ring.elements()?;
            let lam = form.lambda_elements()?;
            let lam_star = form.lambda_star_elements()?;
            let domains: Vec<Vec<Elem>> = slots
                .iter()
                .map(|s| match s {
                    Slot::Any => all.clone(),
                    Slot::Lambda => lam.clone(),
                    Slot::LambdaStar => lam_star.clone(),
                })
                .collect();
            Ok(Plan {
                ring: ring.clone(),
                form: Some(form.clone()),
                mode: Mode::Exhaustive,
                cases: product(&domains)?,
            })
        }
        _ => {
            let mut rng = cfg.rng();
            let mut cases = Vec::with_capacity(cfg.trials);
            for _ in 0..cfg.trials {
                let mut case = Vec::with_capacity(slots.len());
                for slot in slots {
                    let x = random_element(ring, &mut rng);
                    let l = match form.lambda_contains(&x) {
                        Ok(true) => x.clone(),
                        _ => form.lower_of(&x)?,
                    };
                    case.push(constrain(form, *slot, &l, &x)?);
                }
                cases.push(case);
            }
            Ok(Plan {
                ring: ring.clone(),
                form: Some(form.clone()),
                mode: Mode::Random,
                cases,
            })
        }
    }
}

fn constrain(form: &FormRing, slot: Slot, lambda: &Elem, any: &Elem) -> Result<Elem> {
    Ok(match slot {
        Slot::Any => any.clone(),
        Slot::Lambda => lambda.clone(),
        Slot::LambdaStar => form.star(lambda)?,
    })
}

/// A generic element of Λ built from the free generator `y`.
///
/// Minimal and generated forms use `y - εy*`. The maximal form for ε = -1
/// also contains the symmetric word `yy*`, so it is added.
fn symbolic_lambda(form: &FormRing, y: &Elem) -> Result<Elem> {
    let r = form.base();
    let base = form.lower_of(y)?;
    Ok(match form.strategy() {
        LambdaStrategy::Maximal if form.epsilon() == -1 => r.add(&base, &r.mul(y, &r.star(y)?)),
        _ => base,
    })
}

fn product(domains: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
    let total = domains
        .iter()
        .try_fold(1usize, |acc, d| acc.checked_mul(d.len()))
        .filter(|&t| t <= MAX_CASES)
        .ok_or_else(|| Error::Overflow(format!("more than {MAX_CASES} exhaustive cases")))?;
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; domains.len()];
    if total == 0 {
        return Ok(out);
    }
    loop {
        out.push(idx.iter().zip(domains).map(|(&i, d)| d[i].clone()).collect());
        let mut k = domains.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Elements to validate axioms on: all of a finite ring, otherwise the
/// generators plus seeded random elements.
pub fn elements(ring: &Ring, cfg: &SampleConfig) -> Result<Vec<Elem>> {
    if ring.is_finite() {
        return ring.elements();
    }
    let mut out = vec![ring.zero(), ring.one()];
    if let RingKind::Free { gens, .. } = ring.kind() {
        for k in 0..gens.len() {
            let g = ring.generator(k)?;
            if ring.has_involution() {
                out.push(ring.star(&g)?);
            }
            out.push(g);
        }
    }
    let mut rng = cfg.rng();
    out.extend((0..cfg.trials).map(|_| random_element(ring, &mut rng)));
    Ok(out)
}

pub fn random_element(ring: &Ring, rng: &mut ChaCha8Rng) -> Elem {
    let coeff = |rng: &mut ChaCha8Rng| loop {
        let c: i64 = rng.gen_range(-9..=9);
        if c != 0 {
            return BigInt::from(c);
        }
    };
    match ring.kind() {
        RingKind::Integers => ring.from_int(rng.gen_range(-9..=9)),
        RingKind::Modular { m } => Elem::Residue(rng.gen_range(0..*m)),
        RingKind::Free {
            gens, involution, ..
        } => {
            let letters = gens.len() as u32 * if *involution { 2 } else { 1 };
            let mut map = BTreeMap::new();
            for _ in 0..rng.gen_range(1..=3) {
                let len = rng.gen_range(0..=4);
                let word: Vec<u32> = (0..len)
                    .map(|_| {
                        let l = rng.gen_range(0..letters);
                        if *involution {
                            l
                        } else {
                            2 * l
                        }
                    })
                    .collect();
                let c = coeff(rng);
                let e = Elem::Lin(BTreeMap::from([(word, c)]));
                map = match ring.add(&Elem::Lin(map), &e) {
                    Elem::Lin(m) => m,
                    _ => unreachable!(),
                };
            }
            Elem::Lin(map)
        }
        RingKind::GroupRing(g) => {
            let mut acc = ring.zero();
            for _ in 0..rng.gen_range(1..=3) {
                let idx = rng.gen_range(0..g.order() as u32);
                let c = coeff(rng);
                acc = ring.add(&acc, &ring.mul(&ring.from_bigint(c), &ring.group_element(idx)));
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_plans_cover_the_product() {
        let r = Ring::modular(4).unwrap();
        let p = ring_plan(&r, 2, &SampleConfig::default()).unwrap();
        assert_eq!(p.mode, Mode::Exhaustive);
        assert_eq!(p.cases.len(), 16);
    }

    #[test]
    fn symbolic_plans_extend_free_rings() {
        let r = Ring::free(&["r"], true, -1).unwrap();
        let f = FormRing::symplectic(&r).unwrap();
        let p = form_plan(&f, &[Slot::Any, Slot::Lambda, Slot::LambdaStar], &SampleConfig::default()).unwrap();
        assert_eq!(p.mode, Mode::Symbolic);
        assert_eq!(p.ring.generator_names().len(), 3);
        let form = p.form.unwrap();
        let case = &p.cases[0];
        assert!(form.lambda_contains(&case[1]).unwrap());
        assert!(form.lambda_star_contains(&case[2]).unwrap());
    }

    #[test]
    fn random_plans_are_seeded() {
        let z = Ring::integers();
        let f = FormRing::orthogonal(&z).unwrap();
        let cfg = SampleConfig { trials: 5, seed: 7 };
        let a = form_plan(&f, &[Slot::Any, Slot::Lambda], &cfg).unwrap();
        let b = form_plan(&f, &[Slot::Any, Slot::Lambda], &cfg).unwrap();
        assert_eq!(a.cases, b.cases);
        for c in &a.cases {
            assert!(f.lambda_contains(&c[1]).unwrap());
        }
    }

    #[test]
    fn finite_lambda_slots_filter() {
        let r = Ring::modular(3).unwrap();
        let f = FormRing::orthogonal(&r).unwrap();
        let p = form_plan(&f, &[Slot::Lambda, Slot::Any], &SampleConfig::default()).unwrap();
        assert_eq!(p.cases.len(), 3);
    }
}
