use elemgroups::elementary::a_diag;
use elemgroups::exactmat::canonical_hash;
use elemgroups::finite::{check_sr, elementary_generators, verify_normal_generation, FiniteGroupTable};
use elemgroups::formring::{FormRing, LambdaStrategy};
use elemgroups::rings::Ring;

#[test]
fn closure_is_reproducible() {
    let r = Ring::modular(3).unwrap();
    let a = FiniteGroupTable::closure(&r, 3, elementary_generators(&r, 3).unwrap(), 100_000).unwrap();
    let b = FiniteGroupTable::closure(&r, 3, elementary_generators(&r, 3).unwrap(), 100_000).unwrap();
    assert_eq!(a.order(), b.order());
    for idx in [1, 100, a.order() - 1] {
        assert_eq!(canonical_hash(&a.element(idx)), canonical_hash(&b.element(idx)));
        assert_eq!(a.word_of(idx), b.word_of(idx));
    }
}

#[test]
fn packed_and_dense_tables_agree() {
    // over Z the store is dense; the sign subgroup is the same group of order 4
    let z = Ring::integers();
    let z5 = Ring::modular(5).unwrap();
    let gens = |r: &Ring| (1..3).map(|i| a_diag(r, 3, i, i + 1).unwrap()).collect::<Vec<_>>();
    let dense = FiniteGroupTable::closure(&z, 3, gens(&z), 100).unwrap();
    let packed = FiniteGroupTable::closure(&z5, 3, gens(&z5), 100).unwrap();
    assert!(!dense.is_packed() && packed.is_packed());
    assert_eq!(dense.order(), 4);
    assert_eq!(packed.order(), 4);
}

#[test]
fn stable_range_is_monotone() {
    for m in [2u64, 3, 4, 5, 6, 8, 9, 10] {
        let r = Ring::modular(m).unwrap();
        if check_sr(&r, 1).unwrap().holds {
            assert!(check_sr(&r, 2).unwrap().holds, "Z/{m}");
        }
    }
}

#[test]
fn normal_generation_over_z5() {
    let rep = verify_normal_generation(&Ring::modular(5).unwrap(), 3, 5_000_000).unwrap();
    assert!(rep.passed(), "{}", rep.summary());
}

#[test]
fn generated_lambda_is_closed() {
    let r = Ring::modular(9).unwrap();
    let f = FormRing::new(&r, 1, LambdaStrategy::Generated(vec![r.from_int(3)])).unwrap();
    let lam = f.lambda_elements().unwrap();
    for a in &lam {
        for b in &lam {
            assert!(f.lambda_contains(&r.add(a, b)).unwrap());
        }
        for x in r.elements().unwrap() {
            let c = r.mul(&r.mul(&r.star(&x).unwrap(), a), &x);
            assert!(f.lambda_contains(&c).unwrap());
        }
    }
    assert!(f.lambda_contains(&r.from_int(3)).unwrap());
}
