use matgen::circulant::*;
use matgen::IntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

// Laplace expansion, kept separate from the library's elimination.
fn det_laplace(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_laplace(&minor)
        })
        .sum()
}

fn circ_by_powers(c: &[i64]) -> IntMatrix {
    let n = c.len();
    let x = IntMatrix::shift(n);
    let mut acc = IntMatrix::int_zeros(n, n);
    for i in 1..=n {
        acc = &acc + &x.pow(i as u32).scale_int(c[n - i]);
    }
    acc
}

#[test]
fn circ_agrees_with_power_sum() {
    for c in [vec![1, 2, 3], vec![0, -1, 4, 2], vec![5, 0, 0, 0, 1]] {
        assert_eq!(circ(&big(&c)).unwrap(), circ_by_powers(&c));
    }
}

#[test]
fn two_by_two_units_at_bound_one() {
    let s = find_circulant_units(2, 1).unwrap();
    let mut cs: Vec<Vec<BigInt>> = s.units.iter().map(|u| u.c.c.clone()).collect();
    cs.sort();
    let mut want: Vec<Vec<BigInt>> = vec![big(&[1, 0]), big(&[-1, 0]), big(&[0, 1]), big(&[0, -1])];
    want.sort();
    assert_eq!(cs, want);
    assert_eq!(s.nontrivial_count, 0);
}

#[test]
fn search_is_exhaustive_for_small_box() {
    for n in 2..=4usize {
        let s = find_circulant_units(n, 1).unwrap();
        let mut count = 0;
        for code in 0..3usize.pow(n as u32) {
            let c: Vec<i64> = (0..n).map(|i| (code / 3usize.pow(i as u32) % 3) as i64 - 1).collect();
            let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| c[(n + j - i) % n]).collect()).collect();
            if det_laplace(&rows).abs() == 1 {
                count += 1;
            }
        }
        assert_eq!(s.units.len(), count, "n = {n}");
    }
}

#[test]
fn units_at_bound_two() {
    for n in [2usize, 3, 4, 6] {
        let s = find_circulant_units(n, 2).unwrap();
        assert_eq!(s.nontrivial_count, 0, "n = {n}");
        assert_eq!(s.trivial_count, 2 * n);
    }
    let s = find_circulant_units(5, 2).unwrap();
    assert!(s.nontrivial_count > 0);
}

#[test]
fn every_unit_pair_is_inverse_and_gives_valid_y1() {
    for n in 2..=6usize {
        for u in find_circulant_units(n, 2).unwrap().units {
            let conv = cyclic_convolution(&u.c.c, &u.d.c).unwrap();
            assert!(conv[0].is_one() && conv[1..].iter().all(Zero::is_zero));
            let rep = build_and_verify_y1(&u.c, &u.d).unwrap();
            assert!(rep.all_pass(), "{:?}", u);
            assert_eq!(rep.standard_unit.is_some(), u.trivial);
        }
    }
}

#[test]
fn nontrivial_y1_for_five() {
    let s = find_circulant_units(5, 2).unwrap();
    let u = s.units.iter().find(|u| !u.trivial).unwrap();
    let rep = build_and_verify_y1(&u.c, &u.d).unwrap();
    assert!(rep.trace.is_one() && rep.has_positive && rep.has_negative);
    let c = rep.conjugator.unwrap();
    let inv = matgen::linalg::det::inverse_int(&c.matrix).unwrap();
    assert_eq!(&(&c.matrix * &IntMatrix::unit(5, 1, 1)) * &inv, rep.y1);
    assert_eq!(&c.matrix * &IntMatrix::shift(5), &IntMatrix::shift(5) * &c.matrix);
}

#[test]
fn shifted_trivial_unit() {
    let c = matgen::circulant::Circulant::from_i64(&[0, 0, 1, 0]).unwrap();
    let d = matgen::circulant::Circulant::from_i64(&[0, 0, 1, 0]).unwrap();
    let rep = build_and_verify_y1(&c, &d).unwrap();
    assert!(rep.standard_unit.is_some() && rep.all_pass());
}

#[test]
fn higman_zero_set() {
    let zeros: Vec<u64> = (1..=24).filter(|&n| higman_rank(n) == 0).collect();
    assert_eq!(zeros, vec![1, 2, 3, 4, 6]);
}

fn random_unimodular(m: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut u = IntMatrix::int_identity(m);
    for _ in 0..3 * m {
        let i = rng.gen_range(0..m);
        let j = (i + rng.gen_range(1..m)) % m;
        let k: i64 = rng.gen_range(-2..=2);
        let e = &IntMatrix::int_identity(m) + &IntMatrix::unit(m, i as i64 + 1, j as i64 + 1).scale_int(k);
        u = &u * &e;
    }
    u
}

#[test]
fn canonical_round_trip() {
    let (xc, yc) = canonical_model(2, 2, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let u = random_unimodular(5, &mut rng);
        let ui = matgen::linalg::det::inverse_int(&u).unwrap();
        let x1 = &(&ui * &xc) * &u;
        let y1 = &(&ui * &yc) * &u;
        let f = canonicalize_representation(&x1, &y1, 2).unwrap();
        assert_eq!((f.k, f.r), (2, 1));
        assert!((&f.b * &f.b_inverse).is_identity());
        assert_eq!(&(&f.b_inverse * &x1) * &f.b, xc);
        assert_eq!(&(&f.b_inverse * &y1) * &f.b, yc);
    }
}

#[test]
fn canonicalize_rejects() {
    let z = IntMatrix::int_zeros(2, 2);
    assert!(canonicalize_representation(&z, &IntMatrix::unit(2, 1, 1), 2).is_err());
    let bad = canonicalize_representation(&IntMatrix::shift(3), &IntMatrix::unit(3, 1, 2), 3);
    assert!(matches!(bad, Err(matgen::Error::RelationViolation(_))));
}

proptest! {
    #[test]
    fn circ_is_multiplicative(c in prop::collection::vec(-9i64..10, 5), d in prop::collection::vec(-9i64..10, 5)) {
        let (c, d) = (big(&c), big(&d));
        let lhs = &circ(&c).unwrap() * &circ(&d).unwrap();
        prop_assert_eq!(lhs, circ(&cyclic_convolution(&c, &d).unwrap()).unwrap());
    }

    #[test]
    fn circ_commutes_with_shift(c in prop::collection::vec(-9i64..10, 1..7)) {
        let m = circ(&big(&c)).unwrap();
        let x = IntMatrix::shift(c.len());
        prop_assert_eq!(&m * &x, &x * &m);
    }
}

#[test]
fn bigint_det_of_units() {
    for u in find_circulant_units(5, 1).unwrap().units {
        let d = u.c.det();
        assert!(d == BigInt::one() || d == -BigInt::one());
    }
}
