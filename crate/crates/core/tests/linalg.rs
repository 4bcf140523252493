use matgen::linalg::det::det;
use matgen::linalg::{hnf, lattice_membership, snf, LatticeBasis};
use matgen::words::build_t;
use matgen::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rows(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(m).unwrap()
}

// Gcd of all k x k minors, by brute force over row and column subsets.
fn minor_gcd(m: &[Vec<i64>], k: usize) -> BigInt {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let mut g = BigInt::zero();
    for rs in subsets(m.len(), k) {
        for cs in subsets(m[0].len(), k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
            g = g.gcd(&det(&rows(&sub)));
        }
    }
    g
}

// Snf from determinantal divisors d_k / d_{k-1}.
fn snf_oracle(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=m.len().min(m[0].len()) {
        let g = minor_gcd(m, k);
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn rank_mod_p(m: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|v| v.rem_euclid(p)).collect()).collect();
    let mut rank = 0;
    for c in 0..a[0].len() {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| x * a[rank][c] % p == 1).unwrap();
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c] * inv % p;
                for j in 0..a[0].len() {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn hnf_examples() {
    let id = hnf(&IntMatrix::int_identity(3));
    assert_eq!(id.basis.as_matrix(), IntMatrix::int_identity(3));
    assert!(id.transform.is_identity());
    let h = hnf(&IntMatrix::from_i64(&[[2, 4], [0, 3]]));
    assert_eq!(h.basis.as_matrix(), IntMatrix::from_i64(&[[2, 1], [0, 3]]));
    assert_eq!(hnf(&IntMatrix::int_zeros(2, 2)).basis.rank(), 0);
}

#[test]
fn snf_examples() {
    assert_eq!(snf(&IntMatrix::int_identity(2)), vec![BigInt::from(1), BigInt::from(1)]);
    assert_eq!(snf(&IntMatrix::from_i64(&[[2, 0], [0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
    assert!(snf(&IntMatrix::int_zeros(2, 3)).is_empty());
}

#[test]
fn membership_examples() {
    let std = LatticeBasis::full(2);
    assert!(lattice_membership(&std, &[BigInt::from(5), BigInt::from(-7)]).unwrap());
    let even = LatticeBasis::from_generators(2, [vec![BigInt::from(2), BigInt::zero()], vec![BigInt::zero(), BigInt::from(2)]]).unwrap();
    assert!(!lattice_membership(&even, &[BigInt::from(1), BigInt::zero()]).unwrap());
    let t = build_t(3, &IntMatrix::shift(2), &IntMatrix::unit(2, 1, 1)).unwrap();
    let lat = LatticeBasis::from_generators(4, t.to_rows()).unwrap();
    let e12: Vec<BigInt> = IntMatrix::unit(2, 1, 2).entries().to_vec();
    assert!(lattice_membership(&lat, &e12).unwrap());
}

fn small_matrix(r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..7, c), r)
}

proptest! {
    #[test]
    fn hnf_spans_same_lattice(m in small_matrix(4, 3)) {
        let im = rows(&m);
        let h = hnf(&im);
        for r in &im.to_rows() {
            prop_assert!(h.basis.contains(r).unwrap());
        }
        let back = LatticeBasis::from_generators(3, im.to_rows()).unwrap();
        prop_assert!(back.contains_lattice(&h.basis).unwrap());
        prop_assert_eq!(hnf(&h.basis.as_matrix()).basis, h.basis.clone());
        prop_assert_eq!(&h.transform * &im, {
            let mut full = h.basis.as_matrix().to_rows();
            full.resize(4, vec![BigInt::zero(); 3]);
            IntMatrix::from_rows(&full).unwrap()
        });
        prop_assert!(det(&h.transform).abs() == BigInt::from(1));
    }

    #[test]
    fn snf_matches_minor_gcds(m in small_matrix(3, 3)) {
        prop_assert_eq!(snf(&rows(&m)), snf_oracle(&m));
    }

    #[test]
    fn snf_chain_and_det(m in small_matrix(4, 4)) {
        let d = snf(&rows(&m));
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        let dt = det(&rows(&m));
        if !dt.is_zero() {
            prop_assert_eq!(d.iter().product::<BigInt>(), dt.abs());
        }
    }

    #[test]
    fn rank_mod_p_from_snf(m in small_matrix(4, 4), pi in 0usize..3) {
        let p = [2i64, 3, 5][pi];
        let d = snf(&rows(&m));
        let count = d.iter().filter(|v| !(*v % p).is_zero()).count();
        prop_assert_eq!(count, rank_mod_p(&m, p));
    }
}
