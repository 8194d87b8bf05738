use gkzcc::matrix::{
    character_transform, complete_to_unimodular, hat, integer_kernel_basis, is_non_confluent, rank_rational,
    square_reduce, unimodular_inverse,
};
use gkzcc::{CharacterVector, IntMatrix, Prime};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows)
        .prop_map(|r| IntMatrix::from_rows(r).unwrap())
}

fn any_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| matrix(r, c, bound))
}

/// Products of elementary row operations and sign flips.
fn unimodular(m: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..m, 0..m, -3i64..=3, any::<bool>()), 0..8).prop_map(move |ops| {
        let mut p = IntMatrix::identity(m);
        for (i, j, c, flip) in ops {
            if i != j {
                for col in 0..m {
                    let v = p.get(i, col) + BigInt::from(c) * p.get(j, col);
                    p.set(i, col, v);
                }
            }
            if flip {
                for col in 0..m {
                    let v = -p.get(i, col);
                    p.set(i, col, v);
                }
            }
        }
        p
    })
}

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(a in any_matrix(4, 5, 4)) {
        prop_assert_eq!(rank_rational(&a), rank_rational(&a.transpose()));
    }

    #[test]
    fn kernel_basis_spans_the_kernel(a in any_matrix(3, 5, 4)) {
        let basis = integer_kernel_basis(&a);
        prop_assert_eq!(basis.len(), a.ncols() - rank_rational(&a));
        for v in &basis {
            let col = IntMatrix::from_rows(v.iter().map(|x| vec![x.clone()])).unwrap();
            let prod = a.mul(&col).unwrap();
            prop_assert!((0..a.nrows()).all(|i| prod.get(i, 0).is_zero()));
        }
    }

    #[test]
    fn completion_is_unimodular(y in prop::collection::vec(-9i64..=9, 1..5)) {
        let y: Vec<BigInt> = y.into_iter().map(BigInt::from).collect();
        let g = y.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        prop_assume!(g.is_one());
        let p = complete_to_unimodular(&y).unwrap();
        prop_assert_eq!(p.row(0), &y[..]);
        prop_assert!(p.is_unimodular());
        prop_assert_eq!(unimodular_inverse(&p).unwrap().mul(&p).unwrap(), IntMatrix::identity(y.len()));
    }

    #[test]
    fn non_confluence_is_unimodular_invariant(
        (b, p) in (1usize..=2).prop_flat_map(|d| (matrix(d, 4, 4), unimodular(d + 1))),
    ) {
        let a = hat(&b);
        let pa = p.mul(&a).unwrap();
        let witness = is_non_confluent(&pa);
        prop_assert_eq!(witness.is_some(), is_non_confluent(&a).is_some());
        if let Some(w) = witness {
            prop_assert!(w.is_unimodular());
            prop_assert!(w.mul(&pa).unwrap().row(0).iter().all(One::is_one));
        }
    }

    #[test]
    fn square_reduction_clears_p(b in (1usize..=3).prop_flat_map(|d| matrix(d, d + 1, 6)), p in prime()) {
        let a = hat(&b);
        prop_assume!(!a.det().unwrap().is_zero());
        let (out, t) = square_reduce(&a, p).unwrap();
        let pb = BigInt::from(p.get());
        prop_assert!(!out.det().unwrap().is_multiple_of(&pb));
        prop_assert_eq!(t.replay().unwrap(), out.clone());
        let shrink = a.det().unwrap() / out.det().unwrap();
        prop_assert_eq!(shrink.clone() * out.det().unwrap(), a.det().unwrap());
        prop_assert_eq!(num_traits::Signed::abs(&shrink), num_traits::pow(pb, t.steps.len()));
        prop_assert!(t.steps.iter().all(|s| s.p_matrix.is_unimodular()));
    }

    #[test]
    fn character_transform_composes(
        e in prop::collection::vec(0u64..12, 3),
        p in unimodular(3),
        q in unimodular(3),
    ) {
        let chi = CharacterVector::new(12, e).unwrap();
        let two_steps = character_transform(&character_transform(&chi, &p).unwrap(), &q).unwrap();
        prop_assert_eq!(two_steps, character_transform(&chi, &q.mul(&p).unwrap()).unwrap());
    }
}
