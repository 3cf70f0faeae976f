use proptest::prelude::*;
use qcrystal::cartan::{cartan_matrix, longest_word, minus_w0, Weight};
use qcrystal::fnalg::{Algebra, PairingOracle};
use qcrystal::ratfield::{rat, Poly, RatFunc, Valuation};
use qcrystal::repth::{kashiwara_ops, tensor_power, Gen};

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 1..4).prop_map(|c| Poly::from_ints(&c))
}

/// `t^k * num / den` with small integer coefficients.
fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), poly().prop_filter("nonzero", |p| !p.is_zero()), -2i64..=2)
        .prop_map(|(n, d, k)| RatFunc::new(n, d).unwrap() * RatFunc::t_pow(k))
}

fn in_a0() -> impl Strategy<Value = RatFunc> {
    ratfunc().prop_filter("in A0", RatFunc::is_in_a0)
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((1..=n + 1, 1..=n + 1), 0..=max_len)
}

fn min_valuation(a: Valuation, b: Valuation) -> Valuation {
    match (a, b) {
        (Valuation::Infinite, x) | (x, Valuation::Infinite) => x,
        (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x.min(y)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_form_is_reduced_and_monic(a in ratfunc()) {
        let g = a.num().gcd(a.den());
        prop_assert_eq!(g.degree(), Some(0));
        prop_assert!(a.den().leading().unwrap() == &rat(1, 1));
        prop_assert_eq!(RatFunc::new(a.num().clone(), a.den().clone()).unwrap(), a);
    }

    #[test]
    fn field_operations(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).div_ref(&b).unwrap(), a.clone());
            prop_assert!((&b * &b.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn valuation_is_additive(a in ratfunc(), b in ratfunc()) {
        match (a.valuation(), b.valuation()) {
            (Valuation::Finite(x), Valuation::Finite(y)) => prop_assert_eq!((&a * &b).valuation(), Valuation::Finite(x + y)),
            _ => prop_assert!((&a * &b).is_zero()),
        }
        let lower = min_valuation(a.valuation(), b.valuation());
        let sum = (&a + &b).valuation();
        match (sum, lower) {
            (Valuation::Finite(s), Valuation::Finite(l)) => prop_assert!(s >= l),
            (Valuation::Finite(_), Valuation::Infinite) => prop_assert!(false, "finite sum of zeros"),
            _ => {}
        }
    }

    #[test]
    fn a0_is_a_ring_and_the_limit_a_homomorphism(a in in_a0(), b in in_a0()) {
        let s = &a + &b;
        let p = &a * &b;
        prop_assert!(s.is_in_a0() && p.is_in_a0());
        let (la, lb) = (a.limit_t0().unwrap(), b.limit_t0().unwrap());
        prop_assert_eq!(s.limit_t0().unwrap(), &la + &lb);
        prop_assert_eq!(p.limit_t0().unwrap(), &la * &lb);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfunc(), b in ratfunc()) {
        let q = rat(1, 3);
        if let (Ok(x), Ok(y)) = (a.eval_at(&q), b.eval_at(&q)) {
            prop_assert_eq!((&a + &b).eval_at(&q).unwrap(), &x + &y);
            prop_assert_eq!((&a * &b).eval_at(&q).unwrap(), &x * &y);
        }
    }

    #[test]
    fn weight_pairing_is_symmetric_and_w0_invariant(
        n in 1usize..=4,
        a in prop::collection::vec(-3i64..=3, 4),
        b in prop::collection::vec(-3i64..=3, 4),
    ) {
        let c = cartan_matrix(n);
        let x = Weight::new(a[..n].to_vec());
        let y = Weight::new(b[..n].to_vec());
        prop_assert_eq!(c.pairing(&x, &y), c.pairing(&y, &x));
        prop_assert_eq!(minus_w0(&minus_w0(&x)), x.clone());
        prop_assert_eq!(c.pairing(&minus_w0(&x), &minus_w0(&y)), c.pairing(&x, &y));
        prop_assert_eq!(-&longest_word(n).act(&x, &c), minus_w0(&x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Tensor powers of the vector representation have the tensor basis as a
    /// crystal basis: `F~_i` sends a basis vector to another one or to zero
    /// modulo `t L`, and `E~_i` undoes it.
    #[test]
    fn kashiwara_operators_permute_the_tensor_basis(n in 1usize..=2, m in 1usize..=3, a in 0usize..27, i in 1usize..=2) {
        let i = i.min(n);
        let rep = tensor_power(n, m);
        let a = a % rep.dim();
        let ops = kashiwara_ops(&rep);
        let image = ops.f(i, &rep.basis_vector(a));
        prop_assert!(image.iter().all(RatFunc::is_in_a0));
        let limit: Vec<_> = image.iter().map(|x| x.limit_t0().unwrap()).collect();
        let nonzero: Vec<usize> = (0..limit.len()).filter(|&k| limit[k] != rat(0, 1)).collect();
        prop_assert!(nonzero.len() <= 1);
        if let [b] = nonzero[..] {
            prop_assert_eq!(&limit[b], &rat(1, 1));
            let back = ops.e(i, &rep.basis_vector(b));
            let back: Vec<_> = back.iter().map(|x| x.limit_t0().unwrap()).collect();
            let expect: Vec<_> = rep.basis_vector(a).iter().map(|x| x.limit_t0().unwrap()).collect();
            prop_assert_eq!(back, expect);
        }
    }

    #[test]
    fn normal_form_is_multiplicative(n in 1usize..=2, u in word(2, 3), v in word(2, 3)) {
        let clip = |w: &[(usize, usize)]| -> Vec<(usize, usize)> { w.iter().map(|&(i, j)| (i.min(n + 1), j.min(n + 1))).collect() };
        let (u, v) = (clip(&u), clip(&v));
        let alg = Algebra::new(n);
        let joined: Vec<_> = u.iter().chain(&v).copied().collect();
        let lhs = alg.normal_form(&joined).unwrap();
        let rhs = alg.mul(&alg.normal_form(&u).unwrap(), &alg.normal_form(&v).unwrap());
        prop_assert_eq!(&lhs, &rhs);
        // star and antipode raise degree by a factor of n, so keep their inputs short
        let (x, y) = (alg.normal_form(&u[..u.len().min(2)]).unwrap(), alg.normal_form(&v[..v.len().min(1)]).unwrap());
        let xy = alg.mul(&x, &y);
        prop_assert_eq!(alg.star(&alg.star(&xy)), xy.clone());
        prop_assert_eq!(alg.star(&xy), alg.mul(&alg.star(&y), &alg.star(&x)));
        prop_assert_eq!(alg.antipode(&xy), alg.mul(&alg.antipode(&y), &alg.antipode(&x)));
    }

    #[test]
    fn normal_form_pairs_like_the_word(w in word(1, 5), probe in prop::collection::vec(0usize..4, 0..5)) {
        let letters = [Gen::E(1), Gen::F(1), Gen::K(1), Gen::Kinv(1)];
        let probe: Vec<Gen> = probe.into_iter().map(|k| letters[k]).collect();
        let alg = Algebra::new(1);
        let nf = alg.normal_form(&w).unwrap();
        let mut oracle = PairingOracle::new();
        prop_assert_eq!(oracle.evaluate_word(&w, &probe), oracle.evaluate(&nf, &probe));
    }
}
