use qcrystal::cartan::Weight;
use qcrystal::fnalg::*;
use qcrystal::ratfield::RatFunc;
use qcrystal::repth::{fundamental_rep, highest_weight_submodule, tensor_power, Gen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t(k: i64) -> RatFunc {
    RatFunc::t_pow(k)
}

fn u(alg: &Algebra, i: usize, j: usize) -> FnAlgElem {
    alg.gen(i, j).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<(usize, usize)> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| (rng.gen_range(1..=n + 1), rng.gen_range(1..=n + 1))).collect()
}

#[test]
fn qdet_expansion_and_reduction() {
    assert_eq!(Algebra::matrix(1).qdet().to_string(), "u11*u22 - t*u12*u21");
    for n in 1..=2 {
        assert_eq!(Algebra::new(n).qdet(), FnAlgElem::one());
    }
}

#[test]
fn qdet_is_central_in_the_matrix_algebra() {
    for n in 1..=2 {
        let alg = Algebra::matrix(n);
        let d = alg.qdet();
        for i in 1..=n + 1 {
            for j in 1..=n + 1 {
                let g = u(&alg, i, j);
                assert_eq!(alg.mul(&d, &g), alg.mul(&g, &d), "n={n} u{i}{j}");
            }
        }
    }
}

#[test]
fn normal_form_examples() {
    let alg = Algebra::new(1);
    assert_eq!(alg.normal_form(&[]).unwrap(), FnAlgElem::one());
    // u11 u21 = t u21 u11
    let lhs = alg.normal_form(&[(1, 1), (2, 1)]).unwrap();
    let rhs = alg.normal_form(&[(2, 1), (1, 1)]).unwrap().scale(&t(1));
    assert_eq!(lhs, rhs);
    // u22 u11 = 1 + t^-1 u12 u21 once D = 1 is imposed
    assert_eq!(alg.normal_form(&[(2, 2), (1, 1)]).unwrap().to_string(), "1 + t^-1*u12*u21");
    assert!(alg.normal_form(&[(3, 1)]).is_err());
}

#[test]
fn reduction_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=2 {
        let alg = Algebra::new(n);
        for _ in 0..40 {
            let w = random_word(&mut rng, n, 6);
            let direct = alg.normal_form(&w).unwrap();
            let mut pick = |k: usize| rng.gen_range(0..k);
            let other = alg.normal_form_by_choice(&w, &mut pick).unwrap();
            assert_eq!(direct, other, "word {w:?}");
        }
    }
}

#[test]
fn normal_forms_agree_with_the_pairing_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=2 {
        let alg = Algebra::new(n);
        let words = pbw_words(n, 2);
        let mut oracle = PairingOracle::new();
        for _ in 0..15 {
            let w = random_word(&mut rng, n, 5);
            let nf = alg.normal_form(&w).unwrap();
            for a in &words {
                assert_eq!(oracle.evaluate_word(&w, a), oracle.evaluate(&nf, a), "word {w:?} on {a:?}");
            }
        }
    }
}

#[test]
fn pairing_examples() {
    let alg = Algebra::new(1);
    assert_eq!(evaluate_pairing(&u(&alg, 1, 1), &[Gen::K(1)]), t(1));
    assert_eq!(evaluate_pairing(&u(&alg, 1, 2), &[]), RatFunc::zero());
    assert_eq!(evaluate_pairing(&u(&alg, 1, 1), &[]), RatFunc::one());
    assert_eq!(evaluate_pairing(&u(&alg, 1, 2), &[Gen::E(1)]), RatFunc::one());
    // the unreduced determinant pairs like the counit
    let raw = Algebra::matrix(1).qdet();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let letters = [Gen::E(1), Gen::F(1), Gen::K(1), Gen::Kinv(1)];
    let mut oracle = PairingOracle::new();
    for _ in 0..50 {
        let len = rng.gen_range(0..5);
        let word: Vec<Gen> = (0..len).map(|_| letters[rng.gen_range(0..4)]).collect();
        let counit = word.iter().all(|g| matches!(g, Gen::K(_) | Gen::Kinv(_)));
        let expect = if counit { RatFunc::one() } else { RatFunc::zero() };
        assert_eq!(oracle.evaluate(&raw, &word), expect, "{word:?}");
    }
}

#[test]
fn pairing_is_compatible_with_the_coproduct() {
    let n = 2;
    let alg = Algebra::new(n);
    let mut elems = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            elems.push(u(&alg, i, j));
        }
    }
    elems.push(alg.normal_form(&[(2, 1), (1, 3)]).unwrap());
    elems.push(alg.normal_form(&[(3, 3), (1, 2), (2, 2)]).unwrap());
    let ev = |x: &FnAlgElem, w: &[Gen]| evaluate_pairing(x, w);
    for x in &elems {
        for y in &elems {
            let xy = alg.mul(x, y);
            for i in 1..=n {
                // E -> E (x) K^-1 + 1 (x) E
                let e = ev(x, &[Gen::E(i)]).mul_ref(&ev(y, &[Gen::Kinv(i)])).add_ref(&ev(x, &[]).mul_ref(&ev(y, &[Gen::E(i)])));
                assert_eq!(ev(&xy, &[Gen::E(i)]), e);
                // F -> F (x) 1 + K (x) F
                let f = ev(x, &[Gen::F(i)]).mul_ref(&ev(y, &[])).add_ref(&ev(x, &[Gen::K(i)]).mul_ref(&ev(y, &[Gen::F(i)])));
                assert_eq!(ev(&xy, &[Gen::F(i)]), f);
                let k = ev(x, &[Gen::K(i)]).mul_ref(&ev(y, &[Gen::K(i)]));
                assert_eq!(ev(&xy, &[Gen::K(i)]), k);
            }
        }
    }
}

#[test]
fn star_examples() {
    let alg = Algebra::new(1);
    assert_eq!(alg.star(&u(&alg, 1, 1)), u(&alg, 2, 2));
    assert_eq!(alg.star(&u(&alg, 2, 1)), u(&alg, 1, 2).scale(&t(-1)).neg());
    assert_eq!(alg.star(&u(&alg, 1, 2)), u(&alg, 2, 1).scale(&t(1)).neg());
}

#[test]
fn star_is_an_involutive_antihomomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=2 {
        let alg = Algebra::new(n);
        for i in 1..=n + 1 {
            for j in 1..=n + 1 {
                let g = u(&alg, i, j);
                assert_eq!(alg.star(&alg.star(&g)), g);
            }
        }
        for _ in 0..10 {
            let x = alg.normal_form(&random_word(&mut rng, n, 3)).unwrap();
            let y = alg.normal_form(&random_word(&mut rng, n, 3)).unwrap();
            assert_eq!(alg.star(&alg.star(&x)), x);
            assert_eq!(alg.star(&alg.mul(&x, &y)), alg.mul(&alg.star(&y), &alg.star(&x)));
        }
    }
}

#[test]
fn antipode_inverts_the_generator_matrix() {
    let alg = Algebra::new(1);
    assert_eq!(alg.antipode(&u(&alg, 1, 1)), u(&alg, 2, 2));
    assert_eq!(alg.antipode(&FnAlgElem::one()), FnAlgElem::one());
    for n in 1..=2 {
        let alg = Algebra::new(n);
        for i in 1..=n + 1 {
            for j in 1..=n + 1 {
                let mut left = FnAlgElem::zero();
                let mut right = FnAlgElem::zero();
                for k in 1..=n + 1 {
                    let s_ik = alg.antipode(&u(&alg, i, k));
                    let s_kj = alg.antipode(&u(&alg, k, j));
                    left = left.add(&alg.mul(&s_ik, &u(&alg, k, j)));
                    right = right.add(&alg.mul(&u(&alg, i, k), &s_kj));
                }
                let delta = if i == j { FnAlgElem::one() } else { FnAlgElem::zero() };
                assert_eq!(left, delta, "n={n} ({i},{j})");
                assert_eq!(right, delta, "n={n} ({i},{j})");
            }
        }
    }
}

#[test]
fn matrix_coefficients_of_tensor_submodules() {
    let alg = Algebra::new(1);
    let fund = highest_weight_submodule(&fundamental_rep(1), &Weight::new(vec![1])).unwrap();
    for i in 1..=2 {
        for j in 1..=2 {
            assert_eq!(matrix_coeff(&alg, &fund, i, j).unwrap(), u(&alg, i, j));
        }
    }
    let sq = highest_weight_submodule(&tensor_power(1, 2), &Weight::new(vec![2])).unwrap();
    assert_eq!(matrix_coeff(&alg, &sq, 1, 1).unwrap(), alg.normal_form(&[(1, 1), (1, 1)]).unwrap());
    assert!(matrix_coeff(&alg, &sq, 4, 1).is_err());
}

#[test]
fn matrix_coefficients_pair_like_the_polarization() {
    let words: Vec<Vec<Gen>> = vec![vec![], vec![Gen::F(1)], vec![Gen::E(1)], vec![Gen::K(1), Gen::F(1)], vec![Gen::E(1), Gen::F(1)]];
    for (n, hw) in [(1usize, vec![2i64]), (2, vec![0, 1]), (2, vec![1, 0])] {
        let alg = Algebra::new(n);
        let r = Realization::new(n, &Weight::new(hw.clone())).unwrap();
        let rep = &r.sub.as_ref().unwrap().rep;
        let g = r.polarization().unwrap().gram;
        let mut words = words.clone();
        if n == 2 {
            words.push(vec![Gen::F(2), Gen::F(1)]);
            words.push(vec![Gen::E(2), Gen::K(1)]);
        }
        for word in &words {
            let a = g.mul(&rep.word_matrix(word));
            for i in 1..=r.dim() {
                for j in 1..=r.dim() {
                    let c = r.coefficient(&alg, i, j).unwrap();
                    assert_eq!(evaluate_pairing(&c, word), *a.get(i - 1, j - 1), "{hw:?} C_{i}{j} on {word:?}");
                }
            }
        }
    }
}

fn targets() -> Vec<(usize, Vec<i64>)> {
    vec![(1, vec![1]), (1, vec![2]), (2, vec![1, 0]), (2, vec![0, 1])]
}

#[test]
fn triangular_decomposition_over_a0() {
    for (n, hw) in targets() {
        let alg = Algebra::new(n);
        let r = Realization::new(n, &Weight::new(hw.clone())).unwrap();
        for i in 1..=r.dim() {
            for j in 1..=r.dim() {
                let w = triangular_search(&alg, &r, i, j, 4, FactorOrder::Either).unwrap();
                assert!(w.all_in_a0(), "{hw:?} ({i},{j})");
                assert_ne!(w.order, FactorOrder::Either);
                assert!(w.min_valuation.unwrap() >= 0);
            }
        }
    }
}

#[test]
fn each_fixed_factor_order_fails_on_one_middle_column() {
    let alg = Algebra::new(1);
    let r = Realization::new(1, &Weight::new(vec![2])).unwrap();
    for i in 1..=3 {
        for j in 1..=3 {
            let res = triangular_search(&alg, &r, i, j, 4, FactorOrder::PlusMinus);
            if j == 2 {
                assert!(matches!(res, Err(qcrystal::Error::NotInA0Solution { valuation: -1, .. })), "({i},{j})");
            } else {
                assert!(res.unwrap().all_in_a0());
            }
            let res = triangular_search(&alg, &r, i, j, 4, FactorOrder::MinusPlus);
            assert!(res.unwrap().all_in_a0());
        }
    }
    let alg = Algebra::new(2);
    let r = Realization::new(2, &Weight::fundamental(2, 1)).unwrap();
    for i in 1..=3 {
        let res = triangular_search(&alg, &r, i, 2, 5, FactorOrder::MinusPlus);
        assert!(matches!(res, Err(qcrystal::Error::NotInA0Solution { valuation: -1, .. })), "({i},2)");
        assert!(triangular_search(&alg, &r, i, 2, 5, FactorOrder::PlusMinus).unwrap().all_in_a0());
    }
}

#[test]
fn triangular_trivial_case_is_a_unit_vector() {
    let alg = Algebra::new(2);
    let r = Realization::new(2, &Weight::fundamental(2, 1)).unwrap();
    let z = Weight::zero(2);
    for order in [FactorOrder::PlusMinus, FactorOrder::MinusPlus] {
        let w = triangular_decompose(&alg, &r, 2, 1, &Weight::fundamental(2, 1), &z, order).unwrap();
        assert_eq!(w.table, vec![(2, 1, RatFunc::one())]);
    }
    let bad = triangular_decompose(&alg, &r, 2, 1, &Weight::fundamental(2, 2), &z, FactorOrder::MinusPlus);
    assert!(bad.is_err());
}

#[test]
fn scaled_generation() {
    let alg = Algebra::new(1);
    let c = scaled_generation_certificate(&u(&alg, 1, 2)).unwrap();
    assert_eq!(c.terms.len(), 1);
    assert_eq!(c.terms[0].coeff, t(1));
    let c = scaled_generation_certificate(&alg.star(&u(&alg, 2, 1))).unwrap();
    assert_eq!(c.terms[0].coeff, RatFunc::from_int(-1));
    assert_eq!(c.terms[0].gens, vec![(1, 2)]);
    assert!(scaled_generation_certificate(&u(&alg, 2, 1).scale(&t(-1))).is_err());
    assert!(scaled_generation_certificate(&u(&alg, 2, 1)).is_ok());
    assert!(scaled_generation_certificate(&u(&alg, 1, 2).scale(&t(-2))).is_err());
    let alg = Algebra::new(2);
    for r in 1..=3 {
        for s in 1..=3 {
            let c = star_scaled_certificate(&alg, r, s).unwrap();
            assert!(c.passed());
            assert!(c.terms.iter().all(|x| x.audited_exponent.unwrap() >= 0));
        }
    }
}

#[test]
fn star_scaling_on_minuscule_and_sl2_modules() {
    for (n, hw) in [(1usize, vec![1i64]), (1, vec![2]), (2, vec![1, 0]), (2, vec![0, 1]), (3, vec![1, 0, 0])] {
        let alg = Algebra::new(n);
        let r = Realization::new(n, &Weight::new(hw.clone())).unwrap();
        let rep = rstar_scaling_check(&alg, &r).unwrap();
        assert!(rep.passed(), "{hw:?}: {:?}", rep.first_failure());
        for e in &rep.entries {
            if e.r == e.s {
                assert_eq!(e.exponent, 0);
            }
        }
        if n == 2 && hw == vec![1, 0] {
            let e = rep.entries.iter().find(|e| (e.r, e.s) == (2, 1)).unwrap();
            assert_eq!(e.exponent, -1);
        }
        if n == 1 && hw == vec![1] {
            assert_eq!(rep.entries.len(), 4);
        }
    }
}

#[test]
fn generator_level_inclusion() {
    let alg = Algebra::new(2);
    for hw in [vec![1, 0], vec![0, 1]] {
        let r = Realization::new(2, &Weight::new(hw)).unwrap();
        let rep = corollary_check(&alg, &r, 4, FactorOrder::Either).unwrap();
        assert!(rep.passed(), "{:?}", rep.entries);
    }
}

#[test]
fn expression_parser() {
    let alg = Algebra::new(1);
    let p = |s: &str| parse_elem(&alg, s).unwrap().to_string();
    assert_eq!(p("u(1,1)*u22 - t*u12*u21"), "1");
    assert_eq!(p("star(u21)"), "-t^-1*u12");
    assert_eq!(p("S(u11)"), "u22");
    assert_eq!(p("qdet(1)"), "1");
    assert_eq!(p("t^-1 * u12"), "t^-1*u12");
    assert_eq!(p("1/2*u11 + u11^2 - (u11)^2"), "1/2*u11");
    assert_eq!(p("-(u21 + u12)"), "-u12 - u21");
    for bad in ["u(3,1)", "qdet(2)", "u11^-1", "u11 +", "star(u11", "x"] {
        assert!(parse_elem(&alg, bad).is_err(), "{bad}");
    }
    let m = Algebra::matrix(1);
    assert_eq!(parse_elem(&m, "qdet(1)").unwrap().to_string(), "u11*u22 - t*u12*u21");
}

#[test]
fn block_projection() {
    let big = Algebra::new(2);
    let small = Algebra::new(1);
    let p = |x: &FnAlgElem, a, b| big.project(x, a, b, &small).unwrap();
    assert_eq!(p(&u(&big, 3, 3), 1, 2), FnAlgElem::one());
    assert_eq!(p(&u(&big, 1, 2), 1, 2), u(&small, 1, 2));
    assert_eq!(p(&u(&big, 1, 2), 2, 3), FnAlgElem::zero());
    assert_eq!(p(&big.qdet(), 2, 3), FnAlgElem::one());
    assert_eq!(p(&big.star(&u(&big, 2, 3)), 2, 3), small.star(&u(&small, 1, 2)));
}
