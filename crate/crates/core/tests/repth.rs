use qcrystal::cartan::{minus_w0, Weight};
use qcrystal::linalg::{is_zero_vec, Mat, Vector};
use qcrystal::ratfield::RatFunc;
use qcrystal::repth::*;

fn t(k: i64) -> RatFunc {
    RatFunc::t_pow(k)
}

fn c(k: i64) -> RatFunc {
    RatFunc::from_int(k)
}

fn w(c: &[i64]) -> Weight {
    Weight::new(c.to_vec())
}

fn tensor2(n: usize) -> Rep {
    tensor_power(n, 2)
}

#[test]
fn fundamental_rep_examples() {
    assert_eq!(fundamental_rep(2).dim(), 3);
    let v = fundamental_rep(1);
    assert_eq!(v.apply(Gen::E(1), &v.basis_vector(1)), v.basis_vector(0));
    assert_eq!(v.apply(Gen::F(1), &v.basis_vector(0)), v.basis_vector(1));
    assert_eq!(v.apply(Gen::K(1), &v.basis_vector(0)), vec![t(1), c(0)]);
    let v3 = fundamental_rep(3);
    assert_eq!(v3.weights, vec![w(&[1, 0, 0]), w(&[-1, 1, 0]), w(&[0, -1, 1]), w(&[0, 0, -1])]);
}

#[test]
fn relations_hold_on_tensor_powers() {
    assert!(verify_uq_relations(&fundamental_rep(2)).passed());
    assert!(verify_uq_relations(&tensor2(1)).passed());
    assert!(verify_uq_relations(&tensor_power(2, 3)).passed());
    for m in 0..5 {
        assert!(verify_uq_relations(&sl2_irrep(m)).passed());
    }
}

#[test]
fn perturbed_f_entry_is_caught_by_the_commutator() {
    let v = fundamental_rep(1);
    let bad = v.with_entry(Gen::F(1), 1, 0, t(1));
    let report = verify_uq_relations(&bad);
    let failure = report.failure.expect("fault must be detected");
    assert!(failure.contains("E-F commutator"), "{failure}");
}

#[test]
fn tensor_square_weights() {
    let v = tensor2(1);
    assert_eq!(v.dim(), 4);
    let count = |k: i64| v.weights.iter().filter(|x| x.coords == vec![k]).count();
    assert_eq!((count(2), count(0), count(-2)), (1, 2, 1));
    assert_eq!(tensor2(3).dim(), 16);
}

#[test]
fn kashiwara_examples() {
    let v = fundamental_rep(1);
    let ops = kashiwara_ops(&v);
    assert_eq!(ops.f(1, &v.basis_vector(0)), v.basis_vector(1));
    assert!(is_zero_vec(&ops.e(1, &v.basis_vector(0))));

    // e1 (x) e1 goes to e2 (x) e1 modulo t L
    let vv = tensor2(1);
    let ops = kashiwara_ops(&vv);
    let img = ops.f(1, &vv.basis_vector(0));
    let lim: Vec<_> = img.iter().map(|x| x.limit_t0().unwrap()).collect();
    let expect: Vec<_> = vv.basis_vector(2).iter().map(|x| x.limit_t0().unwrap()).collect();
    assert_eq!(lim, expect);

    for m in 1..4 {
        let r = sl2_irrep(m);
        let ops = kashiwara_ops(&r);
        let hw = r.basis_vector(0);
        assert_eq!(ops.e(1, &ops.f(1, &hw)), hw);
        // on the divided-power basis F~ moves one step down the string
        for k in 0..m {
            assert_eq!(ops.f(1, &r.basis_vector(k)), r.basis_vector(k + 1));
        }
    }
}

#[test]
fn string_decomposition_reassembles() {
    let r = tensor_power(1, 3);
    for a in 0..r.dim() {
        let u = r.basis_vector(a);
        let parts = string_decomposition(&r, 1, &u);
        let mut sum = vec![c(0); r.dim()];
        for (k, uk) in &parts {
            assert!(is_zero_vec(&r.apply(Gen::E(1), uk)));
            let x = r.f_divided(1, *k).mul_vec(uk);
            sum = sum.iter().zip(&x).map(|(p, q)| p + q).collect();
        }
        assert_eq!(sum, u);
    }
}

#[test]
fn crystal_lattices() {
    for n in 1..=3 {
        let v = fundamental_rep(n);
        let ops = kashiwara_ops(&v);
        let l = crystal_lattice(&v, &ops, &[v.basis_vector(0)]).unwrap();
        assert!(l.same_as(&Lattice::standard(n + 1)));
    }
    let vv = tensor2(1);
    let ops = kashiwara_ops(&vv);
    let sing = singular_vectors(&vv, &w(&[0]));
    let l = crystal_lattice(&vv, &ops, &[vv.basis_vector(0), sing[0].clone()]).unwrap();
    assert_eq!(l.rank(), 4);
    assert!(l.closure_defect(&ops).is_none());

    let vv2 = tensor2(2);
    let ops2 = kashiwara_ops(&vv2);
    let sing2 = singular_vectors(&vv2, &w(&[0, 1]));
    let l2 = crystal_lattice(&vv2, &ops2, &[vv2.basis_vector(0), sing2[0].clone()]).unwrap();
    assert_eq!(l2.rank(), 9);
    assert!(l2.closure_defect(&ops2).is_none());

    // the highest weight vector alone does not generate V (x) V
    assert!(crystal_lattice(&vv, &ops, &[vv.basis_vector(0)]).is_err());
}

#[test]
fn singular_vector_of_weight_zero() {
    let vv = tensor2(1);
    let s = singular_vectors(&vv, &w(&[0]));
    assert_eq!(s.len(), 1);
    assert_eq!(s[0], vec![c(0), c(1), t(1).neg_ref(), c(0)]);
}

#[test]
fn highest_weight_submodules() {
    let vv = tensor2(1);
    assert_eq!(highest_weight_submodule(&vv, &w(&[2])).unwrap().dim(), 3);
    assert_eq!(highest_weight_submodule(&vv, &w(&[0])).unwrap().dim(), 1);
    let vv2 = tensor2(2);
    assert_eq!(highest_weight_submodule(&vv2, &w(&[2, 0])).unwrap().dim(), 6);
    assert_eq!(highest_weight_submodule(&vv2, &w(&[0, 1])).unwrap().dim(), 3);
    assert!(matches!(
        highest_weight_submodule(&vv2, &w(&[1, 1])),
        Err(qcrystal::Error::NoSingularVector(_))
    ));
    let sub = highest_weight_submodule(&vv2, &w(&[0, 1])).unwrap();
    assert!(verify_uq_relations(&sub.rep).passed());
}

#[test]
fn polarization_examples() {
    let v = fundamental_rep(1);
    let g = polarization(&v, 0).unwrap();
    assert_eq!(g.gram, Mat::identity(2));
    assert!(g.gram.get(1, 1).is_one_mod_t());

    let r = sl2_irrep(2);
    let g = polarization(&r, 0).unwrap();
    assert!(g.gram.get(0, 0).is_one());
    for a in 0..3 {
        for b in 0..3 {
            if a != b {
                assert!(g.gram.get(a, b).is_zero());
            } else {
                assert!(g.gram.get(a, a).is_one_mod_t(), "{}", g.gram.get(a, a));
            }
        }
    }
    assert!(contravariance_defect(&r, &g).is_none());

    // the product form on a tensor power is contravariant
    let vv = tensor_power(2, 2);
    assert!(contravariance_defect(&vv, &identity_form(9)).is_none());

    // a reducible module has no unique normalized form
    assert!(matches!(polarization(&tensor2(1), 0), Err(qcrystal::Error::NotIrreducible(_))));
}

#[test]
fn polarization_of_submodules_matches_the_restricted_product_form() {
    let vv2 = tensor2(2);
    for hw in [w(&[2, 0]), w(&[0, 1])] {
        let sub = highest_weight_submodule(&vv2, &hw).unwrap();
        let g = polarization(&sub.rep, 0).unwrap();
        let restricted = identity_form(9).restricted_gram(&sub.embedding);
        // equal up to the norm of the highest weight vector
        let scale = restricted.get(0, 0).clone();
        assert_eq!(g.gram.scale(&scale), restricted);
    }
}

#[test]
fn dual_module_of_the_vector_representation() {
    let v = fundamental_rep(1);
    let g = polarization(&v, 0).unwrap();
    let d = dual_rep(&v, &g).unwrap();
    assert_eq!(d.c_lambda, c(1));
    assert!(verify_uq_relations(&d.rep).passed());
    assert!(contravariance_defect(&d.rep, &d.form).is_none());
    // explicit isomorphism V -> V* sending e1 to the highest weight vector of the dual
    let hw_dual = d.rep.basis_vector(d.rep.hw.unwrap());
    let map = intertwiner(&v, &d.rep, &v.basis_vector(0), &hw_dual).unwrap();
    assert!(!map.det().is_zero());
}

fn modules_with_one_dimensional_weight_spaces() -> Vec<Rep> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(fundamental_rep(n));
    }
    out.push(highest_weight_submodule(&tensor2(2), &w(&[0, 1])).unwrap().rep);
    out.push(sl2_irrep(2));
    out.push(sl2_irrep(3));
    out
}

#[test]
fn dual_form_is_contravariant_and_normalized() {
    for r in modules_with_one_dimensional_weight_spaces() {
        let g = polarization(&r, 0).unwrap();
        let d = dual_rep(&r, &g).unwrap();
        assert!(verify_uq_relations(&d.rep).passed());
        assert!(contravariance_defect(&d.rep, &d.form).is_none());
        let lambda = r.weights[0].clone();
        assert_eq!(d.highest_weight, minus_w0(&lambda));
        // t^{(w0 L - L, rho)} (v_N)* has norm one
        let n = r.dim();
        let e = rho_pairing(&(&(-&minus_w0(&lambda)) - &lambda)).unwrap();
        let v1: Vector = d.star_of(&r.basis_vector(n - 1)).iter().map(|x| x * &t(e)).collect();
        assert!(d.form.norm(&v1).is_one());
        assert!(double_dual_defect(&r, &d).is_none());
    }
}

#[test]
fn dual_lattice_bases() {
    for r in modules_with_one_dimensional_weight_spaces() {
        let g = polarization(&r, 0).unwrap();
        let d = dual_rep(&r, &g).unwrap();
        let rep = dual_lattice_basis(&r, &d).unwrap();
        assert!(rep.norms_one_mod_t(), "{:?}", rep.norms);
        assert!(rep.spans_lattice);
        assert!(rep.weight_refinement_ok);
        assert_eq!(rep.change_of_basis_valuation, Some(0));
        assert_eq!(rep.strictness_witness, Some(1));
        assert!(rep.exponents.iter().all(|&e| e >= 0));
    }
}

#[test]
fn orthogonal_splittings() {
    for (n, hws) in [(1usize, vec![w(&[0])]), (2, vec![w(&[0, 1]), w(&[2, 0])])] {
        let vv = tensor2(n);
        let d = vv.dim();
        let form = identity_form(d);
        let ops = kashiwara_ops(&vv);
        let top = Weight::fundamental(n, 1).scale(2);
        let low = if n == 1 { w(&[0]) } else { w(&[0, 1]) };
        let sing = singular_vectors(&vv, &low);
        let lattice = crystal_lattice(&vv, &ops, &[vv.basis_vector(0), sing[0].clone()]).unwrap();
        assert_eq!(vv.weights[0], top);
        for hw in hws {
            let sub = highest_weight_submodule(&vv, &hw).unwrap();
            let split = orthogonal_decompose(&vv, &form, &sub.embedding, &lattice).unwrap();
            assert!(split.passed(), "n={n} hw={hw}");
        }
        // W = everything leaves nothing orthogonal
        let all = Lattice::standard(d).basis;
        let split = orthogonal_decompose(&vv, &form, &all, &lattice).unwrap();
        assert!(split.w_perp.is_empty());
    }
}

#[test]
fn rep_expressions() {
    let e = parse_rep("hw(tensor(fund(1),fund(1)),2)").unwrap();
    assert_eq!(e.build().unwrap().dim(), 3);
    assert_eq!(parse_rep("tensor(fund(2), fund(2))").unwrap().build().unwrap().dim(), 9);
    assert_eq!(parse_rep("sl2(3)").unwrap().build().unwrap().dim(), 4);
    assert!(parse_rep("fund(").is_err());
    assert!(parse_rep("hw(fund(2),1)").unwrap().build().is_err());
}
