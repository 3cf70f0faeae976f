use std::collections::BTreeMap;

use qcrystal::cartan::{Weight, WeylWord};
use qcrystal::fnalg::{
    corollary_check, pbw_words, rstar_scaling_check, star_scaled_certificate, triangular_search, Algebra,
    FactorOrder, FnAlgElem, PairingOracle, Realization,
};
use qcrystal::ratfield::{minus_t_pow, parse_rat, rat_to_f64, rat_to_string, Rat};
use qcrystal::repth::{
    crystal_lattice, double_dual_defect, dual_lattice_basis, dual_rep, fundamental_rep, highest_weight_submodule,
    identity_form, kashiwara_ops, orthogonal_decompose, polarization, singular_vectors, sl2_irrep, tensor_power,
    verify_uq_relations, Rep,
};
use qcrystal::soibelman::{
    commuting_square, compare_limits, compare_on_interior, crystal_limit_comparison, fixed_q_comparison, generator,
    my_q, pi0_gp, pi0_my, psi_q, star_compatibility, Cutoffs, ExactAt, FloatAt, Layout, DEFAULT_QS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{sort_reports, CheckReport};

pub type Params = BTreeMap<String, String>;

pub const DEFAULT_SEED: u64 = 42;

/// Tolerance for double-precision comparisons of operators.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Tolerance for the numeric cross-check of `q -> 0` limits.
pub const LIMIT_TOLERANCE: f64 = 1e-6;

pub const SUITES: [&str; 13] = [
    "uq-relations",
    "frt-confluence",
    "qdet",
    "star",
    "dual-lattice",
    "double-dual",
    "orthogonal-split",
    "triangular",
    "rstar",
    "scaled-generation",
    "commuting-square",
    "pipelines",
    "crystal-limit",
];

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("invalid parameter {key}={value:?}: {reason}")]
    InvalidParam { key: String, value: String, reason: String },
}

type Outcome<T> = std::result::Result<T, SuiteError>;

/// Typed access to the string parameters of a suite.
struct Args<'a>(&'a Params);

impl Args<'_> {
    fn invalid(&self, key: &str, reason: impl Into<String>) -> SuiteError {
        SuiteError::InvalidParam {
            key: key.into(),
            value: self.0.get(key).cloned().unwrap_or_default(),
            reason: reason.into(),
        }
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Outcome<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.trim().parse().map(Some).map_err(|_| self.invalid(key, "not a number")),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Outcome<usize> {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    fn seed(&self) -> Outcome<u64> {
        Ok(self.parse("seed")?.unwrap_or(DEFAULT_SEED))
    }

    fn flag(&self, key: &str) -> Outcome<Option<bool>> {
        match self.0.get(key).map(String::as_str) {
            None => Ok(None),
            Some("true" | "1" | "yes") => Ok(Some(true)),
            Some("false" | "0" | "no") => Ok(Some(false)),
            Some(_) => Err(self.invalid(key, "expected true or false")),
        }
    }

    /// Ranks to run: the `n` parameter (or `algebra=sl<n+1>`) if given and
    /// supported, otherwise all of `supported`.
    fn ranks(&self, supported: &[usize]) -> Outcome<Vec<usize>> {
        let mut n: Option<usize> = self.parse("n")?;
        if let Some(a) = self.0.get("algebra") {
            let k: usize = a
                .strip_prefix("sl")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 2)
                .ok_or_else(|| self.invalid("algebra", "expected sl2, sl3, ..."))?;
            if n.is_some_and(|n| n != k - 1) {
                return Err(self.invalid("algebra", "disagrees with n"));
            }
            n = Some(k - 1);
        }
        match n {
            None => Ok(supported.to_vec()),
            Some(n) if supported.contains(&n) => Ok(vec![n]),
            Some(_) => Err(self.invalid(if self.0.contains_key("n") { "n" } else { "algebra" }, format!("supported ranks are {supported:?}"))),
        }
    }

    fn rat(&self, key: &str) -> Outcome<Option<Rat>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => parse_rat(v).map(Some).map_err(|e| self.invalid(key, e.to_string())),
        }
    }

    fn rats_or(&self, key: &str, default: &[(i64, i64)]) -> Outcome<Vec<Rat>> {
        Ok(match self.rat(key)? {
            Some(q) => {
                if q <= Rat::from_integer(0.into()) || q >= Rat::from_integer(1.into()) {
                    return Err(self.invalid(key, "q must lie in (0, 1)"));
                }
                vec![q]
            }
            None => default.iter().map(|&(a, b)| qcrystal::ratfield::rat(a, b)).collect(),
        })
    }

    fn cutoffs(&self, prefix: &str, default: Cutoffs) -> Outcome<Cutoffs> {
        Ok(Cutoffs {
            cutoff: self.usize_or(&format!("{prefix}cutoff"), default.cutoff)?,
            window: self.usize_or(&format!("{prefix}window"), default.window)?,
        })
    }

    fn layout(&self, n: usize, cutoffs: Cutoffs) -> Outcome<Layout> {
        let built = match self.0.get("word") {
            Some(w) => WeylWord::parse(n, w).and_then(|w| Layout::with_word(w, cutoffs)),
            None => Layout::new(n, cutoffs),
        };
        built.map_err(|e| self.invalid("word", e.to_string()))
    }

    /// Highest weights to run: the `omega` parameter if given, otherwise `all`.
    fn weights(&self, n: usize, all: &[Weight]) -> Outcome<Vec<Weight>> {
        match self.0.get("omega") {
            None => Ok(all.to_vec()),
            Some(s) => {
                let w = Weight::parse(s).map_err(|e| self.invalid("omega", e.to_string()))?;
                if w.rank() != n || !w.is_dominant() {
                    return Err(self.invalid("omega", format!("expected a dominant weight of rank {n}")));
                }
                Ok(vec![w])
            }
        }
    }
}

fn w(c: &[i64]) -> Weight {
    Weight::new(c.to_vec())
}

/// Runs `body`, turning a computation error into a failing report.
fn guarded(template: CheckReport, body: impl FnOnce(CheckReport) -> qcrystal::Result<CheckReport>) -> CheckReport {
    let fallback = template.clone();
    body(template).unwrap_or_else(|e| fallback.verdict(false, format!("error: {e}")))
}

/// Runs one suite; reports are sorted by check name and parameters.
pub fn run_suite(name: &str, params: &Params) -> Outcome<Vec<CheckReport>> {
    let args = Args(params);
    let mut reports = match name {
        "uq-relations" => uq_relations(&args)?,
        "frt-confluence" => frt_confluence(&args)?,
        "qdet" => qdet(&args)?,
        "star" => star(&args)?,
        "dual-lattice" => dual_lattice(&args)?,
        "double-dual" => double_dual(&args)?,
        "orthogonal-split" => orthogonal_split(&args)?,
        "triangular" => triangular(&args)?,
        "rstar" => rstar(&args)?,
        "scaled-generation" => scaled_generation(&args)?,
        "commuting-square" => commuting(&args)?,
        "pipelines" => pipelines(&args)?,
        "crystal-limit" => crystal_limit(&args)?,
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(run_suite(s, params)?);
            }
            all
        }
        other => return Err(SuiteError::UnknownSuite(other.into())),
    };
    sort_reports(&mut reports);
    Ok(reports)
}

fn uq_relations(args: &Args) -> Outcome<Vec<CheckReport>> {
    let powers = match args.parse::<usize>("power")? {
        Some(m) if (1..=3).contains(&m) => vec![m],
        Some(_) => return Err(args.invalid("power", "supported powers are 1..=3")),
        None => vec![1, 2, 3],
    };
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2, 3])? {
        for &m in &powers {
            let report = verify_uq_relations(&tensor_power(n, m));
            let base = CheckReport::new("uq-relations", &[("n", n.to_string()), ("power", m.to_string())]);
            out.push(match report.failure {
                None => base.verdict(true, format!("{} relations hold exactly", report.checked)),
                Some(f) => base.verdict(false, f),
            });
        }
    }
    Ok(out)
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<(usize, usize)> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| (rng.gen_range(1..=n + 1), rng.gen_range(1..=n + 1))).collect()
}

fn frt_confluence(args: &Args) -> Outcome<Vec<CheckReport>> {
    let ranks = args.ranks(&[1, 2])?;
    let total = args.usize_or("words", 200)?;
    let max_len = args.usize_or("max-len", 6)?;
    let max_exp = args.usize_or("max-exp", 3)?;
    let seed = args.seed()?;
    let mut out = Vec::new();
    for (idx, &n) in ranks.iter().enumerate() {
        let count = total / ranks.len() + usize::from(idx < total % ranks.len());
        let base = CheckReport::new(
            "frt-confluence",
            &[
                ("n", n.to_string()),
                ("words", count.to_string()),
                ("max-len", max_len.to_string()),
                ("max-exp", max_exp.to_string()),
                ("seed", seed.to_string()),
            ],
        );
        out.push(guarded(base, |base| {
            let alg = Algebra::new(n);
            let probes = pbw_words(n, max_exp);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
            let mut oracle = PairingOracle::new();
            for _ in 0..count {
                let word = random_word(&mut rng, n, max_len);
                let direct = alg.normal_form(&word)?;
                let mut pick = |k: usize| rng.gen_range(0..k);
                let other = alg.normal_form_by_choice(&word, &mut pick)?;
                if direct != other {
                    return Ok(base.verdict(false, format!("word {word:?}: {direct} vs {other} under another rewriting order")));
                }
                for probe in &probes {
                    if oracle.evaluate_word(&word, probe) != oracle.evaluate(&direct, probe) {
                        return Ok(base.verdict(false, format!("word {word:?} disagrees with the pairing on {probe:?}")));
                    }
                }
            }
            Ok(base.verdict(true, format!("{count} words confluent and matching the pairing on {} U_t monomials", probes.len())))
        }));
    }
    Ok(out)
}

fn qdet(args: &Args) -> Outcome<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2])? {
        let base = CheckReport::new("qdet", &[("n", n.to_string())]);
        out.push(guarded(base, |base| {
            let raw = Algebra::matrix(n);
            let d = raw.qdet();
            for i in 1..=n + 1 {
                for j in 1..=n + 1 {
                    let g = raw.gen(i, j)?;
                    if raw.mul(&d, &g) != raw.mul(&g, &d) {
                        return Ok(base.verdict(false, format!("D does not commute with u{i}{j}")));
                    }
                }
            }
            let reduced = Algebra::new(n).qdet();
            Ok(base.verdict(reduced == FnAlgElem::one(), format!("{d} = {reduced}")))
        }));
    }
    Ok(out)
}

fn star(args: &Args) -> Outcome<Vec<CheckReport>> {
    let q = args.rat("q")?.unwrap_or_else(|| qcrystal::ratfield::rat(1, 2));
    let cutoffs = args.cutoffs("", Cutoffs::default())?;
    let seed = args.seed()?;
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2])? {
        let layout = args.layout(n, cutoffs)?;
        let base = CheckReport::new(
            "star",
            &[
                ("n", n.to_string()),
                ("q", rat_to_string(&q)),
                ("cutoff", cutoffs.cutoff.to_string()),
                ("window", cutoffs.window.to_string()),
            ],
        );
        out.push(guarded(base, |base| {
            let alg = Algebra::new(n);
            for r in 1..=n + 1 {
                for s in 1..=n + 1 {
                    let g = alg.gen(r, s)?;
                    let expect = alg.cofactor(r, s)?.scale(&minus_t_pow(s as i64 - r as i64));
                    let image = alg.star(&g);
                    if image != expect {
                        return Ok(base.verdict(false, format!("star(u{r}{s}) = {image}, cofactor formula gives {expect}")));
                    }
                    if alg.star(&image) != g {
                        return Ok(base.verdict(false, format!("star is not involutive on u{r}{s}")));
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
            for _ in 0..10 {
                let x = alg.normal_form(&random_word(&mut rng, n, 3))?;
                let y = alg.normal_form(&random_word(&mut rng, n, 3))?;
                if alg.star(&alg.star(&x)) != x || alg.star(&alg.mul(&x, &y)) != alg.mul(&alg.star(&y), &alg.star(&x)) {
                    return Ok(base.verdict(false, format!("star fails on the product of {x} and {y}")));
                }
            }
            let dev = star_compatibility(&layout, rat_to_f64(&q))?;
            let ok = dev.max_error <= FLOAT_TOLERANCE;
            Ok(base
                .verdict(ok, format!("involutive; operator adjoint agrees on {} interior columns", dev.columns))
                .with_error(dev.max_error))
        }));
    }
    Ok(out)
}

/// The modules with one-dimensional weight spaces used by the lattice checks.
fn lattice_modules(args: &Args) -> Outcome<Vec<(usize, Weight)>> {
    let all = [(1, w(&[1])), (2, w(&[1, 0])), (3, w(&[1, 0, 0])), (2, w(&[0, 1])), (1, w(&[2]))];
    let ranks = args.ranks(&[1, 2, 3])?;
    let mut out = Vec::new();
    for n in ranks {
        let of_rank: Vec<Weight> = all.iter().filter(|(m, _)| *m == n).map(|(_, l)| l.clone()).collect();
        out.extend(args.weights(n, &of_rank)?.into_iter().map(|l| (n, l)));
    }
    Ok(out)
}

fn module(n: usize, lambda: &Weight) -> qcrystal::Result<Rep> {
    if n == 1 {
        return Ok(sl2_irrep(lambda.at(1) as usize));
    }
    if *lambda == Weight::fundamental(n, 1) {
        return Ok(fundamental_rep(n));
    }
    let degree = qcrystal::fnalg::tensor_degree(lambda);
    Ok(highest_weight_submodule(&tensor_power(n, degree), lambda)?.rep)
}

fn lambda_params(n: usize, lambda: &Weight) -> [(&'static str, String); 2] {
    [("n", n.to_string()), ("omega", lambda.to_string())]
}

fn dual_lattice(args: &Args) -> Outcome<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (n, lambda) in lattice_modules(args)? {
        let base = CheckReport::new("dual-lattice", &lambda_params(n, &lambda));
        out.push(guarded(base, |base| {
            let rep = module(n, &lambda)?;
            let dual = dual_rep(&rep, &polarization(&rep, 0)?)?;
            let r = dual_lattice_basis(&rep, &dual)?;
            let witness = format!(
                "norms 1 mod t: {}; spans lattice: {}; weight refinement: {}; strictly outside the raw duals: {}",
                r.norms_one_mod_t(),
                r.spans_lattice,
                r.weight_refinement_ok,
                r.strictness_witness.map_or("none".into(), |k| format!("w_{k}")),
            );
            Ok(base.verdict(r.passed(), witness))
        }));
    }
    Ok(out)
}

fn double_dual(args: &Args) -> Outcome<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (n, lambda) in lattice_modules(args)? {
        let base = CheckReport::new("double-dual", &lambda_params(n, &lambda));
        out.push(guarded(base, |base| {
            let rep = module(n, &lambda)?;
            let dual = dual_rep(&rep, &polarization(&rep, 0)?)?;
            Ok(match double_dual_defect(&rep, &dual) {
                None => base.verdict(true, format!("{} basis vectors, c_Lambda = {}", rep.dim(), dual.c_lambda)),
                Some(a) => base.verdict(false, format!("basis vector {} ({})", a + 1, rep.labels[a])),
            })
        }));
    }
    Ok(out)
}

fn orthogonal_split(args: &Args) -> Outcome<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2])? {
        let summands = if n == 1 { vec![w(&[0]), w(&[2])] } else { vec![w(&[0, 1]), w(&[2, 0])] };
        for hw in args.weights(n, &summands)? {
            let base = CheckReport::new("orthogonal-split", &[("n", n.to_string()), ("w", hw.to_string())]);
            out.push(guarded(base, |base| {
                let vv = tensor_power(n, 2);
                let form = identity_form(vv.dim());
                let ops = kashiwara_ops(&vv);
                let low = if n == 1 { w(&[0]) } else { w(&[0, 1]) };
                let sing = singular_vectors(&vv, &low);
                let lattice = crystal_lattice(&vv, &ops, &[vv.basis_vector(0), sing[0].clone()])?;
                let sub = highest_weight_submodule(&vv, &hw)?;
                let s = orthogonal_decompose(&vv, &form, &sub.embedding, &lattice)?;
                let witness = format!(
                    "dim W = {}, dim W^perp = {}, restricted determinants {} and {}, projections in lattice: {}, recombines: {}",
                    s.w.len(),
                    s.w_perp.len(),
                    s.restricted_det_w,
                    s.restricted_det_perp,
                    s.projections_in_lattice,
                    s.recombines
                );
                Ok(base.verdict(s.passed(), witness))
            }));
        }
    }
    Ok(out)
}

fn parse_order(args: &Args) -> Outcome<FactorOrder> {
    match args.0.get("order").map(String::as_str) {
        None | Some("plus-minus") => Ok(FactorOrder::PlusMinus),
        Some("minus-plus") => Ok(FactorOrder::MinusPlus),
        Some("either") => Ok(FactorOrder::Either),
        Some(_) => Err(args.invalid("order", "expected plus-minus, minus-plus or either")),
    }
}

fn triangular(args: &Args) -> Outcome<Vec<CheckReport>> {
    let order = parse_order(args)?;
    let max_degree = args.usize_or("max-degree", 4)?;
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2])? {
        let targets = if n == 1 { vec![w(&[1]), w(&[2])] } else { vec![w(&[1, 0]), w(&[0, 1])] };
        for omega in args.weights(n, &targets)? {
            let base = CheckReport::new(
                "triangular",
                &[("n", n.to_string()), ("omega", omega.to_string()), ("order", order.to_string())],
            );
            out.push(guarded(base, |base| {
                let alg = Algebra::new(n);
                let r = Realization::new(n, &omega)?;
                let mut certificates = Vec::new();
                let mut failures = Vec::new();
                for i in 1..=r.dim() {
                    for j in 1..=r.dim() {
                        match triangular_search(&alg, &r, i, j, max_degree, order) {
                            Ok(c) if c.all_in_a0() => certificates.push(format!(
                                "C{i}{j}: {} Lambda={} Gamma={} terms={}",
                                c.order,
                                c.lambda,
                                c.gamma,
                                c.table.len()
                            )),
                            Ok(c) => failures.push(format!("C{i}{j}: coefficient of valuation {:?}", c.min_valuation)),
                            Err(e) => failures.push(format!("C{i}{j}: {e}")),
                        }
                    }
                }
                Ok(if failures.is_empty() {
                    base.verdict(true, format!("{} certificates; {}", certificates.len(), certificates.join("; ")))
                } else {
                    base.verdict(false, format!("{} of {} entries fail; {}", failures.len(), r.dim() * r.dim(), failures.join("; ")))
                })
            }));
        }
    }
    Ok(out)
}

fn rstar(args: &Args) -> Outcome<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2])? {
        let modules = if n == 1 { vec![w(&[1]), w(&[2])] } else { vec![w(&[1, 0]), w(&[0, 1])] };
        for lambda in args.weights(n, &modules)? {
            let base = CheckReport::new("rstar", &lambda_params(n, &lambda));
            out.push(guarded(base, |base| {
                let alg = Algebra::new(n);
                let r = Realization::new(n, &lambda)?;
                let rep = rstar_scaling_check(&alg, &r)?;
                Ok(match rep.first_failure() {
                    None => base.verdict(
                        true,
                        format!("{} entries scale by units of 1 + tA0, c_Lambda = {}; R+ and R- spans exchanged over A0", rep.entries.len(), rep.c_lambda),
                    ),
                    Some(f) => base.verdict(false, f),
                })
            }));
            if n == 2 {
                let base = CheckReport::new("rstar-corollary", &lambda_params(n, &lambda));
                out.push(guarded(base, |base| {
                    let alg = Algebra::new(n);
                    let r = Realization::new(n, &lambda)?;
                    let rep = corollary_check(&alg, &r, 4, FactorOrder::Either)?;
                    Ok(match rep.entries.iter().find(|e| !e.2) {
                        None => base.verdict(true, format!("{} entries generated over A0 by first-column coefficients and their stars", rep.entries.len())),
                        Some((i, j, _, d)) => base.verdict(false, format!("C{i}{j}: {d}")),
                    })
                }));
            }
        }
    }
    Ok(out)
}

fn scaled_generation(args: &Args) -> Outcome<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in args.ranks(&[2])? {
        let base = CheckReport::new("scaled-generation", &[("n", n.to_string())]);
        out.push(guarded(base, |base| {
            let alg = Algebra::new(n);
            let mut terms = 0;
            let mut min_exponent = i64::MAX;
            for r in 1..=n + 1 {
                for s in 1..=n + 1 {
                    let c = match star_scaled_certificate(&alg, r, s) {
                        Ok(c) => c,
                        Err(e) => return Ok(base.verdict(false, format!("star(u{r}{s}): {e}"))),
                    };
                    if !c.passed() {
                        return Ok(base.verdict(false, format!("star(u{r}{s}) has a coefficient outside A0")));
                    }
                    terms += c.terms.len();
                    for t in &c.terms {
                        match t.audited_exponent {
                            Some(e) => min_exponent = min_exponent.min(e),
                            None => return Ok(base.verdict(false, format!("star(u{r}{s}) term {:?} has no audited exponent", t.gens))),
                        }
                    }
                }
            }
            Ok(base.verdict(
                min_exponent >= 0,
                format!("{} stars certified over scaled generators, {terms} terms, smallest audited exponent {min_exponent}", (n + 1) * (n + 1)),
            ))
        }));
    }
    Ok(out)
}

fn commuting(args: &Args) -> Outcome<Vec<CheckReport>> {
    let q = args.rat("q")?.unwrap_or_else(|| qcrystal::ratfield::rat(1, 2));
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2, 3])? {
        let base = CheckReport::new("commuting-square", &[("n", n.to_string()), ("q", rat_to_string(&q))]);
        out.push(guarded(base, |base| {
            let r = commuting_square(n, &q)?;
            Ok(match r.failures.first() {
                None => base.verdict(r.passed(), format!("{} projections commute with specialization", r.checked)),
                Some((block, x, d)) => base.verdict(false, format!("block {block}, {x}: {d}")),
            })
        }));
    }
    Ok(out)
}

fn pipelines(args: &Args) -> Outcome<Vec<CheckReport>> {
    let qs = args.rats_or("q", &[(1, 2), (1, 10)])?;
    let cutoffs = args.cutoffs("", Cutoffs::default())?;
    let exact_cutoffs = args.cutoffs("exact-", Cutoffs { cutoff: 8, window: 4 })?;
    let modes: Vec<String> = args.0.get("modes").map_or("float,exact", String::as_str).split(',').map(|s| s.trim().to_string()).collect();
    if let Some(bad) = modes.iter().find(|m| *m != "float" && *m != "exact") {
        return Err(SuiteError::InvalidParam { key: "modes".into(), value: bad.clone(), reason: "expected float and/or exact".into() });
    }
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2])? {
        for q in &qs {
            for mode in &modes {
                let exact = mode == "exact";
                let c = if exact { exact_cutoffs } else { cutoffs };
                let layout = args.layout(n, c)?;
                let base = CheckReport::new(
                    "pipelines",
                    &[
                        ("n", n.to_string()),
                        ("q", rat_to_string(q)),
                        ("mode", mode.clone()),
                        ("cutoff", c.cutoff.to_string()),
                        ("window", c.window.to_string()),
                    ],
                );
                out.push(guarded(base, |base| {
                    let rows = fixed_q_comparison(&layout, q, exact)?;
                    let max = rows.iter().map(|r| r.float_error).fold(0.0, f64::max);
                    let report = if exact {
                        let bad: Vec<String> = rows.iter().filter(|r| r.exact_equal != Some(true)).map(|r| format!("u{}{}", r.i, r.j)).collect();
                        if bad.is_empty() {
                            base.verdict(true, format!("{} generators equal exactly", rows.len()))
                        } else {
                            base.verdict(false, format!("differ exactly on {}", bad.join(", ")))
                        }
                    } else {
                        let worst = rows.iter().max_by(|a, b| a.float_error.total_cmp(&b.float_error)).expect("generators");
                        let detail = if max == 0.0 {
                            format!("{} generators, identical in double precision", rows.len())
                        } else {
                            format!("{} generators, largest deviation on u{}{}", rows.len(), worst.i, worst.j)
                        };
                        base.verdict(max <= FLOAT_TOLERANCE, detail)
                    };
                    Ok(report.with_error(max))
                }));
            }
        }
    }
    Ok(out)
}

fn crystal_limit(args: &Args) -> Outcome<Vec<CheckReport>> {
    let cutoffs = args.cutoffs("", Cutoffs::default())?;
    match args.0.get("mode").map(String::as_str) {
        None | Some("leading") => {}
        Some(_) => return Err(args.invalid("mode", "only leading order is supported for limits")),
    }
    let scaled = match args.flag("scaled")? {
        Some(s) => vec![s],
        None => vec![false, true],
    };
    let numeric = args.flag("numeric")?.unwrap_or(true);
    let mut out = Vec::new();
    for n in args.ranks(&[1, 2])? {
        let layout = args.layout(n, cutoffs)?;
        for &s in &scaled {
            let base = CheckReport::new(
                "crystal-limit",
                &[
                    ("n", n.to_string()),
                    ("scaled", s.to_string()),
                    ("cutoff", cutoffs.cutoff.to_string()),
                    ("window", cutoffs.window.to_string()),
                ],
            );
            out.push(guarded(base, |base| {
                let rows = crystal_limit_comparison(&layout, s, numeric.then_some(&DEFAULT_QS[..]))?;
                let name = |r: &qcrystal::soibelman::LimitRow| format!("{}{}{}", if s { "g" } else { "u" }, r.i, r.j);
                let compared = rows.iter().filter(|r| r.equal == Some(true)).count();
                let failures: Vec<String> = rows
                    .iter()
                    .filter(|r| r.equal != Some(true))
                    .map(|r| format!("{} ({})", name(r), r.mismatch.clone().unwrap_or_default()))
                    .collect();
                let max = rows.iter().filter_map(|r| r.numeric_error).fold(0.0, f64::max);
                let fallbacks: usize = rows.iter().map(|r| r.fallbacks).sum();
                let zero: Vec<String> = rows.iter().filter(|r| !r.nonzero).map(name).collect();
                let mut witness = format!("{compared} of {} limits equal exactly, {fallbacks} numeric fallbacks", rows.len());
                if !zero.is_empty() {
                    witness += &format!("; vanishing limits: {}", zero.join(", "));
                }
                if numeric {
                    witness += &format!("; numeric extrapolation from q = {DEFAULT_QS:?}");
                }
                let too_far = numeric && max > LIMIT_TOLERANCE;
                let report = if !failures.is_empty() {
                    base.verdict(false, failures.join("; "))
                } else {
                    base.verdict(!too_far, witness)
                };
                Ok(if numeric { report.with_error(max) } else { report })
            }));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EntryMode {
    Exact,
    Float,
    Leading,
}

/// Options of the single-generator comparison.
#[derive(Clone, Debug)]
pub struct EntryOptions {
    pub n: usize,
    pub q: Rat,
    pub cutoffs: Cutoffs,
    pub entry: (usize, usize),
    pub mode: EntryMode,
    pub scaled: bool,
    pub word: Option<String>,
}

/// Compares the per-leg and the global pipeline on one generator.
pub fn soibelman_entry(opts: &EntryOptions) -> Outcome<CheckReport> {
    let mut params = Params::new();
    params.insert("n".into(), opts.n.to_string());
    if let Some(word) = &opts.word {
        params.insert("word".into(), word.clone());
    }
    let args = Args(&params);
    let layout = args.layout(opts.n, opts.cutoffs)?;
    let (i, j) = opts.entry;
    if !(1..=opts.n + 1).contains(&i) || !(1..=opts.n + 1).contains(&j) {
        return Err(SuiteError::InvalidParam { key: "entry".into(), value: format!("{i},{j}"), reason: "index out of range".into() });
    }
    let mode = match opts.mode {
        EntryMode::Exact => "exact",
        EntryMode::Float => "float",
        EntryMode::Leading => "leading",
    };
    let mut shown = vec![
        ("n", opts.n.to_string()),
        ("entry", format!("{i},{j}")),
        ("mode", mode.to_string()),
        ("scaled", opts.scaled.to_string()),
        ("cutoff", opts.cutoffs.cutoff.to_string()),
        ("window", opts.cutoffs.window.to_string()),
        ("word", layout.word.letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")),
    ];
    if opts.mode != EntryMode::Leading {
        shown.push(("q", rat_to_string(&opts.q)));
    }
    let base = CheckReport::new("soibelman", &shown);
    Ok(guarded(base, |base| {
        let alg = Algebra::new(opts.n);
        let x = generator(&alg, i, j, opts.scaled)?;
        let dim = layout.dimension();
        Ok(match opts.mode {
            EntryMode::Float => {
                let field = FloatAt(rat_to_f64(&opts.q));
                let a = my_q(&field, &layout, &x)?;
                let b = psi_q(&field, &layout, &x)?;
                let d = compare_on_interior(&a, &b, 1)?;
                base.verdict(
                    d.max_error <= FLOAT_TOLERANCE,
                    format!("dimension {dim}, {} and {} tensor terms, {} interior columns", a.terms.len(), b.terms.len(), d.columns),
                )
                .with_error(d.max_error)
            }
            EntryMode::Exact => {
                let field = ExactAt(opts.q.clone());
                let a = my_q(&field, &layout, &x)?;
                let b = psi_q(&field, &layout, &x)?;
                let d = compare_on_interior(&a, &b, 1)?;
                let detail = d.first_mismatch.clone().unwrap_or_else(|| format!("{} interior columns equal exactly", d.columns));
                base.verdict(d.exact(), format!("dimension {dim}; {detail}"))
            }
            EntryMode::Leading => {
                let gp = pi0_gp(&layout, &x)?;
                let my = pi0_my(&layout, &x)?;
                let d = compare_limits(&my, &gp, 1)?;
                let detail = d.first_mismatch.clone().unwrap_or_else(|| {
                    format!("{} interior columns equal exactly, {} numeric fallbacks", d.columns, my.fallback_count() + gp.fallback_count())
                });
                base.verdict(d.exact(), format!("dimension {dim}; {detail}"))
            }
        })
    }))
}
