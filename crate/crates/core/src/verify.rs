//! Verification suites: each check compares two exact computations of the same
//! object and records a witness on mismatch.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geom::{realize_bracket, realized_family, vf_bracket, SymbolField, Weights};
use crate::ospalg::{build_forms, check_osp, dual_basis, killing, super_commutator, unit_vector, GradedElement};
use crate::quantizer::{
    check_equivariance, fit_degree2_coefficients, generator_fields, is_resonant, printed_coefficients, quantize,
    quantize_d0_deg1, quantize_d0_deg2, quantize_deg1_explicit, symbol_basis, verify_min_poly, QuantizeOptions,
};
use crate::rational::{fmt_rational, rat, sign, Rational};
use crate::structops::{gamma_closed, gamma_def, op_n, op_r, op_t, op_t_explicit, CasimirData, CasimirMode};
use crate::superalg::{monomials_up_to, Monomial, SpaceSignature, SuperPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    pub check_name: String,
    pub anchor: String,
    pub status: Status,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckRecord {
    fn new(name: &str, anchor: &str, cases: usize, witness: Option<Value>) -> Self {
        Self {
            check_name: name.to_string(),
            anchor: anchor.to_string(),
            status: if witness.is_none() { Status::Pass } else { Status::Fail },
            cases,
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub sig: SpaceSignature,
    pub weights: Weights,
    pub max_degree: usize,
    pub max_poly_degree: usize,
    pub seed: u64,
    /// Upper bound on symbols per degree; larger bases are subsampled with `seed`.
    pub sample: Option<usize>,
}

impl VerifyConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "signature": [self.sig.p, self.sig.q, self.sig.r],
            "lambda": fmt_rational(&self.weights.lambda),
            "delta": fmt_rational(&self.weights.delta),
            "maxDegree": self.max_degree,
            "maxPolyDegree": self.max_poly_degree,
            "seed": self.seed,
            "sample": self.sample,
        })
    }
}

/// Basis symbols of degree `k`, subsampled deterministically when `limit` is set.
pub fn sample_symbols(
    sig: SpaceSignature,
    weights: &Weights,
    k: usize,
    poly_degree: usize,
    seed: u64,
    limit: Option<usize>,
) -> Vec<SymbolField> {
    let all = symbol_basis(sig, weights, k, poly_degree);
    match limit {
        Some(n) if n < all.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9));
            all.choose_multiple(&mut rng, n).cloned().collect()
        }
        _ => all,
    }
}

/// A random polynomial with small integer coefficients.
pub fn random_polynomial(sig: SpaceSignature, max_degree: usize, terms: usize, rng: &mut impl Rng) -> SuperPolynomial {
    let monos = monomials_up_to(&sig, max_degree);
    let mut f = SuperPolynomial::zero(sig);
    for _ in 0..terms {
        let m = monos[rng.gen_range(0..monos.len())].clone();
        f.add_term(m, Rational::from_integer(rng.gen_range(-3i64..=3).into()));
    }
    f
}

fn sym_witness(s: &SymbolField, lhs: &SymbolField, rhs: &SymbolField) -> Value {
    json!({"symbol": s.to_text(), "lhs": lhs.to_text(), "rhs": rhs.to_text()})
}

/// Supercommutativity, associativity, Leibniz rule and `∂_θ ∘ ∂_θ = 0` on random inputs.
pub fn check_superalgebra(sig: SpaceSignature, seed: u64, samples: usize) -> Result<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = sig.dim();
    let mut witness = None;
    for _ in 0..samples {
        let [a, b, c] = [0, 1, 2].map(|_| random_polynomial(sig, 2, 4, &mut rng));
        let (a0, a1) = a.split_parity();
        let (b0, b1) = b.split_parity();
        let ab = a.try_mul(&b)?;
        // a b = b0 a + b1 a0 - b1 a1
        let swapped = &(&b0.try_mul(&a)? + &b1.try_mul(&a0)?) - &b1.try_mul(&a1)?;
        if ab != swapped {
            witness = Some(json!({"law": "supercommutativity", "a": a.to_canonical_string(), "b": b.to_canonical_string()}));
            break;
        }
        if ab.try_mul(&c)? != a.try_mul(&b.try_mul(&c)?)? {
            witness = Some(json!({"law": "associativity", "a": a.to_canonical_string(), "b": b.to_canonical_string(), "c": c.to_canonical_string()}));
            break;
        }
        for i in 0..n {
            let odd = sig.is_odd(i);
            // ∂(ab) = ∂a b + (-1)^{ĩã} a ∂b
            let lhs = ab.partial(i)?;
            let mut rhs = a.partial(i)?.try_mul(&b)?;
            rhs += &a0.try_mul(&b.partial(i)?)?;
            rhs += &a1.try_mul(&b.partial(i)?)?.scale(&sign(odd));
            if lhs != rhs {
                witness = Some(json!({"law": "leibniz", "variable": i, "a": a.to_canonical_string(), "b": b.to_canonical_string()}));
                break;
            }
            if odd && !a.partial(i)?.partial(i)?.is_zero() {
                witness = Some(json!({"law": "odd derivative squares to zero", "variable": i, "a": a.to_canonical_string()}));
                break;
            }
        }
        if witness.is_some() {
            break;
        }
    }
    Ok(CheckRecord::new("superalgebra laws", "supercommutative ring, left derivatives", samples, witness))
}

/// Closure under the super bracket, super Jacobi, and Killing duality of the dual basis.
pub fn check_osp_structure(sig: SpaceSignature) -> Result<Vec<CheckRecord>> {
    let (g, _) = build_forms(sig);
    let basis = dual_basis(sig);
    let gens: Vec<_> = basis.iter().map(|p| p.basis.clone()).collect();
    let mut closure = None;
    let mut closure_cases = 0;
    let brackets: Vec<Vec<_>> = crate::par::map(&gens, |a| {
        gens.iter().map(|b| super_commutator(a, b)).collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<_>>()?;
    'outer: for (ia, row) in brackets.iter().enumerate() {
        for (ib, ab) in row.iter().enumerate() {
            closure_cases += 1;
            if !check_osp(ab, &g) {
                closure = Some(json!({"a": gens[ia].to_triples(), "b": gens[ib].to_triples()}));
                break 'outer;
            }
        }
    }
    let n = gens.len();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .collect();
    let jac = crate::par::map(&triples, |&(a, b, c)| -> Result<Option<Value>> {
        let pa = gens[a].parity().expect("generator parity");
        let pb = gens[b].parity().expect("generator parity");
        let lhs = super_commutator(&gens[a], &brackets[b][c])?;
        let r1 = super_commutator(&brackets[a][b], &gens[c])?;
        let r2 = super_commutator(&gens[b], &brackets[a][c])?;
        let rhs = r1.add(&r2.scale(&sign(pa.is_odd() && pb.is_odd())));
        Ok((lhs != rhs).then(|| json!({"a": a, "b": b, "c": c})))
    });
    let mut jacobi = None;
    for r in jac {
        if let Some(w) = r? {
            jacobi = Some(w);
            break;
        }
    }
    let mut dual = None;
    'd: for (a, x) in basis.iter().enumerate() {
        for (b, y) in basis.iter().enumerate() {
            let expect = if a == b { Rational::one() } else { Rational::zero() };
            let got = killing(&x.basis, &y.dual);
            if got != expect {
                dual = Some(json!({"basis": format!("{:?}", x.index), "dual": format!("{:?}", y.index), "pairing": fmt_rational(&got)}));
                break 'd;
            }
        }
    }
    Ok(vec![
        CheckRecord::new("osp closure", "[A,B] preserves the form", closure_cases, closure),
        CheckRecord::new("super Jacobi", "[A,[B,C]] = [[A,B],C] + (-1)^{AB}[B,[A,C]]", triples.len(), jacobi),
        CheckRecord::new("Killing dual basis", "K(u_i, u_j*) = delta_ij", basis.len() * basis.len(), dual),
    ])
}

/// `[X^h, X^{h'}] = X^{[h,h']}` over all pairs of generators.
pub fn check_homomorphism(sig: SpaceSignature) -> Result<CheckRecord> {
    let fam = realized_family(sig)?;
    let pairs: Vec<(usize, usize)> = (0..fam.len()).flat_map(|a| (0..fam.len()).map(move |b| (a, b))).collect();
    let res = crate::par::map(&pairs, |&(a, b)| -> Result<Option<Value>> {
        let (na, ha, xa) = &fam[a];
        let (nb, hb, xb) = &fam[b];
        let lhs = vf_bracket(xa, xb);
        let rhs = realize_bracket(sig, ha, hb)?;
        Ok((lhs != rhs).then(|| json!({"h": na, "h'": nb, "lhs": lhs.to_string(), "rhs": rhs.to_string()})))
    });
    let mut witness = None;
    for r in res {
        if let Some(w) = r? {
            witness = Some(w);
            break;
        }
    }
    Ok(CheckRecord::new("realization homomorphism", "[X^h, X^h'] = X^[h,h']", pairs.len(), witness))
}

fn first_failure(results: Vec<Result<Option<Value>>>) -> Result<Option<Value>> {
    for r in results {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// `γ(h) = -(λd+k-1) i(h) + ½ h^♯ ∨ T` for every `g_1` basis covector.
pub fn check_gamma(cfg: &VerifyConfig) -> Result<CheckRecord> {
    let n = cfg.sig.dim();
    let mut cells = Vec::new();
    for k in 0..=cfg.max_degree {
        for s in sample_symbols(cfg.sig, &cfg.weights, k, cfg.max_poly_degree, cfg.seed, cfg.sample) {
            for i in 0..n {
                cells.push((s.clone(), i));
            }
        }
    }
    let res = crate::par::map(&cells, |(s, i)| -> Result<Option<Value>> {
        let h = unit_vector(n, *i);
        let lhs = gamma_def(&GradedElement::Plus(h.clone()), s)?;
        let rhs = gamma_closed(&h, s)?;
        Ok((lhs != rhs).then(|| {
            let mut w = sym_witness(s, &lhs, &rhs);
            w["covector"] = json!(i);
            w
        }))
    });
    Ok(CheckRecord::new(
        "gamma closed form",
        "gamma(h) = -(lambda d + k - 1) i(h) + 1/2 h# v T",
        cells.len(),
        first_failure(res)?,
    ))
}

/// The Casimir modes agree, and `𝒞 = C + N`.
pub fn check_casimir(cfg: &VerifyConfig, data: &CasimirData) -> Result<Vec<CheckRecord>> {
    let mut symbols = Vec::new();
    for k in 0..=cfg.max_degree {
        symbols.extend(sample_symbols(cfg.sig, &cfg.weights, k, cfg.max_poly_degree, cfg.seed, cfg.sample));
    }
    let modes = crate::par::map(&symbols, |s| -> Option<Value> {
        let base = data.casimir_c(s, CasimirMode::DualBasis);
        CasimirMode::ALL.iter().skip(1).find_map(|&m| {
            let other = data.casimir_c(s, m);
            (other != base).then(|| {
                let mut w = sym_witness(s, &base, &other);
                w["mode"] = json!(m.to_string());
                w
            })
        })
    });
    let curly = crate::par::map(&symbols, |s| -> Option<Value> {
        let lhs = data.casimir_curly(s);
        let rhs = data.casimir_c(s, CasimirMode::ClosedForm).add(&op_n(s));
        (lhs != rhs).then(|| sym_witness(s, &lhs, &rhs))
    });
    Ok(vec![
        CheckRecord::new(
            "Casimir modes agree",
            "dual basis = full sum = decomposed = scalar + R o T",
            symbols.len(),
            modes.into_iter().flatten().next(),
        ),
        CheckRecord::new("operator Casimir", "curly C = C + N", symbols.len(), curly.into_iter().flatten().next()),
    ])
}

fn pow_apply(f: impl Fn(&SymbolField) -> SymbolField, times: usize, s: &SymbolField) -> SymbolField {
    (0..times).fold(s.clone(), |acc, _| f(&acc))
}

/// Both trace implementations, `R^{s+1} T^{s+1} = ∏(RT - b_{k,i})` and
/// `[R^s, T] = -b_{k,s} R^{s-1}` on `S^{k-2s}`.
pub fn check_rt_identities(cfg: &VerifyConfig, max_k: usize, max_s: usize) -> Result<Vec<CheckRecord>> {
    let sig = cfg.sig;
    let mut trace = None;
    let mut product = None;
    let mut commutator = None;
    let (mut n_trace, mut n_prod, mut n_comm) = (0, 0, 0);
    let b = |k: usize, s: usize| crate::quantizer::b_ks(&sig, k, s);
    for k in 0..=max_k {
        for s in sample_symbols(sig, &cfg.weights, k, cfg.max_poly_degree.min(1), cfg.seed, cfg.sample) {
            n_trace += 1;
            if trace.is_none() {
                let (l, r) = (op_t(&s), op_t_explicit(&s));
                if l != r {
                    trace = Some(sym_witness(&s, &l, &r));
                }
            }
            for ss in 0..=(k / 2).min(max_s) {
                n_prod += 1;
                let lhs = pow_apply(op_r, ss + 1, &pow_apply(op_t, ss + 1, &s));
                let mut rhs = s.clone();
                for i in 0..=ss {
                    rhs = op_r(&op_t(&rhs)).sub(&rhs.scale(&b(k, i)));
                }
                if product.is_none() && lhs != rhs {
                    let mut w = sym_witness(&s, &lhs, &rhs);
                    w["s"] = json!(ss);
                    product = Some(w);
                }
            }
        }
        // [R^s, T] on S^{k-2s}
        for ss in 1..=(k / 2).min(max_s) {
            for s in sample_symbols(sig, &cfg.weights, k - 2 * ss, cfg.max_poly_degree.min(1), cfg.seed, cfg.sample) {
                n_comm += 1;
                let lhs = pow_apply(op_r, ss, &op_t(&s)).sub(&op_t(&pow_apply(op_r, ss, &s)));
                let lhs = lhs.scale(&-Rational::one());
                let rhs = pow_apply(op_r, ss - 1, &s).scale(&b(k, ss));
                // T R^s - R^s T = b R^{s-1}  ⇔  [R^s, T] = -b R^{s-1}
                if commutator.is_none() && lhs != rhs {
                    let mut w = sym_witness(&s, &lhs, &rhs);
                    w["k"] = json!(k);
                    w["s"] = json!(ss);
                    commutator = Some(w);
                }
            }
        }
    }
    Ok(vec![
        CheckRecord::new("trace implementations agree", "T = sum i(e_j flat) i(eps^j)", n_trace, trace),
        CheckRecord::new("R^(s+1) T^(s+1) product", "R^(s+1) T^(s+1) = prod (R T - b_ki)", n_prod, product),
        CheckRecord::new("[R^s, T] commutator", "[R^s, T] = -b_ks R^(s-1)", n_comm, commutator),
    ])
}

/// The minimal polynomial against the matrix of `C` (dual-basis mode) on constant symbols.
pub fn check_min_poly(cfg: &VerifyConfig, data: &CasimirData, max_k: usize) -> Result<CheckRecord> {
    let mut witness = None;
    for k in 0..=max_k {
        let (mp, check) = verify_min_poly(k, &cfg.weights, data, CasimirMode::DualBasis)?;
        if !(check.annihilates && check.minimal) {
            witness = Some(json!({"k": k, "minPoly": mp.to_string(), "annihilates": check.annihilates, "minimal": check.minimal}));
            break;
        }
    }
    Ok(CheckRecord::new("minimal polynomial", "prod_s (x - alpha_ks)", max_k + 1, witness))
}

fn equivariance_record(
    name: &str,
    anchor: &str,
    fails: Vec<crate::quantizer::EquivarianceFailure>,
    cases: usize,
) -> CheckRecord {
    let witness = fails.first().map(|f| {
        json!({
            "generator": f.generator,
            "symbol": f.symbol.to_text(),
            "lhs": f.lhs.to_string(),
            "rhs": f.rhs.to_string(),
        })
    });
    CheckRecord::new(name, anchor, cases, witness)
}

/// Equivariance of the quantization, or the expected refusal at resonant `δ`.
pub fn check_quantization(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let sig = cfg.sig;
    let fam = generator_fields(sig)?;
    let max_k = cfg.max_degree.min(QuantizeOptions::default().degree_cap);
    let mut out = Vec::new();
    if sig.superdim() == 0 {
        for t in [Rational::zero(), rat(1, 2), Rational::one(), rat(-3, 1)] {
            let map = quantize_d0_deg1(&t, &sig)?;
            let syms = sample_symbols(sig, &cfg.weights, 1, cfg.max_poly_degree, cfg.seed, cfg.sample);
            let fails = check_equivariance(&fam, &syms, |s| Ok(map.quantize(s)))?;
            out.push(equivariance_record(
                &format!("d=0 degree-1 map, t={}", fmt_rational(&t)),
                "Q_Aff o (Id + t div)",
                fails,
                syms.len() * fam.len(),
            ));
        }
        let map = quantize_d0_deg2(&sig)?;
        let syms = sample_symbols(sig, &cfg.weights, 2, cfg.max_poly_degree, cfg.seed, cfg.sample);
        let fails = check_equivariance(&fam, &syms, |s| Ok(map.quantize(s)))?;
        out.push(equivariance_record(
            "d=0 degree-2 map",
            "Q_Aff o (Id + 1/2 div)",
            fails,
            syms.len() * fam.len(),
        ));
        return Ok(out);
    }
    let opts = QuantizeOptions::default();
    for k in 0..=max_k {
        let syms = sample_symbols(sig, &cfg.weights, k, cfg.max_poly_degree, cfg.seed, cfg.sample);
        let check = is_resonant(&cfg.weights.delta, k, &sig);
        if check.resonant {
            let refused = syms.iter().take(1).all(|s| matches!(quantize(s, &opts), Err(Error::Resonant { .. })));
            let witness = (!refused).then(|| json!({"k": k, "expected": "resonance refusal"}));
            out.push(CheckRecord::new(
                &format!("degree {k}: resonant refusal"),
                "no quantization at resonant delta",
                1,
                witness,
            ));
            continue;
        }
        let fails = check_equivariance(&fam, &syms, |s| Ok(quantize(s, &opts)?.operator))?;
        out.push(equivariance_record(
            &format!("degree {k}: quantization equivariance"),
            "L_X(Q(S)) = Q(L_X S)",
            fails,
            syms.len() * fam.len(),
        ));
    }
    if max_k >= 1 && !is_resonant(&cfg.weights.delta, 1, &sig).resonant {
        let map = quantize_deg1_explicit(&cfg.weights, &sig)?;
        let syms = sample_symbols(sig, &cfg.weights, 1, cfg.max_poly_degree, cfg.seed, cfg.sample);
        let witness = first_failure(
            syms.iter()
                .map(|s| {
                    let a = quantize(s, &opts)?.operator;
                    let b = map.quantize(s);
                    Ok((a != b).then(|| json!({"symbol": s.to_text(), "generic": a.to_string(), "explicit": b.to_string()})))
                })
                .collect(),
        )?;
        out.push(CheckRecord::new("degree-1 explicit formula", "Q_Aff o (Id + lambda/(1-delta) div)", syms.len(), witness));
    }
    if max_k >= 2 && !is_resonant(&cfg.weights.delta, 2, &sig).resonant {
        if let Ok(printed) = printed_coefficients(&cfg.weights, &sig) {
            let syms = symbol_basis(sig, &cfg.weights, 2, cfg.max_poly_degree.max(2));
            let (fit, unique) = fit_degree2_coefficients(&syms)?;
            let witness = (!unique || fit != printed).then(|| {
                json!({
                    "unique": unique,
                    "generic": fit.iter().map(fmt_rational).collect::<Vec<_>>(),
                    "printed": printed.iter().map(fmt_rational).collect::<Vec<_>>(),
                })
            });
            out.push(CheckRecord::new("degree-2 coefficients a1..a4", "Id + a1 G0 + a2 div + a3 Delta0 + a4 div^2", 4, witness));
        }
    }
    Ok(out)
}

/// The full suite in order.
pub fn run_verify(cfg: &VerifyConfig) -> Result<Report> {
    cfg.sig.validate()?;
    let start = Instant::now();
    let mut checks = vec![check_superalgebra(cfg.sig, cfg.seed, 32)?];
    checks.extend(check_osp_structure(cfg.sig)?);
    checks.push(check_homomorphism(cfg.sig)?);
    checks.push(check_gamma(cfg)?);
    let data = CasimirData::new(cfg.sig)?;
    checks.extend(check_casimir(cfg, &data)?);
    checks.extend(check_rt_identities(cfg, cfg.max_degree, 2)?);
    checks.push(check_min_poly(cfg, &data, cfg.max_degree)?);
    checks.extend(check_quantization(cfg)?);
    let passed = checks.iter().filter(|c| c.passed()).count();
    Ok(Report {
        config: cfg.to_json(),
        failed: checks.len() - passed,
        passed,
        checks,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Fiber monomials as a JSON-friendly label list.
pub fn labels(sig: &SpaceSignature, ms: &[Monomial]) -> Vec<String> {
    ms.iter().map(|m| crate::geom::fiber_label(sig, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = VerifyConfig {
            sig: SpaceSignature::new(1, 0, 1),
            weights: Weights::new(rat(1, 2), rat(1, 3)),
            max_degree: 2,
            max_poly_degree: 1,
            seed: 7,
            sample: None,
        };
        let r = run_verify(&cfg).unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{c:?}");
        }
        assert!(r.checks.iter().any(|c| c.check_name == "degree-2 coefficients a1..a4"));
    }

    #[test]
    fn resonant_delta_is_an_expected_refusal() {
        let cfg = VerifyConfig {
            sig: SpaceSignature::new(2, 1, 0),
            weights: Weights::new(rat(1, 2), Rational::one()),
            max_degree: 1,
            max_poly_degree: 1,
            seed: 1,
            sample: Some(4),
        };
        let r = check_quantization(&cfg).unwrap();
        assert!(r.iter().all(|c| c.passed()));
        assert!(r.iter().any(|c| c.check_name == "degree 1: resonant refusal"));
    }

    #[test]
    fn d0_branch() {
        let cfg = VerifyConfig {
            sig: SpaceSignature::new(2, 0, 1),
            weights: Weights::new(rat(1, 2), rat(5, 4)),
            max_degree: 2,
            max_poly_degree: 1,
            seed: 3,
            sample: Some(12),
        };
        let r = check_quantization(&cfg).unwrap();
        assert_eq!(r.len(), 5);
        assert!(r.iter().all(|c| c.passed()));
    }

    #[test]
    fn sampling_is_deterministic() {
        let sig = SpaceSignature::new(2, 0, 1);
        let w = Weights::new(rat(1, 2), rat(1, 3));
        let a = sample_symbols(sig, &w, 2, 2, 11, Some(5));
        let b = sample_symbols(sig, &w, 2, 2, 11, Some(5));
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
    }
}
