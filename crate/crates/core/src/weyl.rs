//! Differential operators on `R^{p+q|2r}` in normal form, their composition,
//! the affine symbol map and the Lie derivative on `D_{λ,μ}`.
//!
//! A term `f ∂^α` stores the derivative multi-index `α` as a [`Monomial`]:
//! `∂_x^{α_x} ∂_{θ^{i_1}} ⋯ ∂_{θ^{i_a}}` with `i_1 < ⋯ < i_a`. Applying it to a
//! function runs the factors right to left, so `∂_{θ¹}∂_{θ²}(θ¹θ²) = -1`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geom::{SymbolField, VectorField, Weights};
use crate::rational::{fmt_rational, int, sign, Rational};
use crate::superalg::{Monomial, Parity, SpaceSignature, SuperPolynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    sig: SpaceSignature,
    weights: Weights,
    terms: BTreeMap<Monomial, SuperPolynomial>,
}

impl DiffOperator {
    pub fn zero(sig: SpaceSignature, weights: Weights) -> Self {
        Self {
            sig,
            weights,
            terms: BTreeMap::new(),
        }
    }

    /// The order-zero operator `g ↦ f g`.
    pub fn multiplication(weights: Weights, f: &SuperPolynomial) -> Self {
        let mut d = Self::zero(f.signature(), weights);
        d.add_term(Monomial::one(&f.signature()), f);
        d
    }

    /// `f ∂^α`.
    pub fn from_term(weights: Weights, deriv: Monomial, f: &SuperPolynomial) -> Self {
        let mut d = Self::zero(f.signature(), weights);
        d.add_term(deriv, f);
        d
    }

    pub fn partial(sig: SpaceSignature, weights: Weights, i: usize) -> Self {
        Self::from_term(weights, Monomial::var(&sig, i), &SuperPolynomial::one(sig))
    }

    /// `L^λ_X = Σ X^i ∂_i + λ div X`, acting on `λ`-densities.
    pub fn lie_first_order(x: &VectorField, lambda: &Rational) -> Self {
        let sig = x.signature();
        let w = Weights::new(lambda.clone(), Rational::zero());
        let mut d = Self::zero(sig, w);
        for (i, xi) in x.components().iter().enumerate() {
            d.add_term(Monomial::var(&sig, i), xi);
        }
        d.add_term(Monomial::one(&sig), &x.divergence().scale(lambda));
        d
    }

    pub fn signature(&self) -> SpaceSignature {
        self.sig
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn with_weights(mut self, weights: Weights) -> Self {
        self.weights = weights;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &SuperPolynomial)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, deriv: &Monomial) -> SuperPolynomial {
        self.terms
            .get(deriv)
            .cloned()
            .unwrap_or_else(|| SuperPolynomial::zero(self.sig))
    }

    /// Order, `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, deriv: Monomial, f: &SuperPolynomial) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&deriv) {
            Some(c) => {
                *c += f;
                if c.is_zero() {
                    self.terms.remove(&deriv);
                }
            }
            None => {
                self.terms.insert(deriv, f.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &DiffOperator) {
        for (m, f) in &other.terms {
            self.add_term(m.clone(), f);
        }
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &DiffOperator) -> DiffOperator {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> DiffOperator {
        let mut out = Self::zero(self.sig, self.weights.clone());
        if c.is_zero() {
            return out;
        }
        for (m, f) in &self.terms {
            out.terms.insert(m.clone(), f.scale(c));
        }
        out
    }

    /// `(even part, odd part)`, splitting by coefficient parity plus derivative parity.
    pub fn split_parity(&self) -> (DiffOperator, DiffOperator) {
        let mut even = Self::zero(self.sig, self.weights.clone());
        let mut odd = Self::zero(self.sig, self.weights.clone());
        for (m, f) in &self.terms {
            let (f0, f1) = f.split_parity();
            let (same, other) = if m.is_odd() { (&mut odd, &mut even) } else { (&mut even, &mut odd) };
            same.add_term(m.clone(), &f0);
            other.add_term(m.clone(), &f1);
        }
        (even, odd)
    }

    pub fn homogeneous_parity(&self) -> Result<Parity> {
        let (e, o) = self.split_parity();
        match (e.is_zero(), o.is_zero()) {
            (_, true) => Ok(Parity::Even),
            (true, false) => Ok(Parity::Odd),
            _ => Err(Error::MixedParity("differential operator")),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "signature": self.sig,
            "weights": {
                "lambda": fmt_rational(&self.weights.lambda),
                "mu": fmt_rational(&self.weights.mu()),
            },
            "order": self.order(),
            "terms": crate::geom::terms_to_json(&self.terms, "derivEven", "derivOdd"),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let sig: SpaceSignature = serde_json::from_value(v["signature"].clone())?;
        let lambda = crate::geom::json_rational(&v["weights"]["lambda"])?;
        let mu = crate::geom::json_rational(&v["weights"]["mu"])?;
        let delta = &mu - &lambda;
        let terms = crate::geom::terms_from_json(&sig, &v["terms"], "derivEven", "derivOdd")?;
        let mut d = Self::zero(sig, Weights::new(lambda, delta));
        for (m, f) in terms {
            d.add_term(m, &f);
        }
        Ok(d)
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("({c})")
                } else {
                    format!("({c}) {}", m.fmt_with(&self.sig, "dx", "dth"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `∂^α f`, factors applied right to left.
pub fn apply_derivative(sig: &SpaceSignature, alpha: &Monomial, f: &SuperPolynomial) -> SuperPolynomial {
    let mut g = f.clone();
    for i in alpha.factor_list(sig).into_iter().rev() {
        if g.is_zero() {
            break;
        }
        g = g.d(i);
    }
    g
}

pub fn dop_apply(d: &DiffOperator, f: &SuperPolynomial) -> Result<SuperPolynomial> {
    if d.sig != f.signature() {
        return Err(Error::SignatureMismatch(d.sig.to_string(), f.signature().to_string()));
    }
    let mut out = SuperPolynomial::zero(d.sig);
    for (alpha, c) in &d.terms {
        let g = apply_derivative(&d.sig, alpha, f);
        if !g.is_zero() {
            out += &(c * &g);
        }
    }
    Ok(out)
}

type Ordered = Rc<Vec<(Rational, Monomial, Monomial)>>;

thread_local! {
    static REORDER: RefCell<HashMap<(SpaceSignature, Monomial, Monomial), Ordered>> =
        RefCell::new(HashMap::new());
}

/// `∂^α ∘ y^γ = Σ c y^{γ'} ∂^{α'}`, memoized per thread.
fn reorder(sig: &SpaceSignature, alpha: &Monomial, gamma: &Monomial) -> Ordered {
    let key = (*sig, alpha.clone(), gamma.clone());
    if let Some(v) = REORDER.with(|c| c.borrow().get(&key).cloned()) {
        return v;
    }
    let out = if alpha.is_one() {
        Rc::new(vec![(Rational::one(), gamma.clone(), Monomial::one(sig))])
    } else {
        let list = alpha.factor_list(sig);
        let i = list[0];
        let rest = Monomial::from_factor_list(sig, &list[1..]).expect("canonical list").1;
        let inner = reorder(sig, &rest, gamma);
        let di = Monomial::var(sig, i);
        let odd_i = sig.is_odd(i);
        let mut acc: BTreeMap<(Monomial, Monomial), Rational> = BTreeMap::new();
        let mut push = |c: Rational, g: Monomial, a: Monomial| {
            let e = acc.entry((g, a)).or_insert_with(Rational::zero);
            *e += c;
        };
        for (c, g, a) in inner.iter() {
            if let Some((f, dg)) = g.derive(sig, i) {
                push(c * int(f), dg, a.clone());
            }
            if let Some((neg, da)) = di.mul(a) {
                let s = odd_i && g.is_odd();
                push(c * sign(s ^ neg), g.clone(), da);
            }
        }
        Rc::new(
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((g, a), c)| (c, g, a))
                .collect(),
        )
    };
    REORDER.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

/// Normal form of `D1 ∘ D2` without weight bookkeeping.
fn compose_raw(d1: &DiffOperator, d2: &DiffOperator, weights: Weights) -> DiffOperator {
    let sig = d1.sig;
    let mut out = DiffOperator::zero(sig, weights);
    for (alpha, f) in &d1.terms {
        for (beta, g) in &d2.terms {
            // ∂^α ∘ g, grouped by the new derivative α'
            let mut by_deriv: BTreeMap<Monomial, SuperPolynomial> = BTreeMap::new();
            for (gm, gc) in g.terms() {
                for (c, g2, a2) in reorder(&sig, alpha, gm).iter() {
                    by_deriv
                        .entry(a2.clone())
                        .or_insert_with(|| SuperPolynomial::zero(sig))
                        .add_term(g2.clone(), c * gc);
                }
            }
            for (a2, h) in by_deriv {
                if h.is_zero() {
                    continue;
                }
                let Some((neg, ab)) = a2.mul(beta) else {
                    continue;
                };
                out.add_term(ab, &(f * &h).scale(&sign(neg)));
            }
        }
    }
    out
}

/// `D1 ∘ D2`; requires `μ(D2) = λ(D1)`.
pub fn dop_compose(d1: &DiffOperator, d2: &DiffOperator) -> Result<DiffOperator> {
    if d1.sig != d2.sig {
        return Err(Error::SignatureMismatch(d1.sig.to_string(), d2.sig.to_string()));
    }
    if d2.weights.mu() != d1.weights.lambda {
        return Err(Error::WeightMismatch {
            expected: fmt_rational(&d1.weights.lambda),
            found: fmt_rational(&d2.weights.mu()),
        });
    }
    let w = Weights::new(d2.weights.lambda.clone(), &d1.weights.delta + &d2.weights.delta);
    Ok(compose_raw(d1, d2, w))
}

/// `σ_Aff`: the normal-form coefficient of `∂^α` becomes the coefficient of `e^α`.
pub fn sigma_aff(d: &DiffOperator) -> SymbolField {
    let mut s = SymbolField::zero(d.sig, d.weights.clone());
    for (m, f) in &d.terms {
        s.add_term(m.clone(), f);
    }
    s
}

/// `Q_Aff = σ_Aff⁻¹`.
pub fn q_aff(s: &SymbolField) -> DiffOperator {
    let mut d = DiffOperator::zero(s.signature(), s.weights().clone());
    for (m, f) in s.terms() {
        d.add_term(m.clone(), f);
    }
    d
}

/// Degree-`k` part of `σ_Aff(D)`; errors when the order exceeds `k`.
pub fn principal_symbol(d: &DiffOperator, k: usize) -> Result<SymbolField> {
    if let Some(o) = d.order() {
        if o > k {
            return Err(Error::OrderTooHigh { order: o, k });
        }
    }
    Ok(sigma_aff(d).part(k))
}

/// `L_X D = L^μ_X ∘ D - (-1)^{X̃D̃} D ∘ L^λ_X`, splitting `D` into parity parts.
pub fn lie_dop(x: &VectorField, d: &DiffOperator) -> DiffOperator {
    let w = d.weights.clone();
    let l_mu = DiffOperator::lie_first_order(x, &w.mu());
    let l_lambda = DiffOperator::lie_first_order(x, &w.lambda);
    let (d0, d1) = d.split_parity();
    let mut out = DiffOperator::zero(d.sig, w.clone());
    for (part, odd) in [(d0, false), (d1, true)] {
        if part.is_zero() {
            continue;
        }
        out.add_assign(&compose_raw(&l_mu, &part, w.clone()));
        let s = sign(x.parity().is_odd() && odd);
        out.add_assign(&compose_raw(&part, &l_lambda, w.clone()).scale(&-s));
    }
    out
}

/// `𝓛_X = σ_Aff ∘ L_X ∘ Q_Aff`.
pub fn curly_l(x: &VectorField, s: &SymbolField) -> SymbolField {
    sigma_aff(&lie_dop(x, &q_aff(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{lie_symbol, realized_family};
    use crate::rational::rat;
    use crate::superalg::monomials_up_to;

    fn sig101() -> SpaceSignature {
        SpaceSignature::new(1, 0, 1)
    }

    fn w0(sig: SpaceSignature) -> (Weights, SpaceSignature) {
        (Weights::new(Rational::zero(), Rational::zero()), sig)
    }

    fn var(sig: SpaceSignature, i: usize) -> SuperPolynomial {
        SuperPolynomial::var(sig, i)
    }

    fn op(w: &Weights, f: SuperPolynomial, deriv: &[usize]) -> DiffOperator {
        let sig = f.signature();
        let (neg, m) = Monomial::from_factor_list(&sig, deriv).unwrap();
        DiffOperator::from_term(w.clone(), m, &f.scale(&sign(neg)))
    }

    #[test]
    fn apply_examples() {
        let (w, sig) = w0(sig101());
        let x2 = &var(sig, 0) * &var(sig, 0);
        assert_eq!(dop_apply(&op(&w, SuperPolynomial::one(sig), &[0]), &x2).unwrap(), var(sig, 0).scale(&int(2)));
        assert_eq!(dop_apply(&op(&w, var(sig, 1), &[1]), &var(sig, 1)).unwrap(), var(sig, 1));
        let tt = &var(sig, 1) * &var(sig, 2);
        let d12 = op(&w, SuperPolynomial::one(sig), &[1, 2]);
        assert_eq!(dop_apply(&d12, &tt).unwrap(), SuperPolynomial::constant(sig, int(-1)));
    }

    #[test]
    fn compose_examples() {
        let (w, sig) = w0(sig101());
        let one = SuperPolynomial::one(sig);
        let c = dop_compose(&op(&w, one.clone(), &[0]), &DiffOperator::multiplication(w.clone(), &var(sig, 0))).unwrap();
        assert_eq!(c, op(&w, var(sig, 0), &[0]).add(&DiffOperator::multiplication(w.clone(), &one)));
        let c = dop_compose(&op(&w, one.clone(), &[1]), &DiffOperator::multiplication(w.clone(), &var(sig, 1))).unwrap();
        assert_eq!(c, DiffOperator::multiplication(w.clone(), &one).sub(&op(&w, var(sig, 1), &[1])));
        // (θ¹∂θ²)∘(θ²∂θ¹) = θ¹∂θ¹ - θ¹θ²∂θ²∂θ¹
        let c = dop_compose(&op(&w, var(sig, 1), &[2]), &op(&w, var(sig, 2), &[1])).unwrap();
        let expect = op(&w, var(sig, 1), &[1]).sub(&op(&w, &var(sig, 1) * &var(sig, 2), &[2, 1]));
        assert_eq!(c, expect);
    }

    #[test]
    fn compose_checks_weights() {
        let sig = sig101();
        let a = DiffOperator::partial(sig, Weights::new(int(1), int(1)), 0);
        let b = DiffOperator::partial(sig, Weights::new(int(0), int(1)), 0);
        assert!(dop_compose(&a, &b).is_ok());
        assert!(matches!(dop_compose(&b, &a), Err(Error::WeightMismatch { .. })));
        assert_eq!(dop_compose(&a, &b).unwrap().weights(), &Weights::new(int(0), int(2)));
    }

    fn sample_ops(sig: SpaceSignature, w: &Weights) -> Vec<DiffOperator> {
        let coeffs = monomials_up_to(&sig, 1);
        let derivs = monomials_up_to(&sig, 2);
        let mut out = Vec::new();
        for (a, cm) in coeffs.iter().enumerate() {
            for (b, dm) in derivs.iter().enumerate() {
                if (a + 2 * b) % 3 == 0 {
                    out.push(DiffOperator::from_term(
                        w.clone(),
                        dm.clone(),
                        &SuperPolynomial::monomial(sig, cm.clone(), rat(a as i64 + 1, b as i64 + 1)),
                    ));
                }
            }
        }
        out
    }

    #[test]
    fn composition_is_the_operator_product() {
        for sig in [sig101(), SpaceSignature::new(1, 1, 1)] {
            let (w, _) = w0(sig);
            let ops = sample_ops(sig, &w);
            let fs: Vec<SuperPolynomial> = monomials_up_to(&sig, 3)
                .into_iter()
                .map(|m| SuperPolynomial::monomial(sig, m, int(1)))
                .collect();
            for a in &ops {
                for b in ops.iter().step_by(2) {
                    let ab = dop_compose(a, b).unwrap();
                    for f in fs.iter().step_by(3) {
                        let lhs = dop_apply(&ab, f).unwrap();
                        let rhs = dop_apply(a, &dop_apply(b, f).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn composition_is_associative() {
        let sig = SpaceSignature::new(1, 1, 1);
        let (w, _) = w0(sig);
        let ops = sample_ops(sig, &w);
        for a in ops.iter().step_by(3) {
            for b in ops.iter().skip(1).step_by(4) {
                for c in ops.iter().skip(2).step_by(5) {
                    let l = dop_compose(&dop_compose(a, b).unwrap(), c).unwrap();
                    let r = dop_compose(a, &dop_compose(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn affine_maps_round_trip() {
        let sig = SpaceSignature::new(1, 1, 1);
        let w = Weights::new(rat(1, 3), rat(1, 2));
        for d in sample_ops(sig, &w) {
            assert_eq!(q_aff(&sigma_aff(&d)), d);
            let s = sigma_aff(&d);
            assert_eq!(sigma_aff(&q_aff(&s)), s);
        }
        let s = SymbolField::from_vectors(sig, w.clone(), var(sig, 0), &[0]);
        assert_eq!(q_aff(&s), op(&w, var(sig, 0), &[0]));
    }

    #[test]
    fn affine_quantization_is_a_composition_of_constant_lie_derivatives() {
        let sig = SpaceSignature::new(1, 1, 1);
        let w = Weights::new(Rational::zero(), Rational::zero());
        let f = &var(sig, 0) * &var(sig, 2);
        for vs in [vec![0usize], vec![2, 0], vec![2, 3], vec![3, 2, 1], vec![1, 1, 2]] {
            let s = SymbolField::from_vectors(sig, w.clone(), f.clone(), &vs);
            let mut d = DiffOperator::multiplication(w.clone(), &f.scale(&sign(vs.len() % 2 == 1)));
            for &v in &vs {
                let x = VectorField::partial(sig, v).scale(&int(-1));
                d = dop_compose(&d, &DiffOperator::lie_first_order(&x, &Rational::zero())).unwrap();
            }
            assert_eq!(q_aff(&s), d, "{vs:?}");
        }
    }

    #[test]
    fn principal_symbol_examples() {
        let sig = sig101();
        let (w, _) = w0(sig);
        let d = op(&w, var(sig, 0), &[0, 1]).add(&op(&w, SuperPolynomial::one(sig), &[0]));
        let ps = principal_symbol(&d, 2).unwrap();
        assert_eq!(ps, SymbolField::from_vectors(sig, w.clone(), var(sig, 0), &[0, 1]));
        assert!(principal_symbol(&d, 3).unwrap().is_zero());
        assert!(matches!(principal_symbol(&d, 1), Err(Error::OrderTooHigh { .. })));
    }

    #[test]
    fn lie_dop_examples() {
        let sig = SpaceSignature::new(1, 1, 1);
        let (w, _) = w0(sig);
        let d = op(&w, SuperPolynomial::one(sig), &[0, 2]);
        assert!(lie_dop(&VectorField::partial(sig, 3), &d).is_zero());
        let f = &var(sig, 0) * &var(sig, 3);
        let x = realized_family(sig).unwrap().pop().unwrap().2;
        let l = lie_dop(&x, &DiffOperator::multiplication(w.clone(), &f));
        assert_eq!(l, DiffOperator::multiplication(w, &x.apply(&f)));
    }

    #[test]
    fn lie_dop_is_a_representation() {
        let sig = sig101();
        let w = Weights::new(rat(1, 3), rat(3, 4));
        let fam = realized_family(sig).unwrap();
        let ops = sample_ops(sig, &w);
        for d in ops.iter().step_by(3) {
            for (_, _, x) in fam.iter().step_by(2) {
                for (_, _, y) in fam.iter().skip(1).step_by(2) {
                    let lhs = lie_dop(&x.bracket(y), d);
                    let s = sign(x.parity().is_odd() && y.parity().is_odd());
                    let rhs = lie_dop(x, &lie_dop(y, d)).sub(&lie_dop(y, &lie_dop(x, d)).scale(&s));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn curly_l_matches_lie_symbol_on_affine_part() {
        let sig = SpaceSignature::new(1, 1, 1);
        let w = Weights::new(rat(2, 5), rat(1, 3));
        for (_, h, x) in realized_family(sig).unwrap() {
            if h.grade() == 1 {
                continue;
            }
            for d in sample_ops(sig, &w).iter().step_by(2) {
                let s = sigma_aff(d);
                assert_eq!(curly_l(&x, &s), lie_symbol(&x, &s), "{h:?}");
            }
        }
    }
}
