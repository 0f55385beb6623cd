//! Super vector fields, densities and weighted symbols, and the realization
//! of `osp(p+1,q+1|2r)` by polynomial vector fields on `R^{p+q|2r}`.
//!
//! A symbol `Σ f_a ⊗ e^a` is stored as a map from fiber monomials `e^a` to
//! coefficient polynomials `f_a`. The supersymmetric algebra over
//! `R^{p+q|2r}` is free supercommutative on `e_1..e_n`, so fiber monomials
//! reuse [`Monomial`] and `v_1 ∨ … ∨ v_k` is their product. Operators of a
//! given parity `π` acting on the fiber pick up `(-1)^{π f̃}` when they move
//! across the coefficient `f`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ospalg::{build_forms, decompose_phi, sharp, GradedElement, OspMatrix};
use crate::rational::{fmt_rational, int, parse_rational, rat, sign, Rational};
use crate::superalg::{Monomial, Parity, SpaceSignature, SuperPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    sig: SpaceSignature,
    comps: Vec<SuperPolynomial>,
    parity: Parity,
}

impl VectorField {
    /// Checks that component `X^i` has parity `X̃ + ĩ`.
    pub fn new(sig: SpaceSignature, comps: Vec<SuperPolynomial>, parity: Parity) -> Result<Self> {
        if comps.len() != sig.dim() {
            return Err(Error::IndexOutOfRange {
                index: comps.len(),
                dim: sig.dim(),
            });
        }
        for (i, c) in comps.iter().enumerate() {
            if c.signature() != sig {
                return Err(Error::SignatureMismatch(sig.to_string(), c.signature().to_string()));
            }
            let expect = parity + sig.parity(i);
            if !c.is_zero() && c.homogeneous_parity()? != expect {
                return Err(Error::MixedParity("vector field"));
            }
        }
        Ok(Self { sig, comps, parity })
    }

    pub fn zero(sig: SpaceSignature, parity: Parity) -> Self {
        Self {
            sig,
            comps: vec![SuperPolynomial::zero(sig); sig.dim()],
            parity,
        }
    }

    /// `∂_{y^i}`.
    pub fn partial(sig: SpaceSignature, i: usize) -> Self {
        let mut x = Self::zero(sig, sig.parity(i));
        x.comps[i] = SuperPolynomial::one(sig);
        x
    }

    /// `Σ y^i ∂_{y^i}`.
    pub fn euler(sig: SpaceSignature) -> Self {
        let comps = (0..sig.dim()).map(|i| SuperPolynomial::var(sig, i)).collect();
        Self {
            sig,
            comps,
            parity: Parity::Even,
        }
    }

    pub fn signature(&self) -> SpaceSignature {
        self.sig
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn components(&self) -> &[SuperPolynomial] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(SuperPolynomial::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.comps.iter().all(SuperPolynomial::is_constant)
    }

    /// `X(f) = Σ X^i ∂_i f`.
    pub fn apply(&self, f: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.sig);
        for (i, xi) in self.comps.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let df = f.d(i);
            if !df.is_zero() {
                out += &(xi * &df);
            }
        }
        out
    }

    /// `div X = Σ (-1)^{ĩ(X̃+ĩ)} ∂_i X^i`.
    pub fn divergence(&self) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.sig);
        for (i, xi) in self.comps.iter().enumerate() {
            let odd_i = self.sig.is_odd(i);
            let s = sign(odd_i && (self.parity.is_odd() ^ odd_i));
            out.add_scaled(&xi.d(i), &s);
        }
        out
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        if self.parity != other.parity && !self.is_zero() && !other.is_zero() {
            return Err(Error::MixedParity("vector field sum"));
        }
        let parity = if self.is_zero() { other.parity } else { self.parity };
        Ok(Self {
            sig: self.sig,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
            parity,
        })
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        Self {
            sig: self.sig,
            comps: self.comps.iter().map(|a| a.scale(c)).collect(),
            parity: self.parity,
        }
    }

    /// `f · X` for a homogeneous function `f`.
    pub fn mul_function(&self, f: &SuperPolynomial) -> Result<VectorField> {
        let pf = f.homogeneous_parity()?;
        Ok(Self {
            sig: self.sig,
            comps: self.comps.iter().map(|a| f * a).collect(),
            parity: self.parity + pf,
        })
    }

    /// `[X,Y]^j = X(Y^j) - (-1)^{X̃Ỹ} Y(X^j)`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let s = sign(self.parity.is_odd() && other.parity.is_odd());
        let comps = (0..self.sig.dim())
            .map(|j| {
                let mut c = self.apply(&other.comps[j]);
                c.add_scaled(&other.apply(&self.comps[j]), &-s.clone());
                c
            })
            .collect();
        Self {
            sig: self.sig,
            comps,
            parity: self.parity + other.parity,
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c}) d/d{}", self.sig.var_name(i)))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn vf_divergence(x: &VectorField) -> SuperPolynomial {
    x.divergence()
}

pub fn vf_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    x.bracket(y)
}

/// `(λ, δ)`; the target density weight is `μ = λ + δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights {
    pub lambda: Rational,
    pub delta: Rational,
}

impl Weights {
    pub fn new(lambda: Rational, delta: Rational) -> Self {
        Self { lambda, delta }
    }

    pub fn mu(&self) -> Rational {
        &self.lambda + &self.delta
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda={}, delta={}", fmt_rational(&self.lambda), fmt_rational(&self.delta))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityElement {
    pub f: SuperPolynomial,
    pub lambda: Rational,
}

/// `L^λ_X f = X(f) + λ div(X) f`.
pub fn lie_density(x: &VectorField, d: &DensityElement) -> DensityElement {
    let mut f = x.apply(&d.f);
    f.add_scaled(&(&x.divergence() * &d.f), &d.lambda);
    DensityElement {
        f,
        lambda: d.lambda.clone(),
    }
}

/// Weighted symbol: a finite sum `Σ f_a ⊗ e^a` with polynomial coefficients.
///
/// Usually homogeneous of one fiber degree `k` (an element of `S^k_δ`); the
/// graded sums produced by the operator module action use the same type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolField {
    sig: SpaceSignature,
    weights: Weights,
    terms: BTreeMap<Monomial, SuperPolynomial>,
}

impl SymbolField {
    pub fn zero(sig: SpaceSignature, weights: Weights) -> Self {
        Self {
            sig,
            weights,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(sig: SpaceSignature, weights: Weights, fiber: Monomial, coeff: SuperPolynomial) -> Self {
        let mut s = Self::zero(sig, weights);
        s.add_term(fiber, &coeff);
        s
    }

    /// A symbol `f ⊗ v_1 ∨ … ∨ v_k` from a list of basis vectors (Koszul-normalized).
    pub fn from_vectors(sig: SpaceSignature, weights: Weights, f: SuperPolynomial, vectors: &[usize]) -> Self {
        match Monomial::from_factor_list(&sig, vectors) {
            None => Self::zero(sig, weights),
            Some((neg, m)) => Self::from_term(sig, weights, m, f.scale(&sign(neg))),
        }
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, fiber: &Monomial) -> SuperPolynomial {
        self.terms
            .get(fiber)
            .cloned()
            .unwrap_or_else(|| SuperPolynomial::zero(self.sig))
    }

    pub fn add_term(&mut self, fiber: Monomial, coeff: &SuperPolynomial) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&fiber) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&fiber);
                }
            }
            None => {
                self.terms.insert(fiber, coeff.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &SymbolField) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add(&self, other: &SymbolField) -> SymbolField {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &SymbolField) -> SymbolField {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> SymbolField {
        if c.is_zero() {
            return Self::zero(self.sig, self.weights.clone());
        }
        Self {
            sig: self.sig,
            weights: self.weights.clone(),
            terms: self.terms.iter().map(|(m, f)| (m.clone(), f.scale(c))).collect(),
        }
    }

    /// Fiber degrees present, increasing.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Monomial::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// `Some(k)` when every term has fiber degree `k`; `None` for zero or mixed.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The component of fiber degree `k`.
    pub fn part(&self, k: usize) -> SymbolField {
        Self {
            sig: self.sig,
            weights: self.weights.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, f)| (m.clone(), f.clone()))
                .collect(),
        }
    }

    /// True when every coefficient is constant.
    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(SuperPolynomial::is_constant)
    }

    /// Applies a fiber operator of the given parity:
    /// `f ⊗ v ↦ (-1)^{π f̃} f ⊗ op(v)`.
    pub fn fiber_map(&self, odd: bool, op: impl Fn(&Monomial) -> Vec<(Rational, Monomial)>) -> SymbolField {
        let mut out = Self::zero(self.sig, self.weights.clone());
        for (v, f) in &self.terms {
            let images = op(v);
            if images.is_empty() {
                continue;
            }
            let fs = f.koszul(odd);
            for (c, w) in images {
                out.add_term(w, &fs.scale(&c));
            }
        }
        out
    }

    /// Applies a map to every coefficient: `f ⊗ v ↦ g(f) ⊗ v`.
    pub fn map_coefficients(&self, g: impl Fn(&SuperPolynomial) -> SuperPolynomial) -> SymbolField {
        let mut out = Self::zero(self.sig, self.weights.clone());
        for (v, f) in &self.terms {
            out.add_term(v.clone(), &g(f));
        }
        out
    }

    /// `∂_{y^i} S`, acting on the coefficients.
    pub fn partial(&self, i: usize) -> SymbolField {
        self.map_coefficients(|f| f.d(i))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "signature": self.sig,
            "weights": {
                "lambda": fmt_rational(&self.weights.lambda),
                "delta": fmt_rational(&self.weights.delta),
            },
            "degree": self.homogeneous_degree(),
            "terms": terms_to_json(&self.terms, "fiberEven", "fiberOdd"),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let sig: SpaceSignature = serde_json::from_value(v["signature"].clone())?;
        let weights = Weights::new(json_rational(&v["weights"]["lambda"])?, json_rational(&v["weights"]["delta"])?);
        let mut s = Self::zero(sig, weights);
        for (m, f) in terms_from_json(&sig, &v["terms"], "fiberEven", "fiberOdd")? {
            s.add_term(m, &f);
        }
        if let Some(k) = v["degree"].as_u64() {
            if s.terms.keys().any(|m| m.degree() != k as usize) {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, f)| format!("({f}) (x) {}", fiber_label(&self.sig, m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for SymbolField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn json_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        _ => Err(Error::Parse(format!("expected a rational, found {v}"))),
    }
}

/// `[{evenKey: [..], oddKey: [1-based odd indices], "coeff": "<poly>"}]`.
pub(crate) fn terms_to_json(
    terms: &BTreeMap<Monomial, SuperPolynomial>,
    even_key: &str,
    odd_key: &str,
) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|(m, f)| {
                let mut o = serde_json::Map::new();
                o.insert(even_key.into(), json!(m.even_exponents()));
                o.insert(odd_key.into(), json!(m.odd_indices().map(|b| b + 1).collect::<Vec<_>>()));
                o.insert("coeff".into(), json!(f.to_canonical_string()));
                Value::Object(o)
            })
            .collect(),
    )
}

pub(crate) fn terms_from_json(
    sig: &SpaceSignature,
    v: &Value,
    even_key: &str,
    odd_key: &str,
) -> Result<Vec<(Monomial, SuperPolynomial)>> {
    let bad = |what: &str| Error::Parse(format!("malformed term list: {what}"));
    let arr = v.as_array().ok_or_else(|| bad("not an array"))?;
    let mut out = Vec::with_capacity(arr.len());
    for t in arr {
        let even: Vec<u16> = serde_json::from_value(t[even_key].clone())?;
        let odd: Vec<usize> = serde_json::from_value(t[odd_key].clone())?;
        if even.len() != sig.even_dim() || odd.iter().any(|&b| b == 0 || b > sig.odd_dim()) {
            return Err(bad("index out of range"));
        }
        let mut sorted = odd.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != odd.len() {
            return Err(bad("repeated odd generator"));
        }
        let zero_based: Vec<usize> = sorted.iter().map(|b| b - 1).collect();
        let coeff = t["coeff"].as_str().ok_or_else(|| bad("coeff"))?;
        let f = SuperPolynomial::parse(*sig, coeff)?;
        out.push((Monomial::from_parts(&even, &zero_based), f));
    }
    Ok(out)
}

/// `e1^2 e3`-style label of a fiber monomial, with global 1-based indices; `1` for the unit.
pub fn fiber_label(sig: &SpaceSignature, m: &Monomial) -> String {
    if m.is_one() {
        return "1".into();
    }
    let mut parts = Vec::new();
    for (i, &e) in m.even_exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("e{}", i + 1)),
            _ => parts.push(format!("e{}^{e}", i + 1)),
        }
    }
    parts.extend(m.odd_indices().map(|b| format!("e{}", b + sig.even_dim() + 1)));
    parts.join(" ")
}

/// Left fiber derivative `∂_{e_i}` on a fiber monomial (the interior product by `ε^i`).
pub fn fiber_derive(sig: &SpaceSignature, v: &Monomial, i: usize) -> Option<(Rational, Monomial)> {
    v.derive(sig, i).map(|(c, m)| (int(c), m))
}

/// Left fiber multiplication `e_j ∨ v`.
pub fn fiber_mul(sig: &SpaceSignature, j: usize, v: &Monomial) -> Option<(Rational, Monomial)> {
    Monomial::var(sig, j).mul(v).map(|(neg, m)| (sign(neg), m))
}

/// Lie derivative of a weighted symbol:
/// `L_X(f ⊗ v) = X(f) ⊗ v + (-1)^{X̃f̃} Σ_{ij} f J_i^j ⊗ ρ(e_j^i) v`, with
/// `J_i^j = (-1)^{ĩX̃+1} ∂_i X^j` and `ρ(e_j^i) = e_j ∂_{e_i} - δ δ_{ij} (-1)^ĩ`.
pub fn lie_symbol(x: &VectorField, s: &SymbolField) -> SymbolField {
    let sig = s.sig;
    let n = sig.dim();
    let xo = x.parity.is_odd();
    let jac: Vec<Vec<SuperPolynomial>> = (0..n)
        .map(|i| {
            let c = sign(!(sig.is_odd(i) && xo));
            (0..n).map(|j| x.comps[j].d(i).scale(&c)).collect()
        })
        .collect();
    let mut weight = SuperPolynomial::zero(sig);
    for (i, row) in jac.iter().enumerate() {
        weight.add_scaled(&row[i], &-(&s.weights.delta * sign(sig.is_odd(i))));
    }
    let mut out = SymbolField::zero(sig, s.weights.clone());
    for (v, f) in &s.terms {
        out.add_term(v.clone(), &x.apply(f));
        let fs = f.koszul(xo);
        if !weight.is_zero() {
            out.add_term(v.clone(), &(&fs * &weight));
        }
        for (i, row) in jac.iter().enumerate() {
            let Some((c, dv)) = fiber_derive(&sig, v, i) else {
                continue;
            };
            for (j, jij) in row.iter().enumerate() {
                if jij.is_zero() {
                    continue;
                }
                if let Some((c2, w)) = fiber_mul(&sig, j, &dv) {
                    out.add_term(w, &(&fs * jij).scale(&(&c * &c2)));
                }
            }
        }
    }
    out
}

/// `F0(y) = Σ_{i≤p}(y^i)² - Σ_{p<i≤p+q}(y^i)² + 2 Σ_{a≤r} θ^a θ^{a+r}`.
pub fn quadric_f0(sig: SpaceSignature) -> SuperPolynomial {
    let mut f = SuperPolynomial::zero(sig);
    for i in 0..sig.even_dim() {
        let y = SuperPolynomial::var(sig, i);
        f.add_scaled(&(&y * &y), &int(if i < sig.p { 1 } else { -1 }));
    }
    let m = sig.even_dim();
    for a in 0..sig.r {
        let t = &SuperPolynomial::var(sig, m + a) * &SuperPolynomial::var(sig, m + a + sig.r);
        f.add_scaled(&t, &int(2));
    }
    f
}

/// The vector field `X^h` of a graded piece `h`:
/// `-Σ h^i ∂_i` on `g_{-1}`, `-Σ (-1)^{j̃(ĩ+j̃)} h^i_j y^j ∂_i` on `g_0`, and
/// `(Σ_j h_j y^j (-1)^{j̃}) X^𝓔 + ½ F0 X^{h♯}` on `g_1`.
pub fn realize(sig: SpaceSignature, h: &GradedElement) -> Result<VectorField> {
    let n = sig.dim();
    let parity = h.parity(&sig)?;
    match h {
        GradedElement::Minus(v) => {
            let comps = v
                .iter()
                .map(|c| SuperPolynomial::constant(sig, -c.clone()))
                .collect();
            VectorField::new(sig, comps, parity)
        }
        GradedElement::Zero(a) => {
            let comps = (0..n)
                .map(|i| {
                    let mut c = SuperPolynomial::zero(sig);
                    for j in 0..n {
                        let hij = &a[(i, j)];
                        if hij.is_zero() {
                            continue;
                        }
                        let oj = sig.is_odd(j);
                        let s = sign(oj && (sig.is_odd(i) ^ oj));
                        c.add_scaled(&SuperPolynomial::var(sig, j), &-(s * hij));
                    }
                    c
                })
                .collect();
            VectorField::new(sig, comps, parity)
        }
        GradedElement::Plus(xi) => {
            let mut lin = SuperPolynomial::zero(sig);
            for (j, c) in xi.iter().enumerate() {
                lin.add_scaled(&SuperPolynomial::var(sig, j), &(c * sign(sig.is_odd(j))));
            }
            let (_, g0) = build_forms(sig);
            let xsharp = realize(sig, &GradedElement::Minus(sharp(&g0, xi)))?;
            let a = VectorField::euler(sig).mul_function(&lin)?;
            let b = xsharp.mul_function(&quadric_f0(sig))?.scale(&rat(1, 2));
            let mut out = a.add(&b)?;
            out.parity = parity;
            Ok(out)
        }
    }
}

/// `X^A` for a homogeneous matrix of `osp(p+1,q+1|2r)`, summing the realized
/// graded pieces of `Φ(A)`.
pub fn realize_osp(a: &OspMatrix) -> Result<VectorField> {
    let sig = a.signature();
    let parity = a.homogeneous_parity()?;
    let d = decompose_phi(a)?;
    let mut out = VectorField::zero(sig, parity);
    for c in d.components() {
        out = out.add(&realize(sig, &c)?)?;
    }
    Ok(out)
}

/// `X^{[h,h']}`, the realization of the bracket taken inside `osp(p+1,q+1|2r)`.
pub fn realize_bracket(sig: SpaceSignature, h1: &GradedElement, h2: &GradedElement) -> Result<VectorField> {
    let d = crate::ospalg::bracket_elements(sig, h1, h2)?;
    let mut out = VectorField::zero(sig, h1.parity(&sig)? + h2.parity(&sig)?);
    for c in d.components() {
        out = out.add(&realize(sig, &c)?)?;
    }
    Ok(out)
}

/// The finite generating family used for equivariance sweeps:
/// all `e_i`, all `O_i^j` with `i, j ≤ p+q+2r`, `𝓔`, and all `ε^i`.
pub fn generator_family(sig: SpaceSignature) -> Vec<(String, GradedElement)> {
    let n = sig.dim();
    let mut out: Vec<(String, GradedElement)> = (0..n)
        .map(|i| (format!("e_{}", i + 1), GradedElement::e(&sig, i)))
        .collect();
    for i in 0..n {
        for j in 0..n {
            let o = GradedElement::o(sig, i, j);
            if !o.is_zero() {
                out.push((format!("O_{}^{}", i + 1, j + 1), o));
            }
        }
    }
    out.push(("Euler".into(), GradedElement::euler(sig)));
    out.extend((0..n).map(|i| (format!("eps^{}", i + 1), GradedElement::eps(&sig, i))));
    out
}

/// Realized generator family, computed once per signature.
pub fn realized_family(sig: SpaceSignature) -> Result<Vec<(String, GradedElement, VectorField)>> {
    generator_family(sig)
        .into_iter()
        .map(|(name, h)| {
            let x = realize(sig, &h)?;
            Ok((name, h, x))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ospalg::unit_vector;
    use crate::superalg::monomials_up_to;

    fn w(l: Rational, d: Rational) -> Weights {
        Weights::new(l, d)
    }

    #[test]
    fn realization_examples() {
        let sig = SpaceSignature::new(1, 0, 1);
        let x = |i| SuperPolynomial::var(sig, i);
        let neg_d = realize(sig, &GradedElement::e(&sig, 0)).unwrap();
        assert_eq!(neg_d, VectorField::partial(sig, 0).scale(&int(-1)));
        assert_eq!(realize(sig, &GradedElement::euler(sig)).unwrap(), VectorField::euler(sig));
        // ε¹ ↦ ½x²∂x + xθ¹∂θ¹ + xθ²∂θ² - θ¹θ²∂x
        let got = realize(sig, &GradedElement::eps(&sig, 0)).unwrap();
        let c0 = &(&x(0) * &x(0)).scale(&rat(1, 2)) - &(&x(1) * &x(2));
        let expect = VectorField::new(sig, vec![c0, &x(0) * &x(1), &x(0) * &x(2)], Parity::Even).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn divergence_examples() {
        for sig in [SpaceSignature::new(1, 0, 1), SpaceSignature::new(2, 1, 1)] {
            assert!(VectorField::partial(sig, 1).divergence().is_zero());
            assert_eq!(
                VectorField::euler(sig).divergence(),
                SuperPolynomial::constant(sig, int(sig.superdim()))
            );
            let d = DensityElement {
                f: SuperPolynomial::one(sig),
                lambda: rat(3, 7),
            };
            let l = lie_density(&VectorField::euler(sig), &d);
            assert_eq!(l.f, SuperPolynomial::constant(sig, rat(3, 7) * int(sig.superdim())));
            // h0 fields are divergence free
            for (_, h, x) in realized_family(sig).unwrap() {
                if let GradedElement::Zero(ref a) = h {
                    if *a != GradedMatrix::identity(sig, crate::ospalg::Space::Small).scale(&int(-1)) {
                        assert!(x.divergence().is_zero(), "{h:?}");
                    }
                }
            }
        }
        // d = 0: every realized field is divergence free
        let sig = SpaceSignature::new(2, 0, 1);
        for (_, _, x) in realized_family(sig).unwrap() {
            assert!(x.divergence().is_zero());
        }
    }

    use crate::ospalg::GradedMatrix;

    #[test]
    fn odd_bracket_is_anticommutator() {
        let sig = SpaceSignature::new(1, 0, 1);
        let dth = VectorField::partial(sig, 1);
        // θ¹ ∂_x
        let mut comps = vec![SuperPolynomial::zero(sig); 3];
        comps[0] = SuperPolynomial::var(sig, 1);
        let t = VectorField::new(sig, comps, Parity::Odd).unwrap();
        assert_eq!(dth.bracket(&t), VectorField::partial(sig, 0));
        // [X,X] for odd X = 2 X∘X
        let mut comps = vec![SuperPolynomial::zero(sig); 3];
        comps[0] = SuperPolynomial::var(sig, 1);
        comps[1] = SuperPolynomial::var(sig, 0);
        let x = VectorField::new(sig, comps, Parity::Odd).unwrap(); // θ¹∂_x + x∂_θ¹
        let xx = x.bracket(&x);
        assert!(!xx.is_zero());
        for f in [SuperPolynomial::var(sig, 0), &SuperPolynomial::var(sig, 1) * &SuperPolynomial::var(sig, 0)] {
            assert_eq!(xx.apply(&f), x.apply(&x.apply(&f)).scale(&int(2)));
        }
    }

    #[test]
    fn realization_is_a_homomorphism() {
        for sig in [SpaceSignature::new(1, 0, 1), SpaceSignature::new(1, 1, 1), SpaceSignature::new(2, 0, 1)] {
            let fam = realized_family(sig).unwrap();
            for (_, h1, x1) in &fam {
                for (_, h2, x2) in &fam {
                    let rhs = realize_bracket(sig, h1, h2).unwrap();
                    assert_eq!(x1.bracket(x2), rhs, "{h1:?} {h2:?}");
                }
            }
        }
    }

    #[test]
    fn lie_symbol_transport_and_linear_fields() {
        let sig = SpaceSignature::new(1, 1, 1);
        let wts = w(rat(1, 2), rat(1, 3));
        let f = &SuperPolynomial::var(sig, 0) * &SuperPolynomial::var(sig, 2);
        let s = SymbolField::from_vectors(sig, wts.clone(), f.clone(), &[1, 3]);
        let x = VectorField::partial(sig, 0);
        assert_eq!(lie_symbol(&x, &s), s.partial(0));
        // g0 fields: L_{X^A}(f⊗v) = X^A(f)⊗v + (-1)^{Ãf̃} f⊗ρ(A)v
        for (_, h, xa) in realized_family(sig).unwrap() {
            let GradedElement::Zero(a) = &h else { continue };
            let lhs = lie_symbol(&xa, &s);
            let mut rhs = s.map_coefficients(|c| xa.apply(c));
            // ρ(A) on B^δ ⊗ S^k: -δ str(A) + Σ A^j_i e_j ∂_{e_i}
            let str_a = crate::ospalg::supertrace(a);
            let odd = h.parity(&sig).unwrap().is_odd();
            let rho = s.fiber_map(odd, |v| {
                let mut out = vec![(-(&wts.delta * &str_a), v.clone())];
                for i in 0..sig.dim() {
                    if let Some((c, dv)) = fiber_derive(&sig, v, i) {
                        for j in 0..sig.dim() {
                            if a[(j, i)].is_zero() {
                                continue;
                            }
                            if let Some((c2, m)) = fiber_mul(&sig, j, &dv) {
                                out.push((&c * &c2 * &a[(j, i)], m));
                            }
                        }
                    }
                }
                out
            });
            rhs.add_assign(&rho);
            assert_eq!(lhs, rhs, "{h:?}");
        }
    }

    #[test]
    fn lie_symbol_is_a_representation() {
        let sig = SpaceSignature::new(1, 0, 1);
        let wts = w(rat(1, 2), rat(2, 5));
        let fam = realized_family(sig).unwrap();
        let coeffs = monomials_up_to(&sig, 1);
        for fib in [vec![0usize], vec![1], vec![0, 2], vec![1, 2]] {
            for cm in &coeffs {
                let s = SymbolField::from_vectors(sig, wts.clone(), SuperPolynomial::monomial(sig, cm.clone(), int(1)), &fib);
                for (_, _, x) in fam.iter().step_by(2) {
                    for (_, _, y) in fam.iter().skip(1).step_by(2) {
                        let lhs = lie_symbol(&x.bracket(y), &s);
                        let sg = sign(x.parity().is_odd() && y.parity().is_odd());
                        let rhs = lie_symbol(x, &lie_symbol(y, &s)).sub(&lie_symbol(y, &lie_symbol(x, &s)).scale(&sg));
                        assert_eq!(lhs, rhs);
                        assert!(lhs.is_zero() || lhs.homogeneous_degree() == Some(fib.len()));
                    }
                }
            }
        }
    }

    #[test]
    fn lie_density_is_a_representation() {
        let sig = SpaceSignature::new(1, 1, 1);
        let fam = realized_family(sig).unwrap();
        for cm in monomials_up_to(&sig, 2).iter().step_by(3) {
            let d = DensityElement {
                f: SuperPolynomial::monomial(sig, cm.clone(), int(1)),
                lambda: rat(-2, 3),
            };
            for (_, _, x) in fam.iter().step_by(3) {
                for (_, _, y) in fam.iter().skip(1).step_by(4) {
                    let sg = sign(x.parity().is_odd() && y.parity().is_odd());
                    let lhs = lie_density(&x.bracket(y), &d).f;
                    let rhs = &lie_density(x, &lie_density(y, &d)).f - &lie_density(y, &lie_density(x, &d)).f.scale(&sg);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn symbol_json_round_trip() {
        let sig = SpaceSignature::new(1, 1, 1);
        let f = &SuperPolynomial::var(sig, 0) * &SuperPolynomial::var(sig, 3);
        let s = SymbolField::from_vectors(sig, w(rat(1, 2), rat(-3, 4)), f, &[1, 3, 2])
            .add(&SymbolField::from_vectors(sig, w(rat(1, 2), rat(-3, 4)), SuperPolynomial::one(sig), &[0, 0, 2]));
        let v = s.to_json();
        assert_eq!(v["degree"], 3);
        assert_eq!(SymbolField::from_json(&v).unwrap(), s);
    }

    #[test]
    fn vector_field_parity_is_validated() {
        let sig = SpaceSignature::new(1, 0, 1);
        let comps = vec![SuperPolynomial::var(sig, 1), SuperPolynomial::zero(sig), SuperPolynomial::zero(sig)];
        assert!(VectorField::new(sig, comps, Parity::Even).is_err());
        let _ = unit_vector(3, 0);
    }
}
