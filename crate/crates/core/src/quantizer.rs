//! Spectrum of the Casimir operator on `S^k_δ`, resonances, and the
//! construction of the equivariant quantization `S_δ → D_{λ,μ}`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, ResonanceWitness, Result};
use crate::geom::{lie_symbol, realized_family, SymbolField, VectorField, Weights};
use crate::linalg::{QMatrix, UniPoly};
use crate::rational::{fmt_rational, int, rat, Rational};
use crate::structops::{casimir_closed, constant_matrix, op_delta0, op_g0, op_n, sym_div, CasimirData, CasimirMode};
use crate::superalg::{SpaceSignature, SuperPolynomial};
use crate::weyl::{lie_dop, principal_symbol, q_aff, DiffOperator};

/// `b_{k,s} = 2s(d + 2(k-s-1))`.
pub fn b_ks(sig: &SpaceSignature, k: usize, s: usize) -> Rational {
    let (k, s) = (k as i64, s as i64);
    int(2 * s * (sig.superdim() + 2 * (k - s - 1)))
}

/// `α_{k,s,δ} = -[(-k+dδ)² - d(-2k+dδ) + k² - 2k] + b_{k,s}`.
pub fn alpha_value(sig: &SpaceSignature, k: usize, s: usize, delta: &Rational) -> Rational {
    crate::structops::casimir_scalar(sig, delta, k) + b_ks(sig, k, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub k: usize,
    pub s: usize,
    #[serde(serialize_with = "ser_rational")]
    pub b: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub multiplicity: usize,
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(x))
}

pub fn alpha(k: usize, s: usize, delta: &Rational, sig: &SpaceSignature) -> Result<SpectrumEntry> {
    if 2 * s > k {
        return Err(Error::HarmonicIndex { k, s });
    }
    let a = alpha_value(sig, k, s, delta);
    let multiplicity = (0..=k / 2).filter(|&t| alpha_value(sig, k, t, delta) == a).count();
    Ok(SpectrumEntry {
        k,
        s,
        b: b_ks(sig, k, s),
        alpha: a,
        multiplicity,
    })
}

/// All `α_{k,s,δ}`, `0 ≤ s ≤ ⌊k/2⌋`.
pub fn spectrum(k: usize, delta: &Rational, sig: &SpaceSignature) -> Vec<SpectrumEntry> {
    (0..=k / 2).map(|s| alpha(k, s, delta, sig).expect("s in range")).collect()
}

/// `∏_s (x - α_{k,s,δ})` with equal roots merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPoly {
    pub k: usize,
    /// Distinct roots with multiplicities, in order of first appearance in `s`.
    pub roots: Vec<(Rational, usize)>,
}

impl MinPoly {
    pub fn poly(&self) -> UniPoly {
        self.roots
            .iter()
            .fold(UniPoly::constant(Rational::one()), |acc, (a, m)| acc.mul(&UniPoly::linear_root(a).pow(*m)))
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }
}

impl fmt::Display for MinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .roots
            .iter()
            .map(|(a, m)| {
                let base = format!("(x - {})", fmt_rational(a));
                if *m == 1 {
                    base
                } else {
                    format!("{base}^{m}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn min_poly(k: usize, delta: &Rational, sig: &SpaceSignature) -> MinPoly {
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    for s in 0..=k / 2 {
        let a = alpha_value(sig, k, s, delta);
        match roots.iter_mut().find(|(r, _)| *r == a) {
            Some((_, m)) => *m += 1,
            None => roots.push((a, 1)),
        }
    }
    MinPoly { k, roots }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinPolyCheck {
    pub k: usize,
    pub dimension: usize,
    pub annihilates: bool,
    pub minimal: bool,
    /// Roots whose factor can be dropped while still annihilating `C`.
    #[serde(serialize_with = "ser_rationals")]
    pub removable: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(fmt_rational))
}

/// Checks the minimal polynomial against the matrix of `C` (computed in the
/// given mode) on constant-coefficient symbols of degree `k`.
pub fn verify_min_poly(
    k: usize,
    weights: &Weights,
    data: &CasimirData,
    mode: CasimirMode,
) -> Result<(MinPoly, MinPolyCheck)> {
    let sig = data.sig;
    let mp = min_poly(k, &weights.delta, &sig);
    let (dom, _, c) = constant_matrix(sig, weights, k, k, |s| data.casimir_c(s, mode))?;
    let annihilates = c.eval_poly(&mp.poly()).is_zero();
    let removable: Vec<Rational> = mp
        .roots
        .iter()
        .filter(|(a, _)| {
            let divisor = mp.poly().div_rem(&UniPoly::linear_root(a)).0;
            c.eval_poly(&divisor).is_zero()
        })
        .map(|(a, _)| a.clone())
        .collect();
    Ok((
        mp,
        MinPolyCheck {
            k,
            dimension: dom.len(),
            annihilates,
            minimal: removable.is_empty(),
            removable,
        },
    ))
}

/// Generalized-eigenspace projector, as a polynomial in `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    pub alpha: Rational,
    pub multiplicity: usize,
    pub poly: UniPoly,
}

/// Partial fractions of `1/q` for the minimal polynomial `q` of `C|_{S^k_δ}`.
pub fn projectors(k: usize, delta: &Rational, sig: &SpaceSignature) -> Vec<Projector> {
    let mp = min_poly(k, delta, sig);
    let q = mp.poly();
    mp.roots
        .iter()
        .map(|(a, m)| {
            let local = UniPoly::linear_root(a).pow(*m);
            let rest = q.div_rem(&local).0;
            let inv = rest.inverse_mod(&local).expect("distinct roots");
            Projector {
                alpha: a.clone(),
                multiplicity: *m,
                poly: rest.mul(&inv).div_rem(&q).1,
            }
        })
        .collect()
}

/// `p(C) S` with `C` in closed form.
pub fn apply_poly_in_c(p: &UniPoly, s: &SymbolField) -> SymbolField {
    let mut acc = SymbolField::zero(s.signature(), s.weights().clone());
    for c in p.coeffs().iter().rev() {
        acc = casimir_closed(&acc).add(&s.scale(c));
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResonanceCheck {
    pub resonant: bool,
    pub witnesses: Vec<ResonanceWitness>,
}

/// Direct test: `α_{k,i,δ} = α_{l,j,δ}` for some `l < k ≤ k_max`.
pub fn is_resonant(delta: &Rational, k_max: usize, sig: &SpaceSignature) -> ResonanceCheck {
    let mut witnesses = Vec::new();
    for k in 1..=k_max {
        for l in 0..k {
            for i in 0..=k / 2 {
                for j in 0..=l / 2 {
                    if alpha_value(sig, k, i, delta) == alpha_value(sig, l, j, delta) {
                        witnesses.push(ResonanceWitness { k, l, i, j });
                    }
                }
            }
        }
    }
    ResonanceCheck {
        resonant: !witnesses.is_empty(),
        witnesses,
    }
}

/// Solution set in `δ` of `α_{k,s,δ} = α_{l,t,δ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaSet {
    None,
    Single(Rational),
    All,
}

/// Solves the α-equality exactly. The difference is affine in `δ`, so two
/// evaluations determine it.
pub fn resonance_direct(k: usize, l: usize, s: usize, t: usize, sig: &SpaceSignature) -> DeltaSet {
    let diff = |d: &Rational| alpha_value(sig, k, s, d) - alpha_value(sig, l, t, d);
    let c0 = diff(&Rational::zero());
    let slope = diff(&Rational::one()) - &c0;
    if slope.is_zero() {
        if c0.is_zero() {
            DeltaSet::All
        } else {
            DeltaSet::None
        }
    } else {
        DeltaSet::Single(-c0 / slope)
    }
}

/// The printed closed form
/// `(k+l+d-1+s+t)/d + (t-s)(d-2-2(t+s)+k+l)/(d(k-l))`.
pub fn resonance_closed_form(k: usize, l: usize, s: usize, t: usize, sig: &SpaceSignature) -> Result<Rational> {
    let d = sig.superdim();
    if d == 0 {
        return Err(Error::ZeroSuperdimension);
    }
    if k <= l || 2 * s > k || 2 * t > l {
        return Err(Error::HarmonicIndex { k, s });
    }
    let (k, l, s, t) = (k as i64, l as i64, s as i64, t as i64);
    Ok(rat(k + l + d - 1 + s + t, d) + rat((t - s) * (d - 2 - 2 * (t + s) + k + l), d * (k - l)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceRow {
    pub k: usize,
    pub l: usize,
    pub s: usize,
    pub t: usize,
    pub direct: DeltaSet,
    pub closed_form: Option<Rational>,
}

impl ResonanceRow {
    /// Whether the printed formula reproduces the direct value.
    pub fn agrees(&self) -> bool {
        match (&self.direct, &self.closed_form) {
            (DeltaSet::Single(a), Some(b)) => a == b,
            (DeltaSet::All | DeltaSet::None, None) => true,
            _ => false,
        }
    }

    pub fn to_json(&self) -> Value {
        let direct = match &self.direct {
            DeltaSet::None => Value::Null,
            DeltaSet::Single(x) => json!(fmt_rational(x)),
            DeltaSet::All => json!("all"),
        };
        json!({
            "k": self.k, "l": self.l, "s": self.s, "t": self.t,
            "direct": direct,
            "closedForm": self.closed_form.as_ref().map(fmt_rational),
            "agrees": self.agrees(),
        })
    }
}

/// Every `(k,l,s,t)` with `l < k ≤ k_max`, with both resonance computations.
pub fn resonance_table(sig: &SpaceSignature, k_max: usize) -> Vec<ResonanceRow> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        for l in 0..k {
            for s in 0..=k / 2 {
                for t in 0..=l / 2 {
                    out.push(ResonanceRow {
                        k,
                        l,
                        s,
                        t,
                        direct: resonance_direct(k, l, s, t, sig),
                        closed_form: resonance_closed_form(k, l, s, t, sig).ok(),
                    });
                }
            }
        }
    }
    out
}

/// Distinct resonant values `δ` up to `k_max`, increasing.
pub fn resonant_values(sig: &SpaceSignature, k_max: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> = resonance_table(sig, k_max)
        .into_iter()
        .filter_map(|r| match r.direct {
            DeltaSet::Single(x) => Some(x),
            _ => None,
        })
        .collect();
    v.sort();
    v.dedup();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Equation {
    /// `(C-α) S_{k-l} = -N S_{k-l+1}`.
    Eigen,
    /// `(C-α)² S_{k-l} = -(CN + NC - 2αN) S_{k-l+1} - N² S_{k-l+2}`.
    Generalized,
    /// A closed-form map (superdimension zero).
    Explicit,
}

#[derive(Clone, Debug)]
pub struct QuantizeOptions {
    pub degree_cap: usize,
    /// Use the generalized equation even on true eigenvectors.
    pub force_generalized: bool,
    /// Process the generalized eigencomponents in reverse order.
    pub reverse_components: bool,
}

impl Default for QuantizeOptions {
    fn default() -> Self {
        Self {
            degree_cap: 4,
            force_generalized: false,
            reverse_components: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub multiplicity: usize,
    pub equation: Equation,
}

#[derive(Clone, Debug)]
pub struct QuantizationResult {
    pub input: SymbolField,
    /// `S_k + S_{k-1} + ⋯ + S_0`.
    pub lift: SymbolField,
    pub operator: DiffOperator,
    pub components: Vec<ComponentReport>,
    /// Per level `(degree, largest |coefficient| of the equation residual)`.
    pub residuals: Vec<(usize, Rational)>,
    pub witnesses: Vec<ResonanceWitness>,
}

impl QuantizationResult {
    pub fn residuals_vanish(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn to_json(&self) -> Value {
        let lift: Vec<Value> = self
            .lift
            .degrees()
            .into_iter()
            .rev()
            .map(|k| json!({"degree": k, "symbol": self.lift.part(k).to_json()}))
            .collect();
        json!({
            "input": self.input.to_json(),
            "lift": lift,
            "operator": self.operator.to_json(),
            "components": self.components,
            "residuals": self.residuals.iter().map(|(k, r)| json!({"degree": k, "norm": fmt_rational(r)})).collect::<Vec<_>>(),
            "resonanceWitnesses": self.witnesses,
        })
    }
}

fn max_abs(s: &SymbolField) -> Rational {
    s.terms().map(|(_, f)| f.max_abs_coefficient()).max().unwrap_or_else(Rational::zero)
}

fn c_minus(alpha: &Rational, s: &SymbolField) -> SymbolField {
    casimir_closed(s).sub(&s.scale(alpha))
}

/// The quantization of a homogeneous symbol by the recursive construction.
pub fn quantize(s: &SymbolField, options: &QuantizeOptions) -> Result<QuantizationResult> {
    let sig = s.signature();
    let w = s.weights().clone();
    let k = match s.degrees().as_slice() {
        [] => 0,
        [k] => *k,
        _ => return Err(Error::NotHomogeneous),
    };
    if k > options.degree_cap {
        return Err(Error::DegreeCap {
            degree: k,
            cap: options.degree_cap,
        });
    }
    if sig.superdim() == 0 {
        let map = match k {
            0 | 1 => quantize_d0_deg1(&Rational::zero(), &sig)?,
            2 => quantize_d0_deg2(&sig)?,
            _ => return Err(Error::ZeroSuperdimension),
        };
        let lift = map.lift(s);
        return Ok(QuantizationResult {
            input: s.clone(),
            operator: q_aff(&lift),
            lift,
            components: vec![],
            residuals: vec![],
            witnesses: vec![],
        });
    }
    let check = is_resonant(&w.delta, k, &sig);
    if check.resonant {
        return Err(Error::resonant(&w.delta, k, check.witnesses));
    }

    let mut projs = projectors(k, &w.delta, &sig);
    if options.reverse_components {
        projs.reverse();
    }
    let mut lift = SymbolField::zero(sig, w.clone());
    let mut components = Vec::new();
    let mut residuals: Vec<(usize, Rational)> = Vec::new();
    for p in &projs {
        let top = apply_poly_in_c(&p.poly, s);
        if top.is_zero() {
            continue;
        }
        let alpha = &p.alpha;
        let eigen = !options.force_generalized && (p.multiplicity == 1 || c_minus(alpha, &top).is_zero());
        let m = if eigen { 1 } else { 2 };
        let local = UniPoly::linear_root(alpha).pow(m);
        // levels[j] = S_{k-j}
        let mut levels: Vec<SymbolField> = vec![top.clone()];
        for l in 1..=k {
            let deg = k - l;
            let prev = &levels[l - 1];
            let rhs = if eigen {
                op_n(prev).scale(&-Rational::one())
            } else {
                let np = op_n(prev);
                let mut r = casimir_closed(&np)
                    .add(&op_n(&casimir_closed(prev)))
                    .sub(&np.scale(&(int(2) * alpha)));
                if l >= 2 {
                    r.add_assign(&op_n(&op_n(&levels[l - 2])));
                }
                r.scale(&-Rational::one())
            };
            let q = min_poly(deg, &w.delta, &sig).poly();
            let inv = local.inverse_mod(&q).ok_or_else(|| {
                Error::resonant(&w.delta, k, is_resonant(&w.delta, k, &sig).witnesses)
            })?;
            let sol = apply_poly_in_c(&inv, &rhs);
            let residual = apply_poly_in_c(&local, &sol).sub(&rhs);
            residuals.push((deg, max_abs(&residual)));
            levels.push(sol);
        }
        for lv in &levels {
            lift.add_assign(lv);
        }
        components.push(ComponentReport {
            alpha: alpha.clone(),
            multiplicity: p.multiplicity,
            equation: if eigen { Equation::Eigen } else { Equation::Generalized },
        });
    }
    Ok(QuantizationResult {
        input: s.clone(),
        operator: q_aff(&lift),
        lift,
        components,
        residuals,
        witnesses: check.witnesses,
    })
}

/// Building blocks of the explicit low-degree maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Correction {
    Id,
    Div,
    G0,
    Delta0,
    Div2,
}

impl Correction {
    pub fn apply(self, s: &SymbolField) -> SymbolField {
        match self {
            Correction::Id => s.clone(),
            Correction::Div => sym_div(s),
            Correction::G0 => op_g0(s),
            Correction::Delta0 => op_delta0(s),
            Correction::Div2 => sym_div(&sym_div(s)),
        }
    }
}

/// `Q_Aff ∘ Σ c_i A_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitMap {
    pub terms: Vec<(Correction, Rational)>,
}

impl ExplicitMap {
    pub fn lift(&self, s: &SymbolField) -> SymbolField {
        let mut out = SymbolField::zero(s.signature(), s.weights().clone());
        for (c, a) in &self.terms {
            if !a.is_zero() {
                out.add_assign(&c.apply(s).scale(a));
            }
        }
        out
    }

    pub fn quantize(&self, s: &SymbolField) -> DiffOperator {
        q_aff(&self.lift(s))
    }

    pub fn coefficient(&self, c: Correction) -> Rational {
        self.terms
            .iter()
            .filter(|(x, _)| *x == c)
            .map(|(_, a)| a.clone())
            .fold(Rational::zero(), |acc, a| acc + a)
    }
}

fn nonzero(x: Rational, pole: &'static str) -> Result<Rational> {
    if x.is_zero() {
        Err(Error::Pole { pole })
    } else {
        Ok(x)
    }
}

/// `Q_Aff ∘ (Id + λ/(1-δ) div)` on `S^1_δ`, `d ≠ 0`.
pub fn quantize_deg1_explicit(weights: &Weights, sig: &SpaceSignature) -> Result<ExplicitMap> {
    if sig.superdim() == 0 {
        return Err(Error::ZeroSuperdimension);
    }
    let c = if weights.lambda.is_zero() {
        Rational::zero()
    } else {
        &weights.lambda / nonzero(Rational::one() - &weights.delta, "1 - delta")?
    };
    Ok(ExplicitMap {
        terms: vec![(Correction::Id, Rational::one()), (Correction::Div, c)],
    })
}

/// The printed coefficients `a1..a4` of the degree-two map.
pub fn printed_coefficients(weights: &Weights, sig: &SpaceSignature) -> Result<[Rational; 4]> {
    let d = int(sig.superdim());
    if d.is_zero() {
        return Err(Error::ZeroSuperdimension);
    }
    let (l, de) = (&weights.lambda, &weights.delta);
    let one = Rational::one();
    let two = int(2);
    let p1 = nonzero(&d * de - &two, "d*delta - 2")?;
    let p2 = nonzero(&d * (de - &one) - &two, "d*(delta-1) - 2")?;
    let p3 = nonzero(&d * (de - &one) - &one, "d*(delta-1) - 1")?;
    let p4 = nonzero(&d * (&two * de - &one) - &two, "d*(2*delta-1) - 2")?;
    let a1 = &d * (&two * l + de - &one) / (&two * &p1 * &p2);
    let a2 = -(l * &d + &one) / &p2;
    let inner = &two + (int(4) * l - &one) * &d
        + (-(de * de) - int(3) * l * de + &two * l + &two * de - &one) * &d * &d;
    let a3 = &d * l * inner / (&two * &p3 * &p4 * &p1 * &p2);
    let a4 = &d * l * (&d * l + &one) / (&two * &p3 * &p2);
    Ok([a1, a2, a3, a4])
}

/// `Q_Aff ∘ (Id + a1 G0 + a2 div + a3 Δ0 + a4 div²)` with the printed coefficients.
pub fn quantize_deg2_explicit(weights: &Weights, sig: &SpaceSignature) -> Result<ExplicitMap> {
    let [a1, a2, a3, a4] = printed_coefficients(weights, sig)?;
    Ok(ExplicitMap {
        terms: vec![
            (Correction::Id, Rational::one()),
            (Correction::G0, a1),
            (Correction::Div, a2),
            (Correction::Delta0, a3),
            (Correction::Div2, a4),
        ],
    })
}

/// `Q_Aff ∘ (Id + t div)` on `S^1_δ`, `d = 0`.
pub fn quantize_d0_deg1(t: &Rational, sig: &SpaceSignature) -> Result<ExplicitMap> {
    if sig.superdim() != 0 {
        return Err(Error::NonZeroSuperdimension(sig.superdim()));
    }
    Ok(ExplicitMap {
        terms: vec![(Correction::Id, Rational::one()), (Correction::Div, t.clone())],
    })
}

/// `Q_Aff ∘ (Id + ½ div)` on `S^2_δ`, `d = 0`.
pub fn quantize_d0_deg2(sig: &SpaceSignature) -> Result<ExplicitMap> {
    quantize_d0_deg1(&rat(1, 2), sig)
}

/// Fits `Q(S) - S = a1 G0 S + a2 div S + a3 Δ0 S + a4 div² S` over the given
/// degree-two symbols, using the recursive construction for `Q`. Returns the
/// coefficients and whether they are uniquely determined.
pub fn fit_degree2_coefficients(symbols: &[SymbolField]) -> Result<([Rational; 4], bool)> {
    let basis = [Correction::G0, Correction::Div, Correction::Delta0, Correction::Div2];
    let mut rows: Vec<[Rational; 4]> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for s in symbols {
        let q = quantize(s, &QuantizeOptions::default())?;
        let target = q.lift.sub(s);
        let images: Vec<SymbolField> = basis.iter().map(|c| c.apply(s)).collect();
        let mut keys = std::collections::BTreeSet::new();
        for t in images.iter().chain(std::iter::once(&target)) {
            for (m, f) in t.terms() {
                for (mm, _) in f.terms() {
                    keys.insert((m.clone(), mm.clone()));
                }
            }
        }
        for (m, mm) in keys {
            let row = [0, 1, 2, 3].map(|i| images[i].coefficient(&m).coefficient(&mm));
            rows.push(row);
            rhs.push(target.coefficient(&m).coefficient(&mm));
        }
    }
    let mut a = QMatrix::zeros(rows.len(), 4);
    for (i, r) in rows.iter().enumerate() {
        for j in 0..4 {
            a[(i, j)] = r[j].clone();
        }
    }
    let (x, unique) = a.solve(&rhs)?;
    Ok(([x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()], unique))
}

/// One failed equivariance comparison.
#[derive(Clone, Debug)]
pub struct EquivarianceFailure {
    pub generator: String,
    pub symbol: SymbolField,
    pub lhs: DiffOperator,
    pub rhs: DiffOperator,
}

/// Checks `L_{X^h}(Q(S)) = Q(L_{X^h} S)` for every generator and symbol.
pub fn check_equivariance(
    family: &[(String, VectorField)],
    symbols: &[SymbolField],
    q: impl Fn(&SymbolField) -> Result<DiffOperator> + Sync,
) -> Result<Vec<EquivarianceFailure>> {
    let cells: Vec<(usize, usize)> = (0..symbols.len())
        .flat_map(|i| (0..family.len()).map(move |j| (i, j)))
        .collect();
    let results = crate::par::map(&cells, |&(i, j)| -> Result<Option<EquivarianceFailure>> {
        let (name, x) = &family[j];
        let s = &symbols[i];
        let lhs = lie_dop(x, &q(s)?);
        let rhs = q(&lie_symbol(x, s))?;
        Ok((lhs != rhs).then(|| EquivarianceFailure {
            generator: name.clone(),
            symbol: s.clone(),
            lhs,
            rhs,
        }))
    });
    let mut out = Vec::new();
    for r in results {
        if let Some(f) = r? {
            out.push(f);
        }
    }
    Ok(out)
}

/// The realized generator family as `(name, field)` pairs.
pub fn generator_fields(sig: SpaceSignature) -> Result<Vec<(String, VectorField)>> {
    Ok(realized_family(sig)?.into_iter().map(|(n, _, x)| (n, x)).collect())
}

/// Symbols `y^a ⊗ e^b` of fiber degree `k` with `|a| ≤ poly_degree`.
pub fn symbol_basis(sig: SpaceSignature, weights: &Weights, k: usize, poly_degree: usize) -> Vec<SymbolField> {
    let coeffs = crate::superalg::monomials_up_to(&sig, poly_degree);
    let mut out = Vec::new();
    for m in crate::superalg::monomials_of_degree(&sig, k) {
        for c in &coeffs {
            out.push(SymbolField::from_term(
                sig,
                weights.clone(),
                m.clone(),
                SuperPolynomial::monomial(sig, c.clone(), Rational::one()),
            ));
        }
    }
    out
}

/// Which perturbations `Id + ½div + t·A` of the `d = 0` degree-two map stay equivariant.
pub fn d0_perturbation_scan(
    sig: SpaceSignature,
    weights: &Weights,
    poly_degree: usize,
) -> Result<Vec<(Correction, Rational, bool)>> {
    let base = quantize_d0_deg2(&sig)?;
    let fam = generator_fields(sig)?;
    let symbols = symbol_basis(sig, weights, 2, poly_degree);
    let mut out = Vec::new();
    for corr in [Correction::Div, Correction::G0, Correction::Delta0, Correction::Div2] {
        for t in [rat(1, 2), int(-1)] {
            let mut map = base.clone();
            map.terms.push((corr, t.clone()));
            let fails = check_equivariance(&fam, &symbols, |s| Ok(map.quantize(s)))?;
            out.push((corr, t, fails.is_empty()));
        }
    }
    Ok(out)
}

/// `σ_k(Q(S)) = S`.
pub fn preserves_principal_symbol(result: &QuantizationResult) -> Result<bool> {
    let k = result.input.homogeneous_degree().unwrap_or(0);
    Ok(principal_symbol(&result.operator, k)? == result.input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structops::{op_r, op_t};

    fn sig(p: usize, q: usize, r: usize) -> SpaceSignature {
        SpaceSignature::new(p, q, r)
    }

    #[test]
    fn spectrum_examples() {
        for sg in [sig(1, 0, 1), sig(2, 0, 1), sig(3, 1, 1)] {
            for k in 0..6 {
                assert!(b_ks(&sg, k, 0).is_zero());
            }
        }
        let d0 = sig(2, 0, 1);
        for delta in [rat(1, 3), int(7), rat(-2, 5)] {
            assert_eq!(alpha_value(&d0, 2, 0, &delta), int(-4));
            assert_eq!(alpha_value(&d0, 2, 1, &delta), int(-4));
            assert_eq!(alpha_value(&d0, 1, 0, &delta), int(0));
            assert_eq!(alpha_value(&d0, 0, 0, &delta), int(0));
            assert_eq!(min_poly(2, &delta, &d0).to_string(), "(x - -4/1)^2");
        }
        assert!(matches!(alpha(2, 2, &rat(1, 3), &d0), Err(Error::HarmonicIndex { .. })));
        assert_eq!(min_poly(1, &rat(1, 3), &sig(1, 0, 1)).degree(), 1);
    }

    #[test]
    fn root_coincidence_condition() {
        for (p, q, r) in [(1, 0, 1), (2, 0, 1), (1, 0, 2), (2, 0, 3), (1, 1, 3)] {
            let sg = sig(p, q, r);
            let d = sg.superdim();
            for k in 0..=6 {
                for s in 0..=k / 2 {
                    for s2 in 0..=k / 2 {
                        let eq = alpha_value(&sg, k, s, &rat(1, 3)) == alpha_value(&sg, k, s2, &rat(1, 3));
                        let cond = s == s2 || 2 * (s + s2) as i64 == d + 2 * k as i64 - 2;
                        assert_eq!(eq, cond, "{sg} k={k} s={s} s'={s2}");
                    }
                }
                assert!(min_poly(k, &rat(1, 3), &sg).roots.iter().all(|(_, m)| *m <= 2));
            }
        }
    }

    #[test]
    fn min_poly_matches_the_casimir_matrix() {
        for sg in [sig(1, 0, 1), sig(2, 0, 1), sig(1, 0, 2)] {
            let data = CasimirData::new(sg).unwrap();
            let w = Weights::new(rat(1, 2), rat(1, 3));
            for k in 0..=3 {
                let (_, check) = verify_min_poly(k, &w, &data, CasimirMode::ClosedForm).unwrap();
                assert!(check.annihilates && check.minimal, "{sg} k={k}");
            }
        }
    }

    #[test]
    fn small_fiber_spaces_lose_the_traceless_root() {
        // In R^{1|2}, T: S^4 -> S^2 is injective, so α_{4,0} is not an eigenvalue.
        let sg = sig(1, 0, 1);
        let w = Weights::new(rat(1, 2), rat(1, 3));
        let (_, _, t) = constant_matrix(sg, &w, 4, 2, op_t).unwrap();
        assert_eq!(t.rank(), t.cols());
        let data = CasimirData::new(sg).unwrap();
        let (_, check) = verify_min_poly(4, &w, &data, CasimirMode::DualBasis).unwrap();
        assert!(check.annihilates);
        assert!(!check.minimal);
        assert_eq!(check.removable, vec![alpha_value(&sg, 4, 0, &w.delta)]);
    }

    #[test]
    fn projectors_are_idempotents() {
        for sg in [sig(2, 0, 1), sig(1, 0, 1), sig(3, 0, 0)] {
            let w = Weights::new(rat(1, 2), rat(1, 3));
            for k in 0..=4 {
                let ps = projectors(k, &w.delta, &sg);
                let (_, _, c) = constant_matrix(sg, &w, k, k, casimir_closed).unwrap();
                let n = c.rows();
                let mut sum = QMatrix::zeros(n, n);
                let mats: Vec<QMatrix> = ps.iter().map(|p| c.eval_poly(&p.poly)).collect();
                for (i, p) in ps.iter().enumerate() {
                    sum.add_scaled(&mats[i], &int(1));
                    assert_eq!(mats[i].mul(&mats[i]), mats[i]);
                    let kill = UniPoly::linear_root(&p.alpha).pow(p.multiplicity);
                    assert!(c.eval_poly(&kill).mul(&mats[i]).is_zero());
                    for (j, _) in ps.iter().enumerate() {
                        if i != j {
                            assert!(mats[i].mul(&mats[j]).is_zero());
                        }
                    }
                }
                assert_eq!(sum, QMatrix::identity(n));
                if k < 2 {
                    assert_eq!(ps.len(), 1);
                    assert_eq!(ps[0].poly, UniPoly::constant(int(1)));
                }
            }
        }
    }

    #[test]
    fn degree_two_harmonic_projection() {
        let sg = sig(2, 1, 0);
        let w = Weights::new(rat(1, 2), rat(1, 3));
        let d = int(sg.superdim());
        let ps = projectors(2, &w.delta, &sg);
        let a21 = alpha_value(&sg, 2, 1, &w.delta);
        let p21 = ps.iter().find(|p| p.alpha == a21).unwrap();
        for s in symbol_basis(sg, &w, 2, 1) {
            let expect = op_r(&op_t(&s)).scale(&(Rational::one() / (int(2) * &d)));
            assert_eq!(apply_poly_in_c(&p21.poly, &s), expect);
        }
    }

    #[test]
    fn resonance_examples() {
        for sg in [sig(1, 0, 0), sig(2, 0, 1), sig(3, 1, 0), sig(1, 0, 1)] {
            let d = sg.superdim();
            let r = is_resonant(&int(1), 1, &sg);
            assert!(r.resonant);
            assert!(r.witnesses.contains(&ResonanceWitness { k: 1, l: 0, i: 0, j: 0 }));
            if d == 0 {
                assert!(is_resonant(&rat(5, 7), 1, &sg).resonant);
                assert!(matches!(resonance_closed_form(1, 0, 0, 0, &sg), Err(Error::ZeroSuperdimension)));
                continue;
            }
            assert_eq!(resonance_closed_form(1, 0, 0, 0, &sg).unwrap(), int(1));
            assert_eq!(resonance_closed_form(2, 1, 0, 0, &sg).unwrap(), rat(d + 2, d));
            assert_eq!(resonance_closed_form(2, 1, 1, 0, &sg).unwrap(), rat(4, d));
            assert_eq!(resonance_direct(2, 1, 1, 0, &sg), DeltaSet::Single(rat(2, d)));
            assert_eq!(resonance_direct(2, 0, 0, 0, &sg), DeltaSet::Single(rat(d + 1, d)));
            assert_eq!(resonance_direct(2, 0, 1, 0, &sg), DeltaSet::Single(rat(d + 2, 2 * d)));
        }
        let d1 = sig(1, 0, 0);
        assert!(!is_resonant(&rat(1, 3), 3, &d1).resonant);
        let vals = resonant_values(&d1, 2);
        assert_eq!(vals, vec![int(1), rat(3, 2), int(2), int(3)]);
    }

    #[test]
    fn printed_resonance_formula_against_direct_values() {
        for sg in [sig(1, 0, 0), sig(3, 0, 1), sig(1, 0, 1), sig(2, 2, 0)] {
            let d = sg.superdim();
            for row in resonance_table(&sg, 4) {
                if row.s == 0 && row.t == 0 {
                    assert!(row.agrees(), "{row:?}");
                }
                if row.s == row.t {
                    let (k, l, s) = (row.k as i64, row.l as i64, row.s as i64);
                    assert_eq!(row.direct, DeltaSet::Single(rat(k + l + d - 1 - 2 * s, d)));
                    assert_eq!(row.agrees(), s == 0);
                }
            }
        }
    }

    #[test]
    fn degree_one_matches_explicit_formula() {
        for sg in [sig(1, 0, 1), sig(2, 1, 0), sig(1, 1, 2)] {
            let w = Weights::new(rat(1, 2), rat(1, 3));
            let map = quantize_deg1_explicit(&w, &sg).unwrap();
            assert_eq!(map.coefficient(Correction::Div), rat(3, 4));
            for s in symbol_basis(sg, &w, 1, 2) {
                let q = quantize(&s, &QuantizeOptions::default()).unwrap();
                assert!(q.residuals_vanish());
                assert!(preserves_principal_symbol(&q).unwrap());
                assert_eq!(q.operator, map.quantize(&s));
            }
        }
        let w = Weights::new(rat(1, 2), int(1));
        let s = symbol_basis(sig(1, 0, 1), &w, 1, 1).pop().unwrap();
        assert!(matches!(quantize(&s, &QuantizeOptions::default()), Err(Error::Resonant { .. })));
        assert!(matches!(quantize_deg1_explicit(&w, &sig(1, 0, 1)), Err(Error::Pole { .. })));
        let w0 = Weights::new(int(0), int(1));
        assert_eq!(quantize_deg1_explicit(&w0, &sig(1, 0, 1)).unwrap().coefficient(Correction::Div), int(0));
    }

    #[test]
    fn quantization_is_equivariant() {
        for sg in [sig(1, 0, 1), sig(2, 1, 0)] {
            let w = Weights::new(rat(1, 2), rat(1, 3));
            let fam = generator_fields(sg).unwrap();
            for k in 0..=2 {
                let symbols: Vec<SymbolField> = symbol_basis(sg, &w, k, 1);
                let fails = check_equivariance(&fam, &symbols, |s| Ok(quantize(s, &QuantizeOptions::default())?.operator)).unwrap();
                assert!(fails.is_empty(), "{sg} k={k}: {} failures", fails.len());
            }
        }
    }

    #[test]
    fn lift_is_unique_and_equations_agree() {
        let sg = sig(1, 0, 2); // d = -3
        let w = Weights::new(rat(1, 2), rat(1, 7));
        for s in symbol_basis(sg, &w, 2, 1).iter().step_by(3) {
            let a = quantize(s, &QuantizeOptions::default()).unwrap();
            let b = quantize(
                s,
                &QuantizeOptions {
                    reverse_components: true,
                    ..Default::default()
                },
            )
            .unwrap();
            let c = quantize(
                s,
                &QuantizeOptions {
                    force_generalized: true,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(a.operator, b.operator);
            assert_eq!(a.operator, c.operator);
            assert!(c.residuals_vanish());
        }
    }

    #[test]
    fn generalized_eigenvectors_when_d_is_negative_even() {
        // d = -2: roots of C on S^4 coincide for s + s' = 2
        let sg = sig(1, 1, 2);
        let w = Weights::new(rat(1, 2), rat(1, 3));
        let mp = min_poly(4, &w.delta, &sg);
        assert!(mp.roots.iter().any(|(_, m)| *m == 2));
        let s = symbol_basis(sg, &w, 2, 0);
        let mp2 = min_poly(2, &w.delta, &sg);
        assert_eq!(mp2.degree(), 2);
        for x in s.iter().step_by(5) {
            let q = quantize(x, &QuantizeOptions::default()).unwrap();
            assert!(q.residuals_vanish());
        }
    }

    #[test]
    fn d0_maps() {
        let sg = sig(2, 0, 1);
        assert!(matches!(quantize_d0_deg1(&int(1), &sig(1, 0, 1)), Err(Error::NonZeroSuperdimension(-1))));
        let w = Weights::new(rat(1, 2), rat(2, 3));
        let fam = generator_fields(sg).unwrap();
        for t in [int(0), rat(1, 2), int(-3)] {
            let map = quantize_d0_deg1(&t, &sg).unwrap();
            let fails = check_equivariance(&fam, &symbol_basis(sg, &w, 1, 2), |s| Ok(map.quantize(s))).unwrap();
            assert!(fails.is_empty());
        }
        let map = quantize_d0_deg2(&sg).unwrap();
        let fails = check_equivariance(&fam, &symbol_basis(sg, &w, 2, 1), |s| Ok(map.quantize(s))).unwrap();
        assert!(fails.is_empty());
    }

    #[test]
    fn generic_construction_reproduces_printed_degree_two_map() {
        for (sg, w) in [
            (sig(3, 0, 1), Weights::new(rat(1, 2), rat(1, 3))),
            (sig(2, 0, 2), Weights::new(rat(1, 2), rat(1, 3))),
            (sig(3, 0, 0), Weights::new(rat(1, 3), rat(2, 5))),
        ] {
            let (fit, unique) = fit_degree2_coefficients(&symbol_basis(sg, &w, 2, 2)).unwrap();
            assert!(unique);
            assert_eq!(fit, printed_coefficients(&w, &sg).unwrap());
        }
        let sg = sig(1, 0, 0);
        assert!(matches!(
            printed_coefficients(&Weights::new(rat(1, 2), int(2)), &sg),
            Err(Error::Pole { pole: "d*delta - 2" })
        ));
    }

    #[test]
    fn json_shape() {
        let sg = sig(1, 0, 1);
        let w = Weights::new(rat(1, 2), rat(1, 3));
        let s = symbol_basis(sg, &w, 2, 1).swap_remove(3);
        let q = quantize(&s, &QuantizeOptions::default()).unwrap();
        let v = q.to_json();
        assert_eq!(v["residuals"][0]["norm"], "0/1");
        assert_eq!(v["lift"][0]["degree"], 2);
        assert_eq!(DiffOperator::from_json(&v["operator"]).unwrap(), q.operator);
    }
}
