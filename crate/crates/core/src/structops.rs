//! Structural operators on weighted symbols: interior products, the trace `T`
//! and metric `R`, divergence/gradient/Laplacian, the map `γ`, the operator
//! `N`, and the Casimir operators of both symbol actions.

use std::fmt;
use std::io::Write;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geom::{fiber_derive, fiber_label, fiber_mul, lie_symbol, realize, realize_osp, SymbolField, VectorField, Weights};
use crate::linalg::QMatrix;
use crate::ospalg::{build_forms, dual_basis, flat, generator_o, sharp, unit_vector, GradedElement, GradedIndex};
use crate::rational::{fmt_rational, int, rat, sign, Rational};
use crate::superalg::{monomials_of_degree, Monomial, SpaceSignature, SuperPolynomial};
use crate::weyl::{lie_dop, q_aff, sigma_aff, DiffOperator};

fn covector_parity(sig: &SpaceSignature, xi: &[Rational]) -> Result<bool> {
    let mut seen = None;
    for (j, c) in xi.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match seen {
            None => seen = Some(sig.is_odd(j)),
            Some(o) if o != sig.is_odd(j) => return Err(Error::MixedParity("covector")),
            _ => {}
        }
    }
    Ok(seen.unwrap_or(false))
}

/// `i(ξ)`: the left fiber derivative `Σ ξ_j ∂_{e_j}`, an order-zero operator of parity `ξ̃`.
pub fn interior(xi: &[Rational], s: &SymbolField) -> Result<SymbolField> {
    let sig = s.signature();
    let odd = covector_parity(&sig, xi)?;
    Ok(s.fiber_map(odd, |v| {
        xi.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .filter_map(|(j, c)| fiber_derive(&sig, v, j).map(|(f, m)| (c * f, m)))
            .collect()
    }))
}

/// `i(ξ ∨ ξ') = i(ξ) ∘ i(ξ')`.
pub fn interior2(xi: &[Rational], xi2: &[Rational], s: &SymbolField) -> Result<SymbolField> {
    interior(xi, &interior(xi2, s)?)
}

/// `u ∨ S` for a homogeneous vector `u`.
pub fn vee(u: &[Rational], s: &SymbolField) -> Result<SymbolField> {
    let sig = s.signature();
    let odd = covector_parity(&sig, u)?;
    Ok(s.fiber_map(odd, |v| {
        u.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .filter_map(|(j, c)| fiber_mul(&sig, j, v).map(|(f, m)| (c * f, m)))
            .collect()
    }))
}

/// `T = Σ_j i(e_j^♭ ∨ ε^j)`.
pub fn op_t(s: &SymbolField) -> SymbolField {
    let sig = s.signature();
    let (_, g0) = build_forms(sig);
    let n = sig.dim();
    let mut out = SymbolField::zero(sig, s.weights().clone());
    for j in 0..n {
        let ej = unit_vector(n, j);
        let inner = interior(&ej, s).expect("unit covector");
        out.add_assign(&interior(&flat(&g0, &ej), &inner).expect("homogeneous"));
    }
    out
}

/// `T` by the explicit double sum over the factors `v_1 ∨ ⋯ ∨ v_k` of each monomial:
/// `2 Σ_{a<b} (-1)^{ṽ_a Σ_{a<c<b} ṽ_c} ω0(v_a,v_b) v_1∨⋯â⋯b̂⋯∨v_k`.
pub fn op_t_explicit(s: &SymbolField) -> SymbolField {
    let sig = s.signature();
    let (_, g0) = build_forms(sig);
    s.fiber_map(false, |v| {
        let list = v.factor_list(&sig);
        let mut out = Vec::new();
        for b in 0..list.len() {
            for a in 0..b {
                // ω0(e_{v_a}, e_{v_b})
                let w = &g0[(list[b], list[a])];
                if w.is_zero() {
                    continue;
                }
                let between = (a + 1..b).filter(|&c| sig.is_odd(list[c])).count();
                let sgn = sign(sig.is_odd(list[a]) && between % 2 == 1);
                let rest: Vec<usize> = list
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != a && c != b)
                    .map(|(_, &x)| x)
                    .collect();
                if let Some((neg, m)) = Monomial::from_factor_list(&sig, &rest) {
                    out.push((int(2) * w * sgn * sign(neg), m));
                }
            }
        }
        out
    })
}

/// `R = Σ_j e_j ∨ (ε^j)^♯ ∨ ·`.
pub fn op_r(s: &SymbolField) -> SymbolField {
    let sig = s.signature();
    let (_, g0) = build_forms(sig);
    let n = sig.dim();
    let mut out = SymbolField::zero(sig, s.weights().clone());
    for j in 0..n {
        let ej = unit_vector(n, j);
        let inner = vee(&sharp(&g0, &ej), s).expect("homogeneous");
        out.add_assign(&vee(&ej, &inner).expect("unit vector"));
    }
    out
}

/// `div S = Σ_j (-1)^{j̃} i(ε^j) ∂_{y^j} S`.
pub fn sym_div(s: &SymbolField) -> SymbolField {
    let sig = s.signature();
    let n = sig.dim();
    let mut out = SymbolField::zero(sig, s.weights().clone());
    for j in 0..n {
        let d = s.partial(j);
        if d.is_zero() {
            continue;
        }
        let t = interior(&unit_vector(n, j), &d).expect("unit covector");
        out.add_assign(&t.scale(&sign(sig.is_odd(j))));
    }
    out
}

/// `G S = Σ_j (-1)^{j̃} ε^{j♯} ∨ ∂_{y^j} S`.
pub fn sym_grad(s: &SymbolField) -> SymbolField {
    let sig = s.signature();
    let (_, g0) = build_forms(sig);
    let n = sig.dim();
    let mut out = SymbolField::zero(sig, s.weights().clone());
    for j in 0..n {
        let d = s.partial(j);
        if d.is_zero() {
            continue;
        }
        let t = vee(&sharp(&g0, &unit_vector(n, j)), &d).expect("homogeneous");
        out.add_assign(&t.scale(&sign(sig.is_odd(j))));
    }
    out
}

/// `Δ S = Σ_{i,j} ω0(e_i,e_j) ∂_{y^j} ∂_{y^i} S`.
pub fn sym_laplace(s: &SymbolField) -> SymbolField {
    let sig = s.signature();
    let (_, g0) = build_forms(sig);
    let n = sig.dim();
    let mut out = SymbolField::zero(sig, s.weights().clone());
    for i in 0..n {
        let di = s.partial(i);
        if di.is_zero() {
            continue;
        }
        for j in 0..n {
            let w = &g0[(j, i)];
            if !w.is_zero() {
                out.add_assign(&di.partial(j).scale(w));
            }
        }
    }
    out
}

/// `G0 = G ∘ T`.
pub fn op_g0(s: &SymbolField) -> SymbolField {
    sym_grad(&op_t(s))
}

/// `Δ0 = Δ ∘ T`.
pub fn op_delta0(s: &SymbolField) -> SymbolField {
    sym_laplace(&op_t(s))
}

/// `γ(h) = 𝓛_{X^h} - L_{X^h}`, computed through the operator action.
pub fn gamma_def(h: &GradedElement, s: &SymbolField) -> Result<SymbolField> {
    let x = realize(s.signature(), h)?;
    Ok(crate::weyl::curly_l(&x, s).sub(&lie_symbol(&x, s)))
}

/// `γ(h) = -(λd+k-1) i(h) + ½ h^♯ ∨ T` on each `S^k_δ`, for `h ∈ g_1`.
pub fn gamma_closed(h: &[Rational], s: &SymbolField) -> Result<SymbolField> {
    let sig = s.signature();
    let (_, g0) = build_forms(sig);
    let lambda_d = &s.weights().lambda * int(sig.superdim());
    let hs = sharp(&g0, h);
    let mut out = SymbolField::zero(sig, s.weights().clone());
    for k in s.degrees() {
        let part = s.part(k);
        let c = -(&lambda_d + int(k as i64 - 1));
        out.add_assign(&interior(h, &part)?.scale(&c));
        out.add_assign(&vee(&hs, &op_t(&part))?.scale(&rat(1, 2)));
    }
    Ok(out)
}

/// `N = -2 Σ_i (-1)^{ĩ} γ(ε^i) L_{X^{e_i}} = 2 Σ_i (-1)^{ĩ} γ(ε^i) ∂_{y^i}`.
pub fn op_n(s: &SymbolField) -> SymbolField {
    let sig = s.signature();
    let n = sig.dim();
    let mut out = SymbolField::zero(sig, s.weights().clone());
    for i in 0..n {
        let d = s.partial(i);
        if d.is_zero() {
            continue;
        }
        let g = gamma_closed(&unit_vector(n, i), &d).expect("unit covector");
        out.add_assign(&g.scale(&(int(2) * sign(sig.is_odd(i)))));
    }
    out
}

/// The scalar part `-[(-k+dδ)² - d(-2k+dδ) + k² - 2k]` of `C` on `S^k_δ`.
pub fn casimir_scalar(sig: &SpaceSignature, delta: &Rational, k: usize) -> Rational {
    let d = int(sig.superdim());
    let k = int(k as i64);
    let dd = &d * delta;
    let a = &dd - &k;
    -(&a * &a - &d * (&dd - int(2) * &k) + &k * &k - int(2) * &k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CasimirMode {
    /// `Σ β(u_i*) β(u_i)` over the Killing-dual basis.
    DualBasis,
    /// `-½ Σ_{i,j∈I} (-1)^{ĩ} β(O_j^i) β(O_i^j)`.
    FullSum,
    /// The graded expansion over `ε^i, e_i, 𝓔` and the `g_0` generators.
    Decomposed,
    /// Scalar plus `R ∘ T`.
    ClosedForm,
}

impl CasimirMode {
    pub const ALL: [CasimirMode; 4] = [
        CasimirMode::DualBasis,
        CasimirMode::FullSum,
        CasimirMode::Decomposed,
        CasimirMode::ClosedForm,
    ];
}

impl fmt::Display for CasimirMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CasimirMode::DualBasis => "dualBasis",
            CasimirMode::FullSum => "fullSum",
            CasimirMode::Decomposed => "decomposed",
            CasimirMode::ClosedForm => "closedForm",
        })
    }
}

/// A quadratic expression `Σ c β(A) β(B) + Σ c β(A)` in realized fields.
#[derive(Clone, Debug)]
pub struct CasimirExpr {
    pub quadratic: Vec<(Rational, VectorField, VectorField)>,
    pub linear: Vec<(Rational, VectorField)>,
}

impl CasimirExpr {
    fn apply<T: Clone>(&self, s: &T, beta: impl Fn(&VectorField, &T) -> T, add: impl Fn(&mut T, &T, &Rational), zero: T) -> T {
        let mut out = zero;
        for (c, a, b) in &self.quadratic {
            let inner = beta(b, s);
            add(&mut out, &beta(a, &inner), c);
        }
        for (c, a) in &self.linear {
            add(&mut out, &beta(a, s), c);
        }
        out
    }

    pub fn on_symbols(&self, s: &SymbolField) -> SymbolField {
        self.apply(
            s,
            lie_symbol,
            |acc, t, c| acc.add_assign(&t.scale(c)),
            SymbolField::zero(s.signature(), s.weights().clone()),
        )
    }

    pub fn on_operators(&self, d: &DiffOperator) -> DiffOperator {
        self.apply(
            d,
            lie_dop,
            |acc, t, c| acc.add_assign(&t.scale(c)),
            DiffOperator::zero(d.signature(), d.weights().clone()),
        )
    }
}

/// Realized Casimir expressions of `osp(p+1,q+1|2r)` for one signature.
#[derive(Clone, Debug)]
pub struct CasimirData {
    pub sig: SpaceSignature,
    pub dual: CasimirExpr,
    pub full: CasimirExpr,
    pub decomposed: CasimirExpr,
}

impl CasimirData {
    pub fn new(sig: SpaceSignature) -> Result<Self> {
        let mut dual = CasimirExpr {
            quadratic: Vec::new(),
            linear: Vec::new(),
        };
        for p in dual_basis(sig) {
            let b = realize_osp(&p.basis)?;
            let a = realize_osp(&p.dual)?;
            dual.quadratic.push((Rational::one(), a, b));
        }

        let mut full = CasimirExpr {
            quadratic: Vec::new(),
            linear: Vec::new(),
        };
        let all = GradedIndex::all(&sig);
        for &i in &all {
            for &j in &all {
                let oij = generator_o(sig, i, j);
                let oji = generator_o(sig, j, i);
                if oij.is_zero() || oji.is_zero() {
                    continue;
                }
                let c = -rat(1, 2) * sign(i.is_odd(&sig));
                full.quadratic.push((c, realize_osp(&oji)?, realize_osp(&oij)?));
            }
        }

        let n = sig.dim();
        let euler = realize(sig, &GradedElement::euler(sig))?;
        let mut decomposed = CasimirExpr {
            quadratic: vec![(-Rational::one(), euler.clone(), euler.clone())],
            linear: vec![(int(sig.superdim()), euler)],
        };
        for i in 0..n {
            let c = int(-2) * sign(sig.is_odd(i));
            decomposed.quadratic.push((
                c,
                realize(sig, &GradedElement::eps(&sig, i))?,
                realize(sig, &GradedElement::e(&sig, i))?,
            ));
        }
        for i in 0..n {
            for j in 0..n {
                let oij = GradedElement::o(sig, i, j);
                let oji = GradedElement::o(sig, j, i);
                if oij.is_zero() || oji.is_zero() {
                    continue;
                }
                let c = -rat(1, 2) * sign(sig.is_odd(i));
                decomposed.quadratic.push((c, realize(sig, &oji)?, realize(sig, &oij)?));
            }
        }
        Ok(Self {
            sig,
            dual,
            full,
            decomposed,
        })
    }

    /// The Casimir operator `C` of `(S_δ, L)`.
    pub fn casimir_c(&self, s: &SymbolField, mode: CasimirMode) -> SymbolField {
        match mode {
            CasimirMode::DualBasis => self.dual.on_symbols(s),
            CasimirMode::FullSum => self.full.on_symbols(s),
            CasimirMode::Decomposed => self.decomposed.on_symbols(s),
            CasimirMode::ClosedForm => casimir_closed(s),
        }
    }

    /// The Casimir operator `𝒞 = σ_Aff ∘ C_{D_{λ,μ}} ∘ Q_Aff`.
    pub fn casimir_curly(&self, s: &SymbolField) -> SymbolField {
        sigma_aff(&self.dual.on_operators(&q_aff(s)))
    }
}

/// `C = -[(-k+dδ)² - d(-2k+dδ) + k² - 2k] + R ∘ T` on each degree.
pub fn casimir_closed(s: &SymbolField) -> SymbolField {
    let sig = s.signature();
    let mut out = SymbolField::zero(sig, s.weights().clone());
    for k in s.degrees() {
        let part = s.part(k);
        out.add_assign(&part.scale(&casimir_scalar(&sig, &s.weights().delta, k)));
        out.add_assign(&op_r(&op_t(&part)));
    }
    out
}

/// The structural operators addressable by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructOp {
    Interior(Vec<Rational>),
    T,
    R,
    Div,
    Grad,
    Laplace,
    G0,
    Delta0,
    Gamma(Vec<Rational>),
    N,
    C,
    CurlyC,
}

impl StructOp {
    pub fn name(&self) -> &'static str {
        match self {
            StructOp::Interior(_) => "i",
            StructOp::T => "T",
            StructOp::R => "R",
            StructOp::Div => "div",
            StructOp::Grad => "G",
            StructOp::Laplace => "Delta",
            StructOp::G0 => "G0",
            StructOp::Delta0 => "Delta0",
            StructOp::Gamma(_) => "gamma",
            StructOp::N => "N",
            StructOp::C => "C",
            StructOp::CurlyC => "curlyC",
        }
    }

    /// Shift of the fiber degree; `C` and `𝒞` report 0 (`𝒞` also lowers the filtration).
    pub fn degree_shift(&self) -> i32 {
        match self {
            StructOp::T => -2,
            StructOp::R => 2,
            StructOp::Interior(_) | StructOp::Div | StructOp::Gamma(_) | StructOp::N => -1,
            StructOp::Grad => 1,
            StructOp::G0 => -1,
            StructOp::Laplace | StructOp::C | StructOp::CurlyC => 0,
            StructOp::Delta0 => -2,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "T" => StructOp::T,
            "R" => StructOp::R,
            "div" => StructOp::Div,
            "G" => StructOp::Grad,
            "Delta" => StructOp::Laplace,
            "G0" => StructOp::G0,
            "Delta0" => StructOp::Delta0,
            "N" => StructOp::N,
            "C" => StructOp::C,
            "curlyC" => StructOp::CurlyC,
            other => return Err(Error::Config(format!("unknown operator {other:?}"))),
        })
    }

    pub fn apply(&self, data: Option<&CasimirData>, s: &SymbolField) -> Result<SymbolField> {
        Ok(match self {
            StructOp::Interior(xi) => interior(xi, s)?,
            StructOp::T => op_t(s),
            StructOp::R => op_r(s),
            StructOp::Div => sym_div(s),
            StructOp::Grad => sym_grad(s),
            StructOp::Laplace => sym_laplace(s),
            StructOp::G0 => op_g0(s),
            StructOp::Delta0 => op_delta0(s),
            StructOp::Gamma(h) => gamma_closed(h, s)?,
            StructOp::N => op_n(s),
            StructOp::C => casimir_closed(s),
            StructOp::CurlyC => match data {
                Some(d) => d.casimir_curly(s),
                None => CasimirData::new(s.signature())?.casimir_curly(s),
            },
        })
    }
}

/// Matrix of a linear map `S^{k_in} → S^{k_out}` on constant-coefficient symbols,
/// in the basis of fiber monomials. Errors if an image leaves the target space.
pub fn constant_matrix(
    sig: SpaceSignature,
    weights: &Weights,
    k_in: usize,
    k_out: usize,
    op: impl Fn(&SymbolField) -> SymbolField,
) -> Result<(Vec<Monomial>, Vec<Monomial>, QMatrix)> {
    let dom = monomials_of_degree(&sig, k_in);
    let cod = monomials_of_degree(&sig, k_out);
    let index: std::collections::HashMap<&Monomial, usize> = cod.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = QMatrix::zeros(cod.len(), dom.len());
    let one = Monomial::one(&sig);
    for (c, m) in dom.iter().enumerate() {
        let s = SymbolField::from_term(sig, weights.clone(), m.clone(), SuperPolynomial::one(sig));
        let img = op(&s);
        for (w, f) in img.terms() {
            let r = *index.get(w).ok_or(Error::NotHomogeneous)?;
            if f.terms().any(|(mm, _)| *mm != one) {
                return Err(Error::NotHomogeneous);
            }
            mat[(r, c)] = f.coefficient(&one);
        }
    }
    Ok((dom, cod, mat))
}

/// Dense CSV: a header of column labels, then one labelled row per output monomial.
pub fn write_matrix_csv<W: Write>(
    sig: &SpaceSignature,
    rows: &[Monomial],
    cols: &[Monomial],
    m: &QMatrix,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let label = |m: &Monomial| fiber_label(sig, m);
    let mut header = vec![String::new()];
    header.extend(cols.iter().map(label));
    w.write_record(&header)?;
    for (i, r) in rows.iter().enumerate() {
        let mut rec = vec![label(r)];
        rec.extend((0..cols.len()).map(|j| fmt_rational(&m[(i, j)])));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::realized_family;
    use crate::superalg::monomials_up_to;

    const SIGS: [SpaceSignature; 4] = [
        SpaceSignature::new(1, 0, 1),
        SpaceSignature::new(1, 1, 1),
        SpaceSignature::new(2, 0, 1),
        SpaceSignature::new(3, 0, 0),
    ];

    fn wts() -> Weights {
        Weights::new(rat(1, 2), rat(1, 3))
    }

    fn fiber_basis(sig: SpaceSignature, k: usize) -> Vec<SymbolField> {
        monomials_of_degree(&sig, k)
            .into_iter()
            .map(|m| SymbolField::from_term(sig, wts(), m, SuperPolynomial::one(sig)))
            .collect()
    }

    fn poly_basis(sig: SpaceSignature, k: usize, pdeg: usize, stride: usize) -> Vec<SymbolField> {
        let coeffs = monomials_up_to(&sig, pdeg);
        let mut out = Vec::new();
        for (a, m) in monomials_of_degree(&sig, k).into_iter().enumerate() {
            for (b, c) in coeffs.iter().enumerate() {
                if (a + b) % stride == 0 {
                    out.push(SymbolField::from_term(sig, wts(), m.clone(), SuperPolynomial::monomial(sig, c.clone(), int(1))));
                }
            }
        }
        out
    }

    #[test]
    fn interior_examples() {
        let sig = SpaceSignature::new(1, 0, 1);
        let s = SymbolField::from_vectors(sig, wts(), SuperPolynomial::one(sig), &[0, 0]);
        let e1 = SymbolField::from_vectors(sig, wts(), SuperPolynomial::one(sig), &[0]);
        assert_eq!(interior(&unit_vector(3, 0), &s).unwrap(), e1.scale(&int(2)));
        let s0 = SymbolField::from_vectors(sig, wts(), SuperPolynomial::var(sig, 0), &[]);
        assert!(interior(&unit_vector(3, 1), &s0).unwrap().is_zero());
        // ε^2 on θ¹ ⊗ e_2 ∨ e_3: crosses the odd coefficient
        let s = SymbolField::from_vectors(sig, wts(), SuperPolynomial::var(sig, 1), &[1, 2]);
        let got = interior(&unit_vector(3, 2), &s).unwrap();
        let expect = SymbolField::from_vectors(sig, wts(), SuperPolynomial::var(sig, 1), &[1]);
        assert_eq!(got, expect);
        let mixed = vec![int(1), int(1), int(0)];
        assert!(interior(&mixed, &s).is_err());
    }

    #[test]
    fn trace_examples() {
        let sig = SpaceSignature::new(1, 0, 1);
        let s = SymbolField::from_vectors(sig, wts(), SuperPolynomial::one(sig), &[0, 0]);
        let two = SymbolField::from_term(sig, wts(), Monomial::one(&sig), SuperPolynomial::constant(sig, int(2)));
        assert_eq!(op_t(&s), two);
        for sig in SIGS {
            for k in 0..2 {
                for s in fiber_basis(sig, k) {
                    assert!(op_t(&s).is_zero());
                }
            }
            let one = SymbolField::from_term(sig, wts(), Monomial::one(&sig), SuperPolynomial::one(sig));
            assert_eq!(op_t(&op_r(&one)), one.scale(&int(2 * sig.superdim())));
        }
    }

    #[test]
    fn trace_forms_agree() {
        for sig in SIGS {
            for k in 0..=4 {
                for s in fiber_basis(sig, k) {
                    assert_eq!(op_t(&s), op_t_explicit(&s));
                }
            }
            for s in poly_basis(sig, 3, 1, 2) {
                assert_eq!(op_t(&s), op_t_explicit(&s));
            }
        }
    }

    #[test]
    fn div_grad_laplace() {
        for sig in SIGS {
            let x = SuperPolynomial::var(sig, 0);
            let s = SymbolField::from_vectors(sig, wts(), &x * &x, &[0]);
            let expect = SymbolField::from_vectors(sig, wts(), x.scale(&int(2)), &[]);
            assert_eq!(sym_div(&s), expect);
            let c = SymbolField::from_vectors(sig, wts(), SuperPolynomial::one(sig), &[]);
            assert!(sym_grad(&c).is_zero());
            // div ∘ G = Δ on S^0, hence div ∘ G0 = Δ0 on S^2
            for s in poly_basis(sig, 0, 3, 1) {
                assert_eq!(sym_div(&sym_grad(&s)), sym_laplace(&s));
            }
            for s in poly_basis(sig, 2, 2, 3) {
                assert_eq!(sym_div(&op_g0(&s)), op_delta0(&s));
            }
        }
    }

    #[test]
    fn gamma_forms_agree() {
        for sig in [SpaceSignature::new(1, 0, 1), SpaceSignature::new(1, 1, 1)] {
            let fam = realized_family(sig).unwrap();
            for k in 0..=3 {
                for s in poly_basis(sig, k, 1, 3) {
                    for (_, h, _) in &fam {
                        let g = gamma_def(h, &s).unwrap();
                        match h {
                            GradedElement::Plus(xi) => {
                                assert_eq!(g, gamma_closed(xi, &s).unwrap(), "{h:?} on {s}");
                                assert!(g.has_constant_coefficients() || !s.has_constant_coefficients());
                            }
                            _ => assert!(g.is_zero(), "{h:?}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn n_on_low_degrees() {
        for sig in SIGS {
            let w = wts();
            let ld = &w.lambda * int(sig.superdim());
            for s in poly_basis(sig, 0, 2, 1) {
                assert!(op_n(&s).is_zero());
            }
            for s in poly_basis(sig, 1, 2, 2) {
                assert_eq!(op_n(&s), sym_div(&s).scale(&(int(-2) * &ld)));
            }
            for s in poly_basis(sig, 2, 2, 3) {
                let expect = sym_div(&s).scale(&(int(-2) * (&ld + int(1)))).add(&op_g0(&s));
                assert_eq!(op_n(&s), expect);
            }
        }
    }

    #[test]
    fn casimir_modes_agree_and_relation_holds() {
        for sig in [SpaceSignature::new(1, 0, 1), SpaceSignature::new(2, 0, 1)] {
            let data = CasimirData::new(sig).unwrap();
            for k in 0..=2 {
                for s in poly_basis(sig, k, 1, 2) {
                    let c = data.casimir_c(&s, CasimirMode::ClosedForm);
                    for mode in CasimirMode::ALL {
                        assert_eq!(data.casimir_c(&s, mode), c, "{mode} on {s}");
                    }
                    assert_eq!(data.casimir_curly(&s), c.add(&op_n(&s)), "{s}");
                }
            }
        }
    }

    #[test]
    fn casimir_on_degree_zero() {
        for sig in SIGS {
            let d = int(sig.superdim());
            let delta = rat(1, 3);
            let expect = &d * &d * &delta * (int(1) - &delta);
            assert_eq!(casimir_scalar(&sig, &delta, 0), expect);
        }
        let sig = SpaceSignature::new(2, 0, 1);
        for k in 0..=1 {
            for s in fiber_basis(sig, k) {
                assert!(casimir_closed(&s).is_zero());
            }
        }
    }

    #[test]
    fn casimir_is_central() {
        let sig = SpaceSignature::new(1, 1, 1);
        let fam = realized_family(sig).unwrap();
        for s in poly_basis(sig, 2, 1, 4) {
            for (_, _, x) in &fam {
                let lhs = casimir_closed(&lie_symbol(x, &s));
                let rhs = lie_symbol(x, &casimir_closed(&s));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn constant_matrix_and_csv() {
        let sig = SpaceSignature::new(1, 0, 1);
        let (dom, cod, m) = constant_matrix(sig, &wts(), 2, 0, op_t).unwrap();
        assert_eq!((dom.len(), cod.len()), (4, 1));
        let mut buf = Vec::new();
        write_matrix_csv(&sig, &cod, &dom, &m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), ",e2 e3,e1 e2,e1 e3,e1^2");
        assert_eq!(text.lines().nth(1).unwrap(), "1,-2/1,0/1,0/1,2/1");
        assert!(constant_matrix(sig, &wts(), 1, 1, |s| s.partial(0)).is_ok());
    }
}
