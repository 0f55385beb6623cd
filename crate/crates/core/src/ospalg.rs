//! Graded matrices, the form `ω`, and the algebra `osp(p+1,q+1|2r)`.
//!
//! The large space `R^{p+q+2|2r}` is indexed in the order
//! `(o, 1..p+q, o', p+q+1..p+q+2r)`; its form is
//! `G = diag(S, J)` with `S = [[0,0,-1],[0,Id_{p,q},0],[-1,0,0]]` and
//! `J = [[0,Id_r],[-Id_r,0]]`. The small space `R^{p+q|2r}` carries the
//! pull-back `G0 = diag(Id_{p,q}, J)`. Throughout, `ω(U,V) = Vᵗ G U`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, rat, sign, Rational};
use crate::superalg::{Parity, SpaceSignature};

/// Index into `I = {o, o'} ∪ {1..p+q+2r}`. `Y(i)` is 0-based in `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GradedIndex {
    O,
    OPrime,
    Y(usize),
}

impl GradedIndex {
    /// All indices, in the order of rows of the large space.
    pub fn all(sig: &SpaceSignature) -> Vec<GradedIndex> {
        let m = sig.even_dim();
        let mut v = vec![GradedIndex::O];
        v.extend((0..m).map(GradedIndex::Y));
        v.push(GradedIndex::OPrime);
        v.extend((m..sig.dim()).map(GradedIndex::Y));
        v
    }

    pub fn position(self, sig: &SpaceSignature) -> usize {
        let m = sig.even_dim();
        match self {
            GradedIndex::O => 0,
            GradedIndex::Y(i) if i < m => i + 1,
            GradedIndex::OPrime => m + 1,
            GradedIndex::Y(i) => i + 2,
        }
    }

    pub fn is_odd(self, sig: &SpaceSignature) -> bool {
        matches!(self, GradedIndex::Y(i) if sig.is_odd(i))
    }

    /// The involution exchanging `o ↔ o'` and `i ↔ i+r` on the odd block.
    pub fn pi(self, sig: &SpaceSignature) -> GradedIndex {
        let m = sig.even_dim();
        match self {
            GradedIndex::O => GradedIndex::OPrime,
            GradedIndex::OPrime => GradedIndex::O,
            GradedIndex::Y(i) if i < m => self,
            GradedIndex::Y(i) if i < m + sig.r => GradedIndex::Y(i + sig.r),
            GradedIndex::Y(i) => GradedIndex::Y(i - sig.r),
        }
    }

    /// The sign function: `-1` on `o, o'` and on the 1-based range `p+1..p+q+r`.
    pub fn s(self, sig: &SpaceSignature) -> i64 {
        match self {
            GradedIndex::O | GradedIndex::OPrime => -1,
            GradedIndex::Y(i) if i >= sig.p && i < sig.p + sig.q + sig.r => -1,
            GradedIndex::Y(_) => 1,
        }
    }

    pub fn label(self) -> String {
        match self {
            GradedIndex::O => "o".into(),
            GradedIndex::OPrime => "o'".into(),
            GradedIndex::Y(i) => (i + 1).to_string(),
        }
    }
}

impl fmt::Display for GradedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// `R^{p+q+2|2r}`
    Big,
    /// `R^{p+q|2r}`
    Small,
}

/// Dense matrix on the large or the small graded space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMatrix {
    sig: SpaceSignature,
    space: Space,
    data: Vec<Rational>,
}

/// An element of `gl(p+q+2|2r)`; `osp` membership is checked with [`check_osp`].
pub type OspMatrix = GradedMatrix;

impl GradedMatrix {
    pub fn zeros(sig: SpaceSignature, space: Space) -> Self {
        let n = Self::dim_of(&sig, space);
        Self {
            sig,
            space,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(sig: SpaceSignature, space: Space) -> Self {
        let mut m = Self::zeros(sig, space);
        for i in 0..m.dim() {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Elementary matrix `e_i ⊗ ε^j` (positions, not labels).
    pub fn unit(sig: SpaceSignature, space: Space, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(sig, space);
        m[(i, j)] = Rational::one();
        m
    }

    /// Outer product `u ⊗ ξ` of a column and a row.
    pub fn outer(sig: SpaceSignature, space: Space, u: &[Rational], xi: &[Rational]) -> Self {
        let mut m = Self::zeros(sig, space);
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, xb) in xi.iter().enumerate() {
                if !xb.is_zero() {
                    m[(a, b)] = ua * xb;
                }
            }
        }
        m
    }

    fn dim_of(sig: &SpaceSignature, space: Space) -> usize {
        match space {
            Space::Big => sig.dim() + 2,
            Space::Small => sig.dim(),
        }
    }

    pub fn dim(&self) -> usize {
        Self::dim_of(&self.sig, self.space)
    }

    pub fn signature(&self) -> SpaceSignature {
        self.sig
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Parity of basis position `a`.
    pub fn pos_is_odd(&self, a: usize) -> bool {
        position_is_odd(&self.sig, self.space, a)
    }

    pub fn get(&self, row: GradedIndex, col: GradedIndex) -> &Rational {
        let (a, b) = (self.pos(row), self.pos(col));
        &self[(a, b)]
    }

    fn pos(&self, i: GradedIndex) -> usize {
        match (self.space, i) {
            (Space::Big, _) => i.position(&self.sig),
            (Space::Small, GradedIndex::Y(k)) => k,
            (Space::Small, _) => panic!("o/o' do not index the small space"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Parity, when all nonzero entries agree; zero is even.
    pub fn parity(&self) -> Option<Parity> {
        let n = self.dim();
        let mut seen = None;
        for a in 0..n {
            for b in 0..n {
                if self[(a, b)].is_zero() {
                    continue;
                }
                let p = self.pos_is_odd(a) ^ self.pos_is_odd(b);
                match seen {
                    None => seen = Some(p),
                    Some(s) if s != p => return None,
                    _ => {}
                }
            }
        }
        Some(Parity::from_odd(seen.unwrap_or(false)))
    }

    pub fn homogeneous_parity(&self) -> Result<Parity> {
        self.parity().ok_or(Error::MixedParity("graded matrix"))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.sig, self.space), (other.sig, other.space));
        Self {
            sig: self.sig,
            space: self.space,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            sig: self.sig,
            space: self.space,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.sig, self.space), (other.sig, other.space));
        let n = self.dim();
        let mut out = Self::zeros(self.sig, self.space);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let mut out = Self::zeros(self.sig, self.space);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, xi: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|i| &xi[i] * &self[(i, j)]).sum())
            .collect()
    }

    /// Sparse triples `(row label, column label, "num/den")`.
    pub fn to_triples(&self) -> Vec<(String, String, String)> {
        let labels = self.labels();
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !self[(a, b)].is_zero() {
                    out.push((labels[a].clone(), labels[b].clone(), fmt_rational(&self[(a, b)])));
                }
            }
        }
        out
    }

    fn labels(&self) -> Vec<String> {
        match self.space {
            Space::Big => GradedIndex::all(&self.sig).iter().map(|i| i.label()).collect(),
            Space::Small => (1..=self.sig.dim()).map(|i| i.to_string()).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for GradedMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.dim() + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GradedMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        let n = self.dim();
        &mut self.data[i * n + j]
    }
}

pub fn position_is_odd(sig: &SpaceSignature, space: Space, a: usize) -> bool {
    match space {
        Space::Big => a >= sig.even_dim() + 2,
        Space::Small => sig.is_odd(a),
    }
}

/// Parity of a homogeneous column or row vector.
pub fn vector_parity(sig: &SpaceSignature, space: Space, v: &[Rational]) -> Result<Parity> {
    let mut seen = None;
    for (a, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let p = position_is_odd(sig, space, a);
        match seen {
            None => seen = Some(p),
            Some(s) if s != p => return Err(Error::MixedParity("vector")),
            _ => {}
        }
    }
    Ok(Parity::from_odd(seen.unwrap_or(false)))
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// `(G, G0)`: the Gram matrices of `ω` on the large and the small space.
pub fn build_forms(sig: SpaceSignature) -> (GradedMatrix, GradedMatrix) {
    let m = sig.even_dim();
    let r = sig.r;
    let mut g = GradedMatrix::zeros(sig, Space::Big);
    let mut g0 = GradedMatrix::zeros(sig, Space::Small);
    g[(0, m + 1)] = int(-1);
    g[(m + 1, 0)] = int(-1);
    for i in 0..m {
        let s = if i < sig.p { int(1) } else { int(-1) };
        g[(i + 1, i + 1)] = s.clone();
        g0[(i, i)] = s;
    }
    for a in 0..r {
        let (u, w) = (m + a, m + a + r);
        g[(u + 2, w + 2)] = int(1);
        g[(w + 2, u + 2)] = int(-1);
        g0[(u, w)] = int(1);
        g0[(w, u)] = int(-1);
    }
    (g, g0)
}

/// The bilinear form `ω(U,V) = Vᵗ G U`.
pub fn omega(form: &GradedMatrix, u: &[Rational], v: &[Rational]) -> Rational {
    let gu = form.apply(u);
    v.iter().zip(&gu).map(|(a, b)| a * b).sum()
}

/// `v♭ = ω(v, ·)` as a row vector.
pub fn flat(form: &GradedMatrix, v: &[Rational]) -> Vec<Rational> {
    form.apply(v)
}

/// `♯ = ♭⁻¹`. All forms here satisfy `G⁻¹ = Gᵗ`.
pub fn sharp(form: &GradedMatrix, xi: &[Rational]) -> Vec<Rational> {
    form.transpose().apply(xi)
}

/// `ω(AU,V) + (-1)^{ÃŨ} ω(U,AV) = 0` on all basis pairs.
pub fn check_osp(a: &GradedMatrix, form: &GradedMatrix) -> bool {
    let Some(pa) = a.parity() else {
        return false;
    };
    let n = a.dim();
    let ga = form.mul(a);
    let atg = a.transpose().mul(form);
    for u in 0..n {
        let s = sign(pa.is_odd() && a.pos_is_odd(u));
        for v in 0..n {
            if !(&ga[(v, u)] + &s * &atg[(v, u)]).is_zero() {
                return false;
            }
        }
    }
    true
}

/// `[A,B] = AB - (-1)^{ÃB̃} BA` for homogeneous `A`, `B`.
pub fn super_commutator(a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    let pa = a.homogeneous_parity()?;
    let pb = b.homogeneous_parity()?;
    let ab = a.mul(b);
    let ba = b.mul(a);
    Ok(ab.sub(&ba.scale(&sign(pa.is_odd() && pb.is_odd()))))
}

/// `str(A) = Σ (-1)^{ĩ} A_i^i`.
pub fn supertrace(a: &GradedMatrix) -> Rational {
    (0..a.dim())
        .map(|i| {
            if a.pos_is_odd(i) {
                -a[(i, i)].clone()
            } else {
                a[(i, i)].clone()
            }
        })
        .sum()
}

/// `K(A,B) = -½ str(AB)`.
pub fn killing(a: &GradedMatrix, b: &GradedMatrix) -> Rational {
    -supertrace(&a.mul(b)) * rat(1, 2)
}

/// `O_i^j = e_i ⊗ ε^j - (-1)^{ĩj̃} (ε^j)♯ ⊗ e_i♭` on the large space.
pub fn generator_o(sig: SpaceSignature, i: GradedIndex, j: GradedIndex) -> OspMatrix {
    let (g, _) = build_forms(sig);
    let n = sig.dim() + 2;
    let (pi, pj) = (i.position(&sig), j.position(&sig));
    let e_i = unit_vector(n, pi);
    let eps_j = unit_vector(n, pj);
    let a = GradedMatrix::unit(sig, Space::Big, pi, pj);
    let b = GradedMatrix::outer(sig, Space::Big, &sharp(&g, &eps_j), &flat(&g, &e_i));
    a.sub(&b.scale(&sign(i.is_odd(&sig) && j.is_odd(&sig))))
}

/// The same generator built on the small space with `G0`, for `i, j ∈ 0..n`.
pub fn generator_o_small(sig: SpaceSignature, i: usize, j: usize) -> GradedMatrix {
    let (_, g0) = build_forms(sig);
    let n = sig.dim();
    let a = GradedMatrix::unit(sig, Space::Small, i, j);
    let b = GradedMatrix::outer(
        sig,
        Space::Small,
        &sharp(&g0, &unit_vector(n, j)),
        &flat(&g0, &unit_vector(n, i)),
    );
    a.sub(&b.scale(&sign(sig.is_odd(i) && sig.is_odd(j))))
}

/// `a_{i,j} = -(-1)^{ĩj̃} s(π(j)) s(i)`.
pub fn relation_coefficient(sig: &SpaceSignature, i: GradedIndex, j: GradedIndex) -> i64 {
    let e = if i.is_odd(sig) && j.is_odd(sig) { -1 } else { 1 };
    -e * j.pi(sig).s(sig) * i.s(sig)
}

/// One homogeneous graded piece of `g_{-1} ⊕ g_0 ⊕ g_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GradedElement {
    /// `v ∈ g_{-1} = R^{p+q|2r}` (column).
    Minus(Vec<Rational>),
    /// `A ∈ g_0 = osp(p,q|2r) ⊕ R·Id` (small-space matrix).
    Zero(GradedMatrix),
    /// `ξ ∈ g_1 = (R^{p+q|2r})^*` (row).
    Plus(Vec<Rational>),
}

impl GradedElement {
    pub fn e(sig: &SpaceSignature, i: usize) -> Self {
        GradedElement::Minus(unit_vector(sig.dim(), i))
    }

    pub fn eps(sig: &SpaceSignature, i: usize) -> Self {
        GradedElement::Plus(unit_vector(sig.dim(), i))
    }

    /// The Euler element `𝓔 = -Id`.
    pub fn euler(sig: SpaceSignature) -> Self {
        GradedElement::Zero(GradedMatrix::identity(sig, Space::Small).scale(&int(-1)))
    }

    /// `O_i^j` for `i, j` in the small index range, as an element of `g_0`.
    pub fn o(sig: SpaceSignature, i: usize, j: usize) -> Self {
        GradedElement::Zero(generator_o_small(sig, i, j))
    }

    pub fn grade(&self) -> i32 {
        match self {
            GradedElement::Minus(_) => -1,
            GradedElement::Zero(_) => 0,
            GradedElement::Plus(_) => 1,
        }
    }

    pub fn parity(&self, sig: &SpaceSignature) -> Result<Parity> {
        match self {
            GradedElement::Minus(v) | GradedElement::Plus(v) => vector_parity(sig, Space::Small, v),
            GradedElement::Zero(a) => a.homogeneous_parity(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GradedElement::Minus(v) | GradedElement::Plus(v) => v.iter().all(Zero::is_zero),
            GradedElement::Zero(a) => a.is_zero(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        match self {
            GradedElement::Minus(v) => GradedElement::Minus(v.iter().map(|x| x * c).collect()),
            GradedElement::Zero(a) => GradedElement::Zero(a.scale(c)),
            GradedElement::Plus(v) => GradedElement::Plus(v.iter().map(|x| x * c).collect()),
        }
    }

    /// Lifts the element to a matrix of `osp(p+1,q+1|2r)` through `Φ⁻¹`.
    pub fn to_osp(&self, sig: SpaceSignature) -> Result<OspMatrix> {
        let n = sig.dim();
        let mut d = PhiDecomposition::zero(sig);
        match self {
            GradedElement::Minus(v) => d.v = v.clone(),
            GradedElement::Plus(x) => d.xi = x.clone(),
            GradedElement::Zero(a) => {
                // B0 has a vanishing (0,0) entry (index 0 is even), which fixes a1.
                let a1 = -a[(0, 0)].clone();
                let b0 = a.add(&GradedMatrix::identity(sig, Space::Small).scale(&a1));
                let (_, g0) = build_forms(sig);
                if !check_osp(&b0, &g0) {
                    return Err(Error::NotOsp);
                }
                d.b0 = b0;
                d.a1 = a1;
            }
        }
        debug_assert_eq!(d.v.len(), n);
        Ok(compose_phi(&d))
    }
}

/// `Φ(A) = (v, B0 - a1·Id, ξ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiDecomposition {
    pub v: Vec<Rational>,
    pub b0: GradedMatrix,
    pub a1: Rational,
    pub xi: Vec<Rational>,
}

impl PhiDecomposition {
    pub fn zero(sig: SpaceSignature) -> Self {
        let n = sig.dim();
        Self {
            v: vec![Rational::zero(); n],
            b0: GradedMatrix::zeros(sig, Space::Small),
            a1: Rational::zero(),
            xi: vec![Rational::zero(); n],
        }
    }

    /// The `g_0` component `B0 - a1·Id`.
    pub fn g0(&self) -> GradedMatrix {
        let sig = self.b0.signature();
        self.b0
            .sub(&GradedMatrix::identity(sig, Space::Small).scale(&self.a1))
    }

    /// The nonzero graded pieces.
    pub fn components(&self) -> Vec<GradedElement> {
        let mut out = Vec::new();
        if self.v.iter().any(|x| !x.is_zero()) {
            out.push(GradedElement::Minus(self.v.clone()));
        }
        let g0 = self.g0();
        if !g0.is_zero() {
            out.push(GradedElement::Zero(g0));
        }
        if self.xi.iter().any(|x| !x.is_zero()) {
            out.push(GradedElement::Plus(self.xi.clone()));
        }
        out
    }
}

/// Reads off `Φ(A)`; rejects matrices outside `osp(p+1,q+1|2r)`.
pub fn decompose_phi(a: &OspMatrix) -> Result<PhiDecomposition> {
    let sig = a.signature();
    let (g, _) = build_forms(sig);
    if a.space() != Space::Big || !check_osp(a, &g) {
        return Err(Error::NotOsp);
    }
    let n = sig.dim();
    let op = GradedIndex::OPrime;
    let mut d = PhiDecomposition::zero(sig);
    for i in 0..n {
        d.v[i] = a.get(GradedIndex::Y(i), op).clone();
        d.xi[i] = a.get(op, GradedIndex::Y(i)).clone();
        for j in 0..n {
            d.b0[(i, j)] = a.get(GradedIndex::Y(i), GradedIndex::Y(j)).clone();
        }
    }
    d.a1 = a.get(op, op).clone();
    if compose_phi(&d) != *a {
        return Err(Error::NotOsp);
    }
    Ok(d)
}

/// `Φ⁻¹`: assembles the block matrix from its graded pieces.
pub fn compose_phi(d: &PhiDecomposition) -> OspMatrix {
    let sig = d.b0.signature();
    let (m, n, r) = (sig.even_dim(), sig.dim(), sig.r);
    let mut a = GradedMatrix::zeros(sig, Space::Big);
    let pos = |i: GradedIndex| i.position(&sig);
    let (o, op) = (pos(GradedIndex::O), pos(GradedIndex::OPrime));
    a[(o, o)] = -d.a1.clone();
    a[(op, op)] = d.a1.clone();
    // J[a][b] on the odd block (local indices)
    let j = |x: usize, y: usize| -> i64 {
        if x < r && y == x + r {
            1
        } else if x >= r && y + r == x {
            -1
        } else {
            0
        }
    };
    for i in 0..n {
        let yi = pos(GradedIndex::Y(i));
        a[(yi, op)] = d.v[i].clone();
        a[(op, yi)] = d.xi[i].clone();
        for k in 0..n {
            a[(yi, pos(GradedIndex::Y(k)))] = d.b0[(i, k)].clone();
        }
        if i < m {
            let s = if i < sig.p { int(1) } else { int(-1) };
            a[(o, yi)] = &s * &d.v[i];
            a[(yi, o)] = &s * &d.xi[i];
        } else {
            let b = i - m;
            // row o: -v2ᵗ J ; column o: -J ξ2ᵗ
            let mut row = Rational::zero();
            let mut col = Rational::zero();
            for c in 0..2 * r {
                row -= &d.v[m + c] * int(j(c, b));
                col -= int(j(b, c)) * &d.xi[m + c];
            }
            a[(o, yi)] = row;
            a[(yi, o)] = col;
        }
    }
    a
}

/// Brackets two graded pieces inside `osp(p+1,q+1|2r)` and decomposes the result.
pub fn bracket_elements(
    sig: SpaceSignature,
    x: &GradedElement,
    y: &GradedElement,
) -> Result<PhiDecomposition> {
    let c = super_commutator(&x.to_osp(sig)?, &y.to_osp(sig)?)?;
    decompose_phi(&c)
}

/// `dim osp(p+1,q+1|2r)`.
pub fn osp_dimension(sig: &SpaceSignature) -> usize {
    let big = sig.even_dim() + 2;
    let r = sig.r;
    big * (big - 1) / 2 + r * (2 * r + 1) + 2 * r * big
}

#[derive(Clone, Debug)]
pub struct DualPair {
    pub index: (GradedIndex, GradedIndex),
    pub basis: OspMatrix,
    pub dual: OspMatrix,
}

/// Basis `{O_i^j : (i,j) ∈ A}` with its Killing-dual basis
/// `O_i^{j*} = -(-1)^{ĩ} (1+δ_{i,π(j)})⁻¹ O_j^i`.
///
/// `A` keeps, from each orbit `{(i,j), (π(j),π(i))}`, the pair that comes
/// first in row-position order; pairs with `j = π(i)` and `i` even are dropped.
pub fn dual_basis(sig: SpaceSignature) -> Vec<DualPair> {
    let all = GradedIndex::all(&sig);
    let key = |i: GradedIndex, j: GradedIndex| (i.position(&sig), j.position(&sig));
    let mut out = Vec::new();
    for &i in &all {
        for &j in &all {
            if j == i.pi(&sig) && !i.is_odd(&sig) {
                continue;
            }
            let partner = (j.pi(&sig), i.pi(&sig));
            if key(i, j) > key(partner.0, partner.1) {
                continue;
            }
            let c = -sign(i.is_odd(&sig)) * rat(1, if j == i.pi(&sig) { 2 } else { 1 });
            out.push(DualPair {
                index: (i, j),
                basis: generator_o(sig, i, j),
                dual: generator_o(sig, j, i).scale(&c),
            });
        }
    }
    out
}
