//! The supercommutative polynomial ring `Q[x^1..x^{p+q}] ⊗ Λ[θ^1..θ^{2r}]`.
//!
//! Variables are indexed `0..n` with `n = p+q+2r`; indices below `p+q` are
//! even (`x`), the rest odd (`θ`). A monomial stores the even exponents and
//! the odd variables as a bitmask; the odd factors are always read in
//! increasing index order, so `θ^A` means `θ^{a_1}θ^{a_2}…` with `a_1 < a_2 < …`.
//!
//! Odd variables are differentiated from the left: `∂_θ` first anticommutes
//! `θ` to the front of the monomial and then removes it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpaceSignature {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl SpaceSignature {
    pub const fn new(p: usize, q: usize, r: usize) -> Self {
        Self { p, q, r }
    }

    /// Number of even coordinates `p+q`.
    pub fn even_dim(&self) -> usize {
        self.p + self.q
    }

    /// Number of odd coordinates `2r`.
    pub fn odd_dim(&self) -> usize {
        2 * self.r
    }

    /// Total number of coordinates `p+q+2r`.
    pub fn dim(&self) -> usize {
        self.p + self.q + 2 * self.r
    }

    /// Superdimension `p+q-2r`.
    pub fn superdim(&self) -> i64 {
        self.p as i64 + self.q as i64 - 2 * self.r as i64
    }

    pub fn is_odd(&self, i: usize) -> bool {
        i >= self.even_dim()
    }

    pub fn parity(&self, i: usize) -> Parity {
        Parity::from_odd(self.is_odd(i))
    }

    /// Checks the precondition of every geometric operation.
    pub fn validate(&self) -> Result<()> {
        if self.p + self.q == 0 {
            return Err(Error::Config("p+q must be at least 1".into()));
        }
        if self.odd_dim() > 30 {
            return Err(Error::Config("at most 30 odd coordinates".into()));
        }
        Ok(())
    }

    pub fn var_name(&self, i: usize) -> String {
        if self.is_odd(i) {
            format!("th{}", i - self.even_dim() + 1)
        } else {
            format!("x{}", i + 1)
        }
    }
}

impl fmt::Display for SpaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_odd(self.is_odd() != rhs.is_odd())
    }
}

/// Result of [`SuperPolynomial::parity_of`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityOf {
    Homogeneous(Parity),
    Mixed,
}

pub(crate) type Exps = SmallVec<[u16; 8]>;

/// A monomial `x^a θ^B`. Also used for fiber monomials `e^a ∨ e^B` and for
/// derivative multi-indices `∂^a ∂_θ^B`, which obey the same sign rules.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub(crate) even: Exps,
    pub(crate) odd: u32,
}

/// Number of set bits of `mask` strictly above bit `b`.
#[inline]
fn bits_above(mask: u32, b: u32) -> u32 {
    if b >= 31 {
        0
    } else {
        (mask >> (b + 1)).count_ones()
    }
}

/// Number of set bits of `mask` strictly below bit `b`.
#[inline]
fn bits_below(mask: u32, b: u32) -> u32 {
    (mask & ((1u32 << b) - 1)).count_ones()
}

impl Monomial {
    pub fn one(sig: &SpaceSignature) -> Self {
        Self {
            even: SmallVec::from_elem(0, sig.even_dim()),
            odd: 0,
        }
    }

    pub fn var(sig: &SpaceSignature, i: usize) -> Self {
        let mut m = Self::one(sig);
        if sig.is_odd(i) {
            m.odd = 1 << (i - sig.even_dim());
        } else {
            m.even[i] = 1;
        }
        m
    }

    /// Builds a monomial from even exponents and an odd subset (0-based odd indices).
    pub fn from_parts(even: &[u16], odd: &[usize]) -> Self {
        let mut mask = 0u32;
        for &b in odd {
            mask |= 1 << b;
        }
        Self {
            even: even.iter().copied().collect(),
            odd: mask,
        }
    }

    pub fn even_exponents(&self) -> &[u16] {
        &self.even
    }

    /// Odd variables present, 0-based within the odd block, increasing.
    pub fn odd_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |b| self.odd >> b & 1 == 1)
    }

    pub fn odd_count(&self) -> usize {
        self.odd.count_ones() as usize
    }

    pub fn even_degree(&self) -> usize {
        self.even.iter().map(|&e| e as usize).sum()
    }

    pub fn degree(&self) -> usize {
        self.even_degree() + self.odd_count()
    }

    pub fn is_odd(&self) -> bool {
        self.odd.count_ones() % 2 == 1
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.is_odd())
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&e| e == 0)
    }

    /// Exponent of variable `i` (0 or 1 for odd variables).
    pub fn exponent(&self, sig: &SpaceSignature, i: usize) -> u16 {
        if sig.is_odd(i) {
            (self.odd >> (i - sig.even_dim()) & 1) as u16
        } else {
            self.even[i]
        }
    }

    /// Product `self · other`; `None` when an odd variable repeats. The flag is
    /// `true` when the Koszul sign is negative.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.odd;
        while rest != 0 {
            let b = rest.trailing_zeros();
            swaps += bits_above(self.odd, b);
            rest &= rest - 1;
        }
        let even = self
            .even
            .iter()
            .zip(other.even.iter())
            .map(|(a, b)| a + b)
            .collect();
        Some((
            swaps % 2 == 1,
            Monomial {
                even,
                odd: self.odd | other.odd,
            },
        ))
    }

    /// Left derivative with respect to variable `i`: `(factor, result)` or
    /// `None` if the variable does not occur. The factor carries the
    /// exponent (even) or the anticommutation sign (odd).
    pub fn derive(&self, sig: &SpaceSignature, i: usize) -> Option<(i64, Monomial)> {
        let m = sig.even_dim();
        if i >= m {
            let b = (i - m) as u32;
            if self.odd >> b & 1 == 0 {
                return None;
            }
            let s = if bits_below(self.odd, b) % 2 == 1 { -1 } else { 1 };
            let mut out = self.clone();
            out.odd &= !(1 << b);
            Some((s, out))
        } else {
            let e = self.even[i];
            if e == 0 {
                return None;
            }
            let mut out = self.clone();
            out.even[i] -= 1;
            Some((e as i64, out))
        }
    }

    /// The multiset of variables in canonical order, e.g. `x1^2 θ2` ↦ `[0, 0, m+1]`.
    pub fn factor_list(&self, sig: &SpaceSignature) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        for (i, &e) in self.even.iter().enumerate() {
            out.extend(std::iter::repeat_n(i, e as usize));
        }
        out.extend(self.odd_indices().map(|b| b + sig.even_dim()));
        out
    }

    /// Product of the variables in `list`, in the given order, normalized to a
    /// signed monomial. `None` if an odd variable repeats.
    pub fn from_factor_list(sig: &SpaceSignature, list: &[usize]) -> Option<(bool, Monomial)> {
        let mut acc = Monomial::one(sig);
        let mut neg = false;
        for &i in list {
            let (s, m) = acc.mul(&Monomial::var(sig, i))?;
            neg ^= s;
            acc = m;
        }
        Some((neg, acc))
    }

    pub fn fmt_with(&self, sig: &SpaceSignature, even_prefix: &str, odd_prefix: &str) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.even.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{even_prefix}{}", i + 1)),
                _ => parts.push(format!("{even_prefix}{}^{e}", i + 1)),
            }
        }
        for b in self.odd_indices() {
            let _ = sig;
            parts.push(format!("{odd_prefix}{}", b + 1));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }

    fn cmp_odd(a: u32, b: u32) -> Ordering {
        // lexicographic comparison of the increasing index lists
        let (mut a, mut b) = (a, b);
        loop {
            match (a == 0, b == 0) {
                (true, true) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                _ => {}
            }
            let (ta, tb) = (a.trailing_zeros(), b.trailing_zeros());
            if ta != tb {
                return ta.cmp(&tb);
            }
            a &= a - 1;
            b &= b - 1;
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic on (total even degree, even exponents, odd subset).
    fn cmp(&self, other: &Self) -> Ordering {
        self.even_degree()
            .cmp(&other.even_degree())
            .then_with(|| other.even.cmp(&self.even))
            .then_with(|| Self::cmp_odd(self.odd, other.odd))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact-rational element of `Q[x] ⊗ Λ[θ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperPolynomial {
    sig: SpaceSignature,
    terms: BTreeMap<Monomial, Rational>,
}

impl SuperPolynomial {
    pub fn zero(sig: SpaceSignature) -> Self {
        Self {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(sig: SpaceSignature, c: Rational) -> Self {
        let mut p = Self::zero(sig);
        p.add_term(Monomial::one(&sig), c);
        p
    }

    pub fn one(sig: SpaceSignature) -> Self {
        Self::constant(sig, Rational::one())
    }

    /// The coordinate function `y^i`.
    pub fn var(sig: SpaceSignature, i: usize) -> Self {
        Self::monomial(sig, Monomial::var(&sig, i), Rational::one())
    }

    pub fn monomial(sig: SpaceSignature, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(sig);
        p.add_term(m, c);
        p
    }

    pub fn signature(&self) -> SpaceSignature {
        self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
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

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Maximum total degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SuperPolynomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.sig);
        }
        Self {
            sig: self.sig,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Product; errors on a signature mismatch.
    pub fn try_mul(&self, other: &SuperPolynomial) -> Result<Self> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(
                self.sig.to_string(),
                other.sig.to_string(),
            ));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &SuperPolynomial) -> Self {
        let mut out = Self::zero(self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Multiplies by a single signed monomial on the left.
    pub fn mul_monomial_left(&self, m: &Monomial, c: &Rational) -> Self {
        let mut out = Self::zero(self.sig);
        for (mb, cb) in &self.terms {
            if let Some((neg, mm)) = m.mul(mb) {
                let v = c * cb;
                out.add_term(mm, if neg { -v } else { v });
            }
        }
        out
    }

    /// Left partial derivative `∂_{y^i}`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.sig.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.sig.dim(),
            });
        }
        Ok(self.d(i))
    }

    /// Unchecked left partial derivative.
    pub(crate) fn d(&self, i: usize) -> Self {
        let mut out = Self::zero(self.sig);
        for (m, c) in &self.terms {
            if let Some((f, dm)) = m.derive(&self.sig, i) {
                out.add_term(dm, c * Rational::from_integer(f.into()));
            }
        }
        out
    }

    pub fn parity_of(&self) -> ParityOf {
        let mut seen: Option<bool> = None;
        for m in self.terms.keys() {
            let o = m.is_odd();
            match seen {
                None => seen = Some(o),
                Some(s) if s != o => return ParityOf::Mixed,
                _ => {}
            }
        }
        ParityOf::Homogeneous(Parity::from_odd(seen.unwrap_or(false)))
    }

    /// Parity of a homogeneous polynomial; zero counts as even.
    pub fn homogeneous_parity(&self) -> Result<Parity> {
        match self.parity_of() {
            ParityOf::Homogeneous(p) => Ok(p),
            ParityOf::Mixed => Err(Error::MixedParity("parity")),
        }
    }

    /// `(even part, odd part)`.
    pub fn split_parity(&self) -> (Self, Self) {
        let mut even = Self::zero(self.sig);
        let mut odd = Self::zero(self.sig);
        for (m, c) in &self.terms {
            if m.is_odd() {
                odd.terms.insert(m.clone(), c.clone());
            } else {
                even.terms.insert(m.clone(), c.clone());
            }
        }
        (even, odd)
    }

    /// `f0 + (-1)^odd f1`: the Koszul sign picked up when an object of the
    /// given parity moves across this polynomial.
    pub fn koszul(&self, odd: bool) -> Self {
        if !odd {
            return self.clone();
        }
        Self {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.is_odd() { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// Every term has constant (degree-zero) monomial.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Largest absolute coefficient (zero for the zero polynomial).
    pub fn max_abs_coefficient(&self) -> Rational {
        use num_traits::Signed;
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Canonical text: terms in canonical order, `num/den * factors`.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0/1".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    fmt_rational(c)
                } else {
                    format!("{} * {}", fmt_rational(c), m.fmt_with(&self.sig, "x", "th"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses the canonical text form.
    pub fn parse(sig: SpaceSignature, s: &str) -> Result<Self> {
        let mut out = Self::zero(sig);
        let s = s.trim();
        if s.is_empty() {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let (coef, mono) = match term.split_once('*') {
                Some((c, m)) => (c.trim(), m.trim()),
                None => (term.trim(), "1"),
            };
            let c = parse_rational(coef)?;
            let m = parse_monomial(&sig, mono)?;
            out.add_term(m, c);
        }
        Ok(out)
    }
}

fn parse_monomial(sig: &SpaceSignature, s: &str) -> Result<Monomial> {
    let mut m = Monomial::one(sig);
    if s == "1" {
        return Ok(m);
    }
    let bad = || Error::Parse(format!("bad monomial {s:?}"));
    for factor in s.split_whitespace() {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<u16>().map_err(|_| bad())?),
            None => (factor, 1),
        };
        if let Some(idx) = name.strip_prefix("th") {
            let b: usize = idx.parse().map_err(|_| bad())?;
            if b == 0 || b > sig.odd_dim() || exp != 1 || m.odd >> (b - 1) & 1 == 1 {
                return Err(bad());
            }
            m.odd |= 1 << (b - 1);
        } else if let Some(idx) = name.strip_prefix('x') {
            let i: usize = idx.parse().map_err(|_| bad())?;
            if i == 0 || i > sig.even_dim() {
                return Err(bad());
            }
            m.even[i - 1] += exp;
        } else {
            return Err(bad());
        }
    }
    Ok(m)
}

/// Supercommutative product; errors when the signatures differ.
pub fn poly_mul(a: &SuperPolynomial, b: &SuperPolynomial) -> Result<SuperPolynomial> {
    a.try_mul(b)
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl<'a> Add<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(mut self, rhs: SuperPolynomial) -> SuperPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&SuperPolynomial> for SuperPolynomial {
    fn add_assign(&mut self, rhs: &SuperPolynomial) {
        debug_assert_eq!(self.sig, rhs.sig);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        SuperPolynomial {
            sig: self.sig,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<'a> Mul<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    /// Panics on a signature mismatch; use [`poly_mul`] for the checked form.
    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        assert_eq!(self.sig, rhs.sig, "signature mismatch in product");
        self.mul_unchecked(rhs)
    }
}

/// All monomials of total degree `<= max_degree` (odd variables count 1 each).
pub fn monomials_up_to(sig: &SpaceSignature, max_degree: usize) -> Vec<Monomial> {
    (0..=max_degree)
        .flat_map(|k| monomials_of_degree(sig, k))
        .collect()
}

/// All monomials of total degree exactly `k`, in canonical order.
pub fn monomials_of_degree(sig: &SpaceSignature, k: usize) -> Vec<Monomial> {
    let m = sig.even_dim();
    let nodd = sig.odd_dim();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << nodd) {
        let c = mask.count_ones() as usize;
        if c > k {
            continue;
        }
        let mut exps = vec![0u16; m];
        compositions(k - c, 0, &mut exps, &mut |e| {
            out.push(Monomial {
                even: e.iter().copied().collect(),
                odd: mask,
            })
        });
    }
    out.sort();
    out
}

fn compositions(rest: usize, pos: usize, exps: &mut Vec<u16>, f: &mut impl FnMut(&[u16])) {
    if pos == exps.len() {
        if rest == 0 {
            f(exps);
        }
        return;
    }
    for e in 0..=rest {
        exps[pos] = e as u16;
        compositions(rest - e, pos + 1, exps, f);
    }
    exps[pos] = 0;
}
