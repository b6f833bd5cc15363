//! The supersymmetric algebra S(V) for V = 𝕂^{m|n}: sparse super-polynomials
//! over [`ParamScalar`] coefficients, multi-indices ℕ^m × {0,1}^n, Koszul
//! signs, and super partial derivatives.
//!
//! Monomials are stored canonically as X_1^{k_1} ⋯ X_{m+n}^{k_{m+n}} with
//! the generators in ascending basis order, even generators first. All signs
//! follow from reordering odd generators into that canonical order.

use crate::scalars::{ParamScalar, ParamSet, Rational, ScalarError};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// ℤ/2 degree of a homogeneous object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity addition (mod 2).
    pub fn plus(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// Errors for super-polynomial construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuperError {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),
    #[error("invalid generator index {0}")]
    InvalidIndex(usize),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

/// The shape of V = 𝕂^{m|n}: m even generators followed by n odd ones, each
/// with a distinct name. Generator i is even iff i < m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    m: usize,
    n: usize,
    names: Vec<String>,
}

impl Signature {
    /// Builds a signature from even and odd generator names (in that order).
    pub fn new(even: &[&str], odd: &[&str]) -> Arc<Signature> {
        let names: Vec<String> = even
            .iter()
            .chain(odd.iter())
            .map(|s| s.to_string())
            .collect();
        for (i, a) in names.iter().enumerate() {
            assert!(!names[i + 1..].contains(a), "duplicate generator name `{a}`");
        }
        Arc::new(Signature {
            m: even.len(),
            n: odd.len(),
            names,
        })
    }

    /// Number of even generators.
    pub fn even_count(&self) -> usize {
        self.m
    }

    /// Number of odd generators.
    pub fn odd_count(&self) -> usize {
        self.n
    }

    /// Total number of generators.
    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    pub fn parity(&self, i: usize) -> Parity {
        assert!(i < self.dim(), "generator index out of range");
        if i < self.m {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parities of all generators in order.
    pub fn parities(&self) -> Vec<Parity> {
        (0..self.dim()).map(|i| self.parity(i)).collect()
    }
}

/// Checks that two signatures agree, reporting a [`SuperError`] otherwise.
pub fn check_signatures(a: &Signature, b: &Signature) -> Result<(), SuperError> {
    if a == b {
        Ok(())
    } else {
        Err(SuperError::SignatureMismatch(format!(
            "{:?} vs {:?}",
            a.names, b.names
        )))
    }
}

// ---------------------------------------------------------------------------
// Multi-indices
// ---------------------------------------------------------------------------

/// An element of ℕ^m × {0,1}^n: exponents of a canonical monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> MultiIndex {
        MultiIndex(vec![0; dim])
    }

    /// The multi-index e_i.
    pub fn unit(dim: usize, i: usize) -> MultiIndex {
        let mut v = vec![0; dim];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// |K| = Σ k_i.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// K! = k_1! ⋯ k_{m+n}! (odd exponents are at most one, so only the even
    /// block contributes).
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &k in &self.0 {
            for j in 2..=k {
                acc *= BigInt::from(j);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// Component-wise sum.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Component-wise difference; `None` when any entry would go negative.
    pub fn minus(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(MultiIndex(out))
    }

    /// True when `self` ≤ `other` component-wise.
    pub fn leq(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Validity for a signature: correct length and odd exponents ≤ 1.
    pub fn valid_for(&self, sig: &Signature) -> bool {
        self.0.len() == sig.dim()
            && self.0[sig.even_count()..].iter().all(|&k| k <= 1)
    }

    /// Parity of the monomial X^K (number of odd generators present, mod 2).
    pub fn parity(&self, parities: &[Parity]) -> Parity {
        let odd_count: u32 = self
            .0
            .iter()
            .zip(parities)
            .filter(|(_, p)| p.is_odd())
            .map(|(k, _)| *k)
            .sum();
        if odd_count % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The written word of the monomial: each generator index repeated by
    /// its exponent, in ascending order.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::new();
        for (i, &k) in self.0.iter().enumerate() {
            for _ in 0..k {
                w.push(i);
            }
        }
        w
    }
}

/// All multi-indices over slots with the given parities whose total degree
/// is exactly `total` (odd slots capped at exponent one).
pub fn multi_indices_of_degree(parities: &[Parity], total: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; parities.len()];
    fn rec(
        parities: &[Parity],
        slot: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<MultiIndex>,
    ) {
        if slot == parities.len() {
            if remaining == 0 {
                out.push(MultiIndex(current.clone()));
            }
            return;
        }
        let cap = if parities[slot].is_odd() { remaining.min(1) } else { remaining };
        for k in 0..=cap {
            current[slot] = k;
            rec(parities, slot + 1, remaining - k, current, out);
        }
        current[slot] = 0;
    }
    rec(parities, 0, total, &mut current, &mut out);
    out
}

/// All multi-indices with total degree between 1 and `max_total`.
pub fn multi_indices_up_to(parities: &[Parity], max_total: u32) -> Vec<MultiIndex> {
    (1..=max_total)
        .flat_map(|d| multi_indices_of_degree(parities, d))
        .collect()
}

// ---------------------------------------------------------------------------
// Koszul signs
// ---------------------------------------------------------------------------

/// The Koszul sign of rearranging a sequence of homogeneous elements with
/// the given parities by the permutation τ (the rearranged sequence is
/// `old[perm[0]], old[perm[1]], …`): (-1)^{number of inversions of τ among
/// pairs of odd elements}.
pub fn koszul_sign(parities: &[Parity], perm: &[usize]) -> Result<i32, SuperError> {
    if perm.len() != parities.len() {
        return Err(SuperError::InvalidPermutation(format!(
            "length {} does not match sequence length {}",
            perm.len(),
            parities.len()
        )));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(SuperError::InvalidPermutation(format!(
                "not a bijection: {perm:?}"
            )));
        }
        seen[p] = true;
    }
    let mut inversions = 0u64;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j]
                && parities[perm[i]].is_odd()
                && parities[perm[j]].is_odd()
            {
                inversions += 1;
            }
        }
    }
    Ok(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Sign and exponents of the product of two canonical monomials, or `None`
/// when an odd generator would appear twice.
pub fn monomial_mul(
    sig: &Signature,
    a: &MultiIndex,
    b: &MultiIndex,
) -> Option<(MultiIndex, i32)> {
    let m = sig.even_count();
    // Odd squares vanish.
    for i in m..sig.dim() {
        if a.0[i] + b.0[i] > 1 {
            return None;
        }
    }
    // Moving each odd generator of b into position past the odd generators
    // of a with larger index contributes one transposition each.
    let mut inversions = 0u64;
    for j in m..sig.dim() {
        if b.0[j] == 1 {
            for i in (j + 1)..sig.dim() {
                if a.0[i] == 1 {
                    inversions += 1;
                }
            }
        }
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((a.plus(b), sign))
}

// ---------------------------------------------------------------------------
// Super-polynomials
// ---------------------------------------------------------------------------

/// An element of S(V): a finite sum of canonical monomials with nonzero
/// [`ParamScalar`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPolynomial {
    sig: Arc<Signature>,
    terms: BTreeMap<MultiIndex, ParamScalar>,
}

impl SuperPolynomial {
    pub fn zero(sig: &Arc<Signature>) -> SuperPolynomial {
        SuperPolynomial {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(sig: &Arc<Signature>, c: ParamScalar) -> SuperPolynomial {
        let mut p = SuperPolynomial::zero(sig);
        p.add_term(MultiIndex::zero(sig.dim()), c);
        p
    }

    pub fn one(sig: &Arc<Signature>, params: &ParamSet) -> SuperPolynomial {
        SuperPolynomial::constant(sig, ParamScalar::one(params))
    }

    /// The generator X_i.
    pub fn generator(sig: &Arc<Signature>, params: &ParamSet, i: usize) -> SuperPolynomial {
        assert!(i < sig.dim(), "generator index out of range");
        let mut p = SuperPolynomial::zero(sig);
        p.add_term(MultiIndex::unit(sig.dim(), i), ParamScalar::one(params));
        p
    }

    /// A single monomial with the given coefficient.
    pub fn monomial(sig: &Arc<Signature>, mi: MultiIndex, c: ParamScalar) -> SuperPolynomial {
        assert!(mi.valid_for(sig), "invalid multi-index for the signature");
        let mut p = SuperPolynomial::zero(sig);
        p.add_term(mi, c);
        p
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, ParamScalar> {
        &self.terms
    }

    pub fn coeff(&self, mi: &MultiIndex) -> Option<&ParamScalar> {
        self.terms.get(mi)
    }

    /// Adds `c * X^mi` in place.
    pub fn add_term(&mut self, mi: MultiIndex, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(mi.valid_for(&self.sig));
        match self.terms.entry(mi) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &SuperPolynomial) -> SuperPolynomial {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> SuperPolynomial {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.neg();
        }
        out
    }

    pub fn sub(&self, other: &SuperPolynomial) -> SuperPolynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ParamScalar) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(&self.sig);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.mul(c));
        }
        out
    }

    /// Supercommutative product with Koszul signs.
    pub fn mul(&self, other: &SuperPolynomial) -> SuperPolynomial {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        let mut out = SuperPolynomial::zero(&self.sig);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                if let Some((k, sign)) = monomial_mul(&self.sig, ka, kb) {
                    let mut c = va.mul(vb);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.add_term(k, c);
                }
            }
        }
        out
    }

    /// The super partial derivative ∂^i, a left derivation of the same
    /// parity as generator i: ∂^i X_j = δ_{ij} and
    /// ∂^i(ab) = ∂^i(a) b + (-1)^{|i||a|} a ∂^i(b).
    pub fn partial_derivative(&self, i: usize) -> SuperPolynomial {
        assert!(i < self.sig.dim(), "generator index out of range");
        let m = self.sig.even_count();
        let mut out = SuperPolynomial::zero(&self.sig);
        for (k, c) in &self.terms {
            if k.0[i] == 0 {
                continue;
            }
            let mut expts = k.clone();
            expts.0[i] -= 1;
            if i < m {
                out.add_term(expts, c.scale(&Rational::from(BigInt::from(k.0[i]))));
            } else {
                // Jump the derivative over the odd generators that precede
                // position i in the canonical word.
                let skipped: u32 = (m..i).map(|j| k.0[j]).sum();
                let c = if skipped % 2 == 0 { c.clone() } else { c.neg() };
                out.add_term(expts, c);
            }
        }
        out
    }

    /// The composite derivative ∂^K read as the written word
    /// (∂^1)^{k_1} ⋯ (∂^{m+n})^{k_{m+n}} and applied as a composition, so
    /// the highest-index factor acts first.
    pub fn apply_derivative_word(&self, k: &MultiIndex) -> SuperPolynomial {
        let mut acc = self.clone();
        for i in (0..self.sig.dim()).rev() {
            for _ in 0..k.0[i] {
                if acc.is_zero() {
                    return acc;
                }
                acc = acc.partial_derivative(i);
            }
        }
        acc
    }

    /// Total degree of the highest-degree monomial, or `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.total()).max()
    }

    /// Parity of the polynomial when homogeneous (`None` otherwise; zero
    /// counts as even).
    pub fn parity(&self) -> Option<Parity> {
        let parities = self.sig.parities();
        let mut result = None;
        for k in self.terms.keys() {
            let p = k.parity(&parities);
            match result {
                None => result = Some(p),
                Some(q) if q == p => {}
                _ => return None,
            }
        }
        result.or(Some(Parity::Even))
    }

    /// The sum of terms of exact total degree `d`.
    pub fn homogeneous_component(&self, d: u32) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(&self.sig);
        for (k, c) in &self.terms {
            if k.total() == d {
                out.add_term(k.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes rational values for some scalar parameters in every
    /// coefficient.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, Rational>,
    ) -> Result<SuperPolynomial, ScalarError> {
        let mut out = SuperPolynomial::zero(&self.sig);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.substitute(assignment)?);
        }
        Ok(out)
    }

    /// JSON form: a list of `{"exponents": [...], "coeff": "..."}` objects.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| {
                    json!({
                        "exponents": k.0.clone(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }

    /// Parses the JSON form produced by [`SuperPolynomial::to_json`].
    pub fn from_json(
        sig: &Arc<Signature>,
        params: &ParamSet,
        value: &Value,
    ) -> Result<SuperPolynomial, SuperError> {
        let list = value
            .as_array()
            .ok_or_else(|| SuperError::ParseError("expected a JSON array".into()))?;
        let mut out = SuperPolynomial::zero(sig);
        for item in list {
            let expts = item
                .get("exponents")
                .and_then(Value::as_array)
                .ok_or_else(|| SuperError::ParseError("missing `exponents`".into()))?;
            let coeff = item
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| SuperError::ParseError("missing `coeff`".into()))?;
            let mi = MultiIndex(
                expts
                    .iter()
                    .map(|v| {
                        v.as_u64()
                            .map(|x| x as u32)
                            .ok_or_else(|| SuperError::ParseError("bad exponent".into()))
                    })
                    .collect::<Result<_, _>>()?,
            );
            if !mi.valid_for(sig) {
                return Err(SuperError::InvalidMultiIndex(format!("{:?}", mi.0)));
            }
            out.add_term(mi, ParamScalar::parse(params, coeff)?);
        }
        Ok(out)
    }

    /// Parses the text form, e.g. `3/2*x^2*y*th*et - (lam + 1)*x`.
    /// Parenthesised groups may contain scalar parameters and generators;
    /// division is only allowed by scalar (generator-free) expressions.
    pub fn parse(
        sig: &Arc<Signature>,
        params: &ParamSet,
        input: &str,
    ) -> Result<SuperPolynomial, SuperError> {
        let mut parser = PolyParser::new(sig, params, input, false)?;
        let terms = parser.weyl_terms()?;
        parser.expect_end()?;
        let mut acc = SuperPolynomial::zero(sig);
        for (coeff, word) in terms {
            let mut p = SuperPolynomial::constant(sig, coeff);
            for f in word {
                match f {
                    WordFactor::Var(i) => {
                        p = p.mul(&SuperPolynomial::generator(sig, params, i));
                    }
                    WordFactor::Der(_) => {
                        return Err(SuperError::ParseError(
                            "derivative symbol in a polynomial".into(),
                        ));
                    }
                }
            }
            acc = acc.add(&p);
        }
        Ok(acc)
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let (lead, body) = format_signed_coeff(c, first);
            write!(f, "{lead}")?;
            let mono = format_monomial(&self.sig, k, |n| n.to_string());
            match (body.as_str(), mono.as_str()) {
                ("", "") => write!(f, "1")?,
                (b, "") => write!(f, "{b}")?,
                ("", m) => write!(f, "{m}")?,
                (b, m) => write!(f, "{b}*{m}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Formats the sign/separator and coefficient body of a term. Returns the
/// leading separator (`"-"`, `" + "`, `" - "` or empty) and the coefficient
/// string without its sign when the coefficient is `±1` times something
/// printable, with parentheses around multi-term scalar coefficients.
pub(crate) fn format_signed_coeff(c: &ParamScalar, first: bool) -> (String, String) {
    let s = c.to_string();
    let (negative, mag) = match s.strip_prefix('-') {
        // A leading minus only means "negated scalar" when the rest has no
        // top-level + or -; otherwise keep the scalar intact.
        Some(rest) if !has_top_level_sign(rest) => (true, rest.to_string()),
        _ => (false, s),
    };
    let sep = match (first, negative) {
        (true, false) => String::new(),
        (true, true) => "-".to_string(),
        (false, false) => " + ".to_string(),
        (false, true) => " - ".to_string(),
    };
    let body = if mag == "1" {
        String::new()
    } else if has_top_level_sign(&mag) {
        format!("({mag})")
    } else {
        mag
    };
    (sep, body)
}

/// True when the printed scalar contains a `+` or `-` outside parentheses
/// (so it must be wrapped before being used as a product factor).
fn has_top_level_sign(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

pub(crate) fn format_monomial(
    sig: &Signature,
    k: &MultiIndex,
    name_of: impl Fn(&str) -> String,
) -> String {
    let mut factors = Vec::new();
    for (i, &e) in k.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = name_of(sig.name(i));
        if e == 1 {
            factors.push(name);
        } else {
            factors.push(format!("{name}^{e}"));
        }
    }
    factors.join("*")
}

// ---------------------------------------------------------------------------
// Text parsing shared by super-polynomials and Weyl elements
// ---------------------------------------------------------------------------

/// One factor of a written word: a generator or a derivative symbol
/// `D<name>`. The polynomial parser rejects derivatives; the Weyl parser
/// keeps the factor order for canonicalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum WordFactor {
    Var(usize),
    Der(usize),
}

pub(crate) struct PolyParser {
    sig: Arc<Signature>,
    params: ParamSet,
    tokens: Vec<PToken>,
    pos: usize,
    allow_derivatives: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum PToken {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn poly_tokenize(input: &str) -> Result<Vec<PToken>, SuperError> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                tokens.push(PToken::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(PToken::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(PToken::Star);
                i += 1;
            }
            '/' => {
                tokens.push(PToken::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(PToken::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(PToken::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(PToken::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                tokens.push(PToken::Int(text.parse().map_err(
                    |e: num_bigint::ParseBigIntError| SuperError::ParseError(e.to_string()),
                )?));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(PToken::Name(chars[start..i].iter().collect()));
            }
            other => {
                return Err(SuperError::ParseError(format!(
                    "unexpected character `{other}`"
                )))
            }
        }
    }
    Ok(tokens)
}

impl PolyParser {
    pub(crate) fn new(
        sig: &Arc<Signature>,
        params: &ParamSet,
        input: &str,
        allow_derivatives: bool,
    ) -> Result<PolyParser, SuperError> {
        Ok(PolyParser {
            sig: sig.clone(),
            params: params.clone(),
            tokens: poly_tokenize(input)?,
            pos: 0,
            allow_derivatives,
        })
    }

    pub(crate) fn expect_end(&self) -> Result<(), SuperError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(SuperError::ParseError("unexpected trailing input".into()))
        }
    }

    fn peek(&self) -> Option<&PToken> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<PToken> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Parses a sum and returns each term as a coefficient and an ordered
    /// factor word (variables and derivative symbols in written order).
    pub(crate) fn weyl_terms(
        &mut self,
    ) -> Result<Vec<(ParamScalar, Vec<WordFactor>)>, SuperError> {
        let mut out = Vec::new();
        let mut negate = false;
        if matches!(self.peek(), Some(PToken::Minus)) {
            self.advance();
            negate = true;
        }
        self.term_into(negate, &mut out)?;
        loop {
            match self.peek() {
                Some(PToken::Plus) => {
                    self.advance();
                    self.term_into(false, &mut out)?;
                }
                Some(PToken::Minus) => {
                    self.advance();
                    self.term_into(true, &mut out)?;
                }
                _ => return Ok(out),
            }
        }
    }

    /// Parses one product term (`factor (('*'|'/') factor)*`) and appends
    /// its expanded words to `out`. Products distribute over parenthesised
    /// sums, preserving factor order.
    fn term_into(
        &mut self,
        negate: bool,
        out: &mut Vec<(ParamScalar, Vec<WordFactor>)>,
    ) -> Result<(), SuperError> {
        let mut words: Vec<(ParamScalar, Vec<WordFactor>)> =
            vec![(ParamScalar::one(&self.params), Vec::new())];
        let first = self.factor()?;
        self.apply_factor(&mut words, first, false)?;
        loop {
            let dividing = match self.peek() {
                Some(PToken::Star) => false,
                Some(PToken::Slash) => true,
                _ => break,
            };
            self.advance();
            let factor = self.factor()?;
            self.apply_factor(&mut words, factor, dividing)?;
        }
        for (mut c, w) in words {
            if negate {
                c = c.neg();
            }
            out.push((c, w));
        }
        Ok(())
    }

    fn apply_factor(
        &self,
        words: &mut Vec<(ParamScalar, Vec<WordFactor>)>,
        factor: FactorValue,
        dividing: bool,
    ) -> Result<(), SuperError> {
        match factor {
            FactorValue::Scalar(s) => {
                for (c, _) in words.iter_mut() {
                    *c = if dividing { c.div(&s)? } else { c.mul(&s) };
                }
            }
            FactorValue::Words(sub) => {
                if dividing {
                    return Err(SuperError::ParseError(
                        "cannot divide by a non-scalar expression".into(),
                    ));
                }
                let mut next = Vec::new();
                for (c, w) in words.iter() {
                    for (sc, sw) in &sub {
                        let mut word = w.clone();
                        word.extend_from_slice(sw);
                        next.push((c.mul(sc), word));
                    }
                }
                *words = next;
            }
        }
        Ok(())
    }

    fn factor(&mut self) -> Result<FactorValue, SuperError> {
        let base = self.atom()?;
        let mut power: Option<u32> = None;
        while matches!(self.peek(), Some(PToken::Caret)) {
            self.advance();
            match self.advance() {
                Some(PToken::Int(n)) => {
                    let e = u32::try_from(&n).map_err(|_| {
                        SuperError::ParseError(format!("exponent {n} out of range"))
                    })?;
                    power = Some(power.map_or(e, |p| p * e));
                }
                other => {
                    return Err(SuperError::ParseError(format!(
                        "expected natural exponent after `^`, found {other:?}"
                    )))
                }
            }
        }
        let e = match power {
            None => return Ok(base),
            Some(e) => e,
        };
        match base {
            FactorValue::Scalar(s) => {
                let mut acc = ParamScalar::one(&self.params);
                for _ in 0..e {
                    acc = acc.mul(&s);
                }
                Ok(FactorValue::Scalar(acc))
            }
            FactorValue::Words(words) => {
                // Repeated multiplication of the word sum by itself.
                let mut acc: Vec<(ParamScalar, Vec<WordFactor>)> =
                    vec![(ParamScalar::one(&self.params), Vec::new())];
                for _ in 0..e {
                    let mut next = Vec::new();
                    for (c, w) in &acc {
                        for (sc, sw) in &words {
                            let mut word = w.clone();
                            word.extend_from_slice(sw);
                            next.push((c.mul(sc), word));
                        }
                    }
                    acc = next;
                }
                Ok(FactorValue::Words(acc))
            }
        }
    }

    fn atom(&mut self) -> Result<FactorValue, SuperError> {
        match self.advance() {
            Some(PToken::Int(n)) => Ok(FactorValue::Scalar(ParamScalar::from_rational(
                &self.params,
                Rational::from(n),
            ))),
            Some(PToken::Name(name)) => {
                if let Some(i) = self.sig.index_of(&name) {
                    return Ok(FactorValue::Words(vec![(
                        ParamScalar::one(&self.params),
                        vec![WordFactor::Var(i)],
                    )]));
                }
                if self.allow_derivatives {
                    if let Some(rest) = name.strip_prefix('D') {
                        if let Some(i) = self.sig.index_of(rest) {
                            return Ok(FactorValue::Words(vec![(
                                ParamScalar::one(&self.params),
                                vec![WordFactor::Der(i)],
                            )]));
                        }
                    }
                }
                Ok(FactorValue::Scalar(ParamScalar::parameter(
                    &self.params,
                    &name,
                )?))
            }
            Some(PToken::LParen) => {
                let words = self.weyl_terms()?;
                match self.advance() {
                    Some(PToken::RParen) => {
                        if words.iter().all(|(_, w)| w.is_empty()) {
                            let mut s = ParamScalar::zero(&self.params);
                            for (c, _) in &words {
                                s = s.add(c);
                            }
                            Ok(FactorValue::Scalar(s))
                        } else {
                            Ok(FactorValue::Words(words))
                        }
                    }
                    _ => Err(SuperError::ParseError(
                        "missing closing parenthesis".into(),
                    )),
                }
            }
            other => Err(SuperError::ParseError(format!(
                "unexpected token {other:?}"
            ))),
        }
    }
}

enum FactorValue {
    Scalar(ParamScalar),
    Words(Vec<(ParamScalar, Vec<WordFactor>)>),
}
