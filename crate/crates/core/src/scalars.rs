//! Exact scalars: arbitrary-precision rationals and the fraction field
//! ℚ(α, λ, …) of multivariate polynomials in a declared set of formal
//! parameters.
//!
//! [`ParamScalar`] is the coefficient domain used by every other module. It
//! is kept in a canonical form (numerator and denominator coprime, the
//! denominator monic with respect to the lexicographic monomial order), so
//! structural equality decides mathematical equality.
//!
//! The module also provides the Bernoulli numbers [`bernoulli`] with the
//! convention B_1 = -1/2, and the derived coefficients [`c_coefficient`]
//! (C_1 = -1/2 and C_i = -B_i for i >= 2).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Arbitrary-precision rational number with reduced representation and
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Errors produced by scalar construction, arithmetic and evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the given parameter values: {0}")]
    PoleAtSpecialization(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("no value assigned to parameter `{0}`")]
    MissingParameter(String),
}

// ---------------------------------------------------------------------------
// Parameter sets
// ---------------------------------------------------------------------------

/// An ordered, immutable set of formal parameter names, shared by every
/// scalar of a computation. Scalars from different parameter sets must not
/// be mixed; doing so is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    names: Arc<Vec<String>>,
}

impl ParamSet {
    /// Creates a parameter set from distinct names.
    pub fn new(names: &[&str]) -> Self {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        for (i, a) in owned.iter().enumerate() {
            assert!(
                !owned[i + 1..].contains(a),
                "duplicate parameter name `{a}`"
            );
        }
        ParamSet {
            names: Arc::new(owned),
        }
    }

    /// The empty parameter set (plain rational arithmetic).
    pub fn empty() -> Self {
        ParamSet::new(&[])
    }

    /// Number of parameters.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// True when there are no parameters.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Parameter names in declaration order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of a parameter name, if declared.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn check_same(&self, other: &ParamSet) {
        assert!(
            self == other,
            "mixed scalars from different parameter sets: {:?} vs {:?}",
            self.names,
            other.names
        );
    }
}

// ---------------------------------------------------------------------------
// Multivariate polynomials over the rationals
// ---------------------------------------------------------------------------

/// A multivariate polynomial with rational coefficients in the parameters of
/// a [`ParamSet`]. Terms map exponent vectors (one entry per parameter, in
/// declaration order) to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoly {
    params: ParamSet,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl ParamPoly {
    /// The zero polynomial.
    pub fn zero(params: &ParamSet) -> Self {
        ParamPoly {
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(params: &ParamSet, c: Rational) -> Self {
        let mut p = ParamPoly::zero(params);
        if !c.is_zero() {
            p.terms.insert(vec![0; params.len()], c);
        }
        p
    }

    /// The polynomial consisting of a single parameter.
    pub fn parameter(params: &ParamSet, index: usize) -> Self {
        assert!(index < params.len(), "parameter index out of range");
        let mut expts = vec![0; params.len()];
        expts[index] = 1;
        let mut p = ParamPoly::zero(params);
        p.terms.insert(expts, Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the constant value when the polynomial has degree zero.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            if k.iter().all(|&e| e == 0) {
                return Some(v.clone());
            }
        }
        None
    }

    fn insert_term(&mut self, expts: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(expts) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        self.params.check_same(&other.params);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.insert_term(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        self.params.check_same(&other.params);
        let mut out = ParamPoly::zero(&self.params);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let expts: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.insert_term(expts, va * vb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero(&self.params);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c;
        }
        out
    }

    /// Leading term under the lexicographic order on exponent vectors.
    fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree in the given parameter.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|k| k[index]).max().unwrap_or(0)
    }

    /// Evaluates the polynomial at rational parameter values. The slice must
    /// assign a value to every parameter of the set.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.params.len());
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            let mut term = c.clone();
            for (e, v) in k.iter().zip(values) {
                for _ in 0..*e {
                    term *= v;
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes rational values for a subset of the parameters, leaving
    /// the rest formal. The result lives over the same parameter set.
    pub fn substitute(&self, values: &BTreeMap<usize, Rational>) -> ParamPoly {
        let mut out = ParamPoly::zero(&self.params);
        for (k, c) in &self.terms {
            let mut coeff = c.clone();
            let mut expts = k.clone();
            for (&i, v) in values {
                for _ in 0..expts[i] {
                    coeff *= v;
                }
                expts[i] = 0;
            }
            out.insert_term(expts, coeff);
        }
        out
    }

    /// Exact division; returns `None` when the division leaves a remainder.
    pub fn divide_exact(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        self.params.check_same(&divisor.params);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero(&self.params);
        let (dk, dc) = {
            let (k, c) = divisor.leading().unwrap();
            (k.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rk, rc) = {
                let (k, c) = rem.leading().unwrap();
                (k.clone(), c.clone())
            };
            let mut qk = Vec::with_capacity(rk.len());
            for (a, b) in rk.iter().zip(&dk) {
                if a < b {
                    return None;
                }
                qk.push(a - b);
            }
            let qc = rc / dc.clone();
            let mut qterm = ParamPoly::zero(&self.params);
            qterm.terms.insert(qk.clone(), qc.clone());
            rem = rem.sub(&qterm.mul(divisor));
            quot.insert_term(qk, qc);
        }
        Some(quot)
    }

    /// Greatest common divisor, exact over ℚ, computed by a primitive
    /// polynomial remainder sequence recursing on the highest active
    /// parameter. Returned up to a unit; callers normalise.
    pub fn gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
        a.params.check_same(&b.params);
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let top = (0..a.params.len())
            .rev()
            .find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0);
        let v = match top {
            None => return ParamPoly::constant(&a.params, Rational::one()),
            Some(v) => v,
        };
        let (ca, pa) = a.content_primitive(v);
        let (cb, pb) = b.content_primitive(v);
        let content_gcd = ParamPoly::gcd(&ca, &cb);
        let mut r0 = pa;
        let mut r1 = pb;
        if r0.degree_in(v) < r1.degree_in(v) {
            std::mem::swap(&mut r0, &mut r1);
        }
        loop {
            let rem = ParamPoly::pseudo_rem(&r0, &r1, v);
            if rem.is_zero() {
                let (_, prim) = r1.content_primitive(v);
                return content_gcd.mul(&prim);
            }
            let (_, prim_rem) = rem.content_primitive(v);
            r0 = r1;
            r1 = prim_rem;
        }
    }

    /// Scales the polynomial so its coefficients become coprime integers
    /// with a positive leading (lexicographic) coefficient. Returns the
    /// rational `c` and the scaled polynomial `p` with `self = c * p`.
    fn rat_primitive(&self) -> (Rational, ParamPoly) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let as_int = c.numer() * &denom_lcm / c.denom();
            numer_gcd = num_integer::gcd(numer_gcd, as_int);
        }
        let mut factor = Rational::new(denom_lcm, numer_gcd);
        if self.leading().unwrap().1.is_negative() {
            factor = -factor;
        }
        let scaled = self.scale(&factor);
        (factor.recip(), scaled)
    }

    /// Splits into content and primitive part with respect to parameter `v`:
    /// content = gcd of the coefficient polynomials (which do not involve
    /// `v`), and `self = content * primitive`. The primitive part is also
    /// scaled to coprime integer coefficients; without that normalisation a
    /// remainder sequence over ℚ would never shed coefficient growth, since
    /// every rational is a unit.
    fn content_primitive(&self, v: usize) -> (ParamPoly, ParamPoly) {
        let coeffs = self.univariate_in(v);
        let mut content = ParamPoly::zero(&self.params);
        for c in coeffs.values() {
            content = ParamPoly::gcd(&content, c);
        }
        // Normalise the content so repeated runs are deterministic: make its
        // lexicographic leading coefficient positive.
        if let Some((_, lc)) = content.leading() {
            if lc.is_negative() {
                content = content.neg();
            }
        }
        let prim = self
            .divide_exact(&content)
            .expect("content must divide the polynomial");
        let (c, prim) = prim.rat_primitive();
        (content.scale(&c), prim)
    }

    /// Views the polynomial as univariate in parameter `v`, returning the
    /// map from v-degree to coefficient polynomial (with the v-exponent
    /// cleared).
    fn univariate_in(&self, v: usize) -> BTreeMap<u32, ParamPoly> {
        let mut out: BTreeMap<u32, ParamPoly> = BTreeMap::new();
        for (k, c) in &self.terms {
            let d = k[v];
            let mut rest = k.clone();
            rest[v] = 0;
            out.entry(d)
                .or_insert_with(|| ParamPoly::zero(&self.params))
                .insert_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    fn from_univariate(params: &ParamSet, v: usize, coeffs: &BTreeMap<u32, ParamPoly>) -> ParamPoly {
        let mut out = ParamPoly::zero(params);
        for (d, c) in coeffs {
            for (k, val) in &c.terms {
                let mut expts = k.clone();
                expts[v] += d;
                out.insert_term(expts, val.clone());
            }
        }
        out
    }

    /// Pseudo-remainder of `a` by `b` viewed as univariate in `v`:
    /// lc(b)^(deg a - deg b + 1) * a reduced modulo b.
    fn pseudo_rem(a: &ParamPoly, b: &ParamPoly, v: usize) -> ParamPoly {
        let db = b.degree_in(v);
        let b_uni = b.univariate_in(v);
        let lb = b_uni[&db].clone();
        let mut rem = a.clone();
        while !rem.is_zero() && rem.degree_in(v) >= db {
            let da = rem.degree_in(v);
            let rem_uni = rem.univariate_in(v);
            let la = rem_uni[&da].clone();
            // rem <- lb * rem - la * v^(da-db) * b
            let mut shift: BTreeMap<u32, ParamPoly> = BTreeMap::new();
            shift.insert(da - db, la);
            let shifted = ParamPoly::from_univariate(&a.params, v, &shift).mul(b);
            rem = rem.mul(&lb).sub(&shifted);
        }
        rem
    }

    fn to_display_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const_term = k.iter().all(|&e| e == 0);
            if !mag.is_one() || is_const_term {
                factors.push(format_rational(&mag));
            }
            for (idx, &e) in k.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.params.names()[idx];
                if e == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Number of terms (used by the printer to decide on parentheses).
    fn term_count(&self) -> usize {
        self.terms.len()
    }
}

fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

// ---------------------------------------------------------------------------
// ParamScalar: the fraction field
// ---------------------------------------------------------------------------

/// An element of the fraction field ℚ(parameters), stored in canonical form:
/// numerator and denominator coprime and the denominator monic under the
/// lexicographic monomial order (so the denominator of any rational constant
/// is the polynomial 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamScalar {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamScalar {
    fn normalised(num: ParamPoly, den: ParamPoly) -> ParamScalar {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let params = num.params.clone();
            return ParamScalar {
                num,
                den: ParamPoly::constant(&params, Rational::one()),
            };
        }
        let g = ParamPoly::gcd(&num, &den);
        let mut num = num.divide_exact(&g).expect("gcd divides numerator");
        let mut den = den.divide_exact(&g).expect("gcd divides denominator");
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ParamScalar { num, den }
    }

    pub fn zero(params: &ParamSet) -> ParamScalar {
        ParamScalar {
            num: ParamPoly::zero(params),
            den: ParamPoly::constant(params, Rational::one()),
        }
    }

    pub fn one(params: &ParamSet) -> ParamScalar {
        ParamScalar::from_rational(params, Rational::one())
    }

    pub fn from_rational(params: &ParamSet, q: Rational) -> ParamScalar {
        ParamScalar {
            num: ParamPoly::constant(params, q),
            den: ParamPoly::constant(params, Rational::one()),
        }
    }

    pub fn from_int(params: &ParamSet, n: i64) -> ParamScalar {
        ParamScalar::from_rational(params, Rational::from(BigInt::from(n)))
    }

    /// The parameter with the given name.
    pub fn parameter(params: &ParamSet, name: &str) -> Result<ParamScalar, ScalarError> {
        let idx = params
            .index_of(name)
            .ok_or_else(|| ScalarError::UnknownParameter(name.to_string()))?;
        Ok(ParamScalar {
            num: ParamPoly::parameter(params, idx),
            den: ParamPoly::constant(params, Rational::one()),
        })
    }

    pub fn params(&self) -> &ParamSet {
        &self.num.params
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.as_constant().map(|c| c.is_one()) == Some(true)
            && self.num.as_constant().map(|c| c.is_one()) == Some(true)
    }

    /// Returns the rational value when the scalar is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// True when the scalar does not involve the given parameter.
    pub fn is_free_of(&self, index: usize) -> bool {
        self.num.degree_in(index) == 0 && self.den.degree_in(index) == 0
    }

    pub fn add(&self, other: &ParamScalar) -> ParamScalar {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        ParamScalar::normalised(num, den)
    }

    pub fn neg(&self) -> ParamScalar {
        ParamScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &ParamScalar) -> ParamScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ParamScalar) -> ParamScalar {
        ParamScalar::normalised(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &ParamScalar) -> Result<ParamScalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(ParamScalar::normalised(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn scale(&self, q: &Rational) -> ParamScalar {
        ParamScalar::normalised(self.num.scale(q), self.den.clone())
    }

    /// Evaluates at a full assignment of rational values to parameters.
    pub fn specialize(
        &self,
        assignment: &BTreeMap<String, Rational>,
    ) -> Result<Rational, ScalarError> {
        let params = self.params().clone();
        let mut values = Vec::with_capacity(params.len());
        for name in params.names() {
            match assignment.get(name) {
                Some(v) => values.push(v.clone()),
                None => {
                    if self.is_free_of(params.index_of(name).unwrap()) {
                        values.push(Rational::zero());
                    } else {
                        return Err(ScalarError::MissingParameter(name.clone()));
                    }
                }
            }
        }
        let den = self.den.eval(&values);
        if den.is_zero() {
            return Err(ScalarError::PoleAtSpecialization(self.to_string()));
        }
        Ok(self.num.eval(&values) / den)
    }

    /// Substitutes rational values for a subset of the parameters, leaving
    /// the others formal. Fails when the denominator collapses to zero.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, Rational>,
    ) -> Result<ParamScalar, ScalarError> {
        let params = self.params();
        let mut by_index: BTreeMap<usize, Rational> = BTreeMap::new();
        for (name, v) in assignment {
            let idx = params
                .index_of(name)
                .ok_or_else(|| ScalarError::UnknownParameter(name.clone()))?;
            by_index.insert(idx, v.clone());
        }
        let den = self.den.substitute(&by_index);
        if den.is_zero() {
            return Err(ScalarError::PoleAtSpecialization(self.to_string()));
        }
        Ok(ParamScalar::normalised(
            self.num.substitute(&by_index),
            den,
        ))
    }

    /// Parses a scalar from the textual grammar
    /// `expr := term (('+'|'-') term)*`,
    /// `term := factor (('*'|'/') factor)*`,
    /// `factor := atom ('^' nat)*`,
    /// `atom := rational | param | '(' expr ')'`,
    /// with an optional leading minus.
    pub fn parse(params: &ParamSet, input: &str) -> Result<ParamScalar, ScalarError> {
        let tokens = tokenize(input)?;
        let mut parser = Parser {
            params: params.clone(),
            tokens,
            pos: 0,
        };
        let value = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(ScalarError::ParseError(format!(
                "unexpected trailing input in `{input}`"
            )));
        }
        Ok(value)
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().map(|c| c.is_one()) == Some(true) {
            return write!(f, "{}", self.num.to_display_string());
        }
        let num_str = self.num.to_display_string();
        let den_str = self.den.to_display_string();
        let num_wrapped = if self.num.term_count() > 1 {
            format!("({num_str})")
        } else {
            num_str
        };
        let den_wrapped = if den_str.contains(['+', '-', '*']) {
            format!("({den_str})")
        } else {
            den_str
        };
        write!(f, "{num_wrapped}/{den_wrapped}")
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
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

fn tokenize(input: &str) -> Result<Vec<Token>, ScalarError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<BigInt>()
                    .map_err(|e| ScalarError::ParseError(e.to_string()))?;
                tokens.push(Token::Int(value));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                tokens.push(Token::Name(chars[start..i].iter().collect()));
            }
            other => {
                return Err(ScalarError::ParseError(format!(
                    "unexpected character `{other}`"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    params: ParamSet,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<ParamScalar, ScalarError> {
        let negate = matches!(self.peek(), Some(Token::Minus));
        if negate {
            self.advance();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.advance();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Token::Minus) => {
                    self.advance();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ParamScalar, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.advance();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Token::Slash) => {
                    self.advance();
                    let f = self.factor()?;
                    acc = acc.div(&f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ParamScalar, ScalarError> {
        let mut base = self.atom()?;
        while matches!(self.peek(), Some(Token::Caret)) {
            self.advance();
            match self.advance() {
                Some(Token::Int(n)) => {
                    let e = u32::try_from(&n).map_err(|_| {
                        ScalarError::ParseError(format!("exponent {n} out of range"))
                    })?;
                    let mut acc = ParamScalar::one(&self.params);
                    for _ in 0..e {
                        acc = acc.mul(&base);
                    }
                    base = acc;
                }
                other => {
                    return Err(ScalarError::ParseError(format!(
                        "expected natural exponent after `^`, found {other:?}"
                    )))
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamScalar, ScalarError> {
        match self.advance() {
            Some(Token::Int(n)) => Ok(ParamScalar::from_rational(
                &self.params,
                Rational::from(n),
            )),
            Some(Token::Name(name)) => ParamScalar::parameter(&self.params, &name),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.advance() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(ScalarError::ParseError(
                        "missing closing parenthesis".to_string(),
                    )),
                }
            }
            other => Err(ScalarError::ParseError(format!(
                "unexpected token {other:?}"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Bernoulli numbers
// ---------------------------------------------------------------------------

/// Binomial coefficient as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

static BERNOULLI_CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// The Bernoulli number B_i with the convention B_1 = -1/2, computed by the
/// recursion B_i = -Σ_{j=0}^{i-1} (i choose j) B_j / (i - j + 1) with
/// B_0 = 1. Results are memoized; concurrent callers share the cache.
pub fn bernoulli(i: u32) -> Rational {
    let cache = BERNOULLI_CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]));
    let mut table = cache.lock().expect("bernoulli cache poisoned");
    while table.len() <= i as usize {
        let n = table.len() as u32;
        let mut sum = Rational::zero();
        for j in 0..n {
            let weight = Rational::new(binomial(n, j), BigInt::from(n - j + 1));
            sum += weight * table[j as usize].clone();
        }
        table.push(-sum);
    }
    table[i as usize].clone()
}

/// The coefficient C_i appearing in the rewriting of the left-regular
/// action: C_1 = B_1 = -1/2 and C_i = -B_i for i >= 2. Undefined for i = 0.
pub fn c_coefficient(i: u32) -> Result<Rational, ScalarError> {
    match i {
        0 => Err(ScalarError::DomainError(
            "C_0 is not defined".to_string(),
        )),
        1 => Ok(rat(-1, 2)),
        _ => Ok(-bernoulli(i)),
    }
}
