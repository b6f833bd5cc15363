//! The Weyl superalgebra 𝒜(V) of polynomial differential operators on S(V):
//! normal-ordered elements Σ c · X^A ∂^B, their composition, supercommutator,
//! action on super-polynomials, and bidegree bookkeeping.
//!
//! Normal order puts all variables to the left of all derivatives, with
//! ascending basis index inside each block. A stored derivative multi-index
//! B denotes the written word (∂^1)^{b_1}⋯(∂^N)^{b_N}; compositions act
//! right-to-left, so the highest-index factor is applied first. Written
//! words in any other order are canonicalised with Koszul signs, so e.g.
//! the word ∂_η∂_θ equals −∂_θ∂_η and sends θη to +1.

use crate::scalars::{ParamScalar, ParamSet, Rational};
use crate::superpoly::{
    check_signatures, format_monomial, format_signed_coeff, MultiIndex, Parity, PolyParser,
    Signature, SuperError, SuperPolynomial, WordFactor,
};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// An element of 𝒜(V) in normal order: finitely many terms
/// (A, B) ↦ c meaning c · X^A ∂^B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    sig: Arc<Signature>,
    terms: BTreeMap<(MultiIndex, MultiIndex), ParamScalar>,
}

impl WeylElement {
    pub fn zero(sig: &Arc<Signature>) -> WeylElement {
        WeylElement {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The scalar `c` as a multiplication operator.
    pub fn constant(sig: &Arc<Signature>, c: ParamScalar) -> WeylElement {
        let mut w = WeylElement::zero(sig);
        w.add_term(
            MultiIndex::zero(sig.dim()),
            MultiIndex::zero(sig.dim()),
            c,
        );
        w
    }

    pub fn one(sig: &Arc<Signature>, params: &ParamSet) -> WeylElement {
        WeylElement::constant(sig, ParamScalar::one(params))
    }

    /// Multiplication by the generator X_i.
    pub fn variable(sig: &Arc<Signature>, params: &ParamSet, i: usize) -> WeylElement {
        assert!(i < sig.dim(), "generator index out of range");
        let mut w = WeylElement::zero(sig);
        w.add_term(
            MultiIndex::unit(sig.dim(), i),
            MultiIndex::zero(sig.dim()),
            ParamScalar::one(params),
        );
        w
    }

    /// The partial derivative ∂^i.
    pub fn derivative(sig: &Arc<Signature>, params: &ParamSet, i: usize) -> WeylElement {
        assert!(i < sig.dim(), "generator index out of range");
        let mut w = WeylElement::zero(sig);
        w.add_term(
            MultiIndex::zero(sig.dim()),
            MultiIndex::unit(sig.dim(), i),
            ParamScalar::one(params),
        );
        w
    }

    /// Multiplication by a polynomial.
    pub fn from_polynomial(p: &SuperPolynomial) -> WeylElement {
        let sig = p.signature().clone();
        let mut w = WeylElement::zero(&sig);
        for (a, c) in p.terms() {
            w.add_term(a.clone(), MultiIndex::zero(sig.dim()), c.clone());
        }
        w
    }

    /// Canonicalises a written word of variables and derivatives (applied
    /// right-to-left) into normal order.
    pub(crate) fn from_word(
        sig: &Arc<Signature>,
        coeff: ParamScalar,
        word: &[WordFactor],
    ) -> WeylElement {
        let mut w = WeylElement::zero(sig);
        for (sign, a, b) in normal_order_word(sig, word) {
            let c = if sign < 0 { coeff.neg() } else { coeff.clone() };
            w.add_term(a, b, c);
        }
        w
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(MultiIndex, MultiIndex), ParamScalar> {
        &self.terms
    }

    pub fn add_term(&mut self, vars: MultiIndex, ders: MultiIndex, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(vars.valid_for(&self.sig) && ders.valid_for(&self.sig));
        match self.terms.entry((vars, ders)) {
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

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> WeylElement {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ParamScalar) -> WeylElement {
        let mut out = WeylElement::zero(&self.sig);
        for ((a, b), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), v.mul(c));
        }
        out
    }

    /// Operator composition self∘other, in normal order.
    pub fn mul(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        let mut out = WeylElement::zero(&self.sig);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let mut word: Vec<WordFactor> = Vec::new();
                word.extend(a1.word().into_iter().map(WordFactor::Var));
                word.extend(b1.word().into_iter().map(WordFactor::Der));
                word.extend(a2.word().into_iter().map(WordFactor::Var));
                word.extend(b2.word().into_iter().map(WordFactor::Der));
                let coeff = c1.mul(c2);
                for (sign, a, b) in normal_order_word(&self.sig, &word) {
                    let c = if sign < 0 { coeff.neg() } else { coeff.clone() };
                    out.add_term(a, b, c);
                }
            }
        }
        out
    }

    /// Parity of a term X^A ∂^B.
    fn term_parity(&self, a: &MultiIndex, b: &MultiIndex) -> Parity {
        let parities = self.sig.parities();
        a.parity(&parities).plus(b.parity(&parities))
    }

    /// Parity when homogeneous (`None` otherwise; zero counts as even).
    pub fn parity(&self) -> Option<Parity> {
        let mut result = None;
        for (a, b) in self.terms.keys() {
            let p = self.term_parity(a, b);
            match result {
                None => result = Some(p),
                Some(q) if q == p => {}
                _ => return None,
            }
        }
        result.or(Some(Parity::Even))
    }

    /// Splits into (even, odd) parity components.
    pub fn parity_components(&self) -> (WeylElement, WeylElement) {
        let mut even = WeylElement::zero(&self.sig);
        let mut odd = WeylElement::zero(&self.sig);
        for ((a, b), c) in &self.terms {
            let target = if self.term_parity(a, b).is_odd() {
                &mut odd
            } else {
                &mut even
            };
            target.add_term(a.clone(), b.clone(), c.clone());
        }
        (even, odd)
    }

    /// The supercommutator [self, other] = ab − (−1)^{|a||b|}ba, extended
    /// bilinearly from homogeneous components.
    pub fn supercommutator(&self, other: &WeylElement) -> WeylElement {
        let (se, so) = self.parity_components();
        let (oe, oo) = other.parity_components();
        let mut out = WeylElement::zero(&self.sig);
        for (a, b, both_odd) in [
            (&se, &oe, false),
            (&se, &oo, false),
            (&so, &oe, false),
            (&so, &oo, true),
        ] {
            let ab = a.mul(b);
            let ba = b.mul(a);
            out = out.add(&if both_odd { ab.add(&ba) } else { ab.sub(&ba) });
        }
        out
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, p: &SuperPolynomial) -> SuperPolynomial {
        assert_eq!(&self.sig, p.signature(), "signature mismatch");
        let mut out = SuperPolynomial::zero(&self.sig);
        for ((a, b), c) in &self.terms {
            let derived = p.apply_derivative_word(b);
            if derived.is_zero() {
                continue;
            }
            let mono = SuperPolynomial::monomial(&self.sig, a.clone(), c.clone());
            out = out.add(&mono.mul(&derived));
        }
        out
    }

    /// All (variable degree, derivative degree) pairs present.
    pub fn bidegree_support(&self) -> BTreeSet<(u32, u32)> {
        self.terms
            .keys()
            .map(|(a, b)| (a.total(), b.total()))
            .collect()
    }

    /// Summarises the bidegree; `None` for the zero element.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let support = self.bidegree_support();
        let mut it = support.iter();
        let &(v0, d0) = it.next()?;
        let mut var = DegreePart::Exact(v0);
        let mut der = DegreePart::Exact(d0);
        for &(v, d) in it {
            if v != v0 {
                var = DegreePart::Mixed;
            }
            if d != d0 {
                der = DegreePart::Mixed;
            }
        }
        Some(Bidegree {
            variable_degree: var,
            derivative_degree: der,
        })
    }

    /// Substitutes rational values for some scalar parameters in every
    /// coefficient.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, Rational>,
    ) -> Result<WeylElement, crate::scalars::ScalarError> {
        let mut out = WeylElement::zero(&self.sig);
        for ((a, b), c) in &self.terms {
            out.add_term(a.clone(), b.clone(), c.substitute(assignment)?);
        }
        Ok(out)
    }

    /// JSON form: a list of `{"variables", "derivatives", "coeff"}` objects.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((a, b), c)| {
                    json!({
                        "variables": a.0.clone(),
                        "derivatives": b.0.clone(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }

    /// Parses the JSON form produced by [`WeylElement::to_json`].
    pub fn from_json(
        sig: &Arc<Signature>,
        params: &ParamSet,
        value: &Value,
    ) -> Result<WeylElement, SuperError> {
        let list = value
            .as_array()
            .ok_or_else(|| SuperError::ParseError("expected a JSON array".into()))?;
        let mut out = WeylElement::zero(sig);
        for item in list {
            let read_mi = |key: &str| -> Result<MultiIndex, SuperError> {
                let arr = item
                    .get(key)
                    .and_then(Value::as_array)
                    .ok_or_else(|| SuperError::ParseError(format!("missing `{key}`")))?;
                let mi = MultiIndex(
                    arr.iter()
                        .map(|v| {
                            v.as_u64()
                                .map(|x| x as u32)
                                .ok_or_else(|| SuperError::ParseError("bad exponent".into()))
                        })
                        .collect::<Result<_, _>>()?,
                );
                if mi.valid_for(sig) {
                    Ok(mi)
                } else {
                    Err(SuperError::InvalidMultiIndex(format!("{:?}", mi.0)))
                }
            };
            let a = read_mi("variables")?;
            let b = read_mi("derivatives")?;
            let coeff = item
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| SuperError::ParseError("missing `coeff`".into()))?;
            out.add_term(a, b, ParamScalar::parse(params, coeff)?);
        }
        Ok(out)
    }

    /// Parses the text form, e.g. `lam - 2*y*Dy - th*Dth`. `D<name>` is the
    /// derivative with respect to the generator `<name>`; words in any
    /// order are canonicalised.
    pub fn parse(
        sig: &Arc<Signature>,
        params: &ParamSet,
        input: &str,
    ) -> Result<WeylElement, SuperError> {
        let mut parser = PolyParser::new(sig, params, input, true)?;
        let terms = parser.weyl_terms()?;
        parser.expect_end()?;
        let mut out = WeylElement::zero(sig);
        for (coeff, word) in terms {
            out = out.add(&WeylElement::from_word(sig, coeff, &word));
        }
        Ok(out)
    }

    /// LaTeX form with `D<name>` rendered as `\partial_{<symbol>}`.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
            let (lead, body) = format_signed_coeff(c, first);
            out.push_str(&lead);
            let mut factors: Vec<String> = Vec::new();
            if !body.is_empty() {
                factors.push(latex_scalar(&body));
            }
            push_latex_monomial(&mut factors, &self.sig, a, false);
            push_latex_monomial(&mut factors, &self.sig, b, true);
            if factors.is_empty() {
                out.push('1');
            } else {
                out.push_str(&factors.join(" "));
            }
            first = false;
        }
        out
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
            let (lead, body) = format_signed_coeff(c, first);
            write!(f, "{lead}")?;
            let vars = format_monomial(&self.sig, a, |n| n.to_string());
            let ders = format_monomial(&self.sig, b, |n| format!("D{n}"));
            let mono = match (vars.as_str(), ders.as_str()) {
                ("", "") => String::new(),
                (v, "") => v.to_string(),
                ("", d) => d.to_string(),
                (v, d) => format!("{v}*{d}"),
            };
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

/// Bidegree summary of an operator: each component is a single natural
/// number when all terms agree and "mixed" otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreePart {
    Exact(u32),
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bidegree {
    pub variable_degree: DegreePart,
    pub derivative_degree: DegreePart,
}

impl fmt::Display for DegreePart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreePart::Exact(n) => write!(f, "{n}"),
            DegreePart::Mixed => write!(f, "mixed"),
        }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.variable_degree, self.derivative_degree)
    }
}

// ---------------------------------------------------------------------------
// Spec-level operation surface with signature checking
// ---------------------------------------------------------------------------

/// Composition with an explicit signature check.
pub fn weyl_mul(a: &WeylElement, b: &WeylElement) -> Result<WeylElement, SuperError> {
    check_signatures(a.signature(), b.signature())?;
    Ok(a.mul(b))
}

/// Supercommutator with an explicit signature check.
pub fn supercommutator(a: &WeylElement, b: &WeylElement) -> Result<WeylElement, SuperError> {
    check_signatures(a.signature(), b.signature())?;
    Ok(a.supercommutator(b))
}

/// Action on a polynomial with an explicit signature check.
pub fn apply(a: &WeylElement, p: &SuperPolynomial) -> Result<SuperPolynomial, SuperError> {
    check_signatures(a.signature(), p.signature())?;
    Ok(a.apply(p))
}

/// Bidegree support (spec-level alias of the method).
pub fn bidegree_support(a: &WeylElement) -> BTreeSet<(u32, u32)> {
    a.bidegree_support()
}

// ---------------------------------------------------------------------------
// Normal ordering
// ---------------------------------------------------------------------------

/// Rewrites a written word into normal order using
/// ∂^i x_j = δ_{ij} + (−1)^{|i||j|} x_j ∂^i, then sorts each block with
/// Koszul signs. Returns the resulting terms as (sign, variables,
/// derivatives); words containing an odd square are dropped.
fn normal_order_word(
    sig: &Arc<Signature>,
    word: &[WordFactor],
) -> Vec<(i32, MultiIndex, MultiIndex)> {
    let parities = sig.parities();
    let mut out = Vec::new();
    let mut stack: Vec<(i32, Vec<WordFactor>)> = vec![(1, word.to_vec())];
    while let Some((sign, w)) = stack.pop() {
        // Find the leftmost derivative immediately followed by a variable.
        let mut cross = None;
        for p in 0..w.len().saturating_sub(1) {
            if let (WordFactor::Der(i), WordFactor::Var(j)) = (w[p], w[p + 1]) {
                cross = Some((p, i, j));
                break;
            }
        }
        match cross {
            Some((p, i, j)) => {
                let kappa = if parities[i].is_odd() && parities[j].is_odd() {
                    -1
                } else {
                    1
                };
                let mut swapped = w.clone();
                swapped.swap(p, p + 1);
                stack.push((sign * kappa, swapped));
                if i == j {
                    let mut shortened = w.clone();
                    shortened.drain(p..=p + 1);
                    stack.push((sign, shortened));
                }
            }
            None => {
                // The word is (variables)(derivatives); sort each block.
                let split = w
                    .iter()
                    .position(|f| matches!(f, WordFactor::Der(_)))
                    .unwrap_or(w.len());
                let vars: Vec<usize> = w[..split]
                    .iter()
                    .map(|f| match f {
                        WordFactor::Var(i) => *i,
                        WordFactor::Der(_) => unreachable!(),
                    })
                    .collect();
                let ders: Vec<usize> = w[split..]
                    .iter()
                    .map(|f| match f {
                        WordFactor::Der(i) => *i,
                        WordFactor::Var(_) => unreachable!(),
                    })
                    .collect();
                if let (Some((a, sa)), Some((b, sb))) = (
                    sort_block(sig, &parities, &vars),
                    sort_block(sig, &parities, &ders),
                ) {
                    out.push((sign * sa * sb, a, b));
                }
            }
        }
    }
    out
}

/// Sorts a block of generator indices into ascending order, returning the
/// exponent multi-index and the Koszul sign, or `None` when an odd index
/// repeats (the square of an odd variable or derivative is zero).
fn sort_block(
    sig: &Arc<Signature>,
    parities: &[Parity],
    block: &[usize],
) -> Option<(MultiIndex, i32)> {
    let mut exps = vec![0u32; sig.dim()];
    let mut inversions = 0u64;
    for (p, &i) in block.iter().enumerate() {
        if parities[i].is_odd() {
            if exps[i] == 1 {
                return None;
            }
            for &j in &block[p + 1..] {
                if parities[j].is_odd() && j < i {
                    inversions += 1;
                }
            }
        }
        exps[i] += 1;
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((MultiIndex(exps), sign))
}

// ---------------------------------------------------------------------------
// LaTeX helpers
// ---------------------------------------------------------------------------

/// Maps a generator or parameter name to a LaTeX symbol: common Greek-letter
/// abbreviations are expanded and trailing digits become subscripts.
pub fn latex_symbol(name: &str) -> String {
    let stem_end = name
        .rfind(|c: char| !c.is_ascii_digit())
        .map_or(0, |i| i + 1);
    let (stem, digits) = name.split_at(stem_end);
    let mapped = match stem {
        "th" => "\\theta",
        "et" => "\\eta",
        "lam" => "\\lambda",
        "alpha" | "beta" | "gamma" | "delta" | "epsilon" | "zeta" | "eta" | "theta" | "iota"
        | "kappa" | "lambda" | "mu" | "nu" | "xi" | "pi" | "rho" | "sigma" | "tau" | "phi"
        | "chi" | "psi" | "omega" => return format_latex_greek(stem, digits),
        other => other,
    };
    if digits.is_empty() {
        mapped.to_string()
    } else {
        format!("{mapped}_{{{digits}}}")
    }
}

fn format_latex_greek(stem: &str, digits: &str) -> String {
    if digits.is_empty() {
        format!("\\{stem}")
    } else {
        format!("\\{stem}_{{{digits}}}")
    }
}

/// Replaces identifier runs in a printed scalar by their LaTeX symbols and
/// drops explicit `*` signs.
pub fn latex_scalar(text: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            out.push_str(&latex_symbol(&name));
        } else if c == '*' {
            out.push(' ');
            i += 1;
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn push_latex_monomial(
    factors: &mut Vec<String>,
    sig: &Signature,
    k: &MultiIndex,
    derivatives: bool,
) {
    for (i, &e) in k.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let symbol = latex_symbol(sig.name(i));
        let base = if derivatives {
            format!("\\partial_{{{symbol}}}")
        } else {
            symbol
        };
        if e == 1 {
            factors.push(base);
        } else {
            factors.push(format!("{base}^{{{e}}}"));
        }
    }
}
