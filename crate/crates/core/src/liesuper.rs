//! Finite-dimensional Lie superalgebras over the parameter field: exact
//! structure constants, validation (antisymmetry, parity, super Jacobi),
//! ℤ-gradings, characters, and the symmetrised iterated-adjoint operator
//! s^K built from ad̃_Z(Y) := [Y, Z].

use crate::linalg::Matrix;
use crate::scalars::{ParamScalar, ParamSet, ScalarError};
use crate::superpoly::{koszul_sign, MultiIndex, Parity, SuperError};
use crate::weyl::WeylElement;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use thiserror::Error;

/// A coordinate vector over the basis of a Lie superalgebra.
pub type GVec = Vec<ParamScalar>;

/// Errors for Lie superalgebra construction and use.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("commutator not in the span of the given operators: {0}")]
    NotClosed(String),
    #[error("the given operators are linearly dependent: {0}")]
    LinearlyDependent(String),
    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Super(#[from] SuperError),
}

// ---------------------------------------------------------------------------
// The algebra
// ---------------------------------------------------------------------------

/// A Lie superalgebra given by a homogeneous basis (even elements first)
/// and the structure tensor [X_i, X_j] = Σ_k c_{ij}^k X_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSuperalgebra {
    params: ParamSet,
    names: Vec<String>,
    parities: Vec<Parity>,
    table: Vec<Vec<GVec>>,
}

impl LieSuperalgebra {
    /// Builds an algebra from bracket entries with scalar-string
    /// coefficients; missing brackets are zero and the super-antisymmetric
    /// completion is applied (an entry for (j, i) may be omitted when (i, j)
    /// is given).
    pub fn from_brackets(
        params: &ParamSet,
        basis: &[(&str, Parity)],
        brackets: &[(usize, usize, &[(usize, &str)])],
    ) -> Result<LieSuperalgebra, LieError> {
        let mut entries = Vec::new();
        for &(i, j, coeffs) in brackets {
            let mut v = Vec::new();
            for &(k, text) in coeffs {
                v.push((k, ParamScalar::parse(params, text)?));
            }
            entries.push((i, j, v));
        }
        LieSuperalgebra::from_bracket_entries(params, basis, entries)
    }

    /// As [`LieSuperalgebra::from_brackets`], with parsed coefficients.
    pub fn from_bracket_entries(
        params: &ParamSet,
        basis: &[(&str, Parity)],
        entries: Vec<(usize, usize, Vec<(usize, ParamScalar)>)>,
    ) -> Result<LieSuperalgebra, LieError> {
        let names: Vec<String> = basis.iter().map(|(n, _)| n.to_string()).collect();
        let parities: Vec<Parity> = basis.iter().map(|&(_, p)| p).collect();
        for (i, n) in names.iter().enumerate() {
            if names[i + 1..].contains(n) {
                return Err(LieError::InvalidInput(format!("duplicate basis name `{n}`")));
            }
        }
        if let Some(first_odd) = parities.iter().position(|p| p.is_odd()) {
            if parities[first_odd..].iter().any(|p| !p.is_odd()) {
                return Err(LieError::InvalidInput(
                    "basis must list all even elements before all odd elements".into(),
                ));
            }
        }
        let dim = names.len();
        let zero_vec = vec![ParamScalar::zero(params); dim];
        let mut table = vec![vec![zero_vec.clone(); dim]; dim];
        let mut provided = vec![vec![false; dim]; dim];
        for (i, j, coeffs) in entries {
            if i >= dim || j >= dim {
                return Err(LieError::InvalidInput(format!(
                    "bracket index ({i}, {j}) out of range for dimension {dim}"
                )));
            }
            if provided[i][j] {
                return Err(LieError::InvalidInput(format!(
                    "bracket ({i}, {j}) given twice"
                )));
            }
            provided[i][j] = true;
            for (k, c) in coeffs {
                if k >= dim {
                    return Err(LieError::InvalidInput(format!(
                        "bracket target index {k} out of range"
                    )));
                }
                table[i][j][k] = table[i][j][k].add(&c);
            }
        }
        // Super-antisymmetric completion: [X_j, X_i] = -(-1)^{|i||j|}[X_i, X_j].
        for i in 0..dim {
            for j in 0..dim {
                if !provided[i][j] {
                    continue;
                }
                let sign_flip = !(parities[i].is_odd() && parities[j].is_odd());
                let mirrored: GVec = table[i][j]
                    .iter()
                    .map(|c| if sign_flip { c.neg() } else { c.clone() })
                    .collect();
                if provided[j][i] {
                    if i != j && table[j][i] != mirrored {
                        return Err(LieError::InvalidInput(format!(
                            "brackets ({i}, {j}) and ({j}, {i}) are not super-antisymmetric"
                        )));
                    }
                } else if i != j {
                    table[j][i] = mirrored;
                }
            }
        }
        // The diagonal must vanish except for odd elements.
        for i in 0..dim {
            if !parities[i].is_odd() && table[i][i].iter().any(|c| !c.is_zero()) {
                return Err(LieError::InvalidInput(format!(
                    "[X_{i}, X_{i}] must vanish for an even basis element"
                )));
            }
        }
        Ok(LieSuperalgebra {
            params: params.clone(),
            names,
            parities,
            table,
        })
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn even_count(&self) -> usize {
        self.parities.iter().filter(|p| !p.is_odd()).count()
    }

    pub fn odd_count(&self) -> usize {
        self.dim() - self.even_count()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero_vector(&self) -> GVec {
        vec![ParamScalar::zero(&self.params); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> GVec {
        let mut v = self.zero_vector();
        v[i] = ParamScalar::one(&self.params);
        v
    }

    /// The structure vector [X_i, X_j].
    pub fn bracket_basis(&self, i: usize, j: usize) -> &GVec {
        &self.table[i][j]
    }

    /// Bilinear extension of the structure tensor.
    pub fn bracket(&self, x: &[ParamScalar], y: &[ParamScalar]) -> Result<GVec, LieError> {
        let dim = self.dim();
        if x.len() != dim || y.len() != dim {
            return Err(LieError::DimensionMismatch(format!(
                "expected vectors of length {dim}, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        let mut out = self.zero_vector();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul(yj);
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = out[k].add(&t.mul(&c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// ad̃_{X_b}(y) = [y, X_b] for a basis element X_b.
    pub fn ad_tilde_basis(&self, b: usize, y: &[ParamScalar]) -> GVec {
        let mut out = self.zero_vector();
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (k, t) in self.table[i][b].iter().enumerate() {
                if !t.is_zero() {
                    out[k] = out[k].add(&t.mul(yi));
                }
            }
        }
        out
    }

    /// Parity of a coordinate vector when homogeneous (zero counts as even).
    pub fn vector_parity(&self, v: &[ParamScalar]) -> Option<Parity> {
        let mut result = None;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match result {
                None => result = Some(self.parities[i]),
                Some(p) if p == self.parities[i] => {}
                _ => return None,
            }
        }
        result.or(Some(Parity::Even))
    }

    /// Renders a coordinate vector as a combination of basis names.
    pub fn vector_to_string(&self, v: &[ParamScalar]) -> String {
        let mut out = String::new();
        let mut first = true;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (lead, body) = crate::superpoly::format_signed_coeff(c, first);
            out.push_str(&lead);
            if body.is_empty() {
                out.push_str(&self.names[i]);
            } else {
                out.push_str(&format!("{body}*{}", self.names[i]));
            }
            first = false;
        }
        if first {
            out.push('0');
        }
        out
    }

    /// The symmetrised iterated-adjoint operator: for a multi-index K over
    /// the listed sub-basis, s^K(X) is the average over all |K|! orderings
    /// of the multiset of operators ad̃_{X_b} (ad̃ repeated per exponent) of
    /// the Koszul-signed composition applied to X, compositions acting
    /// right-to-left.
    pub fn s_k(
        &self,
        sub_basis: &[usize],
        k: &MultiIndex,
        x: &[ParamScalar],
    ) -> Result<GVec, LieError> {
        if k.dim() != sub_basis.len() {
            return Err(LieError::InvalidMultiIndex(format!(
                "multi-index length {} does not match sub-basis size {}",
                k.dim(),
                sub_basis.len()
            )));
        }
        if x.len() != self.dim() {
            return Err(LieError::DimensionMismatch(format!(
                "expected a vector of length {}",
                self.dim()
            )));
        }
        let mut word = Vec::new();
        for (t, &b) in sub_basis.iter().enumerate() {
            if b >= self.dim() {
                return Err(LieError::InvalidMultiIndex(format!(
                    "sub-basis index {b} out of range"
                )));
            }
            if self.parities[b].is_odd() && k.0[t] > 1 {
                return Err(LieError::InvalidMultiIndex(format!(
                    "odd exponent {} at position {t}",
                    k.0[t]
                )));
            }
            for _ in 0..k.0[t] {
                word.push(b);
            }
        }
        if word.is_empty() {
            return Ok(x.to_vec());
        }
        let word_parities: Vec<Parity> = word.iter().map(|&b| self.parities[b]).collect();
        let n = word.len();
        let mut acc = self.zero_vector();
        for perm in (0..n).permutations(n) {
            let sign = koszul_sign(&word_parities, &perm)?;
            let mut cur = x.to_vec();
            for t in (0..n).rev() {
                cur = self.ad_tilde_basis(word[perm[t]], &cur);
                if cur.iter().all(ParamScalar::is_zero) {
                    break;
                }
            }
            for (a, c) in acc.iter_mut().zip(cur) {
                *a = if sign < 0 { a.sub(&c) } else { a.add(&c) };
            }
        }
        let mut fact = BigInt::one();
        for t in 2..=n {
            fact *= BigInt::from(t);
        }
        let inv = ParamScalar::from_rational(
            &self.params,
            crate::scalars::Rational::new(BigInt::one(), fact),
        );
        Ok(acc.iter().map(|c| c.mul(&inv)).collect())
    }

    /// Checks antisymmetry, parity consistency, and the super Jacobi
    /// identity on all basis triples.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                let both_odd = self.parities[i].is_odd() && self.parities[j].is_odd();
                for k in 0..dim {
                    let lhs = &self.table[i][j][k];
                    let rhs = &self.table[j][i][k];
                    let expected = if both_odd { rhs.clone() } else { rhs.neg() };
                    if *lhs != expected {
                        violations.push(format!(
                            "antisymmetry fails for [{}, {}] at {}",
                            self.names[i], self.names[j], self.names[k]
                        ));
                    }
                    let target_parity = self.parities[i].plus(self.parities[j]);
                    if !lhs.is_zero() && self.parities[k] != target_parity {
                        violations.push(format!(
                            "parity fails for [{}, {}] at {}",
                            self.names[i], self.names[j], self.names[k]
                        ));
                    }
                }
            }
        }
        let sign = |a: Parity, b: Parity| a.is_odd() && b.is_odd();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    // (-1)^{|i||k|}[X_i,[X_j,X_k]] + cyclic = 0.
                    let t1 = self
                        .bracket(&self.basis_vector(i), &self.table[j][k])
                        .expect("basis vectors have the right length");
                    let t2 = self
                        .bracket(&self.basis_vector(j), &self.table[k][i])
                        .expect("basis vectors have the right length");
                    let t3 = self
                        .bracket(&self.basis_vector(k), &self.table[i][j])
                        .expect("basis vectors have the right length");
                    let mut total = self.zero_vector();
                    for (term, flip) in [
                        (t1, sign(self.parities[i], self.parities[k])),
                        (t2, sign(self.parities[j], self.parities[i])),
                        (t3, sign(self.parities[k], self.parities[j])),
                    ] {
                        for (a, c) in total.iter_mut().zip(term) {
                            *a = if flip { a.sub(&c) } else { a.add(&c) };
                        }
                    }
                    if total.iter().any(|c| !c.is_zero()) {
                        violations.push(format!(
                            "super Jacobi fails at triple ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        ));
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// JSON form; a grading adds a `degree` field to each basis entry.
    pub fn to_json(&self, grading: Option<&ZGrading>) -> Value {
        let basis: Vec<Value> = (0..self.dim())
            .map(|i| {
                let mut obj = Map::new();
                obj.insert("name".into(), json!(self.names[i]));
                obj.insert(
                    "parity".into(),
                    json!(if self.parities[i].is_odd() { "odd" } else { "even" }),
                );
                if let Some(g) = grading {
                    obj.insert("degree".into(), json!(g.degree(i)));
                }
                Value::Object(obj)
            })
            .collect();
        let mut brackets = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let v = &self.table[i][j];
                if v.iter().all(ParamScalar::is_zero) {
                    continue;
                }
                let coeffs: Map<String, Value> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k.to_string(), json!(c.to_string())))
                    .collect();
                brackets.push(json!({"i": i, "j": j, "coeffs": coeffs}));
            }
        }
        json!({"basis": basis, "brackets": brackets})
    }

    /// Loads the JSON form, applying super-antisymmetric completion; also
    /// returns the grading when every basis entry declares a degree.
    pub fn from_json(
        params: &ParamSet,
        value: &Value,
    ) -> Result<(LieSuperalgebra, Option<ZGrading>), LieError> {
        let basis_json = value
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| LieError::InvalidInput("missing `basis` array".into()))?;
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        for item in basis_json {
            let name = item
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| LieError::InvalidInput("basis entry missing `name`".into()))?;
            let parity = match item.get("parity").and_then(Value::as_str) {
                Some("even") => Parity::Even,
                Some("odd") => Parity::Odd,
                _ => {
                    return Err(LieError::InvalidInput(format!(
                        "basis entry `{name}` needs parity \"even\" or \"odd\""
                    )))
                }
            };
            basis.push((name.to_string(), parity));
            degrees.push(item.get("degree").and_then(Value::as_i64));
        }
        let mut entries = Vec::new();
        if let Some(list) = value.get("brackets").and_then(Value::as_array) {
            for item in list {
                let i = item.get("i").and_then(Value::as_u64).ok_or_else(|| {
                    LieError::InvalidInput("bracket entry missing `i`".into())
                })? as usize;
                let j = item.get("j").and_then(Value::as_u64).ok_or_else(|| {
                    LieError::InvalidInput("bracket entry missing `j`".into())
                })? as usize;
                let coeffs = item
                    .get("coeffs")
                    .and_then(Value::as_object)
                    .ok_or_else(|| LieError::InvalidInput("bracket entry missing `coeffs`".into()))?;
                let mut parsed = Vec::new();
                for (key, text) in coeffs {
                    let k: usize = key.parse().map_err(|_| {
                        LieError::InvalidInput(format!("bad basis index `{key}`"))
                    })?;
                    let text = text.as_str().ok_or_else(|| {
                        LieError::InvalidInput("bracket coefficient must be a string".into())
                    })?;
                    parsed.push((k, ParamScalar::parse(params, text)?));
                }
                entries.push((i, j, parsed));
            }
        }
        let borrowed: Vec<(&str, Parity)> =
            basis.iter().map(|(n, p)| (n.as_str(), *p)).collect();
        let algebra = LieSuperalgebra::from_bracket_entries(params, &borrowed, entries)?;
        let grading = if degrees.iter().all(Option::is_some) && !degrees.is_empty() {
            Some(ZGrading::new(
                &algebra,
                degrees.into_iter().map(Option::unwrap).collect(),
            )?)
        } else if degrees.iter().any(Option::is_some) {
            return Err(LieError::InvalidInput(
                "either every basis entry or none must declare a degree".into(),
            ));
        } else {
            None
        };
        Ok((algebra, grading))
    }
}

/// Result of [`LieSuperalgebra::validate`].
#[derive(Clone, Debug)]
pub struct ValidationReport {
    violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }
}

// ---------------------------------------------------------------------------
// Gradings
// ---------------------------------------------------------------------------

/// A ℤ-grading assigning a degree to every basis element, compatible with
/// the bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZGrading {
    degrees: Vec<i64>,
}

impl ZGrading {
    /// Validates compatibility: [𝔤_i, 𝔤_j] ⊆ 𝔤_{i+j}.
    pub fn new(g: &LieSuperalgebra, degrees: Vec<i64>) -> Result<ZGrading, LieError> {
        if degrees.len() != g.dim() {
            return Err(LieError::InvalidGrading(format!(
                "expected {} degrees, got {}",
                g.dim(),
                degrees.len()
            )));
        }
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                for (k, c) in g.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() && degrees[k] != degrees[i] + degrees[j] {
                        return Err(LieError::InvalidGrading(format!(
                            "[{}, {}] has a component on {} of degree {} ≠ {} + {}",
                            g.name(i),
                            g.name(j),
                            g.name(k),
                            degrees[k],
                            degrees[i],
                            degrees[j]
                        )));
                    }
                }
            }
        }
        Ok(ZGrading { degrees })
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Basis indices of 𝔤₋ = ⊕_{d<0} 𝔤_d, in basis order.
    pub fn minus_indices(&self) -> Vec<usize> {
        (0..self.degrees.len())
            .filter(|&i| self.degrees[i] < 0)
            .collect()
    }

    /// Basis indices of 𝔤₀.
    pub fn zero_indices(&self) -> Vec<usize> {
        (0..self.degrees.len())
            .filter(|&i| self.degrees[i] == 0)
            .collect()
    }

    /// Basis indices of 𝔤₊ = ⊕_{d>0} 𝔤_d.
    pub fn plus_indices(&self) -> Vec<usize> {
        (0..self.degrees.len())
            .filter(|&i| self.degrees[i] > 0)
            .collect()
    }

    /// True when all degrees lie in {−1, 0, 1}.
    pub fn is_three_graded(&self) -> bool {
        self.degrees.iter().all(|d| (-1..=1).contains(d))
    }

    /// Largest n with 𝔤_{−n} ≠ 0 (zero for non-negative gradings).
    pub fn depth(&self) -> i64 {
        self.degrees.iter().map(|d| -d).max().unwrap_or(0).max(0)
    }

    /// Projection of a vector onto the components with degree < 0.
    pub fn project_minus(&self, g: &LieSuperalgebra, v: &[ParamScalar]) -> GVec {
        self.project(g, v, |d| d < 0)
    }

    /// Projection onto the components with degree ≥ 0 (the subalgebra 𝔨).
    pub fn project_nonneg(&self, g: &LieSuperalgebra, v: &[ParamScalar]) -> GVec {
        self.project(g, v, |d| d >= 0)
    }

    fn project(
        &self,
        g: &LieSuperalgebra,
        v: &[ParamScalar],
        keep: impl Fn(i64) -> bool,
    ) -> GVec {
        let mut out = g.zero_vector();
        for (i, c) in v.iter().enumerate() {
            if keep(self.degrees[i]) {
                out[i] = c.clone();
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Characters
// ---------------------------------------------------------------------------

/// A character of 𝔤₀, extended by zero on 𝔤₊: values on the degree-zero
/// basis elements, vanishing on odd elements and on [𝔤₀, 𝔤₀].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    params: ParamSet,
    values: BTreeMap<usize, ParamScalar>,
}

impl Character {
    pub fn new(
        g: &LieSuperalgebra,
        grading: &ZGrading,
        values: BTreeMap<usize, ParamScalar>,
    ) -> Result<Character, LieError> {
        for (&i, c) in &values {
            if i >= g.dim() {
                return Err(LieError::InvalidCharacter(format!(
                    "index {i} out of range"
                )));
            }
            if grading.degree(i) != 0 && !c.is_zero() {
                return Err(LieError::InvalidCharacter(format!(
                    "nonzero value on {} which is not in 𝔤₀",
                    g.name(i)
                )));
            }
            if g.parity(i).is_odd() && !c.is_zero() {
                return Err(LieError::InvalidCharacter(format!(
                    "nonzero value on the odd element {}",
                    g.name(i)
                )));
            }
        }
        let character = Character {
            params: g.params().clone(),
            values,
        };
        // λ([𝔤₀, 𝔤₀]) = 0.
        for &i in &grading.zero_indices() {
            for &j in &grading.zero_indices() {
                let v = g.bracket_basis(i, j);
                let image = character.of_vector(v);
                if !image.is_zero() {
                    return Err(LieError::InvalidCharacter(format!(
                        "λ([{}, {}]) = {} ≠ 0",
                        g.name(i),
                        g.name(j),
                        image
                    )));
                }
            }
        }
        Ok(character)
    }

    /// λ(X_i), zero when unset.
    pub fn value(&self, i: usize) -> Option<&ParamScalar> {
        self.values.get(&i)
    }

    /// λ applied to a coordinate vector (unset indices contribute zero).
    pub fn of_vector(&self, v: &[ParamScalar]) -> ParamScalar {
        let mut acc = ParamScalar::zero(&self.params);
        for (&i, lam) in &self.values {
            if i < v.len() && !v[i].is_zero() {
                acc = acc.add(&lam.mul(&v[i]));
            }
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Recovering an algebra from operators
// ---------------------------------------------------------------------------

/// Derives structure constants from a list of named operators whose span is
/// closed under the supercommutator, by exact linear solving.
pub fn algebra_from_operators(
    params: &ParamSet,
    ops: &[(String, Parity, WeylElement)],
) -> Result<LieSuperalgebra, LieError> {
    if ops.is_empty() {
        return Err(LieError::InvalidInput("no operators given".into()));
    }
    for (name, parity, op) in ops {
        match op.parity() {
            Some(p) if p == *parity || op.is_zero() => {}
            _ => {
                return Err(LieError::InvalidInput(format!(
                    "operator `{name}` is not homogeneous of its declared parity"
                )))
            }
        }
    }
    let n = ops.len();
    // Coordinates: the normal-form monomials spanning the operator span.
    let mut monomials: BTreeMap<(MultiIndex, MultiIndex), usize> = BTreeMap::new();
    for (_, _, op) in ops {
        for key in op.terms().keys() {
            let next = monomials.len();
            monomials.entry(key.clone()).or_insert(next);
        }
    }
    let rows = monomials.len();
    let vectorize = |op: &WeylElement| -> Option<Vec<ParamScalar>> {
        let mut v = vec![ParamScalar::zero(params); rows];
        for (key, c) in op.terms() {
            let &row = monomials.get(key)?;
            v[row] = c.clone();
        }
        Some(v)
    };
    let columns: Vec<Vec<ParamScalar>> = ops
        .iter()
        .map(|(_, _, op)| vectorize(op).expect("own monomials are indexed"))
        .collect();
    let matrix = Matrix::from_columns(params, &columns);
    let mut rhs = Vec::with_capacity(n * n);
    let mut rhs_names = Vec::with_capacity(n * n);
    for (ni, _, oi) in ops {
        for (nj, _, oj) in ops {
            let c = oi.supercommutator(oj);
            rhs_names.push((ni.clone(), nj.clone()));
            rhs.push(vectorize(&c).ok_or_else(|| {
                LieError::NotClosed(format!("[{ni}, {nj}] leaves the span"))
            })?);
        }
    }
    let (rank, solutions) = matrix.solve_columns(&rhs);
    if rank < n {
        return Err(LieError::LinearlyDependent(format!(
            "rank {rank} < {n} operators"
        )));
    }
    let mut entries = Vec::new();
    for (t, sol) in solutions.into_iter().enumerate() {
        let (ni, nj) = &rhs_names[t];
        let sol = sol.ok_or_else(|| {
            LieError::NotClosed(format!("[{ni}, {nj}] leaves the span"))
        })?;
        let (i, j) = (t / n, t % n);
        entries.push((
            i,
            j,
            sol.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        ));
    }
    let basis: Vec<(&str, Parity)> = ops
        .iter()
        .map(|(name, parity, _)| (name.as_str(), *parity))
        .collect();
    LieSuperalgebra::from_bracket_entries(params, &basis, entries)
}
