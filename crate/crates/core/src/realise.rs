//! Polynomial realisations of a ℤ-graded Lie superalgebra inside the Weyl
//! superalgebra over 𝔤₋ = ⊕_{d<0} 𝔤_d: the three-graded closed form and the
//! general W/H recursion, homomorphism certification, the induced action on
//! the parabolic Verma module S(𝔤₋), singular vectors, the low-degree slice
//! of the annihilator ideal, and bidegree reports.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::liesuper::{Character, GVec, LieError, LieSuperalgebra, ZGrading};
use crate::scalars::{bernoulli, c_coefficient, ParamScalar, Rational, ScalarError};
use crate::superpoly::{
    multi_indices_of_degree, multi_indices_up_to, MultiIndex, Signature, SuperError,
    SuperPolynomial,
};
use crate::uenv::UEnvElement;
use crate::weyl::{latex_symbol, WeylElement};

#[derive(Debug, Error)]
pub enum RealiseError {
    #[error("not a 3-grading: {0}")]
    NotThreeGraded(String),
    #[error("grading incompatible with the realisation: {0}")]
    GradingIncompatible(String),
    #[error("pole at the requested specialization: {0}")]
    PoleAtSpecialization(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Super(#[from] SuperError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A realisation π_λ: 𝔤 → 𝒜(𝔤₋): one Weyl-superalgebra operator per basis
/// element, certified (or certifiable) to be a Lie superalgebra morphism.
#[derive(Clone, Debug)]
pub struct Realisation {
    algebra: Arc<LieSuperalgebra>,
    grading: ZGrading,
    character: Character,
    minus: Vec<usize>,
    sig: Arc<Signature>,
    images: Vec<WeylElement>,
}

impl Realisation {
    /// Assembles a realisation from already-built images. The caller is
    /// responsible for the correspondence between `minus` (basis indices of
    /// 𝔤₋ in signature-generator order) and `sig`.
    pub(crate) fn from_parts(
        algebra: Arc<LieSuperalgebra>,
        grading: ZGrading,
        character: Character,
        minus: Vec<usize>,
        sig: Arc<Signature>,
        images: Vec<WeylElement>,
    ) -> Realisation {
        assert_eq!(images.len(), algebra.dim(), "one image per basis element");
        assert_eq!(minus.len(), sig.dim(), "one generator per 𝔤₋ basis element");
        Realisation {
            algebra,
            grading,
            character,
            minus,
            sig,
            images,
        }
    }

    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.algebra
    }

    pub fn grading(&self) -> &ZGrading {
        &self.grading
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    /// Basis indices of 𝔤₋ in basis order; position t corresponds to the
    /// t-th generator of the polynomial signature.
    pub fn minus_indices(&self) -> &[usize] {
        &self.minus
    }

    /// The signature of S(𝔤₋), named after the 𝔤₋ basis elements.
    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    /// The image of the basis element X_b.
    pub fn image(&self, b: usize) -> &WeylElement {
        &self.images[b]
    }

    pub fn images(&self) -> &[WeylElement] {
        &self.images
    }

    /// The image of an arbitrary coordinate vector, by linearity.
    pub fn image_of_vector(&self, x: &[ParamScalar]) -> Result<WeylElement, RealiseError> {
        if x.len() != self.algebra.dim() {
            return Err(RealiseError::Lie(LieError::DimensionMismatch(format!(
                "coordinate vector has length {}, expected {}",
                x.len(),
                self.algebra.dim()
            ))));
        }
        let mut out = WeylElement::zero(&self.sig);
        for (b, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.images[b].scale(c));
            }
        }
        Ok(out)
    }

    /// Extends π multiplicatively to U(𝔤) in PBW form.
    pub fn uenv_image(&self, u: &UEnvElement) -> Result<WeylElement, RealiseError> {
        if u.algebra().as_ref() != self.algebra.as_ref() {
            return Err(RealiseError::Lie(LieError::AlgebraMismatch(
                "element lives in a different enveloping algebra".to_string(),
            )));
        }
        let mut out = WeylElement::zero(&self.sig);
        for (k, c) in u.terms() {
            let mut prod = WeylElement::one(&self.sig, self.algebra.params());
            for b in k.word() {
                prod = prod.mul(&self.images[b]);
            }
            out = out.add(&prod.scale(c));
        }
        Ok(out)
    }

    /// JSON object mapping basis names to the text form of their images.
    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for b in 0..self.algebra.dim() {
            map.insert(
                self.algebra.name(b).to_string(),
                Value::String(self.images[b].to_string()),
            );
        }
        json!({ "images": Value::Object(map) })
    }

    /// LaTeX `align*` table, one row per basis element.
    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{align*}\n");
        for b in 0..self.algebra.dim() {
            out.push_str(&format!(
                "\\pi_\\lambda({}) &= {}\\\\\n",
                latex_symbol(self.algebra.name(b)),
                self.images[b].to_latex()
            ));
        }
        out.push_str("\\end{align*}\n");
        out
    }
}

/// The 𝔤₋ sub-basis (ascending; even before odd because the algebra basis
/// is) and the polynomial signature named after it.
fn minus_signature(g: &LieSuperalgebra, grading: &ZGrading) -> (Vec<usize>, Arc<Signature>) {
    let minus = grading.minus_indices();
    let even: Vec<&str> = minus
        .iter()
        .filter(|&&b| !g.parity(b).is_odd())
        .map(|&b| g.name(b))
        .collect();
    let odd: Vec<&str> = minus
        .iter()
        .filter(|&&b| g.parity(b).is_odd())
        .map(|&b| g.name(b))
        .collect();
    (minus.clone(), Signature::new(&even, &odd))
}

/// A coordinate vector supported on 𝔤₋ as a degree-1 polynomial over the
/// 𝔤₋ signature.
fn minus_polynomial(
    minus: &[usize],
    sig: &Arc<Signature>,
    v: &[ParamScalar],
) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(sig);
    for (t, &b) in minus.iter().enumerate() {
        if !v[b].is_zero() {
            out.add_term(MultiIndex::unit(minus.len(), t), v[b].clone());
        }
    }
    debug_assert_eq!(
        v.iter().filter(|c| !c.is_zero()).count(),
        out.terms().len(),
        "vector not supported on 𝔤₋"
    );
    out
}

/// The operator ∂^K as a Weyl element (K over the 𝔤₋ signature).
fn derivative_word(sig: &Arc<Signature>, params: &crate::scalars::ParamSet, k: &MultiIndex) -> WeylElement {
    let mut out = WeylElement::zero(sig);
    out.add_term(
        MultiIndex::zero(sig.dim()),
        k.clone(),
        ParamScalar::one(params),
    );
    out
}

fn precheck(
    g: &Arc<LieSuperalgebra>,
    grading: &ZGrading,
) -> Result<(Vec<usize>, Arc<Signature>), RealiseError> {
    if grading.degrees().len() != g.dim() {
        return Err(RealiseError::GradingIncompatible(format!(
            "grading has {} degrees for a {}-dimensional algebra",
            grading.degrees().len(),
            g.dim()
        )));
    }
    let (minus, sig) = minus_signature(g, grading);
    if minus.is_empty() && !grading.plus_indices().is_empty() {
        return Err(RealiseError::GradingIncompatible(
            "𝔤₋ = 0 but 𝔤₊ ≠ 0: no polynomial module can carry the realisation".to_string(),
        ));
    }
    Ok((minus, sig))
}

/// The three-graded realisation: for a grading with support in {−1, 0, 1},
///
///   π(X) = X                                         for X ∈ 𝔤₋₁,
///   π(X) = λ(X) + Σ_i [X, X_i] ∂^i                   for X ∈ 𝔤₀,
///   π(X) = Σ_i λ([X,X_i]) ∂^i
///          + (1/2) Σ_{i,j} [[X,X_i],X_j] ∂^j ∂^i      for X ∈ 𝔤₊₁.
pub fn realise_3graded(
    g: &Arc<LieSuperalgebra>,
    grading: &ZGrading,
    character: &Character,
) -> Result<Realisation, RealiseError> {
    if !grading.is_three_graded() {
        return Err(RealiseError::NotThreeGraded(format!(
            "degrees {:?} leave {{−1, 0, 1}}",
            grading.degrees()
        )));
    }
    let (minus, sig) = precheck(g, grading)?;
    let params = g.params();
    let mut images = Vec::with_capacity(g.dim());
    for b in 0..g.dim() {
        let image = match grading.degree(b) {
            d if d < 0 => WeylElement::from_polynomial(&minus_polynomial(
                &minus,
                &sig,
                &g.basis_vector(b),
            )),
            0 => {
                let mut op = WeylElement::constant(
                    &sig,
                    character.of_vector(&g.basis_vector(b)),
                );
                for (t, &i) in minus.iter().enumerate() {
                    let br = g.bracket_basis(b, i);
                    let mult = minus_polynomial(&minus, &sig, br);
                    if !mult.is_zero() {
                        op = op.add(
                            &WeylElement::from_polynomial(&mult)
                                .mul(&WeylElement::derivative(&sig, params, t)),
                        );
                    }
                }
                op
            }
            _ => {
                let mut op = WeylElement::zero(&sig);
                let half = ParamScalar::from_rational(params, Rational::new(1.into(), 2.into()));
                for (t, &i) in minus.iter().enumerate() {
                    let br = g.bracket_basis(b, i).clone();
                    let d_i = WeylElement::derivative(&sig, params, t);
                    let lam = character.of_vector(&br);
                    if !lam.is_zero() {
                        op = op.add(&d_i.scale(&lam));
                    }
                    for (u, &j) in minus.iter().enumerate() {
                        let double = g.ad_tilde_basis(j, &br);
                        let mult = minus_polynomial(&minus, &sig, &double);
                        if mult.is_zero() {
                            continue;
                        }
                        let d_j = WeylElement::derivative(&sig, params, u);
                        op = op.add(
                            &WeylElement::from_polynomial(&mult)
                                .mul(&d_j)
                                .mul(&d_i)
                                .scale(&half),
                        );
                    }
                }
                op
            }
        };
        images.push(image);
    }
    Ok(Realisation {
        algebra: Arc::clone(g),
        grading: grading.clone(),
        character: character.clone(),
        minus,
        sig,
        images,
    })
}

/// The realisation for an arbitrary finite ℤ-grading:
///
///   𝔤₋: π(X) = X + Σ_{K>0} ((−1)^{|K|} B_{|K|}/K!) s^K_{𝔤₋}(X) ∂^K,
///   𝔤₀: π(X) = λ(X) + Σ_i [X, X_i] ∂^i,
///   𝔤₊: π(X) = Σ_i Σ_j Σ_{K_1,…,K_j>0} W_{i,K_1…K_j}(X) ∂^{K_j}⋯∂^{K_1}∂^i
///             + Σ_i Σ_j Σ_{K_1,…,K_j>0} λ(H_{i,K_1…K_j}(X)) ∂^{K_j}⋯∂^{K_1}∂^i,
///
/// where W + H := [X, X_i] split along 𝔤₋ ⊕ 𝔨 at level 0 and
/// W_{…K_j} + H_{…K_j} := ((−1)^{|K_j|} C_{|K_j|}/K_j!) s^{K_j}_{𝔤₋}(H_{…K_{j−1}})
/// at deeper levels; every step lowers the ℤ-degree of H, so the recursion
/// stops within the grading depth.
pub fn realise_general(
    g: &Arc<LieSuperalgebra>,
    grading: &ZGrading,
    character: &Character,
) -> Result<Realisation, RealiseError> {
    let (minus, sig) = precheck(g, grading)?;
    let params = g.params();
    let depth = grading.depth();
    let minus_parities: Vec<crate::superpoly::Parity> =
        minus.iter().map(|&b| g.parity(b)).collect();
    let mut images = Vec::with_capacity(g.dim());
    for b in 0..g.dim() {
        let deg_b = grading.degree(b);
        let image = if deg_b < 0 {
            let x = g.basis_vector(b);
            let mut op = WeylElement::from_polynomial(&minus_polynomial(&minus, &sig, &x));
            let bound = (deg_b + depth).max(0) as u32;
            for total in 1..=bound {
                let bern = bernoulli(total);
                if bern.is_zero() {
                    continue;
                }
                for k in multi_indices_of_degree(&minus_parities, total) {
                    let sv = g.s_k(&minus, &k, &x)?;
                    let mult = minus_polynomial(&minus, &sig, &sv);
                    if mult.is_zero() {
                        continue;
                    }
                    let signed = if total % 2 == 1 {
                        -bern.clone()
                    } else {
                        bern.clone()
                    };
                    let coeff = signed / Rational::from_integer(k.factorial());
                    op = op.add(
                        &WeylElement::from_polynomial(&mult)
                            .mul(&derivative_word(&sig, params, &k))
                            .scale(&ParamScalar::from_rational(params, coeff)),
                    );
                }
            }
            op
        } else if deg_b == 0 {
            let mut op =
                WeylElement::constant(&sig, character.of_vector(&g.basis_vector(b)));
            for (t, &i) in minus.iter().enumerate() {
                let mult = minus_polynomial(&minus, &sig, g.bracket_basis(b, i));
                if !mult.is_zero() {
                    op = op.add(
                        &WeylElement::from_polynomial(&mult)
                            .mul(&WeylElement::derivative(&sig, params, t)),
                    );
                }
            }
            op
        } else {
            let mut op = WeylElement::zero(&sig);
            for (t, &i) in minus.iter().enumerate() {
                let br = g.bracket_basis(b, i).clone();
                let word = WeylElement::derivative(&sig, params, t);
                let w = grading.project_minus(g, &br);
                let mult = minus_polynomial(&minus, &sig, &w);
                if !mult.is_zero() {
                    op = op.add(&WeylElement::from_polynomial(&mult).mul(&word));
                }
                let h = grading.project_nonneg(g, &br);
                wh_recurse(
                    g,
                    grading,
                    character,
                    &minus,
                    &minus_parities,
                    &sig,
                    depth,
                    &h,
                    deg_b + grading.degree(i),
                    &word,
                    &mut op,
                )?;
            }
            op
        };
        images.push(image);
    }
    Ok(Realisation {
        algebra: Arc::clone(g),
        grading: grading.clone(),
        character: character.clone(),
        minus,
        sig,
        images,
    })
}

/// One level of the W/H recursion: emit λ(H)·word, then extend by every
/// K > 0 that can still reach a nonzero component of the grading.
#[allow(clippy::too_many_arguments)]
fn wh_recurse(
    g: &Arc<LieSuperalgebra>,
    grading: &ZGrading,
    character: &Character,
    minus: &[usize],
    minus_parities: &[crate::superpoly::Parity],
    sig: &Arc<Signature>,
    depth: i64,
    h: &GVec,
    deg_h: i64,
    word: &WeylElement,
    op: &mut WeylElement,
) -> Result<(), RealiseError> {
    if h.iter().all(ParamScalar::is_zero) {
        return Ok(());
    }
    let lam = character.of_vector(h);
    if !lam.is_zero() {
        *op = op.add(&word.scale(&lam));
    }
    let params = g.params();
    let bound = (deg_h + depth).max(0) as u32;
    for total in 1..=bound {
        let c = c_coefficient(total).map_err(RealiseError::Scalar)?;
        if c.is_zero() {
            continue;
        }
        for k in multi_indices_of_degree(minus_parities, total) {
            let sv = g.s_k(minus, &k, h)?;
            if sv.iter().all(ParamScalar::is_zero) {
                continue;
            }
            let signed = if total % 2 == 1 { -c.clone() } else { c.clone() };
            let coeff = ParamScalar::from_rational(
                params,
                signed / Rational::from_integer(k.factorial()),
            );
            let scaled: GVec = sv.iter().map(|v| v.mul(&coeff)).collect();
            let word2 = derivative_word(sig, params, &k).mul(word);
            let w = grading.project_minus(g, &scaled);
            let mult = minus_polynomial(minus, sig, &w);
            if !mult.is_zero() {
                *op = op.add(&WeylElement::from_polynomial(&mult).mul(&word2));
            }
            let h2 = grading.project_nonneg(g, &scaled);
            let deg2 = deg_h
                + k.0
                    .iter()
                    .zip(minus)
                    .map(|(&e, &b)| i64::from(e) * grading.degree(b))
                    .sum::<i64>();
            wh_recurse(
                g,
                grading,
                character,
                minus,
                minus_parities,
                sig,
                depth,
                &h2,
                deg2,
                &word2,
                op,
            )?;
        }
    }
    Ok(())
}

/// Outcome of certifying π([X_i, X_j]) = [π(X_i), π(X_j)] on all basis
/// pairs i ≤ j.
#[derive(Clone, Debug)]
pub struct HomomorphismReport {
    pairs_checked: usize,
    failures: Vec<(String, String)>,
}

impl HomomorphismReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn pairs_checked(&self) -> usize {
        self.pairs_checked
    }

    /// Basis-name pairs at which the identity fails.
    pub fn failures(&self) -> &[(String, String)] {
        &self.failures
    }
}

/// Exact verification that the realisation is a Lie superalgebra morphism.
pub fn check_homomorphism(r: &Realisation) -> HomomorphismReport {
    let g = r.algebra();
    let mut failures = Vec::new();
    let mut pairs = 0;
    for i in 0..g.dim() {
        for j in i..g.dim() {
            pairs += 1;
            let lhs = r.image(i).supercommutator(r.image(j));
            let rhs = r
                .image_of_vector(g.bracket_basis(i, j))
                .expect("basis bracket has the right dimension");
            if lhs != rhs {
                failures.push((g.name(i).to_string(), g.name(j).to_string()));
            }
        }
    }
    HomomorphismReport {
        pairs_checked: pairs,
        failures,
    }
}

/// The action of X ∈ 𝔤 on the Verma module S(𝔤₋).
pub fn verma_action(
    r: &Realisation,
    x: &[ParamScalar],
    p: &SuperPolynomial,
) -> Result<SuperPolynomial, RealiseError> {
    let op = r.image_of_vector(x)?;
    crate::weyl::apply(&op, p).map_err(RealiseError::Super)
}

/// Basis of the joint kernel of the 𝔤₊ action on the homogeneous
/// degree-`degree` component of S(𝔤₋), after substituting `specialization`
/// for scalar parameters (an empty map keeps every parameter formal and
/// computes the generic kernel over the rational-function field).
pub fn singular_vectors(
    r: &Realisation,
    degree: u32,
    specialization: &BTreeMap<String, Rational>,
) -> Result<Vec<SuperPolynomial>, RealiseError> {
    let g = r.algebra();
    let plus = r.grading().plus_indices();
    let mut ops = Vec::with_capacity(plus.len());
    for &b in &plus {
        let op = r
            .image(b)
            .substitute(specialization)
            .map_err(|e| RealiseError::PoleAtSpecialization(e.to_string()))?;
        ops.push(op);
    }
    let monomials = multi_indices_of_degree(&r.signature().parities(), degree);
    let mut applied: Vec<Vec<SuperPolynomial>> = Vec::with_capacity(monomials.len());
    for k in &monomials {
        let p = SuperPolynomial::monomial(
            r.signature(),
            k.clone(),
            ParamScalar::one(g.params()),
        );
        applied.push(ops.iter().map(|op| op.apply(&p)).collect());
    }
    // Row index set: (operator position, output monomial).
    let mut rows: BTreeSet<(usize, MultiIndex)> = BTreeSet::new();
    for images in &applied {
        for (o, q) in images.iter().enumerate() {
            for key in q.terms().keys() {
                rows.insert((o, key.clone()));
            }
        }
    }
    let row_list: Vec<(usize, MultiIndex)> = rows.into_iter().collect();
    let columns: Vec<Vec<ParamScalar>> = applied
        .iter()
        .map(|images| {
            row_list
                .iter()
                .map(|(o, key)| {
                    images[*o]
                        .coeff(key)
                        .cloned()
                        .unwrap_or_else(|| ParamScalar::zero(g.params()))
                })
                .collect()
        })
        .collect();
    let matrix = crate::linalg::Matrix::from_columns(g.params(), &columns);
    let kernel = matrix.kernel_basis();
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut p = SuperPolynomial::zero(r.signature());
            for (k, c) in monomials.iter().zip(v) {
                if !c.is_zero() {
                    p.add_term(k.clone(), c);
                }
            }
            p
        })
        .collect())
}

/// Basis of the kernel of the multiplicative extension of π on the span of
/// PBW monomials of total degree ≤ d — the degree-d slice of the
/// annihilator ideal of the Verma module.
pub fn kernel_up_to_degree(r: &Realisation, d: u32) -> Result<Vec<UEnvElement>, RealiseError> {
    let g = r.algebra();
    // Degree ≤ d includes the constants.
    let mut monomials = vec![MultiIndex::zero(g.dim())];
    monomials.extend(multi_indices_up_to(&g.parities(), d));
    let mut images = Vec::with_capacity(monomials.len());
    for k in &monomials {
        let mut u = UEnvElement::zero(g);
        u.add_term(k.clone(), ParamScalar::one(g.params()));
        images.push(r.uenv_image(&u)?);
    }
    let mut rows: BTreeSet<(MultiIndex, MultiIndex)> = BTreeSet::new();
    for w in &images {
        for key in w.terms().keys() {
            rows.insert(key.clone());
        }
    }
    let row_list: Vec<(MultiIndex, MultiIndex)> = rows.into_iter().collect();
    let columns: Vec<Vec<ParamScalar>> = images
        .iter()
        .map(|w| {
            row_list
                .iter()
                .map(|key| {
                    w.terms()
                        .get(key)
                        .cloned()
                        .unwrap_or_else(|| ParamScalar::zero(g.params()))
                })
                .collect()
        })
        .collect();
    let matrix = crate::linalg::Matrix::from_columns(g.params(), &columns);
    Ok(matrix
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let mut u = UEnvElement::zero(g);
            for (k, c) in monomials.iter().zip(v) {
                if !c.is_zero() {
                    u.add_term(k.clone(), c);
                }
            }
            u
        })
        .collect())
}

/// Bidegree support of every image plus their union.
#[derive(Clone, Debug)]
pub struct BidegreeReport {
    pub per_basis: Vec<(String, BTreeSet<(u32, u32)>)>,
    pub union: BTreeSet<(u32, u32)>,
}

pub fn bidegree_report(r: &Realisation) -> BidegreeReport {
    let g = r.algebra();
    let mut per_basis = Vec::with_capacity(g.dim());
    let mut union = BTreeSet::new();
    for b in 0..g.dim() {
        let support = r.image(b).bidegree_support();
        union.extend(support.iter().copied());
        per_basis.push((g.name(b).to_string(), support));
    }
    BidegreeReport { per_basis, union }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::LieSuperalgebra;
    use crate::scalars::{rat, ParamSet};
    use crate::superpoly::Parity;
    use crate::uenv::symmetrise;

    fn sl2_with_lambda() -> (Arc<LieSuperalgebra>, ZGrading, Character) {
        let params = ParamSet::new(&["lam"]);
        let g = Arc::new(
            LieSuperalgebra::from_brackets(
                &params,
                &[
                    ("e", Parity::Even),
                    ("h", Parity::Even),
                    ("f", Parity::Even),
                ],
                &[
                    (0, 2, &[(1, "1")]),
                    (1, 0, &[(0, "2")]),
                    (1, 2, &[(2, "-2")]),
                ],
            )
            .unwrap(),
        );
        let grading = ZGrading::new(&g, vec![1, 0, -1]).unwrap();
        let lam = ParamScalar::parameter(&params, "lam").unwrap();
        let character = Character::new(&g, &grading, BTreeMap::from([(1, lam)])).unwrap();
        (g, grading, character)
    }

    fn gl11_graded() -> (Arc<LieSuperalgebra>, ZGrading, Character) {
        let params = ParamSet::new(&["lam", "mu"]);
        let g = Arc::new(
            LieSuperalgebra::from_brackets(
                &params,
                &[
                    ("h1", Parity::Even),
                    ("h2", Parity::Even),
                    ("e", Parity::Odd),
                    ("f", Parity::Odd),
                ],
                &[
                    (0, 2, &[(2, "1")]),
                    (0, 3, &[(3, "-1")]),
                    (1, 2, &[(2, "-1")]),
                    (1, 3, &[(3, "1")]),
                    (2, 3, &[(0, "1"), (1, "1")]),
                ],
            )
            .unwrap(),
        );
        let grading = ZGrading::new(&g, vec![0, 0, 1, -1]).unwrap();
        let lam = ParamScalar::parameter(&params, "lam").unwrap();
        let mu = ParamScalar::parameter(&params, "mu").unwrap();
        let character =
            Character::new(&g, &grading, BTreeMap::from([(0, lam), (1, mu)])).unwrap();
        (g, grading, character)
    }

    fn super_heisenberg_graded() -> (Arc<LieSuperalgebra>, ZGrading, Character) {
        let params = ParamSet::empty();
        let g = Arc::new(
            LieSuperalgebra::from_brackets(
                &params,
                &[
                    ("z", Parity::Even),
                    ("xi1", Parity::Odd),
                    ("xi2", Parity::Odd),
                ],
                &[(1, 1, &[(0, "1")])],
            )
            .unwrap(),
        );
        let grading = ZGrading::new(&g, vec![-2, -1, -1]).unwrap();
        let character = Character::new(&g, &grading, BTreeMap::new()).unwrap();
        (g, grading, character)
    }

    /// sl(3) with its principal grading: Chevalley basis
    /// (h1, h2, e1, e2, e12, f1, f2, f12), degrees (0,0,1,1,2,−1,−1,−2).
    fn sl3_principal() -> (Arc<LieSuperalgebra>, ZGrading, Character) {
        let params = ParamSet::new(&["lam", "mu"]);
        let even = Parity::Even;
        let g = Arc::new(
            LieSuperalgebra::from_brackets(
                &params,
                &[
                    ("h1", even),
                    ("h2", even),
                    ("e1", even),
                    ("e2", even),
                    ("e12", even),
                    ("f1", even),
                    ("f2", even),
                    ("f12", even),
                ],
                &[
                    (0, 2, &[(2, "2")]),
                    (0, 3, &[(3, "-1")]),
                    (0, 4, &[(4, "1")]),
                    (0, 5, &[(5, "-2")]),
                    (0, 6, &[(6, "1")]),
                    (0, 7, &[(7, "-1")]),
                    (1, 2, &[(2, "-1")]),
                    (1, 3, &[(3, "2")]),
                    (1, 4, &[(4, "1")]),
                    (1, 5, &[(5, "1")]),
                    (1, 6, &[(6, "-2")]),
                    (1, 7, &[(7, "-1")]),
                    (2, 3, &[(4, "1")]),
                    (2, 5, &[(0, "1")]),
                    (2, 7, &[(6, "-1")]),
                    (3, 6, &[(1, "1")]),
                    (3, 7, &[(5, "1")]),
                    (4, 5, &[(3, "-1")]),
                    (4, 6, &[(2, "1")]),
                    (4, 7, &[(0, "1"), (1, "1")]),
                    (5, 6, &[(7, "-1")]),
                ],
            )
            .unwrap(),
        );
        assert!(g.validate().is_ok(), "{:?}", g.validate().first_violation());
        let grading = ZGrading::new(&g, vec![0, 0, 1, 1, 2, -1, -1, -2]).unwrap();
        let lam = ParamScalar::parameter(&params, "lam").unwrap();
        let mu = ParamScalar::parameter(&params, "mu").unwrap();
        let character =
            Character::new(&g, &grading, BTreeMap::from([(0, lam), (1, mu)])).unwrap();
        (g, grading, character)
    }

    fn wparse(r: &Realisation, s: &str) -> WeylElement {
        WeylElement::parse(r.signature(), r.algebra().params(), s).unwrap()
    }

    #[test]
    fn sl2_images_match_closed_form() {
        let (g, grading, character) = sl2_with_lambda();
        let r = realise_3graded(&g, &grading, &character).unwrap();
        assert_eq!(r.image(2), &wparse(&r, "f"));
        assert_eq!(r.image(1), &wparse(&r, "lam - 2*f*Df"));
        assert_eq!(r.image(0), &wparse(&r, "lam*Df - f*Df^2"));
        assert!(check_homomorphism(&r).is_ok());

        let rg = realise_general(&g, &grading, &character).unwrap();
        for b in 0..3 {
            assert_eq!(r.image(b), rg.image(b));
        }
    }

    #[test]
    fn gl11_images_and_homomorphism() {
        let (g, grading, character) = gl11_graded();
        let r = realise_3graded(&g, &grading, &character).unwrap();
        assert_eq!(r.image(3), &wparse(&r, "f"));
        assert_eq!(r.image(0), &wparse(&r, "lam - f*Df"));
        assert_eq!(r.image(1), &wparse(&r, "mu + f*Df"));
        assert_eq!(r.image(2), &wparse(&r, "(lam + mu)*Df"));
        let report = check_homomorphism(&r);
        assert!(report.is_ok());
        assert_eq!(report.pairs_checked(), 10);

        let rg = realise_general(&g, &grading, &character).unwrap();
        for b in 0..4 {
            assert_eq!(r.image(b), rg.image(b));
        }
    }

    #[test]
    fn depth_two_grading_gets_bernoulli_corrections() {
        let (g, grading, character) = super_heisenberg_graded();
        assert!(matches!(
            realise_3graded(&g, &grading, &character),
            Err(RealiseError::NotThreeGraded(_))
        ));
        let r = realise_general(&g, &grading, &character).unwrap();
        assert_eq!(r.image(0), &wparse(&r, "z"));
        assert_eq!(r.image(1), &wparse(&r, "xi1 + 1/2*z*Dxi1"));
        assert_eq!(r.image(2), &wparse(&r, "xi2"));
        assert!(check_homomorphism(&r).is_ok());
    }

    #[test]
    fn sl3_principal_realisation_is_a_homomorphism() {
        let (g, grading, character) = sl3_principal();
        let r = realise_general(&g, &grading, &character).unwrap();
        let report = check_homomorphism(&r);
        assert!(report.is_ok(), "failures: {:?}", report.failures());
        assert_eq!(report.pairs_checked(), 36);
        // A 𝔤₋ image with a genuine |K| = 1 correction term.
        assert_eq!(r.image(5), &wparse(&r, "f1 - 1/2*f12*Df2"));
        assert_eq!(r.image(7), &wparse(&r, "f12"));
        // The depth-2 recursion produces second-order terms on 𝔤₊₂.
        assert!(r
            .image(4)
            .bidegree_support()
            .iter()
            .any(|&(_, d)| d >= 2));
    }

    #[test]
    fn degenerate_gradings() {
        let params = ParamSet::new(&["lam"]);
        let g = Arc::new(
            LieSuperalgebra::from_brackets(&params, &[("a", Parity::Even)], &[]).unwrap(),
        );
        // All of 𝔤 in degree 0: a 0|0 signature and π(a) = λ(a).
        let grading = ZGrading::new(&g, vec![0]).unwrap();
        let lam = ParamScalar::parameter(&params, "lam").unwrap();
        let character =
            Character::new(&g, &grading, BTreeMap::from([(0, lam.clone())])).unwrap();
        let r = realise_general(&g, &grading, &character).unwrap();
        assert_eq!(r.signature().dim(), 0);
        assert_eq!(r.image(0), &WeylElement::constant(r.signature(), lam));
        assert!(check_homomorphism(&r).is_ok());
        // 𝔤₊ ≠ 0 with 𝔤₋ = 0 is rejected.
        let bad = ZGrading::new(&g, vec![1]).unwrap();
        let trivial = Character::new(&g, &bad, BTreeMap::new()).unwrap();
        assert!(matches!(
            realise_general(&g, &bad, &trivial),
            Err(RealiseError::GradingIncompatible(_))
        ));
        assert!(matches!(
            realise_3graded(&g, &bad, &trivial),
            Err(RealiseError::GradingIncompatible(_))
        ));
    }

    #[test]
    fn corrupted_image_fails_at_the_right_pair() {
        let (g, grading, character) = sl2_with_lambda();
        let mut r = realise_3graded(&g, &grading, &character).unwrap();
        let d = WeylElement::derivative(r.signature(), g.params(), 0);
        r.images[0] = r.images[0].add(&d);
        let report = check_homomorphism(&r);
        assert!(!report.is_ok());
        assert_eq!(
            report.failures(),
            &[("e".to_string(), "f".to_string())]
        );
    }

    #[test]
    fn verma_action_examples() {
        let (g, grading, character) = gl11_graded();
        let r = realise_3graded(&g, &grading, &character).unwrap();
        let sig = r.signature();
        let one = SuperPolynomial::one(sig, g.params());
        // X ∈ 𝔤₋ acting on 1 gives the variable itself.
        let f_var = SuperPolynomial::generator(sig, g.params(), 0);
        assert_eq!(
            verma_action(&r, &g.basis_vector(3), &one).unwrap(),
            f_var
        );
        // 𝔤₊ lowers degree: e · f = λ([e,f]) = lam + mu.
        let expect = SuperPolynomial::constant(
            sig,
            ParamScalar::parse(g.params(), "lam + mu").unwrap(),
        );
        assert_eq!(
            verma_action(&r, &g.basis_vector(2), &f_var).unwrap(),
            expect
        );
    }

    #[test]
    fn verma_action_is_a_representation() {
        let (g, grading, character) = sl3_principal();
        let r = realise_general(&g, &grading, &character).unwrap();
        let sig = r.signature();
        let p = SuperPolynomial::parse(sig, g.params(), "f1^2*f2 + 2*f12 - f2").unwrap();
        let vectors: Vec<GVec> = vec![
            g.basis_vector(2),
            g.basis_vector(4),
            g.basis_vector(0)
                .iter()
                .zip(g.basis_vector(6))
                .map(|(a, b)| a.add(&b))
                .collect(),
            g.basis_vector(5),
        ];
        for x in &vectors {
            for y in &vectors {
                let xy = verma_action(&r, x, &verma_action(&r, y, &p).unwrap()).unwrap();
                let yx = verma_action(&r, y, &verma_action(&r, x, &p).unwrap()).unwrap();
                let br = verma_action(&r, &g.bracket(x, y).unwrap(), &p).unwrap();
                assert_eq!(xy.sub(&yx), br);
            }
        }
    }

    #[test]
    fn singular_vectors_sl2() {
        let (g, grading, character) = sl2_with_lambda();
        let r = realise_3graded(&g, &grading, &character).unwrap();
        // λ = 0: the degree-1 kernel is spanned by the variable.
        let kernel = singular_vectors(
            &r,
            1,
            &BTreeMap::from([("lam".to_string(), rat(0, 1))]),
        )
        .unwrap();
        assert_eq!(kernel.len(), 1);
        assert_eq!(kernel[0], SuperPolynomial::generator(r.signature(), g.params(), 0));
        // λ = 2: the degree-3 kernel is spanned by f³.
        let kernel = singular_vectors(
            &r,
            3,
            &BTreeMap::from([("lam".to_string(), rat(2, 1))]),
        )
        .unwrap();
        assert_eq!(kernel.len(), 1);
        assert_eq!(
            kernel[0],
            SuperPolynomial::parse(r.signature(), g.params(), "f^3").unwrap()
        );
        // Generic λ (here 1/3): no singular vectors in degrees 1..4.
        for d in 1..=4u32 {
            let kernel = singular_vectors(
                &r,
                d,
                &BTreeMap::from([("lam".to_string(), rat(1, 3))]),
            )
            .unwrap();
            assert!(kernel.is_empty(), "unexpected kernel at degree {d}");
        }
        // Formal λ: generically empty in degree 2.
        assert!(singular_vectors(&r, 2, &BTreeMap::new()).unwrap().is_empty());
    }

    #[test]
    fn annihilator_slice_contains_the_casimir_relation() {
        let (g, grading, character) = sl2_with_lambda();
        let r = realise_3graded(&g, &grading, &character).unwrap();
        assert!(kernel_up_to_degree(&r, 0).unwrap().is_empty());
        assert!(kernel_up_to_degree(&r, 1).unwrap().is_empty());
        let kernel = kernel_up_to_degree(&r, 2).unwrap();
        assert_eq!(kernel.len(), 1);
        // 2ef − h + (1/2)h² − (λ + λ²/2): the Casimir minus its scalar image.
        let mut casimir = UEnvElement::zero(&g);
        casimir.add_term(MultiIndex(vec![1, 0, 1]), ParamScalar::from_int(g.params(), 2));
        casimir.add_term(MultiIndex(vec![0, 1, 0]), ParamScalar::from_int(g.params(), -1));
        casimir.add_term(
            MultiIndex(vec![0, 2, 0]),
            ParamScalar::from_rational(g.params(), rat(1, 2)),
        );
        casimir.add_term(
            MultiIndex(vec![0, 0, 0]),
            ParamScalar::parse(g.params(), "-lam - 1/2*lam^2").unwrap(),
        );
        assert!(r.uenv_image(&casimir).unwrap().is_zero());
        // The returned generator is proportional to it.
        let u = &kernel[0];
        let ratio = casimir
            .terms()
            .iter()
            .next()
            .map(|(k, c)| c.div(u.terms().get(k).unwrap()).unwrap())
            .unwrap();
        assert_eq!(&casimir, &u.scale(&ratio));
    }

    #[test]
    fn bidegree_reports() {
        let (g, grading, character) = sl2_with_lambda();
        let r = realise_3graded(&g, &grading, &character).unwrap();
        let report = bidegree_report(&r);
        let expected: BTreeSet<(u32, u32)> =
            [(0, 0), (1, 0), (0, 1), (1, 1), (1, 2)].into_iter().collect();
        assert_eq!(report.union, expected);
        // λ = 0 drops the constant and first-order-constant parts.
        let zero = Character::new(&g, &grading, BTreeMap::new()).unwrap();
        let r0 = realise_3graded(&g, &grading, &zero).unwrap();
        let report = bidegree_report(&r0);
        let expected: BTreeSet<(u32, u32)> =
            [(1, 0), (1, 1), (1, 2)].into_iter().collect();
        assert_eq!(report.union, expected);
    }

    #[test]
    fn uenv_image_respects_products() {
        // π extended to U(𝔤) is an algebra map: check on σ(ef)·σ(f).
        let (g, grading, character) = sl2_with_lambda();
        let r = realise_3graded(&g, &grading, &character).unwrap();
        let sig_g = crate::uenv::poly_signature(&g);
        let a = symmetrise(
            &g,
            &SuperPolynomial::parse(&sig_g, g.params(), "e*f").unwrap(),
        );
        let b = symmetrise(
            &g,
            &SuperPolynomial::parse(&sig_g, g.params(), "f + h^2").unwrap(),
        );
        let lhs = r.uenv_image(&a.mul(&b)).unwrap();
        let rhs = r.uenv_image(&a).unwrap().mul(&r.uenv_image(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn serialization_smoke() {
        let (g, grading, character) = sl2_with_lambda();
        let r = realise_3graded(&g, &grading, &character).unwrap();
        let json = r.to_json();
        assert_eq!(json["images"]["f"], "f");
        assert_eq!(json["images"]["h"], "-2*f*Df + lam");
        let latex = r.to_latex();
        assert!(latex.contains("\\pi_\\lambda(e) &="));
        assert!(latex.contains("\\partial_{f}"));
    }
}
