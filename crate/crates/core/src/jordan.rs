//! Jordan superpairs and unital Jordan superalgebras: the triple-product
//! calculus with its D and P operators, the structure algebra, the
//! Tits–Kantor–Koecher construction together with its inverse on 3-graded
//! Lie superalgebras, Bessel operators with their product rule, and the
//! conformal representations these data assemble into.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::liesuper::{Character, GVec, LieError, LieSuperalgebra, ZGrading};
use crate::linalg::Matrix;
use crate::realise::Realisation;
use crate::scalars::{rat, ParamScalar, ParamSet, ScalarError};
use crate::superpoly::{MultiIndex, Parity, Signature, SuperPolynomial};
use crate::weyl::WeylElement;

/// A trilinear product on basis triples: `tensor[a][m][b]` holds the
/// coordinates of {x_a, y_m, x_b}.
pub type TripleTensor = Vec<Vec<Vec<GVec>>>;

#[derive(Debug, Error)]
pub enum JordanError {
    #[error("pair axiom violated: {0}")]
    PairAxiomViolation(String),
    #[error("Jordan algebra axiom violated: {0}")]
    JordanAxiomViolation(String),
    #[error("not a 3-grading: {0}")]
    NotThreeGraded(String),
    #[error("not Jordan graded: {0}")]
    NotJordanGraded(String),
    #[error("no isomorphism: {0}")]
    IsomorphismFailure(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("degenerate trace form: {0}")]
    DegenerateTraceForm(String),
    #[error("not a Cartan involution: {0}")]
    NotInvolution(String),
    #[error("trace form mismatch: {0}")]
    TraceFormMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

// ---------------------------------------------------------------------------
// Small exact matrix helpers (column-major: mat[j] = image of basis j)
// ---------------------------------------------------------------------------

fn zero_gvec(params: &ParamSet, n: usize) -> GVec {
    vec![ParamScalar::zero(params); n]
}

fn axpy(acc: &mut GVec, c: &ParamScalar, v: &GVec) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = a.add(&c.mul(x));
    }
}

fn neg_gvec(v: &GVec) -> GVec {
    v.iter().map(|c| c.neg()).collect()
}

fn scale_gvec(v: &GVec, q: &crate::scalars::Rational) -> GVec {
    v.iter().map(|c| c.scale(q)).collect()
}

fn gvec_is_zero(v: &GVec) -> bool {
    v.iter().all(|c| c.is_zero())
}

fn mat_identity(params: &ParamSet, n: usize) -> Vec<GVec> {
    (0..n)
        .map(|j| {
            let mut col = zero_gvec(params, n);
            col[j] = ParamScalar::one(params);
            col
        })
        .collect()
}

fn mat_apply(params: &ParamSet, mat: &[GVec], v: &[ParamScalar]) -> GVec {
    let rows = mat.first().map_or(v.len(), Vec::len);
    let mut out = zero_gvec(params, rows);
    for (col, c) in mat.iter().zip(v) {
        if !c.is_zero() {
            axpy(&mut out, c, col);
        }
    }
    out
}

fn mat_mul(params: &ParamSet, a: &[GVec], b: &[GVec]) -> Vec<GVec> {
    b.iter().map(|col| mat_apply(params, a, col)).collect()
}

fn mat_sub(a: &[GVec], b: &[GVec]) -> Vec<GVec> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.sub(q)).collect())
        .collect()
}

fn mat_add(a: &[GVec], b: &[GVec]) -> Vec<GVec> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.add(q)).collect())
        .collect()
}

fn mat_is_zero(m: &[GVec]) -> bool {
    m.iter().all(gvec_is_zero)
}

fn mat_flat(m: &[GVec]) -> GVec {
    m.iter().flatten().cloned().collect()
}

fn mat_trace(m: &[GVec]) -> ParamScalar {
    let params = m[0][0].params().clone();
    let mut acc = ParamScalar::zero(&params);
    for (j, col) in m.iter().enumerate() {
        acc = acc.add(&col[j]);
    }
    acc
}

/// Supercommutator of operator matrices with the given parities.
fn mat_supercommutator(
    params: &ParamSet,
    a: &[GVec],
    pa: Parity,
    b: &[GVec],
    pb: Parity,
) -> Vec<GVec> {
    let ab = mat_mul(params, a, b);
    let ba = mat_mul(params, b, a);
    if pa.is_odd() && pb.is_odd() {
        mat_add(&ab, &ba)
    } else {
        mat_sub(&ab, &ba)
    }
}

/// The coordinate vector as a degree-1 polynomial over the signature.
fn coords_polynomial(sig: &Arc<Signature>, v: &[ParamScalar]) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(sig);
    for (t, c) in v.iter().enumerate() {
        if !c.is_zero() {
            out.add_term(MultiIndex::unit(sig.dim(), t), c.clone());
        }
    }
    out
}

/// Splits a polynomial into its even and odd parity components.
fn parity_split(p: &SuperPolynomial) -> (SuperPolynomial, SuperPolynomial) {
    let sig = p.signature();
    let parities = sig.parities();
    let mut even = SuperPolynomial::zero(sig);
    let mut odd = SuperPolynomial::zero(sig);
    for (k, c) in p.terms() {
        if k.parity(&parities).is_odd() {
            odd.add_term(k.clone(), c.clone());
        } else {
            even.add_term(k.clone(), c.clone());
        }
    }
    (even, odd)
}

// ---------------------------------------------------------------------------
// Jordan superpairs
// ---------------------------------------------------------------------------

/// A pair of super vector spaces (V₊, V₋) with even trilinear products
///
///   {·,·,·}^σ : V_σ × V_{−σ} × V_σ → V_σ,
///
/// symmetric in the outer variables up to the Koszul sign and satisfying the
/// 5-linear identity; both axioms are checked exactly on all basis tuples at
/// construction time.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanSuperpair {
    params: ParamSet,
    vplus: Arc<Signature>,
    vminus: Arc<Signature>,
    triple_plus: TripleTensor,
    triple_minus: TripleTensor,
}

fn check_tensor_shape(
    label: &str,
    tensor: &TripleTensor,
    outer: usize,
    mid: usize,
) -> Result<(), JordanError> {
    let bad = || {
        JordanError::InvalidInput(format!(
            "{label} must have shape {outer}×{mid}×{outer} with coordinate vectors of length {outer}"
        ))
    };
    if tensor.len() != outer {
        return Err(bad());
    }
    for slice in tensor {
        if slice.len() != mid {
            return Err(bad());
        }
        for row in slice {
            if row.len() != outer {
                return Err(bad());
            }
            for v in row {
                if v.len() != outer {
                    return Err(bad());
                }
            }
        }
    }
    Ok(())
}

impl JordanSuperpair {
    /// Builds a pair from its triple-product tensors and validates the pair
    /// axioms (evenness of the products, outer symmetry, 5-linear identity)
    /// on all basis tuples.
    pub fn new(
        params: &ParamSet,
        vplus: Arc<Signature>,
        vminus: Arc<Signature>,
        triple_plus: TripleTensor,
        triple_minus: TripleTensor,
    ) -> Result<JordanSuperpair, JordanError> {
        check_tensor_shape("triple_plus", &triple_plus, vplus.dim(), vminus.dim())?;
        check_tensor_shape("triple_minus", &triple_minus, vminus.dim(), vplus.dim())?;
        let pair = JordanSuperpair {
            params: params.clone(),
            vplus,
            vminus,
            triple_plus,
            triple_minus,
        };
        pair.check_axioms_side("+", true)?;
        pair.check_axioms_side("−", false)?;
        Ok(pair)
    }

    fn check_axioms_side(&self, label: &str, plus: bool) -> Result<(), JordanError> {
        let (osig, msig, touter, tmid) = if plus {
            (&self.vplus, &self.vminus, &self.triple_plus, &self.triple_minus)
        } else {
            (&self.vminus, &self.vplus, &self.triple_minus, &self.triple_plus)
        };
        let no = osig.dim();
        let nm = msig.dim();
        // Evenness: |{x,y,z}| = |x| + |y| + |z|.
        for a in 0..no {
            for m in 0..nm {
                for b in 0..no {
                    let want = osig
                        .parity(a)
                        .plus(msig.parity(m))
                        .plus(osig.parity(b));
                    for (r, c) in touter[a][m][b].iter().enumerate() {
                        if !c.is_zero() && osig.parity(r) != want {
                            return Err(JordanError::PairAxiomViolation(format!(
                                "{{·,·,·}}^{label} on basis ({a}, {m}, {b}) has a component of the wrong parity"
                            )));
                        }
                    }
                }
            }
        }
        // Outer symmetry: {x,y,z} = (−1)^{|x||y|+|y||z|+|z||x|} {z,y,x}.
        for a in 0..no {
            for m in 0..nm {
                for b in 0..no {
                    let (pa, pm, pb) = (
                        osig.parity(a).is_odd(),
                        msig.parity(m).is_odd(),
                        osig.parity(b).is_odd(),
                    );
                    let neg = (pa && pm) ^ (pm && pb) ^ (pb && pa);
                    let mirrored = if neg {
                        neg_gvec(&touter[b][m][a])
                    } else {
                        touter[b][m][a].clone()
                    };
                    if touter[a][m][b] != mirrored {
                        return Err(JordanError::PairAxiomViolation(format!(
                            "outer symmetry fails for {{·,·,·}}^{label} on basis ({a}, {m}, {b})"
                        )));
                    }
                }
            }
        }
        // 5-linear identity:
        // {x,y,{u,v,w}} − {{x,y,u},v,w}
        //   = (−1)^{(|x|+|y|)(|u|+|v|)} (−{u,{v,x,y},w} + {u,v,{x,y,w}}).
        fn combine<'t>(
            params: &ParamSet,
            no: usize,
            coeffs: &GVec,
            pick: &dyn Fn(usize) -> &'t GVec,
        ) -> GVec {
            let mut out = zero_gvec(params, no);
            for (b, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    axpy(&mut out, c, pick(b));
                }
            }
            out
        }
        for a in 0..no {
            for m in 0..nm {
                for c in 0..no {
                    for l in 0..nm {
                        for d in 0..no {
                            let t1 =
                                combine(&self.params, no, &touter[c][l][d], &|b| &touter[a][m][b]);
                            let t2 =
                                combine(&self.params, no, &touter[a][m][c], &|b| &touter[b][l][d]);
                            // {v,x,y} lives in the opposite space.
                            let inner3 = &tmid[l][a][m];
                            let mut t3 = zero_gvec(&self.params, no);
                            for (r, cf) in inner3.iter().enumerate() {
                                if !cf.is_zero() {
                                    axpy(&mut t3, cf, &touter[c][r][d]);
                                }
                            }
                            let t4 =
                                combine(&self.params, no, &touter[a][m][d], &|b| &touter[c][l][b]);
                            let sgn_neg = (osig.parity(a).is_odd() ^ msig.parity(m).is_odd())
                                && (osig.parity(c).is_odd() ^ msig.parity(l).is_odd());
                            let lhs: GVec =
                                t1.iter().zip(&t2).map(|(x, y)| x.sub(y)).collect();
                            let mut rhs: GVec =
                                t4.iter().zip(&t3).map(|(x, y)| x.sub(y)).collect();
                            if sgn_neg {
                                rhs = neg_gvec(&rhs);
                            }
                            if lhs != rhs {
                                return Err(JordanError::PairAxiomViolation(format!(
                                    "5-linear identity fails on side {label} at basis tuple ({a}, {m}, {c}, {l}, {d})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn vplus(&self) -> &Arc<Signature> {
        &self.vplus
    }

    pub fn vminus(&self) -> &Arc<Signature> {
        &self.vminus
    }

    /// {x_a, u_m, x_b}⁺ as V₊ coordinates.
    pub fn triple_plus_basis(&self, a: usize, m: usize, b: usize) -> &GVec {
        &self.triple_plus[a][m][b]
    }

    /// {u_m, x_a, u_l}⁻ as V₋ coordinates.
    pub fn triple_minus_basis(&self, m: usize, a: usize, l: usize) -> &GVec {
        &self.triple_minus[m][a][l]
    }

    /// Trilinear extension of {·,·,·}⁺ to coordinate vectors.
    pub fn triple_plus(&self, x: &[ParamScalar], y: &[ParamScalar], z: &[ParamScalar]) -> GVec {
        let (np, nm) = (self.vplus.dim(), self.vminus.dim());
        assert_eq!(x.len(), np, "x must be a V₊ vector");
        assert_eq!(y.len(), nm, "y must be a V₋ vector");
        assert_eq!(z.len(), np, "z must be a V₊ vector");
        let mut out = zero_gvec(&self.params, np);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (m, ym) in y.iter().enumerate() {
                if ym.is_zero() {
                    continue;
                }
                let c = xa.mul(ym);
                for (b, zb) in z.iter().enumerate() {
                    if !zb.is_zero() {
                        axpy(&mut out, &c.mul(zb), &self.triple_plus[a][m][b]);
                    }
                }
            }
        }
        out
    }

    /// Trilinear extension of {·,·,·}⁻ to coordinate vectors.
    pub fn triple_minus(&self, u: &[ParamScalar], v: &[ParamScalar], w: &[ParamScalar]) -> GVec {
        let (np, nm) = (self.vplus.dim(), self.vminus.dim());
        assert_eq!(u.len(), nm, "u must be a V₋ vector");
        assert_eq!(v.len(), np, "v must be a V₊ vector");
        assert_eq!(w.len(), nm, "w must be a V₋ vector");
        let mut out = zero_gvec(&self.params, nm);
        for (m, um) in u.iter().enumerate() {
            if um.is_zero() {
                continue;
            }
            for (a, va) in v.iter().enumerate() {
                if va.is_zero() {
                    continue;
                }
                let c = um.mul(va);
                for (l, wl) in w.iter().enumerate() {
                    if !wl.is_zero() {
                        axpy(&mut out, &c.mul(wl), &self.triple_minus[m][a][l]);
                    }
                }
            }
        }
        out
    }

    /// The operator D⁺_{x_a, u_m} = {x_a, u_m, ·} on V₊ (columns).
    pub fn d_plus_basis(&self, a: usize, m: usize) -> Vec<GVec> {
        (0..self.vplus.dim())
            .map(|b| self.triple_plus[a][m][b].clone())
            .collect()
    }

    /// The operator D⁻_{u_m, x_a} = {u_m, x_a, ·} on V₋ (columns).
    pub fn d_minus_basis(&self, m: usize, a: usize) -> Vec<GVec> {
        (0..self.vminus.dim())
            .map(|l| self.triple_minus[m][a][l].clone())
            .collect()
    }

    /// D⁺_{x,y} for coordinate vectors x ∈ V₊, y ∈ V₋.
    pub fn d_plus(&self, x: &[ParamScalar], y: &[ParamScalar]) -> Vec<GVec> {
        (0..self.vplus.dim())
            .map(|b| {
                let mut col = zero_gvec(&self.params, self.vplus.dim());
                for (a, xa) in x.iter().enumerate() {
                    if xa.is_zero() {
                        continue;
                    }
                    for (m, ym) in y.iter().enumerate() {
                        if !ym.is_zero() {
                            axpy(&mut col, &xa.mul(ym), &self.triple_plus[a][m][b]);
                        }
                    }
                }
                col
            })
            .collect()
    }

    /// D⁻_{u,v} for coordinate vectors u ∈ V₋, v ∈ V₊.
    pub fn d_minus(&self, u: &[ParamScalar], v: &[ParamScalar]) -> Vec<GVec> {
        (0..self.vminus.dim())
            .map(|l| {
                let mut col = zero_gvec(&self.params, self.vminus.dim());
                for (m, um) in u.iter().enumerate() {
                    if um.is_zero() {
                        continue;
                    }
                    for (a, va) in v.iter().enumerate() {
                        if !va.is_zero() {
                            axpy(&mut col, &um.mul(va), &self.triple_minus[m][a][l]);
                        }
                    }
                }
                col
            })
            .collect()
    }

    /// P⁻_{u_m, u_l} : V₊ → V₋, z ↦ (−1)^{|u_l||z|} (1/2) D⁻_{u_m, z}(u_l)
    /// (columns over the V₊ basis).
    pub fn p_minus_basis(&self, m: usize, l: usize) -> Vec<GVec> {
        let half = rat(1, 2);
        (0..self.vplus.dim())
            .map(|b| {
                let mut col = scale_gvec(&self.triple_minus[m][b][l], &half);
                if self.vminus.parity(l).is_odd() && self.vplus.parity(b).is_odd() {
                    col = neg_gvec(&col);
                }
                col
            })
            .collect()
    }

    /// P⁺_{x_a, x_b} : V₋ → V₊ (columns over the V₋ basis).
    pub fn p_plus_basis(&self, a: usize, b: usize) -> Vec<GVec> {
        let half = rat(1, 2);
        (0..self.vminus.dim())
            .map(|m| {
                let mut col = scale_gvec(&self.triple_plus[a][m][b], &half);
                if self.vplus.parity(b).is_odd() && self.vminus.parity(m).is_odd() {
                    col = neg_gvec(&col);
                }
                col
            })
            .collect()
    }

    /// P⁻_{u,v} for coordinate vectors u, v ∈ V₋, by bilinearity.
    pub fn p_minus(&self, u: &[ParamScalar], v: &[ParamScalar]) -> Vec<GVec> {
        let mut out = vec![zero_gvec(&self.params, self.vminus.dim()); self.vplus.dim()];
        for (m, um) in u.iter().enumerate() {
            if um.is_zero() {
                continue;
            }
            for (l, vl) in v.iter().enumerate() {
                if vl.is_zero() {
                    continue;
                }
                let c = um.mul(vl);
                for (b, col) in self.p_minus_basis(m, l).iter().enumerate() {
                    axpy(&mut out[b], &c, col);
                }
            }
        }
        out
    }

    /// P⁺_{x,y} for coordinate vectors x, y ∈ V₊, by bilinearity.
    pub fn p_plus(&self, x: &[ParamScalar], y: &[ParamScalar]) -> Vec<GVec> {
        let mut out = vec![zero_gvec(&self.params, self.vplus.dim()); self.vminus.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa.mul(yb);
                for (m, col) in self.p_plus_basis(a, b).iter().enumerate() {
                    axpy(&mut out[m], &c, col);
                }
            }
        }
        out
    }

    /// JSON form: signatures, parameters and the nonzero tensor entries.
    pub fn to_json(&self) -> Value {
        let tensor_json = |t: &TripleTensor| -> Value {
            let mut entries = Vec::new();
            for (i, slice) in t.iter().enumerate() {
                for (j, row) in slice.iter().enumerate() {
                    for (k, v) in row.iter().enumerate() {
                        if !gvec_is_zero(v) {
                            entries.push(json!({
                                "i": i,
                                "j": j,
                                "k": k,
                                "coeffs": v.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                            }));
                        }
                    }
                }
            }
            Value::Array(entries)
        };
        json!({
            "params": self.params.names(),
            "vplus": signature_to_json(&self.vplus),
            "vminus": signature_to_json(&self.vminus),
            "triple_plus": tensor_json(&self.triple_plus),
            "triple_minus": tensor_json(&self.triple_minus),
        })
    }

    /// Parses the JSON form produced by [`JordanSuperpair::to_json`] and
    /// re-validates the pair axioms.
    pub fn from_json(value: &Value) -> Result<JordanSuperpair, JordanError> {
        let params = params_from_json(value.get("params"))?;
        let vplus = signature_from_json(value.get("vplus"))?;
        let vminus = signature_from_json(value.get("vminus"))?;
        let read_tensor = |key: &str, outer: &Arc<Signature>, mid: &Arc<Signature>| {
            tensor_from_json(&params, value.get(key), key, outer.dim(), mid.dim())
        };
        let triple_plus = read_tensor("triple_plus", &vplus, &vminus)?;
        let triple_minus = read_tensor("triple_minus", &vminus, &vplus)?;
        JordanSuperpair::new(&params, vplus, vminus, triple_plus, triple_minus)
    }
}

/// Structure-tensor equality after basis identification: dimensions,
/// parities and both triple tensors agree (names may differ).
pub fn tensors_equal(x: &JordanSuperpair, y: &JordanSuperpair) -> bool {
    x.vplus.dim() == y.vplus.dim()
        && x.vminus.dim() == y.vminus.dim()
        && x.vplus.parities() == y.vplus.parities()
        && x.vminus.parities() == y.vminus.parities()
        && x.triple_plus == y.triple_plus
        && x.triple_minus == y.triple_minus
}

// ---------------------------------------------------------------------------
// Unital Jordan superalgebras
// ---------------------------------------------------------------------------

/// A supercommutative algebra (J, ∗) with unit e whose left multiplications
/// satisfy the operator Jordan identity
///
///   (−1)^{|x||z|}[L_x, L_{y∗z}] + (−1)^{|y||x|}[L_y, L_{z∗x}]
///     + (−1)^{|z||y|}[L_z, L_{x∗y}] = 0,
///
/// all checked exactly on basis tuples at construction time.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitalJordanSuperalgebra {
    params: ParamSet,
    signature: Arc<Signature>,
    product: Vec<Vec<GVec>>,
    unit: usize,
}

impl UnitalJordanSuperalgebra {
    pub fn new(
        params: &ParamSet,
        signature: Arc<Signature>,
        product: Vec<Vec<GVec>>,
        unit: usize,
    ) -> Result<UnitalJordanSuperalgebra, JordanError> {
        let n = signature.dim();
        if product.len() != n
            || product.iter().any(|row| row.len() != n)
            || product
                .iter()
                .any(|row| row.iter().any(|v| v.len() != n))
        {
            return Err(JordanError::InvalidInput(format!(
                "product must be an {n}×{n} table of coordinate vectors of length {n}"
            )));
        }
        if unit >= n {
            return Err(JordanError::InvalidInput(format!(
                "unit index {unit} out of range for dimension {n}"
            )));
        }
        let alg = UnitalJordanSuperalgebra {
            params: params.clone(),
            signature,
            product,
            unit,
        };
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<(), JordanError> {
        let n = self.dim();
        let sig = &self.signature;
        if sig.parity(self.unit).is_odd() {
            return Err(JordanError::JordanAxiomViolation(
                "the unit must be even".into(),
            ));
        }
        // Evenness and supercommutativity of ∗.
        for a in 0..n {
            for b in 0..n {
                let want = sig.parity(a).plus(sig.parity(b));
                for (r, c) in self.product[a][b].iter().enumerate() {
                    if !c.is_zero() && sig.parity(r) != want {
                        return Err(JordanError::JordanAxiomViolation(format!(
                            "{} ∗ {} has a component of the wrong parity",
                            sig.name(a),
                            sig.name(b)
                        )));
                    }
                }
                let neg = sig.parity(a).is_odd() && sig.parity(b).is_odd();
                let mirrored = if neg {
                    neg_gvec(&self.product[b][a])
                } else {
                    self.product[b][a].clone()
                };
                if self.product[a][b] != mirrored {
                    return Err(JordanError::JordanAxiomViolation(format!(
                        "supercommutativity fails on ({}, {})",
                        sig.name(a),
                        sig.name(b)
                    )));
                }
            }
        }
        // Unit: e ∗ x = x.
        for b in 0..n {
            let mut want = zero_gvec(&self.params, n);
            want[b] = ParamScalar::one(&self.params);
            if self.product[self.unit][b] != want {
                return Err(JordanError::JordanAxiomViolation(format!(
                    "{} is not a unit: e ∗ {} ≠ {}",
                    sig.name(self.unit),
                    sig.name(b),
                    sig.name(b)
                )));
            }
        }
        // Operator Jordan identity on all basis triples.
        let ls: Vec<Vec<GVec>> = (0..n).map(|a| self.l_basis(a)).collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (pa, pb, pc) = (sig.parity(a), sig.parity(b), sig.parity(c));
                    let term = |x: usize, px: Parity, yz: &GVec, pyz: Parity, sgn: bool| {
                        let lyz = self.l_of(yz);
                        let br = mat_supercommutator(&self.params, &ls[x], px, &lyz, pyz);
                        if sgn {
                            br.iter().map(neg_gvec).collect::<Vec<_>>()
                        } else {
                            br
                        }
                    };
                    let t1 = term(
                        a,
                        pa,
                        &self.product[b][c],
                        pb.plus(pc),
                        pa.is_odd() && pc.is_odd(),
                    );
                    let t2 = term(
                        b,
                        pb,
                        &self.product[c][a],
                        pc.plus(pa),
                        pb.is_odd() && pa.is_odd(),
                    );
                    let t3 = term(
                        c,
                        pc,
                        &self.product[a][b],
                        pa.plus(pb),
                        pc.is_odd() && pb.is_odd(),
                    );
                    let sum = mat_add(&mat_add(&t1, &t2), &t3);
                    if !mat_is_zero(&sum) {
                        return Err(JordanError::JordanAxiomViolation(format!(
                            "Jordan identity fails on ({}, {}, {})",
                            sig.name(a),
                            sig.name(b),
                            sig.name(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn dim(&self) -> usize {
        self.signature.dim()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn unit_vector(&self) -> GVec {
        let mut v = zero_gvec(&self.params, self.dim());
        v[self.unit] = ParamScalar::one(&self.params);
        v
    }

    /// e_a ∗ e_b as coordinates.
    pub fn product_basis(&self, a: usize, b: usize) -> &GVec {
        &self.product[a][b]
    }

    /// Bilinear product of coordinate vectors.
    pub fn mul(&self, x: &[ParamScalar], y: &[ParamScalar]) -> GVec {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let mut out = zero_gvec(&self.params, self.dim());
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if !yb.is_zero() {
                    axpy(&mut out, &xa.mul(yb), &self.product[a][b]);
                }
            }
        }
        out
    }

    /// Left multiplication L_{e_a} as a matrix (columns).
    pub fn l_basis(&self, a: usize) -> Vec<GVec> {
        (0..self.dim()).map(|b| self.product[a][b].clone()).collect()
    }

    /// Left multiplication by a coordinate vector.
    pub fn l_of(&self, x: &[ParamScalar]) -> Vec<GVec> {
        (0..self.dim())
            .map(|b| {
                let mut col = zero_gvec(&self.params, self.dim());
                for (a, xa) in x.iter().enumerate() {
                    if !xa.is_zero() {
                        axpy(&mut col, xa, &self.product[a][b]);
                    }
                }
                col
            })
            .collect()
    }

    /// D_{e_a, e_b} = 2 L_{e_a ∗ e_b} + 2 [L_{e_a}, L_{e_b}] expressed with
    /// left multiplications.
    pub fn d_from_l(&self, a: usize, b: usize) -> Vec<GVec> {
        let two = rat(2, 1);
        let lab = self.l_of(&self.product[a][b]);
        let br = mat_supercommutator(
            &self.params,
            &self.l_basis(a),
            self.signature.parity(a),
            &self.l_basis(b),
            self.signature.parity(b),
        );
        mat_add(&lab, &br)
            .iter()
            .map(|col| scale_gvec(col, &two))
            .collect()
    }

    /// P_{e_a, e_b} = L_{e_a} L_{e_b} + (−1)^{|a||b|} L_{e_b} L_{e_a}
    /// − L_{e_a ∗ e_b} expressed with left multiplications.
    pub fn p_from_l(&self, a: usize, b: usize) -> Vec<GVec> {
        let la = self.l_basis(a);
        let lb = self.l_basis(b);
        let mut anti = mat_mul(&self.params, &la, &lb);
        let ba = mat_mul(&self.params, &lb, &la);
        let neg = self.signature.parity(a).is_odd() && self.signature.parity(b).is_odd();
        anti = if neg {
            mat_sub(&anti, &ba)
        } else {
            mat_add(&anti, &ba)
        };
        mat_sub(&anti, &self.l_of(&self.product[a][b]))
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for (i, row) in self.product.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !gvec_is_zero(v) {
                    entries.push(json!({
                        "i": i,
                        "j": j,
                        "coeffs": v.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    }));
                }
            }
        }
        json!({
            "params": self.params.names(),
            "signature": signature_to_json(&self.signature),
            "product": entries,
            "unit": self.unit,
        })
    }

    pub fn from_json(value: &Value) -> Result<UnitalJordanSuperalgebra, JordanError> {
        let params = params_from_json(value.get("params"))?;
        let signature = signature_from_json(value.get("signature"))?;
        let n = signature.dim();
        let entries = value
            .get("product")
            .and_then(Value::as_array)
            .ok_or_else(|| JordanError::InvalidInput("missing `product` array".into()))?;
        let mut product = vec![vec![zero_gvec(&params, n); n]; n];
        for entry in entries {
            let read = |key: &str| -> Result<usize, JordanError> {
                entry
                    .get(key)
                    .and_then(Value::as_u64)
                    .map(|v| v as usize)
                    .filter(|&v| v < n)
                    .ok_or_else(|| {
                        JordanError::InvalidInput(format!("bad `{key}` in product entry"))
                    })
            };
            let (i, j) = (read("i")?, read("j")?);
            product[i][j] = coeffs_from_json(&params, entry.get("coeffs"), n)?;
        }
        let unit = value
            .get("unit")
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| JordanError::InvalidInput("missing `unit` index".into()))?;
        UnitalJordanSuperalgebra::new(&params, signature, product, unit)
    }
}

/// The superpair (J, J) of a unital Jordan superalgebra, with
///
///   {x, y, z} = 2 ( x∗(y∗z) + (x∗y)∗z − (−1)^{|x||y|} y∗(x∗z) ).
pub fn pair_from_unital(j: &UnitalJordanSuperalgebra) -> Result<JordanSuperpair, JordanError> {
    let n = j.dim();
    let sig = j.signature();
    let two = rat(2, 1);
    let mut tensor = vec![vec![vec![zero_gvec(j.params(), n); n]; n]; n];
    for a in 0..n {
        for m in 0..n {
            for b in 0..n {
                let mut acc = j.mul(&basis_vec(j.params(), n, a), &j.product[m][b]);
                let t2 = j.mul(&j.product[a][m], &basis_vec(j.params(), n, b));
                let t3 = j.mul(&basis_vec(j.params(), n, m), &j.product[a][b]);
                acc = acc.iter().zip(&t2).map(|(x, y)| x.add(y)).collect();
                let neg = sig.parity(a).is_odd() && sig.parity(m).is_odd();
                acc = acc
                    .iter()
                    .zip(&t3)
                    .map(|(x, y)| if neg { x.add(y) } else { x.sub(y) })
                    .collect();
                tensor[a][m][b] = scale_gvec(&acc, &two);
            }
        }
    }
    JordanSuperpair::new(
        j.params(),
        sig.clone(),
        sig.clone(),
        tensor.clone(),
        tensor,
    )
}

fn basis_vec(params: &ParamSet, n: usize, i: usize) -> GVec {
    let mut v = zero_gvec(params, n);
    v[i] = ParamScalar::one(params);
    v
}

// ---------------------------------------------------------------------------
// The inverse construction on 3-graded algebras
// ---------------------------------------------------------------------------

/// 𝔤₊₁ and 𝔤₋₁ basis indices reordered even-first (3-gradings only).
fn three_graded_maps(
    g: &LieSuperalgebra,
    grading: &ZGrading,
) -> Result<(Vec<usize>, Vec<usize>), JordanError> {
    if !grading.is_three_graded() {
        return Err(JordanError::NotThreeGraded(format!(
            "degrees {:?} leave {{−1, 0, 1}}",
            grading.degrees()
        )));
    }
    let order = |idxs: Vec<usize>| -> Vec<usize> {
        let (even, odd): (Vec<usize>, Vec<usize>) =
            idxs.into_iter().partition(|&i| !g.parity(i).is_odd());
        even.into_iter().chain(odd).collect()
    };
    Ok((order(grading.plus_indices()), order(grading.minus_indices())))
}

fn block_signature(g: &LieSuperalgebra, map: &[usize]) -> Arc<Signature> {
    let even: Vec<&str> = map
        .iter()
        .filter(|&&i| !g.parity(i).is_odd())
        .map(|&i| g.name(i))
        .collect();
    let odd: Vec<&str> = map
        .iter()
        .filter(|&&i| g.parity(i).is_odd())
        .map(|&i| g.name(i))
        .collect();
    Signature::new(&even, &odd)
}

/// The Jordan superpair (𝔤₊₁, 𝔤₋₁) of a 3-graded Lie superalgebra with
/// triple product {x, y, z} = [[x, y], z].
pub fn pair_from_3graded(
    g: &Arc<LieSuperalgebra>,
    grading: &ZGrading,
) -> Result<JordanSuperpair, JordanError> {
    let (plus_map, minus_map) = three_graded_maps(g, grading)?;
    let vplus = block_signature(g, &plus_map);
    let vminus = block_signature(g, &minus_map);
    let restrict = |v: &GVec, map: &[usize]| -> GVec {
        debug_assert!(
            v.iter()
                .enumerate()
                .all(|(i, c)| c.is_zero() || map.contains(&i)),
            "double bracket leaves the graded block"
        );
        map.iter().map(|&i| v[i].clone()).collect()
    };
    let tensor = |outer: &[usize], mid: &[usize]| -> Result<TripleTensor, JordanError> {
        let mut t =
            vec![vec![vec![zero_gvec(g.params(), outer.len()); outer.len()]; mid.len()]; outer.len()];
        for (a, &p) in outer.iter().enumerate() {
            for (m, &q) in mid.iter().enumerate() {
                let first = g.bracket_basis(p, q).clone();
                for (b, &p2) in outer.iter().enumerate() {
                    let z = g
                        .bracket(&first, &g.basis_vector(p2))
                        .map_err(JordanError::Lie)?;
                    t[a][m][b] = restrict(&z, outer);
                }
            }
        }
        Ok(t)
    };
    let triple_plus = tensor(&plus_map, &minus_map)?;
    let triple_minus = tensor(&minus_map, &plus_map)?;
    JordanSuperpair::new(g.params(), vplus, vminus, triple_plus, triple_minus)
}

/// Whether a 3-graded algebra satisfies [𝔤₊₁, 𝔤₋₁] = 𝔤₀ and
/// 𝔤₀ ∩ Z(𝔤) = 0 (both sides computed exactly).
pub fn jordan_graded(g: &LieSuperalgebra, grading: &ZGrading) -> Result<bool, JordanError> {
    if !grading.is_three_graded() {
        return Err(JordanError::NotThreeGraded(format!(
            "degrees {:?} leave {{−1, 0, 1}}",
            grading.degrees()
        )));
    }
    let zero = grading.zero_indices();
    if zero.is_empty() {
        return Ok(true);
    }
    let mut cols = Vec::new();
    for &p in &grading.plus_indices() {
        for &m in &grading.minus_indices() {
            let br = g.bracket_basis(p, m);
            let col: GVec = zero.iter().map(|&z| br[z].clone()).collect();
            if !gvec_is_zero(&col) {
                cols.push(col);
            }
        }
    }
    let spans =
        !cols.is_empty() && Matrix::from_columns(g.params(), &cols).rank() == zero.len();
    if !spans {
        return Ok(false);
    }
    // A central element of 𝔤₀ is a kernel vector of z ↦ ([z, X_j])_j.
    let mut constraint_cols = Vec::new();
    for &z in &zero {
        let mut col = Vec::new();
        for j in 0..g.dim() {
            col.extend(g.bracket_basis(z, j).iter().cloned());
        }
        constraint_cols.push(col);
    }
    let centre_trivial = Matrix::from_columns(g.params(), &constraint_cols)
        .kernel_basis()
        .is_empty();
    Ok(spans && centre_trivial)
}

// ---------------------------------------------------------------------------
// The Tits–Kantor–Koecher construction
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Plus(usize),
    Str(usize),
    Minus(usize),
}

/// The 3-graded Lie superalgebra V₊ ⊕ 𝔰𝔱𝔯(V) ⊕ V₋ of a Jordan superpair,
/// with bracket table
///
///   [x, u] = D_{x,u},      [D_{x,u}, y] = {x, u, y},
///   [u, D_{x,v}] = {u, x, v},      [x, y] = [u, v] = 0,
///
/// and the supercommutator on 𝔰𝔱𝔯(V). The structure algebra is realised on
/// a maximal independent subset of the operators D_{x_a, u_m}, found by
/// exact rank.
#[derive(Clone, Debug)]
pub struct Tkk {
    algebra: Arc<LieSuperalgebra>,
    grading: ZGrading,
    plus_idx: Vec<usize>,
    str_idx: Vec<usize>,
    minus_idx: Vec<usize>,
    str_labels: Vec<(usize, usize)>,
    str_flats: Vec<GVec>,
    d_in_str: Vec<Vec<GVec>>,
}

impl Tkk {
    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.algebra
    }

    pub fn grading(&self) -> &ZGrading {
        &self.grading
    }

    /// Basis index of the a-th V₊ generator.
    pub fn plus_index(&self, a: usize) -> usize {
        self.plus_idx[a]
    }

    /// Basis index of the k-th structure-algebra generator.
    pub fn str_index(&self, k: usize) -> usize {
        self.str_idx[k]
    }

    /// Basis index of the m-th V₋ generator.
    pub fn minus_index(&self, m: usize) -> usize {
        self.minus_idx[m]
    }

    pub fn str_dim(&self) -> usize {
        self.str_idx.len()
    }

    /// The (a, m) with D_{x_a, u_m} the k-th structure basis element.
    pub fn str_label(&self, k: usize) -> (usize, usize) {
        self.str_labels[k]
    }

    /// Expansion coefficients of D_{x_a, u_m} in the structure basis.
    pub fn d_in_str(&self, a: usize, m: usize) -> &GVec {
        &self.d_in_str[a][m]
    }

    /// Expands an operator matrix on V₊ in the structure basis.
    pub fn expand_in_str(&self, params: &ParamSet, mat: &[GVec]) -> Result<GVec, JordanError> {
        let flat = mat_flat(mat);
        if self.str_dim() == 0 {
            if gvec_is_zero(&flat) {
                return Ok(Vec::new());
            }
            return Err(JordanError::PairAxiomViolation(
                "operator leaves the (zero) structure algebra".into(),
            ));
        }
        Matrix::from_columns(params, &self.str_flats)
            .solve(&flat)
            .ok_or_else(|| {
                JordanError::PairAxiomViolation(
                    "operator leaves the span of the structure algebra".into(),
                )
            })
    }
}

/// [D_{x_a, u_m}, u_l] as V₋ coordinates.
fn str_on_minus(pair: &JordanSuperpair, a: usize, m: usize, l: usize) -> GVec {
    let pd = pair.vplus().parity(a).plus(pair.vminus().parity(m));
    let v = pair.triple_minus_basis(l, a, m);
    if pd.is_odd() && pair.vminus().parity(l).is_odd() {
        v.clone()
    } else {
        neg_gvec(v)
    }
}

pub fn tkk(pair: &JordanSuperpair) -> Result<Tkk, JordanError> {
    let params = pair.params();
    let np = pair.vplus().dim();
    let nm = pair.vminus().dim();

    // A maximal independent subset of the D_{x_a, u_m}, by exact rank.
    let mut labels: Vec<(usize, usize)> = Vec::new();
    let mut ops: Vec<Vec<GVec>> = Vec::new();
    let mut flats: Vec<GVec> = Vec::new();
    for a in 0..np {
        for m in 0..nm {
            let mat = pair.d_plus_basis(a, m);
            let flat = mat_flat(&mat);
            if gvec_is_zero(&flat) {
                continue;
            }
            let mut cand = flats.clone();
            cand.push(flat.clone());
            if Matrix::from_columns(params, &cand).rank() == flats.len() + 1 {
                labels.push((a, m));
                ops.push(mat);
                flats.push(flat);
            }
        }
    }
    let sd = labels.len();
    let str_parities: Vec<Parity> = labels
        .iter()
        .map(|&(a, m)| pair.vplus().parity(a).plus(pair.vminus().parity(m)))
        .collect();
    let basis_mat = (sd > 0).then(|| Matrix::from_columns(params, &flats));
    let expand = |mat: &[GVec]| -> Result<GVec, JordanError> {
        let flat = mat_flat(mat);
        if sd == 0 {
            if gvec_is_zero(&flat) {
                return Ok(Vec::new());
            }
            return Err(JordanError::PairAxiomViolation(
                "a D-operator leaves the (zero) structure algebra".into(),
            ));
        }
        basis_mat.as_ref().unwrap().solve(&flat).ok_or_else(|| {
            JordanError::PairAxiomViolation(
                "a D-operator leaves the span of the structure algebra".into(),
            )
        })
    };

    // Expansions of every generator, and well-definedness of the action on
    // V₋: the expansion of D_{x_a, u_m} must act on V₋ exactly as the label
    // does.
    let mut d_in_str = vec![vec![GVec::new(); nm]; np];
    for a in 0..np {
        for m in 0..nm {
            d_in_str[a][m] = expand(&pair.d_plus_basis(a, m))?;
        }
    }
    for a in 0..np {
        for m in 0..nm {
            for l in 0..nm {
                let want = str_on_minus(pair, a, m, l);
                let mut got = zero_gvec(params, nm);
                for (k, c) in d_in_str[a][m].iter().enumerate() {
                    if !c.is_zero() {
                        axpy(&mut got, c, &str_on_minus(pair, labels[k].0, labels[k].1, l));
                    }
                }
                if got != want {
                    return Err(JordanError::PairAxiomViolation(
                        "the structure algebra acts ambiguously on V₋".into(),
                    ));
                }
            }
        }
    }

    // Basis layout: all even elements first (V₊, 𝔰𝔱𝔯, V₋ order within each
    // parity), as the bracket-table constructor requires.
    let mut slots = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        for a in 0..np {
            if pair.vplus().parity(a) == parity {
                slots.push(Slot::Plus(a));
            }
        }
        for (k, &p) in str_parities.iter().enumerate() {
            if p == parity {
                slots.push(Slot::Str(k));
            }
        }
        for m in 0..nm {
            if pair.vminus().parity(m) == parity {
                slots.push(Slot::Minus(m));
            }
        }
    }
    let dim = slots.len();
    let mut plus_idx = vec![0usize; np];
    let mut str_idx = vec![0usize; sd];
    let mut minus_idx = vec![0usize; nm];
    for (i, slot) in slots.iter().enumerate() {
        match *slot {
            Slot::Plus(a) => plus_idx[a] = i,
            Slot::Str(k) => str_idx[k] = i,
            Slot::Minus(m) => minus_idx[m] = i,
        }
    }

    // Names: V₋ keeps its signature names (the realisation module builds the
    // polynomial signature from them); colliding V₊ names get a `p` suffix.
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut minus_names = vec![String::new(); nm];
    for m in 0..nm {
        let mut cand = pair.vminus().name(m).to_string();
        while !used.insert(cand.clone()) {
            cand.push('p');
        }
        minus_names[m] = cand;
    }
    let mut plus_names = vec![String::new(); np];
    for a in 0..np {
        let mut cand = pair.vplus().name(a).to_string();
        while !used.insert(cand.clone()) {
            cand.push('p');
        }
        plus_names[a] = cand;
    }
    let mut str_names = vec![String::new(); sd];
    for (k, name) in str_names.iter_mut().enumerate() {
        let mut cand = format!("D{k}");
        while !used.insert(cand.clone()) {
            cand.push('p');
        }
        *name = cand;
    }
    let names: Vec<String> = slots
        .iter()
        .map(|slot| match *slot {
            Slot::Plus(a) => plus_names[a].clone(),
            Slot::Str(k) => str_names[k].clone(),
            Slot::Minus(m) => minus_names[m].clone(),
        })
        .collect();
    let parities: Vec<Parity> = slots
        .iter()
        .map(|slot| match *slot {
            Slot::Plus(a) => pair.vplus().parity(a),
            Slot::Str(k) => str_parities[k],
            Slot::Minus(m) => pair.vminus().parity(m),
        })
        .collect();

    // Bracket entries for i ≤ j; the constructor supplies the mirrored half.
    let slot_parity = |s: Slot| match s {
        Slot::Plus(a) => pair.vplus().parity(a),
        Slot::Str(k) => str_parities[k],
        Slot::Minus(m) => pair.vminus().parity(m),
    };
    let mut entries = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            let (si, sj) = (slots[i], slots[j]);
            let both_odd = slot_parity(si).is_odd() && slot_parity(sj).is_odd();
            let coeffs: Vec<(usize, ParamScalar)> = match (si, sj) {
                (Slot::Plus(_), Slot::Plus(_)) | (Slot::Minus(_), Slot::Minus(_)) => Vec::new(),
                (Slot::Plus(a), Slot::Minus(m)) => d_in_str[a][m]
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (str_idx[k], c.clone()))
                    .collect(),
                (Slot::Minus(m), Slot::Plus(a)) => d_in_str[a][m]
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (str_idx[k], if both_odd { c.clone() } else { c.neg() }))
                    .collect(),
                (Slot::Str(k), Slot::Plus(a)) => ops[k][a]
                    .iter()
                    .enumerate()
                    .map(|(b, c)| (plus_idx[b], c.clone()))
                    .collect(),
                (Slot::Plus(a), Slot::Str(k)) => ops[k][a]
                    .iter()
                    .enumerate()
                    .map(|(b, c)| (plus_idx[b], if both_odd { c.clone() } else { c.neg() }))
                    .collect(),
                (Slot::Str(k), Slot::Minus(m)) => {
                    let (ak, bk) = labels[k];
                    str_on_minus(pair, ak, bk, m)
                        .iter()
                        .enumerate()
                        .map(|(l, c)| (minus_idx[l], c.clone()))
                        .collect()
                }
                (Slot::Minus(m), Slot::Str(k)) => {
                    let (ak, bk) = labels[k];
                    pair.triple_minus_basis(m, ak, bk)
                        .iter()
                        .enumerate()
                        .map(|(l, c)| (minus_idx[l], c.clone()))
                        .collect()
                }
                (Slot::Str(k), Slot::Str(l)) => {
                    let br = mat_supercommutator(
                        params,
                        &ops[k],
                        str_parities[k],
                        &ops[l],
                        str_parities[l],
                    );
                    expand(&br)?
                        .iter()
                        .enumerate()
                        .map(|(t, c)| (str_idx[t], c.clone()))
                        .collect()
                }
            };
            let coeffs: Vec<(usize, ParamScalar)> =
                coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !coeffs.is_empty() {
                entries.push((i, j, coeffs));
            }
        }
    }
    let basis: Vec<(&str, Parity)> = names
        .iter()
        .map(String::as_str)
        .zip(parities.iter().copied())
        .collect();
    let algebra = LieSuperalgebra::from_bracket_entries(params, &basis, entries)
        .map_err(JordanError::Lie)?;
    let report = algebra.validate();
    if !report.is_ok() {
        return Err(JordanError::PairAxiomViolation(format!(
            "bracket table fails validation: {}",
            report.first_violation().unwrap_or("unknown violation")
        )));
    }
    let degrees: Vec<i64> = slots
        .iter()
        .map(|slot| match slot {
            Slot::Plus(_) => 1,
            Slot::Str(_) => 0,
            Slot::Minus(_) => -1,
        })
        .collect();
    let algebra = Arc::new(algebra);
    let grading = ZGrading::new(&algebra, degrees).map_err(JordanError::Lie)?;
    Ok(Tkk {
        algebra,
        grading,
        plus_idx,
        str_idx,
        minus_idx,
        str_labels: labels,
        str_flats: flats,
        d_in_str,
    })
}

/// The explicit basis map (columns in 𝔤 coordinates, indexed by the
/// reconstructed basis) realising TKK(𝒥(𝔤)) ≅ 𝔤 for a Jordan-graded 𝔤.
pub fn tkk_isomorphism(
    g: &Arc<LieSuperalgebra>,
    grading: &ZGrading,
) -> Result<(Tkk, Vec<GVec>), JordanError> {
    if !jordan_graded(g, grading)? {
        return Err(JordanError::NotJordanGraded(
            "[𝔤₊₁, 𝔤₋₁] = 𝔤₀ with trivial central part is required".into(),
        ));
    }
    let (plus_map, minus_map) = three_graded_maps(g, grading)?;
    let pair = pair_from_3graded(g, grading)?;
    let t = tkk(&pair)?;
    if t.algebra.dim() != g.dim() {
        return Err(JordanError::IsomorphismFailure(format!(
            "reconstruction has dimension {}, expected {}",
            t.algebra.dim(),
            g.dim()
        )));
    }
    let mut columns = vec![GVec::new(); g.dim()];
    for a in 0..plus_map.len() {
        columns[t.plus_idx[a]] = g.basis_vector(plus_map[a]);
    }
    for m in 0..minus_map.len() {
        columns[t.minus_idx[m]] = g.basis_vector(minus_map[m]);
    }
    for k in 0..t.str_dim() {
        let (ak, bk) = t.str_labels[k];
        columns[t.str_idx[k]] = g.bracket_basis(plus_map[ak], minus_map[bk]).clone();
    }
    if Matrix::from_columns(g.params(), &columns).rank() != g.dim() {
        return Err(JordanError::IsomorphismFailure(
            "the candidate basis map is singular".into(),
        ));
    }
    for i in 0..g.dim() {
        for j in i..g.dim() {
            let lhs = mat_apply(g.params(), &columns, t.algebra.bracket_basis(i, j));
            let rhs = g
                .bracket(&columns[i], &columns[j])
                .map_err(JordanError::Lie)?;
            if lhs != rhs {
                return Err(JordanError::IsomorphismFailure(format!(
                    "bracket ({}, {}) is not preserved",
                    t.algebra.name(i),
                    t.algebra.name(j)
                )));
            }
        }
    }
    Ok((t, columns))
}

// ---------------------------------------------------------------------------
// Characters and the conformal representation
// ---------------------------------------------------------------------------

/// A character of the structure algebra: one value per structure basis
/// element, validated against the TKK algebra.
pub fn tkk_character(t: &Tkk, values: &[ParamScalar]) -> Result<Character, JordanError> {
    if values.len() != t.str_dim() {
        return Err(JordanError::InvalidInput(format!(
            "expected {} character values, got {}",
            t.str_dim(),
            values.len()
        )));
    }
    for v in values {
        if v.params() != t.algebra.params() {
            return Err(JordanError::InvalidInput(
                "character values use a different parameter set".into(),
            ));
        }
    }
    let map: BTreeMap<usize, ParamScalar> = t
        .str_idx
        .iter()
        .zip(values)
        .map(|(&i, v)| (i, v.clone()))
        .collect();
    Character::new(&t.algebra, &t.grading, map).map_err(|e| match e {
        LieError::InvalidCharacter(msg) => JordanError::InvalidCharacter(msg),
        other => JordanError::Lie(other),
    })
}

/// λ(D_{x_a, e_i}) from the structure expansion and the character values.
fn lambda_d(t: &Tkk, values: &[ParamScalar], params: &ParamSet, a: usize, i: usize) -> ParamScalar {
    let mut acc = ParamScalar::zero(params);
    for (k, c) in t.d_in_str[a][i].iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&c.mul(&values[k]));
        }
    }
    acc
}

/// P̃_{e_i, e_j}(x_a) = (−1)^{|x_a|(|e_i|+|e_j|)} P⁻_{e_i,e_j}(x_a) as V₋
/// coordinates.
fn ptilde_basis(pair: &JordanSuperpair, i: usize, j: usize, a: usize) -> GVec {
    let half = rat(1, 2);
    let pa = pair.vplus().parity(a).is_odd();
    let (pi, pj) = (
        pair.vminus().parity(i).is_odd(),
        pair.vminus().parity(j).is_odd(),
    );
    let mut v = scale_gvec(pair.triple_minus_basis(i, a, j), &half);
    // Sign from the P definition and from moving x past (e_i, e_j).
    let neg = (pj && pa) ^ (pa && (pi ^ pj));
    if neg {
        v = neg_gvec(&v);
    }
    v
}

/// The conformal representation of TKK(V) on S(V₋):
///
///   π(u)       = u                                     for u ∈ V₋,
///   π(D_{x,y}) = λ(D_{x,y}) + Σ_i D*_{x,y}(e_i) ∂^i,
///   π(v)       = Σ_i λ(D_{v,e_i}) ∂^i
///                − Σ_{i,j} (−1)^{|v|(|e_i|+|e_j|)} P_{e_i,e_j}(v) ∂^j ∂^i,
///
/// with D*_{x,y} = −(−1)^{|x||y|} D_{y,x}.
pub fn conformal_rep(
    pair: &JordanSuperpair,
    values: &[ParamScalar],
) -> Result<Realisation, JordanError> {
    let t = tkk(pair)?;
    let character = tkk_character(&t, values)?;
    let params = pair.params();
    let np = pair.vplus().dim();
    let nm = pair.vminus().dim();
    let sig = pair.vminus().clone();
    let ders: Vec<WeylElement> = (0..nm)
        .map(|i| WeylElement::derivative(&sig, params, i))
        .collect();
    let mut images = vec![WeylElement::zero(&sig); t.algebra.dim()];
    for m in 0..nm {
        images[t.minus_idx[m]] = WeylElement::variable(&sig, params, m);
    }
    for k in 0..t.str_dim() {
        let (ak, bk) = t.str_labels[k];
        let mut op = WeylElement::constant(&sig, values[k].clone());
        let label_odd = pair.vplus().parity(ak).is_odd() && pair.vminus().parity(bk).is_odd();
        for (i, der) in ders.iter().enumerate() {
            // D*_{x,y}(e_i) = −(−1)^{|x||y|}{y, x, e_i}.
            let mut w = neg_gvec(pair.triple_minus_basis(bk, ak, i));
            if label_odd {
                w = neg_gvec(&w);
            }
            let mult = coords_polynomial(&sig, &w);
            if !mult.is_zero() {
                op = op.add(&WeylElement::from_polynomial(&mult).mul(der));
            }
        }
        images[t.str_idx[k]] = op;
    }
    for a in 0..np {
        let mut op = WeylElement::zero(&sig);
        for (i, der) in ders.iter().enumerate() {
            let lam = lambda_d(&t, values, params, a, i);
            if !lam.is_zero() {
                op = op.add(&der.scale(&lam));
            }
            for (j, der_j) in ders.iter().enumerate() {
                let w = neg_gvec(&ptilde_basis(pair, i, j, a));
                let mult = coords_polynomial(&sig, &w);
                if !mult.is_zero() {
                    op = op.add(&WeylElement::from_polynomial(&mult).mul(der_j).mul(der));
                }
            }
        }
        images[t.plus_idx[a]] = op;
    }
    let minus = t.minus_idx.clone();
    let grading = t.grading.clone();
    let algebra = Arc::clone(&t.algebra);
    Ok(Realisation::from_parts(
        algebra, grading, character, minus, sig, images,
    ))
}

// ---------------------------------------------------------------------------
// Bessel operators
// ---------------------------------------------------------------------------

/// The V₊*-valued second-order operator ℬ_λ = Σ_i λ_{e_i} ∂^i
/// + Σ_{i,j} P̃_{e_i,e_j} ∂^j ∂^i with λ_u(x) = −λ(D_{x,u}) and
/// P̃_{u,v}(x) = (−1)^{|x|(|u|+|v|)} P_{u,v}(x); its component at x equals
/// −π(x) of the conformal representation.
#[derive(Clone, Debug)]
pub struct BesselOperator {
    pair: JordanSuperpair,
    character: Character,
    sig: Arc<Signature>,
    components: Vec<WeylElement>,
}

impl BesselOperator {
    pub fn pair(&self) -> &JordanSuperpair {
        &self.pair
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    /// The signature of S(V₋), over which all components act.
    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    /// The component at the a-th V₊ basis element.
    pub fn component(&self, a: usize) -> &WeylElement {
        &self.components[a]
    }

    pub fn components(&self) -> &[WeylElement] {
        &self.components
    }

    /// Applies every component to a polynomial.
    pub fn apply(&self, p: &SuperPolynomial) -> Vec<SuperPolynomial> {
        self.components.iter().map(|c| c.apply(p)).collect()
    }

    /// Pairs of component names whose supercommutator does not vanish
    /// (empty for a valid Bessel operator).
    pub fn supercommutation_failures(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for a in 0..self.components.len() {
            for b in a..self.components.len() {
                if !self.components[a]
                    .supercommutator(&self.components[b])
                    .is_zero()
                {
                    out.push((
                        self.pair.vplus().name(a).to_string(),
                        self.pair.vplus().name(b).to_string(),
                    ));
                }
            }
        }
        out
    }
}

pub fn bessel(pair: &JordanSuperpair, values: &[ParamScalar]) -> Result<BesselOperator, JordanError> {
    let t = tkk(pair)?;
    let character = tkk_character(&t, values)?;
    let params = pair.params();
    let np = pair.vplus().dim();
    let nm = pair.vminus().dim();
    let sig = pair.vminus().clone();
    let ders: Vec<WeylElement> = (0..nm)
        .map(|i| WeylElement::derivative(&sig, params, i))
        .collect();
    let mut components = Vec::with_capacity(np);
    for a in 0..np {
        let mut op = WeylElement::zero(&sig);
        for (i, der) in ders.iter().enumerate() {
            let lam = lambda_d(&t, values, params, a, i).neg();
            if !lam.is_zero() {
                op = op.add(&der.scale(&lam));
            }
            for (j, der_j) in ders.iter().enumerate() {
                let mult = coords_polynomial(&sig, &ptilde_basis(pair, i, j, a));
                if !mult.is_zero() {
                    op = op.add(&WeylElement::from_polynomial(&mult).mul(der_j).mul(der));
                }
            }
        }
        // The operator is even overall: each component is homogeneous of the
        // parity of its V₊ basis element.
        let (even, odd) = op.parity_components();
        let stray = if pair.vplus().parity(a).is_odd() {
            even
        } else {
            odd
        };
        if !stray.is_zero() {
            return Err(JordanError::PairAxiomViolation(format!(
                "Bessel component at {} is not parity homogeneous",
                pair.vplus().name(a)
            )));
        }
        components.push(op);
    }
    Ok(BesselOperator {
        pair: pair.clone(),
        character,
        sig,
        components,
    })
}

/// Outcome of the product-rule verification
///
///   ℬ_λ(φψ) = ℬ_λ(φ)ψ + φ ℬ_λ(ψ)
///             + 2 Σ_{i,j} (−1)^{|e_i||φ|} P̃_{e_i,e_j} ∂^j(φ) ∂^i(ψ),
///
/// checked componentwise at exact equality.
#[derive(Clone, Debug)]
pub struct ProductRuleReport {
    components_checked: usize,
    failures: Vec<String>,
}

impl ProductRuleReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn components_checked(&self) -> usize {
        self.components_checked
    }

    /// Names of the V₊ basis elements whose component fails the rule.
    pub fn failures(&self) -> &[String] {
        &self.failures
    }
}

pub fn product_rule_check(
    b: &BesselOperator,
    phi: &SuperPolynomial,
    psi: &SuperPolynomial,
) -> ProductRuleReport {
    assert_eq!(
        phi.signature().as_ref(),
        b.sig.as_ref(),
        "φ must live over the V₋ signature"
    );
    assert_eq!(
        psi.signature().as_ref(),
        b.sig.as_ref(),
        "ψ must live over the V₋ signature"
    );
    let pair = &b.pair;
    let nm = pair.vminus().dim();
    let product = phi.mul(psi);
    let (phi_even, phi_odd) = parity_split(phi);
    let two = rat(2, 1);
    let mut failures = Vec::new();
    for (a, comp) in b.components.iter().enumerate() {
        let lhs = comp.apply(&product);
        let mut rhs = comp.apply(phi).mul(psi).add(&phi.mul(&comp.apply(psi)));
        for (phi_c, phi_odd_parity) in [(&phi_even, false), (&phi_odd, true)] {
            if phi_c.is_zero() {
                continue;
            }
            for i in 0..nm {
                let dpsi = psi.partial_derivative(i);
                if dpsi.is_zero() {
                    continue;
                }
                for j in 0..nm {
                    let dphi = phi_c.partial_derivative(j);
                    if dphi.is_zero() {
                        continue;
                    }
                    let mult = coords_polynomial(&b.sig, &ptilde_basis(pair, i, j, a));
                    if mult.is_zero() {
                        continue;
                    }
                    let mut q = two.clone();
                    if pair.vminus().parity(i).is_odd() && phi_odd_parity {
                        q = -q;
                    }
                    rhs = rhs.add(&mult.mul(&dphi).mul(&dpsi).scale(&ParamScalar::from_rational(
                        pair.params(),
                        q,
                    )));
                }
            }
        }
        if lhs != rhs {
            failures.push(pair.vplus().name(a).to_string());
        }
    }
    ProductRuleReport {
        components_checked: b.components.len(),
        failures,
    }
}

// ---------------------------------------------------------------------------
// The transformed representation for unital Jordan algebras
// ---------------------------------------------------------------------------

/// The Cartan involution θ(u, D_{x,y}, v) = (−αv, −D_{αy,αx}, −αu) of
/// TKK(J, J) as a matrix over the TKK basis (columns); verified to be an
/// involutive automorphism.
pub fn cartan_involution(
    t: &Tkk,
    pair: &JordanSuperpair,
    alpha: &[GVec],
) -> Result<Vec<GVec>, JordanError> {
    let n = pair.vplus().dim();
    if pair.vminus().dim() != n {
        return Err(JordanError::InvalidInput(
            "the Cartan involution needs a pair with V₊ = V₋".into(),
        ));
    }
    if alpha.len() != n || alpha.iter().any(|col| col.len() != n) {
        return Err(JordanError::InvalidInput(format!(
            "α must be an {n}×{n} matrix"
        )));
    }
    let params = pair.params();
    let dim = t.algebra.dim();
    let mut theta = vec![zero_gvec(params, dim); dim];
    for a in 0..n {
        for l in 0..n {
            theta[t.plus_idx[a]][t.minus_idx[l]] = alpha[a][l].neg();
        }
    }
    for m in 0..n {
        for b in 0..n {
            theta[t.minus_idx[m]][t.plus_idx[b]] = alpha[m][b].neg();
        }
    }
    for k in 0..t.str_dim() {
        let (ak, bk) = t.str_labels[k];
        let d_mat = pair.d_plus(&alpha[bk], &alpha[ak]);
        let coeffs = t.expand_in_str(params, &d_mat)?;
        for (s, c) in coeffs.iter().enumerate() {
            theta[t.str_idx[k]][t.str_idx[s]] = c.neg();
        }
    }
    let square = mat_mul(params, &theta, &theta);
    if square != mat_identity(params, dim) {
        return Err(JordanError::NotInvolution("θ² ≠ id".into()));
    }
    for i in 0..dim {
        for j in i..dim {
            let lhs = mat_apply(params, &theta, t.algebra.bracket_basis(i, j));
            let rhs = t
                .algebra
                .bracket(&theta[i], &theta[j])
                .map_err(JordanError::Lie)?;
            if lhs != rhs {
                return Err(JordanError::NotInvolution(format!(
                    "θ does not preserve the bracket ({}, {})",
                    t.algebra.name(i),
                    t.algebra.name(j)
                )));
            }
        }
    }
    Ok(theta)
}

/// The transformed representation π′ of TKK(J, J) for a purely even unital
/// Jordan algebra with trace form τ and Cartan involution α:
///
///   π′(u, 0, 0)       = −(u|·),
///   π′(0, D_{x,y}, 0) = (rλ₀/2n) Tr(D_{αy,αx}) + Σ_i τ(e_i, D_{αy,αx}·) ∂^i,
///   π′(0, 0, v)       = λ₀ Σ_i (v|e_i) ∂^i + Σ_{i,j} (v|P_{e_i,e_j}·) ∂^j ∂^i,
///
/// with (x|y) = τ(x, αy), r = τ(e, e) and n = dim J. The operators act on
/// polynomials in the variables x_i = τ(e_i, ·), with ∂^i dual to x_i; in
/// these variables the coefficient functions are plain basis expansions:
///
///   π′(u, 0, 0)       = −Σ_j [αu]_j x_j,
///   π′(0, D_{x,y}, 0) = (rλ₀/2n) Tr(D_{αy,αx})
///                       + Σ_{i,j} [D_{αx,αy}(e_i)]_j x_j ∂^i,
///   π′(0, 0, v)       = λ₀ Σ_i τ(αv, e_i) ∂^i
///                       + Σ_{i,j,b} [P_{e_i,e_j}(αv)]_b x_b ∂^j ∂^i.
///
/// The identity Tr(D_{x,y}) = (2n/r) τ(x,y) is verified on all basis pairs,
/// which pins τ to a multiple of the generic trace form; rescaling τ only
/// reparametrises λ₀ (τ ↦ cτ acts as λ₀ ↦ cλ₀).
pub fn conformal_rep_unital(
    j: &UnitalJordanSuperalgebra,
    tau: &[GVec],
    alpha: &[GVec],
    lambda0: &ParamScalar,
) -> Result<Realisation, JordanError> {
    let n = j.dim();
    let params = j.params();
    if j.signature().odd_count() > 0 {
        return Err(JordanError::InvalidInput(
            "the transformed representation is implemented for purely even Jordan algebras"
                .into(),
        ));
    }
    if tau.len() != n || tau.iter().any(|row| row.len() != n) {
        return Err(JordanError::InvalidInput(format!(
            "τ must be an {n}×{n} matrix"
        )));
    }
    if alpha.len() != n || alpha.iter().any(|col| col.len() != n) {
        return Err(JordanError::InvalidInput(format!(
            "α must be an {n}×{n} matrix"
        )));
    }
    for a in 0..n {
        for b in 0..n {
            if tau[a][b] != tau[b][a] {
                return Err(JordanError::InvalidInput(
                    "the trace form must be symmetric".into(),
                ));
            }
        }
    }
    if Matrix::from_columns(params, tau).rank() != n {
        return Err(JordanError::DegenerateTraceForm(
            "the trace form is singular".into(),
        ));
    }
    if mat_mul(params, alpha, alpha) != mat_identity(params, n) {
        return Err(JordanError::NotInvolution("α² ≠ id".into()));
    }
    for a in 0..n {
        for b in 0..n {
            let lhs = mat_apply(params, alpha, j.product_basis(a, b));
            let rhs = j.mul(&alpha[a], &alpha[b]);
            if lhs != rhs {
                return Err(JordanError::NotInvolution(format!(
                    "α is not an algebra automorphism on ({}, {})",
                    j.signature().name(a),
                    j.signature().name(b)
                )));
            }
        }
    }
    // r = τ(e, e), pinned by Tr(D_{x,y}) = (2n/r) τ(x,y), i.e.
    // n τ(x,y) = r Tr(L_{x∗y}) on all basis pairs.
    let r = tau[j.unit()][j.unit()].clone();
    if r.is_zero() {
        return Err(JordanError::TraceFormMismatch(
            "τ(e, e) = 0 cannot determine the rank".into(),
        ));
    }
    let n_scalar = ParamScalar::from_int(params, n as i64);
    for a in 0..n {
        for b in 0..n {
            let trace = mat_trace(&j.l_of(j.product_basis(a, b)));
            if tau[a][b].mul(&n_scalar) != r.mul(&trace) {
                return Err(JordanError::TraceFormMismatch(format!(
                    "n·τ ≠ τ(e,e)·Tr(L) on ({}, {})",
                    j.signature().name(a),
                    j.signature().name(b)
                )));
            }
        }
    }

    let pair = pair_from_unital(j)?;
    let t = tkk(&pair)?;
    let dim = t.algebra.dim();
    let degrees: Vec<i64> = (0..dim).map(|i| -t.grading.degree(i)).collect();
    let grading = ZGrading::new(&t.algebra, degrees).map_err(JordanError::Lie)?;

    // τ(e_i, w) for a coordinate vector w.
    let tau_of = |i: usize, w: &GVec| -> ParamScalar {
        let mut acc = ParamScalar::zero(params);
        for (c, wc) in w.iter().enumerate() {
            if !wc.is_zero() {
                acc = acc.add(&tau[i][c].mul(wc));
            }
        }
        acc
    };

    let sig = j.signature().clone();
    let ders: Vec<WeylElement> = (0..n)
        .map(|i| WeylElement::derivative(&sig, params, i))
        .collect();
    let half_over_n = rat(1, 2 * n as i64);

    // Character values on the structure basis and the operator images.
    let mut char_values = vec![ParamScalar::zero(params); t.str_dim()];
    let mut images = vec![WeylElement::zero(&sig); dim];
    for a in 0..n {
        let mult = neg_gvec(&alpha[a]);
        images[t.plus_idx[a]] =
            WeylElement::from_polynomial(&coords_polynomial(&sig, &mult));
    }
    for k in 0..t.str_dim() {
        let (ak, bk) = t.str_labels[k];
        let swapped = pair.d_plus(&alpha[bk], &alpha[ak]);
        let constant = r
            .mul(lambda0)
            .scale(&half_over_n)
            .mul(&mat_trace(&swapped));
        char_values[k] = constant.clone();
        let mut op = WeylElement::constant(&sig, constant);
        let d_mat = pair.d_plus(&alpha[ak], &alpha[bk]);
        for (i, der) in ders.iter().enumerate() {
            let poly = coords_polynomial(&sig, &d_mat[i]);
            if !poly.is_zero() {
                op = op.add(&WeylElement::from_polynomial(&poly).mul(der));
            }
        }
        images[t.str_idx[k]] = op;
    }
    for m in 0..n {
        let mut op = WeylElement::zero(&sig);
        for (i, der) in ders.iter().enumerate() {
            let lam = tau_of(i, &alpha[m]).mul(lambda0);
            if !lam.is_zero() {
                op = op.add(&der.scale(&lam));
            }
            for (jj, der_j) in ders.iter().enumerate() {
                let p_mat = pair.p_minus_basis(i, jj);
                let mult = mat_apply(params, &p_mat, &alpha[m]);
                let poly = coords_polynomial(&sig, &mult);
                if !poly.is_zero() {
                    op = op.add(&WeylElement::from_polynomial(&poly).mul(der_j).mul(der));
                }
            }
        }
        images[t.minus_idx[m]] = op;
    }
    let character = Character::new(
        &t.algebra,
        &grading,
        t.str_idx
            .iter()
            .zip(&char_values)
            .map(|(&i, v)| (i, v.clone()))
            .collect(),
    )
    .map_err(|e| match e {
        LieError::InvalidCharacter(msg) => JordanError::InvalidCharacter(msg),
        other => JordanError::Lie(other),
    })?;
    let minus = t.plus_idx.clone();
    Ok(Realisation::from_parts(
        Arc::clone(&t.algebra),
        grading,
        character,
        minus,
        sig,
        images,
    ))
}

// ---------------------------------------------------------------------------
// Short subalgebras
// ---------------------------------------------------------------------------

/// The short 𝔰𝔩(2) triple of TKK(J, J): e = (0, 0, e), h = (0, L_e, 0),
/// f = −(e/2, 0, 0), with [h, e] = −e, [h, f] = f, [e, f] = h verified
/// exactly.
#[derive(Clone, Debug)]
pub struct ShortSubalgebra {
    tkk: Tkk,
    e: GVec,
    h: GVec,
    f: GVec,
}

impl ShortSubalgebra {
    pub fn tkk(&self) -> &Tkk {
        &self.tkk
    }

    pub fn e(&self) -> &GVec {
        &self.e
    }

    pub fn h(&self) -> &GVec {
        &self.h
    }

    pub fn f(&self) -> &GVec {
        &self.f
    }
}

pub fn short_subalgebra(j: &UnitalJordanSuperalgebra) -> Result<ShortSubalgebra, JordanError> {
    let pair = pair_from_unital(j)?;
    let t = tkk(&pair)?;
    let params = j.params();
    let dim = t.algebra.dim();
    let mut e = zero_gvec(params, dim);
    e[t.minus_idx[j.unit()]] = ParamScalar::one(params);
    let mut f = zero_gvec(params, dim);
    f[t.plus_idx[j.unit()]] = ParamScalar::from_rational(params, rat(-1, 2));
    let l_e = t.expand_in_str(params, &j.l_basis(j.unit()))?;
    let mut h = zero_gvec(params, dim);
    for (k, c) in l_e.iter().enumerate() {
        h[t.str_idx[k]] = c.clone();
    }
    let bracket = |x: &GVec, y: &GVec| t.algebra.bracket(x, y).map_err(JordanError::Lie);
    if bracket(&h, &e)? != neg_gvec(&e) {
        return Err(JordanError::JordanAxiomViolation("[h, e] ≠ −e".into()));
    }
    if bracket(&h, &f)? != f {
        return Err(JordanError::JordanAxiomViolation("[h, f] ≠ f".into()));
    }
    if bracket(&e, &f)? != h {
        return Err(JordanError::JordanAxiomViolation("[e, f] ≠ h".into()));
    }
    Ok(ShortSubalgebra { tkk: t, e, h, f })
}

// ---------------------------------------------------------------------------
// JSON plumbing
// ---------------------------------------------------------------------------

fn signature_to_json(sig: &Arc<Signature>) -> Value {
    let even: Vec<&str> = (0..sig.even_count()).map(|i| sig.name(i)).collect();
    let odd: Vec<&str> = (sig.even_count()..sig.dim()).map(|i| sig.name(i)).collect();
    json!({ "even": even, "odd": odd })
}

fn signature_from_json(value: Option<&Value>) -> Result<Arc<Signature>, JordanError> {
    let value =
        value.ok_or_else(|| JordanError::InvalidInput("missing signature object".into()))?;
    let read = |key: &str| -> Result<Vec<String>, JordanError> {
        value
            .get(key)
            .and_then(Value::as_array)
            .map(|arr| {
                arr.iter()
                    .map(|v| v.as_str().map(str::to_string))
                    .collect::<Option<Vec<_>>>()
            })
            .flatten()
            .ok_or_else(|| JordanError::InvalidInput(format!("bad `{key}` name list")))
    };
    let even = read("even")?;
    let odd = read("odd")?;
    let mut seen = BTreeSet::new();
    for name in even.iter().chain(&odd) {
        if !seen.insert(name.clone()) {
            return Err(JordanError::InvalidInput(format!(
                "duplicate generator name `{name}`"
            )));
        }
    }
    let even_refs: Vec<&str> = even.iter().map(String::as_str).collect();
    let odd_refs: Vec<&str> = odd.iter().map(String::as_str).collect();
    Ok(Signature::new(&even_refs, &odd_refs))
}

fn params_from_json(value: Option<&Value>) -> Result<ParamSet, JordanError> {
    let names: Vec<String> = match value {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .map(|arr| {
                arr.iter()
                    .map(|x| x.as_str().map(str::to_string))
                    .collect::<Option<Vec<_>>>()
            })
            .flatten()
            .ok_or_else(|| JordanError::InvalidInput("bad `params` list".into()))?,
    };
    let mut seen = BTreeSet::new();
    for name in &names {
        if !seen.insert(name.clone()) {
            return Err(JordanError::InvalidInput(format!(
                "duplicate parameter `{name}`"
            )));
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(ParamSet::new(&refs))
}

fn coeffs_from_json(
    params: &ParamSet,
    value: Option<&Value>,
    len: usize,
) -> Result<GVec, JordanError> {
    let arr = value
        .and_then(Value::as_array)
        .ok_or_else(|| JordanError::InvalidInput("missing `coeffs` array".into()))?;
    if arr.len() != len {
        return Err(JordanError::InvalidInput(format!(
            "expected {len} coefficients, got {}",
            arr.len()
        )));
    }
    arr.iter()
        .map(|v| {
            let text = v
                .as_str()
                .ok_or_else(|| JordanError::InvalidInput("coefficients must be strings".into()))?;
            ParamScalar::parse(params, text).map_err(JordanError::Scalar)
        })
        .collect()
}

fn tensor_from_json(
    params: &ParamSet,
    value: Option<&Value>,
    label: &str,
    outer: usize,
    mid: usize,
) -> Result<TripleTensor, JordanError> {
    let entries = value
        .and_then(Value::as_array)
        .ok_or_else(|| JordanError::InvalidInput(format!("missing `{label}` array")))?;
    let mut tensor = vec![vec![vec![zero_gvec(params, outer); outer]; mid]; outer];
    for entry in entries {
        let read = |key: &str, bound: usize| -> Result<usize, JordanError> {
            entry
                .get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .filter(|&v| v < bound)
                .ok_or_else(|| {
                    JordanError::InvalidInput(format!("bad `{key}` in `{label}` entry"))
                })
        };
        let (i, j, k) = (read("i", outer)?, read("j", mid)?, read("k", outer)?);
        tensor[i][j][k] = coeffs_from_json(params, entry.get("coeffs"), outer)?;
    }
    Ok(tensor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realise::{check_homomorphism, realise_3graded};
    use crate::superpoly::multi_indices_up_to;
    use proptest::prelude::*;

    fn ps() -> ParamSet {
        ParamSet::new(&["lam0", "mu"])
    }

    fn pint(params: &ParamSet, n: i64) -> ParamScalar {
        ParamScalar::from_int(params, n)
    }

    fn lam0(params: &ParamSet) -> ParamScalar {
        ParamScalar::parameter(params, "lam0").unwrap()
    }

    /// J = ℚ: one even generator, x ∗ x = x.
    fn q_jordan(params: &ParamSet) -> UnitalJordanSuperalgebra {
        let sig = Signature::new(&["x"], &[]);
        UnitalJordanSuperalgebra::new(params, sig, vec![vec![vec![pint(params, 1)]]], 0).unwrap()
    }

    /// The spin factor ℚe ⊕ ℚv with v ∗ v = e.
    fn spin_factor(params: &ParamSet) -> UnitalJordanSuperalgebra {
        let sig = Signature::new(&["e", "v"], &[]);
        let c = |a: i64, b: i64| vec![pint(params, a), pint(params, b)];
        let product = vec![
            vec![c(1, 0), c(0, 1)],
            vec![c(0, 1), c(1, 0)],
        ];
        UnitalJordanSuperalgebra::new(params, sig, product, 0).unwrap()
    }

    /// The (1|1) superalgebra ℚx ⊕ ℚθ with x the unit and θ ∗ θ = 0.
    fn dual_numbers(params: &ParamSet) -> UnitalJordanSuperalgebra {
        let sig = Signature::new(&["x"], &["theta"]);
        let c = |a: i64, b: i64| vec![pint(params, a), pint(params, b)];
        let product = vec![
            vec![c(1, 0), c(0, 1)],
            vec![c(0, 1), c(0, 0)],
        ];
        UnitalJordanSuperalgebra::new(params, sig, product, 0).unwrap()
    }

    /// sl(2) with basis (e, h, f) and its principal 3-grading.
    fn sl2(params: &ParamSet) -> (Arc<LieSuperalgebra>, ZGrading) {
        let g = LieSuperalgebra::from_brackets(
            params,
            &[("e", Parity::Even), ("h", Parity::Even), ("f", Parity::Even)],
            &[
                (1, 0, &[(0, "2")]),
                (1, 2, &[(2, "-2")]),
                (0, 2, &[(1, "1")]),
            ],
        )
        .unwrap();
        let g = Arc::new(g);
        let grading = ZGrading::new(&g, vec![1, 0, -1]).unwrap();
        (g, grading)
    }

    #[test]
    fn rational_algebra_operators() {
        let params = ps();
        let j = q_jordan(&params);
        let pair = pair_from_unital(&j).unwrap();
        assert_eq!(pair.triple_plus_basis(0, 0, 0), &vec![pint(&params, 2)]);
        // D_{1,1} = 2·id and P_{1,1} = id.
        assert_eq!(pair.d_plus_basis(0, 0), vec![vec![pint(&params, 2)]]);
        assert_eq!(pair.p_minus_basis(0, 0), vec![vec![pint(&params, 1)]]);
        // The D and P operators agree with their left-multiplication forms.
        assert_eq!(pair.d_plus_basis(0, 0), j.d_from_l(0, 0));
        assert_eq!(pair.p_minus_basis(0, 0), j.p_from_l(0, 0));
    }

    #[test]
    fn spin_factor_and_dual_number_operators() {
        let params = ps();
        for j in [spin_factor(&params), dual_numbers(&params)] {
            let pair = pair_from_unital(&j).unwrap();
            let n = j.dim();
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(pair.d_plus_basis(a, b), j.d_from_l(a, b), "D at ({a}, {b})");
                    assert_eq!(pair.p_minus_basis(a, b), j.p_from_l(a, b), "P at ({a}, {b})");
                    // P_{x,y} = (−1)^{|x||y|} P_{y,x}.
                    let sig = j.signature();
                    let neg = sig.parity(a).is_odd() && sig.parity(b).is_odd();
                    let mirrored: Vec<GVec> = pair
                        .p_minus_basis(b, a)
                        .iter()
                        .map(|col| if neg { neg_gvec(col) } else { col.clone() })
                        .collect();
                    assert_eq!(pair.p_minus_basis(a, b), mirrored);
                }
            }
        }
        // D_{e,v} = 2 L_v on the spin factor.
        let j = spin_factor(&params);
        let pair = pair_from_unital(&j).unwrap();
        let two_lv: Vec<GVec> = j
            .l_basis(1)
            .iter()
            .map(|col| scale_gvec(col, &rat(2, 1)))
            .collect();
        assert_eq!(pair.d_plus_basis(0, 1), two_lv);
    }

    #[test]
    fn broken_jordan_identity_is_rejected() {
        let params = ps();
        let sig = Signature::new(&["e", "v", "w"], &[]);
        let c = |a: i64, b: i64, d: i64| vec![pint(&params, a), pint(&params, b), pint(&params, d)];
        // Rank-two spin factor corrupted by v ∗ w = v.
        let product = vec![
            vec![c(1, 0, 0), c(0, 1, 0), c(0, 0, 1)],
            vec![c(0, 1, 0), c(1, 0, 0), c(0, 1, 0)],
            vec![c(0, 0, 1), c(0, 1, 0), c(1, 0, 0)],
        ];
        let err = UnitalJordanSuperalgebra::new(&params, sig, product, 0).unwrap_err();
        assert!(matches!(err, JordanError::JordanAxiomViolation(_)), "{err}");
    }

    #[test]
    fn pair_axiom_checks_reject_corruption() {
        let params = ps();
        let pair = pair_from_unital(&spin_factor(&params)).unwrap();
        // Tamper with one tensor entry through the JSON form.
        let mut v = pair.to_json();
        v["triple_plus"][0]["coeffs"][0] = Value::String("7".into());
        let err = JordanSuperpair::from_json(&v).unwrap_err();
        assert!(matches!(err, JordanError::PairAxiomViolation(_)), "{err}");
        // A component of the wrong parity is caught as well.
        let pair = pair_from_unital(&dual_numbers(&params)).unwrap();
        let mut v = pair.to_json();
        v["triple_plus"]
            .as_array_mut()
            .unwrap()
            .push(serde_json::json!({"i": 0, "j": 0, "k": 0, "coeffs": ["0", "1"]}));
        let err = JordanSuperpair::from_json(&v).unwrap_err();
        assert!(matches!(err, JordanError::PairAxiomViolation(_)), "{err}");
    }

    #[test]
    fn zero_inputs_give_zero_operators() {
        let params = ps();
        let pair = pair_from_unital(&spin_factor(&params)).unwrap();
        let zero = zero_gvec(&params, 2);
        let any = vec![pint(&params, 3), pint(&params, -1)];
        assert!(mat_is_zero(&pair.d_plus(&zero, &any)));
        assert!(mat_is_zero(&pair.d_minus(&zero, &any)));
        assert!(mat_is_zero(&pair.p_minus(&zero, &any)));
        assert!(mat_is_zero(&pair.p_plus(&any, &zero)));
    }

    #[test]
    fn tkk_of_the_rational_pair_is_sl2() {
        let params = ps();
        let pair = pair_from_unital(&q_jordan(&params)).unwrap();
        let t = tkk(&pair).unwrap();
        let g = t.algebra();
        assert_eq!(g.dim(), 3);
        assert_eq!(t.str_dim(), 1);
        assert_eq!(t.str_label(0), (0, 0));
        // [D, x] = 2x, [D, u] = −2u, [x, u] = D.
        let (xp, d, um) = (t.plus_index(0), t.str_index(0), t.minus_index(0));
        assert_eq!(g.bracket_basis(d, xp)[xp], pint(&params, 2));
        assert_eq!(g.bracket_basis(d, um)[um], pint(&params, -2));
        assert_eq!(g.bracket_basis(xp, um)[d], pint(&params, 1));
        assert!(jordan_graded(g, t.grading()).unwrap());
        // The explicit isomorphism with sl(2) from the abstract side.
        let (sl2_alg, grading) = sl2(&params);
        let (t2, columns) = tkk_isomorphism(&sl2_alg, &grading).unwrap();
        assert_eq!(t2.algebra().dim(), 3);
        assert_eq!(columns[t2.str_index(0)], sl2_alg.basis_vector(1));
        // 𝒥(sl(2)) carries the same tensors as the pair of J = ℚ.
        let jpair = pair_from_3graded(&sl2_alg, &grading).unwrap();
        assert!(tensors_equal(&jpair, &pair));
    }

    #[test]
    fn dual_numbers_tkk_is_super_and_jordan_graded() {
        let params = ps();
        let pair = pair_from_unital(&dual_numbers(&params)).unwrap();
        let t = tkk(&pair).unwrap();
        assert_eq!(t.algebra().dim(), 6);
        assert_eq!(t.algebra().even_count(), 3);
        assert_eq!(t.str_dim(), 2);
        assert!(t.grading().is_three_graded());
        assert!(jordan_graded(t.algebra(), t.grading()).unwrap());
        let (t2, _) = tkk_isomorphism(t.algebra(), t.grading()).unwrap();
        assert_eq!(t2.algebra().dim(), 6);
    }

    #[test]
    fn reconstruction_round_trips_on_catalog_pairs() {
        let params = ps();
        for j in [q_jordan(&params), spin_factor(&params), dual_numbers(&params)] {
            let pair = pair_from_unital(&j).unwrap();
            let t = tkk(&pair).unwrap();
            let back = pair_from_3graded(t.algebra(), t.grading()).unwrap();
            assert!(tensors_equal(&pair, &back), "round trip for {:?}", j.signature().names());
        }
    }

    #[test]
    fn abelian_pair_gives_an_abelian_sandwich() {
        let params = ps();
        let vplus = Signature::new(&["x"], &[]);
        let vminus = Signature::new(&["y"], &[]);
        let zero_tensor = vec![vec![vec![zero_gvec(&params, 1)]]];
        let pair = JordanSuperpair::new(
            &params,
            vplus,
            vminus,
            zero_tensor.clone(),
            zero_tensor,
        )
        .unwrap();
        let t = tkk(&pair).unwrap();
        assert_eq!(t.algebra().dim(), 2);
        assert_eq!(t.str_dim(), 0);
        for i in 0..2 {
            for j in 0..2 {
                assert!(gvec_is_zero(t.algebra().bracket_basis(i, j)));
            }
        }
        let back = pair_from_3graded(t.algebra(), t.grading()).unwrap();
        assert!(tensors_equal(&pair, &back));
    }

    #[test]
    fn bessel_on_the_rational_pair() {
        let params = ps();
        let pair = pair_from_unital(&q_jordan(&params)).unwrap();
        let sig = pair.vminus().clone();
        let x = WeylElement::variable(&sig, &params, 0);
        let d = WeylElement::derivative(&sig, &params, 0);
        let l0 = lam0(&params);
        // λ(D_{1,1}) = 2λ₀ gives ℬ(1) = −2λ₀∂ + x∂².
        let b = bessel(&pair, &[l0.scale(&rat(2, 1))]).unwrap();
        let expected = x.mul(&d).mul(&d).add(&d.scale(&l0.scale(&rat(-2, 1))));
        assert_eq!(b.component(0), &expected);
        // λ(D_{1,1}) = −λ₀ gives the classical shape λ₀∂ + x∂².
        let b = bessel(&pair, &[l0.neg()]).unwrap();
        let classical = x.mul(&d).mul(&d).add(&d.scale(&l0));
        assert_eq!(b.component(0), &classical);
        // ℬ(x) = −π(x) against the conformal representation.
        let rep = conformal_rep(&pair, &[l0.neg()]).unwrap();
        let t = tkk(&pair).unwrap();
        assert_eq!(b.component(0), &rep.image(t.plus_index(0)).neg());
        // A zero triple product and zero character give the zero operator.
        let vsig = Signature::new(&["z"], &[]);
        let zero_tensor = vec![vec![vec![zero_gvec(&params, 1)]]];
        let zero_pair = JordanSuperpair::new(
            &params,
            vsig.clone(),
            vsig,
            zero_tensor.clone(),
            zero_tensor,
        )
        .unwrap();
        let b = bessel(&zero_pair, &[]).unwrap();
        assert!(b.component(0).is_zero());
    }

    #[test]
    fn conformal_rep_matches_the_closed_form_realisation() {
        let params = ps();
        let l0 = lam0(&params);
        let mu = ParamScalar::parameter(&params, "mu").unwrap();
        let cases: Vec<(UnitalJordanSuperalgebra, Vec<ParamScalar>)> = vec![
            (q_jordan(&params), vec![l0.clone()]),
            (spin_factor(&params), vec![l0.clone(), mu]),
            (dual_numbers(&params), vec![l0.clone(), ParamScalar::zero(&params)]),
        ];
        for (j, values) in cases {
            let pair = pair_from_unital(&j).unwrap();
            let t = tkk(&pair).unwrap();
            let rep = conformal_rep(&pair, &values).unwrap();
            let character = tkk_character(&t, &values).unwrap();
            let closed = realise_3graded(t.algebra(), t.grading(), &character).unwrap();
            assert_eq!(rep.signature(), closed.signature());
            for b in 0..t.algebra().dim() {
                assert_eq!(
                    rep.image(b),
                    closed.image(b),
                    "image of {} for {:?}",
                    t.algebra().name(b),
                    j.signature().names()
                );
            }
            assert!(check_homomorphism(&rep).is_ok());
        }
        // Frozen images for J = ℚ: π(u) = x, π(D) = λ − 2x∂, π(v) = λ∂ − x∂².
        let pair = pair_from_unital(&q_jordan(&params)).unwrap();
        let t = tkk(&pair).unwrap();
        let rep = conformal_rep(&pair, &[l0.clone()]).unwrap();
        let sig = rep.signature().clone();
        let x = WeylElement::variable(&sig, &params, 0);
        let d = WeylElement::derivative(&sig, &params, 0);
        assert_eq!(rep.image(t.minus_index(0)), &x);
        assert_eq!(
            rep.image(t.str_index(0)),
            &WeylElement::constant(&sig, l0.clone()).add(&x.mul(&d).scale(&pint(&params, -2)))
        );
        assert_eq!(
            rep.image(t.plus_index(0)),
            &d.scale(&l0).add(&x.mul(&d).mul(&d).neg())
        );
    }

    #[test]
    fn bessel_components_supercommute() {
        let params = ps();
        let l0 = lam0(&params);
        let mu = ParamScalar::parameter(&params, "mu").unwrap();
        let spin_pair = pair_from_unital(&spin_factor(&params)).unwrap();
        for values in [
            vec![l0.clone(), mu.clone()],
            vec![pint(&params, 1), ParamScalar::from_rational(&params, rat(1, 2))],
            vec![ParamScalar::zero(&params), ParamScalar::zero(&params)],
        ] {
            let b = bessel(&spin_pair, &values).unwrap();
            assert!(b.supercommutation_failures().is_empty());
        }
        let dual_pair = pair_from_unital(&dual_numbers(&params)).unwrap();
        let b = bessel(&dual_pair, &[l0, ParamScalar::zero(&params)]).unwrap();
        assert!(b.supercommutation_failures().is_empty());
    }

    #[test]
    fn product_rule_on_the_rational_pair() {
        let params = ps();
        let pair = pair_from_unital(&q_jordan(&params)).unwrap();
        let l0 = lam0(&params);
        let b = bessel(&pair, &[l0.scale(&rat(2, 1))]).unwrap();
        let sig = b.signature().clone();
        let x = SuperPolynomial::generator(&sig, &params, 0);
        let report = product_rule_check(&b, &x, &x);
        assert!(report.is_ok());
        assert_eq!(report.components_checked(), 1);
        // ℬ(x²) = −4λ₀x + 2x explicitly.
        let x2 = x.mul(&x);
        let expected = x
            .scale(&l0.scale(&rat(-4, 1)))
            .add(&x.scale(&pint(&params, 2)));
        assert_eq!(b.apply(&x2)[0], expected);
        // Constants are a trivial instance of the rule.
        let one = SuperPolynomial::one(&sig, &params);
        assert!(product_rule_check(&b, &one, &one).is_ok());
    }

    #[test]
    fn scholium_representation_for_the_rational_algebra() {
        let params = ps();
        let j = q_jordan(&params);
        let l0 = lam0(&params);
        let tau = vec![vec![pint(&params, 1)]];
        let alpha = vec![vec![pint(&params, 1)]];
        let rep = conformal_rep_unital(&j, &tau, &alpha, &l0).unwrap();
        assert!(check_homomorphism(&rep).is_ok());
        let sig = rep.signature().clone();
        let x = WeylElement::variable(&sig, &params, 0);
        let d = WeylElement::derivative(&sig, &params, 0);
        let pair = pair_from_unital(&j).unwrap();
        let t = tkk(&pair).unwrap();
        // π′(u) = −x, π′(D) = λ₀ + 2x∂, π′(v) = λ₀∂ + x∂².
        assert_eq!(rep.image(t.plus_index(0)), &x.neg());
        assert_eq!(
            rep.image(t.str_index(0)),
            &WeylElement::constant(&sig, l0.clone()).add(&x.mul(&d).scale(&pint(&params, 2)))
        );
        assert_eq!(
            rep.image(t.minus_index(0)),
            &d.scale(&l0).add(&x.mul(&d).mul(&d))
        );
        // Tr(D_{1,1}) = 2 = 2·τ(1,1).
        let d_mat = pair.d_plus_basis(0, 0);
        assert_eq!(mat_trace(&d_mat), pint(&params, 2));
    }

    #[test]
    fn scholium_representation_for_the_spin_factor() {
        let params = ps();
        let j = spin_factor(&params);
        let l0 = lam0(&params);
        let id = mat_identity(&params, 2);
        // The normalised trace form diag(2, 2) yields a representation.
        let tau = vec![
            vec![pint(&params, 2), pint(&params, 0)],
            vec![pint(&params, 0), pint(&params, 2)],
        ];
        let rep = conformal_rep_unital(&j, &tau, &id, &l0).unwrap();
        let report = check_homomorphism(&rep);
        assert!(report.is_ok(), "failures: {:?}", report.failures());
        // The induced character is λ′(D_{x,y}) = λ₀ τ(x,y): on D_{e,e} it
        // takes the value r λ₀ = 2λ₀.
        let pair = pair_from_unital(&j).unwrap();
        let t = tkk(&pair).unwrap();
        let k_ee = (0..t.str_dim()).find(|&k| t.str_label(k) == (0, 0)).unwrap();
        assert_eq!(
            rep.character().value(t.str_index(k_ee)),
            Some(&l0.scale(&rat(2, 1)))
        );
        // Rescaling τ only reparametrises λ₀: the halved form is again a
        // representation, with the character shifted to λ₀ τ(e,e) = λ₀.
        let halved = mat_identity(&params, 2);
        let rep = conformal_rep_unital(&j, &halved, &id, &l0).unwrap();
        assert!(check_homomorphism(&rep).is_ok());
        assert_eq!(rep.character().value(t.str_index(k_ee)), Some(&l0));
        // A form that is not a multiple of the trace form is rejected, as
        // are a singular form and a non-automorphism.
        let skew = vec![
            vec![pint(&params, 2), pint(&params, 0)],
            vec![pint(&params, 0), pint(&params, 4)],
        ];
        assert!(matches!(
            conformal_rep_unital(&j, &skew, &id, &l0),
            Err(JordanError::TraceFormMismatch(_))
        ));
        let singular = vec![
            vec![pint(&params, 1), pint(&params, 1)],
            vec![pint(&params, 1), pint(&params, 1)],
        ];
        assert!(matches!(
            conformal_rep_unital(&j, &singular, &id, &l0),
            Err(JordanError::DegenerateTraceForm(_))
        ));
        let swap = vec![
            vec![pint(&params, 0), pint(&params, 1)],
            vec![pint(&params, 1), pint(&params, 0)],
        ];
        assert!(matches!(
            conformal_rep_unital(&j, &tau, &swap, &l0),
            Err(JordanError::NotInvolution(_))
        ));
    }

    #[test]
    fn cartan_involution_is_an_involutive_automorphism() {
        let params = ps();
        for j in [q_jordan(&params), spin_factor(&params)] {
            let pair = pair_from_unital(&j).unwrap();
            let t = tkk(&pair).unwrap();
            let alpha = mat_identity(&params, j.dim());
            let theta = cartan_involution(&t, &pair, &alpha).unwrap();
            // θ swaps the graded pieces with a sign.
            let col = &theta[t.plus_index(0)];
            assert_eq!(col[t.minus_index(0)], pint(&params, -1));
        }
    }

    #[test]
    fn short_subalgebras_verify() {
        let params = ps();
        for j in [q_jordan(&params), spin_factor(&params), dual_numbers(&params)] {
            let s = short_subalgebra(&j).unwrap();
            let t = s.tkk();
            assert_eq!(s.h()[t.str_index(0)], ParamScalar::from_rational(&params, rat(1, 2)));
            assert_eq!(s.e()[t.minus_index(j.unit())], pint(&params, 1));
        }
    }

    #[test]
    fn character_validation() {
        let params = ps();
        let pair = pair_from_unital(&dual_numbers(&params)).unwrap();
        let t = tkk(&pair).unwrap();
        // A nonzero value on the odd structure element is rejected.
        let odd_k = (0..t.str_dim())
            .find(|&k| {
                t.algebra()
                    .parity(t.str_index(k))
                    .is_odd()
            })
            .unwrap();
        let mut values = vec![ParamScalar::zero(&params); t.str_dim()];
        values[odd_k] = pint(&params, 1);
        assert!(matches!(
            tkk_character(&t, &values),
            Err(JordanError::InvalidCharacter(_))
        ));
        assert!(matches!(
            tkk_character(&t, &[]),
            Err(JordanError::InvalidInput(_))
        ));
    }

    #[test]
    fn json_round_trips() {
        let params = ps();
        let pair = pair_from_unital(&spin_factor(&params)).unwrap();
        let back = JordanSuperpair::from_json(&pair.to_json()).unwrap();
        assert_eq!(pair, back);
        let j = dual_numbers(&params);
        let back = UnitalJordanSuperalgebra::from_json(&j.to_json()).unwrap();
        assert_eq!(j, back);
        // A parametric tensor survives the round trip.
        let mu = ParamScalar::parameter(&params, "mu").unwrap();
        let sig = Signature::new(&["x"], &[]);
        let tensor = vec![vec![vec![vec![mu]]]];
        let pair = JordanSuperpair::new(
            &params,
            sig.clone(),
            sig,
            tensor.clone(),
            tensor,
        )
        .unwrap();
        let back = JordanSuperpair::from_json(&pair.to_json()).unwrap();
        assert_eq!(pair, back);
    }

    // -- randomised checks --------------------------------------------------

    fn arb_homogeneous(
        params: ParamSet,
        parities: Vec<Parity>,
    ) -> impl Strategy<Value = GVec> {
        let dim = parities.len();
        let pick = prop_oneof![Just(Parity::Even), Just(Parity::Odd)];
        pick.prop_flat_map(move |parity| {
            let support: Vec<usize> = parities
                .iter()
                .enumerate()
                .filter(|(_, p)| **p == parity)
                .map(|(i, _)| i)
                .collect();
            let params = params.clone();
            proptest::collection::vec(-3i64..=3, support.len()).prop_map(move |cs| {
                let mut v = vec![ParamScalar::zero(&params); dim];
                for (t, c) in cs.into_iter().enumerate() {
                    v[support[t]] = ParamScalar::from_int(&params, c);
                }
                v
            })
        })
    }

    fn vec_parity(parities: &[Parity], v: &[ParamScalar]) -> Parity {
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                return parities[i];
            }
        }
        Parity::Even
    }

    fn arb_poly(params: ParamSet, sig: Arc<Signature>) -> impl Strategy<Value = SuperPolynomial> {
        let mut keys = vec![MultiIndex::zero(sig.dim())];
        keys.extend(multi_indices_up_to(&sig.parities(), 3));
        let n = keys.len();
        proptest::collection::vec(-3i64..=3, n).prop_map(move |coeffs| {
            let mut out = SuperPolynomial::zero(&sig);
            for (k, c) in keys.iter().zip(coeffs) {
                if c != 0 {
                    out.add_term(k.clone(), ParamScalar::from_int(&params, c));
                }
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        /// [D_{x,y}, D_{u,v}] = D_{{x,y,u},v}
        ///                      − (−1)^{(|x|+|y|)(|u|+|v|)} D_{u,{v,x,y}}.
        #[test]
        fn five_linear_operator_identity(
            x in arb_homogeneous(ps(), vec![Parity::Even, Parity::Odd]),
            y in arb_homogeneous(ps(), vec![Parity::Even, Parity::Odd]),
            u in arb_homogeneous(ps(), vec![Parity::Even, Parity::Odd]),
            v in arb_homogeneous(ps(), vec![Parity::Even, Parity::Odd]),
        ) {
            let params = ps();
            let pair = pair_from_unital(&dual_numbers(&params)).unwrap();
            let parities = vec![Parity::Even, Parity::Odd];
            let (px, py) = (vec_parity(&parities, &x), vec_parity(&parities, &y));
            let (pu, pv) = (vec_parity(&parities, &u), vec_parity(&parities, &v));
            let lhs = mat_supercommutator(
                &params,
                &pair.d_plus(&x, &y),
                px.plus(py),
                &pair.d_plus(&u, &v),
                pu.plus(pv),
            );
            let first = pair.d_plus(&pair.triple_plus(&x, &y, &u), &v);
            let second = pair.d_plus(&u, &pair.triple_minus(&v, &x, &y));
            let neg = (px.is_odd() ^ py.is_odd()) && (pu.is_odd() ^ pv.is_odd());
            let rhs = if neg {
                mat_add(&first, &second)
            } else {
                mat_sub(&first, &second)
            };
            prop_assert_eq!(lhs, rhs);
        }

        /// The product rule holds for random polynomials of degree ≤ 3 over
        /// the dual-numbers pair, whose V₋ has an odd direction.
        #[test]
        fn product_rule_random(
            phi in arb_poly(ps(), Signature::new(&["x"], &["theta"])),
            psi in arb_poly(ps(), Signature::new(&["x"], &["theta"])),
        ) {
            let params = ps();
            let pair = pair_from_unital(&dual_numbers(&params)).unwrap();
            let values = vec![lam0(&params), ParamScalar::zero(&params)];
            let b = bessel(&pair, &values).unwrap();
            let report = product_rule_check(&b, &phi, &psi);
            prop_assert!(report.is_ok(), "failures: {:?}", report.failures());
        }

        /// The product rule also holds on the spin-factor pair with a
        /// two-parameter character.
        #[test]
        fn product_rule_random_spin(
            phi in arb_poly(ps(), Signature::new(&["e", "v"], &[])),
            psi in arb_poly(ps(), Signature::new(&["e", "v"], &[])),
        ) {
            let params = ps();
            let pair = pair_from_unital(&spin_factor(&params)).unwrap();
            let values = vec![
                lam0(&params),
                ParamScalar::parameter(&params, "mu").unwrap(),
            ];
            let b = bessel(&pair, &values).unwrap();
            prop_assert!(product_rule_check(&b, &phi, &psi).is_ok());
        }
    }
}
