//! Built-in catalogue: the flagship 17-dimensional rank-3 family D(2,1;α)
//! bootstrapped from its polynomial operator table, a set of small classical
//! fixtures (sl(2), gl(1|1), Heisenberg, a 5-graded toy, Jordan algebras ℚ
//! and the rank-2 spin factor), and deterministic JSON / LaTeX / text
//! emitters shared with the command-line tool.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::jordan::{
    bessel, pair_from_unital, tkk, BesselOperator, JordanError, JordanSuperpair,
    UnitalJordanSuperalgebra,
};
use crate::liesuper::{
    algebra_from_operators, Character, GVec, LieError, LieSuperalgebra, ZGrading,
};
use crate::linalg::Matrix;
use crate::realise::{realise_3graded, realise_general, RealiseError, Realisation};
use crate::scalars::{ParamScalar, ParamSet, Rational, ScalarError};
use crate::superpoly::{Parity, Signature, SuperError};
use crate::weyl::{latex_scalar, latex_symbol, WeylElement};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalogue key `{0}`")]
    UnknownKey(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Realise(#[from] RealiseError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Super(#[from] SuperError),
}

// ---------------------------------------------------------------------------
// D(2,1;α)
// ---------------------------------------------------------------------------

/// Root data of the family, written against the orthonormal-ish weights
/// δ₁, δ₂, δ₃: a basis name, its parity, its short-grading degree, and its
/// polynomial operator on ℚ[x, y | θ, η].
///
/// The 𝔤₋ root vectors X_{−2δ₃}, X_{−2δ₂}, X_{δ₁−δ₂−δ₃}, X_{−δ₁−δ₂−δ₃} are
/// named after the variables x, y, th, et they realise; the remaining root
/// vectors carry sign patterns in the name (`Xmpp` ↔ X_{−δ₁+δ₂+δ₃}) and the
/// Cartan elements are `Hd1`, `Hd2`, `Hd3` ↔ H_{δ₁}, H_{δ₂}, H_{δ₃}.
fn d21alpha_rows() -> [(&'static str, Parity, i64, &'static str); 17] {
    use Parity::{Even, Odd};
    [
        ("Hd1", Even, 0, "th*Dth - et*Det"),
        ("Hd2", Even, 0, "lam - 2*y*Dy - th*Dth - et*Det"),
        ("Hd3", Even, 0, "lam/alpha - 2*x*Dx - th*Dth - et*Det"),
        ("X2d1", Even, 0, "(1 + alpha)*th*Det"),
        ("Xm2d1", Even, 0, "(1 + alpha)*et*Dth"),
        (
            "X2d2",
            Even,
            1,
            "(lam - y*Dy - th*Dth - et*Det)*Dy + alpha*x*Det*Dth",
        ),
        (
            "X2d3",
            Even,
            1,
            "(lam/alpha - x*Dx - th*Dth - et*Det)*Dx + y*Det*Dth",
        ),
        ("x", Even, -1, "x"),
        ("y", Even, -1, "y"),
        (
            "Xppp",
            Odd,
            1,
            "(lam - alpha*x*Dx - y*Dy - (1 + alpha)*th*Dth)*Det + th*Dx*Dy",
        ),
        (
            "Xmpp",
            Odd,
            1,
            "(-lam + alpha*x*Dx + y*Dy + (1 + alpha)*et*Det)*Dth + et*Dx*Dy",
        ),
        ("Xppm", Odd, 0, "th*Dy - alpha*x*Det"),
        ("Xpmp", Odd, 0, "th*Dx - y*Det"),
        ("Xmpm", Odd, 0, "-et*Dy - alpha*x*Dth"),
        ("Xmmp", Odd, 0, "-et*Dx - y*Dth"),
        ("th", Odd, -1, "th"),
        ("et", Odd, -1, "et"),
    ]
}

/// The flagship catalogue entry: a member of the D(2,1;α) family presented
/// through its operator table, with the derived abstract algebra, its short
/// 3-grading, and the character family λ ↦ (λ on H_{δ₂}, λ/α on H_{δ₃}).
pub struct D21Alpha {
    params: ParamSet,
    signature: Arc<Signature>,
    algebra: Arc<LieSuperalgebra>,
    grading: ZGrading,
    table: Vec<WeylElement>,
    alpha: ParamScalar,
}

impl D21Alpha {
    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.algebra
    }

    pub fn grading(&self) -> &ZGrading {
        &self.grading
    }

    /// The 17 defining operators, in basis order.
    pub fn table(&self) -> &[WeylElement] {
        &self.table
    }

    /// The α in use: the formal parameter, or its specialised value.
    pub fn alpha(&self) -> &ParamScalar {
        &self.alpha
    }

    /// The character sending H_{δ₂} ↦ λ and H_{δ₃} ↦ λ/α, zero elsewhere.
    pub fn character(&self, lambda: &ParamScalar) -> Result<Character, CatalogError> {
        let hd2 = self.algebra.index_of("Hd2").expect("named basis");
        let hd3 = self.algebra.index_of("Hd3").expect("named basis");
        let values = BTreeMap::from([
            (hd2, lambda.clone()),
            (hd3, lambda.div(&self.alpha)?),
        ]);
        Ok(Character::new(&self.algebra, &self.grading, values)?)
    }

    /// The closed-form realisation attached to the character of `lambda`;
    /// at the formal λ this reproduces [`D21Alpha::table`] exactly.
    pub fn realisation(&self, lambda: &ParamScalar) -> Result<Realisation, CatalogError> {
        Ok(realise_3graded(
            &self.algebra,
            &self.grading,
            &self.character(lambda)?,
        )?)
    }
}

/// Builds the family at formal α (structure constants in ℚ(α)).
pub fn build_d21alpha() -> Result<D21Alpha, CatalogError> {
    build_d21alpha_inner(None)
}

/// Builds the member at a rational α; the family degenerates at α ∈ {0, −1}
/// and those values are rejected.
pub fn build_d21alpha_at(alpha: &Rational) -> Result<D21Alpha, CatalogError> {
    if alpha.is_zero() || *alpha == -Rational::one() {
        return Err(CatalogError::InvalidParameter(format!(
            "alpha = {alpha} is excluded; the family requires alpha outside {{0, -1}}"
        )));
    }
    build_d21alpha_inner(Some(alpha))
}

fn build_d21alpha_inner(alpha_value: Option<&Rational>) -> Result<D21Alpha, CatalogError> {
    let params = ParamSet::new(&["alpha", "lam"]);
    let signature = Signature::new(&["x", "y"], &["th", "et"]);
    let substitution: BTreeMap<String, Rational> = match alpha_value {
        Some(r) => BTreeMap::from([("alpha".to_string(), r.clone())]),
        None => BTreeMap::new(),
    };
    let rows = d21alpha_rows();
    let mut ops = Vec::with_capacity(rows.len());
    let mut table = Vec::with_capacity(rows.len());
    for (name, parity, _, text) in &rows {
        let mut op = WeylElement::parse(&signature, &params, text)?;
        if !substitution.is_empty() {
            op = op.substitute(&substitution)?;
        }
        ops.push((name.to_string(), *parity, op.clone()));
        table.push(op);
    }

    let algebra = Arc::new(algebra_from_operators(&params, &ops)?);
    if algebra.dim() != 17 || algebra.even_count() != 9 || algebra.odd_count() != 8 {
        return Err(CatalogError::ConsistencyFailure(format!(
            "expected 17 basis elements split 9 even | 8 odd, found {} split {} | {}",
            algebra.dim(),
            algebra.even_count(),
            algebra.odd_count()
        )));
    }

    // The derived structure constants must be λ-free: the abstract algebra
    // lives over ℚ(α) and only the character knows λ.
    let lam_index = params.index_of("lam").expect("lam parameter");
    for i in 0..algebra.dim() {
        for j in i..algebra.dim() {
            for (k, c) in algebra.bracket_basis(i, j).iter().enumerate() {
                if !c.is_free_of(lam_index) {
                    return Err(CatalogError::ConsistencyFailure(format!(
                        "[{}, {}] has λ-dependent coefficient {} on {}",
                        algebra.name(i),
                        algebra.name(j),
                        c,
                        algebra.name(k)
                    )));
                }
            }
        }
    }

    let report = algebra.validate();
    if !report.is_ok() {
        return Err(CatalogError::ConsistencyFailure(format!(
            "derived brackets are not a Lie superalgebra: {}",
            report.first_violation().unwrap_or("unknown violation")
        )));
    }

    // The three defining normalisations.
    let scalar = |text: &str| -> Result<ParamScalar, CatalogError> {
        let c = ParamScalar::parse(&params, text)?;
        Ok(if substitution.is_empty() {
            c
        } else {
            c.substitute(&substitution)?
        })
    };
    let expected_vector = |entries: &[(&str, &str)]| -> Result<GVec, CatalogError> {
        let mut v = algebra.zero_vector();
        for (name, text) in entries {
            let k = algebra.index_of(name).expect("named basis");
            v[k] = scalar(text)?;
        }
        Ok(v)
    };
    let normalisations: [(&str, &str, Vec<(&str, &str)>); 3] = [
        ("X2d2", "y", vec![("Hd2", "1")]),
        ("X2d3", "x", vec![("Hd3", "1")]),
        (
            "th",
            "Xmpp",
            vec![
                ("Hd1", "-(1 + alpha)/2"),
                ("Hd2", "-1/2"),
                ("Hd3", "-alpha/2"),
            ],
        ),
    ];
    for (a, b, entries) in &normalisations {
        let i = algebra.index_of(a).expect("named basis");
        let j = algebra.index_of(b).expect("named basis");
        let got = algebra.bracket_basis(i, j);
        let expected = expected_vector(entries)?;
        if *got != expected {
            return Err(CatalogError::ConsistencyFailure(format!(
                "normalisation bracket [{a}, {b}] = {}, expected {}",
                algebra.vector_to_string(got),
                algebra.vector_to_string(&expected)
            )));
        }
    }

    let degrees: Vec<i64> = rows.iter().map(|(_, _, d, _)| *d).collect();
    let grading = ZGrading::new(&algebra, degrees).map_err(|e| {
        CatalogError::ConsistencyFailure(format!("the short grading is inconsistent: {e}"))
    })?;

    // 𝔤₀ decomposes as ℚh ⊕ [𝔤₀, 𝔤₀] with h = H_{δ₂} + H_{δ₃} spanning the
    // centre of 𝔤₀.
    let hd2 = algebra.index_of("Hd2").expect("named basis");
    let hd3 = algebra.index_of("Hd3").expect("named basis");
    let mut h = algebra.zero_vector();
    h[hd2] = ParamScalar::one(&params);
    h[hd3] = ParamScalar::one(&params);
    let zero_indices = grading.zero_indices();
    for &j in &zero_indices {
        let br = algebra.bracket(&h, &algebra.basis_vector(j))?;
        if br.iter().any(|c| !c.is_zero()) {
            return Err(CatalogError::ConsistencyFailure(format!(
                "h = Hd2 + Hd3 is not central in 𝔤₀: [h, {}] = {}",
                algebra.name(j),
                algebra.vector_to_string(&br)
            )));
        }
    }
    let mut centraliser_columns = Vec::with_capacity(zero_indices.len());
    for &i in &zero_indices {
        let mut column = Vec::new();
        for &j in &zero_indices {
            column.extend(algebra.bracket_basis(i, j).iter().cloned());
        }
        centraliser_columns.push(column);
    }
    let kernel = Matrix::from_columns(&params, &centraliser_columns).kernel_basis();
    if kernel.len() != 1 {
        return Err(CatalogError::ConsistencyFailure(format!(
            "the centre of 𝔤₀ has dimension {}, expected 1",
            kernel.len()
        )));
    }
    let h_zero: Vec<ParamScalar> = zero_indices.iter().map(|&i| h[i].clone()).collect();
    for s in 0..h_zero.len() {
        for t in (s + 1)..h_zero.len() {
            if kernel[0][s].mul(&h_zero[t]) != kernel[0][t].mul(&h_zero[s]) {
                return Err(CatalogError::ConsistencyFailure(
                    "the centre of 𝔤₀ is not spanned by h = Hd2 + Hd3".to_string(),
                ));
            }
        }
    }
    let mut derived_columns = Vec::new();
    for (s, &i) in zero_indices.iter().enumerate() {
        for &j in &zero_indices[s..] {
            let v = algebra.bracket_basis(i, j);
            if v.iter().any(|c| !c.is_zero()) {
                derived_columns.push(v.clone());
            }
        }
    }
    let derived_rank = Matrix::from_columns(&params, &derived_columns).rank();
    if derived_rank != 8 {
        return Err(CatalogError::ConsistencyFailure(format!(
            "[𝔤₀, 𝔤₀] has dimension {derived_rank}, expected 8"
        )));
    }
    derived_columns.push(h.clone());
    if Matrix::from_columns(&params, &derived_columns).rank() != 9 {
        return Err(CatalogError::ConsistencyFailure(
            "𝔤₀ is not the direct sum of ℚh and [𝔤₀, 𝔤₀]".to_string(),
        ));
    }

    let alpha = match alpha_value {
        Some(r) => ParamScalar::from_rational(&params, r.clone()),
        None => ParamScalar::parameter(&params, "alpha")?,
    };
    Ok(D21Alpha {
        params,
        signature,
        algebra,
        grading,
        table,
        alpha,
    })
}

// ---------------------------------------------------------------------------
// Standard entries
// ---------------------------------------------------------------------------

/// A graded Lie superalgebra entry with its documented default character:
/// λ is placed on the listed 𝔤₀ indices, zero elsewhere.
pub struct CatalogAlgebra {
    key: String,
    algebra: Arc<LieSuperalgebra>,
    grading: ZGrading,
    charged: Vec<usize>,
}

impl CatalogAlgebra {
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.algebra
    }

    pub fn grading(&self) -> &ZGrading {
        &self.grading
    }

    /// The default character, with λ on the documented 𝔤₀ slots.
    pub fn character(&self, lambda: &ParamScalar) -> Result<Character, CatalogError> {
        let values = self
            .charged
            .iter()
            .map(|&i| (i, lambda.clone()))
            .collect::<BTreeMap<_, _>>();
        Ok(Character::new(&self.algebra, &self.grading, values)?)
    }

    /// The polynomial realisation at `lambda`: the 3-graded closed form
    /// when the grading is short, the recursive form otherwise.
    pub fn realisation(&self, lambda: &ParamScalar) -> Result<Realisation, CatalogError> {
        let character = self.character(lambda)?;
        let r = if self.grading.is_three_graded() {
            realise_3graded(&self.algebra, &self.grading, &character)?
        } else {
            realise_general(&self.algebra, &self.grading, &character)?
        };
        Ok(r)
    }
}

/// A unital Jordan superalgebra entry with its associated superpair, TKK
/// and default Bessel operator (λ₀ placed opposite the first structure
/// slot, which the construction always takes to be D_{e,e}).
pub struct CatalogJordan {
    key: String,
    algebra: UnitalJordanSuperalgebra,
}

impl CatalogJordan {
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn algebra(&self) -> &UnitalJordanSuperalgebra {
        &self.algebra
    }

    /// The double of the algebra as a Jordan superpair.
    pub fn pair(&self) -> Result<JordanSuperpair, CatalogError> {
        Ok(pair_from_unital(&self.algebra)?)
    }

    /// The Bessel operator for the default character λ(D_{e,e}) = −λ₀.
    pub fn bessel(&self) -> Result<BesselOperator, CatalogError> {
        let pair = self.pair()?;
        let t = tkk(&pair)?;
        let params = self.algebra.params();
        let lam0 = ParamScalar::parameter(params, "lam0")?;
        let mut values = vec![ParamScalar::zero(params); t.str_dim()];
        values[0] = lam0.neg();
        Ok(bessel(&pair, &values)?)
    }
}

/// A validated catalogue object behind a key.
pub enum CatalogObject {
    Algebra(CatalogAlgebra),
    Jordan(CatalogJordan),
}

/// Keys accepted by the command-line tool; `d21a` is built through
/// [`build_d21alpha`] and the rest through [`build_standard`].
pub fn catalog_keys() -> &'static [&'static str] {
    &[
        "d21a",
        "sl2",
        "gl11",
        "heisenberg",
        "toy5",
        "jordan_rational",
        "spin_factor",
    ]
}

/// One-line structural description of a catalogue entry.
pub fn describe(key: &str) -> Result<String, CatalogError> {
    let text = match key {
        "d21a" => {
            "D(2,1;α): 17-dimensional (9|8), rank 3, short grading 𝔤₋ ⊕ 𝔤₀ ⊕ 𝔤₊ with \
             𝔤₀ = ℚh ⊕ [𝔤₀, 𝔤₀]; parameters α ∉ {0, −1} and λ"
        }
        "sl2" => "sl(2): basis (e, h, f), principal 3-grading, character λ on h",
        "gl11" => {
            "gl(1|1): basis (h1, h2 | e, f) with [e, f] = h1 + h2, grading by the e/f \
             weight, character λ on h1"
        }
        "heisenberg" => "Heisenberg: basis (x, y, z) with [x, y] = z central, character λ on z",
        "toy5" => {
            "toy5: sl(3) with its principal 5-grading (e12 and f12 in degrees ±2), \
             character λ on h1 and h2"
        }
        "jordan_rational" => "Jordan algebra ℚ: basis (x), x ∗ x = x, unit x",
        "spin_factor" => "spin factor ℚe ⊕ ℚv: v ∗ v = e, unit e",
        other => return Err(CatalogError::UnknownKey(other.to_string())),
    };
    Ok(text.to_string())
}

/// Builds a named standard entry; the D(2,1;α) family has its own builder.
pub fn build_standard(key: &str) -> Result<CatalogObject, CatalogError> {
    if let Some(j) = standard_jordan(key)? {
        return Ok(CatalogObject::Jordan(CatalogJordan {
            key: key.to_string(),
            algebra: j,
        }));
    }
    let params = ParamSet::new(&["lam"]);
    let (basis, brackets, degrees, charged): (
        Vec<(&str, Parity)>,
        Vec<(usize, usize, &[(usize, &str)])>,
        Vec<i64>,
        Vec<usize>,
    ) = match key {
        "sl2" => (
            vec![("e", Parity::Even), ("h", Parity::Even), ("f", Parity::Even)],
            vec![
                (0, 2, &[(1, "1")][..]),
                (1, 0, &[(0, "2")][..]),
                (1, 2, &[(2, "-2")][..]),
            ],
            vec![1, 0, -1],
            vec![1],
        ),
        "gl11" => (
            vec![
                ("h1", Parity::Even),
                ("h2", Parity::Even),
                ("e", Parity::Odd),
                ("f", Parity::Odd),
            ],
            vec![
                (0, 2, &[(2, "1")][..]),
                (0, 3, &[(3, "-1")][..]),
                (1, 2, &[(2, "-1")][..]),
                (1, 3, &[(3, "1")][..]),
                (2, 3, &[(0, "1"), (1, "1")][..]),
            ],
            vec![0, 0, 1, -1],
            vec![0],
        ),
        "heisenberg" => (
            vec![("x", Parity::Even), ("y", Parity::Even), ("z", Parity::Even)],
            vec![(0, 1, &[(2, "1")][..])],
            vec![1, -1, 0],
            vec![2],
        ),
        "toy5" => (
            vec![
                ("h1", Parity::Even),
                ("h2", Parity::Even),
                ("e1", Parity::Even),
                ("e2", Parity::Even),
                ("e12", Parity::Even),
                ("f1", Parity::Even),
                ("f2", Parity::Even),
                ("f12", Parity::Even),
            ],
            vec![
                (0, 2, &[(2, "2")][..]),
                (0, 3, &[(3, "-1")][..]),
                (0, 4, &[(4, "1")][..]),
                (0, 5, &[(5, "-2")][..]),
                (0, 6, &[(6, "1")][..]),
                (0, 7, &[(7, "-1")][..]),
                (1, 2, &[(2, "-1")][..]),
                (1, 3, &[(3, "2")][..]),
                (1, 4, &[(4, "1")][..]),
                (1, 5, &[(5, "1")][..]),
                (1, 6, &[(6, "-2")][..]),
                (1, 7, &[(7, "-1")][..]),
                (2, 3, &[(4, "1")][..]),
                (2, 5, &[(0, "1")][..]),
                (2, 7, &[(6, "-1")][..]),
                (3, 6, &[(1, "1")][..]),
                (3, 7, &[(5, "1")][..]),
                (4, 5, &[(3, "-1")][..]),
                (4, 6, &[(2, "1")][..]),
                (4, 7, &[(0, "1"), (1, "1")][..]),
                (5, 6, &[(7, "-1")][..]),
            ],
            vec![0, 0, 1, 1, 2, -1, -1, -2],
            vec![0, 1],
        ),
        other => return Err(CatalogError::UnknownKey(other.to_string())),
    };
    let algebra = Arc::new(LieSuperalgebra::from_brackets(&params, &basis, &brackets)?);
    let report = algebra.validate();
    if !report.is_ok() {
        return Err(CatalogError::ConsistencyFailure(format!(
            "`{key}` fails validation: {}",
            report.first_violation().unwrap_or("unknown violation")
        )));
    }
    let grading = ZGrading::new(&algebra, degrees)?;
    Ok(CatalogObject::Algebra(CatalogAlgebra {
        key: key.to_string(),
        algebra,
        grading,
        charged,
    }))
}

fn standard_jordan(key: &str) -> Result<Option<UnitalJordanSuperalgebra>, CatalogError> {
    let params = ParamSet::new(&["lam0"]);
    let c = |entries: &[i64]| -> GVec {
        entries
            .iter()
            .map(|&n| ParamScalar::from_int(&params, n))
            .collect()
    };
    let algebra = match key {
        "jordan_rational" => {
            let sig = Signature::new(&["x"], &[]);
            UnitalJordanSuperalgebra::new(&params, sig, vec![vec![c(&[1])]], 0)?
        }
        "spin_factor" => {
            let sig = Signature::new(&["e", "v"], &[]);
            let product = vec![
                vec![c(&[1, 0]), c(&[0, 1])],
                vec![c(&[0, 1]), c(&[1, 0])],
            ];
            UnitalJordanSuperalgebra::new(&params, sig, product, 0)?
        }
        _ => return Ok(None),
    };
    Ok(Some(algebra))
}

/// Bessel character values `{"values": {"0": "-lam0", …}}` over the str
/// basis of the TKK algebra; unset slots are zero.
pub fn character_values_from_json(
    params: &ParamSet,
    value: &Value,
    str_dim: usize,
) -> Result<Vec<ParamScalar>, CatalogError> {
    let mut values = vec![ParamScalar::zero(params); str_dim];
    let map = value
        .get("values")
        .and_then(Value::as_object)
        .ok_or_else(|| {
            CatalogError::InvalidParameter("character file needs a `values` object".to_string())
        })?;
    for (key, entry) in map {
        let k: usize = key.parse().map_err(|_| {
            CatalogError::InvalidParameter(format!("bad structure-slot index `{key}`"))
        })?;
        if k >= str_dim {
            return Err(CatalogError::InvalidParameter(format!(
                "structure-slot index {k} out of range (str dimension {str_dim})"
            )));
        }
        let text = entry.as_str().ok_or_else(|| {
            CatalogError::InvalidParameter(format!("value at slot {k} must be a string"))
        })?;
        values[k] = ParamScalar::parse(params, text)?;
    }
    Ok(values)
}

// ---------------------------------------------------------------------------
// Emitters
// ---------------------------------------------------------------------------

/// Output format of [`emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Latex,
    Text,
}

/// Anything the catalogue knows how to print.
pub enum Emittable<'a> {
    Realisation(&'a Realisation),
    Operator(&'a WeylElement),
    Algebra(&'a LieSuperalgebra, Option<&'a ZGrading>),
    Jordan(&'a UnitalJordanSuperalgebra),
    Pair(&'a JordanSuperpair),
    Bessel(&'a BesselOperator),
}

/// Deterministic document for the object; JSON output round-trips through
/// the matching `from_json` readers bit-exactly.
pub fn emit(obj: &Emittable<'_>, format: Format) -> String {
    match (obj, format) {
        (Emittable::Realisation(r), Format::Json) => json!({
            "algebra": r.algebra().to_json(Some(r.grading())),
            "images": r.to_json()["images"],
        })
        .to_string(),
        (Emittable::Realisation(r), Format::Latex) => r.to_latex(),
        (Emittable::Realisation(r), Format::Text) => {
            let g = r.algebra();
            let mut out = String::new();
            for b in 0..g.dim() {
                out.push_str(&format!("pi({}) = {}\n", g.name(b), r.image(b)));
            }
            out
        }
        (Emittable::Operator(w), Format::Json) => w.to_json().to_string(),
        (Emittable::Operator(w), Format::Latex) => w.to_latex(),
        (Emittable::Operator(w), Format::Text) => format!("{w}\n"),
        (Emittable::Algebra(g, grading), Format::Json) => g.to_json(*grading).to_string(),
        (Emittable::Algebra(g, grading), Format::Latex) => {
            let mut out = String::from("\\begin{align*}\n");
            for i in 0..g.dim() {
                for j in i..g.dim() {
                    let v = g.bracket_basis(i, j);
                    if v.iter().all(ParamScalar::is_zero) {
                        continue;
                    }
                    out.push_str(&format!(
                        "[{}, {}] &= {}\\\\\n",
                        latex_symbol(g.name(i)),
                        latex_symbol(g.name(j)),
                        vector_to_latex(g, v)
                    ));
                }
            }
            out.push_str("\\end{align*}\n");
            let _ = grading;
            out
        }
        (Emittable::Algebra(g, grading), Format::Text) => {
            let mut out = String::new();
            for i in 0..g.dim() {
                let parity = if g.parity(i).is_odd() { "odd" } else { "even" };
                match grading {
                    Some(z) => out.push_str(&format!(
                        "{} ({parity}, degree {})\n",
                        g.name(i),
                        z.degree(i)
                    )),
                    None => out.push_str(&format!("{} ({parity})\n", g.name(i))),
                }
            }
            for i in 0..g.dim() {
                for j in i..g.dim() {
                    let v = g.bracket_basis(i, j);
                    if v.iter().any(|c| !c.is_zero()) {
                        out.push_str(&format!(
                            "[{}, {}] = {}\n",
                            g.name(i),
                            g.name(j),
                            g.vector_to_string(v)
                        ));
                    }
                }
            }
            out
        }
        (Emittable::Jordan(j), Format::Json) => j.to_json().to_string(),
        (Emittable::Jordan(j), Format::Latex) => {
            let sig = j.signature();
            let mut out = String::from("\\begin{align*}\n");
            for a in 0..j.dim() {
                for b in a..j.dim() {
                    out.push_str(&format!(
                        "{} \\ast {} &= {}\\\\\n",
                        latex_symbol(sig.name(a)),
                        latex_symbol(sig.name(b)),
                        coords_to_latex(sig, j.product_basis(a, b))
                    ));
                }
            }
            out.push_str("\\end{align*}\n");
            out
        }
        (Emittable::Jordan(j), Format::Text) => {
            let sig = j.signature();
            let mut out = format!("unit: {}\n", sig.name(j.unit()));
            for a in 0..j.dim() {
                for b in a..j.dim() {
                    out.push_str(&format!(
                        "{} * {} = {}\n",
                        sig.name(a),
                        sig.name(b),
                        coords_to_string(sig, j.product_basis(a, b))
                    ));
                }
            }
            out
        }
        (Emittable::Pair(p), Format::Json) => p.to_json().to_string(),
        (Emittable::Pair(p), Format::Latex) | (Emittable::Pair(p), Format::Text) => {
            let plus = p.vplus();
            let minus = p.vminus();
            let mut out = String::new();
            for a in 0..plus.dim() {
                for m in 0..minus.dim() {
                    for b in 0..plus.dim() {
                        let v = p.triple_plus_basis(a, m, b);
                        if v.iter().any(|c| !c.is_zero()) {
                            out.push_str(&format!(
                                "{{{}, {}, {}}}+ = {}\n",
                                plus.name(a),
                                minus.name(m),
                                plus.name(b),
                                coords_to_string(plus, v)
                            ));
                        }
                    }
                }
            }
            for m in 0..minus.dim() {
                for a in 0..plus.dim() {
                    for l in 0..minus.dim() {
                        let v = p.triple_minus_basis(m, a, l);
                        if v.iter().any(|c| !c.is_zero()) {
                            out.push_str(&format!(
                                "{{{}, {}, {}}}- = {}\n",
                                minus.name(m),
                                plus.name(a),
                                minus.name(l),
                                coords_to_string(minus, v)
                            ));
                        }
                    }
                }
            }
            out
        }
        (Emittable::Bessel(b), Format::Json) => {
            let sig = b.signature();
            let mut map = serde_json::Map::new();
            for (i, component) in b.components().iter().enumerate() {
                map.insert(sig.name(i).to_string(), component.to_json());
            }
            json!({ "components": Value::Object(map) }).to_string()
        }
        (Emittable::Bessel(b), Format::Latex) => {
            let sig = b.signature();
            let mut out = String::from("\\begin{align*}\n");
            for (i, component) in b.components().iter().enumerate() {
                out.push_str(&format!(
                    "\\mathcal{{B}}_{{{}}} &= {}\\\\\n",
                    latex_symbol(sig.name(i)),
                    component.to_latex()
                ));
            }
            out.push_str("\\end{align*}\n");
            out
        }
        (Emittable::Bessel(b), Format::Text) => {
            let sig = b.signature();
            let mut out = String::new();
            for (i, component) in b.components().iter().enumerate() {
                out.push_str(&format!("B_{} = {}\n", sig.name(i), component));
            }
            out
        }
    }
}

/// Σ c_k b_k as LaTeX, with scalar coefficients passed through
/// [`latex_scalar`].
fn vector_to_latex(g: &LieSuperalgebra, v: &[ParamScalar]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        if c.is_one() {
            out.push_str(&latex_symbol(g.name(k)));
        } else {
            out.push_str(&format!(
                "\\left({}\\right) {}",
                latex_scalar(&c.to_string()),
                latex_symbol(g.name(k))
            ));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn coords_to_latex(sig: &Arc<Signature>, v: &[ParamScalar]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        if c.is_one() {
            out.push_str(&latex_symbol(sig.name(k)));
        } else {
            out.push_str(&format!(
                "\\left({}\\right) {}",
                latex_scalar(&c.to_string()),
                latex_symbol(sig.name(k))
            ));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn coords_to_string(sig: &Arc<Signature>, v: &[ParamScalar]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        if c.is_one() {
            out.push_str(sig.name(k));
        } else {
            out.push_str(&format!("({})*{}", c, sig.name(k)));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realise::check_homomorphism;
    use crate::scalars::rat;
    use proptest::prelude::*;

    fn formal_lambda(params: &ParamSet) -> ParamScalar {
        ParamScalar::parameter(params, "lam").unwrap()
    }

    #[test]
    fn flagship_family_builds_and_validates() {
        let d = build_d21alpha().unwrap();
        let g = d.algebra();
        assert_eq!(g.dim(), 17);
        assert_eq!(g.even_count(), 9);
        assert_eq!(g.odd_count(), 8);
        assert!(d.grading().is_three_graded());
        let minus: Vec<&str> = d
            .grading()
            .minus_indices()
            .iter()
            .map(|&b| g.name(b))
            .collect();
        assert_eq!(minus, ["x", "y", "th", "et"]);
        assert_eq!(
            d.grading()
                .plus_indices()
                .iter()
                .map(|&b| g.name(b))
                .collect::<Vec<_>>(),
            ["X2d2", "X2d3", "Xppp", "Xmpp"]
        );
        // Structure constants live in ℚ(α).
        let lam_index = d.params().index_of("lam").unwrap();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                assert!(g.bracket_basis(i, j).iter().all(|c| c.is_free_of(lam_index)));
            }
        }
    }

    #[test]
    fn realisation_reproduces_the_operator_table() {
        let d = build_d21alpha().unwrap();
        let r = d.realisation(&formal_lambda(d.params())).unwrap();
        assert_eq!(r.signature(), d.signature());
        for b in 0..d.algebra().dim() {
            assert_eq!(
                r.image(b),
                &d.table()[b],
                "image of {}",
                d.algebra().name(b)
            );
        }
        let report = check_homomorphism(&r);
        assert!(report.is_ok(), "{:?}", report.failures().first());
    }

    #[test]
    fn normalisation_brackets_match() {
        for d in [
            build_d21alpha().unwrap(),
            build_d21alpha_at(&rat(-2, 1)).unwrap(),
        ] {
            let g = d.algebra();
            let idx = |n: &str| g.index_of(n).unwrap();
            let got = g.bracket_basis(idx("X2d2"), idx("y"));
            assert_eq!(got, &g.basis_vector(idx("Hd2")));
            let got = g.bracket_basis(idx("X2d3"), idx("x"));
            assert_eq!(got, &g.basis_vector(idx("Hd3")));
            let got = g.bracket_basis(idx("th"), idx("Xmpp"));
            let mut expected = g.zero_vector();
            let text = [("Hd1", "-(1 + alpha)/2"), ("Hd2", "-1/2"), ("Hd3", "-alpha/2")];
            for (name, c) in text {
                expected[idx(name)] = d
                    .alpha()
                    .as_rational()
                    .map(|a| {
                        ParamScalar::parse(d.params(), c)
                            .unwrap()
                            .substitute(&BTreeMap::from([("alpha".to_string(), a)]))
                            .unwrap()
                    })
                    .unwrap_or_else(|| ParamScalar::parse(d.params(), c).unwrap());
            }
            assert_eq!(got, &expected);
        }
    }

    #[test]
    fn cartan_pairing_on_the_highest_even_root() {
        let d = build_d21alpha().unwrap();
        let g = d.algebra();
        let idx = |n: &str| g.index_of(n).unwrap();
        // ⟨2δ₂, δ₂⟩ = 2, both abstractly and on the operators.
        let two = ParamScalar::from_int(d.params(), 2);
        let mut expected = g.zero_vector();
        expected[idx("X2d2")] = two.clone();
        assert_eq!(g.bracket_basis(idx("Hd2"), idx("X2d2")), &expected);
        let h = &d.table()[idx("Hd2")];
        let x = &d.table()[idx("X2d2")];
        assert_eq!(h.supercommutator(x), x.scale(&two));
    }

    #[test]
    fn alpha_specialisation_rules() {
        for a in [rat(1, 1), rat(-2, 1), rat(-1, 2), rat(1, 3)] {
            let d = build_d21alpha_at(&a).unwrap();
            assert!(d.algebra().validate().is_ok());
            assert_eq!(d.alpha().as_rational(), Some(a));
        }
        for a in [rat(0, 1), rat(-1, 1)] {
            assert!(matches!(
                build_d21alpha_at(&a),
                Err(CatalogError::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn standard_entries_validate() {
        for key in ["sl2", "gl11", "heisenberg", "toy5"] {
            let CatalogObject::Algebra(entry) = build_standard(key).unwrap() else {
                panic!("{key} should be an algebra entry");
            };
            assert_eq!(entry.key(), key);
            assert!(entry.algebra().validate().is_ok(), "{key}");
            let lam = formal_lambda(entry.algebra().params());
            let r = entry.realisation(&lam).unwrap();
            let report = check_homomorphism(&r);
            assert!(report.is_ok(), "{key}: {:?}", report.failures().first());
        }
        for key in ["jordan_rational", "spin_factor"] {
            let CatalogObject::Jordan(entry) = build_standard(key).unwrap() else {
                panic!("{key} should be a Jordan entry");
            };
            assert_eq!(entry.key(), key);
            entry.pair().unwrap();
        }
        assert_eq!(catalog_keys().len(), 7);
        for key in catalog_keys() {
            describe(key).unwrap();
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            build_standard("sl3"),
            Err(CatalogError::UnknownKey(_))
        ));
        assert!(matches!(describe("sl3"), Err(CatalogError::UnknownKey(_))));
    }

    #[test]
    fn emit_examples() {
        // The Cartan element H_{δ₁} renders as θ∂_θ − η∂_η.
        let d = build_d21alpha().unwrap();
        let hd1 = d.algebra().index_of("Hd1").unwrap();
        assert_eq!(
            emit(&Emittable::Operator(&d.table()[hd1]), Format::Latex),
            "\\theta \\partial_{\\theta} - \\eta \\partial_{\\eta}"
        );

        // sl(2) structure constants round-trip bit-exactly through JSON.
        let CatalogObject::Algebra(sl2) = build_standard("sl2").unwrap() else {
            unreachable!()
        };
        let doc = emit(
            &Emittable::Algebra(sl2.algebra(), Some(sl2.grading())),
            Format::Json,
        );
        let value: Value = serde_json::from_str(&doc).unwrap();
        let (parsed, grading) =
            LieSuperalgebra::from_json(sl2.algebra().params(), &value).unwrap();
        let doc2 = emit(
            &Emittable::Algebra(&parsed, grading.as_ref()),
            Format::Json,
        );
        assert_eq!(doc, doc2);

        // The default Bessel operator of J = ℚ in text form.
        let CatalogObject::Jordan(jq) = build_standard("jordan_rational").unwrap() else {
            unreachable!()
        };
        let b = jq.bessel().unwrap();
        assert_eq!(
            emit(&Emittable::Bessel(&b), Format::Text),
            "B_x = x*Dx^2 + lam0*Dx\n"
        );
        assert_eq!(b.components().len(), 1);
        assert!(b.supercommutation_failures().is_empty());
    }

    #[test]
    fn emitted_documents_are_deterministic() {
        let d = build_d21alpha().unwrap();
        let r = d.realisation(&formal_lambda(d.params())).unwrap();
        let json = emit(&Emittable::Realisation(&r), Format::Json);
        assert_eq!(json, emit(&Emittable::Realisation(&r), Format::Json));
        let value: Value = serde_json::from_str(&json).unwrap();
        let (parsed, grading) =
            LieSuperalgebra::from_json(d.params(), &value["algebra"]).unwrap();
        assert_eq!(
            emit(&Emittable::Algebra(&parsed, grading.as_ref()), Format::Json),
            emit(
                &Emittable::Algebra(d.algebra(), Some(d.grading())),
                Format::Json
            )
        );
        let text = emit(&Emittable::Realisation(&r), Format::Text);
        assert!(text.contains("pi(Hd2) = -2*y*Dy - th*Dth - et*Det + lam\n"));
        let latex = emit(&Emittable::Realisation(&r), Format::Latex);
        assert!(latex.starts_with("\\begin{align*}"));

        let CatalogObject::Jordan(spin) = build_standard("spin_factor").unwrap() else {
            unreachable!()
        };
        let pair = spin.pair().unwrap();
        let pair_doc = emit(&Emittable::Pair(&pair), Format::Json);
        let parsed = JordanSuperpair::from_json(&serde_json::from_str(&pair_doc).unwrap()).unwrap();
        assert_eq!(emit(&Emittable::Pair(&parsed), Format::Json), pair_doc);
        let jordan_doc = emit(&Emittable::Jordan(spin.algebra()), Format::Json);
        let parsed =
            UnitalJordanSuperalgebra::from_json(&serde_json::from_str(&jordan_doc).unwrap())
                .unwrap();
        assert_eq!(emit(&Emittable::Jordan(&parsed), Format::Json), jordan_doc);
        assert!(emit(&Emittable::Jordan(spin.algebra()), Format::Text)
            .contains("v * v = e\n"));
    }

    #[test]
    fn character_value_files_are_checked() {
        let params = ParamSet::new(&["lam0"]);
        let value: Value = serde_json::from_str(r#"{"values": {"0": "-lam0"}}"#).unwrap();
        let values = character_values_from_json(&params, &value, 1).unwrap();
        assert_eq!(values.len(), 1);
        assert_eq!(
            values[0],
            ParamScalar::parse(&params, "-lam0").unwrap()
        );
        let bad: Value = serde_json::from_str(r#"{"values": {"3": "1"}}"#).unwrap();
        assert!(matches!(
            character_values_from_json(&params, &bad, 1),
            Err(CatalogError::InvalidParameter(_))
        ));
        let bad: Value = serde_json::from_str(r#"{}"#).unwrap();
        assert!(character_values_from_json(&params, &bad, 1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]

        /// Any admissible rational α yields a valid member whose defining
        /// normalisations hold.
        #[test]
        fn random_alpha_specialisations_validate(num in -4i64..=4, den in 1i64..=3) {
            let a = rat(num, den);
            prop_assume!(!a.is_zero() && a != rat(-1, 1));
            let d = build_d21alpha_at(&a).unwrap();
            let g = d.algebra();
            let idx = |n: &str| g.index_of(n).unwrap();
            prop_assert_eq!(
                g.bracket_basis(idx("X2d2"), idx("y")),
                &g.basis_vector(idx("Hd2"))
            );
            prop_assert_eq!(
                g.bracket_basis(idx("X2d3"), idx("x")),
                &g.basis_vector(idx("Hd3"))
            );
        }
    }
}
