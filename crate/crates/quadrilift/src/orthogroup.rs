//! Orthogonal groups of diagonal forms: exact orthogonal matrices,
//! reflections, Cartan–Dieudonné factorization, spinor norms, and the
//! quadratic characters `ξ_{λ,ε}` of `O(q)` in odd dimension.
//!
//! The factorization uses the moved-space greedy: for `g ≠ 1` the moved
//! space `M(g) = im(g − 1)` is orthogonal to `fix(g)`, so reflecting by an
//! anisotropic `g·v − v` fixes everything `g` fixed *and* the new vector
//! `v`, shrinking `M` by at least one dimension per reflection. When `M(g)`
//! is totally isotropic (possible only from dimension 4 up) one extra
//! basis-vector reflection breaks the degeneracy first. The resulting word
//! length never exceeds `dim q`, and its parity is `det g`.
//!
//! The spinor norm of `g` is the square class of `Π q(wᵢ)` over any
//! reflection word `g = τ_{w₁}⋯τ_{w_t}`; it is well defined and
//! multiplicative. For odd `m` every `h ∈ O(q)` is `det(h)·h₀` with
//! `h₀ ∈ SO(q)`, so a pair `(λ, ε)` of a square class and a sign defines
//! `ξ_{λ,ε}(h) = ε^{[det h = −1]} · (SN(h₀), λ)_ν`.

use crate::linalg::{self, Matrix};
use crate::localfields::{hilbert, square_class_reps, Place};
use crate::quadforms::{diagonalize, discriminant, gram, represents_value_local, QuadraticSpace};
use crate::rational::{format_rational, square_free_part, Rational};
use crate::{Error, Result};
use num::{One, Zero};

/// An element of `O(q)`: a matrix verified exactly to satisfy `ᵗM G M = G`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalElement {
    space: QuadraticSpace,
    mat: Matrix,
}

/// Parse a row-major flat list into a square matrix.
pub fn matrix_from_flat(flat: &[Rational]) -> Result<Matrix> {
    let n = (flat.len() as f64).sqrt().round() as usize;
    if n * n != flat.len() {
        return Err(Error::Dimension(format!(
            "flat matrix of length {} is not square",
            flat.len()
        )));
    }
    Ok((0..n).map(|i| flat[i * n..(i + 1) * n].to_vec()).collect())
}

impl OrthogonalElement {
    /// Check `ᵗM G M = G` and wrap the matrix.
    pub fn new(space: QuadraticSpace, mat: Matrix) -> Result<Self> {
        let m = space.dim();
        if mat.len() != m || mat.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!("matrix must be {m}×{m}")));
        }
        let g = space.gram_matrix();
        let check = linalg::mat_mul(&linalg::transpose(&mat), &linalg::mat_mul(&g, &mat));
        if check != g {
            return Err(Error::NotOrthogonal);
        }
        Ok(OrthogonalElement { space, mat })
    }

    /// The identity of `O(q)`.
    pub fn identity(space: QuadraticSpace) -> Self {
        let mat = linalg::identity(space.dim());
        OrthogonalElement { space, mat }
    }

    /// `−1 ∈ O(q)`.
    pub fn neg_identity(space: QuadraticSpace) -> Self {
        let mut mat = linalg::identity(space.dim());
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = -Rational::one();
        }
        OrthogonalElement { space, mat }
    }

    /// Underlying space.
    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    /// Matrix entries (column action: `h(v) = M·v`).
    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// Apply to a vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.mat, v)
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &OrthogonalElement) -> Result<OrthogonalElement> {
        if self.space != other.space {
            return Err(Error::Dimension("composition across different spaces".into()));
        }
        Ok(OrthogonalElement {
            space: self.space.clone(),
            mat: linalg::mat_mul(&self.mat, &other.mat),
        })
    }

    /// Exact determinant (always ±1).
    pub fn det(&self) -> Rational {
        let d = linalg::det(&self.mat);
        debug_assert!(d == Rational::one() || d == -Rational::one());
        d
    }

    /// The element `−h` (entrywise negation; again orthogonal).
    pub fn negate(&self) -> OrthogonalElement {
        OrthogonalElement {
            space: self.space.clone(),
            mat: self.mat.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect(),
        }
    }

    /// Identity test.
    pub fn is_identity(&self) -> bool {
        self.mat == linalg::identity(self.space.dim())
    }
}

/// The reflection `τ_v(w) = w − (2 b_q(v,w)/q(v))·v` for anisotropic `v`.
pub fn reflection(q: &QuadraticSpace, v: &[Rational]) -> Result<OrthogonalElement> {
    if v.len() != q.dim() {
        return Err(Error::Dimension("reflection vector has wrong length".into()));
    }
    let qv = q.value(v);
    if qv.is_zero() {
        return Err(Error::IsotropicVector(format!(
            "cannot reflect by a vector with q(v) = 0 (v = [{}])",
            v.iter().map(format_rational).collect::<Vec<_>>().join(",")
        )));
    }
    let m = q.dim();
    let mut mat = linalg::identity(m);
    for j in 0..m {
        let mut e = vec![Rational::zero(); m];
        e[j] = Rational::one();
        let f = Rational::from_integer(2.into()) * q.bilinear(v, &e) / &qv;
        for (i, row) in mat.iter_mut().enumerate() {
            row[j] -= &f * &v[i];
        }
    }
    // τ_v is orthogonal by construction; the constructor re-verifies.
    OrthogonalElement::new(q.clone(), mat)
}

/// A word of reflection vectors; evaluates to `τ_{w₁}·τ_{w₂}⋯τ_{w_t}`.
#[derive(Clone, Debug)]
pub struct ReflectionWord {
    space: QuadraticSpace,
    vectors: Vec<Vec<Rational>>,
}

impl ReflectionWord {
    /// Build from vectors, each of which must be anisotropic.
    pub fn new(space: QuadraticSpace, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        for v in &vectors {
            if space.value(v).is_zero() {
                return Err(Error::IsotropicVector("word contains an isotropic vector".into()));
            }
        }
        Ok(ReflectionWord { space, vectors })
    }

    /// Number of reflections.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Whether the word is empty (the identity).
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The reflection vectors.
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Multiply the word out.
    pub fn evaluate(&self) -> Result<OrthogonalElement> {
        let mut acc = OrthogonalElement::identity(self.space.clone());
        for v in &self.vectors {
            acc = acc.compose(&reflection(&self.space, v)?)?;
        }
        Ok(acc)
    }

    /// Square class of `Π q(wᵢ)` as a square-free integer (1 for the empty
    /// word).
    pub fn spinor_norm(&self) -> Rational {
        let prod: Rational = self.vectors.iter().map(|v| self.space.value(v)).product();
        if self.vectors.is_empty() {
            Rational::one()
        } else {
            Rational::from_integer(square_free_part(&prod))
        }
    }
}

/// Gram matrix `S` of the columns of `A = g − 1` (the moved space data).
fn moved_gram(q: &QuadraticSpace, mat: &Matrix) -> Matrix {
    let mut a = mat.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= Rational::one();
    }
    let g = q.gram_matrix();
    linalg::mat_mul(&linalg::transpose(&a), &linalg::mat_mul(&g, &a))
}

/// Cartan–Dieudonné factorization: a reflection word of length ≤ dim q whose
/// product is `h`, with parity equal to `det h`.
pub fn cartan_dieudonne(h: &OrthogonalElement) -> Result<ReflectionWord> {
    let q = h.space().clone();
    let m = q.dim();
    let mut g = h.clone();
    // Vectors are pushed as τ_w·g updates; since reflections are
    // involutions, τ_{w_t}⋯τ_{w_1}·h = 1 gives h = τ_{w_1}⋯τ_{w_t}.
    let mut word: Vec<Vec<Rational>> = Vec::new();
    let mut guard = 2 * m + 4;
    while !g.is_identity() {
        if guard == 0 {
            return Err(Error::Invalid("reflection factorization failed to terminate".into()));
        }
        guard -= 1;
        let s = moved_gram(&q, g.matrix());
        // Find v with q(gv − v) ≠ 0: a basis vector if some S_ii ≠ 0, else
        // e_i + e_j for an off-diagonal S_ij ≠ 0 (then q(Av) = 2S_ij).
        let mut v: Option<Vec<Rational>> = None;
        if let Some(i) = (0..m).find(|&i| !s[i][i].is_zero()) {
            let mut e = vec![Rational::zero(); m];
            e[i] = Rational::one();
            v = Some(e);
        } else {
            'pairs: for i in 0..m {
                for j in i + 1..m {
                    if !s[i][j].is_zero() {
                        let mut e = vec![Rational::zero(); m];
                        e[i] = Rational::one();
                        e[j] = Rational::one();
                        v = Some(e);
                        break 'pairs;
                    }
                }
            }
        }
        match v {
            Some(v) => {
                // w = gv − v is anisotropic; τ_w·g fixes fix(g) ⊕ ⟨v⟩.
                let gv = g.apply(&v);
                let w: Vec<Rational> = gv.iter().zip(&v).map(|(x, y)| x - y).collect();
                debug_assert!(!q.value(&w).is_zero());
                g = reflection(&q, &w)?.compose(&g)?;
                word.push(w);
            }
            None => {
                // Moved space totally isotropic (needs dim ≥ 4). Composing
                // with some basis reflection always makes it anisotropic
                // again; find one and retry.
                let mut fixed = false;
                for i in 0..m {
                    let mut e = vec![Rational::zero(); m];
                    e[i] = Rational::one();
                    let candidate = reflection(&q, &e)?.compose(&g)?;
                    let s2 = moved_gram(&q, candidate.matrix());
                    if s2.iter().any(|row| row.iter().any(|x| !x.is_zero())) {
                        g = candidate;
                        word.push(e);
                        fixed = true;
                        break;
                    }
                }
                if !fixed {
                    return Err(Error::Invalid(
                        "totally isotropic moved space could not be repaired".into(),
                    ));
                }
            }
        }
    }
    debug_assert!(word.len() <= m, "word length {} exceeds dimension {m}", word.len());
    ReflectionWord::new(q, word)
}

/// Spinor norm of `h ∈ O(q)`: square class of the product of `q(wᵢ)` over a
/// reflection factorization, as a square-free integer.
pub fn spinor_norm(h: &OrthogonalElement) -> Result<Rational> {
    Ok(cartan_dieudonne(h)?.spinor_norm())
}

/// The character `χ_V(a) = (a, (−1)^{m(m−1)/2}·disc q)_ν` attached to a
/// space of dimension `m`.
pub fn chi_v(q: &QuadraticSpace, a: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("character argument must be nonzero"));
    }
    let m = q.dim();
    let sign = if (m * m.saturating_sub(1) / 2) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    hilbert(a, &(sign * discriminant(q)), place)
}

/// Character data `(λ, ε)` for `O(q)` in odd dimension `m`:
/// `ξ(h) = ε^{[det h = −1]} · (SN(h₀), λ)_ν` where `h = det(h)·h₀` with
/// `h₀ ∈ SO(q)`. The dimension is carried so that `−1` has a definite image.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadCharacter {
    #[serde(with = "crate::rational::rational_string")]
    pub lambda: Rational,
    pub eps: i8,
    pub dim: usize,
}

impl QuadCharacter {
    /// Validate: nonzero λ, sign ε, odd dimension.
    pub fn new(lambda: Rational, eps: i8, dim: usize) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroArgument("character parameter λ must be nonzero"));
        }
        if eps != 1 && eps != -1 {
            return Err(Error::Invalid(format!("ε must be ±1, got {eps}")));
        }
        if dim % 2 == 0 {
            return Err(Error::Unsupported(format!(
                "characters ξ_(λ,ε) need odd dimension, got {dim}"
            )));
        }
        Ok(QuadCharacter { lambda, eps, dim })
    }
}

/// Evaluate `ξ_{λ,ε}(h)` at the place `ν`.
pub fn xi_eval(
    q: &QuadraticSpace,
    chi: &QuadCharacter,
    h: &OrthogonalElement,
    place: Place,
) -> Result<i8> {
    if q.dim() != chi.dim {
        return Err(Error::Dimension(format!(
            "character is for dimension {}, space has {}",
            chi.dim,
            q.dim()
        )));
    }
    let det = h.det();
    let (sign, h0) =
        if det == Rational::one() { (1i8, h.clone()) } else { (chi.eps, h.negate()) };
    debug_assert_eq!(h0.det(), Rational::one());
    let sn = spinor_norm(&h0)?;
    Ok(sign * hilbert(&sn, &chi.lambda, place)?)
}

/// The diagonalized restriction of `q` to the orthogonal complement of the
/// span of `vbar` (which must have nondegenerate Gram matrix).
pub fn orthogonal_complement_form(
    q: &QuadraticSpace,
    vbar: &[Vec<Rational>],
) -> Result<QuadraticSpace> {
    let b = gram(q, vbar)?;
    let d = diagonalize(&b);
    if d.rank != vbar.len() {
        return Err(Error::Degenerate(
            "spanning vectors must have nondegenerate Gram matrix".into(),
        ));
    }
    // W = {w : b(v_i, w) = 0 ∀i} is the kernel of the n×m matrix (v_i^T G).
    let g = q.gram_matrix();
    let rows: Matrix = vbar
        .iter()
        .map(|v| {
            (0..q.dim())
                .map(|j| (0..q.dim()).map(|i| &v[i] * &g[i][j]).sum())
                .collect()
        })
        .collect();
    let basis = linalg::kernel_basis(&rows);
    debug_assert_eq!(basis.len(), q.dim() - vbar.len());
    let bw = gram(q, &basis)?;
    let dw = diagonalize(&bw);
    debug_assert_eq!(dw.rank, basis.len(), "complement of a nondegenerate span is nondegenerate");
    Ok(dw.space)
}

/// Whether `ξ_{λ,ε}` restricts trivially to the pointwise stabilizer of the
/// tuple `vbar` in `O(q)`.
///
/// The stabilizer is `1 ⊕ O(W)` for `W = span(vbar)^⊥`; it is generated by
/// reflections `τ_u`, `u ∈ W` anisotropic, and
/// `ξ(τ_u) = ε·(q(u)·disc q, λ)_ν`. Triviality is therefore equivalent to
/// `(t·disc q, λ)_ν = ε` for every square class `t` represented by `q|_W`.
pub fn xi_trivial_on_stabilizer(
    q: &QuadraticSpace,
    chi: &QuadCharacter,
    vbar: &[Vec<Rational>],
    place: Place,
) -> Result<bool> {
    if q.dim() != chi.dim {
        return Err(Error::Dimension(format!(
            "character is for dimension {}, space has {}",
            chi.dim,
            q.dim()
        )));
    }
    if vbar.len() == q.dim() {
        return Ok(true); // trivial stabilizer
    }
    let w = orthogonal_complement_form(q, vbar)?;
    let d = discriminant(q);
    for t in square_class_reps(place) {
        if represents_value_local(&w, &t, place)? {
            let val = chi.eps * hilbert(&(&t * &d), &chi.lambda, place)?;
            if val != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
