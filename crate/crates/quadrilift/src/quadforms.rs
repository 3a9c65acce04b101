//! Diagonal quadratic spaces over ℚ and their local–global theory.
//!
//! A space is a diagonal form `q = ⟨a₁, …, a_m⟩` with nonzero rational
//! entries. Arbitrary symmetric Gram matrices enter through [`diagonalize`].
//! The complete system of local invariants is (dimension, discriminant
//! square class, Hasse symbol `h_ν(q) = Π_{i<j} (a_i, a_j)_ν`) at finite
//! places, plus the signature over ℝ (where the triple alone stops being
//! faithful from dimension 4 on). Isotropy and representation questions are
//! answered by the dimension-stratified criteria and Witt's principle
//! `q represents β ⇔ q ⊥ ⟨−β⟩ isotropic`, globally via Hasse–Minkowski.

use crate::linalg::{self, Matrix};
use crate::localfields::{
    hilbert, is_local_square, local_square_class, square_class_reps, Place,
};
use crate::rational::{format_rational, parse_rational, square_free_part, Rational};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;

/// A diagonal quadratic space `⟨a₁, …, a_m⟩` with nonzero rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    diag: Vec<Rational>,
}

impl QuadraticSpace {
    /// Build from diagonal entries; every entry must be nonzero.
    pub fn new(diag: Vec<Rational>) -> Result<Self> {
        if diag.iter().any(|a| a.is_zero()) {
            return Err(Error::ZeroArgument("diagonal entries must be nonzero"));
        }
        Ok(QuadraticSpace { diag })
    }

    /// Convenience constructor from integers.
    pub fn from_ints(diag: &[i64]) -> Result<Self> {
        Self::new(diag.iter().map(|&n| Rational::from_integer(BigInt::from(n))).collect())
    }

    /// Dimension `m`.
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal entries.
    pub fn diag(&self) -> &[Rational] {
        &self.diag
    }

    /// Value `q(v) = Σ aᵢ vᵢ²`.
    pub fn value(&self, v: &[Rational]) -> Rational {
        debug_assert_eq!(v.len(), self.dim());
        self.diag.iter().zip(v).map(|(a, x)| a * x * x).sum()
    }

    /// Polarization `b_q(v, w) = ½(q(v+w) − q(v) − q(w)) = Σ aᵢ vᵢ wᵢ`.
    pub fn bilinear(&self, v: &[Rational], w: &[Rational]) -> Rational {
        debug_assert_eq!(v.len(), self.dim());
        debug_assert_eq!(w.len(), self.dim());
        self.diag.iter().zip(v.iter().zip(w)).map(|(a, (x, y))| a * x * y).sum()
    }

    /// Orthogonal sum `q ⊥ r` (concatenated diagonals).
    pub fn orth_sum(&self, other: &QuadraticSpace) -> QuadraticSpace {
        let mut diag = self.diag.clone();
        diag.extend(other.diag.iter().cloned());
        QuadraticSpace { diag }
    }

    /// The scaled space `⟨c·a₁, …, c·a_m⟩` for nonzero `c`.
    pub fn scale(&self, c: &Rational) -> Result<QuadraticSpace> {
        if c.is_zero() {
            return Err(Error::ZeroArgument("scaling factor must be nonzero"));
        }
        Ok(QuadraticSpace { diag: self.diag.iter().map(|a| a * c).collect() })
    }

    /// Gram matrix of the form in its own diagonal basis.
    pub fn gram_matrix(&self) -> Matrix {
        let m = self.dim();
        let mut g = linalg::identity(m);
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = self.diag[i].clone();
        }
        g
    }

    /// Real signature `(positive entries, negative entries)`.
    pub fn signature(&self) -> (usize, usize) {
        let pos = self.diag.iter().filter(|a| a.is_positive()).count();
        (pos, self.dim() - pos)
    }
}

impl fmt::Display for QuadraticSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.diag.iter().map(format_rational).collect();
        write!(f, "<{}>", entries.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    diag: Vec<String>,
}

impl Serialize for QuadraticSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceRepr { diag: self.diag.iter().map(format_rational).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticSpace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SpaceRepr::deserialize(d)?;
        let diag = repr
            .diag
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        QuadraticSpace::new(diag).map_err(serde::de::Error::custom)
    }
}

/// A symmetric matrix over ℚ (arbitrary, possibly degenerate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    rows: Matrix,
}

impl SymMatrix {
    /// Build from rows, checking symmetry.
    pub fn new(rows: Matrix) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("symmetric matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Invalid(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(SymMatrix { rows })
    }

    /// Build from a row-major flat list; the length must be a perfect square.
    pub fn from_flat(flat: &[Rational]) -> Result<Self> {
        let n = (flat.len() as f64).sqrt().round() as usize;
        if n * n != flat.len() {
            return Err(Error::Dimension(format!(
                "flat matrix of length {} is not square",
                flat.len()
            )));
        }
        let rows = (0..n).map(|i| flat[i * n..(i + 1) * n].to_vec()).collect();
        SymMatrix::new(rows)
    }

    /// Side length `n`.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Row access.
    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    /// Row-major flat entries as canonical strings.
    pub fn to_flat_strings(&self) -> Vec<String> {
        self.rows.iter().flat_map(|r| r.iter().map(format_rational)).collect()
    }

    /// Exact determinant.
    pub fn det(&self) -> Rational {
        linalg::det(&self.rows)
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_flat_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let flat = Vec::<String>::deserialize(d)?;
        let entries = flat
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SymMatrix::from_flat(&entries).map_err(serde::de::Error::custom)
    }
}

/// Gram matrix `(b_q(vᵢ, vⱼ))` of a tuple of vectors in `q`.
pub fn gram(q: &QuadraticSpace, vectors: &[Vec<Rational>]) -> Result<SymMatrix> {
    for v in vectors {
        if v.len() != q.dim() {
            return Err(Error::Dimension(format!(
                "vector length {} does not match dim {}",
                v.len(),
                q.dim()
            )));
        }
    }
    let n = vectors.len();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| q.bilinear(&vectors[i], &vectors[j])).collect())
        .collect();
    SymMatrix::new(rows)
}

/// Result of diagonalizing a symmetric matrix: the nondegenerate part as a
/// diagonal space, the full change of basis, and the rank.
///
/// `basis[i]` are coordinates of the i-th new basis vector; the first `rank`
/// of them have the nonzero values `space.diag()`, the rest span the radical.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub space: QuadraticSpace,
    pub basis: Vec<Vec<Rational>>,
    pub rank: usize,
}

/// Diagonalize a symmetric bilinear form by symmetric Gaussian elimination.
///
/// Works for degenerate inputs; the radical ends up in the trailing basis
/// vectors. When no remaining vector has a nonzero value but some pair still
/// pairs nontrivially, `vᵢ ← vᵢ + vⱼ` manufactures the nonzero value
/// `2·b(vᵢ,vⱼ)`.
pub fn diagonalize(beta: &SymMatrix) -> Diagonalization {
    let n = beta.dim();
    let g = beta.rows();
    let bil = |v: &[Rational], w: &[Rational]| -> Rational {
        let gv = linalg::mat_vec(g, w);
        v.iter().zip(&gv).map(|(x, y)| x * y).sum()
    };
    let mut basis = linalg::identity(n);
    let mut k = 0usize;
    while k < n {
        let mut pivot = (k..n).find(|&i| !bil(&basis[i], &basis[i]).is_zero());
        if pivot.is_none() {
            'pairs: for i in k..n {
                for j in i + 1..n {
                    if !bil(&basis[i], &basis[j]).is_zero() {
                        let bj = basis[j].clone();
                        for (x, y) in basis[i].iter_mut().zip(&bj) {
                            *x += y;
                        }
                        pivot = Some(i);
                        break 'pairs;
                    }
                }
            }
        }
        let Some(p) = pivot else { break };
        basis.swap(k, p);
        let qk = bil(&basis[k], &basis[k]);
        for j in k + 1..n {
            let c = bil(&basis[j], &basis[k]);
            if c.is_zero() {
                continue;
            }
            let f = c / &qk;
            let bk = basis[k].clone();
            for (x, y) in basis[j].iter_mut().zip(&bk) {
                *x -= &f * y;
            }
        }
        k += 1;
    }
    let diag: Vec<Rational> = (0..k).map(|i| bil(&basis[i], &basis[i])).collect();
    debug_assert!(diag.iter().all(|d| !d.is_zero()));
    Diagonalization { space: QuadraticSpace { diag }, basis, rank: k }
}

/// Discriminant of `q` as a square-free integer representative of
/// `Π aᵢ · (ℚ^×)²`. The empty form has discriminant 1.
pub fn discriminant(q: &QuadraticSpace) -> Rational {
    let prod: Rational = q.diag.iter().product();
    if q.dim() == 0 {
        return Rational::one();
    }
    Rational::from_integer(square_free_part(&prod))
}

/// Hasse symbol `h_ν(q) = Π_{i<j} (aᵢ, aⱼ)_ν` (empty product = +1 for
/// dimensions ≤ 1).
pub fn hasse(q: &QuadraticSpace, place: Place) -> Result<i8> {
    let mut h = 1i8;
    for i in 0..q.dim() {
        for j in i + 1..q.dim() {
            h *= hilbert(&q.diag[i], &q.diag[j], place)?;
        }
    }
    Ok(h)
}

/// Places where the invariants of `q` can be nontrivial: the real place, 2,
/// and every prime dividing a numerator or denominator of an entry.
pub fn bad_places(q: &QuadraticSpace) -> BTreeSet<Place> {
    let mut out: BTreeSet<Place> = BTreeSet::new();
    out.insert(Place::Real);
    out.insert(Place::Finite(2));
    for a in &q.diag {
        for n in [a.numer(), a.denom()] {
            for p in crate::arith::prime_support(n) {
                out.insert(Place::Finite(p));
            }
        }
    }
    out
}

/// Full invariant report for a space: dimension, discriminant class,
/// signature, and the Hasse symbol at every bad place.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub dim: usize,
    pub disc: String,
    pub signature: (usize, usize),
    pub hasse: std::collections::BTreeMap<Place, i8>,
}

/// Compute the invariant report of `q`.
pub fn invariants(q: &QuadraticSpace) -> Result<InvariantReport> {
    let mut map = std::collections::BTreeMap::new();
    for nu in bad_places(q) {
        map.insert(nu, hasse(q, nu)?);
    }
    Ok(InvariantReport {
        dim: q.dim(),
        disc: format_rational(&discriminant(q)),
        signature: q.signature(),
        hasse: map,
    })
}

/// Isometry over the completion at `ν`: equal dimension, discriminant class,
/// and Hasse symbol — plus equal signature over ℝ, where the triple alone is
/// not faithful from dimension 4 on (⟨1,1,1,1⟩ and ⟨−1,−1,−1,−1⟩ share it).
pub fn is_isometric_local(q1: &QuadraticSpace, q2: &QuadraticSpace, place: Place) -> Result<bool> {
    if q1.dim() != q2.dim() {
        return Ok(false);
    }
    if q1.dim() == 0 {
        return Ok(true);
    }
    if place == Place::Real {
        return Ok(q1.signature() == q2.signature());
    }
    let d1 = local_square_class(&discriminant(q1), place)?;
    let d2 = local_square_class(&discriminant(q2), place)?;
    Ok(d1 == d2 && hasse(q1, place)? == hasse(q2, place)?)
}

/// Isometry over ℚ: local isometry at every bad place of either form
/// (including ℝ), which is the Hasse–Minkowski classification.
pub fn is_isometric_global(q1: &QuadraticSpace, q2: &QuadraticSpace) -> Result<bool> {
    let mut places = bad_places(q1);
    places.extend(bad_places(q2));
    for nu in places {
        if !is_isometric_local(q1, q2, nu)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Local isotropy (a nonzero vector with `q(v) = 0` over the completion),
/// by the dimension-stratified invariant criteria:
/// dim 1 never; dim 2 iff `−disc` is a local square; dim 3 iff
/// `h = (−1, −disc)_ν`; dim 4 iff `disc ≢ 1` or `h = (−1, −1)_ν`;
/// dim ≥ 5 always at finite places, and iff indefinite over ℝ.
pub fn is_isotropic_local(q: &QuadraticSpace, place: Place) -> Result<bool> {
    let m1 = -Rational::one();
    match q.dim() {
        0 | 1 => Ok(false),
        2 => is_local_square(&-discriminant(q), place),
        3 => Ok(hasse(q, place)? == hilbert(&m1, &-discriminant(q), place)?),
        4 => {
            let disc_square = is_local_square(&discriminant(q), place)?;
            Ok(!disc_square || hasse(q, place)? == hilbert(&m1, &m1, place)?)
        }
        _ => match place {
            Place::Real => {
                let (pos, neg) = q.signature();
                Ok(pos > 0 && neg > 0)
            }
            Place::Finite(_) => Ok(true),
        },
    }
}

/// Global isotropy via Hasse–Minkowski: isotropic over ℚ iff isotropic at
/// every bad place (the real place included).
pub fn is_isotropic_global(q: &QuadraticSpace) -> Result<bool> {
    for nu in bad_places(q) {
        if !is_isotropic_local(q, nu)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Global anisotropy: no nonzero rational vector with `q(v) = 0`. Decided by
/// Hasse–Minkowski uniformly in the dimension (a definite five-variable form
/// like ⟨1,1,1,1,1⟩ is anisotropic: the real place already refuses).
pub fn is_anisotropic_global(q: &QuadraticSpace) -> Result<bool> {
    Ok(!is_isotropic_global(q)?)
}

/// Local representation of a nonzero value: Witt's criterion
/// `q represents β ⇔ q ⊥ ⟨−β⟩ isotropic`.
pub fn represents_value_local(q: &QuadraticSpace, beta: &Rational, place: Place) -> Result<bool> {
    if beta.is_zero() {
        return Err(Error::ZeroArgument("represented value must be nonzero"));
    }
    let ext = q.orth_sum(&QuadraticSpace::new(vec![-beta.clone()])?);
    is_isotropic_local(&ext, place)
}

/// Global representation of a nonzero value (Hasse–Minkowski on `q ⊥ ⟨−β⟩`).
pub fn represents_value_global(q: &QuadraticSpace, beta: &Rational) -> Result<bool> {
    if beta.is_zero() {
        return Err(Error::ZeroArgument("represented value must be nonzero"));
    }
    let ext = q.orth_sum(&QuadraticSpace::new(vec![-beta.clone()])?);
    is_isotropic_global(&ext)
}

/// Whether the invariant pair (discriminant class `disc`, Hasse symbol `h`)
/// is realized by some form of dimension `dim` over the completion at a
/// finite place. Over ℝ use signatures directly.
fn finite_realizable(dim: usize, disc: &Rational, h: i8, place: Place) -> Result<bool> {
    debug_assert!(place != Place::Real);
    Ok(match dim {
        0 => is_local_square(disc, place)? && h == 1,
        1 => h == 1,
        2 => !(is_local_square(&-disc.clone(), place)? && h == -1),
        _ => true,
    })
}

/// Construct a diagonal form over the completion at `ν` with the prescribed
/// dimension, discriminant class, and Hasse symbol. Returns `None` when the
/// data is not realizable (dimension ≤ 2 exceptions; signature constraints
/// over ℝ).
pub fn form_from_invariants(
    dim: usize,
    disc: &Rational,
    h: i8,
    place: Place,
) -> Result<Option<QuadraticSpace>> {
    if disc.is_zero() {
        return Err(Error::ZeroArgument("discriminant must be nonzero"));
    }
    if place == Place::Real {
        // Pick the signature: (−1)^neg matches the sign of disc and the
        // Hasse symbol is (−1)^{neg(neg−1)/2}.
        for neg in 0..=dim {
            let sign_ok = (neg % 2 == 1) == disc.is_negative();
            let h_ok = (if (neg * neg.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 }) == h;
            if sign_ok && h_ok {
                let mut diag = vec![Rational::one(); dim - neg];
                diag.extend(std::iter::repeat(-Rational::one()).take(neg));
                return Ok(Some(QuadraticSpace { diag }));
            }
        }
        return Ok(None);
    }
    if !finite_realizable(dim, disc, h, place)? {
        return Ok(None);
    }
    match dim {
        0 => Ok(Some(QuadraticSpace { diag: vec![] })),
        1 => Ok(Some(QuadraticSpace {
            diag: vec![local_square_class(disc, place)?.canonical_rep()],
        })),
        2 => {
            for c1 in square_class_reps(place) {
                for c2 in square_class_reps(place) {
                    let same_disc =
                        local_square_class(&(&c1 * &c2), place)? == local_square_class(disc, place)?;
                    if same_disc && hilbert(&c1, &c2, place)? == h {
                        return Ok(Some(QuadraticSpace { diag: vec![c1, c2] }));
                    }
                }
            }
            Ok(None)
        }
        _ => {
            for c1 in square_class_reps(place) {
                let rest_disc = disc * &c1; // same class as disc/c1
                let rest_h = h * hilbert(&c1, &rest_disc, place)?;
                if let Some(rest) = form_from_invariants(dim - 1, &rest_disc, rest_h, place)? {
                    let mut diag = vec![c1];
                    diag.extend(rest.diag);
                    return Ok(Some(QuadraticSpace { diag }));
                }
            }
            Ok(None)
        }
    }
}

/// Representatives of all isometry classes of nondegenerate `dim`-dimensional
/// forms over the completion at `ν`: one per signature over ℝ, one per
/// realizable (discriminant class, Hasse symbol) pair at finite places.
pub fn local_isometry_classes(dim: usize, place: Place) -> Result<Vec<QuadraticSpace>> {
    let mut out = Vec::new();
    match place {
        Place::Real => {
            for neg in 0..=dim {
                let mut diag = vec![Rational::one(); dim - neg];
                diag.extend(std::iter::repeat(-Rational::one()).take(neg));
                out.push(QuadraticSpace { diag });
            }
        }
        Place::Finite(_) => {
            for d in square_class_reps(place) {
                for h in [1i8, -1] {
                    if let Some(f) = form_from_invariants(dim, &d, h, place)? {
                        out.push(f);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Canonical label of the local isometry class of `q` at `ν`: the signature
/// over ℝ, the (discriminant class, Hasse symbol) pair at finite places.
pub fn local_class_label(q: &QuadraticSpace, place: Place) -> Result<String> {
    match place {
        Place::Real => {
            let (p, s) = q.signature();
            Ok(format!("sig({p},{s})"))
        }
        Place::Finite(_) => {
            let d = local_square_class(&discriminant(q), place)?;
            let h = hasse(q, place)?;
            Ok(format!("d={};h={:+}", d.label(), h))
        }
    }
}

/// Whether `q` represents the quadratic module given by a symmetric Gram
/// matrix `β` over the completion at `ν`, i.e. whether vectors
/// `v₁,…,v_n` in `q ⊗ ℚ_ν` exist with `Gram(vᵢ) = β`.
///
/// Errors when `β` is degenerate or when `n > m`. Decided by Witt
/// cancellation: `q` represents `β` iff `q ≅ β ⊥ r` for some form `r` of
/// dimension `m − n`, which reduces to a finite scan over the invariants of
/// the complement (signatures over ℝ).
pub fn represents_gram_local(
    q: &QuadraticSpace,
    beta: &SymMatrix,
    place: Place,
) -> Result<bool> {
    let d = diagonalize(beta);
    if d.rank != beta.dim() {
        return Err(Error::Degenerate("represented Gram matrix must be nondegenerate".into()));
    }
    let (m, n) = (q.dim(), beta.dim());
    if n > m {
        return Err(Error::Dimension(format!(
            "cannot represent a {n}-dimensional module in dimension {m}"
        )));
    }
    let b = &d.space;
    if n == m {
        return is_isometric_local(q, b, place);
    }
    let k = m - n;
    if place == Place::Real {
        let (pq, sq) = q.signature();
        let (pb, sb) = b.signature();
        return Ok(pb <= pq && sb <= sq);
    }
    // Complement invariants are forced up to the Hasse sign table:
    // disc r = disc q · disc β, h(r) = h(q)·h(β)·(disc β, disc r)_ν.
    let disc_q = discriminant(q);
    let disc_b = discriminant(b);
    let disc_r = &disc_q * &disc_b;
    let h_r = hasse(q, place)? * hasse(b, place)? * hilbert(&disc_b, &disc_r, place)?;
    match form_from_invariants(k, &disc_r, h_r, place)? {
        None => Ok(false),
        Some(r) => {
            let rebuilt = b.orth_sum(&r);
            // At a finite place matching invariants already force isometry;
            // the explicit check keeps the construction honest.
            is_isometric_local(q, &rebuilt, place)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn space(diag: &[i64]) -> QuadraticSpace {
        QuadraticSpace::from_ints(diag).unwrap()
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| rat(n)).collect()
    }

    #[test]
    fn gram_examples() {
        let q = space(&[1, 1, 1]);
        let g1 = gram(&q, &[rv(&[1, 0, 0])]).unwrap();
        assert_eq!(g1.rows(), &vec![vec![rat(1)]]);
        let g2 = gram(&q, &[rv(&[1, 1, 0]), rv(&[1, -1, 0])]).unwrap();
        assert_eq!(
            g2.rows(),
            &vec![vec![rat(2), rat(0)], vec![rat(0), rat(2)]]
        );
        let q23 = space(&[2, 3]);
        let g0 = gram(&q23, &[rv(&[0, 0])]).unwrap();
        assert_eq!(g0.rows(), &vec![vec![rat(0)]]);
        assert!(gram(&q, &[rv(&[1, 0])]).is_err());
    }

    #[test]
    fn diagonalize_identity_and_hyperbolic() {
        let id = SymMatrix::new(linalg::identity(2)).unwrap();
        let d = diagonalize(&id);
        assert_eq!(d.rank, 2);
        assert_eq!(d.space, space(&[1, 1]));

        let hyp = SymMatrix::new(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]).unwrap();
        let d = diagonalize(&hyp);
        assert_eq!(d.rank, 2);
        // Same class as <1,−1>: discriminant class −1 and isotropic.
        assert_eq!(discriminant(&d.space), rat(-1));
        for nu in [Place::Real, Place::Finite(2), Place::Finite(3)] {
            assert!(is_isometric_local(&d.space, &space(&[1, -1]), nu).unwrap());
        }
        // The produced basis really evaluates to the claimed diagonal.
        let amb = QuadraticSpace::new(vec![rat(1); 2]).unwrap();
        let _ = amb; // basis check below goes through the raw bilinear form
        let g = hyp.rows();
        for (i, bi) in d.basis.iter().enumerate() {
            for (j, bj) in d.basis.iter().enumerate() {
                let gv = linalg::mat_vec(g, bj);
                let val: Rational = bi.iter().zip(&gv).map(|(x, y)| x * y).sum();
                if i == j && i < d.rank {
                    assert_eq!(&val, &d.space.diag()[i]);
                } else if i != j {
                    assert!(val.is_zero());
                }
            }
        }
    }

    #[test]
    fn diagonalize_zero_matrix() {
        let z = SymMatrix::new(vec![vec![rat(0), rat(0)], vec![rat(0), rat(0)]]).unwrap();
        let d = diagonalize(&z);
        assert_eq!(d.rank, 0);
        assert_eq!(d.space.dim(), 0);
    }

    #[test]
    fn diagonalize_degenerate_rank_one() {
        // Rank-1 Gram of the single vector (1,1) in <1,-1>... that is zero;
        // use (1,2) in <1,1>: value 5, and a second dependent vector.
        let g = SymMatrix::new(vec![vec![rat(5), rat(10)], vec![rat(10), rat(20)]]).unwrap();
        let d = diagonalize(&g);
        assert_eq!(d.rank, 1);
        assert_eq!(d.space.diag(), &[rat(5)]);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&space(&[1, 1, 1])), rat(1));
        assert_eq!(discriminant(&space(&[2, 3])), rat(6));
        let q = QuadraticSpace::new(vec![rat(8), ratio(1, 2)]).unwrap();
        assert_eq!(discriminant(&q), rat(1));
    }

    #[test]
    fn hasse_examples() {
        for nu in [Place::Real, Place::Finite(2), Place::Finite(5)] {
            assert_eq!(hasse(&space(&[1, 1, 1]), nu).unwrap(), 1);
        }
        assert_eq!(hasse(&space(&[-1, -1]), Place::Real).unwrap(), -1);
        assert_eq!(hasse(&space(&[2, 5]), Place::Finite(5)).unwrap(), -1);
    }

    #[test]
    fn invariant_report_shape() {
        let rep = invariants(&space(&[1, 1, 1])).unwrap();
        assert_eq!(rep.dim, 3);
        assert_eq!(rep.disc, "1");
        assert_eq!(rep.signature, (3, 0));
        let places: Vec<Place> = rep.hasse.keys().copied().collect();
        assert_eq!(places, vec![Place::Real, Place::Finite(2)]);
        assert!(rep.hasse.values().all(|&h| h == 1));
    }

    #[test]
    fn isometry_examples() {
        assert!(is_isometric_local(&space(&[1, 1]), &space(&[2, 2]), Place::Finite(5)).unwrap());
        assert!(!is_isometric_local(&space(&[1]), &space(&[1, 1]), Place::Finite(5)).unwrap());
        // The invariant triple is blind at ℝ in dimension 4; signature is not.
        let plus = space(&[1, 1, 1, 1]);
        let minus = space(&[-1, -1, -1, -1]);
        assert_eq!(discriminant(&plus), discriminant(&minus));
        assert_eq!(
            hasse(&plus, Place::Real).unwrap(),
            hasse(&minus, Place::Real).unwrap()
        );
        assert!(!is_isometric_local(&plus, &minus, Place::Real).unwrap());
        assert!(is_isometric_global(&space(&[1, -1]), &space(&[2, -2])).unwrap());
        assert!(!is_isometric_global(&space(&[1, 1]), &space(&[1, -1])).unwrap());
    }

    #[test]
    fn isotropy_examples() {
        assert!(is_isotropic_local(&space(&[1, 1, 1, 1, 1]), Place::Finite(7)).unwrap());
        assert!(!is_isotropic_local(&space(&[1, 1]), Place::Real).unwrap());
        for nu in [Place::Real, Place::Finite(2), Place::Finite(3)] {
            assert!(is_isotropic_local(&space(&[1, -1]), nu).unwrap());
        }
        // ⟨1,1⟩ is isotropic over ℚ₅ (−1 is a square mod 5)…
        assert!(is_isotropic_local(&space(&[1, 1]), Place::Finite(5)).unwrap());
        // …but not over ℚ₃.
        assert!(!is_isotropic_local(&space(&[1, 1]), Place::Finite(3)).unwrap());
    }

    #[test]
    fn global_anisotropy_examples() {
        assert!(is_anisotropic_global(&space(&[1, 1, 1])).unwrap());
        assert!(!is_anisotropic_global(&space(&[1, -1])).unwrap());
        // Definite in five variables: the real place refuses a zero.
        assert!(is_anisotropic_global(&space(&[1, 1, 1, 1, 1])).unwrap());
        // Indefinite in five variables: isotropic everywhere.
        assert!(!is_anisotropic_global(&space(&[1, 1, 1, 1, -1])).unwrap());
    }

    #[test]
    fn represents_value_examples() {
        assert!(represents_value_global(&space(&[1]), &rat(4)).unwrap());
        assert!(!represents_value_global(&space(&[1]), &rat(2)).unwrap());
        assert!(represents_value_local(&space(&[1, 1, 1]), &rat(2), Place::Finite(5)).unwrap());
        assert!(!represents_value_local(&space(&[1]), &rat(-1), Place::Real).unwrap());
        assert!(represents_value_local(&space(&[1]), &rat(-1), Place::Finite(5)).unwrap());
        assert!(represents_value_global(&space(&[1, 1, 1]), &rat(6)).unwrap());
        // 7 lies in the square class of −1 at 2: three squares refuse it
        // (the 4^a(8b+7) obstruction), 2-adically and hence globally.
        assert!(!represents_value_local(&space(&[1, 1, 1]), &rat(7), Place::Finite(2)).unwrap());
        assert!(!represents_value_global(&space(&[1, 1, 1]), &rat(7)).unwrap());
        assert!(represents_value_local(&space(&[1, 1, 1]), &rat(7), Place::Finite(5)).unwrap());
        assert!(represents_value_local(&space(&[1, 1, 1]), &rat(0), Place::Real).is_err());
    }

    #[test]
    fn represents_gram_examples() {
        let q = space(&[1, 1, 1]);
        // n = m: the Gram matrix of q in a tilted basis is represented.
        let g = gram(&q, &[rv(&[1, 1, 0]), rv(&[1, -1, 0]), rv(&[0, 0, 2])]).unwrap();
        for nu in [Place::Real, Place::Finite(2), Place::Finite(3)] {
            assert!(represents_gram_local(&q, &g, nu).unwrap());
        }
        let b2 = SymMatrix::new(vec![vec![rat(2)]]).unwrap();
        assert!(represents_gram_local(&q, &b2, Place::Finite(5)).unwrap());
        // n > m errors.
        let b22 = SymMatrix::new(linalg::identity(2)).unwrap();
        assert!(represents_gram_local(&space(&[1]), &b22, Place::Finite(5)).is_err());
        // Degenerate β errors.
        let degen =
            SymMatrix::new(vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]]).unwrap();
        assert!(represents_gram_local(&q, &degen, Place::Finite(5)).is_err());
        // Signature obstruction at ℝ: <1,1,1> does not represent <−1>.
        let neg = SymMatrix::new(vec![vec![rat(-1)]]).unwrap();
        assert!(!represents_gram_local(&q, &neg, Place::Real).unwrap());
        assert!(represents_gram_local(&q, &neg, Place::Finite(5)).unwrap());
    }

    #[test]
    fn represents_gram_consistent_with_value_for_scalars() {
        let places = [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(5)];
        let spaces = [space(&[1, 1, 1]), space(&[1, -2, 5]), space(&[2, 3])];
        for q in &spaces {
            for b in [-6i64, -1, 1, 2, 3, 5, 10] {
                let m = SymMatrix::new(vec![vec![rat(b)]]).unwrap();
                for nu in places {
                    assert_eq!(
                        represents_gram_local(q, &m, nu).unwrap(),
                        represents_value_local(q, &rat(b), nu).unwrap(),
                        "q={q} b={b} nu={nu}"
                    );
                }
            }
        }
    }

    #[test]
    fn form_from_invariants_roundtrip() {
        let places = [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(5)];
        for nu in places {
            let reps: Vec<Rational> = match nu {
                Place::Real => vec![rat(1), rat(-1)],
                _ => crate::localfields::square_class_reps(nu),
            };
            for dim in 1..=4usize {
                for d in &reps {
                    for h in [1i8, -1] {
                        if let Some(f) = form_from_invariants(dim, d, h, nu).unwrap() {
                            assert_eq!(f.dim(), dim);
                            assert_eq!(
                                local_square_class(&discriminant(&f), nu).unwrap(),
                                local_square_class(d, nu).unwrap()
                            );
                            assert_eq!(hasse(&f, nu).unwrap(), h);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn form_from_invariants_unrealizable_cases() {
        // dim 1 with h = −1 is impossible (empty product).
        assert!(form_from_invariants(1, &rat(3), -1, Place::Finite(5)).unwrap().is_none());
        // Hyperbolic plane forces h = +1: disc ≡ −1, h = −1 unrealizable.
        assert!(form_from_invariants(2, &rat(-1), -1, Place::Finite(5)).unwrap().is_none());
        // Over ℝ, dim 2, disc > 0, h = −1 means signature (0,2): realizable.
        let f = form_from_invariants(2, &rat(1), -1, Place::Real).unwrap().unwrap();
        assert_eq!(f.signature(), (0, 2));
        // Over ℝ, dim 1 with positive disc and h = −1 is not realizable.
        assert!(form_from_invariants(1, &rat(1), -1, Place::Real).unwrap().is_none());
    }

    #[test]
    fn local_isometry_class_counts() {
        // ℝ: n+1 signatures; odd p: 7 classes in dim 2 (8 pairs minus the
        // impossible hyperbolic sign); 8 in dim 3.
        assert_eq!(local_isometry_classes(2, Place::Real).unwrap().len(), 3);
        assert_eq!(local_isometry_classes(1, Place::Finite(5)).unwrap().len(), 4);
        assert_eq!(local_isometry_classes(2, Place::Finite(5)).unwrap().len(), 7);
        assert_eq!(local_isometry_classes(3, Place::Finite(5)).unwrap().len(), 8);
        assert_eq!(local_isometry_classes(1, Place::Finite(2)).unwrap().len(), 8);
    }

    #[test]
    fn space_serde_roundtrip() {
        let q = QuadraticSpace::new(vec![rat(1), ratio(-3, 2)]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"diag":["1","-3/2"]}"#);
        let back: QuadraticSpace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<QuadraticSpace>(r#"{"diag":["0"]}"#).is_err());
        let m = SymMatrix::from_flat(&[rat(1), rat(0), rat(0), rat(1)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"["1","0","0","1"]"#);
        assert_eq!(serde_json::from_str::<SymMatrix>(&s).unwrap(), m);
    }
}
