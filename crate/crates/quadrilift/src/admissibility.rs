//! Admissibility of character quadruples.
//!
//! A *quadruple* bundles two odd-dimensional quadratic spaces `q`, `q′` with
//! quadratic characters `ξ = ξ_{λ,ε}`, `ξ′ = ξ_{λ,ε′}` of their orthogonal
//! groups and a symplectic rank `n`. Each side determines a local
//! representation of the rank-`n` metaplectic group (the `ξ`-coinvariants of
//! the Weil representation); for the two to be isomorphic, two finitely
//! checkable conditions must hold at the place:
//!
//! * **CC** (central characters): acting by `−I` in the Levi multiplies both
//!   sides by `χ_V((−1)^n)·ξ(−id_V)`, so these products must agree.
//! * **FC** (Fourier supports): the `ψ_β`-coefficient spaces of the two sides
//!   must vanish for exactly the same nondegenerate Gram classes `β`. A class
//!   survives on one side when `q` represents `β` *and* the character data
//!   matches the complement `W = β^⊥`: `λ ≡ −disc(q)·disc(β)` as local square
//!   classes and `ε = (t·disc q, λ)_ν` for every value class `t` of `W`. (The
//!   matching condition is the sharp one: a character that restricts
//!   trivially to the stabilizer merely because `λ` happens to be a local
//!   square still pairs trivially against the coefficient functional, so such
//!   degenerate matches do not create support.)
//!
//! The module also constructs the unique character data making a pair of
//! spaces admissible (dimension patterns `(n+2, n)`, `(n, n)` and the swap),
//! checks the dimension restrictions under which nontrivial characters can
//! lift at all, and assembles per-place reports into a global verdict over
//! the finite bad set of a quadruple.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::localfields::{hilbert, is_local_square, square_class_reps, Place};
use crate::orthogroup::{chi_v, xi_eval, OrthogonalElement, QuadCharacter};
use crate::quadforms::{
    discriminant, form_from_invariants, hasse, local_class_label, local_isometry_classes,
    represents_gram_local, represents_value_local, QuadraticSpace, SymMatrix,
};
use crate::rational::{square_free_part, Rational};
use crate::{Error, Result};

/// The data `α = (q, ξ, q′, ξ′; n)` whose two theta-type lifts are compared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadruple {
    pub q: QuadraticSpace,
    pub chi: QuadCharacter,
    pub qp: QuadraticSpace,
    pub chip: QuadCharacter,
    pub n: usize,
}

impl Quadruple {
    /// Validate: both dimensions odd and matching their characters, `n ≥ 1`.
    pub fn new(
        q: QuadraticSpace,
        chi: QuadCharacter,
        qp: QuadraticSpace,
        chip: QuadCharacter,
        n: usize,
    ) -> Result<Self> {
        if q.dim() % 2 == 0 || qp.dim() % 2 == 0 {
            return Err(Error::Dimension(format!(
                "quadruple spaces must have odd dimension, got {} and {}",
                q.dim(),
                qp.dim()
            )));
        }
        if chi.dim != q.dim() || chip.dim != qp.dim() {
            return Err(Error::Dimension(format!(
                "character dimensions ({}, {}) must match the spaces ({}, {})",
                chi.dim,
                chip.dim,
                q.dim(),
                qp.dim()
            )));
        }
        if n == 0 {
            return Err(Error::Invalid("symplectic rank n must be ≥ 1".into()));
        }
        Ok(Quadruple { q, chi, qp, chip, n })
    }
}

/// Outcome of the local admissibility checks at one place.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub place: Place,
    pub cc: bool,
    pub fc: bool,
    /// Surviving Fourier-support class labels for the two sides.
    pub represented_classes: (BTreeSet<String>, BTreeSet<String>),
    /// `cc ∧ fc`.
    pub verdict: bool,
}

/// Central character condition at `ν`: compare
/// `χ_V((−1)^n)·ξ(−id_V)` with `χ_{V′}((−1)^n)·ξ′(−id_{V′})`.
pub fn cc_holds(alpha: &Quadruple, place: Place) -> Result<bool> {
    let a = if alpha.n % 2 == 0 { Rational::one() } else { -Rational::one() };
    let neg = OrthogonalElement::neg_identity(alpha.q.clone());
    let negp = OrthogonalElement::neg_identity(alpha.qp.clone());
    let lhs = chi_v(&alpha.q, &a, place)? * xi_eval(&alpha.q, &alpha.chi, &neg, place)?;
    let rhs = chi_v(&alpha.qp, &a, place)? * xi_eval(&alpha.qp, &alpha.chip, &negp, place)?;
    Ok(lhs == rhs)
}

/// The diagonal form of the orthogonal complement of an embedded copy of
/// `beta` inside `q` at `ν`, or `None` when `q` does not represent `beta`.
/// Away from ℝ the complement is pinned by its forced invariants
/// `disc W = disc q·disc β`, `h(W) = h(q)·h(β)·(disc β, disc W)_ν`; over ℝ by
/// the signature difference.
fn complement_form(
    q: &QuadraticSpace,
    beta: &QuadraticSpace,
    place: Place,
) -> Result<Option<QuadraticSpace>> {
    let k = q.dim() - beta.dim();
    if place == Place::Real {
        let (pq, sq) = q.signature();
        let (pb, sb) = beta.signature();
        if pb > pq || sb > sq {
            return Ok(None);
        }
        let mut diag = vec![Rational::one(); pq - pb];
        diag.extend(std::iter::repeat(-Rational::one()).take(sq - sb));
        return Ok(Some(QuadraticSpace::new(diag)?));
    }
    let disc_q = discriminant(q);
    let disc_b = discriminant(beta);
    let disc_w = &disc_q * &disc_b;
    let h_w = hasse(q, place)? * hasse(beta, place)? * hilbert(&disc_b, &disc_w, place)?;
    form_from_invariants(k, &disc_w, h_w, place)
}

/// Whether the class of `beta` survives as Fourier support for `(q, ξ)` at
/// `ν`: `q` represents `beta`, and (when the complement `W` is nonzero)
/// `λ ≡ −disc(q)·disc(β)` with `ε = (t·disc q, λ)_ν` for every square class
/// `t` represented by `W`.
fn fourier_class_kept(
    q: &QuadraticSpace,
    chi: &QuadCharacter,
    beta: &QuadraticSpace,
    place: Place,
) -> Result<bool> {
    let b = SymMatrix::new(beta.gram_matrix())?;
    if !represents_gram_local(q, &b, place)? {
        return Ok(false);
    }
    if q.dim() == beta.dim() {
        // The stabilizer of a full basis is trivial; representing β (here:
        // being isometric to it) is the whole condition.
        return Ok(true);
    }
    let disc_q = discriminant(q);
    let matched = -(&chi.lambda * &disc_q * discriminant(beta));
    if !is_local_square(&matched, place)? {
        return Ok(false);
    }
    let w = complement_form(q, beta, place)?
        .expect("a represented class has a realizable complement");
    for t in square_class_reps(place) {
        if represents_value_local(&w, &t, place)?
            && hilbert(&(&t * &disc_q), &chi.lambda, place)? != chi.eps
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The nondegenerate local Gram classes quantified over by FC: square-class
/// representatives as 1-dimensional forms for `n = 1`, isometry-class
/// representatives for `n > 1`.
pub fn fc_class_list(n: usize, place: Place) -> Result<Vec<QuadraticSpace>> {
    if n == 1 {
        square_class_reps(place)
            .into_iter()
            .map(|t| QuadraticSpace::new(vec![t]))
            .collect()
    } else {
        local_isometry_classes(n, place)
    }
}

/// Surviving Fourier-support class labels of the two sides at `ν`.
pub fn fc_class_sets(
    alpha: &Quadruple,
    place: Place,
) -> Result<(BTreeSet<String>, BTreeSet<String>)> {
    if alpha.n > alpha.q.dim() || alpha.n > alpha.qp.dim() {
        return Err(Error::Dimension(format!(
            "FC needs n ≤ min(dim q, dim q′): n = {}, dims ({}, {})",
            alpha.n,
            alpha.q.dim(),
            alpha.qp.dim()
        )));
    }
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    for beta in fc_class_list(alpha.n, place)? {
        let label = local_class_label(&beta, place)?;
        if fourier_class_kept(&alpha.q, &alpha.chi, &beta, place)? {
            left.insert(label.clone());
        }
        if fourier_class_kept(&alpha.qp, &alpha.chip, &beta, place)? {
            right.insert(label);
        }
    }
    Ok((left, right))
}

/// Fourier coefficient condition at `ν`: the two sides' support sets over
/// all nondegenerate local Gram classes coincide.
pub fn fc_holds(alpha: &Quadruple, place: Place) -> Result<bool> {
    let (left, right) = fc_class_sets(alpha, place)?;
    Ok(left == right)
}

/// Run both conditions at `ν` and report.
pub fn locally_admissible(alpha: &Quadruple, place: Place) -> Result<AdmissibilityReport> {
    let cc = cc_holds(alpha, place)?;
    let represented_classes = fc_class_sets(alpha, place)?;
    let fc = represented_classes.0 == represented_classes.1;
    Ok(AdmissibilityReport { place, cc, fc, represented_classes, verdict: cc && fc })
}

/// Character data making `(q, q′)` admissible, as one global `λ` (square-free)
/// and the two signs at the requested place.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructedData {
    #[serde(with = "crate::rational::rational_string")]
    pub lambda: Rational,
    pub eps: i8,
    pub epsp: i8,
}

/// Construct `(λ, ε, ε′)` for the dimension patterns `(n+2, n)`, `(n, n)` and
/// `(n, n+2)` at `ν`:
///
/// * `dim q = dim q′ + 2`: `λ = −d(q)·d(q′)`, `ε = (−1, d(q′))_ν·h(q_ν)`,
///   `ε′ = (−1, −d(q))_ν·h(q_ν)` — the unique solution of CC ∧ FC.
/// * equal dimensions: requires `q ≅ q′` over the completion; then
///   `λ = −d(q)·d(q′)` with `ε = ε′ = (−1, d(q))_ν·h(q_ν)` keeps both support
///   sets equal and nonempty.
/// * `dim q + 2 = dim q′`: the mirror image of the first case.
///
/// `λ` is returned as a square-free integer, so the same value localizes
/// correctly at every place.
pub fn construct_characters(
    q: &QuadraticSpace,
    qp: &QuadraticSpace,
    place: Place,
) -> Result<ConstructedData> {
    let (m, mp) = (q.dim(), qp.dim());
    if m % 2 == 0 || mp % 2 == 0 {
        return Err(Error::Dimension(format!(
            "character construction needs odd dimensions, got ({m}, {mp})"
        )));
    }
    let lambda =
        Rational::from(square_free_part(&(-(discriminant(q) * discriminant(qp)))));
    if m == mp + 2 {
        let h_q = hasse(q, place)?;
        let eps = hilbert(&(-Rational::one()), &discriminant(qp), place)? * h_q;
        let epsp = hilbert(&(-Rational::one()), &(-discriminant(q)), place)? * h_q;
        Ok(ConstructedData { lambda, eps, epsp })
    } else if m == mp {
        if !crate::quadforms::is_isometric_local(q, qp, place)? {
            return Err(Error::Unsupported(
                "equal-dimension character construction needs locally isometric spaces".into(),
            ));
        }
        let eps = hilbert(&(-Rational::one()), &discriminant(q), place)? * hasse(q, place)?;
        Ok(ConstructedData { lambda, eps, epsp: eps })
    } else if m + 2 == mp {
        let mirror = construct_characters(qp, q, place)?;
        Ok(ConstructedData { lambda: mirror.lambda, eps: mirror.epsp, epsp: mirror.eps })
    } else {
        Err(Error::Unsupported(format!(
            "no character construction for dimension pattern ({m}, {mp})"
        )))
    }
}

/// Assemble the quadruple carrying the constructed data for `(q, q′)` at `ν`.
pub fn constructed_quadruple(
    q: &QuadraticSpace,
    qp: &QuadraticSpace,
    n: usize,
    place: Place,
) -> Result<Quadruple> {
    let data = construct_characters(q, qp, place)?;
    Quadruple::new(
        q.clone(),
        QuadCharacter::new(data.lambda.clone(), data.eps, q.dim())?,
        qp.clone(),
        QuadCharacter::new(data.lambda, data.epsp, qp.dim())?,
        n,
    )
}

/// Dimension restriction for a lift with character data: a nontrivial `χ`
/// admits nonzero lifts only when `m − n ≤ 2`.
pub fn dimension_compatible(q: &QuadraticSpace, n: usize, chi_nontrivial: bool) -> bool {
    !chi_nontrivial || q.dim() <= n + 2
}

/// The sharpened dimension set: nonzero global lifts force
/// `m ∈ {n, n + 2}`.
pub fn dimension_sharp(q: &QuadraticSpace, n: usize) -> bool {
    q.dim() == n || q.dim() == n + 2
}

/// Global character data: one square-free `λ` plus a finitely supported map
/// of `ε` signs (places absent from the map carry `+1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalCharacterData {
    #[serde(with = "crate::rational::rational_string")]
    pub lambda: Rational,
    #[serde(default)]
    pub eps: BTreeMap<Place, i8>,
    pub dim: usize,
}

impl GlobalCharacterData {
    /// The `ε` sign at `ν` (`+1` off the support of the map).
    pub fn eps_at(&self, place: Place) -> i8 {
        self.eps.get(&place).copied().unwrap_or(1)
    }

    /// The localized character at `ν`.
    pub fn localize(&self, place: Place) -> Result<QuadCharacter> {
        QuadCharacter::new(self.lambda.clone(), self.eps_at(place), self.dim)
    }

    /// Product of the stated signs; a genuine automorphic character needs
    /// this to be `+1` (product formula).
    pub fn sign_product(&self) -> i8 {
        self.eps.values().product()
    }

    fn validate(&self) -> Result<()> {
        if self.lambda.is_zero() {
            return Err(Error::ZeroArgument("global character parameter λ"));
        }
        if self.dim % 2 == 0 {
            return Err(Error::Dimension(format!(
                "global characters need odd dimension, got {}",
                self.dim
            )));
        }
        for (&place, &s) in &self.eps {
            if s != 1 && s != -1 {
                return Err(Error::Invalid(format!("ε at {place} must be ±1, got {s}")));
            }
        }
        Ok(())
    }
}

/// A quadruple with global character data, ready for the all-places check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalQuadruple {
    pub q: QuadraticSpace,
    pub chi: GlobalCharacterData,
    pub qp: QuadraticSpace,
    pub chip: GlobalCharacterData,
    pub n: usize,
}

impl GlobalQuadruple {
    /// Validate dimensions and sign data.
    pub fn validate(&self) -> Result<()> {
        self.chi.validate()?;
        self.chip.validate()?;
        if self.chi.dim != self.q.dim() || self.chip.dim != self.qp.dim() {
            return Err(Error::Dimension(format!(
                "global character dimensions ({}, {}) must match the spaces ({}, {})",
                self.chi.dim,
                self.chip.dim,
                self.q.dim(),
                self.qp.dim()
            )));
        }
        if self.q.dim() % 2 == 0 || self.qp.dim() % 2 == 0 {
            return Err(Error::Dimension("quadruple spaces must have odd dimension".into()));
        }
        if self.n == 0 {
            return Err(Error::Invalid("symplectic rank n must be ≥ 1".into()));
        }
        Ok(())
    }

    /// The localized quadruple at `ν`.
    pub fn localize(&self, place: Place) -> Result<Quadruple> {
        Quadruple::new(
            self.q.clone(),
            self.chi.localize(place)?,
            self.qp.clone(),
            self.chip.localize(place)?,
            self.n,
        )
    }

    /// The finite set of places where anything can ramify: ℝ and 2 always,
    /// every prime dividing a diagonal entry (numerator or denominator) of
    /// either space or `λ`, and every place carrying a stated `ε` sign.
    /// Outside this set all data is a unit, both signs are `+1`, and the
    /// localized quadruple is admissible automatically.
    pub fn bad_set(&self) -> BTreeSet<Place> {
        let mut out: BTreeSet<Place> = crate::quadforms::bad_places(&self.q);
        out.extend(crate::quadforms::bad_places(&self.qp));
        for lambda in [&self.chi.lambda, &self.chip.lambda] {
            for n in [lambda.numer(), lambda.denom()] {
                for p in crate::arith::prime_support(n) {
                    out.insert(Place::Finite(p));
                }
            }
        }
        out.extend(self.chi.eps.keys().copied());
        out.extend(self.chip.eps.keys().copied());
        out
    }
}

/// Global admissibility: the sign patterns must multiply to `+1` (otherwise
/// the data is not an automorphic character at all) and the localized
/// quadruple must be admissible at every place of the bad set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalAdmissibilityReport {
    pub admissible: bool,
    /// Product formula for the two sign patterns.
    pub automorphy: (bool, bool),
    pub reports: Vec<AdmissibilityReport>,
}

/// Check a global quadruple at its bad set (places outside are unramified:
/// unit discriminants, unit `λ`, `ε = +1` — automatically admissible).
pub fn globally_admissible(alpha: &GlobalQuadruple) -> Result<GlobalAdmissibilityReport> {
    alpha.validate()?;
    let automorphy = (alpha.chi.sign_product() == 1, alpha.chip.sign_product() == 1);
    let mut reports = Vec::new();
    let mut all_local = true;
    for place in alpha.bad_set() {
        let report = locally_admissible(&alpha.localize(place)?, place)?;
        all_local &= report.verdict;
        reports.push(report);
    }
    Ok(GlobalAdmissibilityReport {
        admissible: automorphy.0 && automorphy.1 && all_local,
        automorphy,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn space(diag: &[i64]) -> QuadraticSpace {
        QuadraticSpace::from_ints(diag).unwrap()
    }

    fn f(p: u64) -> Place {
        Place::Finite(p)
    }

    /// The worked (3,1) pair: q = <1,1,1>, q′ = <1>.
    fn three_one_pair() -> (QuadraticSpace, QuadraticSpace) {
        (space(&[1, 1, 1]), space(&[1]))
    }

    #[test]
    fn constructed_data_for_the_worked_pair() {
        let (q, qp) = three_one_pair();
        let at5 = construct_characters(&q, &qp, f(5)).unwrap();
        assert_eq!(at5.lambda, rat(-1));
        assert_eq!((at5.eps, at5.epsp), (1, 1));
        // At ℝ the second sign flips: ε′ = (−1,−1)_∞ = −1.
        let at_real = construct_characters(&q, &qp, Place::Real).unwrap();
        assert_eq!((at_real.eps, at_real.epsp), (1, -1));
        // Scaling q′ by a square changes nothing.
        let scaled = construct_characters(&q, &space(&[4]), f(5)).unwrap();
        assert_eq!(at5, scaled);
    }

    #[test]
    fn cc_on_the_worked_pair() {
        let (q, qp) = three_one_pair();
        let alpha = constructed_quadruple(&q, &qp, 1, f(5)).unwrap();
        assert!(cc_holds(&alpha, f(5)).unwrap());
        // Same spaces, ε′ flipped: one side changes sign.
        let mut flipped = alpha.clone();
        flipped.chip.eps = -flipped.chip.eps;
        assert!(!cc_holds(&flipped, f(5)).unwrap());
        // Trivial symmetry: q = q′, χ = χ′.
        let sym = Quadruple::new(
            q.clone(),
            alpha.chi.clone(),
            q.clone(),
            alpha.chi.clone(),
            1,
        )
        .unwrap();
        assert!(cc_holds(&sym, f(5)).unwrap());
    }

    #[test]
    fn fc_on_the_worked_pair() {
        let (q, qp) = three_one_pair();
        let alpha = constructed_quadruple(&q, &qp, 1, f(5)).unwrap();
        assert!(fc_holds(&alpha, f(5)).unwrap());
        let (left, right) = fc_class_sets(&alpha, f(5)).unwrap();
        assert_eq!(left, right);
        assert_eq!(left.len(), 1, "only the trivial square class survives");

        // <2> represents only the class of 2, so with the same characters
        // the two support sets differ.
        let mut wrong = alpha.clone();
        wrong.qp = space(&[2]);
        assert!(!fc_holds(&wrong, f(5)).unwrap());
        let (l2, r2) = fc_class_sets(&wrong, f(5)).unwrap();
        assert_ne!(l2, r2);
        assert_eq!(r2.len(), 1);
    }

    #[test]
    fn locally_admissible_at_every_bad_place() {
        let (q, qp) = three_one_pair();
        for place in [Place::Real, f(2), f(3), f(5), f(7)] {
            let alpha = constructed_quadruple(&q, &qp, 1, place).unwrap();
            let report = locally_admissible(&alpha, place).unwrap();
            assert!(report.verdict, "failed at {place}: {report:?}");
            assert_eq!(report.verdict, report.cc && report.fc);
        }
    }

    #[test]
    fn construct_verify_closure_on_unit_heavy_pairs() {
        // (3,1), (3,3) and (1,1) patterns with unit-heavy entries; the
        // constructed data must pass both conditions at every bad place.
        let pairs: Vec<(QuadraticSpace, QuadraticSpace)> = vec![
            (space(&[1, 1, 1]), space(&[1])),
            (space(&[1, 1, 2]), space(&[3])),
            (space(&[1, 3, 5]), space(&[2])),
            (space(&[-1, 1, 3]), space(&[-5])),
            (space(&[1, 1, 7]), space(&[1])),
            (space(&[2, 3, 5]), space(&[30])),
            (space(&[1, 1, 1]), space(&[1, 1, 1])),
            (space(&[1, 2, 3]), space(&[1, 2, 3])),
            (space(&[5]), space(&[5])),
            (space(&[3]), space(&[27])),
        ];
        for (q, qp) in pairs {
            let mut places: BTreeSet<Place> = crate::quadforms::bad_places(&q);
            places.extend(crate::quadforms::bad_places(&qp));
            for place in places {
                let alpha = match constructed_quadruple(&q, &qp, 1, place) {
                    Ok(a) => a,
                    Err(Error::Unsupported(_)) => continue, // non-isometric equal-dim pair
                    Err(e) => panic!("unexpected error: {e}"),
                };
                let report = locally_admissible(&alpha, place).unwrap();
                assert!(
                    report.verdict,
                    "constructed data failed for {:?}/{:?} at {place}: {report:?}",
                    q.diag(),
                    qp.diag()
                );
            }
        }
    }

    #[test]
    fn swapped_dimension_pattern() {
        // (1,3): the mirror of the worked pair is admissible as well.
        let (q3, q1) = three_one_pair();
        let alpha = constructed_quadruple(&q1, &q3, 1, f(2)).unwrap();
        let report = locally_admissible(&alpha, f(2)).unwrap();
        assert!(report.verdict);
        // Unsupported spread.
        assert!(matches!(
            construct_characters(&space(&[1, 1, 1, 1, 1]), &space(&[1]), f(2)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn fc_is_an_equivalence_on_matched_samples() {
        // Reflexivity, symmetry and a transitive triple, all at 3.
        let (q, qp) = three_one_pair();
        let alpha = constructed_quadruple(&q, &qp, 1, f(3)).unwrap();
        assert!(fc_holds(&alpha, f(3)).unwrap());
        let swapped = Quadruple::new(
            alpha.qp.clone(),
            alpha.chip.clone(),
            alpha.q.clone(),
            alpha.chi.clone(),
            1,
        )
        .unwrap();
        assert!(fc_holds(&swapped, f(3)).unwrap());
        // q ~ q′ and q′ ~ q″ (a square scaling) imply q ~ q″.
        let qpp = space(&[9]);
        let third = Quadruple::new(
            alpha.q.clone(),
            alpha.chi.clone(),
            qpp,
            alpha.chip.clone(),
            1,
        )
        .unwrap();
        assert!(fc_holds(&third, f(3)).unwrap());
    }

    #[test]
    fn fc_for_rank_two() {
        // n = 2 with identical sides: both support sets coincide over the
        // isometry classes of binary forms.
        let q = space(&[1, 1, 1]);
        let chi = QuadCharacter::new(rat(1), 1, 3).unwrap();
        let alpha = Quadruple::new(q.clone(), chi.clone(), q, chi, 2).unwrap();
        for place in [Place::Real, f(2), f(5)] {
            assert!(fc_holds(&alpha, place).unwrap());
            assert!(cc_holds(&alpha, place).unwrap());
        }
    }

    #[test]
    fn fc_rejects_oversized_rank() {
        let (q, qp) = three_one_pair();
        let chi = QuadCharacter::new(rat(-1), 1, 3).unwrap();
        let chip = QuadCharacter::new(rat(-1), 1, 1).unwrap();
        let alpha = Quadruple::new(q, chi, qp, chip, 2).unwrap();
        assert!(matches!(fc_holds(&alpha, f(5)), Err(Error::Dimension(_))));
    }

    #[test]
    fn dimension_restrictions() {
        assert!(dimension_compatible(&space(&[1, 1, 1]), 1, true));
        assert!(!dimension_compatible(&space(&[1, 1, 1, 1, 1]), 1, true));
        assert!(dimension_compatible(&space(&[1, 1, 1, 1, 1]), 1, false));
        assert!(dimension_compatible(&space(&[1]), 1, true));
        assert!(dimension_sharp(&space(&[1, 1, 1]), 1));
        assert!(dimension_sharp(&space(&[1]), 1));
        assert!(!dimension_sharp(&space(&[1, 1, 1]), 2));
    }

    fn three_one_global() -> GlobalQuadruple {
        let (q, qp) = three_one_pair();
        // ε ≡ +1; ε′ = −1 exactly at ℝ and 2 (product +1).
        let mut epsp = BTreeMap::new();
        epsp.insert(Place::Real, -1);
        epsp.insert(f(2), -1);
        GlobalQuadruple {
            chi: GlobalCharacterData { lambda: rat(-1), eps: BTreeMap::new(), dim: q.dim() },
            chip: GlobalCharacterData { lambda: rat(-1), eps: epsp, dim: qp.dim() },
            q,
            qp,
            n: 1,
        }
    }

    #[test]
    fn global_verdict_for_the_worked_quadruple() {
        let alpha = three_one_global();
        assert_eq!(
            alpha.bad_set().into_iter().collect::<Vec<_>>(),
            vec![Place::Real, f(2)]
        );
        let report = globally_admissible(&alpha).unwrap();
        assert!(report.admissible, "{report:?}");
        assert_eq!(report.automorphy, (true, true));
        assert_eq!(report.reports.len(), 2);
        assert_eq!(report.reports[0].place, Place::Real);
    }

    #[test]
    fn global_failures_are_attributed() {
        // Flipping ε at ℝ and 2 keeps the product formula but breaks CC at
        // both places.
        let mut cc_broken = three_one_global();
        cc_broken.chi.eps.insert(Place::Real, -1);
        cc_broken.chi.eps.insert(f(2), -1);
        let report = globally_admissible(&cc_broken).unwrap();
        assert!(!report.admissible);
        assert_eq!(report.automorphy, (true, true));
        assert!(report.reports.iter().any(|r| !r.cc));

        // A single flipped sign is not automorphic at all.
        let mut not_automorphic = three_one_global();
        not_automorphic.chi.eps.insert(f(3), -1);
        let report = globally_admissible(&not_automorphic).unwrap();
        assert!(!report.admissible);
        assert_eq!(report.automorphy, (false, true));
    }

    #[test]
    fn global_quadruple_json_round_trip() {
        let alpha = three_one_global();
        let text = serde_json::to_string(&alpha).unwrap();
        assert!(text.contains("\"p:2\""), "places serialize as strings: {text}");
        let back: GlobalQuadruple = serde_json::from_str(&text).unwrap();
        assert_eq!(alpha, back);
    }
}
