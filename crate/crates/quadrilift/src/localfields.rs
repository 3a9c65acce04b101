//! Places of ℚ, local square classes, and the Hilbert symbol.
//!
//! A place is either the real place or a finite prime. The square classes of
//! the completions are finite: {±1} over ℝ, four classes over ℚ_p for odd p
//! (unit/nonunit × residue/nonresidue), eight over ℚ₂ (unit mod 8 × parity of
//! the valuation). The Hilbert symbol `(a,b)_ν ∈ {±1}` is +1 exactly when
//! `z² = ax² + by²` has a nontrivial solution over the completion; it is
//! computed here by the classical valuation/residue formulas and satisfies
//! the product formula `Π_ν (a,b)_ν = 1`.

use crate::arith::{is_prime_u64, legendre_u64, prime_support};
use crate::rational::{unit_part, valuation, Rational};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A place of ℚ: the real place or a finite prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Real,
    Finite(u64),
}

impl Place {
    /// Finite place at a validated prime.
    pub fn finite(p: u64) -> Result<Place> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// The residue characteristic, if finite.
    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Real => None,
            Place::Finite(p) => Some(*p),
        }
    }

    /// Parse `"real"`, `"p:5"`, or a bare prime like `"5"`.
    pub fn parse(s: &str) -> Result<Place> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("real") || t.eq_ignore_ascii_case("inf") {
            return Ok(Place::Real);
        }
        let digits = t.strip_prefix("p:").unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad place {s:?} (want \"real\" or \"p:<prime>\")")))?;
        Place::finite(p)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Finite(p) => write!(f, "p:{p}"),
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Place::Real, Place::Real) => std::cmp::Ordering::Equal,
            (Place::Real, Place::Finite(_)) => std::cmp::Ordering::Less,
            (Place::Finite(_), Place::Real) => std::cmp::Ordering::Greater,
            (Place::Finite(p), Place::Finite(q)) => p.cmp(q),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Place::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Modular inverse of `a` mod `m` (coprime inputs).
fn mod_inv_u64(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inputs must be coprime");
    (t.rem_euclid(m as i128)) as u64
}

/// Residue of a `p`-adic unit `x` modulo `m` (a power of `p`): numerator
/// times inverse denominator, both prime to `p`.
pub fn unit_residue_mod(x: &Rational, p: u64, m: u64) -> u64 {
    debug_assert_eq!(valuation(x, p).unwrap(), 0);
    let mb = BigInt::from(m);
    let r = ((x.numer() % &mb) + &mb) % &mb;
    let s = ((x.denom() % &mb) + &mb) % &mb;
    let r = r.to_u64().unwrap();
    let s = s.to_u64().unwrap();
    (r as u128 * mod_inv_u64(s, m) as u128 % m as u128) as u64
}

/// Least quadratic nonresidue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    debug_assert!(p > 2);
    (2..p).find(|&a| legendre_u64(a, p) == -1).expect("odd p has a nonresidue")
}

/// ε(u) = (u−1)/2 mod 2 for odd u: zero iff u ≡ 1 (mod 4).
fn eps2(u_mod8: u64) -> u32 {
    if u_mod8 % 4 == 3 {
        1
    } else {
        0
    }
}

/// ω(u) = (u²−1)/8 mod 2 for odd u: zero iff u ≡ ±1 (mod 8).
fn omega2(u_mod8: u64) -> u32 {
    if u_mod8 == 3 || u_mod8 == 5 {
        1
    } else {
        0
    }
}

/// The square class of a nonzero element of a completion of ℚ.
///
/// The `label` is the decimal string of the canonical representative:
/// `1`/`-1` over ℝ; `p^v · u` with `u ∈ {1, least nonresidue}` over ℚ_p
/// (odd p); `2^v · u` with `u ∈ {1,3,5,7}` over ℚ₂.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalSquareClass {
    Real { negative: bool },
    Odd { p: u64, odd_valuation: bool, nonresidue: bool },
    Two { odd_valuation: bool, unit_mod8: u8 },
}

impl LocalSquareClass {
    /// Whether this is the class of squares.
    pub fn is_one(&self) -> bool {
        match self {
            LocalSquareClass::Real { negative } => !negative,
            LocalSquareClass::Odd { odd_valuation, nonresidue, .. } => {
                !odd_valuation && !nonresidue
            }
            LocalSquareClass::Two { odd_valuation, unit_mod8 } => {
                !odd_valuation && *unit_mod8 == 1
            }
        }
    }

    /// Canonical representative as a rational (an integer, in fact).
    pub fn canonical_rep(&self) -> Rational {
        let n: i64 = match self {
            LocalSquareClass::Real { negative } => {
                if *negative {
                    -1
                } else {
                    1
                }
            }
            LocalSquareClass::Odd { p, odd_valuation, nonresidue } => {
                let u = if *nonresidue { least_nonresidue(*p) as i64 } else { 1 };
                if *odd_valuation {
                    *p as i64 * u
                } else {
                    u
                }
            }
            LocalSquareClass::Two { odd_valuation, unit_mod8 } => {
                let u = *unit_mod8 as i64;
                if *odd_valuation {
                    2 * u
                } else {
                    u
                }
            }
        };
        Rational::from_integer(BigInt::from(n))
    }

    /// Decimal label of the canonical representative.
    pub fn label(&self) -> String {
        crate::rational::format_rational(&self.canonical_rep())
    }
}

/// The square class of a nonzero rational in the completion at `ν`.
pub fn local_square_class(x: &Rational, place: Place) -> Result<LocalSquareClass> {
    if x.is_zero() {
        return Err(Error::ZeroArgument("square class of 0 is undefined"));
    }
    match place {
        Place::Real => Ok(LocalSquareClass::Real { negative: x.is_negative() }),
        Place::Finite(2) => {
            let v = valuation(x, 2)?;
            let u = unit_part(x, 2)?;
            Ok(LocalSquareClass::Two {
                odd_valuation: v.rem_euclid(2) == 1,
                unit_mod8: unit_residue_mod(&u, 2, 8) as u8,
            })
        }
        Place::Finite(p) => {
            let v = valuation(x, p)?;
            let u = unit_part(x, p)?;
            let r = unit_residue_mod(&u, p, p);
            Ok(LocalSquareClass::Odd {
                p,
                odd_valuation: v.rem_euclid(2) == 1,
                nonresidue: legendre_u64(r, p) == -1,
            })
        }
    }
}

/// Whether `x` is a square in the completion at `ν`.
pub fn is_local_square(x: &Rational, place: Place) -> Result<bool> {
    Ok(local_square_class(x, place)?.is_one())
}

/// Canonical representatives of all square classes at `ν`:
/// 2 over ℝ, 4 over ℚ_p (odd p), 8 over ℚ₂.
pub fn square_class_reps(place: Place) -> Vec<Rational> {
    let ints: Vec<i64> = match place {
        Place::Real => vec![1, -1],
        Place::Finite(2) => vec![1, 3, 5, 7, 2, 6, 10, 14],
        Place::Finite(p) => {
            let u = least_nonresidue(p) as i64;
            vec![1, u, p as i64, p as i64 * u]
        }
    };
    ints.into_iter().map(|n| Rational::from_integer(BigInt::from(n))).collect()
}

/// Hilbert symbol `(a,b)_ν ∈ {±1}`; errors if either argument is zero.
///
/// Real: −1 iff both arguments are negative. Odd p with `a = p^α u`,
/// `b = p^β w`: `(−1)^{αβ(p−1)/2} (u|p)^β (w|p)^α`. At p = 2:
/// `(−1)^{ε(u)ε(w) + α ω(w) + β ω(u)}`.
pub fn hilbert(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("Hilbert symbol needs nonzero arguments"));
    }
    match place {
        Place::Real => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(2) => {
            let (alpha, beta) = (valuation(a, 2)?, valuation(b, 2)?);
            let u8a = unit_residue_mod(&unit_part(a, 2)?, 2, 8);
            let u8b = unit_residue_mod(&unit_part(b, 2)?, 2, 8);
            let e = eps2(u8a) * eps2(u8b)
                + (alpha.rem_euclid(2) as u32) * omega2(u8b)
                + (beta.rem_euclid(2) as u32) * omega2(u8a);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Finite(p) => {
            if !is_prime_u64(p) {
                return Err(Error::NotPrime(p));
            }
            let (alpha, beta) = (valuation(a, p)?, valuation(b, p)?);
            let ru = unit_residue_mod(&unit_part(a, p)?, p, p);
            let rw = unit_residue_mod(&unit_part(b, p)?, p, p);
            let mut s = 1i8;
            if alpha.rem_euclid(2) == 1 && beta.rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 {
                s = -s;
            }
            if beta.rem_euclid(2) == 1 && legendre_u64(ru, p) == -1 {
                s = -s;
            }
            if alpha.rem_euclid(2) == 1 && legendre_u64(rw, p) == -1 {
                s = -s;
            }
            Ok(s)
        }
    }
}

/// All places where `(a,b)_ν = −1`, as a map place → −1. The support is
/// finite (contained in {Real, 2} ∪ primes of the numerators/denominators)
/// and has even size, which is the product formula `Π_ν (a,b)_ν = 1`.
pub fn hilbert_product(a: &Rational, b: &Rational) -> Result<BTreeMap<Place, i8>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("Hilbert symbol needs nonzero arguments"));
    }
    let mut places: Vec<Place> = vec![Place::Real, Place::Finite(2)];
    for x in [a, b] {
        for n in [x.numer(), x.denom()] {
            for p in prime_support(n) {
                if p != 2 && !places.contains(&Place::Finite(p)) {
                    places.push(Place::Finite(p));
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for nu in places {
        if hilbert(a, b, nu)? == -1 {
            out.insert(nu, -1i8);
        }
    }
    debug_assert!(out.len() % 2 == 0, "product formula violated");
    Ok(out)
}
