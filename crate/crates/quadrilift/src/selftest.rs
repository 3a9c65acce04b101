//! Deterministic self-test suites wired into the CLI.
//!
//! Each suite re-derives a slice of the crate from an independent direction —
//! residue enumeration against closed formulas, product formulas against
//! per-place computations, factorization against recomposition, operator
//! algebra against its defining relations, exact series against their closed
//! forms — and reports one pass/fail line. All randomness comes from
//! [`seeded_rng`], so runs are byte-identical for a fixed `QUADRILIFT_SEED`.

use std::collections::BTreeSet;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::localfactors::{
    geometric_identity_holds, partial_euler, residue_report, unramified_pairing,
    UnramifiedDatum,
};
use crate::localfields::{hilbert, hilbert_product, Place};
use crate::oracles::hilbert_oracle;
use crate::orthogroup::{cartan_dieudonne, ReflectionWord};
use crate::quadforms::QuadraticSpace;
use crate::rational::{is_rational_square, rat, ratio, Rational};
use crate::weil_finite::{model_report, FiniteWeilModel};
use crate::{rng_seed, Result};

/// The crate-wide deterministic RNG (ChaCha8 keyed by [`crate::rng_seed`]).
pub fn seeded_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(rng_seed())
}

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SuiteReport {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        SuiteReport { name: name.to_string(), passed, detail }
    }
}

/// Outcome of a full self-test run.
#[derive(Clone, Debug, Serialize)]
pub struct SelfTestReport {
    pub fast: bool,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl SelfTestReport {
    /// Names of the failing suites (empty on success).
    pub fn failing(&self) -> Vec<&str> {
        self.suites.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect()
    }
}

/// The grid places every local computation is exercised at.
pub fn grid_places() -> Vec<Place> {
    vec![Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7)]
}

/// Hilbert grid with a pluggable evaluator, compared against the residue
/// oracle. The indirection exists so tests can inject a corrupted evaluator
/// and watch the suite fail (a negative control for the whole mechanism).
pub fn run_hilbert_grid_with<F>(range: i64, eval: F) -> Result<SuiteReport>
where
    F: Fn(&Rational, &Rational, Place) -> Result<i8>,
{
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    let mut first = String::new();
    for place in grid_places() {
        for a in (-range..=range).filter(|&a| a != 0) {
            for b in (-range..=range).filter(|&b| b != 0) {
                let (ar, br) = (rat(a), rat(b));
                // Depth 64 exceeds every table bound, so the oracle uses its
                // Hensel-stabilized enumeration depth.
                let expected = hilbert_oracle(&ar, &br, place, 64)?;
                let got = eval(&ar, &br, place)?;
                checked += 1;
                if got != expected {
                    mismatches += 1;
                    if first.is_empty() {
                        first = format!(" (first: a={a}, b={b} at {place})");
                    }
                }
            }
        }
    }
    Ok(SuiteReport::new(
        "hilbert-grid",
        mismatches == 0,
        format!("{checked} symbol evaluations vs enumeration, {mismatches} mismatches{first}"),
    ))
}

/// Closed Hilbert formula vs the residue-enumeration oracle on the full grid.
pub fn hilbert_grid_suite(range: i64) -> Result<SuiteReport> {
    run_hilbert_grid_with(range, |a, b, place| hilbert(a, b, place))
}

fn random_nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut numer = 0i64;
    while numer == 0 {
        numer = rng.gen_range(-60..=60);
    }
    let denom = rng.gen_range(1..=60i64);
    ratio(numer, denom)
}

/// Product formula: `Π_ν (a,b)_ν = 1` on seeded random pairs.
pub fn product_formula_suite(pairs: usize) -> Result<SuiteReport> {
    let mut rng = seeded_rng();
    let mut failures = 0usize;
    for _ in 0..pairs {
        let a = random_nonzero_rational(&mut rng);
        let b = random_nonzero_rational(&mut rng);
        let product: i32 =
            hilbert_product(&a, &b)?.values().map(|&s| i32::from(s)).product();
        if product != 1 {
            failures += 1;
        }
    }
    Ok(SuiteReport::new(
        "product-formula",
        failures == 0,
        format!("{pairs} random pairs, {failures} product-formula violations"),
    ))
}

fn random_space<R: Rng>(rng: &mut R, dim: usize) -> QuadraticSpace {
    let diag: Vec<Rational> = (0..dim)
        .map(|_| {
            let mut x = 0i64;
            while x == 0 {
                x = rng.gen_range(-9..=9);
            }
            rat(x)
        })
        .collect();
    QuadraticSpace::new(diag).expect("nonzero entries")
}

fn random_anisotropic_vector<R: Rng>(rng: &mut R, q: &QuadraticSpace) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..q.dim()).map(|_| rat(rng.gen_range(-4..=4))).collect();
        if !q.value(&v).is_zero() {
            return v;
        }
    }
}

/// Cartan–Dieudonné round trip and spinor-norm well-definedness on random
/// reflection words over random spaces of dimension 2–5.
pub fn cartan_dieudonne_suite(samples: usize) -> Result<SuiteReport> {
    let mut rng = seeded_rng();
    let mut failures = 0usize;
    for _ in 0..samples {
        let dim = rng.gen_range(2..=5usize);
        let space = random_space(&mut rng, dim);
        let count = rng.gen_range(0..=2 * dim);
        let vectors: Vec<Vec<Rational>> =
            (0..count).map(|_| random_anisotropic_vector(&mut rng, &space)).collect();
        let word = ReflectionWord::new(space.clone(), vectors)?;
        let h = word.evaluate()?;
        let factored = cartan_dieudonne(&h)?;
        let ok = factored.evaluate()?.matrix() == h.matrix()
            && factored.len() <= dim
            && is_rational_square(&(word.spinor_norm() / factored.spinor_norm()));
        if !ok {
            failures += 1;
        }
    }
    Ok(SuiteReport::new(
        "cartan-dieudonne",
        failures == 0,
        format!("{samples} random elements refactored, {failures} failures"),
    ))
}

/// Finite Weil models: relations, Fourier identities, generator words, and
/// orbit transitivity. `fast` skips the large `p = 7` model.
pub fn weil_models_suite(fast: bool) -> Result<SuiteReport> {
    let mut specs: Vec<(u64, Vec<u64>, usize)> =
        vec![(3, vec![1], 1), (5, vec![1, 1, 1], 1)];
    if !fast {
        specs.push((7, vec![1, 1, 1], 1));
    }
    let samples = if fast { 5 } else { 20 };
    let mut failures = Vec::new();
    for (p, diag, n) in &specs {
        let model = FiniteWeilModel::new(*p, diag, *n)?;
        let report = model_report(&model, samples)?;
        if !report.passed {
            failures.push(format!("p={p}"));
        }
    }
    Ok(SuiteReport::new(
        "weil-models",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} models passed relations/Fourier/orbit checks", specs.len())
        } else {
            format!("failing models: {}", failures.join(", "))
        },
    ))
}

/// Exact geometric identities, the closed-form pairing, the Euler product at
/// `s = 2`, and the residue cross-check.
pub fn unramified_suite() -> Result<SuiteReport> {
    let datum = UnramifiedDatum::new(3, 3, 1, rat(1), rat(1))?;
    let mut ok = true;
    let mut notes = Vec::new();
    for k in 0..=64usize {
        if !geometric_identity_holds(1, k)? {
            ok = false;
            notes.push(format!("geometric identity failed at K={k}"));
            break;
        }
    }
    let pairing = unramified_pairing(&datum, 1)?;
    if pairing.evaluate(&ratio(1, 9))? != ratio(9, 8) {
        ok = false;
        notes.push("pairing misevaluated at t=1/9".into());
    }
    let euler = partial_euler(&BTreeSet::new(), 100_000, 2.0)?;
    if (euler.value - std::f64::consts::PI.powi(2) / 6.0).abs() > 1e-3 {
        ok = false;
        notes.push(format!("Euler product at s=2 off: {}", euler.value));
    }
    let residue = residue_report(&[2, 3].into_iter().collect())?;
    if !residue.passed || residue.closed_form != ratio(1, 3) {
        ok = false;
        notes.push(format!("residue check failed: {residue:?}"));
    }
    Ok(SuiteReport::new(
        "unramified-closed-form",
        ok,
        if ok {
            "shell identities K ≤ 64, closed form, Euler product, residue all agree".into()
        } else {
            notes.join("; ")
        },
    ))
}

/// Run every suite; `fast` shrinks sample counts and skips the `p = 7` model.
pub fn run_selftest(fast: bool) -> Result<SelfTestReport> {
    let (grid_range, pairs, cd_samples) = if fast { (10, 200, 25) } else { (30, 1000, 100) };
    let suites = vec![
        hilbert_grid_suite(grid_range)?,
        product_formula_suite(pairs)?,
        cartan_dieudonne_suite(cd_samples)?,
        weil_models_suite(fast)?,
        unramified_suite()?,
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(SelfTestReport { fast, seed: rng_seed(), suites, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_selftest_passes() {
        let report = run_selftest(true).unwrap();
        assert!(report.passed, "failing suites: {:?}", report.failing());
        assert_eq!(report.suites.len(), 5);
        assert!(report.fast);
    }

    #[test]
    fn corrupted_evaluator_fails_the_grid() {
        // Negative control: flip the symbol whenever a is negative at p = 2.
        let report = run_hilbert_grid_with(4, |a, b, place| {
            let mut s = hilbert(a, b, place)?;
            if place == Place::Finite(2) && a < &rat(0) {
                s = -s;
            }
            Ok(s)
        })
        .unwrap();
        assert!(!report.passed);
        assert!(report.detail.contains("mismatches"));
    }

    #[test]
    fn suite_details_are_informative() {
        let suite = product_formula_suite(50).unwrap();
        assert!(suite.passed);
        assert!(suite.detail.contains("50 random pairs"));
        let suite = cartan_dieudonne_suite(10).unwrap();
        assert!(suite.passed, "{}", suite.detail);
    }
}
