//! A finite-field Schrödinger model of the Weil representation.
//!
//! Everything here lives over `F_p` (odd `p ≤ 7`): a diagonal unit form `q̄`
//! of dimension `m ≤ 3` and a symplectic rank `n ∈ {1, 2}` give a state space
//! `S((F_p^m)^n)` of dimension `p^{mn}`, on which the three generator families
//! of `Sp_{2n}` act by explicit matrices:
//!
//! * the Levi `m(a)` permutes `v ↦ va` with a quadratic sign `η(det a)`,
//! * the unipotent `n(b)` multiplies by the phase `ψ(tr(b·q̄[v]))`,
//! * the long Weyl element `w` is the `γ`-normalized Fourier kernel
//!   `γ^{−1}·p^{−mn/2}·ψ(Σ_j B(v_j, y_j))` against the polar form `B = 2b`.
//!
//! The representation is projective — relations hold up to a modulus-1
//! scalar — and that is exactly what [`relation_suite`] verifies, together
//! with unitarity, to `1e-9`. Theta functionals and `ψ_β`-Fourier
//! coefficients reduce to finite character sums, so the support statement
//! ("no solutions of `Gram(v) = β` ⇒ coefficient zero") and Witt's orbit
//! transitivity can be checked by literal enumeration.
//!
//! The absolute values of the p-adic picture degenerate to 1 here; `γ` is the
//! normalized Gauss sum of the form, pinned by unitarity rather than kept
//! symbolic.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::TAU;

use num::complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::arith::{is_prime_u64, legendre_u64, pow_mod};
use crate::{Error, Result};

/// Hard cap on the dense state-space dimension `p^{mn}`; covers every model
/// exercised by the checks (largest: `p = 7, m = 2, n = 2` at `2401`).
pub const MAX_STATE_DIM: usize = 2500;

/// Hard cap on orthogonal-group enumeration.
pub const MAX_GROUP_ORDER: usize = 1_000_000;

/// Numerical tolerance for all operator identities.
pub const TOLERANCE: f64 = 1e-9;

/// Square `n×n` array over `F_p` (row major).
pub type FpMatrix = Vec<Vec<u64>>;

/// A state vector: one complex value per point of `(F_p^m)^n`.
pub type FiniteSchwartz = Vec<Complex64>;

/// The model data: an odd prime, diagonal unit form, and symplectic rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteWeilModel {
    p: u64,
    diag: Vec<u64>,
    n: usize,
}

impl FiniteWeilModel {
    /// Validate and build: `p` an odd prime ≤ 7, `1 ≤ m ≤ 3` unit diagonal
    /// entries, `n ∈ {1, 2}`, and a dense state space within [`MAX_STATE_DIM`].
    pub fn new(p: u64, diag: &[u64], n: usize) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 || p > 7 {
            return Err(Error::Unsupported(format!("model primes are odd and ≤ 7, got {p}")));
        }
        if diag.is_empty() || diag.len() > 3 {
            return Err(Error::Dimension(format!(
                "model forms have dimension 1–3, got {}",
                diag.len()
            )));
        }
        if !(1..=2).contains(&n) {
            return Err(Error::Unsupported(format!("model rank n must be 1 or 2, got {n}")));
        }
        let diag: Vec<u64> = diag.iter().map(|&a| a % p).collect();
        if diag.iter().any(|&a| a == 0) {
            return Err(Error::Degenerate("model form entries must be units mod p".into()));
        }
        let model = FiniteWeilModel { p, diag, n };
        if model.state_dim() > MAX_STATE_DIM {
            return Err(Error::Unsupported(format!(
                "state space p^(m·n) = {} exceeds the dense cap {MAX_STATE_DIM}",
                model.state_dim()
            )));
        }
        Ok(model)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Dimension `m` of the quadratic space.
    pub fn form_dim(&self) -> usize {
        self.diag.len()
    }

    /// Symplectic rank `n`.
    pub fn rank(&self) -> usize {
        self.n
    }

    /// `p^{mn}`, the dimension of the state space.
    pub fn state_dim(&self) -> usize {
        (self.p as usize).pow((self.form_dim() * self.n) as u32)
    }

    /// The additive character `ψ(x) = exp(2πi·x/p)`.
    pub fn psi(&self, x: u64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * ((x % self.p) as f64) / self.p as f64)
    }

    /// Decode a state index into the tuple `(v_1, …, v_n)`, each `v_j ∈ F_p^m`.
    pub fn point(&self, index: usize) -> Vec<Vec<u64>> {
        let (p, m) = (self.p as usize, self.form_dim());
        let mut rest = index;
        let mut tuple = vec![vec![0u64; m]; self.n];
        for v in tuple.iter_mut() {
            for x in v.iter_mut() {
                *x = (rest % p) as u64;
                rest /= p;
            }
        }
        tuple
    }

    /// Encode a tuple back into its state index.
    pub fn index(&self, tuple: &[Vec<u64>]) -> usize {
        let (p, m) = (self.p as usize, self.form_dim());
        let mut idx = 0usize;
        for (j, v) in tuple.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                idx += (x as usize % p) * p.pow((j * m + i) as u32);
            }
        }
        idx
    }

    /// Bilinear value `b(x, y) = Σ aᵢ xᵢ yᵢ mod p` (so `b(x, x) = q(x)`).
    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> u64 {
        self.diag
            .iter()
            .zip(x.iter().zip(y))
            .fold(0u64, |acc, (&a, (&xi, &yi))| (acc + a * xi % self.p * yi) % self.p)
    }

    /// The `n×n` Gram matrix `q̄[v] = (b(vᵢ, vⱼ))` of a tuple.
    pub fn gram_tuple(&self, tuple: &[Vec<u64>]) -> FpMatrix {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.bilinear(&tuple[i], &tuple[j])).collect())
            .collect()
    }

    /// The Levi sign character: `η(x) = leg(x)^{m}·leg(x)^{[T nonsquare]}`
    /// with `T = (−1)^{m(m−1)/2}·disc q̄ mod p` — the finite-field residue of
    /// `χ_V`, multiplicative by construction.
    pub fn eta(&self, x: u64) -> Result<i8> {
        if x % self.p == 0 {
            return Err(Error::ZeroArgument("η is a character of F_p^×"));
        }
        let m = self.form_dim();
        let disc = self.diag.iter().fold(1u64, |acc, &a| acc * a % self.p);
        let t = if (m * (m - 1) / 2) % 2 == 0 { disc } else { (self.p - disc) % self.p };
        let mut exponent = m % 2;
        if legendre_u64(t, self.p) == -1 {
            exponent += 1;
        }
        Ok(if exponent % 2 == 0 { 1 } else { legendre_u64(x % self.p, self.p) })
    }

    /// The normalized Gauss sum `γ = p^{−mn/2}·(Σ_{x∈F_p^m} ψ(q(x)))^n`,
    /// a modulus-1 scalar.
    pub fn gamma(&self) -> Complex64 {
        let p = self.p as usize;
        let m = self.form_dim();
        let mut single = Complex64::new(0.0, 0.0);
        for idx in 0..p.pow(m as u32) {
            let mut rest = idx;
            let mut v = vec![0u64; m];
            for x in v.iter_mut() {
                *x = (rest % p) as u64;
                rest /= p;
            }
            single += self.psi(self.bilinear(&v, &v));
        }
        single /= (p as f64).sqrt().powi(m as i32);
        single.powu(self.n as u32)
    }
}

/// Symmetric-matrix and invertibility helpers over `F_p`.
fn is_symmetric(b: &FpMatrix, p: u64) -> bool {
    let n = b.len();
    b.iter().all(|row| row.len() == n)
        && (0..n).all(|i| (0..n).all(|j| b[i][j] % p == b[j][i] % p))
}

fn det_mod(a: &FpMatrix, p: u64) -> u64 {
    // Gaussian elimination; sizes here are ≤ 3.
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut det = 1u64;
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != 0);
        let Some(pr) = pivot else { return 0 };
        if pr != col {
            m.swap(pr, col);
            det = (p - det) % p;
        }
        det = det * m[col][col] % p;
        let inv = pow_mod(m[col][col], p - 2, p);
        for r in col + 1..n {
            let factor = m[r][col] * inv % p;
            for c in col..n {
                m[r][c] = (m[r][c] + (p - factor) * m[col][c]) % p;
            }
        }
    }
    det
}

fn inverse_mod(a: &FpMatrix, p: u64) -> Result<FpMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<u64> = r.iter().map(|&x| x % p).collect();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| m[r][col] != 0)
            .ok_or_else(|| Error::Degenerate("matrix is singular mod p".into()))?;
        m.swap(pivot, col);
        let inv = pow_mod(m[col][col], p - 2, p);
        for c in 0..2 * n {
            m[col][c] = m[col][c] * inv % p;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..2 * n {
                    m[r][c] = (m[r][c] + (p - factor) * m[col][c]) % p;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn transpose_mod(a: &FpMatrix) -> FpMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn mat_mul_mod(a: &FpMatrix, b: &FpMatrix, p: u64) -> FpMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(0u64, |acc, k| (acc + a[i][k] * b[k][j]) % p))
                .collect()
        })
        .collect()
}

/// A dense operator on the state space. Multiplication skips zero entries,
/// so products against the permutation-shaped generators stay quadratic.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub entries: Vec<Vec<Complex64>>,
}

impl OperatorMatrix {
    fn zero(dim: usize) -> Self {
        OperatorMatrix { entries: vec![vec![Complex64::new(0.0, 0.0); dim]; dim] }
    }

    /// Identity operator.
    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zero(dim);
        for (i, row) in out.entries.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Apply to a state vector.
    pub fn apply(&self, phi: &FiniteSchwartz) -> FiniteSchwartz {
        self.entries
            .iter()
            .map(|row| row.iter().zip(phi).map(|(&a, &x)| a * x).sum())
            .collect()
    }

    /// Apply the conjugate transpose to a state vector.
    pub fn apply_adjoint(&self, phi: &FiniteSchwartz) -> FiniteSchwartz {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (row, &x) in self.entries.iter().zip(phi) {
            for (o, &a) in out.iter_mut().zip(row) {
                *o += a.conj() * x;
            }
        }
        out
    }

    /// Matrix product `self · other`, skipping structural zeros on both
    /// sides (the permutation-shaped generators keep products quadratic).
    pub fn mul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let dim = self.dim();
        let sparse_rows: Vec<Vec<(usize, Complex64)>> = other
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, z)| z.norm_sqr() != 0.0)
                    .map(|(j, &z)| (j, z))
                    .collect()
            })
            .collect();
        let mut out = Self::zero(dim);
        for i in 0..dim {
            for k in 0..dim {
                let a = self.entries[i][k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let orow = &mut out.entries[i];
                for &(j, b) in &sparse_rows[k] {
                    orow[j] += a * b;
                }
            }
        }
        out
    }

    /// Max entrywise distance to `other`.
    pub fn distance(&self, other: &OperatorMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .flat_map(|(r, s)| r.iter().zip(s).map(|(&a, &b)| (a - b).norm()))
            .fold(0.0, f64::max)
    }

    /// Max entrywise distance to `s·other` for the best modulus-1 scalar `s`
    /// (the scalar is read off the largest entry of `other`).
    pub fn distance_up_to_phase(&self, other: &OperatorMatrix) -> f64 {
        let mut best = (0.0f64, (0usize, 0usize));
        for (i, row) in other.entries.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b.norm() > best.0 {
                    best = (b.norm(), (i, j));
                }
            }
        }
        let (i, j) = best.1;
        if best.0 == 0.0 {
            return self.distance(other);
        }
        let scalar = self.entries[i][j] / other.entries[i][j];
        if (scalar.norm() - 1.0).abs() > 0.5 {
            // Clearly not proportional; report the raw distance.
            return self.distance(other);
        }
        let scaled = OperatorMatrix {
            entries: other
                .entries
                .iter()
                .map(|r| r.iter().map(|&b| scalar * b).collect())
                .collect(),
        };
        self.distance(&scaled)
    }
}

/// Levi action: `(ω(m(a))φ)(v) = η(det a)·φ(va)`.
pub fn op_levi(model: &FiniteWeilModel, a: &FpMatrix) -> Result<OperatorMatrix> {
    let p = model.p();
    if a.len() != model.rank() || a.iter().any(|r| r.len() != model.rank()) {
        return Err(Error::Dimension(format!(
            "Levi parameter must be {n}×{n}",
            n = model.rank()
        )));
    }
    let det = det_mod(a, p);
    if det == 0 {
        return Err(Error::Degenerate("Levi parameter must be invertible mod p".into()));
    }
    let sign = f64::from(model.eta(det)?);
    let mut out = OperatorMatrix::zero(model.state_dim());
    for idx in 0..model.state_dim() {
        let v = model.point(idx);
        // (va)_j = Σ_i v_i·a_{ij}.
        let moved: Vec<Vec<u64>> = (0..model.rank())
            .map(|j| {
                (0..model.form_dim())
                    .map(|c| {
                        (0..model.rank()).fold(0u64, |acc, i| (acc + v[i][c] * a[i][j]) % p)
                    })
                    .collect()
            })
            .collect();
        out.entries[idx][model.index(&moved)] = Complex64::new(sign, 0.0);
    }
    Ok(out)
}

/// Unipotent action: multiplication by `ψ(tr(b·q̄[v]))`.
pub fn op_unipotent(model: &FiniteWeilModel, b: &FpMatrix) -> Result<OperatorMatrix> {
    let p = model.p();
    if b.len() != model.rank() || !is_symmetric(b, p) {
        return Err(Error::Invalid("unipotent parameter must be symmetric n×n".into()));
    }
    let mut out = OperatorMatrix::zero(model.state_dim());
    for idx in 0..model.state_dim() {
        let gram = model.gram_tuple(&model.point(idx));
        let trace = (0..model.rank())
            .fold(0u64, |acc, i| {
                (0..model.rank()).fold(acc, |acc2, j| (acc2 + b[i][j] * gram[j][i]) % p)
            });
        out.entries[idx][idx] = model.psi(trace);
    }
    Ok(out)
}

/// Long Weyl element: the `γ`-normalized Fourier kernel
/// `γ^{−1}·p^{−mn/2}·ψ(Σ_j B(v_j, y_j))`, where `B(x, y) = 2·b(x, y)` is the
/// polar bilinear form of `q`.
///
/// The pairing must be the *polar* form: with `b(x, x) = q(x)` fixed by the
/// unipotent action, only `±2·b` closes the rank-one braid relation
/// `(w·n(1))³ ∝ 1` for every odd `p` (an undoubled pairing happens to work
/// at `p = 3` where `−1 ≡ 2`, and nowhere else), and the `+` sign is the one
/// that lands the cube on the identity rather than on `m(−1)`.
pub fn op_weyl(model: &FiniteWeilModel) -> OperatorMatrix {
    let p = model.p();
    let dim = model.state_dim();
    let scale = model.gamma().conj() / (dim as f64).sqrt();
    let mut out = OperatorMatrix::zero(dim);
    for vi in 0..dim {
        let v = model.point(vi);
        for yi in 0..dim {
            let y = model.point(yi);
            let pairing = (0..model.rank())
                .fold(0u64, |acc, j| (acc + model.bilinear(&v[j], &y[j])) % p);
            out.entries[vi][yi] = scale * model.psi(2 * pairing % p);
        }
    }
    out
}

/// Residuals of the defining relations, all compared at [`TOLERANCE`].
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    /// `m(a)n(b)m(a)^{−1} = n(a·b·ᵗa)` (exact identity; max residual).
    pub conjugation: f64,
    /// `w·m(a) ∝ m(ᵗa^{−1})·w` up to a modulus-1 scalar.
    pub weyl_levi: f64,
    /// `(w·n(1))³ ∝ 1` for rank 1; `w² ∝ m(−I)` for rank 2.
    pub braid: f64,
    /// Generator unitarity: exact for the monomial generators, norm
    /// preservation and inversion on random states for `w`.
    pub unitarity: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn invertible_levi_parameters(model: &FiniteWeilModel) -> Vec<FpMatrix> {
    let p = model.p();
    match model.rank() {
        1 => (1..p).map(|x| vec![vec![x]]).collect(),
        _ => {
            // A generating sample: diagonal tori, a unipotent, and the swap.
            let mut out = Vec::new();
            for x in 1..p {
                for y in 1..p {
                    out.push(vec![vec![x, 0], vec![0, y]]);
                }
            }
            out.push(vec![vec![1, 1], vec![0, 1]]);
            out.push(vec![vec![0, 1], vec![p - 1, 0]]);
            out
        }
    }
}

fn symmetric_parameters(model: &FiniteWeilModel) -> Vec<FpMatrix> {
    let p = model.p();
    match model.rank() {
        1 => (0..p).map(|x| vec![vec![x]]).collect(),
        _ => {
            let mut out = Vec::new();
            for x in 0..p {
                for y in 0..p {
                    for z in 0..p {
                        out.push(vec![vec![x, y], vec![y, z]]);
                    }
                }
            }
            out
        }
    }
}

/// True iff every defining relation holds to [`TOLERANCE`]; see
/// [`relation_report`] for the residuals.
pub fn relation_suite(model: &FiniteWeilModel) -> Result<bool> {
    Ok(relation_report(model)?.passed)
}

/// Verify the projective-representation relations of the model.
pub fn relation_report(model: &FiniteWeilModel) -> Result<RelationReport> {
    let p = model.p();
    let w = op_weyl(model);
    let mut conjugation = 0.0f64;
    let mut weyl_levi = 0.0f64;
    let mut unitarity = 0.0f64;

    // Monomial generators: unitarity is "one modulus-1 entry per row/column".
    for a in invertible_levi_parameters(model) {
        let ma = op_levi(model, &a)?;
        unitarity = unitarity.max(monomial_unitarity_defect(&ma));
        // Levi ↔ unipotent conjugation, exact.
        let ma_inv = op_levi(model, &inverse_mod(&a, p)?)?;
        for b in symmetric_parameters(model) {
            let expected = mat_mul_mod(&mat_mul_mod(&a, &b, p), &transpose_mod(&a), p);
            let lhs = ma.mul(&op_unipotent(model, &b)?).mul(&ma_inv);
            conjugation = conjugation.max(lhs.distance(&op_unipotent(model, &expected)?));
        }
        // Weyl conjugation, up to phase: w·m(a) ∝ m(ᵗa^{−1})·w.
        let dual = op_levi(model, &inverse_mod(&transpose_mod(&a), p)?)?;
        weyl_levi = weyl_levi.max(w.mul(&ma).distance_up_to_phase(&dual.mul(&w)));
    }
    for b in symmetric_parameters(model) {
        unitarity = unitarity.max(monomial_unitarity_defect(&op_unipotent(model, &b)?));
    }

    // Weyl unitarity on deterministic pseudo-random states.
    let mut rng = crate::selftest::seeded_rng();
    for _ in 0..20 {
        let phi = random_schwartz(model, &mut rng);
        let norm: f64 = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let moved = w.apply(&phi);
        let norm_moved: f64 = moved.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        unitarity = unitarity.max((norm - norm_moved).abs());
        let back = w.apply_adjoint(&moved);
        let defect = back
            .iter()
            .zip(&phi)
            .map(|(&a, &b)| (a - b).norm())
            .fold(0.0, f64::max);
        unitarity = unitarity.max(defect);
    }

    // Braid-type relation.
    let braid = match model.rank() {
        1 => {
            let a = w.mul(&op_unipotent(model, &vec![vec![1]])?);
            let cubed = a.mul(&a).mul(&a);
            cubed.distance_up_to_phase(&OperatorMatrix::identity(model.state_dim()))
        }
        _ => {
            let minus = vec![vec![p - 1, 0], vec![0, p - 1]];
            w.mul(&w).distance_up_to_phase(&op_levi(model, &minus)?)
        }
    };

    let passed = conjugation <= TOLERANCE
        && weyl_levi <= TOLERANCE
        && braid <= TOLERANCE
        && unitarity <= TOLERANCE;
    Ok(RelationReport { conjugation, weyl_levi, braid, unitarity, tolerance: TOLERANCE, passed })
}

fn monomial_unitarity_defect(op: &OperatorMatrix) -> f64 {
    // Each row and each column must hold exactly one entry, of modulus 1.
    let dim = op.dim();
    let mut col_seen = vec![false; dim];
    let mut defect = 0.0f64;
    for row in &op.entries {
        let mut found = None;
        for (j, &a) in row.iter().enumerate() {
            if a.norm_sqr() > 0.0 {
                if found.is_some() || col_seen[j] {
                    return 1.0; // not monomial at all
                }
                found = Some(j);
                col_seen[j] = true;
                defect = defect.max((a.norm() - 1.0).abs());
            }
        }
        if found.is_none() {
            return 1.0;
        }
    }
    defect
}

/// Sample an invertible `n×n` matrix mod `p` by rejection.
fn random_invertible<R: Rng>(model: &FiniteWeilModel, rng: &mut R) -> FpMatrix {
    let (p, n) = (model.p(), model.rank());
    loop {
        let a: FpMatrix =
            (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
        if det_mod(&a, p) != 0 {
            return a;
        }
    }
}

fn random_symmetric<R: Rng>(model: &FiniteWeilModel, rng: &mut R) -> FpMatrix {
    let (p, n) = (model.p(), model.rank());
    let mut b = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(0..p);
            b[i][j] = x;
            b[j][i] = x;
        }
    }
    b
}

/// Homomorphism-up-to-scalar on random generator words: multiply `length ≤ 4`
/// random Levi/unipotent operators and compare against the operator of the
/// normal form `m(A)·n(B)` obtained by the conjugation rewrite
/// `n(b)·m(a) = m(a)·n(ᵗa·b·a)`. Returns the max residual over `words` draws.
pub fn homomorphism_words_check<R: Rng>(
    model: &FiniteWeilModel,
    words: usize,
    rng: &mut R,
) -> Result<f64> {
    let p = model.p();
    let n = model.rank();
    let identity: FpMatrix =
        (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
    let mut residual = 0.0f64;
    for _ in 0..words {
        let length = rng.gen_range(1..=4usize);
        let mut product = OperatorMatrix::identity(model.state_dim());
        let mut levi = identity.clone();
        let mut unip = vec![vec![0u64; n]; n];
        for _ in 0..length {
            if rng.gen_bool(0.5) {
                let a = random_invertible(model, rng);
                product = product.mul(&op_levi(model, &a)?);
                // n(U)·m(a) = m(a)·n(a⁻¹·U·ᵗa⁻¹), so
                // m(L)n(U)·m(a) = m(L·a)·n(a⁻¹·U·ᵗa⁻¹).
                let inv = inverse_mod(&a, p)?;
                levi = mat_mul_mod(&levi, &a, p);
                unip = mat_mul_mod(&mat_mul_mod(&inv, &unip, p), &transpose_mod(&inv), p);
            } else {
                let b = random_symmetric(model, rng);
                product = product.mul(&op_unipotent(model, &b)?);
                for (urow, brow) in unip.iter_mut().zip(&b) {
                    for (u, &x) in urow.iter_mut().zip(brow) {
                        *u = (*u + x) % p;
                    }
                }
            }
        }
        let normal = op_levi(model, &levi)?.mul(&op_unipotent(model, &unip)?);
        residual = residual.max(product.distance_up_to_phase(&normal));
    }
    Ok(residual)
}

/// The theta functional `Θ(φ) = Σ_v φ(v)`.
pub fn theta_sum(model: &FiniteWeilModel, phi: &FiniteSchwartz) -> Result<Complex64> {
    if phi.len() != model.state_dim() {
        return Err(Error::Dimension(format!(
            "state vector has length {}, model needs {}",
            phi.len(),
            model.state_dim()
        )));
    }
    Ok(phi.iter().sum())
}

/// Direct level-set sum `Σ_{Gram(v) = β} φ(v)` — the enumeration baseline.
pub fn level_set_sum(
    model: &FiniteWeilModel,
    phi: &FiniteSchwartz,
    beta: &FpMatrix,
) -> Result<Complex64> {
    if phi.len() != model.state_dim() {
        return Err(Error::Dimension("state vector length mismatch".into()));
    }
    if beta.len() != model.rank() || !is_symmetric(beta, model.p()) {
        return Err(Error::Invalid("β must be symmetric n×n".into()));
    }
    let p = model.p();
    let reduced: FpMatrix =
        beta.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (idx, &value) in phi.iter().enumerate() {
        if model.gram_tuple(&model.point(idx)) == reduced {
            total += value;
        }
    }
    Ok(total)
}

/// The `ψ_β`-Fourier coefficient
/// `p^{−n(n+1)/2}·Σ_b ψ(−tr(bβ))·Θ(ω(n(b))φ)`, which collapses to the
/// level-set sum by orthogonality of characters.
pub fn fourier_coefficient(
    model: &FiniteWeilModel,
    phi: &FiniteSchwartz,
    beta: &FpMatrix,
) -> Result<Complex64> {
    if phi.len() != model.state_dim() {
        return Err(Error::Dimension("state vector length mismatch".into()));
    }
    if beta.len() != model.rank() || !is_symmetric(beta, model.p()) {
        return Err(Error::Invalid("β must be symmetric n×n".into()));
    }
    let p = model.p();
    let n = model.rank();
    let mut total = Complex64::new(0.0, 0.0);
    for b in symmetric_parameters(model) {
        let trace = (0..n).fold(0u64, |acc, i| {
            (0..n).fold(acc, |acc2, j| (acc2 + b[i][j] * (beta[j][i] % p)) % p)
        });
        // Apply the diagonal operator without materializing it.
        let mut twisted = Complex64::new(0.0, 0.0);
        for (idx, &value) in phi.iter().enumerate() {
            let gram = model.gram_tuple(&model.point(idx));
            let tr_bg = (0..n).fold(0u64, |acc, i| {
                (0..n).fold(acc, |acc2, j| (acc2 + b[i][j] * gram[j][i]) % p)
            });
            twisted += model.psi(tr_bg) * value;
        }
        total += model.psi((p - trace % p) % p) * twisted;
    }
    Ok(total / (p as f64).powi((n * (n + 1) / 2) as i32))
}

/// Enumerate `O(q̄)(F_p)` as matrices, by closure from all hyperplane
/// reflections (errors out at [`MAX_GROUP_ORDER`]).
pub fn orthogonal_group(model: &FiniteWeilModel) -> Result<Vec<FpMatrix>> {
    let p = model.p();
    let m = model.form_dim();
    let points = (p as usize).pow(m as u32);
    let mut generators: Vec<FpMatrix> = Vec::new();
    for idx in 1..points {
        let mut rest = idx;
        let mut u = vec![0u64; m];
        for x in u.iter_mut() {
            *x = (rest as u64) % p;
            rest /= p as usize;
        }
        let qu = model.bilinear(&u, &u);
        if qu == 0 {
            continue;
        }
        let qu_inv = pow_mod(qu, p - 2, p);
        // τ_u(e_k) = e_k − (2·b(e_k,u)/q(u))·u.
        let mut mat = vec![vec![0u64; m]; m];
        for k in 0..m {
            let mut ek = vec![0u64; m];
            ek[k] = 1;
            let factor = 2 * model.bilinear(&ek, &u) % p * qu_inv % p;
            for (i, row) in mat.iter_mut().enumerate() {
                let mut entry = u64::from(i == k);
                entry = (entry + (p - factor * u[i] % p) % p) % p;
                row[k] = entry;
            }
        }
        if !generators.contains(&mat) {
            generators.push(mat);
        }
    }
    let mut seen: BTreeSet<FpMatrix> = BTreeSet::new();
    let identity: FpMatrix =
        (0..m).map(|i| (0..m).map(|j| u64::from(i == j)).collect()).collect();
    let mut queue = VecDeque::from([identity.clone()]);
    seen.insert(identity);
    while let Some(g) = queue.pop_front() {
        for r in &generators {
            let next = mat_mul_mod(r, &g, p);
            if seen.insert(next.clone()) {
                if seen.len() > MAX_GROUP_ORDER {
                    return Err(Error::GroupCapExceeded(MAX_GROUP_ORDER));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Witt transitivity at the model: true iff the level set
/// `{v : Gram(v) = β}` is a single `O(q̄)(F_p)`-orbit (vacuously true when
/// empty). `β` must be nondegenerate.
pub fn orbit_transitivity_check(model: &FiniteWeilModel, beta: &FpMatrix) -> Result<bool> {
    let p = model.p();
    if beta.len() != model.rank() || !is_symmetric(beta, p) {
        return Err(Error::Invalid("β must be symmetric n×n".into()));
    }
    if det_mod(beta, p) == 0 {
        return Err(Error::Degenerate("orbit check needs nondegenerate β".into()));
    }
    let reduced: FpMatrix =
        beta.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let level_set: BTreeSet<usize> = (0..model.state_dim())
        .filter(|&idx| model.gram_tuple(&model.point(idx)) == reduced)
        .collect();
    let Some(&start) = level_set.iter().next() else {
        return Ok(true);
    };
    let group = orthogonal_group(model)?;
    let mut orbit: BTreeSet<usize> = BTreeSet::new();
    for g in &group {
        let tuple = model.point(start);
        let moved: Vec<Vec<u64>> = tuple
            .iter()
            .map(|v| {
                (0..model.form_dim())
                    .map(|i| {
                        (0..model.form_dim())
                            .fold(0u64, |acc, j| (acc + g[i][j] * v[j]) % p)
                    })
                    .collect()
            })
            .collect();
        orbit.insert(model.index(&moved));
    }
    Ok(orbit == level_set)
}

/// A deterministic pseudo-random state with entries in the unit square.
pub fn random_schwartz<R: Rng>(model: &FiniteWeilModel, rng: &mut R) -> FiniteSchwartz {
    (0..model.state_dim())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Count solutions of `Gram(v) = β` by enumeration (used in reports).
pub fn level_set_count(model: &FiniteWeilModel, beta: &FpMatrix) -> Result<usize> {
    let p = model.p();
    if beta.len() != model.rank() || !is_symmetric(beta, p) {
        return Err(Error::Invalid("β must be symmetric n×n".into()));
    }
    let reduced: FpMatrix =
        beta.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    Ok((0..model.state_dim())
        .filter(|&idx| model.gram_tuple(&model.point(idx)) == reduced)
        .count())
}

/// Per-model pass/fail summary used by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub p: u64,
    pub diag: Vec<u64>,
    pub n: usize,
    pub relations: RelationReport,
    /// Max |fourier − level-set| over random states.
    pub fourier_residual: f64,
    /// Max residual of the random generator-word homomorphism check.
    pub word_residual: f64,
    /// Orbit transitivity over all nondegenerate β (rank 1: all units).
    pub transitive: bool,
    pub passed: bool,
}

/// Run every check of one model: relations, Fourier-vs-enumeration on
/// `samples` random states, and orbit transitivity for each nondegenerate
/// scalar class (rank 1) or a diagonal family (rank 2).
pub fn model_report(model: &FiniteWeilModel, samples: usize) -> Result<ModelReport> {
    let relations = relation_report(model)?;
    let mut rng = crate::selftest::seeded_rng();
    let p = model.p();
    let mut fourier_residual = 0.0f64;
    let betas: Vec<FpMatrix> = match model.rank() {
        1 => (1..p).map(|x| vec![vec![x]]).collect(),
        _ => {
            let mut out = Vec::new();
            for x in 1..p {
                for z in 1..p {
                    out.push(vec![vec![x, 0], vec![0, z]]);
                }
            }
            out
        }
    };
    for _ in 0..samples {
        let phi = random_schwartz(model, &mut rng);
        for beta in &betas {
            let lhs = fourier_coefficient(model, &phi, beta)?;
            let rhs = level_set_sum(model, &phi, beta)?;
            fourier_residual = fourier_residual.max((lhs - rhs).norm());
        }
    }
    let mut transitive = true;
    for beta in &betas {
        transitive &= orbit_transitivity_check(model, beta)?;
    }
    let word_residual = homomorphism_words_check(model, 100, &mut rng)?;
    let passed = relations.passed
        && fourier_residual <= TOLERANCE
        && word_residual <= TOLERANCE
        && transitive;
    Ok(ModelReport {
        p,
        diag: (0..model.form_dim()).map(|i| model.diag[i]).collect(),
        n: model.rank(),
        relations,
        fourier_residual,
        word_residual,
        transitive,
        passed,
    })
}
