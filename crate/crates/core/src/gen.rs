//! Seeded generators of structured matrices and instances satisfying the
//! hypotheses of each checked result.
//!
//! Every instance is a pure function of its seed. Per-instance seeds are
//! derived from `(master seed, family, index)` with [`derive_seed`], so
//! batches can be generated in any order or in parallel.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::block4::{check_thm_4_2, check_thm_4_4, AdjointHypotheses, BlockMatrix2x2};
use crate::error::{Error, Result};
use crate::inverse::{core_inverse, group_probe};
use crate::matrix::{ComplexMatrix, Tolerance, C64};
use crate::suite::check_instance;
use crate::verdict::{TheoremId, TheoremVerdict};

pub type GenRng = ChaCha8Rng;

/// Condition-number cap for random invertible factors.
pub const COND_CAP: f64 = 1e6;

const REDRAWS: usize = 64;
const BLOCK_SEARCH_BUDGET: usize = 24;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a, used to turn family and suite names into stable seed streams.
pub fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index)
}

pub fn rng_from_seed(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Batch parameters. Dimensions are drawn uniformly from `dim_range`, ranks
/// from `rank_range` clipped to the drawn dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub dim_range: (usize, usize),
    pub rank_range: (usize, usize),
    pub count: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            dim_range: (1, 8),
            rank_range: (0, usize::MAX),
            count: 1,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        let (lo, hi) = self.dim_range;
        if lo == 0 || lo > hi {
            return Err(format!("invalid dimension range {lo}..{hi}"));
        }
        if self.rank_range.0 > self.rank_range.1 {
            return Err(format!("invalid rank range {}..{}", self.rank_range.0, self.rank_range.1));
        }
        if self.count == 0 {
            return Err("count must be positive".into());
        }
        Ok(())
    }

    /// Draws `(n, r)` for one instance.
    pub fn draw(&self, rng: &mut GenRng) -> (usize, usize) {
        let n = rng.random_range(self.dim_range.0..=self.dim_range.1);
        let lo = self.rank_range.0.min(n);
        let hi = self.rank_range.1.min(n);
        (n, rng.random_range(lo..=hi))
    }
}

/// Instance families, one per shape of hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `S diag(K, 0) S^-1`.
    CoreInvertible,
    /// `U diag(K, 0) U*`.
    Ep,
    /// Double-commuting core-invertible pairs.
    DoubleCommuting,
    /// Double-commuting pairs with `a` EP.
    DoubleCommutingEp,
    /// `a` EP and `b` block lower triangular in the frame of `a`.
    EpTriangular,
    /// Two EP matrices on overlapping orthogonal subspaces.
    EpOverlap,
    /// As [`Family::EpOverlap`] with `aa^# b = bb^# a`.
    EpOverlapEqual,
    /// `ab = 0 = a*b`.
    Orthogonal,
    /// Oblique idempotent `p` with `p a p^pi = 0`.
    ObliquePierce,
    /// Core-invertible `a` with `b` often in the range of `a`.
    CoreRange,
    /// Projection `p` with a triangular `a` meeting the corner conditions.
    Triangular,
    /// Pairs `(B, C)` with `B(CB)^pi = 0 = C(BC)^pi`.
    Antidiag,
    Block4,
    Block4Single,
    Block4Swapped,
    Block4SingleSwapped,
}

impl Family {
    pub const ALL: [Family; 16] = [
        Family::CoreInvertible,
        Family::Ep,
        Family::DoubleCommuting,
        Family::DoubleCommutingEp,
        Family::EpTriangular,
        Family::EpOverlap,
        Family::EpOverlapEqual,
        Family::Orthogonal,
        Family::ObliquePierce,
        Family::CoreRange,
        Family::Triangular,
        Family::Antidiag,
        Family::Block4,
        Family::Block4Single,
        Family::Block4Swapped,
        Family::Block4SingleSwapped,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::CoreInvertible => "core-invertible",
            Family::Ep => "ep",
            Family::DoubleCommuting => "double-commuting",
            Family::DoubleCommutingEp => "double-commuting-ep",
            Family::EpTriangular => "ep-triangular",
            Family::EpOverlap => "ep-overlap",
            Family::EpOverlapEqual => "ep-overlap-equal",
            Family::Orthogonal => "orthogonal",
            Family::ObliquePierce => "oblique-pierce",
            Family::CoreRange => "core-range",
            Family::Triangular => "triangular",
            Family::Antidiag => "antidiag",
            Family::Block4 => "block4",
            Family::Block4Single => "block4-single",
            Family::Block4Swapped => "block4-swapped",
            Family::Block4SingleSwapped => "block4-single-swapped",
        }
    }

    pub fn for_theorem(id: TheoremId) -> Family {
        use TheoremId::*;
        match id {
            Lemma2_1 => Family::ObliquePierce,
            Lemma2_2 => Family::CoreRange,
            Lemma2_3 => Family::Triangular,
            Theorem2_4 => Family::EpTriangular,
            Corollary2_5 | Corollary3_5 => Family::DoubleCommutingEp,
            Theorem2_6 => Family::EpOverlap,
            Corollary2_7 => Family::EpOverlapEqual,
            Lemma3_1 | Lemma3_3 | Theorem3_4 => Family::DoubleCommuting,
            Lemma3_2 => Family::Orthogonal,
            Lemma4_1 => Family::Antidiag,
            Theorem4_2 => Family::Block4,
            Theorem4_4 => Family::Block4Single,
            Corollary4_3 => Family::Block4Swapped,
            Corollary4_5 => Family::Block4SingleSwapped,
        }
    }

    /// The checker whose hypotheses every instance of the family satisfies.
    pub fn theorem(self) -> Option<TheoremId> {
        use TheoremId::*;
        Some(match self {
            Family::CoreInvertible | Family::Ep => return None,
            Family::DoubleCommuting => Theorem3_4,
            Family::DoubleCommutingEp => Corollary3_5,
            Family::EpTriangular => Theorem2_4,
            Family::EpOverlap => Theorem2_6,
            Family::EpOverlapEqual => Corollary2_7,
            Family::Orthogonal => Lemma3_2,
            Family::ObliquePierce => Lemma2_1,
            Family::CoreRange => Lemma2_2,
            Family::Triangular => Lemma2_3,
            Family::Antidiag => Lemma4_1,
            Family::Block4 => Theorem4_2,
            Family::Block4Single => Theorem4_4,
            Family::Block4Swapped => Corollary4_3,
            Family::Block4SingleSwapped => Corollary4_5,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    /// Accepts family names and theorem ids.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(f) = Family::ALL.into_iter().find(|f| f.as_str() == s) {
            return Ok(f);
        }
        s.parse::<TheoremId>()
            .map(Family::for_theorem)
            .map_err(|_| format!("unknown family `{s}`"))
    }
}

/// A generated instance: the matrices a checker takes.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Single(ComplexMatrix),
    Pair { a: ComplexMatrix, b: ComplexMatrix },
    Pierce { p: ComplexMatrix, a: ComplexMatrix },
    Antidiag { b: ComplexMatrix, c: ComplexMatrix },
    Block(BlockMatrix2x2),
}

impl Instance {
    /// Named matrices, in a fixed order.
    pub fn matrices(&self) -> Vec<(&'static str, &ComplexMatrix)> {
        match self {
            Instance::Single(a) => vec![("a", a)],
            Instance::Pair { a, b } => vec![("a", a), ("b", b)],
            Instance::Pierce { p, a } => vec![("p", p), ("a", a)],
            Instance::Antidiag { b, c } => vec![("B", b), ("C", c)],
            Instance::Block(m) => vec![("A", &m.a), ("B", &m.b), ("C", &m.c), ("D", &m.d)],
        }
    }

    /// The matrix whose normality is reported in coverage statistics.
    pub fn lead(&self) -> &ComplexMatrix {
        self.matrices()[0].1
    }
}

// ---------------------------------------------------------------- primitives

/// Complex Gaussian with unit variance.
pub fn gaussian(rng: &mut GenRng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix(rng: &mut GenRng, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, gaussian(rng));
        }
    }
    m
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(rng: &mut GenRng, n: usize) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let g = random_matrix(rng, n, n);
    let qr = g.as_dmatrix().clone().qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_dmatrix(q)
}

fn condition(m: &ComplexMatrix) -> f64 {
    let s = m.singular_values();
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// Gaussian matrix re-drawn until its condition number is at most
/// [`COND_CAP`]; falls back to a unitary after [`REDRAWS`] attempts.
pub fn random_invertible(rng: &mut GenRng, n: usize) -> ComplexMatrix {
    for _ in 0..REDRAWS {
        let m = random_matrix(rng, n, n);
        if condition(&m) <= COND_CAP {
            return m;
        }
    }
    random_unitary(rng, n)
}

fn inv(m: &ComplexMatrix) -> ComplexMatrix {
    m.inverse(Tolerance::default()).expect("factor is well conditioned")
}

/// `s x s^-1`.
fn similar(s: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    crate::matrix::chain(&[s, x, &inv(s)])
}

/// `u x u*`.
fn congruent(u: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    crate::matrix::chain(&[u, x, &u.adjoint()])
}

fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    blocks
        .iter()
        .fold(ComplexMatrix::zeros(0, 0), |acc, b| acc.direct_sum(b))
}

fn zeros(n: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(n, n)
}

fn strictly_upper(rng: &mut GenRng, k: usize) -> ComplexMatrix {
    let mut m = zeros(k);
    for i in 0..k {
        for j in i + 1..k {
            m.set(i, j, gaussian(rng));
        }
    }
    m
}

/// Sizes of consecutive diagonal blocks summing to `n`.
fn partition(rng: &mut GenRng, n: usize, max_block: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let k = rng.random_range(1..=left.min(max_block));
        sizes.push(k);
        left -= k;
    }
    sizes
}

fn random_rank(rng: &mut GenRng, n: usize) -> usize {
    rng.random_range(0..=n)
}

fn nonzero_scalar(rng: &mut GenRng) -> C64 {
    loop {
        let z = gaussian(rng);
        if z.norm() > 0.1 {
            return z;
        }
    }
}

// ---------------------------------------------------------------- matrices

fn core_invertible_with(rng: &mut GenRng, n: usize, r: usize) -> ComplexMatrix {
    let r = r.min(n);
    let s = random_invertible(rng, n);
    let k = random_invertible(rng, r);
    similar(&s, &k.direct_sum(&zeros(n - r)))
}

fn ep_with(rng: &mut GenRng, n: usize, r: usize) -> ComplexMatrix {
    let r = r.min(n);
    let u = random_unitary(rng, n);
    let k = random_invertible(rng, r);
    congruent(&u, &k.direct_sum(&zeros(n - r)))
}

/// `A = S diag(K, 0) S^-1` with rank `min(r, n)`.
pub fn gen_core_invertible(n: usize, r: usize, seed: u64) -> ComplexMatrix {
    core_invertible_with(&mut rng_from_seed(seed), n, r)
}

/// `A = U diag(K, 0) U*` with `U` unitary, rank `min(r, n)`.
pub fn gen_ep(n: usize, r: usize, seed: u64) -> ComplexMatrix {
    ep_with(&mut rng_from_seed(seed), n, r)
}

// ---------------------------------------------------------------- pairs

/// One diagonal block of a double-commuting pair: one side is a scalar
/// multiple of the identity, the other an arbitrary core-invertible block
/// (EP when `ep_a` and the block belongs to `a`).
fn commuting_block(rng: &mut GenRng, k: usize, ep_a: bool) -> (ComplexMatrix, ComplexMatrix) {
    let scalar = |rng: &mut GenRng| {
        if rng.random_bool(0.25) {
            C64::new(0.0, 0.0)
        } else {
            nonzero_scalar(rng)
        }
    };
    let id = ComplexMatrix::identity(k);
    if rng.random_bool(0.5) {
        // a = lambda I
        let lambda = scalar(rng);
        let b = if lambda.norm() > 0.0 && k > 1 && rng.random_bool(0.3) {
            // a + b nilpotent on this block
            let s = random_invertible(rng, k);
            similar(&s, &(&id.scale(-lambda) + &strictly_upper(rng, k)))
        } else {
            let r = random_rank(rng, k);
            core_invertible_with(rng, k, r)
        };
        (id.scale(lambda), b)
    } else {
        // b = mu I
        let mu = scalar(rng);
        let r = random_rank(rng, k);
        let core = if mu.norm() > 0.0 && r > 1 && rng.random_bool(0.3) {
            let j = rng.random_range(2..=r);
            let shifted = &ComplexMatrix::identity(j).scale(-mu) + &strictly_upper(rng, j);
            shifted.direct_sum(&random_invertible(rng, r - j))
        } else {
            random_invertible(rng, r)
        };
        let padded = core.direct_sum(&zeros(k - r));
        let a = if ep_a {
            congruent(&random_unitary(rng, k), &padded)
        } else {
            similar(&random_invertible(rng, k), &padded)
        };
        (a, id.scale(mu))
    }
}

fn double_commuting_with(rng: &mut GenRng, n: usize, ep_a: bool) -> (ComplexMatrix, ComplexMatrix) {
    let sizes = partition(rng, n, 3);
    let (a_blocks, b_blocks): (Vec<_>, Vec<_>) = sizes.iter().map(|&k| commuting_block(rng, k, ep_a)).unzip();
    let u = random_unitary(rng, n);
    (congruent(&u, &block_diag(&a_blocks)), congruent(&u, &block_diag(&b_blocks)))
}

/// `a = U diag(a_1, ..., a_k) U*`, `b = U diag(b_1, ..., b_k) U*` where in
/// each block one of `a_j`, `b_j` is a scalar multiple of the identity and
/// the other is core invertible. Blocks of size one give the commuting
/// diagonal pairs; larger blocks give non-normal pairs.
pub fn gen_double_commuting_pair(n: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    double_commuting_with(&mut rng_from_seed(seed), n, false)
}

/// As [`gen_double_commuting_pair`] with `a` EP.
pub fn gen_double_commuting_ep_pair(n: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    double_commuting_with(&mut rng_from_seed(seed), n, true)
}

fn is_group_invertible_decisively(m: &ComplexMatrix) -> bool {
    group_probe(m, Tolerance::default())
        .map(|p| p.invertible && !p.borderline && !p.ill_conditioned())
        .unwrap_or(false)
}

fn thm_2_4_with(rng: &mut GenRng, n: usize, r: usize, b4_invertible: bool) -> (ComplexMatrix, ComplexMatrix) {
    let r = r.min(n);
    let m = n - r;
    let u = random_unitary(rng, n);
    let k = random_invertible(rng, r);
    let a = congruent(&u, &k.direct_sum(&zeros(m)));
    let b4 = if b4_invertible {
        random_invertible(rng, m)
    } else {
        let rb = random_rank(rng, m);
        core_invertible_with(rng, m, rb)
    };
    for _ in 0..REDRAWS {
        let b1 = match rng.random_range(0..4) {
            0 | 1 => random_invertible(rng, r),
            2 => &(-&k) + &similar(&random_invertible(rng, r), &strictly_upper(rng, r)),
            _ => {
                let rb = random_rank(rng, r);
                core_invertible_with(rng, r, rb)
            }
        };
        let b3 = if rng.random_bool(0.25) {
            ComplexMatrix::zeros(m, r)
        } else {
            random_matrix(rng, m, r)
        };
        let b = congruent(&u, &ComplexMatrix::from_blocks(&b1, &ComplexMatrix::zeros(r, m), &b3, &b4));
        if is_group_invertible_decisively(&b) {
            return (a, b);
        }
    }
    (a, congruent(&u, &zeros(r).direct_sum(&b4)))
}

/// `a = U diag(K, 0) U*` of rank `r` and
/// `b = U [[b1, 0], [b3, b4]] U*` group invertible with `b4` group
/// invertible, so that `a b a^pi = 0` and `b a^pi = U diag(0, b4) U*`.
pub fn gen_thm_2_4_instance(n: usize, r: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    thm_2_4_with(&mut rng_from_seed(seed), n, r, false)
}

/// Splits `n` into four parts, each possibly empty.
fn four_parts(rng: &mut GenRng, n: usize) -> [usize; 4] {
    let mut parts = [0; 4];
    for _ in 0..n {
        parts[rng.random_range(0..4)] += 1;
    }
    parts
}

/// `a` EP supported on `E1 + E2` and `b` EP supported on `E2 + E3` for an
/// orthogonal decomposition `E1 + E2 + E3 + E4`:
/// `a = [[A11, A12], [0, A22]]` on `(E1, E2)` and
/// `b = [[L22, 0], [L32, L33]]` on `(E2, E3)`, all diagonal blocks
/// invertible. `equal` forces `L22 = A22`, i.e. `aa^# b = bb^# a`.
fn ep_overlap_with(rng: &mut GenRng, n: usize, equal: bool) -> (ComplexMatrix, ComplexMatrix) {
    let [n1, n2, n3, n4] = four_parts(rng, n);
    let u = random_unitary(rng, n);
    let a11 = random_invertible(rng, n1);
    let a22 = random_invertible(rng, n2);
    let a12 = random_matrix(rng, n1, n2);
    let l22 = if equal {
        a22.clone()
    } else if n2 > 1 && rng.random_bool(0.3) {
        let mut shifted = &(-&a22) + &similar(&random_invertible(rng, n2), &strictly_upper(rng, n2));
        for _ in 0..REDRAWS {
            if condition(&shifted) <= COND_CAP {
                break;
            }
            shifted = &(-&a22) + &similar(&random_invertible(rng, n2), &strictly_upper(rng, n2));
        }
        if condition(&shifted) <= COND_CAP {
            shifted
        } else {
            random_invertible(rng, n2)
        }
    } else {
        random_invertible(rng, n2)
    };
    let l33 = random_invertible(rng, n3);
    let l32 = random_matrix(rng, n3, n2);

    let mut a = zeros(n);
    let mut b = zeros(n);
    let put = |m: &mut ComplexMatrix, i0: usize, j0: usize, x: &ComplexMatrix| {
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                m.set(i0 + i, j0 + j, x.get(i, j));
            }
        }
    };
    let (e1, e2, e3) = (0, n1, n1 + n2);
    put(&mut a, e1, e1, &a11);
    put(&mut a, e1, e2, &a12);
    put(&mut a, e2, e2, &a22);
    put(&mut b, e2, e2, &l22);
    put(&mut b, e3, e2, &l32);
    put(&mut b, e3, e3, &l33);
    debug_assert_eq!(n1 + n2 + n3 + n4, n);
    (congruent(&u, &a), congruent(&u, &b))
}

pub fn gen_ep_overlap_pair(n: usize, equal: bool, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    ep_overlap_with(&mut rng_from_seed(seed), n, equal)
}

fn orthogonal_with(rng: &mut GenRng, n: usize, r: usize) -> (ComplexMatrix, ComplexMatrix) {
    let r = r.min(n);
    let w = random_unitary(rng, n);
    let rk = random_rank(rng, r);
    let k = core_invertible_with(rng, r, rk);
    let rl = random_rank(rng, n - r);
    let l = core_invertible_with(rng, n - r, rl);
    (
        congruent(&w, &k.direct_sum(&zeros(n - r))),
        congruent(&w, &zeros(r).direct_sum(&l)),
    )
}

/// `a = W diag(K, 0) W*`, `b = W diag(0, L) W*` with `K` of size `r` and
/// `K`, `L` core invertible, so `ab = 0 = a*b`.
pub fn gen_orthogonal_pair(n: usize, r: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    orthogonal_with(&mut rng_from_seed(seed), n, r)
}

fn core_range_with(rng: &mut GenRng, n: usize, r: usize) -> (ComplexMatrix, ComplexMatrix) {
    let a = core_invertible_with(rng, n, r);
    let w = random_matrix(rng, n, n);
    let b = match rng.random_range(0..4) {
        0 => {
            let ac = core_inverse(&a, Tolerance::default()).expect("core invertible by construction");
            crate::matrix::chain(&[&a, &ac, &w])
        }
        1 => &a * &w,
        2 => w,
        _ => zeros(n),
    };
    (a, b)
}

// ---------------------------------------------------------------- pierce

fn oblique_pierce_with(rng: &mut GenRng, n: usize, k: usize) -> (ComplexMatrix, ComplexMatrix) {
    let k = k.min(n);
    let m = n - k;
    let s = random_invertible(rng, n);
    let p = similar(&s, &ComplexMatrix::identity(k).direct_sum(&zeros(m)));
    let rk = random_rank(rng, k);
    let a11 = core_invertible_with(rng, k, rk);
    let rm = random_rank(rng, m);
    let a22 = core_invertible_with(rng, m, rm);
    for _ in 0..REDRAWS {
        let a21 = if rng.random_bool(0.5) {
            &a22 * &random_matrix(rng, m, k)
        } else {
            random_matrix(rng, m, k)
        };
        let a = similar(&s, &ComplexMatrix::from_blocks(&a11, &ComplexMatrix::zeros(k, m), &a21, &a22));
        if is_group_invertible_decisively(&a) {
            return (p, a);
        }
    }
    (p, similar(&s, &a11.direct_sum(&a22)))
}

/// `p = U diag(I_k, 0) U*` and `a = U [[a11, 0], [a22 Y, a22]] U*` with
/// `a11`, `a22` core invertible, so that `(ap^pi)^pi p^pi a p = 0`.
fn triangular_with(rng: &mut GenRng, n: usize, k: usize) -> (ComplexMatrix, ComplexMatrix) {
    let k = k.min(n);
    let m = n - k;
    let u = random_unitary(rng, n);
    let p = congruent(&u, &ComplexMatrix::identity(k).direct_sum(&zeros(m)));
    let rk = random_rank(rng, k);
    let a11 = core_invertible_with(rng, k, rk);
    let rm = random_rank(rng, m);
    let a22 = core_invertible_with(rng, m, rm);
    let y = if rng.random_bool(0.2) {
        ComplexMatrix::zeros(m, k)
    } else {
        random_matrix(rng, m, k)
    };
    let a = congruent(&u, &ComplexMatrix::from_blocks(&a11, &ComplexMatrix::zeros(k, m), &(&a22 * &y), &a22));
    (p, a)
}

// ---------------------------------------------------------------- blocks

/// `B = S diag(B1, 0) T`, `C = T^-1 diag(C1, 0) S^-1` with `B1`, `C1`
/// invertible of size `r`; re-drawn until `B` and `C` are group invertible.
fn antidiag_with(rng: &mut GenRng, n: usize, r: usize) -> (ComplexMatrix, ComplexMatrix) {
    let r = r.min(n);
    let pad = |x: ComplexMatrix| x.direct_sum(&zeros(n - r));
    let s = random_invertible(rng, n);
    let b1 = pad(random_invertible(rng, r));
    let c1 = pad(random_invertible(rng, r));
    let s_inv = inv(&s);
    for _ in 0..REDRAWS {
        let t = if rng.random_bool(0.5) { s_inv.clone() } else { random_invertible(rng, n) };
        let b = crate::matrix::chain(&[&s, &b1, &t]);
        let c = crate::matrix::chain(&[&inv(&t), &c1, &s_inv]);
        if is_group_invertible_decisively(&b) && is_group_invertible_decisively(&c) {
            return (b, c);
        }
    }
    (similar(&s, &b1), similar(&s, &c1))
}

pub fn gen_antidiag_pair(n: usize, r: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    antidiag_with(&mut rng_from_seed(seed), n, r)
}

/// Blocks in a common unitary frame: each diagonal block has either
/// `B_j = C_j = 0` with core-invertible `A_j`, `D_j`, or `A_j = D_j = 0`
/// with an antidiagonal pair `(B_j, C_j)` (sometimes `C_j = B_j*`).
fn block4_frame(rng: &mut GenRng, n: usize) -> BlockMatrix2x2 {
    let sizes = partition(rng, n, 3);
    let mut parts: [Vec<ComplexMatrix>; 4] = Default::default();
    for &k in &sizes {
        let blocks = if rng.random_bool(0.5) {
            let (ra, rd) = (random_rank(rng, k), random_rank(rng, k));
            [core_invertible_with(rng, k, ra), zeros(k), zeros(k), core_invertible_with(rng, k, rd)]
        } else if rng.random_bool(0.3) {
            let rb = random_rank(rng, k);
            let b = core_invertible_with(rng, k, rb);
            let c = b.adjoint();
            [zeros(k), b, c, zeros(k)]
        } else {
            let r = random_rank(rng, k);
            let (b, c) = antidiag_with(rng, k, r);
            [zeros(k), b, c, zeros(k)]
        };
        for (dst, m) in parts.iter_mut().zip(blocks) {
            dst.push(m);
        }
    }
    let u = random_unitary(rng, n);
    let [a, b, c, d] = parts.map(|v| congruent(&u, &block_diag(&v)));
    BlockMatrix2x2 { a, b, c, d }
}

fn unit_matrix(n: usize, k: usize) -> ComplexMatrix {
    let mut e = zeros(n);
    e.set(k % n, k / n, C64::new(1.0, 0.0));
    e
}

/// Basis of `(A, D)` pairs solving the linear commutation hypotheses for
/// fixed `B`, `C`, with `A W_a = 0` and `D W_d = 0`.
fn block_null_space(
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    wa: &ComplexMatrix,
    wd: &ComplexMatrix,
    adjoints: AdjointHypotheses,
) -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let n = b.rows();
    let (b_s, c_s) = (b.adjoint(), c.adjoint());
    let map = |a: &ComplexMatrix, d: &ComplexMatrix| -> Vec<ComplexMatrix> {
        let mut out = vec![&(a * b) - &(b * d), &(d * c) - &(c * a), &(&b_s * a) - &(d * &b_s)];
        if adjoints == AdjointHypotheses::Both {
            out.push(&(&c_s * d) - &(a * &c_s));
        }
        out.push(a * wa);
        out.push(d * wd);
        out
    };
    let unknowns = 2 * n * n;
    let columns: Vec<Vec<C64>> = (0..unknowns)
        .map(|k| {
            let (a, d) = if k < n * n {
                (unit_matrix(n, k), zeros(n))
            } else {
                (zeros(n), unit_matrix(n, k - n * n))
            };
            map(&a, &d).iter().flat_map(|m| m.entries()).collect()
        })
        .collect();
    let rows = columns[0].len().max(unknowns);
    let mut l = ComplexMatrix::zeros(rows, unknowns);
    for (j, col) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            l.set(i, j, *z);
        }
    }
    let svd = l.svd();
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let reshape = |v: &ComplexMatrix, j: usize, offset: usize| {
        let mut m = zeros(n);
        for k in 0..n * n {
            m.set(k % n, k / n, v.get(offset + k, j));
        }
        m
    };
    (0..unknowns)
        .filter(|&j| svd.sigma[j] <= 1e-10 * smax.max(1.0))
        .map(|j| (reshape(&svd.v, j, 0), reshape(&svd.v, j, n * n)))
        .collect()
}

fn block_hypotheses_decisive(v: &TheoremVerdict) -> bool {
    v.hypotheses_met() && !v.ill_conditioned && v.hypotheses.values().all(|c| !c.ambiguous)
}

fn check_block_hypotheses(m: &BlockMatrix2x2, adjoints: AdjointHypotheses) -> bool {
    let tol = Tolerance::default();
    let v = match adjoints {
        AdjointHypotheses::Both => check_thm_4_2(m, tol),
        AdjointHypotheses::Single => check_thm_4_4(m, tol),
    };
    v.map(|v| block_hypotheses_decisive(&v)).unwrap_or(false)
}

/// Randomized search for block matrices with `B`, `C` coupled to `A`, `D`:
/// a singular antidiagonal pair `(B, C)` is drawn, then `(A, D)` is drawn
/// from the solution space of the linear commutation hypotheses together
/// with `AB = 0` and a random kernel constraint on `D`, and accepted only if
/// all hypotheses verify directly.
///
/// The hypotheses force `A^core B = B D^core`, and then `B(CB)^pi = 0` makes
/// a nilpotent `A^core B D^core C` vanish; `AB = 0` is a linear way to
/// reach that.
pub fn gen_block4_search(n: usize, adjoints: AdjointHypotheses, seed: u64, budget: usize) -> Result<BlockMatrix2x2> {
    block4_search_with(&mut rng_from_seed(seed), n, adjoints, budget)
}

fn block4_search_with(rng: &mut GenRng, n: usize, adjoints: AdjointHypotheses, budget: usize) -> Result<BlockMatrix2x2> {
    for _ in 0..budget {
        let r = rng.random_range(1..n.max(2)).min(n);
        let (b, c) = antidiag_with(rng, n, r);
        let kd = rng.random_range(0..n);
        let wd = random_matrix(rng, n, kd);
        let basis = block_null_space(&b, &c, &b, &wd, adjoints);
        if basis.is_empty() {
            continue;
        }
        let mut a = zeros(n);
        let mut d = zeros(n);
        for (ba, bd) in &basis {
            let g = gaussian(rng);
            a = &a + &ba.scale(g);
            d = &d + &bd.scale(g);
        }
        let m = BlockMatrix2x2 { a, b, c, d };
        if check_block_hypotheses(&m, adjoints) {
            return Ok(m);
        }
    }
    Err(Error::GenerationExhausted {
        family: format!("block4 search ({adjoints:?})"),
        attempts: budget,
    })
}

fn block4_with(rng: &mut GenRng, n: usize, adjoints: AdjointHypotheses) -> BlockMatrix2x2 {
    if n >= 2 && rng.random_bool(0.5) {
        if let Ok(m) = block4_search_with(rng, n, adjoints, BLOCK_SEARCH_BUDGET) {
            return m;
        }
    }
    block4_frame(rng, n)
}

/// Block matrix with `n x n` blocks satisfying the hypotheses of the
/// block theorem with both adjoint conditions. Half the draws come from
/// [`gen_block4_search`]; the rest, and exhausted searches, from a common
/// unitary frame in which every block pair decouples.
pub fn gen_block4_instance(n: usize, seed: u64) -> BlockMatrix2x2 {
    block4_with(&mut rng_from_seed(seed), n, AdjointHypotheses::Both)
}

// ---------------------------------------------------------------- dispatch

/// Block families use blocks of size `max(1, n / 2)` so that the assembled
/// matrix has dimension close to `n`.
fn block_size(n: usize) -> usize {
    (n / 2).max(1)
}

/// Draws one instance of `family` with dimension `n` and rank parameter
/// `r`.
pub fn generate_with(rng: &mut GenRng, family: Family, n: usize, r: usize) -> Instance {
    let r = r.min(n);
    match family {
        Family::CoreInvertible => Instance::Single(core_invertible_with(rng, n, r)),
        Family::Ep => Instance::Single(ep_with(rng, n, r)),
        Family::DoubleCommuting => {
            let (a, b) = double_commuting_with(rng, n, false);
            Instance::Pair { a, b }
        }
        Family::DoubleCommutingEp => {
            let (a, b) = double_commuting_with(rng, n, true);
            Instance::Pair { a, b }
        }
        Family::EpTriangular => {
            let (a, b) = thm_2_4_with(rng, n, r, false);
            Instance::Pair { a, b }
        }
        Family::EpOverlap | Family::EpOverlapEqual => {
            let (a, b) = ep_overlap_with(rng, n, family == Family::EpOverlapEqual);
            Instance::Pair { a, b }
        }
        Family::Orthogonal => {
            let (a, b) = orthogonal_with(rng, n, r);
            Instance::Pair { a, b }
        }
        Family::CoreRange => {
            let (a, b) = core_range_with(rng, n, r);
            Instance::Pair { a, b }
        }
        Family::ObliquePierce => {
            let (p, a) = oblique_pierce_with(rng, n, r);
            Instance::Pierce { p, a }
        }
        Family::Triangular => {
            let (p, a) = triangular_with(rng, n, r);
            Instance::Pierce { p, a }
        }
        Family::Antidiag => {
            let (b, c) = antidiag_with(rng, n, r);
            Instance::Antidiag { b, c }
        }
        Family::Block4 => Instance::Block(block4_with(rng, block_size(n), AdjointHypotheses::Both)),
        Family::Block4Single => Instance::Block(block4_with(rng, block_size(n), AdjointHypotheses::Single)),
        Family::Block4Swapped => {
            Instance::Block(block4_with(rng, block_size(n), AdjointHypotheses::Both).swapped())
        }
        Family::Block4SingleSwapped => {
            Instance::Block(block4_with(rng, block_size(n), AdjointHypotheses::Single).swapped())
        }
    }
}

pub fn generate(family: Family, n: usize, r: usize, seed: u64) -> Instance {
    generate_with(&mut rng_from_seed(seed), family, n, r)
}

/// One generated instance with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub r: usize,
    pub instance: Instance,
}

/// The `index`-th instance of a batch.
pub fn generate_indexed(family: Family, cfg: &GenConfig, stream: u64, index: usize) -> Generated {
    let seed = derive_seed(cfg.seed, stream, index as u64);
    let mut rng = rng_from_seed(seed);
    let (n, r) = cfg.draw(&mut rng);
    let instance = generate_with(&mut rng, family, n, r);
    Generated { index, seed, n, r, instance }
}

/// `cfg.count` instances of `family`.
pub fn generate_batch(family: Family, cfg: &GenConfig) -> Vec<Generated> {
    let stream = name_hash(family.as_str());
    (0..cfg.count).map(|i| generate_indexed(family, cfg, stream, i)).collect()
}

// ---------------------------------------------------------------- near misses

fn near_miss_candidate(rng: &mut GenRng, family: Family, hypothesis: &str, n: usize) -> Option<Instance> {
    let n = n.max(2);
    match (family, hypothesis) {
        (Family::EpTriangular, "a b a^pi = 0") => {
            let r = rng.random_range(1..n);
            let (a, b) = thm_2_4_with(rng, n, r, true);
            // an upper-right block in the frame of a: a^pi = 1 - aa^#
            let ag = crate::inverse::group_inverse(&a, Tolerance::default()).ok()?;
            let range = &a * &ag;
            let x = random_matrix(rng, n, n);
            let extra = crate::matrix::chain(&[&range, &x, &range.complement()]);
            Some(Instance::Pair { a, b: &b + &extra })
        }
        (Family::EpTriangular, "a EP") => {
            let u = random_unitary(rng, n);
            let j = ComplexMatrix::real(2, 2, &[1.0, 1.0, 0.0, 0.0]).direct_sum(&zeros(n - 2));
            let a = congruent(&u, &j);
            let t = nonzero_scalar(rng);
            let b = a.complement().scale(t);
            Some(Instance::Pair { a, b })
        }
        (Family::Antidiag, "B(CB)^pi = 0") => {
            let r = rng.random_range(1..=n);
            let b = core_invertible_with(rng, n, r);
            Some(Instance::Antidiag { b, c: zeros(n) })
        }
        (Family::Block4, "B(CB)^pi = 0") => {
            let r = rng.random_range(1..=n);
            let b = core_invertible_with(rng, n, r);
            Some(Instance::Block(BlockMatrix2x2 {
                a: zeros(n),
                b,
                c: zeros(n),
                d: zeros(n),
            }))
        }
        (Family::DoubleCommuting | Family::DoubleCommutingEp, "a*b = ba*") => {
            let k = random_invertible(rng, n);
            let a = if family == Family::DoubleCommutingEp {
                congruent(&random_unitary(rng, n), &k)
            } else {
                similar(&random_invertible(rng, n), &k)
            };
            let b = &a + &ComplexMatrix::identity(n).scale(nonzero_scalar(rng));
            Some(Instance::Pair { a, b })
        }
        _ => None,
    }
}

/// An instance of `family` violating exactly the named hypothesis, with
/// every other hypothesis decisively met.
pub fn gen_near_miss(family: Family, hypothesis: &str, n: usize, seed: u64) -> Result<Instance> {
    let not_applicable = || Error::NotApplicable {
        family: family.as_str().into(),
        hypothesis: hypothesis.into(),
    };
    let theorem = family.theorem().ok_or_else(not_applicable)?;
    let mut rng = rng_from_seed(seed);
    let tol = Tolerance::default();
    for _ in 0..REDRAWS {
        let inst = near_miss_candidate(&mut rng, family, hypothesis, n).ok_or_else(not_applicable)?;
        let v = check_instance(theorem, &inst, tol)?;
        let isolated = v.hypotheses.iter().all(|(name, c)| {
            if name == hypothesis {
                c.decisive_failure()
            } else {
                c.holds && !c.ambiguous
            }
        });
        if isolated && v.hypotheses.contains_key(hypothesis) {
            return Ok(inst);
        }
    }
    Err(Error::GenerationExhausted {
        family: format!("{family} near miss for `{hypothesis}`"),
        attempts: REDRAWS,
    })
}
