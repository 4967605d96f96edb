//! Core inverses of 2x2 block matrices `M = [[A, B], [C, D]]` with square
//! blocks of equal size.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse::{core_probe, drazin_inverse, group_inverse, CoreProbe, InverseKind};
use crate::matrix::{chain, ComplexMatrix, Tolerance};
use crate::verdict::{ClaimForm, Condition, TheoremId, TheoremVerdict};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix2x2 {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
}

impl BlockMatrix2x2 {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix, d: ComplexMatrix) -> Result<Self> {
        let n = a.require_square()?;
        for m in [&b, &c, &d] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    op: "block matrix",
                    left: a.shape(),
                    right: m.shape(),
                });
            }
        }
        Ok(Self { a, b, c, d })
    }

    /// Splits a `2n x 2n` matrix into its four `n x n` blocks.
    pub fn split(m: &ComplexMatrix, n: usize) -> Result<Self> {
        if n == 0 || m.shape() != (2 * n, 2 * n) {
            return Err(Error::DimensionMismatch {
                op: "split",
                left: m.shape(),
                right: (2 * n, 2 * n),
            });
        }
        Ok(Self {
            a: m.block(0, 0, n, n),
            b: m.block(0, n, n, n),
            c: m.block(n, 0, n, n),
            d: m.block(n, n, n, n),
        })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn assemble(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&self.a, &self.b, &self.c, &self.d)
    }

    /// `[[D, C], [B, A]]`, unitarily similar to `M` through the block swap.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.a.clone(),
        }
    }

    /// `P = diag(A, D)`.
    pub fn diagonal_part(&self) -> ComplexMatrix {
        self.a.direct_sum(&self.d)
    }

    /// `Q = [[0, B], [C, 0]]`.
    pub fn antidiagonal_part(&self) -> ComplexMatrix {
        antidiag(&self.b, &self.c)
    }
}

fn antidiag(b: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    let n = b.rows();
    let z = ComplexMatrix::zeros(n, n);
    ComplexMatrix::from_blocks(&z, b, c, &z)
}

/// `1 - x x^D`, defined for every square matrix; exactly zero at index 0.
fn drazin_pi(x: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let d = drazin_inverse(x, tol)?;
    if d.index == 0 {
        return Ok(ComplexMatrix::zeros(x.rows(), x.cols()));
    }
    Ok((x * &d.inverse).complement())
}

/// `B (CB)^pi = 0` and `C (BC)^pi = 0`.
fn antidiag_conditions(b: &ComplexMatrix, c: &ComplexMatrix, tol: Tolerance) -> Result<(Condition, Condition)> {
    let cb_pi = drazin_pi(&(c * b), tol)?;
    let bc_pi = drazin_pi(&(b * c), tol)?;
    Ok((
        Condition::product_vanishes(&[b, &cb_pi], tol),
        Condition::product_vanishes(&[c, &bc_pi], tol),
    ))
}

/// Both block forms of `Q^core` and the block form of `Q^#` for
/// `Q = [[0, B], [C, 0]]`.
#[derive(Debug, Clone)]
pub struct AntidiagInverses {
    /// `[[0, (BC)^# B C C^core], [(CB)^# C B B^core, 0]]`
    pub core: ComplexMatrix,
    /// `[[0, B (CB)^# C C^core], [C (BC)^# B B^core, 0]]`
    pub core_alt: ComplexMatrix,
    /// `[[0, B (CB)^#], [C (BC)^#, 0]]`
    pub group: ComplexMatrix,
}

fn require_core(probe: &CoreProbe, m: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    probe.inverse.clone().filter(|_| probe.core_invertible()).ok_or_else(|| Error::NotCoreInvertible {
        rank: m.rank(tol),
        rank_sq: (m * m).rank(tol),
    })
}

pub fn antidiag_inverses(b: &ComplexMatrix, c: &ComplexMatrix, tol: Tolerance) -> Result<AntidiagInverses> {
    require_square_pair(b, c)?;
    let b_core = require_core(&core_probe(b, tol)?, b, tol)?;
    let c_core = require_core(&core_probe(c, tol)?, c, tol)?;
    let (left, right) = antidiag_conditions(b, c, tol)?;
    if !left.holds {
        return Err(Error::HypothesisNotMet(format!("B(CB)^pi != 0 (residual {:e})", left.residual)));
    }
    if !right.holds {
        return Err(Error::HypothesisNotMet(format!("C(BC)^pi != 0 (residual {:e})", right.residual)));
    }
    let bc = b * c;
    let cb = c * b;
    let bc_g = group_inverse(&bc, tol)?;
    let cb_g = group_inverse(&cb, tol)?;
    Ok(AntidiagInverses {
        core: antidiag(
            &chain(&[&bc_g, b, c, &c_core]),
            &chain(&[&cb_g, c, b, &b_core]),
        ),
        core_alt: antidiag(
            &chain(&[b, &cb_g, c, &c_core]),
            &chain(&[c, &bc_g, b, &b_core]),
        ),
        group: antidiag(&(b * &cb_g), &(c * &bc_g)),
    })
}

/// `Q^core` for `Q = [[0, B], [C, 0]]` when `B`, `C` are core invertible,
/// `B (CB)^pi = 0` and `C (BC)^pi = 0`.
pub fn antidiag_core_inverse(b: &ComplexMatrix, c: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    antidiag_inverses(b, c, tol).map(|f| f.core)
}

/// Scale-free nilpotency test: `|X^N| <= atol + rtol |X|^N` with `N` the
/// first power of two not below the dimension, evaluated on `X / |X|` by
/// repeated squaring.
pub fn nilpotency(x: &ComplexMatrix, tol: Tolerance) -> Condition {
    let Ok(n) = x.require_square() else {
        return Condition::flag(false);
    };
    let s = x.norm_fro();
    if n == 0 || s == 0.0 {
        return Condition::flag(true);
    }
    let mut y = x.scale_real(1.0 / s);
    let mut power = 1usize;
    while power < n {
        y = &y * &y;
        power *= 2;
    }
    let r = y.norm_fro();
    let threshold = tol.atol / s.powi(power as i32) + tol.rtol;
    Condition::decided(
        r <= threshold,
        r,
        r > threshold / 10.0 && r < threshold * 10.0,
    )
}

pub fn is_nilpotent(x: &ComplexMatrix, tol: Tolerance) -> bool {
    nilpotency(x, tol).holds
}

fn invertible(x: &ComplexMatrix, tol: Tolerance) -> Condition {
    let svd = x.svd();
    let smin = svd.sigma.last().copied().unwrap_or(1.0);
    let smax = svd.sigma.first().copied().unwrap_or(1.0);
    Condition::decided(
        svd.rank(tol) == x.rows(),
        if smax > 0.0 { smin / smax } else { 0.0 },
        svd.rank_is_borderline(tol),
    )
}

fn require_square_pair(b: &ComplexMatrix, c: &ComplexMatrix) -> Result<()> {
    b.require_square()?;
    if b.shape() != c.shape() {
        return Err(Error::DimensionMismatch {
            op: "antidiagonal blocks",
            left: b.shape(),
            right: c.shape(),
        });
    }
    Ok(())
}

fn require_blocks_square(m: &BlockMatrix2x2) -> Result<()> {
    let n = m.a.require_square()?;
    match [&m.b, &m.c, &m.d].into_iter().find(|x| x.shape() != (n, n)) {
        Some(x) => Err(Error::DimensionMismatch {
            op: "block matrix",
            left: m.a.shape(),
            right: x.shape(),
        }),
        None => Ok(()),
    }
}

/// Hypotheses of the lemma on `Q = [[0, B], [C, 0]]`, then the block
/// formulas checked against the directly computed inverses of `Q`.
pub fn check_lemma_4_1(b: &ComplexMatrix, c: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_square_pair(b, c)?;
    let mut v = TheoremVerdict::new(TheoremId::Lemma4_1, ClaimForm::Implication);
    let pb = core_probe(b, tol)?;
    let pc = core_probe(c, tol)?;
    v.ill_conditioned = pb.ill_conditioned || pc.ill_conditioned;
    v.hypothesis("B core invertible", Condition::core_invertible(&pb));
    v.hypothesis("C core invertible", Condition::core_invertible(&pc));
    let (left, right) = antidiag_conditions(b, c, tol)?;
    v.hypothesis("B(CB)^pi = 0", left);
    v.hypothesis("C(BC)^pi = 0", right);
    if !v.hypotheses_met() {
        return Ok(v);
    }

    let q = antidiag(b, c);
    let direct = core_probe(&q, tol)?;
    v.ill_conditioned |= direct.ill_conditioned;
    v.side1("Q core invertible", Condition::core_invertible(&direct));
    let forms = match antidiag_inverses(b, c, tol) {
        Ok(f) => f,
        Err(_) => {
            v.side1("block formulas defined", Condition::flag(false));
            return Ok(v);
        }
    };
    if let (Some(qc), Some(qg)) = (&direct.inverse, &direct.group) {
        v.side1("published form = Q^core", Condition::from_residual(forms.core.rel_dist(qc), tol));
        v.side1("alternate form = Q^core", Condition::from_residual(forms.core_alt.rel_dist(qc), tol));
        v.side1("block Q^# = Q^#", Condition::from_residual(forms.group.rel_dist(qg), tol));
    }
    v.witness_inverse("Q^core (published form)", forms.core.clone(), InverseKind::Core, &q);
    v.witness_inverse("Q^core (alternate form)", forms.core_alt, InverseKind::Core, &q);
    v.witness_inverse("Q^#", forms.group, InverseKind::Group, &q);
    Ok(v)
}

/// Which commutation hypotheses involving adjoints are assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjointHypotheses {
    /// `A*B = BD*` and `D*C = CA*`.
    Both,
    /// `B*A = DB*` only.
    Single,
}

/// Block letters used in hypothesis names, so that a check run on the
/// swapped matrix reports its conditions in the caller's letters.
struct Letters([&'static str; 4]);

const PLAIN: Letters = Letters(["A", "B", "C", "D"]);
const SWAPPED: Letters = Letters(["D", "C", "B", "A"]);

fn block_hypotheses(
    v: &mut TheoremVerdict,
    m: &BlockMatrix2x2,
    adjoints: AdjointHypotheses,
    l: &Letters,
    tol: Tolerance,
) -> Result<Option<(ComplexMatrix, ComplexMatrix)>> {
    let [la, lb, lc, ld] = l.0;
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let probes = [core_probe(a, tol)?, core_probe(b, tol)?, core_probe(c, tol)?, core_probe(d, tol)?];
    for (name, p) in [la, lb, lc, ld].iter().zip(&probes) {
        v.hypothesis(&format!("{name} core invertible"), Condition::core_invertible(p));
        v.ill_conditioned |= p.ill_conditioned;
    }
    let scale = |x: &ComplexMatrix, y: &ComplexMatrix| x.norm_fro() * y.norm_fro();
    v.hypothesis(&format!("{la}{lb} = {lb}{ld}"), Condition::equal(&(a * b), &(b * d), scale(a, b) + scale(b, d), tol));
    v.hypothesis(&format!("{ld}{lc} = {lc}{la}"), Condition::equal(&(d * c), &(c * a), scale(d, c) + scale(c, a), tol));
    let (a_s, b_s, d_s) = (a.adjoint(), b.adjoint(), d.adjoint());
    let dc_star = Condition::equal(&(&d_s * c), &(c * &a_s), scale(d, c) + scale(c, a), tol);
    match adjoints {
        AdjointHypotheses::Both => {
            v.hypothesis(
                &format!("{la}*{lb} = {lb}{ld}*"),
                Condition::equal(&(&a_s * b), &(b * &d_s), scale(a, b) + scale(b, d), tol),
            );
            v.hypothesis(&format!("{ld}*{lc} = {lc}{la}*"), dc_star);
        }
        AdjointHypotheses::Single => {
            v.hypothesis(
                &format!("{lb}*{la} = {ld}{lb}*"),
                Condition::equal(&(&b_s * a), &(d * &b_s), scale(a, b) + scale(b, d), tol),
            );
            v.record(&format!("{ld}*{lc} = {lc}{la}*"), dc_star);
        }
    }
    let (left, right) = antidiag_conditions(b, c, tol)?;
    v.hypothesis(&format!("{lb}({lc}{lb})^pi = 0"), left);
    v.hypothesis(&format!("{lc}({lb}{lc})^pi = 0"), right);
    let (Some(ac), Some(dc)) = (&probes[0].inverse, &probes[3].inverse) else {
        v.hypothesis(&format!("{la}^core {lb} {ld}^core {lc} nilpotent"), Condition::flag(false));
        return Ok(None);
    };
    v.hypothesis(
        &format!("{la}^core {lb} {ld}^core {lc} nilpotent"),
        nilpotency(&chain(&[ac, b, dc, c]), tol),
    );
    Ok(Some((ac.clone(), dc.clone())))
}

/// Proof quantities for `M = P + Q`, recorded but not used for the verdict.
fn record_decomposition(
    v: &mut TheoremVerdict,
    m: &BlockMatrix2x2,
    cores: &(ComplexMatrix, ComplexMatrix),
    adjoints: AdjointHypotheses,
    tol: Tolerance,
) -> Result<()> {
    let p = m.diagonal_part();
    let q = m.antidiagonal_part();
    let pq = p.norm_fro() * q.norm_fro();
    let id = ComplexMatrix::identity(p.rows());
    v.record("PQ = QP", Condition::equal(&(&p * &q), &(&q * &p), pq, tol));
    match adjoints {
        AdjointHypotheses::Both => {
            let ps = p.adjoint();
            v.record("P*Q = QP*", Condition::equal(&(&ps * &q), &(&q * &ps), pq, tol));
            let p_core = cores.0.direct_sum(&cores.1);
            v.record("I + P^core Q invertible", invertible(&(&id + &(&p_core * &q)), tol));
        }
        AdjointHypotheses::Single => {
            let qs = q.adjoint();
            v.record("Q*P = PQ*", Condition::equal(&(&qs * &p), &(&p * &qs), pq, tol));
            if let Some(q_core) = core_probe(&q, tol)?.inverse {
                v.record("I + Q^core P invertible", invertible(&(&id + &(&q_core * &p)), tol));
            }
        }
    }
    Ok(())
}

fn conclude(v: &mut TheoremVerdict, m: &ComplexMatrix, tol: Tolerance) -> Result<CoreProbe> {
    let probe = core_probe(m, tol)?;
    v.ill_conditioned |= probe.ill_conditioned;
    v.side1("M core invertible", Condition::core_invertible(&probe));
    if let Some(mc) = &probe.inverse {
        v.witness_inverse("M^core", mc.clone(), InverseKind::Core, m);
    }
    Ok(probe)
}

fn check_block(
    id: TheoremId,
    blocks: &BlockMatrix2x2,
    adjoints: AdjointHypotheses,
    tol: Tolerance,
) -> Result<TheoremVerdict> {
    require_blocks_square(blocks)?;
    let mut v = TheoremVerdict::new(id, ClaimForm::Implication);
    let cores = block_hypotheses(&mut v, blocks, adjoints, &PLAIN, tol)?;
    if let Some(cores) = &cores {
        record_decomposition(&mut v, blocks, cores, adjoints, tol)?;
    }
    if v.hypotheses_met() {
        conclude(&mut v, &blocks.assemble(), tol)?;
    }
    Ok(v)
}

/// `AB = BD`, `DC = CA`, `A*B = BD*`, `D*C = CA*`, `B(CB)^pi = 0`,
/// `C(BC)^pi = 0` and `A^core B D^core C` nilpotent, with all four blocks
/// core invertible, imply `M` core invertible.
pub fn check_thm_4_2(blocks: &BlockMatrix2x2, tol: Tolerance) -> Result<TheoremVerdict> {
    check_block(TheoremId::Theorem4_2, blocks, AdjointHypotheses::Both, tol)
}

/// As [`check_thm_4_2`] with the two adjoint conditions replaced by
/// `B*A = DB*`. The dropped condition `D*C = CA*` is recorded.
pub fn check_thm_4_4(blocks: &BlockMatrix2x2, tol: Tolerance) -> Result<TheoremVerdict> {
    check_block(TheoremId::Theorem4_4, blocks, AdjointHypotheses::Single, tol)
}

/// The block theorem applied to `[[D, C], [B, A]]`, with the conclusion
/// checked directly on `M`. Hypotheses are named in the letters of `M`.
pub fn permuted_variant(blocks: &BlockMatrix2x2, adjoints: AdjointHypotheses, tol: Tolerance) -> Result<TheoremVerdict> {
    require_blocks_square(blocks)?;
    let id = match adjoints {
        AdjointHypotheses::Both => TheoremId::Corollary4_3,
        AdjointHypotheses::Single => TheoremId::Corollary4_5,
    };
    let mut v = TheoremVerdict::new(id, ClaimForm::Implication);
    let swapped = blocks.swapped();
    let cores = block_hypotheses(&mut v, &swapped, adjoints, &SWAPPED, tol)?;
    if let Some(cores) = &cores {
        record_decomposition(&mut v, &swapped, cores, adjoints, tol)?;
    }
    if !v.hypotheses_met() {
        return Ok(v);
    }
    let m = blocks.assemble();
    let probe = conclude(&mut v, &m, tol)?;
    let sw = core_probe(&swapped.assemble(), tol)?;
    v.record("[[D,C],[B,A]] core invertible", Condition::core_invertible(&sw));
    if let (Some(mc), Some(sc)) = (&probe.inverse, &sw.inverse) {
        let j = swap_permutation(blocks.n());
        let moved = chain(&[&j, sc, &j]);
        v.record("M^core = J [[D,C],[B,A]]^core J", Condition::from_residual(moved.rel_dist(mc), tol));
    }
    Ok(v)
}

/// `J = [[0, I], [I, 0]]`.
fn swap_permutation(n: usize) -> ComplexMatrix {
    let i = ComplexMatrix::identity(n);
    antidiag(&i, &i)
}

/// Dispatches a block checker by id; `None` for ids that do not take a
/// block matrix.
pub fn check_block_theorem(id: TheoremId, blocks: &BlockMatrix2x2, tol: Tolerance) -> Option<Result<TheoremVerdict>> {
    Some(match id {
        TheoremId::Theorem4_2 => check_thm_4_2(blocks, tol),
        TheoremId::Theorem4_4 => check_thm_4_4(blocks, tol),
        TheoremId::Corollary4_3 => permuted_variant(blocks, AdjointHypotheses::Both, tol),
        TheoremId::Corollary4_5 => permuted_variant(blocks, AdjointHypotheses::Single, tol),
        TheoremId::Lemma4_1 => check_lemma_4_1(&blocks.b, &blocks.c, tol),
        _ => return None,
    })
}
