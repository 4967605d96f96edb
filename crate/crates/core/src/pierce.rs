//! Pierce decomposition relative to an idempotent, and the block
//! lower-triangular group and core inverse constructions.
//!
//! Blocks are kept as `n x n` matrices supported on their corner, so the
//! unit of the corner `pAp` is `p` rather than `I`. Inverses of corner
//! elements are computed in the full space; they land in the same corner.

use crate::error::{Error, Result};
use crate::inverse::{
    core_probe, group_inverse, group_probe, idempotent_residual, projection_residual, InverseKind,
};
use crate::matrix::{chain, ComplexMatrix, Tolerance};
use crate::verdict::{ClaimForm, Condition, TheoremId, TheoremVerdict};

#[derive(Debug, Clone, PartialEq)]
pub struct PierceBlocks {
    pub p: ComplexMatrix,
    /// `p x p`
    pub b11: ComplexMatrix,
    /// `p x (1 - p)`
    pub b12: ComplexMatrix,
    /// `(1 - p) x p`
    pub b21: ComplexMatrix,
    /// `(1 - p) x (1 - p)`
    pub b22: ComplexMatrix,
}

impl PierceBlocks {
    /// Largest normalized residual of the corner identities
    /// `p b11 p = b11`, `p b12 q = b12`, `q b21 p = b21`, `q b22 q = b22`.
    pub fn corner_residual(&self) -> f64 {
        let p = &self.p;
        let q = p.complement();
        let s = p.norm_fro().max(q.norm_fro());
        [
            (&self.b11, p, p),
            (&self.b12, p, &q),
            (&self.b21, &q, p),
            (&self.b22, &q, &q),
        ]
        .iter()
        .map(|(b, l, r)| {
            let d = &chain(&[l, b, r]) - b;
            d.norm_fro() / (1.0 + s * s * b.norm_fro())
        })
        .fold(0.0, f64::max)
    }
}

fn check_same_square(x: &ComplexMatrix, p: &ComplexMatrix) -> Result<usize> {
    let n = x.require_square()?;
    if p.shape() != x.shape() {
        return Err(Error::DimensionMismatch {
            op: "pierce",
            left: p.shape(),
            right: x.shape(),
        });
    }
    Ok(n)
}

fn require_idempotent(p: &ComplexMatrix, tol: Tolerance) -> Result<()> {
    let residual = idempotent_residual(p);
    if tol.accepts(residual) {
        Ok(())
    } else {
        Err(Error::NotIdempotent { residual })
    }
}

pub fn decompose(x: &ComplexMatrix, p: &ComplexMatrix, tol: Tolerance) -> Result<PierceBlocks> {
    check_same_square(x, p)?;
    require_idempotent(p, tol)?;
    let q = p.complement();
    Ok(PierceBlocks {
        p: p.clone(),
        b11: chain(&[p, x, p]),
        b12: chain(&[p, x, &q]),
        b21: chain(&[&q, x, p]),
        b22: chain(&[&q, x, &q]),
    })
}

pub fn assemble(blocks: &PierceBlocks) -> ComplexMatrix {
    &(&blocks.b11 + &blocks.b12) + &(&blocks.b21 + &blocks.b22)
}

/// The pieces of `a = [[pap, 0], [p^pi a p, a p^pi]]_p` and the conditions
/// under which the triangular formulas apply.
struct Triangle {
    q: ComplexMatrix,
    /// `p a p`
    top: ComplexMatrix,
    /// `a p^pi`
    bottom: ComplexMatrix,
    /// `p^pi a p`
    coupling: ComplexMatrix,
}

impl Triangle {
    fn new(p: &ComplexMatrix, a: &ComplexMatrix) -> Self {
        let q = p.complement();
        Self {
            top: chain(&[p, a, p]),
            bottom: a * &q,
            coupling: chain(&[&q, a, p]),
            q,
        }
    }

    fn upper_right(&self, p: &ComplexMatrix, a: &ComplexMatrix, tol: Tolerance) -> Condition {
        Condition::product_vanishes(&[p, a, &self.q], tol)
    }
}

fn spectral(x: &ComplexMatrix, group: &ComplexMatrix) -> ComplexMatrix {
    (x * group).complement()
}

/// Group inverse of `a` from the lower-triangular Pierce form relative to
/// the idempotent `p`:
/// `a^# = (pap)^# + z + (ap^pi)^#` with
/// `z = [(ap^pi)^#]^2 c (pap)^pi + (ap^pi)^pi c [(pap)^#]^2 - (ap^pi)^# c (pap)^#`
/// and `c = p^pi a p`.
///
/// Requires `p a p^pi = 0`, group-invertible corners, and both
/// `(ap^pi)^pi c (pap) = 0` and `(ap^pi)^pi c (pap)^pi = 0`.
/// [`Error::HypothesisNotMet`] does not imply that `a^#` fails to exist.
pub fn triangular_group_inverse(p: &ComplexMatrix, a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    check_same_square(a, p)?;
    require_idempotent(p, tol)?;
    let t = Triangle::new(p, a);
    let ur = t.upper_right(p, a, tol);
    if !ur.holds {
        return Err(Error::HypothesisNotMet(format!(
            "p a p^pi != 0 (residual {:e})",
            ur.residual
        )));
    }
    let top_g = group_inverse(&t.top, tol)?;
    let bottom_g = group_inverse(&t.bottom, tol)?;
    let top_pi = spectral(&t.top, &top_g);
    let bottom_pi = spectral(&t.bottom, &bottom_g);

    let proof = Condition::product_vanishes(&[&bottom_pi, &t.coupling, &t.top], tol);
    if !proof.holds {
        return Err(Error::HypothesisNotMet(format!(
            "(ap^pi)^pi p^pi a p a p != 0 (residual {:e})",
            proof.residual
        )));
    }
    let standard = Condition::product_vanishes(&[&bottom_pi, &t.coupling, &top_pi], tol);
    if !standard.holds {
        return Err(Error::HypothesisNotMet(format!(
            "(ap^pi)^pi p^pi a p (pap)^pi != 0 (residual {:e})",
            standard.residual
        )));
    }

    let c = &t.coupling;
    let z1 = chain(&[&bottom_g, &bottom_g, c, &top_pi]);
    let z2 = chain(&[&bottom_pi, c, &top_g, &top_g]);
    let z3 = chain(&[&bottom_g, c, &top_g]);
    let z = &(&z1 + &z2) - &z3;
    Ok(&(&top_g + &z) + &bottom_g)
}

/// Core inverse of `a` for a projection `p` with `p a p^pi = 0`,
/// core-invertible corners and `(ap^pi)^pi p^pi a p = 0`:
/// `a^core = a^# a x` where
/// `x = [[(pap)^core, 0], [-(ap^pi)^core (p^pi a p) (pap)^core, (ap^pi)^core]]_p`
/// is a (1,3)-inverse of `a`.
pub fn triangular_core_inverse(p: &ComplexMatrix, a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    check_same_square(a, p)?;
    let residual = projection_residual(p);
    if !tol.accepts(residual) {
        return Err(Error::NotProjection { residual });
    }
    let t = Triangle::new(p, a);
    let ur = t.upper_right(p, a, tol);
    if !ur.holds {
        return Err(Error::HypothesisNotMet(format!(
            "p a p^pi != 0 (residual {:e})",
            ur.residual
        )));
    }
    let top = core_probe(&t.top, tol)?;
    let bottom = core_probe(&t.bottom, tol)?;
    let (Some(top_c), Some(bottom_c), Some(bottom_g)) = (&top.inverse, &bottom.inverse, &bottom.group) else {
        let failing = if top.inverse.is_none() { &t.top } else { &t.bottom };
        return Err(Error::NotCoreInvertible {
            rank: failing.rank(tol),
            rank_sq: (failing * failing).rank(tol),
        });
    };
    let bottom_pi = spectral(&t.bottom, bottom_g);
    let stmt = Condition::product_vanishes(&[&bottom_pi, &t.coupling], tol);
    if !stmt.holds {
        return Err(Error::HypothesisNotMet(format!(
            "(ap^pi)^pi p^pi a p != 0 (residual {:e})",
            stmt.residual
        )));
    }
    let x = &(top_c - &chain(&[bottom_c, &t.coupling, top_c])) + bottom_c;
    let a_group = triangular_group_inverse(p, a, tol)?;
    Ok(chain(&[&a_group, a, &x]))
}

/// For an idempotent `p` with `p a p^pi = 0` and `a`, `a p^pi` group
/// invertible: `(ap^pi)(ap^pi)^# = (a a^#) p^pi`.
pub fn check_lemma_2_1(p: &ComplexMatrix, a: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    check_same_square(a, p)?;
    let mut v = TheoremVerdict::new(TheoremId::Lemma2_1, ClaimForm::Implication);
    v.hypothesis("p idempotent", Condition::from_residual(idempotent_residual(p), tol));
    let q = p.complement();
    v.hypothesis("p a p^pi = 0", Condition::product_vanishes(&[p, a, &q], tol));
    let ga = group_probe(a, tol)?;
    let bottom = a * &q;
    let gb = group_probe(&bottom, tol)?;
    v.hypothesis("a group invertible", Condition::decided(ga.invertible, 0.0, ga.borderline));
    v.hypothesis("a p^pi group invertible", Condition::decided(gb.invertible, 0.0, gb.borderline));
    v.ill_conditioned = ga.ill_conditioned() || gb.ill_conditioned();
    if let (Some(ag), Some(bg)) = (ga.inverse(), gb.inverse()) {
        let lhs = &bottom * bg;
        let rhs = chain(&[a, ag, &q]);
        let scale = lhs.norm_fro() + rhs.norm_fro() * q.norm_fro();
        v.side1("(ap^pi)(ap^pi)^# = (aa^#)p^pi", Condition::equal(&lhs, &rhs, scale, tol));
        v.witness_inverse("a^#", ag.clone(), InverseKind::Group, a);
        v.witness_inverse("(ap^pi)^#", bg.clone(), InverseKind::Group, &bottom);
    } else {
        v.side1("(ap^pi)(ap^pi)^# = (aa^#)p^pi", Condition::flag(false));
    }
    Ok(v)
}

/// For core-invertible `a`: `(1 - a^core a) b = 0` iff `(1 - a a^core) b = 0`.
pub fn check_lemma_2_2(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    check_same_square(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Lemma2_2, ClaimForm::Biconditional);
    let probe = core_probe(a, tol)?;
    v.hypothesis("a core invertible", Condition::core_invertible(&probe));
    v.ill_conditioned = probe.ill_conditioned;
    match &probe.inverse {
        Some(ac) => {
            let left = (ac * a).complement();
            let right = (a * ac).complement();
            v.side1("(1 - a^core a) b = 0", Condition::product_vanishes(&[&left, b], tol));
            v.side2("(1 - a a^core) b = 0", Condition::product_vanishes(&[&right, b], tol));
            v.witness_inverse("a^core", ac.clone(), InverseKind::Core, a);
        }
        None => {
            v.side1("(1 - a^core a) b = 0", Condition::flag(false));
            v.side2("(1 - a a^core) b = 0", Condition::flag(false));
        }
    }
    Ok(v)
}

/// For a projection `p` with `p a p^pi = 0`, core-invertible corners and
/// `(ap^pi)^pi p^pi a p = 0`: `a` is core invertible and
/// `p a^core p^pi = 0`. The conclusion also requires the triangular
/// formulas to reproduce the directly computed inverses.
pub fn check_lemma_2_3(p: &ComplexMatrix, a: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    check_same_square(a, p)?;
    let mut v = TheoremVerdict::new(TheoremId::Lemma2_3, ClaimForm::Implication);
    v.hypothesis("p projection", Condition::from_residual(projection_residual(p), tol));
    let t = Triangle::new(p, a);
    v.hypothesis("p a p^pi = 0", t.upper_right(p, a, tol));
    let top = core_probe(&t.top, tol)?;
    let bottom = core_probe(&t.bottom, tol)?;
    v.hypothesis("pap core invertible", Condition::core_invertible(&top));
    v.hypothesis("ap^pi core invertible", Condition::core_invertible(&bottom));
    v.ill_conditioned = top.ill_conditioned || bottom.ill_conditioned;
    if let (Some(bg), Some(tg)) = (&bottom.group, &top.group) {
        let bottom_pi = spectral(&t.bottom, bg);
        v.hypothesis(
            "(ap^pi)^pi p^pi a p = 0",
            Condition::product_vanishes(&[&bottom_pi, &t.coupling], tol),
        );
        v.record(
            "(ap^pi)^pi p^pi a p a p = 0",
            Condition::product_vanishes(&[&bottom_pi, &t.coupling, &t.top], tol),
        );
        let top_pi = spectral(&t.top, tg);
        v.record(
            "(ap^pi)^pi p^pi a p (pap)^pi = 0",
            Condition::product_vanishes(&[&bottom_pi, &t.coupling, &top_pi], tol),
        );
    } else {
        v.hypothesis("(ap^pi)^pi p^pi a p = 0", Condition::flag(false));
    }
    if !v.hypotheses_met() {
        return Ok(v);
    }

    let direct = core_probe(a, tol)?;
    v.side1("a core invertible", Condition::core_invertible(&direct));
    v.ill_conditioned |= direct.ill_conditioned;
    let (Some(ac), Some(ag)) = (&direct.inverse, &direct.group) else {
        return Ok(v);
    };
    v.witness_inverse("a^core", ac.clone(), InverseKind::Core, a);
    let q = p.complement();
    v.side1("p a^core p^pi = 0", Condition::product_vanishes(&[p, ac, &q], tol));

    let agree = |got: Result<ComplexMatrix>, want: &ComplexMatrix| match got {
        Ok(m) => Condition::from_residual(m.rel_dist(want), tol),
        Err(_) => Condition::flag(false),
    };
    v.side1(
        "triangular group inverse = a^#",
        agree(triangular_group_inverse(p, a, tol), ag),
    );
    v.side1(
        "triangular core inverse = a^core",
        agree(triangular_core_inverse(p, a, tol), ac),
    );
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::{core_inverse, group_inverse, verify_axioms};
    use crate::matrix::C64;
    use crate::verdict::Outcome;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn m(e: &[f64]) -> ComplexMatrix {
        ComplexMatrix::real(2, 2, e)
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        a.approx_eq(b, tol()).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let (a, b, c, d) = (1.0, 2.0, 3.0, 4.0);
        let x = m(&[a, b, c, d]);
        let p = ComplexMatrix::real_diag(&[1.0, 0.0]);
        let blocks = decompose(&x, &p, tol()).unwrap();
        assert_eq!(blocks.b11, m(&[a, 0.0, 0.0, 0.0]));
        assert_eq!(blocks.b12, m(&[0.0, b, 0.0, 0.0]));
        assert_eq!(blocks.b21, m(&[0.0, 0.0, c, 0.0]));
        assert_eq!(blocks.b22, m(&[0.0, 0.0, 0.0, d]));
        assert_eq!(assemble(&blocks), x);

        let id = decompose(&x, &ComplexMatrix::identity(2), tol()).unwrap();
        assert_eq!(id.b11, x);
        assert!(id.b12.is_zero() && id.b21.is_zero() && id.b22.is_zero());
        assert_eq!(assemble(&id), x);

        let zero = decompose(&x, &ComplexMatrix::zeros(2, 2), tol()).unwrap();
        assert_eq!(zero.b22, x);
        assert!(zero.b11.is_zero() && zero.b12.is_zero() && zero.b21.is_zero());
        assert_eq!(assemble(&zero), x);
    }

    #[test]
    fn decompose_oblique_idempotent() {
        let p = m(&[1.0, 1.0, 0.0, 0.0]);
        let x = ComplexMatrix::complex(
            2,
            2,
            &[C64::new(1.0, 2.0), C64::new(-1.0, 0.5), C64::new(0.0, 3.0), C64::new(2.0, 0.0)],
        );
        let blocks = decompose(&x, &p, tol()).unwrap();
        assert!(close(&assemble(&blocks), &x));
        assert!(blocks.corner_residual() < 1e-14);
    }

    #[test]
    fn decompose_rejects_non_idempotent() {
        let x = ComplexMatrix::identity(2);
        assert!(matches!(
            decompose(&x, &m(&[1.0, 1.0, 0.0, 1.0]), tol()),
            Err(Error::NotIdempotent { .. })
        ));
        assert!(matches!(
            decompose(&x, &ComplexMatrix::identity(3), tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn triangular_group_inverse_examples() {
        let p = ComplexMatrix::real_diag(&[1.0, 0.0]);
        let a = m(&[2.0, 0.0, 3.0, 4.0]);
        let want = m(&[0.5, 0.0, -0.375, 0.25]);
        let got = triangular_group_inverse(&p, &a, tol()).unwrap();
        assert!(close(&got, &want));
        assert!(close(&got, &a.inverse(tol()).unwrap()));

        let a = m(&[1.0, 2.0, 3.0, 4.0]);
        let got = triangular_group_inverse(&ComplexMatrix::identity(2), &a, tol()).unwrap();
        assert!(close(&got, &a.inverse(tol()).unwrap()));

        let a = m(&[2.0, 0.0, 1.0, 0.0]);
        assert!(matches!(
            triangular_group_inverse(&p, &a, tol()),
            Err(Error::HypothesisNotMet(_))
        ));
        // a is group invertible all the same
        assert!(group_inverse(&a, tol()).is_ok());
    }

    #[test]
    fn proof_condition_alone_is_insufficient() {
        // pap = 0, ap^pi = 0, (ap^pi)^pi p^pi a p a p = 0, but a is nilpotent
        let p = ComplexMatrix::real_diag(&[1.0, 0.0]);
        let a = m(&[0.0, 0.0, 1.0, 0.0]);
        assert!(group_inverse(&a, tol()).is_err());
        assert!(matches!(
            triangular_group_inverse(&p, &a, tol()),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn triangular_core_inverse_examples() {
        let p = ComplexMatrix::real_diag(&[1.0, 0.0]);
        let a = m(&[2.0, 0.0, 3.0, 4.0]);
        let got = triangular_core_inverse(&p, &a, tol()).unwrap();
        assert!(close(&got, &m(&[0.5, 0.0, -0.375, 0.25])));
        assert!(close(&got, &core_inverse(&a, tol()).unwrap()));

        let d = ComplexMatrix::real_diag(&[2.0, 0.0]);
        let got = triangular_core_inverse(&ComplexMatrix::identity(2), &d, tol()).unwrap();
        assert!(close(&got, &ComplexMatrix::real_diag(&[0.5, 0.0])));

        let a = m(&[1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            triangular_core_inverse(&p, &a, tol()),
            Err(Error::HypothesisNotMet(_))
        ));
        assert!(matches!(
            triangular_core_inverse(&m(&[1.0, 1.0, 0.0, 0.0]), &d, tol()),
            Err(Error::NotProjection { .. })
        ));
    }

    #[test]
    fn triangular_core_inverse_singular_corner() {
        // p = diag(1,1,0), a lower triangular with a rank-one bottom corner
        let p = ComplexMatrix::real_diag(&[1.0, 1.0, 0.0]);
        let a = ComplexMatrix::real(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let got = triangular_core_inverse(&p, &a, tol()).unwrap();
        let want = core_inverse(&a, tol()).unwrap();
        assert!(close(&got, &want));
        assert!(verify_axioms(InverseKind::Core, &a, &got, tol()).unwrap().holds);
        let q = p.complement();
        assert!(chain(&[&p, &got, &q]).norm_fro() < 1e-12);
    }

    #[test]
    fn lemma_checks_on_fixed_instances() {
        let p = ComplexMatrix::real_diag(&[1.0, 0.0]);
        let a = m(&[2.0, 0.0, 3.0, 4.0]);
        assert_eq!(check_lemma_2_1(&p, &a, tol()).unwrap().outcome(), Outcome::Pass);
        let v = check_lemma_2_3(&p, &a, tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass, "{v:?}");
        assert!(v.witnesses_recheck(tol()));

        let a = m(&[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(check_lemma_2_3(&p, &a, tol()).unwrap().outcome(), Outcome::NotMet);

        let b_in = m(&[3.0, 1.0, 0.0, 0.0]);
        let b_out = m(&[0.0, 0.0, 1.0, 0.0]);
        let v = check_lemma_2_2(&a, &b_in, tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        assert!(v.side1_holds() && v.side2_holds() == Some(true));
        let v = check_lemma_2_2(&a, &b_out, tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        assert!(!v.side1_holds() && v.side2_holds() == Some(false));
    }
}
