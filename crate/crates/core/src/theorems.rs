//! Checkers for the additive results on core invertibility of `a + b`.
//!
//! Each checker evaluates the hypotheses, then both sides of the claimed
//! equivalence (or the conclusion of an implication) by direct computation.
//! Whether a matrix is core invertible is always decided by
//! [`core_probe`](crate::inverse::core_probe), never inferred from the
//! hypotheses.

use crate::error::{Error, Result};
use crate::inverse::{core_probe, CoreProbe, InverseKind};
use crate::matrix::{chain, ComplexMatrix, Tolerance};
use crate::verdict::{ClaimForm, Condition, TheoremId, TheoremVerdict};

/// Inverses and idempotents of one matrix, computed once per check.
pub(crate) struct Element<'a> {
    pub m: &'a ComplexMatrix,
    pub probe: CoreProbe,
}

impl<'a> Element<'a> {
    pub fn new(m: &'a ComplexMatrix, tol: Tolerance) -> Result<Self> {
        Ok(Self {
            m,
            probe: core_probe(m, tol)?,
        })
    }

    pub fn group(&self) -> Option<&ComplexMatrix> {
        self.probe.group.as_ref()
    }

    pub fn core(&self) -> Option<&ComplexMatrix> {
        self.probe.inverse.as_ref()
    }

    /// Spectral idempotent `1 - x x^#`; exactly zero at full rank, where
    /// the subtraction would leave only rounding noise.
    pub fn pi(&self) -> Option<ComplexMatrix> {
        let n = self.m.rows();
        self.group().map(|g| {
            if self.probe.rank == n {
                ComplexMatrix::zeros(n, n)
            } else {
                (self.m * g).complement()
            }
        })
    }

    pub fn core_condition(&self) -> Condition {
        Condition::core_invertible(&self.probe)
    }

    /// EP: group invertible with `x x^#` Hermitian.
    pub fn ep_condition(&self, tol: Tolerance) -> Condition {
        let Some(g) = self.group() else {
            return Condition::decided(false, 0.0, self.probe.borderline);
        };
        let p = self.m * g;
        let herm = Condition::equal(&p, &p.adjoint(), p.norm_fro(), tol);
        Condition::decided(
            herm.holds,
            herm.residual,
            herm.ambiguous || self.probe.borderline,
        )
    }
}

fn require_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    a.require_square()?;
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            op: "theorem check",
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

fn commute(x: &ComplexMatrix, y: &ComplexMatrix, tol: Tolerance) -> Condition {
    Condition::equal(&(x * y), &(y * x), x.norm_fro() * y.norm_fro(), tol)
}

/// `x^* y = y x^*`.
fn adjoint_commute(x: &ComplexMatrix, y: &ComplexMatrix, tol: Tolerance) -> Condition {
    commute(&x.adjoint(), y, tol)
}

fn double_commutation(v: &mut TheoremVerdict, a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) {
    v.hypothesis("ab = ba", commute(a, b, tol));
    v.hypothesis("a*b = ba*", adjoint_commute(a, b, tol));
}

fn track(v: &mut TheoremVerdict, e: &Element) {
    v.ill_conditioned |= e.probe.ill_conditioned;
}

fn witness_core(v: &mut TheoremVerdict, name: &str, e: &Element) {
    if let Some(c) = e.core() {
        v.witness_inverse(name, c.clone(), InverseKind::Core, e.m);
    }
}

fn witness_group(v: &mut TheoremVerdict, name: &str, e: &Element) {
    if let Some(g) = e.group() {
        v.witness_inverse(name, g.clone(), InverseKind::Group, e.m);
    }
}

/// `a` EP, `b` and `b a^pi` core invertible, `a b a^pi = 0`:
/// (1) `a + b` core invertible and `a (a+b)^core a^pi = 0` iff
/// (2) `a (1 + a^# b)` core invertible and `b^pi a^pi b = 0`.
pub fn check_thm_2_4(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Theorem2_4, ClaimForm::Biconditional);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    track(&mut v, &ea);
    track(&mut v, &eb);
    v.hypothesis("a EP", ea.ep_condition(tol));
    v.hypothesis("b core invertible", eb.core_condition());
    let (Some(ag), Some(a_pi)) = (ea.group(), ea.pi()) else {
        return Ok(v);
    };
    let b_api = b * &a_pi;
    let e_bapi = Element::new(&b_api, tol)?;
    track(&mut v, &e_bapi);
    v.hypothesis("b a^pi core invertible", e_bapi.core_condition());
    v.hypothesis("a b a^pi = 0", Condition::product_vanishes(&[a, b, &a_pi], tol));
    witness_group(&mut v, "a^#", &ea);
    v.witness("a^pi", a_pi.clone());
    witness_core(&mut v, "b^core", &eb);
    if !v.hypotheses_met() {
        return Ok(v);
    }

    let sum = a + b;
    let es = Element::new(&sum, tol)?;
    track(&mut v, &es);
    v.side1("a+b core invertible", es.core_condition());
    if let Some(sc) = es.core() {
        v.side1(
            "a (a+b)^core a^pi = 0",
            Condition::product_vanishes(&[a, sc, &a_pi], tol),
        );
        witness_core(&mut v, "(a+b)^core", &es);
    }

    let shifted = a * &(&ComplexMatrix::identity(a.rows()) + &(ag * b));
    let esh = Element::new(&shifted, tol)?;
    track(&mut v, &esh);
    v.side2("a(1+a^# b) core invertible", esh.core_condition());
    witness_core(&mut v, "(a(1+a^# b))^core", &esh);
    let b_pi = eb.pi().expect("b group invertible under the hypotheses");
    v.side2(
        "b^pi a^pi b = 0",
        Condition::product_vanishes(&[&b_pi, &a_pi, b], tol),
    );
    v.witness("b^pi", b_pi);
    Ok(v)
}

/// `a` EP, `b` core invertible, `ab = ba`, `a*b = ba*`:
/// `a + b` core invertible iff `a (1 + a^# b)` core invertible.
pub fn check_cor_2_5(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Corollary2_5, ClaimForm::Biconditional);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    track(&mut v, &ea);
    track(&mut v, &eb);
    v.hypothesis("a EP", ea.ep_condition(tol));
    v.hypothesis("b core invertible", eb.core_condition());
    double_commutation(&mut v, a, b, tol);
    if !v.hypotheses_met() {
        return Ok(v);
    }
    let ag = ea.group().expect("EP implies group invertible");
    witness_group(&mut v, "a^#", &ea);

    let sum = a + b;
    let es = Element::new(&sum, tol)?;
    track(&mut v, &es);
    v.side1("a+b core invertible", es.core_condition());
    witness_core(&mut v, "(a+b)^core", &es);

    let shifted = a * &(&ComplexMatrix::identity(a.rows()) + &(ag * b));
    let esh = Element::new(&shifted, tol)?;
    track(&mut v, &esh);
    v.side2("a(1+a^# b) core invertible", esh.core_condition());
    witness_core(&mut v, "(a(1+a^# b))^core", &esh);
    Ok(v)
}

struct EpPair<'a> {
    a_pi: ComplexMatrix,
    b_pi: ComplexMatrix,
    ag: &'a ComplexMatrix,
    bg: &'a ComplexMatrix,
}

/// Shared hypotheses of the two-EP results: `a`, `b` EP and
/// `a b^pi`, `b a^pi` core invertible.
fn ep_pair_hypotheses<'e>(
    v: &mut TheoremVerdict,
    ea: &'e Element,
    eb: &'e Element,
    tol: Tolerance,
) -> Result<Option<EpPair<'e>>> {
    v.hypothesis("a EP", ea.ep_condition(tol));
    v.hypothesis("b EP", eb.ep_condition(tol));
    let (Some(ag), Some(bg), Some(a_pi), Some(b_pi)) = (ea.group(), eb.group(), ea.pi(), eb.pi()) else {
        return Ok(None);
    };
    let a_bpi = ea.m * &b_pi;
    let b_api = eb.m * &a_pi;
    let e1 = Element::new(&a_bpi, tol)?;
    let e2 = Element::new(&b_api, tol)?;
    track(v, &e1);
    track(v, &e2);
    v.hypothesis("a b^pi core invertible", e1.core_condition());
    v.hypothesis("b a^pi core invertible", e2.core_condition());
    v.witness("a^pi", a_pi.clone());
    v.witness("b^pi", b_pi.clone());
    Ok(Some(EpPair { a_pi, b_pi, ag, bg }))
}

/// `a`, `b` EP, `a b^pi`, `b a^pi` core invertible, `a b a^pi = b a b^pi = 0`:
/// (1) `a + b` core invertible with
/// `a (a+b)^core a^pi = b a^pi (a+b)^core b^pi = b (a+b)^core b^pi = 0` iff
/// (2) `a a^# b + b b^# a` core invertible and `a^pi b^pi a = b^pi a^pi b = 0`.
pub fn check_thm_2_6(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Theorem2_6, ClaimForm::Biconditional);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    track(&mut v, &ea);
    track(&mut v, &eb);
    let Some(pair) = ep_pair_hypotheses(&mut v, &ea, &eb, tol)? else {
        return Ok(v);
    };
    let EpPair { a_pi, b_pi, ag, bg } = pair;
    v.hypothesis("a b a^pi = 0", Condition::product_vanishes(&[a, b, &a_pi], tol));
    v.hypothesis("b a b^pi = 0", Condition::product_vanishes(&[b, a, &b_pi], tol));
    if !v.hypotheses_met() {
        return Ok(v);
    }

    let sum = a + b;
    let es = Element::new(&sum, tol)?;
    track(&mut v, &es);
    v.side1("a+b core invertible", es.core_condition());
    if let Some(sc) = es.core() {
        v.side1("a (a+b)^core a^pi = 0", Condition::product_vanishes(&[a, sc, &a_pi], tol));
        v.side1(
            "b a^pi (a+b)^core b^pi = 0",
            Condition::product_vanishes(&[b, &a_pi, sc, &b_pi], tol),
        );
        v.side1("b (a+b)^core b^pi = 0", Condition::product_vanishes(&[b, sc, &b_pi], tol));
        witness_core(&mut v, "(a+b)^core", &es);
    }

    let t1 = chain(&[a, ag, b]);
    let t2 = chain(&[b, bg, a]);
    let mix = &t1 + &t2;
    let em = Element::new(&mix, tol)?;
    track(&mut v, &em);
    v.side2("aa^# b + bb^# a core invertible", em.core_condition());
    witness_core(&mut v, "(aa^# b + bb^# a)^core", &em);
    v.side2("a^pi b^pi a = 0", Condition::product_vanishes(&[&a_pi, &b_pi, a], tol));
    v.side2("b^pi a^pi b = 0", Condition::product_vanishes(&[&b_pi, &a_pi, b], tol));
    Ok(v)
}

/// `a`, `b` EP, `a b^pi`, `b a^pi` core invertible and
/// `a a^# b = b b^# a` core invertible imply `a + b` core invertible.
pub fn check_cor_2_7(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Corollary2_7, ClaimForm::Implication);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    track(&mut v, &ea);
    track(&mut v, &eb);
    let Some(pair) = ep_pair_hypotheses(&mut v, &ea, &eb, tol)? else {
        return Ok(v);
    };
    let t1 = chain(&[a, pair.ag, b]);
    let t2 = chain(&[b, pair.bg, a]);
    let scale = a.norm_fro() * pair.ag.norm_fro() * b.norm_fro();
    v.hypothesis("aa^# b = bb^# a", Condition::equal(&t1, &t2, scale, tol));
    let e1 = Element::new(&t1, tol)?;
    track(&mut v, &e1);
    v.hypothesis("aa^# b core invertible", e1.core_condition());
    if !v.hypotheses_met() {
        return Ok(v);
    }
    let sum = a + b;
    let es = Element::new(&sum, tol)?;
    track(&mut v, &es);
    v.side1("a+b core invertible", es.core_condition());
    witness_core(&mut v, "(a+b)^core", &es);
    Ok(v)
}

fn core_pair_hypotheses(
    v: &mut TheoremVerdict,
    ea: &Element,
    eb: &Element,
) {
    track(v, ea);
    track(v, eb);
    v.hypothesis("a core invertible", ea.core_condition());
    v.hypothesis("b core invertible", eb.core_condition());
}

/// Double commutation of core-invertible `a`, `b` gives
/// `a^core b = b a^core`.
pub fn check_lemma_3_1(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Lemma3_1, ClaimForm::Implication);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    core_pair_hypotheses(&mut v, &ea, &eb);
    double_commutation(&mut v, a, b, tol);
    if !v.hypotheses_met() {
        return Ok(v);
    }
    let ac = ea.core().expect("core invertible");
    v.side1("a^core b = b a^core", commute(ac, b, tol));
    witness_core(&mut v, "a^core", &ea);
    Ok(v)
}

/// `ab = 0` and `a*b = 0` for core-invertible `a`, `b` give `a + b` core
/// invertible.
pub fn check_lemma_3_2(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Lemma3_2, ClaimForm::Implication);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    core_pair_hypotheses(&mut v, &ea, &eb);
    v.hypothesis("ab = 0", Condition::product_vanishes(&[a, b], tol));
    let a_star = a.adjoint();
    v.hypothesis("a*b = 0", Condition::product_vanishes(&[&a_star, b], tol));
    if !v.hypotheses_met() {
        return Ok(v);
    }
    let sum = a + b;
    let es = Element::new(&sum, tol)?;
    track(&mut v, &es);
    v.side1("a+b core invertible", es.core_condition());
    witness_core(&mut v, "(a+b)^core", &es);
    Ok(v)
}

/// Double commutation of core-invertible `a`, `b` gives `ab` core
/// invertible with `(ab)^core = a^core b^core`.
pub fn check_lemma_3_3(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Lemma3_3, ClaimForm::Implication);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    core_pair_hypotheses(&mut v, &ea, &eb);
    double_commutation(&mut v, a, b, tol);
    if !v.hypotheses_met() {
        return Ok(v);
    }
    let prod = a * b;
    let ep = Element::new(&prod, tol)?;
    track(&mut v, &ep);
    v.side1("ab core invertible", ep.core_condition());
    if let Some(pc) = ep.core() {
        let (ac, bc) = (ea.core().expect("core"), eb.core().expect("core"));
        let rhs = ac * bc;
        let scale = pc.norm_fro() + ac.norm_fro() * bc.norm_fro();
        v.side1("(ab)^core = a^core b^core", Condition::equal(pc, &rhs, scale, tol));
        witness_core(&mut v, "(ab)^core", &ep);
    }
    Ok(v)
}

/// Double commutation of core-invertible `a`, `b`:
/// (1) `a + b` core invertible and `a^pi (a+b)^core a = 0` iff
/// (2) `1 + a^core b` core invertible and
/// `(1 + a^core b)^pi a (1 - a a^core) = 0`,
/// with `a^pi = 1 - a a^#`.
pub fn check_thm_3_4(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Theorem3_4, ClaimForm::Biconditional);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    core_pair_hypotheses(&mut v, &ea, &eb);
    double_commutation(&mut v, a, b, tol);
    if !v.hypotheses_met() {
        return Ok(v);
    }
    let ac = ea.core().expect("core invertible");
    let a_pi = ea.pi().expect("group invertible");
    witness_core(&mut v, "a^core", &ea);
    v.witness("a^pi", a_pi.clone());
    v.witness("1 - aa^core", (a * ac).complement());

    let sum = a + b;
    let es = Element::new(&sum, tol)?;
    track(&mut v, &es);
    v.side1("a+b core invertible", es.core_condition());
    if let Some(sc) = es.core() {
        v.side1("a^pi (a+b)^core a = 0", Condition::product_vanishes(&[&a_pi, sc, a], tol));
        witness_core(&mut v, "(a+b)^core", &es);
    }

    let y = &ComplexMatrix::identity(a.rows()) + &(ac * b);
    let ey = Element::new(&y, tol)?;
    track(&mut v, &ey);
    v.side2("1+a^core b core invertible", ey.core_condition());
    if let Some(y_pi) = ey.pi() {
        let tail = (a * ac).complement();
        v.side2(
            "(1+a^core b)^pi a (1-aa^core) = 0",
            Condition::product_vanishes(&[&y_pi, a, &tail], tol),
        );
        v.witness("(1+a^core b)^pi", y_pi);
        witness_core(&mut v, "(1+a^core b)^core", &ey);
    }
    Ok(v)
}

/// `a` EP, `b` core invertible, double commutation:
/// `a + b` core invertible iff `1 + a^# b` core invertible.
pub fn check_cor_3_5(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<TheoremVerdict> {
    require_pair(a, b)?;
    let mut v = TheoremVerdict::new(TheoremId::Corollary3_5, ClaimForm::Biconditional);
    let ea = Element::new(a, tol)?;
    let eb = Element::new(b, tol)?;
    track(&mut v, &ea);
    track(&mut v, &eb);
    v.hypothesis("a EP", ea.ep_condition(tol));
    v.hypothesis("b core invertible", eb.core_condition());
    double_commutation(&mut v, a, b, tol);
    if !v.hypotheses_met() {
        return Ok(v);
    }
    let ag = ea.group().expect("EP implies group invertible");
    witness_group(&mut v, "a^#", &ea);

    let sum = a + b;
    let es = Element::new(&sum, tol)?;
    track(&mut v, &es);
    v.side1("a+b core invertible", es.core_condition());
    witness_core(&mut v, "(a+b)^core", &es);

    let y = &ComplexMatrix::identity(a.rows()) + &(ag * b);
    let ey = Element::new(&y, tol)?;
    track(&mut v, &ey);
    v.side2("1+a^# b core invertible", ey.core_condition());
    witness_core(&mut v, "(1+a^# b)^core", &ey);
    Ok(v)
}

/// Dispatches a pair checker by id; `None` for ids that do not take a
/// plain `(a, b)` pair.
pub fn check_pair(id: TheoremId, a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Option<Result<TheoremVerdict>> {
    let f = match id {
        TheoremId::Lemma2_2 => crate::pierce::check_lemma_2_2,
        TheoremId::Theorem2_4 => check_thm_2_4,
        TheoremId::Corollary2_5 => check_cor_2_5,
        TheoremId::Theorem2_6 => check_thm_2_6,
        TheoremId::Corollary2_7 => check_cor_2_7,
        TheoremId::Lemma3_1 => check_lemma_3_1,
        TheoremId::Lemma3_2 => check_lemma_3_2,
        TheoremId::Lemma3_3 => check_lemma_3_3,
        TheoremId::Theorem3_4 => check_thm_3_4,
        TheoremId::Corollary3_5 => check_cor_3_5,
        _ => return None,
    };
    Some(f(a, b, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{C64, I};
    use crate::verdict::Outcome;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn d(e: &[f64]) -> ComplexMatrix {
        ComplexMatrix::real_diag(e)
    }

    fn m(e: &[f64]) -> ComplexMatrix {
        ComplexMatrix::real(2, 2, e)
    }

    fn both(v: &TheoremVerdict) -> (bool, Option<bool>) {
        (v.side1_holds(), v.side2_holds())
    }

    #[test]
    fn thm_2_4_examples() {
        let a = d(&[2.0, 0.0]);
        let b = m(&[0.0, 0.0, 1.0, 3.0]);
        let v = check_thm_2_4(&a, &b, tol()).unwrap();
        assert!(v.hypotheses_met());
        assert_eq!(both(&v), (true, Some(true)));
        assert_eq!(v.outcome(), Outcome::Pass);
        // b^# = b / 9, b^pi = [[1, 0], [-1/3, 0]]
        let b_pi = &v.witnesses["b^pi"].value;
        assert!(b_pi.approx_eq(&m(&[1.0, 0.0, -1.0 / 3.0, 0.0]), tol()).unwrap());
        assert!(v.witnesses_recheck(tol()));

        let v = check_thm_2_4(&d(&[1.0, 0.0]), &d(&[0.0, 1.0]), tol()).unwrap();
        assert_eq!(both(&v), (true, Some(true)));
        assert_eq!(v.outcome(), Outcome::Pass);

        let v = check_thm_2_4(&m(&[1.0, 1.0, 0.0, 0.0]), &ComplexMatrix::zeros(2, 2), tol()).unwrap();
        assert!(!v.hypotheses_met());
        assert!(!v.hypotheses["a EP"].holds);
        assert_eq!(v.outcome(), Outcome::NotMet);
        assert_eq!(v.biconditional_ok(), None);
    }

    #[test]
    fn cor_2_5_examples() {
        let v = check_cor_2_5(&d(&[2.0, 0.0]), &d(&[3.0, 4.0]), tol()).unwrap();
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));

        let v = check_cor_2_5(&d(&[1.0, 0.0]), &d(&[-1.0, 0.0]), tol()).unwrap();
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));

        let v = check_cor_2_5(&d(&[1.0, 0.0]), &m(&[0.0, 1.0, 0.0, 0.0]), tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::NotMet);
        assert!(!v.hypotheses["ab = ba"].holds);
    }

    #[test]
    fn thm_2_6_examples() {
        let v = check_thm_2_6(&d(&[2.0, 0.0, 0.0]), &d(&[0.0, 3.0, 0.0]), tol()).unwrap();
        assert!(v.hypotheses_met());
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));

        let v = check_thm_2_6(&d(&[1.0, 0.0]), &d(&[1.0, 0.0]), tol()).unwrap();
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));

        let v = check_thm_2_6(&d(&[1.0, 0.0]), &m(&[1.0, 1.0, 0.0, 0.0]), tol()).unwrap();
        assert!(!v.hypotheses["b EP"].holds);
        assert_eq!(v.outcome(), Outcome::NotMet);
    }

    #[test]
    fn cor_2_7_examples() {
        let v = check_cor_2_7(&d(&[1.0, 0.0]), &d(&[1.0, 0.0]), tol()).unwrap();
        assert_eq!((v.side1_holds(), v.outcome()), (true, Outcome::Pass));

        let v = check_cor_2_7(&d(&[2.0, 0.0]), &d(&[3.0, 0.0]), tol()).unwrap();
        assert!(!v.hypotheses["aa^# b = bb^# a"].holds);
        assert_eq!(v.outcome(), Outcome::NotMet);

        let v = check_cor_2_7(&d(&[1.0, 1.0]), &d(&[1.0, 1.0]), tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
    }

    #[test]
    fn lemma_3_1_examples() {
        let v = check_lemma_3_1(&d(&[2.0, 0.0]), &d(&[3.0, 4.0]), tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);

        let a = m(&[1.0, 1.0, 0.0, 0.0]);
        let v = check_lemma_3_1(&a, &ComplexMatrix::identity(2), tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);

        let a = d(&[2.0, 0.0]);
        let v = check_lemma_3_1(&a, &a.adjoint(), tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
    }

    #[test]
    fn lemma_3_2_examples() {
        let a = d(&[1.0, 0.0]);
        let b = ComplexMatrix::diag(&[C64::new(0.0, 0.0), I]);
        let v = check_lemma_3_2(&a, &b, tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        let want = ComplexMatrix::diag(&[C64::new(1.0, 0.0), -I]);
        assert!(v.witnesses["(a+b)^core"].value.approx_eq(&want, tol()).unwrap());
        assert!(v.witnesses_recheck(tol()));

        let b = m(&[1.0, 2.0, 3.0, 4.0]);
        let v = check_lemma_3_2(&ComplexMatrix::zeros(2, 2), &b, tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);

        let v = check_lemma_3_2(&d(&[1.0, 0.0]), &d(&[1.0, 0.0]), tol()).unwrap();
        assert!(!v.hypotheses["ab = 0"].holds);
        assert_eq!(v.outcome(), Outcome::NotMet);
    }

    #[test]
    fn lemma_3_3_examples() {
        let v = check_lemma_3_3(&d(&[2.0, 0.0]), &d(&[3.0, 4.0]), tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        let pc = &v.witnesses["(ab)^core"].value;
        assert!(pc.approx_eq(&d(&[1.0 / 6.0, 0.0]), tol()).unwrap());

        let a = m(&[1.0, 1.0, 0.0, 0.0]);
        let v = check_lemma_3_3(&a, &ComplexMatrix::identity(2), tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);

        let z = ComplexMatrix::zeros(2, 2);
        let v = check_lemma_3_3(&z, &z, tol()).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
    }

    #[test]
    fn thm_3_4_examples() {
        let v = check_thm_3_4(&d(&[1.0, 0.0]), &d(&[1.0, 2.0]), tol()).unwrap();
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));

        let v = check_thm_3_4(&d(&[1.0, 0.0]), &d(&[-1.0, 1.0]), tol()).unwrap();
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));
        let y_pi = &v.witnesses["(1+a^core b)^pi"].value;
        assert!(y_pi.approx_eq(&d(&[1.0, 0.0]), tol()).unwrap());

        let a = m(&[1.0, 1.0, 0.0, 0.0]);
        let b = a.scale_real(2.0);
        let v = check_thm_3_4(&a, &b, tol()).unwrap();
        assert!(v.hypotheses["ab = ba"].holds);
        assert!(!v.hypotheses["a*b = ba*"].holds);
        assert_eq!(v.outcome(), Outcome::NotMet);
    }

    #[test]
    fn thm_3_4_both_sides_false() {
        // a idempotent non-EP, b = -I: a + b = -(1 - a) and 1 + a^core b = 1 - a^core
        let a = m(&[1.0, 1.0, 0.0, 0.0]);
        let b = ComplexMatrix::identity(2).scale_real(-1.0);
        let v = check_thm_3_4(&a, &b, tol()).unwrap();
        assert!(v.hypotheses_met());
        assert_eq!(both(&v), (false, Some(false)));
        assert_eq!(v.outcome(), Outcome::Pass);
    }

    #[test]
    fn cor_3_5_examples() {
        let v = check_cor_3_5(&d(&[2.0, 0.0]), &d(&[1.0, 1.0]), tol()).unwrap();
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));

        let b = m(&[1.0, 2.0, 3.0, 4.0]);
        let v = check_cor_3_5(&ComplexMatrix::zeros(2, 2), &b, tol()).unwrap();
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));

        let b = ComplexMatrix::diag(&[C64::new(0.0, 0.0), -I]);
        let v = check_cor_3_5(&d(&[1.0, 0.0]), &b, tol()).unwrap();
        assert_eq!((both(&v), v.outcome()), ((true, Some(true)), Outcome::Pass));
    }

    #[test]
    fn dispatch_and_shape_errors() {
        let a = d(&[1.0, 0.0]);
        assert!(check_pair(TheoremId::Theorem3_4, &a, &a, tol()).is_some());
        assert!(check_pair(TheoremId::Lemma4_1, &a, &a, tol()).is_none());
        assert!(matches!(
            check_thm_2_4(&a, &ComplexMatrix::identity(3), tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
