//! Moore-Penrose, group, Drazin and core inverses, the spectral idempotent,
//! and the predicates and axiom checks built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{chain, ComplexMatrix, Tolerance};

/// Condition number of `GF` above which a group-inverse computation is
/// reported as ill-conditioned.
pub const ILL_CONDITIONED: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InverseKind {
    MoorePenrose,
    OneThree,
    Group,
    Drazin,
    Core,
}

impl InverseKind {
    /// Names of the identities checked by [`verify_axioms`].
    pub fn axioms(self) -> &'static [&'static str] {
        match self {
            InverseKind::MoorePenrose => &["AXA=A", "XAX=X", "(AX)*=AX", "(XA)*=XA"],
            InverseKind::OneThree => &["AXA=A", "(AX)*=AX"],
            InverseKind::Group => &["AXA=A", "XAX=X", "AX=XA"],
            InverseKind::Drazin => &["XA^(k+1)=A^k", "XAX=X", "AX=XA"],
            InverseKind::Core => &["XA^2=A", "AX^2=X", "(AX)*=AX"],
        }
    }
}

pub fn moore_penrose(a: &ComplexMatrix, tol: Tolerance) -> ComplexMatrix {
    let svd = a.svd();
    let r = svd.rank(tol);
    let (m, n) = a.shape();
    let mut vs = ComplexMatrix::zeros(n, r);
    for k in 0..r {
        let inv = 1.0 / svd.sigma[k];
        for j in 0..n {
            vs.set(j, k, svd.v.get(j, k) * inv);
        }
    }
    let ur = svd.u.columns(0, r);
    if r == 0 {
        return ComplexMatrix::zeros(n, m);
    }
    &vs * &ur.adjoint()
}

/// Outcome of the group-invertibility test on a square matrix.
///
/// With the thin SVD `A = U_r S_r V_r^*`, the rank factorization is
/// `F = U_r S_r`, `G = V_r^*`, and `GF = (V_r^* U_r) S_r`. `GF` is
/// invertible iff the cosines between the column space and the row space,
/// the singular values of `V_r^* U_r`, are all nonzero.
#[derive(Debug, Clone)]
pub struct GroupProbe {
    pub rank: usize,
    pub min_cosine: f64,
    pub cond_gf: f64,
    pub invertible: bool,
    /// Either the rank decision or the cosine decision is within a factor of
    /// ten of its threshold.
    pub borderline: bool,
    inverse: Option<ComplexMatrix>,
}

impl GroupProbe {
    /// An inverse was produced but `GF` is badly conditioned. A decisively
    /// singular `GF` is a clean negative, not an ill-conditioned one.
    pub fn ill_conditioned(&self) -> bool {
        self.invertible && self.cond_gf > ILL_CONDITIONED
    }

    pub fn inverse(&self) -> Option<&ComplexMatrix> {
        self.inverse.as_ref()
    }

    pub fn into_inverse(self) -> Option<ComplexMatrix> {
        self.inverse
    }
}

pub fn group_probe(a: &ComplexMatrix, tol: Tolerance) -> Result<GroupProbe> {
    let n = a.require_square()?;
    let svd = a.svd();
    let r = svd.rank(tol);
    let rank_borderline = svd.rank_is_borderline(tol);
    if r == 0 {
        return Ok(GroupProbe {
            rank: 0,
            min_cosine: 1.0,
            cond_gf: 1.0,
            invertible: true,
            borderline: rank_borderline,
            inverse: Some(ComplexMatrix::zeros(n, n)),
        });
    }
    let ur = svd.u.columns(0, r);
    let vr = svd.v.columns(0, r);
    let w = &vr.adjoint() * &ur;
    let cosines = w.singular_values();
    let min_cosine = cosines.last().copied().unwrap_or(0.0);
    let cut = tol.atol.max(tol.rtol);
    let invertible = min_cosine > cut;
    let borderline = rank_borderline || (min_cosine > cut / 10.0 && min_cosine < cut * 10.0);

    let sigma = ComplexMatrix::real_diag(&svd.sigma[..r]);
    let gf_sv = (&w * &sigma).singular_values();
    let cond_gf = match gf_sv.last() {
        Some(&s) if s > 0.0 => gf_sv[0] / s,
        _ => f64::INFINITY,
    };

    let inverse = if invertible {
        // X = F (GF)^-2 G = U_r W^-1 S_r^-1 W^-1 V_r^*
        let w_inv = ComplexMatrix::from_dmatrix(
            w.as_dmatrix()
                .clone()
                .try_inverse()
                .ok_or(Error::Singular { rank: r, n: r })?,
        );
        let s_inv = ComplexMatrix::real_diag(&svd.sigma[..r].iter().map(|s| 1.0 / s).collect::<Vec<_>>());
        Some(chain(&[&ur, &w_inv, &s_inv, &w_inv, &vr.adjoint()]))
    } else {
        None
    };

    Ok(GroupProbe {
        rank: r,
        min_cosine,
        cond_gf,
        invertible,
        borderline,
        inverse,
    })
}

pub fn group_inverse(a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let probe = group_probe(a, tol)?;
    if probe.invertible {
        Ok(probe.into_inverse().expect("inverse present when invertible"))
    } else {
        Err(Error::NotGroupInvertible {
            rank: probe.rank,
            rank_sq: (a * a).rank(tol),
        })
    }
}

pub fn is_group_invertible(a: &ComplexMatrix, tol: Tolerance) -> bool {
    group_probe(a, tol).map(|p| p.invertible).unwrap_or(false)
}

#[derive(Debug, Clone)]
pub struct Drazin {
    pub inverse: ComplexMatrix,
    pub index: usize,
}

/// Index of a square matrix: 0 when invertible, otherwise the least
/// `k >= 1` such that `A^k` is group invertible (equivalently
/// `rank(A^k) = rank(A^(k+1))`).
pub fn drazin_index(a: &ComplexMatrix, tol: Tolerance) -> Result<usize> {
    let n = a.require_square()?;
    if a.rank(tol) == n {
        return Ok(0);
    }
    let mut power = a.clone();
    for k in 1..=n.max(1) {
        if is_group_invertible(&power, tol) {
            return Ok(k);
        }
        power = &power * a;
    }
    Ok(n)
}

/// Drazin inverse via `X = A^k (A^(2k+1))^# A^k` at the index `k`.
///
/// Always exists in exact arithmetic; an error means the group inverse of
/// the stabilized power broke down numerically.
pub fn drazin_inverse(a: &ComplexMatrix, tol: Tolerance) -> Result<Drazin> {
    let index = drazin_index(a, tol)?;
    let inverse = match index {
        0 => a.inverse(tol)?,
        1 => group_inverse(a, tol)?,
        k => {
            let ak = a.pow(k as u32);
            let big = a.pow(2 * k as u32 + 1);
            chain(&[&ak, &group_inverse(&big, tol)?, &ak])
        }
    };
    Ok(Drazin { inverse, index })
}

/// Core inverse `A^# A A^+`.
pub fn core_inverse(a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let probe = group_probe(a, tol)?;
    if !probe.invertible {
        return Err(Error::NotCoreInvertible {
            rank: probe.rank,
            rank_sq: (a * a).rank(tol),
        });
    }
    let g = probe.into_inverse().expect("inverse present when invertible");
    Ok(chain(&[&g, a, &moore_penrose(a, tol)]))
}

/// Core inverse through the projection `p = I - A A^+`: `pA = 0`, and when
/// `A + p` is invertible the core inverse is `(A + p)^-1 (I - p)`.
pub fn core_inverse_via_projection(a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    a.require_square()?;
    let p = (a * &moore_penrose(a, tol)).complement();
    let shifted = a + &p;
    match shifted.inverse(tol) {
        Ok(inv) => Ok(&inv * &p.complement()),
        Err(Error::Singular { .. }) => Err(Error::NotCoreInvertible {
            rank: a.rank(tol),
            rank_sq: (a * a).rank(tol),
        }),
        Err(e) => Err(e),
    }
}

/// `a^pi = I - A A^#`, exactly zero for invertible `A`.
pub fn spectral_idempotent(a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let g = group_inverse(a, tol)?;
    if a.rank(tol) == a.rows() {
        return Ok(ComplexMatrix::zeros(a.rows(), a.cols()));
    }
    Ok((a * &g).complement())
}

fn rel_residual(diff: &ComplexMatrix, scale: f64) -> f64 {
    diff.norm_fro() / (1.0 + scale)
}

/// Largest normalized residual of `P^2 = P` and `P^* = P`.
pub fn projection_residual(p: &ComplexMatrix) -> f64 {
    let s = p.norm_fro();
    let idem = rel_residual(&(&(p * p) - p), s * s);
    let herm = rel_residual(&(&p.adjoint() - p), s);
    idem.max(herm)
}

pub fn idempotent_residual(p: &ComplexMatrix) -> f64 {
    let s = p.norm_fro();
    rel_residual(&(&(p * p) - p), s * s)
}

pub fn is_projection(p: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    p.require_square()?;
    Ok(tol.accepts(projection_residual(p)))
}

pub fn is_ep(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    a.require_square()?;
    Ok(is_group_invertible(a, tol) && a.range_equal(&a.adjoint(), tol)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub kind: InverseKind,
    pub residuals: Vec<(String, f64)>,
    pub holds: bool,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// Evaluates the identities defining `kind`, each residual normalized by
/// `1 + |A|_F |X|_F`.
pub fn verify_axioms(
    kind: InverseKind,
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    tol: Tolerance,
) -> Result<AxiomReport> {
    if a.rows() != x.cols() || a.cols() != x.rows() {
        return Err(Error::DimensionMismatch {
            op: "verify_axioms",
            left: a.shape(),
            right: x.shape(),
        });
    }
    let square = |m: &ComplexMatrix| m.require_square().map(|_| ());
    let scale = a.norm_fro() * x.norm_fro();
    let res = |diff: ComplexMatrix| rel_residual(&diff, scale);
    let ax = a * x;
    let xa = x * a;
    let values: Vec<f64> = match kind {
        InverseKind::MoorePenrose => vec![
            res(&(&ax * a) - a),
            res(&(&xa * x) - x),
            res(&ax.adjoint() - &ax),
            res(&xa.adjoint() - &xa),
        ],
        InverseKind::OneThree => vec![res(&(&ax * a) - a), res(&ax.adjoint() - &ax)],
        InverseKind::Group => {
            square(a)?;
            vec![res(&(&ax * a) - a), res(&(&xa * x) - x), res(&ax - &xa)]
        }
        InverseKind::Drazin => {
            square(a)?;
            let k = drazin_index(a, tol)? as u32;
            vec![
                res(&(x * &a.pow(k + 1)) - &a.pow(k)),
                res(&(&xa * x) - x),
                res(&ax - &xa),
            ]
        }
        InverseKind::Core => {
            square(a)?;
            vec![
                res(&(&xa * a) - a),
                res(&(&ax * x) - x),
                res(&ax.adjoint() - &ax),
            ]
        }
    };
    let residuals: Vec<(String, f64)> = kind
        .axioms()
        .iter()
        .map(|s| s.to_string())
        .zip(values)
        .collect();
    let holds = residuals.iter().all(|(_, r)| tol.accepts(*r));
    Ok(AxiomReport {
        kind,
        residuals,
        holds,
    })
}

/// Numerical core-invertibility decision: the rank test decides, and a
/// computed inverse must also pass the core axioms.
#[derive(Debug, Clone)]
pub struct CoreProbe {
    pub rank: usize,
    pub group_invertible: bool,
    pub axioms_ok: bool,
    pub borderline: bool,
    pub ill_conditioned: bool,
    pub inverse: Option<ComplexMatrix>,
    pub group: Option<ComplexMatrix>,
}

impl CoreProbe {
    pub fn core_invertible(&self) -> bool {
        self.group_invertible && self.axioms_ok
    }

    /// The test passed the rank gate but the constructed inverse failed its
    /// axioms: a numerical rather than structural outcome.
    pub fn inconsistent(&self) -> bool {
        self.group_invertible && !self.axioms_ok
    }
}

pub fn core_probe(a: &ComplexMatrix, tol: Tolerance) -> Result<CoreProbe> {
    let probe = group_probe(a, tol)?;
    let borderline = probe.borderline;
    let ill_conditioned = probe.ill_conditioned();
    let rank = probe.rank;
    let Some(g) = probe.into_inverse() else {
        return Ok(CoreProbe {
            rank,
            group_invertible: false,
            axioms_ok: false,
            borderline,
            ill_conditioned,
            inverse: None,
            group: None,
        });
    };
    let core = chain(&[&g, a, &moore_penrose(a, tol)]);
    let axioms_ok = verify_axioms(InverseKind::Core, a, &core, tol)?.holds;
    Ok(CoreProbe {
        rank,
        group_invertible: true,
        axioms_ok,
        borderline,
        ill_conditioned,
        inverse: Some(core),
        group: Some(g),
    })
}
