//! Two-qubit gate counts for abstract circuit plans.
//!
//! Every Givens rotation and every controlled phase counts as one gate.
//! Plans are JSON:
//!
//! ```json
//! {
//!   "norb": 4,
//!   "operations": [
//!     {"op": "slater_prep", "nalpha": 2, "nbeta": 2},
//!     {"op": "orbital_rotation", "alpha": "dense", "beta": [[1,1,0,0],[1,1,0,0],[0,0,1,1],[0,0,1,1]]},
//!     {"op": "diag_coulomb", "j_ab": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]},
//!     {"op": "num_op"}
//!   ]
//! }
//! ```
//!
//! A mask is `"dense"` or an `norb x norb` matrix whose nonzero entries mark
//! where the operation acts; an omitted mask means no operation on that
//! block. Counts:
//!
//! * orbital rotation, per spin: `N(N-1)/2` if dense, otherwise one gate per
//!   pair `i < j` nonzero in either `(i, j)` or `(j, i)`;
//! * diagonal Coulomb: nonzero strictly-upper entries of `j_aa` and `j_bb`
//!   plus nonzero entries of `j_ab`;
//! * Slater preparation: `n_s (N - n_s)` per spin;
//! * number-operator phases: none.
//!
//! Consecutive orbital rotations are merged before counting. The merged
//! mask is the boolean product of the two masks (diagonals included), or
//! dense if either is dense.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::OrbitalRotationSpec;
use crate::linalg::{CMatrix, RMatrix};
use crate::trotter::TrotterStep;

/// Entries below this magnitude count as zero when deriving masks from
/// numeric matrices.
pub const MASK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Mask {
    Keyword(String),
    Matrix(Vec<Vec<f64>>),
}

impl Mask {
    pub fn dense() -> Self {
        Mask::Keyword("dense".into())
    }

    fn resolve(&self, n: usize) -> Result<Option<Vec<Vec<bool>>>> {
        match self {
            Mask::Keyword(k) if k == "dense" => Ok(None),
            Mask::Keyword(k) => Err(Error::Format(format!("unknown mask keyword {k:?}"))),
            Mask::Matrix(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::ShapeMismatch(format!("mask must be {n} x {n}")));
                }
                Ok(Some(rows.iter().map(|r| r.iter().map(|x| *x != 0.0).collect()).collect()))
            }
        }
    }

    pub fn from_bools(m: &[Vec<bool>]) -> Self {
        Mask::Matrix(m.iter().map(|r| r.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()).collect())
    }

    fn from_complex(u: &CMatrix) -> Self {
        let n = u.nrows();
        Mask::Matrix((0..n).map(|i| (0..n).map(|j| if u[(i, j)].norm() > MASK_TOL { 1.0 } else { 0.0 }).collect()).collect())
    }

    fn from_real(j: &RMatrix) -> Option<Self> {
        if j.iter().all(|x| x.abs() <= MASK_TOL) {
            return None;
        }
        let n = j.nrows();
        Some(Mask::Matrix(
            (0..n).map(|a| (0..n).map(|b| if j[(a, b)].abs() > MASK_TOL { 1.0 } else { 0.0 }).collect()).collect(),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum PlanOp {
    OrbitalRotation {
        #[serde(default)]
        alpha: Option<Mask>,
        #[serde(default)]
        beta: Option<Mask>,
    },
    DiagCoulomb {
        #[serde(default)]
        j_aa: Option<Mask>,
        #[serde(default)]
        j_ab: Option<Mask>,
        #[serde(default)]
        j_bb: Option<Mask>,
    },
    SlaterPrep {
        nalpha: usize,
        nbeta: usize,
    },
    NumOp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitPlan {
    pub norb: usize,
    pub operations: Vec<PlanOp>,
}

impl CircuitPlan {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Plan of a compiled Trotter circuit, with masks read off the matrices.
    pub fn from_trotter_steps(norb: usize, steps: &[TrotterStep]) -> Self {
        let operations = steps
            .iter()
            .map(|step| match step {
                TrotterStep::Rotation(OrbitalRotationSpec { u_alpha, u_beta }) => PlanOp::OrbitalRotation {
                    alpha: Some(Mask::from_complex(u_alpha)),
                    beta: Some(Mask::from_complex(u_beta)),
                },
                TrotterStep::NumOp(_) => PlanOp::NumOp,
                TrotterStep::Coulomb(g) => PlanOp::DiagCoulomb {
                    j_aa: Mask::from_real(&g.j_aa),
                    j_ab: Mask::from_real(&g.j_ab),
                    j_bb: Mask::from_real(&g.j_bb),
                },
            })
            .collect();
        Self { norb, operations }
    }
}

/// `None` is a dense mask.
type Resolved = Option<Vec<Vec<bool>>>;

fn compose(n: usize, first: &Option<Resolved>, second: &Option<Resolved>) -> Option<Resolved> {
    match (first, second) {
        (None, x) | (x, None) => x.clone(),
        (Some(None), _) | (_, Some(None)) => Some(None),
        (Some(Some(a)), Some(Some(b))) => {
            let with_diag = |m: &Vec<Vec<bool>>, i: usize, j: usize| m[i][j] || i == j;
            Some(Some(
                (0..n)
                    .map(|i| (0..n).map(|j| (0..n).any(|k| with_diag(b, i, k) && with_diag(a, k, j))).collect())
                    .collect(),
            ))
        }
    }
}

fn rotation_gates(n: usize, mask: &Option<Resolved>) -> usize {
    match mask {
        None => 0,
        Some(None) => n * n.saturating_sub(1) / 2,
        Some(Some(m)) => (0..n).map(|i| (i + 1..n).filter(|&j| m[i][j] || m[j][i]).count()).sum(),
    }
}

/// Counts two-qubit gates after merging consecutive orbital rotations.
pub fn count_two_qubit_gates(plan: &CircuitPlan) -> Result<usize> {
    let n = plan.norb;
    let mut total = 0;
    let mut pending: Option<(Option<Resolved>, Option<Resolved>)> = None;
    let flush = |pending: &mut Option<(Option<Resolved>, Option<Resolved>)>| -> usize {
        match pending.take() {
            Some((a, b)) => rotation_gates(n, &a) + rotation_gates(n, &b),
            None => 0,
        }
    };
    let resolve = |m: &Option<Mask>| -> Result<Option<Resolved>> { m.as_ref().map(|m| m.resolve(n)).transpose() };
    for op in &plan.operations {
        match op {
            PlanOp::OrbitalRotation { alpha, beta } => {
                let (a, b) = (resolve(alpha)?, resolve(beta)?);
                pending = Some(match pending.take() {
                    None => (a, b),
                    Some((pa, pb)) => (compose(n, &pa, &a), compose(n, &pb, &b)),
                });
            }
            PlanOp::DiagCoulomb { j_aa, j_ab, j_bb } => {
                total += flush(&mut pending);
                for m in [resolve(j_aa)?, resolve(j_bb)?].into_iter().flatten() {
                    total += match m {
                        None => n * n.saturating_sub(1) / 2,
                        Some(m) => (0..n).map(|i| (i + 1..n).filter(|&j| m[i][j]).count()).sum(),
                    };
                }
                if let Some(m) = resolve(j_ab)? {
                    total += match m {
                        None => n * n,
                        Some(m) => m.iter().flatten().filter(|&&b| b).count(),
                    };
                }
            }
            PlanOp::SlaterPrep { nalpha, nbeta } => {
                total += flush(&mut pending);
                if *nalpha > n || *nbeta > n {
                    return Err(Error::InvalidSector(format!("slater_prep exceeds {n} orbitals")));
                }
                total += nalpha * (n - nalpha) + nbeta * (n - nbeta);
            }
            PlanOp::NumOp => total += flush(&mut pending),
        }
    }
    total += flush(&mut pending);
    Ok(total)
}
