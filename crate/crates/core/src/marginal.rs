//! The marginal problem: does one global distribution over a set of
//! inputs reproduce every context table of a box?
//!
//! The unknowns are the probabilities of global assignments ("atoms").
//! Each full-context event contributes the equation "sum of atoms
//! consistent with the event = its probability". The exact simplex either
//! returns a joint distribution or a Farkas vector proving none exists.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::lp::{self, Feasibility};
use crate::pbox::ProbabilityBox;
use crate::rational::Rational;
use crate::scenario::{Event, InputId, Scenario};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionProblem {
    /// Variables in canonical order; atoms enumerate their joint outputs
    /// lexicographically with the first variable most significant.
    pub variables: Vec<InputId>,
    pub cardinalities: Vec<u32>,
    /// One row per full-context event of the box.
    pub rows: Vec<Event>,
    pub rhs: Vec<Rational>,
}

impl ExtensionProblem {
    pub fn atom_count(&self) -> usize {
        self.cardinalities.iter().map(|c| *c as usize).product()
    }

    pub fn atom(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.variables.len()];
        for slot in (0..out.len()).rev() {
            let n = self.cardinalities[slot] as usize;
            out[slot] = (idx % n) as u32;
            idx /= n;
        }
        out
    }

    fn consistent(&self, row: &Event, atom: &[u32]) -> bool {
        row.assignment().iter().all(|(i, o)| {
            let slot = self.variables.binary_search(i).expect("row inside variable set");
            atom[slot] == *o
        })
    }

    /// Dense 0/1 constraint matrix, rows × atoms.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        let atoms: Vec<Vec<u32>> = (0..self.atom_count()).map(|k| self.atom(k)).collect();
        self.rows
            .iter()
            .map(|row| {
                atoms
                    .iter()
                    .map(|a| {
                        if self.consistent(row, a) {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    /// Probability of each atom.
    Feasible { joint: Vec<Rational> },
    /// One multiplier per row: `yᵀA <= 0` on every atom, `yᵀb > 0`.
    Infeasible { farkas: Vec<Rational> },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub problem: ExtensionProblem,
    pub result: FeasibilityResult,
}

/// Builds the extension problem of `pbox` over `variables`.
pub fn extension_problem(
    pbox: &ProbabilityBox,
    variables: &[InputId],
) -> Result<ExtensionProblem, Error> {
    let s = pbox.scenario();
    let mut vars: Vec<InputId> = variables.to_vec();
    vars.sort_unstable();
    vars.dedup();
    for v in &vars {
        if *v >= s.inputs().len() {
            return Err(Error::UnknownInput(alloc::format!("#{v}")));
        }
    }
    for ctx in s.contexts() {
        if let Some(i) = ctx.inputs().iter().find(|i| vars.binary_search(i).is_err()) {
            return Err(Error::VariableSetMissing(s.input(*i).label.clone()));
        }
    }
    let rows = s.full_context_events();
    let rhs = rows
        .iter()
        .map(|e| pbox.event_probability(e))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtensionProblem {
        cardinalities: vars.iter().map(|v| s.input(*v).outputs).collect(),
        variables: vars,
        rows,
        rhs,
    })
}

/// Decides whether a joint distribution over `variables` has every
/// context table of `pbox` as a marginal.
pub fn joint_extension_feasibility(
    pbox: &ProbabilityBox,
    variables: &[InputId],
) -> Result<Extension, Error> {
    let problem = extension_problem(pbox, variables)?;
    let result = match lp::solve(&problem.matrix(), &problem.rhs) {
        Feasibility::Feasible(joint) => FeasibilityResult::Feasible { joint },
        Feasibility::Infeasible(farkas) => FeasibilityResult::Infeasible { farkas },
    };
    Ok(Extension { problem, result })
}

/// LHV question: extension over every input of the scenario.
pub fn global_extension(pbox: &ProbabilityBox) -> Result<Extension, Error> {
    let all: Vec<InputId> = (0..pbox.scenario().inputs().len()).collect();
    joint_extension_feasibility(pbox, &all)
}

/// Audits a witness by direct arithmetic, without solving anything.
pub fn verify_certificate(
    result: &FeasibilityResult,
    problem: &ExtensionProblem,
) -> Result<bool, Error> {
    let a = problem.matrix();
    match result {
        FeasibilityResult::Feasible { joint } => {
            if joint.len() != problem.atom_count() {
                return Err(Error::DimensionMismatch {
                    expected: problem.atom_count(),
                    found: joint.len(),
                });
            }
            Ok(joint.iter().sum::<Rational>().is_one() && lp::is_solution(&a, &problem.rhs, joint))
        }
        FeasibilityResult::Infeasible { farkas } => {
            if farkas.len() != problem.rows.len() {
                return Err(Error::DimensionMismatch {
                    expected: problem.rows.len(),
                    found: farkas.len(),
                });
            }
            Ok(lp::is_farkas(&a, &problem.rhs, farkas))
        }
    }
}

/// Closed-form test for a tri-joint behind the symmetric three-pair box
/// with all single marginals `m = (1−c)/2` and pair correlators
/// `P(00|x1x2) = α`, `P(00|x2x3) = β`, `P(00|x1x3) = γ`.
///
/// With `t = P(000)` free, the remaining seven atoms are affine in `t`
/// (e.g. `P(111) = α+β+γ − (1−3c)/2 − t`), and a valid `t` exists iff
/// the four flags below hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FineConditions {
    /// `α + β + γ >= (1−3c)/2`
    pub sum_lower: bool,
    /// `β + γ − α <= (1−c)/2`
    pub beta_gamma: bool,
    /// `α + β − γ <= (1−c)/2`
    pub alpha_beta: bool,
    /// `α + γ − β <= (1−c)/2`
    pub alpha_gamma: bool,
}

impl FineConditions {
    pub fn all_satisfied(&self) -> bool {
        self.sum_lower && self.beta_gamma && self.alpha_beta && self.alpha_gamma
    }
}

/// Requires `0 < c <= 1/3` and `0 <= α, β, γ <= (1−c)/2`.
pub fn fine_tri_joint_conditions(
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    c: &Rational,
) -> Result<FineConditions, Error> {
    if !c.is_positive() || *c > Rational::new(1, 3) {
        return Err(Error::ParameterOutOfRange {
            name: "c",
            value: c.clone(),
            range: "0 < c <= 1/3",
        });
    }
    let m = (Rational::one() - c) * Rational::new(1, 2);
    for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if v.is_negative() || *v > m {
            return Err(Error::ParameterOutOfRange {
                name,
                value: v.clone(),
                range: "0 <= value <= (1-c)/2",
            });
        }
    }
    let k = (Rational::one() - Rational::from(3) * c) * Rational::new(1, 2);
    Ok(FineConditions {
        sum_lower: alpha + beta + gamma.clone() >= k,
        beta_gamma: beta + gamma - alpha <= m,
        alpha_beta: alpha + beta - gamma <= m,
        alpha_gamma: alpha + gamma - beta <= m,
    })
}

/// One Clauser–Horne expression
/// `P(oo|a0b0) + P(oo|a0b1) + P(oo|a1b0) − P(oo|a1b1) − P(o|a0) − P(o|b0)`.
/// Local boxes keep every such value in `[−1, 0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChValue {
    pub a: [InputId; 2],
    pub b: [InputId; 2],
    pub outcome: u32,
    pub value: Rational,
}

impl ChValue {
    pub fn within_bounds(&self) -> bool {
        self.value <= 0 && self.value >= -1
    }
}

fn ch_expression(
    pbox: &ProbabilityBox,
    a: [InputId; 2],
    b: [InputId; 2],
    o: u32,
) -> Result<Rational, Error> {
    let p = |ids: &[InputId]| pbox.event_probability(&Event::new(ids.iter().map(|i| (*i, o)).collect()));
    Ok(p(&[a[0], b[0]])? + p(&[a[0], b[1]])? + p(&[a[1], b[0]])?
        - p(&[a[1], b[1]])?
        - p(&[a[0]])?
        - p(&[b[0]])?)
}

fn bipartite_parties(s: &Scenario) -> Result<(Vec<InputId>, Vec<InputId>), Error> {
    if s.parties().len() != 2 || s.inputs().iter().any(|i| i.outputs != 2) {
        return Err(Error::NotBipartite);
    }
    Ok((s.party_inputs(0), s.party_inputs(1)))
}

/// The eight CH variants for settings `(i, i′ | j, j′)` (1-based positions
/// within each party's inputs): each of the four corners as the subtracted
/// term, with output label 0 and with 1. The canonical variant, which
/// subtracts `(i′, j′)` with label 0, comes first.
pub fn ch_values(
    pbox: &ProbabilityBox,
    settings: (usize, usize, usize, usize),
) -> Result<Vec<ChValue>, Error> {
    let (pa, pb) = bipartite_parties(pbox.scenario())?;
    let (i, i2, j, j2) = settings;
    let pick = |list: &[InputId], k: usize| -> Result<InputId, Error> {
        k.checked_sub(1)
            .and_then(|k| list.get(k).copied())
            .ok_or_else(|| Error::SettingsOutOfRange(alloc::format!("{k}")))
    };
    let (x, x2, y, y2) = (pick(&pa, i)?, pick(&pa, i2)?, pick(&pb, j)?, pick(&pb, j2)?);
    if x == x2 || y == y2 {
        return Err(Error::SettingsOutOfRange(alloc::format!("({i},{i2}|{j},{j2})")));
    }
    let mut out = Vec::with_capacity(8);
    for o in 0..2 {
        for a in [[x, x2], [x2, x]] {
            for b in [[y, y2], [y2, y]] {
                out.push(ChValue {
                    a,
                    b,
                    outcome: o,
                    value: ch_expression(pbox, a, b, o)?,
                });
            }
        }
    }
    Ok(out)
}

/// CH values over every pair of settings on each side.
pub fn ch_all(pbox: &ProbabilityBox) -> Result<Vec<ChValue>, Error> {
    let (pa, pb) = bipartite_parties(pbox.scenario())?;
    let mut out = Vec::new();
    for i in 1..=pa.len() {
        for i2 in i + 1..=pa.len() {
            for j in 1..=pb.len() {
                for j2 in j + 1..=pb.len() {
                    out.extend(ch_values(pbox, (i, i2, j, j2))?);
                }
            }
        }
    }
    Ok(out)
}
