//! The GM(c) family, `0 < c <= 1/3`, and a checkable proof
//! that no member can be physical.
//!
//! Each party has inputs 1..3. The argument adds the same-side pair
//! contexts that a physical box must also realize. Equal single marginals
//! `m = (1−c)/2` force each same-side table into the shape
//! `(t, m−t, m−t, c+t)`: the 01 and 10 entries are both `m − t` because
//! `P(01) = P(0·) − P(00) = m − t = P(·0) − P(00) = P(10)`. So three numbers
//! `α, β, γ` per side describe everything.
//!
//! Four exclusive triples bound them from both sides. The bounds meet at
//! a single point, where a tri-joint exists on each side. Yet the global
//! joint over all six inputs is infeasible, which contradicts the
//! triangle of facts that would make the box local.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::exclusivity::exclusive;
use crate::marginal::{self, Extension, FineConditions};
use crate::pbox::ProbabilityBox;
use crate::rational::Rational;
use crate::scenario::{Event, InputId, Scenario};

/// Same-side input pairs, positions within a party: x1x2 (α), x2x3 (β), x1x3 (γ).
pub const SIDE_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

const A: [&str; 3] = ["A1", "A2", "A3"];
const B: [&str; 3] = ["B1", "B2", "B3"];

fn check_c(c: &Rational) -> Result<(), Error> {
    if !c.is_positive() || *c > Rational::new(1, 3) {
        return Err(Error::ParameterOutOfRange {
            name: "c",
            value: c.clone(),
            range: "0 < c <= 1/3",
        });
    }
    Ok(())
}

fn half(x: Rational) -> Rational {
    x * Rational::new(1, 2)
}

/// `(1−c)/2`, the probability of output 0 on every input.
pub fn marginal(c: &Rational) -> Rational {
    half(Rational::one() - c)
}

/// `(1−3c)/6`, the forced value of each same-side correlator.
pub fn forced_value(c: &Rational) -> Rational {
    (Rational::one() - Rational::from(3) * c) * Rational::new(1, 6)
}

/// Table row on cross context `(Ai, Bj)` (positions 0..3), outcomes 00, 01, 10, 11.
pub fn cross_row(c: &Rational, i: usize, j: usize) -> [Rational; 4] {
    if i == j && i < 2 {
        [marginal(c), Rational::zero(), Rational::zero(), half(Rational::one() + c)]
    } else {
        let third = Rational::new(1, 3);
        [
            forced_value(c),
            third.clone(),
            third,
            (Rational::one() + Rational::from(3) * c) * Rational::new(1, 6),
        ]
    }
}

fn scenario_with(extra: &[&[&str]]) -> Scenario {
    let mut contexts: Vec<&[&str]> = Vec::new();
    let cross: Vec<[&str; 2]> = A.iter().flat_map(|a| B.iter().map(move |b| [*a, *b])).collect();
    contexts.extend(cross.iter().map(|c| c.as_slice()));
    contexts.extend_from_slice(extra);
    Scenario::binary(&[("A", &A), ("B", &B)], &contexts).expect("static scenario")
}

/// Parties A and B with the nine cross contexts only.
pub fn gm_scenario() -> Scenario {
    scenario_with(&[])
}

/// The cross contexts plus the three same-side pairs on each side.
pub fn extended_scenario() -> Scenario {
    scenario_with(&[
        &["A1", "A2"],
        &["A2", "A3"],
        &["A1", "A3"],
        &["B1", "B2"],
        &["B2", "B3"],
        &["B1", "B3"],
    ])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmBox {
    c: Rational,
    pbox: ProbabilityBox,
}

impl GmBox {
    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn pbox(&self) -> &ProbabilityBox {
        &self.pbox
    }

    pub fn into_box(self) -> ProbabilityBox {
        self.pbox
    }

    /// GM(c) together with the same-side tables of `a` and `b`.
    pub fn extended(&self, a: &GmSideExtension, b: &GmSideExtension) -> Result<ProbabilityBox, Error> {
        if a.side != Side::A || b.side != Side::B || a.c != self.c || b.c != self.c {
            return Err(Error::ParameterOutOfRange {
                name: "side",
                value: self.c.clone(),
                range: "one extension per side with matching c",
            });
        }
        let s = extended_scenario();
        let kinds: Vec<Pair> = (0..s.contexts().len()).map(|k| classify(&s, s.context(k).inputs())).collect();
        ProbabilityBox::from_fn(s, |k, o| match kinds[k] {
            Pair::Cross(i, j) => cross_row(&self.c, i, j)[(2 * o[0] + o[1]) as usize].clone(),
            Pair::Same(Side::A, p) => a.entry(p, o[0], o[1]),
            Pair::Same(Side::B, p) => b.entry(p, o[0], o[1]),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pair {
    Cross(usize, usize),
    Same(Side, usize),
}

// Input ids are sorted by label: A1..A3 are 0..3, B1..B3 are 3..6.
fn classify(_s: &Scenario, ids: &[InputId]) -> Pair {
    let (x, y) = (ids[0], ids[1]);
    if x < 3 && y >= 3 {
        return Pair::Cross(x, y - 3);
    }
    let side = if x < 3 { Side::A } else { Side::B };
    let key = (x % 3, y % 3);
    let p = SIDE_PAIRS.iter().position(|q| *q == key).expect("same-side pair");
    Pair::Same(side, p)
}

pub fn gm_box(c: &Rational) -> Result<GmBox, Error> {
    check_c(c)?;
    let s = gm_scenario();
    let cells: Vec<(usize, usize)> = s
        .contexts()
        .iter()
        .map(|ctx| (ctx.inputs()[0], ctx.inputs()[1] - 3))
        .collect();
    let pbox = ProbabilityBox::from_fn(s, |k, o| {
        let (i, j) = cells[k];
        cross_row(c, i, j)[(2 * o[0] + o[1]) as usize].clone()
    })?;
    Ok(GmBox { c: c.clone(), pbox })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn labels(self) -> [&'static str; 3] {
        match self {
            Side::A => A,
            Side::B => B,
        }
    }

    fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// Same-side pair tables `(t, m−t, m−t, c+t)` with `t = α, β, γ` on
/// x1x2, x2x3, x1x3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmSideExtension {
    pub side: Side,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub c: Rational,
}

impl GmSideExtension {
    pub fn new(side: Side, alpha: Rational, beta: Rational, gamma: Rational, c: Rational) -> Result<Self, Error> {
        check_c(&c)?;
        let m = marginal(&c);
        for (name, v) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            if v.is_negative() || *v > m {
                return Err(Error::ParameterOutOfRange {
                    name,
                    value: v.clone(),
                    range: "0 <= value <= (1-c)/2",
                });
            }
        }
        Ok(GmSideExtension { side, alpha, beta, gamma, c })
    }

    pub fn params(&self) -> [&Rational; 3] {
        [&self.alpha, &self.beta, &self.gamma]
    }

    /// `P(ab)` on same-side pair `pair` (index into [`SIDE_PAIRS`]).
    pub fn entry(&self, pair: usize, a: u32, b: u32) -> Rational {
        let t = self.params()[pair];
        match (a, b) {
            (0, 0) => t.clone(),
            (1, 1) => &self.c + t,
            _ => marginal(&self.c) - t,
        }
    }

    /// The three pair tables as a box over this side's inputs alone.
    pub fn to_box(&self) -> ProbabilityBox {
        let labels = self.side.labels();
        let s = Scenario::binary(
            &[(&format!("{}", self.side), &labels)],
            &SIDE_PAIRS.map(|(x, y)| [labels[x], labels[y]]).iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
        )
        .expect("static scenario");
        let pairs: Vec<usize> = s
            .contexts()
            .iter()
            .map(|ctx| SIDE_PAIRS.iter().position(|p| *p == (ctx.inputs()[0], ctx.inputs()[1])).expect("pair"))
            .collect();
        ProbabilityBox::from_fn(s, |k, o| self.entry(pairs[k], o[0], o[1])).expect("validated parameters")
    }

    /// Closed-form tri-joint test for this side.
    pub fn fine_conditions(&self) -> FineConditions {
        marginal::fine_tri_joint_conditions(&self.alpha, &self.beta, &self.gamma, &self.c)
            .expect("validated parameters")
    }
}

/// `constant + coeffs · (α, β, γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub constant: Rational,
    pub coeffs: [Rational; 3],
}

impl Affine {
    fn constant(v: Rational) -> Self {
        Affine { constant: v, coeffs: [Rational::zero(), Rational::zero(), Rational::zero()] }
    }

    fn add(&self, other: &Affine) -> Affine {
        Affine {
            constant: &self.constant + &other.constant,
            coeffs: core::array::from_fn(|k| &self.coeffs[k] + &other.coeffs[k]),
        }
    }

    pub fn eval(&self, point: [&Rational; 3]) -> Rational {
        self.coeffs.iter().zip(point).fold(self.constant.clone(), |acc, (k, v)| acc + k * v)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (k, name) in self.coeffs.iter().zip(["alpha", "beta", "gamma"]) {
            if k.is_zero() {
                continue;
            }
            let sign = if k.is_negative() { '-' } else { '+' };
            if k.abs().is_one() {
                write!(f, " {sign} {name}")?;
            } else {
                write!(f, " {sign} {}*{name}", k.abs())?;
            }
        }
        Ok(())
    }
}

/// Symbolic probability of a two-input event of the extended scenario;
/// same-side events use the symbols of their own side.
pub fn symbolic_probability(c: &Rational, e: &Event) -> Option<Affine> {
    let asg = e.assignment();
    if asg.len() != 2 {
        return None;
    }
    let (o0, o1) = (asg[0].1, asg[1].1);
    match classify(&extended_scenario(), &[asg[0].0, asg[1].0]) {
        Pair::Cross(i, j) => Some(Affine::constant(cross_row(c, i, j)[(2 * o0 + o1) as usize].clone())),
        Pair::Same(_, p) => {
            let mut coeffs = [Rational::zero(), Rational::zero(), Rational::zero()];
            let constant = match (o0, o1) {
                (0, 0) => Rational::zero(),
                (1, 1) => c.clone(),
                _ => marginal(c),
            };
            coeffs[p] = if (o0, o1) == (0, 0) || (o0, o1) == (1, 1) { Rational::one() } else { -Rational::one() };
            Some(Affine { constant, coeffs })
        }
    }
}

/// A pairwise-exclusive triple with its symbolic total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusiveSet {
    pub name: String,
    pub side: Side,
    pub events: Vec<Event>,
    pub total: Affine,
}

impl ExclusiveSet {
    pub fn pairwise_exclusive(&self) -> bool {
        self.events
            .iter()
            .enumerate()
            .all(|(k, a)| self.events[k + 1..].iter().all(|b| exclusive(a, b)))
    }

    /// Recomputes the total from the event list.
    pub fn recompute_total(&self, c: &Rational) -> Option<Affine> {
        self.events
            .iter()
            .try_fold(Affine::constant(Rational::zero()), |acc, e| Some(acc.add(&symbolic_probability(c, e)?)))
    }
}

fn ev(s: &Scenario, side: Side, items: &[(usize, Side, u32)]) -> Event {
    let asg: Vec<(&str, u32)> = items
        .iter()
        .map(|(pos, who, o)| {
            let labels = if *who == side { side.labels() } else { side.other().labels() };
            (labels[*pos], *o)
        })
        .collect();
    s.event(&asg).expect("static event")
}

/// The four exclusive triples S1..S4 for `side` over [`extended_scenario`].
/// For side A:
/// S1 = {(11|A1B1), (10|A2B1), (00|A1A2)},
/// S2 = {(11|A2B2), (10|A3B2), (00|A2A3)},
/// S3 = {(11|A1B1), (10|A3B1), (00|A1A3)},
/// S4 = {(01|A1A2), (01|A2A3), (10|A1A3)}.
/// Side B swaps the roles of the parties.
pub fn exclusive_sets(c: &Rational, side: Side) -> Result<Vec<ExclusiveSet>, Error> {
    check_c(c)?;
    let s = extended_scenario();
    let (me, you) = (side, side.other());
    let triples: [[(usize, Side, u32); 6]; 4] = [
        [(0, me, 1), (0, you, 1), (1, me, 1), (0, you, 0), (0, me, 0), (1, me, 0)],
        [(1, me, 1), (1, you, 1), (2, me, 1), (1, you, 0), (1, me, 0), (2, me, 0)],
        [(0, me, 1), (0, you, 1), (2, me, 1), (0, you, 0), (0, me, 0), (2, me, 0)],
        [(0, me, 0), (1, me, 1), (1, me, 0), (2, me, 1), (0, me, 1), (2, me, 0)],
    ];
    Ok(triples
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let events = t.chunks(2).map(|pair| ev(&s, side, pair)).collect();
            let mut set = ExclusiveSet {
                name: format!("S{}", k + 1),
                side,
                events,
                total: Affine::constant(Rational::zero()),
            };
            set.total = set.recompute_total(c).expect("two-input events");
            set
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundKind {
    /// `params[k] <= value`
    Upper(usize),
    /// `α + β + γ >= value`
    LowerSum,
}

/// A bound obtained by requiring the total of `witness` to be at most 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub kind: BoundKind,
    pub value: Rational,
    pub witness: ExclusiveSet,
}

impl Bound {
    /// Rederives the bound from the witness total.
    pub fn from_witness(witness: ExclusiveSet) -> Option<Bound> {
        let t = &witness.total;
        let slack = Rational::one() - &t.constant;
        let nonzero: Vec<usize> = (0..3).filter(|k| !t.coeffs[*k].is_zero()).collect();
        let kind = if nonzero.len() == 1 && t.coeffs[nonzero[0]].is_one() {
            BoundKind::Upper(nonzero[0])
        } else if t.coeffs.iter().all(|k| *k == -1) {
            BoundKind::LowerSum
        } else {
            return None;
        };
        let value = match kind {
            BoundKind::Upper(_) => slack,
            BoundKind::LowerSum => -slack,
        };
        Some(Bound { kind, value, witness })
    }

    pub fn holds_at(&self, point: [&Rational; 3]) -> bool {
        match self.kind {
            BoundKind::Upper(k) => *point[k] <= self.value,
            BoundKind::LowerSum => point.iter().copied().sum::<Rational>() >= self.value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub upper: [Bound; 3],
    pub lower: Bound,
}

impl Bounds {
    /// The single point meeting every bound when the upper bounds sum to
    /// the lower one.
    pub fn forced_point(&self) -> Option<[Rational; 3]> {
        let u: [Rational; 3] = core::array::from_fn(|k| self.upper[k].value.clone());
        (u.iter().sum::<Rational>() == self.lower.value).then_some(u)
    }
}

/// `α, β, γ <= (1−3c)/6` from S1..S3 and `α+β+γ >= (1−3c)/2` from S4.
pub fn derive_bounds(c: &Rational, side: Side) -> Result<Bounds, Error> {
    let mut sets = exclusive_sets(c, side)?.into_iter();
    let mut next = || Bound::from_witness(sets.next().expect("four sets")).expect("bound shape");
    let upper = [next(), next(), next()];
    let lower = next();
    Ok(Bounds { upper, lower })
}

/// Every step of the argument, each checkable without rerunning the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnphysicalityCertificate {
    pub c: Rational,
    pub bounds: Bounds,
    pub forced_point: [Rational; 3],
    pub fine_check: FineConditions,
    /// Tri-joints over A1..A3 and B1..B3 at the forced point.
    pub side_witnesses: [Extension; 2],
    /// Farkas vector: GM(c) has no joint over all six inputs.
    pub lhv_witness: Extension,
}

impl UnphysicalityCertificate {
    pub fn verify(&self) -> bool {
        let Ok(gm) = gm_box(&self.c) else { return false };
        let m = marginal(&self.c);
        let bounds_ok = [Side::A, Side::B].iter().all(|side| {
            let sets_ok = self.bounds.upper.iter().chain([&self.bounds.lower]).all(|b| {
                b.witness.pairwise_exclusive()
                    && b.witness.recompute_total(&self.c).as_ref() == Some(&b.witness.total)
                    && Bound::from_witness(b.witness.clone()).as_ref() == Some(b)
            });
            // The mirrored side yields the same numbers.
            let mirrored = derive_bounds(&self.c, *side).is_ok_and(|d| {
                d.upper.iter().zip(&self.bounds.upper).all(|(x, y)| x.value == y.value && x.kind == y.kind)
                    && d.lower.value == self.bounds.lower.value
            });
            sets_ok && mirrored
        });
        let kinds_ok = (0..3).all(|k| self.bounds.upper[k].kind == BoundKind::Upper(k))
            && self.bounds.lower.kind == BoundKind::LowerSum;
        let p = &self.forced_point;
        let point_ok = self.bounds.forced_point().as_ref() == Some(p)
            && p.iter().all(|v| !v.is_negative() && *v <= m)
            && marginal::fine_tri_joint_conditions(&p[0], &p[1], &p[2], &self.c).as_ref() == Ok(&self.fine_check)
            && self.fine_check.all_satisfied();
        let sides_ok = [Side::A, Side::B].iter().zip(&self.side_witnesses).all(|(side, w)| {
            let ext = GmSideExtension::new(*side, p[0].clone(), p[1].clone(), p[2].clone(), self.c.clone());
            ext.is_ok_and(|ext| {
                marginal::extension_problem(&ext.to_box(), &[0, 1, 2]).as_ref() == Ok(&w.problem)
                    && w.result.is_feasible()
                    && marginal::verify_certificate(&w.result, &w.problem) == Ok(true)
            })
        });
        let all: Vec<InputId> = (0..6).collect();
        let lhv_ok = marginal::extension_problem(gm.pbox(), &all).as_ref() == Ok(&self.lhv_witness.problem)
            && !self.lhv_witness.result.is_feasible()
            && marginal::verify_certificate(&self.lhv_witness.result, &self.lhv_witness.problem) == Ok(true);
        bounds_ok && kinds_ok && point_ok && sides_ok && lhv_ok
    }
}

pub fn certify_unphysicality(c: &Rational) -> Result<UnphysicalityCertificate, Error> {
    let gm = gm_box(c)?;
    let bounds = derive_bounds(c, Side::A)?;
    let forced_point = bounds.forced_point().ok_or(Error::ParameterOutOfRange {
        name: "c",
        value: c.clone(),
        range: "bounds do not meet",
    })?;
    let [a, b, g] = forced_point.clone();
    let fine_check = marginal::fine_tri_joint_conditions(&a, &b, &g, c)?;
    let side = |s| -> Result<Extension, Error> {
        let ext = GmSideExtension::new(s, a.clone(), b.clone(), g.clone(), c.clone())?;
        marginal::joint_extension_feasibility(&ext.to_box(), &[0, 1, 2])
    };
    let side_witnesses = [side(Side::A)?, side(Side::B)?];
    let lhv_witness = marginal::global_extension(gm.pbox())?;
    Ok(UnphysicalityCertificate { c: c.clone(), bounds, forced_point, fine_check, side_witnesses, lhv_witness })
}

/// `c = k/(3n)` for `k = 1..=n`.
pub fn c_grid(n: usize) -> Vec<Rational> {
    (1..=n).map(|k| Rational::new(k as i64, 3 * n as i64)).collect()
}

#[cfg(test)]
mod tests;
