//! The no-disturbance polytope of the three-input, two-output scenario.
//!
//! A box is fixed by six numbers: the single marginals `m_i = P(o_i=0|x_i)`
//! and the pair correlators `c_ij = P(o_i=o_j=0|x_i x_j)`. Its twelve table
//! entries are affine in these, and nonnegativity of each entry is one
//! facet. Vertices are found by solving every 6-subset of facets.

mod nd;

pub use nd::{check_no_disturbance, NdReport, NdViolation};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::linalg;
use crate::lp::{self, Feasibility};
use crate::pbox::ProbabilityBox;
use crate::rational::Rational;
use crate::scenario::Scenario;

/// Labels of the canonical three-input scenario.
pub const INPUTS: [&str; 3] = ["x1", "x2", "x3"];

/// Input pairs in table order: `x1x2`, `x2x3`, `x1x3`.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

const PARAM_NAMES: [&str; 6] = ["m1", "m2", "m3", "c12", "c23", "c13"];

/// Single party `P` with binary inputs `x1, x2, x3` and the three pair contexts.
pub fn three_input_scenario() -> Scenario {
    Scenario::binary(
        &[("P", &INPUTS)],
        &[&["x1", "x2"], &["x2", "x3"], &["x1", "x3"]],
    )
    .expect("static scenario")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NdParameterization {
    pub m1: Rational,
    pub m2: Rational,
    pub m3: Rational,
    pub c12: Rational,
    pub c23: Rational,
    pub c13: Rational,
}

impl NdParameterization {
    pub fn new(values: [Rational; 6]) -> Self {
        let [m1, m2, m3, c12, c23, c13] = values;
        NdParameterization { m1, m2, m3, c12, c23, c13 }
    }

    /// `[m1, m2, m3, c12, c23, c13]`.
    pub fn to_array(&self) -> [Rational; 6] {
        [
            self.m1.clone(),
            self.m2.clone(),
            self.m3.clone(),
            self.c12.clone(),
            self.c23.clone(),
            self.c13.clone(),
        ]
    }

    fn m(&self, i: usize) -> &Rational {
        [&self.m1, &self.m2, &self.m3][i]
    }

    fn c(&self, pair: usize) -> &Rational {
        [&self.c12, &self.c23, &self.c13][pair]
    }

    /// Table entry for `pair` (index into [`PAIRS`]) and outcome `(a, b)`.
    pub fn entry(&self, pair: usize, a: u32, b: u32) -> Rational {
        let (i, j) = PAIRS[pair];
        let c = self.c(pair);
        match (a, b) {
            (0, 0) => c.clone(),
            (0, 1) => self.m(i) - c,
            (1, 0) => self.m(j) - c,
            _ => Rational::one() - self.m(i) - self.m(j) + c,
        }
    }
}

/// One of the twelve positivity facets: `constant + coeffs · params >= 0`,
/// the nonnegativity of table entry `outcome` in `PAIRS[pair]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub index: usize,
    pub pair: usize,
    pub outcome: (u32, u32),
    pub coeffs: [i64; 6],
    pub constant: i64,
}

impl Facet {
    pub fn value(&self, p: &NdParameterization) -> Rational {
        p.to_array()
            .iter()
            .zip(self.coeffs)
            .fold(Rational::from(self.constant), |acc, (v, c)| acc + v * &Rational::from(c))
    }

    /// e.g. `"m1 - c12 >= 0"`.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        if self.constant != 0 {
            s.push_str(&format!("{}", self.constant));
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            if s.is_empty() {
                if *c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if c.abs() != 1 {
                s.push_str(&format!("{}", c.abs()));
            }
            s.push_str(PARAM_NAMES[k]);
        }
        s.push_str(" >= 0");
        s
    }
}

/// The twelve facets, ordered by pair (`x1x2`, `x2x3`, `x1x3`) then outcome.
pub fn facets() -> Vec<Facet> {
    let mut out = Vec::with_capacity(12);
    for (pair, &(i, j)) in PAIRS.iter().enumerate() {
        let c = 3 + pair;
        for (a, b) in [(0u32, 0u32), (0, 1), (1, 0), (1, 1)] {
            let mut coeffs = [0i64; 6];
            let constant = match (a, b) {
                (0, 0) => {
                    coeffs[c] = 1;
                    0
                }
                (0, 1) => {
                    coeffs[i] = 1;
                    coeffs[c] = -1;
                    0
                }
                (1, 0) => {
                    coeffs[j] = 1;
                    coeffs[c] = -1;
                    0
                }
                _ => {
                    coeffs[i] = -1;
                    coeffs[j] = -1;
                    coeffs[c] = 1;
                    1
                }
            };
            out.push(Facet {
                index: out.len(),
                pair,
                outcome: (a, b),
                coeffs,
                constant,
            });
        }
    }
    out
}

fn check_shape(pbox: &ProbabilityBox) -> Result<[usize; 3], Error> {
    let s = pbox.scenario();
    if s.inputs().len() != 3
        || s.inputs().iter().any(|i| i.outputs != 2)
        || s.contexts().len() != 3
        || s.contexts().iter().any(|c| c.len() != 2)
    {
        return Err(Error::NotThreeInputScenario);
    }
    let mut idx = [0usize; 3];
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        idx[p] = s
            .contexts()
            .iter()
            .position(|c| c.inputs() == [i, j])
            .ok_or(Error::NotThreeInputScenario)?;
    }
    Ok(idx)
}

/// Reads `(m1, m2, m3, c12, c23, c13)` off an ND box on three binary
/// inputs (taken in canonical label order).
pub fn to_parameterization(pbox: &ProbabilityBox) -> Result<NdParameterization, Error> {
    let ctx = check_shape(pbox)?;
    if !check_no_disturbance(pbox).passes() {
        return Err(Error::NotNoDisturbance);
    }
    let t = |pair: usize, a: u32, b: u32| pbox.entry(ctx[pair], &[a, b]).clone();
    let m = |pair: usize| t(pair, 0, 0) + t(pair, 0, 1);
    Ok(NdParameterization {
        m1: m(0),
        m2: m(1),
        m3: t(1, 1, 0) + t(1, 0, 0),
        c12: t(0, 0, 0),
        c23: t(1, 0, 0),
        c13: t(2, 0, 0),
    })
}

/// The first violated facet, if any.
pub fn violated_facet(p: &NdParameterization) -> Option<Facet> {
    facets().into_iter().find(|f| f.value(p).is_negative())
}

/// Builds the box on [`three_input_scenario`] from the six parameters.
pub fn from_parameterization(p: &NdParameterization) -> Result<ProbabilityBox, Error> {
    if let Some(f) = violated_facet(p) {
        return Err(Error::FacetViolated(f.describe()));
    }
    let s = three_input_scenario();
    let pair_of: Vec<usize> = s
        .contexts()
        .iter()
        .map(|c| {
            let ij = (c.inputs()[0], c.inputs()[1]);
            PAIRS.iter().position(|p| *p == ij).expect("pair context")
        })
        .collect();
    ProbabilityBox::from_fn(s, |k, o| p.entry(pair_of[k], o[0], o[1]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub params: NdParameterization,
    pub deterministic: bool,
    /// Indices into [`facets`] of every facet tight at this vertex.
    pub saturated_facets: Vec<usize>,
}

impl Vertex {
    /// Outputs `(o1, o2, o3)` of a deterministic vertex.
    pub fn outputs(&self) -> Option<[u32; 3]> {
        if !self.deterministic {
            return None;
        }
        let o = |m: &Rational| if m.is_one() { 0 } else { 1 };
        Some([o(&self.params.m1), o(&self.params.m2), o(&self.params.m3)])
    }

    pub fn to_box(&self) -> ProbabilityBox {
        from_parameterization(&self.params).expect("vertex lies in the polytope")
    }

    fn sort_key(&self) -> (bool, u32, [u32; 3], [Rational; 3]) {
        match self.outputs() {
            Some(o) => (false, o.iter().sum(), o, Default::default()),
            None => (
                true,
                0,
                [0; 3],
                [-&self.params.c12, -&self.params.c23, -&self.params.c13],
            ),
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Every vertex of the polytope: each 6-subset of facets is solved as an
/// equality system; singular systems are skipped, infeasible points
/// dropped and duplicates merged.
///
/// Order: deterministic vertices by number of 1 outputs then
/// lexicographically, then the indeterministic ones by `(c12, c23, c13)`
/// descending.
pub fn enumerate_vertices() -> Vec<Vertex> {
    let fs = facets();
    let mut points: Vec<NdParameterization> = Vec::new();
    for basis in combinations(fs.len(), 6) {
        let a: Vec<Vec<Rational>> = basis
            .iter()
            .map(|&f| fs[f].coeffs.iter().map(|c| Rational::from(*c)).collect())
            .collect();
        let b: Vec<Rational> = basis.iter().map(|&f| Rational::from(-fs[f].constant)).collect();
        let Some(x) = linalg::solve_square(a, b) else {
            continue;
        };
        let p = NdParameterization::new(x.try_into().expect("six coordinates"));
        if violated_facet(&p).is_none() && !points.contains(&p) {
            points.push(p);
        }
    }
    let mut vertices: Vec<Vertex> = points
        .into_iter()
        .map(|params| {
            let saturated_facets = fs
                .iter()
                .filter(|f| f.value(&params).is_zero())
                .map(|f| f.index)
                .collect();
            let deterministic = params.to_array().iter().all(|v| v.is_zero() || v.is_one());
            Vertex {
                params,
                deterministic,
                saturated_facets,
            }
        })
        .collect();
    vertices.sort_by_key(Vertex::sort_key);
    vertices
}

/// Vertices with their conventional names `D1..D8`, `I1..I4`.
pub fn extremal_catalog() -> Vec<(String, Vertex)> {
    let mut d = 0;
    let mut i = 0;
    enumerate_vertices()
        .into_iter()
        .map(|v| {
            let name = if v.deterministic {
                d += 1;
                format!("D{d}")
            } else {
                i += 1;
                format!("I{i}")
            };
            (name, v)
        })
        .collect()
}

/// Looks up a catalog vertex by name (`"D1"`, `"I3"`, ...).
pub fn catalog_box(name: &str) -> Option<ProbabilityBox> {
    extremal_catalog()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v.to_box())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Convex weights aligned with [`enumerate_vertices`].
    Inside(Vec<Rational>),
    Outside(Facet),
}

/// Writes `p` as a convex combination of the twelve vertices, or names a
/// violated facet.
pub fn decompose_membership(p: &NdParameterization) -> Membership {
    decompose_over(&enumerate_vertices(), p)
}

/// [`decompose_membership`] against a precomputed vertex list.
pub fn decompose_over(vs: &[Vertex], p: &NdParameterization) -> Membership {
    if let Some(f) = violated_facet(p) {
        return Membership::Outside(f);
    }
    let mut a: Vec<Vec<Rational>> = (0..6)
        .map(|coord| vs.iter().map(|v| v.params.to_array()[coord].clone()).collect())
        .collect();
    a.push(vec![Rational::one(); vs.len()]);
    let mut b: Vec<Rational> = p.to_array().to_vec();
    b.push(Rational::one());
    match lp::solve(&a, &b) {
        Feasibility::Feasible(w) => Membership::Inside(w),
        Feasibility::Infeasible(_) => unreachable!("facet-feasible point outside the vertex hull"),
    }
}

/// `Σ wᵢ vᵢ`; `None` unless the weights are a probability vector with
/// one entry per vertex.
pub fn reconstruct(vs: &[Vertex], weights: &[Rational]) -> Option<NdParameterization> {
    if weights.len() != vs.len()
        || weights.iter().any(Rational::is_negative)
        || !weights.iter().sum::<Rational>().is_one()
    {
        return None;
    }
    let mut acc: [Rational; 6] = Default::default();
    for (w, v) in weights.iter().zip(vs) {
        for (a, x) in acc.iter_mut().zip(v.params.to_array()) {
            *a += &(w * &x);
        }
    }
    Some(NdParameterization::new(acc))
}
