//! Clique search on exclusivity graphs.

use alloc::vec::Vec;
use core::ops::Add;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::bitset::BitSet;
use super::ExclusivityGraph;
use crate::rational::Rational;

/// All maximal cliques (Bron–Kerbosch with Tomita pivoting). Each clique
/// is sorted and the list is in lexicographic order.
pub fn maximal_cliques(g: &ExclusivityGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut out = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, BitSet::full(n), BitSet::new(n), &mut out);
    for c in out.iter_mut() {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    g: &ExclusivityGraph,
    r: &mut Vec<usize>,
    mut p: BitSet,
    mut x: BitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| (p.intersection_len(&g.adj[u]), core::cmp::Reverse(u)))
        .expect("P nonempty");
    let todo: Vec<usize> = p.difference(&g.adj[pivot]).iter().collect();
    for v in todo {
        r.push(v);
        bron_kerbosch(g, r, p.intersection(&g.adj[v]), x.intersection(&g.adj[v]), out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// Maximum total weight over all cliques, with one optimal clique
/// (sorted). Weights must be nonnegative; the empty clique has weight 0.
///
/// Exact branch and bound: candidates are greedily partitioned into
/// independent sets and a clique picks at most one vertex from each, so
/// the sum of per-class maxima bounds any extension.
pub fn max_weight_clique(g: &ExclusivityGraph, weights: &[Rational]) -> (Vec<usize>, Rational) {
    heaviest_clique_above(g, weights, &Rational::zero()).unwrap_or((Vec::new(), Rational::zero()))
}

/// The heaviest clique whose weight strictly exceeds `floor`, if any.
/// Branches that cannot beat `floor` are cut, so a high floor makes the
/// search much cheaper than a plain maximum.
pub fn heaviest_clique_above(
    g: &ExclusivityGraph,
    weights: &[Rational],
    floor: &Rational,
) -> Option<(Vec<usize>, Rational)> {
    assert_eq!(weights.len(), g.len(), "one weight per node");
    assert!(weights.iter().all(|w| !w.is_negative()), "weights must be nonnegative");
    assert!(!floor.is_negative(), "floor must be nonnegative");

    // Scale to a common denominator so the search runs on integers.
    let lcm = weights
        .iter()
        .chain(core::iter::once(floor))
        .fold(BigInt::from(1), |acc, w| num_integer_lcm(&acc, w.denom()));
    let scale = |w: &Rational| w.numer() * (&lcm / w.denom());
    let scaled: Vec<BigInt> = weights.iter().map(scale).collect();
    let scaled_floor = scale(floor);
    let small: Option<(Vec<u128>, u128)> = {
        let v: Option<Vec<u128>> = scaled.iter().map(|b| b.to_u64().map(u128::from)).collect();
        let f = scaled_floor.to_u64().map(u128::from);
        v.zip(f)
            .filter(|(v, _)| v.iter().try_fold(0u128, |a, b| a.checked_add(*b)).is_some())
    };
    let clique = match small {
        Some((ws, f)) => search(g, &ws, f),
        None => search(g, &scaled, scaled_floor),
    }?;
    let total = clique.iter().map(|&i| &weights[i]).sum();
    Some((clique, total))
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let t = &x % &y;
        x = y;
        y = t;
    }
    a / x * b
}

struct Search<'a, W> {
    g: &'a ExclusivityGraph,
    w: &'a [W],
    best: W,
    best_clique: Vec<usize>,
    current: Vec<usize>,
    found: bool,
}

fn search<W>(g: &ExclusivityGraph, w: &[W], floor: W) -> Option<Vec<usize>>
where
    W: Clone + Ord + Zero + for<'x> Add<&'x W, Output = W>,
{
    let mut cand = BitSet::new(g.len());
    for (i, wi) in w.iter().enumerate() {
        if !wi.is_zero() {
            cand.insert(i);
        }
    }
    let mut s = Search {
        g,
        w,
        best: floor,
        best_clique: Vec::new(),
        current: Vec::new(),
        found: false,
    };
    s.expand(W::zero(), cand);
    let found = s.found;
    let mut c = s.best_clique;
    c.sort_unstable();
    found.then_some(c)
}

impl<W> Search<'_, W>
where
    W: Clone + Ord + Zero + for<'x> Add<&'x W, Output = W>,
{
    fn expand(&mut self, weight: W, cand: BitSet) {
        if cand.is_empty() {
            if weight > self.best {
                self.best = weight;
                self.best_clique = self.current.clone();
                self.found = true;
            }
            return;
        }
        // Heaviest vertices first, so each class's maximum is its first member.
        let mut order: Vec<usize> = cand.iter().collect();
        order.sort_by(|a, b| self.w[*b].cmp(&self.w[*a]).then(a.cmp(b)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in order {
            match classes
                .iter_mut()
                .find(|cl| cl.iter().all(|u| !self.g.adj[v].contains(*u)))
            {
                Some(cl) => cl.push(v),
                None => classes.push(alloc::vec![v]),
            }
        }
        let mut bounds = Vec::with_capacity(classes.len());
        let mut acc = W::zero();
        for cl in &classes {
            acc = acc + &self.w[cl[0]];
            bounds.push(acc.clone());
        }

        let mut remaining = cand;
        for (c, cl) in classes.iter().enumerate().rev() {
            if weight.clone() + &bounds[c] <= self.best {
                return;
            }
            for &v in cl.iter().rev() {
                self.current.push(v);
                let next = remaining.intersection(&self.g.adj[v]);
                self.expand(weight.clone() + &self.w[v], next);
                self.current.pop();
                remaining.remove(v);
            }
        }
    }
}
