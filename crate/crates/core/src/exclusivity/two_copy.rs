//! Maximum-weight cliques of a two-copy product box, searched on the
//! single-copy graph.
//!
//! A clique of the product is a set of pairs `(e, f)`. Fixing the first
//! coordinate `e`, the partners `C_e = {f : (e, f) in clique}` form a
//! clique of the base graph. Two pairs with non-exclusive first
//! coordinates must be exclusive in the second, so `C_e ∪ C_e'` is a
//! clique whenever `e` and `e'` are not exclusive. Any family of base
//! cliques obeying that rule is a product clique of weight
//! `Σ_e p(e) · p(C_e)`. We branch over the `C_e` one base event at a
//! time and bound the unassigned ones by the best clique still allowed
//! to each, read from a table over all subsets of the base graph.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::ExclusivityGraph;
use crate::rational::Rational;

/// Largest number of positive-weight base events handled here; the
/// subset table has `2^n` entries.
pub(crate) const MAX_BASE: usize = 20;

/// Heaviest product clique above `floor`, as pairs of base node indices,
/// or `None` when every product clique weighs at most `floor`.
/// Returns `Err(())` if the base graph has too many positive-weight nodes.
#[allow(clippy::result_unit_err)]
pub(crate) fn heaviest_pair_clique(
    g: &ExclusivityGraph,
    weights: &[Rational],
    floor: &Rational,
) -> Result<Option<Vec<(usize, usize)>>, ()> {
    let pos: Vec<usize> = (0..g.len()).filter(|&i| weights[i].is_positive()).collect();
    let n = pos.len();
    if n > MAX_BASE {
        return Err(());
    }
    let mut adj = vec![0u64; n];
    for (a, &i) in pos.iter().enumerate() {
        for (b, &j) in pos.iter().enumerate() {
            if g.adjacent(i, j) {
                adj[a] |= 1 << b;
            }
        }
    }

    // p(e) = a_e / L, so pair weights are a_e a_f / L^2.
    let lcm = weights
        .iter()
        .chain(core::iter::once(floor))
        .fold(BigInt::from(1), |acc, w| lcm(&acc, w.denom()));
    let scaled: Vec<BigInt> = pos.iter().map(|&i| weights[i].numer() * (&lcm / weights[i].denom())).collect();
    let floor2 = floor.numer() * (&lcm / floor.denom()) * &lcm;
    let fits = lcm.bits() <= 48;
    let pairs = if fits {
        let a: Vec<u128> = scaled.iter().map(|x| x.to_u64().expect("below L") as u128).collect();
        Search::run(&adj, &a, floor2.to_u128().expect("fits"))
    } else {
        Search::run(&adj, &scaled, floor2)
    };
    Ok(pairs.map(|ps| ps.into_iter().map(|(e, f)| (pos[e], pos[f])).collect()))
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let t = &x % &y;
        x = y;
        y = t;
    }
    a / x * b
}

struct Search<'a, W> {
    adj: &'a [u64],
    a: &'a [W],
    order: Vec<usize>,
    /// Base cliques with their weights, heaviest first.
    cliques: Vec<(u64, W)>,
    /// `table[mask]`: heaviest clique inside `mask`.
    table: Vec<W>,
    best: W,
    best_assign: Option<Vec<u64>>,
    assign: Vec<u64>,
}

impl<'a, W> Search<'a, W>
where
    W: Clone + Ord + Zero + for<'x> Add<&'x W, Output = W> + for<'x> Mul<&'x W, Output = W>,
{
    fn run(adj: &'a [u64], a: &'a [W], floor: W) -> Option<Vec<(usize, usize)>> {
        let n = adj.len();
        let weight_of = |mask: u64| -> W {
            (0..n).filter(|i| mask >> i & 1 == 1).fold(W::zero(), |acc, i| acc + &a[i])
        };
        let mut cliques = Vec::new();
        collect_cliques(adj, 0, full_mask(n), &mut cliques, 0);
        let mut cliques: Vec<(u64, W)> = cliques.into_iter().map(|c| (c, weight_of(c))).collect();
        cliques.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));

        let mut table = vec![W::zero(); 1 << n];
        for mask in 1usize..(1 << n) {
            let v = mask.trailing_zeros() as usize;
            let without = mask & !(1 << v);
            let with = a[v].clone() + &table[without & adj[v] as usize];
            table[mask] = if with > table[without] { with } else { table[without].clone() };
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|x, y| a[*y].cmp(&a[*x]).then(x.cmp(y)));
        let mut s = Search {
            adj,
            a,
            order,
            cliques,
            table,
            best: floor,
            best_assign: None,
            assign: vec![0; n],
        };
        s.expand(0, W::zero(), vec![full_mask(n); n]);
        let best = s.best_assign?;
        let mut pairs = Vec::new();
        for (e, c) in best.iter().enumerate() {
            for f in 0..n {
                if c >> f & 1 == 1 {
                    pairs.push((e, f));
                }
            }
        }
        Some(pairs)
    }

    fn bound(&self, depth: usize, allowed: &[u64]) -> W {
        self.order[depth..]
            .iter()
            .fold(W::zero(), |acc, &e| acc + &(self.a[e].clone() * &self.table[allowed[e] as usize]))
    }

    fn expand(&mut self, depth: usize, weight: W, allowed: Vec<u64>) {
        if depth == self.order.len() {
            if weight > self.best {
                self.best = weight;
                self.best_assign = Some(self.assign.clone());
            }
            return;
        }
        if weight.clone() + &self.bound(depth, &allowed) <= self.best {
            return;
        }
        let e = self.order[depth];
        let n = self.adj.len();
        let full = full_mask(n);
        // Base events not exclusive with `e` constrain each other.
        let linked = full & !self.adj[e] & !(1 << e);
        for k in 0..self.cliques.len() {
            let (c, ref cw) = self.cliques[k];
            if c & !allowed[e] != 0 {
                continue;
            }
            let gain = self.a[e].clone() * cw;
            let common = (0..n)
                .filter(|f| c >> f & 1 == 1)
                .fold(full, |m, f| m & self.adj[f]);
            let mut next = allowed.clone();
            for (u, m) in next.iter_mut().enumerate() {
                if linked >> u & 1 == 1 {
                    *m &= common;
                }
            }
            let w = weight.clone() + &gain;
            if w.clone() + &self.bound(depth + 1, &next) <= self.best {
                continue;
            }
            self.assign[e] = c;
            self.expand(depth + 1, w, next);
            self.assign[e] = 0;
        }
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Every clique (as a bit mask) built from `start..` inside `cand`.
fn collect_cliques(adj: &[u64], clique: u64, cand: u64, out: &mut Vec<u64>, start: usize) {
    out.push(clique);
    for v in start..adj.len() {
        if cand >> v & 1 == 1 {
            collect_cliques(adj, clique | 1 << v, cand & adj[v], out, v + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exclusivity::{build_exclusivity_graph, heaviest_clique_above, product_box};
    use crate::polytope;

    fn check(pbox: &crate::ProbabilityBox, floor: Rational) {
        let g = build_exclusivity_graph(pbox.scenario(), None).unwrap();
        let w: Vec<Rational> = g.nodes().iter().map(|e| pbox.event_probability(e).unwrap()).collect();
        let pairs = heaviest_pair_clique(&g, &w, &floor).unwrap();

        let p = product_box(pbox, 2).unwrap();
        let pg = build_exclusivity_graph(p.scenario(), None).unwrap();
        let pw: Vec<Rational> = pg.nodes().iter().map(|e| p.event_probability(e).unwrap()).collect();
        let direct = heaviest_clique_above(&pg, &pw, &floor);
        match (pairs, direct) {
            (None, None) => {}
            (Some(ps), Some((_, t))) => {
                for (i, a) in ps.iter().enumerate() {
                    for b in &ps[i + 1..] {
                        assert!(g.adjacent(a.0, b.0) || g.adjacent(a.1, b.1));
                    }
                }
                let total: Rational = ps.iter().map(|(e, f)| &w[*e] * &w[*f]).sum();
                assert_eq!(total, t);
            }
            (x, y) => panic!("structured {x:?} vs direct {y:?}"),
        }
    }

    #[test]
    fn matches_direct_search() {
        check(&crate::bell::pr_box(), Rational::one());
        check(&crate::bell::pr_box(), Rational::zero());
        for name in ["D1", "I1", "I3"] {
            check(&polytope::catalog_box(name).unwrap(), Rational::one());
        }
        for v in polytope::enumerate_vertices() {
            check(&polytope::from_parameterization(&v.params).unwrap(), Rational::one());
        }
    }
}
