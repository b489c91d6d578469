use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::level_one::{e1_check, E1ViolationCertificate};
use super::two_copy::heaviest_pair_clique;
use super::{build_exclusivity_graph, heaviest_clique_above};
use crate::error::Error;
use crate::marginal::global_extension;
use crate::pbox::ProbabilityBox;
use crate::rational::Rational;
use crate::scenario::{Event, InputId, PartySpec, Scenario};

/// Copy `c` (1-based) of a label.
fn tag(label: &str, copy: usize) -> String {
    format!("{label}@{copy}")
}

/// The box describing `k` independent uses of `pbox`. Copy `c` of input
/// `x` is labelled `x@c` (party likewise); contexts are all tuples of
/// original contexts and entries multiply. `k = 1` returns the box as is.
pub fn product_box(pbox: &ProbabilityBox, k: usize) -> Result<ProbabilityBox, Error> {
    match k {
        1 => Ok(pbox.clone()),
        2 => Ok(square(pbox)),
        _ => Err(Error::CopiesOutOfRange(k)),
    }
}

fn square(pbox: &ProbabilityBox) -> ProbabilityBox {
    let s = pbox.scenario();
    let mut parties = Vec::new();
    for copy in 1..=2 {
        for (p, name) in s.parties().iter().enumerate() {
            parties.push(PartySpec {
                name: tag(name, copy),
                inputs: s
                    .party_inputs(p)
                    .into_iter()
                    .map(|i| (tag(&s.input(i).label, copy), s.input(i).outputs))
                    .collect(),
            });
        }
    }
    let mut contexts = Vec::new();
    for c1 in s.contexts() {
        for c2 in s.contexts() {
            let mut labels: Vec<String> = c1.inputs().iter().map(|i| tag(&s.input(*i).label, 1)).collect();
            labels.extend(c2.inputs().iter().map(|i| tag(&s.input(*i).label, 2)));
            contexts.push(labels);
        }
    }
    let product = Scenario::new(parties, contexts).expect("product of a valid scenario");

    // Product input id -> (copy, original input id).
    let origin: Vec<(usize, InputId)> = product
        .inputs()
        .iter()
        .map(|inp| {
            let (base, copy) = inp.label.rsplit_once('@').expect("tagged label");
            (
                if copy == "1" { 0 } else { 1 },
                s.input_id(base).expect("original label"),
            )
        })
        .collect();

    ProbabilityBox::from_fn(product.clone(), |k, outs| {
        let mut parts: [Vec<(InputId, u32)>; 2] = [Vec::new(), Vec::new()];
        for (i, o) in product.context(k).inputs().iter().zip(outs) {
            let (copy, orig) = origin[*i];
            parts[copy].push((orig, *o));
        }
        let [a, b] = parts;
        let pa = pbox.event_probability(&Event::new(a)).expect("copy-1 event");
        let pb = pbox.event_probability(&Event::new(b)).expect("copy-2 event");
        pa * pb
    })
    .expect("product of distributions is a distribution")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoOutcome {
    Pass,
    /// A violation on the `k`-copy box, checkable against [`LoOutcome`]'s
    /// product box with [`E1ViolationCertificate::verify`].
    Violation {
        product: ProbabilityBox,
        certificate: E1ViolationCertificate,
    },
}

impl LoOutcome {
    pub fn passes(&self) -> bool {
        matches!(self, LoOutcome::Pass)
    }
}

/// Exclusivity at `k` copies. `k = 1` reports the worst single-copy
/// violation; `k = 2` lifts a single-copy violation when there is one,
/// passes local boxes, and otherwise reports the heaviest two-copy clique
/// when its total exceeds 1.
pub fn lo_k_check(pbox: &ProbabilityBox, k: usize) -> Result<LoOutcome, Error> {
    match k {
        1 => Ok(match e1_check(pbox).worst() {
            None => LoOutcome::Pass,
            Some(c) => LoOutcome::Violation {
                product: pbox.clone(),
                certificate: c.clone(),
            },
        }),
        2 => {
            let product = product_box(pbox, 2)?;
            if is_local(pbox) {
                return Ok(LoOutcome::Pass);
            }
            Ok(match two_copy_violation(pbox, &product)? {
                Some(certificate) => LoOutcome::Violation { product, certificate },
                None => LoOutcome::Pass,
            })
        }
        _ => Err(Error::CopiesOutOfRange(k)),
    }
}

/// Largest joint table tried before falling back to the clique search.
const LOCAL_ATOMS: usize = 1 << 12;

/// A box with a joint distribution over all inputs gives its copies one
/// too, and no exclusive set exceeds 1 under a deterministic assignment.
fn is_local(pbox: &ProbabilityBox) -> bool {
    let atoms = pbox
        .scenario()
        .inputs()
        .iter()
        .try_fold(1usize, |acc, i| acc.checked_mul(i.outputs as usize));
    matches!(atoms, Some(n) if n <= LOCAL_ATOMS)
        && global_extension(pbox).is_ok_and(|ext| ext.result.is_feasible())
}

/// Most positive product events handed to the direct clique search.
const PRODUCT_LIMIT: usize = 576;

/// A two-copy clique above 1, or `None` if there is none. A single-copy
/// violation `C` lifts to the clique `C × C`; otherwise the heaviest
/// clique is searched on the base graph when it is small enough and on
/// the product graph if not.
fn two_copy_violation(
    pbox: &ProbabilityBox,
    product: &ProbabilityBox,
) -> Result<Option<E1ViolationCertificate>, Error> {
    let s = pbox.scenario();
    let g = build_exclusivity_graph(s, None)?;
    let pairs = if let Some(c) = e1_check(pbox).worst() {
        let idx: Vec<usize> = c
            .events
            .iter()
            .map(|e| g.nodes().iter().position(|n| n == e).expect("base event"))
            .collect();
        idx.iter().flat_map(|&x| idx.iter().map(move |&y| (x, y))).collect()
    } else {
        let weights: Vec<Rational> = g
            .nodes()
            .iter()
            .map(|e| pbox.event_probability(e).expect("full-context event"))
            .collect();
        match heaviest_pair_clique(&g, &weights, &Rational::one()) {
            Ok(Some(pairs)) => pairs,
            Ok(None) => return Ok(None),
            Err(()) => {
                let events = weights.iter().filter(|w| w.is_positive()).count().pow(2);
                if events > PRODUCT_LIMIT {
                    return Err(Error::SearchTooLarge { events, limit: PRODUCT_LIMIT });
                }
                let pg = build_exclusivity_graph(product.scenario(), None)?;
                let pw: Vec<Rational> = pg
                    .nodes()
                    .iter()
                    .map(|e| product.event_probability(e).expect("full-context event"))
                    .collect();
                return Ok(heaviest_clique_above(&pg, &pw, &Rational::one()).map(|(clique, _)| {
                    certificate(product, clique.iter().map(|&i| pg.nodes()[i].clone()).collect())
                }));
            }
        }
    };
    let ps = product.scenario();
    let lift = |e: &Event, copy: usize| -> Vec<(InputId, u32)> {
        e.assignment()
            .iter()
            .map(|(i, o)| (ps.input_id(&tag(&s.input(*i).label, copy)).expect("tagged input"), *o))
            .collect()
    };
    let mut events: Vec<Event> = pairs
        .iter()
        .map(|(a, b)| {
            let mut asg = lift(&g.nodes()[*a], 1);
            asg.extend(lift(&g.nodes()[*b], 2));
            Event::new(asg)
        })
        .collect();
    events.sort();
    Ok(Some(certificate(product, events)))
}

fn certificate(product: &ProbabilityBox, events: Vec<Event>) -> E1ViolationCertificate {
    let probabilities: Vec<Rational> = events
        .iter()
        .map(|e| product.event_probability(e).expect("full-context event"))
        .collect();
    let total = probabilities.iter().sum();
    E1ViolationCertificate { events, probabilities, total }
}
