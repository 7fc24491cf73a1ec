//! Buchberger's algorithm restricted to pure-difference binomials.
//!
//! Every S-polynomial of two such binomials and every division step again
//! produces a pure difference (or zero), so the whole computation runs on
//! monomial pairs with no field arithmetic at all. Division records a replay
//! trace, and all loops are guarded by explicit step budgets.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ideal::{Binomial, IdealPresentation};
use crate::monomial::{Monomial, OrderSpec};
use crate::simplicial;

/// Step budgets for reduction and pair processing; `scaled` is used by the
/// CLI to apply a global multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub reduction_steps: u64,
    pub s_pairs: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { reduction_steps: 1_000_000, s_pairs: 100_000 }
    }
}

impl Budget {
    pub fn scaled(&self, factor: f64) -> Budget {
        let scale = |v: u64| ((v as f64 * factor).max(1.0)) as u64;
        Budget { reduction_steps: scale(self.reduction_steps), s_pairs: scale(self.s_pairs) }
    }
}

struct Tracker {
    budget: Budget,
    reduction_steps: u64,
    s_pairs: u64,
}

impl Tracker {
    fn new(budget: Budget) -> Self {
        Tracker { budget, reduction_steps: 0, s_pairs: 0 }
    }

    fn charge_reduction(&mut self) -> Result<(), Error> {
        self.reduction_steps += 1;
        if self.reduction_steps > self.budget.reduction_steps {
            Err(Error::budget(format!(
                "reduction step budget of {} exhausted",
                self.budget.reduction_steps
            )))
        } else {
            Ok(())
        }
    }

    fn charge_pair(&mut self) -> Result<(), Error> {
        self.s_pairs += 1;
        if self.s_pairs > self.budget.s_pairs {
            Err(Error::budget(format!("S-pair budget of {} exhausted", self.budget.s_pairs)))
        } else {
            Ok(())
        }
    }
}

/// Which side of the (normalized) binomial a division step rewrote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lead,
    Trail,
}

/// One division step: the term on `side` was `multiplier * lead(divisor)` and
/// got replaced by `multiplier * trail(divisor)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub divisor: usize,
    pub side: Side,
    pub multiplier: Monomial,
}

/// A full division record; `result` is `None` when the input reduced to zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub result: Option<Binomial>,
}

/// One division step against the first applicable divisor, lead side tried
/// before trail, divisors in list order. The input must be normalized.
fn divide_once(
    f: &Binomial,
    basis: &[Binomial],
    order: &OrderSpec,
) -> Option<(ReductionStep, Option<Binomial>)> {
    for (index, g) in basis.iter().enumerate() {
        if g.lead.divides(&f.lead) {
            let multiplier = g.lead.divide(&f.lead).unwrap();
            let replacement = g.trail.as_ref().map(|t| multiplier.multiply(t));
            let step = ReductionStep { divisor: index, side: Side::Lead, multiplier };
            let result = match (replacement, &f.trail) {
                (None, None) => None,
                (None, Some(t)) => Some(Binomial::monomial(t.clone())),
                (Some(nt), None) => Some(Binomial::monomial(nt)),
                (Some(nt), Some(t)) if nt == *t => None,
                (Some(nt), Some(t)) => {
                    Some(Binomial { lead: nt, trail: Some(t.clone()) }.normalize(order))
                }
            };
            return Some((step, result));
        }
        if let Some(trail) = &f.trail {
            if g.lead.divides(trail) {
                let multiplier = g.lead.divide(trail).unwrap();
                let replacement = g.trail.as_ref().map(|t| multiplier.multiply(t));
                let step = ReductionStep { divisor: index, side: Side::Trail, multiplier };
                let result = match replacement {
                    None => Some(Binomial::monomial(f.lead.clone())),
                    Some(nt) if nt == f.lead => None,
                    Some(nt) => {
                        Some(Binomial { lead: f.lead.clone(), trail: Some(nt) }.normalize(order))
                    }
                };
                return Some((step, result));
            }
        }
    }
    None
}

fn reduce_tracked(
    f: &Binomial,
    basis: &[Binomial],
    order: &OrderSpec,
    tracker: &mut Tracker,
) -> Result<ReductionTrace, Error> {
    let mut current = f.normalize(order);
    let mut steps = Vec::new();
    loop {
        match divide_once(&current, basis, order) {
            None => return Ok(ReductionTrace { steps, result: Some(current) }),
            Some((step, next)) => {
                tracker.charge_reduction()?;
                steps.push(step);
                match next {
                    None => return Ok(ReductionTrace { steps, result: None }),
                    Some(next) => current = next,
                }
            }
        }
    }
}

/// Normal form of `f` against `basis` (all normalized) under `order`.
pub fn reduce(
    f: &Binomial,
    basis: &[Binomial],
    order: &OrderSpec,
    budget: &Budget,
) -> Result<ReductionTrace, Error> {
    let mut tracker = Tracker::new(*budget);
    reduce_tracked(f, basis, order, &mut tracker)
}

/// Re-apply a reduction trace; used by tests to confirm traces are faithful.
pub fn replay_trace(
    f: &Binomial,
    trace: &ReductionTrace,
    basis: &[Binomial],
    order: &OrderSpec,
) -> Result<Option<Binomial>, Error> {
    let mut current = Some(f.normalize(order));
    for step in &trace.steps {
        let Some(b) = current else {
            return Err(Error::precondition("trace continues past zero"));
        };
        let g = basis
            .get(step.divisor)
            .ok_or_else(|| Error::precondition("trace divisor out of range"))?;
        let expected = step.multiplier.multiply(&g.lead);
        let (target, other) = match step.side {
            Side::Lead => (b.lead.clone(), b.trail.clone()),
            Side::Trail => {
                let t = b
                    .trail
                    .clone()
                    .ok_or_else(|| Error::precondition("trail step on a monomial"))?;
                (t, Some(b.lead.clone()))
            }
        };
        if target != expected {
            return Err(Error::precondition("trace step does not match term"));
        }
        let replacement = g.trail.as_ref().map(|t| step.multiplier.multiply(t));
        current = match (replacement, other) {
            (None, None) => None,
            (None, Some(o)) => Some(Binomial::monomial(o)),
            (Some(nt), None) => Some(Binomial::monomial(nt)),
            (Some(nt), Some(o)) if nt == o => None,
            (Some(nt), Some(o)) => Some(Binomial { lead: nt, trail: Some(o) }.normalize(order)),
        };
    }
    Ok(current)
}

/// The S-polynomial of two normalized binomials, again a pure difference (or
/// `None` when it cancels to zero, in particular for two monomials).
pub fn s_polynomial(f: &Binomial, g: &Binomial, order: &OrderSpec) -> Option<Binomial> {
    let lcm = f.lead.lcm(&g.lead);
    let a = f.lead.divide(&lcm).unwrap();
    let b = g.lead.divide(&lcm).unwrap();
    let left = g.trail.as_ref().map(|v| b.multiply(v));
    let right = f.trail.as_ref().map(|v| a.multiply(v));
    match (left, right) {
        (None, None) => None,
        (Some(l), None) => Some(Binomial::monomial(l)),
        (None, Some(r)) => Some(Binomial::monomial(r)),
        (Some(l), Some(r)) => Binomial::difference(l, r).map(|b| b.normalize(order)),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuchbergerStats {
    pub s_pairs_processed: u64,
    pub reduction_steps: u64,
    pub basis_size_before_reduction: usize,
}

/// A reduced Groebner basis together with the order that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerBasis {
    pub n: usize,
    pub order: OrderSpec,
    pub elements: Vec<Binomial>,
    pub stats: BuchbergerStats,
}

/// Buchberger closure with coprime-lead skipping, followed by minimization
/// and tail reduction. Deterministic: pairs in FIFO order, the final basis
/// sorted by initial term.
pub fn buchberger(
    ideal: &IdealPresentation,
    order: &OrderSpec,
    budget: &Budget,
) -> Result<GroebnerBasis, Error> {
    ideal.validate()?;
    if order.ambient() != ideal.n {
        return Err(Error::precondition("order ambient size does not match ideal"));
    }
    let mut tracker = Tracker::new(*budget);
    let mut basis: Vec<Binomial> =
        ideal.generators.iter().map(|g| g.normalize(order)).collect();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 0..basis.len() {
        for i in 0..j {
            queue.push_back((i, j));
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        tracker.charge_pair()?;
        if basis[i].lead.is_coprime(&basis[j].lead) {
            continue;
        }
        let Some(s) = s_polynomial(&basis[i], &basis[j], order) else {
            continue;
        };
        let trace = reduce_tracked(&s, &basis, order, &mut tracker)?;
        if let Some(remainder) = trace.result {
            let new_index = basis.len();
            for i in 0..new_index {
                queue.push_back((i, new_index));
            }
            basis.push(remainder);
        }
    }
    let basis_size_before_reduction = basis.len();

    // Minimization: keep elements whose lead no kept element's lead divides;
    // scanning by ascending lead keeps the smallest representative.
    basis.sort_by(|a, b| order.compare(&a.lead, &b.lead));
    let mut kept: Vec<Binomial> = Vec::new();
    for g in basis {
        if !kept.iter().any(|k| k.lead.divides(&g.lead)) {
            kept.push(g);
        }
    }

    // Tail reduction against the minimized basis; leads are irreducible, so
    // only trails move.
    let mut reduced = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let mut others: Vec<Binomial> = Vec::with_capacity(kept.len() - 1);
        others.extend(kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()));
        let trace = reduce_tracked(&kept[i], &others, order, &mut tracker)?;
        let element = trace
            .result
            .ok_or_else(|| Error::precondition("minimal basis element reduced to zero"))?;
        debug_assert_eq!(element.lead, kept[i].lead);
        reduced.push(element);
    }
    reduced.sort_by(|a, b| order.compare(&a.lead, &b.lead));

    Ok(GroebnerBasis {
        n: ideal.n,
        order: order.clone(),
        elements: reduced,
        stats: BuchbergerStats {
            s_pairs_processed: tracker.s_pairs,
            reduction_steps: tracker.reduction_steps,
            basis_size_before_reduction,
        },
    })
}

impl GroebnerBasis {
    /// Minimal generators of the initial ideal, sorted by exponent vector.
    pub fn initial_generators(&self) -> Vec<Monomial> {
        let mut leads: Vec<Monomial> = self.elements.iter().map(|g| g.lead.clone()).collect();
        leads.sort();
        leads
    }

    pub fn reduce(&self, f: &Binomial, budget: &Budget) -> Result<ReductionTrace, Error> {
        reduce(f, &self.elements, &self.order, budget)
    }

    /// Ideal membership through the normal form.
    pub fn contains(&self, f: &Binomial, budget: &Budget) -> Result<bool, Error> {
        Ok(self.reduce(f, budget)?.result.is_none())
    }

    /// Check the Buchberger criterion on the final basis; used by tests.
    pub fn verify(&self, budget: &Budget) -> Result<(), Error> {
        let mut tracker = Tracker::new(*budget);
        for j in 0..self.elements.len() {
            for i in 0..j {
                if let Some(s) = s_polynomial(&self.elements[i], &self.elements[j], &self.order)
                {
                    let trace = reduce_tracked(&s, &self.elements, &self.order, &mut tracker)?;
                    if trace.result.is_some() {
                        return Err(Error::precondition(format!(
                            "S-pair ({}, {}) does not reduce to zero",
                            i, j
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every variable has a pure power in the initial ideal.
    pub fn is_zero_dimensional(&self) -> bool {
        let mut seen = vec![false; self.n];
        for g in &self.elements {
            if let Some(i) = g.lead.pure_power() {
                seen[i] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Krull dimension of the quotient: n minus the height of the initial
    /// ideal, computed from minimal covers of the radical supports.
    pub fn quotient_dimension(&self) -> Result<usize, Error> {
        let supports: Vec<Vec<usize>> =
            self.elements.iter().map(|g| g.lead.support()).collect();
        Ok(self.n - simplicial::height_of_supports(&supports, self.n)?)
    }

    /// Values of the Hilbert function of the quotient in degrees 0..=dmax.
    pub fn hilbert_function(&self, dmax: u32) -> Vec<u64> {
        let ini = self.initial_generators();
        (0..=dmax).map(|k| count_standard_monomials(&ini, self.n, k)).collect()
    }

    /// Length of a zero-dimensional quotient: the number of standard
    /// monomials.
    pub fn quotient_length(&self) -> Result<u64, Error> {
        if !self.is_zero_dimensional() {
            return Err(Error::precondition("quotient is not zero-dimensional"));
        }
        let ini = self.initial_generators();
        // Each variable has a pure power bound, so degrees are capped.
        let mut bound: u64 = 1;
        for i in 0..self.n {
            let p = ini
                .iter()
                .filter(|m| m.pure_power() == Some(i))
                .map(Monomial::degree)
                .min()
                .expect("pure power present");
            bound += (p - 1) as u64;
        }
        let mut total = 0u64;
        for k in 0.. {
            let h = count_standard_monomials(&ini, self.n, k);
            if h == 0 {
                break;
            }
            total += h;
            debug_assert!(k as u64 <= bound);
        }
        Ok(total)
    }
}

/// Number of degree-k monomials in n variables not divisible by any of the
/// given monomials. Recursive with branch pruning: a branch dies as soon as
/// one generator is satisfied on all its support.
pub fn count_standard_monomials(generators: &[Monomial], n: usize, k: u32) -> u64 {
    let gens: Vec<&Monomial> = generators.iter().collect();
    let mut assigned = vec![0u32; n];
    count_rec(&gens, n, 0, k, &mut assigned)
}

fn count_rec(alive: &[&Monomial], n: usize, var: usize, remaining: u32, assigned: &mut Vec<u32>) -> u64 {
    // A generator is dropped from `alive` once its exponent demand can no
    // longer be met, and kills the branch when fully satisfied.
    if var == n {
        return if remaining == 0 { 1 } else { 0 };
    }
    let mut total = 0;
    for e in 0..=remaining {
        assigned[var] = e;
        let mut next_alive = Vec::with_capacity(alive.len());
        let mut dead_branch = false;
        for &g in alive {
            if g.exponents[var] > e {
                continue; // can never divide along this branch
            }
            let satisfied_through =
                g.exponents[var + 1..].iter().all(|&ge| ge == 0);
            if satisfied_through {
                dead_branch = true; // g divides every completion
                break;
            }
            next_alive.push(g);
        }
        if !dead_branch {
            total += count_rec(&next_alive, n, var + 1, remaining - e, assigned);
        }
    }
    assigned[var] = 0;
    total
}
