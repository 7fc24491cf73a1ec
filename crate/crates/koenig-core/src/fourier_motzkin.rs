//! Fourier-Motzkin elimination for strict homogeneous inequalities.
//!
//! Decides whether `A w > 0` has a solution with every coordinate positive,
//! over the rationals with exact arithmetic. Infeasibility comes with a
//! certificate: positive multipliers on input rows summing to the zero
//! functional. Feasibility comes with an explicit witness vector found by
//! back substitution.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Where a certificate multiplier points: a caller row or a built-in
/// positivity row `w_i > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RowId {
    Constraint(usize),
    Positivity(usize),
}

/// Positive multipliers on rows whose weighted sum is the zero functional,
/// which contradicts strictness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contradiction {
    pub multipliers: Vec<(RowId, BigRational)>,
}

impl Contradiction {
    /// Sorted caller-row indices involved in the contradiction.
    pub fn constraint_rows(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self
            .multipliers
            .iter()
            .filter_map(|(id, _)| match id {
                RowId::Constraint(i) => Some(*i),
                RowId::Positivity(_) => None,
            })
            .collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }

    pub fn positivity_rows(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self
            .multipliers
            .iter()
            .filter_map(|(id, _)| match id {
                RowId::Positivity(i) => Some(*i),
                RowId::Constraint(_) => None,
            })
            .collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FeasibilityOutcome {
    Feasible(Vec<BigRational>),
    Infeasible(Contradiction),
}

const ROW_LIMIT: usize = 200_000;

#[derive(Clone)]
struct Row {
    coeffs: Vec<BigRational>,
    combo: BTreeMap<usize, BigRational>,
}

impl Row {
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Scale to a primitive integer coefficient vector for stable dedup.
    fn normalize(&mut self) {
        let mut denom_lcm = BigInt::one();
        for c in &self.coeffs {
            denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
        }
        let mut numer_gcd = BigInt::zero();
        for c in &self.coeffs {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = num::integer::gcd(numer_gcd, scaled);
        }
        if numer_gcd.is_zero() {
            return;
        }
        let factor = BigRational::new(denom_lcm, numer_gcd);
        for c in &mut self.coeffs {
            *c *= &factor;
        }
        for m in self.combo.values_mut() {
            *m *= &factor;
        }
    }
}

fn combine(a: &Row, b: &Row, var: usize) -> Row {
    let alpha = -b.coeffs[var].clone();
    let beta = a.coeffs[var].clone();
    debug_assert!(alpha.is_positive() && beta.is_positive());
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x * &alpha + y * &beta)
        .collect();
    let mut combo = BTreeMap::new();
    for (i, m) in &a.combo {
        combo.insert(*i, m * &alpha);
    }
    for (i, m) in &b.combo {
        combo
            .entry(*i)
            .and_modify(|v| *v += m * &beta)
            .or_insert_with(|| m * &beta);
    }
    let mut row = Row { coeffs, combo };
    row.normalize();
    row
}

fn contradiction_from(row: &Row, constraint_count: usize) -> Contradiction {
    let multipliers = row
        .combo
        .iter()
        .filter(|(_, m)| m.is_positive())
        .map(|(i, m)| {
            let id = if *i < constraint_count {
                RowId::Constraint(*i)
            } else {
                RowId::Positivity(*i - constraint_count)
            };
            (id, m.clone())
        })
        .collect();
    Contradiction { multipliers }
}

/// Decide whether strictly positive weights exist with `row . w > 0` for
/// every row. Positivity rows are appended internally.
pub fn solve_strict(rows: &[Vec<BigRational>], n: usize) -> Result<FeasibilityOutcome, Error> {
    if n == 0 {
        return Err(Error::precondition("weight system needs at least one variable"));
    }
    for row in rows {
        if row.len() != n {
            return Err(Error::precondition("inequality row length does not match variable count"));
        }
    }
    let constraint_count = rows.len();
    let mut current: Vec<Row> = Vec::with_capacity(constraint_count + n);
    for (i, coeffs) in rows.iter().enumerate() {
        let mut row =
            Row { coeffs: coeffs.clone(), combo: BTreeMap::from([(i, BigRational::one())]) };
        row.normalize();
        current.push(row);
    }
    for i in 0..n {
        let mut coeffs = vec![BigRational::zero(); n];
        coeffs[i] = BigRational::one();
        current
            .push(Row { coeffs, combo: BTreeMap::from([(constraint_count + i, BigRational::one())]) });
    }

    // stages[k] is the system in variables k..n before eliminating w_k.
    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(n);
    for var in 0..n {
        if let Some(row) = current.iter().find(|r| r.is_zero()) {
            return Ok(FeasibilityOutcome::Infeasible(contradiction_from(row, constraint_count)));
        }
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        let mut neutral = Vec::new();
        for row in &current {
            if row.coeffs[var].is_positive() {
                positive.push(row.clone());
            } else if row.coeffs[var].is_negative() {
                negative.push(row.clone());
            } else {
                neutral.push(row.clone());
            }
        }
        stages.push(current);
        let mut seen: BTreeMap<Vec<BigRational>, ()> = BTreeMap::new();
        let mut next = Vec::new();
        let mut push = |row: Row, next: &mut Vec<Row>| {
            if seen.insert(row.coeffs.clone(), ()).is_none() {
                next.push(row);
            }
        };
        for row in neutral {
            push(row, &mut next);
        }
        for p in &positive {
            for q in &negative {
                push(combine(p, q, var), &mut next);
                if next.len() > ROW_LIMIT {
                    return Err(Error::budget(format!(
                        "inequality elimination exceeded {} rows",
                        ROW_LIMIT
                    )));
                }
            }
        }
        current = next;
    }
    if let Some(row) = current.iter().find(|r| r.is_zero()) {
        return Ok(FeasibilityOutcome::Infeasible(contradiction_from(row, constraint_count)));
    }
    debug_assert!(current.is_empty());

    // Back substitution, highest variable first; the positivity row keeps
    // every lower bound at least zero.
    let mut witness = vec![BigRational::zero(); n];
    for var in (0..n).rev() {
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for row in &stages[var] {
            let c = &row.coeffs[var];
            if c.is_zero() {
                continue;
            }
            let rest: BigRational = (var + 1..n).map(|i| &row.coeffs[i] * &witness[i]).sum();
            let bound = -rest / c;
            if c.is_positive() {
                lower = Some(match lower {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            } else {
                upper = Some(match upper {
                    Some(u) if u <= bound => u,
                    _ => bound,
                });
            }
        }
        witness[var] = match (lower, upper) {
            (Some(l), Some(u)) => {
                debug_assert!(l < u);
                (l + u) / BigRational::from_integer(2.into())
            }
            (Some(l), None) => l + BigRational::one(),
            (None, _) => {
                return Err(Error::precondition("missing positivity bound during substitution"))
            }
        };
    }
    Ok(FeasibilityOutcome::Feasible(witness))
}

/// Check a witness against the rows and positivity; used by callers and
/// tests.
pub fn witness_satisfies(rows: &[Vec<BigRational>], witness: &[BigRational]) -> bool {
    witness.iter().all(|w| w.is_positive())
        && rows.iter().all(|row| {
            let value: BigRational = row.iter().zip(witness).map(|(c, w)| c * w).sum();
            value.is_positive()
        })
}

/// Check a contradiction certificate: positive multipliers on the named rows
/// summing to the zero functional.
pub fn contradiction_checks(rows: &[Vec<BigRational>], n: usize, cert: &Contradiction) -> bool {
    if cert.multipliers.is_empty() {
        return false;
    }
    let mut total = vec![BigRational::zero(); n];
    for (id, m) in &cert.multipliers {
        if !m.is_positive() {
            return false;
        }
        match id {
            RowId::Constraint(i) => {
                let Some(row) = rows.get(*i) else { return false };
                for (t, c) in total.iter_mut().zip(row) {
                    *t += c * m;
                }
            }
            RowId::Positivity(i) => {
                if *i >= n {
                    return false;
                }
                total[*i] += m;
            }
        }
    }
    total.iter().all(Zero::is_zero)
}
