//! Monomials and the monomial orders used everywhere else: lex and degrevlex
//! with an explicit variable priority, plus rational weight orders with a
//! monomial-order tiebreak.

use std::cmp::Ordering;
use std::fmt;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A monomial as an exponent vector over a fixed ambient variable set.
/// The degree is always the sum of the exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { exponents: vec![0; n] }
    }

    /// The single variable x_i (0-based index).
    pub fn variable(i: usize, n: usize) -> Self {
        let mut exponents = vec![0; n];
        exponents[i] = 1;
        Monomial { exponents }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn ambient(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }

    /// other / self if self divides other.
    pub fn divide(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial {
                exponents: other.exponents.iter().zip(&self.exponents).map(|(b, a)| b - a).collect(),
            })
        } else {
            None
        }
    }

    pub fn multiply(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of the variables that occur, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exponents.iter().all(|&e| e <= 1)
    }

    /// Some(i) if the monomial is a positive power of the single variable x_i.
    pub fn pure_power(&self) -> Option<usize> {
        let support = self.support();
        if support.len() == 1 {
            Some(support[0])
        } else {
            None
        }
    }

    pub fn radical(&self) -> Monomial {
        Monomial { exponents: self.exponents.iter().map(|&e| e.min(1)).collect() }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    DegRevLex,
}

/// A monomial order determined by its kind and a priority permutation of the
/// variables; `priority[0]` is the highest variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn lex(n: usize) -> Self {
        MonomialOrder { kind: OrderKind::Lex, priority: (0..n).collect() }
    }

    pub fn degrevlex(n: usize) -> Self {
        MonomialOrder { kind: OrderKind::DegRevLex, priority: (0..n).collect() }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self, Error> {
        let n = priority.len();
        let mut seen = vec![false; n];
        for &p in &priority {
            if p >= n || seen[p] {
                return Err(Error::precondition(format!(
                    "priority list {:?} is not a permutation of 0..{}",
                    priority, n
                )));
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn ambient(&self) -> usize {
        self.priority.len()
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.ambient(), self.priority.len());
        debug_assert_eq!(b.ambient(), self.priority.len());
        match self.kind {
            OrderKind::Lex => {
                for &p in &self.priority {
                    match a.exponents[p].cmp(&b.exponents[p]) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            OrderKind::DegRevLex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                // Same degree: scan from the lowest-priority variable upward;
                // at the first difference the monomial with the smaller
                // exponent there is the larger one.
                for &p in self.priority.iter().rev() {
                    match a.exponents[p].cmp(&b.exponents[p]) {
                        Ordering::Equal => continue,
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// A weight order: strictly positive rational weights compared by total weight,
/// with a monomial order breaking ties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightOrder {
    pub weights: Vec<BigRational>,
    pub tiebreak: MonomialOrder,
}

impl WeightOrder {
    pub fn new(weights: Vec<BigRational>, tiebreak: MonomialOrder) -> Result<Self, Error> {
        if weights.len() != tiebreak.ambient() {
            return Err(Error::precondition("weight vector length does not match tiebreak order"));
        }
        if weights.iter().any(|w| *w <= BigRational::from_integer(0.into())) {
            return Err(Error::precondition("weight orders require strictly positive weights"));
        }
        Ok(WeightOrder { weights, tiebreak })
    }

    pub fn ambient(&self) -> usize {
        self.weights.len()
    }

    fn weight_of(&self, m: &Monomial) -> BigRational {
        let mut total = BigRational::from_integer(0.into());
        for (w, &e) in self.weights.iter().zip(&m.exponents) {
            if e > 0 {
                total += w * BigRational::from_integer(e.into());
            }
        }
        total
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.weight_of(a).cmp(&self.weight_of(b)) {
            Ordering::Equal => self.tiebreak.compare(a, b),
            ord => ord,
        }
    }
}

/// Either kind of term order accepted by certificate-producing operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "order")]
pub enum OrderSpec {
    #[serde(rename = "monomial")]
    Monomial(MonomialOrder),
    #[serde(rename = "weight")]
    Weight(WeightOrder),
}

impl OrderSpec {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            OrderSpec::Monomial(o) => o.compare(a, b),
            OrderSpec::Weight(o) => o.compare(a, b),
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            OrderSpec::Monomial(o) => o.ambient(),
            OrderSpec::Weight(o) => o.ambient(),
        }
    }
}
