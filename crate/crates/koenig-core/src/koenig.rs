//! Coprime-initials certificates and what follows from them.
//!
//! A certificate selects generators whose initial terms are pairwise coprime
//! monomials; the number of them must be the height of the ideal. From the
//! certificate come the attached sequence of linear forms (a candidate
//! parameter system), the I_B modification family, and two field-independent
//! Cohen-Macaulay tests: unmixedness of every I_B, and the multiplicity
//! versus parameter-quotient-length comparison.

use num::rational::BigRational;
use num::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fourier_motzkin::{self, FeasibilityOutcome};
use crate::groebner::{buchberger, Budget, Side};
use crate::ideal::{Binomial, IdealPresentation, LinearForm};
use crate::monomial::{Monomial, MonomialOrder, OrderSpec, WeightOrder};
use crate::simplicial;

/// Generators with pairwise coprime initial terms under a fixed order,
/// together with the attached linear-form sequence.
///
/// `supports[j]` is the variable set of `initials[j]`, `anchors[j]` its
/// smallest member, `free_variables` the variables dividing no initial, and
/// `parameters` the sequence: one `Var` per free variable, then for every
/// support each non-anchor variable minus the anchor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KoenigCertificate {
    pub generator_indices: Vec<usize>,
    pub order: OrderSpec,
    pub initials: Vec<Monomial>,
    pub supports: Vec<Vec<usize>>,
    pub anchors: Vec<usize>,
    pub free_variables: Vec<usize>,
    pub parameters: Vec<LinearForm>,
}

impl KoenigCertificate {
    /// The height the certificate claims, i.e. the number of chosen
    /// generators.
    pub fn height(&self) -> usize {
        self.generator_indices.len()
    }

    pub fn ambient(&self) -> usize {
        self.order.ambient()
    }

    /// Structural re-check against the presentation: initials really are the
    /// normalized leads, pairwise coprime, and the derived fields match.
    pub fn validate(&self, ideal: &IdealPresentation) -> Result<(), Error> {
        if self.ambient() != ideal.n {
            return Err(Error::precondition("certificate ambient size mismatch"));
        }
        let rebuilt = build_certificate(
            ideal,
            &self.generator_indices,
            self.order.clone(),
            &selected_initials(ideal, &self.generator_indices, &self.order)?,
        )?;
        if rebuilt != *self {
            return Err(Error::precondition("certificate fields do not match the presentation"));
        }
        Ok(())
    }
}

fn selected_initials(
    ideal: &IdealPresentation,
    indices: &[usize],
    order: &OrderSpec,
) -> Result<Vec<Monomial>, Error> {
    let mut initials = Vec::with_capacity(indices.len());
    for &i in indices {
        let gen = ideal
            .generators
            .get(i)
            .ok_or_else(|| Error::precondition(format!("generator index {} out of range", i)))?;
        initials.push(gen.normalize(order).lead);
    }
    Ok(initials)
}

/// Assemble a certificate from chosen initials; checks coprimality and
/// derives supports, anchors, free variables and the parameter sequence.
fn build_certificate(
    ideal: &IdealPresentation,
    indices: &[usize],
    order: OrderSpec,
    initials: &[Monomial],
) -> Result<KoenigCertificate, Error> {
    let n = ideal.n;
    {
        let mut seen = std::collections::BTreeSet::new();
        for &i in indices {
            if !seen.insert(i) {
                return Err(Error::precondition("duplicate generator index"));
            }
        }
    }
    for a in 0..initials.len() {
        if initials[a].is_one() {
            return Err(Error::precondition("constant initial term"));
        }
        for b in a + 1..initials.len() {
            if !initials[a].is_coprime(&initials[b]) {
                return Err(Error::precondition(format!(
                    "initial terms {} and {} are not coprime",
                    initials[a], initials[b]
                )));
            }
        }
    }
    let supports: Vec<Vec<usize>> = initials.iter().map(Monomial::support).collect();
    let anchors: Vec<usize> = supports.iter().map(|s| s[0]).collect();
    let mut used = vec![false; n];
    for s in &supports {
        for &v in s {
            used[v] = true;
        }
    }
    let free_variables: Vec<usize> = (0..n).filter(|&v| !used[v]).collect();
    let mut parameters: Vec<LinearForm> = free_variables.iter().map(|&v| LinearForm::Var(v)).collect();
    for (s, &anchor) in supports.iter().zip(&anchors) {
        for &k in s.iter().filter(|&&k| k != anchor) {
            parameters.push(LinearForm::Diff(anchor, k));
        }
    }
    debug_assert_eq!(parameters.len(), n - indices.len());
    Ok(KoenigCertificate {
        generator_indices: indices.to_vec(),
        order,
        initials: initials.to_vec(),
        supports,
        anchors,
        free_variables,
        parameters,
    })
}

/// Height of the ideal: covers for monomial input, otherwise through a
/// Groebner basis under the given order.
pub fn ideal_height(
    ideal: &IdealPresentation,
    order: &OrderSpec,
    budget: &Budget,
) -> Result<usize, Error> {
    if ideal.is_monomial_ideal() {
        let monomials: Vec<Monomial> =
            ideal.generators.iter().map(|g| g.lead.clone()).collect();
        simplicial::height_monomial(&monomials, ideal.n)
    } else {
        let gb = buchberger(ideal, order, budget)?;
        Ok(ideal.n - gb.quotient_dimension()?)
    }
}

/// The certificate for explicitly chosen generators under an explicit order.
/// Fails when the initials are not coprime or the count is not the height.
pub fn attached_sequence(
    ideal: &IdealPresentation,
    indices: &[usize],
    order: &OrderSpec,
    budget: &Budget,
) -> Result<KoenigCertificate, Error> {
    ideal.validate()?;
    let initials = selected_initials(ideal, indices, order)?;
    let cert = build_certificate(ideal, indices, order.clone(), &initials)?;
    let height = ideal_height(ideal, order, budget)?;
    if indices.len() != height {
        return Err(Error::precondition(format!(
            "{} generators chosen but the height is {}",
            indices.len(),
            height
        )));
    }
    Ok(cert)
}

/// First (by ascending index sequence) subfamily of size h with pairwise
/// coprime monomials.
fn first_coprime_family(monomials: &[Monomial], h: usize) -> Option<Vec<usize>> {
    fn extend(monomials: &[Monomial], h: usize, start: usize, current: &mut Vec<usize>) -> bool {
        if current.len() == h {
            return true;
        }
        for i in start..monomials.len() {
            if current.iter().all(|&j| monomials[j].is_coprime(&monomials[i])) {
                current.push(i);
                if extend(monomials, h, i + 1, current) {
                    return true;
                }
                current.pop();
            }
        }
        false
    }
    let mut current = Vec::new();
    extend(monomials, h, 0, &mut current).then_some(current)
}

/// Monomial König test: are there height-many pairwise coprime generators?
/// Scans in input order and returns the first family found.
pub fn koenig_monomial(ideal: &IdealPresentation) -> Result<Option<KoenigCertificate>, Error> {
    ideal.validate()?;
    if !ideal.is_monomial_ideal() {
        return Err(Error::precondition("monomial König test needs a monomial ideal"));
    }
    let monomials: Vec<Monomial> = ideal.generators.iter().map(|g| g.lead.clone()).collect();
    let h = simplicial::height_monomial(&monomials, ideal.n)?;
    let order = OrderSpec::Monomial(MonomialOrder::lex(ideal.n));
    match first_coprime_family(&monomials, h) {
        None => Ok(None),
        Some(indices) => {
            let initials = selected_initials(ideal, &indices, &order)?;
            Ok(Some(build_certificate(ideal, &indices, order, &initials)?))
        }
    }
}

/// A per-generator choice of initial term with its realizability analysis:
/// one strict inequality row per two-term generator, then Fourier-Motzkin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub chosen: Vec<Monomial>,
    /// Inequality rows, one per generator listed in `row_sources`.
    pub rows: Vec<Vec<BigRational>>,
    pub row_sources: Vec<usize>,
    pub outcome: FeasibilityOutcome,
}

impl SelectionReport {
    /// The witness as a full order (weights with a lex tiebreak), when
    /// feasible.
    pub fn witness_order(&self, n: usize) -> Option<OrderSpec> {
        match &self.outcome {
            FeasibilityOutcome::Feasible(w) => Some(OrderSpec::Weight(
                WeightOrder::new(w.clone(), MonomialOrder::lex(n)).expect("positive witness"),
            )),
            FeasibilityOutcome::Infeasible(_) => None,
        }
    }

    /// The rendered inequalities of the infeasibility certificate, e.g.
    /// `["w1 > w3", "w3 > w1"]`.
    pub fn contradiction_inequalities(&self) -> Vec<String> {
        match &self.outcome {
            FeasibilityOutcome::Feasible(_) => vec![],
            FeasibilityOutcome::Infeasible(cert) => cert
                .constraint_rows()
                .iter()
                .map(|&r| render_weight_inequality(&self.rows[r]))
                .collect(),
        }
    }
}

/// Decide whether some monomial order makes each chosen term the initial
/// term of its generator. Positive weight vectors are fully general here
/// because the constraints are finitely many strict monomial comparisons.
pub fn realizable_initial_selection(
    ideal: &IdealPresentation,
    choices: &[Side],
) -> Result<SelectionReport, Error> {
    ideal.validate()?;
    if choices.len() != ideal.generators.len() {
        return Err(Error::precondition("one term choice per generator required"));
    }
    let mut chosen = Vec::with_capacity(choices.len());
    let mut rows = Vec::new();
    let mut row_sources = Vec::new();
    for (i, (gen, side)) in ideal.generators.iter().zip(choices).enumerate() {
        let (pick, other) = match (side, &gen.trail) {
            (Side::Lead, None) => (gen.lead.clone(), None),
            (Side::Lead, Some(t)) => (gen.lead.clone(), Some(t.clone())),
            (Side::Trail, Some(t)) => (t.clone(), Some(gen.lead.clone())),
            (Side::Trail, None) => {
                return Err(Error::precondition(format!(
                    "generator {} has a single term",
                    i + 1
                )))
            }
        };
        if let Some(other) = other {
            let row: Vec<BigRational> = pick
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(&a, &b)| {
                    BigRational::from_i64(a as i64 - b as i64).expect("small integer")
                })
                .collect();
            rows.push(row);
            row_sources.push(i);
        }
        chosen.push(pick);
    }
    let outcome = fourier_motzkin::solve_strict(&rows, ideal.n)?;
    Ok(SelectionReport { chosen, rows, row_sources, outcome })
}

/// Render a strict weight inequality, positive part left: `w1 > w3`.
pub fn render_weight_inequality(row: &[BigRational]) -> String {
    let side = |positive: bool| -> String {
        let terms: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, c)| if positive { **c > BigRational::zero() } else { **c < BigRational::zero() })
            .map(|(i, c)| {
                let scale = if positive { c.clone() } else { -c.clone() };
                if scale == BigRational::from_i64(1).unwrap() {
                    format!("w{}", i + 1)
                } else {
                    format!("{}*w{}", scale, i + 1)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    };
    format!("{} > {}", side(true), side(false))
}

/// One coprime selection explored by the order-free search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionAttempt {
    pub report: SelectionReport,
}

/// Search result: the certificate if any, the computed height when an order
/// was supplied, and the coprime selection attempts of the order-free mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KoenigSearch {
    pub certificate: Option<KoenigCertificate>,
    pub height: Option<usize>,
    pub verified_minimal: Option<bool>,
    pub attempts: Vec<SelectionAttempt>,
    pub note: String,
}

const SELECTION_GENERATOR_LIMIT: usize = 20;

/// König-type search.
///
/// With an order: the initials are fixed and a height-sized pairwise coprime
/// subfamily is sought. Without an order: the whole input sequence is the
/// candidate, every per-generator term selection with pairwise coprime terms
/// is tested for realizability; on success the height equals the generator
/// count automatically (the coprime initials force height >= count, Krull's
/// bound forces <=).
pub fn koenig_graded(
    ideal: &IdealPresentation,
    order: Option<&OrderSpec>,
    budget: &Budget,
) -> Result<KoenigSearch, Error> {
    ideal.validate()?;
    match order {
        Some(order) => koenig_with_order(ideal, order, budget),
        None => koenig_order_free(ideal, budget),
    }
}

fn koenig_with_order(
    ideal: &IdealPresentation,
    order: &OrderSpec,
    budget: &Budget,
) -> Result<KoenigSearch, Error> {
    let height = ideal_height(ideal, order, budget)?;
    let initials: Vec<Monomial> = ideal
        .generators
        .iter()
        .map(|g| g.normalize(order).lead)
        .collect();
    let verified_minimal = Some(ideal.normalized(order).verified_minimal());
    match first_coprime_family(&initials, height) {
        Some(indices) => {
            let selected: Vec<Monomial> = indices.iter().map(|&i| initials[i].clone()).collect();
            let cert = build_certificate(ideal, &indices, order.clone(), &selected)?;
            Ok(KoenigSearch {
                certificate: Some(cert),
                height: Some(height),
                verified_minimal,
                attempts: vec![],
                note: format!("found {} pairwise coprime initial terms", height),
            })
        }
        None => Ok(KoenigSearch {
            certificate: None,
            height: Some(height),
            verified_minimal,
            attempts: vec![],
            note: format!(
                "no {} of the fixed initial terms are pairwise coprime",
                height
            ),
        }),
    }
}

fn koenig_order_free(ideal: &IdealPresentation, budget: &Budget) -> Result<KoenigSearch, Error> {
    let m = ideal.generators.len();
    let binomial_positions: Vec<usize> = ideal
        .generators
        .iter()
        .enumerate()
        .filter(|(_, g)| g.trail.is_some())
        .map(|(i, _)| i)
        .collect();
    if binomial_positions.len() > SELECTION_GENERATOR_LIMIT {
        return Err(Error::budget(format!(
            "order-free search limited to {} two-term generators",
            SELECTION_GENERATOR_LIMIT
        )));
    }
    let mut attempts = Vec::new();
    let mut skipped_non_coprime = 0usize;
    for mask in 0u64..(1 << binomial_positions.len()) {
        let mut choices = vec![Side::Lead; m];
        for (bit, &pos) in binomial_positions.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                choices[pos] = Side::Trail;
            }
        }
        let chosen: Vec<Monomial> = ideal
            .generators
            .iter()
            .zip(&choices)
            .map(|(g, side)| match side {
                Side::Lead => g.lead.clone(),
                Side::Trail => g.trail.clone().expect("trail choice on binomial"),
            })
            .collect();
        let coprime = (0..m).all(|a| (a + 1..m).all(|b| chosen[a].is_coprime(&chosen[b])));
        if !coprime {
            skipped_non_coprime += 1;
            continue;
        }
        let report = realizable_initial_selection(ideal, &choices)?;
        let feasible = matches!(report.outcome, FeasibilityOutcome::Feasible(_));
        if feasible {
            let order = report.witness_order(ideal.n).expect("feasible witness");
            let indices: Vec<usize> = (0..m).collect();
            let cert = build_certificate(ideal, &indices, order.clone(), &report.chosen)?;
            let verified_minimal = Some(ideal.normalized(&order).verified_minimal());
            let height = ideal_height(ideal, &order, budget).ok();
            debug_assert!(height.is_none_or(|h| h == m));
            attempts.push(SelectionAttempt { report });
            return Ok(KoenigSearch {
                certificate: Some(cert),
                height,
                verified_minimal,
                attempts,
                note: "realizable coprime term selection found".to_string(),
            });
        }
        attempts.push(SelectionAttempt { report });
    }
    Ok(KoenigSearch {
        certificate: None,
        height: None,
        verified_minimal: None,
        attempts,
        note: format!(
            "no realizable pairwise coprime term selection over the full sequence ({} selections lacked coprimality)",
            skipped_non_coprime
        ),
    })
}

/// Apply the substitutions of a parameter subset B to a monomial ideal:
/// x_j -> x_anchor for each difference, x_i -> 0 for each variable. The
/// result is minimalized (duplicates and multiples removed, order kept).
pub fn modify(
    ideal: &IdealPresentation,
    cert: &KoenigCertificate,
    subset: &[LinearForm],
) -> Result<IdealPresentation, Error> {
    if !ideal.is_monomial_ideal() {
        return Err(Error::precondition("modification needs a monomial ideal"));
    }
    for form in subset {
        if !cert.parameters.contains(form) {
            return Err(Error::precondition(format!(
                "{} is not in the certificate's parameter sequence",
                form
            )));
        }
    }
    let n = ideal.n;
    let mut target: Vec<usize> = (0..n).collect();
    let mut killed = vec![false; n];
    for form in subset {
        match form {
            LinearForm::Var(i) => killed[*i] = true,
            LinearForm::Diff(i, j) => target[*j] = *i,
        }
    }
    let mut generators: Vec<Monomial> = Vec::new();
    'gens: for g in &ideal.generators {
        let mut exps = vec![0u32; n];
        for (v, &e) in g.lead.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if killed[v] {
                continue 'gens;
            }
            exps[target[v]] += e;
        }
        generators.push(Monomial::from_exponents(exps));
    }
    // Minimalize: drop duplicates and any multiple of another generator.
    let mut kept: Vec<Monomial> = Vec::new();
    for g in generators {
        if kept.iter().any(|k| k.divides(&g)) {
            continue;
        }
        kept.retain(|k| !g.divides(k));
        kept.push(g);
    }
    IdealPresentation::new(n, kept.into_iter().map(Binomial::monomial).collect())
}

/// Verdict of the all-subsets unmixedness test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IbReport {
    pub cohen_macaulay: bool,
    /// First parameter subset (by ascending bitmask over the sequence) whose
    /// modification is mixed.
    pub failing_subset: Option<Vec<LinearForm>>,
    pub subsets_checked: usize,
}

const IB_SUBSET_LIMIT: usize = 20;

/// Cohen-Macaulayness of a monomial ideal with certificate: every
/// modification I_B over subsets B of the parameter sequence must be
/// unmixed.
pub fn cm_test_ib(ideal: &IdealPresentation, cert: &KoenigCertificate) -> Result<IbReport, Error> {
    if cert.parameters.len() > IB_SUBSET_LIMIT {
        return Err(Error::budget(format!(
            "subset test limited to {} parameters",
            IB_SUBSET_LIMIT
        )));
    }
    let c = &cert.parameters;
    for mask in 0u64..(1 << c.len()) {
        let subset: Vec<LinearForm> = c
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, f)| *f)
            .collect();
        let modified = modify(ideal, cert, &subset)?;
        let monomials: Vec<Monomial> =
            modified.generators.iter().map(|g| g.lead.clone()).collect();
        if !simplicial::is_unmixed(&monomials, ideal.n)? {
            return Ok(IbReport {
                cohen_macaulay: false,
                failing_subset: Some(subset),
                subsets_checked: mask as usize + 1,
            });
        }
    }
    Ok(IbReport {
        cohen_macaulay: true,
        failing_subset: None,
        subsets_checked: 1 << c.len(),
    })
}

/// Verdict of the multiplicity test: e(R) against the length of R modulo
/// the attached parameters. `cohen_macaulay` is `None` when the parameters
/// fail to cut down to dimension zero (then they are no parameter system and
/// the test does not decide).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub multiplicity: u64,
    pub zero_dimensional: bool,
    pub parameter_quotient_length: Option<u64>,
    pub cohen_macaulay: Option<bool>,
}

/// Multiplicity-based Cohen-Macaulay test: CM iff e(R) equals the length of
/// the artinian quotient by the attached sequence.
pub fn cm_test_multiplicity(
    ideal: &IdealPresentation,
    cert: &KoenigCertificate,
    budget: &Budget,
) -> Result<MultiplicityReport, Error> {
    let initial_monomials: Vec<Monomial> = if ideal.is_monomial_ideal() {
        ideal.generators.iter().map(|g| g.lead.clone()).collect()
    } else {
        buchberger(ideal, &cert.order, budget)?.initial_generators()
    };
    let multiplicity = simplicial::multiplicity(&initial_monomials, ideal.n)?;
    let mut extended = ideal.generators.clone();
    extended.extend(cert.parameters.iter().map(|f| f.to_binomial(ideal.n)));
    let with_parameters = IdealPresentation::new(ideal.n, extended)?;
    let gb = buchberger(&with_parameters, &cert.order, budget)?;
    if !gb.is_zero_dimensional() {
        return Ok(MultiplicityReport {
            multiplicity,
            zero_dimensional: false,
            parameter_quotient_length: None,
            cohen_macaulay: None,
        });
    }
    let length = gb.quotient_length()?;
    Ok(MultiplicityReport {
        multiplicity,
        zero_dimensional: true,
        parameter_quotient_length: Some(length),
        cohen_macaulay: Some(multiplicity == length),
    })
}

/// Very-well-covered test for an equigenerated monomial ideal: after
/// polarization, the support union must have exactly height times degree
/// variables.
pub fn very_well_covered_check(ideal: &IdealPresentation) -> Result<bool, Error> {
    ideal.validate()?;
    if !ideal.is_monomial_ideal() {
        return Err(Error::precondition("very-well-covered test needs a monomial ideal"));
    }
    let degree = ideal
        .single_generation_degree()
        .ok_or_else(|| Error::precondition("generators of mixed degrees"))?;
    let monomials: Vec<Monomial> = ideal.generators.iter().map(|g| g.lead.clone()).collect();
    let polarized = simplicial::polarize(&monomials, ideal.n);
    let mut used = std::collections::BTreeSet::new();
    for g in &polarized.generators {
        used.extend(g.support());
    }
    let height = simplicial::height_monomial(&polarized.generators, polarized.n)?;
    Ok(used.len() == height * degree as usize)
}

/// Minimal primes split along a linked complete intersection: components of
/// J : I are the minimal primes of J missing from I, the rest cut out the
/// unmixed part. Inputs are canonical prime descriptions (sorted variable
/// sets or any other sorted keys).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageSplit {
    pub colon_components: Vec<Vec<usize>>,
    pub unmixed_components: Vec<Vec<usize>>,
}

pub fn linkage_split(min_j: &[Vec<usize>], min_i: &[Vec<usize>]) -> LinkageSplit {
    let in_i: std::collections::BTreeSet<&Vec<usize>> = min_i.iter().collect();
    let mut colon = Vec::new();
    let mut unmixed = Vec::new();
    for p in min_j {
        if in_i.contains(p) {
            unmixed.push(p.clone());
        } else {
            colon.push(p.clone());
        }
    }
    colon.sort();
    colon.dedup();
    unmixed.sort();
    unmixed.dedup();
    LinkageSplit { colon_components: colon, unmixed_components: unmixed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::parse_ideal;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exponents(exps.to_vec())
    }

    fn lex(n: usize) -> OrderSpec {
        OrderSpec::Monomial(MonomialOrder::lex(n))
    }

    fn square_ideal() -> IdealPresentation {
        parse_ideal("x1*x2\nx2*x3\nx3*x4\nx1*x4").unwrap()
    }

    fn path_ideal() -> IdealPresentation {
        parse_ideal("x1*x2\nx2*x3\nx3*x4").unwrap()
    }

    #[test]
    fn two_factored_generators_admit_no_order() {
        // (x1x2 - x2x3, x1x3 - x3^2): the unique coprime selection needs
        // x1x2 > x2x3 and x3^2 > x1x3 at once.
        let ideal = parse_ideal("x1*x2 - x2*x3\nx1*x3 - x3^2").unwrap();
        let search = koenig_graded(&ideal, None, &Budget::default()).unwrap();
        assert!(search.certificate.is_none());
        assert_eq!(search.attempts.len(), 1);
        let report = &search.attempts[0].report;
        assert_eq!(report.chosen, vec![m(&[1, 1, 0]), m(&[0, 0, 2])]);
        match &report.outcome {
            FeasibilityOutcome::Infeasible(cert) => {
                assert_eq!(cert.constraint_rows(), vec![0, 1]);
            }
            other => panic!("expected infeasible, got {:?}", other),
        }
        assert_eq!(
            report.contradiction_inequalities(),
            vec!["w1 > w3".to_string(), "w3 > w1".to_string()]
        );
    }

    #[test]
    fn principal_certificates_under_both_priorities() {
        let ideal = parse_ideal("x1*x2 - x2^2").unwrap();
        let first = koenig_graded(&ideal, Some(&lex(2)), &Budget::default()).unwrap();
        let cert = first.certificate.unwrap();
        assert_eq!(cert.initials, vec![m(&[1, 1])]);
        assert_eq!(cert.supports, vec![vec![0, 1]]);
        assert_eq!(cert.anchors, vec![0]);
        assert!(cert.free_variables.is_empty());
        assert_eq!(cert.parameters, vec![LinearForm::Diff(0, 1)]);
        assert_eq!(cert.parameters[0].to_string(), "x2 - x1");

        let swapped =
            OrderSpec::Monomial(MonomialOrder::with_priority(crate::monomial::OrderKind::Lex, vec![1, 0]).unwrap());
        let second = koenig_graded(&ideal, Some(&swapped), &Budget::default()).unwrap();
        let cert = second.certificate.unwrap();
        assert_eq!(cert.initials, vec![m(&[0, 2])]);
        assert_eq!(cert.supports, vec![vec![1]]);
        assert_eq!(cert.free_variables, vec![0]);
        assert_eq!(cert.parameters, vec![LinearForm::Var(0)]);
        assert_eq!(cert.parameters[0].to_string(), "x1");
    }

    #[test]
    fn square_attached_sequence() {
        let ideal = square_ideal();
        let cert = attached_sequence(&ideal, &[0, 2], &lex(4), &Budget::default()).unwrap();
        assert_eq!(cert.initials, vec![m(&[1, 1, 0, 0]), m(&[0, 0, 1, 1])]);
        assert_eq!(cert.anchors, vec![0, 2]);
        assert_eq!(cert.parameters, vec![LinearForm::Diff(0, 1), LinearForm::Diff(2, 3)]);
        assert_eq!(cert.parameters.len(), 4 - 2);
        cert.validate(&ideal).unwrap();
    }

    #[test]
    fn attached_sequence_rejects_wrong_count_and_shared_support() {
        let ideal = square_ideal();
        assert!(attached_sequence(&ideal, &[0], &lex(4), &Budget::default()).is_err());
        assert!(attached_sequence(&ideal, &[0, 1], &lex(4), &Budget::default()).is_err());
    }

    #[test]
    fn monomial_search_examples() {
        let cert = koenig_monomial(&square_ideal()).unwrap().unwrap();
        assert_eq!(cert.generator_indices, vec![0, 2]);

        // Every pair of generators shares a variable although the height
        // is 2.
        let blocked = parse_ideal("x1*x2*x3\nx1*x3*x4\nx1*x4*x6\nx3*x4*x5").unwrap();
        assert!(koenig_monomial(&blocked).unwrap().is_none());

        let principal = parse_ideal("x1^2*x2").unwrap();
        let cert = koenig_monomial(&principal).unwrap().unwrap();
        assert_eq!(cert.generator_indices, vec![0]);
        assert_eq!(cert.parameters, vec![LinearForm::Diff(0, 1)]);
    }

    #[test]
    fn fixed_order_blocks_overlapping_initials() {
        let ideal = parse_ideal("x1*x2 - x4^2\nx2*x3").unwrap();
        let order = OrderSpec::Monomial(MonomialOrder::degrevlex(4));
        let search = koenig_graded(&ideal, Some(&order), &Budget::default()).unwrap();
        assert!(search.certificate.is_none());
        assert_eq!(search.height, Some(2));
    }

    #[test]
    fn order_free_search_swaps_a_lead() {
        // Same ideal as above: choosing x4^2 on the first generator is
        // realizable and the two chosen terms are coprime, so a weight
        // certificate exists and the height equals the generator count.
        let ideal = parse_ideal("x1*x2 - x4^2\nx2*x3").unwrap();
        let search = koenig_graded(&ideal, None, &Budget::default()).unwrap();
        let cert = search.certificate.expect("weight certificate");
        assert_eq!(cert.initials, vec![m(&[0, 0, 0, 2]), m(&[0, 1, 1, 0])]);
        assert_eq!(search.height, Some(2));

        // The initial ideal under the witness order is König as a monomial
        // ideal as well.
        let ini = IdealPresentation::new(
            4,
            cert.initials.iter().cloned().map(Binomial::monomial).collect(),
        )
        .unwrap();
        assert!(koenig_monomial(&ini).unwrap().is_some());
    }

    #[test]
    fn modifications_of_the_square() {
        let ideal = square_ideal();
        let cert = koenig_monomial(&ideal).unwrap().unwrap();
        assert_eq!(cert.parameters, vec![LinearForm::Diff(0, 1), LinearForm::Diff(2, 3)]);

        let both = modify(&ideal, &cert, &cert.parameters).unwrap();
        let gens: Vec<Monomial> = both.generators.iter().map(|g| g.lead.clone()).collect();
        assert_eq!(gens, vec![m(&[2, 0, 0, 0]), m(&[1, 0, 1, 0]), m(&[0, 0, 2, 0])]);

        let single = modify(&ideal, &cert, &cert.parameters[..1]).unwrap();
        let gens: Vec<Monomial> = single.generators.iter().map(|g| g.lead.clone()).collect();
        assert_eq!(
            gens,
            vec![m(&[2, 0, 0, 0]), m(&[1, 0, 1, 0]), m(&[0, 0, 1, 1]), m(&[1, 0, 0, 1])]
        );

        let empty = modify(&ideal, &cert, &[]).unwrap();
        assert_eq!(empty.generators, ideal.generators);
    }

    #[test]
    fn subset_test_separates_square_from_path()
    {
        let square = square_ideal();
        let cert = koenig_monomial(&square).unwrap().unwrap();
        let report = cm_test_ib(&square, &cert).unwrap();
        assert!(!report.cohen_macaulay);
        assert_eq!(report.failing_subset, Some(vec![LinearForm::Diff(0, 1)]));

        let path = path_ideal();
        let cert = koenig_monomial(&path).unwrap().unwrap();
        let report = cm_test_ib(&path, &cert).unwrap();
        assert!(report.cohen_macaulay);
        assert_eq!(report.subsets_checked, 4);

        let edge = parse_ideal("x1*x2").unwrap();
        let cert = koenig_monomial(&edge).unwrap().unwrap();
        assert!(cm_test_ib(&edge, &cert).unwrap().cohen_macaulay);
    }

    #[test]
    fn multiplicity_test_matches_subset_test() {
        for (text, expected_e, expected_len, expected_cm) in [
            ("x1*x2\nx2*x3\nx3*x4\nx1*x4", 2, 3, false),
            ("x1*x2\nx2*x3\nx3*x4", 3, 3, true),
            ("x1*x2", 2, 2, true),
        ] {
            let ideal = parse_ideal(text).unwrap();
            let cert = koenig_monomial(&ideal).unwrap().unwrap();
            let report = cm_test_multiplicity(&ideal, &cert, &Budget::default()).unwrap();
            assert!(report.zero_dimensional, "{}", text);
            assert_eq!(report.multiplicity, expected_e, "{}", text);
            assert_eq!(report.parameter_quotient_length, Some(expected_len), "{}", text);
            assert_eq!(report.cohen_macaulay, Some(expected_cm), "{}", text);
            let ib = cm_test_ib(&ideal, &cert).unwrap();
            assert_eq!(ib.cohen_macaulay, expected_cm, "{}", text);
        }
    }

    #[test]
    fn attached_sequence_that_is_no_parameter_system() {
        // x1 > x2 on (x1x2 - x2^2): the attached x2 - x1 does not cut the
        // dimension, and the report says so instead of deciding.
        let ideal = parse_ideal("x1*x2 - x2^2").unwrap();
        let search = koenig_graded(&ideal, Some(&lex(2)), &Budget::default()).unwrap();
        let cert = search.certificate.unwrap();
        let report = cm_test_multiplicity(&ideal, &cert, &Budget::default()).unwrap();
        assert!(!report.zero_dimensional);
        assert_eq!(report.cohen_macaulay, None);

        // The swapped priority gives a true parameter system.
        let swapped = OrderSpec::Monomial(
            MonomialOrder::with_priority(crate::monomial::OrderKind::Lex, vec![1, 0]).unwrap(),
        );
        let search = koenig_graded(&ideal, Some(&swapped), &Budget::default()).unwrap();
        let cert = search.certificate.unwrap();
        let report = cm_test_multiplicity(&ideal, &cert, &Budget::default()).unwrap();
        assert!(report.zero_dimensional);
        assert_eq!(report.multiplicity, 2);
        assert_eq!(report.parameter_quotient_length, Some(2));
        assert_eq!(report.cohen_macaulay, Some(true));
    }

    #[test]
    fn very_well_covered_examples() {
        assert!(very_well_covered_check(&parse_ideal("x1*x2*x3\nx1*x3*x4\nx1*x4*x6\nx3*x4*x5").unwrap()).unwrap());
        assert!(very_well_covered_check(&parse_ideal("x1*x2").unwrap()).unwrap());
        assert!(very_well_covered_check(&path_ideal()).unwrap());
        assert!(very_well_covered_check(&square_ideal()).unwrap());
        // Three vertices, one cover vertex: 3 is not height times degree.
        assert!(!very_well_covered_check(&parse_ideal("x1*x2\nx2*x3").unwrap()).unwrap());
        // Triangle: height 2, degree 2, but only three variables.
        assert!(!very_well_covered_check(&parse_ideal("x1*x2\nx1*x3\nx2*x3").unwrap()).unwrap());
        assert!(very_well_covered_check(&parse_ideal("x1*x2\nx2^2*x3").unwrap()).is_err());
    }

    #[test]
    fn linkage_of_the_square_matching() {
        // J = (x1x2, x3x4) inside the square ideal: the colon components
        // are the two transversals that are no edge covers.
        let min_j = simplicial::minimal_covers(&[vec![0, 1], vec![2, 3]], 4).unwrap();
        let min_i = simplicial::minimal_covers(&square_ideal().generators.iter().map(|g| g.lead.support()).collect::<Vec<_>>(), 4).unwrap();
        let split = linkage_split(&min_j, &min_i);
        assert_eq!(split.colon_components, vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(split.unmixed_components, vec![vec![0, 2], vec![1, 3]]);

        let same = linkage_split(&min_i, &min_i);
        assert!(same.colon_components.is_empty());
    }

    #[test]
    fn realizability_of_single_generators_is_trivial() {
        let ideal = parse_ideal("x1*x2 - x2*x3").unwrap();
        for side in [Side::Lead, Side::Trail] {
            let report = realizable_initial_selection(&ideal, &[side]).unwrap();
            assert!(matches!(report.outcome, FeasibilityOutcome::Feasible(_)));
        }
        let monomial = parse_ideal("x1*x2").unwrap();
        assert!(realizable_initial_selection(&monomial, &[Side::Trail]).is_err());
    }

    #[test]
    fn inequality_rendering() {
        let q = |v: i64| BigRational::from_i64(v).unwrap();
        assert_eq!(render_weight_inequality(&[q(1), q(0), q(-1)]), "w1 > w3");
        assert_eq!(render_weight_inequality(&[q(-1), q(-1), q(0), q(2)]), "2*w4 > w1 + w2");
    }
}
