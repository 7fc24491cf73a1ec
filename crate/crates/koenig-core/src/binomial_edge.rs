//! Binomial edge ideals: one pure-difference quadric x_i y_j - x_j y_i per
//! graph edge in a doubled variable set. Cut sets describe the minimal
//! primes, semi-paths drive the König criterion, and the attached sequence
//! of a path certificate is the field-independent parameter system.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graphs::SimpleGraph;
use crate::groebner::{buchberger, Budget};
use crate::ideal::{Binomial, IdealPresentation, LinearForm};
use crate::koenig::{self, KoenigCertificate, MultiplicityReport};
use crate::monomial::{Monomial, MonomialOrder, OrderKind, OrderSpec};

/// Cut-set enumeration walks all vertex subsets.
pub const CUT_SET_VERTEX_LIMIT: usize = 16;

/// The presentation of a graph's binomial edge ideal: ambient variables
/// x_1..x_n, y_1..y_n (indices 0..n-1 and n..2n-1), one generator per
/// sorted edge with lead x_i y_j for i < j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialEdgeIdeal {
    pub graph: SimpleGraph,
    pub presentation: IdealPresentation,
}

impl BinomialEdgeIdeal {
    pub fn new(graph: &SimpleGraph) -> Result<Self, Error> {
        let n = graph.n();
        let mut generators = Vec::new();
        for (i, j) in graph.edges() {
            let mut lead = vec![0u32; 2 * n];
            let mut trail = vec![0u32; 2 * n];
            lead[i] = 1;
            lead[n + j] = 1;
            trail[j] = 1;
            trail[n + i] = 1;
            generators.push(Binomial {
                lead: Monomial::from_exponents(lead),
                trail: Some(Monomial::from_exponents(trail)),
            });
        }
        let names = (0..n)
            .map(|i| format!("x{}", i + 1))
            .chain((0..n).map(|i| format!("y{}", i + 1)))
            .collect();
        let presentation = IdealPresentation::new(2 * n, generators)?.with_names(names)?;
        Ok(BinomialEdgeIdeal { graph: graph.clone(), presentation })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Lexicographic order with x_1 > .. > x_n > y_1 > .. > y_n; every lead
    /// above is the initial term under it.
    pub fn standard_order(&self) -> OrderSpec {
        OrderSpec::Monomial(MonomialOrder::lex(2 * self.n()))
    }

    /// Lexicographic order whose variable priority follows the given paths:
    /// x variables in path order first, then y variables in the same order.
    /// Along each path the edge initials become x(earlier) y(later), so the
    /// initials of vertex-disjoint paths are pairwise coprime.
    pub fn path_adapted_order(&self, paths: &[Vec<usize>]) -> Result<OrderSpec, Error> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut sigma = Vec::with_capacity(n);
        for path in paths {
            for &v in path {
                if v >= n {
                    return Err(Error::precondition(format!("vertex {} out of range", v + 1)));
                }
                if seen[v] {
                    return Err(Error::precondition(format!("vertex {} repeated", v + 1)));
                }
                seen[v] = true;
                sigma.push(v);
            }
        }
        sigma.extend((0..n).filter(|&v| !seen[v]));
        let mut priority = Vec::with_capacity(2 * n);
        priority.extend(sigma.iter().copied());
        priority.extend(sigma.iter().map(|&v| n + v));
        Ok(OrderSpec::Monomial(MonomialOrder::with_priority(OrderKind::Lex, priority)?))
    }
}

/// A vertex subset whose removal data describes a minimal prime: the prime
/// is generated by the 2|T| variables of T plus the complete-graph binomials
/// on every remaining component, so its height is n + |T| - c(T).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSetRecord {
    pub vertices: Vec<usize>,
    pub component_count: usize,
    pub components: Vec<Vec<usize>>,
    pub height: usize,
    pub is_cut_set: bool,
}

fn component_count_masks(graph: &SimpleGraph) -> Vec<u32> {
    let n = graph.n();
    let full = 1usize << n;
    let mut counts = vec![0u32; full];
    for (removed, count) in counts.iter_mut().enumerate() {
        let mut seen = removed;
        let mut c = 0;
        while seen != full - 1 {
            let start = (!seen).trailing_zeros() as usize;
            c += 1;
            let mut stack = vec![start];
            seen |= 1 << start;
            while let Some(v) = stack.pop() {
                let mut next = graph.adj_mask(v) as usize & !seen & (full - 1);
                while next != 0 {
                    let w = next.trailing_zeros() as usize;
                    next &= next - 1;
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        *count = c;
    }
    counts
}

fn components_after_removal(graph: &SimpleGraph, removed: &[usize]) -> Vec<Vec<usize>> {
    let mask: u64 = removed.iter().map(|&v| 1u64 << v).sum();
    let mut seen = mask;
    let mut components = Vec::new();
    for start in 0..graph.n() {
        if seen & (1 << start) != 0 {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        seen |= 1 << start;
        while let Some(v) = stack.pop() {
            let mut next = graph.adj_mask(v) & !seen;
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                seen |= 1 << w;
                comp.push(w);
                stack.push(w);
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// All cut sets: the empty set, and every T where dropping any element
/// strictly lowers the component count of the complement. Sorted by size,
/// then lexicographically.
pub fn cut_sets(graph: &SimpleGraph) -> Result<Vec<CutSetRecord>, Error> {
    let n = graph.n();
    if n > CUT_SET_VERTEX_LIMIT {
        return Err(Error::budget(format!(
            "cut-set enumeration limited to {} vertices",
            CUT_SET_VERTEX_LIMIT
        )));
    }
    let counts = component_count_masks(graph);
    let mut records = Vec::new();
    for mask in 0..(1usize << n) {
        let c = counts[mask];
        let mut is_cut = true;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if counts[mask & !(1 << v)] >= c {
                is_cut = false;
                break;
            }
        }
        if !is_cut {
            continue;
        }
        let vertices: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let components = components_after_removal(graph, &vertices);
        records.push(CutSetRecord {
            height: n + vertices.len() - c as usize,
            component_count: c as usize,
            vertices,
            components,
            is_cut_set: true,
        });
    }
    records.sort_by(|a, b| (a.vertices.len(), &a.vertices).cmp(&(b.vertices.len(), &b.vertices)));
    Ok(records)
}

/// Krull dimension of the quotient by the binomial edge ideal, computed
/// from the cut sets and cross-checked against the initial ideal under the
/// standard order.
pub fn dim_quotient(graph: &SimpleGraph, budget: &Budget) -> Result<usize, Error> {
    let n = graph.n();
    let records = cut_sets(graph)?;
    let via_cuts = records
        .iter()
        .map(|r| n - r.vertices.len() + r.component_count)
        .max()
        .unwrap_or(2 * n);
    let ideal = BinomialEdgeIdeal::new(graph)?;
    let gb = buchberger(&ideal.presentation, &ideal.standard_order(), budget)?;
    let via_groebner = gb.quotient_dimension()?;
    if via_cuts != via_groebner {
        return Err(Error::precondition(format!(
            "dimension disagreement: {} from cut sets, {} from the initial ideal",
            via_cuts, via_groebner
        )));
    }
    Ok(via_cuts)
}

/// Dimension from cut sets alone, without the Groebner cross-check.
pub fn dim_via_cut_sets(graph: &SimpleGraph) -> Result<usize, Error> {
    let n = graph.n();
    Ok(cut_sets(graph)?
        .iter()
        .map(|r| n - r.vertices.len() + r.component_count)
        .max()
        .unwrap_or(2 * n))
}

/// All minimal primes of the binomial edge ideal share one height.
pub fn is_unmixed_jg(graph: &SimpleGraph) -> Result<bool, Error> {
    let records = cut_sets(graph)?;
    Ok(records.windows(2).all(|w| w[0].height == w[1].height))
}

/// A spanning family of vertex-disjoint paths with its total edge count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiPath {
    pub paths: Vec<Vec<usize>>,
    pub length: usize,
}

/// A semi-path of maximum length (deterministic reconstruction).
pub fn max_semipath(graph: &SimpleGraph) -> Result<SemiPath, Error> {
    let cover = graph.minimum_path_cover()?;
    Ok(SemiPath { length: cover.edge_count(), paths: cover.components })
}

/// One spanning path per connected component, when every component has one.
pub fn traceable_decomposition(graph: &SimpleGraph) -> Result<Option<Vec<Vec<usize>>>, Error> {
    let cover = graph.minimum_path_cover()?;
    if cover.components.len() == graph.connected_components().len() {
        Ok(Some(cover.components))
    } else {
        Ok(None)
    }
}

/// König search outcome for a binomial edge ideal: the quotient dimension d,
/// the required semi-path length 2n - d, the maximum semi-path found, and
/// the certificate over its edges when the lengths agree.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialKoenig {
    pub dim: usize,
    pub required_length: usize,
    pub semipath: SemiPath,
    pub certificate: Option<KoenigCertificate>,
}

pub fn koenig_jg(graph: &SimpleGraph, budget: &Budget) -> Result<BinomialKoenig, Error> {
    let ideal = BinomialEdgeIdeal::new(graph)?;
    let dim = dim_quotient(graph, budget)?;
    let semipath = max_semipath(graph)?;
    let required_length = 2 * graph.n() - dim;
    if semipath.length != required_length {
        return Ok(BinomialKoenig { dim, required_length, semipath, certificate: None });
    }
    let order = ideal.path_adapted_order(&semipath.paths)?;
    let edges = graph.edges();
    let mut indices = Vec::new();
    for path in &semipath.paths {
        for w in path.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            let pos = edges.iter().position(|&e| e == key).expect("path edge in graph");
            indices.push(pos);
        }
    }
    indices.sort_unstable();
    let certificate = koenig::attached_sequence(&ideal.presentation, &indices, &order, budget)?;
    Ok(BinomialKoenig { dim, required_length, semipath, certificate: Some(certificate) })
}

/// The parameter system read off a maximum semi-path certificate: for every
/// path edge the difference y(later) - x(earlier), plus every untouched
/// variable. Verified to cut the quotient down to dimension zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialSop {
    pub forms: Vec<LinearForm>,
    pub quotient_length: u64,
}

pub fn special_sop_jg(graph: &SimpleGraph, budget: &Budget) -> Result<SpecialSop, Error> {
    let search = koenig_jg(graph, budget)?;
    let cert = search
        .certificate
        .ok_or_else(|| Error::precondition("the binomial edge ideal is not of König type"))?;
    debug_assert_eq!(cert.parameters.len(), search.dim);
    let ideal = BinomialEdgeIdeal::new(graph)?;
    let mut generators = ideal.presentation.generators.clone();
    generators.extend(cert.parameters.iter().map(|f| f.to_binomial(2 * graph.n())));
    let extended = IdealPresentation::new(2 * graph.n(), generators)?;
    let gb = buchberger(&extended, &cert.order, budget)?;
    if !gb.is_zero_dimensional() {
        return Err(Error::precondition(
            "attached parameters do not reach dimension zero",
        ));
    }
    Ok(SpecialSop { forms: cert.parameters, quotient_length: gb.quotient_length()? })
}

/// Field-independent Cohen-Macaulay verdict through the multiplicity test
/// with the semi-path parameter system.
pub fn cm_verdict_jg(graph: &SimpleGraph, budget: &Budget) -> Result<MultiplicityReport, Error> {
    let search = koenig_jg(graph, budget)?;
    let cert = search
        .certificate
        .ok_or_else(|| Error::precondition("the binomial edge ideal is not of König type"))?;
    let ideal = BinomialEdgeIdeal::new(graph)?;
    koenig::cm_test_multiplicity(&ideal.presentation, &cert, budget)
}

/// The canonical module's prime components for a traceable Cohen-Macaulay
/// graph: the cut sets of the spanning path union that are no cut sets of
/// the graph itself.
pub fn canonical_components_jg(
    graph: &SimpleGraph,
    budget: &Budget,
) -> Result<Vec<CutSetRecord>, Error> {
    let decomposition = traceable_decomposition(graph)?
        .ok_or_else(|| Error::precondition("graph is not traceable"))?;
    let verdict = cm_verdict_jg(graph, budget)?;
    if verdict.cohen_macaulay != Some(true) {
        return Err(Error::precondition("quotient is not Cohen-Macaulay"));
    }
    let mut path_edges = Vec::new();
    for path in &decomposition {
        for w in path.windows(2) {
            path_edges.push((w[0], w[1]));
        }
    }
    let spanning = SimpleGraph::from_edges(graph.n(), &path_edges)?;
    let graph_cuts: BTreeSet<Vec<usize>> =
        cut_sets(graph)?.into_iter().map(|r| r.vertices).collect();
    Ok(cut_sets(&spanning)?
        .into_iter()
        .filter(|r| !graph_cuts.contains(&r.vertices))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_graph, connected_representatives, path_graph};

    fn figure_unmixed_failure() -> SimpleGraph {
        // Five-cycle 1..5 with whiskers 6 at 5 and 7 at 3.
        SimpleGraph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5), (2, 6)])
            .unwrap()
    }

    fn figure_short_semipath() -> SimpleGraph {
        // Triangle 2,3,5 with whiskers 1 at 2, 4 at 3, 6 at 5.
        SimpleGraph::from_edges(6, &[(1, 2), (2, 4), (1, 4), (0, 1), (2, 3), (4, 5)]).unwrap()
    }

    fn is_semi_path_graph(graph: &SimpleGraph) -> bool {
        let acyclic = graph.edge_count() + graph.connected_components().len() == graph.n();
        acyclic && (0..graph.n()).all(|v| graph.degree(v) <= 2)
    }

    #[test]
    fn presentation_of_an_edge() {
        let ideal = BinomialEdgeIdeal::new(&complete_graph(2)).unwrap();
        assert_eq!(ideal.presentation.n, 4);
        assert_eq!(ideal.presentation.to_string(), "vars: x1 x2 y1 y2\nx1*y2 - x2*y1\n");
        let gb = buchberger(&ideal.presentation, &ideal.standard_order(), &Budget::default())
            .unwrap();
        assert_eq!(gb.quotient_dimension().unwrap(), 3);
    }

    #[test]
    fn cut_sets_of_paths_and_complete_graphs() {
        let p3 = path_graph(3);
        let records = cut_sets(&p3).unwrap();
        let summary: Vec<(Vec<usize>, usize, usize)> = records
            .iter()
            .map(|r| (r.vertices.clone(), r.component_count, r.height))
            .collect();
        assert_eq!(summary, vec![(vec![], 1, 2), (vec![1], 2, 2)]);

        let k4 = complete_graph(4);
        let records = cut_sets(&k4).unwrap();
        assert_eq!(records.len(), 1);
        assert!(records[0].vertices.is_empty());

        let p5 = path_graph(5);
        let singletons: Vec<Vec<usize>> = cut_sets(&p5)
            .unwrap()
            .into_iter()
            .map(|r| r.vertices)
            .filter(|v| v.len() == 1)
            .collect();
        assert_eq!(singletons, vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn dimensions_of_the_reference_graphs() {
        assert_eq!(dim_quotient(&figure_unmixed_failure(), &Budget::default()).unwrap(), 9);
        assert_eq!(dim_quotient(&figure_short_semipath(), &Budget::default()).unwrap(), 7);
        assert_eq!(dim_quotient(&complete_graph(2), &Budget::default()).unwrap(), 3);
    }

    #[test]
    fn unmixedness() {
        assert!(is_unmixed_jg(&complete_graph(4)).unwrap());
        assert!(!is_unmixed_jg(&figure_unmixed_failure()).unwrap());
        for n in 2..=6 {
            assert!(is_unmixed_jg(&path_graph(n)).unwrap(), "path on {}", n);
        }
    }

    #[test]
    fn semipath_lengths() {
        assert_eq!(max_semipath(&figure_unmixed_failure()).unwrap().length, 5);
        assert_eq!(max_semipath(&figure_short_semipath()).unwrap().length, 4);
        assert_eq!(max_semipath(&complete_graph(2)).unwrap().length, 1);
    }

    #[test]
    fn koenig_criterion_on_the_reference_graphs() {
        let long = koenig_jg(&figure_unmixed_failure(), &Budget::default()).unwrap();
        assert_eq!((long.dim, long.required_length), (9, 5));
        assert!(long.certificate.is_some());
        assert!(traceable_decomposition(&figure_unmixed_failure()).unwrap().is_none());

        let short = koenig_jg(&figure_short_semipath(), &Budget::default()).unwrap();
        assert_eq!((short.dim, short.required_length, short.semipath.length), (7, 5, 4));
        assert!(short.certificate.is_none());

        for n in 2..=5 {
            assert!(koenig_jg(&path_graph(n), &Budget::default()).unwrap().certificate.is_some());
        }
        assert!(koenig_jg(&complete_graph(4), &Budget::default()).unwrap().certificate.is_some());
    }

    #[test]
    fn parameter_systems_from_paths() {
        let sop = special_sop_jg(&path_graph(3), &Budget::default()).unwrap();
        assert_eq!(
            sop.forms,
            vec![
                LinearForm::Var(2),
                LinearForm::Var(3),
                LinearForm::Diff(0, 4),
                LinearForm::Diff(1, 5)
            ]
        );
        assert_eq!(sop.quotient_length, 4);

        let sop = special_sop_jg(&complete_graph(2), &Budget::default()).unwrap();
        assert_eq!(
            sop.forms,
            vec![LinearForm::Var(1), LinearForm::Var(2), LinearForm::Diff(0, 3)]
        );
        assert_eq!(sop.quotient_length, 2);

        let sop = special_sop_jg(&figure_unmixed_failure(), &Budget::default()).unwrap();
        assert_eq!(sop.forms.len(), 9);
    }

    #[test]
    fn cohen_macaulay_verdicts() {
        for n in 2..=5 {
            let verdict = cm_verdict_jg(&path_graph(n), &Budget::default()).unwrap();
            assert_eq!(verdict.cohen_macaulay, Some(true), "path on {}", n);
        }
        for n in 3..=5 {
            let verdict = cm_verdict_jg(&complete_graph(n), &Budget::default()).unwrap();
            assert_eq!(verdict.cohen_macaulay, Some(true), "complete on {}", n);
            assert_eq!(verdict.multiplicity, n as u64, "complete on {}", n);
        }
        let verdict = cm_verdict_jg(&figure_unmixed_failure(), &Budget::default()).unwrap();
        assert_eq!(verdict.cohen_macaulay, Some(false));
    }

    #[test]
    fn canonical_components() {
        let own_path = canonical_components_jg(&path_graph(4), &Budget::default()).unwrap();
        assert!(own_path.is_empty());

        let k3 = canonical_components_jg(&complete_graph(3), &Budget::default()).unwrap();
        assert_eq!(k3.len(), 1);
        assert_eq!(k3[0].vertices, vec![1]);
        assert_eq!(k3[0].components, vec![vec![0], vec![2]]);
        assert_eq!(k3[0].height, 2);

        let k4: Vec<Vec<usize>> = canonical_components_jg(&complete_graph(4), &Budget::default())
            .unwrap()
            .into_iter()
            .map(|r| r.vertices)
            .collect();
        assert_eq!(k4, vec![vec![1], vec![2]]);

        let k5: Vec<Vec<usize>> = canonical_components_jg(&complete_graph(5), &Budget::default())
            .unwrap()
            .into_iter()
            .map(|r| r.vertices)
            .collect();
        assert_eq!(k5, vec![vec![1], vec![2], vec![3], vec![1, 3]]);

        assert!(canonical_components_jg(&figure_unmixed_failure(), &Budget::default()).is_err());
    }

    #[test]
    fn combinatorial_properties_to_seven_vertices() {
        for n in 1..=7 {
            for graph in connected_representatives(n).unwrap() {
                let d = dim_via_cut_sets(&graph).unwrap();
                let bound = 2 * n - d;
                let semipath = max_semipath(&graph).unwrap();
                assert!(semipath.length <= bound, "{:?}", graph.edges());

                let traceable = traceable_decomposition(&graph).unwrap().is_some();
                if traceable {
                    assert_eq!(semipath.length, bound, "{:?}", graph.edges());
                }
                if is_unmixed_jg(&graph).unwrap() && semipath.length == bound {
                    assert!(traceable, "{:?}", graph.edges());
                }

                let complete_intersection = graph.edge_count() == bound;
                assert_eq!(
                    complete_intersection,
                    is_semi_path_graph(&graph),
                    "{:?}",
                    graph.edges()
                );
            }
        }
    }

    #[test]
    fn groebner_pipeline_agrees_to_five_vertices() {
        for n in 2..=5 {
            for graph in connected_representatives(n).unwrap() {
                let search = koenig_jg(&graph, &Budget::default()).unwrap();
                assert_eq!(
                    search.certificate.is_some(),
                    search.semipath.length == search.required_length,
                    "{:?}",
                    graph.edges()
                );
                if search.certificate.is_some() {
                    let sop = special_sop_jg(&graph, &Budget::default()).unwrap();
                    assert_eq!(sop.forms.len(), search.dim, "{:?}", graph.edges());
                }
            }
        }
    }
}
