//! Edge ideals of graphs: König numbers, perfect matchings of König type,
//! the two auxiliary graphs that carry canonical-module and regularity data,
//! and the combined Cohen-Macaulay report.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graphs::SimpleGraph;
use crate::groebner::Budget;
use crate::ideal::{Binomial, IdealPresentation};
use crate::koenig;
use crate::monomial::{Monomial, MonomialOrder, OrderSpec};
use crate::simplicial;

/// The squarefree quadratic ideal with one generator per edge, edges sorted.
pub fn edge_ideal(graph: &SimpleGraph) -> Result<IdealPresentation, Error> {
    let gens = graph
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let mut exps = vec![0u32; graph.n()];
            exps[a] = 1;
            exps[b] = 1;
            Binomial::monomial(Monomial::from_exponents(exps))
        })
        .collect();
    IdealPresentation::new(graph.n(), gens)
}

/// Vertex cover number, the height of the edge ideal.
pub fn tau(graph: &SimpleGraph) -> usize {
    graph.vertex_cover_number()
}

/// König graphs: matching number equals cover number.
pub fn is_koenig(graph: &SimpleGraph) -> bool {
    graph.matching_number() == tau(graph)
}

/// A matching whose edges are pairwise disjoint; perfect König means its
/// size is the cover number and its edges cover every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingCertificate {
    pub edges: Vec<(usize, usize)>,
    pub is_perfect_koenig: bool,
}

fn first_perfect_matching(graph: &SimpleGraph) -> Option<Vec<(usize, usize)>> {
    fn extend(graph: &SimpleGraph, covered: u64, acc: &mut Vec<(usize, usize)>) -> bool {
        let n = graph.n();
        let free = (0..n).find(|v| covered & (1 << v) == 0);
        let Some(v) = free else { return true };
        for u in graph.neighbors(v) {
            if covered & (1 << u) == 0 {
                acc.push((v, u));
                if extend(graph, covered | (1 << v) | (1 << u), acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    extend(graph, 0, &mut acc).then_some(acc)
}

/// First matching (smallest free vertex to its smallest usable neighbor)
/// of size tau covering every vertex; `None` when no such matching exists.
pub fn perfect_koenig_matching(graph: &SimpleGraph) -> Option<MatchingCertificate> {
    if graph.n() != 2 * tau(graph) {
        return None;
    }
    first_perfect_matching(graph)
        .map(|edges| MatchingCertificate { edges, is_perfect_koenig: true })
}

fn validate_matching(graph: &SimpleGraph, edges: &[(usize, usize)]) -> Result<(), Error> {
    let mut covered = vec![false; graph.n()];
    for &(a, b) in edges {
        if !graph.has_edge(a, b) {
            return Err(Error::precondition(format!(
                "{{{}, {}}} is not an edge",
                a + 1,
                b + 1
            )));
        }
        for v in [a, b] {
            if covered[v] {
                return Err(Error::precondition(format!(
                    "vertex {} is matched twice",
                    v + 1
                )));
            }
            covered[v] = true;
        }
    }
    Ok(())
}

/// The auxiliary graph of a perfect König matching {e_1..e_h}: an edge
/// {z, w} with z in e_i, w in e_j, i != j, whenever the two complementary
/// endpoints form an edge of the original graph.
pub fn build_h(graph: &SimpleGraph, matching: &MatchingCertificate) -> Result<SimpleGraph, Error> {
    validate_matching(graph, &matching.edges)?;
    if matching.edges.len() != tau(graph) || matching.edges.len() * 2 != graph.n() {
        return Err(Error::precondition("matching is not perfect König"));
    }
    let mut h = SimpleGraph::new(graph.n())?;
    for (i, &(a1, b1)) in matching.edges.iter().enumerate() {
        for &(a2, b2) in matching.edges.iter().skip(i + 1) {
            for (z, z_other) in [(a1, b1), (b1, a1)] {
                for (w, w_other) in [(a2, b2), (b2, a2)] {
                    if graph.has_edge(z_other, w_other) {
                        h.add_edge(z, w)?;
                    }
                }
            }
        }
    }
    Ok(h)
}

/// The head graph of a maximum matching: one vertex per matching edge,
/// labelled by the smaller endpoint, joined when the matching edges are
/// connected by an edge of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadGraph {
    pub graph: SimpleGraph,
    pub heads: Vec<usize>,
}

pub fn build_g0(graph: &SimpleGraph, matching: &[(usize, usize)]) -> Result<HeadGraph, Error> {
    validate_matching(graph, matching)?;
    if matching.len() != graph.matching_number() {
        return Err(Error::precondition("matching is not maximum"));
    }
    let m = matching.len();
    let heads: Vec<usize> = matching.iter().map(|&(a, b)| a.min(b)).collect();
    let mut owner = vec![None; graph.n()];
    for (k, &(a, b)) in matching.iter().enumerate() {
        owner[a] = Some(k);
        owner[b] = Some(k);
    }
    let mut g0 = SimpleGraph::new(m)?;
    for (a, b) in graph.edges() {
        if let (Some(k), Some(l)) = (owner[a], owner[b]) {
            if k != l {
                g0.add_edge(k, l)?;
            }
        }
    }
    Ok(HeadGraph { graph: g0, heads })
}

/// Canonical-module description of a Cohen-Macaulay König edge ideal: the
/// Alexander-dual generators of the auxiliary graph's edge ideal, and the
/// type (number of minimal covers of that graph).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalModuleEdge {
    pub matching: MatchingCertificate,
    pub h_graph: SimpleGraph,
    pub generators: Vec<Monomial>,
    pub module_type: u64,
}

pub fn canonical_module_edge(graph: &SimpleGraph) -> Result<CanonicalModuleEdge, Error> {
    let matching = perfect_koenig_matching(graph)
        .ok_or_else(|| Error::precondition("no perfect matching of König type"))?;
    let ideal = edge_ideal(graph)?;
    let edges = graph.edges();
    let indices: Vec<usize> = matching
        .edges
        .iter()
        .map(|&(a, b)| {
            let key = (a.min(b), a.max(b));
            edges.iter().position(|&e| e == key).expect("matching edge present")
        })
        .collect();
    let order = OrderSpec::Monomial(MonomialOrder::lex(graph.n()));
    let cert = koenig::attached_sequence(&ideal, &indices, &order, &Budget::default())?;
    let ib = koenig::cm_test_ib(&ideal, &cert)?;
    if !ib.cohen_macaulay {
        return Err(Error::precondition("edge ideal is not Cohen-Macaulay"));
    }
    let h_graph = build_h(graph, &matching)?;
    let h_gens: Vec<Monomial> = edge_ideal(&h_graph)?
        .generators
        .iter()
        .map(|g| g.lead.clone())
        .collect();
    let generators = simplicial::alexander_dual(&h_gens, graph.n())?;
    let module_type = generators.len() as u64;
    Ok(CanonicalModuleEdge { matching, h_graph, generators, module_type })
}

/// Cohen-Macaulay report for a König graph: count of minimum covers against
/// faces of the head graph's independence complex; on success also the type
/// (its facets) and the regularity (its dimension plus one).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCmReport {
    pub matching: Vec<(usize, usize)>,
    pub alpha: u64,
    pub faces: u64,
    pub cm: bool,
    pub module_type: Option<u64>,
    pub regularity: Option<u64>,
}

pub fn koenig_cm_report(graph: &SimpleGraph) -> Result<EdgeCmReport, Error> {
    if !is_koenig(graph) {
        return Err(Error::precondition(
            "matching number differs from cover number",
        ));
    }
    let matching = graph.maximum_matching();
    let g0 = build_g0(graph, &matching)?;
    let gens: Vec<Monomial> = edge_ideal(graph)?.generators.iter().map(|g| g.lead.clone()).collect();
    let alpha = simplicial::multiplicity(&gens, graph.n())?;
    let faces = g0.graph.independent_set_count();
    let cm = alpha == faces;
    let (module_type, regularity) = if cm {
        let facets = g0.graph.maximal_independent_sets()?.len() as u64;
        (Some(facets), Some(g0.graph.independence_number() as u64))
    } else {
        (None, None)
    };
    Ok(EdgeCmReport { matching, alpha, faces, cm, module_type, regularity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_graph, connected_representatives, cycle_graph, path_graph};

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exponents(exps.to_vec())
    }

    #[test]
    fn koenig_numbers() {
        let c4 = cycle_graph(4);
        assert_eq!((c4.matching_number(), tau(&c4)), (2, 2));
        assert!(is_koenig(&c4));

        let c5 = cycle_graph(5);
        assert_eq!((c5.matching_number(), tau(&c5)), (2, 3));
        assert!(!is_koenig(&c5));

        let k2 = complete_graph(2);
        assert_eq!((k2.matching_number(), tau(&k2)), (1, 1));
        assert!(is_koenig(&k2));
    }

    #[test]
    fn perfect_matchings_of_koenig_type() {
        let c4 = cycle_graph(4);
        let cert = perfect_koenig_matching(&c4).unwrap();
        assert_eq!(cert.edges, vec![(0, 1), (2, 3)]);

        assert!(perfect_koenig_matching(&cycle_graph(5)).is_none());
        assert!(perfect_koenig_matching(&path_graph(3)).is_none());

        let k2 = complete_graph(2);
        assert_eq!(perfect_koenig_matching(&k2).unwrap().edges, vec![(0, 1)]);
    }

    #[test]
    fn auxiliary_graph_by_the_complementary_rule() {
        let p4 = path_graph(4);
        let cert = perfect_koenig_matching(&p4).unwrap();
        assert_eq!(cert.edges, vec![(0, 1), (2, 3)]);
        let h = build_h(&p4, &cert).unwrap();
        assert_eq!(h.edges(), vec![(0, 3)]);

        let k2 = complete_graph(2);
        let h = build_h(&k2, &perfect_koenig_matching(&k2).unwrap()).unwrap();
        assert!(h.edges().is_empty());

        let c4 = cycle_graph(4);
        let h = build_h(&c4, &perfect_koenig_matching(&c4).unwrap()).unwrap();
        assert_eq!(h.edges(), vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn head_graphs() {
        let c4 = cycle_graph(4);
        let g0 = build_g0(&c4, &c4.maximum_matching()).unwrap();
        assert_eq!(g0.heads, vec![0, 2]);
        assert_eq!(g0.graph.edges(), vec![(0, 1)]);

        let p4 = path_graph(4);
        let g0 = build_g0(&p4, &p4.maximum_matching()).unwrap();
        assert_eq!(g0.heads, vec![0, 2]);
        assert_eq!(g0.graph.edges(), vec![(0, 1)]);

        let two_edges = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let g0 = build_g0(&two_edges, &two_edges.maximum_matching()).unwrap();
        assert!(g0.graph.edges().is_empty());
        assert_eq!(g0.graph.n(), 2);

        assert!(build_g0(&c4, &[(0, 1)]).is_err());
    }

    #[test]
    fn canonical_modules_of_small_graphs() {
        let k2 = complete_graph(2);
        let desc = canonical_module_edge(&k2).unwrap();
        assert_eq!(desc.generators, vec![Monomial::one(2)]);
        assert_eq!(desc.module_type, 1);

        let p4 = path_graph(4);
        let desc = canonical_module_edge(&p4).unwrap();
        assert_eq!(desc.generators, vec![m(&[1, 0, 0, 0]), m(&[0, 0, 0, 1])]);
        assert_eq!(desc.module_type, 2);

        assert!(canonical_module_edge(&cycle_graph(4)).is_err());
    }

    #[test]
    fn reports_on_the_three_reference_graphs() {
        let report = koenig_cm_report(&cycle_graph(4)).unwrap();
        assert_eq!((report.alpha, report.faces, report.cm), (2, 3, false));
        assert_eq!(report.module_type, None);

        let report = koenig_cm_report(&path_graph(4)).unwrap();
        assert_eq!((report.alpha, report.faces, report.cm), (3, 3, true));
        assert_eq!(report.module_type, Some(2));
        assert_eq!(report.regularity, Some(1));

        let report = koenig_cm_report(&complete_graph(2)).unwrap();
        assert_eq!((report.alpha, report.faces, report.cm), (2, 2, true));
        assert_eq!(report.module_type, Some(1));
        assert_eq!(report.regularity, Some(1));

        assert!(koenig_cm_report(&cycle_graph(5)).is_err());
    }

    #[test]
    fn matching_is_bounded_by_cover_and_bipartite_reaches_it() {
        for n in 1..=6 {
            for graph in connected_representatives(n).unwrap() {
                assert!(graph.matching_number() <= tau(&graph));
                if graph.is_bipartite() {
                    assert!(is_koenig(&graph));
                }
            }
        }
    }

    #[test]
    fn coprime_generator_search_detects_koenig_graphs() {
        for n in 2..=6 {
            for graph in connected_representatives(n).unwrap() {
                let ideal = edge_ideal(&graph).unwrap();
                let cert = koenig::koenig_monomial(&ideal).unwrap();
                assert_eq!(cert.is_some(), is_koenig(&graph));
            }
        }
    }

    #[test]
    fn report_agrees_with_subset_test_and_homology() {
        for n in 2..=6 {
            for graph in connected_representatives(n).unwrap() {
                if !is_koenig(&graph) {
                    continue;
                }
                let ideal = edge_ideal(&graph).unwrap();
                let report = koenig_cm_report(&graph).unwrap();

                let cert = koenig::koenig_monomial(&ideal).unwrap().unwrap();
                let ib = koenig::cm_test_ib(&ideal, &cert).unwrap();
                assert_eq!(report.cm, ib.cohen_macaulay, "{:?}", graph.edges());

                let gens: Vec<Monomial> =
                    ideal.generators.iter().map(|g| g.lead.clone()).collect();
                let facets = simplicial::stanley_reisner_facets(&gens, graph.n()).unwrap();
                let homology_cm = simplicial::reisner_cm(&facets, graph.n()).unwrap();
                assert_eq!(report.cm, homology_cm, "{:?}", graph.edges());
            }
        }
    }

    #[test]
    fn both_type_formulas_agree_on_cm_graphs() {
        for n in 2..=6 {
            for graph in connected_representatives(n).unwrap() {
                if !is_koenig(&graph) {
                    continue;
                }
                let report = koenig_cm_report(&graph).unwrap();
                if !report.cm {
                    continue;
                }
                if let Ok(desc) = canonical_module_edge(&graph) {
                    assert_eq!(
                        Some(desc.module_type),
                        report.module_type,
                        "{:?}",
                        graph.edges()
                    );
                }
            }
        }
    }

    #[test]
    fn unmixed_koenig_graphs_have_perfect_koenig_matchings() {
        for n in 2..=6 {
            for graph in connected_representatives(n).unwrap() {
                if !is_koenig(&graph) {
                    continue;
                }
                let gens: Vec<Monomial> = edge_ideal(&graph)
                    .unwrap()
                    .generators
                    .iter()
                    .map(|g| g.lead.clone())
                    .collect();
                if simplicial::is_unmixed(&gens, graph.n()).unwrap() {
                    assert!(
                        perfect_koenig_matching(&graph).is_some(),
                        "{:?}",
                        graph.edges()
                    );
                }
            }
        }
    }
}
