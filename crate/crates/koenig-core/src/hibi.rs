//! Finite posets, their lattices of down-closed subsets, and the join-meet
//! relation ideals of those lattices.
//!
//! The lattice elements are bitsets over the base poset, listed by cardinality
//! and then by bit value; all reported indices refer to that fixed labeling.
//! The reverse-priority order makes every relation lead with the product of
//! its incomparable pair, which turns the coprime-initials question into a
//! matching question on the incomparability graph.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graphs::SimpleGraph;
use crate::groebner::{buchberger, Budget};
use crate::ideal::{Binomial, IdealPresentation};
use crate::koenig::{attached_sequence, koenig_graded, KoenigCertificate, KoenigSearch};
use crate::monomial::{Monomial, MonomialOrder, OrderKind, OrderSpec};

/// Largest poset handled by the bitmask order routines.
const POSET_ELEMENT_LIMIT: usize = 64;
/// Largest base poset for down-set enumeration.
const IDEAL_BASE_LIMIT: usize = 20;
/// Largest lattice for the subset scan over admissible sets.
const CELL_SUBSET_LIMIT: usize = 16;

fn set_of(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

// ---------------------------------------------------------------------------
// Posets
// ---------------------------------------------------------------------------

/// A finite poset given by its cover relation. The constructor rejects
/// cycles and redundant pairs, so `covers` is exactly the diagram of the
/// order and `below` holds the strict transitive closure as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    below: Vec<u64>,
    ranks: Vec<usize>,
}

impl Poset {
    /// Build from cover pairs `(lower, upper)`.
    pub fn new(n: usize, covers: &[(usize, usize)]) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::precondition("a poset needs at least one element"));
        }
        if n > POSET_ELEMENT_LIMIT {
            return Err(Error::budget(format!(
                "posets are limited to {} elements",
                POSET_ELEMENT_LIMIT
            )));
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::precondition(format!(
                    "cover ({}, {}) is out of range",
                    a + 1,
                    b + 1
                )));
            }
            if a == b {
                return Err(Error::precondition(format!("element {} cannot cover itself", a + 1)));
            }
            if !seen.insert((a, b)) {
                return Err(Error::precondition(format!("duplicate cover ({}, {})", a + 1, b + 1)));
            }
        }

        // Strict down-sets in topological order; a leftover node means a cycle.
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(a, b) in covers {
            up[a].push(b);
            indegree[b] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut below = vec![0u64; n];
        let mut ranks = vec![0usize; n];
        let mut processed = 0;
        while let Some(v) = queue.pop() {
            processed += 1;
            for &w in &up[v] {
                below[w] |= below[v] | (1u64 << v);
                ranks[w] = ranks[w].max(ranks[v] + 1);
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if processed < n {
            return Err(Error::precondition("the cover relation has a cycle"));
        }

        for &(a, b) in covers {
            let implied = (0..n)
                .any(|c| c != a && below[b] >> c & 1 == 1 && below[c] >> a & 1 == 1);
            if implied {
                return Err(Error::precondition(format!(
                    "({}, {}) follows from the other covers and is not a cover",
                    a + 1,
                    b + 1
                )));
            }
        }

        let mut covers = covers.to_vec();
        covers.sort_unstable();
        Ok(Poset { n, covers, below, ranks })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Strict order: `a < b`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b] >> a & 1 == 1
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    /// All pairs `(a, b)` with `a < b` as indices and neither below the other.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if !self.comparable(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        pairs
    }

    /// Length of the longest chain ending at `v`, counted in steps.
    pub fn rank_of(&self, v: usize) -> usize {
        self.ranks[v]
    }

    /// Length of the longest chain of the poset.
    pub fn rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Elements grouped by rank, ascending.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut levels = vec![Vec::new(); self.rank() + 1];
        for v in 0..self.n {
            levels[self.ranks[v]].push(v);
        }
        levels
    }

    /// Every maximal chain realizes the full rank: covers climb one level at
    /// a time and every maximal element sits on top.
    pub fn is_pure(&self) -> bool {
        let d = self.rank();
        let steps_ok = self.covers.iter().all(|&(a, b)| self.ranks[b] == self.ranks[a] + 1);
        let tops_ok = (0..self.n)
            .filter(|&v| !self.covers.iter().any(|&(a, _)| a == v))
            .all(|v| self.ranks[v] == d);
        steps_ok && tops_ok
    }

    /// Fewest chains covering all elements, via a matching in the split
    /// comparability graph.
    pub fn minimum_chain_cover(&self) -> Result<usize, Error> {
        let mut split = SimpleGraph::new(2 * self.n)?;
        for a in 0..self.n {
            for b in 0..self.n {
                if self.less(a, b) {
                    split.add_edge(a, self.n + b)?;
                }
            }
        }
        Ok(self.n - split.matching_number())
    }
}

/// Serialization shape for posets: 1-based labels, `covers` entries
/// `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetData {
    pub elements: usize,
    pub covers: Vec<[usize; 2]>,
}

impl PosetData {
    pub fn to_poset(&self) -> Result<Poset, Error> {
        let mut covers = Vec::new();
        for &[a, b] in &self.covers {
            if a == 0 || b == 0 {
                return Err(Error::precondition("poset elements are numbered from 1"));
            }
            covers.push((a - 1, b - 1));
        }
        Poset::new(self.elements, &covers)
    }

    pub fn from_poset(p: &Poset) -> PosetData {
        PosetData {
            elements: p.len(),
            covers: p.covers().iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
        }
    }
}

/// The graph on the poset elements whose edges are the incomparable pairs.
pub fn incomparability_graph(p: &Poset) -> Result<SimpleGraph, Error> {
    let mut g = SimpleGraph::new(p.len())?;
    for (a, b) in p.incomparable_pairs() {
        g.add_edge(a, b)?;
    }
    Ok(g)
}

/// Thinness report: a poset is thin when no three elements are pairwise
/// incomparable; the witness is the first such triple otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinReport {
    pub thin: bool,
    pub witness: Option<Vec<usize>>,
}

pub fn is_thin(p: &Poset) -> ThinReport {
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            if p.comparable(i, j) {
                continue;
            }
            for k in j + 1..n {
                if !p.comparable(i, k) && !p.comparable(j, k) {
                    return ThinReport { thin: false, witness: Some(vec![i, j, k]) };
                }
            }
        }
    }
    ThinReport { thin: true, witness: None }
}

/// Cover number of the incomparability graph of a pure poset, computed from
/// the level formula n - (d + 1) and checked against the exhaustive search.
pub fn tau_incom(p: &Poset) -> Result<usize, Error> {
    if !p.is_pure() {
        return Err(Error::precondition("the level formula needs a pure poset"));
    }
    let formula = p.len() - (p.rank() + 1);
    let exhaustive = incomparability_graph(p)?.vertex_cover_number();
    assert_eq!(formula, exhaustive, "level formula disagrees with the cover search");
    Ok(formula)
}

/// Four equivalent readings of thinness for a pure poset, each computed on
/// its own: no 3-antichain, all levels of size at most 2, a cover by at most
/// two chains, and a bipartite incomparability graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilworthReport {
    pub thin: bool,
    pub small_levels: bool,
    pub two_chains: bool,
    pub bipartite_incom: bool,
}

impl DilworthReport {
    pub fn all_agree(&self) -> bool {
        self.thin == self.small_levels
            && self.thin == self.two_chains
            && self.thin == self.bipartite_incom
    }
}

pub fn dilworth_equivalences(p: &Poset) -> Result<DilworthReport, Error> {
    if !p.is_pure() {
        return Err(Error::precondition("the level equivalences need a pure poset"));
    }
    let report = DilworthReport {
        thin: is_thin(p).thin,
        small_levels: p.levels().iter().all(|level| level.len() <= 2),
        two_chains: p.minimum_chain_cover()? <= 2,
        bipartite_incom: incomparability_graph(p)?.is_bipartite(),
    };
    assert!(report.all_agree(), "the four thinness readings are equivalent on pure posets");
    Ok(report)
}

// ---------------------------------------------------------------------------
// Lattices of down-closed subsets
// ---------------------------------------------------------------------------

/// The lattice of down-closed subsets of a base poset, ordered by inclusion.
/// Elements are bitmasks over the base, sorted by cardinality and then by
/// value; meet and join are intersection and union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributiveLattice {
    base: Poset,
    elements: Vec<u64>,
}

/// Enumerate all down-closed subsets of `p`.
pub fn poset_ideals(p: &Poset) -> Result<DistributiveLattice, Error> {
    if p.len() > IDEAL_BASE_LIMIT {
        return Err(Error::budget(format!(
            "down-set enumeration is limited to {} base elements",
            IDEAL_BASE_LIMIT
        )));
    }
    let n = p.len();
    let mut elements: Vec<u64> = (0u64..1 << n)
        .filter(|&mask| (0..n).all(|i| mask >> i & 1 == 0 || p.below[i] & !mask == 0))
        .collect();
    elements.sort_by_key(|&m| (m.count_ones(), m));
    Ok(DistributiveLattice { base: p.clone(), elements })
}

impl DistributiveLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn element(&self, i: usize) -> u64 {
        self.elements[i]
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// Each element as a sorted list of base indices; the labeling table.
    pub fn member_sets(&self) -> Vec<Vec<usize>> {
        self.elements.iter().map(|&m| set_of(m, self.base.len())).collect()
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.elements
            .binary_search_by_key(&(mask.count_ones(), mask), |&m| (m.count_ones(), m))
            .ok()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.elements[i] & !self.elements[j] == 0
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.index_of(self.elements[i] & self.elements[j])
            .expect("down-sets are closed under intersection")
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.index_of(self.elements[i] | self.elements[j])
            .expect("down-sets are closed under union")
    }

    /// Length of the longest chain: the lattice is graded by cardinality.
    pub fn rank(&self) -> usize {
        self.base.len()
    }

    /// Height of the relation ideal: size minus rank minus one.
    pub fn height(&self) -> usize {
        self.len() - self.rank() - 1
    }

    /// Cover pairs in the inclusion order: one new base element.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.elements[j].count_ones() == self.elements[i].count_ones() + 1
                    && self.le(i, j)
                {
                    pairs.push((i, j));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if !self.le(i, j) && !self.le(j, i) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    /// The lattice viewed as an abstract poset on its element indices.
    pub fn as_poset(&self) -> Result<Poset, Error> {
        Poset::new(self.len(), &self.cover_pairs())
    }
}

/// The lattice of down-sets of two disjoint chains with `rows - 1` and
/// `cols - 1` elements: the grid with `rows * cols` vertices.
pub fn segre_lattice(rows: usize, cols: usize) -> Result<DistributiveLattice, Error> {
    if rows < 2 || cols < 2 {
        return Err(Error::precondition("the grid lattice needs both parameters at least 2"));
    }
    let a = rows - 1;
    let b = cols - 1;
    let mut covers = Vec::new();
    for i in 0..a.saturating_sub(1) {
        covers.push((i, i + 1));
    }
    for j in 0..b.saturating_sub(1) {
        covers.push((a + j, a + j + 1));
    }
    poset_ideals(&Poset::new(a + b, &covers)?)
}

// ---------------------------------------------------------------------------
// Relation ideals
// ---------------------------------------------------------------------------

/// Degrevlex with reversed variable priority, so the variable of a higher
/// lattice label is the larger one.
pub fn rev_order(n: usize) -> OrderSpec {
    let order = MonomialOrder::with_priority(OrderKind::DegRevLex, (0..n).rev().collect())
        .expect("a reversed range is a permutation");
    OrderSpec::Monomial(order)
}

/// The join-meet relation ideal: one generator x_a x_b - x_(a and b) x_(a or b)
/// per incomparable pair, together with the order that keeps the pair
/// products in the lead.
pub fn hibi_ideal(l: &DistributiveLattice) -> Result<(IdealPresentation, OrderSpec), Error> {
    let n = l.len();
    let mut generators = Vec::new();
    for &(i, j) in &l.incomparable_pairs() {
        let lead = Monomial::variable(i, n).multiply(&Monomial::variable(j, n));
        let trail = Monomial::variable(l.meet(i, j), n)
            .multiply(&Monomial::variable(l.join(i, j), n));
        let g = Binomial::difference(lead, trail)
            .expect("an incomparable pair differs from its meet and join");
        generators.push(g);
    }
    Ok((IdealPresentation::new(n, generators)?, rev_order(n)))
}

/// The relation generators are already a reduced basis under `rev_order`:
/// every pair product leads and no S-pair adds a new element.
pub fn verify_hibi_gb(l: &DistributiveLattice, budget: &Budget) -> Result<bool, Error> {
    let (ideal, order) = hibi_ideal(l)?;
    let leads_ok = ideal.generators.iter().all(|g| g.initial(&order) == g.lead);
    let gb = buchberger(&ideal, &order, budget)?;
    let closed = gb.elements.len() == ideal.generators.len()
        && gb.elements.iter().all(|e| ideal.generators.contains(e));
    Ok(leads_ok && closed)
}

/// Necessary size bound for a coprime-initials system under any order:
/// lattice size at most 2 (join irreducibles + 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lattice_size: usize,
    pub join_irreducibles: usize,
    pub bound: usize,
    pub holds: bool,
}

pub fn koenig_bound(l: &DistributiveLattice) -> BoundReport {
    let mut covered = vec![0usize; l.len()];
    for (_, b) in l.cover_pairs() {
        covered[b] += 1;
    }
    let join_irreducibles = covered.iter().filter(|&&c| c == 1).count();
    let bound = 2 * (join_irreducibles + 1);
    BoundReport { lattice_size: l.len(), join_irreducibles, bound, holds: l.len() <= bound }
}

/// Verdict on the relation ideal under the reverse order. The three booleans
/// are computed independently and always agree: thinness of the lattice, a
/// bipartite incomparability graph, and a height-sized matching among the
/// pair-product initials. For a thin lattice the witness takes one relation
/// per two-element level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HibiKoenigReport {
    pub thin: bool,
    pub bipartite_incom: bool,
    pub koenig_revlex: bool,
    pub height: usize,
    pub witness: Option<KoenigCertificate>,
}

pub fn koenig_hibi(l: &DistributiveLattice, budget: &Budget) -> Result<HibiKoenigReport, Error> {
    let poset = l.as_poset()?;
    assert!(poset.is_pure(), "down-set lattices are graded by cardinality");
    let thin = is_thin(&poset).thin;
    let incom = incomparability_graph(&poset)?;
    let bipartite_incom = incom.is_bipartite();
    let height = l.height();
    let koenig_revlex = incom.matching_number() == height;
    assert!(
        thin == bipartite_incom && thin == koenig_revlex,
        "the three criteria are equivalent on down-set lattices"
    );
    let witness = if thin {
        let (ideal, order) = hibi_ideal(l)?;
        let pairs = l.incomparable_pairs();
        let mut indices = Vec::new();
        for level in poset.levels() {
            if let [a, b] = level[..] {
                let k = pairs
                    .iter()
                    .position(|&p| p == (a, b))
                    .expect("a two-element level is an incomparable pair");
                indices.push(k);
            }
        }
        Some(attached_sequence(&ideal, &indices, &order, budget)?)
    } else {
        None
    };
    Ok(HibiKoenigReport { thin, bipartite_incom, koenig_revlex, height, witness })
}

/// Re-present the relation ideal by its reduced basis under `order` and run
/// the fixed-order search on that system. The basis must stay quadratic with
/// one element per relation; it is then again a minimal generating system.
pub fn koenig_via_reduced_basis(
    l: &DistributiveLattice,
    order: &OrderSpec,
    budget: &Budget,
) -> Result<(IdealPresentation, KoenigSearch), Error> {
    let (ideal, _) = hibi_ideal(l)?;
    let gb = buchberger(&ideal, order, budget)?;
    if gb.elements.len() != ideal.generators.len()
        || gb.elements.iter().any(|e| e.degree() != 2)
    {
        return Err(Error::precondition(
            "the reduced basis leaves degree two and is no minimal generating system",
        ));
    }
    let representation = IdealPresentation::new(ideal.n, gb.elements.clone())?;
    let search = koenig_graded(&representation, Some(order), budget)?;
    Ok((representation, search))
}

// ---------------------------------------------------------------------------
// Cells, admissible sets and the canonical module
// ---------------------------------------------------------------------------

/// An incomparable pair that covers its meet on both sides, with the four
/// corners (meet, a, b, join) and the four cover pairs between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub pair: (usize, usize),
    pub corners: [usize; 4],
    pub edges: [(usize, usize); 4],
}

pub fn cells(l: &DistributiveLattice) -> Vec<Cell> {
    let card = |i: usize| l.element(i).count_ones();
    let mut out = Vec::new();
    for &(a, b) in &l.incomparable_pairs() {
        let meet = l.meet(a, b);
        if card(a) != card(meet) + 1 || card(b) != card(meet) + 1 {
            continue;
        }
        let join = l.join(a, b);
        debug_assert_eq!(card(join), card(a) + 1);
        out.push(Cell {
            pair: (a, b),
            corners: [meet, a, b, join],
            edges: [(meet, a), (meet, b), (a, join), (b, join)],
        });
    }
    out
}

/// All subsets W such that every cell touched by W keeps one of its four
/// edges inside W, together with the minimal nonempty ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleReport {
    pub cells: Vec<Cell>,
    pub admissible: Vec<u64>,
    pub minimal_nonempty: Vec<Vec<usize>>,
}

pub fn admissible_sets(l: &DistributiveLattice) -> Result<AdmissibleReport, Error> {
    if l.len() > CELL_SUBSET_LIMIT {
        return Err(Error::budget(format!(
            "the admissible-set scan is limited to {} lattice elements",
            CELL_SUBSET_LIMIT
        )));
    }
    let cell_list = cells(l);
    let corner_masks: Vec<u64> = cell_list
        .iter()
        .map(|c| c.corners.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    let edge_masks: Vec<[u64; 4]> = cell_list
        .iter()
        .map(|c| {
            let mut masks = [0u64; 4];
            for (k, &(u, v)) in c.edges.iter().enumerate() {
                masks[k] = 1 << u | 1 << v;
            }
            masks
        })
        .collect();

    let admissible: Vec<u64> = (0u64..1 << l.len())
        .filter(|&mask| {
            (0..cell_list.len()).all(|k| {
                corner_masks[k] & mask == 0 || edge_masks[k].iter().any(|&e| e & !mask == 0)
            })
        })
        .collect();

    // Minimal members, ascending by size: any admissible set strictly above
    // one of them is not minimal, and every nonempty admissible set contains
    // a minimal one.
    let mut nonempty: Vec<u64> = admissible.iter().copied().filter(|&m| m != 0).collect();
    nonempty.sort_by_key(|&m| (m.count_ones(), m));
    let mut minimal_masks: Vec<u64> = Vec::new();
    for &m in &nonempty {
        if !minimal_masks.iter().any(|&s| s & !m == 0) {
            minimal_masks.push(m);
        }
    }
    let minimal_nonempty = minimal_masks.into_iter().map(|m| set_of(m, l.len())).collect();
    Ok(AdmissibleReport { cells: cell_list, admissible, minimal_nonempty })
}

/// One admissible set W with the element sets of its untouched-cell
/// components and the height of the ideal (W, relations of those components).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HibiComponent {
    pub vertices: Vec<usize>,
    pub untouched: Vec<Vec<usize>>,
    pub height: usize,
}

/// Component description of the canonical module of the quotient by the cell
/// relations: the admissible sets whose component height matches the relation
/// ideal, and their intersection when every survivor is a set of variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalHibiReport {
    pub cells: Vec<Cell>,
    pub admissible_nonempty: usize,
    pub target_height: usize,
    pub survivors: Vec<HibiComponent>,
    pub module_free: bool,
    pub monomial_intersection: Option<Vec<Monomial>>,
}

/// Longest chain length inside `members` under the lattice order.
fn induced_rank(l: &DistributiveLattice, members: &[usize]) -> usize {
    let mut sorted = members.to_vec();
    sorted.sort_by_key(|&i| l.element(i).count_ones());
    let mut best = vec![0usize; sorted.len()];
    let mut rank = 0;
    for (k, &e) in sorted.iter().enumerate() {
        for (k2, &f) in sorted.iter().enumerate().take(k) {
            if f != e && l.le(f, e) {
                best[k] = best[k].max(best[k2] + 1);
            }
        }
        rank = rank.max(best[k]);
    }
    rank
}

pub fn canonical_module_hibi(l: &DistributiveLattice) -> Result<CanonicalHibiReport, Error> {
    let poset = l.as_poset()?;
    if !is_thin(&poset).thin {
        return Err(Error::precondition("the cell analysis needs a thin lattice"));
    }
    let report = admissible_sets(l)?;
    let target = l.height();
    let n = l.len();

    let corner_masks: Vec<u64> = report
        .cells
        .iter()
        .map(|c| c.corners.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();

    let mut survivors = Vec::new();
    for &mask in &report.admissible {
        if mask == 0 {
            continue;
        }
        let untouched_cells: Vec<usize> =
            (0..report.cells.len()).filter(|&k| corner_masks[k] & mask == 0).collect();

        // Group untouched cells into corner-sharing components.
        let mut assigned = vec![false; untouched_cells.len()];
        let mut untouched = Vec::new();
        let mut height = mask.count_ones() as usize;
        for start in 0..untouched_cells.len() {
            if assigned[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut component_mask = 0u64;
            assigned[start] = true;
            while let Some(k) = stack.pop() {
                component_mask |= corner_masks[untouched_cells[k]];
                for k2 in 0..untouched_cells.len() {
                    if !assigned[k2]
                        && corner_masks[untouched_cells[k2]] & component_mask != 0
                    {
                        assigned[k2] = true;
                        stack.push(k2);
                    }
                }
            }
            let members = set_of(component_mask, n);
            height += members.len() - induced_rank(l, &members) - 1;
            untouched.push(members);
        }

        if height == target {
            untouched.sort();
            survivors.push(HibiComponent { vertices: set_of(mask, n), untouched, height });
        }
    }

    let module_free = survivors.is_empty();
    let monomial_intersection = if module_free {
        Some(vec![Monomial::one(n)])
    } else if survivors.iter().all(|c| c.untouched.is_empty()) {
        let mut products = vec![0u64];
        for component in &survivors {
            let mut next = BTreeSet::new();
            for &m in &products {
                for &v in &component.vertices {
                    next.insert(m | 1 << v);
                }
            }
            products = next.into_iter().collect();
        }
        let minimal: Vec<u64> = products
            .iter()
            .copied()
            .filter(|&m| !products.iter().any(|&o| o != m && o & m == o))
            .collect();
        Some(
            minimal
                .into_iter()
                .map(|m| {
                    Monomial::from_exponents(
                        (0..n).map(|v| (m >> v & 1) as u32).collect(),
                    )
                })
                .collect(),
        )
    } else {
        None
    };

    Ok(CanonicalHibiReport {
        cells: report.cells,
        admissible_nonempty: report.admissible.len() - 1,
        target_height: target,
        survivors,
        module_free,
        monomial_intersection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koenig::ideal_height;

    fn budget() -> Budget {
        Budget::default()
    }

    fn chain_poset(c: usize) -> Poset {
        let covers: Vec<(usize, usize)> = (0..c.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Poset::new(c, &covers).unwrap()
    }

    fn antichain_poset(k: usize) -> Poset {
        Poset::new(k, &[]).unwrap()
    }

    /// Four elements a, b, c, d with a < c, b < c, b < d: a fence.
    fn fence_poset() -> Poset {
        Poset::new(4, &[(0, 2), (1, 2), (1, 3)]).unwrap()
    }

    fn fence_lattice() -> DistributiveLattice {
        poset_ideals(&fence_poset()).unwrap()
    }

    fn boolean_lattice(k: usize) -> DistributiveLattice {
        poset_ideals(&antichain_poset(k)).unwrap()
    }

    /// Eight elements stacked in two interleaved diamonds.
    fn stacked_poset() -> Poset {
        Poset::new(
            8,
            &[(0, 2), (1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 6), (4, 7), (5, 7)],
        )
        .unwrap()
    }

    /// A spine of length 3 with one whisker per spine element: every level
    /// has at most two elements, yet four of them are pairwise incomparable.
    fn whisker_chain_poset() -> Poset {
        Poset::new(7, &[(0, 1), (1, 2), (2, 3), (0, 4), (1, 5), (2, 6)]).unwrap()
    }

    fn mm(n: usize, vars: &[usize]) -> Monomial {
        let mut exponents = vec![0u32; n];
        for &v in vars {
            exponents[v] += 1;
        }
        Monomial::from_exponents(exponents)
    }

    #[test]
    fn construction_rejects_bad_cover_relations() {
        assert!(Poset::new(0, &[]).is_err());
        assert!(Poset::new(2, &[(0, 0)]).is_err());
        assert!(Poset::new(2, &[(0, 1), (0, 1)]).is_err());
        assert!(Poset::new(2, &[(0, 2)]).is_err());
        assert!(Poset::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Poset::new(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
        let err = Poset::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap_err();
        assert!(err.to_string().contains("follows"), "{}", err);
        assert!(Poset::new(3, &[(0, 1), (1, 2)]).is_ok());
    }

    #[test]
    fn order_queries_ranks_and_purity() {
        let fence = fence_poset();
        assert!(fence.less(0, 2));
        assert!(!fence.less(2, 0));
        assert!(!fence.comparable(0, 3));
        assert_eq!((0..4).map(|v| fence.rank_of(v)).collect::<Vec<_>>(), [0, 0, 1, 1]);
        assert_eq!(fence.rank(), 1);
        assert_eq!(fence.levels(), [vec![0, 1], vec![2, 3]]);
        assert!(fence.is_pure());
        assert_eq!(fence.incomparable_pairs(), [(0, 1), (0, 3), (2, 3)]);

        let stacked = stacked_poset();
        assert_eq!(stacked.rank(), 3);
        assert!(stacked.is_pure());
        assert_eq!(stacked.levels(), [vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]);

        assert!(!whisker_chain_poset().is_pure());
        assert!(chain_poset(1).is_pure());
    }

    #[test]
    fn down_sets_match_direct_enumeration() {
        let lattice = fence_lattice();
        assert_eq!(
            lattice.elements(),
            [0b0000, 0b0001, 0b0010, 0b0011, 0b1010, 0b0111, 0b1011, 0b1111]
        );
        for k in 1..=4 {
            assert_eq!(boolean_lattice(k).len(), 1 << k);
        }
        for c in 1..=5 {
            assert_eq!(poset_ideals(&chain_poset(c)).unwrap().len(), c + 1);
        }

        for poset in [fence_poset(), stacked_poset(), whisker_chain_poset()] {
            let lattice = poset_ideals(&poset).unwrap();
            let brute: Vec<u64> = (0u64..1 << poset.len())
                .filter(|&mask| {
                    (0..poset.len()).all(|i| {
                        mask >> i & 1 == 0
                            || (0..poset.len()).all(|j| !poset.less(j, i) || mask >> j & 1 == 1)
                    })
                })
                .collect();
            assert_eq!(lattice.len(), brute.len());
            for i in 0..lattice.len() {
                for j in 0..lattice.len() {
                    let meet = lattice.element(lattice.meet(i, j));
                    let join = lattice.element(lattice.join(i, j));
                    assert_eq!(meet, lattice.element(i) & lattice.element(j));
                    assert_eq!(join, lattice.element(i) | lattice.element(j));
                }
            }
        }
    }

    #[test]
    fn labels_and_covers_of_the_fence_lattice() {
        let lattice = fence_lattice();
        let expected: Vec<Vec<usize>> = vec![
            vec![],
            vec![0],
            vec![1],
            vec![0, 1],
            vec![1, 3],
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 1, 2, 3],
        ];
        assert_eq!(lattice.member_sets(), expected);
        assert_eq!(
            lattice.cover_pairs(),
            [(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (3, 6), (4, 6), (5, 7), (6, 7)]
        );
        assert_eq!(lattice.rank(), 4);
        assert_eq!(lattice.height(), 3);
        assert_eq!(lattice.incomparable_pairs(), [(1, 2), (1, 4), (3, 4), (4, 5), (5, 6)]);
    }

    #[test]
    fn incomparability_graphs_of_reference_posets() {
        let g = incomparability_graph(&stacked_poset()).unwrap();
        assert_eq!(
            g.edges(),
            [(0, 1), (0, 3), (0, 5), (2, 3), (2, 5), (4, 5), (5, 6), (6, 7)]
        );
        assert_eq!(incomparability_graph(&chain_poset(4)).unwrap().edge_count(), 0);
        assert_eq!(incomparability_graph(&antichain_poset(4)).unwrap().edge_count(), 6);
    }

    #[test]
    fn cover_numbers_from_the_level_formula() {
        assert_eq!(tau_incom(&fence_lattice().as_poset().unwrap()).unwrap(), 3);
        assert_eq!(tau_incom(&boolean_lattice(3).as_poset().unwrap()).unwrap(), 4);
        assert_eq!(tau_incom(&chain_poset(5)).unwrap(), 0);
        assert_eq!(tau_incom(&stacked_poset()).unwrap(), 4);
        assert!(tau_incom(&whisker_chain_poset()).is_err());
    }

    #[test]
    fn antichain_witnesses() {
        assert_eq!(is_thin(&antichain_poset(3)), ThinReport {
            thin: false,
            witness: Some(vec![0, 1, 2])
        });
        assert!(is_thin(&fence_lattice().as_poset().unwrap()).thin);
        assert!(is_thin(&stacked_poset()).thin);
        assert_eq!(
            is_thin(&boolean_lattice(3).as_poset().unwrap()).witness,
            Some(vec![1, 2, 3])
        );
        let whisker = is_thin(&whisker_chain_poset());
        assert!(!whisker.thin);
        assert!(whisker.witness.is_some());
        assert!(is_thin(&segre_lattice(2, 5).unwrap().as_poset().unwrap()).thin);
    }

    #[test]
    fn four_thinness_readings() {
        let fence = dilworth_equivalences(&fence_lattice().as_poset().unwrap()).unwrap();
        assert!(fence.thin && fence.small_levels && fence.two_chains && fence.bipartite_incom);

        let wide = dilworth_equivalences(&antichain_poset(3)).unwrap();
        assert!(!wide.thin && !wide.small_levels && !wide.two_chains && !wide.bipartite_incom);

        // Nonpure input: every level is small, yet a large antichain exists,
        // so the equivalences only hold behind the purity gate.
        let whisker = whisker_chain_poset();
        assert!(whisker.levels().iter().all(|level| level.len() <= 2));
        assert!(dilworth_equivalences(&whisker).is_err());
    }

    #[test]
    fn relation_ideals_of_the_reference_lattices() {
        let (ideal, _) = hibi_ideal(&fence_lattice()).unwrap();
        assert_eq!(ideal.n, 8);
        let expected = [
            ((1, 2), (0, 3)),
            ((1, 4), (0, 6)),
            ((3, 4), (2, 6)),
            ((4, 5), (2, 7)),
            ((5, 6), (3, 7)),
        ];
        assert_eq!(ideal.generators.len(), expected.len());
        for (g, ((a, b), (m, j))) in ideal.generators.iter().zip(expected) {
            assert_eq!(g.lead, mm(8, &[a, b]));
            assert_eq!(g.trail, Some(mm(8, &[m, j])));
        }
        assert_eq!(ideal.single_generation_degree(), Some(2));

        let (chain_ideal, _) = hibi_ideal(&poset_ideals(&chain_poset(3)).unwrap()).unwrap();
        assert!(chain_ideal.generators.is_empty());

        let (cube, _) = hibi_ideal(&boolean_lattice(3)).unwrap();
        let pairs: Vec<((usize, usize), (usize, usize))> = vec![
            ((1, 2), (0, 4)),
            ((1, 3), (0, 5)),
            ((1, 6), (0, 7)),
            ((2, 3), (0, 6)),
            ((2, 5), (0, 7)),
            ((3, 4), (0, 7)),
            ((4, 5), (1, 7)),
            ((4, 6), (2, 7)),
            ((5, 6), (3, 7)),
        ];
        assert_eq!(cube.generators.len(), pairs.len());
        for (g, ((a, b), (m, j))) in cube.generators.iter().zip(pairs) {
            assert_eq!(g.lead, mm(8, &[a, b]));
            assert_eq!(g.trail, Some(mm(8, &[m, j])));
        }
    }

    #[test]
    fn reverse_order_keeps_pair_products_leading() {
        for lattice in [
            fence_lattice(),
            boolean_lattice(2),
            boolean_lattice(3),
            boolean_lattice(4),
            poset_ideals(&chain_poset(4)).unwrap(),
            segre_lattice(3, 3).unwrap(),
        ] {
            assert!(verify_hibi_gb(&lattice, &budget()).unwrap());
        }
    }

    #[test]
    fn coprime_family_verdicts() {
        let fence = koenig_hibi(&fence_lattice(), &budget()).unwrap();
        assert!(fence.thin && fence.bipartite_incom && fence.koenig_revlex);
        assert_eq!(fence.height, 3);
        let witness = fence.witness.unwrap();
        assert_eq!(witness.initials, [mm(8, &[1, 2]), mm(8, &[3, 4]), mm(8, &[5, 6])]);
        assert_eq!(witness.parameters.len(), 5);

        let cube = koenig_hibi(&boolean_lattice(3), &budget()).unwrap();
        assert!(!cube.thin && !cube.bipartite_incom && !cube.koenig_revlex);
        assert_eq!(cube.height, 4);
        assert!(cube.witness.is_none());

        assert!(!koenig_hibi(&boolean_lattice(4), &budget()).unwrap().koenig_revlex);
        assert!(koenig_hibi(&segre_lattice(2, 4).unwrap(), &budget()).unwrap().koenig_revlex);
        assert!(!koenig_hibi(&segre_lattice(3, 3).unwrap(), &budget()).unwrap().koenig_revlex);

        let chain = koenig_hibi(&poset_ideals(&chain_poset(3)).unwrap(), &budget()).unwrap();
        assert!(chain.koenig_revlex);
        assert_eq!(chain.height, 0);
        assert_eq!(chain.witness.unwrap().parameters.len(), 4);
    }

    #[test]
    fn fixed_order_search_agrees_with_the_verdict() {
        for lattice in [fence_lattice(), boolean_lattice(3), segre_lattice(3, 3).unwrap()] {
            let (ideal, order) = hibi_ideal(&lattice).unwrap();
            let search = koenig_graded(&ideal, Some(&order), &budget()).unwrap();
            let verdict = koenig_hibi(&lattice, &budget()).unwrap();
            assert_eq!(search.certificate.is_some(), verdict.koenig_revlex);
        }
    }

    #[test]
    fn size_bound_for_any_order() {
        for k in 1..=5 {
            let report = koenig_bound(&boolean_lattice(k));
            assert_eq!(report.join_irreducibles, k);
            assert_eq!(report.holds, k <= 3, "cube of dimension {}", k);
        }
        let fence = koenig_bound(&fence_lattice());
        assert_eq!(fence, BoundReport {
            lattice_size: 8,
            join_irreducibles: 4,
            bound: 10,
            holds: true
        });
        assert!(koenig_bound(&poset_ideals(&chain_poset(5)).unwrap()).holds);
        // The base poset always reappears as the join irreducibles.
        for lattice in [fence_lattice(), segre_lattice(3, 4).unwrap()] {
            assert_eq!(koenig_bound(&lattice).join_irreducibles, lattice.base().len());
        }
    }

    #[test]
    fn quadratic_rebasing_finds_a_family_under_lex() {
        let cube = boolean_lattice(3);
        let lex = OrderSpec::Monomial(MonomialOrder::lex(8));
        let (rep, search) = koenig_via_reduced_basis(&cube, &lex, &budget()).unwrap();
        assert_eq!(rep.generators.len(), 9);
        let cert = search.certificate.unwrap();
        let initials: BTreeSet<Monomial> = cert.initials.iter().cloned().collect();
        let expected: BTreeSet<Monomial> =
            [mm(8, &[0, 4]), mm(8, &[1, 6]), mm(8, &[2, 5]), mm(8, &[3, 7])]
                .into_iter()
                .collect();
        assert_eq!(initials, expected);
        assert_eq!(search.height, Some(4));
        assert_eq!(search.verified_minimal, Some(true));

        // Under the reverse order the same ideal has no height-sized coprime
        // family: the initials then live on only six vertices.
        let rev = rev_order(8);
        let (_, rev_search) = koenig_via_reduced_basis(&cube, &rev, &budget()).unwrap();
        assert!(rev_search.certificate.is_none());

        let (_, principal) =
            koenig_via_reduced_basis(&boolean_lattice(2), &OrderSpec::Monomial(MonomialOrder::lex(4)), &budget())
                .unwrap();
        assert_eq!(principal.height, Some(1));
        assert!(principal.certificate.is_some());
    }

    #[test]
    fn cells_of_the_reference_lattices() {
        let fence = cells(&fence_lattice());
        assert_eq!(fence.len(), 3);
        assert_eq!(fence[0].corners, [0, 1, 2, 3]);
        assert_eq!(fence[1].corners, [2, 3, 4, 6]);
        assert_eq!(fence[2].corners, [3, 5, 6, 7]);
        assert_eq!(fence[0].edges, [(0, 1), (0, 2), (1, 3), (2, 3)]);

        assert_eq!(cells(&boolean_lattice(2)).len(), 1);
        assert!(cells(&poset_ideals(&chain_poset(4)).unwrap()).is_empty());
        assert_eq!(cells(&boolean_lattice(3)).len(), 6);
    }

    #[test]
    fn admissible_subsets_of_the_fence_lattice() {
        let report = admissible_sets(&fence_lattice()).unwrap();
        assert!(report.admissible.contains(&0));
        // Touching the middle cell through its corner 3 alone is not enough.
        let touched_without_edge = 1 << 1 | 1 << 3 | 1 << 5;
        assert!(!report.admissible.contains(&touched_without_edge));
        assert!(report.admissible.contains(&(1 << 1 | 1 << 3 | 1 << 6)));
        assert_eq!(
            report.minimal_nonempty,
            [
                vec![0, 1],
                vec![5, 7],
                vec![0, 2, 4],
                vec![2, 3, 5],
                vec![1, 3, 6],
                vec![2, 3, 6],
                vec![4, 6, 7],
            ]
        );
    }

    #[test]
    fn admissible_subsets_of_a_single_cell() {
        let report = admissible_sets(&boolean_lattice(2)).unwrap();
        assert_eq!(report.admissible.len(), 10);
        assert_eq!(
            report.minimal_nonempty,
            [vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3]]
        );

        let chain = admissible_sets(&poset_ideals(&chain_poset(3)).unwrap()).unwrap();
        assert_eq!(chain.admissible.len(), 16);
        assert_eq!(chain.minimal_nonempty, [vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn canonical_components_of_the_fence_lattice() {
        let report = canonical_module_hibi(&fence_lattice()).unwrap();
        assert_eq!(report.target_height, 3);
        assert!(!report.module_free);
        let vertex_sets: Vec<&[usize]> =
            report.survivors.iter().map(|c| c.vertices.as_slice()).collect();
        assert_eq!(vertex_sets, [&[2, 3, 5][..], &[1, 3, 6], &[2, 3, 6]]);
        assert!(report.survivors.iter().all(|c| c.height == 3 && c.untouched.is_empty()));
        let intersection: BTreeSet<Monomial> =
            report.monomial_intersection.unwrap().into_iter().collect();
        let expected: BTreeSet<Monomial> =
            [mm(8, &[3]), mm(8, &[1, 2]), mm(8, &[2, 6]), mm(8, &[5, 6])]
                .into_iter()
                .collect();
        assert_eq!(intersection, expected);
    }

    #[test]
    fn free_canonical_modules() {
        // A single cell: the cell relation is the whole ideal, no admissible
        // set survives at height 1 and the module is free.
        let square = canonical_module_hibi(&boolean_lattice(2)).unwrap();
        assert_eq!(square.target_height, 1);
        assert!(square.survivors.is_empty());
        assert!(square.module_free);
        assert_eq!(square.monomial_intersection, Some(vec![Monomial::one(4)]));

        let chain = canonical_module_hibi(&poset_ideals(&chain_poset(4)).unwrap()).unwrap();
        assert!(chain.module_free);
        assert!(chain.cells.is_empty());

        assert!(canonical_module_hibi(&boolean_lattice(3)).is_err());
    }

    #[test]
    fn grid_lattices() {
        assert!(segre_lattice(1, 3).is_err());
        for rows in 2..=4usize {
            for cols in 2..=4usize {
                let lattice = segre_lattice(rows, cols).unwrap();
                assert_eq!(lattice.len(), rows * cols);
                assert_eq!(lattice.height(), (rows - 1) * (cols - 1));
                let verdict = koenig_hibi(&lattice, &budget()).unwrap();
                assert_eq!(verdict.thin, rows == 2 || cols == 2, "{} by {}", rows, cols);
            }
        }
        assert_eq!(segre_lattice(2, 2).unwrap().elements(), boolean_lattice(2).elements());
        assert!(!koenig_hibi(&segre_lattice(4, 3).unwrap(), &budget()).unwrap().koenig_revlex);
        assert!(koenig_hibi(&segre_lattice(2, 5).unwrap(), &budget()).unwrap().koenig_revlex);
    }

    #[test]
    fn poset_serialization_round_trip() {
        let fence = fence_poset();
        let data = PosetData::from_poset(&fence);
        let text = serde_json::to_string(&data).unwrap();
        let back: PosetData = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_poset().unwrap(), fence);
        let bad = PosetData { elements: 2, covers: vec![[0, 1]] };
        assert!(bad.to_poset().is_err());
    }

    #[test]
    fn structural_invariants_across_a_catalog() {
        let catalog = vec![
            fence_poset(),
            chain_poset(4),
            antichain_poset(3),
            Poset::new(3, &[(0, 1), (0, 2)]).unwrap(),
            Poset::new(3, &[(0, 2), (1, 2)]).unwrap(),
            Poset::new(5, &[(0, 1), (2, 3), (3, 4)]).unwrap(),
        ];
        for poset in catalog {
            let lattice = poset_ideals(&poset).unwrap();
            let as_poset = lattice.as_poset().unwrap();
            assert!(as_poset.is_pure());
            for i in 0..lattice.len() {
                assert_eq!(as_poset.rank_of(i), lattice.element(i).count_ones() as usize);
            }
            assert!(verify_hibi_gb(&lattice, &budget()).unwrap());
            let (ideal, order) = hibi_ideal(&lattice).unwrap();
            assert_eq!(ideal_height(&ideal, &order, &budget()).unwrap(), lattice.height());
        }
    }
}
