//! Finite simple graphs on at most 64 vertices, bitset-based.
//!
//! Provides the exact invariants the ideal-theoretic side needs: matchings,
//! vertex covers, independent sets, path covers (spanning unions of vertex
//! disjoint paths), and connected representatives of every isomorphism class
//! for small vertex counts.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::Error;

const MAX_VERTICES: usize = 64;
/// Path-cover dynamic programming is 3^n; keep n small enough to stay exact.
pub const PATH_COVER_VERTEX_LIMIT: usize = 16;

/// Undirected simple graph stored as one adjacency bitmask per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Result<Self, Error> {
        if n > MAX_VERTICES {
            return Err(Error::precondition(format!("at most {} vertices supported", MAX_VERTICES)));
        }
        Ok(SimpleGraph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = SimpleGraph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        if u >= self.n || v >= self.n {
            return Err(Error::precondition(format!(
                "edge ({}, {}) out of range for {} vertices",
                u + 1,
                v + 1,
                self.n
            )));
        }
        if u == v {
            return Err(Error::precondition(format!("loop at vertex {}", u + 1)));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_edge(v, u)).collect()
    }

    /// Neighbourhood of v as a bitmask.
    pub fn adj_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// Edges as sorted pairs (u < v), sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edge vertex sets, for cover computations.
    pub fn edge_supports(&self) -> Vec<Vec<usize>> {
        self.edges().into_iter().map(|(u, v)| vec![u, v]).collect()
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Two-coloring via breadth-first search; the parts are sorted.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut color = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = color[v].unwrap();
                for u in self.neighbors(v) {
                    match color[u] {
                        None => {
                            color[u] = Some(!c);
                            queue.push_back(u);
                        }
                        Some(cu) if cu == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let left = (0..self.n).filter(|&v| color[v] == Some(false)).collect();
        let right = (0..self.n).filter(|&v| color[v] == Some(true)).collect();
        Some((left, right))
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Subgraph induced on the given (sorted, distinct) vertices; returns the
    /// graph together with the old labels of its vertices.
    pub fn induced(&self, vertices: &[usize]) -> Result<(SimpleGraph, Vec<usize>), Error> {
        let mut labels: Vec<usize> = vertices.to_vec();
        labels.sort_unstable();
        labels.dedup();
        if labels.iter().any(|&v| v >= self.n) {
            return Err(Error::precondition("induced vertex out of range"));
        }
        let mut g = SimpleGraph::new(labels.len())?;
        for (i, &u) in labels.iter().enumerate() {
            for (j, &v) in labels.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok((g, labels))
    }

    fn independence_rec(&self, available: u64, memo: &mut HashMap<u64, usize>) -> usize {
        if available == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&available) {
            return v;
        }
        let v = available.trailing_zeros() as usize;
        let without = self.independence_rec(available & !(1 << v), memo);
        let with = 1 + self.independence_rec(available & !(1 << v) & !self.adj[v], memo);
        let best = without.max(with);
        memo.insert(available, best);
        best
    }

    /// Size of a largest independent set.
    pub fn independence_number(&self) -> usize {
        let mask = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        self.independence_rec(mask, &mut HashMap::new())
    }

    /// Size of a smallest vertex cover.
    pub fn vertex_cover_number(&self) -> usize {
        self.n - self.independence_number()
    }

    /// Number of independent sets, the empty set included.
    pub fn independent_set_count(&self) -> u64 {
        fn rec(g: &SimpleGraph, available: u64, memo: &mut HashMap<u64, u64>) -> u64 {
            if available == 0 {
                return 1;
            }
            if let Some(&v) = memo.get(&available) {
                return v;
            }
            let v = available.trailing_zeros() as usize;
            let total = rec(g, available & !(1 << v), memo)
                + rec(g, available & !(1 << v) & !g.adj[v], memo);
            memo.insert(available, total);
            total
        }
        let mask = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        rec(self, mask, &mut HashMap::new())
    }

    /// Inclusion-maximal independent sets, sorted; the complements of the
    /// inclusion-minimal vertex covers.
    pub fn maximal_independent_sets(&self) -> Result<Vec<Vec<usize>>, Error> {
        let covers = crate::simplicial::minimal_covers(&self.edge_supports(), self.n)?;
        let mut sets: Vec<Vec<usize>> = covers
            .into_iter()
            .map(|c| {
                let in_cover: std::collections::BTreeSet<usize> = c.into_iter().collect();
                (0..self.n).filter(|v| !in_cover.contains(v)).collect()
            })
            .collect();
        sets.sort();
        Ok(sets)
    }

    fn matching_rec(&self, available: u64, memo: &mut HashMap<u64, usize>) -> usize {
        let mut v = None;
        let mut bits = available;
        while bits != 0 {
            let c = bits.trailing_zeros() as usize;
            if self.adj[c] & available != 0 {
                v = Some(c);
                break;
            }
            bits &= bits - 1;
        }
        let Some(v) = v else { return 0 };
        if let Some(&m) = memo.get(&available) {
            return m;
        }
        // Either v stays unmatched or it pairs with one of its neighbors.
        let mut best = self.matching_rec(available & !(1 << v), memo);
        let mut nbrs = self.adj[v] & available;
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            best = best.max(1 + self.matching_rec(available & !(1 << v) & !(1 << u), memo));
        }
        memo.insert(available, best);
        best
    }

    /// Size of a largest matching.
    pub fn matching_number(&self) -> usize {
        let mask = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        self.matching_rec(mask, &mut HashMap::new())
    }

    /// One largest matching, deterministic: smallest free vertex first, then
    /// its smallest usable neighbor.
    pub fn maximum_matching(&self) -> Vec<(usize, usize)> {
        let mut memo = HashMap::new();
        let mask = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let target = self.matching_rec(mask, &mut memo);
        let mut matching = Vec::new();
        let mut available = mask;
        let mut remaining = target;
        while remaining > 0 {
            let mut v = 0;
            while available & (1 << v) == 0 || self.adj[v] & available == 0 {
                v += 1;
            }
            // Match v if some choice keeps the optimum, else drop it.
            let mut matched = false;
            let mut nbrs = self.adj[v] & available;
            if self.matching_rec(available & !(1 << v), &mut memo) != remaining {
                while nbrs != 0 {
                    let u = nbrs.trailing_zeros() as usize;
                    nbrs &= nbrs - 1;
                    let rest = available & !(1 << v) & !(1 << u);
                    if 1 + self.matching_rec(rest, &mut memo) == remaining {
                        matching.push((v.min(u), v.max(u)));
                        available = rest;
                        remaining -= 1;
                        matched = true;
                        break;
                    }
                }
            }
            if !matched {
                available &= !(1 << v);
            }
        }
        matching
    }

    /// Canonical upper-triangle code, minimized over all vertex relabelings.
    /// Exact and affordable for n <= 8.
    pub fn canonical_code(&self) -> Result<u64, Error> {
        if self.n > 8 {
            return Err(Error::precondition("canonical code limited to 8 vertices"));
        }
        let mut best = u64::MAX;
        for perm in (0..self.n).permutations(self.n) {
            let mut code = 0u64;
            let mut bit = 0;
            for i in 0..self.n {
                for j in i + 1..self.n {
                    if self.has_edge(perm[i], perm[j]) {
                        code |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            best = best.min(code);
        }
        Ok(best)
    }
}

/// A spanning family of vertex disjoint paths; singletons allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCover {
    /// Vertex sequences, one per path, ordered by their smallest vertex.
    pub components: Vec<Vec<usize>>,
}

impl PathCover {
    pub fn edge_count(&self) -> usize {
        self.components.iter().map(|p| p.len().saturating_sub(1)).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for path in &self.components {
            for w in path.windows(2) {
                out.push((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        out.sort_unstable();
        out
    }
}

impl SimpleGraph {
    /// End-vertex masks: `ends[s]` holds v iff the subset `s` carries a
    /// spanning path ending at v.
    fn path_end_masks(&self) -> Vec<u64> {
        let full = 1usize << self.n;
        let mut ends = vec![0u64; full];
        for v in 0..self.n {
            ends[1 << v] = 1 << v;
        }
        for s in 1..full {
            let e = ends[s];
            if e == 0 {
                continue;
            }
            let mut bits = e;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let mut ext = self.adj[v] & !(s as u64);
                ext &= (full as u64) - 1;
                while ext != 0 {
                    let w = ext.trailing_zeros() as usize;
                    ext &= ext - 1;
                    ends[s | (1 << w)] |= 1 << w;
                }
            }
        }
        ends
    }

    /// A spanning path family with the fewest paths, equivalently the most
    /// edges. Deterministic reconstruction.
    pub fn minimum_path_cover(&self) -> Result<PathCover, Error> {
        if self.n == 0 {
            return Ok(PathCover { components: vec![] });
        }
        if self.n > PATH_COVER_VERTEX_LIMIT {
            return Err(Error::budget(format!(
                "path cover search limited to {} vertices",
                PATH_COVER_VERTEX_LIMIT
            )));
        }
        let ends = self.path_end_masks();
        let full = 1usize << self.n;
        // best[s] = fewest paths covering subset s.
        let mut best = vec![u32::MAX; full];
        let mut choice = vec![0usize; full];
        best[0] = 0;
        for s in 1..full {
            let low = s.trailing_zeros() as usize;
            let low_bit = 1usize << low;
            // All submasks of s containing the lowest vertex.
            let rest = s & !low_bit;
            let mut sub = rest;
            loop {
                let part = sub | low_bit;
                if ends[part] != 0 && best[s & !part] != u32::MAX {
                    let candidate = best[s & !part] + 1;
                    if candidate < best[s] {
                        best[s] = candidate;
                        choice[s] = part;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        let mut components = Vec::new();
        let mut s = full - 1;
        while s != 0 {
            let part = choice[s];
            components.push(self.reconstruct_path(part, &ends));
            s &= !part;
        }
        components.sort_by_key(|p| p.iter().copied().min().unwrap());
        Ok(PathCover { components })
    }

    /// A concrete spanning path of the subset, walked back from its smallest
    /// realizable endpoint.
    fn reconstruct_path(&self, subset: usize, ends: &[u64]) -> Vec<usize> {
        let mut seq = Vec::new();
        let mut s = subset;
        let mut end = ends[s].trailing_zeros() as usize;
        loop {
            seq.push(end);
            let without = s & !(1usize << end);
            if without == 0 {
                break;
            }
            let prev_candidates = ends[without] & self.adj[end];
            debug_assert!(prev_candidates != 0);
            s = without;
            end = prev_candidates.trailing_zeros() as usize;
        }
        seq.reverse();
        if seq[0] > seq[seq.len() - 1] {
            seq.reverse();
        }
        seq
    }

    /// Most edges over all spanning unions of vertex disjoint paths; equals
    /// n minus the minimum number of paths.
    pub fn max_path_cover_edges(&self) -> Result<usize, Error> {
        Ok(self.minimum_path_cover()?.edge_count())
    }

    /// True when the graph carries a spanning path.
    pub fn is_traceable(&self) -> Result<bool, Error> {
        if self.n == 0 {
            return Ok(false);
        }
        Ok(self.minimum_path_cover()?.components.len() == 1)
    }
}

pub fn path_graph(n: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    SimpleGraph::from_edges(n, &edges).unwrap()
}

pub fn cycle_graph(n: usize) -> SimpleGraph {
    assert!(n >= 3, "cycle needs at least three vertices");
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((n - 1, 0));
    SimpleGraph::from_edges(n, &edges).unwrap()
}

pub fn complete_graph(n: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

pub fn star_graph(leaves: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (1..=leaves).map(|v| (0, v)).collect();
    SimpleGraph::from_edges(leaves + 1, &edges).unwrap()
}

/// Connected graphs on n vertices, one per isomorphism class, built by
/// attaching each new vertex to every nonempty neighborhood and pruning
/// duplicates through the canonical code.
pub fn connected_representatives(n: usize) -> Result<Vec<SimpleGraph>, Error> {
    if n == 0 {
        return Ok(vec![]);
    }
    if n > 8 {
        return Err(Error::budget("representative enumeration limited to 8 vertices"));
    }
    let mut current = vec![SimpleGraph::new(1)?];
    for size in 2..=n {
        let mut seen = std::collections::BTreeSet::new();
        let mut next = Vec::new();
        for g in &current {
            for neighborhood in 1u64..(1 << (size - 1)) {
                let mut h = SimpleGraph::new(size)?;
                for (u, v) in g.edges() {
                    h.add_edge(u, v)?;
                }
                for v in 0..size - 1 {
                    if neighborhood & (1 << v) != 0 {
                        h.add_edge(size - 1, v)?;
                    }
                }
                let code = h.canonical_code()?;
                if seen.insert(code) {
                    next.push(h);
                }
            }
        }
        current = next;
    }
    Ok(current)
}

/// Serialization shape: vertex count plus 1-based edge list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphData {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphData {
    pub fn to_graph(&self) -> Result<SimpleGraph, Error> {
        let mut g = SimpleGraph::new(self.n)?;
        for &(u, v) in &self.edges {
            if u == 0 || v == 0 {
                return Err(Error::precondition("vertices are numbered from 1"));
            }
            g.add_edge(u - 1, v - 1)?;
        }
        Ok(g)
    }

    pub fn from_graph(g: &SimpleGraph) -> GraphData {
        GraphData {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| (u + 1, v + 1)).collect(),
        }
    }
}

/// Text format: first data line is the vertex count, then one `i j` edge per
/// line, 1-based. Blank lines and `#` comments are skipped.
pub fn parse_graph_text(input: &str) -> Result<SimpleGraph, Error> {
    let mut graph: Option<SimpleGraph> = None;
    let mut offset = 0usize;
    for line in input.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        match &mut graph {
            None => {
                let n: usize = text.parse().map_err(|_| {
                    Error::parse(line_start, format!("expected a vertex count, found '{}'", text))
                })?;
                graph = Some(SimpleGraph::new(n)?);
            }
            Some(g) => {
                let parts: Vec<&str> = text.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(Error::parse(
                        line_start,
                        format!("expected an edge 'i j', found '{}'", text),
                    ));
                }
                let u: usize = parts[0].parse().map_err(|_| {
                    Error::parse(line_start, format!("bad vertex '{}'", parts[0]))
                })?;
                let v: usize = parts[1].parse().map_err(|_| {
                    Error::parse(line_start, format!("bad vertex '{}'", parts[1]))
                })?;
                if u == 0 || v == 0 {
                    return Err(Error::parse(line_start, "vertices are numbered from 1"));
                }
                g.add_edge(u - 1, v - 1)?;
            }
        }
    }
    graph.ok_or_else(|| Error::parse(0, "empty graph description"))
}
