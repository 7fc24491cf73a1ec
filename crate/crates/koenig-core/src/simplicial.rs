//! Cover combinatorics for monomial ideals: minimal vertex covers, height,
//! polarization, unmixedness, Stanley-Reisner complexes, multiplicity,
//! Alexander duality and a rational-homology Cohen-Macaulayness oracle.

use std::collections::BTreeSet;

use num::BigInt;

use crate::error::Error;
use crate::monomial::Monomial;

/// Largest vertex count handled by the bitset cover routines.
const COVER_VERTEX_LIMIT: usize = 64;
/// Largest vertex count accepted by the homology oracle.
pub const REISNER_VERTEX_LIMIT: usize = 14;

fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

fn set_of(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask & (1 << v) != 0).collect()
}

/// All inclusion-minimal transversals of the given supports, each sorted
/// ascending, the list in lexicographic order. An empty support list has the
/// empty set as its unique minimal cover; an empty support is rejected
/// because it corresponds to the unit ideal.
pub fn minimal_covers(supports: &[Vec<usize>], n: usize) -> Result<Vec<Vec<usize>>, Error> {
    if n > COVER_VERTEX_LIMIT {
        return Err(Error::budget(format!("cover enumeration limited to {} vertices", COVER_VERTEX_LIMIT)));
    }
    let mut masks = Vec::new();
    for s in supports {
        if s.is_empty() {
            return Err(Error::precondition("empty support: the ideal contains a unit"));
        }
        if s.iter().any(|&v| v >= n) {
            return Err(Error::precondition("support vertex out of range"));
        }
        masks.push(mask_of(s));
    }
    masks.sort_unstable();
    masks.dedup();
    // Drop supports containing another support: they are hit automatically.
    let needed: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&other| other != m && other & m == other))
        .collect();

    let mut found: BTreeSet<u64> = BTreeSet::new();
    let mut chosen = 0u64;
    branch(&needed, &mut chosen, &mut found);

    // Filter to inclusion-minimal candidates.
    let minimal: Vec<u64> = found
        .iter()
        .copied()
        .filter(|&c| !found.iter().any(|&other| other != c && other & c == other))
        .collect();

    let mut covers: Vec<Vec<usize>> = minimal.into_iter().map(|m| set_of(m, n)).collect();
    covers.sort();
    Ok(covers)
}

fn branch(supports: &[u64], chosen: &mut u64, found: &mut BTreeSet<u64>) {
    match supports.iter().find(|&&s| s & *chosen == 0) {
        None => {
            found.insert(*chosen);
        }
        Some(&s) => {
            let mut rest = s;
            while rest != 0 {
                let v = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                *chosen |= 1 << v;
                branch(supports, chosen, found);
                *chosen &= !(1 << v);
            }
        }
    }
}

/// Height of a monomial ideal: the smallest cardinality of a cover of the
/// generator supports. The zero ideal (no generators) has height 0.
pub fn height_of_supports(supports: &[Vec<usize>], n: usize) -> Result<usize, Error> {
    let covers = minimal_covers(supports, n)?;
    Ok(covers.iter().map(Vec::len).min().unwrap_or(0))
}

pub fn height_monomial(generators: &[Monomial], n: usize) -> Result<usize, Error> {
    let supports: Vec<Vec<usize>> = generators.iter().map(Monomial::support).collect();
    height_of_supports(&supports, n)
}

/// The polarization of a list of monomial generators: each power x_i^a is
/// replaced by a product of `a` distinct copies of x_i. `var_map[i]` lists the
/// polarized indices allocated for the original variable i (at least one).
#[derive(Debug, Clone)]
pub struct Polarization {
    pub n: usize,
    pub generators: Vec<Monomial>,
    pub var_map: Vec<Vec<usize>>,
}

pub fn polarize(generators: &[Monomial], n: usize) -> Polarization {
    let mut copies = vec![1u32; n];
    for g in generators {
        for (i, &e) in g.exponents.iter().enumerate() {
            copies[i] = copies[i].max(e);
        }
    }
    let mut var_map = Vec::with_capacity(n);
    let mut next = 0usize;
    for &c in &copies {
        var_map.push((next..next + c as usize).collect::<Vec<_>>());
        next += c as usize;
    }
    let polarized_n = next;
    let generators = generators
        .iter()
        .map(|g| {
            let mut exps = vec![0u32; polarized_n];
            for (i, &e) in g.exponents.iter().enumerate() {
                for &slot in &var_map[i][..e as usize] {
                    exps[slot] = 1;
                }
            }
            Monomial::from_exponents(exps)
        })
        .collect();
    Polarization { n: polarized_n, generators, var_map }
}

/// Unmixedness through polarization: all minimal covers of the polarized
/// ideal have the same cardinality. This sees embedded primes that the
/// minimal covers of the ideal itself would miss.
pub fn is_unmixed(generators: &[Monomial], n: usize) -> Result<bool, Error> {
    let pol = polarize(generators, n);
    let covers = minimal_covers(
        &pol.generators.iter().map(Monomial::support).collect::<Vec<_>>(),
        pol.n,
    )?;
    Ok(covers.windows(2).all(|w| w[0].len() == w[1].len()))
}

/// Multiplicity of S/I for a monomial ideal I: the number of minimal covers
/// of the polarization whose cardinality equals the height.
pub fn multiplicity(generators: &[Monomial], n: usize) -> Result<u64, Error> {
    let pol = polarize(generators, n);
    let covers = minimal_covers(
        &pol.generators.iter().map(Monomial::support).collect::<Vec<_>>(),
        pol.n,
    )?;
    let height = covers.iter().map(Vec::len).min().unwrap_or(0);
    Ok(covers.iter().filter(|c| c.len() == height).count() as u64)
}

/// Facets of the Stanley-Reisner complex of a squarefree monomial ideal:
/// complements of the minimal covers.
pub fn stanley_reisner_facets(generators: &[Monomial], n: usize) -> Result<Vec<Vec<usize>>, Error> {
    if generators.iter().any(|g| !g.is_squarefree()) {
        return Err(Error::precondition("Stanley-Reisner complex requires a squarefree ideal"));
    }
    let covers = minimal_covers(
        &generators.iter().map(Monomial::support).collect::<Vec<_>>(),
        n,
    )?;
    let mut facets: Vec<Vec<usize>> = covers
        .iter()
        .map(|c| {
            let mask = mask_of(c);
            (0..n).filter(|&v| mask & (1 << v) == 0).collect()
        })
        .collect();
    facets.sort();
    Ok(facets)
}

/// Generators of the Alexander dual: one squarefree monomial x_C per minimal
/// cover C.
pub fn alexander_dual(generators: &[Monomial], n: usize) -> Result<Vec<Monomial>, Error> {
    if generators.iter().any(|g| !g.is_squarefree()) {
        return Err(Error::precondition("Alexander duality requires a squarefree ideal"));
    }
    let covers = minimal_covers(
        &generators.iter().map(Monomial::support).collect::<Vec<_>>(),
        n,
    )?;
    Ok(covers
        .iter()
        .map(|c| {
            let mut exps = vec![0u32; n];
            for &v in c {
                exps[v] = 1;
            }
            Monomial::from_exponents(exps)
        })
        .collect())
}

/// Number of faces of the complex with the given facets, the empty face
/// included.
pub fn face_count(facets: &[Vec<usize>], n: usize) -> Result<u64, Error> {
    Ok(faces_of(facets, n)?.len() as u64)
}

fn faces_of(facets: &[Vec<usize>], n: usize) -> Result<BTreeSet<u64>, Error> {
    if n > COVER_VERTEX_LIMIT {
        return Err(Error::budget("face enumeration limited to 64 vertices"));
    }
    let mut faces = BTreeSet::new();
    faces.insert(0u64);
    for facet in facets {
        let mask = mask_of(facet);
        // Walk all subsets of the facet.
        let mut sub = mask;
        loop {
            faces.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    Ok(faces)
}

/// Field-independent Cohen-Macaulayness of a simplicial complex over the
/// rationals: every face link must have vanishing reduced homology below its
/// dimension. Exact integer linear algebra throughout.
pub fn reisner_cm(facets: &[Vec<usize>], n: usize) -> Result<bool, Error> {
    if n > REISNER_VERTEX_LIMIT {
        return Err(Error::budget(format!(
            "homology oracle limited to {} vertices",
            REISNER_VERTEX_LIMIT
        )));
    }
    let faces = faces_of(facets, n)?;
    let facet_masks: Vec<u64> = facets.iter().map(|f| mask_of(f)).collect();
    for &face in &faces {
        let link: Vec<u64> = facet_masks
            .iter()
            .filter(|&&fm| fm & face == face)
            .map(|&fm| fm & !face)
            .collect();
        if !link_is_connected_enough(&link, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reduced rational homology of the complex generated by `facet_masks`
/// vanishes strictly below its dimension.
fn link_is_connected_enough(facet_masks: &[u64], n: usize) -> Result<bool, Error> {
    let facets: Vec<Vec<usize>> = facet_masks.iter().map(|&m| set_of(m, n)).collect();
    let faces = faces_of(&facets, n)?;
    let dim = faces.iter().map(|f| f.count_ones() as i64 - 1).max().unwrap_or(-1);
    if dim <= 0 {
        // dim -1 is the empty complex {emptyset}: nothing below it. A
        // 0-dimensional complex has a vertex, so the augmentation is onto.
        return Ok(true);
    }
    // Faces grouped by cardinality; faces_by[k] holds the k-element faces.
    let mut faces_by: Vec<Vec<u64>> = vec![Vec::new(); dim as usize + 2];
    for &f in &faces {
        faces_by[f.count_ones() as usize].push(f);
    }
    for level in &mut faces_by {
        level.sort_unstable();
    }
    // ranks[k] = rank of the boundary map from k-element faces to
    // (k-1)-element faces; k = 0 is the augmentation to the empty face.
    let top = dim as usize + 1;
    let mut ranks = vec![0usize; top + 2];
    for k in 1..=top {
        ranks[k] = boundary_rank(&faces_by[k], &faces_by[k - 1], n);
    }
    // Reduced homology in degree i (faces of size i+1):
    //   dim Htilde_i = #faces(i+1) - rank d_{i+1} - rank d_{i+2}
    // where d_k acts on k-element faces. Degree -1 vanishes because the
    // complex has a vertex. Require vanishing for 0 <= i <= dim-1.
    for i in 0..dim {
        let k = i as usize + 1;
        let cycles = faces_by[k].len() - ranks[k];
        if cycles != ranks[k + 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank of the simplicial boundary matrix from `from` (k-element faces) to
/// `to` ((k-1)-element faces), exact over the integers.
fn boundary_rank(from: &[u64], to: &[u64], n: usize) -> usize {
    if from.is_empty() || to.is_empty() {
        // `to` empty only when k-1 = 0 faces missing, which cannot happen in
        // a complex; the k = 0 case (augmentation) is handled by the caller.
        return if from.is_empty() { 0 } else { 1.min(to.len()) };
    }
    if to.len() == 1 && to[0] == 0 {
        // Augmentation: every vertex maps to the empty face.
        return 1;
    }
    let index_of = |mask: u64| to.binary_search(&mask).expect("boundary face missing");
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(from.len());
    for &face in from {
        let mut row = vec![BigInt::from(0); to.len()];
        let vertices = set_of(face, n);
        for (pos, &v) in vertices.iter().enumerate() {
            let sub = face & !(1u64 << v);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            row[index_of(sub)] = BigInt::from(sign);
        }
        rows.push(row);
    }
    rank_exact(rows)
}

/// Rank by fraction-free Gaussian elimination over the integers.
fn rank_exact(mut rows: Vec<Vec<BigInt>>) -> usize {
    let zero = BigInt::from(0);
    let m = rows.len();
    let n = if m == 0 { 0 } else { rows[0].len() };
    let mut rank = 0;
    let mut row = 0;
    for col in 0..n {
        let Some(pivot) = (row..m).find(|&r| rows[r][col] != zero) else {
            continue;
        };
        rows.swap(row, pivot);
        let pivot_row = rows[row].clone();
        let pivot_value = pivot_row[col].clone();
        for current in rows.iter_mut().skip(row + 1) {
            if current[col] != zero {
                let factor = current[col].clone();
                for (cell, p) in current.iter_mut().zip(&pivot_row).skip(col) {
                    *cell = &*cell * &pivot_value - p * &factor;
                }
            }
        }
        row += 1;
        rank += 1;
        if row == m {
            break;
        }
    }
    rank
}
