//! Monoidal groupoids over the natural numbers, E_1-splitting complexes and the
//! pointed complexes `T(n)`, their homology, Steinberg dimensions, and the
//! partition complex.
//!
//! Simplices are cosets `G_n / (G_{n_0} x ... x G_{n_p})` of Young-type subgroups,
//! represented by the lexicographically smallest element of the coset.

mod groups;
mod simplicial;

pub use groups::{BlockSumTable, Elem, GroupoidFamily, MonoidalGroupoidSpec, TableGroup};
pub use simplicial::{augmented_homology, reduced_homology, SemiSimplicialSet};

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::exactlin::FieldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplittingError {
    #[error("rank {0} exceeds the rank cap {1}")]
    AboveCap(u32, u32),
    #[error("group in rank {0} has order {1}, above the enumeration bound")]
    TooLarge(u32, u128),
    #[error("block sum G_{0} x G_{1} -> G_{{{0}+{1}}} is not injective")]
    NotInjective(u32, u32),
    #[error("invalid groupoid: {0}")]
    Invalid(String),
    #[error("semi-simplicial identity fails: {0}")]
    Identity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("partition complex needs n >= 2, got {0}")]
    PartitionRank(u32),
}

/// Ordered compositions of `n` into exactly `parts` positive parts, in lexicographic order.
pub fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(left: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if (left as usize) < parts {
            return;
        }
        for first in 1..=left - (parts as u32 - 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    if parts > 0 {
        rec(n, parts, &mut cur, &mut out);
    }
    out
}

/// Left cosets of a Young-type subgroup, with a coset index for every group element.
#[derive(Clone, Debug)]
pub struct YoungCosets {
    pub composition: Vec<u32>,
    /// Lexicographically minimal representatives, in increasing order.
    pub reps: Vec<Elem>,
    /// Coset index of each element of `G_n`, by the element's position in the sorted list.
    coset_of: Vec<usize>,
    subgroup_order: usize,
}

impl YoungCosets {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order
    }

    /// Coset index of the element at position `i` in the sorted element list of `G_n`.
    pub fn coset_of_index(&self, i: usize) -> usize {
        self.coset_of[i]
    }
}

/// The image of `G_{n_0} x ... x G_{n_p}` under iterated block sum, in increasing order.
pub fn young_subgroup(g: &MonoidalGroupoidSpec, comp: &[u32]) -> Result<Vec<Elem>, SplittingError> {
    let mut acc: Vec<(u32, Elem)> = vec![(0, g.identity(0))];
    for &part in comp {
        let factor = g.elements(part)?;
        let mut next = Vec::with_capacity(acc.len() * factor.len());
        for (rank, x) in &acc {
            for y in factor {
                next.push((rank + part, g.block_sum(*rank, part, x, y)));
            }
        }
        acc = next;
    }
    let mut out: Vec<Elem> = acc.into_iter().map(|(_, e)| e).collect();
    out.sort();
    let before = out.len();
    out.dedup();
    if out.len() != before {
        let (a, b) = (comp.first().copied().unwrap_or(0), comp.iter().skip(1).sum());
        return Err(SplittingError::NotInjective(a, b));
    }
    Ok(out)
}

/// Enumerates `G_n / Y_comp` by an orbit sweep over the sorted elements of `G_n`.
pub fn young_cosets(g: &MonoidalGroupoidSpec, comp: &[u32]) -> Result<YoungCosets, SplittingError> {
    let n: u32 = comp.iter().sum();
    let group = g.group(n)?;
    let sub = young_subgroup(g, comp)?;
    let mut coset_of = vec![usize::MAX; group.elems.len()];
    let mut reps = Vec::new();
    for (i, x) in group.elems.iter().enumerate() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x.clone());
        for y in &sub {
            let j = *group
                .index
                .get(&g.mul(n, x, y))
                .ok_or_else(|| SplittingError::Invalid("product left the group".into()))?;
            if coset_of[j] != usize::MAX && coset_of[j] != c {
                return Err(SplittingError::Invalid("Young subgroup is not closed under products".into()));
            }
            coset_of[j] = c;
        }
    }
    Ok(YoungCosets { composition: comp.to_vec(), reps, coset_of, subgroup_order: sub.len() })
}

/// Sum over compositions of `|G_n| / prod |G_{n_i}|`, from the group orders alone.
pub fn closed_form_coset_count(g: &MonoidalGroupoidSpec, n: u32, parts: usize) -> Result<u128, SplittingError> {
    let mut total = 0;
    for c in compositions(n, parts) {
        let mut denom = 1u128;
        for &x in &c {
            denom *= g.order(x)?;
        }
        total += g.order(n)? / denom;
    }
    Ok(total)
}

struct CosetLevel {
    /// One entry per composition, in lexicographic order.
    blocks: Vec<YoungCosets>,
    offsets: Vec<usize>,
}

impl CosetLevel {
    fn build(g: &MonoidalGroupoidSpec, n: u32, parts: usize) -> Result<Self, SplittingError> {
        let blocks: Vec<YoungCosets> =
            compositions(n, parts).iter().map(|c| young_cosets(g, c)).collect::<Result<_, _>>()?;
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in &blocks {
            offsets.push(acc);
            acc += b.len();
        }
        Ok(CosetLevel { blocks, offsets })
    }

    fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    fn lookup(&self, comp: &[u32]) -> usize {
        self.blocks.iter().position(|b| b.composition == comp).expect("composition present")
    }
}

fn merge(comp: &[u32], j: usize) -> Vec<u32> {
    let mut out = comp[..j].to_vec();
    out.push(comp[j] + comp[j + 1]);
    out.extend_from_slice(&comp[j + 2..]);
    out
}

/// Face map merging parts `j, j+1`, from `lower` (more parts) to `upper`, with a base offset on the target.
fn merge_faces(
    g: &MonoidalGroupoidSpec,
    n: u32,
    lower: &CosetLevel,
    upper: &CosetLevel,
    j: usize,
    target_offset: usize,
) -> Result<Vec<usize>, SplittingError> {
    let group = g.group(n)?;
    let mut out = Vec::with_capacity(lower.len());
    for b in &lower.blocks {
        let t = upper.lookup(&merge(&b.composition, j));
        let tb = &upper.blocks[t];
        for rep in &b.reps {
            let i = group.index[rep];
            out.push(target_offset + upper.offsets[t] + tb.coset_of_index(i));
        }
    }
    Ok(out)
}

/// The E_1-splitting complex of rank `n`: p-simplices are cosets over compositions into `p + 2` parts.
pub fn splitting_complex(g: &MonoidalGroupoidSpec, n: u32, pmax: usize) -> Result<SemiSimplicialSet, SplittingError> {
    if n > g.cap {
        return Err(SplittingError::AboveCap(n, g.cap));
    }
    let top = if n >= 2 { (n as usize - 2).min(pmax) } else { 0 };
    let levels: Vec<CosetLevel> =
        if n >= 2 { (0..=top).map(|p| CosetLevel::build(g, n, p + 2)).collect::<Result<_, _>>()? } else { Vec::new() };
    let mut counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
    if counts.is_empty() {
        counts.push(0);
    }
    let mut faces = vec![Vec::new()];
    for p in 1..levels.len() {
        let fs = (0..=p).map(|j| merge_faces(g, n, &levels[p], &levels[p - 1], j, 0)).collect::<Result<Vec<_>, _>>()?;
        faces.push(fs);
    }
    let s = SemiSimplicialSet { counts, faces, pointed: false };
    s.check_identities()?;
    Ok(s)
}

/// The pointed complex `T(n)`: p-simplices are the basepoint plus cosets over compositions into `p` parts;
/// `d_0` and `d_p` are constant at the basepoint and the inner faces merge parts.
pub fn t_complex(g: &MonoidalGroupoidSpec, n: u32, pmax: usize) -> Result<SemiSimplicialSet, SplittingError> {
    if n > g.cap {
        return Err(SplittingError::AboveCap(n, g.cap));
    }
    let top = (n as usize).min(pmax);
    let levels: Vec<Option<CosetLevel>> = (0..=top)
        .map(|p| if p == 0 { Ok(None) } else { CosetLevel::build(g, n, p).map(Some) })
        .collect::<Result<_, _>>()?;
    let counts: Vec<usize> = levels.iter().map(|l| 1 + l.as_ref().map_or(0, |l| l.len())).collect();
    let mut faces = vec![Vec::new()];
    for p in 1..=top {
        let lower = levels[p].as_ref().expect("p >= 1");
        let mut fs = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut map = vec![0usize];
            if i == 0 || i == p {
                map.extend(std::iter::repeat(0).take(lower.len()));
            } else {
                let upper = levels[p - 1].as_ref().expect("inner faces need p >= 2");
                map.extend(merge_faces(g, n, lower, upper, i - 1, 1)?);
            }
            fs.push(map);
        }
        faces.push(fs);
    }
    let s = SemiSimplicialSet { counts, faces, pointed: true };
    s.check_identities()?;
    Ok(s)
}

/// Per-rank verdict of the standard connectivity estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityRow {
    pub n: u32,
    pub concentrated: bool,
    pub steinberg_dim: usize,
}

/// Reduced homology of `T(n)` for `1 <= n <= nmax`: concentrated in degree `n`, with the Steinberg dimension there.
pub fn check_standard_connectivity(
    g: &MonoidalGroupoidSpec,
    nmax: u32,
    field: FieldSpec,
) -> Result<Vec<ConnectivityRow>, SplittingError> {
    (1..=nmax)
        .map(|n| {
            let t = t_complex(g, n, n as usize)?;
            let h = reduced_homology(&t, field);
            let steinberg_dim = h.get(&(n as i64)).copied().unwrap_or(0);
            let concentrated = h.iter().all(|(&d, &v)| v == 0 || d == n as i64);
            Ok(ConnectivityRow { n, concentrated, steinberg_dim })
        })
        .collect()
}

pub fn connectivity_csv(rows: &[ConnectivityRow]) -> String {
    let mut out = String::from("n,concentrated,steinberg_dim\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n, r.concentrated, r.steinberg_dim));
    }
    out
}

/// Set partitions of `{0..n}` as block labels in restricted-growth form.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            rec(n, cur, max.max(b), out);
            cur.pop();
        }
    }
    if n > 0 {
        cur.push(0);
        rec(n, &mut cur, 0, &mut out);
    }
    out
}

/// `a` strictly refines `b`.
fn refines(a: &[usize], b: &[usize]) -> bool {
    let mut map = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        if *map.entry(*x).or_insert(*y) != *y {
            return false;
        }
    }
    a != b
}

/// Reduced homology of the unreduced suspension of the proper-partition poset nerve of `{1..n}`.
/// Returns the rank in degree `n - 2` and whether every other degree vanishes.
pub fn partition_complex_homology(n: u32, field: FieldSpec) -> Result<(usize, bool), SplittingError> {
    if n < 2 {
        return Err(SplittingError::PartitionRank(n));
    }
    let parts: Vec<Vec<usize>> = set_partitions(n as usize)
        .into_iter()
        .filter(|p| {
            let blocks = p.iter().max().map_or(0, |m| m + 1);
            blocks > 1 && blocks < n as usize
        })
        .collect();
    let m = parts.len();
    let above: Vec<Vec<usize>> = (0..m).map(|i| (0..m).filter(|&j| refines(&parts[i], &parts[j])).collect()).collect();
    // Chains x_0 < x_1 < ... < x_p, grouped by length.
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    while !frontier.is_empty() {
        let next: Vec<Vec<usize>> = frontier
            .iter()
            .flat_map(|c| {
                above[*c.last().expect("nonempty")].iter().map(move |&j| {
                    let mut d = c.clone();
                    d.push(j);
                    d
                })
            })
            .collect();
        chains.push(frontier);
        frontier = next;
    }
    let index: Vec<std::collections::HashMap<Vec<usize>, usize>> =
        chains.iter().map(|lvl| lvl.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let mut faces = vec![Vec::new()];
    for p in 1..chains.len() {
        let fs = (0..=p)
            .map(|i| {
                chains[p]
                    .iter()
                    .map(|c| {
                        let mut d = c.clone();
                        d.remove(i);
                        index[p - 1][&d]
                    })
                    .collect()
            })
            .collect();
        faces.push(fs);
    }
    let counts = if chains.is_empty() { vec![0] } else { chains.iter().map(|c| c.len()).collect() };
    let nerve = SemiSimplicialSet { counts, faces, pointed: false };
    nerve.check_identities()?;
    // Reduced homology of the suspension in degree d is augmented homology of the nerve in d - 1.
    let h = augmented_homology(&nerve, field);
    let top = n as i64 - 3;
    let rank = h.get(&top).copied().unwrap_or(0);
    let concentrated = h.iter().all(|(&d, &v)| v == 0 || d == top);
    Ok((rank, concentrated))
}

/// Distinct coset representatives at the lowest level, handy for listings.
pub fn zero_simplex_labels(g: &MonoidalGroupoidSpec, n: u32) -> Result<Vec<(Vec<u32>, Elem)>, SplittingError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for c in compositions(n, 2) {
        for r in young_cosets(g, &c)?.reps {
            if seen.insert((c.clone(), r.clone())) {
                out.push((c.clone(), r));
            }
        }
    }
    Ok(out)
}
