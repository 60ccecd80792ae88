//! The shifted Lie layer: basic Lie words for the Browder bracket of degree `k-1`.
//!
//! The fast enumeration uses Lyndon words with their standard bracketing. Away from
//! characteristic 2 the bracket is a Lie superalgebra bracket for the shifted parity
//! `|x| + k - 1`, so squares `[w,w]` of odd Lyndon words are added. The module also
//! ships a brute-force oracle that imposes the defining relations on all bracket trees.

mod oracle;

pub use oracle::brute_force_free_lie_dims;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigraded::{Bidegree, GeneratorList, Window};
use crate::exactlin::FieldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("the bracket is identically zero for k = infinity")]
    InfiniteK,
    #[error("brackets need k >= 2, got k = {0}")]
    SmallK(u32),
    #[error("generator `{0}` has rank 0")]
    RankZero(String),
}

/// Operadic level `k` of `E_k`, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl Level {
    pub fn finite(self) -> Option<u32> {
        match self {
            Level::Finite(k) => Some(k),
            Level::Infinite => None,
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        match s.trim() {
            "inf" | "infinity" | "oo" | "∞" => Some(Level::Infinite),
            t => t.parse().ok().map(Level::Finite),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(k) => write!(f, "{k}"),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LieParams {
    pub k: Level,
    pub field: FieldSpec,
}

impl LieParams {
    pub fn new(k: Level, field: FieldSpec) -> Self {
        LieParams { k, field }
    }
}

/// `(a.n + b.n, a.d + b.d + k - 1)`.
pub fn bracket_bidegree(a: Bidegree, b: Bidegree, k: Level) -> Result<Bidegree, LieError> {
    match k {
        Level::Infinite => Err(LieError::InfiniteK),
        Level::Finite(k) if k < 2 => Err(LieError::SmallK(k)),
        Level::Finite(k) => Ok(Bidegree::new(a.n + b.n, a.d + b.d + k - 1)),
    }
}

/// A bracketing of generators, leaves indexing a [`GeneratorList`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieTree {
    Leaf(usize),
    Node(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn node(a: LieTree, b: LieTree) -> LieTree {
        LieTree::Node(Box::new(a), Box::new(b))
    }

    pub fn weight(&self) -> usize {
        match self {
            LieTree::Leaf(_) => 1,
            LieTree::Node(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            LieTree::Leaf(i) => out.push(*i),
            LieTree::Node(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Bidegree with bracket shift `k - 1` per internal node (`k` finite or weight 1).
    pub fn bidegree(&self, gens: &GeneratorList, k: u32) -> Bidegree {
        match self {
            LieTree::Leaf(i) => gens.get(*i).bidegree,
            LieTree::Node(a, b) => {
                let (x, y) = (a.bidegree(gens, k), b.bidegree(gens, k));
                Bidegree::new(x.n + y.n, x.d + y.d + k - 1)
            }
        }
    }

    /// Children ordered by (weight, leaf word), recursively.
    pub fn canonical(&self) -> LieTree {
        match self {
            LieTree::Leaf(i) => LieTree::Leaf(*i),
            LieTree::Node(a, b) => {
                let (a, b) = (a.canonical(), b.canonical());
                if canonical_key_cmp(&a, &b) == Ordering::Greater {
                    LieTree::node(b, a)
                } else {
                    LieTree::node(a, b)
                }
            }
        }
    }

    pub fn render(&self, gens: &GeneratorList) -> String {
        match self {
            LieTree::Leaf(i) => gens.get(*i).name.clone(),
            LieTree::Node(a, b) => format!("[{},{}]", a.render(gens), b.render(gens)),
        }
    }
}

fn canonical_key_cmp(a: &LieTree, b: &LieTree) -> Ordering {
    (a.weight(), a.leaves(), a).cmp(&(b.weight(), b.leaves(), b))
}

/// A basis element of the free shifted Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicLieWord {
    pub tree: LieTree,
    pub bidegree: Bidegree,
    pub weight: usize,
}

impl BasicLieWord {
    fn new(tree: LieTree, gens: &GeneratorList, k: u32) -> Self {
        let tree = tree.canonical();
        BasicLieWord { bidegree: tree.bidegree(gens, k), weight: tree.weight(), tree }
    }

    pub fn generator(i: usize, gens: &GeneratorList) -> Self {
        BasicLieWord { tree: LieTree::Leaf(i), bidegree: gens.get(i).bidegree, weight: 1 }
    }

    pub fn render(&self, gens: &GeneratorList) -> String {
        self.tree.render(gens)
    }
}

impl PartialOrd for BasicLieWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasicLieWord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.bidegree, &self.tree).cmp(&(other.bidegree, &other.tree))
    }
}

/// Lyndon test: strictly smaller than each proper suffix.
pub fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard bracketing via the split at the smallest proper suffix.
pub fn standard_bracketing(w: &[usize]) -> LieTree {
    if w.len() == 1 {
        return LieTree::Leaf(w[0]);
    }
    let split = (1..w.len()).min_by(|&i, &j| w[i..].cmp(&w[j..])).expect("length >= 2");
    LieTree::node(standard_bracketing(&w[..split]), standard_bracketing(&w[split..]))
}

/// Basic Lie words in the window, sorted by (bidegree, canonical tree).
pub fn enumerate_basic_lie_words(gens: &GeneratorList, p: LieParams, w: Window) -> Result<Vec<BasicLieWord>, LieError> {
    if let Some(g) = gens.iter().find(|g| g.bidegree.n == 0) {
        return Err(LieError::RankZero(g.name.clone()));
    }
    enumerate_basic_lie_words_unchecked(gens, p, w)
}

/// [`enumerate_basic_lie_words`] without the rank check; rank-0 generators must have
/// positive degree so the window stays finite.
pub(crate) fn enumerate_basic_lie_words_unchecked(
    gens: &GeneratorList,
    p: LieParams,
    w: Window,
) -> Result<Vec<BasicLieWord>, LieError> {
    let k = match p.k {
        Level::Infinite => {
            let mut out: Vec<_> = (0..gens.len())
                .filter(|&i| w.contains(gens.get(i).bidegree))
                .map(|i| BasicLieWord::generator(i, gens))
                .collect();
            out.sort();
            return Ok(out);
        }
        Level::Finite(k) if k < 2 => return Err(LieError::SmallK(k)),
        Level::Finite(k) => k,
    };
    let super_case = p.field.characteristic() != 2;
    let mut out = Vec::new();
    let mut word = Vec::new();
    lyndon_dfs(gens, k, w, &mut word, Bidegree::ZERO, &mut |lw, bd| {
        out.push(BasicLieWord::new(standard_bracketing(lw), gens, k));
        let odd = (bd.d + k - 1) % 2 == 1;
        if super_case && odd {
            let sq = Bidegree::new(2 * bd.n, 2 * bd.d + k - 1);
            if w.contains(sq) {
                let t = standard_bracketing(lw);
                out.push(BasicLieWord::new(LieTree::node(t.clone(), t), gens, k));
            }
        }
    });
    out.sort();
    Ok(out)
}

fn lyndon_dfs(
    gens: &GeneratorList,
    k: u32,
    w: Window,
    word: &mut Vec<usize>,
    bd: Bidegree,
    emit: &mut dyn FnMut(&[usize], Bidegree),
) {
    for i in 0..gens.len() {
        let g = gens.get(i).bidegree;
        let next = if word.is_empty() { g } else { Bidegree::new(bd.n + g.n, bd.d + g.d + k - 1) };
        if !w.contains(next) {
            continue;
        }
        word.push(i);
        if is_lyndon(word) {
            emit(word, next);
        }
        lyndon_dfs(gens, k, w, word, next, emit);
        word.pop();
    }
}

/// Counts of basic Lie words per bidegree.
pub fn lie_word_counts(words: &[BasicLieWord]) -> std::collections::BTreeMap<Bidegree, u64> {
    let mut m = std::collections::BTreeMap::new();
    for w in words {
        *m.entry(w.bidegree).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn bracket_bidegree_examples() {
        let f = Level::Finite;
        assert_eq!(bracket_bidegree(Bidegree::new(1, 0), Bidegree::new(1, 0), f(2)), Ok(Bidegree::new(2, 1)));
        assert_eq!(bracket_bidegree(Bidegree::new(1, 2), Bidegree::new(1, 2), f(3)), Ok(Bidegree::new(2, 6)));
        assert_eq!(bracket_bidegree(Bidegree::new(1, 0), Bidegree::new(0, 0), f(2)), Ok(Bidegree::new(1, 1)));
        assert_eq!(bracket_bidegree(Bidegree::ZERO, Bidegree::ZERO, Level::Infinite), Err(LieError::InfiniteK));
    }

    #[test]
    fn lyndon_basics() {
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(is_lyndon(&[0, 1, 1]));
        assert!(!is_lyndon(&[0, 1, 0]));
        assert!(!is_lyndon(&[0, 0]));
        let t = standard_bracketing(&[0, 0, 1]);
        assert_eq!(t, LieTree::node(LieTree::Leaf(0), LieTree::node(LieTree::Leaf(0), LieTree::Leaf(1))));
    }

    #[test]
    fn two_even_generators_through_degree_ten() {
        let gens = GeneratorList::parse("x:1,2;y:1,2").unwrap();
        let words =
            enumerate_basic_lie_words(&gens, LieParams::new(Level::Finite(3), q()), Window::new(10, 10)).unwrap();
        let names: Vec<String> = words.iter().map(|w| w.render(&gens)).collect();
        assert_eq!(names, ["x", "y", "[x,y]", "[x,[x,y]]", "[y,[x,y]]"]);
        assert_eq!(words[3].bidegree, Bidegree::new(3, 10));
    }

    #[test]
    fn single_even_generator_has_no_square() {
        let gens = GeneratorList::parse("s:1,0").unwrap();
        let words = enumerate_basic_lie_words(&gens, LieParams::new(Level::Finite(3), q()), Window::new(6, 6)).unwrap();
        assert_eq!(words.len(), 1);
        let words = enumerate_basic_lie_words(&gens, LieParams::new(Level::Finite(2), q()), Window::new(6, 6)).unwrap();
        let names: Vec<String> = words.iter().map(|w| w.render(&gens)).collect();
        assert_eq!(names, ["s", "[s,s]"]);
    }

    #[test]
    fn infinite_level_returns_generators() {
        let gens = GeneratorList::parse("b:2,1;a:1,0").unwrap();
        let words = enumerate_basic_lie_words(&gens, LieParams::new(Level::Infinite, q()), Window::new(6, 6)).unwrap();
        assert_eq!(words.len(), 2);
        assert_eq!(words[0].render(&gens), "a");
    }
}
