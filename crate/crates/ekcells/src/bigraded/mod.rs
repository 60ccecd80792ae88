//! Bidegrees, windows, Hilbert tables, Day convolution over the naturals and
//! Hilbert series of free graded-commutative algebras.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::FieldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("window mismatch: {0:?} vs {1:?}")]
    WindowMismatch(Window, Window),
    #[error("generator `{0}` has rank 0 and degree 0; the table would be infinite")]
    RankZeroDegreeZero(String),
    #[error("generator `{0}` has rank 0, which this operation does not allow")]
    RankZero(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

/// `(n, d)`: rank and homological degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub n: u32,
    pub d: u32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { n: 0, d: 0 };

    pub fn new(n: u32, d: u32) -> Self {
        Bidegree { n, d }
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree { n: self.n + o.n, d: self.d + o.d }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.d)
    }
}

/// `(n, d, q)` with `q` a filtration weight or bar degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Trigrade {
    pub n: u32,
    pub d: u32,
    pub q: i64,
}

impl Trigrade {
    pub fn new(n: u32, d: u32, q: i64) -> Self {
        Trigrade { n, d, q }
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.n, self.d)
    }
}

impl fmt::Display for Trigrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.d, self.q)
    }
}

/// Finite region `n <= nmax`, `d <= dmax`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub nmax: u32,
    pub dmax: u32,
}

impl Window {
    pub fn new(nmax: u32, dmax: u32) -> Self {
        Window { nmax, dmax }
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        b.n <= self.nmax && b.d <= self.dmax
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (0..=self.nmax).flat_map(move |n| (0..=self.dmax).map(move |d| Bidegree::new(n, d)))
    }
}

/// Dimensions per bidegree on a window; zero entries are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertTable {
    window: Window,
    dims: BTreeMap<Bidegree, u64>,
}

impl HilbertTable {
    pub fn empty(window: Window) -> Self {
        HilbertTable { window, dims: BTreeMap::new() }
    }

    /// The table with a single 1 at `(0,0)`.
    pub fn unit(window: Window) -> Self {
        let mut t = Self::empty(window);
        t.add(Bidegree::ZERO, 1);
        t
    }

    pub fn from_entries(window: Window, entries: impl IntoIterator<Item = (Bidegree, u64)>) -> Self {
        let mut t = Self::empty(window);
        for (b, v) in entries {
            t.add(b, v);
        }
        t
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn get(&self, b: Bidegree) -> u64 {
        self.dims.get(&b).copied().unwrap_or(0)
    }

    /// Adds `v` at `b`; entries outside the window are ignored.
    pub fn add(&mut self, b: Bidegree, v: u64) {
        if v == 0 || !self.window.contains(b) {
            return;
        }
        *self.dims.entry(b).or_insert(0) += v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Bidegree, u64)> + '_ {
        self.dims.iter().map(|(b, v)| (*b, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.dims.values().sum()
    }

    /// Restriction to a smaller window.
    pub fn restrict(&self, w: Window) -> HilbertTable {
        HilbertTable::from_entries(w, self.iter().filter(|(b, _)| w.contains(*b)))
    }

    /// Entrywise `self <= other`.
    pub fn dominated_by(&self, other: &HilbertTable) -> bool {
        self.iter().all(|(b, v)| v <= other.get(b))
    }

    /// CSV with header `n,d,dim`, rows sorted by `(n, d)`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "d", "dim"]).unwrap();
        for (b, v) in self.iter() {
            w.serialize((b.n, b.d, v)).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn from_csv(window: Window, text: &str) -> Result<Self, GradingError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut t = Self::empty(window);
        for rec in r.deserialize::<(u32, u32, u64)>() {
            let (n, d, v) = rec.map_err(|e| GradingError::Parse(e.to_string()))?;
            t.add(Bidegree::new(n, d), v);
        }
        Ok(t)
    }
}

/// Day convolution over the naturals, truncated to the common window.
pub fn convolve(a: &HilbertTable, b: &HilbertTable) -> Result<HilbertTable, GradingError> {
    if a.window != b.window {
        return Err(GradingError::WindowMismatch(a.window, b.window));
    }
    let mut out = HilbertTable::empty(a.window);
    for (x, u) in a.iter() {
        for (y, v) in b.iter() {
            out.add(x + y, u * v);
        }
    }
    Ok(out)
}

/// A named bigraded generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub bidegree: Bidegree,
}

impl Generator {
    pub fn new(name: impl Into<String>, n: u32, d: u32) -> Self {
        Generator { name: name.into(), bidegree: Bidegree::new(n, d) }
    }
}

/// Ordered list of generators with distinct names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Generator>", into = "Vec<Generator>")]
pub struct GeneratorList {
    gens: Vec<Generator>,
}

impl TryFrom<Vec<Generator>> for GeneratorList {
    type Error = GradingError;
    fn try_from(v: Vec<Generator>) -> Result<Self, GradingError> {
        GeneratorList::new(v)
    }
}

impl From<GeneratorList> for Vec<Generator> {
    fn from(g: GeneratorList) -> Vec<Generator> {
        g.gens
    }
}

impl GeneratorList {
    pub fn new(gens: Vec<Generator>) -> Result<Self, GradingError> {
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.name.clone()) {
                return Err(GradingError::DuplicateName(g.name.clone()));
            }
        }
        Ok(GeneratorList { gens })
    }

    /// `name:n,d` items separated by `;` or whitespace, e.g. `sigma:1,0;x:2,2`.
    pub fn parse(spec: &str) -> Result<Self, GradingError> {
        let mut gens = Vec::new();
        for item in spec.split(|c: char| c == ';' || c.is_whitespace()).filter(|s| !s.is_empty()) {
            let bad = || GradingError::Parse(format!("bad generator `{item}`, expected name:n,d"));
            let (name, deg) = item.split_once(':').ok_or_else(bad)?;
            let (n, d) = deg.split_once(',').ok_or_else(bad)?;
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            let d: u32 = d.trim().parse().map_err(|_| bad())?;
            if name.is_empty() {
                return Err(bad());
            }
            gens.push(Generator::new(name, n, d));
        }
        GeneratorList::new(gens)
    }

    pub fn empty() -> Self {
        GeneratorList::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Generator> {
        self.gens.iter()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Concatenation; fails on a name clash.
    pub fn union(&self, other: &GeneratorList) -> Result<GeneratorList, GradingError> {
        GeneratorList::new(self.gens.iter().chain(other.gens.iter()).cloned().collect())
    }

    pub fn require_positive_rank(&self) -> Result<(), GradingError> {
        match self.gens.iter().find(|g| g.bidegree.n == 0) {
            Some(g) => Err(GradingError::RankZero(g.name.clone())),
            None => Ok(()),
        }
    }
}

/// Dense working table used by series products.
#[derive(Clone, Debug)]
pub(crate) struct DenseTable {
    pub(crate) window: Window,
    cells: Vec<u64>,
}

impl DenseTable {
    pub(crate) fn unit(window: Window) -> Self {
        let mut cells = vec![0; ((window.nmax + 1) * (window.dmax + 1)) as usize];
        cells[0] = 1;
        DenseTable { window, cells }
    }

    fn idx(&self, n: u32, d: u32) -> usize {
        (n * (self.window.dmax + 1) + d) as usize
    }

    pub(crate) fn get(&self, n: u32, d: u32) -> u64 {
        self.cells[self.idx(n, d)]
    }

    /// Multiplies by `1 + t^b` (exterior) or `1/(1 - t^b)` (polynomial).
    pub(crate) fn multiply_factor(&mut self, b: Bidegree, exterior: bool) {
        if !self.window.contains(b) {
            return;
        }
        let w = self.window;
        if exterior {
            for n in (b.n..=w.nmax).rev() {
                for d in (b.d..=w.dmax).rev() {
                    let s = self.get(n - b.n, d - b.d);
                    let i = self.idx(n, d);
                    self.cells[i] += s;
                }
            }
        } else {
            assert!(b != Bidegree::ZERO);
            for n in b.n..=w.nmax {
                for d in b.d..=w.dmax {
                    let s = self.get(n - b.n, d - b.d);
                    let i = self.idx(n, d);
                    self.cells[i] += s;
                }
            }
        }
    }

    pub(crate) fn into_table(self) -> HilbertTable {
        let w = self.window;
        HilbertTable::from_entries(w, w.bidegrees().map(|b| (b, self.get(b.n, b.d))))
    }
}

/// Whether a generator of degree `d` is exterior in the free graded-commutative algebra.
pub fn is_exterior(field: FieldSpec, d: u32) -> bool {
    field.characteristic() != 2 && d % 2 == 1
}

/// Hilbert table of the free graded-commutative algebra on bidegrees, unit included.
pub fn free_gca_hilbert_of(degrees: impl IntoIterator<Item = Bidegree>, field: FieldSpec, w: Window) -> HilbertTable {
    let mut t = DenseTable::unit(w);
    for b in degrees {
        t.multiply_factor(b, is_exterior(field, b.d));
    }
    t.into_table()
}

/// Hilbert table of the free graded-commutative algebra on `gens`.
///
/// Rank-0 generators of positive degree are accepted only with `allow_rank0`.
pub fn free_gca_hilbert(
    gens: &GeneratorList,
    field: FieldSpec,
    w: Window,
    allow_rank0: bool,
) -> Result<HilbertTable, GradingError> {
    for g in gens.iter() {
        if g.bidegree == Bidegree::ZERO {
            return Err(GradingError::RankZeroDegreeZero(g.name.clone()));
        }
        if g.bidegree.n == 0 && !allow_rank0 {
            return Err(GradingError::RankZero(g.name.clone()));
        }
    }
    Ok(free_gca_hilbert_of(gens.iter().map(|g| g.bidegree), field, w))
}

/// A slope `d/n`, or `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Ratio<i64>),
    Infinite,
}

impl Slope {
    pub fn of(b: Bidegree) -> Slope {
        if b.n == 0 {
            Slope::Infinite
        } else {
            Slope::Finite(Ratio::new(b.d as i64, b.n as i64))
        }
    }

    pub fn ratio(num: i64, den: i64) -> Slope {
        Slope::Finite(Ratio::new(num, den))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp(b),
            (Slope::Finite(_), Slope::Infinite) => Ordering::Less,
            (Slope::Infinite, Slope::Finite(_)) => Ordering::Greater,
            (Slope::Infinite, Slope::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{r}"),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

/// Minimum of `d/n` over nonzero entries with `n >= 1`, with the first bidegree attaining it.
pub fn min_slope_with_witness(t: &HilbertTable) -> (Slope, Option<Bidegree>) {
    let mut best = (Slope::Infinite, None);
    for (b, _) in t.iter().filter(|(b, _)| b.n >= 1) {
        let s = Slope::of(b);
        if s < best.0 {
            best = (s, Some(b));
        }
    }
    best
}

pub fn min_slope(t: &HilbertTable) -> Slope {
    min_slope_with_witness(t).0
}
