//! Finite monoidal groupoids with object set the natural numbers.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::SplittingError;

/// Group elements are opaque integer tokens; their lexicographic order fixes coset representatives.
pub type Elem = Vec<u32>;

/// An explicitly tabulated group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableGroup {
    /// `mul[a][b]` is the index of `a * b`; index 0 is the identity.
    pub mul: Vec<Vec<u32>>,
}

/// `map[x][y]` is the index in `G_{a+b}` of the block sum of `x` in `G_a` and `y` in `G_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSumTable {
    pub a: u32,
    pub b: u32,
    pub map: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupoidFamily {
    /// Trivial groups in every rank.
    TrivialN,
    /// Symmetric groups with juxtaposition of permutations.
    Symmetric,
    /// `GL_n(F_q)` for prime `q` with block-diagonal sum.
    GeneralLinear { q: u32 },
    /// Groups and block sums given by tables, rank `i` at position `i`.
    Tables { ranks: Vec<TableGroup>, block_sums: Vec<BlockSumTable> },
}

#[derive(Debug)]
pub(crate) struct GroupCache {
    pub(crate) elems: Vec<Elem>,
    pub(crate) index: HashMap<Elem, usize>,
}

/// A monoidal groupoid up to a rank cap.
#[derive(Debug, Serialize, Deserialize)]
pub struct MonoidalGroupoidSpec {
    #[serde(flatten)]
    pub family: GroupoidFamily,
    pub cap: u32,
    /// Largest group order that will be enumerated.
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    #[serde(skip)]
    cache: Vec<OnceLock<GroupCache>>,
}

fn default_max_order() -> usize {
    250_000
}

impl Clone for MonoidalGroupoidSpec {
    fn clone(&self) -> Self {
        MonoidalGroupoidSpec::with_max_order(self.family.clone(), self.cap, self.max_order)
    }
}

impl MonoidalGroupoidSpec {
    pub fn new(family: GroupoidFamily, cap: u32) -> Self {
        Self::with_max_order(family, cap, default_max_order())
    }

    pub fn with_max_order(family: GroupoidFamily, cap: u32, max_order: usize) -> Self {
        let cache = (0..=cap).map(|_| OnceLock::new()).collect();
        MonoidalGroupoidSpec { family, cap, max_order, cache }
    }

    pub fn trivial(cap: u32) -> Self {
        Self::new(GroupoidFamily::TrivialN, cap)
    }

    pub fn symmetric(cap: u32) -> Self {
        Self::new(GroupoidFamily::Symmetric, cap)
    }

    pub fn general_linear(q: u32, cap: u32) -> Self {
        Self::new(GroupoidFamily::GeneralLinear { q }, cap)
    }

    /// Parses JSON and validates the result.
    pub fn from_json(text: &str) -> Result<Self, SplittingError> {
        let mut s: MonoidalGroupoidSpec =
            serde_json::from_str(text).map_err(|e| SplittingError::Parse(e.to_string()))?;
        s.cache = (0..=s.cap).map(|_| OnceLock::new()).collect();
        s.validate()?;
        Ok(s)
    }

    fn check_rank(&self, n: u32) -> Result<(), SplittingError> {
        if n > self.cap {
            return Err(SplittingError::AboveCap(n, self.cap));
        }
        Ok(())
    }

    /// Closed-form or tabulated order of `G_n`, without enumeration.
    pub fn order(&self, n: u32) -> Result<u128, SplittingError> {
        self.check_rank(n)?;
        Ok(match &self.family {
            GroupoidFamily::TrivialN => 1,
            GroupoidFamily::Symmetric => (1..=n as u128).product(),
            GroupoidFamily::GeneralLinear { q } => {
                let q = *q as u128;
                let qn = q.pow(n);
                (0..n).map(|i| qn - q.pow(i)).product()
            }
            GroupoidFamily::Tables { ranks, .. } => {
                ranks.get(n as usize).ok_or(SplittingError::AboveCap(n, self.cap))?.mul.len() as u128
            }
        })
    }

    pub(crate) fn group(&self, n: u32) -> Result<&GroupCache, SplittingError> {
        self.check_rank(n)?;
        let order = self.order(n)?;
        if order > self.max_order as u128 {
            return Err(SplittingError::TooLarge(n, order));
        }
        Ok(self.cache[n as usize].get_or_init(|| {
            let mut elems = self.enumerate(n);
            elems.sort();
            let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            GroupCache { elems, index }
        }))
    }

    /// All elements of `G_n` in increasing order.
    pub fn elements(&self, n: u32) -> Result<&[Elem], SplittingError> {
        Ok(&self.group(n)?.elems)
    }

    fn enumerate(&self, n: u32) -> Vec<Elem> {
        match &self.family {
            GroupoidFamily::TrivialN => vec![Vec::new()],
            GroupoidFamily::Symmetric => permutations(n as usize),
            GroupoidFamily::GeneralLinear { q } => invertible_matrices(n as usize, *q),
            GroupoidFamily::Tables { ranks, .. } => (0..ranks[n as usize].mul.len() as u32).map(|i| vec![i]).collect(),
        }
    }

    pub fn identity(&self, n: u32) -> Elem {
        match &self.family {
            GroupoidFamily::TrivialN => Vec::new(),
            GroupoidFamily::Symmetric => (0..n).collect(),
            GroupoidFamily::GeneralLinear { .. } => {
                let n = n as usize;
                (0..n * n).map(|i| u32::from(i / n == i % n)).collect()
            }
            GroupoidFamily::Tables { .. } => vec![0],
        }
    }

    pub fn mul(&self, n: u32, a: &Elem, b: &Elem) -> Elem {
        match &self.family {
            GroupoidFamily::TrivialN => Vec::new(),
            // (a b)(i) = a(b(i)).
            GroupoidFamily::Symmetric => b.iter().map(|&i| a[i as usize]).collect(),
            GroupoidFamily::GeneralLinear { q } => {
                let n = n as usize;
                let mut out = vec![0u32; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let s: u64 = (0..n).map(|t| a[i * n + t] as u64 * b[t * n + j] as u64).sum();
                        out[i * n + j] = (s % *q as u64) as u32;
                    }
                }
                out
            }
            GroupoidFamily::Tables { ranks, .. } => vec![ranks[n as usize].mul[a[0] as usize][b[0] as usize]],
        }
    }

    pub fn inv(&self, n: u32, a: &Elem) -> Elem {
        match &self.family {
            GroupoidFamily::Symmetric => {
                let mut out = vec![0u32; a.len()];
                for (i, &x) in a.iter().enumerate() {
                    out[x as usize] = i as u32;
                }
                out
            }
            _ => {
                let id = self.identity(n);
                let g = self.group(n).expect("inverse of an enumerated group");
                g.elems.iter().find(|b| self.mul(n, a, b) == id).cloned().expect("group element has an inverse")
            }
        }
    }

    /// Block sum `x (+) y` of `x` in `G_a` and `y` in `G_b`.
    pub fn block_sum(&self, a: u32, b: u32, x: &Elem, y: &Elem) -> Elem {
        match &self.family {
            GroupoidFamily::TrivialN => Vec::new(),
            GroupoidFamily::Symmetric => x.iter().copied().chain(y.iter().map(|&i| i + a)).collect(),
            GroupoidFamily::GeneralLinear { .. } => {
                let (a, b) = (a as usize, b as usize);
                let n = a + b;
                let mut out = vec![0u32; n * n];
                for i in 0..a {
                    for j in 0..a {
                        out[i * n + j] = x[i * a + j];
                    }
                }
                for i in 0..b {
                    for j in 0..b {
                        out[(a + i) * n + a + j] = y[i * b + j];
                    }
                }
                out
            }
            GroupoidFamily::Tables { block_sums, .. } => {
                if a == 0 {
                    return y.clone();
                }
                if b == 0 {
                    return x.clone();
                }
                let t = block_sums.iter().find(|t| t.a == a && t.b == b).expect("validated block sum table");
                vec![t.map[x[0] as usize][y[0] as usize]]
            }
        }
    }

    /// Iterated block sum of elements of `G_{parts[i]}`.
    pub fn block_sum_many(&self, parts: &[u32], xs: &[Elem]) -> Elem {
        let mut acc = self.identity(0);
        let mut rank = 0;
        for (&p, x) in parts.iter().zip(xs) {
            acc = self.block_sum(rank, p, &acc, x);
            rank += p;
        }
        acc
    }

    /// Checks trivial `G_0`, injectivity and associativity of block sums, and group axioms for tables.
    pub fn validate(&self) -> Result<(), SplittingError> {
        if let GroupoidFamily::Tables { ranks, block_sums } = &self.family {
            if ranks.len() != self.cap as usize + 1 {
                return Err(SplittingError::Invalid(format!("expected {} rank tables", self.cap + 1)));
            }
            for (n, g) in ranks.iter().enumerate() {
                let m = g.mul.len();
                if m == 0 || g.mul.iter().any(|row| row.len() != m || row.iter().any(|&x| x as usize >= m)) {
                    return Err(SplittingError::Invalid(format!("malformed table for rank {n}")));
                }
                for a in 0..m {
                    if g.mul[0][a] as usize != a || g.mul[a][0] as usize != a {
                        return Err(SplittingError::Invalid(format!("index 0 is not the identity in rank {n}")));
                    }
                    for b in 0..m {
                        for c in 0..m {
                            let l = g.mul[g.mul[a][b] as usize][c];
                            let r = g.mul[a][g.mul[b][c] as usize];
                            if l != r {
                                return Err(SplittingError::Invalid(format!("rank {n} table is not associative")));
                            }
                        }
                    }
                    if !g.mul[a].contains(&0) {
                        return Err(SplittingError::Invalid(format!("rank {n} element {a} has no inverse")));
                    }
                }
            }
            for a in 1..=self.cap {
                for b in 1..=self.cap - a {
                    let t = block_sums
                        .iter()
                        .find(|t| t.a == a && t.b == b)
                        .ok_or_else(|| SplittingError::Invalid(format!("missing block sum ({a},{b})")))?;
                    let (ma, mb, mn) =
                        (ranks[a as usize].mul.len(), ranks[b as usize].mul.len(), ranks[(a + b) as usize].mul.len());
                    if t.map.len() != ma || t.map.iter().any(|r| r.len() != mb || r.iter().any(|&x| x as usize >= mn)) {
                        return Err(SplittingError::Invalid(format!("malformed block sum ({a},{b})")));
                    }
                }
            }
        }
        if self.order(0)? != 1 {
            return Err(SplittingError::Invalid("G_0 must be trivial".into()));
        }
        for a in 0..=self.cap {
            for b in 0..=self.cap - a {
                let (ga, gb) = (self.order(a)?, self.order(b)?);
                if ga * gb > self.max_order as u128 || self.order(a + b)? > self.max_order as u128 {
                    continue;
                }
                let (ea, eb) = (self.elements(a)?, self.elements(b)?);
                let n = a + b;
                let mut seen = std::collections::HashSet::new();
                for x in ea {
                    for y in eb {
                        if !seen.insert(self.block_sum(a, b, x, y)) {
                            return Err(SplittingError::NotInjective(a, b));
                        }
                    }
                }
                // Homomorphism on generators-free sample: all pairs of pairs when small.
                if ga * gb <= 2_000 {
                    for x1 in ea {
                        for y1 in eb {
                            let s1 = self.block_sum(a, b, x1, y1);
                            for x2 in ea.iter().take(8) {
                                for y2 in eb.iter().take(8) {
                                    let s2 = self.block_sum(a, b, x2, y2);
                                    let lhs = self.mul(n, &s1, &s2);
                                    let rhs = self.block_sum(a, b, &self.mul(a, x1, x2), &self.mul(b, y1, y2));
                                    if lhs != rhs {
                                        return Err(SplittingError::Invalid(format!(
                                            "block sum ({a},{b}) is not a homomorphism"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for a in 1..=self.cap {
            for b in 1..=self.cap - a {
                for c in 1..=self.cap - a - b {
                    let (x, y, z) = (self.sample(a)?, self.sample(b)?, self.sample(c)?);
                    let l = self.block_sum(a + b, c, &self.block_sum(a, b, &x, &y), &z);
                    let r = self.block_sum(a, b + c, &x, &self.block_sum(b, c, &y, &z));
                    if l != r {
                        return Err(SplittingError::Invalid(format!("block sum not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// A non-identity element when one exists (the last in order), else the identity.
    fn sample(&self, n: u32) -> Result<Elem, SplittingError> {
        if self.order(n)? > self.max_order as u128 {
            return Ok(self.identity(n));
        }
        Ok(self.elements(n)?.last().cloned().unwrap_or_else(|| self.identity(n)))
    }
}

fn permutations(n: usize) -> Vec<Elem> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Elem>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i as u32);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

fn rank_mod(m: &[u32], n: usize, q: u32) -> usize {
    let mut a: Vec<u64> = m.iter().map(|&x| x as u64).collect();
    let q = q as u64;
    let inv = |x: u64| -> u64 {
        let mut r = 1;
        let mut b = x % q;
        let mut e = q - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % q;
            }
            b = b * b % q;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&r| a[r * n + col] != 0) else { continue };
        for j in 0..n {
            a.swap(rank * n + j, piv * n + j);
        }
        let iv = inv(a[rank * n + col]);
        for r in 0..n {
            if r != rank && a[r * n + col] != 0 {
                let f = a[r * n + col] * iv % q;
                for j in 0..n {
                    a[r * n + j] = (a[r * n + j] + q * q - f * a[rank * n + j] % q) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn invertible_matrices(n: usize, q: u32) -> Vec<Elem> {
    let total = (q as u64).pow((n * n) as u32);
    let mut out = Vec::new();
    let mut m = vec![0u32; n * n];
    for code in 0..total {
        let mut c = code;
        for x in m.iter_mut().rev() {
            *x = (c % q as u64) as u32;
            c /= q as u64;
        }
        if rank_mod(&m, n, q) == n {
            out.push(m.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(MonoidalGroupoidSpec::symmetric(5).order(4), Ok(24));
        assert_eq!(MonoidalGroupoidSpec::general_linear(2, 3).order(2), Ok(6));
        assert_eq!(MonoidalGroupoidSpec::general_linear(3, 3).order(3), Ok(11232));
        let g = MonoidalGroupoidSpec::general_linear(3, 2);
        assert_eq!(g.elements(2).unwrap().len(), 48);
    }

    #[test]
    fn builtins_validate() {
        MonoidalGroupoidSpec::trivial(6).validate().unwrap();
        MonoidalGroupoidSpec::symmetric(5).validate().unwrap();
        MonoidalGroupoidSpec::general_linear(2, 3).validate().unwrap();
    }

    #[test]
    fn inverses() {
        let g = MonoidalGroupoidSpec::general_linear(3, 2);
        for x in g.elements(2).unwrap().iter().take(10) {
            assert_eq!(g.mul(2, x, &g.inv(2, x)), g.identity(2));
        }
    }

    #[test]
    fn table_family_roundtrip() {
        // Trivial groups up to rank 2, presented by tables.
        let json = r#"{"family":"tables","cap":2,
            "ranks":[{"mul":[[0]]},{"mul":[[0]]},{"mul":[[0]]}],
            "block_sums":[{"a":1,"b":1,"map":[[0]]}]}"#;
        let g = MonoidalGroupoidSpec::from_json(json).unwrap();
        assert_eq!(g.order(2), Ok(1));
        let bad = r#"{"family":"tables","cap":2,
            "ranks":[{"mul":[[0]]},{"mul":[[0,1],[1,0]]},{"mul":[[0]]}],
            "block_sums":[{"a":1,"b":1,"map":[[0,0],[0,0]]}]}"#;
        assert_eq!(MonoidalGroupoidSpec::from_json(bad).unwrap_err(), SplittingError::NotInjective(1, 1));
    }
}
