//! Dyer-Lashof words, the basis of free `W_{k-1}`-algebras, and rewriting.
//!
//! A [`DlIndex`] `I = (L_1, ..., L_r)` acts on a class by applying `L_r` first.
//! For odd `ell` a letter is `Q^s` or `beta Q^s`; for `ell = 2` it is `Q^s`.
//! The top operations `xi`, `zeta` are the letters sitting exactly on the top bound.

mod basis;
mod rewrite;

pub use basis::{
    admissible_generators, alg_as_mod_check, enumerate_free_wk_basis, quotient_hilbert, tensor_algebra_hilbert,
    AdmissibleGenerator, BasisOptions, FreeBasis,
};
pub use rewrite::{
    adem_relation, adem_rewrite, adem_rewrite_with, apply_letter, cartan_expand, AdemConvention, Factor, Strategy,
    WElement, WMonomial,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigraded::{Bidegree, GradingError};
use crate::exactlin::FieldSpec;
use crate::gerstenhaber::{BasicLieWord, Level, LieError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DlError {
    #[error("Dyer-Lashof letters are not defined over the rationals")]
    RationalLetters,
    #[error("excess of the empty index is undefined")]
    EmptyIndex,
    #[error("Bockstein letters are not defined for ell = 2")]
    BocksteinAtTwo,
    #[error("letter {0} exceeds the top operation on a class of degree {1}")]
    AboveTop(Letter, i64),
    #[error("negative degree produced by index {0}")]
    NegativeDegree(DlIndex),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("k = {0} is not allowed here")]
    BadK(Level),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// `beta Q^s` when `beta`, else `Q^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub beta: bool,
    pub s: i64,
}

impl Letter {
    pub fn q(s: i64) -> Letter {
        Letter { beta: false, s }
    }

    pub fn bq(s: i64) -> Letter {
        Letter { beta: true, s }
    }

    fn eps(&self) -> i64 {
        self.beta as i64
    }

    /// Degree shift of the letter at prime `ell`.
    pub fn shift(&self, ell: u64) -> i64 {
        if ell == 2 {
            self.s
        } else {
            2 * self.s * (ell as i64 - 1) - self.eps()
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.beta {
            write!(f, "bQ^{}", self.s)
        } else {
            write!(f, "Q^{}", self.s)
        }
    }
}

/// Composite index; `letters[0]` is applied last.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DlIndex(pub Vec<Letter>);

impl DlIndex {
    pub fn empty() -> Self {
        DlIndex(Vec::new())
    }

    /// `ell = 2` index `(s_1, ..., s_r)`.
    pub fn twos(s: &[i64]) -> Self {
        DlIndex(s.iter().map(|&s| Letter::q(s)).collect())
    }

    /// Odd-prime index `((eps_1, s_1), ...)`.
    pub fn odd(pairs: &[(u8, i64)]) -> Self {
        DlIndex(pairs.iter().map(|&(e, s)| Letter { beta: e == 1, s }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Listing form `Q^{(eps,s)...}` (odd primes) or `Q^{(s)...}` (`ell = 2`).
    pub fn render(&self, ell: u64) -> String {
        let mut s = String::from("Q^{");
        for l in &self.0 {
            if ell == 2 {
                s.push_str(&format!("({})", l.s));
            } else {
                s.push_str(&format!("({},{})", l.eps(), l.s));
            }
        }
        s.push('}');
        s
    }
}

impl fmt::Display for DlIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Level `k` (1, 2, ... or infinity) and coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WParams {
    pub k: Level,
    pub field: FieldSpec,
}

impl WParams {
    pub fn new(k: Level, field: FieldSpec) -> Self {
        WParams { k, field }
    }

    pub fn ell(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn lie(&self) -> crate::gerstenhaber::LieParams {
        crate::gerstenhaber::LieParams::new(self.k, self.field)
    }
}

fn check_letters(i: &DlIndex, ell: u64) -> Result<(), DlError> {
    if ell == 0 && !i.is_empty() {
        return Err(DlError::RationalLetters);
    }
    if ell == 2 && i.0.iter().any(|l| l.beta) {
        return Err(DlError::BocksteinAtTwo);
    }
    Ok(())
}

/// Excess `e(I)`.
pub fn excess(i: &DlIndex, ell: u64) -> Result<i64, DlError> {
    check_letters(i, ell)?;
    let first = i.0.first().ok_or(DlError::EmptyIndex)?;
    if ell == 2 {
        Ok(first.s - i.0[1..].iter().map(|l| l.s).sum::<i64>())
    } else {
        Ok(2 * first.s - first.eps() - i.0[1..].iter().map(|l| l.shift(ell)).sum::<i64>())
    }
}

/// Whether each consecutive pair satisfies the admissibility inequality.
pub fn is_admissible(i: &DlIndex, ell: u64) -> bool {
    i.0.windows(2).all(|w| pair_admissible(w[0], w[1], ell))
}

/// `outer` applied after `inner`.
pub(crate) fn pair_admissible(outer: Letter, inner: Letter, ell: u64) -> bool {
    if ell == 2 {
        2 * inner.s >= outer.s
    } else {
        ell as i64 * inner.s - inner.eps() >= outer.s
    }
}

/// Degree after applying `i` to a class of degree `d`, or `None` if it goes negative.
pub(crate) fn apply_degree(i: &DlIndex, d: i64, ell: u64) -> i64 {
    d + i.0.iter().map(|l| l.shift(ell)).sum::<i64>()
}

/// Bidegree of `Q^I y`.
pub fn dl_bidegree(i: &DlIndex, y: Bidegree, ell: u64) -> Result<Bidegree, DlError> {
    check_letters(i, ell)?;
    let d = apply_degree(i, y.d as i64, ell);
    if d < 0 {
        return Err(DlError::NegativeDegree(i.clone()));
    }
    let n = y.n * (ell as u32).pow(i.len() as u32);
    Ok(Bidegree::new(n, d as u32))
}

/// The three basis conditions for `Q^I y` with `|y| = y_degree`.
pub fn is_basis_index(i: &DlIndex, y_degree: u32, p: &WParams) -> Result<bool, DlError> {
    let ell = p.ell();
    check_letters(i, ell)?;
    if matches!(p.k, Level::Finite(k) if k < 2) {
        return Err(DlError::BadK(p.k));
    }
    let Some(last) = i.0.last() else { return Ok(true) };
    let y = y_degree as i64;
    let e = excess(i, ell)?;
    let excess_ok = if ell == 2 { e > y } else { e + i.0[0].eps() > y };
    let top_ok = match p.k {
        Level::Infinite => true,
        Level::Finite(k) => {
            let top = y + k as i64 - 1;
            if ell == 2 {
                last.s <= top
            } else {
                2 * last.s <= top
            }
        }
    };
    Ok(is_admissible(i, ell) && excess_ok && top_ok)
}

/// [`is_basis_index`] on a basic Lie word.
pub fn is_basis_word(i: &DlIndex, y: &BasicLieWord, p: &WParams) -> Result<bool, DlError> {
    is_basis_index(i, y.bidegree.d, p)
}

/// Binomial coefficient `C(n, r)` mod a prime, zero outside `0 <= r <= n`, via Lucas.
pub fn binomial_mod(n: i64, r: i64, ell: u64) -> i64 {
    if r < 0 || n < 0 || r > n {
        return 0;
    }
    let p = ell as i64;
    let (mut n, mut r) = (n, r);
    let mut acc: i64 = 1;
    while n > 0 || r > 0 {
        let (a, b) = (n % p, r % p);
        if b > a {
            return 0;
        }
        // Small C(a, b) with a < p by multiplicative formula mod p.
        let mut c: i64 = 1;
        for t in 0..b {
            c = c * ((a - t) % p) % p;
        }
        let mut den: i64 = 1;
        for t in 1..=b {
            den = den * t % p;
        }
        c = c * inverse_mod(den, p) % p;
        acc = acc * c % p;
        n /= p;
        r /= p;
    }
    acc
}

fn inverse_mod(a: i64, p: i64) -> i64 {
    let mut r = 1i64;
    let mut b = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `(a, b) = (a+b)! / (a! b!)` mod `ell`, zero unless `a, b >= 0`.
pub fn clm_coefficient(a: i64, b: i64, ell: u64) -> i64 {
    if a < 0 || b < 0 {
        0
    } else {
        binomial_mod(a + b, b, ell)
    }
}

/// Generalized binomial `a(a-1)...(a-b+1)/b!` mod `ell`, zero for `b < 0`.
pub fn falling_binomial_mod(a: i64, b: i64, ell: u64) -> i64 {
    if b < 0 {
        return 0;
    }
    if a >= 0 {
        return binomial_mod(a, b, ell);
    }
    // C(a, b) = (-1)^b C(b - a - 1, b) for negative a.
    let v = binomial_mod(b - a - 1, b, ell);
    if b % 2 == 0 {
        v
    } else {
        (ell as i64 - v) % ell as i64
    }
}
