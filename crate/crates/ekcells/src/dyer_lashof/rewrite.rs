//! Elements of free `W_{k-1}`-algebras and their normalization.
//!
//! Normalization of a single factor `Q^I(y)` applies, innermost letter first, the
//! vanishing rule and the critical-degree rule, and then rewrites one inadmissible
//! adjacent pair by an Adem relation. Letters applied to products expand by Cartan.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use super::{clm_coefficient, falling_binomial_mod, pair_admissible, DlError, DlIndex, Letter, WParams};
use crate::bigraded::{Bidegree, GeneratorList};
use crate::exactlin::{FieldSpec, Scalar};
use crate::gerstenhaber::{BasicLieWord, Level};

/// One polynomial generator `Q^I(y)`; the index may be non-normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub rank: u32,
    pub degree: i64,
    pub word: BasicLieWord,
    pub index: DlIndex,
}

impl Factor {
    pub fn new(index: DlIndex, word: BasicLieWord, ell: u64) -> Self {
        let rank = word.bidegree.n * (ell.max(1) as u32).pow(index.len() as u32);
        let degree = super::apply_degree(&index, word.bidegree.d as i64, ell);
        Factor { rank, degree, word, index }
    }

    pub fn bare(word: BasicLieWord) -> Self {
        Factor { rank: word.bidegree.n, degree: word.bidegree.d as i64, word, index: DlIndex::empty() }
    }

    pub fn bidegree(&self) -> Option<Bidegree> {
        u32::try_from(self.degree).ok().map(|d| Bidegree::new(self.rank, d))
    }

    /// Listing form `Q^{...}[word]`.
    pub fn render(&self, gens: &GeneratorList, ell: u64) -> String {
        format!("{}[{}]", self.index.render(ell), self.word.render(gens))
    }

    fn odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank, self.degree, &self.word.tree, &self.index).cmp(&(
            other.rank,
            other.degree,
            &other.word.tree,
            &other.index,
        ))
    }
}

/// A monomial: sorted factors with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WMonomial {
    factors: Vec<(Factor, u32)>,
}

impl WMonomial {
    pub fn unit() -> Self {
        WMonomial::default()
    }

    pub fn single(f: Factor) -> Self {
        WMonomial { factors: vec![(f, 1)] }
    }

    /// Builds a monomial from unordered factors; `None` if an odd factor repeats
    /// and the field has characteristic other than 2.
    pub fn from_factors(fs: Vec<(Factor, u32)>, field: FieldSpec) -> Option<(i64, Self)> {
        let mut acc = WMonomial::unit();
        let mut sign = 0;
        for (f, m) in fs {
            for _ in 0..m {
                let (s, next) = acc.mul(&WMonomial::single(f.clone()), field)?;
                sign += s;
                acc = next;
            }
        }
        Some((sign, acc))
    }

    pub fn factors(&self) -> &[(Factor, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.factors.iter().map(|(f, m)| f.rank * m).sum()
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(f, m)| f.degree * *m as i64).sum()
    }

    pub fn bidegree(&self) -> Option<Bidegree> {
        u32::try_from(self.degree()).ok().map(|d| Bidegree::new(self.rank(), d))
    }

    fn instances(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().flat_map(|(f, m)| std::iter::repeat(f).take(*m as usize))
    }

    /// Product `self * other`: sign exponent and sorted monomial, or `None` when zero.
    pub fn mul(&self, other: &WMonomial, field: FieldSpec) -> Option<(i64, WMonomial)> {
        let mut sign = 0i64;
        // Moving each factor of `other` past the larger factors of `self`.
        for b in other.instances() {
            if !b.odd() {
                continue;
            }
            for a in self.instances() {
                if a > b && a.odd() {
                    sign += 1;
                }
            }
        }
        let mut merged: BTreeMap<Factor, u32> = BTreeMap::new();
        for (f, m) in self.factors.iter().chain(&other.factors) {
            *merged.entry(f.clone()).or_insert(0) += m;
        }
        if field.characteristic() != 2 && merged.iter().any(|(f, m)| f.odd() && *m > 1) {
            return None;
        }
        Some((sign, WMonomial { factors: merged.into_iter().collect() }))
    }

    /// Splits off the first factor: `self = first * rest` with no sign.
    fn split_first(&self) -> Option<(Factor, WMonomial)> {
        let (f, m) = self.factors.first()?;
        let mut rest = self.factors.clone();
        if *m == 1 {
            rest.remove(0);
        } else {
            rest[0].1 -= 1;
        }
        Some((f.clone(), WMonomial { factors: rest }))
    }

    pub fn render(&self, gens: &GeneratorList, ell: u64) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(f, m)| if *m == 1 { f.render(gens, ell) } else { format!("{}^{}", f.render(gens, ell), m) })
            .collect();
        parts.join("*")
    }
}

impl PartialOrd for WMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank(), self.degree(), &self.factors).cmp(&(other.rank(), other.degree(), &other.factors))
    }
}

/// Finite linear combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WElement {
    field: FieldSpec,
    terms: BTreeMap<WMonomial, Scalar>,
}

impl WElement {
    pub fn zero(field: FieldSpec) -> Self {
        WElement { field, terms: BTreeMap::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::monomial(field, WMonomial::unit())
    }

    pub fn monomial(field: FieldSpec, m: WMonomial) -> Self {
        let mut e = Self::zero(field);
        e.add_term(m, field.one());
        e
    }

    pub fn factor(field: FieldSpec, f: Factor) -> Self {
        Self::monomial(field, WMonomial::single(f))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &WMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: WMonomial, c: Scalar) {
        let f = self.field;
        let v = match self.terms.get(&m) {
            Some(old) => f.add(old, &c),
            None => c,
        };
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn add_scaled(&mut self, other: &WElement, c: &Scalar) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), self.field.mul(v, c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> WElement {
        let mut out = Self::zero(self.field);
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &WElement) -> WElement {
        let f = self.field;
        let mut out = Self::zero(f);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, m)) = a.mul(b, f) {
                    out.add_term(m, f.mul(&f.mul(ca, cb), &f.sign(s)));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u64) -> WElement {
        let mut out = Self::one(self.field);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn render(&self, gens: &GeneratorList) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let ell = self.field.characteristic();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if c.is_one() { m.render(gens, ell) } else { format!("{c}*{}", m.render(gens, ell)) })
            .collect();
        parts.join(" + ")
    }
}

/// Which inadmissible pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// Binomial convention for the Adem coefficients.
///
/// `Clm` uses `(a, b) = (a+b)!/(a! b!)` (zero unless `a, b >= 0`), with the relations
/// in their standard form. `Literal` evaluates the coefficients exactly as printed,
/// with the falling-factorial binomial; rewriting can cycle under it, which is
/// reported as an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AdemConvention {
    #[default]
    Clm,
    Literal,
}

struct Rewriter<'a> {
    p: &'a WParams,
    ell: u64,
    strategy: Strategy,
    convention: AdemConvention,
    memo: HashMap<Factor, WElement>,
    in_progress: HashSet<Factor>,
}

/// Adem expansion of the inadmissible pair `outer inner` as (coefficient, new outer, new inner).
pub fn adem_relation(outer: Letter, inner: Letter, ell: u64, conv: AdemConvention) -> Vec<(i64, Letter, Letter)> {
    let (r, s) = (outer.s, inner.s);
    let mut out = Vec::new();
    let c = |a: i64, b: i64| clm_coefficient(a, b, ell);
    let lit = |a: i64, b: i64| falling_binomial_mod(a, b, ell);
    let sgn = |e: i64| if e.rem_euclid(2) == 0 { 1 } else { -1 };
    if ell == 2 {
        for i in 0..=(r - s - 1).max(-1) {
            let v = match conv {
                AdemConvention::Clm => c(2 * i - r, r - s - i - 1),
                AdemConvention::Literal => lit(2 * i - r, r - s - i - 1),
            };
            if v != 0 {
                out.push((v, Letter::q(r + s - i), Letter::q(i)));
            }
        }
        return out;
    }
    let l = ell as i64;
    let m = (l - 1) * s;
    match (outer.beta, inner.beta) {
        (b, false) => {
            for i in 0..=(r - m - 1).max(-1) {
                let v = match conv {
                    AdemConvention::Clm => c(l * i - r, r - m - i - 1),
                    AdemConvention::Literal => lit(l * i - m - i - 1, r - m - i - 1),
                };
                if v != 0 {
                    out.push((sgn(r + i) * v, Letter { beta: b, s: r + s - i }, Letter::q(i)));
                }
            }
        }
        (false, true) => {
            for i in 0..=(r - m).max(-1) {
                let (v1, v2) = match conv {
                    AdemConvention::Clm => (c(l * i - r, r - m - i), c(l * i - r - 1, r - m - i)),
                    AdemConvention::Literal => (lit(l * i - m - i, r - m - i), lit(l * i + m - i - 1, r - m - i)),
                };
                if v1 != 0 {
                    out.push((sgn(r + i) * v1, Letter::bq(r + s - i), Letter::q(i)));
                }
                if v2 != 0 {
                    out.push((-sgn(r + i) * v2, Letter::q(r + s - i), Letter::bq(i)));
                }
            }
        }
        (true, true) => {
            for i in 0..=(r - m).max(-1) {
                let v = match conv {
                    AdemConvention::Clm => c(l * i - r - 1, r - m - i),
                    AdemConvention::Literal => lit(l * i + m - i - 1, r - m - i),
                };
                if v != 0 {
                    out.push((-sgn(r + i) * v, Letter::bq(r + s - i), Letter::bq(i)));
                }
            }
        }
    }
    out
}

enum LetterCheck {
    Fine,
    Vanishes,
    Critical,
}

impl Rewriter<'_> {
    fn field(&self) -> FieldSpec {
        self.p.field
    }

    fn check_letter(&self, l: Letter, q: i64) -> Result<LetterCheck, DlError> {
        let two = self.ell == 2;
        let (lo, crit) = if two { (l.s, l.s) } else { (2 * l.s, 2 * l.s) };
        let vanishes = if l.beta { lo <= q } else { lo < q };
        if vanishes {
            return Ok(LetterCheck::Vanishes);
        }
        if let Level::Finite(k) = self.p.k {
            if lo > q + k as i64 - 1 {
                return Err(DlError::AboveTop(l, q));
            }
        }
        if !l.beta && crit == q {
            return Ok(LetterCheck::Critical);
        }
        Ok(LetterCheck::Fine)
    }

    fn normalize_factor(&mut self, f: &Factor) -> Result<WElement, DlError> {
        if let Some(e) = self.memo.get(f) {
            return Ok(e.clone());
        }
        if !self.in_progress.insert(f.clone()) {
            return Err(DlError::Unsupported(format!("Adem rewriting of {} does not terminate", f.index)));
        }
        let e = self.normalize_factor_uncached(f);
        self.in_progress.remove(f);
        let e = e?;
        self.memo.insert(f.clone(), e.clone());
        Ok(e)
    }

    fn normalize_factor_uncached(&mut self, f: &Factor) -> Result<WElement, DlError> {
        let field = self.field();
        let letters = &f.index.0;
        let r = letters.len();
        let mut q = f.word.bidegree.d as i64;
        for j in (0..r).rev() {
            match self.check_letter(letters[j], q)? {
                LetterCheck::Vanishes => return Ok(WElement::zero(field)),
                LetterCheck::Critical => {
                    let inner = Factor::new(DlIndex(letters[j + 1..].to_vec()), f.word.clone(), self.ell);
                    let mut acc = self.normalize_factor(&inner)?.pow(self.ell);
                    for &l in letters[..j].iter().rev() {
                        acc = self.apply_letter(l, &acc)?;
                    }
                    return Ok(acc);
                }
                LetterCheck::Fine => {}
            }
            q += letters[j].shift(self.ell);
        }
        let bad: Vec<usize> = (1..r).filter(|&j| !pair_admissible(letters[j - 1], letters[j], self.ell)).collect();
        let j = match (bad.first(), bad.last(), self.strategy) {
            (None, _, _) => return Ok(WElement::factor(field, f.clone())),
            (Some(&j), _, Strategy::Leftmost) => j,
            (_, Some(&j), Strategy::Rightmost) => j,
            _ => unreachable!(),
        };
        let mut out = WElement::zero(field);
        for (c, a, b) in adem_relation(letters[j - 1], letters[j], self.ell, self.convention) {
            let mut idx = letters[..j - 1].to_vec();
            idx.push(a);
            idx.push(b);
            idx.extend_from_slice(&letters[j + 1..]);
            let term = self.normalize_factor(&Factor::new(DlIndex(idx), f.word.clone(), self.ell))?;
            out.add_scaled(&term, &field.from_i64(c));
        }
        Ok(out)
    }

    fn apply_letter(&mut self, l: Letter, e: &WElement) -> Result<WElement, DlError> {
        let field = self.field();
        let mut out = WElement::zero(field);
        for (m, c) in e.terms() {
            let v = self.apply_letter_monomial(l, m)?;
            out.add_scaled(&v, c);
        }
        Ok(out)
    }

    fn apply_letter_monomial(&mut self, l: Letter, m: &WMonomial) -> Result<WElement, DlError> {
        let field = self.field();
        if m.is_unit() {
            return Ok(if !l.beta && l.s == 0 { WElement::one(field) } else { WElement::zero(field) });
        }
        if let [(f, 1)] = m.factors() {
            let mut idx = vec![l];
            idx.extend_from_slice(&f.index.0);
            return self.normalize_factor(&Factor::new(DlIndex(idx), f.word.clone(), self.ell));
        }
        let q = m.degree();
        match self.check_letter(l, q)? {
            LetterCheck::Vanishes => return Ok(WElement::zero(field)),
            LetterCheck::Critical => return Ok(WElement::monomial(field, m.clone()).pow(self.ell)),
            LetterCheck::Fine => {}
        }
        if let Level::Finite(k) = self.p.k {
            let lo = if self.ell == 2 { l.s } else { 2 * l.s };
            if lo == q + k as i64 - 1 {
                return Err(DlError::Unsupported(format!(
                    "top operation {l} on a product: the Cartan formula has correction terms"
                )));
            }
        }
        self.cartan(l, m)
    }

    /// Cartan expansion of `l` on a product of at least two factors.
    fn cartan(&mut self, l: Letter, m: &WMonomial) -> Result<WElement, DlError> {
        let field = self.field();
        let (x, rest) = m.split_first().expect("non-unit monomial");
        let xe = WElement::factor(field, x.clone());
        let re = WElement::monomial(field, rest.clone());
        let (dx, dr) = (x.degree, rest.degree());
        let two = self.ell == 2;
        // Smallest useful index on a class of degree d for Q (strict) or beta Q.
        let min_q = |d: i64| if two { d } else { (d + 1).div_euclid(2) };
        let min_b = |d: i64| d.div_euclid(2) + 1;
        let mut out = WElement::zero(field);
        if !l.beta {
            for i in min_q(dx)..=l.s - min_q(dr) {
                let a = self.apply_letter(Letter::q(i), &xe)?;
                if a.is_zero() {
                    continue;
                }
                let b = self.apply_letter(Letter::q(l.s - i), &re)?;
                out.add_scaled(&a.mul(&b), &field.one());
            }
        } else {
            for a in min_b(dx)..=l.s - min_q(dr) {
                let u = self.apply_letter(Letter::bq(a), &xe)?;
                if u.is_zero() {
                    continue;
                }
                let v = self.apply_letter(Letter::q(l.s - a), &re)?;
                out.add_scaled(&u.mul(&v), &field.one());
            }
            let sign = field.sign(dx);
            for a in min_q(dx)..=l.s - min_b(dr) {
                let u = self.apply_letter(Letter::q(a), &xe)?;
                if u.is_zero() {
                    continue;
                }
                let v = self.apply_letter(Letter::bq(l.s - a), &re)?;
                out.add_scaled(&u.mul(&v), &sign);
            }
        }
        Ok(out)
    }

    fn normalize_monomial(&mut self, m: &WMonomial) -> Result<WElement, DlError> {
        let field = self.field();
        let mut acc = WElement::one(field);
        for (f, mult) in m.factors() {
            let v = self.normalize_factor(f)?;
            for _ in 0..*mult {
                acc = acc.mul(&v);
            }
        }
        Ok(acc)
    }
}

fn rewriter(p: &WParams, strategy: Strategy, convention: AdemConvention) -> Result<Rewriter<'_>, DlError> {
    if p.ell() == 0 {
        return Err(DlError::RationalLetters);
    }
    if matches!(p.k, Level::Finite(k) if k < 2) {
        return Err(DlError::BadK(p.k));
    }
    Ok(Rewriter { p, ell: p.ell(), strategy, convention, memo: HashMap::new(), in_progress: HashSet::new() })
}

fn has_letters(e: &WElement) -> bool {
    e.terms().any(|(m, _)| m.factors().iter().any(|(f, _)| !f.index.is_empty()))
}

/// Normalizes every factor to admissible form, rewriting leftmost pairs first.
pub fn adem_rewrite(e: &WElement, p: &WParams) -> Result<WElement, DlError> {
    adem_rewrite_with(e, p, Strategy::Leftmost, AdemConvention::Clm)
}

/// [`adem_rewrite`] with an explicit strategy and coefficient convention.
pub fn adem_rewrite_with(
    e: &WElement,
    p: &WParams,
    strategy: Strategy,
    convention: AdemConvention,
) -> Result<WElement, DlError> {
    if p.ell() == 0 {
        return if has_letters(e) { Err(DlError::RationalLetters) } else { Ok(e.clone()) };
    }
    let mut rw = rewriter(p, strategy, convention)?;
    let mut out = WElement::zero(p.field);
    for (m, c) in e.terms() {
        let v = rw.normalize_monomial(m)?;
        out.add_scaled(&v, c);
    }
    Ok(out)
}

/// Applies one letter to an element and normalizes the result.
pub fn apply_letter(l: Letter, e: &WElement, p: &WParams) -> Result<WElement, DlError> {
    let mut rw = rewriter(p, Strategy::Leftmost, AdemConvention::Clm)?;
    let n = adem_rewrite(e, p)?;
    rw.apply_letter(l, &n)
}

/// `Q^s m` expanded by the Cartan formula and normalized.
pub fn cartan_expand(s: i64, m: &WMonomial, p: &WParams) -> Result<WElement, DlError> {
    apply_letter(Letter::q(s), &WElement::monomial(p.field, m.clone()), p)
}
