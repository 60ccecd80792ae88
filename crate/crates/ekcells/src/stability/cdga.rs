//! Free graded-commutative differential algebras on trigraded generators.
//!
//! Generators carry `(n, d, q)`: rank, total degree and filtration. A differential
//! lowers `d` by one and `q` by a fixed page step, so it preserves `n` and
//! `q - step * d`; each such pair indexes one chain complex graded by `d`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::StabilityError;
use crate::bigraded::{Trigrade, Window};
use crate::exactlin::{homology_dims, FieldSpec, FiniteChainComplex, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CdgaGenerator {
    pub label: String,
    pub trigrade: Trigrade,
}

/// Exponent vector over the generator list.
pub type Exponents = Vec<u32>;

/// Linear combination of monomials.
pub type Polynomial = BTreeMap<Exponents, Scalar>;

#[derive(Clone, Debug)]
pub struct CDGAPresentation {
    field: FieldSpec,
    generators: Vec<CdgaGenerator>,
    step: i64,
    differential: Vec<Polynomial>,
}

impl CDGAPresentation {
    /// Generators with zero differential; attach differentials with [`Self::set_differential`].
    pub fn new(field: FieldSpec, generators: Vec<CdgaGenerator>, step: i64) -> Result<Self, StabilityError> {
        for (i, g) in generators.iter().enumerate() {
            if g.trigrade.n == 0 {
                return Err(StabilityError::Differential(format!("generator `{}` has rank 0", g.label)));
            }
            if generators[..i].iter().any(|h| h.label == g.label) {
                return Err(StabilityError::Differential(format!("duplicate generator `{}`", g.label)));
            }
        }
        let differential = vec![Polynomial::new(); generators.len()];
        Ok(CDGAPresentation { field, generators, step, differential })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[CdgaGenerator] {
        &self.generators
    }

    pub fn step(&self) -> i64 {
        self.step
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    /// Sets `d(label) = sum c * prod g^e`, with monomials given by labels and exponents.
    pub fn set_differential(&mut self, label: &str, terms: &[(i64, &[(&str, u32)])]) -> Result<(), StabilityError> {
        let i = self.index_of(label).ok_or_else(|| StabilityError::Missing(label.to_string()))?;
        let mut poly = Polynomial::new();
        for (c, mono) in terms {
            let mut e = vec![0; self.generators.len()];
            for (l, m) in mono.iter() {
                let j = self.index_of(l).ok_or_else(|| StabilityError::Missing(l.to_string()))?;
                e[j] += m;
            }
            if self.vanishes(&e) {
                continue;
            }
            let target = self.trigrade_of(&e);
            let g = self.generators[i].trigrade;
            if target.n != g.n || target.d as i64 != g.d as i64 - 1 || target.q != g.q - self.step {
                return Err(StabilityError::Differential(format!(
                    "d({label}) has a term in {target}, expected ({},{},{})",
                    g.n,
                    g.d as i64 - 1,
                    g.q - self.step
                )));
            }
            add_term(self.field, &mut poly, e, self.field.from_i64(*c));
        }
        self.differential[i] = poly;
        Ok(())
    }

    fn is_odd(&self, i: usize) -> bool {
        self.generators[i].trigrade.d % 2 == 1
    }

    fn vanishes(&self, e: &[u32]) -> bool {
        self.field.characteristic() != 2 && e.iter().enumerate().any(|(i, &m)| m > 1 && self.is_odd(i))
    }

    pub fn trigrade_of(&self, e: &[u32]) -> Trigrade {
        let mut t = Trigrade::new(0, 0, 0);
        for (g, &m) in self.generators.iter().zip(e) {
            t.n += g.trigrade.n * m;
            t.d += g.trigrade.d * m;
            t.q += g.trigrade.q * m as i64;
        }
        t
    }

    /// Product of monomials with the Koszul sign, or `None` when it vanishes.
    fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Option<(Exponents, i64)> {
        let mut sign = 0i64;
        let mut odd_after = 0i64;
        // Each odd instance of `b` moves past the odd instances of `a` with larger index.
        for i in (0..a.len()).rev() {
            if self.is_odd(i) {
                sign += b[i] as i64 * odd_after;
                odd_after += a[i] as i64;
            }
        }
        let e: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
        if self.vanishes(&e) {
            return None;
        }
        Some((e, sign))
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let f = self.field;
        let mut out = Polynomial::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                if let Some((e, s)) = self.mul_monomials(ma, mb) {
                    add_term(f, &mut out, e, f.mul(&f.mul(ca, cb), &f.sign(s)));
                }
            }
        }
        out
    }

    fn monomial(&self, e: Exponents) -> Polynomial {
        Polynomial::from([(e, self.field.one())])
    }

    /// Leibniz extension of the differential to a monomial.
    pub fn d_monomial(&self, e: &[u32]) -> Polynomial {
        let f = self.field;
        let mut out = Polynomial::new();
        let mut prefix = vec![0u32; e.len()];
        let mut prefix_degree = 0i64;
        for i in 0..e.len() {
            if e[i] == 0 {
                continue;
            }
            let mut rest = e.to_vec();
            rest[..=i].iter_mut().for_each(|x| *x = 0);
            let mut power = vec![0u32; e.len()];
            power[i] = e[i] - 1;
            // d(g^m) = m g^(m-1) dg; for odd g in odd characteristic m = 1.
            let dg = self.mul(&self.monomial(power), &self.differential[i]);
            let term = self.mul(&self.mul(&self.monomial(prefix.clone()), &dg), &self.monomial(rest));
            let c = f.mul(&f.from_i64(e[i] as i64), &f.sign(prefix_degree));
            for (m, v) in term {
                add_term(f, &mut out, m, f.mul(&v, &c));
            }
            prefix[i] = e[i];
            prefix_degree += (self.generators[i].trigrade.d * e[i]) as i64;
        }
        out
    }

    pub fn d(&self, p: &Polynomial) -> Polynomial {
        let f = self.field;
        let mut out = Polynomial::new();
        for (m, c) in p {
            for (m2, v) in self.d_monomial(m) {
                add_term(f, &mut out, m2, f.mul(&v, c));
            }
        }
        out
    }

    /// Checks `d(d(g)) = 0` on every generator.
    pub fn check_square_zero(&self) -> Result<(), StabilityError> {
        for (i, g) in self.generators.iter().enumerate() {
            if !self.d(&self.differential[i]).is_empty() {
                return Err(StabilityError::NotSquareZero(g.label.clone()));
            }
        }
        Ok(())
    }

    /// All monomials with rank and degree inside the window.
    pub fn monomials(&self, w: Window) -> Vec<Exponents> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.generators.len()];
        self.rec_monomials(0, 0, 0, w, &mut cur, &mut out);
        out
    }

    fn rec_monomials(&self, i: usize, n: u32, d: u32, w: Window, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == self.generators.len() {
            out.push(cur.clone());
            return;
        }
        let t = self.generators[i].trigrade;
        let cap = if self.is_odd(i) && self.field.characteristic() != 2 { 1 } else { u32::MAX };
        let mut m = 0;
        while m <= cap && n + m * t.n <= w.nmax && d + m * t.d <= w.dmax {
            cur[i] = m;
            self.rec_monomials(i + 1, n + m * t.n, d + m * t.d, w, cur, out);
            m += 1;
        }
        cur[i] = 0;
    }
}

fn add_term(f: FieldSpec, p: &mut Polynomial, m: Exponents, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let v = match p.remove(&m) {
        Some(old) => f.add(&old, &c),
        None => c,
    };
    if !v.is_zero() {
        p.insert(m, v);
    }
}

/// Chain and homology dimensions per trigrade.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CdgaHomology {
    pub chains: BTreeMap<Trigrade, u64>,
    pub homology: BTreeMap<Trigrade, u64>,
}

/// Homology of the free graded-commutative algebra with the Leibniz differential, on the window.
pub fn free_cdga_homology(pres: &CDGAPresentation, w: Window) -> Result<CdgaHomology, StabilityError> {
    pres.check_square_zero()?;
    let step = pres.step;
    // (n, q - step d) -> d -> monomials.
    let mut blocks: BTreeMap<(u32, i64), BTreeMap<u32, Vec<Exponents>>> = BTreeMap::new();
    let mut chains = BTreeMap::new();
    for e in pres.monomials(w) {
        let t = pres.trigrade_of(&e);
        *chains.entry(t).or_insert(0) += 1;
        blocks.entry((t.n, t.q - step * t.d as i64)).or_default().entry(t.d).or_default().push(e);
    }
    let results: Vec<Result<Vec<(Trigrade, u64)>, StabilityError>> = blocks
        .par_iter()
        .map(|(&(n, c), by_d)| {
            let lo = *by_d.keys().next().expect("nonempty block");
            let hi = *by_d.keys().last().expect("nonempty block");
            let dims: Vec<usize> = (lo..=hi).map(|d| by_d.get(&d).map_or(0, Vec::len)).collect();
            let mut diffs = BTreeMap::new();
            for d in lo + 1..=hi {
                let (Some(src), Some(dst)) = (by_d.get(&d), by_d.get(&(d - 1))) else { continue };
                let index: BTreeMap<&Exponents, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut t = Vec::new();
                for (col, m) in src.iter().enumerate() {
                    for (img, v) in pres.d_monomial(m) {
                        let row = *index.get(&img).ok_or_else(|| {
                            StabilityError::Differential(format!("image of a monomial leaves {}", pres.trigrade_of(m)))
                        })?;
                        t.push((row, col, v));
                    }
                }
                diffs.insert(d as i64, Matrix::from_triplets(pres.field, dst.len(), src.len(), t)?);
            }
            let cx = FiniteChainComplex::new(pres.field, lo as i64, dims, diffs)?;
            Ok(homology_dims(&cx)
                .into_iter()
                .filter(|&(_, h)| h > 0)
                .map(|(d, h)| (Trigrade::new(n, d as u32, c + step * d), h as u64))
                .collect())
        })
        .collect();
    let mut homology = BTreeMap::new();
    for r in results {
        homology.extend(r?);
    }
    Ok(CdgaHomology { chains, homology })
}

/// Hilbert table of the free graded-commutative algebra on trigraded generators, unit included.
pub fn free_gca_trigraded(
    gens: impl IntoIterator<Item = Trigrade>,
    field: FieldSpec,
    w: Window,
) -> BTreeMap<Trigrade, u64> {
    let mut table = BTreeMap::from([(Trigrade::new(0, 0, 0), 1u64)]);
    for g in gens {
        assert!(g.n > 0 || g.d > 0, "generator in bidegree (0,0)");
        let cap = if field.characteristic() != 2 && g.d % 2 == 1 { 1 } else { u32::MAX };
        let mut next = table.clone();
        for (t, c) in &table {
            let mut m = 1;
            while m <= cap && t.n + m * g.n <= w.nmax && t.d + m * g.d <= w.dmax {
                let s = Trigrade::new(t.n + m * g.n, t.d + m * g.d, t.q + m as i64 * g.q);
                *next.entry(s).or_insert(0) += c;
                m += 1;
            }
        }
        table = next;
    }
    table
}

/// Product of two trigraded tables, truncated to the window.
pub fn convolve_trigraded(
    a: &BTreeMap<Trigrade, u64>,
    b: &BTreeMap<Trigrade, u64>,
    w: Window,
) -> BTreeMap<Trigrade, u64> {
    let mut out = BTreeMap::new();
    for (s, x) in a {
        for (t, y) in b {
            if s.n + t.n <= w.nmax && s.d + t.d <= w.dmax {
                *out.entry(Trigrade::new(s.n + t.n, s.d + t.d, s.q + t.q)).or_insert(0) += x * y;
            }
        }
    }
    out.retain(|_, v| *v > 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(label: &str, n: u32, d: u32, q: i64) -> CdgaGenerator {
        CdgaGenerator { label: label.into(), trigrade: Trigrade::new(n, d, q) }
    }

    #[test]
    fn odd_squares_vanish_and_signs_anticommute() {
        let f = FieldSpec::rationals();
        let p = CDGAPresentation::new(f, vec![gen("a", 1, 1, 0), gen("b", 1, 1, 0)], 1).unwrap();
        let a = p.monomial(vec![1, 0]);
        let b = p.monomial(vec![0, 1]);
        assert!(p.mul(&a, &a).is_empty());
        let ab = p.mul(&a, &b);
        let ba = p.mul(&b, &a);
        assert_eq!(ab.len(), 1);
        assert_eq!(ab[&vec![1, 1]], f.one());
        assert_eq!(ba[&vec![1, 1]], f.from_i64(-1));
    }

    #[test]
    fn inconsistent_degrees_rejected() {
        let f = FieldSpec::prime(2);
        let mut p = CDGAPresentation::new(f, vec![gen("a", 2, 1, 0), gen("r", 2, 2, 1)], 1).unwrap();
        assert!(p.set_differential("r", &[(1, &[("a", 1)])]).is_ok());
        assert!(p.set_differential("a", &[(1, &[("r", 1)])]).is_err());
    }

    #[test]
    fn nonzero_square_detected() {
        // d(c) = a b with d(a) = e makes d^2(c) = e b != 0.
        let f = FieldSpec::prime(3);
        let gens = vec![gen("e", 1, 0, 0), gen("b", 1, 1, 0), gen("a", 1, 1, 1), gen("c", 2, 3, 2)];
        let mut p = CDGAPresentation::new(f, gens, 1).unwrap();
        p.set_differential("a", &[(1, &[("e", 1)])]).unwrap();
        p.set_differential("c", &[(1, &[("a", 1), ("b", 1)])]).unwrap();
        assert!(matches!(free_cdga_homology(&p, Window::new(4, 4)), Err(StabilityError::NotSquareZero(_))));
    }

    #[test]
    fn trigraded_gca_matches_bigraded() {
        let f = FieldSpec::prime(3);
        let w = Window::new(6, 6);
        let gens = [Trigrade::new(1, 0, 0), Trigrade::new(2, 1, 1), Trigrade::new(2, 2, 0)];
        let tri = free_gca_trigraded(gens, f, w);
        let bi = crate::bigraded::free_gca_hilbert_of(gens.iter().map(|t| t.bidegree()), f, w);
        let mut summed: BTreeMap<_, u64> = BTreeMap::new();
        for (t, v) in tri {
            *summed.entry(t.bidegree()).or_insert(0) += v;
        }
        for (b, v) in bi.iter() {
            assert_eq!(summed.get(&b).copied().unwrap_or(0), v, "{b}");
        }
    }
}
