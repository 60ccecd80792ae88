//! Bigraded augmented algebras given by structure constants.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::BarError;
use crate::bigraded::{is_exterior, Bidegree, GeneratorList, Window};
use crate::dyer_lashof::{enumerate_free_wk_basis, BasisOptions, WParams};
use crate::exactlin::{FieldSpec, Scalar};

/// A coefficient in JSON: an integer or a string such as `"-1/2"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonBasisElement {
    pub label: String,
    pub n: u32,
    pub d: u32,
}

/// `label_a * label_b = coeff * label_c`; several triples with the same factors are summed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonProduct(pub String, pub String, pub String, pub JsonScalar);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonAlgebra {
    pub field: FieldSpec,
    pub window: Window,
    #[serde(default = "yes")]
    pub unital: bool,
    pub basis: Vec<JsonBasisElement>,
    #[serde(default)]
    pub mult: Vec<JsonProduct>,
}

fn yes() -> bool {
    true
}

/// An augmented algebra truncated to a window, stored through its augmentation ideal.
///
/// Basis elements are sorted by bidegree; the unit, when listed, is implicit in products.
#[derive(Clone, Debug)]
pub struct GradedAlgebraPresentation {
    field: FieldSpec,
    window: Window,
    unital: bool,
    labels: Vec<String>,
    degrees: Vec<Bidegree>,
    unit_label: Option<String>,
    mult: HashMap<(usize, usize), Vec<(usize, Scalar)>>,
}

impl GradedAlgebraPresentation {
    /// Validates labels, augmentation, bidegree additivity and associativity inside the window.
    pub fn new(
        field: FieldSpec,
        window: Window,
        unital: bool,
        basis: Vec<(String, Bidegree)>,
        products: Vec<(String, String, String, Scalar)>,
    ) -> Result<Self, BarError> {
        let mut unit_label = None;
        let mut ideal: Vec<(String, Bidegree)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (label, b) in basis {
            if !seen.insert(label.clone()) {
                return Err(BarError::Invalid(format!("duplicate label `{label}`")));
            }
            if !window.contains(b) {
                return Err(BarError::Invalid(format!("`{label}` at {b} lies outside the window")));
            }
            if b.n == 0 {
                if unital && b == Bidegree::ZERO && unit_label.is_none() {
                    unit_label = Some(label);
                    continue;
                }
                return Err(BarError::NotAugmented(label));
            }
            ideal.push((label, b));
        }
        ideal.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let labels: Vec<String> = ideal.iter().map(|(l, _)| l.clone()).collect();
        let degrees: Vec<Bidegree> = ideal.iter().map(|(_, b)| *b).collect();
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut acc: HashMap<(usize, usize), BTreeMap<usize, Scalar>> = HashMap::new();
        for (a, b, c, x) in products {
            if unit_label.as_deref().is_some_and(|u| u == a || u == b) {
                continue;
            }
            let look = |l: &str| index.get(l).copied().ok_or_else(|| BarError::Invalid(format!("unknown label `{l}`")));
            let (ia, ib, ic) = (look(&a)?, look(&b)?, look(&c)?);
            if degrees[ia] + degrees[ib] != degrees[ic] {
                return Err(BarError::Invalid(format!("{a} * {b} = {c} is not bidegree-additive")));
            }
            let slot = acc.entry((ia, ib)).or_default().entry(ic).or_insert_with(|| field.zero());
            *slot = field.add(slot, &x);
        }
        let mult = acc
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().filter(|(_, x)| !x.is_zero()).collect::<Vec<_>>()))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        let a = GradedAlgebraPresentation { field, window, unital, labels, degrees, unit_label, mult };
        a.check_associative()?;
        Ok(a)
    }

    fn new_trusted(
        field: FieldSpec,
        window: Window,
        labels: Vec<String>,
        degrees: Vec<Bidegree>,
        mult: HashMap<(usize, usize), Vec<(usize, Scalar)>>,
    ) -> Self {
        GradedAlgebraPresentation { field, window, unital: true, labels, degrees, unit_label: None, mult }
    }

    pub fn from_json(text: &str) -> Result<Self, BarError> {
        let j: JsonAlgebra = serde_json::from_str(text).map_err(|e| BarError::Parse(e.to_string()))?;
        let f = j.field;
        let basis = j.basis.into_iter().map(|b| (b.label, Bidegree::new(b.n, b.d))).collect();
        let products = j
            .mult
            .into_iter()
            .map(|JsonProduct(a, b, c, x)| {
                let x = match x {
                    JsonScalar::Int(v) => f.from_i64(v),
                    JsonScalar::Text(s) => f.parse(&s).map_err(|e| BarError::Parse(e.to_string()))?,
                };
                Ok((a, b, c, x))
            })
            .collect::<Result<_, BarError>>()?;
        Self::new(f, j.window, j.unital, basis, products)
    }

    pub fn to_json(&self) -> JsonAlgebra {
        let mut basis = Vec::new();
        if self.unital {
            basis.push(JsonBasisElement { label: self.unit_label.clone().unwrap_or_else(|| "1".into()), n: 0, d: 0 });
        }
        basis.extend(self.labels.iter().zip(&self.degrees).map(|(l, b)| JsonBasisElement {
            label: l.clone(),
            n: b.n,
            d: b.d,
        }));
        let mut keys: Vec<_> = self.mult.keys().copied().collect();
        keys.sort();
        let mult = keys
            .into_iter()
            .flat_map(|(a, b)| {
                self.mult[&(a, b)].iter().map(move |(c, x)| {
                    JsonProduct(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                        self.labels[*c].clone(),
                        JsonScalar::Text(x.to_string()),
                    )
                })
            })
            .collect();
        JsonAlgebra { field: self.field, window: self.window, unital: self.unital, basis, mult }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Labels of the augmentation ideal, sorted by bidegree.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[Bidegree] {
        &self.degrees
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `e_a * e_b` in the augmentation ideal.
    pub fn product(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        self.mult.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    fn mul_vec(&self, v: &BTreeMap<usize, Scalar>, b: usize, left: bool) -> BTreeMap<usize, Scalar> {
        let f = self.field;
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (a, x) in v {
            let prod = if left { self.product(b, *a) } else { self.product(*a, b) };
            for (c, y) in prod {
                let slot = out.entry(*c).or_insert_with(|| f.zero());
                *slot = f.add(slot, &f.mul(x, y));
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// `(ab)c = a(bc)` for every triple whose total bidegree lies in the window.
    pub fn check_associative(&self) -> Result<(), BarError> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                if !self.window.contains(self.degrees[a] + self.degrees[b]) {
                    continue;
                }
                let ab: BTreeMap<usize, Scalar> = self.product(a, b).iter().cloned().collect();
                for c in 0..n {
                    if !self.window.contains(self.degrees[a] + self.degrees[b] + self.degrees[c]) {
                        continue;
                    }
                    let bc: BTreeMap<usize, Scalar> = self.product(b, c).iter().cloned().collect();
                    if self.mul_vec(&ab, c, false) != self.mul_vec(&bc, a, true) {
                        return Err(BarError::NotAssociative(
                            self.labels[a].clone(),
                            self.labels[b].clone(),
                            self.labels[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The algebra with one basis element `a_n` in every rank `1 <= n <= nmax`, degree 0, and `a_m a_n = a_{m+n}`.
    pub fn unit_algebra(field: FieldSpec, window: Window) -> Self {
        let nmax = window.nmax as usize;
        let labels = (1..=nmax).map(|n| format!("a{n}")).collect();
        let degrees = (1..=window.nmax).map(|n| Bidegree::new(n, 0)).collect();
        let mut mult = HashMap::new();
        for i in 0..nmax {
            for j in 0..nmax - i {
                if i + j + 1 < nmax {
                    mult.insert((i, j), vec![(i + j + 1, field.one())]);
                }
            }
        }
        Self::new_trusted(field, window, labels, degrees, mult)
    }

    /// Zero multiplication on the given basis elements.
    pub fn trivial(field: FieldSpec, window: Window, gens: &GeneratorList) -> Result<Self, BarError> {
        let basis = gens.iter().filter(|g| window.contains(g.bidegree)).map(|g| (g.name.clone(), g.bidegree)).collect();
        Self::new(field, window, true, basis, Vec::new())
    }

    /// The free graded-commutative algebra on the generators, truncated to the window.
    pub fn free_graded_commutative(field: FieldSpec, window: Window, gens: &GeneratorList) -> Result<Self, BarError> {
        gens.require_positive_rank().map_err(|e| BarError::Invalid(e.to_string()))?;
        let g: Vec<(String, Bidegree, bool)> =
            gens.iter().map(|g| (g.name.clone(), g.bidegree, is_exterior(field, g.bidegree.d))).collect();
        // Exponent vectors in the window.
        let mut monos: Vec<Vec<u32>> = vec![vec![0; g.len()]];
        for (i, (_, b, ext)) in g.iter().enumerate() {
            let mut next = Vec::new();
            for m in &monos {
                let deg = mono_degree(m, &g);
                let mut e = 0;
                loop {
                    let mut m2 = m.clone();
                    m2[i] = e;
                    let d = Bidegree::new(deg.n + e * b.n, deg.d + e * b.d);
                    if !window.contains(d) || (*ext && e > 1) {
                        break;
                    }
                    next.push(m2);
                    e += 1;
                }
            }
            monos = next;
        }
        monos.retain(|m| m.iter().any(|&e| e > 0));
        monos.sort_by_key(|m| (mono_degree(m, &g), std::cmp::Reverse(m.clone())));
        let labels: Vec<String> = monos.iter().map(|m| mono_label(m, &g)).collect();
        let degrees: Vec<Bidegree> = monos.iter().map(|m| mono_degree(m, &g)).collect();
        let index: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let odd: Vec<bool> = g.iter().map(|(_, b, _)| b.d % 2 == 1).collect();
        let mut mult = HashMap::new();
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                let c: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let Some(&k) = index.get(&c) else { continue };
                // Sign of moving each odd letter of `b` past the later odd letters of `a`.
                let mut swaps = 0u32;
                for (t, &eb) in b.iter().enumerate() {
                    if odd[t] && eb > 0 {
                        swaps += eb * (t + 1..g.len()).filter(|&u| odd[u]).map(|u| a[u]).sum::<u32>();
                    }
                }
                mult.insert((i, j), vec![(k, field.sign(swaps as i64))]);
            }
        }
        Ok(Self::new_trusted(field, window, labels, degrees, mult))
    }

    /// The reduced free `W_{k-1}`-algebra on `gens`, truncated to the window.
    pub fn free_wk(gens: &GeneratorList, p: &WParams, window: Window) -> Result<Self, BarError> {
        let opts = BasisOptions { reduced: true, allow_rank0: false, monomials: true };
        let basis = enumerate_free_wk_basis(gens, p, window, opts)?;
        let field = p.field;
        let monos = basis.monomials;
        let labels: Vec<String> = monos.iter().map(|m| m.render(gens, field.characteristic())).collect();
        let degrees: Vec<Bidegree> =
            monos.iter().map(|m| m.bidegree().expect("basis monomials have degree >= 0")).collect();
        let index: HashMap<_, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut mult = HashMap::new();
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                if !window.contains(degrees[i] + degrees[j]) {
                    continue;
                }
                if let Some((s, c)) = a.mul(b, field) {
                    let k = *index
                        .get(&c)
                        .ok_or_else(|| BarError::Invalid("product outside the enumerated basis".into()))?;
                    mult.insert((i, j), vec![(k, field.sign(s))]);
                }
            }
        }
        let mut order: Vec<usize> = (0..monos.len()).collect();
        order.sort_by_key(|&i| (degrees[i], i));
        let a = Self::new_trusted(field, window, labels, degrees, mult);
        Ok(a.reordered(&order))
    }

    /// Re-indexes the basis so that position `t` holds old element `order[t]`.
    fn reordered(&self, order: &[usize]) -> Self {
        let mut inv = vec![0; order.len()];
        for (t, &i) in order.iter().enumerate() {
            inv[i] = t;
        }
        let mult = self
            .mult
            .iter()
            .map(|(&(a, b), v)| ((inv[a], inv[b]), v.iter().map(|(c, x)| (inv[*c], x.clone())).collect()))
            .collect();
        GradedAlgebraPresentation {
            field: self.field,
            window: self.window,
            unital: self.unital,
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            degrees: order.iter().map(|&i| self.degrees[i]).collect(),
            unit_label: self.unit_label.clone(),
            mult,
        }
    }
}

fn mono_degree(m: &[u32], g: &[(String, Bidegree, bool)]) -> Bidegree {
    m.iter().zip(g).fold(Bidegree::ZERO, |acc, (&e, (_, b, _))| Bidegree::new(acc.n + e * b.n, acc.d + e * b.d))
}

fn mono_label(m: &[u32], g: &[(String, Bidegree, bool)]) -> String {
    let parts: Vec<String> = m
        .iter()
        .zip(g)
        .filter(|(e, _)| **e > 0)
        .map(|(&e, (name, _, _))| if e == 1 { name.clone() } else { format!("{name}^{e}") })
        .collect();
    parts.join("*")
}
