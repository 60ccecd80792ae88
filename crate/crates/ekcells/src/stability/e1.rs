//! Cell lists, filtered E^1-pages of skeletal filtrations, and propagation of
//! differentials through products and Dyer-Lashof operations.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::cdga::free_gca_trigraded;
use super::StabilityError;
use crate::bigraded::{Generator, GeneratorList, HilbertTable, Trigrade, Window};
use crate::dyer_lashof::{admissible_generators, apply_letter, AdmissibleGenerator, Factor, Letter, WElement, WParams};

/// A cell `S^{n,d}` attached in filtration `filtration`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    pub n: u32,
    pub d: u32,
    /// Defaults to `d`, the skeletal convention.
    #[serde(default)]
    pub filtration: Option<u32>,
}

impl Cell {
    pub fn new(label: impl Into<String>, n: u32, d: u32, filtration: u32) -> Self {
        Cell { label: label.into(), n, d, filtration: Some(filtration) }
    }

    /// A cell in its skeletal filtration `d`.
    pub fn skeletal(label: impl Into<String>, n: u32, d: u32) -> Self {
        Cell { label: label.into(), n, d, filtration: None }
    }

    pub fn filtration(&self) -> u32 {
        self.filtration.unwrap_or(self.d)
    }

    pub fn trigrade(&self) -> Trigrade {
        Trigrade::new(self.n, self.d, self.filtration() as i64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellList {
    pub cells: Vec<Cell>,
}

impl CellList {
    pub fn new(cells: Vec<Cell>) -> Self {
        CellList { cells }
    }

    pub fn from_json(text: &str) -> Result<Self, StabilityError> {
        serde_json::from_str(text).map_err(|e| StabilityError::Parse(e.to_string()))
    }

    pub fn generator_list(&self) -> Result<GeneratorList, StabilityError> {
        Ok(GeneratorList::new(self.cells.iter().map(|c| Generator::new(c.label.clone(), c.n, c.d)).collect())?)
    }
}

/// Filtration of `Q^I(y)`: the summed cell filtrations of `y`, times `ell` per letter.
pub(crate) fn generator_filtration(g: &AdmissibleGenerator, cells: &CellList, ell: u64) -> i64 {
    let base: i64 = g.word.tree.leaves().iter().map(|&i| cells.cells[i].filtration() as i64).sum();
    base * (ell.max(1) as i64).pow(g.index.len() as u32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E1Generator {
    pub label: String,
    pub trigrade: Trigrade,
}

/// Trigraded dimensions `(n, total degree, filtration)` of an E^1-page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E1Page {
    pub window: Window,
    pub table: BTreeMap<Trigrade, u64>,
    pub generators: Vec<E1Generator>,
}

impl E1Page {
    /// Dimensions summed over the filtration.
    pub fn bigraded(&self) -> HilbertTable {
        let mut t = HilbertTable::empty(self.window);
        for (g, v) in &self.table {
            t.add(g.bidegree(), *v);
        }
        t
    }

    /// CSV with columns `n,d,q,dim`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,d,q,dim\n");
        for (t, v) in &self.table {
            out.push_str(&format!("{},{},{},{}\n", t.n, t.d, t.q, v));
        }
        out
    }
}

/// The E^1-page of the skeletal filtration of a cellular algebra: the free `W_{k-1}`-algebra on the cells.
pub fn filtered_e1_page(cells: &CellList, p: &WParams, w: Window) -> Result<E1Page, StabilityError> {
    if let Some(c) = cells.cells.iter().find(|c| c.n == 0) {
        return Err(StabilityError::CellConstraint(format!("cell `{}` has rank 0", c.label)));
    }
    let gens = cells.generator_list()?;
    let ell = p.ell();
    let generators: Vec<E1Generator> = admissible_generators(&gens, p, w)?
        .iter()
        .map(|g| E1Generator {
            label: g.render(&gens, ell),
            trigrade: Trigrade::new(g.bidegree.n, g.bidegree.d, generator_filtration(g, cells, ell)),
        })
        .collect();
    let table = free_gca_trigraded(generators.iter().map(|g| g.trigrade), p.field, w);
    Ok(E1Page { window: w, table, generators })
}

/// What is known about an induced differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Image {
    Known(WElement),
    /// A bracket expression outside the normalized monomial basis.
    Symbolic(String),
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagatedDifferential {
    pub class: WElement,
    pub description: String,
    pub image: Image,
    pub page: u32,
}

/// Applies a differential given on factors to an element by the signed Leibniz rule.
///
/// Factors missing from `d` are cycles.
pub fn leibniz(e: &WElement, d: &HashMap<Factor, WElement>) -> WElement {
    let field = e.field();
    let mut out = WElement::zero(field);
    for (m, c) in e.terms() {
        let instances: Vec<&Factor> =
            m.factors().iter().flat_map(|(f, k)| std::iter::repeat(f).take(*k as usize)).collect();
        for j in 0..instances.len() {
            let Some(df) = d.get(instances[j]) else { continue };
            let mut term = WElement::one(field);
            let mut sign = 0i64;
            for (i, f) in instances.iter().enumerate() {
                let piece = if i == j { df.clone() } else { WElement::factor(field, (*f).clone()) };
                if i < j {
                    sign += f.degree;
                }
                term = term.mul(&piece);
            }
            out.add_scaled(&term, &field.mul(c, &field.sign(sign)));
        }
    }
    out
}

/// Differentials induced by `d^r(x) = dx` on `x^2`, on `Q^s x` and `beta Q^s x`, and on
/// products with the given cycles. Brackets are not expanded in the monomial basis.
///
/// `x` must be a single factor. For `k = inf` the Dyer-Lashof rules give `d^{ell r}`;
/// for finite `k` only the top operation at `ell = 2` has a known rule (`d^r xi(x) = [dx, x]`),
/// and other operations are reported as unknown.
pub fn propagate_differential(
    x: &Factor,
    dx: &WElement,
    r: u32,
    cycles: &[Factor],
    p: &WParams,
    w: Window,
) -> Result<Vec<PropagatedDifferential>, StabilityError> {
    let field = p.field;
    let ell = p.ell();
    let xe = WElement::factor(field, x.clone());
    let mut out = Vec::new();
    if ell == 0 && !x.index.is_empty() {
        return Err(crate::dyer_lashof::DlError::RationalLetters.into());
    }
    let dx = if ell == 0 { dx.clone() } else { crate::dyer_lashof::adem_rewrite(dx, p)? };
    let d = HashMap::from([(x.clone(), dx.clone())]);
    let x_deg = x.degree;

    let square = xe.mul(&xe);
    if !square.is_zero() {
        out.push(PropagatedDifferential {
            class: square.clone(),
            description: "x^2".into(),
            image: Image::Known(leibniz(&square, &d)),
            page: r,
        });
    }
    for z in cycles {
        let prod = xe.mul(&WElement::factor(field, z.clone()));
        if prod.is_zero() {
            continue;
        }
        out.push(PropagatedDifferential {
            class: prod.clone(),
            description: "x*z".into(),
            image: Image::Known(leibniz(&prod, &d)),
            page: r,
        });
    }
    if ell == 0 {
        return Ok(out);
    }
    let Some(xb) = Factor::bidegree(x) else { return Ok(out) };
    let top = p.k.finite().map(|k| x_deg + k as i64 - 1);
    let betas: &[bool] = if ell == 2 { &[false] } else { &[false, true] };
    for &beta in betas {
        for s in 0.. {
            let l = Letter { beta, s };
            let deg = x_deg + l.shift(ell);
            if deg > w.dmax as i64 || xb.n as u64 * ell > w.nmax as u64 {
                break;
            }
            let weight = if ell == 2 { s } else { 2 * s };
            if top.is_some_and(|t| weight > t) {
                break;
            }
            let class = apply_letter(l, &xe, p)?;
            if class.is_zero() {
                continue;
            }
            let page = ell as u32 * r;
            let description = format!("{}(x)", l);
            let image = match top {
                None => {
                    let img = apply_letter(l, &dx, p)?;
                    Image::Known(if beta { img.scale(&field.from_i64(-1)) } else { img })
                }
                Some(t) if ell == 2 && weight == t => Image::Symbolic("[dx,x]".into()),
                Some(_) => Image::Unknown("the E_k rule for this operation is not stated".into()),
            };
            let page = if matches!(image, Image::Symbolic(_)) { r } else { page };
            out.push(PropagatedDifferential { class, description, image, page });
        }
    }
    Ok(out)
}
