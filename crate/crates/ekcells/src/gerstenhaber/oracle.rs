//! Brute-force dimensions of the free shifted Lie algebra.
//!
//! Every bracket tree of bounded weight is a formal symbol. The relations (signed
//! symmetry, signed Jacobi, `[x,x] = 0` in characteristic 2, `[x,[x,x]] = 0` in
//! characteristic 3) are imposed on all trees, closed under bracketing with trees on
//! either side, and the quotient is measured per multidegree by exact elimination.

use std::collections::BTreeMap;

use super::{Level, LieParams, LieTree};
use crate::bigraded::{Bidegree, GeneratorList};
use crate::exactlin::{Echelon, FieldSpec, Scalar, SparseVec};

type Multi = Vec<u32>;

struct Trees {
    by_multi: BTreeMap<Multi, Vec<LieTree>>,
    index: BTreeMap<Multi, BTreeMap<LieTree, usize>>,
}

fn sub_multis(m: &Multi) -> Vec<Multi> {
    // All a with 0 <= a <= m componentwise.
    let mut out = vec![Vec::new()];
    for &c in m {
        out = out
            .into_iter()
            .flat_map(|p: Multi| {
                (0..=c).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn minus(a: &Multi, b: &Multi) -> Multi {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn weight(m: &Multi) -> u32 {
    m.iter().sum()
}

fn build_trees(ngens: usize, max_weight: u32) -> Trees {
    let mut by_multi: BTreeMap<Multi, Vec<LieTree>> = BTreeMap::new();
    let mut multis: Vec<Multi> = Vec::new();
    // Enumerate multidegrees of weight 1..=max_weight in increasing weight.
    fn rec(i: usize, n: usize, left: u32, cur: &mut Multi, out: &mut Vec<Multi>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(i + 1, n, left - c, cur, out);
            cur.pop();
        }
    }
    rec(0, ngens, max_weight, &mut Vec::new(), &mut multis);
    multis.retain(|m| weight(m) >= 1);
    multis.sort_by_key(|m| (weight(m), m.clone()));
    for m in &multis {
        let mut trees = Vec::new();
        if weight(m) == 1 {
            trees.push(LieTree::Leaf(m.iter().position(|&c| c == 1).unwrap()));
        } else {
            for a in sub_multis(m) {
                let b = minus(m, &a);
                if weight(&a) == 0 || weight(&b) == 0 {
                    continue;
                }
                for x in &by_multi[&a] {
                    for y in &by_multi[&b] {
                        trees.push(LieTree::node(x.clone(), y.clone()));
                    }
                }
            }
        }
        by_multi.insert(m.clone(), trees);
    }
    let index = by_multi
        .iter()
        .map(|(m, ts)| (m.clone(), ts.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()))
        .collect();
    Trees { by_multi, index }
}

struct Ctx<'a> {
    gens: &'a GeneratorList,
    k: u32,
    field: FieldSpec,
    trees: Trees,
}

impl Ctx<'_> {
    fn deg(&self, t: &LieTree) -> i64 {
        t.bidegree(self.gens, self.k).d as i64
    }

    fn idx(&self, m: &Multi, t: &LieTree) -> usize {
        self.trees.index[m][t]
    }

    fn vec(&self, m: &Multi, terms: Vec<(LieTree, Scalar)>) -> SparseVec {
        let f = self.field;
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (t, c) in terms {
            let slot = acc.entry(self.idx(m, &t)).or_insert_with(|| f.zero());
            *slot = f.add(slot, &c);
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn multi_of(&self, t: &LieTree) -> Multi {
        let mut m = vec![0; self.gens.len()];
        for l in t.leaves() {
            m[l] += 1;
        }
        m
    }
}

/// Dimensions of the free shifted Lie algebra per bidegree, through `max_weight`.
pub fn brute_force_free_lie_dims(gens: &GeneratorList, p: LieParams, max_weight: u32) -> BTreeMap<Bidegree, u64> {
    let mut out = BTreeMap::new();
    let k = match p.k {
        Level::Infinite => {
            if max_weight >= 1 {
                for g in gens.iter() {
                    *out.entry(g.bidegree).or_insert(0) += 1;
                }
            }
            return out;
        }
        Level::Finite(k) => k,
    };
    if gens.is_empty() || max_weight == 0 {
        return out;
    }
    let ell = p.field.characteristic();
    let f = p.field;
    let ctx = Ctx { gens, k, field: f, trees: build_trees(gens.len(), max_weight) };
    let s = |e: i64| f.sign(e);
    let km1 = k as i64 - 1;
    let mut relations: BTreeMap<Multi, Vec<SparseVec>> = BTreeMap::new();

    let multis: Vec<Multi> = ctx.trees.by_multi.keys().cloned().collect();
    let mut ordered = multis.clone();
    ordered.sort_by_key(|m| (weight(m), m.clone()));
    for m in &ordered {
        let nt = ctx.trees.by_multi[m].len();
        let mut ech = Echelon::new(f);
        if weight(m) >= 2 {
            let subs: Vec<Multi> =
                sub_multis(m).into_iter().filter(|a| weight(a) >= 1 && weight(a) < weight(m)).collect();
            // Signed symmetry, and [x,x] = 0 in characteristic 2.
            for a in &subs {
                let b = minus(m, a);
                for x in &ctx.trees.by_multi[a] {
                    for y in &ctx.trees.by_multi[&b] {
                        let (dx, dy) = (ctx.deg(x), ctx.deg(y));
                        let sign = if ell == 2 { f.one() } else { s(dx * dy + 1 + km1 * (dx + dy + 1)) };
                        let xy = LieTree::node(x.clone(), y.clone());
                        let yx = LieTree::node(y.clone(), x.clone());
                        ech.insert(&ctx.vec(m, vec![(xy, f.one()), (yx, f.neg(&sign))]));
                        if ell == 2 && x == y {
                            ech.insert(&ctx.vec(m, vec![(LieTree::node(x.clone(), x.clone()), f.one())]));
                        }
                    }
                }
            }
            // Jacobi over ordered triples of sub-multidegrees.
            for a in &subs {
                let rest = minus(m, a);
                for b in sub_multis(&rest) {
                    let c = minus(&rest, &b);
                    if weight(&b) == 0 || weight(&c) == 0 {
                        continue;
                    }
                    for x in &ctx.trees.by_multi[a] {
                        for y in &ctx.trees.by_multi[&b] {
                            for z in &ctx.trees.by_multi[&c] {
                                let (dx, dy, dz) = (ctx.deg(x) + km1, ctx.deg(y) + km1, ctx.deg(z) + km1);
                                let (e1, e2, e3) = if ell == 2 { (0, 0, 0) } else { (dx * dz, dx * dy, dy * dz) };
                                let t1 = LieTree::node(x.clone(), LieTree::node(y.clone(), z.clone()));
                                let t2 = LieTree::node(y.clone(), LieTree::node(z.clone(), x.clone()));
                                let t3 = LieTree::node(z.clone(), LieTree::node(x.clone(), y.clone()));
                                ech.insert(&ctx.vec(m, vec![(t1, s(e1)), (t2, s(e2)), (t3, s(e3))]));
                            }
                        }
                    }
                }
            }
            // [x,[x,x]] = 0 in characteristic 3.
            if ell == 3 && m.iter().all(|c| c % 3 == 0) {
                let third: Multi = m.iter().map(|c| c / 3).collect();
                for x in &ctx.trees.by_multi[&third] {
                    let t = LieTree::node(x.clone(), LieTree::node(x.clone(), x.clone()));
                    ech.insert(&ctx.vec(m, vec![(t, f.one())]));
                }
            }
            // Ideal closure: bracket lower relations with trees on both sides.
            for a in &subs {
                let b = minus(m, a);
                let Some(rels) = relations.get(a) else { continue };
                let trees_a = &ctx.trees.by_multi[a];
                for r in rels {
                    for t in &ctx.trees.by_multi[&b] {
                        let left: Vec<(LieTree, Scalar)> =
                            r.iter().map(|(i, c)| (LieTree::node(t.clone(), trees_a[*i].clone()), c.clone())).collect();
                        let right: Vec<(LieTree, Scalar)> =
                            r.iter().map(|(i, c)| (LieTree::node(trees_a[*i].clone(), t.clone()), c.clone())).collect();
                        ech.insert(&ctx.vec(m, left));
                        ech.insert(&ctx.vec(m, right));
                    }
                }
            }
        }
        let dim = nt - ech.rank();
        if dim > 0 {
            let t0 = &ctx.trees.by_multi[m][0];
            debug_assert_eq!(&ctx.multi_of(t0), m);
            *out.entry(t0.bidegree(gens, k)).or_insert(0) += dim as u64;
        }
        relations.insert(m.clone(), ech.reduced_rows());
    }
    out
}
