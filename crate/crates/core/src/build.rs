//! S-ring constructors: transitivity modules, generated S-rings, quotients,
//! induced subrings, intersections, tensor and wedge products.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gfp::{AutMatrix, GroupContext, Subspace};
use crate::perm::{matrix_permutation, orbits, PermGroup};
use crate::sring::{classes_from_labels, SRing};

/// Orbits of `<gens>` on `H`.
pub fn transitivity_module(ctx: &GroupContext, gens: &[AutMatrix]) -> Result<SRing> {
    for m in gens {
        if m.dim() != ctx.n() {
            return Err(Error::DimensionMismatch { expected: ctx.n(), got: m.dim() });
        }
    }
    let perms: Vec<_> = gens.iter().map(|m| matrix_permutation(ctx, m)).collect();
    SRing::new(ctx, orbits(&perms, ctx.order()))
}

/// Orbits of the stabilizer of `0` in `g`, which must contain the translations.
pub fn stabilizer_sring(ctx: &GroupContext, g: &PermGroup) -> Result<SRing> {
    if g.degree() != ctx.order() {
        return Err(Error::DegreeMismatch { expected: ctx.order(), got: g.degree() });
    }
    SRing::new(ctx, g.stabilizer(0).orbits())
}

fn relabel<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut ids: BTreeMap<K, u32> = BTreeMap::new();
    for k in keys {
        let next = ids.len() as u32;
        ids.entry(k.clone()).or_insert(next);
    }
    keys.iter().map(|k| ids[k]).collect()
}

fn count_classes(labels: &[u32]) -> usize {
    let mut seen = labels.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// The coarsest S-ring whose partition refines `labels`.
///
/// Each round closes the partition under negation and then splits every
/// class by the full vector of convolution coefficients against all
/// current classes, until nothing changes.
pub fn stabilize(ctx: &GroupContext, labels: &[u32]) -> Result<SRing> {
    let n = ctx.order();
    if labels.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: labels.len() });
    }
    let zero_first: Vec<(bool, u32)> = labels.iter().enumerate().map(|(x, &l)| (x != 0, l)).collect();
    let mut cur = relabel(&zero_first);
    let mut count = count_classes(&cur);
    loop {
        let neg: Vec<(u32, u32)> = (0..n).map(|x| (cur[x], cur[ctx.neg(x)])).collect();
        let with_neg = relabel(&neg);
        let sigs: Vec<(u32, Vec<(u32, u32, u32)>)> = (0..n)
            .map(|z| {
                let mut pairs: Vec<(u32, u32)> = (0..n).map(|x| (with_neg[x], with_neg[ctx.sub(z, x)])).collect();
                pairs.sort_unstable();
                let mut runs: Vec<(u32, u32, u32)> = Vec::new();
                for (a, b) in pairs {
                    match runs.last_mut() {
                        Some(r) if r.0 == a && r.1 == b => r.2 += 1,
                        _ => runs.push((a, b, 1)),
                    }
                }
                (with_neg[z], runs)
            })
            .collect();
        let next = relabel(&sigs);
        let next_count = count_classes(&next);
        if next_count == count {
            return SRing::from_labels(ctx, &next);
        }
        cur = next;
        count = next_count;
    }
}

/// The smallest S-ring in which `set` is a union of basic sets. `0` is ignored.
pub fn generated_sring(ctx: &GroupContext, set: &[usize]) -> Result<SRing> {
    let mut inside = vec![false; ctx.order()];
    for &x in set {
        if x >= ctx.order() {
            return Err(Error::OutOfRange(format!("element {x}")));
        }
        if x != 0 {
            inside[x] = true;
        }
    }
    let labels: Vec<u32> = (0..ctx.order())
        .map(|x| if x == 0 { 0 } else { 1 + inside[x] as u32 + 2 * inside[ctx.neg(x)] as u32 })
        .collect();
    stabilize(ctx, &labels)
}

fn check_subgroup(a: &SRing, k: &Subspace) -> Result<()> {
    if k.ambient_dim() != a.ctx().n() {
        return Err(Error::ContextMismatch);
    }
    if !a.is_subring_subgroup(k) {
        return Err(Error::NotASubgroupOfRing);
    }
    Ok(())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Quotient by an S-ring subgroup `K`, over `Z_p^(n - dim K)` in the
/// coordinates of the non-pivot columns of `K`.
pub fn quotient_sring(a: &SRing, k: &Subspace) -> Result<SRing> {
    check_subgroup(a, k)?;
    let ctx = a.ctx();
    let qctx = GroupContext::new(ctx.p(), ctx.n() - k.dim())?;
    let mut uf = UnionFind::new(a.rank());
    let mut first_class = vec![usize::MAX; qctx.order()];
    for x in 0..ctx.order() {
        let q = qctx.index_of(&k.quotient_coords(&ctx.coords(x)));
        let c = a.class_of(x);
        if first_class[q] == usize::MAX {
            first_class[q] = c;
        } else {
            uf.union(first_class[q], c);
        }
    }
    let labels: Vec<usize> = first_class.iter().map(|&c| uf.find(c)).collect();
    SRing::from_labels(&qctx, &labels)
}

/// Restriction to an S-ring subgroup `K`, over `Z_p^(dim K)` in the
/// coordinates of the echelon basis of `K`.
pub fn induced_sring(a: &SRing, k: &Subspace) -> Result<SRing> {
    check_subgroup(a, k)?;
    let ctx = a.ctx();
    let kctx = GroupContext::new(ctx.p(), k.dim())?;
    let labels: Vec<usize> =
        (0..kctx.order()).map(|y| a.class_of(ctx.index_of(&k.from_coords(&kctx.coords(y))))).collect();
    SRing::from_labels(&kctx, &labels)
}

/// The S-ring `A ∩ B`: its classes are the minimal sets that are unions
/// of classes of both.
pub fn intersect_srings(a: &SRing, b: &SRing) -> Result<SRing> {
    if a.ctx() != b.ctx() {
        return Err(Error::ContextMismatch);
    }
    let mut uf = UnionFind::new(a.ctx().order());
    for c in a.classes().iter().chain(b.classes()) {
        for &x in &c[1..] {
            uf.union(c[0], x);
        }
    }
    let labels: Vec<usize> = (0..a.ctx().order()).map(|x| uf.find(x)).collect();
    SRing::from_labels(a.ctx(), &labels)
}

/// `A_E ⊗ A_F` for `H = E ⊕ F`; each factor lives over its subgroup's echelon coordinates.
pub fn tensor_sring(ae: &SRing, af: &SRing, e: &Subspace, f: &Subspace) -> Result<SRing> {
    let (pe, pf) = (ae.ctx().p(), af.ctx().p());
    if pe != pf || e.ambient_dim() != f.ambient_dim() {
        return Err(Error::ContextMismatch);
    }
    if ae.ctx().n() != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), got: ae.ctx().n() });
    }
    if af.ctx().n() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: af.ctx().n() });
    }
    if e.dim() + f.dim() != e.ambient_dim() || !e.intersection(f)?.is_trivial() {
        return Err(Error::NotDirectSum);
    }
    let ctx = GroupContext::new(pe, e.ambient_dim())?;
    let mut labels = vec![(0usize, 0usize); ctx.order()];
    for ei in 0..ae.ctx().order() {
        let ev = e.from_coords(&ae.ctx().coords(ei));
        for fi in 0..af.ctx().order() {
            let fv = f.from_coords(&af.ctx().coords(fi));
            let h: Vec<u32> = ev.iter().zip(&fv).map(|(a, b)| (a + b) % pe).collect();
            labels[ctx.index_of(&h)] = (ae.class_of(ei), af.class_of(fi));
        }
    }
    SRing::from_labels(&ctx, &labels)
}

/// The `E/F`-wreath product of `A_E` (over `E`, echelon coordinates) and
/// `A_Q` (over `H/F`, quotient coordinates of `F`).
pub fn wedge_sring(ae: &SRing, aq: &SRing, e: &Subspace, f: &Subspace) -> Result<SRing> {
    let p = ae.ctx().p();
    if aq.ctx().p() != p || e.ambient_dim() != f.ambient_dim() {
        return Err(Error::ContextMismatch);
    }
    let n = e.ambient_dim();
    if ae.ctx().n() != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), got: ae.ctx().n() });
    }
    if aq.ctx().n() != n - f.dim() {
        return Err(Error::DimensionMismatch { expected: n - f.dim(), got: aq.ctx().n() });
    }
    if !e.contains_subspace(f)? {
        return Err(Error::Compatibility("F is not contained in E".into()));
    }
    let ctx = GroupContext::new(p, n)?;
    let (ectx, qctx) = (ae.ctx(), aq.ctx());
    let f_in_e: Vec<usize> = f.basis().iter().map(|r| ectx.index_of(&e.coords_of(r).expect("F inside E"))).collect();
    let f_local = crate::gfp::span_of_indices(ectx, &f_in_e);
    if !ae.is_subring_subgroup(&f_local) {
        return Err(Error::Compatibility("F is not an S-ring subgroup of A_E".into()));
    }
    let e_mod_f = e.image_in_quotient(f);
    if !aq.is_subring_subgroup(&e_mod_f) {
        return Err(Error::Compatibility("E/F is not an S-ring subgroup of A_Q".into()));
    }
    // partition of E/F induced by A_E, compared with the one induced by A_Q
    let q_of_local = |y: usize| qctx.index_of(&f.quotient_coords(&e.from_coords(&ectx.coords(y))));
    let mut uf = UnionFind::new(ae.rank());
    let mut first = vec![usize::MAX; qctx.order()];
    for y in 0..ectx.order() {
        let q = q_of_local(y);
        let c = ae.class_of(y);
        if first[q] == usize::MAX {
            first[q] = c;
        } else {
            uf.union(first[q], c);
        }
    }
    let points = e_mod_f.elements(qctx);
    let from_e: Vec<usize> = points.iter().map(|&q| uf.find(first[q])).collect();
    let from_q: Vec<usize> = points.iter().map(|&q| aq.class_of(q)).collect();
    let (pe, pq) = (classes_from_labels(&from_e), classes_from_labels(&from_q));
    if pe != pq {
        let bad = pq.iter().find(|c| !pe.contains(c)).expect("partitions differ");
        let members: Vec<usize> = bad.iter().map(|&i| points[i]).collect();
        return Err(Error::Compatibility(format!("class {members:?} of A_Q on E/F is not a quotient class of A_E")));
    }
    let labels: Vec<(bool, usize)> = (0..ctx.order())
        .map(|h| {
            let v = ctx.coords(h);
            match e.coords_of(&v) {
                Some(c) => (false, ae.class_of(ectx.index_of(&c))),
                None => (true, aq.class_of(qctx.index_of(&f.quotient_coords(&v)))),
            }
        })
        .collect();
    SRing::from_labels(&ctx, &labels)
}

/// `A_E ≀ A_{H/E}`.
pub fn wreath_sring(ae: &SRing, aq: &SRing, e: &Subspace) -> Result<SRing> {
    wedge_sring(ae, aq, e, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfp::span_of_indices;

    fn ctx(p: u32, n: usize) -> GroupContext {
        GroupContext::new(p, n).unwrap()
    }

    fn jordan(c: &GroupContext) -> AutMatrix {
        AutMatrix::new(c, vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]).unwrap()
    }

    fn ll_pair(c: &GroupContext) -> Vec<AutMatrix> {
        let unit = |i: usize| (0..5).map(|j| (i == j) as u32).collect::<Vec<u32>>();
        let add = |i: usize, j: usize| {
            let mut r = unit(i);
            r[j] = 1;
            r
        };
        let x = vec![add(0, 2), add(1, 3), unit(2), unit(3), unit(4)];
        let y = vec![add(0, 3), add(1, 4), unit(2), unit(3), unit(4)];
        vec![AutMatrix::new(c, x).unwrap(), AutMatrix::new(c, y).unwrap()]
    }

    fn qc3_wr_qc3() -> SRing {
        let c = ctx(3, 2);
        let k = span_of_indices(&c, &[1]);
        wreath_sring(&SRing::discrete(&ctx(3, 1)), &SRing::discrete(&ctx(3, 1)), &k).unwrap()
    }

    #[test]
    fn transitivity_modules() {
        let c = ctx(3, 3);
        assert_eq!(transitivity_module(&c, &[]).unwrap(), SRing::discrete(&c));
        let e = transitivity_module(&c, &[jordan(&c)]).unwrap();
        assert_eq!(e.rank(), 11);
        assert_eq!(e.size_multiset(), vec![(1, 3), (3, 8)]);
        let c5 = ctx(3, 5);
        let ll = transitivity_module(&c5, &ll_pair(&c5)).unwrap();
        assert_eq!(ll.rank(), 51);
        assert_eq!(ll.size_multiset(), vec![(1, 27), (9, 24)]);
    }

    #[test]
    fn generated_examples() {
        let c = ctx(3, 2);
        let all: Vec<usize> = (1..9).collect();
        assert_eq!(generated_sring(&c, &all).unwrap(), SRing::trivial(&c));
        let g = generated_sring(&c, &[1]).unwrap();
        assert_eq!(g.classes(), &[vec![0], vec![1], vec![2], vec![3, 4, 5, 6, 7, 8]]);
        let c3 = ctx(3, 3);
        let e = transitivity_module(&c3, &[jordan(&c3)]).unwrap();
        let t = e.class(e.class_of(1)).unwrap().to_vec();
        let g = generated_sring(&c3, &t).unwrap();
        assert_eq!(g.rank(), 10);
        assert!(e.refines(&g));
        let mut t2 = t.clone();
        t2.extend(e.class(e.class_of(3)).unwrap());
        assert_eq!(generated_sring(&c3, &t2).unwrap(), e);
        assert_eq!(generated_sring(&c3, &[0]).unwrap(), SRing::trivial(&c3));
    }

    #[test]
    fn quotient_examples() {
        let c = ctx(3, 3);
        let k = span_of_indices(&c, &[1]);
        let q = quotient_sring(&SRing::discrete(&c), &k).unwrap();
        assert_eq!(q, SRing::discrete(&ctx(3, 2)));
        let w = qc3_wr_qc3();
        let kk = span_of_indices(w.ctx(), &[1]);
        assert_eq!(quotient_sring(&w, &kk).unwrap(), SRing::discrete(&ctx(3, 1)));
        let e = transitivity_module(&c, &[jordan(&c)]).unwrap();
        let thin = e.thin_radical().unwrap();
        let qe = quotient_sring(&e, &thin).unwrap();
        assert_eq!(qe.rank(), 5);
        assert_eq!(qe.size_multiset(), vec![(1, 3), (3, 2)]);
        assert_eq!(quotient_sring(&e, &k), Err(Error::NotASubgroupOfRing));
    }

    #[test]
    fn induced_and_intersection() {
        let w = qc3_wr_qc3();
        let k = span_of_indices(w.ctx(), &[1]);
        assert_eq!(induced_sring(&w, &k).unwrap(), SRing::discrete(&ctx(3, 1)));
        assert_eq!(intersect_srings(&w, &w).unwrap(), w);
        let c = w.ctx().clone();
        assert_eq!(intersect_srings(&SRing::discrete(&c), &w).unwrap(), w);
        assert_eq!(intersect_srings(&w, &SRing::trivial(&c)).unwrap(), SRing::trivial(&c));
        assert_eq!(intersect_srings(&w, &SRing::discrete(&ctx(3, 3))), Err(Error::ContextMismatch));
    }

    #[test]
    fn tensor_examples() {
        let c = ctx(3, 3);
        let e = span_of_indices(&c, &[1, 3]);
        let f = span_of_indices(&c, &[9]);
        let q1 = SRing::discrete(&ctx(3, 1));
        let t = tensor_sring(&SRing::discrete(&ctx(3, 2)), &q1, &e, &f).unwrap();
        assert_eq!(t, SRing::discrete(&c));
        let t = tensor_sring(&qc3_wr_qc3(), &q1, &e, &f).unwrap();
        assert_eq!(t.rank(), 15);
        let t = tensor_sring(&qc3_wr_qc3(), &SRing::trivial(&ctx(3, 1)), &e, &f).unwrap();
        assert_eq!(t.rank(), 10);
        let bad = span_of_indices(&c, &[1]);
        assert_eq!(tensor_sring(&qc3_wr_qc3(), &q1, &e, &bad), Err(Error::NotDirectSum));
    }

    #[test]
    fn wedge_examples() {
        let c = ctx(3, 3);
        let q1 = SRing::discrete(&ctx(3, 1));
        let k = span_of_indices(&c, &[1]);
        let e2 = span_of_indices(&c, &[1, 3]);
        let w3 = wreath_sring(&qc3_wr_qc3(), &q1, &e2).unwrap();
        assert_eq!(w3.rank(), 7);
        let w = wreath_sring(&SRing::discrete(&ctx(3, 2)), &q1, &e2).unwrap();
        assert_eq!(w.rank(), 11);
        assert_eq!(w.size_multiset(), vec![(1, 9), (9, 2)]);
        let w = wreath_sring(&q1, &SRing::discrete(&ctx(3, 2)), &k).unwrap();
        assert_eq!(w.size_multiset(), vec![(1, 3), (3, 8)]);
        let full = Subspace::full(&c);
        let zero = Subspace::trivial(&c);
        let e = transitivity_module(&c, &[jordan(&c)]).unwrap();
        assert_eq!(wedge_sring(&e, &e, &full, &zero).unwrap(), e);
        // proper E/F-wreath: E of order 9, F of order 3
        let aq = quotient_sring(&w3, &k).unwrap();
        let ae = induced_sring(&w3, &e2).unwrap();
        assert_eq!(wedge_sring(&ae, &aq, &e2, &k).unwrap(), w3);
        let err = wedge_sring(&SRing::discrete(&ctx(3, 2)), &SRing::trivial(&ctx(3, 2)), &e2, &k).unwrap_err();
        assert!(matches!(err, Error::Compatibility(_)));
    }
}
