//! The S-ring type, axiom checking and intrinsic invariants.

use std::collections::BTreeMap;

use crate::error::{AxiomViolation, Error, Result};
use crate::gfp::{enumerate_all_subspaces, enumerate_subspaces, span_of_indices, GroupContext, Subspace};
use crate::search::PairColoring;

/// A partition of `H` into basic sets satisfying the S-ring axioms.
///
/// Classes are sorted, and ordered by least element, so the class of `0`
/// is always class `0` and two equal S-rings are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SRing {
    ctx: GroupContext,
    class_of: Vec<u32>,
    classes: Vec<Vec<usize>>,
}

/// Sorts classes and orders them by least element.
pub(crate) fn canonical_classes(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    classes.retain(|c| !c.is_empty());
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

/// Groups elements by label into canonical classes.
pub(crate) fn classes_from_labels<L: Ord + Clone>(labels: &[L]) -> Vec<Vec<usize>> {
    let mut map: BTreeMap<L, Vec<usize>> = BTreeMap::new();
    for (x, l) in labels.iter().enumerate() {
        map.entry(l.clone()).or_default().push(x);
    }
    canonical_classes(map.into_values().collect())
}

fn class_table(order: usize, classes: &[Vec<usize>]) -> std::result::Result<Vec<u32>, AxiomViolation> {
    let mut class_of = vec![u32::MAX; order];
    for (i, c) in classes.iter().enumerate() {
        if c.is_empty() {
            return Err(AxiomViolation::NotAPartition(format!("class {i} is empty")));
        }
        for &x in c {
            if x >= order {
                return Err(AxiomViolation::NotAPartition(format!("element {x} is outside the group")));
            }
            if class_of[x] != u32::MAX {
                return Err(AxiomViolation::NotAPartition(format!("element {x} occurs twice")));
            }
            class_of[x] = i as u32;
        }
    }
    if let Some(x) = class_of.iter().position(|&c| c == u32::MAX) {
        return Err(AxiomViolation::NotAPartition(format!("element {x} is missing")));
    }
    Ok(class_of)
}

/// Checks the three S-ring axioms, reporting the first one that fails.
/// Class numbers in the report refer to positions in `partition`.
pub fn verify_sring(ctx: &GroupContext, partition: &[Vec<usize>]) -> std::result::Result<(), AxiomViolation> {
    let class_of = class_table(ctx.order(), partition)?;
    let zero = &partition[class_of[0] as usize];
    if zero.len() != 1 {
        return Err(AxiomViolation::IdentityClass);
    }
    for (i, c) in partition.iter().enumerate() {
        let j = class_of[ctx.neg(c[0])];
        let target = &partition[j as usize];
        if target.len() != c.len() || c.iter().any(|&x| class_of[ctx.neg(x)] != j) {
            let mut negated: Vec<usize> = c.iter().map(|&x| ctx.neg(x)).collect();
            negated.sort_unstable();
            return Err(AxiomViolation::InverseClosure { class: i, negated });
        }
    }
    let mut counts = vec![0u32; ctx.order()];
    for (i, a) in partition.iter().enumerate() {
        for (j, b) in partition.iter().enumerate() {
            counts.iter_mut().for_each(|c| *c = 0);
            for &x in a {
                for &y in b {
                    counts[ctx.add(x, y)] += 1;
                }
            }
            for (k, t) in partition.iter().enumerate() {
                let first = counts[t[0]];
                if let Some(&z) = t.iter().find(|&&z| counts[z] != first) {
                    return Err(AxiomViolation::Convolution {
                        left: i,
                        right: j,
                        target: k,
                        witness_a: t[0],
                        witness_b: z,
                        count_a: first,
                        count_b: counts[z],
                    });
                }
            }
        }
    }
    Ok(())
}

impl SRing {
    /// Verifies `partition` and stores it in canonical order.
    pub fn new(ctx: &GroupContext, partition: Vec<Vec<usize>>) -> Result<Self> {
        verify_sring(ctx, &partition)?;
        Ok(Self::from_canonical(ctx, canonical_classes(partition)))
    }

    pub fn from_labels<L: Ord + Clone>(ctx: &GroupContext, labels: &[L]) -> Result<Self> {
        if labels.len() != ctx.order() {
            return Err(Error::DimensionMismatch { expected: ctx.order(), got: labels.len() });
        }
        Self::new(ctx, classes_from_labels(labels))
    }

    /// For partitions already known to satisfy the axioms.
    pub(crate) fn from_canonical(ctx: &GroupContext, classes: Vec<Vec<usize>>) -> Self {
        let class_of = class_table(ctx.order(), &classes).expect("a partition");
        Self { ctx: ctx.clone(), class_of, classes }
    }

    /// The full group algebra: every element is its own class.
    pub fn discrete(ctx: &GroupContext) -> Self {
        Self::from_canonical(ctx, (0..ctx.order()).map(|x| vec![x]).collect())
    }

    /// `{0}` and everything else.
    pub fn trivial(ctx: &GroupContext) -> Self {
        let classes = if ctx.order() == 1 { vec![vec![0]] } else { vec![vec![0], (1..ctx.order()).collect()] };
        Self::from_canonical(ctx, classes)
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> Result<&[usize]> {
        self.classes.get(id).map(Vec::as_slice).ok_or(Error::InvalidClass(id))
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.class_of
    }

    /// `(size, multiplicity)` pairs in increasing size.
    pub fn size_multiset(&self) -> Vec<(usize, usize)> {
        let mut m: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &self.classes {
            *m.entry(c.len()).or_default() += 1;
        }
        m.into_iter().collect()
    }

    pub fn is_union_of_classes(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.ctx.order()];
        for &x in set {
            inside[x] = true;
        }
        set.iter().all(|&x| self.classes[self.class_of(x)].iter().all(|&y| inside[y]))
    }

    pub fn is_subring_subgroup(&self, k: &Subspace) -> bool {
        self.is_union_of_classes(&k.elements(&self.ctx))
    }

    /// Whether every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &SRing) -> bool {
        self.ctx == coarser.ctx
            && self.classes.iter().all(|c| c.iter().all(|&x| coarser.class_of(x) == coarser.class_of(c[0])))
    }

    /// Pairs `(u, v)` colored by the class of `v - u`.
    pub fn pair_coloring(&self) -> PairColoring {
        let ctx = &self.ctx;
        PairColoring::from_fn(ctx.order(), |u, v| self.class_of[ctx.sub(v, u)])
    }

    /// Coefficient of class `k` in the product of classes `i` and `j`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Result<u32> {
        self.class(j)?;
        let (a, z) = (self.class(i)?, self.class(k)?[0]);
        Ok(a.iter().filter(|&&x| self.class_of(self.ctx.sub(z, x)) == j).count() as u32)
    }

    /// Union of the singleton classes.
    pub fn thin_radical(&self) -> Result<Subspace> {
        let thin: Vec<usize> = self.classes.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        let span = span_of_indices(&self.ctx, &thin);
        if span.order() != thin.len() {
            return Err(Error::Corrupted("singleton classes do not form a subgroup".into()));
        }
        Ok(span)
    }

    /// Every subgroup of `H` that is a union of classes, in canonical order.
    pub fn a_subgroups(&self) -> Result<Vec<Subspace>> {
        Ok(enumerate_all_subspaces(&self.ctx)?.into_iter().filter(|k| self.is_subring_subgroup(k)).collect())
    }

    /// Number of S-ring subgroups of each dimension `0..=n`.
    pub fn subgroup_counts(&self) -> Result<Vec<usize>> {
        let mut out = vec![0; self.ctx.n() + 1];
        for k in self.a_subgroups()? {
            out[k.dim()] += 1;
        }
        Ok(out)
    }

    pub fn is_p_sring(&self) -> bool {
        let p = self.ctx.p() as usize;
        self.classes.iter().all(|c| {
            let mut m = c.len();
            while m % p == 0 {
                m /= p;
            }
            m == 1
        })
    }

    /// `{0} = H_0 < H_1 < .. < H_n = H`, each an S-ring subgroup of index `p`
    /// in the next, choosing the least candidate in canonical order.
    pub fn subgroup_chain(&self) -> Result<Vec<Subspace>> {
        if !self.is_p_sring() {
            return Err(Error::NotPSring);
        }
        let mut chain = vec![Subspace::trivial(&self.ctx)];
        for d in 1..=self.ctx.n() {
            let cur = chain.last().expect("nonempty");
            let next = enumerate_subspaces(&self.ctx, d)?
                .into_iter()
                .find(|k| k.contains_subspace(cur).unwrap_or(false) && self.is_subring_subgroup(k))
                .ok_or_else(|| Error::Corrupted(format!("no S-ring subgroup of dimension {d} above {cur}")))?;
            chain.push(next);
        }
        Ok(chain)
    }

    /// The constant value of `|(K + h) ∩ T|` over `h` in class `t`.
    pub fn coset_intersection_profile(&self, k: &Subspace, t: usize) -> Result<usize> {
        k.check_ctx(&self.ctx)?;
        if !self.is_subring_subgroup(k) {
            return Err(Error::NotASubgroupOfRing);
        }
        let class = self.class(t)?;
        let mut value = None;
        for &h in class {
            let key = k.reduce(&self.ctx.coords(h));
            let c = class.iter().filter(|&&x| k.reduce(&self.ctx.coords(x)) == key).count();
            match value {
                None => value = Some(c),
                Some(v) if v != c => {
                    return Err(Error::NonConstantProfile(format!("class {t}: {v} vs {c} at element {h}")))
                }
                _ => {}
            }
        }
        Ok(value.expect("classes are nonempty"))
    }

    /// The class `{k t : t in T}`, if it is one.
    pub fn scaled_class(&self, t: usize, k: u32) -> Result<Option<usize>> {
        let class = self.class(t)?;
        let j = self.class_of(self.ctx.scale(k, class[0]));
        let ok =
            self.classes[j].len() == class.len() && class.iter().all(|&x| self.class_of(self.ctx.scale(k, x)) == j);
        Ok(ok.then_some(j))
    }
}

/// `{h : h + S = S}`; the whole group for empty `S`.
pub fn radical(ctx: &GroupContext, set: &[usize]) -> Subspace {
    if set.is_empty() {
        return Subspace::full(ctx);
    }
    let mut inside = vec![false; ctx.order()];
    for &x in set {
        inside[x] = true;
    }
    let s0 = set[0];
    let rad: Vec<usize> =
        set.iter().map(|&s| ctx.sub(s, s0)).filter(|&h| set.iter().all(|&x| inside[ctx.add(x, h)])).collect();
    span_of_indices(ctx, &rad)
}

/// The subgroup generated by `set`.
pub fn span_subgroup(ctx: &GroupContext, set: &[usize]) -> Subspace {
    span_of_indices(ctx, set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: usize) -> GroupContext {
        GroupContext::new(p, n).unwrap()
    }

    /// `Q C_3 ≀ Q C_3` over `Z_3^2` with `K` the first coordinate axis.
    fn small_wreath() -> SRing {
        let c = ctx(3, 2);
        SRing::new(&c, vec![vec![0], vec![1], vec![2], vec![3, 4, 5], vec![6, 7, 8]]).unwrap()
    }

    /// Orbits of the unipotent Jordan block on `Z_3^3`, computed by hand.
    fn exceptional() -> SRing {
        let c = ctx(3, 3);
        let x = |i: usize| {
            let v = c.coords(i);
            c.index_of(&[v[0], (v[0] + v[1]) % 3, (v[1] + v[2]) % 3])
        };
        let mut label = vec![usize::MAX; 27];
        for s in 0..27 {
            if label[s] == usize::MAX {
                let mut y = s;
                while label[y] == usize::MAX {
                    label[y] = s;
                    y = x(y);
                }
            }
        }
        SRing::from_labels(&c, &label).unwrap()
    }

    #[test]
    fn verify_examples() {
        let c = ctx(3, 2);
        assert!(verify_sring(&c, &SRing::discrete(&c).classes).is_ok());
        assert!(verify_sring(&c, &SRing::trivial(&c).classes).is_ok());
        let bad = vec![vec![0], vec![1], (2..9).collect()];
        assert!(matches!(verify_sring(&c, &bad), Err(AxiomViolation::InverseClosure { .. })));
        let no_zero = vec![vec![0, 1, 2], (3..9).collect()];
        assert_eq!(verify_sring(&c, &no_zero), Err(AxiomViolation::IdentityClass));
        let missing = vec![vec![0], (1..8).collect()];
        assert!(matches!(verify_sring(&c, &missing), Err(AxiomViolation::NotAPartition(_))));
        // every inverse-closed partition of Z_3^2 is a union of lines, hence valid
        let lines = vec![vec![0], vec![1, 2], vec![3, 6, 4, 8], vec![5, 7]];
        assert!(verify_sring(&c, &lines).is_ok());
        let c3 = ctx(3, 3);
        let rest: Vec<usize> = (1..27).filter(|x| ![1, 2, 3, 6].contains(x)).collect();
        let conv_bad = vec![vec![0], vec![1, 2], vec![3, 6], rest];
        assert!(matches!(verify_sring(&c3, &conv_bad), Err(AxiomViolation::Convolution { left: 1, right: 2, .. })));
    }

    #[test]
    fn structure_constants() {
        let c = ctx(3, 1);
        let a = SRing::trivial(&c);
        assert_eq!(a.structure_constant(1, 1, 0).unwrap(), 2);
        assert_eq!(a.structure_constant(1, 1, 1).unwrap(), 1);
        let q = SRing::discrete(&c);
        assert_eq!(q.structure_constant(1, 1, 2).unwrap(), 1);
        assert_eq!(q.structure_constant(1, 1, 0).unwrap(), 0);
        assert_eq!(a.structure_constant(0, 0, 5), Err(Error::InvalidClass(5)));
    }

    #[test]
    fn radical_examples() {
        let c = ctx(3, 3);
        let k = span_of_indices(&c, &[1, 3]);
        let coset: Vec<usize> = k.elements(&c).iter().map(|&x| c.add(x, 9)).collect();
        assert_eq!(radical(&c, &coset), k);
        assert!(radical(&c, &[5]).is_trivial());
        let e = exceptional();
        assert!(radical(&c, e.class(e.class_of(1)).unwrap()).is_trivial());
        assert_eq!(span_subgroup(&c, e.class(e.class_of(1)).unwrap()).dim(), 3);
    }

    #[test]
    fn thin_radical_examples() {
        let c = ctx(3, 3);
        assert!(SRing::discrete(&c).thin_radical().unwrap().is_full());
        assert!(SRing::trivial(&c).thin_radical().unwrap().is_trivial());
        let e = exceptional();
        assert_eq!(e.rank(), 11);
        assert_eq!(e.thin_radical().unwrap().order(), 3);
    }

    #[test]
    fn subgroup_examples() {
        let c = ctx(3, 3);
        assert_eq!(SRing::discrete(&c).a_subgroups().unwrap().len(), 28);
        assert_eq!(small_wreath().a_subgroups().unwrap().len(), 3);
        let e = exceptional();
        let subs = e.a_subgroups().unwrap();
        assert_eq!(subs.len(), 4);
        assert_eq!(e.subgroup_chain().unwrap(), {
            let mut s = subs.clone();
            s.sort_by_key(Subspace::dim);
            s
        });
        assert!(!SRing::trivial(&c).is_p_sring());
        assert_eq!(SRing::trivial(&c).subgroup_chain(), Err(Error::NotPSring));
        assert_eq!(SRing::discrete(&c).subgroup_chain().unwrap().len(), 4);
    }

    #[test]
    fn coset_profiles() {
        let e = exceptional();
        let c = e.ctx().clone();
        let w = e.thin_radical().unwrap();
        let t = e.class_of(1);
        assert_eq!(e.coset_intersection_profile(&w, t).unwrap(), 1);
        assert_eq!(e.coset_intersection_profile(&w, 0).unwrap(), 1);
        let full = Subspace::full(&c);
        assert_eq!(e.coset_intersection_profile(&full, t).unwrap(), 3);
        let line = span_of_indices(&c, &[1]);
        assert_eq!(e.coset_intersection_profile(&line, t), Err(Error::NotASubgroupOfRing));
    }

    #[test]
    fn multipliers_permute_classes() {
        let e = exceptional();
        for t in 0..e.rank() {
            assert!(e.scaled_class(t, 2).unwrap().is_some());
        }
    }
}
