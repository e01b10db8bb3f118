//! Brute-force references for the closure computations.

#![allow(dead_code)]

use std::collections::BTreeMap;

use schur_core::gfp::GroupContext;
use schur_core::sring::verify_sring;

/// Canonical classes from a labelling: sorted, ordered by least element.
pub fn classes_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, &l) in labels.iter().enumerate() {
        by.entry(l).or_default().push(x);
    }
    let mut out: Vec<Vec<usize>> = by.into_values().collect();
    out.sort();
    out
}

/// Every S-ring over `ctx` (|H| <= 9): all set partitions of the nonzero
/// elements, kept when they satisfy the axioms.
pub fn all_srings(ctx: &GroupContext) -> Vec<Vec<usize>> {
    let m = ctx.order() - 1;
    assert!(m <= 8, "exhaustive search is only for tiny groups");
    let mut out = Vec::new();
    let mut rgs = vec![0usize; m];
    loop {
        let mut labels = vec![0usize];
        labels.extend(rgs.iter().map(|&b| b + 1));
        if verify_sring(ctx, &classes_of(&labels)).is_ok() {
            out.push(labels);
        }
        // next restricted growth string
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().map_or(0, |v| v + 1);
            if i > 0 && rgs[i] < max_prefix {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// Coarsest S-ring in which `set` is a union of classes, by exhaustive search.
pub fn exhaustive_closure(ctx: &GroupContext, srings: &[Vec<usize>], set: &[usize]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; ctx.order()];
    for &s in set {
        inside[s] = true;
    }
    let containing: Vec<&Vec<usize>> = srings
        .iter()
        .filter(|l| (0..ctx.order()).all(|x| (0..ctx.order()).all(|y| l[x] != l[y] || inside[x] == inside[y])))
        .collect();
    // join of all partitions containing the set
    let n = ctx.order();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for l in &containing {
        let mut first: BTreeMap<usize, usize> = BTreeMap::new();
        for x in 0..n {
            let r = *first.entry(l[x]).or_insert(x);
            let (a, b) = (find(&mut parent, x), find(&mut parent, r));
            parent[a] = b;
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let join = classes_of(&labels);
    assert!(containing.iter().any(|l| classes_of(l) == join), "the join is not itself an S-ring");
    join
}

/// Refines by level sets of every product of two classes and by negation,
/// until nothing changes.
pub fn algebra_closure(ctx: &GroupContext, set: &[usize]) -> Vec<Vec<usize>> {
    let n = ctx.order();
    let mut labels = vec![1usize; n];
    labels[0] = 0;
    for &s in set {
        labels[s] = 2;
    }
    loop {
        let classes = classes_of(&labels);
        let mut keys: Vec<Vec<u64>> = (0..n).map(|z| vec![labels[z] as u64]).collect();
        for z in 0..n {
            keys[z].push(labels[ctx.neg(z)] as u64);
        }
        for a in &classes {
            for b in &classes {
                let mut coeff = vec![0u64; n];
                for &x in a {
                    for &y in b {
                        coeff[ctx.add(x, y)] += 1;
                    }
                }
                for z in 0..n {
                    keys[z].push(coeff[z]);
                }
            }
        }
        let mut ids: BTreeMap<&Vec<u64>, usize> = BTreeMap::new();
        for k in &keys {
            let next = ids.len();
            ids.entry(k).or_insert(next);
        }
        let next: Vec<usize> = keys.iter().map(|k| ids[k]).collect();
        if classes_of(&next).len() == classes.len() {
            return classes;
        }
        labels = next;
    }
}
