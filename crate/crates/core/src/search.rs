//! Automorphisms of colored complete digraphs: equitable refinement with
//! individualization and backtracking.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::budget::Deadline;
use crate::error::{Error, Result};
use crate::perm::{OrbitalColoring, PermGroup, Permutation};

/// A color for every ordered pair of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairColoring {
    n: usize,
    colors: Vec<u32>,
}

impl PairColoring {
    pub fn new(n: usize, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: colors.len() });
        }
        Ok(Self { n, colors })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut colors = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                colors.push(f(i, j));
            }
        }
        Self { n, colors }
    }

    pub fn from_orbitals(o: &OrbitalColoring) -> Self {
        Self { n: o.degree(), colors: o.raw().to_vec() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn color(&self, i: usize, j: usize) -> u32 {
        self.colors[i * self.n + j]
    }

    pub fn is_automorphism(&self, g: &Permutation) -> bool {
        g.degree() == self.n
            && (0..self.n).all(|i| {
                let gi = g.image(i);
                (0..self.n).all(|j| self.color(gi, g.image(j)) == self.color(i, j))
            })
    }
}

/// Ordered partition: cells are contiguous ranges of `order`, identified by
/// their start position. Positions of singleton cells never change.
#[derive(Clone)]
struct Partition {
    order: Vec<usize>,
    cell_of: Vec<usize>,
    len_at: Vec<usize>,
    trace: u64,
}

impl Partition {
    fn unit(col: &PairColoring) -> Self {
        let n = col.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (col.color(v, v), v));
        let mut p = Self { order, cell_of: vec![0; n], len_at: vec![0; n], trace: 0 };
        let mut start = 0;
        while start < n {
            let c = col.color(p.order[start], p.order[start]);
            let mut end = start;
            while end < n && col.color(p.order[end], p.order[end]) == c {
                end += 1;
            }
            p.len_at[start] = end - start;
            for k in start..end {
                p.cell_of[p.order[k]] = start;
            }
            start = end;
        }
        p
    }

    fn starts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut s = 0;
        while s < self.order.len() {
            out.push(s);
            s += self.len_at[s];
        }
        out
    }

    fn is_discrete(&self) -> bool {
        self.starts().len() == self.order.len()
    }

    fn target_cell(&self) -> Option<usize> {
        self.starts().into_iter().filter(|&s| self.len_at[s] > 1).min_by_key(|&s| (self.len_at[s], s))
    }

    fn shape(&self) -> Vec<usize> {
        self.starts().into_iter().map(|s| self.len_at[s]).collect()
    }

    /// Moves `v` to the front of its cell and splits it off.
    fn individualize(&self, v: usize) -> (Self, usize) {
        let mut p = self.clone();
        let s = p.cell_of[v];
        let len = p.len_at[s];
        let pos = (s..s + len).find(|&k| p.order[k] == v).expect("vertex in its cell");
        p.order.swap(s, pos);
        p.len_at[s] = 1;
        p.len_at[s + 1] = len - 1;
        for k in s + 1..s + len {
            p.cell_of[p.order[k]] = s + 1;
        }
        (p, s)
    }

    fn refine(&mut self, col: &PairColoring, splitters: Vec<usize>) {
        let n = col.n;
        let mut queue = std::collections::VecDeque::from(splitters);
        let mut queued = vec![false; n];
        for &s in &queue {
            queued[s] = true;
        }
        let mut h = DefaultHasher::new();
        self.trace.hash(&mut h);
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            let wcell: Vec<usize> = self.order[w..w + self.len_at[w]].to_vec();
            for s in self.starts() {
                let len = self.len_at[s];
                if len == 1 {
                    continue;
                }
                let mut keyed: Vec<(Vec<u64>, usize)> = self.order[s..s + len]
                    .iter()
                    .map(|&u| {
                        let mut sig: Vec<u64> =
                            wcell.iter().map(|&x| ((col.color(u, x) as u64) << 32) | col.color(x, u) as u64).collect();
                        sig.sort_unstable();
                        (sig, u)
                    })
                    .collect();
                if keyed.iter().all(|(sig, _)| *sig == keyed[0].0) {
                    continue;
                }
                keyed.sort();
                (w, s).hash(&mut h);
                let mut start = s;
                let mut k = 0;
                while k < keyed.len() {
                    let mut e = k;
                    while e < keyed.len() && keyed[e].0 == keyed[k].0 {
                        e += 1;
                    }
                    keyed[k].0.hash(&mut h);
                    (e - k).hash(&mut h);
                    for (off, (_, u)) in keyed[k..e].iter().enumerate() {
                        self.order[start + off] = *u;
                        self.cell_of[*u] = start;
                    }
                    self.len_at[start] = e - k;
                    if !queued[start] {
                        queued[start] = true;
                        queue.push_back(start);
                    }
                    start += e - k;
                    k = e;
                }
            }
        }
        self.trace = h.finish();
    }
}

struct Search<'a> {
    col: &'a PairColoring,
    deadline: &'a Deadline,
    /// (trace, shape) of the first path after refinement at each depth.
    first: Vec<(u64, Vec<usize>)>,
    first_leaf: Vec<usize>,
}

impl Search<'_> {
    fn child(&self, node: &Partition, v: usize) -> Partition {
        let (mut p, s) = node.individualize(v);
        p.refine(self.col, vec![s]);
        p
    }

    /// Any automorphism mapping the first leaf to a leaf below `node`.
    fn find(&self, node: &Partition, depth: usize) -> Result<Option<Permutation>> {
        self.deadline.check()?;
        let (trace, shape) = &self.first[depth];
        if node.trace != *trace || node.shape() != *shape {
            return Ok(None);
        }
        if node.is_discrete() {
            let mut images = vec![0u32; self.col.n];
            for (k, &v) in self.first_leaf.iter().enumerate() {
                images[v] = node.order[k] as u32;
            }
            let g = Permutation::from_images_unchecked(images);
            return Ok(self.col.is_automorphism(&g).then_some(g));
        }
        let s = node.target_cell().expect("non-discrete");
        for k in s..s + node.len_at[s] {
            let child = self.child(node, node.order[k]);
            if let Some(g) = self.find(&child, depth + 1)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

fn orbit_reps(gens: &[Permutation], n: usize) -> Vec<usize> {
    let mut rep = vec![usize::MAX; n];
    for o in crate::perm::orbits(gens, n) {
        for &x in &o {
            rep[x] = o[0];
        }
    }
    rep
}

/// The group of all permutations preserving every pair color.
pub fn automorphism_group(col: &PairColoring, deadline: &Deadline) -> Result<PermGroup> {
    automorphism_group_with(col, &[], deadline)
}

/// As [`automorphism_group`], seeded with automorphisms already known,
/// which saves searching for them.
pub fn automorphism_group_with(col: &PairColoring, known: &[Permutation], deadline: &Deadline) -> Result<PermGroup> {
    let n = col.n;
    if let Some(g) = known.iter().find(|g| !col.is_automorphism(g)) {
        return Err(Error::NotAPermutation(format!("{g:?} does not preserve the coloring")));
    }
    let mut root = Partition::unit(col);
    let all = root.starts();
    root.refine(col, all);

    let mut path = vec![root];
    let mut base = Vec::new();
    loop {
        let node = path.last().expect("root");
        let Some(s) = node.target_cell() else { break };
        let b = node.order[s];
        base.push(b);
        let (mut child, cs) = node.individualize(b);
        child.refine(col, vec![cs]);
        path.push(child);
    }
    let first: Vec<(u64, Vec<usize>)> = path.iter().map(|p| (p.trace, p.shape())).collect();
    let search = Search { col, deadline, first, first_leaf: path.last().expect("leaf").order.clone() };

    let mut gens: Vec<Permutation> = known.iter().filter(|g| !g.is_identity()).cloned().collect();
    for level in (0..base.len()).rev() {
        let parent = &path[level];
        let s = parent.target_cell().expect("non-discrete on the first path");
        let cell: Vec<usize> = parent.order[s..s + parent.len_at[s]].to_vec();
        let fixing = |gens: &[Permutation]| -> Vec<Permutation> {
            gens.iter().filter(|g| base[..level].iter().all(|&b| g.image(b) == b)).cloned().collect()
        };
        let mut level_gens = fixing(&gens);
        let mut rep = orbit_reps(&level_gens, n);
        let mut failed: Vec<usize> = Vec::new();
        for &v in &cell {
            if rep[v] == rep[base[level]] || failed.iter().any(|&f| rep[f] == rep[v]) {
                continue;
            }
            let child = search.child(parent, v);
            match search.find(&child, level + 1)? {
                Some(g) => {
                    gens.push(g);
                    level_gens = fixing(&gens);
                    rep = orbit_reps(&level_gens, n);
                }
                None => failed.push(v),
            }
        }
    }
    Ok(PermGroup::from_strong_generators(n, &base, gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn cycle_graph(n: usize) -> PairColoring {
        PairColoring::from_fn(n, |i, j| {
            if i == j {
                0
            } else if (i + 1) % n == j || (j + 1) % n == i {
                1
            } else {
                2
            }
        })
    }

    #[test]
    fn dihedral_groups() {
        let d = Deadline::none();
        for n in 3..9 {
            let g = automorphism_group(&cycle_graph(n), &d).unwrap();
            assert_eq!(g.order(), BigUint::from(2 * n), "n = {n}");
        }
    }

    #[test]
    fn complete_graph_is_symmetric() {
        let d = Deadline::none();
        let col = PairColoring::from_fn(7, |i, j| (i != j) as u32);
        assert_eq!(automorphism_group(&col, &d).unwrap().order(), BigUint::from(5040u32));
    }

    #[test]
    fn directed_cycle() {
        let d = Deadline::none();
        let col = PairColoring::from_fn(5, |i, j| ((j + 5 - i) % 5) as u32);
        let g = automorphism_group(&col, &d).unwrap();
        assert_eq!(g.order(), BigUint::from(5u32));
        assert!(g.generators().iter().all(|x| col.is_automorphism(x)));
    }

    #[test]
    fn petersen_graph() {
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let col = PairColoring::from_fn(10, |i, j| {
            if i == j {
                0
            } else {
                let (a, b) = (pairs[i], pairs[j]);
                let disjoint = a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1;
                1 + disjoint as u32
            }
        });
        let g = automorphism_group(&col, &Deadline::none()).unwrap();
        assert_eq!(g.order(), BigUint::from(120u32));
    }

    #[test]
    fn rigid_coloring() {
        let col = PairColoring::from_fn(6, |i, j| (i * 6 + j) as u32);
        let g = automorphism_group(&col, &Deadline::none()).unwrap();
        assert!(g.is_identity_group());
    }
}
