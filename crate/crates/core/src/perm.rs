//! Permutation groups on the points of `Z_p^n`: stabilizer chains, orbits,
//! orbitals, 2-closure, regular elementary abelian subgroups and conjugacy.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::budget::Deadline;
use crate::error::{Error, Result};
use crate::gfp::{common_fixed_subspace, AutMatrix, GroupContext, GroupVector, Subspace};
use crate::search::{automorphism_group_with, PairColoring};

/// Default bound on the number of elements any explicit enumeration produces.
pub const ELEMENT_LIMIT: u128 = 1_000_000;

/// A permutation of `{0, .., degree-1}`; `images[i]` is the image of `i`.
/// Products act on the right: `x^(gh) = (x^g)^h`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(format!("image {x} repeated or out of range")));
            }
            seen[x] = true;
        }
        Ok(Self { images: images.into_iter().map(|x| x as u32).collect() })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Self { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Self { images: inv }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.image(x);
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycle_lengths().into_iter().fold(1u64, |acc, l| acc / gcd(acc, l as u64) * l as u64)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.image(i) == i).collect()
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 != x)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        (0..self.degree()).find(|&i| self.image(i) != i)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| other.images[x as usize] == self.images[other.images[i] as usize])
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        let mut images = vec![0u32; self.degree()];
        for i in 0..self.degree() {
            images[g.image(i)] = g.images[self.image(i)];
        }
        Self { images }
    }
}

/// `x -> x M + t`; with `m = None` this is the right translation by `t`.
pub fn perm_from_affine(ctx: &GroupContext, m: Option<&AutMatrix>, t: &GroupVector) -> Result<Permutation> {
    let t = ctx.index(t)?;
    if let Some(m) = m {
        if m.dim() != ctx.n() {
            return Err(Error::DimensionMismatch { expected: ctx.n(), got: m.dim() });
        }
        if m.determinant() == 0 {
            return Err(Error::SingularMatrix);
        }
    }
    let images = (0..ctx.order())
        .map(|x| {
            let y = m.map_or(x, |m| m.apply_index(ctx, x));
            ctx.add(y, t) as u32
        })
        .collect();
    Ok(Permutation { images })
}

pub fn translation(ctx: &GroupContext, t: usize) -> Permutation {
    Permutation { images: (0..ctx.order()).map(|x| ctx.add(x, t) as u32).collect() }
}

pub fn matrix_permutation(ctx: &GroupContext, m: &AutMatrix) -> Permutation {
    Permutation { images: (0..ctx.order()).map(|x| m.apply_index(ctx, x) as u32).collect() }
}

/// Generators of the right regular representation `H_R`.
pub fn translation_generators(ctx: &GroupContext) -> Vec<Permutation> {
    (0..ctx.n()).map(|i| translation(ctx, ctx.unit(i))).collect()
}

pub fn translation_group(ctx: &GroupContext) -> PermGroup {
    PermGroup::new(ctx.order(), translation_generators(ctx)).expect("translations share the degree")
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
    inverse: Vec<Option<Permutation>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut lvl = Self {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
            inverse: vec![None; degree],
        };
        lvl.recompute(degree);
        lvl
    }

    fn recompute(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.inverse = vec![None; degree];
        self.orbit = vec![self.base];
        self.transversal[self.base] = Some(Permutation::identity(degree));
        let mut i = 0;
        while i < self.orbit.len() {
            let beta = self.orbit[i];
            let u = self.transversal[beta].clone().expect("orbit point has a transversal");
            for g in &self.gens {
                let gamma = g.image(beta);
                if self.transversal[gamma].is_none() {
                    self.transversal[gamma] = Some(u.then(g));
                    self.orbit.push(gamma);
                }
            }
            i += 1;
        }
        for &b in &self.orbit {
            self.inverse[b] = self.transversal[b].as_ref().map(Permutation::inverse);
        }
    }
}

/// A permutation group given by generators, with a stabilizer chain
/// (base, strong generators and explicit transversals).
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

fn strip(levels: &[Level], g: &Permutation, from: usize) -> (Permutation, usize) {
    let mut h = g.clone();
    for (j, lvl) in levels.iter().enumerate().skip(from) {
        let beta = h.image(lvl.base);
        match &lvl.inverse[beta] {
            Some(uinv) => h = h.then(uinv),
            None => return (h, j),
        }
    }
    (h, levels.len())
}

fn schreier_sims(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Vec<Level> {
    let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut base: Vec<usize> = prefix.to_vec();
    for g in &gens {
        if base.iter().all(|&b| g.image(b) == b) {
            base.push(g.first_moved_point().expect("non-identity"));
        }
    }
    let mut levels: Vec<Level> = base
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let mut lvl = Level::new(b, degree);
            lvl.gens = gens.iter().filter(|g| base[..i].iter().all(|&c| g.image(c) == c)).cloned().collect();
            lvl.recompute(degree);
            lvl
        })
        .collect();
    let mut i = levels.len() as isize - 1;
    while i >= 0 {
        let iu = i as usize;
        let mut restart = None;
        'scan: for bi in 0..levels[iu].orbit.len() {
            let beta = levels[iu].orbit[bi];
            for si in 0..levels[iu].gens.len() {
                let lvl = &levels[iu];
                let s = &lvl.gens[si];
                let gamma = s.image(beta);
                let u = lvl.transversal[beta].as_ref().expect("orbit point");
                let w = lvl.inverse[gamma].as_ref().expect("orbit point");
                let sg = u.then(s).then(w);
                if sg.is_identity() {
                    continue;
                }
                let (h, j) = strip(&levels, &sg, iu + 1);
                if j < levels.len() || !h.is_identity() {
                    if j == levels.len() {
                        let b = h.first_moved_point().expect("non-identity residue");
                        levels.push(Level::new(b, degree));
                    }
                    for lvl in levels.iter_mut().take(j + 1).skip(iu + 1) {
                        lvl.gens.push(h.clone());
                        lvl.recompute(degree);
                    }
                    restart = Some(j);
                    break 'scan;
                }
            }
        }
        match restart {
            Some(j) => i = j as isize,
            None => i -= 1,
        }
    }
    levels
}

impl PermGroup {
    /// The group generated by `gens`; the stabilizer chain is built by Schreier-Sims.
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        Self::with_base_prefix(degree, gens, &[])
    }

    pub fn with_base_prefix(degree: usize, gens: Vec<Permutation>, prefix: &[usize]) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, got: g.degree() });
            }
        }
        if let Some(&b) = prefix.iter().find(|&&b| b >= degree) {
            return Err(Error::OutOfRange(format!("base point {b}")));
        }
        let levels = schreier_sims(degree, &gens, prefix);
        Ok(Self { degree, generators: gens, levels })
    }

    pub fn trivial(degree: usize) -> Self {
        Self { degree, generators: Vec::new(), levels: Vec::new() }
    }

    /// Builds the chain from a base and a strong generating set that is known
    /// to be complete, skipping the Schreier-Sims verification.
    pub(crate) fn from_strong_generators(degree: usize, base: &[usize], strong: Vec<Permutation>) -> Self {
        let levels = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let mut lvl = Level::new(b, degree);
                lvl.gens = strong.iter().filter(|g| base[..i].iter().all(|&c| g.image(c) == c)).cloned().collect();
                lvl.recompute(degree);
                lvl
            })
            .collect();
        Self { degree, generators: strong, levels }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if seen.insert(g.clone()) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn order_u128(&self) -> Option<u128> {
        self.order().to_u128()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = strip(&self.levels, g, 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn contains_group(&self, other: &PermGroup) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.contains_group(other)
    }

    pub fn is_identity_group(&self) -> bool {
        self.levels.is_empty()
    }

    /// Whether the order is a power of `p` (the trivial group counts).
    pub fn is_p_group(&self, p: u32) -> bool {
        self.levels.iter().all(|l| {
            let mut m = l.orbit.len();
            while m % p as usize == 0 {
                m /= p as usize;
            }
            m == 1
        })
    }

    /// Every element, identity first. Fails if the order exceeds `limit`.
    pub fn elements_limited(&self, limit: u128) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > BigUint::from(limit) {
            return Err(Error::SizeLimit(format!("group of order {order} is too large to enumerate")));
        }
        let mut elems = vec![Permutation::identity(self.degree)];
        for lvl in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * lvl.orbit.len());
            for &b in &lvl.orbit {
                let u = lvl.transversal[b].as_ref().expect("orbit point");
                for e in &elems {
                    next.push(e.then(u));
                }
            }
            elems = next;
        }
        Ok(elems)
    }

    pub fn elements(&self) -> Result<Vec<Permutation>> {
        self.elements_limited(ELEMENT_LIMIT)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lvl in self.levels.iter().rev() {
            let b = lvl.orbit[rng.gen_range(0..lvl.orbit.len())];
            g = g.then(lvl.transversal[b].as_ref().expect("orbit point"));
        }
        g
    }

    /// The same group with a chain whose base starts at `point`.
    pub fn rebased(&self, point: usize) -> PermGroup {
        if self.levels.first().map(|l| l.base) == Some(point) || self.levels.is_empty() {
            return self.clone();
        }
        let levels = schreier_sims(self.degree, &self.strong_generators(), &[point]);
        Self { degree: self.degree, generators: self.generators.clone(), levels }
    }

    /// Point stabilizer.
    pub fn stabilizer(&self, point: usize) -> PermGroup {
        let g = self.rebased(point);
        if g.levels.first().map(|l| l.base) != Some(point) {
            return g;
        }
        let levels: Vec<Level> = g.levels[1..].to_vec();
        let generators = levels.first().map(|l| l.gens.clone()).unwrap_or_default();
        Self { degree: self.degree, generators, levels }
    }

    /// An element mapping `from` to `to`, if one exists.
    pub fn transporter(&self, from: usize, to: usize) -> Option<Permutation> {
        let g = self.rebased(from);
        match g.levels.first() {
            Some(l) if l.base == from => l.transversal[to].clone(),
            _ => (from == to).then(|| Permutation::identity(self.degree)),
        }
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(&self.generators, self.degree)
    }

    pub fn orbitals(&self) -> OrbitalColoring {
        OrbitalColoring::of_generators(&self.generators, self.degree)
    }

    /// Action on the classes of an invariant partition (`block_of[x]` in `0..num_blocks`).
    pub fn induced_on_blocks(&self, block_of: &[usize], num_blocks: usize) -> Result<PermGroup> {
        let mut reps = vec![usize::MAX; num_blocks];
        for (x, &b) in block_of.iter().enumerate() {
            if reps[b] == usize::MAX {
                reps[b] = x;
            }
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            let mut images = vec![0usize; num_blocks];
            for x in 0..self.degree {
                let (b, c) = (block_of[x], block_of[g.image(x)]);
                if x == reps[b] {
                    images[b] = c;
                } else if images[b] != c {
                    return Err(Error::NotAPermutation("partition is not invariant".into()));
                }
            }
            gens.push(Permutation::from_images(images)?);
        }
        PermGroup::new(num_blocks, gens)
    }
}

/// The group generated by `gens` (all of the same degree).
pub fn group_closure(gens: &[Permutation]) -> Result<PermGroup> {
    let degree = gens.first().map_or(0, Permutation::degree);
    PermGroup::new(degree, gens.to_vec())
}

/// Orbits of `<gens>` on `{0, .., degree-1}`, each sorted, ordered by least element.
pub fn orbits(gens: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; degree];
    let mut out = Vec::new();
    for s in 0..degree {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut orbit = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = g.image(x);
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Orbits of a group on ordered pairs; colors are numbered by least pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitalColoring {
    degree: usize,
    color: Vec<u32>,
    num_colors: usize,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

impl OrbitalColoring {
    pub fn of_generators(gens: &[Permutation], degree: usize) -> Self {
        let total = degree * degree;
        let mut parent: Vec<u32> = (0..total as u32).collect();
        for g in gens {
            for i in 0..degree {
                let gi = g.image(i);
                for j in 0..degree {
                    let a = find(&mut parent, (i * degree + j) as u32);
                    let b = find(&mut parent, (gi * degree + g.image(j)) as u32);
                    if a != b {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi as usize] = lo;
                    }
                }
            }
        }
        let mut color = vec![0u32; total];
        let mut label = vec![u32::MAX; total];
        let mut num_colors = 0usize;
        for x in 0..total {
            let r = find(&mut parent, x as u32) as usize;
            if label[r] == u32::MAX {
                label[r] = num_colors as u32;
                num_colors += 1;
            }
            color[x] = label[r];
        }
        Self { degree, color, num_colors }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    #[inline]
    pub fn color(&self, i: usize, j: usize) -> u32 {
        self.color[i * self.degree + j]
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.color
    }
}

/// The 2-closure: every permutation preserving each orbital of `g`.
pub fn two_closure(g: &PermGroup, deadline: &Deadline) -> Result<PermGroup> {
    automorphism_group_with(&PairColoring::from_orbitals(&g.orbitals()), g.generators(), deadline)
}

/// `∩ ker(M - I)`: the subgroup of `H` fixed by every matrix.
pub fn centralizer_subspace(ctx: &GroupContext, mats: &[AutMatrix]) -> Result<Subspace> {
    for m in mats {
        if m.dim() != ctx.n() {
            return Err(Error::DimensionMismatch { expected: ctx.n(), got: m.dim() });
        }
    }
    Ok(common_fixed_subspace(ctx.p(), ctx.n(), mats))
}

/// A regular elementary abelian subgroup, with the generators `g_1, .., g_n`
/// found by the search: `g_i` is the unique element sending `0` to the least
/// point outside the orbit of `0` under `<g_1, .., g_{i-1}>`.
#[derive(Clone, Debug)]
pub struct RegularSubgroup {
    pub generators: Vec<Permutation>,
}

impl RegularSubgroup {
    pub fn group(&self) -> PermGroup {
        let degree = self.generators[0].degree();
        PermGroup::new(degree, self.generators.clone()).expect("same degree")
    }

    /// The bijection `x -> 0^(g_1^x_1 ... g_n^x_n)` identifying `H` with the subgroup.
    pub fn coordinate_map(&self, ctx: &GroupContext) -> Vec<usize> {
        let mut out = vec![0usize; ctx.order()];
        for x in 0..ctx.order() {
            let mut pt = 0usize;
            for (i, g) in self.generators.iter().enumerate() {
                for _ in 0..ctx.digit(x, i) {
                    pt = g.image(pt);
                }
            }
            out[x] = pt;
        }
        out
    }
}

/// Regular subgroups of `g` isomorphic to `Z_p^n`, each exactly once.
///
/// A regular abelian subgroup is determined by its elements sending `0` to
/// each point, so candidates for each generator slot are `z * t_R`-style
/// coset elements `u_t z`, `z` in the stabilizer of `0`.
pub fn regular_elem_abelian_subgroups(
    g: &PermGroup,
    ctx: &GroupContext,
    deadline: &Deadline,
) -> Result<Vec<RegularSubgroup>> {
    if g.degree() != ctx.order() {
        return Err(Error::DegreeMismatch { expected: ctx.order(), got: g.degree() });
    }
    let stab = g.stabilizer(0).elements()?;
    let mut out = Vec::new();
    regular_search(g, ctx, &stab, deadline, &mut out)?;
    Ok(out)
}

pub(crate) fn regular_search(
    g: &PermGroup,
    ctx: &GroupContext,
    stabilizer: &[Permutation],
    deadline: &Deadline,
    out: &mut Vec<RegularSubgroup>,
) -> Result<()> {
    let degree = ctx.order();
    let p = ctx.p() as u64;
    let g0 = g.rebased(0);
    let mut cache: Vec<Option<Vec<Permutation>>> = vec![None; degree];
    let mut candidates = |t: usize, deadline: &Deadline| -> Result<Vec<Permutation>> {
        if let Some(c) = &cache[t] {
            return Ok(c.clone());
        }
        let Some(u) = g0.transporter(0, t) else {
            cache[t] = Some(Vec::new());
            return Ok(Vec::new());
        };
        let mut list = Vec::new();
        for (k, z) in stabilizer.iter().enumerate() {
            if k % 4096 == 0 {
                deadline.check()?;
            }
            let c = z.then(&u);
            if c.is_fixed_point_free() && c.pow(p).is_identity() {
                list.push(c);
            }
        }
        cache[t] = Some(list.clone());
        Ok(list)
    };
    let mut gens: Vec<Permutation> = Vec::new();
    let mut in_orbit = vec![false; degree];
    in_orbit[0] = true;
    let mut orbit = vec![0usize];
    // explicit stack of (candidate list, next index)
    let mut stack: Vec<(Vec<Permutation>, usize, Vec<usize>)> = Vec::new();
    let first_target = if degree > 1 { 1 } else { 0 };
    if degree == 1 {
        out.push(RegularSubgroup { generators: Vec::new() });
        return Ok(());
    }
    stack.push((candidates(first_target, deadline)?, 0, orbit.clone()));
    while let Some((cands, idx, saved_orbit)) = stack.last_mut() {
        deadline.check()?;
        if *idx >= cands.len() {
            stack.pop();
            gens.pop();
            if let Some((_, _, o)) = stack.last() {
                orbit = o.clone();
                in_orbit.iter_mut().for_each(|b| *b = false);
                orbit.iter().for_each(|&x| in_orbit[x] = true);
            }
            continue;
        }
        let c = cands[*idx].clone();
        *idx += 1;
        let base_orbit = saved_orbit.clone();
        if !gens.iter().all(|h| h.commutes_with(&c)) {
            continue;
        }
        // orbit of 0 under <gens, c> (abelian): base_orbit * <c>
        let mut new_orbit = base_orbit.clone();
        let mut cur = base_orbit.clone();
        let mut ok = true;
        for _ in 1..p {
            cur = cur.iter().map(|&x| c.image(x)).collect();
            for &x in &cur {
                if base_orbit.contains(&x) {
                    ok = false;
                }
            }
            new_orbit.extend_from_slice(&cur);
        }
        if !ok {
            continue;
        }
        if new_orbit.len() == degree {
            let mut gs = gens.clone();
            gs.push(c);
            out.push(RegularSubgroup { generators: gs });
            continue;
        }
        gens.push(c);
        in_orbit.iter_mut().for_each(|b| *b = false);
        new_orbit.iter().for_each(|&x| in_orbit[x] = true);
        let t = (0..degree).find(|&x| !in_orbit[x]).expect("orbit not full");
        orbit = new_orbit.clone();
        let next = candidates(t, deadline)?;
        stack.push((next, 0, new_orbit));
    }
    let _ = orbit;
    Ok(())
}

/// An element `x` of `g` with `k1^x = k2`, or `None` if none exists.
pub fn subgroup_conjugacy(
    g: &PermGroup,
    k1: &PermGroup,
    k2: &PermGroup,
    deadline: &Deadline,
) -> Result<Option<Permutation>> {
    if k1.order() != k2.order() {
        return Ok(None);
    }
    let profile = |k: &PermGroup| {
        let mut sizes: Vec<usize> = k.orbits().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    };
    if profile(k1) != profile(k2) {
        return Ok(None);
    }
    // x must send the orbit of the first moved point of k1 onto an orbit of k2 of equal size;
    // enumerate coset representatives of the stabilizer of that point and filter by orbit image.
    let k2_orbits = k2.orbits();
    let mut orbit_id = vec![0usize; g.degree()];
    for (i, o) in k2_orbits.iter().enumerate() {
        for &x in o {
            orbit_id[x] = i;
        }
    }
    for (n, x) in g.elements()?.into_iter().enumerate() {
        if n % 1024 == 0 {
            deadline.check()?;
        }
        let maps_orbits = k1.orbits().iter().all(|o| {
            let id = orbit_id[x.image(o[0])];
            k2_orbits[id].len() == o.len()
        });
        if !maps_orbits {
            continue;
        }
        if k1.generators().iter().all(|h| k2.contains(&h.conjugate_by(&x))) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
