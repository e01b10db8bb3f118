//! Automorphism groups, Schurity, decomposability, Cayley isomorphism,
//! CI testing and 2-minimality.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::budget::Deadline;
use crate::error::{Error, Result};
use crate::gfp::{enumerate_subspaces, AutMatrix, GroupContext, Subspace};
use crate::perm::{
    regular_search, translation, translation_generators, OrbitalColoring, PermGroup, Permutation, RegularSubgroup,
    ELEMENT_LIMIT,
};
use crate::search::{automorphism_group_with, PairColoring};
use crate::sring::{radical, SRing};

/// Automorphisms of the coloring `(u, v) -> labels[v - u]`.
pub fn cayley_coloring_group(ctx: &GroupContext, labels: &[u32], deadline: &Deadline) -> Result<PermGroup> {
    if labels.len() != ctx.order() {
        return Err(Error::DimensionMismatch { expected: ctx.order(), got: labels.len() });
    }
    let col = PairColoring::from_fn(ctx.order(), |u, v| labels[ctx.sub(v, u)]);
    automorphism_group_with(&col, &translation_generators(ctx), deadline)
}

/// `Aut(A)`: permutations preserving every basic-set Cayley digraph.
pub fn aut_group(a: &SRing, deadline: &Deadline) -> Result<PermGroup> {
    cayley_coloring_group(a.ctx(), a.labels(), deadline)
}

/// Whether the basic sets are the orbits of the stabilizer of `0` in `Aut(A)`.
pub fn is_schurian(a: &SRing, deadline: &Deadline) -> Result<bool> {
    Ok(schurian_with(a, &aut_group(a, deadline)?))
}

/// As [`is_schurian`] with the automorphism group already known.
pub fn schurian_with(a: &SRing, aut: &PermGroup) -> bool {
    aut.stabilizer(0).orbits() == a.classes()
}

/// S-ring subgroups `F <= E` with `F != 0`, `E != H` and `F <= rad(T)` for
/// every basic set `T` outside `E`. Larger `E` and then smaller `F` are tried first.
pub fn decomposability_witness(a: &SRing) -> Result<Option<(Subspace, Subspace)>> {
    let ctx = a.ctx();
    let subs = a.a_subgroups()?;
    let radicals: Vec<Subspace> = a.classes().iter().map(|c| radical(ctx, c)).collect();
    let mut es: Vec<&Subspace> = subs.iter().filter(|k| !k.is_full()).collect();
    es.sort_by(|x, y| y.dim().cmp(&x.dim()).then(x.cmp(y)));
    for e in es {
        let outside: Vec<usize> = (0..a.rank()).filter(|&t| !e.contains_index(ctx, a.classes()[t][0])).collect();
        for f in subs.iter().filter(|f| !f.is_trivial()) {
            if !e.contains_subspace(f)? {
                continue;
            }
            if outside.iter().all(|&t| radicals[t].contains_subspace(f).unwrap_or(false)) {
                return Ok(Some((e.clone(), f.clone())));
            }
        }
    }
    Ok(None)
}

/// Cheap Cayley-isomorphism invariants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub rank: usize,
    pub sizes: Vec<(usize, usize)>,
    pub subgroup_counts: Vec<usize>,
    pub decomposable: bool,
}

pub fn fingerprint(a: &SRing) -> Result<Fingerprint> {
    Ok(Fingerprint {
        rank: a.rank(),
        sizes: a.size_multiset(),
        subgroup_counts: a.subgroup_counts()?,
        decomposable: decomposability_witness(a)?.is_some(),
    })
}

/// Basis of `H` taken greedily from elements of smallest class size.
fn adapted_basis(ctx: &GroupContext, la: &[u32]) -> Vec<usize> {
    let mut sizes: HashMap<u32, usize> = HashMap::new();
    for &l in la {
        *sizes.entry(l).or_default() += 1;
    }
    let mut elems: Vec<usize> = (1..ctx.order()).collect();
    elems.sort_by_key(|&x| (sizes[&la[x]], x));
    let mut basis = Vec::new();
    let mut span = Subspace::trivial(ctx);
    for x in elems {
        if basis.len() == ctx.n() {
            break;
        }
        if !span.contains_index(ctx, x) {
            basis.push(x);
            span = crate::gfp::span_of_indices(ctx, &basis);
        }
    }
    basis
}

struct LinearSearch<'a> {
    ctx: &'a GroupContext,
    la: &'a [u32],
    lb: &'a [u32],
    strict: bool,
    size_a: Vec<usize>,
    size_b: Vec<usize>,
    basis: Vec<usize>,
    deadline: &'a Deadline,
}

impl LinearSearch<'_> {
    fn consistent(&self, x: usize, y: usize, fwd: &mut [u32], back: &mut [u32], undo: &mut Vec<(u32, u32)>) -> bool {
        let (a, b) = (self.la[x], self.lb[y]);
        if self.strict {
            return a == b;
        }
        if self.size_a[a as usize] != self.size_b[b as usize] {
            return false;
        }
        match (fwd[a as usize], back[b as usize]) {
            (u32::MAX, u32::MAX) => {
                fwd[a as usize] = b;
                back[b as usize] = a;
                undo.push((a, b));
                true
            }
            (fb, ba) => fb == b && ba == a,
        }
    }

    fn dfs(
        &self,
        depth: usize,
        span: &mut Vec<(usize, usize)>,
        images: &mut Vec<usize>,
        fwd: &mut Vec<u32>,
        back: &mut Vec<u32>,
    ) -> Result<bool> {
        self.deadline.check()?;
        if depth == self.basis.len() {
            return Ok(true);
        }
        let ctx = self.ctx;
        let b = self.basis[depth];
        let img_span: HashSet<usize> = span.iter().map(|&(_, y)| y).collect();
        for y in 1..ctx.order() {
            if img_span.contains(&y) {
                continue;
            }
            if self.strict && self.la[b] != self.lb[y] {
                continue;
            }
            let mut undo = Vec::new();
            let base_len = span.len();
            let mut ok = true;
            'ext: for c in 1..ctx.p() {
                let (cb, cy) = (ctx.scale(c, b), ctx.scale(c, y));
                for k in 0..base_len {
                    let (d, e) = span[k];
                    let (x, z) = (ctx.add(d, cb), ctx.add(e, cy));
                    if !self.consistent(x, z, fwd, back, &mut undo) {
                        ok = false;
                        break 'ext;
                    }
                    span.push((x, z));
                }
            }
            if ok {
                images.push(y);
                if self.dfs(depth + 1, span, images, fwd, back)? {
                    return Ok(true);
                }
                images.pop();
            }
            span.truncate(base_len);
            for (a, b) in undo {
                fwd[a as usize] = u32::MAX;
                back[b as usize] = u32::MAX;
            }
        }
        Ok(false)
    }
}

fn label_sizes(labels: &[u32]) -> Vec<usize> {
    let max = labels.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut out = vec![0; max];
    for &l in labels {
        out[l as usize] += 1;
    }
    out
}

/// A matrix `φ` with `lb[x φ]` determined by `la[x]` through a bijection of
/// labels (or equal to it when `strict`).
pub(crate) fn linear_label_map(
    ctx: &GroupContext,
    la: &[u32],
    lb: &[u32],
    strict: bool,
    deadline: &Deadline,
) -> Result<Option<AutMatrix>> {
    let (size_a, size_b) = (label_sizes(la), label_sizes(lb));
    let multiset = |s: &[usize]| {
        let mut v: Vec<usize> = s.iter().copied().filter(|&c| c > 0).collect();
        v.sort_unstable();
        v
    };
    if strict && size_a != size_b || multiset(&size_a) != multiset(&size_b) {
        return Ok(None);
    }
    let basis = adapted_basis(ctx, la);
    let search = LinearSearch { ctx, la, lb, strict, size_a, size_b, basis, deadline };
    let mut fwd = vec![u32::MAX; search.size_a.len()];
    let mut back = vec![u32::MAX; search.size_b.len()];
    let mut span = vec![(0usize, 0usize)];
    if !search.consistent(0, 0, &mut fwd, &mut back, &mut Vec::new()) {
        return Ok(None);
    }
    let mut images = Vec::new();
    if !search.dfs(0, &mut span, &mut images, &mut fwd, &mut back)? {
        return Ok(None);
    }
    let rows = |xs: &[usize]| xs.iter().map(|&x| ctx.coords(x)).collect::<Vec<_>>();
    let b = AutMatrix::new(ctx, rows(&search.basis))?;
    let y = AutMatrix::new(ctx, rows(&images))?;
    Ok(Some(b.inverse().mul(&y)))
}

/// A matrix `φ` mapping every basic set of `a` onto a basic set of `b`.
pub fn cayley_isomorphic(a: &SRing, b: &SRing, deadline: &Deadline) -> Result<Option<AutMatrix>> {
    if a.ctx() != b.ctx() {
        return Err(Error::ContextMismatch);
    }
    if a.rank() != b.rank() || a.size_multiset() != b.size_multiset() {
        return Ok(None);
    }
    linear_label_map(a.ctx(), a.labels(), b.labels(), false, deadline)
}

/// A regular subgroup together with an element of `Aut(A)` conjugating the
/// translations onto it, when one exists.
#[derive(Clone, Debug)]
pub struct RegularWitness {
    pub generators: Vec<Permutation>,
    pub conjugator: Option<Permutation>,
}

#[derive(Clone, Debug)]
pub struct CiCertificate {
    pub ci: bool,
    pub aut_order: BigUint,
    /// Order of the group searched for regular subgroups (`Aut(A)` or a Sylow subgroup).
    pub search_order: BigUint,
    pub regular: Vec<RegularWitness>,
}

/// All full flags `0 < V_1 < .. < V_(n-1) < H`.
fn full_flags(ctx: &GroupContext) -> Result<Vec<Vec<Subspace>>> {
    let n = ctx.n();
    let by_dim: Vec<Vec<Subspace>> = (1..n).map(|d| enumerate_subspaces(ctx, d)).collect::<Result<_>>()?;
    let mut flags: Vec<Vec<Subspace>> = vec![Vec::new()];
    for level in &by_dim {
        let mut next = Vec::new();
        for f in &flags {
            for v in level {
                if f.last().is_none_or(|w| v.contains_subspace(w).unwrap_or(false)) {
                    let mut g = f.clone();
                    g.push(v.clone());
                    next.push(g);
                }
            }
        }
        flags = next;
    }
    Ok(flags)
}

const FLAG_LIMIT: usize = 5000;

/// A Sylow `p`-subgroup of `Aut(A)` containing the translations.
///
/// Every `p`-subgroup of `Sym(H)` containing `H_R` lies in the automorphism
/// group of an iterated thin wreath product along some full flag, so the
/// largest intersection over flags is a Sylow subgroup.
pub fn sylow_containing_translations(a: &SRing, aut: &PermGroup, deadline: &Deadline) -> Result<PermGroup> {
    let ctx = a.ctx();
    if aut.is_p_group(ctx.p()) {
        return Ok(aut.clone());
    }
    let flags = full_flags(ctx)?;
    if flags.len() > FLAG_LIMIT {
        return Err(Error::SizeLimit(format!("{} flags to examine", flags.len())));
    }
    let mut best: Option<PermGroup> = None;
    for flag in flags {
        let mut chain = vec![Subspace::trivial(ctx)];
        chain.extend(flag);
        chain.push(Subspace::full(ctx));
        let keys: Vec<(u32, usize, Vec<u32>)> = (0..ctx.order())
            .map(|d| {
                let v = ctx.coords(d);
                let k = chain.iter().position(|s| s.contains_vec(&v)).expect("H contains everything");
                let below = &chain[k.saturating_sub(1)];
                (a.labels()[d], k, below.reduce(&v))
            })
            .collect();
        let mut ids: BTreeMap<&(u32, usize, Vec<u32>), u32> = BTreeMap::new();
        for k in &keys {
            let next = ids.len() as u32;
            ids.entry(k).or_insert(next);
        }
        let labels: Vec<u32> = keys.iter().map(|k| ids[k]).collect();
        let g = cayley_coloring_group(ctx, &labels, deadline)?;
        if best.as_ref().is_none_or(|b| g.order() > b.order()) {
            best = Some(g);
        }
    }
    Ok(best.expect("at least one flag"))
}

/// `x -> ι(x φ)`, where `ι` identifies `H` with the regular subgroup.
fn transport_conjugator(
    a: &SRing,
    aut: &PermGroup,
    r: &RegularSubgroup,
    deadline: &Deadline,
) -> Result<Option<Permutation>> {
    let ctx = a.ctx();
    let iota = r.coordinate_map(ctx);
    let la = a.labels();
    let lb: Vec<u32> = (0..ctx.order()).map(|d| la[iota[d]]).collect();
    let Some(phi) = linear_label_map(ctx, la, &lb, true, deadline)? else {
        return Ok(None);
    };
    let images: Vec<usize> = (0..ctx.order()).map(|x| iota[phi.apply_index(ctx, x)]).collect();
    let g = Permutation::from_images(images)?;
    let rg = r.group();
    let conjugates = translation_generators(ctx).iter().all(|t| rg.contains(&t.conjugate_by(&g)));
    if !aut.contains(&g) || !conjugates {
        return Err(Error::Corrupted("transported conjugator failed verification".into()));
    }
    Ok(Some(g))
}

/// CI test: every regular elementary abelian subgroup of `Aut(A)` is
/// conjugate in `Aut(A)` to the translations.
pub fn is_ci_sring(a: &SRing, deadline: &Deadline) -> Result<CiCertificate> {
    let aut = aut_group(a, deadline)?;
    ci_with(a, &aut, deadline)
}

pub(crate) fn ci_with(a: &SRing, aut: &PermGroup, deadline: &Deadline) -> Result<CiCertificate> {
    let ctx = a.ctx();
    let search = if aut.is_p_group(ctx.p()) || aut.order() <= BigUint::from(ELEMENT_LIMIT) {
        aut.clone()
    } else {
        sylow_containing_translations(a, aut, deadline)?
    };
    let stab = search.stabilizer(0).elements()?;
    let mut found = Vec::new();
    regular_search(&search, ctx, &stab, deadline, &mut found)?;
    let mut regular = Vec::with_capacity(found.len());
    let mut ci = true;
    for r in found {
        let conjugator = transport_conjugator(a, aut, &r, deadline)?;
        ci &= conjugator.is_some();
        regular.push(RegularWitness { generators: r.generators, conjugator });
    }
    Ok(CiCertificate { ci, aut_order: aut.order(), search_order: search.order(), regular })
}

/// CI test for the Cayley digraph `Cay(H, S)` through the S-ring it generates.
pub fn is_ci_subset(ctx: &GroupContext, set: &[usize], deadline: &Deadline) -> Result<CiCertificate> {
    let a = crate::build::generated_sring(ctx, set)?;
    is_ci_sring(&a, deadline)
}

/// Number of orbits on ordered pairs.
fn orbital_count(gens: &[Permutation], degree: usize) -> usize {
    OrbitalColoring::of_generators(gens, degree).num_colors()
}

/// Whether no proper subgroup of `Aut(A)` containing the translations has
/// the same orbits on ordered pairs.
pub fn teq_minimal(a: &SRing, deadline: &Deadline) -> Result<bool> {
    let aut = aut_group(a, deadline)?;
    teq_minimal_with(a, &aut, deadline)
}

pub(crate) fn teq_minimal_with(a: &SRing, aut: &PermGroup, deadline: &Deadline) -> Result<bool> {
    let ctx = a.ctx();
    if aut.order() > BigUint::from(ELEMENT_LIMIT) {
        return Err(Error::SizeLimit(format!("automorphism group of order {}", aut.order())));
    }
    let target = orbital_count(aut.generators(), ctx.order());
    if aut.is_p_group(ctx.p()) {
        teq_minimal_p_group(ctx, aut, target, deadline)
    } else {
        teq_minimal_general(ctx, aut, target, deadline)
    }
}

/// In a `p`-group every proper subgroup lies in a maximal one, and maximal
/// subgroups containing `H_R` are preimages of hyperplanes of `G/Φ(G)`
/// containing the image of `H_R`.
fn teq_minimal_p_group(ctx: &GroupContext, g: &PermGroup, target: usize, deadline: &Deadline) -> Result<bool> {
    let p = ctx.p();
    let degree = ctx.order();
    let gens: Vec<Permutation> = g.generators().iter().filter(|x| !x.is_identity()).cloned().collect();
    // Φ(G) = G^p [G, G], the normal closure of p-th powers and commutators of generators
    let mut phi_gens: Vec<Permutation> = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        phi_gens.push(a.pow(p as u64));
        for b in &gens[i + 1..] {
            phi_gens.push(a.inverse().then(&b.inverse()).then(a).then(b));
        }
    }
    phi_gens.retain(|x| !x.is_identity());
    let mut phi = PermGroup::new(degree, phi_gens.clone())?;
    loop {
        deadline.check()?;
        let mut grew = false;
        for x in phi_gens.clone() {
            for s in &gens {
                let c = x.conjugate_by(s);
                if !phi.contains(&c) {
                    phi_gens.push(c);
                    phi = PermGroup::new(degree, phi_gens.clone())?;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    // minimal generating set modulo Φ
    let mut basis: Vec<Permutation> = Vec::new();
    let mut sub = phi.clone();
    for s in &gens {
        if !sub.contains(s) {
            basis.push(s.clone());
            let mut all = phi_gens.clone();
            all.extend(basis.iter().cloned());
            sub = PermGroup::new(degree, all)?;
        }
    }
    let d = basis.len();
    if d > 8 {
        return Err(Error::SizeLimit(format!("Frattini quotient of rank {d}")));
    }
    let qctx = GroupContext::new(p, d)?;
    // coordinates of an element of G modulo Φ
    let coset_reps: Vec<Permutation> = (0..qctx.order())
        .map(|q| {
            let mut r = Permutation::identity(degree);
            for (i, b) in basis.iter().enumerate() {
                r = r.then(&b.pow(qctx.digit(q, i) as u64));
            }
            r
        })
        .collect();
    let coords = |x: &Permutation| -> Result<usize> {
        coset_reps
            .iter()
            .position(|r| phi.contains(&x.then(&r.inverse())))
            .ok_or_else(|| Error::Corrupted("element outside G".into()))
    };
    let hr: Vec<usize> = translation_generators(ctx).iter().map(coords).collect::<Result<_>>()?;
    let u = crate::gfp::span_of_indices(&qctx, &hr);
    if d == 0 || u.is_full() {
        return Ok(true);
    }
    for w in enumerate_subspaces(&qctx, d - 1)? {
        deadline.check()?;
        if !w.contains_subspace(&u)? {
            continue;
        }
        let mut m_gens = phi_gens.clone();
        m_gens.extend(w.basis_indices(&qctx).into_iter().map(|q| coset_reps[q].clone()));
        m_gens.extend(translation_generators(ctx));
        if orbital_count(&m_gens, degree) == target {
            return Ok(false);
        }
    }
    Ok(true)
}

const SUBGROUP_VISIT_LIMIT: usize = 20_000;

/// Breadth-first search over the subgroups `<H_R, z_1, .., z_k>` with `z_i`
/// fixing `0`; every subgroup containing `H_R` arises this way.
fn teq_minimal_general(ctx: &GroupContext, g: &PermGroup, target: usize, deadline: &Deadline) -> Result<bool> {
    let degree = ctx.order();
    let stab = g.stabilizer(0).elements()?;
    let full = stab.len();
    let hr = translation_generators(ctx);
    let key = |y: &PermGroup| -> Vec<bool> { stab.iter().map(|z| y.contains(z)).collect() };
    let start = PermGroup::new(degree, hr.clone())?;
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    seen.insert(key(&start));
    let mut frontier = vec![(start, Vec::<Permutation>::new())];
    while let Some((y, extra)) = frontier.pop() {
        for z in &stab {
            deadline.check()?;
            if y.contains(z) {
                continue;
            }
            let mut gens = hr.clone();
            gens.extend(extra.iter().cloned());
            gens.push(z.clone());
            let next = PermGroup::new(degree, gens.clone())?;
            let k = key(&next);
            if k.iter().filter(|&&b| b).count() == full || !seen.insert(k) {
                continue;
            }
            if seen.len() > SUBGROUP_VISIT_LIMIT {
                return Err(Error::SizeLimit("too many intermediate subgroups".into()));
            }
            if orbital_count(&gens, degree) == target {
                return Ok(false);
            }
            let mut e = extra.clone();
            e.push(z.clone());
            frontier.push((next, e));
        }
    }
    Ok(true)
}

/// Default cap on the number of normalized isomorphisms returned.
pub const ISO_LIMIT: usize = 2_000_000;

struct IsoSearch<'a> {
    ctx: &'a GroupContext,
    la: &'a [u32],
    limit: usize,
    deadline: &'a Deadline,
}

impl IsoSearch<'_> {
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        x: usize,
        image: &mut Vec<usize>,
        preimage: &mut Vec<usize>,
        required: &mut Vec<u32>,
        out: &mut Vec<Permutation>,
    ) -> Result<()> {
        let ctx = self.ctx;
        let n = ctx.order();
        if x == n {
            if out.len() >= self.limit {
                return Err(Error::SizeLimit(format!("more than {} isomorphisms", self.limit)));
            }
            out.push(Permutation::from_images(image.clone())?);
            return Ok(());
        }
        self.deadline.check()?;
        for y in 1..n {
            if preimage[y] != usize::MAX {
                continue;
            }
            if required[y] != u32::MAX && required[y] != self.la[x] {
                continue;
            }
            let mut set_here: Vec<usize> = Vec::new();
            let mut ok = true;
            for u in 0..x {
                let d = ctx.sub(y, image[u]);
                let need = self.la[ctx.sub(x, u)];
                let d2 = ctx.sub(image[u], y);
                let need2 = self.la[ctx.sub(u, x)];
                for (d, need) in [(d, need), (d2, need2)] {
                    if preimage[d] != usize::MAX || d == y {
                        let pre = if d == y { x } else { preimage[d] };
                        if self.la[pre] != need {
                            ok = false;
                        }
                    } else if required[d] == u32::MAX {
                        required[d] = need;
                        set_here.push(d);
                    } else if required[d] != need {
                        ok = false;
                    }
                    if !ok {
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                image[x] = y;
                preimage[y] = x;
                self.dfs(x + 1, image, preimage, required, out)?;
                preimage[y] = usize::MAX;
            }
            for d in set_here {
                required[d] = u32::MAX;
            }
        }
        Ok(())
    }
}

/// Every bijection `f` of `H` with `f(0) = 0` that maps the Cayley coloring
/// of `A` onto the Cayley coloring of some S-ring over `H`.
pub fn iso1_enumerate(a: &SRing, limit: usize, deadline: &Deadline) -> Result<Vec<Permutation>> {
    let ctx = a.ctx();
    if ctx.order() > 27 {
        return Err(Error::SizeLimit(format!("group of order {} is too large", ctx.order())));
    }
    let n = ctx.order();
    let search = IsoSearch { ctx, la: a.labels(), limit, deadline };
    let mut image = vec![0usize; n];
    let mut preimage = vec![usize::MAX; n];
    preimage[0] = 0;
    let mut required = vec![u32::MAX; n];
    let mut out = Vec::new();
    search.dfs(1, &mut image, &mut preimage, &mut required, &mut out)?;
    Ok(out)
}

/// The kernel of `Aut(A)` on the cosets of a one-dimensional S-ring subgroup `W`.
pub fn kernel_on_quotient(a: &SRing, w: &Subspace, deadline: &Deadline) -> Result<PermGroup> {
    let ctx = a.ctx();
    if w.ambient_dim() != ctx.n() {
        return Err(Error::ContextMismatch);
    }
    if w.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: w.dim() });
    }
    if !a.is_subring_subgroup(w) {
        return Err(Error::NotASubgroupOfRing);
    }
    let qctx = GroupContext::new(ctx.p(), ctx.n() - 1)?;
    let coset: Vec<u32> = (0..ctx.order()).map(|x| qctx.index_of(&w.quotient_coords(&ctx.coords(x))) as u32).collect();
    let m = qctx.order() as u32 + 1;
    let col = PairColoring::from_fn(ctx.order(), |u, v| {
        a.labels()[ctx.sub(v, u)] * m + if u == v { 1 + coset[u] } else { 0 }
    });
    let known: Vec<Permutation> = w.basis_indices(ctx).into_iter().map(|t| translation(ctx, t)).collect();
    automorphism_group_with(&col, &known, deadline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::{transitivity_module, wreath_sring};
    use crate::gfp::span_of_indices;

    fn ctx(p: u32, n: usize) -> GroupContext {
        GroupContext::new(p, n).unwrap()
    }

    fn exceptional(p: u32) -> SRing {
        let c = ctx(p, 3);
        let x = AutMatrix::new(&c, vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        transitivity_module(&c, &[x]).unwrap()
    }

    fn d() -> Deadline {
        Deadline::none()
    }

    #[test]
    fn aut_examples() {
        let c = ctx(3, 3);
        assert_eq!(aut_group(&SRing::discrete(&c), &d()).unwrap().order(), BigUint::from(27u32));
        assert_eq!(aut_group(&exceptional(3), &d()).unwrap().order(), BigUint::from(81u32));
        assert_eq!(aut_group(&SRing::trivial(&ctx(3, 1)), &d()).unwrap().order(), BigUint::from(6u32));
        let s27 = aut_group(&SRing::trivial(&c), &d()).unwrap();
        assert_eq!(s27.order(), (1..=27u32).map(BigUint::from).product::<BigUint>());
    }

    #[test]
    fn schurity() {
        assert!(is_schurian(&exceptional(3), &d()).unwrap());
        assert!(is_schurian(&SRing::trivial(&ctx(3, 2)), &d()).unwrap());
        assert!(is_schurian(&SRing::discrete(&ctx(3, 2)), &d()).unwrap());
    }

    #[test]
    fn decomposability() {
        let c = ctx(3, 3);
        assert!(decomposability_witness(&SRing::discrete(&c)).unwrap().is_none());
        assert!(decomposability_witness(&exceptional(3)).unwrap().is_none());
        let q1 = SRing::discrete(&ctx(3, 1));
        let k = span_of_indices(&ctx(3, 2), &[1]);
        let w2 = wreath_sring(&q1, &q1, &k).unwrap();
        let e2 = span_of_indices(&c, &[1, 3]);
        let w3 = wreath_sring(&w2, &q1, &e2).unwrap();
        let (e, f) = decomposability_witness(&w3).unwrap().unwrap();
        assert_eq!((e.dim(), f.dim()), (2, 1));
    }

    #[test]
    fn cayley_isomorphism() {
        let c = ctx(3, 3);
        let e = exceptional(3);
        let phi = cayley_isomorphic(&e, &e, &d()).unwrap().unwrap();
        for t in e.classes() {
            let img: Vec<usize> = t.iter().map(|&x| phi.apply_index(&c, x)).collect();
            assert!(e.is_union_of_classes(&img) && e.class_of(img[0]) == e.class_of(*img.iter().min().unwrap()));
        }
        let q1 = SRing::discrete(&ctx(3, 1));
        let q2 = SRing::discrete(&ctx(3, 2));
        let r2 = wreath_sring(&q2, &q1, &span_of_indices(&c, &[1, 3])).unwrap();
        let r3 = wreath_sring(&q1, &q2, &span_of_indices(&c, &[1])).unwrap();
        assert!(cayley_isomorphic(&r2, &r3, &d()).unwrap().is_none());
        assert!(cayley_isomorphic(&r3, &e, &d()).unwrap().is_none());
        // a conjugate copy is found
        let r3b = wreath_sring(&q1, &q2, &span_of_indices(&c, &[9])).unwrap();
        let phi = cayley_isomorphic(&r3, &r3b, &d()).unwrap().unwrap();
        for t in r3.classes() {
            let img: Vec<usize> = t.iter().map(|&x| phi.apply_index(&c, x)).collect();
            assert_eq!(r3b.class(r3b.class_of(img[0])).unwrap().len(), img.len());
            assert!(r3b.is_union_of_classes(&img));
        }
    }

    #[test]
    fn ci_examples() {
        let c = ctx(3, 3);
        let cert = is_ci_sring(&SRing::discrete(&c), &d()).unwrap();
        assert!(cert.ci);
        assert_eq!(cert.regular.len(), 1);
        assert!(is_ci_sring(&exceptional(3), &d()).unwrap().ci);
        assert!(is_ci_subset(&c, &[], &d()).unwrap().ci);
        let all: Vec<usize> = (1..27).collect();
        let cert = is_ci_subset(&c, &all, &d()).unwrap();
        assert!(cert.ci);
        assert!(cert.regular.len() > 1);
        let coset: Vec<usize> = vec![1, 4, 7];
        assert!(is_ci_subset(&c, &coset, &d()).unwrap().ci);
    }

    #[test]
    fn teq_examples() {
        assert!(teq_minimal(&SRing::discrete(&ctx(3, 2)), &d()).unwrap());
        assert!(teq_minimal(&exceptional(3), &d()).unwrap());
        assert!(!teq_minimal(&SRing::trivial(&ctx(5, 1)), &d()).unwrap());
        assert!(!teq_minimal(&SRing::trivial(&ctx(3, 2)), &d()).unwrap());
        // Aut = Sym(3) is 2-transitive with no proper transitive subgroup but C_3
        assert!(teq_minimal(&SRing::trivial(&ctx(3, 1)), &d()).unwrap());
    }

    #[test]
    fn iso1_examples() {
        let isos = iso1_enumerate(&SRing::discrete(&ctx(3, 1)), ISO_LIMIT, &d()).unwrap();
        assert_eq!(isos.len(), 2);
        let isos = iso1_enumerate(&SRing::trivial(&ctx(3, 1)), ISO_LIMIT, &d()).unwrap();
        assert_eq!(isos.len(), 2);
        let isos = iso1_enumerate(&SRing::discrete(&ctx(3, 2)), ISO_LIMIT, &d()).unwrap();
        assert_eq!(isos.len(), 48);
    }

    #[test]
    fn kernels() {
        let e = exceptional(3);
        let w = e.thin_radical().unwrap();
        assert_eq!(kernel_on_quotient(&e, &w, &d()).unwrap().order(), BigUint::from(3u32));
        let c = ctx(3, 3);
        let l = span_of_indices(&c, &[9]);
        assert_eq!(kernel_on_quotient(&SRing::discrete(&c), &l, &d()).unwrap().order(), BigUint::from(3u32));
        let q1 = SRing::discrete(&ctx(3, 1));
        let c2 = ctx(3, 2);
        let k = span_of_indices(&c2, &[1]);
        let w2 = wreath_sring(&q1, &q1, &k).unwrap();
        assert_eq!(kernel_on_quotient(&w2, &k, &d()).unwrap().order(), BigUint::from(27u32));
    }
}
