//! Seeded property suites over generated corpora.

use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    aut_group, decomposability_witness, is_ci_sring, is_ci_subset, kernel_on_quotient, schurian_with, teq_minimal_with,
};
use crate::budget::Deadline;
use crate::build::{generated_sring, transitivity_module};
use crate::catalog::{ll2_sring, unitriangular_modules};
use crate::error::{Error, Result};
use crate::gfp::{random_unitriangular, span_of_indices, AutMatrix, GroupContext, Subspace};
use crate::perm::{
    centralizer_subspace, matrix_permutation, regular_elem_abelian_subgroups, translation, translation_generators,
    two_closure, PermGroup, Permutation,
};
use crate::sring::{radical, span_subgroup, SRing};

pub const SUITES: &[&str] = &[
    "schur-multiplier",
    "radical-span-subgroups",
    "eT-shift",
    "coset-profile",
    "pS-thin-radical",
    "pS-chain",
    "hm5-wreath",
    "L-p-S2",
    "kernel",
    "center-G2",
    "p-closure",
    "hm1-quotient-closure",
    "hm2-orbit",
    "teq-z34",
    "ci-z33",
    "ll-suite",
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub p: u32,
    pub seed: u64,
    pub trials: usize,
    pub cases: usize,
    /// Cases abandoned for size reasons; never counted as passes.
    pub skipped: Vec<String>,
    pub failures: Vec<String>,
    pub wall_time_secs: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One input of a suite, with a description sufficient to rebuild it.
struct Case {
    input: String,
    a: SRing,
}

#[derive(Default)]
struct Tally {
    cases: usize,
    skipped: Vec<String>,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, input: &str, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(format!("{input}: {}", what()));
        }
    }

    /// Size limits become skips; anything else is fatal.
    fn soft<T>(&mut self, input: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::SizeLimit(m)) => {
                self.skipped.push(format!("{input}: {m}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

fn describe_set(ctx: &GroupContext, set: &[usize]) -> String {
    let s: Vec<String> = set.iter().map(|x| x.to_string()).collect();
    format!("p={} n={} set={}", ctx.p(), ctx.n(), s.join(","))
}

fn describe_mats(ctx: &GroupContext, mats: &[AutMatrix]) -> String {
    let m: Vec<String> = mats
        .iter()
        .map(|m| {
            m.rows()
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("/")
        })
        .collect();
    format!("p={} n={} matrices={}", ctx.p(), ctx.n(), m.join(";"))
}

/// A subset of `H \ {0}` of uniformly random size.
fn random_set(ctx: &GroupContext, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let m = ctx.order() - 1;
    let k = rng.gen_range(0..=m);
    let mut s: Vec<usize> = sample(rng, m, k).into_iter().map(|x| x + 1).collect();
    s.sort_unstable();
    s
}

fn random_generated(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline) -> Result<Vec<Case>> {
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        d.check()?;
        let s = random_set(ctx, rng);
        out.push(Case { input: describe_set(ctx, &s), a: generated_sring(ctx, &s)? });
    }
    Ok(out)
}

fn random_ut_gens(ctx: &GroupContext, rng: &mut ChaCha8Rng, max: usize) -> Vec<AutMatrix> {
    let k = rng.gen_range(1..=max);
    (0..k).map(|_| random_unitriangular(ctx, rng)).collect()
}

fn ut_cases(ctx: &GroupContext, d: &Deadline) -> Result<Vec<Case>> {
    let (_, mods) = unitriangular_modules(ctx, d)?;
    Ok(mods.into_iter().map(|(g, a)| Case { input: describe_mats(ctx, &g), a }).collect())
}

/// Random S-rings followed by all unitriangular modules.
fn mixed_corpus(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline) -> Result<Vec<Case>> {
    let mut c = random_generated(ctx, rng, trials, d)?;
    c.extend(ut_cases(ctx, d)?);
    Ok(c)
}

fn affine_group(ctx: &GroupContext, mats: &[AutMatrix]) -> Result<PermGroup> {
    let mut gens = translation_generators(ctx);
    gens.extend(mats.iter().map(|m| matrix_permutation(ctx, m)));
    PermGroup::new(ctx.order(), gens)
}

fn shift(ctx: &GroupContext, e: usize, class: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = class.iter().map(|&t| ctx.add(e, t)).collect();
    v.sort_unstable();
    v
}

fn coset_blocks(ctx: &GroupContext, k: &Subspace) -> (Vec<usize>, usize) {
    let q = GroupContext::new(ctx.p(), ctx.n() - k.dim()).expect("valid quotient");
    let blocks = (0..ctx.order()).map(|x| q.index_of(&k.quotient_coords(&ctx.coords(x)))).collect();
    (blocks, q.order())
}

fn check_p(p: u32) -> Result<()> {
    if p < 3 || !crate::gfp::is_prime(p) || p > 7 {
        return Err(Error::Unsupported(format!("p = {p}")));
    }
    Ok(())
}

pub fn verify_suite(name: &str, p: u32, seed: u64, trials: usize, d: &Deadline) -> Result<SuiteReport> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    check_p(p)?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = GroupContext::new(p, 3)?;
    let mut t = Tally::default();
    match name {
        "schur-multiplier" => schur_multiplier(&ctx, &mut rng, trials, d, &mut t)?,
        "radical-span-subgroups" => radical_span(&ctx, &mut rng, trials, d, &mut t)?,
        "eT-shift" => et_shift(&ctx, &mut rng, trials, d, &mut t)?,
        "coset-profile" => coset_profile(&ctx, &mut rng, trials, d, &mut t)?,
        "pS-thin-radical" => ps_thin_radical(&ctx, d, &mut t)?,
        "pS-chain" => ps_chain(&ctx, d, &mut t)?,
        "hm5-wreath" => hm5_wreath(&ctx, &mut rng, trials, d, &mut t)?,
        "L-p-S2" => lps2(&ctx, d, &mut t)?,
        "kernel" => kernel(&ctx, d, &mut t)?,
        "center-G2" => center_g2(&ctx, &mut rng, trials, d, &mut t)?,
        "p-closure" => p_closure(&ctx, &mut rng, trials, d, &mut t)?,
        "hm1-quotient-closure" => hm1(&ctx, &mut rng, trials, d, &mut t)?,
        "hm2-orbit" => hm2(&ctx, d, &mut t)?,
        "teq-z34" => teq_z34(p, &mut rng, trials, d, &mut t)?,
        "ci-z33" => ci_z33(&ctx, &mut rng, trials, d, &mut t)?,
        "ll-suite" => ll_suite(p, d, &mut t)?,
        _ => unreachable!("checked against SUITES"),
    }
    Ok(SuiteReport {
        name: name.to_string(),
        p,
        seed,
        trials,
        cases: t.cases,
        skipped: t.skipped,
        failures: t.failures,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

fn schur_multiplier(
    ctx: &GroupContext,
    rng: &mut ChaCha8Rng,
    trials: usize,
    d: &Deadline,
    t: &mut Tally,
) -> Result<()> {
    for c in random_generated(ctx, rng, trials, d)? {
        t.cases += 1;
        for k in 2..ctx.p() {
            let mut hit = vec![false; c.a.rank()];
            for id in 0..c.a.rank() {
                match c.a.scaled_class(id, k)? {
                    Some(j) => hit[j] = true,
                    None => t.check(false, &c.input, || format!("{k} * class {id} is not a class")),
                }
            }
            t.check(hit.iter().all(|&h| h), &c.input, || format!("scaling by {k} is not onto"));
        }
    }
    Ok(())
}

fn radical_span(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    for c in mixed_corpus(ctx, rng, trials, d)? {
        t.cases += 1;
        for (id, class) in c.a.classes().iter().enumerate() {
            let r = radical(ctx, class);
            t.check(c.a.is_subring_subgroup(&r), &c.input, || {
                format!("radical of class {id} is not an S-ring subgroup")
            });
            let s = span_subgroup(ctx, class);
            t.check(c.a.is_subring_subgroup(&s), &c.input, || format!("span of class {id} is not an S-ring subgroup"));
        }
    }
    Ok(())
}

fn et_shift(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    for c in mixed_corpus(ctx, rng, trials, d)? {
        t.cases += 1;
        let thin = c.a.thin_radical()?.elements(ctx);
        for &e in &thin {
            for (id, class) in c.a.classes().iter().enumerate() {
                let moved = shift(ctx, e, class);
                let target = c.a.class_of(moved[0]);
                t.check(c.a.classes()[target] == moved, &c.input, || format!("{e} + class {id} is not a class"));
            }
        }
    }
    Ok(())
}

fn coset_profile(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    for c in mixed_corpus(ctx, rng, trials, d)? {
        t.cases += 1;
        for k in c.a.a_subgroups()? {
            for id in 0..c.a.rank() {
                match c.a.coset_intersection_profile(&k, id) {
                    Ok(_) => {}
                    Err(Error::NonConstantProfile(m)) => t.check(false, &c.input, || format!("subgroup {k}: {m}")),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(())
}

fn ps_thin_radical(ctx: &GroupContext, d: &Deadline, t: &mut Tally) -> Result<()> {
    for c in ut_cases(ctx, d)? {
        t.cases += 1;
        t.check(c.a.is_p_sring(), &c.input, || "not a p-S-ring".into());
        t.check(!c.a.thin_radical()?.is_trivial(), &c.input, || "trivial thin radical".into());
    }
    Ok(())
}

fn ps_chain(ctx: &GroupContext, d: &Deadline, t: &mut Tally) -> Result<()> {
    for c in ut_cases(ctx, d)? {
        t.cases += 1;
        match c.a.subgroup_chain() {
            Ok(chain) => {
                let ok = chain.windows(2).all(|w| w[1].dim() == w[0].dim() + 1) && chain.len() == ctx.n() + 1;
                t.check(ok, &c.input, || "chain steps are not of index p".into());
            }
            Err(Error::Corrupted(m)) => t.check(false, &c.input, || m),
            Err(Error::NotPSring) => t.check(false, &c.input, || "not a p-S-ring".into()),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// A class of size `|H|/p` forces `A = A_K wr A_(H/K)` for some `K` of index `p`.
fn hm5_wreath(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    let mut corpus = mixed_corpus(ctx, rng, trials, d)?;
    let ctx4 = GroupContext::new(ctx.p(), 4)?;
    for _ in 0..trials {
        d.check()?;
        let mats = random_ut_gens(&ctx4, rng, 2);
        corpus.push(Case { input: describe_mats(&ctx4, &mats), a: transitivity_module(&ctx4, &mats)? });
    }
    for c in corpus {
        let ctx = c.a.ctx();
        let big = ctx.order() / ctx.p() as usize;
        if !c.a.is_p_sring() || !c.a.classes().iter().any(|cl| cl.len() == big) {
            continue;
        }
        t.cases += 1;
        let subs = c.a.a_subgroups()?;
        let wreath = subs.iter().filter(|k| k.dim() + 1 == ctx.n()).any(|k| {
            c.a.classes()
                .iter()
                .filter(|cl| !k.contains_index(ctx, cl[0]))
                .all(|cl| radical(ctx, cl).contains_subspace(k).unwrap_or(false))
        });
        t.check(wreath, &c.input, || "no index-p subgroup gives a wreath decomposition".into());
        t.check(decomposability_witness(&c.a)?.is_some(), &c.input, || "no decomposability witness".into());
    }
    Ok(())
}

fn lps2(ctx: &GroupContext, d: &Deadline, t: &mut Tally) -> Result<()> {
    let big = ctx.order() / ctx.p() as usize;
    for c in ut_cases(ctx, d)? {
        t.cases += 1;
        let a = &c.a;
        let subs = a.a_subgroups()?;
        let thin = a.thin_radical()?;
        for k in subs.iter().filter(|k| k.dim() + 1 == ctx.n()) {
            let o_k = thin.intersection(k)?;
            for (id, class) in a.classes().iter().enumerate() {
                let key = k.quotient_coords(&ctx.coords(class[0]));
                let one_coset = class.iter().all(|&x| k.quotient_coords(&ctx.coords(x)) == key);
                t.check(one_coset, &c.input, || format!("(i) class {id} meets several cosets of {k}"));
                if o_k.order() * class.len() > big {
                    let meet = thin.intersection(&radical(ctx, class))?;
                    t.check(!meet.is_trivial(), &c.input, || format!("(iii) class {id} with {k}"));
                }
            }
        }
        for l in subs.iter().filter(|l| l.dim() == 1) {
            for (id, class) in a.classes().iter().enumerate() {
                if radical(ctx, class).contains_subspace(l)? {
                    continue;
                }
                let k = a.coset_intersection_profile(l, id)?;
                t.check(k == 1, &c.input, || format!("(ii) class {id} meets cosets of {l} in {k} points"));
            }
        }
    }
    Ok(())
}

/// Indecomposable rings: the kernel on cosets of an order-`p` S-ring subgroup `W` is `W_R`.
fn kernel(ctx: &GroupContext, d: &Deadline, t: &mut Tally) -> Result<()> {
    for c in ut_cases(ctx, d)? {
        if decomposability_witness(&c.a)?.is_some() {
            continue;
        }
        for w in c.a.a_subgroups()?.into_iter().filter(|w| w.dim() == 1) {
            t.cases += 1;
            let k = kernel_on_quotient(&c.a, &w, d)?;
            let wr = w.elements(ctx).into_iter().all(|x| k.contains(&translation(ctx, x)));
            let ok = wr && k.order() == BigUint::from(ctx.p());
            t.check(ok, &c.input, || format!("kernel over {w} has order {}", k.order()));
        }
    }
    Ok(())
}

fn random_groups(
    ctx: &GroupContext,
    rng: &mut ChaCha8Rng,
    trials: usize,
    with_scalar: bool,
) -> Result<Vec<(String, Vec<AutMatrix>, PermGroup)>> {
    let minus = AutMatrix::new(
        ctx,
        (0..ctx.n()).map(|i| (0..ctx.n()).map(|j| if i == j { ctx.p() - 1 } else { 0 }).collect()).collect(),
    )?;
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut mats = random_ut_gens(ctx, rng, 2);
        if with_scalar && rng.gen_bool(0.5) {
            mats.push(minus.clone());
        }
        let g = affine_group(ctx, &mats)?;
        out.push((describe_mats(ctx, &mats), mats, g));
    }
    Ok(out)
}

fn center_g2(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    for (input, _, g) in random_groups(ctx, rng, trials, true)? {
        t.cases += 1;
        let center: Vec<Permutation> =
            g.elements()?.into_iter().filter(|z| g.generators().iter().all(|s| s.commutes_with(z))).collect();
        let g2 = two_closure(&g, d)?;
        let ok = center.iter().all(|z| g2.generators().iter().all(|s| s.commutes_with(z)));
        t.check(ok, &input, || "a central element of G is not central in the 2-closure".into());
    }
    Ok(())
}

fn p_closure(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    for (input, _, g) in random_groups(ctx, rng, trials, false)? {
        t.cases += 1;
        let g2 = two_closure(&g, d)?;
        t.check(g2.is_p_group(ctx.p()), &input, || format!("2-closure has order {}", g2.order()));
    }
    Ok(())
}

fn hm1(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    for (input, mats, g) in random_groups(ctx, rng, trials, true)? {
        let inv = transitivity_module(ctx, &mats)?;
        let blocks: Vec<Subspace> =
            inv.a_subgroups()?.into_iter().filter(|k| !k.is_trivial() && !k.is_full()).collect();
        let g2 = two_closure(&g, d)?;
        for k in blocks {
            t.cases += 1;
            let (block_of, nb) = coset_blocks(ctx, &k);
            let lhs = g2.induced_on_blocks(&block_of, nb)?;
            let rhs = two_closure(&g.induced_on_blocks(&block_of, nb)?, d)?;
            t.check(rhs.contains_group(&lhs), &input, || format!("blocks of {k}: induced 2-closure not contained"));
        }
    }
    Ok(())
}

/// A `G_0`-orbit of size `p` generating `H` forces `|G| = p |H|`.
fn hm2(ctx: &GroupContext, d: &Deadline, t: &mut Tally) -> Result<()> {
    let p = ctx.p() as usize;
    let expected = BigUint::from(p * ctx.order());
    for c in ut_cases(ctx, d)? {
        let generating = |a: &SRing| a.classes().iter().any(|cl| cl.len() == p && span_subgroup(ctx, cl).is_full());
        if !generating(&c.a) {
            continue;
        }
        t.cases += 1;
        let aut = aut_group(&c.a, d)?;
        t.check(schurian_with(&c.a, &aut), &c.input, || "not Schurian".into());
        t.check(aut.order() == expected, &c.input, || format!("|Aut| = {}", aut.order()));
    }
    Ok(())
}

fn teq_z34(p: u32, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    let ctx = GroupContext::new(p, 4)?;
    let mut attempts = 0;
    let mut done = 0;
    while done < trials && attempts < 50 * trials.max(1) {
        attempts += 1;
        d.check()?;
        let mats = random_ut_gens(&ctx, rng, 2);
        let a = transitivity_module(&ctx, &mats)?;
        if decomposability_witness(&a)?.is_some() {
            continue;
        }
        done += 1;
        let input = describe_mats(&ctx, &mats);
        let aut = aut_group(&a, d)?;
        t.check(schurian_with(&a, &aut), &input, || "not Schurian".into());
        if let Some(min) = t.soft(&input, teq_minimal_with(&a, &aut, d))? {
            t.cases += 1;
            t.check(min, &input, || format!("not 2-minimal (|Aut| = {})", aut.order()));
        }
    }
    if done < trials {
        t.skipped.push(format!("only {done} indecomposable modules in {attempts} draws"));
    }
    Ok(())
}

fn ci_z33(ctx: &GroupContext, rng: &mut ChaCha8Rng, trials: usize, d: &Deadline, t: &mut Tally) -> Result<()> {
    for _ in 0..trials {
        let s = random_set(ctx, rng);
        let input = describe_set(ctx, &s);
        if let Some(cert) = t.soft(&input, is_ci_subset(ctx, &s, d))? {
            t.cases += 1;
            t.check(cert.ci, &input, || "not CI".into());
        }
    }
    Ok(())
}

fn ll_suite(p: u32, d: &Deadline, t: &mut Tally) -> Result<()> {
    let (a, l) = ll2_sring(p)?;
    let ctx = a.ctx().clone();
    let input = format!("ll2 p={p}");
    let pu = p as usize;
    let u = centralizer_subspace(&ctx, &l)?;
    t.cases += 1;
    t.check(u.dim() == 3, &input, || format!("centralizer has dimension {}", u.dim()));
    let abelian = l[0].mul(&l[1]) == l[1].mul(&l[0]) && l.iter().all(|m| m.pow(p as u64).is_identity());
    t.check(abelian, &input, || "L is not elementary abelian".into());
    for (id, class) in a.classes().iter().enumerate().filter(|(_, c)| c.len() > 1) {
        let x: Vec<usize> = class.iter().map(|&h| ctx.sub(h, class[0])).collect();
        let xs = span_of_indices(&ctx, &x);
        let ok = xs.order() == pu * pu && xs.order() == class.len() && u.contains_subspace(&xs)?;
        t.check(ok, &input, || format!("class {id} is not a coset of an order-p^2 subgroup of C_H(L)"));
    }
    t.check(decomposability_witness(&a)?.is_none(), &input, || "decomposable".into());
    let aut = aut_group(&a, d)?;
    t.cases += 1;
    t.check(aut.order() == BigUint::from(pu).pow(8), &input, || format!("|Aut| = {}", aut.order()));
    let regs = regular_elem_abelian_subgroups(&aut, &ctx, d)?;
    t.cases += 1;
    t.check(regs.len() == pu, &input, || format!("{} regular subgroups", regs.len()));
    let cert = is_ci_sring(&a, d)?;
    t.check(cert.ci, &input, || "not CI".into());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        let e = verify_suite("nope", 3, 1, 1, &Deadline::none()).unwrap_err();
        assert_eq!(e, Error::UnknownSuite("nope".into()));
    }

    #[test]
    fn deterministic() {
        let d = Deadline::none();
        let a = verify_suite("schur-multiplier", 3, 7, 5, &d).unwrap();
        let b = verify_suite("schur-multiplier", 3, 7, 5, &d).unwrap();
        assert_eq!((a.cases, &a.failures), (b.cases, &b.failures));
        assert!(a.passed());
    }
}
