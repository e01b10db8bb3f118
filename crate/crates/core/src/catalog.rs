//! Named S-rings and the classification of unitriangular transitivity modules over `Z_p^3`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::analysis::{aut_group, cayley_isomorphic, fingerprint, schurian_with, Fingerprint};
use crate::budget::Deadline;
use crate::build::transitivity_module;
use crate::error::{Error, Result};
use crate::gfp::{unitriangular_group, AutMatrix, GroupContext};
use crate::io::serialize_sring;
use crate::sring::SRing;

fn odd_prime_up_to(p: u32, max: u32) -> Result<()> {
    if p < 3 || p > max || !crate::gfp::is_prime(p) {
        return Err(Error::Unsupported(format!("p = {p}")));
    }
    Ok(())
}

/// The unipotent Jordan block on `Z_p^3`.
pub fn jordan_block(ctx: &GroupContext) -> AutMatrix {
    let n = ctx.n();
    let rows = (0..n).map(|i| (0..n).map(|j| (i == j || j == i + 1) as u32).collect()).collect();
    AutMatrix::new(ctx, rows).expect("unipotent")
}

/// Transitivity module of the Jordan block over `Z_p^3`, `p <= 7`.
pub fn exceptional_sring(p: u32) -> Result<SRing> {
    odd_prime_up_to(p, 7)?;
    let ctx = GroupContext::new(p, 3)?;
    transitivity_module(&ctx, &[jordan_block(&ctx)])
}

/// The commuting pair `x: e0 -> e0+e2, e1 -> e1+e3` and `y: e0 -> e0+e3, e1 -> e1+e4` on `Z_p^5`.
pub fn ll2_matrices(ctx: &GroupContext) -> Result<[AutMatrix; 2]> {
    if ctx.n() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: ctx.n() });
    }
    let unit = |i: usize| (0..5).map(|j| (i == j) as u32).collect::<Vec<u32>>();
    let add = |i: usize, j: usize| {
        let mut r = unit(i);
        r[j] = 1;
        r
    };
    let x = vec![add(0, 2), add(1, 3), unit(2), unit(3), unit(4)];
    let y = vec![add(0, 3), add(1, 4), unit(2), unit(3), unit(4)];
    Ok([AutMatrix::new(ctx, x)?, AutMatrix::new(ctx, y)?])
}

pub fn ll2_sring(p: u32) -> Result<(SRing, [AutMatrix; 2])> {
    if p != 3 && p != 5 {
        return Err(Error::Unsupported(format!("p = {p}")));
    }
    let ctx = GroupContext::new(p, 5)?;
    let l = ll2_matrices(&ctx)?;
    Ok((transitivity_module(&ctx, &l)?, l))
}

/// Which of the six rows a fingerprint belongs to, if any.
pub fn table1_row(p: u32, f: &Fingerprint) -> Option<u8> {
    let p = p as usize;
    let sizes_row3 = vec![(1, p), (p, p * p - 1)];
    if f.rank == p * p * p {
        Some(1)
    } else if f.sizes == vec![(1, p * p), (p * p, p - 1)] {
        Some(2)
    } else if f.sizes == sizes_row3 && f.decomposable {
        Some(3)
    } else if f.rank == 2 * p * p - p {
        Some(4)
    } else if f.rank == 3 * p - 2 {
        Some(5)
    } else if f.sizes == sizes_row3 && !f.decomposable {
        Some(6)
    } else {
        None
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEntry {
    pub row: Option<u8>,
    pub fingerprint: Fingerprint,
    pub schurian: bool,
    pub aut_order: String,
    pub member_count: usize,
    /// Canonical file text of the least member.
    pub representative: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub p: u32,
    pub n: usize,
    pub scope: String,
    pub total_inputs: usize,
    pub distinct_srings: usize,
    pub classes: Vec<ClassEntry>,
}

impl ClassificationReport {
    /// Exactly six classes, one per row.
    pub fn matches_table(&self) -> bool {
        let rows: BTreeSet<Option<u8>> = self.classes.iter().map(|c| c.row).collect();
        self.classes.len() == 6 && rows.len() == 6 && !rows.contains(&None)
    }
}

/// Subgroups of `UT(3, p)` are generated by two elements, so pairs suffice.
pub(crate) fn unitriangular_modules(
    ctx: &GroupContext,
    deadline: &Deadline,
) -> Result<(usize, Vec<([AutMatrix; 2], SRing)>)> {
    let ut = unitriangular_group(ctx)?;
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut total = 0;
    for (i, a) in ut.iter().enumerate() {
        deadline.check()?;
        for b in &ut[i..] {
            total += 1;
            let m = transitivity_module(ctx, &[a.clone(), b.clone()])?;
            if seen.insert(m.labels().to_vec()) {
                out.push(([a.clone(), b.clone()], m));
            }
        }
    }
    Ok((total, out))
}

pub fn build_table1(p: u32, deadline: &Deadline) -> Result<ClassificationReport> {
    if p != 3 && p != 5 {
        return Err(Error::Unsupported(format!("p = {p}")));
    }
    let ctx = GroupContext::new(p, 3)?;
    let (total, modules) = unitriangular_modules(&ctx, deadline)?;
    let distinct = modules.len();
    // (fingerprint, representative, members)
    let mut classes: Vec<(Fingerprint, SRing, Vec<String>)> = Vec::new();
    for (_, m) in modules {
        deadline.check()?;
        let f = fingerprint(&m)?;
        let text = serialize_sring(&m);
        let mut placed = false;
        for (cf, rep, members) in classes.iter_mut() {
            if *cf == f && cayley_isomorphic(rep, &m, deadline)?.is_some() {
                members.push(text.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push((f, m, vec![text]));
        }
    }
    let mut entries = Vec::with_capacity(classes.len());
    for (f, rep, mut members) in classes {
        members.sort();
        let aut = aut_group(&rep, deadline)?;
        entries.push(ClassEntry {
            row: table1_row(p, &f),
            schurian: schurian_with(&rep, &aut),
            aut_order: aut.order().to_string(),
            fingerprint: f,
            member_count: members.len(),
            representative: members.swap_remove(0),
        });
    }
    entries
        .sort_by(|a, b| (a.row.is_none(), a.row, &a.representative).cmp(&(b.row.is_none(), b.row, &b.representative)));
    Ok(ClassificationReport {
        p,
        n: 3,
        scope: "classes realized by unitriangular transitivity modules".into(),
        total_inputs: total,
        distinct_srings: distinct,
        classes: entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn exceptional_shapes() {
        let e3 = exceptional_sring(3).unwrap();
        assert_eq!(e3.rank(), 11);
        assert_eq!(e3.thin_radical().unwrap().order(), 3);
        let e5 = exceptional_sring(5).unwrap();
        assert_eq!(e5.size_multiset(), vec![(1, 5), (5, 24)]);
        assert_eq!(exceptional_sring(11), Err(Error::Unsupported("p = 11".into())));
        assert!(exceptional_sring(9).is_err());
    }

    #[test]
    fn ll2_shape() {
        let (a, l) = ll2_sring(3).unwrap();
        assert_eq!(a.rank(), 51);
        assert!(l[0].mul(&l[1]) == l[1].mul(&l[0]));
        assert!(crate::analysis::decomposability_witness(&a).unwrap().is_none());
        assert!(ll2_sring(7).is_err());
    }

    #[test]
    fn table_p3() {
        let r = build_table1(3, &Deadline::none()).unwrap();
        assert!(r.matches_table(), "{r:#?}");
        assert!(r.classes.iter().all(|c| c.schurian));
        let indecomposable: Vec<usize> =
            r.classes.iter().filter(|c| !c.fingerprint.decomposable).map(|c| c.fingerprint.rank).collect();
        assert_eq!(indecomposable, vec![27, 11]);
        let exc = r.classes.iter().find(|c| c.row == Some(6)).unwrap();
        assert_eq!(exc.aut_order, BigUint::from(81u32).to_string());
    }
}
