//! Arithmetic over GF(p): the group `Z_p^n` as a vector space, its subspaces
//! in reduced row echelon form, and invertible matrices acting on row vectors.
//!
//! Elements of the group are addressed by index, with little-endian base-p
//! digits: the vector `(c_0, .., c_{n-1})` has index `sum c_i p^i`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Enumerations (subspaces, matrix groups) refuse to produce more items than this.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Largest group order a context accepts. Operations that promise exact
/// answers are only guaranteed up to `3^5 = 243` elements.
pub const MAX_ORDER: usize = 1 << 14;

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

struct Inner {
    p: u32,
    n: usize,
    order: usize,
    digits: Vec<u8>,
}

/// The ambient group `H = Z_p^n` together with the element/index bijection.
#[derive(Clone)]
pub struct GroupContext {
    inner: Arc<Inner>,
}

impl PartialEq for GroupContext {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.n() == other.n()
    }
}
impl Eq for GroupContext {}

impl fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}^{}", self.p(), self.n())
    }
}

impl GroupContext {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        if !(3..=251).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidContext(format!("p = {p} is not an odd prime below 256")));
        }
        if n > 8 {
            return Err(Error::InvalidContext(format!("rank n = {n} too large")));
        }
        let order = (p as usize)
            .checked_pow(n as u32)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::SizeLimit(format!("|Z_{p}^{n}| exceeds {MAX_ORDER}")))?;
        let mut digits = vec![0u8; order * n];
        for i in 0..order {
            let mut x = i;
            for k in 0..n {
                digits[i * n + k] = (x % p as usize) as u8;
                x /= p as usize;
            }
        }
        Ok(Self { inner: Arc::new(Inner { p, n, order, digits }) })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.n
    }

    /// `p^n`.
    #[inline]
    pub fn order(&self) -> usize {
        self.inner.order
    }

    #[inline]
    pub fn digit(&self, index: usize, k: usize) -> u32 {
        self.inner.digits[index * self.inner.n + k] as u32
    }

    pub fn coords(&self, index: usize) -> Vec<u32> {
        let n = self.n();
        self.inner.digits[index * n..(index + 1) * n].iter().map(|&d| d as u32).collect()
    }

    /// Index of an already reduced coordinate vector.
    #[inline]
    pub fn index_of(&self, coords: &[u32]) -> usize {
        let p = self.p() as usize;
        coords.iter().rev().fold(0usize, |acc, &c| acc * p + c as usize)
    }

    pub fn vector(&self, index: usize) -> Result<GroupVector> {
        if index >= self.order() {
            return Err(Error::OutOfRange(format!("index {index} not below {}", self.order())));
        }
        Ok(GroupVector { coords: self.coords(index) })
    }

    pub fn index(&self, v: &GroupVector) -> Result<usize> {
        self.check_vector(&v.coords)?;
        Ok(self.index_of(&v.coords))
    }

    pub(crate) fn check_vector(&self, coords: &[u32]) -> Result<()> {
        if coords.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: coords.len() });
        }
        if let Some(c) = coords.iter().find(|&&c| c >= self.p()) {
            return Err(Error::OutOfRange(format!("coordinate {c} not reduced mod {}", self.p())));
        }
        Ok(())
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        let (p, n) = (self.p() as usize, self.n());
        let d = &self.inner.digits;
        let mut idx = 0;
        for k in (0..n).rev() {
            let s = d[a * n + k] as usize + d[b * n + k] as usize;
            idx = idx * p + if s >= p { s - p } else { s };
        }
        idx
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        let (p, n) = (self.p() as usize, self.n());
        let d = &self.inner.digits;
        let mut idx = 0;
        for k in (0..n).rev() {
            let x = d[a * n + k] as usize;
            idx = idx * p + if x == 0 { 0 } else { p - x };
        }
        idx
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn scale(&self, k: u32, a: usize) -> usize {
        let p = self.p();
        let coords: Vec<u32> = self.coords(a).iter().map(|&c| (c * (k % p)) % p).collect();
        self.index_of(&coords)
    }

    /// Index of the `i`-th standard basis vector.
    pub fn unit(&self, i: usize) -> usize {
        (self.p() as usize).pow(i as u32)
    }
}

/// An element of `Z_p^n` as a coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupVector {
    pub coords: Vec<u32>,
}

impl GroupVector {
    pub fn new(coords: Vec<u32>) -> Self {
        Self { coords }
    }
}

fn rref_rows(p: u32, n: usize, mut rows: Vec<Vec<u32>>) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][col], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..n {
                    rows[i][c] = (rows[i][c] + (p - f) * rows[r][c]) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A subgroup of `Z_p^n`, held as the reduced row echelon basis of the
/// corresponding subspace. Equal subspaces have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    p: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

/// Canonical subspace spanned by `vectors`.
pub fn rref_span(ctx: &GroupContext, vectors: &[GroupVector]) -> Result<Subspace> {
    for v in vectors {
        ctx.check_vector(&v.coords)?;
    }
    Ok(Subspace::from_rows(ctx.p(), ctx.n(), vectors.iter().map(|v| v.coords.clone()).collect()))
}

/// Canonical subspace spanned by a set of element indices.
pub fn span_of_indices(ctx: &GroupContext, elements: &[usize]) -> Subspace {
    let mut basis = Subspace::trivial(ctx);
    for &e in elements {
        if !basis.contains_index(ctx, e) {
            let mut rows = basis.rows.clone();
            rows.push(ctx.coords(e));
            basis = Subspace::from_rows(ctx.p(), ctx.n(), rows);
        }
    }
    basis
}

impl Subspace {
    pub(crate) fn from_rows(p: u32, n: usize, rows: Vec<Vec<u32>>) -> Self {
        let (rows, pivots) = rref_rows(p, n, rows);
        Self { p, n, rows, pivots }
    }

    pub fn trivial(ctx: &GroupContext) -> Self {
        Self { p: ctx.p(), n: ctx.n(), rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ctx: &GroupContext) -> Self {
        let rows = (0..ctx.n()).map(|i| (0..ctx.n()).map(|j| u32::from(i == j)).collect()).collect();
        Self { p: ctx.p(), n: ctx.n(), rows, pivots: (0..ctx.n()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Number of elements, `p^dim`.
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.dim() as u32)
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_indices(&self, ctx: &GroupContext) -> Vec<usize> {
        self.rows.iter().map(|r| ctx.index_of(r)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.n != other.n {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub(crate) fn check_ctx(&self, ctx: &GroupContext) -> Result<()> {
        if self.p != ctx.p() || self.n != ctx.n() {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Canonical representative of the coset `v + self`: pivot coordinates cleared.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                for c in 0..self.n {
                    v[c] = (v[c] + (p - f) * row[c]) % p;
                }
            }
        }
        v
    }

    pub fn contains_vec(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    pub fn contains_index(&self, ctx: &GroupContext, i: usize) -> bool {
        self.contains_vec(&ctx.coords(i))
    }

    /// Coordinates of `v` with respect to the echelon basis, if `v` lies in the subspace.
    pub fn coords_of(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains_vec(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    /// The vector with the given coordinates in the echelon basis.
    pub fn from_coords(&self, coords: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut v = vec![0u32; self.n];
        for (row, &c) in self.rows.iter().zip(coords) {
            for k in 0..self.n {
                v[k] = (v[k] + c * row[k]) % p;
            }
        }
        v
    }

    /// Columns that are not pivots; these coordinatize the quotient by `self`.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.n).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Coordinates of the coset `v + self` in `Z_p^(n - dim)`.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let r = self.reduce(v);
        self.free_columns().into_iter().map(|c| r[c]).collect()
    }

    /// Canonical coset representative with the given quotient coordinates.
    pub fn quotient_lift(&self, q: &[u32]) -> Vec<u32> {
        let mut v = vec![0u32; self.n];
        for (c, &x) in self.free_columns().into_iter().zip(q) {
            v[c] = x;
        }
        v
    }

    /// All element indices, sorted.
    pub fn elements(&self, ctx: &GroupContext) -> Vec<usize> {
        let p = self.p;
        let d = self.dim();
        let total = self.order();
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u32; d];
        for _ in 0..total {
            out.push(ctx.index_of(&self.from_coords(&coeffs)));
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
        out.sort_unstable();
        out
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self::from_rows(self.p, self.n, rows))
    }

    /// Intersection by the Zassenhaus sum-intersection algorithm.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let n = self.n;
        let mut rows = Vec::new();
        for r in &self.rows {
            let mut row = r.clone();
            row.extend_from_slice(r);
            rows.push(row);
        }
        for r in &other.rows {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(0, n));
            rows.push(row);
        }
        let (reduced, _) = rref_rows(self.p, 2 * n, rows);
        let inter =
            reduced.into_iter().filter(|row| row[..n].iter().all(|&c| c == 0)).map(|row| row[n..].to_vec()).collect();
        Ok(Self::from_rows(self.p, n, inter))
    }

    pub fn contains_subspace(&self, other: &Self) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(other.rows.iter().all(|r| self.contains_vec(r)))
    }

    /// Image of this subspace in the quotient by `by` (which need not be contained in it).
    pub fn image_in_quotient(&self, by: &Subspace) -> Subspace {
        let m = self.n - by.dim();
        Subspace::from_rows(self.p, m, self.rows.iter().map(|r| by.quotient_coords(r)).collect())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, c) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        write!(f, ">")
    }
}

/// Sum, intersection and containment of two subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOps {
    pub sum: Subspace,
    pub intersection: Subspace,
    pub contains: bool,
}

pub fn subspace_lattice_ops(a: &Subspace, b: &Subspace) -> Result<LatticeOps> {
    Ok(LatticeOps { sum: a.sum(b)?, intersection: a.intersection(b)?, contains: a.contains_subspace(b)? })
}

/// Gaussian binomial coefficient `[n choose k]_p`.
pub fn gaussian_binomial(p: u32, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= p.pow((n - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// All subspaces of the given dimension, each exactly once, in canonical order.
pub fn enumerate_subspaces(ctx: &GroupContext, dim: usize) -> Result<Vec<Subspace>> {
    let (p, n) = (ctx.p(), ctx.n());
    if dim > n {
        return Err(Error::OutOfRange(format!("dimension {dim} exceeds rank {n}")));
    }
    let count = gaussian_binomial(p, n, dim);
    if count > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit(format!("{count} subspaces of dimension {dim}")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // free entries: row r, column c > pivot r, c not a pivot
        let free: Vec<(usize, usize)> = (0..dim)
            .flat_map(|r| {
                let pv = pivots.clone();
                ((pv[r] + 1)..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut vals = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![0u32; n]; dim];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&vals) {
                rows[r][c] = v;
            }
            out.push(Subspace { p, n, rows, pivots: pivots.clone() });
            let mut k = 0;
            while k < vals.len() {
                vals[k] += 1;
                if vals[k] < p {
                    break;
                }
                vals[k] = 0;
                k += 1;
            }
            if k == vals.len() {
                break;
            }
        }
        // next combination of pivot columns
        let mut i = dim;
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            if pivots[i] < n - dim + i {
                pivots[i] += 1;
                for j in i + 1..dim {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every subspace of every dimension, ordered by dimension then canonically.
pub fn enumerate_all_subspaces(ctx: &GroupContext) -> Result<Vec<Subspace>> {
    let mut all = Vec::new();
    for d in 0..=ctx.n() {
        all.extend(enumerate_subspaces(ctx, d)?);
    }
    Ok(all)
}

/// An invertible `n x n` matrix over GF(p), acting on row vectors from the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutMatrix {
    p: u32,
    rows: Vec<Vec<u32>>,
}

fn det_mod(p: u32, mut m: Vec<Vec<u32>>) -> u32 {
    let n = m.len();
    let mut det = 1u32;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| m[r][col] != 0) else { return 0 };
        if pr != col {
            m.swap(pr, col);
            det = (p - det) % p;
        }
        det = det * m[col][col] % p;
        let inv = inv_mod(m[col][col], p);
        for r in col + 1..n {
            let f = m[r][col] * inv % p;
            if f != 0 {
                for c in col..n {
                    m[r][c] = (m[r][c] + (p - f) * m[col][c]) % p;
                }
            }
        }
    }
    det
}

impl AutMatrix {
    pub fn new(ctx: &GroupContext, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = ctx.n();
        if rows.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rows.len() });
        }
        for r in &rows {
            ctx.check_vector(r)?;
        }
        if det_mod(ctx.p(), rows.clone()) == 0 {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { p: ctx.p(), rows })
    }

    pub fn identity(ctx: &GroupContext) -> Self {
        Self { p: ctx.p(), rows: Subspace::full(ctx).rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn determinant(&self) -> u32 {
        det_mod(self.p, self.rows.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &c)| c == u32::from(i == j)))
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &c)| if i == j { c == 1 } else { j > i || c == 0 }))
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let n = self.rows.len();
        let p = self.p;
        let mut out = vec![0u32; n];
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                for j in 0..n {
                    out[j] = (out[j] + c * self.rows[i][j]) % p;
                }
            }
        }
        out
    }

    pub fn apply_index(&self, ctx: &GroupContext, i: usize) -> usize {
        ctx.index_of(&self.apply(&ctx.coords(i)))
    }

    /// `self` followed by `other`: `v (self * other) = (v self) other`.
    pub fn mul(&self, other: &Self) -> Self {
        Self { p: self.p, rows: self.rows.iter().map(|r| other.apply(r)).collect() }
    }

    pub fn inverse(&self) -> Self {
        let n = self.rows.len();
        let p = self.p;
        let mut aug: Vec<Vec<u32>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        let (reduced, _) = rref_rows(p, 2 * n, std::mem::take(&mut aug));
        Self { p, rows: reduced.into_iter().map(|r| r[n..].to_vec()).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self {
            p: self.p,
            rows: (0..self.dim()).map(|i| (0..self.dim()).map(|j| u32::from(i == j)).collect()).collect(),
        };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// The fixed subspace `ker(M - I)`.
    pub fn fixed_subspace(&self) -> Subspace {
        common_fixed_subspace(self.p, self.dim(), std::slice::from_ref(self))
    }
}

/// `∩ ker(M - I)` over all given matrices.
pub(crate) fn common_fixed_subspace(p: u32, n: usize, mats: &[AutMatrix]) -> Subspace {
    // v (M - I) = 0 for all M: solve the linear system with columns stacked.
    // Build the n x (n * k) matrix whose block k is (M_k - I); the fixed space is its left kernel.
    let k = mats.len();
    if k == 0 {
        return Subspace::from_rows(p, n, (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect());
    }
    let width = n * k;
    let mut aug: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(width + n);
            for m in mats {
                for j in 0..n {
                    row.push((m.rows[i][j] + p - u32::from(i == j)) % p);
                }
            }
            row.extend((0..n).map(|j| u32::from(i == j)));
            row
        })
        .collect();
    let (reduced, _) = rref_rows(p, width + n, std::mem::take(&mut aug));
    let kernel =
        reduced.into_iter().filter(|r| r[..width].iter().all(|&c| c == 0)).map(|r| r[width..].to_vec()).collect();
    Subspace::from_rows(p, n, kernel)
}

/// `|GL(n, p)| = prod_{i<n} (p^n - p^i)`.
pub fn gl_order(ctx: &GroupContext) -> u128 {
    let p = ctx.p() as u128;
    let n = ctx.n() as u32;
    (0..n).map(|i| p.pow(n) - p.pow(i)).product()
}

/// All upper unitriangular matrices, in lexicographic order of their entries.
pub fn unitriangular_group(ctx: &GroupContext) -> Result<Vec<AutMatrix>> {
    let (p, n) = (ctx.p(), ctx.n());
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let count = (p as u128).pow(slots.len() as u32);
    if count > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit(format!("{count} unitriangular matrices")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut vals = vec![0u32; slots.len()];
    loop {
        let mut rows: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        for (&(i, j), &v) in slots.iter().zip(&vals) {
            rows[i][j] = v;
        }
        out.push(AutMatrix { p, rows });
        let mut k = vals.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            vals[k] += 1;
            if vals[k] < p {
                break;
            }
            vals[k] = 0;
        }
    }
}

/// Uniformly random upper unitriangular matrix.
pub fn random_unitriangular<R: Rng + ?Sized>(ctx: &GroupContext, rng: &mut R) -> AutMatrix {
    let (p, n) = (ctx.p(), ctx.n());
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        1
                    } else if j > i {
                        rng.gen_range(0..p)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    AutMatrix { p, rows }
}

/// Every element of `GL(n, p)` (subject to [`ENUMERATION_LIMIT`]).
pub fn general_linear_group(ctx: &GroupContext) -> Result<Vec<AutMatrix>> {
    let count = gl_order(ctx);
    if count > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit(format!("|GL| = {count}")));
    }
    let (p, n) = (ctx.p(), ctx.n());
    let mut out = Vec::with_capacity(count as usize);
    // build row by row, each new row outside the span of the previous ones
    fn extend(ctx: &GroupContext, rows: &mut Vec<Vec<u32>>, out: &mut Vec<AutMatrix>) {
        let (p, n) = (ctx.p(), ctx.n());
        if rows.len() == n {
            out.push(AutMatrix { p, rows: rows.clone() });
            return;
        }
        let span = Subspace::from_rows(p, n, rows.clone());
        for idx in 1..ctx.order() {
            let v = ctx.coords(idx);
            if span.contains_vec(&v) {
                continue;
            }
            rows.push(v);
            extend(ctx, rows, out);
            rows.pop();
        }
    }
    let _ = (p, n);
    extend(ctx, &mut Vec::new(), &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: usize) -> GroupContext {
        GroupContext::new(p, n).unwrap()
    }

    #[test]
    fn index_bijection_examples() {
        let c = ctx(3, 3);
        assert_eq!(c.index(&GroupVector::new(vec![0, 0, 0])).unwrap(), 0);
        assert_eq!(c.index(&GroupVector::new(vec![1, 0, 0])).unwrap(), 1);
        assert_eq!(ctx(3, 2).index(&GroupVector::new(vec![2, 1])).unwrap(), 5);
        assert!(c.vector(27).is_err());
        assert!(c.index(&GroupVector::new(vec![3, 0, 0])).is_err());
        assert!(c.index(&GroupVector::new(vec![1, 0])).is_err());
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(GroupContext::new(2, 3).is_err());
        assert!(GroupContext::new(9, 2).is_err());
        assert!(GroupContext::new(3, 0).is_ok());
    }

    #[test]
    fn arithmetic_matches_coordinates() {
        let c = ctx(5, 2);
        for a in 0..25 {
            assert_eq!(c.add(a, c.neg(a)), 0);
            for b in 0..25 {
                let (va, vb) = (c.coords(a), c.coords(b));
                let s: Vec<u32> = va.iter().zip(&vb).map(|(x, y)| (x + y) % 5).collect();
                assert_eq!(c.add(a, b), c.index_of(&s));
            }
        }
        assert_eq!(c.scale(2, 1), 2);
    }

    #[test]
    fn rref_examples() {
        let c = ctx(3, 3);
        assert_eq!(rref_span(&c, &[]).unwrap().dim(), 0);
        let std: Vec<GroupVector> =
            (0..3).map(|i| GroupVector::new((0..3).map(|j| u32::from(i == j)).collect())).collect();
        assert_eq!(rref_span(&c, &std).unwrap(), Subspace::full(&c));
        let vs = [GroupVector::new(vec![1, 1, 0]), GroupVector::new(vec![0, 1, 1]), GroupVector::new(vec![1, 2, 1])];
        assert_eq!(rref_span(&c, &vs).unwrap().dim(), 2);
        assert!(rref_span(&c, &[GroupVector::new(vec![1, 1])]).is_err());
    }

    #[test]
    fn lattice_examples() {
        let c = ctx(3, 2);
        let a = rref_span(&c, &[GroupVector::new(vec![1, 0])]).unwrap();
        let b = rref_span(&c, &[GroupVector::new(vec![1, 1])]).unwrap();
        let ops = subspace_lattice_ops(&a, &a).unwrap();
        assert_eq!((ops.sum, ops.intersection, ops.contains), (a.clone(), a.clone(), true));
        let ops = subspace_lattice_ops(&a, &b).unwrap();
        assert_eq!(ops.sum.dim(), 2);
        assert_eq!(ops.intersection.dim(), 0);
        assert!(!ops.contains);

        let c3 = ctx(3, 3);
        let x = rref_span(&c3, &[GroupVector::new(vec![1, 0, 0]), GroupVector::new(vec![0, 1, 0])]).unwrap();
        let y = rref_span(&c3, &[GroupVector::new(vec![0, 1, 0]), GroupVector::new(vec![0, 0, 1])]).unwrap();
        assert_eq!(x.intersection(&y).unwrap().dim(), 1);
        assert!(x.sum(&Subspace::trivial(&ctx(3, 2))).is_err());
    }

    #[test]
    fn subspace_counts() {
        let c = ctx(3, 3);
        assert_eq!(enumerate_subspaces(&c, 1).unwrap().len(), 13);
        assert_eq!(enumerate_subspaces(&c, 2).unwrap().len(), 13);
        assert_eq!(enumerate_all_subspaces(&c).unwrap().len(), 28);
        assert!(enumerate_subspaces(&c, 4).is_err());
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for (p, n) in [(3u32, 1usize), (3, 2), (3, 3), (3, 4), (3, 5), (5, 2), (5, 3), (7, 2)] {
            let c = ctx(p, n);
            for d in 0..=n {
                let subs = enumerate_subspaces(&c, d).unwrap();
                assert_eq!(subs.len() as u128, gaussian_binomial(p, n, d), "p={p} n={n} d={d}");
                let mut dedup = subs.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), subs.len());
                assert!(subs.iter().all(|s| s.dim() == d));
            }
        }
    }

    #[test]
    fn matrix_group_sizes() {
        let c = ctx(3, 3);
        assert_eq!(unitriangular_group(&c).unwrap().len(), 27);
        assert_eq!(gl_order(&c), 11232);
        assert_eq!(unitriangular_group(&ctx(3, 2)).unwrap().len(), 3);
        assert_eq!(general_linear_group(&ctx(3, 2)).unwrap().len() as u128, gl_order(&ctx(3, 2)));
        assert!(AutMatrix::new(&c, vec![vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn inverse_and_fixed_space() {
        let c = ctx(3, 3);
        for m in unitriangular_group(&c).unwrap() {
            assert!(m.mul(&m.inverse()).is_identity());
            assert!(m.is_upper_unitriangular());
        }
        let x = AutMatrix::new(&c, vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        assert_eq!(x.fixed_subspace().dim(), 1);
        assert!(x.pow(3).is_identity());
        assert!(AutMatrix::identity(&c).fixed_subspace().is_full());
    }

    #[test]
    fn quotient_coordinates() {
        let c = ctx(3, 3);
        let k = rref_span(&c, &[GroupVector::new(vec![1, 2, 0])]).unwrap();
        let v = vec![2, 1, 1];
        let q = k.quotient_coords(&v);
        assert_eq!(q.len(), 2);
        let lift = k.quotient_lift(&q);
        let diff: Vec<u32> = v.iter().zip(&lift).map(|(a, b)| (a + 3 - b) % 3).collect();
        assert!(k.contains_vec(&diff));
    }
}
