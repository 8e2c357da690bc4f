use std::fmt;

use num_bigint::BigUint;

use super::field::{Elem, Field};
use super::matrix::{rank_slice, rref_slice, Matrix};
use crate::error::{Error, Result};

/// A subspace of GF(q)^n, stored as its unique reduced row echelon basis.
///
/// Because the basis is canonical, structural equality, hashing and ordering
/// all coincide with equality of row spaces. The derived order compares
/// ambient, then dimension, then the basis entries row by row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: u8,
    k: u8,
    data: Box<[Elem]>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for r in 0..self.dim() {
            if r > 0 {
                write!(f, "; ")?;
            }
            for x in self.row(r) {
                write!(f, "{x}")?;
            }
        }
        write!(f, ">")
    }
}

impl Subspace {
    /// Row space of `rows` (a flat row-major list of `n`-vectors).
    pub fn span(f: &Field, n: usize, rows: &[Elem]) -> Self {
        assert!(n > 0 && n <= u8::MAX as usize && rows.len() % n == 0);
        let mut work = rows.to_vec();
        let r = rows.len() / n;
        let k = rref_slice(f, &mut work, r, n);
        work.truncate(k * n);
        Subspace { n: n as u8, k: k as u8, data: work.into_boxed_slice() }
    }

    pub fn from_matrix(f: &Field, m: &Matrix) -> Self {
        Self::span(f, m.cols(), m.data())
    }

    pub fn from_vectors<V: AsRef<[Elem]>>(f: &Field, n: usize, vs: &[V]) -> Self {
        let flat: Vec<Elem> = vs.iter().flat_map(|v| v.as_ref().iter().copied()).collect();
        Self::span(f, n, &flat)
    }

    /// The projective point spanned by `v`.
    pub fn point(f: &Field, v: &[Elem]) -> Self {
        Self::span(f, v.len(), v)
    }

    /// Wraps a basis that is already in reduced row echelon form, returning
    /// `None` if it is not the canonical representative of a `k`-space.
    pub fn from_canonical(f: &Field, n: usize, data: Vec<Elem>) -> Option<Self> {
        if n == 0 || data.len() % n != 0 {
            return None;
        }
        let s = Self::span(f, n, &data);
        (*s.data == *data).then_some(s)
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n: n as u8, k: 0, data: Box::new([]) }
    }

    pub fn whole(n: usize) -> Self {
        let m = Matrix::identity(n);
        Subspace { n: n as u8, k: n as u8, data: m.into_data().into_boxed_slice() }
    }

    pub fn ambient(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        self.k as usize
    }

    /// Flat row-major canonical basis.
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        let n = self.ambient();
        &self.data[i * n..(i + 1) * n]
    }

    pub fn basis(&self) -> Matrix {
        Matrix::from_flat(self.dim(), self.ambient(), self.data.to_vec())
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|r| self.row(r).iter().position(|&x| x != 0).expect("rref row"))
            .collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.ambient(), other.ambient()));
        }
        Ok(())
    }

    /// `dim(U + W)`.
    pub fn join_dim(&self, f: &Field, other: &Subspace) -> usize {
        let mut stacked = Vec::with_capacity(self.data.len() + other.data.len());
        stacked.extend_from_slice(&self.data);
        stacked.extend_from_slice(&other.data);
        rank_slice(f, &stacked, self.dim() + other.dim(), self.ambient())
    }

    /// `dim(U ∩ W)`.
    pub fn meet_dim(&self, f: &Field, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.join_dim(f, other)
    }

    pub fn join(&self, f: &Field, other: &Subspace) -> Subspace {
        let mut stacked = self.data.to_vec();
        stacked.extend_from_slice(&other.data);
        Subspace::span(f, self.ambient(), &stacked)
    }

    pub fn meet(&self, f: &Field, other: &Subspace) -> Subspace {
        let ann = self.annihilator(f).join(f, &other.annihilator(f));
        ann.annihilator(f)
    }

    /// `{x : x·u = 0 for all u in U}` under the standard dot product.
    pub fn annihilator(&self, f: &Field) -> Subspace {
        if self.dim() == 0 {
            return Subspace::whole(self.ambient());
        }
        let k = self.basis().kernel(f);
        Subspace::from_matrix(f, &k)
    }

    /// Subspace distance `dim(U+W) - dim(U∩W) = 2 dim(U+W) - dim U - dim W`.
    pub fn distance(&self, f: &Field, other: &Subspace) -> Result<usize> {
        self.check_ambient(other)?;
        Ok(2 * self.join_dim(f, other) - self.dim() - other.dim())
    }

    pub fn contains(&self, f: &Field, other: &Subspace) -> bool {
        other.dim() <= self.dim() && self.join_dim(f, other) == self.dim()
    }

    pub fn contains_vector(&self, f: &Field, v: &[Elem]) -> bool {
        let mut stacked = self.data.to_vec();
        stacked.extend_from_slice(v);
        rank_slice(f, &stacked, self.dim() + 1, self.ambient()) == self.dim()
    }

    /// Image under `x ↦ x·M` for an `n x m` matrix `M`.
    pub fn image(&self, f: &Field, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient());
        let b = self.basis().mul(f, m);
        Subspace::from_matrix(f, &b)
    }

    /// Normalised spanning vectors of all 1-dimensional subspaces, in
    /// coefficient order.
    pub fn point_vectors(&self, f: &Field) -> Vec<Vec<Elem>> {
        let (k, n) = (self.dim(), self.ambient());
        normalized_vectors(f, k)
            .into_iter()
            .map(|c| {
                let mut v = vec![0; n];
                for (i, &ci) in c.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    for (j, x) in v.iter_mut().enumerate() {
                        *x = f.add(*x, f.mul(ci, self.data[i * n + j]));
                    }
                }
                normalize(f, &mut v);
                v
            })
            .collect()
    }

    pub fn points(&self, f: &Field) -> Vec<Subspace> {
        let n = self.ambient();
        self.point_vectors(f)
            .into_iter()
            .map(|v| Subspace { n: n as u8, k: 1, data: v.into_boxed_slice() })
            .collect()
    }

    /// All `d`-dimensional subspaces of this subspace.
    pub fn subspaces(&self, f: &Field, d: usize) -> Vec<Subspace> {
        let b = self.basis();
        all_subspaces(f, self.dim(), d)
            .into_iter()
            .map(|c| Subspace::from_matrix(f, &c.basis().mul(f, &b)))
            .collect()
    }
}

/// Scales `v` so that its first nonzero coordinate is 1.
pub fn normalize(f: &Field, v: &mut [Elem]) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        if lead != 1 {
            let inv = f.inv_nz(lead);
            for x in v.iter_mut() {
                *x = f.mul(inv, *x);
            }
        }
    }
}

/// All nonzero vectors of GF(q)^k whose first nonzero entry is 1.
pub fn normalized_vectors(f: &Field, k: usize) -> Vec<Vec<Elem>> {
    let q = f.order() as usize;
    let mut out = Vec::new();
    for lead in 0..k {
        let tail = k - lead - 1;
        for idx in 0..q.pow(tail as u32) {
            let mut v = vec![0; k];
            v[lead] = 1;
            let mut r = idx;
            for j in (lead + 1..k).rev() {
                v[j] = (r % q) as Elem;
                r /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Every `k`-dimensional subspace of GF(q)^n, sorted.
///
/// Enumerates pivot sets and fills the free positions of the reduced row
/// echelon form directly.
pub fn all_subspaces(f: &Field, n: usize, k: usize) -> Vec<Subspace> {
    let q = f.order() as usize;
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        return vec![Subspace::zero(n)];
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let p = &pivots;
                (p[r] + 1..n).filter(move |c| !p.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let total = q.checked_pow(free.len() as u32).expect("enumeration size");
        for idx in 0..total {
            let mut data = vec![0 as Elem; k * n];
            for (r, &p) in pivots.iter().enumerate() {
                data[r * n + p] = 1;
            }
            let mut rest = idx;
            for &(r, c) in free.iter().rev() {
                data[r * n + c] = (rest % q) as Elem;
                rest /= q;
            }
            out.push(Subspace { n: n as u8, k: k as u8, data: data.into_boxed_slice() });
        }
        // next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Projective points of PG(n-1, q) as 1-dimensional subspaces, sorted.
pub fn all_points(f: &Field, n: usize) -> Vec<Subspace> {
    all_subspaces(f, n, 1)
}

/// Number of `k`-dimensional subspaces of GF(q)^n.
pub fn gaussian_count(n: u32, k: u32, q: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    num / den
}
