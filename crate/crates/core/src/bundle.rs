//! The circumscribed projective bundle of PG(2, q): the conics whose
//! extensions to GF(q^3) pass through the three eigen-points of a Singer
//! cycle.

use std::collections::BTreeSet;

use crate::algebra::{normalized_vectors, Elem, Field, Matrix, Subspace, Tower};
use crate::error::{Error, Result};
use crate::geometry::Quadric;
use crate::groups::singer_matrix;

/// Monomials of a ternary quadratic form, in coefficient order.
const MONOMIALS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

#[derive(Clone, Debug)]
pub struct Bundle {
    q: u32,
    singer: Matrix,
    /// Vertices of the fixed triangle, over GF(q^3); each is the Frobenius
    /// image of the previous one.
    triangle: [[Elem; 3]; 3],
    basis: [Quadric; 3],
    conics: Vec<Quadric>,
    points: Vec<Vec<Subspace>>,
}

/// Outcome of [`validate`]: one entry per check, with a witness on failure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BundleReport {
    pub checks: Vec<(String, bool, String)>,
}

impl BundleReport {
    fn push(&mut self, name: &str, ok: bool, witness: String) {
        self.checks.push((name.to_string(), ok, witness));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

/// The conic with coefficient vector `c`, monomials `x0^2, x0x1, x0x2, x1^2,
/// x1x2, x2^2`.
pub fn conic_from_coeffs(f: &Field, c: &[Elem]) -> Quadric {
    let terms: Vec<(usize, usize, Elem)> =
        MONOMIALS.iter().zip(c).map(|(&(i, j), &v)| (i, j, v)).collect();
    Quadric::from_terms(f, 3, &terms)
}

pub fn conic_coeffs(q: &Quadric) -> Vec<Elem> {
    MONOMIALS.iter().map(|&(i, j)| q.form().get(i, j)).collect()
}

pub fn circumscribed_bundle(t: &Tower) -> Result<Bundle> {
    let (f, e) = (t.base(), t.ext());
    let singer = singer_matrix(t);
    // row eigenvector for the eigenvalue w: v (A - w I) = 0
    let w = e.generator();
    let mut shifted = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let a = t.embed(singer.get(i, j));
            shifted.set(j, i, if i == j { e.sub(a, w) } else { a });
        }
    }
    let ker = shifted.kernel(e);
    if ker.rows() != 1 {
        return Err(Error::Construction(format!("eigenspace of dimension {}", ker.rows())));
    }
    let p0: [Elem; 3] = ker.row(0).try_into().expect("three coordinates");
    let conj = |v: [Elem; 3], i| v.map(|x| t.frobenius(x, i));
    let triangle = [p0, conj(p0, 1), conj(p0, 2)];

    // F(P) = 0 over GF(q^3) is three GF(q)-linear conditions on the six
    // coefficients; the conjugate vertices then follow automatically
    let mut sys = Matrix::zeros(3, 6);
    for (k, &(i, j)) in MONOMIALS.iter().enumerate() {
        let c = t.to_coords(e.mul(p0[i], p0[j]));
        for r in 0..3 {
            sys.set(r, k, c[r]);
        }
    }
    let sol = sys.kernel(f);
    if sol.rows() != 3 {
        return Err(Error::Construction(format!(
            "bundle system has solution space of dimension {}",
            sol.rows()
        )));
    }
    let basis = [0, 1, 2].map(|r| conic_from_coeffs(f, sol.row(r)));
    let conics: Vec<Quadric> = normalized_vectors(f, 3)
        .into_iter()
        .map(|c| {
            let v = Matrix::from_flat(1, 3, c).mul(f, &sol);
            conic_from_coeffs(f, v.row(0)).normalized(f)
        })
        .collect();
    let points = conics.iter().map(|c| c.points(f)).collect();
    Ok(Bundle { q: t.q(), singer, triangle, basis, conics, points })
}

impl Bundle {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn singer(&self) -> &Matrix {
        &self.singer
    }

    pub fn triangle(&self) -> &[[Elem; 3]; 3] {
        &self.triangle
    }

    pub fn basis(&self) -> &[Quadric; 3] {
        &self.basis
    }

    pub fn conics(&self) -> &[Quadric] {
        &self.conics
    }

    pub fn len(&self) -> usize {
        self.conics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conics.is_empty()
    }

    /// Sorted point set of conic `i`.
    pub fn points(&self, i: usize) -> &[Subspace] {
        &self.points[i]
    }

    /// Index of the conic equal (up to scalar) to `c`.
    pub fn index_of(&self, f: &Field, c: &Quadric) -> Option<usize> {
        let n = c.normalized(f);
        self.conics.iter().position(|x| *x == n)
    }

    /// Tangent line to conic `i` at its point `p`.
    pub fn tangent(&self, f: &Field, i: usize, p: &Subspace) -> Subspace {
        self.conics[i].polarity(f).perp(f, p)
    }

    pub fn validate(&self, f: &Field) -> BundleReport {
        validate(f, &self.singer, &self.conics)
    }
}

/// Checks that `conics` form a bundle: `q^2+q+1` of them, pairwise meeting
/// in one point, spanning a net of nondegenerate forms, permuted by the
/// Singer cycle.
pub fn validate(f: &Field, singer: &Matrix, conics: &[Quadric]) -> BundleReport {
    let q = f.order() as usize;
    let mut r = BundleReport::default();
    r.push(
        "size",
        conics.len() == q * q + q + 1,
        format!("{} conics", conics.len()),
    );

    let pts: Vec<BTreeSet<Subspace>> =
        conics.iter().map(|c| c.points(f).into_iter().collect()).collect();
    let mut bad = None;
    'pairs: for i in 0..conics.len() {
        for j in i + 1..conics.len() {
            if pts[i].intersection(&pts[j]).count() != 1 {
                bad = Some((i, j));
                break 'pairs;
            }
        }
    }
    r.push(
        "pairwise one point",
        bad.is_none(),
        bad.map_or(String::new(), |(i, j)| format!("conics {i} and {j}")),
    );

    let rows: Vec<Elem> = conics.iter().flat_map(conic_coeffs).collect();
    let span = Subspace::span(f, 6, &rows);
    let degenerate = span
        .point_vectors(f)
        .into_iter()
        .find(|c| !conic_from_coeffs(f, c).is_nondegenerate(f));
    r.push(
        "net of nondegenerate forms",
        span.dim() == 3 && degenerate.is_none(),
        match degenerate {
            Some(c) => format!("degenerate form {c:?}"),
            None => format!("span of dimension {}", span.dim()),
        },
    );

    let set: BTreeSet<Quadric> = conics.iter().map(|c| c.normalized(f)).collect();
    let moved = conics
        .iter()
        .position(|c| !set.contains(&c.image(f, singer).normalized(f)));
    r.push(
        "singer invariant",
        moved.is_none(),
        moved.map_or(String::new(), |i| format!("image of conic {i} not in the bundle")),
    );
    r
}
