use std::collections::BTreeSet;

use crate::algebra::{all_points, all_subspaces, Elem, Field, Matrix, Subspace};
use crate::error::{Error, Result};

/// A quadratic form `Q(x) = Σ_{i<=j} u_ij x_i x_j`, stored as the upper
/// triangular matrix `(u_ij)`.
///
/// The form itself is kept rather than its Gram matrix, which in
/// characteristic 2 is alternating and does not determine `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quadric {
    form: Matrix,
}

/// The polarity of a (symmetric or alternating) bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarity {
    gram: Matrix,
}

impl Quadric {
    /// Folds an arbitrary square matrix `A` into the form `x A x^T`.
    pub fn from_matrix(f: &Field, a: &Matrix) -> Self {
        let n = a.rows();
        assert_eq!(n, a.cols());
        let mut u = Matrix::zeros(n, n);
        for i in 0..n {
            u.set(i, i, a.get(i, i));
            for j in i + 1..n {
                u.set(i, j, f.add(a.get(i, j), a.get(j, i)));
            }
        }
        Quadric { form: u }
    }

    /// Builds a form from `(i, j, coefficient)` terms with `i <= j`.
    pub fn from_terms(f: &Field, n: usize, terms: &[(usize, usize, Elem)]) -> Self {
        let mut u = Matrix::zeros(n, n);
        for &(i, j, c) in terms {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            u.set(i, j, f.add(u.get(i, j), c));
        }
        Quadric { form: u }
    }

    pub fn ambient(&self) -> usize {
        self.form.rows()
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn eval(&self, f: &Field, x: &[Elem]) -> Elem {
        let n = self.ambient();
        let mut acc = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0;
            for j in i..n {
                let c = self.form.get(i, j);
                if c != 0 && x[j] != 0 {
                    row = f.add(row, f.mul(c, x[j]));
                }
            }
            acc = f.add(acc, f.mul(x[i], row));
        }
        acc
    }

    /// Gram matrix of the polar form `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn gram(&self, f: &Field) -> Matrix {
        let n = self.ambient();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == j {
                    f.add(self.form.get(i, i), self.form.get(i, i))
                } else if i < j {
                    self.form.get(i, j)
                } else {
                    self.form.get(j, i)
                };
                g.set(i, j, v);
            }
        }
        g
    }

    pub fn polarity(&self, f: &Field) -> Polarity {
        Polarity { gram: self.gram(f) }
    }

    pub fn bilinear(&self, f: &Field, x: &[Elem], y: &[Elem]) -> Elem {
        let gy = self.gram(f).apply(f, y);
        x.iter().zip(&gy).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// Nondegenerate iff no nonzero vector of the radical of the polar form
    /// is singular.
    pub fn is_nondegenerate(&self, f: &Field) -> bool {
        let rad = self.gram(f).kernel(f);
        match rad.rows() {
            0 => true,
            _ if f.characteristic() != 2 => false,
            // in characteristic 2, Q is semilinear on the radical, so it has
            // a singular vector there as soon as the radical has dimension 2
            1 => self.eval(f, rad.row(0)) != 0,
            _ => false,
        }
    }

    /// Points of the quadric in PG(n-1, q), sorted.
    pub fn points(&self, f: &Field) -> Vec<Subspace> {
        all_points(f, self.ambient())
            .into_iter()
            .filter(|p| self.eval(f, p.row(0)) == 0)
            .collect()
    }

    pub fn contains_point(&self, f: &Field, p: &Subspace) -> bool {
        self.eval(f, p.row(0)) == 0
    }

    /// True if `Q` vanishes on all of `s`.
    pub fn is_totally_singular(&self, f: &Field, s: &Subspace) -> bool {
        let g = self.gram(f);
        let k = s.dim();
        (0..k).all(|i| self.eval(f, s.row(i)) == 0)
            && (0..k).all(|i| {
                let gi = g.apply(f, s.row(i));
                (i + 1..k).all(|j| {
                    s.row(j).iter().zip(&gi).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))) == 0
                })
            })
    }

    /// The form `x ↦ Q(x M)`.
    pub fn pullback(&self, f: &Field, m: &Matrix) -> Quadric {
        let s = m.mul(f, &self.form).mul(f, &m.transpose());
        Quadric::from_matrix(f, &s)
    }

    /// The image quadric under the projectivity `x ↦ x g`.
    pub fn image(&self, f: &Field, g: &Matrix) -> Quadric {
        let inv = g.inverse(f).expect("projectivity is invertible");
        self.pullback(f, &inv)
    }

    /// Scales the form so that its first nonzero coefficient is 1.
    pub fn normalized(&self, f: &Field) -> Quadric {
        match self.form.data().iter().find(|&&x| x != 0) {
            Some(&lead) => Quadric { form: self.form.scale(f, f.inv_nz(lead)) },
            None => self.clone(),
        }
    }

    pub fn scaled(&self, f: &Field, c: Elem) -> Quadric {
        Quadric { form: self.form.scale(f, c) }
    }

    pub fn add(&self, f: &Field, other: &Quadric) -> Quadric {
        let data = self
            .form
            .data()
            .iter()
            .zip(other.form.data())
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        let n = self.ambient();
        Quadric { form: Matrix::from_flat(n, n, data) }
    }

    /// All totally singular lines.
    pub fn lines(&self, f: &Field) -> Vec<Subspace> {
        self.singular_subspaces(f, 2)
    }

    /// Nondegenerate hyperbolic quadric of PG(3, q): `(q+1)^2` points.
    pub fn is_hyperbolic_solid(&self, f: &Field) -> bool {
        let q = f.order() as usize;
        self.ambient() == 4 && self.is_nondegenerate(f) && self.points(f).len() == (q + 1) * (q + 1)
    }

    /// All totally singular subspaces of vector dimension `k`, sorted.
    pub fn singular_subspaces(&self, f: &Field, k: usize) -> Vec<Subspace> {
        let n = self.ambient();
        if k == 0 {
            return vec![Subspace::zero(n)];
        }
        if n <= 4 && k == 2 {
            return all_subspaces(f, n, 2)
                .into_iter()
                .filter(|l| self.is_totally_singular(f, l))
                .collect();
        }
        let pol = self.polarity(f);
        let mut layer: BTreeSet<Subspace> = self.points(f).into_iter().collect();
        for _ in 1..k {
            let mut next = BTreeSet::new();
            for s in &layer {
                for p in pol.perp(f, s).points(f) {
                    if self.eval(f, p.row(0)) == 0 && !s.contains(f, &p) {
                        next.insert(s.join(f, &p));
                    }
                }
            }
            layer = next;
        }
        layer.into_iter().collect()
    }
}

impl Polarity {
    pub fn new(gram: Matrix) -> Self {
        Polarity { gram }
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_nondegenerate(&self, f: &Field) -> bool {
        self.gram.is_invertible(f)
    }

    /// `{y : x G y^T = 0 for all x in s}`.
    pub fn perp(&self, f: &Field, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return Subspace::whole(s.ambient());
        }
        let m = s.basis().mul(f, &self.gram);
        Subspace::from_matrix(f, &m.kernel(f))
    }
}

/// `q + 1` pairwise skew lines of PG(3, q) closed under taking transversals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Regulus {
    lines: Vec<Subspace>,
}

impl Regulus {
    /// Wraps a line set, sorting it. No regulus check is made.
    pub fn new(mut lines: Vec<Subspace>) -> Self {
        lines.sort();
        Regulus { lines }
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn image(&self, f: &Field, g: &Matrix) -> Regulus {
        Regulus::new(self.lines.iter().map(|l| l.image(f, g)).collect())
    }
}

/// The two reguli of a hyperbolic quadric of PG(3, q); the regulus
/// containing the smallest line comes first.
pub fn reguli(f: &Field, q: &Quadric) -> Result<[Regulus; 2]> {
    if !q.is_hyperbolic_solid(f) {
        return Err(Error::NotHyperbolic);
    }
    let lines = q.lines(f);
    let order = f.order() as usize;
    if lines.len() != 2 * (order + 1) {
        return Err(Error::NotHyperbolic);
    }
    let first = &lines[0];
    let (a, b): (Vec<Subspace>, Vec<Subspace>) = lines
        .iter()
        .cloned()
        .partition(|l| l == first || l.meet_dim(f, first) == 0);
    if a.len() != order + 1 || b.len() != order + 1 {
        return Err(Error::NotHyperbolic);
    }
    Ok([Regulus::new(a), Regulus::new(b)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyperbolic(f: &Field) -> Quadric {
        // X1 X2 + X3 X4
        Quadric::from_terms(f, 4, &[(0, 1, 1), (2, 3, 1)])
    }

    #[test]
    fn hyperbolic_solid_counts() {
        for q in [2, 3, 4, 5] {
            let f = Field::of_order(q).unwrap();
            let h = hyperbolic(&f);
            assert!(h.is_nondegenerate(&f));
            assert_eq!(h.points(&f).len(), ((q + 1) * (q + 1)) as usize);
            let [r1, r2] = reguli(&f, &h).unwrap();
            assert_eq!(r1.len(), q as usize + 1);
            assert_eq!(r2.len(), q as usize + 1);
        }
    }

    #[test]
    fn each_point_on_one_line_of_each_regulus() {
        let f = Field::new(2, 1).unwrap();
        let h = hyperbolic(&f);
        let [r1, r2] = reguli(&f, &h).unwrap();
        for p in h.points(&f) {
            assert_eq!(r1.lines().iter().filter(|l| l.contains(&f, &p)).count(), 1);
            assert_eq!(r2.lines().iter().filter(|l| l.contains(&f, &p)).count(), 1);
        }
        for a in r1.lines() {
            for b in r2.lines() {
                assert_eq!(a.meet_dim(&f, b), 1);
            }
        }
    }

    #[test]
    fn elliptic_and_degenerate_rejected() {
        let f = Field::new(3, 1).unwrap();
        // X1^2 + X2^2 + X3 X4 with -1 a nonsquare mod 3: elliptic
        let ell = Quadric::from_terms(&f, 4, &[(0, 0, 1), (1, 1, 1), (2, 3, 1)]);
        assert!(ell.is_nondegenerate(&f));
        assert_eq!(ell.points(&f).len(), 10);
        assert_eq!(reguli(&f, &ell), Err(Error::NotHyperbolic));
        let cone = Quadric::from_terms(&f, 4, &[(0, 1, 1), (2, 2, 1)]);
        assert!(!cone.is_nondegenerate(&f));
        assert_eq!(reguli(&f, &cone), Err(Error::NotHyperbolic));
    }

    #[test]
    fn conic_in_pg2_3() {
        let f = Field::new(3, 1).unwrap();
        // X1 X3 - X2^2
        let c = Quadric::from_terms(&f, 3, &[(0, 2, 1), (1, 1, 2)]);
        let pts = c.points(&f);
        assert_eq!(pts.len(), 4);
        for i in 0..4 {
            for j in i + 1..4 {
                for k in j + 1..4 {
                    let span = pts[i].join(&f, &pts[j]).join(&f, &pts[k]);
                    assert_eq!(span.dim(), 3, "three collinear conic points");
                }
            }
        }
    }

    #[test]
    fn char2_conic_nondegenerate_via_radical() {
        let f = Field::new(2, 1).unwrap();
        let c = Quadric::from_terms(&f, 3, &[(0, 2, 1), (1, 1, 1)]);
        assert!(c.is_nondegenerate(&f));
        assert_eq!(c.points(&f).len(), 3);
        // a repeated line X1^2
        let d = Quadric::from_terms(&f, 3, &[(0, 0, 1)]);
        assert!(!d.is_nondegenerate(&f));
    }

    #[test]
    fn pullback_and_image_agree_with_point_maps() {
        let f = Field::new(3, 1).unwrap();
        let h = hyperbolic(&f);
        let g = Matrix::from_rows(&[[1, 2, 0, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 2, 1]]);
        assert!(g.is_invertible(&f));
        let img = h.image(&f, &g);
        let mut mapped: Vec<Subspace> = h.points(&f).iter().map(|p| p.image(&f, &g)).collect();
        mapped.sort();
        assert_eq!(mapped, img.points(&f));
    }

    #[test]
    fn polarity_is_an_involution() {
        use crate::geometry::klein::klein_quadric;
        use rand::{Rng, SeedableRng};
        for q in [2, 3] {
            let f = Field::of_order(q).unwrap();
            let k = klein_quadric(&f);
            let pol = k.polarity(&f);
            assert!(pol.is_nondegenerate(&f));
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(q as u64);
            for _ in 0..500 {
                let rows: Vec<Elem> = (0..6 * rng.gen_range(0..=6))
                    .map(|_| rng.gen_range(0..q) as Elem)
                    .collect();
                let s = Subspace::span(&f, 6, &rows);
                let perp = pol.perp(&f, &s);
                assert_eq!(perp.dim(), 6 - s.dim());
                assert_eq!(pol.perp(&f, &perp), s);
            }
            for p in k.points(&f) {
                assert!(pol.perp(&f, &p).contains(&f, &p));
            }
        }
    }
}
