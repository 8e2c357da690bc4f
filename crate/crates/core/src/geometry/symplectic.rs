use crate::algebra::{normalized_vectors, Elem, Field, Matrix, Subspace};

use super::klein::{plucker, PLUCKER_PAIRS};

/// An alternating bilinear form on GF(q)^4 given by its six coefficients
/// `a_ij` (`i < j`, Plücker order): `B(x, y) = Σ a_ij (x_i y_j - x_j y_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    coeffs: [Elem; 6],
}

impl SymplecticForm {
    pub fn new(coeffs: [Elem; 6]) -> Self {
        SymplecticForm { coeffs }
    }

    pub fn coeffs(&self) -> [Elem; 6] {
        self.coeffs
    }

    pub fn gram(&self, f: &Field) -> Matrix {
        let mut g = Matrix::zeros(4, 4);
        for (k, &(i, j)) in PLUCKER_PAIRS.iter().enumerate() {
            g.set(i, j, self.coeffs[k]);
            g.set(j, i, f.neg(self.coeffs[k]));
        }
        g
    }

    /// The Pfaffian `a12 a34 - a13 a24 + a14 a23`; nonzero iff the form is
    /// nondegenerate.
    pub fn pfaffian(&self, f: &Field) -> Elem {
        let a = &self.coeffs;
        f.add(f.sub(f.mul(a[0], a[5]), f.mul(a[1], a[4])), f.mul(a[2], a[3]))
    }

    pub fn is_nondegenerate(&self, f: &Field) -> bool {
        self.pfaffian(f) != 0
    }

    /// A line `<x, y>` is totally isotropic iff `B(x, y) = 0`, i.e. iff its
    /// Plücker vector is orthogonal to the coefficient vector.
    pub fn is_isotropic(&self, f: &Field, line: &Subspace) -> bool {
        let p = plucker(f, line).expect("line of PG(3, q)");
        dot(f, p.row(0), &self.coeffs) == 0
    }
}

fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// A nondegenerate alternating form for which every given line is totally
/// isotropic, if one exists. Among several, the first in enumeration order of
/// normalized coefficient vectors of the solution space is returned.
pub fn symplectic_fit(f: &Field, lines: &[Subspace]) -> Option<SymplecticForm> {
    let mut rows = Vec::with_capacity(6 * lines.len());
    for l in lines {
        rows.extend_from_slice(plucker(f, l).expect("line of PG(3, q)").row(0));
    }
    let sols = if lines.is_empty() {
        Matrix::identity(6)
    } else {
        Matrix::from_flat(lines.len(), 6, rows).kernel(f)
    };
    let k = sols.rows();
    normalized_vectors(f, k).into_iter().find_map(|c| {
        let v = Matrix::from_flat(1, k, c).mul(f, &sols);
        let form = SymplecticForm::new(v.row(0).try_into().expect("six coefficients"));
        form.is_nondegenerate(f).then_some(form)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::all_subspaces;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(f: &Field, lines: &[Subspace]) -> bool {
        (0..64u32).any(|code| {
            let c: [Elem; 6] = std::array::from_fn(|i| (code >> i & 1) as Elem);
            let form = SymplecticForm::new(c);
            form.gram(f).is_invertible(f) && lines.iter().all(|l| {
                let g = form.gram(f);
                dot(f, &g.apply(f, l.row(0)), l.row(1)) == 0
            })
        })
    }

    #[test]
    fn pfaffian_matches_invertibility() {
        let f = Field::new(3, 1).unwrap();
        for code in 0..729u32 {
            let mut c = [0; 6];
            let mut x = code;
            for ci in c.iter_mut() {
                *ci = (x % 3) as Elem;
                x /= 3;
            }
            let form = SymplecticForm::new(c);
            assert_eq!(form.is_nondegenerate(&f), form.gram(&f).is_invertible(&f));
        }
    }

    #[test]
    fn fixed_w32_fits_itself() {
        let f = Field::new(2, 1).unwrap();
        // x1 y4 - x4 y1 + x2 y3 - x3 y2
        let w = SymplecticForm::new([0, 0, 1, 1, 0, 0]);
        let iso: Vec<Subspace> = all_subspaces(&f, 4, 2)
            .into_iter()
            .filter(|l| w.is_isotropic(&f, l))
            .collect();
        assert_eq!(iso.len(), 15);
        let fit = symplectic_fit(&f, &iso).unwrap();
        assert_eq!(fit, w);
    }

    #[test]
    fn two_skew_lines_fit() {
        let f = Field::new(2, 1).unwrap();
        let a = Subspace::from_vectors(&f, 4, &[[1, 0, 0, 0], [0, 1, 0, 0]]);
        let b = Subspace::from_vectors(&f, 4, &[[0, 0, 1, 0], [0, 0, 0, 1]]);
        assert!(brute_force(&f, &[a.clone(), b.clone()]));
        let fit = symplectic_fit(&f, &[a.clone(), b.clone()]).unwrap();
        assert!(fit.is_isotropic(&f, &a) && fit.is_isotropic(&f, &b));
    }

    #[test]
    fn agrees_with_brute_force_on_random_line_sets() {
        let f = Field::new(2, 1).unwrap();
        let lines = all_subspaces(&f, 4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut found = [0; 2];
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let set: Vec<Subspace> = lines.choose_multiple(&mut rng, n).cloned().collect();
            let fit = symplectic_fit(&f, &set);
            assert_eq!(fit.is_some(), brute_force(&f, &set));
            if let Some(form) = &fit {
                assert!(set.iter().all(|l| form.is_isotropic(&f, l)));
            }
            found[fit.is_some() as usize] += 1;
        }
        assert!(found[0] > 0 && found[1] > 0);
    }
}
