//! The cubic extension GF(q^3) over GF(q), realised as GF(p^{3e}).

use super::field::{Elem, Field};
use super::matrix::Matrix;
use crate::error::Result;

const NOT_IN_SUBFIELD: Elem = Elem::MAX;

/// A cubic tower: `base` = GF(q), `ext` = GF(q^3), and the identification
/// of `base` with the subfield `{x : x^q = x}` of `ext`.
#[derive(Debug, Clone)]
pub struct Tower {
    base: Field,
    ext: Field,
    q: u32,
    embed: Vec<Elem>,
    project: Vec<Elem>,
    /// Coordinates over `base` in the power basis `1, w, w^2` of the
    /// primitive element `w` of `ext`.
    coords: Vec<[Elem; 3]>,
}

impl Tower {
    /// Builds GF(q^3) with its default primitive polynomial.
    pub fn new(base: Field) -> Result<Self> {
        let ext = Field::new(base.characteristic(), 3 * base.degree())?;
        Ok(Self::assemble(base, ext))
    }

    /// Builds GF(q^3) from an explicit primitive polynomial of degree `3e`
    /// over GF(p).
    pub fn with_ext_poly(base: Field, poly: &[Elem]) -> Result<Self> {
        let ext = Field::with_poly(base.characteristic(), 3 * base.degree(), poly)?;
        Ok(Self::assemble(base, ext))
    }

    /// Default tower over the default field of order `q`.
    pub fn of_order(q: u32) -> Result<Self> {
        Self::new(Field::of_order(q)?)
    }

    fn assemble(base: Field, ext: Field) -> Self {
        let q = base.order();
        // image of the base generator: the smallest root of the base polynomial
        let root = if base.is_prime_field() {
            base.generator()
        } else {
            ext.elements()
                .find(|&r| {
                    let v = base
                        .poly()
                        .iter()
                        .rev()
                        .fold(0, |acc, &c| ext.add(ext.mul(acc, r), c));
                    v == 0
                })
                .expect("base polynomial splits in the extension")
        };
        let embed: Vec<Elem> = base
            .elements()
            .map(|a| {
                if base.is_prime_field() {
                    a
                } else {
                    base.coeffs(a)
                        .iter()
                        .rev()
                        .fold(0, |acc, &c| ext.add(ext.mul(acc, root), c))
                }
            })
            .collect();
        let mut project = vec![NOT_IN_SUBFIELD; ext.order() as usize];
        for a in base.elements() {
            project[embed[a as usize] as usize] = a;
        }
        let w = ext.generator();
        let w2 = ext.mul(w, w);
        let mut coords = vec![[0; 3]; ext.order() as usize];
        for c0 in base.elements() {
            for c1 in base.elements() {
                for c2 in base.elements() {
                    let x = ext.add(
                        embed[c0 as usize],
                        ext.add(
                            ext.mul(embed[c1 as usize], w),
                            ext.mul(embed[c2 as usize], w2),
                        ),
                    );
                    coords[x as usize] = [c0, c1, c2];
                }
            }
        }
        Tower { base, ext, q, embed, project, coords }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn embed(&self, a: Elem) -> Elem {
        self.embed[a as usize]
    }

    /// The base-field element equal to `x`, if `x` lies in the subfield.
    pub fn project(&self, x: Elem) -> Option<Elem> {
        let a = self.project[x as usize];
        (a != NOT_IN_SUBFIELD).then_some(a)
    }

    pub fn in_subfield(&self, x: Elem) -> bool {
        self.ext.pow(x, self.q as u64) == x
    }

    /// `x^{q^i}`.
    pub fn frobenius(&self, x: Elem, i: u32) -> Elem {
        self.ext.pow(x, (self.q as u64).pow(i % 3))
    }

    /// `x^{1+q+q^2}`, as an element of GF(q).
    pub fn norm(&self, x: Elem) -> Elem {
        let q = self.q as u64;
        let n = self.ext.pow(x, 1 + q + q * q);
        self.project(n).expect("norm lands in the subfield")
    }

    /// `x + x^q + x^{q^2}`, as an element of GF(q).
    pub fn trace(&self, x: Elem) -> Elem {
        let e = &self.ext;
        let t = e.add(x, e.add(self.frobenius(x, 1), self.frobenius(x, 2)));
        self.project(t).expect("trace lands in the subfield")
    }

    /// Coordinates of `x` over GF(q) in the basis `1, w, w^2`.
    pub fn to_coords(&self, x: Elem) -> [Elem; 3] {
        self.coords[x as usize]
    }

    pub fn from_coords(&self, c: [Elem; 3]) -> Elem {
        let e = &self.ext;
        let w = e.generator();
        let mut acc = 0;
        for &ci in c.iter().rev() {
            acc = e.add(e.mul(acc, w), self.embed(ci));
        }
        acc
    }

    /// Matrix of `x ↦ λx` on coordinate row vectors: row `j` holds the
    /// coordinates of `λ w^j`.
    pub fn mul_matrix(&self, lambda: Elem) -> Matrix {
        let e = &self.ext;
        let w = e.generator();
        let mut rows = Vec::with_capacity(9);
        let mut x = lambda;
        for _ in 0..3 {
            rows.extend_from_slice(&self.to_coords(x));
            x = e.mul(x, w);
        }
        Matrix::from_flat(3, 3, rows)
    }

    /// Coefficients (ascending, monic, over GF(q)) of the minimal polynomial
    /// of the primitive element `w` over GF(q).
    pub fn generator_min_poly(&self) -> [Elem; 4] {
        let e = &self.ext;
        let w = e.generator();
        let roots = [w, self.frobenius(w, 1), self.frobenius(w, 2)];
        // (x - r0)(x - r1)(x - r2), ascending
        let mut c = vec![1 as Elem];
        for r in roots {
            let mut next = vec![0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] = e.add(next[i + 1], ci);
                next[i] = e.sub(next[i], e.mul(ci, r));
            }
            c = next;
        }
        let p = |x: Elem| self.project(x).expect("minimal polynomial over the subfield");
        [p(c[0]), p(c[1]), p(c[2]), p(c[3])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn towers() -> Vec<Tower> {
        [2, 3, 4, 5].iter().map(|&q| Tower::of_order(q).unwrap()).collect()
    }

    #[test]
    fn norm_and_trace_of_zero() {
        for t in towers() {
            assert_eq!(t.norm(0), 0);
            assert_eq!(t.trace(0), 0);
        }
    }

    #[test]
    fn gf8_norm_is_one_on_units() {
        let t = Tower::of_order(2).unwrap();
        for a in 1..8 {
            assert_eq!(t.norm(a), 1);
        }
    }

    #[test]
    fn gf8_trace_is_balanced() {
        let t = Tower::of_order(2).unwrap();
        assert_eq!(t.ext().poly(), &[1, 1, 0, 1]);
        let ones = (0..8).filter(|&a| t.trace(a) == 1).count();
        assert_eq!(ones, 4);
    }

    #[test]
    fn norm_multiplicative_trace_additive_exhaustive() {
        for q in [2, 3] {
            let t = Tower::of_order(q).unwrap();
            let (b, e) = (t.base(), t.ext());
            for x in e.elements() {
                for y in e.elements() {
                    assert_eq!(t.norm(e.mul(x, y)), b.mul(t.norm(x), t.norm(y)));
                    assert_eq!(t.trace(e.add(x, y)), b.add(t.trace(x), t.trace(y)));
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for q in [2, 3] {
            let t = Tower::of_order(q).unwrap();
            let e = t.ext();
            for a in e.elements() {
                for b in e.elements() {
                    assert_eq!(
                        t.frobenius(e.add(a, b), 1),
                        e.add(t.frobenius(a, 1), t.frobenius(b, 1))
                    );
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_field_homomorphism_onto_the_fixed_field() {
        for t in towers() {
            let (b, e) = (t.base(), t.ext());
            let fixed: Vec<Elem> = e.elements().filter(|&x| t.in_subfield(x)).collect();
            assert_eq!(fixed.len() as u32, b.order());
            for x in b.elements() {
                assert!(t.in_subfield(t.embed(x)));
                assert_eq!(t.project(t.embed(x)), Some(x));
                for y in b.elements() {
                    assert_eq!(t.embed(b.add(x, y)), e.add(t.embed(x), t.embed(y)));
                    assert_eq!(t.embed(b.mul(x, y)), e.mul(t.embed(x), t.embed(y)));
                }
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        for t in towers() {
            for x in t.ext().elements() {
                assert_eq!(t.from_coords(t.to_coords(x)), x);
            }
        }
    }

    #[test]
    fn mul_matrix_acts_on_coordinates() {
        for q in [2, 3] {
            let t = Tower::of_order(q).unwrap();
            let (b, e) = (t.base(), t.ext());
            for l in e.elements() {
                let m = t.mul_matrix(l);
                for x in e.elements() {
                    let c = m.apply(b, &t.to_coords(x));
                    assert_eq!(t.from_coords([c[0], c[1], c[2]]), e.mul(l, x));
                }
            }
        }
    }

    #[test]
    fn min_poly_annihilates_generator() {
        for t in towers() {
            let e = t.ext();
            let c = t.generator_min_poly();
            assert_eq!(c[3], 1);
            let w = e.generator();
            let v = c.iter().rev().fold(0, |acc, &ci| e.add(e.mul(acc, w), t.embed(ci)));
            assert_eq!(v, 0);
        }
    }
}
