//! Lines of PG(3, q) as points of the Klein quadric in PG(5, q).
//!
//! Plücker coordinates are ordered `p12, p13, p14, p23, p24, p34` (indices
//! 0..5 below), and the Klein quadric is `p12 p34 - p13 p24 + p14 p23`.

use crate::algebra::{all_subspaces, Elem, Field, Matrix, Subspace};
use crate::error::{Error, Result};

use super::quadric::Quadric;

/// Index pairs `(i, j)`, `i < j`, in Plücker order.
pub const PLUCKER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(i: usize, j: usize) -> usize {
    PLUCKER_PAIRS.iter().position(|&p| p == (i, j)).expect("valid pair")
}

/// Plücker vector of the line spanned by `x` and `y`.
pub fn plucker_vector(f: &Field, x: &[Elem], y: &[Elem]) -> [Elem; 6] {
    let mut p = [0; 6];
    for (k, &(i, j)) in PLUCKER_PAIRS.iter().enumerate() {
        p[k] = f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]));
    }
    p
}

/// The Klein map on lines of PG(3, q).
pub fn plucker(f: &Field, line: &Subspace) -> Result<Subspace> {
    if line.ambient() != 4 || line.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: line.dim() });
    }
    Ok(Subspace::point(f, &plucker_vector(f, line.row(0), line.row(1))))
}

/// Recovers the line from a point of the Klein quadric: the row space of the
/// skew matrix `(p_ij)`, which has rank 2 exactly on the quadric.
pub fn plucker_inv(f: &Field, point: &Subspace) -> Result<Subspace> {
    if point.ambient() != 6 || point.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: point.dim() });
    }
    let p = point.row(0);
    let mut m = Matrix::zeros(4, 4);
    for (k, &(i, j)) in PLUCKER_PAIRS.iter().enumerate() {
        m.set(i, j, p[k]);
        m.set(j, i, f.neg(p[k]));
    }
    let s = Subspace::from_matrix(f, &m);
    if s.dim() != 2 {
        return Err(Error::NotOnKlein);
    }
    Ok(s)
}

pub fn klein_quadric(f: &Field) -> Quadric {
    Quadric::from_terms(f, 6, &[(0, 5, 1), (1, 4, f.neg(1)), (2, 3, 1)])
}

/// The induced action `Λ²g` on Plücker coordinates, for row vectors:
/// `plucker(x g, y g) = plucker(x, y) Λ²g`.
pub fn compound2(f: &Field, g: &Matrix) -> Matrix {
    assert_eq!((g.rows(), g.cols()), (4, 4));
    let mut m = Matrix::zeros(6, 6);
    for (r, &(i, j)) in PLUCKER_PAIRS.iter().enumerate() {
        for (c, &(k, l)) in PLUCKER_PAIRS.iter().enumerate() {
            let v = f.sub(f.mul(g.get(i, k), g.get(j, l)), f.mul(g.get(i, l), g.get(j, k)));
            m.set(r, c, v);
        }
    }
    m
}

/// Span of the Plücker points of a set of lines.
pub fn plucker_span(f: &Field, lines: &[Subspace]) -> Result<Subspace> {
    let mut rows = Vec::with_capacity(6 * lines.len());
    for l in lines {
        rows.extend_from_slice(plucker(f, l)?.row(0));
    }
    Ok(Subspace::span(f, 6, &rows))
}

/// The plane of the Klein quadric formed by the lines of the plane `sigma`
/// (vector dimension 3) of PG(3, q).
pub fn greek_plane(f: &Field, sigma: &Subspace) -> Subspace {
    plucker_span(f, &sigma.subspaces(f, 2)).expect("lines of PG(3, q)")
}

/// The plane of the Klein quadric formed by the lines through the point `p`.
pub fn latin_plane(f: &Field, p: &Subspace) -> Subspace {
    let lines: Vec<Subspace> = all_subspaces(f, 4, 2)
        .into_iter()
        .filter(|l| l.contains(f, p))
        .collect();
    plucker_span(f, &lines).expect("lines of PG(3, q)")
}

/// `gamma`: the image of the lines of the plane `X4 = 0`.
pub fn gamma(f: &Field) -> Subspace {
    let mut rows = vec![0; 18];
    rows[0] = 1;
    rows[6 + 1] = 1;
    rows[12 + pair_index(1, 2)] = 1;
    Subspace::span(f, 6, &rows)
}

/// The Klein quadric with its two plane classes, Greek planes being the
/// images of line sets of planes of PG(3, q) and Latin planes the images of
/// stars of lines through a point.
#[derive(Clone, Debug)]
pub struct KleinModel {
    quadric: Quadric,
    gamma: Subspace,
    greek: Vec<Subspace>,
    latin: Vec<Subspace>,
}

impl KleinModel {
    pub fn new(f: &Field) -> Self {
        let mut greek: Vec<Subspace> =
            all_subspaces(f, 4, 3).iter().map(|s| greek_plane(f, s)).collect();
        let mut latin: Vec<Subspace> =
            all_subspaces(f, 4, 1).iter().map(|p| latin_plane(f, p)).collect();
        greek.sort();
        latin.sort();
        KleinModel { quadric: klein_quadric(f), gamma: gamma(f), greek, latin }
    }

    pub fn quadric(&self) -> &Quadric {
        &self.quadric
    }

    pub fn gamma(&self) -> &Subspace {
        &self.gamma
    }

    pub fn greek(&self) -> &[Subspace] {
        &self.greek
    }

    pub fn latin(&self) -> &[Subspace] {
        &self.latin
    }

    pub fn is_greek(&self, plane: &Subspace) -> bool {
        self.greek.binary_search(plane).is_ok()
    }
}

/// Splits the planes of a hyperbolic quadric of PG(5, q) into its two
/// classes, the first being the class of `reference`.
///
/// Two planes are in the same class iff they meet in a point or coincide,
/// i.e. iff their intersection has odd vector dimension.
pub fn plane_classes(
    f: &Field,
    quadric: &Quadric,
    reference: &Subspace,
) -> Result<(Vec<Subspace>, Vec<Subspace>)> {
    if quadric.ambient() != 6 || reference.ambient() != 6 || reference.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: reference.dim() });
    }
    if !quadric.is_totally_singular(f, reference) {
        return Err(Error::ReferenceNotOnQuadric);
    }
    Ok(quadric
        .singular_subspaces(f, 3)
        .into_iter()
        .partition(|s| s.meet_dim(f, reference) % 2 == 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::quadric::reguli;

    #[test]
    fn e1_e2_maps_to_first_coordinate() {
        let f = Field::new(2, 1).unwrap();
        let l = Subspace::from_vectors(&f, 4, &[[1, 0, 0, 0], [0, 1, 0, 0]]);
        let p = plucker(&f, &l).unwrap();
        assert_eq!(p.row(0), &[1, 0, 0, 0, 0, 0]);
        assert!(klein_quadric(&f).contains_point(&f, &p));
    }

    #[test]
    fn klein_map_is_a_bijection_onto_the_quadric() {
        for q in [2, 3] {
            let f = Field::of_order(q).unwrap();
            let k = klein_quadric(&f);
            let lines = all_subspaces(&f, 4, 2);
            let mut pts: Vec<Subspace> = lines.iter().map(|l| plucker(&f, l).unwrap()).collect();
            for (l, p) in lines.iter().zip(&pts) {
                assert_eq!(&plucker_inv(&f, p).unwrap(), l);
            }
            pts.sort();
            pts.dedup();
            assert_eq!(pts, k.points(&f));
        }
        let f = Field::new(2, 1).unwrap();
        assert_eq!(klein_quadric(&f).points(&f).len(), 35);
    }

    #[test]
    fn inverse_rejects_points_off_the_quadric() {
        let f = Field::new(3, 1).unwrap();
        let p = Subspace::point(&f, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(plucker_inv(&f, &p), Err(Error::NotOnKlein));
    }

    #[test]
    fn compound_matches_line_images() {
        let f = Field::new(3, 1).unwrap();
        let g = Matrix::from_rows(&[[1, 2, 0, 1], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 2]]);
        assert!(g.is_invertible(&f));
        let c = compound2(&f, &g);
        for l in all_subspaces(&f, 4, 2) {
            let lhs = plucker(&f, &l.image(&f, &g)).unwrap();
            let rhs = plucker(&f, &l).unwrap().image(&f, &c);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gamma_is_the_plane_of_lines_in_x4_zero() {
        let f = Field::new(2, 1).unwrap();
        let pi = Subspace::from_vectors(&f, 4, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]);
        assert_eq!(greek_plane(&f, &pi), gamma(&f));
        for l in pi.subspaces(&f, 2) {
            assert!(gamma(&f).contains(&f, &plucker(&f, &l).unwrap()));
        }
    }

    #[test]
    fn plane_classes_at_q2() {
        let f = Field::new(2, 1).unwrap();
        let model = KleinModel::new(&f);
        assert_eq!(model.greek().len(), 15);
        assert_eq!(model.latin().len(), 15);
        assert!(model.is_greek(model.gamma()));
        let (g, l) = plane_classes(&f, model.quadric(), model.gamma()).unwrap();
        assert_eq!(g, model.greek());
        assert_eq!(l, model.latin());
        for (i, a) in g.iter().enumerate() {
            for b in &g[i + 1..] {
                assert_eq!(a.meet_dim(&f, b), 1);
            }
            for b in &l {
                assert!(matches!(a.meet_dim(&f, b), 0 | 2));
            }
        }
        for (i, a) in l.iter().enumerate() {
            for b in &l[i + 1..] {
                assert_eq!(a.meet_dim(&f, b), 1);
            }
        }
    }

    #[test]
    fn plane_classes_follow_the_reference() {
        let f = Field::new(2, 1).unwrap();
        let model = KleinModel::new(&f);
        let latin_ref = &model.latin()[3];
        let (first, second) = plane_classes(&f, model.quadric(), latin_ref).unwrap();
        assert_eq!(first, model.latin());
        assert_eq!(second, model.greek());
        let off = Subspace::from_vectors(&f, 6, &[[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]);
        assert_eq!(
            plane_classes(&f, model.quadric(), &off),
            Err(Error::ReferenceNotOnQuadric)
        );
    }

    #[test]
    fn reguli_map_to_conics_in_polar_planes() {
        let f = Field::new(2, 1).unwrap();
        let k = klein_quadric(&f);
        let pol = k.polarity(&f);
        let kpts = k.points(&f);
        let mut seen = 0;
        // every hyperbolic quadric of PG(3, 2), via every upper-triangular form
        let mut quadrics = std::collections::BTreeSet::new();
        for code in 1u32..1 << 10 {
            let mut terms = Vec::new();
            let mut bit = 0;
            for i in 0..4 {
                for j in i..4 {
                    if code >> bit & 1 == 1 {
                        terms.push((i, j, 1));
                    }
                    bit += 1;
                }
            }
            let qd = Quadric::from_terms(&f, 4, &terms);
            if qd.is_hyperbolic_solid(&f) {
                quadrics.insert(qd.points(&f));
                let [r1, r2] = reguli(&f, &qd).unwrap();
                let s1 = plucker_span(&f, r1.lines()).unwrap();
                let s2 = plucker_span(&f, r2.lines()).unwrap();
                assert_eq!(s1.dim(), 3);
                assert_eq!(pol.perp(&f, &s1), s2);
                for (s, r) in [(&s1, &r1), (&s2, &r2)] {
                    let mut on: Vec<Subspace> =
                        kpts.iter().filter(|p| s.contains(&f, p)).cloned().collect();
                    on.sort();
                    let mut img: Vec<Subspace> =
                        r.lines().iter().map(|l| plucker(&f, l).unwrap()).collect();
                    img.sort();
                    assert_eq!(on, img);
                }
                seen += 1;
            }
        }
        assert!(seen > 0);
        // |PGL(4,2)| / |PGO+(4,2)| = 20160 / 72
        assert_eq!(quadrics.len(), 280);
    }
}
