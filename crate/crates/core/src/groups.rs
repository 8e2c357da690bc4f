//! Projectivity groups given by generators, and orbits of subspaces.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::algebra::{Field, Matrix, Subspace, Tower};
use crate::error::{Error, Result};

/// An element of PGL(n, q), stored as the representative whose first
/// nonzero entry is 1, so equal projectivities compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Projectivity {
    matrix: Matrix,
}

impl fmt::Debug for Projectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Projectivity{:?}", self.matrix)
    }
}

impl Projectivity {
    pub fn new(f: &Field, m: Matrix) -> Result<Self> {
        if !m.is_invertible(f) {
            return Err(Error::InvalidParameters("singular matrix".into()));
        }
        Ok(Self::normalized(f, m))
    }

    fn normalized(f: &Field, m: Matrix) -> Self {
        let lead = *m.data().iter().find(|&&x| x != 0).expect("nonzero matrix");
        let matrix = if lead == 1 { m } else { m.scale(f, f.inv_nz(lead)) };
        Projectivity { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Projectivity { matrix: Matrix::identity(n) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ambient(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.ambient())
    }

    /// `self` followed by `other` (row vectors, matrices on the right).
    pub fn then(&self, f: &Field, other: &Projectivity) -> Projectivity {
        Self::normalized(f, self.matrix.mul(f, &other.matrix))
    }

    pub fn inverse(&self, f: &Field) -> Projectivity {
        Self::normalized(f, self.matrix.inverse(f).expect("invertible"))
    }

    pub fn pow(&self, f: &Field, k: u64) -> Projectivity {
        Self::normalized(f, self.matrix.pow(f, k))
    }

    pub fn apply(&self, f: &Field, s: &Subspace) -> Subspace {
        s.image(f, &self.matrix)
    }

    /// Order in PGL(n, q), by iteration.
    pub fn order(&self, f: &Field) -> u64 {
        let mut g = self.clone();
        let mut k = 1;
        while !g.is_identity() {
            g = g.then(f, self);
            k += 1;
        }
        k
    }
}

/// A named group given by generators, with the order it is claimed to have.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub name: String,
    pub generators: Vec<Projectivity>,
    pub claimed_order: Option<u64>,
}

impl GroupSpec {
    pub fn new(name: &str, generators: Vec<Projectivity>, claimed_order: Option<u64>) -> Self {
        GroupSpec { name: name.to_string(), generators, claimed_order }
    }

    pub fn trivial(n: usize) -> Self {
        GroupSpec::new("trivial", vec![Projectivity::identity(n)], Some(1))
    }

    pub fn ambient(&self) -> usize {
        self.generators.first().map_or(0, Projectivity::ambient)
    }

    /// The group generated by both generator sets. The claimed order assumes
    /// the product is direct.
    pub fn product(&self, other: &GroupSpec, name: &str) -> GroupSpec {
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        let claimed_order = self.claimed_order.zip(other.claimed_order).map(|(a, b)| a * b);
        GroupSpec::new(name, generators, claimed_order)
    }

    /// All elements, sorted, by closure under right multiplication by the
    /// generators.
    pub fn elements(&self, f: &Field) -> Vec<Projectivity> {
        let id = Projectivity::identity(self.ambient());
        let mut seen = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = g.then(f, s);
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn order(&self, f: &Field) -> u64 {
        self.elements(f).len() as u64
    }

    /// Checks the claimed order against full enumeration.
    pub fn check_order(&self, f: &Field) -> Result<u64> {
        let n = self.order(f);
        match self.claimed_order {
            Some(c) if c != n => Err(Error::Construction(format!(
                "group {} has order {n}, claimed {c}",
                self.name
            ))),
            _ => Ok(n),
        }
    }

    /// Orbit of `seed`, sorted.
    pub fn orbit(&self, f: &Field, seed: &Subspace) -> Result<Vec<Subspace>> {
        if seed.ambient() != self.ambient() {
            return Err(Error::AmbientMismatch(seed.ambient(), self.ambient()));
        }
        let mut seen = BTreeSet::from([seed.clone()]);
        let mut queue = VecDeque::from([seed.clone()]);
        while let Some(s) = queue.pop_front() {
            for g in &self.generators {
                let t = g.apply(f, &s);
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Orbits partitioning `items` (which must be invariant), each sorted,
    /// ordered by their smallest member.
    pub fn orbits(&self, f: &Field, items: &[Subspace]) -> Result<Vec<Vec<Subspace>>> {
        let mut left: BTreeSet<Subspace> = items.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some(first) = left.pop_first() {
            let orb = self.orbit(f, &first)?;
            for s in &orb {
                left.remove(s);
            }
            out.push(orb);
        }
        Ok(out)
    }
}

/// Singer cycle of GL(3, q): the companion matrix whose last column holds
/// the ascending coefficients of `x^3 - m(x)`, where `m` is the minimal
/// polynomial over GF(q) of the primitive element of GF(q^3).
///
/// It is the transpose of multiplication by that element in coordinates.
pub fn singer_matrix(t: &Tower) -> Matrix {
    let f = t.base();
    let c = t.generator_min_poly();
    let mut a = Matrix::zeros(3, 3);
    a.set(1, 0, 1);
    a.set(2, 1, 1);
    for i in 0..3 {
        a.set(i, 2, f.neg(c[i]));
    }
    a
}

/// The groups used by the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupName {
    /// `<diag(A, 1)>` on PG(3, q), fixing the plane `X4 = 0` and the point
    /// `(0, 0, 0, 1)`.
    CPg3,
    /// `g_eta : (a, b) ↦ (eta^2 a, eta^{q+1} b)` on pairs over GF(q^3).
    VeroneseS,
    /// `h_w : (a, b) ↦ (a, w b)`.
    VeroneseT,
    /// `S × T`.
    VeroneseG,
    /// `<diag(C, C^{-T})>` on PG(5, q).
    KleinHprime,
    /// `H' × <diag(I, -I)>`.
    KleinH,
    /// `<diag(I, C^{T(q-1)})>`.
    KleinK,
    /// `K × H`.
    KleinKH,
}

impl GroupName {
    pub fn tag(self) -> &'static str {
        match self {
            GroupName::CPg3 => "C_pg3",
            GroupName::VeroneseS => "veronese_S",
            GroupName::VeroneseT => "veronese_T",
            GroupName::VeroneseG => "veronese_G",
            GroupName::KleinHprime => "klein_Hprime",
            GroupName::KleinH => "klein_H",
            GroupName::KleinK => "klein_K",
            GroupName::KleinKH => "klein_KH",
        }
    }
}

/// Block diagonal `diag(M(lambda), M(mu))` acting on the pair model
/// `(a, b) ∈ GF(q^3)^2 = GF(q)^6`.
pub fn pair_map(t: &Tower, lambda: u16, mu: u16) -> Matrix {
    Matrix::block_diag(&[&t.mul_matrix(lambda), &t.mul_matrix(mu)])
}

pub fn build_group(t: &Tower, name: GroupName) -> Result<GroupSpec> {
    let f = t.base();
    let e = t.ext();
    let q = t.q() as u64;
    let w = e.generator();
    let odd = f.characteristic() != 2;
    let need_odd = || {
        if odd {
            Ok(())
        } else {
            Err(Error::EvenQ(t.q()))
        }
    };
    let proj = |m: Matrix| Projectivity::new(f, m);
    let c = singer_matrix(t);
    let spec = match name {
        GroupName::CPg3 => {
            let g = Matrix::block_diag(&[&c, &Matrix::identity(1)]);
            GroupSpec::new(name.tag(), vec![proj(g)?], Some(q * q * q - 1))
        }
        GroupName::VeroneseS => {
            need_odd()?;
            let g = pair_map(t, e.mul(w, w), e.pow(w, q + 1));
            GroupSpec::new(name.tag(), vec![proj(g)?], Some(q * q + q + 1))
        }
        GroupName::VeroneseT => {
            need_odd()?;
            GroupSpec::new(name.tag(), vec![proj(pair_map(t, 1, w))?], Some(q * q * q - 1))
        }
        GroupName::VeroneseG => build_group(t, GroupName::VeroneseS)?
            .product(&build_group(t, GroupName::VeroneseT)?, name.tag()),
        GroupName::KleinHprime => {
            let cit = c.inverse(f).expect("Singer cycle").transpose();
            let g = Matrix::block_diag(&[&c, &cit]);
            // C^{(q^3-1)/2} = -I makes the block matrix scalar when q is odd
            let order = if odd { (q * q * q - 1) / 2 } else { q * q * q - 1 };
            GroupSpec::new(name.tag(), vec![proj(g)?], Some(order))
        }
        GroupName::KleinH => {
            let hp = build_group(t, GroupName::KleinHprime)?;
            let mut gens = hp.generators;
            if odd {
                let minus = Matrix::identity(3).scale(f, f.neg(1));
                gens.push(proj(Matrix::block_diag(&[&Matrix::identity(3), &minus]))?);
            }
            GroupSpec::new(name.tag(), gens, Some(q * q * q - 1))
        }
        GroupName::KleinK => {
            let ct = c.transpose().pow(f, q - 1);
            let g = Matrix::block_diag(&[&Matrix::identity(3), &ct]);
            GroupSpec::new(name.tag(), vec![proj(g)?], Some(q * q + q + 1))
        }
        GroupName::KleinKH => build_group(t, GroupName::KleinK)?
            .product(&build_group(t, GroupName::KleinH)?, name.tag()),
    };
    Ok(spec)
}
