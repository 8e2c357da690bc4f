//! Planes of PG(8, q) pairwise meeting in at most a point, by linking copies
//! of the PG(5, q) families along a common plane.
//!
//! `Gamma = <e0..e5>` carries a copy `A` of the family S, and `gamma_ext =
//! <e6, e7, e8>` is disjoint from it. Every plane `alpha_i` of `A` spans with
//! `gamma_ext` a five-space `Gamma_i`, which receives an embedded family of
//! PG(5, q) whose plane `gamma` is sent onto `gamma_ext`.

use rayon::prelude::*;

use crate::algebra::{Field, Matrix, Subspace, Tower};
use crate::cdc6::{construct_s1, disjoint_families, extend_family, quadrics_h, FamilyTag, Mode, Tiebreak};
use crate::error::{Error, Result};
use crate::verify::{min_distance, Code, Strategy, VerificationReport};

/// Coordinates of PG(5, q) outside `gamma = <e0, e1, e3>`, in the order they
/// are sent onto the rows of `alpha_i`.
const OFF_GAMMA: [usize; 3] = [2, 4, 5];
const ON_GAMMA: [usize; 3] = [0, 1, 3];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LinkageConfig {
    /// Index, among the disjoint families of S1, of the family placed first
    /// in `A`.
    pub a_prime: usize,
    /// Choice of planes through the lines of `gamma` for `A` itself.
    pub tiebreak_a: Tiebreak,
    /// The same choice for the family in `Gamma_1`.
    pub tiebreak_d1: Tiebreak,
}

pub fn big_gamma(f: &Field) -> Subspace {
    let rows: Vec<Vec<u16>> = (0..6).map(|i| unit(9, i)).collect();
    Subspace::from_vectors(f, 9, &rows)
}

pub fn gamma_ext(f: &Field) -> Subspace {
    let rows: Vec<Vec<u16>> = (6..9).map(|i| unit(9, i)).collect();
    Subspace::from_vectors(f, 9, &rows)
}

fn unit(n: usize, i: usize) -> Vec<u16> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Pads a subspace of PG(5, q) into `Gamma`.
pub fn into_big_gamma(f: &Field, s: &Subspace) -> Subspace {
    let mut rows = Vec::with_capacity(9 * s.dim());
    for i in 0..s.dim() {
        rows.extend_from_slice(s.row(i));
        rows.extend_from_slice(&[0, 0, 0]);
    }
    Subspace::span(f, 9, &rows)
}

/// The 6 x 9 matrix sending `e0, e1, e3` onto `gamma_ext` and `e2, e4, e5`
/// onto the basis of `alpha`, a plane of `Gamma`.
pub fn build_embedding(f: &Field, alpha: &Subspace, gamma_ext: &Subspace) -> Result<Matrix> {
    if alpha.ambient() != 9 || gamma_ext.ambient() != 9 {
        return Err(Error::AmbientMismatch(9, alpha.ambient().max(gamma_ext.ambient())));
    }
    if alpha.dim() != 3 || gamma_ext.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: alpha.dim().min(gamma_ext.dim()) });
    }
    let mut m = Matrix::zeros(6, 9);
    for (r, (&on, &off)) in ON_GAMMA.iter().zip(&OFF_GAMMA).enumerate() {
        for c in 0..9 {
            m.set(on, c, gamma_ext.row(r)[c]);
            m.set(off, c, alpha.row(r)[c]);
        }
    }
    if m.rank(f) != 6 {
        return Err(Error::Construction("alpha meets gamma_ext".into()));
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct Pg8Code {
    pub config: LinkageConfig,
    pub code: Code,
    /// The planes `alpha_1, alpha_2, ...` of `Gamma`, in linkage order.
    pub alphas: Vec<Subspace>,
    /// Which family each `Gamma_i` carries, with its size.
    pub census: Vec<(FamilyTag, usize)>,
    pub report: VerificationReport,
}

impl Pg8Code {
    /// `(family, number of five-spaces, planes each)`.
    pub fn census_summary(&self) -> Vec<(FamilyTag, usize, usize)> {
        let mut out: Vec<(FamilyTag, usize, usize)> = Vec::new();
        for &(tag, n) in &self.census {
            match out.last_mut() {
                Some(last) if last.0 == tag && last.2 == n => last.1 += 1,
                _ => out.push((tag, 1, n)),
            }
        }
        out
    }
}

pub fn expected_pg8_size(q: u64) -> u64 {
    q.pow(12) + 2 * q.pow(8) + 2 * q.pow(7) + q.pow(6) + q.pow(5) + q.pow(4) + 1
}

pub fn construct_pg8(t: &Tower, cfg: LinkageConfig) -> Result<Pg8Code> {
    let f = t.base();
    let q = t.q() as usize;
    let h = quadrics_h(t)?;
    let s1 = construct_s1(&h)?;
    let fams = disjoint_families(&h, &s1)?;
    let a_prime = fams.get(cfg.a_prime).ok_or_else(|| {
        Error::InvalidParameters(format!("disjoint family {} of {}", cfg.a_prime, fams.len()))
    })?;
    let s2 = extend_family(f, &s1, Mode::C1, Tiebreak::Lex)?;
    let s3 = extend_family(f, &s1, Mode::C2, Tiebreak::Lex)?;
    let sa = extend_family(f, &s1, Mode::C3, cfg.tiebreak_a)?;
    let sd1 = if cfg.tiebreak_d1 == cfg.tiebreak_a {
        sa.clone()
    } else {
        extend_family(f, &s1, Mode::C3, cfg.tiebreak_d1)?
    };

    let mut order: Vec<&Subspace> = a_prime.planes.iter().collect();
    order.extend(sa.planes().filter(|p| a_prime.planes.binary_search(p).is_err()));
    if order.len() != sa.len() {
        return Err(Error::Construction("disjoint family is not inside A".into()));
    }
    let alphas: Vec<Subspace> = order.iter().map(|p| into_big_gamma(f, p)).collect();
    let ge = gamma_ext(f);
    let n1 = q * q * q - 1;
    let census: Vec<(FamilyTag, usize)> = (0..alphas.len())
        .map(|i| match i {
            0 => (FamilyTag::S, sd1.len()),
            i if i < n1 => (FamilyTag::S3, s3.len()),
            _ => (FamilyTag::S2, s2.len()),
        })
        .collect();
    let words: Vec<Subspace> = alphas
        .par_iter()
        .enumerate()
        .map(|(i, alpha)| {
            let m = build_embedding(f, alpha, &ge)?;
            let fam = match census[i].0 {
                FamilyTag::S => &sd1,
                FamilyTag::S3 => &s3,
                _ => &s2,
            };
            Ok(fam.planes().map(|p| p.image(f, &m)).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let expected = expected_pg8_size(q as u64) as usize;
    if words.len() != expected {
        return Err(Error::Construction(format!("{} planes, expected {expected}", words.len())));
    }
    let code = Code::new(words)?;
    let report = min_distance(f, &code, Strategy::LineHash)?;
    if report.min_distance < 4 {
        let (i, j) = report.witness.expect("witness");
        return Err(Error::Construction(format!(
            "planes {:?} and {:?} share a line",
            code.words()[i],
            code.words()[j]
        )));
    }
    Ok(Pg8Code { config: cfg, code, alphas, census, report })
}
