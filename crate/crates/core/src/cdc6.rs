//! Planes of PG(5, q) pairwise meeting in at most a point, obtained from the
//! circumscribed bundle through the Klein correspondence.
//!
//! PG(3, q) carries the plane `pi = {X4 = 0}`, which holds the bundle, and
//! the point `T = (0, 0, 0, 1)`. The group `C = <diag(A, 1)>`, `A` a Singer
//! cycle, fixes both.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{all_points, all_subspaces, Elem, Field, Matrix, Subspace, Tower};
use crate::bundle::{circumscribed_bundle, Bundle};
use crate::error::{Error, Result};
use crate::geometry::klein::{gamma, greek_plane, latin_plane};
use crate::geometry::{
    compound2, klein_quadric, plucker_inv, plucker_span, reguli, symplectic_fit, Quadric, Regulus,
};
use crate::groups::{build_group, GroupName};
use crate::verify::{min_distance, Code, Strategy};

/// A hyperbolic quadric `F + X4 (a X1 + b X2 + c X3 + d X4)` of PG(3, q),
/// `F` the bundle conic with index `conic`, `tail = [a, b, c, d]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HQuadric {
    pub quadric: Quadric,
    pub conic: usize,
    pub tail: [Elem; 4],
}

impl HQuadric {
    pub fn contains_t(&self) -> bool {
        self.tail[3] == 0
    }
}

/// The hyperbolic quadrics of PG(3, q) meeting `pi` in a conic of the
/// bundle, ordered by conic index and then by tail.
#[derive(Clone, Debug)]
pub struct QuadricFamilyH {
    tower: Tower,
    bundle: Bundle,
    quadrics: Vec<HQuadric>,
}

impl QuadricFamilyH {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn field(&self) -> &Field {
        self.tower.base()
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn quadrics(&self) -> &[HQuadric] {
        &self.quadrics
    }

    pub fn len(&self) -> usize {
        self.quadrics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quadrics.is_empty()
    }

    /// The generator `diag(A, 1)` of `C`.
    pub fn c_generator(&self) -> Matrix {
        Matrix::block_diag(&[self.bundle.singer(), &Matrix::identity(1)])
    }
}

pub fn pi_plane(f: &Field) -> Subspace {
    Subspace::from_vectors(f, 4, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
}

pub fn t_point(f: &Field) -> Subspace {
    Subspace::point(f, &[0, 0, 0, 1])
}

fn lift_conic(f: &Field, conic: &Quadric, tail: [Elem; 4]) -> Quadric {
    let mut terms = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            terms.push((i, j, conic.form().get(i, j)));
        }
    }
    for (i, &c) in tail.iter().enumerate() {
        terms.push((i, 3, c));
    }
    Quadric::from_terms(f, 4, &terms)
}

pub fn quadrics_h(t: &Tower) -> Result<QuadricFamilyH> {
    let f = t.base();
    let q = f.order() as usize;
    let bundle = circumscribed_bundle(t)?;
    let per_conic = q * q * q * (q - 1) / 2;
    let mut quadrics = Vec::new();
    for (ci, conic) in bundle.conics().iter().enumerate() {
        let before = quadrics.len();
        for code in 0..q.pow(4) {
            let tail: [Elem; 4] = std::array::from_fn(|i| ((code / q.pow(3 - i as u32)) % q) as Elem);
            let quadric = lift_conic(f, conic, tail);
            if quadric.is_hyperbolic_solid(f) {
                quadrics.push(HQuadric { quadric, conic: ci, tail });
            }
        }
        if quadrics.len() - before != per_conic {
            return Err(Error::Construction(format!(
                "conic {ci} lies on {} hyperbolic quadrics, expected {per_conic}",
                quadrics.len() - before
            )));
        }
    }
    Ok(QuadricFamilyH { tower: t.clone(), bundle, quadrics })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    S1,
    S2,
    S3,
    S,
}

impl FamilyTag {
    pub fn tag(self) -> &'static str {
        match self {
            FamilyTag::S1 => "s1",
            FamilyTag::S2 => "s2",
            FamilyTag::S3 => "s3",
            FamilyTag::S => "s",
        }
    }
}

/// Where a plane of a family comes from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    /// Plücker span of regulus `side` (0 or 1) of quadric `quadric` of H.
    Regulus { quadric: usize, side: u8 },
    /// The lines through a point of PG(3, q) off `pi`.
    Latin(Subspace),
    /// The lines of a plane of PG(3, q) other than `pi`.
    Greek(Subspace),
    /// Candidate `choice` among the planes through a line of `gamma` meeting
    /// the Klein quadric only in that line.
    GammaLine { line: Subspace, choice: usize },
}

#[derive(Clone, Debug)]
pub struct PlaneFamily {
    pub tag: FamilyTag,
    /// Sorted by plane.
    members: Vec<(Subspace, Source)>,
}

impl PlaneFamily {
    fn new(tag: FamilyTag, mut members: Vec<(Subspace, Source)>) -> Result<Self> {
        members.sort();
        if let Some(w) = members.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Construction(format!(
                "plane {:?} arises twice ({:?}, {:?})",
                w[0].0, w[0].1, w[1].1
            )));
        }
        Ok(PlaneFamily { tag, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[(Subspace, Source)] {
        &self.members
    }

    pub fn planes(&self) -> impl Iterator<Item = &Subspace> {
        self.members.iter().map(|m| &m.0)
    }

    pub fn contains(&self, plane: &Subspace) -> bool {
        self.members.binary_search_by(|m| m.0.cmp(plane)).is_ok()
    }

    pub fn to_code(&self) -> Result<Code> {
        Code::new(self.planes().cloned().collect())
    }

    /// Checks that distinct members meet in at most a point.
    pub fn verify(&self, f: &Field) -> Result<()> {
        let code = self.to_code()?;
        let rep = min_distance(f, &code, Strategy::LineHash)?;
        if rep.min_distance < 4 {
            let (i, j) = rep.witness.expect("witness");
            return Err(Error::Construction(format!(
                "family {} has planes {:?} and {:?} sharing a line",
                self.tag.tag(),
                code.words()[i],
                code.words()[j]
            )));
        }
        Ok(())
    }
}

/// The Plücker plane of a regulus.
pub fn regulus_plane(f: &Field, r: &Regulus) -> Subspace {
    plucker_span(f, r.lines()).expect("lines of PG(3, q)")
}

/// The regulus whose Plücker points are the points of `plane` on the Klein
/// quadric.
pub fn plane_regulus(f: &Field, plane: &Subspace) -> Regulus {
    let k = klein_quadric(f);
    Regulus::new(
        plane
            .points(f)
            .iter()
            .filter(|p| k.contains_point(f, p))
            .map(|p| plucker_inv(f, p).expect("point of the Klein quadric"))
            .collect(),
    )
}

pub fn construct_s1(h: &QuadricFamilyH) -> Result<PlaneFamily> {
    let f = h.field();
    let q = f.order() as usize;
    let k = klein_quadric(f);
    let mut members = Vec::with_capacity(2 * h.len());
    for (qi, hq) in h.quadrics.iter().enumerate() {
        for (side, r) in reguli(f, &hq.quadric)?.iter().enumerate() {
            let plane = regulus_plane(f, r);
            let on_k = plane.points(f).iter().filter(|p| k.contains_point(f, p)).count();
            if plane.dim() != 3 || on_k != q + 1 {
                return Err(Error::Construction(format!(
                    "regulus {side} of quadric {qi} does not span a conic plane"
                )));
            }
            members.push((plane, Source::Regulus { quadric: qi, side: side as u8 }));
        }
    }
    PlaneFamily::new(FamilyTag::S1, members)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Add the Latin planes of the Klein quadric disjoint from `gamma`.
    C1,
    /// Add the Greek planes other than `gamma`.
    C2,
    /// As `C2`, then add one plane through each line of `gamma` meeting the
    /// Klein quadric only in that line.
    C3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Tiebreak {
    /// The smallest candidate.
    #[default]
    Lex,
    /// Candidates drawn by a ChaCha8 stream seeded with the value, one draw
    /// per line of `gamma` in sorted line order.
    Seeded(u64),
}

impl Tiebreak {
    pub fn describe(self) -> String {
        match self {
            Tiebreak::Lex => "lex".to_string(),
            Tiebreak::Seeded(s) => format!("seed:{s}"),
        }
    }
}

/// The `q - 1` planes through the line `line` of `gamma` meeting the Klein
/// quadric exactly in `line`, sorted.
pub fn gamma_line_candidates(f: &Field, line: &Subspace) -> Vec<Subspace> {
    let k = klein_quadric(f);
    let perp = k.polarity(f).perp(f, line);
    let mut out = BTreeSet::new();
    for x in perp.points(f) {
        if !line.contains(f, &x) && !k.contains_point(f, &x) {
            out.insert(line.join(f, &x));
        }
    }
    out.into_iter().collect()
}

pub fn extend_family(f: &Field, s1: &PlaneFamily, mode: Mode, tiebreak: Tiebreak) -> Result<PlaneFamily> {
    let mut members = s1.members.clone();
    let pi = pi_plane(f);
    match mode {
        Mode::C1 => {
            for p in all_points(f, 4).into_iter().filter(|p| !pi.contains(f, p)) {
                members.push((latin_plane(f, &p), Source::Latin(p)));
            }
        }
        Mode::C2 | Mode::C3 => {
            for s in all_subspaces(f, 4, 3).into_iter().filter(|s| *s != pi) {
                members.push((greek_plane(f, &s), Source::Greek(s)));
            }
        }
    }
    let tag = match mode {
        Mode::C1 => FamilyTag::S2,
        Mode::C2 => FamilyTag::S3,
        Mode::C3 => FamilyTag::S,
    };
    if mode == Mode::C3 {
        let mut rng = match tiebreak {
            Tiebreak::Lex => None,
            Tiebreak::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        };
        for line in gamma(f).subspaces(f, 2).into_iter().collect::<BTreeSet<_>>() {
            let cands = gamma_line_candidates(f, &line);
            if cands.len() + 1 != f.order() as usize {
                return Err(Error::Construction(format!(
                    "{} candidate planes through a line of gamma",
                    cands.len()
                )));
            }
            let choice = rng.as_mut().map_or(0, |r| r.gen_range(0..cands.len()));
            members.push((cands[choice].clone(), Source::GammaLine { line, choice }));
        }
    }
    let fam = PlaneFamily::new(tag, members)?;
    fam.verify(f)?;
    Ok(fam)
}

/// `q^3 - 1` pairwise disjoint planes of S1: the Plücker planes of the
/// `C`-orbit of one regulus of a quadric of H not through `T`.
#[derive(Clone, Debug)]
pub struct DisjointFamily {
    /// Quadric and side of the regulus whose plane is the smallest member.
    pub quadric: usize,
    pub side: u8,
    /// `reguli[i]` is the image of `reguli[0]` under the `i`-th power of
    /// the generator of `C`.
    pub reguli: Vec<Regulus>,
    /// Sorted.
    pub planes: Vec<Subspace>,
}

pub fn disjoint_families(h: &QuadricFamilyH, s1: &PlaneFamily) -> Result<Vec<DisjointFamily>> {
    let f = h.field();
    let q = f.order() as usize;
    let g = h.c_generator();
    let g6 = compound2(f, &g);
    let mut left: BTreeMap<Subspace, (usize, u8)> = s1
        .members
        .iter()
        .filter_map(|(p, src)| match src {
            Source::Regulus { quadric, side } if !h.quadrics[*quadric].contains_t() => {
                Some((p.clone(), (*quadric, *side)))
            }
            _ => None,
        })
        .collect();
    let avoiding = h.quadrics.iter().filter(|x| !x.contains_t()).count();
    if avoiding != (q * q * q - q * q - q) * (q * q * q - 1) / 2 {
        return Err(Error::Construction(format!("{avoiding} quadrics of H miss T")));
    }
    let mut out = Vec::new();
    while let Some((start, (quadric, side))) = left.pop_first() {
        let r0 = reguli(f, &h.quadrics[quadric].quadric)?[side as usize].clone();
        let mut regs = vec![r0.clone()];
        let mut planes = vec![start.clone()];
        let mut r = r0.image(f, &g);
        let mut plane = start.image(f, &g6);
        while r != r0 {
            if left.remove(&plane).is_none() {
                return Err(Error::Construction(format!(
                    "orbit of regulus {side} of quadric {quadric} leaves S1"
                )));
            }
            regs.push(r.clone());
            planes.push(plane.clone());
            r = r.image(f, &g);
            plane = plane.image(f, &g6);
        }
        if regs.len() != q * q * q - 1 {
            return Err(Error::Construction(format!("regulus orbit of size {}", regs.len())));
        }
        planes.sort();
        for (i, a) in planes.iter().enumerate() {
            for b in &planes[i + 1..] {
                if a.meet_dim(f, b) != 0 {
                    return Err(Error::Construction(format!(
                        "disjoint family from quadric {quadric} has meeting planes {a:?} and {b:?}"
                    )));
                }
            }
        }
        out.push(DisjointFamily { quadric, side, reguli: regs, planes });
    }
    if out.len() != q * q * q - q * q - q {
        return Err(Error::Construction(format!("{} disjoint families", out.len())));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub q: u32,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed_count() == self.checks.len()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            s.push_str(&format!("{}: {} ({})\n", c.name, status, c.detail));
        }
        s.push_str(&format!("{}/{} pass\n", self.passed_count(), self.checks.len()));
        s
    }
}

fn check(name: &'static str, failure: Option<String>, ok_detail: String) -> LemmaCheck {
    match failure {
        None => LemmaCheck { name, passed: true, detail: ok_detail },
        Some(detail) => LemmaCheck { name, passed: false, detail },
    }
}

/// The Singer group on `pi`, as its `q^2+q+1` distinct powers.
struct PlaneGroup {
    powers: Vec<Matrix>,
}

impl PlaneGroup {
    fn new(f: &Field, a: &Matrix) -> Self {
        let q = f.order() as usize;
        let powers = (0..q * q + q + 1).map(|i| a.pow(f, i as u64)).collect();
        PlaneGroup { powers }
    }

    /// The unique element mapping point `x` to point `y`.
    fn carrying(&self, f: &Field, x: &Subspace, y: &Subspace) -> Option<&Matrix> {
        self.powers.iter().find(|m| x.image(f, m) == *y)
    }
}

fn line_through(f: &Field, a: &Subspace, b: &Subspace) -> Subspace {
    a.join(f, b)
}

/// Runs the eight statements about `C`, the bundle, flags, reguli and
/// symplectic spaces as exhaustive computations.
pub fn lemma_suite(t: &Tower) -> Result<LemmaReport> {
    let h = quadrics_h(t)?;
    let f = h.field();
    let q = f.order() as usize;
    let n = q * q * q - 1;
    let bundle = h.bundle();
    let a = bundle.singer().clone();
    let c = build_group(t, GroupName::CPg3)?;
    let pi = pi_plane(f);
    let tp = t_point(f);
    let mut checks = Vec::new();

    // C on points off pi and T, and on lines not in pi and not through T
    let off: Vec<Subspace> =
        all_points(f, 4).into_iter().filter(|p| !pi.contains(f, p) && *p != tp).collect();
    let point_orbits = c.orbits(f, &off)?;
    let admissible: Vec<Subspace> = all_subspaces(f, 4, 2)
        .into_iter()
        .filter(|l| !pi.contains(f, l) && !l.contains(f, &tp))
        .collect();
    let line_orbits = c.orbits(f, &admissible)?;
    let mut orbit_of: BTreeMap<Subspace, usize> = BTreeMap::new();
    for (i, o) in line_orbits.iter().enumerate() {
        for l in o {
            orbit_of.insert(l.clone(), i);
        }
    }
    let bad = if point_orbits.iter().any(|o| o.len() != n) {
        Some("a point orbit is not regular".to_string())
    } else if line_orbits.len() != q + 1 || line_orbits.iter().any(|o| o.len() != n) {
        Some(format!("{} line orbits", line_orbits.len()))
    } else {
        None
    };
    checks.push(check(
        "lines",
        bad,
        format!("{} admissible lines in {} orbits of size {n}", admissible.len(), q + 1),
    ));

    let c1 = PlaneGroup::new(f, &a);
    let plane_points = all_points(f, 3);
    let plane_lines = all_subspaces(f, 3, 2);
    let conic_sets: Vec<BTreeSet<Subspace>> =
        (0..bundle.len()).map(|i| bundle.points(i).iter().cloned().collect()).collect();
    let conic_with = |s: &BTreeSet<Subspace>| conic_sets.iter().position(|c| c == s);

    // Steiner: corresponding lines of the pencils at A1 and A1^g meet on a
    // bundle conic
    let mut bad = None;
    'steiner: for a1 in &plane_points {
        for a2 in &plane_points {
            if a1 == a2 {
                continue;
            }
            let g = c1.carrying(f, a1, a2).expect("Singer group is transitive");
            let set: BTreeSet<Subspace> = plane_lines
                .iter()
                .filter(|l| l.contains(f, a1))
                .map(|l| l.meet(f, &l.image(f, g)))
                .collect();
            let ok = set.iter().all(|p| p.dim() == 1)
                && set.contains(a1)
                && set.contains(a2)
                && conic_with(&set).is_some();
            if !ok {
                bad = Some(format!("pencils at {a1:?} and {a2:?}"));
                break 'steiner;
            }
        }
    }
    checks.push(check("steiner", bad, format!("{} ordered point pairs", plane_points.len() * (plane_points.len() - 1))));

    // tangents of two bundle conics at their common point differ
    let mut bad = None;
    for i in 0..bundle.len() {
        for j in i + 1..bundle.len() {
            let b = conic_sets[i].intersection(&conic_sets[j]).next().expect("common point");
            if bundle.tangent(f, i, b) == bundle.tangent(f, j, b) {
                bad = Some(format!("conics {i} and {j}"));
            }
        }
    }
    checks.push(check("tangent", bad, format!("{} conic pairs", bundle.len() * (bundle.len() - 1) / 2)));

    // flags of pi under C1
    let flags: Vec<(Subspace, Subspace)> = plane_lines
        .iter()
        .flat_map(|l| l.points(f).into_iter().map(move |p| (p, l.clone())))
        .collect();
    let mut flag_orbit: BTreeMap<(Subspace, Subspace), usize> = BTreeMap::new();
    let mut orbit_sizes = Vec::new();
    for fl in &flags {
        if flag_orbit.contains_key(fl) {
            continue;
        }
        let id = orbit_sizes.len();
        let mut size = 0;
        for m in &c1.powers {
            let img = (fl.0.image(f, m), fl.1.image(f, m));
            if flag_orbit.insert(img, id).is_none() {
                size += 1;
            }
        }
        orbit_sizes.push(size);
    }
    let mut bad = None;
    if orbit_sizes.len() != q + 1 || orbit_sizes.iter().any(|&s| s != q * q + q + 1) {
        bad = Some(format!("flag orbit sizes {orbit_sizes:?}"));
    }
    for ci in 0..bundle.len() {
        for o in 0..orbit_sizes.len() {
            let on: Vec<&(Subspace, Subspace)> = flag_orbit
                .iter()
                .filter(|(fl, &id)| id == o && conic_sets[ci].contains(&fl.0))
                .map(|(fl, _)| fl)
                .collect();
            let tangent: Vec<&&(Subspace, Subspace)> =
                on.iter().filter(|fl| bundle.tangent(f, ci, &fl.0) == fl.1).collect();
            let ok = on.len() == q + 1
                && tangent.len() == 1
                && on.iter().all(|fl| fl.0 == tangent[0].0 || fl.1.contains(f, &tangent[0].0));
            if !ok {
                bad = Some(format!("conic {ci}, flag orbit {o}"));
            }
        }
    }
    checks.push(check("flags", bad, format!("{} flags in {} orbits", flags.len(), orbit_sizes.len())));

    // for C' = C^g meeting C in B, with A^g = B: B on P P^g, and B B^g,
    // B B^{g^-1} tangent to C, C' at B
    let mut bad = None;
    'bun: for ci in 0..bundle.len() {
        for m in &c1.powers[1..] {
            let img: BTreeSet<Subspace> = conic_sets[ci].iter().map(|p| p.image(f, m)).collect();
            let cj = conic_with(&img).expect("Singer group permutes the bundle");
            let b = conic_sets[ci].intersection(&img).next().expect("common point").clone();
            let minv = m.inverse(f).expect("invertible");
            let a_pt = b.image(f, &minv);
            let mut ok = conic_sets[ci].contains(&a_pt);
            for p in &conic_sets[ci] {
                if *p != a_pt && *p != b {
                    ok &= line_through(f, p, &p.image(f, m)).contains(f, &b);
                }
            }
            ok &= line_through(f, &b, &b.image(f, m)) == bundle.tangent(f, ci, &b);
            ok &= line_through(f, &b, &a_pt) == bundle.tangent(f, cj, &b);
            if !ok {
                bad = Some(format!("conic {ci} and its image {cj}"));
                break 'bun;
            }
        }
    }
    checks.push(check("bun", bad, format!("{} conic/element pairs", bundle.len() * (bundle.len() - 1))));

    // no two lines of a regulus of a quadric missing T are in one C-orbit
    let mut bad = None;
    let mut tested = 0;
    for (qi, hq) in h.quadrics.iter().enumerate().filter(|(_, x)| !x.contains_t()) {
        for (side, r) in reguli(f, &hq.quadric)?.iter().enumerate() {
            let ids: BTreeSet<usize> = r.lines().iter().map(|l| orbit_of[l]).collect();
            if ids.len() != r.len() {
                bad = Some(format!("regulus {side} of quadric {qi}"));
            }
            tested += 1;
        }
    }
    checks.push(check("regulus", bad, format!("{tested} reguli")));

    let s1 = construct_s1(&h)?;
    let fams = disjoint_families(&h, &s1)?;

    // every admissible line in exactly one regulus of each orbit R^C
    let mut bad = None;
    for (i, fam) in fams.iter().enumerate() {
        let mut count: BTreeMap<&Subspace, usize> = BTreeMap::new();
        for r in &fam.reguli {
            for l in r.lines() {
                *count.entry(l).or_default() += 1;
            }
        }
        if count.len() != admissible.len() || count.values().any(|&v| v != 1) {
            bad = Some(format!("orbit {i}"));
        }
    }
    checks.push(check("orbits", bad, format!("{} regulus orbits", fams.len())));

    // no two reguli of an orbit lie in a common W(3, q)
    let mut bad = None;
    let mut fits = 0;
    for (i, fam) in fams.iter().enumerate() {
        let pairs: Vec<(usize, usize)> = if q <= 3 {
            (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect()
        } else {
            (1..n).map(|y| (0, y)).collect()
        };
        for (x, y) in pairs {
            let mut lines = fam.reguli[x].lines().to_vec();
            lines.extend_from_slice(fam.reguli[y].lines());
            fits += 1;
            if symplectic_fit(f, &lines).is_some() {
                bad = Some(format!("orbit {i}, reguli {x} and {y}"));
            }
        }
    }
    checks.push(check("symplectic", bad, format!("{fits} regulus pairs")));

    Ok(LemmaReport { q: t.q(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(q: u32) -> (QuadricFamilyH, PlaneFamily) {
        let t = Tower::of_order(q).unwrap();
        let h = quadrics_h(&t).unwrap();
        let s1 = construct_s1(&h).unwrap();
        (h, s1)
    }

    #[test]
    fn family_h_counts() {
        for q in [2u32, 3] {
            let (h, _) = setup(q);
            let q3 = (q * q * q) as usize;
            assert_eq!(h.len(), q3 * (q3 - 1) / 2);
            let f = h.field();
            let pi = pi_plane(f);
            for hq in h.quadrics() {
                let on_pi: Vec<Subspace> =
                    hq.quadric.points(f).into_iter().filter(|p| pi.contains(f, p)).collect();
                let lifted: Vec<Subspace> = h
                    .bundle()
                    .points(hq.conic)
                    .iter()
                    .map(|p| Subspace::point(f, &[p.row(0)[0], p.row(0)[1], p.row(0)[2], 0]))
                    .collect();
                let mut lifted = lifted;
                lifted.sort();
                assert_eq!(on_pi, lifted);
            }
        }
        let (h, _) = setup(2);
        assert_eq!(h.len(), 28);
        assert!(h.quadrics().chunks(4).all(|c| c.iter().all(|x| x.conic == c[0].conic)));
    }

    #[test]
    fn s1_planes_miss_gamma_and_meet_k_in_conics() {
        let (h, s1) = setup(2);
        let f = h.field();
        assert_eq!(s1.len(), 56);
        let g = gamma(f);
        let k = klein_quadric(f);
        for p in s1.planes() {
            assert_eq!(p.meet_dim(f, &g), 0);
            assert_eq!(p.points(f).iter().filter(|x| k.contains_point(f, x)).count(), 3);
        }
        s1.verify(f).unwrap();
        let (_, s1) = setup(3);
        assert_eq!(s1.len(), 702);
    }

    #[test]
    fn quadric_lines_are_the_two_reguli() {
        let (h, _) = setup(2);
        let f = h.field();
        for hq in h.quadrics() {
            let [a, b] = reguli(f, &hq.quadric).unwrap();
            let mut all: Vec<Subspace> = a.lines().iter().chain(b.lines()).cloned().collect();
            all.sort();
            assert_eq!(all, hq.quadric.lines(f));
        }
    }

    #[test]
    fn extended_family_sizes() {
        let (h, s1) = setup(2);
        let f = h.field();
        let s2 = extend_family(f, &s1, Mode::C1, Tiebreak::Lex).unwrap();
        let s3 = extend_family(f, &s1, Mode::C2, Tiebreak::Lex).unwrap();
        let s = extend_family(f, &s1, Mode::C3, Tiebreak::Lex).unwrap();
        assert_eq!((s2.len(), s3.len(), s.len()), (64, 70, 77));
        let g = gamma(f);
        assert!(s2.planes().all(|p| p.meet_dim(f, &g) == 0));
        assert_eq!(s3.planes().filter(|p| p.meet_dim(f, &g) == 1).count(), 8 + 4 + 2);
        let rep = min_distance(f, &s.to_code().unwrap(), Strategy::Pairwise).unwrap();
        assert_eq!(rep.min_distance, 4);
    }

    #[test]
    fn gamma_line_planes_pairwise_meet_in_a_point() {
        for q in [2u32, 3] {
            let (h, s1) = setup(q);
            let f = h.field();
            for tb in [Tiebreak::Lex, Tiebreak::Seeded(5)] {
                let s = extend_family(f, &s1, Mode::C3, tb).unwrap();
                let tau: Vec<&Subspace> = s
                    .members()
                    .iter()
                    .filter(|m| matches!(m.1, Source::GammaLine { .. }))
                    .map(|m| &m.0)
                    .collect();
                assert_eq!(tau.len() as u32, q * q + q + 1);
                for (i, a) in tau.iter().enumerate() {
                    for b in &tau[i + 1..] {
                        assert_eq!(a.meet_dim(f, b), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn s_meets_klein_planes_in_at_most_a_point() {
        let (h, s1) = setup(2);
        let f = h.field();
        let s = extend_family(f, &s1, Mode::C3, Tiebreak::Lex).unwrap();
        let model = crate::geometry::KleinModel::new(f);
        for (p, src) in s.members() {
            if matches!(src, Source::Regulus { .. }) {
                for kp in model.greek().iter().chain(model.latin()) {
                    assert!(p.meet_dim(f, kp) <= 1);
                }
            }
        }
    }

    #[test]
    fn disjoint_families_at_q2() {
        let (h, s1) = setup(2);
        let f = h.field();
        let fams = disjoint_families(&h, &s1).unwrap();
        assert_eq!(fams.len(), 2);
        let g6 = compound2(f, &h.c_generator());
        for fam in &fams {
            assert_eq!(fam.planes.len(), 7);
            for p in &fam.planes {
                assert!(s1.contains(p));
                assert!(fam.planes.binary_search(&p.image(f, &g6)).is_ok());
            }
            let code = Code::new(fam.planes.clone()).unwrap();
            assert_eq!(min_distance(f, &code, Strategy::Pairwise).unwrap().min_distance, 6);
            for (r, p) in fam.reguli.iter().zip(fam.reguli.iter().map(|r| regulus_plane(f, r))) {
                assert_eq!(&plane_regulus(f, &p), r);
            }
        }
    }

    #[test]
    fn lemma_suite_at_q2() {
        let t = Tower::of_order(2).unwrap();
        let rep = lemma_suite(&t).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_text());
        assert_eq!(rep.checks.len(), 8);
        assert!(rep.to_text().ends_with("8/8 pass\n"));
        assert!(rep.checks[0].detail.starts_with("21 admissible lines"));
    }

    #[test]
    fn q3_sizes_families_and_lemmas() {
        let t = Tower::of_order(3).unwrap();
        let (h, s1) = setup(3);
        let f = h.field();
        let sizes: Vec<usize> = [Mode::C1, Mode::C2, Mode::C3]
            .iter()
            .map(|&m| extend_family(f, &s1, m, Tiebreak::Lex).unwrap().len())
            .collect();
        assert_eq!(sizes, [702 + 27, 702 + 39, 754]);
        let fams = disjoint_families(&h, &s1).unwrap();
        assert_eq!(fams.len(), 15);
        assert!(fams.iter().all(|x| x.planes.len() == 26));
        let rep = lemma_suite(&t).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_text());
    }
}
