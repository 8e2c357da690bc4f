//! Two orbit codes of (q^3-1)(q^2+q+1) planes of PG(5, q): one from the
//! tangent planes of a Veronese surface (q odd), one from a net of Klein
//! quadrics. Also the mixed partition of PG(5, q) and code fingerprints.
//!
//! The Veronese side works in the pair model: a point of PG(5, q) is
//! `(a, b)` in GF(q^3)^2 up to GF(q)-scalars, written out as the coordinates
//! of `a` followed by those of `b`. The Klein side uses `(X, Y)` with
//! `pi1 = {X = 0}` and `pi2 = {Y = 0}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::algebra::{all_subspaces, Elem, Field, Matrix, Subspace, Tower};
use crate::cdc6::{LemmaCheck, LemmaReport};
use crate::error::{Error, Result};
use crate::geometry::{plane_classes, Quadric};
use crate::groups::{build_group, pair_map, singer_matrix, GroupName};
use crate::verify::{min_distance, orbit_check, Code, OrbitReport, Strategy, VerificationReport};

/// A point of PG(5, q) in the pair model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigmaPoint {
    a: Elem,
    b: Elem,
}

pub fn sigma_vector(t: &Tower, a: Elem, b: Elem) -> [Elem; 6] {
    let (x, y) = (t.to_coords(a), t.to_coords(b));
    [x[0], x[1], x[2], y[0], y[1], y[2]]
}

impl SigmaPoint {
    /// The point `<(a, b)>`, represented by its normalised vector.
    pub fn new(t: &Tower, a: Elem, b: Elem) -> Option<Self> {
        if a == 0 && b == 0 {
            return None;
        }
        Some(Self::from_subspace(t, &Subspace::point(t.base(), &sigma_vector(t, a, b))))
    }

    pub fn from_subspace(t: &Tower, p: &Subspace) -> Self {
        assert!(p.ambient() == 6 && p.dim() == 1);
        let v = p.row(0);
        SigmaPoint { a: t.from_coords([v[0], v[1], v[2]]), b: t.from_coords([v[3], v[4], v[5]]) }
    }

    pub fn a(&self) -> Elem {
        self.a
    }

    pub fn b(&self) -> Elem {
        self.b
    }

    pub fn to_subspace(&self, t: &Tower) -> Subspace {
        Subspace::point(t.base(), &sigma_vector(t, self.a, self.b))
    }
}

/// The plane spanned by the images of `1, w, w^2` under a GF(q)-linear map
/// `GF(q^3) -> GF(q^3)^2`.
fn plane_of(t: &Tower, map: impl Fn(Elem) -> (Elem, Elem)) -> Subspace {
    let e = t.ext();
    let w = e.generator();
    let rows: Vec<[Elem; 6]> = [1, w, e.mul(w, w)]
        .iter()
        .map(|&x| {
            let (a, b) = map(x);
            sigma_vector(t, a, b)
        })
        .collect();
    Subspace::from_vectors(t.base(), 6, &rows)
}

fn require_odd(t: &Tower) -> Result<()> {
    if t.base().characteristic() == 2 {
        Err(Error::EvenQ(t.q()))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VeroneseData {
    pub pi1: Subspace,
    pub pi2: Subspace,
    /// `(w, sorted points of V_w)` for every nonzero `w`, by `w`.
    pub surfaces: Vec<(Elem, Vec<Subspace>)>,
    /// The base plane `{(a, (a + a^q)/2)}`.
    pub base: Subspace,
    /// `(1, 1)`.
    pub u: Subspace,
}

impl VeroneseData {
    /// Points of `V = V_1`.
    pub fn v(&self) -> &[Subspace] {
        &self.surfaces.iter().find(|s| s.0 == 1).expect("V_1").1
    }
}

pub fn veronese_surface(t: &Tower, w: Elem) -> Vec<Subspace> {
    let e = t.ext();
    let q = t.q() as u64;
    let pts: BTreeSet<Subspace> = e
        .elements()
        .filter(|&x| x != 0)
        .map(|x| {
            let b = e.mul(w, e.pow(x, q + 1));
            Subspace::point(t.base(), &sigma_vector(t, e.mul(x, x), b))
        })
        .collect();
    pts.into_iter().collect()
}

pub fn mixed_partition(t: &Tower) -> Result<VeroneseData> {
    require_odd(t)?;
    let f = t.base();
    let e = t.ext();
    let q = t.q() as usize;
    let half = e.inv(2)?;
    let frob = |x| t.frobenius(x, 1);
    let pi1 = plane_of(t, |a| (a, 0));
    let pi2 = plane_of(t, |b| (0, b));
    let base = plane_of(t, |a| (a, e.mul(half, e.add(a, frob(a)))));
    let u = Subspace::point(f, &sigma_vector(t, 1, 1));
    let surfaces: Vec<(Elem, Vec<Subspace>)> =
        e.elements().filter(|&w| w != 0).map(|w| (w, veronese_surface(t, w))).collect();

    let mut cover: BTreeMap<Subspace, usize> = BTreeMap::new();
    for p in pi1.points(f).into_iter().chain(pi2.points(f)) {
        *cover.entry(p).or_default() += 1;
    }
    for (w, s) in &surfaces {
        if s.len() != q * q + q + 1 {
            return Err(Error::Construction(format!("V_{w} has {} points", s.len())));
        }
        for p in s {
            *cover.entry(p.clone()).or_default() += 1;
        }
    }
    let total = (q.pow(6) - 1) / (q - 1);
    if let Some((p, n)) = cover.iter().find(|(_, &n)| n != 1) {
        return Err(Error::Construction(format!("point {p:?} covered {n} times")));
    }
    if cover.len() != total {
        return Err(Error::Construction(format!("{} of {total} points covered", cover.len())));
    }
    Ok(VeroneseData { pi1, pi2, surfaces, base, u })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    pub q: u32,
    pub points: usize,
    pub plane_points: [usize; 2],
    pub surfaces: usize,
    pub surface_points: usize,
    pub t_transitive: bool,
    pub s_regular: bool,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.t_transitive && self.s_regular
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "q={}", self.q);
        let _ = writeln!(s, "points={}", self.points);
        let _ = writeln!(s, "pi1={} pi2={}", self.plane_points[0], self.plane_points[1]);
        let _ = writeln!(s, "surfaces={} x {}", self.surfaces, self.surface_points);
        let _ = writeln!(s, "covered_once=true");
        let _ = writeln!(s, "t_transitive={}", self.t_transitive);
        let _ = writeln!(s, "s_regular={}", self.s_regular);
        s
    }
}

pub fn partition_report(t: &Tower) -> Result<PartitionReport> {
    let data = mixed_partition(t)?;
    let f = t.base();
    let e = t.ext();
    let q = t.q() as u64;
    let w = e.generator();
    let index: BTreeMap<&[Subspace], Elem> =
        data.surfaces.iter().map(|(w, s)| (s.as_slice(), *w)).collect();

    // h_w moves V_1 through every surface
    let h = pair_map(t, 1, w);
    let mut seen = BTreeSet::new();
    let mut cur = data.v().to_vec();
    for _ in 0..data.surfaces.len() {
        seen.insert(index.get(cur.as_slice()).copied());
        let mut next: Vec<Subspace> = cur.iter().map(|p| p.image(f, &h)).collect();
        next.sort();
        cur = next;
    }
    let t_transitive = seen.len() == data.surfaces.len() && !seen.contains(&None);

    let g = pair_map(t, e.mul(w, w), e.pow(w, q + 1));
    let members: Vec<Vec<Subspace>> = std::iter::once(sorted(data.pi1.points(f)))
        .chain(std::iter::once(sorted(data.pi2.points(f))))
        .chain(data.surfaces.iter().map(|s| s.1.clone()))
        .collect();
    let s_regular = members.iter().all(|m| {
        let mut orbit = BTreeSet::new();
        let mut p = m[0].clone();
        for _ in 0..m.len() {
            orbit.insert(p.clone());
            p = p.image(f, &g);
        }
        p == m[0] && orbit.len() == m.len() && orbit.iter().all(|x| m.binary_search(x).is_ok())
    });
    Ok(PartitionReport {
        q: t.q(),
        points: ((q.pow(6) - 1) / (q - 1)) as usize,
        plane_points: [members[0].len(), members[1].len()],
        surfaces: data.surfaces.len(),
        surface_points: data.surfaces[0].1.len(),
        t_transitive,
        s_regular,
    })
}

fn sorted(mut v: Vec<Subspace>) -> Vec<Subspace> {
    v.sort();
    v
}

/// `N(a) - Tr(a b^{2q}) + 2 N(b) = 0`, the secant variety of `V`.
pub fn secant_membership(t: &Tower, p: &SigmaPoint) -> bool {
    let f = t.base();
    let e = t.ext();
    let b2q = t.frobenius(e.mul(p.b, p.b), 1);
    let val = f.add(f.sub(t.norm(p.a), t.trace(e.mul(p.a, b2q))), f.mul(f.from_int(2), t.norm(p.b)));
    val == 0
}

#[derive(Clone, Debug)]
pub struct VeroneseCode {
    pub data: VeroneseData,
    /// `T = pi^S`, in the order of the powers of the generator of `S`.
    pub tangent_planes: Vec<Subspace>,
    pub code: Code,
    /// `(k, j)` with codeword `i` equal to the image of `pi` under
    /// `g_{w^k} h_{w^j}`; indices into the sorted code.
    pub labels: Vec<(u64, u64)>,
    pub report: VerificationReport,
}

pub fn veronese_code(t: &Tower) -> Result<VeroneseCode> {
    let data = mixed_partition(t)?;
    let f = t.base();
    let e = t.ext();
    let q = t.q() as u64;
    let w = e.generator();
    let s_order = q * q + q + 1;
    let t_order = q * q * q - 1;
    let mut labelled: Vec<(Subspace, (u64, u64))> = (0..s_order)
        .into_par_iter()
        .flat_map_iter(|k| {
            let data = &data;
            (0..t_order).map(move |j| {
                let eta = e.pow(w, k);
                let m = pair_map(t, e.mul(eta, eta), e.mul(e.pow(eta, q + 1), e.pow(w, j)));
                (data.base.image(f, &m), (k, j))
            })
        })
        .collect();
    labelled.sort();
    let tangent_planes = labelled_tangent(&labelled, s_order);
    let (words, labels): (Vec<Subspace>, Vec<(u64, u64)>) = labelled.into_iter().unzip();
    let code = Code::new(words)?;
    let report = min_distance(f, &code, Strategy::LineHash)?;
    if report.min_distance < 4 {
        let (i, j) = report.witness.expect("witness");
        return Err(Error::Construction(format!(
            "Veronese codewords {:?} and {:?} share a line",
            code.words()[i],
            code.words()[j]
        )));
    }
    Ok(VeroneseCode { data, tangent_planes, code, labels, report })
}

fn labelled_tangent(labelled: &[(Subspace, (u64, u64))], s_order: u64) -> Vec<Subspace> {
    let mut by_k: Vec<Option<Subspace>> = vec![None; s_order as usize];
    for (p, (k, j)) in labelled {
        if *j == 0 {
            by_k[*k as usize] = Some(p.clone());
        }
    }
    by_k.into_iter().map(|p| p.expect("every power")).collect()
}

/// `|pi ∩ pi^{g_eta h_w}| = 1` iff `N(w eta^{q+1} - eta^2) = N(eta^{2q} - w eta^{q+1})`.
pub fn norm_predicate(t: &Tower, eta: Elem, w: Elem) -> bool {
    let e = t.ext();
    let q = t.q() as u64;
    let weq = e.mul(w, e.pow(eta, q + 1));
    let lhs = t.norm(e.sub(weq, e.mul(eta, eta)));
    let rhs = t.norm(e.sub(e.pow(eta, 2 * q), weq));
    lhs == rhs
}

fn lemma(name: &'static str, bad: Option<String>, detail: String) -> LemmaCheck {
    match bad {
        None => LemmaCheck { name, passed: true, detail },
        Some(d) => LemmaCheck { name, passed: false, detail: d },
    }
}

pub fn veronese_checks(t: &Tower, vc: &VeroneseCode) -> Result<LemmaReport> {
    let f = t.base();
    let e = t.ext();
    let q = t.q() as u64;
    let w = e.generator();
    let data = &vc.data;
    let tp = &vc.tangent_planes;
    let v: BTreeSet<&Subspace> = data.v().iter().collect();
    let mut checks = Vec::new();

    let base_v: Vec<Subspace> = data.base.points(f).into_iter().filter(|p| v.contains(p)).collect();
    checks.push(lemma(
        "base point",
        (base_v != [data.u.clone()]).then(|| format!("pi meets V in {base_v:?}")),
        "pi meets V in U".into(),
    ));

    let bad = tp.iter().position(|p| p.points(f).iter().filter(|x| v.contains(x)).count() != 1);
    checks.push(lemma(
        "tangent meets V once",
        bad.map(|i| format!("tangent plane {i}")),
        format!("{} tangent planes", tp.len()),
    ));

    let bad = tp.iter().position(|p| {
        p.points(f).iter().any(|x| !secant_membership(t, &SigmaPoint::from_subspace(t, x)))
    });
    checks.push(lemma("tangent in M", bad.map(|i| format!("tangent plane {i}")), "all points on M".into()));

    let mut bad = None;
    for i in 0..tp.len() {
        for j in i + 1..tp.len() {
            if tp[i].meet_dim(f, &tp[j]) != 1 {
                bad = Some(format!("tangent planes {i}, {j}"));
            }
        }
    }
    checks.push(lemma("tangent pairs", bad, "pairwise one point".into()));

    let mut bad = None;
    for i in 0..tp.len() {
        for j in i + 1..tp.len() {
            let m = tp[i].meet(f, &tp[j]);
            for (k, x) in tp.iter().enumerate().skip(j + 1) {
                if m.meet_dim(f, x) != 0 {
                    bad = Some(format!("tangent planes {i}, {j}, {k}"));
                }
            }
        }
    }
    checks.push(lemma("tangent triples", bad, "no common point of three".into()));

    // the common point of pi and pi^{g_eta} is the point of pi at a = eta
    let half = e.inv(2)?;
    let mut bad = None;
    for k in 1..q * q + q + 1 {
        let eta = e.pow(w, k);
        let p = Subspace::point(f, &sigma_vector(t, eta, e.mul(half, e.add(eta, t.frobenius(eta, 1)))));
        if data.base.meet(f, &tp[k as usize]) != p {
            bad = Some(format!("eta = w^{k}"));
        }
    }
    checks.push(lemma("common point", bad, "pi ∩ pi^g_eta at a = eta".into()));

    let n = vc.code.len();
    let words = vc.code.words();
    let mismatches: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (k1, j1) = vc.labels[i];
            (i + 1..n).filter_map(move |j| {
                let (k2, j2) = vc.labels[j];
                let eta = e.pow(w, (k2 + q * q * q - 1 - k1) % (q * q * q - 1));
                let ww = e.pow(w, (j2 + q * q * q - 1 - j1) % (q * q * q - 1));
                let meet = words[i].meet_dim(f, &words[j]);
                (norm_predicate(t, eta, ww) != (meet == 1) || meet > 1).then_some((i, j))
            })
        })
        .collect();
    checks.push(lemma(
        "norm predicate",
        mismatches.first().map(|p| format!("{} disagreements, first {p:?}", mismatches.len())),
        format!("{} pairs agree", n * (n - 1) / 2),
    ));

    let bad = words.iter().position(|x| x.meet_dim(f, &data.pi1) != 0 || x.meet_dim(f, &data.pi2) != 0);
    checks.push(lemma("misses pi1, pi2", bad.map(|i| format!("codeword {i}")), format!("{n} codewords")));

    let orbit = orbit_check(f, &vc.code, &build_group(t, GroupName::VeroneseG)?)?;
    checks.push(lemma("single orbit", (!orbit.passed()).then(|| format!("{orbit:?}")), "veronese_G".into()));

    let expected = ((q * q * q - 1) * (q * q + q + 1)) as usize;
    checks.push(lemma(
        "size",
        (n != expected).then(|| format!("{n} codewords")),
        format!("{n} codewords"),
    ));
    Ok(LemmaReport { q: t.q(), checks })
}

#[derive(Clone, Debug)]
pub struct NetData {
    pub c: Matrix,
    /// `Q_i: X C^i Y^T`.
    pub quadrics: Vec<Quadric>,
    pub pi1: Subspace,
    pub pi2: Subspace,
    /// Lines of `Q_0` meeting both planes, sorted.
    pub z: Vec<Subspace>,
    /// The orbits `L_i` of H on `z`.
    pub orbits: Vec<Vec<Subspace>>,
}

fn net_quadric(f: &Field, c: &Matrix) -> Quadric {
    let mut terms = Vec::new();
    for j in 0..3 {
        for k in 0..3 {
            terms.push((j, 3 + k, c.get(j, k)));
        }
    }
    Quadric::from_terms(f, 6, &terms)
}

pub fn net_planes(f: &Field) -> (Subspace, Subspace) {
    let unit = |i: usize| {
        let mut v = [0; 6];
        v[i] = 1;
        v
    };
    (
        Subspace::from_vectors(f, 6, &[unit(3), unit(4), unit(5)]),
        Subspace::from_vectors(f, 6, &[unit(0), unit(1), unit(2)]),
    )
}

pub fn klein_net(t: &Tower) -> Result<NetData> {
    let f = t.base();
    let q = t.q() as u64;
    let c = singer_matrix(t);
    let quadrics: Vec<Quadric> = (0..q * q + q + 1).map(|i| net_quadric(f, &c.pow(f, i))).collect();
    let (pi1, pi2) = net_planes(f);
    let q0 = &quadrics[0];
    let mut z = BTreeSet::new();
    for p in pi2.points(f) {
        for r in pi1.points(f) {
            let l = p.join(f, &r);
            if q0.is_totally_singular(f, &l) {
                z.insert(l);
            }
        }
    }
    let z: Vec<Subspace> = z.into_iter().collect();
    let orbits = build_group(t, GroupName::KleinH)?.orbits(f, &z)?;
    Ok(NetData { c, quadrics, pi1, pi2, z, orbits })
}

fn covered(f: &Field, lines: &[Subspace]) -> BTreeSet<Subspace> {
    lines.iter().flat_map(|l| l.points(f)).collect()
}

pub fn net_checks(t: &Tower, net: &NetData) -> Result<LemmaReport> {
    let f = t.base();
    let q = t.q() as usize;
    let n = q * q + q + 1;
    let mut checks = Vec::new();

    let hyp_points = (q * q + 1) * n;
    let bad = net.quadrics.iter().position(|x| {
        !x.is_nondegenerate(f)
            || x.points(f).len() != hyp_points
            || !x.is_totally_singular(f, &net.pi1)
            || !x.is_totally_singular(f, &net.pi2)
    });
    checks.push(lemma(
        "hyperbolic",
        bad.map(|i| format!("Q_{i}")),
        format!("{} quadrics on {hyp_points} points through pi1, pi2", net.quadrics.len()),
    ));

    let h = build_group(t, GroupName::KleinH)?;
    let bad = net.quadrics.iter().position(|x| {
        h.generators.iter().any(|g| x.image(f, g.matrix()).normalized(f) != x.normalized(f))
    });
    checks.push(lemma("H-invariant", bad.map(|i| format!("Q_{i}")), "every Q_i".into()));

    let (p1, p2) = (sorted(net.pi1.points(f)), sorted(net.pi2.points(f)));
    let mut bad = None;
    if net.z.len() != (q + 1) * n || net.orbits.len() != q + 1 {
        bad = Some(format!("{} lines in {} orbits", net.z.len(), net.orbits.len()));
    }
    for (i, o) in net.orbits.iter().enumerate() {
        let pts = covered(f, o);
        let ok = o.len() == n
            && pts.len() == n * (q + 1)
            && p1.iter().chain(&p2).all(|p| o.iter().filter(|l| l.contains(f, p)).count() == 1);
        if !ok {
            bad = Some(format!("L_{i}"));
        }
    }
    checks.push(lemma("line orbits", bad, format!("{} lines in {} orbits of {n}", net.z.len(), q + 1)));

    let rows: Vec<Elem> = net
        .quadrics
        .iter()
        .flat_map(|x| (0..3).flat_map(move |j| (0..3).map(move |k| x.form().get(j, 3 + k))))
        .collect();
    let dim = Subspace::span(f, 9, &rows).dim();
    checks.push(lemma("linear system", (dim != 3).then(|| format!("span of dimension {dim}")), "dimension 3".into()));

    let members: BTreeSet<Quadric> = net.quadrics.iter().map(|x| x.normalized(f)).collect();
    let mut bad = None;
    for (i, a) in net.quadrics.iter().enumerate() {
        for (j, b) in net.quadrics.iter().enumerate().skip(i + 1) {
            for s in f.elements() {
                if !members.contains(&a.add(f, &b.scaled(f, s)).normalized(f)) {
                    bad = Some(format!("Q_{i} + {s} Q_{j}"));
                }
            }
        }
    }
    checks.push(lemma("pencil closure", bad, format!("{} pairs", n * (n - 1) / 2)));

    // Q_i ∩ Q_j is the image of Q_0 ∩ Q_{j-i} under X -> X C^{-i}, so it is
    // a transported L_k; it is an L_k itself only when Q_0 is in the pencil
    let point_sets: Vec<BTreeSet<Subspace>> =
        net.quadrics.iter().map(|x| x.points(f).into_iter().collect()).collect();
    let orbit_points: Vec<BTreeSet<Subspace>> = net.orbits.iter().map(|o| covered(f, o)).collect();
    let cinv = net.c.inverse(f).expect("Singer cycle");
    let transported: Vec<Vec<BTreeSet<Subspace>>> = (0..n)
        .map(|i| {
            let m = Matrix::block_diag(&[&cinv.pow(f, i as u64), &Matrix::identity(3)]);
            orbit_points.iter().map(|o| o.iter().map(|p| p.image(f, &m)).collect()).collect()
        })
        .collect();
    let mut loci: BTreeSet<BTreeSet<Subspace>> = BTreeSet::new();
    let mut literal = 0;
    let mut bad = None;
    for i in 0..n {
        for j in i + 1..n {
            let meet: BTreeSet<Subspace> = point_sets[i].intersection(&point_sets[j]).cloned().collect();
            if meet.len() != (q + 1) * n || !transported[i].contains(&meet) {
                bad = Some(format!("Q_{i} and Q_{j} meet in {} points", meet.len()));
            }
            literal += orbit_points.contains(&meet) as usize;
            loci.insert(meet);
        }
    }
    checks.push(lemma(
        "pair intersections",
        bad,
        format!("{} pairs, {literal} of them an L_k of Q_0", n * (n - 1) / 2),
    ));

    let lines = all_subspaces(f, 6, 2);
    let loci: Vec<BTreeSet<Subspace>> = loci.into_iter().collect();
    let bad = lines
        .par_iter()
        .filter(|l| l.meet_dim(f, &net.pi1) == 0 && l.meet_dim(f, &net.pi2) == 0)
        .find_any(|l| {
            let pts = l.points(f);
            loci.iter().any(|o| pts.iter().filter(|p| o.contains(p)).count() > 2)
        });
    checks.push(lemma(
        "at most two",
        bad.map(|l| format!("line {l:?}")),
        format!("{} lines of PG(5, {q}) against {} intersections", lines.len(), loci.len()),
    ));
    Ok(LemmaReport { q: t.q(), checks })
}

#[derive(Clone, Debug)]
pub struct NetCode {
    /// `G_0`: Greek planes of `Q_0` other than `pi1`, missing `pi2`.
    pub greek0: Vec<Subspace>,
    pub code: Code,
    pub report: VerificationReport,
}

pub fn klein_net_code(t: &Tower, net: &NetData) -> Result<NetCode> {
    let f = t.base();
    let q = t.q() as usize;
    let (greek, _) = plane_classes(f, &net.quadrics[0], &net.pi1)?;
    let greek0: Vec<Subspace> =
        greek.into_iter().filter(|p| *p != net.pi1 && p.meet_dim(f, &net.pi2) == 0).collect();
    if greek0.len() != q * q * q - 1 {
        return Err(Error::Construction(format!("{} planes in G_0", greek0.len())));
    }
    let cinv = net.c.inverse(f).expect("Singer cycle");
    let words: Vec<Subspace> = (0..net.quadrics.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let m = Matrix::block_diag(&[&cinv.pow(f, i as u64), &Matrix::identity(3)]);
            greek0.iter().map(move |p| p.image(f, &m)).collect::<Vec<_>>()
        })
        .collect();
    let code = Code::new(words)?;
    let report = min_distance(f, &code, Strategy::LineHash)?;
    if report.min_distance < 4 {
        let (i, j) = report.witness.expect("witness");
        return Err(Error::Construction(format!(
            "net codewords {:?} and {:?} share a line",
            code.words()[i],
            code.words()[j]
        )));
    }
    Ok(NetCode { greek0, code, report })
}

pub fn net_orbit(t: &Tower, code: &Code) -> Result<OrbitReport> {
    orbit_check(t.base(), code, &build_group(t, GroupName::KleinKH)?)
}

/// How the codewords meet two distinguished planes: `meet dimension ->
/// number of codewords`, for each plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralProfile {
    pub pi1: BTreeMap<usize, usize>,
    pub pi2: BTreeMap<usize, usize>,
}

impl StructuralProfile {
    pub fn new(f: &Field, code: &Code, pi1: &Subspace, pi2: &Subspace) -> Self {
        let hist = |p: &Subspace| {
            let mut h = BTreeMap::new();
            for w in code.words() {
                *h.entry(w.meet_dim(f, p)).or_default() += 1;
            }
            h
        };
        StructuralProfile { pi1: hist(pi1), pi2: hist(pi2) }
    }

    pub fn to_text(&self) -> String {
        format!("pi1={} pi2={}", hist_text(&self.pi1), hist_text(&self.pi2))
    }
}

fn hist_text<K: std::fmt::Display, V: std::fmt::Display>(h: &BTreeMap<K, V>) -> String {
    let parts: Vec<String> = h.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    parts.join(",")
}

/// Invariants of a code under projectivities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    /// Codewords through a point -> number of points.
    pub coverage: BTreeMap<usize, usize>,
    /// Meet dimension -> number of codeword pairs.
    pub pair_meets: BTreeMap<usize, usize>,
    /// Sorted degrees of the graph joining codewords that meet.
    pub degrees: Vec<usize>,
    pub triangles: u64,
}

impl Fingerprint {
    pub fn to_text(&self) -> String {
        let mut degs: BTreeMap<usize, usize> = BTreeMap::new();
        for &d in &self.degrees {
            *degs.entry(d).or_default() += 1;
        }
        let mut s = String::new();
        let _ = writeln!(s, "coverage={}", hist_text(&self.coverage));
        let _ = writeln!(s, "pair_meets={}", hist_text(&self.pair_meets));
        let _ = writeln!(s, "degrees={}", hist_text(&degs));
        let _ = writeln!(s, "triangles={}", self.triangles);
        s
    }
}

pub fn fingerprint(f: &Field, code: &Code) -> Fingerprint {
    let q = f.order() as usize;
    let n = code.ambient();
    let words = code.words();
    let mut through: BTreeMap<Subspace, usize> = BTreeMap::new();
    for w in words {
        for p in w.points(f) {
            *through.entry(p).or_default() += 1;
        }
    }
    let total = (q.pow(n as u32) - 1) / (q - 1);
    let mut coverage = BTreeMap::new();
    if total > through.len() {
        coverage.insert(0, total - through.len());
    }
    for &c in through.values() {
        *coverage.entry(c).or_default() += 1;
    }

    let m = words.len();
    let blocks = m.div_ceil(64);
    let rows: Vec<(Vec<u64>, BTreeMap<usize, usize>)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut adj = vec![0u64; blocks];
            let mut meets = BTreeMap::new();
            for j in 0..m {
                if i == j {
                    continue;
                }
                let d = words[i].meet_dim(f, &words[j]);
                if j > i {
                    *meets.entry(d).or_default() += 1;
                }
                if d > 0 {
                    adj[j / 64] |= 1 << (j % 64);
                }
            }
            (adj, meets)
        })
        .collect();
    let mut pair_meets = BTreeMap::new();
    for (_, h) in &rows {
        for (&d, &c) in h {
            *pair_meets.entry(d).or_default() += c;
        }
    }
    let mut degrees: Vec<usize> =
        rows.iter().map(|(a, _)| a.iter().map(|x| x.count_ones() as usize).sum()).collect();
    degrees.sort_unstable();
    let triangles: u64 = (0..m)
        .into_par_iter()
        .map(|i| {
            let ai = &rows[i].0;
            let mut t = 0u64;
            for j in i + 1..m {
                if ai[j / 64] >> (j % 64) & 1 == 1 {
                    t += ai.iter().zip(&rows[j].0).map(|(x, y)| (x & y).count_ones() as u64).sum::<u64>();
                }
            }
            t
        })
        .sum::<u64>()
        / 3;
    Fingerprint { coverage, pair_meets, degrees, triangles }
}

/// Side-by-side fingerprints of two codes. Different fingerprints prove the
/// codes inequivalent; equal ones prove nothing.
pub fn compare_fingerprints(a: &Fingerprint, b: &Fingerprint) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[a]");
    s.push_str(&a.to_text());
    let _ = writeln!(s, "[b]");
    s.push_str(&b.to_text());
    let verdict = if a == b { "inconclusive (fingerprints equal)" } else { "inequivalent (fingerprints differ)" };
    let _ = writeln!(s, "verdict={verdict}");
    s
}

/// Structural profiles and fingerprints of both orbit codes at odd `q`.
pub fn non_equivalence_report(t: &Tower) -> Result<String> {
    let f = t.base();
    let vc = veronese_code(t)?;
    let net = klein_net(t)?;
    let nc = klein_net_code(t, &net)?;
    let pv = StructuralProfile::new(f, &vc.code, &vc.data.pi1, &vc.data.pi2);
    let pn = StructuralProfile::new(f, &nc.code, &net.pi1, &net.pi2);
    let mut s = String::new();
    let _ = writeln!(s, "q={}", t.q());
    let _ = writeln!(s, "veronese_profile={}", pv.to_text());
    let _ = writeln!(s, "klein_net_profile={}", pn.to_text());
    let _ = writeln!(s, "profiles_differ={}", pv != pn);
    s.push_str(&compare_fingerprints(&fingerprint(f, &vc.code), &fingerprint(f, &nc.code)));
    Ok(s)
}
