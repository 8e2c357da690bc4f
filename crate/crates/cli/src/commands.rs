use std::fmt::Write as _;

use cdc_core::algebra::{Elem, Field, Subspace, Tower};
use cdc_core::bundle::{circumscribed_bundle, conic_coeffs, conic_from_coeffs, validate};
use cdc_core::cdc6::{self, Mode, Tiebreak};
use cdc_core::cdc9::{construct_pg8, expected_pg8_size, LinkageConfig};
use cdc_core::groups::{build_group, singer_matrix, GroupName};
use cdc_core::orbit6::{self, StructuralProfile};
use cdc_core::verify::{bounds, min_distance, orbit_check, Code, Strategy};
use num_bigint::BigUint;

use crate::codefile::{codeword_line, CodeFile, Header};
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    S1,
    S2,
    S3,
    S,
    Pg8,
    Veronese,
    KleinNet,
    Bundle,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::S1 => "s1",
            Family::S2 => "s2",
            Family::S3 => "s3",
            Family::S => "s",
            Family::Pg8 => "pg8",
            Family::Veronese => "veronese",
            Family::KleinNet => "klein-net",
            Family::Bundle => "bundle",
        }
    }
}

/// What a command printed, and whether it passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

const GROUPS: [GroupName; 8] = [
    GroupName::CPg3,
    GroupName::VeroneseS,
    GroupName::VeroneseT,
    GroupName::VeroneseG,
    GroupName::KleinHprime,
    GroupName::KleinH,
    GroupName::KleinK,
    GroupName::KleinKH,
];

/// The tower for `q`, with GF(q^3) given by `poly` (ascending, over GF(p))
/// when supplied.
pub fn tower_for(q: u32, poly: Option<&[Elem]>) -> Result<Tower, CliError> {
    let base = Field::of_order(q)?;
    Ok(match poly {
        Some(p) => Tower::with_ext_poly(base, p)?,
        None => Tower::new(base)?,
    })
}

pub fn parse_poly(s: &str) -> Result<Vec<Elem>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<Elem>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("--poly expects comma-separated coefficients, got {s}")))
}

#[derive(Clone, Debug)]
pub struct ConstructOptions {
    pub family: Family,
    pub q: u32,
    pub poly: Option<Vec<Elem>>,
    pub seed: Option<u64>,
    pub a_prime: usize,
}

pub fn construct(opts: &ConstructOptions) -> Result<CodeFile, CliError> {
    let t = tower_for(opts.q, opts.poly.as_deref())?;
    let f = t.base();
    let tiebreak = opts.seed.map_or(Tiebreak::Lex, Tiebreak::Seeded);
    let mut header = Header::for_tower(&t, opts.family.tag(), 0, 0, 4, 0);
    let code = match opts.family {
        Family::S1 | Family::S2 | Family::S3 | Family::S => {
            let h = cdc6::quadrics_h(&t)?;
            let s1 = cdc6::construct_s1(&h)?;
            let (fam, comment) = match opts.family {
                Family::S1 => {
                    s1.verify(f)?;
                    (s1, "Plucker planes of both reguli of the hyperbolic quadrics on the circumscribed bundle")
                }
                Family::S2 => (cdc6::extend_family(f, &s1, Mode::C1, tiebreak)?, "s1 and the Latin planes missing gamma"),
                Family::S3 => (cdc6::extend_family(f, &s1, Mode::C2, tiebreak)?, "s1 and the Greek planes other than gamma"),
                _ => {
                    header.tiebreak = tiebreak.describe();
                    (
                        cdc6::extend_family(f, &s1, Mode::C3, tiebreak)?,
                        "s3 and one plane through each line of gamma meeting the Klein quadric only there",
                    )
                }
            };
            header.comment = comment.to_string();
            fam.to_code()?
        }
        Family::Pg8 => {
            let cfg = LinkageConfig { a_prime: opts.a_prime, tiebreak_a: tiebreak, tiebreak_d1: tiebreak };
            let pg = construct_pg8(&t, cfg)?;
            header.tiebreak = tiebreak.describe();
            let census: Vec<String> = pg
                .census_summary()
                .iter()
                .map(|(tag, spaces, each)| format!("{spaces}x{each} {}", tag.tag()))
                .collect();
            header.comment = format!(
                "linkage along gamma_ext over the planes of s, a_prime={}, five-spaces {}",
                opts.a_prime,
                census.join(" + ")
            );
            pg.code
        }
        Family::Veronese => {
            let vc = orbit6::veronese_code(&t)?;
            header.group = Some(GroupName::VeroneseG.tag().to_string());
            header.comment = "orbit of the tangent plane at U under S x T, pair model".into();
            vc.code
        }
        Family::KleinNet => {
            let net = orbit6::klein_net(&t)?;
            let nc = orbit6::klein_net_code(&t, &net)?;
            header.group = Some(GroupName::KleinKH.tag().to_string());
            header.comment = "Greek planes of the net quadrics other than pi1 and missing pi2".into();
            nc.code
        }
        Family::Bundle => {
            let b = circumscribed_bundle(&t)?;
            let rep = b.validate(f);
            if !rep.passed() {
                return Err(CliError::Verification(format!("{rep:?}")));
            }
            header.d = 2;
            header.comment = "conic coefficient vectors x0^2 x0x1 x0x2 x1^2 x1x2 x2^2 of the circumscribed bundle".into();
            Code::new(b.conics().iter().map(|c| Subspace::point(f, &conic_coeffs(c))).collect())?
        }
    };
    Ok(CodeFile::new(header, code))
}

fn group_by_tag(tag: &str) -> Option<GroupName> {
    GROUPS.iter().copied().find(|g| g.tag() == tag)
}

pub fn verify(file: &CodeFile, expect: Option<usize>) -> Result<Outcome, CliError> {
    let h = &file.header;
    let t = h.tower()?;
    let f = t.base();
    let strategy = if h.k == 3 { Strategy::LineHash } else { Strategy::Pairwise };
    let rep = min_distance(f, &file.code, strategy)?;
    let expected = expect.unwrap_or(h.d);
    let mut passed = rep.min_distance >= expected;
    let mut text = format!("family={}\n", h.family);
    text.push_str(&rep.to_kv());
    let _ = writeln!(text, "expected_min_distance={expected}");
    if let (false, Some((i, j))) = (passed, rep.witness) {
        let _ = writeln!(text, "witness_a={}", codeword_line(&file.code.words()[i]));
        let _ = writeln!(text, "witness_b={}", codeword_line(&file.code.words()[j]));
    }
    if let Some(tag) = &h.group {
        let name = group_by_tag(tag).ok_or_else(|| CliError::Usage(format!("unknown group {tag}")))?;
        let orbit = orbit_check(f, &file.code, &build_group(&t, name)?)?;
        let _ = writeln!(text, "group={} closed={} single_orbit={}", orbit.group, orbit.closed, orbit.single_orbit);
        passed &= orbit.passed();
    }
    if h.family == "bundle" {
        if h.n != 6 || h.k != 1 {
            return Err(CliError::Usage("a bundle file holds points of GF(q)^6".into()));
        }
        let conics: Vec<_> = file.code.words().iter().map(|w| conic_from_coeffs(f, w.row(0))).collect();
        let rep = validate(f, &singer_matrix(&t), &conics);
        for (name, ok, witness) in &rep.checks {
            let _ = writeln!(text, "bundle {name}={ok}{}", if witness.is_empty() { String::new() } else { format!(" ({witness})") });
        }
        passed &= rep.passed();
    }
    let _ = writeln!(text, "result={}", if passed { "pass" } else { "fail" });
    Ok(Outcome { text, passed })
}

/// The size this crate constructs for `(n, d, k)`, when it has one.
pub fn constructed_size(n: u32, d: u32, k: u32, q: u32) -> Option<u64> {
    let q = q as u64;
    match (n, d, k) {
        (9, 4, 3) => Some(expected_pg8_size(q)),
        (6, 4, 3) => Some(q.pow(6) + 2 * q * q + 2 * q + 1),
        _ => None,
    }
}

pub fn report_bounds(
    n: u32,
    d: u32,
    k: u32,
    q: u32,
    known_a: Option<u64>,
    file: Option<&CodeFile>,
) -> Result<Outcome, CliError> {
    let mut rep = bounds(n, d, k, q, known_a)?;
    rep.constructed = match file {
        Some(cf) => {
            let h = &cf.header;
            if (h.n, h.k, h.q) != (n as usize, k as usize, q) {
                return Err(CliError::Usage(format!(
                    "file holds a code with n={} k={} q={}",
                    h.n, h.k, h.q
                )));
            }
            Some(BigUint::from(cf.code.len()))
        }
        None => constructed_size(n, d, k, q).map(BigUint::from),
    };
    let passed = rep.consistent();
    let mut text = rep.to_line();
    text.push('\n');
    if !passed {
        text.push_str("inconsistent: constructed size outside [skk, johnson]\n");
    }
    Ok(Outcome { text, passed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum LemmaSet {
    Cdc6,
    Veronese,
    KleinNet,
}

pub fn report_lemmas(t: &Tower, set: LemmaSet) -> Result<Outcome, CliError> {
    let rep = match set {
        LemmaSet::Cdc6 => cdc6::lemma_suite(t)?,
        LemmaSet::Veronese => orbit6::veronese_checks(t, &orbit6::veronese_code(t)?)?,
        LemmaSet::KleinNet => orbit6::net_checks(t, &orbit6::klein_net(t)?)?,
    };
    Ok(Outcome { text: rep.to_text(), passed: rep.all_passed() })
}

pub fn report_partition(t: &Tower) -> Result<Outcome, CliError> {
    let rep = orbit6::partition_report(t)?;
    Ok(Outcome { text: rep.to_text(), passed: rep.passed() })
}

fn profile(cf: &CodeFile) -> Result<Option<StructuralProfile>, CliError> {
    let t = cf.header.tower()?;
    let f = t.base();
    let planes = match cf.header.family.as_str() {
        "veronese" => {
            let d = orbit6::mixed_partition(&t)?;
            Some((d.pi1, d.pi2))
        }
        "klein-net" => Some(orbit6::net_planes(f)),
        _ => None,
    };
    Ok(planes.map(|(a, b)| StructuralProfile::new(f, &cf.code, &a, &b)))
}

/// Fingerprints of two code files; structural profiles are added for
/// families with distinguished planes.
pub fn report_fingerprint(a: &CodeFile, b: &CodeFile) -> Result<Outcome, CliError> {
    let fa = orbit6::fingerprint(&a.header.tower()?.base().clone(), &a.code);
    let fb = orbit6::fingerprint(&b.header.tower()?.base().clone(), &b.code);
    let mut text = String::new();
    for (tag, cf) in [("a", a), ("b", b)] {
        if let Some(p) = profile(cf)? {
            let _ = writeln!(text, "profile_{tag}={} ({})", p.to_text(), cf.header.family);
        }
    }
    text.push_str(&orbit6::compare_fingerprints(&fa, &fb));
    Ok(Outcome { text, passed: true })
}

pub fn report_non_equivalence(t: &Tower) -> Result<Outcome, CliError> {
    Ok(Outcome { text: orbit6::non_equivalence_report(t)?, passed: true })
}
