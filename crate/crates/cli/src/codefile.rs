//! The on-disk code format.
//!
//! ```text
//! # format=cdc-code-1
//! # family=s
//! # q=2
//! # p=2
//! # e=1
//! # poly=1,1
//! # ext_poly=1,1,0,1
//! # n=6
//! # k=3
//! # d=4
//! # count=77
//! # tiebreak=lex
//! # comment=...
//! 0 0 0 1 0 0 ...
//! ```
//!
//! Each body line is the reduced row echelon basis of one codeword, row-major,
//! with field elements written as `Σ c_i p^i`. Body lines are sorted bytewise,
//! every line ends in LF, and nothing else is allowed: reading and writing a
//! file gives back the same bytes.

use std::fmt::Write as _;

use cdc_core::algebra::{Elem, Field, Subspace, Tower};
use cdc_core::verify::Code;

use crate::error::CliError;

pub const FORMAT_TAG: &str = "cdc-code-1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub family: String,
    pub q: u32,
    pub p: u32,
    pub e: u32,
    /// Primitive polynomial of GF(q) over GF(p), ascending.
    pub poly: Vec<Elem>,
    /// Primitive polynomial of GF(q^3) over GF(p), ascending.
    pub ext_poly: Vec<Elem>,
    pub n: usize,
    pub k: usize,
    /// Claimed minimum subspace distance.
    pub d: usize,
    pub count: usize,
    pub tiebreak: String,
    /// Group under which the code is a single orbit, if any.
    pub group: Option<String>,
    pub comment: String,
}

impl Header {
    pub fn for_tower(t: &Tower, family: &str, n: usize, k: usize, d: usize, count: usize) -> Self {
        let b = t.base();
        Header {
            family: family.to_string(),
            q: t.q(),
            p: b.characteristic(),
            e: b.degree(),
            poly: b.poly().to_vec(),
            ext_poly: t.ext().poly().to_vec(),
            n,
            k,
            d,
            count,
            tiebreak: "none".to_string(),
            group: None,
            comment: String::new(),
        }
    }

    pub fn tower(&self) -> Result<Tower, CliError> {
        let base = Field::with_poly(self.p, self.e, &self.poly)?;
        if base.order() != self.q {
            return Err(CliError::Usage(format!("q={} is not {}^{}", self.q, self.p, self.e)));
        }
        Ok(Tower::with_ext_poly(base, &self.ext_poly)?)
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("format", FORMAT_TAG.to_string()),
            ("family", self.family.clone()),
            ("q", self.q.to_string()),
            ("p", self.p.to_string()),
            ("e", self.e.to_string()),
            ("poly", join(&self.poly, ",")),
            ("ext_poly", join(&self.ext_poly, ",")),
            ("n", self.n.to_string()),
            ("k", self.k.to_string()),
            ("d", self.d.to_string()),
            ("count", self.count.to_string()),
            ("tiebreak", self.tiebreak.clone()),
        ];
        if let Some(g) = &self.group {
            out.push(("group", g.clone()));
        }
        out.push(("comment", self.comment.clone()));
        out
    }
}

fn join(v: &[Elem], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

#[derive(Clone, Debug)]
pub struct CodeFile {
    pub header: Header,
    pub code: Code,
}

pub fn codeword_line(s: &Subspace) -> String {
    join(s.data(), " ")
}

impl CodeFile {
    /// Wraps a code, filling in `n`, `k` and `count` from it.
    pub fn new(mut header: Header, code: Code) -> Self {
        header.n = code.ambient();
        header.k = code.dim();
        header.count = code.len();
        CodeFile { header, code }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.header.fields() {
            let _ = writeln!(s, "# {k}={v}");
        }
        let mut lines: Vec<String> = self.code.words().iter().map(codeword_line).collect();
        lines.sort_unstable();
        for l in lines {
            s.push_str(&l);
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let err = |line: usize, msg: String| CliError::Format { line, msg };
        if text.is_empty() {
            return Err(err(1, "empty file".into()));
        }
        if !text.ends_with('\n') {
            return Err(err(text.lines().count(), "missing final newline".into()));
        }
        let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();
        for (i, l) in lines.iter().enumerate() {
            if l.ends_with(|c: char| c.is_whitespace()) || l.starts_with(' ') {
                return Err(err(i + 1, "stray whitespace".into()));
            }
        }

        let mut kv: Vec<(usize, &str, &str)> = Vec::new();
        let mut body_start = lines.len();
        for (i, l) in lines.iter().enumerate() {
            match l.strip_prefix("# ") {
                Some(rest) => {
                    let (k, v) = rest
                        .split_once('=')
                        .ok_or_else(|| err(i + 1, format!("header line without '=': {l}")))?;
                    kv.push((i + 1, k, v));
                }
                None => {
                    body_start = i;
                    break;
                }
            }
        }
        let get = |key: &str| -> Result<(usize, &str), CliError> {
            let hits: Vec<&(usize, &str, &str)> = kv.iter().filter(|x| x.1 == key).collect();
            match hits.as_slice() {
                [one] => Ok((one.0, one.2)),
                [] => Err(err(body_start + 1, format!("missing header key {key}"))),
                [_, two, ..] => Err(err(two.0, format!("repeated header key {key}"))),
            }
        };
        let num = |key: &str| -> Result<u64, CliError> {
            let (line, v) = get(key)?;
            parse_uint(v).ok_or_else(|| err(line, format!("{key} is not a number: {v}")))
        };
        let list = |key: &str| -> Result<Vec<Elem>, CliError> {
            let (line, v) = get(key)?;
            v.split(',')
                .map(|x| parse_uint(x).and_then(|y| Elem::try_from(y).ok()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| err(line, format!("{key} is not a coefficient list: {v}")))
        };
        for &(line, k, _) in &kv {
            if !["format", "family", "q", "p", "e", "poly", "ext_poly", "n", "k", "d", "count", "tiebreak", "group", "comment"]
                .contains(&k)
            {
                return Err(err(line, format!("unknown header key {k}")));
            }
        }
        let (fline, format) = get("format")?;
        if format != FORMAT_TAG {
            return Err(err(fline, format!("unsupported format {format}")));
        }
        let header = Header {
            family: get("family")?.1.to_string(),
            q: num("q")? as u32,
            p: num("p")? as u32,
            e: num("e")? as u32,
            poly: list("poly")?,
            ext_poly: list("ext_poly")?,
            n: num("n")? as usize,
            k: num("k")? as usize,
            d: num("d")? as usize,
            count: num("count")? as usize,
            tiebreak: get("tiebreak")?.1.to_string(),
            group: kv.iter().any(|x| x.1 == "group").then(|| get("group").map(|g| g.1.to_string())).transpose()?,
            comment: get("comment")?.1.to_string(),
        };
        let tower = header.tower().map_err(|e| err(fline, format!("bad field description: {e}")))?;
        let f = tower.base();
        let (n, k) = (header.n, header.k);
        if n == 0 || n > 64 || k == 0 || k > n {
            return Err(err(get("n")?.0, format!("bad dimensions n={n} k={k}")));
        }

        let body = &lines[body_start..];
        let mut words = Vec::with_capacity(body.len());
        for (j, l) in body.iter().enumerate() {
            let line = body_start + j + 1;
            if l.starts_with('#') {
                return Err(err(line, "header line after the body".into()));
            }
            if j > 0 {
                match body[j - 1].cmp(l) {
                    std::cmp::Ordering::Equal => return Err(err(line, "duplicate codeword".into())),
                    std::cmp::Ordering::Greater => return Err(err(line, "codewords not sorted".into())),
                    std::cmp::Ordering::Less => {}
                }
            }
            let vals: Vec<Elem> = l
                .split(' ')
                .map(|x| parse_uint(x).filter(|&v| v < header.q as u64).map(|v| v as Elem))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| err(line, format!("entries must be integers in [0, {})", header.q)))?;
            if vals.len() != n * k {
                return Err(err(line, format!("{} entries, expected {}", vals.len(), n * k)));
            }
            let s = Subspace::from_canonical(f, n, vals)
                .ok_or_else(|| err(line, "not a reduced row echelon basis of full rank".into()))?;
            words.push(s);
        }
        if words.len() != header.count {
            return Err(err(get("count")?.0, format!("count={} but {} codewords", header.count, words.len())));
        }
        let code = Code::new(words).map_err(|e| err(body_start + 1, e.to_string()))?;
        let file = CodeFile { header, code };
        let canon = file.to_text();
        if canon != text {
            let at = canon.lines().zip(text.lines()).position(|(a, b)| a != b).unwrap_or(0);
            return Err(err(at + 1, "file is not in canonical form".into()));
        }
        Ok(file)
    }
}

/// A decimal integer without sign or leading zeros.
fn parse_uint(s: &str) -> Option<u64> {
    let v: u64 = s.parse().ok()?;
    (v.to_string() == s).then_some(v)
}
