//! Table-driven arithmetic in GF(p^e).
//!
//! Elements are encoded as integers `Σ c_i p^i` where `c_i` are the coefficients
//! of the element in the polynomial basis `1, x, ..., x^{e-1}` modulo the
//! field's primitive polynomial. The encoding fixes both the file format and
//! the sort order of everything built on top of it.

use crate::error::{Error, Result};

/// Encoded field element.
pub type Elem = u16;

const MAX_ORDER: u64 = 1 << 16;
const TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    e: u32,
    order: u32,
    /// Monic, ascending coefficients, length `e + 1`.
    poly: Vec<Elem>,
    /// `exp[i] = g^i` for `0 <= i < 2(order - 1)`.
    exp: Vec<Elem>,
    log: Vec<u32>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    add_tab: Option<Vec<Elem>>,
    mul_tab: Option<Vec<Elem>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.poly == other.poly
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e`, or returns `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Powers of the residue of `x` modulo `poly`, or `None` when `x` does not
/// have multiplicative order exactly `p^e - 1`.
fn power_table(p: u32, e: u32, poly: &[u32]) -> Option<Vec<Elem>> {
    let n = p.pow(e) - 1;
    if poly[0] == 0 {
        return None;
    }
    let mut cur = vec![0u32; e as usize];
    cur[0] = 1;
    let mut table = Vec::with_capacity(n as usize);
    for i in 0..n {
        let enc = undigits(&cur, p);
        if i > 0 && enc == 1 {
            return None;
        }
        table.push(enc as Elem);
        // multiply by x and reduce by x^e = -sum c_i x^i
        let carry = cur[e as usize - 1];
        for j in (0..e as usize).rev() {
            let lower = if j == 0 { 0 } else { cur[j - 1] };
            cur[j] = (lower + (p - (carry * poly[j]) % p)) % p;
        }
    }
    (undigits(&cur, p) == 1).then_some(table)
}

impl Field {
    /// GF(p^e) with the default primitive polynomial: the first primitive one
    /// when monic candidates are ordered by the encoding of their low
    /// coefficients `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        Self::check_params(p, e)?;
        let q = p.pow(e);
        for low in 0..q {
            let mut poly = digits(low, p, e);
            poly.push(1);
            if let Some(exp) = power_table(p, e, &poly) {
                return Ok(Self::build(p, e, poly, exp));
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    /// GF(p^e) defined by the given monic polynomial (ascending coefficients).
    pub fn with_poly(p: u32, e: u32, poly: &[Elem]) -> Result<Self> {
        Self::check_params(p, e)?;
        let bad = || Error::NotPrimitive(poly.to_vec());
        if poly.len() != e as usize + 1
            || poly[e as usize] != 1
            || poly.iter().any(|&c| c as u32 >= p)
        {
            return Err(bad());
        }
        let poly: Vec<u32> = poly.iter().map(|&c| c as u32).collect();
        let exp = power_table(p, e, &poly).ok_or_else(bad)?;
        Ok(Self::build(p, e, poly, exp))
    }

    /// The default field of order `q`.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, e)
    }

    fn check_params(p: u32, e: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if e == 0 || order > MAX_ORDER {
            return Err(Error::FieldTooLarge(order));
        }
        Ok(())
    }

    fn build(p: u32, e: u32, poly: Vec<u32>, powers: Vec<Elem>) -> Self {
        let order = p.pow(e);
        let n = (order - 1) as usize;
        let mut log = vec![0u32; order as usize];
        for (i, &x) in powers.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let mut exp = powers.clone();
        exp.extend_from_slice(&powers);

        let neg: Vec<Elem> = (0..order)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, e).iter().map(|&c| (p - c) % p).collect();
                undigits(&d, p) as Elem
            })
            .collect();
        let inv: Vec<Elem> = (0..order as usize)
            .map(|a| if a == 0 { 0 } else { exp[(n - log[a] as usize) % n] })
            .collect();

        let mut f = Field {
            p,
            e,
            order,
            poly: poly.iter().map(|&c| c as Elem).collect(),
            exp,
            log,
            neg,
            inv,
            add_tab: None,
            mul_tab: None,
        };
        if order <= TABLE_LIMIT {
            let o = order as usize;
            let mut add = vec![0; o * o];
            let mut mul = vec![0; o * o];
            for a in 0..o {
                for b in 0..o {
                    add[a * o + b] = f.add_slow(a as Elem, b as Elem);
                    mul[a * o + b] = f.mul_slow(a as Elem, b as Elem);
                }
            }
            f.add_tab = Some(add);
            f.mul_tab = Some(mul);
        }
        f
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic defining polynomial, ascending coefficients.
    pub fn poly(&self) -> &[Elem] {
        &self.poly
    }

    /// The primitive element: the class of `x` modulo the defining polynomial.
    pub fn generator(&self) -> Elem {
        self.exp[1]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(|a| a as Elem)
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let (p, mut a, mut b) = (self.p, a as u32, b as u32);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out as Elem
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_tab {
            Some(t) => t[a as usize * self.order as usize + b as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul_tab {
            Some(t) => t[a as usize * self.order as usize + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::ZeroInverse)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    /// Inverse of an element known to be nonzero; zero maps to zero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    /// `g^i` for the primitive element `g`.
    pub fn exp(&self, i: u64) -> Elem {
        self.exp[(i % (self.order as u64 - 1)) as usize]
    }

    /// Discrete logarithm to base [`Field::generator`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = self.order as u64 - 1;
        Some(n / gcd(n, l))
    }

    /// Coefficients of `a` in the polynomial basis.
    pub fn coeffs(&self, a: Elem) -> Vec<Elem> {
        digits(a as u32, self.p, self.e).into_iter().map(|c| c as Elem).collect()
    }

    pub fn from_coeffs(&self, c: &[Elem]) -> Elem {
        let d: Vec<u32> = c.iter().map(|&x| x as u32 % self.p).collect();
        undigits(&d, self.p) as Elem
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
