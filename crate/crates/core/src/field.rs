//! Arithmetic in GF(p^r) for odd p, and the extended quadratic character.
//!
//! Elements are identified by an index in `[0, q)`. For `r = 1` the index is
//! the residue itself. For `r > 1` the index is the base-p expansion of the
//! coefficient vector of the reducing polynomial representative, constant
//! term least significant, so index 0 is zero and index 1 is one.

use thiserror::Error;

/// Largest field order supported by the dense lookup tables.
pub const MAX_FIELD_ORDER: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("field order {0} exceeds the supported cap of {MAX_FIELD_ORDER}")]
    TooLarge(u64),
    #[error("{0} is not an odd prime power")]
    NotPrimePower(u32),
    #[error("operands belong to different fields (orders {0} and {1})")]
    FieldMismatch(u32, u32),
    #[error("element index {index} out of range for GF({order})")]
    OutOfRange { index: u32, order: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, r)` with `n = p^r` when `n` is a prime power, by trial factorization.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= n as u64 {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !n.is_multiple_of(p) {
        // n itself is prime
        return Some((n, 1));
    }
    let mut m = n;
    let mut r = 0;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

pub fn is_odd_prime_power(n: u32) -> bool {
    n % 2 == 1 && prime_power(n).is_some()
}

/// An element of a [`PrimePowerField`], tagged with the order of its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    index: u32,
    order: u32,
}

impl FieldElement {
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn order(self) -> u32 {
        self.order
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerField {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus, coefficients low degree first, length `r + 1`.
    modulus: Vec<u32>,
    /// `chi[i]` is the quadratic character of element `i`.
    chi: Vec<i8>,
}

impl PrimePowerField {
    /// Builds GF(p^r) with the lexicographically smallest irreducible monic
    /// modulus (coefficients compared constant term first).
    pub fn new(p: u32, r: u32) -> Result<Self, FieldError> {
        if r < 1 {
            return Err(FieldError::BadDegree(r));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        let q = (p as u64).checked_pow(r).unwrap_or(u64::MAX);
        if q > MAX_FIELD_ORDER as u64 {
            return Err(FieldError::TooLarge(q));
        }
        let q = q as u32;
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, r)
        };
        let mut field = PrimePowerField {
            p,
            r,
            q,
            modulus,
            chi: Vec::new(),
        };
        let mut chi = vec![-1i8; q as usize];
        chi[0] = 0;
        for y in 1..q {
            let y = field.element(y).expect("index in range");
            let sq = field.mul_raw(y.index, y.index);
            chi[sq as usize] = 1;
        }
        field.chi = chi;
        Ok(field)
    }

    /// GF(q) for an odd prime power `q`.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        if q.is_multiple_of(2) {
            return Err(FieldError::EvenCharacteristic);
        }
        let (p, r) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, r)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Human-readable modulus, e.g. `x^2 + 1`, or `none (prime field)`.
    pub fn modulus_text(&self) -> String {
        if self.r == 1 {
            return "none (prime field)".to_string();
        }
        let mut terms = Vec::new();
        for (deg, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match deg {
                0 => String::new(),
                1 => "x".to_string(),
                d => format!("x^{d}"),
            };
            let term = match (c, deg) {
                (c, 0) => c.to_string(),
                (1, _) => mono,
                (c, _) => format!("{c}{mono}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }

    /// Description of the element enumeration used for matrix indices.
    pub fn element_order_text(&self) -> String {
        if self.r == 1 {
            "natural residues 0..q-1".to_string()
        } else {
            "base-p digits of polynomial coefficients, constant term least significant".to_string()
        }
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        if index >= self.q {
            return Err(FieldError::OutOfRange {
                index,
                order: self.q,
            });
        }
        Ok(FieldElement {
            index,
            order: self.q,
        })
    }

    /// All elements in canonical order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |index| FieldElement {
            index,
            order: self.q,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            index: 0,
            order: self.q,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            index: 1,
            order: self.q,
        }
    }

    fn check(&self, a: FieldElement) -> Result<(), FieldError> {
        if a.order != self.q {
            return Err(FieldError::FieldMismatch(self.q, a.order));
        }
        Ok(())
    }

    fn wrap(&self, index: u32) -> FieldElement {
        FieldElement {
            index,
            order: self.q,
        }
    }

    fn digits(&self, mut index: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.r as usize);
        for _ in 0..self.r {
            out.push(index % self.p);
            index /= self.p;
        }
        out
    }

    fn undigits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&sum)
    }

    fn neg_raw(&self, a: u32) -> u32 {
        if self.r == 1 {
            return (self.p - a) % self.p;
        }
        let neg: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.undigits(&neg)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let p = self.p as u64;
        let r = self.r as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce using x^r = -(m_0 + ... + m_{r-1} x^{r-1})
        for deg in (r..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for k in 0..r {
                let m = self.modulus[k] as u64;
                prod[deg - r + k] = (prod[deg - r + k] + (p - c) * m) % p;
            }
        }
        let low: Vec<u32> = prod[..r].iter().map(|&c| c as u32).collect();
        self.undigits(&low)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.add_raw(a.index, b.index)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.add_raw(a.index, self.neg_raw(b.index))))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul_raw(a.index, b.index)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(self.wrap(self.neg_raw(a.index)))
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        let mut base = a.index;
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        Ok(self.wrap(acc))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if a.index == 0 {
            return Err(FieldError::ZeroInverse);
        }
        self.pow(a, self.q as u64 - 2)
    }

    /// Extended quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, x: FieldElement) -> Result<i8, FieldError> {
        self.check(x)?;
        Ok(self.chi[x.index as usize])
    }

    /// `chi(alpha_j - alpha_i)` on raw indices; used by the conference builder.
    pub(crate) fn chi_of_difference(&self, j: u32, i: u32) -> i8 {
        self.chi[self.add_raw(j, self.neg_raw(i)) as usize]
    }
}

/// Evaluates a polynomial (coefficients low degree first) at `x` over GF(p).
fn eval_mod(poly: &[u32], x: u32, p: u32) -> u32 {
    poly.iter()
        .rev()
        .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) as u32
}

/// Remainder of `num` divided by monic `den` over GF(p).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    let p64 = p as u64;
    while rem.len() > dd {
        let lead = rem.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = rem.len() - dd;
        for k in 0..dd {
            rem[shift + k] = (rem[shift + k] + (p64 - lead) * den[k] as u64) % p64;
        }
    }
    rem.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility by trial division against every monic polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    if poly[0] == 0 {
        return false;
    }
    // quick root scan covers all degree-1 divisors
    if (0..p).any(|x| eval_mod(poly, x, p) == 0) {
        return false;
    }
    for d in 2..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                div.push((v % p as u64) as u32);
                v /= p as u64;
            }
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest irreducible monic polynomial of degree `r`,
/// comparing `(c_0, c_1, ..., c_{r-1})` with `c_0` most significant.
fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    let count = (p as u64).pow(r);
    for idx in 0..count {
        // c_0 is the most significant digit of idx
        let mut coeffs = vec![0u32; r as usize];
        let mut v = idx;
        for k in (0..r as usize).rev() {
            coeffs[k] = (v % p as u64) as u32;
            v /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}
