//! Finite fields with small orders.
//!
//! Elements are `u32` codes. In `F_{p^s}` the code of `c_0 + c_1 x + ...` is
//! `c_0 + c_1 p + c_2 p^2 + ...`, so `0` and `1` are the field's zero and one.
//! [`ExtensionField`] uses the same positional code with digits in `F_q`,
//! which is also the column encoding used by the vector space machinery.

use thiserror::Error;

use crate::exact::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} exceeds 2^16")]
    TooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
}

/// Largest field order accepted by the constructors.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;
const TABLE_LIMIT: u64 = 256;

pub trait Field {
    fn order(&self) -> u64;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        // a^(order - 2)
        let mut exp = self.order() - 2;
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge(p));
        }
        Ok(PrimeField { p: p as u32 })
    }
}

impl Field for PrimeField {
    fn order(&self) -> u64 {
        self.p as u64
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
}

/// Quotient ring `F[x] / (modulus)` with positional element codes.
#[derive(Debug, Clone)]
struct PolyQuotient<F> {
    base: F,
    /// coefficients of the monic modulus, lowest degree first, length `degree + 1`
    modulus: Vec<u32>,
}

impl<F: Field> PolyQuotient<F> {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn base_order(&self) -> u32 {
        self.base.order() as u32
    }

    fn decode(&self, mut code: u32) -> Vec<u32> {
        let b = self.base_order();
        (0..self.degree())
            .map(|_| {
                let d = code % b;
                code /= b;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        let b = self.base_order();
        digits.iter().rev().fold(0, |acc, &d| acc * b + d)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let da = self.decode(a);
        let db = self.decode(b);
        let sum: Vec<u32> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| self.base.add(x, y))
            .collect();
        self.encode(&sum)
    }

    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.decode(a).iter().map(|&x| self.base.neg(x)).collect();
        self.encode(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let da = self.decode(a);
        let db = self.decode(b);
        let mut prod = vec![0u32; 2 * self.degree()];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(x, y));
            }
        }
        poly_reduce(&self.base, &mut prod, &self.modulus);
        prod.truncate(self.degree());
        self.encode(&prod)
    }
}

/// Reduces `poly` modulo the monic `modulus` in place; afterwards only the low
/// `deg(modulus)` coefficients may be nonzero.
fn poly_reduce<F: Field>(base: &F, poly: &mut [u32], modulus: &[u32]) {
    let deg = modulus.len() - 1;
    for top in (deg..poly.len()).rev() {
        let c = poly[top];
        if c == 0 {
            continue;
        }
        for (k, &mk) in modulus.iter().enumerate() {
            let idx = top - deg + k;
            poly[idx] = base.sub(poly[idx], base.mul(c, mk));
        }
    }
}

/// True when the monic `poly` (degree >= 1) has no monic factor of degree
/// `1..=deg/2`; checked by trial division.
fn is_irreducible<F: Field>(base: &F, poly: &[u32]) -> bool {
    let deg = poly.len() - 1;
    let order = base.order() as u32;
    for d in 1..=deg / 2 {
        let count = (order as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor: Vec<u32> = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push((c % order as u64) as u32);
                c /= order as u64;
            }
            divisor.push(1);
            let mut rem = poly.to_vec();
            poly_reduce(base, &mut rem, &divisor);
            if rem[..d].iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Lowest monic irreducible polynomial of the given degree, where "lowest"
/// means smallest positional code of the non-leading coefficients.
fn lowest_irreducible<F: Field>(base: &F, degree: usize) -> Vec<u32> {
    let order = base.order();
    let count = order.pow(degree as u32);
    for code in 0..count {
        let mut poly: Vec<u32> = Vec::with_capacity(degree + 1);
        let mut c = code;
        for _ in 0..degree {
            poly.push((c % order) as u32);
            c /= order;
        }
        poly.push(1);
        if degree == 1 || is_irreducible(base, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

fn build_tables<F: Field>(field: &F) -> Tables {
    let q = field.order() as u32;
    let mut add = Vec::with_capacity((q * q) as usize);
    let mut mul = Vec::with_capacity((q * q) as usize);
    for a in 0..q {
        for b in 0..q {
            add.push(field.add(a, b));
            mul.push(field.mul(a, b));
        }
    }
    let neg = (0..q).map(|a| field.neg(a)).collect();
    let mut inv = vec![0; q as usize];
    for a in 1..q {
        let b = (1..q)
            .find(|&b| mul[(a * q + b) as usize] == 1)
            .expect("field");
        inv[a as usize] = b;
    }
    Tables { add, mul, neg, inv }
}

/// `F_q` with `q = p^s`, realized as `F_p[x] / (f)`.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    s: u32,
    ring: PolyQuotient<PrimeField>,
    tables: Option<Tables>,
}

/// Builds `F_{p^s}` with the lowest irreducible modulus of degree `s`.
pub fn build_field(p: u64, s: u32) -> Result<FiniteField, FieldError> {
    if s == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let prime = PrimeField::new(p)?;
    let order = p
        .checked_pow(s)
        .filter(|&q| q <= MAX_FIELD_ORDER)
        .ok_or(FieldError::TooLarge(p.saturating_pow(s)))?;
    let modulus = lowest_irreducible(&prime, s as usize);
    debug_assert!(s == 1 || is_irreducible(&prime, &modulus));
    let mut field = FiniteField {
        p: p as u32,
        s,
        ring: PolyQuotient {
            base: prime,
            modulus,
        },
        tables: None,
    };
    if order <= TABLE_LIMIT {
        field.tables = Some(build_tables(&field));
    }
    Ok(field)
}

impl FiniteField {
    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<FiniteField, FieldError> {
        let (p, s) = crate::exact::prime_power(q).map_err(|_| FieldError::NotPrime(q))?;
        build_field(p, s)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    /// Modulus coefficients, lowest degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.ring.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Multiplication computed from the polynomial representation, bypassing
    /// the tables.
    pub fn mul_by_polynomial(&self, a: u32, b: u32) -> u32 {
        self.ring.mul(a, b)
    }

    pub fn add_by_polynomial(&self, a: u32, b: u32) -> u32 {
        self.ring.add(a, b)
    }
}

impl Field for FiniteField {
    fn order(&self) -> u64 {
        (self.p as u64).pow(self.s)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.tables {
            Some(t) => t.add[(a * self.order() as u32 + b) as usize],
            None => self.ring.add(a, b),
        }
    }

    fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => self.ring.neg(a),
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.mul[(a * self.order() as u32 + b) as usize],
            None => self.ring.mul(a, b),
        }
    }

    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match &self.tables {
            Some(t) => t.inv[a as usize],
            None => {
                let mut exp = self.order() - 2;
                let (mut base, mut acc) = (a, 1);
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = self.ring.mul(acc, base);
                    }
                    base = self.ring.mul(base, base);
                    exp >>= 1;
                }
                acc
            }
        }
    }
}

/// `F_{q^m}` as `F_q[x] / (g)` with `deg g = m`. Element codes are base-`q`
/// digit strings, digit `r` being the coefficient of `x^r`.
#[derive(Debug, Clone)]
pub struct ExtensionField {
    ring: PolyQuotient<FiniteField>,
    order: u64,
    mul_table: Option<Vec<u32>>,
}

impl ExtensionField {
    pub fn new(base: FiniteField, m: u32) -> Result<Self, FieldError> {
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = base
            .order()
            .checked_pow(m)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or(FieldError::TooLarge(base.order().saturating_pow(m)))?;
        let modulus = lowest_irreducible(&base, m as usize);
        let mut ext = ExtensionField {
            ring: PolyQuotient { base, modulus },
            order,
            mul_table: None,
        };
        if order <= TABLE_LIMIT {
            let o = order as u32;
            let table = (0..o * o).map(|ab| ext.ring.mul(ab / o, ab % o)).collect();
            ext.mul_table = Some(table);
        }
        Ok(ext)
    }

    pub fn base(&self) -> &FiniteField {
        &self.ring.base
    }

    pub fn degree(&self) -> u32 {
        self.ring.degree() as u32
    }

    pub fn modulus(&self) -> &[u32] {
        &self.ring.modulus
    }

    /// Coordinates of `a` over `F_q`, lowest power first.
    pub fn to_base_digits(&self, a: u32) -> Vec<u32> {
        self.ring.decode(a)
    }

    pub fn from_base_digits(&self, digits: &[u32]) -> u32 {
        self.ring.encode(digits)
    }
}

impl Field for ExtensionField {
    fn order(&self) -> u64 {
        self.order
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        self.ring.add(a, b)
    }
    fn neg(&self, a: u32) -> u32 {
        self.ring.neg(a)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[(a as u64 * self.order + b as u64) as usize],
            None => self.ring.mul(a, b),
        }
    }
}
