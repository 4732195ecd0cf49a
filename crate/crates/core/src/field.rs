//! Arithmetic in the finite field GF(p^m).
//!
//! Elements are stored as integers in `0..q` whose little-endian base-`p`
//! digits are the coefficients of the polynomial representative modulo the
//! field's defining polynomial. The prime subfield is therefore exactly the
//! range `0..p`, which lets trace values be reused as field elements.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Fields up to this order get a precomputed multiplication table.
const MUL_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NonPrimeP(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum of 65536")]
    TooLarge(u64),
    #[error("modulus polynomial must be monic of degree {expected} with coefficients below p")]
    MalformedPolynomial { expected: u32 },
    #[error("modulus polynomial is reducible over F_p")]
    ReduciblePolynomial,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("wgt is only defined in characteristic 2")]
    OddCharacteristic,
    #[error("value {value} is not an element of a field of order {order}")]
    EntryOutOfRange { value: u64, order: u32 },
}

/// An element of GF(q), encoded as an integer in `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw encoding without range checking; see [`FieldCtx::element`].
    pub const fn new(value: u32) -> Self {
        FieldElement(value)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Coefficients c0..cm of the monic modulus; `None` for prime fields.
    modulus: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    trace: Vec<u32>,
    self_dual_basis: OnceLock<Vec<FieldElement>>,
}

/// The field GF(p^m). Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p())
            .field("m", &self.m())
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

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

impl FieldCtx {
    /// Builds GF(p^m). For `m > 1` and no explicit modulus, the smallest monic
    /// irreducible polynomial is used, ordered by its coefficient list read
    /// from the highest non-leading degree down.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeP(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(FieldError::TooLarge(order));
        }
        let q = order as u32;
        let modulus = if m == 1 {
            if let Some(poly) = modulus {
                // A degree-1 modulus is accepted only in its trivial form x.
                if poly != [0, 1] {
                    return Err(FieldError::MalformedPolynomial { expected: 1 });
                }
            }
            None
        } else {
            let poly = match modulus {
                Some(poly) => {
                    if poly.len() != m as usize + 1
                        || poly[m as usize] != 1
                        || poly.iter().any(|&c| c >= p)
                    {
                        return Err(FieldError::MalformedPolynomial { expected: m });
                    }
                    if !is_irreducible(poly, p) {
                        return Err(FieldError::ReduciblePolynomial);
                    }
                    poly.to_vec()
                }
                None => default_irreducible(p, m),
            };
            Some(poly)
        };
        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            mul_table: None,
            trace: Vec::new(),
            self_dual_basis: OnceLock::new(),
        };
        if m > 1 && q <= MUL_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in a..q {
                    let v = poly_mul_encoded(&inner, a, b);
                    table[(a * q + b) as usize] = v;
                    table[(b * q + a) as usize] = v;
                }
            }
            inner.mul_table = Some(table);
        }
        let mut ctx = FieldCtx {
            inner: Arc::new(inner),
        };
        let trace: Vec<u32> = (0..q).map(|a| ctx.trace_slow(FieldElement(a))).collect();
        Arc::get_mut(&mut ctx.inner)
            .expect("freshly built context is uniquely owned")
            .trace = trace;
        Ok(ctx)
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.m == 1
    }

    /// Coefficients c0..cm of the defining polynomial, for extension fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.inner.modulus.as_deref()
    }

    /// Checked conversion from an encoded value.
    pub fn element(&self, value: u64) -> Result<FieldElement, FieldError> {
        if value < self.inner.q as u64 {
            Ok(FieldElement(value as u32))
        } else {
            Err(FieldError::EntryOutOfRange {
                value,
                order: self.inner.q,
            })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.inner.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.inner.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.inner.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.m == 1 {
            return FieldElement((a.0 + b.0) % p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..self.inner.m {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.m == 1 {
            return FieldElement((p - a.0) % p);
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        for _ in 0..self.inner.m {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.inner;
        if inner.m == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32);
        }
        match &inner.mul_table {
            Some(table) => FieldElement(table[(a.0 * inner.q + b.0) as usize]),
            None => FieldElement(poly_mul_encoded(inner, a.0, b.0)),
        }
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.inner.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Scales by an integer, i.e. adds `a` to itself `k` times.
    pub fn scale_int(&self, a: FieldElement, k: i64) -> FieldElement {
        self.mul(a, self.from_int(k))
    }

    /// Absolute trace tr(a) = a + a^p + ... + a^(p^(m-1)), returned in `0..p`.
    pub fn trace(&self, a: FieldElement) -> u32 {
        self.inner.trace[a.0 as usize]
    }

    fn trace_slow(&self, a: FieldElement) -> u32 {
        let mut acc = FieldElement::ZERO;
        let mut power = a;
        for _ in 0..self.inner.m {
            acc = self.add(acc, power);
            power = self.pow(power, self.inner.p as u64);
        }
        debug_assert!(acc.0 < self.inner.p, "trace left the prime subfield");
        acc.0
    }

    /// A basis b_1..b_m of GF(2^m) over GF(2) with tr(b_i b_j) = δ_ij,
    /// found by depth-first search over increasing element encodings.
    pub fn self_dual_basis(&self) -> Result<&[FieldElement], FieldError> {
        if self.inner.p != 2 {
            return Err(FieldError::OddCharacteristic);
        }
        let basis = self.inner.self_dual_basis.get_or_init(|| {
            let mut chosen = Vec::with_capacity(self.inner.m as usize);
            let found = self.extend_self_dual(&mut chosen, 1);
            assert!(found, "every binary field has a self-dual basis");
            chosen
        });
        Ok(basis)
    }

    fn extend_self_dual(&self, chosen: &mut Vec<FieldElement>, start: u32) -> bool {
        if chosen.len() == self.inner.m as usize {
            return true;
        }
        for v in start..self.inner.q {
            let b = FieldElement(v);
            if self.trace(self.mul(b, b)) != 1 {
                continue;
            }
            if chosen.iter().any(|&c| self.trace(self.mul(b, c)) != 0) {
                continue;
            }
            chosen.push(b);
            if self.extend_self_dual(chosen, v + 1) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// Number of self-dual basis elements b_j with tr(a b_j) != 0.
    pub fn wgt(&self, a: FieldElement) -> Result<u32, FieldError> {
        let basis = self.self_dual_basis()?;
        Ok(basis
            .iter()
            .filter(|&&b| self.trace(self.mul(a, b)) != 0)
            .count() as u32)
    }

    /// The unique square root in characteristic 2, a^(2^(m-1)).
    pub fn sqrt_char2(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if self.inner.p != 2 {
            return Err(FieldError::OddCharacteristic);
        }
        Ok(self.pow(a, 1u64 << (self.inner.m - 1)))
    }

    /// Base-p digits of an element, least significant first.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let p = self.inner.p;
        let mut x = a.0;
        (0..self.inner.m)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }
}

fn poly_mul_encoded(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p;
    let m = inner.m as usize;
    let modulus = inner.modulus.as_ref().expect("extension field has a modulus");
    let da = digits_of(a, p, m);
    let db = digits_of(b, p, m);
    let mut prod = vec![0u32; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    reduce_poly(&mut prod, modulus, p);
    prod.iter()
        .take(m)
        .rev()
        .fold(0u32, |acc, &d| acc * p + d)
}

fn digits_of(mut x: u32, p: u32, m: usize) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Reduces `poly` in place modulo the monic `modulus`.
fn reduce_poly(poly: &mut [u32], modulus: &[u32], p: u32) {
    let deg = modulus.len() - 1;
    for top in (deg..poly.len()).rev() {
        let lead = poly[top];
        if lead == 0 {
            continue;
        }
        for (k, &c) in modulus.iter().enumerate() {
            let idx = top - deg + k;
            poly[idx] = (poly[idx] + (p - lead) * c % p) % p;
        }
    }
}

/// Remainder of `num` by the monic `den`; true iff it is zero.
fn divides(den: &[u32], num: &[u32], p: u32) -> bool {
    let mut rem = num.to_vec();
    reduce_poly(&mut rem, den, p);
    rem.iter().take(den.len() - 1).all(|&c| c == 0)
}

/// Exhaustive check that a monic polynomial (coefficients c0..cm) has no
/// monic factor of degree 1..=m/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    if m <= 1 {
        return m == 1;
    }
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut divisor = digits_of(lower as u32, p, d);
            divisor.push(1);
            if divides(&divisor, poly, p) {
                return false;
            }
        }
    }
    true
}

fn default_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for lower in 0..count {
        let mut poly = digits_of(lower as u32, p, m as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
