//! Arithmetic in the finite fields GF(2^k), 1 <= k <= 16.
//!
//! Elements are bit vectors modulo a fixed primitive polynomial per k, so the
//! residue class of x is always a generator `g` of the multiplicative group.
//! Multiplication, inversion, square roots and discrete logs go through
//! per-field log/antilog tables built once on first use.

use std::fmt;
use std::sync::OnceLock;

/// Primitive polynomials over GF(2), index = k. Entry k has degree k.
/// Primitivity is checked by a unit test (order of x equals 2^k - 1).
const MODULI: [u32; 17] = [
    0, 0b11, // k=1: x + 1 (unused for reduction, GF(2) is {0,1})
    0b111,               // x^2+x+1
    0b1011,              // x^3+x+1
    0b10011,             // x^4+x+1
    0b100101,            // x^5+x^2+1
    0b1000011,           // x^6+x+1
    0b10000011,          // x^7+x+1
    0b100011101,         // x^8+x^4+x^3+x^2+1
    0b1000010001,        // x^9+x^4+1
    0b10000001001,       // x^10+x^3+1
    0b100000000101,      // x^11+x^2+1
    0b1000001010011,     // x^12+x^6+x^4+x+1
    0b10000000011011,    // x^13+x^4+x^3+x+1
    0b100010001000011,   // x^14+x^10+x^6+x+1
    0b1000000000000011,  // x^15+x+1
    0b10001000000001011, // x^16+x^12+x^3+x+1
];

pub const MAX_K: u8 = 16;

struct Tables {
    /// exp[i] = g^i for i in 0..2^k-1 (doubled to skip a mod in mul).
    exp: Vec<u16>,
    /// log[a] for a in 1..2^k (log[0] unused).
    log: Vec<u16>,
}

static TABLES: [OnceLock<Tables>; 17] = [const { OnceLock::new() }; 17];

/// Carryless multiply of two reduced operands, reduced mod the k-th modulus.
fn clmul_reduce(a: u32, b: u32, k: u8) -> u16 {
    let modulus = MODULI[k as usize];
    let mut acc: u32 = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> k != 0 {
            a ^= modulus;
        }
    }
    acc as u16
}

fn tables(k: u8) -> &'static Tables {
    TABLES[k as usize].get_or_init(|| {
        let n = (1u32 << k) - 1;
        let mut exp = vec![0u16; 2 * n as usize];
        let mut log = vec![0u16; 1 << k];
        let mut cur: u16 = 1;
        for i in 0..n as usize {
            exp[i] = cur;
            exp[i + n as usize] = cur;
            log[cur as usize] = i as u16;
            cur = clmul_reduce(cur as u32, 0b10, k);
        }
        Tables { exp, log }
    })
}

/// An element of GF(2^k). The field is identified by `k`; mixing elements of
/// different fields panics, mirroring a tower mismatch programming error.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf {
    k: u8,
    bits: u16,
}

impl Gf {
    pub fn new(k: u8, bits: u16) -> Self {
        assert!(k >= 1 && k <= MAX_K, "unsupported field degree {k}");
        debug_assert!(k == 16 || bits < (1 << k));
        Gf { k, bits }
    }

    pub fn zero(k: u8) -> Self {
        Gf::new(k, 0)
    }

    pub fn one(k: u8) -> Self {
        Gf::new(k, 1)
    }

    /// The fixed generator g (class of x). For k = 1 this is 1.
    pub fn generator(k: u8) -> Self {
        if k == 1 {
            Gf::one(1)
        } else {
            Gf::new(k, 0b10)
        }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    fn order(&self) -> u32 {
        (1u32 << self.k) - 1
    }

    pub fn add(self, rhs: Gf) -> Gf {
        assert_eq!(self.k, rhs.k, "GF(2^k) degree mismatch");
        Gf::new(self.k, self.bits ^ rhs.bits)
    }

    pub fn mul(self, rhs: Gf) -> Gf {
        assert_eq!(self.k, rhs.k, "GF(2^k) degree mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Gf::zero(self.k);
        }
        if self.k == 1 {
            return Gf::one(1);
        }
        let t = tables(self.k);
        let i = t.log[self.bits as usize] as usize + t.log[rhs.bits as usize] as usize;
        Gf::new(self.k, t.exp[i])
    }

    pub fn inv(self) -> Gf {
        assert!(!self.is_zero(), "inverse of zero in GF(2^k)");
        if self.k == 1 {
            return self;
        }
        let t = tables(self.k);
        let n = self.order() as usize;
        let i = (n - t.log[self.bits as usize] as usize) % n;
        Gf::new(self.k, t.exp[i])
    }

    pub fn div(self, rhs: Gf) -> Gf {
        self.mul(rhs.inv())
    }

    pub fn square(self) -> Gf {
        self.mul(self)
    }

    /// Every element of a perfect field of characteristic 2 has a unique
    /// square root: sqrt(a) = a^(2^(k-1)).
    pub fn sqrt(self) -> Gf {
        if self.is_zero() || self.k == 1 {
            return self;
        }
        let t = tables(self.k);
        let n = self.order() as u64;
        let i = (t.log[self.bits as usize] as u64 * (1u64 << (self.k - 1))) % n;
        Gf::new(self.k, t.exp[i as usize])
    }

    pub fn pow(self, e: u64) -> Gf {
        if self.is_zero() {
            return if e == 0 { Gf::one(self.k) } else { self };
        }
        if self.k == 1 {
            return Gf::one(1);
        }
        let t = tables(self.k);
        let n = self.order() as u64;
        let i = (t.log[self.bits as usize] as u64 * (e % n)) % n;
        Gf::new(self.k, t.exp[i as usize])
    }

    /// Absolute trace to GF(2), returned as 0/1.
    pub fn trace(self) -> u8 {
        let mut acc = Gf::zero(self.k);
        let mut cur = self;
        for _ in 0..self.k {
            acc = acc.add(cur);
            cur = cur.square();
        }
        debug_assert!(acc.bits <= 1);
        acc.bits as u8
    }

    /// Solve w^2 + w = self, if the trace vanishes. Linear algebra over the
    /// GF(2)-coordinates of the Artin-Schreier map.
    pub fn artin_schreier_root(self) -> Option<Gf> {
        if self.trace() != 0 {
            return None;
        }
        let k = self.k as usize;
        // columns of w -> w^2 + w on basis bits
        let mut cols = Vec::with_capacity(k);
        for j in 0..k {
            let b = Gf::new(self.k, 1 << j);
            cols.push(b.square().add(b).bits);
        }
        // Gaussian elimination on the k x (k+1) system
        let mut rows: Vec<u32> = (0..k)
            .map(|i| {
                let mut r: u32 = 0;
                for (j, c) in cols.iter().enumerate() {
                    if c >> i & 1 == 1 {
                        r |= 1 << j;
                    }
                }
                if self.bits >> i & 1 == 1 {
                    r |= 1 << k;
                }
                r
            })
            .collect();
        let mut pivots = vec![usize::MAX; k];
        let mut rank = 0;
        for col in 0..k {
            if let Some(p) = (rank..k).find(|&r| rows[r] >> col & 1 == 1) {
                rows.swap(rank, p);
                for r in 0..k {
                    if r != rank && rows[r] >> col & 1 == 1 {
                        rows[r] ^= rows[rank];
                    }
                }
                pivots[col] = rank;
                rank += 1;
            }
        }
        let mut w: u16 = 0;
        for col in 0..k {
            let p = pivots[col];
            if p != usize::MAX && rows[p] >> k & 1 == 1 {
                w |= 1 << col;
            }
        }
        // rows with no pivot must have zero rhs
        for r in rank..k {
            if rows[r] >> k & 1 == 1 {
                return None;
            }
        }
        let root = Gf::new(self.k, w);
        debug_assert_eq!(root.square().add(root), self);
        Some(root)
    }

    /// Discrete log base g, for printing. None for zero.
    pub fn dlog(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else if self.k == 1 {
            Some(0)
        } else {
            Some(tables(self.k).log[self.bits as usize] as u32)
        }
    }

    pub fn from_dlog(k: u8, e: u64) -> Gf {
        Gf::generator(k).pow(e)
    }

    /// All field elements, in bit order.
    pub fn all(k: u8) -> impl Iterator<Item = Gf> {
        (0..(1u32 << k)).map(move |b| Gf::new(k, b as u16))
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({}; {:#b})", self.k, self.bits)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.is_one() {
            return write!(f, "1");
        }
        match self.dlog() {
            Some(1) => write!(f, "g"),
            Some(e) => write!(f, "g^{e}"),
            None => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_irreducible(modulus: u32, k: u8) -> bool {
        // trial division by all polynomials of degree 1..=k/2
        for d in 1..=(k / 2) as u32 {
            for q in (1u32 << d)..(1u32 << (d + 1)) {
                // polynomial remainder of modulus by q
                let mut r = modulus;
                while 32 - r.leading_zeros() >= 32 - q.leading_zeros() && r != 0 {
                    let shift = (32 - r.leading_zeros()) - (32 - q.leading_zeros());
                    r ^= q << shift;
                }
                if r == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn prime_factors(mut n: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                out.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    #[test]
    fn moduli_are_primitive() {
        for k in 2..=MAX_K {
            assert!(is_irreducible(MODULI[k as usize], k), "k={k} reducible");
            let g = Gf::generator(k);
            let n = (1u32 << k) - 1;
            assert!(g.pow(n as u64).is_one(), "k={k}: g^(2^k-1) != 1");
            for p in prime_factors(n) {
                assert!(!g.pow((n / p) as u64).is_one(), "k={k}: order divides {}", n / p);
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        for k in [1u8, 2, 3, 4, 8] {
            for a in Gf::all(k) {
                assert_eq!(a.add(a), Gf::zero(k));
                if !a.is_zero() {
                    assert!(a.mul(a.inv()).is_one());
                }
                assert_eq!(a.sqrt().square(), a);
                for b in Gf::all(k) {
                    assert_eq!(a.mul(b), b.mul(a));
                    for c in Gf::all(k).take(8) {
                        assert_eq!(a.mul(b.add(c)), a.mul(b).add(a.mul(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn artin_schreier_roundtrip() {
        for k in [1u8, 2, 3, 4, 6] {
            let mut members = 0;
            for a in Gf::all(k) {
                let img = a.square().add(a);
                let w = img.artin_schreier_root().expect("image must have a root");
                assert_eq!(w.square().add(w), img);
                members += 1;
            }
            assert_eq!(members, 1 << k);
            // exactly half the field lies in the image of x^2+x
            let in_image = Gf::all(k).filter(|a| a.trace() == 0).count();
            assert_eq!(in_image, 1 << (k - 1));
            for a in Gf::all(k) {
                if a.trace() == 1 {
                    assert!(a.artin_schreier_root().is_none());
                }
            }
        }
    }

    #[test]
    fn wp_f2_is_zero_only() {
        // ℘(F_2) = {0}: 0^2+0 = 0, 1^2+1 = 0
        assert!(Gf::one(1).artin_schreier_root().is_none());
        assert!(Gf::zero(1).artin_schreier_root().is_some());
    }
}
