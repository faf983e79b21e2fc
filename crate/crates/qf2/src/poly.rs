//! Sparse multivariate polynomials over GF(2^k).
//!
//! Monomials are exponent vectors ordered lexicographically by variable
//! creation order (variable 0 most significant), which is the canonical
//! monomial order used everywhere for leading terms and monic normalization.
//! The gcd is the recursive content/primitive-part method with a primitive
//! pseudo-remainder sequence in the chosen main variable.

use crate::gf::Gf;
use std::collections::BTreeMap;

pub type Mono = Vec<u16>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    pub k: u8,
    pub nvars: usize,
    pub terms: BTreeMap<Mono, Gf>,
}

impl std::fmt::Debug for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MPoly({} terms /F2^{}, {} vars)", self.terms.len(), self.k, self.nvars)
    }
}

impl MPoly {
    pub fn zero(k: u8, nvars: usize) -> Self {
        MPoly { k, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(k: u8, nvars: usize, c: Gf) -> Self {
        let mut p = MPoly::zero(k, nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(k: u8, nvars: usize) -> Self {
        MPoly::constant(k, nvars, Gf::one(k))
    }

    pub fn var(k: u8, nvars: usize, v: usize) -> Self {
        let mut m = vec![0u16; nvars];
        m[v] = 1;
        let mut p = MPoly::zero(k, nvars);
        p.terms.insert(m, Gf::one(k));
        p
    }

    pub fn monomial(k: u8, nvars: usize, m: Mono, c: Gf) -> Self {
        debug_assert_eq!(m.len(), nvars);
        let mut p = MPoly::zero(k, nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.iter().all(|&e| e == 0) && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Gf> {
        if self.is_zero() {
            return Some(Gf::zero(self.k));
        }
        if self.is_constant() {
            return self.terms.values().next().copied();
        }
        None
    }

    fn add_term(&mut self, m: Mono, c: Gf) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.k, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let c = c1.mul(*c2);
                if c.is_zero() {
                    continue;
                }
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: Gf) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.k, self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Mono, c: Gf) -> MPoly {
        let mut out = MPoly::zero(self.k, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            let mm: Mono = m1.iter().zip(m).map(|(a, b)| a + b).collect();
            out.terms.insert(mm, c1.mul(c));
        }
        out
    }

    pub fn square(&self) -> MPoly {
        let mut out = MPoly::zero(self.k, self.nvars);
        for (m, c) in &self.terms {
            let mm: Mono = m.iter().map(|e| e * 2).collect();
            out.terms.insert(mm, c.square());
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut out = MPoly::one(self.k, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        out
    }

    /// Leading (maximal) term under the global lex order.
    pub fn leading(&self) -> Option<(&Mono, Gf)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub fn leading_coeff(&self) -> Gf {
        self.leading().map(|(_, c)| c).unwrap_or(Gf::zero(self.k))
    }

    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.mul_scalar(c.inv()),
        }
    }

    pub fn max_deg(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    pub fn min_deg(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m[v]).min().unwrap_or(0)
    }

    pub fn total_deg(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m[v] > 0)
    }

    pub fn vars_involved(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.involves(v)).collect()
    }

    /// Coefficient of v^d, as a polynomial with v cleared.
    pub fn coeff_of(&self, v: usize, d: u16) -> MPoly {
        let mut out = MPoly::zero(self.k, self.nvars);
        for (m, c) in &self.terms {
            if m[v] == d {
                let mut mm = m.clone();
                mm[v] = 0;
                out.terms.insert(mm, *c);
            }
        }
        out
    }

    /// Divide by v^e (must be exactly divisible).
    pub fn shift_down(&self, v: usize, e: u16) -> MPoly {
        let mut out = MPoly::zero(self.k, self.nvars);
        for (m, c) in &self.terms {
            debug_assert!(m[v] >= e);
            let mut mm = m.clone();
            mm[v] -= e;
            out.terms.insert(mm, *c);
        }
        out
    }

    /// Exact multivariate division; None if rhs does not divide self.
    pub fn div_exact(&self, rhs: &MPoly) -> Option<MPoly> {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MPoly::zero(self.k, self.nvars));
        }
        if let Some(c) = rhs.constant_value() {
            return Some(self.mul_scalar(c.inv()));
        }
        let (lm, lc) = rhs.leading().unwrap();
        let lm = lm.clone();
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.k, self.nvars);
        while let Some((m, c)) = rem.leading() {
            let m = m.clone();
            if !lm.iter().zip(&m).all(|(a, b)| a <= b) {
                return None;
            }
            let qm: Mono = m.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let qc = c.div(lc);
            quot.add_term(qm.clone(), qc);
            rem = rem.add(&rhs.mul_monomial(&qm, qc));
        }
        Some(quot)
    }

    /// Exact square root; exists iff every exponent is even (coefficients are
    /// automatically squares over the perfect base field).
    pub fn sqrt_exact(&self) -> Option<MPoly> {
        let mut out = MPoly::zero(self.k, self.nvars);
        for (m, c) in &self.terms {
            if m.iter().any(|&e| e % 2 != 0) {
                return None;
            }
            let mm: Mono = m.iter().map(|e| e / 2).collect();
            out.terms.insert(mm, c.sqrt());
        }
        Some(out)
    }

    /// f = s^2 * r with r having squarefree exponents monomial-wise is not
    /// well-defined in general; this extracts the largest monomial square
    /// factor only (used for normalizing monomial data).
    pub fn monomial_square_part(&self) -> Mono {
        let mut m = vec![u16::MAX; self.nvars];
        for mono in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(mono) {
                *a = (*a).min(*b);
            }
        }
        m.iter_mut().for_each(|e| {
            if *e == u16::MAX {
                *e = 0;
            } else {
                *e /= 2;
            }
        });
        m
    }

    /// Pseudo-remainder of self by g with respect to variable v.
    fn prem(&self, g: &MPoly, v: usize) -> MPoly {
        let d1 = g.max_deg(v);
        let lc1 = g.coeff_of(v, d1);
        let mut r = self.clone();
        let mut guard = self.max_deg(v) as i32 - d1 as i32 + 1;
        while !r.is_zero() && r.max_deg(v) >= d1 && guard >= 0 {
            let d0 = r.max_deg(v);
            let lc0 = r.coeff_of(v, d0);
            let xpow = MPoly::var(self.k, self.nvars, v).pow((d0 - d1) as u32);
            r = r.mul(&lc1).add(&lc0.mul(&xpow).mul(g));
            guard -= 1;
        }
        r
    }

    /// Content with respect to variable v: gcd of the v-coefficients.
    fn content(&self, v: usize) -> MPoly {
        let mut g = MPoly::zero(self.k, self.nvars);
        for d in 0..=self.max_deg(v) {
            let c = self.coeff_of(v, d);
            if !c.is_zero() {
                g = gcd(&g, &c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }
}

/// The largest monomial dividing every term.
fn monomial_content(p: &MPoly) -> Mono {
    let mut m = vec![u16::MAX; p.nvars];
    for mono in p.terms.keys() {
        for (a, b) in m.iter_mut().zip(mono) {
            *a = (*a).min(*b);
        }
    }
    m.iter_mut().for_each(|e| {
        if *e == u16::MAX {
            *e = 0;
        }
    });
    m
}

fn strip_monomial(p: &MPoly, m: &Mono) -> MPoly {
    if m.iter().all(|&e| e == 0) {
        return p.clone();
    }
    let mut q = MPoly::zero(p.k, p.nvars);
    for (mono, c) in &p.terms {
        q.terms.insert(mono.iter().zip(m).map(|(a, b)| a - b).collect(), *c);
    }
    q
}

/// Multivariate gcd, normalized monic under the global lex order.
pub fn gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return MPoly::one(f.k, f.nvars);
    }
    // strip the monomial contents first; their gcd is immediate
    let mf = monomial_content(f);
    let mg = monomial_content(g);
    let common: Mono = mf.iter().zip(&mg).map(|(a, b)| *a.min(b)).collect();
    if mf.iter().any(|&e| e > 0) || mg.iter().any(|&e| e > 0) {
        let f2 = strip_monomial(f, &mf);
        let g2 = strip_monomial(g, &mg);
        let inner = gcd(&f2, &g2);
        return inner.mul_monomial(&common, Gf::one(f.k)).monic();
    }
    if f.terms.len() == 1 || g.terms.len() == 1 {
        // a monomial (content already stripped): gcd is constant
        return MPoly::one(f.k, f.nvars);
    }
    // univariate fast path
    let vars_f = f.vars_involved();
    let vars_g = g.vars_involved();
    if vars_f.len() == 1 && vars_g == vars_f {
        return gcd_univariate(f, g, vars_f[0]);
    }
    // main variable: the highest-index variable occurring in either
    let v = (0..f.nvars)
        .rev()
        .find(|&v| f.involves(v) || g.involves(v))
        .expect("non-constant polynomial involves a variable");
    if !f.involves(v) {
        // gcd(f, content_v(g))
        return gcd(f, &g.content(v));
    }
    if !g.involves(v) {
        return gcd(&f.content(v), g);
    }
    let cf = f.content(v);
    let cg = g.content(v);
    let cont = gcd(&cf, &cg);
    let mut a = f.div_exact(&cf).expect("content divides");
    let mut b = g.div_exact(&cg).expect("content divides");
    if a.max_deg(v) < b.max_deg(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = a.prem(&b, v);
        if r.is_zero() {
            let pp = b.div_exact(&b.content(v)).expect("content divides");
            return cont.mul(&pp).monic();
        }
        if !r.involves(v) {
            return cont.monic();
        }
        a = b;
        b = r.div_exact(&r.content(v)).expect("content divides");
    }
}

/// Euclid over the field coefficients for genuinely univariate inputs.
fn gcd_univariate(f: &MPoly, g: &MPoly, v: usize) -> MPoly {
    let to_vec = |p: &MPoly| -> Vec<Gf> {
        let d = p.max_deg(v) as usize;
        let mut out = vec![Gf::zero(p.k); d + 1];
        for (m, c) in &p.terms {
            out[m[v] as usize] = *c;
        }
        out
    };
    let deg = |p: &[Gf]| p.iter().rposition(|c| !c.is_zero());
    let mut a = to_vec(f);
    let mut b = to_vec(g);
    loop {
        let Some(db) = deg(&b) else {
            // b == 0
            let da = deg(&a).unwrap();
            let lc = a[da].inv();
            let mut out = MPoly::zero(f.k, f.nvars);
            for (i, c) in a.iter().enumerate() {
                if !c.is_zero() {
                    let mut m = vec![0u16; f.nvars];
                    m[v] = i as u16;
                    out.terms.insert(m, c.mul(lc));
                }
            }
            return out;
        };
        let da = deg(&a);
        match da {
            Some(da) if da >= db => {
                let q = a[da].div(b[db]);
                for i in 0..=db {
                    a[da - db + i] = a[da - db + i].add(b[i].mul(q));
                }
            }
            _ => std::mem::swap(&mut a, &mut b),
        }
    }
}

pub fn gcd_many<'a>(polys: impl Iterator<Item = &'a MPoly>, k: u8, nvars: usize) -> MPoly {
    let mut g = MPoly::zero(k, nvars);
    for p in polys {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Render with the given variable names; canonical (term order is the map order).
pub fn format_poly(p: &MPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (m, c) in &p.terms {
        let mut factors = Vec::new();
        if !c.is_one() || m.iter().all(|&e| e == 0) {
            factors.push(format!("{c}"));
        }
        for (v, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[v].clone()),
                _ => factors.push(format!("{}^{}", names[v], e)),
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(s: &[(&[u16], u16)]) -> MPoly {
        // small helper over F_2 with fixed nvars from first mono
        let nv = s[0].0.len();
        let mut p = MPoly::zero(1, nv);
        for (m, c) in s {
            p.add_term(m.to_vec(), Gf::new(1, *c));
        }
        p
    }

    #[test]
    fn mul_and_square_char2() {
        // (t+u)^2 = t^2 + u^2
        let t_plus_u = p2(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let sq = t_plus_u.mul(&t_plus_u);
        assert_eq!(sq, p2(&[(&[2, 0], 1), (&[0, 2], 1)]));
        assert_eq!(sq, t_plus_u.square());
        assert_eq!(sq.sqrt_exact().unwrap(), t_plus_u);
    }

    #[test]
    fn div_exact_roundtrip() {
        let f = p2(&[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], 1)]); // t+u+1
        let g = p2(&[(&[2, 1], 1), (&[0, 0], 1)]); // t^2 u + 1
        let fg = f.mul(&g);
        assert_eq!(fg.div_exact(&f).unwrap(), g);
        assert_eq!(fg.div_exact(&g).unwrap(), f);
        assert!(g.div_exact(&f).is_none());
    }

    #[test]
    fn gcd_multivariate() {
        let f = p2(&[(&[1, 0], 1), (&[0, 1], 1)]); // t+u
        let g = p2(&[(&[1, 0], 1), (&[0, 0], 1)]); // t+1
        let a = f.mul(&g);
        let b = f.mul(&f);
        let d = gcd(&a, &b);
        assert_eq!(d, f.monic());
        // coprime
        assert!(gcd(&f, &g).is_one());
    }

    #[test]
    fn gcd_with_content() {
        // f = u*(t+u), g = u^2*(t+1): gcd = u
        let u = p2(&[(&[0, 1], 1)]);
        let f = u.mul(&p2(&[(&[1, 0], 1), (&[0, 1], 1)]));
        let g = u.square().mul(&p2(&[(&[1, 0], 1), (&[0, 0], 1)]));
        assert_eq!(gcd(&f, &g), u);
    }

    #[test]
    fn sqrt_none_for_odd_exponent() {
        let f = p2(&[(&[1, 0], 1)]);
        assert!(f.sqrt_exact().is_none());
    }
}
