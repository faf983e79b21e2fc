//! ℘-membership: decide z ∈ {w^2 + w} over Base+Rational towers, exactly.
//!
//! In lowest terms the denominator of w^2 + w is den(w)^2, so z = N/D^2 is
//! solvable iff P^2 + P·D = N for a polynomial P = D·w, and the per-variable
//! degrees of P are bounded by max(deg D, deg N / 2). That reduces the
//! decision to a finite GF(2)-linear system: squaring and multiplication by
//! a constant are GF(2)-linear on GF(2^k) coordinate bits. A denominator
//! that is not a perfect square (an odd-order pole) certifies non-membership
//! immediately, and unsolvable bounds certify the rest.

use super::{El, FieldError};
use crate::gf::Gf;
use crate::poly::{MPoly, Mono};
use std::collections::BTreeMap;

const BOX_CAP: usize = 1 << 14;
const COL_CAP: usize = 1 << 16;

pub fn wp_membership(z: &El) -> Result<(bool, Option<El>), FieldError> {
    let tower = &z.tower;
    if !tower.is_rational_tower() {
        return Err(FieldError::UnsupportedTower);
    }
    if z.is_zero() {
        return Ok((true, Some(tower.zero())));
    }
    let Some(d) = z.den.sqrt_exact() else {
        // odd pole order at some prime: certified non-member
        return Ok((false, None));
    };
    let n = &z.num;
    let k = tower.k();
    let nvars = tower.nvars();
    let bounds: Vec<u16> =
        (0..nvars).map(|v| d.max_deg(v).max(n.max_deg(v) / 2)).collect();
    let box_size: usize = bounds.iter().map(|&b| b as usize + 1).product();
    if box_size > BOX_CAP || box_size * k as usize > COL_CAP {
        return Err(FieldError::CapExceeded);
    }
    let monos = enumerate_box(&bounds, nvars);
    let ncols = box_size * k as usize;

    // equation monomials: squares of box monomials, box + D-term sums, N-terms
    let mut eq_index: BTreeMap<Mono, usize> = BTreeMap::new();
    let add_eq = |m: Mono, eq_index: &mut BTreeMap<Mono, usize>| {
        let next = eq_index.len();
        eq_index.entry(m).or_insert(next);
    };
    for m in &monos {
        add_eq(m.iter().map(|e| e * 2).collect(), &mut eq_index);
        for dm in d.terms.keys() {
            add_eq(m.iter().zip(dm).map(|(a, b)| a + b).collect(), &mut eq_index);
        }
    }
    for nm in n.terms.keys() {
        add_eq(nm.clone(), &mut eq_index);
    }

    let nrows = eq_index.len() * k as usize;
    let words = (ncols + 1 + 63) / 64;
    let mut rows = vec![vec![0u64; words]; nrows];
    let set = |rows: &mut Vec<Vec<u64>>, r: usize, c: usize| {
        rows[r][c / 64] ^= 1 << (c % 64);
    };

    // squaring bit-matrix and multiply-by-c bit-matrices act on coefficient bits
    let sq_cols: Vec<u16> = (0..k).map(|j| Gf::new(k, 1 << j).square().bits()).collect();
    for (mi, m) in monos.iter().enumerate() {
        // P^2 contribution: coefficient bits of m land squared on 2m
        let sqm: Mono = m.iter().map(|e| e * 2).collect();
        let eq = eq_index[&sqm];
        for j in 0..k as usize {
            let img = sq_cols[j];
            for i in 0..k as usize {
                if img >> i & 1 == 1 {
                    set(&mut rows, eq * k as usize + i, mi * k as usize + j);
                }
            }
        }
        // P*D contribution
        for (dm, dc) in &d.terms {
            let mm: Mono = m.iter().zip(dm).map(|(a, b)| a + b).collect();
            let eq = eq_index[&mm];
            for j in 0..k as usize {
                let img = Gf::new(k, 1 << j).mul(*dc).bits();
                for i in 0..k as usize {
                    if img >> i & 1 == 1 {
                        set(&mut rows, eq * k as usize + i, mi * k as usize + j);
                    }
                }
            }
        }
    }
    // right-hand side N
    for (nm, nc) in &n.terms {
        let eq = eq_index[nm];
        for i in 0..k as usize {
            if nc.bits() >> i & 1 == 1 {
                set(&mut rows, eq * k as usize + i, ncols);
            }
        }
    }

    let Some(solution) = solve_f2(&mut rows, ncols) else {
        return Ok((false, None));
    };

    let mut p = MPoly::zero(k, nvars);
    for (mi, m) in monos.iter().enumerate() {
        let mut bits: u16 = 0;
        for j in 0..k as usize {
            if solution[mi * k as usize + j] {
                bits |= 1 << j;
            }
        }
        if bits != 0 {
            p.terms.insert(m.clone(), Gf::new(k, bits));
        }
    }
    // verify P^2 + P D = N exactly
    if p.square().add(&p.mul(&d)) != *n {
        return Ok((false, None));
    }
    let w = El::make(tower.clone(), p, d)?;
    debug_assert_eq!(&(&w.square() + &w), z);
    Ok((true, Some(w)))
}

fn enumerate_box(bounds: &[u16], nvars: usize) -> Vec<Mono> {
    let mut out = vec![vec![0u16; nvars]];
    for (v, &b) in bounds.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for m in &out {
            for e in 0..=b {
                let mut mm = m.clone();
                mm[v] = e;
                next.push(mm);
            }
        }
        out = next;
    }
    out
}

/// Solve the bit-packed linear system; columns 0..ncols are unknowns, the
/// last stored bit of each row is the right-hand side. Returns any solution.
fn solve_f2(rows: &mut [Vec<u64>], ncols: usize) -> Option<Vec<bool>> {
    let nrows = rows.len();
    let mut pivot_row_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| rows[r][col / 64] >> (col % 64) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col / 64] >> (col % 64) & 1 == 1 {
                for (w, pw) in row.iter_mut().zip(&pivot) {
                    *w ^= pw;
                }
            }
        }
        pivot_row_of_col[col] = rank;
        rank += 1;
    }
    // inconsistent?
    let rhs_bit = |row: &Vec<u64>| row[ncols / 64] >> (ncols % 64) & 1 == 1;
    for row in rows[rank..].iter() {
        if rhs_bit(row) {
            return None;
        }
    }
    let mut sol = vec![false; ncols];
    for col in 0..ncols {
        let r = pivot_row_of_col[col];
        if r != usize::MAX && rhs_bit(&rows[r]) {
            sol[col] = true;
        }
    }
    Some(sol)
}
