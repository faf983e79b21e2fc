//! The isotropy engine.
//!
//! Decision layers, in order: explicit zeros, complete base cases (finite
//! fields; ℘-test for a single binary block; F²-rank for totally singular
//! forms), residue-form recursion at each rational variable for forms whose
//! entries normalize to the unit·tᵉ patterns of the split table, and a
//! bounded monomial certificate search. Every Yes carries a vector that is
//! re-verified by evaluation; every No carries a trace whose leaves are
//! decided base cases. Anything else is Unknown.

use super::QuadForm;
use crate::f2linear;
use crate::field::{El, RationalRewrite, Val};
use crate::gf::Gf;
use crate::verdict::{Answer, Certificate, TraceNode, Verdict};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct IsotropyOptions {
    /// Total degree per coordinate in the certificate search.
    pub degree_bound: u16,
    /// Cap on enumeration size per search half.
    pub search_cap: usize,
}

impl Default for IsotropyOptions {
    fn default() -> Self {
        IsotropyOptions { degree_bound: default_degree_bound(), search_cap: 1 << 21 }
    }
}

/// Global default for the certificate-search degree bound; the CLI flag
/// overrides the environment variable, which overrides 4.
pub fn default_degree_bound() -> u16 {
    std::env::var("QF2_DEGREE_BOUND").ok().and_then(|s| s.parse().ok()).unwrap_or(4)
}

pub fn isotropy(phi: &QuadForm) -> Verdict {
    isotropy_with(phi, &IsotropyOptions::default())
}

pub fn isotropy_with(phi: &QuadForm, opts: &IsotropyOptions) -> Verdict {
    if phi.scale.is_zero() {
        // the zero scaling degenerates the form entirely
        if phi.dim() == 0 {
            return Verdict::no(Certificate::Trace(TraceNode::Empty));
        }
        return Verdict::yes(Certificate::Vector(phi.basis_vec(0)));
    }
    let f = phi.fold_scale();
    decide(&f, opts)
}

fn decide(f: &QuadForm, opts: &IsotropyOptions) -> Verdict {
    debug_assert!(f.scale.is_one());
    let tower = &f.tower;
    if f.dim() == 0 {
        return Verdict::no(Certificate::Trace(TraceNode::Empty));
    }

    // explicit zeros: a degenerate block slot or diagonal zero gives a vector
    for (i, (a, b)) in f.blocks.iter().enumerate() {
        if b.is_zero() {
            return Verdict::yes(Certificate::Vector(f.basis_vec(2 * i + 1)));
        }
        if a.is_zero() {
            return Verdict::yes(Certificate::Vector(f.basis_vec(2 * i)));
        }
    }
    for (j, c) in f.diag.iter().enumerate() {
        if c.is_zero() {
            return Verdict::yes(Certificate::Vector(f.basis_vec(2 * f.blocks.len() + j)));
        }
    }

    if f.dim() == 1 {
        return Verdict::no(Certificate::Trace(TraceNode::TotallySingularRank(format!(
            "<{}> with a nonzero entry",
            f.diag[0]
        ))));
    }

    if tower.nvars() == 0 {
        return decide_finite(f);
    }

    if tower.is_rational_tower() {
        return decide_rational(f, opts);
    }

    // totally singular forms over inseparable towers: complete via the
    // doubled coefficient family over the rational core
    if f.blocks.is_empty() {
        match ts_insep_kernel(&f) {
            Some(Ok(v)) => return Verdict::yes(Certificate::Vector(v)),
            Some(Err(trace)) => return Verdict::no(Certificate::Trace(trace)),
            None => {}
        }
    }

    // towers with quadratic layers: try the rational rewrite
    if let Some(rw) = RationalRewrite::try_build(tower) {
        if let Ok(g) = f.map_rewrite(&rw) {
            let v = decide(&g.fold_scale(), opts);
            return match v.answer {
                Answer::No => {
                    let inner = match v.certificate {
                        Some(Certificate::Trace(t)) => t,
                        _ => TraceNode::Note("anisotropic after rewrite".to_string()),
                    };
                    Verdict::no(Certificate::Trace(TraceNode::Rewrite(Box::new(inner))))
                }
                Answer::Yes => {
                    if let Some(Certificate::Vector(w)) = v.certificate {
                        let back: Result<Vec<El>, _> =
                            w.iter().map(|e| rw.unmap(e)).collect();
                        if let Ok(back) = back {
                            if f.verify_isotropic_vector(&back) {
                                return Verdict::yes(Certificate::Vector(back));
                            }
                        }
                    }
                    Verdict::unknown()
                }
                Answer::Unknown => Verdict::unknown(),
            };
        }
    }
    // separable layers: only the certificate search applies
    if let Some(v) = search_strategies(f, opts) {
        return Verdict::yes(Certificate::Vector(v));
    }
    Verdict::unknown()
}

/// Complete decision over the finite base field, with explicit vectors.
fn decide_finite(f: &QuadForm) -> Verdict {
    let tower = &f.tower;
    let r = f.blocks.len();
    let s = f.diag.len();
    let as_gf = |e: &El| -> Gf {
        e.num.constant_value().unwrap().div(e.den.constant_value().unwrap())
    };
    if r == 0 {
        if s >= 2 {
            // c1 z1^2 + c2 z2^2 = 0 with z1 = sqrt(c2/c1)
            let c1 = as_gf(&f.diag[0]);
            let c2 = as_gf(&f.diag[1]);
            let mut v = vec![tower.zero(); f.dim()];
            v[0] = tower.constant(c2.div(c1).sqrt());
            v[1] = tower.one();
            debug_assert!(f.verify_isotropic_vector(&v));
            return Verdict::yes(Certificate::Vector(v));
        }
        return Verdict::no(Certificate::Trace(TraceNode::FiniteField(
            "one-dimensional with a nonzero entry".to_string(),
        )));
    }
    if r == 1 && s == 0 {
        let ab = as_gf(&f.blocks[0].0).mul(as_gf(&f.blocks[0].1));
        return match ab.artin_schreier_root() {
            Some(w) => {
                let a = as_gf(&f.blocks[0].0);
                let v = vec![tower.constant(w), tower.constant(a)];
                debug_assert!(f.verify_isotropic_vector(&v));
                Verdict::yes(Certificate::Vector(v))
            }
            None => Verdict::no(Certificate::Trace(TraceNode::FiniteField(format!(
                "binary block with Arf slot of trace one over F_{}",
                1u32 << tower.k()
            )))),
        };
    }
    // dim >= 3 with a nonsingular block: a x^2 pairs against any other slot
    let a = as_gf(&f.blocks[0].0);
    let (other_idx, other_val) = if r >= 2 {
        (2, as_gf(&f.blocks[1].0)) // x-slot of the second block
    } else {
        (2 * r, as_gf(&f.diag[0]))
    };
    let mut v = vec![tower.zero(); f.dim()];
    v[0] = tower.constant(other_val.div(a).sqrt());
    v[other_idx] = tower.one();
    debug_assert!(f.verify_isotropic_vector(&v));
    Verdict::yes(Certificate::Vector(v))
}

fn decide_rational(f: &QuadForm, opts: &IsotropyOptions) -> Verdict {
    let tower = &f.tower;
    let r = f.blocks.len();

    // totally singular: isotropy is an F²-dependency among the coefficients
    if r == 0 {
        return match f2linear::f2_kernel(&f.diag) {
            Ok(Some(dep)) => {
                debug_assert!(f.verify_isotropic_vector(&dep));
                Verdict::yes(Certificate::Vector(dep))
            }
            Ok(None) => Verdict::no(Certificate::Trace(TraceNode::TotallySingularRank(
                format!("coefficients F²-independent (rank {})", f.diag.len()),
            ))),
            Err(_) => Verdict::unknown(),
        };
    }

    // single binary block: [a,b] isotropic iff ab ∈ ℘
    if r == 1 && f.diag.is_empty() {
        let ab = &f.blocks[0].0 * &f.blocks[0].1;
        match ab.wp_membership() {
            Ok((true, Some(w))) => {
                let v = vec![w, f.blocks[0].0.clone()];
                debug_assert!(f.verify_isotropic_vector(&v));
                return Verdict::yes(Certificate::Vector(v));
            }
            Ok((false, _)) => {
                return Verdict::no(Certificate::Trace(TraceNode::BinaryOutsideWp(format!(
                    "product of the slots of [{},{}] certified outside ℘",
                    f.blocks[0].0, f.blocks[0].1
                ))))
            }
            _ => return Verdict::unknown(),
        }
    }

    // quick verified-vector strategies
    if let Some(v) = per_block_wp(f) {
        return Verdict::yes(Certificate::Vector(v));
    }
    if let Some(v) = slot_kernel(f) {
        return Verdict::yes(Certificate::Vector(v));
    }

    // residue recursion over each rational variable and global twist
    for v in (0..tower.nvars()).rev() {
        for twist in [0u16, 1] {
            match try_residue_split(f, v, twist, opts) {
                SplitOutcome::No(trace) => return Verdict::no(Certificate::Trace(trace)),
                SplitOutcome::Yes(vec) => return Verdict::yes(Certificate::Vector(vec)),
                SplitOutcome::Undecided => {}
            }
        }
    }

    if let Some(v) = search_strategies(f, opts) {
        return Verdict::yes(Certificate::Vector(v));
    }
    Verdict::unknown()
}

/// A block whose slot product lies in ℘ is itself isotropic.
fn per_block_wp(f: &QuadForm) -> Option<Vec<El>> {
    for (i, (a, b)) in f.blocks.iter().enumerate() {
        if let Ok((true, Some(w))) = (a * b).wp_membership() {
            let mut v = vec![f.tower.zero(); f.dim()];
            v[2 * i] = w;
            v[2 * i + 1] = a.clone();
            if f.verify_isotropic_vector(&v) {
                return Some(v);
            }
        }
    }
    None
}

/// F²-dependencies among slot values, restricted to at most one slot per
/// block so the polar cross terms vanish.
fn slot_kernel(f: &QuadForm) -> Option<Vec<El>> {
    let r = f.blocks.len();
    if r > 6 {
        return None;
    }
    for mask in 0..(1u32 << r) {
        let mut coords = Vec::new();
        let mut values = Vec::new();
        for (i, (a, b)) in f.blocks.iter().enumerate() {
            if mask >> i & 1 == 0 {
                coords.push(2 * i);
                values.push(a.clone());
            } else {
                coords.push(2 * i + 1);
                values.push(b.clone());
            }
        }
        for (j, c) in f.diag.iter().enumerate() {
            coords.push(2 * r + j);
            values.push(c.clone());
        }
        if let Ok(Some(dep)) = f2linear::f2_kernel(&values) {
            let mut v = vec![f.tower.zero(); f.dim()];
            for (pos, d) in coords.iter().zip(dep) {
                v[*pos] = d;
            }
            if f.verify_isotropic_vector(&v) {
                return Some(v);
            }
        }
    }
    None
}

/// Totally singular σ over T = L(ρ₁,…,ρ_j) with inseparable generators and
/// core constants: T² is the L²-span of subset products of the constants,
/// so σ is isotropic over T iff the family {m·cᵢ} (m over subset products)
/// has an F²-dependency over L. Complete in both directions; the witness is
/// reassembled from the generator products.
fn ts_insep_kernel(f: &QuadForm) -> Option<Result<Vec<El>, TraceNode>> {
    let tower = &f.tower;
    let gens = tower.generator_vars();
    if gens.is_empty() || gens.len() > 10 {
        return None;
    }
    let mut consts = Vec::new();
    for &g in &gens {
        match &tower.layers()[g] {
            crate::field::Layer::Quadratic { kind: crate::field::GenKind::Insep, .. } => {}
            _ => return None,
        }
        let _ = g;
    }
    // constants and coefficients must project into the rational core
    let (core, _) = tower.core();
    for &g in &gens {
        let d = tower.var(g).square();
        match d.project_core() {
            Ok(dc) => consts.push(dc),
            Err(_) => return None,
        }
    }
    let mut coeffs_core = Vec::new();
    for c in &f.diag {
        match c.project_core() {
            Ok(cc) => coeffs_core.push(cc),
            Err(_) => return None,
        }
    }
    let nprod = 1usize << consts.len();
    let mut family = Vec::with_capacity(nprod * coeffs_core.len());
    let mut prods = Vec::with_capacity(nprod);
    for mask in 0..nprod {
        let mut p = core.one();
        for (i, d) in consts.iter().enumerate() {
            if mask >> i & 1 == 1 {
                p = &p * d;
            }
        }
        prods.push(p);
    }
    for c in &coeffs_core {
        for p in &prods {
            family.push(c * p);
        }
    }
    match f2linear::f2_kernel(&family) {
        Ok(Some(kernel)) => {
            let mut v = Vec::with_capacity(f.diag.len());
            for i in 0..coeffs_core.len() {
                let mut di = tower.zero();
                for (mask, k) in kernel[i * nprod..(i + 1) * nprod].iter().enumerate() {
                    if k.is_zero() {
                        continue;
                    }
                    let mut term = k.lift_from_core(tower).ok()?;
                    for (gi, &g) in gens.iter().enumerate() {
                        if mask >> gi & 1 == 1 {
                            term = &term * &tower.var(g);
                        }
                    }
                    di = &di + &term;
                }
                v.push(di);
            }
            if f.verify_isotropic_vector(&v) {
                Some(Ok(v))
            } else {
                None
            }
        }
        Ok(None) => Some(Err(TraceNode::TotallySingularRank(format!(
            "doubled family over {} insep layers is F²-independent",
            gens.len()
        )))),
        Err(_) => None,
    }
}

enum SplitOutcome {
    Yes(Vec<El>),
    No(TraceNode),
    Undecided,
}

/// Which residue a coordinate contributes to, its index there, and the
/// power of the uniformizer twisting the lift.
#[derive(Clone, Copy)]
struct SlotPlan {
    first: bool,
    index: usize,
    tpow: i64,
}

fn try_residue_split(f: &QuadForm, var: usize, twist: u16, opts: &IsotropyOptions) -> SplitOutcome {
    let tower = &f.tower;
    if !tower.is_rational_var(var) || tower.relation_involves(var) {
        return SplitOutcome::Undecided;
    }
    let g = if twist == 0 {
        f.clone()
    } else {
        f.scale_by(&tower.var(var)).fold_scale()
    };
    let vv = |e: &El| e.valuation(var).unwrap();

    let mut first_blocks: Vec<(El, El)> = Vec::new();
    let mut first_diag: Vec<El> = Vec::new();
    let mut second_blocks: Vec<(El, El)> = Vec::new();
    let mut second_diag: Vec<El> = Vec::new();
    // plans are filled per coordinate after the block/diag layout is known
    let mut plans: Vec<Option<SlotPlan>> = vec![None; f.dim()];
    struct Pending {
        coord: usize,
        first: bool,
        is_block_slot: bool,
        slot_in_block: usize,
        tpow: i64,
    }
    let mut pending: Vec<Pending> = Vec::new();

    let res_of = |e: &El, val: i64| -> El {
        e.unit_part(var).unwrap().residue(var).unwrap_or_else(|_| {
            unreachable!("unit part has valuation zero: {e} at {val}")
        })
    };

    for (i, (a, b)) in g.blocks.iter().enumerate() {
        let (Val::Finite(va), Val::Finite(vb)) = (vv(a), vv(b)) else {
            return SplitOutcome::Undecided;
        };
        let (pa, pb) = (va.rem_euclid(2), vb.rem_euclid(2));
        let ra = res_of(a, va);
        let rb = res_of(b, vb);
        let teven = |v: i64| -v / 2;
        let todd = |v: i64| -(v - 1) / 2;
        match (pa, pb) {
            (0, 0) => {
                let n = va + vb;
                if n > 0 {
                    return SplitOutcome::Undecided;
                }
                if n == 0 {
                    let bi = first_blocks.len();
                    first_blocks.push((ra, rb));
                    pending.push(Pending { coord: 2 * i, first: true, is_block_slot: true, slot_in_block: 2 * bi, tpow: teven(va) });
                    pending.push(Pending { coord: 2 * i + 1, first: true, is_block_slot: true, slot_in_block: 2 * bi + 1, tpow: teven(vb) });
                } else {
                    pending.push(Pending { coord: 2 * i, first: true, is_block_slot: false, slot_in_block: first_diag.len(), tpow: teven(va) });
                    first_diag.push(ra);
                    pending.push(Pending { coord: 2 * i + 1, first: true, is_block_slot: false, slot_in_block: first_diag.len(), tpow: teven(vb) });
                    first_diag.push(rb);
                }
            }
            (0, 1) | (1, 0) => {
                let n = va + vb;
                if n > 0 {
                    return SplitOutcome::Undecided;
                }
                let (even_c, even_v, even_r, odd_c, odd_v, odd_r) = if pa == 0 {
                    (2 * i, va, ra, 2 * i + 1, vb, rb)
                } else {
                    (2 * i + 1, vb, rb, 2 * i, va, ra)
                };
                pending.push(Pending { coord: even_c, first: true, is_block_slot: false, slot_in_block: first_diag.len(), tpow: teven(even_v) });
                first_diag.push(even_r);
                pending.push(Pending { coord: odd_c, first: false, is_block_slot: false, slot_in_block: second_diag.len(), tpow: todd(odd_v) });
                second_diag.push(odd_r);
            }
            (1, 1) => {
                let m = va + vb;
                if m > 0 {
                    return SplitOutcome::Undecided;
                }
                if m == 0 {
                    let bi = second_blocks.len();
                    second_blocks.push((ra, rb));
                    pending.push(Pending { coord: 2 * i, first: false, is_block_slot: true, slot_in_block: 2 * bi, tpow: todd(va) });
                    pending.push(Pending { coord: 2 * i + 1, first: false, is_block_slot: true, slot_in_block: 2 * bi + 1, tpow: todd(vb) });
                } else {
                    pending.push(Pending { coord: 2 * i, first: false, is_block_slot: false, slot_in_block: second_diag.len(), tpow: todd(va) });
                    second_diag.push(ra);
                    pending.push(Pending { coord: 2 * i + 1, first: false, is_block_slot: false, slot_in_block: second_diag.len(), tpow: todd(vb) });
                    second_diag.push(rb);
                }
            }
            _ => unreachable!(),
        }
    }
    for (j, c) in g.diag.iter().enumerate() {
        let Val::Finite(vc) = vv(c) else {
            return SplitOutcome::Undecided;
        };
        let rc = res_of(c, vc);
        let coord = 2 * g.blocks.len() + j;
        if vc.rem_euclid(2) == 0 {
            pending.push(Pending { coord, first: true, is_block_slot: false, slot_in_block: first_diag.len(), tpow: -vc / 2 });
            first_diag.push(rc);
        } else {
            pending.push(Pending { coord, first: false, is_block_slot: false, slot_in_block: second_diag.len(), tpow: -(vc - 1) / 2 });
            second_diag.push(rc);
        }
    }

    let res_tower = tower.remove_var(var).unwrap();
    let first = QuadForm::new(&res_tower, first_blocks, first_diag);
    let second = QuadForm::new(&res_tower, second_blocks, second_diag);
    // finalize coordinate plans now that block counts are known
    for p in &pending {
        let (form, _other) = if p.first { (&first, &second) } else { (&second, &first) };
        let index = if p.is_block_slot {
            p.slot_in_block
        } else {
            2 * form.blocks.len() + p.slot_in_block
        };
        plans[p.coord] = Some(SlotPlan { first: p.first, index, tpow: p.tpow });
    }

    let vf = decide(&first, opts);
    let vs = decide(&second, opts);
    match (vf.answer, vs.answer) {
        (Answer::No, Answer::No) => {
            let t1 = extract_trace(vf);
            let t2 = extract_trace(vs);
            SplitOutcome::No(TraceNode::ResidueSplit {
                var: tower.var_name(var).to_string(),
                twisted: twist == 1,
                first: Box::new(t1),
                second: Box::new(t2),
            })
        }
        _ => {
            // try to lift a residue vector exactly
            for (verdict, is_first) in [(&vf, true), (&vs, false)] {
                if verdict.answer != Answer::Yes {
                    continue;
                }
                let Some(Certificate::Vector(w)) = &verdict.certificate else {
                    continue;
                };
                let mut cand = vec![tower.zero(); f.dim()];
                let mut ok = true;
                for (coord, plan) in plans.iter().enumerate() {
                    let Some(p) = plan else { continue };
                    if p.first != is_first {
                        continue;
                    }
                    let entry = &w[p.index];
                    if entry.is_zero() {
                        continue;
                    }
                    match entry.lift_reinsert(tower, var) {
                        Ok(lifted) => {
                            let mut exps = vec![0i32; tower.nvars()];
                            exps[var] = p.tpow as i32;
                            cand[coord] = &lifted * &tower.monomial(&exps);
                        }
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok && f.verify_isotropic_vector(&cand) {
                    return SplitOutcome::Yes(cand);
                }
            }
            SplitOutcome::Undecided
        }
    }
}

fn extract_trace(v: Verdict) -> TraceNode {
    match v.certificate {
        Some(Certificate::Trace(t)) => t,
        _ => TraceNode::Note("anisotropic".to_string()),
    }
}

/// All verified-vector strategies bundled (used as the engine's last layer
/// and by callers needing a raw search).
fn search_strategies(f: &QuadForm, opts: &IsotropyOptions) -> Option<Vec<El>> {
    search_monomial_vectors(f, opts.degree_bound, opts.search_cap)
}

/// Bounded certificate search over vectors with monomial coordinates
/// (iterative deepening on the per-coordinate total degree). For monomial
/// coefficients over F2 a meet-in-the-middle cancellation hash keeps the
/// full sweep cheap; otherwise a direct capped enumeration runs.
pub fn search_monomial_vectors(phi: &QuadForm, degree_bound: u16, cap: usize) -> Option<Vec<El>> {
    let f = phi.fold_scale();
    let tower = &f.tower;
    let n = f.dim();
    if n == 0 {
        return None;
    }
    let monomial_coeffs = f
        .coefficients()
        .iter()
        .all(|c| c.num.terms.len() == 1 && c.den.terms.len() == 1);
    for d in 0..=degree_bound {
        let cands = monomials_up_to(tower, d);
        if monomial_coeffs && tower.k() == 1 {
            if let Some(v) = mitm_search(&f, &cands, cap) {
                return Some(v);
            }
        } else if let Some(v) = plain_search(&f, &cands, cap) {
            return Some(v);
        }
    }
    None
}

fn monomials_up_to(tower: &crate::field::Tower, d: u16) -> Vec<El> {
    let nv = tower.nvars();
    let mut exps = vec![vec![0u16; nv]];
    for v in 0..nv {
        let mut next = Vec::new();
        for e in exps {
            for add in 0..=d {
                let used: u16 = e.iter().sum();
                if used + add <= d {
                    let mut e2 = e.clone();
                    e2[v] = add;
                    next.push(e2);
                }
            }
        }
        exps = next;
    }
    exps.sort_by_key(|e| (e.iter().map(|&x| x as u32).sum::<u32>(), e.clone()));
    exps.iter()
        .map(|e| {
            let exps_i: Vec<i32> = e.iter().map(|&x| x as i32).collect();
            tower.monomial(&exps_i)
        })
        .collect()
}

/// Exponent vector of a Laurent monomial element (coefficient ignored; F2).
fn laurent_exps(e: &El) -> Vec<i32> {
    let (nm, _) = e.num.terms.iter().next().unwrap();
    let (dm, _) = e.den.terms.iter().next().unwrap();
    nm.iter().zip(dm).map(|(a, b)| *a as i32 - *b as i32).collect()
}

fn hash_exps(exps: &[i32]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &e in exps {
        h ^= (e as u64).wrapping_add(0x9e3779b97f4a7c15);
        h = h.wrapping_mul(0x100000001b3);
        h ^= h >> 29;
    }
    h
}

/// Meet-in-the-middle: coordinates are grouped by block/diag entry; each
/// half's terms are combined by a XOR multiset hash. Matching halves are
/// verified exactly.
fn mitm_search(f: &QuadForm, cands: &[El], cap: usize) -> Option<Vec<El>> {
    let tower = &f.tower;
    let n = f.dim();
    let r = f.blocks.len();
    // groups of coordinates: each block is one group, each diag entry one
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..r {
        groups.push(vec![2 * i, 2 * i + 1]);
    }
    for j in 0..f.diag.len() {
        groups.push(vec![2 * r + j]);
    }
    let ncands = cands.len() + 1; // plus the zero option
    // split groups into halves with balanced candidate products
    let count = |g: &[usize]| ncands.pow(g.len() as u32) as f64;
    let mut left: Vec<usize> = Vec::new();
    let mut right: Vec<usize> = Vec::new();
    let (mut lw, mut rw) = (0f64, 0f64);
    for (gi, g) in groups.iter().enumerate() {
        if lw <= rw {
            left.push(gi);
            lw += count(g).log2();
        } else {
            right.push(gi);
            rw += count(g).log2();
        }
    }
    let coeff_exps: Vec<Vec<i32>> = f.coefficients().iter().map(laurent_exps).collect();
    let coeff_exp_of = |coord: usize| -> &Vec<i32> {
        // coefficients() lists block slots then diag
        &coeff_exps[coord]
    };

    // enumerate one half: returns (hash, assignment) pairs
    let enumerate = |side: &[usize]| -> Option<Vec<(u64, Vec<(usize, usize)>)>> {
        let coords: Vec<usize> = side.iter().flat_map(|&gi| groups[gi].clone()).collect();
        let total: usize = ncands.checked_pow(coords.len() as u32)?;
        if total > cap {
            return None;
        }
        let mut out = Vec::with_capacity(total);
        let mut counter = vec![0usize; coords.len()];
        loop {
            // hash of all terms produced by this assignment
            let mut h: u64 = 0;
            for (gi_pos, &gi) in side.iter().enumerate() {
                let _ = gi_pos;
                let g = &groups[gi];
                if g.len() == 2 {
                    // block: terms a x^2, x y, b y^2
                    let (cx, cy) = (g[0], g[1]);
                    let ix = counter[coords.iter().position(|&c| c == cx).unwrap()];
                    let iy = counter[coords.iter().position(|&c| c == cy).unwrap()];
                    if ix > 0 {
                        let mx = laurent_exps(&cands[ix - 1]);
                        let mut e = coeff_exp_of(cx).clone();
                        for (a, b) in e.iter_mut().zip(&mx) {
                            *a += 2 * b;
                        }
                        h ^= hash_exps(&e);
                    }
                    if iy > 0 {
                        let my = laurent_exps(&cands[iy - 1]);
                        let mut e = coeff_exp_of(cy).clone();
                        for (a, b) in e.iter_mut().zip(&my) {
                            *a += 2 * b;
                        }
                        h ^= hash_exps(&e);
                    }
                    if ix > 0 && iy > 0 {
                        let mx = laurent_exps(&cands[ix - 1]);
                        let my = laurent_exps(&cands[iy - 1]);
                        let e: Vec<i32> = mx.iter().zip(&my).map(|(a, b)| a + b).collect();
                        h ^= hash_exps(&e);
                    }
                } else {
                    let cz = g[0];
                    let iz = counter[coords.iter().position(|&c| c == cz).unwrap()];
                    if iz > 0 {
                        let mz = laurent_exps(&cands[iz - 1]);
                        let mut e = coeff_exp_of(cz).clone();
                        for (a, b) in e.iter_mut().zip(&mz) {
                            *a += 2 * b;
                        }
                        h ^= hash_exps(&e);
                    }
                }
            }
            out.push((h, coords.iter().cloned().zip(counter.iter().cloned()).collect()));
            // increment counter
            let mut pos = 0;
            loop {
                if pos == counter.len() {
                    return Some(out);
                }
                counter[pos] += 1;
                if counter[pos] < ncands {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
        }
    };

    let lefts = enumerate(&left)?;
    let rights = enumerate(&right)?;
    let mut table: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, (h, _)) in lefts.iter().enumerate() {
        table.entry(*h).or_default().push(i);
    }
    for (h, rassign) in &rights {
        if let Some(lidxs) = table.get(h) {
            for &li in lidxs {
                let (_, lassign) = &lefts[li];
                let mut v = vec![tower.zero(); n];
                let mut nonzero = false;
                for (coord, ci) in lassign.iter().chain(rassign.iter()) {
                    if *ci > 0 {
                        v[*coord] = cands[*ci - 1].clone();
                        nonzero = true;
                    }
                }
                if nonzero && f.verify_isotropic_vector(&v) {
                    return Some(v);
                }
            }
        }
    }
    None
}

/// Direct enumeration with base-field coefficients; capped.
fn plain_search(f: &QuadForm, cands: &[El], cap: usize) -> Option<Vec<El>> {
    let tower = &f.tower;
    let n = f.dim();
    let k = tower.k();
    let scalars: Vec<Gf> = Gf::all(k).filter(|c| !c.is_zero()).collect();
    let per_coord = 1 + cands.len() * scalars.len();
    let mut total: usize = 1;
    for _ in 0..n {
        total = total.saturating_mul(per_coord);
        if total > cap {
            return None;
        }
    }
    let mut counter = vec![0usize; n];
    loop {
        let mut v = vec![tower.zero(); n];
        let mut nonzero = false;
        for (i, &ci) in counter.iter().enumerate() {
            if ci > 0 {
                let m = &cands[(ci - 1) / scalars.len()];
                let c = scalars[(ci - 1) % scalars.len()];
                v[i] = m * &tower.constant(c);
                nonzero = true;
            }
        }
        if nonzero && f.eval(&v).is_zero() {
            return Some(v);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return None;
            }
            counter[pos] += 1;
            if counter[pos] < per_coord {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
    }
}
