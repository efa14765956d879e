//! Sum-of-squares certificates: Gram matrices found by a log-barrier method in floating point,
//! then rationalized and checked exactly.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, ToPrimitive, Zero};

use super::search::approximate;
use super::verdict::GramCertificate;
use crate::poly::BoundedPoly;
use crate::Rational;

/// Exponent vector packed four bits per variable.
type Packed = u64;

fn pack(exps: &[u8]) -> Packed {
    exps.iter()
        .enumerate()
        .fold(0, |acc, (i, &e)| acc | ((e as u64) << (4 * i)))
}

fn unpack(p: Packed, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((p >> (4 * i)) & 0xF) as u8).collect()
}

fn exp_of(p: Packed, i: usize) -> u8 {
    ((p >> (4 * i)) & 0xF) as u8
}

fn packed_degree(p: Packed, n: usize) -> usize {
    (0..n).map(|i| exp_of(p, i) as usize).sum()
}

/// Largest Gram dimension attempted.
pub const MAX_BASIS: usize = 60;
/// Largest number of free Gram parameters attempted.
pub const MAX_FREE: usize = 900;

const DENOMINATORS: [i64; 9] = [1, 2, 6, 12, 60, 840, 10_000, 1_000_000, 1_000_000_000];

/// Target polynomial in packed form, optionally after `x_i -> y_i^2`.
fn packed_target(p: &BoundedPoly, squared: bool) -> BTreeMap<Packed, Rational> {
    let n = p.n();
    p.terms()
        .map(|(m, c)| {
            let exps: Vec<u8> = (1..=n)
                .map(|i| m.exponent(i) as u8 * if squared { 2 } else { 1 })
                .collect();
            (pack(&exps), c.clone())
        })
        .collect()
}

/// All exponent vectors with entries `0..=cap[i]` and total degree in `lo..=hi`.
fn candidate_basis(caps: &[u8], lo: usize, hi: usize) -> Vec<Packed> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; caps.len()];
    fn rec(i: usize, deg: usize, caps: &[u8], lo: usize, hi: usize, cur: &mut Vec<u8>, out: &mut Vec<Packed>) {
        if deg > hi {
            return;
        }
        if i == caps.len() {
            if deg >= lo {
                out.push(pack(cur));
            }
            return;
        }
        for e in 0..=caps[i] {
            cur[i] = e;
            rec(i + 1, deg + e as usize, caps, lo, hi, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, 0, caps, lo, hi, &mut cur, &mut out);
    out
}

/// Drops monomials whose square cannot occur: `2m` absent from the target and not the sum of two
/// distinct basis members. Their diagonal Gram entry is forced to zero, hence their whole row.
fn prune(mut basis: Vec<Packed>, target: &BTreeMap<Packed, Rational>) -> Vec<Packed> {
    loop {
        let mut sums: HashMap<Packed, usize> = HashMap::new();
        for (k, &a) in basis.iter().enumerate() {
            for &b in &basis[k + 1..] {
                *sums.entry(a + b).or_default() += 1;
            }
        }
        let before = basis.len();
        basis.retain(|&m| target.contains_key(&(2 * m)) || sums.contains_key(&(2 * m)));
        if basis.len() == before {
            return basis;
        }
    }
}

/// Entries of the Gram matrix sharing one product monomial.
struct Group {
    coeff: Rational,
    entries: Vec<(usize, usize)>,
    pivot: usize,
}

fn weight(k: usize, l: usize) -> i64 {
    if k == l {
        1
    } else {
        2
    }
}

struct Problem {
    n: usize,
    basis: Vec<Packed>,
    groups: Vec<Group>,
}

impl Problem {
    fn new(n: usize, basis: Vec<Packed>, target: BTreeMap<Packed, Rational>) -> Option<Self> {
        let mut by_product: BTreeMap<Packed, Vec<(usize, usize)>> = BTreeMap::new();
        for k in 0..basis.len() {
            for l in k..basis.len() {
                by_product
                    .entry(basis[k] + basis[l])
                    .or_default()
                    .push((k, l));
            }
        }
        if target.keys().any(|m| !by_product.contains_key(m)) {
            return None;
        }
        let groups = by_product
            .into_iter()
            .map(|(m, entries)| {
                let pivot = entries.iter().position(|&(k, l)| k == l).unwrap_or(0);
                Group {
                    coeff: target.get(&m).cloned().unwrap_or_else(Rational::zero),
                    entries,
                    pivot,
                }
            })
            .collect();
        Some(Problem {
            n,
            basis,
            groups,
        })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn free_count(&self) -> usize {
        self.groups.iter().map(|g| g.entries.len() - 1).sum()
    }

    /// Gram matrix with each group's coefficient shared equally by weight.
    fn equal_share(&self) -> Vec<Vec<Rational>> {
        let d = self.dim();
        let mut q = vec![vec![Rational::zero(); d]; d];
        for g in &self.groups {
            let total: i64 = g.entries.iter().map(|&(k, l)| weight(k, l)).sum();
            let share = &g.coeff / Rational::from_integer(total.into());
            for &(k, l) in &g.entries {
                q[k][l] = share.clone();
                q[l][k] = share.clone();
            }
        }
        q
    }

    /// Completes free entries exactly: each pivot absorbs its group's remaining coefficient.
    fn complete(&self, free: &[Rational]) -> Vec<Vec<Rational>> {
        let d = self.dim();
        let mut q = vec![vec![Rational::zero(); d]; d];
        let mut it = free.iter();
        for g in &self.groups {
            let mut rest = g.coeff.clone();
            for (idx, &(k, l)) in g.entries.iter().enumerate() {
                if idx == g.pivot {
                    continue;
                }
                let v = it.next().expect("free value").clone();
                rest -= &v * Rational::from_integer(weight(k, l).into());
                q[k][l] = v.clone();
                q[l][k] = v;
            }
            let (k, l) = g.entries[g.pivot];
            let v = rest / Rational::from_integer(weight(k, l).into());
            q[k][l] = v.clone();
            q[l][k] = v;
        }
        q
    }

    fn certificate(&self, matrix: Vec<Vec<Rational>>, squared: bool) -> GramCertificate {
        GramCertificate {
            basis: self.basis.iter().map(|&b| unpack(b, self.n)).collect(),
            matrix,
            squared,
        }
    }
}

/// Exact positive semidefiniteness by symmetric Gaussian elimination.
pub fn is_psd_exact(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    for k in 0..n {
        if a[k][k].is_negative() {
            return false;
        }
        if a[k][k].is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero() || !a[j][k].is_zero()) {
                return false;
            }
            continue;
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let sub = &f * &a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    true
}

/// Expands `mᵀ Q m` back into a polynomial over `x` (undoing the squaring when set).
pub fn gram_polynomial(cert: &GramCertificate, n: usize) -> Option<BoundedPoly> {
    let mut acc: BTreeMap<Vec<u8>, Rational> = BTreeMap::new();
    let d = cert.basis.len();
    for k in 0..d {
        for l in 0..d {
            let c = &cert.matrix[k][l];
            if c.is_zero() {
                continue;
            }
            let e: Vec<u8> = cert.basis[k]
                .iter()
                .zip(&cert.basis[l])
                .map(|(a, b)| a + b)
                .collect();
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
    }
    let mut p = BoundedPoly::zero(n);
    for (e, c) in acc {
        if c.is_zero() {
            continue;
        }
        let exps: Vec<u8> = if cert.squared {
            if e.iter().any(|x| x % 2 == 1) {
                return None;
            }
            e.iter().map(|x| x / 2).collect()
        } else {
            e
        };
        p.add_term(super::verdict::basis_monomial(&exps)?, c);
    }
    Some(p)
}

/// Exact check that `cert` is symmetric PSD and reproduces `p`.
pub fn verify_certificate(cert: &GramCertificate, p: &BoundedPoly) -> bool {
    let d = cert.basis.len();
    let symmetric = cert.matrix.len() == d
        && (0..d).all(|k| cert.matrix[k].len() == d && (0..k).all(|l| cert.matrix[k][l] == cert.matrix[l][k]));
    symmetric && is_psd_exact(&cert.matrix) && gram_polynomial(cert, p.n()).as_ref() == Some(p)
}

/// Gram certificate over multi-affine monomials with `p = mᵀ Q m`.
pub fn sos_certificate(p: &BoundedPoly) -> Option<GramCertificate> {
    solve(p, false)
}

/// Gram certificate for `p(y_1^2, ..., y_n^2)`; proves `p >= 0` on the nonnegative orthant.
pub fn sos_certificate_squared(p: &BoundedPoly) -> Option<GramCertificate> {
    solve(p, true)
}

fn solve(p: &BoundedPoly, squared: bool) -> Option<GramCertificate> {
    let n = p.n();
    if p.is_zero() {
        return Some(GramCertificate {
            basis: vec![vec![0; n]],
            matrix: vec![vec![Rational::zero()]],
            squared,
        });
    }
    let target = packed_target(p, squared);
    let mut caps = vec![0u8; n];
    for &m in target.keys() {
        for (i, cap) in caps.iter_mut().enumerate() {
            *cap = (*cap).max(exp_of(m, i) / 2);
        }
    }
    let degs: Vec<usize> = target.keys().map(|&m| packed_degree(m, n)).collect();
    let lo = degs.iter().min().copied().unwrap_or(0).div_ceil(2);
    let hi = degs.iter().max().copied().unwrap_or(0) / 2;
    let basis = prune(candidate_basis(&caps, lo, hi), &target);
    if basis.is_empty() || basis.len() > MAX_BASIS {
        return None;
    }
    let problem = Problem::new(n, basis, target)?;

    let share = problem.equal_share();
    if is_psd_exact(&share) {
        return Some(problem.certificate(share, squared));
    }
    if problem.free_count() > MAX_FREE || problem.free_count() == 0 {
        return None;
    }
    let free = barrier(&problem)?;
    for &den in &DENOMINATORS {
        let rounded: Vec<Rational> = free.iter().map(|&v| approximate(v, den)).collect();
        let q = problem.complete(&rounded);
        if is_psd_exact(&q) {
            return Some(problem.certificate(q, squared));
        }
    }
    None
}

/// Sym-unit coefficient list of one free direction: `(row, col, coefficient)`.
type Direction = Vec<(usize, usize, f64)>;

fn directions(problem: &Problem) -> (DMatrix<f64>, Vec<Direction>) {
    let d = problem.dim();
    let mut q0 = DMatrix::<f64>::zeros(d, d);
    let mut dirs = Vec::new();
    for g in &problem.groups {
        let (pk, pl) = g.entries[g.pivot];
        let pw = weight(pk, pl) as f64;
        let v = g.coeff.to_f64().unwrap_or(0.0) / pw;
        q0[(pk, pl)] = v;
        q0[(pl, pk)] = v;
        for (idx, &(k, l)) in g.entries.iter().enumerate() {
            if idx != g.pivot {
                dirs.push(vec![(k, l, 1.0), (pk, pl, -(weight(k, l) as f64) / pw)]);
            }
        }
    }
    (q0, dirs)
}

fn assemble(q0: &DMatrix<f64>, dirs: &[Direction], y: &[f64], t: f64) -> DMatrix<f64> {
    let mut f = q0.clone();
    for (dir, &yk) in dirs.iter().zip(y) {
        for &(a, b, c) in dir {
            f[(a, b)] += c * yk;
            if a != b {
                f[(b, a)] += c * yk;
            }
        }
    }
    for i in 0..f.nrows() {
        f[(i, i)] -= t;
    }
    f
}

/// `tr(W S_ab)` for the symmetric unit `S_ab`.
fn trace_unit(w: &DMatrix<f64>, a: usize, b: usize) -> f64 {
    if a == b {
        w[(a, a)]
    } else {
        2.0 * w[(a, b)]
    }
}

/// `tr(W S_ab W S_cd)`.
fn trace_pair(w: &DMatrix<f64>, a: usize, b: usize, c: usize, d: usize) -> f64 {
    let mut v = 2.0 * (w[(b, c)] * w[(a, d)] + w[(b, d)] * w[(a, c)]);
    if a == b {
        v *= 0.5;
    }
    if c == d {
        v *= 0.5;
    }
    v
}

/// Maximizes `t` subject to `Q(y) - t I ⪰ 0` along the central path; returns the free
/// parameters of the final iterate.
fn barrier(problem: &Problem) -> Option<Vec<f64>> {
    let (q0, dirs) = directions(problem);
    let k = dirs.len();
    let scale = q0.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let lmin = q0.clone().symmetric_eigen().eigenvalues.min();
    let mut y = vec![0.0; k];
    let mut t = lmin - scale;
    let mut mu = scale;
    let objective = |f: &DMatrix<f64>, t: f64, mu: f64| -> Option<f64> {
        let chol = f.clone().cholesky()?;
        let logdet: f64 = chol.l().diagonal().iter().map(|v| 2.0 * v.ln()).sum();
        Some(-t - mu * logdet)
    };
    for _outer in 0..40 {
        for _inner in 0..50 {
            let f = assemble(&q0, &dirs, &y, t);
            let chol = f.clone().cholesky()?;
            let w = chol.inverse();
            // gradient and Hessian of -t - mu log det F over (y, t)
            let mut grad = DVector::<f64>::zeros(k + 1);
            let mut hess = DMatrix::<f64>::zeros(k + 1, k + 1);
            let w2 = &w * &w;
            for (i, di) in dirs.iter().enumerate() {
                grad[i] = -mu * di.iter().map(|&(a, b, c)| c * trace_unit(&w, a, b)).sum::<f64>();
                for (j, dj) in dirs.iter().enumerate().skip(i) {
                    let mut h = 0.0;
                    for &(a, b, c1) in di {
                        for &(cc, dd, c2) in dj {
                            h += c1 * c2 * trace_pair(&w, a, b, cc, dd);
                        }
                    }
                    hess[(i, j)] = mu * h;
                    hess[(j, i)] = mu * h;
                }
                let cross = -mu * di.iter().map(|&(a, b, c)| c * trace_unit(&w2, a, b)).sum::<f64>();
                hess[(i, k)] = cross;
                hess[(k, i)] = cross;
            }
            grad[k] = -1.0 + mu * w.trace();
            hess[(k, k)] = mu * w2.trace();
            for i in 0..=k {
                hess[(i, i)] += 1e-12 * scale;
            }
            let step = match hess.clone().cholesky() {
                Some(c) => c.solve(&(-&grad)),
                None => hess.clone().lu().solve(&(-&grad))?,
            };
            let decrement = -grad.dot(&step);
            if !decrement.is_finite() {
                return None;
            }
            if decrement < 1e-9 {
                break;
            }
            let current = objective(&f, t, mu)?;
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-12 {
                let ny: Vec<f64> = (0..k).map(|i| y[i] + alpha * step[i]).collect();
                let nt = t + alpha * step[k];
                let nf = assemble(&q0, &dirs, &ny, nt);
                if let Some(val) = objective(&nf, nt, mu) {
                    if val <= current - 0.25 * alpha * decrement {
                        y = ny;
                        t = nt;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if mu < 1e-11 * scale {
            break;
        }
        mu *= 0.2;
        // a comfortable interior point rounds safely; stop early
        if t > 1e-3 * scale && mu < 1e-6 * scale {
            break;
        }
    }
    Some(y)
}
