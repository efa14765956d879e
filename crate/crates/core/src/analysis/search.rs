//! Seeded multi-start descent for negative values of a polynomial, with exact re-verification.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::poly::BoundedPoly;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    PositiveOrthant,
    AllReals,
}

/// Float stage acceptance threshold for candidate minima.
pub const CANDIDATE_TOLERANCE: f64 = 1e-9;

const ROUNDING_DENOMINATORS: [i64; 16] = [
    1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 32, 100, 1000, 10_000, 1_000_000, 1_000_000_000,
];

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// Exact point (all `n` coordinates) and its exact negative value.
    pub witness: Option<(Vec<Rational>, Rational)>,
    pub evaluations: u64,
    /// Smallest normalized float value seen.
    pub best_value: f64,
}

/// Float copy of a polynomial restricted to its active variables.
pub struct FloatPoly {
    dims: usize,
    coeffs: Vec<f64>,
    /// `(start, end)` into `factors` per term.
    spans: Vec<(usize, usize)>,
    factors: Vec<(usize, i32)>,
    degree: f64,
    homogeneous: bool,
}

impl FloatPoly {
    /// Compiles `p`; `vars[k]` is the original index of active coordinate `k`.
    pub fn compile(p: &BoundedPoly, vars: &[usize]) -> Self {
        let mut coeffs = Vec::new();
        let mut spans = Vec::new();
        let mut factors = Vec::new();
        for (m, c) in p.terms() {
            let start = factors.len();
            for i in m.support().iter() {
                let k = vars.iter().position(|&v| v == i).expect("active variable");
                factors.push((k, m.exponent(i) as i32));
            }
            coeffs.push(c.to_f64().unwrap_or(0.0));
            spans.push((start, factors.len()));
        }
        FloatPoly {
            dims: vars.len(),
            coeffs,
            spans,
            factors,
            degree: p.degree() as f64,
            homogeneous: p.is_homogeneous(),
        }
    }

    /// Value and gradient at `x`.
    pub fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut total = 0.0;
        let mut pows = [0.0f64; 16];
        let mut prefix = [0.0f64; 17];
        for (t, &(s, e)) in self.spans.iter().enumerate() {
            let c = self.coeffs[t];
            let len = e - s;
            prefix[0] = c;
            for (k, &(v, ex)) in self.factors[s..e].iter().enumerate() {
                pows[k] = x[v].powi(ex);
                prefix[k + 1] = prefix[k] * pows[k];
            }
            total += prefix[len];
            let mut suffix = 1.0;
            for k in (0..len).rev() {
                let (v, ex) = self.factors[s + k];
                let d = if ex == 1 { 1.0 } else { ex as f64 * x[v].powi(ex - 1) };
                grad[v] += prefix[k] * d * suffix;
                suffix *= pows[k];
            }
        }
        total
    }
}

struct Objective<'a> {
    poly: &'a FloatPoly,
    domain: Domain,
    scratch: Vec<f64>,
    x: Vec<f64>,
}

impl Objective<'_> {
    /// Normalized value and gradient with respect to the search coordinates `u`.
    fn eval(&mut self, u: &[f64], grad: &mut [f64]) -> f64 {
        let d = self.poly.dims;
        for k in 0..d {
            self.x[k] = match self.domain {
                Domain::AllReals => u[k],
                Domain::PositiveOrthant => u[k].exp(),
            };
        }
        let p = self.poly.value_grad(&self.x, &mut self.scratch);
        let sq: f64 = self.x.iter().map(|v| v * v).sum::<f64>()
            + if self.poly.homogeneous { 0.0 } else { 1.0 };
        let half = self.poly.degree / 2.0;
        let norm = sq.powf(half);
        let value = p / norm;
        for k in 0..d {
            let dx = self.scratch[k] / norm - p * self.poly.degree * self.x[k] / (norm * sq);
            grad[k] = match self.domain {
                Domain::AllReals => dx,
                Domain::PositiveOrthant => dx * self.x[k],
            };
        }
        value
    }
}

/// Nearest fraction to `x` with denominator at most `max_den`, by continued fractions.
pub fn approximate(x: f64, max_den: i64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1): (i128, i128, i128, i128) = (0, 1, 1, 0);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::from_integer(BigInt::from(sign as i128 * x.abs().round() as i128));
    }
    Rational::new(BigInt::from(sign as i128 * p1), BigInt::from(q1))
}

/// Rational points near `x`, coarsest first; orthant points stay strictly positive.
fn candidate_points(x: &[f64], domain: Domain) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for &den in &ROUNDING_DENOMINATORS {
        let pt: Vec<Rational> = x
            .iter()
            .map(|&v| {
                let r = approximate(v, den);
                if domain == Domain::PositiveOrthant && !r.is_positive() {
                    Rational::new(BigInt::one(), BigInt::from(den.max(2) * 1000))
                } else {
                    r
                }
            })
            .collect();
        if out.last() != Some(&pt) {
            out.push(pt);
        }
    }
    out
}

/// Multi-start descent on `p` over `domain`, stopping at the first exactly negative point or when
/// `budget` objective evaluations are spent.
pub fn counterexample_search(p: &BoundedPoly, domain: Domain, budget: u64, seed: u64) -> SearchOutcome {
    let n = p.n();
    let vars = p.support().to_vec();
    let mut best = f64::INFINITY;
    if vars.is_empty() {
        let value = p.coefficient(crate::poly::Monomial::ONE);
        let witness = value
            .is_negative()
            .then(|| (vec![Rational::one(); n], value.clone()));
        return SearchOutcome {
            witness,
            evaluations: 1,
            best_value: value.to_f64().unwrap_or(0.0),
        };
    }
    let fp = FloatPoly::compile(p, &vars);
    let d = vars.len();
    let mut obj = Objective {
        poly: &fp,
        domain,
        scratch: vec![0.0; d],
        x: vec![0.0; d],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evals = 0u64;
    let mut u = vec![0.0; d];
    let mut trial = vec![0.0; d];
    let mut g = vec![0.0; d];
    let mut g_trial = vec![0.0; d];

    while evals < budget {
        for uk in u.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *uk = match domain {
                Domain::AllReals => z,
                Domain::PositiveOrthant => 2.0 * z,
            };
        }
        let mut val = obj.eval(&u, &mut g);
        evals += 1;
        let mut step = 0.5;
        for _ in 0..200 {
            if evals >= budget || val < -CANDIDATE_TOLERANCE {
                break;
            }
            let gn: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gn < 1e-12 {
                break;
            }
            let mut accepted = false;
            while evals < budget && step > 1e-10 {
                for k in 0..d {
                    trial[k] = u[k] - step * g[k] / gn;
                }
                let tv = obj.eval(&trial, &mut g_trial);
                evals += 1;
                if tv < val - 1e-4 * step * gn {
                    std::mem::swap(&mut u, &mut trial);
                    std::mem::swap(&mut g, &mut g_trial);
                    val = tv;
                    step *= 2.0;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
            if domain == Domain::AllReals && fp.homogeneous {
                let norm: f64 = u.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 0.0 {
                    u.iter_mut().for_each(|v| *v /= norm);
                }
            }
        }
        best = best.min(val);
        if val < -CANDIDATE_TOLERANCE {
            let mut x: Vec<f64> = match domain {
                Domain::AllReals => u.clone(),
                Domain::PositiveOrthant => u.iter().map(|v| v.exp()).collect(),
            };
            if fp.homogeneous {
                let scale = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                if scale > 0.0 {
                    x.iter_mut().for_each(|v| *v /= scale);
                }
            }
            for cand in candidate_points(&x, domain) {
                let mut point = vec![Rational::one(); n];
                for (k, &v) in vars.iter().enumerate() {
                    point[v - 1] = cand[k].clone();
                }
                let value = p.evaluate(&point);
                if value.is_negative() {
                    return SearchOutcome {
                        witness: Some((point, value)),
                        evaluations: evals,
                        best_value: best,
                    };
                }
            }
        }
    }
    SearchOutcome {
        witness: None,
        evaluations: evals,
        best_value: best,
    }
}
