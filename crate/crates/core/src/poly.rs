//! Exact polynomials with per-variable degree at most two.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bitset::{ElemSet, MAX_ELEMENTS};
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::Rational;

/// Exponent vector with entries in `{0, 1, 2}`: `lin` marks exponent 1, `sq` exponent 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    lin: u32,
    sq: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { lin: 0, sq: 0 };

    pub fn new(lin: ElemSet, sq: ElemSet) -> Self {
        debug_assert!(lin.intersection(sq).is_empty());
        Monomial {
            lin: lin.bits(),
            sq: sq.bits(),
        }
    }

    /// The square-free monomial `x^S`.
    pub fn from_set(s: ElemSet) -> Self {
        Monomial {
            lin: s.bits(),
            sq: 0,
        }
    }

    pub fn var(i: usize) -> Self {
        Self::from_set(ElemSet::singleton(i))
    }

    pub fn linear_part(self) -> ElemSet {
        ElemSet::from_bits(self.lin)
    }

    pub fn squared_part(self) -> ElemSet {
        ElemSet::from_bits(self.sq)
    }

    pub fn support(self) -> ElemSet {
        ElemSet::from_bits(self.lin | self.sq)
    }

    pub fn exponent(self, i: usize) -> u32 {
        let bit = 1u32 << (i - 1);
        if self.sq & bit != 0 {
            2
        } else if self.lin & bit != 0 {
            1
        } else {
            0
        }
    }

    pub fn degree(self) -> usize {
        (self.lin.count_ones() + 2 * self.sq.count_ones()) as usize
    }

    pub fn is_square_free(self) -> bool {
        self.sq == 0
    }

    /// Product, or `None` when some exponent would exceed two.
    pub fn mul(self, other: Monomial) -> Option<Monomial> {
        if self.sq & other.support().bits() != 0 || other.sq & self.lin != 0 {
            return None;
        }
        let both = self.lin & other.lin;
        Some(Monomial {
            lin: (self.lin ^ other.lin),
            sq: self.sq | other.sq | both,
        })
    }

    /// Exponent-vector comparison, first variable most significant.
    pub fn lex_cmp(self, other: Monomial, n: usize) -> Ordering {
        for i in 1..=n {
            match self.exponent(i).cmp(&other.exponent(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn render(self) -> String {
        let mut parts = Vec::new();
        for i in self.support().iter() {
            match self.exponent(i) {
                1 => parts.push(format!("x{i}")),
                k => parts.push(format!("x{i}^{k}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Polynomial in `x1..xn` with exact rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoundedPoly {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl BoundedPoly {
    pub fn zero(n: usize) -> Self {
        BoundedPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::ONE, c);
        p
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::var(i), Rational::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(n: usize, terms: I) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_multi_affine(&self) -> bool {
        self.terms.keys().all(|m| m.is_square_free())
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    /// Variables occurring in some term.
    pub fn support(&self) -> ElemSet {
        self.terms
            .keys()
            .fold(ElemSet::EMPTY, |acc, m| acc.union(m.support()))
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn add(&self, other: &BoundedPoly) -> BoundedPoly {
        let mut out = self.clone();
        out.n = self.n.max(other.n);
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BoundedPoly) -> BoundedPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> BoundedPoly {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        BoundedPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a * c))
                .collect(),
        }
    }

    pub fn multiply(&self, other: &BoundedPoly) -> Result<BoundedPoly> {
        let mut out = Self::zero(self.n.max(other.n));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(*mb).ok_or(Error::DegreeOverflow)?;
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn derivative(&self, i: usize) -> BoundedPoly {
        let bit = ElemSet::singleton(i);
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            match m.exponent(i) {
                0 => {}
                1 => out.add_term(
                    Monomial::new(m.linear_part().difference(bit), m.squared_part()),
                    c.clone(),
                ),
                _ => out.add_term(
                    Monomial::new(m.linear_part().union(bit), m.squared_part().difference(bit)),
                    c * Rational::from_integer(2.into()),
                ),
            }
        }
        out
    }

    /// Coefficient extraction in `x_i`: the polynomial multiplying `x_i^k`.
    pub fn coefficient_of(&self, i: usize, k: u32) -> BoundedPoly {
        let bit = ElemSet::singleton(i);
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.exponent(i) == k {
                out.add_term(
                    Monomial::new(m.linear_part().difference(bit), m.squared_part().difference(bit)),
                    c.clone(),
                );
            }
        }
        out
    }

    /// Substitutes the constant `value` for `x_i`.
    pub fn substitute(&self, i: usize, value: &Rational) -> BoundedPoly {
        let bit = ElemSet::singleton(i);
        let sq = value * value;
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let rest = Monomial::new(m.linear_part().difference(bit), m.squared_part().difference(bit));
            match m.exponent(i) {
                0 => out.add_term(rest, c.clone()),
                1 => out.add_term(rest, c * value),
                _ => out.add_term(rest, c * &sq),
            }
        }
        out
    }

    /// Renames variables; `map[i - 1]` is the new index of `x_i`.
    pub fn relabel(&self, map: &[usize]) -> BoundedPoly {
        BoundedPoly::from_terms(
            self.n,
            self.terms.iter().map(|(m, c)| {
                (
                    Monomial::new(m.linear_part().map(map), m.squared_part().map(map)),
                    c.clone(),
                )
            }),
        )
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in m.support().iter() {
                let x = &point[i - 1];
                t *= x;
                if m.exponent(i) == 2 {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    pub fn evaluate_float(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for i in m.support().iter() {
                    t *= point[i - 1].powi(m.exponent(i) as i32);
                }
                t
            })
            .sum()
    }

    /// `f = x_i x_j A + x_i B + x_j C + D` with `A, B, C, D` free of `x_i, x_j`.
    pub fn split_pair(&self, i: usize, j: usize) -> [BoundedPoly; 4] {
        let with_i = self.coefficient_of(i, 1);
        let without_i = self.coefficient_of(i, 0);
        [
            with_i.coefficient_of(j, 1),
            with_i.coefficient_of(j, 0),
            without_i.coefficient_of(j, 1),
            without_i.coefficient_of(j, 0),
        ]
    }

    /// `∂_i f ∂_j f - ∂_i ∂_j f · f` via `B·C - A·D`.
    pub fn rayleigh_diff(&self, i: usize, j: usize) -> Result<BoundedPoly> {
        self.scaled_rayleigh_diff(i, j, &Rational::one())
    }

    /// `B·C - c·A·D`: the Rayleigh difference with the product term weighted by `c`.
    pub fn scaled_rayleigh_diff(&self, i: usize, j: usize, c: &Rational) -> Result<BoundedPoly> {
        self.check_pair(i, j)?;
        let [a, b, cc, d] = self.split_pair(i, j);
        Ok(b.multiply(&cc)?.sub(&a.multiply(&d)?.scale(c)))
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i == j || i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(Error::InvalidArgument(format!(
                "pair ({i},{j}) must be two distinct variables in 1..={}",
                self.n
            )));
        }
        if !self.is_multi_affine() {
            return Err(Error::InvalidArgument(
                "Rayleigh difference needs a multi-affine polynomial".into(),
            ));
        }
        Ok(())
    }

    /// Terms sorted by degree descending, then exponent vector descending.
    pub fn sorted_terms(&self) -> Vec<(Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|(a, _), (b, _)| {
            b.degree()
                .cmp(&a.degree())
                .then_with(|| b.lex_cmp(*a, self.n))
        });
        v
    }

    /// One `<coeff> : <monomial>` line per term, in [`sorted_terms`](Self::sorted_terms) order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.sorted_terms() {
            out.push_str(&format!("{} : {}\n", c, m.render()));
        }
        out
    }
}

impl fmt::Debug for BoundedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| format!("({c})*{}", m.render()))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Sum of `x^B` over the bases `B`.
pub fn basis_poly(m: &Matroid) -> BoundedPoly {
    BoundedPoly::from_terms(
        m.n(),
        m.bases()
            .iter()
            .map(|b| (Monomial::from_set(*b), Rational::one())),
    )
}

/// Probability measure on the subsets of `{1..=n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    n: usize,
    weights: BTreeMap<ElemSet, Rational>,
}

impl Measure {
    pub fn new<I: IntoIterator<Item = (ElemSet, Rational)>>(n: usize, weights: I) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        let full = ElemSet::full(n);
        let mut map: BTreeMap<ElemSet, Rational> = BTreeMap::new();
        for (s, w) in weights {
            if !s.is_subset(full) {
                return Err(Error::InvalidMeasure(format!("{s} outside ground set")));
            }
            if w.is_negative() {
                return Err(Error::InvalidMeasure(format!("negative weight on {s}")));
            }
            *map.entry(s).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        let total: Rational = map.values().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(Measure { n, weights: map })
    }

    pub fn uniform_on_bases(m: &Matroid) -> Measure {
        let w = Rational::new(1.into(), (m.num_bases() as i64).into());
        Measure {
            n: m.n(),
            weights: m.bases().iter().map(|b| (*b, w.clone())).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, s: ElemSet) -> Rational {
        self.weights.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (ElemSet, &Rational)> + '_ {
        self.weights.iter().map(|(s, w)| (*s, w))
    }
}

pub fn generating_poly(mu: &Measure) -> BoundedPoly {
    BoundedPoly::from_terms(
        mu.n,
        mu.weights
            .iter()
            .map(|(s, w)| (Monomial::from_set(*s), w.clone())),
    )
}

pub fn measure_from_poly(f: &BoundedPoly) -> Result<Measure> {
    if !f.is_multi_affine() {
        return Err(Error::NotAProbabilityPolynomial("not multi-affine".into()));
    }
    if !f.has_nonnegative_coefficients() {
        return Err(Error::NotAProbabilityPolynomial("negative coefficient".into()));
    }
    Measure::new(
        f.n,
        f.terms().map(|(m, c)| (m.linear_part(), c.clone())),
    )
    .map_err(|e| Error::NotAProbabilityPolynomial(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::uniform;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn mono(lin: &[usize], sq: &[usize]) -> Monomial {
        Monomial::new(
            ElemSet::from_elems(lin.iter().copied()),
            ElemSet::from_elems(sq.iter().copied()),
        )
    }

    #[test]
    fn small_basis_polys() {
        let p = basis_poly(&uniform(2, 3).unwrap());
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.dump(), "1 : x1 x2\n1 : x1 x3\n1 : x2 x3\n");
        let ones = vec![q(1, 1); 4];
        assert_eq!(basis_poly(&uniform(2, 4).unwrap()).evaluate(&ones), q(6, 1));
    }

    #[test]
    fn calculus() {
        let f = BoundedPoly::from_terms(
            3,
            [(mono(&[1, 2], &[]), q(1, 1)), (mono(&[2, 3], &[]), q(1, 1))],
        );
        let d = f.derivative(2);
        assert_eq!(d, BoundedPoly::var(3, 1).add(&BoundedPoly::var(3, 3)));
        let s = BoundedPoly::var(2, 1).add(&BoundedPoly::var(2, 2));
        let sq = s.multiply(&s).unwrap();
        assert_eq!(sq.dump(), "1 : x1^2\n2 : x1 x2\n1 : x2^2\n");
        assert_eq!(sq.multiply(&s), Err(Error::DegreeOverflow));
        assert_eq!(sq.derivative(1).coefficient(mono(&[1], &[])), q(2, 1));
        assert_eq!(sq.evaluate(&[q(1, 2), q(1, 3)]), q(25, 36));
    }

    #[test]
    fn rayleigh_difference_of_u24() {
        let f = basis_poly(&uniform(2, 4).unwrap());
        let d = f.rayleigh_diff(1, 2).unwrap();
        assert_eq!(d.dump(), "1 : x3^2\n1 : x3 x4\n1 : x4^2\n");
        let single = basis_poly(&uniform(2, 2).unwrap());
        assert!(single.rayleigh_diff(1, 2).unwrap().is_zero());
        assert!(f.rayleigh_diff(1, 1).is_err());
    }

    #[test]
    fn measures() {
        let m = uniform(1, 2).unwrap();
        let mu = Measure::uniform_on_bases(&m);
        let g = generating_poly(&mu);
        assert_eq!(g.dump(), "1/2 : x1\n1/2 : x2\n");
        assert_eq!(measure_from_poly(&g).unwrap(), mu);
        let bad = BoundedPoly::var(2, 1).add(&BoundedPoly::var(2, 2));
        assert!(matches!(
            measure_from_poly(&bad),
            Err(Error::NotAProbabilityPolynomial(_))
        ));
    }
}
