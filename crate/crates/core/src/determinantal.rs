//! Determinantal representation of graphic matroids via signed incidence vectors.

use num_traits::{One, Zero};

use crate::constructions::MultiGraph;
use crate::error::{Error, Result};
use crate::Rational;

/// One integer column per edge; the matrix `Σ x_e a_e a_eᵀ` has determinant equal to the
/// basis polynomial of the cycle matroid.
///
/// Rows are the vertices other than the smallest vertex of each connected component.
pub fn determinantal_rep_graphic(g: &MultiGraph) -> Result<Vec<Vec<i64>>> {
    if let Some(e) = g.has_loop() {
        return Err(Error::LoopPresent(e));
    }
    let mut row_of = vec![None; g.vertex_count() + 1];
    let mut dim = 0;
    for comp in g.vertex_components() {
        for &v in &comp[1..] {
            row_of[v] = Some(dim);
            dim += 1;
        }
    }
    Ok(g.edges()
        .iter()
        .map(|&(a, b)| {
            let mut col = vec![0i64; dim];
            if let Some(r) = row_of[a] {
                col[r] += 1;
            }
            if let Some(r) = row_of[b] {
                col[r] -= 1;
            }
            col
        })
        .collect())
}

/// `Σ_e x_e a_e a_eᵀ` at an exact point.
pub fn weighted_gram(vectors: &[Vec<i64>], point: &[Rational]) -> Vec<Vec<Rational>> {
    let dim = vectors.first().map_or(0, |v| v.len());
    let mut m = vec![vec![Rational::zero(); dim]; dim];
    for (a, x) in vectors.iter().zip(point) {
        for r in 0..dim {
            if a[r] == 0 {
                continue;
            }
            for c in 0..dim {
                if a[c] != 0 {
                    m[r][c] += x * Rational::from_integer((a[r] * a[c]).into());
                }
            }
        }
    }
    m
}

/// Exact determinant by fraction-preserving Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = MultiGraph::new(2, vec![(1, 2)]).unwrap();
        let a = determinantal_rep_graphic(&g).unwrap();
        assert_eq!(a, vec![vec![-1]]);
        let x = Rational::new(3.into(), 7.into());
        assert_eq!(determinant(weighted_gram(&a, &[x.clone()])), x);
    }

    #[test]
    fn small_determinants() {
        let q = |a: i64| Rational::from_integer(a.into());
        assert_eq!(determinant(vec![vec![q(0), q(1)], vec![q(1), q(0)]]), q(-1));
        assert_eq!(determinant(vec![]), q(1));
        let loops = MultiGraph::new(1, vec![(1, 1)]).unwrap();
        assert_eq!(determinantal_rep_graphic(&loops), Err(Error::LoopPresent(1)));
    }
}
