//! Finite-group facts about permutation gates: the XOR Latin square, the XOR
//! subgroup, commuting-pair counts, and the 2×2 information-operator check.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{check_width, Permutation, QppError};
use crate::keystream::RandomSource;

/// `2^n × 2^n` table with entry `(i, j) = i ^ j`.
pub fn latin_square(width: u8) -> Result<Vec<Vec<u16>>, QppError> {
    if !(1..=8).contains(&width) {
        return Err(QppError::LatinWidth(width));
    }
    let size = 1u16 << width;
    Ok((0..size)
        .map(|i| (0..size).map(|j| i ^ j).collect())
        .collect())
}

/// Every permutation of width `width` (Heap's algorithm). Limited to `width <= 3`.
pub fn all_permutations(width: u8) -> Result<Vec<Permutation>, QppError> {
    check_width(width)?;
    if width > 3 {
        return Err(QppError::EnumerationWidth(width));
    }
    let n = 1usize << width;
    let mut map: Vec<u16> = (0..n as u16).collect();
    let mut c = vec![0usize; n];
    let mut out = vec![Permutation {
        width,
        map: map.clone(),
    }];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                map.swap(0, i);
            } else {
                map.swap(c[i], i);
            }
            out.push(Permutation {
                width,
                map: map.clone(),
            });
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(out)
}

/// Permutations with an XOR key, found by testing every permutation.
pub fn xor_permutations_exhaustive(width: u8) -> Result<Vec<Permutation>, QppError> {
    Ok(all_permutations(width)?
        .into_iter()
        .filter(|p| p.xor_key().is_some())
        .collect())
}

/// Permutations with an XOR key, found by a depth-first walk of the full
/// permutation tree that cuts every branch whose partial map already
/// disagrees with `v ^ map[0]`. Limited to `width <= 8`.
pub fn xor_permutations_pruned(width: u8) -> Result<Vec<Permutation>, QppError> {
    check_width(width)?;
    if width > 8 {
        return Err(QppError::EnumerationWidth(width));
    }
    let n = 1usize << width;
    let mut found = Vec::new();
    let mut partial = Vec::with_capacity(n);
    let mut used = vec![false; n];
    walk(width, n, &mut partial, &mut used, &mut found);
    Ok(found)
}

fn walk(
    width: u8,
    n: usize,
    partial: &mut Vec<u16>,
    used: &mut [bool],
    found: &mut Vec<Permutation>,
) {
    let pos = partial.len();
    if pos == n {
        let p = Permutation {
            width,
            map: partial.clone(),
        };
        if p.xor_key().is_some() {
            found.push(p);
        }
        return;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        if pos > 0 && cand as u16 != pos as u16 ^ partial[0] {
            continue;
        }
        used[cand] = true;
        partial.push(cand as u16);
        walk(width, n, partial, used, found);
        partial.pop();
        used[cand] = false;
    }
}

/// `(commuting ordered pairs, total ordered pairs)` over the whole group.
/// Limited to `width <= 2`.
pub fn commuting_pairs_exhaustive(width: u8) -> Result<(u64, u64), QppError> {
    if width > 2 {
        return Err(QppError::EnumerationWidth(width));
    }
    let all = all_permutations(width)?;
    let mut commuting = 0;
    for p in &all {
        for q in &all {
            if p.commutes_with(q)? {
                commuting += 1;
            }
        }
    }
    Ok((commuting, (all.len() * all.len()) as u64))
}

/// Fraction of `samples` uniformly drawn pairs of distinct permutations that commute.
pub fn sampled_commuting_frequency<R: RandomSource + ?Sized>(
    rng: &mut R,
    width: u8,
    samples: usize,
) -> Result<f64, QppError> {
    check_width(width)?;
    if samples == 0 {
        return Ok(0.0);
    }
    let mut commuting = 0usize;
    let mut drawn = 0usize;
    while drawn < samples {
        let p = Permutation::random(rng, width)?;
        let q = Permutation::random(rng, width)?;
        if p == q {
            continue;
        }
        drawn += 1;
        if p.commutes_with(&q)? {
            commuting += 1;
        }
    }
    Ok(commuting as f64 / samples as f64)
}

/// Row-major 2×2 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const XOR: Mat2 = Mat2([[0.0, 1.0], [1.0, 0.0]]);

    pub fn diag(a: f64, b: f64) -> Self {
        Mat2([[a, 0.0], [0.0, b]])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
        }))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - o.0[i][j])
        }))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

/// Diagonal operator whose eigenvalues label the two bit values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InformationOperator {
    i1: f64,
    i2: f64,
}

impl InformationOperator {
    pub fn new(i1: f64, i2: f64) -> Result<Self, QppError> {
        if i1 == i2 || !i1.is_finite() || !i2.is_finite() {
            return Err(QppError::DegenerateEigenvalues);
        }
        Ok(InformationOperator { i1, i2 })
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.i1, self.i2)
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::diag(self.i1, self.i2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FoundationsReport {
    /// `Î·X − X·Î`
    pub commutator: Mat2,
    /// Both Hadamard columns are eigenvectors of X with eigenvalues +1 and −1.
    pub hadamard_diagonalizes_xor: bool,
}

pub fn foundations_check(op: &InformationOperator) -> FoundationsReport {
    const TOL: f64 = 1e-12;
    let info = op.matrix();
    let commutator = info.mul(&Mat2::XOR).sub(&Mat2::XOR.mul(&info));

    let is_eigen = |v: [f64; 2], lambda: f64| {
        let xv = Mat2::XOR.apply(v);
        (xv[0] - lambda * v[0]).abs() < TOL && (xv[1] - lambda * v[1]).abs() < TOL
    };
    let plus = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
    let minus = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
    FoundationsReport {
        commutator,
        hadamard_diagonalizes_xor: is_eigen(plus, 1.0) && is_eigen(minus, -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latin_square_small() {
        assert_eq!(latin_square(1).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(
            latin_square(2).unwrap(),
            vec![
                vec![0, 1, 2, 3],
                vec![1, 0, 3, 2],
                vec![2, 3, 0, 1],
                vec![3, 2, 1, 0]
            ]
        );
        assert_eq!(latin_square(0), Err(QppError::LatinWidth(0)));
        assert_eq!(latin_square(9), Err(QppError::LatinWidth(9)));
    }

    #[test]
    fn latin_rows_and_columns_are_bijections() {
        for w in 1..=8u8 {
            let sq = latin_square(w).unwrap();
            let n = sq.len();
            for (i, line) in sq.iter().enumerate() {
                let row: Vec<usize> = line.iter().map(|&v| v as usize).collect();
                let col: Vec<usize> = (0..n).map(|r| sq[r][i] as usize).collect();
                assert!(Permutation::from_indices(&row).is_ok());
                assert!(Permutation::from_indices(&col).is_ok());
            }
        }
    }

    #[test]
    fn heap_enumerates_distinct_permutations() {
        for (w, count) in [(1u8, 2usize), (2, 24), (3, 40_320)] {
            let all = all_permutations(w).unwrap();
            assert_eq!(all.len(), count);
            let set: std::collections::HashSet<_> = all.iter().map(|p| p.map().to_vec()).collect();
            assert_eq!(set.len(), count);
        }
        assert!(all_permutations(4).is_err());
    }

    #[test]
    fn pruned_search_agrees_with_full_enumeration() {
        for w in 1..=3u8 {
            let mut a: Vec<_> = xor_permutations_exhaustive(w).unwrap();
            let mut b: Vec<_> = xor_permutations_pruned(w).unwrap();
            a.sort_by(|x, y| x.map().cmp(y.map()));
            b.sort_by(|x, y| x.map().cmp(y.map()));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn foundations_zero_one() {
        let r = foundations_check(&InformationOperator::new(0.0, 1.0).unwrap());
        assert_eq!(r.commutator, Mat2([[0.0, -1.0], [1.0, 0.0]]));
        assert!(r.hadamard_diagonalizes_xor);
        assert_eq!(r.commutator.max_abs(), 1.0);
    }

    #[test]
    fn degenerate_operator_rejected() {
        assert_eq!(
            InformationOperator::new(2.0, 2.0),
            Err(QppError::DegenerateEigenvalues)
        );
        assert!(InformationOperator::new(f64::NAN, 1.0).is_err());
    }
}
