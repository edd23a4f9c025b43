//! Deterministic coefficient vectors for scanning a linear space for an
//! element with an open property (nondegeneracy, invertibility).
//!
//! Order: each basis vector, the all-ones vector, then for every index subset
//! of size at least two (by size, then lexicographically) the coefficients
//! `1, 2, …, s` on the subset, then the moment curve `(1, t, t², …)` for
//! `t = 2, 3, …`.

use crate::exactmath::{Field, Scalar, Vector};

pub const DEFAULT_CANDIDATE_CAP: usize = 1000;

#[derive(Debug, Clone)]
enum Phase {
    Basis(usize),
    AllOnes,
    Subsets { size: usize, current: Vec<usize> },
    Curve(i64),
}

#[derive(Debug, Clone)]
pub struct Candidates {
    field: Field,
    dim: usize,
    phase: Phase,
}

impl Candidates {
    pub fn new(field: Field, dim: usize) -> Self {
        Candidates { field, dim, phase: Phase::Basis(0) }
    }

    fn vector(&self, coeffs: impl IntoIterator<Item = (usize, Scalar)>) -> Vector {
        let mut v = vec![self.field.zero(); self.dim];
        for (i, c) in coeffs {
            v[i] = c;
        }
        v
    }
}

fn next_combination(current: &mut [usize], n: usize) -> bool {
    let k = current.len();
    for i in (0..k).rev() {
        if current[i] < n - k + i {
            current[i] += 1;
            for j in i + 1..k {
                current[j] = current[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for Candidates {
    type Item = Vector;

    fn next(&mut self) -> Option<Vector> {
        if self.dim == 0 {
            return None;
        }
        loop {
            match &mut self.phase {
                Phase::Basis(i) => {
                    if *i < self.dim {
                        let idx = *i;
                        *i += 1;
                        return Some(self.vector([(idx, self.field.one())]));
                    }
                    if self.dim == 1 {
                        return None;
                    }
                    self.phase = Phase::AllOnes;
                }
                Phase::AllOnes => {
                    self.phase = Phase::Subsets { size: 2, current: vec![0, 1] };
                    return Some(vec![self.field.one(); self.dim]);
                }
                Phase::Subsets { size, current } => {
                    if *size > self.dim {
                        self.phase = Phase::Curve(2);
                        continue;
                    }
                    let subset = current.clone();
                    let size_now = *size;
                    if !next_combination(current, self.dim) {
                        let s = size_now + 1;
                        self.phase = Phase::Subsets { size: s, current: (0..s).collect() };
                    }
                    let f = self.field;
                    return Some(self.vector(
                        subset.into_iter().enumerate().map(|(k, i)| (i, f.from_i64(k as i64 + 1))),
                    ));
                }
                Phase::Curve(t) => {
                    let base = self.field.from_i64(*t);
                    *t += 1;
                    let mut c = self.field.one();
                    let mut v = Vec::with_capacity(self.dim);
                    for _ in 0..self.dim {
                        v.push(c.clone());
                        c = &c * &base;
                    }
                    return Some(v);
                }
            }
        }
    }
}

/// Linear combination `Σ c_i basis_i`.
pub fn combine(field: Field, len: usize, coeffs: &[Scalar], basis: &[Vector]) -> Vector {
    let mut out = vec![field.zero(); len];
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            crate::exactmath::axpy(&mut out, c, b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[Scalar]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn sequence_starts_as_documented() {
        let got: Vec<Vec<String>> = Candidates::new(Field::Rational, 3).take(9).map(|v| ints(&v)).collect();
        let want: Vec<Vec<&str>> = vec![
            vec!["1", "0", "0"],
            vec!["0", "1", "0"],
            vec!["0", "0", "1"],
            vec!["1", "1", "1"],
            vec!["1", "2", "0"],
            vec!["1", "0", "2"],
            vec!["0", "1", "2"],
            vec!["1", "2", "3"],
            vec!["1", "2", "4"],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn one_dimensional_space_has_one_candidate() {
        assert_eq!(Candidates::new(Field::Rational, 1).count(), 1);
        assert_eq!(Candidates::new(Field::Rational, 0).count(), 0);
    }
}
