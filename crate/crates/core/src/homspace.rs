//! Spaces of homogeneous linear maps `A → B` cut out by twisted
//! equivariance conditions, solved as exact linear systems.
//!
//! A map of shift `s` is determined by the entries `(j, k)` of its matrix with
//! `deg B_k = deg A_j + s`; those entries are the unknowns.

use std::collections::{BTreeSet, HashMap};

use crate::exactmath::{Echelon, Scalar, SparseRow, Vector};
use crate::gsalg::{Degree, GradedLinearMap, GradedSuperAlgebra};

/// One family of linear constraints on a map `f: A → B`.
#[derive(Debug, Clone, Copy)]
pub enum Condition<'a> {
    /// `f(T(b) x) = (-1)^{γ|b|} b f(x)` where `γ` is the parity of the map's
    /// shift and `T: B → A`.
    Left(&'a GradedLinearMap),
    /// `f(x T(b)) = f(x) b`.
    Right(&'a GradedLinearMap),
}

/// Coordinates for the maps `A → B` of a fixed shift.
#[derive(Debug, Clone)]
pub struct MapCoordinates {
    shift: Degree,
    source_dim: usize,
    target_dim: usize,
    entries: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl MapCoordinates {
    pub fn new(source: &GradedSuperAlgebra, target: &GradedSuperAlgebra, shift: &Degree) -> Self {
        let mut entries = Vec::new();
        for j in 0..source.dim() {
            let d = source.degree(j) + shift;
            for k in target.indices_of_degree(&d) {
                entries.push((j, k));
            }
        }
        let index = entries.iter().enumerate().map(|(v, &e)| (e, v)).collect();
        MapCoordinates {
            shift: shift.clone(),
            source_dim: source.dim(),
            target_dim: target.dim(),
            entries,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn variable(&self, source: usize, target: usize) -> Option<usize> {
        self.index.get(&(source, target)).copied()
    }

    pub fn to_map(&self, coords: &[Scalar], field: crate::exactmath::Field) -> GradedLinearMap {
        let mut m = crate::exactmath::Matrix::zeros(field, self.target_dim, self.source_dim);
        for (&(j, k), c) in self.entries.iter().zip(coords) {
            m.set(k, j, c.clone());
        }
        GradedLinearMap::new(self.shift.clone(), m)
    }

    /// Coordinates of `f`; entries outside the graded support are ignored.
    pub fn from_map(&self, f: &GradedLinearMap) -> Vector {
        self.entries.iter().map(|&(j, k)| f.matrix.get(k, j).clone()).collect()
    }
}

fn push_term(row: &mut HashMap<usize, Scalar>, var: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let field = c.field();
    let e = row.entry(var).or_insert_with(|| field.zero());
    *e = &*e + &c;
}

fn finish(row: HashMap<usize, Scalar>) -> SparseRow {
    let mut r: SparseRow = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    r.sort_by_key(|(v, _)| *v);
    r
}

/// Echelon form of all constraints on maps of the given coordinates.
pub fn constraint_echelon(
    source: &GradedSuperAlgebra,
    target: &GradedSuperAlgebra,
    coords: &MapCoordinates,
    conditions: &[Condition<'_>],
) -> Echelon {
    let field = source.field();
    let gamma = coords.shift.parity;
    let mut ech = Echelon::new(field, coords.len());
    if coords.is_empty() {
        return ech;
    }
    for cond in conditions {
        let (twist, left) = match cond {
            Condition::Left(t) => (*t, true),
            Condition::Right(t) => (*t, false),
        };
        for b in 0..target.dim() {
            let tb = twist.image_of_basis(b);
            if crate::exactmath::is_zero_vector(&tb) {
                continue;
            }
            let sign = if left { field.sign(gamma * target.parity(b)) } else { field.one() };
            for j in 0..source.dim() {
                let moved = if left {
                    source.multiply(&tb, &source.basis(j))
                } else {
                    source.multiply(&source.basis(j), &tb)
                };
                // Row per target coordinate l:
                //   Σ_k moved_k f[k,l] − sign Σ_m f[j,m] (b·e_m or e_m·b)_l = 0
                let mut rows: HashMap<usize, HashMap<usize, Scalar>> = HashMap::new();
                for (k, c) in moved.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for l in 0..target.dim() {
                        if let Some(v) = coords.variable(k, l) {
                            push_term(rows.entry(l).or_default(), v, c.clone());
                        }
                    }
                }
                for m in 0..target.dim() {
                    let Some(v) = coords.variable(j, m) else { continue };
                    let prod = if left {
                        target.product_of_basis(b, m)
                    } else {
                        target.product_of_basis(m, b)
                    };
                    for (l, c) in prod {
                        push_term(rows.entry(*l).or_default(), v, -(&sign * c));
                    }
                }
                let mut keys: Vec<usize> = rows.keys().copied().collect();
                keys.sort_unstable();
                for l in keys {
                    let row = finish(rows.remove(&l).unwrap());
                    if !row.is_empty() {
                        ech.insert_sparse(&row);
                    }
                }
            }
        }
    }
    ech
}

/// Basis of the space of shift-`shift` maps `A → B` satisfying every condition.
pub fn equivariant_maps(
    source: &GradedSuperAlgebra,
    target: &GradedSuperAlgebra,
    shift: &Degree,
    conditions: &[Condition<'_>],
) -> Vec<GradedLinearMap> {
    let coords = MapCoordinates::new(source, target, shift);
    let ech = constraint_echelon(source, target, &coords, conditions);
    ech.kernel_basis().iter().map(|k| coords.to_map(k, source.field())).collect()
}

/// Dimension of the space returned by [`equivariant_maps`].
pub fn equivariant_dimension(
    source: &GradedSuperAlgebra,
    target: &GradedSuperAlgebra,
    shift: &Degree,
    conditions: &[Condition<'_>],
) -> usize {
    let coords = MapCoordinates::new(source, target, shift);
    coords.len() - constraint_echelon(source, target, &coords, conditions).rank()
}

/// Every shift for which a nonzero map `A → B` can exist.
pub fn possible_shifts(source: &GradedSuperAlgebra, target: &GradedSuperAlgebra) -> Vec<Degree> {
    let mut out = BTreeSet::new();
    for ds in source.distinct_degrees() {
        for dt in target.distinct_degrees() {
            out.insert(&dt - &ds);
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{Field, Matrix};

    fn dual_numbers() -> GradedSuperAlgebra {
        let q = Field::Rational;
        GradedSuperAlgebra::new(
            q,
            1,
            vec!["1".into(), "x".into()],
            vec![Degree::scalar(0, 0), Degree::scalar(1, 0)],
            [(0, 0, 0, q.one()), (0, 1, 1, q.one()), (1, 0, 1, q.one())],
            vec![q.one(), q.zero()],
        )
        .unwrap()
    }

    #[test]
    fn unconstrained_space_counts_graded_entries() {
        let a = dual_numbers();
        let shifts = possible_shifts(&a, &a);
        assert_eq!(shifts, vec![Degree::scalar(-1, 0), Degree::scalar(0, 0), Degree::scalar(1, 0)]);
        assert_eq!(equivariant_dimension(&a, &a, &Degree::scalar(0, 0), &[]), 2);
        assert_eq!(equivariant_dimension(&a, &a, &Degree::scalar(1, 0), &[]), 1);
    }

    #[test]
    fn left_module_endomorphisms_are_right_multiplications() {
        let a = dual_numbers();
        let id = GradedLinearMap::identity(&a);
        // End_A(A) ≅ A: degree 0 → {1}, degree 1 → {ρ_x}.
        for (shift, expected) in [(Degree::scalar(0, 0), 1), (Degree::scalar(1, 0), 1), (Degree::scalar(-1, 0), 0)] {
            let maps = equivariant_maps(&a, &a, &shift, &[Condition::Left(&id)]);
            assert_eq!(maps.len(), expected, "shift {shift}");
        }
        let maps = equivariant_maps(&a, &a, &Degree::scalar(0, 0), &[Condition::Left(&id), Condition::Right(&id)]);
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].matrix, Matrix::identity(Field::Rational, 2));
    }
}
