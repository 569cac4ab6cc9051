//! Intersection numbers and character tables.
//!
//! The class sums `C_0 .. C_d` span the center of the group algebra and
//! multiply as `C_i C_j = sum_k p^k_ij C_k`. Left multiplication by `C_i` is
//! the matrix `(M_i)_kj = p^k_ij`. All `M_i` commute, and their common
//! eigenvectors are the central idempotents, one per irreducible character.
//! Reading off the eigenvalue `kappa_i chi(alpha_i) / chi(1)` of every `M_i`
//! recovers the full character table.
//!
//! In the basis `C_k / sqrt(kappa_k)` (orthonormal for the trace form) the
//! adjoint of `M_i` is `M_{i*}`, so a random real combination of the
//! Hermitian parts `M_i + M_i^H` and `i (M_i - M_i^H)` is a Hermitian matrix
//! whose eigenvectors separate every character.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{ClassSet, Group};
use crate::linalg::{hermitian_eigen, round, sqrt, CMatrix};
use crate::tol;

/// Extra seeds tried after the first when the random combination has
/// colliding eigenvalues.
pub const MAX_RESEEDS: u64 = 8;

/// Structure constants `p^k_ij` of the class-sum algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTensor {
    dim: usize,
    p: Vec<u64>,
    valencies: Vec<usize>,
}

impl IntersectionTensor {
    /// Builds a tensor from explicit values indexed `[k][i][j]`.
    pub fn from_fn<F: Fn(usize, usize, usize) -> u64>(valencies: Vec<usize>, f: F) -> Self {
        let dim = valencies.len();
        let mut p = vec![0; dim * dim * dim];
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    p[(k * dim + i) * dim + j] = f(k, i, j);
                }
            }
        }
        IntersectionTensor { dim, p, valencies }
    }

    /// Number of classes `d + 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `p^k_ij`
    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> u64 {
        self.p[(k * self.dim + i) * self.dim + j]
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valencies
    }

    /// Group order, the sum of the valencies.
    pub fn order(&self) -> usize {
        self.valencies.iter().sum()
    }
}

/// Counts `p^k_ij = |{gamma : gamma in C_i, beta gamma^-1 in C_j}|` for a
/// representative `beta` of `C_k`.
///
/// For classes with more than one element the count is repeated with a second
/// representative; a mismatch means the table is not a group and panics.
pub fn intersection_numbers(group: &Group, classes: &ClassSet) -> IntersectionTensor {
    count_intersections(group, classes.class_lookup(), classes.classes())
}

/// Intersection numbers for any partition of the group into unions of
/// conjugacy classes (`class_of` maps elements to parts).
pub(crate) fn count_intersections(
    group: &Group,
    class_of: &[usize],
    members: &[Vec<usize>],
) -> IntersectionTensor {
    let dim = members.len();
    let count = |beta: usize| {
        let mut row = vec![0u64; dim * dim];
        for gamma in 0..group.order() {
            let i = class_of[gamma];
            let j = class_of[group.mul(beta, group.inv(gamma))];
            row[i * dim + j] += 1;
        }
        row
    };
    let mut p = Vec::with_capacity(dim * dim * dim);
    for (k, part) in members.iter().enumerate() {
        let row = count(part[0]);
        if part.len() > 1 {
            assert_eq!(
                row,
                count(part[part.len() - 1]),
                "intersection numbers depend on the representative of class {k}"
            );
        }
        p.extend(row);
    }
    IntersectionTensor {
        dim,
        p,
        valencies: members.iter().map(Vec::len).collect(),
    }
}

/// Irreducible characters evaluated on class representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    dim: usize,
    order: usize,
    chi: Vec<Complex64>,
    degrees: Vec<usize>,
    conj_pair: Vec<usize>,
    seed: u64,
}

impl CharacterTable {
    /// Wraps an explicit table (rows = characters, columns = classes). Degrees
    /// are read from column 0 and rounded; conjugate rows are paired by value.
    pub fn from_rows(order: usize, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("character table must be square".into()));
        }
        let mut degrees = Vec::with_capacity(dim);
        for r in &rows {
            let d = r[0].re;
            if (d - round(d)).abs() > tol::DEGREE_ROUNDING || round(d) < 1.0 {
                return Err(Error::NumericalFailure(format!("degree {d} is not a positive integer")));
            }
            degrees.push(round(d) as usize);
        }
        let chi: Vec<Complex64> = rows.into_iter().flatten().collect();
        let conj_pair = pair_conjugates(dim, &chi);
        Ok(CharacterTable {
            dim,
            order,
            chi,
            degrees,
            conj_pair,
            seed: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim == 0
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    /// `chi_k(alpha_i)`
    #[inline]
    pub fn value(&self, k: usize, i: usize) -> Complex64 {
        self.chi[k * self.dim + i]
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.chi[k * self.dim..(k + 1) * self.dim]
    }

    pub fn degree(&self, k: usize) -> usize {
        self.degrees[k]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Index of the row holding the complex conjugate character.
    pub fn conj_pair(&self, k: usize) -> usize {
        self.conj_pair[k]
    }

    pub fn is_real_row(&self, k: usize) -> bool {
        self.conj_pair[k] == k
    }

    /// Seed of the random combination that produced the table.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Largest deviation from `sum_i kappa_i chi_r(a_i) conj(chi_s(a_i)) = |G| delta_rs`.
    pub fn row_orthogonality_error(&self, valencies: &[usize]) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for s in 0..self.dim {
                let sum: Complex64 = (0..self.dim)
                    .map(|i| self.value(r, i) * self.value(s, i).conj() * valencies[i] as f64)
                    .sum();
                let expect = if r == s { self.order as f64 } else { 0.0 };
                worst = worst.max((sum - expect).norm());
            }
        }
        worst
    }

    /// Largest deviation from `sum_k chi_k(a_i) conj(chi_k(a_j)) = (|G| / kappa_i) delta_ij`.
    pub fn column_orthogonality_error(&self, valencies: &[usize]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let sum: Complex64 = (0..self.dim)
                    .map(|k| self.value(k, i) * self.value(k, j).conj())
                    .sum();
                let expect = if i == j {
                    self.order as f64 / valencies[i] as f64
                } else {
                    0.0
                };
                worst = worst.max((sum - expect).norm());
            }
        }
        worst
    }
}

fn pair_conjugates(dim: usize, chi: &[Complex64]) -> Vec<usize> {
    (0..dim)
        .map(|r| {
            (0..dim)
                .find(|&s| {
                    (0..dim).all(|i| {
                        (chi[s * dim + i] - chi[r * dim + i].conj()).norm() < tol::EIGEN_MATCH
                    })
                })
                .unwrap_or(r)
        })
        .collect()
}

fn uniform_signed(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * 2.0 - 1.0
}

fn snap(x: f64) -> f64 {
    let r = round(x);
    if (x - r).abs() < 1e-11 {
        r
    } else {
        x
    }
}

/// Class matrices in the orthonormal basis `C_k / sqrt(kappa_k)`.
fn normalized_class_matrices(it: &IntersectionTensor) -> Vec<CMatrix> {
    let n = it.dim();
    let kappa = it.valencies();
    (0..n)
        .map(|l| {
            CMatrix::from_fn(n, n, |k, j| {
                let scale = sqrt(kappa[k] as f64 / kappa[j] as f64);
                Complex64::new(scale * it.get(k, l, j) as f64, 0.0)
            })
        })
        .collect()
}

/// Computes the character table by simultaneous diagonalization of the class
/// matrices.
///
/// Rows are ordered trivial character first, then by degree, then
/// lexicographically by value (real part, then imaginary part per column).
/// The random combination is drawn from `seed`; on an eigenvalue collision
/// the draw is repeated with `seed + 1`, `seed + 2`, ... up to
/// [`MAX_RESEEDS`] times.
pub fn character_table(it: &IntersectionTensor, seed: u64) -> Result<CharacterTable> {
    let n = it.dim();
    let order = it.order();
    let kappa = it.valencies();
    let mats = normalized_class_matrices(it);
    let i = Complex64::new(0.0, 1.0);

    let mut tried = Vec::new();
    for attempt in 0..=MAX_RESEEDS {
        let s = seed.wrapping_add(attempt);
        tried.push(s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut mix = CMatrix::zeros(n, n);
        for m in &mats {
            let (a, b) = (uniform_signed(&mut rng), uniform_signed(&mut rng));
            let adj = m.adjoint();
            mix += (m + &adj).scale(a) + (m - &adj) * (i * b);
        }
        let (values, vectors) = hermitian_eigen(&mix);
        let spread = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        let min_gap = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if n > 1 && min_gap < 1e-6 * spread {
            continue;
        }

        let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(n);
        for r in 0..n {
            let v = vectors.column(r).into_owned();
            let mut omega = Vec::with_capacity(n);
            for (l, m) in mats.iter().enumerate() {
                let mv = m * &v;
                let w = v.dotc(&mv);
                let residual = (mv - v.map(|z| z * w)).norm();
                if residual > tol::EIGEN_MATCH * (1.0 + kappa[l] as f64) {
                    return Err(Error::NumericalFailure(format!(
                        "class matrix {l} residual {residual:e} on eigenvector {r}"
                    )));
                }
                omega.push(w);
            }
            let norm: f64 = omega
                .iter()
                .zip(kappa)
                .map(|(w, &k)| w.norm_sqr() / k as f64)
                .sum();
            let degree = sqrt(order as f64 / norm);
            let rounded = round(degree);
            if (degree - rounded).abs() > tol::DEGREE_ROUNDING || rounded < 1.0 {
                return Err(Error::NumericalFailure(format!(
                    "character degree {degree} is not an integer"
                )));
            }
            let chi = omega
                .iter()
                .zip(kappa)
                .map(|(w, &k)| {
                    let z = w * (rounded / k as f64);
                    Complex64::new(snap(z.re), snap(z.im))
                })
                .collect();
            rows.push((rounded as usize, chi));
        }

        rows.sort_by(|(da, a), (db, b)| compare_rows(*da, a, *db, b));
        let degrees = rows.iter().map(|(d, _)| *d).collect();
        let chi: Vec<Complex64> = rows.into_iter().flat_map(|(_, r)| r).collect();
        let conj_pair = pair_conjugates(n, &chi);
        return Ok(CharacterTable {
            dim: n,
            order,
            chi,
            degrees,
            conj_pair,
            seed: s,
        });
    }
    Err(Error::DegeneracyFailure { seeds: tried })
}

fn is_trivial(degree: usize, row: &[Complex64]) -> bool {
    degree == 1 && row.iter().all(|z| (z - 1.0).norm() < tol::EIGEN_MATCH)
}

fn compare_rows(da: usize, a: &[Complex64], db: usize, b: &[Complex64]) -> Ordering {
    let key = |z: &Complex64| (round(z.re * 1e8) as i64, round(z.im * 1e8) as i64);
    is_trivial(db, b)
        .cmp(&is_trivial(da, a))
        .then(da.cmp(&db))
        .then_with(|| {
            a.iter()
                .map(key)
                .cmp(b.iter().map(key))
        })
}

/// Checks the regular-representation identity `sum_k d_k chi_k(a_i) = |G| delta_i0`.
pub fn regular_character_check(table: &CharacterTable) -> bool {
    (0..table.len()).all(|i| {
        let sum: Complex64 = (0..table.len())
            .map(|k| table.value(k, i) * table.degree(k) as f64)
            .sum();
        let expect = if i == 0 { table.group_order() as f64 } else { 0.0 };
        (sum - expect).norm() < tol::ORTHOGONALITY
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_MAX_ORDER;

    fn table_for(g: &Group) -> (ClassSet, IntersectionTensor, CharacterTable) {
        let cs = g.conjugacy_classes();
        let it = intersection_numbers(g, &cs);
        let ct = character_table(&it, 7).unwrap();
        (cs, it, ct)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn z2_tensor_and_table() {
        let g = Group::cyclic(2).unwrap();
        let (_, it, ct) = table_for(&g);
        assert_eq!(it.get(0, 1, 1), 1);
        assert_eq!(it.get(1, 0, 1), 1);
        assert_eq!(it.get(1, 1, 1), 0);
        assert_eq!(ct.row(0), &[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(ct.row(1), &[c(1.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn d8_tensor_valency_identity() {
        let g = Group::dihedral(8).unwrap();
        let (cs, it, _) = table_for(&g);
        assert_eq!(it.get(0, 1, cs.inverse_class(1)), 2);
        for i in 0..it.dim() {
            for j in 0..it.dim() {
                let expect = if j == cs.inverse_class(i) { cs.size(i) as u64 } else { 0 };
                assert_eq!(it.get(0, i, j), expect);
                let total: u64 = (0..it.dim()).map(|k| it.get(k, i, j) * cs.size(k) as u64).sum();
                assert_eq!(total, (cs.size(i) * cs.size(j)) as u64);
            }
        }
    }

    #[test]
    fn d8_character_table() {
        let g = Group::dihedral(8).unwrap();
        let (cs, it, ct) = table_for(&g);
        assert_eq!(ct.degrees(), &[1, 1, 1, 1, 2]);
        // a^2 is class 2 in D_8's class order
        assert_eq!(g.label(cs.representative(2)), "a^2");
        let at_a2: Vec<f64> = (0..5).map(|k| ct.value(k, 2).re).collect();
        assert_eq!(at_a2, vec![1.0, 1.0, 1.0, 1.0, -2.0]);
        assert!(ct.row_orthogonality_error(it.valencies()) < tol::ORTHOGONALITY);
        assert!(ct.column_orthogonality_error(it.valencies()) < tol::ORTHOGONALITY);
        assert!(regular_character_check(&ct));
        assert!((0..5).all(|k| ct.is_real_row(k)));
    }

    #[test]
    fn z3_complex_rows_pair_up() {
        let g = Group::cyclic(3).unwrap();
        let (_, _, ct) = table_for(&g);
        assert!(regular_character_check(&ct));
        assert_eq!(ct.conj_pair(0), 0);
        assert_eq!(ct.conj_pair(1), 2);
        assert_eq!(ct.conj_pair(2), 1);
        let w = crate::linalg::cis(2.0 * core::f64::consts::PI / 3.0);
        let row1 = ct.row(1);
        assert!((row1[1] - w.conj()).norm() < 1e-12 || (row1[1] - w).norm() < 1e-12);
    }

    #[test]
    fn corrupted_table_fails_regular_check() {
        let g = Group::dihedral(8).unwrap();
        let (_, _, ct) = table_for(&g);
        let mut rows: Vec<Vec<Complex64>> = (0..ct.len()).map(|k| ct.row(k).to_vec()).collect();
        rows[4][2] = -rows[4][2];
        let bad = CharacterTable::from_rows(8, rows).unwrap();
        assert!(!regular_character_check(&bad));
    }

    #[test]
    fn same_seed_same_bits() {
        let g = Group::clifford(3).unwrap();
        let (_, it, _) = table_for(&g);
        let a = character_table(&it, 99).unwrap();
        let b = character_table(&it, 99).unwrap();
        assert_eq!(a, b);
        let other = character_table(&it, 1234).unwrap();
        for k in 0..a.len() {
            for i in 0..a.len() {
                assert!((a.value(k, i) - other.value(k, i)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn product_class_counts() {
        let d8 = Group::dihedral(8).unwrap();
        let z3 = Group::cyclic(3).unwrap();
        let p = d8.direct_product(&z3, DEFAULT_MAX_ORDER).unwrap();
        let (_, _, ct) = table_for(&p);
        assert_eq!(ct.len(), 15);
        assert_eq!(ct.degrees().iter().map(|d| d * d).sum::<usize>(), 24);
    }
}
