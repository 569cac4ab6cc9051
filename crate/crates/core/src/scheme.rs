//! Group association schemes.
//!
//! Vertex `x` and vertex `y` are in relation `R_i` when `y x^-1` lies in the
//! scheme class `C_i`. The adjacency matrix `A_i` has `A_i[y][x] = 1` exactly
//! then, so `A_i` is the sum of the left-regular permutation matrices of the
//! elements of `C_i` and `A_i |e> = sum_{beta in C_i} |beta>`.
//!
//! A scheme class is either a conjugacy class or, after symmetrization, the
//! union of a non-real class with its inverse. Likewise each primitive
//! idempotent corresponds to one irreducible character or to a pair of complex
//! conjugate characters.
//!
//! The scheme keeps the relation table (which class every pair belongs to)
//! and produces adjacency matrices and idempotents on demand.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chartab::{character_table, count_intersections, CharacterTable, IntersectionTensor};
use crate::error::{Error, Result};
use crate::groups::{ClassSet, Group};
use crate::linalg::{max_abs, max_abs_diff, normal_eigenvalues, sqrt, CMatrix};
use crate::tol;

/// A 0/1 matrix stored row-major as bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    data: Vec<u8>,
}

impl Adjacency {
    pub fn zeros(n: usize) -> Self {
        Adjacency {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.data[row * self.n + col] = value;
    }

    /// Toggles one entry between 0 and 1.
    pub fn flip(&mut self, row: usize, col: usize) {
        let v = self.get(row, col);
        self.set(row, col, 1 - v.min(1));
    }

    pub fn transpose(&self) -> Self {
        let mut t = Adjacency::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn row_sum(&self, row: usize) -> usize {
        self.data[row * self.n..(row + 1) * self.n]
            .iter()
            .map(|&v| v as usize)
            .sum()
    }

    pub fn col_sum(&self, col: usize) -> usize {
        (0..self.n).map(|r| self.get(r, col) as usize).sum()
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |r, c| Complex64::new(self.get(r, c) as f64, 0.0))
    }

    /// Positions of the ones in each column.
    fn columns(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|c| (0..self.n).filter(|&r| self.get(r, c) != 0).collect())
            .collect()
    }
}

/// The association scheme of a finite group, optionally symmetrized.
#[derive(Debug, Clone)]
pub struct GroupScheme {
    group: Group,
    base: ClassSet,
    characters: CharacterTable,
    /// scheme class -> conjugacy classes it contains
    parts: Vec<Vec<usize>>,
    /// scheme class -> elements, ascending
    members: Vec<Vec<usize>>,
    /// element -> scheme class
    class_of: Vec<usize>,
    /// idempotent -> character rows it contains
    spectral: Vec<Vec<usize>>,
    valencies: Vec<usize>,
    inverse: Vec<usize>,
    intersection: IntersectionTensor,
    p: CMatrix,
    q: CMatrix,
    multiplicities: Vec<usize>,
    symmetric: bool,
    symmetrized: bool,
}

impl GroupScheme {
    /// Builds the scheme of `group` with the default character-table seed.
    pub fn new(group: Group) -> Result<Self> {
        Self::with_seed(group, 0)
    }

    /// Builds the scheme; `seed` drives the random combination used by the
    /// character-table solver.
    pub fn with_seed(group: Group, seed: u64) -> Result<Self> {
        let base = group.conjugacy_classes();
        let tensor = crate::chartab::intersection_numbers(&group, &base);
        let characters = character_table(&tensor, seed)?;
        let parts = (0..base.len()).map(|i| vec![i]).collect();
        let spectral = (0..characters.len()).map(|k| vec![k]).collect();
        Ok(Self::assemble(group, base, characters, parts, spectral, false))
    }

    /// Builds the scheme from an externally supplied character table whose
    /// columns follow the class order of `group.conjugacy_classes()`.
    pub fn from_characters(group: Group, characters: CharacterTable) -> Result<Self> {
        let base = group.conjugacy_classes();
        if characters.len() != base.len() || characters.group_order() != group.order() {
            return Err(Error::InvalidParameter(format!(
                "character table has {} rows for {} classes",
                characters.len(),
                base.len()
            )));
        }
        let parts = (0..base.len()).map(|i| vec![i]).collect();
        let spectral = (0..characters.len()).map(|k| vec![k]).collect();
        Ok(Self::assemble(group, base, characters, parts, spectral, false))
    }

    fn assemble(
        group: Group,
        base: ClassSet,
        characters: CharacterTable,
        parts: Vec<Vec<usize>>,
        spectral: Vec<Vec<usize>>,
        symmetrized: bool,
    ) -> Self {
        let n = group.order();
        let d1 = parts.len();
        let mut class_of = vec![0usize; n];
        let mut members = Vec::with_capacity(d1);
        for (c, part) in parts.iter().enumerate() {
            let mut m: Vec<usize> = part.iter().flat_map(|&i| base.class(i).iter().copied()).collect();
            m.sort_unstable();
            for &x in &m {
                class_of[x] = c;
            }
            members.push(m);
        }
        let valencies: Vec<usize> = members.iter().map(Vec::len).collect();
        let inverse: Vec<usize> = members.iter().map(|m| class_of[group.inv(m[0])]).collect();
        let symmetric = inverse.iter().enumerate().all(|(i, &j)| i == j);
        let intersection = count_intersections(&group, &class_of, &members);

        let p = CMatrix::from_fn(d1, d1, |r, c| {
            let k = spectral[r][0];
            let d = characters.degree(k) as f64;
            parts[c]
                .iter()
                .map(|&l| characters.value(k, l) * (base.size(l) as f64 / d))
                .sum()
        });
        let q = CMatrix::from_fn(d1, d1, |c, r| {
            let l = parts[c][0];
            spectral[r]
                .iter()
                .map(|&k| characters.value(k, l).conj() * characters.degree(k) as f64)
                .sum()
        });
        let multiplicities = spectral
            .iter()
            .map(|rows| rows.iter().map(|&k| characters.degree(k).pow(2)).sum())
            .collect();
        GroupScheme {
            group,
            base,
            characters,
            parts,
            members,
            class_of,
            spectral,
            valencies,
            inverse,
            intersection,
            p,
            q,
            multiplicities,
            symmetric,
            symmetrized,
        }
    }

    /// Merges every non-real class with its inverse and every complex
    /// character with its conjugate. A symmetric scheme is returned unchanged.
    pub fn symmetrize(&self) -> GroupScheme {
        if self.symmetric {
            return self.clone();
        }
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.base.len() {
            let j = self.base.inverse_class(i);
            if j >= i {
                parts.push(if j == i { vec![i] } else { vec![i, j] });
            }
        }
        let mut spectral: Vec<Vec<usize>> = Vec::new();
        for k in 0..self.characters.len() {
            let j = self.characters.conj_pair(k);
            if j >= k {
                spectral.push(if j == k { vec![k] } else { vec![k, j] });
            }
        }
        Self::assemble(
            self.group.clone(),
            self.base.clone(),
            self.characters.clone(),
            parts,
            spectral,
            true,
        )
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Number of vertices `N = |G|`.
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Number of relations `d + 1`.
    pub fn num_classes(&self) -> usize {
        self.parts.len()
    }

    /// Conjugacy classes of the underlying group (before any merging).
    pub fn base_classes(&self) -> &ClassSet {
        &self.base
    }

    pub fn characters(&self) -> &CharacterTable {
        &self.characters
    }

    pub fn intersection(&self) -> &IntersectionTensor {
        &self.intersection
    }

    /// Conjugacy classes merged into scheme class `i`.
    pub fn parts(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    /// Elements of scheme class `i`, ascending.
    pub fn class_members(&self, i: usize) -> &[usize] {
        &self.members[i]
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// Character rows merged into idempotent `k`.
    pub fn spectral_rows(&self, k: usize) -> &[usize] {
        &self.spectral[k]
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valencies
    }

    pub fn valency(&self, i: usize) -> usize {
        self.valencies[i]
    }

    pub fn inverse_class(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `P[k][i]`: eigenvalue of `A_i` on the `k`-th idempotent.
    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    /// `Q[i][k]`, with `PQ = N I`.
    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// True when this scheme came out of [`GroupScheme::symmetrize`] with at
    /// least one merge.
    pub fn is_symmetrized(&self) -> bool {
        self.symmetrized
    }

    /// Number of real conjugacy classes of the underlying group.
    pub fn real_class_count(&self) -> usize {
        (0..self.base.len()).filter(|&i| self.base.is_real(i)).count()
    }

    /// Index of the relation containing the pair `(x, y)`.
    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.class_of[self.group.mul(y, self.group.inv(x))]
    }

    /// Adjacency matrix `A_i`.
    pub fn adjacency(&self, i: usize) -> Adjacency {
        let n = self.order();
        let mut a = Adjacency::zeros(n);
        for x in 0..n {
            for &g in &self.members[i] {
                a.set(self.group.mul(g, x), x, 1);
            }
        }
        a
    }

    pub fn adjacency_matrices(&self) -> Vec<Adjacency> {
        (0..self.num_classes()).map(|i| self.adjacency(i)).collect()
    }

    /// Primitive idempotent `E_k = (1/N) sum_j Q[j][k] A_j`.
    pub fn idempotent(&self, k: usize) -> CMatrix {
        let n = self.order();
        let scale = 1.0 / n as f64;
        CMatrix::from_fn(n, n, |y, x| self.q[(self.relation(x, y), k)] * scale)
    }

    /// `sum_i c_i A_i` as a dense matrix.
    pub fn combination(&self, coefficients: &[f64]) -> CMatrix {
        let n = self.order();
        CMatrix::from_fn(n, n, |y, x| {
            Complex64::new(coefficients[self.relation(x, y)], 0.0)
        })
    }

    /// Strata of the reference vertex `o`.
    pub fn stratify(&self, o: usize) -> Result<Stratification> {
        let n = self.order();
        if o >= n {
            return Err(Error::IndexOutOfRange { index: o, limit: n });
        }
        let d1 = self.num_classes();
        let mut strata = vec![Vec::new(); d1];
        for beta in 0..n {
            strata[self.relation(o, beta)].push(beta);
        }
        let vectors: Vec<Vec<Complex64>> = strata
            .iter()
            .map(|s| {
                let w = 1.0 / sqrt(s.len() as f64);
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                for &b in s {
                    v[b] = Complex64::new(w, 0.0);
                }
                v
            })
            .collect();
        let strat = Stratification {
            reference: o,
            strata,
            vectors,
        };
        let residual = (0..d1)
            .map(|i| strat.lift_residual(&self.adjacency(i), i))
            .fold(0.0, f64::max);
        if residual > 1e-12 {
            return Err(Error::NumericalFailure(format!(
                "A_i |phi_0> differs from sqrt(kappa_i) |phi_i> by {residual:e}"
            )));
        }
        Ok(strat)
    }

    /// Runs every algebraic invariant on the scheme's own adjacency matrices.
    pub fn bose_mesner_check(&self) -> BoseMesnerReport {
        self.bose_mesner_check_with(&self.adjacency_matrices())
    }

    /// Runs every algebraic invariant on the given adjacency matrices, with
    /// intersection numbers, `P` and `Q` taken from the scheme.
    pub fn bose_mesner_check_with(&self, adjacency: &[Adjacency]) -> BoseMesnerReport {
        let n = self.order();
        let d1 = self.num_classes();
        assert_eq!(adjacency.len(), d1, "one adjacency matrix per class expected");
        let nf = n as f64;
        let mut report = BoseMesnerReport::default();

        // A_0 = I, sum A_i = J, row and column sums.
        for r in 0..n {
            for c in 0..n {
                let want0 = u8::from(r == c);
                report.identity = report.identity.max((adjacency[0].get(r, c) as f64 - want0 as f64).abs());
                let total: usize = adjacency.iter().map(|a| a.get(r, c) as usize).sum();
                report.all_ones = report.all_ones.max((total as f64 - 1.0).abs());
            }
        }
        for (i, a) in adjacency.iter().enumerate() {
            let k = self.valencies[i] as f64;
            for r in 0..n {
                report.valency = report.valency.max((a.row_sum(r) as f64 - k).abs());
                report.valency = report.valency.max((a.col_sum(r) as f64 - k).abs());
            }
            if self.symmetric {
                let t = a.transpose();
                let diff = a.data.iter().zip(&t.data).filter(|(x, y)| x != y).count();
                report.symmetry = report.symmetry.max(f64::from(u8::from(diff > 0)));
            }
        }

        // A_i A_j = sum_k p^k_ij A_k, in integers.
        let columns: Vec<Vec<Vec<usize>>> = adjacency.iter().map(Adjacency::columns).collect();
        let mut product = vec![0i64; n * n];
        for i in 0..d1 {
            for j in 0..d1 {
                product.iter_mut().for_each(|v| *v = 0);
                for x in 0..n {
                    for &z in &columns[j][x] {
                        for &y in &columns[i][z] {
                            product[y * n + x] += 1;
                        }
                    }
                }
                for y in 0..n {
                    for x in 0..n {
                        let expected: i64 = (0..d1)
                            .map(|k| self.intersection.get(k, i, j) as i64 * adjacency[k].get(y, x) as i64)
                            .sum();
                        let diff = (product[y * n + x] - expected).abs() as f64;
                        report.algebra = report.algebra.max(diff);
                    }
                }
            }
        }

        // PQ = QP = N I.
        let eye = CMatrix::identity(d1, d1) * Complex64::new(nf, 0.0);
        report.pq = max_abs_diff(&(&self.p * &self.q), &eye);
        report.qp = max_abs_diff(&(&self.q * &self.p), &eye);

        // Idempotents built from the given adjacency matrices.
        let dense: Vec<CMatrix> = adjacency.iter().map(Adjacency::to_matrix).collect();
        let idempotents: Vec<CMatrix> = (0..d1)
            .map(|k| {
                let mut e = CMatrix::zeros(n, n);
                for (j, a) in dense.iter().enumerate() {
                    e += a * (self.q[(j, k)] / nf);
                }
                e
            })
            .collect();
        let zero = CMatrix::zeros(n, n);
        for a in 0..d1 {
            for b in a..d1 {
                let prod = &idempotents[a] * &idempotents[b];
                let want = if a == b { &idempotents[a] } else { &zero };
                report.idempotent = report.idempotent.max(max_abs_diff(&prod, want));
            }
        }
        let mut sum = CMatrix::zeros(n, n);
        for e in &idempotents {
            sum += e;
        }
        report.completeness = max_abs_diff(&sum, &CMatrix::identity(n, n));
        let j_over_n = CMatrix::from_element(n, n, Complex64::new(1.0 / nf, 0.0));
        report.e0 = max_abs_diff(&idempotents[0], &j_over_n);

        // A_i E_k = P[k][i] E_k.
        for (i, a) in dense.iter().enumerate() {
            for (k, e) in idempotents.iter().enumerate() {
                let lhs = a * e;
                let rhs = e * self.p[(k, i)];
                report.eigen = report.eigen.max(max_abs_diff(&lhs, &rhs));
            }
        }

        // m_k = tr E_k = sum of d^2 over the merged characters.
        for (k, e) in idempotents.iter().enumerate() {
            let tr = e.trace();
            let m = self.multiplicities[k] as f64;
            report.multiplicity = report.multiplicity.max((tr - m).norm());
        }
        report
    }

    /// Largest distance between the spectrum of `A_i` and the values
    /// `P[k][i]` repeated `m_k` times.
    pub fn eigenvalue_check(&self, i: usize) -> f64 {
        let computed = normal_eigenvalues(&self.adjacency(i).to_matrix());
        let mut expected = Vec::with_capacity(self.order());
        for k in 0..self.num_classes() {
            for _ in 0..self.multiplicities[k] {
                expected.push(self.p[(k, i)]);
            }
        }
        let mut used = vec![false; computed.len()];
        let mut worst: f64 = 0.0;
        for want in expected {
            let (best, dist) = computed
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, z)| (j, (z - want).norm()))
                .fold((usize::MAX, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
            if best == usize::MAX {
                return f64::INFINITY;
            }
            used[best] = true;
            worst = worst.max(dist);
        }
        worst
    }

    /// Edge list of the union of the given relations.
    ///
    /// Real classes give undirected edges (listed once, smaller vertex first);
    /// any non-real class makes the whole graph directed. Relation 0 yields
    /// self-loops and marks the graph degenerate.
    pub fn export_graph(&self, relations: &[usize]) -> Result<GraphExport> {
        let d1 = self.num_classes();
        if let Some(&bad) = relations.iter().find(|&&i| i >= d1) {
            return Err(Error::IndexOutOfRange { index: bad, limit: d1 });
        }
        if relations.is_empty() {
            return Err(Error::InvalidParameter("no relation selected".into()));
        }
        let directed = relations.iter().any(|&i| self.inverse[i] != i);
        let degenerate = relations.contains(&0);
        let n = self.order();
        let mut edges = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if !directed && y < x {
                    continue;
                }
                if relations.contains(&self.relation(x, y)) {
                    edges.push((x, y));
                }
            }
        }
        Ok(GraphExport {
            labels: self.group.labels().to_vec(),
            edges,
            directed,
            degenerate,
        })
    }

    /// Maximum of `|f|` over all entries of `P` that should be real for a
    /// symmetric scheme.
    pub fn p_imaginary_residue(&self) -> f64 {
        self.p.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }

    /// Largest entry of `|A_i - A_i^T|` over all classes; zero for symmetric
    /// schemes.
    pub fn asymmetry(&self) -> f64 {
        (0..self.num_classes())
            .map(|i| {
                let a = self.adjacency(i).to_matrix();
                max_abs(&(&a - a.transpose()))
            })
            .fold(0.0, f64::max)
    }
}

/// Per-invariant maximum residuals from [`GroupScheme::bose_mesner_check`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoseMesnerReport {
    /// `|A_0 - I|`
    pub identity: f64,
    /// `|sum_i A_i - J|`
    pub all_ones: f64,
    /// Row and column sums against the valencies.
    pub valency: f64,
    /// 1 if some `A_i` of a symmetric scheme is not symmetric.
    pub symmetry: f64,
    /// Integer defect of `A_i A_j = sum_k p^k_ij A_k`.
    pub algebra: f64,
    pub pq: f64,
    pub qp: f64,
    /// `E_i E_j = delta_ij E_i`
    pub idempotent: f64,
    /// `sum_k E_k = I`
    pub completeness: f64,
    /// `E_0 = J / N`
    pub e0: f64,
    /// `A_i E_k = P[k][i] E_k`
    pub eigen: f64,
    /// `tr E_k = m_k`
    pub multiplicity: f64,
}

impl BoseMesnerReport {
    /// `(name, residual, tolerance)` for every invariant.
    pub fn entries(&self) -> [(&'static str, f64, f64); 12] {
        let t = tol::ORTHOGONALITY;
        [
            ("A_0 = I", self.identity, 0.0),
            ("sum A_i = J", self.all_ones, 0.0),
            ("row/column sums", self.valency, 0.0),
            ("symmetry", self.symmetry, 0.0),
            ("A_i A_j expansion", self.algebra, 0.0),
            ("PQ = N I", self.pq, t),
            ("QP = N I", self.qp, t),
            ("E_i E_j = delta E_i", self.idempotent, t),
            ("sum E_k = I", self.completeness, t),
            ("E_0 = J/N", self.e0, t),
            ("A_i E_k = P_ki E_k", self.eigen, t),
            ("tr E_k = m_k", self.multiplicity, t),
        ]
    }

    pub fn passes(&self) -> bool {
        self.entries().iter().all(|(_, r, t)| r <= t)
    }

    /// Names of the invariants whose residual exceeds tolerance.
    pub fn failures(&self) -> Vec<&'static str> {
        self.entries()
            .iter()
            .filter(|(_, r, t)| r > t)
            .map(|(name, _, _)| *name)
            .collect()
    }
}

/// Strata `Gamma_i(o)` of a reference vertex and their unit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Stratification {
    reference: usize,
    strata: Vec<Vec<usize>>,
    vectors: Vec<Vec<Complex64>>,
}

impl Stratification {
    pub fn reference(&self) -> usize {
        self.reference
    }

    pub fn strata(&self) -> &[Vec<usize>] {
        &self.strata
    }

    pub fn stratum(&self, i: usize) -> &[usize] {
        &self.strata[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    /// `|phi_i>`
    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.vectors[i]
    }

    /// Largest deviation of the Gram matrix of the `|phi_i>` from identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, u) in self.vectors.iter().enumerate() {
            for (b, v) in self.vectors.iter().enumerate() {
                let dot: Complex64 = u.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).norm());
            }
        }
        worst
    }

    /// `|A_i |phi_0> - sqrt(kappa_i) |phi_i>|_max`
    pub fn lift_residual(&self, a: &Adjacency, i: usize) -> f64 {
        let o = self.reference;
        let k = sqrt(self.strata[i].len() as f64);
        (0..a.dim())
            .map(|y| (Complex64::new(a.get(y, o) as f64, 0.0) - self.vectors[i][y] * k).norm())
            .fold(0.0, f64::max)
    }
}

/// Vertex and edge lists of an underlying network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphExport {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub directed: bool,
    /// Set when the diagonal relation was included.
    pub degenerate: bool,
}

impl GraphExport {
    /// Degree of every vertex, counting an undirected edge at both ends and a
    /// directed edge at its source.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.labels.len()];
        for &(x, y) in &self.edges {
            deg[x] += 1;
            if !self.directed && x != y {
                deg[y] += 1;
            }
        }
        deg
    }
}
