//! Brute-force Heisenberg-type Hamiltonians on `D^N` states.
//!
//! Site `i` of the network is the group element `i`. The Hamiltonian is
//!
//! ```text
//! H = sum_{l >= 1} J_l sum_{ {i,j} in R_l } lambda_i . lambda_j  +  J_0 sum_i lambda_i . lambda_i
//! ```
//!
//! with `lambda` the generalized Gell-Mann matrices (`tr(lambda_a lambda_b) = 2 delta_ab`,
//! Pauli matrices for `D = 2`) and every unordered pair counted once. Using
//! `lambda_i . lambda_j = 2 SWAP_ij - (2/D) I` and the Casimir
//! `lambda . lambda = (2D - 2/D) I`, the block on the single-excitation sector
//! of level `nu` is
//!
//! ```text
//! 2 sum_l J_l A_l + [ sum_{l>=1} J_l kappa_l (N - 2 - N/D) + J_0 (N (2D - 2/D) - 2) ] I
//! ```
//!
//! independently of `nu`. The matrix is stored column-compressed; it is built
//! from the generators, not from the swap identity, so the sector block is an
//! independent check of the formula above.
//!
//! Basis states are base-`D` digit strings with site 0 as the most significant
//! digit.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, sqrt, CMatrix};
use crate::pst::{CouplingPlan, Convention};
use crate::scheme::GroupScheme;

/// Default cap on the Hilbert-space dimension `D^N`.
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 13;

/// A sparse generator: `(row, col, value)` entries of a `D x D` matrix.
pub type Generator = Vec<(usize, usize, Complex64)>;

/// The `D^2 - 1` generalized Gell-Mann matrices: symmetric, antisymmetric,
/// then diagonal.
pub fn gell_mann(levels: usize) -> Vec<Generator> {
    let mut out = Vec::with_capacity(levels * levels - 1);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    for j in 0..levels {
        for k in j + 1..levels {
            out.push(vec![(j, k, one), (k, j, one)]);
        }
    }
    for j in 0..levels {
        for k in j + 1..levels {
            out.push(vec![(j, k, -i), (k, j, i)]);
        }
    }
    for l in 1..levels {
        let w = sqrt(2.0 / (l * (l + 1)) as f64);
        let mut g: Generator = (0..l).map(|j| (j, j, Complex64::new(w, 0.0))).collect();
        g.push((l, l, Complex64::new(-(l as f64) * w, 0.0)));
        out.push(g);
    }
    out
}

/// Dense form of a generator.
pub fn generator_matrix(levels: usize, g: &Generator) -> CMatrix {
    let mut m = CMatrix::zeros(levels, levels);
    for &(r, c, v) in g {
        m[(r, c)] += v;
    }
    m
}

/// Full Hamiltonian, column-compressed.
#[derive(Debug, Clone)]
pub struct FullHamiltonian {
    levels: usize,
    sites: usize,
    dim: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<Complex64>,
    /// Physical-form couplings the matrix was built from.
    couplings: Vec<f64>,
}

/// Builds the full Hamiltonian of a physical-form plan (amplitude-form plans
/// are halved first). Requires `D^N <= cap`.
pub fn build_full_hamiltonian(
    s: &GroupScheme,
    plan: &CouplingPlan,
    levels: usize,
    cap: usize,
) -> Result<FullHamiltonian> {
    if levels < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 levels, got {levels}")));
    }
    if !s.is_symmetric() {
        return Err(Error::InvalidParameter(
            "the Heisenberg network needs a symmetric scheme".into(),
        ));
    }
    let n = s.order();
    let dim = u32::try_from(n)
        .ok()
        .and_then(|e| levels.checked_pow(e))
        .filter(|&d| d <= cap)
        .ok_or(Error::SizeLimit {
            order: levels.checked_pow(n.min(64) as u32).unwrap_or(usize::MAX),
            limit: cap,
        })?;
    let couplings = physical_couplings(s, plan)?;

    let bonds = bond_list(s, &couplings);
    let gens = gell_mann(levels);
    let place: Vec<usize> = (0..n).map(|i| levels.pow((n - 1 - i) as u32)).collect();

    let mut col_ptr = Vec::with_capacity(dim + 1);
    let mut row_idx = Vec::new();
    let mut values = Vec::new();
    let mut column: Vec<(usize, Complex64)> = Vec::new();
    col_ptr.push(0);
    for state in 0..dim {
        column.clear();
        let digit = |site: usize| (state / place[site]) % levels;
        for &(i, j, c) in &bonds {
            let (si, sj) = (digit(i), digit(j));
            for g in &gens {
                if i == j {
                    // lambda^2 on one site
                    for &(mid, _, v) in g.iter().filter(|e| e.1 == si) {
                        for &(row, _, w) in g.iter().filter(|e| e.1 == mid) {
                            let target = state - si * place[i] + row * place[i];
                            column.push((target, w * v * c));
                        }
                    }
                    continue;
                }
                for &(ri, _, vi) in g.iter().filter(|e| e.1 == si) {
                    for &(rj, _, vj) in g.iter().filter(|e| e.1 == sj) {
                        let target = state - si * place[i] - sj * place[j] + ri * place[i] + rj * place[j];
                        column.push((target, vi * vj * c));
                    }
                }
            }
        }
        column.sort_unstable_by_key(|e| e.0);
        let mut k = 0;
        while k < column.len() {
            let row = column[k].0;
            let mut v = Complex64::new(0.0, 0.0);
            while k < column.len() && column[k].0 == row {
                v += column[k].1;
                k += 1;
            }
            if v.norm() > 1e-14 {
                row_idx.push(row);
                values.push(v);
            }
        }
        col_ptr.push(row_idx.len());
    }
    Ok(FullHamiltonian {
        levels,
        sites: n,
        dim,
        col_ptr,
        row_idx,
        values,
        couplings,
    })
}

impl FullHamiltonian {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entry `H[row][col]`.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let span = self.col_ptr[col]..self.col_ptr[col + 1];
        match self.row_idx[span.clone()].binary_search(&row) {
            Ok(k) => self.values[span.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Basis index of the state with every site at level 0 except `site`,
    /// which is at `level`.
    pub fn excitation_index(&self, site: usize, level: usize) -> usize {
        level * self.levels.pow((self.sites - 1 - site) as u32)
    }

    /// Dense copy; only sensible for small dimensions.
    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for c in 0..self.dim {
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                m[(self.row_idx[k], c)] = self.values[k];
            }
        }
        m
    }

    /// `H x`
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for (c, &xc) in x.iter().enumerate() {
            if xc == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                y[self.row_idx[k]] += self.values[k] * xc;
            }
        }
        y
    }

    /// `max |H - H^dagger|`
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..self.dim {
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                let r = self.row_idx[k];
                worst = worst.max((self.values[k] - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Largest entry of `[sum_i h_i, H]` over the diagonal generators `h`
    /// (just `sigma^z_tot` for qubits).
    pub fn conservation_error(&self) -> f64 {
        let gens = gell_mann(self.levels);
        let diagonal: Vec<Vec<f64>> = gens
            .iter()
            .filter(|g| g.iter().all(|e| e.0 == e.1))
            .map(|g| {
                let mut d = vec![0.0; self.levels];
                for &(r, _, v) in g {
                    d[r] = v.re;
                }
                d
            })
            .collect();
        let mut worst: f64 = 0.0;
        for h in &diagonal {
            let total: Vec<f64> = (0..self.dim).map(|state| self.digits(state).map(|s| h[s]).sum()).collect();
            for c in 0..self.dim {
                for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                    let r = self.row_idx[k];
                    worst = worst.max(((total[r] - total[c]) * self.values[k]).norm());
                }
            }
        }
        worst
    }

    fn digits(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.sites).map(move |i| (state / self.levels.pow((self.sites - 1 - i) as u32)) % self.levels)
    }

    /// Block of `H` on the states with one site at level `nu` and the rest at 0.
    pub fn restrict_single_excitation(&self, nu: usize) -> Result<CMatrix> {
        if nu == 0 || nu >= self.levels {
            return Err(Error::IndexOutOfRange {
                index: nu,
                limit: self.levels,
            });
        }
        let idx: Vec<usize> = (0..self.sites).map(|i| self.excitation_index(i, nu)).collect();
        Ok(CMatrix::from_fn(self.sites, self.sites, |r, c| self.get(idx[r], idx[c])))
    }

    /// `e^{-i H t} psi` by Taylor steps with `||H||_1 dt <= 1/2`.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let norm = (0..self.dim)
            .map(|c| self.values[self.col_ptr[c]..self.col_ptr[c + 1]].iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let steps = libm::ceil(2.0 * norm * t.abs()).max(1.0) as usize;
        let dt = t / steps as f64;
        let factor = Complex64::new(0.0, -dt);
        let mut state = psi.to_vec();
        for _ in 0..steps {
            let mut term = state.clone();
            let mut acc = state.clone();
            for k in 1..60 {
                let next = self.apply(&term);
                let scale = factor / k as f64;
                term = next.into_iter().map(|z| z * scale).collect();
                let size = term.iter().fold(0.0f64, |a, z| a.max(z.norm()));
                for (a, z) in acc.iter_mut().zip(&term) {
                    *a += z;
                }
                if size < 1e-18 {
                    break;
                }
            }
            state = acc;
        }
        state
    }

    /// Evolves `alpha |0...0> + beta |1_source>` for `t0` and checks that it
    /// ends as `alpha' |0...0> + beta' |1_target>` with `|beta'| = |beta|`.
    pub fn full_transfer_check(
        &self,
        alpha: Complex64,
        beta: Complex64,
        source: usize,
        target: usize,
        t0: f64,
    ) -> Result<FullTransferReport> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("|alpha|^2 + |beta|^2 = {norm}")));
        }
        for v in [source, target] {
            if v >= self.sites {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    limit: self.sites,
                });
            }
        }
        let src = self.excitation_index(source, 1);
        let dst = self.excitation_index(target, 1);
        let mut psi = vec![Complex64::new(0.0, 0.0); self.dim];
        psi[0] += alpha;
        psi[src] += beta;
        let out = self.evolve(&psi, t0);
        let alpha_out = out[0];
        let beta_out = out[dst];
        let leakage = out
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != 0 && *k != dst)
            .fold(0.0f64, |a, (_, z)| a.max(z.norm()));
        let relative_phase = if alpha.norm() > 1e-12 && beta.norm() > 1e-12 {
            Some(crate::linalg::wrap_phase((beta_out / beta).arg() - (alpha_out / alpha).arg()))
        } else {
            None
        };
        let pass = (beta_out.norm() - beta.norm()).abs() < 1e-8
            && (alpha_out.norm() - alpha.norm()).abs() < 1e-8
            && leakage < 1e-8;
        Ok(FullTransferReport {
            alpha_out,
            beta_out,
            leakage,
            relative_phase,
            pass,
        })
    }
}

/// Outcome of [`FullHamiltonian::full_transfer_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct FullTransferReport {
    pub alpha_out: Complex64,
    pub beta_out: Complex64,
    /// Largest amplitude outside the two expected basis states.
    pub leakage: f64,
    /// `arg(beta'/beta) - arg(alpha'/alpha)` when both are nonzero.
    pub relative_phase: Option<f64>,
    pub pass: bool,
}

fn physical_couplings(s: &GroupScheme, plan: &CouplingPlan) -> Result<Vec<f64>> {
    let couplings = match plan.convention {
        Convention::Physical => plan.couplings.clone(),
        Convention::Amplitude => plan.to_physical().couplings,
    };
    if couplings.len() != s.num_classes() {
        return Err(Error::InvalidParameter("plan does not match the scheme".into()));
    }
    Ok(couplings)
}

/// `(i, j, J)` with each unordered pair once; `i == j` carries the Casimir.
fn bond_list(s: &GroupScheme, couplings: &[f64]) -> Vec<(usize, usize, f64)> {
    let n = s.order();
    let mut bonds = Vec::new();
    for i in 0..n {
        for j in i..n {
            let c = couplings[s.relation(i, j)];
            if c != 0.0 {
                bonds.push((i, j, c));
            }
        }
    }
    bonds
}

/// Block of `H` on the level-`nu` single-excitation states, computed by
/// applying every generator term to those states alone. Nothing of size
/// `D^N` is formed, so any group order works. The second value is the
/// largest amplitude `H` sends outside the sector.
pub fn single_excitation_block(
    s: &GroupScheme,
    plan: &CouplingPlan,
    levels: usize,
    nu: usize,
) -> Result<(CMatrix, f64)> {
    if levels < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 levels, got {levels}")));
    }
    if nu == 0 || nu >= levels {
        return Err(Error::IndexOutOfRange { index: nu, limit: levels });
    }
    if !s.is_symmetric() {
        return Err(Error::InvalidParameter(
            "the Heisenberg network needs a symmetric scheme".into(),
        ));
    }
    let couplings = physical_couplings(s, plan)?;
    let bonds = bond_list(s, &couplings);
    let gens = gell_mann(levels);
    let n = s.order();
    let mut block = CMatrix::zeros(n, n);
    let mut leak: f64 = 0.0;
    for x in 0..n {
        // output states keyed by their sorted (site, level) pairs with level > 0
        let mut out: BTreeMap<Vec<(usize, usize)>, Complex64> = BTreeMap::new();
        let mut push = |changed: &[(usize, usize)], v: Complex64| {
            let mut key: Vec<(usize, usize)> = Vec::with_capacity(3);
            if !changed.iter().any(|&(site, _)| site == x) {
                key.push((x, nu));
            }
            key.extend(changed.iter().copied().filter(|&(_, l)| l != 0));
            key.sort_unstable();
            *out.entry(key).or_insert(Complex64::new(0.0, 0.0)) += v;
        };
        let digit = |site: usize| if site == x { nu } else { 0 };
        for &(i, j, c) in &bonds {
            let (si, sj) = (digit(i), digit(j));
            for g in &gens {
                if i == j {
                    for &(mid, _, v) in g.iter().filter(|e| e.1 == si) {
                        for &(row, _, w) in g.iter().filter(|e| e.1 == mid) {
                            push(&[(i, row)], w * v * c);
                        }
                    }
                    continue;
                }
                for &(ri, _, vi) in g.iter().filter(|e| e.1 == si) {
                    for &(rj, _, vj) in g.iter().filter(|e| e.1 == sj) {
                        push(&[(i, ri), (j, rj)], vi * vj * c);
                    }
                }
            }
        }
        for (key, v) in out {
            match key.as_slice() {
                [(site, level)] if *level == nu => block[(*site, x)] += v,
                _ => leak = leak.max(v.norm()),
            }
        }
    }
    Ok((block, leak))
}

/// Identity shift of the single-excitation block for physical couplings.
pub fn sector_shift(s: &GroupScheme, couplings: &[f64], levels: usize) -> f64 {
    let n = s.order() as f64;
    let d = levels as f64;
    let mut shift = couplings[0] * (n * (2.0 * d - 2.0 / d) - 2.0);
    for l in 1..s.num_classes() {
        shift += couplings[l] * s.valency(l) as f64 * (n - 2.0 - n / d);
    }
    shift
}

/// The single-excitation block predicted from the scheme:
/// `2 sum_l J_l A_l + sector_shift * I`.
pub fn sector_reference(s: &GroupScheme, couplings: &[f64], levels: usize) -> CMatrix {
    let doubled: Vec<f64> = couplings.iter().map(|j| 2.0 * j).collect();
    let n = s.order();
    s.combination(&doubled) + CMatrix::identity(n, n) * Complex64::new(sector_shift(s, couplings, levels), 0.0)
}

/// Identity coefficient written in the qubit and qudit closed forms:
/// `(N-4)/2 sum kappa_l J_l` for two levels, `((N-2)D - 4N)/(2D) sum kappa_l J_l`
/// otherwise.
pub fn published_shift(s: &GroupScheme, couplings: &[f64], levels: usize) -> f64 {
    let n = s.order() as f64;
    let d = levels as f64;
    let weight: f64 = (0..s.num_classes()).map(|l| couplings[l] * s.valency(l) as f64).sum();
    if levels == 2 {
        (n - 4.0) / 2.0 * weight
    } else {
        ((n - 2.0) * d - 4.0 * n) / (2.0 * d) * weight
    }
}

/// `max |restricted - reference|` for every level `nu`.
pub fn sector_residual(h: &FullHamiltonian, s: &GroupScheme) -> Result<f64> {
    let reference = sector_reference(s, h.couplings(), h.levels());
    let mut worst: f64 = 0.0;
    for nu in 1..h.levels() {
        worst = worst.max(max_abs_diff(&h.restrict_single_excitation(nu)?, &reference));
    }
    Ok(worst)
}
