//! Coupling synthesis and spectral transfer amplitudes.
//!
//! In amplitude form the single-excitation Hamiltonian is `H' = sum_i J_i A_i`
//! and, writing `Theta_k = (P J)_k`,
//!
//! ```text
//! <beta| e^{-i t H'} |e> = (1/N) sum_k e^{-i t Theta_k} Q[l][k]     (beta in C_l)
//! ```
//!
//! For a singleton target `C_m = {z}` with `z` central, `Q[m][k] = m_k e^{i theta_k}`,
//! so choosing `t0 Theta_k = theta_k - phi - 2 pi l_k` aligns every term and
//! gives `|f(t0)| = 1` with phase `phi`. Inverting with `PQ = N I` yields the
//! couplings `J = Q v / N`, `v_k = (theta_k - phi - 2 pi l_k) / t0`.
//!
//! Because the rows of `Q` sum to `N delta_i0`, the global phase `phi` only
//! moves `J_0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::DEFAULT_MAX_ORDER;
use crate::linalg::{cis, phase_distance, round, sqrt, wrap_phase};
use crate::scheme::GroupScheme;
use crate::tol;

/// Largest gauge box `(2L+1)^(d+1)` that [`search_gauge`] enumerates.
pub const MAX_SEARCH_BOX: u64 = 50_000_000;

/// Default half-width of the integer box in [`search_gauge`].
pub const DEFAULT_SEARCH_BOUND: i64 = 4;

/// Default number of samples on `[0, 2 t0]` taken by [`verify_pst`].
pub const DEFAULT_TRACE_SAMPLES: usize = 201;

/// Which Hamiltonian a coupling vector refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `H' = sum_i J_i A_i`
    Amplitude,
    /// `H = 2 sum_i J_i A_i + shift * I`, the single-excitation block of the
    /// Heisenberg network; `J_phys = J_amp / 2`.
    Physical,
}

impl Convention {
    pub fn tag(self) -> &'static str {
        match self {
            Convention::Amplitude => "amplitude",
            Convention::Physical => "physical",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "amplitude" => Some(Convention::Amplitude),
            "physical" => Some(Convention::Physical),
            _ => None,
        }
    }
}

/// Free parameters of the phase-matching condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Gauge {
    /// Phase of the transferred amplitude.
    pub phi: f64,
    /// Winding integers, one per idempotent.
    pub l: Vec<i64>,
    /// Phase targets `theta_k = arg Q[m][k]` in `[0, 2 pi)`.
    pub theta: Vec<f64>,
}

/// Coupling constants realizing transfer from the identity to class `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingPlan {
    pub couplings: Vec<f64>,
    pub t0: f64,
    pub target: usize,
    pub gauge: Gauge,
    pub convention: Convention,
}

impl CouplingPlan {
    /// Couplings of `H' = sum J_i A_i`, whatever the stored convention.
    pub fn amplitude_couplings(&self) -> Vec<f64> {
        match self.convention {
            Convention::Amplitude => self.couplings.clone(),
            Convention::Physical => self.couplings.iter().map(|j| 2.0 * j).collect(),
        }
    }

    pub fn to_physical(&self) -> CouplingPlan {
        let mut p = self.clone();
        if self.convention == Convention::Amplitude {
            p.couplings = self.couplings.iter().map(|j| j / 2.0).collect();
            p.convention = Convention::Physical;
        }
        p
    }

    pub fn to_amplitude(&self) -> CouplingPlan {
        let mut p = self.clone();
        p.couplings = self.amplitude_couplings();
        p.convention = Convention::Amplitude;
        p
    }

    /// Threshold below which a coupling counts as zero.
    pub fn zero_threshold(&self) -> f64 {
        zero_threshold(self.t0)
    }

    pub fn nonzero_count(&self) -> usize {
        let thr = self.zero_threshold();
        self.couplings.iter().filter(|j| j.abs() > thr).count()
    }

    /// Indices of the couplings above the zero threshold.
    pub fn support(&self) -> Vec<usize> {
        let thr = self.zero_threshold();
        (0..self.couplings.len())
            .filter(|&i| self.couplings[i].abs() > thr)
            .collect()
    }
}

fn zero_threshold(t0: f64) -> f64 {
    1e-9 * 2.0 * PI / t0
}

/// Where an amplitude is read off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// A single vertex (group element).
    Vertex(usize),
    /// The normalized indicator `|phi_l>` of stratum `l` of the identity.
    Class(usize),
}

/// What gauge search minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Number of nonzero couplings.
    MinNonzero,
    /// `sum_k |l_k|`.
    MinL1,
}

impl Objective {
    pub fn tag(self) -> &'static str {
        match self {
            Objective::MinNonzero => "min-nonzero",
            Objective::MinL1 => "min-l1",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "min-nonzero" => Some(Objective::MinNonzero),
            "min-l1" => Some(Objective::MinL1),
            _ => None,
        }
    }
}

/// Outcome of [`verify_pst`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    /// `(t, f(t))` at the target vertex.
    pub trace: Vec<(f64, Complex64)>,
    /// `f(t0)`
    pub amplitude: Complex64,
    /// `|f(t0)|`
    pub peak: f64,
    /// `arg f(t0)` in `[0, 2 pi)`, amplitude convention.
    pub residual_phase: f64,
    /// Transfer fidelity `|f(t0)|`.
    pub fidelity: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// `Theta_k = (P J)_k` in amplitude convention.
    pub theta: Vec<f64>,
    /// Largest `|sum_v |f_v(t)|^2 - 1|` over the sampled times.
    pub unitarity_error: f64,
}

fn check_target(s: &GroupScheme, m: usize) -> Result<()> {
    let d1 = s.num_classes();
    if m >= d1 {
        return Err(Error::IndexOutOfRange { index: m, limit: d1 });
    }
    if m == 0 {
        return Err(Error::NoPstTarget("the identity class is the source".into()));
    }
    if s.valency(m) != 1 {
        return Err(Error::NoPstTarget(format!(
            "class {m} has {} elements; a singleton central class is required",
            s.valency(m)
        )));
    }
    let z = s.class_members(m)[0];
    let g = s.group();
    if (0..g.order()).any(|x| g.mul(x, z) != g.mul(z, x)) {
        return Err(Error::NoPstTarget(format!("element {} is not central", g.label(z))));
    }
    Ok(())
}

fn check_symmetric(s: &GroupScheme) -> Result<()> {
    if s.is_symmetric() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "coupling synthesis needs a symmetric scheme; symmetrize it first".into(),
        ))
    }
}

fn check_t0(t0: f64) -> Result<()> {
    if t0.is_finite() && t0 > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t0 must be positive, got {t0}")))
    }
}

/// `theta_k = arg Q[m][k]` in `[0, 2 pi)`.
pub fn phase_targets(s: &GroupScheme, m: usize) -> Vec<f64> {
    (0..s.num_classes())
        .map(|k| wrap_phase(s.q()[(m, k)].arg()))
        .collect()
}

/// `Theta = P J` (real part; `P J` is real on symmetric schemes).
pub fn spectral_energies(s: &GroupScheme, couplings: &[f64]) -> Vec<f64> {
    let d1 = s.num_classes();
    (0..d1)
        .map(|k| (0..d1).map(|i| (s.p()[(k, i)] * couplings[i]).re).sum())
        .collect()
}

/// Solves the phase-matching condition for the given gauge.
pub fn synthesize_couplings(
    s: &GroupScheme,
    m: usize,
    t0: f64,
    phi: f64,
    l: &[i64],
) -> Result<CouplingPlan> {
    check_symmetric(s)?;
    check_target(s, m)?;
    check_t0(t0)?;
    let d1 = s.num_classes();
    if l.len() != d1 {
        return Err(Error::InvalidParameter(format!(
            "gauge vector has {} entries, expected {d1}",
            l.len()
        )));
    }
    let theta = phase_targets(s, m);
    let v: Vec<f64> = (0..d1)
        .map(|k| (theta[k] - phi - 2.0 * PI * l[k] as f64) / t0)
        .collect();
    let n = s.order() as f64;
    let mut couplings = Vec::with_capacity(d1);
    let mut max_imag: f64 = 0.0;
    for i in 0..d1 {
        let z: Complex64 = (0..d1).map(|k| s.q()[(i, k)] * v[k]).sum::<Complex64>() / n;
        max_imag = max_imag.max(z.im.abs());
        couplings.push(z.re);
    }
    if max_imag >= tol::COUPLING_IMAG {
        return Err(Error::GaugeInconsistency { max_imag });
    }
    let plan = CouplingPlan {
        couplings,
        t0,
        target: m,
        gauge: Gauge {
            phi,
            l: l.to_vec(),
            theta,
        },
        convention: Convention::Amplitude,
    };
    let residual = phase_matching_residual(s, &plan);
    if residual > tol::PHASE_MATCH {
        return Err(Error::NumericalFailure(format!(
            "phase matching violated by {residual:e}"
        )));
    }
    Ok(plan)
}

/// Largest distance on the circle between `t0 Theta_k` and `theta_k - phi`.
pub fn phase_matching_residual(s: &GroupScheme, plan: &CouplingPlan) -> f64 {
    let energies = spectral_energies(s, &plan.amplitude_couplings());
    energies
        .iter()
        .zip(&plan.gauge.theta)
        .map(|(e, th)| phase_distance(plan.t0 * e, th - plan.gauge.phi))
        .fold(0.0, f64::max)
}

/// Wraps explicit couplings (amplitude or physical) into a plan, recovering
/// the gauge from the phase-matching condition. `l` is left empty when the
/// couplings do not satisfy it.
pub fn plan_from_couplings(
    s: &GroupScheme,
    m: usize,
    t0: f64,
    couplings: Vec<f64>,
    convention: Convention,
) -> Result<CouplingPlan> {
    check_target(s, m)?;
    check_t0(t0)?;
    if couplings.len() != s.num_classes() {
        return Err(Error::InvalidParameter(format!(
            "{} couplings for {} classes",
            couplings.len(),
            s.num_classes()
        )));
    }
    let theta = phase_targets(s, m);
    let mut plan = CouplingPlan {
        couplings,
        t0,
        target: m,
        gauge: Gauge {
            phi: 0.0,
            l: Vec::new(),
            theta,
        },
        convention,
    };
    let energies = spectral_energies(s, &plan.amplitude_couplings());
    // phi from the trivial idempotent, then integers from the rest
    let phi = wrap_phase(plan.gauge.theta[0] - t0 * energies[0]);
    let raw: Vec<f64> = (0..energies.len())
        .map(|k| (plan.gauge.theta[k] - phi - t0 * energies[k]) / (2.0 * PI))
        .collect();
    plan.gauge.phi = phi;
    if raw.iter().all(|x| (x - round(*x)).abs() < 1e-7) {
        plan.gauge.l = raw.iter().map(|x| round(*x) as i64).collect();
    }
    Ok(plan)
}

/// Transition amplitude from the identity at time `t`.
pub fn evolve_amplitude(s: &GroupScheme, plan: &CouplingPlan, t: f64, target: Target) -> Complex64 {
    let energies = spectral_energies_complex(s, &plan.amplitude_couplings());
    amplitude_from_energies(s, &energies, t, target)
}

fn spectral_energies_complex(s: &GroupScheme, couplings: &[f64]) -> Vec<Complex64> {
    let d1 = s.num_classes();
    (0..d1)
        .map(|k| (0..d1).map(|i| s.p()[(k, i)] * couplings[i]).sum())
        .collect()
}

fn amplitude_from_energies(s: &GroupScheme, energies: &[Complex64], t: f64, target: Target) -> Complex64 {
    let (class, scale) = match target {
        Target::Vertex(beta) => (s.class_of(beta), 1.0),
        Target::Class(l) => (l, sqrt(s.valency(l) as f64)),
    };
    let n = s.order() as f64;
    let sum: Complex64 = energies
        .iter()
        .enumerate()
        .map(|(k, e)| (Complex64::new(0.0, -t) * e).exp() * s.q()[(class, k)])
        .sum();
    sum * (scale / n)
}

/// `(1/N) sum_k d_k |chi_k(alpha)|` for the representative `alpha` of scheme
/// class `m`: an upper bound on the amplitude reachable at that vertex.
pub fn fidelity_bound(s: &GroupScheme, m: usize) -> Result<f64> {
    if m >= s.num_classes() {
        return Err(Error::IndexOutOfRange {
            index: m,
            limit: s.num_classes(),
        });
    }
    let base = s.base_classes().class_of(s.class_members(m)[0]);
    let ch = s.characters();
    let total: f64 = (0..ch.len())
        .map(|k| ch.degree(k) as f64 * ch.value(k, base).norm())
        .sum();
    Ok(total / s.order() as f64)
}

/// Optimal fidelity towards a singleton class.
pub fn optimal_fidelity(s: &GroupScheme, m: usize) -> Result<f64> {
    if m >= s.num_classes() {
        return Err(Error::IndexOutOfRange {
            index: m,
            limit: s.num_classes(),
        });
    }
    if s.valency(m) != 1 {
        return Err(Error::NoSingletonClass(m));
    }
    fidelity_bound(s, m)
}

/// Non-identity singleton classes: the possible transfer targets.
pub fn pst_targets(s: &GroupScheme) -> Vec<usize> {
    (1..s.num_classes()).filter(|&i| s.valency(i) == 1).collect()
}

/// Samples the amplitude at the target vertex and checks `1 - |f(t0)| < tol`.
pub fn verify_pst(s: &GroupScheme, plan: &CouplingPlan, tol: f64) -> TransferReport {
    verify_pst_with(s, plan, tol, DEFAULT_TRACE_SAMPLES)
}

/// [`verify_pst`] with `samples` evenly spaced times on `[0, 2 t0]`; `t0` is
/// always one of them.
pub fn verify_pst_with(s: &GroupScheme, plan: &CouplingPlan, tol: f64, samples: usize) -> TransferReport {
    let couplings = plan.amplitude_couplings();
    let energies = spectral_energies_complex(s, &couplings);
    let z = s.class_members(plan.target)[0];
    let samples = samples.max(3) | 1;
    let half = (samples - 1) / 2;
    let mut trace = Vec::with_capacity(samples);
    let mut unitarity_error: f64 = 0.0;
    for j in 0..samples {
        let t = if j == half {
            plan.t0
        } else {
            plan.t0 * j as f64 / half as f64
        };
        trace.push((t, amplitude_from_energies(s, &energies, t, Target::Vertex(z))));
        let total: f64 = (0..s.num_classes())
            .map(|l| amplitude_from_energies(s, &energies, t, Target::Class(l)).norm_sqr())
            .sum();
        unitarity_error = unitarity_error.max((total - 1.0).abs());
    }
    let amplitude = trace[half].1;
    let peak = amplitude.norm();
    TransferReport {
        trace,
        amplitude,
        peak,
        residual_phase: wrap_phase(amplitude.arg()),
        fidelity: peak,
        tolerance: tol,
        pass: 1.0 - peak < tol,
        theta: spectral_energies(s, &couplings),
        unitarity_error,
    }
}

/// Rational multiples `p pi / q` with `q <= 8` in `[0, 2 pi)`, ascending.
pub fn phi_grid() -> Vec<f64> {
    let mut fracs: Vec<(u32, u32)> = Vec::new();
    for q in 1..=8u32 {
        for p in 0..2 * q {
            fracs.push((p, q));
        }
    }
    fracs.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    fracs.dedup_by(|a, b| a.0 * b.1 == b.0 * a.1);
    fracs.iter().map(|&(p, q)| PI * p as f64 / q as f64).collect()
}

/// Searches `phi` over [`phi_grid`] and `l` over `[-bound, bound]^(d+1)`.
///
/// For [`Objective::MinNonzero`], plans with equally many nonzero couplings
/// are ranked by `sum |J_i|`, then by the position of `phi` in the grid, then
/// by the lexicographic order of `l`. For [`Objective::MinL1`] the first
/// feasible `(l, phi)` in that order wins.
pub fn search_gauge(
    s: &GroupScheme,
    m: usize,
    t0: f64,
    objective: Objective,
    bound: i64,
) -> Result<CouplingPlan> {
    check_symmetric(s)?;
    check_target(s, m)?;
    check_t0(t0)?;
    if bound < 0 {
        return Err(Error::InvalidParameter(format!("negative search bound {bound}")));
    }
    let d1 = s.num_classes();
    let width = 2 * bound as u64 + 1;
    let size = (0..d1).try_fold(1u64, |acc, _| acc.checked_mul(width).filter(|&v| v <= MAX_SEARCH_BOX));
    if size.is_none() {
        return Err(Error::InvalidParameter(format!(
            "gauge box (2*{bound}+1)^{d1} exceeds {MAX_SEARCH_BOX} points"
        )));
    }
    let grid = phi_grid();
    match objective {
        Objective::MinL1 => search_min_l1(s, m, t0, bound, &grid),
        Objective::MinNonzero => search_min_nonzero(s, m, t0, bound, &grid),
    }
}

fn search_min_l1(s: &GroupScheme, m: usize, t0: f64, bound: i64, grid: &[f64]) -> Result<CouplingPlan> {
    let d1 = s.num_classes();
    for radius in 0..=(bound * d1 as i64) {
        let mut found: Option<CouplingPlan> = None;
        for_each_in_box(d1, bound, |l| {
            if found.is_some() || l.iter().map(|x| x.abs()).sum::<i64>() != radius {
                return;
            }
            for &phi in grid {
                if let Ok(plan) = synthesize_couplings(s, m, t0, phi, l) {
                    found = Some(plan);
                    return;
                }
            }
        });
        if let Some(plan) = found {
            return Ok(plan);
        }
    }
    Err(Error::SearchExhausted { bound })
}

fn search_min_nonzero(s: &GroupScheme, m: usize, t0: f64, bound: i64, grid: &[f64]) -> Result<CouplingPlan> {
    let d1 = s.num_classes();
    let n = s.order() as f64;
    let theta = phase_targets(s, m);
    let thr = zero_threshold(t0);
    let q: Vec<f64> = s.q().iter().map(|z| z.re).collect();
    let qi = |i: usize, k: usize| q[i + k * d1]; // column-major storage
    if s.q().iter().any(|z| z.im.abs() > tol::COUPLING_IMAG) {
        return Err(Error::GaugeInconsistency {
            max_imag: s.q().iter().fold(0.0, |a, z| a.max(z.im.abs())),
        });
    }
    // J(l, phi) = base(l) - (phi / t0) e_0
    let step = 2.0 * PI / (n * t0);
    let mut base: Vec<f64> = (0..d1)
        .map(|i| (0..d1).map(|k| qi(i, k) * (theta[k] + 2.0 * PI * bound as f64)).sum::<f64>() / (n * t0))
        .collect();
    let mut l = vec![-bound; d1];
    let mut best: Option<(usize, f64, usize, Vec<i64>)> = None;
    loop {
        let rest = base[1..].iter().filter(|j| j.abs() > thr).count();
        let rest_l1: f64 = base[1..].iter().map(|j| j.abs()).sum();
        // phi that cancels J_0, if it lies on the grid
        let target_phi = t0 * base[0];
        let (count, l1, phi_idx) = match grid.iter().position(|&p| (p - target_phi).abs() <= thr * t0) {
            Some(idx) => (rest, rest_l1, idx),
            None => (rest + 1, rest_l1 + base[0].abs(), 0),
        };
        let better = match &best {
            None => true,
            Some((c, n1, p, _)) => {
                count < *c || (count == *c && (l1 < n1 - thr || ((l1 - n1).abs() <= thr && phi_idx < *p)))
            }
        };
        if better {
            best = Some((count, l1, phi_idx, l.clone()));
        }
        // odometer over l, last coordinate fastest
        let mut k = d1;
        loop {
            if k == 0 {
                let (_, _, phi_idx, l) = best.ok_or(Error::SearchExhausted { bound })?;
                return synthesize_couplings(s, m, t0, grid[phi_idx], &l);
            }
            k -= 1;
            if l[k] < bound {
                l[k] += 1;
                for (i, b) in base.iter_mut().enumerate() {
                    *b -= step * qi(i, k);
                }
                break;
            }
            for (i, b) in base.iter_mut().enumerate() {
                *b += step * qi(i, k) * (2 * bound) as f64;
            }
            l[k] = -bound;
        }
    }
}

/// Calls `f` on every vector of `[-bound, bound]^dim`, lexicographically.
fn for_each_in_box<F: FnMut(&[i64])>(dim: usize, bound: i64, mut f: F) {
    let mut l = vec![-bound; dim];
    loop {
        f(&l);
        let mut k = dim;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if l[k] < bound {
                l[k] += 1;
                break;
            }
            l[k] = -bound;
        }
    }
}

/// Scheme of `G1 x G2`, symmetrized when either factor was.
pub fn product_scheme(s1: &GroupScheme, s2: &GroupScheme) -> Result<GroupScheme> {
    let g = s1.group().direct_product(s2.group(), DEFAULT_MAX_ORDER)?;
    let s = GroupScheme::with_seed(g, s1.characters().seed())?;
    Ok(if s1.is_symmetrized() || s2.is_symmetrized() {
        s.symmetrize()
    } else {
        s
    })
}

/// Combines plans on `G1` and `G2` into a plan on `product`, the scheme of
/// `G1 x G2` (see [`product_scheme`]). `H = H1 x I + I x H2`, so the
/// amplitude factorizes; this is checked at ten times before returning.
pub fn product_plan(
    s1: &GroupScheme,
    plan1: &CouplingPlan,
    s2: &GroupScheme,
    plan2: &CouplingPlan,
    product: &GroupScheme,
) -> Result<CouplingPlan> {
    if (plan1.t0 - plan2.t0).abs() > 1e-12 * plan1.t0.max(plan2.t0) {
        return Err(Error::IncompatiblePlans(format!(
            "transfer times differ: {} vs {}",
            plan1.t0, plan2.t0
        )));
    }
    let n2 = s2.order();
    if product.order() != s1.order() * n2 {
        return Err(Error::IncompatiblePlans("product scheme has the wrong order".into()));
    }
    let j1 = plan1.amplitude_couplings();
    let j2 = plan2.amplitude_couplings();
    let couplings: Vec<f64> = (0..product.num_classes())
        .map(|c| {
            let x = product.class_members(c)[0];
            let c1 = s1.class_of(x / n2);
            let c2 = s2.class_of(x % n2);
            let mut j = 0.0;
            if c2 == 0 {
                j += j1[c1];
            }
            if c1 == 0 {
                j += j2[c2];
            }
            j
        })
        .collect();
    let z = s1.class_members(plan1.target)[0] * n2 + s2.class_members(plan2.target)[0];
    let target = product.class_of(z);
    let t0 = plan1.t0;
    let plan = plan_from_couplings(product, target, t0, couplings, Convention::Amplitude)?;

    let z1 = s1.class_members(plan1.target)[0];
    let z2 = s2.class_members(plan2.target)[0];
    let mut worst: f64 = 0.0;
    for j in 0..10 {
        let t = t0 * (0.37 + 0.29 * j as f64);
        let f12 = evolve_amplitude(product, &plan, t, Target::Vertex(z));
        let f1 = evolve_amplitude(s1, plan1, t, Target::Vertex(z1));
        let f2 = evolve_amplitude(s2, plan2, t, Target::Vertex(z2));
        worst = worst.max((f12 - f1 * f2).norm());
    }
    if worst > tol::ORTHOGONALITY {
        return Err(Error::NumericalFailure(format!(
            "product amplitude does not factorize (deviation {worst:e})"
        )));
    }
    let mut out = plan;
    if plan1.convention == Convention::Physical && plan2.convention == Convention::Physical {
        out = out.to_physical();
    }
    Ok(out)
}

/// `e^{i phi}` for the stored gauge; the amplitude a perfect plan reaches.
pub fn expected_amplitude(plan: &CouplingPlan) -> Complex64 {
    cis(plan.gauge.phi)
}

/// Default gauge vector: all zeros.
pub fn zero_gauge(s: &GroupScheme) -> Vec<i64> {
    vec![0; s.num_classes()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;

    fn d8() -> GroupScheme {
        GroupScheme::new(Group::dihedral(8).unwrap()).unwrap()
    }

    #[test]
    fn z2_hand_plan() {
        let s = GroupScheme::new(Group::cyclic(2).unwrap()).unwrap();
        let plan = synthesize_couplings(&s, 1, 1.0, 0.0, &[0, 0]).unwrap();
        assert!((plan.couplings[0] - PI / 2.0).abs() < 1e-12);
        assert!((plan.couplings[1] + PI / 2.0).abs() < 1e-12);
        let r = verify_pst(&s, &plan, 1e-9);
        assert!(r.pass && r.unitarity_error < 1e-12);
    }

    #[test]
    fn d8_published_values() {
        let s = d8();
        let plan = synthesize_couplings(&s, 2, 1.0, PI, &[-3, 2, -2, 1, 0]).unwrap();
        let want = [0.0, PI / 2.0, 0.0, 2.0 * PI, 0.0];
        for (j, w) in plan.couplings.iter().zip(want) {
            assert!((j - w).abs() < 1e-9, "{:?}", plan.couplings);
        }
        let r = verify_pst(&s, &plan, 1e-9);
        assert!(r.pass);
        assert!(phase_distance(r.residual_phase, PI) < 1e-9);
    }

    #[test]
    fn gauge_shift_keeps_transfer() {
        let s = d8();
        for l in [[0, 0, 0, 0, 0], [1, -2, 3, 0, 4], [-4, 4, -4, 4, -4]] {
            let plan = synthesize_couplings(&s, 2, 0.7, 1.3, &l).unwrap();
            assert!(1.0 - verify_pst(&s, &plan, 1e-9).peak < 1e-9);
        }
    }

    #[test]
    fn targets_must_be_central_singletons() {
        let s = d8();
        assert!(matches!(synthesize_couplings(&s, 1, 1.0, 0.0, &[0; 5]), Err(Error::NoPstTarget(_))));
        assert!(matches!(synthesize_couplings(&s, 0, 1.0, 0.0, &[0; 5]), Err(Error::NoPstTarget(_))));
        assert!(matches!(optimal_fidelity(&s, 1), Err(Error::NoSingletonClass(1))));
        assert!((optimal_fidelity(&s, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity_bound(&s, 1).unwrap() < 1.0);
    }

    #[test]
    fn non_symmetric_scheme_rejected() {
        let s = GroupScheme::new(Group::cyclic(3).unwrap()).unwrap();
        assert!(matches!(
            synthesize_couplings(&s, 1, 1.0, 0.0, &[0; 3]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn phi_grid_is_sorted_and_distinct() {
        let g = phi_grid();
        assert_eq!(g[0], 0.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.iter().all(|&p| p < 2.0 * PI));
        // 1 + sum_{q<=8} 2 * totient(q) - 1 fractions of pi in [0, 2)
        assert_eq!(g.len(), 1 + 2 * (1 + 1 + 2 + 2 + 4 + 2 + 6 + 4) - 1);
    }

    #[test]
    fn search_min_l1_on_z2() {
        let s = GroupScheme::new(Group::cyclic(2).unwrap()).unwrap();
        let plan = search_gauge(&s, 1, 1.0, Objective::MinL1, 4).unwrap();
        assert_eq!(plan.gauge.l, vec![0, 0]);
        assert_eq!(plan.gauge.phi, 0.0);
        assert!((plan.couplings[0] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn search_min_nonzero_on_d8_finds_single_relation() {
        let plan = search_gauge(&d8(), 2, 1.0, Objective::MinNonzero, 4).unwrap();
        assert_eq!(plan.nonzero_count(), 1);
        assert!(verify_pst(&d8(), &plan, 1e-9).pass);
    }

    #[test]
    fn plan_round_trip_recovers_gauge() {
        let s = d8();
        let plan = synthesize_couplings(&s, 2, 1.0, PI, &[-3, 2, -2, 1, 0]).unwrap();
        let back = plan_from_couplings(&s, 2, 1.0, plan.couplings.clone(), Convention::Amplitude).unwrap();
        assert!(phase_distance(back.gauge.phi, PI) < 1e-12);
        assert_eq!(back.gauge.l.len(), 5);
        assert!(phase_matching_residual(&s, &back) < 1e-9);
    }

    #[test]
    fn physical_conversion() {
        let s = d8();
        let plan = synthesize_couplings(&s, 2, 1.0, 0.0, &[0; 5]).unwrap();
        let phys = plan.to_physical();
        assert_eq!(phys.convention, Convention::Physical);
        assert_eq!(phys.amplitude_couplings(), plan.couplings);
        let a = evolve_amplitude(&s, &plan, 0.4, Target::Vertex(3));
        let b = evolve_amplitude(&s, &phys, 0.4, Target::Vertex(3));
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn product_of_mismatched_times() {
        let s = GroupScheme::new(Group::cyclic(2).unwrap()).unwrap();
        let p1 = synthesize_couplings(&s, 1, 1.0, 0.0, &[0, 0]).unwrap();
        let p2 = synthesize_couplings(&s, 1, 2.0, 0.0, &[0, 0]).unwrap();
        let prod = product_scheme(&s, &s).unwrap();
        assert!(matches!(product_plan(&s, &p1, &s, &p2, &prod), Err(Error::IncompatiblePlans(_))));
    }
}
