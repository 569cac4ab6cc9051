//! Cross-checks of the spectral machinery against brute-force routes that
//! share no code with it beyond the group tables.

use std::f64::consts::PI;

use grouppst_core::fullspace::{
    build_full_hamiltonian, published_shift, sector_reference, sector_shift, single_excitation_block,
    DEFAULT_DIMENSION_CAP,
};
use grouppst_core::linalg::{expm, max_abs_diff, CMatrix};
use grouppst_core::pst::{self, product_plan, product_scheme, synthesize_couplings, Target};
use grouppst_core::{Group, GroupScheme};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `sum_i J_i A_i` with `A_i[y][x] = 1` iff `y x^-1` is in class `i`, built
/// from the multiplication table and a fresh conjugation scan.
fn brute_hamiltonian(g: &Group, class_of: &dyn Fn(usize) -> usize, j: &[f64]) -> CMatrix {
    let n = g.order();
    CMatrix::from_fn(n, n, |y, x| c(j[class_of(g.mul(y, g.inv(x)))]))
}

/// Conjugacy class index per element, by orbit scan, mapped onto the scheme's
/// labelling through a representative.
fn class_map(s: &GroupScheme) -> impl Fn(usize) -> usize + '_ {
    let g = s.group();
    let n = g.order();
    let mut orbit_rep = vec![usize::MAX; n];
    for x in 0..n {
        if orbit_rep[x] != usize::MAX {
            continue;
        }
        for h in 0..n {
            let y = g.mul(g.mul(h, x), g.inv(h));
            orbit_rep[y] = x;
        }
    }
    move |x| s.class_of(orbit_rep[x])
}

fn suite_small() -> Vec<(&'static str, Group)> {
    let z2 = Group::cyclic(2).unwrap();
    let mut out: Vec<(&'static str, Group)> = vec![
        ("Z2", Group::cyclic(2).unwrap()),
        ("Z3", Group::cyclic(3).unwrap()),
        ("Z4", Group::cyclic(4).unwrap()),
        ("Z5", Group::cyclic(5).unwrap()),
        ("Z6", Group::cyclic(6).unwrap()),
        ("Z7", Group::cyclic(7).unwrap()),
        ("Z8", Group::cyclic(8).unwrap()),
        ("D8", Group::dihedral(8).unwrap()),
        ("D12", Group::dihedral(12).unwrap()),
        ("CL3", Group::clifford(3).unwrap()),
    ];
    let z2sq = z2.direct_product(&z2, 64).unwrap();
    out.push(("Z2^3", z2sq.direct_product(&z2, 64).unwrap()));
    out.push(("D8xZ2", Group::dihedral(8).unwrap().direct_product(&z2, 64).unwrap()));
    out
}

#[test]
fn spectral_amplitude_matches_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, g) in suite_small() {
        let s = GroupScheme::new(g).unwrap().symmetrize();
        let d1 = s.num_classes();
        let j: Vec<f64> = (0..d1).map(|_| rng.random_range(-2.0..2.0)).collect();
        let plan = pst::CouplingPlan {
            couplings: j.clone(),
            t0: 1.0,
            target: 0,
            gauge: pst::Gauge { phi: 0.0, l: vec![], theta: vec![0.0; d1] },
            convention: pst::Convention::Amplitude,
        };
        let map = class_map(&s);
        let h = brute_hamiltonian(s.group(), &map, &j);
        for _ in 0..20 {
            let t = rng.random_range(0.0..5.0);
            let u = expm(&(&h * Complex64::new(0.0, -t)));
            for beta in 0..s.order() {
                let f = pst::evolve_amplitude(&s, &plan, t, Target::Vertex(beta));
                assert!((u[(beta, 0)] - f).norm() < 1e-8, "{name} t={t} beta={beta}");
            }
        }
    }
}

#[test]
fn d8_plan_by_exponential() {
    let s = GroupScheme::new(Group::dihedral(8).unwrap()).unwrap();
    let j = [0.0, PI / 2.0, 0.0, 2.0 * PI, 0.0];
    let map = class_map(&s);
    let h = brute_hamiltonian(s.group(), &map, &j);
    let u = expm(&(&h * Complex64::new(0.0, -1.0)));
    let a2 = s.group().find("a^2").unwrap();
    assert!((u[(a2, 0)] - c(-1.0)).norm() < 1e-9, "{}", u[(a2, 0)]);
}

#[test]
fn hypercube_walk_matches_product_formula() {
    // single relation "flip one bit": amplitude to a word of weight w is
    // cos(t)^(3-w) (-i sin t)^w
    let z2 = Group::cyclic(2).unwrap();
    let g = z2.direct_product(&z2, 64).unwrap().direct_product(&z2, 64).unwrap();
    let s = GroupScheme::new(g).unwrap();
    let weight = |x: usize| (x as u32).count_ones() as usize;
    let j: Vec<f64> = (0..s.num_classes())
        .map(|i| if weight(s.class_members(i)[0]) == 1 { 1.0 } else { 0.0 })
        .collect();
    let plan = pst::CouplingPlan {
        couplings: j,
        t0: 1.0,
        target: 0,
        gauge: pst::Gauge { phi: 0.0, l: vec![], theta: vec![0.0; 8] },
        convention: pst::Convention::Amplitude,
    };
    for k in 0..20 {
        let t = 0.13 + 0.31 * k as f64;
        for beta in 0..8 {
            let w = weight(beta) as i32;
            let want = Complex64::new(t.cos(), 0.0).powi(3 - w) * Complex64::new(0.0, -t.sin()).powi(w);
            let got = pst::evolve_amplitude(&s, &plan, t, Target::Vertex(beta));
            assert!((got - want).norm() < 1e-10);
        }
    }
}

#[test]
fn abelian_p_is_the_character_table() {
    for n in 1..=8 {
        let s = GroupScheme::new(Group::cyclic(n).unwrap()).unwrap();
        // every row of P must be some row k -> exp(2 pi i k x / n)
        let mut used = vec![false; n];
        for r in 0..n {
            let k = (0..n)
                .find(|&k| {
                    !used[k]
                        && (0..n).all(|x| {
                            let cls = s.class_of(x);
                            let w = Complex64::from_polar(1.0, 2.0 * PI * (k * x) as f64 / n as f64);
                            (s.p()[(r, cls)] - w).norm() < 1e-9
                        })
                })
                .unwrap_or_else(|| panic!("Z{n}: row {r} is not a character"));
            used[k] = true;
        }
    }
}

#[test]
fn d8_character_table_by_hand() {
    let s = GroupScheme::new(Group::dihedral(8).unwrap()).unwrap();
    let ch = s.characters();
    // columns {e}, {a,a^3}, {a^2}, {b,a^2b}, {ab,a^3b}
    let known = [
        [1.0, 1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, 1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0, 1.0],
        [2.0, 0.0, -2.0, 0.0, 0.0],
    ];
    let mut rows: Vec<Vec<f64>> = (0..5).map(|k| (0..5).map(|i| ch.value(k, i).re).collect()).collect();
    let mut want: Vec<Vec<f64>> = known.iter().map(|r| r.to_vec()).collect();
    rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
    want.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (r, w) in rows.iter().zip(&want) {
        for (x, y) in r.iter().zip(w) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn sector_block_matches_scheme_formula() {
    let cases: Vec<(Group, usize)> = vec![
        (Group::cyclic(2).unwrap(), 2),
        (Group::cyclic(4).unwrap(), 3),
        (Group::dihedral(8).unwrap(), 2),
        (Group::dihedral(8).unwrap(), 3),
        (Group::dihedral(12).unwrap(), 2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (g, levels) in cases {
        let s = GroupScheme::new(g).unwrap().symmetrize();
        let j: Vec<f64> = (0..s.num_classes()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let plan = pst::CouplingPlan {
            couplings: j.clone(),
            t0: 1.0,
            target: 0,
            gauge: pst::Gauge { phi: 0.0, l: vec![], theta: vec![] },
            convention: pst::Convention::Physical,
        };
        let h = build_full_hamiltonian(&s, &plan, levels, DEFAULT_DIMENSION_CAP).unwrap();
        assert!(h.hermiticity_error() < 1e-12);
        assert!(h.conservation_error() < 1e-10);
        let reference = sector_reference(&s, &j, levels);
        for nu in 1..levels {
            let block = h.restrict_single_excitation(nu).unwrap();
            assert!(max_abs_diff(&block, &reference) < 1e-10, "order {} D={levels} nu={nu}", s.order());
        }
    }
}

#[test]
fn d8_full_space_transfer() {
    let s = GroupScheme::new(Group::dihedral(8).unwrap()).unwrap();
    let plan = synthesize_couplings(&s, 2, 1.0, PI, &[-3, 2, -2, 1, 0]).unwrap();
    let h = build_full_hamiltonian(&s, &plan, 2, DEFAULT_DIMENSION_CAP).unwrap();
    assert_eq!(h.dim(), 256);
    let r = 0.5f64.sqrt();
    let a2 = s.group().find("a^2").unwrap();
    let rep = h.full_transfer_check(c(r), c(r), 0, a2, 1.0).unwrap();
    assert!(rep.pass, "{rep:?}");
    let still = h.full_transfer_check(c(1.0), c(0.0), 0, a2, 1.0).unwrap();
    assert!(still.pass && (still.alpha_out.norm() - 1.0).abs() < 1e-10);
}

#[test]
fn hypercube_product_plan_full_space() {
    let z2 = GroupScheme::new(Group::cyclic(2).unwrap()).unwrap();
    let factor = synthesize_couplings(&z2, 1, 1.0, PI / 2.0, &[0, 0]).unwrap();
    assert!(factor.couplings[0].abs() < 1e-12);
    let s2 = product_scheme(&z2, &z2).unwrap();
    let p2 = product_plan(&z2, &factor, &z2, &factor, &s2).unwrap();
    let s3 = product_scheme(&s2, &z2).unwrap();
    let p3 = product_plan(&s2, &p2, &z2, &factor, &s3).unwrap();
    for i in p3.support() {
        assert_eq!((s3.class_members(i)[0] as u32).count_ones(), 1);
    }
    let top = s3.class_members(p3.target)[0];
    assert_eq!(top, 7);
    assert!(1.0 - pst::verify_pst(&s3, &p3, 1e-9).peak < 1e-9);
    let h = build_full_hamiltonian(&s3, &p3, 2, DEFAULT_DIMENSION_CAP).unwrap();
    let r = 0.5f64.sqrt();
    let rep = h.full_transfer_check(c(r), c(r), 0, 7, 1.0).unwrap();
    assert!(rep.pass && rep.leakage < 1e-8, "{rep:?}");
}

#[test]
fn qubit_shift_agrees_with_closed_form_without_self_coupling() {
    let s = GroupScheme::new(Group::dihedral(8).unwrap()).unwrap();
    let j = [0.0, 0.3, -0.7, 1.1, 0.25];
    assert!((sector_shift(&s, &j, 2) - published_shift(&s, &j, 2)).abs() < 1e-12);
    // with a self-coupling the two differ; the built matrix decides which is right
    let j0 = [0.4, 0.3, -0.7, 1.1, 0.25];
    let plan = pst::plan_from_couplings(&s, 2, 1.0, j0.to_vec(), pst::Convention::Physical).unwrap();
    let h = build_full_hamiltonian(&s, &plan, 2, DEFAULT_DIMENSION_CAP).unwrap();
    let block = h.restrict_single_excitation(1).unwrap();
    let hop = s.combination(&j0.iter().map(|x| 2.0 * x).collect::<Vec<_>>());
    let diag = (block[(0, 0)] - hop[(0, 0)]).re;
    assert!((diag - sector_shift(&s, &j0, 2)).abs() < 1e-10);
    assert!((diag - published_shift(&s, &j0, 2)).abs() > 1e-3);
}

#[test]
fn matrix_free_sector_agrees_with_sparse_build() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (g, levels) in [(Group::dihedral(8).unwrap(), 2), (Group::dihedral(8).unwrap(), 3), (Group::cyclic(6).unwrap(), 3)] {
        let s = GroupScheme::new(g).unwrap().symmetrize();
        let j: Vec<f64> = (0..s.num_classes()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let plan = pst::CouplingPlan {
            couplings: j,
            t0: 1.0,
            target: 0,
            gauge: pst::Gauge { phi: 0.0, l: vec![], theta: vec![] },
            convention: pst::Convention::Physical,
        };
        let h = build_full_hamiltonian(&s, &plan, levels, DEFAULT_DIMENSION_CAP).unwrap();
        for nu in 1..levels {
            let (block, leak) = single_excitation_block(&s, &plan, levels, nu).unwrap();
            assert!(leak < 1e-12);
            assert!(max_abs_diff(&block, &h.restrict_single_excitation(nu).unwrap()) < 1e-12);
        }
    }
}

#[test]
fn order_sixteen_sectors() {
    let z2 = Group::cyclic(2).unwrap();
    let groups = vec![
        Group::clifford(3).unwrap(),
        Group::dihedral(16).unwrap(),
        Group::dihedral(8).unwrap().direct_product(&z2, 64).unwrap(),
        Group::cyclic(16).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for g in groups {
        let s = GroupScheme::new(g).unwrap().symmetrize();
        let j: Vec<f64> = (0..s.num_classes()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let plan = pst::CouplingPlan {
            couplings: j.clone(),
            t0: 1.0,
            target: 0,
            gauge: pst::Gauge { phi: 0.0, l: vec![], theta: vec![] },
            convention: pst::Convention::Physical,
        };
        for levels in [2, 3] {
            let reference = sector_reference(&s, &j, levels);
            for nu in 1..levels {
                let (block, leak) = single_excitation_block(&s, &plan, levels, nu).unwrap();
                assert!(leak < 1e-12);
                assert!(max_abs_diff(&block, &reference) < 1e-10);
            }
        }
    }
}

/// `A_4 x Z_2` with the classes of interest picked out by content.
struct Th {
    s: GroupScheme,
    inversion: usize,
    rot_inv: usize,
    v_inv: usize,
}

fn th() -> Th {
    let g = Group::alternating(4).unwrap().direct_product(&Group::cyclic(2).unwrap(), 64).unwrap();
    let s = GroupScheme::new(g).unwrap().symmetrize();
    // element x of the product is (x / 2, x % 2)
    let with_z = |i: usize| s.class_members(i).iter().all(|&x| x % 2 == 1);
    let find = |size: usize| (1..s.num_classes()).find(|&i| s.valency(i) == size && with_z(i)).unwrap();
    let (inversion, rot_inv, v_inv) = (find(1), find(8), find(3));
    Th { s, inversion, rot_inv, v_inv }
}

#[test]
fn th_two_coupling_plan_transfers() {
    let t = th();
    assert_eq!(t.s.num_classes(), 6);
    let mut j = vec![0.0; 6];
    j[t.rot_inv] = PI / 2.0;
    j[t.v_inv] = PI / 2.0;
    let plan = pst::plan_from_couplings(&t.s, t.inversion, 1.0, j.clone(), pst::Convention::Amplitude).unwrap();
    assert!(!plan.gauge.l.is_empty(), "couplings do not meet the phase condition");
    assert!(1.0 - pst::verify_pst(&t.s, &plan, 1e-9).peak < 1e-9);
    let map = class_map(&t.s);
    let h = brute_hamiltonian(t.s.group(), &map, &j);
    let u = expm(&(&h * Complex64::new(0.0, -1.0)));
    let z = t.s.class_members(t.inversion)[0];
    assert!((u[(z, 0)].norm() - 1.0).abs() < 1e-9);
}

#[test]
fn th_single_coupling_plans_exist() {
    // why a min-nonzero search cannot return a two-coupling plan here
    let t = th();
    for class in [t.v_inv, t.inversion] {
        let mut j = vec![0.0; 6];
        j[class] = PI / 2.0;
        let map = class_map(&t.s);
        let h = brute_hamiltonian(t.s.group(), &map, &j);
        let u = expm(&(&h * Complex64::new(0.0, -1.0)));
        let z = t.s.class_members(t.inversion)[0];
        assert!((u[(z, 0)].norm() - 1.0).abs() < 1e-9, "class {class}");
    }
}

#[test]
fn dihedral_six_bounds_by_hand() {
    // classes {e}, {a, a^2}, {b, ab, a^2b}; characters 1 1 1 / 1 1 -1 / 2 -1 0
    let s = GroupScheme::new(Group::dihedral(6).unwrap()).unwrap();
    for i in 1..s.num_classes() {
        let want = if s.valency(i) == 2 { 4.0 / 6.0 } else { 2.0 / 6.0 };
        assert!((pst::fidelity_bound(&s, i).unwrap() - want).abs() < 1e-12);
        assert!(pst::optimal_fidelity(&s, i).is_err());
    }
}

#[test]
fn clifford_central_targets() {
    // element 2 * mask + sign: -1 is 1, g1 g2 g3 is 14
    let base = GroupScheme::new(Group::clifford(3).unwrap()).unwrap();
    for z in [1, 14] {
        let m = base.class_of(z);
        assert_eq!(base.valency(m), 1);
        assert!((pst::optimal_fidelity(&base, m).unwrap() - 1.0).abs() < 1e-12);
    }
    // g1 g2 g3 squares to -1, so only -1 survives symmetrization as a target
    let g = base.group();
    assert_eq!(g.mul(14, 14), 1);
    let s = base.symmetrize();
    assert_eq!(pst::pst_targets(&s), vec![s.class_of(1)]);
    let m = s.class_of(1);
    let plan = synthesize_couplings(&s, m, 1.0, 0.0, &vec![0; s.num_classes()]).unwrap();
    let map = class_map(&s);
    let h = brute_hamiltonian(s.group(), &map, &plan.couplings);
    let u = expm(&(&h * Complex64::new(0.0, -1.0)));
    assert!((u[(1, 0)] - c(1.0)).norm() < 1e-9);
}
