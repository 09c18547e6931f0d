mod common;

use common::*;
use greedy_sensors::data::{gen_random_system, load_snapshots, write_snapshots, SnapshotData, SnapshotFormat};
use greedy_sensors::submod::ObjectiveKind;
use greedy_sensors::{
    build_measurement, estimate, fisher_info, select_ag, select_dg, select_eg, CandidateMatrixF64,
    SetObjective,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn system() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..6).prop_flat_map(|r| (Just(r + 4), Just(r), any::<u64>())).prop_map(|(n, r, s)| (n + r, r, s))
}

fn spd_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.clone().try_inverse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn indices_ignore_row_order((n, r, seed) in system(), p in 1usize..8, rot in 0usize..8) {
        let u = gen_random_system::<f64>(n, r, seed);
        let p = p.min(n);
        let idx: Vec<usize> = (0..p).collect();
        let mut shuffled = idx.clone();
        shuffled.rotate_left(rot % p);
        shuffled.reverse();
        let a = fisher_info(&build_measurement(&u, &idx).unwrap()).unwrap();
        let b = fisher_info(&build_measurement(&u, &shuffled).unwrap()).unwrap();
        prop_assert!(rel_close(a.det_index(), b.det_index(), 1e-9) || a.det_index().abs() < 1e-14);
        prop_assert!(rel_close(a.trace_inv_index().unwrap(), b.trace_inv_index().unwrap(), 1e-9));
        prop_assert!((a.min_eig_index().unwrap() - b.min_eig_index().unwrap()).abs() <= 1e-10 * a.matrix().amax());
    }

    #[test]
    fn square_sets_agree_across_regimes((n, r, seed) in system()) {
        let u = gen_random_system::<f64>(n, r, seed);
        let c = build_measurement(&u, &(0..r).collect::<Vec<_>>()).unwrap();
        let m = c.measurement();
        let rows = m * m.transpose();
        let cols = m.transpose() * m;
        prop_assert!(rel_close(rows.determinant(), cols.determinant(), 1e-9));
        let mut a: Vec<f64> = rows.symmetric_eigenvalues().iter().copied().collect();
        let mut b: Vec<f64> = cols.symmetric_eigenvalues().iter().copied().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10 * a[r - 1]);
        }
    }

    #[test]
    fn estimates_satisfy_normal_equations((n, r, seed) in system(), p in 1usize..12) {
        let u = gen_random_system::<f64>(n, r, seed);
        let p = p.min(n);
        let s = build_measurement(&u, &(0..p).rev().collect::<Vec<_>>()).unwrap();
        let y = DVector::from_fn(p, |i, _| ((i * 7 + 3) % 5) as f64 - 2.0 + 0.1);
        let z = estimate(&s, &y).unwrap();
        let c = s.measurement();
        let resid = &y - c * &z;
        if p <= r {
            prop_assert!(resid.norm() <= 1e-10 * y.norm() * (1.0 + c.norm()));
        } else {
            prop_assert!((c.transpose() * resid).norm() <= 1e-10 * y.norm() * (1.0 + c.norm_squared()));
        }
    }

    #[test]
    fn trace_inverse_respects_am_hm((n, r, seed) in system(), extra in 1usize..4) {
        let u = gen_random_system::<f64>(n, r, seed);
        let p = (r + extra).min(n);
        let f = fisher_info(&build_measurement(&u, &(0..p).collect::<Vec<_>>()).unwrap()).unwrap();
        let tr = f.matrix().trace();
        prop_assert!(f.trace_inv_index().unwrap() >= (r * r) as f64 / tr * (1.0 - 1e-12));
    }

    #[test]
    fn selections_invariant_to_positive_scaling((n, r, seed) in system(), c in 0.05f64..20.0) {
        let u = gen_random_system::<f64>(n, r, seed);
        let v = u.scaled(c);
        let p = (r + 2).min(n);
        prop_assert_eq!(select_dg(&u, p).unwrap().indices, select_dg(&v, p).unwrap().indices);
        prop_assert_eq!(select_ag(&u, p).unwrap().indices, select_ag(&v, p).unwrap().indices);
        prop_assert_eq!(select_eg(&u, p).unwrap().indices, select_eg(&v, p).unwrap().indices);
    }

    #[test]
    fn selections_follow_row_permutations((n, r, seed) in system(), shift in 1usize..50) {
        let u = gen_random_system::<f64>(n, r, seed);
        // perm[new] = old
        let perm: Vec<usize> = (0..n).map(|i| (i * (2 * shift + 1) + shift) % n).collect();
        let mut seen = vec![false; n];
        for &p in &perm { seen[p] = true; }
        prop_assume!(seen.iter().all(|&s| s));
        let v = u.permuted(&perm).unwrap();
        let p = (r + 2).min(n);
        for (a, b) in [
            (select_dg(&u, p).unwrap().indices, select_dg(&v, p).unwrap().indices),
            (select_ag(&u, p).unwrap().indices, select_ag(&v, p).unwrap().indices),
            (select_eg(&u, p).unwrap().indices, select_eg(&v, p).unwrap().indices),
        ] {
            let mapped: Vec<usize> = b.iter().map(|&i| perm[i]).collect();
            prop_assert_eq!(a, mapped);
        }
    }

    #[test]
    fn snapshots_round_trip(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let x = greedy_sensors::data::NormalStream::new(seed, 3).matrix::<f64>(rows, cols) * 1e3;
        let d = SnapshotData::new(x.clone(), None, None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let raw = dir.path().join("x.bin");
        write_snapshots(&d, &raw, SnapshotFormat::Raw).unwrap();
        let back = load_snapshots::<f64>(&raw, SnapshotFormat::Raw).unwrap();
        prop_assert!(back.matrix().iter().zip(x.iter()).all(|(a, b)| a.to_bits() == b.to_bits()));
        let csv = dir.path().join("x.csv");
        write_snapshots(&d, &csv, SnapshotFormat::Csv).unwrap();
        let back = load_snapshots::<f64>(&csv, SnapshotFormat::Csv).unwrap();
        for (a, b) in back.matrix().iter().zip(x.iter()) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }

    #[test]
    fn woodbury_matches_direct_inverse(seed in any::<u64>(), eps in 1e-4f64..1.0) {
        let u = gen_random_system::<f64>(7, 3, seed);
        let s = u.matrix().rows(0, 2).into_owned();
        let d = u.matrix().rows(2, 3).into_owned();
        let ui = u.matrix().rows(5, 1).into_owned();
        let a = s.transpose() * &s + DMatrix::identity(3, 3) * eps;
        let b = &a + ui.transpose() * &ui;
        for m in [&a, &b] {
            let mi = spd_inverse(m);
            let k = DMatrix::identity(3, 3) + &d * &mi * d.transpose();
            let wood = &mi - &mi * d.transpose() * spd_inverse(&k) * &d * &mi;
            let direct = spd_inverse(&(m + d.transpose() * &d));
            prop_assert!((&wood - &direct).amax() <= 1e-9 * direct.amax());
        }
    }

    #[test]
    fn regularized_trace_converges((n, r, seed) in system()) {
        let u = gen_random_system::<f64>(n, r, seed);
        let s: Vec<usize> = (0..r + 1).collect();
        let c = build_measurement(&u, &s).unwrap();
        let g = c.measurement().transpose() * c.measurement();
        let ev = g.clone().symmetric_eigenvalues();
        let kappa = ev.max() / ev.min();
        let exact = spd_inverse(&g).trace();
        for eps in [1e-4, 1e-6, 1e-8] {
            let obj = SetObjective::new(ObjectiveKind::AEps, &u, eps).unwrap();
            let approx = -obj.eval(&s).unwrap() + r as f64 / eps;
            // the r/ε offset costs about ulp(r/ε) of absolute precision
            let roundoff = 1e3 * f64::EPSILON * r as f64 / eps;
            prop_assert!((approx - exact).abs() <= 10.0 * eps * exact * kappa + roundoff);
        }
    }
}

/// Smallest eigenvalue of `(A⁻² − B⁻²)` with `A = C_SᵀC_S + εI`, `B = A + uᵀu`.
fn squared_inverse_gap(u: &CandidateMatrixF64, s: &[usize], i: usize, eps: f64) -> f64 {
    let c = u.matrix().select_rows(s);
    let a = c.transpose() * &c + DMatrix::identity(u.r(), u.r()) * eps;
    let row = u.matrix().rows(i, 1).into_owned();
    let b = &a + row.transpose() * &row;
    let ai = spd_inverse(&a);
    let bi = spd_inverse(&b);
    let gap = &ai * &ai - &bi * &bi;
    ((&gap + gap.transpose()) * 0.5).symmetric_eigenvalues().min() / gap.amax()
}

/// Smallest eigenvalue of `Dᵀ(I + D A⁻¹ Dᵀ)⁻¹D − Dᵀ(I + D B⁻¹ Dᵀ)⁻¹D`.
fn projection_gap(u: &CandidateMatrixF64, s: &[usize], extra: &[usize], i: usize, eps: f64) -> f64 {
    let r = u.r();
    let c = u.matrix().select_rows(s);
    let d = u.matrix().select_rows(extra);
    let a = c.transpose() * &c + DMatrix::identity(r, r) * eps;
    let row = u.matrix().rows(i, 1).into_owned();
    let b = &a + row.transpose() * &row;
    let k = extra.len();
    let side = |m: &DMatrix<f64>| {
        let inner = DMatrix::identity(k, k) + &d * spd_inverse(m) * d.transpose();
        d.transpose() * spd_inverse(&inner) * &d
    };
    let gap = side(&a) - side(&b);
    ((&gap + gap.transpose()) * 0.5).symmetric_eigenvalues().min() / gap.amax().max(1.0)
}

#[test]
#[ignore = "the semidefiniteness claims are false in general; see the counter-instances below"]
fn proof_lemmas_are_semidefinite() {
    for seed in 0..50 {
        let u = gen_random_system::<f64>(7, 3, seed);
        assert!(squared_inverse_gap(&u, &[0, 1], 4, 1e-3) >= -1e-10, "seed {seed}");
        assert!(projection_gap(&u, &[0, 1], &[2, 3], 4, 1e-3) >= -1e-10, "seed {seed}");
    }
}

#[test]
fn squared_inverse_gap_is_indefinite() {
    // A ⪯ B does not give A⁻² ⪰ B⁻²: the difference is rank two with one
    // negative eigenvalue unless A⁻¹u is an eigenvector of A⁻¹.
    let u = gen_random_system::<f64>(7, 3, 0);
    let g = squared_inverse_gap(&u, &[0, 1], 4, 0.1);
    assert!(g < -1e-6);
}

#[test]
fn projection_gap_has_the_opposite_sign() {
    // A ⪯ B gives (I + D A⁻¹ Dᵀ)⁻¹ ⪯ (I + D B⁻¹ Dᵀ)⁻¹, so the gap is ⪯ 0.
    let u = gen_random_system::<f64>(7, 3, 0);
    assert!(projection_gap(&u, &[0, 1], &[2, 3], 4, 1e-3) < -1e-6);
}
