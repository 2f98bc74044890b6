use core::f64::consts::E;

use hciz_core::invariant::{e_lambda, psi_map, AltPoly};
use hciz_core::numeric::hciz::{
    alt_kernel, alt_kernel_series, coherent_reproducing_check, hciz_determinant, hciz_mc, kernel_q_mc, kernel_q_mc_with,
    kernel_series, kernel_series_adaptive, psi_coherent_sides, Spectrum,
};
use hciz_core::numeric::{ginibre_moment_suite, sample_ginibre, sample_haar_unitary, ComplexMatrix, McPlan, McRng};
use hciz_core::symmetric::{alternant, d_lambda, schur_exact, schur_numeric};
use hciz_core::{Error, ExactPoly, GaussianRational, Partition};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn reals(xs: &[f64]) -> Spectrum {
    Spectrum::from_reals(xs).unwrap()
}

/// Random real spectrum in [−1, 1] with pairwise gap ≥ `gap`, by rejection.
fn separated(rng: &mut McRng, n: usize, gap: f64) -> Vec<f64> {
    loop {
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let ok = (0..n).all(|i| (i + 1..n).all(|j| (xs[i] - xs[j]).abs() >= gap));
        if ok {
            return xs;
        }
    }
}

#[test]
fn determinant_examples() {
    let v = hciz_determinant(&reals(&[2.0]), &reals(&[3.0])).unwrap();
    assert_eq!(v, c(6f64.exp(), 0.0));
    let v = hciz_determinant(&reals(&[0.0, 1.0]), &reals(&[0.0, 1.0])).unwrap();
    assert!((v.re - (E - 1.0)).abs() < 1e-14 && v.im.abs() < 1e-14);
    let swapped = hciz_determinant(&reals(&[1.0, 0.0]), &reals(&[0.0, 1.0])).unwrap();
    assert!((swapped - v).norm() < 1e-14);
}

#[test]
fn determinant_rejects_coincident_spectra() {
    let err = hciz_determinant(&reals(&[0.5, 0.5 + 1e-9]), &reals(&[0.0, 1.0])).unwrap_err();
    assert!(matches!(err, Error::DegenerateSpectrum { .. }));
    assert!(err.to_string().contains("series"));
    assert!(matches!(
        hciz_determinant(&reals(&[0.0, 1.0]), &reals(&[1.0])),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn determinant_is_permutation_invariant() {
    let mut rng = McRng::seed_from_u64(11);
    for n in 2..=5 {
        for _ in 0..20 {
            let a = separated(&mut rng, n, 0.1);
            let b: Vec<Complex64> = (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let base = hciz_determinant(&reals(&a), &Spectrum::new(b.clone()).unwrap()).unwrap();
            let (mut pa, mut pb) = (a.clone(), b.clone());
            pa.shuffle(&mut rng);
            pb.shuffle(&mut rng);
            let moved = hciz_determinant(&reals(&pa), &Spectrum::new(pb).unwrap()).unwrap();
            assert!((moved - base).norm() <= 1e-12 * base.norm(), "n={n}: {moved} vs {base}");
        }
    }
}

#[test]
fn mc_examples() {
    let one = hciz_mc(&reals(&[2.0]), &reals(&[3.0]), 1000, 1).unwrap();
    assert_eq!(one.stderr, 0.0);
    assert_eq!(one.mean, c(6f64.exp(), 0.0));

    let est = hciz_mc(&reals(&[0.0, 1.0]), &reals(&[0.0, 1.0]), 100_000, 2).unwrap();
    assert!(est.agrees_with(c(E - 1.0, 0.0), 4.0), "{est:?}");
    assert!(est.stderr > 0.0);
    assert!(hciz_mc(&reals(&[0.0, 1.0]), &reals(&[0.0, 1.0]), 1, 2).is_err());
}

#[test]
fn mc_matches_determinant_at_three() {
    let mut rng = McRng::seed_from_u64(5);
    let a = reals(&separated(&mut rng, 3, 0.1));
    let b = reals(&separated(&mut rng, 3, 0.1));
    let est = hciz_mc(&a, &b, 100_000, 9).unwrap();
    let det = hciz_determinant(&a, &b).unwrap();
    assert!(est.agrees_with(det, 4.0), "{est:?} vs {det}");
}

#[test]
fn mc_is_reproducible_per_worker_count() {
    let (a, b) = (reals(&[0.0, 0.5, 1.0]), reals(&[-0.5, 0.0, 0.5]));
    let plan = McPlan::new(77, 5000).with_workers(3);
    let x = hciz_core::numeric::hciz::hciz_mc_with(&a, &b, &plan).unwrap();
    let y = hciz_core::numeric::hciz::hciz_mc_with(&a, &b, &plan).unwrap();
    assert_eq!(x, y);
    assert_eq!(x.workers, 3);
    assert_eq!(x.n_samples, 5000);
}

#[test]
fn stderr_shrinks_like_inverse_root() {
    let (a, b) = (reals(&[0.0, 1.0]), reals(&[0.0, 1.0]));
    let ratios: Vec<f64> = (0..20)
        .map(|t| {
            let small = hciz_mc(&a, &b, 4000, 1000 + t).unwrap().stderr;
            let large = hciz_mc(&a, &b, 8000, 2000 + t).unwrap().stderr;
            small / large
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((1.2..=1.7).contains(&mean), "mean ratio {mean}");
}

#[test]
fn series_examples() {
    let zero = kernel_series(&reals(&[0.3, -0.2]), &reals(&[1.0, 2.0]), 0).unwrap();
    assert_eq!(zero.value, c(1.0, 0.0));
    let x = Spectrum::new(vec![c(0.4, 0.3)]).unwrap();
    let y = Spectrum::new(vec![c(-0.2, 0.5)]).unwrap();
    let s = kernel_series(&x, &y, 30).unwrap();
    let want = (c(0.4, 0.3) * c(-0.2, 0.5).conj()).exp();
    assert!((s.value - want).norm() < 1e-14);
}

#[test]
fn series_matches_determinant_with_conjugate() {
    let x = reals(&[0.3, 0.1]);
    let y = reals(&[0.2, -0.1]);
    let s = kernel_series(&x, &y, 20).unwrap();
    let d = hciz_determinant(&x, &y.conj()).unwrap();
    assert!((s.value - d).norm() < 1e-8);

    let x = Spectrum::new(vec![c(0.3, 0.2), c(-0.1, 0.25), c(0.05, -0.3)]).unwrap();
    let y = Spectrum::new(vec![c(0.1, -0.2), c(0.35, 0.1), c(-0.2, 0.0)]).unwrap();
    let s = kernel_series_adaptive(&x, &y, 1e-10, 24).unwrap();
    let d = hciz_determinant(&x, &y.conj()).unwrap();
    assert!((s.value - d).norm() < 1e-9, "{} vs {d}", s.value);
    assert!(s.max_weight_used < 24);
}

#[test]
fn series_shells_decay() {
    let mut rng = McRng::seed_from_u64(3);
    for n in 1..=4 {
        for _ in 0..10 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-0.7..0.7)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-0.7..0.7)).collect();
            let nx = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let ny = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if nx * ny > 0.5 {
                continue;
            }
            let (sx, sy) = (reals(&x), reals(&y));
            for w in 0..14 {
                let lo = kernel_series(&sx, &sy, w).unwrap().last_shell_magnitude;
                let hi = kernel_series(&sx, &sy, w + 2).unwrap().last_shell_magnitude;
                assert!(hi < lo || (lo == 0.0 && hi == 0.0), "n={n} w={w}: {hi} !< {lo}");
            }
        }
    }
}

#[test]
fn series_is_finite_at_coincident_points() {
    let a = reals(&[0.4, 0.4]);
    let b = reals(&[0.1, -0.3]);
    let s = kernel_series(&a, &b, 30).unwrap();
    assert!(s.value.re.is_finite());
    // both eigenvalues equal: the integrand is constant, e^{α(b₁+b₂)}
    assert!((s.value.re - (0.4f64 * (0.1 - 0.3)).exp()).abs() < 1e-13);
}

#[test]
fn numeric_schur_agrees_with_exact_near_coincidence() {
    let lambda = Partition::new(vec![3, 1]).unwrap();
    let exact = schur_exact(&lambda, 2).unwrap();
    for eps in [1e-3, 1e-6, 1e-9, 0.0] {
        let pt = [c(0.7, 0.2), c(0.7 + eps, 0.2)];
        let num = schur_numeric(&lambda, &pt);
        assert!((num - exact.eval_complex(&pt).unwrap()).norm() < 1e-10);
    }
}

#[test]
fn kernel_q_examples() {
    let x = ComplexMatrix::diagonal(&[c(0.3, 0.0), c(-0.4, 0.0)]);
    let zero = ComplexMatrix::zeros(2);
    let e = kernel_q_mc(&x, &zero, 100, 1).unwrap();
    assert_eq!(e.mean, c(1.0, 0.0));
    assert_eq!(e.stderr, 0.0);
}

#[test]
fn kernel_q_matches_hciz_on_real_diagonals() {
    let (a, b) = ([0.0, 0.6, 1.0], [-0.5, 0.2, 0.9]);
    let q = kernel_q_mc(&reals(&a).to_matrix(), &reals(&b).to_matrix(), 50_000, 4).unwrap();
    let h = hciz_mc(&reals(&a), &reals(&b), 50_000, 5).unwrap();
    let se = q.stderr.hypot(h.stderr);
    assert!((q.mean - h.mean).norm() <= 4.0 * se);
}

#[test]
fn kernel_q_sees_only_the_spectrum() {
    // upper-triangular, non-normal, eigenvalues 0.5 and −0.3
    let x = ComplexMatrix::from_row_major(2, vec![c(0.5, 0.0), c(0.8, 0.2), c(0.0, 0.0), c(-0.3, 0.0)]).unwrap();
    let y = ComplexMatrix::diagonal(&[c(0.6, 0.1), c(-0.2, 0.4)]);
    let q = kernel_q_mc(&x, &y, 100_000, 8).unwrap();
    let series = kernel_series(&reals(&[0.5, -0.3]), &Spectrum::new(vec![c(0.6, 0.1), c(-0.2, 0.4)]).unwrap(), 30).unwrap();
    assert!(q.agrees_with(series.value, 4.0), "{q:?} vs {}", series.value);
}

#[test]
fn kernel_q_is_conjugation_invariant() {
    let mut rng = McRng::seed_from_u64(21);
    let x = sample_ginibre(3, &mut rng);
    let x = ComplexMatrix::from_row_major(3, x.as_slice().iter().map(|z| z * 0.4).collect()).unwrap();
    let y = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(0.1, -0.2), c(-0.3, 0.1)]);
    let v = sample_haar_unitary(3, &mut rng);
    let moved = v.mul(&x).mul(&v.adjoint());
    let p = McPlan::new(31, 50_000);
    let q1 = kernel_q_mc_with(&x, &y, &p).unwrap();
    let q2 = kernel_q_mc_with(&moved, &y, &McPlan::new(32, 50_000)).unwrap();
    assert!((q1.mean - q2.mean).norm() <= 4.0 * q1.stderr.hypot(q2.stderr));
}

#[test]
fn haar_moments() {
    let n = 3;
    let plan = McPlan::new(13, 100_000);
    let moments: [_; 10] = plan.estimate_many(|rng| {
        let u = sample_haar_unitary(n, rng);
        let mut out = [c(0.0, 0.0); 10];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = c(u[(i, j)].norm_sqr(), 0.0);
            }
        }
        out[9] = u[(0, 0)];
        out
    });
    for m in &moments[..9] {
        assert!(m.agrees_with(c(1.0 / 3.0, 0.0), 4.0), "{m:?}");
    }
    assert!(moments[9].agrees_with(c(0.0, 0.0), 4.0));
}

#[test]
fn ginibre_moment_examples() {
    for n in 1..=3 {
        let m = ginibre_moment_suite(n, 100_000, 40 + n as u64).unwrap();
        assert_eq!(m.within(4.0), (true, true), "n={n}: {m:?}");
    }
    let m = ginibre_moment_suite(1, 1000, 3).unwrap();
    assert_eq!(m.trace_sq.mean, m.det_sq.mean);
    assert!(ginibre_moment_suite(7, 1000, 3).is_err());
}

#[test]
fn alternating_kernel_series_converges() {
    let z = [c(0.3, 0.1), c(-0.2, 0.4), c(0.1, -0.3)];
    let a = [c(0.2, 0.2), c(0.5, -0.1), c(-0.4, 0.0)];
    let closed = alt_kernel(&z, &a).unwrap();
    let series = alt_kernel_series(&z, &a, 14).unwrap();
    assert!((closed - series).norm() < 1e-12, "{closed} vs {series}");
}

#[test]
fn invariant_and_alternating_kernels_correspond() {
    let x = Spectrum::new(vec![c(0.3, 0.1), c(-0.2, 0.2)]).unwrap();
    let y = Spectrum::new(vec![c(0.1, -0.3), c(0.4, 0.0)]).unwrap();
    let (lhs, rhs) = psi_coherent_sides(&x, &y, 24).unwrap();
    assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
}

#[test]
fn coherent_reproducing_examples() {
    let d1 = d_lambda(&Partition::new(vec![1]).unwrap(), 2).unwrap();
    let f = AltPoly::new(d1.body).unwrap();
    assert!(coherent_reproducing_check(&reals(&[1.0, 0.0]), &f, 4).unwrap() < 1e-10);
    let zero = AltPoly::new(ExactPoly::zero(2)).unwrap();
    assert_eq!(coherent_reproducing_check(&reals(&[1.0, 0.0]), &zero, 4).unwrap(), 0.0);
}

#[test]
fn coherent_reproducing_on_random_alternating_polys() {
    let mut rng = McRng::seed_from_u64(17);
    for trial in 0..20 {
        let n = 2 + trial % 2;
        // a_δ times a random symmetric polynomial is alternating; build one from random μ
        let mut f = ExactPoly::zero(n);
        for _ in 0..3 {
            let mut mu: Vec<u32> = Vec::new();
            while mu.len() < n {
                let k = rng.random_range(0..=7 - n as u32);
                if !mu.contains(&k) {
                    mu.push(k);
                }
            }
            mu.sort_unstable_by(|a, b| b.cmp(a));
            let coeff = GaussianRational::from_ratio(rng.random_range(-4..=4), rng.random_range(1..=3));
            f = &f + &alternant(&mu).unwrap().scale(&coeff);
        }
        let degree = f.degree().unwrap_or(0);
        let a: Vec<Complex64> = (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let f = AltPoly::new(f).unwrap();
        let residual = coherent_reproducing_check(&Spectrum::new(a).unwrap(), &f, degree).unwrap();
        assert!(residual < 1e-10, "trial {trial}: {residual}");
    }
}

#[test]
fn psi_of_e_lambda_evaluates_like_d_lambda() {
    let lambda = Partition::new(vec![2, 1]).unwrap();
    let e = e_lambda(&lambda, 3).unwrap();
    let image = psi_map(&e.body, 3).unwrap();
    let d = d_lambda(&lambda, 3).unwrap();
    let pt = [c(0.3, 0.2), c(-0.7, 0.1), c(0.5, -0.4)];
    let lhs = (&e.scale * &image.scale).to_complex64() * image.body.poly().eval_complex(&pt).unwrap();
    let rhs = d.scale.to_complex64() * d.body.eval_complex(&pt).unwrap();
    assert!((lhs - rhs).norm() < 1e-12);
}
