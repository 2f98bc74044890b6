use hciz_core::invariant::{
    expand_to_entries, fourier_coefficients, fourier_round_trip, invariant_inner, psi_inverse, psi_map,
    random_trace_poly, reconstruct_from_characters, restrict_to_diagonal, trace_monomials, verify_diffop_identity_with,
    verify_unitarity_with, AltPoly, TraceExpander, TracePoly,
};
use hciz_core::numeric::McRng;
use hciz_core::partition::enumerate_partitions;
use hciz_core::symmetric::{alternant, d_lambda, schur_exact, staircase};
use hciz_core::{Error, ExactPoly, GaussianRational, Partition, Scaled};
use num_traits::Zero;
use rand::SeedableRng;

fn int(k: i64) -> GaussianRational {
    GaussianRational::from_integer(k)
}

#[test]
fn unitarity_on_all_trace_monomials() {
    let monomials = trace_monomials(4);
    for n in 1..=3 {
        let ex = TraceExpander::new(n);
        for f in &monomials {
            for g in &monomials {
                let check = verify_unitarity_with(f, g, &ex).unwrap();
                assert!(check.holds, "n={n}: ⟨{f}, {g}⟩: {} vs {}", check.lhs, check.rhs);
            }
        }
    }
}

#[test]
fn diffop_identity_on_monomials_in_t1_t2_t3() {
    let monomials: Vec<TracePoly> = enumerate_partitions(4, 4)
        .iter()
        .filter(|rho| rho.parts().first().is_none_or(|&p| p <= 3))
        .map(TracePoly::monomial)
        .collect();
    assert_eq!(monomials.len(), 11);
    for n in 1..=3 {
        let ex = TraceExpander::new(n);
        for f in &monomials {
            for g in &monomials {
                let check = verify_diffop_identity_with(f, g, &ex).unwrap();
                assert!(check.holds, "n={n}: F={f}, G={g}");
            }
        }
    }
}

#[test]
fn diffop_identity_with_complex_coefficients() {
    let mut rng = McRng::seed_from_u64(4);
    for n in 2..=3 {
        let ex = TraceExpander::new(n);
        for _ in 0..5 {
            let f = random_trace_poly(&mut rng, 3, 3, 3);
            let g = random_trace_poly(&mut rng, 4, 3, 3);
            assert!(verify_diffop_identity_with(&f, &g, &ex).unwrap().holds);
        }
    }
}

#[test]
fn ginibre_values_from_inner_products() {
    for n in 1..=4 {
        let det = hciz_core::invariant::chi_lambda(&Partition::new(vec![1; n]).unwrap());
        let fact: i64 = (1..=n as i64).product();
        assert_eq!(invariant_inner(&det, &det, n).unwrap(), int(fact));
        assert_eq!(invariant_inner(&TracePoly::t(1), &TracePoly::t(1), n).unwrap(), int(n as i64));
    }
}

#[test]
fn psi_round_trips_on_random_polys() {
    let mut rng = McRng::seed_from_u64(8);
    for trial in 0..30 {
        let n = 1 + trial % 3;
        // generators beyond t_n are re-expressed by Cayley–Hamilton, so the
        // literal round trip uses t_1..t_n and the general case compares functions
        let f = random_trace_poly(&mut rng, 5, n as u32, 4);
        let back = psi_inverse(&psi_map(&f, n).unwrap().map(AltPoly::into_poly), n).unwrap();
        assert!(back.scale.is_one());
        assert_eq!(back.body, f, "n={n}");

        let f = random_trace_poly(&mut rng, 5, 5, 4);
        let back = psi_inverse(&psi_map(&f, n).unwrap().map(AltPoly::into_poly), n).unwrap();
        assert!(back.scale.is_one());
        assert_eq!(restrict_to_diagonal(&back.body, n).unwrap(), restrict_to_diagonal(&f, n).unwrap());
        assert_eq!(expand_to_entries(&back.body, n).unwrap(), expand_to_entries(&f, n).unwrap());
    }
}

#[test]
fn psi_inverse_rejects_bad_inputs() {
    let x0 = ExactPoly::var(3, 0).unwrap();
    assert_eq!(psi_inverse(&Scaled::unit(x0), 3), Err(Error::NotAlternating));
    assert!(matches!(
        psi_inverse(&Scaled::unit(ExactPoly::zero(2)), 3),
        Err(Error::DimensionMismatch { .. })
    ));
    assert_eq!(AltPoly::new(ExactPoly::var(2, 1).unwrap()), Err(Error::NotAlternating));
}

#[test]
fn psi_inverse_of_d_lambda() {
    for n in 1..=3 {
        for lambda in enumerate_partitions(4, n) {
            let d = d_lambda(&lambda, n).unwrap();
            let e = hciz_core::invariant::e_lambda(&lambda, n).unwrap();
            let back = psi_inverse(&d, n).unwrap();
            assert_eq!(back.scale, e.scale);
            assert_eq!(restrict_to_diagonal(&back.body, n).unwrap(), restrict_to_diagonal(&e.body, n).unwrap());
        }
    }
}

#[test]
fn intertwining_on_random_polys() {
    let mut rng = McRng::seed_from_u64(12);
    for trial in 0..20 {
        let n = 1 + trial % 3;
        let f = random_trace_poly(&mut rng, 3, 3, 3);
        let g = random_trace_poly(&mut rng, 3, 3, 3);
        let lhs = psi_map(&(&f * &g), n).unwrap();
        let rhs = psi_map(&g, n).unwrap();
        assert_eq!(*lhs.body.poly(), restrict_to_diagonal(&f, n).unwrap().poly() * rhs.body.poly());
    }
}

#[test]
fn fourier_round_trips() {
    let mut rng = McRng::seed_from_u64(99);
    for _ in 0..20 {
        let f = random_trace_poly(&mut rng, 5, 5, 5);
        assert!(fourier_round_trip(&f, 3, 5).unwrap());
        // as functions on 3×3 matrices, not just on the diagonal
        let coeffs = fourier_coefficients(&f, 3, 5).unwrap();
        let rebuilt = reconstruct_from_characters(&coeffs);
        assert_eq!(expand_to_entries(&rebuilt, 3).unwrap(), expand_to_entries(&f, 3).unwrap());
    }
}

#[test]
fn fourier_of_schur_products() {
    // p₁³ = s₃ + 2 s₂₁ + s₁₁₁
    let t1 = TracePoly::t(1);
    let f = &(&t1 * &t1) * &t1;
    let coeffs = fourier_coefficients(&f, 3, 3).unwrap();
    let lookup = |parts: &[u32]| coeffs.get(&Partition::new(parts.to_vec()).unwrap()).cloned().unwrap_or_else(GaussianRational::zero);
    assert_eq!(lookup(&[3]), int(1));
    assert_eq!(lookup(&[2, 1]), int(2));
    assert_eq!(lookup(&[1, 1, 1]), int(1));
    // at n = 2, s₁₁₁ vanishes and drops out
    let coeffs = fourier_coefficients(&f, 2, 3).unwrap();
    assert_eq!(coeffs.len(), 2);
}

#[test]
fn restriction_matches_schur_via_alternants() {
    for n in 1..=3 {
        let a_delta = alternant(&staircase(n)).unwrap();
        for lambda in enumerate_partitions(5, n) {
            let chi = hciz_core::invariant::chi_lambda(&lambda);
            let restricted = restrict_to_diagonal(&chi, n).unwrap();
            assert_eq!(*restricted.poly(), schur_exact(&lambda, n).unwrap());
            let shifted = hciz_core::symmetric::shifted(&lambda, n).unwrap();
            assert_eq!(&a_delta * restricted.poly(), alternant(&shifted).unwrap());
        }
    }
}
