//! Verification suites behind `hciz verify`, parallelized over cases.

use std::collections::BTreeMap;

use hciz_core::invariant::{
    chi_lambda, e_lambda_with, expand_to_entries, fourier_coefficients, fourier_round_trip, invariant_inner,
    random_trace_poly, reconstruct_from_characters, trace_monomials, verify_diffop_identity_with, verify_unitarity_with,
    AltPoly, TraceExpander, TracePoly,
};
use hciz_core::numeric::{
    coherent_reproducing_check, psi_coherent_sides, sample_separated_reals, McPlan, McRng, Spectrum,
};
use hciz_core::partition::enumerate_partitions;
use hciz_core::symmetric::{alternant, d_lambda, shifted, CharacterTable};
use hciz_core::{ExactPoly, GaussianRational, Partition, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::par;
use crate::report::{complex_json, estimate_json, Check};

/// Results and aggregate checks of one suite run.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub results: Value,
    pub checks: Vec<Check>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// `(2,1)`, with `()` for the empty partition.
pub fn partition_label(p: &Partition) -> String {
    let parts: Vec<String> = p.parts().iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn upper_pairs(len: usize) -> Vec<(usize, usize)> {
    (0..len).flat_map(|i| (i..len).map(move |j| (i, j))).collect()
}

fn all_pairs(len: usize) -> Vec<(usize, usize)> {
    (0..len).flat_map(|i| (0..len).map(move |j| (i, j))).collect()
}

fn tally(name: &str, cases: &[Value], what: &str) -> Check {
    let passed = cases.iter().filter(|c| c["pass"] == true).count();
    Check::new(name, passed == cases.len(), format!("{passed} of {} {what} pass", cases.len()))
}

/// ⟨d_λ, d_μ⟩ = δ_λμ exactly for |λ|, |μ| ≤ `max_weight`.
pub fn alt_orthonormal(n: usize, max_weight: u32) -> Result<SuiteOutcome> {
    let basis = enumerate_partitions(max_weight, n);
    let ds = basis.par_iter().map(|l| d_lambda(l, n)).collect::<Result<Vec<_>>>()?;
    let cases = upper_pairs(basis.len())
        .into_par_iter()
        .map(|(i, j)| {
            let ip = ds[i].bargmann_inner(&ds[j])?;
            let pass = if i == j { ip.is_one() } else { ip.is_zero() };
            Ok(json!({
                "lambda": partition_label(&basis[i]),
                "mu": partition_label(&basis[j]),
                "value": ip.to_string(),
                "pass": pass,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let check = tally("orthonormality", &cases, "pairs");
    Ok(SuiteOutcome {
        results: json!({ "n": n, "max_weight": max_weight, "basis_size": basis.len(), "cases": cases }),
        checks: vec![check],
    })
}

/// ⟨e_λ, e_μ⟩ = δ_λμ exactly, computed on the matrix-entry expansions.
pub fn inv_orthonormal(n: usize, max_weight: u32) -> Result<SuiteOutcome> {
    let basis = enumerate_partitions(max_weight, n);
    let mut table = CharacterTable::new();
    let es = basis.iter().map(|l| e_lambda_with(l, n, &mut table)).collect::<Result<Vec<_>>>()?;
    let mut ex = TraceExpander::new(n);
    ex.prepare(max_weight as usize);
    let expanded: Vec<_> = es.par_iter().map(|e| ex.expand(&e.body)).collect();
    let cases = upper_pairs(basis.len())
        .into_par_iter()
        .map(|(i, j)| {
            let ip = expanded[i].poly().bargmann_inner(expanded[j].poly())?;
            let value = (&es[i].scale.conj() * &es[j].scale).mul_gaussian(&ip);
            let pass = if i == j { value.is_one() } else { value.is_zero() };
            Ok(json!({
                "lambda": partition_label(&basis[i]),
                "mu": partition_label(&basis[j]),
                "value": value.to_string(),
                "pass": pass,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let check = tally("orthonormality", &cases, "pairs");
    Ok(SuiteOutcome {
        results: json!({ "n": n, "max_weight": max_weight, "basis_size": basis.len(), "cases": cases }),
        checks: vec![check],
    })
}

/// ⟨F, G⟩ = ⟨ψF, ψG⟩ on every pair of trace monomials of weight ≤ `max_weight`.
pub fn unitarity(n: usize, max_weight: u32) -> Result<SuiteOutcome> {
    let monomials = trace_monomials(max_weight);
    let mut ex = TraceExpander::new(n);
    ex.prepare(max_weight as usize);
    let cases = upper_pairs(monomials.len())
        .into_par_iter()
        .map(|(i, j)| {
            let check = verify_unitarity_with(&monomials[i], &monomials[j], &ex)?;
            Ok(json!({
                "F": monomials[i].to_string(),
                "G": monomials[j].to_string(),
                "lhs": check.lhs.to_string(),
                "rhs": check.rhs.to_string(),
                "pass": check.holds,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let check = tally("unitarity", &cases, "pairs");
    Ok(SuiteOutcome { results: json!({ "n": n, "max_weight": max_weight, "cases": cases }), checks: vec![check] })
}

/// Trace monomials in t₁, t₂, t₃ of weighted degree ≤ `max_degree`.
pub fn low_generator_monomials(max_degree: u32) -> Vec<TracePoly> {
    enumerate_partitions(max_degree, max_degree as usize)
        .iter()
        .filter(|rho| rho.parts().first().is_none_or(|&p| p <= 3))
        .map(TracePoly::monomial)
        .collect()
}

/// Δ·(F(∂)G)|_D = F|_D(∂)(Δ·G|_D) for every ordered pair of monomials in t₁, t₂, t₃.
pub fn diffop(n: usize, max_degree: u32) -> Result<SuiteOutcome> {
    let monomials = low_generator_monomials(max_degree);
    let mut ex = TraceExpander::new(n);
    ex.prepare(3);
    let cases = all_pairs(monomials.len())
        .into_par_iter()
        .map(|(i, j)| {
            let check = verify_diffop_identity_with(&monomials[i], &monomials[j], &ex)?;
            let mut case = json!({
                "F": monomials[i].to_string(),
                "G": monomials[j].to_string(),
                "lhs": check.lhs.to_string(),
                "pass": check.holds,
            });
            if !check.holds {
                case["rhs"] = json!(check.rhs.to_string());
            }
            Ok(case)
        })
        .collect::<Result<Vec<_>>>()?;
    let check = tally("diffop", &cases, "pairs");
    Ok(SuiteOutcome { results: json!({ "n": n, "max_degree": max_degree, "cases": cases }), checks: vec![check] })
}

/// Fourier coefficients as `{ "(λ)": "p/q" }`.
pub fn coefficients_json(coeffs: &BTreeMap<Partition, GaussianRational>) -> Value {
    let map: serde_json::Map<String, Value> =
        coeffs.iter().map(|(l, c)| (partition_label(l), Value::String(c.to_string()))).collect();
    Value::Object(map)
}

/// Whether Σ f_λ χ_λ reproduces F, on the diagonal and as a function of the matrix entries.
pub fn fourier_case(f: &TracePoly, n: usize, max_weight: u32) -> Result<(BTreeMap<Partition, GaussianRational>, bool, bool)> {
    let coeffs = fourier_coefficients(f, n, max_weight)?;
    let on_diagonal = fourier_round_trip(f, n, max_weight)?;
    let rebuilt = reconstruct_from_characters(&coeffs);
    let on_entries = expand_to_entries(&rebuilt, n)? == expand_to_entries(f, n)?;
    Ok((coeffs, on_diagonal, on_entries))
}

/// Fourier round trips on `count` seeded random trace polynomials.
pub fn fourier(n: usize, max_weight: u32, count: usize, seed: u64) -> Result<SuiteOutcome> {
    let mut rng = McRng::seed_from_u64(seed);
    let polys: Vec<TracePoly> = (0..count).map(|_| random_trace_poly(&mut rng, max_weight, max_weight, 4)).collect();
    let cases = polys
        .par_iter()
        .map(|f| {
            let (coeffs, on_diagonal, on_entries) = fourier_case(f, n, max_weight)?;
            Ok(json!({
                "F": f.to_string(),
                "coefficients": coefficients_json(&coeffs),
                "round_trip_diagonal": on_diagonal,
                "round_trip_entries": on_entries,
                "pass": on_diagonal && on_entries,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let check = tally("reconstruction", &cases, "polynomials");
    Ok(SuiteOutcome {
        results: json!({ "n": n, "max_weight": max_weight, "count": count, "seed": seed, "cases": cases }),
        checks: vec![check],
    })
}

/// Multiple of the standard error allowed for Monte Carlo checks.
pub const K_SIGMA: f64 = 4.0;

/// E|Tr z|² = n and E|det z|² = n! by Monte Carlo, and exactly as Segal–Bargmann norms.
pub fn ginibre(n: usize, plan: &McPlan) -> Result<SuiteOutcome> {
    let m = par::ginibre_moments(n, plan)?;
    let (trace_ok, det_ok) = m.within(K_SIGMA);
    let t1 = TracePoly::t(1);
    let det = chi_lambda(&Partition::new(vec![1; n])?);
    let trace_exact = invariant_inner(&t1, &t1, n)?;
    let det_exact = invariant_inner(&det, &det, n)?;
    let n_fact: u64 = (1..=n as u64).product();
    let checks = vec![
        Check::new("trace_sq_mc", trace_ok, format!("|{} - {}| <= {K_SIGMA}*{}", m.trace_sq.mean.re, n, m.trace_sq.stderr)),
        Check::new("det_sq_mc", det_ok, format!("|{} - {}| <= {K_SIGMA}*{}", m.det_sq.mean.re, n_fact, m.det_sq.stderr)),
        Check::new("trace_sq_exact", trace_exact == GaussianRational::from_integer(n as i64), format!("<t1, t1> = {trace_exact}")),
        Check::new(
            "det_sq_exact",
            det_exact == GaussianRational::from_integer(n_fact as i64),
            format!("<det, det> = {det_exact}"),
        ),
    ];
    Ok(SuiteOutcome {
        results: json!({
            "n": n,
            "trace_sq": estimate_json(&m.trace_sq),
            "det_sq": estimate_json(&m.det_sq),
            "expected_trace_sq": m.expected_trace_sq,
            "expected_det_sq": m.expected_det_sq,
            "trace_sq_exact": trace_exact.to_string(),
            "det_sq_exact": det_exact.to_string(),
        }),
        checks,
    })
}

/// Residual bound for the reproducing-kernel checks.
pub const REPRODUCING_TOL: f64 = 1e-10;
/// Truncation weight for the coherent-state comparison.
pub const COHERENT_WEIGHT: u32 = 30;

fn random_complex(rng: &mut McRng, radius: f64) -> Complex64 {
    Complex64::new(rng.random_range(-radius..radius), rng.random_range(-radius..radius))
}

fn random_alternating(rng: &mut McRng, n: usize, max_weight: u32) -> Result<(ExactPoly, Vec<Partition>)> {
    let pool = enumerate_partitions(max_weight, n);
    let mut f = ExactPoly::zero(n);
    let mut used = Vec::new();
    for _ in 0..3 {
        let lambda = pool[rng.random_range(0..pool.len())].clone();
        let c = GaussianRational::new(
            GaussianRational::from_ratio(rng.random_range(-3..=3), rng.random_range(1..=4)).re,
            GaussianRational::from_ratio(rng.random_range(-3..=3), rng.random_range(1..=4)).re,
        );
        f = &f + &alternant(&shifted(&lambda, n)?)?.scale(&c);
        used.push(lambda);
    }
    Ok((f, used))
}

fn coherent_spectrum(rng: &mut McRng, n: usize) -> Result<Spectrum> {
    let xs = sample_separated_reals(rng, n, -0.4, 0.4, 0.1).expect("interval fits the spectrum");
    Spectrum::new(xs.iter().map(|&x| Complex64::new(x, rng.random_range(-0.1..0.1))).collect())
}

/// ⟨R_a, F⟩ = F(a) for random alternating F, and the coherent-state form of ψ.
pub fn reproducing(n: usize, max_weight: u32, count: usize, seed: u64) -> Result<SuiteOutcome> {
    let mut rng = McRng::seed_from_u64(seed);
    let mut inputs = Vec::with_capacity(count);
    for _ in 0..count {
        let (f, lambdas) = random_alternating(&mut rng, n, max_weight)?;
        let a = Spectrum::new((0..n).map(|_| random_complex(&mut rng, 1.0)).collect())?;
        let x = coherent_spectrum(&mut rng, n)?;
        let y = coherent_spectrum(&mut rng, n)?;
        inputs.push((f, lambdas, a, x, y));
    }
    let cases = inputs
        .par_iter()
        .map(|(f, lambdas, a, x, y)| {
            let residual = coherent_reproducing_check(a, &AltPoly::new(f.clone())?, max_weight)?;
            let (lhs, rhs) = psi_coherent_sides(x, y, COHERENT_WEIGHT)?;
            let gap = (lhs - rhs).norm();
            let coherent_ok = gap <= REPRODUCING_TOL * rhs.norm().max(1.0);
            let labels: Vec<String> = lambdas.iter().map(partition_label).collect();
            Ok(json!({
                "F": f.to_string(),
                "lambdas": labels,
                "a": a.eigs().iter().copied().map(complex_json).collect::<Vec<_>>(),
                "residual": residual,
                "x": x.eigs().iter().copied().map(complex_json).collect::<Vec<_>>(),
                "y": y.eigs().iter().copied().map(complex_json).collect::<Vec<_>>(),
                "kernel_series": complex_json(lhs),
                "alternating_side": complex_json(rhs),
                "coherent_gap": gap,
                "pass": residual < REPRODUCING_TOL && coherent_ok,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let check = tally("reproducing", &cases, "cases");
    Ok(SuiteOutcome {
        results: json!({
            "n": n,
            "max_weight": max_weight,
            "count": count,
            "seed": seed,
            "tolerance": REPRODUCING_TOL,
            "coherent_weight": COHERENT_WEIGHT,
            "cases": cases,
        }),
        checks: vec![check],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_suites_pass_at_small_size() {
        assert!(alt_orthonormal(2, 3).unwrap().passed());
        assert!(inv_orthonormal(2, 3).unwrap().passed());
        assert!(unitarity(2, 3).unwrap().passed());
        assert!(diffop(2, 2).unwrap().passed());
        assert!(fourier(2, 4, 4, 1).unwrap().passed());
        assert!(reproducing(2, 4, 3, 1).unwrap().passed());
    }

    #[test]
    fn ginibre_suite() {
        let out = ginibre(2, &McPlan::new(1, 20_000).with_workers(4)).unwrap();
        assert!(out.passed(), "{:?}", out.checks);
        assert_eq!(out.results["det_sq_exact"], "2");
    }

    #[test]
    fn case_counts() {
        let out = alt_orthonormal(3, 2).unwrap();
        // (), (1), (2), (1,1): 4 partitions, 10 unordered pairs
        assert_eq!(out.results["cases"].as_array().unwrap().len(), 10);
        assert_eq!(low_generator_monomials(4).len(), 11);
        assert_eq!(partition_label(&Partition::empty()), "()");
        assert_eq!(partition_label(&Partition::new(vec![2, 1]).unwrap()), "(2,1)");
    }
}
