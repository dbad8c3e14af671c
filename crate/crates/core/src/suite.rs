//! The acceptance battery: one report per criterion.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::envalg::{
    baby_verma, central_character, central_operators, dimension_polynomial, kostant_spectrum_holds, simples_in_block,
    translate, weyl_module, BlockReport, PChar, RestrictedLie,
};
use crate::eulerbwb::{
    bwb, cohomology_from_sequence, frobenius_identity_check, line_cohomology, serre_check, Bwb, KClass,
    SequenceCohomology,
};
use crate::fplinalg::composition_factors;
use crate::polyq::{rat, PolyQ};
use crate::report::{poly_value, Report};
use crate::rootdata::{box_points, RootDatum, Weight};
use crate::springer::{multinomial, poincare_fit, springer_fiber_dim, Partition};
use crate::weylalg::{matrix_algebra_rank, p_curvature, CommPoly, PointData, WeylAlgElement};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    /// Reduced parameter ranges, a few seconds.
    Smoke,
    /// Every criterion at full size.
    Desk,
}

type Criterion = fn(Level, u64) -> Result<Report, Error>;

pub const CRITERIA: [(&str, Criterion); 12] = [
    ("simple-count", simple_count),
    ("block-highest-weights", block_highest_weights),
    ("kac-weisfeiler", kac_weisfeiler),
    ("dimension-polynomial", dimension_polynomials),
    ("translation-dimensions", translation_dimensions),
    ("kostant-spectrum", kostant_spectrum),
    ("weyl-algebra-center", weyl_algebra_center),
    ("p-curvature", p_curvature_checks),
    ("frobenius-scaling", frobenius_scaling),
    ("flag-cohomology", flag_cohomology),
    ("springer-coherence", springer_coherence),
    ("module-invariants", module_invariants),
];

/// Runs every criterion in order. Parallelism lives inside the criteria so
/// that the recorded timings stay per-criterion.
pub fn run_suite(level: Level, seed: u64) -> Result<Vec<Report>, Error> {
    CRITERIA
        .iter()
        .enumerate()
        .map(|(i, (name, f))| {
            log::info!("criterion {} ({name}) started", i + 1);
            let start = Instant::now();
            let mut r = f(level, seed)?;
            r.check = format!("criterion-{:02}-{name}", i + 1);
            r.elapsed_ms = start.elapsed().as_millis() as u64;
            log::info!("criterion {} finished in {} ms", i + 1, r.elapsed_ms);
            Ok(r)
        })
        .collect()
}

fn w(c: &[i64]) -> Weight {
    Weight(c.to_vec())
}

fn partition(s: &str) -> Partition {
    s.parse().expect("valid partition literal")
}

/// (n, p, partition, expected count)
fn block_configs(level: Level) -> Vec<(usize, u32, &'static str, u64)> {
    let mut out = Vec::new();
    let primes: &[u32] = if level == Level::Desk { &[3, 5, 7] } else { &[5] };
    for &p in primes {
        out.push((2, p, "1,1", 2));
        out.push((2, p, "2", 1));
    }
    out.push((3, 5, "1,1,1", 6));
    if level == Level::Desk {
        out.push((3, 5, "2,1", 3));
        out.push((3, 5, "3", 1));
    }
    out
}

fn blocks(level: Level, seed: u64) -> Result<Vec<(u64, BlockReport)>, Error> {
    block_configs(level)
        .into_par_iter()
        .map(|(n, p, part, expected)| {
            let lie = RestrictedLie::new(n, p)?;
            let chi = PChar::from_partition(&lie, partition(part))?;
            let r = simples_in_block(&lie, &chi, &Weight::zero(n - 1), seed)?;
            Ok((expected, r))
        })
        .collect()
}

fn simple_count(level: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "simples per regular block = total cohomology of the Springer fiber", seed);
    let mut rows = Vec::new();
    for (expected, b) in blocks(level, seed)? {
        let tag = format!("{} p={} chi={}", b.label, b.p, b.partition);
        rows.push(serde_json::json!({ "config": tag, "count": b.count(), "predicted": b.predicted, "dims": b.dims() }));
        rep.verdict(
            &tag,
            b.count() as u64 == b.predicted && b.predicted == expected,
            format!("count {} / springer {} / expected {}", b.count(), b.predicted, expected),
        );
    }
    rep.output("blocks", rows);
    Ok(rep)
}

fn block_highest_weights(_: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "highest weights of the simples in the principal block of sl3 at p=5", seed);
    let lie = RestrictedLie::new(3, 5)?;
    let b = simples_in_block(&lie, &PChar::zero(&lie), &w(&[0, 0]), seed)?;
    let found: BTreeSet<Weight> = b.simples.iter().map(|s| s.highest_weight().clone()).collect();
    let expected: BTreeSet<Weight> =
        [[0, 0], [0, 2], [2, 0], [3, 1], [1, 3], [3, 3]].iter().map(|c| w(c)).collect();
    rep.output("highest_weights", &found).output("dims", b.dims());
    rep.verdict("set", found == expected, format!("{found:?}"));
    rep.verdict(
        "unique",
        b.simples.iter().all(|s| s.highest_weights.len() == 1),
        "one highest weight line per simple",
    );
    Ok(rep)
}

fn kac_weisfeiler(level: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "dimensions of simples are divisible by p^codim of the Springer fiber", seed);
    for (_, b) in blocks(level, seed)? {
        let n = b.partition.size();
        let lie = RestrictedLie::new(n, b.p)?;
        let expected_codim = lie.num_positive_roots() - springer_fiber_dim(&b.partition);
        let tag = format!("{} p={} chi={}", b.label, b.p, b.partition);
        let modulus = (b.p as usize).pow(b.codim as u32);
        let ok = b.codim == expected_codim && b.dims().iter().all(|d| d % modulus == 0);
        rep.verdict(&tag, ok, format!("codim {} dims {:?}", b.codim, b.dims()));
    }
    Ok(rep)
}

fn dimension_polynomials(_: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "translation dimensions are a polynomial of degree at most dim of the Springer fiber", seed);
    let lie = RestrictedLie::new(2, 5)?;
    let chi = PChar::zero(&lie);
    let zero = w(&[0]);
    let z = baby_verma(&lie, &chi, &zero)?;
    let factors = composition_factors(&z, seed)?;
    let mut modules = vec![("Z(0)".to_string(), z)];
    for f in factors {
        modules.push((format!("L dim {}", f.dim()), f.module));
    }
    let mut sum = PolyQ::zero(1);
    let mut verma_poly = PolyQ::zero(1);
    for (name, m) in &modules {
        match dimension_polynomial(&lie, &chi, &zero, m) {
            Ok(dp) => {
                rep.output(name, serde_json::json!({ "d": poly_value(&dp.d), "d0": poly_value(&dp.d0) }));
                rep.verdict(&format!("{name} degree"), dp.d.degree() <= dp.degree_bound, dp.d.to_string());
                if name == "Z(0)" {
                    rep.verdict("Z(0) constant", dp.d == PolyQ::constant(1, rat(5)), dp.d.to_string());
                    verma_poly = dp.d;
                } else {
                    sum = sum.add(&dp.d);
                }
            }
            Err(e) => {
                rep.verdict(&format!("{name} fit"), false, e.to_string());
            }
        }
    }
    rep.verdict("additive", sum == verma_poly, format!("{sum} vs {verma_poly}"));
    Ok(rep)
}

fn translation_dimensions(_: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "translation of a baby Verma to the closure of its alcove and up from a wall", seed);
    let lie = RestrictedLie::new(2, 5)?;
    let chi = PChar::zero(&lie);
    let zero = w(&[0]);
    let z = baby_verma(&lie, &chi, &zero)?;
    for mu in lie.root_datum().alcove_closure(&zero, 5)? {
        let d = translate(&lie, &z, &zero, &mu, &chi)?.dim();
        rep.verdict(&format!("down to {mu}"), d == 5, format!("dim {d}"));
    }
    let wall = w(&[-1]);
    let zw = baby_verma(&lie, &chi, &wall)?;
    let d = translate(&lie, &zw, &wall, &zero, &chi)?.dim();
    rep.verdict("up from -1 to 0", d == 10, format!("dim {d}"));
    Ok(rep)
}

fn kostant_spectrum(level: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "central spectrum on V ⊗ Z lies in the translated central characters", seed);
    let mut cases: Vec<(usize, &str, Vec<i64>)> = Vec::new();
    for part in ["1,1", "2"] {
        for lam in 0..5 {
            cases.push((2, part, vec![lam]));
        }
    }
    let sl3_parts: &[&str] = if level == Level::Desk { &["1,1,1", "2,1", "3"] } else { &["1,1,1"] };
    for part in sl3_parts {
        cases.push((3, part, vec![0, 0]));
        cases.push((3, part, vec![1, 3]));
    }
    let results: Vec<(String, bool)> = cases
        .into_par_iter()
        .map(|(n, part, lam)| -> Result<_, Error> {
            let lie = RestrictedLie::new(n, 5)?;
            let chi = PChar::from_partition(&lie, partition(part))?;
            let lam = Weight(lam);
            let z = baby_verma(&lie, &chi, &lam)?;
            let v = weyl_module(&lie, &Weight::fundamental(n - 1, 0))?;
            let ok = kostant_spectrum_holds(&lie, &z, &lam, &v)?;
            Ok((format!("sl{n} chi={part} lambda={lam}"), ok))
        })
        .collect::<Result<_, _>>()?;
    for (tag, ok) in results {
        rep.verdict(&tag, ok, "");
    }
    Ok(rep)
}

pub(crate) fn random_central(rng: &mut ChaCha8Rng, p: u32, n: usize) -> WeylAlgElement {
    let mut a = WeylAlgElement::zero(p, n);
    for _ in 0..rng.gen_range(1..=3) {
        // at most two p-th powers keeps products under the degree cap
        let mut e = vec![0u32; 2 * n];
        for _ in 0..rng.gen_range(0..=2) {
            e[rng.gen_range(0..2 * n)] = p;
        }
        let (j, i) = (e[..n].to_vec(), e[n..].to_vec());
        a = a.add(&WeylAlgElement::monomial(p, j, i, rng.gen_range(1..p as i64))).expect("same algebra");
    }
    a
}

fn weyl_algebra_center(level: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "center of crystalline differential operators and matrix algebras at points", seed);
    let samples = if level == Level::Desk { 120 } else { 30 };
    for (n, p) in [(1usize, 3u32), (1, 5), (2, 3)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64 * 31 + p as u64));
        let mut agree = 0;
        let mut central = 0;
        for k in 0..samples {
            let mut a = WeylAlgElement::random(&mut rng, p, n, p + 1, 4);
            if k % 3 == 0 {
                a = random_central(&mut rng, p, n);
            } else if k % 3 == 1 {
                a = a.add(&random_central(&mut rng, p, n)).expect("same algebra");
            }
            let c = a.is_central()?;
            central += c as usize;
            agree += (c == a.has_p_divisible_exponents()) as usize;
        }
        rep.verdict(
            &format!("center n={n} p={p}"),
            agree == samples && central > 0 && central < samples,
            format!("{agree}/{samples} agree, {central} central"),
        );
        for omega in [0u32, 1] {
            let pt = PointData::new(p, vec![1; n], vec![omega; n]);
            let rank = matrix_algebra_rank(&pt)?;
            let want = (p as usize).pow(2 * n as u32);
            rep.verdict(&format!("matrix algebra n={n} p={p} omega={omega}"), rank == want, format!("rank {rank}"));
        }
    }
    Ok(rep)
}

fn p_curvature_checks(level: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "p-curvature of rank one connections", seed);
    let p = 3;
    let trivial = p_curvature(&[vec![vec![CommPoly::zero(p, 1)]]])?;
    rep.verdict("trivial", trivial[0][0][0].is_zero(), trivial[0][0][0].to_string());
    let x = p_curvature(&[vec![vec![CommPoly::var(p, 1, 0)]]])?;
    rep.verdict("A = x", x[0][0][0] == CommPoly::monomial(p, vec![3], 1), x[0][0][0].to_string());
    let count = if level == Level::Desk { 20 } else { 5 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9c);
    let mut ok = 0;
    for _ in 0..count {
        let g = CommPoly::random(&mut rng, p, 2, 3, 4);
        let a = vec![vec![vec![g.derivative(0)]], vec![vec![g.derivative(1)]]];
        match p_curvature(&a) {
            Ok(psi) => {
                // for A = dg, ψ_i = (∂_i g)^p + ∂_i^{p−1}(∂_i g)
                let all = (0..2).all(|i| {
                    let gi = g.derivative(i);
                    let mut tail = gi.clone();
                    for _ in 1..p {
                        tail = tail.derivative(i);
                    }
                    psi[i][0][0] == gi.pow(p).add(&tail)
                });
                ok += all as usize;
            }
            Err(e) => log::warn!("random flat connection rejected: {e}"),
        }
    }
    rep.verdict("random flat", ok == count, format!("{ok}/{count}"));
    Ok(rep)
}

fn frobenius_scaling(_: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "Euler characteristic of O(pν) versus O(ν) under the Frobenius rescaling", seed);
    for rank in [1usize, 2] {
        let rd = RootDatum::type_a(rank);
        for p in [5u32, 7] {
            let boxed = box_points(&vec![-2; rank], &vec![2; rank]);
            let mut bad = Vec::new();
            for nu in &boxed {
                if !frobenius_identity_check(&rd, &Weight(nu.clone()), p)? {
                    bad.push(nu.clone());
                }
            }
            rep.verdict(&format!("A{rank} p={p}"), bad.is_empty(), format!("{} weights, failures {bad:?}", boxed.len()));
        }
    }
    Ok(rep)
}

fn flag_cohomology(_: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "cohomology of line bundles and the twisted tangent bundle on the flag variety of SL3", seed);
    let rd = RootDatum::type_a(2);
    let rho = rd.rho().clone();
    let h = line_cohomology(&rd, &rho.scale(-1))?;
    rep.verdict("O(-rho) acyclic", h.iter().all(|&d| d == 0), format!("{h:?}"));
    let pullback = KClass::zero().plus(w(&[0, 1]), 3).plus(w(&[0, 0]), -1);
    let pieces = [KClass::line(rd.simple_root(0)).twist(&rho.scale(-1)), pullback.twist(&rho.scale(-1))];
    let seq = cohomology_from_sequence(&rd, &pieces)?;
    rep.verdict("T(-rho)", seq == SequenceCohomology::Exact(vec![0, 1, 0, 0]), format!("{seq:?}"));
    let b = bwb(&rd, &rho.scale(-5))?;
    let ok = matches!(b, Bwb::Concentrated { degree: 3, dim: 64, .. });
    rep.verdict("O(-5rho)", ok, format!("{b:?}"));
    let boxed = box_points(&[-3, -3], &[3, 3]);
    let mut serre = true;
    for l in boxed {
        serre &= serre_check(&rd, &Weight(l))?;
    }
    rep.verdict("serre", serre, "radius 3 box");
    Ok(rep)
}

fn springer_coherence(level: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "Springer fiber point counts are polynomials with the expected shape", seed);
    let max_n = if level == Level::Desk { 4 } else { 3 };
    let parts: Vec<Partition> = (1..=max_n).flat_map(Partition::all).collect();
    let fits = parts.par_iter().map(poincare_fit).collect::<Result<Vec<_>, _>>()?;
    for fit in fits {
        let d = springer_fiber_dim(&fit.partition);
        let ok = fit.coefficients.iter().all(|&c| c >= 0)
            && fit.degree() == d
            && fit.total == multinomial(&fit.partition);
        rep.verdict(&fit.partition.to_string(), ok, format!("{} (total {})", fit.display_poly(), fit.total));
    }
    Ok(rep)
}

fn module_invariants(level: Level, seed: u64) -> Result<Report, Error> {
    let mut rep = Report::new("suite", "", "PBW confluence, p-character contract, central commutation and dot invariance", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x12);
    let trials = if level == Level::Desk { 8 } else { 3 };
    let mut cases = Vec::new();
    for _ in 0..trials {
        let (n, p) = [(2usize, 3u32), (2, 5), (2, 7), (3, 5)][rng.gen_range(0..4)];
        let parts = Partition::all(n);
        let part = parts[rng.gen_range(0..parts.len())].clone();
        let mu: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(0..p as i64)).collect();
        cases.push((n, p, part, Weight(mu)));
    }
    let mut confluence = true;
    let mut contract = true;
    let mut commute = true;
    for (n, p, part, mu) in &cases {
        let lie = RestrictedLie::new(*n, *p)?;
        let chi = PChar::from_partition(&lie, part.clone())?;
        let z = baby_verma(&lie, &chi, mu)?;
        confluence &= lie.bracket_relations_hold(&z, true)?;
        contract &= lie.frobenius_contract_holds(&z, &chi)?;
        let ops = central_operators(&lie, &z)?;
        commute &= ops.iter().all(|c| z.gens().iter().all(|(_, g)| c.mul(g) == g.mul(c)));
        let want = central_character(&lie, mu);
        let v0 = {
            let mut v = vec![0u32; z.dim()];
            v[0] = 1;
            v
        };
        commute &= ops.iter().zip(&want).all(|(c, &s)| {
            let img = c.mul_vec(&v0);
            img[0] == s && img[1..].iter().all(|&x| x == 0)
        });
    }
    let lie = RestrictedLie::new(3, 5)?;
    let chi = PChar::zero(&lie);
    let block = simples_in_block(&lie, &chi, &w(&[0, 0]), seed)?;
    for s in &block.simples {
        contract &= lie.frobenius_contract_holds(&s.module, &chi)?;
    }
    let mut dot = true;
    for (n, p) in [(2usize, 5u32), (3, 5), (3, 7)] {
        let lie = RestrictedLie::new(n, p)?;
        let rd = lie.root_datum();
        for _ in 0..trials * 4 {
            let mu = Weight((0..n - 1).map(|_| rng.gen_range(-12..12)).collect());
            let c = central_character(&lie, &mu);
            for wd in rd.weyl_group() {
                dot &= central_character(&lie, &rd.dot_action(&wd, &mu)?) == c;
            }
            let shift = Weight((0..n - 1).map(|_| p as i64 * rng.gen_range(-2..3)).collect());
            dot &= central_character(&lie, &mu.add(&shift)) == c;
        }
    }
    rep.input("cases", cases.iter().map(|(n, p, part, mu)| format!("sl{n} p={p} chi={part} mu={mu}")).collect::<Vec<_>>());
    rep.verdict("pbw confluence", confluence, "bracket relations hold exactly on random baby Vermas");
    rep.verdict("p-character contract", contract, "x^p - x^[p] acts by chi(x)^p");
    rep.verdict("central commutation", commute, "Gelfand operators commute and act on v+ by the predicted scalar");
    rep.verdict("dot invariance", dot, "central characters constant on W-dot orbits and p-translates");
    Ok(rep)
}
