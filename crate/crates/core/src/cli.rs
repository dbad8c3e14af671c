//! Command-line front end. Every subcommand emits one JSON report per check.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::envalg::{
    baby_verma, central_character, central_operators, dimension_polynomial, has_generalized_character, kw_check,
    simples_in_block, translate, PChar, RestrictedLie,
};
use crate::eulerbwb::{bwb, line_cohomology, serre_check, weyl_euler_char};
use crate::report::{poly_value, Report};
use crate::rootdata::{box_points, RootDatum, Weight};
use crate::springer::{multinomial, orbit_dim, poincare_fit, springer_fiber_dim, Partition};
use crate::suite::{run_suite, Level};
use crate::weylalg::{matrix_algebra_rank, p_curvature, CommPoly, PointData, WeylAlgElement};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "modlie", version, about = "Modular representations of restricted sl(n) and the geometry that counts them")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "MODLIE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Also append the reports to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct BlockArgs {
    /// Root system label, e.g. A1 or A2.
    #[arg(long = "type", default_value = "A1")]
    pub series: String,
    /// The prime; must exceed the Coxeter number
    #[arg(long)]
    pub p: u32,
    /// Jordan type of the nilpotent p-character, e.g. 2,1. Defaults to χ = 0.
    #[arg(long)]
    pub chi: Option<String>,
    /// Weight in fundamental-weight coordinates. Defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the simple modules of a regular block.
    Simples(BlockArgs),
    /// Divisibility of simple dimensions in a block.
    Kw(BlockArgs),
    /// Dimension polynomials of the baby Verma and the simples of a block.
    Dimpoly(BlockArgs),
    /// Translate the baby Verma Z_χ(λ) to μ.
    Translate {
        #[command(flatten)]
        block: BlockArgs,
        /// Target weight μ
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Fail unless the translate has this dimension
        #[arg(long)]
        expect_dim: Option<usize>,
    },
    /// Point counts and Poincaré polynomial of a Springer fiber.
    Springer {
        #[arg(long)]
        partition: String,
    },
    /// Line bundle cohomology on the flag variety.
    Bwb {
        #[arg(long = "type", default_value = "A2")]
        series: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Center, point modules and p-curvature for crystalline differential operators.
    Weylalg {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Frobenius rescaling of Euler characteristics on a box of weights.
    Frobid {
        #[arg(long = "type", default_value = "A1")]
        series: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        radius: i64,
    },
    /// The full acceptance battery.
    Suite {
        #[arg(long, value_enum, default_value = "desk")]
        level: Level,
    },
}

/// Validated inputs shared by the block subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub rd: RootDatum,
    pub p: u32,
    pub partition: Partition,
    pub lambda: Weight,
}

impl BlockArgs {
    pub fn resolve(&self) -> Result<RunConfig, Error> {
        let rd = RootDatum::from_label(&self.series).map_err(|e| Error::Usage(e.to_string()))?;
        let n = rd.rank() + 1;
        rd.check_prime(self.p).map_err(|e| Error::Usage(e.to_string()))?;
        if self.p <= rd.coxeter_number() {
            return Err(Error::Usage(format!("p = {} must exceed the Coxeter number {}", self.p, rd.coxeter_number())));
        }
        let partition = match &self.chi {
            Some(s) => s.parse::<Partition>().map_err(|e| Error::Usage(e.to_string()))?,
            None => Partition::new(vec![1; n]).expect("valid partition"),
        };
        if partition.size() != n {
            return Err(Error::Usage(format!("partition {partition} does not sum to {n}")));
        }
        let lambda = parse_weight(self.lambda.as_deref().unwrap_or(""), rd.rank())?;
        Ok(RunConfig { rd, p: self.p, partition, lambda })
    }
}

fn parse_weight(s: &str, rank: usize) -> Result<Weight, Error> {
    if s.trim().is_empty() {
        return Ok(Weight::zero(rank));
    }
    let w: Weight = s.parse().map_err(|e: crate::rootdata::RootError| Error::Usage(e.to_string()))?;
    if w.rank() != rank {
        return Err(Error::Usage(format!("weight {w} has {} coordinates, expected {rank}", w.rank())));
    }
    Ok(w)
}

fn setup(cfg: &RunConfig) -> Result<(RestrictedLie, PChar), Error> {
    let lie = RestrictedLie::new(cfg.rd.rank() + 1, cfg.p)?;
    let chi = PChar::from_partition(&lie, cfg.partition.clone())?;
    Ok((lie, chi))
}

fn block_inputs(r: &mut Report, cfg: &RunConfig) {
    r.input("type", cfg.rd.label()).input("p", cfg.p).input("chi", cfg.partition.to_string()).input("lambda", &cfg.lambda);
}

fn simples_reports(cfg: &RunConfig, seed: u64, kw_only: bool) -> Result<Vec<Report>, Error> {
    let (lie, chi) = setup(cfg)?;
    let block = simples_in_block(&lie, &chi, &cfg.lambda, seed)?;
    let mut r = if kw_only {
        Report::new("kw", "divisibility", "simple dimensions are divisible by p^codim of the Springer fiber", seed)
    } else {
        Report::new("simples", "count", "simples per regular block = total cohomology of the Springer fiber", seed)
    };
    block_inputs(&mut r, cfg);
    let simples: Vec<_> = block
        .simples
        .iter()
        .map(|s| serde_json::json!({ "dim": s.dim(), "highest_weights": s.highest_weights }))
        .collect();
    r.output("count", block.count()).output("predicted", block.predicted).output("codim", block.codim);
    r.output("simples", simples);
    if kw_only {
        let modulus = (cfg.p as usize).pow(block.codim as u32);
        for s in &block.simples {
            r.verdict(&format!("dim {} at {}", s.dim(), s.highest_weight()), kw_check(&lie, s.dim(), &chi), format!("modulus {modulus}"));
        }
    } else {
        r.verdict("springer", block.count_matches(), format!("{} simples, prediction {}", block.count(), block.predicted));
        r.verdict("kw", block.kw_holds(), format!("codim {}", block.codim));
    }
    Ok(vec![r])
}

fn dimpoly_reports(cfg: &RunConfig, seed: u64) -> Result<Vec<Report>, Error> {
    let (lie, chi) = setup(cfg)?;
    let mut modules = vec![(format!("Z({})", cfg.lambda), baby_verma(&lie, &chi, &cfg.lambda)?)];
    for s in simples_in_block(&lie, &chi, &cfg.lambda, seed)?.simples {
        modules.push((format!("L({})", s.highest_weight()), s.module));
    }
    let mut out = Vec::new();
    for (name, m) in modules {
        let start = Instant::now();
        let mut r = Report::new("dimpoly", &name, "translation dimensions are a polynomial of degree at most dim of the Springer fiber", seed);
        block_inputs(&mut r, cfg);
        r.input("module", &name).input("module_dim", m.dim());
        match dimension_polynomial(&lie, &chi, &cfg.lambda, &m) {
            Ok(dp) => {
                let samples: Vec<_> = dp.samples.iter().map(|(w, d)| serde_json::json!({ "mu": w, "dim": d })).collect();
                r.output("samples", samples).output("d", poly_value(&dp.d)).output("d0", poly_value(&dp.d0));
                r.verdict("fit", true, "exact on every sample");
                r.verdict("degree", dp.d.degree() <= dp.degree_bound, format!("{} ≤ {}", dp.d.degree(), dp.degree_bound));
                r.verdict("integral", true, "d0 integral on the test grid");
            }
            Err(e) => {
                r.verdict("fit", false, e.to_string());
            }
        }
        r.elapsed_ms = start.elapsed().as_millis() as u64;
        out.push(r);
    }
    Ok(out)
}

fn translate_report(cfg: &RunConfig, to: &str, expect: Option<usize>, seed: u64) -> Result<Vec<Report>, Error> {
    let (lie, chi) = setup(cfg)?;
    let mu = parse_weight(to, cfg.rd.rank())?;
    let z = baby_verma(&lie, &chi, &cfg.lambda)?;
    let t = translate(&lie, &z, &cfg.lambda, &mu, &chi)?;
    let mut r = Report::new("translate", "baby-verma", "translation projects V(μ−λ) ⊗ M onto the central character of μ", seed);
    block_inputs(&mut r, cfg);
    r.input("mu", &mu).output("dim", t.dim());
    let ok = t.dim() == 0 || has_generalized_character(&central_operators(&lie, &t)?, &central_character(&lie, &mu), t.dim());
    r.verdict("central character", ok, "result lies over μ");
    if let Some(d) = expect {
        r.verdict("dimension", t.dim() == d, format!("{} vs expected {d}", t.dim()));
    }
    Ok(vec![r])
}

fn springer_report(partition: &str, seed: u64) -> Result<Vec<Report>, Error> {
    let lambda: Partition = partition.parse().map_err(|e: crate::springer::SpringerError| Error::Usage(e.to_string()))?;
    let fit = poincare_fit(&lambda)?;
    let mut r = Report::new("springer", "poincare", "Springer fiber point counts are a polynomial in q", seed);
    r.input("partition", lambda.to_string());
    r.output("samples", &fit.samples)
        .output("coefficients", &fit.coefficients)
        .output("poly", fit.display_poly())
        .output("total", fit.total)
        .output("fiber_dim", springer_fiber_dim(&lambda))
        .output("orbit_dim", orbit_dim(&lambda));
    r.verdict("nonnegative", fit.coefficients.iter().all(|&c| c >= 0), fit.display_poly());
    r.verdict("degree", fit.degree() == springer_fiber_dim(&lambda), format!("{}", fit.degree()));
    r.verdict("total", fit.total == multinomial(&lambda), format!("{} = {}", fit.total, multinomial(&lambda)));
    Ok(vec![r])
}

fn bwb_report(series: &str, lambda: &str, seed: u64) -> Result<Vec<Report>, Error> {
    let rd = RootDatum::from_label(series).map_err(|e| Error::Usage(e.to_string()))?;
    let lambda = parse_weight(lambda, rd.rank())?;
    let h = line_cohomology(&rd, &lambda)?;
    let chi = weyl_euler_char(&rd, &lambda)?;
    let mut r = Report::new("bwb", "line-bundle", "Borel–Weil–Bott for line bundles on the flag variety", seed);
    r.input("type", rd.label()).input("lambda", &lambda);
    r.output("bwb", bwb(&rd, &lambda)?).output("cohomology", &h).output("euler", chi);
    let alt: i64 = h.iter().enumerate().map(|(i, d)| if i % 2 == 0 { *d } else { -d }).sum();
    r.verdict("euler", alt == chi, format!("{alt} = {chi}"));
    r.verdict("serre", serre_check(&rd, &lambda)?, "χ(λ) = ±χ(−λ−2ρ)");
    Ok(vec![r])
}

fn weylalg_reports(n: usize, p: u32, samples: usize, seed: u64) -> Result<Vec<Report>, Error> {
    if !crate::rootdata::is_prime(p) || n == 0 || n > 2 {
        return Err(Error::Usage(format!("need a prime p and 1 ≤ n ≤ 2, got n = {n}, p = {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut center = Report::new("weylalg", "center", "the center is generated by p-th powers of x_i and ∂_i", seed);
    center.input("n", n).input("p", p).input("samples", samples);
    let mut agree = 0;
    let mut central = 0;
    for k in 0..samples {
        let mut a = WeylAlgElement::random(&mut rng, p, n, p + 1, 4);
        if k % 3 == 0 {
            a = crate::suite::random_central(&mut rng, p, n);
        } else if k % 3 == 1 {
            a = a.add(&crate::suite::random_central(&mut rng, p, n))?;
        }
        let c = a.is_central()?;
        central += c as usize;
        agree += (c == a.has_p_divisible_exponents()) as usize;
    }
    center.output("central", central);
    center.verdict("criterion", agree == samples, format!("{agree}/{samples}"));

    let mut points = Report::new("weylalg", "point-modules", "the reduced algebra at a point is a full matrix algebra", seed);
    points.input("n", n).input("p", p);
    for omega in [0u32, 1] {
        let rank = matrix_algebra_rank(&PointData::new(p, vec![0; n], vec![omega; n]))?;
        let want = (p as usize).pow(2 * n as u32);
        points.verdict(&format!("omega={omega}"), rank == want, format!("rank {rank} of {want}"));
    }

    let mut curv = Report::new("weylalg", "p-curvature", "p-curvature of rank one connections on the line", seed);
    curv.input("p", p);
    let zero = p_curvature(&[vec![vec![CommPoly::zero(p, 1)]]])?;
    curv.verdict("trivial", zero[0][0][0].is_zero(), zero[0][0][0].to_string());
    let x = p_curvature(&[vec![vec![CommPoly::var(p, 1, 0)]]])?;
    let want = CommPoly::monomial(p, vec![p], 1);
    curv.verdict("A = x", x[0][0][0] == want, x[0][0][0].to_string());
    Ok(vec![center, points, curv])
}

fn frobid_report(series: &str, p: u32, radius: i64, seed: u64) -> Result<Vec<Report>, Error> {
    let rd = RootDatum::from_label(series).map_err(|e| Error::Usage(e.to_string()))?;
    rd.check_prime(p).map_err(|e| Error::Usage(e.to_string()))?;
    let mut r = Report::new("frobid", "box", "Euler characteristic of O(pν) versus O(ν) under the Frobenius rescaling", seed);
    r.input("type", rd.label()).input("p", p).input("radius", radius);
    let points = box_points(&vec![-radius; rd.rank()], &vec![radius; rd.rank()]);
    let mut bad = Vec::new();
    for nu in &points {
        if !crate::eulerbwb::frobenius_identity_check(&rd, &Weight(nu.clone()), p)? {
            bad.push(nu.clone());
        }
    }
    r.output("weights", points.len()).output("failures", &bad);
    r.verdict("identity", bad.is_empty(), format!("{} weights", points.len()));
    Ok(vec![r])
}

pub fn execute(cli: &Cli) -> Result<Vec<Report>, Error> {
    let seed = cli.seed;
    let start = Instant::now();
    let mut reports = match &cli.command {
        Command::Simples(b) => simples_reports(&b.resolve()?, seed, false)?,
        Command::Kw(b) => simples_reports(&b.resolve()?, seed, true)?,
        Command::Dimpoly(b) => dimpoly_reports(&b.resolve()?, seed)?,
        Command::Translate { block, to, expect_dim } => translate_report(&block.resolve()?, to, *expect_dim, seed)?,
        Command::Springer { partition } => springer_report(partition, seed)?,
        Command::Bwb { series, lambda } => bwb_report(series, lambda, seed)?,
        Command::Weylalg { n, p, samples } => weylalg_reports(*n, *p, *samples, seed)?,
        Command::Frobid { series, p, radius } => frobid_report(series, *p, *radius, seed)?,
        Command::Suite { level } => run_suite(*level, seed)?,
    };
    let elapsed = start.elapsed().as_millis() as u64;
    for r in reports.iter_mut().filter(|r| r.elapsed_ms == 0) {
        r.elapsed_ms = elapsed;
    }
    Ok(reports)
}

/// Parses `args`, runs the subcommand, writes reports to `stdout` and returns
/// the exit code: 0 all verdicts pass, 1 some verdict fails, 2 usage error,
/// 3 internal error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let reports = match execute(&cli) {
        Ok(r) => r,
        Err(Error::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
        Err(e) => {
            eprintln!("internal error: {e}");
            return 3;
        }
    };
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_json_line());
        text.push('\n');
    }
    if stdout.write_all(text.as_bytes()).is_err() {
        return 3;
    }
    if let Some(path) = &cli.out {
        let written = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .and_then(|mut f| f.write_all(text.as_bytes()));
        if let Err(e) = written {
            eprintln!("cannot write {}: {e}", path.display());
            return 3;
        }
    }
    for r in reports.iter().filter(|r| !r.passed()) {
        log::warn!("{} / {} failed", r.subcommand, r.check);
    }
    if reports.iter().all(Report::passed) {
        0
    } else {
        1
    }
}
