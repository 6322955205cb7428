use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use orbeq_core::ansatz::{build_generic, enumerate_specs, AnsatzSpec};
use orbeq_core::equations::{append_nonvanishing, certify_nonvanishing, extract, stats as system_stats};
use orbeq_core::feasibility::{central_charge_warning, export, search_specs, ExportFormat, SearchEnd, SearchOptions};
use orbeq_core::mf::{
    check_gradings, parse_layout, parse_matrix_file, quantum_dimension, verify_factorization, MatrixFactorization, Side, TensorRingPair,
};
use orbeq_core::ring::{parse_polynomial, Polynomial};
use orbeq_core::Rational;

use crate::problem::{matrix_ring, parse_limits, parse_rational, Problem};
use crate::{ExportArg, SideArg};

/// Live parameters above which helper equations are counted without being
/// built.
const SYMBOLIC_HELPER_BOUND: usize = 40;

pub fn validate(path: &Path) -> Result<u8> {
    let problem = Problem::load(path)?;
    println!("problem {}", problem.name);
    let mut potentials = Vec::new();
    for (i, label) in ["left", "right"].into_iter().enumerate() {
        let side = problem.validate_side(i).with_context(|| format!("{label} potential"))?;
        let p = &side.potential;
        let r = p.ring();
        let weights: Vec<String> = (0..r.nvars()).map(|v| format!("{} {}", r.name(v), r.weight(v))).collect();
        println!("{label} {p}");
        if side.written_degree == orbeq_core::scalar::int(2) {
            println!("  degree 2");
        } else {
            println!("  degree {} (weights rescaled to degree 2)", side.written_degree);
        }
        println!("  weights {}", weights.join(", "));
        println!("  jacobian dimension {}", p.jacobian_dimension());
        println!("  central charge {}", p.central_charge());
        potentials.push(side.potential);
    }
    let right = potentials.pop().unwrap();
    let pair = TensorRingPair::new(potentials.pop().unwrap(), right)?;
    match central_charge_warning(&pair) {
        Some(w) => println!("{w}"),
        None => println!("central charges agree"),
    }
    Ok(0)
}

fn single_spec(problem: &Problem, pair: &TensorRingPair) -> Result<AnsatzSpec> {
    let seed = problem.seed(pair, None)?;
    problem.spec(pair, seed)?.context("the problem has no ansatz block, seed or shifts")
}

pub fn stats(path: &Path, full: bool, detail: bool) -> Result<u8> {
    let problem = Problem::load(path)?;
    let pair = problem.pair()?;
    let gmf = build_generic(&single_spec(&problem, &pair)?)?;
    let sys = extract(&gmf, !full);
    let counted = if sys.parameter_count() <= SYMBOLIC_HELPER_BOUND {
        system_stats(&append_nonvanishing(&sys, &gmf)?)
    } else {
        // the helper is c · q − 1 with q a product of one derivative of the
        // differential per variable, so its degree is the variable count + 1
        let [l, r] = certify_nonvanishing(&gmf, 0, 8)?;
        for (ok, side) in [(l, "left"), (r, "right")] {
            if !ok {
                eprintln!("note: the {side} quantum dimension vanished at every sampled point");
            }
        }
        system_stats(&sys).with_helpers(pair.ring().nvars() as u32 + 1)
    };
    println!("{}", counted.table_row(&problem.name));
    if detail {
        println!("{counted}");
    }
    Ok(0)
}

fn load_mf(
    problem: &Problem,
    matrix: &Path,
    params: &[String],
    target: Option<&str>,
) -> Result<(TensorRingPair, MatrixFactorization, bool)> {
    let pair = problem.pair()?;
    let ring = matrix_ring(&pair, params)?;
    let text = std::fs::read_to_string(matrix).with_context(|| format!("cannot read {}", matrix.display()))?;
    let graded = parse_layout(&text).with_context(|| format!("in {}", matrix.display()))?.shifts.is_some();
    let (module, sharp, flat) = parse_matrix_file(&text, &ring).with_context(|| format!("in {}", matrix.display()))?;
    let target = match target {
        Some(t) => parse_polynomial(t, &ring).context("in --target")?,
        None => pair.target().embed(&ring).context("target outside the matrix ring")?,
    };
    Ok((pair, MatrixFactorization::new(module, sharp, flat, target)?, graded))
}

fn sides(side: SideArg) -> Vec<(Side, &'static str)> {
    match side {
        SideArg::Left => vec![(Side::Left, "left")],
        SideArg::Right => vec![(Side::Right, "right")],
        SideArg::Both => vec![(Side::Left, "left"), (Side::Right, "right")],
    }
}

fn print_qdim(label: &str, q: &Polynomial) {
    if q.is_zero() {
        println!("qdim {label}: 0  ** ZERO: this factorization gives no equivalence **");
    } else {
        println!("qdim {label}: {q}");
    }
}

pub fn qdim(path: &Path, matrix: &Path, side: SideArg, params: &[String]) -> Result<u8> {
    let problem = Problem::load(path)?;
    let (pair, mf, _) = load_mf(&problem, matrix, params, None)?;
    for (s, label) in sides(side) {
        print_qdim(label, &quantum_dimension(&mf, &pair, s)?);
    }
    Ok(0)
}

pub fn verify(path: &Path, matrix: &Path, params: &[String], target: Option<&str>) -> Result<u8> {
    let problem = Problem::load(path)?;
    let (pair, mf, graded) = load_mf(&problem, matrix, params, target)?;
    let v = verify_factorization(&mf);
    let ok = v.is_verified();
    println!("factorization: {}", if ok { "pass" } else { "fail" });
    for (name, m) in [("sharp*flat - h", &v.sharp_flat), ("flat*sharp - h", &v.flat_sharp)] {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m.get(i, j).is_zero() {
                    println!("  residual {name} ({},{}): {}", i + 1, j + 1, m.get(i, j));
                }
            }
        }
    }
    if graded {
        match check_gradings(&mf) {
            Ok(()) => println!("gradings: pass"),
            Err(e) => println!("gradings: fail ({e})"),
        }
    } else {
        println!("gradings: not checked (no shifts given)");
    }
    let mut nonzero = true;
    for (s, label) in sides(SideArg::Both) {
        let q = quantum_dimension(&mf, &pair, s)?;
        nonzero &= !q.is_zero();
        print_qdim(label, &q);
    }
    let pass = ok && nonzero;
    println!("verdict: {}", if pass { "pass" } else { "fail" });
    Ok(if pass { 0 } else { 1 })
}

#[derive(Args)]
pub struct SearchArgs {
    problem: PathBuf,
    #[arg(long, default_value_t = 1)]
    max_rank: usize,
    #[arg(long, default_value = "1", value_parser = parse_rational)]
    shift_bound: Rational,
    /// Seed file; overrides the problem's `seed` line.
    #[arg(long)]
    seed: Option<PathBuf>,
    /// Extract only `sharp · flat` (the default) or both products.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    half: bool,
    /// Dump each candidate's extracted system instead of checking it.
    #[arg(long, value_enum)]
    export: Option<ExportArg>,
    /// `steps <n> polys <n> seconds <n>`; overrides the problem's limits.
    #[arg(long, value_parser = parse_limits)]
    limits: Option<orbeq_core::groebner::Limits>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Linear substitutions per elimination round.
    #[arg(long)]
    passes: Option<usize>,
    /// Live parameters above which a candidate is reported as resource
    /// limited instead of building its helper equations.
    #[arg(long, default_value_t = SearchOptions::default().helper_bound)]
    helper_bound: usize,
    #[arg(long)]
    no_witness: bool,
    /// Print per-candidate wall time on stderr.
    #[arg(long)]
    timings: bool,
}

pub fn search(args: &SearchArgs) -> Result<u8> {
    let problem = Problem::load(&args.problem)?;
    let pair = problem.pair()?;
    println!("problem {}", problem.name);
    let seed = problem.seed(&pair, args.seed.as_deref())?;
    let specs: Vec<AnsatzSpec> = match problem.spec(&pair, seed)? {
        Some(spec) => vec![spec],
        None => enumerate_specs(&pair, args.max_rank, &args.shift_bound).collect(),
    };
    if let Some(w) = central_charge_warning(&pair) {
        println!("{w}");
    }
    if let Some(fmt) = args.export {
        let format = match fmt {
            ExportArg::Native => ExportFormat::Native,
            ExportArg::MqStyle => ExportFormat::MqStyle,
        };
        for (i, spec) in specs.iter().enumerate() {
            let sys = extract(&build_generic(spec)?, args.half);
            println!("# candidate #{i} {spec}");
            print!("{}", export(&sys, format)?);
        }
        return Ok(0);
    }
    let options = SearchOptions {
        max_rank: args.max_rank,
        shift_bound: args.shift_bound.clone(),
        half: args.half,
        limits: args.limits.clone().unwrap_or_else(|| problem.limits()),
        max_passes: args.passes.unwrap_or(usize::MAX),
        jobs: args.jobs,
        helper_bound: args.helper_bound,
        witness: !args.no_witness,
    };
    let (count, end) = search_specs(specs, &options, |r| {
        println!("{r}");
        if args.timings {
            eprintln!("#{} took {:.3}s", r.index, r.verdict.elapsed.as_secs_f64());
        }
    })?;
    Ok(match end {
        SearchEnd::Found(i) => {
            println!("result: consistent at candidate #{i}");
            0
        }
        SearchEnd::Exhausted => {
            println!("result: exhausted {count} candidates without a consistent system");
            1
        }
        SearchEnd::AllResourceLimited => {
            println!("result: resource limits prevented a verdict on all {count} candidates");
            3
        }
    })
}
