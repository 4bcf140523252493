use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use matgen::circulant::{self, Circulant, MAX_BOX};
use matgen::density::{self, DensityResult, Mode, EXHAUSTIVE_CAP};
use matgen::gentest::{self, SpanRing, Target};
use matgen::presentations::{self as pres, PresentationSpec, Variant, Witness};
use matgen::words::NcPoly;
use matgen::{g2, Error, IntMatrix};
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "matgen", version, about = "Generation of matrix rings by two matrices")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Largest search box or exhaustive enumeration allowed.
    #[arg(long, global = true)]
    cap: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Does a pair (or block pair) generate its target ring?
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Also use the identity (unital subring).
        #[arg(long)]
        unital: bool,
    },
    #[command(subcommand)]
    Msl(MslCmd),
    #[command(subcommand)]
    G2(G2Cmd),
    /// Solutions of a^2 - abc - b^2 = +-1.
    Pell {
        #[arg(long)]
        c: i64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// List every sign pattern instead of positive a, b only.
        #[arg(long)]
        all_signs: bool,
    },
    #[command(subcommand)]
    Present(PresentCmd),
    /// Rank growth of a witness model.
    Witness {
        /// e.g. elim1(2), elim7(5,1)
        name: String,
        #[arg(long, value_delimiter = ',', default_value = "4,8,12")]
        cutoffs: Vec<usize>,
    },
    Magnus {
        #[arg(long)]
        n: usize,
    },
    #[command(subcommand)]
    Circulant(CircCmd),
    #[command(subcommand)]
    Rep(RepCmd),
    #[command(subcommand)]
    Density(DensityCmd),
    /// Runs the regression suite; exit 1 on any mismatch.
    Corpus,
}

#[derive(Subcommand)]
enum MslCmd {
    Pair {
        #[arg(long)]
        input: PathBuf,
        /// z, q or a prime p
        #[arg(long, default_value = "z")]
        ring: String,
    },
    Survey {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum G2Cmd {
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    Solve {
        #[arg(long)]
        c: i64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long)]
        emit_pairs: bool,
    },
}

#[derive(Subcommand)]
enum PresentCmd {
    Relators {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        variant: String,
    },
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        variant: String,
    },
    Rank {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        probe: Option<usize>,
    },
    Member {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        target: String,
        #[arg(long)]
        max_degree: usize,
    },
    /// Conditions on H for the shortened presentation.
    H {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        h: Vec<usize>,
    },
    /// Intermediate identities of the n = 4, 5 derivations.
    Chain {
        #[arg(long)]
        n: usize,
    },
    Noidentity {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "8,10")]
        bounds: Vec<usize>,
    },
    Idempotent {
        #[arg(long)]
        n: usize,
    },
}

#[derive(clap::Args)]
struct SpecArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "grigdream")]
    variant: String,
    /// One relator per line; replaces the variant's relators.
    #[arg(long)]
    relators: Option<PathBuf>,
    #[arg(long)]
    non_unital: bool,
}

#[derive(Subcommand)]
enum CircCmd {
    Units {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: u64,
    },
    Y1 {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        d: Vec<i64>,
    },
    Higman {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    Canonicalize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
    },
    Nonneg {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Fraction of generating pairs over F_q; exhaustive unless --samples.
    Fq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    G2z {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    Coprime {
        #[arg(long)]
        pcut: u64,
        #[arg(long, requires_all = ["samples", "seed"])]
        k: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    Sweep {
        #[arg(long, value_delimiter = ',')]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        qs: Vec<u64>,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn matrix_field(v: &Value, key: &str) -> anyhow::Result<IntMatrix> {
    let m = v.get(key).ok_or_else(|| anyhow!("missing field {key}"))?;
    matgen::json::matrix::deserialize(m.clone()).map_err(|e| anyhow!("field {key}: {e}"))
}

fn square(m: &IntMatrix, n: Option<u64>, key: &str) -> anyhow::Result<()> {
    if !m.is_square() || n.is_some_and(|n| n as usize != m.rows()) {
        bail!(Error::ShapeMismatch(format!("{key} is {}x{}, declared n = {n:?}", m.rows(), m.cols())));
    }
    Ok(())
}

fn single_pair(v: &Value) -> anyhow::Result<(IntMatrix, IntMatrix)> {
    let n = v.get("n").map(|n| n.as_u64().ok_or_else(|| anyhow!("n must be a non-negative integer"))).transpose()?;
    let (a, b) = (matrix_field(v, "A")?, matrix_field(v, "B")?);
    square(&a, n, "A")?;
    square(&b, n, "B")?;
    if a.rows() != b.rows() {
        bail!(Error::ShapeMismatch("A and B differ in size".into()));
    }
    Ok((a, b))
}

/// A pair file, or a `blocks` file assembled into a block diagonal pair.
fn read_pair(path: &Path) -> anyhow::Result<(IntMatrix, IntMatrix, Target)> {
    let v = read_json(path)?;
    if let Some(blocks) = v.get("blocks") {
        let list = blocks.as_array().ok_or_else(|| anyhow!("blocks must be a list"))?;
        if list.is_empty() {
            bail!("blocks is empty");
        }
        let pairs = list.iter().map(single_pair).collect::<anyhow::Result<Vec<_>>>()?;
        let sizes = pairs.iter().map(|p| p.0.rows()).collect();
        let (a, b) = gentest::assemble_blocks(&pairs);
        return Ok((a, b, Target::Product { sizes }));
    }
    let (a, b) = single_pair(&v)?;
    let n = a.rows();
    let target = match v.get("p") {
        Some(p) => Target::MatricesModP { n, p: p.as_u64().ok_or_else(|| anyhow!("p must be a positive integer"))? },
        None => Target::Matrices { n },
    };
    Ok((a, b, target))
}

fn read_rep(path: &Path) -> anyhow::Result<(IntMatrix, IntMatrix)> {
    let v = read_json(path)?;
    Ok((matrix_field(&v, "X")?, matrix_field(&v, "Y")?))
}

fn spec_from(args: &SpecArgs) -> anyhow::Result<PresentationSpec> {
    let variant: Variant = args.variant.parse()?;
    let Some(path) = &args.relators else {
        let mut spec = pres::standard_relators(args.n, variant)?;
        spec.unital &= !args.non_unital;
        return Ok(spec);
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let relators = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<NcPoly>().with_context(|| format!("relator '{l}'")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(PresentationSpec::custom(args.n, variant, relators, !args.non_unital))
}

fn emit_json<T: Serialize>(v: &T) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn emit_csv(header: &str, rows: &[Vec<String>]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(header.split(','))?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn emit_density(format: Format, rows: &[DensityResult]) -> anyhow::Result<()> {
    match format {
        Format::Csv => emit_csv(DensityResult::csv_header(), &rows.iter().map(DensityResult::csv_row).collect::<Vec<_>>()),
        Format::Json if rows.len() == 1 => emit_json(&rows[0]),
        Format::Json => emit_json(&rows),
    }
}

/// Outcome of a run: exit code 0 unless the command itself says otherwise.
fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let fmt = cli.format;
    let json_only = |what: &str| -> anyhow::Result<()> {
        if fmt == Format::Csv {
            bail!("csv output is not available for {what}");
        }
        Ok(())
    };
    match cli.cmd {
        Cmd::Check { input, unital } => {
            json_only("check")?;
            let (a, b, target) = read_pair(&input)?;
            emit_json(&gentest::is_generating_with(&a, &b, &target, unital)?)?;
        }
        Cmd::Msl(MslCmd::Pair { input, ring }) => {
            json_only("msl")?;
            let (a, b, _) = read_pair(&input)?;
            let span = match ring.as_str() {
                "z" => SpanRing::Integers,
                "q" => SpanRing::Rationals,
                p => SpanRing::Field(p.parse().map_err(|_| anyhow!("ring must be z, q or a prime, got {p}"))?),
            };
            match gentest::msl(&a, &b, span) {
                Ok(m) => emit_json(&json!({ "generates": true, "msl": m }))?,
                Err(Error::NotGenerating) => emit_json(&json!({ "generates": false, "msl": null }))?,
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::Msl(MslCmd::Survey { n, p, samples, seed }) => {
            let s = gentest::msl_survey(n, p, samples, seed)?;
            match fmt {
                Format::Json => emit_json(&s)?,
                Format::Csv => emit_csv(
                    "n,p,samples,seed,msl,count",
                    &s.histogram
                        .iter()
                        .map(|(k, v)| [n.to_string(), p.to_string(), samples.to_string(), seed.to_string(), k.to_string(), v.to_string()].to_vec())
                        .collect::<Vec<_>>(),
                )?,
            }
        }
        Cmd::G2(G2Cmd::Check { input }) => {
            json_only("g2 check")?;
            let (a, b, _) = read_pair(&input)?;
            let check = g2::g2_fast_check(&a, &b)?;
            let reduction = if check.generates { Some(g2::reduce_triple(&a, &b)?) } else { None };
            emit_json(&json!({ "check": check, "reduction": reduction }))?;
        }
        Cmd::G2(G2Cmd::Solve { c, count, emit_pairs }) => {
            json_only("g2 solve")?;
            let mut out = Vec::new();
            for s in g2::enumerate_solutions(c, count)? {
                let fast = g2::g2_fast_check(&s.a1, &s.b1)?.generates;
                let triple = gentest::is_generating_with(&s.a1, &s.b1, &Target::Matrices { n: 2 }, true)?.generates();
                let mut v = serde_json::to_value(&s)?;
                let obj = v.as_object_mut().expect("solution serializes to an object");
                if !emit_pairs {
                    obj.remove("a1");
                    obj.remove("b1");
                }
                obj.insert("pair_generates".into(), fast.into());
                obj.insert("triple_generates".into(), triple.into());
                out.push(v);
            }
            emit_json(&out)?;
        }
        Cmd::Pell { c, count, all_signs } => {
            json_only("pell")?;
            let unit = match g2::pell_fundamental(c) {
                Ok(u) => Some(u),
                Err(Error::DegenerateDiscriminant(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let positive = |s: &g2::Solution| all_signs || (s.a.is_positive() && s.b.is_positive());
            let mut batch = count;
            let found = loop {
                let all = g2::enumerate_solutions(c, batch)?;
                let keep: Vec<g2::Solution> = all.iter().filter(|s| positive(s)).take(count).cloned().collect();
                if keep.len() == count || all.len() < batch {
                    break keep;
                }
                batch *= 2;
            };
            let sols: Vec<Value> = found
                .iter()
                .map(|s| json!({ "a": s.a.to_string(), "b": s.b.to_string(), "value": s.value.to_string() }))
                .collect();
            emit_json(&json!({ "c": c, "fundamental_unit": unit, "solutions": sols }))?;
        }
        Cmd::Present(p) => {
            json_only("present")?;
            present(p)?;
        }
        Cmd::Witness { name, cutoffs } => {
            json_only("witness")?;
            let w: Witness = name.parse()?;
            emit_json(&pres::witness_rank_growth(w, &cutoffs)?)?;
        }
        Cmd::Magnus { n } => {
            json_only("magnus")?;
            emit_json(&pres::magnus_directness(n)?)?;
        }
        Cmd::Circulant(c) => {
            json_only("circulant")?;
            match c {
                CircCmd::Units { n, bound } => {
                    let cap = cli.cap.unwrap_or(MAX_BOX);
                    let size = (2 * bound + 1).checked_pow(n as u32);
                    if size.is_none_or(|s| s > cap) {
                        bail!(Error::ResourceCap(format!("search box (2*{bound}+1)^{n} exceeds {cap}")));
                    }
                    emit_json(&circulant::find_circulant_units(n, bound)?)?;
                }
                CircCmd::Y1 { c, d } => {
                    let r = circulant::build_and_verify_y1(&Circulant::from_i64(&c)?, &Circulant::from_i64(&d)?)?;
                    emit_json(&r)?;
                }
                CircCmd::Higman { n } => emit_json(&json!({ "n": n, "rank": circulant::higman_rank(n) }))?,
            }
        }
        Cmd::Rep(RepCmd::Canonicalize { input, n }) => {
            json_only("rep")?;
            let (x, y) = read_rep(&input)?;
            emit_json(&circulant::canonicalize_representation(&x, &y, n)?)?;
        }
        Cmd::Rep(RepCmd::Nonneg { input, n }) => {
            json_only("rep")?;
            let (x, _) = read_rep(&input)?;
            emit_json(&circulant::nonneg_root_check(&x, n)?)?;
        }
        Cmd::Density(d) => {
            let cap = cli.cap.unwrap_or(EXHAUSTIVE_CAP);
            match d {
                DensityCmd::Fq { n, q, samples, seed } => {
                    let mode = match (samples, seed) {
                        (Some(samples), Some(seed)) => Mode::MonteCarlo { samples, seed },
                        _ => Mode::Exhaustive { cap },
                    };
                    emit_density(fmt, &[density::fq_fraction(n, q, mode)?])?;
                }
                DensityCmd::G2z { k, samples, seed } => emit_density(fmt, &[density::g2z_box_fraction(k, samples, seed)?])?,
                DensityCmd::Coprime { pcut, k, samples, seed } => {
                    json_only("density coprime")?;
                    let mc = k.zip(samples).zip(seed).map(|((k, s), seed)| (k, s, seed));
                    emit_json(&density::coprimality_product(pcut, mc)?)?;
                }
                DensityCmd::Sweep { ns, qs, samples, seed } => emit_density(fmt, &density::sweep(&ns, &qs, samples, seed, cap)?)?,
            }
        }
        Cmd::Corpus => {
            let cases = matgen::corpus::run_corpus();
            match fmt {
                Format::Json => emit_json(&cases)?,
                Format::Csv => emit_csv(
                    "id,module,expected,observed,pass",
                    &cases
                        .iter()
                        .map(|c| vec![c.id.into(), c.module.into(), c.expected.into(), c.observed.clone(), c.pass.to_string()])
                        .collect::<Vec<_>>(),
                )?,
            }
            if cases.iter().any(|c| !c.pass) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn present(cmd: PresentCmd) -> anyhow::Result<()> {
    match cmd {
        PresentCmd::Relators { n, variant } => emit_json(&pres::standard_relators(n, variant.parse()?)?),
        PresentCmd::Check { input, variant } => {
            let (a, b, _) = read_pair(&input)?;
            let spec = pres::standard_relators(a.rows(), variant.parse()?)?;
            emit_json(&pres::check_relations(&a, &b, &spec)?)
        }
        PresentCmd::Rank { spec, max_degree, probe } => {
            let spec = spec_from(&spec)?;
            let q = match probe {
                Some(p) => pres::bounded_quotient_rank_probe(&spec, max_degree, p)?,
                None => pres::bounded_quotient_rank(&spec, max_degree)?,
            };
            emit_json(&q)
        }
        PresentCmd::Member { spec, target, max_degree } => {
            let spec = spec_from(&spec)?;
            let target: NcPoly = target.parse()?;
            let m = pres::ideal_membership_bounded(&target, &spec, max_degree)?;
            let verified = m.certificate().map(|c| c.verify(&spec));
            emit_json(&json!({ "relators": spec.relators, "membership": m, "verified": verified }))
        }
        PresentCmd::H { n, h } => {
            let h: BTreeSet<usize> = h.into_iter().collect();
            emit_json(&pres::check_h_conditions(n, &h)?)
        }
        PresentCmd::Chain { n } => emit_json(&pres::said45_chain(n)?),
        PresentCmd::Noidentity { n, bounds } => emit_json(&pres::noidentity_check(n, &bounds)?),
        PresentCmd::Idempotent { n } => emit_json(&pres::central_idempotent_check(n)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let cap = e.downcast_ref::<Error>().is_some_and(Error::is_resource_cap);
            ExitCode::from(if cap { 2 } else { 1 })
        }
    }
}
