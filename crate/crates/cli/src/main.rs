//! `insdel-lab`: encode, corrupt, decode and run experiments from the shell.

mod experiments;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use insdel_core::analysis::{f_max, nonpositivity_lhs};
use insdel_core::bukhma::{build_code, inner_list_decode};
use insdel_core::channel::{apply_script, random_script, script_cost, EditScript};
use insdel_core::concat::{
    concat_decode_report, concat_encode, default_delta_out, default_gamma_out, ConcatDescriptor,
    OuterCodeContract, SubstituteOuterCode,
};
use insdel_core::plot::{region_svg, QueryPoint};
use insdel_core::rational::{self, format_rational, int, to_f64};
use insdel_core::region::{boundary_line, contains, region_vertices, Point};
use insdel_core::{Rational, Seq, RNG_NAME};
use serde::Serialize;
use serde_json::json;

use crate::io::{emit, load_code, load_seq, parse_rat, read_json, to_csv, to_json};

#[derive(Parser, Debug)]
#[command(name = "insdel-lab", version, about = "List-decodable insertion/deletion code lab")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "INSDEL_LAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for experiment trials.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode with a Bukh-Ma code or a concatenated code.
    #[command(subcommand)]
    Encode(Encode),
    /// Build a concatenated-code parameter file.
    InitConcat(InitConcat),
    /// Apply a random or given edit script.
    Corrupt(Corrupt),
    /// List-decode one received block against a Bukh-Ma code.
    DecodeInner(DecodeInner),
    /// Run the window decoder of a concatenated code.
    DecodeConcat(DecodeConcat),
    /// Vertices, boundary lines and membership queries for F_q.
    Region(RegionCmd),
    #[command(subcommand)]
    Experiment(experiments::Experiment),
    /// Closed forms from the appendix lemmas.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Subcommand, Debug)]
pub enum Encode {
    /// Code descriptor, or one codeword with `--index`.
    Bukhma {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rat)]
        eps: Rational,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        index: Option<usize>,
    },
    /// Encode an outer message with a concatenated code.
    Concat {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        message: usize,
    },
}

#[derive(Args, Debug)]
pub struct InitConcat {
    #[arg(long, value_parser = parse_rat)]
    eps: Rational,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    n_in: usize,
    /// eps used to build the inner period ladder; defaults to `--eps`.
    #[arg(long, value_parser = parse_rat)]
    inner_eps: Option<Rational>,
    /// Decoding eps of the inner decoder; defaults to the largest allowed.
    #[arg(long, value_parser = parse_rat)]
    eps_in: Option<Rational>,
    #[arg(long)]
    n_out: usize,
    #[arg(long)]
    sigma_out: usize,
    #[arg(long)]
    messages: usize,
    #[arg(long, value_parser = parse_rat)]
    delta_out: Option<Rational>,
    #[arg(long, value_parser = parse_rat)]
    gamma_out: Option<Rational>,
    #[arg(long)]
    list_cap: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Corrupt {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0, conflicts_with = "script")]
    deletions: usize,
    #[arg(long, default_value_t = 0, conflicts_with = "script")]
    insertions: usize,
    /// Apply this script instead of drawing one.
    #[arg(long)]
    script: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecodeInner {
    #[arg(long)]
    code: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    /// Decoding eps; defaults to the code's eps.
    #[arg(long, value_parser = parse_rat)]
    eps: Option<Rational>,
}

#[derive(Args, Debug)]
pub struct DecodeConcat {
    #[arg(long)]
    params: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args, Debug)]
pub struct RegionCmd {
    /// One or more alphabet sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u32>,
    /// Query point `gamma,delta`; repeatable.
    #[arg(long = "point")]
    points: Vec<String>,
    #[arg(long, value_parser = parse_rat, default_value = "0")]
    shrink: Rational,
    /// Output format for this command; overrides `--format`.
    #[arg(long, value_enum)]
    emit: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum Oracle {
    /// Largest `sum f_i p_i` under the product cap `m`.
    Fmax {
        #[arg(long)]
        big_f: f64,
        #[arg(long)]
        big_p: f64,
        #[arg(long)]
        m: f64,
        #[arg(long)]
        q: u32,
    },
    /// Left side of the non-positivity inequality, exactly.
    Nonpositivity {
        #[arg(long, value_delimiter = ',', value_parser = parse_rat, required = true)]
        fstar: Vec<Rational>,
        #[arg(long, value_delimiter = ',', value_parser = parse_rat, required = true)]
        p: Vec<Rational>,
        #[arg(long)]
        z: u32,
    },
}

pub struct Globals {
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Globals {
    pub fn only(&self, allowed: &[Format]) -> Result<()> {
        if !allowed.contains(&self.format) {
            bail!("format {:?} is not available for this command", self.format);
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct CorruptReport {
    seed: Option<u64>,
    rng: &'static str,
    input: Seq,
    script: EditScript,
    deletions: usize,
    insertions: usize,
    output: Seq,
}

fn rat_str(r: &Rational) -> String {
    format_rational(r)
}

fn run(cli: Cli) -> Result<()> {
    let g = Globals {
        seed: cli.seed,
        workers: cli.workers,
        out: cli.out,
        format: cli.format,
    };
    match cli.command {
        Command::Encode(Encode::Bukhma { n, eps, q, index }) => {
            g.only(&[Format::Json, Format::Csv])?;
            let code = build_code(n, eps, q)?;
            let indices: Vec<usize> = match index {
                Some(k) => {
                    code.codeword(k)?;
                    vec![k]
                }
                None => (0..code.len()).collect(),
            };
            let text = if g.format == Format::Csv {
                let rows: Vec<Vec<String>> = indices
                    .iter()
                    .map(|&k| vec![k.to_string(), code.periods[k].to_string(), code.codeword(k).unwrap().to_string()])
                    .collect();
                to_csv(&["index", "period", "codeword"], &rows)
            } else if let Some(k) = index {
                to_json(&json!({
                    "code": code,
                    "index": k,
                    "period": code.periods[k],
                    "codeword": code.codeword(k)?,
                }))?
            } else {
                to_json(&json!({ "code": code, "codewords": code.codewords() }))?
            };
            emit(&g.out, &text)
        }
        Command::Encode(Encode::Concat { params, message }) => {
            g.only(&[Format::Json])?;
            let desc: ConcatDescriptor = serde_json::from_value(read_json(&params)?)?;
            let p = desc.build()?;
            let x = concat_encode(&p, message)?;
            emit(&g.out, &to_json(&json!({ "message": message, "n": x.len(), "codeword": x }))?)
        }
        Command::InitConcat(a) => {
            g.only(&[Format::Json])?;
            let inner = build_code(a.n_in, a.inner_eps.unwrap_or(a.eps), a.q)?;
            let eps_in = a.eps_in.unwrap_or_else(|| insdel_core::concat::eps_in_cap(&a.eps, a.q));
            let contract = OuterCodeContract {
                sigma_out: a.sigma_out,
                n_out: a.n_out,
                delta_out: a.delta_out.unwrap_or_else(|| default_delta_out(&a.eps, a.q)),
                gamma_out: a.gamma_out.unwrap_or_else(|| default_gamma_out(&a.eps, a.sigma_out)),
                list_cap: a.list_cap.unwrap_or(a.messages),
            };
            let outer = SubstituteOuterCode::new(contract, a.messages, g.seed)?;
            let desc = ConcatDescriptor {
                eps: a.eps,
                eps_in,
                inner,
                outer: outer.spec(),
            };
            desc.build()?;
            emit(&g.out, &to_json(&desc)?)
        }
        Command::Corrupt(a) => {
            g.only(&[Format::Json])?;
            let x = load_seq(&a.input)?;
            let (script, seed) = match &a.script {
                Some(path) => (serde_json::from_value::<EditScript>(read_json(path)?)?, None),
                None => (random_script(&x, a.deletions, a.insertions, g.seed)?, Some(g.seed)),
            };
            let output = apply_script(&x, &script)?;
            let cost = script_cost(&script, 1);
            let report = CorruptReport {
                seed,
                rng: RNG_NAME,
                input: x,
                script,
                deletions: cost.deletions,
                insertions: cost.insertions,
                output,
            };
            emit(&g.out, &to_json(&report)?)
        }
        Command::DecodeInner(a) => {
            g.only(&[Format::Json, Format::Csv])?;
            let code = load_code(&a.code)?;
            let w = load_seq(&a.input)?;
            let eps = a.eps.unwrap_or(code.eps);
            let report = inner_list_decode(&w, &code, eps)?;
            let text = if g.format == Format::Csv {
                let rows: Vec<Vec<String>> = report
                    .survivors
                    .iter()
                    .map(|s| {
                        [s.index, s.period, s.deletions, s.insertions, s.z as usize]
                            .iter()
                            .map(usize::to_string)
                            .collect()
                    })
                    .collect();
                to_csv(&["index", "period", "deletions", "insertions", "z"], &rows)
            } else {
                to_json(&json!({
                    "config": { "code": code, "eps": rat_str(&eps) },
                    "received_len": w.len(),
                    "list_size": report.list_size,
                    "survivors": report.survivors,
                }))?
            };
            emit(&g.out, &text)
        }
        Command::DecodeConcat(a) => {
            g.only(&[Format::Json])?;
            let desc: ConcatDescriptor = serde_json::from_value(read_json(&a.params)?)?;
            let p = desc.build()?;
            let w = load_seq(&a.input)?;
            let report = concat_decode_report(&w, &p)?;
            emit(&g.out, &to_json(&json!({ "config": desc, "received_len": w.len(), "report": report }))?)
        }
        Command::Region(a) => region(&g, a),
        Command::Experiment(e) => experiments::run(&g, e),
        Command::Oracle(Oracle::Fmax { big_f, big_p, m, q }) => {
            g.only(&[Format::Json])?;
            let value = f_max(big_f, big_p, m, q)?;
            emit(
                &g.out,
                &to_json(&json!({ "F": big_f, "P": big_p, "m": m, "q": q, "value": value }))?,
            )
        }
        Command::Oracle(Oracle::Nonpositivity { fstar, p, z }) => {
            g.only(&[Format::Json])?;
            let q = fstar.len() as u32;
            let lhs = nonpositivity_lhs(&fstar, &p, q, z)?;
            emit(
                &g.out,
                &to_json(&json!({
                    "fstar": fstar.iter().map(rat_str).collect::<Vec<_>>(),
                    "p": p.iter().map(rat_str).collect::<Vec<_>>(),
                    "q": q,
                    "z": z,
                    "w": z / 2 + 1,
                    "lhs": rat_str(&lhs),
                    "lhs_f64": to_f64(&lhs),
                    "at_most_one": lhs <= int(1),
                }))?,
            )
        }
    }
}

fn parse_point(text: &str) -> Result<Point> {
    let Some((gamma, delta)) = text.split_once(',') else {
        bail!("point {text:?} must be written gamma,delta");
    };
    Ok(Point::new(rational::parse_rational(gamma)?, rational::parse_rational(delta)?))
}

fn region(g: &Globals, a: RegionCmd) -> Result<()> {
    let format = a.emit.unwrap_or(g.format);
    let points: Vec<Point> = a.points.iter().map(|p| parse_point(p)).collect::<Result<_>>()?;
    let mut regions = Vec::new();
    let mut queries = Vec::new();
    let mut report = Vec::new();
    for &q in &a.q {
        let region = region_vertices(q)?;
        let lines: Vec<_> = (1..q).map(|i| boundary_line(q, i)).collect::<insdel_core::Result<_>>()?;
        let mut members = Vec::new();
        for p in &points {
            let m = contains(q, p.gamma, p.delta, a.shrink)?;
            queries.push(QueryPoint { point: p.clone(), inside: m.inside });
            members.push(json!({ "point": p, "inside": m.inside, "z": m.z }));
        }
        report.push(json!({ "q": q, "vertices": region.vertices, "boundary_lines": lines, "queries": members }));
        regions.push(region);
    }
    let text = match format {
        Format::Json => to_json(&json!({ "shrink": rat_str(&a.shrink), "regions": report }))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = regions
                .iter()
                .flat_map(|r| {
                    r.vertices.iter().enumerate().map(move |(k, v)| {
                        vec![r.q.to_string(), k.to_string(), rat_str(&v.gamma), rat_str(&v.delta)]
                    })
                })
                .collect();
            to_csv(&["q", "vertex", "gamma", "delta"], &rows)
        }
        Format::Svg => region_svg(&regions, &queries)?,
    };
    emit(&g.out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
