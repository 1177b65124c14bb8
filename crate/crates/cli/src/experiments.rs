//! `experiment` subcommands. Every report echoes its full configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Subcommand, ValueEnum};
use insdel_core::analysis::{classify_blocks, martingale_trace, MartingaleConfig, Padding};
use insdel_core::bukhma::{build_code, InnerDecoder};
use insdel_core::channel::{apply_script, random_script_with, trial_rng};
use insdel_core::plot::{heatmap_svg, region_svg, HeatCell, QueryPoint};
use insdel_core::rational::{self, format_rational, int, to_f64};
use insdel_core::region::{adversary_single, adversary_timeshare, contains, region_vertices, Point};
use insdel_core::{Rational, Seq, RNG_NAME};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{emit, load_seq, parse_rat, run_indexed, to_csv, to_json};
use crate::{Format, Globals};

#[derive(Subcommand, Debug)]
pub enum Experiment {
    /// Inner list sizes over a (gamma, delta) grid, or exhaustively.
    ListSize(ListSize),
    /// Exact martingale trace of a string against a period ladder.
    Martingale(Martingale),
    /// Block labels of a string under its best alternating match.
    Classify(Classify),
    /// Collapsing adversaries against many codewords.
    Adversary(Adversary),
}

#[derive(Args, Debug, Serialize)]
pub struct ListSize {
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_rat)]
    #[serde(with = "rational::serde_str")]
    eps: Rational,
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Decoding eps; defaults to `--eps`.
    #[arg(long, value_parser = parse_rat)]
    #[serde(skip)]
    decode_eps: Option<Rational>,
    /// Points per axis of the (gamma, delta) grid.
    #[arg(long, default_value_t = 5)]
    grid: usize,
    #[arg(long, value_parser = parse_rat, default_value = "1")]
    #[serde(with = "rational::serde_str")]
    gamma_max: Rational,
    #[arg(long, value_parser = parse_rat, default_value = "1/2")]
    #[serde(with = "rational::serde_str")]
    delta_max: Rational,
    /// Trials per grid cell.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Enumerate every received string up to this length instead.
    #[arg(long)]
    exhaustive_len: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Martingale {
    /// JSON file holding the string.
    #[arg(long, conflicts_with = "v_text")]
    v: Option<PathBuf>,
    /// The string written in base 36.
    #[arg(long)]
    v_text: Option<String>,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, value_parser = parse_rat)]
    eps: Rational,
    #[arg(long, value_delimiter = ',', required = true)]
    periods: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    z: u32,
    /// exact, truncate, or continue:R to extend as a prefix of A_R.
    #[arg(long, default_value = "exact", value_parser = parse_padding)]
    padding: Padding,
    /// Omit per-block records.
    #[arg(long)]
    summary: bool,
}

#[derive(Args, Debug)]
pub struct Classify {
    #[arg(long, conflicts_with = "v_text")]
    v: Option<PathBuf>,
    #[arg(long)]
    v_text: Option<String>,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 1)]
    z: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Random strings with every symbol exactly n/q times.
    Balanced,
    /// Uniformly random strings.
    Random,
    /// Codewords of a Bukh-Ma code (needs `--eps`).
    Bukhma,
}

#[derive(Args, Debug, Serialize)]
pub struct Adversary {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = Source::Balanced)]
    source: Source,
    #[arg(long, value_parser = parse_rat)]
    #[serde(with = "opt_rat")]
    eps: Option<Rational>,
    /// Time-share the attacks `i` and `i+1` with this split.
    #[arg(long, value_parser = parse_rat)]
    #[serde(with = "opt_rat")]
    alpha: Option<Rational>,
}

mod opt_rat {
    use super::*;
    pub fn serialize<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }
}

fn parse_padding(s: &str) -> std::result::Result<Padding, String> {
    match s {
        "exact" => Ok(Padding::Exact),
        "truncate" => Ok(Padding::Truncate),
        other => other
            .strip_prefix("continue:")
            .and_then(|r| r.parse().ok())
            .map(|r| Padding::ContinueAlternating { r })
            .ok_or_else(|| format!("unknown padding {s:?}; use exact, truncate or continue:R")),
    }
}

#[derive(Serialize)]
struct Report<C: Serialize, T: Serialize, S: Serialize> {
    experiment: &'static str,
    rng: &'static str,
    seed: u64,
    config: C,
    trials: T,
    summary: S,
    timings: Timings,
}

#[derive(Serialize)]
struct Timings {
    wall_seconds: f64,
}

fn timings(start: Instant) -> Timings {
    Timings {
        wall_seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run(g: &Globals, e: Experiment) -> Result<()> {
    match e {
        Experiment::ListSize(a) => list_size(g, a),
        Experiment::Martingale(a) => martingale(g, a),
        Experiment::Classify(a) => classify(g, a),
        Experiment::Adversary(a) => adversary(g, a),
    }
}

fn input_string(v: &Option<PathBuf>, text: &Option<String>, q: u32) -> Result<Seq> {
    match (v, text) {
        (Some(path), _) => load_seq(path),
        (None, Some(t)) => Ok(Seq::parse(q, t)?),
        (None, None) => bail!("give the string with --v FILE or --v-text TEXT"),
    }
}

#[derive(Serialize)]
struct ListTrial {
    cell: usize,
    trial: usize,
    index: usize,
    deletions: usize,
    insertions: usize,
    list_size: usize,
    hit: bool,
}

#[derive(Serialize)]
struct CellSummary {
    gamma: String,
    delta: String,
    mean_list: f64,
    max_list: usize,
    hit_rate: f64,
}

fn list_size(g: &Globals, a: ListSize) -> Result<()> {
    let start = Instant::now();
    let code = build_code(a.n, a.eps, a.q)?;
    let decode_eps = a.decode_eps.unwrap_or(a.eps);
    let decoder = InnerDecoder::new(&code, decode_eps)?;
    let mut config = serde_json::to_value(&a)?;
    config["decode_eps"] = json!(format_rational(&decode_eps));
    config["periods"] = json!(code.periods);
    config["workers"] = json!(g.workers);

    if let Some(max_len) = a.exhaustive_len {
        g.only(&[Format::Json, Format::Csv])?;
        let per_len = (a.q as f64).powi(max_len as i32);
        if per_len > (1u64 << 24) as f64 {
            bail!("exhaustive search over {per_len} strings of length {max_len} is too large");
        }
        let rows: Vec<(usize, usize, BTreeMap<usize, u64>)> = run_indexed(g.workers, max_len + 1, |len| {
            let total = (a.q as usize).pow(len as u32);
            let mut hist = BTreeMap::new();
            let mut w = vec![0u32; len];
            for mut k in 0..total {
                for slot in w.iter_mut() {
                    *slot = (k % a.q as usize) as u32;
                    k /= a.q as usize;
                }
                *hist.entry(decoder.decode_symbols(&w).list_size).or_insert(0u64) += 1;
            }
            (len, total, hist)
        });
        let max = rows.iter().flat_map(|r| r.2.keys().copied()).max().unwrap_or(0);
        if g.format == Format::Csv {
            let lines: Vec<Vec<String>> = rows
                .iter()
                .flat_map(|(len, _, hist)| hist.iter().map(move |(s, c)| vec![len.to_string(), s.to_string(), c.to_string()]))
                .collect();
            return emit(&g.out, &to_csv(&["length", "list_size", "count"], &lines));
        }
        let trials: Vec<Value> = rows
            .iter()
            .map(|(len, total, hist)| json!({ "length": len, "strings": total, "histogram": hist }))
            .collect();
        let report = Report {
            experiment: "list-size-exhaustive",
            rng: RNG_NAME,
            seed: g.seed,
            config,
            trials,
            summary: json!({ "max_list_size": max, "bound_1200_over_eps3": format_rational(&(int(1200) / (a.eps * a.eps * a.eps))) }),
            timings: timings(start),
        };
        return emit(&g.out, &to_json(&report)?);
    }

    if a.grid == 0 || a.trials == 0 {
        bail!("--grid and --trials must be positive");
    }
    let axis = |max: &Rational, k: usize| {
        if a.grid == 1 {
            int(0)
        } else {
            max * int(k as i128) / int(a.grid as i128 - 1)
        }
    };
    let cells: Vec<(Rational, Rational)> = (0..a.grid)
        .flat_map(|gi| (0..a.grid).map(move |di| (gi, di)))
        .map(|(gi, di)| (axis(&a.gamma_max, gi), axis(&a.delta_max, di)))
        .collect();
    let n = a.n as i128;
    let trials = run_indexed(g.workers, cells.len() * a.trials, |k| {
        let (cell, trial) = (k / a.trials, k % a.trials);
        let (gamma, delta) = cells[cell];
        let mut rng = trial_rng(g.seed, k as u64);
        let index = rng.gen_range(0..code.len());
        let x = code.codeword(index).expect("index in range");
        let deletions = ((delta * int(n)).floor().to_integer() as usize).min(a.n);
        let insertions = (gamma * int(n)).floor().to_integer() as usize;
        let script = random_script_with(&x, deletions, insertions, &mut rng).expect("budget fits");
        let w = apply_script(&x, &script).expect("script fits");
        let report = decoder.decode_symbols(w.symbols());
        ListTrial {
            cell,
            trial,
            index,
            deletions,
            insertions,
            list_size: report.list_size,
            hit: report.survivors.iter().any(|s| s.index == index),
        }
    });
    let summary: Vec<CellSummary> = cells
        .iter()
        .enumerate()
        .map(|(c, (gamma, delta))| {
            let rows: Vec<&ListTrial> = trials.iter().filter(|t| t.cell == c).collect();
            let k = rows.len() as f64;
            CellSummary {
                gamma: format_rational(gamma),
                delta: format_rational(delta),
                mean_list: rows.iter().map(|t| t.list_size as f64).sum::<f64>() / k,
                max_list: rows.iter().map(|t| t.list_size).max().unwrap_or(0),
                hit_rate: rows.iter().filter(|t| t.hit).count() as f64 / k,
            }
        })
        .collect();
    let text = match g.format {
        Format::Json => to_json(&Report {
            experiment: "list-size",
            rng: RNG_NAME,
            seed: g.seed,
            config,
            trials,
            summary,
            timings: timings(start),
        })?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = summary
                .iter()
                .map(|c| {
                    vec![
                        c.gamma.clone(),
                        c.delta.clone(),
                        format!("{:.4}", c.mean_list),
                        c.max_list.to_string(),
                        format!("{:.4}", c.hit_rate),
                    ]
                })
                .collect();
            to_csv(&["gamma", "delta", "mean_list", "max_list", "hit_rate"], &rows)
        }
        Format::Svg => {
            let heat: Vec<HeatCell> = cells
                .iter()
                .zip(&summary)
                .map(|((gamma, delta), s)| HeatCell {
                    gamma: to_f64(gamma),
                    delta: to_f64(delta),
                    value: s.mean_list,
                })
                .collect();
            heatmap_svg(&heat, &format!("mean list size, n={} q={}", a.n, a.q))?
        }
    };
    emit(&g.out, &text)
}

fn martingale(g: &Globals, a: Martingale) -> Result<()> {
    let start = Instant::now();
    g.only(&[Format::Json, Format::Csv])?;
    let v = input_string(&a.v, &a.v_text, a.q)?;
    let config = MartingaleConfig {
        eps: a.eps,
        periods: a.periods.clone(),
        z: a.z,
        padding: a.padding,
    };
    let mut trace = martingale_trace(&v, &config)?;
    if a.summary {
        for level in trace.levels.iter_mut() {
            level.blocks.clear();
        }
    }
    let target = a.eps * a.eps * a.eps / int(1200);
    let increments: Vec<Option<String>> = trace
        .levels
        .windows(2)
        .map(|w| match (w[0].var_bias, w[1].var_bias) {
            (Some(x), Some(y)) => Some(format_rational(&(y - x))),
            _ => None,
        })
        .collect();
    let fi_increments: Vec<String> = trace
        .levels
        .windows(2)
        .map(|w| format_rational(&(w[1].freq_variance - w[0].freq_variance)))
        .collect();
    if g.format == Format::Csv {
        let opt = |r: &Option<Rational>| r.map(|x| format_rational(&x)).unwrap_or_default();
        let rows: Vec<Vec<String>> = trace
            .levels
            .iter()
            .map(|l| {
                vec![
                    l.level.to_string(),
                    l.period.to_string(),
                    l.block_len.to_string(),
                    l.block_count.to_string(),
                    opt(&l.mean_bias),
                    opt(&l.var_bias),
                    format_rational(&l.freq_variance),
                    opt(&l.mean_advantage),
                    opt(&l.advantage_floor),
                ]
            })
            .collect();
        return emit(
            &g.out,
            &to_csv(
                &["level", "period", "block_len", "blocks", "mean_bias", "var_bias", "freq_variance", "mean_advantage", "advantage_floor"],
                &rows,
            ),
        );
    }
    let report = Report {
        experiment: "martingale",
        rng: RNG_NAME,
        seed: g.seed,
        config: json!({ "v_len": v.len(), "q": v.q(), "martingale": config, "summary_only": a.summary }),
        trials: trace,
        summary: json!({
            "var_bias_increments": increments,
            "freq_variance_increments": fi_increments,
            "eps3_over_1200": format_rational(&target),
        }),
        timings: timings(start),
    };
    emit(&g.out, &to_json(&report)?)
}

fn classify(g: &Globals, a: Classify) -> Result<()> {
    g.only(&[Format::Json, Format::Csv])?;
    let v = input_string(&a.v, &a.v_text, a.q)?;
    let c = classify_blocks(&v, a.r, a.l, a.z)?;
    let text = if g.format == Format::Csv {
        let rows: Vec<Vec<String>> = c
            .labels
            .iter()
            .enumerate()
            .map(|(k, l)| vec![k.to_string(), l.to_string()])
            .collect();
        to_csv(&["block", "label"], &rows)
    } else {
        to_json(&json!({ "config": { "v_len": v.len(), "q": v.q(), "r": a.r, "l": a.l, "z": a.z }, "classification": c }))?
    };
    emit(&g.out, &text)
}

#[derive(Serialize)]
struct AttackTrial {
    trial: usize,
    i: u32,
    deletions: usize,
    insertions: usize,
    gamma: String,
    delta: String,
    pattern_id: String,
    output: Seq,
}

#[derive(Serialize)]
struct AttackSummary {
    i: u32,
    distinct_outputs: usize,
    max_gamma: String,
    max_delta: String,
    vertex_gamma: String,
    vertex_delta: String,
}

fn adversary(g: &Globals, a: Adversary) -> Result<()> {
    let start = Instant::now();
    let q = a.q;
    if q < 2 || a.n == 0 || a.trials == 0 {
        bail!("need q >= 2, n >= 1 and at least one trial");
    }
    let code = match a.source {
        Source::Bukhma => {
            let Some(eps) = a.eps else {
                bail!("--source bukhma needs --eps");
            };
            Some(build_code(a.n, eps, q)?)
        }
        _ => None,
    };
    if a.source == Source::Balanced && a.n % q as usize != 0 {
        bail!("balanced strings need q | n");
    }
    let attacks: Vec<u32> = if a.alpha.is_some() { (1..q).collect() } else { (1..=q).collect() };
    let per_trial = run_indexed(g.workers, a.trials, |t| -> insdel_core::Result<Vec<AttackTrial>> {
        let mut rng = trial_rng(g.seed, t as u64);
        let x = match (&code, a.source) {
            (Some(c), _) => c.codeword(t % c.len())?,
            (None, Source::Balanced) => {
                let mut s: Vec<u32> = (0..a.n).map(|p| (p % q as usize) as u32).collect();
                s.shuffle(&mut rng);
                Seq::new(q, s)?
            }
            (None, _) => Seq::new(q, (0..a.n).map(|_| rng.gen_range(0..q)).collect())?,
        };
        attacks
            .iter()
            .map(|&i| {
                let r = match a.alpha {
                    Some(alpha) => adversary_timeshare(&x, i, alpha)?,
                    None => adversary_single(&x, i)?,
                };
                let n = a.n as i128;
                Ok(AttackTrial {
                    trial: t,
                    i,
                    deletions: r.deletions_used,
                    insertions: r.insertions_used,
                    gamma: format_rational(&Rational::new(r.insertions_used as i128, n)),
                    delta: format_rational(&Rational::new(r.deletions_used as i128, n)),
                    pattern_id: r.pattern_id,
                    output: r.output,
                })
            })
            .collect()
    });
    let trials: Vec<AttackTrial> = per_trial.into_iter().collect::<insdel_core::Result<Vec<_>>>()?.into_iter().flatten().collect();
    let region = region_vertices(q)?;
    let summary: Vec<AttackSummary> = attacks
        .iter()
        .map(|&i| {
            let rows: Vec<&AttackTrial> = trials.iter().filter(|t| t.i == i).collect();
            let mut outputs: Vec<&Seq> = rows.iter().map(|t| &t.output).collect();
            outputs.sort_by(|x, y| x.symbols().cmp(y.symbols()));
            outputs.dedup();
            let max = |f: fn(&AttackTrial) -> usize| {
                format_rational(&Rational::new(rows.iter().map(|t| f(t)).max().unwrap_or(0) as i128, a.n as i128))
            };
            let vertex = &region.vertices[i as usize - 1];
            AttackSummary {
                i,
                distinct_outputs: outputs.len(),
                max_gamma: max(|t| t.insertions),
                max_delta: max(|t| t.deletions),
                vertex_gamma: format_rational(&vertex.gamma),
                vertex_delta: format_rational(&vertex.delta),
            }
        })
        .collect();
    let text = match g.format {
        Format::Json => {
            let mut config = serde_json::to_value(&a)?;
            config["workers"] = json!(g.workers);
            if let Some(c) = &code {
                config["periods"] = json!(c.periods);
            }
            to_json(&Report {
                experiment: "adversary",
                rng: RNG_NAME,
                seed: g.seed,
                config,
                trials,
                summary,
                timings: timings(start),
            })?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = trials
                .iter()
                .map(|t| {
                    vec![
                        t.trial.to_string(),
                        t.i.to_string(),
                        t.deletions.to_string(),
                        t.insertions.to_string(),
                        t.gamma.clone(),
                        t.delta.clone(),
                        t.pattern_id.clone(),
                    ]
                })
                .collect();
            to_csv(&["trial", "i", "deletions", "insertions", "gamma", "delta", "pattern_id"], &rows)
        }
        Format::Svg => {
            let mut points = Vec::new();
            for t in &trials {
                let p = Point::new(rational::parse_rational(&t.gamma)?, rational::parse_rational(&t.delta)?);
                let inside = contains(q, p.gamma, p.delta, int(0))?.inside;
                if !points.iter().any(|x: &QueryPoint| x.point == p) {
                    points.push(QueryPoint { point: p, inside });
                }
            }
            region_svg(&[region], &points)?
        }
    };
    emit(&g.out, &text)
}
