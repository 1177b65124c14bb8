//! Browser bindings for three demo operations. Each returns SVG or a JSON
//! string; the plain functions are usable (and tested) natively.

use insdel_core::bukhma::{build_code, inner_list_decode};
use insdel_core::channel::{apply_script, random_script};
use insdel_core::plot::{region_svg, QueryPoint};
use insdel_core::rational::{format_rational, int, parse_rational};
use insdel_core::region::{adversary_single, adversary_timeshare, contains, region_vertices, Point};
use insdel_core::{Rational, Seq};
use rand::seq::SliceRandom;
use serde_json::json;
use wasm_bindgen::prelude::*;

type Out = Result<String, String>;

fn rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// `qs` like `"2,3,5"`, `points` like `"1/2,1/4; 1,0"`.
pub fn region_plot(qs: &str, points: &str, shrink: &str) -> Out {
    let shrink = if shrink.trim().is_empty() { int(0) } else { rat(shrink)? };
    let qs: Vec<u32> = qs
        .split(',')
        .map(|q| q.trim().parse::<u32>().map_err(|_| format!("bad alphabet size {q:?}")))
        .collect::<Result<_, _>>()?;
    let last = *qs.last().ok_or("no alphabet size given")?;
    let mut queries = Vec::new();
    for p in points.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (g, d) = p.split_once(',').ok_or(format!("point {p:?} must be gamma,delta"))?;
        let point = Point::new(rat(g)?, rat(d)?);
        let inside = contains(last, point.gamma, point.delta, shrink).map_err(|e| e.to_string())?.inside;
        queries.push(QueryPoint { point, inside });
    }
    let regions = qs
        .iter()
        .map(|&q| region_vertices(q))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    region_svg(&regions, &queries).map_err(|e| e.to_string())
}

/// Encodes codeword `index`, corrupts it with a seeded script and list-decodes.
pub fn inner_decode(n: usize, eps: &str, q: u32, index: usize, deletions: usize, insertions: usize, seed: u64) -> Out {
    let eps = rat(eps)?;
    let code = build_code(n, eps, q).map_err(|e| e.to_string())?;
    let x = code.codeword(index).map_err(|e| e.to_string())?;
    let script = random_script(&x, deletions.min(n), insertions, seed).map_err(|e| e.to_string())?;
    let w = apply_script(&x, &script).map_err(|e| e.to_string())?;
    let report = inner_list_decode(&w, &code, eps).map_err(|e| e.to_string())?;
    let found = report.survivors.iter().any(|s| s.index == index);
    Ok(json!({
        "periods": code.periods,
        "codeword": x.to_string(),
        "received": w.to_string(),
        "script_len": script.len(),
        "list": report.survivors,
        "transmitted_found": found,
    })
    .to_string())
}

/// Runs attack `i` (or the time-share of `i` and `i+1` when `alpha` is set)
/// on a seeded balanced string of length `n`.
pub fn adversary(q: u32, n: usize, i: u32, alpha: &str, seed: u64) -> Out {
    use rand::SeedableRng;
    if q < 2 || n == 0 || n % q as usize != 0 {
        return Err("need q >= 2 and q | n".into());
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<u32> = (0..n).map(|p| (p % q as usize) as u32).collect();
    s.shuffle(&mut rng);
    let x = Seq::new(q, s).map_err(|e| e.to_string())?;
    let attack = if alpha.trim().is_empty() {
        adversary_single(&x, i)
    } else {
        adversary_timeshare(&x, i, rat(alpha)?)
    }
    .map_err(|e| e.to_string())?;
    let gamma = Rational::new(attack.insertions_used as i128, n as i128);
    let delta = Rational::new(attack.deletions_used as i128, n as i128);
    let inside = contains(q, gamma, delta, int(0)).map_err(|e| e.to_string())?.inside;
    Ok(json!({
        "input": x.to_string(),
        "output": attack.output.to_string(),
        "pattern_id": attack.pattern_id,
        "deletions": attack.deletions_used,
        "insertions": attack.insertions_used,
        "gamma": format_rational(&gamma),
        "delta": format_rational(&delta),
        "strictly_inside": inside,
    })
    .to_string())
}

fn js(r: Out) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = regionSvg)]
pub fn region_svg_js(qs: &str, points: &str, shrink: &str) -> Result<String, JsError> {
    js(region_plot(qs, points, shrink))
}

#[wasm_bindgen(js_name = innerDecodeDemo)]
pub fn inner_decode_js(
    n: usize,
    eps: &str,
    q: u32,
    index: usize,
    deletions: usize,
    insertions: usize,
    seed: u32,
) -> Result<String, JsError> {
    js(inner_decode(n, eps, q, index, deletions, insertions, seed as u64))
}

#[wasm_bindgen(js_name = adversaryDemo)]
pub fn adversary_js(q: u32, n: usize, i: u32, alpha: &str, seed: u32) -> Result<String, JsError> {
    js(adversary(q, n, i, alpha, seed as u64))
}
