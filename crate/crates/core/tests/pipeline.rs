mod common;

use insdel_core::align::{advantage_periodic, Functional};
use insdel_core::analysis::{classify_blocks, f_max, martingale_trace, MartingaleConfig, MartingaleTrace};
use insdel_core::bukhma::{build_code, inner_list_decode, BukhMaCode};
use insdel_core::channel::{apply_script, random_script, trial_rng, EditScript};
use insdel_core::rational::rat;
use insdel_core::Seq;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn encode_corrupt_decode_round_trips() {
    let eps = rat(1, 2);
    let code = build_code(256, eps, 2).unwrap();
    for t in 0..100u64 {
        let mut rng = trial_rng(11, t);
        let index = rng.gen_range(0..code.len());
        let x = code.codeword(index).unwrap();
        let d = rng.gen_range(0..=64);
        let i = rng.gen_range(0..=128 - 2 * d);
        let script = random_script(&x, d, i, rng.gen()).unwrap();
        let w = apply_script(&x, &script).unwrap();
        let report = inner_list_decode(&w, &code, eps).unwrap();
        assert!(report.survivors.iter().any(|s| s.index == index), "trial {t}");
    }
}

#[test]
fn json_formats_round_trip() {
    let code = build_code(64, rat(1, 2), 3).unwrap();
    let text = serde_json::to_string(&code).unwrap();
    assert_eq!(serde_json::from_str::<BukhMaCode>(&text).unwrap(), code);

    let x = code.codeword(1).unwrap();
    let script = random_script(&x, 3, 4, 7).unwrap();
    let text = serde_json::to_string(&script).unwrap();
    assert_eq!(serde_json::from_str::<EditScript>(&text).unwrap(), script);

    let v = Seq::parse(2, &"0011".repeat(16)).unwrap();
    let trace = martingale_trace(&v, &MartingaleConfig::new(rat(1, 2), vec![16, 4])).unwrap();
    let text = serde_json::to_string(&trace).unwrap();
    assert_eq!(serde_json::from_str::<MartingaleTrace>(&text).unwrap(), trace);
}

#[test]
fn single_run_block_labels() {
    let v = Seq::parse(2, "11111111").unwrap();
    let c = classify_blocks(&v, 32, 2, 1).unwrap();
    assert_eq!(c.counts.len(), 1);
    assert_eq!(c.counts["U_1"], 4);
}

#[test]
fn crossing_fraction_in_the_lemma_regime() {
    // l = r·eps^2 with eps = 1/4 and v built from a shorter period
    let eps = 0.25f64;
    let (r, l) = (256usize, 16usize);
    let mut rng = trial_rng(12, 0);
    for _ in 0..5 {
        let s: Vec<u32> = common::alternating(rng.gen_range(0..512), 2048, 256, 2)
            .into_iter()
            .map(|b| if rng.gen_bool(0.05) { 1 - b } else { b })
            .collect();
        let v = Seq::new(2, s).unwrap();
        let c = classify_blocks(&v, r, l, 1).unwrap();
        let fraction = c.crossing as f64 / c.labels.len() as f64;
        assert!(c.span <= 2 * v.len());
        assert!(fraction <= 2.0 * eps * eps + l as f64 / v.len() as f64, "fraction {fraction}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic_advantage_matches_substring_search(
        bits in proptest::collection::vec(0u32..3, 1..14), r in 1usize..5, q in 2u32..4,
    ) {
        let a: Vec<u32> = bits.into_iter().map(|b| b % q).collect();
        let seq = Seq::new(q, a.clone()).unwrap();
        let got = advantage_periodic(&seq, r, q).unwrap().value;
        let f = Functional::new(q, 1).unwrap();
        let mut best = None;
        for start in 0..q as usize * r {
            for len in 0..=4 * q as usize * a.len() {
                let b = common::alternating(start, len, r, q);
                let v = f.value(common::lcs_dp(&a, &b), a.len(), len);
                if best.map_or(true, |x| v > x) {
                    best = Some(v);
                }
            }
        }
        prop_assert_eq!(got, best.unwrap());
    }

    #[test]
    fn f_max_is_attained_by_search(
        big_f in 0.2f64..3.0, big_p in 0.2f64..3.0, ratio in 0.005f64..1.5, q in 2usize..5,
    ) {
        let m = big_f * big_p * ratio;
        let formula = f_max(big_f, big_p, m, q as u32).unwrap();
        let search = common::f_max_search(big_f, big_p, m, q, 1);
        prop_assert!(search <= formula + 1e-9, "search {search} beats formula {formula}");
        prop_assert!(formula - search <= 1e-3, "search {search} formula {formula}");
    }
}
