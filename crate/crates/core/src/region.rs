//! The feasibility polygon `F_q` and the collapsing adversaries.

use serde::{Deserialize, Serialize};

use crate::bukhma::boundary_numerator;
use crate::channel::{EditOp, EditScript};
use crate::error::{invalid, Error, Result};
use crate::rational::{self, int, is_nonneg, Rational};
use crate::seq::{Seq, SymbolStats};

/// A point `(gamma, delta)`: insertion fraction and deletion fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "rational::serde_str")]
    pub gamma: Rational,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
}

impl Point {
    pub fn new(gamma: Rational, delta: Rational) -> Self {
        Point { gamma, delta }
    }
}

/// `F_q`: vertex `i` is `(i(i-1)/q, (q-i)/q)` for `i = 1..=q`; the origin
/// closes the polygon and is listed last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub q: u32,
    pub vertices: Vec<Point>,
}

/// `a·gamma + b·delta = c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryLine {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
}

impl BoundaryLine {
    pub fn eval(&self, p: &Point) -> Rational {
        self.a * p.gamma + self.b * p.delta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub inside: bool,
    pub z: Option<u32>,
}

pub fn region_vertices(q: u32) -> Result<Region> {
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    let qq = q as i128;
    let mut vertices: Vec<Point> = (1..=qq)
        .map(|i| Point::new(Rational::new(i * (i - 1), qq), Rational::new(qq - i, qq)))
        .collect();
    vertices.push(Point::new(int(0), int(0)));
    Ok(Region { q, vertices })
}

/// `gamma + 2i·delta = ((2q-1)i - i^2)/q`, the edge between vertices `i` and `i+1`.
pub fn boundary_line(q: u32, i: u32) -> Result<BoundaryLine> {
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    if i == 0 || i >= q {
        return Err(invalid(format!("segment index must lie in 1..{}, got {i}", q - 1)));
    }
    Ok(BoundaryLine {
        a: int(1),
        b: int(2 * i as i128),
        c: Rational::new(boundary_numerator(q, i), q as i128),
    })
}

/// Whether `(gamma, delta)` lies in `(1 - shrink)·F_q`.
///
/// Membership uses strict inequality, so the slanted border is excluded
/// while the open segments on both axes are included.
pub fn contains(q: u32, gamma: Rational, delta: Rational, shrink: Rational) -> Result<Membership> {
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    if !is_nonneg(&gamma) || !is_nonneg(&delta) {
        return Err(invalid("gamma and delta must be non-negative"));
    }
    if !is_nonneg(&shrink) || shrink >= int(1) {
        return Err(invalid("shrink must lie in [0, 1)"));
    }
    let keep = int(1) - shrink;
    let z = (1..q).find(|&z| {
        let line = boundary_line(q, z).expect("z in range");
        gamma + line.b * delta < keep * line.c
    });
    Ok(Membership {
        inside: z.is_some(),
        z,
    })
}

/// Output of a collapsing attack together with its transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackResult {
    pub output: Seq,
    pub script: EditScript,
    pub deletions_used: usize,
    pub insertions_used: usize,
    pub pattern_id: String,
}

fn pattern_id(q: u32, kept: &[u32]) -> String {
    if q <= 36 {
        kept.iter()
            .map(|&s| char::from_digit(s, 36).expect("symbol below 36"))
            .collect()
    } else {
        kept.iter().map(u32::to_string).collect::<Vec<_>>().join("-")
    }
}

/// Keeps the `i` most frequent symbols, trims to `floor(n·i/q)` symbols and
/// pads the rest into `(σ_1 ... σ_i)^L` with the kept symbols in ascending
/// order.
pub fn adversary_single(x: &Seq, i: u32) -> Result<AttackResult> {
    let q = x.q();
    if i == 0 || i > q {
        return Err(invalid(format!("i must lie in 1..={q}, got {i}")));
    }
    let n = x.len();
    let stats = SymbolStats::of(x);
    let mut order: Vec<u32> = (0..q).collect();
    order.sort_by(|&s, &t| stats.counts[t as usize].cmp(&stats.counts[s as usize]).then(s.cmp(&t)));
    let mut kept: Vec<u32> = order[..i as usize].to_vec();
    kept.sort_unstable();
    let mut keep_mask = vec![false; q as usize];
    for &s in &kept {
        keep_mask[s as usize] = true;
    }

    let target = n * i as usize / q as usize;
    let mut ops = Vec::new();
    for (pos, &s) in x.symbols().iter().enumerate().rev() {
        if !keep_mask[s as usize] {
            ops.push(EditOp::Delete { pos });
        }
    }
    let survivors: Vec<u32> = x
        .symbols()
        .iter()
        .copied()
        .filter(|&s| keep_mask[s as usize])
        .collect();
    debug_assert!(survivors.len() >= target);
    for pos in (target..survivors.len()).rev() {
        ops.push(EditOp::Delete { pos });
    }
    let deletions_used = ops.len();

    let width = i as usize;
    let mut output = Vec::with_capacity(target * width);
    for (t, &y) in survivors[..target].iter().enumerate() {
        for (slot, &sigma) in kept.iter().enumerate() {
            if sigma != y {
                ops.push(EditOp::Insert {
                    pos: t * width + slot,
                    sym: sigma,
                });
            }
            output.push(sigma);
        }
    }
    let insertions_used = ops.len() - deletions_used;
    Ok(AttackResult {
        output: Seq::from_parts(q, output),
        script: EditScript::new(ops),
        deletions_used,
        insertions_used,
        pattern_id: pattern_id(q, &kept),
    })
}

/// Attack `i` on the first `alpha·n` symbols and attack `i+1` on the rest.
pub fn adversary_timeshare(x: &Seq, i: u32, alpha: Rational) -> Result<AttackResult> {
    let q = x.q();
    if i == 0 || i >= q {
        return Err(invalid(format!("i must lie in 1..{q}, got {i}")));
    }
    if alpha <= int(0) || alpha > int(1) {
        return Err(invalid("alpha must lie in (0, 1]"));
    }
    let split = alpha * int(x.len() as i128);
    if !split.is_integer() {
        return Err(invalid(format!(
            "alpha·n = {} is not an integer",
            rational::format_rational(&split)
        )));
    }
    let split = split.to_integer() as usize;
    let first = adversary_single(&x.slice(0, split), i)?;
    if split == x.len() {
        return Ok(first);
    }
    let second = adversary_single(&x.slice(split, x.len()), i + 1)?;
    let mut script = first.script.clone();
    script.extend(second.script.shifted(first.output.len()));
    Ok(AttackResult {
        output: first.output.concat(&second.output)?,
        script,
        deletions_used: first.deletions_used + second.deletions_used,
        insertions_used: first.insertions_used + second.insertions_used,
        pattern_id: format!("{}|{}", first.pattern_id, second.pattern_id),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_script, script_cost};
    use crate::rational::rat;
    use proptest::prelude::*;
    use rand::{seq::SliceRandom, SeedableRng};

    fn pts(v: &[(i128, i128, i128, i128)]) -> Vec<Point> {
        v.iter().map(|&(a, b, c, d)| Point::new(rat(a, b), rat(c, d))).collect()
    }

    #[test]
    fn vertices() {
        assert_eq!(
            region_vertices(5).unwrap().vertices,
            pts(&[(0, 1, 4, 5), (2, 5, 3, 5), (6, 5, 2, 5), (12, 5, 1, 5), (4, 1, 0, 1), (0, 1, 0, 1)])
        );
        assert_eq!(
            region_vertices(2).unwrap().vertices,
            pts(&[(0, 1, 1, 2), (1, 1, 0, 1), (0, 1, 0, 1)])
        );
        assert_eq!(
            region_vertices(3).unwrap().vertices,
            pts(&[(0, 1, 2, 3), (2, 3, 1, 3), (2, 1, 0, 1), (0, 1, 0, 1)])
        );
        assert!(region_vertices(1).is_err());
    }

    #[test]
    fn boundary_examples() {
        let line = boundary_line(5, 3).unwrap();
        assert_eq!((line.a, line.b, line.c), (int(1), int(6), rat(18, 5)));
        assert_eq!(line.eval(&Point::new(rat(18, 10), rat(3, 10))), rat(18, 5));
        assert_eq!(line.eval(&Point::new(rat(12, 10), rat(4, 10))), rat(18, 5));
        let bin = boundary_line(2, 1).unwrap();
        assert_eq!((bin.a, bin.b, bin.c), (int(1), int(2), int(1)));
        assert!(boundary_line(5, 5).is_err());
        assert!(boundary_line(5, 0).is_err());
    }

    #[test]
    fn membership_examples() {
        let m = contains(2, rat(9, 10), int(0), int(0)).unwrap();
        assert_eq!(m, Membership { inside: true, z: Some(1) });
        assert!(!contains(5, rat(6, 5), rat(2, 5), int(0)).unwrap().inside);
        let m = contains(5, rat(119, 100), rat(2, 5), int(0)).unwrap();
        assert_eq!(m, Membership { inside: true, z: Some(2) });
        assert!(contains(3, int(0), rat(2, 3) - rat(1, 1000), int(0)).unwrap().inside);
        assert!(!contains(3, int(0), rat(2, 3), int(0)).unwrap().inside);
        assert!(contains(3, rat(1999, 1000), int(0), int(0)).unwrap().inside);
        assert!(!contains(2, rat(9, 10), int(0), rat(1, 5)).unwrap().inside);
        assert!(contains(2, int(-1), int(0), int(0)).is_err());
        assert!(contains(2, int(0), int(0), int(1)).is_err());
    }

    #[test]
    fn binary_boundary_is_the_binary_law() {
        for num in 0..=20 {
            let delta = rat(num, 40);
            let gamma = int(1) - int(2) * delta;
            assert!(!contains(2, gamma, delta, int(0)).unwrap().inside);
            let inner = gamma - rat(1, 1000);
            if inner >= int(0) {
                assert!(contains(2, inner, delta, int(0)).unwrap().inside);
            }
        }
    }

    fn balanced(q: u32, n: usize, seed: u64) -> Seq {
        let mut s: Vec<u32> = (0..n).map(|p| (p % q as usize) as u32).collect();
        s.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        Seq::new(q, s).unwrap()
    }

    #[test]
    fn single_examples() {
        let x = Seq::parse(3, "001122001122").unwrap();
        let r = adversary_single(&x, 2).unwrap();
        assert_eq!((r.deletions_used, r.insertions_used), (4, 8));
        assert_eq!(r.output.to_text().unwrap(), "01".repeat(8));
        assert_eq!(r.pattern_id, "01");
        assert_eq!(apply_script(&x, &r.script).unwrap(), r.output);

        let all = adversary_single(&x, 3).unwrap();
        assert_eq!((all.deletions_used, all.insertions_used), (0, 24));
        assert_eq!(all.output.to_text().unwrap(), "012".repeat(12));

        let one = adversary_single(&x, 1).unwrap();
        assert_eq!((one.deletions_used, one.insertions_used), (8, 0));
        assert_eq!(one.output.to_text().unwrap(), "0000");

        let skewed = Seq::parse(3, "222222000111").unwrap();
        let r = adversary_single(&skewed, 1).unwrap();
        assert_eq!(r.output.to_text().unwrap(), "2222");
        assert_eq!(r.pattern_id, "2");
        assert_eq!(r.deletions_used, 8);
    }

    #[test]
    fn timeshare_examples() {
        let x = Seq::parse(3, "012012012012").unwrap();
        let r = adversary_timeshare(&x, 1, rat(1, 2)).unwrap();
        assert_eq!((r.insertions_used, r.deletions_used), (4, 6));
        assert_eq!(apply_script(&x, &r.script).unwrap(), r.output);
        let cost = script_cost(&r.script, 1);
        assert_eq!((cost.deletions, cost.insertions), (6, 4));

        let whole = adversary_timeshare(&x, 1, int(1)).unwrap();
        assert_eq!(whole, adversary_single(&x, 1).unwrap());
        assert!(adversary_timeshare(&x, 1, rat(1, 5)).is_err());
        assert!(adversary_timeshare(&x, 3, rat(1, 2)).is_err());

        let y = Seq::parse(3, "210210021021").unwrap();
        let other = adversary_timeshare(&y, 1, rat(1, 2)).unwrap();
        let mine = adversary_timeshare(&Seq::parse(3, "012012012012").unwrap(), 1, rat(1, 2)).unwrap();
        if other.pattern_id == mine.pattern_id {
            assert_eq!(other.output, mine.output);
        }
    }

    #[test]
    fn collapse_cardinality() {
        let mut outputs = std::collections::HashSet::new();
        for seed in 0..200 {
            let x = balanced(4, 16, seed);
            outputs.insert(adversary_single(&x, 2).unwrap().output);
        }
        assert!(outputs.len() <= 6);
    }

    proptest! {
        #[test]
        fn vertices_lie_on_their_segments(q in 2u32..=12) {
            let region = region_vertices(q).unwrap();
            for i in 1..q {
                let line = boundary_line(q, i).unwrap();
                prop_assert_eq!(line.eval(&region.vertices[i as usize - 1]), line.c);
                prop_assert_eq!(line.eval(&region.vertices[i as usize]), line.c);
            }
            prop_assert_eq!(&region.vertices[0], &Point::new(int(0), int(1) - rat(1, q as i128)));
            prop_assert_eq!(&region.vertices[q as usize - 1], &Point::new(int(q as i128 - 1), int(0)));
        }

        #[test]
        fn membership_is_monotone(
            q in 2u32..8,
            g in 0i128..400, d in 0i128..100, dg in 0i128..50, dd in 0i128..50, s in 0i128..10,
        ) {
            let shrink = rat(s, 10);
            let outer = contains(q, rat(g, 100), rat(d, 100), shrink).unwrap();
            let inner = contains(q, rat((g - dg).max(0), 100), rat((d - dd).max(0), 100), shrink).unwrap();
            if outer.inside {
                prop_assert!(inner.inside);
            }
        }

        #[test]
        fn single_budgets_are_exact(q in 2u32..=5, seed in any::<u64>()) {
            let n = 12 * q as usize;
            let x = balanced(q, n, seed);
            for i in 1..=q {
                let r = adversary_single(&x, i).unwrap();
                let (n, q, i) = (n, q as usize, i as usize);
                prop_assert_eq!(r.deletions_used, n * (q - i) / q);
                prop_assert_eq!(r.insertions_used, n * i * (i - 1) / q);
                prop_assert_eq!(apply_script(&x, &r.script).unwrap(), r.output);
            }
        }
    }
}
