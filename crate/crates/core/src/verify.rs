//! Named verification suites. Each suite is a list of checks that recompute
//! a value or property two ways, or against a known table, and report
//! whether they agree.

use std::time::Instant;

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::choice::{
    block_bound, c_scc, choice_from_tcm, count_valid, forb_from_choice, forb_via_choices, Choice, ChoiceMode,
    ChoiceSearchOptions, CountOptions, TriplePattern,
};
use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::matrix::{contains_config, forb_exact, ConfigPattern, ForbOptions, RMatrix};
use crate::recurrence::{
    build_g, g_partial, general_upper_coefficient, h2_table, h_upper_alpha2, lambda, predicted_split,
    sandwich_check, verify_two_recursive,
};
use crate::tcm::{closed_sets, h_exact, is_reassignment_stable, local_search, verify_partition, HExactOptions, LocalSearchOptions, Tcm};

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

pub struct Suite {
    pub name: &'static str,
    pub summary: &'static str,
    checks: fn(&mut Recorder),
}

pub struct Recorder {
    suite: &'static str,
    started: Instant,
    out: Vec<CheckOutcome>,
}

impl Recorder {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.out.push(CheckOutcome {
            suite: self.suite,
            name: name.into(),
            passed,
            detail: detail.into(),
            millis: self.started.elapsed().as_millis(),
        });
        self.started = Instant::now();
    }

    fn result<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, format!("error: {e}"));
                None
            }
        }
    }
}

pub const SUITES: &[Suite] = &[
    Suite { name: "sauer", summary: "forb(m, 2, K_k) against the Sauer bound, m <= 4, k <= 3", checks: sauer },
    Suite { name: "h-table", summary: "exact H(m, 2) for m = 3..6", checks: h_table },
    Suite { name: "h2-table", summary: "H2(m, 2) for m <= 8 and exact optimal substructure", checks: h2_values },
    Suite { name: "optimal-split", summary: "power-of-two split is optimal at alpha = 2, 3 <= m <= 48", checks: optimal_split },
    Suite { name: "sandwich", summary: "forb - (r-1)^m - m(r-1)^(m-1) between the H2 and H terms", checks: sandwich },
    Suite { name: "oracle", summary: "column search and choice enumeration agree", checks: oracle },
    Suite { name: "scc", summary: "component formula equals brute-force valid columns on good choices", checks: scc },
    Suite { name: "block", summary: "valid columns never exceed the block bound", checks: block },
    Suite { name: "reduce", summary: "some good choice attains the maximum over all choices", checks: reduce },
    Suite { name: "lambda", summary: "lambda(2), the upper-bound coefficient and H(m, 2) <= 83/192 m 2^(m-1)", checks: lambda_checks },
    Suite { name: "construction", summary: "w(G(m), 2) = H2(m, 2) for m <= 30", checks: construction },
    Suite { name: "properties", summary: "randomised invariants of containment and TCMs", checks: properties },
    Suite { name: "convergence", summary: "h2(m, 2) approaches lambda(2); g(k, 2) increases; h2 <= g", checks: convergence },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs one suite by name, or every suite for `"all"`.
pub fn run_suite(name: &str) -> Result<Vec<CheckOutcome>> {
    let selected: Vec<&Suite> = if name == "all" {
        SUITES.iter().collect()
    } else {
        let s = SUITES
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::Parse(format!("unknown suite {name:?}; known: all, {}", suite_names().join(", "))))?;
        vec![s]
    };
    let mut out = Vec::new();
    for s in selected {
        let mut rec = Recorder { suite: s.name, started: Instant::now(), out: Vec::new() };
        (s.checks)(&mut rec);
        out.extend(rec.out);
    }
    Ok(out)
}

fn sauer(rec: &mut Recorder) {
    for k in 1..=3usize {
        let f = ConfigPattern::complete(k);
        for m in 1..=4usize {
            let want: u64 = (0..k as u64).map(|i| binomial(m as u64, i)).sum();
            if let Some(r) = rec.result("sauer", forb_exact(m, 2, &f, &ForbOptions::default())) {
                rec.check(format!("forb({m},2,K{k})"), r.value as u64 == want && r.status.is_exact(), format!("{} vs {want}", r.value));
            }
        }
    }
}

fn h_table(rec: &mut Recorder) {
    for (m, want) in [(3usize, 4u64), (4, 12), (5, 30), (6, 73)] {
        if let Some(r) = rec.result("h_exact", h_exact(m, &2u64, &HExactOptions::default())) {
            rec.check(format!("H({m},2)"), r.value == want && r.status.is_exact(), format!("{} vs {want}", r.value));
        }
    }
}

fn h2_values(rec: &mut Recorder) {
    let t = h2_table(48, &BigInt::from(2));
    let want = [0, 1, 4, 12, 30, 73, 172, 400];
    for (m, &w) in want.iter().enumerate().map(|(i, w)| (i + 1, w)) {
        rec.check(format!("H2({m},2)"), *t.value(m) == BigInt::from(w), format!("{} vs {w}", t.value(m)));
    }
    let substructure = (3..=48).all(|m| t.row(m).splits.iter().all(|&(a, b)| t.value_at_split(a, b) == *t.value(m)));
    rec.check("tying splits attain H2", substructure, "3 <= m <= 48");
}

fn optimal_split(rec: &mut Recorder) {
    let t = h2_table(48, &BigInt::from(2));
    let bad: Vec<usize> = (3..=48)
        .filter(|&m| m != 6)
        .filter(|&m| {
            let p = predicted_split(m, 2.0).expect("m >= 3");
            !t.row(m).splits.contains(&p.split)
        })
        .collect();
    rec.check("predicted split optimal", bad.is_empty(), format!("failures at {bad:?}"));
    rec.check("m = 6 splits 3 + 3", t.row(6).splits == vec![(3, 3)], format!("{:?}", t.row(6).splits));
    let t3 = h2_table(6, &BigInt::from(3));
    let p = predicted_split(6, 3.0).expect("m >= 3");
    rec.check("m = 6 at alpha = 3 splits 2 + 4", t3.row(6).splits.contains(&p.split), format!("{:?}", t3.row(6).splits));
}

fn sandwich(rec: &mut Recorder) {
    for (m, r, tight) in [(3usize, 3u64, true), (4, 3, true), (3, 4, false), (2, 5, true)] {
        if let Some(s) = rec.result("sandwich", sandwich_check(m, r)) {
            let ok = s.holds() && (!tight || s.is_tight());
            rec.check(
                format!("sandwich m={m} r={r}"),
                ok,
                format!("{} <= {} <= {}", s.lower, s.excess, s.upper.as_ref().map_or("?".into(), |u| u.to_string())),
            );
        }
    }
}

fn oracle(rec: &mut Recorder) {
    for r in [3u8, 4] {
        let a = rec.result("forb_exact", forb_exact(3, r, &ConfigPattern::m(), &ForbOptions::default()));
        let b = rec.result("forb_via_choices", forb_via_choices(3, r as u64, ChoiceMode::All, &ChoiceSearchOptions::default()));
        if let (Some(a), Some(b)) = (a, b) {
            rec.check(format!("forb(3,{r},M)"), BigUint::from(a.value) == b.value, format!("{} vs {}", a.value, b.value));
        }
    }
}

fn all_good_choices(m: usize) -> Vec<Choice> {
    let t = binomial(m as u64, 3) as u32;
    let good: Vec<TriplePattern> = TriplePattern::good().collect();
    (0..6usize.pow(t))
        .map(|mut code| {
            let ps = (0..t)
                .map(|_| {
                    let p = good[code % 6];
                    code /= 6;
                    p
                })
                .collect();
            Choice::new(m, ps).expect("right length")
        })
        .collect()
}

fn scc(rec: &mut Recorder) {
    let mut mismatches = 0;
    let mut cases = 0;
    for b in all_good_choices(4) {
        for x in 0..16u32 {
            cases += 1;
            if c_scc(&b, x).ok() != count_valid(&b, x).ok() {
                mismatches += 1;
            }
        }
    }
    rec.check("exhaustive m = 4", mismatches == 0, format!("{mismatches} mismatches in {cases}"));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for m in [5usize, 6] {
        let mut mismatches = 0;
        for _ in 0..10_000 {
            let b = Choice::random(m, &mut rng, true);
            let x = rng.gen_range(0..1u32 << m);
            if c_scc(&b, x).ok() != count_valid(&b, x).ok() {
                mismatches += 1;
            }
        }
        rec.check(format!("random m = {m}"), mismatches == 0, format!("{mismatches} mismatches in 10000"));
    }
}

fn block(rec: &mut Recorder) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    let total = 100_000;
    for i in 0..total {
        let m = 4 + i % 3;
        let b = Choice::random(m, &mut rng, false);
        let x = rng.gen_range(0..1u32 << m);
        let c = count_valid(&b, x).expect("small");
        if c as usize > block_bound(&b, x) {
            violations += 1;
        }
    }
    rec.check("random m in 4..=6", violations == 0, format!("{violations} violations in {total}"));
}

fn reduce(rec: &mut Recorder) {
    let opts = ChoiceSearchOptions::default();
    let all = rec.result("all", forb_via_choices(4, 3, ChoiceMode::All, &opts));
    let good = rec.result("good", forb_via_choices(4, 3, ChoiceMode::GoodOnly, &opts));
    if let (Some(all), Some(good)) = (all, good) {
        rec.check(
            "max over all choices = max over good choices (m=4, r=3)",
            all.value == good.value && good.argmax.is_good(),
            format!("{} vs {}", all.value, good.value),
        );
    }
}

fn lambda_checks(rec: &mut Recorder) {
    if let Some(l) = rec.result("lambda", lambda(2.0, 1e-6)) {
        rec.check("lambda(2)", (l.value - 0.390747).abs() <= 1e-6, format!("{:.9} after {} terms", l.value, l.terms));
    }
    let c = general_upper_coefficient(&BigRational::from_integer(2.into()));
    let want = BigRational::new(83.into(), 192.into());
    let shown = c.as_ref().map_or_else(|e| e.to_string(), |c| c.to_string());
    rec.check("coefficient at alpha = 2", c.as_ref().ok() == Some(&want), shown);
    for m in 1..=6usize {
        if let Some(h) = rec.result("h_exact", h_exact(m, &2u64, &HExactOptions::default())) {
            let ok = BigRational::from_integer(h.value.into()) <= h_upper_alpha2(m);
            rec.check(format!("H({m},2) <= 83/192 m 2^(m-1)"), ok, format!("{} <= {}", h.value, h_upper_alpha2(m)));
        }
    }
}

fn construction(rec: &mut Recorder) {
    let t = h2_table(30, &BigInt::from(2));
    let mut bad = Vec::new();
    for m in 1..=30 {
        let b = build_g(m);
        if b.tcm.weight(&BigInt::from(2)) != *t.value(m) || !verify_two_recursive(&b.tcm, &b.tree) {
            bad.push(m);
        }
    }
    rec.check("w(G(m), 2) = H2(m, 2)", bad.is_empty(), format!("failures at {bad:?}"));
    let b = build_g(4);
    let choice = choice_from_tcm(&b.tcm, None).choice;
    let v = forb_from_choice(3, &choice, &CountOptions::default());
    rec.check("forb(4,3,B(G(4))) = 16 + 32 + 12", v.as_ref().ok() == Some(&BigUint::from(60u32)), format!("{v:?}"));
}

fn random_matrix(rng: &mut impl Rng) -> RMatrix {
    let rows = rng.gen_range(2..=4);
    let r = rng.gen_range(2..=3u8);
    let cols = rng.gen_range(1..=6);
    let columns = (0..cols).map(|_| (0..rows).map(|_| rng.gen_range(0..r)).collect()).collect();
    RMatrix::new(rows, r, columns).expect("entries in range")
}

fn shuffled(a: &RMatrix, rng: &mut impl Rng) -> RMatrix {
    let mut rp: Vec<usize> = (0..a.num_rows()).collect();
    rp.shuffle(rng);
    let mut cp: Vec<usize> = (0..a.num_columns()).collect();
    cp.shuffle(rng);
    a.permute_rows(&rp).permute_columns(&cp)
}

fn properties(rec: &mut Recorder) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let patterns = ["M", "A1", "A2", "I", "Ic", "K2"].map(|n| ConfigPattern::builtin(n).expect("builtin"));
    let mut failures = 0;
    for _ in 0..1000 {
        let a = random_matrix(&mut rng);
        let f = patterns.choose(&mut rng).expect("nonempty");
        let f2 = ConfigPattern::new(shuffled(f.matrix(), &mut rng));
        let a2 = shuffled(&a, &mut rng);
        if contains_config(&a, f) != contains_config(&a2, &f2) {
            failures += 1;
        }
    }
    rec.check("containment is permutation invariant", failures == 0, format!("{failures} failures in 1000"));

    let mut constructed: Vec<Tcm> = (1..=30).map(|m| build_g(m).tcm).collect();
    constructed.extend((0..200).map(|i| Tcm::random(3 + i % 8, &mut rng)));
    let bad = constructed
        .iter()
        .filter(|g| g.multiplicities().iter().map(|&k| k as u64).sum::<u64>() != binomial(g.m() as u64, 3))
        .count();
    rec.check("sum of multiplicities is C(m,3)", bad == 0, format!("{bad} failures in {}", constructed.len()));

    let mut bad = 0;
    for i in 0..1000 {
        let g = Tcm::random(3 + i % 7, &mut rng);
        if !verify_partition(&g, &closed_sets(&g)) {
            bad += 1;
        }
    }
    rec.check("maximal closed sets partition [m]", bad == 0, format!("{bad} failures in 1000"));

    // The degree inequality needs the swap property of extremal TCMs, which
    // every reassignment-stable TCM has.
    let mut bad = 0;
    let mut unstable = 0;
    for i in 0..1000 {
        let m = 3 + i % 7;
        let g = local_search(&Tcm::random(m, &mut rng), &2u64, &LocalSearchOptions::default()).tcm;
        if !is_reassignment_stable(&g) {
            unstable += 1;
            continue;
        }
        let ok = (0..m).all(|x| {
            let d = g.degree_profile(x);
            (0..m).all(|t| d.iter().skip(t).sum::<usize>() <= m - 1 - t)
        });
        if !ok {
            bad += 1;
        }
    }
    rec.check(
        "degree profile inequality on stable TCMs",
        bad == 0 && unstable == 0,
        format!("{bad} failures, {unstable} unstable in 1000"),
    );
}

fn convergence(rec: &mut Recorder) {
    let l = lambda(2.0, 1e-12).map(|l| l.value).unwrap_or(f64::NAN);
    let t = h2_table(256, &BigInt::from(2));
    let worst = (64..=256).map(|m| (t.normalized(m) - l).abs()).fold(0.0, f64::max);
    rec.check("|h2(m,2) - lambda(2)| < 0.01 for 64 <= m <= 256", worst < 0.01, format!("max gap {worst:.6}"));

    let two = BigRational::from_integer(2.into());
    let g: Vec<BigRational> = (0..=10).map(|k| g_partial(k, &two).expect("alpha > 1")).collect();
    let increasing = g.windows(2).all(|w| w[0] < w[1]);
    rec.check("g(k,2) strictly increasing, k <= 10", increasing, "");

    let h2 = |m: usize| BigRational::new(t.value(m).clone(), BigInt::from(m) * num::pow(BigInt::from(2), m - 1));
    let mut bad = Vec::new();
    for m in (1..=256usize).filter(|m| ![3, 6, 7].contains(m)) {
        let k = usize::BITS - 1 - m.leading_zeros();
        let gk = g_partial(k, &two).expect("alpha > 1");
        let hm = h2(m);
        let equal_expected = m == 5 || m.is_power_of_two();
        if hm > gk || (hm == gk) != equal_expected {
            bad.push(m);
        }
    }
    rec.check("h2(m) <= g(floor(log2 m)), equality iff m = 5 or 2^k", bad.is_empty(), format!("failures at {bad:?}"));
    let exceed: Vec<usize> = [3usize, 6, 7]
        .into_iter()
        .filter(|&m| h2(m) > g_partial(usize::BITS - 1 - m.leading_zeros(), &two).expect("alpha > 1"))
        .collect();
    rec.check("exceptions 3, 6, 7 exceed g", exceed == vec![3, 6, 7], format!("{exceed:?}"));
}
