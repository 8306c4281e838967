mod common;

use forbcfg::choice::{forb_via_choices, ChoiceMode, ChoiceSearchOptions};
use forbcfg::recurrence::{build_g, h2_table};
use forbcfg::tcm::{closed_sets, h_exact, HExactOptions};
use forbcfg::Tcm;

use common::*;

fn all_argmax(m: usize, alpha: u64) -> (u64, Vec<Tcm>) {
    let opts = HExactOptions { collect_all: true, ..HExactOptions::default() };
    let r = h_exact(m, &alpha, &opts).unwrap();
    assert!(r.status.is_exact());
    (r.value, r.all_argmax)
}

#[test]
fn strictly_heaviest_edge_is_chosen_in_every_extremal_tcm() {
    for alpha in [2u64, 3] {
        for m in 3..=5 {
            let (value, argmax) = all_argmax(m, alpha);
            assert!(!argmax.is_empty());
            for g in &argmax {
                assert_eq!(weight_brute(m, g.codes(), alpha as u128), value as u128);
                let mult = multiplicities_from_codes(m, g.codes());
                for [a, b, c] in triples(m) {
                    let chosen = g.edge_of(a, b, c);
                    for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                        let heaviest = mult[x][y] > mult[x][z] && mult[x][y] > mult[y][z];
                        assert_eq!(heaviest, chosen == [x, y], "m={m} alpha={alpha} triple {a}{b}{c}");
                    }
                }
            }
        }
    }
}

#[test]
fn some_extremal_tcm_has_no_singleton_closed_set() {
    for m in 4..=6 {
        let (_, argmax) = all_argmax(m, 2);
        let good = argmax.iter().filter(|g| closed_sets(g).sizes().iter().all(|&s| s >= 2)).count();
        assert!(good > 0, "m={m}: none of {} maximisers qualifies", argmax.len());
    }
}

#[test]
fn extremal_values_agree_with_brute_force_and_recurrence() {
    for alpha in [2u64, 3] {
        let h2 = h2_brute(6, alpha as u128);
        for m in 1..=6 {
            let h = h_exact(m, &alpha, &HExactOptions::default()).unwrap();
            assert!(h.status.is_exact());
            if m <= 5 {
                assert_eq!(h.value as u128, h_brute(m, alpha as u128), "m={m} alpha={alpha}");
            }
            if m >= 3 {
                assert_eq!(h.value as u128, h2[m], "m={m} alpha={alpha}");
            }
            assert_eq!(h2_table(m, &(alpha as u128)).value(m), &h2[m]);
        }
    }
}

#[test]
fn construction_realises_the_recurrence() {
    for alpha in [2u128, 3, 5] {
        let h2 = h2_brute(24, alpha);
        for m in 1..=24 {
            let g = build_g(m).tcm;
            assert!(g.cache_consistent());
            let w = weight_brute(m, g.codes(), alpha);
            if alpha == 2 {
                assert_eq!(w, h2[m], "m={m}");
            } else {
                assert!(w <= h2[m]);
            }
        }
    }
}

#[test]
fn choice_search_matches_plain_enumeration() {
    let opts = ChoiceSearchOptions::default();
    for (m, r) in [(3usize, 3u64), (3, 4), (3, 5), (3, 7), (4, 3), (4, 4)] {
        let (all, good) = forb_via_all_choices_brute(m, r);
        assert_eq!(all, good, "m={m} r={r}: a good choice attains the maximum");
        for mode in [ChoiceMode::All, ChoiceMode::GoodOnly] {
            let res = forb_via_choices(m, r, mode, &opts).unwrap();
            assert!(res.status.is_exact());
            assert_eq!(res.value.to_string(), all.to_string(), "m={m} r={r} {mode:?}");
            assert_eq!(forb_of_choice_brute(&res.argmax, r), all);
        }
    }
}
