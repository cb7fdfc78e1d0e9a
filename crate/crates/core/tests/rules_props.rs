//! Rule soundness re-checks, subgroup monotonicity, determinism.

mod common;

use common::{naive_conjugacy_labels, parse_perm, Oracle};

use proptest::prelude::*;
use serde_json::Value;
use spheregate::constructors::build_str;
use spheregate::group::{Caps, Group};
use spheregate::perm::Perm;
use spheregate::rules::{check, survey, Outcome, RuleConfig, SurveyEntry, Verdict, SPHERE3_RULES, SPHERE4_RULES};

fn group(spec: &str) -> Group {
    build_str(spec, &Caps::default()).unwrap()
}

fn verdict(spec: &str, dim: u32) -> (Group, Verdict) {
    let g = group(spec);
    let v = check(&g, dim, &RuleConfig::default()).unwrap();
    (g, v)
}

fn witness<'a>(v: &'a Verdict, rule: &str) -> &'a Value {
    &v.finding(rule).unwrap().witness
}

fn mod_pow(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * b % m)
}

#[test]
fn meta_violations_recheck() {
    for (spec, dim, rule) in [
        ("PSL2(7)", 4, "R-META"),
        ("PSL2(11)", 4, "R-META"),
        ("PSL2(13)", 4, "R-META"),
        ("Alt(7)", 4, "R-META"),
        ("PSL3(3)", 4, "R-META"),
        ("SL2(7)", 4, "R-META"),
        ("PSL2(7)", 3, "R-META3"),
    ] {
        let (g, v) = verdict(spec, dim);
        assert_eq!(v.finding(rule).unwrap().outcome, Outcome::Violation, "{spec}");
        let mut bad = 0;
        for w in witness(&v, rule)["witnesses"].as_array().unwrap() {
            let (p, q, t) = (w["p"].as_u64().unwrap(), w["q"].as_u64().unwrap(), w["t"].as_u64().unwrap());
            let a = parse_perm(w["a"].as_str().unwrap(), g.degree());
            let b = parse_perm(w["b"].as_str().unwrap(), g.degree());
            assert!(g.contains(&a) && g.contains(&b));
            assert_eq!(a.order(), p);
            assert_eq!(b.inverse().compose(&a).compose(&b), a.pow(t as i64));
            assert_eq!(mod_pow(t, q, p), 1);
            assert!((1..q).all(|e| mod_pow(t, e, p) != 1), "{spec}: t={t} has order {q} mod {p}");
            let t2 = t * t % p;
            let ok = if dim == 3 { t % p == 1 || t % p == p - 1 } else { t2 == 1 || t2 == p - 1 };
            assert_eq!(w["admissible"].as_bool().unwrap(), ok);
            bad += usize::from(!ok);
        }
        assert!(bad > 0, "{spec}: violation without an inadmissible witness");
    }
}

#[test]
fn rank_violation_recheck() {
    let (g, v) = verdict("PSL2(27)", 4);
    let f = v.finding("R-RANK").unwrap();
    assert_eq!(f.outcome, Outcome::Violation);
    let row = f.witness["ranks"].as_array().unwrap().iter().find(|r| r["p"] == 3).unwrap();
    assert_eq!(row["rank"], 3);
    let gens: Vec<Perm> =
        row["generators"].as_array().unwrap().iter().map(|s| parse_perm(s.as_str().unwrap(), g.degree())).collect();
    assert_eq!(gens.len(), 3);
    for a in &gens {
        assert!(g.contains(a) && a.order() == 3);
        assert!(gens.iter().all(|b| a.commutes_with(b)));
    }
    let e = Group::closure(g.degree(), &gens, usize::MAX).unwrap();
    assert_eq!(e.order(), 27);
}

/// Rebuilds each empty lattice in an R-BOREL trace from its generators,
/// colors it by explicit conjugation, and asks the brute-force oracle.
fn recheck_borel(spec: &str) {
    let (g, v) = verdict(spec, 4);
    let f = v.finding("R-BOREL").unwrap();
    assert_eq!(f.outcome, Outcome::Violation, "{spec}");
    let mut empty = 0;
    for lat in f.witness["lattices"].as_array().unwrap() {
        if lat["solution_count"] != 0 {
            continue;
        }
        empty += 1;
        let (p, k) = (lat["p"].as_u64().unwrap() as u32, lat["rank"].as_u64().unwrap() as usize);
        let gens: Vec<Perm> =
            lat["generators"].as_array().unwrap().iter().map(|s| parse_perm(s.as_str().unwrap(), g.degree())).collect();
        let o = Oracle::new(p, k);
        let elem = |code: u32| {
            let (mut c, mut x) = (code, g.identity());
            for gen in &gens {
                x = x.compose(&gen.pow((c % p) as i64));
                c /= p;
            }
            x
        };
        let subs: Vec<Vec<Perm>> = o.subs.iter().map(|s| s.iter().map(|&c| elem(c)).collect()).collect();
        let colors = naive_conjugacy_labels(&g, &subs);
        assert!(o.solve(4, &[0, 2], true, &colors).is_empty(), "{spec}: oracle finds a solution on ({p},{k})");
    }
    assert!(empty > 0);
}

#[test]
fn borel_violations_recheck() {
    for spec in ["PSL2(8)", "PSL2(25)", "PSL2(27)", "PGL2(9)", "PSL2(16)"] {
        recheck_borel(spec);
    }
}

#[test]
fn excluded_verdicts_carry_cited_violations() {
    for (spec, dim) in [("PSL2(7)", 4), ("PSL2(8)", 4), ("SL2(9)", 4), ("Alt(6)", 3), ("PSL3(3)", 4)] {
        let (_, v) = verdict(spec, dim);
        assert!(v.is_excluded());
        for f in v.trace.iter().filter(|f| f.outcome == Outcome::Violation) {
            assert!(!f.citation.trim().is_empty());
            assert!(f.witness.is_object());
        }
    }
}

#[test]
fn traces_list_every_rule_once() {
    for (spec, dim, ids) in [("Alt(5)", 4, &SPHERE4_RULES[..]), ("Alt(5)", 3, &SPHERE3_RULES[..])] {
        let (_, v) = verdict(spec, dim);
        let rules: Vec<&str> = v.trace.iter().map(|f| f.rule.as_str()).collect();
        assert_eq!(rules, ids);
    }
}

#[test]
fn verdicts_are_deterministic() {
    for spec in ["Alt(6)", "PSL2(25)", "SL2(9)", "CentProd(SL2(5),SL2(5))"] {
        let a = verdict(spec, 4).1.to_json();
        let b = verdict(spec, 4).1.to_json();
        assert_eq!(a, b, "{spec}");
    }
}

#[test]
fn survey_is_independent_of_thread_count() {
    let entries: Vec<SurveyEntry> =
        ["Alt(5)", "Alt(6)", "PSL2(7)", "PSL2(8)", "SL2(9)", "PSL2(6)", "Sym(6)"].iter().map(|s| SurveyEntry::new(s)).collect();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&survey(&entries, 4, &RuleConfig::default())).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn disabling_rules_never_adds_exclusions() {
    for spec in ["PSL2(7)", "PSL2(8)", "SL2(7)", "Alt(5)", "Sym(6)"] {
        let g = group(spec);
        let full = check(&g, 4, &RuleConfig::default()).unwrap();
        for rule in SPHERE4_RULES {
            let mut cfg = RuleConfig::default();
            cfg.disable(rule).unwrap();
            let v = check(&g, 4, &cfg).unwrap();
            assert_eq!(v.finding(rule).unwrap().outcome, Outcome::Skipped);
            let mut expect = full.violated_rules();
            expect.retain(|r| r != rule);
            assert_eq!(v.violated_rules(), expect, "{spec} without {rule}");
        }
    }
}

#[test]
fn excluded_subgroup_excludes_the_whole_group() {
    // PSL(3,2) sits in Alt(7) as the stabilizer of a Fano structure.
    let a7 = group("Alt(7)");
    let fano = [[0, 1, 3], [1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 0], [5, 6, 1], [6, 0, 2]];
    let lines: Vec<Vec<usize>> = fano.iter().map(|l| { let mut l = l.to_vec(); l.sort(); l }).collect();
    let keeps = |x: &Perm| lines.iter().all(|l| { let mut im: Vec<usize> = l.iter().map(|&i| x.apply(i)).collect(); im.sort(); lines.contains(&im) });
    let stab: Vec<Perm> = a7.elements().iter().filter(|x| keeps(x)).cloned().collect();
    let h = Group::closure(7, &stab, usize::MAX).unwrap();
    assert_eq!(h.order(), 168);
    let cfg = RuleConfig::default();
    assert!(check(&h, 4, &cfg).unwrap().is_excluded());
    assert!(check(&a7, 4, &cfg).unwrap().is_excluded());
}

fn random_subgroup(g: &Group, i: usize, j: usize) -> Group {
    let e = g.elements();
    g.subgroup(&[e[i % e.len()].clone(), e[j % e.len()].clone()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // Each of these groups acts on S^4 with the listed fixed-point data, so
    // no subgroup may be excluded.
    #[test]
    fn subgroups_of_acting_groups_survive_dim4(which in 0usize..4, i in any::<usize>(), j in any::<usize>()) {
        let spec = ["Alt(6)", "Sym(6)", "SignedEven(5)", "SL2(5)"][which];
        let g = group(spec);
        let h = random_subgroup(&g, i, j);
        let v = check(&h, 4, &RuleConfig::default()).unwrap();
        prop_assert!(!v.is_excluded(), "{} subgroup of order {} excluded by {:?}", spec, h.order(), v.violated_rules());
    }

    #[test]
    fn subgroups_of_acting_groups_survive_dim3(which in 0usize..2, i in any::<usize>(), j in any::<usize>()) {
        let spec = ["Alt(5)", "SL2(5)"][which];
        let g = group(spec);
        let h = random_subgroup(&g, i, j);
        let v = check(&h, 3, &RuleConfig::default()).unwrap();
        prop_assert!(!v.is_excluded(), "{} subgroup of order {} excluded by {:?}", spec, h.order(), v.violated_rules());
    }
}
