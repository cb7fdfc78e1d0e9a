//! Verdicts for PSL(2,q) on a homology 4-sphere, with the rules that fire.

use spheregate::constructors::{build, GroupSpec};
use spheregate::rules::{check_sphere4, RuleConfig, R_BOREL};

fn main() {
    let cfg = RuleConfig::default();
    for q in [4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27] {
        let g = build(&GroupSpec::Psl2(q), &cfg.caps).expect("buildable");
        let v = check_sphere4(&g, &cfg).expect("within caps");
        let status = if v.is_excluded() { "excluded" } else { "not excluded" };
        println!("PSL2({q:>2}) order {:>6}: {status:<13} {:?}", g.order(), v.violated_rules());
        if let Some(f) = v.finding(R_BOREL).filter(|_| v.violated_rules().contains(&R_BOREL.to_string())) {
            for lat in f.witness["lattices"].as_array().into_iter().flatten() {
                if lat["solution_count"] == 0 {
                    println!("    ({}-rank {}) {}", lat["p"], lat["rank"], lat["uniform"]["equation"]);
                }
            }
        }
    }
}
