//! Runs the bundled desk-scale manifest and prints the survivors.

use spheregate::cli::Manifest;
use spheregate::rules::{survey, RuleConfig};

fn main() {
    let text = include_str!("../manifests/gorenstein_desk.json");
    let manifest = Manifest::parse(text).expect("bundled manifest");
    let report = survey(&manifest.groups, 4, &RuleConfig::default());
    print!("{}", report.to_csv());
    println!("simple survivors: {:?}", report.simple_survivors);

    let dim3: Vec<_> = manifest.groups.iter().filter(|e| ["Alt(5)", "Alt(6)", "PSL2(7)", "SL2(7)"].contains(&e.spec.as_str())).cloned().collect();
    let report3 = survey(&dim3, 3, &RuleConfig::default());
    println!("homology 3-sphere survivors: {:?}", report3.survivors);
}
