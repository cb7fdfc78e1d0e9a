//! Sorts nonsolvable groups into cases A, B, C or outside the list and
//! prints their Fitting subgroups and components.

use spheregate::constructors::build_str;
use spheregate::group::Caps;
use spheregate::structure::{analyze_structure, classify_nonsolvable};

fn main() {
    let caps = Caps::default();
    let signed = build_str("SignedEven(5)", &caps).unwrap();
    let index_two = signed.index_at_most_two_subgroups().into_iter().find(|h| h.order() == 960).unwrap();
    let mut groups = vec![("order-960 subgroup of SignedEven(5)".to_string(), index_two)];
    for s in ["SignedEven(5)", "Sym(6)", "PGL2(9)", "CentProd(SL2(5),SL2(5))", "DirProd(Alt(5),Perms[(0,1,2,3,4,5,6)])", "Alt(7)"] {
        groups.push((s.to_string(), build_str(s, &caps).unwrap()));
    }
    for (name, g) in groups {
        let case = classify_nonsolvable(&g).unwrap();
        let s = analyze_structure(&g).summary();
        println!("{name}: {:?}", case.tag);
        println!("    witness {}", serde_json::to_string(&case.witness).unwrap());
        println!("    |F| = {}, components {:?}, |E| = {}", s.fitting_order, s.component_orders, s.e_order);
    }
}
