//! Metacyclic subgroups H(p:q) and whether their multipliers pass the
//! ±1 tests in dimensions 3 and 4.

use spheregate::constructors::build_str;
use spheregate::group::Caps;
use spheregate::subgroups::{all_metacyclic, multiplier_admissible};

fn main() {
    for s in ["Alt(5)", "PSL2(7)", "Alt(7)", "PSL3(3)", "Meta(31,3,5)"] {
        let g = build_str(s, &Caps::default()).unwrap();
        println!("{s}:");
        for w in all_metacyclic(&g) {
            println!(
                "  H({}:{}) t = {:>2}  t^2 = {:>2} (mod {})  dim3 {}  dim4 {}",
                w.p,
                w.q,
                w.t,
                w.t * w.t % w.p,
                w.p,
                multiplier_admissible(w.t, w.p, 3),
                multiplier_admissible(w.t, w.p, 4)
            );
        }
    }
}
