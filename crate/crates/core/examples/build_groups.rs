//! Builds groups from spec strings and prints orders, degrees and
//! conjugacy-class counts.

use spheregate::constructors::{build_str, BuildError};
use spheregate::group::Caps;

fn main() -> Result<(), BuildError> {
    let caps = Caps::default();
    let specs = [
        "PSL2(8)",
        "SL2(5)",
        "PGL2(9)",
        "PSL3(3)",
        "Sz(8)",
        "Meta(13,3,3)",
        "SignedEven(5)",
        "CentProd(SL2(5),SL2(5))",
        "DirProd(Alt(5),Perms[(0,1,2,3,4,5,6)])",
    ];
    println!("{:<40} {:>8} {:>7} {:>8}", "spec", "order", "degree", "classes");
    for s in specs {
        let g = build_str(s, &caps)?;
        println!("{:<40} {:>8} {:>7} {:>8}", s, g.order(), g.degree(), g.conj_classes().len());
    }
    match build_str("PSL2(6)", &caps) {
        Err(e) => println!("PSL2(6): {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
