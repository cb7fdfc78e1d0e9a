//! The 5-dimensional model of A6 restricted to a (Z_3)^2: its fixed-point
//! dimension function, compared with the enumerated solutions.

use spheregate::constructors::{build_str, orthogonal_model, GroupSpec};
use spheregate::fixdim::{check_constraints, enumerate_dimfns, orthogonal_dimfn, CspOptions, EALattice};
use spheregate::group::Caps;
use spheregate::perm::Perm;
use spheregate::subgroups::EAWitness;

fn main() {
    let g = build_str("Alt(6)", &Caps::default()).unwrap();
    let model = orthogonal_model(&GroupSpec::Alt(6)).unwrap();
    println!("model dimension {}, invariant form {:?}", model.dim, model.gram);
    let a = Perm::from_cycles(6, &[[0, 1, 2]]).unwrap();
    let b = Perm::from_cycles(6, &[[3, 4, 5]]).unwrap();
    let w = EAWitness { p: 3, rank: 2, generators: vec![a, b] };
    let lat = EALattice::from_group(&g, &w).unwrap();
    let f = orthogonal_dimfn(&model, &lat).unwrap();
    for id in 0..lat.len() {
        let gens: Vec<String> = lat.subgroup_generators(id).unwrap().iter().map(|x| x.to_string()).collect();
        println!("  <{}> -> {}", gens.join(", "), f.value(id));
    }
    let opts = CspOptions::for_sphere(4);
    println!("constraint violations: {:?}", check_constraints(&lat, &f, &opts));
    println!("among enumerated solutions: {}", enumerate_dimfns(&lat, 4, &opts).contains(&f));
}
