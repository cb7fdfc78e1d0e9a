//! Dimension functions on elementary abelian lattices: the rank-two and
//! rank-four 2-group profiles and the infeasible uniform equations.

use std::collections::BTreeMap;

use spheregate::fixdim::{enumerate_dimfns, involution_profile, uniform_borel_check, CspOptions, EALattice};

fn main() {
    let opts = CspOptions::for_sphere(4);
    for (p, k) in [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (3, 3), (2, 5)] {
        let lat = EALattice::abstract_lattice(p, k).expect("small lattice");
        let sols = enumerate_dimfns(&lat, 4, &opts);
        let mut shapes: BTreeMap<(i32, Vec<(i32, usize)>), usize> = BTreeMap::new();
        for (f, prof) in sols.iter().zip(involution_profile(&lat, &sols)) {
            *shapes.entry((f.r(), prof.into_iter().collect())).or_default() += 1;
        }
        println!("(Z_{p})^{k}: {} subgroups, {} solutions", lat.len(), sols.len());
        for ((r, prof), n) in shapes {
            println!("  r = {r:>2}: cyclic values {prof:?} x{n}");
        }
    }
    for count in [6, 7, 15] {
        let u = uniform_borel_check(4, count, &[0, 2], (-1, 3));
        println!("{}: feasible = {}", u.equation, u.feasible);
    }
}
