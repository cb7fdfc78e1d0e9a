//! Arithmetic in GF(9) and GF(8): primitive elements, inverses and the
//! additive basis used by the PSL(2,q) generators.

use spheregate::gf::{FieldSpec, GfError};

fn main() -> Result<(), GfError> {
    for (p, n) in [(3, 2), (2, 3)] {
        let f = FieldSpec::new(p, n)?;
        let w = f.primitive();
        println!("GF({}): modulus {:?}, primitive element code {}", f.size(), f.modulus(), f.code(&w));
        let powers = (0..f.size() as i64 - 1)
            .map(|k| f.pow(&w, k).map(|x| f.code(&x)))
            .collect::<Result<Vec<_>, _>>()?;
        println!("  powers: {powers:?}");
        for x in f.elements().filter(|x| !x.is_zero()) {
            assert_eq!(f.code(&f.mul(&x, &f.inv(&x)?)?), 1);
        }
        let basis: Vec<u32> = f.additive_basis().iter().map(|b| f.code(b)).collect();
        println!("  additive basis codes: {basis:?}");
    }
    Ok(())
}
