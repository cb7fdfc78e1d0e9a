//! Fitting subgroup, components and the nonsolvable classifier.

use spheregate::constructors::build_str;
use spheregate::group::{Caps, Group};
use spheregate::perm::Perm;
use spheregate::structure::{
    analyze_structure, classify_nonsolvable, components, fitting_subgroup, is_quasisimple, CaseTag, CaseWitness,
    StructureError,
};

fn group(spec: &str) -> Group {
    build_str(spec, &Caps::default()).unwrap()
}

const CORPUS: [&str; 9] = [
    "Alt(5)",
    "SL2(5)",
    "Sym(6)",
    "SignedEven(5)",
    "CentProd(SL2(5),SL2(5))",
    "DirProd(Alt(5),Perms[(0,1,2,3,4,5,6)])",
    "SL2(9)",
    "Meta(7,3,2)",
    "DirProd(SL2(5),Perms[(0,1,2)])",
];

#[test]
fn fitting_subgroup_is_the_largest_normal_nilpotent_subgroup() {
    for spec in CORPUS {
        let g = group(spec);
        let f = fitting_subgroup(&g);
        assert!(f.is_subgroup_of(&g) && g.is_normal(&f), "{spec}");
        // nilpotent: every Sylow subgroup of F is normal and they fill F
        let mut product = 1;
        for p in f.primes() {
            let s = f.sylow(p);
            assert!(f.is_normal(&s), "{spec}: Sylow {p} of F not normal");
            product *= s.order();
        }
        assert_eq!(product, f.order(), "{spec}");
        // contains every O_p(G)
        for p in g.primes() {
            let op = g.core(&g.sylow(p)).unwrap();
            assert!(op.elements().iter().all(|x| f.contains(x)), "{spec}: O_{p} not in F");
        }
    }
}

#[test]
fn components_commute_and_generate_e() {
    for spec in CORPUS {
        let g = group(spec);
        let comps = components(&g);
        for (i, c) in comps.iter().enumerate() {
            assert!(is_quasisimple(c) && c.is_subgroup_of(&g), "{spec}");
            for d in &comps[i + 1..] {
                assert!(c.generators().iter().all(|x| d.generators().iter().all(|y| x.commutes_with(y))), "{spec}");
            }
        }
        let r = analyze_structure(&g);
        let gens: Vec<Perm> = comps.iter().flat_map(|c| c.generators().to_vec()).collect();
        let e = Group::closure(g.degree(), &gens, usize::MAX).unwrap();
        assert_eq!(e.elements(), r.e_subgroup.elements(), "{spec}");
        assert!(g.is_normal(&r.e_subgroup));
        // F and E commute elementwise
        assert!(r.fitting.generators().iter().all(|x| gens.iter().all(|y| x.commutes_with(y))), "{spec}");
    }
}

#[test]
fn known_structures() {
    let cases: [(&str, usize, &[usize]); 6] = [
        ("Alt(5)", 1, &[60]),
        ("SL2(5)", 2, &[120]),
        ("SignedEven(5)", 16, &[]),
        ("CentProd(SL2(5),SL2(5))", 2, &[120, 120]),
        ("DirProd(Alt(5),Perms[(0,1,2,3,4,5,6)])", 7, &[60]),
        ("Sym(6)", 1, &[360]),
    ];
    for (spec, f, comps) in cases {
        let s = analyze_structure(&group(spec)).summary();
        assert_eq!(s.fitting_order, f, "{spec}");
        assert_eq!(s.component_orders, comps, "{spec}");
    }
}

/// GF(9) as `a + b i` with `i^2 = -1`, coded `a + 3b`.
fn gf9_mul(x: usize, y: usize) -> usize {
    let (a, b, c, d) = (x % 3, x / 3, y % 3, y / 3);
    let re = (a * c + 2 * b * d) % 3;
    let im = (a * d + b * c) % 3;
    re + 3 * im
}

fn gf9_add(x: usize, y: usize) -> usize {
    (x % 3 + y % 3) % 3 + 3 * ((x / 3 + y / 3) % 3)
}

fn gf9_inv(x: usize) -> usize {
    (1..9).find(|&y| gf9_mul(x, y) == 1).unwrap()
}

/// Point 9 is infinity.
fn line_perm(f: impl Fn(usize) -> usize) -> Perm {
    Perm::from_images(&(0..10).map(f).collect::<Vec<_>>()).unwrap()
}

/// `M10`: `PSL(2,9)` extended by `z -> w z^3` with `w` a non-square.
fn m10() -> Group {
    const INF: usize = 9;
    let w = 4; // 1 + i, multiplicative order 8
    let square = gf9_mul(w, w);
    let translate = line_perm(|z| if z == INF { INF } else { gf9_add(z, 1) });
    let scale = line_perm(|z| if z == INF { INF } else { gf9_mul(square, z) });
    let invert = line_perm(|z| match z {
        INF => 0,
        0 => INF,
        z => gf9_mul(2, gf9_inv(z)), // -1/z
    });
    let twist = line_perm(|z| if z == INF { INF } else { gf9_mul(w, gf9_mul(z, gf9_mul(z, z))) });
    Group::closure(10, &[translate, scale, invert, twist], usize::MAX).unwrap()
}

#[test]
fn order_720_lookalikes_are_separated() {
    let m = m10();
    assert_eq!(m.order(), 720);
    // every element outside A6 has order 4 or 8
    let a6 = m.derived_subgroup();
    assert_eq!(a6.order(), 360);
    assert!(m.elements().iter().filter(|x| !a6.contains(x)).all(|x| x.order() == 4 || x.order() == 8));
    let fps = [
        m.fingerprint(),
        group("Sym(6)").fingerprint(),
        group("PGL2(9)").fingerprint(),
        group("DirProd(Alt(6),Perms[(0,1)])").fingerprint(),
    ];
    for i in 0..fps.len() {
        assert_eq!(fps[i].order, 720);
        for j in i + 1..fps.len() {
            assert_ne!(fps[i], fps[j], "{i} vs {j}");
        }
    }
    assert_eq!(classify_nonsolvable(&m).unwrap().tag, CaseTag::OutsideList);
}

#[test]
fn classifier_cases() {
    let cases = [
        ("SignedEven(5)", CaseTag::A),
        ("Alt(6)", CaseTag::B),
        ("Sym(6)", CaseTag::B),
        ("Alt(5)", CaseTag::C),
        ("SL2(5)", CaseTag::C),
        ("CentProd(SL2(5),SL2(5))", CaseTag::C),
        ("DirProd(Alt(5),Perms[(0,1,2,3,4,5,6)])", CaseTag::C),
        ("PGL2(9)", CaseTag::OutsideList),
        ("Alt(7)", CaseTag::OutsideList),
        ("DirProd(Alt(6),Perms[(0,1)])", CaseTag::OutsideList),
        ("PSL2(7)", CaseTag::OutsideList),
    ];
    for (spec, tag) in cases {
        assert_eq!(classify_nonsolvable(&group(spec)).unwrap().tag, tag, "{spec}");
    }
    assert!(matches!(classify_nonsolvable(&group("Meta(7,3,2)")), Err(StructureError::SolvableInput)));
}

#[test]
fn case_witnesses_revalidate() {
    let g = group("SignedEven(5)");
    let CaseWitness::NormalEa { ea_order, quotient, .. } = classify_nonsolvable(&g).unwrap().witness else {
        panic!("expected a normal elementary abelian witness");
    };
    assert_eq!((ea_order, quotient.as_str()), (16, "S5"));
    let n: Vec<Group> = g
        .normal_subgroups()
        .into_iter()
        .filter(|n| n.order() == 16 && n.is_abelian() && n.elements().iter().all(|x| x.order() <= 2))
        .collect();
    assert!(!n.is_empty());
    let q = g.quotient(&n[0], 10_000).unwrap().into_group();
    assert_eq!(q.fingerprint(), group("Sym(5)").fingerprint());

    let a5c7 = group("DirProd(Alt(5),Perms[(0,1,2,3,4,5,6)])");
    match classify_nonsolvable(&a5c7).unwrap().witness {
        CaseWitness::A5TimesC { index, cofactor_order, cofactor } => {
            assert_eq!((index, cofactor_order, cofactor.as_str()), (1, 7, "cyclic"));
        }
        w => panic!("unexpected witness {w:?}"),
    }
    assert_eq!(
        classify_nonsolvable(&group("CentProd(SL2(5),SL2(5))")).unwrap().witness,
        CaseWitness::SL25CentralSquare { index: 1 }
    );
    let c = classify_nonsolvable(&group("DirProd(SL2(5),Perms[(0,1,2)])")).unwrap();
    assert!(matches!(c.witness, CaseWitness::SL25CentralC { cofactor_order: 6, .. }));
    assert_eq!(c.unverified.len(), 1);
}
