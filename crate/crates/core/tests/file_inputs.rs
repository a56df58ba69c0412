//! The pipeline fed from text formats agrees with the builtin constructors.

use twistdecomp::formats::{
    cocycle_to_text, group_to_text, gset_to_text, parse_cocycle_text, parse_group_text, parse_gset_text,
    parse_subgroup_words,
};
use twistdecomp::group::are_isomorphic;
use twistdecomp::{dihedral_alpha, verify_gset_decomposition, verify_point_decomposition, DecompositionOptions, FiniteGSet, FiniteGroup, Setting};

#[test]
fn table_and_cocycle_files_reproduce_the_builtin_report() {
    let options = DecompositionOptions::default();
    let alpha = dihedral_alpha(4).unwrap();
    let builtin = Setting::new(alpha.clone(), parse_subgroup_words(alpha.group(), "a2").unwrap()).unwrap();
    let expected = verify_point_decomposition::<f64>(&builtin, &options).unwrap().report;

    let g = parse_group_text(&group_to_text(alpha.group())).unwrap().into_shared();
    let beta = parse_cocycle_text(&cocycle_to_text(&alpha, "dihedral:4"), &g).unwrap();
    // unlabelled table group, so A is given by raw index
    let from_files = Setting::new(beta, parse_subgroup_words(&g, "2").unwrap()).unwrap();
    let got = verify_point_decomposition::<f64>(&from_files, &options).unwrap().report;
    assert_eq!(got.matching_signature(), expected.matching_signature());
    assert_eq!(got.rank.lhs, expected.rank.lhs);
    assert_eq!(got.orbits.len(), expected.orbits.len());
}

#[test]
fn permutation_model_of_d8_is_isomorphic() {
    let p = parse_group_text("perm: degree=4\n(0 1 2 3)\n(1 3)\n").unwrap();
    assert!(are_isomorphic(&p, &FiniteGroup::dihedral(4).unwrap()));
    assert!(!are_isomorphic(&p, &parse_group_text("perm: degree=4\n(0 1 2 3)\n").unwrap()));
}

#[test]
fn gset_file_feeds_the_kgroup_check() {
    let alpha = dihedral_alpha(4).unwrap();
    let g = alpha.group().clone();
    let setting = Setting::new(alpha, parse_subgroup_words(&g, "a").unwrap()).unwrap();
    let cosets = FiniteGSet::cosets(&parse_subgroup_words(&g, "a").unwrap());
    let x = parse_gset_text(&gset_to_text(&cosets), &g).unwrap();
    let d = verify_gset_decomposition::<f64>(&setting, &x, &DecompositionOptions::default()).unwrap();
    assert_eq!(d.report.lhs_rank, 4);
    assert_eq!(d.report.rhs_rank, 4);
}
