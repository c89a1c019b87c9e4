//! Randomized suites for the point-set toolbox: component rims, rims of
//! unions, complements of components, local connectedness, and images of
//! connected sets under set-valued maps with connected values.

use viability::map::{check_conn, check_usc};
use viability::random::{
    random_closed_set, random_setvalued_viable, random_space, random_subset, rng_from_seed,
};

#[test]
fn component_rims_stay_inside_the_set_rim() {
    let mut rng = rng_from_seed(101);
    let mut cases = 0;
    for _ in 0..800 {
        let s = random_space(&mut rng, 10);
        let v = random_subset(&mut rng, &s, 0.5);
        let rim = v.boundary();
        for comp in v.components() {
            assert!(comp.boundary().is_subset(&rim), "{comp:?} in {v:?}");
            cases += 1;
        }
    }
    assert!(cases >= 1000, "{cases}");
}

#[test]
fn closed_component_rims_are_the_sliced_rim() {
    let mut rng = rng_from_seed(102);
    let mut cases = 0;
    for _ in 0..800 {
        let s = random_space(&mut rng, 10);
        let v = random_closed_set(&mut rng, &s);
        let rim = v.boundary();
        for comp in v.components() {
            assert_eq!(comp.boundary(), comp.intersection(&rim));
            cases += 1;
        }
    }
    assert!(cases >= 1000, "{cases}");
}

#[test]
fn union_rims_lie_in_the_closed_union_of_rims() {
    let mut rng = rng_from_seed(103);
    for _ in 0..1200 {
        let s = random_space(&mut rng, 10);
        let parts: Vec<_> = (0..3).map(|_| random_subset(&mut rng, &s, 0.35)).collect();
        let union = parts
            .iter()
            .fold(s.empty_set(), |acc, p| acc.union(p));
        let rims = parts
            .iter()
            .fold(s.empty_set(), |acc, p| acc.union(&p.boundary()));
        assert!(union.boundary().is_subset(&rims.closure()));
    }
}

#[test]
fn complements_of_open_components_stay_connected() {
    let mut rng = rng_from_seed(104);
    let mut cases = 0;
    let mut attempts = 0;
    while cases < 1000 && attempts < 60_000 {
        attempts += 1;
        let s = random_space(&mut rng, 10);
        if !s.full_set().is_connected() {
            continue;
        }
        let a = random_subset(&mut rng, &s, 0.5).interior();
        if !a.complement().is_connected() {
            continue;
        }
        for comp in a.components() {
            assert!(comp.complement().is_connected(), "{comp:?} in {a:?}");
            cases += 1;
        }
    }
    assert!(cases >= 1000, "{cases} qualifying cases in {attempts} attempts");
}

#[test]
fn minimal_opens_are_connected_everywhere() {
    let mut rng = rng_from_seed(105);
    for _ in 0..300 {
        let s = random_space(&mut rng, 12);
        for x in s.cells() {
            assert!(s.minimal_open(x).is_connected());
        }
    }
}

#[test]
fn images_of_connected_sets_are_connected() {
    let mut rng = rng_from_seed(106);
    let mut cases = 0;
    let mut attempts = 0;
    while cases < 1000 && attempts < 30_000 {
        attempts += 1;
        let s = random_space(&mut rng, 10);
        let c = random_closed_set(&mut rng, &s);
        let f = random_setvalued_viable(&mut rng, c.clone());
        if !check_usc(&f).holds() || !check_conn(&f).holds() {
            continue;
        }
        let a = random_subset(&mut rng, &s, 0.6).intersection(&c);
        for part in a.components() {
            let mut image = s.empty_set();
            for x in part.iter() {
                image = image.union(&f.apply(x));
            }
            assert!(image.is_connected(), "{part:?} under {f:?}");
            cases += 1;
        }
    }
    assert!(cases >= 1000, "{cases} qualifying cases in {attempts} attempts");
}
