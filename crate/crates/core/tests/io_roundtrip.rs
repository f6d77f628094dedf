//! Serialize → parse → serialize is the identity on text.

mod common;

use common::*;
use proprep_core::instances::{gen_random, gen_random_block, gen_separation, gen_two_cluster};
use proprep_core::io::{
    parse_committee, parse_coverage, parse_instance, parse_rankings, write_committee,
    write_coverage, write_instance, write_rankings,
};
use proprep_core::{derive_rankings, ear_select, tgc_select, Norm};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (1usize..=12, 2usize..=6, any::<u64>())
        .prop_flat_map(|(n, m, seed)| (Just(n), Just(m), 1..m, Just(seed)))
}

proptest! {
    #[test]
    fn instances_round_trip((n, m, k, seed) in shape()) {
        for inst in [
            gen_random(n, m, k, 2, Norm::L1, seed).unwrap(),
            gen_random(n, m, k, 1, Norm::Euclidean, seed).unwrap(),
            gen_random_block(n, m, k, 3, Norm::LInf, seed).unwrap(),
        ] {
            let profile = derive_rankings(&inst);
            let text = write_instance(&inst, Some(&profile));
            let (back, back_profile) = parse_instance(&text).unwrap();
            prop_assert_eq!(&back, &inst);
            prop_assert_eq!(back_profile.as_ref(), Some(&profile));
            prop_assert_eq!(write_instance(&back, back_profile.as_ref()), text);
            let rtext = write_rankings(&profile);
            prop_assert_eq!(parse_rankings(&rtext).unwrap(), profile);
        }
    }

    #[test]
    fn coverage_and_committees_round_trip((n, m, k, seed) in shape()) {
        let inst = crowded_l1(n, m, k, seed);
        for rec in [ear_select(&derive_rankings(&inst), n, m, k).unwrap(), tgc_select(&inst).unwrap()] {
            let text = write_coverage(&rec);
            let back = parse_coverage(&text).unwrap();
            prop_assert_eq!(&back, &rec);
            prop_assert_eq!(write_coverage(&back), text);
            let ctext = write_committee(&rec.committee());
            prop_assert_eq!(parse_committee(&ctext, m).unwrap(), rec.committee());
        }
    }
}

#[test]
fn generated_families_round_trip() {
    let (sep, profile) = gen_separation(&r(1, 100)).unwrap();
    let text = write_instance(&sep, Some(&profile));
    assert!(text.contains("labels v1 v2 v3 v'1 v'2 v'3 c1 c2 c3 c'1 c'2 c'3"));
    let (back, _) = parse_instance(&text).unwrap();
    assert_eq!(back, sep);
    let tc = gen_two_cluster(&r(3, 2), &r(1000, 1)).unwrap();
    assert_eq!(parse_instance(&write_instance(&tc, None)).unwrap().0, tc);
}

#[test]
fn malformed_inputs_are_rejected() {
    let good = "proprep-instance v1\nn 1\nm 2\nk 1\nmetric block\n1 2\nend\n";
    assert!(parse_instance(good).is_ok());
    for bad in [
        good.replace("1 2\n", "1 -2\n"),
        good.replace("1 2\n", "1\n"),
        good.replace("k 1", "k 2"),
        good.replace("end\n", ""),
        format!("{good}rankings\n3 1\nend\n"),
        format!("{good}rankings\n1 1\nend\n"),
    ] {
        assert!(parse_instance(&bad).is_err(), "accepted:\n{bad}");
    }
    let full = "proprep-instance v1\nn 1\nm 2\nk 1\nmetric full\n0 1 3\n1 0 1\n3 1 0\nend\n";
    let (inst, _) = parse_instance(full).unwrap();
    assert!(proprep_core::validate_metric(&inst).is_err());
    assert!(
        parse_coverage("proprep-coverage v1\nalgorithm ear\nn 2\nm 3\nk 1\nquota 1\n").is_err()
    );
}
