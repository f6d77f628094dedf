//! Library audits and selection rules against the brute-force oracles.

mod common;

use common::*;
use num_rational::BigRational;
use proprep_core::audit::reeval::witness_value;
use proprep_core::{
    cor_single_audit, core_beta, derive_rankings, distortion, ear_select, pf_gamma, pr_gamma_pair,
    single_winner, stability_rho, tgc_select, CoalitionMode, Committee, CoverageRecord, Instance,
    StabilityVariant,
};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (2usize..=9, 2usize..=6, any::<u64>())
        .prop_flat_map(|(n, m, seed)| (Just(n), Just(m), 1..m, Just(seed)))
}

fn both(n: usize, m: usize, k: usize, seed: u64) -> [Instance; 2] {
    [random_l1(n, m, k, seed), crowded_l1(n, m, k, seed)]
}

fn alphas() -> [BigRational; 3] {
    [r(1, 1), r(3, 2), r(2, 1)]
}

fn committees(inst: &Instance, seed: u64) -> Vec<(Committee, Option<CoverageRecord>)> {
    let ear = ear_select(&derive_rankings(inst), inst.n(), inst.m(), inst.k()).unwrap();
    let tgc = tgc_select(inst).unwrap();
    // a committee from the seed, unrelated to either rule
    let mut pool: Vec<usize> = (0..inst.m()).collect();
    let mut s = seed;
    for i in (1..pool.len()).rev() {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        pool.swap(i, (s >> 33) as usize % (i + 1));
    }
    pool.truncate(inst.k());
    vec![
        (ear.committee(), Some(ear)),
        (tgc.committee(), Some(tgc)),
        (Committee::new(pool, inst.m()).unwrap(), None),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pf_and_core_match_enumeration((n, m, k, seed) in shape()) {
        for inst in both(n, m, k, seed) {
        for (committee, _) in committees(&inst, seed) {
            let pf = pf_gamma(&inst, &committee).unwrap();
            prop_assert_eq!(&pf.value, &pf_brute(&inst, committee.members()));
            prop_assert_eq!(witness_value(&inst, &committee, None, &pf).unwrap(), Some(pf.value.clone()));
            for alpha in alphas() {
                let core = core_beta(&inst, &committee, &alpha).unwrap();
                prop_assert_eq!(&core.value, &core_brute(&inst, committee.members(), &alpha));
                if core.witness.is_some() {
                    prop_assert_eq!(witness_value(&inst, &committee, None, &core).unwrap(), Some(core.value.clone()));
                }
            }
        }
        }
    }

    #[test]
    fn representation_matches_enumeration((n, m, k, seed) in shape()) {
        prop_assume!(m <= 5);
        for inst in both(n, m, k, seed) {
        for (committee, _) in committees(&inst, seed) {
            for alpha in alphas() {
                let (weak, strong) = pr_gamma_pair(&inst, &committee, &alpha, None, CoalitionMode::default()).unwrap();
                let (bw, bs) = pr_brute(&inst, committee.members(), &alpha, 1, k);
                prop_assert_eq!(&weak.value, &bw);
                prop_assert_eq!(&strong.value, &bs);
                for rep in [&weak, &strong] {
                    if rep.witness.is_some() {
                        prop_assert_eq!(witness_value(&inst, &committee, None, rep).unwrap(), Some(rep.value.clone()));
                    }
                }
                let (t1, _) = pr_gamma_pair(&inst, &committee, &alpha, Some((1, 1)), CoalitionMode::default()).unwrap();
                prop_assert_eq!(&t1.value, &core_beta(&inst, &committee, &alpha).unwrap().value);
            }
        }
        }
    }

    #[test]
    fn coverage_audits_match_enumeration((n, m, k, seed) in shape()) {
        for inst in both(n, m, k, seed) {
        for (committee, coverage) in committees(&inst, seed) {
            let Some(rec) = coverage else { continue };
            let st = stability_rho(&inst, &rec, StabilityVariant::Ordinal, 20).unwrap();
            prop_assert_eq!(&st.value, &stability_brute(&inst, &rec));
            if st.witness.is_some() {
                prop_assert_eq!(witness_value(&inst, &committee, Some(&rec), &st).unwrap(), Some(st.value.clone()));
            }
            for alpha in alphas() {
                let cs = cor_single_audit(&inst, &rec, &alpha, 20).unwrap();
                prop_assert_eq!(&cs.value, &cor_single_brute(&inst, &rec, &alpha));
            }
        }
        }
    }

    #[test]
    fn selection_rules_match_literal_versions((n, m, k, seed) in shape()) {
        for inst in both(n, m, k, seed) {
        let profile = derive_rankings(&inst);
        let ear = ear_select(&profile, n, m, k).unwrap();
        prop_assert_eq!(trace_of(&ear), ear_oracle(&profile, k));
        let tgc = tgc_select(&inst).unwrap();
        prop_assert_eq!(trace_of(&tgc), tgc_oracle(&inst));
        }
    }

    #[test]
    fn single_winner_matches_literal_version((n, m, _k, seed) in shape()) {
        for inst in both(n, m, 1, seed) {
        let profile = derive_rankings(&inst);
        let w = single_winner(&profile);
        prop_assert_eq!(w, single_winner_oracle(&profile));
        prop_assert_eq!(distortion(&inst, w).unwrap(), distortion_brute(&inst, w));
        }
    }
}
