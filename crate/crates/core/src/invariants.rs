//! Property-based invariants over the public API.

use crate::capacity_limits as cl;
use crate::codes::{fwht, hadamard_code, hamming_distance, ml_decode_hard, rm1_code, sylvester_hadamard};
use crate::discrimination::{gram_from_code, sqrtm_psd, srm_channel, PureStateEnsemble};
use crate::optics_sim::{green_machine, ModeAmplitudes};
use crate::superchannel::{capacity_blahut_arimoto, mutual_information, uniform_priors};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn brute_decode(code: &crate::codes::BinaryCode, r: &[u8]) -> usize {
    (0..code.size())
        .min_by_key(|&j| (hamming_distance(code.codeword(j), r), j))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fwht_matches_dense_hadamard(m in 0u32..7, seed in any::<u64>()) {
        let len = 1usize << m;
        let v: Vec<f64> = (0..len).map(|i| ((seed.wrapping_mul(i as u64 + 1) >> 11) % 1000) as f64 / 100.0 - 5.0).collect();
        let h = sylvester_hadamard(m);
        let fast = fwht(&v, false).unwrap();
        for (row, got) in h.iter().zip(&fast) {
            let dense: f64 = row.iter().zip(&v).map(|(&s, &x)| f64::from(s) * x).sum();
            prop_assert!((dense - got).abs() < 1e-9);
        }
        let back = fwht(&fwht(&v, true).unwrap(), true).unwrap();
        for (a, b) in back.iter().zip(&v) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fwht_decoding_matches_brute_force(m in 1u32..6, bits in any::<u64>(), rm in any::<bool>()) {
        let code = if rm { rm1_code(m).unwrap() } else { hadamard_code(m, bits & 1 == 1).unwrap() };
        let r: Vec<u8> = (0..code.n()).map(|i| ((bits >> (i % 64)) & 1) as u8 ^ (i / 64) as u8 & 1).collect();
        prop_assert_eq!(ml_decode_hard(&code, &r).unwrap(), brute_decode(&code, &r));
    }

    #[test]
    fn green_machine_is_energy_preserving(k in 0u32..9, re in prop::collection::vec(-3.0f64..3.0, 256), im in prop::collection::vec(-3.0f64..3.0, 256)) {
        let len = 1usize << k;
        let amps: Vec<Complex64> = (0..len).map(|i| Complex64::new(re[i], im[i])).collect();
        let x = ModeAmplitudes::new(amps).unwrap();
        let y = green_machine(&x).unwrap();
        prop_assert!((y.energy() - x.energy()).abs() <= 1e-12 * x.energy().max(1.0));
        // the butterfly of 50-50 splitters is its own inverse
        let z = green_machine(&y).unwrap();
        for (a, b) in z.amps().iter().zip(x.amps()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn sqrtm_round_trip(m in 1u32..4, n in 1e-3f64..3.0) {
        let e = gram_from_code(&rm1_code(m).unwrap(), n).unwrap();
        let root = sqrtm_psd(e.gram()).unwrap();
        let sq = &root * &root;
        prop_assert!((sq - e.gram()).amax() < 1e-10);
        prop_assert!((&root - root.transpose()).amax() < 1e-12);
    }

    #[test]
    fn f_integral_bounds(b in 0.0f64..50.0, db in 0.0f64..5.0) {
        let f = cl::f_integral(b).unwrap();
        prop_assert!(f >= 0.0);
        prop_assert!(f <= -(-b).exp_m1() / 2.0 + 1e-15);
        prop_assert!(cl::f_integral(b + db).unwrap() >= f - 1e-14);
    }

    #[test]
    fn nbar_for_pie_inverts_pie(log_n in -6.0f64..1.0) {
        let n = 10f64.powf(log_n);
        let pie = cl::pie_ultimate(n).unwrap();
        let back = cl::nbar_for_pie(pie).unwrap();
        prop_assert!((back / n - 1.0).abs() < 1e-8);
    }

    #[test]
    fn pie_ultimate_decreasing(log_n in -6.0f64..1.0, step in 1e-3f64..1.0) {
        let n = 10f64.powf(log_n);
        prop_assert!(cl::pie_ultimate(n * (1.0 + step)).unwrap() < cl::pie_ultimate(n).unwrap());
    }

    #[test]
    fn srm_invariant_under_relabeling(m in 1u32..4, n in 1e-3f64..2.0, shift in 0usize..16) {
        let e = gram_from_code(&rm1_code(m).unwrap(), n).unwrap();
        let k = e.len();
        let perm: Vec<usize> = (0..k).map(|i| (i * 5 + shift) % k).collect();
        if perm.iter().collect::<std::collections::HashSet<_>>().len() != k {
            return Ok(());
        }
        let g = DMatrix::from_fn(k, k, |i, j| e.gram()[(perm[i], perm[j])]);
        let permuted = PureStateEnsemble::new(g, uniform_priors(k)).unwrap();
        let a = srm_channel(&e).unwrap();
        let b = srm_channel(&permuted).unwrap();
        let ia = mutual_information(&a, &uniform_priors(k)).unwrap();
        let ib = mutual_information(&b, &uniform_priors(k)).unwrap();
        prop_assert!((ia - ib).abs() < 1e-10);
    }

    #[test]
    fn capacity_orderings(log_n in -5.0f64..1.0, m in 1u32..9) {
        let n = 10f64.powf(log_n);
        let holevo = cl::holevo_bpsk(n).unwrap();
        prop_assert!(holevo <= cl::g(n).unwrap() + 1e-12);
        prop_assert!(cl::c1_bpsk_dolinar(n).unwrap() <= holevo + 1e-12);
        prop_assert!(cl::hadamard_jdr_capacity(m, n).unwrap() <= holevo + 1e-12);
        prop_assert!(cl::rm_gm_jdr_capacity(m, n).unwrap() <= holevo + 1e-12);
        prop_assert!(cl::rm_mpe_capacity(m, n).unwrap() <= holevo + 1e-12);
    }
}

#[test]
fn blahut_arimoto_dominates_uniform_on_srm_channels() {
    for m in 1..=3 {
        for &n in &[0.01, 0.2, 1.5] {
            let ch = srm_channel(&gram_from_code(&rm1_code(m).unwrap(), n).unwrap()).unwrap();
            let uniform = mutual_information(&ch, &uniform_priors(ch.n_inputs())).unwrap();
            let cap = capacity_blahut_arimoto(&ch, 1e-12, 100_000).unwrap();
            assert!(cap.capacity >= uniform - 1e-12);
            let tv: f64 = cap.priors.iter().map(|p| (p - 1.0 / ch.n_inputs() as f64).abs()).sum::<f64>() / 2.0;
            assert!(tv < 1e-6, "m={m} n={n}: tv {tv}");
        }
    }
}
