use aeswsn_core::hopnet::{sweep, total_delay, Interpretation};
use aeswsn_core::mcu::{self, CalibrationTable, McuClockConfig, Operation};
use aeswsn_core::{
    expand_key, relay_message, AesState, Block, CbcContext, CipherKey, DelayParams, Direction,
    HopChain, Message, PaddingPolicy, SBoxTables,
};
use proptest::prelude::*;

fn key_of(len: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(any::<u8>(), len)
}

fn state() -> impl Strategy<Value = AesState> {
    any::<[u8; 16]>().prop_map(AesState::from_block)
}

fn block_multiple(max_blocks: usize) -> impl Strategy<Value = Vec<u8>> {
    (1..=max_blocks).prop_flat_map(|n| proptest::collection::vec(any::<u8>(), n * 16))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn block_round_trip_128(key in key_of(16), p in any::<[u8; 16]>()) {
        let ks = expand_key(&CipherKey::new(&key).unwrap());
        prop_assert_eq!(ks.decrypt_block(&ks.encrypt_block(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn block_round_trip_192(key in key_of(24), p in any::<[u8; 16]>()) {
        let ks = expand_key(&CipherKey::new(&key).unwrap());
        prop_assert_eq!(ks.decrypt_block(&ks.encrypt_block(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn block_round_trip_256(key in key_of(32), p in any::<[u8; 16]>()) {
        let ks = expand_key(&CipherKey::new(&key).unwrap());
        prop_assert_eq!(ks.decrypt_block(&ks.encrypt_block(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn cbc_round_trip(
        key_len in prop::sample::select(vec![16usize, 24, 32]),
        seed in any::<[u8; 32]>(),
        iv in any::<[u8; 16]>(),
        msg in block_multiple(32),
    ) {
        let key = CipherKey::new(&seed[..key_len]).unwrap();
        let ctx = CbcContext::from_key(&key, iv);
        let ct = ctx.encrypt(&Message::new(msg.clone())).unwrap();
        prop_assert_eq!(ct.len(), msg.len());
        prop_assert_eq!(ctx.decrypt(&ct, PaddingPolicy::NoneRequired).unwrap().octets, msg);
    }

    #[test]
    fn sub_bytes_and_shift_rows_commute(s in state()) {
        prop_assert_eq!(
            s.shift_rows(Direction::Forward).sub_bytes(Direction::Forward),
            s.sub_bytes(Direction::Forward).shift_rows(Direction::Forward)
        );
    }

    #[test]
    fn mix_columns_is_linear(a in state(), b in state()) {
        prop_assert_eq!(
            (a ^ b).mix_columns(Direction::Forward),
            a.mix_columns(Direction::Forward) ^ b.mix_columns(Direction::Forward)
        );
    }

    #[test]
    fn round_transformations_invert(s in state()) {
        for d in [Direction::Forward, Direction::Inverse] {
            let other = if d == Direction::Forward { Direction::Inverse } else { Direction::Forward };
            prop_assert_eq!(s.sub_bytes(d).sub_bytes(other), s);
            prop_assert_eq!(s.shift_rows(d).shift_rows(other), s);
            prop_assert_eq!(s.mix_columns(d).mix_columns(other), s);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pkcs7_round_trip(msg in proptest::collection::vec(any::<u8>(), 0..200), iv in any::<[u8; 16]>()) {
        let ctx = CbcContext::from_key(&CipherKey::new(&[9; 16]).unwrap(), iv);
        let m = Message::with_padding(msg, PaddingPolicy::Pkcs7);
        let ct = ctx.encrypt(&m).unwrap();
        prop_assert_eq!(ct.len() % 16, 0);
        prop_assert_eq!(ctx.decrypt(&ct, PaddingPolicy::Pkcs7).unwrap(), m);
    }

    #[test]
    fn cbc_bit_flip_propagation(
        msg in (2usize..=16).prop_flat_map(|n| proptest::collection::vec(any::<u8>(), n * 16)),
        pick in any::<prop::sample::Index>(),
        bit in 0u8..8,
    ) {
        let ctx = CbcContext::from_key(&CipherKey::new(&[3; 16]).unwrap(), [5; 16]);
        let mut ct = ctx.encrypt(&Message::new(msg.clone())).unwrap();
        let blocks = msg.len() / 16;
        // Flip within any block but the last, so block i+1 exists.
        let target = pick.index(blocks - 1);
        let pos = target * 16 + pick.index(16);
        ct[pos] ^= 1 << bit;
        let out = ctx.decrypt(&ct, PaddingPolicy::NoneRequired).unwrap().octets;
        for b in 0..blocks {
            let got = &out[b * 16..(b + 1) * 16];
            let want = &msg[b * 16..(b + 1) * 16];
            if b == target {
                prop_assert_ne!(got, want);
            } else if b == target + 1 {
                let diff: Vec<u8> = got.iter().zip(want).map(|(x, y)| x ^ y).collect();
                let mut expected = [0u8; 16];
                expected[pos % 16] = 1 << bit;
                prop_assert_eq!(diff, expected.to_vec());
            } else {
                prop_assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn doubling_law(k in 1usize..512) {
        let t = CalibrationTable::atmega644p();
        for op in Operation::BOTH {
            let a = t.predict_linear(16 * k, op).unwrap();
            let b = t.predict_linear(32 * k, op).unwrap();
            prop_assert_eq!(b.time_ms / a.time_ms, 2.0);
            prop_assert_eq!(b.cycles / a.cycles, 2.0);
        }
    }

    #[test]
    fn delay_linearity_and_summation(
        t_enc in 0.0f64..1000.0, t_dec in 0.0f64..1000.0, t_tx in 0.0f64..100.0, n in 1u64..100_000,
    ) {
        let p = DelayParams::new(t_enc, t_dec, t_tx, 0.0).unwrap();
        let one = total_delay(&p, 1, Interpretation::Linear).unwrap();
        let lin = total_delay(&p, n, Interpretation::Linear).unwrap();
        let sum = total_delay(&p, n, Interpretation::Summation).unwrap();
        let tol = 1e-9 * lin.max(1.0);
        prop_assert!((lin - n as f64 * one).abs() <= tol);
        prop_assert!((sum - (n as f64 + 1.0) / 2.0 * lin).abs() <= 1e-9 * sum.max(1.0));
    }

    #[test]
    fn sweep_is_monotone(n_max in 1u64..300, dt in 0.0f64..100.0) {
        let p = DelayParams::new(449.0, 456.0, 10.0, dt).unwrap();
        for interp in [Interpretation::Linear, Interpretation::Summation] {
            let rows = sweep(&p, n_max, interp);
            prop_assert_eq!(rows.len() as u64, n_max);
            prop_assert!(rows.windows(2).all(|w| w[1].total_delay_ms > w[0].total_delay_ms));
        }
    }

    #[test]
    fn ocr_round_trip(p in prop::sample::select(mcu::ALLOWED_PRESCALERS.to_vec()), v in any::<u8>(), mhz in 1u64..=20) {
        let cfg = McuClockConfig::new(mhz * 1_000_000, p).unwrap();
        let interval = (v as f64 + 1.0) * mcu::prescaled_period(&cfg);
        prop_assert_eq!(mcu::ocr_for_interval(&cfg, interval).unwrap(), v);
        prop_assert_eq!(mcu::prescaled_period(&cfg) / mcu::clock_period(&cfg), p as f64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relay_integrity_and_accounting(hops in 1usize..=50, seed in any::<u64>(), blocks in 1usize..=16) {
        let chain = HopChain::generate(hops, seed).unwrap();
        let payload = aeswsn_core::hopnet::seeded_payload(blocks * 16, seed);
        let params = DelayParams::default();
        let r = relay_message(&chain, &Message::new(payload), &params).unwrap();
        prop_assert!(r.plaintext_intact);
        prop_assert_eq!(r.total_linear_ms, total_delay(&params, hops as u64, Interpretation::Linear).unwrap());
        prop_assert_eq!(r.total_summation_ms, total_delay(&params, hops as u64, Interpretation::Summation).unwrap());
    }
}

#[test]
fn sbox_is_a_permutation() {
    let t = SBoxTables::get();
    let mut sorted = t.forward;
    sorted.sort_unstable();
    let identity: [u8; 256] = std::array::from_fn(|i| i as u8);
    assert_eq!(sorted, identity);
    for x in 0..=255u8 {
        assert_eq!(t.inverse[t.forward[x as usize] as usize], x);
    }
}

#[test]
fn distinct_plaintexts_give_distinct_ciphertexts() {
    let ks = expand_key(&CipherKey::new(&[1; 16]).unwrap());
    let a: Block = [0; 16];
    let mut b = a;
    b[15] = 1;
    assert_ne!(ks.encrypt_block(&a).unwrap(), ks.encrypt_block(&b).unwrap());
}
