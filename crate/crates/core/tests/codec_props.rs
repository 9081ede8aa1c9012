use lwfc_core::codec::bitstream::{pack_bitstream, parse_bitstream, BitstreamHeader};
use lwfc_core::codec::{decode_indices, encode_indices};
use lwfc_core::pipeline::{decode_tensor, encode_tensor, quantize_reconstruct, rate_report};
use lwfc_core::{ClipRange, CodecConfig, DesignedQuantizer, FeatureTensor};
use proptest::prelude::*;

fn levels_and_indices() -> impl Strategy<Value = (usize, Vec<u8>)> {
    (2usize..=255).prop_flat_map(|n| (Just(n), prop::collection::vec(0..n as u8, 0..400)))
}

fn skewed_indices() -> impl Strategy<Value = (usize, Vec<u8>)> {
    // long runs of one symbol stress carry handling
    (2usize..=12).prop_flat_map(|n| {
        let run = (0..n as u8, 1usize..3000).prop_map(|(s, len)| vec![s; len]);
        (Just(n), prop::collection::vec(run, 1..4).prop_map(|r| r.concat()))
    })
}

fn config() -> impl Strategy<Value = CodecConfig> {
    let uniform = (-3.0f64..1.0, 0.01f64..20.0, 2usize..=64)
        .prop_map(|(lo, w, n)| CodecConfig::uniform(ClipRange::new(lo, lo + w).unwrap(), n).unwrap());
    let designed = (-1.0f64..1.0, prop::collection::vec(0.05f64..3.0, 1..12)).prop_map(|(lo, gaps)| {
        let mut recon = vec![lo];
        for g in gaps {
            recon.push(recon.last().unwrap() + g);
        }
        let range = ClipRange::new(lo, *recon.last().unwrap()).unwrap();
        CodecConfig::designed(&DesignedQuantizer::from_levels(recon, range).unwrap()).unwrap()
    });
    prop_oneof![uniform, designed]
}

fn tensor() -> impl Strategy<Value = FeatureTensor> {
    prop::collection::vec(1u32..6, 1..4).prop_flat_map(|dims| {
        let n: u32 = dims.iter().product();
        prop::collection::vec(-10.0f32..25.0, n as usize)
            .prop_map(move |data| FeatureTensor::new(dims.clone(), data).unwrap())
    })
}

proptest! {
    #[test]
    fn indices_round_trip((n, idx) in levels_and_indices()) {
        let bytes = encode_indices(&idx, n).unwrap();
        prop_assert_eq!(decode_indices(&bytes, idx.len(), n).unwrap(), idx);
    }

    #[test]
    fn runs_round_trip((n, idx) in skewed_indices()) {
        let bytes = encode_indices(&idx, n).unwrap();
        prop_assert_eq!(decode_indices(&bytes, idx.len(), n).unwrap(), idx);
    }

    #[test]
    fn truncated_payload_is_an_error((n, idx) in levels_and_indices(), cut in 1usize..8) {
        let bytes = encode_indices(&idx, n).unwrap();
        let keep = bytes.len().saturating_sub(cut);
        prop_assert!(decode_indices(&bytes[..keep], idx.len(), n).is_err());
    }

    #[test]
    fn header_round_trip(
        dims in prop::collection::vec(1u32..2000, 1..5),
        lo in -100.0f32..100.0,
        w in 0.001f32..100.0,
        n in 2u8..=255,
        payload in prop::collection::vec(any::<u8>(), 0..64),
    ) {
        let h = BitstreamHeader::uniform(n, dims, lo, lo + w).unwrap();
        let bytes = pack_bitstream(&h, &payload);
        prop_assert_eq!(bytes.len(), h.encoded_len() + payload.len());
        let (back, p) = parse_bitstream(&bytes).unwrap();
        prop_assert_eq!(back, h);
        prop_assert_eq!(p, &payload[..]);
    }

    #[test]
    fn pipeline_is_lossless_past_quantization(cfg in config(), t in tensor()) {
        let bytes = encode_tensor(&t, &cfg).unwrap();
        let y = decode_tensor(&bytes).unwrap();
        prop_assert_eq!(&y, &quantize_reconstruct(&t, &cfg).unwrap());
        prop_assert_eq!(encode_tensor(&t, &cfg).unwrap(), bytes.clone());
        let r = cfg.range();
        for v in y.data() {
            prop_assert!(cfg.levels().contains(v));
            prop_assert!(*v as f64 >= r.c_min() && *v as f64 <= r.c_max());
        }
        let report = rate_report(&bytes).unwrap();
        prop_assert_eq!(report.element_count, t.len());
        prop_assert_eq!(report.total_bytes, bytes.len());
    }

    #[test]
    fn garbage_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = decode_tensor(&bytes);
        let mut framed = b"LWFC\x01\x00\x04\x01\x10\x00\x00\x00".to_vec();
        framed.extend_from_slice(&0.0f32.to_le_bytes());
        framed.extend_from_slice(&1.0f32.to_le_bytes());
        framed.extend_from_slice(&bytes);
        let _ = decode_tensor(&framed);
    }
}
