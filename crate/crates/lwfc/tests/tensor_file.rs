use lwfc::{load_tensor, read_tensor, save_tensor, write_tensor};
use lwfc_core::FeatureTensor;
use proptest::prelude::*;

fn any_tensor() -> impl Strategy<Value = FeatureTensor> {
    prop::collection::vec(1u32..8, 1..5).prop_flat_map(|dims| {
        let n: u32 = dims.iter().product();
        // raw bit patterns cover NaN payloads, infinities and subnormals
        prop::collection::vec(any::<u32>().prop_map(f32::from_bits), n as usize)
            .prop_map(move |data| FeatureTensor::new(dims.clone(), data).unwrap())
    })
}

fn bits(t: &FeatureTensor) -> Vec<u32> {
    t.data().iter().map(|v| v.to_bits()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn round_trip_is_bit_exact(t in any_tensor()) {
        let bytes = write_tensor(&t);
        let back = read_tensor(&bytes).unwrap();
        prop_assert_eq!(back.dims(), t.dims());
        prop_assert_eq!(bits(&back), bits(&t));
        prop_assert_eq!(write_tensor(&back), bytes);
    }

    #[test]
    fn every_strict_prefix_is_rejected(t in any_tensor(), cut in 1usize..64) {
        let bytes = write_tensor(&t);
        let keep = bytes.len().saturating_sub(cut);
        prop_assert!(read_tensor(&bytes[..keep]).is_err());
    }
}

#[test]
fn files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.lwft");
    let t = FeatureTensor::new(vec![2, 3], vec![0.5, -1.0, f32::INFINITY, 3.25, 0.0, -0.0]).unwrap();
    save_tensor(&path, &t).unwrap();
    let back = load_tensor(&path).unwrap();
    assert_eq!(bits(&back), bits(&t));
    let missing = load_tensor(&dir.path().join("nope.lwft")).unwrap_err();
    assert!(missing.to_string().contains("nope.lwft"));
}
