//! Quick containment fuzz; the acceptance suite runs the full-size version.

use rint::fuzz::containment_fuzz;

#[test]
fn containment_fuzz_small() {
    let out = containment_fuzz(3000, 0x5eed_1234, 128);
    assert_eq!(out.disjoint_oracle, 0, "oracle escaped the enclosure");
    assert_eq!(out.monotonicity_violations, 0, "precision widened a result");
}
