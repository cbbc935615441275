//! Shared fixtures for the benchmarks.

use robustge::{ge_sample, GeParams, Sample};

/// Seeded GE(1, 1.5) sample of size `n`.
pub fn fixture(n: usize) -> Sample {
    let truth = GeParams::new(1.0, 1.5).expect("valid parameters");
    ge_sample(n, &truth, 20_240).expect("valid size")
}

/// Same sample with the last tenth replaced by the 0.999 quantile.
pub fn contaminated_fixture(n: usize) -> Sample {
    let truth = GeParams::new(1.0, 1.5).expect("valid parameters");
    let mut values = fixture(n).values().to_vec();
    let k = n / 10;
    let outlier = truth.quantile(0.999);
    for v in values.iter_mut().rev().take(k) {
        *v = outlier;
    }
    Sample::new(values).expect("positive values")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_requested_size_and_contamination() {
        assert_eq!(fixture(50).len(), 50);
        let c = contaminated_fixture(50);
        let q = GeParams::new(1.0, 1.5).unwrap().quantile(0.999);
        assert_eq!(c.values().iter().filter(|&&v| v == q).count(), 5);
    }
}
