use robustge::Estimator;
use robustge_bench::{contaminated_fixture, fixture};

#[test]
fn benchmark_inputs_are_deterministic_and_fittable() {
    assert_eq!(fixture(100), fixture(100));
    let s = contaminated_fixture(1000);
    let f = Estimator::Mdpde(0.5).fit(&s).unwrap();
    assert!(f.converged());
}
