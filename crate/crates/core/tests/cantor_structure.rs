use cfml_core::cantor::{audit, enumerate_level, mass_of, required_limit, validate_params, CantorParams, Validated, WeightTable};
use cfml_core::primes::sieve;
use cfml_core::{Error, Float};
use proptest::prelude::*;
use std::sync::OnceLock;

fn toy() -> CantorParams {
    serde_json::from_str(r#"{"Btilde":2,"M":2,"N":2,"s":0.6,"delta":0.05,"ell":[4],"i_seq":[1]}"#).unwrap()
}

fn validated() -> &'static Validated {
    static V: OnceLock<Validated> = OnceLock::new();
    V.get_or_init(|| {
        let p = toy();
        let table = sieve(required_limit(&p, 12).unwrap()).unwrap();
        validate_params(&p, 12, &table, 96).unwrap()
    })
}

#[test]
fn children_nest_in_parents() {
    let v = validated();
    for level in 1..12 {
        let parents = enumerate_level(v, level, 0).unwrap();
        let children = enumerate_level(v, level + 1, 0).unwrap();
        let per = children.len() / parents.len();
        for (i, c) in children.iter().enumerate() {
            let p = &parents[i / per];
            assert_eq!(&c.digits[..level as usize], &p.digits[..]);
            assert!(c.lo >= p.lo && c.hi <= p.hi, "level {level}");
        }
    }
}

#[test]
fn prime_block_multiplies_by_squared_count() {
    let v = validated();
    let count = v.prime_blocks[0].count as usize;
    // 2048 <= p <= 4096
    let table = sieve(4096).unwrap();
    assert_eq!(count as u64, table.count_between(2048, 4096).unwrap());
    let before = enumerate_level(v, 11, 0).unwrap().len();
    let after = enumerate_level(v, 12, 0).unwrap().len();
    assert_eq!(after, before * count);
}

#[test]
fn audit_is_deterministic() {
    let v = validated();
    let a = serde_json::to_string(&audit(v, 9).unwrap()).unwrap();
    let b = serde_json::to_string(&audit(v, 9).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn strict_mode_rejects_toy() {
    let mut p = toy();
    p.audit_mode = false;
    let table = sieve(required_limit(&p, 12).unwrap()).unwrap();
    assert!(matches!(validate_params(&p, 12, &table, 96), Err(Error::Params(_))));
}

#[test]
fn audit_mode_lists_failed_hypotheses() {
    let v = validated();
    let names: Vec<&str> = v.warnings.iter().map(|w| w.split(" fails").next().unwrap()).collect();
    assert!(names.contains(&"u > 1"));
    assert!(names.contains(&"N > max(e^20, 2/delta + 1)"));
    assert!(v.prime_blocks[0].density_constant < 2.0);
}

#[test]
fn out_of_range_params_fail_even_in_audit_mode() {
    let table = sieve(5000).unwrap();
    for bad in [
        r#"{"Btilde":1,"M":2,"N":2,"s":0.6,"delta":0.05}"#,
        r#"{"Btilde":2,"M":2,"N":2,"s":0.4,"delta":0.05}"#,
        r#"{"Btilde":2,"M":0,"N":2,"s":0.6,"delta":0.05}"#,
    ] {
        let p: CantorParams = serde_json::from_str(bad).unwrap();
        assert!(matches!(validate_params(&p, 4, &table, 96), Err(Error::Params(_))), "{bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mass_from_scratch_matches_enumeration(idx in any::<prop::sample::Index>()) {
        let v = validated();
        static NODES: OnceLock<Vec<cfml_core::cantor::MassNode>> = OnceLock::new();
        let nodes = NODES.get_or_init(|| enumerate_level(validated(), 12, 0).unwrap());
        let node = &nodes[idx.index(nodes.len())];
        let w = WeightTable::new(v).unwrap();
        let m = mass_of(v, &w, &node.digits).unwrap();
        let diff = Float::with_val(96, &m - &node.mass).abs().to_f64();
        prop_assert!(diff <= 1e-25);
    }
}
