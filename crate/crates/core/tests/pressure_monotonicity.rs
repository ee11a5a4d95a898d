use cfml_core::pressure::{cylinder_sum, dimension, solve_sn, PhiSpec, SnQuery, SolverBudget};

const BS: [f64; 5] = [1.1, 2.0, 4.0, 16.0, 256.0];

#[test]
fn sum_decreases_in_s_and_b() {
    for n in 1..=3 {
        for m in [2u64, 3, 4] {
            for b in [1.1, 2.0, 16.0] {
                let q = SnQuery::new(n, m, b);
                let mut prev = f64::INFINITY;
                for i in 0..=10 {
                    let s = 1.0 / 3.0 + 0.01 + i as f64 * 0.16;
                    let v = cylinder_sum(&q, s, 96).unwrap().to_f64();
                    assert!(v < prev, "n={n} M={m} B={b} s={s}");
                    prev = v;
                }
            }
            for s in [0.4, 0.7, 1.5] {
                let mut prev = f64::INFINITY;
                for b in BS {
                    let v = cylinder_sum(&SnQuery::new(n, m, b), s, 96).unwrap().to_f64();
                    assert!(v < prev);
                    prev = v;
                }
            }
        }
    }
}

#[test]
fn root_antitone_in_b_monotone_in_m() {
    for n in 1..=3u32 {
        let mut grid = vec![];
        for m in 1..=8u64 {
            let row: Vec<f64> = BS.iter().map(|&b| solve_sn(&SnQuery::new(n, m, b)).unwrap()).collect();
            for pair in row.windows(2) {
                assert!(pair[1] <= pair[0], "n={n} M={m}");
            }
            grid.push(row);
        }
        for pair in grid.windows(2) {
            for (lo, hi) in pair[0].iter().zip(&pair[1]) {
                assert!(hi >= lo, "n={n}");
            }
        }
    }
}

#[test]
fn successive_gaps_shrink() {
    let s: Vec<f64> = (1..=4).map(|n| solve_sn(&SnQuery::new(n, 3, 2.0)).unwrap()).collect();
    let gaps: Vec<f64> = s.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "{s:?}");
}

#[test]
fn dimension_ignores_constant_factor() {
    let budget = SolverBudget::default();
    for (a, b) in [
        (PhiSpec::power(1.0, 2.0), PhiSpec::power(50.0, 2.0)),
        (PhiSpec::geometric(1.0, 3.0), PhiSpec::geometric(7.0, 3.0)),
    ] {
        let x = dimension(&a, budget, (100, 200)).unwrap();
        let y = dimension(&b, budget, (100, 200)).unwrap();
        assert_eq!(x.exponents.log_growth.to_bits(), y.exponents.log_growth.to_bits());
        assert_eq!(x.exponents.log_log_growth.to_bits(), y.exponents.log_log_growth.to_bits());
        assert_eq!(x.dim, y.dim);
    }
}
