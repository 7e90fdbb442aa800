use num_bigint::BigUint;
use proptest::prelude::*;
use schur_ample::bounds::{
    corollary_bound, decompose_degree, theorem_params, BoundVariant, LedgerOverrides,
};
use schur_ample::linalg::Matrix;
use schur_ample::partition::JumpSequence;
use schur_ample::partition::{
    binomial, br_vanishes, partitions_up_to, quotient_upper_bound, schur_dim, Partition,
};
use schur_ample::plucker::{delta_coords, minor_at, product_transition_check};
use schur_ample::poly::{Chart, Fp, HomogPoly, PrimeField, Rational, Scalar};
use schur_ample::rng::stream_rng;
use schur_ample::universal::{
    build_a, phi_eta_matrix, sample_m_i, sample_sigma, FlagFrame, Instance, ParameterPoint,
    StratumLabel, DEFAULT_BUDGET,
};
use schur_ample::verify;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=10, 1..=8).prop_filter_map("size <= 30", |mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        let p = Partition::new(v).ok()?;
        (p.size() <= 30).then_some(p)
    })
}

fn nonzero_point(seed: u64, nvars: usize) -> Vec<Rational> {
    let mut rng = stream_rng(seed, &[1]);
    (0..nvars)
        .map(|_| Scalar::random_nonzero(&(), &mut rng, 30))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugate_is_an_involution(l in partition()) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        prop_assert_eq!(l.conjugate().size(), l.size());
    }

    #[test]
    fn weight_identity(l in partition()) {
        let conj = l.conjugate();
        let sum: u64 = conj.parts().iter().map(|&p| p as u64 + 1).sum();
        prop_assert_eq!(l.ampleness_weight(), sum);
        prop_assert_eq!(l.ampleness_weight(), l.size() + l.largest() as u64);
        prop_assert_eq!(l.jump_sequence().total_minor_size(), l.ampleness_weight());
    }

    #[test]
    fn jump_sequence_round_trip(l in partition()) {
        let s = l.jump_sequence();
        prop_assert_eq!(s.first() as usize, l.len());
        prop_assert!(s.values.windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(s.partition(), l);
    }

    #[test]
    fn schur_dim_closed_forms(m in 1u32..=8, n in 1u32..=7) {
        let row = Partition::new(vec![m]).unwrap();
        prop_assert_eq!(schur_dim(&row, n), binomial((n + m - 1) as u64, m as u64));
        let col = Partition::column(m);
        prop_assert_eq!(schur_dim(&col, n), binomial(n as u64, m as u64));
    }

    #[test]
    fn gcd_normalization_leaves_bound_unchanged(m in 1u32..=4, parts in prop::collection::vec(1u32..=3, 2..=3)) {
        let mut parts = parts;
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let l = Partition::new(parts).unwrap();
        let n = l.len() as u32 + 2;
        let c = n;
        let base = corollary_bound(n, c, &l, BoundVariant::Corollary).unwrap();
        prop_assert_eq!(corollary_bound(n, c, &l.scaled(m), BoundVariant::Corollary).unwrap(), base.clone());
        let intro = corollary_bound(n, c, &l, BoundVariant::IntroVariant).unwrap();
        prop_assert!(intro < base);
    }

    #[test]
    fn transition_factor_law(seed in any::<u64>(), nvars in 2usize..=4, d in 0u32..=4) {
        let mut rng = stream_rng(seed, &[0]);
        let p = HomogPoly::<Rational>::random(&(), nvars, d, &mut rng, 30);
        let x = nonzero_point(seed, nvars);
        let from = Chart::new(seed as usize % nvars);
        let to = Chart::new((seed as usize / 7) % nvars);
        let g = Chart::transition_factor(d, from, to, &x).unwrap();
        prop_assert_eq!(
            p.eval_on_chart(from, &x).unwrap(),
            g.mul(&p.eval_on_chart(to, &x).unwrap())
        );
    }

    #[test]
    fn decompose_is_valid(d in 1u64..=10_000, extra in 0u64..=1_000_000) {
        let d0 = d * (d + 1) + extra;
        let (p, q) = decompose_degree(&BigUint::from(d), &BigUint::from(d0)).unwrap();
        prop_assert_eq!(p * (d + 1) + &q * (d + 2), BigUint::from(d0));
        prop_assert!(q <= BigUint::from(d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn leibniz_rule(seed in any::<u64>(), nvars in 2usize..=4, d1 in 0u32..=3, d2 in 0u32..=3) {
        let mut rng = stream_rng(seed, &[0]);
        let p = HomogPoly::<Rational>::random(&(), nvars, d1, &mut rng, 20);
        let q = HomogPoly::<Rational>::random(&(), nvars, d2, &mut rng, 20);
        let x = nonzero_point(seed, nvars);
        let v: Vec<Rational> = (0..nvars - 1).map(|_| Scalar::random(&(), &mut rng, 20)).collect();
        let chart = Chart::new(seed as usize % nvars);
        let pq = p.mul(&q).unwrap();
        let lhs = pq.dir_derivative(chart, &x, &v).unwrap();
        let rhs = p.eval_on_chart(chart, &x).unwrap().mul(&q.dir_derivative(chart, &x, &v).unwrap())
            .add(&q.eval_on_chart(chart, &x).unwrap().mul(&p.dir_derivative(chart, &x, &v).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }
}

fn small_instance(seed: u64) -> Instance {
    let n = 2 + (seed % 2) as u32;
    let k = 1 + ((seed / 2) % (n as u64 - 1)) as u32;
    let delta = 1 + ((seed / 4) % 2) as u32;
    let eps = 1 + ((seed / 8) % 2) as u32;
    let r = ((seed / 16) % 3) as u32;
    Instance::new(n, k, delta, eps, r).unwrap()
}

fn generic_frame(inst: &Instance, seed: u64) -> (ParameterPoint<Rational>, FlagFrame<Rational>) {
    let mut rng = stream_rng(seed, &[2]);
    let a = ParameterPoint::random(&(), inst, &mut rng, 30);
    let label = StratumLabel::new(inst.n, vec![], None).unwrap();
    let frame = sample_m_i(&(), inst, &label, &mut rng, 30).unwrap();
    (a, frame)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn rank_is_chart_independent(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let (a, frame) = generic_frame(&inst, seed);
        let to = Chart::new(1 + (seed as usize % inst.n as usize));
        let moved = frame.transport(to).unwrap();
        prop_assert_eq!(
            build_a(&inst, &a, &frame).unwrap().rank(),
            build_a(&inst, &a, &moved).unwrap().rank()
        );
    }

    #[test]
    fn minors_are_alternating(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let (a, frame) = generic_frame(&inst, seed);
        let m = build_a(&inst, &a, &frame).unwrap();
        let l = (inst.k as usize + 1).min(m.matrix().cols());
        prop_assume!(l >= 2);
        let cols: Vec<usize> = (0..l).collect();
        let mut swapped = cols.clone();
        swapped.swap(0, l - 1);
        prop_assert_eq!(minor_at(m.matrix(), &cols), minor_at(m.matrix(), &swapped).neg());
        let mut repeated = cols.clone();
        repeated[1] = repeated[0];
        prop_assert!(minor_at(m.matrix(), &repeated).is_zero());
    }

    #[test]
    fn grassmannian_coordinates_are_maximal_minors(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let (a, frame) = generic_frame(&inst, seed);
        let coords = delta_coords(&inst, &a, &frame, &JumpSequence::grassmannian(inst.k)).unwrap();
        let m = build_a(&inst, &a, &frame).unwrap();
        let mut count = 0u64;
        for c in coords.iter() {
            prop_assert_eq!(c.selectors.len(), 1);
            prop_assert_eq!(c.selectors[0].len(), inst.k as usize + 1);
            prop_assert_eq!(&c.value, &minor_at(m.matrix(), &c.selectors[0]));
            count += 1;
        }
        prop_assert_eq!(BigUint::from(count), coords.count());
        prop_assert!(!coords.witness().value.is_zero());
    }

    #[test]
    fn minor_ratios_multiply(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let (a, frame) = generic_frame(&inst, seed);
        let to = Chart::new(1 + (seed as usize % inst.n as usize));
        let ncols = inst.num_columns();
        let s1: Vec<usize> = (0..(inst.k as usize + 1).min(ncols)).collect();
        let s2: Vec<usize> = vec![ncols - 1];
        let one = product_transition_check(&inst, &a, &frame, std::slice::from_ref(&s1), to).unwrap();
        let two = product_transition_check(&inst, &a, &frame, std::slice::from_ref(&s2), to).unwrap();
        let both = product_transition_check(&inst, &a, &frame, &[s1, s2], to).unwrap();
        prop_assert!(one.holds && two.holds && both.holds);
        prop_assert_eq!(both.exponent, one.exponent + two.exponent);
        let from = |v: &str| schur_ample::poly::scalar::parse_rational(v).unwrap();
        prop_assert_eq!(
            from(&both.value_from),
            from(&one.value_from) * from(&two.value_from)
        );
    }

    #[test]
    fn maximal_minors_scale_by_det_of_frame_change(seed in any::<u64>()) {
        // v′ = G v acts on the θ rows by G, so maximal minors scale by det G
        let inst = small_instance(seed);
        let (a, frame) = generic_frame(&inst, seed);
        let k = inst.k as usize;
        let mut rng = stream_rng(seed, &[3]);
        let g: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..k).map(|_| Scalar::random(&(), &mut rng, 9)).collect())
            .collect();
        let det_g = Matrix::from_rows(g.clone()).det();
        let vs: Vec<Vec<Rational>> = (0..k)
            .map(|i| {
                (0..inst.n as usize)
                    .map(|c| {
                        (0..k).fold(<Rational as num_traits::Zero>::zero(), |acc, j| {
                            acc + &g[i][j] * &frame.vs()[j][c]
                        })
                    })
                    .collect()
            })
            .collect();
        let moved = FlagFrame::unchecked(frame.chart(), frame.x().to_vec(), vs).unwrap();
        let m = build_a(&inst, &a, &frame).unwrap();
        let m2 = build_a(&inst, &a, &moved).unwrap();
        let ncols = inst.num_columns();
        let cols: Vec<usize> = (0..(k + 1).min(ncols)).collect();
        prop_assume!(cols.len() == k + 1);
        prop_assert_eq!(
            minor_at(m2.matrix(), &cols),
            det_g.mul(&minor_at(m.matrix(), &cols))
        );
    }

    #[test]
    fn phi_eta_blocks_follow_the_case_analysis(seed in any::<u64>()) {
        let inst = small_instance(seed % 8 + 32);
        let mut rng = stream_rng(seed, &[4]);
        let i_sets = StratumLabel::all_i_sets(inst.n);
        let i_set = i_sets[seed as usize % i_sets.len()].clone();
        let primes = StratumLabel::admissible_i_primes(inst.n, inst.k, &i_set);
        let ip = primes[(seed as usize / 3) % primes.len()].clone();
        let label = StratumLabel::new(inst.n, i_set.clone(), Some(ip)).unwrap();
        let frame: FlagFrame<Rational> = sample_sigma(&(), &inst, &label, &mut rng, 30).unwrap();
        let phi = phi_eta_matrix(&inst, &frame, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(phi.off_block_nonzeros(), 0);
        for b in phi.classify_blocks(&label) {
            prop_assert_eq!(b.rank, b.predicted, "column {}", b.column);
        }
        prop_assert_eq!(phi.restriction_rank(&i_set), phi.restriction_target_dim(&i_set));
    }

    #[test]
    fn sampled_frames_respect_the_stratum(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let mut rng = stream_rng(seed, &[5]);
        for i_set in StratumLabel::all_i_sets(inst.n) {
            for ip in StratumLabel::admissible_i_primes(inst.n, inst.k, &i_set) {
                let label = StratumLabel::new(inst.n, i_set.clone(), Some(ip)).unwrap();
                let f: FlagFrame<Fp> =
                    sample_sigma(&PrimeField::default(), &inst, &label, &mut rng, 30).unwrap();
                prop_assert!(label.contains_frame(&f));
            }
        }
    }

    #[test]
    fn ledgers_validate_and_detect_tampering(n in 3u32..=7, k in 1u32..=3, extra in 0u32..=2) {
        prop_assume!(k < n);
        let c = n.div_ceil(k + 1) + extra;
        prop_assume!(c <= n);
        let l = Partition::column(k);
        let ledger = theorem_params(n, c, &l, &LedgerOverrides::default()).unwrap();
        prop_assert!(ledger.violations().is_empty());
        let json = serde_json::to_string(&ledger).unwrap();
        let back: schur_ample::bounds::BoundLedger = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &ledger);
        let mut bad = ledger.clone();
        bad.r = bad.threshold.clone();
        prop_assert!(bad.validate().is_err());
        let mut bad = ledger;
        bad.m[0] -= 1u32;
        prop_assert!(bad.validate().is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn tangent_frames_contract_to_zero(seed in any::<u64>()) {
        let report = verify::psi_in_y::<Rational>(&(), None, 3, seed, 30).unwrap();
        prop_assert!(report.passed);
    }

    #[test]
    fn suites_are_deterministic(seed in any::<u64>()) {
        let a = verify::cocycle::<Rational>(&(), None, None, 5, seed, 30).unwrap();
        let b = verify::cocycle::<Rational>(&(), None, None, 5, seed, 30).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let a = verify::minor_transition::<Fp>(&PrimeField::default(), None, 5, seed, 30).unwrap();
        let b = verify::minor_transition::<Fp>(&PrimeField::default(), None, 5, seed, 30).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn quotient_bound_holds_on_small_range() {
    for l in partitions_up_to(8) {
        for n in 1..=6 {
            if l.len() > n {
                continue;
            }
            let b = quotient_upper_bound(&l, n as u32).unwrap();
            assert!(b.ok, "λ = {l:?}, n = {n}");
        }
    }
}

#[test]
fn vanishing_is_stable_under_large_multiples() {
    for l in partitions_up_to(6) {
        let k = l.len() as u32;
        for n in 2..=8u32 {
            for c in 1..=n {
                if c * (k + 1) >= n {
                    continue;
                }
                let base = br_vanishes(n, c, &l.scaled(c)).unwrap();
                for m in c..=c + 3 {
                    assert_eq!(br_vanishes(n, c, &l.scaled(m)).unwrap(), base);
                }
            }
        }
    }
}
