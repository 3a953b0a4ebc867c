use ergolab::graphop::path_profile_sweep;
use ergolab::{
    apply, count_paths_to, enumerate_paths, make_counterexample, make_g0, make_gk, orbit_predicate, power_apply,
    power_norm_truncated, verify_c0_conditions, C0Graph, LadderFamilyGraph, LadderKind, LadderVertex, Rational,
    SparseVector,
};

fn source_of(g: &LadderFamilyGraph) -> LadderVertex {
    g.entry_vertex()
}

#[test]
fn g0_source_to_sink_lengths() {
    let g = make_g0();
    let (o, v) = (LadderVertex::Entry(0), LadderVertex::Sink(0));
    let mut cur = SparseVector::unit(o);
    let mut lengths = Vec::new();
    for n in 1..=127u32 {
        cur = apply(&g, &cur);
        let hit = cur.value(&v);
        if !hit.is_zero() {
            assert_eq!(hit, Rational::ONE, "n = {n}");
            lengths.push(n);
        }
    }
    assert_eq!(lengths, vec![3, 7, 15, 31, 63, 127]);
    for &n in &lengths[..4] {
        let paths = enumerate_paths(&g, &o, &v, n as usize);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].weight, Rational::ONE);
    }
}

#[test]
fn path_counts_are_at_most_two() {
    let g = make_counterexample();
    let two = Rational::from(2u32);
    path_profile_sweep(&g, 24, 600, |n, profile| {
        for (v, pc) in profile {
            assert!(pc.count <= 2u32.into(), "{v} at n = {n}");
            assert!(pc.max_weight <= two, "{v} at n = {n}");
        }
    });
}

#[test]
fn both_length_four_paths_into_the_first_sink() {
    let g = make_counterexample();
    let pc = count_paths_to(&g, &LadderVertex::Sink(0), 4, 2000);
    assert_eq!(pc.count, 2u32.into());
    assert_eq!(pc.max_weight, Rational::from(2u32));
    let from_source = enumerate_paths(&g, &LadderVertex::Source, &LadderVertex::Sink(0), 4);
    assert_eq!(from_source.len(), 1);
    assert_eq!(from_source[0].weight, Rational::ONE);
    let from_bottom = enumerate_paths(&g, &LadderVertex::bottom(0, 4).unwrap(), &LadderVertex::Sink(0), 4);
    assert_eq!(from_bottom.len(), 1);
    assert_eq!(from_bottom[0].weight, Rational::from(2u32));

    let empty = count_paths_to(&g, &LadderVertex::Sink(0), 0, 10);
    assert_eq!(empty.count, 1u32.into());
    assert_eq!(empty.max_weight, Rational::ONE);
}

#[test]
fn column_sums_and_first_norm() {
    let g = make_counterexample();
    let report = verify_c0_conditions(&g, 2000, &Rational::from(2u32));
    assert!(report.passed());
    assert_eq!(report.max_column_sum, Rational::from(2u32));
    assert!(verify_c0_conditions(&make_g0(), 100, &Rational::from(2u32)).passed());
    assert_eq!(power_norm_truncated(&g, 1, 2000), Rational::from(2u32));
    let four = Rational::from(4u32);
    for n in 1..=12 {
        assert!(power_norm_truncated(&g, n, 400) <= four);
    }
}

#[test]
fn orbit_matches_predicate_on_every_copy() {
    let graphs = [make_g0(), make_gk(1), make_gk(2), make_gk(4), make_counterexample()];
    for g in &graphs {
        let ks: Vec<u32> = match g.kind() {
            LadderKind::Combined => (0..=4).collect(),
            kind => vec![kind.copy().unwrap()],
        };
        let mut cur = SparseVector::unit(source_of(g));
        for n in 0..=300u64 {
            for &k in &ks {
                let sim = cur.value(&LadderVertex::Sink(k));
                let want = Rational::from(orbit_predicate(g.kind(), k, n) as u32);
                assert_eq!(sim, want, "{} k = {k} n = {n}", g.kind());
            }
            cur = apply(g, &cur);
        }
    }
}

#[test]
fn path_weights_equal_matrix_entries() {
    for g in [make_g0(), make_counterexample()] {
        let window = g.truncation(60);
        for u in &window {
            let e = SparseVector::unit(*u);
            for n in 0..=6u64 {
                let row = power_apply(&g, &e, n);
                for v in &window {
                    let total = enumerate_paths(&g, u, v, n as usize)
                        .iter()
                        .fold(Rational::ZERO, |acc, p| acc + p.weight.clone());
                    assert_eq!(total, row.value(v), "{u} -> {v}, n = {n}");
                }
            }
        }
    }
}
