use irls_core::theory::{
    merge_polynomial, merge_threshold, published_separation_polynomial, separation_polynomial, theorem1_check,
    theorem2_check, TheoremParams,
};
use proptest::prelude::*;

/// Both comparisons evaluated from the modularity definitions.
fn direct(p: &TheoremParams) -> (f64, f64) {
    let (n, n1, a, b, e, t) = (p.node_count, p.community_size, p.inner_edges, p.outer_edges, p.total_edges, p.retained);
    let cross = t * n1 / (n - n1) * b;
    let q = |inner: f64, outer: f64| inner / e - ((2.0 * inner + outer) / (2.0 * e)).powi(2);
    let q1 = q(a, b);
    let q2 = q(t * t * a, t * b);
    let q12 = q((t * t + 1.0) * a + cross, (t + 1.0) * b - 2.0 * cross);
    (q12 - q1 - q2, q1 / n1 - q12 / ((t + 1.0) * n1))
}

fn params() -> impl Strategy<Value = TheoremParams> {
    (100.0f64..5000.0, 0.01f64..0.3, 1.0f64..2000.0, 0.0f64..2000.0, 1.0f64..20.0, 0.01f64..=1.0).prop_map(
        |(n, frac, a, b, spread, t)| TheoremParams {
            node_count: n,
            community_size: (n * frac).max(1.0),
            inner_edges: a,
            outer_edges: b,
            total_edges: (a + b) * spread,
            retained: t,
            hidden_share: 0.3,
            dominant_density: 0.4,
            hidden_density: 0.1,
        },
    )
}

fn scale(p: &TheoremParams, k: f64) -> TheoremParams {
    TheoremParams {
        inner_edges: p.inner_edges * k,
        outer_edges: p.outer_edges * k,
        total_edges: p.total_edges * k,
        ..*p
    }
}

proptest! {
    #[test]
    fn polynomials_match_direct_comparison(p in params()) {
        let (merge_gap, separation_gap) = direct(&p);
        let e = p.total_edges;
        let merge = merge_polynomial(&p);
        let scaled = -e * e * merge_gap / p.retained;
        prop_assert!((merge - scaled).abs() <= 1e-7 * merge.abs().max(e * e * 1e-3));
        let sep = separation_polynomial(&p);
        prop_assume!(separation_gap.abs() > 1e-9 / p.community_size);
        prop_assert_eq!(sep > 0.0, separation_gap > 0.0);
        let c = theorem1_check(&p).unwrap();
        prop_assert_eq!(c.merged_by_partition, merge < 0.0);
        prop_assert_eq!(c.separated_by_local, sep > 0.0);
    }

    #[test]
    fn conditions_are_scale_free(p in params(), k in 0.1f64..10.0) {
        let q = scale(&p, k);
        let (m, mq) = (merge_polynomial(&p), merge_polynomial(&q));
        prop_assume!(m.abs() > 1e-6 * (p.total_edges * p.total_edges));
        prop_assert!((mq - k * k * m).abs() <= 1e-7 * mq.abs().max(1.0));
        let (s, sq) = (separation_polynomial(&p), separation_polynomial(&q));
        prop_assert!((sq - k * k * s).abs() <= 1e-7 * sq.abs().max(1.0));
    }

    #[test]
    fn merge_root_splits_line(p in params()) {
        if let Some(root) = merge_threshold(&p) {
            let at = TheoremParams { retained: root.clamp(1e-6, 1.0), ..p };
            if (0.0..=1.0).contains(&root) && root > 1e-6 {
                prop_assert!(merge_polynomial(&at).abs() <= 1e-7 * (p.total_edges * p.total_edges));
            }
        }
    }

    #[test]
    fn weakening_gains(
        t in 0.05f64..=1.0,
        r in 0.05f64..0.95,
        p2 in 0.01f64..0.3,
        lift in 0.0f64..0.5,
    ) {
        let p = TheoremParams {
            node_count: 2000.0,
            community_size: 40.0,
            inner_edges: 300.0,
            outer_edges: 300.0,
            total_edges: 50_000.0,
            retained: t,
            hidden_share: r,
            dominant_density: p2 + lift,
            hidden_density: p2,
        };
        let out = theorem2_check(&p).unwrap();
        let reduced = lift * (t * t + 1.0) * 1600.0;
        prop_assert!((out.separate.internal + out.separate.external - reduced).abs() <= 1e-9 * (1.0 + reduced));
        prop_assert!((out.merged.internal + out.merged.external - reduced).abs() <= 1e-9 * (1.0 + reduced));
        prop_assert!(out.merged.internal >= out.separate.internal - 1e-9);
        prop_assert!(out.delta_q_separate.abs() <= 1e-12);
        let e = p.total_edges;
        let gain = (r * e - out.merged.internal) / (e - reduced) - r;
        prop_assert!((out.delta_q_merged - gain).abs() <= 1e-12);
        if lift > 0.0 {
            prop_assert!(out.delta_q_merged < 0.0);
        }
    }
}

#[test]
fn published_cubic_differs_from_derived() {
    let p = TheoremParams {
        node_count: 800.0,
        community_size: 100.0,
        inner_edges: 990.0,
        outer_edges: 4200.0,
        total_edges: 40_000.0,
        retained: 0.2,
        hidden_share: 0.0,
        dominant_density: 0.0,
        hidden_density: 0.0,
    };
    let derived = separation_polynomial(&p);
    let published = published_separation_polynomial(&p);
    assert!((derived - published).abs() > 1e3, "{derived} vs {published}");
    assert!(derived > 0.0);
}
