//! Closed-form checks for the broken-community scenario.
//!
//! A local community `C1` and a neighbouring community `C2`, of which only a
//! fraction `t` survived sampling, sit in a subgraph with `e` edges. The
//! partition-level modularity prefers merging them when
//! `Q'(C1 ∪ C2) > Q'(C1) + Q'(C2)`, while the local detector keeps `C1` alone
//! when `Q(C1) > Q(C1 ∪ C2)`. With the cross edges expressed through the
//! outgoing edges of `C1` both comparisons reduce to polynomials in `t`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremParams {
    /// Nodes in the subgraph (`n`).
    pub node_count: f64,
    /// Nodes of the intact local community (`n_1`).
    pub community_size: f64,
    /// Edges inside the local community (`e_1in`).
    pub inner_edges: f64,
    /// Edges with exactly one endpoint in the local community (`e_1out`).
    pub outer_edges: f64,
    /// Edges in the whole subgraph (`e`).
    pub total_edges: f64,
    /// Retained fraction of the broken community (`t`).
    pub retained: f64,
    /// Share of edges inside dominant communities generated by the hidden layer (`r`).
    pub hidden_share: f64,
    /// Block density of the dominant layer (`p_1`).
    pub dominant_density: f64,
    /// Block density of the hidden layer (`p_2`).
    pub hidden_density: f64,
}

impl TheoremParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.node_count,
            self.community_size,
            self.inner_edges,
            self.outer_edges,
            self.total_edges,
            self.retained,
            self.hidden_share,
            self.dominant_density,
            self.hidden_density,
        ];
        if all.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParameter("theorem parameters must be finite and non-negative"));
        }
        if self.community_size >= self.node_count {
            return Err(Error::InvalidParameter("community must be smaller than the subgraph"));
        }
        if self.total_edges < self.inner_edges {
            return Err(Error::InvalidParameter("total edges below community edges"));
        }
        if !(self.retained > 0.0 && self.retained <= 1.0) {
            return Err(Error::InvalidParameter("retained fraction must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Edges between the two communities: `t·n_1/(n−n_1)·e_1out`.
    pub fn cross_edges(&self) -> f64 {
        self.retained * self.community_size / (self.node_count - self.community_size) * self.outer_edges
    }

    fn bridge_term(&self) -> f64 {
        self.community_size * self.total_edges * self.outer_edges / (self.node_count - self.community_size)
    }
}

/// Left side of the merge condition, negative when the partition merges the
/// two communities:
/// `(2e_in² + e_in·e_out)·t + (e_in·e_out + e_out²/2 − n_1·e·e_out/(n−n_1))`.
pub fn merge_polynomial(p: &TheoremParams) -> f64 {
    let (a, b) = (p.inner_edges, p.outer_edges);
    (2.0 * a * a + a * b) * p.retained + (a * b + 0.5 * b * b - p.bridge_term())
}

/// Value of `t` at which the merge polynomial changes sign, if it is not constant.
pub fn merge_threshold(p: &TheoremParams) -> Option<f64> {
    let (a, b) = (p.inner_edges, p.outer_edges);
    let slope = 2.0 * a * a + a * b;
    (slope != 0.0).then(|| -(a * b + 0.5 * b * b - p.bridge_term()) / slope)
}

/// Cubic in `t`, positive when the local modularity keeps the local
/// community apart from the broken one:
/// `e_in²t³ + e_in·e_out·t² + (2e_in² + e_in·e_out + e_out²/4 − e·e_in)·t
///  + (e_out²/4 − e_in² + e·e_in − n_1·e·e_out/(n−n_1))`.
pub fn separation_polynomial(p: &TheoremParams) -> f64 {
    let (a, b, e, t) = (p.inner_edges, p.outer_edges, p.total_edges, p.retained);
    a * a * t * t * t
        + a * b * t * t
        + (2.0 * a * a + a * b + 0.25 * b * b - e * a) * t
        + (0.25 * b * b - a * a + e * a - p.bridge_term())
}

/// The cubic with the coefficients as originally published:
/// `e_in²t³ + (e_in·e_out − e·e_in)t² + (2e_in² + e_in·e_out + e_out²/4 + e·e_out)t
///  + (e_out²/4 − e_in² − n_1·e·e_out/(n−n_1))`.
///
/// It does not follow from the modularity comparison it is meant to encode;
/// kept for comparison only.
pub fn published_separation_polynomial(p: &TheoremParams) -> f64 {
    let (a, b, e, t) = (p.inner_edges, p.outer_edges, p.total_edges, p.retained);
    a * a * t * t * t
        + (a * b - e * a) * t * t
        + (2.0 * a * a + a * b + 0.25 * b * b + e * b) * t
        + (0.25 * b * b - a * a - p.bridge_term())
}

/// Outcome of the merge/separation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeConditions {
    /// Partition modularity prefers the merged community.
    pub merged_by_partition: bool,
    /// Local modularity prefers the intact local community alone.
    pub separated_by_local: bool,
}

pub fn theorem1_check(p: &TheoremParams) -> Result<MergeConditions> {
    p.validate()?;
    Ok(MergeConditions {
        merged_by_partition: merge_polynomial(p) < 0.0,
        separated_by_local: separation_polynomial(p) > 0.0,
    })
}

/// Weight removed from hidden-layer internal and external edges when the
/// dominant communities are weakened.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightReduction {
    pub internal: f64,
    pub external: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakeningIncrements {
    /// Both communities weakened separately.
    pub separate: WeightReduction,
    /// The merged community weakened as one.
    pub merged: WeightReduction,
    /// Hidden-layer modularity gain after separate weakening.
    pub delta_q_separate: f64,
    /// Hidden-layer modularity gain after merged weakening.
    pub delta_q_merged: f64,
}

/// Hidden-layer modularity gains under both weakening scenarios.
///
/// The idealized hidden layer consists of equal blocks holding a share `r` of
/// all `e` edges, and removed weight is spread evenly over its blocks. Its
/// modularity is then `W_in/W − 1/b`, so the gain after removing `x_in`
/// internal and `x_out` external weight is
/// `(r·e − x_in)/(e − x_in − x_out) − r`.
pub fn theorem2_check(p: &TheoremParams) -> Result<WeakeningIncrements> {
    p.validate()?;
    if !(p.hidden_share > 0.0 && p.hidden_share < 1.0) {
        return Err(Error::InvalidParameter("hidden share must lie in (0, 1)"));
    }
    if p.dominant_density < p.hidden_density {
        return Err(Error::InvalidParameter("dominant density must not be below hidden density"));
    }
    let (t, r, n1) = (p.retained, p.hidden_share, p.community_size);
    let reduced = (p.dominant_density - p.hidden_density) * (t * t + 1.0) * n1 * n1;
    if reduced >= p.total_edges {
        return Err(Error::InvalidParameter("weakened weight exceeds the subgraph"));
    }
    let merged_block = (t + 1.0) * (t + 1.0);
    let separate = WeightReduction {
        internal: reduced * r,
        external: reduced * (1.0 - r),
    };
    let merged = WeightReduction {
        internal: reduced * 2.0 * t / merged_block + reduced * (t * t + 1.0) / merged_block * r,
        external: reduced * (t * t + 1.0) / merged_block * (1.0 - r),
    };
    let gain = |x: WeightReduction| {
        let e = p.total_edges;
        (r * e - x.internal) / (e - x.internal - x.external) - r
    };
    Ok(WeakeningIncrements {
        separate,
        merged,
        delta_q_separate: gain(separate),
        delta_q_merged: gain(merged),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> TheoremParams {
        TheoremParams {
            node_count: 1000.0,
            community_size: 50.0,
            inner_edges: 400.0,
            outer_edges: 300.0,
            total_edges: 20_000.0,
            retained: 0.5,
            hidden_share: 0.3,
            dominant_density: 0.4,
            hidden_density: 0.1,
        }
    }

    #[test]
    fn no_outgoing_edges_never_merge() {
        let p = TheoremParams {
            outer_edges: 0.0,
            ..base()
        };
        assert!(!theorem1_check(&p).unwrap().merged_by_partition);
    }

    #[test]
    fn threshold_splits_merge_condition() {
        let p = base();
        let root = merge_threshold(&p).unwrap();
        for t in [0.05, 0.2, 0.5, 0.9, 1.0] {
            let q = TheoremParams { retained: t, ..p };
            assert_eq!(theorem1_check(&q).unwrap().merged_by_partition, t < root);
        }
    }

    #[test]
    fn equal_densities_give_zero_gain() {
        let p = TheoremParams {
            dominant_density: 0.2,
            hidden_density: 0.2,
            ..base()
        };
        let out = theorem2_check(&p).unwrap();
        assert_eq!(out.delta_q_separate, 0.0);
        assert_eq!(out.delta_q_merged, 0.0);
    }

    #[test]
    fn rejects_invalid() {
        let p = TheoremParams {
            community_size: 1000.0,
            ..base()
        };
        assert!(theorem1_check(&p).is_err());
        let p = TheoremParams {
            hidden_share: 1.0,
            ..base()
        };
        assert!(theorem2_check(&p).is_err());
    }
}
