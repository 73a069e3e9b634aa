//! Brute-force point clouds sampling (s)endographs in `X × [0,1]`.

use crate::hyper::directed_by;
use crate::scalar::{int, rat, Rational, Scalar};
use crate::spaces::Universe;

use super::StepFuzzySet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Graph {
    Sendograph,
    Endograph,
}

pub type Cloud<P> = Vec<(P, Rational)>;

/// `{(x, k/res) : x ∈ supp u, k/res ≤ u(x)}`, plus `(x, 0)` for every `x` in
/// `floor` when sampling an endograph.
pub fn graph_cloud<U: Universe>(
    u: &StepFuzzySet<U>,
    which: Graph,
    resolution: u32,
    floor: &[U::Point],
) -> Cloud<U::Point> {
    let res = resolution.max(1) as i64;
    let mut cloud = Vec::new();
    for (x, a) in u.membership() {
        for k in 0..=res {
            let level = rat(k, res);
            if level > *a {
                break;
            }
            cloud.push((x.clone(), level));
        }
    }
    if which == Graph::Endograph {
        for x in floor {
            if !u.membership().contains_key(x) {
                cloud.push((x.clone(), int(0)));
            }
        }
    }
    cloud
}

/// Hausdorff distance between clouds under `max(d(x,y), |α - β|)`.
pub fn cloud_hausdorff<U: Universe>(
    universe: &U,
    a: &Cloud<U::Point>,
    b: &Cloud<U::Point>,
) -> U::Scalar {
    let d = |p: &(U::Point, Rational), q: &(U::Point, Rational)| {
        let gap = U::Scalar::from_rational(&(&p.1 - &q.1));
        let gap = gap.max_of(&U::Scalar::nought().minus(&gap));
        universe.metric(&p.0, &q.0).max_of(&gap)
    };
    let ra: Vec<&(U::Point, Rational)> = a.iter().collect();
    let rb: Vec<&(U::Point, Rational)> = b.iter().collect();
    directed_by(ra.iter().copied(), &rb, d).max_of(&directed_by(rb.iter().copied(), &ra, d))
}

/// Cloud estimate of the sendograph or endograph metric.
pub fn cloud_distance<U: Universe>(
    u: &StepFuzzySet<U>,
    v: &StepFuzzySet<U>,
    which: Graph,
    resolution: u32,
) -> U::Scalar {
    let floor: Vec<U::Point> = u
        .membership()
        .keys()
        .chain(v.membership().keys())
        .cloned()
        .collect();
    let a = graph_cloud(u, which, resolution, &floor);
    let b = graph_cloud(v, which, resolution, &floor);
    cloud_hausdorff(u.universe().as_ref(), &a, &b)
}
