//! Streams of small instances: delta-matroids, matroids and ribbon graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::bits::{self, Mask};
use crate::delta::{exchange_failure, DeltaMatroid, SetSystem};
use crate::ribbon::RibbonGraph;

/// Largest ground set enumerated exhaustively.
pub const MAX_EXHAUSTIVE: usize = 4;

/// Largest ground set for [`enumerate_matroids`].
pub const MAX_MATROID: usize = 5;

/// Largest edge and vertex count for [`enumerate_ribbon_graphs`].
pub const MAX_RIBBON: usize = 3;

/// Optional constraints; `None` accepts both values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DeltaFilter {
    pub even: Option<bool>,
    pub connected: Option<bool>,
    pub vf_safe: Option<bool>,
    pub matroid: Option<bool>,
}

impl DeltaFilter {
    pub fn any() -> Self {
        Self::default()
    }

    pub fn even(mut self, v: bool) -> Self {
        self.even = Some(v);
        self
    }

    pub fn connected(mut self, v: bool) -> Self {
        self.connected = Some(v);
        self
    }

    pub fn vf_safe(mut self, v: bool) -> Self {
        self.vf_safe = Some(v);
        self
    }

    pub fn matroid(mut self, v: bool) -> Self {
        self.matroid = Some(v);
        self
    }

    pub fn accepts(&self, d: &DeltaMatroid) -> bool {
        let want = |f: Option<bool>, test: &dyn Fn() -> bool| f.is_none_or(|v| test() == v);
        want(self.even, &|| d.is_even())
            && want(self.matroid, &|| d.is_matroid())
            && want(self.connected, &|| d.is_connected())
            && want(self.vf_safe, &|| d.is_vf_safe().unwrap_or(false))
    }
}

/// Labels `a, b, c, …`.
pub fn ground_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Every delta-matroid on `{a, b, …}` with `n ≤ 4` elements, in increasing
/// order of the family bitmask (bit `F` set when `F` is feasible).
pub fn enumerate_delta_matroids(n: usize, filter: DeltaFilter) -> Result<Vec<DeltaMatroid>, HarnessError> {
    if n > MAX_EXHAUSTIVE {
        return Err(HarnessError::NeedsSampleBudget(n));
    }
    let labels = ground_labels(n);
    let subsets = 1usize << n;
    let mut out = Vec::new();
    for code in 1u64..(1u64 << subsets) {
        let family: Vec<Mask> = (0..subsets as Mask).filter(|&f| code >> f & 1 == 1).collect();
        if exchange_failure(n, &family).is_some() {
            continue;
        }
        let d = DeltaMatroid::from_system_unchecked(SetSystem::from_parts(labels.clone(), family));
        if filter.accepts(&d) {
            out.push(d);
        }
    }
    Ok(out)
}

/// Seeded sample of ribbon-graphic delta-matroids twisted by a random set,
/// for ground sets beyond the exhaustive range.
pub fn sample_delta_matroids(
    n: usize,
    filter: DeltaFilter,
    count: usize,
    seed: u64,
) -> Result<Vec<DeltaMatroid>, HarnessError> {
    if n == 0 || n > crate::ribbon::MAX_EDGES {
        return Err(HarnessError::Bound {
            what: "sampled ground set",
            max: crate::ribbon::MAX_EDGES,
            got: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let attempts = count.saturating_mul(50).max(50);
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let g = random_ribbon_graph(&mut rng, n);
        let twist: Mask = rng.gen_range(0..=bits::full(n));
        let d = g.delta_matroid().twist(twist);
        if filter.accepts(&d) {
            out.push(d);
        }
    }
    Ok(out)
}

/// A ribbon graph with `m` edges: the `2m` half-edges shuffled and cut into
/// a random number of vertices, with random twists.
pub fn random_ribbon_graph<R: Rng>(rng: &mut R, m: usize) -> RibbonGraph {
    let mut halves: Vec<usize> = (0..2 * m).collect();
    halves.shuffle(rng);
    let v = rng.gen_range(1..=m.clamp(1, crate::ribbon::MAX_VERTICES));
    let mut cuts: Vec<usize> = (1..2 * m).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(v - 1).collect();
    cuts.sort_unstable();
    let mut rotation = Vec::with_capacity(v);
    let mut start = 0;
    for c in cuts.into_iter().chain([2 * m]) {
        rotation.push(halves[start..c].to_vec());
        start = c;
    }
    let twisted = (0..m).map(|_| rng.gen()).collect();
    RibbonGraph::from_rotation(ground_labels(m), twisted, rotation).expect("valid rotation")
}

/// Every matroid on `{a, b, …}` with `n ≤ 5` elements as an equicardinal
/// delta-matroid, by rank and then by basis-family bitmask.
pub fn enumerate_matroids(n: usize) -> Result<Vec<DeltaMatroid>, HarnessError> {
    if n > MAX_MATROID {
        return Err(HarnessError::Bound {
            what: "matroid ground set",
            max: MAX_MATROID,
            got: n,
        });
    }
    let labels = ground_labels(n);
    let mut out = Vec::new();
    for k in 0..=n as u32 {
        let layer: Vec<Mask> = bits::submasks(bits::full(n))
            .filter(|s| s.count_ones() == k)
            .collect();
        for code in 1u64..(1u64 << layer.len()) {
            let family: Vec<Mask> = bits::ones(code as Mask).map(|i| layer[i]).collect();
            if exchange_failure(n, &family).is_none() {
                out.push(DeltaMatroid::from_system_unchecked(SetSystem::from_parts(
                    labels.clone(),
                    family,
                )));
            }
        }
    }
    Ok(out)
}

/// All ribbon graphs with edges `a, b, …` (at most `max_e`) and between one
/// and `max_v` vertices, as produced by [`RibbonGraph::enumerate`].
pub fn enumerate_ribbon_graphs(max_v: usize, max_e: usize) -> Result<Vec<RibbonGraph>, HarnessError> {
    if max_v > MAX_RIBBON || max_e > MAX_RIBBON {
        return Err(HarnessError::Bound {
            what: "ribbon graph size",
            max: MAX_RIBBON,
            got: max_v.max(max_e),
        });
    }
    let mut out = Vec::new();
    for v in 1..=max_v {
        for m in 0..=max_e {
            out.extend(RibbonGraph::enumerate(m, v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_element_delta_matroids() {
        let all = enumerate_delta_matroids(1, DeltaFilter::any()).unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(all[0].feasible(), &[0]);
        assert_eq!(all[1].feasible(), &[1]);
        assert_eq!(all[2].feasible(), &[0, 1]);
    }

    #[test]
    fn filters_compose() {
        let even_connected = enumerate_delta_matroids(3, DeltaFilter::any().even(true).connected(true)).unwrap();
        assert_eq!(even_connected.len(), 10);
        assert!(matches!(
            enumerate_delta_matroids(5, DeltaFilter::any()),
            Err(HarnessError::NeedsSampleBudget(5))
        ));
    }

    #[test]
    fn matroid_layers_agree_with_filter() {
        for n in 0..=3 {
            let direct = enumerate_matroids(n).unwrap().len();
            let filtered = enumerate_delta_matroids(n, DeltaFilter::any().matroid(true)).unwrap().len();
            assert_eq!(direct, filtered);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_delta_matroids(5, DeltaFilter::any(), 5, 7).unwrap();
        let b = sample_delta_matroids(5, DeltaFilter::any(), 5, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.iter().all(|d| d.len() == 5 && d.as_set_system().is_delta_matroid()));
    }

    #[test]
    fn ribbon_bounds() {
        assert_eq!(enumerate_ribbon_graphs(1, 1).unwrap().len(), 3);
        assert!(enumerate_ribbon_graphs(4, 1).is_err());
    }
}
