//! OPTICS density ordering with flat eps-threshold cluster extraction.
//!
//! Textbook OPTICS over a small point set with a brute-force neighborhood
//! scan (the inputs here are stay centroids, at most a few thousand).
//! Neighborhoods include the query point itself; the core distance of a
//! point with fewer than `min_pts` neighbors is undefined.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geo::PlanarPoint;

/// Reachability ordering plus the clusters extracted at the eps threshold.
#[derive(Debug, Clone)]
pub struct OpticsResult {
    /// Point indices in processing order.
    pub ordering: Vec<usize>,
    /// Reachability distance per point (`f64::INFINITY` = undefined).
    pub reachability: Vec<f64>,
    /// Core distance per point (`f64::INFINITY` = undefined).
    pub core_distance: Vec<f64>,
    /// Clusters as lists of point indices, in order of discovery.
    pub clusters: Vec<Vec<usize>>,
    /// Indices classified as noise.
    pub noise: Vec<usize>,
}

struct Seed {
    reachability: f64,
    index: usize,
}

impl PartialEq for Seed {
    fn eq(&self, other: &Self) -> bool {
        self.reachability == other.reachability && self.index == other.index
    }
}
impl Eq for Seed {}

impl Ord for Seed {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (reachability, index); index ties keep runs deterministic.
        other
            .reachability
            .partial_cmp(&self.reachability)
            .expect("reachability is never NaN")
            .then_with(|| other.index.cmp(&self.index))
    }
}
impl PartialOrd for Seed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn optics(points: &[PlanarPoint], eps: f64, min_pts: usize) -> OpticsResult {
    let n = points.len();
    let mut reachability = vec![f64::INFINITY; n];
    let mut core_distance = vec![f64::INFINITY; n];
    let mut processed = vec![false; n];
    let mut ordering = Vec::with_capacity(n);

    let neighbors_of = |i: usize| -> Vec<(usize, f64)> {
        let mut nb: Vec<(usize, f64)> = (0..n)
            .map(|j| (j, points[i].distance(points[j])))
            .filter(|&(_, d)| d <= eps)
            .collect();
        nb.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        nb
    };

    for start in 0..n {
        if processed[start] {
            continue;
        }
        let nb = neighbors_of(start);
        processed[start] = true;
        ordering.push(start);
        if nb.len() >= min_pts {
            core_distance[start] = nb[min_pts - 1].1;
        } else {
            continue;
        }

        let mut seeds: BinaryHeap<Seed> = BinaryHeap::new();
        update_seeds(
            &nb,
            core_distance[start],
            &processed,
            &mut reachability,
            &mut seeds,
        );

        while let Some(Seed { index: q, .. }) = seeds.pop() {
            if processed[q] {
                // Stale heap entry from a later reachability improvement.
                continue;
            }
            let nb_q = neighbors_of(q);
            processed[q] = true;
            ordering.push(q);
            if nb_q.len() >= min_pts {
                core_distance[q] = nb_q[min_pts - 1].1;
                update_seeds(
                    &nb_q,
                    core_distance[q],
                    &processed,
                    &mut reachability,
                    &mut seeds,
                );
            }
        }
    }

    let (clusters, noise) = extract_clusters(&ordering, &reachability, &core_distance, eps);
    OpticsResult {
        ordering,
        reachability,
        core_distance,
        clusters,
        noise,
    }
}

fn update_seeds(
    neighbors: &[(usize, f64)],
    core_dist: f64,
    processed: &[bool],
    reachability: &mut [f64],
    seeds: &mut BinaryHeap<Seed>,
) {
    for &(o, d) in neighbors {
        if processed[o] {
            continue;
        }
        let new_reach = core_dist.max(d);
        if new_reach < reachability[o] {
            reachability[o] = new_reach;
            seeds.push(Seed {
                reachability: new_reach,
                index: o,
            });
        }
    }
}

/// The DBSCAN-equivalent cut: walking the ordering, a point whose
/// reachability exceeds eps starts a new cluster if it is a core point at
/// eps, and is noise otherwise; any other point joins the current cluster.
fn extract_clusters(
    ordering: &[usize],
    reachability: &[f64],
    core_distance: &[f64],
    eps: f64,
) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut noise: Vec<usize> = Vec::new();
    let mut current: Option<Vec<usize>> = None;

    for &p in ordering {
        if reachability[p] > eps {
            if let Some(done) = current.take() {
                clusters.push(done);
            }
            if core_distance[p] <= eps {
                current = Some(vec![p]);
            } else {
                noise.push(p);
            }
        } else if let Some(cluster) = current.as_mut() {
            cluster.push(p);
        } else {
            // Unreachable in a well-formed ordering, but keep it total.
            noise.push(p);
        }
    }
    if let Some(done) = current.take() {
        clusters.push(done);
    }
    (clusters, noise)
}
