//! Vertex-disjoint stars rooted in side X with leaves in side Y, and
//! families of such forests with pairwise disjoint root sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};
use crate::profile::ConstantsProfile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub root: usize,
    pub leaves: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarForest {
    pub index: usize,
    pub stars: Vec<Star>,
}

impl StarForest {
    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.stars.iter().map(|s| s.root)
    }

    /// Roots in X, leaves in Y and adjacent to their root, every star of
    /// size `star_size`, and no vertex used twice.
    pub fn check(&self, g: &BipartiteGraph, star_size: usize) -> Result<()> {
        let fail = |message: String| Err(Error::Stage { stage: "star_forest", message });
        let mut used = vec![false; g.n()];
        for star in &self.stars {
            if star.root >= g.n() || g.side_of(star.root) != Side::X {
                return fail(format!("root {} is not in X", star.root));
            }
            if star.leaves.len() != star_size {
                return fail(format!("star at {} has {} leaves, expected {star_size}", star.root, star.leaves.len()));
            }
            for &v in std::iter::once(&star.root).chain(&star.leaves) {
                if v >= g.n() || std::mem::replace(&mut used[v], true) {
                    return fail(format!("vertex {v} used twice in forest {}", self.index));
                }
            }
            if let Some(&leaf) = star.leaves.iter().find(|&&l| !g.graph().has_edge(star.root, l)) {
                return fail(format!("leaf {leaf} is not adjacent to root {}", star.root));
            }
        }
        Ok(())
    }
}

/// Greedy forest restricted to live vertices: roots are scanned in
/// ascending id order and each claims its `star_size` lowest-id unused live
/// neighbours, until `target` stars exist or no root qualifies.
fn greedy_forest(g: &BipartiteGraph, live: &[bool], star_size: usize, target: usize) -> StarForest {
    let mut taken = vec![false; g.n()];
    let mut stars = Vec::new();
    for root in 0..g.n() {
        if stars.len() >= target {
            break;
        }
        if !live[root] || g.side_of(root) != Side::X {
            continue;
        }
        let leaves: Vec<usize> =
            g.graph().neighbors(root).iter().copied().filter(|&u| live[u] && !taken[u]).take(star_size).collect();
        if leaves.len() < star_size {
            continue;
        }
        taken[root] = true;
        for &l in &leaves {
            taken[l] = true;
        }
        stars.push(Star { root, leaves });
    }
    StarForest { index: 0, stars }
}

/// Greedy maximal forest of `star_size`-stars, stopping at `target_count`.
/// A short forest is returned as is.
pub fn maximal_star_forest(g: &BipartiteGraph, star_size: usize, target_count: usize) -> Result<StarForest> {
    if star_size == 0 {
        return Err(Error::InvalidParameter("star size must be at least 1".into()));
    }
    Ok(greedy_forest(g, &vec![true; g.n()], star_size, target_count))
}

/// True if no unused live root in X has `star_size` unused live neighbours.
pub fn is_maximal(g: &BipartiteGraph, forest: &StarForest, live: &[bool], star_size: usize) -> bool {
    let mut taken = vec![false; g.n()];
    for star in &forest.stars {
        taken[star.root] = true;
        for &l in &star.leaves {
            taken[l] = true;
        }
    }
    (0..g.n()).filter(|&v| live[v] && !taken[v] && g.side_of(v) == Side::X).all(|v| {
        g.graph().neighbors(v).iter().filter(|&&u| live[u] && !taken[u]).count() < star_size
    })
}

/// Sizes used by [`root_disjoint_family`] for minimum degree `d` on `n`
/// vertices: `(stars per forest, star size, forests)`.
pub fn family_shape(profile: &ConstantsProfile, n: usize, d: usize) -> (usize, usize, usize) {
    let d = d as f64;
    let count = (n as f64 / (profile.star_count_divisor * d)).ceil().max(1.0) as usize;
    let size = (d / profile.star_size_divisor).floor().max(1.0) as usize;
    let forests = (d / profile.forest_count_divisor).floor().max(1.0) as usize;
    (count, size, forests)
}

/// Deletes every live vertex of live degree below `floor`, repeatedly.
fn prune(g: &BipartiteGraph, live: &mut [bool], floor: f64) {
    let graph = g.graph();
    let mut degree: Vec<usize> =
        (0..g.n()).map(|v| graph.neighbors(v).iter().filter(|&&u| live[u]).count()).collect();
    let mut queue: Vec<usize> = (0..g.n()).filter(|&v| live[v] && (degree[v] as f64) < floor).collect();
    while let Some(v) = queue.pop() {
        if !live[v] {
            continue;
        }
        live[v] = false;
        for &u in graph.neighbors(v) {
            if live[u] {
                degree[u] -= 1;
                if (degree[u] as f64) < floor {
                    queue.push(u);
                }
            }
        }
    }
}

/// Root-disjoint family of star forests.
///
/// Round `i` deletes the roots of earlier forests, prunes vertices of
/// degree below `d/4`, then extracts a greedy forest; any round falling
/// short of its star count is an error naming the round.
pub fn root_disjoint_family(g: &BipartiteGraph, profile: &ConstantsProfile) -> Result<Vec<StarForest>> {
    let graph = g.graph();
    if graph.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let d = graph.min_degree();
    if (d as f64) < profile.min_degree_floor {
        return Err(Error::Precondition(format!("minimum degree {d} below floor {}", profile.min_degree_floor)));
    }
    let ratio = graph.regularity_ratio();
    if ratio > profile.k_final {
        return Err(Error::Precondition(format!("graph is {ratio:.3}-almost-regular, need {}", profile.k_final)));
    }
    let (count, size, rounds) = family_shape(profile, g.n(), d);
    let mut used_root = vec![false; g.n()];
    let mut family = Vec::with_capacity(rounds);
    for round in 0..rounds {
        let mut live: Vec<bool> = used_root.iter().map(|&r| !r).collect();
        prune(g, &mut live, d as f64 / 4.0);
        let mut forest = greedy_forest(g, &live, size, count);
        if forest.len() < count {
            return Err(Error::Stage {
                stage: "root_disjoint_family",
                message: format!("round {round}: {} of {count} stars of size {size}", forest.len()),
            });
        }
        forest.index = round;
        for r in forest.roots() {
            used_root[r] = true;
        }
        family.push(forest);
    }
    check_family(g, &family, size)?;
    Ok(family)
}

/// Every forest valid and the root sets pairwise disjoint.
pub fn check_family(g: &BipartiteGraph, family: &[StarForest], star_size: usize) -> Result<()> {
    let mut owner: Vec<Option<usize>> = vec![None; g.n()];
    for forest in family {
        forest.check(g, star_size)?;
        for r in forest.roots() {
            if let Some(prev) = owner[r].replace(forest.index) {
                return Err(Error::Stage {
                    stage: "root_disjoint_family",
                    message: format!("root {r} shared by forests {prev} and {}", forest.index),
                });
            }
        }
    }
    Ok(())
}
