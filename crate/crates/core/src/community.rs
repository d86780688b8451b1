//! Query answers and their ordering.

use serde::{Deserialize, Serialize};

use crate::dyngraph::{DynamicNetwork, Edge, QueryParams, VertexId, Window};

/// Absolute tolerance for comparing reliability scores.
pub const SCORE_EPS: f64 = 1e-9;

/// A vertex set with its induced edges. Both lists are sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
}

impl Subgraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Community {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub interval: Window,
    pub score: f64,
}

impl Community {
    pub fn from_subgraph(sub: Subgraph, interval: Window, score: f64) -> Self {
        Community {
            vertices: sub.vertices,
            edges: sub.edges,
            interval,
            score,
        }
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn duration(&self) -> usize {
        self.interval.len()
    }

    /// Whether `self` should replace `incumbent`: higher score beyond
    /// [`SCORE_EPS`], otherwise longer duration, earlier start, smaller
    /// vertex set, lexicographically smaller vertex list.
    pub fn beats(&self, incumbent: &Community) -> bool {
        if self.score > incumbent.score + SCORE_EPS {
            return true;
        }
        if self.score < incumbent.score - SCORE_EPS {
            return false;
        }
        let key = |c: &Community| {
            (
                std::cmp::Reverse(c.duration()),
                c.interval.start,
                c.size(),
            )
        };
        match key(self).cmp(&key(incumbent)) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => self.vertices < incumbent.vertices,
        }
    }

    /// Independent re-check of the community constraints: `q` is a member
    /// and in every snapshot of the interval the edge set is present with
    /// weight `≥ θ`, spans exactly `vertices`, is connected and has minimum
    /// degree `≥ k`.
    pub fn verify(&self, net: &DynamicNetwork, params: &QueryParams) -> bool {
        if self.vertices.binary_search(&params.q).is_err() {
            return false;
        }
        if !params.window.contains(self.interval.start) || !params.window.contains(self.interval.end) {
            return false;
        }
        let mut deg = vec![0usize; self.vertices.len()];
        let idx = |v: VertexId| self.vertices.binary_search(&v).ok();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (Some(a), Some(b)) = (idx(e.u()), idx(e.v())) else {
                return false;
            };
            deg[a] += 1;
            deg[b] += 1;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        if deg.iter().any(|&d| d < params.k as usize) {
            return false;
        }
        let root = find(&mut parent, 0);
        if (0..self.vertices.len()).any(|i| find(&mut parent, i) != root) {
            return false;
        }
        self.interval.iter().all(|t| {
            let g = net.snapshot(t);
            self.edges
                .iter()
                .all(|e| g.weight(e.u(), e.v()).is_some_and(|w| w >= params.theta))
        })
    }
}

/// Keeps `best` as the preferred of itself and `cand`.
pub(crate) fn offer(best: &mut Option<Community>, cand: Community) {
    match best {
        Some(b) if !cand.beats(b) => {}
        _ => *best = Some(cand),
    }
}

/// Intersection of two sorted, deduplicated edge lists.
pub fn intersect_edges(a: &[Edge], b: &[Edge]) -> Vec<Edge> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(vs: &[u32], start: usize, end: usize, score: f64) -> Community {
        Community {
            vertices: vs.to_vec(),
            edges: vec![],
            interval: Window::new(start, end),
            score,
        }
    }

    #[test]
    fn tie_break_order() {
        assert!(c(&[0, 1], 0, 0, 0.6).beats(&c(&[0, 1, 2], 0, 2, 0.5)));
        // equal score: longer duration wins
        assert!(c(&[0, 1], 0, 2, 0.5).beats(&c(&[0, 1, 2], 0, 1, 0.5 + 1e-12)));
        // then earlier start
        assert!(c(&[0, 1], 0, 1, 0.5).beats(&c(&[0, 1], 1, 2, 0.5)));
        // then smaller set, then lexicographic
        assert!(c(&[0, 1], 0, 1, 0.5).beats(&c(&[0, 1, 2], 0, 1, 0.5)));
        assert!(c(&[0, 1], 0, 1, 0.5).beats(&c(&[0, 2], 0, 1, 0.5)));
        assert!(!c(&[0, 2], 0, 1, 0.5).beats(&c(&[0, 1], 0, 1, 0.5)));
        assert!(!c(&[0, 1], 0, 1, 0.5).beats(&c(&[0, 1], 0, 1, 0.5)));
    }

    #[test]
    fn intersection() {
        let a = [Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)];
        let b = [Edge::new(0, 2), Edge::new(1, 2), Edge::new(2, 3)];
        assert_eq!(intersect_edges(&a, &b), vec![Edge::new(0, 2), Edge::new(1, 2)]);
        assert!(intersect_edges(&a, &[]).is_empty());
    }
}
